use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use classgraph::arith::is_prime;
use classgraph::atlas::{atlas_group, builtin_atlas};
use classgraph::corpus::{parse_corpus, serialize_corpus, GroupSpec};
use classgraph::graph::{build_graph, to_dot};
use classgraph::structure::HallSearchConfig;
use classgraph::verify::{
    run_corpus, verify_pair, CorpusEntry, PrimeSelection, Status, VerificationReport, VerifyConfig,
};
use classgraph::Group;

/// Common-divisor graphs on p-regular conjugacy classes, with structural checks.
#[derive(Parser)]
#[command(name = "classgraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a single (group, prime) pair.
    Analyze {
        #[command(flatten)]
        target: Target,
        /// Also write the class graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        search: Search,
    },
    /// Verify every (group, prime) pair of a corpus.
    Verify {
        /// Corpus file, or directory of `.jsonl` corpus files. Repeatable.
        #[arg(long)]
        corpus: Vec<PathBuf>,
        /// Include the built-in atlas (the default when no corpus is given).
        #[arg(long)]
        atlas: bool,
        /// `all`, `upto:N`, or a comma-separated list.
        #[arg(long, default_value = "all", value_parser = parse_primes)]
        primes: PrimeSelection,
        /// Write the full JSON summary here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Worker threads (defaults to the number of cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Record per-check milliseconds in the report.
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        search: Search,
    },
    /// List the built-in groups or write them out as corpus files.
    Atlas {
        /// List the built-in groups (the default).
        #[arg(long, conflicts_with = "emit")]
        list: bool,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Write the p-regular class graph in DOT format.
    Graph {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        dot: PathBuf,
        #[arg(long, env = "CLASSGRAPH_MAX_ORDER", default_value_t = 20_000)]
        max_order: usize,
    },
}

#[derive(Args)]
struct Target {
    /// A single-record corpus file, or `atlas:NAME`.
    #[arg(long)]
    group: String,
    #[arg(long, value_parser = parse_prime)]
    prime: u64,
}

#[derive(Args)]
struct Search {
    /// Largest group order that will be enumerated.
    #[arg(long, env = "CLASSGRAPH_MAX_ORDER", default_value_t = 20_000)]
    max_order: usize,
    /// Seed for the randomized Hall subgroup search.
    #[arg(long)]
    seed: Option<u64>,
    /// Restarts for the randomized Hall subgroup search.
    #[arg(long)]
    restarts: Option<usize>,
}

impl Search {
    fn config(&self, timings: bool) -> VerifyConfig {
        let mut hall = HallSearchConfig::default();
        if let Some(s) = self.seed {
            hall.seed = s;
        }
        if let Some(r) = self.restarts {
            hall.restarts = r;
        }
        VerifyConfig {
            hall,
            timings,
            ..VerifyConfig::default()
        }
    }
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if is_prime(p) {
        Ok(p)
    } else {
        Err(format!("{p} is not prime"))
    }
}

fn parse_primes(s: &str) -> Result<PrimeSelection, String> {
    if s == "all" {
        return Ok(PrimeSelection::AllDividing);
    }
    if let Some(n) = s.strip_prefix("upto:") {
        return n
            .parse()
            .map(PrimeSelection::UpTo)
            .map_err(|_| format!("'{n}' is not a number"));
    }
    s.split(',')
        .map(parse_prime)
        .collect::<Result<Vec<_>, _>>()
        .map(PrimeSelection::Explicit)
}

/// Primes of interest are carried through corpus files as `prime:N` tags.
fn featured_primes(tags: &[String]) -> Vec<u64> {
    tags.iter()
        .filter_map(|t| t.strip_prefix("prime:")?.parse().ok())
        .collect()
}

fn load_group(source: &str, max_order: usize) -> anyhow::Result<Group> {
    if let Some(name) = source.strip_prefix("atlas:") {
        let entry = atlas_group(name).ok_or_else(|| anyhow!("no atlas group named '{name}'"))?;
        if entry.group.order() > max_order {
            bail!("group order {} exceeds the cap {max_order}", entry.group.order());
        }
        return Ok(entry.group);
    }
    let text = fs::read_to_string(source).with_context(|| format!("reading {source}"))?;
    let specs = parse_corpus(&text).with_context(|| format!("parsing {source}"))?;
    match specs.as_slice() {
        [spec] => Ok(spec.to_group(max_order)?),
        _ => bail!("{source} holds {} records; expected exactly one", specs.len()),
    }
}

fn corpus_files(path: &Path) -> anyhow::Result<Vec<PathBuf>> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .with_context(|| format!("reading {}", path.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
        .collect();
    files.sort();
    Ok(files)
}

fn load_corpus(paths: &[PathBuf], atlas: bool, max_order: usize) -> anyhow::Result<Vec<CorpusEntry>> {
    let mut entries = Vec::new();
    if atlas || paths.is_empty() {
        for e in builtin_atlas() {
            if e.group.order() <= max_order {
                entries.push(CorpusEntry {
                    group: e.group,
                    primes: e.primes,
                });
            }
        }
    }
    for path in paths {
        for file in corpus_files(path)? {
            let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let specs = parse_corpus(&text).with_context(|| format!("parsing {}", file.display()))?;
            for spec in specs {
                let group = spec
                    .to_group(max_order)
                    .with_context(|| format!("building {} from {}", spec.name, file.display()))?;
                entries.push(CorpusEntry {
                    group,
                    primes: featured_primes(&spec.tags),
                });
            }
        }
    }
    Ok(entries)
}

fn print_report(r: &VerificationReport) {
    println!("{} (order {}), p = {}", r.group_name, r.group_order, r.prime);
    println!(
        "hypotheses: p-separable {}, triangle-free {}, p-complement non-central {}",
        r.hypotheses.p_separable, r.hypotheses.triangle_free, r.hypotheses.h_noncentral
    );
    println!(
        "graph: sizes {:?}, edges {:?}, shape {}",
        r.graph_summary.vertex_sizes, r.graph_summary.edges, r.graph_summary.shape
    );
    for c in &r.checks {
        let tag = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        };
        println!("  {tag} {}: {}", c.id, c.detail);
    }
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Analyze {
            target,
            dot,
            json,
            search,
        } => {
            let g = load_group(&target.group, search.max_order)?;
            let report = verify_pair(&g, target.prime, &search.config(false));
            if let Some(path) = dot {
                fs::write(&path, to_dot(&build_graph(&g, Some(target.prime))))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_report(&report);
            }
            Ok(report.count(Status::Fail) == 0)
        }
        Command::Verify {
            corpus,
            atlas,
            primes,
            report,
            jobs,
            timings,
            search,
        } => {
            let entries = load_corpus(&corpus, atlas, search.max_order)?;
            let cfg = search.config(timings);
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(k) = jobs {
                pool = pool.num_threads(k);
            }
            let summary = pool
                .build()
                .context("starting worker threads")?
                .install(|| run_corpus(&entries, &primes, &cfg));
            for r in &summary.reports {
                for c in r.failures() {
                    let flag = if r.counterexample { " [counterexample]" } else { "" };
                    println!("FAIL {}@{} {}{flag}: {}", r.group_name, r.prime, c.id, c.detail);
                }
            }
            println!(
                "{} pairs: {} passed, {} failed, {} skipped",
                summary.pairs, summary.passed, summary.failed, summary.skipped
            );
            if let Some(path) = report {
                let mut text = serde_json::to_string_pretty(&summary)?;
                text.push('\n');
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(!summary.any_failed())
        }
        Command::Atlas { emit, .. } => {
            let atlas = builtin_atlas();
            if let Some(dir) = emit {
                fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                for (i, e) in atlas.iter().enumerate() {
                    let mut tags = e.tags.clone();
                    tags.extend(e.primes.iter().map(|p| format!("prime:{p}")));
                    let text = serialize_corpus(&[GroupSpec::from_group(&e.group, &tags)]);
                    let path = dir.join(format!("{:02}_{}.jsonl", i + 1, sanitize(e.name())));
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                }
                println!("wrote {} corpus files to {}", atlas.len(), dir.display());
            } else {
                for e in &atlas {
                    println!(
                        "{:<18} order {:>4}  degree {:>3}  primes {:?}  tags {}",
                        e.name(),
                        e.group.order(),
                        e.group.degree(),
                        e.primes,
                        e.tags.join(",")
                    );
                }
            }
            Ok(true)
        }
        Command::Graph {
            target,
            dot,
            max_order,
        } => {
            let g = load_group(&target.group, max_order)?;
            fs::write(&dot, to_dot(&build_graph(&g, Some(target.prime))))
                .with_context(|| format!("writing {}", dot.display()))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
