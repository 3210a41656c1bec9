//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;

use classgraph::arith::prime_divisors;
use classgraph::atlas::{atlas_group, builtin_atlas, c5c5_q8};
use classgraph::classifier::{count_p_regular_classes, theorem_a_case, Case, CaseDetails};
use classgraph::graph::{build_graph, is_triangle_free, Shape};
use classgraph::iso::{fingerprint, is_isomorphic, ISO_CAP};
use classgraph::structure::{is_p_separable, p_complement, p_core, quotient, sylow, HallSearchConfig};
use classgraph::verify::{run_corpus, CorpusEntry, PrimeSelection, Status, VerifyConfig};
use classgraph::{center, Group};

type Outcome = Result<(), String>;

fn group(name: &str) -> Group {
    atlas_group(name).expect("atlas entry").group
}

fn ensure(ok: bool, what: impl Into<String>) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn sorted_sizes(g: &Group, p: Option<u64>) -> Vec<u64> {
    let mut s = build_graph(g, p).sizes();
    s.sort();
    s
}

fn cfg() -> HallSearchConfig {
    HallSearchConfig::default()
}

fn semilinear_at_seven() -> Outcome {
    let g = group("GammaL(1,8)");
    let h = p_complement(&g, 7, &cfg()).map_err(|e| e.to_string())?;
    ensure(h.order() == 24, format!("|H| = {}", h.order()))?;
    let involution = (0..h.order()).find(|&i| {
        h.order_of(i) == 2 && h.class_size_of(i) == 3 && {
            let gi = g.index_of(h.element(i)).unwrap();
            g.class_size_of(gi) == 7
        }
    });
    ensure(involution.is_some(), "no involution with class sizes 3 in H and 7 in G")?;
    ensure(!build_graph(&h, None).is_connected(), "graph of H is connected")?;
    ensure(build_graph(&g, Some(7)).is_connected(), "7-regular graph of G is disconnected")
}

fn c7_c6_at_two() -> Outcome {
    let g = group("C7:C6");
    let graph = build_graph(&g, Some(2));
    ensure(sorted_sizes(&g, Some(2)) == [6, 7, 7], format!("sizes {:?}", graph.sizes()))?;
    ensure(graph.edges.len() == 1, format!("{} edges", graph.edges.len()))?;
    ensure(graph.shape == Shape::B, format!("shape {}", graph.shape))
}

fn c3_c4_at_five() -> Outcome {
    let g = group("C3:C4");
    let graph = build_graph(&g, Some(5));
    ensure(sorted_sizes(&g, Some(5)) == [2, 2, 3, 3], format!("sizes {:?}", graph.sizes()))?;
    ensure(graph.shape == Shape::C, format!("shape {}", graph.shape))?;
    let c = theorem_a_case(&g, 5, &cfg()).map_err(|e| e.to_string())?;
    ensure(c.case == Case::Ii, format!("case {}", c.case.label()))?;
    let h = p_complement(&g, 5, &cfg()).map_err(|e| e.to_string())?;
    ensure(center(&h).order() == 2, format!("|Z(H)| = {}", center(&h).order()))
}

fn shape_e_example() -> Outcome {
    let g = group("C2x(Q8:C9)");
    let graph = build_graph(&g, Some(3));
    ensure(graph.sizes() == [6, 6], format!("sizes {:?}", graph.sizes()))?;
    ensure(graph.shape == Shape::E, format!("shape {}", graph.shape))?;
    let c = theorem_a_case(&g, 3, &cfg()).map_err(|e| e.to_string())?;
    ensure(
        c.case == Case::I && c.details == CaseDetails::I { q: 2 },
        format!("case {} {:?}", c.case.label(), c.details),
    )?;
    let k = count_p_regular_classes(&g, 3);
    ensure(k == 6, format!("{k} 3-regular classes"))
}

fn extraspecial_at_two() -> Outcome {
    let g = group("3^(1+2):Q8");
    let graph = build_graph(&g, Some(2));
    ensure(graph.sizes() == [24], format!("sizes {:?}", graph.sizes()))?;
    ensure(graph.shape == Shape::D, format!("shape {}", graph.shape))?;
    let h = p_complement(&g, 2, &cfg()).map_err(|e| e.to_string())?;
    let z = center(&g);
    let meet = h.elements().iter().filter(|x| z.contains(x)).count();
    ensure(meet == 3, format!("|H ∩ Z(G)| = {meet}"))
}

fn shape_f_example() -> Outcome {
    let g = group("(C5xC5):SL(2,3)");
    let graph = build_graph(&g, Some(3));
    ensure(graph.shape == Shape::F, format!("shape {}", graph.shape))?;
    let c = theorem_a_case(&g, 3, &cfg()).map_err(|e| e.to_string())?;
    ensure(c.case == Case::Iii, format!("case {}", c.case.label()))?;
    let h = p_complement(&g, 3, &cfg()).map_err(|e| e.to_string())?;
    let target = c5c5_q8().map_err(|e| e.to_string())?;
    ensure(
        is_isomorphic(&h, &target).map_err(|e| e.to_string())?,
        "p-complement is not (C5xC5):Q8",
    )
}

fn e25_sigma3_at_five() -> Outcome {
    let g = group("E25:Sigma3");
    let graph = build_graph(&g, Some(5));
    ensure(graph.vertex_count() == 2, format!("sizes {:?}", graph.sizes()))?;
    ensure(
        graph.sizes().iter().all(|s| s % 5 == 0),
        format!("sizes {:?}", graph.sizes()),
    )?;
    let q = quotient(&g, &p_core(&g, 5)).map_err(|e| e.to_string())?;
    let s3 = classgraph::constructions::symmetric(3).map_err(|e| e.to_string())?;
    ensure(
        is_isomorphic(&q.group, &s3).map_err(|e| e.to_string())?,
        format!("G/O_5(G) of order {} is not Sigma3", q.group.order()),
    )
}

fn ordinary_triangle_free_list() -> Outcome {
    let expected: BTreeSet<&str> = ["Sigma3", "D10", "A4", "D12", "C3:C4", "C7:C3"].into();
    let found: BTreeSet<String> = builtin_atlas()
        .into_iter()
        .filter(|e| is_triangle_free(&build_graph(&e.group, None)))
        .map(|e| e.name().to_string())
        .collect();
    let found_ref: BTreeSet<&str> = found.iter().map(String::as_str).collect();
    ensure(found_ref == expected, format!("triangle-free: {found:?}"))?;
    ensure(
        !is_triangle_free(&build_graph(&group("Sigma4"), None)),
        "graph of Sigma4 has no triangle",
    )
}

const PROPERTY_CHECKS: [&str; 17] = [
    "class_equation",
    "normal_class_divides",
    "quotient_class_divides",
    "coprime_commuting_split",
    "regular_class_count",
    "components_complete",
    "connected_diameter",
    "coprime_span",
    "pi_number_p",
    "pi_prime_number_p",
    "pi_number_p_complement",
    "pi_prime_number_p_complement",
    "central_part_bound",
    "triangle_free_soluble",
    "case_classification",
    "case_shape_pairing",
    "regular_coset_lift",
];

fn property_suite() -> Outcome {
    let entries: Vec<CorpusEntry> = builtin_atlas()
        .into_iter()
        .map(|e| CorpusEntry {
            group: e.group,
            primes: e.primes,
        })
        .collect();
    let summary = run_corpus(&entries, &PrimeSelection::AllDividing, &VerifyConfig::default());
    let mut failures = Vec::new();
    let mut exercised = BTreeSet::new();
    for r in &summary.reports {
        for c in &r.checks {
            if !PROPERTY_CHECKS.contains(&c.id.as_str()) {
                continue;
            }
            match c.status {
                Status::Fail => failures.push(format!("{}@{} {}: {}", r.group_name, r.prime, c.id, c.detail)),
                Status::Pass => {
                    exercised.insert(c.id.clone());
                }
                Status::Skipped => {}
            }
        }
    }
    ensure(failures.is_empty(), failures.join("; "))?;
    let missing: Vec<&str> = PROPERTY_CHECKS
        .iter()
        .copied()
        .filter(|id| !exercised.contains(*id))
        .collect();
    ensure(missing.is_empty(), format!("never exercised: {missing:?}"))?;
    ensure(summary.pairs >= 80, format!("only {} pairs", summary.pairs))
}

fn oracle_cross_checks() -> Outcome {
    let atlas = builtin_atlas();
    let mut problems = Vec::new();
    for e in &atlas {
        let g = &e.group;
        let n = g.order();
        for x in 0..n {
            let orbit: BTreeSet<usize> = (0..n).map(|y| g.conj(x, y)).collect();
            let cent = (0..n).filter(|&y| g.commute(x, y)).count();
            if orbit.len() * cent != n || orbit.len() as u64 != g.class_size_of(x) {
                problems.push(format!("{}: class of element {x}", e.name()));
            }
        }
        for p in prime_divisors(g.order_u64()) {
            let s = sylow(g, p).order();
            if !is_p_separable(g, p).0 {
                continue;
            }
            match p_complement(g, p, &cfg()) {
                Ok(h) if h.order() * s == n => {}
                Ok(h) => problems.push(format!("{}@{p}: {} * {} != {n}", e.name(), s, h.order())),
                Err(err) => problems.push(format!("{}@{p}: {err}", e.name())),
            }
        }
    }
    for (i, a) in atlas.iter().enumerate() {
        for b in &atlas[i..] {
            let (ga, gb) = (&a.group, &b.group);
            if ga.order() > ISO_CAP || gb.order() > ISO_CAP {
                continue;
            }
            let same_print = fingerprint(ga) == fingerprint(gb);
            let iso = is_isomorphic(ga, gb).map_err(|e| e.to_string())?;
            if iso && !same_print {
                problems.push(format!("{} ≅ {} despite different fingerprints", a.name(), b.name()));
            }
            if std::ptr::eq(a, b) && !iso {
                problems.push(format!("{} not isomorphic to itself", a.name()));
            }
        }
    }
    ensure(problems.is_empty(), problems.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("GammaL(1,8) at p=7: |H| = 24, involution classes 3 and 7, graphs differ in connectivity", semilinear_at_seven),
        ("C7:C6 at p=2: sizes 6,7,7, one edge, shape b", c7_c6_at_two),
        ("C3:C4 at p=5: sizes 2,2,3,3, shape c, case ii with |Z(H)| = 2", c3_c4_at_five),
        ("C2x(Q8:C9) at p=3: two vertices of size 6, shape e, case i with q=2, six 3-regular classes", shape_e_example),
        ("3^(1+2):Q8 at p=2: one vertex of size 24, shape d, |H ∩ Z(G)| = 3", extraspecial_at_two),
        ("(C5xC5):SL(2,3) at p=3: shape f, case iii with H ≅ (C5xC5):Q8", shape_f_example),
        ("E25:Sigma3 at p=5: both vertex sizes divisible by 5, G/O_5(G) ≅ Sigma3", e25_sigma3_at_five),
        ("ordinary graph triangle-free exactly on the six small groups; Sigma4 has a triangle", ordinary_triangle_free_list),
        ("property suite over every atlas (group, prime) pair", property_suite),
        ("oracle cross-checks: class sizes, Sylow and complement orders, isomorphism vs fingerprints", oracle_cross_checks),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(()) => println!("criterion {:>2}: PASS  {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
