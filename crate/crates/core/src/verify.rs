//! Per-(group, prime) verification runs and corpus batches.
//!
//! Every check records `pass`, `fail` or `skipped`; a skipped check names the
//! hypothesis that did not hold. Reports contain no timing data unless asked
//! for, so identical inputs give byte-identical output.

use std::cell::OnceCell;
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, p_part, p_prime_part, prime_divisors, prime_power, smallest_prime_not_dividing, primes_up_to};
use crate::atlas::{c5c5_sl23, e9_q8};
use crate::classifier::{
    count_p_regular_classes, higman_structure_check, is_frobenius, is_p_nilpotent,
    is_quasi_frobenius, pi_class_size_criterion, theorem_a_case_with, FrobeniusWitness, PiMode,
    QuasiFrobenius, TheoremACase,
};
use crate::constructions::{affine_group, alternating, cyclic, dihedral, symmetric};
use crate::error::Result;
use crate::graph::{build_graph, coprime_class_span_for, diameter, is_triangle_free, span_primes_over_center, ClassGraph, Shape};
use crate::group::{center, Group};
use crate::iso::{is_isomorphic, ISO_CAP};
use crate::structure::{
    complement_primes, hall_mask, indices, is_p_separable, is_soluble, normal_subgroup_masks,
    p_complement, p_core_mask, pi_core_mask, quotient_by_mask, HallSearchConfig, NormalSubgroup,
    Quotient, SeriesCertificate, LATTICE_CAP,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Checks whose failure would contradict the case classification itself.
pub const CLASSIFICATION_CHECKS: [&str; 2] = ["case_classification", "case_shape_pairing"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub p_separable: bool,
    pub triangle_free: bool,
    pub h_noncentral: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub vertex_sizes: Vec<u64>,
    pub edges: Vec<(usize, usize)>,
    pub shape: Shape,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub group_name: String,
    pub group_order: usize,
    pub prime: u64,
    pub hypotheses: Hypotheses,
    pub checks: Vec<Check>,
    pub graph_summary: GraphSummary,
    pub counterexample: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

impl VerificationReport {
    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub hall: HallSearchConfig,
    /// Elements sampled for the divisibility spot-checks on large groups.
    pub sample_limit: usize,
    pub timings: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            hall: HallSearchConfig::default(),
            sample_limit: 500,
            timings: false,
        }
    }
}

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn skip(hypothesis: &str) -> Outcome {
    Outcome::Skip(format!("hypothesis '{hypothesis}' is false"))
}

fn verdict(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        Outcome::Pass(detail.into())
    } else {
        Outcome::Fail(detail.into())
    }
}

fn count(mask: &[bool]) -> usize {
    mask.iter().filter(|&&b| b).count()
}

/// The prime `q` when `g` is a nontrivial elementary abelian q-group.
fn elementary_abelian_prime(g: &Group) -> Option<u64> {
    let (q, _) = prime_power(g.order_u64())?;
    (g.is_abelian() && g.element_orders().iter().skip(1).all(|&o| o == q)).then_some(q)
}

fn primes_of(g: &Group) -> Vec<u64> {
    prime_divisors(g.order_u64()).into_iter().collect()
}

fn is_prime_power_order(n: usize) -> bool {
    n == 1 || prime_power(n as u64).is_some()
}

struct Ctx<'a> {
    g: &'a Group,
    p: u64,
    cfg: &'a VerifyConfig,
    graph: ClassGraph,
    separable: bool,
    certificate: SeriesCertificate,
    center: Group,
    sample: Vec<usize>,
    h: OnceCell<std::result::Result<Group, String>>,
    h_meet_center: OnceCell<usize>,
    frobenius: OnceCell<std::result::Result<Option<FrobeniusWitness>, String>>,
    quasi: OnceCell<std::result::Result<Option<QuasiFrobenius>, String>>,
    normals: OnceCell<std::result::Result<Vec<NormalSubgroup>, String>>,
    quotients: OnceCell<Vec<Quotient>>,
    centralizers: OnceCell<Vec<Vec<usize>>>,
    reduced: OnceCell<Quotient>,
    case: OnceCell<std::result::Result<TheoremACase, String>>,
}

impl<'a> Ctx<'a> {
    fn new(g: &'a Group, p: u64, cfg: &'a VerifyConfig) -> Self {
        let (separable, certificate) = is_p_separable(g, p);
        let n = g.order();
        let sample = if n <= cfg.sample_limit {
            (0..n).collect()
        } else {
            (0..cfg.sample_limit).map(|i| i * n / cfg.sample_limit).collect()
        };
        Self {
            g,
            p,
            cfg,
            graph: build_graph(g, Some(p)),
            separable,
            certificate,
            center: center(g),
            sample,
            h: OnceCell::new(),
            h_meet_center: OnceCell::new(),
            frobenius: OnceCell::new(),
            quasi: OnceCell::new(),
            normals: OnceCell::new(),
            quotients: OnceCell::new(),
            centralizers: OnceCell::new(),
            reduced: OnceCell::new(),
            case: OnceCell::new(),
        }
    }

    fn triangle_free(&self) -> bool {
        is_triangle_free(&self.graph)
    }

    fn noncentral(&self) -> bool {
        self.graph.vertex_count() > 0
    }

    fn h(&self) -> std::result::Result<&Group, String> {
        self.h
            .get_or_init(|| p_complement(self.g, self.p, &self.cfg.hall).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn h_meet_center(&self) -> usize {
        *self.h_meet_center.get_or_init(|| match self.h() {
            Ok(h) => h.elements().iter().filter(|x| self.center.contains(x)).count(),
            Err(_) => 0,
        })
    }

    fn frobenius(&self) -> std::result::Result<Option<&FrobeniusWitness>, String> {
        let h = self.h()?;
        self.frobenius
            .get_or_init(|| is_frobenius(h, &self.cfg.hall).map_err(|e| e.to_string()))
            .as_ref()
            .map(Option::as_ref)
            .map_err(Clone::clone)
    }

    fn quasi(&self) -> std::result::Result<Option<&QuasiFrobenius>, String> {
        let h = self.h()?;
        self.quasi
            .get_or_init(|| is_quasi_frobenius(h, &self.cfg.hall).map_err(|e| e.to_string()))
            .as_ref()
            .map(Option::as_ref)
            .map_err(Clone::clone)
    }

    fn normals(&self) -> std::result::Result<&[NormalSubgroup], String> {
        self.normals
            .get_or_init(|| normal_subgroup_masks(self.g, LATTICE_CAP).map_err(|e| e.to_string()))
            .as_deref()
            .map_err(Clone::clone)
    }

    fn quotients(&self, normals: &[NormalSubgroup]) -> &[Quotient] {
        self.quotients.get_or_init(|| {
            normals
                .iter()
                .map(|n| quotient_by_mask(self.g, &n.mask, "G/N"))
                .collect()
        })
    }

    fn centralizers(&self) -> &[Vec<usize>] {
        self.centralizers.get_or_init(|| {
            self.sample
                .iter()
                .map(|&x| (0..self.g.order()).filter(|&y| self.g.commute(x, y)).collect())
                .collect()
        })
    }

    /// `G/O_p(G)`.
    fn reduced(&self) -> &Quotient {
        self.reduced.get_or_init(|| {
            quotient_by_mask(self.g, &p_core_mask(self.g, self.p), &format!("{}/O_p", self.g.name()))
        })
    }

    fn case(&self) -> std::result::Result<&TheoremACase, String> {
        let h = self.h()?;
        self.case
            .get_or_init(|| theorem_a_case_with(self.g, self.p, h, &self.cfg.hall).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn regular_classes(&self) -> usize {
        count_p_regular_classes(self.g, self.p)
    }

    /// Checks shared by every p-separable instance with a given graph shape.
    fn shape_gate(&self, shape: Shape) -> Option<Outcome> {
        if !self.separable {
            Some(skip("p-separable"))
        } else if self.graph.shape != shape {
            Some(skip(&format!("graph has shape {shape}")))
        } else {
            None
        }
    }
}

fn check_p_separability(ctx: &Ctx) -> Outcome {
    let g = ctx.g;
    let p = ctx.p;
    let terms = &ctx.certificate.terms;
    let labels = &ctx.certificate.step_labels;
    let mut problems = Vec::new();
    for t in terms {
        if !g.is_normal_subgroup(t) {
            problems.push(format!("term of order {} is not normal", t.order()));
        }
    }
    for w in terms.windows(2) {
        if w[1].order() >= w[0].order() || w[0].order() % w[1].order() != 0 {
            problems.push(format!("terms of orders {} and {} do not descend", w[0].order(), w[1].order()));
        }
    }
    let stalls_cleanly = |top: &Group| {
        let mask = g.mask_of_group(top).unwrap_or_default();
        let q = quotient_by_mask(g, &mask, "stalled").group;
        count(&p_core_mask(&q, p)) == 1
            && count(&pi_core_mask(&q, &complement_primes(&q, p))) == 1
            && !q.is_trivial()
    };
    for (i, label) in labels.iter().enumerate() {
        let (upper, lower) = (&terms[i], &terms[i + 1]);
        let factor = (upper.order() / lower.order()) as u64;
        let ok = match label.as_str() {
            "p-group" => p_prime_part(factor, p) == 1,
            "p'-group" => p_part(factor, p) == 1,
            "stalled" => stalls_cleanly(lower),
            _ => false,
        };
        if !ok {
            problems.push(format!("factor of order {factor} is not a {label}"));
        }
    }
    if ctx.separable {
        if terms.last().is_some_and(|t| !t.is_trivial()) {
            problems.push("series does not reach the trivial group".into());
        }
    } else if labels.is_empty() && !stalls_cleanly(&Group::trivial(g.degree())) {
        problems.push("group has a nontrivial p-core or p'-core".into());
    }
    let orders: Vec<String> = terms.iter().map(|t| t.order().to_string()).collect();
    let summary = if ctx.separable {
        format!("separable; series orders [{}]", orders.join(", "))
    } else {
        format!("not separable; series stalls at [{}]", orders.join(", "))
    };
    if problems.is_empty() {
        Outcome::Pass(summary)
    } else {
        Outcome::Fail(problems.join("; "))
    }
}

fn check_class_equation(ctx: &Ctx) -> Outcome {
    let g = ctx.g;
    let n = g.order();
    let total: u64 = g.classes().iter().map(|c| c.size).sum();
    let mut bad = Vec::new();
    for c in g.classes() {
        let r = c.members[0];
        let centralizer = (0..n).filter(|&y| g.commute(r, y)).count() as u64;
        let orbit: BTreeSet<usize> = (0..n).map(|y| g.conj(r, y)).collect();
        if c.size * centralizer != n as u64 || orbit.len() as u64 != c.size {
            bad.push(c.size);
        }
    }
    verdict(
        total == n as u64 && bad.is_empty(),
        format!("{} classes, sizes sum to {total}", g.classes().len()),
    )
}

fn check_p_complement(ctx: &Ctx) -> Outcome {
    if !ctx.separable {
        return skip("p-separable");
    }
    match ctx.h() {
        Ok(h) => {
            let want = p_prime_part(ctx.g.order_u64(), ctx.p);
            let coprime = p_part(h.order_u64(), ctx.p) == 1;
            verdict(
                h.order_u64() == want && coprime && ctx.g.contains_group(h),
                format!("order {} (expected {want})", h.order()),
            )
        }
        Err(e) => Outcome::Fail(e),
    }
}

fn with_normals(ctx: &Ctx, f: impl FnOnce(&[NormalSubgroup]) -> Outcome) -> Outcome {
    match ctx.normals() {
        Ok(normals) => f(normals),
        Err(_) => skip(&format!("normal subgroup lattice has at most {LATTICE_CAP} members")),
    }
}

fn check_normal_class_divides(ctx: &Ctx) -> Outcome {
    with_normals(ctx, |normals| {
        let g = ctx.g;
        let cents = ctx.centralizers();
        let (mut checked, mut bad) = (0, 0);
        for n in normals {
            for (k, &x) in ctx.sample.iter().enumerate() {
                if !n.mask[x] {
                    continue;
                }
                let inside = cents[k].iter().filter(|&&y| n.mask[y]).count();
                checked += 1;
                if g.class_size_of(x) % (n.order / inside) as u64 != 0 {
                    bad += 1;
                }
            }
        }
        verdict(bad == 0, format!("{checked} pairs over {} normal subgroups, {bad} violations", normals.len()))
    })
}

fn check_quotient_class_divides(ctx: &Ctx) -> Outcome {
    with_normals(ctx, |normals| {
        let g = ctx.g;
        let (mut checked, mut bad) = (0, 0);
        for q in ctx.quotients(normals) {
            for &x in &ctx.sample {
                checked += 1;
                if g.class_size_of(x) % q.group.class_size_of(q.projection[x]) != 0 {
                    bad += 1;
                }
            }
        }
        verdict(bad == 0, format!("{checked} pairs over {} quotients, {bad} violations", normals.len()))
    })
}

fn check_regular_coset_lift(ctx: &Ctx) -> Outcome {
    with_normals(ctx, |normals| {
        let g = ctx.g;
        let p = ctx.p;
        let mut bad = 0;
        let mut checked = 0;
        for q in ctx.quotients(normals) {
            let mut lifted = vec![false; q.group.order()];
            for x in 0..g.order() {
                if g.order_of(x) % p != 0 {
                    lifted[q.projection[x]] = true;
                }
            }
            for y in 0..q.group.order() {
                if q.group.order_of(y) % p != 0 {
                    checked += 1;
                    if !lifted[y] {
                        bad += 1;
                    }
                }
            }
        }
        verdict(bad == 0, format!("{checked} p-regular cosets, {bad} without a p-regular lift"))
    })
}

fn check_coprime_commuting_split(ctx: &Ctx) -> Outcome {
    let g = ctx.g;
    let n = g.order();
    let mut bad = 0;
    let mut splits = 0;
    for &x in &ctx.sample {
        let o = g.order_of(x);
        for r in prime_divisors(o) {
            let or = p_part(o, r);
            if or == o {
                continue;
            }
            // generators of <x_r> and <x_{r'}>
            let a = g.pow(x, o / or);
            let b = g.pow(x, or);
            splits += 1;
            let cx = (0..n).filter(|&y| g.commute(x, y)).count();
            let cab = (0..n).filter(|&y| g.commute(a, y) && g.commute(b, y)).count();
            let sx = g.class_size_of(x);
            if cx != cab || sx % g.class_size_of(a) != 0 || sx % g.class_size_of(b) != 0 {
                bad += 1;
            }
        }
    }
    let mut pairs = 0;
    for (i, &x) in ctx.sample.iter().enumerate() {
        for &y in &ctx.sample[i + 1..] {
            if gcd(g.order_of(x), g.order_of(y)) != 1 || !g.commute(x, y) {
                continue;
            }
            pairs += 1;
            let s = g.class_size_of(g.mul(x, y));
            if s % g.class_size_of(x) != 0 || s % g.class_size_of(y) != 0 {
                bad += 1;
            }
        }
    }
    verdict(bad == 0, format!("{splits} prime-part splits, {pairs} commuting coprime pairs, {bad} violations"))
}

fn check_regular_class_count(ctx: &Ctx) -> Outcome {
    let here = ctx.regular_classes();
    let there = count_p_regular_classes(&ctx.reduced().group, ctx.p);
    verdict(here == there, format!("{here} p-regular classes in G, {there} in G/O_p(G)"))
}

fn check_graph_construction(ctx: &Ctx) -> Outcome {
    let g = ctx.g;
    let graph = &ctx.graph;
    let expected: Vec<usize> = g
        .classes()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_central && c.is_p_regular(ctx.p))
        .map(|(i, _)| i)
        .collect();
    let sizes = graph.sizes();
    let mut edges = Vec::new();
    for i in 0..sizes.len() {
        for j in i + 1..sizes.len() {
            if gcd(sizes[i], sizes[j]) > 1 {
                edges.push((i, j));
            }
        }
    }
    let covered: usize = graph.components.iter().map(Vec::len).sum();
    verdict(
        expected == graph.class_indices && edges == graph.edges && covered == sizes.len(),
        format!("{} vertices, {} edges, shape {}", sizes.len(), edges.len(), graph.shape),
    )
}

fn check_components_complete(ctx: &Ctx) -> Outcome {
    if !ctx.separable {
        return skip("p-separable");
    }
    let graph = &ctx.graph;
    if graph.components.len() < 2 {
        return skip("graph is disconnected");
    }
    let complete = graph
        .components
        .iter()
        .all(|c| c.iter().all(|&a| c.iter().all(|&b| a == b || graph.adjacent(a, b))));
    verdict(
        graph.components.len() == 2 && complete,
        format!("{} components, complete: {complete}", graph.components.len()),
    )
}

fn check_connected_diameter(ctx: &Ctx) -> Outcome {
    if !ctx.separable {
        return skip("p-separable");
    }
    if !ctx.noncentral() {
        return skip("graph has a vertex");
    }
    match diameter(&ctx.graph) {
        Some(d) => verdict(d <= 3, format!("diameter {d}")),
        None => skip("graph is connected"),
    }
}

/// Quasi-Frobenius with abelian kernel and complements, and `Z(H) = H ∩ Z(G)`.
fn quasi_frobenius_facts(ctx: &Ctx) -> std::result::Result<(bool, String), String> {
    let h = ctx.h()?;
    let zh = center(h).order();
    let meet = ctx.h_meet_center();
    match ctx.quasi()? {
        None => Ok((false, format!("p-complement of order {} is not quasi-Frobenius", h.order()))),
        Some(qf) => {
            let w = &qf.preimages;
            let ok = w.kernel_abelian && w.complement_abelian && zh == meet;
            Ok((
                ok,
                format!(
                    "kernel {} (abelian: {}), complement {} (abelian: {}), |Z(H)| = {zh}, |H ∩ Z(G)| = {meet}",
                    w.kernel.order(),
                    w.kernel_abelian,
                    w.complement.order(),
                    w.complement_abelian
                ),
            ))
        }
    }
}

fn check_disconnected_structure(ctx: &Ctx) -> Outcome {
    if !ctx.separable {
        return skip("p-separable");
    }
    let graph = &ctx.graph;
    if graph.components.len() < 2 {
        return skip("graph is disconnected");
    }
    let g = ctx.g;
    let p = ctx.p;
    let max = graph.sizes().into_iter().max().unwrap_or(1);
    let b0 = graph.vertices.iter().position(|v| v.size == max).unwrap_or(0);
    let comp = graph.components.iter().find(|c| c.contains(&b0)).cloned().unwrap_or_default();
    let pi0: BTreeSet<u64> = comp.iter().flat_map(|&v| graph.vertices[v].prime_support.clone()).collect();
    let (ok, detail) = match quasi_frobenius_facts(ctx) {
        Ok(x) => x,
        Err(e) => return Outcome::Fail(e),
    };
    if !pi0.contains(&p) {
        let nilpotent = is_p_nilpotent(g, p);
        let centralised = match ctx.quasi() {
            Ok(Some(qf)) => {
                let gens = qf.preimages.complement.generators();
                let cent = (0..g.order())
                    .filter(|&y| gens.iter().all(|c| {
                        let ci = g.index_of(c).expect("complement lies in G");
                        g.commute(ci, y)
                    }))
                    .count();
                p_part(cent as u64, p) == p_part(g.order_u64(), p)
            }
            _ => false,
        };
        return verdict(
            ok && nilpotent && centralised,
            format!("p outside the component primes; p-nilpotent: {nilpotent}; complement centralised by a Sylow p-subgroup: {centralised}; {detail}"),
        );
    }
    let rest: BTreeSet<u64> = pi0.iter().copied().filter(|&r| r != p).collect();
    let abelian_hall = || {
        hall_mask(g, &rest, &ctx.cfg.hall)
            .map(|m| g.subgroup_from_indices(&indices(&m), "Hall").is_abelian())
            .unwrap_or(false)
    };
    if pi0.len() < 3 && !abelian_hall() {
        return Outcome::Skip(format!(
            "hypothesis 'component primes number at least 3 or Hall {rest:?}-subgroups are abelian' is false (open case)"
        ));
    }
    verdict(ok, format!("p among the component primes {pi0:?}; {detail}"))
}

fn check_coprime_span(ctx: &Ctx) -> Outcome {
    if !ctx.separable {
        return skip("p-separable");
    }
    if !ctx.noncentral() {
        return skip("graph has a vertex");
    }
    let g = ctx.g;
    let p = ctx.p;
    let graph = &ctx.graph;
    let max = graph.sizes().into_iter().max().unwrap();
    let z = ctx.center.order_u64();
    let mut problems = Vec::new();
    let mut orders = Vec::new();
    for (v, vertex) in graph.vertices.iter().enumerate().filter(|(_, v)| v.size == max) {
        let span = match coprime_class_span_for(g, p, graph.class_indices[v]) {
            Ok(s) => s,
            Err(e) => return Outcome::Fail(e.to_string()),
        };
        let s = &span.subgroup;
        orders.push(s.order());
        let central_inside = (0..g.order())
            .filter(|&x| g.order_of(x) % p != 0 && ctx.center.contains(g.element(x)))
            .all(|x| span.mask[x]);
        let primes_ok = span_primes_over_center(&span, z, p)
            .iter()
            .all(|r| vertex.prime_support.contains(r));
        let checks = [
            (s.is_abelian(), "abelian"),
            (g.is_normal_subgroup(s), "normal"),
            (s.order_u64() % p != 0, "of p'-order"),
            (central_inside, "contains Z(G)_p'"),
            (primes_ok, "has primes over Z(G)_p' inside those of the class size"),
        ];
        for (ok, what) in checks {
            if !ok {
                problems.push(format!("span against class {v} is not {what}"));
            }
        }
    }
    verdict(problems.is_empty(), if problems.is_empty() {
        format!("span orders {orders:?}")
    } else {
        problems.join("; ")
    })
}

fn check_pi_criterion(ctx: &Ctx, pi: &BTreeSet<u64>, mode: PiMode) -> Outcome {
    if !ctx.separable {
        return skip("p-separable");
    }
    match pi_class_size_criterion(ctx.g, pi, mode, &ctx.cfg.hall) {
        Ok((lhs, rhs)) => verdict(lhs == rhs, format!("class-size side {lhs}, structure side {rhs}")),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn triangle_gate(ctx: &Ctx, need_vertex: bool) -> Option<Outcome> {
    if !ctx.separable {
        Some(skip("p-separable"))
    } else if !ctx.triangle_free() {
        Some(skip("graph is triangle-free"))
    } else if need_vertex && !ctx.noncentral() {
        Some(skip("p-complement is non-central"))
    } else {
        None
    }
}

fn check_triangle_free_soluble(ctx: &Ctx) -> Outcome {
    if let Some(o) = triangle_gate(ctx, false) {
        return o;
    }
    verdict(is_soluble(ctx.g).0, "group is soluble")
}

fn check_central_part_bound(ctx: &Ctx) -> Outcome {
    if let Some(o) = triangle_gate(ctx, true) {
        return o;
    }
    let h = match ctx.h() {
        Ok(h) => h,
        Err(e) => return Outcome::Fail(e),
    };
    if is_prime_power_order(h.order()) {
        return skip("p-complement order is not a prime power");
    }
    let meet = ctx.h_meet_center();
    verdict(meet <= 2, format!("|H ∩ Z(G)| = {meet}"))
}

fn check_case_classification(ctx: &Ctx) -> Outcome {
    if let Some(o) = triangle_gate(ctx, true) {
        return o;
    }
    match ctx.case() {
        Ok(c) => Outcome::Pass(format!("case {}, shape {}", c.case.label(), c.shape)),
        Err(e) => Outcome::Fail(e),
    }
}

fn check_case_shape_pairing(ctx: &Ctx) -> Outcome {
    if let Some(o) = triangle_gate(ctx, true) {
        return o;
    }
    match ctx.case() {
        Ok(c) => verdict(
            c.pairing_holds(),
            format!("case {} with shape {}", c.case.label(), c.shape),
        ),
        Err(e) => Outcome::Fail(e),
    }
}

fn check_disconnected_quasi_frobenius(ctx: &Ctx) -> Outcome {
    if let Some(o) = triangle_gate(ctx, true) {
        return o;
    }
    if ctx.graph.components.len() < 2 {
        return skip("graph is disconnected");
    }
    let (ok, detail) = match quasi_frobenius_facts(ctx) {
        Ok(x) => x,
        Err(e) => return Outcome::Fail(e),
    };
    let h = ctx.h().expect("computed above");
    let primes = primes_of(h);
    let zh = center(h).order();
    verdict(
        ok && primes.len() == 2 && !primes.contains(&ctx.p) && zh <= 2,
        format!("primes of H {primes:?}; {detail}"),
    )
}

/// Membership of `G/O_p(G)` among named candidates of matching order.
enum Membership {
    Yes(String),
    No(usize),
    TooLarge,
}

type Candidate = (String, usize, Box<dyn Fn() -> Result<Group>>);

fn reduced_membership(ctx: &Ctx, candidates: Vec<Candidate>) -> Membership {
    let q = &ctx.reduced().group;
    let mut too_large = false;
    for (name, order, build) in candidates {
        if order != q.order() {
            continue;
        }
        if order > ISO_CAP {
            too_large = true;
            continue;
        }
        if let Ok(c) = build() {
            if is_isomorphic(q, &c).unwrap_or(false) {
                return Membership::Yes(name);
            }
        }
    }
    if too_large {
        Membership::TooLarge
    } else {
        Membership::No(q.order())
    }
}

fn membership_outcome(m: Membership) -> Outcome {
    match m {
        Membership::Yes(name) => Outcome::Pass(format!("G/O_p(G) ≅ {name}")),
        Membership::No(order) => Outcome::Fail(format!("G/O_p(G) of order {order} matches no listed group")),
        Membership::TooLarge => Outcome::Skip(
            "hypothesis 'candidate within the isomorphism cap' is false (quotient-check skipped, parametric family)".into(),
        ),
    }
}

fn affine_candidate(name: String, q: u64, mult: u64, frob: bool) -> Candidate {
    let label = name.clone();
    (
        name,
        (q * mult * if frob { u64::from(prime_power(q).map_or(1, |(_, k)| k)) } else { 1 }) as usize,
        Box::new(move || affine_group(q as usize, mult as usize, frob, &label)),
    )
}

fn powers(p: u64, limit: u64) -> impl Iterator<Item = u64> {
    std::iter::successors(Some(p), move |&x| x.checked_mul(p)).take_while(move |&x| x <= limit)
}

fn check_shape_a_structure(ctx: &Ctx) -> Outcome {
    if let Some(o) = ctx.shape_gate(Shape::A) {
        return o;
    }
    let w = match ctx.frobenius() {
        Ok(Some(w)) => w,
        Ok(None) => return Outcome::Fail("p-complement is not Frobenius".into()),
        Err(e) => return Outcome::Fail(e),
    };
    let q = elementary_abelian_prime(&w.kernel);
    let k = ctx.regular_classes();
    let meet = ctx.h_meet_center();
    verdict(
        q.is_some_and(|q| q % 2 == 1 && q != ctx.p) && w.complement.order() == 2 && k == 3 && meet == 1,
        format!(
            "kernel order {} (elementary abelian prime {q:?}), complement order {}, {k} p-regular classes, |H ∩ Z(G)| = {meet}",
            w.kernel.order(),
            w.complement.order()
        ),
    )
}

fn check_shape_a_quotient(ctx: &Ctx) -> Outcome {
    if let Some(o) = ctx.shape_gate(Shape::A) {
        return o;
    }
    let p = ctx.p;
    let order = ctx.reduced().group.order() as u64;
    let mut candidates: Vec<Candidate> = Vec::new();
    if p != 2 && p != 3 {
        candidates.push(("Sigma3".into(), 6, Box::new(|| symmetric(3))));
    }
    if p != 2 {
        for pn in powers(p, order) {
            let m = 2 * pn + 1;
            if is_prime(m) {
                candidates.push(affine_candidate(format!("C{m}:(C2xC{pn})"), m, m - 1, false));
            } else if prime_power(m).is_some_and(|(b, _)| b == 3) {
                candidates.push(affine_candidate(format!("E{m}:(C2xC{pn})"), m, m - 1, false));
            }
        }
    }
    membership_outcome(reduced_membership(ctx, candidates))
}

fn check_shape_b_structure(ctx: &Ctx) -> Outcome {
    if let Some(o) = ctx.shape_gate(Shape::B) {
        return o;
    }
    let w = match ctx.frobenius() {
        Ok(Some(w)) => w,
        Ok(None) => return Outcome::Fail("p-complement is not Frobenius".into()),
        Err(e) => return Outcome::Fail(e),
    };
    let primes = primes_of(ctx.h().expect("computed above"));
    verdict(
        primes.len() == 2 && !primes.contains(&ctx.p) && w.kernel_abelian && w.complement_abelian,
        format!(
            "Frobenius on primes {primes:?}, kernel {} (abelian: {}), complement {} (abelian: {})",
            w.kernel.order(),
            w.kernel_abelian,
            w.complement.order(),
            w.complement_abelian
        ),
    )
}

fn check_shape_b_quotient(ctx: &Ctx) -> Outcome {
    if let Some(o) = ctx.shape_gate(Shape::B) {
        return o;
    }
    let p = ctx.p;
    if p == 2 {
        return skip("p is odd");
    }
    let order = ctx.reduced().group.order() as u64;
    let mut candidates: Vec<Candidate> = Vec::new();
    if p != 3 {
        candidates.push(("A4".into(), 12, Box::new(|| alternating(4))));
    }
    if p != 5 {
        candidates.push(("D10".into(), 10, Box::new(|| dihedral(10))));
    }
    for ps in powers(p, order) {
        let m = 4 * ps + 1;
        if prime_power(m).is_some() {
            candidates.push(affine_candidate(format!("E{m}:(C2xC{ps})"), m, 2 * ps, false));
        }
    }
    if p == 5 {
        candidates.push(affine_candidate("E16:C15".into(), 16, 15, false));
    }
    membership_outcome(reduced_membership(ctx, candidates))
}

fn check_shape_c_structure(ctx: &Ctx) -> Outcome {
    if let Some(o) = ctx.shape_gate(Shape::C) {
        return o;
    }
    let (ok, detail) = match quasi_frobenius_facts(ctx) {
        Ok(x) => x,
        Err(e) => return Outcome::Fail(e),
    };
    let h = ctx.h().expect("computed above");
    let primes = primes_of(h);
    let zh = center(h).order();
    let k = ctx.regular_classes();
    verdict(
        ok && primes.len() == 2 && !primes.contains(&ctx.p) && zh <= 2 && (k == 5 || k == 6),
        format!("primes of H {primes:?}, {k} p-regular classes; {detail}"),
    )
}

fn check_shape_d_structure(ctx: &Ctx) -> Outcome {
    if let Some(o) = ctx.shape_gate(Shape::D) {
        return o;
    }
    let g = ctx.g;
    let p = ctx.p;
    if g.order_u64() % p != 0 {
        return skip("p divides |G|");
    }
    let h = match ctx.h() {
        Ok(h) => h,
        Err(e) => return Outcome::Fail(e),
    };
    let primes = primes_of(g);
    let two_primes = primes.len() == 2 && primes[0] == 2 && primes.contains(&p);
    let meet: Vec<bool> = h.elements().iter().map(|x| ctx.center.contains(x)).collect();
    let bar = quotient_by_mask(h, &meet, "H/(H∩Z)").group;
    let elementary = elementary_abelian_prime(&bar);
    verdict(
        two_primes && elementary.is_some(),
        format!(
            "primes of G {primes:?}; H/(H ∩ Z(G)) has order {} (elementary abelian prime {elementary:?})",
            bar.order()
        ),
    )
}

fn check_shape_d_abelian_quotients(ctx: &Ctx) -> Outcome {
    if let Some(o) = ctx.shape_gate(Shape::D) {
        return o;
    }
    let g = ctx.g;
    let p = ctx.p;
    if g.order_u64() % p != 0 {
        return skip("p divides |G|");
    }
    let h = match ctx.h() {
        Ok(h) => h,
        Err(e) => return Outcome::Fail(e),
    };
    let order = ctx.reduced().group.order() as u64;
    let mut candidates: Vec<Candidate> = Vec::new();
    if p != 2 {
        candidates.push(("C2".into(), 2, Box::new(|| cyclic(2))));
    } else {
        candidates.push(affine_candidate("E9:C8".into(), 9, 8, false));
        candidates.push(("E9:Q8".into(), 72, Box::new(e9_q8)));
        candidates.push(affine_candidate("E9:SD16".into(), 9, 8, true));
        for two_n in powers(2, order) {
            if is_prime(two_n + 1) {
                candidates.push(affine_candidate(format!("C{}:C{two_n}", two_n + 1), two_n + 1, two_n, false));
            }
        }
    }
    if let Some(two_n) = powers(2, order).find(|&t| t == p + 1) {
        candidates.push(affine_candidate(format!("E{two_n}:C{p}"), two_n, p, false));
    }
    let abelian = h.is_abelian();
    match reduced_membership(ctx, candidates) {
        Membership::TooLarge => membership_outcome(Membership::TooLarge),
        Membership::Yes(name) => verdict(abelian, format!("H abelian: {abelian}; G/O_p(G) ≅ {name}")),
        Membership::No(order) => verdict(
            !abelian,
            format!("H abelian: {abelian}; G/O_p(G) of order {order} is not listed"),
        ),
    }
}

fn check_shape_e_structure(ctx: &Ctx) -> Outcome {
    if let Some(o) = ctx.shape_gate(Shape::E) {
        return o;
    }
    let h = match ctx.h() {
        Ok(h) => h,
        Err(e) => return Outcome::Fail(e),
    };
    if let Some((q, _)) = prime_power(h.order_u64()) {
        return verdict(q != ctx.p, format!("H is a {q}-group"));
    }
    let w = match ctx.frobenius() {
        Ok(Some(w)) => w,
        Ok(None) => return Outcome::Fail("p-complement is neither a prime-power group nor Frobenius".into()),
        Err(e) => return Outcome::Fail(e),
    };
    let q = elementary_abelian_prime(&w.kernel);
    let r = w.complement.order_u64();
    let k = ctx.regular_classes();
    verdict(
        q.is_some_and(|q| q != ctx.p) && is_prime(r) && r != ctx.p && k == 3,
        format!(
            "Frobenius, kernel order {} (elementary abelian prime {q:?}), complement order {r}, {k} p-regular classes",
            w.kernel.order()
        ),
    )
}

fn check_shape_f_quotient(ctx: &Ctx) -> Outcome {
    if let Some(o) = ctx.shape_gate(Shape::F) {
        return o;
    }
    if ctx.p != 3 {
        return Outcome::Fail(format!("shape f with p = {}", ctx.p));
    }
    let candidates: Vec<Candidate> = vec![("(C5xC5):SL(2,3)".into(), 600, Box::new(c5c5_sl23))];
    membership_outcome(reduced_membership(ctx, candidates))
}

fn prime_power_gate<'c>(ctx: &'c Ctx<'_>) -> std::result::Result<&'c Group, Outcome> {
    if !ctx.separable {
        return Err(skip("p-separable"));
    }
    let h = ctx.h().map_err(Outcome::Fail)?;
    if h.element_orders().iter().any(|&o| o > 1 && prime_power(o).is_none()) {
        return Err(skip("every element of the p-complement has prime-power order"));
    }
    Ok(h)
}

fn check_prime_power_complement(ctx: &Ctx) -> Outcome {
    if let Some(o) = triangle_gate(ctx, false) {
        return o;
    }
    let h = match prime_power_gate(ctx) {
        Ok(h) => h,
        Err(o) => return o,
    };
    if is_prime_power_order(h.order()) {
        return Outcome::Pass(format!("H has prime-power order {}", h.order()));
    }
    let primes = primes_of(h);
    match ctx.frobenius() {
        Ok(Some(w)) => verdict(
            primes.len() == 2 && !primes.contains(&ctx.p),
            format!("Frobenius on primes {primes:?}, kernel order {}", w.kernel.order()),
        ),
        Ok(None) => Outcome::Fail("p-complement is not Frobenius".into()),
        Err(e) => Outcome::Fail(e),
    }
}

fn check_higman_structure(ctx: &Ctx) -> Outcome {
    let h = match prime_power_gate(ctx) {
        Ok(h) => h,
        Err(o) => return o,
    };
    if !is_soluble(h).0 {
        return skip("p-complement is soluble");
    }
    match higman_structure_check(h) {
        Ok(r) => verdict(
            r.holds(),
            format!("t = {:?}, core order {}, quotient {:?}", r.t, r.core_order, r.quotient),
        ),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

struct Recorder {
    checks: Vec<Check>,
    timings: Option<BTreeMap<String, u64>>,
}

impl Recorder {
    fn run(&mut self, id: &str, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let (status, detail) = match f() {
            Outcome::Pass(d) => (Status::Pass, d),
            Outcome::Fail(d) => (Status::Fail, d),
            Outcome::Skip(d) => (Status::Skipped, d),
        };
        if let Some(t) = self.timings.as_mut() {
            t.insert(id.to_string(), start.elapsed().as_millis() as u64);
        }
        self.checks.push(Check {
            id: id.to_string(),
            status,
            detail,
        });
    }
}

/// Runs every applicable check for `(g, p)`. Failures land in the report.
pub fn verify_pair(g: &Group, p: u64, cfg: &VerifyConfig) -> VerificationReport {
    let ctx = Ctx::new(g, p, cfg);
    let mut rec = Recorder {
        checks: Vec::new(),
        timings: cfg.timings.then(BTreeMap::new),
    };
    let just_p: BTreeSet<u64> = [p].into();
    let not_p = complement_primes(g, p);

    rec.run("p_separability", || check_p_separability(&ctx));
    rec.run("class_equation", || check_class_equation(&ctx));
    rec.run("p_complement", || check_p_complement(&ctx));
    rec.run("normal_class_divides", || check_normal_class_divides(&ctx));
    rec.run("quotient_class_divides", || check_quotient_class_divides(&ctx));
    rec.run("regular_coset_lift", || check_regular_coset_lift(&ctx));
    rec.run("coprime_commuting_split", || check_coprime_commuting_split(&ctx));
    rec.run("regular_class_count", || check_regular_class_count(&ctx));
    rec.run("graph_construction", || check_graph_construction(&ctx));
    rec.run("components_complete", || check_components_complete(&ctx));
    rec.run("connected_diameter", || check_connected_diameter(&ctx));
    rec.run("disconnected_structure", || check_disconnected_structure(&ctx));
    rec.run("coprime_span", || check_coprime_span(&ctx));
    rec.run("pi_number_p", || check_pi_criterion(&ctx, &just_p, PiMode::PiNumber));
    rec.run("pi_prime_number_p", || check_pi_criterion(&ctx, &just_p, PiMode::PiPrimeNumber));
    rec.run("pi_number_p_complement", || check_pi_criterion(&ctx, &not_p, PiMode::PiNumber));
    rec.run("pi_prime_number_p_complement", || {
        check_pi_criterion(&ctx, &not_p, PiMode::PiPrimeNumber)
    });
    rec.run("triangle_free_soluble", || check_triangle_free_soluble(&ctx));
    rec.run("central_part_bound", || check_central_part_bound(&ctx));
    rec.run("case_classification", || check_case_classification(&ctx));
    rec.run("case_shape_pairing", || check_case_shape_pairing(&ctx));
    rec.run("disconnected_quasi_frobenius", || check_disconnected_quasi_frobenius(&ctx));
    rec.run("shape_a_structure", || check_shape_a_structure(&ctx));
    rec.run("shape_a_quotient", || check_shape_a_quotient(&ctx));
    rec.run("shape_b_structure", || check_shape_b_structure(&ctx));
    rec.run("shape_b_quotient", || check_shape_b_quotient(&ctx));
    rec.run("shape_c_structure", || check_shape_c_structure(&ctx));
    rec.run("shape_d_structure", || check_shape_d_structure(&ctx));
    rec.run("shape_d_abelian_quotients", || check_shape_d_abelian_quotients(&ctx));
    rec.run("shape_e_structure", || check_shape_e_structure(&ctx));
    rec.run("shape_f_quotient", || check_shape_f_quotient(&ctx));
    rec.run("prime_power_complement", || check_prime_power_complement(&ctx));
    rec.run("higman_structure", || check_higman_structure(&ctx));

    let counterexample = rec
        .checks
        .iter()
        .any(|c| c.status == Status::Fail && CLASSIFICATION_CHECKS.contains(&c.id.as_str()));
    VerificationReport {
        schema_version: SCHEMA_VERSION,
        group_name: g.name().to_string(),
        group_order: g.order(),
        prime: p,
        hypotheses: Hypotheses {
            p_separable: ctx.separable,
            triangle_free: ctx.triangle_free(),
            h_noncentral: ctx.noncentral(),
        },
        checks: rec.checks,
        graph_summary: GraphSummary {
            vertex_sizes: ctx.graph.sizes(),
            edges: ctx.graph.edges.clone(),
            shape: ctx.graph.shape,
        },
        counterexample,
        timings_ms: rec.timings,
    }
}

/// Every check id, in report order.
pub fn check_ids() -> Vec<String> {
    let g = Group::trivial(1);
    verify_pair(&g, 2, &VerifyConfig::default())
        .checks
        .into_iter()
        .map(|c| c.id)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "value")]
pub enum PrimeSelection {
    /// Primes dividing `|G|`, the smallest prime that does not, and the
    /// corpus entry's own primes of interest.
    AllDividing,
    UpTo(u64),
    Explicit(Vec<u64>),
}

pub fn primes_for(g: &Group, featured: &[u64], selection: &PrimeSelection) -> Vec<u64> {
    let mut primes: BTreeSet<u64> = match selection {
        PrimeSelection::AllDividing => {
            let mut s = prime_divisors(g.order_u64());
            s.insert(smallest_prime_not_dividing(g.order_u64()));
            s.extend(featured.iter().copied());
            s
        }
        PrimeSelection::UpTo(n) => primes_up_to(*n).into_iter().collect(),
        PrimeSelection::Explicit(list) => list.iter().copied().collect(),
    };
    primes.retain(|&p| is_prime(p));
    primes.into_iter().collect()
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub group: Group,
    pub primes: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub schema_version: u32,
    pub pairs: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// `name@p` for every report with a failing classification check.
    pub counterexamples: Vec<String>,
    pub reports: Vec<VerificationReport>,
}

impl CorpusSummary {
    pub fn any_failed(&self) -> bool {
        self.failed > 0
    }
}

/// One report per (group, prime), computed in parallel on the current rayon
/// pool. Counterexample reports come first; otherwise input order is kept.
pub fn run_corpus(entries: &[CorpusEntry], selection: &PrimeSelection, cfg: &VerifyConfig) -> CorpusSummary {
    let tasks: Vec<(&Group, u64)> = entries
        .iter()
        .flat_map(|e| {
            primes_for(&e.group, &e.primes, selection)
                .into_iter()
                .map(move |p| (&e.group, p))
        })
        .collect();
    let mut reports: Vec<VerificationReport> = tasks
        .par_iter()
        .map(|&(g, p)| verify_pair(g, p, cfg))
        .collect();
    reports.sort_by_key(|r| !r.counterexample);
    let total = |s: Status| reports.iter().map(|r| r.count(s)).sum();
    CorpusSummary {
        schema_version: SCHEMA_VERSION,
        pairs: reports.len(),
        passed: total(Status::Pass),
        failed: total(Status::Fail),
        skipped: total(Status::Skipped),
        counterexamples: reports
            .iter()
            .filter(|r| r.counterexample)
            .map(|r| format!("{}@{}", r.group_name, r.prime))
            .collect(),
        reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::atlas_group;

    fn report(name: &str, p: u64) -> VerificationReport {
        verify_pair(&atlas_group(name).unwrap().group, p, &VerifyConfig::default())
    }

    fn status(r: &VerificationReport, id: &str) -> Status {
        r.check(id).unwrap().status
    }

    #[test]
    fn semilinear_group_at_seven_passes() {
        let r = report("GammaL(1,8)", 7);
        assert!(r.hypotheses.p_separable);
        assert_eq!(r.failures().count(), 0, "{:#?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn non_separable_pair_skips_classification() {
        let r = report("A5", 5);
        assert!(!r.hypotheses.p_separable);
        assert_eq!(status(&r, "p_separability"), Status::Pass);
        for id in CLASSIFICATION_CHECKS {
            assert_eq!(status(&r, id), Status::Skipped);
            assert!(r.check(id).unwrap().detail.contains("p-separable"));
        }
        assert_eq!(r.failures().count(), 0);
    }

    #[test]
    fn skipped_entries_name_a_hypothesis() {
        for (name, p) in [("Sigma4", 3), ("C3:C4", 5), ("3^(1+2):Q8", 2)] {
            let r = report(name, p);
            for c in r.checks.iter().filter(|c| c.status == Status::Skipped) {
                assert!(c.detail.starts_with("hypothesis '"), "{name} {}: {}", c.id, c.detail);
            }
        }
    }

    #[test]
    fn extraspecial_shape_d() {
        let r = report("3^(1+2):Q8", 2);
        assert_eq!(r.graph_summary.vertex_sizes, vec![24]);
        assert_eq!(r.graph_summary.shape, Shape::D);
        assert_eq!(status(&r, "shape_d_structure"), Status::Pass);
        assert_eq!(status(&r, "shape_d_abelian_quotients"), Status::Pass);
        assert_eq!(r.failures().count(), 0);
    }

    #[test]
    fn check_ids_are_unique() {
        let ids = check_ids();
        let unique: BTreeSet<&String> = ids.iter().collect();
        assert_eq!(unique.len(), ids.len());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&report("C7:C6", 2)).unwrap();
        let b = serde_json::to_string(&report("C7:C6", 2)).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("timings"));
    }

    #[test]
    fn prime_selection() {
        let g = atlas_group("C3:C4").unwrap().group;
        assert_eq!(primes_for(&g, &[5], &PrimeSelection::AllDividing), vec![2, 3, 5]);
        assert_eq!(primes_for(&g, &[], &PrimeSelection::UpTo(7)), vec![2, 3, 5, 7]);
        assert_eq!(primes_for(&g, &[], &PrimeSelection::Explicit(vec![11, 4])), vec![11]);
    }

    #[test]
    fn empty_corpus() {
        let s = run_corpus(&[], &PrimeSelection::AllDividing, &VerifyConfig::default());
        assert_eq!(s.pairs, 0);
        assert!(!s.any_failed());
    }
}
