//! Structural predicates: Frobenius and quasi-Frobenius groups, Higman's
//! structure for groups of prime-power element orders, π-class-size
//! criteria, and the case matcher for triangle-free p-regular class graphs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::{is_pi_number, prime_divisors, prime_power};
use crate::atlas::c5c5_q8;
use crate::error::{Error, Result};
use crate::graph::{build_graph, is_triangle_free, Shape};
use crate::group::{center, Group};
use crate::structure::{
    complement_primes, hall_mask, indices, is_p_separable, is_soluble, normal_subgroup_masks,
    p_complement, p_core_mask, pi_core_mask, quotient_by_mask, sylow, HallSearchConfig,
    LATTICE_CAP,
};

/// Kernel and complement of a Frobenius (or quasi-Frobenius) group.
#[derive(Clone, Debug)]
pub struct FrobeniusWitness {
    pub kernel: Group,
    pub complement: Group,
    pub kernel_abelian: bool,
    pub complement_abelian: bool,
    /// Membership masks over the elements of the group the witness is about.
    pub kernel_mask: Vec<bool>,
    pub complement_mask: Vec<bool>,
}

impl FrobeniusWitness {
    fn from_masks(g: &Group, kernel_mask: Vec<bool>, complement_mask: Vec<bool>) -> Self {
        let kernel = g.subgroup_from_indices(&indices(&kernel_mask), &format!("K({})", g.name()));
        let complement =
            g.subgroup_from_indices(&indices(&complement_mask), &format!("C({})", g.name()));
        Self {
            kernel_abelian: kernel.is_abelian(),
            complement_abelian: complement.is_abelian(),
            kernel,
            complement,
            kernel_mask,
            complement_mask,
        }
    }
}

/// Nontrivial elements of `mask` whose centralizer leaves `mask`.
fn centralizers_inside(g: &Group, mask: &[bool]) -> bool {
    g.classes().iter().all(|c| {
        let k = c.members[0];
        k == 0 || !mask[k] || (0..g.order()).all(|x| mask[x] || !g.commute(k, x))
    })
}

/// Finds a Frobenius kernel among the normal subgroups and a complement for it.
pub fn is_frobenius(g: &Group, cfg: &HallSearchConfig) -> Result<Option<FrobeniusWitness>> {
    let n = g.order();
    if n < 2 {
        return Ok(None);
    }
    for cand in normal_subgroup_masks(g, LATTICE_CAP)? {
        if cand.order == 1 || cand.order == n || !centralizers_inside(g, &cand.mask) {
            continue;
        }
        let index = (n / cand.order) as u64;
        let pi = prime_divisors(index);
        let comp = hall_mask(g, &pi, cfg).map_err(|_| Error::ComplementSearchExhausted)?;
        let size = comp.iter().filter(|&&b| b).count();
        let meets = comp.iter().zip(&cand.mask).filter(|(a, b)| **a && **b).count();
        if size as u64 != index || meets != 1 {
            return Err(Error::ComplementSearchExhausted);
        }
        return Ok(Some(FrobeniusWitness::from_masks(g, cand.mask, comp)));
    }
    Ok(None)
}

/// `G` is quasi-Frobenius when `G/Z(G)` is Frobenius.
#[derive(Clone, Debug)]
pub struct QuasiFrobenius {
    /// Kernel and complement of `G/Z(G)`.
    pub quotient_witness: FrobeniusWitness,
    /// Their preimages in `G`.
    pub preimages: FrobeniusWitness,
}

pub fn is_quasi_frobenius(g: &Group, cfg: &HallSearchConfig) -> Result<Option<QuasiFrobenius>> {
    let z = center(g);
    let zmask = g.mask_of_group(&z)?;
    let q = quotient_by_mask(g, &zmask, &format!("{}/Z", g.name()));
    let Some(w) = is_frobenius(&q.group, cfg)? else {
        return Ok(None);
    };
    let kernel = q.preimage_mask(&w.kernel_mask);
    let complement = q.preimage_mask(&w.complement_mask);
    Ok(Some(QuasiFrobenius {
        preimages: FrobeniusWitness::from_masks(g, kernel, complement),
        quotient_witness: w,
    }))
}

/// Shape of `H/M` for a soluble group all of whose elements have prime-power
/// order, `M` the nontrivial normal t-subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum HigmanQuotient {
    /// `H = M`.
    Whole,
    CyclicPrimePower { order: usize },
    GeneralizedQuaternion { order: usize },
    CyclicSylows { order: usize },
    Unrecognised { order: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HigmanReport {
    pub primes: Vec<u64>,
    pub t: Option<u64>,
    pub core_order: usize,
    pub quotient: HigmanQuotient,
}

impl HigmanReport {
    pub fn holds(&self) -> bool {
        self.primes.len() <= 2 && !matches!(self.quotient, HigmanQuotient::Unrecognised { .. })
    }
}

fn is_cyclic(g: &Group) -> bool {
    g.element_orders().iter().any(|&o| o as usize == g.order())
}

pub fn higman_structure_check(h: &Group) -> Result<HigmanReport> {
    if let Some(i) = (0..h.order()).find(|&i| prime_power(h.order_of(i)).is_none() && h.order_of(i) > 1) {
        return Err(Error::PreconditionViolated(format!(
            "element of order {} is not of prime-power order",
            h.order_of(i)
        )));
    }
    if !is_soluble(h).0 {
        return Err(Error::PreconditionViolated("group is not soluble".into()));
    }
    let primes: Vec<u64> = prime_divisors(h.order_u64()).into_iter().collect();
    let Some((t, core)) = primes.iter().find_map(|&t| {
        let m = p_core_mask(h, t);
        let size = m.iter().filter(|&&b| b).count();
        (size > 1).then_some((t, m))
    }) else {
        return Ok(HigmanReport {
            primes,
            t: None,
            core_order: 1,
            quotient: HigmanQuotient::Whole,
        });
    };
    let core_order = core.iter().filter(|&&b| b).count();
    let q = quotient_by_mask(h, &core, "H/M").group;
    let order = q.order();
    let quotient = if order == 1 {
        HigmanQuotient::Whole
    } else if is_cyclic(&q) && prime_power(order as u64).is_some_and(|(s, _)| s != t) {
        HigmanQuotient::CyclicPrimePower { order }
    } else if t % 2 == 1
        && order.is_power_of_two()
        && !is_cyclic(&q)
        && q.element_orders().iter().filter(|&&o| o == 2).count() == 1
    {
        HigmanQuotient::GeneralizedQuaternion { order }
    } else if prime_divisors(order as u64).len() == 2
        && order as u64 % t == 0
        && prime_divisors(order as u64)
            .iter()
            .all(|&r| is_cyclic(&sylow(&q, r)))
    {
        HigmanQuotient::CyclicSylows { order }
    } else {
        HigmanQuotient::Unrecognised { order }
    };
    Ok(HigmanReport {
        primes,
        t: Some(t),
        core_order,
        quotient,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PiMode {
    /// Every π-element has class size a π-number.
    PiNumber,
    /// Every π-element has class size a π'-number.
    PiPrimeNumber,
}

/// Both sides of the class-size criterion: `(class-size condition, structural condition)`.
///
/// In `PiNumber` mode the structural side is `G = O_π(G) x O_π'(G)`; in
/// `PiPrimeNumber` mode it is that the Hall π-subgroups are abelian.
pub fn pi_class_size_criterion(
    g: &Group,
    pi: &BTreeSet<u64>,
    mode: PiMode,
    cfg: &HallSearchConfig,
) -> Result<(bool, bool)> {
    let support = prime_divisors(g.order_u64());
    let inside: BTreeSet<u64> = support.intersection(pi).copied().collect();
    let outside: BTreeSet<u64> = support.difference(pi).copied().collect();
    let separable = match (inside.len(), outside.len()) {
        (0, _) | (_, 0) => true,
        (1, _) => is_p_separable(g, *inside.first().unwrap()).0,
        (_, 1) => is_p_separable(g, *outside.first().unwrap()).0,
        _ => is_soluble(g).0,
    };
    if !separable {
        return Err(Error::PreconditionViolated("group is not π-separable".into()));
    }
    let pi_classes = g.classes().iter().filter(|c| is_pi_number(c.element_order, pi));
    match mode {
        PiMode::PiNumber => {
            let lhs = pi_classes.clone().all(|c| is_pi_number(c.size, pi));
            let a = pi_core_mask(g, pi).iter().filter(|&&b| b).count();
            let b = pi_core_mask(g, &outside).iter().filter(|&&b| b).count();
            Ok((lhs, a * b == g.order()))
        }
        PiMode::PiPrimeNumber => {
            let lhs = pi_classes.clone().all(|c| is_pi_number(c.size, &outside));
            let mask = hall_mask(g, pi, cfg)?;
            let hall = g.subgroup_from_indices(&indices(&mask), "Hall");
            Ok((lhs, hall.is_abelian()))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    I,
    Ii,
    Iii,
}

impl Case {
    pub fn label(&self) -> &'static str {
        match self {
            Case::I => "i",
            Case::Ii => "ii",
            Case::Iii => "iii",
        }
    }

    /// Graph shapes each case is paired with.
    pub fn allowed_shapes(&self) -> &'static [Shape] {
        match self {
            Case::I => &[Shape::D, Shape::E],
            Case::Ii => &[Shape::A, Shape::B, Shape::C, Shape::E],
            Case::Iii => &[Shape::F],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "case")]
pub enum CaseDetails {
    /// `H` is a q-group.
    I { q: u64 },
    /// `H` is quasi-Frobenius on two primes with abelian kernel and complements.
    Ii {
        primes: Vec<u64>,
        kernel_order: usize,
        complement_order: usize,
        center_order: usize,
    },
    /// `H` is isomorphic to `(C5 x C5) ⋊ Q8`.
    Iii { isomorphism: Vec<usize> },
}

#[derive(Clone, Debug)]
pub struct TheoremACase {
    pub case: Case,
    pub shape: Shape,
    pub details: CaseDetails,
}

impl TheoremACase {
    pub fn pairing_holds(&self) -> bool {
        self.case.allowed_shapes().contains(&self.shape)
    }
}

/// Case matcher given a p-complement `h` of `g` (a subgroup of `g`).
pub fn theorem_a_case_with(
    g: &Group,
    p: u64,
    h: &Group,
    cfg: &HallSearchConfig,
) -> Result<TheoremACase> {
    let graph = build_graph(g, Some(p));
    if graph.vertex_count() == 0 {
        return Err(Error::PreconditionViolated("p-complement is central".into()));
    }
    if !is_triangle_free(&graph) {
        return Err(Error::PreconditionViolated("graph has a triangle".into()));
    }
    if !is_soluble(g).0 {
        return Err(Error::NoCaseMatches("group is not soluble".into()));
    }
    if graph.shape == Shape::Other {
        return Err(Error::NoCaseMatches("graph is not one of the six shapes".into()));
    }
    let mut found: Vec<(Case, CaseDetails)> = Vec::new();

    if h.order() == 200 {
        if let Some(map) = crate::iso::find_isomorphism(h, &c5c5_q8()?)? {
            found.push((Case::Iii, CaseDetails::Iii { isomorphism: map }));
        }
    }
    if let Some((q, _)) = prime_power(h.order_u64()) {
        found.push((Case::I, CaseDetails::I { q }));
    }
    let primes: Vec<u64> = prime_divisors(h.order_u64()).into_iter().collect();
    if primes.len() == 2 && !primes.contains(&p) {
        if let Some(qf) = is_quasi_frobenius(h, cfg)? {
            let zh = center(h).order();
            let zg = center(g);
            let h_meet_z = h.elements().iter().filter(|x| zg.contains(x)).count();
            if qf.preimages.kernel_abelian
                && qf.preimages.complement_abelian
                && zh == h_meet_z
                && zh <= 2
            {
                found.push((
                    Case::Ii,
                    CaseDetails::Ii {
                        primes,
                        kernel_order: qf.preimages.kernel.order(),
                        complement_order: qf.preimages.complement.order(),
                        center_order: zh,
                    },
                ));
            }
        }
    }
    match found.len() {
        1 => {
            let (case, details) = found.pop().unwrap();
            Ok(TheoremACase {
                case,
                shape: graph.shape,
                details,
            })
        }
        0 => Err(Error::NoCaseMatches(format!(
            "p-complement of order {} fits none of the cases",
            h.order()
        ))),
        _ => Err(Error::NoCaseMatches(format!(
            "cases {} hold simultaneously",
            found.iter().map(|(c, _)| c.label()).collect::<Vec<_>>().join(", ")
        ))),
    }
}

/// Case of the classification for a p-separable `g` whose p-regular class
/// graph is triangle-free and whose p-complements are not central.
pub fn theorem_a_case(g: &Group, p: u64, cfg: &HallSearchConfig) -> Result<TheoremACase> {
    if !is_p_separable(g, p).0 {
        return Err(Error::PreconditionViolated(format!("group is not {p}-separable")));
    }
    let h = p_complement(g, p, cfg)?;
    theorem_a_case_with(g, p, &h, cfg)
}

pub use crate::graph::count_p_regular_classes;

/// Whether `|g : O_{p'}(g)|` is a power of `p`.
pub fn is_p_nilpotent(g: &Group, p: u64) -> bool {
    let core = pi_core_mask(g, &complement_primes(g, p));
    let k = core.iter().filter(|&&b| b).count();
    prime_power((g.order() / k) as u64).map_or(g.order() == k, |(q, _)| q == p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::atlas_group;
    use crate::constructions::{cyclic, dihedral, symmetric};

    fn atlas(name: &str) -> Group {
        atlas_group(name).unwrap().group
    }

    fn cfg() -> HallSearchConfig {
        HallSearchConfig::default()
    }

    /// Oracle: check the witness invariants element by element.
    fn check_witness(g: &Group, w: &FrobeniusWitness) {
        assert_eq!(w.kernel.order() * w.complement.order(), g.order());
        let meet = w.kernel_mask.iter().zip(&w.complement_mask).filter(|(a, b)| **a && **b).count();
        assert_eq!(meet, 1);
        for k in indices(&w.kernel_mask).into_iter().filter(|&k| k != 0) {
            for x in 0..g.order() {
                if g.commute(k, x) {
                    assert!(w.kernel_mask[x]);
                }
            }
        }
        assert!(g.is_normal_subgroup(&w.kernel));
    }

    #[test]
    fn frobenius_examples() {
        let s3 = symmetric(3).unwrap();
        let w = is_frobenius(&s3, &cfg()).unwrap().unwrap();
        assert_eq!((w.kernel.order(), w.complement.order()), (3, 2));
        check_witness(&s3, &w);
        let d10 = dihedral(10).unwrap();
        let w = is_frobenius(&d10, &cfg()).unwrap().unwrap();
        assert_eq!((w.kernel.order(), w.complement.order()), (5, 2));
        check_witness(&d10, &w);
        assert!(is_frobenius(&atlas("Q8"), &cfg()).unwrap().is_none());
        assert!(is_frobenius(&cyclic(6).unwrap(), &cfg()).unwrap().is_none());
        let a4 = atlas("A4");
        let w = is_frobenius(&a4, &cfg()).unwrap().unwrap();
        assert_eq!(w.kernel.order(), 4);
        check_witness(&a4, &w);
    }

    #[test]
    fn quasi_frobenius_examples() {
        let g = atlas("C3:C4");
        assert!(is_frobenius(&g, &cfg()).unwrap().is_none());
        let qf = is_quasi_frobenius(&g, &cfg()).unwrap().unwrap();
        assert_eq!(qf.preimages.kernel.order(), 6);
        assert_eq!(qf.preimages.complement.order(), 4);
        assert!(qf.preimages.kernel_abelian && qf.preimages.complement_abelian);
        assert!(is_quasi_frobenius(&cyclic(5).unwrap(), &cfg()).unwrap().is_none());
        let s3 = symmetric(3).unwrap();
        let qf = is_quasi_frobenius(&s3, &cfg()).unwrap().unwrap();
        assert_eq!(qf.preimages.kernel.order(), 3);
    }

    #[test]
    fn higman_examples() {
        let r = higman_structure_check(&symmetric(3).unwrap()).unwrap();
        assert_eq!(r.t, Some(3));
        assert_eq!(r.quotient, HigmanQuotient::CyclicPrimePower { order: 2 });
        let r = higman_structure_check(&atlas("Q8")).unwrap();
        assert_eq!(r.quotient, HigmanQuotient::Whole);
        let r = higman_structure_check(&atlas("A4")).unwrap();
        assert_eq!(r.t, Some(2));
        assert_eq!(r.quotient, HigmanQuotient::CyclicPrimePower { order: 3 });
        let r = higman_structure_check(&atlas("E9:Q8")).unwrap();
        assert_eq!(r.quotient, HigmanQuotient::GeneralizedQuaternion { order: 8 });
        assert!(r.holds());
        assert!(matches!(
            higman_structure_check(&cyclic(6).unwrap()),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn pi_criterion_examples() {
        let s3 = symmetric(3).unwrap();
        let two: BTreeSet<u64> = [2].into();
        assert_eq!(
            pi_class_size_criterion(&s3, &two, PiMode::PiPrimeNumber, &cfg()).unwrap(),
            (true, true)
        );
        assert_eq!(
            pi_class_size_criterion(&s3, &two, PiMode::PiNumber, &cfg()).unwrap(),
            (false, false)
        );
        let c6 = cyclic(6).unwrap();
        assert_eq!(
            pi_class_size_criterion(&c6, &two, PiMode::PiNumber, &cfg()).unwrap(),
            (true, true)
        );
        let g = atlas("C2x(Q8:C9)");
        assert_eq!(
            pi_class_size_criterion(&g, &two, PiMode::PiPrimeNumber, &cfg()).unwrap(),
            (false, false)
        );
        assert!(matches!(
            pi_class_size_criterion(&atlas("A5"), &two, PiMode::PiNumber, &cfg()),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn case_examples() {
        let c = theorem_a_case(&atlas("C3:C4"), 5, &cfg()).unwrap();
        assert_eq!((c.case, c.shape), (Case::Ii, Shape::C));
        assert!(matches!(c.details, CaseDetails::Ii { center_order: 2, .. }));
        let c = theorem_a_case(&atlas("C2x(Q8:C9)"), 3, &cfg()).unwrap();
        assert_eq!((c.case, c.shape), (Case::I, Shape::E));
        assert_eq!(c.details, CaseDetails::I { q: 2 });
        let c = theorem_a_case(&atlas("(C5xC5):SL(2,3)"), 3, &cfg()).unwrap();
        assert_eq!((c.case, c.shape), (Case::Iii, Shape::F));
        assert!(c.pairing_holds());
        assert!(matches!(
            theorem_a_case(&atlas("Sigma4"), 5, &cfg()),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn regular_class_counts() {
        assert_eq!(count_p_regular_classes(&symmetric(3).unwrap(), 3), 2);
        assert_eq!(count_p_regular_classes(&atlas("C2x(Q8:C9)"), 3), 6);
        assert_eq!(count_p_regular_classes(&atlas("Q8"), 2), 1);
    }

    #[test]
    fn p_nilpotence() {
        assert!(is_p_nilpotent(&symmetric(3).unwrap(), 2));
        assert!(!is_p_nilpotent(&symmetric(3).unwrap(), 3));
        assert!(is_p_nilpotent(&atlas("C3:C4"), 5));
    }
}
