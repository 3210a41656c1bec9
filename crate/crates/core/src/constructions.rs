//! Builders for standard families, products, and affine/linear groups.

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::group::{make_group, Group};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Cyclic,
    Dihedral,
    GeneralizedQuaternion,
    Semidihedral,
    ElementaryAbelian,
    Symmetric,
    Alternating,
}

/// Builds a member of a standard family.
///
/// Orders follow the `C_n, D_n, Q_n, SD_n, E_{q^k}` convention: the parameter is
/// the group order, except for `ElementaryAbelian` (prime `q`, exponent `k`)
/// and `Symmetric`/`Alternating` (the degree).
pub fn standard_family(kind: FamilyKind, params: &[usize]) -> Result<Group> {
    let arg = |i: usize| {
        params
            .get(i)
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("{kind:?} needs {} parameters", i + 1)))
    };
    match kind {
        FamilyKind::Cyclic => cyclic(arg(0)?),
        FamilyKind::Dihedral => dihedral(arg(0)?),
        FamilyKind::GeneralizedQuaternion => generalized_quaternion(arg(0)?),
        FamilyKind::Semidihedral => semidihedral(arg(0)?),
        FamilyKind::ElementaryAbelian => elementary_abelian(arg(0)?, arg(1)?),
        FamilyKind::Symmetric => symmetric(arg(0)?),
        FamilyKind::Alternating => alternating(arg(0)?),
    }
}

pub fn cyclic(n: usize) -> Result<Group> {
    if n == 0 {
        return Err(Error::InvalidParameter("cyclic group of order 0".into()));
    }
    let gens = if n > 1 {
        vec![Permutation::from_cycles(n, &[(0..n).collect()])?]
    } else {
        vec![]
    };
    make_group(n, &gens, &format!("C{n}"))
}

/// Dihedral group of order `n` (on `n/2` points when `n >= 6`).
pub fn dihedral(n: usize) -> Result<Group> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "dihedral group needs even order >= 4, got {n}"
        )));
    }
    let name = format!("D{n}");
    let m = n / 2;
    if m == 2 {
        return metacyclic(2, 2, 1, 0, &name);
    }
    let rot = Permutation::from_cycles(m, &[(0..m).collect()])?;
    let refl = Permutation::from_images((0..m).map(|i| (m - i) % m).collect())?;
    make_group(m, &[rot, refl], &name)
}

fn power_of_two_exponent(n: usize) -> Option<u32> {
    (n.is_power_of_two()).then(|| n.trailing_zeros())
}

pub fn generalized_quaternion(n: usize) -> Result<Group> {
    match power_of_two_exponent(n) {
        Some(k) if k >= 3 => metacyclic(n / 2, 2, n / 2 - 1, n / 4, &format!("Q{n}")),
        _ => Err(Error::InvalidParameter(format!(
            "generalized quaternion order must be 2^k with k >= 3, got {n}"
        ))),
    }
}

pub fn semidihedral(n: usize) -> Result<Group> {
    match power_of_two_exponent(n) {
        Some(k) if k >= 4 => metacyclic(n / 2, 2, n / 4 - 1, 0, &format!("SD{n}")),
        _ => Err(Error::InvalidParameter(format!(
            "semidihedral order must be 2^k with k >= 4, got {n}"
        ))),
    }
}

/// Regular representation of `<a, b | a^na, b^mb = a^s, b^-1 a b = a^r>`,
/// written with normal forms `a^i b^j`.
fn metacyclic(na: usize, mb: usize, r: usize, s: usize, name: &str) -> Result<Group> {
    let n = na * mb;
    let mul = |(i1, j1): (usize, usize), (i2, j2): (usize, usize)| {
        // b^j a^i = a^(i r^j) b^j
        let mut twist = i2 % na;
        for _ in 0..j1 {
            twist = twist * r % na;
        }
        let mut i = (i1 + twist) % na;
        let mut j = j1 + j2;
        if j >= mb {
            j -= mb;
            i = (i + s) % na;
        }
        (i, j)
    };
    let idx = |(i, j): (usize, usize)| i + na * j;
    let right_mult = |g: (usize, usize)| {
        Permutation::from_images((0..n).map(|x| idx(mul((x % na, x / na), g))).collect())
    };
    let group = make_group(n, &[right_mult((1 % na, 0))?, right_mult((0, 1 % mb))?], name)?;
    if group.order() != n {
        return Err(Error::InvalidParameter(format!(
            "metacyclic parameters for {name} are inconsistent"
        )));
    }
    Ok(group)
}

pub fn elementary_abelian(q: usize, k: usize) -> Result<Group> {
    if !is_prime(q as u64) {
        return Err(Error::InvalidParameter(format!("{q} is not prime")));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("exponent must be positive".into()));
    }
    let degree = q * k;
    let gens = (0..k)
        .map(|i| Permutation::from_cycles(degree, &[(i * q..(i + 1) * q).collect()]))
        .collect::<Result<Vec<_>>>()?;
    make_group(degree, &gens, &format!("E{}", q.pow(k as u32)))
}

pub fn symmetric(n: usize) -> Result<Group> {
    if n == 0 {
        return Err(Error::InvalidParameter("degree must be positive".into()));
    }
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Permutation::from_cycles(n, &[vec![0, 1]])?);
    }
    if n >= 3 {
        gens.push(Permutation::from_cycles(n, &[(0..n).collect()])?);
    }
    make_group(n, &gens, &format!("Sigma{n}"))
}

pub fn alternating(n: usize) -> Result<Group> {
    if n == 0 {
        return Err(Error::InvalidParameter("degree must be positive".into()));
    }
    let gens = if n < 3 {
        vec![]
    } else {
        let long: Vec<usize> = if n % 2 == 1 {
            (0..n).collect()
        } else {
            (1..n).collect()
        };
        vec![
            Permutation::from_cycles(n, &[vec![0, 1, 2]])?,
            Permutation::from_cycles(n, &[long])?,
        ]
    };
    make_group(n, &gens, &format!("A{n}"))
}

/// `A x B` acting on disjoint point sets.
pub fn direct_product(a: &Group, b: &Group) -> Result<Group> {
    let degree = a.degree() + b.degree();
    let mut gens: Vec<Permutation> = a
        .generators()
        .iter()
        .map(|g| g.shifted(0, degree))
        .collect();
    gens.extend(b.generators().iter().map(|g| g.shifted(a.degree(), degree)));
    make_group(degree, &gens, &format!("{}x{}", a.name(), b.name()))
}

/// Action of `H` on `K`: `images[j][i]` is the image of the `i`-th generator
/// of `K` under the automorphism attached to the `j`-th generator of `H`.
///
/// Automorphisms compose as right actions: the automorphism of `h1 h2` is the
/// one of `h1` followed by the one of `h2`.
#[derive(Clone, Debug)]
pub struct ActionSpec {
    pub images: Vec<Vec<Permutation>>,
}

impl ActionSpec {
    pub fn trivial(k: &Group, h: &Group) -> Self {
        Self {
            images: vec![k.generators().to_vec(); h.generators().len()],
        }
    }
}

/// A semidirect product together with its embedded factors.
#[derive(Clone, Debug)]
pub struct SemidirectProduct {
    pub group: Group,
    /// The normal factor `K`.
    pub normal: Group,
    /// The acting factor `H`.
    pub complement: Group,
}

/// `K ⋊ H`, realised on the disjoint union of `K` (where `K` acts by right
/// translation and `H` by automorphisms) and `H` (right regular action).
pub fn semidirect_product(k: &Group, h: &Group, action: &ActionSpec, name: &str) -> Result<Group> {
    semidirect_product_with_factors(k, h, action, name).map(|sp| sp.group)
}

pub fn semidirect_product_with_factors(
    k: &Group,
    h: &Group,
    action: &ActionSpec,
    name: &str,
) -> Result<SemidirectProduct> {
    let kgens = k.generator_indices();
    let hgens = h.generator_indices();
    if action.images.len() != hgens.len() {
        return Err(Error::NotAHomomorphism(format!(
            "{} automorphisms given for {} generators of {}",
            action.images.len(),
            hgens.len(),
            h.name()
        )));
    }
    let mut autos: Vec<Vec<usize>> = Vec::with_capacity(hgens.len());
    for (j, imgs) in action.images.iter().enumerate() {
        let label = format!("generator {} of {}", j + 1, h.name());
        if imgs.len() != kgens.len() {
            return Err(Error::NotAnAutomorphism(label));
        }
        let img_idx = imgs
            .iter()
            .map(|g| k.index_of(g).ok_or_else(|| Error::NotAnAutomorphism(label.clone())))
            .collect::<Result<Vec<_>>>()?;
        autos.push(extend_to_automorphism(k, &kgens, &img_idx).ok_or(Error::NotAnAutomorphism(label))?);
    }
    // h -> Aut(K) must be well defined on all of H.
    let nk = k.order();
    let mut hom: Vec<Option<Vec<usize>>> = vec![None; h.order()];
    hom[0] = Some((0..nk).collect());
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let fx = hom[x].clone().unwrap();
        for (j, &s) in hgens.iter().enumerate() {
            let y = h.mul(x, s);
            let fy: Vec<usize> = fx.iter().map(|&v| autos[j][v]).collect();
            match &hom[y] {
                None => {
                    hom[y] = Some(fy);
                    queue.push_back(y);
                }
                Some(existing) if *existing != fy => {
                    return Err(Error::NotAHomomorphism(format!(
                        "relation of {} violated by the action",
                        h.name()
                    )));
                }
                _ => {}
            }
        }
    }

    let nh = h.order();
    let degree = nk + nh;
    let mut gens = Vec::new();
    for &s in &kgens {
        let mut images: Vec<usize> = (0..nk).map(|x| k.mul(x, s)).collect();
        images.extend(nk..degree);
        gens.push(Permutation::from_images(images)?);
    }
    let n_kgens = gens.len();
    for (j, &s) in hgens.iter().enumerate() {
        let mut images = autos[j].clone();
        images.extend((0..nh).map(|y| nk + h.mul(y, s)));
        gens.push(Permutation::from_images(images)?);
    }
    let group = make_group(degree, &gens, name)?;
    if group.order() != nk * nh {
        return Err(Error::NotAHomomorphism(format!(
            "product has order {} instead of {}",
            group.order(),
            nk * nh
        )));
    }
    let normal = make_group(degree, &gens[..n_kgens], &format!("{}<{name}", k.name()))?;
    let complement = make_group(degree, &gens[n_kgens..], &format!("{}<{name}", h.name()))?;
    Ok(SemidirectProduct {
        group,
        normal,
        complement,
    })
}

/// Extends generator images to a map on all of `K`; `None` unless the result
/// is a bijective homomorphism.
fn extend_to_automorphism(k: &Group, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let n = k.order();
    let mut map = vec![usize::MAX; n];
    map[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = k.mul(x, s);
            let fy = k.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    let mut hit = vec![false; n];
    for &v in &map {
        if v == usize::MAX || hit[v] {
            return None;
        }
        hit[v] = true;
    }
    Some(map)
}

/// `F_q ⋊ <ω>` with `ω` of multiplicative order `multiplier_order`, optionally
/// extended by the Frobenius map `x -> x^p`; acts on the `q` field elements.
pub fn affine_group(
    q: usize,
    multiplier_order: usize,
    frobenius: bool,
    name: &str,
) -> Result<Group> {
    let f = FiniteField::new(q)?;
    if multiplier_order == 0 || (q - 1) % multiplier_order != 0 {
        return Err(Error::InvalidParameter(format!(
            "multiplier order {multiplier_order} does not divide {}",
            q - 1
        )));
    }
    let mut gens = Vec::new();
    for b in f.basis() {
        gens.push(Permutation::from_images((0..q).map(|x| f.add(x, b)).collect())?);
    }
    if multiplier_order > 1 {
        let w = f.pow(f.generator(), (q - 1) / multiplier_order);
        gens.push(Permutation::from_images((0..q).map(|x| f.mul(w, x)).collect())?);
    }
    if frobenius && f.degree() > 1 {
        let p = f.characteristic();
        gens.push(Permutation::from_images((0..q).map(|x| f.pow(x, p)).collect())?);
    }
    make_group(q, &gens, name)
}

/// Square matrix over the prime field `F_p`, acting on row vectors.
pub type Matrix = Vec<Vec<usize>>;

fn vector_of(mut x: usize, p: usize, n: usize) -> Vec<usize> {
    let mut v = vec![0; n];
    for slot in v.iter_mut() {
        *slot = x % p;
        x /= p;
    }
    v
}

fn index_of_vector(v: &[usize], p: usize) -> usize {
    v.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn matrix_permutation(p: usize, m: &Matrix) -> Result<Permutation> {
    let n = m.len();
    let size = p.pow(n as u32);
    let images = (0..size)
        .map(|x| {
            let v = vector_of(x, p, n);
            let w: Vec<usize> = (0..n)
                .map(|j| (0..n).map(|i| v[i] * m[i][j]).sum::<usize>() % p)
                .collect();
            index_of_vector(&w, p)
        })
        .collect();
    Permutation::from_images(images)
        .map_err(|_| Error::InvalidParameter(format!("matrix {m:?} is singular mod {p}")))
}

/// Linear group generated by `matrices` acting on `F_p^n` (degree `p^n`).
pub fn matrix_group(p: usize, matrices: &[Matrix], name: &str) -> Result<Group> {
    if !is_prime(p as u64) || matrices.is_empty() {
        return Err(Error::InvalidParameter("need a prime and at least one matrix".into()));
    }
    let n = matrices[0].len();
    let gens = matrices
        .iter()
        .map(|m| matrix_permutation(p, m))
        .collect::<Result<Vec<_>>>()?;
    make_group(p.pow(n as u32), &gens, name)
}

/// `F_p^n ⋊ <matrices>` acting on the vectors by `v -> vM + b`.
pub fn affine_matrix_group(p: usize, matrices: &[Matrix], name: &str) -> Result<Group> {
    if !is_prime(p as u64) || matrices.is_empty() {
        return Err(Error::InvalidParameter("need a prime and at least one matrix".into()));
    }
    let n = matrices[0].len();
    let size = p.pow(n as u32);
    let mut gens = Vec::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        gens.push(Permutation::from_images(
            (0..size)
                .map(|x| {
                    let v = vector_of(x, p, n);
                    let w: Vec<usize> = v.iter().zip(&e).map(|(a, b)| (a + b) % p).collect();
                    index_of_vector(&w, p)
                })
                .collect(),
        )?);
    }
    for m in matrices {
        gens.push(matrix_permutation(p, m)?);
    }
    make_group(size, &gens, name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class_sizes(g: &Group) -> Vec<u64> {
        g.classes().iter().map(|c| c.size).collect()
    }

    #[test]
    fn families() {
        let c7 = standard_family(FamilyKind::Cyclic, &[7]).unwrap();
        assert_eq!(c7.order(), 7);
        assert_eq!(c7.generators().len(), 1);
        let d10 = standard_family(FamilyKind::Dihedral, &[10]).unwrap();
        assert_eq!(d10.order(), 10);
        assert_eq!(class_sizes(&d10), vec![1, 2, 2, 5]);
        let q8 = standard_family(FamilyKind::GeneralizedQuaternion, &[8]).unwrap();
        assert_eq!(q8.order(), 8);
        assert_eq!(crate::group::center(&q8).order(), 2);
        let sd16 = standard_family(FamilyKind::Semidihedral, &[16]).unwrap();
        assert_eq!(sd16.order(), 16);
        assert_eq!(crate::group::center(&sd16).order(), 2);
        let e8 = standard_family(FamilyKind::ElementaryAbelian, &[2, 3]).unwrap();
        assert_eq!(e8.order(), 8);
        assert!(e8.element_orders().iter().all(|&o| o <= 2));
        assert_eq!(symmetric(4).unwrap().order(), 24);
        assert_eq!(alternating(5).unwrap().order(), 60);
        assert_eq!(alternating(4).unwrap().order(), 12);
        assert_eq!(dihedral(4).unwrap().order(), 4);
    }

    #[test]
    fn family_parameter_errors() {
        assert!(matches!(
            standard_family(FamilyKind::ElementaryAbelian, &[4, 2]),
            Err(Error::InvalidParameter(_))
        ));
        assert!(generalized_quaternion(12).is_err());
        assert!(dihedral(7).is_err());
        assert!(standard_family(FamilyKind::Cyclic, &[]).is_err());
    }

    #[test]
    fn quaternion_has_unique_involution() {
        let q16 = generalized_quaternion(16).unwrap();
        assert_eq!(q16.element_orders().iter().filter(|&&o| o == 2).count(), 1);
    }

    #[test]
    fn direct_products() {
        let c2 = cyclic(2).unwrap();
        let c3 = cyclic(3).unwrap();
        let c6 = direct_product(&c2, &c3).unwrap();
        assert_eq!(c6.order(), 6);
        assert!(c6.element_orders().contains(&6));
        let s3 = symmetric(3).unwrap();
        let t = Group::trivial(1);
        assert_eq!(direct_product(&s3, &t).unwrap().order(), 6);
    }

    fn c3_by_c4() -> Group {
        let c3 = cyclic(3).unwrap();
        let c4 = cyclic(4).unwrap();
        let inv = c3.generators()[0].inverse();
        semidirect_product(&c3, &c4, &ActionSpec { images: vec![vec![inv]] }, "C3:C4").unwrap()
    }

    #[test]
    fn semidirect_examples() {
        let g = c3_by_c4();
        assert_eq!(g.order(), 12);
        let sizes = class_sizes(&g);
        let noncentral: Vec<u64> = sizes.into_iter().filter(|&s| s > 1).collect();
        assert_eq!(noncentral, vec![2, 2, 3, 3]);

        let c7 = cyclic(7).unwrap();
        let c6 = cyclic(6).unwrap();
        let a = c7.generators()[0].pow(3);
        let g = semidirect_product(&c7, &c6, &ActionSpec { images: vec![vec![a]] }, "C7:C6").unwrap();
        let mut sizes: Vec<u64> = g
            .classes()
            .iter()
            .filter(|c| !c.is_central && c.element_order % 2 != 0)
            .map(|c| c.size)
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![6, 7, 7]);
    }

    #[test]
    fn trivial_action_gives_direct_product_order() {
        let c3 = cyclic(3).unwrap();
        let s3 = symmetric(3).unwrap();
        let sp = semidirect_product_with_factors(&c3, &s3, &ActionSpec::trivial(&c3, &s3), "x")
            .unwrap();
        assert_eq!(sp.group.order(), 18);
        assert!(sp.group.is_normal_subgroup(&sp.normal));
        assert!(sp.group.is_normal_subgroup(&sp.complement));
        assert_eq!(sp.normal.intersection(&sp.complement, "i").order(), 1);
    }

    #[test]
    fn semidirect_rejects_bad_actions() {
        let c3 = cyclic(3).unwrap();
        let c2 = cyclic(2).unwrap();
        // not an automorphism: generator sent to the identity
        let id = Permutation::identity(3);
        assert!(matches!(
            semidirect_product(&c3, &c2, &ActionSpec { images: vec![vec![id]] }, "bad"),
            Err(Error::NotAnAutomorphism(_))
        ));
        // an automorphism of order 2 attached to a generator of order 3
        let c7 = cyclic(7).unwrap();
        let inv = c7.generators()[0].inverse();
        assert!(matches!(
            semidirect_product(&c7, &c3, &ActionSpec { images: vec![vec![inv]] }, "bad"),
            Err(Error::NotAHomomorphism(_))
        ));
    }

    #[test]
    fn affine_groups() {
        let g = affine_group(8, 7, true, "GammaL(1,8)").unwrap();
        assert_eq!(g.order(), 168);
        assert_eq!(g.degree(), 8);
        assert_eq!(affine_group(16, 15, false, "E16:C15").unwrap().order(), 240);
        assert_eq!(affine_group(9, 8, true, "E9:SD16").unwrap().order(), 144);
        assert!(affine_group(7, 4, false, "bad").is_err());
    }

    #[test]
    fn linear_groups() {
        let q8 = matrix_group(3, &[vec![vec![0, 1], vec![2, 0]], vec![vec![1, 1], vec![1, 2]]], "Q8")
            .unwrap();
        assert_eq!(q8.order(), 8);
        let aff = affine_matrix_group(3, &[vec![vec![0, 1], vec![2, 0]], vec![vec![1, 1], vec![1, 2]]], "E9:Q8")
            .unwrap();
        assert_eq!(aff.order(), 72);
        assert!(matrix_group(5, &[vec![vec![1, 1], vec![1, 1]]], "singular").is_err());
    }
}
