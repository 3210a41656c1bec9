//! Finite permutation groups held as a fully enumerated element list.
//!
//! Elements are enumerated breadth-first from the identity by right
//! multiplication with the generators; each new layer is sorted
//! lexicographically, so element indices are reproducible. Index 0 is
//! always the identity.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::arith::prime_divisors;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default cap on the order of any group built by closure.
pub const DEFAULT_ORDER_CAP: usize = 20_000;

/// Groups up to this order get a lazily built Cayley table.
const TABLE_LIMIT: usize = 2048;

#[derive(Clone)]
pub struct Group {
    name: String,
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    table: OnceLock<Vec<u32>>,
    inverses: OnceLock<Vec<u32>>,
    orders: OnceLock<Vec<u64>>,
    classes: OnceLock<ClassData>,
}

/// A conjugacy class `b^G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjClass {
    pub representative: Permutation,
    pub size: u64,
    pub element_order: u64,
    pub is_central: bool,
    /// Prime divisors of `size`.
    pub prime_support: BTreeSet<u64>,
    /// Indices (into the owning group's element list) of the members.
    pub members: Vec<usize>,
}

impl ConjClass {
    pub fn is_p_regular(&self, p: u64) -> bool {
        self.element_order % p != 0
    }
}

#[derive(Clone)]
struct ClassData {
    classes: Vec<ConjClass>,
    class_of: Vec<usize>,
}

/// Builds the closure of `generators` with the default order cap.
pub fn make_group(degree: usize, generators: &[Permutation], name: &str) -> Result<Group> {
    make_group_capped(degree, generators, name, DEFAULT_ORDER_CAP)
}

pub fn make_group_capped(
    degree: usize,
    generators: &[Permutation],
    name: &str,
    cap: usize,
) -> Result<Group> {
    if degree == 0 {
        return Err(Error::ZeroDegree);
    }
    for g in generators {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
    }
    let id = Permutation::identity(degree);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::new();
    index.insert(id, 0usize);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut layer = BTreeSet::new();
        for &i in &frontier {
            for g in generators {
                let p = elements[i].then(g);
                if !index.contains_key(&p) {
                    layer.insert(p);
                }
            }
        }
        if elements.len() + layer.len() > cap {
            return Err(Error::OrderCapExceeded { cap });
        }
        frontier.clear();
        for p in layer {
            frontier.push(elements.len());
            index.insert(p.clone(), elements.len());
            elements.push(p);
        }
    }
    Ok(Group {
        name: name.to_string(),
        degree,
        generators: generators.to_vec(),
        elements,
        index,
        table: OnceLock::new(),
        inverses: OnceLock::new(),
        orders: OnceLock::new(),
        classes: OnceLock::new(),
    })
}

impl Group {
    pub fn trivial(degree: usize) -> Self {
        make_group(degree.max(1), &[], "1").expect("trivial group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn order_u64(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.index.contains_key(g)
    }

    /// True when every element of `h` lies in `self` (same degree required).
    pub fn contains_group(&self, h: &Group) -> bool {
        h.degree == self.degree && h.elements.iter().all(|g| self.contains(g))
    }

    pub fn identity(&self) -> &Permutation {
        &self.elements[0]
    }

    fn table(&self) -> Option<&Vec<u32>> {
        let n = self.order();
        if n > TABLE_LIMIT {
            return None;
        }
        Some(self.table.get_or_init(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &self.elements {
                for b in &self.elements {
                    t.push(self.index[&a.then(b)] as u32);
                }
            }
            t
        }))
    }

    /// Index of the product `elements[i] * elements[j]`.
    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        match self.table() {
            Some(t) => t[i * self.order() + j] as usize,
            None => self.index[&self.elements[i].then(&self.elements[j])],
        }
    }

    #[inline]
    pub fn inv(&self, i: usize) -> usize {
        self.inverses.get_or_init(|| {
            self.elements
                .iter()
                .map(|g| self.index[&g.inverse()] as u32)
                .collect()
        })[i] as usize
    }

    /// `x^g = g^-1 x g` on indices.
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    #[inline]
    pub fn commute(&self, x: usize, y: usize) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    /// `x^e` on indices.
    pub fn pow(&self, x: usize, mut e: u64) -> usize {
        let mut base = x;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_orders(&self) -> &[u64] {
        self.orders
            .get_or_init(|| self.elements.iter().map(|g| g.order()).collect())
    }

    pub fn order_of(&self, i: usize) -> u64 {
        self.element_orders()[i]
    }

    pub fn generator_indices(&self) -> Vec<usize> {
        self.generators.iter().map(|g| self.index[g]).collect()
    }

    /// Membership mask of the subgroup generated by `gens` (indices).
    /// Gives up with `None` as soon as the closure exceeds `limit` elements.
    pub fn closure_mask(&self, gens: &[usize], limit: usize) -> Option<Vec<bool>> {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut count = 1;
        let mut queue = VecDeque::from([0usize]);
        let gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    count += 1;
                    if count > limit {
                        return None;
                    }
                    queue.push_back(y);
                }
            }
        }
        Some(mask)
    }

    pub fn closure_indices(&self, gens: &[usize]) -> Vec<usize> {
        mask_to_indices(&self.closure_mask(gens, usize::MAX).unwrap())
    }

    /// A small generating set (indices) for the subgroup with the given members,
    /// chosen greedily in index order.
    pub fn generating_subset(&self, members: &[usize]) -> Vec<usize> {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut gens = Vec::new();
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        for &m in &sorted {
            if !mask[m] {
                gens.push(m);
                mask = self.closure_mask(&gens, usize::MAX).unwrap();
            }
        }
        gens
    }

    /// Materialises a subgroup given as a closed set of element indices.
    pub fn subgroup_from_indices(&self, members: &[usize], name: &str) -> Group {
        let gens = self.generating_subset(members);
        let perms: Vec<Permutation> = gens.iter().map(|&i| self.elements[i].clone()).collect();
        let h = make_group_capped(self.degree, &perms, name, usize::MAX)
            .expect("subgroup of an enumerated group");
        debug_assert_eq!(h.order(), members.len(), "member set was not closed");
        h
    }

    /// Subgroup generated by the given elements of `self`.
    pub fn subgroup_generated(&self, gens: &[usize], name: &str) -> Group {
        let members = self.closure_indices(gens);
        self.subgroup_from_indices(&members, name)
    }

    /// Indices in `self` of the elements of `h` (which must be a subgroup).
    pub fn indices_of_group(&self, h: &Group) -> Result<Vec<usize>> {
        h.elements
            .iter()
            .map(|g| {
                self.index_of(g).ok_or_else(|| Error::NotASubgroup {
                    group: self.name.clone(),
                })
            })
            .collect()
    }

    pub fn mask_of_group(&self, h: &Group) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.order()];
        for i in self.indices_of_group(h)? {
            mask[i] = true;
        }
        Ok(mask)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter()
            .enumerate()
            .all(|(k, a)| gens[k + 1..].iter().all(|b| a.then(b) == b.then(a)))
    }

    /// Checks normality of the subgroup `h` by conjugating its generators
    /// by the generators of `self`.
    pub fn is_normal_subgroup(&self, h: &Group) -> bool {
        if !self.contains_group(h) {
            return false;
        }
        self.generators
            .iter()
            .all(|g| h.generators.iter().all(|x| h.contains(&x.conjugate_by(g))))
    }

    pub fn intersection(&self, h: &Group, name: &str) -> Group {
        let members: Vec<usize> = (0..self.order())
            .filter(|&i| h.contains(&self.elements[i]))
            .collect();
        self.subgroup_from_indices(&members, name)
    }

    fn class_data(&self) -> &ClassData {
        self.classes.get_or_init(|| compute_classes(self))
    }

    /// Conjugacy classes ordered by size, then element order, then representative.
    pub fn classes(&self) -> &[ConjClass] {
        &self.class_data().classes
    }

    /// Position in [`Group::classes`] of the class containing element `i`.
    pub fn class_index_of(&self, i: usize) -> usize {
        self.class_data().class_of[i]
    }

    pub fn class_size_of(&self, i: usize) -> u64 {
        self.classes()[self.class_index_of(i)].size
    }
}

fn mask_to_indices(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect()
}

fn compute_classes(g: &Group) -> ClassData {
    let n = g.order();
    let gens = &g.generators;
    let mut class_of = vec![usize::MAX; n];
    let mut raw: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = raw.len();
        class_of[start] = id;
        let mut members = vec![start];
        let mut k = 0;
        while k < members.len() {
            let x = &g.elements[members[k]];
            for s in gens {
                let y = g.index[&x.conjugate_by(s)];
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    members.push(y);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        raw.push(members);
    }
    let orders = g.element_orders();
    let mut classes: Vec<ConjClass> = raw
        .into_iter()
        .map(|members| {
            let rep = members
                .iter()
                .map(|&i| &g.elements[i])
                .min()
                .unwrap()
                .clone();
            let size = members.len() as u64;
            ConjClass {
                element_order: orders[members[0]],
                representative: rep,
                size,
                is_central: size == 1,
                prime_support: prime_divisors(size),
                members,
            }
        })
        .collect();
    classes.sort_by(|a, b| {
        (a.size, a.element_order, &a.representative).cmp(&(
            b.size,
            b.element_order,
            &b.representative,
        ))
    });
    let mut class_of = vec![0; n];
    for (ci, c) in classes.iter().enumerate() {
        for &m in &c.members {
            class_of[m] = ci;
        }
    }
    ClassData { classes, class_of }
}

/// `C_G(x)`.
pub fn centralizer(g: &Group, x: &Permutation) -> Result<Group> {
    let xi = g.index_of(x).ok_or_else(|| Error::NotAMember {
        group: g.name.clone(),
    })?;
    let members: Vec<usize> = (0..g.order()).filter(|&y| g.commute(xi, y)).collect();
    Ok(g.subgroup_from_indices(&members, &format!("C({})", g.name)))
}

/// Indices of `C_G(x)` for an element index.
pub fn centralizer_indices(g: &Group, xi: usize) -> Vec<usize> {
    (0..g.order()).filter(|&y| g.commute(xi, y)).collect()
}

/// `Z(G)`.
pub fn center(g: &Group) -> Group {
    let gens = g.generator_indices();
    let members: Vec<usize> = (0..g.order())
        .filter(|&x| gens.iter().all(|&s| g.commute(x, s)))
        .collect();
    g.subgroup_from_indices(&members, &format!("Z({})", g.name))
}

pub fn conjugacy_classes(g: &Group) -> Vec<ConjClass> {
    g.classes().to_vec()
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    fn sigma3() -> Group {
        make_group(3, &[p("(1,2)", 3), p("(1,2,3)", 3)], "Sigma3").unwrap()
    }

    /// Class sizes by conjugating every element by every element.
    fn brute_class_sizes(g: &Group) -> Vec<u64> {
        let mut seen = BTreeSet::new();
        let mut sizes = Vec::new();
        for x in g.elements() {
            if seen.contains(x) {
                continue;
            }
            let class: BTreeSet<Permutation> =
                g.elements().iter().map(|h| x.conjugate_by(h)).collect();
            sizes.push(class.len() as u64);
            seen.extend(class);
        }
        sizes.sort_unstable();
        sizes
    }

    #[test]
    fn closure_examples() {
        assert_eq!(make_group(3, &[p("(1,2,3)", 3)], "C3").unwrap().order(), 3);
        assert_eq!(sigma3().order(), 6);
        let t = make_group(4, &[], "1").unwrap();
        assert_eq!(t.order(), 1);
        assert!(t.contains(&Permutation::identity(4)));
    }

    #[test]
    fn closure_errors() {
        assert_eq!(
            make_group(3, &[p("(1,2)", 3), p("(1,2)", 4)], "bad").unwrap_err(),
            Error::DegreeMismatch {
                expected: 3,
                found: 4
            }
        );
        let s5 = [p("(1,2)", 5), p("(1,2,3,4,5)", 5)];
        assert_eq!(
            make_group_capped(5, &s5, "S5", 100).unwrap_err(),
            Error::OrderCapExceeded { cap: 100 }
        );
        assert_eq!(make_group_capped(5, &s5, "S5", 120).unwrap().order(), 120);
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a = sigma3();
        let b = sigma3();
        assert_eq!(a.elements(), b.elements());
        assert!(a.elements()[0].is_identity());
    }

    #[test]
    fn centralizers() {
        let s3 = sigma3();
        let c = centralizer(&s3, &Permutation::identity(3)).unwrap();
        assert_eq!(c.order(), 6);
        let c = centralizer(&s3, &p("(1,2)", 3)).unwrap();
        assert_eq!(c.order(), 2);
        assert!(centralizer(&s3, &p("(1,2)", 3).shifted(0, 3)).is_ok());
        let outside = make_group(3, &[p("(1,2,3)", 3)], "C3").unwrap();
        assert!(matches!(
            centralizer(&outside, &p("(1,2)", 3)),
            Err(Error::NotAMember { .. })
        ));
    }

    #[test]
    fn centers() {
        assert!(center(&sigma3()).is_trivial());
        let c4 = make_group(4, &[p("(1,2,3,4)", 4)], "C4").unwrap();
        assert_eq!(center(&c4).order(), 4);
    }

    #[test]
    fn classes_of_small_groups() {
        let s3 = sigma3();
        let sizes: Vec<u64> = s3.classes().iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(sizes, brute_class_sizes(&s3));
        let a4 = make_group(4, &[p("(1,2,3)", 4), p("(2,3,4)", 4)], "A4").unwrap();
        let sizes: Vec<u64> = a4.classes().iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![1, 3, 4, 4]);
        assert_eq!(sizes, brute_class_sizes(&a4));
        for c in a4.classes() {
            let cent = centralizer(&a4, &c.representative).unwrap();
            assert_eq!(c.size * cent.order_u64(), 12);
            assert_eq!(c.is_central, c.size == 1);
            assert_eq!(c.prime_support.is_empty(), c.is_central);
        }
    }

    #[test]
    fn index_arithmetic_matches_permutations() {
        let a4 = make_group(4, &[p("(1,2,3)", 4), p("(2,3,4)", 4)], "A4").unwrap();
        for i in 0..a4.order() {
            assert_eq!(a4.mul(i, a4.inv(i)), 0);
            for j in 0..a4.order() {
                assert_eq!(
                    a4.element(a4.mul(i, j)),
                    &a4.element(i).then(a4.element(j))
                );
            }
        }
    }

    #[test]
    fn subgroups_from_indices() {
        let a4 = make_group(4, &[p("(1,2,3)", 4), p("(2,3,4)", 4)], "A4").unwrap();
        let v4: Vec<usize> = (0..12).filter(|&i| a4.order_of(i) <= 2).collect();
        let h = a4.subgroup_from_indices(&v4, "V4");
        assert_eq!(h.order(), 4);
        assert!(a4.is_normal_subgroup(&h));
        assert!(h.is_abelian());
        let c3 = a4.subgroup_generated(&[a4.index_of(&p("(1,2,3)", 4)).unwrap()], "C3");
        assert_eq!(c3.order(), 3);
        assert!(!a4.is_normal_subgroup(&c3));
        assert!(a4.intersection(&c3, "x").order() == 3);
    }
}
