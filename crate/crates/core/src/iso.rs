//! Isomorphism testing for small groups: invariant fingerprints, then
//! backtracking over images of a generating set.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{center, Group};
use crate::structure::derived_subgroup;

/// Default cap on the order of groups passed to the isomorphism test.
pub const ISO_CAP: usize = 1024;

/// Isomorphism invariants compared before any search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub order: usize,
    /// Element order -> number of elements.
    pub element_orders: BTreeMap<u64, usize>,
    /// Class size -> number of classes.
    pub class_sizes: BTreeMap<u64, usize>,
    pub center_order: usize,
    pub derived_order: usize,
}

pub fn fingerprint(g: &Group) -> Fingerprint {
    let mut element_orders = BTreeMap::new();
    for &o in g.element_orders() {
        *element_orders.entry(o).or_insert(0) += 1;
    }
    let mut class_sizes = BTreeMap::new();
    for c in g.classes() {
        *class_sizes.entry(c.size).or_insert(0) += 1;
    }
    Fingerprint {
        order: g.order(),
        element_orders,
        class_sizes,
        center_order: center(g).order(),
        derived_order: derived_subgroup(g).order(),
    }
}

pub fn is_isomorphic(a: &Group, b: &Group) -> Result<bool> {
    Ok(find_isomorphism(a, b)?.is_some())
}

/// An isomorphism `a -> b` as a map on element indices, if one exists.
pub fn find_isomorphism(a: &Group, b: &Group) -> Result<Option<Vec<usize>>> {
    find_isomorphism_capped(a, b, ISO_CAP)
}

pub fn find_isomorphism_capped(a: &Group, b: &Group, cap: usize) -> Result<Option<Vec<usize>>> {
    for g in [a, b] {
        if g.order() > cap {
            return Err(Error::IsoCapExceeded {
                order: g.order(),
                cap,
            });
        }
    }
    if fingerprint(a) != fingerprint(b) {
        return Ok(None);
    }
    let gens = small_generating_set(a);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| {
            (0..b.order())
                .filter(|&y| {
                    b.order_of(y) == a.order_of(x) && b.class_size_of(y) == a.class_size_of(x)
                })
                .collect()
        })
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    Ok(search(a, b, &gens, &candidates, &mut images))
}

/// Drops redundant generators, preferring elements of large order.
fn small_generating_set(g: &Group) -> Vec<usize> {
    let mut pool = g.generator_indices();
    pool.sort_by_key(|&i| (std::cmp::Reverse(g.order_of(i)), i));
    pool.dedup();
    let mut gens = Vec::new();
    let mut mask = vec![false; g.order()];
    mask[0] = true;
    for x in pool {
        if !mask[x] {
            gens.push(x);
            mask = g.closure_mask(&gens, usize::MAX).unwrap();
        }
    }
    gens
}

fn search(
    a: &Group,
    b: &Group,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let k = images.len();
    if k == gens.len() {
        let map = extend(a, b, gens, images)?;
        let mut hit = vec![false; b.order()];
        for &y in &map {
            if hit[y] {
                return None;
            }
            hit[y] = true;
        }
        return Some(map);
    }
    for &y in &candidates[k] {
        images.push(y);
        if extend(a, b, &gens[..=k], images).is_some() {
            if let Some(map) = search(a, b, gens, candidates, images) {
                return Some(map);
            }
        }
        images.pop();
    }
    None
}

/// Extends `gens[i] -> images[i]` along the Cayley graph of `<gens>`; `None`
/// on an inconsistency or when the image subgroup is too small.
fn extend(a: &Group, b: &Group, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; a.order()];
    map[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut reached = 1;
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = a.mul(x, s);
            let fy = b.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = fy;
                reached += 1;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    let mut seen = std::collections::HashSet::with_capacity(reached);
    for &v in map.iter().filter(|&&v| v != usize::MAX) {
        if !seen.insert(v) {
            return None;
        }
    }
    Some(map)
}
