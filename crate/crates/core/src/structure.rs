//! Subgroup machinery: derived series, Sylow and Hall subgroups, cores,
//! p-separability, quotients and the normal subgroup lattice.
//!
//! Subgroups are computed as membership masks over the ambient element list
//! and materialised as [`Group`]s only at the API boundary.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{is_pi_number, p_part, pi_part, prime_divisors};
use crate::error::{Error, Result};
use crate::group::{make_group_capped, Group};
use crate::perm::Permutation;

/// Default cap on the number of normal subgroups enumerated.
pub const LATTICE_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    DerivedSeries,
    CoreSeries,
}

/// A descending normal series `G = terms[0] > terms[1] > ...`.
///
/// For a core series, `step_labels[i]` names the factor `terms[i]/terms[i+1]`
/// (`"p-group"` or `"p'-group"`). A negative answer ends at a nontrivial term
/// where the series stalls.
#[derive(Clone, Debug)]
pub struct SeriesCertificate {
    pub kind: SeriesKind,
    pub terms: Vec<Group>,
    pub step_labels: Vec<String>,
}

impl SeriesCertificate {
    pub fn orders(&self) -> Vec<usize> {
        self.terms.iter().map(Group::order).collect()
    }
}

pub(crate) fn indices(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect()
}

fn count(mask: &[bool]) -> usize {
    mask.iter().filter(|&&b| b).count()
}

/// Mask of the subgroup generated by `elems`, adding generators only when
/// they are not yet inside. `None` once the closure exceeds `limit`.
pub(crate) fn closure_of_set(g: &Group, elems: &[usize], limit: usize) -> Option<Vec<bool>> {
    let mut gens = Vec::new();
    let mut mask = vec![false; g.order()];
    mask[0] = true;
    for &e in elems {
        if !mask[e] {
            gens.push(e);
            mask = g.closure_mask(&gens, limit)?;
        }
    }
    Some(mask)
}

/// Mask of the normal closure of `seeds` in `g`.
pub(crate) fn normal_closure_mask(g: &Group, seeds: &[usize]) -> Vec<bool> {
    let ggens = g.generator_indices();
    let mut gens: Vec<usize> = Vec::new();
    let mut mask = vec![false; g.order()];
    mask[0] = true;
    let mut pending: Vec<usize> = seeds.to_vec();
    while let Some(x) = pending.pop() {
        if mask[x] {
            continue;
        }
        gens.push(x);
        mask = g.closure_mask(&gens, usize::MAX).unwrap();
        for &s in &ggens {
            for &h in &gens {
                let c = g.conj(h, s);
                if !mask[c] {
                    pending.push(c);
                }
            }
        }
    }
    mask
}

fn elements_where(g: &Group, pred: impl Fn(u64) -> bool) -> Vec<usize> {
    (0..g.order()).filter(|&i| pred(g.order_of(i))).collect()
}

/// `[G, G]`.
pub fn derived_subgroup(g: &Group) -> Group {
    let gens = g.generator_indices();
    let mut comms = Vec::new();
    for (k, &a) in gens.iter().enumerate() {
        for &b in &gens[k + 1..] {
            let c = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
            if c != 0 {
                comms.push(c);
            }
        }
    }
    let mask = normal_closure_mask(g, &comms);
    g.subgroup_from_indices(&indices(&mask), &format!("[{0},{0}]", g.name()))
}

/// Solubility via the derived series; the certificate is the series itself.
pub fn is_soluble(g: &Group) -> (bool, SeriesCertificate) {
    let mut terms = vec![g.clone()];
    loop {
        let last = terms.last().unwrap();
        if last.is_trivial() {
            break;
        }
        let next = derived_subgroup(last);
        if next.order() == last.order() {
            break;
        }
        terms.push(next);
    }
    let soluble = terms.last().unwrap().is_trivial();
    let labels = vec!["abelian".to_string(); terms.len() - 1];
    (
        soluble,
        SeriesCertificate {
            kind: SeriesKind::DerivedSeries,
            terms,
            step_labels: labels,
        },
    )
}

/// Elements of `g` normalising the subgroup with the given mask and generators.
fn normalizer(g: &Group, mask: &[bool], gens: &[usize]) -> Vec<usize> {
    (0..g.order())
        .filter(|&x| gens.iter().all(|&h| mask[g.conj(h, x)]))
        .collect()
}

pub(crate) fn sylow_mask(g: &Group, p: u64) -> Vec<bool> {
    let target = p_part(g.order_u64(), p) as usize;
    let mut gens: Vec<usize> = Vec::new();
    let mut mask = vec![false; g.order()];
    mask[0] = true;
    while count(&mask) < target {
        let norm = normalizer(g, &mask, &gens);
        let step = norm
            .iter()
            .copied()
            .filter(|&x| !mask[x] && p_part(g.order_of(x), p) == g.order_of(x))
            .map(|x| {
                // push x down until its image in N/P has order exactly p
                let mut y = x;
                while !mask[g.pow(y, p)] {
                    y = g.pow(y, p);
                }
                y
            })
            .next()
            .expect("a non-Sylow p-subgroup has p dividing its normaliser index");
        gens.push(step);
        mask = g.closure_mask(&gens, usize::MAX).unwrap();
    }
    mask
}

/// A Sylow p-subgroup, grown by ascent through normalisers.
pub fn sylow(g: &Group, p: u64) -> Group {
    let mask = sylow_mask(g, p);
    g.subgroup_from_indices(&indices(&mask), &format!("Syl{p}({})", g.name()))
}

pub(crate) fn p_core_mask(g: &Group, p: u64) -> Vec<bool> {
    let syl = sylow_mask(g, p);
    let mut mask = vec![false; g.order()];
    for c in g.classes() {
        if c.members.iter().all(|&m| syl[m]) {
            for &m in &c.members {
                mask[m] = true;
            }
        }
    }
    mask
}

/// `O_p(G)`: the union of the classes contained in one Sylow p-subgroup.
pub fn p_core(g: &Group, p: u64) -> Group {
    let mask = p_core_mask(g, p);
    g.subgroup_from_indices(&indices(&mask), &format!("O{p}({})", g.name()))
}

/// Largest normal π-subgroup as a mask: an element lies in it exactly when
/// its normal closure is a π-group.
pub(crate) fn pi_core_mask(g: &Group, pi: &BTreeSet<u64>) -> Vec<bool> {
    let limit = pi_part(g.order_u64(), pi) as usize;
    let mut mask = vec![false; g.order()];
    mask[0] = true;
    for c in g.classes() {
        if c.is_central && c.members[0] == 0 || !is_pi_number(c.element_order, pi) {
            continue;
        }
        if let Some(closure) = closure_of_set(g, &c.members, limit) {
            if is_pi_number(count(&closure) as u64, pi) {
                for &m in &c.members {
                    mask[m] = true;
                }
            }
        }
    }
    mask
}

/// `O_π(G)`.
pub fn pi_core(g: &Group, pi: &BTreeSet<u64>) -> Group {
    let mask = pi_core_mask(g, pi);
    g.subgroup_from_indices(&indices(&mask), &format!("O_pi({})", g.name()))
}

pub(crate) fn complement_primes(g: &Group, p: u64) -> BTreeSet<u64> {
    let mut pi = prime_divisors(g.order_u64());
    pi.remove(&p);
    pi
}

/// `O_{p'}(G)`.
pub fn p_prime_core(g: &Group, p: u64) -> Group {
    let mask = pi_core_mask(g, &complement_primes(g, p));
    g.subgroup_from_indices(&indices(&mask), &format!("O{p}'({})", g.name()))
}

/// A quotient group with the projection from the ambient group.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: Group,
    /// `projection[i]` is the index in `group` of the image of element `i`.
    pub projection: Vec<usize>,
}

impl Quotient {
    /// Full preimage (as an ambient mask) of a set of quotient elements.
    pub fn preimage_mask(&self, quotient_mask: &[bool]) -> Vec<bool> {
        self.projection.iter().map(|&q| quotient_mask[q]).collect()
    }
}

/// `G/N` acting on the right cosets of `N`.
pub fn quotient(g: &Group, n: &Group) -> Result<Quotient> {
    let mask = g.mask_of_group(n)?;
    if !g.is_normal_subgroup(n) {
        return Err(Error::NotNormal {
            group: g.name().to_string(),
        });
    }
    Ok(quotient_by_mask(g, &mask, &format!("{}/{}", g.name(), n.name())))
}

pub(crate) fn quotient_by_mask(g: &Group, mask: &[bool], name: &str) -> Quotient {
    let members = indices(mask);
    if members.len() == 1 {
        return Quotient {
            group: g.clone().with_name(name),
            projection: (0..g.order()).collect(),
        };
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &m in &members {
            coset_of[g.mul(m, x)] = c;
        }
    }
    let k = reps.len();
    let gens = g.generator_indices();
    let perms: Vec<Permutation> = gens
        .iter()
        .map(|&s| {
            Permutation::from_images(reps.iter().map(|&r| coset_of[g.mul(r, s)]).collect())
                .expect("cosets are permuted")
        })
        .collect();
    let group = make_group_capped(k, &perms, name, usize::MAX).expect("quotient closure");
    let qgens: Vec<usize> = perms.iter().map(|p| group.index_of(p).unwrap()).collect();
    let mut projection = vec![usize::MAX; g.order()];
    projection[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&s, &qs) in gens.iter().zip(&qgens) {
            let y = g.mul(x, s);
            if projection[y] == usize::MAX {
                projection[y] = group.mul(projection[x], qs);
                queue.push_back(y);
            }
        }
    }
    Quotient { group, projection }
}

/// Decides p-separability by stripping `O_p` and `O_{p'}` layers; the
/// certificate lists the preimages in `G`, from `G` down to the trivial group.
pub fn is_p_separable(g: &Group, p: u64) -> (bool, SeriesCertificate) {
    let n = g.order();
    let mut ascending: Vec<(Vec<bool>, &'static str)> = Vec::new();
    let mut current = vec![false; n];
    current[0] = true;
    let mut q = quotient_by_mask(g, &current, g.name());
    let separable = loop {
        if q.group.is_trivial() {
            break true;
        }
        let (qmask, label) = {
            let op = p_core_mask(&q.group, p);
            if count(&op) > 1 {
                (op, "p-group")
            } else {
                let opp = pi_core_mask(&q.group, &complement_primes(&q.group, p));
                if count(&opp) > 1 {
                    (opp, "p'-group")
                } else {
                    break false;
                }
            }
        };
        current = q.preimage_mask(&qmask);
        ascending.push((current.clone(), label));
        q = quotient_by_mask(g, &current, g.name());
    };
    // descending: G, then the preimages from the top down, then 1
    let mut terms = vec![g.clone()];
    let mut labels = Vec::new();
    if !separable && !ascending.is_empty() {
        labels.push("stalled".to_string());
    }
    for (k, (mask, label)) in ascending.iter().enumerate().rev() {
        if k + 1 < ascending.len() || !separable {
            terms.push(g.subgroup_from_indices(&indices(mask), &format!("{}_{k}", g.name())));
        }
        labels.push(label.to_string());
    }
    if !ascending.is_empty() {
        terms.push(Group::trivial(g.degree()));
    }
    (
        separable,
        SeriesCertificate {
            kind: SeriesKind::CoreSeries,
            terms,
            step_labels: labels,
        },
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreedyOrder {
    ByDescendingElementOrder,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HallSearchConfig {
    pub restarts: usize,
    pub seed: u64,
    pub greedy_order: GreedyOrder,
}

impl Default for HallSearchConfig {
    fn default() -> Self {
        Self {
            restarts: 200,
            seed: 0xC1A55,
            greedy_order: GreedyOrder::ByDescendingElementOrder,
        }
    }
}

/// Mask of a Hall π-subgroup: greedy growth over π-elements, repeated until
/// no element extends the current π-subgroup, with seeded restarts.
pub(crate) fn hall_mask(g: &Group, pi: &BTreeSet<u64>, cfg: &HallSearchConfig) -> Result<Vec<bool>> {
    let target = pi_part(g.order_u64(), pi) as usize;
    let mut candidates: Vec<usize> = (1..g.order())
        .filter(|&i| is_pi_number(g.order_of(i), pi))
        .collect();
    if target == 1 {
        let mut m = vec![false; g.order()];
        m[0] = true;
        return Ok(m);
    }
    let restarts = cfg.restarts.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for attempt in 0..restarts {
        if attempt == 0 && cfg.greedy_order == GreedyOrder::ByDescendingElementOrder {
            candidates.sort_by_key(|&i| (std::cmp::Reverse(g.order_of(i)), i));
        } else {
            candidates.shuffle(&mut rng);
        }
        let mut gens: Vec<usize> = Vec::new();
        let mut mask = vec![false; g.order()];
        mask[0] = true;
        loop {
            let mut grew = false;
            for &x in &candidates {
                if mask[x] {
                    continue;
                }
                gens.push(x);
                match g.closure_mask(&gens, target) {
                    Some(m) if is_pi_number(count(&m) as u64, pi) => {
                        mask = m;
                        grew = true;
                    }
                    _ => {
                        gens.pop();
                    }
                }
            }
            if count(&mask) == target {
                return Ok(mask);
            }
            if !grew {
                break;
            }
        }
    }
    Err(Error::HallSearchExhausted { restarts })
}

/// A Hall π-subgroup.
pub fn hall_subgroup(g: &Group, pi: &BTreeSet<u64>, cfg: &HallSearchConfig) -> Result<Group> {
    let mask = hall_mask(g, pi, cfg)?;
    Ok(g.subgroup_from_indices(&indices(&mask), &format!("Hall({})", g.name())))
}

/// A Hall p'-subgroup.
pub fn p_complement(g: &Group, p: u64, cfg: &HallSearchConfig) -> Result<Group> {
    let mask = hall_mask(g, &complement_primes(g, p), cfg)?;
    Ok(g.subgroup_from_indices(&indices(&mask), &format!("H{p}'({})", g.name())))
}

/// A normal subgroup as an element mask together with the classes it contains.
#[derive(Clone, Debug)]
pub struct NormalSubgroup {
    pub mask: Vec<bool>,
    pub classes: Vec<usize>,
    pub order: usize,
}

/// All normal subgroups as masks, sorted by order and then class set.
pub fn normal_subgroup_masks(g: &Group, cap: usize) -> Result<Vec<NormalSubgroup>> {
    let classes = g.classes();
    let key_of = |mask: &[bool]| -> Vec<usize> {
        classes
            .iter()
            .enumerate()
            .filter(|(_, c)| mask[c.members[0]])
            .map(|(i, _)| i)
            .collect()
    };
    let mut found: HashMap<Vec<usize>, (Vec<bool>, Vec<usize>)> = HashMap::new();
    let mut order: Vec<Vec<usize>> = Vec::new();
    let push = |mask: Vec<bool>,
                    gens: Vec<usize>,
                    found: &mut HashMap<Vec<usize>, (Vec<bool>, Vec<usize>)>,
                    order: &mut Vec<Vec<usize>>|
     -> Result<bool> {
        let key = key_of(&mask);
        if found.contains_key(&key) {
            return Ok(false);
        }
        if found.len() >= cap {
            return Err(Error::LatticeCapExceeded { cap });
        }
        found.insert(key.clone(), (mask, gens));
        order.push(key);
        Ok(true)
    };
    let mut trivial = vec![false; g.order()];
    trivial[0] = true;
    push(trivial, vec![], &mut found, &mut order)?;
    for c in classes {
        let mask = closure_of_set(g, &c.members, usize::MAX).unwrap();
        let gens = g.generating_subset(&indices(&mask));
        push(mask, gens, &mut found, &mut order)?;
    }
    // close under joins
    let mut i = 0;
    while i < order.len() {
        let mut j = 0;
        while j < i {
            let (ga, gb) = (&found[&order[i]].1, &found[&order[j]].1);
            let (ma, mb) = (&found[&order[i]].0, &found[&order[j]].0);
            let contained = ma.iter().zip(mb).all(|(a, b)| !*b || *a)
                || ma.iter().zip(mb).all(|(a, b)| !*a || *b);
            if !contained {
                let mut gens = ga.clone();
                gens.extend(gb);
                let mask = g.closure_mask(&gens, usize::MAX).unwrap();
                let gens = g.generating_subset(&indices(&mask));
                push(mask, gens, &mut found, &mut order)?;
            }
            j += 1;
        }
        i += 1;
    }
    let mut out: Vec<NormalSubgroup> = order
        .into_iter()
        .map(|key| {
            let (mask, _) = found.remove(&key).unwrap();
            NormalSubgroup {
                order: count(&mask),
                mask,
                classes: key,
            }
        })
        .collect();
    out.sort_by(|a, b| (a.order, &a.classes).cmp(&(b.order, &b.classes)));
    Ok(out)
}

/// All normal subgroups, including `1` and `G`.
pub fn normal_subgroups(g: &Group) -> Result<Vec<Group>> {
    Ok(normal_subgroup_masks(g, LATTICE_CAP)?
        .iter()
        .map(|n| g.subgroup_from_indices(&indices(&n.mask), &format!("N{}", n.order)))
        .collect())
}

/// Elements of `g` whose order divides a power of `p`.
pub fn p_elements(g: &Group, p: u64) -> Vec<usize> {
    elements_where(g, |o| p_part(o, p) == o)
}
