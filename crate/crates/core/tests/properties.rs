use std::collections::BTreeSet;

use proptest::prelude::*;

use classgraph::arith::{gcd, is_prime, prime_divisors};
use classgraph::classifier::{pi_class_size_criterion, PiMode};
use classgraph::constructions::{cyclic, semidirect_product_with_factors, ActionSpec};
use classgraph::corpus::{parse_corpus, serialize_corpus, GroupSpec};
use classgraph::graph::{build_graph, find_triangle, is_triangle_free};
use classgraph::structure::{
    is_p_separable, is_soluble, normal_subgroups, p_complement, quotient, sylow, HallSearchConfig,
};
use classgraph::{make_group, Group, Permutation};

fn permutation(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

/// Groups generated by one to three random permutations of degree up to 6.
fn small_group() -> impl Strategy<Value = Group> {
    (2usize..=6)
        .prop_flat_map(|d| prop::collection::vec(permutation(d), 1..=3).prop_map(move |g| (d, g)))
        .prop_map(|(d, gens)| make_group(d, &gens, "G").unwrap())
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_axioms(g in small_group(), seed in any::<u64>()) {
        let n = g.order();
        let pick = |k: u64| (seed.wrapping_mul(k).wrapping_add(k) % n as u64) as usize;
        let (a, b, c) = (pick(3), pick(7), pick(11));
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(0, a), a);
        prop_assert_eq!(g.mul(a, g.inv(a)), 0);
        let product = g.element(a).then(g.element(b));
        prop_assert_eq!(g.index_of(&product), Some(g.mul(a, b)));
        prop_assert_eq!(n as u64 % g.order_of(a), 0);
    }

    #[test]
    fn class_sizes_partition_and_divide(g in small_group()) {
        let total: u64 = g.classes().iter().map(|c| c.size).sum();
        prop_assert_eq!(total, g.order_u64());
        for c in g.classes() {
            prop_assert_eq!(g.order_u64() % c.size, 0);
            prop_assert_eq!(c.members.len() as u64, c.size);
        }
    }

    #[test]
    fn corpus_round_trip(g in small_group(), tags in prop::collection::vec("[a-z]{1,6}", 0..3)) {
        let spec = GroupSpec::from_group(&g, &tags);
        let text = serialize_corpus(std::slice::from_ref(&spec));
        let parsed = parse_corpus(&text).unwrap();
        prop_assert_eq!(&parsed, &vec![spec]);
        prop_assert_eq!(parsed[0].to_group(1000).unwrap().order(), g.order());
    }

    #[test]
    fn cycle_notation_round_trip(p in (1usize..=9).prop_flat_map(permutation)) {
        let text = p.to_cycle_string();
        prop_assert_eq!(Permutation::parse_cycles(&text, p.degree()).unwrap(), p);
    }

    #[test]
    fn metacyclic_semidirect_invariants(n in 3usize..=13, m in 2usize..=6, u in 1usize..13) {
        // Action of a generator of C_m on C_n by x -> x^u needs u^m = 1 mod n.
        let u = u % n;
        prop_assume!(u > 0 && gcd(u as u64, n as u64) == 1);
        prop_assume!((0..m).fold(1, |acc, _| acc * u % n) == 1 % n);
        let k = cyclic(n).unwrap();
        let h = cyclic(m).unwrap();
        let kg = &k.generators()[0];
        let action = ActionSpec { images: vec![vec![kg.pow(u as u64)]] };
        let sp = semidirect_product_with_factors(&k, &h, &action, "K:H").unwrap();
        prop_assert_eq!(sp.group.order(), n * m);
        prop_assert!(sp.group.is_normal_subgroup(&sp.normal));
        prop_assert_eq!(sp.normal.intersection(&sp.complement, "meet").order(), 1);
        prop_assert_eq!(sp.complement.order(), m);
        prop_assert_eq!(sp.group.is_abelian(), u == 1 % n);
    }

    #[test]
    fn graph_invariants(g in small_group(), p in prime()) {
        let graph = build_graph(&g, Some(p));
        for (i, v) in graph.vertices.iter().enumerate() {
            prop_assert!(!v.is_central && v.element_order % p != 0);
            for (j, w) in graph.vertices.iter().enumerate().skip(i + 1) {
                let joined = graph.edges.contains(&(i, j));
                prop_assert_eq!(joined, gcd(v.size, w.size) > 1);
            }
        }
        let covered: BTreeSet<usize> = graph.components.iter().flatten().copied().collect();
        prop_assert_eq!(covered.len(), graph.vertex_count());
        prop_assert_eq!(is_triangle_free(&graph), find_triangle(&graph).is_none());
        if is_p_separable(&g, p).0 && graph.components.len() > 1 {
            prop_assert_eq!(graph.components.len(), 2);
            for comp in &graph.components {
                for &a in comp {
                    for &b in comp {
                        prop_assert!(a == b || graph.adjacent(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn complements_and_sylows_multiply(g in small_group(), p in prime()) {
        prop_assume!(is_p_separable(&g, p).0);
        let h = p_complement(&g, p, &HallSearchConfig::default()).unwrap();
        prop_assert_eq!(h.order() * sylow(&g, p).order(), g.order());
    }

    #[test]
    fn class_size_criterion_is_biconditional(g in small_group(), p in prime()) {
        prop_assume!(is_soluble(&g).0);
        let pi: BTreeSet<u64> = [p].into();
        for mode in [PiMode::PiNumber, PiMode::PiPrimeNumber] {
            let (lhs, rhs) = pi_class_size_criterion(&g, &pi, mode, &HallSearchConfig::default()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn quotients_have_the_right_order(g in small_group()) {
        for n in normal_subgroups(&g).unwrap() {
            let q = quotient(&g, &n).unwrap();
            prop_assert_eq!(q.group.order() * n.order(), g.order());
            for a in 0..g.order().min(24) {
                for b in 0..g.order().min(24) {
                    prop_assert_eq!(
                        q.projection[g.mul(a, b)],
                        q.group.mul(q.projection[a], q.projection[b])
                    );
                }
            }
        }
    }

    #[test]
    fn prime_factors_multiply_back(n in 1u64..5000) {
        let mut m = n;
        for p in prime_divisors(n) {
            prop_assert!(is_prime(p));
            while m % p == 0 {
                m /= p;
            }
        }
        prop_assert_eq!(m, 1);
    }
}
