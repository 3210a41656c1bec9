//! Common-divisor graphs on conjugacy class sizes.
//!
//! Vertices are the non-central classes (restricted to p-regular classes when
//! a prime is given); two vertices are adjacent when their sizes share a
//! prime factor.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, p_prime_part, prime_divisors};
use crate::error::{Error, Result};
use crate::group::{ConjClass, Group};
use crate::structure::{closure_of_set, indices};

/// The six triangle-free shapes a p-regular class graph can take, plus a
/// catch-all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// Two isolated vertices.
    A,
    /// An edge plus an isolated vertex.
    B,
    /// Two disjoint edges.
    C,
    /// A single vertex.
    D,
    /// A single edge.
    E,
    /// A path on three vertices.
    F,
    Other,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Shape::A => "a",
            Shape::B => "b",
            Shape::C => "c",
            Shape::D => "d",
            Shape::E => "e",
            Shape::F => "f",
            Shape::Other => "other",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct ClassGraph {
    pub prime: Option<u64>,
    pub vertices: Vec<ConjClass>,
    /// Position of each vertex in the group's class list.
    pub class_indices: Vec<usize>,
    /// Edges `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Connected components, each sorted, ordered by smallest vertex.
    pub components: Vec<Vec<usize>>,
    pub shape: Shape,
}

impl ClassGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.vertices.iter().map(|v| v.size).collect()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && gcd(self.vertices[i].size, self.vertices[j].size) > 1
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(move |&u| self.adjacent(v, u))
    }
}

/// Classes of elements of order coprime to `p`, central ones included.
pub fn p_regular_classes(g: &Group, p: u64) -> Vec<ConjClass> {
    g.classes()
        .iter()
        .filter(|c| c.is_p_regular(p))
        .cloned()
        .collect()
}

/// Number of p-regular classes, central ones included.
pub fn count_p_regular_classes(g: &Group, p: u64) -> usize {
    g.classes().iter().filter(|c| c.is_p_regular(p)).count()
}

pub fn build_graph(g: &Group, p: Option<u64>) -> ClassGraph {
    let class_indices: Vec<usize> = g
        .classes()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_central && p.map_or(true, |p| c.is_p_regular(p)))
        .map(|(i, _)| i)
        .collect();
    let vertices: Vec<ConjClass> = class_indices.iter().map(|&i| g.classes()[i].clone()).collect();
    let n = vertices.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if gcd(vertices[i].size, vertices[j].size) > 1 {
                edges.push((i, j));
            }
        }
    }
    let components = components(n, &edges);
    let shape = classify_shape(n, &edges, &components);
    ClassGraph {
        prime: p,
        vertices,
        class_indices,
        edges,
        components,
        shape,
    }
}

fn components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if slot[r] == usize::MAX {
            slot[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[slot[r]].push(v);
    }
    comps
}

fn classify_shape(n: usize, edges: &[(usize, usize)], comps: &[Vec<usize>]) -> Shape {
    let mut degrees = vec![0; n];
    for &(a, b) in edges {
        degrees[a] += 1;
        degrees[b] += 1;
    }
    match (n, edges.len(), comps.len()) {
        (1, 0, 1) => Shape::D,
        (2, 0, 2) => Shape::A,
        (2, 1, 1) => Shape::E,
        (3, 1, 2) => Shape::B,
        (3, 2, 1) => Shape::F,
        (4, 2, 2) if degrees.iter().all(|&d| d == 1) => Shape::C,
        _ => Shape::Other,
    }
}

/// True when no three vertices are pairwise adjacent.
pub fn is_triangle_free(graph: &ClassGraph) -> bool {
    find_triangle(graph).is_none()
}

pub fn find_triangle(graph: &ClassGraph) -> Option<[usize; 3]> {
    let n = graph.vertex_count();
    for a in 0..n {
        for b in a + 1..n {
            if !graph.adjacent(a, b) {
                continue;
            }
            for c in b + 1..n {
                if graph.adjacent(a, c) && graph.adjacent(b, c) {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

/// Largest distance between two vertices of a connected, non-empty graph.
pub fn diameter(graph: &ClassGraph) -> Option<usize> {
    if graph.vertex_count() == 0 || !graph.is_connected() {
        return None;
    }
    let n = graph.vertex_count();
    let mut best = 0;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for u in graph.neighbours(v) {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        best = best.max(*dist.iter().max().unwrap());
    }
    Some(best)
}

/// The subgroup generated by the p-regular classes whose sizes are coprime
/// to a chosen class of maximal size.
#[derive(Clone, Debug)]
pub struct CoprimeSpan {
    pub subgroup: Group,
    /// Membership mask of the subgroup in the ambient group.
    pub mask: Vec<bool>,
    /// The class of maximal size the span is taken against.
    pub b0: ConjClass,
    /// Position of `b0` in the group's class list.
    pub b0_class: usize,
}

/// Span of the p-regular classes coprime in size to the first non-central
/// p-regular class of maximal size.
///
/// Central p-regular classes have size 1 and so always take part, which puts
/// the p'-part of the center inside the span.
pub fn coprime_class_span(g: &Group, p: u64) -> Result<CoprimeSpan> {
    let graph = build_graph(g, Some(p));
    let max = graph.sizes().into_iter().max().ok_or(Error::NoVertices)?;
    let b0 = graph
        .vertices
        .iter()
        .position(|v| v.size == max)
        .expect("maximum is attained");
    coprime_class_span_for(g, p, graph.class_indices[b0])
}

/// Same as [`coprime_class_span`] against a given class (index into the class list).
pub fn coprime_class_span_for(g: &Group, p: u64, b0_class: usize) -> Result<CoprimeSpan> {
    let b0 = g
        .classes()
        .get(b0_class)
        .cloned()
        .ok_or_else(|| Error::InvalidParameter(format!("no class {b0_class}")))?;
    if b0.is_central || !b0.is_p_regular(p) {
        return Err(Error::PreconditionViolated(
            "reference class must be non-central and p-regular".into(),
        ));
    }
    let mut elems = Vec::new();
    for c in g.classes() {
        if c.is_p_regular(p) && gcd(c.size, b0.size) == 1 {
            elems.extend_from_slice(&c.members);
        }
    }
    let mask = closure_of_set(g, &elems, usize::MAX).unwrap();
    let subgroup = g.subgroup_from_indices(&indices(&mask), &format!("S({})", g.name()));
    Ok(CoprimeSpan {
        subgroup,
        mask,
        b0,
        b0_class,
    })
}

/// Primes dividing `|S| / |Z(G)_{p'}|`.
pub fn span_primes_over_center(span: &CoprimeSpan, center_order: u64, p: u64) -> Vec<u64> {
    let z = p_prime_part(center_order, p);
    prime_divisors(span.subgroup.order_u64() / z).into_iter().collect()
}

/// Graphviz rendering with stable vertex names `v<size>_<index>`.
pub fn to_dot(graph: &ClassGraph) -> String {
    let name = |i: usize| format!("\"v{}_{}\"", graph.vertices[i].size, i);
    let mut out = String::from("graph gamma {\n");
    for (i, v) in graph.vertices.iter().enumerate() {
        out.push_str(&format!(
            "  {} [label=\"size={}, ord={}\"];\n",
            name(i),
            v.size,
            v.element_order
        ));
    }
    for &(a, b) in &graph.edges {
        out.push_str(&format!("  {} -- {};\n", name(a), name(b)));
    }
    out.push_str("}\n");
    out
}
