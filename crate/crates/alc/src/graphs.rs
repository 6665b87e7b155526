//! Exact small-graph algorithms: chromatic number by branch and bound,
//! girth by per-vertex BFS, generators and the seeded Erdos-style search for
//! graphs with prescribed chromatic number and girth.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{AlcError, Result};

const EXACT_SOLVER_BOUND: usize = 32;

/// Finite simple undirected graph. Edges are stored as sorted index pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub vertices: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: Vec<String>) -> Self {
        Graph {
            vertices,
            edges: BTreeSet::new(),
        }
    }

    pub fn with_numbered_vertices(n: usize) -> Self {
        Graph::new((0..n).map(|i| format!("v{i}")).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "no self-loops");
        assert!(u < self.vertices.len() && v < self.vertices.len());
        self.edges.insert((u.min(v), u.max(v)));
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&u| u != v && self.has_edge(u, v))
            .collect()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }
}

/// Exact chromatic number. `None`-free: the empty graph has chromatic
/// number 0 by the partition convention.
pub fn chromatic_number(g: &Graph) -> Result<usize> {
    let n = g.vertex_count();
    if n > EXACT_SOLVER_BOUND {
        return Err(AlcError::Budget(format!(
            "exact chromatic solver bound is {EXACT_SOLVER_BOUND} vertices"
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    if g.edge_count() == 0 {
        return Ok(1);
    }
    let lb = greedy_clique(g).len();
    for k in lb.. {
        if can_colour(g, k) {
            return Ok(k);
        }
    }
    unreachable!()
}

fn greedy_clique(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.neighbours(v).len()));
    let mut clique = Vec::new();
    for v in order {
        if clique.iter().all(|&u| g.has_edge(u, v)) {
            clique.push(v);
        }
    }
    clique
}

fn can_colour(g: &Graph, k: usize) -> bool {
    if k == 0 {
        return g.vertex_count() == 0;
    }
    let n = g.vertex_count();
    let mut colour = vec![usize::MAX; n];
    // order vertices by degree, descending: fail fast on the dense part
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.neighbours(v).len()));
    fn rec(
        g: &Graph,
        order: &[usize],
        colour: &mut Vec<usize>,
        pos: usize,
        used: usize,
        k: usize,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        let limit = (used + 1).min(k);
        for c in 0..limit {
            if g.neighbours(v).iter().all(|&u| colour[u] != c) {
                colour[v] = c;
                if rec(g, order, colour, pos + 1, used.max(c + 1), k) {
                    return true;
                }
                colour[v] = usize::MAX;
            }
        }
        false
    }
    rec(g, &order, &mut colour, 0, 0, k)
}

/// Length of a shortest cycle; `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    let mut best: Option<usize> = None;
    for start in 0..n {
        // BFS from start; a non-tree edge closing at depths d1, d2 witnesses
        // a cycle of length d1 + d2 + 1 through start.
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in g.neighbours(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v {
                    let cycle = dist[u] + dist[v] + 1;
                    if best.map_or(true, |b| cycle < b) {
                        best = Some(cycle);
                    }
                }
            }
        }
    }
    best
}

/// Graph generators.
pub enum GraphKind {
    Complete(usize),
    Cycle(usize),
    Edgeless(usize),
    Random { n: usize, p: f64, seed: u64 },
}

pub fn generate(kind: GraphKind) -> Graph {
    match kind {
        GraphKind::Complete(n) => {
            let mut g = Graph::with_numbered_vertices(n);
            for u in 0..n {
                for v in u + 1..n {
                    g.add_edge(u, v);
                }
            }
            g
        }
        GraphKind::Cycle(n) => {
            let mut g = Graph::with_numbered_vertices(n);
            if n >= 3 {
                for u in 0..n {
                    g.add_edge(u, (u + 1) % n);
                }
            }
            g
        }
        GraphKind::Edgeless(n) => Graph::with_numbered_vertices(n),
        GraphKind::Random { n, p, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = Graph::with_numbered_vertices(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p.clamp(0.0, 1.0)) {
                        g.add_edge(u, v);
                    }
                }
            }
            g
        }
    }
}

/// Disjoint union with renamed vertices.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let mut vertices: Vec<String> = a.vertices.iter().map(|v| format!("l.{v}")).collect();
    vertices.extend(b.vertices.iter().map(|v| format!("r.{v}")));
    let mut g = Graph::new(vertices);
    for (u, v) in a.edges() {
        g.add_edge(u, v);
    }
    let off = a.vertex_count();
    for (u, v) in b.edges() {
        g.add_edge(u + off, v + off);
    }
    g
}

/// Mycielski construction: preserves triangle-freeness and raises the
/// chromatic number by one.
pub fn mycielskian(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let mut vertices: Vec<String> = g.vertices.clone();
    vertices.extend(g.vertices.iter().map(|v| format!("m.{v}")));
    vertices.push("z".into());
    let mut out = Graph::new(vertices);
    for (u, v) in g.edges() {
        out.add_edge(u, v);
        out.add_edge(u, n + v);
        out.add_edge(v, n + u);
    }
    for u in 0..n {
        out.add_edge(n + u, 2 * n);
    }
    out
}

/// The Grotzsch graph: 11 vertices, triangle-free, chromatic number 4.
pub fn grotzsch() -> Graph {
    mycielskian(&generate(GraphKind::Cycle(5)))
}

/// Outcome of the desk-scale probabilistic search.
#[derive(Debug)]
pub enum ErdosOutcome {
    Found(Graph),
    /// Budget ran out: explicitly not a refutation.
    Exhausted { samples: usize },
}

/// Search for a graph with chromatic number at least `chi` and girth at
/// least `girth_target`, trying a small library of known witnesses before
/// seeded random sampling.
pub fn erdos_search(chi: usize, girth_target: usize, budget: usize, seed: u64) -> ErdosOutcome {
    let qualifies = |g: &Graph| -> bool {
        let chromatic_ok = chromatic_number(g).map(|c| c >= chi).unwrap_or(false);
        let girth_ok = girth(g).map_or(true, |gg| gg >= girth_target);
        chromatic_ok && girth_ok
    };
    let library: Vec<Graph> = vec![
        Graph::with_numbered_vertices(1),
        {
            let mut g = Graph::with_numbered_vertices(2);
            g.add_edge(0, 1);
            g
        },
        generate(GraphKind::Cycle(5)),
        generate(GraphKind::Cycle(7)),
        grotzsch(),
    ];
    for g in library {
        if qualifies(&g) {
            return ErdosOutcome::Found(g);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for sample in 0..budget {
        let n = 8 + (sample % 12);
        let p = rng.gen_range(0.1..0.5);
        let sample_seed = rng.gen::<u64>();
        let g = generate(GraphKind::Random {
            n,
            p,
            seed: sample_seed,
        });
        if qualifies(&g) {
            return ErdosOutcome::Found(g);
        }
    }
    ErdosOutcome::Exhausted { samples: budget }
}

/// All graphs on exactly `n` labelled vertices, reduced up to isomorphism by
/// minimising the adjacency bit string over all vertex permutations.
pub fn nonisomorphic_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 6, "enumeration is exponential; keep n small");
    let pair_count = n * (n - 1) / 2;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pair_count {
        let has = |u: usize, v: usize| -> bool {
            let (a, b) = (u.min(v), u.max(v));
            let idx = pairs.iter().position(|&p| p == (a, b)).unwrap();
            mask >> idx & 1 == 1
        };
        let mut canon = u64::MAX;
        for perm in &perms {
            let mut m = 0u64;
            for (idx, &(u, v)) in pairs.iter().enumerate() {
                if has(perm[u], perm[v]) {
                    m |= 1 << idx;
                }
            }
            canon = canon.min(m);
        }
        if seen.insert(canon) {
            let mut g = Graph::with_numbered_vertices(n);
            for (idx, &(u, v)) in pairs.iter().enumerate() {
                if canon >> idx & 1 == 1 {
                    g.add_edge(u, v);
                }
            }
            out.push(g);
        }
    }
    out
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for v in 0..n {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

/// JSON document for graphs: `{"schema":"alc-graph-v1","vertices":[..],
/// "edges":[[u,v],..]}` with `u < v` lexicographically by vertex name.
#[derive(Serialize, Deserialize)]
struct GraphDto {
    schema: String,
    vertices: Vec<String>,
    edges: Vec<[String; 2]>,
}

pub fn graph_to_json(g: &Graph) -> String {
    let mut edges: Vec<[String; 2]> = g
        .edges()
        .map(|(u, v)| {
            let a = g.vertices[u].clone();
            let b = g.vertices[v].clone();
            if a <= b {
                [a, b]
            } else {
                [b, a]
            }
        })
        .collect();
    edges.sort();
    let dto = GraphDto {
        schema: "alc-graph-v1".into(),
        vertices: g.vertices.clone(),
        edges,
    };
    serde_json::to_string_pretty(&dto).expect("graph serializes")
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    let dto: GraphDto = serde_json::from_str(text)?;
    if dto.schema != "alc-graph-v1" {
        return Err(AlcError::Malformed(format!(
            "expected schema alc-graph-v1, got {}",
            dto.schema
        )));
    }
    let mut g = Graph::new(dto.vertices);
    for [a, b] in dto.edges {
        let u = g
            .vertex_index(&a)
            .ok_or_else(|| AlcError::Malformed(format!("unknown vertex {a}")))?;
        let v = g
            .vertex_index(&b)
            .ok_or_else(|| AlcError::Malformed(format!("unknown vertex {b}")))?;
        if u == v {
            return Err(AlcError::Malformed(format!("self-loop at {a}")));
        }
        g.add_edge(u, v);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chromatic_basics() {
        assert_eq!(chromatic_number(&generate(GraphKind::Complete(4))).unwrap(), 4);
        assert_eq!(chromatic_number(&generate(GraphKind::Cycle(5))).unwrap(), 3);
        assert_eq!(chromatic_number(&generate(GraphKind::Cycle(6))).unwrap(), 2);
        assert_eq!(chromatic_number(&generate(GraphKind::Edgeless(5))).unwrap(), 1);
    }

    #[test]
    fn grotzsch_is_the_desk_witness() {
        let g = grotzsch();
        assert_eq!(g.vertex_count(), 11);
        assert_eq!(chromatic_number(&g).unwrap(), 4);
        assert_eq!(girth(&g), Some(4));
    }

    #[test]
    fn girth_basics() {
        assert_eq!(girth(&generate(GraphKind::Cycle(7))), Some(7));
        assert_eq!(girth(&generate(GraphKind::Complete(4))), Some(3));
        assert_eq!(girth(&generate(GraphKind::Edgeless(4))), None);
        // Petersen graph: outer 5-cycle, inner pentagram, spokes
        let mut p = Graph::with_numbered_vertices(10);
        for i in 0..5 {
            p.add_edge(i, (i + 1) % 5);
            p.add_edge(5 + i, 5 + (i + 2) % 5);
            p.add_edge(i, 5 + i);
        }
        assert_eq!(girth(&p), Some(5));
        assert_eq!(chromatic_number(&p).unwrap(), 3);
    }

    #[test]
    fn union_laws() {
        let a = generate(GraphKind::Cycle(5));
        let b = generate(GraphKind::Complete(4));
        let u = disjoint_union(&a, &b);
        assert_eq!(
            chromatic_number(&u).unwrap(),
            chromatic_number(&a).unwrap().max(chromatic_number(&b).unwrap())
        );
        assert_eq!(girth(&u), girth(&a).min(girth(&b)));
    }

    #[test]
    fn random_reproducible() {
        let g1 = generate(GraphKind::Random { n: 10, p: 0.5, seed: 7 });
        let g2 = generate(GraphKind::Random { n: 10, p: 0.5, seed: 7 });
        assert_eq!(g1, g2);
    }

    #[test]
    fn erdos_search_cases() {
        match erdos_search(3, 4, 10, 0) {
            ErdosOutcome::Found(g) => {
                assert!(chromatic_number(&g).unwrap() >= 3);
                assert!(girth(&g).map_or(true, |x| x >= 4));
            }
            _ => panic!("C5 qualifies"),
        }
        match erdos_search(10, 10, 3, 0) {
            ErdosOutcome::Exhausted { samples } => assert_eq!(samples, 3),
            _ => panic!("tiny budget must fail"),
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(nonisomorphic_graphs(1).len(), 1);
        assert_eq!(nonisomorphic_graphs(2).len(), 2);
        assert_eq!(nonisomorphic_graphs(3).len(), 4);
        assert_eq!(nonisomorphic_graphs(4).len(), 11);
        assert_eq!(nonisomorphic_graphs(5).len(), 34);
    }

    #[test]
    fn json_roundtrip() {
        let g = generate(GraphKind::Cycle(5));
        let text = graph_to_json(&g);
        let back = graph_from_json(&text).unwrap();
        assert_eq!(g, back);
        assert_eq!(graph_to_json(&back), text);
    }
}
