//! Multigraphs with loops and parallel edges.
//!
//! Edge identity is positional: an edge is its index into the edge list, and
//! every other module (orientations, flows, subsets) is indexed the same way.
//! Deletion, contraction, and induced subgraphs preserve the relative order
//! of surviving edges so positional data stays meaningful across them.

use std::fmt;

use crate::orientation::Orientation;
use crate::{Error, Result};

/// A finite undirected multigraph. Vertices carry string labels (unique);
/// edges are ordered pairs of vertex indices whose order only matters as the
/// reference direction for orientations. Loops (u = v) are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
}

/// Subset of edge positions, packed into a word. Graphs are capped at 64
/// edges so a subset always fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSubset {
    bits: u64,
    len: usize,
}

/// A maximal spanning forest together with its co-tree, both picked
/// greedily by ascending edge index.
#[derive(Debug, Clone)]
pub struct SpanningForest {
    tree: EdgeSubset,
    cotree: Vec<usize>,
}

/// Connected components: a block id per vertex plus the block count.
#[derive(Debug, Clone)]
pub struct Components {
    pub block: Vec<usize>,
    pub count: usize,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    /// Joins the classes of a and b; the smaller root index wins so class
    /// representatives are stable.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

impl MultiGraph {
    /// Validates endpoint indices, label uniqueness, and the 64-edge
    /// representation limit.
    pub fn new(vertices: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.len() > 64 {
            return Err(Error::Domain(format!(
                "at most 64 edges are supported, got {}",
                edges.len()
            )));
        }
        for (i, label) in vertices.iter().enumerate() {
            if vertices[..i].contains(label) {
                return Err(Error::Parse(format!("duplicate vertex label `{label}`")));
            }
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= vertices.len() || v >= vertices.len() {
                return Err(Error::Domain(format!(
                    "edge {i} references a vertex index out of range"
                )));
            }
        }
        Ok(MultiGraph { vertices, edges })
    }

    /// Parses the graph wire format:
    /// `{"vertices": ["u", "v"], "edges": [["u", "v"], ["u", "u"]]}`.
    /// Vertex order defines vertex indices and edge order defines edge
    /// indices. Errors carry the offending position.
    pub fn parse_json(text: &str) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct Raw {
            vertices: Vec<String>,
            edges: Vec<(String, String)>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!(
                "graph JSON invalid at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        let lookup = |label: &str, which: &str, i: usize| {
            raw.vertices
                .iter()
                .position(|v| v == label)
                .ok_or_else(|| {
                    Error::Parse(format!(
                        "edge {i} ({which} endpoint) references unknown vertex `{label}`"
                    ))
                })
        };
        let mut edges = Vec::with_capacity(raw.edges.len());
        for (i, (u, v)) in raw.edges.iter().enumerate() {
            edges.push((lookup(u, "first", i)?, lookup(v, "second", i)?));
        }
        Self::new(raw.vertices, edges)
    }

    /// Inverse of `parse_json`; round-trips exactly.
    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                serde_json::json!([self.vertices[u], self.vertices[v]])
            })
            .collect();
        serde_json::json!({ "vertices": self.vertices, "edges": edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    /// Endpoints of edge e as listed (the reference direction).
    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, v) = self.edges[e];
        u == v
    }

    pub fn loops(&self) -> EdgeSubset {
        let mut s = EdgeSubset::empty(self.edge_count());
        for e in 0..self.edge_count() {
            if self.is_loop(e) {
                s.insert(e);
            }
        }
        s
    }

    pub fn all_edges(&self) -> EdgeSubset {
        EdgeSubset::full(self.edge_count())
    }

    /// Edge indices incident to v, loops included once.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edge_count())
            .filter(|&e| {
                let (a, b) = self.edges[e];
                a == v || b == v
            })
            .collect()
    }

    pub fn components(&self) -> Components {
        let mut uf = UnionFind::new(self.vertex_count());
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        let mut block = vec![usize::MAX; self.vertex_count()];
        let mut count = 0;
        for v in 0..self.vertex_count() {
            let root = uf.find(v);
            if block[root] == usize::MAX {
                block[root] = count;
                count += 1;
            }
            block[v] = block[root];
        }
        Components { block, count }
    }

    pub fn component_count(&self) -> usize {
        self.components().count
    }

    /// Rank r(G) = |V| - c(G): the size of any maximal spanning forest.
    pub fn rank(&self) -> usize {
        self.vertex_count() - self.component_count()
    }

    /// Cycle rank n(G) = |E| - |V| + c(G): the number of co-tree edges, and
    /// the degree of every flow polynomial of the graph.
    pub fn cycle_rank(&self) -> usize {
        self.edge_count() + self.component_count() - self.vertex_count()
    }

    /// Component count of the spanning subgraph (V, x), without
    /// materializing it.
    pub fn component_count_within(&self, x: &EdgeSubset) -> usize {
        let mut uf = UnionFind::new(self.vertex_count());
        let mut count = self.vertex_count();
        for e in x.iter() {
            let (u, v) = self.edges[e];
            if uf.union(u, v) {
                count -= 1;
            }
        }
        count
    }

    /// Rank of the spanning subgraph (V, x).
    pub fn rank_within(&self, x: &EdgeSubset) -> usize {
        self.vertex_count() - self.component_count_within(x)
    }

    /// Cycle rank of the spanning subgraph (V, x).
    pub fn cycle_rank_within(&self, x: &EdgeSubset) -> usize {
        x.count() + self.component_count_within(x) - self.vertex_count()
    }

    /// Edges of x lying on a circuit of the spanning subgraph (V, x): x minus
    /// the bridges of (V, x). Indices stay in this graph's edge numbering.
    pub fn cyclic_part_within(&self, x: &EdgeSubset) -> EdgeSubset {
        let base = self.component_count_within(x);
        let mut out = EdgeSubset::empty(self.edge_count());
        for e in x.iter() {
            if self.is_loop(e) {
                out.insert(e);
                continue;
            }
            let mut without = *x;
            without.remove(e);
            if self.component_count_within(&without) == base {
                out.insert(e);
            }
        }
        out
    }

    /// Edges whose removal increases the component count. Loops are never
    /// bridges.
    pub fn bridges(&self) -> EdgeSubset {
        let base = self.component_count();
        let mut out = EdgeSubset::empty(self.edge_count());
        for e in 0..self.edge_count() {
            if self.is_loop(e) {
                continue;
            }
            let mut removed = EdgeSubset::empty(self.edge_count());
            removed.insert(e);
            if self.delete(&removed).component_count() > base {
                out.insert(e);
            }
        }
        out
    }

    pub fn is_bridgeless(&self) -> bool {
        self.bridges().is_empty()
    }

    /// Edges lying on at least one circuit: everything but the bridges.
    pub fn cyclic_part(&self) -> EdgeSubset {
        self.bridges().complement()
    }

    /// Greedy maximal spanning forest: scan edges by ascending index, keep an
    /// edge iff it joins two distinct components of what is kept so far.
    /// Loops are never kept. |tree| = r(G) and |co-tree| = n(G).
    pub fn maximal_spanning_forest(&self) -> SpanningForest {
        let mut uf = UnionFind::new(self.vertex_count());
        let mut tree = EdgeSubset::empty(self.edge_count());
        let mut cotree = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if u != v && uf.union(u, v) {
                tree.insert(e);
            } else {
                cotree.push(e);
            }
        }
        SpanningForest { tree, cotree }
    }

    /// Removes the edges in x; all vertices stay.
    pub fn delete(&self, x: &EdgeSubset) -> MultiGraph {
        let edges = (0..self.edge_count())
            .filter(|&e| !x.contains(e))
            .map(|e| self.edges[e])
            .collect();
        MultiGraph {
            vertices: self.vertices.clone(),
            edges,
        }
    }

    /// Contracts the edges in x: endpoints of each non-loop edge of x are
    /// merged and all edges of x vanish. Surviving edges keep their relative
    /// order and may become loops or parallels. Each merged class keeps the
    /// label of its least original vertex.
    pub fn contract(&self, x: &EdgeSubset) -> MultiGraph {
        let mut uf = UnionFind::new(self.vertex_count());
        for e in x.iter() {
            let (u, v) = self.edges[e];
            uf.union(u, v);
        }
        let mut new_index = vec![usize::MAX; self.vertex_count()];
        let mut vertices = Vec::new();
        for v in 0..self.vertex_count() {
            let root = uf.find(v);
            if new_index[root] == usize::MAX {
                new_index[root] = vertices.len();
                vertices.push(self.vertices[root].clone());
            }
            new_index[v] = new_index[root];
        }
        let edges = (0..self.edge_count())
            .filter(|&e| !x.contains(e))
            .map(|e| {
                let (u, v) = self.edges[e];
                (new_index[u], new_index[v])
            })
            .collect();
        MultiGraph { vertices, edges }
    }

    /// The spanning subgraph (V, x): all vertices, only the edges in x.
    pub fn induced(&self, x: &EdgeSubset) -> MultiGraph {
        self.delete(&x.complement())
    }
}

impl fmt::Display for MultiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} vertices, {} edges",
            self.vertex_count(),
            self.edge_count()
        )
    }
}

impl EdgeSubset {
    pub fn empty(len: usize) -> Self {
        assert!(len <= 64);
        EdgeSubset { bits: 0, len }
    }

    pub fn full(len: usize) -> Self {
        assert!(len <= 64);
        let bits = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        EdgeSubset { bits, len }
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut s = Self::empty(len);
        for &i in indices {
            s.insert(i);
        }
        s
    }

    /// Subset with the given word of membership bits (bit e = edge e).
    pub fn from_bits(len: usize, bits: u64) -> Self {
        let mut s = Self::full(len);
        s.bits &= bits;
        s
    }

    pub fn universe_len(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, e: usize) {
        assert!(e < self.len);
        self.bits |= 1 << e;
    }

    pub fn remove(&mut self, e: usize) {
        assert!(e < self.len);
        self.bits &= !(1 << e);
    }

    pub fn contains(&self, e: usize) -> bool {
        e < self.len && self.bits & (1 << e) != 0
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn complement(&self) -> Self {
        EdgeSubset {
            bits: Self::full(self.len).bits & !self.bits,
            len: self.len,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len);
        EdgeSubset {
            bits: self.bits | other.bits,
            len: self.len,
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len);
        EdgeSubset {
            bits: self.bits & other.bits,
            len: self.len,
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.len == other.len && self.bits & !other.bits == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&e| self.contains(e))
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl SpanningForest {
    pub fn tree(&self) -> &EdgeSubset {
        &self.tree
    }

    pub fn cotree(&self) -> &[usize] {
        &self.cotree
    }

    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.tree.contains(e)
    }
}

/// Coupling vector of the fundamental circuit of co-tree edge e: the circuit
/// closed by e in tree + e, directed so that its coefficient at e is +1, read
/// against the reference orientation. Entries are in {-1, 0, +1}, nonzero
/// exactly on the circuit, and the result satisfies the conservation law of
/// (g, reference) by construction.
pub fn fundamental_circuit(
    g: &MultiGraph,
    forest: &SpanningForest,
    e: usize,
    reference: &Orientation,
) -> Result<Vec<i64>> {
    if e >= g.edge_count() {
        return Err(Error::Domain(format!("edge index {e} out of range")));
    }
    if forest.is_tree_edge(e) {
        return Err(Error::Domain(format!(
            "edge {e} is a forest edge; fundamental circuits are indexed by co-tree edges"
        )));
    }
    let mut out = vec![0i64; g.edge_count()];
    out[e] = 1;
    if g.is_loop(e) {
        return Ok(out);
    }
    // Walk the circuit in the direction the reference orientation gives e:
    // cross e from its tail to its head, then return head -> tail through the
    // forest. A forest edge counts +1 when traversed the way the reference
    // points it, -1 against.
    let (tail, head) = reference.endpoints(g, e);
    let n = g.vertex_count();
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n]; // (vertex, via edge)
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    seen[head] = true;
    queue.push_back(head);
    while let Some(v) = queue.pop_front() {
        if v == tail {
            break;
        }
        for t in forest.tree.iter() {
            let (a, b) = g.edge(t);
            let w = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((v, t));
                queue.push_back(w);
            }
        }
    }
    if !seen[tail] {
        return Err(Error::Invariant(format!(
            "co-tree edge {e} closes no circuit in the forest"
        )));
    }
    // Unwind tail <- ... <- head; each step (from -> to) is walked to -> from
    // in circuit direction, i.e. the circuit traverses the edge from `to`
    // toward `from`... unwinding gives the head -> tail walk directly.
    let mut v = tail;
    while v != head {
        let (from, via) = prev[v].expect("walk reaches head");
        // Circuit direction traverses `via` from `from` to `v`.
        let (t, _) = reference.endpoints(g, via);
        out[via] = if t == from { 1 } else { -1 };
        v = from;
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::orientation::Orientation;

    pub(crate) fn graph(vertices: &[&str], edges: &[(&str, &str)]) -> MultiGraph {
        let labels: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let idx = |l: &str| labels.iter().position(|x| x == l).unwrap();
        let edges = edges.iter().map(|&(u, v)| (idx(u), idx(v))).collect();
        MultiGraph::new(labels, edges).unwrap()
    }

    fn banana(n: usize) -> MultiGraph {
        MultiGraph::new(
            vec!["u".into(), "v".into()],
            std::iter::repeat((0, 1)).take(n).collect(),
        )
        .unwrap()
    }

    #[test]
    fn parse_and_round_trip() {
        let text = r#"{"vertices": ["u", "v"], "edges": [["u","v"], ["u","v"], ["u","u"]]}"#;
        let g = MultiGraph::parse_json(text).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.edge(0), (0, 1));
        assert!(g.is_loop(2));
        let round = MultiGraph::parse_json(&g.to_json().to_string()).unwrap();
        assert_eq!(round, g);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = MultiGraph::parse_json("{\"vertices\": [\"u\"],\n  \"edges\": [[\"u\"]]}")
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");

        let err =
            MultiGraph::parse_json(r#"{"vertices": ["u"], "edges": [["u","u"],["u","w"]]}"#)
                .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("edge 1") && msg.contains("`w`"), "{msg}");

        let err = MultiGraph::parse_json(r#"{"vertices": ["u","u"], "edges": []}"#).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn components_and_ranks() {
        let g = banana(4);
        assert_eq!(g.component_count(), 1);
        assert_eq!(g.cycle_rank(), 3);
        assert_eq!(g.rank(), 1);

        // Disjoint union: two parallel edges plus a loop on a third vertex.
        let h = graph(&["a", "b", "c"], &[("a", "b"), ("a", "b"), ("c", "c")]);
        assert_eq!(h.component_count(), 2);
        assert_eq!(h.cycle_rank(), 2);
        assert_eq!(h.rank(), 1);

        let empty = MultiGraph::new(vec![], vec![]).unwrap();
        assert_eq!(empty.component_count(), 0);
        assert_eq!(empty.cycle_rank(), 0);
    }

    #[test]
    fn bridges_and_cyclic_part() {
        let path = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        assert_eq!(path.bridges().count(), 2);
        assert!(path.cyclic_part().is_empty());

        // Two triangles joined by a bridge: only the joining edge is a bridge.
        let g = graph(
            &["a", "b", "c", "d", "e", "f"],
            &[
                ("a", "b"),
                ("b", "c"),
                ("c", "a"),
                ("c", "d"),
                ("d", "e"),
                ("e", "f"),
                ("f", "d"),
            ],
        );
        assert_eq!(g.bridges().indices(), vec![3]);
        assert_eq!(g.cyclic_part().indices(), vec![0, 1, 2, 4, 5, 6]);
        assert!(!g.is_bridgeless());

        // Loops are never bridges.
        let l = graph(&["x"], &[("x", "x")]);
        assert!(l.is_bridgeless());
    }

    #[test]
    fn greedy_forest_prefers_low_indices() {
        let g = banana(4);
        let f = g.maximal_spanning_forest();
        assert_eq!(f.tree().indices(), vec![0]);
        assert_eq!(f.cotree(), &[1, 2, 3]);

        let h = graph(&["a", "b", "c"], &[("a", "b"), ("a", "b"), ("c", "c")]);
        let f = h.maximal_spanning_forest();
        assert_eq!(f.tree().indices(), vec![0]);
        assert_eq!(f.cotree(), &[1, 2]);
        assert_eq!(f.tree().count(), h.rank());
        assert_eq!(f.cotree().len(), h.cycle_rank());
    }

    #[test]
    fn delete_contract_induced() {
        let g = banana(4);
        let mut x = EdgeSubset::empty(4);
        x.insert(0);
        let d = g.delete(&x);
        assert_eq!(d.vertex_count(), 2);
        assert_eq!(d.edge_count(), 3);
        assert!(!d.is_loop(0));

        let c = g.contract(&x);
        assert_eq!(c.vertex_count(), 1);
        assert_eq!(c.edge_count(), 3);
        assert!((0..3).all(|e| c.is_loop(e)));

        let i = g.induced(&EdgeSubset::from_indices(4, &[1, 3]));
        assert_eq!(i.vertex_count(), 2);
        assert_eq!(i.edge_count(), 2);
    }

    #[test]
    fn contract_keeps_parallels_and_loops() {
        // Triangle: contracting one edge leaves two parallel edges.
        let t = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]);
        let c = t.contract(&EdgeSubset::from_indices(3, &[0]));
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(c.edge_count(), 2);
        assert!(!c.is_loop(0) && !c.is_loop(1));
        let ((u0, v0), (u1, v1)) = (c.edge(0), c.edge(1));
        assert!((u0, v0) == (u1, v1) || (u0, v0) == (v1, u1));

        // Contracting a loop just deletes it.
        let l = graph(&["x", "y"], &[("x", "x"), ("x", "y")]);
        let c = l.contract(&EdgeSubset::from_indices(2, &[0]));
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(c.edge_count(), 1);
    }

    #[test]
    fn fundamental_circuit_of_parallel_pair() {
        let g = banana(2);
        let f = g.maximal_spanning_forest();
        let eps = Orientation::as_listed(2);
        let fc = fundamental_circuit(&g, &f, 1, &eps).unwrap();
        assert_eq!(fc, vec![-1, 1]);
        assert!(matches!(
            fundamental_circuit(&g, &f, 0, &eps),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn fundamental_circuit_of_directed_triangle() {
        // Edges a->b, b->c, c->a; orienting every edge as listed makes the
        // triangle a directed circuit, so the circuit closed by e2 is all +1.
        let t = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]);
        let f = t.maximal_spanning_forest();
        assert_eq!(f.cotree(), &[2]);
        let eps = Orientation::as_listed(3);
        let fc = fundamental_circuit(&t, &f, 2, &eps).unwrap();
        assert_eq!(fc, vec![1, 1, 1]);
    }

    #[test]
    fn fundamental_circuit_of_loop() {
        let g = graph(&["x"], &[("x", "x")]);
        let f = g.maximal_spanning_forest();
        let eps = Orientation::as_listed(1);
        assert_eq!(fundamental_circuit(&g, &f, 0, &eps).unwrap(), vec![1]);
    }

    #[test]
    fn edge_subset_algebra() {
        let a = EdgeSubset::from_indices(5, &[0, 2, 4]);
        let b = EdgeSubset::from_indices(5, &[2, 3]);
        assert_eq!(a.union(&b).indices(), vec![0, 2, 3, 4]);
        assert_eq!(a.intersection(&b).indices(), vec![2]);
        assert_eq!(a.complement().indices(), vec![1, 3]);
        assert!(b.is_subset_of(&a.union(&b)));
        assert!(!b.is_subset_of(&a));
        assert_eq!(EdgeSubset::full(5).count(), 5);
        assert_eq!(EdgeSubset::from_bits(3, 0b101).indices(), vec![0, 2]);
    }
}
