//! Orientations of a multigraph and the combinatorics built on them:
//! couplings, the sign involutions P and Q, directed Eulerian edge sets,
//! totally cyclic orientations with directed-cut witnesses, and Eulerian
//! equivalence classes.
//!
//! An orientation stores one bit per edge: 0 keeps the edge as listed (first
//! endpoint -> second), 1 reverses it. A loop still carries a bit (the two
//! formal directions of a loop are distinct orientations) but a loop always
//! contributes one in-degree and one out-degree and nothing to conservation.

use std::collections::VecDeque;
use std::fmt;

use crate::multigraph::{EdgeSubset, MultiGraph};
use crate::{Caps, Error, Result};

/// One direction bit per edge, ordered lexicographically as bitstrings
/// (edge 0 is the most significant position).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orientation {
    bits: Vec<bool>,
}

impl Orientation {
    /// Every edge as listed (the all-zero bitstring).
    pub fn as_listed(len: usize) -> Self {
        Orientation {
            bits: vec![false; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Orientation { bits }
    }

    /// Parses the wire form `"0110"`; must match the edge count exactly.
    pub fn from_bitstring(s: &str, edge_count: usize) -> Result<Self> {
        if s.len() != edge_count {
            return Err(Error::Parse(format!(
                "orientation `{s}` has {} bits, graph has {edge_count} edges",
                s.len()
            )));
        }
        let mut bits = Vec::with_capacity(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::Parse(format!(
                        "orientation `{s}` has a non-binary character at position {i}"
                    )))
                }
            }
        }
        Ok(Orientation { bits })
    }

    pub fn to_bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, e: usize) -> bool {
        self.bits[e]
    }

    /// (tail, head) of edge e under this orientation. A loop returns its
    /// vertex twice.
    pub fn endpoints(&self, g: &MultiGraph, e: usize) -> (usize, usize) {
        let (u, v) = g.edge(e);
        if self.bits[e] {
            (v, u)
        } else {
            (u, v)
        }
    }

    /// Signed incidence of edge e at vertex v: +1 leaving, -1 entering,
    /// 0 if v is not an endpoint or e is a loop (a loop both leaves and
    /// enters, so its net contribution is zero).
    pub fn signed_incidence(&self, g: &MultiGraph, v: usize, e: usize) -> i64 {
        if g.is_loop(e) {
            return 0;
        }
        let (tail, head) = self.endpoints(g, e);
        if v == tail {
            1
        } else if v == head {
            -1
        } else {
            0
        }
    }

    /// New orientation with the edges of x reversed.
    pub fn flip_edges(&self, x: &EdgeSubset) -> Self {
        let bits = self
            .bits
            .iter()
            .enumerate()
            .map(|(e, &b)| b ^ x.contains(e))
            .collect();
        Orientation { bits }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bitstring())
    }
}

fn check_len(g: &MultiGraph, o: &Orientation) -> Result<()> {
    if o.len() != g.edge_count() {
        return Err(Error::Domain(format!(
            "orientation has {} bits, graph has {} edges",
            o.len(),
            g.edge_count()
        )));
    }
    Ok(())
}

/// All 2^|E| orientations in lexicographic bitstring order. Both directions
/// of every loop are counted.
pub fn enumerate_orientations(g: &MultiGraph, caps: &Caps) -> Result<Vec<Orientation>> {
    caps.check_edges(g.edge_count())?;
    let m = g.edge_count();
    let total: u128 = 1u128 << m;
    caps.check_enumeration("orientation enumeration", total)?;
    let mut out = Vec::with_capacity(total as usize);
    for k in 0..total {
        let bits = (0..m).map(|i| (k >> (m - 1 - i)) & 1 == 1).collect();
        out.push(Orientation { bits });
    }
    Ok(out)
}

/// Coupling of two orientations of the same graph: +1 where they agree on an
/// edge, -1 where they differ. (Couplings against a partial orientation, such
/// as a directed circuit, appear as fundamental-circuit vectors with zeros
/// off the circuit.)
pub fn coupling(g: &MultiGraph, a: &Orientation, b: &Orientation) -> Result<Vec<i64>> {
    check_len(g, a)?;
    check_len(g, b)?;
    Ok((0..g.edge_count())
        .map(|e| if a.bit(e) == b.bit(e) { 1 } else { -1 })
        .collect())
}

/// The involution P: flips the sign of f on every edge where the two
/// orientations disagree. P(a,b) . P(b,c) = P(a,c), and P(a,b) twice is the
/// identity.
pub fn apply_p(g: &MultiGraph, a: &Orientation, b: &Orientation, f: &[i64]) -> Result<Vec<i64>> {
    check_len(g, a)?;
    check_len(g, b)?;
    if f.len() != g.edge_count() {
        return Err(Error::Domain("flow length does not match edge count".into()));
    }
    Ok((0..g.edge_count())
        .map(|e| if a.bit(e) == b.bit(e) { f[e] } else { -f[e] })
        .collect())
}

/// The involution Q on [0, q]^E: replaces g(e) by q - g(e) on every edge
/// where the two orientations disagree. Composes like P.
pub fn apply_q(
    g: &MultiGraph,
    a: &Orientation,
    b: &Orientation,
    values: &[i64],
    q: i64,
) -> Result<Vec<i64>> {
    check_len(g, a)?;
    check_len(g, b)?;
    if values.len() != g.edge_count() {
        return Err(Error::Domain("flow length does not match edge count".into()));
    }
    if values.iter().any(|&x| x < 0 || x > q) {
        return Err(Error::Domain(format!(
            "Q acts on values in [0, {q}]; got an entry out of range"
        )));
    }
    Ok((0..g.edge_count())
        .map(|e| if a.bit(e) == b.bit(e) { values[e] } else { q - values[e] })
        .collect())
}

/// Orientation induced by an integer vector on the edges of (g, eps): keeps
/// the arrow of eps where f(e) > 0, reverses it where f(e) <= 0. Under the
/// induced orientation the reoriented values |f(e)| (for nowhere-zero f) are
/// nonnegative.
pub fn induced_orientation(g: &MultiGraph, eps: &Orientation, f: &[i64]) -> Result<Orientation> {
    check_len(g, eps)?;
    if f.len() != g.edge_count() {
        return Err(Error::Domain("flow length does not match edge count".into()));
    }
    let bits = (0..g.edge_count())
        .map(|e| if f[e] > 0 { eps.bit(e) } else { !eps.bit(e) })
        .collect();
    Ok(Orientation { bits })
}

/// Edge set where two orientations disagree.
pub fn symmetric_difference(g: &MultiGraph, a: &Orientation, b: &Orientation) -> Result<EdgeSubset> {
    check_len(g, a)?;
    check_len(g, b)?;
    let mut out = EdgeSubset::empty(g.edge_count());
    for e in 0..g.edge_count() {
        if a.bit(e) != b.bit(e) {
            out.insert(e);
        }
    }
    Ok(out)
}

/// Is the subdigraph (V, x) under rho directed Eulerian, i.e. in-degree equal
/// to out-degree at every vertex? Loops add one to each side and never break
/// the balance; the empty set is Eulerian.
pub fn is_directed_eulerian(g: &MultiGraph, rho: &Orientation, x: &EdgeSubset) -> Result<bool> {
    check_len(g, rho)?;
    let mut balance = vec![0i64; g.vertex_count()];
    for e in x.iter() {
        if g.is_loop(e) {
            continue;
        }
        let (tail, head) = rho.endpoints(g, e);
        balance[tail] += 1;
        balance[head] -= 1;
    }
    Ok(balance.iter().all(|&b| b == 0))
}

/// A directed cut witnessing that an orientation is not totally cyclic:
/// `edges` is the nonempty set of edges with exactly one endpoint in
/// `sink_side`, and every one of them is directed into `sink_side`.
#[derive(Debug, Clone)]
pub struct DirectedCut {
    pub sink_side: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Strongly connected component id per vertex under rho (loops ignored),
/// by Kosaraju's two passes. Ids are assigned in a deterministic order.
fn strong_components(g: &MultiGraph, rho: &Orientation) -> Vec<usize> {
    let n = g.vertex_count();
    let mut fwd = vec![Vec::new(); n];
    let mut rev = vec![Vec::new(); n];
    for e in 0..g.edge_count() {
        if g.is_loop(e) {
            continue;
        }
        let (tail, head) = rho.endpoints(g, e);
        fwd[tail].push(head);
        rev[head].push(tail);
    }
    // Pass 1: vertices by decreasing finish time, iterative DFS.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![(start, 0usize)];
        while let Some(top) = stack.last_mut() {
            let v = top.0;
            if top.1 < fwd[v].len() {
                let w = fwd[v][top.1];
                top.1 += 1;
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }
    // Pass 2: reverse graph in reverse finish order.
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for &start in order.iter().rev() {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = count;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &rev[v] {
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    queue.push_back(w);
                }
            }
        }
        count += 1;
    }
    comp
}

/// Finds a directed cut of (g, rho), or None when rho is totally cyclic.
/// The witness side is a sink strong component of a connected component that
/// is not strongly connected, chosen deterministically (least vertex first).
pub fn find_directed_cut(g: &MultiGraph, rho: &Orientation) -> Result<Option<DirectedCut>> {
    check_len(g, rho)?;
    let comp = strong_components(g, rho);
    let scc_count = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut leaves = vec![false; scc_count]; // scc has an edge leaving it
    let mut crossing: Vec<Vec<usize>> = vec![Vec::new(); scc_count];
    for e in 0..g.edge_count() {
        if g.is_loop(e) {
            continue;
        }
        let (tail, head) = rho.endpoints(g, e);
        if comp[tail] != comp[head] {
            leaves[comp[tail]] = true;
            crossing[comp[tail]].push(e);
            crossing[comp[head]].push(e);
        }
    }
    for scc in 0..scc_count {
        if !leaves[scc] && !crossing[scc].is_empty() {
            let sink_side: Vec<usize> =
                (0..g.vertex_count()).filter(|&v| comp[v] == scc).collect();
            let mut edges = crossing[scc].clone();
            edges.sort_unstable();
            edges.dedup();
            return Ok(Some(DirectedCut { sink_side, edges }));
        }
    }
    Ok(None)
}

/// Totally cyclic: no directed cut, equivalently every connected component is
/// strongly connected (loops play no role). Vacuously true for edgeless
/// graphs.
pub fn is_totally_cyclic(g: &MultiGraph, rho: &Orientation) -> Result<bool> {
    Ok(find_directed_cut(g, rho)?.is_none())
}

/// All totally cyclic orientations, in lexicographic order.
pub fn totally_cyclic_orientations(g: &MultiGraph, caps: &Caps) -> Result<Vec<Orientation>> {
    let mut out = enumerate_orientations(g, caps)?;
    let mut err = None;
    out.retain(|o| match is_totally_cyclic(g, o) {
        Ok(b) => b,
        Err(e) => {
            err = Some(e);
            false
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Two orientations are Eulerian-equivalent when the edge set where they
/// disagree is directed Eulerian (under either of them: reversing a balanced
/// set preserves balance).
pub fn eulerian_equivalent(g: &MultiGraph, a: &Orientation, b: &Orientation) -> Result<bool> {
    let diff = symmetric_difference(g, a, b)?;
    is_directed_eulerian(g, a, &diff)
}

/// An Eulerian equivalence class: lexicographically least member first.
/// Every member of a class is totally cyclic iff the representative is.
#[derive(Debug, Clone)]
pub struct OrientationClass {
    pub representative: Orientation,
    pub members: Vec<Orientation>,
    pub totally_cyclic: bool,
}

impl OrientationClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// The Eulerian equivalence class of eps, built from the 0-1 flows of
/// (g, eps): reversing eps on the support of each 0-1 flow enumerates the
/// class exactly once (the indicator of the disagreement set of a class
/// member is a 0-1 flow, and conversely).
pub fn eulerian_class(g: &MultiGraph, eps: &Orientation, caps: &Caps) -> Result<OrientationClass> {
    check_len(g, eps)?;
    let flows = crate::flowspace::zero_one_flows(g, eps, caps)?;
    let mut members: Vec<Orientation> = flows
        .iter()
        .map(|f| {
            let mut support = EdgeSubset::empty(g.edge_count());
            for (e, &v) in f.values().iter().enumerate() {
                if v != 0 {
                    support.insert(e);
                }
            }
            eps.flip_edges(&support)
        })
        .collect();
    members.sort();
    if members.is_empty() {
        return Err(Error::Invariant(
            "an orientation class always contains the zero-flow flip, i.e. itself".into(),
        ));
    }
    let representative = members[0].clone();
    let totally_cyclic = is_totally_cyclic(g, &representative)?;
    Ok(OrientationClass {
        representative,
        members,
        totally_cyclic,
    })
}

/// All Eulerian equivalence classes, ordered by representative; set
/// `only_totally_cyclic` to restrict to classes of totally cyclic
/// orientations (equivalence preserves total cyclicity, so the restriction
/// is a union of whole classes).
pub fn eulerian_classes(
    g: &MultiGraph,
    only_totally_cyclic: bool,
    caps: &Caps,
) -> Result<Vec<OrientationClass>> {
    let all = enumerate_orientations(g, caps)?;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for o in &all {
        if seen.contains(o) {
            continue;
        }
        let class = eulerian_class(g, o, caps)?;
        if class.representative != *o {
            return Err(Error::Invariant(
                "least unseen orientation must represent its own class".into(),
            ));
        }
        for m in &class.members {
            seen.insert(m.clone());
        }
        if !only_totally_cyclic || class.totally_cyclic {
            out.push(class);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::tests::graph;

    fn banana(n: usize) -> MultiGraph {
        MultiGraph::new(
            vec!["u".into(), "v".into()],
            std::iter::repeat((0, 1)).take(n).collect(),
        )
        .unwrap()
    }

    fn o(s: &str) -> Orientation {
        Orientation::from_bitstring(s, s.len()).unwrap()
    }

    #[test]
    fn bitstring_round_trip_and_errors() {
        let g = banana(4);
        let r = Orientation::from_bitstring("0110", g.edge_count()).unwrap();
        assert_eq!(r.to_bitstring(), "0110");
        assert!(Orientation::from_bitstring("011", 4).is_err());
        assert!(Orientation::from_bitstring("01x0", 4).is_err());
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let g = banana(2);
        let all = enumerate_orientations(&g, &Caps::default()).unwrap();
        let strings: Vec<_> = all.iter().map(Orientation::to_bitstring).collect();
        assert_eq!(strings, vec!["00", "01", "10", "11"]);

        // A loop is double-valued: one loop means two orientations.
        let l = graph(&["x"], &[("x", "x")]);
        assert_eq!(enumerate_orientations(&l, &Caps::default()).unwrap().len(), 2);

        let tight = Caps {
            max_edges: 1,
            ..Caps::default()
        };
        assert!(matches!(
            enumerate_orientations(&g, &tight),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn coupling_and_involutions() {
        let g = banana(3);
        let a = o("010");
        let b = o("011");
        assert_eq!(coupling(&g, &a, &b).unwrap(), vec![1, 1, -1]);

        let f = vec![2, -1, 3];
        let pf = apply_p(&g, &a, &b, &f).unwrap();
        assert_eq!(pf, vec![2, -1, -3]);
        // P(a,b) twice is the identity; P composes along a chain.
        assert_eq!(apply_p(&g, &a, &b, &pf).unwrap(), f);
        let c = o("110");
        let via = apply_p(&g, &b, &c, &apply_p(&g, &a, &b, &f).unwrap()).unwrap();
        assert_eq!(via, apply_p(&g, &a, &c, &f).unwrap());

        let vals = vec![0, 2, 3];
        let qf = apply_q(&g, &a, &b, &vals, 3).unwrap();
        assert_eq!(qf, vec![0, 2, 0]);
        assert_eq!(apply_q(&g, &a, &b, &qf, 3).unwrap(), vals);
        let viaq = apply_q(&g, &b, &c, &apply_q(&g, &a, &b, &vals, 3).unwrap(), 3).unwrap();
        assert_eq!(viaq, apply_q(&g, &a, &c, &vals, 3).unwrap());
        assert!(apply_q(&g, &a, &b, &[0, 2, 4], 3).is_err());
    }

    #[test]
    fn induced_orientation_follows_signs() {
        let g = banana(3);
        let eps = o("000");
        let f = vec![2, -1, 1];
        let rho = induced_orientation(&g, &eps, &f).unwrap();
        assert_eq!(rho.to_bitstring(), "010");
        // Under the induced orientation the values are the absolute values.
        let moved = apply_p(&g, &rho, &eps, &f).unwrap();
        assert_eq!(moved, vec![2, 1, 1]);
    }

    #[test]
    fn eulerian_difference_sets() {
        let g = banana(4);
        // The orientations differ on one arrow of each direction, so the
        // difference set is balanced at both ends.
        let a = o("0011");
        let b = o("0101");
        let diff = symmetric_difference(&g, &a, &b).unwrap();
        assert_eq!(diff.count(), 2);
        assert!(is_directed_eulerian(&g, &a, &diff).unwrap());
        assert!(is_directed_eulerian(&g, &b, &diff).unwrap());
        assert!(eulerian_equivalent(&g, &a, &b).unwrap());
        // Two arrows pointing the same way unbalance when flipped together,
        // as does any single arrow.
        assert!(!eulerian_equivalent(&g, &o("0000"), &o("0011")).unwrap());
        assert!(!eulerian_equivalent(&g, &o("0000"), &o("0001")).unwrap());
        // The empty set is Eulerian.
        assert!(is_directed_eulerian(&g, &o("0000"), &EdgeSubset::empty(4)).unwrap());
    }

    #[test]
    fn totally_cyclic_and_directed_cuts() {
        let g = banana(2);
        assert!(is_totally_cyclic(&g, &o("01")).unwrap());
        assert!(is_totally_cyclic(&g, &o("10")).unwrap());
        // Both arrows one way: a directed cut.
        let cut = find_directed_cut(&g, &o("00")).unwrap().unwrap();
        assert_eq!(cut.sink_side, vec![1]);
        assert_eq!(cut.edges, vec![0, 1]);
        for &e in &cut.edges {
            let (_, head) = o("00").endpoints(&g, e);
            assert!(cut.sink_side.contains(&head));
        }

        // A loop alone is totally cyclic either way.
        let l = graph(&["x"], &[("x", "x")]);
        assert!(is_totally_cyclic(&l, &o("0")).unwrap());
        assert!(is_totally_cyclic(&l, &o("1")).unwrap());

        // A bridge admits no totally cyclic orientation.
        let b = graph(&["a", "b"], &[("a", "b")]);
        assert!(totally_cyclic_orientations(&b, &Caps::default())
            .unwrap()
            .is_empty());

        // Edgeless graphs are vacuously totally cyclic.
        let e = MultiGraph::new(vec!["a".into(), "b".into()], vec![]).unwrap();
        assert!(is_totally_cyclic(&e, &Orientation::as_listed(0)).unwrap());
    }

    #[test]
    fn four_parallel_edges_have_fourteen_totally_cyclic_orientations() {
        let g = banana(4);
        let tc = totally_cyclic_orientations(&g, &Caps::default()).unwrap();
        assert_eq!(tc.len(), 14);
        // Only the two monotone orientations are excluded.
        assert!(!tc.iter().any(|x| x.to_bitstring() == "0000"));
        assert!(!tc.iter().any(|x| x.to_bitstring() == "1111"));
    }

    #[test]
    fn class_structure_of_four_parallel_edges() {
        let g = banana(4);
        let caps = Caps::default();
        let all = eulerian_classes(&g, false, &caps).unwrap();
        let mut sizes: Vec<usize> = all.iter().map(OrientationClass::size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 4, 4, 6]);

        let tc = eulerian_classes(&g, true, &caps).unwrap();
        let mut tc_sizes: Vec<usize> = tc.iter().map(OrientationClass::size).collect();
        tc_sizes.sort_unstable();
        assert_eq!(tc_sizes, vec![4, 4, 6]);
        assert_eq!(tc.iter().map(OrientationClass::size).sum::<usize>(), 14);

        // The singletons are exactly the monotone orientations.
        let singletons: Vec<_> = all
            .iter()
            .filter(|c| c.size() == 1)
            .map(|c| c.representative.to_bitstring())
            .collect();
        assert_eq!(singletons, vec!["0000", "1111"]);

        // Members are sorted and the representative is least.
        for class in &all {
            assert!(class.members.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(class.members[0], class.representative);
        }
    }

    #[test]
    fn pairwise_relation_matches_class_partition() {
        // Exhaustive cross-check of the 0-1-flow construction against the
        // pairwise relation, on a graph with a loop and parallels.
        let g = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a"), ("a", "b"), ("b", "b")]);
        let caps = Caps::default();
        let classes = eulerian_classes(&g, false, &caps).unwrap();
        let all = enumerate_orientations(&g, &caps).unwrap();
        assert_eq!(
            classes.iter().map(OrientationClass::size).sum::<usize>(),
            all.len()
        );
        let class_of = |x: &Orientation| {
            classes
                .iter()
                .position(|c| c.members.contains(x))
                .expect("classes cover all orientations")
        };
        for a in &all {
            for b in &all {
                let related = eulerian_equivalent(&g, a, b).unwrap();
                assert_eq!(related, class_of(a) == class_of(b), "{a} vs {b}");
                // The relation is symmetric (balance survives reversal).
                assert_eq!(related, eulerian_equivalent(&g, b, a).unwrap());
            }
        }
    }

    #[test]
    fn directed_cut_in_disconnected_graph_stays_inside_one_component() {
        let g = graph(&["a", "b", "c"], &[("a", "b"), ("a", "b"), ("c", "c")]);
        // Parallel pair oriented one way, loop arbitrary: the cut lives in
        // the a/b component.
        let cut = find_directed_cut(&g, &o("110")).unwrap().unwrap();
        assert_eq!(cut.edges, vec![0, 1]);
        assert_eq!(cut.sink_side, vec![0]);
        assert!(is_totally_cyclic(&g, &o("010")).unwrap());
    }
}
