//! Flows of an oriented multigraph, modular and integral.
//!
//! Everything runs through one fact: once a maximal spanning forest is fixed,
//! a flow is free on the co-tree edges and determined on the forest edges as
//! the signed sum of fundamental-circuit vectors. Enumerations therefore walk
//! co-tree assignments (q^n of them for modulus q and cycle rank n) instead
//! of all value vectors, and counting open/closed/nowhere-zero flows is a
//! range filter on the induced edge values.
//!
//! The one nontrivial algorithm is [`lift_modular_flow`]: a nowhere-zero
//! modular flow is lifted to a nowhere-zero integer flow congruent to it, by
//! walking directed paths from excess to deficit and flipping them until the
//! total imbalance is gone. Each flip reduces the imbalance by exactly 2q,
//! which the implementation asserts.

use crate::multigraph::{fundamental_circuit, EdgeSubset, MultiGraph, SpanningForest};
use crate::orientation::{apply_p, Orientation};
use crate::{Caps, Error, Result};

/// Edge-indexed flow values; `modulus` is Some(q) for a modular flow with
/// canonical residues in [0, q) and None for an integer flow.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlowVector {
    values: Vec<i64>,
    modulus: Option<i64>,
}

impl FlowVector {
    pub fn integer(values: Vec<i64>) -> Self {
        FlowVector {
            values,
            modulus: None,
        }
    }

    /// Reduces the values into canonical residues [0, q).
    pub fn modular(values: Vec<i64>, q: i64) -> Result<Self> {
        if q < 1 {
            return Err(Error::Domain(format!("modulus must be positive, got {q}")));
        }
        Ok(FlowVector {
            values: values.iter().map(|v| v.rem_euclid(q)).collect(),
            modulus: Some(q),
        })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn modulus(&self) -> Option<i64> {
        self.modulus
    }

    pub fn is_nowhere_zero(&self) -> bool {
        self.values.iter().all(|&v| v != 0)
    }

    /// Entrywise canonical residues mod q.
    pub fn reduce_mod(&self, q: i64) -> Result<FlowVector> {
        FlowVector::modular(self.values.clone(), q)
    }

    /// Integer flows serialize as a bare array, modular flows carry the
    /// modulus: `{"values":[1,2],"mod":3}`.
    pub fn to_json(&self) -> serde_json::Value {
        match self.modulus {
            None => serde_json::json!(self.values),
            Some(q) => serde_json::json!({ "values": self.values, "mod": q }),
        }
    }

    /// Parses a JSON integer array (the CLI `--flow` argument).
    pub fn parse_values(text: &str) -> Result<Vec<i64>> {
        let v: Vec<i64> = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("flow must be a JSON integer array: {e}")))?;
        Ok(v)
    }
}

/// Signed excess at every vertex: the sum over non-loop edges of
/// (+value) where the edge leaves the vertex and (-value) where it enters.
pub fn excess_vector(g: &MultiGraph, rho: &Orientation, values: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; g.vertex_count()];
    for e in 0..g.edge_count() {
        if g.is_loop(e) {
            continue;
        }
        let (tail, head) = rho.endpoints(g, e);
        out[tail] += values[e];
        out[head] -= values[e];
    }
    out
}

/// The conservation law at every vertex: zero excess (mod q for a modular
/// flow). Loops never contribute.
pub fn is_flow(g: &MultiGraph, eps: &Orientation, f: &FlowVector) -> Result<bool> {
    if eps.len() != g.edge_count() || f.values.len() != g.edge_count() {
        return Err(Error::Domain(
            "orientation and flow must both be indexed by the edge list".into(),
        ));
    }
    let excess = excess_vector(g, eps, &f.values);
    Ok(match f.modulus {
        None => excess.iter().all(|&x| x == 0),
        Some(q) => excess.iter().all(|&x| x.rem_euclid(q) == 0),
    })
}

/// One fundamental-circuit coupling vector per co-tree edge, in co-tree
/// order. Row i has +1 at co-tree edge i, {-1,0,+1} on forest edges, and 0 at
/// every other co-tree edge, so the rows are independent.
pub fn circuit_matrix(
    g: &MultiGraph,
    forest: &SpanningForest,
    eps: &Orientation,
) -> Result<Vec<Vec<i64>>> {
    forest
        .cotree()
        .iter()
        .map(|&e| fundamental_circuit(g, forest, e, eps))
        .collect()
}

/// The unique flow of (g, eps) taking the given values on the co-tree edges:
/// the signed sum of fundamental-circuit vectors.
pub fn flow_from_cotree(
    g: &MultiGraph,
    forest: &SpanningForest,
    eps: &Orientation,
    assignment: &[i64],
) -> Result<FlowVector> {
    if assignment.len() != forest.cotree().len() {
        return Err(Error::Domain(format!(
            "assignment has {} values, co-tree has {} edges",
            assignment.len(),
            forest.cotree().len()
        )));
    }
    let rows = circuit_matrix(g, forest, eps)?;
    let mut values = vec![0i64; g.edge_count()];
    for (a, row) in assignment.iter().zip(&rows) {
        if *a == 0 {
            continue;
        }
        for (e, &c) in row.iter().enumerate() {
            values[e] += a * c;
        }
    }
    Ok(FlowVector::integer(values))
}

/// Walks every assignment in `domain`^(co-tree size) in ascending
/// lexicographic order, handing the visitor the full edge-value vector.
fn for_each_cotree_flow(
    g: &MultiGraph,
    eps: &Orientation,
    domain: &[i64],
    caps: &Caps,
    what: &str,
    mut visit: impl FnMut(&[i64]) -> Result<()>,
) -> Result<()> {
    if eps.len() != g.edge_count() {
        return Err(Error::Domain(
            "orientation must be indexed by the edge list".into(),
        ));
    }
    let forest = g.maximal_spanning_forest();
    let n = forest.cotree().len();
    let total = (domain.len() as u128)
        .checked_pow(n as u32)
        .ok_or(Error::ResourceLimit {
            name: "max_enumeration",
            what: what.to_string(),
            needed: u128::MAX,
            cap: caps.max_enumeration,
        })?;
    caps.check_enumeration(what, total)?;
    if n == 0 {
        return visit(&vec![0i64; g.edge_count()]);
    }
    if domain.is_empty() {
        return Ok(());
    }
    let rows = circuit_matrix(g, &forest, eps)?;
    let mut idx = vec![0usize; n];
    loop {
        let mut values = vec![0i64; g.edge_count()];
        for (i, row) in rows.iter().enumerate() {
            let a = domain[idx[i]];
            if a == 0 {
                continue;
            }
            for (e, &c) in row.iter().enumerate() {
                values[e] += a * c;
            }
        }
        visit(&values)?;
        // Odometer: last coordinate fastest.
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < domain.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// All modular flows of (g, eps) mod q, in ascending co-tree assignment
/// order; q^n(G) of them, or just the nowhere-zero ones when filtered.
pub fn enumerate_modular_flows(
    g: &MultiGraph,
    eps: &Orientation,
    q: i64,
    nowhere_zero_only: bool,
    caps: &Caps,
) -> Result<Vec<FlowVector>> {
    if q < 1 {
        return Err(Error::Domain(format!("modulus must be positive, got {q}")));
    }
    let domain: Vec<i64> = (0..q).collect();
    let mut out = Vec::new();
    for_each_cotree_flow(g, eps, &domain, caps, "modular flow enumeration", |vals| {
        let f = FlowVector {
            values: vals.iter().map(|v| v.rem_euclid(q)).collect(),
            modulus: Some(q),
        };
        if !nowhere_zero_only || f.is_nowhere_zero() {
            out.push(f);
        }
        Ok(())
    })?;
    Ok(out)
}

/// Number of nowhere-zero modular flows mod q. Independent of the reference
/// orientation.
pub fn count_modular_nowhere_zero(
    g: &MultiGraph,
    eps: &Orientation,
    q: i64,
    caps: &Caps,
) -> Result<u64> {
    if q < 1 {
        return Err(Error::Domain(format!("modulus must be positive, got {q}")));
    }
    let domain: Vec<i64> = (0..q).collect();
    let mut count = 0u64;
    for_each_cotree_flow(g, eps, &domain, caps, "modular flow count", |vals| {
        if vals.iter().all(|&v| v.rem_euclid(q) != 0) {
            count += 1;
        }
        Ok(())
    })?;
    Ok(count)
}

/// Integer flows of (g, rho) with every value strictly inside (0, q).
/// Positive on every edge forces rho totally cyclic, so this is 0 for any
/// orientation with a directed cut.
pub fn count_integer_flows_open(
    g: &MultiGraph,
    rho: &Orientation,
    q: i64,
    caps: &Caps,
) -> Result<u64> {
    if q < 0 {
        return Err(Error::Domain(format!("q must be nonnegative, got {q}")));
    }
    let domain: Vec<i64> = (1..q).collect();
    let mut count = 0u64;
    for_each_cotree_flow(g, rho, &domain, caps, "open integer flow count", |vals| {
        if vals.iter().all(|&v| v > 0 && v < q) {
            count += 1;
        }
        Ok(())
    })?;
    Ok(count)
}

/// Integer flows of (g, rho) with every value in the closed range [0, q].
pub fn count_integer_flows_closed(
    g: &MultiGraph,
    rho: &Orientation,
    q: i64,
    caps: &Caps,
) -> Result<u64> {
    if q < 0 {
        return Err(Error::Domain(format!("q must be nonnegative, got {q}")));
    }
    let domain: Vec<i64> = (0..=q).collect();
    let mut count = 0u64;
    for_each_cotree_flow(g, rho, &domain, caps, "closed integer flow count", |vals| {
        if vals.iter().all(|&v| v >= 0 && v <= q) {
            count += 1;
        }
        Ok(())
    })?;
    Ok(count)
}

/// Nowhere-zero integer q-flows of (g, eps): 0 < |f(e)| < q on every edge.
pub fn enumerate_nowhere_zero_integer(
    g: &MultiGraph,
    eps: &Orientation,
    q: i64,
    caps: &Caps,
) -> Result<Vec<FlowVector>> {
    if q < 0 {
        return Err(Error::Domain(format!("q must be nonnegative, got {q}")));
    }
    let domain: Vec<i64> = (-q + 1..q).filter(|&v| v != 0).collect();
    let mut out = Vec::new();
    for_each_cotree_flow(g, eps, &domain, caps, "nowhere-zero integer flows", |vals| {
        if vals.iter().all(|&v| v != 0 && v.abs() < q) {
            out.push(FlowVector::integer(vals.to_vec()));
        }
        Ok(())
    })?;
    Ok(out)
}

pub fn count_nowhere_zero_integer(
    g: &MultiGraph,
    eps: &Orientation,
    q: i64,
    caps: &Caps,
) -> Result<u64> {
    Ok(enumerate_nowhere_zero_integer(g, eps, q, caps)?.len() as u64)
}

/// The 0-1 flows of (g, eps): exactly the indicator vectors of edge sets that
/// are directed Eulerian under eps. The zero flow is always present.
pub fn zero_one_flows(g: &MultiGraph, eps: &Orientation, caps: &Caps) -> Result<Vec<FlowVector>> {
    let domain = [0i64, 1];
    let mut out = Vec::new();
    for_each_cotree_flow(g, eps, &domain, caps, "0-1 flow enumeration", |vals| {
        if vals.iter().all(|&v| v == 0 || v == 1) {
            out.push(FlowVector::integer(vals.to_vec()));
        }
        Ok(())
    })?;
    Ok(out)
}

/// Total imbalance of a value vector under rho: the sum over vertices of the
/// absolute excess. Zero exactly when the values are a (nonnegative) flow of
/// (g, rho); for the residues of a modular flow it is a multiple of 2q.
pub fn eta(g: &MultiGraph, rho: &Orientation, values: &[i64]) -> Result<i64> {
    if rho.len() != g.edge_count() || values.len() != g.edge_count() {
        return Err(Error::Domain(
            "orientation and values must both be indexed by the edge list".into(),
        ));
    }
    Ok(excess_vector(g, rho, values).iter().map(|x| x.abs()).sum())
}

/// Result of lifting a nowhere-zero modular flow.
#[derive(Debug, Clone)]
pub struct LiftResult {
    /// Integer flow congruent to the input entrywise, 0 < |f(e)| < q.
    pub flow: FlowVector,
    /// Final orientation of the walk; the lifted flow is strictly positive
    /// when read under it.
    pub orientation: Orientation,
    /// Number of path flips performed.
    pub iterations: usize,
    /// Imbalance after the final flip; always 0.
    pub final_eta: i64,
}

/// Lifts a nowhere-zero modular flow of (g, eps) mod q to a nowhere-zero
/// integer q-flow congruent to it entrywise.
///
/// The walk keeps an orientation rho (starting at eps) and the Q-image f* of
/// the input residues under rho; while some vertex has positive excess, it
/// finds a directed path under rho from the least such vertex to a vertex
/// with negative excess (breadth-first, expanding out-edges in descending
/// edge index) and reverses the path, replacing f* by q - f* on its edges.
/// Every flip lowers the total imbalance by exactly 2q (asserted), so the
/// walk terminates; the result is the P-image of f* back at eps. Because all
/// residues stay in {1..q-1}, summing excesses over the set of vertices
/// reachable from a positive-excess vertex shows a negative-excess vertex is
/// always reachable; failure to find one is reported as an internal
/// invariant violation rather than patched over.
pub fn lift_modular_flow(
    g: &MultiGraph,
    eps: &Orientation,
    modular: &FlowVector,
    caps: &Caps,
) -> Result<LiftResult> {
    let q = modular.modulus().ok_or_else(|| {
        Error::Domain("lift expects a modular flow (modulus attached)".into())
    })?;
    caps.check_edges(g.edge_count())?;
    if modular.values.len() != g.edge_count() {
        return Err(Error::Domain(
            "flow must be indexed by the edge list".into(),
        ));
    }
    if modular.values.iter().any(|&v| v <= 0 || v >= q) {
        return Err(Error::Domain(format!(
            "lift needs nowhere-zero residues strictly inside (0, {q})"
        )));
    }
    if !g.is_bridgeless() {
        return Err(Error::Domain(
            "a graph with a bridge has no nowhere-zero flow to lift".into(),
        ));
    }
    if !is_flow(g, eps, modular)? {
        return Err(Error::Domain(
            "input is not a modular flow of the given orientation".into(),
        ));
    }

    let mut rho = eps.clone();
    let mut fstar: Vec<i64> = modular.values.clone();
    let mut iterations = 0usize;
    loop {
        let excess = excess_vector(g, &rho, &fstar);
        let imbalance: i64 = excess.iter().map(|x| x.abs()).sum();
        if imbalance == 0 {
            let values = apply_p(g, eps, &rho, &fstar)?;
            for (v, m) in values.iter().zip(&modular.values) {
                if (v - m).rem_euclid(q) != 0 || *v == 0 || v.abs() >= q {
                    return Err(Error::Invariant(
                        "lifted flow fails congruence or range".into(),
                    ));
                }
            }
            let flow = FlowVector::integer(values);
            if !is_flow(g, eps, &flow)? {
                return Err(Error::Invariant("lifted vector is not a flow".into()));
            }
            return Ok(LiftResult {
                flow,
                orientation: rho,
                iterations,
                final_eta: 0,
            });
        }

        let source = (0..g.vertex_count())
            .find(|&v| excess[v] > 0)
            .ok_or_else(|| {
                Error::Invariant("positive imbalance without a positive-excess vertex".into())
            })?;
        // Breadth-first over the arrows of rho from the source; the first
        // negative-excess vertex dequeued ends the path.
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; g.vertex_count()];
        let mut seen = vec![false; g.vertex_count()];
        let mut queue = std::collections::VecDeque::from([source]);
        seen[source] = true;
        let mut target = None;
        'bfs: while let Some(v) = queue.pop_front() {
            if excess[v] < 0 {
                target = Some(v);
                break 'bfs;
            }
            for e in (0..g.edge_count()).rev() {
                if g.is_loop(e) {
                    continue;
                }
                let (tail, head) = rho.endpoints(g, e);
                if tail == v && !seen[head] {
                    seen[head] = true;
                    prev[head] = Some((v, e));
                    queue.push_back(head);
                }
            }
        }
        let target = target.ok_or_else(|| {
            Error::Invariant(
                "no directed path from a positive-excess vertex to a negative-excess vertex"
                    .into(),
            )
        })?;

        let mut path = Vec::new();
        let mut v = target;
        while v != source {
            let (from, via) = prev[v].expect("path reconstruction reaches the source");
            path.push(via);
            v = from;
        }
        let mut flipped = EdgeSubset::empty(g.edge_count());
        for &e in &path {
            flipped.insert(e);
            fstar[e] = q - fstar[e];
        }
        rho = rho.flip_edges(&flipped);
        iterations += 1;

        let new_imbalance: i64 = excess_vector(g, &rho, &fstar)
            .iter()
            .map(|x| x.abs())
            .sum();
        if new_imbalance != imbalance - 2 * q {
            return Err(Error::Invariant(format!(
                "a path flip must lower the imbalance by exactly {}, got {} -> {}",
                2 * q,
                imbalance,
                new_imbalance
            )));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::tests::graph;
    use crate::orientation::{
        enumerate_orientations, eulerian_class, is_directed_eulerian, Orientation,
    };

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

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn conservation_law() {
        let g = banana(2);
        let eps = o("00");
        assert!(is_flow(&g, &eps, &FlowVector::integer(vec![1, -1])).unwrap());
        assert!(!is_flow(&g, &eps, &FlowVector::integer(vec![1, 1])).unwrap());
        assert!(is_flow(&g, &eps, &FlowVector::modular(vec![1, 2], 3).unwrap()).unwrap());
        // Loops never constrain.
        let l = graph(&["x"], &[("x", "x")]);
        assert!(is_flow(&l, &o("0"), &FlowVector::integer(vec![7])).unwrap());
    }

    #[test]
    fn cotree_flows_span_the_flow_space() {
        let g = banana(2);
        let forest = g.maximal_spanning_forest();
        let eps = o("00");
        let f = flow_from_cotree(&g, &forest, &eps, &[5]).unwrap();
        assert_eq!(f.values(), &[-5, 5]);
        assert!(is_flow(&g, &eps, &f).unwrap());
        assert!(flow_from_cotree(&g, &forest, &eps, &[1, 2]).is_err());
    }

    #[test]
    fn modular_enumeration_counts_q_to_the_n() {
        let g = banana(4); // cycle rank 3
        let eps = o("0000");
        for q in 1..=3i64 {
            let all = enumerate_modular_flows(&g, &eps, q, false, &caps()).unwrap();
            assert_eq!(all.len() as i64, q.pow(3));
            for f in &all {
                assert!(is_flow(&g, &eps, f).unwrap());
            }
        }
        // Nowhere-zero counts match the flow polynomial of four parallel
        // edges: (q-1)(q^2-3q+3).
        for q in 1..=5i64 {
            let nz = count_modular_nowhere_zero(&g, &eps, q, &caps()).unwrap();
            assert_eq!(nz as i64, (q - 1) * (q * q - 3 * q + 3), "q={q}");
        }
        // The count ignores the reference orientation.
        for bits in ["0110", "1010", "1111"] {
            assert_eq!(
                count_modular_nowhere_zero(&g, &o(bits), 3, &caps()).unwrap(),
                6
            );
        }
    }

    #[test]
    fn modular_enumeration_on_two_parallel_edges() {
        let g = banana(2);
        let eps = o("00");
        let all = enumerate_modular_flows(&g, &eps, 3, false, &caps()).unwrap();
        let values: Vec<_> = all.iter().map(|f| f.values().to_vec()).collect();
        assert_eq!(values, vec![vec![0, 0], vec![2, 1], vec![1, 2]]);
        let nz = enumerate_modular_flows(&g, &eps, 3, true, &caps()).unwrap();
        assert_eq!(nz.len(), 2);
    }

    #[test]
    fn open_and_closed_counts_on_a_directed_two_cycle() {
        let g = banana(2);
        let rho = o("01");
        for q in 0..=5i64 {
            assert_eq!(
                count_integer_flows_open(&g, &rho, q, &caps()).unwrap() as i64,
                (q - 1).max(0)
            );
            assert_eq!(
                count_integer_flows_closed(&g, &rho, q, &caps()).unwrap() as i64,
                q + 1
            );
        }
        // Cut orientation: no open flows, only the zero flow in [0, q].
        let cut = o("00");
        assert_eq!(count_integer_flows_open(&g, &cut, 4, &caps()).unwrap(), 0);
        assert_eq!(count_integer_flows_closed(&g, &cut, 4, &caps()).unwrap(), 1);
    }

    #[test]
    fn closed_count_at_one_gives_class_sizes() {
        // Four parallel edges, k arrows down: closed counts at q = 1 are the
        // binomial convolution 1, 4, 6, 4, 1 and equal the class sizes.
        let g = banana(4);
        let expect = [1u64, 4, 6, 4, 1];
        for k in 0..=4usize {
            let bits: String = (0..4).map(|i| if i < k { '0' } else { '1' }).collect();
            let eps = o(&bits);
            let count = count_integer_flows_closed(&g, &eps, 1, &caps()).unwrap();
            assert_eq!(count, expect[k], "k={k}");
            let class = eulerian_class(&g, &eps, &caps()).unwrap();
            assert_eq!(class.size() as u64, count, "k={k}");
        }
    }

    #[test]
    fn nowhere_zero_integer_flows_of_four_parallel_edges() {
        let g = banana(4);
        let eps = o("0000");
        // (2/3)(q-1)(8q^2 - 22q + 21) at q = 2, 3, 4.
        for (q, expect) in [(2i64, 6u64), (3, 36), (4, 122)] {
            assert_eq!(
                count_nowhere_zero_integer(&g, &eps, q, &caps()).unwrap(),
                expect,
                "q={q}"
            );
        }
        // Independent of the reference orientation.
        assert_eq!(count_nowhere_zero_integer(&g, &o("0110"), 2, &caps()).unwrap(), 6);
    }

    #[test]
    fn zero_one_flows_are_eulerian_indicators() {
        // Exhaustive: for every orientation and every edge subset of a small
        // mixed graph, the indicator is a flow iff the subset is balanced.
        let g = graph(&["a", "b"], &[("a", "b"), ("a", "b"), ("b", "b")]);
        for eps in enumerate_orientations(&g, &caps()).unwrap() {
            let flows = zero_one_flows(&g, &eps, &caps()).unwrap();
            let supports: std::collections::HashSet<Vec<i64>> =
                flows.iter().map(|f| f.values().to_vec()).collect();
            for bits in 0u64..8 {
                let x = EdgeSubset::from_bits(3, bits);
                let indicator: Vec<i64> =
                    (0..3).map(|e| if x.contains(e) { 1 } else { 0 }).collect();
                assert_eq!(
                    supports.contains(&indicator),
                    is_directed_eulerian(&g, &eps, &x).unwrap(),
                    "eps={eps} bits={bits:b}"
                );
            }
        }
    }

    #[test]
    fn eta_measures_imbalance() {
        let g = banana(2);
        assert_eq!(eta(&g, &o("00"), &[1, 2]).unwrap(), 6);
        assert_eq!(eta(&g, &o("01"), &[1, 1]).unwrap(), 0);
        // For residues of a modular flow, eta is a multiple of 2q.
        let g4 = banana(4);
        let eps = o("0000");
        for f in enumerate_modular_flows(&g4, &eps, 3, true, &caps()).unwrap() {
            let e = eta(&g4, &eps, f.values()).unwrap();
            assert_eq!(e % 6, 0, "{:?}", f.values());
        }
    }

    #[test]
    fn lift_follows_the_worked_example() {
        let g = banana(2);
        let eps = o("00");
        let f = FlowVector::modular(vec![1, 2], 3).unwrap();
        let lift = lift_modular_flow(&g, &eps, &f, &caps()).unwrap();
        assert_eq!(lift.flow.values(), &[1, -1]);
        assert_eq!(lift.iterations, 1);
        assert_eq!(lift.final_eta, 0);
    }

    #[test]
    fn lift_is_identity_when_already_balanced() {
        let g = banana(2);
        let eps = o("01");
        let f = FlowVector::modular(vec![2, 2], 3).unwrap();
        let lift = lift_modular_flow(&g, &eps, &f, &caps()).unwrap();
        assert_eq!(lift.flow.values(), f.values());
        assert_eq!(lift.iterations, 0);
        assert_eq!(lift.orientation, eps);
    }

    #[test]
    fn lift_rejects_bad_inputs() {
        let g = banana(2);
        let eps = o("00");
        // Not a flow mod 3.
        let bad = FlowVector::modular(vec![1, 1], 3).unwrap();
        assert!(matches!(
            lift_modular_flow(&g, &eps, &bad, &caps()),
            Err(Error::Domain(_))
        ));
        // Zero residue.
        let zero = FlowVector::modular(vec![0, 0], 3).unwrap();
        assert!(lift_modular_flow(&g, &eps, &zero, &caps()).is_err());
        // Integer flow without a modulus.
        let plain = FlowVector::integer(vec![1, -1]);
        assert!(lift_modular_flow(&g, &eps, &plain, &caps()).is_err());
        // Bridge.
        let b = graph(&["a", "b"], &[("a", "b")]);
        let f1 = FlowVector::modular(vec![1], 2).unwrap();
        assert!(matches!(
            lift_modular_flow(&b, &o("0"), &f1, &caps()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn every_modular_flow_lifts_exhaustively() {
        // Surjectivity at small scale: on several bridgeless graphs, every
        // nowhere-zero modular flow lifts to a congruent nowhere-zero integer
        // flow in range, and the lift is reached by the enumerated set.
        let graphs = vec![
            banana(3),
            graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]),
            graph(
                &["a", "b", "c"],
                &[("a", "b"), ("b", "c"), ("c", "a"), ("a", "b"), ("c", "c")],
            ),
        ];
        for g in graphs {
            let eps = Orientation::as_listed(g.edge_count());
            for q in 2..=4i64 {
                let integer_set: std::collections::HashSet<Vec<i64>> =
                    enumerate_nowhere_zero_integer(&g, &eps, q, &caps())
                        .unwrap()
                        .into_iter()
                        .map(|f| f.values().to_vec())
                        .collect();
                for f in enumerate_modular_flows(&g, &eps, q, true, &caps()).unwrap() {
                    let lift = lift_modular_flow(&g, &eps, &f, &caps()).unwrap();
                    assert!(is_flow(&g, &eps, &lift.flow).unwrap());
                    for (v, m) in lift.flow.values().iter().zip(f.values()) {
                        assert_eq!(v.rem_euclid(q), *m);
                        assert!(*v != 0 && v.abs() < q);
                    }
                    assert!(integer_set.contains(&lift.flow.values().to_vec()));
                }
            }
        }
    }
}
