//! Counting pipelines built on the structural modules: the Tutte polynomial
//! by memoized deletion-contraction and by a direct subset sum, the modular
//! flow polynomial by four independent methods, the integral flow polynomial
//! by two, per-orientation open and closed counts, dual polynomials summed
//! over Eulerian classes, closed-form counts for parallel bundles, and a
//! verification report that replays the identities tying all of it together
//! on a concrete graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::str::FromStr;
use std::time::Instant;

use num::bigint::BigInt;
use num::rational::Ratio;
use num::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::flowspace::{
    count_integer_flows_closed, count_integer_flows_open, count_modular_nowhere_zero,
    count_nowhere_zero_integer, enumerate_modular_flows, enumerate_nowhere_zero_integer,
    lift_modular_flow, zero_one_flows,
};
use crate::multigraph::{EdgeSubset, MultiGraph};
use crate::orientation::{
    apply_p, apply_q, eulerian_class, eulerian_classes, eulerian_equivalent, induced_orientation,
    is_directed_eulerian, is_totally_cyclic, totally_cyclic_orientations, Orientation,
};
use crate::polyalg::{binomial, lagrange_interpolate, Rational, RationalBiPoly, RationalPoly};
use crate::{Caps, Error, Result};

fn big(n: u64) -> Rational {
    Ratio::from_integer(BigInt::from(n))
}

/// Evaluates p at an integer point and insists the value is an integer.
fn eval_exact_int(p: &RationalPoly, x: i64) -> Result<BigInt> {
    let v = p.evaluate_int(x);
    if !v.is_integer() {
        return Err(Error::Invariant(format!(
            "expected an integer value at t = {x}, got {v}"
        )));
    }
    Ok(v.to_integer())
}

/// Isomorphism-stable memo key: edges as unordered pairs, sorted, endpoints
/// relabeled by first appearance, then sorted again. Equal keys describe
/// identical labeled graphs up to the relabeling, which is enough for the
/// deletion-contraction cache.
fn canonical_key(g: &MultiGraph) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = (0..g.edge_count())
        .map(|e| {
            let (u, v) = g.edge(e);
            if u <= v {
                (u, v)
            } else {
                (v, u)
            }
        })
        .collect();
    edges.sort_unstable();
    let mut relabel: HashMap<usize, usize> = HashMap::new();
    for &(u, v) in &edges {
        let next = relabel.len();
        relabel.entry(u).or_insert(next);
        let next = relabel.len();
        relabel.entry(v).or_insert(next);
    }
    let mut out: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (relabel[&u], relabel[&v]);
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    out.sort_unstable();
    out
}

/// Tutte polynomial by deletion-contraction: pivot on the first edge that is
/// neither a loop nor a bridge, T = T(delete) + T(contract); once only loops
/// and bridges remain the value is x^bridges * y^loops. States are memoized
/// under a relabeling-stable key and bounded by `caps.max_subsets`.
pub fn tutte(g: &MultiGraph, caps: &Caps) -> Result<RationalBiPoly> {
    caps.check_edges(g.edge_count())?;
    let mut memo: HashMap<Vec<(usize, usize)>, RationalBiPoly> = HashMap::new();
    let mut budget = caps.max_subsets;
    tutte_rec(g, caps, &mut memo, &mut budget)
}

fn tutte_rec(
    g: &MultiGraph,
    caps: &Caps,
    memo: &mut HashMap<Vec<(usize, usize)>, RationalBiPoly>,
    budget: &mut u128,
) -> Result<RationalBiPoly> {
    let key = canonical_key(g);
    if let Some(p) = memo.get(&key) {
        return Ok(p.clone());
    }
    if *budget == 0 {
        return Err(Error::ResourceLimit {
            name: "max_subsets",
            what: "deletion-contraction recursion states".into(),
            needed: caps.max_subsets + 1,
            cap: caps.max_subsets,
        });
    }
    *budget -= 1;

    let bridges = g.bridges();
    let loops = g.loops();
    let pivot = (0..g.edge_count()).find(|&e| !bridges.contains(e) && !loops.contains(e));
    let result = match pivot {
        None => RationalBiPoly::monomial(
            Rational::one(),
            bridges.count() as u32,
            loops.count() as u32,
        ),
        Some(e) => {
            let mut x = EdgeSubset::empty(g.edge_count());
            x.insert(e);
            let del = tutte_rec(&g.delete(&x), caps, memo, budget)?;
            let con = tutte_rec(&g.contract(&x), caps, memo, budget)?;
            del.add(&con)
        }
    };
    memo.insert(key, result.clone());
    Ok(result)
}

/// Tutte polynomial straight from the definition:
/// sum over A of (x-1)^(r(E)-r(A)) * (y-1)^(n(A)), ranks taken in the
/// spanning subgraph (V, A). Exponential in the edge count; kept as an
/// independent oracle for the recursive computation.
pub fn tutte_subset_sum(g: &MultiGraph, caps: &Caps) -> Result<RationalBiPoly> {
    let m = g.edge_count();
    caps.check_edges(m)?;
    caps.check_subsets("Tutte subset sum", 1u128 << m)?;
    let r_full = g.rank();

    // Tally subsets by (corank, nullity) first; one polynomial per cell.
    let dims = (r_full + 1, m + 1);
    let counts = (0..(1u64 << m))
        .into_par_iter()
        .fold(
            || vec![vec![0i64; dims.1]; dims.0],
            |mut acc, mask| {
                let a = EdgeSubset::from_bits(m, mask);
                let corank = r_full - g.rank_within(&a);
                let nullity = g.cycle_rank_within(&a);
                acc[corank][nullity] += 1;
                acc
            },
        )
        .reduce(
            || vec![vec![0i64; dims.1]; dims.0],
            |mut lhs, rhs| {
                for (row, other) in lhs.iter_mut().zip(&rhs) {
                    for (x, y) in row.iter_mut().zip(other) {
                        *x += *y;
                    }
                }
                lhs
            },
        );

    let xm1 = RationalBiPoly::monomial(Rational::one(), 1, 0)
        .add(&RationalBiPoly::monomial(-Rational::one(), 0, 0));
    let ym1 = RationalBiPoly::monomial(Rational::one(), 0, 1)
        .add(&RationalBiPoly::monomial(-Rational::one(), 0, 0));
    let pow_x = bipoly_powers(&xm1, r_full);
    let pow_y = bipoly_powers(&ym1, m);

    let mut total = RationalBiPoly::zero();
    for (corank, row) in counts.iter().enumerate() {
        for (nullity, &count) in row.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let cell = pow_x[corank].mul(&pow_y[nullity]);
            total = total.add(&cell.scalar_mul(&Ratio::from_integer(BigInt::from(count))));
        }
    }
    Ok(total)
}

fn bipoly_powers(base: &RationalBiPoly, up_to: usize) -> Vec<RationalBiPoly> {
    let mut out = vec![RationalBiPoly::one()];
    for k in 1..=up_to {
        let next = out[k - 1].mul(base);
        out.push(next);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModularMethod {
    /// (-1)^n T(0, 1-t) from the Tutte polynomial.
    Tutte,
    /// Inclusion-exclusion over edge subsets: sum of (-1)^(|E|-|Y|) t^(n(Y)).
    Subset,
    /// Lagrange interpolation through nowhere-zero counts at q = 1..n+1,
    /// cross-checked at q = n+2.
    Interp,
    /// Characteristic polynomial of the poset of cyclic flats.
    CharPoly,
}

impl ModularMethod {
    pub const ALL: [ModularMethod; 4] = [
        ModularMethod::Tutte,
        ModularMethod::Subset,
        ModularMethod::Interp,
        ModularMethod::CharPoly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModularMethod::Tutte => "tutte",
            ModularMethod::Subset => "subset",
            ModularMethod::Interp => "interp",
            ModularMethod::CharPoly => "charpoly",
        }
    }
}

impl FromStr for ModularMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tutte" => Ok(ModularMethod::Tutte),
            "subset" => Ok(ModularMethod::Subset),
            "interp" => Ok(ModularMethod::Interp),
            "charpoly" => Ok(ModularMethod::CharPoly),
            other => Err(Error::Parse(format!(
                "unknown modular method `{other}` (expected tutte, subset, interp, or charpoly)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralMethod {
    /// Sum of open per-orientation polynomials over all totally cyclic
    /// orientations.
    SumOrientations,
    /// Lagrange interpolation through nowhere-zero integer counts at
    /// q = 1..n+1, cross-checked at q = n+2.
    Interp,
}

impl IntegralMethod {
    pub const ALL: [IntegralMethod; 2] = [IntegralMethod::SumOrientations, IntegralMethod::Interp];

    pub fn name(self) -> &'static str {
        match self {
            IntegralMethod::SumOrientations => "sum-orientations",
            IntegralMethod::Interp => "interp",
        }
    }
}

impl FromStr for IntegralMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum-orientations" => Ok(IntegralMethod::SumOrientations),
            "interp" => Ok(IntegralMethod::Interp),
            other => Err(Error::Parse(format!(
                "unknown integral method `{other}` (expected sum-orientations or interp)"
            ))),
        }
    }
}

/// One method's answer: the polynomial, the count samples when the method
/// interpolates, and how long it took.
#[derive(Debug, Clone)]
pub struct MethodReport {
    pub method: &'static str,
    pub poly: RationalPoly,
    pub samples: Option<Vec<(i64, u64)>>,
    pub millis: u128,
}

/// Several methods' answers for the same polynomial, plus whether they all
/// agree.
#[derive(Debug, Clone)]
pub struct MethodComparison {
    pub reports: Vec<MethodReport>,
    pub agreed: bool,
}

impl MethodComparison {
    pub fn poly(&self) -> &RationalPoly {
        &self.reports[0].poly
    }
}

fn compare_reports(reports: Vec<MethodReport>) -> MethodComparison {
    let agreed = reports.windows(2).all(|w| w[0].poly == w[1].poly);
    MethodComparison { reports, agreed }
}

/// Fits a polynomial of degree < `fit` through the first `fit` samples and
/// demands the remaining samples fall on it.
fn fit_and_check(samples: &[(i64, u64)], fit: usize, what: &str) -> Result<RationalPoly> {
    let points: Vec<(i64, BigInt)> = samples[..fit]
        .iter()
        .map(|&(x, y)| (x, BigInt::from(y)))
        .collect();
    let p = lagrange_interpolate(&points)?;
    for &(x, y) in &samples[fit..] {
        if p.evaluate_int(x) != big(y) {
            return Err(Error::Invariant(format!(
                "{what}: the count at q = {x} is off the interpolated polynomial"
            )));
        }
    }
    Ok(p)
}

/// Modular flow polynomial of g by the chosen method. Every method returns
/// the same polynomial; they share no intermediate computations.
pub fn modular_flow_poly(
    g: &MultiGraph,
    method: ModularMethod,
    caps: &Caps,
) -> Result<MethodReport> {
    let start = Instant::now();
    let n = g.cycle_rank();
    let (poly, samples) = match method {
        ModularMethod::Tutte => {
            let t = tutte(g, caps)?;
            let in_y = t.evaluate_x(&Rational::zero());
            let composed = in_y.compose_affine(&Rational::one(), &-Rational::one());
            let signed = if n % 2 == 1 { composed.neg() } else { composed };
            (signed, None)
        }
        ModularMethod::Subset => (modular_subset_sum(g, caps)?, None),
        ModularMethod::Interp => {
            let eps = Orientation::as_listed(g.edge_count());
            let mut samples = Vec::new();
            for q in 1..=(n as i64 + 2) {
                samples.push((q, count_modular_nowhere_zero(g, &eps, q, caps)?));
            }
            let p = fit_and_check(&samples, n + 1, "nowhere-zero modular counts")?;
            (p, Some(samples))
        }
        ModularMethod::CharPoly => {
            if g.is_bridgeless() {
                (flat_poset(g, caps)?.characteristic_polynomial(), None)
            } else {
                // An edge on no circuit forces every flow to vanish on it, so
                // the polynomial is identically zero; the poset route needs
                // the top flat to dominate strictly and is skipped.
                (RationalPoly::zero(), None)
            }
        }
    };
    Ok(MethodReport {
        method: method.name(),
        poly,
        samples,
        millis: start.elapsed().as_millis(),
    })
}

fn modular_subset_sum(g: &MultiGraph, caps: &Caps) -> Result<RationalPoly> {
    let m = g.edge_count();
    caps.check_edges(m)?;
    caps.check_subsets("modular subset sum", 1u128 << m)?;
    let n = g.cycle_rank();
    let coeffs = (0..(1u64 << m))
        .into_par_iter()
        .fold(
            || vec![0i64; n + 1],
            |mut acc, mask| {
                let y = EdgeSubset::from_bits(m, mask);
                let nullity = g.cycle_rank_within(&y);
                if (m - y.count()) % 2 == 1 {
                    acc[nullity] -= 1;
                } else {
                    acc[nullity] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0i64; n + 1],
            |mut lhs, rhs| {
                for (x, y) in lhs.iter_mut().zip(&rhs) {
                    *x += *y;
                }
                lhs
            },
        );
    Ok(RationalPoly::from_ints(&coeffs))
}

/// Runs all four modular methods and compares the polynomials.
pub fn modular_flow_all(g: &MultiGraph, caps: &Caps) -> Result<MethodComparison> {
    let reports = ModularMethod::ALL
        .iter()
        .map(|&m| modular_flow_poly(g, m, caps))
        .collect::<Result<Vec<_>>>()?;
    Ok(compare_reports(reports))
}

/// Integral flow polynomial of g (nowhere-zero integer q-flow counts) by the
/// chosen method.
pub fn integral_flow_poly(
    g: &MultiGraph,
    method: IntegralMethod,
    caps: &Caps,
) -> Result<MethodReport> {
    let start = Instant::now();
    let n = g.cycle_rank();
    let (poly, samples) = match method {
        IntegralMethod::SumOrientations => {
            let tc = totally_cyclic_orientations(g, caps)?;
            let opens = tc
                .par_iter()
                .map(|rho| open_local_poly(g, rho, caps).map(|(p, _)| p))
                .collect::<Result<Vec<_>>>()?;
            let total = opens
                .iter()
                .fold(RationalPoly::zero(), |acc, p| acc.add(p));
            (total, None)
        }
        IntegralMethod::Interp => {
            let eps = Orientation::as_listed(g.edge_count());
            let mut samples = Vec::new();
            for q in 1..=(n as i64 + 2) {
                samples.push((q, count_nowhere_zero_integer(g, &eps, q, caps)?));
            }
            let p = fit_and_check(&samples, n + 1, "nowhere-zero integer counts")?;
            (p, Some(samples))
        }
    };
    Ok(MethodReport {
        method: method.name(),
        poly,
        samples,
        millis: start.elapsed().as_millis(),
    })
}

/// Runs both integral methods and compares the polynomials.
pub fn integral_flow_all(g: &MultiGraph, caps: &Caps) -> Result<MethodComparison> {
    let reports = IntegralMethod::ALL
        .iter()
        .map(|&m| integral_flow_poly(g, m, caps))
        .collect::<Result<Vec<_>>>()?;
    Ok(compare_reports(reports))
}

fn open_local_poly(
    g: &MultiGraph,
    rho: &Orientation,
    caps: &Caps,
) -> Result<(RationalPoly, Vec<(i64, u64)>)> {
    let n = g.cycle_rank();
    let mut samples = Vec::new();
    for q in 1..=(n as i64 + 2) {
        samples.push((q, count_integer_flows_open(g, rho, q, caps)?));
    }
    let p = fit_and_check(&samples, n + 1, "open flow counts")?;
    Ok((p, samples))
}

fn closed_local_poly(
    g: &MultiGraph,
    rho: &Orientation,
    caps: &Caps,
) -> Result<(RationalPoly, Vec<(i64, u64)>)> {
    let n = g.cycle_rank();
    let mut samples = Vec::new();
    for q in 0..=(n as i64 + 1) {
        samples.push((q, count_integer_flows_closed(g, rho, q, caps)?));
    }
    let p = fit_and_check(&samples, n + 1, "closed flow counts")?;
    Ok((p, samples))
}

/// Open and closed counting polynomials of one orientation: values strictly
/// inside (0, q), respectively inside [0, q], on every edge. The open
/// polynomial is identically zero unless the orientation is totally cyclic.
#[derive(Debug, Clone)]
pub struct LocalPolys {
    pub open: RationalPoly,
    pub open_samples: Vec<(i64, u64)>,
    pub closed: RationalPoly,
    pub closed_samples: Vec<(i64, u64)>,
    pub totally_cyclic: bool,
}

pub fn local_flow_polys(g: &MultiGraph, rho: &Orientation, caps: &Caps) -> Result<LocalPolys> {
    let (open, open_samples) = open_local_poly(g, rho, caps)?;
    let (closed, closed_samples) = closed_local_poly(g, rho, caps)?;
    Ok(LocalPolys {
        open,
        open_samples,
        closed,
        closed_samples,
        totally_cyclic: is_totally_cyclic(g, rho)?,
    })
}

/// One Eulerian class of totally cyclic orientations and the closed
/// polynomial shared by its members.
#[derive(Debug, Clone)]
pub struct ClassPolys {
    pub representative: Orientation,
    pub size: usize,
    pub closed: RationalPoly,
}

/// Dual (closed-count) polynomials: `closed_integral` sums the closed
/// polynomial over every totally cyclic orientation, `closed_modular` over
/// one representative per Eulerian class. The two flags record that the
/// per-class sums do not depend on which member stands for the class.
#[derive(Debug, Clone)]
pub struct DualReport {
    pub closed_integral: RationalPoly,
    pub closed_modular: RationalPoly,
    pub classes: Vec<ClassPolys>,
    pub representative_independent: bool,
    pub members_share_closed_poly: bool,
}

pub fn dual_polys(g: &MultiGraph, caps: &Caps) -> Result<DualReport> {
    let classes = eulerian_classes(g, true, caps)?;
    let mut out_classes = Vec::new();
    let mut closed_integral = RationalPoly::zero();
    let mut closed_modular = RationalPoly::zero();
    let mut alternate = RationalPoly::zero();
    let mut members_share = true;
    for class in &classes {
        let member_polys = class
            .members
            .par_iter()
            .map(|m| closed_local_poly(g, m, caps).map(|(p, _)| p))
            .collect::<Result<Vec<_>>>()?;
        let rep_poly = member_polys[0].clone();
        if member_polys.iter().any(|p| *p != rep_poly) {
            members_share = false;
        }
        for p in &member_polys {
            closed_integral = closed_integral.add(p);
        }
        closed_modular = closed_modular.add(&rep_poly);
        alternate = alternate.add(member_polys.last().expect("classes are nonempty"));
        out_classes.push(ClassPolys {
            representative: class.representative.clone(),
            size: class.size(),
            closed: rep_poly,
        });
    }
    Ok(DualReport {
        representative_independent: alternate == closed_modular,
        members_share_closed_poly: members_share,
        closed_integral,
        closed_modular,
        classes: out_classes,
    })
}

/// The closed modular polynomial obtained from the open one by the
/// reciprocity substitution (-1)^n p(-t).
pub fn closed_modular_from_reciprocity(g: &MultiGraph, caps: &Caps) -> Result<RationalPoly> {
    let phi = modular_flow_poly(g, ModularMethod::Tutte, caps)?.poly;
    Ok(phi.reciprocity_transform(g.cycle_rank()))
}

/// Poset of cyclic flats: the distinct values of the cyclic part over all
/// spanning edge subsets, ordered by inclusion, each graded by its nullity,
/// with Moebius values taken against the top flat (the cyclic part of the
/// whole graph).
#[derive(Debug, Clone)]
pub struct FlatPoset {
    flats: Vec<EdgeSubset>,
    ranks: Vec<usize>,
    mobius: Vec<BigInt>,
    top: usize,
}

pub fn flat_poset(g: &MultiGraph, caps: &Caps) -> Result<FlatPoset> {
    let m = g.edge_count();
    caps.check_edges(m)?;
    caps.check_subsets("cyclic flat enumeration", 1u128 << m)?;
    let flat_set = (0..(1u64 << m))
        .into_par_iter()
        .fold(BTreeSet::new, |mut acc: BTreeSet<EdgeSubset>, mask| {
            acc.insert(g.cyclic_part_within(&EdgeSubset::from_bits(m, mask)));
            acc
        })
        .reduce(BTreeSet::new, |mut lhs, rhs| {
            lhs.extend(rhs);
            lhs
        });
    let flats: Vec<EdgeSubset> = flat_set.into_iter().collect();
    let ranks: Vec<usize> = flats.iter().map(|f| g.cycle_rank_within(f)).collect();
    let top_key = g.cyclic_part_within(&EdgeSubset::full(m));
    let top = flats
        .iter()
        .position(|f| *f == top_key)
        .ok_or_else(|| Error::Invariant("the whole graph's cyclic part must be a flat".into()))?;

    // Moebius values against the top flat, filled in descending order of
    // flat size; strict supersets are always already done.
    let mut order: Vec<usize> = (0..flats.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(flats[i].count()));
    let mut mobius = vec![BigInt::zero(); flats.len()];
    for &i in &order {
        if i == top {
            mobius[i] = BigInt::one();
            continue;
        }
        let mut sum = BigInt::zero();
        for j in 0..flats.len() {
            if j != i && flats[i].is_subset_of(&flats[j]) {
                sum += &mobius[j];
            }
        }
        mobius[i] = -sum;
    }
    Ok(FlatPoset {
        flats,
        ranks,
        mobius,
        top,
    })
}

impl FlatPoset {
    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flats(&self) -> &[EdgeSubset] {
        &self.flats
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn mobius(&self) -> &[BigInt] {
        &self.mobius
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Sum of mu(x, top) t^rank(x) over the flats.
    pub fn characteristic_polynomial(&self) -> RationalPoly {
        let top_rank = self.ranks[self.top];
        let mut coeffs = vec![Rational::zero(); top_rank + 1];
        for (i, mu) in self.mobius.iter().enumerate() {
            coeffs[self.ranks[i]] += Ratio::from_integer(mu.clone());
        }
        RationalPoly::from_coeffs(coeffs)
    }
}

/// The Tutte polynomial along the x = 0 line: T(0, 1) counts Eulerian classes
/// of totally cyclic orientations, T(0, 2) the orientations themselves,
/// (-1)^n T(0, 1-t) is the modular flow polynomial and T(0, t+1) its closed
/// companion.
#[derive(Debug, Clone)]
pub struct TutteSpecializations {
    pub tutte: RationalBiPoly,
    pub class_count: BigInt,
    pub totally_cyclic_count: BigInt,
    pub modular: RationalPoly,
    pub closed_modular: RationalPoly,
}

pub fn tutte_specializations(g: &MultiGraph, caps: &Caps) -> Result<TutteSpecializations> {
    let t = tutte(g, caps)?;
    let n = g.cycle_rank();
    let along_x0 = t.evaluate_x(&Rational::zero());
    let modular = {
        let composed = along_x0.compose_affine(&Rational::one(), &-Rational::one());
        if n % 2 == 1 {
            composed.neg()
        } else {
            composed
        }
    };
    let closed_modular = along_x0.compose_affine(&Rational::one(), &Rational::one());
    let exact = |x: i64| -> Result<BigInt> { eval_exact_int(&along_x0, x) };
    Ok(TutteSpecializations {
        class_count: exact(1)?,
        totally_cyclic_count: exact(2)?,
        modular,
        closed_modular,
        tutte: t,
    })
}

/// One subset's contribution to the contraction expansion of the modular
/// polynomial at a negated argument.
#[derive(Debug, Clone)]
pub struct ContractionTerm {
    pub subset: Vec<usize>,
    pub inner_flow_count: u64,
    pub contraction_tc_count: u64,
}

/// Checks phi(G, -q) = (-1)^n(G) * sum over X of phi(<X>, q) * #O_tc(G/X):
/// the left side comes from the Tutte-route polynomial, the right side from
/// direct enumeration on every induced subgraph and contraction.
#[derive(Debug, Clone)]
pub struct ContractionExpansion {
    pub q: i64,
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub holds: bool,
    pub terms: Vec<ContractionTerm>,
}

pub fn contraction_expansion_check(
    g: &MultiGraph,
    q: i64,
    caps: &Caps,
) -> Result<ContractionExpansion> {
    if q < 1 {
        return Err(Error::Domain(format!("q must be positive, got {q}")));
    }
    let m = g.edge_count();
    caps.check_edges(m)?;
    caps.check_subsets("contraction expansion", 1u128 << m)?;
    // Each subset X spawns an orientation scan of G/X, so the total work is
    // 3^m orientation visits.
    caps.check_enumeration("contraction expansion orientation scans", 3u128.pow(m as u32))?;

    let phi = modular_flow_poly(g, ModularMethod::Tutte, caps)?.poly;
    let lhs = eval_exact_int(&phi, -q)?;

    let terms = (0..(1u64 << m))
        .into_par_iter()
        .map(|mask| -> Result<ContractionTerm> {
            let x = EdgeSubset::from_bits(m, mask);
            let inner = g.induced(&x);
            let eps = Orientation::as_listed(inner.edge_count());
            let inner_flow_count = count_modular_nowhere_zero(&inner, &eps, q, caps)?;
            let contraction = g.contract(&x);
            let contraction_tc_count = totally_cyclic_orientations(&contraction, caps)?.len() as u64;
            Ok(ContractionTerm {
                subset: x.indices(),
                inner_flow_count,
                contraction_tc_count,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sum = BigInt::zero();
    for term in &terms {
        sum += BigInt::from(term.inner_flow_count) * BigInt::from(term.contraction_tc_count);
    }
    let rhs = if g.cycle_rank() % 2 == 1 { -sum } else { sum };
    Ok(ContractionExpansion {
        q,
        holds: lhs == rhs,
        lhs,
        rhs,
        terms,
    })
}

/// Lattice points of the cube [0, 2(q-1)]^n lying on the central hyperplane
/// y_1 + ... + y_n = n(q-1), in closed form. Equivalently: integer vectors
/// with n coordinates of absolute value at most q-1 summing to zero, the
/// closed flow count of a bundle of n parallel edges at q-1.
pub fn central_section_count(n: i64, q: i64) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::Domain(format!("n must be nonnegative, got {n}")));
    }
    if q < 1 {
        return Err(Error::Domain(format!("q must be positive, got {q}")));
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut acc = binomial(n * q - 1, n - 1);
    let jmax = n * (q - 1) / (2 * q - 1);
    for j in 1..=jmax {
        let term = binomial(n, j) * binomial((n - 2 * j) * q, n - j);
        if j % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    Ok(acc)
}

/// Nowhere-zero integer q-flow count of a bundle of n parallel edges,
/// assembled from central section counts by inclusion-exclusion on the set
/// of zero coordinates.
pub fn parallel_nowhere_zero_count(n: i64, q: i64) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::Domain(format!("n must be nonnegative, got {n}")));
    }
    let mut acc = BigInt::zero();
    for j in 0..=n {
        let term = binomial(n, j) * central_section_count(n - j, q)?;
        if j % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    Ok(acc)
}

/// One verified identity: its stable name, whether it held, whether the
/// identity's hypothesis (usually bridgelessness) was met so the check is
/// more than vacuous, and a short human-readable summary.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub hypothesis_met: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub cycle_rank: usize,
    pub bridges: Vec<usize>,
    pub totally_cyclic_orientations: usize,
    pub orientation_classes: usize,
    pub totally_cyclic_classes: usize,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub summary: GraphSummary,
    pub q_max: i64,
    pub checks: Vec<CheckResult>,
    pub all_passed: bool,
}

fn push_check(
    checks: &mut Vec<CheckResult>,
    name: &str,
    hypothesis_met: bool,
    passed: bool,
    detail: String,
) {
    checks.push(CheckResult {
        name: name.into(),
        passed,
        hypothesis_met,
        detail,
    });
}

/// Recomputes every identity the library exposes on one graph and reports
/// each as a named pass/fail line. Lifting and decomposition identities are
/// replayed for every modulus from 2 through `q_max`.
pub fn verify(g: &MultiGraph, q_max: i64, caps: &Caps) -> Result<VerificationReport> {
    if q_max < 1 {
        return Err(Error::Domain(format!("q_max must be positive, got {q_max}")));
    }
    let m = g.edge_count();
    let n = g.cycle_rank();
    let bridgeless = g.is_bridgeless();
    let eps0 = Orientation::as_listed(m);
    let tc = totally_cyclic_orientations(g, caps)?;
    let all_classes = eulerian_classes(g, false, caps)?;
    let tc_class_count = all_classes.iter().filter(|c| c.totally_cyclic).count();
    let mut checks: Vec<CheckResult> = Vec::new();

    // Four modular routes, two integral routes.
    let modular = modular_flow_all(g, caps)?;
    let polys: Vec<String> = modular
        .reports
        .iter()
        .map(|r| format!("{}: {}", r.method, r.poly))
        .collect();
    push_check(
        &mut checks,
        "modular-methods-agree",
        true,
        modular.agreed,
        polys.join("; "),
    );
    let phi = modular.poly().clone();

    let integral = integral_flow_all(g, caps)?;
    let polys: Vec<String> = integral
        .reports
        .iter()
        .map(|r| format!("{}: {}", r.method, r.poly))
        .collect();
    push_check(
        &mut checks,
        "integral-methods-agree",
        true,
        integral.agreed,
        polys.join("; "),
    );
    let phi_z = integral.poly().clone();

    // Open and closed polynomials of every totally cyclic orientation.
    let locals: Vec<(Orientation, LocalPolys)> = tc
        .par_iter()
        .map(|rho| local_flow_polys(g, rho, caps).map(|l| (rho.clone(), l)))
        .collect::<Result<Vec<_>>>()?;
    let local_failures: Vec<String> = locals
        .iter()
        .filter(|(_, l)| l.open.reciprocity_transform(n) != l.closed)
        .map(|(rho, _)| rho.to_bitstring())
        .collect();
    push_check(
        &mut checks,
        "local-reciprocity",
        bridgeless,
        local_failures.is_empty(),
        if local_failures.is_empty() {
            format!("(-1)^n open(-t) = closed(t) for all {} totally cyclic orientations", locals.len())
        } else {
            format!("failing orientations: {}", local_failures.join(", "))
        },
    );

    let dual = dual_polys(g, caps)?;
    push_check(
        &mut checks,
        "modular-reciprocity",
        bridgeless,
        phi.reciprocity_transform(n) == dual.closed_modular,
        format!(
            "(-1)^n phi(-t) = {}, class sum = {}",
            phi.reciprocity_transform(n),
            dual.closed_modular
        ),
    );
    push_check(
        &mut checks,
        "integral-reciprocity",
        bridgeless,
        phi_z.reciprocity_transform(n) == dual.closed_integral,
        format!(
            "(-1)^n phi_Z(-t) = {}, orientation sum = {}",
            phi_z.reciprocity_transform(n),
            dual.closed_integral
        ),
    );

    // The open polynomials aggregate two ways: one representative per class
    // gives the modular polynomial, all totally cyclic orientations give the
    // integral one.
    let rep_open_sum = dual
        .classes
        .iter()
        .map(|c| {
            locals
                .iter()
                .find(|(rho, _)| *rho == c.representative)
                .map(|(_, l)| l.open.clone())
                .ok_or_else(|| {
                    Error::Invariant("class representatives are totally cyclic".into())
                })
        })
        .collect::<Result<Vec<_>>>()?
        .iter()
        .fold(RationalPoly::zero(), |acc, p| acc.add(p));
    push_check(
        &mut checks,
        "modular-class-sum",
        bridgeless,
        rep_open_sum == phi,
        format!("sum over class representatives = {rep_open_sum}, phi = {phi}"),
    );
    let all_open_sum = locals
        .iter()
        .fold(RationalPoly::zero(), |acc, (_, l)| acc.add(&l.open));
    push_check(
        &mut checks,
        "integral-orientation-sum",
        bridgeless,
        all_open_sum == phi_z,
        format!("sum over totally cyclic orientations = {all_open_sum}, phi_Z = {phi_z}"),
    );
    push_check(
        &mut checks,
        "closed-sum-representative-independent",
        bridgeless,
        dual.representative_independent && dual.members_share_closed_poly,
        format!(
            "members share closed polynomials: {}; alternate representatives give the same sum: {}",
            dual.members_share_closed_poly, dual.representative_independent
        ),
    );

    // Evaluations against direct censuses.
    let specials = tutte_specializations(g, caps)?;
    let phi_minus1 = eval_exact_int(&phi, -1)?.abs();
    let phi_zero = eval_exact_int(&phi, 0)?.abs();
    let phi_one = eval_exact_int(&phi, 1)?;
    let phi_z_zero = eval_exact_int(&phi_z, 0)?.abs();
    let dual_zero = eval_exact_int(&dual.closed_modular, 0)?;
    let dual_one = eval_exact_int(&dual.closed_modular, 1)?;
    let dual_z_zero = eval_exact_int(&dual.closed_integral, 0)?;
    let expected_one = BigInt::from(u64::from(m == 0));
    let census_ok = phi_minus1 == BigInt::from(tc.len() as u64)
        && specials.totally_cyclic_count == phi_minus1
        && phi_zero == BigInt::from(tc_class_count as u64)
        && specials.class_count == phi_zero
        && phi_one == expected_one
        && phi_z_zero == BigInt::from(tc.len() as u64)
        && dual_zero == BigInt::from(tc_class_count as u64)
        && dual_one == BigInt::from(tc.len() as u64)
        && dual_z_zero == BigInt::from(tc.len() as u64)
        && specials.modular == phi
        && specials.closed_modular == dual.closed_modular;
    push_check(
        &mut checks,
        "evaluation-census",
        bridgeless,
        census_ok,
        format!(
            "|phi(-1)| = {phi_minus1}, T(0,2) = {}, totally cyclic = {}; |phi(0)| = {phi_zero}, \
             T(0,1) = {}, classes = {tc_class_count}; phi(1) = {phi_one}; |phi_Z(0)| = {phi_z_zero}",
            specials.totally_cyclic_count,
            tc.len(),
            specials.class_count
        ),
    );

    // Every orientation's class has as many members as the orientation has
    // closed flows at q = 1, i.e. 0-1 flows, and those flows indicate
    // exactly the directed Eulerian edge sets.
    let mut size_ok = true;
    let mut indicator_ok = true;
    let mut orientation_total = 0usize;
    for class in &all_classes {
        for member in &class.members {
            orientation_total += 1;
            let closed_at_one = count_integer_flows_closed(g, member, 1, caps)?;
            let flows = zero_one_flows(g, member, caps)?;
            if closed_at_one != class.size() as u64 || flows.len() != class.size() {
                size_ok = false;
            }
            for f in &flows {
                let mut support = EdgeSubset::empty(m);
                for (e, &v) in f.values().iter().enumerate() {
                    if v != 0 {
                        support.insert(e);
                    }
                }
                if !is_directed_eulerian(g, member, &support)? {
                    indicator_ok = false;
                }
            }
        }
    }
    push_check(
        &mut checks,
        "class-size-equals-closed-count-at-one",
        true,
        size_ok && orientation_total == 1usize << m,
        format!("checked all {orientation_total} orientations"),
    );
    push_check(
        &mut checks,
        "zero-one-flows-are-eulerian-indicators",
        true,
        indicator_ok,
        format!("checked all {orientation_total} orientations"),
    );

    // Lifting and the fiber structure over each nowhere-zero modular flow,
    // then the partition of nowhere-zero integer flows into orientation
    // cones, for each modulus.
    let mut lift_ok = true;
    let mut lift_detail = Vec::new();
    let mut decomp_ok = true;
    let mut decomp_detail = Vec::new();
    for q in 2..=q_max {
        let modulars = enumerate_modular_flows(g, &eps0, q, true, caps)?;
        let integers = enumerate_nowhere_zero_integer(g, &eps0, q, caps)?;
        let mut fibers: BTreeMap<Vec<i64>, Vec<Vec<i64>>> = BTreeMap::new();
        for f in &integers {
            let key: Vec<i64> = f.values().iter().map(|v| v.rem_euclid(q)).collect();
            fibers.entry(key).or_default().push(f.values().to_vec());
        }
        let modular_keys: BTreeSet<Vec<i64>> =
            modulars.iter().map(|f| f.values().to_vec()).collect();
        let fiber_keys: BTreeSet<Vec<i64>> = fibers.keys().cloned().collect();
        if modular_keys != fiber_keys {
            lift_ok = false;
            lift_detail.push(format!("q = {q}: reduction image differs from the modular flows"));
            continue;
        }

        for fv in &modulars {
            match lift_modular_flow(g, &eps0, fv, caps) {
                Ok(res) => {
                    let fiber = &fibers[fv.values()];
                    if !fiber.contains(&res.flow.values().to_vec()) {
                        lift_ok = false;
                        lift_detail.push(format!(
                            "q = {q}: lift of {:?} left its own fiber",
                            fv.values()
                        ));
                    }
                }
                Err(Error::Invariant(msg)) => {
                    lift_ok = false;
                    lift_detail.push(format!("q = {q}: lift failed: {msg}"));
                }
                Err(e) => return Err(e),
            }
        }

        for (key, fiber) in &fibers {
            let rho0 = induced_orientation(g, &eps0, &fiber[0])?;
            for member in &fiber[1..] {
                let rho = induced_orientation(g, &eps0, member)?;
                if !eulerian_equivalent(g, &rho0, &rho)? {
                    lift_ok = false;
                    lift_detail.push(format!(
                        "q = {q}: fiber over {key:?} mixes inequivalent orientations"
                    ));
                }
            }
            let class = eulerian_class(g, &rho0, caps)?;
            if fiber.len() != class.size() {
                lift_ok = false;
                lift_detail.push(format!(
                    "q = {q}: fiber over {key:?} has {} flows, class has {}",
                    fiber.len(),
                    class.size()
                ));
            }
            // The whole fiber from one member: P back to eps after Q-twisting
            // across each member of the class.
            let under_rho = apply_p(g, &rho0, &eps0, &fiber[0])?;
            let mut rebuilt: BTreeSet<Vec<i64>> = BTreeSet::new();
            for alpha in &class.members {
                let twisted = apply_q(g, alpha, &rho0, &under_rho, q)?;
                rebuilt.insert(apply_p(g, &eps0, alpha, &twisted)?);
            }
            let fiber_set: BTreeSet<Vec<i64>> = fiber.iter().cloned().collect();
            if rebuilt != fiber_set {
                lift_ok = false;
                lift_detail.push(format!(
                    "q = {q}: twisting one member across its class does not rebuild the fiber over {key:?}"
                ));
            }
        }
        lift_detail.push(format!(
            "q = {q}: {} modular flows, {} integer flows",
            modulars.len(),
            integers.len()
        ));

        // Integer flows grouped by induced orientation: groups sit exactly on
        // the totally cyclic orientations, with open-count sizes.
        let mut groups: BTreeMap<Orientation, u64> = BTreeMap::new();
        for f in &integers {
            let rho = induced_orientation(g, &eps0, f.values())?;
            *groups.entry(rho).or_default() += 1;
        }
        let mut open_total = Rational::zero();
        for (_, l) in &locals {
            open_total += l.open.evaluate_int(q);
        }
        if open_total != big(integers.len() as u64) {
            decomp_ok = false;
            decomp_detail.push(format!(
                "q = {q}: open counts over totally cyclic orientations sum to {open_total}, \
                 but there are {} flows",
                integers.len()
            ));
        }
        for (rho, count) in &groups {
            match locals.iter().find(|(r, _)| r == rho) {
                Some((_, l)) => {
                    if l.open.evaluate_int(q) != big(*count) {
                        decomp_ok = false;
                        decomp_detail.push(format!(
                            "q = {q}: cone of {} holds {count} flows, open count disagrees",
                            rho.to_bitstring()
                        ));
                    }
                }
                None => {
                    decomp_ok = false;
                    decomp_detail.push(format!(
                        "q = {q}: induced orientation {} is not totally cyclic",
                        rho.to_bitstring()
                    ));
                }
            }
        }
        decomp_detail.push(format!("q = {q}: {} cones", groups.len()));
    }
    push_check(
        &mut checks,
        "lifting-is-surjective-with-class-fibers",
        bridgeless,
        lift_ok,
        lift_detail.join("; "),
    );
    push_check(
        &mut checks,
        "nowhere-zero-flows-decompose-by-orientation",
        bridgeless,
        decomp_ok,
        decomp_detail.join("; "),
    );

    // Contraction expansion at the small moduli.
    let mut exp_ok = true;
    let mut exp_detail = Vec::new();
    for q in 1..=q_max.min(3) {
        let report = contraction_expansion_check(g, q, caps)?;
        if !report.holds {
            exp_ok = false;
        }
        exp_detail.push(format!("q = {q}: lhs = {}, rhs = {}", report.lhs, report.rhs));
    }
    push_check(
        &mut checks,
        "contraction-expansion",
        true,
        exp_ok,
        exp_detail.join("; "),
    );

    let all_passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        summary: GraphSummary {
            vertices: g.vertex_count(),
            edges: m,
            components: g.components().count,
            cycle_rank: n,
            bridges: g.bridges().indices(),
            totally_cyclic_orientations: tc.len(),
            orientation_classes: all_classes.len(),
            totally_cyclic_classes: tc_class_count,
        },
        q_max,
        checks,
        all_passed,
    })
}
