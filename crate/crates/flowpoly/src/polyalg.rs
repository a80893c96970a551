//! Exact rational and polynomial arithmetic.
//!
//! Scalars are arbitrary-precision rationals (always reduced, denominator
//! positive). Univariate polynomials are dense coefficient vectors in
//! ascending degree with no trailing zeros; bivariate polynomials are sparse
//! maps from exponent pairs to coefficients. Nothing here is approximate:
//! interpolation, composition, and binomials are all exact.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::Ratio;
use num::{One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational scalar, kept in lowest terms with a positive
/// denominator by the underlying representation.
pub type Rational = Ratio<BigInt>;

/// Rational from an integer pair. Panics on a zero denominator.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Ratio::new(BigInt::from(numer), BigInt::from(denom))
}

/// Rational from an integer.
pub fn rational_int(n: i64) -> Rational {
    Ratio::from_integer(BigInt::from(n))
}

/// Wire form of a rational: `"numer/denom"`, denominator always present and
/// positive, e.g. `"-3/1"` or `"16/3"`.
pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"numer/denom"` (a bare integer is read as denominator 1).
pub fn rational_from_str(s: &str) -> Result<Rational> {
    let parse_int = |t: &str| {
        BigInt::from_str(t.trim())
            .map_err(|e| Error::Parse(format!("bad rational `{s}`: {e}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let numer = parse_int(n)?;
            let denom = parse_int(d)?;
            if denom.is_zero() {
                return Err(Error::Parse(format!("bad rational `{s}`: zero denominator")));
            }
            Ok(Ratio::new(numer, denom))
        }
        None => Ok(Ratio::from_integer(parse_int(s)?)),
    }
}

/// Binomial coefficient with integer (possibly negative) top argument, via
/// the falling factorial: C(n,k) = n(n-1)...(n-k+1)/k!. Returns 0 for k < 0,
/// and 1 for k = 0. The running quotient stays integral at every step.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    let n = BigInt::from(n);
    for i in 0..k {
        acc *= &n - BigInt::from(i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Multisets of size r from n kinds: C(n + r - 1, r).
pub fn choose_multiset(n: i64, r: i64) -> BigInt {
    binomial(n + r - 1, r)
}

/// Dense univariate polynomial over the rationals.
///
/// `coeffs[k]` is the coefficient of t^k; the vector carries no trailing
/// zeros, so the zero polynomial is the empty vector and `degree` of a
/// nonzero polynomial is `coeffs.len() - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial c * t^k.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    /// Convenience: ascending integer coefficients.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rational_int(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of a nonzero polynomial; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of t^k (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    /// Horner evaluation at a rational point.
    pub fn evaluate(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn evaluate_int(&self, x: i64) -> Rational {
        self.evaluate(&rational_int(x))
    }

    /// p(a + b*t), by Horner over polynomials.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> Self {
        let arg = Self::from_coeffs(vec![a.clone(), b.clone()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&arg).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// The reciprocity transform (-1)^n p(-t): coefficient k picks up the
    /// sign (-1)^(n+k). Applying it twice with the same n is the identity.
    pub fn reciprocity_transform(&self, n: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if (n + k) % 2 == 1 { -c } else { c.clone() })
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Wire form: `{"var":"t","coeffs":["-3/1","6/1","-4/1","1/1"]}`,
    /// coefficients ascending.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "var": "t",
            "coeffs": self.coeffs.iter().map(rational_to_string).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let coeffs = v
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::Parse("polynomial JSON needs a `coeffs` array".into()))?;
        let mut out = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            let s = c
                .as_str()
                .ok_or_else(|| Error::Parse("polynomial coefficients must be strings".into()))?;
            out.push(rational_from_str(s)?);
        }
        Ok(Self::from_coeffs(out))
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one() && k > 0;
            if !unit_coeff {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "{}/{}", mag.numer(), mag.denom())?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "{}t", if unit_coeff { "" } else { "*" })?,
                _ => write!(f, "{}t^{}", if unit_coeff { "" } else { "*" }, k)?,
            }
        }
        Ok(())
    }
}

/// Exact Lagrange interpolation through `points`, which must have pairwise
/// distinct abscissas; the result has degree at most `points.len() - 1`.
pub fn lagrange_interpolate(points: &[(i64, BigInt)]) -> Result<RationalPoly> {
    for (a, (x, _)) in points.iter().enumerate() {
        if points[..a].iter().any(|(y, _)| y == x) {
            return Err(Error::Domain(format!(
                "interpolation abscissa {x} appears more than once"
            )));
        }
    }
    let mut acc = RationalPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        // Basis polynomial prod_{j != i} (t - x_j) / (x_i - x_j).
        let mut basis = RationalPoly::one();
        let mut denom = Rational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&RationalPoly::from_ints(&[-xj, 1]));
            denom *= rational_int(xi - xj);
        }
        let scale = Rational::from_integer(yi.clone()) / denom;
        acc = acc.add(&basis.scalar_mul(&scale));
    }
    Ok(acc)
}

/// Sparse bivariate polynomial over the rationals in variables x and y.
/// Keys are exponent pairs (i, j) for x^i y^j; zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalBiPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl RationalBiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0, 0)
    }

    pub fn monomial(c: Rational, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(c, i, j);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, c: Rational, i: u32, j: u32) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(c.clone(), i, j);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term(c1 * c2, i1 + i2, j1 + j2);
            }
        }
        out
    }

    pub fn scalar_mul(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalBiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&k, v)| (k, v * c))
                .collect(),
        }
    }

    /// Full evaluation at (x, y).
    pub fn evaluate(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * num::pow(x.clone(), i as usize) * num::pow(y.clone(), j as usize);
        }
        acc
    }

    /// Partial evaluation x := value, leaving a univariate polynomial in y.
    pub fn evaluate_x(&self, x: &Rational) -> RationalPoly {
        let mut acc = RationalPoly::zero();
        for (&(i, j), c) in &self.terms {
            let scaled = c * num::pow(x.clone(), i as usize);
            acc = acc.add(&RationalPoly::monomial(scaled, j as usize));
        }
        acc
    }

    /// Wire form: `{"vars":["x","y"],"terms":[{"i":..,"j":..,"c":"../.."}]}`
    /// with terms ascending in (i, j).
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| {
                serde_json::json!({ "i": i, "j": j, "c": rational_to_string(c) })
            })
            .collect();
        serde_json::json!({ "vars": ["x", "y"], "terms": terms })
    }
}

impl fmt::Display for RationalBiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest total degree first reads more naturally.
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(i, j)| (std::cmp::Reverse(i + j), std::cmp::Reverse(i)));
        let mut first = true;
        for (i, j) in keys {
            let c = &self.terms[&(i, j)];
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one() && (i, j) != (0, 0);
            if !unit_coeff {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "{}/{}", mag.numer(), mag.denom())?;
                }
            }
            let mut star = !unit_coeff;
            for (var, e) in [("x", i), ("y", j)] {
                if e == 0 {
                    continue;
                }
                if star {
                    write!(f, "*")?;
                }
                star = true;
                if e == 1 {
                    write!(f, "{var}")?;
                } else {
                    write!(f, "{var}^{e}")?;
                }
            }
        }
        Ok(())
    }
}
