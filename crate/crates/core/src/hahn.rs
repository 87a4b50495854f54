//! Truncated generalized power series over F_{p^k} with rational exponents.
//! Also holds the predicates on supports (a prime ramifying at an exponent)
//! and on coefficients (a new coefficient enlarging the residue field).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::ffield::{Embedding, FieldRef, FF};
use crate::ratfun::{LPoly, RatFun};

/// A rational exponent, always in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(BigRational);

impl Exponent {
    pub fn new(numer: i64, denom: i64) -> Self {
        Exponent(BigRational::new(numer.into(), denom.into()))
    }

    pub fn integer(n: i64) -> Self {
        Exponent(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn from_ratio(r: BigRational) -> Self {
        Exponent(r)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// q-adic valuation of the rational; `None` for zero.
    pub fn q_adic_valuation(&self, q: u64) -> Option<i64> {
        if self.0.is_zero() {
            return None;
        }
        let count = |n: &BigInt| {
            let q = BigInt::from(q);
            let mut n = n.abs();
            let mut c = 0i64;
            while (&n % &q).is_zero() {
                n /= &q;
                c += 1;
            }
            c
        };
        Some(count(self.numer()) - count(self.denom()))
    }

    /// Split the denominator as `m · p^e` with `m` prime to `p`.
    pub fn denominator_parts(&self, p: u64) -> (u32, BigUint) {
        let mut m = self.denom().magnitude().clone();
        let pb = BigUint::from(p);
        let mut e = 0;
        while (&m % &pb).is_zero() {
            m /= &pb;
            e += 1;
        }
        (e, m)
    }

    /// The exponent of `u = t^(1/m)` representing this exponent, if the
    /// denominator divides `m`.
    pub fn to_u_exponent(&self, m: i128) -> Option<i128> {
        let d = self.denom().to_i128()?;
        if m % d != 0 {
            return None;
        }
        self.numer().to_i128()?.checked_mul(m / d)
    }

    pub fn from_u_exponent(e: i128, m: i128) -> Self {
        Exponent(BigRational::new(BigInt::from(e), BigInt::from(m)))
    }

    /// Denominator as an `i128`, if it fits.
    pub fn denom_i128(&self) -> Option<i128> {
        self.denom().to_i128()
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid exponent {0:?}")]
pub struct ParseExponentError(String);

impl FromStr for Exponent {
    type Err = ParseExponentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseExponentError(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            None => Ok(Exponent(BigRational::from_integer(t.parse().map_err(|_| err())?))),
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| err())?;
                let d: BigInt = d.trim().parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Exponent(BigRational::new(n, d)))
            }
        }
    }
}

macro_rules! exponent_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Exponent> for &Exponent {
            type Output = Exponent;
            fn $method(self, rhs: &Exponent) -> Exponent {
                Exponent((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Exponent {
            type Output = Exponent;
            fn $method(self, rhs: Exponent) -> Exponent {
                Exponent(self.0.$method(rhs.0))
            }
        }
    };
}

exponent_binop!(Add, add);
exponent_binop!(Sub, sub);
exponent_binop!(Mul, mul);

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-self.0)
    }
}

impl Exponent {
    pub fn mul_int(&self, n: i64) -> Exponent {
        Exponent(&self.0 * BigRational::from_integer(n.into()))
    }

    pub fn div_int(&self, n: i64) -> Exponent {
        Exponent(&self.0 / BigRational::from_integer(n.into()))
    }

    pub fn div(&self, other: &Exponent) -> Exponent {
        Exponent(&self.0 / &other.0)
    }
}

/// A valuation or evaluation point: a rational, or +∞ (the valuation of 0).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(Exponent),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Exponent> {
        match self {
            Valuation::Finite(e) => Some(e),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl From<Exponent> for Valuation {
    fn from(e: Exponent) -> Self {
        Valuation::Finite(e)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(e) => e.fmt(f),
            Valuation::Infinite => f.write_str("infinity"),
        }
    }
}

/// How much of the underlying element a finite term list describes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Precision {
    /// The terms are the whole element.
    Exact,
    /// The terms are every term of the element below the exponent.
    KnownBelow(Exponent),
    /// The terms are every term of the element up to and including the exponent.
    KnownThrough(Exponent),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("exponents must be strictly increasing")]
    NotIncreasing,
    #[error("zero coefficient stored at exponent {0}")]
    ZeroCoefficient(Exponent),
    #[error("term at exponent {0} lies outside the known precision")]
    BeyondPrecision(Exponent),
}

/// A finite generalized power series Σ c_γ t^γ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HahnSeries {
    ctx: FieldRef,
    terms: Vec<(Exponent, FF)>,
    precision: Precision,
}

impl HahnSeries {
    pub fn new(ctx: FieldRef, terms: Vec<(Exponent, FF)>, precision: Precision) -> Result<Self, SeriesError> {
        for w in terms.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(SeriesError::NotIncreasing);
            }
        }
        for (e, c) in &terms {
            if ctx.is_zero(c) {
                return Err(SeriesError::ZeroCoefficient(e.clone()));
            }
            let outside = match &precision {
                Precision::Exact => false,
                Precision::KnownBelow(r) => e >= r,
                Precision::KnownThrough(r) => e > r,
            };
            if outside {
                return Err(SeriesError::BeyondPrecision(e.clone()));
            }
        }
        Ok(HahnSeries { ctx, terms, precision })
    }

    /// Exact series from unsorted terms; like terms are combined.
    pub fn from_terms(ctx: FieldRef, mut terms: Vec<(Exponent, FF)>) -> Self {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Exponent, FF)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc = ctx.add(lc, &c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !ctx.is_zero(c));
        HahnSeries { ctx, terms: out, precision: Precision::Exact }
    }

    pub fn zero(ctx: FieldRef) -> Self {
        HahnSeries { ctx, terms: Vec::new(), precision: Precision::Exact }
    }

    pub fn monomial(ctx: FieldRef, c: FF, e: Exponent) -> Self {
        Self::from_terms(ctx, vec![(e, c)])
    }

    pub fn ctx(&self) -> &FieldRef {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Exponent, FF)] {
        &self.terms
    }

    pub fn precision(&self) -> &Precision {
        &self.precision
    }

    pub fn with_precision(mut self, precision: Precision) -> Result<Self, SeriesError> {
        let terms = std::mem::take(&mut self.terms);
        self.precision = precision;
        HahnSeries::new(self.ctx, terms, self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.iter().map(|(e, _)| e.clone()).collect()
    }

    pub fn coefficients(&self) -> Vec<FF> {
        self.terms.iter().map(|(_, c)| c.clone()).collect()
    }

    pub fn valuation(&self) -> Valuation {
        self.terms.first().map_or(Valuation::Infinite, |(e, _)| Valuation::Finite(e.clone()))
    }

    /// `x_{<r}` (strict) or `x_{≤r}` (inclusive).
    pub fn truncate(&self, r: &Exponent, inclusive: bool) -> HahnSeries {
        let terms: Vec<(Exponent, FF)> = self
            .terms
            .iter()
            .filter(|(e, _)| if inclusive { e <= r } else { e < r })
            .cloned()
            .collect();
        let cut = if inclusive { Precision::KnownThrough(r.clone()) } else { Precision::KnownBelow(r.clone()) };
        // keep whichever marker is tighter
        let precision = match (&self.precision, cut) {
            (Precision::Exact, cut) => cut,
            (Precision::KnownBelow(s), Precision::KnownBelow(r)) => Precision::KnownBelow(s.clone().min(r)),
            (Precision::KnownThrough(s), Precision::KnownThrough(r)) => Precision::KnownThrough(s.clone().min(r)),
            (Precision::KnownBelow(s), Precision::KnownThrough(r)) => {
                if *s <= r { Precision::KnownBelow(s.clone()) } else { Precision::KnownThrough(r) }
            }
            (Precision::KnownThrough(s), Precision::KnownBelow(r)) => {
                if r <= *s { Precision::KnownBelow(r) } else { Precision::KnownThrough(s.clone()) }
            }
            (_, Precision::Exact) => unreachable!(),
        };
        HahnSeries { ctx: self.ctx.clone(), terms, precision }
    }

    pub fn neg(&self) -> HahnSeries {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), self.ctx.neg(c))).collect();
        HahnSeries { ctx: self.ctx.clone(), terms, precision: self.precision.clone() }
    }

    /// Sum of two exact series.
    pub fn add(&self, other: &HahnSeries) -> HahnSeries {
        assert_eq!(self.ctx, other.ctx, "series over different fields");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(self.ctx.clone(), terms)
    }

    /// Product of two exact series.
    pub fn mul(&self, other: &HahnSeries) -> HahnSeries {
        assert_eq!(self.ctx, other.ctx, "series over different fields");
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                terms.push((e1 + e2, self.ctx.mul(c1, c2)));
            }
        }
        Self::from_terms(self.ctx.clone(), terms)
    }

    /// Append `c t^e` after every existing term.
    pub fn push_term(&mut self, e: Exponent, c: FF) {
        assert!(self.terms.last().map_or(true, |(le, _)| *le < e), "terms must be appended in order");
        if !self.ctx.is_zero(&c) {
            self.terms.push((e, c));
        }
    }

    /// Least common multiple of the exponent denominators (1 for no terms).
    pub fn denominator_lcm(&self) -> i128 {
        self.terms.iter().fold(1i128, |acc, (e, _)| {
            acc.lcm(&e.denom_i128().expect("exponent denominator overflows i128"))
        })
    }

    /// The element as an exact rational function in u = t^(1/M) with M a
    /// multiple of `min_m` and of every exponent denominator.
    pub fn to_ratfun(&self, min_m: i128) -> RatFun {
        let m = self.denominator_lcm().lcm(&min_m);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.to_u_exponent(m).expect("exponent fits the chosen M"), c.clone()))
            .collect();
        RatFun::from_laurent(self.ctx.clone(), m, LPoly::from_sorted(terms))
    }

    pub fn embed(&self, emb: &Embedding) -> HahnSeries {
        let ctx = emb.target().clone();
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), emb.apply(c))).collect();
        HahnSeries { ctx, terms, precision: self.precision.clone() }
    }

    /// JSON form: `{"p":3,"field":"F_3","terms":[{"exp":"-1/3","coeff":"1"}],"precision":"exact"}`.
    pub fn to_json(&self) -> Value {
        let precision = match &self.precision {
            Precision::Exact => json!("exact"),
            Precision::KnownBelow(r) => json!({ "known_below": r.to_string() }),
            Precision::KnownThrough(r) => json!({ "known_through": r.to_string() }),
        };
        json!({
            "p": self.ctx.characteristic(),
            "field": self.ctx.header(),
            "terms": self.terms_json(),
            "precision": precision,
        })
    }

    pub fn terms_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| json!({ "exp": e.to_string(), "coeff": self.ctx.format(c) }))
                .collect(),
        )
    }
}

/// `t`, `t^2`, `t^(1/2)`, `t^(-1)`; empty for exponent 0.
pub(crate) fn format_t_power(e: &Exponent) -> String {
    if e.is_zero() {
        String::new()
    } else if e.is_integer() && e.numer().is_one() {
        "t".to_string()
    } else if e.is_integer() && e.numer().is_positive() {
        format!("t^{e}")
    } else {
        format!("t^({e})")
    }
}

pub(crate) fn format_term(coeff: &str, e: &Exponent) -> String {
    let tp = format_t_power(e);
    let needs_parens = coeff.contains('+');
    match (coeff, tp.is_empty()) {
        (c, true) => c.to_string(),
        ("1", false) => tp,
        (c, false) if needs_parens => format!("({c})*{tp}"),
        (c, false) => format!("{c}*{tp}"),
    }
}

impl fmt::Display for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(e, c)| format_term(&self.ctx.format(c), e)).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// True iff `y = x_{<λ}` for some λ and `y ≠ x`.
pub fn is_approximation(y: &HahnSeries, x: &HahnSeries) -> bool {
    y.terms.len() < x.terms.len() && x.terms[..y.terms.len()] == y.terms[..]
}

/// Whether the prime `q` ramifies at `r` given the support below it: the
/// q-power in the denominator of `r` is some K ≥ 1 and no earlier support
/// element carries q^K or more in its denominator.
pub fn ramifies_at(support: &[Exponent], r: &Exponent, q: u64) -> bool {
    let Some(vr) = r.q_adic_valuation(q) else { return false };
    let k = -vr;
    if k < 1 {
        return false;
    }
    support
        .iter()
        .filter(|s| *s < r)
        .all(|s| s.q_adic_valuation(q).map_or(true, |vs| -vs < k))
}

/// Whether `zeta` lies outside the smallest field containing the prefix
/// coefficients (F_p for an empty prefix).
pub fn expands_at(ctx: &FieldRef, prefix_coeffs: &[FF], zeta: &FF) -> bool {
    let d = prefix_coeffs.iter().fold(1usize, |acc, c| acc.lcm(&ctx.element_degree(c)));
    d % ctx.element_degree(zeta) != 0
}
