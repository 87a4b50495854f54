//! Lower envelope of the lines r ↦ v(a_i) + p^i·r of an additive
//! polynomial and its points of intersection. The bounds on the roots of f
//! are read off these points.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::hahn::{Exponent, Valuation};
use crate::hasse::Poly;
use crate::ore::{addpol, AdditivePolynomial, OreError};

/// A point where at least two lines attain the envelope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Breakpoint {
    pub r: Valuation,
    pub j: BTreeSet<usize>,
}

impl Breakpoint {
    pub fn is_finite(&self) -> bool {
        !self.r.is_infinite()
    }
}

#[derive(Debug, Clone)]
struct Line {
    i: usize,
    intercept: BigRational,
    slope: BigRational,
}

impl Line {
    fn at(&self, r: &BigRational) -> BigRational {
        &self.intercept + &self.slope * r
    }

    fn meet(&self, other: &Line) -> BigRational {
        (&other.intercept - &self.intercept) / (&self.slope - &other.slope)
    }
}

fn lines_of(p: &AdditivePolynomial) -> Vec<Line> {
    let q = BigInt::from(p.p());
    p.coeffs()
        .iter()
        .map(|(&i, a)| {
            let (v, _) = a.leading_term().expect("nonzero coefficient");
            Line { i, intercept: v.as_ratio().clone(), slope: BigRational::from_integer(q.pow(i as u32)) }
        })
        .collect()
}

fn argmin(lines: &[Line], r: &BigRational) -> BTreeSet<usize> {
    let values: Vec<BigRational> = lines.iter().map(|l| l.at(r)).collect();
    let min = values.iter().min().unwrap();
    lines.iter().zip(&values).filter(|(_, v)| *v == min).map(|(l, _)| l.i).collect()
}

/// Finite points sorted ascending, then ∞ when at least two lines exist.
pub fn intersection_points(p: &AdditivePolynomial) -> Vec<Breakpoint> {
    let mut lines = lines_of(p);
    // steepest first: the steepest line is lowest as r → −∞
    lines.sort_by(|a, b| b.slope.cmp(&a.slope));
    let mut hull: Vec<&Line> = Vec::new();
    for l in &lines {
        while hull.len() >= 2 {
            let top = hull[hull.len() - 1];
            let below = hull[hull.len() - 2];
            // top is nowhere strictly below both neighbours
            if l.meet(top) <= below.meet(top) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(l);
    }
    let mut out: Vec<Breakpoint> = hull
        .windows(2)
        .map(|w| {
            let r = w[0].meet(w[1]);
            Breakpoint { j: argmin(&lines, &r), r: Valuation::Finite(Exponent::from_ratio(r)) }
        })
        .collect();
    out.dedup_by(|a, b| a.r == b.r);
    if lines.len() >= 2 {
        out.push(Breakpoint { r: Valuation::Infinite, j: p.support().into_iter().collect() });
    }
    out
}

/// Lcm of the parts prime to p of the denominators of the finite points.
pub fn maxram_of(p: &AdditivePolynomial) -> BigUint {
    let q = p.p() as u64;
    intersection_points(p)
        .iter()
        .filter_map(|b| b.r.finite().map(|r| r.denominator_parts(q).1))
        .fold(BigUint::one(), |acc, m| acc.lcm(&m))
}

pub fn maxram(f: &Poly) -> Result<BigUint, OreError> {
    Ok(maxram_of(&addpol(f)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxExpMode {
    /// D = Π_{i=1..n} p^i.
    Paper,
    /// D' = Π over finite points s of p^(max J(s)).
    Sharp,
}

/// The residue-field bound D!: `base` is D, the factorial is formed on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxExp {
    pub mode: MaxExpMode,
    pub base: BigUint,
}

/// Largest base whose factorial is written out in full.
pub const FACTORIAL_PRINT_LIMIT: u64 = 1000;

impl MaxExp {
    pub fn factorial(&self) -> Option<BigUint> {
        let n = self.base.to_u64().filter(|&n| n <= FACTORIAL_PRINT_LIMIT)?;
        Some((1..=n).fold(BigUint::one(), |acc, k| acc * k))
    }
}

impl fmt::Display for MaxExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.factorial() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}!", self.base),
        }
    }
}

pub fn maxexp_of(f_degree: usize, p: &AdditivePolynomial, mode: MaxExpMode) -> MaxExp {
    let q = BigUint::from(p.p());
    let base = match mode {
        MaxExpMode::Paper => (1..=f_degree).fold(BigUint::one(), |acc, i| acc * q.pow(i as u32)),
        MaxExpMode::Sharp => intersection_points(p)
            .iter()
            .filter(|b| b.is_finite())
            .fold(BigUint::one(), |acc, b| acc * q.pow(*b.j.iter().next_back().unwrap() as u32)),
    };
    MaxExp { mode, base }
}

pub fn maxexp(f: &Poly, mode: MaxExpMode) -> Result<MaxExp, OreError> {
    let n = f.degree().unwrap_or(0);
    Ok(maxexp_of(n, &addpol(f)?, mode))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderBound {
    /// Number of intersection points, counting ∞.
    pub m: usize,
    /// n'(n'+1)/2 + 1 for lines indexed 0..=n'.
    pub cap: usize,
}

impl OrderBound {
    pub fn label(&self) -> String {
        format!("ω^{}", self.m)
    }
}

pub fn order_type_bound_of(p: &AdditivePolynomial) -> OrderBound {
    let m = intersection_points(p).len();
    let n = p.top_index();
    let cap = n * (n + 1) / 2 + 1;
    assert!(m <= cap, "{m} intersection points exceed {cap}");
    OrderBound { m, cap }
}

pub fn order_type_bound(f: &Poly) -> Result<OrderBound, OreError> {
    Ok(order_type_bound_of(&addpol(f)?))
}
