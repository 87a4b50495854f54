//! Polynomials in X over F_{p^k}(t) with Hasse derivatives, and the
//! Newton-line data of f at a point.

use std::collections::BTreeSet;
use std::fmt;

use crate::ffield::{Embedding, FieldRef, FF};
use crate::hahn::{Exponent, HahnSeries, Valuation};
use crate::ratfun::{RatFun, RatFunError};

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        // small binomial by the multiplicative formula, mod p
        let mut num = 1u64;
        let mut den = 1u64;
        for j in 0..ki {
            num = num * ((ni - j) % p) % p;
            den = den * ((j + 1) % p) % p;
        }
        acc = acc * num % p * inv_mod_u64(den, p) % p;
        n /= p;
        k /= p;
    }
    acc
}

fn inv_mod_u64(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Univariate polynomial with coefficients in F_{p^k}(t), lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    ctx: FieldRef,
    coeffs: Vec<RatFun>,
}

impl Poly {
    pub fn new(ctx: FieldRef, mut coeffs: Vec<RatFun>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { ctx, coeffs }
    }

    pub fn zero(ctx: FieldRef) -> Self {
        Poly { ctx, coeffs: Vec::new() }
    }

    pub fn constant(c: RatFun) -> Self {
        Self::new(c.ctx().clone(), vec![c])
    }

    pub fn x(ctx: FieldRef) -> Self {
        Self::monomial(RatFun::one(ctx), 1)
    }

    /// `c X^d`.
    pub fn monomial(c: RatFun, d: usize) -> Self {
        let ctx = c.ctx().clone();
        let mut coeffs = vec![RatFun::zero(ctx.clone()); d];
        coeffs.push(c);
        Self::new(ctx, coeffs)
    }

    pub fn ctx(&self) -> &FieldRef {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFun {
        self.coeffs.get(i).cloned().unwrap_or_else(|| RatFun::zero(self.ctx.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&RatFun> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(self.ctx.clone(), (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(self.ctx.clone(), (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.ctx.clone(), self.coeffs.iter().map(RatFun::neg).collect())
    }

    pub fn scale(&self, c: &RatFun) -> Poly {
        Poly::new(self.ctx.clone(), self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.ctx.clone());
        }
        let mut out = vec![RatFun::zero(self.ctx.clone()); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Poly::new(self.ctx.clone(), out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(RatFun::one(self.ctx.clone()));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, m: &Poly) -> Result<(Poly, Poly), RatFunError> {
        let dm = m.degree().ok_or(RatFunError::DivisionByZero)?;
        let inv = m.lead().unwrap().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dm {
            return Ok((Poly::zero(self.ctx.clone()), self.clone()));
        }
        let mut q = vec![RatFun::zero(self.ctx.clone()); r.len() - dm];
        for shift in (0..r.len() - dm).rev() {
            if r[shift + dm].is_zero() {
                continue;
            }
            let c = r[shift + dm].mul(&inv);
            for (j, mj) in m.coeffs.iter().enumerate() {
                if !mj.is_zero() {
                    r[shift + j] = r[shift + j].sub(&c.mul(mj));
                }
            }
            q[shift] = c;
        }
        r.truncate(dm);
        Ok((Poly::new(self.ctx.clone(), q), Poly::new(self.ctx.clone(), r)))
    }

    pub fn rem(&self, m: &Poly) -> Result<Poly, RatFunError> {
        Ok(self.div_rem(m)?.1)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    /// The k-th Hasse derivative Σ C(i, k) a_i X^(i−k).
    pub fn hasse_derivative(&self, k: usize) -> Poly {
        let p = self.ctx.characteristic() as u64;
        let coeffs = (k..self.coeffs.len())
            .map(|i| {
                let b = binomial_mod(i as u64, k as u64, p);
                if b == 0 {
                    RatFun::zero(self.ctx.clone())
                } else {
                    self.coeffs[i].scale(&self.ctx.from_int(b as i64))
                }
            })
            .collect();
        Poly::new(self.ctx.clone(), coeffs)
    }

    /// Exact value at `x` by Horner's rule.
    pub fn evaluate(&self, x: &RatFun) -> RatFun {
        let mut acc = RatFun::zero(self.ctx.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Exact value at a finite series.
    pub fn evaluate_series(&self, w: &HahnSeries) -> RatFun {
        self.evaluate(&w.to_ratfun(1))
    }

    /// `[D^(0)f(λ), …, D^(n)f(λ)]`.
    pub fn taylor_coeffs(&self, lambda: &RatFun) -> Vec<RatFun> {
        (0..self.coeffs.len()).map(|k| self.hasse_derivative(k).evaluate(lambda)).collect()
    }

    pub fn embed(&self, emb: &Embedding) -> Poly {
        Poly::new(emb.target().clone(), self.coeffs.iter().map(|c| c.embed(emb)).collect())
    }

    /// Degrees with a nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect()
    }
}

/// Whether `s` has a `+` or binary `-` outside parentheses.
fn has_top_level_sum(s: &str) -> bool {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => return true,
            '-' if depth == 0 && i > 0 => return true,
            _ => {}
        }
    }
    false
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = c.format_signed();
            let xpow = match d {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{d}"),
            };
            let term = if xpow.is_empty() {
                mag
            } else if mag == "1" {
                xpow
            } else if has_top_level_sum(&mag) {
                format!("({mag})*{xpow}")
            } else {
                format!("{mag}*{xpow}")
            };
            match (first, neg) {
                (true, true) => write!(f, "-{term}")?,
                (true, false) => f.write_str(&term)?,
                (false, true) => write!(f, " - {term}")?,
                (false, false) => write!(f, " + {term}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// γ_i(r) = ρ + i·r together with the initial coefficient b of D^(i)f(w).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonLine {
    pub i: usize,
    pub rho: Exponent,
    pub b: FF,
}

impl NewtonLine {
    pub fn gamma(&self, r: &Valuation) -> Valuation {
        match r {
            Valuation::Finite(r) => Valuation::Finite(&self.rho + &r.mul_int(self.i as i64)),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

/// One line per index i ≥ 1 whose value is nonzero, from the list
/// `[D^(0)f(w), D^(1)f(w), …]`.
pub fn lines_from_values(values: &[RatFun]) -> Vec<NewtonLine> {
    values
        .iter()
        .enumerate()
        .skip(1)
        .filter_map(|(i, c)| c.leading_term().map(|(rho, b)| NewtonLine { i, rho, b }))
        .collect()
}

pub fn newton_data(f: &Poly, w: &RatFun) -> Vec<NewtonLine> {
    lines_from_values(&f.taylor_coeffs(w))
}

/// The minimum of the lines at r and the indices attaining it.
pub fn gamma_j(lines: &[NewtonLine], r: &Valuation) -> (Valuation, BTreeSet<usize>) {
    assert!(!lines.is_empty(), "no Newton lines");
    let values: Vec<Valuation> = lines.iter().map(|l| l.gamma(r)).collect();
    let min = values.iter().min().unwrap().clone();
    let j = lines.iter().zip(&values).filter(|(_, v)| **v == min).map(|(l, _)| l.i).collect();
    (min, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldCtx;

    fn example(ctx: &FieldRef) -> Poly {
        // X^3 - X^2 - 1/t
        let one = RatFun::one(ctx.clone());
        let inv_t = RatFun::t(ctx.clone()).inv().unwrap();
        Poly::new(ctx.clone(), vec![inv_t.neg(), RatFun::zero(ctx.clone()), one.neg(), one])
    }

    fn t_pow(ctx: &FieldRef, n: i64, d: i64) -> RatFun {
        RatFun::monomial(ctx.clone(), ctx.one(), &Exponent::new(n, d))
    }

    fn oracle_binomial(n: u64, k: u64) -> u128 {
        (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
    }

    #[test]
    fn lucas_matches_direct_binomials() {
        for p in [2u64, 3, 5, 7] {
            for n in 0..40 {
                for k in 0..=n {
                    assert_eq!(binomial_mod(n, k, p) as u128, oracle_binomial(n, k) % p as u128, "C({n},{k}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn hasse_examples() {
        let f3 = FieldCtx::prime_field(3).unwrap();
        let f = example(&f3);
        assert_eq!(f.hasse_derivative(0), f);
        assert_eq!(f.hasse_derivative(2), Poly::constant(RatFun::from_int(f3.clone(), -1)));
        assert_eq!(f.hasse_derivative(3), Poly::constant(RatFun::one(f3.clone())));
        for p in [2u64, 3, 5] {
            let fp = FieldCtx::prime_field(p).unwrap();
            let xp = Poly::monomial(RatFun::one(fp.clone()), p as usize);
            assert!(xp.hasse_derivative(1).is_zero());
            assert_eq!(xp.hasse_derivative(p as usize), Poly::constant(RatFun::one(fp)));
        }
    }

    #[test]
    fn taylor_examples() {
        let f3 = FieldCtx::prime_field(3).unwrap();
        let x2 = Poly::monomial(RatFun::one(f3.clone()), 2);
        let one = RatFun::one(f3.clone());
        assert_eq!(x2.taylor_coeffs(&one), vec![one.clone(), RatFun::from_int(f3.clone(), 2), one.clone()]);

        let lambda = RatFun::t(f3.clone()).add(&one).inv().unwrap();
        let x3 = Poly::monomial(one.clone(), 3);
        let tc = x3.taylor_coeffs(&lambda);
        assert_eq!(tc, vec![lambda.pow(3), RatFun::zero(f3.clone()), RatFun::zero(f3.clone()), one]);
    }

    #[test]
    fn evaluation_examples() {
        let f3 = FieldCtx::prime_field(3).unwrap();
        let f = example(&f3);
        assert_eq!(f.evaluate(&t_pow(&f3, -1, 3)), t_pow(&f3, -2, 3).neg());
        assert_eq!(f.evaluate(&RatFun::zero(f3.clone())), f.coeff(0));

        for p in [2i64, 3, 5] {
            let fp = FieldCtx::prime_field(p as u64).unwrap();
            let one = RatFun::one(fp.clone());
            let inv_t = RatFun::t(fp.clone()).inv().unwrap();
            let mut coeffs = vec![RatFun::zero(fp.clone()); p as usize + 1];
            coeffs[0] = inv_t.neg();
            coeffs[1] = one.neg();
            coeffs[p as usize] = one;
            let f = Poly::new(fp.clone(), coeffs);
            let mut w = RatFun::zero(fp.clone());
            for n in 1..=6u32 {
                let d = p.pow(n);
                w = w.add(&t_pow(&fp, -1, d));
                assert_eq!(f.evaluate(&w), t_pow(&fp, -1, d).neg());
            }
        }
    }

    #[test]
    fn newton_data_examples() {
        let f3 = FieldCtx::prime_field(3).unwrap();
        let f = example(&f3);
        let lines = newton_data(&f, &t_pow(&f3, -1, 3));
        let expected = vec![
            NewtonLine { i: 1, rho: Exponent::new(-1, 3), b: f3.one() },
            NewtonLine { i: 2, rho: Exponent::zero(), b: f3.from_int(-1) },
            NewtonLine { i: 3, rho: Exponent::zero(), b: f3.one() },
        ];
        assert_eq!(lines, expected);

        let (g, j) = gamma_j(&lines, &Valuation::Finite(Exponent::new(-1, 6)));
        assert_eq!(g, Valuation::Finite(Exponent::new(-1, 2)));
        assert_eq!(j, BTreeSet::from([1, 3]));
        let (g, j) = gamma_j(&lines, &Valuation::Finite(Exponent::zero()));
        assert_eq!(g, Valuation::Finite(Exponent::new(-1, 3)));
        assert_eq!(j, BTreeSet::from([1]));
        let (g, j) = gamma_j(&lines, &Valuation::Infinite);
        assert_eq!(g, Valuation::Infinite);
        assert_eq!(j, BTreeSet::from([1, 2, 3]));

        // X^2 - t at 0: D^(1)f(0) = 0
        let g = Poly::new(f3.clone(), vec![RatFun::t(f3.clone()).neg(), RatFun::zero(f3.clone()), RatFun::one(f3.clone())]);
        let lines = newton_data(&g, &RatFun::zero(f3.clone()));
        assert_eq!(lines.iter().map(|l| l.i).collect::<Vec<_>>(), vec![2]);

        // single line: J is that index everywhere
        let single = &lines[..1];
        for r in [-3i64, 0, 7] {
            assert_eq!(gamma_j(single, &Valuation::Finite(Exponent::integer(r))).1, BTreeSet::from([2]));
        }
    }

    #[test]
    fn display_and_division() {
        let f3 = FieldCtx::prime_field(3).unwrap();
        let f = example(&f3);
        assert_eq!(f.to_string(), "X^3 - X^2 - 1/t");
        let x = Poly::x(f3.clone());
        let g = x.sub(&Poly::constant(RatFun::t(f3.clone())));
        let (q, r) = f.div_rem(&g).unwrap();
        assert_eq!(q.mul(&g).add(&r), f);
        assert_eq!(r.degree(), Some(0));
    }
}
