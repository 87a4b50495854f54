//! Exact rational functions over F_{p^k} in u = t^(1/M).
//!
//! Numerators are sparse Laurent polynomials in u; denominators are sparse
//! polynomials with constant term 1, so the t-adic valuation and leading
//! coefficient are read directly off the lowest numerator term. Exponents
//! are `i128` because expansions refine M by a factor of p at every step.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::ffield::{Embedding, FieldRef, FqPoly, FF};
use crate::hahn::{format_t_power, Exponent, HahnSeries, Precision, Valuation};

/// Above this exponent span, fractions are left unreduced.
const GCD_SPAN_LIMIT: i128 = 1024;

fn ff_is_zero(c: &FF) -> bool {
    c.coords().iter().all(|&x| x == 0)
}

/// Sparse Laurent polynomial: terms sorted by exponent, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LPoly {
    terms: Vec<(i128, FF)>,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly { terms: Vec::new() }
    }

    pub fn monomial(c: FF, e: i128) -> Self {
        Self::from_sorted(vec![(e, c)])
    }

    /// From terms already sorted by strictly increasing exponent.
    pub fn from_sorted(mut terms: Vec<(i128, FF)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        terms.retain(|(_, c)| !ff_is_zero(c));
        LPoly { terms }
    }

    /// From arbitrary terms; like powers are combined.
    pub fn from_terms(ctx: &FieldRef, mut terms: Vec<(i128, FF)>) -> Self {
        terms.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(i128, FF)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc = ctx.add(lc, &c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !ff_is_zero(c));
        LPoly { terms: out }
    }

    pub fn terms(&self) -> &[(i128, FF)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].0 == 0
            && self.terms[0].1.coords().first() == Some(&1)
            && self.terms[0].1.coords()[1..].iter().all(|&x| x == 0)
    }

    pub fn lowest(&self) -> Option<&(i128, FF)> {
        self.terms.first()
    }

    pub fn highest(&self) -> Option<&(i128, FF)> {
        self.terms.last()
    }

    pub fn coeff(&self, e: i128) -> Option<&FF> {
        self.terms.binary_search_by_key(&e, |t| t.0).ok().map(|i| &self.terms[i].1)
    }

    fn merge(&self, other: &Self, ctx: &FieldRef, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                let c = if negate { ctx.neg(&b[j].1) } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate { ctx.sub(&a[i].1, &b[j].1) } else { ctx.add(&a[i].1, &b[j].1) };
                if !ctx.is_zero(&c) {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        LPoly { terms: out }
    }

    pub fn add(&self, other: &Self, ctx: &FieldRef) -> Self {
        self.merge(other, ctx, false)
    }

    pub fn sub(&self, other: &Self, ctx: &FieldRef) -> Self {
        self.merge(other, ctx, true)
    }

    pub fn neg(&self, ctx: &FieldRef) -> Self {
        LPoly { terms: self.terms.iter().map(|(e, c)| (*e, ctx.neg(c))).collect() }
    }

    pub fn scale(&self, c: &FF, ctx: &FieldRef) -> Self {
        if ctx.is_zero(c) {
            return Self::zero();
        }
        LPoly { terms: self.terms.iter().map(|(e, a)| (*e, ctx.mul(a, c))).collect() }
    }

    /// Multiply by `c u^e`.
    pub fn mul_monomial(&self, c: &FF, e: i128, ctx: &FieldRef) -> Self {
        if ctx.is_zero(c) {
            return Self::zero();
        }
        LPoly { terms: self.terms.iter().map(|(k, a)| (k + e, ctx.mul(a, c))).collect() }
    }

    /// Multiply by `u^e`.
    pub fn shift(&self, e: i128) -> Self {
        LPoly { terms: self.terms.iter().map(|(k, a)| (k + e, a.clone())).collect() }
    }

    /// Substitute `u ↦ u^k` for `k ≥ 1`.
    pub fn stretch(&self, k: i128) -> Self {
        assert!(k >= 1);
        LPoly { terms: self.terms.iter().map(|(e, a)| (e * k, a.clone())).collect() }
    }

    pub fn mul(&self, other: &Self, ctx: &FieldRef) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return other.mul_monomial(c, *e, ctx);
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            return self.mul_monomial(c, *e, ctx);
        }
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.push((e1 + e2, ctx.mul(c1, c2)));
            }
        }
        Self::from_terms(ctx, out)
    }

    pub fn map_coeffs(&self, f: impl Fn(&FF) -> FF) -> Self {
        Self::from_sorted(self.terms.iter().map(|(e, c)| (*e, f(c))).collect())
    }

    fn span(&self) -> i128 {
        match (self.terms.first(), self.terms.last()) {
            (Some(a), Some(b)) => b.0 - a.0,
            _ => 0,
        }
    }

    /// Dense form of `self / u^lowest`.
    fn to_dense(&self, ctx: &FieldRef) -> FqPoly {
        let Some(&(lo, _)) = self.lowest() else { return FqPoly::zero() };
        let mut v = vec![ctx.zero(); (self.span() + 1) as usize];
        for (e, c) in &self.terms {
            v[(e - lo) as usize] = c.clone();
        }
        FqPoly::new(v)
    }

    fn from_dense(p: &FqPoly, shift: i128) -> Self {
        Self::from_sorted(
            p.coeffs().iter().enumerate().map(|(i, c)| (i as i128 + shift, c.clone())).collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatFunError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent denominator {from} does not divide {to}")]
    NotRefinement { from: i128, to: i128 },
    #[error("operands live over different fields")]
    FieldMismatch,
}

/// An element `num(u) / den(u)` of F_{p^k}(u), u = t^(1/M).
#[derive(Debug, Clone)]
pub struct RatFun {
    ctx: FieldRef,
    m: i128,
    num: LPoly,
    den: LPoly,
}

fn same_field(a: &FieldRef, b: &FieldRef) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl RatFun {
    pub fn zero(ctx: FieldRef) -> Self {
        let one = ctx.one();
        RatFun { ctx, m: 1, num: LPoly::zero(), den: LPoly::monomial(one, 0) }
    }

    pub fn one(ctx: FieldRef) -> Self {
        Self::constant(ctx.clone(), ctx.one())
    }

    pub fn constant(ctx: FieldRef, c: FF) -> Self {
        let one = ctx.one();
        RatFun { ctx, m: 1, num: LPoly::monomial(c, 0), den: LPoly::monomial(one, 0) }
    }

    pub fn from_int(ctx: FieldRef, n: i64) -> Self {
        let c = ctx.from_int(n);
        Self::constant(ctx, c)
    }

    /// `c t^e`.
    pub fn monomial(ctx: FieldRef, c: FF, e: &Exponent) -> Self {
        let m = e.denom_i128().expect("exponent denominator overflows i128");
        let ue = e.to_u_exponent(m).expect("exponent numerator overflows i128");
        let one = ctx.one();
        RatFun { ctx, m, num: LPoly::monomial(c, ue), den: LPoly::monomial(one, 0) }
    }

    pub fn t(ctx: FieldRef) -> Self {
        let one = ctx.one();
        Self::monomial(ctx, one, &Exponent::integer(1))
    }

    pub fn from_laurent(ctx: FieldRef, m: i128, num: LPoly) -> Self {
        let one = ctx.one();
        RatFun { ctx, m, num, den: LPoly::monomial(one, 0) }
    }

    /// `num / den` with both given as Laurent polynomials in u = t^(1/m).
    pub fn from_fraction(ctx: FieldRef, m: i128, num: LPoly, den: LPoly) -> Result<Self, RatFunError> {
        if den.is_zero() {
            return Err(RatFunError::DivisionByZero);
        }
        Ok(Self::normalized(ctx, m, num, den))
    }

    fn normalized(ctx: FieldRef, m: i128, num: LPoly, den: LPoly) -> Self {
        if num.is_zero() {
            let mut z = Self::zero(ctx);
            z.m = m;
            return z;
        }
        let (lo, c0) = den.lowest().cloned().expect("nonzero denominator");
        let inv = ctx.inv(&c0).expect("nonzero constant term");
        let mut num = num.mul_monomial(&inv, -lo, &ctx);
        let mut den = den.mul_monomial(&inv, -lo, &ctx);
        if den.len() > 1 && den.span() <= GCD_SPAN_LIMIT && num.span() <= GCD_SPAN_LIMIT {
            let shift = num.lowest().unwrap().0;
            let nd = num.to_dense(&ctx);
            let dd = den.to_dense(&ctx);
            let g = nd.gcd(&dd, &ctx);
            if g.degree().is_some_and(|d| d > 0) {
                let nq = nd.div_rem(&g, &ctx).0;
                let dq = dd.div_rem(&g, &ctx).0;
                let c = ctx.inv(&dq.coeffs()[0]).unwrap();
                num = LPoly::from_dense(&nq.scale(&c, &ctx), shift);
                den = LPoly::from_dense(&dq.scale(&c, &ctx), 0);
            }
        }
        RatFun { ctx, m, num, den }
    }

    pub fn ctx(&self) -> &FieldRef {
        &self.ctx
    }

    pub fn m(&self) -> i128 {
        self.m
    }

    pub fn num(&self) -> &LPoly {
        &self.num
    }

    pub fn den(&self) -> &LPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// `(v, c)` with `self − c t^v` of valuation > v; `None` for zero.
    pub fn leading_term(&self) -> Option<(Exponent, FF)> {
        self.num.lowest().map(|(e, c)| (Exponent::from_u_exponent(*e, self.m), c.clone()))
    }

    pub fn valuation(&self) -> Valuation {
        match self.leading_term() {
            Some((v, _)) => Valuation::Finite(v),
            None => Valuation::Infinite,
        }
    }

    /// Re-express over u' = t^(1/m_new), a refinement of the current u.
    pub fn rebase(&self, m_new: i128) -> Result<RatFun, RatFunError> {
        if m_new <= 0 || m_new % self.m != 0 {
            return Err(RatFunError::NotRefinement { from: self.m, to: m_new });
        }
        let k = m_new / self.m;
        Ok(RatFun { ctx: self.ctx.clone(), m: m_new, num: self.num.stretch(k), den: self.den.stretch(k) })
    }

    fn aligned(&self, other: &RatFun) -> (RatFun, RatFun) {
        assert!(same_field(&self.ctx, &other.ctx), "{}", RatFunError::FieldMismatch);
        if self.m == other.m {
            return (self.clone(), other.clone());
        }
        let m = self.m.lcm(&other.m);
        (self.rebase(m).unwrap(), other.rebase(m).unwrap())
    }

    fn with_aligned<T>(&self, other: &RatFun, f: impl FnOnce(&RatFun, &RatFun) -> T) -> T {
        if self.m == other.m {
            assert!(same_field(&self.ctx, &other.ctx), "{}", RatFunError::FieldMismatch);
            f(self, other)
        } else {
            let (a, b) = self.aligned(other);
            f(&a, &b)
        }
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        self.with_aligned(other, |a, b| {
            let ctx = &a.ctx;
            if a.den == b.den {
                let num = a.num.add(&b.num, ctx);
                if a.den.is_one() {
                    return RatFun { ctx: ctx.clone(), m: a.m, num, den: a.den.clone() };
                }
                return Self::normalized(ctx.clone(), a.m, num, a.den.clone());
            }
            let num = a.num.mul(&b.den, ctx).add(&b.num.mul(&a.den, ctx), ctx);
            Self::normalized(ctx.clone(), a.m, num, a.den.mul(&b.den, ctx))
        })
    }

    pub fn neg(&self) -> RatFun {
        RatFun { ctx: self.ctx.clone(), m: self.m, num: self.num.neg(&self.ctx), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        self.with_aligned(other, |a, b| {
            let ctx = &a.ctx;
            let num = a.num.mul(&b.num, ctx);
            if a.den.is_one() && b.den.is_one() {
                let mut r = Self::from_laurent(ctx.clone(), a.m, num);
                if r.num.is_zero() {
                    r = Self::zero(ctx.clone());
                    r.m = a.m;
                }
                return r;
            }
            Self::normalized(ctx.clone(), a.m, num, a.den.mul(&b.den, ctx))
        })
    }

    pub fn scale(&self, c: &FF) -> RatFun {
        RatFun { ctx: self.ctx.clone(), m: self.m, num: self.num.scale(c, &self.ctx), den: self.den.clone() }
    }

    /// Multiply by `c t^e`.
    pub fn mul_monomial(&self, c: &FF, e: &Exponent) -> RatFun {
        let mm = e.denom_i128().expect("exponent denominator overflows i128").lcm(&self.m);
        let a = self.rebase(mm).unwrap();
        let ue = e.to_u_exponent(mm).unwrap();
        RatFun { num: a.num.mul_monomial(c, ue, &a.ctx), ..a }
    }

    pub fn inv(&self) -> Result<RatFun, RatFunError> {
        if self.is_zero() {
            return Err(RatFunError::DivisionByZero);
        }
        Ok(Self::normalized(self.ctx.clone(), self.m, self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun, RatFunError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> RatFun {
        let mut acc = Self::one(self.ctx.clone());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn embed(&self, emb: &Embedding) -> RatFun {
        RatFun {
            ctx: emb.target().clone(),
            m: self.m,
            num: self.num.map_coeffs(|c| emb.apply(c)),
            den: self.den.map_coeffs(|c| emb.apply(c)),
        }
    }

    /// The Laurent expansion's terms with exponent below `bound`.
    pub fn laurent(&self, bound: &Exponent) -> HahnSeries {
        let ctx = &self.ctx;
        let limit = |e: i128| Exponent::from_u_exponent(e, self.m) < *bound;
        let mut terms = Vec::new();
        if self.den.is_one() {
            for (e, c) in self.num.terms() {
                if limit(*e) {
                    terms.push((Exponent::from_u_exponent(*e, self.m), c.clone()));
                }
            }
            let exact = self.num.highest().map_or(true, |(e, _)| limit(*e));
            let precision = if exact { Precision::Exact } else { Precision::KnownBelow(bound.clone()) };
            return HahnSeries::new(ctx.clone(), terms, precision).expect("sorted nonzero terms");
        }
        // long division by a denominator with constant term 1
        let mut rest: BTreeMap<i128, FF> = self.num.terms().iter().cloned().collect();
        while let Some((&e, c)) = rest.iter().next() {
            if !limit(e) {
                break;
            }
            let c = c.clone();
            rest.remove(&e);
            for (k, d) in self.den.terms().iter().skip(1) {
                let entry = rest.entry(e + k).or_insert_with(|| ctx.zero());
                *entry = ctx.sub(entry, &ctx.mul(&c, d));
                if ctx.is_zero(entry) {
                    rest.remove(&(e + k));
                }
            }
            terms.push((Exponent::from_u_exponent(e, self.m), c));
        }
        let precision = if rest.is_empty() { Precision::Exact } else { Precision::KnownBelow(bound.clone()) };
        HahnSeries::new(ctx.clone(), terms, precision).expect("sorted nonzero terms")
    }

    /// Text form split into a sign and a magnitude, e.g. `-1/t` as
    /// `(true, "1/t")`. Only single-term numerators over the prime field
    /// carry a sign.
    pub fn format_signed(&self) -> (bool, String) {
        if self.num.is_zero() {
            return (false, "0".to_string());
        }
        let lo = self.num.lowest().unwrap().0.min(0);
        let num = self.num.shift(-lo);
        let den = self.den.shift(-lo);
        let (neg, mut ns) = format_poly(&self.ctx, self.m, &num, num.len() == 1);
        if den.is_one() {
            return (neg, ns);
        }
        let multi = num.len() > 1 || (ns.contains('+') && ns != "1");
        if multi || ns.contains('/') {
            ns = format!("({ns})");
        }
        let ds = if den.len() == 1 && self.ctx.is_one(&den.terms()[0].1) {
            format_t_power(&Exponent::from_u_exponent(den.terms()[0].0, self.m))
        } else {
            format!("({})", format_poly(&self.ctx, self.m, &den, false).1)
        };
        (neg, format!("{ns}/{ds}"))
    }
}

/// Descending text form of a Laurent polynomial in t^(1/m). With
/// `extract_sign`, a leading prime-field coefficient above p/2 is reported
/// as a sign and printed as its magnitude.
fn format_poly(ctx: &FieldRef, m: i128, lp: &LPoly, extract_sign: bool) -> (bool, String) {
    let mut out = String::new();
    let mut lead_neg = false;
    for (idx, (e, c)) in lp.terms().iter().rev().enumerate() {
        let exp = Exponent::from_u_exponent(*e, m);
        let (neg, mag) = if ctx.is_prime_field() { ctx.format_signed(c) } else { (false, ctx.format(c)) };
        let term = crate::hahn::format_term(&mag, &exp);
        if idx == 0 {
            if neg && extract_sign {
                lead_neg = true;
                out.push_str(&term);
            } else {
                if neg {
                    out.push('-');
                }
                out.push_str(&term);
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&term);
        }
    }
    (lead_neg, out)
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        if !same_field(&self.ctx, &other.ctx) {
            return false;
        }
        self.with_aligned(other, |a, b| {
            if a.den == b.den {
                return a.num == b.num;
            }
            a.num.mul(&b.den, &a.ctx) == b.num.mul(&a.den, &a.ctx)
        })
    }
}

impl Eq for RatFun {}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (neg, s) = self.format_signed();
        if neg {
            write!(f, "-{s}")
        } else {
            f.write_str(&s)
        }
    }
}
