//! Taylor coefficients D^(i)f(w) kept as numerators over one shared
//! denominator, updated in place as w grows by a monomial.

use num_integer::Integer;

use crate::ffield::{Embedding, FieldRef, FqPoly, FF};
use crate::hahn::Exponent;
use crate::hasse::{binomial_mod, Poly};
use crate::ratfun::{LPoly, RatFun};

/// Dense exact-lcm cut-off for denominators; larger ones are multiplied out.
const DENSE_LIMIT: i128 = 4096;

#[derive(Debug, Clone)]
pub struct TaylorState {
    ctx: FieldRef,
    m: i128,
    den: LPoly,
    nums: Vec<LPoly>,
}

fn dense(ctx: &FieldRef, a: &LPoly) -> FqPoly {
    let top = a.highest().map_or(0, |t| t.0);
    let mut v = vec![ctx.zero(); top as usize + 1];
    for (e, c) in a.terms() {
        v[*e as usize] = c.clone();
    }
    FqPoly::new(v)
}

fn sparse(p: &FqPoly) -> LPoly {
    LPoly::from_sorted(p.coeffs().iter().enumerate().map(|(i, c)| (i as i128, c.clone())).collect())
}

fn small(a: &LPoly) -> bool {
    a.highest().map_or(true, |t| t.0 <= DENSE_LIMIT)
}

impl TaylorState {
    /// The coefficients of `f` itself, i.e. the state at w = 0.
    pub fn at_zero(f: &Poly) -> Self {
        Self::from_values(f.ctx().clone(), f.coeffs().to_vec())
    }

    pub fn at(f: &Poly, w: &RatFun) -> Self {
        Self::from_values(f.ctx().clone(), f.taylor_coeffs(w))
    }

    pub fn from_values(ctx: FieldRef, values: Vec<RatFun>) -> Self {
        let m = values.iter().fold(1i128, |acc, v| acc.lcm(&v.m()));
        let values: Vec<RatFun> = values.iter().map(|v| v.rebase(m).unwrap()).collect();
        let one = LPoly::monomial(ctx.one(), 0);
        let mut den = one.clone();
        let mut all_small = true;
        for v in &values {
            if v.is_zero() || v.den() == &den || v.den().is_one() {
                continue;
            }
            if small(&den) && small(v.den()) {
                let a = dense(&ctx, &den);
                let b = dense(&ctx, v.den());
                let g = a.gcd(&b, &ctx);
                let l = a.div_rem(&g, &ctx).0.mul(&b, &ctx);
                den = sparse(&l.scale(&ctx.inv(&l.coeffs()[0]).unwrap(), &ctx));
            } else {
                all_small = false;
                den = den.mul(v.den(), &ctx);
            }
        }
        let nums = values
            .iter()
            .map(|v| {
                if v.is_zero() {
                    return LPoly::zero();
                }
                if v.den() == &den {
                    return v.num().clone();
                }
                let cofactor = if all_small {
                    let (q, r) = dense(&ctx, &den).div_rem(&dense(&ctx, v.den()), &ctx);
                    debug_assert!(r.is_zero());
                    sparse(&q)
                } else {
                    exact_div(&den, v.den(), &ctx).expect("denominator divides the common one")
                };
                v.num().mul(&cofactor, &ctx)
            })
            .collect();
        TaylorState { ctx, m, den, nums }
    }

    pub fn ctx(&self) -> &FieldRef {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.nums.len()
    }

    /// Valuation and initial coefficient of D^(i)f(w).
    pub fn leading(&self, i: usize) -> Option<(Exponent, FF)> {
        self.nums[i].lowest().map(|(e, c)| (Exponent::from_u_exponent(*e, self.m), c.clone()))
    }

    pub fn value(&self, i: usize) -> RatFun {
        RatFun::from_fraction(self.ctx.clone(), self.m, self.nums[i].clone(), self.den.clone()).unwrap()
    }

    pub fn is_zero(&self, i: usize) -> bool {
        self.nums[i].is_zero()
    }

    /// Index of the first nonzero coefficient: the multiplicity of w as a root.
    pub fn order(&self) -> usize {
        self.nums.iter().position(|n| !n.is_zero()).unwrap_or(self.nums.len())
    }

    /// The state at w + ζ t^r.
    pub fn shift(&self, zeta: &FF, r: &Exponent) -> TaylorState {
        let ctx = &self.ctx;
        let m = self.m.lcm(&r.denom_i128().expect("exponent denominator overflows i128"));
        let k = m / self.m;
        let nums: Vec<LPoly> = self.nums.iter().map(|n| n.stretch(k)).collect();
        let den = self.den.stretch(k);
        let e = r.to_u_exponent(m).unwrap();
        let p = ctx.characteristic() as u64;
        let n = nums.len();
        let zeta_pow: Vec<FF> = (0..n).map(|j| ctx.pow(zeta, j as u64)).collect();
        let shifted = (0..n)
            .map(|i| {
                let mut acc = nums[i].clone();
                for kk in i + 1..n {
                    let b = binomial_mod(kk as u64, i as u64, p);
                    if b == 0 || nums[kk].is_zero() {
                        continue;
                    }
                    let c = ctx.scale_int(&zeta_pow[kk - i], b);
                    acc = acc.add(&nums[kk].mul_monomial(&c, e * (kk - i) as i128, ctx), ctx);
                }
                acc
            })
            .collect();
        TaylorState { ctx: ctx.clone(), m, den, nums: shifted }
    }

    pub fn embed(&self, emb: &Embedding) -> TaylorState {
        TaylorState {
            ctx: emb.target().clone(),
            m: self.m,
            den: self.den.map_coeffs(|c| emb.apply(c)),
            nums: self.nums.iter().map(|n| n.map_coeffs(|c| emb.apply(c))).collect(),
        }
    }
}

/// `a / b` for polynomials with `b(0) = 1`, if the division is exact.
fn exact_div(a: &LPoly, b: &LPoly, ctx: &FieldRef) -> Option<LPoly> {
    let top = a.highest()?.0 - b.highest()?.0;
    let mut rest = a.clone();
    let mut q = Vec::new();
    while let Some((e, c)) = rest.lowest().cloned() {
        if e > top {
            return None;
        }
        rest = rest.sub(&b.mul_monomial(&c, e, ctx), ctx);
        q.push((e, c));
    }
    Some(LPoly::from_sorted(q))
}
