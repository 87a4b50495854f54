use num_bigint::BigUint;

use super::{FieldCtx, FF};

/// Dense univariate polynomial over some F_{p^k}, lowest degree first,
/// without trailing zeros. The field context is passed to every operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FqPoly {
    coeffs: Vec<FF>,
}

impl FqPoly {
    pub fn new(mut coeffs: Vec<FF>) -> Self {
        while coeffs.last().is_some_and(|c| c.coords().iter().all(|&x| x == 0)) {
            coeffs.pop();
        }
        FqPoly { coeffs }
    }

    pub fn zero() -> Self {
        FqPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: FF) -> Self {
        Self::new(vec![c])
    }

    /// X - a
    pub fn linear(ctx: &FieldCtx, a: &FF) -> Self {
        Self::new(vec![ctx.neg(a), ctx.one()])
    }

    pub fn x(ctx: &FieldCtx) -> Self {
        Self::new(vec![ctx.zero(), ctx.one()])
    }

    pub fn coeffs(&self) -> &[FF] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&FF> {
        self.coeffs.last()
    }

    pub fn coeff(&self, ctx: &FieldCtx, i: usize) -> FF {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ctx.zero())
    }

    pub fn add(&self, other: &Self, ctx: &FieldCtx) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| ctx.add(&self.coeff(ctx, i), &other.coeff(ctx, i))).collect())
    }

    pub fn sub(&self, other: &Self, ctx: &FieldCtx) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| ctx.sub(&self.coeff(ctx, i), &other.coeff(ctx, i))).collect())
    }

    pub fn scale(&self, c: &FF, ctx: &FieldCtx) -> Self {
        Self::new(self.coeffs.iter().map(|a| ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self, ctx: &FieldCtx) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if ctx.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(&out[i + j], &ctx.mul(a, b));
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, m: &Self, ctx: &FieldCtx) -> (Self, Self) {
        let dm = m.degree().expect("division by the zero polynomial");
        let mut r = self.coeffs.clone();
        if r.len() <= dm {
            return (Self::zero(), self.clone());
        }
        let inv = ctx.inv(m.lead().unwrap()).unwrap();
        let mut q = vec![ctx.zero(); r.len() - dm];
        for shift in (0..r.len() - dm).rev() {
            let c = ctx.mul(&r[shift + dm], &inv);
            if ctx.is_zero(&c) {
                continue;
            }
            for (j, mj) in m.coeffs.iter().enumerate() {
                r[shift + j] = ctx.sub(&r[shift + j], &ctx.mul(&c, mj));
            }
            q[shift] = c;
        }
        r.truncate(dm);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, m: &Self, ctx: &FieldCtx) -> Self {
        self.div_rem(m, ctx).1
    }

    pub fn monic(&self, ctx: &FieldCtx) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => self.scale(&ctx.inv(l).unwrap(), ctx),
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self, ctx: &FieldCtx) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, ctx);
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    pub fn derivative(&self, ctx: &FieldCtx) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| ctx.scale_int(c, i as u64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &FF, ctx: &FieldCtx) -> FF {
        let mut acc = ctx.zero();
        for c in self.coeffs.iter().rev() {
            acc = ctx.add(&ctx.mul(&acc, x), c);
        }
        acc
    }

    pub fn pow_mod(&self, e: &BigUint, m: &Self, ctx: &FieldCtx) -> Self {
        let mut acc = Self::constant(ctx.one()).rem(m, ctx);
        let base = self.rem(m, ctx);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc, ctx).rem(m, ctx);
            if e.bit(i) {
                acc = acc.mul(&base, ctx).rem(m, ctx);
            }
        }
        acc
    }

    /// For a polynomial of the form h(X^p), returns h with every coefficient
    /// replaced by its p-th root, so that the result raised to p is `self`.
    pub fn pth_root(&self, ctx: &FieldCtx) -> Self {
        let p = ctx.characteristic() as usize;
        debug_assert!(self.coeffs.iter().enumerate().all(|(i, c)| i % p == 0 || ctx.is_zero(c)));
        Self::new(self.coeffs.iter().step_by(p).map(|c| ctx.frobenius_inv(c)).collect())
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self, ctx: &FieldCtx) -> Self {
        let Some(d) = self.degree() else { return Self::zero() };
        if d == 0 {
            return Self::constant(ctx.one());
        }
        let f = self.monic(ctx);
        let df = f.derivative(ctx);
        if df.is_zero() {
            return f.pth_root(ctx).squarefree_part(ctx);
        }
        let c = f.gcd(&df, ctx);
        // w: factors whose multiplicity is prime to p
        let w = f.div_rem(&c, ctx).0;
        // strip the factors of w out of c; what remains is an exact p-th power
        let mut rest = c;
        loop {
            let g = rest.gcd(&w, ctx);
            if g.degree() == Some(0) {
                break;
            }
            rest = rest.div_rem(&g, ctx).0;
        }
        if rest.degree() == Some(0) {
            w
        } else {
            w.mul(&rest.pth_root(ctx).squarefree_part(ctx), ctx).monic(ctx)
        }
    }

    pub fn map(&self, f: impl Fn(&FF) -> FF) -> Self {
        Self::new(self.coeffs.iter().map(f).collect())
    }
}
