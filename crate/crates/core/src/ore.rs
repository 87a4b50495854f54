//! Additive polynomials Σ a_i X^(p^i) over F_p(t), and the construction of
//! an additive multiple of a given f from the F_p(t)-linear dependency
//! among the residues X^(p^i) mod f.

use std::collections::BTreeMap;
use std::fmt;

use crate::ffield::{FieldRef, FqPoly};
use crate::hasse::Poly;
use crate::ratfun::{LPoly, RatFun};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OreError {
    #[error("polynomial must have degree at least 1")]
    ConstantPolynomial,
    #[error("coefficients must lie in F_p(t)")]
    NotOverPrimeField,
    #[error("additive polynomial needs a nonzero coefficient")]
    Empty,
}

/// P(X) = Σ a_i X^(p^i) with every stored a_i nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditivePolynomial {
    ctx: FieldRef,
    coeffs: BTreeMap<usize, RatFun>,
}

impl AdditivePolynomial {
    pub fn new(ctx: FieldRef, coeffs: BTreeMap<usize, RatFun>) -> Result<Self, OreError> {
        let coeffs: BTreeMap<usize, RatFun> = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if coeffs.is_empty() {
            return Err(OreError::Empty);
        }
        Ok(AdditivePolynomial { ctx, coeffs })
    }

    pub fn ctx(&self) -> &FieldRef {
        &self.ctx
    }

    pub fn p(&self) -> u32 {
        self.ctx.characteristic()
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, RatFun> {
        &self.coeffs
    }

    /// I_P, the indices with a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs.keys().copied().collect()
    }

    /// Largest index i with a_i ≠ 0.
    pub fn top_index(&self) -> usize {
        *self.coeffs.keys().next_back().unwrap()
    }

    /// Degree in X, p^(top index).
    pub fn degree(&self) -> u64 {
        (self.p() as u64).pow(self.top_index() as u32)
    }

    pub fn to_poly(&self) -> Poly {
        let p = self.p() as usize;
        let mut out = Poly::zero(self.ctx.clone());
        for (&i, c) in &self.coeffs {
            out = out.add(&Poly::monomial(c.clone(), p.pow(i as u32)));
        }
        out
    }
}

impl fmt::Display for AdditivePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_poly().fmt(f)
    }
}

/// True iff every monomial of `f` has exponent a power of p.
pub fn is_additive(f: &Poly) -> bool {
    let p = f.ctx().characteristic() as usize;
    f.support().into_iter().all(|d| {
        let mut d = d;
        if d == 0 {
            return false;
        }
        while d % p == 0 {
            d /= p;
        }
        d == 1
    })
}

/// An additive polynomial divisible by `f`, of degree at most p^(deg f).
///
/// The residues X^(p^i) mod f (i = 0..=deg f) are dependent over F_p(t);
/// the dependency used is the one attached to the first column without a
/// pivot in the reduced row echelon form, so its degree is minimal.
/// Denominators and content are then cleared and the coefficient of the
/// highest power of X is made monic in t.
pub fn addpol(f: &Poly) -> Result<AdditivePolynomial, OreError> {
    let n = match f.degree() {
        None | Some(0) => return Err(OreError::ConstantPolynomial),
        Some(n) => n,
    };
    let ctx = f.ctx().clone();
    if !ctx.is_prime_field() || f.coeffs().iter().any(|c| c.m() != 1) {
        return Err(OreError::NotOverPrimeField);
    }
    let p = ctx.characteristic() as usize;
    let f = f.monic();

    // columns[i] = coefficients of X^(p^i) mod f
    let mut columns: Vec<Vec<RatFun>> = Vec::with_capacity(n + 1);
    let mut r = Poly::x(ctx.clone()).rem(&f).expect("nonzero modulus");
    for i in 0..=n {
        if i > 0 {
            r = frobenius_mod(&r, p, &f);
        }
        columns.push((0..n).map(|j| r.coeff(j)).collect());
    }

    let kernel = first_kernel_vector(&ctx, &columns, n);
    let coeffs = normalize(&ctx, kernel);
    Ok(AdditivePolynomial::new(ctx, coeffs.into_iter().enumerate().collect()).expect("nonzero kernel vector"))
}

/// `r^p mod f`, using that p-th powering is additive.
fn frobenius_mod(r: &Poly, p: usize, f: &Poly) -> Poly {
    let ctx = r.ctx().clone();
    let mut out = Poly::zero(ctx);
    for (j, c) in r.coeffs().iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&Poly::monomial(c.pow(p as u64), j * p));
        }
    }
    out.rem(f).expect("nonzero modulus")
}

/// Kernel vector of the `rows × (cols)` system given by columns, attached
/// to the first non-pivot column of the reduced row echelon form.
fn first_kernel_vector(ctx: &FieldRef, columns: &[Vec<RatFun>], rows: usize) -> Vec<RatFun> {
    let cols = columns.len();
    let mut a: Vec<Vec<RatFun>> = (0..rows).map(|j| columns.iter().map(|c| c[j].clone()).collect()).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    let mut free = None;
    for col in 0..cols {
        let Some(pr) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            free = Some(col);
            break;
        };
        a.swap(row, pr);
        let inv = a[row][col].inv().unwrap();
        for c in col..cols {
            a[row][c] = a[row][c].mul(&inv);
        }
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..cols {
                    if !a[row][c].is_zero() {
                        a[r][c] = a[r][c].sub(&factor.mul(&a[row][c]));
                    }
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    // n rows and n + 1 columns always leave a free column
    let free = free.expect("more columns than rows");
    let mut v = vec![RatFun::zero(ctx.clone()); free + 1];
    v[free] = RatFun::one(ctx.clone());
    for &(r, c) in &pivots {
        v[c] = a[r][free].neg();
    }
    v
}

/// Scale a nonzero vector over F_p(t) to coprime polynomials in t whose
/// last nonzero entry is monic.
fn normalize(ctx: &FieldRef, v: Vec<RatFun>) -> Vec<RatFun> {
    let mut den = RatFun::one(ctx.clone());
    for c in &v {
        if c.is_zero() {
            continue;
        }
        // multiply by the denominator's part not already present
        let d = RatFun::from_fraction(ctx.clone(), 1, c.den().clone(), LPoly::monomial(ctx.one(), 0)).unwrap();
        let g = poly_gcd(ctx, &den, &d);
        den = den.mul(&d).div(&g).unwrap();
    }
    let mut polys: Vec<RatFun> = v.iter().map(|c| c.mul(&den)).collect();
    // shift so the smallest t-power is t^0
    let low = polys.iter().filter_map(|c| c.num().lowest().map(|t| t.0)).min().unwrap();
    let shift = RatFun::monomial(ctx.clone(), ctx.one(), &crate::hahn::Exponent::integer(-low as i64));
    polys = polys.iter().map(|c| c.mul(&shift)).collect();
    let mut content = RatFun::zero(ctx.clone());
    for c in &polys {
        if !c.is_zero() {
            content = if content.is_zero() { c.clone() } else { poly_gcd(ctx, &content, c) };
        }
    }
    polys = polys.iter().map(|c| c.div(&content).unwrap()).collect();
    let last = polys.iter().rev().find(|c| !c.is_zero()).unwrap();
    let lc = last.num().highest().unwrap().1.clone();
    let inv = ctx.inv(&lc).unwrap();
    polys.iter().map(|c| c.scale(&inv)).collect()
}

/// Monic gcd of two polynomials in t (as Laurent-free rational functions).
fn poly_gcd(ctx: &FieldRef, a: &RatFun, b: &RatFun) -> RatFun {
    let da = to_dense(ctx, a);
    let db = to_dense(ctx, b);
    let g = da.gcd(&db, ctx);
    let terms = g.coeffs().iter().enumerate().map(|(i, c)| (i as i128, c.clone())).collect();
    RatFun::from_laurent(ctx.clone(), 1, LPoly::from_sorted(terms))
}

fn to_dense(ctx: &FieldRef, a: &RatFun) -> FqPoly {
    debug_assert!(a.is_laurent() && a.num().lowest().map_or(true, |t| t.0 >= 0));
    let Some(top) = a.num().highest() else { return FqPoly::zero() };
    let mut v = vec![ctx.zero(); top.0 as usize + 1];
    for (e, c) in a.num().terms() {
        v[*e as usize] = c.clone();
    }
    FqPoly::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldCtx;
    use crate::hahn::Exponent;

    fn t(ctx: &FieldRef) -> RatFun {
        RatFun::t(ctx.clone())
    }

    fn poly(ctx: &FieldRef, coeffs: Vec<RatFun>) -> Poly {
        Poly::new(ctx.clone(), coeffs)
    }

    #[test]
    fn identity_polynomial() {
        for p in [2u64, 3, 5] {
            let fp = FieldCtx::prime_field(p).unwrap();
            let x = Poly::x(fp.clone());
            let a = addpol(&x).unwrap();
            assert_eq!(a.to_poly(), x);
            assert_eq!(a.support(), vec![0]);
        }
    }

    #[test]
    fn quadratic_over_f3() {
        let f3 = FieldCtx::prime_field(3).unwrap();
        let f = poly(&f3, vec![t(&f3).neg(), RatFun::zero(f3.clone()), RatFun::one(f3.clone())]);
        let a = addpol(&f).unwrap();
        assert_eq!(a.to_string(), "X^3 - t*X");
        assert!(a.to_poly().rem(&f).unwrap().is_zero());
    }

    #[test]
    fn already_additive() {
        let f2 = FieldCtx::prime_field(2).unwrap();
        let one = RatFun::one(f2.clone());
        let f = poly(&f2, vec![RatFun::zero(f2.clone()), one.clone(), one]);
        assert_eq!(addpol(&f).unwrap().to_poly(), f);
    }

    #[test]
    fn artin_schreier() {
        // X^p - X - 1/t; X^p ≡ X + 1/t and X^(p^2) ≡ X + 1/t + 1/t^p
        for p in [2u64, 3, 5] {
            let fp = FieldCtx::prime_field(p).unwrap();
            let one = RatFun::one(fp.clone());
            let mut c = vec![RatFun::zero(fp.clone()); p as usize + 1];
            c[0] = t(&fp).inv().unwrap().neg();
            c[1] = one.neg();
            c[p as usize] = one.clone();
            let f = poly(&fp, c);
            let a = addpol(&f).unwrap();
            let tp1 = RatFun::monomial(fp.clone(), fp.one(), &Exponent::integer(p as i64 - 1));
            let expected = BTreeMap::from([(0, one.clone()), (1, tp1.add(&one).neg()), (2, tp1)]);
            assert_eq!(a.coeffs(), &expected);
            assert!(a.to_poly().rem(&f).unwrap().is_zero());
        }
    }

    #[test]
    fn additivity_predicate() {
        let f3 = FieldCtx::prime_field(3).unwrap();
        let one = RatFun::one(f3.clone());
        let zero = RatFun::zero(f3.clone());
        let x3_tx = poly(&f3, vec![zero.clone(), t(&f3).neg(), zero.clone(), one.clone()]);
        assert!(is_additive(&x3_tx));
        assert!(!is_additive(&Poly::monomial(one.clone(), 2)));
        let shifted = poly(&f3, vec![one.clone(), zero.clone(), zero.clone(), one.clone()]);
        assert!(!is_additive(&shifted));
        assert_eq!(addpol(&Poly::constant(one)), Err(OreError::ConstantPolynomial));
    }
}
