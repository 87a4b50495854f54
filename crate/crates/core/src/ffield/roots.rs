use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{prime_field_rref, Embedding, FieldCtx, FieldError, FieldRef, FqPoly, BRUTE_FORCE_LIMIT, FF};

/// How distinct roots of a split polynomial are located.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMethod {
    /// Exhaustive search for fields up to [`BRUTE_FORCE_LIMIT`], splitting otherwise.
    Auto,
    BruteForce,
    Splitting,
}

/// All roots of a polynomial in its splitting field.
#[derive(Debug, Clone)]
pub struct RootSet {
    /// The (possibly enlarged) field holding every root.
    pub ctx: FieldRef,
    /// Embedding of the input field into `ctx`.
    pub embedding: Embedding,
    /// Distinct roots in canonical order, each with its multiplicity.
    pub roots: Vec<(FF, usize)>,
}

/// Degrees of the irreducible factors of a squarefree polynomial
/// (distinct-degree factorization).
fn factor_degrees(sqfree: &FqPoly, ctx: &FieldCtx) -> Vec<usize> {
    let mut out = Vec::new();
    let mut rest = sqfree.monic(ctx);
    let x = FqPoly::x(ctx);
    let q = ctx.order_big();
    let mut h = x.clone();
    let mut d = 0;
    while let Some(deg) = rest.degree() {
        if deg == 0 {
            break;
        }
        d += 1;
        if deg < 2 * d {
            out.push(deg);
            break;
        }
        h = h.pow_mod(&q, &rest, ctx);
        let g = h.sub(&x, ctx).gcd(&rest, ctx);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 {
            out.extend(std::iter::repeat(d).take(gd / d));
            rest = rest.div_rem(&g, ctx).0;
            h = h.rem(&rest, ctx);
        }
    }
    out
}

/// Degree over `ctx` of the splitting field of `g` (lcm of irreducible factor degrees).
pub fn splitting_degree(g: &FqPoly, ctx: &FieldCtx) -> Result<usize, FieldError> {
    match g.degree() {
        None => return Err(FieldError::ZeroPolynomial),
        Some(0) => return Err(FieldError::ConstantPolynomial),
        _ => {}
    }
    let degrees = factor_degrees(&g.squarefree_part(ctx), ctx);
    Ok(degrees.into_iter().fold(1usize, |acc, d| acc.lcm(&d)))
}

/// Distinct roots of `g` that lie in `ctx`, assuming `g` splits there
/// (roots outside `ctx` are ignored by the brute-force path and must not exist
/// for the splitting path).
pub(crate) fn distinct_roots_with(g: &FqPoly, ctx: &FieldCtx, method: RootMethod) -> Vec<FF> {
    let sq = g.squarefree_part(ctx);
    if sq.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let brute = match method {
        RootMethod::BruteForce => true,
        RootMethod::Splitting => false,
        RootMethod::Auto => ctx.order().is_some_and(|q| q <= BRUTE_FORCE_LIMIT),
    };
    let mut roots = if brute {
        ctx.elements().filter(|x| ctx.is_zero(&sq.eval(x, ctx))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_f1e1d);
        let mut out = Vec::new();
        split_linear(&sq, ctx, &mut rng, &mut out);
        out
    };
    roots.sort();
    roots
}

/// Equal-degree splitting of a squarefree product of distinct linear factors.
fn split_linear(g: &FqPoly, ctx: &FieldCtx, rng: &mut ChaCha8Rng, out: &mut Vec<FF>) {
    let g = g.monic(ctx);
    match g.degree() {
        None | Some(0) => return,
        Some(1) => {
            out.push(ctx.neg(&g.coeffs()[0]));
            return;
        }
        _ => {}
    }
    let p = ctx.characteristic();
    let q = ctx.order_big();
    loop {
        let a = ctx.random(rng);
        let b = ctx.random(rng);
        let base = FqPoly::new(vec![b, a]);
        let h = if p == 2 {
            // absolute trace map: Σ_{i<k} base^(2^i)
            let mut acc = FqPoly::zero();
            let mut term = base.rem(&g, ctx);
            for _ in 0..ctx.degree() {
                acc = acc.add(&term, ctx);
                term = term.mul(&term, ctx).rem(&g, ctx);
            }
            acc
        } else {
            let e = (&q - 1u32) / 2u32;
            base.pow_mod(&e, &g, ctx).sub(&FqPoly::constant(ctx.one()), ctx)
        };
        let d = h.gcd(&g, ctx);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && dd < g.degree().unwrap() {
            let other = g.div_rem(&d, ctx).0;
            split_linear(&d, ctx, rng, out);
            split_linear(&other, ctx, rng, out);
            return;
        }
    }
}

fn multiplicity(g: &FqPoly, root: &FF, ctx: &FieldCtx) -> usize {
    let lin = FqPoly::linear(ctx, root);
    let mut rest = g.clone();
    let mut m = 0;
    loop {
        let (q, r) = rest.div_rem(&lin, ctx);
        if !r.is_zero() {
            return m;
        }
        m += 1;
        rest = q;
    }
}

/// Every root of `g` in the algebraic closure of `ctx`, with multiplicities,
/// expressed in the smallest extension of `ctx` that splits `g`.
pub fn poly_roots(g: &FqPoly, ctx: &FieldRef) -> Result<RootSet, FieldError> {
    let extra = splitting_degree(g, ctx)?;
    let (target, embedding) = enlarge(ctx, extra)?;
    let g = g.map(|c| embedding.apply(c));
    let roots = distinct_roots_with(&g, &target, RootMethod::Auto)
        .into_iter()
        .map(|r| {
            let m = multiplicity(&g, &r, &target);
            (r, m)
        })
        .collect();
    Ok(RootSet { ctx: target, embedding, roots })
}

/// F_{p^(k·extra)} together with the embedding of `ctx` into it.
pub fn enlarge(ctx: &FieldRef, extra: usize) -> Result<(FieldRef, Embedding), FieldError> {
    if extra == 1 {
        return Ok((ctx.clone(), Embedding::identity(ctx)));
    }
    let target = FieldCtx::extension(ctx.characteristic() as u64, ctx.degree() * extra)?;
    let emb = Embedding::new(ctx, &target)?;
    Ok((target, emb))
}

/// Solution set of the F_p-linear equation Σ_j b_j ζ^(p^j) = c in the
/// algebraic closure: `particular + span_{F_p}(kernel)`.
#[derive(Debug, Clone)]
pub struct FrobeniusSolution {
    pub ctx: FieldRef,
    pub embedding: Embedding,
    pub particular: FF,
    /// F_p-basis of the solution space of the homogeneous equation.
    pub kernel: Vec<FF>,
}

impl FrobeniusSolution {
    pub fn len(&self) -> u64 {
        (self.ctx.characteristic() as u64).pow(self.kernel.len() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Every solution, in canonical order.
    pub fn elements(&self) -> Vec<FF> {
        let ctx = &self.ctx;
        let p = ctx.characteristic() as u64;
        let mut out = Vec::with_capacity(self.len() as usize);
        for idx in 0..self.len() {
            let mut x = self.particular.clone();
            let mut rest = idx;
            for v in &self.kernel {
                x = ctx.add(&x, &ctx.scale_int(v, rest % p));
                rest /= p;
            }
            out.push(x);
        }
        out.sort();
        out
    }
}

/// Solve Σ_j b_j ζ^(p^j) = c by linear algebra over F_p on coordinate vectors,
/// after enlarging the field to the splitting field of the equation.
pub fn frobenius_solve(
    b: &BTreeMap<usize, FF>,
    c: &FF,
    ctx: &FieldRef,
) -> Result<FrobeniusSolution, FieldError> {
    let b: BTreeMap<usize, FF> = b.iter().filter(|(_, v)| !ctx.is_zero(v)).map(|(&j, v)| (j, v.clone())).collect();
    if b.is_empty() {
        return Err(if ctx.is_zero(c) { FieldError::Degenerate } else { FieldError::Inconsistent });
    }
    let p = ctx.characteristic() as usize;
    let top = *b.keys().next_back().unwrap();
    let mut coeffs = vec![ctx.zero(); p.pow(top as u32) + 1];
    for (&j, v) in &b {
        coeffs[p.pow(j as u32)] = v.clone();
    }
    coeffs[0] = ctx.neg(c);
    let eq = FqPoly::new(coeffs);
    let extra = splitting_degree(&eq, ctx)?;
    let (target, embedding) = enlarge(ctx, extra)?;
    let b: Vec<(usize, FF)> = b.iter().map(|(&j, v)| (j, embedding.apply(v))).collect();
    let c = embedding.apply(c);

    // matrix of L(ζ) = Σ b_j ζ^(p^j) on the power basis of the target field
    let k = target.degree();
    let images: Vec<FF> = (0..k)
        .map(|col| {
            let mut unit = vec![0u32; col + 1];
            unit[col] = 1;
            let basis = target.from_coords(&unit);
            b.iter().fold(target.zero(), |acc, (j, bj)| {
                let fr = (0..*j).fold(basis.clone(), |x, _| target.frobenius(&x));
                target.add(&acc, &target.mul(bj, &fr))
            })
        })
        .collect();
    let pr = target.characteristic();
    let mut rows: Vec<Vec<u32>> = (0..k)
        .map(|i| {
            let mut row: Vec<u32> = images.iter().map(|img| img.coords()[i]).collect();
            row.push(c.coords()[i]);
            row
        })
        .collect();
    let pivots = prime_field_rref(&mut rows, k, pr);
    if rows.iter().any(|r| r[..k].iter().all(|&x| x == 0) && r[k] != 0) {
        // cannot happen in the splitting field; kept as a guard against misuse
        return Err(FieldError::Inconsistent);
    }
    let mut part = vec![0u32; k];
    for (row, &col) in pivots.iter().enumerate() {
        part[col] = rows[row][k];
    }
    let particular = target.from_coords(&part);
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&fc| {
            let mut v = vec![0u32; k];
            v[fc] = 1;
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = (pr - rows[row][fc]) % pr;
            }
            target.from_coords(&v)
        })
        .collect();
    Ok(FrobeniusSolution { ctx: Arc::clone(&target), embedding, particular, kernel })
}
