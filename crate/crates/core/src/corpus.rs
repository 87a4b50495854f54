//! Seeded random polynomials over F_p(t) for property and corpus testing.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ffield::{FieldCtx, FieldRef};
use crate::hahn::Exponent;
use crate::hasse::Poly;
use crate::ratfun::RatFun;

/// A random element c·t^e or a sum of two such terms, sometimes divided by
/// a small polynomial with nonzero constant term.
pub fn random_coefficient<R: Rng + ?Sized>(ctx: &FieldRef, rng: &mut R) -> RatFun {
    let p = ctx.characteristic() as i64;
    let monomial = |rng: &mut R| {
        let c = ctx.from_int(rng.gen_range(1..p));
        RatFun::monomial(ctx.clone(), c, &Exponent::integer(rng.gen_range(-2..=2)))
    };
    let mut a = monomial(rng);
    if rng.gen_bool(0.3) {
        a = a.add(&monomial(rng));
    }
    if a.is_zero() {
        a = RatFun::one(ctx.clone());
    }
    if rng.gen_bool(0.2) {
        let t = RatFun::t(ctx.clone());
        let one = RatFun::one(ctx.clone());
        let den = if rng.gen_bool(0.5) { t.add(&one) } else { t.mul(&t).add(&t).add(&one) };
        a = a.div(&den).unwrap();
    }
    a
}

/// A polynomial of degree in `1..=max_degree` with a nonzero constant term
/// and occasionally a non-unit leading coefficient.
pub fn random_poly<R: Rng + ?Sized>(ctx: &FieldRef, max_degree: usize, rng: &mut R) -> Poly {
    let n = rng.gen_range(1..=max_degree);
    let mut coeffs: Vec<RatFun> = (0..n)
        .map(|i| {
            if i == 0 || rng.gen_bool(0.5) {
                random_coefficient(ctx, rng)
            } else {
                RatFun::zero(ctx.clone())
            }
        })
        .collect();
    coeffs.push(if rng.gen_bool(0.8) { RatFun::one(ctx.clone()) } else { random_coefficient(ctx, rng) });
    Poly::new(ctx.clone(), coeffs)
}

/// `count` polynomials of degree ≤ `max_degree`, alternating over the given
/// characteristics, reproducible from `seed`.
pub fn corpus(seed: u64, count: usize, primes: &[u64], max_degree: usize) -> Vec<Poly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields: Vec<FieldRef> = primes.iter().map(|&p| FieldCtx::prime_field(p).expect("prime")).collect();
    (0..count).map(|i| random_poly(&fields[i % fields.len()], max_degree, &mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_well_formed() {
        let a = corpus(7, 20, &[2, 3], 4);
        let b = corpus(7, 20, &[2, 3], 4);
        assert_eq!(a, b);
        for (i, f) in a.iter().enumerate() {
            let d = f.degree().unwrap();
            assert!((1..=4).contains(&d));
            assert!(!f.coeff(0).is_zero());
            assert_eq!(f.ctx().characteristic(), [2, 3][i % 2]);
        }
    }
}
