//! Dense polynomial helpers over the prime field F_p, on raw coefficient
//! vectors (lowest degree first). The extension-field context uses them to
//! find its modulus and to invert elements.

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod(a, (p - 2) as u64, p)
}

pub(crate) fn pow_mod(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out.push((x + p - y) % p);
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

/// Remainder of `a` modulo `m` (`m` nonzero).
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    divrem(a, m, p).1
}

pub(crate) fn divrem(a: &[u32], m: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    assert!(!m.is_empty(), "division by the zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    if r.len() < m.len() {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(m[dm], p);
    let mut q = vec![0u32; r.len() - dm];
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let c = mul_mod(*r.last().unwrap(), lead_inv, p);
        q[shift] = c;
        for (j, &mj) in m.iter().enumerate() {
            let t = mul_mod(c, mj, p);
            r[shift + j] = (r[shift + j] + p - t) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lc) = a.last() {
        let inv = inv_mod(lc, p);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

/// Inverse of `a` modulo `m` via the extended Euclidean algorithm, if it exists.
pub(crate) fn inv_modulo(a: &[u32], m: &[u32], p: u32) -> Option<Vec<u32>> {
    let mut r0 = m.to_vec();
    let mut r1 = rem(a, m, p);
    let mut s0: Vec<u32> = Vec::new();
    let mut s1: Vec<u32> = vec![1];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.len() != 1 {
        return None;
    }
    let inv = inv_mod(r0[0], p);
    let mut out: Vec<u32> = s0.iter().map(|&c| mul_mod(c, inv, p)).collect();
    trim(&mut out);
    Some(out)
}

/// `base^(p^times) mod m`, by repeated p-th powering.
fn frobenius_iterate(base: &[u32], times: usize, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = rem(base, m, p);
    for _ in 0..times {
        acc = pow_modulo(&acc, p as u64, m, p);
    }
    acc
}

fn pow_modulo(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// Rabin's irreducibility test for a monic polynomial over F_p.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len().saturating_sub(1);
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = [0u32, 1];
    if frobenius_iterate(&x, n, f, p) != rem(&x, f, p) {
        return false;
    }
    for q in prime_factors(n as u64) {
        let h = frobenius_iterate(&x, n / q as usize, f, p);
        let g = gcd(&sub(&h, &x, p), f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The smallest monic irreducible polynomial of degree `k` over F_p, where
/// candidates are ordered by their lower coefficient vector read from the
/// highest coefficient down.
pub(crate) fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
    let mut lower = vec![0u32; k];
    loop {
        let mut cand = lower.clone();
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
        // increment the base-p counter, least significant digit = constant term
        let mut i = 0;
        loop {
            lower[i] += 1;
            if lower[i] < p {
                break;
            }
            lower[i] = 0;
            i += 1;
            assert!(i < k, "no irreducible polynomial found");
        }
    }
}
