//! Finite fields F_{p^k} with root finding, and the embeddings used when a
//! branch equation needs a larger field than the one in use.
//!
//! A [`FieldCtx`] is immutable once built. Elements ([`FF`]) are plain
//! coordinate vectors with respect to the power basis `1, s, ..., s^(k-1)`
//! of `F_p[s]/(modulus)`; all arithmetic goes through the context.

mod poly;
pub(crate) mod prime;
mod roots;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;
use smallvec::SmallVec;
use thiserror::Error;

pub use poly::FqPoly;
pub use roots::{
    enlarge, frobenius_solve, poly_roots, splitting_degree, FrobeniusSolution, RootMethod, RootSet,
};
pub(crate) use roots::distinct_roots_with;

/// Largest field order for which roots are found by exhaustive search.
pub const BRUTE_FORCE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic {0} is too large (must be below 2^31)")]
    CharacteristicTooLarge(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("the zero polynomial has no well-defined root set")]
    ZeroPolynomial,
    #[error("a constant polynomial has no roots")]
    ConstantPolynomial,
    #[error("inconsistent equation: every coefficient vanishes but the right-hand side is nonzero")]
    Inconsistent,
    #[error("degenerate equation: every coefficient and the right-hand side vanish")]
    Degenerate,
    #[error("F_{{p^{src}}} is not a subfield of F_{{p^{dst}}}")]
    NotSubfield { src: usize, dst: usize },
    #[error("fields of different characteristic ({0} and {1})")]
    CharacteristicMismatch(u32, u32),
}

/// Shared handle to a field context.
pub type FieldRef = Arc<FieldCtx>;

/// The field F_{p^k} = F_p[s]/(modulus).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    p: u32,
    k: usize,
    /// Monic irreducible of degree k, lowest coefficient first.
    modulus: Vec<u32>,
}

/// An element of some F_{p^k}: its coordinates in the power basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FF(SmallVec<[u32; 4]>);

impl FF {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }
}

/// Canonical order: compare coordinates from the highest power of `s` down,
/// i.e. by the integer whose base-p digits are the coordinates.
impl Ord for FF {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for FF {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FieldCtx {
    /// The prime field F_p.
    pub fn prime_field(p: u64) -> Result<FieldRef, FieldError> {
        Self::extension(p, 1)
    }

    /// F_{p^k}, defined by the smallest monic irreducible polynomial of
    /// degree `k` (see [`FieldCtx::modulus`]).
    pub fn extension(p: u64, k: usize) -> Result<FieldRef, FieldError> {
        if !prime::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p >= 1 << 31 {
            return Err(FieldError::CharacteristicTooLarge(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let p = p as u32;
        let modulus = if k == 1 { vec![0, 1] } else { prime::smallest_irreducible(p, k) };
        Ok(Arc::new(FieldCtx { p, k, modulus }))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// Modulus coefficients, lowest degree first (monic, length k + 1).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Field order p^k, if it fits in a u64.
    pub fn order(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.k as u32)
    }

    pub fn order_big(&self) -> BigUint {
        BigUint::from(self.p).pow(self.k as u32)
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    pub fn zero(&self) -> FF {
        FF(SmallVec::from_elem(0, self.k))
    }

    pub fn one(&self) -> FF {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FF {
        let mut x = self.zero();
        x.0[0] = n.rem_euclid(self.p as i64) as u32;
        x
    }

    /// Element with the given coordinates (reduced mod p, missing ones zero).
    pub fn from_coords(&self, coords: &[u32]) -> FF {
        assert!(coords.len() <= self.k, "too many coordinates for F_{{p^{}}}", self.k);
        let mut x = self.zero();
        for (slot, &c) in x.0.iter_mut().zip(coords) {
            *slot = c % self.p;
        }
        x
    }

    /// The class of `s`; for the prime field this is 0 (modulus `s`).
    pub fn generator(&self) -> FF {
        if self.k == 1 {
            self.zero()
        } else {
            self.from_coords(&[0, 1])
        }
    }

    /// The element with index `idx` in the canonical enumeration.
    pub fn element(&self, mut idx: u64) -> FF {
        let mut x = self.zero();
        for slot in x.0.iter_mut() {
            *slot = (idx % self.p as u64) as u32;
            idx /= self.p as u64;
        }
        x
    }

    /// All elements in canonical order; only sensible for tiny fields.
    pub fn elements(&self) -> impl Iterator<Item = FF> + '_ {
        let n = self.order().expect("field too large to enumerate");
        (0..n).map(move |i| self.element(i))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FF {
        let mut x = self.zero();
        for slot in x.0.iter_mut() {
            *slot = rng.gen_range(0..self.p);
        }
        x
    }

    pub fn is_zero(&self, a: &FF) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &FF) -> bool {
        a.0[0] == 1 && a.0[1..].iter().all(|&c| c == 0)
    }

    /// The element as an integer in [0, p) when it lies in the prime field.
    pub fn as_prime(&self, a: &FF) -> Option<u32> {
        a.0[1..].iter().all(|&c| c == 0).then_some(a.0[0])
    }

    pub fn add(&self, a: &FF, b: &FF) -> FF {
        let p = self.p;
        FF(a.0.iter().zip(&b.0).map(|(&x, &y)| {
            let s = x + y;
            if s >= p { s - p } else { s }
        }).collect())
    }

    pub fn sub(&self, a: &FF, b: &FF) -> FF {
        let p = self.p;
        FF(a.0.iter().zip(&b.0).map(|(&x, &y)| if x >= y { x - y } else { x + p - y }).collect())
    }

    pub fn neg(&self, a: &FF) -> FF {
        let p = self.p;
        FF(a.0.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect())
    }

    pub fn mul(&self, a: &FF, b: &FF) -> FF {
        let p = self.p as u64;
        if self.k == 1 {
            return FF(SmallVec::from_elem(((a.0[0] as u64 * b.0[0] as u64) % p) as u32, 1));
        }
        let k = self.k;
        let mut buf: SmallVec<[u64; 16]> = SmallVec::from_elem(0, 2 * k - 1);
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                buf[i + j] = (buf[i + j] + x as u64 * y as u64) % p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = buf[i];
            if c == 0 {
                continue;
            }
            // s^k = -(m_0 + m_1 s + ... + m_{k-1} s^{k-1})
            for j in 0..k {
                let m = self.modulus[j] as u64;
                if m != 0 {
                    buf[i - k + j] = (buf[i - k + j] + (p - c) * m) % p;
                }
            }
            buf[i] = 0;
        }
        FF(buf[..k].iter().map(|&c| c as u32).collect())
    }

    pub fn scale_int(&self, a: &FF, n: u64) -> FF {
        let n = (n % self.p as u64) as u32;
        FF(a.0.iter().map(|&x| prime::mul_mod(x, n, self.p)).collect())
    }

    pub fn inv(&self, a: &FF) -> Option<FF> {
        if self.is_zero(a) {
            return None;
        }
        if self.k == 1 {
            return Some(self.from_coords(&[prime::inv_mod(a.0[0], self.p)]));
        }
        let mut v: Vec<u32> = a.0.to_vec();
        prime::trim(&mut v);
        let inv = prime::inv_modulo(&v, &self.modulus, self.p)?;
        Some(self.from_coords(&inv))
    }

    pub fn div(&self, a: &FF, b: &FF) -> Option<FF> {
        Some(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FF, mut e: u64) -> FF {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, a: &FF, e: &BigUint) -> FF {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// x ↦ x^p.
    pub fn frobenius(&self, a: &FF) -> FF {
        if self.k == 1 {
            return a.clone();
        }
        self.pow(a, self.p as u64)
    }

    /// Inverse Frobenius x ↦ x^(1/p) = x^(p^(k-1)).
    pub fn frobenius_inv(&self, a: &FF) -> FF {
        let mut x = a.clone();
        for _ in 1..self.k {
            x = self.frobenius(&x);
        }
        x
    }

    /// Degree of `a` over F_p: the least d with a^(p^d) = a.
    pub fn element_degree(&self, a: &FF) -> usize {
        let mut x = self.frobenius(a);
        let mut d = 1;
        while x != *a {
            x = self.frobenius(&x);
            d += 1;
        }
        d
    }

    /// Short name such as `F_9`.
    pub fn short_name(&self) -> String {
        match self.order() {
            Some(q) => format!("F_{q}"),
            None => format!("F_{}^{}", self.p, self.k),
        }
    }

    /// Field header such as `F_9 = F_3[s]/(s^2+1)`; the prime field is just `F_p`.
    pub fn header(&self) -> String {
        if self.k == 1 {
            return self.short_name();
        }
        format!("{} = F_{}[s]/({})", self.short_name(), self.p, self.format_modulus())
    }

    fn format_modulus(&self) -> String {
        let coords: Vec<u32> = self.modulus.clone();
        format_coords(&coords, "s")
    }

    /// Canonical text form of an element as a polynomial in `s`,
    /// coefficients in [0, p), e.g. `2*s+1`.
    pub fn format(&self, a: &FF) -> String {
        format_coords(&a.0, "s")
    }

    /// Text form using a signed representative for prime-field elements
    /// (`p-1` prints as `-1`). Returns (negative, magnitude text).
    pub fn format_signed(&self, a: &FF) -> (bool, String) {
        match self.as_prime(a) {
            Some(c) if c > self.p / 2 => (true, (self.p - c).to_string()),
            _ => (false, self.format(a)),
        }
    }

    /// Parse the canonical text form produced by [`FieldCtx::format`].
    pub fn parse(&self, text: &str) -> Option<FF> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut x = self.zero();
        for part in text.split('+') {
            if part.is_empty() {
                return None;
            }
            let (coef, pow) = match part.find('s') {
                None => (part.parse::<u64>().ok()?, 0usize),
                Some(pos) => {
                    let c = if pos == 0 {
                        1
                    } else {
                        part[..pos].strip_suffix('*')?.parse::<u64>().ok()?
                    };
                    let rest = &part[pos + 1..];
                    let e = if rest.is_empty() { 1 } else { rest.strip_prefix('^')?.parse().ok()? };
                    (c, e)
                }
            };
            if pow >= self.k && !(self.k == 1 && pow == 0) {
                return None;
            }
            x.0[pow] = ((x.0[pow] as u64 + coef) % self.p as u64) as u32;
        }
        Some(x)
    }

    pub fn display<'a>(&'a self, a: &'a FF) -> impl fmt::Display + 'a {
        struct D<'a>(&'a FieldCtx, &'a FF);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.format(self.1))
            }
        }
        D(self, a)
    }
}

fn format_coords(coords: &[u32], var: &str) -> String {
    let mut parts = Vec::new();
    for (i, &c) in coords.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        parts.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

/// An embedding F_{p^a} → F_{p^b} (a | b), fixed by the image of the
/// generator `s`: the canonically smallest root of the source modulus in
/// the target field.
#[derive(Debug, Clone)]
pub struct Embedding {
    src: FieldRef,
    dst: FieldRef,
    /// Images of s^0, ..., s^(a-1).
    images: Vec<FF>,
}

impl Embedding {
    pub fn identity(ctx: &FieldRef) -> Self {
        let images = (0..ctx.k)
            .map(|j| {
                let mut e = ctx.zero();
                e.0[j] = 1;
                e
            })
            .collect();
        Embedding { src: ctx.clone(), dst: ctx.clone(), images }
    }

    pub fn new(src: &FieldRef, dst: &FieldRef) -> Result<Self, FieldError> {
        if src.p != dst.p {
            return Err(FieldError::CharacteristicMismatch(src.p, dst.p));
        }
        if dst.k % src.k != 0 {
            return Err(FieldError::NotSubfield { src: src.k, dst: dst.k });
        }
        if src == dst {
            return Ok(Embedding::identity(dst));
        }
        if src.k == 1 {
            return Ok(Embedding { src: src.clone(), dst: dst.clone(), images: vec![dst.one()] });
        }
        let modulus = FqPoly::new(src.modulus.iter().map(|&c| dst.from_int(c as i64)).collect());
        let mut roots = distinct_roots_with(&modulus, dst, RootMethod::Auto);
        roots.sort();
        let gen = roots.into_iter().next().expect("source modulus splits in the target field");
        let mut images = Vec::with_capacity(src.k);
        let mut power = dst.one();
        for _ in 0..src.k {
            images.push(power.clone());
            power = dst.mul(&power, &gen);
        }
        Ok(Embedding { src: src.clone(), dst: dst.clone(), images })
    }

    pub fn source(&self) -> &FieldRef {
        &self.src
    }

    pub fn target(&self) -> &FieldRef {
        &self.dst
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst
    }

    pub fn apply(&self, x: &FF) -> FF {
        if self.is_identity() {
            return x.clone();
        }
        let mut acc = self.dst.zero();
        for (&c, img) in x.0.iter().zip(&self.images) {
            if c != 0 {
                acc = self.dst.add(&acc, &self.dst.scale_int(img, c as u64));
            }
        }
        acc
    }

    /// Inverse image of `y`, if `y` lies in the embedded subfield.
    pub fn preimage(&self, y: &FF) -> Option<FF> {
        if self.is_identity() {
            return Some(y.clone());
        }
        // Solve Σ_j x_j images[j] = y over F_p: a (b × a) linear system.
        let p = self.dst.p;
        let a = self.src.k;
        let b = self.dst.k;
        let mut rows: Vec<Vec<u32>> = (0..b)
            .map(|i| {
                let mut row: Vec<u32> = self.images.iter().map(|img| img.0[i]).collect();
                row.push(y.0[i]);
                row
            })
            .collect();
        let pivots = prime_field_rref(&mut rows, a, p);
        // inconsistent if some zero row has a nonzero right-hand side
        if rows.iter().any(|r| r[..a].iter().all(|&c| c == 0) && r[a] != 0) {
            return None;
        }
        let mut x = self.src.zero();
        for (row, &col) in pivots.iter().enumerate() {
            x.0[col] = rows[row][a];
        }
        Some(x)
    }
}

/// Reduced row echelon form over F_p of the first `cols` columns of `rows`
/// (extra columns are carried along). Returns pivot columns, one per row used.
pub(crate) fn prime_field_rref(rows: &mut [Vec<u32>], cols: usize, p: u32) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, sel);
        let inv = prime::inv_mod(rows[r][c], p);
        for v in rows[r].iter_mut() {
            *v = prime::mul_mod(*v, inv, p);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v = (*v + p - prime::mul_mod(f, pv, p)) % p;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}
