//! Finite-field arithmetic over GF(q) for prime powers q <= 256.
//!
//! Field elements are identified with integer labels in `[0, q)` through the
//! base-p encoding of their coefficient vectors: the element with coefficient
//! vector `(c_0, ..., c_{m-1})` (low degree first) gets label `sum c_i p^i`.
//! Label 0 is the additive identity and label 1 the multiplicative identity.
//!
//! Extension fields use the lexicographically least monic irreducible
//! polynomial of the requested degree, found by exhaustive search at
//! construction time, so the arithmetic is reproducible without a
//! Conway-polynomial table.

use crate::error::{Error, Result};

const MAX_Q: u64 = 256;

/// Identifies a field (characteristic and extension degree) so that elements
/// from different fields cannot be mixed silently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldId {
    p: u16,
    m: u32,
}

/// A field element: an integer label in `[0, q)` tagged with its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    label: u16,
    field: FieldId,
}

impl FieldElem {
    pub fn label(&self) -> u16 {
        self.label
    }
}

/// GF(p^m) with precomputed addition and exp/log multiplication tables.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    p: u16,
    m: u32,
    q: u16,
    /// Monic modulus, coefficients low degree first, length m+1. Empty when m = 1.
    modulus: Vec<u16>,
    add_table: Vec<u16>,
    /// exp[i] = g^i for a fixed generator g, i in [0, 2(q-1)).
    exp: Vec<u16>,
    /// log[a] for a in [1, q); log[0] is a sentinel.
    log: Vec<u16>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomials over GF(p), coefficients low degree first, no trailing zeros.
mod poly {
    pub fn trim(c: &mut Vec<u16>) {
        while c.last() == Some(&0) {
            c.pop();
        }
    }

    pub fn mul(a: &[u16], b: &[u16], p: u16) -> Vec<u16> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u16; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u32 + ai as u32 * bj as u32) % p as u32) as u16;
            }
        }
        trim(&mut out);
        out
    }

    fn scalar_inv(a: u16, p: u16) -> u16 {
        // Fermat: a^(p-2) mod p.
        let mut result = 1u32;
        let mut base = a as u32;
        let mut e = p as u32 - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p as u32;
            }
            base = base * base % p as u32;
            e >>= 1;
        }
        result as u16
    }

    /// Remainder of a mod b; b must be nonzero.
    pub fn rem(a: &[u16], b: &[u16], p: u16) -> Vec<u16> {
        let mut r: Vec<u16> = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = scalar_inv(b[db], p);
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let factor = (r[r.len() - 1] as u32 * lead_inv as u32 % p as u32) as u16;
            for (i, &bi) in b.iter().enumerate() {
                let sub = factor as u32 * bi as u32 % p as u32;
                let idx = i + shift;
                r[idx] = ((r[idx] as u32 + p as u32 - sub) % p as u32) as u16;
            }
            trim(&mut r);
            if r.is_empty() {
                break;
            }
        }
        r
    }

    pub fn is_irreducible(f: &[u16], p: u16) -> bool {
        let deg = f.len() - 1;
        if deg == 0 {
            return false;
        }
        // Trial division by every monic polynomial of degree 1..=deg/2.
        for d in 1..=deg / 2 {
            let count = (p as u64).pow(d as u32);
            for idx in 0..count {
                let mut g = decode(idx, d + 1, p);
                g[d] = 1;
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Base-p digits of idx, padded to `len` coefficients.
    pub fn decode(mut idx: u64, len: usize, p: u16) -> Vec<u16> {
        let mut out = vec![0u16; len];
        for c in out.iter_mut() {
            *c = (idx % p as u64) as u16;
            idx /= p as u64;
        }
        out
    }

    pub fn encode(c: &[u16], p: u16) -> u16 {
        let mut label = 0u64;
        for &ci in c.iter().rev() {
            label = label * p as u64 + ci as u64;
        }
        label as u16
    }
}

impl FieldSpec {
    /// Constructs GF(p^m). The modulus is the lexicographically least monic
    /// irreducible polynomial of degree m over GF(p), in the base-p encoding
    /// of the lower coefficients.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidDegree);
        }
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        let q = p
            .checked_pow(m)
            .ok_or(Error::FieldTooLarge(u64::MAX))?;
        if q > MAX_Q {
            return Err(Error::FieldTooLarge(q));
        }
        let (p, q) = (p as u16, q as u16);

        let modulus = if m == 1 {
            vec![]
        } else {
            let mut found = None;
            for idx in 0..(q as u64) {
                let mut f = poly::decode(idx, m as usize + 1, p);
                f[m as usize] = 1;
                if poly::is_irreducible(&f, p) {
                    found = Some(f);
                    break;
                }
            }
            // A monic irreducible of every degree exists over every GF(p).
            found.expect("no irreducible polynomial found")
        };

        let raw_mul = |a: u16, b: u16| -> u16 {
            if m == 1 {
                (a as u32 * b as u32 % p as u32) as u16
            } else {
                let pa = poly::decode(a as u64, m as usize, p);
                let pb = poly::decode(b as u64, m as usize, p);
                let prod = poly::mul(&pa, &pb, p);
                let r = poly::rem(&prod, &modulus, p);
                poly::encode(&r, p)
            }
        };

        // Find a multiplicative generator and build exp/log tables.
        let ord = q as usize - 1;
        let mut exp = vec![0u16; 2 * ord.max(1)];
        let mut log = vec![0u16; q as usize];
        'search: for g in 1..q {
            let mut x = 1u16;
            let mut seen = vec![false; q as usize];
            for e in exp.iter_mut().take(ord) {
                if seen[x as usize] {
                    continue 'search;
                }
                seen[x as usize] = true;
                *e = x;
                x = raw_mul(x, g);
            }
            if x != 1 {
                continue;
            }
            for i in 0..ord {
                exp[ord + i] = exp[i];
                log[exp[i] as usize] = i as u16;
            }
            let mut add_table = vec![0u16; q as usize * q as usize];
            for a in 0..q {
                for b in 0..q {
                    let da = poly::decode(a as u64, m as usize, p);
                    let db = poly::decode(b as u64, m as usize, p);
                    let sum: Vec<u16> =
                        da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                    add_table[a as usize * q as usize + b as usize] = poly::encode(&sum, p);
                }
            }
            return Ok(FieldSpec {
                p,
                m,
                q,
                modulus,
                add_table,
                exp,
                log,
            });
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    pub fn p(&self) -> u16 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    /// Modulus coefficients, low degree first (empty for prime fields).
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    pub fn id(&self) -> FieldId {
        FieldId { p: self.p, m: self.m }
    }

    pub fn elem(&self, label: u16) -> Result<FieldElem> {
        if label >= self.q {
            return Err(Error::LabelOutOfRange { label, q: self.q });
        }
        Ok(FieldElem {
            label,
            field: self.id(),
        })
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { label: 0, field: self.id() }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem { label: 1, field: self.id() }
    }

    fn check(&self, a: FieldElem) -> Result<u16> {
        if a.field != self.id() {
            return Err(Error::FieldMismatch);
        }
        Ok(a.label)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        self.elem(self.add_label(a, b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        self.elem(self.mul_label(a, b))
    }

    pub fn neg(&self, a: FieldElem) -> Result<FieldElem> {
        let a = self.check(a)?;
        self.elem(self.neg_label(a))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        let a = self.check(a)?;
        self.elem(self.inv_label(a)?)
    }

    /// Unchecked label addition (hot path; labels must be < q).
    #[inline]
    pub fn add_label(&self, a: u16, b: u16) -> u16 {
        debug_assert!(a < self.q && b < self.q);
        self.add_table[a as usize * self.q as usize + b as usize]
    }

    /// Unchecked label multiplication via exp/log tables.
    #[inline]
    pub fn mul_label(&self, a: u16, b: u16) -> u16 {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    #[inline]
    pub fn neg_label(&self, a: u16) -> u16 {
        debug_assert!(a < self.q);
        let digits = poly::decode(a as u64, self.m as usize, self.p);
        let neg: Vec<u16> = digits.iter().map(|&c| (self.p - c) % self.p).collect();
        poly::encode(&neg, self.p)
    }

    pub fn inv_label(&self, a: u16) -> Result<u16> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        debug_assert!(a < self.q);
        let ord = self.q as usize - 1;
        Ok(self.exp[(ord - self.log[a as usize] as usize) % ord])
    }

    /// Finite-field inner product of two label sequences.
    pub fn inner_product(&self, xs: &[FieldElem], ys: &[FieldElem]) -> Result<FieldElem> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch(xs.len(), ys.len()));
        }
        let mut acc = 0u16;
        for (&x, &y) in xs.iter().zip(ys) {
            let (x, y) = (self.check(x)?, self.check(y)?);
            acc = self.add_label(acc, self.mul_label(x, y));
        }
        self.elem(acc)
    }

    /// Inner product over raw labels (hot path, lengths assumed equal).
    #[inline]
    pub fn inner_product_labels(&self, xs: &[u16], ys: &[u16]) -> u16 {
        debug_assert_eq!(xs.len(), ys.len());
        let mut acc = 0u16;
        for (&x, &y) in xs.iter().zip(ys) {
            acc = self.add_label(acc, self.mul_label(x, y));
        }
        acc
    }
}
