//! Table-driven arithmetic in GF(q) for the small prime powers q ≤ 9.
//!
//! Elements are dense indices `0..q`. For an extension field GF(p^e) the index
//! of `c_0 + c_1 x + … + c_{e-1} x^{e-1}` is `c_0 + c_1 p + … + c_{e-1} p^{e-1}`,
//! reduced modulo a fixed irreducible polynomial, so indexing is stable across
//! runs and across machines.

use std::fmt;

use crate::error::{Error, Result};

/// Orders accepted by [`FieldCtx::new`].
pub const SUPPORTED_ORDERS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

const MAX_Q: usize = 9;

/// A field element, stored as its index in `0..q`.
#[repr(transparent)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Felt(pub(crate) u8);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arithmetic tables for GF(q). Immutable after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    q: u32,
    p: u32,
    e: u32,
    /// Coefficients `c_0..=c_e` of the monic modulus, empty for prime fields.
    modulus: Vec<u8>,
    add: [Felt; MAX_Q * MAX_Q],
    mul: [Felt; MAX_Q * MAX_Q],
    neg: [Felt; MAX_Q],
    inv: [Felt; MAX_Q],
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("q", &self.q)
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Fixed irreducible moduli (low coefficient first).
fn modulus_for(q: u32) -> Option<(u32, u32, &'static [u8])> {
    match q {
        2 | 3 | 5 | 7 => Some((q, 1, &[])),
        4 => Some((2, 2, &[1, 1, 1])),    // x^2 + x + 1
        8 => Some((2, 3, &[1, 1, 0, 1])), // x^3 + x + 1
        9 => Some((3, 2, &[1, 0, 1])),    // x^2 + 1
        _ => None,
    }
}

fn to_digits(mut v: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn from_digits(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn poly_mul_mod(a: &[u32], b: &[u32], p: u32, modulus: &[u8]) -> Vec<u32> {
    let e = a.len();
    let mut prod = vec![0u32; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // modulus is monic of degree e: x^e = -(c_0 + … + c_{e-1} x^{e-1})
    for deg in (e..2 * e).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (k, &mk) in modulus[..e].iter().enumerate() {
            let sub = (c * mk as u32) % p;
            let slot = &mut prod[deg - e + k];
            *slot = (*slot + p - sub) % p;
        }
    }
    prod.truncate(e);
    prod
}

impl FieldCtx {
    /// Builds GF(q) for q in [`SUPPORTED_ORDERS`].
    pub fn new(q: u32) -> Result<Self> {
        let (p, e, modulus) = modulus_for(q).ok_or(Error::UnsupportedField(q))?;
        let n = q as usize;
        let mut add = [Felt::ZERO; MAX_Q * MAX_Q];
        let mut mul = [Felt::ZERO; MAX_Q * MAX_Q];
        for a in 0..q {
            let da = to_digits(a, p, e);
            for b in 0..q {
                let db = to_digits(b, p, e);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                let prod = if e == 1 {
                    vec![(a * b) % p]
                } else {
                    poly_mul_mod(&da, &db, p, modulus)
                };
                add[a as usize * MAX_Q + b as usize] = Felt(from_digits(&sum, p) as u8);
                mul[a as usize * MAX_Q + b as usize] = Felt(from_digits(&prod, p) as u8);
            }
        }
        let mut neg = [Felt::ZERO; MAX_Q];
        let mut inv = [Felt::ZERO; MAX_Q];
        for a in 0..n {
            for b in 0..n {
                if add[a * MAX_Q + b] == Felt::ZERO {
                    neg[a] = Felt(b as u8);
                }
                if mul[a * MAX_Q + b] == Felt::ONE {
                    inv[a] = Felt(b as u8);
                }
            }
        }
        Ok(FieldCtx {
            q,
            p,
            e,
            modulus: modulus.to_vec(),
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Coefficients of the defining polynomial, low degree first (empty for prime fields).
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    pub fn elem(&self, value: u8) -> Result<Felt> {
        if (value as u32) < self.q {
            Ok(Felt(value))
        } else {
            Err(Error::ElementOutOfRange { value, q: self.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Felt> + Clone {
        (0..self.q as u8).map(Felt)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Felt> + Clone {
        (1..self.q as u8).map(Felt)
    }

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        self.add[a.0 as usize * MAX_Q + b.0 as usize]
    }

    #[inline]
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        self.mul[a.0 as usize * MAX_Q + b.0 as usize]
    }

    #[inline]
    pub fn neg(&self, a: Felt) -> Felt {
        self.neg[a.0 as usize]
    }

    pub fn inv(&self, a: Felt) -> Result<Felt> {
        if a.is_zero() {
            Err(Error::DivisionByZero(self.q))
        } else {
            Ok(self.inv[a.0 as usize])
        }
    }

    /// Inverse without the zero check; callers guarantee `a != 0`.
    #[inline]
    pub(crate) fn inv_nz(&self, a: Felt) -> Felt {
        debug_assert!(!a.is_zero());
        self.inv[a.0 as usize]
    }

    pub fn pow(&self, a: Felt, mut exp: u64) -> Felt {
        let mut base = a;
        let mut acc = Felt::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Dot product of two equal-length vectors.
    #[inline]
    pub fn dot(&self, a: &[Felt], b: &[Felt]) -> Felt {
        a.iter()
            .zip(b)
            .fold(Felt::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// `dst += c * src`, coordinatewise.
    #[inline]
    pub(crate) fn axpy(&self, dst: &mut [Felt], c: Felt, src: &[Felt]) {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = self.add(*d, self.mul(c, s));
        }
    }

    #[inline]
    pub(crate) fn scale(&self, v: &mut [Felt], c: Felt) {
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<FieldCtx> {
        SUPPORTED_ORDERS.iter().map(|&q| FieldCtx::new(q).unwrap()).collect()
    }

    #[test]
    fn rejects_non_prime_powers() {
        for q in [0, 1, 6, 10, 11, 16, 25] {
            assert!(matches!(FieldCtx::new(q), Err(Error::UnsupportedField(x)) if x == q));
        }
    }

    #[test]
    fn small_identities() {
        let f2 = FieldCtx::new(2).unwrap();
        assert_eq!(f2.add(Felt::ONE, Felt::ONE), Felt::ZERO);

        let f3 = FieldCtx::new(3).unwrap();
        assert_eq!(f3.add(Felt(2), Felt(2)), Felt(1));

        let f5 = FieldCtx::new(5).unwrap();
        assert_eq!(f5.inv(Felt(2)).unwrap(), Felt(3));
        assert!(matches!(f5.inv(Felt::ZERO), Err(Error::DivisionByZero(5))));
    }

    #[test]
    fn gf4_generator_satisfies_modulus() {
        let f = FieldCtx::new(4).unwrap();
        let g = Felt(2);
        assert_eq!(f.mul(g, g), f.add(g, Felt::ONE));
        assert_eq!(f.characteristic(), 2);
        assert_eq!(f.degree(), 2);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in all_fields() {
            let els: Vec<Felt> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, Felt::ZERO), a);
                assert_eq!(f.mul(a, Felt::ONE), a);
                assert_eq!(f.add(a, f.neg(a)), Felt::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Felt::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_and_fermat() {
        for f in all_fields() {
            let q = f.q() as u64;
            for a in f.elements() {
                assert_eq!(f.pow(a, q), a, "GF({q})");
                if !a.is_zero() {
                    assert_eq!(f.pow(a, q - 1), Felt::ONE, "GF({q})");
                }
            }
        }
    }

    #[test]
    fn gf8_inverse_loop() {
        let f = FieldCtx::new(8).unwrap();
        for a in f.nonzero() {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Felt::ONE);
        }
    }

    #[test]
    fn deterministic_tables() {
        for q in SUPPORTED_ORDERS {
            assert_eq!(FieldCtx::new(q).unwrap(), FieldCtx::new(q).unwrap());
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        // a finite field's unit group is cyclic: some element has order q-1
        for f in all_fields() {
            let q = f.q() as u64;
            let has_primitive = f.nonzero().any(|g| (1..q - 1).all(|k| f.pow(g, k) != Felt::ONE));
            assert!(has_primitive, "GF({q})");
        }
    }
}
