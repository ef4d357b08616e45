//! Commutative target rings for augmentations and linearized complexes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Ring: Clone + Send + Sync + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Multiplicative inverse, if `a` is a unit.
    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.inverse(a).is_some()
    }

    fn pow_i(&self, a: &Self::Elem, e: i32) -> Option<Self::Elem> {
        let base = if e < 0 { self.inverse(a)? } else { a.clone() };
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Some(acc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn name(&self) -> String {
        "Z".into()
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn inverse(&self, a: &BigInt) -> Option<BigInt> {
        a.abs().is_one().then(|| a.clone())
    }
}

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// `p` must be prime.
    pub fn new(p: u64) -> Option<PrimeField> {
        (p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).then_some(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a % self.p == 0 {
            return None;
        }
        let mut r = 1u64;
        let mut b = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        Some(r)
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn name(&self) -> String {
        format!("F{}", self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        self.reduce(n)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        a % self.p == 0
    }
    fn inverse(&self, a: &u64) -> Option<u64> {
        self.inv(*a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn name(&self) -> String {
        "Q".into()
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn inverse(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
}

/// Univariate Laurent polynomial over `Q`: `t^shift * (c0 + c1 t + ...)`,
/// normalized so that `c0 != 0` (or empty for zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QLaurent {
    pub shift: i32,
    pub coeffs: Vec<BigRational>,
}

impl QLaurent {
    pub fn new(shift: i32, coeffs: Vec<BigRational>) -> QLaurent {
        let mut q = QLaurent { shift, coeffs };
        q.normalize();
        q
    }

    pub fn t(e: i32) -> QLaurent {
        QLaurent::new(e, vec![BigRational::one()])
    }

    pub fn constant(c: BigRational) -> QLaurent {
        QLaurent::new(0, vec![c])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.shift += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.shift = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree span (`max exponent - min exponent`); units have span 0.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.shift + k as i32;
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "t^{e}")?,
                (_, false) => write!(f, "{a}*t^{e}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LaurentQ;

impl Ring for LaurentQ {
    type Elem = QLaurent;

    fn name(&self) -> String {
        "Q[t^+-1]".into()
    }
    fn zero(&self) -> QLaurent {
        QLaurent::new(0, vec![])
    }
    fn one(&self) -> QLaurent {
        QLaurent::t(0)
    }
    fn from_int(&self, n: &BigInt) -> QLaurent {
        QLaurent::constant(BigRational::from_integer(n.clone()))
    }
    fn add(&self, a: &QLaurent, b: &QLaurent) -> QLaurent {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let lo = a.shift.min(b.shift);
        let hi = (a.shift + a.coeffs.len() as i32).max(b.shift + b.coeffs.len() as i32);
        let mut cs = vec![BigRational::zero(); (hi - lo) as usize];
        for (k, c) in a.coeffs.iter().enumerate() {
            cs[(a.shift - lo) as usize + k] += c;
        }
        for (k, c) in b.coeffs.iter().enumerate() {
            cs[(b.shift - lo) as usize + k] += c;
        }
        QLaurent::new(lo, cs)
    }
    fn mul(&self, a: &QLaurent, b: &QLaurent) -> QLaurent {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut cs = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                cs[i + j] += x * y;
            }
        }
        QLaurent::new(a.shift + b.shift, cs)
    }
    fn neg(&self, a: &QLaurent) -> QLaurent {
        QLaurent::new(a.shift, a.coeffs.iter().map(|c| -c).collect())
    }
    fn is_zero(&self, a: &QLaurent) -> bool {
        a.is_zero()
    }
    fn inverse(&self, a: &QLaurent) -> Option<QLaurent> {
        (a.coeffs.len() == 1).then(|| QLaurent::new(-a.shift, vec![a.coeffs[0].recip()]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.mul(&2, &3), 1);
        assert_eq!(f.inverse(&2), Some(3));
        assert_eq!(f.inverse(&0), None);
        assert_eq!(f.from_int(&BigInt::from(-7)), 3);
        assert!(PrimeField::new(9).is_none());
    }

    #[test]
    fn laurent_units_are_monomials() {
        let r = LaurentQ;
        let t = QLaurent::t(1);
        let x = r.add(&t, &r.one());
        assert!(r.inverse(&x).is_none());
        assert_eq!(r.mul(&t, &r.inverse(&t).unwrap()), r.one());
        assert_eq!(r.sub(&x, &x), r.zero());
        assert_eq!(x.to_string(), "1 + t^1");
    }
}
