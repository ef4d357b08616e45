//! Laurent polynomial coefficients with integer coefficients.
//!
//! Every coefficient in a knot DGA lives in a ring of the form
//! `Z[la^±1, mu^±1, U^±1, ...]`. Monomials are sparse signed exponent
//! vectors over [`Var`], coefficients are arbitrary precision integers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A commuting (or, in the fully noncommutative algebra, homology) variable.
///
/// Component labels are `0` for knots (printed without suffix) and `1..=r`
/// for links. `MuStrand(i)` is the strand-indexed meridian used while
/// composing the braid action on a link, before it is pushed down to the
/// component meridians.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Var {
    Lambda(u8),
    Mu(u8),
    U,
    V,
    MuStrand(u8),
}

impl Var {
    pub fn parse(name: &str) -> Option<Var> {
        let with_suffix = |prefix: &str| -> Option<u8> {
            let rest = name.strip_prefix(prefix)?;
            if rest.is_empty() {
                Some(0)
            } else if rest.chars().all(|c| c.is_ascii_digit()) {
                rest.parse().ok()
            } else {
                None
            }
        };
        match name {
            "U" => Some(Var::U),
            "V" => Some(Var::V),
            _ => {
                if let Some(i) = name.strip_prefix("mt") {
                    return i.parse().ok().map(Var::MuStrand);
                }
                if let Some(c) = with_suffix("la") {
                    return Some(Var::Lambda(c));
                }
                with_suffix("mu").map(Var::Mu)
            }
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Lambda(0) => write!(f, "la"),
            Var::Lambda(c) => write!(f, "la{c}"),
            Var::Mu(0) => write!(f, "mu"),
            Var::Mu(c) => write!(f, "mu{c}"),
            Var::U => write!(f, "U"),
            Var::V => write!(f, "V"),
            Var::MuStrand(i) => write!(f, "mt{i}"),
        }
    }
}

/// Monomial: sorted list of `(variable, nonzero exponent)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono(SmallVec<[(Var, i32); 3]>);

impl Mono {
    pub fn one() -> Mono {
        Mono(SmallVec::new())
    }

    pub fn var(v: Var, e: i32) -> Mono {
        let mut m = Mono::one();
        if e != 0 {
            m.0.push((v, e));
        }
        m
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, i32)>) -> Mono {
        let mut m = Mono::one();
        for (v, e) in pairs {
            m = m.mul(&Mono::var(v, e));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Var, i32)] {
        &self.0
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn total_degree(&self) -> i32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Mono(out)
    }

    pub fn inverse(&self) -> Mono {
        Mono(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn pow(&self, k: i32) -> Mono {
        if k == 0 {
            return Mono::one();
        }
        Mono(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Laurent polynomial over the integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Coeff {
    terms: Vec<(Mono, BigInt)>,
}

impl Coeff {
    pub fn zero() -> Coeff {
        Coeff { terms: Vec::new() }
    }

    pub fn one() -> Coeff {
        Coeff::int(1)
    }

    pub fn int(c: i64) -> Coeff {
        Coeff::term(Mono::one(), BigInt::from(c))
    }

    pub fn var(v: Var) -> Coeff {
        Coeff::term(Mono::var(v, 1), BigInt::one())
    }

    pub fn mono(m: Mono) -> Coeff {
        Coeff::term(m, BigInt::one())
    }

    pub fn term(m: Mono, c: BigInt) -> Coeff {
        if c.is_zero() {
            Coeff::zero()
        } else {
            Coeff { terms: vec![(m, c)] }
        }
    }

    /// Builds a coefficient from arbitrary (possibly repeated) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, BigInt)>) -> Coeff {
        let mut v: Vec<(Mono, BigInt)> = terms.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Mono, BigInt)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if lc.is_zero() {
                out.pop();
            }
        }
        Coeff { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// Integer value when the coefficient is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn neg(&self) -> Coeff {
        Coeff {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Coeff { terms: out }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        if self.is_zero() || other.is_zero() {
            return Coeff::zero();
        }
        if self.terms.len() == 1 && other.terms.len() == 1 {
            let (m1, c1) = &self.terms[0];
            let (m2, c2) = &other.terms[0];
            return Coeff::term(m1.mul(m2), c1 * c2);
        }
        Coeff::from_terms(
            self.terms
                .iter()
                .flat_map(|(m1, c1)| other.terms.iter().map(move |(m2, c2)| (m1.mul(m2), c1 * c2))),
        )
    }

    pub fn scale(&self, k: &BigInt) -> Coeff {
        if k.is_zero() {
            return Coeff::zero();
        }
        Coeff {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono) -> Coeff {
        // multiplying every monomial by the same unit keeps the order up to a
        // shift in degree, but not always within a degree, so re-sort
        Coeff::from_terms(self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())))
    }

    /// Inverse when the coefficient is `±monomial`.
    pub fn unit_inverse(&self) -> Option<Coeff> {
        match self.terms.as_slice() {
            [(m, c)] if c.abs().is_one() => Some(Coeff::term(m.inverse(), c.clone())),
            _ => None,
        }
    }

    /// Smallest exponent of `v` over all terms (0 when absent).
    pub fn min_exp(&self, v: Var) -> i32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).min().unwrap_or(0).min(0)
    }

    pub fn max_exp(&self, v: Var) -> i32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0).max(0)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.pairs().iter().map(|(v, _)| *v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) != 0)
    }

    /// Renames variables; merged terms are combined.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Coeff {
        Coeff::from_terms(self.terms.iter().map(|(m, c)| {
            (Mono::from_pairs(m.pairs().iter().map(|&(v, e)| (f(v), e))), c.clone())
        }))
    }

    /// Substitutes `v := value`. A negative power of `v` requires `value`
    /// to be a unit (`±monomial`).
    pub fn substitute(&self, v: Var, value: &Coeff) -> Result<Coeff> {
        if !self.contains_var(v) {
            return Ok(self.clone());
        }
        let inv = value.unit_inverse();
        let mut acc = Coeff::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let rest = Mono::from_pairs(m.pairs().iter().filter(|(w, _)| *w != v).copied());
            let base = Coeff::term(rest, c.clone());
            let factor = if e >= 0 {
                value.pow(e as u32)
            } else {
                let inv = inv.as_ref().ok_or_else(|| {
                    Error::NonUnit(format!("cannot substitute {value} for {v} in {self}: negative exponent"))
                })?;
                inv.pow((-e) as u32)
            };
            acc = acc.add(&base.mul(&factor));
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Coeff {
        let mut acc = Coeff::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}
