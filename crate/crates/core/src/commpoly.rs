//! Sparse multivariate (Laurent) polynomials with integer coefficients.
//!
//! Terms are keyed by exponent vectors over a fixed, ordered variable list;
//! the map order is lexicographic with the first variable most significant,
//! so the last key is the lex-leading monomial.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CommPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl fmt::Debug for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CommPoly[{}]({})", self.vars.join(","), self)
    }
}

impl CommPoly {
    pub fn zero(vars: &[&str]) -> CommPoly {
        CommPoly::zero_in(Arc::new(vars.iter().map(|s| s.to_string()).collect()))
    }

    pub fn zero_in(vars: Arc<Vec<String>>) -> CommPoly {
        CommPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant_in(vars: Arc<Vec<String>>, c: BigInt) -> CommPoly {
        let mut p = CommPoly::zero_in(vars);
        let n = p.vars.len();
        p.add_term(vec![0; n], c);
        p
    }

    pub fn one_in(vars: Arc<Vec<String>>) -> CommPoly {
        CommPoly::constant_in(vars, BigInt::one())
    }

    /// The variable `name`, which must be in `vars`.
    pub fn var_in(vars: Arc<Vec<String>>, name: &str) -> Result<CommPoly> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Config(format!("unknown variable {name}")))?;
        Ok(CommPoly::monomial_in(vars, i, 1))
    }

    pub fn monomial_in(vars: Arc<Vec<String>>, i: usize, e: i32) -> CommPoly {
        let mut exps = vec![0; vars.len()];
        exps[i] = e;
        let mut p = CommPoly::zero_in(vars);
        p.add_term(exps, BigInt::one());
        p
    }

    pub fn from_terms(vars: Arc<Vec<String>>, terms: impl IntoIterator<Item = (Vec<i32>, BigInt)>) -> CommPoly {
        let mut p = CommPoly::zero_in(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn vars_arc(&self) -> Arc<Vec<String>> {
        self.vars.clone()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<i32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<i32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(e.len(), self.vars.len());
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_ring(&self, other: &CommPoly) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variable lists: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    /// Re-embeds into a larger (or reordered) variable list.
    pub fn with_vars(&self, vars: Arc<Vec<String>>) -> Result<CommPoly> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Config(format!("variables {:?} not contained in {:?}", self.vars, vars)))?;
        let n = vars.len();
        let mut out = CommPoly::zero_in(vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; n];
            for (k, &x) in e.iter().enumerate() {
                ne[map[k]] = x;
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_default())
    }

    pub fn neg(&self) -> CommPoly {
        CommPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn add(&self, other: &CommPoly) -> CommPoly {
        self.same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &CommPoly) -> CommPoly {
        self.same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &CommPoly) -> CommPoly {
        self.same_ring(other);
        let mut out = CommPoly::zero_in(self.vars.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> CommPoly {
        let mut out = CommPoly::zero_in(self.vars.clone());
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn mul_monomial(&self, shift: &[i32]) -> CommPoly {
        CommPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> CommPoly {
        let mut acc = CommPoly::one_in(self.vars.clone());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn degree(&self, x: usize) -> i32 {
        self.terms.keys().map(|e| e[x]).max().unwrap_or(0)
    }

    pub fn min_degree(&self, x: usize) -> i32 {
        self.terms.keys().map(|e| e[x]).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> i32 {
        self.terms.keys().map(|e| e.iter().sum::<i32>()).max().unwrap_or(0)
    }

    pub fn contains_var(&self, x: usize) -> bool {
        self.terms.keys().any(|e| e[x] != 0)
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&x| self.contains_var(x)).collect()
    }

    pub fn is_laurent(&self) -> bool {
        self.terms.keys().any(|e| e.iter().any(|&x| x < 0))
    }

    /// Coefficients as a polynomial in `x`: entry `k` multiplies `x^k`.
    /// Requires nonnegative exponents in `x`.
    pub fn coeffs_in(&self, x: usize) -> Vec<CommPoly> {
        let d = self.degree(x).max(0) as usize;
        let mut out = vec![CommPoly::zero_in(self.vars.clone()); d + 1];
        for (e, c) in &self.terms {
            let k = e[x];
            assert!(k >= 0, "negative exponent in coeffs_in");
            let mut e2 = e.clone();
            e2[x] = 0;
            out[k as usize].add_term(e2, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(vars: Arc<Vec<String>>, x: usize, coeffs: &[CommPoly]) -> CommPoly {
        let mut out = CommPoly::zero_in(vars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, v) in &c.terms {
                let mut e2 = e.clone();
                e2[x] += k as i32;
                out.add_term(e2, v.clone());
            }
        }
        out
    }

    pub fn leading_coeff_in(&self, x: usize) -> CommPoly {
        self.coeffs_in(x).pop().unwrap_or_else(|| CommPoly::zero_in(self.vars.clone()))
    }

    pub fn derivative(&self, x: usize) -> CommPoly {
        let mut out = CommPoly::zero_in(self.vars.clone());
        for (e, c) in &self.terms {
            if e[x] != 0 {
                let mut e2 = e.clone();
                e2[x] -= 1;
                out.add_term(e2, c * BigInt::from(e[x]));
            }
        }
        out
    }

    /// Substitutes a polynomial for `x` (nonnegative exponents of `x` only,
    /// unless `value` is a unit monomial).
    pub fn substitute(&self, x: usize, value: &CommPoly) -> Result<CommPoly> {
        self.same_ring(value);
        let inv = value.monomial_inverse();
        let mut out = CommPoly::zero_in(self.vars.clone());
        let mut powers: BTreeMap<i32, CommPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[x];
            let pw = match powers.get(&k) {
                Some(p) => p.clone(),
                None => {
                    let p = if k >= 0 {
                        value.pow(k as u32)
                    } else {
                        inv.as_ref()
                            .ok_or_else(|| Error::NonUnit(format!("negative power of {} substituted by {value}", self.vars[x])))?
                            .pow((-k) as u32)
                    };
                    powers.insert(k, p.clone());
                    p
                }
            };
            let mut e2 = e.clone();
            e2[x] = 0;
            let mut t = CommPoly::zero_in(self.vars.clone());
            t.add_term(e2, c.clone());
            out = out.add(&t.mul(&pw));
        }
        Ok(out)
    }

    /// Applies a monomial change of variables: variable `k` is replaced by
    /// `sign_k * prod_j x_j^{images[k][j]}`.
    pub fn monomial_map(&self, images: &[(i32, Vec<i32>)]) -> CommPoly {
        let n = self.vars.len();
        let mut out = CommPoly::zero_in(self.vars.clone());
        for (e, c) in &self.terms {
            let mut ne = vec![0; n];
            let mut sign = 1;
            for (k, &x) in e.iter().enumerate() {
                let (s, img) = &images[k];
                for j in 0..n {
                    ne[j] += img[j] * x;
                }
                if *s < 0 && x.rem_euclid(2) == 1 {
                    sign = -sign;
                }
            }
            out.add_term(ne, c * BigInt::from(sign));
        }
        out
    }

    pub fn monomial_inverse(&self) -> Option<CommPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if !c.abs().is_one() {
            return None;
        }
        let mut out = CommPoly::zero_in(self.vars.clone());
        out.add_term(e.iter().map(|x| -x).collect(), c.clone());
        Some(out)
    }

    /// Value mod `p` at a point (all variables assigned; negative powers
    /// need invertible values).
    pub fn eval_mod(&self, p: u64, point: &[u64]) -> Option<u64> {
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = c.mod_floor(&BigInt::from(p)).to_u64().unwrap();
            for (k, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let base = if x < 0 { inv_mod(point[k], p)? } else { point[k] % p };
                t = t * pow_mod(base, x.unsigned_abs() as u64, p) % p;
            }
            acc = (acc + t) % p;
        }
        Some(acc)
    }

    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Smallest exponent of every variable.
    pub fn monomial_gcd(&self) -> Vec<i32> {
        let n = self.vars.len();
        let mut m = vec![i32::MAX; n];
        for e in self.terms.keys() {
            for k in 0..n {
                m[k] = m[k].min(e[k]);
            }
        }
        if self.terms.is_empty() {
            return vec![0; n];
        }
        m
    }

    /// Divides out the monomial gcd (also clears Laurent denominators).
    /// Returns the result and the monomial that was divided out.
    pub fn strip_monomial(&self) -> (CommPoly, Vec<i32>) {
        let m = self.monomial_gcd();
        let neg: Vec<i32> = m.iter().map(|x| -x).collect();
        (self.mul_monomial(&neg), m)
    }

    /// Multiplies by the smallest monomial making all exponents
    /// nonnegative; returns the monomial used.
    pub fn clear_laurent(&self) -> (CommPoly, Vec<i32>) {
        let m: Vec<i32> = self.monomial_gcd().iter().map(|&x| (-x).max(0)).collect();
        (self.mul_monomial(&m), m)
    }

    pub fn leading_term(&self) -> Option<(&Vec<i32>, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Primitive, monomial-free, with positive lex-leading coefficient.
    pub fn normalize(&self) -> CommPoly {
        if self.is_zero() {
            return self.clone();
        }
        let (p, _) = self.strip_monomial();
        let mut g = p.content();
        if p.leading_term().unwrap().1.is_negative() {
            g = -g;
        }
        p.div_integer(&g)
    }

    fn div_integer(&self, g: &BigInt) -> CommPoly {
        CommPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), c / g)).collect() }
    }

    /// Equality up to a unit `±monomial`.
    pub fn equal_up_to_units(&self, other: &CommPoly) -> bool {
        self.normalize() == other.normalize()
    }

    /// Exact division in `Z[x_1..x_n]` (nonnegative exponents); `None` if
    /// `other` does not divide `self`.
    pub fn div_exact(&self, other: &CommPoly) -> Option<CommPoly> {
        self.same_ring(other);
        if other.is_zero() {
            return None;
        }
        let (le, lc) = other.leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = CommPoly::zero_in(self.vars.clone());
        while let Some((e, c)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            let qe: Vec<i32> = e.iter().zip(&le).map(|(a, b)| a - b).collect();
            if qe.iter().any(|&x| x < 0) {
                return None;
            }
            let (qc, r) = c.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            let mut t = CommPoly::zero_in(self.vars.clone());
            t.add_term(qe, qc);
            rem = rem.sub(&t.mul(other));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Exact division in the Laurent polynomial ring.
    pub fn div_laurent(&self, other: &CommPoly) -> Option<CommPoly> {
        let (a, ma) = self.strip_monomial();
        let (b, mb) = other.strip_monomial();
        let q = a.div_exact(&b)?;
        let shift: Vec<i32> = ma.iter().zip(&mb).map(|(x, y)| x - y).collect();
        Some(q.mul_monomial(&shift))
    }

    /// Pseudo-remainder of `self` by `b` with respect to `x`.
    pub fn pseudo_rem(&self, b: &CommPoly, x: usize) -> CommPoly {
        let db = b.degree(x);
        let lb = b.leading_coeff_in(x);
        let mut r = self.clone();
        while !r.is_zero() && r.degree(x) >= db {
            let dr = r.degree(x);
            let lr = r.leading_coeff_in(x);
            let xs = CommPoly::monomial_in(self.vars.clone(), x, dr - db);
            r = r.mul(&lb).sub(&b.mul(&lr).mul(&xs));
        }
        r
    }

    /// Content with respect to `x`: gcd of the coefficients in `x`.
    pub fn content_in(&self, x: usize) -> CommPoly {
        let mut g = CommPoly::zero_in(self.vars.clone());
        for c in self.coeffs_in(x) {
            g = gcd(&g, &c);
            if g.is_constant() && g.constant_value().is_some_and(|v| v.abs().is_one()) {
                break;
            }
        }
        g
    }

    pub fn primitive_part_in(&self, x: usize) -> CommPoly {
        let c = self.content_in(x);
        if c.is_zero() {
            return self.clone();
        }
        self.div_exact(&c).expect("content divides")
    }

    /// `p / gcd(p, dp/dx_1, ..., dp/dx_n)`, normalized.
    pub fn squarefree_part(&self) -> CommPoly {
        let p = self.normalize();
        if p.certainly_squarefree() {
            return p;
        }
        let mut g = p.clone();
        for x in p.support() {
            g = gcd(&g, &p.derivative(x));
        }
        if g.is_constant() {
            return p;
        }
        p.div_exact(&g).expect("gcd divides").normalize()
    }

    /// Sufficient test: for each variable `x`, some integer specialization
    /// of the others keeps `deg_x` and leaves a squarefree univariate
    /// image. A repeated factor has positive degree in some `x`, and would
    /// survive into that image. Assumes `self` is primitive.
    pub fn certainly_squarefree(&self) -> bool {
        if self.is_laurent() {
            return false;
        }
        const TRIES: [[i64; 2]; 3] = [[2, 3], [-3, 5], [7, -2]];
        self.support().into_iter().all(|x| {
            TRIES.iter().any(|t| {
                let vals: Vec<BigInt> =
                    (0..self.vars.len()).map(|k| BigInt::from(t[k % 2] + k as i64)).collect();
                let u = self.specialize_except(x, &vals);
                u.degree(x) == self.degree(x) && gcd(&u, &u.derivative(x)).is_constant()
            })
        })
    }

    /// Evaluates every variable but `x` at the given integers.
    fn specialize_except(&self, x: usize, vals: &[BigInt]) -> CommPoly {
        let n = self.vars.len();
        let mut out = CommPoly::zero_in(self.vars.clone());
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for k in (0..n).filter(|&k| k != x) {
                v *= num_traits::pow(vals[k].clone(), e[k] as usize);
            }
            let mut ne = vec![0; n];
            ne[x] = e[x];
            out.add_term(ne, v);
        }
        out
    }

    pub fn parse(text: &str, vars: Arc<Vec<String>>) -> Result<CommPoly> {
        let toks = lex(text)?;
        let mut parser = PolyParser { toks, pos: 0, vars };
        let p = parser.sum()?;
        if parser.pos != parser.toks.len() {
            return Err(Error::Parse(format!("trailing input in polynomial {text:?}")));
        }
        Ok(p)
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    (a % p != 0).then(|| pow_mod(a, p - 2, p))
}

/// Greatest common divisor in `Z[x_1..x_n]`, normalized (positive
/// lex-leading coefficient). Recursive primitive remainder sequences.
pub fn gcd(a: &CommPoly, b: &CommPoly) -> CommPoly {
    a.same_ring(b);
    if a.is_zero() {
        return sign_normal(b);
    }
    if b.is_zero() {
        return sign_normal(a);
    }
    let x = match (0..a.vars.len()).find(|&x| a.contains_var(x) || b.contains_var(x)) {
        Some(x) => x,
        None => {
            let g = a.constant_value().unwrap().gcd(&b.constant_value().unwrap());
            return CommPoly::constant_in(a.vars.clone(), g);
        }
    };
    if a.is_laurent() || b.is_laurent() {
        let (a2, _) = a.clear_laurent();
        let (b2, _) = b.clear_laurent();
        return gcd(&a2, &b2);
    }
    let ca = a.content_in(x);
    let cb = b.content_in(x);
    let cont = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).unwrap();
    let mut q = b.div_exact(&cb).unwrap();
    if p.degree(x) < q.degree(x) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        if q.degree(x) == 0 {
            return sign_normal(&cont);
        }
        let r = p.pseudo_rem(&q, x);
        p = q;
        q = if r.is_zero() { r } else { r.primitive_part_in(x) };
    }
    sign_normal(&cont.mul(&p.primitive_part_in(x)))
}

fn sign_normal(p: &CommPoly) -> CommPoly {
    match p.leading_term() {
        Some((_, c)) if c.is_negative() => p.neg(),
        _ => p.clone(),
    }
}

/// Sylvester resultant in `x`, with `res(x - a, x - b) = a - b`.
pub fn resultant(f: &CommPoly, g: &CommPoly, x: usize) -> Result<CommPoly> {
    f.same_ring(g);
    let (m, n) = (f.degree(x), g.degree(x));
    if m <= 0 || n <= 0 || f.min_degree(x) < 0 || g.min_degree(x) < 0 {
        return Err(Error::Precondition(format!(
            "resultant in {} needs positive degree in both inputs",
            f.vars[x]
        )));
    }
    let (m, n) = (m as usize, n as usize);
    let fc = f.coeffs_in(x);
    let gc = g.coeffs_in(x);
    let size = m + n;
    let zero = CommPoly::zero_in(f.vars.clone());
    let mut mat = vec![vec![zero.clone(); size]; size];
    for r in 0..n {
        for k in 0..=m {
            mat[r][r + k] = fc[m - k].clone();
        }
    }
    for r in 0..m {
        for k in 0..=n {
            mat[n + r][r + k] = gc[n - k].clone();
        }
    }
    Ok(bareiss_det(mat))
}

/// Fraction-free determinant.
pub fn bareiss_det(mut m: Vec<Vec<CommPoly>>) -> CommPoly {
    let n = m.len();
    if n == 0 {
        panic!("empty determinant");
    }
    let vars = m[0][0].vars.clone();
    let mut sign = 1i32;
    let mut prev = CommPoly::one_in(vars.clone());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return CommPoly::zero_in(vars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        d.neg()
    } else {
        d
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| if x == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], x) })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum PTok {
    Int(BigInt),
    Name(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<PTok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push(PTok::Int(cs[st..i].iter().collect::<String>().parse().unwrap()));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(PTok::Name(cs[st..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(PTok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in polynomial")));
        }
    }
    Ok(out)
}

struct PolyParser {
    toks: Vec<PTok>,
    pos: usize,
    vars: Arc<Vec<String>>,
}

impl PolyParser {
    fn peek(&self) -> Option<&PTok> {
        self.toks.get(self.pos)
    }

    fn sum(&mut self) -> Result<CommPoly> {
        let mut acc = CommPoly::zero_in(self.vars.clone());
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(PTok::Sym('+')) => {
                    self.pos += 1;
                    false
                }
                Some(PTok::Sym('-')) => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.product()?;
            acc = if neg { acc.sub(&t) } else { acc.add(&t) };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<CommPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(PTok::Sym('*')) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(PTok::Int(_)) | Some(PTok::Name(_)) | Some(PTok::Sym('(')) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<CommPoly> {
        let base = self.atom()?;
        if let Some(PTok::Sym('^')) = self.peek() {
            self.pos += 1;
            let neg = if let Some(PTok::Sym('-')) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = match self.toks.get(self.pos) {
                Some(PTok::Int(k)) => k.to_u32().ok_or_else(|| Error::Parse("exponent too large".into()))?,
                _ => return Err(Error::Parse("expected an exponent after ^".into())),
            };
            self.pos += 1;
            if neg {
                let inv = base
                    .monomial_inverse()
                    .ok_or_else(|| Error::Parse(format!("negative power of non-monomial {base}")))?;
                return Ok(inv.pow(e));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<CommPoly> {
        match self.toks.get(self.pos).cloned() {
            Some(PTok::Int(k)) => {
                self.pos += 1;
                Ok(CommPoly::constant_in(self.vars.clone(), k))
            }
            Some(PTok::Name(name)) => {
                self.pos += 1;
                CommPoly::var_in(self.vars.clone(), &name).map_err(|_| Error::Parse(format!("unknown variable {name:?}")))
            }
            Some(PTok::Sym('(')) => {
                self.pos += 1;
                let p = self.sum()?;
                if self.toks.get(self.pos) != Some(&PTok::Sym(')')) {
                    return Err(Error::Parse("missing closing parenthesis".into()));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(PTok::Sym('-')) => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            other => Err(Error::Parse(format!("unexpected token {other:?} in polynomial"))),
        }
    }
}

/// Variable list `[la, mu, U]` used for augmentation polynomials.
pub fn lmu_vars() -> Arc<Vec<String>> {
    Arc::new(vec!["la".into(), "mu".into(), "U".into()])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Arc<Vec<String>> {
        Arc::new(names.iter().map(|s| s.to_string()).collect())
    }

    fn p(s: &str, v: &Arc<Vec<String>>) -> CommPoly {
        CommPoly::parse(s, v.clone()).unwrap()
    }

    #[test]
    fn arithmetic_and_printing() {
        let v = vars(&["x", "y"]);
        let a = p("(x - y)*(x + y)", &v);
        assert_eq!(a, p("x^2 - y^2", &v));
        assert_eq!(a.to_string(), "x^2 - y^2");
        assert_eq!(p("x^-1*x", &v), p("1", &v));
    }

    #[test]
    fn resultant_conventions() {
        let v = vars(&["x", "a", "b"]);
        let r = resultant(&p("x - a", &v), &p("x - b", &v), 0).unwrap();
        assert_eq!(r, p("a - b", &v));
        let r = resultant(&p("x^2 - 1", &v), &p("x - 2", &v), 0).unwrap();
        assert_eq!(r, p("3", &v));
        let f = p("x^2 + a*x + b", &v);
        assert!(resultant(&f, &f, 0).unwrap().is_zero());
        assert!(resultant(&p("a", &v), &f, 0).is_err());
    }

    #[test]
    fn gcd_and_division() {
        let v = vars(&["x", "y", "z"]);
        let f = p("(x - y)*(x*z + 1)*(y + 2)", &v);
        let g = p("(x - y)*(y + 2)*(z - 3)", &v);
        assert_eq!(gcd(&f, &g), p("(x - y)*(y + 2)", &v));
        assert_eq!(f.div_exact(&p("y + 2", &v)).unwrap(), p("(x - y)*(x*z + 1)", &v));
        assert!(f.div_exact(&p("z - 3", &v)).is_none());
        assert_eq!(gcd(&p("6*x", &v), &p("4*x^2", &v)), p("2*x", &v));
    }

    #[test]
    fn squarefree_and_normalization() {
        let v = vars(&["x", "y"]);
        let f = p("-3*x^2*(x - y)^2*(y + 1)", &v);
        assert_eq!(f.squarefree_part(), p("(x - y)*(y + 1)", &v));
        let g = p("-2*x^-1*y^2 + 4*y^3", &v);
        assert_eq!(g.normalize(), p("2*x*y - 1", &v));
        assert!(g.equal_up_to_units(&p("1 - 2*x*y", &v)));
    }

    #[test]
    fn eval_mod_p() {
        let v = vars(&["x", "y"]);
        let f = p("x*y - x^-1", &v);
        assert_eq!(f.eval_mod(5, &[2, 3]), Some((6 + 5 - 3) % 5));
        assert_eq!(f.eval_mod(5, &[0, 3]), None);
    }

    #[test]
    fn laurent_division() {
        let v = vars(&["U"]);
        let f = p("-2*U^4 + 3*U^3 - U^2", &v);
        let q = f.div_laurent(&p("-U^4", &v)).unwrap();
        assert_eq!(q, p("2 - 3*U^-1 + U^-2", &v));
        assert_eq!(q.div_laurent(&p("U - 1", &v)).unwrap(), p("2*U^-1 - U^-2", &v));
        assert!(f.div_laurent(&p("U + 1", &v)).is_none());
    }

    #[test]
    fn squarefree_certificate() {
        let v = vars(&["x", "y"]);
        assert!(p("x^2*y + y + 1", &v).certainly_squarefree());
        assert!(!p("(x + y)^2*(x - 1)", &v).certainly_squarefree());
        // a square factor free of x must still be caught
        assert!(!p("(y + 1)^2*x + (y + 1)^2", &v).certainly_squarefree());
        assert_eq!(p("(y + 1)^2*(x - 1)", &v).squarefree_part(), p("x*y + x - y - 1", &v));
    }
}
