//! Smith normal form over Euclidean rings, with recorded transforms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::ring::{Integers, LaurentQ, PrimeField, QLaurent, Rationals, Ring};

/// A ring with division with remainder.
pub trait Euclidean: Ring {
    /// Size used for pivoting (ignored for zero).
    fn norm(&self, a: &Self::Elem) -> BigInt;
    /// `a = q b + r` with `r = 0` or `norm(r) < norm(b)`.
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem);
    /// A unit `u` such that `u * a` is the canonical associate of `a`.
    fn normalizing_unit(&self, a: &Self::Elem) -> Self::Elem;
}

impl Euclidean for Integers {
    fn norm(&self, a: &BigInt) -> BigInt {
        a.abs()
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        use num_integer::Integer;
        a.div_mod_floor(b)
    }
    fn normalizing_unit(&self, a: &BigInt) -> BigInt {
        if a.is_negative() {
            BigInt::from(-1)
        } else {
            BigInt::from(1)
        }
    }
}

impl Euclidean for PrimeField {
    fn norm(&self, _a: &u64) -> BigInt {
        BigInt::from(1)
    }
    fn div_rem(&self, a: &u64, b: &u64) -> (u64, u64) {
        (self.mul(a, &self.inverse(b).expect("division by zero")), 0)
    }
    fn normalizing_unit(&self, a: &u64) -> u64 {
        self.inverse(a).unwrap_or(1)
    }
}

impl Euclidean for Rationals {
    fn norm(&self, _a: &BigRational) -> BigInt {
        BigInt::from(1)
    }
    fn div_rem(&self, a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
        (a / b, BigRational::zero())
    }
    fn normalizing_unit(&self, a: &BigRational) -> BigRational {
        self.inverse(a).unwrap_or_else(|| self.one())
    }
}

impl Euclidean for LaurentQ {
    fn norm(&self, a: &QLaurent) -> BigInt {
        BigInt::from(a.span())
    }
    fn div_rem(&self, a: &QLaurent, b: &QLaurent) -> (QLaurent, QLaurent) {
        // polynomial long division of t^-shift(a) by t^-shift(b)
        let mut r: Vec<BigRational> = a.coeffs.clone();
        let bc = &b.coeffs;
        let db = bc.len() - 1;
        if r.len() <= db {
            return (self.zero(), a.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = &r[k + db] / &bc[db];
            for (j, x) in bc.iter().enumerate() {
                r[k + j] -= &c * x;
            }
            q[k] = c;
        }
        r.truncate(db);
        (QLaurent::new(a.shift - b.shift, q), QLaurent::new(a.shift, r))
    }
    fn normalizing_unit(&self, a: &QLaurent) -> QLaurent {
        match a.coeffs.last() {
            Some(c) => QLaurent::new(-a.shift, vec![c.recip()]),
            None => self.one(),
        }
    }
}

/// Dense matrix over a ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<E>>,
}

impl<E: Clone> Mat<E> {
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Vec<E>>) -> Mat<E> {
        assert_eq!(data.len(), rows);
        assert!(data.iter().all(|r| r.len() == cols));
        Mat { rows, cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i][j]
    }
}

pub fn zeros<R: Ring>(ring: &R, rows: usize, cols: usize) -> Mat<R::Elem> {
    Mat { rows, cols, data: vec![vec![ring.zero(); cols]; rows] }
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Mat<R::Elem> {
    let mut m = zeros(ring, n, n);
    for i in 0..n {
        m.data[i][i] = ring.one();
    }
    m
}

pub fn matmul<R: Ring>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert_eq!(a.cols, b.rows, "matrix shapes do not compose");
    let mut out = zeros(ring, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            if ring.is_zero(&a.data[i][k]) {
                continue;
            }
            for j in 0..b.cols {
                let t = ring.mul(&a.data[i][k], &b.data[k][j]);
                out.data[i][j] = ring.add(&out.data[i][j], &t);
            }
        }
    }
    out
}

pub fn is_zero_matrix<R: Ring>(ring: &R, m: &Mat<R::Elem>) -> bool {
    m.data.iter().all(|r| r.iter().all(|x| ring.is_zero(x)))
}

/// `p * m * q = d` with `d` diagonal; `p_inv`, `q_inv` are the inverses.
#[derive(Clone, Debug)]
pub struct Snf<E> {
    pub d: Mat<E>,
    /// Nonzero diagonal entries, normalized, each dividing the next.
    pub factors: Vec<E>,
    pub p: Mat<E>,
    pub p_inv: Mat<E>,
    pub q: Mat<E>,
    pub q_inv: Mat<E>,
}

impl<E> Snf<E> {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }
}

struct State<'a, R: Ring> {
    ring: &'a R,
    m: Mat<R::Elem>,
    p: Mat<R::Elem>,
    p_inv: Mat<R::Elem>,
    q: Mat<R::Elem>,
    q_inv: Mat<R::Elem>,
}

impl<R: Euclidean> State<'_, R> {
    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &R::Elem) {
        let r = self.ring;
        for k in 0..self.m.cols {
            let t = r.mul(c, &self.m.data[j][k]);
            self.m.data[i][k] = r.add(&self.m.data[i][k], &t);
        }
        for k in 0..self.p.cols {
            let t = r.mul(c, &self.p.data[j][k]);
            self.p.data[i][k] = r.add(&self.p.data[i][k], &t);
        }
        // inverse: col_j -= c * col_i
        for k in 0..self.p_inv.rows {
            let t = r.mul(c, &self.p_inv.data[k][i]);
            self.p_inv.data[k][j] = r.sub(&self.p_inv.data[k][j], &t);
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: &R::Elem) {
        let r = self.ring;
        for k in 0..self.m.rows {
            let t = r.mul(c, &self.m.data[k][j]);
            self.m.data[k][i] = r.add(&self.m.data[k][i], &t);
        }
        for k in 0..self.q.rows {
            let t = r.mul(c, &self.q.data[k][j]);
            self.q.data[k][i] = r.add(&self.q.data[k][i], &t);
        }
        // inverse: row_j -= c * row_i
        for k in 0..self.q_inv.cols {
            let t = r.mul(c, &self.q_inv.data[i][k]);
            self.q_inv.data[j][k] = r.sub(&self.q_inv.data[j][k], &t);
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.m.data.swap(i, j);
            self.p.data.swap(i, j);
            for row in &mut self.p_inv.data {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in &mut self.m.data {
                row.swap(i, j);
            }
            for row in &mut self.q.data {
                row.swap(i, j);
            }
            self.q_inv.data.swap(i, j);
        }
    }

    fn scale_row(&mut self, i: usize, u: &R::Elem) {
        let r = self.ring;
        let ui = r.inverse(u).expect("scaling by a unit");
        for x in &mut self.m.data[i] {
            *x = r.mul(u, x);
        }
        for x in &mut self.p.data[i] {
            *x = r.mul(u, x);
        }
        for row in &mut self.p_inv.data {
            row[i] = r.mul(&row[i], &ui);
        }
    }
}

pub fn smith_normal_form<R: Euclidean>(ring: &R, m: &Mat<R::Elem>) -> Snf<R::Elem> {
    let (rows, cols) = (m.rows, m.cols);
    let mut st = State {
        ring,
        m: m.clone(),
        p: identity(ring, rows),
        p_inv: identity(ring, rows),
        q: identity(ring, cols),
        q_inv: identity(ring, cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero pivot in the remaining block
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &st.m.data[i][j];
                if !ring.is_zero(x) {
                    let n = ring.norm(x);
                    if best.as_ref().is_none_or(|b| n < b.2) {
                        best = Some((i, j, n));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        st.swap_rows(t, pi);
        st.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if ring.is_zero(&st.m.data[i][t]) {
                    continue;
                }
                let (q, r) = ring.div_rem(&st.m.data[i][t], &st.m.data[t][t]);
                st.add_row(i, t, &ring.neg(&q));
                if !ring.is_zero(&r) {
                    st.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if ring.is_zero(&st.m.data[t][j]) {
                    continue;
                }
                let (q, r) = ring.div_rem(&st.m.data[t][j], &st.m.data[t][t]);
                st.add_col(j, t, &ring.neg(&q));
                if !ring.is_zero(&r) {
                    st.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the remaining block
            let mut fix = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    let (_, r) = ring.div_rem(&st.m.data[i][j], &st.m.data[t][t]);
                    if !ring.is_zero(&r) {
                        fix = Some(i);
                        break 'scan;
                    }
                }
            }
            match fix {
                Some(i) => {
                    let one = ring.one();
                    st.add_row(t, i, &one);
                }
                None => break,
            }
        }
        let u = ring.normalizing_unit(&st.m.data[t][t]);
        st.scale_row(t, &u);
        t += 1;
    }
    let factors = (0..rows.min(cols)).map(|i| st.m.data[i][i].clone()).filter(|x| !ring.is_zero(x)).collect();
    Snf { d: st.m, factors, p: st.p, p_inv: st.p_inv, q: st.q, q_inv: st.q_inv }
}

/// Checks `p m q = d`, that the transforms are invertible, and that `d` is
/// diagonal with the divisibility chain.
pub fn verify_snf<R: Euclidean>(ring: &R, m: &Mat<R::Elem>, s: &Snf<R::Elem>) -> bool {
    let pmq = matmul(ring, &matmul(ring, &s.p, m), &s.q);
    if pmq != s.d {
        return false;
    }
    if matmul(ring, &s.p, &s.p_inv) != identity(ring, m.rows) || matmul(ring, &s.q, &s.q_inv) != identity(ring, m.cols) {
        return false;
    }
    for i in 0..s.d.rows {
        for j in 0..s.d.cols {
            if i != j && !ring.is_zero(&s.d.data[i][j]) {
                return false;
            }
        }
    }
    s.factors.windows(2).all(|w| ring.is_zero(&ring.div_rem(&w[1], &w[0]).1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmat(rows: &[&[i64]]) -> Mat<BigInt> {
        let data: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let c = data.first().map_or(0, |r| r.len());
        Mat::from_rows(data.len(), c, data)
    }

    fn factors(rows: &[&[i64]]) -> Vec<i64> {
        let m = zmat(rows);
        let s = smith_normal_form(&Integers, &m);
        assert!(verify_snf(&Integers, &m, &s));
        s.factors.iter().map(|x| x.try_into().unwrap()).collect()
    }

    #[test]
    fn integer_examples() {
        assert_eq!(factors(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), vec![1, 1, 1]);
        assert_eq!(factors(&[&[2, 4], &[6, 8]]), vec![2, 4]);
        assert_eq!(factors(&[&[0, 0], &[0, 0]]), Vec::<i64>::new());
        assert_eq!(factors(&[&[2, 0], &[0, 3]]), vec![1, 6]);
        assert_eq!(factors(&[&[6, 4, 2], &[4, 6, 8]]), vec![2, 10]);
    }

    #[test]
    fn laurent_example() {
        let r = LaurentQ;
        let q = |c: &[i64], s: i32| QLaurent::new(s, c.iter().map(|&x| BigRational::from_integer(x.into())).collect());
        // diag(1 - t, 1 + t) ~ diag(1, 1 - t^2)
        let m = Mat::from_rows(2, 2, vec![vec![q(&[1, -1], 0), r.zero()], vec![r.zero(), q(&[1, 1], 3)]]);
        let s = smith_normal_form(&r, &m);
        assert!(verify_snf(&r, &m, &s));
        assert_eq!(s.factors, vec![r.one(), q(&[-1, 0, 1], 0)]);
    }
}
