//! Matrices with noncommutative polynomial entries.

use std::fmt;

use crate::error::{Error, Result};
use crate::ncpoly::NCPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<NCPoly>,
}

impl NCMatrix {
    pub fn zeros(rows: usize, cols: usize) -> NCMatrix {
        NCMatrix { rows, cols, entries: vec![NCPoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> NCMatrix {
        NCMatrix::from_fn(n, n, |i, j| if i == j { NCPoly::one() } else { NCPoly::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> NCPoly) -> NCMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        NCMatrix { rows, cols, entries }
    }

    pub fn diagonal(diag: Vec<NCPoly>) -> NCMatrix {
        let n = diag.len();
        let mut m = NCMatrix::zeros(n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Zero-based entry access.
    pub fn get(&self, i: usize, j: usize) -> Result<&NCPoly> {
        if i >= self.rows || j >= self.cols {
            return Err(Error::Index(format!("entry ({i},{j}) of a {}x{} matrix", self.rows, self.cols)));
        }
        Ok(&self.entries[i * self.cols + j])
    }

    pub fn set(&mut self, i: usize, j: usize, p: NCPoly) -> Result<()> {
        if i >= self.rows || j >= self.cols {
            return Err(Error::Index(format!("entry ({i},{j}) of a {}x{} matrix", self.rows, self.cols)));
        }
        self.entries[i * self.cols + j] = p;
        Ok(())
    }

    pub(crate) fn at(&self, i: usize, j: usize) -> &NCPoly {
        &self.entries[i * self.cols + j]
    }

    pub(crate) fn at_mut(&mut self, i: usize, j: usize) -> &mut NCPoly {
        &mut self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[NCPoly] {
        &self.entries
    }

    pub fn mul(&self, other: &NCMatrix) -> Result<NCMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = NCMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        out.at_mut(i, j).add_assign(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, other: &NCMatrix, f: impl Fn(&NCPoly, &NCPoly) -> NCPoly) -> Result<NCMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} against {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(NCMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &NCMatrix) -> Result<NCMatrix> {
        self.zip(other, NCPoly::add)
    }

    pub fn sub(&self, other: &NCMatrix) -> Result<NCMatrix> {
        self.zip(other, NCPoly::sub)
    }

    pub fn map(&self, f: impl Fn(&NCPoly) -> NCPoly) -> NCMatrix {
        NCMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    /// `L * M * L^-1` for a diagonal `L` with unit entries.
    pub fn conj_diag(&self, diag: &[NCPoly]) -> Result<NCMatrix> {
        if self.rows != self.cols || diag.len() != self.rows {
            return Err(Error::Dimension(format!(
                "conjugating a {}x{} matrix by a diagonal of length {}",
                self.rows,
                self.cols,
                diag.len()
            )));
        }
        let inv = diag
            .iter()
            .map(|d| d.unit_inverse().ok_or_else(|| Error::NonUnit(format!("diagonal entry {d}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(NCMatrix::from_fn(self.rows, self.cols, |i, j| diag[i].mul(self.at(i, j)).mul(&inv[j])))
    }

    /// `diag(d) * M`
    pub fn left_diag(&self, diag: &[NCPoly]) -> NCMatrix {
        NCMatrix::from_fn(self.rows, self.cols, |i, j| diag[i].mul(self.at(i, j)))
    }

    /// `M * diag(d)`
    pub fn right_diag(&self, diag: &[NCPoly]) -> NCMatrix {
        NCMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).mul(&diag[j]))
    }
}

impl fmt::Display for NCMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::{AlgebraMode, Letter};

    fn sample() -> NCMatrix {
        NCMatrix::from_fn(2, 2, |i, j| NCPoly::letter(Letter::a((i + 1) as u8, (j + 2) as u8)))
    }

    #[test]
    fn identity_is_neutral() {
        let m = sample();
        assert_eq!(NCMatrix::identity(2).mul(&m).unwrap(), m);
        assert_eq!(m.mul(&NCMatrix::identity(2)).unwrap(), m);
        assert_eq!(m.conj_diag(&[NCPoly::one(), NCPoly::one()]).unwrap(), m);
    }

    #[test]
    fn dimension_and_bounds_errors() {
        let m = sample();
        assert!(matches!(m.mul(&NCMatrix::identity(3)), Err(Error::Dimension(_))));
        assert!(matches!(m.sub(&NCMatrix::identity(3)), Err(Error::Dimension(_))));
        assert!(matches!(m.get(2, 0), Err(Error::Index(_))));
        let not_unit = NCPoly::parse("1 + mu", AlgebraMode::Commuted).unwrap();
        assert!(m.conj_diag(&[not_unit, NCPoly::one()]).is_err());
    }

    #[test]
    fn conjugation_by_monomials() {
        let l = NCPoly::parse("la*mu^3*U^-1", AlgebraMode::Commuted).unwrap();
        let m = sample().conj_diag(&[l, NCPoly::one()]).unwrap();
        assert_eq!(m.get(0, 0).unwrap().to_string(), "a12");
        assert_eq!(m.get(0, 1).unwrap().to_string(), "(la*mu^3*U^-1)*a13");
        assert_eq!(m.get(1, 0).unwrap().to_string(), "(la^-1*mu^-3*U)*a22");
    }
}
