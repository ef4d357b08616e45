//! Linearized homology of a DGA with respect to an augmentation.

use std::collections::BTreeMap;
use std::fmt;

use log::debug;
use serde::Serialize;

use crate::augment::Augmentation;
use crate::dga::Dga;
use crate::error::{Error, Result};
use crate::ncpoly::{Letter, NCPoly};
use crate::snf::{is_zero_matrix, matmul, smith_normal_form, zeros, Euclidean, Mat};

/// Free chain complex with one basis per degree `0..=top`.
#[derive(Clone, Debug)]
pub struct ChainComplex<E> {
    pub bases: Vec<Vec<Letter>>,
    /// `boundaries[k]` is the matrix of `C_{k+1} -> C_k`: rows indexed by
    /// `bases[k]`, columns by `bases[k+1]`.
    pub boundaries: Vec<Mat<E>>,
}

impl<E: Clone> ChainComplex<E> {
    pub fn rank(&self, k: usize) -> usize {
        self.bases.get(k).map_or(0, |b| b.len())
    }

    /// Matrix of `C_k -> C_{k-1}`.
    pub fn boundary(&self, k: usize) -> Option<&Mat<E>> {
        k.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupSummand {
    pub free_rank: usize,
    /// Non-unit invariant factors, each dividing the next (as text).
    pub torsion: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct HomologyResult<E> {
    pub ring: String,
    pub degrees: Vec<(usize, usize, Vec<E>)>,
}

impl<E: fmt::Display> HomologyResult<E> {
    pub fn free_rank(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, |d| d.1)
    }

    pub fn torsion(&self, k: usize) -> &[E] {
        self.degrees.get(k).map_or(&[], |d| &d.2)
    }

    pub fn summary(&self) -> BTreeMap<usize, GroupSummand> {
        self.degrees
            .iter()
            .map(|(k, r, t)| (*k, GroupSummand { free_rank: *r, torsion: t.iter().map(|x| x.to_string()).collect() }))
            .collect()
    }

    /// Group in degree `k`, e.g. `Z + (Z/3)^3`.
    pub fn describe(&self, k: usize) -> String {
        let (r, t) = match self.degrees.get(k) {
            Some((_, r, t)) => (*r, t),
            None => return "0".into(),
        };
        let mut parts = Vec::new();
        match r {
            0 => {}
            1 => parts.push(self.ring.clone()),
            _ => parts.push(format!("{}^{r}", self.ring)),
        }
        let mut grouped: Vec<(String, usize)> = Vec::new();
        for x in t {
            let s = x.to_string();
            match grouped.last_mut() {
                Some((g, c)) if *g == s => *c += 1,
                _ => grouped.push((s, 1)),
            }
        }
        for (g, c) in grouped {
            let q = if self.ring == "Z" { format!("Z/{g}") } else { format!("{}/({g})", self.ring) };
            parts.push(if c == 1 { q } else { format!("({q})^{c}") });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Constant and linear part of `p` after shifting degree-0 generators by
/// their augmentation values.
fn linearize<R: Euclidean>(p: &NCPoly, eps: &Augmentation<R>) -> Result<(R::Elem, BTreeMap<Letter, R::Elem>)> {
    let ring = &eps.target;
    let no_gens = BTreeMap::new();
    let mut constant = ring.zero();
    let mut linear: BTreeMap<Letter, R::Elem> = BTreeMap::new();
    for (w, c) in p.terms() {
        let cv = NCPoly::constant(c.clone()).eval(ring, &eps.var_values, &no_gens)?;
        if ring.is_zero(&cv) {
            continue;
        }
        // values of the letters; None marks a generator of nonzero degree
        let mut vals: Vec<Option<R::Elem>> = Vec::new();
        for l in w.letters() {
            vals.push(match l {
                Letter::Hom { .. } => Some(NCPoly::letter(*l).eval(ring, &eps.var_values, &no_gens)?),
                _ if l.degree() != 0 => None,
                _ => Some(
                    eps.chord_values
                        .get(l)
                        .cloned()
                        .ok_or_else(|| Error::Missing(format!("no augmentation value for {l}")))?,
                ),
            });
        }
        let product = |skip: usize| -> R::Elem {
            vals.iter()
                .enumerate()
                .filter(|(k, _)| *k != skip)
                .fold(cv.clone(), |acc, (_, v)| ring.mul(&acc, v.as_ref().unwrap()))
        };
        let positive: Vec<usize> = (0..vals.len()).filter(|&k| vals[k].is_none()).collect();
        match positive.len() {
            0 => {
                constant = ring.add(&constant, &product(usize::MAX));
                for (k, l) in w.letters().iter().enumerate() {
                    if !l.is_hom() {
                        let e = linear.entry(*l).or_insert_with(|| ring.zero());
                        *e = ring.add(e, &product(k));
                    }
                }
            }
            1 => {
                let k = positive[0];
                let e = linear.entry(w.letters()[k]).or_insert_with(|| ring.zero());
                *e = ring.add(e, &product(k));
            }
            _ => {}
        }
    }
    linear.retain(|_, v| !ring.is_zero(v));
    Ok((constant, linear))
}

/// The linear part of the differential conjugated by `eps`.
pub fn linearized_complex<R: Euclidean>(d: &Dga, eps: &Augmentation<R>) -> Result<ChainComplex<R::Elem>> {
    let ring = &eps.target;
    for (v, x) in &eps.var_values {
        if !ring.is_unit(x) {
            return Err(Error::NonUnit(format!("{v} = {x} is not a unit in {}", ring.name())));
        }
    }
    let top = d.generators().iter().map(|g| g.degree()).max().unwrap_or(0).max(0) as usize;
    let bases: Vec<Vec<Letter>> = (0..=top).map(|k| d.generators_of_degree(k as i32)).collect();
    let mut boundaries = Vec::new();
    for k in 1..=top {
        let mut m = zeros(ring, bases[k - 1].len(), bases[k].len());
        for (col, g) in bases[k].iter().enumerate() {
            let (c, lin) = linearize(d.differential(g).unwrap(), eps)?;
            if !ring.is_zero(&c) {
                return Err(Error::Precondition(format!(
                    "not an augmentation: the differential of {g} has constant term {c}"
                )));
            }
            for (l, v) in lin {
                let row = bases[k - 1]
                    .iter()
                    .position(|x| *x == l)
                    .ok_or_else(|| Error::Invariant(format!("linear term {l} in the differential of {g} has the wrong degree")))?;
                m.data[row][col] = v;
            }
        }
        boundaries.push(m);
    }
    Ok(ChainComplex { bases, boundaries })
}

/// Homology of a complex over a Euclidean ring.
pub fn homology<R: Euclidean>(ring: &R, c: &ChainComplex<R::Elem>) -> Result<HomologyResult<R::Elem>> {
    for k in 1..c.boundaries.len() {
        if !is_zero_matrix(ring, &matmul(ring, &c.boundaries[k - 1], &c.boundaries[k])) {
            return Err(Error::Invariant(format!("boundary maps compose to nonzero in degree {}", k + 1)));
        }
    }
    let snfs: Vec<_> = c.boundaries.iter().map(|m| smith_normal_form(ring, m)).collect();
    let top = c.bases.len();
    let mut degrees = Vec::new();
    for k in 0..top {
        let n = c.rank(k);
        let out_rank = if k == 0 { 0 } else { snfs[k - 1].rank() };
        let (in_rank, torsion) = match snfs.get(k) {
            Some(s) => (s.rank(), s.factors.iter().filter(|x| !ring.is_unit(x)).cloned().collect()),
            None => (0, Vec::new()),
        };
        debug!("degree {k}: rank {n}, boundary ranks {out_rank} / {in_rank}");
        degrees.push((k, n - out_rank - in_rank, torsion));
    }
    Ok(HomologyResult { ring: ring.name(), degrees })
}

pub fn linearized_homology<R: Euclidean>(d: &Dga, eps: &Augmentation<R>) -> Result<HomologyResult<R::Elem>> {
    homology(&eps.target, &linearized_complex(d, eps)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::BraidWord;
    use crate::coeff::Var;
    use crate::dga::{build_dga, DgaMode};
    use crate::ring::Integers;
    use num_bigint::BigInt;

    fn z_aug(vars: &[(Var, i64)], chords: &[(Letter, i64)]) -> Augmentation<Integers> {
        Augmentation {
            target: Integers,
            var_values: vars.iter().map(|(v, x)| (*v, BigInt::from(*x))).collect(),
            chord_values: chords.iter().map(|(l, x)| (*l, BigInt::from(*x))).collect(),
        }
    }

    #[test]
    fn unknot_complex_and_homology() {
        let d = build_dga(&BraidWord::identity(1).unwrap(), DgaMode::topological()).unwrap();
        let eps = z_aug(&[(Var::Lambda(0), 1), (Var::Mu(0), -1), (Var::U, 1)], &[]);
        let c = linearized_complex(&d, &eps).unwrap();
        assert_eq!(c.rank(0), 0);
        assert_eq!(c.rank(1), 2);
        assert_eq!(c.rank(2), 2);
        let m = c.boundary(2).unwrap();
        let minus: Vec<Vec<BigInt>> = vec![vec![BigInt::from(-1); 2]; 2];
        assert_eq!(m.data, minus);
        let h = homology(&Integers, &c).unwrap();
        assert_eq!(h.describe(0), "0");
        assert_eq!(h.describe(1), "Z");
        assert_eq!(h.describe(2), "Z");
    }

    #[test]
    fn trefoil_homology() {
        let d = build_dga(&BraidWord::parse("1 1 1", None).unwrap(), DgaMode::topological()).unwrap();
        let eps = z_aug(
            &[(Var::Lambda(0), 1), (Var::Mu(0), -1), (Var::U, 1)],
            &[(Letter::a(1, 2), -2), (Letter::a(2, 1), -2)],
        );
        let c = linearized_complex(&d, &eps).unwrap();
        assert_eq!((c.rank(0), c.rank(1), c.rank(2)), (2, 10, 8));
        let h = homology(&Integers, &c).unwrap();
        assert_eq!(h.describe(0), "Z/3");
        assert_eq!(h.describe(1), "Z + (Z/3)^3");
        assert_eq!(h.describe(2), "Z");
    }

    #[test]
    fn non_augmentation_is_rejected() {
        let d = build_dga(&BraidWord::parse("1 1 1", None).unwrap(), DgaMode::topological()).unwrap();
        let eps = z_aug(&[(Var::Lambda(0), 1), (Var::Mu(0), -1), (Var::U, 1)], &[(Letter::a(1, 2), 0), (Letter::a(2, 1), -2)]);
        assert!(matches!(linearized_complex(&d, &eps), Err(Error::Precondition(_))));
    }
}
