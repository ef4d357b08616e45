//! The braid group action on the algebra of degree-0 chords `a_ij`.
//!
//! Composition reads a braid word left to right: the action of `XY` is the
//! action of `Y` applied after that of `X`. Tables are built by prepending
//! letters from the right, so each step substitutes a short elementary image
//! into the accumulated table.

use std::collections::HashMap;

use log::debug;

use crate::braid::{BraidWord, ComponentMap};
use crate::coeff::Var;
use crate::error::{Error, Result};
use crate::matrix::NCMatrix;
use crate::ncpoly::{Chord, ChordKind, Letter, NCPoly, Word};

/// How meridian decorations `mt_i` enter the elementary action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Meridians {
    /// No decorations; the action used when homology commutes with chords.
    Trivial,
    /// The single meridian letter `mu` of a knot, kept noncommutative.
    KnotLetter,
    /// Strand-indexed noncommutative letters `mt_i`.
    StrandLetters,
    /// Strand-indexed commuting coefficient variables `mt_i`.
    StrandCoeffs,
}

impl Meridians {
    fn mt(self, i: u8, exp: i32) -> NCPoly {
        match self {
            Meridians::Trivial => NCPoly::one(),
            Meridians::KnotLetter => NCPoly::letter(Letter::hom(Var::Mu(0), exp)),
            Meridians::StrandLetters => NCPoly::letter(Letter::hom(Var::MuStrand(i), exp)),
            Meridians::StrandCoeffs => {
                let p = NCPoly::var(Var::MuStrand(i));
                if exp == 1 {
                    p
                } else {
                    p.unit_inverse().expect("monomials are units")
                }
            }
        }
    }
}

/// Which extra strand label carries the "star" endpoint when the action is
/// extended to `n + 1` labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Star {
    /// Label `0`, below all braid strands.
    Low,
    /// Label `n + 1`, above all braid strands.
    High,
}

impl Star {
    pub fn label(self, n: usize) -> u8 {
        match self {
            Star::Low => 0,
            Star::High => n as u8 + 1,
        }
    }
}

fn a(i: u8, j: u8) -> NCPoly {
    NCPoly::letter(Letter::a(i, j))
}

/// Image of `a_xy` under `sigma_k` (or its inverse); `None` if fixed.
pub(crate) fn elementary(k: u8, positive: bool, x: u8, y: u8, m: Meridians) -> Option<NCPoly> {
    let k1 = k + 1;
    let on = |s: u8| s == k || s == k1;
    if !on(x) && !on(y) {
        return None;
    }
    let img = if positive {
        if (x, y) == (k, k1) {
            a(k1, k).neg()
        } else if (x, y) == (k1, k) {
            m.mt(k, 1).mul(&a(k, k1)).mul(&m.mt(k1, -1)).neg()
        } else if x == k1 {
            a(k, y)
        } else if y == k1 {
            a(x, k)
        } else if x == k {
            a(k1, y).sub(&a(k1, k).mul(&a(k, y)))
        } else if x < k {
            a(x, k1).sub(&a(x, k).mul(&a(k, k1)))
        } else {
            a(x, k1).sub(&a(x, k).mul(&m.mt(k, 1)).mul(&a(k, k1)).mul(&m.mt(k1, -1)))
        }
    } else if (x, y) == (k1, k) {
        a(k, k1).neg()
    } else if (x, y) == (k, k1) {
        m.mt(k1, -1).mul(&a(k1, k)).mul(&m.mt(k, 1)).neg()
    } else if x == k {
        a(k1, y)
    } else if y == k {
        a(x, k1)
    } else if x == k1 {
        a(k, y).sub(&a(k, k1).mul(&a(k1, y)))
    } else if x < k {
        a(x, k).sub(&a(x, k1).mul(&m.mt(k1, -1)).mul(&a(k1, k)).mul(&m.mt(k, 1)))
    } else {
        a(x, k).sub(&a(x, k1).mul(&a(k1, k)))
    };
    Some(img)
}

/// The automorphism of a braid on a fixed set of strand labels, stored as
/// the images of all chords together with the induced permutation of the
/// meridian decorations.
#[derive(Clone, Debug)]
pub struct BraidAction {
    labels: Vec<u8>,
    meridians: Meridians,
    images: HashMap<Chord, NCPoly>,
    perm: HashMap<u8, u8>,
}

impl BraidAction {
    /// `labels` must contain `1..=n`; any further labels are passive.
    pub fn new(b: &BraidWord, labels: &[u8], meridians: Meridians) -> Result<BraidAction> {
        for s in 1..=b.n() as u8 {
            if !labels.contains(&s) {
                return Err(Error::Index(format!("strand {s} missing from the label set")));
            }
        }
        let mut act = BraidAction {
            labels: labels.to_vec(),
            meridians,
            images: HashMap::new(),
            perm: labels.iter().map(|&s| (s, s)).collect(),
        };
        for &l in b.letters().iter().rev() {
            act = act.prepend(l);
        }
        debug!(
            "braid action of {} on {} labels: {} nontrivial images",
            b,
            labels.len(),
            act.images.len()
        );
        Ok(act)
    }

    fn prepend(&self, letter: i32) -> BraidAction {
        let k = letter.unsigned_abs() as u8;
        let positive = letter > 0;
        let mut images = HashMap::new();
        for &x in &self.labels {
            for &y in &self.labels {
                if x == y {
                    continue;
                }
                let ch = Chord::a(x, y);
                let img = match elementary(k, positive, x, y, self.meridians) {
                    Some(p) => self.apply(&p),
                    None => match self.images.get(&ch) {
                        Some(p) => p.clone(),
                        None => continue,
                    },
                };
                if img != NCPoly::letter(Letter::Chord(ch)) {
                    images.insert(ch, img);
                }
            }
        }
        let swap = |s: u8| {
            if s == k {
                k + 1
            } else if s == k + 1 {
                k
            } else {
                s
            }
        };
        let perm = self.labels.iter().map(|&s| (s, self.perm[&swap(s)])).collect();
        BraidAction { labels: self.labels.clone(), meridians: self.meridians, images, perm }
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Image of one chord `a_xy`.
    pub fn image(&self, x: u8, y: u8) -> NCPoly {
        let ch = Chord::a(x, y);
        self.images.get(&ch).cloned().unwrap_or_else(|| NCPoly::letter(Letter::Chord(ch)))
    }

    /// Where the meridian decoration of strand `s` is sent.
    pub fn strand_image(&self, s: u8) -> u8 {
        self.perm.get(&s).copied().unwrap_or(s)
    }

    /// Applies the automorphism to a polynomial in the chords `a_xy`.
    pub fn apply(&self, p: &NCPoly) -> NCPoly {
        let rename = |v: Var| match v {
            Var::MuStrand(s) => Var::MuStrand(self.strand_image(s)),
            other => other,
        };
        p.substitute(
            |l| match l {
                Letter::Chord(ch) if ch.kind == ChordKind::A => self.images.get(ch).cloned(),
                Letter::Hom { var: Var::MuStrand(s), exp } => {
                    Some(NCPoly::letter(Letter::hom(Var::MuStrand(self.strand_image(*s)), *exp)))
                }
                _ => None,
            },
            |c| c.rename(rename),
        )
    }
}

/// Applies the action of `b` on labels `1..=width` with trivial meridians.
pub fn phi_apply(b: &BraidWord, p: &NCPoly, width: usize) -> Result<NCPoly> {
    let labels: Vec<u8> = (1..=width.max(b.n()) as u8).collect();
    Ok(BraidAction::new(b, &labels, Meridians::Trivial)?.apply(p))
}

/// The matrices with `phi(a_{i*}) = sum_j PhiL_ij a_{j*}` and
/// `phi(a_{*i}) = sum_j a_{*j} PhiR_ji`.
pub fn phi_matrices(b: &BraidWord, star: Star, meridians: Meridians) -> Result<(NCMatrix, NCMatrix)> {
    let n = b.n();
    let s = star.label(n);
    let mut labels: Vec<u8> = (1..=n as u8).collect();
    labels.push(s);
    let act = BraidAction::new(b, &labels, meridians)?;
    let mut left = NCMatrix::zeros(n, n);
    let mut right = NCMatrix::zeros(n, n);
    for i in 1..=n as u8 {
        for (w, c) in act.image(i, s).terms() {
            let (last, rest) = w
                .letters()
                .split_last()
                .ok_or_else(|| Error::Invariant(format!("constant term in image of a{i}{s}")))?;
            let j = match last {
                Letter::Chord(ch) if ch.kind == ChordKind::A && ch.j == s => ch.i,
                _ => return Err(Error::Invariant(format!("image of a{i}{s} has a term {w} not ending in a star chord"))),
            };
            let entry = left.at_mut(i as usize - 1, j as usize - 1);
            entry.add_term(Word::from_letters(rest.iter().copied()), c.clone());
        }
        for (w, c) in act.image(s, i).terms() {
            let (first, rest) = w
                .letters()
                .split_first()
                .ok_or_else(|| Error::Invariant(format!("constant term in image of a{s}{i}")))?;
            let j = match first {
                Letter::Chord(ch) if ch.kind == ChordKind::A && ch.i == s => ch.j,
                _ => return Err(Error::Invariant(format!("image of a{s}{i} has a term {w} not starting with a star chord"))),
            };
            let entry = right.at_mut(j as usize - 1, i as usize - 1);
            entry.add_term(Word::from_letters(rest.iter().copied()), c.clone());
        }
    }
    Ok((left, right))
}

/// Pushes strand-indexed meridians down to component meridians: knots use
/// `mu`, links `mu{alpha}`.
pub fn descend_meridians(p: &NCPoly, comps: &ComponentMap) -> NCPoly {
    p.rename_vars(|v| match v {
        Var::MuStrand(s) => meridian_of(comps, s),
        other => other,
    })
}

pub fn meridian_of(comps: &ComponentMap, strand: u8) -> Var {
    if comps.r == 1 {
        Var::Mu(0)
    } else {
        Var::Mu(comps.component_of(strand))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::AlgebraMode;

    fn braid(s: &str) -> BraidWord {
        BraidWord::parse(s, None).unwrap()
    }

    fn p(s: &str) -> NCPoly {
        NCPoly::parse(s, AlgebraMode::Commuted).unwrap()
    }

    #[test]
    fn trefoil_cube_on_a13() {
        let img = phi_apply(&braid("1 1 1"), &p("a13"), 3).unwrap();
        assert_eq!(img, p("-2*a21*a13 + a21*a12*a21*a13 + a23 - a21*a12*a23"));
    }

    #[test]
    fn inverse_letters_cancel() {
        for m in [Meridians::Trivial, Meridians::KnotLetter, Meridians::StrandLetters, Meridians::StrandCoeffs] {
            for w in ["1 -1", "-2 2", "1 2 -2 -1"] {
                let b = BraidWord::parse(w, Some(4)).unwrap();
                let labels = [0, 1, 2, 3, 4, 5];
                let act = BraidAction::new(&b, &labels, m).unwrap();
                for &x in &labels {
                    for &y in &labels {
                        if x != y {
                            assert_eq!(act.image(x, y), a(x, y), "{w} {m:?} a{x}{y}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn braid_relations_hold() {
        for m in [Meridians::Trivial, Meridians::StrandLetters, Meridians::StrandCoeffs] {
            let labels = [0, 1, 2, 3, 4, 5];
            let lhs = BraidAction::new(&BraidWord::parse("1 2 1", Some(4)).unwrap(), &labels, m).unwrap();
            let rhs = BraidAction::new(&BraidWord::parse("2 1 2", Some(4)).unwrap(), &labels, m).unwrap();
            let far1 = BraidAction::new(&BraidWord::parse("1 3", Some(4)).unwrap(), &labels, m).unwrap();
            let far2 = BraidAction::new(&BraidWord::parse("3 1", Some(4)).unwrap(), &labels, m).unwrap();
            for &x in &labels {
                for &y in &labels {
                    if x != y {
                        assert_eq!(lhs.image(x, y), rhs.image(x, y), "{m:?} a{x}{y}");
                        assert_eq!(far1.image(x, y), far2.image(x, y), "{m:?} a{x}{y}");
                    }
                }
            }
        }
    }

    #[test]
    fn meridian_permutation_matches_braid() {
        let b = braid("1 -2 1 -2");
        let act = BraidAction::new(&b, &[1, 2, 3], Meridians::StrandLetters).unwrap();
        let perm = b.permutation();
        for s in 1..=3u8 {
            assert_eq!(act.strand_image(s) as usize, perm[s as usize - 1] + 1);
        }
    }

    #[test]
    fn phi_matrices_of_trefoil() {
        let (l, r) = phi_matrices(&braid("1 1 1"), Star::High, Meridians::Trivial).unwrap();
        assert_eq!(l.get(0, 0).unwrap(), &p("-2*a21 + a21*a12*a21"));
        assert_eq!(l.get(0, 1).unwrap(), &p("1 - a21*a12"));
        assert_eq!(l.get(1, 0).unwrap(), &p("1 - a12*a21"));
        assert_eq!(l.get(1, 1).unwrap(), &p("a12"));
        assert_eq!(r.get(0, 0).unwrap(), &p("-2*a12 + a12*a21*a12"));
        assert_eq!(r.get(0, 1).unwrap(), &p("1 - a12*a21"));
        assert_eq!(r.get(1, 0).unwrap(), &p("1 - a21*a12"));
        assert_eq!(r.get(1, 1).unwrap(), &p("a21"));
        // identity braid gives identity matrices
        let (l, r0) = phi_matrices(&BraidWord::identity(3).unwrap(), Star::Low, Meridians::Trivial).unwrap();
        assert_eq!(l, NCMatrix::identity(3));
        assert_eq!(r0, NCMatrix::identity(3));
    }
}
