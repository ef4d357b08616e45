//! The degree-0 equation system of a knot DGA, computed directly in
//! commuting variables.
//!
//! Augmentations land in commutative rings, so only the abelianized
//! differentials of degree-1 generators matter. The braid action descends to
//! the polynomial ring on the chords (algebra maps send commutators to
//! commutators), and there it stays small where the noncommutative images
//! grow exponentially with the braid length.

use std::collections::HashMap;
use std::sync::Arc;

use log::debug;
use num_bigint::BigInt;
use num_traits::One;

use crate::augment::{abelianize, letter_name, AugSystem};
use crate::braid::BraidWord;
use crate::coeff::Var;
use crate::commpoly::CommPoly;
use crate::dga::{build_dga, DgaMode, Variant};
use crate::error::{Error, Result};
use crate::ncpoly::{AlgebraMode, ChordKind, Letter};
use crate::phi::{elementary, Meridians};

/// The braid action on commuting chords `a_xy` over a label set.
struct AbelianAction {
    labels: Vec<u8>,
    vars: Arc<Vec<String>>,
    index: HashMap<(u8, u8), usize>,
    /// `images[k]` is the image of variable `k`.
    images: Vec<CommPoly>,
}

impl AbelianAction {
    fn new(b: &BraidWord, labels: &[u8]) -> Result<AbelianAction> {
        let mut names = Vec::new();
        let mut index = HashMap::new();
        for &x in labels {
            for &y in labels {
                if x != y {
                    index.insert((x, y), names.len());
                    names.push(letter_name(&Letter::a(x, y)));
                }
            }
        }
        let vars = Arc::new(names);
        let identity: Vec<CommPoly> = (0..vars.len()).map(|k| CommPoly::monomial_in(vars.clone(), k, 1)).collect();
        let mut act = AbelianAction { labels: labels.to_vec(), vars, index, images: identity };
        for &l in b.letters().iter().rev() {
            act.prepend(l)?;
        }
        debug!(
            "abelian action of [{}]: {} terms in total",
            b,
            act.images.iter().map(|p| p.num_terms()).sum::<usize>()
        );
        Ok(act)
    }

    fn prepend(&mut self, letter: i32) -> Result<()> {
        let k = letter.unsigned_abs() as u8;
        let mut next = self.images.clone();
        for &x in &self.labels {
            for &y in &self.labels {
                if x == y {
                    continue;
                }
                if let Some(p) = elementary(k, letter > 0, x, y, Meridians::Trivial) {
                    let e = abelianize(&p, &self.vars)?;
                    next[self.index[&(x, y)]] = self.compose(&e);
                }
            }
        }
        self.images = next;
        Ok(())
    }

    /// `p` with every variable replaced by its current image.
    fn compose(&self, p: &CommPoly) -> CommPoly {
        let mut out = CommPoly::zero_in(self.vars.clone());
        for (e, c) in p.terms() {
            let mut t = CommPoly::constant_in(self.vars.clone(), c.clone());
            for (k, &x) in e.iter().enumerate() {
                if x > 0 {
                    t = t.mul(&self.images[k].pow(x as u32));
                }
            }
            out = out.add(&t);
        }
        out
    }

    fn image(&self, x: u8, y: u8) -> &CommPoly {
        &self.images[self.index[&(x, y)]]
    }
}

/// Rewrites `p` into the variable list `to`, which must contain every
/// variable that actually occurs.
fn embed(p: &CommPoly, to: &Arc<Vec<String>>) -> Result<CommPoly> {
    let map: Vec<Option<usize>> = p.vars().iter().map(|v| to.iter().position(|w| w == v)).collect();
    let mut out = CommPoly::zero_in(to.clone());
    for (e, c) in p.terms() {
        let mut ne = vec![0; to.len()];
        for (k, &x) in e.iter().enumerate() {
            if x != 0 {
                let Some(t) = map[k] else {
                    return Err(Error::Invariant(format!("unexpected variable {} in {p}", p.vars()[k])));
                };
                ne[t] = x;
            }
        }
        out.add_term(ne, c.clone());
    }
    Ok(out)
}

/// Whether [`equation_system`] can skip building the DGA for this input.
pub fn has_direct_system(b: &BraidWord, mode: DgaMode) -> bool {
    b.is_knot()
        && mode.algebra == AlgebraMode::Commuted
        && matches!(mode.variant, Variant::Topological | Variant::TransverseU | Variant::Hat)
}

/// The augmentation equation system of the DGA of `b` in `mode`, equal to
/// `AugSystem::reduced(&build_dga(b, mode)?, drop)`.
pub fn equation_system(b: &BraidWord, mode: DgaMode, drop: Option<ChordKind>) -> Result<AugSystem> {
    if !has_direct_system(b, mode) {
        return AugSystem::reduced(&build_dga(b, mode)?, drop);
    }
    let n = b.n();
    let comps = b.components();
    let star = mode.resolved_star(false).label(n);
    let mut labels: Vec<u8> = (1..=n as u8).collect();
    labels.push(star);
    let act = AbelianAction::new(b, &labels)?;

    let hat = mode.variant == Variant::Hat;
    let mut unit_vars = vec![Var::Lambda(0), Var::Mu(0)];
    if !hat {
        unit_vars.push(Var::U);
    }
    unit_vars.sort();
    let mut names: Vec<String> = unit_vars.iter().map(|v| v.to_string()).collect();
    // U is kept during assembly and set to zero at the end for the hat DGA
    if hat {
        names.push(Var::U.to_string());
    }
    let mut chord_gens = Vec::new();
    for i in 1..=n as u8 {
        for j in 1..=n as u8 {
            if i != j {
                chord_gens.push(Letter::a(i, j));
            }
        }
    }
    names.extend(chord_gens.iter().map(letter_name));
    let ring = Arc::new(names);
    let var = |v: Var| CommPoly::var_in(ring.clone(), &v.to_string());
    let (la, mu, u) = (var(Var::Lambda(0))?, var(Var::Mu(0))?, var(Var::U)?);
    let one = CommPoly::one_in(ring.clone());
    let zero = CommPoly::zero_in(ring.clone());
    let chord = |i: usize, j: usize| CommPoly::var_in(ring.clone(), &letter_name(&Letter::a(i as u8, j as u8)));
    let mono = |base: &CommPoly, e: i32| -> CommPoly {
        let x = base.support()[0];
        let mut exps = vec![0; ring.len()];
        exps[x] = e;
        CommPoly::from_terms(ring.clone(), [(exps, BigInt::one())])
    };

    // A and A-hat: entry i<j is upper*a_ij, i>j is -a_ij*mu, diagonal diag
    let chord_matrix = |upper: &CommPoly, diag: &CommPoly| -> Result<Vec<Vec<CommPoly>>> {
        (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|j| {
                        Ok(if i < j {
                            upper.mul(&chord(i, j)?)
                        } else if i > j {
                            chord(i, j)?.mul(&mu).neg()
                        } else {
                            diag.clone()
                        })
                    })
                    .collect()
            })
            .collect()
    };
    let a = chord_matrix(&one, &one.sub(&mu))?;
    let a_hat = chord_matrix(&u, &u.sub(&mu))?;
    let phi_a: Vec<Vec<CommPoly>> = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    if i == j {
                        return Ok(a[i - 1][j - 1].clone());
                    }
                    let img = embed(act.image(i as u8, j as u8), &ring)?;
                    Ok(if i < j { img } else { img.mul(&mu).neg() })
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    // Phi^L_ij: coefficient of a_{j*} in the image of a_{i*}; Phi^R_ji:
    // coefficient of a_{*j} in the image of a_{*i}
    let coefficient = |p: &CommPoly, x: u8, y: u8| -> Result<CommPoly> {
        let k = act.index[&(x, y)];
        if p.degree(k) > 1 {
            return Err(Error::Invariant(format!("image is not linear in {}", act.vars[k])));
        }
        embed(&p.derivative(k), &ring)
    };
    let mut phl = vec![vec![zero.clone(); n]; n];
    let mut phr = vec![vec![zero.clone(); n]; n];
    for i in 1..=n {
        for j in 1..=n {
            phl[i - 1][j - 1] = coefficient(act.image(i as u8, star), j as u8, star)?;
            phr[j - 1][i - 1] = coefficient(act.image(star, i as u8), star, j as u8)?;
        }
    }

    // Lambda = diag(la mu^w U^(-(w-n+1)/2), 1, ..., 1) at the leading strand
    let w = comps.writhe[0];
    let mut lam = la.mul(&mono(&mu, w as i32));
    if mode.variant == Variant::Topological {
        lam = lam.mul(&mono(&u, -((w - n as i64 + 1) / 2) as i32));
    }
    let lam_inv = lam.monomial_inverse().ok_or_else(|| Error::Invariant("Lambda is not a unit".into()))?;
    let diag: Vec<(CommPoly, CommPoly)> = (1..=n as u8)
        .map(|s| if comps.is_leading(s) { (lam.clone(), lam_inv.clone()) } else { (one.clone(), one.clone()) })
        .collect();

    let matmul = |x: &[Vec<CommPoly>], y: &[Vec<CommPoly>]| -> Vec<Vec<CommPoly>> {
        (0..n)
            .map(|r| {
                (0..n).fold(vec![zero.clone(); n], |mut row, c| {
                    row[c] = (0..n).fold(zero.clone(), |acc, k| acc.add(&x[r][k].mul(&y[k][c])));
                    row
                })
            })
            .collect()
    };
    let pa = matmul(&phl, &a);
    let ap = matmul(&a_hat, &phr);

    let mut equations = Vec::new();
    let mut sources = Vec::new();
    let mut push = |g: Letter, e: CommPoly| -> Result<()> {
        let e = if hat { e.substitute(ring.iter().position(|v| v == "U").unwrap(), &zero)? } else { e };
        if !e.is_zero() {
            equations.push(e);
            sources.push(g);
        }
        Ok(())
    };
    for kind in [ChordKind::B, ChordKind::C, ChordKind::D] {
        if drop == Some(kind) {
            continue;
        }
        for r in 0..n {
            for c in 0..n {
                let g = Letter::chord(kind, r as u8 + 1, c as u8 + 1);
                match kind {
                    ChordKind::B => {
                        let e = a[r][c].sub(&diag[r].0.mul(&phi_a[r][c]).mul(&diag[c].1));
                        if r == c {
                            if !e.is_zero() {
                                return Err(Error::Invariant(format!("diagonal entry {} of the b-relation matrix is {e}", r + 1)));
                            }
                            continue;
                        }
                        push(g, if r < c { e } else { e.mul(&mono(&mu, -1)).neg() })?;
                    }
                    ChordKind::C => push(g, a_hat[r][c].sub(&diag[r].0.mul(&pa[r][c])))?,
                    _ => push(g, a[r][c].sub(&ap[r][c].mul(&diag[c].1)))?,
                }
            }
        }
    }

    let nu = unit_vars.len();
    let chord_index = |k: usize| ring.iter().position(|v| *v == letter_name(&chord_gens[k])).unwrap();
    let mut membership: Vec<(usize, usize)> = (0..chord_gens.len())
        .map(|k| (equations.iter().filter(|e| e.contains_var(chord_index(k))).count(), k))
        .collect();
    membership.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    let chords: Vec<Letter> = membership.iter().map(|&(_, k)| chord_gens[k]).collect();
    let mut names: Vec<String> = unit_vars.iter().map(|v| v.to_string()).collect();
    names.extend(chords.iter().map(letter_name));
    let vars = Arc::new(names);
    let equations = equations.iter().map(|e| embed(e, &vars)).collect::<Result<Vec<_>>>()?;
    debug_assert_eq!(vars.len(), nu + chords.len());
    Ok(AugSystem { unit_vars, chords, vars, equations, sources })
}
