//! Augmentation counting by direct evaluation over `F_p`.
//!
//! An augmentation `eps` composed with the braid action is again a
//! valuation of the chords, and `eps ∘ phi_sigma` only needs the short
//! elementary images of `sigma`. So `eps ∘ phi_B` costs a pass over the
//! letters per assignment, however large the symbolic images of `phi_B`
//! are. Chords ending on the star strand are valued as dual numbers
//! `s + v·e` with formal basis vectors `e_j`, because their images are
//! linear in the star chords; the `e`-coefficients give `Phi^L` and `Phi^R`.
//!
//! Every assignment of the chords is visited, so this is only used when
//! `p^(n(n-1))` is small.

use std::collections::HashMap;
use std::sync::Arc;

use log::debug;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::augment::{abelianize, letter_name};
use crate::braid::BraidWord;
use crate::dga::{DgaMode, Variant};
use crate::error::{Error, Result};
use crate::ncpoly::{ChordKind, Letter};
use crate::phi::{elementary, Meridians};

/// Largest number of chord assignments visited.
pub const EVALUATION_CAP: u64 = 1 << 24;

/// Number of chord assignments [`count_by_evaluation`] would visit.
pub fn evaluation_size(b: &BraidWord, p: u64) -> Option<u64> {
    let chords = (b.n() * (b.n() - 1)) as u32;
    p.checked_pow(chords)
}

struct Step {
    /// `(target pair, terms)`; a term is `(coefficient, factor pairs)`.
    images: Vec<(usize, Vec<(u64, Vec<usize>)>)>,
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

fn signed_pow(b: u64, e: i64, p: u64) -> u64 {
    if e >= 0 {
        pow_mod(b, e as u64, p)
    } else {
        pow_mod(pow_mod(b, p - 2, p), e.unsigned_abs(), p)
    }
}

/// Counts augmentations of the DGA of the knot `b` in `mode` (topological,
/// `U`-filtered or hat) over `F_p`, optionally ignoring one family of
/// degree-1 generators.
pub fn count_by_evaluation(b: &BraidWord, mode: DgaMode, p: u64, drop: Option<ChordKind>) -> Result<u64> {
    if !crate::abelian::has_direct_system(b, mode) {
        return Err(Error::Mode(format!("no evaluation counter for {mode} on this braid")));
    }
    if crate::ring::PrimeField::new(p).is_none() || p > 1 << 20 {
        return Err(Error::Config(format!("{p} is not a usable prime")));
    }
    let total = evaluation_size(b, p).filter(|&t| t <= EVALUATION_CAP).ok_or_else(|| {
        Error::Cap(format!("{}^{} chord assignments exceed the evaluation cap", p, b.n() * (b.n() - 1)))
    })?;
    let n = b.n();
    let comps = b.components();
    let star = mode.resolved_star(false).label(n);
    let mut labels: Vec<u8> = (1..=n as u8).collect();
    labels.push(star);
    let m = labels.len();
    let pos: HashMap<u8, usize> = labels.iter().enumerate().map(|(k, &l)| (l, k)).collect();
    let pair = |x: u8, y: u8| pos[&x] * m + pos[&y];
    // indexed by pair; the diagonal slots are unused placeholders
    let names: Vec<String> = (0..m * m)
        .map(|k| {
            let (x, y) = (labels[k / m], labels[k % m]);
            if x == y {
                format!("_{k}")
            } else {
                letter_name(&Letter::a(x, y))
            }
        })
        .collect();
    let vars = Arc::new(names);

    // elementary images per letter, applied last letter first
    let mut steps = Vec::new();
    for &l in b.letters().iter().rev() {
        let mut images = Vec::new();
        for &x in &labels {
            for &y in &labels {
                if x == y {
                    continue;
                }
                let Some(img) = elementary(l.unsigned_abs() as u8, l > 0, x, y, Meridians::Trivial) else { continue };
                let e = abelianize(&img, &vars)?;
                let terms = e
                    .terms()
                    .map(|(exps, c)| {
                        let c = c.mod_floor(&BigInt::from(p)).to_u64().unwrap();
                        let factors = exps
                            .iter()
                            .enumerate()
                            .flat_map(|(k, &x)| std::iter::repeat(k).take(x as usize))
                            .collect();
                        (c, factors)
                    })
                    .collect();
                images.push((pair(x, y), terms));
            }
        }
        steps.push(Step { images });
    }

    let hat = mode.variant == Variant::Hat;
    let w = comps.writhe[0];
    let u_exp = if mode.variant == Variant::Topological { -((w - n as i64 + 1) / 2) } else { 0 };
    let leading: Vec<bool> = (1..=n as u8).map(|s| comps.is_leading(s)).collect();
    let chords: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let units: Vec<(u64, u64, u64)> = {
        let nz: Vec<u64> = (1..p).collect();
        let us: Vec<u64> = if hat { vec![0] } else { nz.clone() };
        let mut v = Vec::new();
        for &la in &nz {
            for &mu in &nz {
                for &u in &us {
                    v.push((la, mu, u));
                }
            }
        }
        v
    };
    let width = n + 1;
    debug!("evaluating {total} chord assignments of [{b}] over F_{p}");

    let count_one = |index: u64| -> u64 {
        let mut eps = vec![vec![0u64; n]; n];
        let mut rest = index;
        for &(i, j) in &chords {
            eps[i][j] = rest % p;
            rest /= p;
        }
        // dual-number valuation of all chords: [scalar, e_1..e_n]
        let mut val = vec![0u64; m * m * width];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    val[(i * m + j) * width] = eps[i][j];
                }
            }
            let s = pos[&star];
            val[(i * m + s) * width + 1 + i] = 1;
            val[(s * m + i) * width + 1 + i] = 1;
        }
        let mut next = val.clone();
        let mut acc = vec![0u64; width];
        let mut term = vec![0u64; width];
        for step in &steps {
            next.copy_from_slice(&val);
            for (target, terms) in &step.images {
                acc.iter_mut().for_each(|x| *x = 0);
                for (c, factors) in terms {
                    term.iter_mut().for_each(|x| *x = 0);
                    term[0] = *c;
                    for &f in factors {
                        let v = &val[f * width..(f + 1) * width];
                        // (s1 + v1 e)(s2 + v2 e) = s1 s2 + (s1 v2 + s2 v1) e
                        let s1 = term[0];
                        for k in 1..width {
                            term[k] = (term[k] * v[0] + s1 * v[k]) % p;
                        }
                        term[0] = s1 * v[0] % p;
                    }
                    for k in 0..width {
                        acc[k] = (acc[k] + term[k]) % p;
                    }
                }
                next[target * width..(target + 1) * width].copy_from_slice(&acc);
            }
            std::mem::swap(&mut val, &mut next);
        }
        let s = pos[&star];
        let phi = |i: usize, j: usize| val[(i * m + j) * width];
        let phl = |i: usize, j: usize| val[(i * m + s) * width + 1 + j];
        let phr = |j: usize, i: usize| val[(s * m + i) * width + 1 + j];

        let mut found = 0;
        'units: for &(la, mu, u) in &units {
            let neg = |x: u64| (p - x % p) % p;
            let a = |i: usize, j: usize| {
                if i < j {
                    eps[i][j]
                } else if i > j {
                    neg(eps[i][j] * mu % p)
                } else {
                    (1 + p - mu) % p
                }
            };
            let a_hat = |i: usize, j: usize| {
                if i < j {
                    u * eps[i][j] % p
                } else if i > j {
                    neg(eps[i][j] * mu % p)
                } else {
                    (u + p - mu) % p
                }
            };
            let phi_a = |i: usize, j: usize| {
                if i < j {
                    phi(i, j)
                } else if i > j {
                    neg(phi(i, j) * mu % p)
                } else {
                    (1 + p - mu) % p
                }
            };
            let lam_val = la * signed_pow(mu, w, p) % p * if u_exp != 0 { signed_pow(u, u_exp, p) } else { 1 } % p;
            let lam_inv = pow_mod(lam_val, p - 2, p);
            let lam = |i: usize| if leading[i] { lam_val } else { 1 };
            let lam_i = |i: usize| if leading[i] { lam_inv } else { 1 };
            for r in 0..n {
                for c in 0..n {
                    if drop != Some(ChordKind::B) && r != c && a(r, c) != lam(r) * phi_a(r, c) % p * lam_i(c) % p {
                        continue 'units;
                    }
                    if drop != Some(ChordKind::C) {
                        let pa = (0..n).fold(0, |t, k| (t + phl(r, k) * a(k, c)) % p);
                        if a_hat(r, c) != lam(r) * pa % p {
                            continue 'units;
                        }
                    }
                    if drop != Some(ChordKind::D) {
                        let ap = (0..n).fold(0, |t, k| (t + a_hat(r, k) * phr(k, c)) % p);
                        if a(r, c) != ap * lam_i(c) % p {
                            continue 'units;
                        }
                    }
                }
            }
            found += 1;
        }
        found
    };
    let count = (0..total as usize).into_par_iter().with_min_len(1024).map(|k| count_one(k as u64)).sum();
    Ok(count)
}
