//! The knot/link DGA of a braid in its topological and transverse flavors.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::braid::{BraidWord, ComponentMap};
use crate::coeff::{Coeff, Mono, Var};
use crate::error::{Error, Result};
use crate::matrix::NCMatrix;
use crate::ncpoly::{Algebra, AlgebraMode, Chord, ChordKind, CoeffRing, Homogeneity, Letter, NCPoly};
use crate::phi::{descend_meridians, phi_matrices, BraidAction, Meridians, Star};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Topological,
    TransverseU,
    TransverseUV,
    /// `TransverseU` with `U = 0`.
    Hat,
}

impl Variant {
    pub fn is_transverse(self) -> bool {
        self != Variant::Topological
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Topological => "topological",
            Variant::TransverseU => "transverse",
            Variant::TransverseUV => "transverse-uv",
            Variant::Hat => "hat",
        }
    }

    pub fn parse(s: &str) -> Result<Variant> {
        match s {
            "topological" => Ok(Variant::Topological),
            "transverse" | "transverse-u" => Ok(Variant::TransverseU),
            "transverse-uv" => Ok(Variant::TransverseUV),
            "hat" => Ok(Variant::Hat),
            _ => Err(Error::Parse(format!("unknown DGA mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DgaMode {
    pub variant: Variant,
    pub algebra: AlgebraMode,
    /// `None` picks the default: strand `n + 1` for commuted knots, strand
    /// `0` otherwise.
    pub star: Option<Star>,
}

impl DgaMode {
    pub fn new(variant: Variant) -> DgaMode {
        DgaMode { variant, algebra: AlgebraMode::Commuted, star: None }
    }

    pub fn topological() -> DgaMode {
        DgaMode::new(Variant::Topological)
    }

    pub fn hat() -> DgaMode {
        DgaMode::new(Variant::Hat)
    }

    pub fn noncommutative(self) -> DgaMode {
        DgaMode { algebra: AlgebraMode::FullyNoncommutative, ..self }
    }

    pub fn with_star(self, star: Star) -> DgaMode {
        DgaMode { star: Some(star), ..self }
    }

    pub(crate) fn resolved_star(&self, link: bool) -> Star {
        self.star.unwrap_or(if link || self.algebra == AlgebraMode::FullyNoncommutative {
            Star::Low
        } else {
            Star::High
        })
    }
}

impl fmt::Display for DgaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.variant.name())?;
        if self.algebra == AlgebraMode::FullyNoncommutative {
            write!(f, "+noncommutative")?;
        }
        match self.star {
            Some(Star::Low) => write!(f, "+star0"),
            Some(Star::High) => write!(f, "+star-high"),
            None => Ok(()),
        }
    }
}

/// A DGA with per-generator differentials.
#[derive(Clone, Debug)]
pub struct Dga {
    pub braid: BraidWord,
    pub mode: DgaMode,
    pub components: ComponentMap,
    pub algebra: Algebra,
    generators: Vec<Letter>,
    diff: HashMap<Letter, NCPoly>,
    next_aux: u16,
}

/// Helper producing homology elements in the active algebra.
struct Ctx<'a> {
    nc: bool,
    comps: &'a ComponentMap,
}

impl Ctx<'_> {
    fn label(&self, alpha: u8) -> u8 {
        if self.comps.r == 1 {
            0
        } else {
            alpha
        }
    }

    fn hom(&self, v: Var, e: i32) -> NCPoly {
        if e == 0 {
            NCPoly::one()
        } else if self.nc {
            NCPoly::letter(Letter::hom(v, e))
        } else {
            NCPoly::constant(Coeff::mono(Mono::var(v, e)))
        }
    }

    fn mu(&self, strand: u8, e: i32) -> NCPoly {
        self.hom(Var::Mu(self.label(self.comps.component_of(strand))), e)
    }
}

fn coeff_mono(v: Var, e: i32) -> NCPoly {
    if e == 0 {
        NCPoly::one()
    } else {
        NCPoly::constant(Coeff::mono(Mono::var(v, e)))
    }
}

fn chord(kind: ChordKind, i: usize, j: usize) -> NCPoly {
    NCPoly::letter(Letter::chord(kind, i as u8, j as u8))
}

/// `A`-type (or `B`-type, with zero diagonal) matrix: entry `i<j` is
/// `upper * x_ij`, entry `i>j` is `-x_ij * lower_j`, the diagonal
/// `diag_i`.
fn chord_matrix(
    n: usize,
    kind: ChordKind,
    upper: &NCPoly,
    lower: &dyn Fn(usize) -> NCPoly,
    diag: &dyn Fn(usize) -> NCPoly,
) -> NCMatrix {
    NCMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (r + 1, c + 1);
        if i < j {
            upper.mul(&chord(kind, i, j))
        } else if i > j {
            chord(kind, i, j).mul(&lower(j)).neg()
        } else {
            diag(i)
        }
    })
}

/// The matrix `A` of a braid together with `phi_B(A)` and the two
/// coefficient matrices, all in the algebra selected by `mode`.
#[derive(Clone, Debug)]
pub struct BraidMatrices {
    pub a: NCMatrix,
    pub phi_a: NCMatrix,
    pub phi_l: NCMatrix,
    pub phi_r: NCMatrix,
}

pub fn braid_matrices(b: &BraidWord, mode: DgaMode) -> Result<BraidMatrices> {
    let comps = b.components();
    let link = comps.r > 1;
    let star = mode.resolved_star(link);
    let nc = mode.algebra == AlgebraMode::FullyNoncommutative;
    let ctx = Ctx { nc, comps: &comps };
    let n = b.n();
    let one = NCPoly::one();
    let a = chord_matrix(n, ChordKind::A, &one, &|j| ctx.mu(j as u8, 1), &|i| one.sub(&ctx.mu(i as u8, 1)));
    // phi_B(A): lift the meridians to strand-indexed ones, act, push down
    let meridians = match (nc, link) {
        (false, false) => Meridians::Trivial,
        (true, false) => Meridians::KnotLetter,
        (false, true) => Meridians::StrandCoeffs,
        (true, true) => Meridians::StrandLetters,
    };
    let labels: Vec<u8> = (1..=n as u8).collect();
    let act = BraidAction::new(b, &labels, meridians)?;
    let lifted_mu = |s: usize, e: i32| match meridians {
        Meridians::Trivial | Meridians::KnotLetter => ctx.mu(s as u8, e),
        Meridians::StrandCoeffs => coeff_mono(Var::MuStrand(s as u8), e),
        Meridians::StrandLetters => NCPoly::letter(Letter::hom(Var::MuStrand(s as u8), e)),
    };
    let a_lift = chord_matrix(n, ChordKind::A, &one, &|j| lifted_mu(j, 1), &|i| one.sub(&lifted_mu(i, 1)));
    let phi_a = a_lift.map(|p| descend_meridians(&act.apply(p), &comps));

    let (phl, phr) = phi_matrices(b, star, meridians)?;
    let (phl, phr) = (phl.map(|p| descend_meridians(p, &comps)), phr.map(|p| descend_meridians(p, &comps)));

    Ok(BraidMatrices { a, phi_a, phi_l: phl, phi_r: phr })
}

pub fn build_dga(b: &BraidWord, mode: DgaMode) -> Result<Dga> {
    let comps = b.components();
    let link = comps.r > 1;
    let star = mode.resolved_star(link);
    if link && star == Star::High {
        return Err(Error::Precondition("link DGAs require the star strand at 0".into()));
    }
    let nc = mode.algebra == AlgebraMode::FullyNoncommutative;
    if mode.variant == Variant::TransverseUV && link {
        return Err(Error::Precondition("the U,V filtered DGA is only defined for knots".into()));
    }
    if mode.variant.is_transverse() && link {
        return Err(Error::Precondition("transverse DGAs are only defined for knots".into()));
    }
    let n = b.n();
    let ctx = Ctx { nc, comps: &comps };
    let u = NCPoly::var(Var::U);
    let one = NCPoly::one();
    let v_mu = |j: usize| ctx.mu(j as u8, 1).mul(&NCPoly::var(Var::V));

    let a = chord_matrix(n, ChordKind::A, &one, &|j| ctx.mu(j as u8, 1), &|i| one.sub(&ctx.mu(i as u8, 1)));
    let a_hat = chord_matrix(n, ChordKind::A, &u, &|j| ctx.mu(j as u8, 1), &|i| u.sub(&ctx.mu(i as u8, 1)));
    let bm = chord_matrix(n, ChordKind::B, &one, &|j| ctx.mu(j as u8, 1), &|_| NCPoly::zero());
    let b_hat = chord_matrix(n, ChordKind::B, &u, &|j| ctx.mu(j as u8, 1), &|_| NCPoly::zero());
    let (a_chk, b_chk) = if mode.variant == Variant::TransverseUV {
        (
            chord_matrix(n, ChordKind::A, &one, &v_mu, &|i| one.sub(&v_mu(i))),
            chord_matrix(n, ChordKind::B, &one, &v_mu, &|_| NCPoly::zero()),
        )
    } else {
        (a.clone(), bm.clone())
    };
    let gen = |kind| NCMatrix::from_fn(n, n, |r, c| chord(kind, r + 1, c + 1));
    let (cm, dm) = (gen(ChordKind::C), gen(ChordKind::D));

    let lmat: Vec<NCPoly> = (1..=n as u8)
        .map(|s| {
            if !comps.is_leading(s) {
                return NCPoly::one();
            }
            let alpha = comps.component_of(s);
            let k = alpha as usize - 1;
            let (w, ns) = (comps.writhe[k], comps.strands[k] as i64);
            let lab = ctx.label(alpha);
            let mut entry = ctx.hom(Var::Lambda(lab), 1).mul(&ctx.hom(Var::Mu(lab), w as i32));
            if mode.variant == Variant::Topological {
                let parity = w - ns + 1;
                debug_assert!(parity % 2 == 0);
                entry = entry.mul(&coeff_mono(Var::U, -(parity / 2) as i32));
            }
            entry
        })
        .collect();
    let linv: Vec<NCPoly> = lmat.iter().map(|d| d.unit_inverse().expect("diagonal of L is a unit")).collect();

    let BraidMatrices { phi_a, phi_l: phl, phi_r: phr, .. } = braid_matrices(b, mode)?;

    let (a_left, a_right) = match mode.variant {
        Variant::TransverseUV => (&a_chk, &a_chk),
        _ => (&a, &a),
    };
    let d_b = a.sub(&phi_a.conj_diag(&lmat)?)?;
    let d_c = a_hat.sub(&phl.left_diag(&lmat).mul(a_right)?)?;
    let d_d = a_left.sub(&a_hat.mul(&phr)?.right_diag(&linv))?;
    let d_e = b_hat.sub(&cm)?.sub(&phl.left_diag(&lmat).mul(&dm)?)?;
    let d_f = b_chk.sub(&dm)?.sub(&cm.mul(&phr)?.right_diag(&linv))?;

    let mut generators = Vec::new();
    let mut diff = HashMap::new();
    for kind in ChordKind::ALL {
        for i in 1..=n {
            for j in 1..=n {
                if i == j && matches!(kind, ChordKind::A | ChordKind::B) {
                    continue;
                }
                let g = Letter::chord(kind, i as u8, j as u8);
                let (r, c) = (i - 1, j - 1);
                let img = match kind {
                    ChordKind::A => NCPoly::zero(),
                    ChordKind::B if i < j => d_b.at(r, c).clone(),
                    ChordKind::B => d_b.at(r, c).mul(&ctx.mu(j as u8, -1)).neg(),
                    ChordKind::C => d_c.at(r, c).clone(),
                    ChordKind::D => d_d.at(r, c).clone(),
                    ChordKind::E => d_e.at(r, c).clone(),
                    ChordKind::F => d_f.at(r, c).clone(),
                };
                generators.push(g);
                diff.insert(g, img);
            }
        }
    }
    for i in 0..n {
        if !d_b.at(i, i).is_zero() {
            return Err(Error::Invariant(format!(
                "diagonal entry {} of the b-relation matrix is {}",
                i + 1,
                d_b.at(i, i)
            )));
        }
    }

    let mut vars = Vec::new();
    let mut hom_vars = Vec::new();
    for alpha in 1..=comps.r as u8 {
        let lab = ctx.label(alpha);
        let target = if nc { &mut hom_vars } else { &mut vars };
        target.push(Var::Lambda(lab));
        target.push(Var::Mu(lab));
    }
    if mode.variant != Variant::Hat {
        vars.push(Var::U);
    }
    if mode.variant == Variant::TransverseUV {
        vars.push(Var::V);
    }
    vars.sort();
    let algebra = Algebra {
        ring: CoeffRing { vars, u_nonnegative: mode.variant.is_transverse() },
        mode: mode.algebra,
        hom_vars,
    };
    let mut dga = Dga { braid: b.clone(), mode, components: comps, algebra, generators, diff, next_aux: 0 };
    if mode.variant == Variant::Hat {
        dga = dga.substitute_all(Var::U, &Coeff::zero())?;
    }
    if mode.variant.is_transverse() {
        for (g, p) in &dga.diff {
            if p.terms().any(|(_, c)| c.min_exp(Var::U) < 0) {
                return Err(Error::Mode(format!("negative power of U in the differential of {g}")));
            }
        }
    }
    info!("built {} DGA of braid [{}] with {} generators", mode, b, dga.generators.len());
    Ok(dga)
}

/// Outcome of a `d^2 = 0` check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D2Report {
    pub checked: usize,
    /// First generator (in generator order) with a nonzero `d^2`, and the
    /// residue.
    pub failure: Option<(Letter, NCPoly)>,
}

impl D2Report {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl Dga {
    pub fn generators(&self) -> &[Letter] {
        &self.generators
    }

    pub fn differential(&self, g: &Letter) -> Option<&NCPoly> {
        self.diff.get(g)
    }

    pub fn differentials(&self) -> &HashMap<Letter, NCPoly> {
        &self.diff
    }

    /// Differential of a chord generator, by name, e.g. `d(Chord c11)`.
    pub fn d(&self, kind: ChordKind, i: u8, j: u8) -> Result<&NCPoly> {
        let g = Letter::chord(kind, i, j);
        self.diff.get(&g).ok_or_else(|| Error::Missing(format!("no generator {g}")))
    }

    pub fn n(&self) -> usize {
        self.braid.n()
    }

    pub fn generators_of_degree(&self, deg: i32) -> Vec<Letter> {
        self.generators.iter().copied().filter(|g| g.degree() == deg).collect()
    }

    /// Replaces one differential; meant for tests and experiments.
    pub fn with_differential(&self, g: Letter, p: NCPoly) -> Dga {
        let mut out = self.clone();
        if !out.diff.contains_key(&g) {
            out.generators.push(g);
        }
        out.diff.insert(g, p);
        out
    }

    pub fn check_d_squared(&self) -> D2Report {
        let residues: Vec<Option<(Letter, NCPoly)>> = self
            .generators
            .par_iter()
            .map(|g| {
                let dd = match self.diff[g].derive(&self.diff) {
                    Ok(p) => p,
                    Err(e) => return Some((*g, err_marker(&e))),
                };
                (!dd.is_zero()).then_some((*g, dd))
            })
            .collect();
        let failure = residues.into_iter().flatten().next();
        if let Some((g, r)) = &failure {
            debug!("d^2 fails on {g}: {r}");
        }
        D2Report { checked: self.generators.len(), failure }
    }

    /// Every differential is homogeneous of degree one less than its
    /// generator (or zero).
    pub fn check_degrees(&self) -> Result<()> {
        for g in &self.generators {
            match self.diff[g].homogeneity() {
                Homogeneity::Zero => {}
                Homogeneity::Homogeneous(d) if d == g.degree() - 1 => {}
                other => {
                    return Err(Error::Invariant(format!("differential of {g} has degree {other:?}")));
                }
            }
        }
        Ok(())
    }

    fn substitute_all(&self, v: Var, value: &Coeff) -> Result<Dga> {
        let mut out = self.clone();
        for p in out.diff.values_mut() {
            *p = p.substitute_var(v, value)?;
        }
        if value.is_zero() || value.as_constant().is_some() {
            out.algebra.ring.vars.retain(|w| *w != v);
        }
        Ok(out)
    }

    /// Substitutes values for commuting coefficient variables.
    pub fn specialize(&self, bindings: &[(Var, Coeff)]) -> Result<Dga> {
        let mut out = self.clone();
        for (v, value) in bindings {
            if !self.algebra.ring.vars.contains(v) {
                return Err(Error::Config(format!("{v} is not a commuting variable of this DGA")));
            }
            out = out.substitute_all(*v, value)?;
        }
        Ok(out)
    }

    /// Adds a canceling pair `x, y` with `|x| = degree`, `|y| = degree - 1`
    /// and `dx = y`.
    pub fn stabilize(&self, degree: i8) -> Result<Dga> {
        if degree < 1 {
            return Err(Error::Precondition("stabilization degree must be at least 1".into()));
        }
        let mut out = self.clone();
        let x = Letter::Aux { id: out.next_aux, degree };
        let y = Letter::Aux { id: out.next_aux + 1, degree: degree - 1 };
        out.next_aux += 2;
        out.generators.push(x);
        out.generators.push(y);
        out.diff.insert(x, NCPoly::letter(y));
        out.diff.insert(y, NCPoly::zero());
        Ok(out)
    }

    /// The quotient setting every chord with an index outside `strands` to
    /// zero, with strands and components relabeled as in the subbraid.
    pub fn sublink_quotient(&self, strands: &[u8]) -> Result<Dga> {
        let mut keep: Vec<u8> = strands.to_vec();
        keep.sort();
        keep.dedup();
        let comps = &self.components;
        for &s in &keep {
            if s == 0 || s as usize > self.n() {
                return Err(Error::Index(format!("strand {s} out of range")));
            }
            let alpha = comps.component_of(s);
            for t in 1..=self.n() as u8 {
                if comps.component_of(t) == alpha && !keep.contains(&t) {
                    return Err(Error::Precondition(format!(
                        "strand set {keep:?} is not a union of components (strand {t} is missing)"
                    )));
                }
            }
        }
        if comps.r > 1 && self.mode.resolved_star(true) != Star::Low {
            return Err(Error::Precondition("sublink quotients need the star strand at 0".into()));
        }
        if self.generators.iter().any(|g| matches!(g, Letter::Aux { .. })) {
            return Err(Error::Precondition("sublink quotient of a stabilized DGA".into()));
        }
        let sub = self.braid.sub_braid(&keep)?;
        let sub_comps = sub.components();
        let new_index = |s: u8| keep.iter().position(|&k| k == s).map(|p| p as u8 + 1);
        // component relabeling: old label -> label in the subbraid DGA
        let mut relabel: BTreeMap<u8, u8> = BTreeMap::new();
        for &s in &keep {
            let old = if comps.r == 1 { 0 } else { comps.component_of(s) };
            let new = if sub_comps.r == 1 { 0 } else { sub_comps.component_of(new_index(s).unwrap()) };
            relabel.insert(old, new);
        }
        let rename = |v: Var| match v {
            Var::Lambda(c) => Var::Lambda(relabel.get(&c).copied().unwrap_or(c)),
            Var::Mu(c) => Var::Mu(relabel.get(&c).copied().unwrap_or(c)),
            other => other,
        };
        let map_letter = |l: &Letter| -> Option<Letter> {
            match l {
                Letter::Chord(Chord { kind, i, j }) => Some(Letter::chord(*kind, new_index(*i)?, new_index(*j)?)),
                other => Some(*other),
            }
        };
        let mut generators = Vec::new();
        let mut diff = HashMap::new();
        for g in &self.generators {
            let Some(ng) = map_letter(g) else { continue };
            let img = self.diff[g]
                .substitute(
                    |l| match map_letter(l) {
                        None => Some(NCPoly::zero()),
                        Some(nl) if nl != *l => Some(NCPoly::letter(nl)),
                        Some(_) => None,
                    },
                    |c| c.clone(),
                )
                .rename_vars(rename);
            generators.push(ng);
            diff.insert(ng, img);
        }
        let mut algebra = self.algebra.clone();
        let rename_list = |vs: &mut Vec<Var>| {
            let mut out: Vec<Var> = vs
                .iter()
                .filter(|v| match v {
                    Var::Lambda(c) | Var::Mu(c) => relabel.contains_key(c),
                    _ => true,
                })
                .map(|v| rename(*v))
                .collect();
            out.sort();
            out.dedup();
            *vs = out;
        };
        rename_list(&mut algebra.ring.vars);
        rename_list(&mut algebra.hom_vars);
        Ok(Dga { braid: sub, mode: self.mode, components: sub_comps, algebra, generators, diff, next_aux: 0 })
    }

    /// Structural equality of generator sets and differentials.
    pub fn same_differentials(&self, other: &Dga) -> bool {
        let mut a = self.generators.clone();
        let mut b = other.generators.clone();
        a.sort();
        b.sort();
        a == b && a.iter().all(|g| self.diff[g] == other.diff[g])
    }

    pub fn export(&self) -> DgaExport {
        DgaExport {
            braid: self.braid.to_string(),
            n: self.n(),
            mode: self.mode.to_string(),
            ring: RingExport {
                variables: self.algebra.ring.vars.iter().map(|v| v.to_string()).collect(),
                homology_letters: self.algebra.hom_vars.iter().map(|v| v.to_string()).collect(),
                u_nonnegative: self.algebra.ring.u_nonnegative,
            },
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorExport { name: g.to_string(), degree: g.degree() })
                .collect(),
            differential: self.generators.iter().map(|g| (g.to_string(), self.diff[g].to_string())).collect(),
        }
    }
}

fn err_marker(e: &Error) -> NCPoly {
    log::warn!("d^2 check could not differentiate: {e}");
    NCPoly::one()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingExport {
    pub variables: Vec<String>,
    pub homology_letters: Vec<String>,
    pub u_nonnegative: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorExport {
    pub name: String,
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgaExport {
    pub braid: String,
    pub n: usize,
    pub mode: String,
    pub ring: RingExport,
    pub generators: Vec<GeneratorExport>,
    pub differential: BTreeMap<String, String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn braid(s: &str, n: usize) -> BraidWord {
        BraidWord::parse(s, Some(n)).unwrap()
    }

    fn p(s: &str) -> NCPoly {
        NCPoly::parse(s, AlgebraMode::Commuted).unwrap()
    }

    #[test]
    fn unknot_differentials() {
        let d = build_dga(&braid("", 1), DgaMode::topological()).unwrap();
        assert_eq!(d.generators().len(), 4);
        assert_eq!(d.d(ChordKind::C, 1, 1).unwrap(), &p("U - la - mu + la*mu"));
        assert_eq!(d.d(ChordKind::D, 1, 1).unwrap(), &p("1 - mu - la^-1*U + la^-1*mu"));
        assert_eq!(d.d(ChordKind::E, 1, 1).unwrap(), &p("-c11 - la*d11"));
        assert_eq!(d.d(ChordKind::F, 1, 1).unwrap(), &p("-d11 - la^-1*c11"));
        assert!(d.check_d_squared().passed());
    }

    #[test]
    fn generator_counts_and_degrees() {
        let d = build_dga(&braid("1 -2 1 -2", 3), DgaMode::topological()).unwrap();
        let count = |k: ChordKind| d.generators().iter().filter(|g| matches!(g, Letter::Chord(c) if c.kind == k)).count();
        assert_eq!((count(ChordKind::A), count(ChordKind::B)), (6, 6));
        for k in [ChordKind::C, ChordKind::D, ChordKind::E, ChordKind::F] {
            assert_eq!(count(k), 9);
        }
        d.check_degrees().unwrap();
        assert!(d.check_d_squared().passed());
    }

    #[test]
    fn trefoil_d_squared_all_modes() {
        let b = braid("1 1 1", 2);
        for v in [Variant::Topological, Variant::TransverseU, Variant::TransverseUV, Variant::Hat] {
            for m in [DgaMode::new(v), DgaMode::new(v).noncommutative()] {
                let d = build_dga(&b, m).unwrap();
                let r = d.check_d_squared();
                assert!(r.passed(), "{m}: {:?}", r.failure);
                d.check_degrees().unwrap();
            }
        }
    }

    #[test]
    fn corrupted_dga_fails_d_squared() {
        let d = build_dga(&braid("1 1 1", 2), DgaMode::topological()).unwrap();
        let e = Letter::chord(ChordKind::E, 1, 2);
        let de = d.differential(&e).unwrap();
        let (w, c) = de.terms().next().unwrap();
        let flipped = de.sub(&NCPoly::term(c.scale(&2.into()), w.clone()));
        let bad = d.with_differential(e, flipped);
        let r = bad.check_d_squared();
        assert_eq!(r.failure.map(|f| f.0), Some(e));
    }

    #[test]
    fn transverse_unknot_at_u_zero() {
        let d = build_dga(&braid("", 1), DgaMode::hat()).unwrap();
        assert_eq!(d.d(ChordKind::C, 1, 1).unwrap(), &p("-mu - la + la*mu"));
        assert_eq!(d.d(ChordKind::D, 1, 1).unwrap(), &p("1 - mu + la^-1*mu"));
        let t = build_dga(&braid("", 1), DgaMode::new(Variant::TransverseU)).unwrap();
        let s = t.specialize(&[(Var::U, Coeff::zero())]).unwrap();
        assert!(s.same_differentials(&d));
    }

    #[test]
    fn uv_at_v_one_is_u() {
        let b = braid("1 1 1", 2);
        let uv = build_dga(&b, DgaMode::new(Variant::TransverseUV)).unwrap();
        let u = build_dga(&b, DgaMode::new(Variant::TransverseU)).unwrap();
        assert!(uv.specialize(&[(Var::V, Coeff::one())]).unwrap().same_differentials(&u));
    }

    #[test]
    fn topological_u_exponents_can_be_negative_but_not_transverse() {
        let d = build_dga(&braid("1 1 1", 2), DgaMode::topological()).unwrap();
        let neg = d.differentials().values().any(|p| p.terms().any(|(_, c)| c.min_exp(Var::U) < 0));
        assert!(neg);
        assert!(matches!(d.specialize(&[(Var::U, Coeff::zero())]), Err(Error::NonUnit(_))));
    }

    #[test]
    fn stabilization_keeps_d_squared() {
        let d = build_dga(&braid("", 1), DgaMode::topological()).unwrap();
        let s = d.stabilize(2).unwrap();
        assert_eq!(s.generators().len(), 6);
        assert!(s.check_d_squared().passed());
        assert!(d.stabilize(0).is_err());
    }

    #[test]
    fn hopf_sublink_is_unknot() {
        let d = build_dga(&braid("1 1", 2), DgaMode::topological()).unwrap();
        assert!(d.check_d_squared().passed());
        let q = d.sublink_quotient(&[1]).unwrap();
        let u = build_dga(&braid("", 1), DgaMode::topological().with_star(Star::Low)).unwrap();
        assert!(q.same_differentials(&u));
        assert!(d.sublink_quotient(&[1, 2]).unwrap().same_differentials(&d));
        let trefoil = build_dga(&braid("1 1 1", 2), DgaMode::topological()).unwrap();
        assert!(trefoil.sublink_quotient(&[1]).is_err());
    }

    #[test]
    fn export_lists_all_generators() {
        let d = build_dga(&braid("", 1), DgaMode::topological()).unwrap();
        let e = d.export();
        assert_eq!(e.generators.len(), 4);
        assert_eq!(e.differential["c11"], "(-la - mu + U + la*mu)");
    }
}
