//! Augmentation polynomials by elimination, their symmetries, and the
//! HOMFLY-PT specialization check.

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use log::{debug, info, warn};
use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::augment::{enumerate_augmentations_with, AugSystem, CountOptions};
use crate::braid::BraidWord;
use crate::coeff::Var;
use crate::commpoly::{gcd, lmu_vars, resultant, CommPoly};
use crate::dga::{build_dga, DgaMode};
use crate::error::{Error, Result};
use crate::groebner::{groebner_lex, GroebnerOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElimMethod {
    ResultantChain,
    GroebnerLex,
}

impl ElimMethod {
    pub fn parse(s: &str) -> Result<ElimMethod> {
        match s {
            "resultant" | "resultant-chain" => Ok(ElimMethod::ResultantChain),
            "groebner" | "groebner-lex" => Ok(ElimMethod::GroebnerLex),
            _ => Err(Error::Config(format!("unknown elimination method {s:?} (resultant|groebner)"))),
        }
    }
}

impl fmt::Display for ElimMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElimMethod::ResultantChain => "resultant-chain",
            ElimMethod::GroebnerLex => "groebner-lex",
        })
    }
}

#[derive(Clone, Debug)]
pub struct AugPolyOptions {
    pub method: ElimMethod,
    /// Bind `U = 1` before eliminating.
    pub two_var: bool,
    pub groebner: GroebnerOptions,
    /// Primes whose augmentation points are used to validate the result.
    pub check_primes: Vec<u64>,
    pub count: CountOptions,
    /// Wall-clock budget for the elimination (either route).
    pub time_limit: Option<Duration>,
    /// Largest intermediate resultant, in terms.
    pub max_terms: usize,
    /// Intermediate resultants up to this size are made squarefree.
    pub squarefree_terms: usize,
}

impl Default for AugPolyOptions {
    fn default() -> Self {
        AugPolyOptions {
            method: ElimMethod::GroebnerLex,
            two_var: false,
            groebner: GroebnerOptions::default(),
            check_primes: vec![3, 5],
            count: CountOptions::default(),
            time_limit: Some(Duration::from_secs(120)),
            max_terms: 20_000,
            squarefree_terms: 200,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointCheck {
    pub prime: u64,
    pub points: usize,
    /// Points (la, mu, U) where the candidate does not vanish.
    pub failures: Vec<[u64; 3]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EliminationResult {
    #[serde(serialize_with = "as_string")]
    pub candidate: CommPoly,
    pub method: ElimMethod,
    pub two_var: bool,
    /// Eliminated variables, in order.
    pub eliminated: Vec<String>,
    pub squarefree_applied: bool,
    pub content_removed: bool,
    /// A monomial in la, mu, U was divided out.
    pub trivial_factors_removed: bool,
    /// Factors dropped because no finite-field augmentation point lies on them.
    pub removed_factors: Vec<String>,
    /// Factors kept although no point certifies them on their own.
    pub uncertified_factors: Vec<String>,
    pub point_checks: Vec<PointCheck>,
}

fn as_string<S: serde::Serializer>(p: &CommPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl EliminationResult {
    pub fn points_vanish(&self) -> bool {
        self.point_checks.iter().all(|c| c.failures.is_empty())
    }
}

fn is_unit_poly(p: &CommPoly) -> bool {
    p.constant_value().is_some_and(|c| c == BigInt::one() || c == -BigInt::one())
}

/// The augmentation equations with Laurent monomials cleared.
fn prepared_system(b: &BraidWord, opts: &AugPolyOptions) -> Result<(AugSystem, Vec<CommPoly>)> {
    if !b.is_knot() {
        return Err(Error::Precondition("augmentation polynomials are computed for knots only".into()));
    }
    let d = build_dga(b, DgaMode::topological())?;
    let sys = AugSystem::new(&d)?;
    let u = sys.vars.iter().position(|v| v == "U").expect("topological ring has U");
    let one = CommPoly::one_in(sys.vars.clone());
    let mut eqs: Vec<CommPoly> = Vec::new();
    for e in &sys.equations {
        let mut e = e.clone();
        if opts.two_var {
            e = e.substitute(u, &one)?;
        }
        let e = e.normalize();
        if !e.is_zero() && !eqs.contains(&e) {
            eqs.push(e);
        }
    }
    Ok((sys, eqs))
}

/// Projects polynomials free of chords to the variables `la, mu, U`.
fn to_lmu(p: &CommPoly) -> Result<CommPoly> {
    let vars = lmu_vars();
    let idx: Vec<usize> = vars.iter().map(|v| p.var_index(v).expect("la, mu, U present")).collect();
    for x in 0..p.vars().len() {
        if !idx.contains(&x) && p.contains_var(x) {
            return Err(Error::Invariant(format!("{} survived elimination in {p}", p.vars()[x])));
        }
    }
    Ok(CommPoly::from_terms(vars, p.terms().map(|(e, c)| (idx.iter().map(|&k| e[k]).collect(), c.clone()))))
}

fn eliminate_resultants(sys: &AugSystem, mut eqs: Vec<CommPoly>, opts: &AugPolyOptions) -> Result<(Vec<CommPoly>, Vec<String>)> {
    let deadline = opts.time_limit.map(|d| Instant::now() + d);
    let nu = sys.unit_vars.len();
    let mut eliminated = Vec::new();
    for x in nu..sys.num_vars() {
        let (with, without): (Vec<CommPoly>, Vec<CommPoly>) = eqs.into_iter().partition(|e| e.contains_var(x));
        eqs = without;
        if with.is_empty() {
            continue;
        }
        eliminated.push(sys.vars[x].clone());
        if with.len() == 1 {
            continue;
        }
        let (pi, pivot) = with
            .iter()
            .enumerate()
            .min_by_key(|(_, e)| (e.degree(x), e.num_terms()))
            .map(|(k, e)| (k, e.clone()))
            .unwrap();
        for (k, e) in with.iter().enumerate() {
            if k == pi {
                continue;
            }
            if deadline.is_some_and(|t| Instant::now() > t) {
                return Err(Error::Cap("resultant elimination exceeded its time budget".into()));
            }
            let r = resultant(&pivot, e, x)?;
            if r.num_terms() > opts.max_terms {
                return Err(Error::Cap(format!(
                    "resultant in {} has {} terms (cap {})",
                    sys.vars[x],
                    r.num_terms(),
                    opts.max_terms
                )));
            }
            if r.is_zero() {
                debug!("resultant in {} vanished; skipping one equation", sys.vars[x]);
                continue;
            }
            // Multiplicities only cost size here; skip the gcd on big inputs.
            let r = r.normalize();
            let r = if r.num_terms() <= opts.squarefree_terms || r.certainly_squarefree() { r.squarefree_part() } else { r };
            if !r.is_zero() && !is_unit_poly(&r) && !eqs.contains(&r) {
                eqs.push(r);
            } else if is_unit_poly(&r) {
                // a nonzero constant: the system has no solutions at all
                return Ok((vec![r], eliminated));
            }
        }
        debug!("eliminated {}: {} equations remain", sys.vars[x], eqs.len());
    }
    Ok((eqs, eliminated))
}

fn eliminate_groebner(sys: &AugSystem, eqs: Vec<CommPoly>, opts: &AugPolyOptions) -> Result<(Vec<CommPoly>, Vec<String>)> {
    let mut names = vec!["t_".to_string()];
    names.extend(sys.vars.iter().cloned());
    let vars = Arc::new(names);
    let mut ideal = eqs.iter().map(|e| e.with_vars(vars.clone())).collect::<Result<Vec<_>>>()?;
    let mut rab = CommPoly::var_in(vars.clone(), "t_")?;
    for v in ["la", "mu", "U"] {
        if !(opts.two_var && v == "U") {
            rab = rab.mul(&CommPoly::var_in(vars.clone(), v)?);
        }
    }
    ideal.push(rab.sub(&CommPoly::one_in(vars.clone())));
    let mut elim: Vec<&str> = vec!["t_"];
    let chord_names: Vec<String> = sys.vars[sys.unit_vars.len()..].to_vec();
    elim.extend(chord_names.iter().map(|s| s.as_str()));
    let gopts = GroebnerOptions { time_limit: opts.time_limit, ..opts.groebner };
    let r = groebner_lex(&ideal, &elim, &gopts)?;
    Ok((r.elimination, chord_names))
}

fn finite_field_points(b: &BraidWord, p: u64, opts: &AugPolyOptions) -> Result<Vec<[u64; 3]>> {
    let d = build_dga(b, DgaMode::topological())?;
    let sols = enumerate_augmentations_with(&d, p, &opts.count)?;
    let mut pts: Vec<[u64; 3]> = sols
        .iter()
        .map(|s| [s.var_values[&Var::Lambda(0)], s.var_values[&Var::Mu(0)], s.var_values[&Var::U]])
        .filter(|pt| !opts.two_var || pt[2] == 1)
        .collect();
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// Splits `g` into pairwise coprime pieces using gcds with the cofactors
/// `f / g` of the polynomials it divides.
fn refine(g: &CommPoly, others: &[CommPoly]) -> Vec<CommPoly> {
    let mut pieces = vec![g.clone()];
    for f in others {
        let Some(h) = f.div_exact(g) else { continue };
        let mut next = Vec::new();
        for q in pieces {
            let c = gcd(&q, &h);
            if c.is_constant() || q.equal_up_to_units(&c) {
                next.push(q);
            } else {
                next.push(q.div_exact(&c).unwrap().normalize());
                next.push(c.normalize());
            }
        }
        pieces = next;
    }
    pieces
}

/// Computes the (three- or two-variable) augmentation polynomial.
///
/// With a time limit the work runs on a helper thread; on timeout the
/// caller gets `Error::Cap` and the helper is abandoned (it is not
/// cancellable and keeps running until it finishes or the process exits).
pub fn augmentation_polynomial(b: &BraidWord, opts: &AugPolyOptions) -> Result<EliminationResult> {
    let Some(limit) = opts.time_limit else {
        return augmentation_polynomial_inner(b, opts);
    };
    let (tx, rx) = std::sync::mpsc::channel();
    let (b2, o2) = (b.clone(), opts.clone());
    std::thread::Builder::new()
        .name("augpoly".into())
        .spawn(move || {
            let _ = tx.send(augmentation_polynomial_inner(&b2, &o2));
        })
        .map_err(|e| Error::Invariant(format!("cannot spawn worker: {e}")))?;
    // small grace period so the inner budgets report first
    match rx.recv_timeout(limit + Duration::from_secs(2)) {
        Ok(r) => r,
        Err(_) => Err(Error::Cap(format!("augmentation polynomial exceeded its {}s time budget", limit.as_secs()))),
    }
}

fn augmentation_polynomial_inner(b: &BraidWord, opts: &AugPolyOptions) -> Result<EliminationResult> {
    let (sys, eqs) = prepared_system(b, opts)?;
    info!(
        "eliminating {} chords from {} equations by {}",
        sys.chords.len(),
        eqs.len(),
        opts.method
    );
    let (finals, eliminated) = match opts.method {
        ElimMethod::ResultantChain => eliminate_resultants(&sys, eqs, opts)?,
        ElimMethod::GroebnerLex => eliminate_groebner(&sys, eqs, opts)?,
    };
    let finals: Vec<CommPoly> = finals.iter().map(to_lmu).collect::<Result<Vec<_>>>()?;
    if finals.is_empty() {
        return Err(Error::Degenerate(
            "the elimination ideal is zero: the augmentation variety is not of codimension one".into(),
        ));
    }
    if finals.iter().any(|f| f.is_constant()) {
        return Err(Error::Degenerate("the elimination ideal is the unit ideal: no augmentations".into()));
    }
    let mut g = CommPoly::zero_in(lmu_vars());
    for f in &finals {
        g = gcd(&g, f);
    }
    let (stripped, mono) = g.strip_monomial();
    let trivial_factors_removed = mono.iter().any(|&x| x != 0);
    let content_removed = !stripped.content().is_one();
    if stripped.is_constant() {
        return Err(Error::Degenerate(
            "the elimination ideal has no codimension-one part (no common factor)".into(),
        ));
    }
    let normalized = stripped.normalize();
    let candidate = normalized.squarefree_part();
    let squarefree_applied = candidate != normalized;

    let mut points = Vec::new();
    for &p in &opts.check_primes {
        match finite_field_points(b, p, opts) {
            Ok(pts) => points.push((p, pts)),
            Err(e) if e.is_resource() => warn!("no point check over F_{p}: {e}"),
            Err(e) => return Err(e),
        }
    }

    let mut removed_factors = Vec::new();
    let mut uncertified_factors = Vec::new();
    let mut candidate = candidate;
    if opts.method == ElimMethod::ResultantChain && !points.is_empty() {
        let pieces = refine(&candidate, &finals);
        if pieces.len() > 1 {
            let mut keep = Vec::new();
            for (k, q) in pieces.iter().enumerate() {
                let mut on = false;
                let mut certified = false;
                for (p, pts) in &points {
                    for pt in pts {
                        if q.eval_mod(*p, pt) == Some(0) {
                            on = true;
                            let alone = pieces
                                .iter()
                                .enumerate()
                                .all(|(l, o)| l == k || o.eval_mod(*p, pt) != Some(0));
                            certified |= alone;
                        }
                    }
                }
                if !on {
                    removed_factors.push(q.to_string());
                } else {
                    if !certified {
                        uncertified_factors.push(q.to_string());
                    }
                    keep.push(q.clone());
                }
            }
            if !removed_factors.is_empty() {
                warn!("removed factors without augmentation points: {removed_factors:?}");
                candidate = keep.iter().fold(CommPoly::one_in(lmu_vars()), |acc, q| acc.mul(q)).normalize();
            }
        }
    }

    let point_checks = points
        .iter()
        .map(|(p, pts)| PointCheck {
            prime: *p,
            points: pts.len(),
            failures: pts.iter().filter(|pt| candidate.eval_mod(*p, *pt) != Some(0)).copied().collect(),
        })
        .collect();
    Ok(EliminationResult {
        candidate,
        method: opts.method,
        two_var: opts.two_var,
        eliminated,
        squarefree_applied,
        content_removed,
        trivial_factors_removed,
        removed_factors,
        uncertified_factors,
        point_checks,
    })
}

pub fn two_variable_augpoly(b: &BraidWord, opts: &AugPolyOptions) -> Result<EliminationResult> {
    let mut o = opts.clone();
    o.two_var = true;
    augmentation_polynomial(b, &o)
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    /// `P(la, mu, U) = P(la^-1 U, mu^-1 U, U)` up to units.
    pub self_symmetric: bool,
    /// `P_mirror(la, mu, U) = P(la U^-1, mu^-1, U^-1)` up to units.
    pub mirror_related: Option<bool>,
}

fn in_lmu(p: &CommPoly) -> Result<CommPoly> {
    p.with_vars(lmu_vars())
}

fn set_u_one(p: &CommPoly) -> CommPoly {
    p.substitute(2, &CommPoly::one_in(p.vars_arc())).expect("constant substitution")
}

/// Checks the symmetries of an augmentation polynomial (and, given the
/// polynomial of the mirror, the mirror relation). Polynomials without `U`
/// are treated as two-variable polynomials, i.e. compared at `U = 1`.
pub fn check_symmetries(p: &CommPoly, mirror: Option<&CommPoly>) -> Result<SymmetryReport> {
    let p = in_lmu(p)?;
    let two_var = !p.contains_var(2);
    let fix = |q: CommPoly| if two_var { set_u_one(&q) } else { q };
    let sym = fix(p.monomial_map(&[(1, vec![-1, 0, 1]), (1, vec![0, -1, 1]), (1, vec![0, 0, 1])]));
    let self_symmetric = sym.equal_up_to_units(&p);
    let mirror_related = match mirror {
        None => None,
        Some(m) => {
            let m = in_lmu(m)?;
            let img = fix(p.monomial_map(&[(1, vec![1, 0, -1]), (1, vec![0, -1, 0]), (1, vec![0, 0, -1])]));
            Some(img.equal_up_to_units(&m))
        }
    };
    Ok(SymmetryReport { self_symmetric, mirror_related })
}

#[derive(Clone, Debug, Serialize)]
pub struct HomflyReport {
    /// `P(0, U, U) = 0`.
    pub boundary_vanishes: bool,
    #[serde(serialize_with = "as_string")]
    pub f: CommPoly,
    #[serde(serialize_with = "opt_string")]
    pub quotient: Option<CommPoly>,
    #[serde(serialize_with = "opt_string")]
    pub expected: Option<CommPoly>,
    pub matches: Option<bool>,
}

fn opt_string<S: serde::Serializer>(p: &Option<CommPoly>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.serialize_some(&p.to_string()),
        None => s.serialize_none(),
    }
}

impl HomflyReport {
    pub fn passed(&self) -> bool {
        self.boundary_vanishes && self.quotient.is_some() && self.matches != Some(false)
    }
}

/// `P_K(a, q)` at `a = U^{-1/2}`, `q = 1`, as a polynomial in `la, mu, U`.
pub fn homfly_specialization(homfly: &CommPoly) -> Result<CommPoly> {
    let a = homfly.var_index("a").ok_or_else(|| Error::Config("HOMFLY-PT polynomial must use variables a, q".into()))?;
    let mut h = homfly.clone();
    if let Some(q) = homfly.var_index("q") {
        h = h.substitute(q, &CommPoly::one_in(h.vars_arc()))?;
    }
    let mut out = CommPoly::zero_in(lmu_vars());
    for (e, c) in h.terms() {
        if e[a] % 2 != 0 {
            return Err(Error::Precondition(format!("odd power a^{} cannot be specialized at a = U^(-1/2)", e[a])));
        }
        out.add_term(vec![0, 0, -e[a] / 2], c.clone());
    }
    Ok(out)
}

/// Extracts `f(U) = -c1(U, U) / (d c0 / d mu)(U, U)` from `P = c0 + c1 la + ...`
/// and compares `f / (U - 1)` with the specialized HOMFLY-PT polynomial.
pub fn homfly_check(p: &CommPoly, homfly: Option<&CommPoly>) -> Result<HomflyReport> {
    let p = in_lmu(p)?.normalize();
    let vars = p.vars_arc();
    if p.min_degree(0) < 0 || p.min_degree(1) < 0 || p.min_degree(2) < 0 {
        return Err(Error::Precondition("polynomial must be normalized (no negative exponents)".into()));
    }
    let cs = p.coeffs_in(0);
    let zero = CommPoly::zero_in(vars.clone());
    let c0 = cs.first().cloned().unwrap_or_else(|| zero.clone());
    let c1 = cs.get(1).cloned().unwrap_or_else(|| zero.clone());
    let u = CommPoly::var_in(vars.clone(), "U")?;
    let at = |q: &CommPoly| q.substitute(1, &u);
    let boundary_vanishes = at(&c0)?.is_zero();
    let dc0 = at(&c0.derivative(1))?;
    if dc0.is_zero() {
        return Err(Error::Degenerate("d c0 / d mu vanishes identically at mu = U".into()));
    }
    let num = at(&c1)?.neg();
    let f = num
        .div_laurent(&dc0)
        .ok_or_else(|| Error::Degenerate(format!("{dc0} does not divide {num}")))?;
    let um1 = u.sub(&CommPoly::one_in(vars.clone()));
    let quotient = f.div_laurent(&um1);
    let expected = homfly.map(homfly_specialization).transpose()?;
    let matches = match (&quotient, &expected) {
        (Some(q), Some(e)) => Some(q == e),
        (None, Some(_)) => Some(false),
        _ => None,
    };
    Ok(HomflyReport { boundary_vanishes, f, quotient, expected, matches })
}

/// `Aug_K(la = 0, mu = U, U) = 0`.
pub fn boundary_vanishes(p: &CommPoly) -> Result<bool> {
    let p = in_lmu(p)?;
    let (p, _) = p.clear_laurent();
    let vars = p.vars_arc();
    let z = p.substitute(0, &CommPoly::zero_in(vars.clone()))?;
    Ok(z.substitute(1, &CommPoly::var_in(vars, "U")?)?.is_zero())
}

/// Parses a polynomial in `la, mu, U`.
pub fn parse_lmu(s: &str) -> Result<CommPoly> {
    CommPoly::parse(s, lmu_vars())
}

/// Parses a HOMFLY-PT polynomial in `a, q`.
pub fn parse_homfly(s: &str) -> Result<CommPoly> {
    CommPoly::parse(s, Arc::new(vec!["a".into(), "q".into()]))
}
