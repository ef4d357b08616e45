//! Augmentations: verification, and counting/enumeration over small prime
//! fields by backtracking search.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use log::{debug, info};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::braid::BraidWord;
use crate::commpoly::CommPoly;
use crate::dga::{Dga, DgaMode};
use crate::error::{Error, Result};
use crate::ncpoly::{AlgebraMode, ChordKind, Letter, NCPoly};
use crate::coeff::Var;
use crate::ring::{PrimeField, Ring};

/// Default cap on the number of chord variables in a search.
pub const DEFAULT_CHORD_CAP: usize = 24;

/// A graded ring map out of a DGA: values for unit variables and for the
/// degree-0 generators; everything of nonzero degree goes to zero.
#[derive(Clone, Debug)]
pub struct Augmentation<R: Ring> {
    pub target: R,
    pub var_values: BTreeMap<Var, R::Elem>,
    pub chord_values: BTreeMap<Letter, R::Elem>,
}

#[derive(Clone, Debug)]
pub struct AugVerdict<E> {
    /// Degree-1 generators whose differential does not vanish, with the value.
    pub residues: Vec<(Letter, E)>,
}

impl<E> AugVerdict<E> {
    pub fn is_augmentation(&self) -> bool {
        self.residues.is_empty()
    }
}

pub fn is_augmentation<R: Ring>(d: &Dga, eps: &Augmentation<R>) -> Result<AugVerdict<R::Elem>> {
    let ring = &eps.target;
    for (v, x) in &eps.var_values {
        if !ring.is_unit(x) {
            return Err(Error::NonUnit(format!("{v} = {x:?} is not a unit in {}", ring.name())));
        }
    }
    let mut residues = Vec::new();
    for g in d.generators_of_degree(1) {
        let val = d.differential(&g).unwrap().eval(ring, &eps.var_values, &eps.chord_values)?;
        if !ring.is_zero(&val) {
            residues.push((g, val));
        }
    }
    Ok(AugVerdict { residues })
}

pub(crate) fn letter_name(l: &Letter) -> String {
    l.to_string()
}

/// The abelianization of `p` into commuting variables `vars`: homology
/// letters and coefficient variables map to their names, degree-0
/// generators to theirs, positive-degree generators to zero.
pub fn abelianize(p: &NCPoly, vars: &Arc<Vec<String>>) -> Result<CommPoly> {
    let index = |name: &str| -> Result<usize> {
        vars.iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Config(format!("abelianization has no variable {name}")))
    };
    let n = vars.len();
    let mut out = CommPoly::zero_in(vars.clone());
    for (w, c) in p.terms() {
        let mut base = vec![0i32; n];
        let mut zero = false;
        for l in w.letters() {
            match l {
                Letter::Hom { var, exp } => base[index(&var.to_string())?] += exp,
                _ if l.degree() != 0 => {
                    zero = true;
                    break;
                }
                _ => base[index(&letter_name(l))?] += 1,
            }
        }
        if zero {
            continue;
        }
        for (m, k) in c.terms() {
            let mut e = base.clone();
            for (v, x) in m.pairs() {
                e[index(&v.to_string())?] += x;
            }
            out.add_term(e, k.clone());
        }
    }
    Ok(out)
}

/// The HC₀ equation system of a DGA: the abelianized differentials of all
/// degree-1 generators.
#[derive(Clone, Debug)]
pub struct AugSystem {
    pub unit_vars: Vec<Var>,
    /// Degree-0 generators, sorted by how many equations they occur in.
    pub chords: Vec<Letter>,
    /// Names of `unit_vars` followed by `chords`.
    pub vars: Arc<Vec<String>>,
    pub equations: Vec<CommPoly>,
    pub sources: Vec<Letter>,
}

impl AugSystem {
    pub fn new(d: &Dga) -> Result<AugSystem> {
        AugSystem::reduced(d, None)
    }

    /// As [`AugSystem::new`], leaving out the equations coming from one
    /// family of degree-1 generators (`B`, `C` or `D`).
    pub fn reduced(d: &Dga, drop: Option<ChordKind>) -> Result<AugSystem> {
        let unit_vars: Vec<Var> = match d.algebra.mode {
            AlgebraMode::Commuted => d.algebra.ring.vars.clone(),
            AlgebraMode::FullyNoncommutative => {
                let mut v = d.algebra.hom_vars.clone();
                v.extend(d.algebra.ring.vars.iter().copied());
                v
            }
        };
        let zero_gens = d.generators_of_degree(0);
        let mut names: Vec<String> = unit_vars.iter().map(|v| v.to_string()).collect();
        names.extend(zero_gens.iter().map(letter_name));
        let all = Arc::new(names);
        let mut equations = Vec::new();
        let mut sources = Vec::new();
        for g in d.generators_of_degree(1) {
            if let (Some(k), Letter::Chord(c)) = (drop, g) {
                if c.kind == k {
                    continue;
                }
            }
            let e = abelianize(d.differential(&g).unwrap(), &all)?;
            if !e.is_zero() {
                equations.push(e);
                sources.push(g);
            }
        }
        let nu = unit_vars.len();
        let mut membership: Vec<(usize, usize)> = (0..zero_gens.len())
            .map(|k| (equations.iter().filter(|e| e.contains_var(nu + k)).count(), k))
            .collect();
        membership.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let chords: Vec<Letter> = membership.iter().map(|&(_, k)| zero_gens[k]).collect();
        let mut names: Vec<String> = unit_vars.iter().map(|v| v.to_string()).collect();
        names.extend(chords.iter().map(letter_name));
        let vars = Arc::new(names);
        let equations = equations.iter().map(|e| e.with_vars(vars.clone())).collect::<Result<Vec<_>>>()?;
        Ok(AugSystem { unit_vars, chords, vars, equations, sources })
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    /// Adjoins an equation (over the same variables).
    pub fn with_equation(mut self, e: CommPoly) -> AugSystem {
        self.equations.push(e);
        self
    }
}

/// Search options.
#[derive(Clone, Copy, Debug)]
pub struct CountOptions {
    pub chord_cap: usize,
    pub drop: Option<ChordKind>,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { chord_cap: DEFAULT_CHORD_CAP, drop: None }
    }
}

struct CTerm {
    coeff: u64,
    factors: Vec<(usize, i32)>,
}

struct CEq {
    terms: Vec<CTerm>,
    mask: u64,
    /// Whether the equation is affine-linear in each variable.
    linear: u64,
}

/// The equation system reduced mod p.
struct Compiled {
    p: u64,
    nvars: usize,
    nunits: usize,
    eqs: Vec<CEq>,
    /// `pow[v][e]` is `v^e` for `e` in `-max..=max`, offset by `max`.
    powers: Vec<Vec<u64>>,
    max_exp: i32,
}

impl Compiled {
    fn new(sys: &AugSystem, p: u64) -> Compiled {
        let nvars = sys.num_vars();
        let pb = BigInt::from(p);
        let mut max_exp = 1;
        let mut eqs = Vec::new();
        for e in &sys.equations {
            let mut terms = Vec::new();
            let mut mask = 0u64;
            for (exps, c) in e.terms() {
                let coeff = c.mod_floor(&pb).to_u64().unwrap();
                if coeff == 0 {
                    continue;
                }
                let factors: Vec<(usize, i32)> =
                    exps.iter().enumerate().filter(|(_, &x)| x != 0).map(|(k, &x)| (k, x)).collect();
                for &(k, x) in &factors {
                    mask |= 1 << k;
                    max_exp = max_exp.max(x.abs());
                }
                terms.push(CTerm { coeff, factors });
            }
            let mut linear = 0u64;
            for k in 0..nvars {
                let ok = terms.iter().all(|t| t.factors.iter().all(|&(v, x)| v != k || x == 1));
                if ok {
                    linear |= 1 << k;
                }
            }
            eqs.push(CEq { terms, mask, linear });
        }
        let powers = (0..p)
            .map(|v| {
                (-max_exp..=max_exp)
                    .map(|e| {
                        if v == 0 {
                            if e == 0 { 1 } else { 0 }
                        } else {
                            let b = if e < 0 { pow_mod(v, p - 2, p) } else { v };
                            pow_mod(b, e.unsigned_abs() as u64, p)
                        }
                    })
                    .collect()
            })
            .collect();
        Compiled { p, nvars, nunits: sys.unit_vars.len(), eqs, powers, max_exp }
    }

    fn pw(&self, v: u64, e: i32) -> u64 {
        self.powers[v as usize][(e + self.max_exp) as usize]
    }

    fn eval(&self, eq: &CEq, vals: &[u64]) -> u64 {
        let p = self.p;
        let mut acc = 0;
        for t in &eq.terms {
            let mut x = t.coeff;
            for &(k, e) in &t.factors {
                x = x * self.pw(vals[k], e) % p;
            }
            acc += x;
        }
        acc % p
    }

    /// Splits an equation linear in `v` as `a * v + b`.
    fn linear_parts(&self, eq: &CEq, vals: &[u64], v: usize) -> (u64, u64) {
        let p = self.p;
        let (mut a, mut b) = (0, 0);
        for t in &eq.terms {
            let mut x = t.coeff;
            let mut has = false;
            for &(k, e) in &t.factors {
                if k == v {
                    has = true;
                } else {
                    x = x * self.pw(vals[k], e) % p;
                }
            }
            if has {
                a += x;
            } else {
                b += x;
            }
        }
        (a % p, b % p)
    }

    fn domain(&self, v: usize) -> std::ops::Range<u64> {
        if v < self.nunits {
            1..self.p
        } else {
            0..self.p
        }
    }

    /// Checks equations completed by assigning `last` and looks for a
    /// forced assignment. `None` means the branch is dead.
    fn propagate(&self, vals: &[u64], assigned: u64, last: Option<usize>) -> Option<Option<(usize, u64)>> {
        let mut forced = None;
        for eq in &self.eqs {
            let open = eq.mask & !assigned;
            if open == 0 {
                let touched = last.is_none_or(|l| eq.mask & (1 << l) != 0);
                if touched && self.eval(eq, vals) != 0 {
                    return None;
                }
            } else if forced.is_none() && open.count_ones() == 1 && eq.linear & open != 0 {
                let v = open.trailing_zeros() as usize;
                let (a, b) = self.linear_parts(eq, vals, v);
                if a == 0 {
                    if b != 0 {
                        return None;
                    }
                } else {
                    let x = (self.p - b) % self.p * pow_mod(a, self.p - 2, self.p) % self.p;
                    if v < self.nunits && x == 0 {
                        return None;
                    }
                    forced = Some((v, x));
                }
            }
        }
        Some(forced)
    }

    fn search(&self, vals: &mut Vec<u64>, assigned: u64, last: Option<usize>, out: &mut SearchOut) {
        let forced = match self.propagate(vals, assigned, last) {
            None => return,
            Some(f) => f,
        };
        if assigned.count_ones() as usize == self.nvars {
            out.record(vals);
            return;
        }
        if let Some((v, x)) = forced {
            vals[v] = x;
            self.search(vals, assigned | (1 << v), Some(v), out);
            return;
        }
        let v = (0..self.nvars).find(|&k| assigned & (1 << k) == 0).unwrap();
        for x in self.domain(v) {
            vals[v] = x;
            self.search(vals, assigned | (1 << v), Some(v), out);
        }
    }

    fn run(&self, collect: bool) -> SearchOut {
        let mut root = vec![0u64; self.nvars];
        if self.nvars == 0 {
            let mut out = SearchOut::new(collect);
            self.search(&mut root, 0, None, &mut out);
            return out;
        }
        let outs: Vec<SearchOut> = self
            .domain(0)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|x| {
                let mut vals = vec![0u64; self.nvars];
                vals[0] = x;
                let mut out = SearchOut::new(collect);
                if self.eqs.iter().all(|e| e.mask != 0 || self.eval(e, &vals) == 0) {
                    self.search(&mut vals, 1, Some(0), &mut out);
                }
                out
            })
            .collect();
        let mut total = SearchOut::new(collect);
        for o in outs {
            total.count += o.count;
            total.solutions.extend(o.solutions);
        }
        total
    }
}

struct SearchOut {
    count: u64,
    collect: bool,
    solutions: Vec<Vec<u64>>,
}

impl SearchOut {
    fn new(collect: bool) -> SearchOut {
        SearchOut { count: 0, collect, solutions: Vec::new() }
    }

    fn record(&mut self, vals: &[u64]) {
        self.count += 1;
        if self.collect {
            self.solutions.push(vals.to_vec());
        }
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

fn check_search(algebra: AlgebraMode, p: u64, sys: &AugSystem, opts: &CountOptions) -> Result<PrimeField> {
    if algebra != AlgebraMode::Commuted {
        return Err(Error::Mode("augmentation counting needs the commuted algebra".into()));
    }
    let field = PrimeField::new(p).ok_or_else(|| Error::Config(format!("{p} is not a prime")))?;
    if p > 1 << 20 {
        return Err(Error::Cap(format!("prime {p} is too large for exhaustive search")));
    }
    if sys.chords.len() > opts.chord_cap {
        return Err(Error::Cap(format!(
            "{} chord variables exceed the cap of {}",
            sys.chords.len(),
            opts.chord_cap
        )));
    }
    if sys.num_vars() > 63 {
        return Err(Error::Cap(format!("{} variables exceed the search limit of 63", sys.num_vars())));
    }
    Ok(field)
}

/// Counts augmentations over `F_p`, i.e. solutions of the equation system
/// with unit values for the coefficient variables.
pub fn count_augmentations(d: &Dga, p: u64) -> Result<u64> {
    count_augmentations_with(d, p, &CountOptions::default())
}

pub fn count_augmentations_with(d: &Dga, p: u64, opts: &CountOptions) -> Result<u64> {
    let sys = AugSystem::reduced(d, opts.drop)?;
    count_system(d, &sys, p, opts)
}

/// Counts solutions of an explicit system built from `d`.
pub fn count_system(d: &Dga, sys: &AugSystem, p: u64, opts: &CountOptions) -> Result<u64> {
    check_search(d.algebra.mode, p, sys, opts)?;
    debug!("counting over F_{p}: {} variables, {} equations", sys.num_vars(), sys.equations.len());
    let n = Compiled::new(sys, p).run(false).count;
    info!("{} augmentations over F_{p} for {}", n, d.braid.canonical());
    Ok(n)
}

/// Counts augmentations of the DGA of `b` in `mode` without building the
/// full DGA when the commuting equations can be computed directly.
pub fn count_braid(b: &BraidWord, mode: DgaMode, p: u64, opts: &CountOptions) -> Result<u64> {
    let direct = crate::abelian::has_direct_system(b, mode);
    if direct && b.n() * (b.n() - 1) <= opts.chord_cap {
        if let Some(size) = crate::evaluate::evaluation_size(b, p).filter(|&s| s <= crate::evaluate::EVALUATION_CAP) {
            debug!("counting [{b}] by evaluation over {size} chord assignments");
            let n = crate::evaluate::count_by_evaluation(b, mode, p, opts.drop)?;
            info!("{} augmentations over F_{p} for {} ({})", n, b.canonical(), mode);
            return Ok(n);
        }
    }
    let sys = crate::abelian::equation_system(b, mode, opts.drop)?;
    check_search(mode.algebra, p, &sys, opts)?;
    let n = Compiled::new(&sys, p).run(false).count;
    info!("{} augmentations over F_{p} for {} ({})", n, b.canonical(), mode);
    Ok(n)
}

pub fn enumerate_augmentations(d: &Dga, p: u64) -> Result<Vec<Augmentation<PrimeField>>> {
    enumerate_augmentations_with(d, p, &CountOptions::default())
}

pub fn enumerate_augmentations_with(d: &Dga, p: u64, opts: &CountOptions) -> Result<Vec<Augmentation<PrimeField>>> {
    let sys = AugSystem::reduced(d, opts.drop)?;
    enumerate_system(d, &sys, p, opts)
}

pub fn enumerate_system(d: &Dga, sys: &AugSystem, p: u64, opts: &CountOptions) -> Result<Vec<Augmentation<PrimeField>>> {
    let field = check_search(d.algebra.mode, p, sys, opts)?;
    let out = Compiled::new(sys, p).run(true);
    let nu = sys.unit_vars.len();
    let mut sols: Vec<Augmentation<PrimeField>> = out
        .solutions
        .into_iter()
        .map(|vals| Augmentation {
            target: field.clone(),
            var_values: sys.unit_vars.iter().copied().zip(vals[..nu].iter().copied()).collect(),
            chord_values: sys.chords.iter().copied().zip(vals[nu..].iter().copied()).collect(),
        })
        .collect();
    sols.sort_by(|a, b| {
        (a.var_values.values().collect::<Vec<_>>(), a.chord_values.values().collect::<Vec<_>>())
            .cmp(&(b.var_values.values().collect(), b.chord_values.values().collect()))
    });
    Ok(sols)
}

/// Projection of finite-field augmentations to the given unit variables,
/// without repetitions.
pub fn project(sols: &[Augmentation<PrimeField>], onto: &[Var]) -> BTreeSet<Vec<u64>> {
    sols.iter()
        .map(|s| onto.iter().map(|v| s.var_values.get(v).copied().unwrap_or(1)).collect())
        .collect()
}

/// The augmentation number of the hat DGA (a transverse invariant).
pub fn transverse_augmentation_number(b: &BraidWord, p: u64) -> Result<u64> {
    transverse_augmentation_number_with(b, p, &CountOptions::default())
}

pub fn transverse_augmentation_number_with(b: &BraidWord, p: u64, opts: &CountOptions) -> Result<u64> {
    if !b.is_knot() {
        return Err(Error::Precondition("transverse augmentation numbers are defined for knots only".into()));
    }
    count_braid(b, DgaMode::hat(), p, opts)
}

/// Side-by-side data for two braids whose closures may be transversely
/// distinct.
#[derive(Clone, Debug, Serialize)]
pub struct TransverseComparison {
    pub prime: u64,
    pub strands: [usize; 2],
    pub writhe: [i64; 2],
    pub self_linking: [i64; 2],
    pub topological_counts: [u64; 2],
    pub hat_counts: [u64; 2],
    /// Same self-linking number, different hat counts.
    pub distinguished: bool,
}

pub fn compare_transverse(b1: &BraidWord, b2: &BraidWord, p: u64, opts: &CountOptions) -> Result<TransverseComparison> {
    let mut tc = [0; 2];
    let mut hc = [0; 2];
    for (k, b) in [b1, b2].into_iter().enumerate() {
        tc[k] = count_braid(b, DgaMode::topological(), p, opts)?;
        hc[k] = transverse_augmentation_number_with(b, p, opts)?;
    }
    let sl = [b1.self_linking()?, b2.self_linking()?];
    Ok(TransverseComparison {
        prime: p,
        strands: [b1.n(), b2.n()],
        writhe: [b1.writhe(), b2.writhe()],
        self_linking: sl,
        topological_counts: tc,
        hat_counts: hc,
        distinguished: sl[0] == sl[1] && hc[0] != hc[1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::build_dga;
    use crate::ring::Integers;

    fn knot(s: &str) -> BraidWord {
        BraidWord::parse(s, None).unwrap()
    }

    #[test]
    fn unknot_count_and_points() {
        let d = build_dga(&BraidWord::identity(1).unwrap(), DgaMode::topological()).unwrap();
        assert_eq!(count_augmentations(&d, 3).unwrap(), 3);
        let sols = enumerate_augmentations(&d, 3).unwrap();
        let pts = project(&sols, &[Var::Lambda(0), Var::Mu(0), Var::U]);
        let expect: BTreeSet<Vec<u64>> = [vec![1, 1, 1], vec![1, 2, 1], vec![2, 1, 1]].into_iter().collect();
        assert_eq!(pts, expect);
        for s in &sols {
            assert!(is_augmentation(&d, s).unwrap().is_augmentation());
        }
    }

    #[test]
    fn hat_unknot() {
        assert_eq!(transverse_augmentation_number(&BraidWord::identity(1).unwrap(), 3).unwrap(), 1);
    }

    #[test]
    fn trefoil_integer_augmentation() {
        let d = build_dga(&knot("1 1 1"), DgaMode::topological()).unwrap();
        let mk = |a12: i64| Augmentation {
            target: Integers,
            var_values: [(Var::Lambda(0), BigInt::from(1)), (Var::Mu(0), BigInt::from(-1)), (Var::U, BigInt::from(1))]
                .into_iter()
                .collect(),
            chord_values: [(Letter::a(1, 2), BigInt::from(a12)), (Letter::a(2, 1), BigInt::from(-2))].into_iter().collect(),
        };
        assert!(is_augmentation(&d, &mk(-2)).unwrap().is_augmentation());
        let v = is_augmentation(&d, &mk(0)).unwrap();
        assert!(!v.is_augmentation());
        let mut bad = mk(-2);
        bad.var_values.insert(Var::U, BigInt::from(2));
        assert!(matches!(is_augmentation(&d, &bad), Err(Error::NonUnit(_))));
    }

    #[test]
    fn contradictory_system_is_empty() {
        let d = build_dga(&knot("1 1 1"), DgaMode::topological()).unwrap();
        let d2 = d.with_differential(Letter::Aux { id: 90, degree: 1 }, NCPoly::one());
        assert!(enumerate_augmentations(&d2, 3).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let d = build_dga(&knot("1 1 1"), DgaMode::topological()).unwrap();
        let opts = CountOptions { chord_cap: 1, drop: None };
        assert!(matches!(count_augmentations_with(&d, 3, &opts), Err(Error::Cap(_))));
    }
}
