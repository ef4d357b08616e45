//! Buchberger's algorithm over Q with lexicographic order, used for
//! elimination.

use std::sync::Arc;
use std::time::{Duration, Instant};

use log::debug;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::commpoly::CommPoly;
use crate::error::{Error, Result};

type Mono = Vec<u16>;

/// Polynomial over Q, terms sorted by decreasing lex order.
#[derive(Clone, Debug, PartialEq)]
struct GPoly {
    terms: Vec<(Mono, BigRational)>,
}

fn divides(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn mono_sub(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn mono_add(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn degree(a: &Mono) -> u32 {
    a.iter().map(|&x| x as u32).sum()
}

impl GPoly {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Mono {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigRational {
        &self.terms[0].1
    }

    fn monic(mut self) -> GPoly {
        if let Some(c) = self.terms.first().map(|t| t.1.clone()) {
            for t in &mut self.terms {
                t.1 = &t.1 / &c;
            }
        }
        self
    }

    /// `self - c * x^shift * other`
    fn sub_mul(&self, c: &BigRational, shift: &Mono, other: &GPoly) -> GPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |k: usize| mono_add(&other.terms[k].0, shift);
        let mut next_j = if j < other.terms.len() { Some(shifted(j)) } else { None };
        while i < self.terms.len() || next_j.is_some() {
            let take_self = match (&next_j, self.terms.get(i)) {
                (None, _) => 1,
                (Some(_), None) => -1,
                (Some(m), Some((a, _))) => match a.cmp(m) {
                    std::cmp::Ordering::Greater => 1,
                    std::cmp::Ordering::Less => -1,
                    std::cmp::Ordering::Equal => 0,
                },
            };
            match take_self {
                1 => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                -1 => {
                    out.push((next_j.take().unwrap(), -(c * &other.terms[j].1)));
                    j += 1;
                    next_j = if j < other.terms.len() { Some(shifted(j)) } else { None };
                }
                _ => {
                    let v = &self.terms[i].1 - c * &other.terms[j].1;
                    if !v.is_zero() {
                        out.push((next_j.take().unwrap(), v));
                    }
                    i += 1;
                    j += 1;
                    next_j = if j < other.terms.len() { Some(shifted(j)) } else { None };
                }
            }
        }
        GPoly { terms: out }
    }
}

/// Full reduction of `f` modulo `g`.
fn reduce(f: &GPoly, g: &[GPoly], deadline: Option<Instant>) -> Result<GPoly> {
    let mut f = f.clone();
    let mut rem: Vec<(Mono, BigRational)> = Vec::new();
    let mut steps = 0u32;
    while !f.is_zero() {
        steps = steps.wrapping_add(1);
        if steps % 256 == 0 {
            check_deadline(deadline)?;
        }
        let (m, c) = f.terms[0].clone();
        match g.iter().find(|h| divides(h.lm(), &m)) {
            Some(h) => {
                let q = &c / h.lc();
                f = f.sub_mul(&q, &mono_sub(&m, h.lm()), h);
            }
            None => {
                rem.push((m, c));
                f.terms.remove(0);
            }
        }
    }
    Ok(GPoly { terms: rem })
}

fn check_deadline(deadline: Option<Instant>) -> Result<()> {
    match deadline {
        Some(t) if Instant::now() > t => Err(Error::Cap("Gröbner computation exceeded its time budget".into())),
        _ => Ok(()),
    }
}

fn s_poly(a: &GPoly, b: &GPoly) -> GPoly {
    let l = lcm(a.lm(), b.lm());
    let sa = GPoly { terms: a.terms.iter().map(|(m, c)| (mono_add(m, &mono_sub(&l, a.lm())), c / a.lc())).collect() };
    sa.sub_mul(&b.lc().recip(), &mono_sub(&l, b.lm()), b)
}

#[derive(Clone, Copy, Debug)]
pub struct GroebnerOptions {
    pub max_vars: usize,
    pub max_basis: usize,
    pub max_pairs: usize,
    pub time_limit: Option<Duration>,
}

impl Default for GroebnerOptions {
    fn default() -> Self {
        GroebnerOptions { max_vars: 12, max_basis: 400, max_pairs: 50_000, time_limit: Some(Duration::from_secs(120)) }
    }
}

#[derive(Clone, Debug)]
pub struct GroebnerResult {
    /// Variable order used (eliminated variables first).
    pub order: Arc<Vec<String>>,
    /// Reduced basis over `order`, primitive integer polynomials.
    pub basis: Vec<CommPoly>,
    /// Basis elements free of the eliminated variables, over the input
    /// variable list.
    pub elimination: Vec<CommPoly>,
}

/// Reduced lex Gröbner basis with `elim_vars` highest, plus the
/// elimination ideal's generators.
pub fn groebner_lex(ideal: &[CommPoly], elim_vars: &[&str], opts: &GroebnerOptions) -> Result<GroebnerResult> {
    let Some(first) = ideal.first() else {
        return Err(Error::Precondition("empty ideal".into()));
    };
    let vars = first.vars_arc();
    if vars.len() > opts.max_vars {
        return Err(Error::Cap(format!(
            "{} variables exceed the Gröbner cap of {} ({})",
            vars.len(),
            opts.max_vars,
            vars.join(",")
        )));
    }
    let mut order: Vec<String> = Vec::new();
    for v in elim_vars {
        if !vars.iter().any(|w| w == v) {
            return Err(Error::Config(format!("unknown elimination variable {v}")));
        }
        order.push(v.to_string());
    }
    order.extend(vars.iter().filter(|v| !elim_vars.contains(&v.as_str())).cloned());
    let order = Arc::new(order);
    let mut input = Vec::new();
    for p in ideal {
        if p.is_laurent() {
            return Err(Error::Precondition(format!("Laurent polynomial in ideal: {p}")));
        }
        let q = p.with_vars(order.clone())?;
        if !q.is_zero() {
            input.push(to_gpoly(&q));
        }
    }
    let basis = buchberger(input, opts)?;
    let k = elim_vars.len();
    let basis: Vec<CommPoly> = basis.iter().map(|g| from_gpoly(g, &order)).collect();
    let elimination = basis
        .iter()
        .filter(|g| (0..k).all(|x| !g.contains_var(x)))
        .map(|g| g.with_vars(vars.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroebnerResult { order, basis, elimination })
}

fn to_gpoly(p: &CommPoly) -> GPoly {
    let mut terms: Vec<(Mono, BigRational)> =
        p.terms().map(|(e, c)| (e.iter().map(|&x| x as u16).collect(), BigRational::from_integer(c.clone()))).collect();
    terms.sort_by(|a, b| b.0.cmp(&a.0));
    GPoly { terms }.monic()
}

fn from_gpoly(g: &GPoly, vars: &Arc<Vec<String>>) -> CommPoly {
    let den = g.terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let p = CommPoly::from_terms(
        vars.clone(),
        g.terms.iter().map(|(m, c)| (m.iter().map(|&x| x as i32).collect(), (c * BigRational::from_integer(den.clone())).to_integer())),
    );
    let mut c = p.content();
    if p.leading_term().is_some_and(|(_, x)| x.is_negative()) {
        c = -c;
    }
    if c.is_zero() {
        p
    } else {
        CommPoly::from_terms(vars.clone(), p.terms().map(|(e, x)| (e.clone(), x / &c)))
    }
}

fn buchberger(input: Vec<GPoly>, opts: &GroebnerOptions) -> Result<Vec<GPoly>> {
    let mut g: Vec<GPoly> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut processed = 0usize;
    let deadline = opts.time_limit.map(|d| Instant::now() + d);
    let add = |h: GPoly, g: &mut Vec<GPoly>, pairs: &mut Vec<(usize, usize)>| {
        let k = g.len();
        let hm = h.lm().clone();
        // Gebauer-Möller: drop pairs whose lcm is a proper multiple via h
        pairs.retain(|&(i, j)| {
            let l = lcm(g[i].lm(), g[j].lm());
            !(divides(&hm, &l) && lcm(g[i].lm(), &hm) != l && lcm(g[j].lm(), &hm) != l)
        });
        for i in 0..k {
            pairs.push((i, k));
        }
        g.push(h);
    };
    for f in input {
        let r = reduce(&f, &g, deadline)?;
        if !r.is_zero() {
            add(r.monic(), &mut g, &mut pairs);
        }
    }
    while !pairs.is_empty() {
        // normal strategy: smallest lcm by degree, then lex
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .map(|(n, &(i, j))| {
                let l = lcm(g[i].lm(), g[j].lm());
                (n, (degree(&l), l))
            })
            .min_by(|a, b| a.1.cmp(&b.1))
            .unwrap();
        let (i, j) = pairs.swap_remove(idx);
        processed += 1;
        if processed > opts.max_pairs {
            return Err(Error::Cap(format!("Gröbner computation exceeded {} S-pairs", opts.max_pairs)));
        }
        let (a, b) = (g[i].lm(), g[j].lm());
        if a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0) {
            continue;
        }
        let r = reduce(&s_poly(&g[i], &g[j]), &g, deadline)?;
        if r.is_zero() {
            continue;
        }
        if r.terms.len() == 1 && r.lm().iter().all(|&x| x == 0) {
            debug!("ideal contains a unit");
            return Ok(vec![GPoly { terms: vec![(r.lm().clone(), BigRational::one())] }]);
        }
        add(r.monic(), &mut g, &mut pairs);
        if g.len() > opts.max_basis {
            return Err(Error::Cap(format!("Gröbner basis exceeded {} elements", opts.max_basis)));
        }
    }
    // minimal, then reduced
    let mut minimal: Vec<GPoly> = Vec::new();
    for (k, p) in g.iter().enumerate() {
        let redundant = g.iter().enumerate().any(|(l, q)| {
            l != k && divides(q.lm(), p.lm()) && (q.lm() != p.lm() || l < k)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut reduced = Vec::new();
    for k in 0..minimal.len() {
        let others: Vec<GPoly> = minimal.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, q)| q.clone()).collect();
        let head = GPoly { terms: vec![minimal[k].terms[0].clone()] };
        let tail = GPoly { terms: minimal[k].terms[1..].to_vec() };
        let mut r = head;
        r.terms.extend(reduce(&tail, &others, deadline)?.terms);
        reduced.push(r.monic());
    }
    reduced.sort_by(|a, b| a.lm().cmp(b.lm()));
    debug!("Gröbner basis with {} elements after {processed} pairs", reduced.len());
    Ok(reduced)
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
    fn simple_elimination() {
        let v = vars(&["x", "y"]);
        let r = groebner_lex(&[p("x - 1", &v), p("y - x", &v)], &["x"], &Default::default()).unwrap();
        assert_eq!(r.elimination, vec![p("y - 1", &v)]);
    }

    #[test]
    fn unit_ideal() {
        let v = vars(&["x", "y"]);
        let r = groebner_lex(&[p("1", &v)], &["x"], &Default::default()).unwrap();
        assert_eq!(r.basis.len(), 1);
        assert!(r.basis[0].is_constant());
        let r = groebner_lex(&[p("x*y - 1", &v), p("x", &v)], &["x"], &Default::default()).unwrap();
        assert_eq!(r.elimination, vec![p("1", &v)]);
    }

    #[test]
    fn circle_and_line() {
        // x^2 + y^2 = 1, y = x  =>  2 x^2 = 1
        let v = vars(&["y", "x"]);
        let r = groebner_lex(&[p("x^2 + y^2 - 1", &v), p("y - x", &v)], &["y"], &Default::default()).unwrap();
        assert_eq!(r.elimination, vec![p("2*x^2 - 1", &v)]);
    }

    #[test]
    fn cap_refuses() {
        let v = vars(&["a", "b", "c"]);
        let opts = GroebnerOptions { max_vars: 2, ..Default::default() };
        assert!(matches!(groebner_lex(&[p("a", &v)], &["a"], &opts), Err(Error::Cap(_))));
    }
}
