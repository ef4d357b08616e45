//! Free (noncommutative) algebra over the Laurent coefficient ring.
//!
//! Words are products of chord generators `a_ij .. f_ij`, homology letters
//! (only in the fully noncommutative algebra) and auxiliary generators added
//! by stabilization. Polynomials are sparse maps from canonical words to
//! nonzero [`Coeff`]s, kept in a fixed global order so that equal
//! polynomials always serialize identically.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::coeff::{Coeff, Mono, Var};
use crate::error::{Error, Result};
use crate::ring::Ring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ChordKind {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl ChordKind {
    pub const ALL: [ChordKind; 6] = [ChordKind::A, ChordKind::B, ChordKind::C, ChordKind::D, ChordKind::E, ChordKind::F];

    pub fn degree(self) -> i32 {
        match self {
            ChordKind::A => 0,
            ChordKind::B | ChordKind::C | ChordKind::D => 1,
            ChordKind::E | ChordKind::F => 2,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            ChordKind::A => 'a',
            ChordKind::B => 'b',
            ChordKind::C => 'c',
            ChordKind::D => 'd',
            ChordKind::E => 'e',
            ChordKind::F => 'f',
        }
    }

    fn from_symbol(c: char) -> Option<ChordKind> {
        ChordKind::ALL.into_iter().find(|k| k.symbol() == c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Chord {
    pub kind: ChordKind,
    pub i: u8,
    pub j: u8,
}

impl Chord {
    pub fn new(kind: ChordKind, i: u8, j: u8) -> Chord {
        Chord { kind, i, j }
    }

    pub fn a(i: u8, j: u8) -> Chord {
        Chord::new(ChordKind::A, i, j)
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.i < 10 && self.j < 10 {
            write!(f, "{}{}{}", self.kind.symbol(), self.i, self.j)
        } else {
            write!(f, "{}{}_{}", self.kind.symbol(), self.i, self.j)
        }
    }
}

/// One generator letter of the free algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    Chord(Chord),
    /// Invertible homology letter with a nonzero exponent.
    Hom { var: Var, exp: i32 },
    /// Generator added by stabilization.
    Aux { id: u16, degree: i8 },
}

impl Letter {
    pub fn chord(kind: ChordKind, i: u8, j: u8) -> Letter {
        Letter::Chord(Chord::new(kind, i, j))
    }

    pub fn a(i: u8, j: u8) -> Letter {
        Letter::Chord(Chord::a(i, j))
    }

    pub fn hom(var: Var, exp: i32) -> Letter {
        Letter::Hom { var, exp }
    }

    pub fn degree(&self) -> i32 {
        match self {
            Letter::Chord(c) => c.kind.degree(),
            Letter::Hom { .. } => 0,
            Letter::Aux { degree, .. } => *degree as i32,
        }
    }

    pub fn is_hom(&self) -> bool {
        matches!(self, Letter::Hom { .. })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Chord(c) => write!(f, "{c}"),
            Letter::Hom { var, exp: 1 } => write!(f, "{var}"),
            Letter::Hom { var, exp } => write!(f, "{var}^{exp}"),
            Letter::Aux { id, .. } => write!(f, "x{id}"),
        }
    }
}

/// Canonical word: adjacent homology letters with the same variable are
/// merged and dropped when their exponent cancels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    degree: i32,
    letters: SmallVec<[Letter; 6]>,
}

impl Word {
    pub fn empty() -> Word {
        Word::default()
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut w = Word::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Appends a letter. Homology letters of one link component commute
    /// with each other (they live in the abelian group `pi_1` of a torus),
    /// so a run of them is kept as sorted blocks, one per component.
    pub fn push(&mut self, l: Letter) {
        if let Letter::Hom { var, exp } = l {
            if exp == 0 {
                return;
            }
            let group = hom_group(var);
            let mut start = self.letters.len();
            while start > 0 {
                match self.letters[start - 1] {
                    Letter::Hom { var: v2, .. } if hom_group(v2) == group => start -= 1,
                    _ => break,
                }
            }
            for pos in start..self.letters.len() {
                if let Letter::Hom { var: v2, exp: e2 } = &mut self.letters[pos] {
                    if *v2 == var {
                        *e2 += exp;
                        if *e2 == 0 {
                            self.letters.remove(pos);
                        }
                        return;
                    }
                    if *v2 > var {
                        self.letters.insert(pos, l);
                        return;
                    }
                }
            }
        }
        self.degree += l.degree();
        self.letters.push(l);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        w
    }

    /// Concatenation of three words, used by the derivation and substitutions.
    pub fn concat3(a: &[Letter], mid: &Word, b: &[Letter]) -> Word {
        let mut w = Word::empty();
        w.letters.reserve(a.len() + mid.len() + b.len());
        for &l in a.iter().chain(mid.letters.iter()).chain(b.iter()) {
            w.push(l);
        }
        w
    }

    /// Inverse of a word consisting only of homology letters.
    pub fn hom_inverse(&self) -> Option<Word> {
        if !self.letters.iter().all(Letter::is_hom) {
            return None;
        }
        Some(Word::from_letters(self.letters.iter().rev().map(|l| match l {
            Letter::Hom { var, exp } => Letter::hom(*var, -exp),
            _ => unreachable!(),
        })))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.letters.len().cmp(&other.letters.len()))
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Degree profile of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(i32),
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, Coeff>,
}

impl NCPoly {
    pub fn zero() -> NCPoly {
        NCPoly::default()
    }

    pub fn one() -> NCPoly {
        NCPoly::constant(Coeff::one())
    }

    pub fn int(c: i64) -> NCPoly {
        NCPoly::constant(Coeff::int(c))
    }

    pub fn constant(c: Coeff) -> NCPoly {
        NCPoly::term(c, Word::empty())
    }

    pub fn var(v: Var) -> NCPoly {
        NCPoly::constant(Coeff::var(v))
    }

    pub fn letter(l: Letter) -> NCPoly {
        NCPoly::term(Coeff::one(), Word::from_letters([l]))
    }

    pub fn word(w: Word) -> NCPoly {
        NCPoly::term(Coeff::one(), w)
    }

    pub fn term(c: Coeff, w: Word) -> NCPoly {
        let mut p = NCPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Coeff)>) -> NCPoly {
        let mut p = NCPoly::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff_of(&self, w: &Word) -> Coeff {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Constant term (coefficient of the empty word).
    pub fn constant_term(&self) -> Coeff {
        self.coeff_of(&Word::empty())
    }

    pub fn neg(&self) -> NCPoly {
        NCPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &NCPoly) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.neg());
        }
        out
    }

    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        let mut out = NCPoly::zero();
        for (w, d) in &self.terms {
            out.add_term(w.clone(), d.mul(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> NCPoly {
        let mut acc = NCPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut degs = self.terms.keys().map(Word::degree);
        match degs.next() {
            None => Homogeneity::Zero,
            Some(d) if degs.all(|e| e == d) => Homogeneity::Homogeneous(d),
            Some(_) => Homogeneity::Mixed,
        }
    }

    /// Inverse of a unit `±monomial * (homology word)`.
    pub fn unit_inverse(&self) -> Option<NCPoly> {
        let (w, c) = match self.terms.iter().collect::<Vec<_>>().as_slice() {
            [(w, c)] => ((*w).clone(), (*c).clone()),
            _ => return None,
        };
        Some(NCPoly::term(c.unit_inverse()?, w.hom_inverse()?))
    }

    /// All letters occurring in the polynomial.
    pub fn letters(&self) -> Vec<Letter> {
        let mut ls: Vec<Letter> = self.terms.keys().flat_map(|w| w.letters().iter().copied()).collect();
        ls.sort();
        ls.dedup();
        ls
    }

    /// Variables occurring in coefficients.
    pub fn coeff_vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.values().flat_map(Coeff::vars).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn map_coeffs(&self, f: impl Fn(&Coeff) -> Coeff) -> NCPoly {
        NCPoly::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }

    pub fn try_map_coeffs(&self, f: impl Fn(&Coeff) -> Result<Coeff>) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Applies an algebra endomorphism given on letters. Letters for which
    /// `image` returns `None` are kept; coefficients are mapped by `coeff`.
    pub fn substitute(&self, image: impl Fn(&Letter) -> Option<NCPoly>, coeff: impl Fn(&Coeff) -> Coeff) -> NCPoly {
        let mut cache: HashMap<Letter, Option<NCPoly>> = HashMap::new();
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let mut acc = NCPoly::constant(coeff(c));
            for l in w.letters() {
                let img = cache.entry(*l).or_insert_with(|| image(l));
                acc = match img {
                    Some(p) => acc.mul(p),
                    None => acc.mul_letter(*l),
                };
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign(&acc);
        }
        out
    }

    fn mul_letter(&self, l: Letter) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let mut w2 = w.clone();
            w2.push(l);
            out.add_term(w2, c.clone());
        }
        out
    }

    /// Renames coefficient variables and homology letters consistently.
    pub fn rename_vars(&self, f: impl Fn(Var) -> Var + Copy) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let w2 = Word::from_letters(w.letters().iter().map(|l| match l {
                Letter::Hom { var, exp } => Letter::hom(f(*var), *exp),
                other => *other,
            }));
            out.add_term(w2, c.rename(f));
        }
        out
    }

    /// Moves all homology letters into the coefficients (the quotient making
    /// homology classes commute with chords).
    pub fn commute_hom_letters(&self) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let mut mono = Mono::one();
            let mut rest = Word::empty();
            for l in w.letters() {
                match l {
                    Letter::Hom { var, exp } => mono = mono.mul(&Mono::var(*var, *exp)),
                    other => rest.push(*other),
                }
            }
            out.add_term(rest, c.mul_mono(&mono));
        }
        out
    }

    /// Substitutes a coefficient variable.
    pub fn substitute_var(&self, v: Var, value: &Coeff) -> Result<NCPoly> {
        self.try_map_coeffs(|c| c.substitute(v, value))
    }

    /// Keeps only terms whose every chord letter satisfies `keep`.
    pub fn retain_chords(&self, keep: impl Fn(&Chord) -> bool) -> NCPoly {
        NCPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| {
                    w.letters().iter().all(|l| match l {
                        Letter::Chord(ch) => keep(ch),
                        _ => true,
                    })
                })
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Signed derivation of degree -1 extending `image` on generators.
    ///
    /// Homology letters are cycles; any other letter must have an image.
    pub fn derive(&self, image: &HashMap<Letter, NCPoly>) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let ls = w.letters();
            let mut prefix_degree = 0;
            for (pos, l) in ls.iter().enumerate() {
                if !l.is_hom() {
                    let img = image
                        .get(l)
                        .ok_or_else(|| Error::Missing(format!("no differential given for generator {l}")))?;
                    let sign = if prefix_degree % 2 == 0 { c.clone() } else { c.neg() };
                    for (iw, ic) in &img.terms {
                        out.add_term(Word::concat3(&ls[..pos], iw, &ls[pos + 1..]), sign.mul(ic));
                    }
                }
                prefix_degree += l.degree();
            }
        }
        Ok(out)
    }

    /// Ring homomorphism into a commutative target.
    ///
    /// `vars` gives unit values for coefficient variables and homology
    /// letters, `gens` values for degree-0 generators; positive-degree
    /// generators evaluate to zero.
    pub fn eval<R: Ring>(
        &self,
        ring: &R,
        vars: &BTreeMap<Var, R::Elem>,
        gens: &BTreeMap<Letter, R::Elem>,
    ) -> Result<R::Elem> {
        let mut acc = ring.zero();
        for (w, c) in &self.terms {
            let mut val = eval_coeff(ring, c, vars)?;
            for l in w.letters() {
                if ring.is_zero(&val) {
                    break;
                }
                let lv = match l {
                    Letter::Hom { var, exp } => var_power(ring, vars, *var, *exp)?,
                    _ if l.degree() != 0 => ring.zero(),
                    _ => gens
                        .get(l)
                        .cloned()
                        .ok_or_else(|| Error::Missing(format!("no value assigned to generator {l}")))?,
                };
                val = ring.mul(&val, &lv);
            }
            acc = ring.add(&acc, &val);
        }
        Ok(acc)
    }

    /// Parses the canonical text form (also accepts `-`, implicit products
    /// and `^` powers). In the commuted algebra `la`/`mu` names are
    /// coefficient variables, in the fully noncommutative algebra they are
    /// homology letters. Auxiliary generators `xN` are accepted when
    /// `aux_degree` knows their degree.
    pub fn parse(text: &str, mode: AlgebraMode) -> Result<NCPoly> {
        NCPoly::parse_with(text, mode, &|_| None)
    }

    pub fn parse_with(text: &str, mode: AlgebraMode, aux_degree: &dyn Fn(u16) -> Option<i8>) -> Result<NCPoly> {
        let mut p = Parser {
            toks: tokenize(text)?,
            pos: 0,
            mode,
            aux_degree,
        };
        let out = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("unexpected trailing input in {text:?}")));
        }
        Ok(out)
    }
}

pub(crate) fn var_power<R: Ring>(ring: &R, vars: &BTreeMap<Var, R::Elem>, v: Var, e: i32) -> Result<R::Elem> {
    let x = vars
        .get(&v)
        .ok_or_else(|| Error::Missing(format!("no value assigned to variable {v}")))?;
    ring.pow_i(x, e)
        .ok_or_else(|| Error::NonUnit(format!("value {x} assigned to {v} is not a unit")))
}

pub(crate) fn eval_coeff<R: Ring>(ring: &R, c: &Coeff, vars: &BTreeMap<Var, R::Elem>) -> Result<R::Elem> {
    let mut acc = ring.zero();
    for (m, k) in c.terms() {
        let mut t = ring.from_int(k);
        for &(v, e) in m.pairs() {
            t = ring.mul(&t, &var_power(ring, vars, v, e)?);
        }
        acc = ring.add(&acc, &t);
    }
    Ok(acc)
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match (c.is_one(), w.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{w}")?,
                (false, true) => write!(f, "({c})")?,
                (false, false) => write!(f, "({c})*{w}")?,
            }
        }
        Ok(())
    }
}

/// Whether homology classes commute with chords.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraMode {
    Commuted,
    FullyNoncommutative,
}

/// Coefficient ring descriptor: invertible commuting variables over the
/// integers, optionally with `U` restricted to nonnegative powers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffRing {
    pub vars: Vec<Var>,
    pub u_nonnegative: bool,
}

/// An algebra instance: coefficient ring plus mode. Operations through this
/// context check that their inputs belong to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    pub ring: CoeffRing,
    pub mode: AlgebraMode,
    /// Homology letters allowed in the fully noncommutative mode.
    pub hom_vars: Vec<Var>,
}

impl Algebra {
    pub fn validate(&self, p: &NCPoly) -> Result<()> {
        for v in p.coeff_vars() {
            if !self.ring.vars.contains(&v) {
                return Err(Error::Config(format!("coefficient variable {v} is not in the ring")));
            }
        }
        if self.ring.u_nonnegative && p.terms.values().any(|c| c.min_exp(Var::U) < 0) {
            return Err(Error::Mode(format!("negative power of U in {p}")));
        }
        for l in p.letters() {
            if let Letter::Hom { var, .. } = l {
                if self.mode == AlgebraMode::Commuted || !self.hom_vars.contains(&var) {
                    return Err(Error::Config(format!("homology letter {var} not allowed in this algebra")));
                }
            }
        }
        Ok(())
    }

    pub fn mul(&self, p: &NCPoly, q: &NCPoly) -> Result<NCPoly> {
        self.validate(p)?;
        self.validate(q)?;
        Ok(p.mul(q))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Int(t.parse().map_err(|_| Error::Parse(t.clone()))?));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Name(cs[st..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    mode: AlgebraMode,
    aux_degree: &'a dyn Fn(u16) -> Option<i8>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<NCPoly> {
        let mut acc = if self.eat('-') { self.term()?.neg() } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<NCPoly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?);
            } else if matches!(self.peek(), Some(Tok::Name(_)) | Some(Tok::Int(_)) | Some(Tok::Sym('('))) {
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<NCPoly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.toks.get(self.pos) {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                u32::try_from(k.clone()).map_err(|_| Error::Parse(format!("exponent {k} too large")))?
            }
            _ => return Err(Error::Parse("expected integer exponent".into())),
        };
        if neg {
            let inv = base
                .unit_inverse()
                .ok_or_else(|| Error::Parse(format!("negative power of non-unit {base}")))?;
            Ok(inv.pow(e))
        } else {
            Ok(base.pow(e))
        }
    }

    fn atom(&mut self) -> Result<NCPoly> {
        let tok = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Tok::Int(k) => Ok(NCPoly::constant(Coeff::term(Mono::one(), k))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Tok::Sym(c) => Err(Error::Parse(format!("unexpected {c:?}"))),
            Tok::Name(name) => self.name(&name),
        }
    }

    fn name(&self, name: &str) -> Result<NCPoly> {
        if let Some(v) = Var::parse(name) {
            let hom = matches!(v, Var::Lambda(_) | Var::Mu(_) | Var::MuStrand(_));
            return Ok(if hom && self.mode == AlgebraMode::FullyNoncommutative {
                NCPoly::letter(Letter::hom(v, 1))
            } else {
                NCPoly::var(v)
            });
        }
        if let Some(rest) = name.strip_prefix('x') {
            if let Ok(id) = rest.parse::<u16>() {
                let degree = (self.aux_degree)(id)
                    .ok_or_else(|| Error::Parse(format!("unknown auxiliary generator {name}")))?;
                return Ok(NCPoly::letter(Letter::Aux { id, degree }));
            }
        }
        let mut cs = name.chars();
        if let Some(kind) = cs.next().and_then(ChordKind::from_symbol) {
            let rest: String = cs.collect();
            let (i, j) = if let Some((a, b)) = rest.split_once('_') {
                (a.parse::<u8>().ok(), b.parse::<u8>().ok())
            } else if rest.len() == 2 && rest.chars().all(|c| c.is_ascii_digit()) {
                (rest[..1].parse().ok(), rest[1..].parse().ok())
            } else {
                (None, None)
            };
            if let (Some(i), Some(j)) = (i, j) {
                return Ok(NCPoly::letter(Letter::chord(kind, i, j)));
            }
        }
        Err(Error::Parse(format!("unknown name {name:?}")))
    }
}

/// Homology letters in the same group commute: `la_c` and `mu_c` of one
/// component; strand meridians are each on their own.
fn hom_group(v: Var) -> (u8, u8) {
    match v {
        Var::Lambda(c) | Var::Mu(c) => (0, c),
        Var::MuStrand(i) => (1, i),
        Var::U => (2, 0),
        Var::V => (3, 0),
    }
}

/// Sign helper: `(-1)^k` as a coefficient.
pub fn sign_coeff(k: i32) -> Coeff {
    if k.rem_euclid(2) == 0 {
        Coeff::one()
    } else {
        Coeff::int(-1)
    }
}

/// True when every coefficient is an integer of absolute value 1.
pub fn has_unit_coefficients(p: &NCPoly) -> bool {
    p.terms().all(|(_, c)| c.as_constant().is_some_and(|k| k.abs().is_one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: u8, j: u8) -> NCPoly {
        NCPoly::letter(Letter::a(i, j))
    }

    fn parse(s: &str) -> NCPoly {
        NCPoly::parse(s, AlgebraMode::Commuted).unwrap()
    }

    #[test]
    fn unit_law_and_free_noncommutativity() {
        assert_eq!(NCPoly::one().mul(&a(1, 2)), a(1, 2));
        let p = a(2, 1).mul(&a(1, 2).mul(&a(2, 1)));
        assert_eq!(p.to_string(), "a21*a12*a21");
        assert_ne!(a(2, 1).mul(&a(1, 2)), a(1, 2).mul(&a(2, 1)));
    }

    #[test]
    fn distributivity_with_coefficient() {
        let mu = NCPoly::var(Var::Mu(0));
        let p = mu.mul(&a(1, 2)).add(&a(2, 3)).mul(&a(1, 3));
        assert_eq!(p, parse("mu*a12*a13 + a23*a13"));
        assert_eq!(p.to_string(), "(mu)*a12*a13 + a23*a13");
    }

    #[test]
    fn homology_letters_merge() {
        let w = Word::from_letters([Letter::hom(Var::Mu(2), 1), Letter::hom(Var::Mu(2), -1)]);
        assert!(w.is_empty());
        let w = Word::from_letters([
            Letter::hom(Var::Mu(1), 1),
            Letter::a(1, 2),
            Letter::hom(Var::Mu(2), 2),
            Letter::hom(Var::Mu(2), -1),
        ]);
        assert_eq!(w.to_string(), "mu1*a12*mu2");
        // cancellation at the boundary can cascade
        let x = Word::from_letters([Letter::hom(Var::Mu(1), 1), Letter::hom(Var::Mu(2), 1)]);
        let y = Word::from_letters([Letter::hom(Var::Mu(2), -1), Letter::hom(Var::Mu(1), -1)]);
        assert!(x.concat(&y).is_empty());
        // one component's longitude and meridian commute, different components do not
        let w = Word::from_letters([Letter::hom(Var::Mu(1), 1), Letter::hom(Var::Lambda(1), 1), Letter::hom(Var::Mu(1), -1)]);
        assert_eq!(w.to_string(), "la1");
        let w = Word::from_letters([Letter::hom(Var::Mu(1), 1), Letter::hom(Var::Mu(2), 1), Letter::hom(Var::Mu(1), -1)]);
        assert_eq!(w.len(), 3);
    }

    #[test]
    fn derivation_sign_rule() {
        let c = Letter::chord(ChordKind::C, 1, 1);
        let d = Letter::chord(ChordKind::D, 1, 1);
        let mut img = HashMap::new();
        img.insert(c, a(1, 2));
        img.insert(d, a(2, 1));
        img.insert(Letter::a(1, 2), NCPoly::zero());
        img.insert(Letter::a(2, 1), NCPoly::zero());
        let p = NCPoly::letter(c).mul(&NCPoly::letter(d));
        let expected = a(1, 2).mul(&NCPoly::letter(d)).sub(&NCPoly::letter(c).mul(&a(2, 1)));
        assert_eq!(p.derive(&img).unwrap(), expected);
        assert!(a(1, 2).mul(&a(2, 1)).derive(&img).unwrap().is_zero());
        let e = NCPoly::letter(Letter::chord(ChordKind::E, 1, 1));
        assert!(e.derive(&img).is_err());
    }

    #[test]
    fn parse_print_round_trip() {
        for s in [
            "0",
            "1",
            "(-1 + U)",
            "a23 + (-2)*a21*a13 + (-1)*a21*a12*a23 + a21*a12*a21*a13",
            "(la^-1*mu - la^-1*U)*c11",
        ] {
            assert_eq!(parse(s).to_string(), s);
        }
        let nc = NCPoly::parse("mu1^-2*a12*mu1^2 + (U)*mu1", AlgebraMode::FullyNoncommutative).unwrap();
        assert_eq!(nc.to_string(), "(U)*mu1 + mu1^-2*a12*mu1^2");
        assert!(NCPoly::parse("a12^-1", AlgebraMode::Commuted).is_err());
        assert!(NCPoly::parse("q12", AlgebraMode::Commuted).is_err());
    }

    #[test]
    fn homogeneity_query() {
        assert_eq!(NCPoly::zero().homogeneity(), Homogeneity::Zero);
        assert_eq!(parse("a12*b12 + c11").homogeneity(), Homogeneity::Homogeneous(1));
        assert_eq!(parse("a12 + c11").homogeneity(), Homogeneity::Mixed);
    }

    #[test]
    fn algebra_context_rejects_foreign_input() {
        let alg = Algebra {
            ring: CoeffRing { vars: vec![Var::Lambda(0), Var::Mu(0), Var::U], u_nonnegative: true },
            mode: AlgebraMode::Commuted,
            hom_vars: vec![],
        };
        assert!(alg.mul(&parse("(mu)*a12"), &parse("a21")).is_ok());
        assert!(matches!(alg.mul(&parse("(V)*a12"), &parse("a21")), Err(Error::Config(_))));
        assert!(matches!(alg.validate(&parse("(U^-1)*a12")), Err(Error::Mode(_))));
        let nc = NCPoly::parse("mu*a12", AlgebraMode::FullyNoncommutative).unwrap();
        assert!(alg.validate(&nc).is_err());
    }
}
