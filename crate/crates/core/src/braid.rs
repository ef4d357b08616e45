//! Braid words, closure components and the classical braid invariants.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A word in the Artin generators of `B_n`. Letter `k > 0` is `sigma_k`,
/// `-k` is its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    n: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<i32>) -> Result<BraidWord> {
        if n == 0 {
            return Err(Error::Parse("a braid needs at least one strand".into()));
        }
        for &l in &letters {
            if l == 0 {
                return Err(Error::Parse("braid generator index 0".into()));
            }
            if l.unsigned_abs() as usize >= n {
                return Err(Error::Index(format!("generator {l} on {n} strands")));
            }
        }
        if n > 60 {
            return Err(Error::Index(format!("{n} strands is beyond the supported width")));
        }
        Ok(BraidWord { n, letters })
    }

    pub fn identity(n: usize) -> Result<BraidWord> {
        BraidWord::new(n, vec![])
    }

    /// Accepts signed integers (`"1 -2 1"`) or caret form (`"s1^3 s2^-1"`).
    /// Without `n` the width is one more than the largest index.
    pub fn parse(text: &str, n: Option<usize>) -> Result<BraidWord> {
        let mut letters = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            if let Some(rest) = tok.strip_prefix('s').or_else(|| tok.strip_prefix('S')) {
                let (k, e) = match rest.split_once('^') {
                    Some((k, e)) => (k, e),
                    None => (rest, "1"),
                };
                let k: i32 = k.parse().map_err(|_| Error::Parse(format!("malformed braid token {tok:?}")))?;
                let e: i32 = e.parse().map_err(|_| Error::Parse(format!("malformed braid token {tok:?}")))?;
                if k <= 0 {
                    return Err(Error::Parse(format!("malformed braid token {tok:?}")));
                }
                letters.extend(std::iter::repeat_n(k * e.signum(), e.unsigned_abs() as usize));
            } else {
                let k: i32 = tok.parse().map_err(|_| Error::Parse(format!("malformed braid token {tok:?}")))?;
                letters.push(k);
            }
        }
        let width = match n {
            Some(n) => n,
            None => 1 + letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0),
        };
        BraidWord::new(width, letters)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }

    /// `perm[i]` is the final position of the strand starting at position
    /// `i` (zero-based).
    pub fn permutation(&self) -> Vec<usize> {
        let mut occupant: Vec<usize> = (0..self.n).collect();
        for &l in &self.letters {
            let k = l.unsigned_abs() as usize - 1;
            occupant.swap(k, k + 1);
        }
        let mut perm = vec![0; self.n];
        for (pos, &s) in occupant.iter().enumerate() {
            perm[s] = pos;
        }
        perm
    }

    pub fn components(&self) -> ComponentMap {
        ComponentMap::of(self)
    }

    pub fn is_knot(&self) -> bool {
        self.components().r == 1
    }

    /// Self-linking number `w - n` of the transverse closure.
    pub fn self_linking(&self) -> Result<i64> {
        if !self.is_knot() {
            return Err(Error::Precondition(format!(
                "self-linking number needs a knot, braid {self} closes to a {}-component link",
                self.components().r
            )));
        }
        Ok(self.writhe() - self.n as i64)
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        let n = self.n.max(other.n);
        BraidWord::new(n, self.letters.iter().chain(&other.letters).copied().collect())
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord { n: self.n, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    /// `g B g^-1`.
    pub fn conjugate(&self, g: &BraidWord) -> Result<BraidWord> {
        g.concat(self)?.concat(&g.inverse())
    }

    /// Markov stabilization `B sigma_n^{+-1}` in `B_{n+1}`.
    pub fn stabilize(&self, positive: bool) -> BraidWord {
        let mut letters = self.letters.clone();
        let k = self.n as i32;
        letters.push(if positive { k } else { -k });
        BraidWord { n: self.n + 1, letters }
    }

    /// The mirror image (all crossings flipped).
    pub fn mirror(&self) -> BraidWord {
        BraidWord { n: self.n, letters: self.letters.iter().map(|l| -l).collect() }
    }

    /// The braid obtained by erasing every strand not in `keep` (1-based
    /// starting positions). Crossings between two kept strands survive,
    /// renumbered by the rank of their position among the kept strands.
    pub fn sub_braid(&self, keep: &[u8]) -> Result<BraidWord> {
        if keep.is_empty() || keep.iter().any(|&s| s == 0 || s as usize > self.n) {
            return Err(Error::Index(format!("strand set {keep:?} on {} strands", self.n)));
        }
        let kept = |s: usize| keep.contains(&(s as u8 + 1));
        let mut occupant: Vec<usize> = (0..self.n).collect();
        let mut letters = Vec::new();
        for &l in &self.letters {
            let k = l.unsigned_abs() as usize - 1;
            if kept(occupant[k]) && kept(occupant[k + 1]) {
                let rank = occupant[..k].iter().filter(|&&s| kept(s)).count() as i32 + 1;
                letters.push(rank * l.signum());
            }
            occupant.swap(k, k + 1);
        }
        let mut distinct = keep.to_vec();
        distinct.sort();
        distinct.dedup();
        BraidWord::new(distinct.len(), letters)
    }

    /// Caret form, e.g. `s1^3 s2^-1`.
    pub fn caret_form(&self) -> String {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let e = (j - i) as i32 * l.signum();
            parts.push(if e == 1 { format!("s{}", l.abs()) } else { format!("s{}^{}", l.abs(), e) });
            i = j;
        }
        parts.join(" ")
    }

    /// Canonical key including the width, e.g. `n=3:1 -2 1 -2`.
    pub fn canonical(&self) -> String {
        format!("n={}:{}", self.n, self)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Closure components of a braid and their per-component data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentMap {
    pub r: usize,
    /// Component label `1..=r` of strand `i + 1`. Components are numbered
    /// in the order of their lowest strand.
    pub alpha: Vec<u8>,
    /// Number of strands of each component (index `alpha - 1`).
    pub strands: Vec<usize>,
    /// Writhe of each component with the other components deleted.
    pub writhe: Vec<i64>,
    /// Leading strand (1-based) of each component: its lowest strand.
    pub leading: Vec<u8>,
}

impl ComponentMap {
    fn of(b: &BraidWord) -> ComponentMap {
        let perm = b.permutation();
        let mut alpha = vec![0u8; b.n];
        let mut leading = Vec::new();
        let mut strands = Vec::new();
        let mut r = 0u8;
        for start in 0..b.n {
            if alpha[start] != 0 {
                continue;
            }
            r += 1;
            leading.push(start as u8 + 1);
            let mut count = 0;
            let mut s = start;
            while alpha[s] == 0 {
                alpha[s] = r;
                count += 1;
                s = perm[s];
            }
            strands.push(count);
        }
        let mut writhe = vec![0i64; r as usize];
        let mut occupant: Vec<usize> = (0..b.n).collect();
        for &l in &b.letters {
            let k = l.unsigned_abs() as usize - 1;
            let (x, y) = (alpha[occupant[k]], alpha[occupant[k + 1]]);
            if x == y {
                writhe[x as usize - 1] += l.signum() as i64;
            }
            occupant.swap(k, k + 1);
        }
        ComponentMap { r: r as usize, alpha, strands, writhe, leading }
    }

    /// Component of 1-based strand `i`.
    pub fn component_of(&self, strand: u8) -> u8 {
        self.alpha[strand as usize - 1]
    }

    pub fn is_leading(&self, strand: u8) -> bool {
        self.leading.contains(&strand)
    }

    /// `w(alpha) - n(alpha) + 1` for each component; always even.
    pub fn framing_parity(&self) -> Vec<i64> {
        self.writhe.iter().zip(&self.strands).map(|(w, n)| w - *n as i64 + 1).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_signed_and_caret_forms() {
        let b = BraidWord::parse("1 1 1", None).unwrap();
        assert_eq!((b.n(), b.writhe()), (2, 3));
        assert!(b.is_knot());
        assert_eq!(BraidWord::parse("s1^3", None).unwrap(), b);
        let c = BraidWord::parse("s1^3 s2^-1", None).unwrap();
        assert_eq!(c.letters(), &[1, 1, 1, -2]);
        assert_eq!(c.caret_form(), "s1^3 s2^-1");
        assert_eq!(BraidWord::parse(&c.to_string(), Some(3)).unwrap(), c);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(BraidWord::parse("0", None), Err(Error::Parse(_))));
        assert!(matches!(BraidWord::parse("3", Some(3)), Err(Error::Index(_))));
        assert!(matches!(BraidWord::parse("1 x", None), Err(Error::Parse(_))));
        assert!(matches!(BraidWord::parse("s^2", None), Err(Error::Parse(_))));
    }

    #[test]
    fn empty_braid_is_unknot() {
        let b = BraidWord::parse("", Some(1)).unwrap();
        assert!(b.is_empty() && b.is_knot());
        assert_eq!(b.self_linking().unwrap(), -1);
    }

    #[test]
    fn figure_eight_permutation_is_three_cycle() {
        let b = BraidWord::parse("1 -2 1 -2", None).unwrap();
        assert_eq!((b.n(), b.writhe()), (3, 0));
        assert_eq!(b.permutation(), vec![1, 2, 0]);
        assert!(b.is_knot());
    }

    #[test]
    fn self_linking_guards() {
        assert_eq!(BraidWord::parse("1 1 1", None).unwrap().self_linking().unwrap(), 1);
        let hopf = BraidWord::parse("1 1", None).unwrap();
        assert!(matches!(hopf.self_linking(), Err(Error::Precondition(_))));
        // s1 s2 s1 s2: permutation is a 3-cycle, so the closure is a knot
        let b = BraidWord::parse("1 2 1 2", None).unwrap();
        assert_eq!(b.self_linking().unwrap(), 1);
    }

    #[test]
    fn link_components_and_writhes() {
        // s1^2 s2^3 on three strands: strands 1,2 form a 2-cycle? No: s1^2 is
        // pure, s2^3 swaps 2 and 3, so components are {1} and {2,3}.
        let b = BraidWord::parse("1 1 2 2 2", None).unwrap();
        let c = b.components();
        assert_eq!(c.r, 2);
        assert_eq!(c.alpha, vec![1, 2, 2]);
        assert_eq!(c.strands, vec![1, 2]);
        assert_eq!(c.writhe, vec![0, 3]);
        assert_eq!(c.leading, vec![1, 2]);
        assert!(c.framing_parity().iter().all(|x| x % 2 == 0));
    }

    #[test]
    fn erasing_strands() {
        let b = BraidWord::parse("1 1 2 2 2", None).unwrap();
        assert_eq!(b.sub_braid(&[2, 3]).unwrap(), BraidWord::parse("1 1 1", Some(2)).unwrap());
        assert_eq!(b.sub_braid(&[1]).unwrap(), BraidWord::identity(1).unwrap());
        assert_eq!(b.sub_braid(&[1, 2, 3]).unwrap(), b);
        // on the hopf link only the crossings between kept strands survive
        let h = BraidWord::parse("1 1", None).unwrap();
        assert!(h.sub_braid(&[2]).unwrap().is_empty());
    }
}
