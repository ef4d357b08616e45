//! Classical invariants of braid closures, used to check that hand-copied
//! braid words close up to the intended knots.

use std::sync::Arc;

use kch_core::braid::BraidWord;
use kch_core::commpoly::CommPoly;
use num_bigint::BigInt;

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = x;
    while parent[x] != r {
        let next = parent[x];
        parent[x] = r;
        x = next;
    }
    r
}

fn laurent(vars: &Arc<Vec<String>>, e: i32, c: i64) -> CommPoly {
    CommPoly::from_terms(vars.clone(), [(vec![e], BigInt::from(c))])
}

/// Jones polynomial of the closure of `b` in the variable `A`
/// (`t = A^-4`), via the Kauffman bracket state sum.
pub fn jones_in_a(b: &BraidWord) -> CommPoly {
    let vars = Arc::new(vec!["A".to_string()]);
    let n = b.n();
    let word = b.letters();
    let len = word.len();
    assert!(len <= 20, "state sum over {len} crossings");
    let node = |t: usize, j: usize| t * n + j;
    // d = -A^2 - A^-2
    let d = laurent(&vars, 2, -1).add(&laurent(&vars, -2, -1));
    let mut bracket = CommPoly::zero_in(vars.clone());
    for state in 0u32..(1 << len) {
        let mut parent: Vec<usize> = (0..(len + 1) * n).collect();
        let union = |parent: &mut Vec<usize>, x: usize, y: usize| {
            let (rx, ry) = (find(parent, x), find(parent, y));
            parent[rx] = ry;
        };
        let mut a_count = 0i32;
        for (t, &l) in word.iter().enumerate() {
            let k = l.unsigned_abs() as usize - 1;
            for j in (0..n).filter(|&j| j != k && j != k + 1) {
                union(&mut parent, node(t, j), node(t + 1, j));
            }
            let a_smoothing = state >> t & 1 == 0;
            a_count += if a_smoothing { 1 } else { -1 };
            // the A-smoothing of a positive crossing follows the strands
            if a_smoothing == (l > 0) {
                union(&mut parent, node(t, k), node(t + 1, k));
                union(&mut parent, node(t, k + 1), node(t + 1, k + 1));
            } else {
                union(&mut parent, node(t, k), node(t, k + 1));
                union(&mut parent, node(t + 1, k), node(t + 1, k + 1));
            }
        }
        for j in 0..n {
            union(&mut parent, node(len, j), node(0, j));
        }
        let loops = (0..(len + 1) * n).filter(|&x| find(&mut parent, x) == x).count();
        bracket = bracket.add(&laurent(&vars, a_count, 1).mul(&d.pow(loops as u32 - 1)));
    }
    let w = b.writhe() as i32;
    let sign = if w % 2 == 0 { 1 } else { -1 };
    bracket.mul(&laurent(&vars, -3 * w, sign))
}

/// Alexander polynomial of the closure of the knot braid `b` in `t`, from
/// the reduced Burau representation, normalized to have a positive
/// constant term and lowest degree 0.
pub fn alexander(b: &BraidWord) -> CommPoly {
    let vars = Arc::new(vec!["t".to_string()]);
    let n = b.n();
    let zero = CommPoly::zero_in(vars.clone());
    let one = CommPoly::one_in(vars.clone());
    let t = |e: i32, c: i64| laurent(&vars, e, c);
    if n == 1 {
        return one;
    }
    let m = n - 1;
    let identity = |m: usize| -> Vec<Vec<CommPoly>> {
        (0..m).map(|i| (0..m).map(|j| if i == j { one.clone() } else { zero.clone() }).collect()).collect()
    };
    let mut total = identity(m);
    for &l in b.letters() {
        let k = l.unsigned_abs() as usize - 1;
        let mut g = identity(m);
        // reduced Burau: sigma_k touches rows/columns k-1, k, k+1 (0-based)
        if l > 0 {
            g[k][k] = t(1, -1);
            if k > 0 {
                g[k - 1][k] = t(1, 1);
            }
            if k + 1 < m {
                g[k + 1][k] = one.clone();
            }
        } else {
            g[k][k] = t(-1, -1);
            if k > 0 {
                g[k - 1][k] = one.clone();
            }
            if k + 1 < m {
                g[k + 1][k] = t(-1, 1);
            }
        }
        total = matmul(&total, &g);
    }
    let mut x = identity(m);
    for i in 0..m {
        for j in 0..m {
            x[i][j] = x[i][j].sub(&total[i][j]);
        }
    }
    let det = determinant(&x);
    let cyclotomic = (0..n as i32).fold(zero.clone(), |acc, e| acc.add(&t(e, 1)));
    let q = det.div_laurent(&cyclotomic).expect("Burau determinant is divisible by 1 + t + ... + t^(n-1)");
    let (q, _) = q.strip_monomial();
    let lowest = q.terms().find(|(e, _)| e[0] == 0).map(|(_, c)| c.clone()).unwrap_or_default();
    if lowest < BigInt::from(0) {
        q.neg()
    } else {
        q
    }
}

fn matmul(x: &[Vec<CommPoly>], y: &[Vec<CommPoly>]) -> Vec<Vec<CommPoly>> {
    let m = x.len();
    let zero = CommPoly::zero_in(x[0][0].vars_arc());
    (0..m)
        .map(|r| (0..m).map(|c| (0..m).fold(zero.clone(), |acc, k| acc.add(&x[r][k].mul(&y[k][c])))).collect())
        .collect()
}

/// Cofactor expansion; fine for the small matrices used here.
fn determinant(x: &[Vec<CommPoly>]) -> CommPoly {
    let m = x.len();
    if m == 1 {
        return x[0][0].clone();
    }
    let mut acc = CommPoly::zero_in(x[0][0].vars_arc());
    for c in 0..m {
        let minor: Vec<Vec<CommPoly>> =
            x[1..].iter().map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, e)| e.clone()).collect()).collect();
        let term = x[0][c].mul(&determinant(&minor));
        acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knot(s: &str, n: usize) -> BraidWord {
        BraidWord::parse(s, Some(n)).unwrap()
    }

    fn poly(s: &str, var: &str) -> CommPoly {
        CommPoly::parse(s, Arc::new(vec![var.to_string()])).unwrap()
    }

    #[test]
    fn jones_of_small_knots() {
        assert_eq!(jones_in_a(&knot("", 1)), poly("1", "A"));
        assert_eq!(jones_in_a(&knot("1", 2)), poly("1", "A"));
        assert_eq!(jones_in_a(&knot("1 -2", 3)), poly("1", "A"));
        // t + t^3 - t^4 with t = A^-4
        assert_eq!(jones_in_a(&knot("1 1 1", 2)), poly("A^-4 + A^-12 - A^-16", "A"));
        assert_eq!(jones_in_a(&knot("-1 -1 -1", 2)), poly("A^4 + A^12 - A^16", "A"));
        assert_eq!(jones_in_a(&knot("1 -2 1 -2", 3)), poly("A^8 - A^4 + 1 - A^-4 + A^-8", "A"));
    }

    #[test]
    fn alexander_of_small_knots() {
        assert_eq!(alexander(&knot("", 1)), poly("1", "t"));
        assert_eq!(alexander(&knot("1 -2", 3)), poly("1", "t"));
        assert_eq!(alexander(&knot("1 1 1", 2)), poly("1 - t + t^2", "t"));
        assert_eq!(alexander(&knot("1 -2 1 -2", 3)), poly("1 - 3*t + t^2", "t"));
        assert_eq!(alexander(&knot("1 1 1 1 1", 2)), poly("1 - t + t^2 - t^3 + t^4", "t"));
    }
}
