//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that every criterion is attempted and
//! reported even when an earlier one fails; the process exits non-zero if
//! any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use kch_core::augment::{compare_transverse, count_augmentations, count_braid, is_augmentation, Augmentation, CountOptions};
use kch_core::augpoly::{
    augmentation_polynomial, check_symmetries, homfly_check, parse_homfly, parse_lmu, two_variable_augpoly, AugPolyOptions,
    ElimMethod,
};
use kch_core::braid::BraidWord;
use kch_core::coeff::Var;
use kch_core::commpoly::CommPoly;
use kch_core::dga::{braid_matrices, build_dga, Dga, DgaMode, Variant};
use kch_core::linhom::linearized_homology;
use kch_core::ncpoly::{AlgebraMode, ChordKind, Letter, NCPoly};
use kch_core::phi::{phi_apply, phi_matrices, BraidAction, Meridians, Star};
use kch_core::ring::{Integers, PrimeField};
use kch_verify::{alexander, jones_in_a};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: std::result::Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn braid(s: &str, n: usize) -> BraidWord {
    BraidWord::parse(s, Some(n)).unwrap()
}

fn nc(s: &str) -> NCPoly {
    NCPoly::parse(s, AlgebraMode::Commuted).unwrap()
}

fn random_braid(rng: &mut StdRng, max_n: usize, max_len: usize) -> BraidWord {
    let n = rng.gen_range(1..=max_n);
    let len = if n == 1 { 0 } else { rng.gen_range(0..=max_len) };
    let letters = (0..len)
        .map(|_| {
            let k = rng.gen_range(1..n as i32);
            if rng.gen_bool(0.5) {
                k
            } else {
                -k
            }
        })
        .collect();
    BraidWord::new(n, letters).unwrap()
}

fn random_knot(rng: &mut StdRng, max_n: usize, max_len: usize) -> BraidWord {
    loop {
        let b = random_braid(rng, max_n, max_len);
        if b.is_knot() {
            return b;
        }
    }
}

/// The random set shared by the square-root and d^2 checks.
fn random_set() -> Vec<BraidWord> {
    let mut rng = StdRng::seed_from_u64(2024);
    (0..50).map(|_| random_braid(&mut rng, 4, 8)).collect()
}

fn unknot_dga() -> Outcome {
    let d = ok(build_dga(&BraidWord::identity(1).unwrap(), DgaMode::topological()))?;
    let expect = [
        (ChordKind::C, "U - la - mu + la*mu"),
        (ChordKind::D, "1 - mu - la^-1*U + la^-1*mu"),
        (ChordKind::E, "-c11 - la*d11"),
        (ChordKind::F, "-d11 - la^-1*c11"),
    ];
    for (k, s) in expect {
        let got = ok(d.d(k, 1, 1))?;
        ensure!(got == &nc(s) && got.to_string() == nc(s).to_string(), "d{k:?}11 = {got}, expected {s}");
    }
    ensure!(d.generators().len() == 4, "unknot DGA has {} generators", d.generators().len());
    Ok("dc11, dd11, de11, df11 match".into())
}

fn phi_golden() -> Outcome {
    let got = ok(phi_apply(&braid("1 1 1", 3), &nc("a13"), 3))?;
    let expect = nc("-2*a21*a13 + a21*a12*a21*a13 + a23 - a21*a12*a23");
    ensure!(got == expect, "phi(a13) = {got}");
    Ok(format!("phi(a13) = {got}"))
}

fn phi_matrices_golden() -> Outcome {
    let (l, r) = ok(phi_matrices(&braid("1 1 1", 2), Star::High, Meridians::Trivial))?;
    let el = [["-2*a21 + a21*a12*a21", "1 - a21*a12"], ["1 - a12*a21", "a12"]];
    let er = [["-2*a12 + a12*a21*a12", "1 - a12*a21"], ["1 - a21*a12", "a21"]];
    for i in 0..2 {
        for j in 0..2 {
            let (x, y) = (ok(l.get(i, j))?, ok(r.get(i, j))?);
            ensure!(x == &nc(el[i][j]), "PhiL[{i}][{j}] = {x}");
            ensure!(y == &nc(er[i][j]), "PhiR[{i}][{j}] = {y}");
        }
    }
    Ok("all 8 entries match".into())
}

fn square_root_identity() -> Outcome {
    let set = random_set();
    for b in &set {
        for alg in [AlgebraMode::Commuted, AlgebraMode::FullyNoncommutative] {
            let mut mode = DgaMode::topological();
            mode.algebra = alg;
            let m = ok(braid_matrices(b, mode))?;
            let prod = ok(ok(m.phi_l.mul(&m.a))?.mul(&m.phi_r))?;
            ensure!(prod == m.phi_a, "fails for [{b}] on {} strands, {alg:?}", b.n());
        }
    }
    Ok(format!("{} braids x 2 algebras", set.len()))
}

fn d_squared() -> Outcome {
    let set = random_set();
    let mut checked = 0;
    for b in &set {
        let variants: &[Variant] = if b.is_knot() {
            &[Variant::Topological, Variant::TransverseU, Variant::TransverseUV, Variant::Hat]
        } else {
            // the filtered and hat DGAs are only defined for knots
            &[Variant::Topological]
        };
        for &v in variants {
            for alg in [AlgebraMode::Commuted, AlgebraMode::FullyNoncommutative] {
                let mut mode = DgaMode::new(v);
                mode.algebra = alg;
                let r = ok(build_dga(b, mode))?.check_d_squared();
                ensure!(r.passed(), "[{b}] on {} strands, {mode}: {:?}", b.n(), r.failure);
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} DGAs"))
}

fn full_twist() -> Outcome {
    for n in 2..=4usize {
        let twist: Vec<i32> = (0..n).flat_map(|_| 1..n as i32).collect();
        let b = ok(BraidWord::new(n, twist))?;
        let act = ok(BraidAction::new(&b, &(1..=n as u8).collect::<Vec<_>>(), Meridians::Trivial))?;
        for i in 1..=n as u8 {
            for j in (1..=n as u8).filter(|&j| j != i) {
                ensure!(act.image(i, j) == NCPoly::letter(Letter::a(i, j)), "n={n}: a{i}{j} -> {}", act.image(i, j));
            }
        }
    }
    Ok("n = 2, 3, 4".into())
}

const UNKNOT: &str = "U - la - mu + la*mu";
const RH: &str = "(U^3 - mu*U^2) + (-U^3 + mu*U^2 - 2*mu^2*U + 2*mu^2*U^2 + mu^3*U - mu^4*U)*la + (-mu^3 + mu^4)*la^2";
const LH: &str = "(mu^3*U^2 - mu^4*U) + (U^2 - mu*U^2 - 2*mu^2*U + 2*mu^2*U^2 - mu^3*U + mu^4)*la + (-U^2 + mu*U^2)*la^2";

fn trefoils() -> [(&'static str, BraidWord); 3] {
    [("unknot", BraidWord::identity(1).unwrap()), ("RH trefoil", braid("1 1 1", 2)), ("LH trefoil", braid("-1 -1 -1", 2))]
}

/// Every polynomial computed for the augmentation-polynomial criteria.
fn computed_polynomials() -> std::result::Result<Vec<(String, CommPoly)>, String> {
    let mut out = Vec::new();
    let three = [UNKNOT, RH, LH];
    let two = ["(la - 1)*(mu - 1)", "(la - 1)*(mu - 1)*(la*mu^3 + 1)", "(la - 1)*(mu - 1)*(la + mu^3)"];
    for (k, (name, b)) in trefoils().into_iter().enumerate() {
        for m in [ElimMethod::GroebnerLex, ElimMethod::ResultantChain] {
            let opts = AugPolyOptions { method: m, ..Default::default() };
            let r = ok(augmentation_polynomial(&b, &opts))?;
            ensure!(r.candidate.equal_up_to_units(&ok(parse_lmu(three[k]))?), "{name} ({m}): {}", r.candidate);
            ensure!(r.points_vanish(), "{name} ({m}): F_p points off the curve");
            out.push((format!("{name} ({m})"), r.candidate));
            let r = ok(two_variable_augpoly(&b, &opts))?;
            ensure!(r.candidate.equal_up_to_units(&ok(parse_lmu(two[k]))?), "{name} two-variable ({m}): {}", r.candidate);
            out.push((format!("{name} two-variable ({m})"), r.candidate));
        }
    }
    Ok(out)
}

fn augmentation_polynomials() -> Outcome {
    let polys = computed_polynomials()?;
    Ok(format!("{} polynomials over both elimination routes", polys.len()))
}

fn symmetries() -> Outcome {
    let polys = computed_polynomials()?;
    for (name, p) in &polys {
        ensure!(ok(check_symmetries(p, None))?.self_symmetric, "{name} is not symmetric: {p}");
    }
    let rh = ok(parse_lmu(RH))?;
    let lh = ok(parse_lmu(LH))?;
    ensure!(ok(check_symmetries(&rh, Some(&lh)))?.mirror_related == Some(true), "trefoils are not mirror related");
    ensure!(ok(check_symmetries(&rh, Some(&rh)))?.mirror_related == Some(false), "RH trefoil is mirror related to itself");
    Ok(format!("{} polynomials symmetric; trefoil pair mirror related", polys.len()))
}

fn z_aug(units: [i64; 3], chords: &[(Letter, i64)]) -> Augmentation<Integers> {
    Augmentation {
        target: Integers,
        var_values: [Var::Lambda(0), Var::Mu(0), Var::U].into_iter().zip(units).map(|(v, x)| (v, BigInt::from(x))).collect(),
        chord_values: chords.iter().map(|&(l, x)| (l, BigInt::from(x))).collect(),
    }
}

fn linearized() -> Outcome {
    let cases = [
        (braid("1 1 1", 2), z_aug([1, -1, 1], &[(Letter::a(1, 2), -2), (Letter::a(2, 1), -2)]), ["Z/3", "Z + (Z/3)^3", "Z"]),
        (BraidWord::identity(1).unwrap(), z_aug([1, -1, 1], &[]), ["0", "Z", "Z"]),
    ];
    let mut seen = Vec::new();
    for (b, eps, expect) in cases {
        let d = ok(build_dga(&b, DgaMode::topological()))?;
        let h = ok(linearized_homology(&d, &eps))?;
        let got: Vec<String> = (0..3).map(|k| h.describe(k)).collect();
        ensure!(got == expect, "[{b}]: H_0..2 = {got:?}");
        seen.push(got.join(", "));
    }
    Ok(seen.join(" | "))
}

/// Counts by visiting every assignment of units and chords.
fn brute_force(d: &Dga, p: u64) -> u64 {
    let field = PrimeField::new(p).unwrap();
    let units = d.algebra.ring.vars.clone();
    let chords = d.generators_of_degree(0);
    let sizes: Vec<u64> = units.iter().map(|_| p - 1).chain(chords.iter().map(|_| p)).collect();
    let total: u64 = sizes.iter().product();
    let mut count = 0;
    for mut code in 0..total {
        let mut vals = Vec::new();
        for s in &sizes {
            vals.push(code % s);
            code /= s;
        }
        let var_values: BTreeMap<_, _> = units.iter().zip(&vals).map(|(v, x)| (*v, x + 1)).collect();
        let chord_values: BTreeMap<Letter, u64> = chords.iter().zip(&vals[units.len()..]).map(|(c, x)| (*c, *x)).collect();
        let eps = Augmentation { target: field.clone(), var_values, chord_values };
        if is_augmentation(d, &eps).unwrap().is_augmentation() {
            count += 1;
        }
    }
    count
}

fn mirror_detection() -> Outcome {
    let d = |s: &str| build_dga(&braid(s, 2), DgaMode::topological()).unwrap();
    let (rh, lh) = (d("1 1 1"), d("-1 -1 -1"));
    let counts = (ok(count_augmentations(&rh, 3))?, ok(count_augmentations(&lh, 3))?);
    let oracle = (brute_force(&rh, 3), brute_force(&lh, 3));
    ensure!(counts == oracle, "solver counts {counts:?} disagree with brute force {oracle:?}");
    // frozen regression values
    ensure!(counts == (4, 4), "counts changed from the frozen (4, 4): {counts:?}");
    ensure!(
        counts.0 != counts.1,
        "counts of sigma1^3 and sigma1^-3 over F_3 are both {} (brute force agrees); \
         (la, mu, U) -> (la/U, 1/mu, 1/U) maps one solution set onto the other, so mod-p counts cannot separate mirrors",
        counts.0
    );
    Ok(format!("counts {counts:?}"))
}

fn markov() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1234);
    let opts = CountOptions::default();
    let conj = |rng: &mut StdRng, b: &BraidWord| -> BraidWord {
        let n = b.n();
        if n == 1 {
            return b.clone();
        }
        let k = rng.gen_range(1..n as i32);
        let g = BraidWord::new(n, vec![if rng.gen_bool(0.5) { k } else { -k }]).unwrap();
        b.conjugate(&g).unwrap()
    };
    for _ in 0..20 {
        let b = random_knot(&mut rng, 4, 5);
        let count = |v: &BraidWord| count_braid(v, DgaMode::topological(), 3, &opts);
        let c0 = ok(count(&b))?;
        for v in [conj(&mut rng, &b), b.stabilize(true), b.stabilize(false)] {
            let c = ok(count(&v))?;
            ensure!(c == c0, "topological: [{b}] gives {c0}, [{v}] gives {c}");
        }
    }
    for _ in 0..20 {
        let b = random_knot(&mut rng, 4, 5);
        let count = |v: &BraidWord| count_braid(v, DgaMode::hat(), 3, &opts);
        let h0 = ok(count(&b))?;
        for v in [conj(&mut rng, &b), b.stabilize(true)] {
            let h = ok(count(&v))?;
            ensure!(h == h0, "hat: [{b}] gives {h0}, [{v}] gives {h}");
        }
    }
    Ok("20 knots per mode".into())
}

fn backtracking_oracle() -> Outcome {
    let mut instances: Vec<(BraidWord, DgaMode)> = Vec::new();
    let modes = [Variant::Topological, Variant::TransverseU, Variant::TransverseUV, Variant::Hat];
    let mut words = vec![(BraidWord::identity(1).unwrap())];
    for len in [1, 3, 5] {
        for code in 0..1u32 << len {
            let letters = (0..len).map(|k| if code >> k & 1 == 0 { 1 } else { -1 }).collect();
            words.push(BraidWord::new(2, letters).unwrap());
        }
    }
    for b in &words {
        instances.extend(modes.iter().map(|&v| (b.clone(), DgaMode::new(v))));
    }
    let mut rng = StdRng::seed_from_u64(99);
    for _ in 0..12 {
        let b = loop {
            let b = random_knot(&mut rng, 3, 6);
            if b.n() == 3 {
                break b;
            }
        };
        instances.push((b, DgaMode::hat()));
    }
    let mut checked = 0;
    for (b, mode) in instances {
        let d = ok(build_dga(&b, mode))?;
        let vars = d.algebra.ring.vars.len() + d.generators_of_degree(0).len();
        if vars > 8 {
            continue;
        }
        let (fast, slow) = (ok(count_augmentations(&d, 3))?, brute_force(&d, 3));
        ensure!(fast == slow, "[{b}] {mode}: backtracking {fast}, brute force {slow}");
        checked += 1;
    }
    Ok(format!("{checked} instances with at most 8 variables"))
}

fn homfly() -> Outcome {
    let u = ok(homfly_check(&ok(parse_lmu(UNKNOT))?, Some(&ok(parse_homfly("1"))?)))?;
    ensure!(u.passed(), "unknot: {u:?}");
    ensure!(u.quotient == Some(ok(parse_lmu("1"))?), "unknot quotient {:?}", u.quotient);
    let rh = ok(homfly_check(&ok(parse_lmu(RH))?, Some(&ok(parse_homfly("-a^-4 + a^-2*q^-2 + a^-2*q^2"))?)))?;
    ensure!(rh.passed(), "RH trefoil: {rh:?}");
    ensure!(rh.quotient == Some(ok(parse_lmu("2*U - U^2"))?), "RH trefoil quotient {:?}", rh.quotient);
    Ok("f/(U-1) = 1 and 2*U - U^2".into())
}

fn read_fixture() -> std::result::Result<Vec<BraidWord>, String> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/transverse_pair.txt");
    let text = ok(std::fs::read_to_string(path))?;
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (head, word) = line.split_once(':').ok_or_else(|| format!("bad fixture line {line:?}"))?;
        let n = head.split_whitespace().nth(1).and_then(|s| s.parse().ok()).ok_or_else(|| format!("bad fixture line {line:?}"))?;
        out.push(ok(BraidWord::parse(word.trim(), Some(n)))?);
    }
    ensure!(out.len() == 2, "fixture has {} braids", out.len());
    Ok(out)
}

fn transverse_pair() -> Outcome {
    let pair = read_fixture()?;
    let (b1, b2) = (&pair[0], &pair[1]);
    // transcription guards
    let t = Arc::new(vec!["t".to_string()]);
    let seven_six = ok(CommPoly::parse("1 - 5*t + 7*t^2 - 5*t^3 + t^4", t))?;
    for b in [b1, b2] {
        ensure!(b.is_knot(), "[{b}] is not a knot");
        ensure!(ok(b.self_linking())? == -1, "[{b}] has self-linking {}", b.self_linking().unwrap());
        ensure!(alexander(b) == seven_six, "[{b}] has Alexander polynomial {}", alexander(b));
    }
    let j = jones_in_a(b1);
    ensure!(jones_in_a(b2) == j, "Jones polynomials differ: {j} vs {}", jones_in_a(b2));
    ensure!(jones_in_a(&b1.mirror()) != j, "fixture knot is amphichiral");

    let r = ok(compare_transverse(b1, b2, 3, &CountOptions::default()))?;
    ensure!(r.topological_counts[0] == r.topological_counts[1], "topological counts differ: {:?}", r.topological_counts);
    ensure!(r.hat_counts == [0, 5], "hat counts {:?}", r.hat_counts);
    ensure!(r.distinguished, "not distinguished: {r:?}");
    Ok(format!(
        "self-linking {:?}, topological {:?}, hat {:?}: distinguished",
        r.self_linking, r.topological_counts, r.hat_counts
    ))
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "unknot DGA differentials", unknot_dga),
        (2, "phi golden vector", phi_golden),
        (3, "Phi^L and Phi^R of sigma1^3", phi_matrices_golden),
        (4, "square-root identity on random braids", square_root_identity),
        (5, "d^2 = 0 on random braids, all modes", d_squared),
        (6, "full twist acts trivially", full_twist),
        (7, "augmentation polynomials of unknot and trefoils", augmentation_polynomials),
        (8, "symmetry and mirror relation", symmetries),
        (9, "linearized homology", linearized),
        (10, "mirror detection by mod-3 counts", mirror_detection),
        (11, "Markov invariance of counts", markov),
        (12, "backtracking vs brute force", backtracking_oracle),
        (13, "HOMFLY specialization", homfly),
        (14, "transverse pair distinguished", transverse_pair),
    ];
    let mut failed = Vec::new();
    for (id, name, f) in criteria {
        let start = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(r) => r,
            Err(e) => Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2}: PASS  {name} [{secs:.1}s] {detail}"),
            Err(why) => {
                println!("criterion {id:>2}: FAIL  {name} [{secs:.1}s] {why}");
                failed.push(id);
            }
        }
    }
    println!(
        "criterion 15: SKIP  mutant separation and T(3,4) factor checks are stretch goals beyond the variable cap"
    );
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
