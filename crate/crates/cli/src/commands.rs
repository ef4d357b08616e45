use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use kch_core::augment::{compare_transverse, count_braid, enumerate_augmentations, Augmentation, CountOptions};
use kch_core::augpoly::{
    augmentation_polynomial, boundary_vanishes, check_symmetries, homfly_check, parse_homfly, parse_lmu, AugPolyOptions, ElimMethod,
};
use kch_core::braid::BraidWord;
use kch_core::coeff::Var;
use kch_core::dga::{build_dga, DgaMode, Variant};
use kch_core::linhom::linearized_homology;
use kch_core::ncpoly::{ChordKind, Letter};
use kch_core::phi::Star;
use kch_core::ring::{Integers, PrimeField, Rationals, Ring};
use kch_core::snf::Euclidean;
use kch_core::{Error, Result};
use log::info;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::cache::{Payload, ResultCache};
use crate::{BraidArgs, Cli, Command, ModeArgs};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Runs one command and returns the exit code: 0 on success, 1 on a domain
/// error or a failed check, 2 when a resource cap refused the computation.
pub fn run(cli: &Cli) -> u8 {
    let (name, request) = match describe(&cli.command) {
        Ok(r) => r,
        Err(e) => return report_error(&e),
    };
    let cache = ResultCache::from_env(!cli.no_cache && !matches!(cli.command, Command::Examples { .. }));
    let key = ResultCache::key(&json!({ "command": name, "request": request, "version": VERSION }));
    let payload = match cache.get(&key) {
        Some(p) => p,
        None => match execute(&cli.command) {
            Ok(p) => {
                cache.put(&key, &p);
                p
            }
            Err(e) => return report_error(&e),
        },
    };
    if cli.json {
        let envelope = json!({
            "command": name,
            "input": request["input"],
            "mode": request["mode"],
            "result": payload.result,
            "version": VERSION,
        });
        println!("{}", serde_json::to_string_pretty(&envelope).expect("JSON values serialize"));
    } else {
        print!("{}", payload.text);
    }
    if payload.result.get("passed") == Some(&Value::Bool(false)) {
        1
    } else {
        0
    }
}

fn report_error(e: &Error) -> u8 {
    eprintln!("error: {e}");
    if e.is_resource() {
        2
    } else {
        1
    }
}

pub fn parse_braid(word: &str, n: Option<usize>) -> Result<BraidWord> {
    BraidWord::parse(word, n.or(if word.trim().is_empty() { Some(1) } else { None }))
}

fn braid_of(b: &BraidArgs) -> Result<BraidWord> {
    parse_braid(&b.braid, b.n)
}

fn mode_of(m: &ModeArgs, hat: bool) -> Result<DgaMode> {
    let mut mode = DgaMode::new(if hat { Variant::Hat } else { Variant::parse(&m.mode)? });
    if m.noncommutative {
        mode = mode.noncommutative();
    }
    match m.star.as_deref() {
        None => {}
        Some("0" | "low") => mode = mode.with_star(Star::Low),
        Some("n+1" | "high") => mode = mode.with_star(Star::High),
        Some(s) => return Err(Error::Parse(format!("unknown star position {s:?} (0 or n+1)"))),
    }
    Ok(mode)
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

/// The command name and the normalized request: `input` (parameters) and
/// `mode`. The request is also the cache key.
fn describe(cmd: &Command) -> Result<(&'static str, Value)> {
    let braid_input = |b: &BraidArgs| -> Result<Value> {
        let w = braid_of(b)?;
        Ok(json!({ "braid": w.to_string(), "n": w.n() }))
    };
    Ok(match cmd {
        Command::Dga { braid, mode } => ("dga", json!({ "input": braid_input(braid)?, "mode": mode_of(mode, false)?.to_string() })),
        Command::D2Check { braid, mode } => {
            ("d2-check", json!({ "input": braid_input(braid)?, "mode": mode_of(mode, false)?.to_string() }))
        }
        Command::AugCount { braid, mode, prime, hat, enumerate } => {
            let mut input = braid_input(braid)?;
            input["prime"] = json!(prime);
            input["enumerate"] = json!(enumerate);
            ("aug-count", json!({ "input": input, "mode": mode_of(mode, *hat)?.to_string() }))
        }
        Command::AugEnum { braid, mode, prime, hat } => {
            let mut input = braid_input(braid)?;
            input["prime"] = json!(prime);
            ("aug-enum", json!({ "input": input, "mode": mode_of(mode, *hat)?.to_string() }))
        }
        Command::Linhom { braid, mode, aug, coeff, prime } => {
            let mut input = braid_input(braid)?;
            input["aug"] = json!(parse_assignment(aug)?.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(","));
            input["coeff"] = json!(coefficients(coeff, *prime)?.name());
            ("linhom", json!({ "input": input, "mode": mode_of(mode, false)?.to_string() }))
        }
        Command::Augpoly { braid, two_var, method, homfly_file, time_limit } => {
            let mut input = braid_input(braid)?;
            input["two_var"] = json!(two_var);
            input["method"] = json!(method_of(method.as_deref())?.to_string());
            input["time_limit"] = json!(time_limit);
            if let Some(path) = homfly_file {
                input["homfly"] = json!(parse_homfly(read_file(path)?.trim())?.to_string());
            }
            ("augpoly", json!({ "input": input, "mode": "topological" }))
        }
        Command::HomflyCheck { poly, braid, n, homfly, homfly_file, method } => {
            let mut input = json!({});
            match (poly, braid) {
                (Some(p), _) => input["poly"] = json!(parse_lmu(p)?.to_string()),
                (None, Some(b)) => {
                    let w = parse_braid(b, *n)?;
                    input["braid"] = json!(w.to_string());
                    input["n"] = json!(w.n());
                    input["method"] = json!(method_of(method.as_deref())?.to_string());
                }
                (None, None) => return Err(Error::Config("give --poly or --braid".into())),
            }
            input["homfly"] = match homfly_text(homfly.as_deref(), homfly_file.as_deref())? {
                Some(h) => json!(parse_homfly(&h)?.to_string()),
                None => Value::Null,
            };
            ("homfly-check", json!({ "input": input, "mode": "topological" }))
        }
        Command::CompareTransverse { braid, n, pair_file, prime } => {
            let pair = transverse_pair(braid, *n, pair_file.as_deref())?;
            let input = json!({
                "braids": pair.iter().map(|b| json!({ "braid": b.to_string(), "n": b.n() })).collect::<Vec<_>>(),
                "prime": prime,
            });
            ("compare-transverse", json!({ "input": input, "mode": "hat" }))
        }
        Command::Examples { verify } => ("examples", json!({ "input": { "verify": verify }, "mode": Value::Null })),
    })
}

fn execute(cmd: &Command) -> Result<Payload> {
    match cmd {
        Command::Dga { braid, mode } => dga(&braid_of(braid)?, mode_of(mode, false)?),
        Command::D2Check { braid, mode } => d2_check(&braid_of(braid)?, mode_of(mode, false)?),
        Command::AugCount { braid, mode, prime, hat, enumerate } => {
            aug_count(&braid_of(braid)?, mode_of(mode, *hat)?, *prime, *enumerate, false)
        }
        Command::AugEnum { braid, mode, prime, hat } => aug_count(&braid_of(braid)?, mode_of(mode, *hat)?, *prime, true, true),
        Command::Linhom { braid, mode, aug, coeff, prime } => {
            let b = braid_of(braid)?;
            let mode = mode_of(mode, false)?;
            let values = parse_assignment(aug)?;
            match coefficients(coeff, *prime)? {
                Coefficients::Z => linhom(&b, mode, Integers, &values, |v| Ok(Integers.from_int(&integer(v)?))),
                Coefficients::Fp(f) => linhom(&b, mode, f.clone(), &values, |v| Ok(f.from_int(&integer(v)?))),
                Coefficients::Q => linhom(&b, mode, Rationals, &values, rational),
            }
        }
        Command::Augpoly { braid, two_var, method, homfly_file, time_limit } => {
            let homfly = match homfly_file {
                Some(path) => Some(read_file(path)?),
                None => None,
            };
            let opts = AugPolyOptions {
                method: method_of(method.as_deref())?,
                two_var: *two_var,
                time_limit: Some(Duration::from_secs(*time_limit)),
                ..Default::default()
            };
            augpoly(&braid_of(braid)?, &opts, homfly.as_deref())
        }
        Command::HomflyCheck { poly, braid, n, homfly, homfly_file, method } => {
            let p = match (poly, braid) {
                (Some(p), _) => parse_lmu(p)?,
                (None, Some(b)) => {
                    let opts = AugPolyOptions { method: method_of(method.as_deref())?, ..Default::default() };
                    augmentation_polynomial(&parse_braid(b, *n)?, &opts)?.candidate
                }
                (None, None) => return Err(Error::Config("give --poly or --braid".into())),
            };
            let h = match homfly_text(homfly.as_deref(), homfly_file.as_deref())? {
                Some(h) => Some(parse_homfly(&h)?),
                None => None,
            };
            let r = homfly_check(&p, h.as_ref())?;
            let mut text = format!("polynomial: {p}\nP(0, U, U) = 0: {}\nf = {}\n", yes(r.boundary_vanishes), r.f);
            match &r.quotient {
                Some(q) => writeln!(text, "f/(U-1) = {q}").unwrap(),
                None => writeln!(text, "f is not divisible by U - 1").unwrap(),
            }
            if let Some(e) = &r.expected {
                writeln!(text, "expected from HOMFLY-PT: {e}").unwrap();
            }
            writeln!(text, "{}", if r.passed() { "pass" } else { "fail" }).unwrap();
            let mut result = serde_json::to_value(&r).expect("report serializes");
            result["passed"] = json!(r.passed());
            Ok(Payload { text, result })
        }
        Command::CompareTransverse { braid, n, pair_file, prime } => {
            let pair = transverse_pair(braid, *n, pair_file.as_deref())?;
            let r = compare_transverse(&pair[0], &pair[1], *prime, &CountOptions::default())?;
            let mut text = String::new();
            for k in 0..2 {
                writeln!(
                    text,
                    "B{}: [{}] on {} strands, writhe {}, self-linking {}, topological count {}, hat count {}",
                    k + 1,
                    pair[k],
                    r.strands[k],
                    r.writhe[k],
                    r.self_linking[k],
                    r.topological_counts[k],
                    r.hat_counts[k]
                )
                .unwrap();
            }
            writeln!(text, "verdict over F_{}: {}", r.prime, if r.distinguished { "distinguished" } else { "not distinguished" })
                .unwrap();
            let mut result = serde_json::to_value(&r).expect("comparison serializes");
            result["verdict"] = json!(if r.distinguished { "distinguished" } else { "not distinguished" });
            Ok(Payload { text, result })
        }
        Command::Examples { verify } => Ok(crate::examples::run(*verify)),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn method_of(m: Option<&str>) -> Result<ElimMethod> {
    match m {
        Some(m) => ElimMethod::parse(m),
        None => Ok(AugPolyOptions::default().method),
    }
}

fn homfly_text(inline: Option<&str>, file: Option<&Path>) -> Result<Option<String>> {
    match (inline, file) {
        (Some(h), _) => Ok(Some(h.to_string())),
        (None, Some(path)) => Ok(Some(read_file(path)?.trim().to_string())),
        (None, None) => Ok(None),
    }
}

/// Reads a pair file: lines `name strands: word`, `#` comments.
pub fn read_pair_file(text: &str) -> Result<Vec<BraidWord>> {
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let bad = || Error::Parse(format!("malformed pair-file line {line:?}"));
        let (head, word) = line.split_once(':').ok_or_else(bad)?;
        let n = head.split_whitespace().nth(1).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        out.push(BraidWord::parse(word.trim(), Some(n))?);
    }
    Ok(out)
}

fn transverse_pair(words: &[String], n: Option<usize>, file: Option<&Path>) -> Result<Vec<BraidWord>> {
    let pair = match file {
        Some(path) if words.is_empty() => read_pair_file(&read_file(path)?)?,
        Some(_) => return Err(Error::Config("give either --braid twice or --pair-file".into())),
        None => words.iter().map(|w| parse_braid(w, n)).collect::<Result<Vec<_>>>()?,
    };
    if pair.len() != 2 {
        return Err(Error::Config(format!("expected two braids, got {}", pair.len())));
    }
    Ok(pair)
}

pub fn dga(b: &BraidWord, mode: DgaMode) -> Result<Payload> {
    let d = build_dga(b, mode)?;
    let export = d.export();
    let mut text = format!("braid [{}] on {} strands, {} DGA\n", b, b.n(), mode);
    writeln!(text, "coefficients: {}", export.ring.variables.join(", ")).unwrap();
    for g in &export.generators {
        let dg = &export.differential[&g.name];
        writeln!(text, "d {} = {}    (degree {})", g.name, dg, g.degree).unwrap();
    }
    Ok(Payload { text, result: serde_json::to_value(&export).expect("export serializes") })
}

pub fn d2_check(b: &BraidWord, mode: DgaMode) -> Result<Payload> {
    let r = build_dga(b, mode)?.check_d_squared();
    let text = match &r.failure {
        None => format!("pass: d^2 = 0 on all {} generators\n", r.checked),
        Some((g, res)) => format!("fail: d^2 {g} = {res}\n"),
    };
    let result = json!({
        "passed": r.passed(),
        "checked": r.checked,
        "failure": r.failure.as_ref().map(|(g, res)| json!({ "generator": g.to_string(), "residue": res.to_string() })),
    });
    Ok(Payload { text, result })
}

pub fn solution_map(s: &Augmentation<PrimeField>) -> BTreeMap<String, u64> {
    s.var_values.iter().map(|(v, x)| (v.to_string(), *x)).chain(s.chord_values.iter().map(|(c, x)| (c.to_string(), *x))).collect()
}

pub fn aug_count(b: &BraidWord, mode: DgaMode, p: u64, enumerate: bool, list_only: bool) -> Result<Payload> {
    let opts = CountOptions::default();
    let (count, sols) = if enumerate {
        let sols = enumerate_augmentations(&build_dga(b, mode)?, p)?;
        (sols.len() as u64, Some(sols))
    } else {
        (count_braid(b, mode, p, &opts)?, None)
    };
    info!("{count} augmentations of [{b}] over F_{p}");
    let mut text = String::new();
    if !list_only {
        writeln!(text, "{count} augmentations of the {mode} DGA of [{b}] to F_{p}").unwrap();
    }
    if let Some(sols) = &sols {
        for s in sols {
            // units first, then chords
            let parts: Vec<String> = s
                .var_values
                .iter()
                .map(|(v, x)| format!("{v}={x}"))
                .chain(s.chord_values.iter().map(|(c, x)| format!("{c}={x}")))
                .collect();
            writeln!(text, "{}", parts.join(" ")).unwrap();
        }
    }
    let mut result = json!({ "count": count, "mode": mode.to_string(), "prime": p });
    if let Some(sols) = sols {
        result["solutions"] = json!(sols.iter().map(solution_map).collect::<Vec<_>>());
    }
    Ok(Payload { text, result })
}

/// Generator or variable name and its value, in input order.
fn parse_assignment(s: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("expected name=value, got {part:?}")))?;
        let (k, v) = (k.trim(), v.trim());
        if Var::parse(k).is_none() && parse_chord(k).is_none() {
            return Err(Error::Parse(format!("unknown augmentation variable {k:?}")));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

/// `a12`, or `a3_11` when an index has two digits.
fn parse_chord(name: &str) -> Option<Letter> {
    let rest = name.strip_prefix('a')?;
    let (i, j) = match rest.split_once('_') {
        Some((i, j)) => (i.parse().ok()?, j.parse().ok()?),
        None if rest.len() == 2 => (rest[..1].parse().ok()?, rest[1..].parse().ok()?),
        None => return None,
    };
    Some(Letter::chord(ChordKind::A, i, j))
}

enum Coefficients {
    Z,
    Q,
    Fp(PrimeField),
}

impl Coefficients {
    fn name(&self) -> String {
        match self {
            Coefficients::Z => "Z".into(),
            Coefficients::Q => "Q".into(),
            Coefficients::Fp(f) => format!("F{}", f.modulus()),
        }
    }
}

fn coefficients(s: &str, prime: Option<u64>) -> Result<Coefficients> {
    let field = |p: u64| PrimeField::new(p).map(Coefficients::Fp).ok_or_else(|| Error::Config(format!("{p} is not prime")));
    match s {
        "Z" => Ok(Coefficients::Z),
        "Q" => Ok(Coefficients::Q),
        "Fp" => field(prime.unwrap_or(3)),
        _ => match s.strip_prefix('F').and_then(|p| p.parse().ok()) {
            Some(p) => field(p),
            None => Err(Error::Config(format!("unknown coefficients {s:?} (Z, Q, Fp, F<p>)"))),
        },
    }
}

fn integer(v: &str) -> Result<BigInt> {
    BigInt::from_str(v).map_err(|_| Error::Parse(format!("{v:?} is not an integer")))
}

fn rational(v: &str) -> Result<BigRational> {
    BigRational::from_str(v).map_err(|_| Error::Parse(format!("{v:?} is not a rational number")))
}

fn linhom<R: Euclidean>(
    b: &BraidWord,
    mode: DgaMode,
    ring: R,
    values: &[(String, String)],
    convert: impl Fn(&str) -> Result<R::Elem>,
) -> Result<Payload> {
    let d = build_dga(b, mode)?;
    let mut eps = Augmentation { target: ring, var_values: BTreeMap::new(), chord_values: BTreeMap::new() };
    for (k, v) in values {
        let x = convert(v)?;
        match Var::parse(k) {
            Some(var) => {
                eps.var_values.insert(var, x);
            }
            None => {
                eps.chord_values.insert(parse_chord(k).expect("validated"), x);
            }
        }
    }
    for c in d.generators_of_degree(0) {
        eps.chord_values.entry(c).or_insert_with(|| eps.target.zero());
    }
    let h = linearized_homology(&d, &eps)?;
    let summary = h.summary();
    let mut text = format!("linearized homology of [{b}] over {}\n", h.ring);
    for k in summary.keys() {
        writeln!(text, "H_{k} = {}", h.describe(*k)).unwrap();
    }
    let degrees: BTreeMap<String, Value> = summary
        .iter()
        .map(|(k, g)| (k.to_string(), json!({ "free_rank": g.free_rank, "torsion": g.torsion, "group": h.describe(*k) })))
        .collect();
    Ok(Payload { text, result: json!({ "ring": h.ring, "degrees": degrees }) })
}

pub fn augpoly(b: &BraidWord, opts: &AugPolyOptions, homfly: Option<&str>) -> Result<Payload> {
    let r = augmentation_polynomial(b, opts)?;
    let p = &r.candidate;
    let sym = check_symmetries(p, None)?;
    let boundary = if opts.two_var { None } else { Some(boundary_vanishes(p)?) };
    let mut text = format!("{p}\n");
    writeln!(text, "method: {}{}", r.method, if opts.two_var { ", U = 1" } else { "" }).unwrap();
    for c in &r.point_checks {
        writeln!(text, "F_{} points: {} checked, {} off the curve", c.prime, c.points, c.failures.len()).unwrap();
    }
    writeln!(text, "symmetric under (la, mu) -> (U/la, U/mu): {}", yes(sym.self_symmetric)).unwrap();
    if let Some(bv) = boundary {
        writeln!(text, "P(0, U, U) = 0: {}", yes(bv)).unwrap();
    }
    if !r.uncertified_factors.is_empty() {
        writeln!(text, "uncertified factors: {}", r.uncertified_factors.join("; ")).unwrap();
    }
    let mut result = json!({
        "polynomial": p.to_string(),
        "elimination": serde_json::to_value(&r).expect("result serializes"),
        "self_symmetric": sym.self_symmetric,
        "boundary_vanishes": boundary,
    });
    if let Some(h) = homfly {
        if opts.two_var {
            return Err(Error::Config("the HOMFLY-PT check needs the three-variable polynomial".into()));
        }
        let report = homfly_check(p, Some(&parse_homfly(h.trim())?))?;
        writeln!(text, "HOMFLY-PT check: {}", if report.passed() { "pass" } else { "fail" }).unwrap();
        result["homfly"] = serde_json::to_value(&report).expect("report serializes");
        result["passed"] = json!(report.passed());
    }
    Ok(Payload { text, result })
}

/// Linearized homology over Z of the topological DGA.
pub fn run_linhom_z(b: &BraidWord, aug: &str) -> Result<Payload> {
    let values = parse_assignment(aug)?;
    linhom(b, DgaMode::topological(), Integers, &values, |v| Ok(Integers.from_int(&integer(v)?)))
}
