//! Built-in example table.
//!
//! Only braid words that appear in print (or are standard forms, such as
//! torus braids and full twists) live here. Braid words that had to be
//! read off a diagram belong in a separate, clearly marked fixture.

use std::fmt::Write as _;

use kch_core::augment::{count_braid, CountOptions};
use kch_core::augpoly::{augmentation_polynomial, check_symmetries, homfly_check, parse_homfly, parse_lmu, AugPolyOptions};
use kch_core::braid::BraidWord;
use kch_core::dga::{build_dga, DgaMode};
use kch_core::ncpoly::{AlgebraMode, ChordKind, Letter, NCPoly};
use kch_core::phi::{BraidAction, Meridians};
use kch_core::Result;
use serde_json::{json, Value};

use crate::cache::Payload;
use crate::commands;

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    /// Quoted from the literature.
    Published,
    /// Computed here and cross-checked by an independent method.
    Derived,
    /// A structural identity that holds for every input.
    Property,
}

impl Source {
    fn name(self) -> &'static str {
        match self {
            Source::Published => "published",
            Source::Derived => "derived",
            Source::Property => "property",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Expect {
    /// `d` of a degree-1 generator of the topological DGA.
    Differential { kind: ChordKind, value: &'static str },
    DSquaredZero,
    /// Augmentations to `F_p` of the topological (or hat) DGA.
    Count { prime: u64, hat: bool, value: u64 },
    /// Augmentation polynomial up to units, symmetric.
    Polynomial { two_var: bool, value: &'static str },
    /// Linearized homology over Z in degrees 0, 1, 2.
    Homology { aug: &'static str, groups: [&'static str; 3] },
    /// HOMFLY-PT specialization and the expected `f/(U-1)`.
    Homfly { homfly: &'static str, quotient: &'static str },
    /// The braid acts trivially on the chords.
    TrivialAction,
}

#[derive(Clone, Debug)]
pub struct ExampleEntry {
    pub name: &'static str,
    pub braid: &'static str,
    pub n: usize,
    pub checks: Vec<(Expect, Source)>,
}

const UNKNOT: &str = "U - la - mu + la*mu";
const RH: &str = "(U^3 - mu*U^2) + (-U^3 + mu*U^2 - 2*mu^2*U + 2*mu^2*U^2 + mu^3*U - mu^4*U)*la + (-mu^3 + mu^4)*la^2";
const LH: &str = "(mu^3*U^2 - mu^4*U) + (U^2 - mu*U^2 - 2*mu^2*U + 2*mu^2*U^2 - mu^3*U + mu^4)*la + (-U^2 + mu*U^2)*la^2";

pub fn table() -> Vec<ExampleEntry> {
    use Expect::*;
    use Source::*;
    vec![
        ExampleEntry {
            name: "unknot",
            braid: "",
            n: 1,
            checks: vec![
                (Differential { kind: ChordKind::C, value: "U - la - mu + la*mu" }, Published),
                (Differential { kind: ChordKind::D, value: "1 - mu - la^-1*U + la^-1*mu" }, Published),
                (Differential { kind: ChordKind::E, value: "-c11 - la*d11" }, Published),
                (Differential { kind: ChordKind::F, value: "-d11 - la^-1*c11" }, Published),
                (DSquaredZero, Property),
                (Homology { aug: "la=1,mu=-1,U=1", groups: ["0", "Z", "Z"] }, Published),
                (Polynomial { two_var: false, value: UNKNOT }, Published),
                (Polynomial { two_var: true, value: "(la - 1)*(mu - 1)" }, Published),
                (Homfly { homfly: "1", quotient: "1" }, Published),
                (Count { prime: 3, hat: false, value: 3 }, Derived),
                (Count { prime: 3, hat: true, value: 1 }, Derived),
            ],
        },
        ExampleEntry {
            name: "rh-trefoil",
            braid: "1 1 1",
            n: 2,
            checks: vec![
                (DSquaredZero, Property),
                (Polynomial { two_var: false, value: RH }, Published),
                (Polynomial { two_var: true, value: "(la - 1)*(mu - 1)*(la*mu^3 + 1)" }, Published),
                (Homology { aug: "la=1,mu=-1,U=1,a12=-2,a21=-2", groups: ["Z/3", "Z + (Z/3)^3", "Z"] }, Published),
                (Homfly { homfly: "-a^-4 + a^-2*q^-2 + a^-2*q^2", quotient: "2*U - U^2" }, Published),
                (Count { prime: 3, hat: false, value: 4 }, Derived),
                (Count { prime: 5, hat: false, value: 15 }, Derived),
            ],
        },
        ExampleEntry {
            name: "lh-trefoil",
            braid: "-1 -1 -1",
            n: 2,
            checks: vec![
                (DSquaredZero, Property),
                (Polynomial { two_var: false, value: LH }, Published),
                (Polynomial { two_var: true, value: "(la - 1)*(mu - 1)*(la + mu^3)" }, Published),
                (Homfly { homfly: "-a^4 + a^2*q^-2 + a^2*q^2", quotient: "2*U^-1 - U^-2" }, Derived),
                (Count { prime: 3, hat: false, value: 4 }, Derived),
                (Count { prime: 5, hat: false, value: 15 }, Derived),
            ],
        },
        ExampleEntry { name: "full-twist-2", braid: "1 1", n: 2, checks: vec![(TrivialAction, Property)] },
        ExampleEntry { name: "full-twist-3", braid: "1 2 1 2 1 2", n: 3, checks: vec![(TrivialAction, Property)] },
        ExampleEntry { name: "full-twist-4", braid: "1 2 3 1 2 3 1 2 3 1 2 3", n: 4, checks: vec![(TrivialAction, Property)] },
        ExampleEntry { name: "figure-eight", braid: "1 -2 1 -2", n: 3, checks: vec![(DSquaredZero, Property)] },
        ExampleEntry {
            name: "torus-3-4",
            braid: "1 2 1 2 1 2 1 2",
            n: 3,
            checks: vec![(DSquaredZero, Property), (Count { prime: 3, hat: false, value: T34_COUNT }, Derived)],
        },
    ]
}

/// Agrees with the symbolic backtracking count (see the CLI tests).
const T34_COUNT: u64 = 7;

fn describe(e: &Expect) -> String {
    match e {
        Expect::Differential { kind, value } => format!("d {}11 = {value}", kind_symbol(*kind)),
        Expect::DSquaredZero => "d^2 = 0".into(),
        Expect::Count { prime, hat, value } => {
            format!("{} augmentations to F_{prime}{}", value, if *hat { " (hat)" } else { "" })
        }
        Expect::Polynomial { two_var: false, value } => format!("augmentation polynomial {value}"),
        Expect::Polynomial { two_var: true, value } => format!("two-variable augmentation polynomial {value}"),
        Expect::Homology { aug, groups } => format!("linearized homology at {aug}: {}", groups.join(", ")),
        Expect::Homfly { quotient, .. } => format!("HOMFLY-PT: f/(U-1) = {quotient}"),
        Expect::TrivialAction => "acts as the identity on chords".into(),
    }
}

fn kind_symbol(k: ChordKind) -> char {
    Letter::chord(k, 1, 1).to_string().chars().next().unwrap()
}

/// `Ok(None)` on success, `Ok(Some(why))` on a mismatch.
fn check(b: &BraidWord, e: &Expect) -> Result<Option<String>> {
    let mismatch = |got: String| Ok(Some(format!("got {got}")));
    match e {
        Expect::Differential { kind, value } => {
            let d = build_dga(b, DgaMode::topological())?;
            let got = d.d(*kind, 1, 1)?;
            if got == &NCPoly::parse(value, AlgebraMode::Commuted)? {
                Ok(None)
            } else {
                mismatch(got.to_string())
            }
        }
        Expect::DSquaredZero => {
            let r = build_dga(b, DgaMode::topological())?.check_d_squared();
            Ok(r.failure.map(|(g, res)| format!("d^2 {g} = {res}")))
        }
        Expect::Count { prime, hat, value } => {
            let mode = if *hat { DgaMode::hat() } else { DgaMode::topological() };
            let got = count_braid(b, mode, *prime, &CountOptions::default())?;
            if got == *value {
                Ok(None)
            } else {
                mismatch(got.to_string())
            }
        }
        Expect::Polynomial { two_var, value } => {
            let opts = AugPolyOptions { two_var: *two_var, ..Default::default() };
            let p = augmentation_polynomial(b, &opts)?.candidate;
            if !p.equal_up_to_units(&parse_lmu(value)?) {
                return mismatch(p.to_string());
            }
            if !check_symmetries(&p, None)?.self_symmetric {
                return Ok(Some(format!("{p} is not symmetric")));
            }
            Ok(None)
        }
        Expect::Homology { aug, groups } => {
            let p = commands::run_linhom_z(b, aug)?;
            let got: Vec<String> = (0..3).map(|k| p.result["degrees"][k.to_string()]["group"].as_str().unwrap_or("0").to_string()).collect();
            if got == groups {
                Ok(None)
            } else {
                mismatch(got.join(", "))
            }
        }
        Expect::Homfly { homfly, quotient } => {
            let p = augmentation_polynomial(b, &AugPolyOptions::default())?.candidate;
            let r = homfly_check(&p, Some(&parse_homfly(homfly)?))?;
            if r.passed() && r.quotient == Some(parse_lmu(quotient)?) {
                Ok(None)
            } else {
                mismatch(format!("{:?}", r.quotient.map(|q| q.to_string())))
            }
        }
        Expect::TrivialAction => {
            let n = b.n();
            let act = BraidAction::new(b, &(1..=n as u8).collect::<Vec<_>>(), Meridians::Trivial)?;
            for i in 1..=n as u8 {
                for j in (1..=n as u8).filter(|&j| j != i) {
                    if act.image(i, j) != NCPoly::letter(Letter::a(i, j)) {
                        return mismatch(format!("a{i}{j} -> {}", act.image(i, j)));
                    }
                }
            }
            Ok(None)
        }
    }
}

pub fn run(verify: bool) -> Payload {
    let mut text = String::new();
    let mut entries = Vec::new();
    let mut all_pass = true;
    for entry in table() {
        writeln!(text, "{} [{}] on {} strands", entry.name, entry.braid, entry.n).unwrap();
        let b = BraidWord::parse(entry.braid, Some(entry.n)).expect("built-in braid words parse");
        let mut checks = Vec::new();
        for (e, source) in &entry.checks {
            let what = describe(e);
            let mut item = json!({ "check": what, "source": source.name() });
            if verify {
                let outcome = match check(&b, e) {
                    Ok(None) => Ok(()),
                    Ok(Some(why)) => Err(why),
                    Err(err) => Err(err.to_string()),
                };
                let pass = outcome.is_ok();
                all_pass &= pass;
                item["passed"] = json!(pass);
                match outcome {
                    Ok(()) => writeln!(text, "  PASS  {what} ({})", source.name()).unwrap(),
                    Err(why) => {
                        writeln!(text, "  FAIL  {what} ({}): {why}", source.name()).unwrap();
                        item["error"] = json!(why);
                    }
                }
            } else {
                writeln!(text, "  {what} ({})", source.name()).unwrap();
            }
            checks.push(item);
        }
        entries.push(json!({ "name": entry.name, "braid": entry.braid, "n": entry.n, "checks": checks }));
    }
    let mut result = json!({ "entries": entries });
    if verify {
        writeln!(text, "{}", if all_pass { "all examples pass" } else { "some examples FAIL" }).unwrap();
        result["passed"] = Value::Bool(all_pass);
    }
    Payload { text, result }
}
