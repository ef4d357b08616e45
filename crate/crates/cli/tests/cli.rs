use std::path::Path;
use std::process::{Command, Output};

use kch_core::augment::count_augmentations;
use kch_core::augpoly::parse_lmu;
use kch_core::braid::BraidWord;
use kch_core::dga::{build_dga, DgaMode};

fn kch(cache: Option<&Path>, args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kch"));
    cmd.args(args);
    match cache {
        Some(dir) => cmd.env("KCH_CACHE", dir),
        None => cmd.arg("--no-cache"),
    };
    cmd.output().expect("kch runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn augpoly_prints_the_trefoil_polynomial() {
    let o = kch(None, &["augpoly", "--braid", "1 1 1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let first = out.lines().next().unwrap();
    let rh = "(U^3 - mu*U^2) + (-U^3 + mu*U^2 - 2*mu^2*U + 2*mu^2*U^2 + mu^3*U - mu^4*U)*la + (-mu^3 + mu^4)*la^2";
    assert!(parse_lmu(first).unwrap().equal_up_to_units(&parse_lmu(rh).unwrap()), "{out}");
}

#[test]
fn d2_check_figure_eight() {
    let o = kch(None, &["d2-check", "--braid", "1 -2 1 -2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("pass"));
}

#[test]
fn exit_codes() {
    assert_eq!(kch(None, &["aug-count", "--braid", "1 x"]).status.code(), Some(1));
    assert_eq!(kch(None, &["aug-count", "--braid", "1 1 1", "--bogus"]).status.code(), Some(1));
    assert_eq!(kch(None, &["aug-count", "--braid", "1 1", "--hat"]).status.code(), Some(1), "links have no hat count");
    assert_eq!(kch(None, &["aug-count", "--braid", "1 2 3 4 5"]).status.code(), Some(2), "30 chords exceed the cap");
    assert_eq!(kch(None, &["homfly-check", "--poly", "U - la - mu + la*mu", "--homfly", "a^2"]).status.code(), Some(1));
}

#[test]
fn json_round_trips() {
    for args in [
        vec!["--json", "aug-count", "--braid", "1 1 1", "--enumerate"],
        vec!["--json", "dga", "--braid", "1 -2 1 -2"],
        vec!["--json", "linhom", "--braid", "1 1 1", "--aug", "la=1,mu=-1,U=1,a12=-2,a21=-2"],
    ] {
        let out = stdout(&kch(None, &args));
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", out);
        for key in ["command", "input", "mode", "result", "version"] {
            assert!(v.get(key).is_some(), "missing {key} in {out}");
        }
    }
}

#[test]
fn aug_count_json_schema() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&kch(None, &["--json", "aug-count", "--braid", "1 1 1"]))).unwrap();
    assert_eq!(v["result"]["count"], 4);
    assert_eq!(v["result"]["prime"], 3);
    assert_eq!(v["result"]["mode"], "topological");
    assert!(v["result"].get("solutions").is_none());
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--json", "aug-count", "--braid", "1 -2 1 -2", "--hat"];
    let cold = kch(None, &args);
    let first = kch(Some(dir.path()), &args);
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(entries, 1);
    let warm = kch(Some(dir.path()), &args);
    assert_eq!(cold.stdout, first.stdout);
    assert_eq!(first.stdout, warm.stdout);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn linhom_coefficients() {
    let aug = "la=1,mu=-1,U=1,a12=-2,a21=-2";
    let z = stdout(&kch(None, &["linhom", "--braid", "1 1 1", "--aug", aug]));
    assert!(z.contains("H_0 = Z/3\nH_1 = Z + (Z/3)^3\nH_2 = Z\n"), "{z}");
    let f3 = stdout(&kch(None, &["linhom", "--braid", "1 1 1", "--aug", aug, "--coeff", "Fp", "--prime", "3"]));
    assert!(f3.contains("H_0 = F3\nH_1 = F3^5\nH_2 = F3^4\n"), "{f3}");
    let q = stdout(&kch(None, &["linhom", "--braid", "", "--aug", "la=1,mu=-1,U=1", "--coeff", "Q"]));
    assert!(q.contains("H_0 = 0\nH_1 = Q\nH_2 = Q\n"), "{q}");
}

#[test]
fn compare_transverse_markov_moves() {
    let b = "1 1 1 -2";
    // a conjugate and the positive stabilization
    for other in ["2 1 1 1 -2 -2", "1 1 1 -2 3"] {
        let o = kch(None, &["compare-transverse", "--braid", b, "--braid", other]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("verdict over F_3: not distinguished"), "{}", stdout(&o));
    }
}

#[test]
fn pair_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.txt");
    std::fs::write(&path, "# two words\nx 2: 1 1 1\ny 3: 1 1 1 2\n").unwrap();
    let o = kch(None, &["--json", "compare-transverse", "--pair-file", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["verdict"], "not distinguished");
    assert_eq!(v["result"]["hat_counts"], serde_json::json!([1, 1]));
}

#[test]
fn examples_verify() {
    let o = kch(None, &["examples", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("all examples pass\n"));
}

#[test]
fn torus_count_agrees_with_the_symbolic_solver() {
    // the CLI counts T(3,4) by evaluation; the DGA solver is independent
    let b = BraidWord::parse("1 2 1 2 1 2 1 2", Some(3)).unwrap();
    let symbolic = count_augmentations(&build_dga(&b, DgaMode::topological()).unwrap(), 3).unwrap();
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&kch(None, &["--json", "aug-count", "--braid", "1 2 1 2 1 2 1 2"]))).unwrap();
    assert_eq!(v["result"]["count"], symbolic);
    assert_eq!(symbolic, 7);
}
