use kch_core::augpoly::{
    augmentation_polynomial, boundary_vanishes, check_symmetries, homfly_check, parse_homfly, parse_lmu, two_variable_augpoly,
    AugPolyOptions, ElimMethod,
};
use kch_core::braid::BraidWord;

fn braid(s: &str) -> BraidWord {
    BraidWord::parse(s, Some(if s.is_empty() { 1 } else { 2 })).unwrap()
}

const UNKNOT: &str = "U - la - mu + la*mu";
const RH: &str = "(U^3 - mu*U^2) + (-U^3 + mu*U^2 - 2*mu^2*U + 2*mu^2*U^2 + mu^3*U - mu^4*U)*la + (-mu^3 + mu^4)*la^2";
const LH: &str = "(mu^3*U^2 - mu^4*U) + (U^2 - mu*U^2 - 2*mu^2*U + 2*mu^2*U^2 - mu^3*U + mu^4)*la + (-U^2 + mu*U^2)*la^2";

fn opts(method: ElimMethod) -> AugPolyOptions {
    AugPolyOptions { method, ..Default::default() }
}

#[test]
fn three_variable_polynomials_both_routes() {
    for (b, expect) in [("", UNKNOT), ("1 1 1", RH), ("-1 -1 -1", LH)] {
        for m in [ElimMethod::GroebnerLex, ElimMethod::ResultantChain] {
            let r = augmentation_polynomial(&braid(b), &opts(m)).unwrap();
            assert!(
                r.candidate.equal_up_to_units(&parse_lmu(expect).unwrap()),
                "[{b}] {m}: got {}",
                r.candidate
            );
            assert!(r.points_vanish(), "[{b}] {m}: {:?}", r.point_checks);
            assert!(boundary_vanishes(&r.candidate).unwrap());
        }
    }
}

#[test]
fn two_variable_polynomials_both_routes() {
    let cases = [
        ("", "(la - 1)*(mu - 1)"),
        ("1 1 1", "(la - 1)*(mu - 1)*(la*mu^3 + 1)"),
        ("-1 -1 -1", "(la - 1)*(mu - 1)*(la + mu^3)"),
    ];
    for (b, expect) in cases {
        for m in [ElimMethod::GroebnerLex, ElimMethod::ResultantChain] {
            let r = two_variable_augpoly(&braid(b), &opts(m)).unwrap();
            assert!(r.candidate.equal_up_to_units(&parse_lmu(expect).unwrap()), "[{b}] {m}: got {}", r.candidate);
            assert!(r.points_vanish());
            assert!(r.candidate.div_exact(&parse_lmu("(la - 1)*(mu - 1)").unwrap()).is_some());
        }
    }
}

#[test]
fn symmetries() {
    for p in [UNKNOT, RH, LH, "(la - 1)*(mu - 1)*(la*mu^3 + 1)"] {
        assert!(check_symmetries(&parse_lmu(p).unwrap(), None).unwrap().self_symmetric, "{p}");
    }
    let rh = parse_lmu(RH).unwrap();
    let lh = parse_lmu(LH).unwrap();
    assert_eq!(check_symmetries(&rh, Some(&lh)).unwrap().mirror_related, Some(true));
    assert_eq!(check_symmetries(&rh, Some(&rh)).unwrap().mirror_related, Some(false));
    assert!(!check_symmetries(&parse_lmu("la + 2*mu + U^2").unwrap(), None).unwrap().self_symmetric);
}

#[test]
fn homfly_specialization() {
    let r = homfly_check(&parse_lmu(UNKNOT).unwrap(), Some(&parse_homfly("1").unwrap())).unwrap();
    assert!(r.passed(), "{r:?}");
    let rh = homfly_check(&parse_lmu(RH).unwrap(), Some(&parse_homfly("-a^-4 + a^-2*q^-2 + a^-2*q^2").unwrap())).unwrap();
    assert_eq!(rh.f, parse_lmu("-2*U + 3*U^2 - U^3").unwrap());
    assert_eq!(rh.quotient, Some(parse_lmu("2*U - U^2").unwrap()));
    assert!(rh.passed());
    let wrong = homfly_check(&parse_lmu(RH).unwrap(), Some(&parse_homfly("1").unwrap())).unwrap();
    assert!(!wrong.passed());
}

#[test]
fn homfly_mirror() {
    let lh = homfly_check(&parse_lmu(LH).unwrap(), Some(&parse_homfly("-a^4 + a^2*q^-2 + a^2*q^2").unwrap())).unwrap();
    assert_eq!(lh.quotient, Some(parse_lmu("2*U^-1 - U^-2").unwrap()));
    assert!(lh.passed());
}
