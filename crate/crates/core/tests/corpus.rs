//! Every checked-in worked example reproduces, and certificates survive a
//! JSON round trip unchanged.

use std::path::Path;

use hullcert::corpus::load_dir;
use hullcert::io::{certificate_from_json, certificate_to_json, to_pretty};
use hullcert::{render_svg, Certificate, Q};

fn cases() -> Vec<hullcert::CorpusCase> {
    load_dir(&Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")).unwrap()
}

#[test]
fn all_cases_reproduce() {
    let cases = cases();
    assert!(cases.len() >= 16);
    for case in &cases {
        let out = case.run();
        assert!(out.passed(), "{}: {:?}", out.name, out.problems);
    }
}

#[test]
fn certificates_round_trip_through_json() {
    for case in cases().iter().filter(|c| !c.decimal) {
        let cert = case.instance.construct::<Q>(&case.point, &case.options).unwrap();
        let text = to_pretty(&certificate_to_json(&cert));
        let back: Certificate<Q> = certificate_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.verify().passed(), cert.verify().passed(), "{}", case.name);
        assert_eq!(to_pretty(&certificate_to_json(&back)), text, "{}", case.name);
        assert_eq!(render_svg(&back).unwrap(), render_svg(&cert).unwrap(), "{}", case.name);
    }
}
