//! The shipped fixture files parse and agree with the builtin fixtures.

use std::fs;
use std::path::PathBuf;

use ppcc::matrix::{parse_matrix, serialize_matrix};
use ppcc::protocols::serialize::parse_guess;
use ppcc::randomized::RandomizedPPProtocol;
use ppcc::tarui::{fixture, RandomizedRectanglePolynomial};

fn read(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn matrices_round_trip() {
    for name in ["had2.sign", "hadamard2.sign", "identity2.bool", "error_third.bool", "tarui_or2.bool"] {
        let text = read(name);
        assert_eq!(serialize_matrix(&parse_matrix(&text).unwrap()), text, "{name}");
    }
}

#[test]
fn tarui_files_match_builtins() {
    for name in ["and", "or2", "boundary"] {
        let (rphi, l) = fixture(name).unwrap();
        let v: serde_json::Value = serde_json::from_str(&read(&format!("tarui_{name}.json"))).unwrap();
        assert_eq!(v, rphi.to_json(), "{name}");
        let parsed = RandomizedRectanglePolynomial::from_json(&v, None).unwrap();
        assert_eq!(parsed.to_json(), rphi.to_json());
        let file_l = parse_matrix(&read(&format!("tarui_{name}.bool"))).unwrap().as_boolean();
        assert_eq!(file_l, l, "{name}");
    }
}

#[test]
fn error_third_protocol() {
    let v: serde_json::Value = serde_json::from_str(&read("error_third.json")).unwrap();
    let rp = RandomizedPPProtocol::from_json(&v).unwrap();
    let f = parse_matrix(&read("error_third.bool")).unwrap().as_boolean();
    assert_eq!(rp.error(&f).unwrap().to_string(), "1/3");
}

#[test]
fn guess_protocols_parse() {
    let x = parse_guess(&read("x.json")).unwrap();
    let y = parse_guess(&read("y.json")).unwrap();
    let g = |p: &ppcc::protocols::GuessProtocol| p.gap_grid().iter().map(|v| v.to_string()).collect::<Vec<_>>();
    assert_eq!(g(&x), ["2", "2", "0", "0"]);
    assert_eq!(g(&y), ["-1", "1", "-1", "1"]);
}
