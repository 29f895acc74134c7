//! Checks Unicode normalization against a frozen fixture produced by an
//! independent NFKC implementation (CPython's `unicodedata`, UCD 13.0).
//!
//! The fixture covers 1,000 random strings over the Bengali block (assigned
//! codepoints only, so the cases are stable across UCD revisions), joiners,
//! danda, and a few compatibility characters, plus hand-picked regression
//! cases for the Bengali composition exclusions (U+09DC/09DD/09DF).

use bengalibpe::normalizer::normalize_unicode;
use serde::Deserialize;

#[derive(Deserialize)]
struct Case {
    input: String,
    nfkc: String,
}

#[test]
fn normalize_unicode_matches_independent_nfkc_oracle() {
    let fixture = include_str!("data/nfkc_fixture.jsonl");
    let mut checked = 0usize;
    for (lineno, line) in fixture.lines().enumerate() {
        let case: Case = serde_json::from_str(line)
            .unwrap_or_else(|e| panic!("fixture line {}: {e}", lineno + 1));
        assert_eq!(
            normalize_unicode(&case.input),
            case.nfkc,
            "NFKC mismatch on fixture line {} (input {:?})",
            lineno + 1,
            case.input
        );
        checked += 1;
    }
    assert!(checked >= 1000, "fixture unexpectedly small: {checked} cases");
}
