//! Golden files for the standard gate programs.

use gatecalc::grammar::{Nonterminal, Slg};
use sha2::{Digest, Sha256};

const DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/standard_gates");

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[test]
fn checksums_match_the_manifest() {
    let sums = std::fs::read_to_string(format!("{DIR}/SHA256SUMS")).unwrap();
    let mut seen = 0;
    for line in sums.lines().filter(|l| !l.trim().is_empty()) {
        let (want, file) = line.split_once("  ").expect("`<digest>  <file>` lines");
        let data = std::fs::read(format!("{DIR}/{file}")).unwrap();
        assert_eq!(hex(&Sha256::digest(&data)), want, "{file}");
        seen += 1;
    }
    assert_eq!(seen, Nonterminal::STARTS.len());
}

#[test]
fn embedded_reference_strings_are_the_files() {
    for s in Nonterminal::STARTS {
        let file = std::fs::read_to_string(format!("{DIR}/{s}.txt")).unwrap();
        assert_eq!(s.reference_string().unwrap(), file.trim_end());
    }
}

#[test]
fn reference_lengths() {
    let slg = Slg::standard().unwrap();
    let lens: Vec<usize> = Nonterminal::STARTS.iter().map(|&s| slg.expand(s).unwrap().len()).collect();
    let names: Vec<&str> = Nonterminal::STARTS.iter().map(|s| s.name()).collect();
    assert_eq!(names, ["N3", "C3", "T3", "D3", "S3"]);
    assert_eq!(lens, [50, 202, 1563, 302, 706]);
}

#[test]
fn reference_strings_use_letters_one_to_six() {
    for s in Nonterminal::STARTS {
        let text = s.reference_string().unwrap();
        assert!(text.bytes().all(|b| (b'1'..=b'6').contains(&b)), "{s}");
    }
}
