#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use metrica::{load_corpus, parse_scansion, CorpusEntry, Rational64 as Q, ScannedVerse};
use num_traits::Signed;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn load(name: &str) -> Vec<CorpusEntry> {
    load_corpus(fixture(name)).expect("fixture loads")
}

/// Parsed verses of a fixture, in file order.
pub fn verses(name: &str) -> Vec<ScannedVerse> {
    load(name).iter().map(|e| e.verses()[0].clone()).collect()
}

pub fn verse(line: &str) -> ScannedVerse {
    parse_scansion(line).expect("fixture line parses")
}

/// Pass/fail line for one numeric check.
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: f64, actual: f64, tol: f64) -> Self {
        let passed = (actual - expected).abs() <= tol;
        Check { name: name.into(), expected, actual, tol, passed }
    }

    /// Compare an exact value against a printed 3-decimal figure, in exact
    /// arithmetic: `|actual - millis/1000| <= 5e-4`.
    pub fn exact(name: impl Into<String>, millis: i64, actual: Q) -> Self {
        let expected = Q::new(millis, 1000);
        let passed = (actual - expected).abs() <= Q::new(5, 10_000);
        let to_f = |q: Q| *q.numer() as f64 / *q.denom() as f64;
        Check { name: name.into(), expected: to_f(expected), actual: to_f(actual), tol: 5e-4, passed }
    }

    pub fn passed(&self) -> bool {
        self.passed
    }
}

/// Print one line per check plus a verdict line for the criterion; panic if any failed.
pub fn report(criterion: &str, checks: &[Check], extra_failures: &[String]) {
    let mut failed = Vec::new();
    for c in checks {
        let verdict = if c.passed() { "ok  " } else { "FAIL" };
        println!("  [{verdict}] {}: expected {} got {:.6} (tol {:e})", c.name, c.expected, c.actual, c.tol);
        if !c.passed() {
            failed.push(c.name.clone());
        }
    }
    for f in extra_failures {
        println!("  [FAIL] {f}");
        failed.push(f.clone());
    }
    let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
    println!("{criterion}: {verdict}");
    assert!(failed.is_empty(), "{criterion} failed: {failed:?}");
}

/// One generated syllable together with the facts an oracle needs.
#[derive(Debug, Clone)]
pub struct GenSyllable {
    pub raw: String,
    /// Lowercase letters of the syllable.
    pub letters: String,
    /// Lowercase letters from the vowel on (meaningful when stressed).
    pub tail_letters: String,
    pub base_vowel: char,
    pub stressed: bool,
}

#[derive(Debug, Clone)]
pub struct GenVerse {
    pub syllables: Vec<GenSyllable>,
}

impl GenVerse {
    pub fn line(&self) -> String {
        self.syllables.iter().map(|s| s.raw.as_str()).collect::<Vec<_>>().join("/")
    }
}

const ONSETS: &[&str] = &["", "b", "d", "t", "s", "m", "qu", "r", "l"];
const VOWELS: &[(&str, char)] =
    &[("a", 'a'), ("á", 'a'), ("e", 'e'), ("ê", 'e'), ("i", 'i'), ("o", 'o'), ("õ", 'o'), ("u", 'u')];
const CODAS: &[&str] = &["", "", "s", "n", "r"];
const ELISIONS: &[&str] = &["", "", "", " e", " a"];
const PUNCT: &[&str] = &["", "", "", ",", "."];

pub fn gen_syllable<R: Rng>(rng: &mut R, stressed: bool, onset: Option<&str>) -> GenSyllable {
    let onset = onset.unwrap_or(ONSETS[rng.gen_range(0..ONSETS.len())]);
    let (vowel, base) = VOWELS[rng.gen_range(0..VOWELS.len())];
    let coda = CODAS[rng.gen_range(0..CODAS.len())];
    let elision = ELISIONS[rng.gen_range(0..ELISIONS.len())];
    let punct = PUNCT[rng.gen_range(0..PUNCT.len())];
    let capital = rng.gen_bool(0.1);
    let marker = if stressed { "#" } else { "" };
    let mut onset_s = onset.to_string();
    let mut vowel_s = vowel.to_string();
    if capital {
        if onset_s.is_empty() {
            vowel_s = vowel_s.to_uppercase();
        } else {
            onset_s = onset_s.to_uppercase();
        }
    }
    let raw = format!("{onset_s}{marker}{vowel_s}{coda}{elision}{punct}");
    let tail_letters = format!("{vowel}{coda}{}", elision.trim());
    GenSyllable { letters: format!("{onset}{tail_letters}"), tail_letters, raw, base_vowel: base, stressed }
}

/// A verse of 1..=max_len syllables with at least one stress.
pub fn gen_verse<R: Rng>(rng: &mut R, max_len: usize) -> GenVerse {
    let n = rng.gen_range(1..=max_len);
    let forced = rng.gen_range(0..n);
    let syllables = (0..n)
        .map(|i| {
            let stressed = i == forced || rng.gen_bool(0.35);
            gen_syllable(rng, stressed, None)
        })
        .collect();
    GenVerse { syllables }
}

/// Small corpus over three rhyme groups with meters 3 to 5.
pub fn random_corpus<R: Rng>(rng: &mut R) -> Vec<CorpusEntry> {
    let finals = ["ta", "de", "so"];
    let words = ["mata", "pata", "sede", "rede", "peso", "caso", "liso"];
    let n = rng.gen_range(4..=14);
    (0..n)
        .map(|i| {
            let variants = if rng.gen_bool(0.2) { 2 } else { 1 };
            let last = finals[rng.gen_range(0..finals.len())];
            let scansions = (0..variants)
                .map(|_| {
                    let meter = rng.gen_range(3..=5);
                    let post = rng.gen_range(0..=2);
                    let mut sylls: Vec<String> = (1..=meter + post)
                        .map(|p| {
                            let stressed = p == meter || (p < meter && rng.gen_bool(0.3));
                            let s = gen_syllable(rng, stressed, Some("m"));
                            s.raw
                        })
                        .collect();
                    let n = sylls.len();
                    sylls[n - 1] = if post == 0 { format!("{}#{}", &last[..1], &last[1..]) } else { last.to_string() };
                    sylls.join("/")
                })
                .collect();
            let word = words[rng.gen_range(0..words.len())];
            CorpusEntry::new(format!("r{i}"), format!("linha {i} {word}"), scansions).unwrap()
        })
        .collect()
}
