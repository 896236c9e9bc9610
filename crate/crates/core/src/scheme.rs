//! Rhyme scheme, per-verse meter plan, and criterion weights.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criteria::Criterion;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemeError {
    #[error("rhyme scheme is empty")]
    EmptyScheme,
    #[error("invalid character {ch:?} at position {position} in rhyme scheme")]
    InvalidCharacter { ch: char, position: usize },
    #[error("invalid meter {0:?}: expected a positive integer or \"random\"")]
    InvalidMeter(String),
    #[error("meter plan has {got} entries but the scheme has {expected} verses")]
    MeterCountMismatch { expected: usize, got: usize },
    #[error("no meter with available verses to draw from")]
    NoAvailableMeter,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
}

/// One verse slot of the scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    /// 0-based position in the poem.
    pub verse_index: usize,
    pub stanza_index: usize,
    pub letter: char,
    pub is_stanza_first: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhymeScheme {
    pub stanzas: Vec<Vec<char>>,
    pub flat: Vec<Slot>,
}

impl RhymeScheme {
    pub fn verse_count(&self) -> usize {
        self.flat.len()
    }

    /// Distinct letters in order of first appearance.
    pub fn letters(&self) -> Vec<char> {
        let mut seen = Vec::new();
        for slot in &self.flat {
            if !seen.contains(&slot.letter) {
                seen.push(slot.letter);
            }
        }
        seen
    }

    pub fn stanza_sizes(&self) -> Vec<usize> {
        self.stanzas.iter().map(Vec::len).collect()
    }
}

impl fmt::Display for RhymeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self.stanzas.iter().map(|s| s.iter().collect()).collect();
        f.write_str(&tokens.join(" "))
    }
}

/// Whitespace separates stanzas; each letter is one verse. Letters are
/// case-insensitive and stored uppercase.
pub fn parse_scheme(s: &str) -> Result<RhymeScheme, SchemeError> {
    if s.trim().is_empty() {
        return Err(SchemeError::EmptyScheme);
    }
    if let Some((position, ch)) = s.chars().enumerate().find(|(_, c)| !c.is_whitespace() && !c.is_ascii_alphabetic()) {
        return Err(SchemeError::InvalidCharacter { ch, position });
    }
    let stanzas: Vec<Vec<char>> =
        s.split_whitespace().map(|tok| tok.chars().map(|c| c.to_ascii_uppercase()).collect()).collect();
    let mut flat = Vec::new();
    for (stanza_index, stanza) in stanzas.iter().enumerate() {
        for (i, &letter) in stanza.iter().enumerate() {
            flat.push(Slot { verse_index: flat.len(), stanza_index, letter, is_stanza_first: i == 0 });
        }
    }
    Ok(RhymeScheme { stanzas, flat })
}

/// Requested meter per verse; `None` is drawn at build time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeterPlan {
    pub per_verse: Vec<Option<usize>>,
}

impl MeterPlan {
    pub fn fixed(meter: usize, verses: usize) -> Self {
        MeterPlan { per_verse: vec![Some(meter); verses] }
    }

    /// Parse tokens such as `["10", "9", "random", "10"]`. A single token is
    /// broadcast to every verse.
    pub fn parse<T: AsRef<str>>(tokens: &[T], verses: usize) -> Result<Self, SchemeError> {
        let parsed = tokens
            .iter()
            .map(|t| {
                let t = t.as_ref().trim();
                match t.to_ascii_lowercase().as_str() {
                    "random" | "?" | "*" => Ok(None),
                    _ => match t.parse::<usize>() {
                        Ok(m) if m > 0 => Ok(Some(m)),
                        _ => Err(SchemeError::InvalidMeter(t.to_string())),
                    },
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        match parsed.len() {
            1 => Ok(MeterPlan { per_verse: vec![parsed[0]; verses] }),
            n if n == verses => Ok(MeterPlan { per_verse: parsed }),
            got => Err(SchemeError::MeterCountMismatch { expected: verses, got }),
        }
    }
}

/// Fill unspecified meters with uniform draws over `available`, in verse order.
pub fn resolve_meters<R: Rng + ?Sized>(
    plan: &MeterPlan,
    available: &BTreeSet<usize>,
    rng: &mut R,
) -> Result<Vec<usize>, SchemeError> {
    let choices: Vec<usize> = available.iter().copied().collect();
    plan.per_verse
        .iter()
        .map(|m| match m {
            Some(m) => Ok(*m),
            None if choices.is_empty() => Err(SchemeError::NoAvailableMeter),
            None => Ok(choices[rng.gen_range(0..choices.len())]),
        })
        .collect()
}

/// Non-negative weights for ER, ST, AC, RI, RTC. A zero weight drops that
/// criterion from scoring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionWeights<S> {
    pub er: S,
    pub st: S,
    pub ac: S,
    pub ri: S,
    pub rtc: S,
}

impl<S: Scalar> CriterionWeights<S> {
    pub fn new(er: S, st: S, ac: S, ri: S, rtc: S) -> Result<Self, SchemeError> {
        let w = CriterionWeights { er, st, ac, ri, rtc };
        let all = w.as_array();
        // Rejects NaN too.
        if all.iter().any(|x| !matches!(x.partial_cmp(&S::zero()), Some(Ordering::Greater | Ordering::Equal))) {
            return Err(SchemeError::InvalidWeights("weights must be non-negative".into()));
        }
        if all.iter().all(|x| x.is_zero()) {
            return Err(SchemeError::InvalidWeights("at least one weight must be positive".into()));
        }
        Ok(w)
    }

    pub fn uniform() -> Self {
        let one = S::one();
        CriterionWeights { er: one, st: one, ac: one, ri: one, rtc: one }
    }

    pub fn get(&self, c: Criterion) -> S {
        match c {
            Criterion::Er => self.er,
            Criterion::St => self.st,
            Criterion::Ac => self.ac,
            Criterion::Ri => self.ri,
            Criterion::Rtc => self.rtc,
        }
    }

    pub fn as_array(&self) -> [S; 5] {
        [self.er, self.st, self.ac, self.ri, self.rtc]
    }

    pub fn from_array(w: [S; 5]) -> Result<Self, SchemeError> {
        Self::new(w[0], w[1], w[2], w[3], w[4])
    }

    pub fn scaled(&self, k: S) -> Self {
        let [er, st, ac, ri, rtc] = self.as_array().map(|x| x * k);
        CriterionWeights { er, st, ac, ri, rtc }
    }
}

impl CriterionWeights<f64> {
    /// Parse five comma- or space-separated values in ER,ST,AC,RI,RTC order.
    pub fn parse(s: &str) -> Result<Self, SchemeError> {
        let values = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().map_err(|_| SchemeError::InvalidWeights(format!("not a number: {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let arr: [f64; 5] = values
            .try_into()
            .map_err(|v: Vec<f64>| SchemeError::InvalidWeights(format!("expected 5 values, got {}", v.len())))?;
        Self::from_array(arr)
    }
}
