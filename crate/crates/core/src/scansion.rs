//! Scansion notation: `/` separates poetic syllables and `#` sits right
//! before the vowel of each stressed syllable.
//!
//! ```
//! use metrica::{parse_scansion, AccentClass};
//!
//! let verse = parse_scansion("Re/no/v#ou/se a in/ves/t#i/da/ fe/bril/m#en/te.").unwrap();
//! assert_eq!(verse.meter, 10);
//! assert_eq!(verse.tonic_positions, vec![3, 6, 10]);
//! assert_eq!(verse.rhyme_suffix, "ente");
//! assert_eq!(verse.accent_class, AccentClass::Grave);
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SYLLABLE_SEPARATOR: char = '/';
pub const STRESS_MARKER: char = '#';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScansionError {
    #[error("empty scansion line")]
    EmptyLine,
    #[error("no stress marker '#' in scansion")]
    NoStressMarker,
    #[error("malformed stress marker in syllable {position} ({segment:?}): '#' must be followed by a vowel")]
    MalformedMarker { position: usize, segment: String },
    #[error("empty syllable at position {position}")]
    EmptySyllable { position: usize },
}

/// One poetic syllable as written in the scansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syllable {
    pub raw: String,
    pub normalized: String,
    pub stressed: bool,
}

/// Rhyme accentuation, from the number of syllables after the last stress.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AccentClass {
    /// Oxytone ending: nothing after the last stress.
    Aguda,
    /// Paroxytone ending: one syllable after.
    Grave,
    /// Proparoxytone ending: two or more after.
    Esdruxula,
}

impl AccentClass {
    pub fn from_post_tonic(count: usize) -> Self {
        match count {
            0 => AccentClass::Aguda,
            1 => AccentClass::Grave,
            _ => AccentClass::Esdruxula,
        }
    }
}

impl fmt::Display for AccentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            AccentClass::Aguda => "aguda",
            AccentClass::Grave => "grave",
            AccentClass::Esdruxula => "esdruxula",
        };
        f.write_str(name)
    }
}

/// One scansion variant of a sentence, with every feature the criteria use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScannedVerse {
    pub source_id: String,
    pub display_text: String,
    /// The scansion line exactly as given.
    pub scansion: String,
    pub syllables: Vec<Syllable>,
    /// 1-based, strictly increasing.
    pub tonic_positions: Vec<usize>,
    pub meter: usize,
    pub final_syllable: String,
    pub rhyme_suffix: String,
    pub tonic_vowel: char,
    pub accent_class: AccentClass,
    pub final_word: String,
    /// Position of this variant in corpus order; the deterministic tie-break.
    pub corpus_index: usize,
}

impl ScannedVerse {
    /// Attach the originating sentence. Recomputes `final_word` from `text`.
    pub fn with_source(mut self, id: impl Into<String>, text: impl Into<String>) -> Self {
        self.source_id = id.into();
        self.display_text = text.into();
        self.final_word = final_word(&self.display_text);
        self
    }

    pub fn with_corpus_index(mut self, index: usize) -> Self {
        self.corpus_index = index;
        self
    }

    /// `(position, normalized text)` of each stressed syllable.
    pub fn stressed_syllables(&self) -> impl Iterator<Item = (usize, &str)> {
        self.syllables.iter().enumerate().filter(|(_, s)| s.stressed).map(|(i, s)| (i + 1, s.normalized.as_str()))
    }

    pub fn post_tonic_count(&self) -> usize {
        self.syllables.len() - self.meter
    }
}

/// Lowercase and keep only alphanumeric characters. Precomposed diacritics
/// survive; `#`, whitespace, hyphens and punctuation do not.
pub fn normalize_syllable(raw: &str) -> String {
    raw.chars().filter(|c| c.is_alphanumeric()).flat_map(char::to_lowercase).collect()
}

/// Map an accented Latin vowel to its base letter; other characters pass through.
pub fn strip_diacritic(c: char) -> char {
    match c {
        'á' | 'à' | 'â' | 'ã' | 'ä' => 'a',
        'é' | 'è' | 'ê' | 'ë' => 'e',
        'í' | 'ì' | 'î' | 'ï' => 'i',
        'ó' | 'ò' | 'ô' | 'õ' | 'ö' => 'o',
        'ú' | 'ù' | 'û' | 'ü' => 'u',
        'Á' | 'À' | 'Â' | 'Ã' | 'Ä' => 'A',
        'É' | 'È' | 'Ê' | 'Ë' => 'E',
        'Í' | 'Ì' | 'Î' | 'Ï' => 'I',
        'Ó' | 'Ò' | 'Ô' | 'Õ' | 'Ö' => 'O',
        'Ú' | 'Ù' | 'Û' | 'Ü' => 'U',
        other => other,
    }
}

pub fn is_vowel(c: char) -> bool {
    matches!(strip_diacritic(c).to_ascii_lowercase(), 'a' | 'e' | 'i' | 'o' | 'u')
}

/// Last whitespace-delimited token of `text`, trimmed of surrounding
/// punctuation and lowercased.
pub fn final_word(text: &str) -> String {
    text.split_whitespace()
        .rev()
        .map(|tok| tok.trim_matches(|c: char| !c.is_alphanumeric()))
        .find(|tok| !tok.is_empty())
        .map(|tok| tok.to_lowercase())
        .unwrap_or_default()
}

/// Sentence text recovered from a scansion line by dropping the notation.
pub fn text_from_scansion(line: &str) -> String {
    let stripped: String = line.chars().filter(|&c| c != SYLLABLE_SEPARATOR && c != STRESS_MARKER).collect();
    stripped.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn parse_scansion(line: &str) -> Result<ScannedVerse, ScansionError> {
    let line = line.trim();
    if line.is_empty() {
        return Err(ScansionError::EmptyLine);
    }

    let mut syllables = Vec::new();
    for (i, segment) in line.split(SYLLABLE_SEPARATOR).enumerate() {
        let position = i + 1;
        let normalized = normalize_syllable(segment);
        if normalized.is_empty() {
            return Err(ScansionError::EmptySyllable { position });
        }
        let markers = segment.matches(STRESS_MARKER).count();
        if markers > 1 {
            return Err(ScansionError::MalformedMarker { position, segment: segment.to_string() });
        }
        if markers == 1 {
            let after = segment.split_once(STRESS_MARKER).map(|(_, rest)| rest).unwrap_or("");
            if !after.chars().next().is_some_and(is_vowel) {
                return Err(ScansionError::MalformedMarker { position, segment: segment.to_string() });
            }
        }
        syllables.push(Syllable { raw: segment.trim().to_string(), normalized, stressed: markers == 1 });
    }

    let tonic_positions: Vec<usize> =
        syllables.iter().enumerate().filter(|(_, s)| s.stressed).map(|(i, _)| i + 1).collect();
    let meter = *tonic_positions.last().ok_or(ScansionError::NoStressMarker)?;

    let suffix = suffix_from(&syllables, meter);
    let tonic_vowel = suffix.chars().next().map(strip_diacritic).expect("marker is followed by a vowel");
    let final_syllable = syllables.last().map(|s| s.normalized.clone()).unwrap_or_default();
    let accent_class = AccentClass::from_post_tonic(syllables.len() - meter);
    let display_text = text_from_scansion(line);

    Ok(ScannedVerse {
        source_id: String::new(),
        final_word: final_word(&display_text),
        display_text,
        scansion: line.to_string(),
        syllables,
        tonic_positions,
        meter,
        final_syllable,
        rhyme_suffix: suffix,
        tonic_vowel,
        accent_class,
        corpus_index: 0,
    })
}

/// Normalized characters from the stressed vowel of the last tonic syllable
/// through the end of the verse.
pub fn rhyme_suffix(verse: &ScannedVerse) -> String {
    suffix_from(&verse.syllables, verse.meter)
}

fn suffix_from(syllables: &[Syllable], meter: usize) -> String {
    let tonic = &syllables[meter - 1];
    let head = tonic.raw.split_once(STRESS_MARKER).map(|(_, rest)| rest).unwrap_or(&tonic.raw);
    let mut tail = String::from(head);
    for s in &syllables[meter..] {
        tail.push_str(&s.raw);
    }
    normalize_syllable(&tail)
}
