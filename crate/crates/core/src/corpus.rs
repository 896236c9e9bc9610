//! Corpus ingestion and the rhyme-group index.
//!
//! A corpus file holds one JSON object per line:
//!
//! ```text
//! {"id": "s0412", "text": "Quase tudo está seco de sede...", "scansions": ["Qu#a/se/ t#u/do/ es/t#á/ s#e/co/ de/ s#e/de..."]}
//! ```
//!
//! `metadata` is optional and ignored. Blank lines are skipped.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scansion::{parse_scansion, text_from_scansion, ScannedVerse, ScansionError};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus file not found: {}", path.display())]
    FileNotFound { path: PathBuf },
    #[error("failed to read corpus: {0}")]
    Io(#[from] io::Error),
    #[error("corpus line {line}{}: {message}", record.as_deref().map(|r| format!(" (record {r})")).unwrap_or_default())]
    Parse { line: usize, record: Option<String>, message: String },
    #[error("corpus line {line}: duplicate id {id:?}")]
    DuplicateId { line: usize, id: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum RecordId {
    Text(String),
    Number(i64),
}

impl From<RecordId> for String {
    fn from(id: RecordId) -> Self {
        match id {
            RecordId::Text(s) => s,
            RecordId::Number(n) => n.to_string(),
        }
    }
}

/// Wire form of one corpus line.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub text: String,
    pub scansions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

#[derive(Deserialize)]
struct RawRecord {
    id: RecordId,
    text: String,
    scansions: Vec<String>,
    #[serde(default)]
    metadata: Option<serde_json::Value>,
}

/// A sentence with its validated scansion variants.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: String,
    pub text: String,
    pub scansions: Vec<String>,
    pub metadata: Option<serde_json::Value>,
    verses: Vec<ScannedVerse>,
}

impl CorpusEntry {
    pub fn new(
        id: impl Into<String>,
        text: impl Into<String>,
        scansions: Vec<String>,
    ) -> Result<Self, (Option<usize>, String)> {
        let id = id.into();
        let text = text.into();
        if scansions.is_empty() {
            return Err((None, "record has no scansions".to_string()));
        }
        let verses = scansions
            .iter()
            .enumerate()
            .map(|(i, s)| {
                parse_scansion(s)
                    .map(|v| v.with_source(id.clone(), text.clone()))
                    .map_err(|e: ScansionError| (Some(i), format!("scansion {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CorpusEntry { id, text, scansions, metadata: None, verses })
    }

    /// Parsed variants, in the order the scansions were listed.
    pub fn verses(&self) -> &[ScannedVerse] {
        &self.verses
    }

    pub fn to_record(&self) -> CorpusRecord {
        CorpusRecord {
            id: self.id.clone(),
            text: self.text.clone(),
            scansions: self.scansions.clone(),
            metadata: self.metadata.clone(),
        }
    }
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusEntry>, CorpusError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => CorpusError::FileNotFound { path: path.to_path_buf() },
        _ => CorpusError::Io(e),
    })?;
    read_corpus(io::BufReader::new(file))
}

pub fn read_corpus(reader: impl BufRead) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord = serde_json::from_str(&line).map_err(|e| CorpusError::Parse {
            line: line_no,
            record: None,
            message: e.to_string(),
        })?;
        let id: String = raw.id.into();
        if !seen.insert(id.clone()) {
            return Err(CorpusError::DuplicateId { line: line_no, id });
        }
        let mut entry = CorpusEntry::new(id.clone(), raw.text, raw.scansions)
            .map_err(|(_, message)| CorpusError::Parse { line: line_no, record: Some(id), message })?;
        entry.metadata = raw.metadata;
        entries.push(entry);
    }
    Ok(entries)
}

pub fn write_corpus(entries: &[CorpusEntry], mut out: impl Write) -> io::Result<()> {
    for entry in entries {
        serde_json::to_writer(&mut out, &entry.to_record())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Build entries from plain text holding one scansion per line. Ids are the
/// 1-based line numbers; the sentence text is the scansion without notation.
pub fn convert_plain(reader: impl BufRead) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut entries = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let scansion = line.trim();
        if scansion.is_empty() {
            continue;
        }
        let id = line_no.to_string();
        let entry = CorpusEntry::new(id.clone(), text_from_scansion(scansion), vec![scansion.to_string()])
            .map_err(|(_, message)| CorpusError::Parse { line: line_no, record: Some(id), message })?;
        entries.push(entry);
    }
    Ok(entries)
}

/// Verses sharing a final syllable, split by meter.
#[derive(Debug, Clone, Default)]
pub struct RhymeGroup {
    pub key: String,
    pub by_meter: BTreeMap<usize, Vec<ScannedVerse>>,
    /// Distinct `final_word` count per meter bucket.
    pub distinct_supply: BTreeMap<usize, usize>,
}

impl RhymeGroup {
    pub fn verses(&self, meter: usize) -> &[ScannedVerse] {
        self.by_meter.get(&meter).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn supply(&self, meter: usize) -> usize {
        self.distinct_supply.get(&meter).copied().unwrap_or(0)
    }

    pub fn distinct_words(&self, meter: usize) -> BTreeSet<&str> {
        self.verses(meter).iter().map(|v| v.final_word.as_str()).collect()
    }
}

/// Final syllable → group. Ordered so iteration is deterministic.
#[derive(Debug, Clone, Default)]
pub struct RhymeIndex {
    pub groups: BTreeMap<String, RhymeGroup>,
}

impl RhymeIndex {
    pub fn get(&self, key: &str) -> Option<&RhymeGroup> {
        self.groups.get(key)
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    /// Meters with at least one verse anywhere in the index.
    pub fn available_meters(&self) -> BTreeSet<usize> {
        self.groups.values().flat_map(|g| g.by_meter.keys().copied()).collect()
    }

    pub fn variant_count(&self) -> usize {
        self.groups.values().flat_map(|g| g.by_meter.values()).map(Vec::len).sum()
    }
}

pub fn build_index(entries: &[CorpusEntry]) -> RhymeIndex {
    let mut index = RhymeIndex::default();
    let mut ordinal = 0;
    for entry in entries {
        for verse in entry.verses() {
            let verse = verse.clone().with_corpus_index(ordinal);
            ordinal += 1;
            let group = index
                .groups
                .entry(verse.final_syllable.clone())
                .or_insert_with(|| RhymeGroup { key: verse.final_syllable.clone(), ..Default::default() });
            group.by_meter.entry(verse.meter).or_default().push(verse);
        }
    }
    for group in index.groups.values_mut() {
        group.distinct_supply = group
            .by_meter
            .iter()
            .map(|(&m, verses)| (m, verses.iter().map(|v| &v.final_word).collect::<HashSet<_>>().len()))
            .collect();
    }
    index
}
