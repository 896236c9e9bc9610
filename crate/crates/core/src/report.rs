//! Poem-level evaluation and rendering.
//!
//! Each criterion's poem average is the mean of that criterion over the
//! verses where it was computed; the global score is the mean of the scored
//! verses' scores. Values stay at full precision until rendering.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::assembler::BuildState;
use crate::criteria::{CandidateScore, Criterion};
use crate::scalar::{mean, Scalar};
use crate::scheme::CriterionWeights;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CriterionValues<S> {
    pub er: Option<S>,
    pub st: Option<S>,
    pub ac: Option<S>,
    pub ri: Option<S>,
    pub rtc: Option<S>,
}

impl<S: Copy> CriterionValues<S> {
    pub fn get(&self, c: Criterion) -> Option<S> {
        match c {
            Criterion::Er => self.er,
            Criterion::St => self.st,
            Criterion::Ac => self.ac,
            Criterion::Ri => self.ri,
            Criterion::Rtc => self.rtc,
        }
    }

    fn from_fn(mut f: impl FnMut(Criterion) -> Option<S>) -> Self {
        CriterionValues {
            er: f(Criterion::Er),
            st: f(Criterion::St),
            ac: f(Criterion::Ac),
            ri: f(Criterion::Ri),
            rtc: f(Criterion::Rtc),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerseRow<S> {
    pub stanza: usize,
    pub letter: char,
    pub source_id: String,
    pub display_text: String,
    pub scansion: String,
    pub meter: usize,
    pub tonic_positions: Vec<usize>,
    pub criteria: CriterionValues<S>,
    /// `None` when the verse was not scored.
    pub score: Option<S>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoemReport<S> {
    pub scheme: String,
    pub meters: Vec<usize>,
    pub weights: CriterionWeights<S>,
    pub seed: Option<u64>,
    pub verses: Vec<VerseRow<S>>,
    pub criterion_averages: CriterionValues<S>,
    pub global_score: Option<S>,
}

impl<S: Scalar> PoemReport<S> {
    pub fn to_f64(&self) -> PoemReport<f64> {
        let conv = |v: CriterionValues<S>| CriterionValues::from_fn(|c| v.get(c).map(S::as_f64));
        let [er, st, ac, ri, rtc] = self.weights.as_array().map(S::as_f64);
        PoemReport {
            scheme: self.scheme.clone(),
            meters: self.meters.clone(),
            weights: CriterionWeights { er, st, ac, ri, rtc },
            seed: self.seed,
            verses: self
                .verses
                .iter()
                .map(|r| VerseRow {
                    stanza: r.stanza,
                    letter: r.letter,
                    source_id: r.source_id.clone(),
                    display_text: r.display_text.clone(),
                    scansion: r.scansion.clone(),
                    meter: r.meter,
                    tonic_positions: r.tonic_positions.clone(),
                    criteria: conv(r.criteria),
                    score: r.score.map(S::as_f64),
                })
                .collect(),
            criterion_averages: conv(self.criterion_averages),
            global_score: self.global_score.map(S::as_f64),
        }
    }
}

pub fn evaluate_poem<S: Scalar>(state: &BuildState<S>) -> PoemReport<S> {
    let verses: Vec<VerseRow<S>> = state
        .placed
        .iter()
        .map(|p| {
            let score: Option<CandidateScore<S>> = p.score;
            VerseRow {
                stanza: p.slot.stanza_index,
                letter: p.slot.letter,
                source_id: p.verse.source_id.clone(),
                display_text: p.verse.display_text.clone(),
                scansion: p.verse.scansion.clone(),
                meter: p.verse.meter,
                tonic_positions: p.verse.tonic_positions.clone(),
                criteria: CriterionValues::from_fn(|c| score.and_then(|s| s.get(c))),
                score: score.and_then(|s| s.score),
            }
        })
        .collect();

    let criterion_averages = CriterionValues::from_fn(|c| {
        let vals: Vec<S> = verses.iter().filter_map(|r| r.criteria.get(c)).collect();
        mean(&vals)
    });
    let scores: Vec<S> = verses.iter().filter_map(|r| r.score).collect();

    PoemReport {
        scheme: state.scheme.to_string(),
        meters: state.meters.clone(),
        weights: state.weights,
        seed: state.seed,
        verses,
        criterion_averages,
        global_score: mean(&scores),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Table,
    Structured,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(OutputFormat::Text),
            "table" => Ok(OutputFormat::Table),
            "structured" | "json" => Ok(OutputFormat::Structured),
            other => Err(format!("unknown format {other:?} (expected text, table or structured)")),
        }
    }
}

/// Three decimals with trailing zeros dropped: `0.600` → `0.6`, `1.000` → `1`.
/// The decimal is the exact binary value rounded to nearest, ties to even.
pub fn format_value(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(format_value).unwrap_or_else(|| "-".to_string())
}

pub fn render<S: Scalar>(report: &PoemReport<S>, format: OutputFormat) -> String {
    let report = report.to_f64();
    match format {
        OutputFormat::Text => render_text(&report),
        OutputFormat::Table => render_table(&report),
        OutputFormat::Structured => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

pub fn parse_structured(doc: &str) -> serde_json::Result<PoemReport<f64>> {
    serde_json::from_str(doc)
}

fn render_text(report: &PoemReport<f64>) -> String {
    let mut out = String::new();
    let mut stanza = None;
    for row in &report.verses {
        if stanza.is_some_and(|s| s != row.stanza) {
            out.push('\n');
        }
        stanza = Some(row.stanza);
        out.push_str(&row.display_text);
        out.push('\n');
    }
    out
}

fn render_table(report: &PoemReport<f64>) -> String {
    let mut rows: Vec<Vec<String>> = vec![["Escansão", "Metro", "Tônicas", "ER", "ST", "AC", "RI", "RTC", "Escore"]
        .iter()
        .map(|s| s.to_string())
        .collect()];
    for r in &report.verses {
        let tonics = r.tonic_positions.iter().map(usize::to_string).collect::<Vec<_>>().join(", ");
        let mut row = vec![r.scansion.clone(), r.meter.to_string(), tonics];
        row.extend(Criterion::ALL.iter().map(|&c| cell(r.criteria.get(c))));
        row.push(cell(r.score));
        rows.push(row);
    }
    let mut last = vec!["Avaliação".to_string(), String::new(), String::new()];
    last.extend(Criterion::ALL.iter().map(|&c| cell(report.criterion_averages.get(c))));
    last.push(cell(report.global_score));
    rows.push(last);

    let widths: Vec<usize> =
        (0..rows[0].len()).map(|i| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for (n, row) in rows.iter().enumerate() {
        let cells: Vec<String> =
            row.iter().zip(&widths).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
        if n == 0 || n == rows.len() - 2 {
            let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
            let _ = writeln!(out, "|-{}-|", rule.join("-|-"));
        }
    }
    out
}
