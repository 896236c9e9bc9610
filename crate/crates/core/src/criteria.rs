//! The five rhythm criteria and their weighted combination.
//!
//! | label | criterion | reference |
//! |-------|-----------|-----------|
//! | ER  | Jaccard similarity of stress positions | stanza-first and previous verse, averaged |
//! | ST  | shared stressed syllables, anywhere and in place | stanza-first and previous verse, averaged |
//! | AC  | same rhyme accentuation | latest verse with the same rhyme letter |
//! | RI  | internal rhyme, `1 - unique/total` syllables | none |
//! | RTC | consonant (1) or assonant (1/2) rhyme | latest verse with the same rhyme letter |
//!
//! A criterion that cannot be computed, or whose weight is zero, is skipped
//! and left out of the weighted mean.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::scansion::ScannedVerse;
use crate::scheme::CriterionWeights;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Criterion {
    Er,
    St,
    Ac,
    Ri,
    Rtc,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [Criterion::Er, Criterion::St, Criterion::Ac, Criterion::Ri, Criterion::Rtc];

    pub fn label(self) -> &'static str {
        match self {
            Criterion::Er => "ER",
            Criterion::St => "ST",
            Criterion::Ac => "AC",
            Criterion::Ri => "RI",
            Criterion::Rtc => "RTC",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error("every criterion was skipped")]
    AllSkipped,
}

/// Stress positions and the stressed syllable texts of one verse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StressProfile {
    pub positions: BTreeSet<usize>,
    pub stressed_syllables: Vec<(usize, String)>,
}

impl StressProfile {
    pub fn of(verse: &ScannedVerse) -> Self {
        let stressed_syllables: Vec<(usize, String)> =
            verse.stressed_syllables().map(|(p, s)| (p, s.to_string())).collect();
        let positions = stressed_syllables.iter().map(|(p, _)| *p).collect();
        StressProfile { positions, stressed_syllables }
    }

    pub fn len(&self) -> usize {
        self.stressed_syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stressed_syllables.is_empty()
    }
}

/// Already placed verses a candidate is compared against.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceContext<'a> {
    pub stanza_first: &'a ScannedVerse,
    pub previous: &'a ScannedVerse,
    pub same_letter_latest: Option<&'a ScannedVerse>,
}

impl<'a> ReferenceContext<'a> {
    fn rhythm_references(&self) -> [StressProfile; 2] {
        [StressProfile::of(self.stanza_first), StressProfile::of(self.previous)]
    }
}

/// Per-criterion values (`None` = skipped) and the weighted score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore<S> {
    pub er: Option<S>,
    pub st: Option<S>,
    pub ac: Option<S>,
    pub ri: Option<S>,
    pub rtc: Option<S>,
    /// `None` only when every criterion was skipped.
    pub score: Option<S>,
}

impl<S: Scalar> CandidateScore<S> {
    pub fn from_values(values: [Option<S>; 5], weights: &CriterionWeights<S>) -> Self {
        let score = combine(&values, weights).ok();
        let [er, st, ac, ri, rtc] = values;
        CandidateScore { er, st, ac, ri, rtc, score }
    }

    pub fn get(&self, c: Criterion) -> Option<S> {
        self.values()[c.slot()]
    }

    pub fn values(&self) -> [Option<S>; 5] {
        [self.er, self.st, self.ac, self.ri, self.rtc]
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> CandidateScore<T> {
        CandidateScore {
            er: self.er.map(&f),
            st: self.st.map(&f),
            ac: self.ac.map(&f),
            ri: self.ri.map(&f),
            rtc: self.rtc.map(&f),
            score: self.score.map(&f),
        }
    }
}

/// `|u ∩ v| / |u ∪ v|`; two empty sets count as identical.
pub fn jaccard<S: Scalar>(u: &BTreeSet<usize>, v: &BTreeSet<usize>) -> S {
    let union = u.union(v).count();
    if union == 0 {
        return S::one();
    }
    S::ratio(u.intersection(v).count(), union)
}

pub fn score_er<S: Scalar>(candidate: &StressProfile, ctx: &ReferenceContext<'_>) -> S {
    let [a, b] = ctx.rhythm_references();
    (jaccard::<S>(&candidate.positions, &a.positions) + jaccard::<S>(&candidate.positions, &b.positions))
        / S::from_count(2)
}

/// Stressed-syllable agreement against a single reference.
pub fn stressed_syllable_agreement<S: Scalar>(candidate: &StressProfile, reference: &StressProfile) -> S {
    let denom = candidate.len().min(reference.len());
    if denom == 0 {
        return S::zero();
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for (_, text) in &reference.stressed_syllables {
        *counts.entry(text.as_str()).or_default() += 1;
    }
    let mut anywhere = 0;
    for (_, text) in &candidate.stressed_syllables {
        if let Some(n) = counts.get_mut(text.as_str()) {
            if *n > 0 {
                *n -= 1;
                anywhere += 1;
            }
        }
    }
    let at_position: HashMap<usize, &str> =
        reference.stressed_syllables.iter().map(|(p, t)| (*p, t.as_str())).collect();
    let in_place = candidate.stressed_syllables.iter().filter(|(p, t)| at_position.get(p) == Some(&t.as_str())).count();
    (S::ratio(anywhere, denom) + S::ratio(in_place, denom)) / S::from_count(2)
}

pub fn score_st<S: Scalar>(candidate: &StressProfile, ctx: &ReferenceContext<'_>) -> S {
    let [a, b] = ctx.rhythm_references();
    (stressed_syllable_agreement::<S>(candidate, &a) + stressed_syllable_agreement::<S>(candidate, &b))
        / S::from_count(2)
}

pub fn score_ac<S: Scalar>(candidate: &ScannedVerse, reference: &ScannedVerse) -> S {
    if candidate.accent_class == reference.accent_class {
        S::one()
    } else {
        S::zero()
    }
}

pub fn score_rtc<S: Scalar>(candidate: &ScannedVerse, reference: &ScannedVerse) -> S {
    if candidate.rhyme_suffix == reference.rhyme_suffix {
        S::one()
    } else if candidate.tonic_vowel == reference.tonic_vowel {
        S::half()
    } else {
        S::zero()
    }
}

pub fn score_ri<S: Scalar>(candidate: &ScannedVerse) -> S {
    let total = candidate.syllables.len();
    if total == 0 {
        return S::zero();
    }
    let unique: HashSet<&str> = candidate.syllables.iter().map(|s| s.normalized.as_str()).collect();
    S::one() - S::ratio(unique.len(), total)
}

/// Weighted mean over the non-skipped criteria; zero when their weights sum to zero.
pub fn combine<S: Scalar>(values: &[Option<S>; 5], weights: &CriterionWeights<S>) -> Result<S, ScoreError> {
    let mut num = S::zero();
    let mut den = S::zero();
    let mut any = false;
    for (c, value) in Criterion::ALL.iter().zip(values) {
        if let Some(v) = value {
            let w = weights.get(*c);
            num = num + w * *v;
            den = den + w;
            any = true;
        }
    }
    if !any {
        return Err(ScoreError::AllSkipped);
    }
    if den.is_zero() {
        return Ok(S::zero());
    }
    Ok(num / den)
}

/// Score a candidate for a non-stanza-initial slot. Criteria with zero weight
/// are skipped, as are AC and RTC when the rhyme letter has no earlier verse.
pub fn evaluate_candidate<S: Scalar>(
    candidate: &ScannedVerse,
    ctx: &ReferenceContext<'_>,
    weights: &CriterionWeights<S>,
) -> CandidateScore<S> {
    let active = |c: Criterion| !weights.get(c).is_zero();
    let profile = StressProfile::of(candidate);
    let rhyme_ref = ctx.same_letter_latest;
    let values = [
        active(Criterion::Er).then(|| score_er(&profile, ctx)),
        active(Criterion::St).then(|| score_st(&profile, ctx)),
        rhyme_ref.filter(|_| active(Criterion::Ac)).map(|r| score_ac(candidate, r)),
        active(Criterion::Ri).then(|| score_ri(candidate)),
        rhyme_ref.filter(|_| active(Criterion::Rtc)).map(|r| score_rtc(candidate, r)),
    ];
    CandidateScore::from_values(values, weights)
}
