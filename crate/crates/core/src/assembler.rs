//! Group filtering, letter-to-group assignment and greedy verse assembly.
//!
//! Random draws come from a single ChaCha8 stream seeded with the run seed
//! and consumed in a fixed order: unspecified meters (verse order), then the
//! letter-to-group assignment (letters in first-appearance order, including
//! backtracking redraws), then stanza-initial verses (slot order). Scored
//! slots consume nothing.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{RhymeGroup, RhymeIndex};
use crate::criteria::{evaluate_candidate, CandidateScore, ReferenceContext};
use crate::scalar::Scalar;
use crate::scansion::ScannedVerse;
use crate::scheme::{resolve_meters, CriterionWeights, MeterPlan, RhymeScheme, SchemeError, Slot};

pub type Rng8 = ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("no feasible rhyme group assignment: letter {letter} cannot be served")]
    Infeasible { letter: char },
    #[error("no eligible candidate left for verse {slot} (letter {letter}, meter {meter})")]
    ExhaustedCandidates { slot: usize, letter: char, meter: usize },
    #[error("{got} verses given for a scheme with {expected} slots")]
    PlacementMismatch { expected: usize, got: usize },
}

/// Letter → meter → number of slots.
pub type Requirements = BTreeMap<char, BTreeMap<usize, usize>>;

pub fn letter_requirements(scheme: &RhymeScheme, meters: &[usize]) -> Requirements {
    let mut req = Requirements::new();
    for (slot, &meter) in scheme.flat.iter().zip(meters) {
        *req.entry(slot.letter).or_default().entry(meter).or_default() += 1;
    }
    req
}

/// Whether `group` can fill every slot in `need` with pairwise distinct
/// final words, each taken from the bucket of its slot's meter.
///
/// Per-meter supply and total distinct supply are checked first; the exact
/// answer is a bipartite matching of slots to words.
pub fn group_can_serve(group: &RhymeGroup, need: &BTreeMap<usize, usize>) -> bool {
    if need.iter().any(|(&m, &n)| group.supply(m) < n) {
        return false;
    }
    let words_by_meter: Vec<(usize, BTreeSet<&str>)> = need.keys().map(|&m| (m, group.distinct_words(m))).collect();
    let all_words: BTreeSet<&str> = words_by_meter.iter().flat_map(|(_, w)| w.iter().copied()).collect();
    let total: usize = need.values().sum();
    if all_words.len() < total {
        return false;
    }

    let words: Vec<&str> = all_words.into_iter().collect();
    let slots: Vec<Vec<usize>> = words_by_meter
        .iter()
        .flat_map(|(m, set)| {
            let adj: Vec<usize> = words.iter().enumerate().filter(|(_, w)| set.contains(*w)).map(|(i, _)| i).collect();
            std::iter::repeat_n(adj, need[m])
        })
        .collect();
    max_matching(&slots, words.len()) == slots.len()
}

/// Kuhn's augmenting-path matching; `adj[s]` lists the words slot `s` accepts.
fn max_matching(adj: &[Vec<usize>], n_words: usize) -> usize {
    fn augment(s: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &w in &adj[s] {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            if owner[w].is_none_or(|o| augment(o, adj, seen, owner)) {
                owner[w] = Some(s);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; n_words];
    (0..adj.len()).filter(|&s| augment(s, adj, &mut vec![false; n_words], &mut owner)).count()
}

/// Letter → keys of the groups able to serve it, in index order.
pub fn feasible_groups(req: &Requirements, index: &RhymeIndex) -> BTreeMap<char, Vec<String>> {
    req.iter()
        .map(|(&letter, need)| {
            let keys = index.groups.values().filter(|g| group_can_serve(g, need)).map(|g| g.key.clone()).collect();
            (letter, keys)
        })
        .collect()
}

/// Injective letter → group key map.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LetterAssignment {
    pub groups: BTreeMap<char, String>,
}

impl LetterAssignment {
    pub fn group_of(&self, letter: char) -> Option<&str> {
        self.groups.get(&letter).map(String::as_str)
    }
}

/// Draw a group for each letter in `letters` order, backtracking on dead ends.
pub fn assign_groups<R: Rng + ?Sized>(
    letters: &[char],
    feasible: &BTreeMap<char, Vec<String>>,
    rng: &mut R,
) -> Result<LetterAssignment, BuildError> {
    let options = |l: char| feasible.get(&l).map(Vec::as_slice).unwrap_or(&[]);
    if let Some(&letter) = letters.iter().find(|&&l| options(l).is_empty()) {
        return Err(BuildError::Infeasible { letter });
    }

    fn search<R: Rng + ?Sized>(
        depth: usize,
        letters: &[char],
        feasible: &BTreeMap<char, Vec<String>>,
        chosen: &mut Vec<String>,
        deepest: &mut usize,
        rng: &mut R,
    ) -> bool {
        if depth == letters.len() {
            return true;
        }
        *deepest = (*deepest).max(depth);
        let mut pool: Vec<&String> = feasible[&letters[depth]].iter().filter(|k| !chosen.contains(k)).collect();
        while !pool.is_empty() {
            let pick = pool.remove(rng.gen_range(0..pool.len()));
            chosen.push(pick.clone());
            if search(depth + 1, letters, feasible, chosen, deepest, rng) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let mut chosen = Vec::with_capacity(letters.len());
    let mut deepest = 0;
    if search(0, letters, feasible, &mut chosen, &mut deepest, rng) {
        Ok(LetterAssignment { groups: letters.iter().copied().zip(chosen).collect() })
    } else {
        Err(BuildError::Infeasible { letter: letters[deepest] })
    }
}

#[derive(Debug, Clone)]
pub struct PlacedVerse<S> {
    pub slot: Slot,
    pub verse: ScannedVerse,
    /// `None` for stanza-initial verses, which are drawn rather than scored.
    pub score: Option<CandidateScore<S>>,
}

/// Every candidate considered for one scored slot, in corpus order.
#[derive(Debug, Clone)]
pub struct SlotTrace<S> {
    pub slot: Slot,
    pub candidates: Vec<(ScannedVerse, CandidateScore<S>)>,
    /// Index into `candidates` of the winner.
    pub chosen: usize,
}

#[derive(Debug, Clone)]
pub struct BuildState<S> {
    pub scheme: RhymeScheme,
    pub meters: Vec<usize>,
    pub weights: CriterionWeights<S>,
    pub seed: Option<u64>,
    pub assignment: LetterAssignment,
    pub placed: Vec<PlacedVerse<S>>,
    pub retired_final_words: BTreeMap<char, BTreeSet<String>>,
    pub retired_sentence_ids: BTreeSet<String>,
    pub trace: Vec<SlotTrace<S>>,
}

impl<S: Scalar> BuildState<S> {
    fn new(
        scheme: &RhymeScheme,
        meters: Vec<usize>,
        weights: CriterionWeights<S>,
        assignment: LetterAssignment,
    ) -> Self {
        BuildState {
            scheme: scheme.clone(),
            meters,
            weights,
            seed: None,
            assignment,
            placed: Vec::new(),
            retired_final_words: BTreeMap::new(),
            retired_sentence_ids: BTreeSet::new(),
            trace: Vec::new(),
        }
    }

    /// References for the next slot; `None` when that slot opens a stanza.
    pub fn context_for(&self, slot: &Slot) -> Option<ReferenceContext<'_>> {
        if slot.is_stanza_first {
            return None;
        }
        let stanza_first = self.placed.iter().find(|p| p.slot.stanza_index == slot.stanza_index)?;
        let previous = self.placed.last()?;
        let same_letter_latest = self.placed.iter().rev().find(|p| p.slot.letter == slot.letter).map(|p| &p.verse);
        Some(ReferenceContext { stanza_first: &stanza_first.verse, previous: &previous.verse, same_letter_latest })
    }

    pub fn is_eligible(&self, letter: char, verse: &ScannedVerse) -> bool {
        !self.retired_sentence_ids.contains(&verse.source_id)
            && !self.retired_final_words.get(&letter).is_some_and(|w| w.contains(&verse.final_word))
    }

    fn place(&mut self, slot: Slot, verse: ScannedVerse, score: Option<CandidateScore<S>>) {
        self.retired_final_words.entry(slot.letter).or_default().insert(verse.final_word.clone());
        self.retired_sentence_ids.insert(verse.source_id.clone());
        self.placed.push(PlacedVerse { slot, verse, score });
    }

    pub fn verses(&self) -> impl Iterator<Item = &ScannedVerse> {
        self.placed.iter().map(|p| &p.verse)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BuildOptions {
    /// Score each slot's candidates on the rayon pool.
    pub parallel: bool,
    /// Record every scored candidate in [`BuildState::trace`].
    pub trace: bool,
}

/// Score `candidates` against `ctx` and return all scores plus the index of
/// the winner: highest score, earliest candidate on ties.
pub fn select_candidate<S: Scalar>(
    candidates: &[&ScannedVerse],
    ctx: &ReferenceContext<'_>,
    weights: &CriterionWeights<S>,
    parallel: bool,
) -> (Vec<CandidateScore<S>>, Option<usize>) {
    let scores: Vec<CandidateScore<S>> = if parallel {
        candidates.par_iter().map(|c| evaluate_candidate(c, ctx, weights)).collect()
    } else {
        candidates.iter().map(|c| evaluate_candidate(c, ctx, weights)).collect()
    };
    let mut best: Option<usize> = None;
    for (i, s) in scores.iter().enumerate() {
        if best.is_none_or(|b| s.score > scores[b].score) {
            best = Some(i);
        }
    }
    (scores, best)
}

/// Fill every slot in order under the given assignment.
pub fn build_poem<S: Scalar, R: Rng + ?Sized>(
    scheme: &RhymeScheme,
    meters: &[usize],
    weights: &CriterionWeights<S>,
    index: &RhymeIndex,
    assignment: &LetterAssignment,
    rng: &mut R,
    options: BuildOptions,
) -> Result<BuildState<S>, BuildError> {
    if meters.len() != scheme.verse_count() {
        return Err(SchemeError::MeterCountMismatch { expected: scheme.verse_count(), got: meters.len() }.into());
    }
    let mut state = BuildState::new(scheme, meters.to_vec(), *weights, assignment.clone());

    for (&slot, &meter) in scheme.flat.iter().zip(meters) {
        let exhausted = BuildError::ExhaustedCandidates { slot: slot.verse_index + 1, letter: slot.letter, meter };
        let group = assignment.group_of(slot.letter).and_then(|k| index.get(k)).ok_or(exhausted.clone())?;
        let eligible: Vec<&ScannedVerse> =
            group.verses(meter).iter().filter(|v| state.is_eligible(slot.letter, v)).collect();
        if eligible.is_empty() {
            return Err(exhausted);
        }

        match state.context_for(&slot) {
            None => {
                let pick = eligible[rng.gen_range(0..eligible.len())].clone();
                state.place(slot, pick, None);
            }
            Some(ctx) => {
                let (scores, best) = select_candidate(&eligible, &ctx, weights, options.parallel);
                let best = best.expect("eligible is non-empty");
                let chosen = eligible[best].clone();
                let score = scores[best];
                if options.trace {
                    let candidates = eligible.iter().map(|v| (*v).clone()).zip(scores).collect();
                    state.trace.push(SlotTrace { slot, candidates, chosen: best });
                }
                state.place(slot, chosen, Some(score));
            }
        }
    }
    Ok(state)
}

/// Score a fixed sequence of verses as if the assembler had placed them.
/// No retirement or group checks are applied.
pub fn evaluate_placements<S: Scalar>(
    scheme: &RhymeScheme,
    verses: &[ScannedVerse],
    weights: &CriterionWeights<S>,
) -> Result<BuildState<S>, BuildError> {
    if verses.len() != scheme.verse_count() {
        return Err(BuildError::PlacementMismatch { expected: scheme.verse_count(), got: verses.len() });
    }
    let mut assignment = LetterAssignment::default();
    for (slot, v) in scheme.flat.iter().zip(verses) {
        assignment.groups.entry(slot.letter).or_insert_with(|| v.final_syllable.clone());
    }
    let meters = verses.iter().map(|v| v.meter).collect();
    let mut state = BuildState::new(scheme, meters, *weights, assignment);
    for (&slot, verse) in scheme.flat.iter().zip(verses) {
        let score = state.context_for(&slot).map(|ctx| evaluate_candidate(verse, &ctx, weights));
        state.place(slot, verse.clone(), score);
    }
    Ok(state)
}

#[derive(Debug, Clone)]
pub struct GenerateConfig<S> {
    pub scheme: RhymeScheme,
    pub meters: MeterPlan,
    pub weights: CriterionWeights<S>,
    pub seed: u64,
    pub options: BuildOptions,
}

/// Full pipeline: resolve meters, filter and assign groups, assemble.
pub fn generate<S: Scalar>(config: &GenerateConfig<S>, index: &RhymeIndex) -> Result<BuildState<S>, BuildError> {
    let mut rng = Rng8::seed_from_u64(config.seed);
    let meters = resolve_meters(&config.meters, &index.available_meters(), &mut rng)?;
    let req = letter_requirements(&config.scheme, &meters);
    let feasible = feasible_groups(&req, index);
    let assignment = assign_groups(&config.scheme.letters(), &feasible, &mut rng)?;
    let mut state = build_poem(&config.scheme, &meters, &config.weights, index, &assignment, &mut rng, config.options)?;
    state.seed = Some(config.seed);
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_index, CorpusEntry};
    use crate::scheme::parse_scheme;

    fn entry(id: usize, word: &str, scansion: &str) -> CorpusEntry {
        CorpusEntry::new(id.to_string(), format!("frase {word}"), vec![scansion.to_string()]).unwrap()
    }

    /// A verse of `meter` syllables, stressed on the last, ending in "ta".
    fn scansion(meter: usize, tag: &str) -> String {
        let mut parts: Vec<String> = (1..meter).map(|i| format!("{tag}{i}")).collect();
        parts.push("p#o".into());
        parts.push("ta".into());
        // tag makes syllables distinct between sentences
        parts[0] = format!("{tag}a");
        parts.join("/")
    }

    fn group_with(counts: &[(usize, &[&str])]) -> RhymeIndex {
        let mut entries = Vec::new();
        let mut id = 0;
        for (meter, words) in counts {
            for w in *words {
                id += 1;
                entries.push(entry(id, w, &scansion(*meter, &format!("x{id}"))));
            }
        }
        build_index(&entries)
    }

    #[test]
    fn requirements_count_slots() {
        let s = parse_scheme("AA BBA").unwrap();
        let req = letter_requirements(&s, &[9, 9, 10, 10, 10]);
        assert_eq!(req[&'A'], BTreeMap::from([(9, 2), (10, 1)]));
        assert_eq!(req[&'B'], BTreeMap::from([(10, 2)]));
        let req = letter_requirements(&parse_scheme("AABB").unwrap(), &[10; 4]);
        assert_eq!(req[&'A'], BTreeMap::from([(10, 2)]));
        assert_eq!(req[&'B'], BTreeMap::from([(10, 2)]));
        let req = letter_requirements(&parse_scheme("A").unwrap(), &[7]);
        assert_eq!(req[&'A'], BTreeMap::from([(7, 1)]));
    }

    #[test]
    fn feasibility_respects_distinct_words() {
        let need = BTreeMap::from([(9, 2), (10, 1)]);
        let ok = group_with(&[(9, &["a", "b"]), (10, &["c"])]);
        assert!(group_can_serve(ok.get("ta").unwrap(), &need));
        let short = group_with(&[(9, &["a"]), (10, &["c", "d"])]);
        assert!(!group_can_serve(short.get("ta").unwrap(), &need));
        let dup = group_with(&[(9, &["a", "a"]), (10, &["c"])]);
        assert!(!group_can_serve(dup.get("ta").unwrap(), &need));
        // a word shared across meters cannot serve both
        let shared = group_with(&[(9, &["a", "b"]), (10, &["a"])]);
        assert!(!group_can_serve(shared.get("ta").unwrap(), &need));
    }

    #[test]
    fn feasibility_needs_a_matching_not_just_counts() {
        // 8 and 9 both only offer "a": per-meter and total counts pass, matching fails.
        let need = BTreeMap::from([(8, 1), (9, 1), (10, 1)]);
        let idx = group_with(&[(8, &["a"]), (9, &["a"]), (10, &["b", "c"])]);
        assert!(!group_can_serve(idx.get("ta").unwrap(), &need));
    }

    #[test]
    fn empty_index_has_no_feasible_groups() {
        let req = letter_requirements(&parse_scheme("AB").unwrap(), &[10, 10]);
        let f = feasible_groups(&req, &RhymeIndex::default());
        assert!(f.values().all(Vec::is_empty));
        let mut rng = Rng8::seed_from_u64(1);
        assert_eq!(assign_groups(&['A', 'B'], &f, &mut rng), Err(BuildError::Infeasible { letter: 'A' }));
    }

    #[test]
    fn assignment_is_injective_and_backtracks() {
        let feasible = BTreeMap::from([('A', vec!["x".to_string(), "y".to_string()]), ('B', vec!["x".to_string()])]);
        for seed in 0..20 {
            let a = assign_groups(&['A', 'B'], &feasible, &mut Rng8::seed_from_u64(seed)).unwrap();
            assert_eq!(a.group_of('A'), Some("y"));
            assert_eq!(a.group_of('B'), Some("x"));
        }
        let one = BTreeMap::from([('A', vec!["x".to_string()])]);
        let a = assign_groups(&['A'], &one, &mut Rng8::seed_from_u64(0)).unwrap();
        assert_eq!(a.group_of('A'), Some("x"));
        let clash = BTreeMap::from([('A', vec!["x".to_string()]), ('B', vec!["x".to_string()])]);
        assert_eq!(
            assign_groups(&['A', 'B'], &clash, &mut Rng8::seed_from_u64(0)),
            Err(BuildError::Infeasible { letter: 'B' })
        );
    }

    #[test]
    fn build_reports_exhaustion() {
        // feasibility passes but a two-scansion sentence eats both buckets
        let e = CorpusEntry::new("1", "o dia passa", vec!["O/ d#i/a/ p#as/sa.".into(), "O/ d#ia/ p#as/sa.".into()])
            .unwrap();
        let f = CorpusEntry::new("2", "o mar passa", vec!["O/ m#ar/ p#as/sa.".into()]).unwrap();
        let index = build_index(&[e, f]);
        let scheme = parse_scheme("AA").unwrap();
        let assignment = LetterAssignment { groups: BTreeMap::from([('A', "sa".to_string())]) };
        // both verses end in "passa": the second slot has nothing left
        let err = build_poem(
            &scheme,
            &[4, 3],
            &CriterionWeights::<f64>::uniform(),
            &index,
            &assignment,
            &mut Rng8::seed_from_u64(0),
            BuildOptions::default(),
        )
        .unwrap_err();
        assert_eq!(err, BuildError::ExhaustedCandidates { slot: 2, letter: 'A', meter: 3 });
    }

    #[test]
    fn selection_ties_and_unscored() {
        use crate::scansion::parse_scansion;
        let first = parse_scansion("C#a/sa").unwrap();
        let a = parse_scansion("M#a/sa").unwrap();
        let b = parse_scansion("P#a/sa").unwrap();
        let ctx = ReferenceContext { stanza_first: &first, previous: &first, same_letter_latest: None };
        let (scores, best) = select_candidate(&[&a, &b], &ctx, &CriterionWeights::<f64>::uniform(), false);
        assert_eq!(scores[0].score, scores[1].score);
        assert_eq!(best, Some(0));

        // only rhyme criteria weighted and no rhyme reference: nothing is scored
        let rhyme_only = CriterionWeights::<f64>::from_array([0.0, 0.0, 1.0, 0.0, 1.0]).unwrap();
        let (scores, best) = select_candidate(&[&a, &b], &ctx, &rhyme_only, true);
        assert!(scores.iter().all(|s| s.score.is_none()));
        assert_eq!(best, Some(0));
    }
}
