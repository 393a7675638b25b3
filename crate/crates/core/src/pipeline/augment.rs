use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::pipeline::{PipelineError, SuffixLexicon};
use crate::types::EmotionLabel;

const TERMINAL_MARKS: [char; 3] = ['.', '!', '?'];

fn split_terminal_mark(text: &str) -> (&str, Option<char>) {
    let text = text.trim_end();
    match text.chars().last() {
        Some(c) if TERMINAL_MARKS.contains(&c) => (text[..text.len() - c.len_utf8()].trim_end(), Some(c)),
        _ => (text, None),
    }
}

/// Attaches `suffix` to the end of `caption`. A terminal `.`, `!` or `?` is
/// kept last: `"a woman sings."` becomes `"a woman sings, in disgust."`.
pub fn insert_suffix(caption: &str, suffix: &str) -> String {
    match split_terminal_mark(caption) {
        (body, Some(mark)) => format!("{body}, {suffix}{mark}"),
        (body, None) => format!("{body} {suffix}"),
    }
}

/// Picks the suffix index for `seed` among `count` candidates.
pub fn suffix_index(seed: u64, count: usize) -> usize {
    ChaCha8Rng::seed_from_u64(seed).random_range(0..count)
}

/// Appends a seeded random suffix of `emotion` to the caption.
pub fn augment_caption(
    caption: &str,
    emotion: EmotionLabel,
    lexicon: &SuffixLexicon,
    seed: u64,
) -> Result<String, PipelineError> {
    if caption.trim().is_empty() {
        return Err(PipelineError::EmptyText);
    }
    let suffixes = lexicon.suffixes(emotion);
    if suffixes.is_empty() {
        return Err(PipelineError::MissingSuffixes(emotion));
    }
    Ok(insert_suffix(caption, &suffixes[suffix_index(seed, suffixes.len())]))
}

/// A query split into its emotion-free text and the emotion its trailing
/// phrase names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmotionSplit {
    pub naive_query: String,
    pub emotion: EmotionLabel,
    pub suffix: String,
}

/// Finds the longest lexicon phrase at the end of `query` (ASCII
/// case-insensitive, whole words, ignoring one terminal mark and an optional
/// comma before the phrase) and removes it.
pub fn strip_emotion_suffix(query: &str, lexicon: &SuffixLexicon) -> Result<EmotionSplit, PipelineError> {
    if query.trim().is_empty() {
        return Err(PipelineError::EmptyText);
    }
    let (body, mark) = split_terminal_mark(query);
    let mut best: Option<(EmotionLabel, &str, &str)> = None;
    for (label, suffix) in lexicon.iter() {
        let Some(cut) = body.len().checked_sub(suffix.len()) else {
            continue;
        };
        if !body.is_char_boundary(cut) || !body[cut..].eq_ignore_ascii_case(suffix) {
            continue;
        }
        let head = &body[..cut];
        let at_word_start = head.is_empty() || head.ends_with(|c: char| c.is_whitespace() || c == ',');
        if at_word_start && best.is_none_or(|(_, s, _)| suffix.len() > s.len()) {
            best = Some((label, suffix, head));
        }
    }
    let (emotion, suffix, head) = best.ok_or(PipelineError::NoEmotionFound)?;
    let head = head.trim_end();
    let head = head.strip_suffix(',').unwrap_or(head).trim_end();
    let mut naive_query = head.to_string();
    if let Some(mark) = mark {
        naive_query.push(mark);
    }
    Ok(EmotionSplit { naive_query, emotion, suffix: suffix.to_string() })
}
