use std::fmt::Write as _;

use crate::pipeline::PipelineError;
use crate::types::EmotionLabel;

const DEFAULT_LEXICON: &str = include_str!("../../data/suffixes.txt");

/// Emotion suffix phrases, kept per emotion in file order.
///
/// The default lexicon holds the 45 annotator-written suffixes (7 anger,
/// 3 disgust, 13 happiness, 7 sadness, 10 fear, 5 surprise).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixLexicon {
    entries: [Vec<String>; 6],
}

impl Default for SuffixLexicon {
    fn default() -> Self {
        SuffixLexicon::parse(DEFAULT_LEXICON).expect("embedded lexicon is well-formed")
    }
}

impl SuffixLexicon {
    /// Parses the sectioned text format:
    ///
    /// ```text
    /// [anger]
    /// in anger
    /// angrily
    /// ```
    ///
    /// `#` starts a comment line; blank lines are ignored. Every emotion must
    /// have at least one suffix.
    pub fn parse(text: &str) -> Result<Self, PipelineError> {
        let mut entries: [Vec<String>; 6] = Default::default();
        let mut current: Option<EmotionLabel> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(header) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let label = header.parse::<EmotionLabel>().map_err(|_| PipelineError::LexiconParse {
                    line: n + 1,
                    message: format!("unknown emotion header [{header}]"),
                })?;
                current = Some(label);
                continue;
            }
            let Some(label) = current else {
                return Err(PipelineError::LexiconParse {
                    line: n + 1,
                    message: "suffix before any [emotion] header".into(),
                });
            };
            let phrase = line.split_whitespace().collect::<Vec<_>>().join(" ");
            let slot = &mut entries[label.index()];
            if !slot.iter().any(|s| s.eq_ignore_ascii_case(&phrase)) {
                slot.push(phrase);
            }
        }
        let lexicon = SuffixLexicon { entries };
        for label in EmotionLabel::ALL {
            if lexicon.suffixes(label).is_empty() {
                return Err(PipelineError::MissingSuffixes(label));
            }
        }
        Ok(lexicon)
    }

    /// Builds a lexicon without the non-empty check, for callers that want
    /// to exercise partial lexicons.
    pub fn from_entries(entries: [Vec<String>; 6]) -> Self {
        SuffixLexicon { entries }
    }

    pub fn suffixes(&self, label: EmotionLabel) -> &[String] {
        &self.entries[label.index()]
    }

    /// Every `(emotion, suffix)` pair in label order.
    pub fn iter(&self) -> impl Iterator<Item = (EmotionLabel, &str)> {
        EmotionLabel::ALL
            .into_iter()
            .flat_map(move |label| self.suffixes(label).iter().map(move |s| (label, s.as_str())))
    }

    pub fn len(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for label in EmotionLabel::ALL {
            let _ = writeln!(out, "[{label}]");
            for s in self.suffixes(label) {
                let _ = writeln!(out, "{s}");
            }
            out.push('\n');
        }
        out
    }
}
