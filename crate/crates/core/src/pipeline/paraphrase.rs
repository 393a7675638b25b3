use std::io::Write;
use std::process::{Command, Stdio};

use crate::pipeline::{augment_caption, PipelineError, SuffixLexicon};
use crate::seed::derive_seed;
use crate::types::EmotionLabel;

/// Source of extra caption variants. The engine treats whatever comes back
/// as additional captions.
pub trait Paraphraser {
    fn paraphrase(&self, caption: &str) -> Result<Vec<String>, PipelineError>;
}

/// Runs an external program per caption: the caption is written to its
/// stdin and every non-blank stdout line is one paraphrase.
#[derive(Debug, Clone)]
pub struct CommandParaphraser {
    program: String,
    args: Vec<String>,
}

impl CommandParaphraser {
    pub fn new(program: impl Into<String>, args: impl IntoIterator<Item = impl Into<String>>) -> Self {
        CommandParaphraser { program: program.into(), args: args.into_iter().map(Into::into).collect() }
    }
}

impl Paraphraser for CommandParaphraser {
    fn paraphrase(&self, caption: &str) -> Result<Vec<String>, PipelineError> {
        let fail = |msg: String| PipelineError::Paraphrase(format!("{}: {msg}", self.program));
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| fail(e.to_string()))?;
        {
            let mut stdin = child.stdin.take().expect("piped stdin");
            stdin.write_all(caption.as_bytes()).map_err(|e| fail(e.to_string()))?;
            stdin.write_all(b"\n").map_err(|e| fail(e.to_string()))?;
        }
        let output = child.wait_with_output().map_err(|e| fail(e.to_string()))?;
        if !output.status.success() {
            return Err(fail(format!("exited with {}", output.status)));
        }
        let text = String::from_utf8(output.stdout).map_err(|e| fail(e.to_string()))?;
        Ok(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect())
    }
}

/// Builds the emotional caption set of one clip: every naive caption with a
/// seeded suffix, followed by the paraphrases of each augmented caption.
pub fn emotional_captions(
    naive_captions: &[String],
    emotion: EmotionLabel,
    lexicon: &SuffixLexicon,
    seed: u64,
    paraphraser: Option<&dyn Paraphraser>,
) -> Result<Vec<String>, PipelineError> {
    let mut out = Vec::with_capacity(naive_captions.len());
    for (n, caption) in naive_captions.iter().enumerate() {
        out.push(augment_caption(caption, emotion, lexicon, derive_seed(seed, n as u64))?);
    }
    if let Some(p) = paraphraser {
        let augmented = out.len();
        for n in 0..augmented {
            let variants = p.paraphrase(&out[n])?;
            out.extend(variants);
        }
    }
    Ok(out)
}
