//! Lexical verdict extraction from model responses.
//!
//! Only the final paragraph of a response is inspected: step-by-step answers
//! reason at length and then state a conclusion, and cues from intermediate
//! steps must not override it. Matching is case-insensitive substring search
//! against a configurable cue lexicon, in fixed priority order: negative
//! cues, then no-conclusion cues, then affirmative cues.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// What the response claims about the query atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractedVerdict {
    Affirmative,
    Negative,
    NoConclusion,
    Unparseable,
}

impl ExtractedVerdict {
    pub fn name(self) -> &'static str {
        match self {
            ExtractedVerdict::Affirmative => "affirmative",
            ExtractedVerdict::Negative => "negative",
            ExtractedVerdict::NoConclusion => "no_conclusion",
            ExtractedVerdict::Unparseable => "unparseable",
        }
    }
}

/// Cue substrings per verdict class, checked in the field order below.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CueLexicon {
    pub negative: Vec<String>,
    pub no_conclusion: Vec<String>,
    pub affirmative: Vec<String>,
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read cue lexicon: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed cue lexicon: {0}")]
    Parse(#[from] toml::de::Error),
}

impl CueLexicon {
    /// The built-in lexicon shipped at `config/cues.toml`.
    pub fn builtin() -> CueLexicon {
        toml::from_str(include_str!("../../config/cues.toml"))
            .expect("built-in cue lexicon is well formed")
    }

    pub fn from_path(path: &std::path::Path) -> Result<CueLexicon, LexiconError> {
        Ok(toml::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// Extracts the verdict stated in the response's final paragraph.
pub fn extract_verdict(response: &str, lexicon: &CueLexicon) -> ExtractedVerdict {
    let paragraph = final_paragraph(response).to_lowercase();
    let hit = |cues: &[String]| cues.iter().any(|cue| paragraph.contains(cue.as_str()));
    if paragraph.is_empty() {
        ExtractedVerdict::Unparseable
    } else if hit(&lexicon.negative) {
        ExtractedVerdict::Negative
    } else if hit(&lexicon.no_conclusion) {
        ExtractedVerdict::NoConclusion
    } else if hit(&lexicon.affirmative) {
        ExtractedVerdict::Affirmative
    } else {
        ExtractedVerdict::Unparseable
    }
}

fn final_paragraph(response: &str) -> &str {
    response
        .trim_end()
        .rsplit("\n\n")
        .next()
        .unwrap_or("")
        .trim()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn extract(text: &str) -> ExtractedVerdict {
        extract_verdict(text, &CueLexicon::builtin())
    }

    #[test]
    fn plain_affirmation_is_affirmative() {
        assert_eq!(extract("Thus, A0000000 is an Arkon."), ExtractedVerdict::Affirmative);
    }

    #[test]
    fn plain_denial_is_negative() {
        assert_eq!(
            extract("Therefore, A0000000 is not an Arkon."),
            ExtractedVerdict::Negative
        );
    }

    #[test]
    fn hedged_answers_are_no_conclusion() {
        assert_eq!(
            extract("No conclusion can be drawn about A0000000."),
            ExtractedVerdict::NoConclusion
        );
        assert_eq!(
            extract("We cannot conclude that A0000000 is an Arkon."),
            ExtractedVerdict::NoConclusion
        );
    }

    #[test]
    fn empty_or_cue_free_responses_are_unparseable() {
        assert_eq!(extract(""), ExtractedVerdict::Unparseable);
        assert_eq!(extract("   \n\n  "), ExtractedVerdict::Unparseable);
        assert_eq!(
            extract("The rules form an interesting pattern."),
            ExtractedVerdict::Unparseable
        );
    }

    #[test]
    fn only_the_final_paragraph_counts() {
        let text = "Step 1: A0000002 is an Arkon.\nStep 2: so A0000001 is an Arkon.\n\nTherefore, A0000000 is not an Arkon.";
        assert_eq!(extract(text), ExtractedVerdict::Negative);
        let text = "Maybe A0000000 is not an Arkon? Let me check.\n\nConclusion: A0000000 is an Arkon.";
        assert_eq!(extract(text), ExtractedVerdict::Affirmative);
    }

    #[test]
    fn negative_cues_outrank_affirmative_cues() {
        assert_eq!(
            extract("So while A0000001 is an Arkon, A0000000 is not an Arkon."),
            ExtractedVerdict::Negative
        );
    }

    #[test]
    fn lexicon_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cues.toml");
        std::fs::write(
            &path,
            "negative = [\"nope\"]\nno_conclusion = []\naffirmative = [\"yep\"]\n",
        )
        .unwrap();
        let lexicon = CueLexicon::from_path(&path).unwrap();
        assert_eq!(extract_verdict("yep", &lexicon), ExtractedVerdict::Affirmative);
        assert_eq!(extract_verdict("nope", &lexicon), ExtractedVerdict::Negative);
        assert_eq!(
            extract_verdict("is an arkon", &lexicon),
            ExtractedVerdict::Unparseable
        );
    }
}
