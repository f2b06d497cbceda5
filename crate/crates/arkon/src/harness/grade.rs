//! Scoring an extracted verdict against the reasoner's ground truth.

use serde::{Deserialize, Serialize};

use crate::harness::extract::ExtractedVerdict;
use crate::reasoner::Verdict;

/// How strictly non-provable ground truths are judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingMode {
    /// Two-way judgment: a provable atom needs an affirmative answer;
    /// anything else needs any non-affirmative answer.
    #[default]
    Binary,
    /// Three-way judgment: a provably false atom needs a negative answer
    /// and an undetermined one needs an explicit no-conclusion answer.
    Ternary,
}

impl GradingMode {
    pub fn name(self) -> &'static str {
        match self {
            GradingMode::Binary => "binary",
            GradingMode::Ternary => "ternary",
        }
    }
}

impl std::str::FromStr for GradingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<GradingMode, String> {
        match s {
            "binary" => Ok(GradingMode::Binary),
            "ternary" => Ok(GradingMode::Ternary),
            other => Err(format!("unknown grading mode `{other}` (expected binary or ternary)")),
        }
    }
}

/// The judgment recorded for one case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    Correct,
    Error,
    Unparseable,
}

impl Grade {
    pub fn name(self) -> &'static str {
        match self {
            Grade::Correct => "Correct",
            Grade::Error => "Error",
            Grade::Unparseable => "Unparseable",
        }
    }
}

/// Scores one extracted verdict.
pub fn grade(extracted: ExtractedVerdict, expected: Verdict, mode: GradingMode) -> Grade {
    let correct = match (mode, expected) {
        (_, Verdict::ProvablyTrue) => extracted == ExtractedVerdict::Affirmative,
        (GradingMode::Binary, _) => matches!(
            extracted,
            ExtractedVerdict::Negative | ExtractedVerdict::NoConclusion
        ),
        (GradingMode::Ternary, Verdict::ProvablyFalse) => extracted == ExtractedVerdict::Negative,
        (GradingMode::Ternary, Verdict::Undetermined) => {
            extracted == ExtractedVerdict::NoConclusion
        }
    };
    if extracted == ExtractedVerdict::Unparseable {
        Grade::Unparseable
    } else if correct {
        Grade::Correct
    } else {
        Grade::Error
    }
}
