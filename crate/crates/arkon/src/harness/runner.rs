//! Orchestration: load case directories, call a backend, grade, persist.

use std::path::{Path, PathBuf};
use std::sync::Mutex;

use thiserror::Error;

use crate::generate::CaseMeta;
use crate::harness::client::{ChatBackend, ClientError};
use crate::harness::extract::{extract_verdict, CueLexicon, ExtractedVerdict, LexiconError};
use crate::harness::grade::{grade, Grade, GradingMode};
use crate::harness::prompt::{build_prompt_from, PromptBundle};
use crate::harness::record::{RecordError, RunRecord};
use crate::reasoner::{query, Verdict};
use crate::theory::Literal;

/// One case directory loaded back from disk.
#[derive(Debug, Clone)]
pub struct CaseInput {
    pub dir: PathBuf,
    pub meta: CaseMeta,
    /// Lines of `knowledge.txt`, in presentation order.
    pub sentences: Vec<String>,
    /// Ground truth recomputed from the persisted `theory.dfl`.
    pub expected: Verdict,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot read case directory {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: malformed meta.json: {source}")]
    MalformedMeta {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{path}: theory.dfl does not parse: {details}")]
    MalformedTheory { path: PathBuf, details: String },
    #[error("{path}: invalid query literal {query}")]
    MalformedQuery { path: PathBuf, query: String },
    #[error("case {id}: meta.json says {recorded} but the persisted theory yields {actual}; regenerate the case")]
    StaleExpectedVerdict {
        id: String,
        recorded: Verdict,
        actual: Verdict,
    },
    #[error("no case directories under {0}")]
    NoCases(PathBuf),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Records(#[from] RecordError),
    #[error("case {id}: {source}")]
    Client { id: String, source: ClientError },
}

/// Loads every case directory under `root` (any directory containing a
/// `meta.json`), sorted by case id. The expected verdict is recomputed from
/// the persisted theory file; a mismatch with the metadata is an error, not
/// a silent trust.
pub fn load_cases(root: &Path) -> Result<Vec<CaseInput>, HarnessError> {
    let io_err = |path: &Path, source| HarnessError::Io {
        path: path.to_owned(),
        source,
    };
    let mut cases = Vec::new();
    let entries = std::fs::read_dir(root).map_err(|e| io_err(root, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| io_err(root, e))?;
        let dir = entry.path();
        let meta_path = dir.join("meta.json");
        if !dir.is_dir() || !meta_path.exists() {
            continue;
        }
        let meta_text =
            std::fs::read_to_string(&meta_path).map_err(|e| io_err(&meta_path, e))?;
        let meta: CaseMeta =
            serde_json::from_str(&meta_text).map_err(|source| HarnessError::MalformedMeta {
                path: meta_path.clone(),
                source,
            })?;

        let theory_path = dir.join("theory.dfl");
        let theory_text =
            std::fs::read_to_string(&theory_path).map_err(|e| io_err(&theory_path, e))?;
        let theory = crate::parser::parse_theory(&theory_text).map_err(|diagnostics| {
            HarnessError::MalformedTheory {
                path: theory_path.clone(),
                details: diagnostics
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            }
        })?;
        let query_literal: Literal =
            meta.query
                .parse()
                .map_err(|_| HarnessError::MalformedQuery {
                    path: meta_path.clone(),
                    query: meta.query.clone(),
                })?;
        let expected = query(&theory, &query_literal);
        if expected != meta.expected {
            return Err(HarnessError::StaleExpectedVerdict {
                id: meta.id.clone(),
                recorded: meta.expected,
                actual: expected,
            });
        }

        let knowledge_path = dir.join("knowledge.txt");
        let knowledge =
            std::fs::read_to_string(&knowledge_path).map_err(|e| io_err(&knowledge_path, e))?;
        let sentences = knowledge.lines().map(str::to_owned).collect();

        cases.push(CaseInput {
            dir,
            meta,
            sentences,
            expected,
        });
    }
    if cases.is_empty() {
        return Err(HarnessError::NoCases(root.to_owned()));
    }
    cases.sort_by(|a, b| a.meta.id.cmp(&b.meta.id));
    Ok(cases)
}

/// Execution options for [`run_cases`].
pub struct RunOptions {
    pub grading: GradingMode,
    pub lexicon: CueLexicon,
    /// Worker threads; clamped to at least 1.
    pub parallelism: usize,
    /// Stamp records with the completion time. Off for fixture runs so
    /// their output is bit-reproducible.
    pub timestamps: bool,
}

/// Runs every case against the backend and grades the answers. Transport
/// failures become `Unparseable` records with an error note rather than
/// aborting the run; records come back in case order regardless of
/// completion order.
pub fn run_cases<B: ChatBackend + Sync>(
    cases: &[CaseInput],
    backend: &B,
    options: &RunOptions,
) -> Vec<RunRecord> {
    let next: Mutex<usize> = Mutex::new(0);
    let results: Vec<Mutex<Option<RunRecord>>> =
        cases.iter().map(|_| Mutex::new(None)).collect();
    let workers = options.parallelism.max(1).min(cases.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let index = {
                    let mut guard = next.lock().expect("queue lock");
                    let index = *guard;
                    *guard += 1;
                    index
                };
                let Some(case) = cases.get(index) else {
                    break;
                };
                let record = run_one(case, backend, options);
                *results[index].lock().expect("slot lock") = Some(record);
            });
        }
    });
    results
        .into_iter()
        .map(|slot| slot.into_inner().expect("slot lock").expect("worker filled slot"))
        .collect()
}

fn run_one<B: ChatBackend + Sync>(
    case: &CaseInput,
    backend: &B,
    options: &RunOptions,
) -> RunRecord {
    let prompt: PromptBundle = build_prompt_from(&case.meta.id, &case.sentences);
    let (response, error, attempts) = match backend.complete(&prompt) {
        Ok(response) => (Some(response.text), None, response.attempts),
        Err(err) => {
            let attempts = match &err {
                ClientError::EndpointUnreachable { attempts, .. } => *attempts,
                _ => 1,
            };
            (None, Some(err.to_string()), attempts)
        }
    };
    let extracted = match &response {
        Some(text) => extract_verdict(text, &options.lexicon),
        None => ExtractedVerdict::Unparseable,
    };
    let graded: Grade = grade(extracted, case.expected, options.grading);
    RunRecord {
        case: case.meta.clone(),
        model: backend.model_name().to_owned(),
        system_instruction: prompt.system_instruction,
        user_message: prompt.user_message,
        response,
        error,
        attempts,
        timestamp: options
            .timestamps
            .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
        extracted,
        grade: graded,
        grading_mode: options.grading,
    }
}
