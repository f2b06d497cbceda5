//! Evaluation harness: prompts a chat model with generated benchmark cases,
//! extracts a verdict from the reply, grades it against ground truth, and
//! aggregates the results into accuracy reports.
//!
//! The harness is split along the data flow:
//!
//! * [`prompt`] builds the fixed instruction pair sent for every case,
//! * [`client`] talks to a chat-completions endpoint (or replays stored
//!   transcripts offline),
//! * [`extract`] reads a verdict out of the model's final paragraph,
//! * [`grade`] scores the verdict against the case's expected verdict,
//! * [`record`] persists one JSON line per case,
//! * [`report`] folds records into a per-theory accuracy table,
//! * [`runner`] wires the stages together over a case directory.
//!
//! API credentials are read from the environment at backend construction
//! and never stored in configuration files or run records.

pub mod client;
pub mod config;
pub mod extract;
pub mod grade;
pub mod prompt;
pub mod record;
pub mod report;
pub mod runner;

pub use client::{BackendResponse, ChatBackend, ClientError, FixtureBackend, HttpBackend};
pub use config::{load_config, ConfigError, EndpointConfig, HarnessConfig, RunConfig};
pub use extract::{extract_verdict, CueLexicon, ExtractedVerdict, LexiconError};
pub use grade::{grade, Grade, GradingMode};
pub use prompt::{build_prompt, build_prompt_from, PromptBundle, SYSTEM_INSTRUCTION, USER_TEMPLATE};
pub use record::{read_records, write_records, RecordError, RunRecord};
pub use report::{build_report, Report, SETTINGS};
pub use runner::{load_cases, run_cases, CaseInput, HarnessError, RunOptions};
