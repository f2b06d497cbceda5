//! Defeasible logic toolkit.
//!
//! The crate models propositional defeasible theories (facts, strict rules,
//! defeasible rules, defeaters, and a superiority relation) and provides:
//!
//! * a fixpoint reasoner deriving the four tagged conclusion kinds, with
//!   replayable derivation traces ([`reasoner`]);
//! * an independent goal-directed prover used to cross-check the reasoner
//!   ([`oracle`]);
//! * a text format for theories ([`parser`]);
//! * parameterised benchmark families with known ground truths
//!   ([`generate`]);
//! * a natural-language rendering of theories ([`translate`]);
//! * a harness that poses generated problems to a chat-completion model and
//!   scores the answers ([`harness`]);
//! * an internal consistency suite ([`selftest`]).

pub mod generate;
pub mod goldens;
pub mod harness;
pub mod oracle;
pub mod parser;
pub mod reasoner;
pub mod selftest;
pub mod theory;
pub mod translate;
