//! Renders a theory as English sentences, one per statement.
//!
//! The patterns are fixed templates around a configurable category noun
//! (default "Arkon"):
//!
//! * fact: `X is an Arkon.` / `X is not an Arkon.`
//! * strict rule: `If B is an Arkon, then H is an Arkon.`
//! * defeasible rule: `If B is an Arkon, then typically H is an Arkon.`
//! * empty-body defeasible rule: `H is typically an Arkon.`
//! * defeater: the defeasible pattern with the prefix `Evidence against: `.
//!
//! A superiority pair adds an `, unless ... (namely then ...)` suffix to the
//! INFERIOR rule's sentence, describing the superior rule's condition and
//! conclusion. When the inferior rule has an empty body the pair collapses
//! into that single suffixed sentence and the superior rule is not rendered
//! separately; when the inferior rule has its own condition, the superior
//! rule keeps its own sentence as well. Structures outside these patterns
//! (a rule below several superiors, or a suppressed rule that itself had
//! superiors) are still rendered, with a warning describing the stretch.

use std::fmt;

use crate::theory::{Literal, Rule, RuleKind, Theory};

/// Vocabulary used by every sentence pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderConfig {
    /// Category noun, e.g. "Arkon".
    pub noun: String,
    /// Indefinite article matching the noun, e.g. "an".
    pub article: String,
}

impl Default for RenderConfig {
    fn default() -> RenderConfig {
        RenderConfig {
            noun: "Arkon".to_owned(),
            article: "an".to_owned(),
        }
    }
}

/// Sentences plus any pattern-stretch warnings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendering {
    pub sentences: Vec<String>,
    pub warnings: Vec<RenderWarning>,
}

/// A structure the sentence patterns do not cover cleanly; rendering
/// proceeds with a documented convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RenderWarning {
    /// One rule is inferior to several superiors; the unless-clauses are
    /// chained with "; and unless".
    MultipleSuperiors { rule: String, superiors: usize },
    /// A rule folded into an unless-clause had superiors of its own, whose
    /// unless-clauses are dropped with its sentence.
    SuppressedRuleHadSuperiors { rule: String },
    /// A rule is superior to an empty-body inferior but also has an empty
    /// body itself, so there is no condition to put after "unless"; the pair
    /// is rendered unfolded.
    UnconditionalSuperior { rule: String },
}

impl fmt::Display for RenderWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RenderWarning::MultipleSuperiors { rule, superiors } => write!(
                f,
                "rule {rule} is inferior to {superiors} rules; chaining unless-clauses"
            ),
            RenderWarning::SuppressedRuleHadSuperiors { rule } => write!(
                f,
                "rule {rule} was folded into an unless-clause; its own unless-clauses are dropped"
            ),
            RenderWarning::UnconditionalSuperior { rule } => write!(
                f,
                "superior rule {rule} has an empty body; rendering the pair unfolded"
            ),
        }
    }
}

/// Renders every fact and rule of the theory, in declaration order, into one
/// sentence each (except superior rules folded into unless-clauses).
pub fn render_theory(theory: &Theory, cfg: &RenderConfig) -> Rendering {
    let mut warnings = Vec::new();

    // Rule index -> indexes of its declared superiors, in pair order.
    let superiors: Vec<Vec<usize>> = (0..theory.rules().len())
        .map(|r| theory.superiors_of(r))
        .collect();

    // A superior is folded away when some inferior below it has an empty
    // body, unless the superior has no body either (nothing to say after
    // "unless").
    let mut suppressed = vec![false; theory.rules().len()];
    for (inferior, rule) in theory.rules().iter().enumerate() {
        if !rule.body.is_empty() {
            continue;
        }
        for &superior in &superiors[inferior] {
            if theory.rules()[superior].body.is_empty() {
                warnings.push(RenderWarning::UnconditionalSuperior {
                    rule: theory.rules()[superior].label.clone(),
                });
            } else {
                suppressed[superior] = true;
            }
        }
    }

    let mut sentences = Vec::with_capacity(theory.facts().len() + theory.rules().len());
    for fact in theory.facts() {
        sentences.push(format!("{}.", is_phrase(fact, cfg)));
    }

    for (index, rule) in theory.rules().iter().enumerate() {
        if suppressed[index] {
            if !superiors[index].is_empty() {
                warnings.push(RenderWarning::SuppressedRuleHadSuperiors {
                    rule: rule.label.clone(),
                });
            }
            continue;
        }

        let mut sentence = rule_core(rule, cfg);

        let unless: Vec<usize> = superiors[index]
            .iter()
            .copied()
            .filter(|&s| !theory.rules()[s].body.is_empty())
            .collect();
        if unless.len() > 1 {
            warnings.push(RenderWarning::MultipleSuperiors {
                rule: rule.label.clone(),
                superiors: unless.len(),
            });
        }
        for (position, &superior) in unless.iter().enumerate() {
            let connective = if position == 0 { ", unless " } else { "; and unless " };
            sentence.push_str(connective);
            sentence.push_str(&unless_clause(&theory.rules()[superior], cfg));
        }

        sentence.push('.');
        if rule.kind == RuleKind::Defeater {
            sentence = format!("Evidence against: {sentence}");
        }
        sentences.push(sentence);
    }

    Rendering {
        sentences,
        warnings,
    }
}

/// "X is an Arkon" / "X is not an Arkon".
fn is_phrase(lit: &Literal, cfg: &RenderConfig) -> String {
    let copula = if lit.positive { "is" } else { "is not" };
    format!("{} {copula} {} {}", lit.atom, cfg.article, cfg.noun)
}

/// "X is also an Arkon" / "X is also not an Arkon".
fn also_phrase(lit: &Literal, cfg: &RenderConfig) -> String {
    let copula = if lit.positive { "is also" } else { "is also not" };
    format!("{} {copula} {} {}", lit.atom, cfg.article, cfg.noun)
}

/// The sentence for a rule before any unless-suffix or final period.
fn rule_core(rule: &Rule, cfg: &RenderConfig) -> String {
    let defeasible = rule.kind != RuleKind::Strict;
    if rule.body.is_empty() {
        let copula = match (defeasible, rule.head.positive) {
            (true, true) => "is typically",
            (true, false) => "is typically not",
            (false, true) => "is",
            (false, false) => "is not",
        };
        return format!("{} {copula} {} {}", rule.head.atom, cfg.article, cfg.noun);
    }
    let condition: Vec<String> = rule.body.iter().map(|b| is_phrase(b, cfg)).collect();
    let marker = if defeasible { "typically " } else { "" };
    format!(
        "If {}, then {marker}{}",
        condition.join(" and "),
        is_phrase(&rule.head, cfg)
    )
}

/// The clause after "unless": the superior rule's condition, then its
/// conclusion in parentheses.
fn unless_clause(superior: &Rule, cfg: &RenderConfig) -> String {
    let condition = if superior.body.len() > 1 && superior.body.iter().all(|b| b.positive) {
        let names: Vec<String> = superior.body.iter().map(|b| b.atom.to_string()).collect();
        format!("{} are also {}s", names.join(" and "), cfg.noun)
    } else {
        let phrases: Vec<String> = superior.body.iter().map(|b| also_phrase(b, cfg)).collect();
        phrases.join(" and ")
    };
    format!(
        "{condition} (namely then {})",
        is_phrase(&superior.head, cfg)
    )
}
