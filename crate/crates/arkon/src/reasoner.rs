//! Fixpoint reasoner for defeasible theories.
//!
//! Four tagged conclusions are derived for every literal in the universe
//! (every literal occurring in the theory, plus complements):
//!
//! * `+D q`: definitely provable — q is a fact, or some strict rule for q has
//!   an all-`+D` body.
//! * `-D q`: definitely unprovable — q is not a fact and every strict rule
//!   for q has a `-D` body literal.
//! * `+d q`: defeasibly provable — `+D q`, or some strict-or-defeasible rule
//!   for q has an all-`+d` body while `-D ~q` holds and every rule for `~q`
//!   either has a `-d` body literal or is beaten by a declared-superior
//!   applicable strict-or-defeasible rule for q.
//! * `-d q`: defeasibly unprovable — `-D q`, and either every
//!   strict-or-defeasible rule for q has a `-d` body literal, or `+D ~q`, or
//!   some rule for `~q` has an all-`+d` body and no strict-or-defeasible rule
//!   for q both applies and beats it.
//!
//! Tags are added monotonically until nothing changes; a literal that earns
//! neither the positive nor the negative tag of a family (cycles) stays
//! undetermined there. Defeaters can attack and be beaten but never support.
//! Every derivation is recorded as a replayable trace.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::theory::{Literal, RuleClass, RuleKind, Theory};

/// The four tagged-conclusion kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofTag {
    PlusDelta,
    MinusDelta,
    PlusPartial,
    MinusPartial,
}

impl ProofTag {
    pub const ALL: [ProofTag; 4] = [
        ProofTag::PlusDelta,
        ProofTag::MinusDelta,
        ProofTag::PlusPartial,
        ProofTag::MinusPartial,
    ];

    /// Short form used in CLI output: `+D`, `-D`, `+d`, `-d`.
    pub fn symbol(self) -> &'static str {
        match self {
            ProofTag::PlusDelta => "+D",
            ProofTag::MinusDelta => "-D",
            ProofTag::PlusPartial => "+d",
            ProofTag::MinusPartial => "-d",
        }
    }
}

impl fmt::Display for ProofTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Outcome for one literal within one family (definite or defeasible).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TagState {
    /// The positive tag was derived.
    ProvedPositive,
    /// The negative tag was derived: provably not provable.
    ProvedNegative,
    /// Neither tag was derived at the fixpoint.
    Undetermined,
}

/// Answer to a query about a single literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// `+d q`.
    ProvablyTrue,
    /// `+d ~q`.
    ProvablyFalse,
    /// Neither the literal nor its complement is defeasibly provable.
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ProvablyTrue => "provably_true",
            Verdict::ProvablyFalse => "provably_false",
            Verdict::Undetermined => "undetermined",
        })
    }
}

/// One derivation step: a tagged literal plus the evidence that licensed it.
/// Step references are 0-based positions of earlier entries in the same
/// sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub tag: ProofTag,
    pub literal: Literal,
    pub reason: StepReason,
}

/// Why a step was derivable from the steps before it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum StepReason {
    /// `+D`: the literal is a fact.
    Fact,
    /// `+D`: a strict rule fired with a definitely proved body.
    StrictRule { rule: String, premises: Vec<usize> },
    /// `-D`: not a fact, and every strict rule has a refuted body literal.
    NoDefiniteSupport { blocked: Vec<BlockedRule> },
    /// `+d`: promoted from the definite family.
    Definite { from: usize },
    /// `+d`: a supporting rule fired and every attacker was blocked or beaten.
    Supported {
        rule: String,
        premises: Vec<usize>,
        complement_unprovable: usize,
        attackers: Vec<AttackOutcome>,
    },
    /// `-d`: definitely unprovable, plus one of the refutation grounds.
    Refuted {
        definite: usize,
        ground: RefutationGround,
    },
}

/// A rule made inapplicable by one refuted body literal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockedRule {
    pub rule: String,
    pub witness: usize,
}

/// How one attacker was dealt with while proving `+d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum AttackOutcome {
    Blocked {
        attacker: String,
        witness: usize,
    },
    Beaten {
        attacker: String,
        by: String,
        premises: Vec<usize>,
    },
}

/// The clause that justified a `-d` step.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "ground")]
pub enum RefutationGround {
    /// Every supporting rule has a refuted body literal.
    AllRulesBlocked { blocked: Vec<BlockedRule> },
    /// The complement is definitely provable.
    ComplementDefinite { step: usize },
    /// An applicable attacker is neither blocked nor beaten by any
    /// applicable superior rule.
    Overruled {
        attacker: String,
        premises: Vec<usize>,
        survivors: Vec<UnbeatenReason>,
    },
}

/// Why one supporting rule failed to beat the overruling attacker.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "why")]
pub enum UnbeatenReason {
    BodyBlocked { rule: String, witness: usize },
    NotSuperior { rule: String },
}

impl StepReason {
    /// Indexes of every earlier step this reason relies on.
    pub fn references(&self) -> Vec<usize> {
        let mut refs = Vec::new();
        match self {
            StepReason::Fact => {}
            StepReason::StrictRule { premises, .. } => refs.extend(premises),
            StepReason::NoDefiniteSupport { blocked } => {
                refs.extend(blocked.iter().map(|b| b.witness))
            }
            StepReason::Definite { from } => refs.push(*from),
            StepReason::Supported {
                premises,
                complement_unprovable,
                attackers,
                ..
            } => {
                refs.extend(premises);
                refs.push(*complement_unprovable);
                for attack in attackers {
                    match attack {
                        AttackOutcome::Blocked { witness, .. } => refs.push(*witness),
                        AttackOutcome::Beaten { premises, .. } => refs.extend(premises),
                    }
                }
            }
            StepReason::Refuted { definite, ground } => {
                refs.push(*definite);
                match ground {
                    RefutationGround::AllRulesBlocked { blocked } => {
                        refs.extend(blocked.iter().map(|b| b.witness))
                    }
                    RefutationGround::ComplementDefinite { step } => refs.push(*step),
                    RefutationGround::Overruled {
                        premises,
                        survivors,
                        ..
                    } => {
                        refs.extend(premises);
                        for survivor in survivors {
                            if let UnbeatenReason::BodyBlocked { witness, .. } = survivor {
                                refs.push(*witness);
                            }
                        }
                    }
                }
            }
        }
        refs
    }

    fn remap(&mut self, map: &HashMap<usize, usize>) {
        let fix = |idx: &mut usize| *idx = map[idx];
        match self {
            StepReason::Fact => {}
            StepReason::StrictRule { premises, .. } => premises.iter_mut().for_each(fix),
            StepReason::NoDefiniteSupport { blocked } => {
                blocked.iter_mut().for_each(|b| fix(&mut b.witness))
            }
            StepReason::Definite { from } => fix(from),
            StepReason::Supported {
                premises,
                complement_unprovable,
                attackers,
                ..
            } => {
                premises.iter_mut().for_each(fix);
                fix(complement_unprovable);
                for attack in attackers {
                    match attack {
                        AttackOutcome::Blocked { witness, .. } => fix(witness),
                        AttackOutcome::Beaten { premises, .. } => premises.iter_mut().for_each(fix),
                    }
                }
            }
            StepReason::Refuted { definite, ground } => {
                fix(definite);
                match ground {
                    RefutationGround::AllRulesBlocked { blocked } => {
                        blocked.iter_mut().for_each(|b| fix(&mut b.witness))
                    }
                    RefutationGround::ComplementDefinite { step } => fix(step),
                    RefutationGround::Overruled {
                        premises,
                        survivors,
                        ..
                    } => {
                        premises.iter_mut().for_each(fix);
                        for survivor in survivors {
                            if let UnbeatenReason::BodyBlocked { witness, .. } = survivor {
                                fix(witness);
                            }
                        }
                    }
                }
            }
        }
    }

    fn render(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let refs = |steps: &[usize]| -> String {
            steps
                .iter()
                .map(|i| format!("{}", i + 1))
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self {
            StepReason::Fact => write!(f, "fact"),
            StepReason::StrictRule { rule, premises } => {
                if premises.is_empty() {
                    write!(f, "strict rule {rule} with empty body")
                } else {
                    write!(f, "strict rule {rule} [{}]", refs(premises))
                }
            }
            StepReason::NoDefiniteSupport { blocked } => {
                write!(f, "not a fact")?;
                if blocked.is_empty() {
                    write!(f, "; no strict rules")
                } else {
                    for b in blocked {
                        write!(f, "; {} blocked [{}]", b.rule, b.witness + 1)?;
                    }
                    Ok(())
                }
            }
            StepReason::Definite { from } => write!(f, "definitely provable [{}]", from + 1),
            StepReason::Supported {
                rule,
                premises,
                complement_unprovable,
                attackers,
            } => {
                if premises.is_empty() {
                    write!(f, "{rule} applicable with empty body")?;
                } else {
                    write!(f, "{rule} applicable [{}]", refs(premises))?;
                }
                write!(f, "; complement not definite [{}]", complement_unprovable + 1)?;
                if attackers.is_empty() {
                    write!(f, "; no attackers")?;
                }
                for attack in attackers {
                    match attack {
                        AttackOutcome::Blocked { attacker, witness } => {
                            write!(f, "; {attacker} blocked [{}]", witness + 1)?
                        }
                        AttackOutcome::Beaten {
                            attacker,
                            by,
                            premises,
                        } => {
                            if premises.is_empty() {
                                write!(f, "; {attacker} beaten by {by}")?
                            } else {
                                write!(f, "; {attacker} beaten by {by} [{}]", refs(premises))?
                            }
                        }
                    }
                }
                Ok(())
            }
            StepReason::Refuted { definite, ground } => {
                write!(f, "not definitely provable [{}]", definite + 1)?;
                match ground {
                    RefutationGround::AllRulesBlocked { blocked } => {
                        if blocked.is_empty() {
                            write!(f, "; no supporting rules")
                        } else {
                            for b in blocked {
                                write!(f, "; {} blocked [{}]", b.rule, b.witness + 1)?;
                            }
                            Ok(())
                        }
                    }
                    RefutationGround::ComplementDefinite { step } => {
                        write!(f, "; complement definitely provable [{}]", step + 1)
                    }
                    RefutationGround::Overruled {
                        attacker,
                        premises,
                        survivors,
                    } => {
                        if premises.is_empty() {
                            write!(f, "; overruled by {attacker} (empty body)")?;
                        } else {
                            write!(f, "; overruled by {attacker} [{}]", refs(premises))?;
                        }
                        for survivor in survivors {
                            match survivor {
                                UnbeatenReason::BodyBlocked { rule, witness } => {
                                    write!(f, "; {rule} blocked [{}]", witness + 1)?
                                }
                                UnbeatenReason::NotSuperior { rule } => {
                                    write!(f, "; {rule} not superior")?
                                }
                            }
                        }
                        Ok(())
                    }
                }
            }
        }
    }
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}    ", self.tag, self.literal)?;
        self.reason.render(f)
    }
}

/// Every tagged conclusion of a theory, with the derivation order that
/// produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConclusionSet {
    literals: Vec<Literal>,
    index: HashMap<Literal, usize>,
    delta: Vec<TagState>,
    partial: Vec<TagState>,
    trace: Vec<TraceStep>,
}

impl ConclusionSet {
    /// Literals in first-occurrence order: facts, then rule bodies and heads,
    /// then the complements not already present.
    pub fn universe(&self) -> &[Literal] {
        &self.literals
    }

    /// Definite-family state, or `None` for literals outside the universe.
    pub fn delta(&self, lit: &Literal) -> Option<TagState> {
        self.index.get(lit).map(|&i| self.delta[i])
    }

    /// Defeasible-family state, or `None` for literals outside the universe.
    pub fn partial(&self, lit: &Literal) -> Option<TagState> {
        self.index.get(lit).map(|&i| self.partial[i])
    }

    /// True if the given tag was derived for `lit`.
    pub fn has(&self, tag: ProofTag, lit: &Literal) -> bool {
        let Some(&i) = self.index.get(lit) else {
            return false;
        };
        match tag {
            ProofTag::PlusDelta => self.delta[i] == TagState::ProvedPositive,
            ProofTag::MinusDelta => self.delta[i] == TagState::ProvedNegative,
            ProofTag::PlusPartial => self.partial[i] == TagState::ProvedPositive,
            ProofTag::MinusPartial => self.partial[i] == TagState::ProvedNegative,
        }
    }

    /// Three-valued answer for `q`: defeasibly provable, complement
    /// defeasibly provable, or undetermined.
    pub fn verdict(&self, q: &Literal) -> Verdict {
        if self.has(ProofTag::PlusPartial, q) {
            Verdict::ProvablyTrue
        } else if self.has(ProofTag::PlusPartial, &q.complement()) {
            Verdict::ProvablyFalse
        } else {
            Verdict::Undetermined
        }
    }

    /// The full derivation order.
    pub fn trace(&self) -> &[TraceStep] {
        &self.trace
    }

    /// `(literal, definite state, defeasible state)` in universe order.
    pub fn iter(&self) -> impl Iterator<Item = (&Literal, TagState, TagState)> {
        self.literals
            .iter()
            .enumerate()
            .map(|(i, lit)| (lit, self.delta[i], self.partial[i]))
    }

    /// JSON document listing every literal's two family states.
    pub fn to_json(&self) -> serde_json::Value {
        let literals: Vec<serde_json::Value> = self
            .iter()
            .map(|(lit, delta, partial)| {
                serde_json::json!({
                    "literal": lit.to_string(),
                    "definite": state_name(delta),
                    "defeasible": state_name(partial),
                })
            })
            .collect();
        serde_json::json!({ "literals": literals })
    }
}

fn state_name(state: TagState) -> &'static str {
    match state {
        TagState::ProvedPositive => "proved",
        TagState::ProvedNegative => "refuted",
        TagState::Undetermined => "undetermined",
    }
}

/// A self-contained derivation ending at the queried literal's strongest tag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivationTrace {
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    /// The tagged literal the trace proves.
    pub fn target(&self) -> &TraceStep {
        self.steps.last().expect("trace is never empty")
    }

    /// Numbered one-step-per-line rendering.
    pub fn render(&self) -> String {
        let width = self.steps.len().to_string().len();
        self.steps
            .iter()
            .enumerate()
            .map(|(i, step)| format!("{:>width$}. {step}", i + 1))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplainError {
    #[error("no defeasible-family conclusion was derived for {0}")]
    NoDerivation(Literal),
}

/// A trace step that does not follow from the steps before it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step} ({tag} {literal}) is not derivable from the preceding steps")]
pub struct ReplayError {
    pub step: usize,
    pub tag: ProofTag,
    pub literal: Literal,
}

/// Computes every derivable tagged conclusion of `theory`.
pub fn conclusions(theory: &Theory) -> ConclusionSet {
    Engine::new(theory).run()
}

/// Verdict for `q` under a fresh computation.
pub fn query(theory: &Theory, q: &Literal) -> Verdict {
    conclusions(theory).verdict(q)
}

/// Extracts a replayable derivation for `q` ending at its strongest tag
/// (`+D` preferred over `+d`). Fails when the defeasible family left `q`
/// undetermined, i.e. when there is nothing to conclude about it.
pub fn explain(theory: &Theory, q: &Literal) -> Result<DerivationTrace, ExplainError> {
    let set = conclusions(theory);
    let partial = set
        .partial(q)
        .ok_or_else(|| ExplainError::NoDerivation(q.clone()))?;
    let target_tag = match partial {
        TagState::Undetermined => return Err(ExplainError::NoDerivation(q.clone())),
        TagState::ProvedPositive => {
            if set.delta(q) == Some(TagState::ProvedPositive) {
                ProofTag::PlusDelta
            } else {
                ProofTag::PlusPartial
            }
        }
        TagState::ProvedNegative => ProofTag::MinusPartial,
    };

    let target = set
        .trace
        .iter()
        .position(|step| step.tag == target_tag && &step.literal == q)
        .expect("derived tag has a trace step");

    let mut needed = vec![false; set.trace.len()];
    let mut stack = vec![target];
    while let Some(idx) = stack.pop() {
        if needed[idx] {
            continue;
        }
        needed[idx] = true;
        stack.extend(set.trace[idx].reason.references());
    }
    let kept: Vec<usize> = (0..set.trace.len()).filter(|&i| needed[i]).collect();
    let remap: HashMap<usize, usize> = kept.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let steps = kept
        .into_iter()
        .map(|old| {
            let mut step = set.trace[old].clone();
            step.reason.remap(&remap);
            step
        })
        .collect();
    Ok(DerivationTrace { steps })
}

/// Checks a derivation sequence step by step: each tagged literal must be
/// derivable, under the inference conditions, from the steps before it alone.
/// Justifications are ignored; this re-derives each step from the theory.
pub fn validate_trace(theory: &Theory, steps: &[TraceStep]) -> Result<(), ReplayError> {
    let mut derived: Vec<(ProofTag, Literal)> = Vec::with_capacity(steps.len());
    let holds = |derived: &[(ProofTag, Literal)], tag: ProofTag, lit: &Literal| {
        derived.iter().any(|(t, l)| *t == tag && l == lit)
    };
    for (idx, step) in steps.iter().enumerate() {
        let q = &step.literal;
        let nq = q.complement();
        let ok = match step.tag {
            ProofTag::PlusDelta => {
                theory.is_fact(q)
                    || theory
                        .rules_for(q, RuleClass::Strict)
                        .iter()
                        .any(|r|
                            r.body
                                .iter()
                                .all(|a| holds(&derived, ProofTag::PlusDelta, a)))
            }
            ProofTag::MinusDelta => {
                !theory.is_fact(q)
                    && theory
                        .rules_for(q, RuleClass::Strict)
                        .iter()
                        .all(|r| {
                            r.body
                                .iter()
                                .any(|a| holds(&derived, ProofTag::MinusDelta, a))
                        })
            }
            ProofTag::PlusPartial => {
                let supported = || {
                    let applicable: Vec<usize> = theory
                        .rule_indexes_for(q, RuleClass::StrictOrDefeasible)
                        .into_iter()
                        .filter(|&t| {
                            theory.rules()[t]
                                .body
                                .iter()
                                .all(|a| holds(&derived, ProofTag::PlusPartial, a))
                        })
                        .collect();
                    !applicable.is_empty()
                        && holds(&derived, ProofTag::MinusDelta, &nq)
                        && theory
                            .rule_indexes_for(&nq, RuleClass::All)
                            .into_iter()
                            .all(|s| {
                                theory.rules()[s].body.iter().any(|a| {
                                    holds(&derived, ProofTag::MinusPartial, a)
                                }) || applicable.iter().any(|&t| theory.beats(t, s))
                            })
                };
                holds(&derived, ProofTag::PlusDelta, q) || supported()
            }
            ProofTag::MinusPartial => {
                holds(&derived, ProofTag::MinusDelta, q) && {
                    let supporters = theory.rule_indexes_for(q, RuleClass::StrictOrDefeasible);
                    let all_blocked = supporters.iter().all(|&r| {
                        theory.rules()[r]
                            .body
                            .iter()
                            .any(|a| holds(&derived, ProofTag::MinusPartial, a))
                    });
                    let overruled = || {
                        theory
                            .rule_indexes_for(&nq, RuleClass::All)
                            .into_iter()
                            .any(|s| {
                                theory.rules()[s]
                                    .body
                                    .iter()
                                    .all(|a| holds(&derived, ProofTag::PlusPartial, a))
                                    && supporters.iter().all(|&t| {
                                        theory.rules()[t].body.iter().any(|a| {
                                            holds(&derived, ProofTag::MinusPartial, a)
                                        }) || !theory.beats(t, s)
                                    })
                            })
                    };
                    all_blocked
                        || holds(&derived, ProofTag::PlusDelta, &nq)
                        || overruled()
                }
            }
        };
        if !ok {
            return Err(ReplayError {
                step: idx,
                tag: step.tag,
                literal: q.clone(),
            });
        }
        derived.push((step.tag, q.clone()));
    }
    Ok(())
}

struct Engine<'t> {
    theory: &'t Theory,
    literals: Vec<Literal>,
    index: HashMap<Literal, usize>,
    complement: Vec<usize>,
    strict: Vec<Vec<usize>>,
    supporting: Vec<Vec<usize>>,
    attacking: Vec<Vec<usize>>,
    body_ids: Vec<Vec<usize>>,
    plus_delta: Vec<Option<usize>>,
    minus_delta: Vec<Option<usize>>,
    plus_partial: Vec<Option<usize>>,
    minus_partial: Vec<Option<usize>>,
    trace: Vec<TraceStep>,
}

impl<'t> Engine<'t> {
    fn new(theory: &'t Theory) -> Engine<'t> {
        let mut literals: Vec<Literal> = Vec::new();
        let mut index: HashMap<Literal, usize> = HashMap::new();
        let mut intern = |lit: &Literal, literals: &mut Vec<Literal>| {
            if let Some(&i) = index.get(lit) {
                return i;
            }
            let i = literals.len();
            literals.push(lit.clone());
            index.insert(lit.clone(), i);
            i
        };
        for fact in theory.facts() {
            intern(fact, &mut literals);
        }
        for rule in theory.rules() {
            for lit in &rule.body {
                intern(lit, &mut literals);
            }
            intern(&rule.head, &mut literals);
        }
        let occurring = literals.len();
        for i in 0..occurring {
            let lit = literals[i].complement();
            intern(&lit, &mut literals);
        }

        let n = literals.len();
        let complement: Vec<usize> = (0..n).map(|i| index[&literals[i].complement()]).collect();

        let mut strict = vec![Vec::new(); n];
        let mut supporting = vec![Vec::new(); n];
        let mut attacking = vec![Vec::new(); n];
        let mut body_ids = Vec::with_capacity(theory.rules().len());
        for (r, rule) in theory.rules().iter().enumerate() {
            let head = index[&rule.head];
            attacking[head].push(r);
            if rule.kind == RuleKind::Strict {
                strict[head].push(r);
            }
            if rule.kind != RuleKind::Defeater {
                supporting[head].push(r);
            }
            body_ids.push(rule.body.iter().map(|l| index[l]).collect());
        }

        Engine {
            theory,
            literals,
            index,
            complement,
            strict,
            supporting,
            attacking,
            body_ids,
            plus_delta: vec![None; n],
            minus_delta: vec![None; n],
            plus_partial: vec![None; n],
            minus_partial: vec![None; n],
            trace: Vec::new(),
        }
    }

    fn label(&self, rule: usize) -> String {
        self.theory.rules()[rule].label.clone()
    }

    fn push(&mut self, tag: ProofTag, q: usize, reason: StepReason) {
        let step = self.trace.len();
        let slot = match tag {
            ProofTag::PlusDelta => &mut self.plus_delta[q],
            ProofTag::MinusDelta => &mut self.minus_delta[q],
            ProofTag::PlusPartial => &mut self.plus_partial[q],
            ProofTag::MinusPartial => &mut self.minus_partial[q],
        };
        debug_assert!(slot.is_none());
        *slot = Some(step);
        self.trace.push(TraceStep {
            tag,
            literal: self.literals[q].clone(),
            reason,
        });
    }

    /// A rule whose every body literal carries the given positive tag, with
    /// the witnessing steps.
    fn applicable(&self, rule: usize, tags: &[Option<usize>]) -> Option<Vec<usize>> {
        self.body_ids[rule]
            .iter()
            .map(|&a| tags[a])
            .collect::<Option<Vec<usize>>>()
    }

    /// A body literal carrying the given negative tag, as a witnessing step.
    fn blocked(&self, rule: usize, tags: &[Option<usize>]) -> Option<usize> {
        self.body_ids[rule].iter().find_map(|&a| tags[a])
    }

    fn try_plus_delta(&mut self, q: usize) -> bool {
        if self.plus_delta[q].is_some() {
            return false;
        }
        if self.theory.is_fact(&self.literals[q]) {
            self.push(ProofTag::PlusDelta, q, StepReason::Fact);
            return true;
        }
        for &r in &self.strict[q].clone() {
            if let Some(premises) = self.applicable(r, &self.plus_delta) {
                self.push(
                    ProofTag::PlusDelta,
                    q,
                    StepReason::StrictRule {
                        rule: self.label(r),
                        premises,
                    },
                );
                return true;
            }
        }
        false
    }

    fn try_minus_delta(&mut self, q: usize) -> bool {
        if self.minus_delta[q].is_some() || self.theory.is_fact(&self.literals[q]) {
            return false;
        }
        let mut blocked = Vec::with_capacity(self.strict[q].len());
        for &r in &self.strict[q] {
            match self.blocked(r, &self.minus_delta) {
                Some(witness) => blocked.push(BlockedRule {
                    rule: self.label(r),
                    witness,
                }),
                None => return false,
            }
        }
        self.push(ProofTag::MinusDelta, q, StepReason::NoDefiniteSupport { blocked });
        true
    }

    fn try_plus_partial(&mut self, q: usize) -> bool {
        if self.plus_partial[q].is_some() {
            return false;
        }
        if let Some(from) = self.plus_delta[q] {
            self.push(ProofTag::PlusPartial, q, StepReason::Definite { from });
            return true;
        }
        let nq = self.complement[q];
        let Some(complement_unprovable) = self.minus_delta[nq] else {
            return false;
        };
        let applicable: Vec<(usize, Vec<usize>)> = self.supporting[q]
            .iter()
            .filter_map(|&r| self.applicable(r, &self.plus_partial).map(|p| (r, p)))
            .collect();
        if applicable.is_empty() {
            return false;
        }
        let mut attackers = Vec::with_capacity(self.attacking[nq].len());
        for &s in &self.attacking[nq] {
            if let Some(witness) = self.blocked(s, &self.minus_partial) {
                attackers.push(AttackOutcome::Blocked {
                    attacker: self.label(s),
                    witness,
                });
            } else if let Some((t, premises)) = applicable
                .iter()
                .find(|(t, _)| self.theory.beats(*t, s))
                .cloned()
            {
                attackers.push(AttackOutcome::Beaten {
                    attacker: self.label(s),
                    by: self.label(t),
                    premises,
                });
            } else {
                return false;
            }
        }
        let (rule, premises) = applicable[0].clone();
        self.push(
            ProofTag::PlusPartial,
            q,
            StepReason::Supported {
                rule: self.label(rule),
                premises,
                complement_unprovable,
                attackers,
            },
        );
        true
    }

    fn try_minus_partial(&mut self, q: usize) -> bool {
        if self.minus_partial[q].is_some() {
            return false;
        }
        let Some(definite) = self.minus_delta[q] else {
            return false;
        };
        let nq = self.complement[q];

        let mut blocked = Vec::with_capacity(self.supporting[q].len());
        let mut all_blocked = true;
        for &r in &self.supporting[q] {
            match self.blocked(r, &self.minus_partial) {
                Some(witness) => blocked.push(BlockedRule {
                    rule: self.label(r),
                    witness,
                }),
                None => {
                    all_blocked = false;
                    break;
                }
            }
        }
        if all_blocked {
            self.push(
                ProofTag::MinusPartial,
                q,
                StepReason::Refuted {
                    definite,
                    ground: RefutationGround::AllRulesBlocked { blocked },
                },
            );
            return true;
        }

        if let Some(step) = self.plus_delta[nq] {
            self.push(
                ProofTag::MinusPartial,
                q,
                StepReason::Refuted {
                    definite,
                    ground: RefutationGround::ComplementDefinite { step },
                },
            );
            return true;
        }

        'attackers: for &s in &self.attacking[nq] {
            let Some(premises) = self.applicable(s, &self.plus_partial) else {
                continue;
            };
            let mut survivors = Vec::with_capacity(self.supporting[q].len());
            for &t in &self.supporting[q] {
                if let Some(witness) = self.blocked(t, &self.minus_partial) {
                    survivors.push(UnbeatenReason::BodyBlocked {
                        rule: self.label(t),
                        witness,
                    });
                } else if !self.theory.beats(t, s) {
                    survivors.push(UnbeatenReason::NotSuperior { rule: self.label(t) });
                } else {
                    continue 'attackers;
                }
            }
            self.push(
                ProofTag::MinusPartial,
                q,
                StepReason::Refuted {
                    definite,
                    ground: RefutationGround::Overruled {
                        attacker: self.label(s),
                        premises,
                        survivors,
                    },
                },
            );
            return true;
        }
        false
    }

    fn run(mut self) -> ConclusionSet {
        loop {
            let mut changed = false;
            for q in 0..self.literals.len() {
                changed |= self.try_plus_delta(q);
                changed |= self.try_minus_delta(q);
                changed |= self.try_plus_partial(q);
                changed |= self.try_minus_partial(q);
            }
            if !changed {
                break;
            }
        }

        let n = self.literals.len();
        let state = |plus: &[Option<usize>], minus: &[Option<usize>], i: usize| {
            debug_assert!(
                plus[i].is_none() || minus[i].is_none(),
                "both tags derived for {}",
                self.literals[i]
            );
            if plus[i].is_some() {
                TagState::ProvedPositive
            } else if minus[i].is_some() {
                TagState::ProvedNegative
            } else {
                TagState::Undetermined
            }
        };
        let delta = (0..n)
            .map(|i| state(&self.plus_delta, &self.minus_delta, i))
            .collect();
        let partial = (0..n)
            .map(|i| state(&self.plus_partial, &self.minus_partial, i))
            .collect();
        ConclusionSet {
            literals: self.literals,
            index: self.index,
            delta,
            partial,
            trace: self.trace,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_theory;

    fn lit(s: &str) -> Literal {
        s.parse().unwrap()
    }

    fn theory(text: &str) -> Theory {
        parse_theory(text).unwrap()
    }

    const CHAIN2: &str = ">> A0000002\nr1: A0000002 => A0000001\nr2: A0000001 => A0000000\n";

    #[test]
    fn defeasible_chain_proves_every_link() {
        let set = conclusions(&theory(CHAIN2));
        assert!(set.has(ProofTag::PlusDelta, &lit("A0000002")));
        assert!(set.has(ProofTag::PlusPartial, &lit("A0000002")));
        assert!(set.has(ProofTag::PlusPartial, &lit("A0000001")));
        assert!(set.has(ProofTag::PlusPartial, &lit("A0000000")));
        assert!(set.has(ProofTag::MinusDelta, &lit("A0000000")));
        assert!(set.has(ProofTag::MinusPartial, &lit("-A0000000")));
        assert_eq!(set.verdict(&lit("A0000000")), Verdict::ProvablyTrue);
    }

    #[test]
    fn strict_chain_proves_definitely() {
        let text = ">> A0000002\nr1: A0000002 -> A0000001\nr2: A0000001 -> A0000000\n";
        let set = conclusions(&theory(text));
        assert!(set.has(ProofTag::PlusDelta, &lit("A0000000")));
        assert!(set.has(ProofTag::PlusPartial, &lit("A0000000")));
    }

    #[test]
    fn defeasible_circle_stays_undetermined() {
        let text = "r1: A0000000 => A0000001\nr2: A0000001 => A0000000\n";
        let set = conclusions(&theory(text));
        for atom in ["A0000000", "A0000001"] {
            assert_eq!(set.partial(&lit(atom)), Some(TagState::Undetermined));
            assert_eq!(set.delta(&lit(atom)), Some(TagState::ProvedNegative));
            assert_eq!(set.verdict(&lit(atom)), Verdict::Undetermined);
        }
    }

    #[test]
    fn strict_circle_is_undetermined_in_both_families() {
        let text = "r1: A0000000 -> A0000001\nr2: A0000001 -> A0000000\n";
        let set = conclusions(&theory(text));
        for atom in ["A0000000", "A0000001"] {
            assert_eq!(set.delta(&lit(atom)), Some(TagState::Undetermined));
            assert_eq!(set.partial(&lit(atom)), Some(TagState::Undetermined));
        }
    }

    #[test]
    fn unchallenged_default_fires_and_challenged_one_is_refuted() {
        let text = "\
r1: => A0000001
r2: A0000002 => -A0000001
r3: => A0000000
r4: A0000001 => -A0000000
";
        let set = conclusions(&theory(text));
        assert!(set.has(ProofTag::PlusPartial, &lit("A0000001")));
        assert!(set.has(ProofTag::MinusPartial, &lit("A0000000")));
        assert_eq!(set.verdict(&lit("A0000000")), Verdict::Undetermined);
    }

    #[test]
    fn superiority_resolves_the_conflict() {
        let text = "\
>> A0000002
r1: => A0000001
r2: A0000002 => -A0000001
r2 > r1
";
        let set = conclusions(&theory(text));
        assert!(set.has(ProofTag::PlusPartial, &lit("-A0000001")));
        assert!(set.has(ProofTag::MinusPartial, &lit("A0000001")));
        assert_eq!(set.verdict(&lit("A0000001")), Verdict::ProvablyFalse);
    }

    #[test]
    fn defeater_blocks_but_never_supports() {
        let text = ">> b\nr1: => a\nr2: b ~> -a\n";
        let set = conclusions(&theory(text));
        assert!(!set.has(ProofTag::PlusPartial, &lit("a")));
        assert!(set.has(ProofTag::MinusPartial, &lit("a")));
        assert!(!set.has(ProofTag::PlusPartial, &lit("-a")));
        assert!(set.has(ProofTag::MinusPartial, &lit("-a")));
        assert_eq!(set.verdict(&lit("a")), Verdict::Undetermined);
    }

    #[test]
    fn superior_rule_overcomes_defeater() {
        let text = ">> b\nr1: => a\nr2: b ~> -a\nr1 > r2\n";
        let set = conclusions(&theory(text));
        assert!(set.has(ProofTag::PlusPartial, &lit("a")));
        assert_eq!(set.verdict(&lit("a")), Verdict::ProvablyTrue);
    }

    #[test]
    fn contradictory_facts_are_both_definite() {
        let set = conclusions(&theory(">> p\n>> -p\n"));
        assert!(set.has(ProofTag::PlusDelta, &lit("p")));
        assert!(set.has(ProofTag::PlusDelta, &lit("-p")));
        assert!(set.has(ProofTag::PlusPartial, &lit("p")));
        assert!(set.has(ProofTag::PlusPartial, &lit("-p")));
        assert!(!set.has(ProofTag::MinusPartial, &lit("p")));
    }

    #[test]
    fn empty_theory_has_empty_conclusions() {
        let set = conclusions(&Theory::empty());
        assert!(set.universe().is_empty());
        assert!(set.trace().is_empty());
    }

    #[test]
    fn query_ignores_unknown_atoms() {
        assert_eq!(query(&theory(CHAIN2), &lit("X")), Verdict::Undetermined);
    }

    #[test]
    fn conclusions_are_deterministic() {
        let t = theory(CHAIN2);
        assert_eq!(conclusions(&t), conclusions(&t));
    }

    #[test]
    fn universe_lists_occurring_literals_before_complements() {
        let set = conclusions(&theory(CHAIN2));
        let names: Vec<String> = set.universe().iter().map(|l| l.to_string()).collect();
        assert_eq!(
            names,
            vec!["A0000002", "A0000001", "A0000000", "-A0000002", "-A0000001", "-A0000000"]
        );
    }

    #[test]
    fn explain_chain_ends_at_defeasible_root_and_replays() {
        let t = theory(CHAIN2);
        let trace = explain(&t, &lit("A0000000")).unwrap();
        assert_eq!(trace.target().tag, ProofTag::PlusPartial);
        assert_eq!(trace.target().literal, lit("A0000000"));
        validate_trace(&t, &trace.steps).unwrap();
        let has = |tag, l: &str| {
            trace
                .steps
                .iter()
                .any(|s| s.tag == tag && s.literal == lit(l))
        };
        assert!(has(ProofTag::PlusDelta, "A0000002"));
        assert!(has(ProofTag::PlusPartial, "A0000002"));
        assert!(has(ProofTag::PlusPartial, "A0000001"));
    }

    #[test]
    fn explain_prefers_the_definite_tag() {
        let trace = explain(&theory(">> p\n"), &lit("p")).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.target().tag, ProofTag::PlusDelta);
        assert_eq!(trace.target().reason, StepReason::Fact);
    }

    #[test]
    fn explain_refusal_on_defeasibly_undetermined_literal() {
        let text = "r1: A0000000 => A0000001\nr2: A0000001 => A0000000\n";
        assert_eq!(
            explain(&theory(text), &lit("A0000000")),
            Err(ExplainError::NoDerivation(lit("A0000000")))
        );
    }

    #[test]
    fn explain_renders_refutations_and_replays() {
        let text = "r1: => A0000001\nr2: A0000002 => -A0000001\nr3: A0000001 => -A0000000\nr4: => A0000000\n";
        let t = theory(text);
        let trace = explain(&t, &lit("A0000000")).unwrap();
        assert_eq!(trace.target().tag, ProofTag::MinusPartial);
        validate_trace(&t, &trace.steps).unwrap();
        assert!(trace.render().contains("overruled by r3"));
    }

    #[test]
    fn replay_rejects_unjustified_steps() {
        let t = theory(CHAIN2);
        let bogus = vec![TraceStep {
            tag: ProofTag::PlusPartial,
            literal: lit("A0000000"),
            reason: StepReason::Fact,
        }];
        let err = validate_trace(&t, &bogus).unwrap_err();
        assert_eq!(err.step, 0);
    }

    #[test]
    fn replay_rejects_reordered_traces() {
        let t = theory(CHAIN2);
        let mut steps = explain(&t, &lit("A0000000")).unwrap().steps;
        steps.reverse();
        assert!(validate_trace(&t, &steps).is_err());
    }
}
