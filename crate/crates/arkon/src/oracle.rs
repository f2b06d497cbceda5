//! Goal-directed reference prover, independent of the fixpoint engine.
//!
//! The oracle evaluates the same four inference conditions top-down: to prove
//! a tagged literal it recursively proves the tagged literals the condition
//! mentions. A goal already on the call path is treated as unprovable on that
//! branch, which is sound and complete here because every condition refers to
//! other tagged literals positively, so the derivable set is a least fixpoint
//! and any derivable goal has a proof tree with no repeated goal along a
//! branch. Successful goals are memoized; failures are not, since a failure
//! under a loop check is relative to the path that produced it.
//!
//! The implementation is deliberately the textbook reading of the conditions,
//! with no indexes or incremental state, so that agreement between the two
//! provers is meaningful evidence. It is exponential in the worst case and
//! refuses theories with many atoms; use [`crate::reasoner`] for real work.

use std::collections::HashSet;

use thiserror::Error;

use crate::reasoner::{ProofTag, Verdict};
use crate::theory::{Literal, RuleClass, Theory};

/// Largest number of distinct atoms the oracle accepts.
pub const ATOM_LIMIT: usize = 40;

const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("theory has {atoms} distinct atoms, above the oracle limit of {limit}")]
    TheoryTooLarge { atoms: usize, limit: usize },
    #[error("proof search exceeded the budget of {budget} steps")]
    BudgetExhausted { budget: u64 },
}

/// A goal-directed prover over one theory.
pub struct Oracle<'t> {
    theory: &'t Theory,
    proved: HashSet<(ProofTag, Literal)>,
    budget: u64,
    steps: u64,
}

impl<'t> Oracle<'t> {
    pub fn new(theory: &'t Theory) -> Result<Oracle<'t>, OracleError> {
        Oracle::with_budget(theory, DEFAULT_BUDGET)
    }

    pub fn with_budget(theory: &'t Theory, budget: u64) -> Result<Oracle<'t>, OracleError> {
        let atoms = theory.atoms().len();
        if atoms > ATOM_LIMIT {
            return Err(OracleError::TheoryTooLarge {
                atoms,
                limit: ATOM_LIMIT,
            });
        }
        Ok(Oracle {
            theory,
            proved: HashSet::new(),
            budget,
            steps: 0,
        })
    }

    /// Whether the tagged literal is derivable.
    pub fn derivable(&mut self, tag: ProofTag, lit: &Literal) -> Result<bool, OracleError> {
        let mut path = Vec::new();
        self.prove(tag, lit, &mut path)
    }

    /// Three-valued answer for `q`, matching [`crate::reasoner::query`].
    pub fn verdict(&mut self, q: &Literal) -> Result<Verdict, OracleError> {
        if self.derivable(ProofTag::PlusPartial, q)? {
            Ok(Verdict::ProvablyTrue)
        } else if self.derivable(ProofTag::PlusPartial, &q.complement())? {
            Ok(Verdict::ProvablyFalse)
        } else {
            Ok(Verdict::Undetermined)
        }
    }

    fn prove(
        &mut self,
        tag: ProofTag,
        lit: &Literal,
        path: &mut Vec<(ProofTag, Literal)>,
    ) -> Result<bool, OracleError> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(OracleError::BudgetExhausted {
                budget: self.budget,
            });
        }
        let goal = (tag, lit.clone());
        if self.proved.contains(&goal) {
            return Ok(true);
        }
        if path.contains(&goal) {
            return Ok(false);
        }
        path.push(goal.clone());
        let result = match tag {
            ProofTag::PlusDelta => self.plus_delta(lit, path),
            ProofTag::MinusDelta => self.minus_delta(lit, path),
            ProofTag::PlusPartial => self.plus_partial(lit, path),
            ProofTag::MinusPartial => self.minus_partial(lit, path),
        };
        path.pop();
        if result == Ok(true) {
            self.proved.insert(goal);
        }
        result
    }

    fn all(
        &mut self,
        tag: ProofTag,
        body: &[Literal],
        path: &mut Vec<(ProofTag, Literal)>,
    ) -> Result<bool, OracleError> {
        for lit in body {
            if !self.prove(tag, lit, path)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn any(
        &mut self,
        tag: ProofTag,
        body: &[Literal],
        path: &mut Vec<(ProofTag, Literal)>,
    ) -> Result<bool, OracleError> {
        for lit in body {
            if self.prove(tag, lit, path)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn plus_delta(
        &mut self,
        q: &Literal,
        path: &mut Vec<(ProofTag, Literal)>,
    ) -> Result<bool, OracleError> {
        if self.theory.is_fact(q) {
            return Ok(true);
        }
        for r in self.theory.rule_indexes_for(q, RuleClass::Strict) {
            let body = self.theory.rules()[r].body.clone();
            if self.all(ProofTag::PlusDelta, &body, path)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn minus_delta(
        &mut self,
        q: &Literal,
        path: &mut Vec<(ProofTag, Literal)>,
    ) -> Result<bool, OracleError> {
        if self.theory.is_fact(q) {
            return Ok(false);
        }
        for r in self.theory.rule_indexes_for(q, RuleClass::Strict) {
            let body = self.theory.rules()[r].body.clone();
            if !self.any(ProofTag::MinusDelta, &body, path)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn plus_partial(
        &mut self,
        q: &Literal,
        path: &mut Vec<(ProofTag, Literal)>,
    ) -> Result<bool, OracleError> {
        if self.prove(ProofTag::PlusDelta, q, path)? {
            return Ok(true);
        }
        let nq = q.complement();
        if !self.prove(ProofTag::MinusDelta, &nq, path)? {
            return Ok(false);
        }
        let supporters = self.theory.rule_indexes_for(q, RuleClass::StrictOrDefeasible);
        let mut some_applicable = false;
        for &r in &supporters {
            let body = self.theory.rules()[r].body.clone();
            if self.all(ProofTag::PlusPartial, &body, path)? {
                some_applicable = true;
                break;
            }
        }
        if !some_applicable {
            return Ok(false);
        }
        'attackers: for s in self.theory.rule_indexes_for(&nq, RuleClass::All) {
            let body = self.theory.rules()[s].body.clone();
            if self.any(ProofTag::MinusPartial, &body, path)? {
                continue;
            }
            for &t in &supporters {
                if !self.theory.beats(t, s) {
                    continue;
                }
                let body = self.theory.rules()[t].body.clone();
                if self.all(ProofTag::PlusPartial, &body, path)? {
                    continue 'attackers;
                }
            }
            return Ok(false);
        }
        Ok(true)
    }

    fn minus_partial(
        &mut self,
        q: &Literal,
        path: &mut Vec<(ProofTag, Literal)>,
    ) -> Result<bool, OracleError> {
        if !self.prove(ProofTag::MinusDelta, q, path)? {
            return Ok(false);
        }
        let nq = q.complement();
        let supporters = self.theory.rule_indexes_for(q, RuleClass::StrictOrDefeasible);

        let mut all_blocked = true;
        for &r in &supporters {
            let body = self.theory.rules()[r].body.clone();
            if !self.any(ProofTag::MinusPartial, &body, path)? {
                all_blocked = false;
                break;
            }
        }
        if all_blocked {
            return Ok(true);
        }

        if self.prove(ProofTag::PlusDelta, &nq, path)? {
            return Ok(true);
        }

        'attackers: for s in self.theory.rule_indexes_for(&nq, RuleClass::All) {
            let body = self.theory.rules()[s].body.clone();
            if !self.all(ProofTag::PlusPartial, &body, path)? {
                continue;
            }
            for &t in &supporters {
                if !self.theory.beats(t, s) {
                    continue;
                }
                let body = self.theory.rules()[t].body.clone();
                if !self.any(ProofTag::MinusPartial, &body, path)? {
                    continue 'attackers;
                }
            }
            return Ok(true);
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_theory;
    use crate::reasoner::{conclusions, ProofTag};

    fn lit(s: &str) -> Literal {
        s.parse().unwrap()
    }

    fn theory(text: &str) -> Theory {
        parse_theory(text).unwrap()
    }

    #[test]
    fn proves_a_defeasible_chain() {
        let t = theory(">> c\nr1: c => b\nr2: b => a\n");
        let mut oracle = Oracle::new(&t).unwrap();
        assert!(oracle.derivable(ProofTag::PlusPartial, &lit("a")).unwrap());
        assert!(oracle.derivable(ProofTag::MinusDelta, &lit("a")).unwrap());
        assert!(!oracle.derivable(ProofTag::PlusDelta, &lit("a")).unwrap());
        assert_eq!(oracle.verdict(&lit("a")).unwrap(), Verdict::ProvablyTrue);
    }

    #[test]
    fn circular_support_proves_nothing() {
        let t = theory("r1: a => b\nr2: b => a\n");
        let mut oracle = Oracle::new(&t).unwrap();
        for atom in ["a", "b"] {
            assert!(!oracle.derivable(ProofTag::PlusPartial, &lit(atom)).unwrap());
            assert!(!oracle.derivable(ProofTag::MinusPartial, &lit(atom)).unwrap());
            assert!(oracle.derivable(ProofTag::MinusDelta, &lit(atom)).unwrap());
            assert_eq!(oracle.verdict(&lit(atom)).unwrap(), Verdict::Undetermined);
        }
    }

    #[test]
    fn defeater_attacks_without_supporting() {
        let t = theory(">> b\nr1: => a\nr2: b ~> -a\n");
        let mut oracle = Oracle::new(&t).unwrap();
        assert!(!oracle.derivable(ProofTag::PlusPartial, &lit("a")).unwrap());
        assert!(oracle.derivable(ProofTag::MinusPartial, &lit("a")).unwrap());
        assert!(!oracle.derivable(ProofTag::PlusPartial, &lit("-a")).unwrap());
        assert!(oracle.derivable(ProofTag::MinusPartial, &lit("-a")).unwrap());
    }

    #[test]
    fn agrees_with_the_fixpoint_engine_on_a_priority_conflict() {
        let t = theory(">> c\nr1: => a\nr2: c => -a\nr2 > r1\n");
        let set = conclusions(&t);
        let mut oracle = Oracle::new(&t).unwrap();
        for lit in set.universe() {
            for tag in ProofTag::ALL {
                assert_eq!(
                    oracle.derivable(tag, lit).unwrap(),
                    set.has(tag, lit),
                    "disagreement on {tag} {lit}"
                );
            }
        }
    }

    #[test]
    fn literals_outside_the_theory_are_refutable_only() {
        let t = theory(">> a\n");
        let mut oracle = Oracle::new(&t).unwrap();
        assert!(!oracle.derivable(ProofTag::PlusDelta, &lit("zzz")).unwrap());
        assert!(oracle.derivable(ProofTag::MinusDelta, &lit("zzz")).unwrap());
        assert!(!oracle.derivable(ProofTag::PlusPartial, &lit("zzz")).unwrap());
        assert!(oracle.derivable(ProofTag::MinusPartial, &lit("zzz")).unwrap());
    }

    #[test]
    fn rejects_theories_with_too_many_atoms() {
        let text: String = (0..=ATOM_LIMIT)
            .map(|i| format!(">> p{i}\n"))
            .collect();
        let t = theory(&text);
        let err = Oracle::new(&t).err().expect("expected size refusal");
        assert_eq!(
            err,
            OracleError::TheoryTooLarge {
                atoms: ATOM_LIMIT + 1,
                limit: ATOM_LIMIT,
            }
        );
    }

    #[test]
    fn reports_budget_exhaustion() {
        let t = theory(">> c\nr1: c => b\nr2: b => a\n");
        let mut oracle = Oracle::with_budget(&t, 3).unwrap();
        assert_eq!(
            oracle.derivable(ProofTag::PlusPartial, &lit("a")),
            Err(OracleError::BudgetExhausted { budget: 3 })
        );
    }
}
