//! Core model for defeasible theories: atoms, literals, rules, and the
//! superiority relation, plus validated construction and head-indexed lookup.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A propositional atom. Names match `[A-Za-z][A-Za-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Atom(String);

impl Atom {
    /// Creates an atom, validating the name.
    pub fn new(name: impl Into<String>) -> Result<Atom, TheoryError> {
        let name = name.into();
        if Atom::is_valid(&name) {
            Ok(Atom(name))
        } else {
            Err(TheoryError::InvalidAtom(name))
        }
    }

    /// Returns true if `name` is a well-formed atom name.
    pub fn is_valid(name: &str) -> bool {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {
                chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            }
            _ => false,
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for Atom {
    type Error = TheoryError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Atom::new(value)
    }
}

impl From<Atom> for String {
    fn from(atom: Atom) -> String {
        atom.0
    }
}

/// An atom or its negation. Displays as `name` or `-name`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn positive(atom: Atom) -> Literal {
        Literal { atom, positive: true }
    }

    pub fn negative(atom: Atom) -> Literal {
        Literal { atom, positive: false }
    }

    /// The complement: flips the sign, leaves the atom unchanged.
    pub fn complement(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("-")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl FromStr for Literal {
    type Err = TheoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.strip_prefix('-') {
            Some(rest) => Ok(Literal::negative(Atom::new(rest)?)),
            None => Ok(Literal::positive(Atom::new(s)?)),
        }
    }
}

impl TryFrom<String> for Literal {
    type Error = TheoryError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<Literal> for String {
    fn from(lit: Literal) -> String {
        lit.to_string()
    }
}

/// How strongly a rule supports its head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    /// `->`: fires whenever the body is definitely proved.
    Strict,
    /// `=>`: fires unless defeated by a superior or unrefuted attacker.
    Defeasible,
    /// `~>`: can only block opposite conclusions, never support its head.
    Defeater,
}

impl RuleKind {
    /// The arrow token used in theory files.
    pub fn arrow(self) -> &'static str {
        match self {
            RuleKind::Strict => "->",
            RuleKind::Defeasible => "=>",
            RuleKind::Defeater => "~>",
        }
    }
}

/// A labelled rule `label: body arrow head`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub label: String,
    pub body: Vec<Literal>,
    pub head: Literal,
    pub kind: RuleKind,
}

impl Rule {
    pub fn new(
        label: impl Into<String>,
        body: Vec<Literal>,
        head: Literal,
        kind: RuleKind,
    ) -> Rule {
        Rule {
            label: label.into(),
            body,
            head,
            kind,
        }
    }

    pub fn strict(label: impl Into<String>, body: Vec<Literal>, head: Literal) -> Rule {
        Rule::new(label, body, head, RuleKind::Strict)
    }

    pub fn defeasible(label: impl Into<String>, body: Vec<Literal>, head: Literal) -> Rule {
        Rule::new(label, body, head, RuleKind::Defeasible)
    }

    pub fn defeater(label: impl Into<String>, body: Vec<Literal>, head: Literal) -> Rule {
        Rule::new(label, body, head, RuleKind::Defeater)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.label)?;
        if !self.body.is_empty() {
            let body: Vec<String> = self.body.iter().map(|l| l.to_string()).collect();
            write!(f, " {}", body.join(", "))?;
        }
        write!(f, " {} {}", self.kind.arrow(), self.head)
    }
}

/// One declared priority: `superior > inferior` between rule labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SuperiorityPair {
    pub superior: String,
    pub inferior: String,
}

impl SuperiorityPair {
    pub fn new(superior: impl Into<String>, inferior: impl Into<String>) -> SuperiorityPair {
        SuperiorityPair {
            superior: superior.into(),
            inferior: inferior.into(),
        }
    }
}

impl fmt::Display for SuperiorityPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} > {}", self.superior, self.inferior)
    }
}

/// Which rules to fetch when looking up a head.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleClass {
    /// Strict, defeasible, and defeater rules.
    All,
    /// Strict rules only.
    Strict,
    /// Strict and defeasible rules (the ones that can support a conclusion).
    StrictOrDefeasible,
}

/// Problems that make a theory ill-formed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("invalid atom name {0:?}")]
    InvalidAtom(String),
    #[error("invalid rule label {0:?}")]
    InvalidLabel(String),
    #[error("duplicate rule label {0:?}")]
    DuplicateLabel(String),
    #[error("superiority pair references unknown rule label {0:?}")]
    UnknownLabelInSuperiority(String),
    #[error("rule {0:?} declared superior to itself")]
    SelfSuperiority(String),
    #[error("superiority relation contains a cycle through {0}")]
    CyclicSuperiority(String),
}

/// Non-fatal oddities found while building a theory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildWarning {
    /// A body listed the same literal twice; the duplicate was dropped.
    DuplicateBodyLiteral { rule: String, literal: Literal },
    /// A fact was declared twice; the duplicate was dropped.
    DuplicateFact(Literal),
    /// The same superiority pair was declared twice; the duplicate was dropped.
    DuplicateSuperiority(SuperiorityPair),
    /// Both a literal and its complement are facts.
    ComplementaryFacts(Atom),
}

impl fmt::Display for BuildWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildWarning::DuplicateBodyLiteral { rule, literal } => {
                write!(f, "rule {rule} lists body literal {literal} more than once")
            }
            BuildWarning::DuplicateFact(lit) => write!(f, "fact {lit} declared more than once"),
            BuildWarning::DuplicateSuperiority(pair) => {
                write!(f, "superiority pair {pair} declared more than once")
            }
            BuildWarning::ComplementaryFacts(atom) => {
                write!(f, "both {atom} and -{atom} are facts")
            }
        }
    }
}

/// A defeasible theory: facts, rules, and an acyclic superiority relation.
///
/// Construction validates label uniqueness and the superiority relation and
/// builds a head index for rule lookup. Declaration order of facts and rules
/// is preserved; it drives printing, translation, and trace determinism.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "TheoryParts", into = "TheoryParts")]
pub struct Theory {
    facts: Vec<Literal>,
    rules: Vec<Rule>,
    superiority: Vec<SuperiorityPair>,
    #[serde(skip)]
    fact_set: HashSet<Literal>,
    #[serde(skip)]
    by_head: HashMap<Literal, Vec<usize>>,
    #[serde(skip)]
    label_index: HashMap<String, usize>,
    #[serde(skip)]
    superior_pairs: HashSet<(usize, usize)>,
}

/// Serde surface for [`Theory`]: the three declared sections.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct TheoryParts {
    facts: Vec<Literal>,
    rules: Vec<Rule>,
    superiority: Vec<SuperiorityPair>,
}

impl TryFrom<TheoryParts> for Theory {
    type Error = TheoryError;

    fn try_from(parts: TheoryParts) -> Result<Self, Self::Error> {
        Theory::build(parts.facts, parts.rules, parts.superiority)
    }
}

impl From<Theory> for TheoryParts {
    fn from(theory: Theory) -> TheoryParts {
        TheoryParts {
            facts: theory.facts,
            rules: theory.rules,
            superiority: theory.superiority,
        }
    }
}

impl Theory {
    /// Builds a theory, discarding warnings.
    pub fn build(
        facts: Vec<Literal>,
        rules: Vec<Rule>,
        superiority: Vec<SuperiorityPair>,
    ) -> Result<Theory, TheoryError> {
        Theory::build_with_warnings(facts, rules, superiority).map(|(theory, _)| theory)
    }

    /// Builds a theory and reports duplicates that were dropped.
    pub fn build_with_warnings(
        facts: Vec<Literal>,
        rules: Vec<Rule>,
        superiority: Vec<SuperiorityPair>,
    ) -> Result<(Theory, Vec<BuildWarning>), TheoryError> {
        let mut warnings = Vec::new();

        let mut fact_set = HashSet::new();
        let mut kept_facts = Vec::with_capacity(facts.len());
        for fact in facts {
            if fact_set.insert(fact.clone()) {
                kept_facts.push(fact);
            } else {
                warnings.push(BuildWarning::DuplicateFact(fact));
            }
        }
        let mut flagged_atoms = HashSet::new();
        for fact in &kept_facts {
            if fact_set.contains(&fact.complement()) && flagged_atoms.insert(fact.atom.clone()) {
                warnings.push(BuildWarning::ComplementaryFacts(fact.atom.clone()));
            }
        }

        let mut label_index = HashMap::new();
        let mut kept_rules = Vec::with_capacity(rules.len());
        for (idx, mut rule) in rules.into_iter().enumerate() {
            if !is_valid_label(&rule.label) {
                return Err(TheoryError::InvalidLabel(rule.label));
            }
            if label_index.insert(rule.label.clone(), idx).is_some() {
                return Err(TheoryError::DuplicateLabel(rule.label));
            }
            let mut seen = HashSet::new();
            let mut body = Vec::with_capacity(rule.body.len());
            for lit in rule.body.drain(..) {
                if seen.insert(lit.clone()) {
                    body.push(lit);
                } else {
                    warnings.push(BuildWarning::DuplicateBodyLiteral {
                        rule: rule.label.clone(),
                        literal: lit,
                    });
                }
            }
            rule.body = body;
            kept_rules.push(rule);
        }

        let mut superior_pairs = HashSet::new();
        let mut kept_pairs = Vec::with_capacity(superiority.len());
        for pair in superiority {
            let sup = *label_index
                .get(&pair.superior)
                .ok_or_else(|| TheoryError::UnknownLabelInSuperiority(pair.superior.clone()))?;
            let inf = *label_index
                .get(&pair.inferior)
                .ok_or_else(|| TheoryError::UnknownLabelInSuperiority(pair.inferior.clone()))?;
            if sup == inf {
                return Err(TheoryError::SelfSuperiority(pair.superior));
            }
            if superior_pairs.insert((sup, inf)) {
                kept_pairs.push(pair);
            } else {
                warnings.push(BuildWarning::DuplicateSuperiority(pair));
            }
        }

        check_acyclic(&kept_rules, &superior_pairs)?;

        let mut by_head: HashMap<Literal, Vec<usize>> = HashMap::new();
        for (idx, rule) in kept_rules.iter().enumerate() {
            by_head.entry(rule.head.clone()).or_default().push(idx);
        }

        Ok((
            Theory {
                facts: kept_facts,
                rules: kept_rules,
                superiority: kept_pairs,
                fact_set,
                by_head,
                label_index,
                superior_pairs,
            },
            warnings,
        ))
    }

    /// The empty theory.
    pub fn empty() -> Theory {
        Theory::build(Vec::new(), Vec::new(), Vec::new()).expect("empty theory is valid")
    }

    pub fn facts(&self) -> &[Literal] {
        &self.facts
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn superiority(&self) -> &[SuperiorityPair] {
        &self.superiority
    }

    /// True if `lit` is a declared fact.
    pub fn is_fact(&self, lit: &Literal) -> bool {
        self.fact_set.contains(lit)
    }

    /// Rule positions (declaration order) whose head is `head`, filtered by class.
    pub fn rule_indexes_for(&self, head: &Literal, class: RuleClass) -> Vec<usize> {
        let Some(indexes) = self.by_head.get(head) else {
            return Vec::new();
        };
        indexes
            .iter()
            .copied()
            .filter(|&i| match class {
                RuleClass::All => true,
                RuleClass::Strict => self.rules[i].kind == RuleKind::Strict,
                RuleClass::StrictOrDefeasible => self.rules[i].kind != RuleKind::Defeater,
            })
            .collect()
    }

    /// Rules whose head is `head`, filtered by class, in declaration order.
    pub fn rules_for(&self, head: &Literal, class: RuleClass) -> Vec<&Rule> {
        self.rule_indexes_for(head, class)
            .into_iter()
            .map(|i| &self.rules[i])
            .collect()
    }

    /// Position of the rule with this label, if any.
    pub fn rule_index(&self, label: &str) -> Option<usize> {
        self.label_index.get(label).copied()
    }

    /// True if the rule at `superior` was declared superior to the rule at
    /// `inferior`. Only declared pairs count; superiority is not transitive.
    pub fn beats(&self, superior: usize, inferior: usize) -> bool {
        self.superior_pairs.contains(&(superior, inferior))
    }

    /// Superiors of the rule at `inferior`, in pair declaration order.
    pub fn superiors_of(&self, inferior: usize) -> Vec<usize> {
        self.superiority
            .iter()
            .filter(|pair| self.label_index[&pair.inferior] == inferior)
            .map(|pair| self.label_index[&pair.superior])
            .collect()
    }

    /// Every distinct atom occurring in facts, bodies, and heads.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut seen = HashSet::new();
        let mut atoms = Vec::new();
        let mut push = |atom: &Atom| {
            if seen.insert(atom.clone()) {
                atoms.push(atom.clone());
            }
        };
        for fact in &self.facts {
            push(&fact.atom);
        }
        for rule in &self.rules {
            for lit in &rule.body {
                push(&lit.atom);
            }
            push(&rule.head.atom);
        }
        atoms
    }
}

impl PartialEq for Theory {
    /// Facts and rules compare positionally; superiority compares as a set,
    /// since printing may reposition pair lines.
    fn eq(&self, other: &Theory) -> bool {
        let mut ours: Vec<_> = self.superiority.clone();
        let mut theirs: Vec<_> = other.superiority.clone();
        ours.sort();
        theirs.sort();
        self.facts == other.facts && self.rules == other.rules && ours == theirs
    }
}

impl Eq for Theory {}

/// Rule labels share the atom name syntax.
pub fn is_valid_label(label: &str) -> bool {
    Atom::is_valid(label)
}

fn check_acyclic(rules: &[Rule], pairs: &HashSet<(usize, usize)>) -> Result<(), TheoryError> {
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); rules.len()];
    let mut indegree = vec![0usize; rules.len()];
    for &(sup, inf) in pairs {
        adjacency[sup].push(inf);
        indegree[inf] += 1;
    }
    let mut queue: Vec<usize> = (0..rules.len()).filter(|&i| indegree[i] == 0).collect();
    let mut visited = 0;
    while let Some(node) = queue.pop() {
        visited += 1;
        for &next in &adjacency[node] {
            indegree[next] -= 1;
            if indegree[next] == 0 {
                queue.push(next);
            }
        }
    }
    if visited == rules.len() {
        Ok(())
    } else {
        let stuck = (0..rules.len())
            .find(|&i| indegree[i] > 0)
            .map(|i| rules[i].label.clone())
            .unwrap_or_default();
        Err(TheoryError::CyclicSuperiority(stuck))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(s: &str) -> Literal {
        s.parse().unwrap()
    }

    #[test]
    fn atom_names_are_validated() {
        assert!(Atom::new("A0000001").is_ok());
        assert!(Atom::new("p_1").is_ok());
        assert!(Atom::new("").is_err());
        assert!(Atom::new("1p").is_err());
        assert!(Atom::new("a-b").is_err());
    }

    #[test]
    fn literal_display_and_parse_round_trip() {
        for text in ["A0000001", "-A0000001", "p", "-p"] {
            assert_eq!(lit(text).to_string(), text);
        }
    }

    #[test]
    fn complement_flips_sign_only() {
        let a = lit("A0000001");
        assert_eq!(a.complement(), lit("-A0000001"));
        assert_eq!(a.complement().complement(), a);
    }

    #[test]
    fn duplicate_labels_are_rejected() {
        let rules = vec![
            Rule::defeasible("r1", vec![], lit("a")),
            Rule::defeasible("r1", vec![], lit("b")),
        ];
        assert_eq!(
            Theory::build(vec![], rules, vec![]),
            Err(TheoryError::DuplicateLabel("r1".into()))
        );
    }

    #[test]
    fn superiority_must_reference_known_labels() {
        let rules = vec![Rule::defeasible("r1", vec![], lit("a"))];
        let pairs = vec![SuperiorityPair::new("r1", "r9")];
        assert_eq!(
            Theory::build(vec![], rules, pairs),
            Err(TheoryError::UnknownLabelInSuperiority("r9".into()))
        );
    }

    #[test]
    fn self_superiority_is_rejected() {
        let rules = vec![Rule::defeasible("r1", vec![], lit("a"))];
        let pairs = vec![SuperiorityPair::new("r1", "r1")];
        assert_eq!(
            Theory::build(vec![], rules, pairs),
            Err(TheoryError::SelfSuperiority("r1".into()))
        );
    }

    #[test]
    fn two_cycle_in_superiority_is_rejected() {
        let rules = vec![
            Rule::defeasible("r1", vec![], lit("a")),
            Rule::defeasible("r2", vec![], lit("-a")),
        ];
        let pairs = vec![
            SuperiorityPair::new("r1", "r2"),
            SuperiorityPair::new("r2", "r1"),
        ];
        assert!(matches!(
            Theory::build(vec![], rules, pairs),
            Err(TheoryError::CyclicSuperiority(_))
        ));
    }

    #[test]
    fn duplicate_body_literals_are_dropped_with_warning() {
        let rules = vec![Rule::defeasible("r1", vec![lit("b"), lit("b")], lit("a"))];
        let (theory, warnings) = Theory::build_with_warnings(vec![], rules, vec![]).unwrap();
        assert_eq!(theory.rules()[0].body, vec![lit("b")]);
        assert_eq!(
            warnings,
            vec![BuildWarning::DuplicateBodyLiteral {
                rule: "r1".into(),
                literal: lit("b"),
            }]
        );
    }

    #[test]
    fn complementary_facts_are_accepted_and_flagged() {
        let (theory, warnings) =
            Theory::build_with_warnings(vec![lit("p"), lit("-p")], vec![], vec![]).unwrap();
        assert_eq!(theory.facts().len(), 2);
        assert_eq!(warnings, vec![BuildWarning::ComplementaryFacts(Atom::new("p").unwrap())]);
    }

    #[test]
    fn empty_theory_builds() {
        let theory = Theory::empty();
        assert!(theory.facts().is_empty());
        assert!(theory.rules().is_empty());
        assert!(theory.superiority().is_empty());
    }

    #[test]
    fn rules_for_filters_by_class() {
        let rules = vec![
            Rule::strict("r1", vec![], lit("a")),
            Rule::defeasible("r2", vec![], lit("a")),
            Rule::defeater("r3", vec![], lit("a")),
            Rule::defeasible("r4", vec![], lit("-a")),
        ];
        let theory = Theory::build(vec![], rules, vec![]).unwrap();
        let labels = |class| {
            theory
                .rules_for(&lit("a"), class)
                .iter()
                .map(|r| r.label.clone())
                .collect::<Vec<_>>()
        };
        assert_eq!(labels(RuleClass::All), vec!["r1", "r2", "r3"]);
        assert_eq!(labels(RuleClass::Strict), vec!["r1"]);
        assert_eq!(labels(RuleClass::StrictOrDefeasible), vec!["r1", "r2"]);
        assert!(theory.rules_for(&lit("b"), RuleClass::All).is_empty());
    }

    #[test]
    fn beats_uses_declared_pairs_only() {
        let rules = vec![
            Rule::defeasible("r1", vec![], lit("a")),
            Rule::defeasible("r2", vec![], lit("-a")),
            Rule::defeasible("r3", vec![], lit("a")),
        ];
        let pairs = vec![
            SuperiorityPair::new("r1", "r2"),
            SuperiorityPair::new("r2", "r3"),
        ];
        let theory = Theory::build(vec![], rules, pairs).unwrap();
        assert!(theory.beats(0, 1));
        assert!(theory.beats(1, 2));
        assert!(!theory.beats(0, 2), "no transitive closure");
        assert!(!theory.beats(1, 0));
    }
}
