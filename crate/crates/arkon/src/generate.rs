//! Parameterised benchmark theory families with known ground truths.
//!
//! Eight scalable families are generated, each focused on whether the atom
//! `A0000000` is defeasibly provable:
//!
//! * `chain(n)` / `chains(n)`: a line of n defeasible/strict rules fed by one
//!   fact; provable.
//! * `circle(n)` / `circles(n)`: the same line closed into a cycle with no
//!   facts; nothing is provable.
//! * `dag(n,k)`: a k-wide braid of nk+1 rules in which every atom occurs n
//!   times, fed by k facts; provable.
//! * `levels-(n)`: a cascade of n unresolved attacks; provable iff n is odd.
//! * `levels(n)`: the cascade with attackers declared superior at odd
//!   levels; same parity law.
//! * `hierarchies(n,k)`: a complete k-ary tree where each internal node is
//!   supported and attacked by its children's rules, supporters superior;
//!   provable.
//!
//! For evaluation, [`make_variant`] adjusts an instance so the query atom is
//! provable or not on demand, and [`emit_case`] writes a case directory with
//! the theory text, its sentence rendering (optionally shuffled), and
//! metadata whose expected verdict is recomputed by the reasoner rather than
//! assumed.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::reasoner::{query, Verdict};
use crate::theory::{Atom, Literal, Rule, SuperiorityPair, Theory};
use crate::translate::{render_theory, RenderConfig};

/// The eight generated theory families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Chain,
    Chains,
    Circle,
    Circles,
    Dag,
    #[serde(rename = "levels-")]
    LevelsMinus,
    Levels,
    Hierarchies,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Chain,
        Family::Chains,
        Family::Circle,
        Family::Circles,
        Family::Dag,
        Family::LevelsMinus,
        Family::Levels,
        Family::Hierarchies,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Chain => "chain",
            Family::Chains => "chains",
            Family::Circle => "circle",
            Family::Circles => "circles",
            Family::Dag => "dag",
            Family::LevelsMinus => "levels-",
            Family::Levels => "levels",
            Family::Hierarchies => "hierarchies",
        }
    }

    /// Whether the family takes the branching parameter k.
    pub fn branching(self) -> bool {
        matches!(self, Family::Dag | Family::Hierarchies)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Family, GenerateError> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| GenerateError::InvalidSpec(format!("unknown family `{s}`")))
    }
}

/// A family instance: `chain(8)`, `dag(3,2)`, `hierarchies(2,4)`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
}

impl FamilySpec {
    pub fn new(family: Family, n: u32) -> FamilySpec {
        FamilySpec { family, n, k: None }
    }

    pub fn with_branching(family: Family, n: u32, k: u32) -> FamilySpec {
        FamilySpec {
            family,
            n,
            k: Some(k),
        }
    }

    pub fn validate(&self) -> Result<(), GenerateError> {
        if self.n == 0 {
            return Err(GenerateError::InvalidSpec(format!(
                "{}: n must be at least 1",
                self.family
            )));
        }
        match (self.family.branching(), self.k) {
            (false, Some(_)) => Err(GenerateError::InvalidSpec(format!(
                "{} takes no branching parameter k",
                self.family
            ))),
            (true, None) => Err(GenerateError::InvalidSpec(format!(
                "{} requires the branching parameter k",
                self.family
            ))),
            (true, Some(0)) => Err(GenerateError::InvalidSpec(format!(
                "{}: k must be at least 1",
                self.family
            ))),
            (true, Some(k)) if self.family == Family::Hierarchies && k % 2 != 0 => Err(
                GenerateError::InvalidSpec(format!("hierarchies: k must be even, got {k}")),
            ),
            _ => Ok(()),
        }
    }

    /// File-system friendly form: `chain_8`, `dag_3_2`.
    pub fn id_token(&self) -> String {
        match self.k {
            Some(k) => format!("{}_{}_{}", self.family, self.n, k),
            None => format!("{}_{}", self.family, self.n),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "{}({},{})", self.family, self.n, k),
            None => write!(f, "{}({})", self.family, self.n),
        }
    }
}

/// Whether a case is built so the query atom is provable or not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "plus")]
    Provable,
    #[serde(rename = "minus")]
    Unprovable,
}

impl Polarity {
    pub fn token(self) -> &'static str {
        match self {
            Polarity::Provable => "plus",
            Polarity::Unprovable => "minus",
        }
    }

    /// Whether a reasoner verdict satisfies this polarity.
    pub fn admits(self, verdict: Verdict) -> bool {
        match self {
            Polarity::Provable => verdict == Verdict::ProvablyTrue,
            Polarity::Unprovable => verdict != Verdict::ProvablyTrue,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Polarity {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Polarity, GenerateError> {
        match s {
            "plus" => Ok(Polarity::Provable),
            "minus" => Ok(Polarity::Unprovable),
            other => Err(GenerateError::InvalidSpec(format!(
                "unknown polarity `{other}` (expected plus or minus)"
            ))),
        }
    }
}

/// Whether the rendered sentences keep declaration order or are shuffled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SentenceOrder {
    #[serde(rename = "seq")]
    Sequential,
    #[serde(rename = "rand")]
    Random,
}

impl SentenceOrder {
    pub fn token(self) -> &'static str {
        match self {
            SentenceOrder::Sequential => "seq",
            SentenceOrder::Random => "rand",
        }
    }
}

impl fmt::Display for SentenceOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for SentenceOrder {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<SentenceOrder, GenerateError> {
        match s {
            "seq" => Ok(SentenceOrder::Sequential),
            "rand" => Ok(SentenceOrder::Random),
            other => Err(GenerateError::InvalidSpec(format!(
                "unknown ordering `{other}` (expected seq or rand)"
            ))),
        }
    }
}

/// Evaluation-side parameters of a case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSetting {
    pub polarity: Polarity,
    pub ordering: SentenceOrder,
    /// Seed for the sentence permutation; recorded but unused for
    /// [`SentenceOrder::Sequential`].
    pub shuffle_seed: u64,
}

/// A fully built benchmark case, before or after being written to disk.
#[derive(Debug, Clone)]
pub struct BenchmarkCase {
    pub id: String,
    pub spec: FamilySpec,
    pub setting: CaseSetting,
    pub theory: Theory,
    /// Sentences in the order they are presented (shuffled for random cases).
    pub sentences: Vec<String>,
    /// Recomputed by the reasoner at build time, never assumed.
    pub expected: Verdict,
    pub query_atom: Atom,
}

/// Per-case metadata persisted as `meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseMeta {
    pub id: String,
    pub spec: FamilySpec,
    pub polarity: Polarity,
    pub ordering: SentenceOrder,
    pub seed: u64,
    pub expected: Verdict,
    pub query: String,
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("variant construction for {spec} did not reach the requested polarity {polarity}: reasoner says {actual}")]
    VariantUnsatisfied {
        spec: FamilySpec,
        polarity: Polarity,
        actual: Verdict,
    },
    #[error("cannot write case files: {0}")]
    Io(#[from] std::io::Error),
}

/// The atom naming scheme: index 0 is `A0000000`.
pub fn atom_name(index: u64) -> String {
    format!("A{index:07}")
}

fn atom(index: u64) -> Atom {
    Atom::new(atom_name(index)).expect("generated atom names are valid")
}

fn pos(index: u64) -> Literal {
    Literal::positive(atom(index))
}

fn neg(index: u64) -> Literal {
    Literal::negative(atom(index))
}

/// The atom every case asks about.
pub fn query_atom() -> Atom {
    atom(0)
}

fn query_literal() -> Literal {
    pos(0)
}

/// Fresh replacement name for the atom with the given index: the zero
/// padding turns into ones, so index 3 becomes `A1111113`.
fn break_atom_name(index: u64) -> String {
    let digits = format!("{index:07}");
    let broken: String = {
        let mut seen_nonzero = false;
        digits
            .chars()
            .map(|c| {
                if seen_nonzero || c != '0' {
                    seen_nonzero = true;
                    c
                } else {
                    '1'
                }
            })
            .collect()
    };
    format!("A{broken}")
}

/// Builds the base instance of a family.
pub fn generate(spec: &FamilySpec) -> Result<Theory, GenerateError> {
    spec.validate()?;
    let n = u64::from(spec.n);
    let theory = match spec.family {
        Family::Chain => chain(n, false),
        Family::Chains => chain(n, true),
        Family::Circle => circle(n, false),
        Family::Circles => circle(n, true),
        Family::Dag => dag(n, u64::from(spec.k.unwrap())),
        Family::LevelsMinus => levels(n, false),
        Family::Levels => levels(n, true),
        Family::Hierarchies => hierarchies(n, u64::from(spec.k.unwrap())),
    };
    Ok(theory.expect("family constructions are structurally valid"))
}

fn chain(n: u64, strict: bool) -> Result<Theory, crate::theory::TheoryError> {
    let facts = vec![pos(n)];
    let rules = (1..=n)
        .map(|i| {
            let label = format!("r{i}");
            let body = vec![pos(n - i + 1)];
            let head = pos(n - i);
            if strict {
                Rule::strict(label, body, head)
            } else {
                Rule::defeasible(label, body, head)
            }
        })
        .collect();
    Theory::build(facts, rules, Vec::new())
}

fn circle(n: u64, strict: bool) -> Result<Theory, crate::theory::TheoryError> {
    let rules = (1..=n)
        .map(|i| {
            let label = format!("r{i}");
            let body = vec![pos((n - i + 1) % n)];
            let head = pos(n - i);
            if strict {
                Rule::strict(label, body, head)
            } else {
                Rule::defeasible(label, body, head)
            }
        })
        .collect();
    Theory::build(Vec::new(), rules, Vec::new())
}

fn dag(n: u64, k: u64) -> Result<Theory, crate::theory::TheoryError> {
    let top = n * k;
    let facts = (top + 1..=top + k).rev().map(pos).collect();
    let rules = (1..=top + 1)
        .map(|m| {
            let head = top + 1 - m;
            let body = (head + 1..=head + k).rev().map(pos).collect();
            Rule::defeasible(format!("r{m}"), body, pos(head))
        })
        .collect();
    Theory::build(facts, rules, Vec::new())
}

fn levels(n: u64, priorities: bool) -> Result<Theory, crate::theory::TheoryError> {
    let mut rules = Vec::with_capacity(2 * n as usize);
    let mut pairs = Vec::new();
    for i in (0..n).rev() {
        let supporter = format!("r{}", rules.len() + 1);
        rules.push(Rule::defeasible(supporter.clone(), Vec::new(), pos(i)));
        let attacker = format!("r{}", rules.len() + 1);
        rules.push(Rule::defeasible(attacker.clone(), vec![pos(i + 1)], neg(i)));
        if priorities && i % 2 == 1 {
            pairs.push(SuperiorityPair::new(attacker, supporter));
        }
    }
    Theory::build(Vec::new(), rules, pairs)
}

fn hierarchies(n: u64, k: u64) -> Result<Theory, crate::theory::TheoryError> {
    let internal_count = (0..n).map(|i| k.pow(i as u32)).sum::<u64>();
    let node_count = internal_count + k.pow(n as u32);
    let facts = (internal_count..node_count).rev().map(pos).collect();
    let mut rules = Vec::new();
    let mut pairs = Vec::new();
    for node in (0..internal_count).rev() {
        // Children in descending index order: supporters take the upper
        // half, attackers the lower half, and each supporter is paired with
        // the attacker at the same offset.
        let children: Vec<u64> = (k * node + 1..=k * node + k).rev().collect();
        let half = (k / 2) as usize;
        let mut supporters = Vec::with_capacity(half);
        for &child in &children[..half] {
            let label = format!("r{}", rules.len() + 1);
            supporters.push(label.clone());
            rules.push(Rule::defeasible(label, vec![pos(child)], pos(node)));
        }
        let mut attackers = Vec::with_capacity(half);
        for &child in &children[half..] {
            let label = format!("r{}", rules.len() + 1);
            attackers.push(label.clone());
            rules.push(Rule::defeasible(label, vec![pos(child)], neg(node)));
        }
        for (sup, att) in supporters.into_iter().zip(attackers) {
            pairs.push(SuperiorityPair::new(sup, att));
        }
    }
    Theory::build(facts, rules, pairs)
}

/// Whether the untouched base instance already satisfies the polarity.
fn base_polarity(spec: &FamilySpec) -> Polarity {
    match spec.family {
        Family::Chain | Family::Chains | Family::Dag | Family::Hierarchies => Polarity::Provable,
        Family::Circle | Family::Circles => Polarity::Unprovable,
        Family::LevelsMinus | Family::Levels => {
            if spec.n % 2 == 1 {
                Polarity::Provable
            } else {
                Polarity::Unprovable
            }
        }
    }
}

/// Renames one body occurrence of `target` to a fresh break atom. The head
/// and fact occurrences stay untouched, so the fresh atom only ever appears
/// as an unsupported premise.
fn rename_body_occurrence(
    theory: &Theory,
    rule_label: &str,
    target: &Literal,
) -> Result<Theory, GenerateError> {
    rename_bodies(theory, target, Some(rule_label))
}

fn rename_bodies(
    theory: &Theory,
    target: &Literal,
    only_rule: Option<&str>,
) -> Result<Theory, GenerateError> {
    let fresh_name = break_atom_name(
        target
            .atom
            .as_str()
            .trim_start_matches(|c: char| !c.is_ascii_digit())
            .parse::<u64>()
            .expect("generated atoms carry a numeric index"),
    );
    let clash = theory
        .atoms()
        .iter()
        .any(|a| a.as_str() == fresh_name);
    assert!(!clash, "break atom {fresh_name} collides with the theory");
    let fresh = Literal {
        atom: Atom::new(fresh_name).expect("break atom names are valid"),
        positive: target.positive,
    };
    let rules = theory
        .rules()
        .iter()
        .map(|rule| {
            let applies = only_rule.is_none_or(|label| rule.label == label);
            let mut rule = rule.clone();
            if applies {
                for lit in &mut rule.body {
                    if lit == target {
                        *lit = fresh.clone();
                    }
                }
            }
            rule
        })
        .collect();
    Ok(Theory::build(
        theory.facts().to_vec(),
        rules,
        theory.superiority().to_vec(),
    )
    .expect("renaming a body atom preserves validity"))
}

fn add_fact(theory: &Theory, fact: Literal) -> Theory {
    let mut facts = theory.facts().to_vec();
    facts.push(fact);
    Theory::build(
        facts,
        theory.rules().to_vec(),
        theory.superiority().to_vec(),
    )
    .expect("adding a fact preserves validity")
}

/// Adjusts a base instance so the query atom matches the requested polarity,
/// then verifies the adjustment with the reasoner.
pub fn make_variant(
    base: &Theory,
    spec: &FamilySpec,
    polarity: Polarity,
) -> Result<Theory, GenerateError> {
    spec.validate()?;
    let n = u64::from(spec.n);
    let theory = if base_polarity(spec) == polarity {
        base.clone()
    } else {
        match spec.family {
            Family::Chain | Family::Chains => {
                // Break the link a_j => a_{j-1} near the middle of the chain.
                let j = (n / 2).saturating_sub(1).max(1);
                let label = format!("r{}", n - j + 1);
                rename_body_occurrence(base, &label, &pos(j))?
            }
            Family::Circle | Family::Circles => add_fact(base, pos(n - 1)),
            Family::Dag => {
                let k = u64::from(spec.k.unwrap());
                let j = (n * k).div_ceil(2) + 1;
                rename_bodies(base, &pos(j), None)?
            }
            Family::LevelsMinus | Family::Levels => add_fact(base, pos(n)),
            Family::Hierarchies => {
                let k = u64::from(spec.k.unwrap());
                let internal_count = (0..n).map(|i| k.pow(i as u32)).sum::<u64>();
                // Walk from the root along each node's first supporting
                // child (the highest-indexed one) down to a leaf, then break
                // that leaf's occurrence in its parent's supporting rule.
                let mut node = 0;
                while node < internal_count {
                    node = k * node + k;
                }
                let parent = (node - 1) / k;
                let label = theory_rule_with_body(base, &pos(parent), &pos(node));
                rename_body_occurrence(base, &label, &pos(node))?
            }
        }
    };
    let actual = query(&theory, &query_literal());
    if polarity.admits(actual) {
        Ok(theory)
    } else {
        Err(GenerateError::VariantUnsatisfied {
            spec: *spec,
            polarity,
            actual,
        })
    }
}

fn theory_rule_with_body(theory: &Theory, head: &Literal, body: &Literal) -> String {
    theory
        .rules()
        .iter()
        .find(|r| &r.head == head && r.body.contains(body))
        .map(|r| r.label.clone())
        .expect("hierarchies node has a supporting rule for each child")
}

/// Builds a complete case in memory: variant theory, sentence rendering in
/// the requested order, and the reasoner's verdict.
pub fn build_case(spec: &FamilySpec, setting: &CaseSetting) -> Result<BenchmarkCase, GenerateError> {
    let base = generate(spec)?;
    let theory = make_variant(&base, spec, setting.polarity)?;
    let rendering = render_theory(&theory, &RenderConfig::default());
    let mut sentences = rendering.sentences;
    if setting.ordering == SentenceOrder::Random {
        let mut rng = ChaCha8Rng::seed_from_u64(setting.shuffle_seed);
        sentences.shuffle(&mut rng);
    }
    let expected = query(&theory, &query_literal());
    let id = format!(
        "{}_{}_{}_{}",
        spec.id_token(),
        setting.polarity,
        setting.ordering,
        setting.shuffle_seed
    );
    Ok(BenchmarkCase {
        id,
        spec: *spec,
        setting: *setting,
        theory,
        sentences,
        expected,
        query_atom: query_atom(),
    })
}

impl BenchmarkCase {
    pub fn meta(&self) -> CaseMeta {
        CaseMeta {
            id: self.id.clone(),
            spec: self.spec,
            polarity: self.setting.polarity,
            ordering: self.setting.ordering,
            seed: self.setting.shuffle_seed,
            expected: self.expected,
            query: self.query_atom.to_string(),
        }
    }

    /// Sentences joined with newlines, as written to `knowledge.txt`.
    pub fn knowledge_text(&self) -> String {
        let mut text = self.sentences.join("\n");
        if !text.is_empty() {
            text.push('\n');
        }
        text
    }
}

/// Builds a case and writes `theory.dfl`, `knowledge.txt`, and `meta.json`
/// into `<out_dir>/<case id>/`. Returns the case and its directory.
pub fn emit_case(
    spec: &FamilySpec,
    setting: &CaseSetting,
    out_dir: &Path,
) -> Result<(BenchmarkCase, PathBuf), GenerateError> {
    let case = build_case(spec, setting)?;
    let dir = out_dir.join(&case.id);
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("theory.dfl"), crate::parser::print_theory(&case.theory))?;
    fs::write(dir.join("knowledge.txt"), case.knowledge_text())?;
    let meta = serde_json::to_string_pretty(&case.meta()).expect("meta serializes");
    fs::write(dir.join("meta.json"), meta + "\n")?;
    Ok((case, dir))
}

/// The standard evaluation matrix: eight instances, each under
/// minus/plus polarity crossed with random/sequential ordering, in that
/// order. Shuffle seeds are `base_seed` plus the case index.
pub fn standard_matrix(base_seed: u64) -> Vec<(FamilySpec, CaseSetting)> {
    let specs = [
        FamilySpec::new(Family::Chain, 8),
        FamilySpec::new(Family::Chains, 8),
        FamilySpec::new(Family::Circle, 8),
        FamilySpec::new(Family::Circles, 8),
        FamilySpec::with_branching(Family::Dag, 3, 2),
        FamilySpec::new(Family::LevelsMinus, 5),
        FamilySpec::new(Family::Levels, 5),
        FamilySpec::with_branching(Family::Hierarchies, 2, 4),
    ];
    let settings = [
        (Polarity::Unprovable, SentenceOrder::Random),
        (Polarity::Provable, SentenceOrder::Random),
        (Polarity::Unprovable, SentenceOrder::Sequential),
        (Polarity::Provable, SentenceOrder::Sequential),
    ];
    let mut matrix = Vec::with_capacity(specs.len() * settings.len());
    for spec in specs {
        for (polarity, ordering) in settings {
            let shuffle_seed = base_seed + matrix.len() as u64;
            matrix.push((
                spec,
                CaseSetting {
                    polarity,
                    ordering,
                    shuffle_seed,
                },
            ));
        }
    }
    matrix
}

/// Expected fact/rule/priority counts for a family instance.
pub fn expected_counts(spec: &FamilySpec) -> (u64, u64, u64) {
    let n = u64::from(spec.n);
    match spec.family {
        Family::Chain | Family::Chains => (1, n, 0),
        Family::Circle | Family::Circles => (0, n, 0),
        Family::Dag => {
            let k = u64::from(spec.k.unwrap());
            (k, n * k + 1, 0)
        }
        Family::LevelsMinus => (0, 2 * n, 0),
        Family::Levels => (0, 2 * n, n / 2),
        Family::Hierarchies => {
            let k = u64::from(spec.k.unwrap());
            let internal: u64 = (0..n).map(|i| k.pow(i as u32)).sum();
            (k.pow(n as u32), k * internal, k / 2 * internal)
        }
    }
}
