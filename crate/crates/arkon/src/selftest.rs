//! Built-in consistency suite exposed through the command line.
//!
//! Each check cross-validates two independent routes to the same answer:
//! the fixpoint engine against the goal-directed prover, generated theories
//! against closed-form size formulas, renderings against shipped golden
//! files, and the verdict extractor against a hand-labeled corpus.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::generate::{
    build_case, generate, make_variant, standard_matrix, Family, FamilySpec, Polarity,
};
use crate::harness::extract::{extract_verdict, CueLexicon, ExtractedVerdict};
use crate::harness::prompt::{build_prompt, SYSTEM_INSTRUCTION, USER_TEMPLATE};
use crate::oracle::Oracle;
use crate::parser::{parse_theory, print_theory};
use crate::reasoner::{conclusions, ProofTag, TagState, Verdict};
use crate::theory::{Atom, Literal, Rule, RuleKind, SuperiorityPair, Theory};

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Empty on success; on failure, the first disagreement found.
    pub details: String,
}

impl CheckResult {
    fn from(name: &'static str, outcome: Result<(), String>) -> CheckResult {
        match outcome {
            Ok(()) => CheckResult {
                name,
                passed: true,
                details: String::new(),
            },
            Err(details) => CheckResult {
                name,
                passed: false,
                details,
            },
        }
    }
}

/// Runs every check and reports one result per check.
pub fn run_selftest() -> Vec<CheckResult> {
    vec![
        CheckResult::from("oracle agreement on family instances", family_equivalence()),
        CheckResult::from("oracle agreement on random theories", random_equivalence()),
        CheckResult::from("documented ground truths", ground_truths()),
        CheckResult::from("instance size formulas", size_formulas()),
        CheckResult::from("golden theory round-trip", golden_round_trip()),
        CheckResult::from("golden translations", golden_translations()),
        CheckResult::from("prompt fidelity", prompt_fidelity()),
        CheckResult::from("preset polarity soundness", preset_polarity()),
        CheckResult::from("parser round-trip on random theories", random_round_trip()),
        CheckResult::from("verdict extraction corpus", extraction_corpus()),
    ]
}

/// Compares the fixpoint engine with the goal-directed prover on every
/// (tag, literal) pair of the theory.
fn oracle_agrees(theory: &Theory, context: &str) -> Result<(), String> {
    let set = conclusions(theory);
    let mut oracle =
        Oracle::new(theory).map_err(|e| format!("{context}: prover refused: {e}"))?;
    for lit in set.universe() {
        for tag in ProofTag::ALL {
            let engine = set.has(tag, lit);
            let prover = oracle
                .derivable(tag, lit)
                .map_err(|e| format!("{context}: prover gave up: {e}"))?;
            if engine != prover {
                return Err(format!(
                    "{context}: {} {} is {} by fixpoint but {} by search",
                    tag.symbol(),
                    lit,
                    engine,
                    prover
                ));
            }
        }
    }
    Ok(())
}

fn small_instances() -> Vec<FamilySpec> {
    let mut specs = Vec::new();
    for family in [
        Family::Chain,
        Family::Chains,
        Family::Circle,
        Family::Circles,
        Family::Dag,
        Family::LevelsMinus,
        Family::Levels,
        Family::Hierarchies,
    ] {
        for n in 1..=4 {
            if family.branching() {
                specs.push(FamilySpec::with_branching(family, n, 2));
            } else {
                specs.push(FamilySpec::new(family, n));
            }
        }
    }
    specs
}

fn family_equivalence() -> Result<(), String> {
    for spec in small_instances() {
        let base = generate(&spec).map_err(|e| format!("{spec}: {e}"))?;
        oracle_agrees(&base, &spec.to_string())?;
        for polarity in [Polarity::Provable, Polarity::Unprovable] {
            let variant =
                make_variant(&base, &spec, polarity).map_err(|e| format!("{spec}: {e}"))?;
            oracle_agrees(&variant, &format!("{spec} {polarity} variant"))?;
        }
    }
    Ok(())
}

fn random_equivalence() -> Result<(), String> {
    for seed in 0..500u64 {
        let theory = random_theory(seed);
        oracle_agrees(&theory, &format!("random theory {seed}"))?;
    }
    Ok(())
}

/// Builds a small arbitrary theory from a seed: up to 10 atoms, up to 12
/// rules of mixed kinds, and an acyclic superiority relation oriented by a
/// random permutation of the rules.
pub fn random_theory(seed: u64) -> Theory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atom_count = rng.gen_range(1..=10usize);
    let atoms: Vec<Atom> = (0..atom_count)
        .map(|i| Atom::new(format!("p{i}")).expect("generated names are valid"))
        .collect();
    let random_literal = |rng: &mut ChaCha8Rng| {
        let atom = atoms[rng.gen_range(0..atoms.len())].clone();
        if rng.gen_bool(0.5) {
            Literal::positive(atom)
        } else {
            Literal::negative(atom)
        }
    };

    let mut facts = Vec::new();
    for atom in &atoms {
        if rng.gen_bool(0.2) {
            let lit = if rng.gen_bool(0.8) {
                Literal::positive(atom.clone())
            } else {
                Literal::negative(atom.clone())
            };
            if !facts.contains(&lit) {
                facts.push(lit);
            }
        }
    }

    let rule_count = rng.gen_range(0..=12usize);
    let mut rules = Vec::with_capacity(rule_count);
    for i in 0..rule_count {
        let kind = match rng.gen_range(0..6u8) {
            0 => RuleKind::Strict,
            1 => RuleKind::Defeater,
            _ => RuleKind::Defeasible,
        };
        let head = random_literal(&mut rng);
        let mut body = Vec::new();
        for _ in 0..rng.gen_range(0..=3usize) {
            let lit = random_literal(&mut rng);
            if !body.contains(&lit) {
                body.push(lit);
            }
        }
        rules.push(Rule::new(format!("r{}", i + 1), body, head, kind));
    }

    let mut pairs: Vec<SuperiorityPair> = Vec::new();
    if rules.len() >= 2 {
        let mut rank: Vec<usize> = (0..rules.len()).collect();
        rank.shuffle(&mut rng);
        for _ in 0..rng.gen_range(0..=4usize) {
            let a = rng.gen_range(0..rules.len());
            let b = rng.gen_range(0..rules.len());
            if a == b {
                continue;
            }
            let (sup, inf) = if rank[a] < rank[b] { (a, b) } else { (b, a) };
            let pair = SuperiorityPair::new(rules[sup].label.clone(), rules[inf].label.clone());
            if !pairs.contains(&pair) {
                pairs.push(pair);
            }
        }
    }

    Theory::build(facts, rules, pairs).expect("generated theories are well formed")
}

fn a0() -> Literal {
    Literal::positive(Atom::new("A0000000").expect("valid name"))
}

fn ground_truths() -> Result<(), String> {
    for n in 1..=8 {
        for family in [Family::Chain, Family::Chains] {
            let spec = FamilySpec::new(family, n);
            let set = conclusions(&generate(&spec).map_err(|e| format!("{spec}: {e}"))?);
            if set.partial(&a0()) != Some(TagState::ProvedPositive) {
                return Err(format!("{spec}: A0000000 should be defeasibly provable"));
            }
            if family == Family::Chains && set.delta(&a0()) != Some(TagState::ProvedPositive) {
                return Err(format!("{spec}: A0000000 should be definitely provable"));
            }
        }
        for family in [Family::Circle, Family::Circles] {
            let spec = FamilySpec::new(family, n);
            let set = conclusions(&generate(&spec).map_err(|e| format!("{spec}: {e}"))?);
            for lit in set.universe() {
                if set.verdict(lit) != Verdict::Undetermined {
                    return Err(format!("{spec}: {lit} should be undetermined"));
                }
            }
        }
        for family in [Family::LevelsMinus, Family::Levels] {
            let spec = FamilySpec::new(family, n);
            let set = conclusions(&generate(&spec).map_err(|e| format!("{spec}: {e}"))?);
            let want = if n % 2 == 1 {
                TagState::ProvedPositive
            } else {
                TagState::ProvedNegative
            };
            if set.partial(&a0()) != Some(want) {
                return Err(format!(
                    "{spec}: A0000000 partial state should be {want:?} for n={n}"
                ));
            }
        }
    }
    for n in 1..=3 {
        for k in [2, 4] {
            let spec = FamilySpec::with_branching(Family::Hierarchies, n, k);
            let set = conclusions(&generate(&spec).map_err(|e| format!("{spec}: {e}"))?);
            if set.partial(&a0()) != Some(TagState::ProvedPositive) {
                return Err(format!("{spec}: A0000000 should be defeasibly provable"));
            }
        }
    }
    Ok(())
}

fn size_formulas() -> Result<(), String> {
    for family in [
        Family::Chain,
        Family::Chains,
        Family::Circle,
        Family::Circles,
        Family::Dag,
        Family::LevelsMinus,
        Family::Levels,
        Family::Hierarchies,
    ] {
        let branchings: &[Option<u32>] = if family.branching() {
            &[Some(2), Some(4)]
        } else {
            &[None]
        };
        for n in 1..=8 {
            for &k in branchings {
                let spec = match k {
                    Some(k) => FamilySpec::with_branching(family, n, k),
                    None => FamilySpec::new(family, n),
                };
                let theory = generate(&spec).map_err(|e| format!("{spec}: {e}"))?;
                let got = (
                    theory.facts().len() as u64,
                    theory.rules().len() as u64,
                    theory.superiority().len() as u64,
                );
                let want = crate::generate::expected_counts(&spec);
                if got != want {
                    return Err(format!(
                        "{spec}: facts/rules/priorities are {got:?}, formulas give {want:?}"
                    ));
                }
            }
        }
    }
    Ok(())
}

fn golden_round_trip() -> Result<(), String> {
    for case in crate::goldens::golden_cases() {
        let theory = parse_theory(case.theory_text)
            .map_err(|errs| format!("{}: does not parse: {}", case.name, errs[0]))?;
        let printed = print_theory(&theory);
        if printed != case.theory_text {
            return Err(format!("{}: reprint differs from the shipped file", case.name));
        }
    }
    Ok(())
}

fn golden_translations() -> Result<(), String> {
    for case in crate::goldens::golden_cases() {
        let theory = parse_theory(case.theory_text)
            .map_err(|errs| format!("{}: does not parse: {}", case.name, errs[0]))?;
        let rendering = crate::translate::render_theory(&theory, &Default::default());
        let mut text = rendering.sentences.join("\n");
        text.push('\n');
        if text != case.sentences_text {
            return Err(format!(
                "{}: rendered sentences differ from the shipped file",
                case.name
            ));
        }
    }
    Ok(())
}

fn prompt_fidelity() -> Result<(), String> {
    let spec = FamilySpec::new(Family::Chain, 2);
    let setting = crate::generate::CaseSetting {
        polarity: Polarity::Provable,
        ordering: crate::generate::SentenceOrder::Sequential,
        shuffle_seed: 0,
    };
    let case = build_case(&spec, &setting).map_err(|e| e.to_string())?;
    let prompt = build_prompt(&case);
    if prompt.system_instruction != SYSTEM_INSTRUCTION {
        return Err("system instruction drifted from the fixed text".to_owned());
    }
    let golden = crate::goldens::golden_cases()
        .into_iter()
        .find(|g| g.name == "chain_2")
        .expect("chain(2) golden ships with the crate");
    let expected = USER_TEMPLATE.replace("{theory}", golden.sentences_text.trim_end_matches('\n'));
    if prompt.user_message != expected {
        return Err("user message differs from the template over the golden sentences".to_owned());
    }
    Ok(())
}

fn preset_polarity() -> Result<(), String> {
    for (spec, setting) in standard_matrix(0) {
        let case = build_case(&spec, &setting).map_err(|e| format!("{spec}: {e}"))?;
        if !setting.polarity.admits(case.expected) {
            return Err(format!(
                "{}: verdict {} does not match requested polarity {}",
                case.id, case.expected, setting.polarity
            ));
        }
        let text = print_theory(&case.theory);
        if setting.polarity == Polarity::Unprovable {
            let marker = match spec.family {
                Family::Chain | Family::Chains => Some("A1111113"),
                Family::Dag => Some("A1111114"),
                _ => None,
            };
            if let Some(marker) = marker {
                if !text.contains(marker) {
                    return Err(format!("{}: expected break atom {marker}", case.id));
                }
            }
        }
    }
    Ok(())
}

fn random_round_trip() -> Result<(), String> {
    for seed in 1000..1200u64 {
        let theory = random_theory(seed);
        let printed = print_theory(&theory);
        let reparsed = parse_theory(&printed)
            .map_err(|errs| format!("random theory {seed}: reparse failed: {}", errs[0]))?;
        if reparsed != theory {
            return Err(format!("random theory {seed}: reparse differs"));
        }
    }
    Ok(())
}

#[derive(Deserialize)]
struct CorpusEntry {
    text: String,
    label: ExtractedVerdict,
}

fn extraction_corpus() -> Result<(), String> {
    let raw = include_str!("../fixtures/verdict_corpus.jsonl");
    let lexicon = CueLexicon::builtin();
    let mut checked = 0usize;
    for (index, line) in raw.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let entry: CorpusEntry = serde_json::from_str(line)
            .map_err(|e| format!("corpus line {}: {e}", index + 1))?;
        let got = extract_verdict(&entry.text, &lexicon);
        if got != entry.label {
            return Err(format!(
                "corpus line {}: extracted {} but the label says {}",
                index + 1,
                got.name(),
                entry.label.name()
            ));
        }
        checked += 1;
    }
    if checked < 30 {
        return Err(format!("corpus holds only {checked} labeled responses"));
    }
    Ok(())
}
