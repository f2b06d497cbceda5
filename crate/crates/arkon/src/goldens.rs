//! Frozen reference cases: the smallest instance of each theory family
//! together with its expected text form and sentence rendering.
//!
//! These byte-exact references anchor the generator, the printer, and the
//! translator; the consistency suite and the test suite both compare against
//! them. They live under `goldens/` so they can be inspected and diffed as
//! plain files.

use crate::generate::{Family, FamilySpec};

/// One frozen reference case.
pub struct GoldenCase {
    /// Stable file-stem style name, e.g. `levels_minus_2`.
    pub name: &'static str,
    pub spec: FamilySpec,
    /// Expected theory text (printer output).
    pub theory_text: &'static str,
    /// Expected sentence rendering, one sentence per line.
    pub sentences_text: &'static str,
}

/// All frozen reference cases, in family declaration order.
pub fn golden_cases() -> Vec<GoldenCase> {
    vec![
        GoldenCase {
            name: "chain_2",
            spec: FamilySpec::new(Family::Chain, 2),
            theory_text: include_str!("../goldens/chain_2.dfl"),
            sentences_text: include_str!("../goldens/chain_2.txt"),
        },
        GoldenCase {
            name: "chains_2",
            spec: FamilySpec::new(Family::Chains, 2),
            theory_text: include_str!("../goldens/chains_2.dfl"),
            sentences_text: include_str!("../goldens/chains_2.txt"),
        },
        GoldenCase {
            name: "circle_2",
            spec: FamilySpec::new(Family::Circle, 2),
            theory_text: include_str!("../goldens/circle_2.dfl"),
            sentences_text: include_str!("../goldens/circle_2.txt"),
        },
        GoldenCase {
            name: "circles_2",
            spec: FamilySpec::new(Family::Circles, 2),
            theory_text: include_str!("../goldens/circles_2.dfl"),
            sentences_text: include_str!("../goldens/circles_2.txt"),
        },
        GoldenCase {
            name: "dag_2_2",
            spec: FamilySpec::with_branching(Family::Dag, 2, 2),
            theory_text: include_str!("../goldens/dag_2_2.dfl"),
            sentences_text: include_str!("../goldens/dag_2_2.txt"),
        },
        GoldenCase {
            name: "levels_minus_2",
            spec: FamilySpec::new(Family::LevelsMinus, 2),
            theory_text: include_str!("../goldens/levels_minus_2.dfl"),
            sentences_text: include_str!("../goldens/levels_minus_2.txt"),
        },
        GoldenCase {
            name: "levels_2",
            spec: FamilySpec::new(Family::Levels, 2),
            theory_text: include_str!("../goldens/levels_2.dfl"),
            sentences_text: include_str!("../goldens/levels_2.txt"),
        },
        GoldenCase {
            name: "hierarchies_2_2",
            spec: FamilySpec::with_branching(Family::Hierarchies, 2, 2),
            theory_text: include_str!("../goldens/hierarchies_2_2.dfl"),
            sentences_text: include_str!("../goldens/hierarchies_2_2.txt"),
        },
    ]
}
