//! The frozen prompt wording posed to the evaluated model.

use crate::generate::BenchmarkCase;

/// System message sent with every case.
pub const SYSTEM_INSTRUCTION: &str = "You are an expert on defeasible reasoning. Your task is to make logical conclusions based on provided knowledge (delimited with XML tags).";

/// User message template; `{theory}` is replaced by the case's sentences
/// joined with newlines. The doubled backticks and apostrophes around the
/// placeholder are literal quote characters and part of the wording.
pub const USER_TEMPLATE: &str = "Based on the following knowledge alone:\n\n<knowledge>\n``{theory}''\n</knowledge>\n\nIs A0000000 an Arkon?\n\nLet's think step by step.";

/// The two messages for one case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptBundle {
    pub case_id: String,
    pub system_instruction: String,
    pub user_message: String,
}

/// Instantiates the template for a case.
pub fn build_prompt(case: &BenchmarkCase) -> PromptBundle {
    build_prompt_from(&case.id, &case.sentences)
}

/// Instantiates the template for already-rendered sentences.
pub fn build_prompt_from(case_id: &str, sentences: &[String]) -> PromptBundle {
    PromptBundle {
        case_id: case_id.to_owned(),
        system_instruction: SYSTEM_INSTRUCTION.to_owned(),
        user_message: USER_TEMPLATE.replace("{theory}", &sentences.join("\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{build_case, CaseSetting, FamilySpec, Polarity, SentenceOrder};
    use crate::generate::Family;

    fn case(ordering: SentenceOrder, seed: u64) -> crate::generate::BenchmarkCase {
        build_case(
            &FamilySpec::new(Family::Chain, 2),
            &CaseSetting {
                polarity: Polarity::Provable,
                ordering,
                shuffle_seed: seed,
            },
        )
        .unwrap()
    }

    #[test]
    fn sentences_are_embedded_between_knowledge_tags() {
        let prompt = build_prompt(&case(SentenceOrder::Sequential, 0));
        assert!(prompt.user_message.starts_with("Based on the following knowledge alone:\n\n<knowledge>\n``A0000002 is an Arkon.\n"));
        assert!(prompt
            .user_message
            .ends_with("''\n</knowledge>\n\nIs A0000000 an Arkon?\n\nLet's think step by step."));
        assert_eq!(prompt.system_instruction, SYSTEM_INSTRUCTION);
    }

    #[test]
    fn orderings_differ_only_inside_the_knowledge_block() {
        let seq = build_prompt(&case(SentenceOrder::Sequential, 0));
        let rand = build_prompt(&case(SentenceOrder::Random, 2));
        assert_ne!(seq.user_message, rand.user_message);
        let strip = |s: &str| {
            let start = s.find("<knowledge>").unwrap();
            let end = s.find("</knowledge>").unwrap();
            (s[..start].to_owned(), s[end..].to_owned())
        };
        assert_eq!(strip(&seq.user_message), strip(&rand.user_message));
    }

    #[test]
    fn empty_sentence_list_leaves_an_empty_quoted_block() {
        let prompt = build_prompt_from("empty", &[]);
        assert!(prompt.user_message.contains("<knowledge>\n``''\n</knowledge>"));
    }
}
