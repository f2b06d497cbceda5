//! Line-oriented reader and writer for the theory file format.
//!
//! One statement per line: facts (`>> lit`), rules (`label: body arrow head`
//! with `->`, `=>`, or `~>`), and priorities (`sup > inf`). `#` starts a
//! comment, blank lines are skipped, and priorities may reference labels
//! defined later in the file. Errors are collected per line instead of
//! aborting at the first problem.

use std::fmt;

use crate::theory::{
    is_valid_label, Atom, Literal, Rule, RuleKind, SuperiorityPair, Theory, TheoryError,
};

/// A problem (or oddity) found at a specific place in the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    /// 1-based line number.
    pub line: usize,
    /// 1-based character column.
    pub column: usize,
    pub message: String,
    pub severity: Severity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {kind}: {}", self.line, self.column, self.message)
    }
}

/// Parses a theory, failing with every error found.
pub fn parse_theory(text: &str) -> Result<Theory, Vec<ParseDiagnostic>> {
    let (theory, diagnostics) = parse_theory_with_diagnostics(text);
    let errors: Vec<ParseDiagnostic> = diagnostics
        .into_iter()
        .filter(|d| d.severity == Severity::Error)
        .collect();
    match theory {
        Some(theory) if errors.is_empty() => Ok(theory),
        _ => Err(errors),
    }
}

/// Parses a theory, returning warnings alongside the result.
///
/// The theory is `None` exactly when at least one diagnostic is an error.
pub fn parse_theory_with_diagnostics(text: &str) -> (Option<Theory>, Vec<ParseDiagnostic>) {
    let mut diagnostics = Vec::new();
    let mut facts: Vec<(usize, Literal)> = Vec::new();
    let mut rules: Vec<(usize, Rule)> = Vec::new();
    let mut pairs: Vec<(usize, SuperiorityPair)> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(line) {
            Ok(Statement::Fact(lit)) => facts.push((line_no, lit)),
            Ok(Statement::Rule(rule)) => rules.push((line_no, rule)),
            Ok(Statement::Priority(pair)) => pairs.push((line_no, pair)),
            Err((column, message)) => diagnostics.push(ParseDiagnostic {
                line: line_no,
                column,
                message,
                severity: Severity::Error,
            }),
        }
    }

    // Resolve label references now that the whole file has been read.
    let mut known = std::collections::HashMap::new();
    for (line_no, rule) in &rules {
        if let Some(first) = known.insert(rule.label.clone(), *line_no) {
            diagnostics.push(ParseDiagnostic {
                line: *line_no,
                column: 1,
                message: format!("rule label {:?} already used on line {first}", rule.label),
                severity: Severity::Error,
            });
        }
    }
    for (line_no, pair) in &pairs {
        for label in [&pair.superior, &pair.inferior] {
            if !known.contains_key(label) {
                diagnostics.push(ParseDiagnostic {
                    line: *line_no,
                    column: 1,
                    message: format!("priority references unknown rule label {label:?}"),
                    severity: Severity::Error,
                });
            }
        }
        if pair.superior == pair.inferior {
            diagnostics.push(ParseDiagnostic {
                line: *line_no,
                column: 1,
                message: format!("rule {:?} declared superior to itself", pair.superior),
                severity: Severity::Error,
            });
        }
    }

    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return (None, diagnostics);
    }

    let pair_line = |pair: &SuperiorityPair| {
        pairs
            .iter()
            .find(|(_, p)| p == pair)
            .map(|(l, _)| *l)
            .unwrap_or(0)
    };
    let built = Theory::build_with_warnings(
        facts.iter().map(|(_, f)| f.clone()).collect(),
        rules.iter().map(|(_, r)| r.clone()).collect(),
        pairs.iter().map(|(_, p)| p.clone()).collect(),
    );
    match built {
        Ok((theory, warnings)) => {
            for warning in warnings {
                let line = match &warning {
                    crate::theory::BuildWarning::DuplicateBodyLiteral { rule, .. } => rules
                        .iter()
                        .find(|(_, r)| &r.label == rule)
                        .map(|(l, _)| *l)
                        .unwrap_or(0),
                    crate::theory::BuildWarning::DuplicateFact(lit) => facts
                        .iter()
                        .rev()
                        .find(|(_, f)| f == lit)
                        .map(|(l, _)| *l)
                        .unwrap_or(0),
                    crate::theory::BuildWarning::DuplicateSuperiority(pair) => pair_line(pair),
                    crate::theory::BuildWarning::ComplementaryFacts(_) => {
                        facts.last().map(|(l, _)| *l).unwrap_or(0)
                    }
                };
                diagnostics.push(ParseDiagnostic {
                    line,
                    column: 1,
                    message: warning.to_string(),
                    severity: Severity::Warning,
                });
            }
            (Some(theory), diagnostics)
        }
        Err(err) => {
            let line = match &err {
                TheoryError::CyclicSuperiority(label) => pairs
                    .iter()
                    .find(|(_, p)| &p.superior == label || &p.inferior == label)
                    .map(|(l, _)| *l)
                    .unwrap_or(0),
                _ => 0,
            };
            diagnostics.push(ParseDiagnostic {
                line,
                column: 1,
                message: err.to_string(),
                severity: Severity::Error,
            });
            (None, diagnostics)
        }
    }
}

/// Prints a theory in the canonical format: facts first, then rules in
/// declaration order, each priority line placed as soon as both of its rules
/// have been printed (ties broken by pair declaration order). Parsing the
/// result reproduces the theory exactly.
pub fn print_theory(theory: &Theory) -> String {
    let mut out = String::new();
    for fact in theory.facts() {
        out.push_str(">> ");
        out.push_str(&fact.to_string());
        out.push('\n');
    }
    let rule_pos = |label: &str| theory.rule_index(label).unwrap_or(usize::MAX);
    let mut printed = vec![false; theory.superiority().len()];
    for (rule_idx, rule) in theory.rules().iter().enumerate() {
        out.push_str(&rule.to_string());
        out.push('\n');
        for (pair_idx, pair) in theory.superiority().iter().enumerate() {
            if printed[pair_idx] {
                continue;
            }
            if rule_pos(&pair.superior) <= rule_idx && rule_pos(&pair.inferior) <= rule_idx {
                out.push_str(&pair.to_string());
                out.push('\n');
                printed[pair_idx] = true;
            }
        }
    }
    out
}

enum Statement {
    Fact(Literal),
    Rule(Rule),
    Priority(SuperiorityPair),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Minus,
    Comma,
    Colon,
    Gt,
    FactMarker,
    Arrow(RuleKind),
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(name) => format!("identifier {name:?}"),
            Token::Minus => "'-'".into(),
            Token::Comma => "','".into(),
            Token::Colon => "':'".into(),
            Token::Gt => "'>'".into(),
            Token::FactMarker => "'>>'".into(),
            Token::Arrow(kind) => format!("'{}'", kind.arrow()),
        }
    }
}

type LineError = (usize, String);

fn tokenize(line: &str) -> Result<Vec<(usize, Token)>, LineError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let column = i + 1;
        match chars[i] {
            c if c.is_whitespace() => i += 1,
            '>' if chars.get(i + 1) == Some(&'>') => {
                tokens.push((column, Token::FactMarker));
                i += 2;
            }
            '>' => {
                tokens.push((column, Token::Gt));
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                tokens.push((column, Token::Arrow(RuleKind::Strict)));
                i += 2;
            }
            '-' => {
                tokens.push((column, Token::Minus));
                i += 1;
            }
            '=' if chars.get(i + 1) == Some(&'>') => {
                tokens.push((column, Token::Arrow(RuleKind::Defeasible)));
                i += 2;
            }
            '~' if chars.get(i + 1) == Some(&'>') => {
                tokens.push((column, Token::Arrow(RuleKind::Defeater)));
                i += 2;
            }
            ',' => {
                tokens.push((column, Token::Comma));
                i += 1;
            }
            ':' => {
                tokens.push((column, Token::Colon));
                i += 1;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                tokens.push((start + 1, Token::Ident(name)));
            }
            c => return Err((column, format!("unexpected character {c:?}"))),
        }
    }
    Ok(tokens)
}

struct Cursor {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    line_len: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<(usize, Token)> {
        let item = self.tokens.get(self.pos).cloned();
        if item.is_some() {
            self.pos += 1;
        }
        item
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(c, _)| *c)
            .unwrap_or(self.line_len + 1)
    }

    fn expect_end(&mut self) -> Result<(), LineError> {
        match self.next() {
            None => Ok(()),
            Some((column, token)) => {
                Err((column, format!("unexpected {} after statement", token.describe())))
            }
        }
    }

    fn literal(&mut self) -> Result<Literal, LineError> {
        let negative = matches!(self.peek(), Some(Token::Minus));
        if negative {
            self.next();
        }
        match self.next() {
            Some((_, Token::Ident(name))) => {
                let atom = Atom::new(name).map_err(|e| (self.column(), e.to_string()))?;
                Ok(if negative {
                    Literal::negative(atom)
                } else {
                    Literal::positive(atom)
                })
            }
            Some((column, token)) => {
                Err((column, format!("expected literal, found {}", token.describe())))
            }
            None => Err((self.column(), "expected literal, found end of line".into())),
        }
    }
}

fn parse_line(line: &str) -> Result<Statement, LineError> {
    let tokens = tokenize(line)?;
    let mut cursor = Cursor {
        tokens,
        pos: 0,
        line_len: line.chars().count(),
    };

    if matches!(cursor.peek(), Some(Token::FactMarker)) {
        cursor.next();
        let lit = cursor.literal()?;
        cursor.expect_end()?;
        return Ok(Statement::Fact(lit));
    }

    let label = match cursor.next() {
        Some((_, Token::Ident(name))) => name,
        Some((column, token)) => {
            return Err((column, format!("expected rule label, found {}", token.describe())))
        }
        None => return Err((1, "empty statement".into())),
    };

    match cursor.next() {
        Some((_, Token::Colon)) => {
            if !is_valid_label(&label) {
                return Err((1, format!("invalid rule label {label:?}")));
            }
            let mut body = Vec::new();
            let kind = loop {
                match cursor.peek() {
                    Some(Token::Arrow(_)) => {
                        let Some((_, Token::Arrow(kind))) = cursor.next() else {
                            unreachable!()
                        };
                        break kind;
                    }
                    _ => {
                        if !body.is_empty() {
                            match cursor.next() {
                                Some((_, Token::Comma)) => {}
                                Some((column, token)) => {
                                    return Err((
                                        column,
                                        format!(
                                            "expected ',' or arrow, found {}",
                                            token.describe()
                                        ),
                                    ))
                                }
                                None => {
                                    return Err((
                                        cursor.column(),
                                        "expected ',' or arrow, found end of line".into(),
                                    ))
                                }
                            }
                        }
                        body.push(cursor.literal()?);
                    }
                }
            };
            let head = cursor.literal()?;
            cursor.expect_end()?;
            Ok(Statement::Rule(Rule::new(label, body, head, kind)))
        }
        Some((_, Token::Gt)) => {
            let inferior = match cursor.next() {
                Some((_, Token::Ident(name))) => name,
                Some((column, token)) => {
                    return Err((column, format!("expected rule label, found {}", token.describe())))
                }
                None => {
                    return Err((cursor.column(), "expected rule label, found end of line".into()))
                }
            };
            cursor.expect_end()?;
            Ok(Statement::Priority(SuperiorityPair::new(label, inferior)))
        }
        Some((column, token)) => Err((
            column,
            format!("expected ':' or '>' after {label:?}, found {}", token.describe()),
        )),
        None => Err((
            cursor.column(),
            format!("expected ':' or '>' after {label:?}, found end of line"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(s: &str) -> Literal {
        s.parse().unwrap()
    }

    #[test]
    fn parses_facts_rules_and_priorities() {
        let text = "\
# two-step derivation with an override
>> A0000002
r1: A0000002 => A0000001
r2: A0000001, -B -> -A0000000
r3: ~> A0000000
r2 > r1
";
        let theory = parse_theory(text).unwrap();
        assert_eq!(theory.facts(), &[lit("A0000002")]);
        assert_eq!(theory.rules().len(), 3);
        assert_eq!(theory.rules()[0].kind, RuleKind::Defeasible);
        assert_eq!(theory.rules()[1].kind, RuleKind::Strict);
        assert_eq!(theory.rules()[1].body, vec![lit("A0000001"), lit("-B")]);
        assert_eq!(theory.rules()[1].head, lit("-A0000000"));
        assert_eq!(theory.rules()[2].kind, RuleKind::Defeater);
        assert!(theory.rules()[2].body.is_empty());
        assert_eq!(theory.superiority(), &[SuperiorityPair::new("r2", "r1")]);
    }

    #[test]
    fn accepts_crlf_and_tight_spacing() {
        let theory = parse_theory(">>A0000002\r\nr1:A0000002=>A0000001\r\n").unwrap();
        assert_eq!(theory.facts(), &[lit("A0000002")]);
        assert_eq!(theory.rules()[0].head, lit("A0000001"));
    }

    #[test]
    fn priorities_may_reference_later_rules() {
        let text = "r2 > r1\nr1: => A0000001\nr2: A0000002 => -A0000001\n";
        let theory = parse_theory(text).unwrap();
        assert_eq!(theory.superiority(), &[SuperiorityPair::new("r2", "r1")]);
    }

    #[test]
    fn errors_are_collected_per_line() {
        let text = ">> \nr1: => A0000001\nr1 r2\nr9 > r1\n";
        let errors = parse_theory(text).unwrap_err();
        assert_eq!(errors.len(), 3);
        assert_eq!(errors[0].line, 1);
        assert_eq!(errors[1].line, 3);
        assert_eq!(errors[2].line, 4);
        assert!(errors[2].message.contains("r9"));
    }

    #[test]
    fn duplicate_label_error_points_at_second_use() {
        let text = "r1: => A0000001\nr1: => A0000002\n";
        let errors = parse_theory(text).unwrap_err();
        assert_eq!(errors.len(), 1);
        assert_eq!(errors[0].line, 2);
        assert!(errors[0].message.contains("line 1"));
    }

    #[test]
    fn duplicate_body_literal_warns_but_parses() {
        let (theory, diagnostics) =
            parse_theory_with_diagnostics("r1: A0000001, A0000001 => A0000000\n");
        let theory = theory.unwrap();
        assert_eq!(theory.rules()[0].body, vec![lit("A0000001")]);
        assert_eq!(diagnostics.len(), 1);
        assert_eq!(diagnostics[0].severity, Severity::Warning);
        assert_eq!(diagnostics[0].line, 1);
    }

    #[test]
    fn inline_comments_are_stripped() {
        let theory = parse_theory(">> A0000002 # the only fact\n").unwrap();
        assert_eq!(theory.facts(), &[lit("A0000002")]);
    }

    #[test]
    fn empty_input_yields_empty_theory() {
        let theory = parse_theory("").unwrap();
        assert_eq!(theory, Theory::empty());
        assert_eq!(print_theory(&theory), "");
    }

    #[test]
    fn print_places_priorities_after_both_rules() {
        let text = "\
r1: => A0000001
r2: A0000002 => -A0000001
r2 > r1
r3: => A0000000
r4: A0000001 => -A0000000
";
        let theory = parse_theory(text).unwrap();
        assert_eq!(print_theory(&theory), text);
    }

    #[test]
    fn print_then_parse_is_identity() {
        let text = "\
>> A0000006
>> -A0000005
r1: A0000006, -A0000005 -> A0000004
r2: ~> -A0000004
r3: => A0000000
r1 > r2
";
        let theory = parse_theory(text).unwrap();
        let printed = print_theory(&theory);
        let reparsed = parse_theory(&printed).unwrap();
        assert_eq!(reparsed, theory);
        assert_eq!(print_theory(&reparsed), printed);
    }
}
