//! Line-oriented machine description files.
//!
//! ```text
//! # comment
//! alphabet: a b c
//! states: q0 q1
//! initial: q0
//! rule: q0 a * _ -> q0 R aR aR
//! ```
//!
//! A rule lists the state, the input/work/output reads, `->`, the successor
//! (`H` for halt) and one action per tape: a symbol to write, `L`, `R`, or a
//! symbol followed by a move (`aR`). Reads may use `*` for any symbol.

use std::collections::HashMap;

use thiserror::Error;

use super::{
    Action, Alphabet, MachineError, Move, Next, PtMachine, Read, Rule, StateId, WILDCARD,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

struct RawRule<'a> {
    line: usize,
    tokens: Vec<&'a str>,
}

pub(super) fn parse_machine(text: &str) -> Result<PtMachine, ParseError> {
    let mut alphabet: Option<(usize, Vec<char>)> = None;
    let mut states: Option<(usize, Vec<String>)> = None;
    let mut initial: Option<(usize, String)> = None;
    let mut raw_rules = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content
            .split_once(':')
            .ok_or_else(|| err(line, "expected '<key>: <value>'"))?;
        let values: Vec<&str> = rest.split_whitespace().collect();
        match key.trim() {
            "alphabet" => {
                let mut symbols = Vec::new();
                for v in &values {
                    let mut chars = v.chars();
                    match (chars.next(), chars.next()) {
                        (Some(c), None) => symbols.push(c),
                        _ => return Err(err(line, format!("symbol {v:?} must be a single character"))),
                    }
                }
                alphabet = Some((line, symbols));
            }
            "states" => {
                if values.is_empty() {
                    return Err(err(line, "no states declared"));
                }
                states = Some((line, values.iter().map(|s| s.to_string()).collect()));
            }
            "initial" => match values.as_slice() {
                [q] => initial = Some((line, q.to_string())),
                _ => return Err(err(line, "expected exactly one initial state")),
            },
            "rule" => raw_rules.push(RawRule {
                line,
                tokens: values,
            }),
            other => return Err(err(line, format!("unknown key {other:?}"))),
        }
    }

    let (a_line, symbols) = alphabet.ok_or_else(|| err(0, "missing 'alphabet:' line"))?;
    let alphabet = Alphabet::new(symbols).map_err(|e| err(a_line, e.to_string()))?;
    let (s_line, states) = states.ok_or_else(|| err(0, "missing 'states:' line"))?;
    if states.iter().any(|s| s == "H") {
        return Err(err(s_line, MachineError::HaltDeclared.to_string()));
    }
    let ids: HashMap<&str, StateId> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), StateId(i)))
        .collect();
    if ids.len() != states.len() {
        return Err(err(s_line, "duplicate state name"));
    }
    let (i_line, initial) = initial.ok_or_else(|| err(0, "missing 'initial:' line"))?;
    let initial = *ids
        .get(initial.as_str())
        .ok_or_else(|| err(i_line, MachineError::BadInitial(initial.clone()).to_string()))?;

    let mut rules = Vec::with_capacity(raw_rules.len());
    let mut lines = Vec::with_capacity(raw_rules.len());
    for raw in &raw_rules {
        rules.push(parse_rule(raw, &ids)?);
        lines.push(raw.line);
    }

    PtMachine::new(alphabet, states, initial, rules).map_err(|e| {
        let line = match &e {
            MachineError::Discipline { rule, .. } => lines[*rule],
            MachineError::UnknownSymbol { symbol } => raw_rules
                .iter()
                .find(|r| r.tokens.iter().any(|t| t.contains(*symbol)))
                .map_or(a_line, |r| r.line),
            _ => 0,
        };
        err(line, e.to_string())
    })
}

fn parse_rule(raw: &RawRule<'_>, ids: &HashMap<&str, StateId>) -> Result<Rule, ParseError> {
    let line = raw.line;
    let t = &raw.tokens;
    if t.len() != 9 || t[4] != "->" {
        return Err(err(
            line,
            "rule must read '<state> <in> <work> <out> -> <next> <act> <act> <act>'",
        ));
    }
    let state = *ids
        .get(t[0])
        .ok_or_else(|| err(line, format!("unknown state {:?}", t[0])))?;
    let mut reads = [Read::Any; 3];
    for k in 0..3 {
        reads[k] = parse_read(t[1 + k]).ok_or_else(|| err(line, format!("bad read {:?}", t[1 + k])))?;
    }
    let next = match t[5] {
        "H" => Next::Halt,
        q => Next::State(
            *ids
                .get(q)
                .ok_or_else(|| err(line, format!("unknown state {q:?}")))?,
        ),
    };
    let mut actions = [Action::Move(Move::Right); 3];
    for k in 0..3 {
        actions[k] =
            parse_action(t[6 + k]).ok_or_else(|| err(line, format!("bad action {:?}", t[6 + k])))?;
    }
    Ok(Rule {
        state,
        reads,
        next,
        actions,
    })
}

fn parse_read(token: &str) -> Option<Read> {
    let mut chars = token.chars();
    match (chars.next(), chars.next()) {
        (Some(WILDCARD), None) => Some(Read::Any),
        (Some(c), None) => Some(Read::Symbol(c)),
        _ => None,
    }
}

fn parse_move(c: char) -> Option<Move> {
    match c {
        'L' => Some(Move::Left),
        'R' => Some(Move::Right),
        _ => None,
    }
}

fn parse_action(token: &str) -> Option<Action> {
    let chars: Vec<char> = token.chars().collect();
    match chars.as_slice() {
        [c] => Some(parse_move(*c).map_or(Action::Write(*c), Action::Move)),
        [c, m] => parse_move(*m).map(|m| Action::WriteMove(*c, m)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "alphabet: a b\nstates: q0\ninitial: q0\n";

    fn parse_err(rules: &str) -> ParseError {
        PtMachine::parse(&format!("{HEADER}{rules}")).unwrap_err()
    }

    #[test]
    fn parses_actions() {
        let m = PtMachine::parse(&format!("{HEADER}rule: q0 a * _ -> H L bR _\n")).unwrap();
        let r = &m.rules()[0];
        assert_eq!(r.reads, [Read::Symbol('a'), Read::Any, Read::Symbol('_')]);
        assert_eq!(r.next, Next::Halt);
        assert_eq!(
            r.actions,
            [
                Action::Move(Move::Left),
                Action::WriteMove('b', Move::Right),
                Action::Write('_')
            ]
        );
    }

    #[test]
    fn input_write_rejected_with_line() {
        let e = parse_err("# ok\nrule: q0 a * _ -> H a R R\n");
        assert_eq!(e.line, 5);
        assert!(e.message.contains("read-only input"), "{e}");
    }

    #[test]
    fn output_read_rejected_with_line() {
        let e = parse_err("rule: q0 a * a -> H R R R\n");
        assert_eq!(e.line, 4);
        assert!(e.message.contains("write-only output"), "{e}");
    }

    #[test]
    fn output_left_rejected() {
        let e = parse_err("rule: q0 a * _ -> H R R aL\n");
        assert!(e.message.contains("left"), "{e}");
    }

    #[test]
    fn unknown_symbol_and_state() {
        assert!(parse_err("rule: q0 z * _ -> H R R R\n").message.contains("alphabet"));
        assert!(parse_err("rule: q0 a * _ -> q9 R R R\n").message.contains("q9"));
        assert_eq!(parse_err("rule: q0 a * _ H R R R\n").line, 4);
    }

    #[test]
    fn halt_is_not_a_state() {
        let e = PtMachine::parse("alphabet: a\nstates: q0 H\ninitial: q0\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn missing_header_lines() {
        assert!(PtMachine::parse("states: q0\ninitial: q0\n").is_err());
        assert!(PtMachine::parse("alphabet: a\ninitial: q0\n").is_err());
        assert!(PtMachine::parse("alphabet: a\nstates: q0\n").is_err());
        assert!(PtMachine::parse("alphabet: ab\nstates: q0\ninitial: q0\n").is_err());
        assert!(PtMachine::parse("alphabet: L\nstates: q0\ninitial: q0\n").is_err());
    }
}
