//! Nondeterministic 3-tape persistent Turing machines.
//!
//! A [`PtMachine`] has a read-only input tape, a read/write work tape and a
//! write-only output tape. One *macrostep* runs the machine from its initial
//! control state on a fresh input tape until it halts; the work tape is then
//! carried over to the next macrostep. Runs that never halt within the fuel
//! budget fall into the divergence sentinel and emit the divergence symbol.

mod exec;
mod explore;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use exec::{
    macrostep, run_stream, step, Control, InteractionStream, Macrostep, MacrostepRecord,
    MachineState, Outcome, Policy, Tape,
};
pub(crate) use exec::Chooser;
pub use explore::{detect_unbounded_nondet, reach, InputSpace, NondetVerdict};
pub use parse::ParseError;

/// The blank symbol. Always part of every alphabet.
pub const BLANK: char = '_';
/// Read pattern matching any symbol (machine files only).
pub const WILDCARD: char = '*';
/// Textual rendering of the divergence output and the divergence state.
pub const DIVERGENCE_TOKEN: &str = "!";
/// Textual rendering of the empty string.
pub const EMPTY_TOKEN: &str = "_";

const RESERVED: &[char] = &[BLANK, WILDCARD, '!', 'L', 'R', '#', '>', '-', ':', ','];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("invalid alphabet symbol {0:?}")]
    ReservedSymbol(char),
    #[error("symbol {symbol:?} is not in the alphabet")]
    UnknownSymbol { symbol: char },
    #[error("unknown control state {0}")]
    UnknownState(String),
    #[error("initial state {0} is not a declared state")]
    BadInitial(String),
    #[error("'H' denotes halt and cannot be declared as a state")]
    HaltDeclared,
    #[error("rule {rule}: {reason}")]
    Discipline { rule: usize, reason: &'static str },
    #[error("malformed machine state: {0}")]
    Structural(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("macrostep {index} branches under the deterministic policy ({successors} distinct successors)")]
    Ambiguous { index: usize, successors: usize },
}

/// A finite alphabet. The blank is always a member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self, MachineError> {
        let mut set = BTreeSet::new();
        set.insert(BLANK);
        for c in symbols {
            if c == BLANK {
                continue;
            }
            if c.is_whitespace() || RESERVED.contains(&c) {
                return Err(MachineError::ReservedSymbol(c));
            }
            set.insert(c);
        }
        Ok(Alphabet {
            symbols: set.into_iter().collect(),
        })
    }

    /// All symbols including the blank, sorted.
    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    /// Non-blank symbols, sorted.
    pub fn letters(&self) -> impl Iterator<Item = char> + '_ {
        self.symbols.iter().copied().filter(|&c| c != BLANK)
    }

    pub fn contains(&self, c: char) -> bool {
        self.symbols.binary_search(&c).is_ok()
    }

    pub fn check_word(&self, word: &str) -> Result<(), MachineError> {
        match word.chars().find(|&c| !self.contains(c)) {
            Some(symbol) => Err(MachineError::UnknownSymbol { symbol }),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Read {
    Symbol(char),
    Any,
}

impl Read {
    fn matches(self, c: char) -> bool {
        match self {
            Read::Any => true,
            Read::Symbol(s) => s == c,
        }
    }
}

/// What a rule does to one tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Write(char),
    Move(Move),
    WriteMove(char, Move),
}

impl Action {
    fn written(self) -> Option<char> {
        match self {
            Action::Write(c) | Action::WriteMove(c, _) => Some(c),
            Action::Move(_) => None,
        }
    }

    fn movement(self) -> Option<Move> {
        match self {
            Action::Move(m) | Action::WriteMove(_, m) => Some(m),
            Action::Write(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Next {
    State(StateId),
    Halt,
}

/// Tape order in reads and actions: input, work, output.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub state: StateId,
    pub reads: [Read; 3],
    pub next: Next,
    pub actions: [Action; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtMachine {
    alphabet: Alphabet,
    states: Vec<String>,
    initial: StateId,
    rules: Vec<Rule>,
}

impl PtMachine {
    /// Builds a machine, enforcing the tape discipline: the input tape is
    /// never written, the output tape is never read and its head never moves
    /// left.
    pub fn new(
        alphabet: Alphabet,
        states: Vec<String>,
        initial: StateId,
        rules: Vec<Rule>,
    ) -> Result<Self, MachineError> {
        if states.iter().any(|s| s == "H") {
            return Err(MachineError::HaltDeclared);
        }
        if initial.0 >= states.len() {
            return Err(MachineError::BadInitial(format!("#{}", initial.0)));
        }
        for (i, rule) in rules.iter().enumerate() {
            check_rule(&alphabet, states.len(), i, rule)?;
        }
        Ok(PtMachine {
            alphabet,
            states,
            initial,
            rules,
        })
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse::parse_machine(text)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, id: StateId) -> Option<&str> {
        self.states.get(id.0).map(String::as_str)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Rules applicable to `state` reading `input` and `work`, in file order.
    pub(crate) fn applicable(
        &self,
        state: StateId,
        input: char,
        work: char,
    ) -> impl Iterator<Item = &Rule> + '_ {
        self.rules.iter().filter(move |r| {
            r.state == state && r.reads[0].matches(input) && r.reads[1].matches(work)
        })
    }

    /// True when no concrete configuration has more than one applicable rule.
    pub fn is_deterministic(&self) -> bool {
        let symbols = self.alphabet.symbols();
        (0..self.states.len()).all(|q| {
            symbols.iter().all(|&i| {
                symbols
                    .iter()
                    .all(|&w| self.applicable(StateId(q), i, w).take(2).count() <= 1)
            })
        })
    }
}

fn check_rule(
    alphabet: &Alphabet,
    n_states: usize,
    index: usize,
    rule: &Rule,
) -> Result<(), MachineError> {
    let discipline = |reason| MachineError::Discipline {
        rule: index,
        reason,
    };
    if rule.state.0 >= n_states {
        return Err(MachineError::UnknownState(format!("#{}", rule.state.0)));
    }
    if let Next::State(s) = rule.next {
        if s.0 >= n_states {
            return Err(MachineError::UnknownState(format!("#{}", s.0)));
        }
    }
    for read in &rule.reads {
        if let Read::Symbol(c) = read {
            if !alphabet.contains(*c) {
                return Err(MachineError::UnknownSymbol { symbol: *c });
            }
        }
    }
    for action in &rule.actions {
        if let Some(c) = action.written() {
            if !alphabet.contains(c) {
                return Err(MachineError::UnknownSymbol { symbol: c });
            }
        }
    }
    if rule.actions[0].written().is_some() {
        return Err(discipline("rule writes to the read-only input tape"));
    }
    if !matches!(rule.reads[2], Read::Any | Read::Symbol(BLANK)) {
        return Err(discipline("rule reads the write-only output tape"));
    }
    if rule.actions[2].movement() == Some(Move::Left) {
        return Err(discipline("rule moves the write-only output head left"));
    }
    Ok(())
}

/// The divergence-aware output of a macrostep: a word, or the symbol μ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Output {
    Word(String),
    Mu,
}

impl Output {
    pub fn word(s: impl Into<String>) -> Self {
        Output::Word(s.into())
    }

    pub fn is_mu(&self) -> bool {
        matches!(self, Output::Mu)
    }

    pub fn parse_token(token: &str) -> Self {
        match token {
            DIVERGENCE_TOKEN => Output::Mu,
            EMPTY_TOKEN => Output::Word(String::new()),
            s => Output::Word(s.to_string()),
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::Mu => f.write_str(DIVERGENCE_TOKEN),
            Output::Word(w) => f.write_str(render_word(w)),
        }
    }
}

/// A work-tape content, or the divergence sentinel state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WorkState {
    Word(String),
    Div,
}

impl WorkState {
    pub fn word(s: impl Into<String>) -> Self {
        WorkState::Word(s.into())
    }

    pub fn empty() -> Self {
        WorkState::Word(String::new())
    }

    pub fn as_word(&self) -> Option<&str> {
        match self {
            WorkState::Word(w) => Some(w),
            WorkState::Div => None,
        }
    }

    pub fn parse_token(token: &str) -> Self {
        match token {
            DIVERGENCE_TOKEN => WorkState::Div,
            EMPTY_TOKEN => WorkState::Word(String::new()),
            s => WorkState::Word(s.to_string()),
        }
    }
}

impl fmt::Display for WorkState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorkState::Div => f.write_str(DIVERGENCE_TOKEN),
            WorkState::Word(w) => f.write_str(render_word(w)),
        }
    }
}

/// Renders the empty word as `_`.
pub fn render_word(w: &str) -> &str {
    if w.is_empty() {
        EMPTY_TOKEN
    } else {
        w
    }
}

/// Inverse of [`render_word`].
pub fn parse_word(token: &str) -> String {
    if token == EMPTY_TOKEN {
        String::new()
    } else {
        token.to_string()
    }
}
