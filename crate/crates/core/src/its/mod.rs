//! Interactive transition systems: rooted transition systems over work-tape
//! states whose transitions carry `(w_in, w_out)` labels.

mod bisim;
mod env;
mod extract;
mod iso;
mod traces;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::machine::{Output, WorkState, DIVERGENCE_TOKEN};

pub use bisim::{bisim_check, bisim_witness, Formula};
pub use env::{env_classify, render_partition, BehaviorTree, Observation, ObservationEnv};
pub use extract::{extract_its, records_up_to};
pub use iso::iso_check;
pub use traces::{render_trace, separating_trace, stream_equiv, traces_up_to, Trace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ItsError {
    #[error("state {0} is not reachable from the root")]
    Unreachable(String),
    #[error("the divergence state has an outgoing transition")]
    DivergenceHasSuccessor,
    #[error("transition {0} mixes the divergence output and a non-divergence target")]
    DivergenceMismatch(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Machine(#[from] crate::machine::MachineError),
}

/// A transition label: the input consumed and the output produced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IoLabel {
    pub input: String,
    pub output: Output,
}

impl IoLabel {
    pub fn new(input: impl Into<String>, output: Output) -> Self {
        IoLabel {
            input: input.into(),
            output,
        }
    }
}

impl fmt::Display for IoLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", crate::machine::render_word(&self.input), self.output)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub source: WorkState,
    pub input: String,
    pub target: WorkState,
    pub output: Output,
}

impl Transition {
    pub fn new(source: WorkState, input: impl Into<String>, target: WorkState, output: Output) -> Self {
        Transition {
            source,
            input: input.into(),
            target,
            output,
        }
    }

    pub fn label(&self) -> IoLabel {
        IoLabel::new(self.input.clone(), self.output.clone())
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.source,
            crate::machine::render_word(&self.input),
            self.target,
            self.output
        )
    }
}

/// `⟨S, m, r⟩` with every state reachable from `r` and no transitions out of
/// the divergence state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Its {
    root: WorkState,
    states: BTreeSet<WorkState>,
    transitions: BTreeSet<Transition>,
}

impl Its {
    pub fn new(
        root: WorkState,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self, ItsError> {
        let transitions: BTreeSet<Transition> = transitions.into_iter().collect();
        let mut states = BTreeSet::new();
        states.insert(root.clone());
        for t in &transitions {
            if t.source == WorkState::Div {
                return Err(ItsError::DivergenceHasSuccessor);
            }
            if t.output.is_mu() != (t.target == WorkState::Div) {
                return Err(ItsError::DivergenceMismatch(t.to_string()));
            }
            states.insert(t.source.clone());
            states.insert(t.target.clone());
        }
        let its = Its {
            root,
            states,
            transitions,
        };
        let reached = its.reachable();
        if let Some(s) = its.states.iter().find(|s| !reached.contains(*s)) {
            return Err(ItsError::Unreachable(s.to_string()));
        }
        Ok(its)
    }

    fn reachable(&self) -> BTreeSet<WorkState> {
        let mut out: BTreeMap<&WorkState, Vec<&WorkState>> = BTreeMap::new();
        for t in &self.transitions {
            out.entry(&t.source).or_default().push(&t.target);
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([&self.root]);
        seen.insert(self.root.clone());
        while let Some(s) = queue.pop_front() {
            for &t in out.get(s).into_iter().flatten() {
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    pub fn root(&self) -> &WorkState {
        &self.root
    }

    pub fn states(&self) -> &BTreeSet<WorkState> {
        &self.states
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }

    /// Renames states with an injective map.
    pub fn relabel(&self, f: impl Fn(&WorkState) -> WorkState) -> Result<Its, ItsError> {
        Its::new(
            f(&self.root),
            self.transitions.iter().map(|t| Transition {
                source: f(&t.source),
                input: t.input.clone(),
                target: f(&t.target),
                output: t.output.clone(),
            }),
        )
    }

    /// Parses the text format: `root: <label>` followed by one
    /// `<source> <w_in> <target> <w_out>` line per transition. `_` is the
    /// empty word and `!` the divergence output / state.
    pub fn parse(text: &str) -> Result<Self, ItsError> {
        let perr = |line, message: &str| ItsError::Parse {
            line,
            message: message.to_string(),
        };
        let mut root = None;
        let mut transitions = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix("root:") {
                if root.is_some() {
                    return Err(perr(line, "duplicate root line"));
                }
                let label = rest.trim();
                if label.is_empty() || label.contains(char::is_whitespace) {
                    return Err(perr(line, "expected 'root: <label>'"));
                }
                root = Some(WorkState::parse_token(label));
                continue;
            }
            if root.is_none() {
                return Err(perr(line, "first line must be 'root: <label>'"));
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let [source, input, target, output] = tokens.as_slice() else {
                return Err(perr(line, "expected '<source> <w_in> <target> <w_out>'"));
            };
            if *input == DIVERGENCE_TOKEN {
                return Err(perr(line, "input cannot be the divergence symbol"));
            }
            transitions.push(Transition::new(
                WorkState::parse_token(source),
                crate::machine::parse_word(input),
                WorkState::parse_token(target),
                Output::parse_token(output),
            ));
        }
        let root = root.ok_or_else(|| perr(1, "missing 'root:' line"))?;
        Its::new(root, transitions)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("root: {}\n", self.root);
        for t in &self.transitions {
            s.push_str(&t.to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for Its {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Integer-indexed view used by the equivalence checks.
pub(crate) struct Indexed {
    pub states: Vec<WorkState>,
    pub root: usize,
    /// Outgoing `(label, target)` pairs, sorted.
    pub succ: Vec<Vec<(IoLabel, usize)>>,
}

impl Indexed {
    pub fn new(its: &Its) -> Self {
        let states: Vec<WorkState> = its.states.iter().cloned().collect();
        let index: BTreeMap<&WorkState, usize> =
            states.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut succ = vec![Vec::new(); states.len()];
        for t in &its.transitions {
            succ[index[&t.source]].push((t.label(), index[&t.target]));
        }
        for list in &mut succ {
            list.sort();
        }
        Indexed {
            root: index[&its.root],
            states,
            succ,
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }
}
