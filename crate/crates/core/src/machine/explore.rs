use std::collections::BTreeSet;

use super::exec::{check_fuel, explore, macrostep, Outcome};
use super::{MachineError, PtMachine};

/// A finite set of input strings: every word of length `0..=max_len` over
/// `symbols`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputSpace {
    symbols: Vec<char>,
    max_len: usize,
}

impl InputSpace {
    pub fn new(symbols: impl IntoIterator<Item = char>, max_len: usize) -> Self {
        let symbols: BTreeSet<char> = symbols.into_iter().collect();
        InputSpace {
            symbols: symbols.into_iter().collect(),
            max_len,
        }
    }

    /// All non-blank letters of the machine's alphabet.
    pub fn over_alphabet(machine: &PtMachine, max_len: usize) -> Self {
        Self::new(machine.alphabet().letters(), max_len)
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Words ordered by length, then lexicographically.
    pub fn words(&self) -> Vec<String> {
        let mut out = vec![String::new()];
        let mut layer = vec![String::new()];
        for _ in 0..self.max_len {
            let mut next = Vec::with_capacity(layer.len() * self.symbols.len());
            for w in &layer {
                for &c in &self.symbols {
                    let mut v = w.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

/// Work-tape contents reachable from the empty work tape in at most `depth`
/// macrosteps over `inputs`.
pub fn reach(
    machine: &PtMachine,
    inputs: &InputSpace,
    depth: usize,
    fuel: usize,
) -> Result<BTreeSet<String>, MachineError> {
    check_fuel(fuel)?;
    if depth == 0 || inputs.max_len() == 0 {
        return Err(MachineError::Parameter(
            "depth and input length bound must be at least 1".into(),
        ));
    }
    let words = inputs.words();
    let mut seen = BTreeSet::new();
    seen.insert(String::new());
    let mut frontier = vec![String::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for input in &words {
                for record in macrostep(machine, w, input, fuel)?.records {
                    if let Outcome::Halted { work_after, .. } = record.outcome {
                        if seen.insert(work_after.clone()) {
                            next.push(work_after);
                        }
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(seen)
}

/// Result of a bounded search for unbounded nondeterminism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NondetVerdict {
    /// At most `outcome_bound` distinct outcomes within the fuel. Not a proof
    /// of boundedness.
    BoundedAtFuel { outcomes: usize },
    /// More than `outcome_bound` distinct `(w_out, w')` outcomes were found.
    ExceedsBound { observed: usize },
}

/// Counts distinct `(w_out, w')` outcomes of one macrostep, stopping as soon
/// as the count passes `outcome_bound`. A machine with unboundedly many
/// outcomes must diverge, so `ExceedsBound` is evidence of divergence.
pub fn detect_unbounded_nondet(
    machine: &PtMachine,
    work: &str,
    input: &str,
    outcome_bound: usize,
    fuel: usize,
) -> Result<NondetVerdict, MachineError> {
    if outcome_bound == 0 {
        return Err(MachineError::Parameter("outcome bound must be at least 1".into()));
    }
    let (outcomes, _) = explore(machine, work, input, fuel, |n| n > outcome_bound)?;
    // a macrostep with no halting branch has the single outcome (μ, s_div)
    let count = outcomes.len().max(1);
    Ok(if count > outcome_bound {
        NondetVerdict::ExceedsBound { observed: count }
    } else {
        NondetVerdict::BoundedAtFuel { outcomes: count }
    })
}
