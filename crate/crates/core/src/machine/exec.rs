use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MachineError, Move, Next, Output, PtMachine, Rule, StateId, WorkState, BLANK};

/// A one-way infinite tape. Cells beyond the stored prefix are blank and the
/// stored prefix never ends in a blank, so equal tapes compare equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tape {
    cells: Vec<char>,
}

impl Tape {
    pub fn from_word(word: &str) -> Self {
        let mut tape = Tape {
            cells: word.chars().collect(),
        };
        tape.trim();
        tape
    }

    pub fn get(&self, pos: usize) -> char {
        self.cells.get(pos).copied().unwrap_or(BLANK)
    }

    pub fn set(&mut self, pos: usize, symbol: char) {
        if pos >= self.cells.len() {
            if symbol == BLANK {
                return;
            }
            self.cells.resize(pos + 1, BLANK);
        }
        self.cells[pos] = symbol;
        self.trim();
    }

    fn trim(&mut self) {
        while self.cells.last() == Some(&BLANK) {
            self.cells.pop();
        }
    }

    /// Tape content with trailing blanks removed.
    pub fn content(&self) -> String {
        self.cells.iter().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Control {
    State(StateId),
    Halt,
    Div,
}

/// A full configuration: control, the three tapes and their heads.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MachineState {
    pub control: Control,
    pub tapes: [Tape; 3],
    pub heads: [usize; 3],
}

impl MachineState {
    /// Start of a macrostep: initial control, input tape `input`, work tape
    /// `work`, blank output tape, all heads at 0.
    pub fn initial(machine: &PtMachine, work: &str, input: &str) -> Self {
        MachineState {
            control: Control::State(machine.initial()),
            tapes: [Tape::from_word(input), Tape::from_word(work), Tape::default()],
            heads: [0; 3],
        }
    }

    /// Builds a state from raw parts, rejecting negative head positions.
    pub fn from_parts(control: Control, tapes: [&str; 3], heads: [i64; 3]) -> Result<Self, MachineError> {
        let mut h = [0usize; 3];
        for (k, &pos) in heads.iter().enumerate() {
            if pos < 0 {
                return Err(MachineError::Structural(format!(
                    "head {k} at negative position {pos}"
                )));
            }
            h[k] = pos as usize;
        }
        Ok(MachineState {
            control,
            tapes: [
                Tape::from_word(tapes[0]),
                Tape::from_word(tapes[1]),
                Tape::from_word(tapes[2]),
            ],
            heads: h,
        })
    }

    fn apply(&self, rule: &Rule) -> MachineState {
        let mut next = self.clone();
        for (k, action) in rule.actions.iter().enumerate() {
            if let Some(c) = action.written() {
                next.tapes[k].set(next.heads[k], c);
            }
            match action.movement() {
                Some(Move::Left) => next.heads[k] = next.heads[k].saturating_sub(1),
                Some(Move::Right) => next.heads[k] += 1,
                None => {}
            }
        }
        next.control = match rule.next {
            Next::State(s) => Control::State(s),
            Next::Halt => Control::Halt,
        };
        next
    }

    /// Distinct successors in order of the first rule producing each.
    fn successors(&self, machine: &PtMachine) -> Result<Vec<MachineState>, MachineError> {
        let state = match self.control {
            Control::State(s) => s,
            Control::Halt | Control::Div => return Ok(Vec::new()),
        };
        if state.0 >= machine.states().len() {
            return Err(MachineError::Structural(format!("unknown control state #{}", state.0)));
        }
        let input = self.tapes[0].get(self.heads[0]);
        let work = self.tapes[1].get(self.heads[1]);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for rule in machine.applicable(state, input, work) {
            let succ = self.apply(rule);
            if seen.insert(succ.clone()) {
                out.push(succ);
            }
        }
        Ok(out)
    }
}

/// One application of the transition relation. Returns every successor in
/// canonical order; empty when the machine is stuck or not running.
pub fn step(machine: &PtMachine, state: &MachineState) -> Result<Vec<MachineState>, MachineError> {
    let mut succ = state.successors(machine)?;
    succ.sort();
    Ok(succ)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Halted { output: String, work_after: String },
    Diverged,
}

/// `w --(w_in / w_out)--> w'`. The divergence output μ and the sentinel
/// state s_div always occur together, which the [`Outcome`] enum encodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MacrostepRecord {
    pub work_before: String,
    pub input: String,
    pub outcome: Outcome,
    pub steps_used: usize,
}

impl MacrostepRecord {
    pub fn w_out(&self) -> Output {
        match &self.outcome {
            Outcome::Halted { output, .. } => Output::Word(output.clone()),
            Outcome::Diverged => Output::Mu,
        }
    }

    pub fn w_after(&self) -> WorkState {
        match &self.outcome {
            Outcome::Halted { work_after, .. } => WorkState::Word(work_after.clone()),
            Outcome::Diverged => WorkState::Div,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self.outcome, Outcome::Diverged)
    }

    /// The record without its step count, for set comparisons.
    pub fn key(&self) -> (String, String, Output, WorkState) {
        (
            self.work_before.clone(),
            self.input.clone(),
            self.w_out(),
            self.w_after(),
        )
    }
}

/// All outcomes of one macrostep. `fuel_incomplete` is set when some branch
/// was still running when the fuel ran out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Macrostep {
    pub records: Vec<MacrostepRecord>,
    pub fuel_incomplete: bool,
}

impl Macrostep {
    pub fn diverged(&self) -> bool {
        self.records.len() == 1 && self.records[0].is_divergent()
    }
}

pub(super) fn check_fuel(fuel: usize) -> Result<(), MachineError> {
    if fuel == 0 {
        return Err(MachineError::Parameter("fuel must be at least 1".into()));
    }
    Ok(())
}

/// Breadth-first exploration of every computation from `(w, w_in)`.
/// `stop` is consulted after each level with the number of distinct halting
/// outcomes found so far; returning true ends the search early.
pub(super) fn explore(
    machine: &PtMachine,
    work: &str,
    input: &str,
    fuel: usize,
    mut stop: impl FnMut(usize) -> bool,
) -> Result<(BTreeMap<(String, String), usize>, bool), MachineError> {
    check_fuel(fuel)?;
    machine.alphabet().check_word(work)?;
    machine.alphabet().check_word(input)?;
    let mut frontier = BTreeSet::new();
    frontier.insert(MachineState::initial(machine, work, input));
    let mut outcomes = BTreeMap::new();
    for level in 1..=fuel {
        let mut next = BTreeSet::new();
        for cfg in &frontier {
            for succ in cfg.successors(machine)? {
                if succ.control == Control::Halt {
                    outcomes
                        .entry((succ.tapes[2].content(), succ.tapes[1].content()))
                        .or_insert(level);
                } else {
                    next.insert(succ);
                }
            }
        }
        frontier = next;
        if frontier.is_empty() || stop(outcomes.len()) {
            break;
        }
    }
    Ok((outcomes, !frontier.is_empty()))
}

/// Runs one macrostep `w --(w_in / ·)--> ·` over every nondeterministic
/// branch, bounded by `fuel` steps.
pub fn macrostep(
    machine: &PtMachine,
    work: &str,
    input: &str,
    fuel: usize,
) -> Result<Macrostep, MachineError> {
    let (outcomes, live) = explore(machine, work, input, fuel, |_| false)?;
    let records = if outcomes.is_empty() {
        vec![MacrostepRecord {
            work_before: work.to_string(),
            input: input.to_string(),
            outcome: Outcome::Diverged,
            steps_used: fuel,
        }]
    } else {
        outcomes
            .into_iter()
            .map(|((output, work_after), steps)| MacrostepRecord {
                work_before: work.to_string(),
                input: input.to_string(),
                outcome: Outcome::Halted { output, work_after },
                steps_used: steps,
            })
            .collect()
    };
    Ok(Macrostep {
        records,
        fuel_incomplete: live,
    })
}

/// How a single run resolves nondeterministic choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// Error as soon as a configuration has two distinct successors.
    Deterministic,
    /// Follow the first applicable rule in file order.
    LexFirst,
    /// Pick uniformly among distinct successors with a seeded generator.
    Seeded(u64),
}

/// A finite prefix of an interaction stream, with the macrostep records that
/// produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionStream {
    pub records: Vec<MacrostepRecord>,
    pub truncated: bool,
}

impl InteractionStream {
    pub fn pairs(&self) -> Vec<(String, Output)> {
        self.records
            .iter()
            .map(|r| (r.input.clone(), r.w_out()))
            .collect()
    }

    pub fn diverged(&self) -> bool {
        self.records.last().is_some_and(|r| r.is_divergent())
    }
}

pub(crate) struct Chooser {
    policy: Policy,
    rng: Option<ChaCha8Rng>,
}

impl Chooser {
    pub(crate) fn new(policy: Policy) -> Self {
        let rng = match policy {
            Policy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Chooser { policy, rng }
    }

    /// Follows one branch of the macrostep starting at `(work, input)`.
    pub(crate) fn run_branch(
        &mut self,
        machine: &PtMachine,
        index: usize,
        work: &str,
        input: &str,
        fuel: usize,
    ) -> Result<MacrostepRecord, MachineError> {
        machine.alphabet().check_word(work)?;
        machine.alphabet().check_word(input)?;
        let mut cfg = MachineState::initial(machine, work, input);
        for used in 1..=fuel {
            let mut succ = cfg.successors(machine)?;
            let pick = match succ.len() {
                0 => break,
                1 => 0,
                n => match self.policy {
                    Policy::Deterministic => {
                        return Err(MachineError::Ambiguous {
                            index,
                            successors: n,
                        })
                    }
                    Policy::LexFirst => 0,
                    Policy::Seeded(_) => self.rng.as_mut().map_or(0, |r| r.gen_range(0..n)),
                },
            };
            cfg = succ.swap_remove(pick);
            if cfg.control == Control::Halt {
                return Ok(MacrostepRecord {
                    work_before: work.to_string(),
                    input: input.to_string(),
                    outcome: Outcome::Halted {
                        output: cfg.tapes[2].content(),
                        work_after: cfg.tapes[1].content(),
                    },
                    steps_used: used,
                });
            }
        }
        Ok(MacrostepRecord {
            work_before: work.to_string(),
            input: input.to_string(),
            outcome: Outcome::Diverged,
            steps_used: fuel,
        })
    }
}

/// Feeds `inputs` to the machine one macrostep at a time, threading the work
/// tape through. Stops at the first divergence.
pub fn run_stream<S: AsRef<str>>(
    machine: &PtMachine,
    inputs: &[S],
    fuel: usize,
    policy: Policy,
) -> Result<InteractionStream, MachineError> {
    check_fuel(fuel)?;
    let mut chooser = Chooser::new(policy);
    let mut work = String::new();
    let mut records = Vec::with_capacity(inputs.len());
    for (index, input) in inputs.iter().enumerate() {
        let record = chooser.run_branch(machine, index, &work, input.as_ref(), fuel)?;
        let diverged = record.is_divergent();
        if let Outcome::Halted { work_after, .. } = &record.outcome {
            work = work_after.clone();
        }
        records.push(record);
        if diverged {
            break;
        }
    }
    Ok(InteractionStream {
        records,
        truncated: true,
    })
}
