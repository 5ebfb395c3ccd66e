use std::collections::BTreeSet;

use super::{Its, ItsError, Transition};
use crate::machine::{macrostep, InputSpace, MachineError, PtMachine, WorkState};

/// Unfolds the macrostep relation from the empty work tape. `depth` counts
/// transition layers; states first reached at the last layer are leaves.
pub fn extract_its(
    machine: &PtMachine,
    inputs: &InputSpace,
    depth: usize,
    fuel: usize,
) -> Result<Its, ItsError> {
    let transitions = unfold(machine, inputs, depth, fuel)?;
    Its::new(WorkState::empty(), transitions)
}

/// Every macrostep record `(w, w_in, w_out, w')` met by the same unfolding,
/// without step counts.
pub fn records_up_to(
    machine: &PtMachine,
    inputs: &InputSpace,
    depth: usize,
    fuel: usize,
) -> Result<BTreeSet<Transition>, ItsError> {
    unfold(machine, inputs, depth, fuel)
}

fn unfold(
    machine: &PtMachine,
    inputs: &InputSpace,
    depth: usize,
    fuel: usize,
) -> Result<BTreeSet<Transition>, ItsError> {
    if depth == 0 || inputs.max_len() == 0 {
        return Err(MachineError::Parameter(
            "depth and input length bound must be at least 1".into(),
        )
        .into());
    }
    let words = inputs.words();
    let mut seen = BTreeSet::from([String::new()]);
    let mut frontier = vec![String::new()];
    let mut transitions = BTreeSet::new();
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for input in &words {
                for r in macrostep(machine, w, input, fuel)?.records {
                    let target = r.w_after();
                    if let WorkState::Word(t) = &target {
                        if seen.insert(t.clone()) {
                            next.push(t.clone());
                        }
                    }
                    transitions.insert(Transition::new(
                        WorkState::word(w.clone()),
                        input.clone(),
                        target,
                        r.w_out(),
                    ));
                }
            }
        }
        frontier = next;
    }
    Ok(transitions)
}
