use std::collections::{BTreeSet, VecDeque};

use super::{Indexed, IoLabel, Its, ItsError};

/// A root-anchored sequence of transition labels.
pub type Trace = Vec<IoLabel>;

/// Every trace of length `1..=depth` from the root.
pub fn traces_up_to(its: &Its, depth: usize) -> BTreeSet<Trace> {
    let g = Indexed::new(its);
    let mut out = BTreeSet::new();
    let mut layer: BTreeSet<(Trace, usize)> = BTreeSet::from([(Vec::new(), g.root)]);
    for _ in 0..depth {
        let mut next = BTreeSet::new();
        for (trace, s) in &layer {
            for (label, t) in &g.succ[*s] {
                let mut tr = trace.clone();
                tr.push(label.clone());
                out.insert(tr.clone());
                next.insert((tr, *t));
            }
        }
        layer = next;
    }
    out
}

fn step_set(g: &Indexed, set: &BTreeSet<usize>, label: &IoLabel) -> BTreeSet<usize> {
    set.iter()
        .flat_map(|&s| g.succ[s].iter().filter(|(l, _)| l == label).map(|(_, t)| *t))
        .collect()
}

/// The shortest, then lexicographically least, trace of length `<= depth`
/// present in exactly one of the two systems.
pub fn separating_trace(a: &Its, b: &Its, depth: usize) -> Result<Option<Trace>, ItsError> {
    if depth == 0 {
        return Err(ItsError::Parameter("depth must be at least 1".into()));
    }
    let (ga, gb) = (Indexed::new(a), Indexed::new(b));
    let start = (BTreeSet::from([ga.root]), BTreeSet::from([gb.root]));
    let mut visited = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([(Vec::new(), start)]);
    while let Some((trace, (sa, sb))) = queue.pop_front() {
        if trace.len() == depth {
            continue;
        }
        let labels: BTreeSet<&IoLabel> = sa
            .iter()
            .flat_map(|&s| ga.succ[s].iter().map(|(l, _)| l))
            .chain(sb.iter().flat_map(|&s| gb.succ[s].iter().map(|(l, _)| l)))
            .collect();
        for label in labels {
            let (na, nb) = (step_set(&ga, &sa, label), step_set(&gb, &sb, label));
            let mut tr = trace.clone();
            tr.push(label.clone());
            if na.is_empty() != nb.is_empty() {
                return Ok(Some(tr));
            }
            let pair = (na, nb);
            if visited.insert(pair.clone()) {
                queue.push_back((tr, pair));
            }
        }
    }
    Ok(None)
}

/// Trace equivalence of the depth-bounded unfoldings.
pub fn stream_equiv(a: &Its, b: &Its, depth: usize) -> Result<bool, ItsError> {
    Ok(separating_trace(a, b, depth)?.is_none())
}

pub fn render_trace(trace: &Trace) -> String {
    trace
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}
