use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Indexed, IoLabel, Its};
use crate::machine::WorkState;

/// Disjoint union of two ITSs: states of `a` first, then those of `b`.
struct Union {
    states: Vec<(bool, WorkState)>,
    succ: Vec<Vec<(IoLabel, usize)>>,
    roots: (usize, usize),
}

impl Union {
    fn new(a: &Its, b: &Its) -> Self {
        let (ga, gb) = (Indexed::new(a), Indexed::new(b));
        let off = ga.len();
        let mut states: Vec<(bool, WorkState)> =
            ga.states.into_iter().map(|s| (false, s)).collect();
        states.extend(gb.states.into_iter().map(|s| (true, s)));
        let mut succ = ga.succ;
        succ.extend(
            gb.succ
                .into_iter()
                .map(|l| l.into_iter().map(|(lab, t)| (lab, t + off)).collect()),
        );
        Union {
            states,
            succ,
            roots: (ga.root, gb.root + off),
        }
    }

    /// Signature refinement to the coarsest strong bisimulation. Returns the
    /// block assignment after every round, starting with the trivial one.
    fn refine(&self) -> Vec<Vec<usize>> {
        let n = self.states.len();
        let mut history = vec![vec![0; n]];
        loop {
            let blocks = history.last().expect("nonempty");
            let mut ids: BTreeMap<(usize, BTreeSet<(&IoLabel, usize)>), usize> = BTreeMap::new();
            let next: Vec<usize> = (0..n)
                .map(|s| {
                    let sig = self.succ[s].iter().map(|(l, t)| (l, blocks[*t])).collect();
                    let len = ids.len();
                    *ids.entry((blocks[s], sig)).or_insert(len)
                })
                .collect();
            let count = |v: &Vec<usize>| v.iter().collect::<BTreeSet<_>>().len();
            if count(&next) == count(blocks) {
                return history;
            }
            history.push(next);
        }
    }
}

/// The coarsest strong bisimulation between `a` and `b` restricted to
/// cross pairs, if it relates the two roots.
pub fn bisim_check(a: &Its, b: &Its) -> Option<Vec<(WorkState, WorkState)>> {
    let u = Union::new(a, b);
    let history = u.refine();
    let blocks = history.last().expect("nonempty");
    if blocks[u.roots.0] != blocks[u.roots.1] {
        return None;
    }
    let mut pairs = Vec::new();
    for (i, (side_i, si)) in u.states.iter().enumerate() {
        for (j, (side_j, sj)) in u.states.iter().enumerate() {
            if !side_i && *side_j && blocks[i] == blocks[j] {
                pairs.push((si.clone(), sj.clone()));
            }
        }
    }
    Some(pairs)
}

/// Hennessy-Milner formula over `(w_in, w_out)` labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    Diamond(IoLabel, Box<Formula>),
    And(Vec<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    pub fn holds(&self, its: &Its, state: &WorkState) -> bool {
        match self {
            Formula::True => true,
            Formula::Not(f) => !f.holds(its, state),
            Formula::And(fs) => fs.iter().all(|f| f.holds(its, state)),
            Formula::Diamond(label, f) => its
                .transitions()
                .iter()
                .filter(|t| &t.source == state && &t.label() == label)
                .any(|t| f.holds(its, &t.target)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("tt"),
            Formula::Diamond(l, inner) => write!(f, "<{l}>{inner}"),
            Formula::Not(inner) => write!(f, "~{inner}"),
            Formula::And(fs) => {
                f.write_str("(")?;
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A formula true at `a`'s root and false at `b`'s root, or `None` when
/// the roots are bisimilar.
pub fn bisim_witness(a: &Its, b: &Its) -> Option<Formula> {
    let u = Union::new(a, b);
    let history = u.refine();
    let (ra, rb) = u.roots;
    if history.last().expect("nonempty")[ra] == history.last().expect("nonempty")[rb] {
        return None;
    }
    Some(distinguish(&u, &history, ra, rb))
}

fn split_round(history: &[Vec<usize>], s: usize, t: usize) -> usize {
    history
        .iter()
        .position(|b| b[s] != b[t])
        .expect("states are separated")
}

/// Formula true at `s`, false at `t`; they lie in different blocks.
fn distinguish(u: &Union, history: &[Vec<usize>], s: usize, t: usize) -> Formula {
    let k = split_round(history, s, t);
    let prev = &history[k - 1];
    // some (label, block) is reachable from exactly one side
    for (label, s2) in &u.succ[s] {
        let matches: Vec<usize> = u.succ[t]
            .iter()
            .filter(|(l, _)| l == label)
            .map(|(_, x)| *x)
            .collect();
        if matches.iter().all(|&t2| prev[t2] != prev[*s2]) {
            let parts: Vec<Formula> = matches
                .iter()
                .map(|&t2| distinguish(u, history, *s2, t2))
                .collect();
            let inner = match parts.len() {
                0 => Formula::True,
                1 => parts.into_iter().next().expect("one part"),
                _ => Formula::And(parts),
            };
            return Formula::Diamond(label.clone(), Box::new(inner));
        }
    }
    Formula::Not(Box::new(distinguish(u, history, t, s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn selfloop_and_cycle_are_bisimilar() {
        let rel = bisim_check(&fixtures::its_selfloop(), &fixtures::its_cycle2()).unwrap();
        assert_eq!(rel.len(), 2);
        assert!(bisim_witness(&fixtures::its_selfloop(), &fixtures::its_cycle2()).is_none());
    }

    #[test]
    fn fork_and_join_are_not() {
        let (a, b) = (fixtures::its_fork(), fixtures::its_join());
        assert!(bisim_check(&a, &b).is_none());
        for (x, y) in [(&a, &b), (&b, &a)] {
            let phi = bisim_witness(x, y).unwrap();
            assert!(phi.holds(x, x.root()), "{phi}");
            assert!(!phi.holds(y, y.root()), "{phi}");
        }
    }

    #[test]
    fn witness_for_a_missing_label() {
        let a = Its::parse("root: _\n_ a _ a\n").unwrap();
        let b = Its::parse("root: _\n_ b _ b\n").unwrap();
        assert_eq!(bisim_witness(&a, &b).unwrap().to_string(), "<a/a>tt");
        assert_eq!(bisim_witness(&b, &a).unwrap().to_string(), "<b/b>tt");
    }

    #[test]
    fn isomorphic_pair_is_bisimilar() {
        assert!(bisim_check(&fixtures::its_echo(), &fixtures::its_echo_renamed()).is_some());
    }
}
