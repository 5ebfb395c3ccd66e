use std::collections::{BTreeMap, VecDeque};

use super::{Indexed, IoLabel, Its};
use crate::machine::WorkState;

/// Sorted outgoing and incoming label lists of one state. Any isomorphism
/// preserves it.
type Signature = (Vec<IoLabel>, Vec<IoLabel>, usize);

fn signatures(g: &Indexed) -> Vec<Signature> {
    let mut incoming = vec![Vec::new(); g.len()];
    let mut self_loops = vec![0; g.len()];
    for (s, list) in g.succ.iter().enumerate() {
        for (label, t) in list {
            incoming[*t].push(label.clone());
            if *t == s {
                self_loops[s] += 1;
            }
        }
    }
    (0..g.len())
        .map(|s| {
            let out: Vec<IoLabel> = g.succ[s].iter().map(|(l, _)| l.clone()).collect();
            let mut inc = std::mem::take(&mut incoming[s]);
            inc.sort();
            (out, inc, self_loops[s])
        })
        .collect()
}

/// BFS order from the root, each non-root state paired with the
/// `(parent, label)` edge it was discovered through.
fn bfs_order(g: &Indexed) -> Vec<(usize, Option<(usize, IoLabel)>)> {
    let mut seen = vec![false; g.len()];
    let mut order = vec![(g.root, None)];
    seen[g.root] = true;
    let mut queue = VecDeque::from([g.root]);
    while let Some(s) = queue.pop_front() {
        for (label, t) in &g.succ[s] {
            if !seen[*t] {
                seen[*t] = true;
                order.push((*t, Some((s, label.clone()))));
                queue.push_back(*t);
            }
        }
    }
    order
}

struct Search<'a> {
    a: &'a Indexed,
    b: &'a Indexed,
    sig_a: Vec<Signature>,
    sig_b: Vec<Signature>,
    order: Vec<(usize, Option<(usize, IoLabel)>)>,
    fwd: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn has_edge(g: &Indexed, s: usize, label: &IoLabel, t: usize) -> bool {
        g.succ[s]
            .binary_search_by(|(l, x)| l.cmp(label).then(x.cmp(&t)))
            .is_ok()
    }

    /// Every edge of `a` between `s` and an already-mapped state has an image.
    fn consistent(&self, s: usize, image: usize) -> bool {
        let map = |x: usize| if x == s { Some(image) } else { self.fwd[x] };
        for (label, t) in &self.a.succ[s] {
            if let Some(ft) = map(*t) {
                if !Self::has_edge(self.b, image, label, ft) {
                    return false;
                }
            }
        }
        for (p, list) in self.a.succ.iter().enumerate() {
            let Some(fp) = self.fwd[p] else { continue };
            if p == s {
                continue;
            }
            for (label, t) in list {
                if *t == s && !Self::has_edge(self.b, fp, label, image) {
                    return false;
                }
            }
        }
        true
    }

    fn assign(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let (s, parent) = self.order[depth].clone();
        let candidates: Vec<usize> = match &parent {
            None => vec![self.b.root],
            Some((p, label)) => {
                let fp = self.fwd[*p].expect("parent is mapped first");
                self.b.succ[fp]
                    .iter()
                    .filter(|(l, _)| l == label)
                    .map(|(_, t)| *t)
                    .collect()
            }
        };
        for c in candidates {
            if self.used[c] || self.sig_a[s] != self.sig_b[c] || !self.consistent(s, c) {
                continue;
            }
            self.fwd[s] = Some(c);
            self.used[c] = true;
            if self.assign(depth + 1) {
                return true;
            }
            self.fwd[s] = None;
            self.used[c] = false;
        }
        false
    }
}

/// A root-preserving bijection `f` with `(s, i, t, o) ∈ a ⇔ (f(s), i, f(t), o) ∈ b`,
/// or `None`. Backtracking over states in BFS order; candidates for a state
/// are the same-label successors of its parent's image with the same degree
/// signature.
pub fn iso_check(a: &Its, b: &Its) -> Option<BTreeMap<WorkState, WorkState>> {
    if a.states().len() != b.states().len() || a.transitions().len() != b.transitions().len() {
        return None;
    }
    let (ga, gb) = (Indexed::new(a), Indexed::new(b));
    let (sig_a, sig_b) = (signatures(&ga), signatures(&gb));
    let mut sa = sig_a.clone();
    let mut sb = sig_b.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    let n = ga.len();
    let mut search = Search {
        order: bfs_order(&ga),
        a: &ga,
        b: &gb,
        sig_a,
        sig_b,
        fwd: vec![None; n],
        used: vec![false; n],
    };
    if !search.assign(0) {
        return None;
    }
    // consistency was checked edge by edge and edge counts agree, so the
    // image of a's edge set is exactly b's
    Some(
        (0..n)
            .map(|s| {
                let t = search.fwd[s].expect("all states mapped");
                (ga.states[s].clone(), gb.states[t].clone())
            })
            .collect(),
    )
}
