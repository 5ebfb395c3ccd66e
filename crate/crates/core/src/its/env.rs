use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::{Indexed, IoLabel, Its, ItsError, Trace};

/// The depth-bounded unfolding of an ITS from its root, without state labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BehaviorTree {
    pub children: Vec<(IoLabel, BehaviorTree)>,
}

impl BehaviorTree {
    pub fn unfold(its: &Its, depth: usize) -> Self {
        let g = Indexed::new(its);
        build(&g, g.root, depth)
    }

    /// Traces of every root-anchored path, of length 1 up to the tree depth.
    pub fn traces(&self) -> BTreeSet<Trace> {
        let mut out = BTreeSet::new();
        let mut prefix = Vec::new();
        collect(self, &mut prefix, &mut out);
        out
    }
}

fn build(g: &Indexed, s: usize, depth: usize) -> BehaviorTree {
    let children = if depth == 0 {
        Vec::new()
    } else {
        g.succ[s]
            .iter()
            .map(|(l, t)| (l.clone(), build(g, *t, depth - 1)))
            .collect()
    };
    BehaviorTree { children }
}

fn collect(tree: &BehaviorTree, prefix: &mut Trace, out: &mut BTreeSet<Trace>) {
    for (label, child) in &tree.children {
        prefix.push(label.clone());
        out.insert(prefix.clone());
        collect(child, prefix, out);
        prefix.pop();
    }
}

pub type Observation = BTreeSet<Trace>;

type ObserveFn = dyn Fn(&BehaviorTree) -> Observation + Send + Sync;

/// An environment: a function of the depth-`d` behavior tree only. It never
/// sees state labels, so systems with equal behavior get equal observations.
#[derive(Clone)]
pub struct ObservationEnv {
    name: String,
    depth: usize,
    observe: Arc<ObserveFn>,
}

impl ObservationEnv {
    pub fn new(
        name: impl Into<String>,
        depth: usize,
        observe: impl Fn(&BehaviorTree) -> Observation + Send + Sync + 'static,
    ) -> Result<Self, ItsError> {
        if depth == 0 {
            return Err(ItsError::Parameter("environment depth must be at least 1".into()));
        }
        Ok(ObservationEnv {
            name: name.into(),
            depth,
            observe: Arc::new(observe),
        })
    }

    /// Single input/output pairs only.
    pub fn tm_style() -> Self {
        Self::new("tm", 1, BehaviorTree::traces).expect("depth 1")
    }

    /// Full trace set up to `depth`.
    pub fn stream_style(depth: usize) -> Result<Self, ItsError> {
        Self::new(format!("stream-{depth}"), depth, BehaviorTree::traces)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn observe(&self, its: &Its) -> Observation {
        (self.observe)(&BehaviorTree::unfold(its, self.depth))
    }
}

impl fmt::Debug for ObservationEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObservationEnv")
            .field("name", &self.name)
            .field("depth", &self.depth)
            .finish()
    }
}

/// Groups systems by equal observation. Classes hold indices into `systems`
/// and are ordered by their smallest member.
pub fn env_classify(systems: &[Its], env: &ObservationEnv) -> Result<Vec<Vec<usize>>, ItsError> {
    if systems.is_empty() {
        return Err(ItsError::Parameter("nothing to classify".into()));
    }
    let mut classes: BTreeMap<Observation, Vec<usize>> = BTreeMap::new();
    for (i, its) in systems.iter().enumerate() {
        classes.entry(env.observe(its)).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = classes.into_values().collect();
    out.sort();
    Ok(out)
}

/// One class per line, members space-separated and sorted, classes ordered
/// by smallest member.
pub fn render_partition(classes: &[Vec<usize>], names: &[String]) -> String {
    let mut rows: Vec<Vec<&str>> = classes
        .iter()
        .map(|c| {
            let mut v: Vec<&str> = c.iter().map(|&i| names[i].as_str()).collect();
            v.sort();
            v
        })
        .collect();
    rows.sort();
    rows.iter().map(|r| r.join(" ") + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn tm_style_groups_echo_with_its_renaming() {
        let systems = [fixtures::its_echo(), fixtures::its_echo_renamed(), fixtures::its_loop()];
        let p = env_classify(&systems, &ObservationEnv::tm_style()).unwrap();
        assert_eq!(p, vec![vec![0, 1], vec![2]]);
        let names: Vec<String> = ["echo", "renamed", "loop"].map(String::from).to_vec();
        assert_eq!(render_partition(&p, &names), "echo renamed\nloop\n");
    }

    #[test]
    fn singleton_and_empty() {
        let p = env_classify(&[fixtures::its_fork()], &ObservationEnv::tm_style()).unwrap();
        assert_eq!(p, vec![vec![0]]);
        assert!(env_classify(&[], &ObservationEnv::tm_style()).is_err());
    }

    #[test]
    fn stream_depth_separates_fork_and_join() {
        let systems = [fixtures::its_fork(), fixtures::its_join()];
        let two = env_classify(&systems, &ObservationEnv::stream_style(2).unwrap()).unwrap();
        assert_eq!(two, vec![vec![0, 1]]);
        let three = env_classify(&systems, &ObservationEnv::stream_style(3).unwrap()).unwrap();
        assert_eq!(three, vec![vec![0], vec![1]]);
    }

    #[test]
    fn tree_traces_match_enumeration() {
        let its = fixtures::its_fork();
        for d in 1..4 {
            assert_eq!(BehaviorTree::unfold(&its, d).traces(), super::super::traces_up_to(&its, d));
        }
    }
}
