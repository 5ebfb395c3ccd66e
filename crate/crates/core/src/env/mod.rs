//! The topological environment of a run: configurations visited up to each
//! macrostep, turned into a Vietoris-Rips complex.

mod metric;

use std::collections::HashMap;

use num_rational::Rational64;

use crate::machine::{
    macrostep, Chooser, InteractionStream, MachineError, MacrostepRecord, Output, Policy,
    PtMachine, WorkState,
};
use crate::topo::{betti, BettiVector, Simplex, SimplicialComplex};

pub use metric::{
    config_distance, field_distance, parse_rational, render_rational, vietoris_rips,
};

/// The observable part of a configuration: work tape after the macrostep,
/// input, output.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Payload {
    pub work: WorkState,
    pub input: String,
    pub output: Output,
}

impl Payload {
    pub fn of(record: &MacrostepRecord) -> Self {
        Payload {
            work: record.w_after(),
            input: record.input.clone(),
            output: record.w_out(),
        }
    }
}

impl std::fmt::Display for Payload {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            self.work,
            crate::machine::render_word(&self.input),
            self.output
        )
    }
}

/// A configuration and the 1-based macrostep at which it first appeared.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConfigPoint {
    pub payload: Payload,
    pub time: usize,
}

/// The complex at one time. Vertex `i` is `points[i]`. The complex is built
/// one dimension above `maxdim` so that `betti` is exact up to `maxdim`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentSnapshot {
    pub time: usize,
    pub points: Vec<ConfigPoint>,
    pub complex: SimplicialComplex,
    pub eps: Rational64,
    pub betti: BettiVector,
}

impl EnvironmentSnapshot {
    pub fn new(time: usize, points: Vec<ConfigPoint>, eps: Rational64, maxdim: usize) -> Self {
        let complex = vietoris_rips(
            points.len(),
            |i, j| config_distance(&points[i].payload, &points[j].payload),
            eps,
            maxdim + 1,
        );
        let betti = betti(&complex, maxdim);
        EnvironmentSnapshot {
            time,
            points,
            complex,
            eps,
            betti,
        }
    }

    pub fn vertex_of(&self, payload: &Payload) -> Option<usize> {
        self.points.iter().position(|p| &p.payload == payload)
    }

    /// The same snapshot with edge `{u, v}` and its cofaces deleted.
    pub fn with_edge_removed(&self, u: usize, v: usize) -> Self {
        let complex = self.complex.without(&Simplex::edge(u, v));
        let betti = betti(&complex, self.betti.0.len() - 1);
        EnvironmentSnapshot {
            complex,
            betti,
            ..self.clone()
        }
    }

    /// `i ε n_points β_0 β_1 …`
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{} {} {}",
            self.time,
            render_rational(self.eps),
            self.points.len()
        );
        for b in &self.betti.0 {
            s.push_str(&format!(" {b}"));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentTrace {
    pub snapshots: Vec<EnvironmentSnapshot>,
    /// The stream followed to generate the snapshots.
    pub stream: InteractionStream,
}

impl EnvironmentTrace {
    pub fn last(&self) -> &EnvironmentSnapshot {
        self.snapshots.last().expect("a trace has at least one snapshot")
    }
}

/// Runs `inputs` under `policy`. At every macrostep all records of the
/// nondeterministic relation from the current work tape join the point
/// set, along with the record actually followed.
pub fn build_env<S: AsRef<str>>(
    machine: &PtMachine,
    inputs: &[S],
    eps: Rational64,
    maxdim: usize,
    fuel: usize,
    policy: Policy,
) -> Result<EnvironmentTrace, MachineError> {
    if inputs.is_empty() {
        return Err(MachineError::Parameter("no inputs".into()));
    }
    if eps < Rational64::from_integer(0) {
        return Err(MachineError::Parameter("eps must be non-negative".into()));
    }
    let mut chooser = Chooser::new(policy);
    let mut work = String::new();
    let mut points: Vec<ConfigPoint> = Vec::new();
    let mut seen: HashMap<Payload, usize> = HashMap::new();
    let mut snapshots = Vec::new();
    let mut records = Vec::new();
    for (index, input) in inputs.iter().enumerate() {
        let input = input.as_ref();
        let time = index + 1;
        let all = macrostep(machine, &work, input, fuel)?;
        let chosen = chooser.run_branch(machine, index, &work, input, fuel)?;
        for r in all.records.iter().chain(std::iter::once(&chosen)) {
            let payload = Payload::of(r);
            if !seen.contains_key(&payload) {
                seen.insert(payload.clone(), points.len());
                points.push(ConfigPoint { payload, time });
            }
        }
        snapshots.push(EnvironmentSnapshot::new(time, points.clone(), eps, maxdim));
        let diverged = chosen.is_divergent();
        if let Some(w) = chosen.w_after().as_word() {
            work = w.to_string();
        }
        records.push(chosen);
        if diverged {
            break;
        }
    }
    Ok(EnvironmentTrace {
        snapshots,
        stream: InteractionStream {
            records,
            truncated: true,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaRow {
    pub time: usize,
    pub before: BettiVector,
    pub after: BettiVector,
    pub delta: Vec<i64>,
}

impl DeltaRow {
    pub fn changed(&self) -> bool {
        self.delta.iter().any(|&d| d != 0)
    }

    /// `i: (Δβ_0, Δβ_1, …)`
    pub fn render(&self) -> String {
        let parts: Vec<String> = self.delta.iter().map(ToString::to_string).collect();
        format!("{}: ({})", self.time, parts.join(", "))
    }
}

/// Betti changes between consecutive snapshots.
pub fn invariant_delta(trace: &EnvironmentTrace) -> Vec<DeltaRow> {
    trace
        .snapshots
        .windows(2)
        .map(|w| {
            let (a, b) = (&w[0].betti, &w[1].betti);
            let n = a.0.len().max(b.0.len());
            DeltaRow {
                time: w[1].time,
                before: a.clone(),
                after: b.clone(),
                delta: (0..n).map(|k| b.get(k) as i64 - a.get(k) as i64).collect(),
            }
        })
        .collect()
}

/// Sorted distinct pairwise distances between the points of a snapshot.
pub fn distance_spectrum(points: &[ConfigPoint]) -> Vec<Rational64> {
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            out.push(config_distance(&points[i].payload, &points[j].payload));
        }
    }
    out.sort();
    out.dedup();
    out
}
