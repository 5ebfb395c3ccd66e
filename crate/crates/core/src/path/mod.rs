//! Interaction streams as edge paths in an environment complex, and loops
//! classified by their first homology class.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::env::{EnvironmentSnapshot, Payload};
use crate::machine::InteractionStream;
use crate::topo::{boundary_matrix, xor, Chain, Simplex, SimplicialComplex, TopoError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathError {
    #[error("a path needs at least one vertex")]
    Empty,
    #[error("vertex {0} is not in the complex")]
    UnknownVertex(usize),
    #[error("configuration of macrostep {index} is not a vertex of the snapshot")]
    UnknownConfig { index: usize },
    #[error("paths live in different complexes")]
    HostMismatch,
    #[error("cannot compose: path ends at {end} but the next starts at {start}")]
    Endpoints { end: usize, start: usize },
    #[error("path from {first} to {last} is not closed")]
    NotClosed { first: usize, last: usize },
    #[error("{0}")]
    Infeasible(Violation),
    #[error("{0}")]
    Basis(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Topo(#[from] TopoError),
}

/// First step of a path that does not follow an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub from: usize,
    pub to: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (u, v) = (self.from.min(self.to), self.from.max(self.to));
        write!(f, "infeasible at {}: missing edge {{{u},{v}}}", self.index)
    }
}

/// A vertex sequence in a host complex. Repeated consecutive vertices
/// (stutters) are allowed.
#[derive(Debug, Clone)]
pub struct EdgePath {
    vertices: Vec<usize>,
    host: Arc<SimplicialComplex>,
}

impl EdgePath {
    /// Checks only that the vertices exist; see [`EdgePath::violation`].
    pub fn new(host: Arc<SimplicialComplex>, vertices: Vec<usize>) -> Result<Self, PathError> {
        if vertices.is_empty() {
            return Err(PathError::Empty);
        }
        if let Some(&v) = vertices.iter().find(|&&v| !host.has_vertex(v)) {
            return Err(PathError::UnknownVertex(v));
        }
        Ok(EdgePath { vertices, host })
    }

    /// A single line of vertex ids.
    pub fn parse(host: Arc<SimplicialComplex>, text: &str) -> Result<Self, PathError> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let [(line, content)] = lines.as_slice() else {
            return Err(PathError::Parse {
                line: lines.get(1).map_or(1, |l| l.0),
                message: "expected a single line of vertex ids".into(),
            });
        };
        let vertices = content
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| PathError::Parse {
                    line: *line,
                    message: format!("bad vertex id {t:?}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(host, vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn host(&self) -> &Arc<SimplicialComplex> {
        &self.host
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().expect("nonempty")
    }

    /// The first step `v_i -> v_{i+1}` that is not an edge of the host.
    pub fn violation(&self) -> Option<Violation> {
        self.vertices
            .windows(2)
            .enumerate()
            .find(|(_, w)| w[0] != w[1] && !self.host.has_edge(w[0], w[1]))
            .map(|(index, w)| Violation {
                index,
                from: w[0],
                to: w[1],
            })
    }

    pub fn is_feasible(&self) -> bool {
        self.violation().is_none()
    }

    /// Edges traversed an odd number of times; stutters contribute nothing.
    pub fn chain(&self) -> Chain {
        Chain::from_simplices(
            self.vertices
                .windows(2)
                .filter(|w| w[0] != w[1])
                .map(|w| Simplex::edge(w[0], w[1])),
        )
    }

    /// The same vertex sequence in another complex.
    pub fn rehost(&self, host: Arc<SimplicialComplex>) -> Result<Self, PathError> {
        Self::new(host, self.vertices.clone())
    }
}

impl fmt::Display for EdgePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

fn same_host(a: &Arc<SimplicialComplex>, b: &Arc<SimplicialComplex>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// `p` followed by `q`, sharing `q`'s first vertex.
pub fn compose(p: &EdgePath, q: &EdgePath) -> Result<EdgePath, PathError> {
    if !same_host(&p.host, &q.host) {
        return Err(PathError::HostMismatch);
    }
    if p.last() != q.first() {
        return Err(PathError::Endpoints {
            end: p.last(),
            start: q.first(),
        });
    }
    let mut vertices = p.vertices.clone();
    vertices.extend_from_slice(&q.vertices[1..]);
    Ok(EdgePath {
        vertices,
        host: p.host.clone(),
    })
}

/// A closed path with a base point.
#[derive(Debug, Clone)]
pub struct Loop {
    path: EdgePath,
}

impl Loop {
    pub fn new(path: EdgePath) -> Result<Self, PathError> {
        if path.first() != path.last() {
            return Err(PathError::NotClosed {
                first: path.first(),
                last: path.last(),
            });
        }
        Ok(Loop { path })
    }

    pub fn constant(host: Arc<SimplicialComplex>, base: usize) -> Result<Self, PathError> {
        Self::new(EdgePath::new(host, vec![base])?)
    }

    pub fn path(&self) -> &EdgePath {
        &self.path
    }

    pub fn base(&self) -> usize {
        self.path.first()
    }

    pub fn compose(&self, other: &Loop) -> Result<Loop, PathError> {
        Loop::new(compose(&self.path, &other.path)?)
    }
}

/// Coordinates over the two-element field in a basis of `H_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    pub coords: Vec<u8>,
}

impl HomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &HomologyClass) -> HomologyClass {
        HomologyClass {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// `class: b_1 …` and `null: yes|no` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::from("class:");
        for c in &self.coords {
            s.push_str(&format!(" {c}"));
        }
        s.push_str(if self.is_zero() { "\nnull: yes\n" } else { "\nnull: no\n" });
        s
    }
}

/// The host's canonical `H_1` basis as cycles.
pub fn h1_basis(k: &SimplicialComplex) -> Vec<Chain> {
    k.h1_basis().cycles()
}

fn feasible_chain(l: &Loop) -> Result<Chain, PathError> {
    if let Some(v) = l.path.violation() {
        return Err(PathError::Infeasible(v));
    }
    Ok(l.path.chain())
}

/// Class of a feasible loop in the canonical basis of its host.
pub fn h1_class(l: &Loop) -> Result<HomologyClass, PathError> {
    let chain = feasible_chain(l)?;
    let coords = l.path.host.h1_basis().coordinates(&chain)?;
    Ok(HomologyClass { coords })
}

pub fn nullhomologous(l: &Loop) -> Result<bool, PathError> {
    Ok(h1_class(l)?.is_zero())
}

/// Class of a feasible loop in a caller-supplied basis of cycles, which must
/// be independent modulo boundaries and span `H_1`.
pub fn h1_class_in(l: &Loop, basis: &[Chain]) -> Result<HomologyClass, PathError> {
    let host = &l.path.host;
    let chain = feasible_chain(l)?;
    let n = basis.len();
    if n != host.h1_basis().len() {
        return Err(PathError::Basis(format!(
            "basis has {n} cycles but the first Betti number is {}",
            host.h1_basis().len()
        )));
    }
    let edge_ids = |c: &Chain| -> Result<Vec<usize>, PathError> {
        let mut v = c
            .support()
            .iter()
            .map(|s| {
                host.index_of(s)
                    .filter(|_| s.dim() == 1)
                    .ok_or_else(|| PathError::Basis(format!("{s} is not an edge of the host")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        v.sort_unstable();
        Ok(v)
    };
    // echelon form keyed by lowest entry; tags record basis combinations
    let mut pivots: std::collections::BTreeMap<usize, (Vec<usize>, Vec<u8>)> = Default::default();
    let reduce = |mut v: Vec<usize>, mut tag: Vec<u8>, pivots: &std::collections::BTreeMap<usize, (Vec<usize>, Vec<u8>)>| {
        while let Some(low) = v.last() {
            match pivots.get(low) {
                Some((pv, pt)) => {
                    v = xor(&v, pv);
                    for (a, b) in tag.iter_mut().zip(pt) {
                        *a ^= b;
                    }
                }
                None => break,
            }
        }
        (v, tag)
    };
    for col in boundary_matrix(host, 2).cols {
        let (v, t) = reduce(col, vec![0; n], &pivots);
        if let Some(&low) = v.last() {
            pivots.insert(low, (v, t));
        }
    }
    for (i, cycle) in basis.iter().enumerate() {
        if !cycle.boundary().is_zero() {
            return Err(PathError::Basis(format!("basis element {i} is not a cycle")));
        }
        let mut tag = vec![0; n];
        tag[i] = 1;
        let (v, t) = reduce(edge_ids(cycle)?, tag, &pivots);
        match v.last() {
            Some(&low) => {
                pivots.insert(low, (v, t));
            }
            None => {
                return Err(PathError::Basis(format!(
                    "basis element {i} depends on the others modulo boundaries"
                )))
            }
        }
    }
    let (rest, coords) = reduce(edge_ids(&chain)?, vec![0; n], &pivots);
    if !rest.is_empty() {
        return Err(PathError::Basis("cycle is outside the span of the basis".into()));
    }
    Ok(HomologyClass { coords })
}

/// A stream mapped onto a snapshot.
#[derive(Debug, Clone)]
pub enum StreamPath {
    Feasible(EdgePath),
    Infeasible(EdgePath, Violation),
}

impl StreamPath {
    pub fn path(&self) -> &EdgePath {
        match self {
            StreamPath::Feasible(p) | StreamPath::Infeasible(p, _) => p,
        }
    }
}

/// Maps each macrostep of `stream` to the snapshot vertex of its
/// configuration and checks the resulting path.
pub fn stream_to_path(
    stream: &InteractionStream,
    snapshot: &EnvironmentSnapshot,
) -> Result<StreamPath, PathError> {
    let vertices = stream
        .records
        .iter()
        .enumerate()
        .map(|(index, r)| {
            snapshot
                .vertex_of(&Payload::of(r))
                .ok_or(PathError::UnknownConfig { index })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let path = EdgePath::new(Arc::new(snapshot.complex.clone()), vertices)?;
    Ok(match path.violation() {
        None => StreamPath::Feasible(path),
        Some(v) => StreamPath::Infeasible(path, v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::build_env;
    use crate::fixtures;
    use crate::machine::Policy;
    use num_rational::Rational64;

    fn host(k: SimplicialComplex) -> Arc<SimplicialComplex> {
        Arc::new(k)
    }

    fn path(h: &Arc<SimplicialComplex>, v: &[usize]) -> EdgePath {
        EdgePath::new(h.clone(), v.to_vec()).unwrap()
    }

    #[test]
    fn composing() {
        let h = host(fixtures::filled_triangle());
        assert_eq!(compose(&path(&h, &[0, 1]), &path(&h, &[1, 2])).unwrap().vertices(), &[0, 1, 2]);
        assert_eq!(compose(&path(&h, &[0]), &path(&h, &[0])).unwrap().vertices(), &[0]);
        assert!(matches!(
            compose(&path(&h, &[0, 1]), &path(&h, &[2])),
            Err(PathError::Endpoints { end: 1, start: 2 })
        ));
        let other = host(fixtures::hollow_triangle());
        assert!(matches!(
            compose(&path(&h, &[0]), &path(&other, &[0])),
            Err(PathError::HostMismatch)
        ));
    }

    #[test]
    fn feasibility() {
        let h = host(fixtures::filled_triangle());
        assert!(path(&h, &[0, 1, 2]).is_feasible());
        assert!(path(&h, &[0, 0, 1, 1]).is_feasible());
        let line = host(SimplicialComplex::face_closure([vec![0, 1], vec![1, 2]]).unwrap());
        let v = path(&line, &[0, 2]).violation().unwrap();
        assert_eq!(v.index, 0);
        assert_eq!(v.to_string(), "infeasible at 0: missing edge {0,2}");
        assert!(matches!(EdgePath::new(line, vec![0, 9]), Err(PathError::UnknownVertex(9))));
    }

    #[test]
    fn hollow_triangle_classes() {
        let h = host(fixtures::hollow_triangle());
        let c = Loop::constant(h.clone(), 1).unwrap();
        assert!(h1_class(&c).unwrap().is_zero());
        let around = Loop::new(path(&h, &[0, 1, 2, 0])).unwrap();
        assert_eq!(h1_class(&around).unwrap().coords, vec![1]);
        assert!(!nullhomologous(&around).unwrap());
        let back = Loop::new(path(&h, &[0, 1, 2, 1, 0])).unwrap();
        assert!(nullhomologous(&back).unwrap());
        assert_eq!(h1_basis(&h).len(), 1);
        assert!(h1_basis(&fixtures::filled_triangle()).is_empty());
    }

    #[test]
    fn filled_triangle_rim_is_null() {
        let h = host(fixtures::filled_triangle());
        assert!(nullhomologous(&Loop::new(path(&h, &[0, 1, 2, 0])).unwrap()).unwrap());
    }

    #[test]
    fn infeasible_loops_have_no_class() {
        let h = host(SimplicialComplex::face_closure([vec![0, 1], vec![1, 2]]).unwrap());
        let l = Loop::new(path(&h, &[0, 1, 2, 0])).unwrap();
        assert!(matches!(h1_class(&l), Err(PathError::Infeasible(_))));
        assert!(matches!(Loop::new(path(&h, &[0, 1])), Err(PathError::NotClosed { .. })));
    }

    #[test]
    fn explicit_basis() {
        let h = host(fixtures::torus7());
        let basis = h1_basis(&h);
        let l = Loop::new(EdgePath::parse(h.clone(), fixtures::BELT).unwrap()).unwrap();
        assert_eq!(h1_class_in(&l, &basis).unwrap(), h1_class(&l).unwrap());
        let swapped = vec![basis[1].clone(), basis[0].clone()];
        let mut rev = h1_class(&l).unwrap().coords;
        rev.reverse();
        assert_eq!(h1_class_in(&l, &swapped).unwrap().coords, rev);
        assert!(h1_class_in(&l, &[basis[0].clone(), basis[0].clone()]).is_err());
        assert!(h1_class_in(&l, &basis[..1]).is_err());
    }

    #[test]
    fn path_file() {
        let h = host(fixtures::torus7());
        assert!(EdgePath::parse(h.clone(), "0 1\n2 3\n").is_err());
        assert!(EdgePath::parse(h.clone(), "# c\n0 x\n").is_err());
        assert_eq!(EdgePath::parse(h, "# c\n0 1 3\n").unwrap().vertices(), &[0, 1, 3]);
    }

    #[test]
    fn echo_stream_paths() {
        let m = fixtures::echo();
        let inputs = ["a", "ab", "abc"];
        let far = build_env(&m, &inputs, Rational64::new(3, 1), 2, 50, Policy::Deterministic).unwrap();
        let p = stream_to_path(&far.stream, far.last()).unwrap();
        assert!(matches!(p, StreamPath::Feasible(_)));
        assert_eq!(p.path().vertices().len(), 3);
        let zero = build_env(&m, &inputs, Rational64::new(0, 1), 2, 50, Policy::Deterministic).unwrap();
        match stream_to_path(&zero.stream, zero.last()).unwrap() {
            StreamPath::Infeasible(_, v) => assert_eq!(v.index, 0),
            StreamPath::Feasible(_) => panic!("no edges at scale 0"),
        }
    }

    #[test]
    fn unknown_configuration_names_the_macrostep() {
        let m = fixtures::echo();
        let a = build_env(&m, &["a"], Rational64::new(1, 1), 1, 50, Policy::Deterministic).unwrap();
        let b = build_env(&m, &["a", "b"], Rational64::new(1, 1), 1, 50, Policy::Deterministic).unwrap();
        assert!(matches!(
            stream_to_path(&b.stream, a.last()),
            Err(PathError::UnknownConfig { index: 1 })
        ));
    }
}
