//! Abstract simplicial complexes and their homology over the two-element
//! field.

mod h1;
mod homology;
mod persistence;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

pub use h1::H1Basis;
pub use homology::{
    betti, boundary, boundary_matrix, euler_characteristic, genus, rank, signed_boundary,
    signed_boundary_matrix, BettiVector, Chain, SparseMatrix,
};
pub(crate) use homology::xor;
pub use persistence::{persistence, Barcode, Filtration, Interval};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopoError {
    #[error("a simplex needs at least one vertex")]
    EmptySimplex,
    #[error("vertex {0} repeated in a simplex")]
    DuplicateVertex(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("face {face} enters at {face_time} after its coface {coface} at {coface_time}")]
    NonMonotone {
        face: Simplex,
        face_time: f64,
        coface: Simplex,
        coface_time: f64,
    },
    #[error("invalid entry time {0} (must be finite and non-negative)")]
    BadTime(f64),
    #[error("simplex {0} listed twice")]
    Duplicate(Simplex),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("{0}")]
    Structural(String),
}

/// A simplex as its strictly increasing vertex list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Result<Self, TopoError> {
        let mut v: Vec<usize> = vertices.into_iter().collect();
        if v.is_empty() {
            return Err(TopoError::EmptySimplex);
        }
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(TopoError::DuplicateVertex(w[0]));
        }
        Ok(Simplex(v))
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(vec![v])
    }

    pub fn edge(u: usize, v: usize) -> Self {
        Simplex::new([u, v]).expect("distinct endpoints")
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The codimension-1 faces; face `i` omits vertex `i`.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            Simplex(v)
        })
    }

    /// Every nonempty subset of the vertex set, itself included.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1 << n))
            .map(|mask| Simplex((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect()))
            .collect()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// A face-closed finite set of simplices, stored by dimension in canonical
/// (lexicographic) order.
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
    h1: OnceLock<H1Basis>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::from_closed(BTreeSet::new())
    }

    fn from_closed(set: BTreeSet<Simplex>) -> Self {
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for s in set {
            let d = s.dim();
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(s);
        }
        // BTreeSet order is length-agnostic lexicographic, so sort per dimension
        for list in &mut by_dim {
            list.sort();
        }
        let index = by_dim
            .iter()
            .flat_map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)))
            .collect();
        SimplicialComplex {
            by_dim,
            index,
            h1: OnceLock::new(),
        }
    }

    /// Smallest face-closed complex containing every generator.
    pub fn face_closure<I, V>(generators: I) -> Result<Self, TopoError>
    where
        I: IntoIterator<Item = V>,
        V: IntoIterator<Item = usize>,
    {
        let mut set = BTreeSet::new();
        for g in generators {
            let s = Simplex::new(g)?;
            if set.contains(&s) {
                continue;
            }
            set.extend(s.faces());
        }
        Ok(Self::from_closed(set))
    }

    pub fn from_simplices(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let mut set = BTreeSet::new();
        for s in simplices {
            if !set.contains(&s) {
                set.extend(s.faces());
            }
        }
        Self::from_closed(set)
    }

    /// Top dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Position of `s` among the simplices of its dimension.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.simplices(0).iter().map(|s| s.0[0])
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.contains(&Simplex::vertex(v))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.contains(&Simplex::edge(u, v))
    }

    /// The complex with `s` and all of its cofaces removed.
    pub fn without(&self, s: &Simplex) -> Self {
        let set = self
            .iter()
            .filter(|t| !s.0.iter().all(|v| t.0.binary_search(v).is_ok()))
            .cloned()
            .collect();
        Self::from_closed(set)
    }

    /// Relabels vertices with an injective map.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Result<Self, TopoError> {
        let mut set = BTreeSet::new();
        for s in self.iter() {
            set.insert(Simplex::new(s.0.iter().map(|&v| f(v)))?);
        }
        if set.len() != self.len() {
            return Err(TopoError::Structural("relabeling is not injective".into()));
        }
        Ok(Self::from_closed(set))
    }

    /// Simplices of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> Self {
        Self::from_closed(self.by_dim.iter().take(k + 1).flatten().cloned().collect())
    }

    /// Cached basis of the first homology group.
    pub fn h1_basis(&self) -> &H1Basis {
        self.h1.get_or_init(|| H1Basis::compute(self))
    }

    /// Parses one simplex per line (vertex ids separated by spaces) and
    /// closes under faces.
    pub fn parse(text: &str) -> Result<Self, TopoError> {
        let mut set = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let s = parse_simplex(content, idx + 1)?;
            if !set.contains(&s) {
                set.extend(s.faces());
            }
        }
        Ok(Self::from_closed(set))
    }

    /// Every simplex, by dimension then canonical order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in self.iter() {
            out.push_str(&join(s.vertices()));
            out.push('\n');
        }
        out
    }
}

pub(crate) fn join(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub(crate) fn parse_simplex(content: &str, line: usize) -> Result<Simplex, TopoError> {
    let perr = |message: String| TopoError::Parse { line, message };
    let vs = content
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| perr(format!("bad vertex id {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Simplex::new(vs).map_err(|e| perr(e.to_string()))
}

impl Clone for SimplicialComplex {
    fn clone(&self) -> Self {
        SimplicialComplex {
            by_dim: self.by_dim.clone(),
            index: self.index.clone(),
            h1: self.h1.clone(),
        }
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.by_dim == other.by_dim
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: BTreeMap<usize, usize> =
            self.by_dim.iter().enumerate().map(|(k, l)| (k, l.len())).collect();
        f.debug_struct("SimplicialComplex")
            .field("counts", &counts)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn closure_counts() {
        let k = SimplicialComplex::face_closure([vec![0, 1, 2]]).unwrap();
        assert_eq!(k.len(), 7);
        assert_eq!((k.count(0), k.count(1), k.count(2)), (3, 3, 1));
        let p = SimplicialComplex::face_closure([vec![0]]).unwrap();
        assert_eq!(p.len(), 1);
        let h = fixtures::hollow_triangle();
        assert_eq!((h.len(), h.count(2)), (6, 0));
    }

    #[test]
    fn simplex_validation() {
        assert_eq!(Simplex::new([]), Err(TopoError::EmptySimplex));
        assert_eq!(Simplex::new([1, 0, 1]), Err(TopoError::DuplicateVertex(1)));
        assert_eq!(Simplex::new([2, 0, 1]).unwrap().vertices(), &[0, 1, 2]);
        assert!(SimplicialComplex::face_closure([Vec::<usize>::new()]).is_err());
    }

    #[test]
    fn canonical_order_is_per_dimension() {
        let k = SimplicialComplex::face_closure([vec![0, 10], vec![2, 3]]).unwrap();
        let edges: Vec<_> = k.simplices(1).iter().map(|s| s.vertices().to_vec()).collect();
        assert_eq!(edges, vec![vec![0, 10], vec![2, 3]]);
        assert_eq!(k.index_of(&Simplex::edge(2, 3)), Some(1));
    }

    #[test]
    fn removing_a_simplex_removes_its_cofaces() {
        let k = fixtures::filled_triangle().without(&Simplex::edge(0, 1));
        assert_eq!((k.count(0), k.count(1), k.count(2)), (3, 2, 0));
    }

    #[test]
    fn text_round_trip() {
        let k = fixtures::torus7();
        assert_eq!(SimplicialComplex::parse(&k.to_text()).unwrap(), k);
        let e = SimplicialComplex::parse("0 1\nx 2\n").unwrap_err();
        assert!(matches!(e, TopoError::Parse { line: 2, .. }));
    }

    #[test]
    fn relabel_must_be_injective() {
        let k = fixtures::hollow_triangle();
        assert!(k.relabel(|v| v / 2).is_err());
        assert_eq!(k.relabel(|v| v + 5).unwrap().vertices().collect::<Vec<_>>(), vec![5, 6, 7]);
    }
}
