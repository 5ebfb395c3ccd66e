use std::collections::BTreeMap;

use super::homology::{boundary_matrix, reduce, xor, Chain};
use super::{Simplex, SimplicialComplex, TopoError};

/// A basis of `H_1` over the two-element field, read off the reduced
/// boundary matrices.
///
/// Basis cycles are the columns of the reduction record `V_1` for edges whose
/// `∂_1` column reduces to zero and which are not the lowest entry of any
/// reduced `∂_2` column. They come out ordered by that edge's canonical
/// index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Basis {
    edges: Vec<Simplex>,
    cycles: Vec<Vec<usize>>,
    /// Lowest edge -> vector with that lowest entry, and the basis cycle it
    /// stands for (boundaries stand for none).
    pivots: BTreeMap<usize, (Vec<usize>, Option<usize>)>,
}

impl H1Basis {
    pub(crate) fn compute(k: &SimplicialComplex) -> Self {
        let edges = k.simplices(1).to_vec();
        let mut r1 = boundary_matrix(k, 1).cols;
        let mut v1: Vec<Vec<usize>> = (0..r1.len()).map(|j| vec![j]).collect();
        reduce(&mut r1, Some(&mut v1));
        let mut r2 = boundary_matrix(k, 2).cols;
        reduce(&mut r2, None);

        let mut pivots = BTreeMap::new();
        for col in r2.into_iter().filter(|c| !c.is_empty()) {
            pivots.insert(*col.last().expect("nonzero"), (col, None));
        }
        let mut cycles = Vec::new();
        for (e, col) in r1.iter().enumerate() {
            if col.is_empty() && !pivots.contains_key(&e) {
                pivots.insert(e, (v1[e].clone(), Some(cycles.len())));
                cycles.push(v1[e].clone());
            }
        }
        H1Basis {
            edges,
            cycles,
            pivots,
        }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn cycles(&self) -> Vec<Chain> {
        self.cycles
            .iter()
            .map(|c| Chain::from_simplices(c.iter().map(|&e| self.edges[e].clone())))
            .collect()
    }

    /// Coordinates of the class of a 1-cycle in this basis.
    pub fn coordinates(&self, chain: &Chain) -> Result<Vec<u8>, TopoError> {
        if !chain.boundary().is_zero() {
            return Err(TopoError::NotACycle);
        }
        let mut v = Vec::with_capacity(chain.support().len());
        for s in chain.support() {
            let idx = self.edges.binary_search(s).map_err(|_| {
                TopoError::Structural(format!("{s} is not an edge of the complex"))
            })?;
            v.push(idx);
        }
        v.sort_unstable();
        let mut coords = vec![0u8; self.cycles.len()];
        while let Some(&low) = v.last() {
            let (vec, tag) = self.pivots.get(&low).ok_or(TopoError::NotACycle)?;
            v = xor(&v, vec);
            if let Some(i) = tag {
                coords[*i] ^= 1;
            }
        }
        Ok(coords)
    }
}
