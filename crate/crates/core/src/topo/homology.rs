use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Simplex, SimplicialComplex};

/// A k-chain with coefficients in the two-element field, stored as its
/// support.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain {
    support: BTreeSet<Simplex>,
}

impl Chain {
    pub fn zero() -> Self {
        Chain::default()
    }

    pub fn from_simplices(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let mut c = Chain::zero();
        for s in simplices {
            c.toggle(s);
        }
        c
    }

    pub fn toggle(&mut self, s: Simplex) {
        if !self.support.remove(&s) {
            self.support.insert(s);
        }
    }

    pub fn add(&mut self, other: &Chain) {
        for s in &other.support {
            self.toggle(s.clone());
        }
    }

    pub fn coefficient(&self, s: &Simplex) -> u8 {
        u8::from(self.support.contains(s))
    }

    pub fn support(&self) -> &BTreeSet<Simplex> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn boundary(&self) -> Chain {
        let mut out = Chain::zero();
        for s in &self.support {
            out.add(&boundary(s));
        }
        out
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.support.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Codimension-1 faces, each with coefficient 1.
pub fn boundary(s: &Simplex) -> Chain {
    Chain::from_simplices(s.facets())
}

/// The oriented boundary `Σ (-1)^i [v0 .. v̂i .. vk]` with integer signs.
pub fn signed_boundary(s: &Simplex) -> Vec<(i64, Simplex)> {
    s.facets()
        .enumerate()
        .map(|(i, f)| (if i % 2 == 0 { 1 } else { -1 }, f))
        .collect()
}

/// A binary matrix stored as sorted row indices per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: Vec<Vec<usize>>,
}

impl SparseMatrix {
    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.cols.len()]; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for &i in col {
                m[i][j] = 1;
            }
        }
        m
    }

    /// Product over the two-element field.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut acc = Vec::new();
                for &k in col {
                    acc = xor(&acc, &self.cols[k]);
                }
                acc
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }
}

/// `∂_k`: rows are the (k-1)-simplices, columns the k-simplices, both in
/// canonical order.
pub fn boundary_matrix(k_complex: &SimplicialComplex, k: usize) -> SparseMatrix {
    if k == 0 {
        return SparseMatrix {
            rows: 0,
            cols: vec![Vec::new(); k_complex.count(0)],
        };
    }
    let cols = k_complex
        .simplices(k)
        .iter()
        .map(|s| {
            let mut col: Vec<usize> = s
                .facets()
                .map(|f| k_complex.index_of(&f).expect("face-closed"))
                .collect();
            col.sort_unstable();
            col
        })
        .collect();
    SparseMatrix {
        rows: k_complex.count(k - 1),
        cols,
    }
}

/// Dense signed `∂_k` for inspection.
pub fn signed_boundary_matrix(k_complex: &SimplicialComplex, k: usize) -> Vec<Vec<i64>> {
    let n_rows = if k == 0 { 0 } else { k_complex.count(k - 1) };
    let mut m = vec![vec![0i64; k_complex.count(k)]; n_rows];
    if k == 0 {
        return m;
    }
    for (j, s) in k_complex.simplices(k).iter().enumerate() {
        for (sign, f) in signed_boundary(s) {
            m[k_complex.index_of(&f).expect("face-closed")][j] = sign;
        }
    }
    m
}

/// Symmetric difference of two sorted index lists.
pub(crate) fn xor(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Left-to-right column reduction: no two nonzero columns share their
/// lowest row. When `v` is given, it records the column operations.
pub(crate) fn reduce(cols: &mut [Vec<usize>], mut v: Option<&mut Vec<Vec<usize>>>) {
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for j in 0..cols.len() {
        while let Some(&low) = cols[j].last() {
            match owner.get(&low) {
                Some(&k) => {
                    cols[j] = xor(&cols[j], &cols[k]);
                    if let Some(v) = v.as_deref_mut() {
                        v[j] = xor(&v[j], &v[k]);
                    }
                }
                None => {
                    owner.insert(low, j);
                    break;
                }
            }
        }
    }
}

/// Rank over the two-element field.
pub fn rank(m: &SparseMatrix) -> usize {
    let mut cols = m.cols.clone();
    reduce(&mut cols, None);
    cols.iter().filter(|c| !c.is_empty()).count()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn get(&self, k: usize) -> usize {
        self.0.get(k).copied().unwrap_or(0)
    }

    /// `k: β_k` per line.
    pub fn to_text(&self) -> String {
        self.0
            .iter()
            .enumerate()
            .map(|(k, b)| format!("{k}: {b}\n"))
            .collect()
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `β_k = n_k - rank ∂_k - rank ∂_{k+1}` for `k = 0..=maxdim`.
pub fn betti(k_complex: &SimplicialComplex, maxdim: usize) -> BettiVector {
    let ranks: Vec<usize> = (0..=maxdim + 1)
        .map(|k| rank(&boundary_matrix(k_complex, k)))
        .collect();
    BettiVector(
        (0..=maxdim)
            .map(|k| k_complex.count(k) - ranks[k] - ranks[k + 1])
            .collect(),
    )
}

pub fn euler_characteristic(k_complex: &SimplicialComplex) -> i64 {
    (0..=k_complex.dim().unwrap_or(0))
        .map(|k| {
            let n = k_complex.count(k) as i64;
            if k % 2 == 0 {
                n
            } else {
                -n
            }
        })
        .sum()
}

/// Genus of a closed connected orientable surface, `None` for anything
/// else.
pub fn genus(k_complex: &SimplicialComplex) -> Option<usize> {
    if k_complex.dim() != Some(2) {
        return None;
    }
    let triangles = k_complex.simplices(2);
    let mut edge_tris: Vec<Vec<usize>> = vec![Vec::new(); k_complex.count(1)];
    for (t, tri) in triangles.iter().enumerate() {
        for e in tri.facets() {
            edge_tris[k_complex.index_of(&e).expect("face-closed")].push(t);
        }
    }
    if edge_tris.iter().any(|ts| ts.len() != 2) {
        return None;
    }
    for &v in k_complex.simplices(0).iter().map(|s| &s.vertices()[0]) {
        if !link_is_cycle(k_complex, v) {
            return None;
        }
    }
    if betti(k_complex, 0).get(0) != 1 || !orientable(k_complex, &edge_tris) {
        return None;
    }
    let two_minus_chi = 2 - euler_characteristic(k_complex);
    if two_minus_chi < 0 || two_minus_chi % 2 != 0 {
        return None;
    }
    Some((two_minus_chi / 2) as usize)
}

/// The link of `v` (edges opposite `v` in its triangles) is one cycle.
fn link_is_cycle(k_complex: &SimplicialComplex, v: usize) -> bool {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for tri in k_complex.simplices(2) {
        if tri.vertices().contains(&v) {
            let rest: Vec<usize> = tri.vertices().iter().copied().filter(|&x| x != v).collect();
            adj.entry(rest[0]).or_default().push(rest[1]);
            adj.entry(rest[1]).or_default().push(rest[0]);
        }
    }
    if adj.is_empty() || adj.values().any(|n| n.len() != 2) {
        return false;
    }
    let start = *adj.keys().next().expect("nonempty");
    let (mut prev, mut cur, mut len) = (start, adj[&start][0], 1);
    while cur != start {
        let next = if adj[&cur][0] == prev { adj[&cur][1] } else { adj[&cur][0] };
        prev = cur;
        cur = next;
        len += 1;
    }
    len == adj.len()
}

/// Triangles can be oriented so that every edge gets opposite orientations
/// from its two triangles.
fn orientable(k_complex: &SimplicialComplex, edge_tris: &[Vec<usize>]) -> bool {
    let triangles = k_complex.simplices(2);
    // sign of facet i of an oriented triangle is (-1)^i times its orientation
    let facet_sign = |t: usize, e: &Simplex| -> i8 {
        let i = triangles[t].facets().position(|f| &f == e).expect("facet");
        if i % 2 == 0 {
            1
        } else {
            -1
        }
    };
    let mut orient: Vec<i8> = vec![0; triangles.len()];
    for start in 0..triangles.len() {
        if orient[start] != 0 {
            continue;
        }
        orient[start] = 1;
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            for e in triangles[t].facets() {
                let ts = &edge_tris[k_complex.index_of(&e).expect("face-closed")];
                let other = if ts[0] == t { ts[1] } else { ts[0] };
                let want = -orient[t] * facet_sign(t, &e) * facet_sign(other, &e);
                if orient[other] == 0 {
                    orient[other] = want;
                    stack.push(other);
                } else if orient[other] != want {
                    return false;
                }
            }
        }
    }
    true
}
