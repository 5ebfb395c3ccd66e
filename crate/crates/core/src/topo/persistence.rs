use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::homology::reduce;
use super::{join, parse_simplex, Simplex, SimplicialComplex, TopoError};

/// A complex with an entry time per simplex, in filtration order: time,
/// then dimension, then canonical vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    order: Vec<(Simplex, f64)>,
}

fn check_time(t: f64) -> Result<f64, TopoError> {
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(TopoError::BadTime(t))
    }
}

impl Filtration {
    /// Faces that are not listed enter with their earliest listed coface. A
    /// listed face later than a listed coface is rejected.
    pub fn new(entries: impl IntoIterator<Item = (Simplex, f64)>) -> Result<Self, TopoError> {
        let mut listed: BTreeMap<Simplex, f64> = BTreeMap::new();
        for (s, t) in entries {
            let t = check_time(t)?;
            if listed.insert(s.clone(), t).is_some() {
                return Err(TopoError::Duplicate(s));
            }
        }
        // earliest listed proper coface of every face
        let mut implied: BTreeMap<Simplex, (f64, Simplex)> = BTreeMap::new();
        for (s, &t) in &listed {
            for f in s.faces() {
                if &f == s {
                    continue;
                }
                let e = implied.entry(f).or_insert((t, s.clone()));
                if t < e.0 {
                    *e = (t, s.clone());
                }
            }
        }
        let mut times = listed.clone();
        for (f, (t, coface)) in implied {
            match listed.get(&f) {
                Some(&ft) if ft > t => {
                    return Err(TopoError::NonMonotone {
                        face: f,
                        face_time: ft,
                        coface,
                        coface_time: t,
                    })
                }
                Some(_) => {}
                None => {
                    times.insert(f, t);
                }
            }
        }
        let mut order: Vec<(Simplex, f64)> = times.into_iter().collect();
        order.sort_by(|(a, ta), (b, tb)| {
            ta.total_cmp(tb)
                .then(a.dim().cmp(&b.dim()))
                .then_with(|| a.cmp(b))
        });
        Ok(Filtration { order })
    }

    /// Every simplex of `k` at time `t`.
    pub fn constant(k: &SimplicialComplex, t: f64) -> Result<Self, TopoError> {
        Self::new(k.iter().map(|s| (s.clone(), t)))
    }

    /// Parses `<time> : <simplex>` lines.
    pub fn parse(text: &str) -> Result<Self, TopoError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let perr = |message: String| TopoError::Parse { line, message };
            let (t, s) = content
                .split_once(':')
                .ok_or_else(|| perr("expected '<time> : <simplex>'".into()))?;
            let t: f64 = t
                .trim()
                .parse()
                .map_err(|_| perr(format!("bad time {:?}", t.trim())))?;
            let t = check_time(t).map_err(|e| perr(e.to_string()))?;
            entries.push((parse_simplex(s, line)?, t));
        }
        Self::new(entries)
    }

    pub fn order(&self) -> &[(Simplex, f64)] {
        &self.order
    }

    pub fn complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_simplices(self.order.iter().map(|(s, _)| s.clone()))
    }

    pub fn to_text(&self) -> String {
        self.order
            .iter()
            .map(|(s, t)| format!("{t} : {}\n", join(s.vertices())))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub dim: usize,
    pub birth: f64,
    /// `None` for a class that never dies.
    pub death: Option<f64>,
}

impl Interval {
    pub fn is_open(&self) -> bool {
        self.death.is_none()
    }

    /// Born and killed at the same time. Kept in the barcode, flagged here.
    pub fn is_zero_length(&self) -> bool {
        self.death == Some(self.birth)
    }

    fn cmp_key(&self, other: &Self) -> Ordering {
        let death = |d: Option<f64>| d.unwrap_or(f64::INFINITY);
        self.dim
            .cmp(&other.dim)
            .then(self.birth.total_cmp(&other.birth))
            .then(death(self.death).total_cmp(&death(other.death)))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.death {
            Some(d) => write!(f, "{} {} {}", self.dim, self.birth, d),
            None => write!(f, "{} {} inf", self.dim, self.birth),
        }
    }
}

/// Intervals sorted by dimension, birth, death.
#[derive(Debug, Clone, PartialEq)]
pub struct Barcode {
    pub intervals: Vec<Interval>,
}

impl Barcode {
    pub fn open_counts(&self, maxdim: usize) -> Vec<usize> {
        let mut c = vec![0; maxdim + 1];
        for i in self.intervals.iter().filter(|i| i.is_open()) {
            c[i.dim] += 1;
        }
        c
    }

    pub fn to_text(&self) -> String {
        self.intervals.iter().map(|i| format!("{i}\n")).collect()
    }
}

/// Standard persistence by left-to-right reduction of the full boundary
/// matrix in filtration order.
pub fn persistence(filtration: &Filtration, maxdim: usize) -> Barcode {
    let order = filtration.order();
    let position: BTreeMap<&Simplex, usize> =
        order.iter().enumerate().map(|(i, (s, _))| (s, i)).collect();
    let mut cols: Vec<Vec<usize>> = order
        .iter()
        .map(|(s, _)| {
            let mut c: Vec<usize> = s.facets().map(|f| position[&f]).collect();
            c.sort_unstable();
            c
        })
        .collect();
    reduce(&mut cols, None);

    let mut killed = vec![false; order.len()];
    let mut intervals = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        if let Some(&i) = col.last() {
            killed[i] = true;
            let dim = order[i].0.dim();
            if dim <= maxdim {
                intervals.push(Interval {
                    dim,
                    birth: order[i].1,
                    death: Some(order[j].1),
                });
            }
        }
    }
    for (j, col) in cols.iter().enumerate() {
        let dim = order[j].0.dim();
        if col.is_empty() && !killed[j] && dim <= maxdim {
            intervals.push(Interval {
                dim,
                birth: order[j].1,
                death: None,
            });
        }
    }
    intervals.sort_by(Interval::cmp_key);
    Barcode { intervals }
}
