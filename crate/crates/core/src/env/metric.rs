use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use super::Payload;
use crate::machine::{Output, WorkState, DIVERGENCE_TOKEN};
use crate::topo::{Simplex, SimplicialComplex};

fn lcs_len(x: &[char], y: &[char]) -> usize {
    let mut row = vec![0usize; y.len() + 1];
    for &a in x {
        let mut diag = 0;
        for (j, &b) in y.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if a == b { diag + 1 } else { row[j + 1].max(row[j]) };
            diag = up;
        }
    }
    row[y.len()]
}

/// `1 - |LCS(x, y)| / max(|x|, |y|)`, and 0 for two empty strings. A metric
/// with values in `[0, 1]`.
pub fn field_distance(x: &str, y: &str) -> Rational64 {
    let (x, y): (Vec<char>, Vec<char>) = (x.chars().collect(), y.chars().collect());
    let longest = x.len().max(y.len());
    if longest == 0 {
        return Rational64::zero();
    }
    Rational64::from_integer(1) - Rational64::new(lcs_len(&x, &y) as i64, longest as i64)
}

fn work_field(w: &WorkState) -> &str {
    w.as_word().unwrap_or(DIVERGENCE_TOKEN)
}

fn output_field(o: &Output) -> &str {
    match o {
        Output::Word(w) => w,
        Output::Mu => DIVERGENCE_TOKEN,
    }
}

/// Sum of the per-field distances. The divergence sentinels compare as a
/// one-symbol word outside every alphabet.
pub fn config_distance(a: &Payload, b: &Payload) -> Rational64 {
    field_distance(work_field(&a.work), work_field(&b.work))
        + field_distance(&a.input, &b.input)
        + field_distance(output_field(&a.output), output_field(&b.output))
}

/// Vietoris-Rips complex on points `0..n`: a simplex on every set of at
/// most `maxdim + 1` points with all pairwise distances `<= eps`.
pub fn vietoris_rips<T: PartialOrd>(
    n: usize,
    dist: impl Fn(usize, usize) -> T,
    eps: T,
    maxdim: usize,
) -> SimplicialComplex {
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if dist(i, j) <= eps {
                adj[i].push(j);
            }
        }
    }
    let mut simplices = Vec::new();
    // extend each clique by a larger neighbour common to all its members
    let mut layer: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    for _ in 0..=maxdim {
        let mut next = Vec::new();
        for clique in &layer {
            let last = *clique.last().expect("nonempty");
            for &c in &adj[last] {
                if clique.iter().all(|&v| adj[v].binary_search(&c).is_ok()) {
                    let mut bigger = clique.clone();
                    bigger.push(c);
                    next.push(bigger);
                }
            }
        }
        simplices.extend(layer.into_iter().map(|c| Simplex::new(c).expect("distinct")));
        layer = next;
    }
    SimplicialComplex::from_simplices(simplices)
}

/// Parses `3`, `1.25` or `5/2`.
pub fn parse_rational(s: &str) -> Option<Rational64> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let (n, d): (i64, i64) = (n.trim().parse().ok()?, d.trim().parse().ok()?);
        return (d != 0).then(|| Rational64::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 15 {
        return None;
    }
    let int: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let scale = 10i64.checked_pow(frac.len() as u32)?;
    let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    let v = Rational64::new(int.checked_mul(scale)?.checked_add(frac)?, scale);
    Some(if neg { -v } else { v })
}

/// Integer or terminating decimal when exact, `p/q` otherwise.
pub fn render_rational(r: Rational64) -> String {
    if r.is_integer() {
        return r.to_integer().to_string();
    }
    let mut d = *r.denom();
    while d % 2 == 0 {
        d /= 2;
    }
    while d % 5 == 0 {
        d /= 5;
    }
    if d == 1 {
        let v = r.to_f64().expect("finite");
        let s = format!("{v}");
        if parse_rational(&s) == Some(r) {
            return s;
        }
    }
    format!("{}/{}", r.numer(), r.denom())
}
