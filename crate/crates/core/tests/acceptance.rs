//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the lines always reach the output; exits nonzero on any FAIL.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ptmtopo_core::env::build_env;
use ptmtopo_core::fixtures;
use ptmtopo_core::its::{
    bisim_check, bisim_witness, env_classify, extract_its, iso_check, records_up_to,
    stream_equiv, Its, ObservationEnv,
};
use ptmtopo_core::machine::{InputSpace, Policy};
use ptmtopo_core::path::{h1_class, stream_to_path, EdgePath, Loop, StreamPath};
use ptmtopo_core::topo::{
    betti, boundary_matrix, euler_characteristic, genus, persistence, Filtration, Simplex,
    SimplicialComplex,
};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_complex(rng: &mut ChaCha8Rng) -> SimplicialComplex {
    let n = rng.gen_range(3..=9);
    let gens: Vec<Vec<usize>> = (0..rng.gen_range(1..=10))
        .map(|_| {
            let size = rng.gen_range(1..=4);
            let mut s = BTreeSet::new();
            while s.len() < size.min(n) {
                s.insert(rng.gen_range(0..n));
            }
            s.into_iter().collect()
        })
        .collect();
    SimplicialComplex::face_closure(gens).expect("nonempty vertex sets")
}

fn homology_suite() -> Check {
    let cases: [(&str, SimplicialComplex, Vec<usize>); 4] = [
        ("point", fixtures::point(), vec![1]),
        ("hollow triangle", fixtures::hollow_triangle(), vec![1, 1]),
        ("hollow tetrahedron", fixtures::hollow_tetrahedron(), vec![1, 0, 1]),
        ("torus", fixtures::torus7(), vec![1, 2, 1]),
    ];
    for (name, k, expected) in &cases {
        let got = betti(k, expected.len() - 1).0;
        ensure(&got == expected, || format!("{name}: betti {got:?}, expected {expected:?}"))?;
    }
    let g = (genus(&fixtures::hollow_tetrahedron()), genus(&fixtures::torus7()));
    ensure(g == (Some(0), Some(1)), || format!("genus {g:?}"))?;
    Ok("4 complexes, genus 0 and 1".into())
}

fn chain_complex_identities() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 250;
    for i in 0..n {
        let k = random_complex(&mut rng);
        for d in 1..3 {
            ensure(boundary_matrix(&k, d).mul(&boundary_matrix(&k, d + 1)).is_zero(), || {
                format!("complex {i}: d{d} d{} != 0", d + 1)
            })?;
        }
        let b = betti(&k, 3).0;
        let alt_betti: i64 = b.iter().enumerate().map(|(d, &x)| if d % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        let alt_counts: i64 = (0..4).map(|d| if d % 2 == 0 { k.count(d) as i64 } else { -(k.count(d) as i64) }).sum();
        ensure(alt_betti == alt_counts && alt_counts == euler_characteristic(&k), || {
            format!("complex {i}: chi {alt_counts} vs betti sum {alt_betti}")
        })?;
    }
    Ok(format!("{n} random complexes up to dim 3"))
}

fn persistence_consistency() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 150;
    for i in 0..n {
        let k = random_complex(&mut rng);
        // each simplex enters no earlier than any of its faces
        let mut entries: Vec<(Simplex, f64)> = Vec::new();
        for d in 0..=k.dim().unwrap_or(0) {
            for s in k.simplices(d) {
                let floor = s
                    .facets()
                    .map(|f| entries.iter().find(|(x, _)| *x == f).map_or(0.0, |e| e.1))
                    .fold(0.0, f64::max);
                entries.push((s.clone(), floor + rng.gen_range(0..3) as f64));
            }
        }
        let f = Filtration::new(entries).map_err(|e| format!("filtration {i}: {e}"))?;
        let expected = betti(&k, 3).0;
        let open = persistence(&f, 3).open_counts(3);
        ensure(open == expected, || format!("filtration {i}: open bars {open:?}, betti {expected:?}"))?;
        let constant = persistence(&Filtration::constant(&k, 0.0).map_err(|e| e.to_string())?, 3);
        ensure(
            constant.open_counts(3) == expected && constant.intervals.iter().all(|b| b.is_open() || b.is_zero_length()),
            || format!("constant filtration {i} differs from homology"),
        )?;
    }
    Ok(format!("{n} random monotone filtrations"))
}

fn machine_corpus_iso() -> Check {
    let space = InputSpace::new(['a', 'b'], 2);
    let (depth, fuel) = (3, 10);
    let machines = fixtures::machines();
    let mut data = Vec::new();
    for (name, m) in &machines {
        let records = records_up_to(m, &space, depth, fuel).map_err(|e| format!("{name}: {e}"))?;
        let its = extract_its(m, &space, depth, fuel).map_err(|e| format!("{name}: {e}"))?;
        data.push((name, records, its));
    }
    let (mut pairs, mut equal) = (0, 0);
    for i in 0..data.len() {
        for j in i + 1..data.len() {
            pairs += 1;
            let same_records = data[i].1 == data[j].1;
            let iso = iso_check(&data[i].2, &data[j].2).is_some();
            equal += usize::from(same_records);
            ensure(same_records == iso, || {
                format!("{} vs {}: record equality {same_records}, iso {iso}", data[i].0, data[j].0)
            })?;
        }
    }
    Ok(format!(
        "{} machines, {pairs} pairs agree ({equal} equivalent), bound 2, depth 3, fuel {fuel}",
        machines.len()
    ))
}

fn its_corpus() -> Vec<(&'static str, Its)> {
    vec![
        ("selfloop", fixtures::its_selfloop()),
        ("cycle2", fixtures::its_cycle2()),
        ("fork", fixtures::its_fork()),
        ("join", fixtures::its_join()),
        ("early", fixtures::its_early()),
        ("late", fixtures::its_late()),
        ("echo", fixtures::its_echo()),
        ("echo-renamed", fixtures::its_echo_renamed()),
        ("loop", fixtures::its_loop()),
    ]
}

fn equivalence_hierarchy() -> Check {
    let corpus = its_corpus();
    let mut pairs = 0;
    for (na, a) in &corpus {
        for (nb, b) in &corpus {
            pairs += 1;
            let iso = iso_check(a, b).is_some();
            let bisim = bisim_check(a, b).is_some();
            ensure(!iso || bisim, || format!("{na} {nb}: iso without bisim"))?;
            for d in 1..=4 {
                let stream = stream_equiv(a, b, d).map_err(|e| e.to_string())?;
                ensure(!bisim || stream, || format!("{na} {nb}: bisim without stream at depth {d}"))?;
            }
        }
    }
    let (one, two) = (fixtures::its_selfloop(), fixtures::its_cycle2());
    ensure(bisim_check(&one, &two).is_some() && iso_check(&one, &two).is_none(), || {
        "selfloop/cycle2 is not a bisim-but-not-iso witness".into()
    })?;
    // both systems are acyclic with paths of length 2, so depth 4 covers every trace
    let (early, late) = (fixtures::its_early(), fixtures::its_late());
    let stream = (1..=4).all(|d| stream_equiv(&early, &late, d).unwrap_or(false));
    let formula = bisim_witness(&early, &late).ok_or("early/late are bisimilar")?;
    ensure(
        stream && formula.holds(&early, early.root()) && !formula.holds(&late, late.root()),
        || "early/late is not a stream-but-not-bisim witness".into(),
    )?;
    Ok(format!(
        "{pairs} ordered pairs; bisim not iso: selfloop/cycle2; stream not bisim: early/late via {formula}"
    ))
}

fn environment_hierarchy() -> Check {
    let corpus = its_corpus();
    let systems: Vec<Its> = corpus.iter().map(|(_, s)| s.clone()).collect();
    let same = |p: &[Vec<usize>], i: usize, j: usize| p.iter().any(|c| c.contains(&i) && c.contains(&j));
    let refines = |fine: &[Vec<usize>], coarse: &[Vec<usize>]| {
        (0..systems.len()).all(|i| (0..systems.len()).all(|j| !same(fine, i, j) || same(coarse, i, j)))
    };
    let classify = |env: &ObservationEnv| env_classify(&systems, env).map_err(|e| e.to_string());
    let tm = classify(&ObservationEnv::tm_style())?;
    let mut sizes = vec![tm.len()];
    for d in 1..=3 {
        let coarse = classify(&ObservationEnv::stream_style(d).map_err(|e| e.to_string())?)?;
        let fine = classify(&ObservationEnv::stream_style(d + 1).map_err(|e| e.to_string())?)?;
        ensure(refines(&coarse, &tm), || format!("depth {d} does not refine the TM partition"))?;
        ensure(refines(&fine, &coarse), || format!("depth {} does not refine depth {d}", d + 1))?;
        sizes.push(fine.len());
    }
    Ok(format!("class counts tm,2,3,4 = {sizes:?}"))
}

fn path_classification() -> Check {
    let h = Arc::new(fixtures::torus7());
    let parse = |text: &str| {
        EdgePath::parse(h.clone(), text)
            .and_then(Loop::new)
            .map_err(|e| e.to_string())
    };
    let (belt, neck) = (parse(fixtures::BELT)?, parse(fixtures::NECK)?);
    let class = |l: &Loop| h1_class(l).map_err(|e| e.to_string());
    let (cb, cn) = (class(&belt)?, class(&neck)?);
    ensure(!cb.is_zero() && !cn.is_zero() && cb != cn, || format!("belt {:?}, neck {:?}", cb.coords, cn.coords))?;
    let sum = class(&belt.compose(&neck).map_err(|e| e.to_string())?)?;
    ensure(sum == cb.add(&cn), || format!("belt+neck gave {:?}", sum.coords))?;

    let mut loops = vec![belt, neck];
    for t in h.simplices(2) {
        let v = t.vertices();
        let l = Loop::new(EdgePath::new(h.clone(), vec![v[0], v[1], v[2], v[0]]).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(class(&l)?.is_zero(), || format!("boundary of {t} is not null"))?;
        if v[0] == 0 {
            loops.push(l);
        }
    }
    let mut pairs = 0;
    for a in &loops {
        for b in &loops {
            pairs += 1;
            let ab = class(&a.compose(b).map_err(|e| e.to_string())?)?;
            ensure(ab == class(a)?.add(&class(b)?), || format!("additivity fails for {} + {}", a.path(), b.path()))?;
        }
    }
    Ok(format!("belt {:?}, neck {:?}, 14 triangle boundaries null, {pairs} additive pairs", cb.coords, cn.coords))
}

fn latch_feasibility() -> Check {
    let trace = build_env(
        &fixtures::latch(),
        fixtures::LATCH_INPUTS,
        fixtures::latch_eps(),
        1,
        100,
        Policy::Deterministic,
    )
    .map_err(|e| e.to_string())?;
    let snap = trace.last();
    let path = match stream_to_path(&trace.stream, snap).map_err(|e| e.to_string())? {
        StreamPath::Feasible(p) => p,
        StreamPath::Infeasible(_, v) => return Err(format!("calibrated snapshot: {v}")),
    };
    let class = h1_class(&Loop::new(path.clone()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(!class.is_zero(), || "the LATCH loop is nullhomologous".into())?;

    let v = path.vertices().to_vec();
    let (u, w) = (v[2], v[3]);
    // the first step of the walk that uses the deleted edge
    let expected = v
        .windows(2)
        .position(|s| (s[0], s[1]) == (u, w) || (s[0], s[1]) == (w, u))
        .ok_or("deleted edge is not on the path")?;
    let cut = snap.with_edge_removed(u, w);
    match stream_to_path(&trace.stream, &cut).map_err(|e| e.to_string())? {
        StreamPath::Infeasible(_, viol) => {
            ensure(viol.index == expected && viol.index == 2, || {
                format!("violation at {}, expected {expected}", viol.index)
            })?;
            Ok(format!("loop {path} has class {:?}; without edge {{{u},{w}}}: {viol}", class.coords))
        }
        StreamPath::Feasible(_) => Err("edge-deleted snapshot still feasible".into()),
    }
}

fn golden_reproducibility() -> Check {
    let cases = common::cases();
    for (name, args) in &cases {
        let first = common::run_case(name, args);
        let second = common::run_case(name, args);
        ensure(first == second, || format!("{name}: two runs differ"))?;
        let expected = std::fs::read_to_string(common::golden_path(name)).map_err(|e| format!("{name}: {e}"))?;
        ensure(first == expected, || format!("{name}: output differs from golden file"))?;
    }
    Ok(format!("{} golden cases byte-identical across two runs", cases.len()))
}

fn main() {
    let criteria: [(u32, &str, Option<Duration>, fn() -> Check); 9] = [
        (1, "homology suite", Some(Duration::from_secs(1)), homology_suite),
        (2, "boundary of boundary and Euler-Poincare", Some(Duration::from_secs(30)), chain_complex_identities),
        (3, "persistence consistency", Some(Duration::from_secs(30)), persistence_consistency),
        (4, "record equality iff ITS isomorphism", None, machine_corpus_iso),
        (5, "equivalence hierarchy", None, equivalence_hierarchy),
        (6, "environment hierarchy", None, environment_hierarchy),
        (7, "path classification", None, path_classification),
        (8, "constrained feasibility", None, latch_feasibility),
        (9, "CLI reproducibility", None, golden_reproducibility),
    ];
    let mut failed = 0;
    for (id, title, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (r, _) => r,
        };
        let limit = limit.map_or(String::new(), |l| format!(", limit {l:?}"));
        match result {
            Ok(detail) => println!("criterion {id} PASS  {title}: {detail} ({elapsed:.2?}{limit})"),
            Err(why) => {
                failed += 1;
                println!("criterion {id} FAIL  {title}: {why} ({elapsed:.2?}{limit})");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
