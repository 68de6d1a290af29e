//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the report reads top to bottom.
//!
//! Criterion 5 asserts a statement that is false as written (see the
//! README); it is reported as FAIL and listed in
//! `KNOWN_FAILURES`, which keeps it from failing the run. If it ever
//! starts passing, the run fails so the list gets updated.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use nilgrowth::balls::{ball_growth, ball_growth_bfs, growth_exponent_fit, GrowthSeries, Overflow};
use nilgrowth::groups::{GeneratingSet, GroupContext, GroupElement, DEFAULT_BUDGET};
use nilgrowth::growth_profile::{
    containment_factor, cramer_select, envelope, growth_polynomial, loglog_profile, profile_deviation,
    sample_box_vertices, vdc_check,
};
use nilgrowth::hall::{HallBasis, StructureTable};
use nilgrowth::heisenberg_scaling::{cc_estimate, collapsing_grid, convergence_table, p_box, scaled_family_table, s_family};
use nilgrowth::lie_algebra::LieAlgebra;
use nilgrowth::linalg::{self, q, qr};
use nilgrowth::progression::{LieProgression, OrderedProgression};
use nilgrowth::{LieBracket, Q};
use nilgrowth_cli::commands::deviation_csv;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILURES: &[usize] = &[5];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- oracles

/// `S^m` for `m = 0..=m_max` by materialising `S · S^{m-1}`.
fn naive_balls(ctx: &GroupContext, s: &[GroupElement], m_max: usize) -> Vec<u64> {
    let mut cur: BTreeSet<GroupElement> = BTreeSet::from([ctx.identity()]);
    let mut out = vec![1];
    for _ in 0..m_max {
        cur = s.iter().flat_map(|a| cur.iter().map(move |b| ctx.multiply(a, b))).collect();
        out.push(cur.len() as u64);
    }
    out
}

/// Least-squares slope of `ln ball(m)` against `ln m`.
fn loglog_slope(balls: &[u64], lo: usize, hi: usize) -> f64 {
    let pts: Vec<(f64, f64)> = (lo..=hi).map(|m| ((m as f64).ln(), (balls[m] as f64).ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn witt(d: usize, k: usize) -> usize {
    let s: i64 = (1..=k).filter(|e| k % e == 0).map(|e| mobius(e) * (d as i64).pow((k / e) as u32)).sum();
    (s / k as i64) as usize
}

fn lie_identities<A: LieBracket>(a: &A) -> Result<(), String> {
    let n = a.dim();
    let e = |i| linalg::unit(n, i);
    for i in 0..n {
        for j in 0..n {
            let ij = a.bracket(&e(i), &e(j));
            ensure(ij == linalg::neg(&a.bracket(&e(j), &e(i))), || format!("antisymmetry fails at ({i},{j})"))?;
            for k in 0..n {
                let t1 = a.bracket(&e(i), &a.bracket(&e(j), &e(k)));
                let t2 = a.bracket(&e(j), &a.bracket(&e(k), &e(i)));
                let t3 = a.bracket(&e(k), &ij);
                ensure(linalg::is_zero_vec(&linalg::add(&linalg::add(&t1, &t2), &t3)), || {
                    format!("Jacobi fails at ({i},{j},{k})")
                })?;
            }
        }
    }
    Ok(())
}

/// `a ⊕ R^k`.
fn with_abelian(a: &LieAlgebra, k: usize) -> LieAlgebra {
    let n = a.dim() + k;
    let mut brackets = Vec::new();
    for i in 0..a.dim() {
        for j in (i + 1)..a.dim() {
            let b = a.basis_bracket(i, j);
            if !linalg::is_zero_vec(b) {
                let mut v = b.to_vec();
                v.resize(n, q(0));
                brackets.push((i, j, v));
            }
        }
    }
    LieAlgebra::new(n, None, brackets).unwrap()
}

fn random_central<R: Rng>(rng: &mut R, a: &LieAlgebra) -> Option<Vec<Q>> {
    let center = a.center();
    if center.dim() == 0 {
        return None;
    }
    loop {
        let mut u = linalg::zeros(a.dim());
        for b in center.basis() {
            linalg::axpy(&mut u, &q(rng.gen_range(-2..=2)), b);
        }
        if !linalg::is_zero_vec(&u) {
            return Some(u);
        }
    }
}

// --------------------------------------------------------------- criteria

fn c1_heisenberg_invariants() -> Outcome {
    let json = r#"{"dim": 3, "brackets": [[1, 2, [[3, 1, 1]]]]}"#;
    for a in [LieAlgebra::heisenberg(), LieAlgebra::from_json(json).map_err(|e| e.to_string())?] {
        let hdim = a.homogeneous_dimension().map_err(|e| e.to_string())?;
        ensure(a.dim() == 3 && hdim == 4, || format!("dim={} hdim={hdim}", a.dim()))?;
    }
    let o = Command::new(env!("CARGO_BIN_EXE_nilgrowth")).args(["hdim", "--algebra", "heisenberg"]).output().unwrap();
    let text = String::from_utf8_lossy(&o.stdout).into_owned();
    ensure(text == "dim=3 hdim=4\n", || format!("CLI printed {text:?}"))?;
    Ok("dim=3 hdim=4".into())
}

fn c2_growth_exponent() -> Outcome {
    let heis = ball_growth_bfs(&GeneratingSet::standard(GroupContext::Heisenberg), 30, DEFAULT_BUDGET);
    let z2 = ball_growth_bfs(&GeneratingSet::standard(GroupContext::abelian(2)), 30, DEFAULT_BUDGET);
    ensure(heis.is_complete() && z2.is_complete(), || "BFS overflowed".into())?;
    let balls = |s: &GrowthSeries| s.records().iter().map(|r| r.ball).collect::<Vec<_>>();
    let (hs, zs) = (loglog_slope(&balls(&heis), 5, 30), loglog_slope(&balls(&z2), 5, 30));
    let lib = growth_exponent_fit(&heis, (5, 30)).map_err(|e| e.to_string())?.slope;
    ensure((lib - hs).abs() < 1e-9, || format!("library slope {lib} vs oracle {hs}"))?;
    ensure((hs - 4.0).abs() <= 0.3, || format!("Heisenberg slope {hs:.4}"))?;
    ensure((zs - 2.0).abs() <= 0.15, || format!("Z^2 slope {zs:.4}"))?;
    Ok(format!("Heisenberg slope {hs:.4}, Z^2 slope {zs:.4} on [5,30]"))
}

fn c3_profile_pipeline() -> Outcome {
    let p = LieProgression::new(LieAlgebra::heisenberg(), vec![2, 2, 8], q(1)).map_err(|e| e.to_string())?;
    let f = growth_polynomial(&p).map_err(|e| e.to_string())?;
    // Oracle by hand: the spanning triples among x, y, z (lengths 2m, 2m,
    // 8m) and [x, y] (length 4m^2) are {x, y, z}, giving 2^3·2·2·8 m^3, and
    // {x, y, [x, y]}, giving 2^3·2·2·4 m^4; z and [x, y] are parallel.
    let expected = nilgrowth::growth_profile::GrowthPolynomial::from_terms([(3, q(256)), (4, q(128))]);
    ensure(f == expected, || format!("growth polynomial {f}"))?;
    let prof = loglog_profile(&envelope(&f).map_err(|e| e.to_string())?);
    ensure(prof.slopes() == vec![3, 4], || format!("slopes {:?}", prof.slopes()))?;
    let elems = p.ordered().enumerate(DEFAULT_BUDGET).map_err(|e| e.to_string())?.elements;
    let s = GeneratingSet::symmetrize(p.context().clone(), elems).map_err(|e| e.to_string())?;
    let series = ball_growth(&s, 25, DEFAULT_BUDGET);
    ensure(series.is_complete(), || format!("overflow at radius {}", series.max_radius() + 1))?;
    // Spot-check the fiber engine against generic BFS on the first radii.
    let bfs = ball_growth_bfs(&s, 3, DEFAULT_BUDGET);
    ensure(bfs.records() == &series.records()[..4], || "fiber and BFS disagree".into())?;
    let dev = profile_deviation(&series, &prof).map_err(|e| e.to_string())?;
    ensure(dev.rows.iter().all(|r| r.residual.is_finite()), || "non-finite residual".into())?;
    let spread = dev.spread();
    ensure(spread <= 2.0, || format!("spread {spread:.4}"))?;
    Ok(format!("f = {f}, slopes [3,4], residuals in [{:.4}, {:.4}], spread {spread:.4}", dev.min, dev.max))
}

fn c4_growth_numbers() -> Outcome {
    let h = GroupContext::Heisenberg;
    let unit = |i| GroupElement::int(&[(i == 0) as i64, (i == 1) as i64, (i == 2) as i64]);
    for j in 1..=4u64 {
        for k in [1u64, 2, 3, 5, 8, 13] {
            let expected = (2 * j + 1).pow(2) * (2 * k + 1);
            ensure(p_box(j, k).count() == expected, || format!("fiber |P({j},{k})|"))?;
            let p = OrderedProgression::new(h.clone(), (0..3).map(unit).collect(), vec![j, j, k]).unwrap();
            let n = p.enumerate(DEFAULT_BUDGET).map_err(|e| e.to_string())?.elements.len() as u64;
            ensure(n == expected, || format!("|P({j},{k})| = {n}, expected {expected}"))?;
        }
    }
    // Oracle for |S_n|: P ∪ P^{-1} built element by element.
    for n in 2..=3i64 {
        let k = n.pow(3);
        let mut set = BTreeSet::new();
        for u in -n..=n {
            for v in -n..=n {
                for w in -k..=k {
                    let g = GroupElement::int(&[u, v, w]);
                    set.insert(h.invert(&g));
                    set.insert(g);
                }
            }
        }
        let lib = s_family(n as u64, k as u64).unwrap().len();
        ensure(lib == set.len(), || format!("|S_{n}| = {lib}, oracle {}", set.len()))?;
    }
    let rows = scaled_family_table(&[(2, 1), (3, 1), (4, 1), (5, 1)], DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(rows.iter().all(|r| !r.partial && r.a == 0), || "partial row".into())?;
    let band = |v: Vec<Q>| -> (f64, f64, f64) {
        let lo = v.iter().min().unwrap().to_f64().unwrap();
        let hi = v.iter().max().unwrap().to_f64().unwrap();
        (lo, hi, hi / lo)
    };
    let (slo, shi, sr) = band(rows.iter().map(|r| r.s_normalized.clone()).collect());
    let (blo, bhi, br) = band(rows.iter().filter(|r| r.n >= 3).map(|r| r.ball_normalized.clone()).collect());
    ensure(sr <= 10.0, || format!("|S_n|/n^5 band [{slo:.3}, {shi:.3}]"))?;
    ensure(br <= 10.0, || format!("|S_n^n|/n^8 band [{blo:.3}, {bhi:.3}]"))?;
    Ok(format!("|P(j,k)| exact on 24 cells; |S_n|/n^5 in [{slo:.3}, {shi:.3}]; |S_n^n|/n^8 in [{blo:.3}, {bhi:.3}]"))
}

fn c5_collapsing_identity() -> Outcome {
    let rows = collapsing_grid(3, 12, 12, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let required: Vec<_> = rows.iter().filter(|r| r.required).collect();
    let unknown = required.iter().filter(|r| r.equal.is_none()).count();
    let bad: Vec<_> = required.iter().filter(|r| r.is_counterexample()).collect();
    ensure(unknown == 0, || format!("{unknown} required rows exceeded the budget"))?;
    ensure(bad.is_empty(), || {
        let first = bad[0];
        format!(
            "{} counterexamples among {} rows with (mi)^2 >= 10mj, first at i={} j={} m={}",
            bad.len(),
            required.len(),
            first.i,
            first.j,
            first.m
        )
    })?;
    Ok(format!("{} required rows, no counterexample", required.len()))
}

fn c6_exact_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    for (d, s) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)] {
        let ctx = GroupContext::free_nilpotent(d, s).map_err(|e| e.to_string())?;
        let r = ctx.coord_len();
        for _ in 0..20 {
            let mut pick = || {
                GroupElement::Rat((0..r).map(|_| qr(rng.gen_range(-3..=3), rng.gen_range(1..=3))).collect())
            };
            let (x, y, z) = (pick(), pick(), pick());
            let lhs = ctx.multiply(&ctx.multiply(&x, &y), &z);
            let rhs = ctx.multiply(&x, &ctx.multiply(&y, &z));
            ensure(lhs == rhs, || format!("BCH not associative at d={d} s={s}: {x} {y} {z}"))?;
            checked += 1;
        }
    }
    let mut tables = 0;
    for d in 1..=3 {
        for s in 1..=4 {
            lie_identities(&StructureTable::new(d, s).map_err(|e| e.to_string())?)?;
            tables += 1;
            let basis = HallBasis::new(d, s).map_err(|e| e.to_string())?;
            for k in 1..=s {
                let count = (0..basis.len()).filter(|&i| basis.total_weight(i) as usize == k).count();
                ensure(count == witt(d, k), || format!("Witt count d={d} k={k}: {count} vs {}", witt(d, k)))?;
            }
        }
    }
    for a in [LieAlgebra::heisenberg(), with_abelian(&LieAlgebra::free(2, 3).unwrap(), 1), LieAlgebra::free(3, 2).unwrap()] {
        lie_identities(&a)?;
        tables += 1;
    }
    Ok(format!("{checked} associativity triples, {tables} tables, Witt counts for d <= 3, s <= 4"))
}

fn c7_counting_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // Van der Corput on sheared integer boxes.
    let mut vdc = 0;
    while vdc < 50 {
        let d = rng.gen_range(1..=3);
        let basis: Vec<Vec<i64>> = (0..d)
            .map(|i| (0..d).map(|j| if i == j { rng.gen_range(1..=2) } else if j > i { rng.gen_range(-2..=2) } else { 0 }).collect())
            .collect();
        let bounds: Vec<Q> = (0..d).map(|_| qr(rng.gen_range(1..=12), rng.gen_range(1..=3))).collect();
        let report = vdc_check(&basis, &bounds, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(report.pass, || format!("van der Corput fails: {basis:?} {bounds:?}"))?;
        vdc += 1;
    }
    // Cramer containment.
    let mut cramer = 0;
    let mut worst = q(0);
    while cramer < 20 {
        let d = rng.gen_range(2..=3);
        let r = rng.gen_range(d..=d + 3);
        let vectors: Vec<Vec<Q>> =
            (0..r).map(|_| (0..d).map(|_| qr(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect()).collect();
        if linalg::rank(&vectors, d) < d {
            continue;
        }
        let m: Vec<Q> = (0..r).map(|_| qr(rng.gen_range(1..=9), rng.gen_range(1..=3))).collect();
        let sel = cramer_select(&vectors, &m).map_err(|e| e.to_string())?;
        let pts = sample_box_vertices(&vectors, &m, 100, cramer as u64);
        let factor = containment_factor(&vectors, &m, &sel.indices, &pts).map_err(|e| e.to_string())?;
        ensure(factor <= q(r as i64), || format!("containment factor {factor} > r = {r}"))?;
        worst = worst.max(factor / q(r as i64));
        cramer += 1;
    }
    // Homogeneous dimension of central quotients.
    let seeds = [
        LieAlgebra::heisenberg(),
        LieAlgebra::free(2, 3).unwrap(),
        LieAlgebra::free(3, 2).unwrap(),
        with_abelian(&LieAlgebra::heisenberg(), 2),
        with_abelian(&LieAlgebra::free(2, 3).unwrap(), 1),
    ];
    let mut quotients = 0;
    while quotients < 50 {
        let a = seeds[rng.gen_range(0..seeds.len())].clone();
        let u = random_central(&mut rng, &a).unwrap();
        let xi = a.xi_degree(&u).map_err(|e| e.to_string())?;
        let quotient = a.central_quotient(&u).map_err(|e| e.to_string())?;
        let (hq, ha) = (quotient.homogeneous_dimension().unwrap(), a.homogeneous_dimension().unwrap());
        ensure(hq + xi == ha, || format!("hdim quotient {hq} + xi {xi} != {ha}"))?;
        quotients += 1;
    }
    // Sumset bound on rank-1 abelian runs, i.e. in Z.
    let mut runs = 0;
    for gens in [vec![1], vec![2], vec![2, 3], vec![1, 5], vec![3, 7, 10], vec![4, 6], vec![1, 2, 3, 4], vec![5, 9, 30]] {
        let elems = gens.iter().map(|&g| GroupElement::int(&[g])).collect();
        let s = GeneratingSet::symmetrize(GroupContext::abelian(1), elems).map_err(|e| e.to_string())?;
        let series = ball_growth(&s, 25, DEFAULT_BUDGET);
        let b1 = series.ball(1).unwrap();
        for rec in series.records() {
            ensure(rec.ball >= rec.m as u64 * (b1 - 1), || format!("sumset bound fails for {gens:?} at m={}", rec.m))?;
        }
        runs += 1;
    }
    Ok(format!(
        "vdc {vdc}/50, cramer {cramer}/20 (worst factor/r {:.3}), hdim quotients {quotients}/50, sumset {runs} runs",
        worst.to_f64().unwrap()
    ))
}

fn c8_oracle_equivalence() -> Outcome {
    let z1 = |v: &[i64]| {
        GeneratingSet::symmetrize(GroupContext::abelian(1), v.iter().map(|&x| GroupElement::int(&[x])).collect()).unwrap()
    };
    let ut4 = GroupContext::unitriangular(4).unwrap();
    let instances: Vec<(&str, GeneratingSet, usize)> = vec![
        ("Z", GeneratingSet::standard(GroupContext::abelian(1)), 20),
        ("Z {2,3}", z1(&[2, 3]), 15),
        ("Z {1,5}", z1(&[1, 5]), 15),
        ("Z^2", GeneratingSet::standard(GroupContext::abelian(2)), 15),
        ("Z^3", GeneratingSet::standard(GroupContext::abelian(3)), 8),
        ("Z/12", GeneratingSet::standard(GroupContext::cyclic(12)), 8),
        ("Z x Z/5", GeneratingSet::standard(GroupContext::Abelian { moduli: vec![0, 5] }), 10),
        ("H", GeneratingSet::standard(GroupContext::Heisenberg), 8),
        ("H S(1,1)", s_family(1, 1).unwrap(), 3),
        ("H S(1,2)", s_family(1, 2).unwrap(), 3),
        ("H S(2,4)", s_family(2, 4).unwrap(), 2),
        (
            "H skew",
            GeneratingSet::symmetrize(GroupContext::Heisenberg, vec![GroupElement::int(&[1, 1, 0]), GroupElement::int(&[0, 1, 3])])
                .unwrap(),
            7,
        ),
        ("U3", GeneratingSet::standard(GroupContext::unitriangular(3).unwrap()), 8),
        ("U4", GeneratingSet::standard(ut4.clone()), 5),
        (
            "U4 skew",
            GeneratingSet::symmetrize(ut4, vec![GroupElement::int(&[1, 0, 0, 1, 0, 0]), GroupElement::int(&[0, 0, 0, 0, 0, 1])])
                .unwrap(),
            6,
        ),
        ("F(2,2)", GeneratingSet::standard(GroupContext::free_nilpotent(2, 2).unwrap()), 8),
        ("F(2,3)", GeneratingSet::standard(GroupContext::free_nilpotent(2, 3).unwrap()), 5),
        ("F(3,2)", GeneratingSet::standard(GroupContext::free_nilpotent(3, 2).unwrap()), 4),
        ("lattice heis", GeneratingSet::standard(GroupContext::lie_lattice(LieAlgebra::heisenberg()).unwrap()), 6),
        ("lattice f(2,2)", GeneratingSet::standard(GroupContext::lie_lattice(LieAlgebra::free(2, 2).unwrap()).unwrap()), 6),
        (
            "lattice heis+R",
            GeneratingSet::standard(GroupContext::lie_lattice(with_abelian(&LieAlgebra::heisenberg(), 1)).unwrap()),
            5,
        ),
    ];
    let mut compared = 0;
    for (name, s, m_max) in &instances {
        let naive = naive_balls(s.context(), s.elements(), *m_max);
        if *naive.last().unwrap() > 10_000 {
            continue;
        }
        let got: Vec<u64> = ball_growth(s, *m_max, DEFAULT_BUDGET).records().iter().map(|r| r.ball).collect();
        ensure(got == naive, || format!("{name}: {got:?} vs naive {naive:?}"))?;
        compared += 1;
    }
    ensure(compared >= 20, || format!("only {compared} instances within 10^4"))?;
    Ok(format!("{compared} instances agree with naive products"))
}

fn c9_cc_refinement() -> Outcome {
    let pt = |u, v, w| [q(u), q(v), q(w)];
    for (n, qq) in [(1, 1), (2, 1), (3, 1), (2, 2), (3, 3), (4, 4), (5, 5), (4, 2)] {
        let e = cc_estimate(&pt(1, 0, 0), n, qq, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(e == q(1), || format!("cc((1,0,0), {n}, {qq}) = {e}"))?;
    }
    let scales: Vec<(u64, u64)> = (2..=5).map(|r| (r, r)).collect();
    let t = convergence_table(&[pt(0, 0, 1), pt(1, 1, 0)], &scales, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let mut summary = Vec::new();
    for (row, label) in t.estimates.iter().zip(["(0,0,1)", "(1,1,0)"]) {
        let diffs: Vec<Q> = row.windows(2).map(|w| (&w[1] - &w[0]).abs()).collect();
        ensure(diffs.iter().all(|d| *d <= qr(1, 2)), || format!("{label}: estimates {row:?}"))?;
        let shown: Vec<String> = row.iter().map(ToString::to_string).collect();
        summary.push(format!("{label} [{}]", shown.join(", ")));
    }
    Ok(format!("(1,0,0) = 1 at 8 scales; {}", summary.join("; ")))
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: Vec<Vec<&str>> = vec![
        vec!["growth", "--group", "heisenberg", "--gens", "standard", "--max-m", "20"],
        vec!["growth", "--group", "free:d=2,s=3", "--max-m", "5", "--format", "json"],
        vec!["profile", "--algebra", "heisenberg", "--lengths", "2,2,8", "--compare-max-m", "12"],
        vec!["hdim", "--algebra", "free:d=3,s=2"],
        vec!["prog-check", "--group", "cyclic:n=49", "--lengths", "3", "--proper-m", "2"],
        vec!["heisenberg", "cc"],
        vec!["heisenberg", "scaled-family", "--n", "2,3,4"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let out = dir.path().join(format!("run{i}-{rep}.out"));
            let o = Command::new(env!("CARGO_BIN_EXE_nilgrowth"))
                .args(args)
                .arg("--out")
                .arg(&out)
                .env_remove("NILGROWTH_BUDGET")
                .output()
                .map_err(|e| e.to_string())?;
            ensure(o.status.success(), || format!("{args:?} exited {:?}", o.status.code()))?;
            let mut files = vec![std::fs::read(&out).map_err(|e| e.to_string())?];
            let dev = out.with_file_name(format!("run{i}-{rep}.deviation.csv"));
            if dev.exists() {
                files.push(std::fs::read(dev).unwrap());
            }
            outputs.push((o.stdout, files));
        }
        ensure(outputs[0] == outputs[1], || format!("{args:?} differs between runs"))?;
    }
    // CSV round trips.
    let series = [
        ball_growth(&GeneratingSet::standard(GroupContext::Heisenberg), 15, DEFAULT_BUDGET),
        ball_growth(&GeneratingSet::standard(GroupContext::abelian(3)), 40, 2_000),
        GrowthSeries::from_balls(&[1, 3, 5], Some(Overflow { radius: 3, budget: 4 })),
    ];
    ensure(!series[1].is_complete(), || "expected an overflowing series".into())?;
    for s in &series {
        let back = GrowthSeries::from_csv(&s.to_csv()).map_err(|e| e.to_string())?;
        ensure(&back == s, || "growth CSV round trip lost information".into())?;
    }
    let p = LieProgression::new(LieAlgebra::heisenberg(), vec![2, 2, 8], q(1)).unwrap();
    let prof = loglog_profile(&envelope(&growth_polynomial(&p).unwrap()).unwrap());
    let elems = p.ordered().enumerate(DEFAULT_BUDGET).map_err(|e| e.to_string())?.elements;
    let s = GeneratingSet::symmetrize(p.context().clone(), elems).map_err(|e| e.to_string())?;
    let dev = ball_growth(&s, 10, DEFAULT_BUDGET);
    let report = profile_deviation(&dev, &prof).map_err(|e| e.to_string())?;
    let text = deviation_csv(&report, &dev);
    for (line, row) in text.lines().skip(1).zip(&report.rows) {
        let cols: Vec<&str> = line.split(',').collect();
        let parsed: Vec<f64> = cols[1..].iter().map(|c| c.parse().unwrap()).collect();
        let reprinted: Vec<String> = parsed.iter().map(|&x| nilgrowth_cli::number::sig15(x)).collect();
        ensure(cols[0] == row.m.to_string() && reprinted == cols[1..], || format!("deviation row {line:?} does not round-trip"))?;
    }
    Ok(format!("{} commands byte-identical across runs; growth and deviation CSV round-trip", runs.len()))
}

fn main() {
    let criteria: Vec<(usize, &str, Duration, fn() -> Outcome)> = vec![
        (1, "Heisenberg invariants", Duration::from_secs(1), c1_heisenberg_invariants),
        (2, "growth exponent", Duration::from_secs(120), c2_growth_exponent),
        (3, "profile pipeline cross-validation", Duration::from_secs(300), c3_profile_pipeline),
        (4, "Heisenberg growth numbers", Duration::from_secs(600), c4_growth_numbers),
        (5, "collapsing identity", Duration::from_secs(600), c5_collapsing_identity),
        (6, "exact-algebra suite", Duration::from_secs(60), c6_exact_algebra),
        (7, "counting and quotient suite", Duration::from_secs(120), c7_counting_suite),
        (8, "oracle equivalence", Duration::from_secs(120), c8_oracle_equivalence),
        (9, "cc refinement", Duration::from_secs(600), c9_cc_refinement),
        (10, "determinism", Duration::from_secs(60), c10_determinism),
    ];
    let mut unexpected = Vec::new();
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > limit {
            outcome = Err(format!("took {:.1}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs()));
        }
        let known = KNOWN_FAILURES.contains(&id);
        match &outcome {
            Ok(detail) => println!("PASS [{id}] {name}: {detail} ({:.2}s)", elapsed.as_secs_f64()),
            Err(why) => {
                let tag = if known { " (known failure, see README)" } else { "" };
                println!("FAIL [{id}] {name}: {why} ({:.2}s){tag}", elapsed.as_secs_f64());
            }
        }
        if outcome.is_ok() == known {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected results for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
