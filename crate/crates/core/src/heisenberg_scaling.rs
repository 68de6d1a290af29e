//! Box generating sets of the integer Heisenberg group and their large-scale
//! behaviour.
//!
//! `P(j, k) = {(u, v, w) : |u|, |v| <= j, |w| <= k}` and
//! `S(j, k) = P(j, k) ∪ P(j, k)^{-1}`. Since `(u, v, w)^{-1} = (-u, -v, uv - w)`,
//! the fiber of `S(j, k)` over `(u, v)` is `[-k, k] ∪ [uv - k, uv + k]`.
//!
//! The word metric of `S(N, N^2)` rescaled by dilations approximates the
//! Carnot–Carathéodory metric for the `ℓ^∞` norm on the horizontal layer:
//! `d_cc(e, g) ≈ d_S(e, δ_{Nq} g) / q`.

use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::balls::{fiber_growth, fiber_power};
use crate::error::{Error, Result};
use crate::fiber::FiberSet;
use crate::groups::{GeneratingSet, GroupContext, GroupElement};
use crate::linalg::{q, Q};

fn check_jk(j: u64, k: u64) -> Result<()> {
    if j == 0 || k == 0 {
        return Err(Error::InvalidParameter(format!("S(j, k) needs j, k >= 1, got ({j}, {k})")));
    }
    Ok(())
}

/// `P(j, k)` as a fiber set.
pub fn p_box(j: u64, k: u64) -> FiberSet {
    let (j, k) = (j as i64, k as i64);
    let fibers = (-j..=j).flat_map(|u| (-j..=j).map(move |v| ((u, v), vec![(-k, k)])));
    FiberSet::from_fibers(1, fibers)
}

#[derive(Clone, Debug)]
pub struct SFamily {
    j: u64,
    k: u64,
    p: FiberSet,
    s: FiberSet,
}

impl SFamily {
    pub fn new(j: u64, k: u64) -> Result<Self> {
        check_jk(j, k)?;
        let p = p_box(j, k);
        let s = p.union(&p.inverse());
        Ok(SFamily { j, k, p, s })
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn p(&self) -> &FiberSet {
        &self.p
    }

    pub fn s(&self) -> &FiberSet {
        &self.s
    }

    /// `P(j, k)^{-1} ⊆ P(j, j^2 + k)`.
    pub fn inverse_contained(&self) -> bool {
        self.p.inverse().is_subset(&p_box(self.j, self.j * self.j + self.k))
    }

    /// `P(j, k) ⊆ S(j, k) ⊆ P(j, 2k)`; the upper inclusion needs `k >= j^2`.
    pub fn sandwiched(&self) -> bool {
        self.p.is_subset(&self.s) && self.s.is_subset(&p_box(self.j, 2 * self.k))
    }

    pub fn generating_set(&self) -> GeneratingSet {
        let elements = self.s.elements().into_iter().map(|g| GroupElement::int(&g)).collect();
        GeneratingSet::new(GroupContext::Heisenberg, elements).expect("S(j, k) is symmetric")
    }
}

/// `S(j, k)` as a generating set of the integer Heisenberg group.
pub fn s_family(j: u64, k: u64) -> Result<GeneratingSet> {
    Ok(SFamily::new(j, k)?.generating_set())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CollapseResult {
    /// `(m i)^2 >= 10 m j`.
    pub required: bool,
    /// `S(i, j)^m == S(i, i^2)^m`.
    pub equal: bool,
}

fn collapse_required(i: u64, j: u64, m: u64) -> bool {
    (m * i).pow(2) >= 10 * m * j
}

pub fn collapsing_check(i: u64, j: u64, m: u64, budget: usize) -> Result<CollapseResult> {
    let a = fiber_power(SFamily::new(i, j)?.s(), m as usize, budget)?;
    let b = fiber_power(SFamily::new(i, i * i)?.s(), m as usize, budget)?;
    Ok(CollapseResult { required: collapse_required(i, j, m), equal: a == b })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CollapseRow {
    pub i: u64,
    pub j: u64,
    pub m: u64,
    pub required: bool,
    /// `None` when either power exceeded the budget.
    pub equal: Option<bool>,
}

impl CollapseRow {
    pub fn is_counterexample(&self) -> bool {
        self.required && self.equal == Some(false)
    }
}

/// [`collapsing_check`] over `1 <= i <= i_max`, `1 <= j <= j_max`,
/// `1 <= m <= m_max`, sharing the powers of each family across `m`.
pub fn collapsing_grid(i_max: u64, j_max: u64, m_max: u64, budget: usize) -> Result<Vec<CollapseRow>> {
    let powers = |s: &FiberSet| -> Vec<Option<FiberSet>> {
        let mut out = Vec::with_capacity(m_max as usize);
        let mut cur = Some(FiberSet::identity(1));
        for _ in 0..m_max {
            cur = cur.map(|c| c.product(s)).filter(|c| c.storage() <= budget);
            out.push(cur.clone());
        }
        out
    };
    let mut rows = Vec::new();
    for i in 1..=i_max {
        let reference = powers(SFamily::new(i, i * i)?.s());
        let cols: Vec<Vec<CollapseRow>> = (1..=j_max)
            .into_par_iter()
            .map(|j| {
                let fam = SFamily::new(i, j).expect("positive parameters");
                let pw = if j == i * i { reference.clone() } else { powers(fam.s()) };
                (1..=m_max)
                    .map(|m| {
                        let idx = (m - 1) as usize;
                        let equal = match (&pw[idx], &reference[idx]) {
                            (Some(a), Some(b)) => Some(a == b),
                            _ => None,
                        };
                        CollapseRow { i, j, m, required: collapse_required(i, j, m), equal }
                    })
                    .collect()
            })
            .collect();
        rows.extend(cols.into_iter().flatten());
    }
    Ok(rows)
}

/// The exponent `a` in `0..=3` with `n^a` closest to `f` on a log scale,
/// ties to the smaller exponent.
pub fn exponent_for(n: u64, f: u64) -> u32 {
    if n <= 1 || f == 0 {
        return 0;
    }
    let lf = (f as f64).ln();
    let ln = (n as f64).ln();
    (0..=3u32)
        .min_by(|&a, &b| {
            let da = (lf - a as f64 * ln).abs();
            let db = (lf - b as f64 * ln).abs();
            da.partial_cmp(&db).unwrap().then(a.cmp(&b))
        })
        .unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledFamilyRow {
    pub n: u64,
    pub f: u64,
    pub a: u32,
    /// `|S_n|` for `S_n = S(n, n^{3 - a})`.
    pub s_size: u64,
    /// `|S_n^r|` at the radius `r` actually reached; `r == n` unless partial.
    pub ball: u64,
    pub radius: usize,
    pub partial: bool,
    /// `ball / (f n^3 |S_n|)`.
    pub ratio: Q,
    /// `|S_n| / n^{5 - a}`.
    pub s_normalized: Q,
    /// `ball / n^8`.
    pub ball_normalized: Q,
}

/// Growth of `S_n = S(n, n^{3 - a_n})` with `n^{a_n} ≈ f(n)`: `|S_n|`,
/// `|S_n^n|` and their normalisations. Rows whose ball does not fit in the
/// budget report the largest completed radius and are flagged partial.
pub fn scaled_family_table(rows: &[(u64, u64)], budget: usize) -> Result<Vec<ScaledFamilyRow>> {
    rows.iter()
        .map(|&(n, f)| {
            if n == 0 || f == 0 {
                return Err(Error::InvalidParameter(format!("need n, f(n) >= 1, got ({n}, {f})")));
            }
            let a = exponent_for(n, f);
            let fam = SFamily::new(n, n.pow(3 - a))?;
            let s_size = fam.s().count();
            let series = fiber_growth(fam.s(), n as usize, budget);
            let radius = series.max_radius();
            let ball = series.ball(radius).unwrap();
            let nq = |e: u32| q(n as i64).pow(e as i32);
            Ok(ScaledFamilyRow {
                n,
                f,
                a,
                s_size,
                ball,
                radius,
                partial: !series.is_complete(),
                ratio: q(ball as i64) / (q(f as i64) * nq(3) * q(s_size as i64)),
                s_normalized: q(s_size as i64) / nq(5 - a),
                ball_normalized: q(ball as i64) / nq(8),
            })
        })
        .collect()
}

/// Inverse of a rational Heisenberg point.
pub fn point_inverse(g: &[Q; 3]) -> [Q; 3] {
    [-g[0].clone(), -g[1].clone(), &g[0] * &g[1] - &g[2]]
}

fn dilate_point(g: &[Q; 3], t: u64) -> Result<[i64; 3]> {
    let t = q(t as i64);
    let coords = [&t * &g[0], &t * &g[1], &t * &t * &g[2]];
    let mut out = [0i64; 3];
    for (o, c) in out.iter_mut().zip(coords) {
        if !c.is_integer() {
            return Err(Error::NonIntegralDilation);
        }
        *o = c.to_integer().to_i64().ok_or(Error::NonIntegralDilation)?;
    }
    Ok(out)
}

/// Word lengths of `targets` with respect to `s`, by growing `s^m` until
/// every target appears.
pub fn word_lengths(s: &FiberSet, targets: &[[i64; 3]], budget: usize) -> Result<Vec<usize>> {
    let mut out: Vec<Option<usize>> = targets.iter().map(|t| (*t == [0, 0, 0]).then_some(0)).collect();
    let mut cur = FiberSet::identity(s.lambda());
    let mut m = 0;
    while out.iter().any(Option::is_none) {
        cur = cur.product(s);
        m += 1;
        if cur.storage() > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        for (o, t) in out.iter_mut().zip(targets) {
            if o.is_none() && cur.contains(*t) {
                *o = Some(m);
            }
        }
    }
    Ok(out.into_iter().map(Option::unwrap).collect())
}

fn validate_scale(n: u64, qq: u64) -> Result<()> {
    if n == 0 || qq == 0 {
        return Err(Error::InvalidParameter(format!("scales must be positive, got ({n}, {qq})")));
    }
    Ok(())
}

/// `d_{S(N, N^2)}(e, δ_{Nq} g) / q`.
pub fn cc_estimate(g: &[Q; 3], n: u64, qq: u64, budget: usize) -> Result<Q> {
    validate_scale(n, qq)?;
    let target = dilate_point(g, n * qq)?;
    let s = SFamily::new(n, n * n)?;
    let len = word_lengths(s.s(), &[target], budget)?[0];
    Ok(q(len as i64) / q(qq as i64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CcTable {
    pub scales: Vec<(u64, u64)>,
    /// `estimates[p][s]` for point `p` at scale `s`.
    pub estimates: Vec<Vec<Q>>,
    /// Per point, the largest `|e_{s+1} - e_s|`; `None` with fewer than two
    /// scales.
    pub max_successive_diff: Vec<Option<Q>>,
}

/// [`cc_estimate`] for every point at every scale; each scale's ball is
/// grown once for all points.
pub fn convergence_table(points: &[[Q; 3]], scales: &[(u64, u64)], budget: usize) -> Result<CcTable> {
    let columns: Vec<Vec<Q>> = scales
        .iter()
        .map(|&(n, qq)| {
            validate_scale(n, qq)?;
            let targets = points.iter().map(|g| dilate_point(g, n * qq)).collect::<Result<Vec<_>>>()?;
            let s = SFamily::new(n, n * n)?;
            let lens = word_lengths(s.s(), &targets, budget)?;
            Ok(lens.into_iter().map(|l| q(l as i64) / q(qq as i64)).collect())
        })
        .collect::<Result<_>>()?;
    let estimates: Vec<Vec<Q>> = (0..points.len()).map(|p| columns.iter().map(|c| c[p].clone()).collect()).collect();
    let max_successive_diff = estimates
        .iter()
        .map(|row| row.windows(2).map(|w| (&w[1] - &w[0]).abs()).max())
        .collect();
    Ok(CcTable { scales: scales.to_vec(), estimates, max_successive_diff })
}
