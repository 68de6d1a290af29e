//! Word-metric balls `S^m`, growth series and the diagnostics built on them.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt::Write as _;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fiber::FiberSet;
use crate::groups::{GeneratingSet, GroupContext, GroupElement};
use crate::linalg::{self, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrowthRecord {
    pub m: usize,
    pub ball: u64,
    pub sphere: u64,
}

/// Where an enumeration stopped: radius `radius` could not be completed
/// within `budget`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Overflow {
    pub radius: usize,
    pub budget: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthSeries {
    records: Vec<GrowthRecord>,
    overflow: Option<Overflow>,
}

impl GrowthSeries {
    /// Builds the series from `|S^0|, |S^1|, ...`.
    pub fn from_balls(balls: &[u64], overflow: Option<Overflow>) -> Self {
        let records = balls
            .iter()
            .enumerate()
            .map(|(m, &ball)| GrowthRecord { m, ball, sphere: if m == 0 { ball } else { ball - balls[m - 1] } })
            .collect();
        GrowthSeries { records, overflow }
    }

    pub fn records(&self) -> &[GrowthRecord] {
        &self.records
    }

    pub fn ball(&self, m: usize) -> Option<u64> {
        self.records.get(m).map(|r| r.ball)
    }

    /// Largest radius with a known ball size.
    pub fn max_radius(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn overflow(&self) -> Option<Overflow> {
        self.overflow
    }

    pub fn is_complete(&self) -> bool {
        self.overflow.is_none()
    }

    /// `m,ball,sphere` rows; an incomplete series ends with the row
    /// `overflow,<radius>,<budget>`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,ball,sphere\n");
        for r in &self.records {
            writeln!(out, "{},{},{}", r.m, r.ball, r.sphere).unwrap();
        }
        if let Some(o) = self.overflow {
            writeln!(out, "overflow,{},{}", o.radius, o.budget).unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |line: &str| Error::InvalidParameter(format!("malformed growth row: {line:?}"));
        let mut lines = text.lines();
        if lines.next() != Some("m,ball,sphere") {
            return Err(Error::InvalidParameter("missing header m,ball,sphere".into()));
        }
        let mut balls = Vec::new();
        let mut overflow = None;
        for line in lines {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 3 || overflow.is_some() {
                return Err(bad(line));
            }
            if cols[0] == "overflow" {
                overflow = Some(Overflow {
                    radius: cols[1].parse().map_err(|_| bad(line))?,
                    budget: cols[2].parse().map_err(|_| bad(line))?,
                });
                continue;
            }
            let m: usize = cols[0].parse().map_err(|_| bad(line))?;
            let ball: u64 = cols[1].parse().map_err(|_| bad(line))?;
            let sphere: u64 = cols[2].parse().map_err(|_| bad(line))?;
            if m != balls.len() {
                return Err(bad(line));
            }
            balls.push(ball);
            let series = GrowthSeries::from_balls(&balls, None);
            if series.records[m].sphere != sphere {
                return Err(bad(line));
            }
        }
        Ok(GrowthSeries::from_balls(&balls, overflow))
    }
}

/// Fibered view of a generating set, when its context is a Heisenberg-type
/// group: the integer Heisenberg group itself, or a lattice in a Lie algebra
/// with `[e1, e2] = λ e3`, where `(a, b, c) -> (a, b, c + λ a b / 2)` turns
/// exponential coordinates into the integer law of `H_λ`.
pub fn fiber_view(context: &GroupContext, elements: &[GroupElement]) -> Option<FiberSet> {
    match context {
        GroupContext::Heisenberg => {
            let pts = elements.iter().map(|g| {
                let c = g.as_int().expect("heisenberg elements are integral");
                [c[0], c[1], c[2]]
            });
            Some(FiberSet::from_elements(1, pts.collect::<Vec<_>>()))
        }
        GroupContext::LieLattice(lat) => {
            let l = lat.heisenberg_type()?;
            let mut pts = Vec::with_capacity(elements.len());
            for g in elements {
                let c = g.as_rat()?;
                let w = &c[2] + linalg::q(l) * &c[0] * &c[1] / linalg::q(2);
                let ints: Vec<i64> = [&c[0], &c[1], &w]
                    .iter()
                    .map(|x| x.is_integer().then(|| i64::try_from(x.to_integer()).ok()).flatten())
                    .collect::<Option<_>>()?;
                pts.push([ints[0], ints[1], ints[2]]);
            }
            Some(FiberSet::from_elements(l, pts))
        }
        _ => None,
    }
}

/// `S^m` for `m = 0..=m_max` over fiber sets. The budget caps stored
/// intervals rather than elements.
pub fn fiber_growth(set: &FiberSet, m_max: usize, budget: usize) -> GrowthSeries {
    let mut balls = vec![1u64];
    let mut cur = FiberSet::identity(set.lambda());
    for m in 1..=m_max {
        let next = cur.product(set);
        if next.storage() > budget {
            return GrowthSeries::from_balls(&balls, Some(Overflow { radius: m, budget }));
        }
        balls.push(next.count());
        cur = next;
    }
    GrowthSeries::from_balls(&balls, None)
}

/// The fiber set `S^m`.
pub fn fiber_power(set: &FiberSet, m: usize, budget: usize) -> Result<FiberSet> {
    let mut cur = FiberSet::identity(set.lambda());
    for _ in 0..m {
        cur = cur.product(set);
        if cur.storage() > budget {
            return Err(Error::BudgetExceeded { budget });
        }
    }
    Ok(cur)
}

struct Bfs {
    balls: Vec<u64>,
    overflow: Option<Overflow>,
    seen: HashSet<GroupElement>,
}

/// Frontier expansion of `S^m = S^{m-1} S`. Requires `1 ∈ S`, so that only
/// the newest sphere has to be multiplied out.
fn bfs(context: &GroupContext, set: &[GroupElement], m_max: usize, budget: usize) -> Result<Bfs> {
    let id = context.identity();
    if !set.contains(&id) {
        return Err(Error::InvalidParameter("set must contain the identity".into()));
    }
    let mut gens: Vec<GroupElement> = set.iter().filter(|g| **g != id).cloned().collect();
    gens.sort();
    gens.dedup();
    let mut seen: HashSet<GroupElement> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    let mut balls = vec![1u64];
    for m in 1..=m_max {
        let mut next: Vec<GroupElement> = frontier
            .par_iter()
            .flat_map_iter(|f| gens.iter().map(move |s| context.multiply(f, s)))
            .filter(|g| !seen.contains(g))
            .collect();
        next.par_sort_unstable();
        next.dedup();
        if seen.len() + next.len() > budget {
            return Ok(Bfs { balls, overflow: Some(Overflow { radius: m, budget }), seen });
        }
        seen.extend(next.iter().cloned());
        balls.push(seen.len() as u64);
        frontier = next;
    }
    Ok(Bfs { balls, overflow: None, seen })
}

/// Growth of the powers of an arbitrary finite set containing the identity,
/// by breadth-first search.
pub fn power_growth(context: &GroupContext, set: &[GroupElement], m_max: usize, budget: usize) -> Result<GrowthSeries> {
    let r = bfs(context, set, m_max, budget)?;
    Ok(GrowthSeries::from_balls(&r.balls, r.overflow))
}

/// The set `A^m`, sorted.
pub fn power_set(context: &GroupContext, set: &[GroupElement], m: usize, budget: usize) -> Result<Vec<GroupElement>> {
    let r = bfs(context, set, m, budget)?;
    if r.overflow.is_some() {
        return Err(Error::BudgetExceeded { budget });
    }
    let mut out: Vec<GroupElement> = r.seen.into_iter().collect();
    out.par_sort_unstable();
    Ok(out)
}

/// `|S^m|` for `m <= m_max` by breadth-first search over canonical elements.
pub fn ball_growth_bfs(s: &GeneratingSet, m_max: usize, budget: usize) -> GrowthSeries {
    power_growth(s.context(), s.elements(), m_max, budget).expect("generating sets contain the identity")
}

/// `|S^m|` for `m <= m_max`. Heisenberg-type contexts are counted fiberwise;
/// everything else goes through [`ball_growth_bfs`]. If the budget runs out
/// the completed prefix is returned together with an overflow marker.
pub fn ball_growth(s: &GeneratingSet, m_max: usize, budget: usize) -> GrowthSeries {
    match fiber_view(s.context(), s.elements()) {
        Some(f) => fiber_growth(&f, m_max, budget),
        None => ball_growth_bfs(s, m_max, budget),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingRatio {
    pub m: usize,
    pub ratio: Q,
    pub exceeds: bool,
}

/// `|S^{2m+1}| / |S^m|` for every `m >= 1` the series covers, flagging ratios
/// above `threshold`.
pub fn doubling_sequence(series: &GrowthSeries, threshold: Option<&Q>) -> Result<Vec<DoublingRatio>> {
    let have = series.max_radius();
    if have < 3 {
        return Err(Error::SeriesTooShort { needed: 3, have });
    }
    Ok((1..)
        .take_while(|m| 2 * m + 1 <= have)
        .map(|m| {
            let num = linalg::q(series.ball(2 * m + 1).unwrap() as i64);
            let ratio = num / linalg::q(series.ball(m).unwrap() as i64);
            let exceeds = threshold.is_some_and(|k| &ratio > k);
            DoublingRatio { m, ratio, exceeds }
        })
        .collect())
}

/// Witness that `A^2 ⊆ X A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCertificate {
    pub k: usize,
    pub x: Vec<GroupElement>,
}

impl CoverCertificate {
    pub fn verify(&self, context: &GroupContext, a: &[GroupElement]) -> bool {
        if self.k != self.x.len() {
            return false;
        }
        let aset: HashSet<&GroupElement> = a.iter().collect();
        let xinv: Vec<GroupElement> = self.x.iter().map(|x| context.invert(x)).collect();
        a.par_iter().all(|p| {
            a.iter().all(|q| {
                let pq = context.multiply(p, q);
                xinv.iter().any(|xi| aset.contains(&context.multiply(xi, &pq)))
            })
        })
    }
}

/// Greedy cover of `A^2` by left translates of `A`: repeatedly take the
/// uncovered product whose translate covers the most uncovered products.
pub fn approx_cover(context: &GroupContext, a: &[GroupElement], budget: usize) -> Result<CoverCertificate> {
    let mut a: Vec<GroupElement> = a.to_vec();
    a.sort();
    a.dedup();
    for g in &a {
        context.check(g)?;
    }
    if !a.contains(&context.identity()) {
        return Err(Error::InvalidParameter("set must contain the identity".into()));
    }
    if (a.len() as u128).pow(2) > budget as u128 {
        return Err(Error::BudgetExceeded { budget });
    }
    let mut products: Vec<GroupElement> =
        a.par_iter().flat_map_iter(|p| a.iter().map(move |q| context.multiply(p, q))).collect();
    products.par_sort_unstable();
    products.dedup();
    let mut uncovered: HashSet<GroupElement> = products.iter().cloned().collect();
    let gain = |x: &GroupElement, uncovered: &HashSet<GroupElement>| {
        a.iter().filter(|q| uncovered.contains(&context.multiply(x, q))).count()
    };
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> =
        products.par_iter().enumerate().map(|(i, p)| (gain(p, &uncovered), Reverse(i))).collect();
    let mut x = Vec::new();
    while !uncovered.is_empty() {
        let (g, Reverse(i)) = heap.pop().expect("every uncovered product covers itself");
        let p = &products[i];
        if !uncovered.contains(p) {
            continue;
        }
        let fresh = gain(p, &uncovered);
        if fresh < g {
            heap.push((fresh, Reverse(i)));
            continue;
        }
        for q in &a {
            uncovered.remove(&context.multiply(p, q));
        }
        x.push(p.clone());
    }
    let cert = CoverCertificate { k: x.len(), x };
    if !cert.verify(context, &a) {
        return Err(Error::Postcondition("greedy cover does not cover A^2".into()));
    }
    Ok(cert)
}

/// Least-squares line through `(log m, log |S^m|)` on a window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

pub fn growth_exponent_fit(series: &GrowthSeries, window: (usize, usize)) -> Result<ExponentFit> {
    let (lo, hi) = window;
    if lo < 1 || hi <= lo {
        return Err(Error::DegenerateWindow { lo, hi });
    }
    if hi > series.max_radius() {
        return Err(Error::SeriesTooShort { needed: hi, have: series.max_radius() });
    }
    let pts: Vec<(f64, f64)> =
        (lo..=hi).map(|m| ((m as f64).ln(), (series.ball(m).unwrap() as f64).ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = pts.iter().map(|p| (p.1 - intercept - slope * p.0).abs()).fold(0.0, f64::max);
    Ok(ExponentFit { slope, intercept, max_residual })
}

/// Smallest `c` with `|S^n| >= c n^dim |S|` over `lo <= n <= hi`, together
/// with the largest such ratio; their quotient measures how stable the
/// relative growth constant is.
pub fn relative_growth_constants(series: &GrowthSeries, dim: u32, window: (usize, usize)) -> Result<(Q, Q)> {
    let (lo, hi) = window;
    if lo < 1 || hi < lo {
        return Err(Error::DegenerateWindow { lo, hi });
    }
    if hi > series.max_radius() {
        return Err(Error::SeriesTooShort { needed: hi, have: series.max_radius() });
    }
    let base = linalg::q(series.ball(1).unwrap() as i64);
    let ratios: Vec<Q> = (lo..=hi)
        .map(|n| linalg::q(series.ball(n).unwrap() as i64) / (linalg::q((n as i64).pow(dim)) * &base))
        .collect();
    let min = ratios.iter().min().cloned().unwrap_or_else(Q::zero);
    let max = ratios.iter().max().cloned().unwrap_or_else(Q::zero);
    Ok((min, max))
}
