//! Analytic prediction of `|P^m|` for a Lie progression.
//!
//! Push the basic commutators of the free algebra through the marking to get
//! vectors `ē_1, ..., ē_r` with weights `χ(i)`. Summing nilbox volumes over
//! all `d`-subsets gives a polynomial
//!
//! ```text
//! f(m) = Σ_{i_1 < ... < i_d} 2^d Π_j L^{χ(i_j)} |det(ē_{i_1}, ..., ē_{i_d})| m^{Σ_j |χ(i_j)|}
//! ```
//!
//! which is comparable to the largest of its monomials. That maximum is a
//! piecewise monomial `h`, and `t -> log h(e^t)` is piecewise linear with
//! integer slopes.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::balls::GrowthSeries;
use crate::error::{Error, Result};
use crate::hall::{HallBasis, WeightVector};
use crate::lie_algebra::MarkedLieAlgebra;
use crate::linalg::{self, q, Q};
use crate::progression::LieProgression;

/// Images `ē_i` of the basic commutators under a marking.
#[derive(Clone, Debug)]
pub struct CommutatorImages {
    basis: HallBasis,
    images: Vec<Vec<Q>>,
    dim: usize,
}

impl CommutatorImages {
    pub fn basis(&self) -> &HallBasis {
        &self.basis
    }

    pub fn images(&self) -> &[Vec<Q>] {
        &self.images
    }

    pub fn weight(&self, i: usize) -> &WeightVector {
        self.basis.weight(i)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Dimension of the target algebra.
    pub fn dim(&self) -> usize {
        self.dim
    }
}

pub fn basic_commutator_images(m: &MarkedLieAlgebra) -> Result<CommutatorImages> {
    Ok(CommutatorImages { basis: m.hall_basis()?, images: m.images()?, dim: m.algebra().dim() })
}

fn pow2(d: usize) -> Q {
    q(1i64 << d)
}

fn subset_det(images: &[Vec<Q>], subset: &[usize]) -> Q {
    let rows: Vec<Vec<Q>> = subset.iter().map(|&i| images[i].clone()).collect();
    linalg::determinant(&rows)
}

/// `2^d Π_j L^{χ(i_j)} |det(ē_{i_1}, ..., ē_{i_d})|`, the volume of the
/// nilbox on the chosen images at scale `L`.
pub fn subset_volume(images: &CommutatorImages, lengths: &[Q], subset: &[usize]) -> Result<Q> {
    let d = images.dim();
    if subset.len() != d {
        return Err(Error::SubsetSize { expected: d, got: subset.len() });
    }
    if lengths.len() != images.basis.rank() {
        return Err(Error::DimensionMismatch { expected: images.basis.rank(), got: lengths.len() });
    }
    if let Some(&i) = subset.iter().find(|&&i| i >= images.len()) {
        return Err(Error::InvalidParameter(format!("subset index {i} out of range")));
    }
    let det = subset_det(&images.images, subset).abs();
    if det.is_zero() {
        return Ok(det);
    }
    let scale = subset.iter().fold(Q::one(), |acc, &i| acc * images.weight(i).eval(lengths));
    Ok(pow2(d) * scale * det)
}

/// Polynomial in `m` with nonnegative rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GrowthPolynomial {
    terms: BTreeMap<u32, Q>,
}

impl GrowthPolynomial {
    /// Zero coefficients are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, Q)>) -> Self {
        let mut out = BTreeMap::new();
        for (k, c) in terms {
            *out.entry(k).or_insert_with(Q::zero) += c;
        }
        out.retain(|_, c: &mut Q| !c.is_zero());
        GrowthPolynomial { terms: out }
    }

    pub fn terms(&self) -> &BTreeMap<u32, Q> {
        &self.terms
    }

    pub fn coefficient(&self, degree: u32) -> Q {
        self.terms.get(&degree).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, m: &Q) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (&k, c)| acc + c * num_traits::pow(m.clone(), k as usize))
    }
}

impl fmt::Display for GrowthPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c} m"),
                _ => format!("{c} m^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Lexicographic `k`-subsets of `items` starting with `items[first]`.
fn for_each_subset_from(items: &[usize], first: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    let n = items.len();
    if k == 0 || first + k > n {
        return;
    }
    let mut idx: Vec<usize> = (first..first + k).collect();
    loop {
        let chosen: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
        visit(&chosen);
        // Advance positions 1..k, keeping position 0 fixed.
        let mut p = k;
        loop {
            if p == 1 {
                return;
            }
            p -= 1;
            if idx[p] < n - (k - p) {
                break;
            }
        }
        idx[p] += 1;
        for t in p + 1..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

/// `f(m)` for the progression, marked by its own basis at the nilpotency
/// class of its algebra.
pub fn growth_polynomial(p: &LieProgression) -> Result<GrowthPolynomial> {
    let algebra = p.algebra().clone();
    let step = algebra.step()?.max(1);
    let marked = MarkedLieAlgebra::standard(algebra, step)?;
    let images = basic_commutator_images(&marked)?;
    let lengths = p.lengths_q();
    let d = images.dim();
    let nonzero: Vec<usize> = (0..images.len()).filter(|&i| !linalg::is_zero_vec(&images.images[i])).collect();
    let weights: Vec<(u32, Q)> =
        (0..images.len()).map(|i| (images.weight(i).total(), images.weight(i).eval(&lengths))).collect();
    let terms = (0..nonzero.len())
        .into_par_iter()
        .fold(BTreeMap::<u32, Q>::new, |mut acc, first| {
            for_each_subset_from(&nonzero, first, d, |subset| {
                let det = subset_det(&images.images, subset).abs();
                if det.is_zero() {
                    return;
                }
                let (deg, scale) = subset
                    .iter()
                    .fold((0u32, Q::one()), |(k, s), &i| (k + weights[i].0, s * &weights[i].1));
                *acc.entry(deg).or_insert_with(Q::zero) += det * scale;
            });
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_insert_with(Q::zero) += c;
            }
            a
        });
    let factor = pow2(d);
    Ok(GrowthPolynomial::from_terms(terms.into_iter().map(|(k, c)| (k, c * &factor))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub degree: u32,
    pub coeff: Q,
}

/// The point `ratio^(1/root)` where two consecutive pieces agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Breakpoint {
    pub ratio: Q,
    pub root: u32,
}

fn ln_q(x: &Q) -> f64 {
    // Numerator and denominator separately so huge values stay finite.
    let ln_big = |b: &num_bigint::BigInt| {
        let bits = b.bits();
        if bits < 1000 {
            b.to_f64().unwrap().ln()
        } else {
            let shift = bits - 900;
            (b >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
        }
    };
    ln_big(x.numer()) - ln_big(x.denom())
}

impl Breakpoint {
    /// `log(ratio) / root`, the breakpoint on the log scale.
    pub fn log_position(&self) -> f64 {
        ln_q(&self.ratio) / self.root as f64
    }

    pub fn position(&self) -> f64 {
        self.log_position().exp()
    }
}

/// `h(x) = max_i α_i x^i`, keeping only monomials that attain the maximum
/// somewhere on `x > 0`, in increasing degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseMonomial {
    pieces: Vec<Piece>,
}

impl PiecewiseMonomial {
    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Breakpoint between pieces `i` and `i + 1`.
    pub fn breakpoints(&self) -> Vec<Breakpoint> {
        self.pieces
            .windows(2)
            .map(|w| Breakpoint { ratio: &w[0].coeff / &w[1].coeff, root: w[1].degree - w[0].degree })
            .collect()
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.pieces
            .iter()
            .map(|p| &p.coeff * num_traits::pow(x.clone(), p.degree as usize))
            .max()
            .expect("envelope is nonempty")
    }

    /// `log h(e^t)`.
    pub fn log_eval(&self, t: f64) -> f64 {
        self.pieces
            .iter()
            .map(|p| ln_q(&p.coeff) + p.degree as f64 * t)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Upper hull of the points `(i, log α_i)`, decided exactly: the middle of
/// three consecutive degrees `i < j < k` is dropped when
/// `(α_j/α_i)^(k-j) <= (α_k/α_j)^(j-i)`.
pub fn envelope(f: &GrowthPolynomial) -> Result<PiecewiseMonomial> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if let Some((k, c)) = f.terms().iter().find(|(_, c)| c.is_negative()) {
        return Err(Error::InvalidParameter(format!("negative coefficient {c} at degree {k}")));
    }
    let mut hull: Vec<Piece> = Vec::new();
    for (&degree, coeff) in f.terms() {
        let next = Piece { degree, coeff: coeff.clone() };
        while hull.len() >= 2 {
            let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            let lhs = num_traits::pow(&b.coeff / &a.coeff, (next.degree - b.degree) as usize);
            let rhs = num_traits::pow(&next.coeff / &b.coeff, (b.degree - a.degree) as usize);
            if lhs <= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(next);
    }
    Ok(PiecewiseMonomial { pieces: hull })
}

/// `t -> log h(e^t) - log h(1)`: continuous, non-decreasing, piecewise linear
/// with the envelope degrees as slopes.
#[derive(Clone, Debug, PartialEq)]
pub struct LogLogProfile {
    envelope: PiecewiseMonomial,
    anchor: f64,
}

pub fn loglog_profile(h: &PiecewiseMonomial) -> LogLogProfile {
    LogLogProfile { envelope: h.clone(), anchor: h.log_eval(0.0) }
}

impl LogLogProfile {
    pub fn envelope(&self) -> &PiecewiseMonomial {
        &self.envelope
    }

    pub fn slopes(&self) -> Vec<u32> {
        self.envelope.pieces.iter().map(|p| p.degree).collect()
    }

    pub fn breakpoints(&self) -> Vec<Breakpoint> {
        self.envelope.breakpoints()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.envelope.log_eval(t) - self.anchor
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeviationRow {
    pub m: usize,
    pub log_ball: f64,
    pub profile: f64,
    /// `log |S^m| - log |S| - profile(log m)`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeviationReport {
    pub rows: Vec<DeviationRow>,
    pub min: f64,
    pub max: f64,
    pub max_abs: f64,
}

impl DeviationReport {
    /// `max - min` of the residuals.
    pub fn spread(&self) -> f64 {
        self.max - self.min
    }
}

/// Residuals of `log |S^m| - log |S^1|` against the profile over every
/// radius `m >= 1` in the series.
pub fn profile_deviation(series: &GrowthSeries, profile: &LogLogProfile) -> Result<DeviationReport> {
    let have = series.max_radius();
    if have < 1 {
        return Err(Error::SeriesTooShort { needed: 1, have });
    }
    let base = (series.ball(1).unwrap() as f64).ln();
    let rows: Vec<DeviationRow> = (1..=have)
        .map(|m| {
            let log_ball = (series.ball(m).unwrap() as f64).ln();
            let profile = profile.eval((m as f64).ln());
            DeviationRow { m, log_ball, profile, residual: log_ball - base - profile }
        })
        .collect();
    let min = rows.iter().map(|r| r.residual).fold(f64::INFINITY, f64::min);
    let max = rows.iter().map(|r| r.residual).fold(f64::NEG_INFINITY, f64::max);
    let max_abs = min.abs().max(max.abs());
    Ok(DeviationReport { rows, min, max, max_abs })
}

/// Smallest and largest `|S^m| / f(m)` over `lo <= m <= hi`.
pub fn ratio_band(series: &GrowthSeries, f: &GrowthPolynomial, window: (usize, usize)) -> Result<(Q, Q)> {
    let (lo, hi) = window;
    if lo < 1 || hi < lo {
        return Err(Error::DegenerateWindow { lo, hi });
    }
    if hi > series.max_radius() {
        return Err(Error::SeriesTooShort { needed: hi, have: series.max_radius() });
    }
    let ratios: Vec<Q> =
        (lo..=hi).map(|m| q(series.ball(m).unwrap() as i64) / f.eval(&q(m as i64))).collect();
    Ok((ratios.iter().min().unwrap().clone(), ratios.iter().max().unwrap().clone()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CramerSelection {
    pub indices: Vec<usize>,
    /// `2^d Π M_{i_j} |det(x_{i_1}, ..., x_{i_d})|`.
    pub volume: Q,
}

/// The `d` vectors whose box `Σ λ_j x_{i_j}, |λ_j| <= M_{i_j}` has largest
/// volume; ties go to the lexicographically first index set.
pub fn cramer_select(vectors: &[Vec<Q>], m: &[Q]) -> Result<CramerSelection> {
    if vectors.len() != m.len() {
        return Err(Error::DimensionMismatch { expected: vectors.len(), got: m.len() });
    }
    let Some(d) = vectors.first().map(Vec::len) else {
        return Err(Error::NotSpanning { dim: 0 });
    };
    if let Some(v) = vectors.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: v.len() });
    }
    if m.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidParameter("box lengths must be positive".into()));
    }
    if linalg::rank(vectors, d) < d {
        return Err(Error::NotSpanning { dim: d });
    }
    let all: Vec<usize> = (0..vectors.len()).collect();
    let mut best: Option<CramerSelection> = None;
    for first in 0..vectors.len() {
        for_each_subset_from(&all, first, d, |subset| {
            let det = subset_det(vectors, subset).abs();
            let volume = subset.iter().fold(pow2(d) * det, |acc, &i| acc * &m[i]);
            if best.as_ref().is_none_or(|b| volume > b.volume) {
                best = Some(CramerSelection { indices: subset.to_vec(), volume });
            }
        });
    }
    Ok(best.expect("a spanning family has a spanning subset"))
}

/// Largest `max_j |λ_j| / M_{i_j}` needed to write each point in the
/// selected basis: the points lie in `factor · B(selected)`.
pub fn containment_factor(vectors: &[Vec<Q>], m: &[Q], selected: &[usize], points: &[Vec<Q>]) -> Result<Q> {
    let d = selected.len();
    // Columns are the selected vectors.
    let a: Vec<Vec<Q>> = (0..d).map(|row| selected.iter().map(|&i| vectors[i][row].clone()).collect()).collect();
    let mut factor = Q::zero();
    for p in points {
        let y = linalg::solve(&a, p).ok_or(Error::NotSpanning { dim: d })?;
        for (yj, &i) in y.iter().zip(selected) {
            let f = yj.abs() / &m[i];
            if f > factor {
                factor = f;
            }
        }
    }
    Ok(factor)
}

/// `count` random vertices `Σ ±M_i x_i` of the box `B(x; M)`, reproducible
/// from `seed`.
pub fn sample_box_vertices(vectors: &[Vec<Q>], m: &[Q], count: usize, seed: u64) -> Vec<Vec<Q>> {
    let d = vectors.first().map_or(0, Vec::len);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut p = linalg::zeros(d);
            for (x, mi) in vectors.iter().zip(m) {
                let c = if rng.gen::<bool>() { mi.clone() } else { -mi.clone() };
                linalg::axpy(&mut p, &c, x);
            }
            p
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VdcReport {
    pub count: u64,
    pub volume: Q,
    pub pass: bool,
}

/// Counts integer points in `{Σ λ_i b_i : |λ_i| <= β_i}` and compares with
/// `vol / 2^d`.
pub fn vdc_check(basis: &[Vec<i64>], bounds: &[Q], budget: usize) -> Result<VdcReport> {
    let d = basis.len();
    if bounds.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: bounds.len() });
    }
    if let Some(b) = basis.iter().find(|b| b.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: b.len() });
    }
    if bounds.iter().any(|b| b.is_negative()) {
        return Err(Error::InvalidParameter("bounds must be nonnegative".into()));
    }
    let bq: Vec<Vec<Q>> = basis.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let det = linalg::determinant(&bq);
    if det.is_zero() {
        return Err(Error::NotSpanning { dim: d });
    }
    // p = Σ λ_i b_i = B^T λ, so λ = (B^T)^{-1} p; scaled by det it is integral.
    let bt = linalg::transpose(&bq, d);
    let inv_cols: Vec<Vec<Q>> = (0..d).map(|c| linalg::solve(&bt, &linalg::unit(d, c)).unwrap()).collect();
    let adj: Vec<Vec<i128>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|c| {
                    let v = &inv_cols[c][i] * &det;
                    v.to_integer().to_i128().expect("adjugate entry fits in i128")
                })
                .collect()
        })
        .collect();
    let det_i = det.abs().to_integer().to_i128().expect("determinant fits in i128");
    // |λ_i| <= β_i  <=>  |Σ adj_ic p_c| · den_i <= num_i · |det|.
    let limits: Vec<(i128, i128)> = bounds
        .iter()
        .map(|b| (b.denom().to_i128().unwrap(), b.numer().to_i128().unwrap() * det_i))
        .collect();
    let radius: Vec<i64> = (0..d)
        .map(|c| {
            let r = (0..d).fold(Q::zero(), |acc, i| acc + &bounds[i] * q(basis[i][c].abs()));
            r.floor().to_integer().to_i64().expect("bounding box fits in i64")
        })
        .collect();
    let total = radius.iter().fold(1u128, |acc, &r| acc.saturating_mul(2 * r as u128 + 1));
    if total > budget as u128 {
        return Err(Error::BudgetExceeded { budget });
    }
    let mut count = 0u64;
    let mut p: Vec<i64> = radius.iter().map(|r| -r).collect();
    'outer: loop {
        let inside = adj.iter().zip(&limits).all(|(row, &(den, lim))| {
            let s: i128 = row.iter().zip(&p).map(|(&a, &x)| a * x as i128).sum();
            s.abs() * den <= lim
        });
        if inside {
            count += 1;
        }
        for c in 0..d {
            if p[c] < radius[c] {
                p[c] += 1;
                continue 'outer;
            }
            p[c] = -radius[c];
        }
        break;
    }
    let volume = bounds.iter().fold(pow2(d) * det.abs(), |acc, b| acc * b);
    let pass = q(count as i64) * pow2(d) >= volume;
    Ok(VdcReport { count, volume, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::LieAlgebra;
    use crate::linalg::qr;

    fn heis_images() -> CommutatorImages {
        let m = MarkedLieAlgebra::standard(LieAlgebra::heisenberg(), 2).unwrap();
        basic_commutator_images(&m).unwrap()
    }

    #[test]
    fn heisenberg_images() {
        let im = heis_images();
        let expected = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, -1], [0, 0, 0], [0, 0, 0]];
        assert_eq!(im.len(), 6);
        for (got, want) in im.images().iter().zip(expected) {
            assert_eq!(got, &want.iter().map(|&x| q(x)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn heisenberg_subset_volumes() {
        let im = heis_images();
        for n in 1..=4i64 {
            let l = [q(n), q(n), q(n * n * n)];
            assert_eq!(subset_volume(&im, &l, &[0, 1, 2]).unwrap(), q(8 * n.pow(5)));
            assert_eq!(subset_volume(&im, &l, &[0, 1, 3]).unwrap(), q(8 * n.pow(4)));
            assert_eq!(subset_volume(&im, &l, &[0, 1, 4]).unwrap(), q(0));
        }
        assert_eq!(
            subset_volume(&im, &[q(1), q(1), q(1)], &[0, 1]),
            Err(Error::SubsetSize { expected: 3, got: 2 })
        );
    }

    #[test]
    fn heisenberg_polynomial_and_profile() {
        for n in 1..=3u64 {
            let p = LieProgression::new(LieAlgebra::heisenberg(), vec![n, n, n * n * n], q(1)).unwrap();
            let f = growth_polynomial(&p).unwrap();
            let n = n as i64;
            assert_eq!(f, GrowthPolynomial::from_terms([(3, q(8 * n.pow(5))), (4, q(8 * n.pow(4)))]));
            assert_eq!(f.eval(&q(n)), q(16 * n.pow(8)));
            let h = envelope(&f).unwrap();
            assert_eq!(h.breakpoints(), vec![Breakpoint { ratio: q(n), root: 1 }]);
            let prof = loglog_profile(&h);
            assert_eq!(prof.slopes(), vec![3, 4]);
            assert_eq!(prof.eval(0.0), 0.0);
        }
    }

    #[test]
    fn abelian_polynomial_is_single_term() {
        let p = LieProgression::new(LieAlgebra::abelian(2), vec![2, 3], q(1)).unwrap();
        let f = growth_polynomial(&p).unwrap();
        assert_eq!(f, GrowthPolynomial::from_terms([(2, q(24))]));
        assert_eq!(loglog_profile(&envelope(&f).unwrap()).slopes(), vec![2]);
    }

    #[test]
    fn envelope_drops_dominated_terms() {
        let f = GrowthPolynomial::from_terms([(0, q(1)), (1, qr(1, 2)), (2, q(1))]);
        let h = envelope(&f).unwrap();
        assert_eq!(h.pieces().iter().map(|p| p.degree).collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(h.breakpoints(), vec![Breakpoint { ratio: q(1), root: 2 }]);
        // 2x beats max(1, x^2) on (1/2, 2), so it stays.
        let g = GrowthPolynomial::from_terms([(0, q(1)), (1, q(2)), (2, q(1))]);
        assert_eq!(envelope(&g).unwrap().pieces().len(), 3);
        assert_eq!(envelope(&GrowthPolynomial::default()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn cramer_examples() {
        let v = |rows: &[[i64; 2]]| rows.iter().map(|r| vec![q(r[0]), q(r[1])]).collect::<Vec<_>>();
        let ones = vec![q(1); 3];
        assert_eq!(cramer_select(&v(&[[1, 0], [0, 1], [1, 1]]), &ones).unwrap().indices, vec![0, 1]);
        assert_eq!(cramer_select(&v(&[[1, 0], [0, 1], [3, 0]]), &ones).unwrap().indices, vec![1, 2]);
        assert_eq!(cramer_select(&v(&[[1, 0], [2, 0]]), &ones[..2]), Err(Error::NotSpanning { dim: 2 }));
    }

    #[test]
    fn vdc_examples() {
        let id = vec![vec![1, 0], vec![0, 1]];
        let r = vdc_check(&id, &[qr(3, 2), qr(3, 2)], 1000).unwrap();
        assert_eq!((r.count, r.volume.clone(), r.pass), (9, q(9), true));
        let r = vdc_check(&id, &[qr(2, 5), qr(2, 5)], 1000).unwrap();
        assert_eq!((r.count, r.volume.clone(), r.pass), (1, qr(16, 25), true));
        let sheared = vec![vec![1, 0], vec![1, 2]];
        let r = vdc_check(&sheared, &[q(1), q(1)], 1000).unwrap();
        // {(a + b, 2b) : |a|, |b| <= 1}
        assert_eq!(r.count, 13);
        assert_eq!(r.volume, q(8));
    }

    #[test]
    fn subsets_are_lexicographic() {
        let items = [0, 1, 2, 3];
        let mut seen = Vec::new();
        for f in 0..items.len() {
            for_each_subset_from(&items, f, 2, |s| seen.push(s.to_vec()));
        }
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
