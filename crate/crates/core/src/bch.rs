//! Truncated Baker–Campbell–Hausdorff products with exact rational
//! coefficients.
//!
//! `log(exp X exp Y)` is first expanded in the truncated free associative
//! algebra on two letters. Each homogeneous component `Z_n` is a Lie element,
//! so the Dynkin–Specht–Wever map `w -> [w_1, [w_2, ..., w_n]]` sends it to
//! `n Z_n`; rewriting those right-nested brackets in the Hall basis of the
//! free `(2, s)` algebra gives the series as a combination of basic
//! commutators in `X` and `Y`. Evaluating that combination in any Lie
//! algebra of step at most `s` gives the product there.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hall::{FreeLieElement, HallBasis, StructureTable};
use crate::linalg::{self, q, Q};
use crate::LieBracket;

/// Largest supported truncation step.
pub const MAX_BCH_STEP: usize = 5;

/// BCH series up to a fixed step, as coefficients over the Hall basis of the
/// free algebra on `X = f1`, `Y = f2`.
#[derive(Clone, Debug)]
pub struct BchSeries {
    basis: HallBasis,
    coeffs: Vec<Q>,
}

type Word = Vec<u8>;
type Poly = BTreeMap<Word, Q>;

fn poly_mul(a: &Poly, b: &Poly, max_deg: usize) -> Poly {
    let mut out = Poly::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            if wa.len() + wb.len() > max_deg {
                continue;
            }
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            *out.entry(w).or_insert_with(Q::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn exp_letter(letter: u8, max_deg: usize) -> Poly {
    let mut out = Poly::new();
    let mut fact = Q::one();
    for k in 0..=max_deg {
        if k > 0 {
            fact *= q(k as i64);
        }
        out.insert(vec![letter; k], fact.recip());
    }
    out
}

impl BchSeries {
    pub fn new(step: usize) -> Result<Self> {
        if step > MAX_BCH_STEP {
            return Err(Error::BchStepUnsupported { step, max: MAX_BCH_STEP });
        }
        if step == 0 {
            return Err(Error::InvalidRankStep { d: 2, s: 0 });
        }
        let prod = poly_mul(&exp_letter(0, step), &exp_letter(1, step), step);
        let mut t = prod;
        t.remove(&Word::new());
        let mut log = Poly::new();
        let mut power = t.clone();
        for n in 1..=step {
            let c = Q::new(if n % 2 == 1 { 1.into() } else { (-1).into() }, (n as i64).into());
            for (w, v) in &power {
                *log.entry(w.clone()).or_insert_with(Q::zero) += &c * v;
            }
            power = poly_mul(&power, &t, step);
        }
        log.retain(|_, c| !c.is_zero());

        let table = StructureTable::new(2, step)?;
        let r = table.len();
        let mut coeffs = linalg::zeros(r);
        for (w, c) in &log {
            let n = w.len();
            let mut v = linalg::unit(r, w[n - 1] as usize);
            for &letter in w[..n - 1].iter().rev() {
                v = table.bracket(&linalg::unit(r, letter as usize), &v);
            }
            linalg::axpy(&mut coeffs, &(c / q(n as i64)), &v);
        }
        Ok(BchSeries { basis: table.basis().clone(), coeffs })
    }

    pub fn step(&self) -> usize {
        self.basis.step()
    }

    /// Coefficients over the `(2, step)` Hall basis in `X = f1`, `Y = f2`.
    pub fn coefficients(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn hall_basis(&self) -> &HallBasis {
        &self.basis
    }

    /// `log(exp x exp y)` evaluated in `algebra`, which must be nilpotent of
    /// step at most `self.step()`.
    pub fn apply<A: LieBracket + ?Sized>(&self, algebra: &A, x: &[Q], y: &[Q]) -> Vec<Q> {
        if linalg::is_zero_vec(x) {
            return y.to_vec();
        }
        if linalg::is_zero_vec(y) {
            return x.to_vec();
        }
        let vals = self.basis.evaluate(algebra, &[x.to_vec(), y.to_vec()]);
        let mut out = linalg::zeros(algebra.dim());
        for (c, v) in self.coeffs.iter().zip(&vals) {
            linalg::axpy(&mut out, c, v);
        }
        out
    }
}

/// Shared series for each supported step, built on first use.
pub fn series(step: usize) -> Result<&'static BchSeries> {
    static CACHE: [OnceLock<BchSeries>; MAX_BCH_STEP + 1] = [const { OnceLock::new() }; MAX_BCH_STEP + 1];
    if step > MAX_BCH_STEP {
        return Err(Error::BchStepUnsupported { step, max: MAX_BCH_STEP });
    }
    if step == 0 {
        return Err(Error::InvalidRankStep { d: 2, s: 0 });
    }
    if let Some(s) = CACHE[step].get() {
        return Ok(s);
    }
    let built = BchSeries::new(step)?;
    Ok(CACHE[step].get_or_init(|| built))
}

/// Exact truncated product `log(exp X exp Y)` in the free nilpotent algebra
/// described by `table`.
pub fn bch_product(table: &StructureTable, x: &FreeLieElement, y: &FreeLieElement) -> Result<FreeLieElement> {
    let r = table.len();
    for e in [x, y] {
        if e.len() != r {
            return Err(Error::DimensionMismatch { expected: r, got: e.len() });
        }
    }
    let s = series(table.step())?;
    Ok(FreeLieElement::from_coords(s.apply(table, x.coords(), y.coords())))
}
