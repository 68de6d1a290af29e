//! Subsets of the Heisenberg-type group `H_λ = Z^3` with law
//! `(u, v, w)(u', v', w') = (u + u', v + v', w + w' + λ u v')`, stored as
//! fibers: for each `(u, v)`, the set of central coordinates `w` as a union
//! of disjoint integer intervals.
//!
//! Products of two such sets stay fibered (each pair of fibers contributes a
//! shifted interval sumset), so balls of box-shaped generating sets can be
//! counted without listing their elements.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

/// Sorted, disjoint, non-adjacent closed intervals.
pub type Intervals = Vec<(i64, i64)>;

fn normalize(mut v: Intervals) -> Intervals {
    v.sort_unstable();
    let mut out: Intervals = Vec::with_capacity(v.len());
    for (lo, hi) in v {
        match out.last_mut() {
            Some(last) if lo <= last.1 + 1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

fn interval_count(v: &Intervals) -> u64 {
    v.iter().map(|&(lo, hi)| (hi - lo + 1) as u64).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberSet {
    lambda: i64,
    fibers: BTreeMap<(i64, i64), Intervals>,
}

impl FiberSet {
    pub fn empty(lambda: i64) -> Self {
        FiberSet { lambda, fibers: BTreeMap::new() }
    }

    pub fn identity(lambda: i64) -> Self {
        Self::from_elements(lambda, [[0, 0, 0]])
    }

    pub fn from_elements(lambda: i64, elements: impl IntoIterator<Item = [i64; 3]>) -> Self {
        let mut raw: HashMap<(i64, i64), Intervals> = HashMap::new();
        for [u, v, w] in elements {
            raw.entry((u, v)).or_default().push((w, w));
        }
        Self::from_raw(lambda, raw)
    }

    /// `{(u, v, w) : (u, v) ∈ keys, w ∈ intervals}` from unnormalized pieces.
    pub fn from_fibers(lambda: i64, fibers: impl IntoIterator<Item = ((i64, i64), Intervals)>) -> Self {
        let mut raw: HashMap<(i64, i64), Intervals> = HashMap::new();
        for (k, iv) in fibers {
            raw.entry(k).or_default().extend(iv.into_iter().filter(|(lo, hi)| lo <= hi));
        }
        Self::from_raw(lambda, raw)
    }

    fn from_raw(lambda: i64, raw: HashMap<(i64, i64), Intervals>) -> Self {
        let fibers = raw
            .into_par_iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(k, v)| (k, normalize(v)))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        FiberSet { lambda, fibers }
    }

    pub fn lambda(&self) -> i64 {
        self.lambda
    }

    pub fn fibers(&self) -> &BTreeMap<(i64, i64), Intervals> {
        &self.fibers
    }

    /// Number of elements.
    pub fn count(&self) -> u64 {
        self.fibers.values().map(interval_count).sum()
    }

    /// Number of stored intervals, the memory footprint of the set.
    pub fn storage(&self) -> usize {
        self.fibers.values().map(Vec::len).sum()
    }

    pub fn contains(&self, g: [i64; 3]) -> bool {
        let Some(iv) = self.fibers.get(&(g[0], g[1])) else {
            return false;
        };
        let idx = iv.partition_point(|&(lo, _)| lo <= g[2]);
        idx > 0 && iv[idx - 1].1 >= g[2]
    }

    pub fn is_subset(&self, other: &FiberSet) -> bool {
        self.fibers.iter().all(|(k, iv)| match other.fibers.get(k) {
            None => false,
            Some(ov) => iv.iter().all(|&(lo, hi)| {
                let idx = ov.partition_point(|&(olo, _)| olo <= lo);
                idx > 0 && ov[idx - 1].1 >= hi
            }),
        })
    }

    pub fn union(&self, other: &FiberSet) -> FiberSet {
        assert_eq!(self.lambda, other.lambda);
        let pieces = self.fibers.iter().chain(&other.fibers).map(|(k, v)| (*k, v.clone()));
        Self::from_fibers(self.lambda, pieces)
    }

    /// `{g^{-1} : g ∈ self}`, using `(u, v, w)^{-1} = (-u, -v, λ u v - w)`.
    pub fn inverse(&self) -> FiberSet {
        let l = self.lambda;
        let pieces = self.fibers.iter().map(|(&(u, v), iv)| {
            let c = l * u * v;
            ((-u, -v), iv.iter().map(|&(lo, hi)| (c - hi, c - lo)).collect())
        });
        Self::from_fibers(l, pieces)
    }

    /// The product set `self · other`.
    pub fn product(&self, other: &FiberSet) -> FiberSet {
        assert_eq!(self.lambda, other.lambda);
        let l = self.lambda;
        let left: Vec<_> = self.fibers.iter().collect();
        let right: Vec<_> = other.fibers.iter().collect();
        let raw = left
            .par_iter()
            .fold(HashMap::<(i64, i64), Intervals>::new, |mut acc, &(&(a, b), iv)| {
                for &(&(a2, b2), jv) in &right {
                    let shift = l * a * b2;
                    let slot = acc.entry((a + a2, b + b2)).or_default();
                    for &(lo1, hi1) in iv {
                        for &(lo2, hi2) in jv {
                            slot.push((lo1 + lo2 + shift, hi1 + hi2 + shift));
                        }
                    }
                }
                // Keep per-worker buffers compact.
                if acc.values().map(Vec::len).sum::<usize>() > 1 << 20 {
                    for v in acc.values_mut() {
                        *v = normalize(std::mem::take(v));
                    }
                }
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    a.entry(k).or_default().extend(v);
                }
                a
            });
        Self::from_raw(l, raw)
    }

    pub fn elements(&self) -> Vec<[i64; 3]> {
        let mut out = Vec::with_capacity(self.count() as usize);
        for (&(u, v), iv) in &self.fibers {
            for &(lo, hi) in iv {
                out.extend((lo..=hi).map(|w| [u, v, w]));
            }
        }
        out
    }
}
