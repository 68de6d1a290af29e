//! Free nilpotent Lie algebras in a Hall basis.
//!
//! The free `s`-step nilpotent Lie algebra on `d` generators has a basis of
//! *basic commutators* `f_1, ..., f_r`. The first `d` are the generators; a
//! basic commutator of total weight `k > 1` is a bracket `[f_i, f_j]` with
//! `i > j`, `|chi(f_i)| + |chi(f_j)| = k`, and, when `f_i = [f_s, f_t]`,
//! `j >= t`.
//!
//! Ordering is deterministic: ascending total weight, then descending weight
//! vector (so equal weight vectors form consecutive blocks), then ascending
//! `(i, j)` child indices.
//!
//! [`StructureTable`] stores `[f_i, f_j]` expanded in this basis. It is
//! built by Hall rewriting (Jacobi plus antisymmetry, memoised on basis
//! pairs) and checked for antisymmetry and the Jacobi identity before it is
//! returned.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Q};
use crate::LieBracket;

/// Multiplicity of each generator in a commutator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector {
    entries: Vec<u32>,
}

impl WeightVector {
    pub fn unit(d: usize, i: usize) -> Self {
        let mut entries = vec![0; d];
        entries[i] = 1;
        WeightVector { entries }
    }

    pub fn from_entries(entries: Vec<u32>) -> Self {
        WeightVector { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn total(&self) -> u32 {
        self.entries.iter().sum()
    }

    pub fn sum(&self, other: &WeightVector) -> WeightVector {
        WeightVector {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    /// `L^chi = prod_k L_k^{chi_k}`.
    pub fn eval(&self, lengths: &[Q]) -> Q {
        self.entries
            .iter()
            .zip(lengths)
            .fold(Q::one(), |acc, (&e, l)| acc * num_traits::pow(l.clone(), e as usize))
    }
}

/// Shape of a basic commutator: a generator, or the bracket of two earlier
/// basic commutators given by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CommutatorExpr {
    Generator(usize),
    Bracket(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicCommutator {
    pub index: usize,
    pub expr: CommutatorExpr,
    pub weight: WeightVector,
}

/// Enumerates the basic commutators of total weight at most `s` on `d`
/// generators.
pub fn enumerate_basic_commutators(d: usize, s: usize) -> Result<Vec<BasicCommutator>> {
    if d == 0 || s == 0 {
        return Err(Error::InvalidRankStep { d, s });
    }
    let mut list: Vec<BasicCommutator> = (0..d)
        .map(|g| BasicCommutator {
            index: g,
            expr: CommutatorExpr::Generator(g),
            weight: WeightVector::unit(d, g),
        })
        .collect();
    for k in 2..=s as u32 {
        let mut fresh: Vec<(WeightVector, usize, usize)> = Vec::new();
        for i in 0..list.len() {
            for j in 0..i {
                if list[i].weight.total() + list[j].weight.total() != k {
                    continue;
                }
                let hall_ok = match list[i].expr {
                    CommutatorExpr::Generator(_) => true,
                    CommutatorExpr::Bracket(_, t) => j >= t,
                };
                if hall_ok {
                    fresh.push((list[i].weight.sum(&list[j].weight), i, j));
                }
            }
        }
        fresh.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
        for (weight, i, j) in fresh {
            let index = list.len();
            list.push(BasicCommutator { index, expr: CommutatorExpr::Bracket(i, j), weight });
        }
    }
    Ok(list)
}

/// The ordered Hall basis for `(d, s)` with fast lookup of basic pairs.
#[derive(Clone, Debug)]
pub struct HallBasis {
    d: usize,
    s: usize,
    commutators: Vec<BasicCommutator>,
    pairs: HashMap<(usize, usize), usize>,
}

impl HallBasis {
    pub fn new(d: usize, s: usize) -> Result<Self> {
        let commutators = enumerate_basic_commutators(d, s)?;
        let pairs = commutators
            .iter()
            .filter_map(|c| match c.expr {
                CommutatorExpr::Bracket(i, j) => Some(((i, j), c.index)),
                CommutatorExpr::Generator(_) => None,
            })
            .collect();
        Ok(HallBasis { d, s, commutators, pairs })
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn step(&self) -> usize {
        self.s
    }

    pub fn len(&self) -> usize {
        self.commutators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.commutators.is_empty()
    }

    pub fn commutators(&self) -> &[BasicCommutator] {
        &self.commutators
    }

    pub fn weight(&self, i: usize) -> &WeightVector {
        &self.commutators[i].weight
    }

    pub fn total_weight(&self, i: usize) -> usize {
        self.commutators[i].weight.total() as usize
    }

    /// Index of `[f_i, f_j]` when that bracket is itself basic.
    pub fn basic_pair(&self, i: usize, j: usize) -> Option<usize> {
        self.pairs.get(&(i, j)).copied()
    }

    /// Renders basis element `i` as a bracket expression over `f1..fd`.
    pub fn render(&self, i: usize) -> String {
        match self.commutators[i].expr {
            CommutatorExpr::Generator(g) => format!("f{}", g + 1),
            CommutatorExpr::Bracket(a, b) => format!("[{},{}]", self.render(a), self.render(b)),
        }
    }

    /// Evaluates every basic commutator in another Lie algebra, substituting
    /// `gens[g]` for generator `g`. Brackets of total weight above `s` are
    /// still evaluated; the caller's algebra is responsible for truncation.
    pub fn evaluate<A: LieBracket + ?Sized>(&self, algebra: &A, gens: &[Vec<Q>]) -> Vec<Vec<Q>> {
        let mut vals: Vec<Vec<Q>> = Vec::with_capacity(self.len());
        for c in &self.commutators {
            let v = match c.expr {
                CommutatorExpr::Generator(g) => gens[g].clone(),
                CommutatorExpr::Bracket(a, b) => {
                    if linalg::is_zero_vec(&vals[a]) || linalg::is_zero_vec(&vals[b]) {
                        linalg::zeros(algebra.dim())
                    } else {
                        algebra.bracket(&vals[a], &vals[b])
                    }
                }
            };
            vals.push(v);
        }
        vals
    }
}

/// Element of the free nilpotent Lie algebra, as coordinates over the Hall
/// basis. Also used for first-kind exponential coordinates of elements of
/// the free nilpotent Lie group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeLieElement {
    coords: Vec<Q>,
}

impl FreeLieElement {
    pub fn zero(r: usize) -> Self {
        FreeLieElement { coords: linalg::zeros(r) }
    }

    pub fn basis(r: usize, i: usize) -> Self {
        FreeLieElement { coords: linalg::unit(r, i) }
    }

    pub fn from_coords(coords: Vec<Q>) -> Self {
        FreeLieElement { coords }
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Q> {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vec(&self.coords)
    }

    pub fn add(&self, other: &Self) -> Self {
        FreeLieElement { coords: linalg::add(&self.coords, &other.coords) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        FreeLieElement { coords: linalg::sub(&self.coords, &other.coords) }
    }

    pub fn scale(&self, c: &Q) -> Self {
        FreeLieElement { coords: linalg::scale(c, &self.coords) }
    }

    pub fn neg(&self) -> Self {
        FreeLieElement { coords: linalg::neg(&self.coords) }
    }
}

impl fmt::Display for FreeLieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

type Sparse = Vec<(usize, Q)>;

/// Structure constants of the free `(d, s)` nilpotent Lie algebra in the
/// Hall basis.
#[derive(Clone, Debug)]
pub struct StructureTable {
    basis: HallBasis,
    brackets: Vec<Vec<Sparse>>,
}

impl StructureTable {
    pub fn new(d: usize, s: usize) -> Result<Self> {
        let basis = HallBasis::new(d, s)?;
        let r = basis.len();
        let mut rewriter = Rewriter { basis: &basis, memo: HashMap::new() };
        let mut brackets = vec![vec![Sparse::new(); r]; r];
        for (i, row) in brackets.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let m = rewriter.bracket(i, j);
                let mut entries: Sparse = m.iter().map(|(&k, c)| (k, c.clone())).collect();
                entries.sort_by_key(|e| e.0);
                *slot = entries;
            }
        }
        let table = StructureTable { basis, brackets };
        table.check_identities()?;
        Ok(table)
    }

    pub fn basis(&self) -> &HallBasis {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn step(&self) -> usize {
        self.basis.step()
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `[f_i, f_j]` in the Hall basis, as a dense vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<Q> {
        let mut v = linalg::zeros(self.len());
        for (k, c) in &self.brackets[i][j] {
            v[*k] = c.clone();
        }
        v
    }

    pub fn generator(&self, g: usize) -> FreeLieElement {
        FreeLieElement::basis(self.len(), g)
    }

    /// Exact bilinear bracket of two free Lie elements, expanded in the Hall
    /// basis; components of total weight above `s` vanish.
    pub fn hall_rewrite_bracket(&self, a: &FreeLieElement, b: &FreeLieElement) -> Result<FreeLieElement> {
        let r = self.len();
        for x in [a, b] {
            if x.len() != r {
                return Err(Error::DimensionMismatch { expected: r, got: x.len() });
            }
        }
        Ok(FreeLieElement::from_coords(self.bracket(a.coords(), b.coords())))
    }

    /// `|coord_i(X)| <= (m L)^{chi(i)}` for every basic commutator `i`.
    pub fn nilbox_contains(&self, x: &FreeLieElement, lengths: &[Q], m: &Q) -> Result<bool> {
        let d = self.rank();
        if lengths.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: lengths.len() });
        }
        if x.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: x.len() });
        }
        let scaled: Vec<Q> = lengths.iter().map(|l| l * m).collect();
        Ok(x.coords()
            .iter()
            .enumerate()
            .all(|(i, c)| c.abs() <= self.basis.weight(i).eval(&scaled)))
    }

    fn check_identities(&self) -> Result<()> {
        let r = self.len();
        for i in 0..r {
            for j in 0..r {
                let ij = self.basis_bracket(i, j);
                let ji = self.basis_bracket(j, i);
                if !linalg::is_zero_vec(&linalg::add(&ij, &ji)) {
                    return Err(Error::Postcondition(format!("antisymmetry fails on ({i},{j})")));
                }
            }
        }
        let s = self.step();
        for i in 0..r {
            for j in (i + 1)..r {
                for k in (j + 1)..r {
                    let w = self.basis.total_weight(i) + self.basis.total_weight(j) + self.basis.total_weight(k);
                    if w > s {
                        continue;
                    }
                    let ei = linalg::unit(r, i);
                    let ej = linalg::unit(r, j);
                    let ek = linalg::unit(r, k);
                    let mut sum = self.bracket(&ei, &self.basis_bracket(j, k));
                    sum = linalg::add(&sum, &self.bracket(&ej, &self.basis_bracket(k, i)));
                    sum = linalg::add(&sum, &self.bracket(&ek, &self.basis_bracket(i, j)));
                    if !linalg::is_zero_vec(&sum) {
                        return Err(Error::Postcondition(format!("Jacobi fails on ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }
}

impl LieBracket for StructureTable {
    fn dim(&self) -> usize {
        self.len()
    }

    fn bracket(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let r = self.len();
        let mut out = linalg::zeros(r);
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() || self.brackets[i][j].is_empty() {
                    continue;
                }
                let c = ai * bj;
                for (k, v) in &self.brackets[i][j] {
                    out[*k] += &c * v;
                }
            }
        }
        out
    }
}

struct Rewriter<'a> {
    basis: &'a HallBasis,
    memo: HashMap<(usize, usize), HashMap<usize, Q>>,
}

impl Rewriter<'_> {
    fn bracket(&mut self, i: usize, j: usize) -> HashMap<usize, Q> {
        if let Some(m) = self.memo.get(&(i, j)) {
            return m.clone();
        }
        let out = self.compute(i, j);
        self.memo.insert((i, j), out.clone());
        out
    }

    fn compute(&mut self, i: usize, j: usize) -> HashMap<usize, Q> {
        if i == j || self.basis.total_weight(i) + self.basis.total_weight(j) > self.basis.step() {
            return HashMap::new();
        }
        if i < j {
            return self.bracket(j, i).into_iter().map(|(k, c)| (k, -c)).collect();
        }
        if let Some(k) = self.basis.basic_pair(i, j) {
            return HashMap::from([(k, Q::one())]);
        }
        // Not basic, so f_i = [f_a, f_b] with j < b.
        // Jacobi: [[f_a, f_b], f_j] = [f_a, [f_b, f_j]] + [[f_a, f_j], f_b].
        let CommutatorExpr::Bracket(a, b) = self.basis.commutators()[i].expr else {
            unreachable!("generator pairs with i > j are always basic");
        };
        let mut out: HashMap<usize, Q> = HashMap::new();
        for (k, c) in self.bracket(b, j) {
            for (t, v) in self.bracket(a, k) {
                *out.entry(t).or_insert_with(Q::zero) += &c * v;
            }
        }
        for (k, c) in self.bracket(a, j) {
            for (t, v) in self.bracket(k, b) {
                *out.entry(t).or_insert_with(Q::zero) += &c * v;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}
