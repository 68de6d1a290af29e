//! Concrete nilpotent groups with canonical element coordinates.
//!
//! * integer Heisenberg group: `(u, v, w)` for the matrix
//!   `[[1, u, w], [0, 1, v], [0, 0, 1]]`, so
//!   `(u, v, w)(u', v', w') = (u + u', v + v', w + w' + u v')`;
//! * unitriangular `n x n` integer matrices, strictly-upper entries row-major;
//! * free nilpotent groups, first-kind exponential coordinates over the Hall
//!   basis, multiplied by the truncated BCH product;
//! * lattice groups `<exp e_1, ..., exp e_d>` inside the simply connected
//!   group of a rational nilpotent Lie algebra, also in exponential
//!   coordinates;
//! * finitely generated abelian groups `Z^a x Z/m_1 x ...`.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::bch::{self, BchSeries};
use crate::error::{Error, Result};
use crate::hall::StructureTable;
use crate::lie_algebra::LieAlgebra;
use crate::linalg::{self, Q};

/// Default cap on the number of group elements any enumeration may hold.
pub const DEFAULT_BUDGET: usize = 20_000_000;

/// Canonical coordinates of a group element. Equality, ordering and hashing
/// are coordinate-wise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Int(Vec<i64>),
    Rat(Vec<Q>),
}

impl GroupElement {
    pub fn int(coords: &[i64]) -> Self {
        GroupElement::Int(coords.to_vec())
    }

    pub fn as_int(&self) -> Option<&[i64]> {
        match self {
            GroupElement::Int(v) => Some(v),
            GroupElement::Rat(_) => None,
        }
    }

    pub fn as_rat(&self) -> Option<&[Q]> {
        match self {
            GroupElement::Rat(v) => Some(v),
            GroupElement::Int(_) => None,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            GroupElement::Int(v) => v.len(),
            GroupElement::Rat(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match self {
            GroupElement::Int(v) => v.iter().map(ToString::to_string).collect(),
            GroupElement::Rat(v) => v.iter().map(ToString::to_string).collect(),
        };
        write!(f, "({})", parts.join(","))
    }
}

/// Lattice group inside the Lie group of a rational nilpotent algebra.
#[derive(Debug)]
pub struct LieLattice {
    algebra: LieAlgebra,
    series: &'static BchSeries,
}

impl LieLattice {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    /// `Some(lambda)` when the algebra is `[e1, e2] = lambda e3` with every
    /// other bracket zero and `lambda` a nonzero integer.
    pub fn heisenberg_type(&self) -> Option<i64> {
        let a = &self.algebra;
        if a.dim() != 3 {
            return None;
        }
        let b = a.basis_bracket(0, 1);
        if !b[0].is_zero() || !b[1].is_zero() || b[2].is_zero() || !b[2].is_integer() {
            return None;
        }
        if !linalg::is_zero_vec(a.basis_bracket(0, 2)) || !linalg::is_zero_vec(a.basis_bracket(1, 2)) {
            return None;
        }
        i64::try_from(b[2].to_integer()).ok()
    }
}

#[derive(Clone, Debug)]
pub enum GroupContext {
    /// `moduli[i] == 0` is a `Z` factor, otherwise `Z/moduli[i]`.
    Abelian { moduli: Vec<u64> },
    Heisenberg,
    Unitriangular { n: usize },
    FreeNilpotent(Arc<StructureTable>),
    LieLattice(Arc<LieLattice>),
}

fn ut_index(n: usize, i: usize, j: usize) -> usize {
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl GroupContext {
    pub fn abelian(rank: usize) -> Self {
        GroupContext::Abelian { moduli: vec![0; rank] }
    }

    pub fn cyclic(modulus: u64) -> Self {
        GroupContext::Abelian { moduli: vec![modulus] }
    }

    pub fn unitriangular(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("unitriangular size must be at least 2, got {n}")));
        }
        Ok(GroupContext::Unitriangular { n })
    }

    pub fn free_nilpotent(d: usize, s: usize) -> Result<Self> {
        bch::series(s)?;
        Ok(GroupContext::FreeNilpotent(Arc::new(StructureTable::new(d, s)?)))
    }

    /// Requires a valid nilpotent algebra with integer structure constants,
    /// so that the lattice spanned by the basis is closed under brackets.
    pub fn lie_lattice(algebra: LieAlgebra) -> Result<Self> {
        algebra.validate().map_err(|v| Error::InvalidAlgebra(v.to_string()))?;
        if let Some((i, j)) = algebra.lattice_violation() {
            return Err(Error::LatticeCondition { i: i + 1, j: j + 1 });
        }
        let step = algebra.step()?.max(1);
        let series = bch::series(step)?;
        Ok(GroupContext::LieLattice(Arc::new(LieLattice { algebra, series })))
    }

    /// Tag naming the context kind, e.g. `heisenberg` or `free:d=2,s=3`.
    pub fn describe(&self) -> String {
        match self {
            GroupContext::Abelian { moduli } => {
                let parts: Vec<String> = moduli.iter().map(|&m| if m == 0 { "Z".into() } else { format!("Z/{m}") }).collect();
                format!("abelian:{}", parts.join("x"))
            }
            GroupContext::Heisenberg => "heisenberg".into(),
            GroupContext::Unitriangular { n } => format!("unitriangular:n={n}"),
            GroupContext::FreeNilpotent(t) => format!("free:d={},s={}", t.rank(), t.step()),
            GroupContext::LieLattice(l) => format!("lie:dim={}", l.algebra.dim()),
        }
    }

    /// Number of coordinates of an element.
    pub fn coord_len(&self) -> usize {
        match self {
            GroupContext::Abelian { moduli } => moduli.len(),
            GroupContext::Heisenberg => 3,
            GroupContext::Unitriangular { n } => n * (n - 1) / 2,
            GroupContext::FreeNilpotent(t) => t.len(),
            GroupContext::LieLattice(l) => l.algebra.dim(),
        }
    }

    fn is_rational(&self) -> bool {
        matches!(self, GroupContext::FreeNilpotent(_) | GroupContext::LieLattice(_))
    }

    pub fn identity(&self) -> GroupElement {
        let n = self.coord_len();
        if self.is_rational() {
            GroupElement::Rat(linalg::zeros(n))
        } else {
            GroupElement::Int(vec![0; n])
        }
    }

    /// Whether `g` has the shape and canonical form of an element here.
    pub fn contains(&self, g: &GroupElement) -> bool {
        if g.len() != self.coord_len() {
            return false;
        }
        match (self, g) {
            (GroupContext::Abelian { moduli }, GroupElement::Int(v)) => {
                v.iter().zip(moduli).all(|(&x, &m)| m == 0 || (0..m as i64).contains(&x))
            }
            (GroupContext::Heisenberg | GroupContext::Unitriangular { .. }, GroupElement::Int(_)) => true,
            (GroupContext::FreeNilpotent(_), GroupElement::Rat(_)) => true,
            (GroupContext::LieLattice(_), GroupElement::Rat(_)) => true,
            _ => false,
        }
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::ForeignElement(g.to_string()))
        }
    }

    /// Reduces integer coordinates into canonical form (residues for finite
    /// cyclic factors). Other contexts are already canonical.
    pub fn canonical(&self, g: GroupElement) -> GroupElement {
        match (self, g) {
            (GroupContext::Abelian { moduli }, GroupElement::Int(v)) => GroupElement::Int(
                v.into_iter()
                    .zip(moduli)
                    .map(|(x, &m)| if m == 0 { x } else { x.rem_euclid(m as i64) })
                    .collect(),
            ),
            (_, g) => g,
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (GroupContext::Abelian { moduli }, GroupElement::Int(x), GroupElement::Int(y)) => GroupElement::Int(
                x.iter()
                    .zip(y)
                    .zip(moduli)
                    .map(|((p, q), &m)| if m == 0 { p + q } else { (p + q).rem_euclid(m as i64) })
                    .collect(),
            ),
            (GroupContext::Heisenberg, GroupElement::Int(x), GroupElement::Int(y)) => {
                GroupElement::Int(vec![x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1]])
            }
            (GroupContext::Unitriangular { n }, GroupElement::Int(x), GroupElement::Int(y)) => {
                let n = *n;
                let mut out = vec![0i64; x.len()];
                for i in 0..n {
                    for j in (i + 1)..n {
                        let mut s = x[ut_index(n, i, j)] + y[ut_index(n, i, j)];
                        for k in (i + 1)..j {
                            s += x[ut_index(n, i, k)] * y[ut_index(n, k, j)];
                        }
                        out[ut_index(n, i, j)] = s;
                    }
                }
                GroupElement::Int(out)
            }
            (GroupContext::FreeNilpotent(t), GroupElement::Rat(x), GroupElement::Rat(y)) => {
                let s = bch::series(t.step()).expect("checked at construction");
                GroupElement::Rat(s.apply(t.as_ref(), x, y))
            }
            (GroupContext::LieLattice(l), GroupElement::Rat(x), GroupElement::Rat(y)) => {
                GroupElement::Rat(l.series.apply(&l.algebra, x, y))
            }
            _ => panic!("element shape does not match context {}", self.describe()),
        }
    }

    pub fn invert(&self, a: &GroupElement) -> GroupElement {
        match (self, a) {
            (GroupContext::Abelian { moduli }, GroupElement::Int(x)) => GroupElement::Int(
                x.iter().zip(moduli).map(|(&p, &m)| if m == 0 { -p } else { (-p).rem_euclid(m as i64) }).collect(),
            ),
            (GroupContext::Heisenberg, GroupElement::Int(x)) => {
                GroupElement::Int(vec![-x[0], -x[1], x[0] * x[1] - x[2]])
            }
            (GroupContext::Unitriangular { n }, GroupElement::Int(x)) => {
                // Row by row: (A^{-1})_{ij} = -A_{ij} - sum_{i<k<j} A_{ik} (A^{-1})_{kj},
                // filled for decreasing i.
                let n = *n;
                let mut inv = vec![0i64; x.len()];
                for i in (0..n).rev() {
                    for j in (i + 1)..n {
                        let mut s = -x[ut_index(n, i, j)];
                        for k in (i + 1)..j {
                            s -= x[ut_index(n, i, k)] * inv[ut_index(n, k, j)];
                        }
                        inv[ut_index(n, i, j)] = s;
                    }
                }
                GroupElement::Int(inv)
            }
            (GroupContext::FreeNilpotent(_) | GroupContext::LieLattice(_), GroupElement::Rat(x)) => {
                GroupElement::Rat(linalg::neg(x))
            }
            _ => panic!("element shape does not match context {}", self.describe()),
        }
    }

    pub fn pow(&self, a: &GroupElement, k: i64) -> GroupElement {
        let base = if k < 0 { self.invert(a) } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.multiply(&sq, &sq);
            }
        }
        acc
    }

    /// `[a, b] = a^{-1} b^{-1} a b`.
    pub fn commutator(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let ab = self.multiply(a, b);
        let ba = self.multiply(b, a);
        self.multiply(&self.invert(&ba), &ab)
    }

    /// Distinguished generators: unit vectors of `Z^a x Z/m`, `x` and `y` for
    /// Heisenberg, elementary matrices `E_{i,i+1}`, `exp f_i` for the free
    /// group, `exp e_i` for a Lie lattice.
    pub fn standard_generators(&self) -> Vec<GroupElement> {
        let n = self.coord_len();
        match self {
            GroupContext::Abelian { .. } => {
                (0..n).map(|i| self.canonical(GroupElement::Int(unit_int(n, i)))).collect()
            }
            GroupContext::Heisenberg => vec![GroupElement::int(&[1, 0, 0]), GroupElement::int(&[0, 1, 0])],
            GroupContext::Unitriangular { n: size } => {
                (0..size - 1).map(|i| GroupElement::Int(unit_int(n, ut_index(*size, i, i + 1)))).collect()
            }
            GroupContext::FreeNilpotent(t) => (0..t.rank()).map(|g| GroupElement::Rat(linalg::unit(n, g))).collect(),
            GroupContext::LieLattice(_) => (0..n).map(|i| GroupElement::Rat(linalg::unit(n, i))).collect(),
        }
    }
}

fn unit_int(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// A finite symmetric subset of a group containing the identity.
#[derive(Clone, Debug)]
pub struct GeneratingSet {
    context: GroupContext,
    elements: Vec<GroupElement>,
}

impl GeneratingSet {
    /// Accepts a symmetric set; the identity is added when missing.
    pub fn new(context: GroupContext, elements: Vec<GroupElement>) -> Result<Self> {
        let mut set: HashSet<GroupElement> = HashSet::with_capacity(elements.len() + 1);
        for g in elements {
            context.check(&g)?;
            set.insert(context.canonical(g));
        }
        let mut sorted: Vec<GroupElement> = set.iter().cloned().collect();
        sorted.sort();
        for g in &sorted {
            if !set.contains(&context.invert(g)) {
                return Err(Error::NotSymmetric(g.to_string()));
            }
        }
        let id = context.identity();
        if !set.contains(&id) {
            sorted.push(id);
            sorted.sort();
        }
        Ok(GeneratingSet { context, elements: sorted })
    }

    /// `A ∪ A^{-1} ∪ {1}`.
    pub fn symmetrize(context: GroupContext, elements: Vec<GroupElement>) -> Result<Self> {
        let mut all = Vec::with_capacity(2 * elements.len());
        for g in elements {
            context.check(&g)?;
            let g = context.canonical(g);
            all.push(context.invert(&g));
            all.push(g);
        }
        Self::new(context, all)
    }

    /// `{1} ∪ {g^{±1}}` over the context's standard generators.
    pub fn standard(context: GroupContext) -> Self {
        let gens = context.standard_generators();
        Self::symmetrize(context, gens).expect("standard generators belong to their context")
    }

    pub fn context(&self) -> &GroupContext {
        &self.context
    }

    /// Sorted, duplicate-free elements.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Heisenberg dilation `delta_t(u, v, w) = (t u, t v, t^2 w)` restricted to
/// the integer lattice.
pub fn dilate(g: &GroupElement, t: &Q) -> Result<GroupElement> {
    let Some(c) = g.as_int().filter(|c| c.len() == 3) else {
        return Err(Error::ForeignElement(g.to_string()));
    };
    if !t.is_positive() {
        return Err(Error::InvalidParameter(format!("dilation factor must be positive, got {t}")));
    }
    let to_int = |x: Q| -> Result<i64> {
        if !x.is_integer() {
            return Err(Error::NonIntegralDilation);
        }
        i64::try_from(x.to_integer()).map_err(|_| Error::NonIntegralDilation)
    };
    let t2 = t * t;
    Ok(GroupElement::Int(vec![
        to_int(t * linalg::q(c[0]))?,
        to_int(t * linalg::q(c[1]))?,
        to_int(t2 * linalg::q(c[2]))?,
    ]))
}
