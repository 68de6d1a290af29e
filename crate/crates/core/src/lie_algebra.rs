//! Finite-dimensional rational nilpotent Lie algebras given by structure
//! constants.
//!
//! The lower central series is `c^1 = g`, `c^{k+1} = [g, c^k]`, with ranks
//! `a_k = dim c^k - dim c^{k+1}`. The homogeneous dimension is
//! `sum_k k * a_k`, and `xi(u)` is the largest `k` with `u` in `c^k`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hall::{HallBasis, StructureTable};
use crate::linalg::{self, Subspace, Q};
use crate::LieBracket;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    labels: Vec<String>,
    // table[i][j] = [e_i, e_j]
    table: Vec<Vec<Vec<Q>>>,
}

/// First failure found by [`LieAlgebra::validate`]. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Antisymmetry { i: usize, j: usize },
    Jacobi { i: usize, j: usize, k: usize },
    NotNilpotent { stable_dim: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { i, j } => write!(f, "antisymmetry fails for (e{}, e{})", i + 1, j + 1),
            Violation::Jacobi { i, j, k } => write!(f, "Jacobi fails for (e{}, e{}, e{})", i + 1, j + 1, k + 1),
            Violation::NotNilpotent { stable_dim } => {
                write!(f, "not nilpotent: lower central series stabilises at dimension {stable_dim}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerCentralSeries {
    /// `c^1 ⊇ c^2 ⊇ ... ⊇ c^{s+1} = 0`.
    pub terms: Vec<Subspace>,
    /// `a_k` for `k = 1..=s`.
    pub ranks: Vec<usize>,
}

impl LowerCentralSeries {
    pub fn step(&self) -> usize {
        self.ranks.len()
    }

    pub fn homogeneous_dimension(&self) -> usize {
        self.ranks.iter().enumerate().map(|(k, a)| (k + 1) * a).sum()
    }
}

fn default_labels(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("e{i}")).collect()
}

impl LieAlgebra {
    /// Builds an algebra from brackets `[e_i, e_j]` with `i < j` (0-based);
    /// the rest of the table follows by antisymmetry, omitted brackets are 0.
    pub fn new(dim: usize, labels: Option<Vec<String>>, brackets: Vec<(usize, usize, Vec<Q>)>) -> Result<Self> {
        let labels = labels.unwrap_or_else(|| default_labels(dim));
        if labels.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: labels.len() });
        }
        let mut table = vec![vec![linalg::zeros(dim); dim]; dim];
        for (i, j, v) in brackets {
            if i >= j || j >= dim {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket indices must satisfy i < j <= dim, got ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
            }
            table[j][i] = linalg::neg(&v);
            table[i][j] = v;
        }
        Ok(LieAlgebra { dim, labels, table })
    }

    /// Builds an algebra from a full bracket table, without imposing
    /// antisymmetry. Use [`validate`](Self::validate) to check it.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<Vec<Q>>>) -> Result<Self> {
        let dim = labels.len();
        if table.len() != dim || table.iter().any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim)) {
            return Err(Error::InvalidAlgebra("bracket table has the wrong shape".into()));
        }
        Ok(LieAlgebra { dim, labels, table })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra::new(dim, None, Vec::new()).expect("no brackets")
    }

    /// `[x, y] = z` on basis `(x, y, z)`.
    pub fn heisenberg() -> Self {
        let bracket = vec![Q::zero(), Q::zero(), Q::one()];
        LieAlgebra::new(3, Some(vec!["x".into(), "y".into(), "z".into()]), vec![(0, 1, bracket)])
            .expect("valid")
    }

    /// The free `(d, s)` nilpotent algebra in its Hall basis.
    pub fn free(d: usize, s: usize) -> Result<Self> {
        let t = StructureTable::new(d, s)?;
        Ok(Self::from_structure_table(&t))
    }

    pub fn from_structure_table(t: &StructureTable) -> Self {
        let r = t.len();
        let labels = (0..r).map(|i| t.basis().render(i)).collect();
        let table = (0..r).map(|i| (0..r).map(|j| t.basis_bracket(i, j)).collect()).collect();
        LieAlgebra { dim: r, labels, table }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &[Q] {
        &self.table[i][j]
    }

    fn check_vector(&self, v: &[Q]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(())
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().flatten().all(|v| linalg::is_zero_vec(v))
    }

    /// Antisymmetry, the Jacobi identity and nilpotency, reporting the first
    /// failure.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let n = self.dim;
        for i in 0..n {
            for j in i..n {
                if !linalg::is_zero_vec(&linalg::add(&self.table[i][j], &self.table[j][i])) {
                    return Err(Violation::Antisymmetry { i, j });
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let a = self.bracket(&linalg::unit(n, i), &self.table[j][k]);
                    let b = self.bracket(&linalg::unit(n, j), &self.table[k][i]);
                    let c = self.bracket(&linalg::unit(n, k), &self.table[i][j]);
                    if !linalg::is_zero_vec(&linalg::add(&linalg::add(&a, &b), &c)) {
                        return Err(Violation::Jacobi { i, j, k });
                    }
                }
            }
        }
        match self.lower_central_series() {
            Ok(_) => Ok(()),
            Err(Error::NotNilpotent { stable_dim }) => Err(Violation::NotNilpotent { stable_dim }),
            Err(_) => unreachable!("lower_central_series only fails on non-nilpotent input"),
        }
    }

    pub fn lower_central_series(&self) -> Result<LowerCentralSeries> {
        let n = self.dim;
        let mut terms = vec![Subspace::full(n)];
        loop {
            let last = terms.last().expect("nonempty");
            if last.dim() == 0 {
                break;
            }
            let mut gens = Vec::new();
            for i in 0..n {
                let ei = linalg::unit(n, i);
                for v in last.basis() {
                    let b = self.bracket(&ei, v);
                    if !linalg::is_zero_vec(&b) {
                        gens.push(b);
                    }
                }
            }
            let next = Subspace::span(n, gens);
            if next.dim() == last.dim() {
                return Err(Error::NotNilpotent { stable_dim: next.dim() });
            }
            terms.push(next);
        }
        let ranks = terms.windows(2).map(|w| w[0].dim() - w[1].dim()).collect();
        Ok(LowerCentralSeries { terms, ranks })
    }

    /// Nilpotency class (0 for the zero algebra).
    pub fn step(&self) -> Result<usize> {
        Ok(self.lower_central_series()?.step())
    }

    pub fn homogeneous_dimension(&self) -> Result<usize> {
        Ok(self.lower_central_series()?.homogeneous_dimension())
    }

    pub fn xi_degree(&self, u: &[Q]) -> Result<usize> {
        self.check_vector(u)?;
        if linalg::is_zero_vec(u) {
            return Err(Error::ZeroVector);
        }
        let lcs = self.lower_central_series()?;
        Ok(lcs.terms.iter().take_while(|c| c.contains(u)).count())
    }

    pub fn is_central(&self, u: &[Q]) -> bool {
        (0..self.dim).all(|i| linalg::is_zero_vec(&self.bracket(&linalg::unit(self.dim, i), u)))
    }

    pub fn center(&self) -> Subspace {
        // u is central iff sum_j u_j [e_i, e_j] = 0 for every i.
        let n = self.dim;
        let mut rows = Vec::new();
        for i in 0..n {
            for k in 0..n {
                rows.push((0..n).map(|j| self.table[i][j][k].clone()).collect());
            }
        }
        Subspace::span(n, linalg::kernel(&rows, n))
    }

    /// `g / <u>` for central nonzero `u`. The quotient keeps every basis
    /// vector except the first coordinate where `u` is nonzero.
    ///
    /// The returned algebra is checked against `a_k(g/<u>) = a_k(g) - [k = xi(u)]`.
    pub fn central_quotient(&self, u: &[Q]) -> Result<LieAlgebra> {
        self.check_vector(u)?;
        if linalg::is_zero_vec(u) {
            return Err(Error::ZeroVector);
        }
        if !self.is_central(u) {
            return Err(Error::NotCentral);
        }
        let p = u.iter().position(|c| !c.is_zero()).expect("nonzero");
        let keep: Vec<usize> = (0..self.dim).filter(|&i| i != p).collect();
        let project = |v: &[Q]| -> Vec<Q> {
            let c = &v[p] / &u[p];
            let w = linalg::sub(v, &linalg::scale(&c, u));
            keep.iter().map(|&i| w[i].clone()).collect()
        };
        let table = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| project(&self.table[i][j])).collect())
            .collect();
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let quotient = LieAlgebra { dim: self.dim - 1, labels, table };

        let xi = self.xi_degree(u)?;
        let before = self.lower_central_series()?.ranks;
        let after = quotient.lower_central_series()?.ranks;
        let expected: Vec<usize> = before
            .iter()
            .enumerate()
            .map(|(k, &a)| if k + 1 == xi { a - 1 } else { a })
            .collect();
        let trim = |v: &[usize]| v.iter().rposition(|&a| a > 0).map_or(0, |i| i + 1);
        if after[..trim(&after)] != expected[..trim(&expected)] {
            return Err(Error::Postcondition(format!(
                "quotient ranks {after:?} differ from {expected:?} (xi = {xi})"
            )));
        }
        Ok(quotient)
    }

    /// First basis pair whose bracket has a non-integer coordinate.
    pub fn lattice_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                if self.table[i][j].iter().any(|c| !c.is_integer()) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Checks `[e_i, e_j] ∈ B(e_{j+1}, ..., e_d; C L_k / (L_i L_j))` for all
    /// `i < j`: coordinates at or before `j` vanish and later coordinates
    /// are bounded.
    pub fn upper_triangular_check(&self, lengths: &[Q], c: &Q) -> Result<bool> {
        self.check_vector(lengths)?;
        let n = self.dim;
        for i in 0..n {
            for j in (i + 1)..n {
                let b = &self.table[i][j];
                let denom = &lengths[i] * &lengths[j];
                for (k, coef) in b.iter().enumerate() {
                    if k <= j {
                        if !coef.is_zero() {
                            return Ok(false);
                        }
                    } else if coef.abs() > c * &lengths[k] / &denom {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn to_file(&self) -> LieAlgebraFile {
        let mut brackets = Vec::new();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let terms: Vec<(usize, i64, i64)> = self.table[i][j]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| {
                        let num = i64::try_from(c.numer()).expect("structure constant fits in i64");
                        let den = i64::try_from(c.denom()).expect("structure constant fits in i64");
                        (k + 1, num, den)
                    })
                    .collect();
                if !terms.is_empty() {
                    brackets.push((i + 1, j + 1, terms));
                }
            }
        }
        LieAlgebraFile { dim: self.dim, labels: Some(self.labels.clone()), brackets }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serialisable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: LieAlgebraFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidAlgebra(format!("malformed algebra file: {e}")))?;
        file.into_algebra()
    }
}

impl LieBracket for LieAlgebra {
    fn dim(&self) -> usize {
        self.dim
    }

    fn bracket(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let mut out = linalg::zeros(self.dim);
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                linalg::axpy(&mut out, &(ai * bj), &self.table[i][j]);
            }
        }
        out
    }
}

/// On-disk form: 1-based indices, brackets `(i, j, [(k, num, den), ...])`
/// with `i < j`; omitted brackets are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieAlgebraFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<(usize, usize, Vec<(usize, i64, i64)>)>,
}

impl LieAlgebraFile {
    pub fn into_algebra(self) -> Result<LieAlgebra> {
        let dim = self.dim;
        let mut brackets = Vec::with_capacity(self.brackets.len());
        let mut seen = std::collections::BTreeSet::new();
        for (i, j, terms) in self.brackets {
            if i == 0 || j == 0 || i >= j || j > dim {
                return Err(Error::InvalidAlgebra(format!("malformed bracket triple ({i}, {j}): need 1 <= i < j <= {dim}")));
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidAlgebra(format!("bracket ({i}, {j}) given twice")));
            }
            let mut v = linalg::zeros(dim);
            for (k, num, den) in terms {
                if k == 0 || k > dim {
                    return Err(Error::InvalidAlgebra(format!("bracket ({i}, {j}) names basis index {k} outside 1..={dim}")));
                }
                if den == 0 {
                    return Err(Error::InvalidAlgebra(format!("bracket ({i}, {j}) has a zero denominator")));
                }
                v[k - 1] += Q::new(num.into(), den.into());
            }
            brackets.push((i - 1, j - 1, v));
        }
        LieAlgebra::new(dim, self.labels, brackets)
    }
}

/// A Lie algebra with `d` generating marks, equivalently a surjection from
/// the free `(d, s)` algebra.
#[derive(Clone, Debug)]
pub struct MarkedLieAlgebra {
    algebra: LieAlgebra,
    marks: Vec<Vec<Q>>,
    step: usize,
}

impl MarkedLieAlgebra {
    /// `step` is the step of the ambient free algebra; it must be at least
    /// the nilpotency class of `algebra`.
    pub fn new(algebra: LieAlgebra, marks: Vec<Vec<Q>>, step: usize) -> Result<Self> {
        for m in &marks {
            algebra.check_vector(m)?;
        }
        let class = algebra.step()?;
        if step < class.max(1) {
            return Err(Error::InvalidParameter(format!(
                "ambient step {step} is below the nilpotency class {class}"
            )));
        }
        let marked = MarkedLieAlgebra { algebra, marks, step };
        let span = linalg::rank(&marked.images()?, marked.algebra.dim());
        if span < marked.algebra.dim() {
            return Err(Error::MarksNotGenerating { span, dim: marked.algebra.dim() });
        }
        Ok(marked)
    }

    /// The algebra marked by its own basis.
    pub fn standard(algebra: LieAlgebra, step: usize) -> Result<Self> {
        let n = algebra.dim();
        let marks = (0..n).map(|i| linalg::unit(n, i)).collect();
        Self::new(algebra, marks, step)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn marks(&self) -> &[Vec<Q>] {
        &self.marks
    }

    pub fn rank(&self) -> usize {
        self.marks.len()
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn hall_basis(&self) -> Result<HallBasis> {
        HallBasis::new(self.rank(), self.step)
    }

    /// Images of the basic commutators of the free `(d, s)` algebra.
    pub fn images(&self) -> Result<Vec<Vec<Q>>> {
        Ok(self.hall_basis()?.evaluate(&self.algebra, &self.marks))
    }

    /// `ker pi` inside the free algebra, in Hall coordinates.
    pub fn kernel(&self) -> Result<Subspace> {
        let images = self.images()?;
        let r = images.len();
        let rows = linalg::transpose(&images, self.algebra.dim());
        Ok(Subspace::span(r, linalg::kernel(&rows, r)))
    }
}

/// Certified bracket on the distance between two marked algebras: the
/// Hausdorff distance between their sets of norm-1 relations, in the norm
/// whose unit ball is the convex hull of `±f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedDistance {
    pub lower: Q,
    /// `None` when one relation set is empty and the other is not: the
    /// Hausdorff distance is then infinite.
    pub upper: Option<Q>,
    pub one_sided_empty: bool,
}

const MAX_VERTEX_AMBIENT: usize = 20;

/// Vertices of `K ∩ {||x||_1 <= 1}`: points of `K` whose support carries a
/// one-dimensional slice of `K`, normalised to norm 1, with both signs.
fn slice_vertices(k: &Subspace) -> Result<Vec<Vec<Q>>> {
    let r = k.ambient();
    if k.dim() == 0 {
        return Ok(Vec::new());
    }
    if r > MAX_VERTEX_AMBIENT {
        return Err(Error::InvalidParameter(format!(
            "relation polytope in dimension {r} exceeds the supported {MAX_VERTEX_AMBIENT}"
        )));
    }
    let basis = k.basis();
    let mut out: Vec<Vec<Q>> = Vec::new();
    for mask in 1u32..(1u32 << r) {
        // Coefficient vectors c with (sum_j c_j b_j)_i = 0 for i outside the mask.
        let rows: Vec<Vec<Q>> = (0..r)
            .filter(|i| mask & (1 << i) == 0)
            .map(|i| basis.iter().map(|b| b[i].clone()).collect())
            .collect();
        let ker = linalg::kernel(&rows, basis.len());
        if ker.len() != 1 {
            continue;
        }
        let mut v = linalg::zeros(r);
        for (c, b) in ker[0].iter().zip(basis) {
            linalg::axpy(&mut v, c, b);
        }
        let support: u32 = v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| 1 << i).sum();
        if support != mask {
            continue;
        }
        let n = linalg::l1_norm(&v);
        let v = linalg::scale(&n.recip(), &v);
        for w in [linalg::neg(&v), v] {
            if !out.contains(&w) {
                out.push(w);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Points of `K` on the unit sphere used for the lower bound: the polytope
/// vertices, normalised basis vectors, and `directions` normalised sums of
/// vertex pairs.
fn sample_sphere(k: &Subspace, vertices: &[Vec<Q>], directions: usize) -> Vec<Vec<Q>> {
    let mut pts: Vec<Vec<Q>> = vertices.to_vec();
    for b in k.basis() {
        pts.push(linalg::scale(&linalg::l1_norm(b).recip(), b));
    }
    let mut added = 0;
    'outer: for a in 0..vertices.len() {
        for b in (a + 1)..vertices.len() {
            if added >= directions {
                break 'outer;
            }
            let s = linalg::add(&vertices[a], &vertices[b]);
            if linalg::is_zero_vec(&s) {
                continue;
            }
            pts.push(linalg::scale(&linalg::l1_norm(&s).recip(), &s));
            added += 1;
        }
    }
    pts
}

/// Lower bound on the l1 distance from `v` to the subspace `k`, from the
/// dual witness `w = res / ||res||_inf` which annihilates `k`.
fn l1_distance_lower(v: &[Q], k: &Subspace) -> Q {
    let res = linalg::sub(v, &k.project(v));
    let inf = linalg::linf_norm(&res);
    if inf.is_zero() {
        return Q::zero();
    }
    linalg::dot(&res, &res) / inf
}

/// Upper bound on the l1 distance from `v` to `k`, from the orthogonal
/// projection as witness.
fn l1_distance_upper(v: &[Q], k: &Subspace) -> Q {
    linalg::l1_norm(&linalg::sub(v, &k.project(v)))
}

/// Brackets the distance between the relation sets of two markings of the
/// same free `(d, s)` algebra.
///
/// Every point of a relation set is a convex combination of vertices of the
/// relation polytope, so twice the worst vertex-to-kernel distance bounds
/// the Hausdorff distance from above. Lower bounds come from dual witnesses
/// at sampled relations.
pub fn marked_distance(a: &MarkedLieAlgebra, b: &MarkedLieAlgebra, directions: usize) -> Result<MarkedDistance> {
    if a.rank() != b.rank() || a.step() != b.step() {
        return Err(Error::InvalidParameter(format!(
            "markings live over different free algebras: (d={}, s={}) vs (d={}, s={})",
            a.rank(),
            a.step(),
            b.rank(),
            b.step()
        )));
    }
    if directions == 0 {
        return Err(Error::InvalidParameter("directions must be at least 1".into()));
    }
    let ka = a.kernel()?;
    let kb = b.kernel()?;
    match (ka.dim(), kb.dim()) {
        (0, 0) => {
            return Ok(MarkedDistance { lower: Q::zero(), upper: Some(Q::zero()), one_sided_empty: false });
        }
        (0, _) | (_, 0) => {
            return Ok(MarkedDistance { lower: linalg::q(2), upper: None, one_sided_empty: true });
        }
        _ => {}
    }
    if ka == kb {
        return Ok(MarkedDistance { lower: Q::zero(), upper: Some(Q::zero()), one_sided_empty: false });
    }
    let va = slice_vertices(&ka)?;
    let vb = slice_vertices(&kb)?;
    let two = linalg::q(2);
    let mut upper = Q::zero();
    for (verts, other) in [(&va, &kb), (&vb, &ka)] {
        for v in verts.iter() {
            let u = &two * l1_distance_upper(v, other);
            if u > upper {
                upper = u;
            }
        }
    }
    if upper > two {
        upper = two.clone();
    }
    let mut lower = Q::zero();
    for (k, verts, other) in [(&ka, &va, &kb), (&kb, &vb, &ka)] {
        for p in sample_sphere(k, verts, directions) {
            let l = l1_distance_lower(&p, other);
            if l > lower {
                lower = l;
            }
        }
    }
    Ok(MarkedDistance { lower, upper: Some(upper), one_sided_empty: false })
}
