//! Ordered progressions `P_ord(u; L) = { u_1^{l_1} ... u_d^{l_d} : |l_i| <= L_i }`
//! and Lie progressions on a lattice basis.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};
use std::fmt;

use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groups::{GroupContext, GroupElement};
use crate::lie_algebra::LieAlgebra;
use crate::linalg::{self, Q};

#[derive(Clone, Debug)]
pub struct OrderedProgression {
    context: GroupContext,
    generators: Vec<GroupElement>,
    lengths: Vec<u64>,
}

/// Result of enumerating a progression: the distinct elements in sorted
/// order, and the number of exponent tuples that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub elements: Vec<GroupElement>,
    pub raw_count: u128,
}

impl Enumeration {
    pub fn is_injective(&self) -> bool {
        self.elements.len() as u128 == self.raw_count
    }
}

fn raw_count(bounds: &[u64]) -> u128 {
    bounds.iter().fold(1u128, |acc, &b| acc.saturating_mul(2 * b as u128 + 1))
}

/// Products `u_1^{l_1} ... u_d^{l_d}` over `|l_i| <= bounds[i]`, built one
/// generator at a time with duplicates collapsed after each stage.
fn enumerate_with_bounds(
    context: &GroupContext,
    generators: &[GroupElement],
    bounds: &[u64],
    budget: usize,
) -> Result<Enumeration> {
    let raw = raw_count(bounds);
    if raw > budget as u128 {
        return Err(Error::BudgetExceeded { budget });
    }
    let mut partial = vec![context.identity()];
    for (u, &b) in generators.iter().zip(bounds) {
        if b == 0 {
            continue;
        }
        let b = b as i64;
        let powers: Vec<GroupElement> = (-b..=b).map(|l| context.pow(u, l)).collect();
        let mut next: Vec<GroupElement> = partial
            .par_iter()
            .flat_map_iter(|p| powers.iter().map(move |x| context.multiply(p, x)))
            .collect();
        next.par_sort_unstable();
        next.dedup();
        partial = next;
    }
    Ok(Enumeration { elements: partial, raw_count: raw })
}

fn floor_scaled(m: &Q, l: u64) -> Result<u64> {
    let x = (m * linalg::q(l as i64)).floor();
    x.to_integer()
        .to_u64()
        .ok_or_else(|| Error::InvalidParameter(format!("scaled length {x} out of range")))
}

impl OrderedProgression {
    pub fn new(context: GroupContext, generators: Vec<GroupElement>, lengths: Vec<u64>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidParameter("a progression needs at least one generator".into()));
        }
        if generators.len() != lengths.len() {
            return Err(Error::DimensionMismatch { expected: generators.len(), got: lengths.len() });
        }
        if let Some(i) = lengths.iter().position(|&l| l == 0) {
            return Err(Error::InvalidParameter(format!("length L_{} must be positive", i + 1)));
        }
        let generators = generators
            .into_iter()
            .map(|g| context.check(&g).map(|_| context.canonical(g)))
            .collect::<Result<Vec<_>>>()?;
        Ok(OrderedProgression { context, generators, lengths })
    }

    pub fn context(&self) -> &GroupContext {
        &self.context
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn lengths(&self) -> &[u64] {
        &self.lengths
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn enumerate(&self, budget: usize) -> Result<Enumeration> {
        enumerate_with_bounds(&self.context, &self.generators, &self.lengths, budget)
    }

    /// Whether every `[u_i^{±1}, u_j^{±1}]`, `i < j`, lies in
    /// `P_ord(u_{j+1}, ..., u_d; C L_k / (L_i L_j))`, with real lengths
    /// truncated to their integer parts.
    pub fn upper_triangular_check(&self, c: &Q, budget: usize) -> Result<bool> {
        if !c.is_positive() {
            return Err(Error::InvalidParameter(format!("C must be positive, got {c}")));
        }
        let ctx = &self.context;
        let d = self.rank();
        for i in 0..d {
            for j in (i + 1)..d {
                let denom = linalg::q((self.lengths[i] * self.lengths[j]) as i64);
                let bounds = self.lengths[j + 1..]
                    .iter()
                    .map(|&l| floor_scaled(&(c / &denom), l))
                    .collect::<Result<Vec<_>>>()?;
                let tail = enumerate_with_bounds(ctx, &self.generators[j + 1..], &bounds, budget)?;
                for a in [self.generators[i].clone(), ctx.invert(&self.generators[i])] {
                    for b in [self.generators[j].clone(), ctx.invert(&self.generators[j])] {
                        if tail.elements.binary_search(&ctx.commutator(&a, &b)).is_err() {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// Whether the products over `|l_i| <= floor(m L_i)` are pairwise distinct.
    pub fn is_m_proper(&self, m: &Q, budget: usize) -> Result<bool> {
        if !m.is_positive() {
            return Err(Error::InvalidParameter(format!("m must be positive, got {m}")));
        }
        let bounds = self.lengths.iter().map(|&l| floor_scaled(m, l)).collect::<Result<Vec<_>>>()?;
        let raw = raw_count(&bounds);
        if raw > budget as u128 {
            return Err(Error::BudgetExceeded { budget });
        }
        // Build stage by stage; a collision at any stage persists to the end
        // by taking the remaining exponents to be zero.
        let ctx = &self.context;
        let mut partial = vec![ctx.identity()];
        for (u, &b) in self.generators.iter().zip(&bounds) {
            let b = b as i64;
            let powers: Vec<GroupElement> = (-b..=b).map(|l| ctx.pow(u, l)).collect();
            let mut seen = HashSet::with_capacity(partial.len() * powers.len());
            for p in &partial {
                for x in &powers {
                    if !seen.insert(ctx.multiply(p, x)) {
                        return Ok(false);
                    }
                }
            }
            partial = seen.into_iter().collect();
        }
        Ok(true)
    }

    /// `P_ord(u; mL)` for a positive integer `m`.
    pub fn scaled(&self, m: u64) -> Self {
        OrderedProgression {
            context: self.context.clone(),
            generators: self.generators.clone(),
            lengths: self.lengths.iter().map(|&l| l * m).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InjectivityRadius {
    Exact(usize),
    AtLeast(usize),
}

impl fmt::Display for InjectivityRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InjectivityRadius::Exact(r) => write!(f, "{r}"),
            InjectivityRadius::AtLeast(r) => write!(f, ">= {r}"),
        }
    }
}

/// Largest `j <= r_max` such that the word map `u_i -> images[i]` is
/// injective on `P^j`, or `AtLeast(r_max)` when no collision appears.
///
/// Pairs `(source, image)` are grown together; a source reached with two
/// different images means the assignment does not extend to a homomorphism.
pub fn injectivity_radius(
    source: &OrderedProgression,
    target: &GroupContext,
    images: &[GroupElement],
    r_max: usize,
    budget: usize,
) -> Result<InjectivityRadius> {
    if images.len() != source.rank() {
        return Err(Error::DimensionMismatch { expected: source.rank(), got: images.len() });
    }
    let images = images
        .iter()
        .map(|g| target.check(g).map(|_| target.canonical(g.clone())))
        .collect::<Result<Vec<_>>>()?;
    let raw = raw_count(source.lengths());
    if raw > budget as u128 {
        return Err(Error::BudgetExceeded { budget });
    }
    let src_ctx = source.context();

    // Exponent tuples of P, mapped to both sides.
    let mut gens: Vec<(GroupElement, GroupElement)> = vec![(src_ctx.identity(), target.identity())];
    for ((u, y), &b) in source.generators().iter().zip(&images).zip(source.lengths()) {
        let b = b as i64;
        let powers: Vec<(GroupElement, GroupElement)> =
            (-b..=b).map(|l| (src_ctx.pow(u, l), target.pow(y, l))).collect();
        gens = gens
            .iter()
            .flat_map(|(p, q)| powers.iter().map(move |(x, z)| (src_ctx.multiply(p, x), target.multiply(q, z))))
            .collect();
    }

    let mut forward: HashMap<GroupElement, GroupElement> = HashMap::new();
    let mut backward: HashMap<GroupElement, GroupElement> = HashMap::new();
    let mut frontier: Vec<(GroupElement, GroupElement)> = Vec::new();
    let mut collided = false;
    let mut admit = |s: GroupElement, t: GroupElement, frontier: &mut Vec<_>, collided: &mut bool| -> Result<()> {
        match forward.entry(s.clone()) {
            Entry::Occupied(e) => {
                if *e.get() != t {
                    return Err(Error::NotHomomorphism);
                }
            }
            Entry::Vacant(e) => {
                e.insert(t.clone());
                match backward.entry(t.clone()) {
                    Entry::Occupied(_) => *collided = true,
                    Entry::Vacant(e) => {
                        e.insert(s.clone());
                    }
                }
                frontier.push((s, t));
            }
        }
        Ok(())
    };

    for (s, t) in gens.iter().cloned() {
        admit(s, t, &mut frontier, &mut collided)?;
    }
    if collided {
        return Ok(InjectivityRadius::Exact(0));
    }
    let mut total = frontier.len();
    for j in 2..=r_max {
        let mut prods: Vec<(GroupElement, GroupElement)> = frontier
            .par_iter()
            .flat_map_iter(|(p, q)| gens.iter().map(move |(x, z)| (src_ctx.multiply(p, x), target.multiply(q, z))))
            .collect();
        prods.par_sort_unstable();
        prods.dedup();
        let mut next = Vec::new();
        for (s, t) in prods {
            admit(s, t, &mut next, &mut collided)?;
        }
        total += next.len();
        if total > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        if collided {
            return Ok(InjectivityRadius::Exact(j - 1));
        }
        frontier = next;
    }
    Ok(InjectivityRadius::AtLeast(r_max))
}

/// Progression on a basis of a Lie algebra whose integer span is a Lie ring,
/// viewed inside the lattice group generated by `exp e_i`.
#[derive(Clone, Debug)]
pub struct LieProgression {
    algebra: LieAlgebra,
    lengths: Vec<u64>,
    c: Q,
    context: GroupContext,
}

impl LieProgression {
    /// Fails unless the lattice condition holds and `(e; L)` is
    /// `C`-upper-triangular.
    pub fn new(algebra: LieAlgebra, lengths: Vec<u64>, c: Q) -> Result<Self> {
        if lengths.len() != algebra.dim() {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), got: lengths.len() });
        }
        if let Some(i) = lengths.iter().position(|&l| l == 0) {
            return Err(Error::InvalidParameter(format!("length L_{} must be positive", i + 1)));
        }
        let context = GroupContext::lie_lattice(algebra.clone())?;
        let lq: Vec<Q> = lengths.iter().map(|&l| linalg::q(l as i64)).collect();
        if !algebra.upper_triangular_check(&lq, &c)? {
            return Err(Error::InvalidParameter(format!("basis is not upper-triangular at C = {c}")));
        }
        Ok(LieProgression { algebra, lengths, c, context })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn lengths(&self) -> &[u64] {
        &self.lengths
    }

    pub fn lengths_q(&self) -> Vec<Q> {
        self.lengths.iter().map(|&l| linalg::q(l as i64)).collect()
    }

    pub fn constant(&self) -> &Q {
        &self.c
    }

    pub fn context(&self) -> &GroupContext {
        &self.context
    }

    /// `P_ord(exp e_1, ..., exp e_d; L)` in the lattice group.
    pub fn ordered(&self) -> OrderedProgression {
        OrderedProgression {
            context: self.context.clone(),
            generators: self.context.standard_generators(),
            lengths: self.lengths.clone(),
        }
    }

    pub fn injectivity_radius(
        &self,
        target: &GroupContext,
        images: &[GroupElement],
        r_max: usize,
        budget: usize,
    ) -> Result<InjectivityRadius> {
        injectivity_radius(&self.ordered(), target, images, r_max, budget)
    }
}
