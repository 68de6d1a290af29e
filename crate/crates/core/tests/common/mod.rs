#![allow(dead_code)]

use std::collections::BTreeSet;

use nilgrowth::groups::{GroupContext, GroupElement};
use nilgrowth::lie_algebra::LieAlgebra;
use nilgrowth::linalg::{self, q, qr};
use nilgrowth::{LieBracket, Q};
use rand::Rng;

pub fn rand_q<R: Rng>(rng: &mut R, span: i64, max_den: i64) -> Q {
    qr(rng.gen_range(-span..=span), rng.gen_range(1..=max_den))
}

pub fn rand_vec<R: Rng>(rng: &mut R, n: usize, span: i64, max_den: i64) -> Vec<Q> {
    (0..n).map(|_| rand_q(rng, span, max_den)).collect()
}

/// `a ⊕ R^k`.
pub fn with_abelian(a: &LieAlgebra, k: usize) -> LieAlgebra {
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

/// Nilpotent algebras of dimension at most 6: free algebras, sums with
/// abelian factors, and their quotients by random central elements.
pub fn random_algebra<R: Rng>(rng: &mut R) -> LieAlgebra {
    let seeds = [
        LieAlgebra::heisenberg(),
        LieAlgebra::free(2, 3).unwrap(),
        LieAlgebra::free(3, 2).unwrap(),
        with_abelian(&LieAlgebra::heisenberg(), 2),
        with_abelian(&LieAlgebra::free(2, 3).unwrap(), 1),
        LieAlgebra::abelian(3),
    ];
    let mut a = seeds[rng.gen_range(0..seeds.len())].clone();
    for _ in 0..rng.gen_range(0..3) {
        if a.dim() <= 2 {
            break;
        }
        match random_central(rng, &a) {
            Some(u) => a = a.central_quotient(&u).unwrap(),
            None => break,
        }
    }
    a
}

/// A nonzero element of the center with small integer coordinates in a
/// basis of the center.
pub fn random_central<R: Rng>(rng: &mut R, a: &LieAlgebra) -> Option<Vec<Q>> {
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

/// `S^m` for `m = 0..=m_max` by materialising `S · S^{m-1}`.
pub fn naive_balls(ctx: &GroupContext, s: &[GroupElement], m_max: usize) -> Vec<u64> {
    let mut cur: BTreeSet<GroupElement> = BTreeSet::from([ctx.identity()]);
    let mut out = vec![1];
    for _ in 0..m_max {
        cur = s.iter().flat_map(|a| cur.iter().map(move |b| ctx.multiply(a, b))).collect();
        out.push(cur.len() as u64);
    }
    out
}

/// Brackets `[x, y]` evaluated on all basis pairs, for identity checks.
pub fn check_lie_identities<A: LieBracket>(a: &A) {
    let n = a.dim();
    let e = |i| linalg::unit(n, i);
    for i in 0..n {
        assert!(linalg::is_zero_vec(&a.bracket(&e(i), &e(i))));
        for j in 0..n {
            let ij = a.bracket(&e(i), &e(j));
            let ji = a.bracket(&e(j), &e(i));
            assert_eq!(ij, linalg::neg(&ji), "antisymmetry at ({i}, {j})");
            for k in 0..n {
                let t1 = a.bracket(&e(i), &a.bracket(&e(j), &e(k)));
                let t2 = a.bracket(&e(j), &a.bracket(&e(k), &e(i)));
                let t3 = a.bracket(&e(k), &a.bracket(&e(i), &e(j)));
                assert!(linalg::is_zero_vec(&linalg::add(&linalg::add(&t1, &t2), &t3)), "Jacobi at ({i}, {j}, {k})");
            }
        }
    }
}
