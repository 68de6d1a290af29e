mod common;

use nilgrowth::lie_algebra::{marked_distance, LieAlgebra, MarkedLieAlgebra};
use nilgrowth::linalg::{self, q};
use nilgrowth::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn quotient_by_central_element_drops_xi() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 60 {
        let a = common::random_algebra(&mut rng);
        let Some(u) = common::random_central(&mut rng, &a) else { continue };
        let quotient = a.central_quotient(&u).unwrap();
        assert!(quotient.validate().is_ok());
        assert_eq!(
            quotient.homogeneous_dimension().unwrap() + a.xi_degree(&u).unwrap(),
            a.homogeneous_dimension().unwrap()
        );
        assert_eq!(quotient.dim() + 1, a.dim());
        checked += 1;
    }
}

#[test]
fn random_algebras_are_valid_and_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let a = common::random_algebra(&mut rng);
        assert!(a.dim() <= 6);
        assert!(a.validate().is_ok());
        common::check_lie_identities(&a);
        let back = LieAlgebra::from_json(&a.to_json()).unwrap();
        assert_eq!(back.to_json(), a.to_json());
        let lcs = a.lower_central_series().unwrap();
        assert_eq!(lcs.ranks.iter().sum::<usize>(), a.dim());
        assert!(lcs.ranks.iter().all(|&r| r > 0));
    }
}

#[test]
fn hdim_bounds() {
    // dim <= hdim <= step * dim, with equality on the left iff abelian.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..40 {
        let a = common::random_algebra(&mut rng);
        let h = a.homogeneous_dimension().unwrap();
        let s = a.step().unwrap();
        assert!(a.dim() <= h && h <= s.max(1) * a.dim());
        assert_eq!(h == a.dim(), a.is_abelian());
    }
}

#[test]
fn xi_of_noncentral_and_zero() {
    let h = LieAlgebra::heisenberg();
    assert_eq!(h.xi_degree(&[q(0), q(0), q(0)]), Err(Error::ZeroVector));
    assert_eq!(h.central_quotient(&[q(1), q(0), q(0)]).unwrap_err(), Error::NotCentral);
    assert_eq!(h.xi_degree(&[q(1), q(0), q(5)]).unwrap(), 1);
    assert_eq!(h.xi_degree(&[q(0), q(0), q(5)]).unwrap(), 2);
}

#[test]
fn marked_distance_is_a_symmetric_bracket() {
    let free = MarkedLieAlgebra::new(LieAlgebra::free(2, 2).unwrap(), vec![linalg::unit(3, 0), linalg::unit(3, 1)], 2).unwrap();
    let heis = MarkedLieAlgebra::new(LieAlgebra::heisenberg(), vec![linalg::unit(3, 0), linalg::unit(3, 1)], 2).unwrap();
    let ab = MarkedLieAlgebra::new(LieAlgebra::abelian(2), vec![linalg::unit(2, 0), linalg::unit(2, 1)], 2).unwrap();
    for (x, y) in [(&heis, &ab), (&ab, &heis), (&free, &heis)] {
        let d = marked_distance(x, y, 8).unwrap();
        let e = marked_distance(y, x, 8).unwrap();
        assert_eq!(d, e);
        if let Some(up) = &d.upper {
            assert!(d.lower <= *up && *up <= q(2));
        }
    }
    let same = marked_distance(&ab, &ab, 8).unwrap();
    assert_eq!((same.lower.clone(), same.upper.clone()), (q(0), Some(q(0))));
}
