use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qlattice::explorer::rho_meet_join_coeffs;
use qlattice::fix::{
    recover_from_vectors, recover_meet_join, transition, Direction, FixVectors, Variant,
};
use qlattice::grassmann::Grassmann;
use qlattice::ratmat::RatMatrix;
use qlattice::Representation;

const GRID: [(u32, usize, usize, usize); 4] = [(2, 7, 3, 2), (2, 9, 4, 2), (2, 9, 4, 3), (3, 7, 3, 2)];

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn full_coefficients_at_smallest_point() {
    let g = Grassmann::from_qnk(2, 7, 3).unwrap();
    let rep = Representation::for_grassmann(&g);
    let (x, y) = g.witness_pair(2, 0).unwrap();
    let rec = recover_meet_join(&g, &rep, &x, &y, Variant::Full).unwrap();
    assert_eq!(rec.meet_coeffs, vec![r(7, 4), r(1, 4), r(-1, 32), r(-1, 8)]);
    assert_eq!(rec.join_coeffs, vec![r(-9, 1), r(-3, 1), r(1, 8), r(3, 2)]);
}

#[test]
fn transitions_are_mutually_inverse() {
    for (q, n, k, i) in GRID {
        let g = Grassmann::from_qnk(q, n, k).unwrap();
        for v in Variant::ALL {
            let a = transition(Direction::GeoToComb, v, &g.params, i).unwrap().entries;
            let b = transition(Direction::CombToGeo, v, &g.params, i).unwrap().entries;
            assert!(a.mul(&b).unwrap().is_identity(), "({q},{n},{k},{i}) {}", v.name());
        }
    }
}

#[test]
fn imitation_coefficients_match_recovery() {
    for (q, n, k, i) in GRID {
        let g = Grassmann::from_qnk(q, n, k).unwrap();
        let rep = Representation::for_grassmann(&g);
        let (x, y) = g.witness_pair(i, 4).unwrap();
        let fv = FixVectors::compute(&g, &rep, &x, &y).unwrap();
        let rec = recover_from_vectors(&g.params, &fv, Variant::Full).unwrap();
        let (m, j) = rho_meet_join_coeffs(&g.params, i).unwrap();
        assert_eq!(rec.meet_coeffs, m.to_vec());
        assert_eq!(rec.join_coeffs, j.to_vec());
    }
}

#[test]
fn recovery_commutes_with_gl() {
    let g = Grassmann::from_qnk(2, 9, 4).unwrap();
    let rep = Representation::for_grassmann(&g);
    let sp = &g.space;
    let (x, y) = g.witness_pair(3, 21).unwrap();
    let sigma = sp.gl_random(99);
    let perm = sp.point_permutation(&sigma).unwrap();
    let (sx, sy) = (sp.gl_apply(&sigma, &x).unwrap(), sp.gl_apply(&sigma, &y).unwrap());
    for v in Variant::ALL {
        let a = recover_meet_join(&g, &rep, &x, &y, v).unwrap();
        let b = recover_meet_join(&g, &rep, &sx, &sy, v).unwrap();
        assert_eq!(a.meet_coeffs, b.meet_coeffs);
        assert_eq!(a.meet.permute(&perm).unwrap(), b.meet);
        assert_eq!(a.join.permute(&perm).unwrap(), b.join);
    }
}

#[test]
fn deferred_distances_are_rejected() {
    let g = Grassmann::from_qnk(2, 7, 3).unwrap();
    let rep = Representation::for_grassmann(&g);
    let sp = &g.space;
    let x = sp.coordinate_subspace(&[0, 1, 2]).unwrap();
    for idx in [[0, 1, 3], [3, 4, 5]] {
        let y = sp.coordinate_subspace(&idx).unwrap();
        assert!(recover_meet_join(&g, &rep, &x, &y, Variant::Full).is_err(), "{idx:?}");
    }
}

#[test]
fn coefficient_denominators_divide_determinant() {
    // every entry of comb->geo times det(geo->comb) is integral
    for (q, n, k, i) in GRID {
        let g = Grassmann::from_qnk(q, n, k).unwrap();
        let fwd = transition(Direction::GeoToComb, Variant::Full, &g.params, i).unwrap().entries;
        let det = fwd.det().unwrap();
        let back = transition(Direction::CombToGeo, Variant::Full, &g.params, i).unwrap().entries;
        let scaled: RatMatrix = back.scale(&det);
        assert!(scaled.is_integral(), "({q},{n},{k},{i})");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recovery_is_exact_for_random_pairs(seed in any::<u64>(), point in 0usize..4) {
        let (q, n, k, i) = GRID[point];
        let g = Grassmann::from_qnk(q, n, k).unwrap();
        let rep = Representation::for_grassmann(&g);
        let (x, y) = g.witness_pair(i, seed).unwrap();
        let meet = rep.hat(&g.space.meet(&x, &y).unwrap());
        let join = rep.hat(&g.space.join(&x, &y).unwrap());
        for v in Variant::ALL {
            let rec = recover_meet_join(&g, &rep, &x, &y, v).unwrap();
            prop_assert_eq!(&rec.meet, &meet);
            prop_assert_eq!(&rec.join, &join);
        }
    }
}
