mod common;

use common::*;
use matinv_degree::arith::field::Rationals;
use matinv_degree::arith::roots::max_root_modulus;
use matinv_degree::arith::upoly::UPoly;
use matinv_degree::picard::{
    delta, invariant_subspace_check, is_transpose_invariant, predicted_degrees, predicted_degrees_exact,
    pullback_matrix, pullback_matrix_with, restricted_block, AColumnRule, PicBasis, SignConvention,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

const NEG: SignConvention = SignConvention::AllNegative;

fn eps() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10).pow(14))
}

#[test]
fn determinant_is_a_unit() {
    for q in 3..=8 {
        let d = pullback_matrix(q, NEG).unwrap().det();
        assert!(d.abs().is_one(), "q = {q}: det = {d}");
    }
}

#[test]
fn restricted_block_matches_hand_derivation() {
    for q in 3..=8 {
        let m = restricted_block(q, NEG).unwrap();
        let hand = block_by_hand(q as i128);
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(m.get(r, c), &BigInt::from(hand[r][c]), "q = {q} ({r},{c})");
            }
        }
    }
}

#[test]
fn predicted_sequence_satisfies_recurrence() {
    for q in 3..=6 {
        let d: Vec<i128> = predicted_degrees_exact(q, 12, NEG)
            .unwrap()
            .iter()
            .map(|x| x.to_i128().unwrap())
            .collect();
        assert!(satisfies_recurrence(q, &d), "q = {q}: {d:?}");
        assert_eq!(d, degrees_by_hand(q, 12));
    }
}

#[test]
fn first_prediction_is_the_reduced_degree() {
    for q in 2..=8 {
        assert_eq!(predicted_degrees(q, 1, NEG).unwrap()[1].degree, (q * q - q + 1) as u128);
    }
}

#[test]
fn spectral_radius_is_the_root_of_the_quadratic() {
    for q in 3..=8 {
        let a = (q * q) as i64 - 4 * q as i64 + 2;
        let quad = UPoly::from_i64s(Rationals, &[1, -a, 1]);
        let root = max_root_modulus(&quad, &eps()).unwrap();
        let full = max_root_modulus(&pullback_matrix(q, NEG).unwrap().charpoly(), &eps()).unwrap();
        assert!(root.overlaps(&full), "q = {q}");
        let rep = delta(q, &eps()).unwrap();
        assert!(rep.agree);
        // Independent floating-point value of the larger root.
        let a = a as f64;
        let expect = if a * a >= 4.0 { (a + (a * a - 4.0).sqrt()) / 2.0 } else { 1.0 };
        assert!((rep.delta.approx() - expect).abs() < 1e-9, "q = {q}");
    }
}

#[test]
fn transpose_conjugation_fixes_the_matrix() {
    for q in 3..=6 {
        assert!(is_transpose_invariant(q, &pullback_matrix(q, NEG).unwrap()).unwrap());
        let un = pullback_matrix_with(q, NEG, AColumnRule::Untransposed).unwrap();
        assert!(is_transpose_invariant(q, &un).unwrap());
    }
}

/// Swapping the index set in the A-column rule while keeping the B term does
/// not give a conjugate matrix: the characteristic polynomials differ.
#[test]
fn swapping_only_the_index_set_changes_the_charpoly() {
    for q in 3..=5 {
        let base = pullback_matrix(q, NEG).unwrap().charpoly();
        let swapped = pullback_matrix_with(q, NEG, AColumnRule::IndexSetSwapped).unwrap().charpoly();
        assert_ne!(base, swapped, "q = {q}");
    }
}

#[test]
fn subspace_invariance_as_stated_and_corrected() {
    for q in 3..=5 {
        let r = invariant_subspace_check(q).unwrap();
        assert!(r.corrected_hold, "q = {q}");
        assert!(!r.as_stated_hold, "q = {q}");
    }
}

#[test]
fn basis_layout() {
    let b = PicBasis::new(4).unwrap();
    assert_eq!(b.dim(), 34);
    assert_eq!(b.a(1, 1).unwrap(), 2);
    assert_eq!(b.b(4, 4).unwrap(), 33);
    assert_eq!(pullback_matrix(6, NEG).unwrap().dim(), 74);
}
