use lie_operad::golden;
use lie_operad::series::{
    a_recurrence, b_coefficients, b_recurrence, b_series, factorial, lagrange_coefficients, lie_series,
    ode_residual, ode_residual_of, sif_series, Series,
};
use lie_operad::sif::count_sif;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

#[test]
fn inverse_of_f_is_minus_b() {
    let f = lie_series(30);
    let inv = f.comp_inverse().unwrap();
    assert_eq!(inv, -&b_series(30));
    assert!(f.compose(&inv).unwrap().agrees_to(&Series::x(30), 30));
}

#[test]
fn differential_equation_vanishes_and_detects_changes() {
    assert!(ode_residual(60).is_zero());
    let mut coeffs = b_coefficients(20);
    coeffs[7] += 1;
    assert!(!ode_residual_of(&Series::from_integers(coeffs)).is_zero());
}

#[test]
fn sif_relation_to_sixty() {
    let a = a_recurrence(60);
    let series = sif_series(60).integer_coeffs().unwrap();
    assert_eq!(a, series);
    let b = b_coefficients(61);
    for n in 2..=60 {
        assert_eq!(BigInt::from(n as u64 - 1) * &a[n], BigInt::from(n as u64 + 1) * &b[n + 1] + &b[n]);
    }
}

#[test]
fn brute_force_sif_counts_match_the_series() {
    let a = sif_series(8).integer_coeffs().unwrap();
    for n in 0..=8 {
        let c = count_sif(n).unwrap();
        assert_eq!(c, BigUint::from(golden::a(n).unwrap()));
        assert_eq!(BigInt::from(c), a[n]);
    }
}

#[test]
fn callan_identity() {
    let coeffs = lagrange_coefficients(&sif_series(30), 30);
    for n in 1..=30 {
        assert_eq!(coeffs[n - 1], BigRational::from_integer(factorial(n as u64 - 1)), "n = {n}");
    }
}

#[test]
fn prime_counts_are_nonnegative_and_grow() {
    let b = b_recurrence(80);
    assert!(b.iter().all(|x| x.sign() != num_bigint::Sign::Minus));
    assert!(b.windows(2).skip(2).all(|w| w[0] < w[1]));
}
