//! Truncated formal power series with exact rational coefficients, and the
//! generating functions of `L`, of its primes and of SIF permutations.
//!
//! * `F(x) = Σ (n-1)! xⁿ` counts `L(n)`.
//! * `B(x) = -x + Σ bₙ xⁿ` with `bₙ = |P(n)|` satisfies `B = -F⁽⁻¹⁾`.
//! * `A(x) = -x / B(x)` counts stabilized-interval-free permutations.

use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Coefficients of degrees `0..=order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<BigRational>,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl Series {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series keeps at least its constant term");
        Series { coeffs }
    }

    pub fn from_integers<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Series::new(coeffs.into_iter().map(rat).collect())
    }

    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// The identity series `x`.
    pub fn x(order: usize) -> Self {
        let mut s = Series::zero(order);
        if order >= 1 {
            s.coeffs[1] = BigRational::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficients as integers, if they all are.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Series {
        let mut coeffs: Vec<BigRational> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, BigRational::zero());
        Series { coeffs }
    }

    /// Equal in every degree up to `order`. Both series must reach `order`.
    pub fn agrees_to(&self, other: &Series, order: usize) -> bool {
        order <= self.order() && order <= other.order() && self.coeffs[..=order] == other.coeffs[..=order]
    }

    pub fn scale(&self, k: &BigRational) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Series { coeffs }
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut out = Series::one(self.order());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `d/dx`, one order shorter.
    pub fn derivative(&self) -> Series {
        if self.order() == 0 {
            return Series::zero(0);
        }
        Series {
            coeffs: self.coeffs.iter().enumerate().skip(1).map(|(n, c)| c * rat(n as u64)).collect(),
        }
    }

    /// `f(x) / x`, one order shorter. Requires `f(0) = 0`.
    pub fn div_x(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition("division by x needs a zero constant term".into()));
        }
        if self.order() == 0 {
            return Ok(Series::zero(0));
        }
        Ok(Series { coeffs: self.coeffs[1..].to_vec() })
    }

    /// `x·f(x)`, one order longer.
    pub fn mul_x(&self) -> Series {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigRational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Series { coeffs }
    }

    /// `1 / f`. Requires an invertible constant term.
    pub fn reciprocal(&self) -> Result<Series> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::Precondition("reciprocal needs a nonzero constant term".into()));
        }
        let inv0 = a0.recip();
        let mut out: Vec<BigRational> = vec![inv0.clone()];
        for n in 1..=self.order() {
            let mut s = BigRational::zero();
            for k in 1..=n {
                s += &self.coeffs[k] * &out[n - k];
            }
            out.push(-s * &inv0);
        }
        Ok(Series { coeffs: out })
    }

    /// `self(inner(x))`. Requires `inner(0) = 0`; valid to the smaller order.
    pub fn compose(&self, inner: &Series) -> Result<Series> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Precondition("composition needs an inner series without constant term".into()));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        // Horner from the top degree; degree-d terms of self only matter to order
        let mut acc = Series::zero(order);
        for c in self.coeffs[..=order].iter().rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// The unique `g` with `self(g(x)) = x` to this order, by Newton iteration
    /// `g ← g - (f(g) - x) / f'(g)`. Requires `f(0) = 0` and `f'(0) ≠ 0`.
    pub fn comp_inverse(&self) -> Result<Series> {
        let order = self.order();
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition("inversion needs a zero constant term".into()));
        }
        if order == 0 {
            return Ok(Series::zero(0));
        }
        let a1 = &self.coeffs[1];
        if a1.is_zero() {
            return Err(Error::Precondition("inversion needs an invertible linear coefficient".into()));
        }
        let x = Series::x(order);
        // The top coefficient of f' is padded with zero: f(g) - x has no terms
        // below degree 2, so the padding never reaches degree `order`.
        let df = self.derivative().truncate(order);
        let mut g = x.scale(&a1.recip());
        // correct to degree 1; each step doubles the correct prefix
        let mut correct = 1;
        while correct < order {
            let err = &self.compose(&g)? - &x;
            let slope = df.compose(&g)?.reciprocal()?;
            g = &g - &err.mul(&slope);
            correct = 2 * correct + 1;
        }
        Ok(g)
    }
}

impl Add for &Series {
    type Output = Series;

    fn add(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        Series { coeffs: (0..=order).map(|n| &self.coeffs[n] + &rhs.coeffs[n]).collect() }
    }
}

impl Sub for &Series {
    type Output = Series;

    fn sub(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        Series { coeffs: (0..=order).map(|n| &self.coeffs[n] - &rhs.coeffs[n]).collect() }
    }
}

impl Neg for &Series {
    type Output = Series;

    fn neg(self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `F(x) = Σ_{n≥1} (n-1)! xⁿ`.
pub fn lie_series(order: usize) -> Series {
    Series::from_integers((0..=order).map(|n| if n == 0 { BigInt::zero() } else { factorial(n as u64 - 1) }))
}

/// `b₀..b_order` with `b₀ = 0`, `b₁ = -1`, `b₂ = 1` and
/// `bₙ = Σ_{k=2}^{n-2} ((k+1)b_{k+1} + b_k) b_{n-k}` for `n ≥ 3`.
pub fn b_coefficients(order: usize) -> Vec<BigInt> {
    let mut b: Vec<BigInt> = vec![BigInt::zero(), BigInt::from(-1), BigInt::one()];
    b.truncate(order + 1);
    // weights[k] = (k+1) b_{k+1} + b_k, filled once b_{k+1} is known
    let mut weights: Vec<BigInt> = vec![BigInt::zero(); order.max(2) + 1];
    for n in 3..=order {
        weights[n - 2] = BigInt::from(n as u64 - 1) * &b[n - 1] + &b[n - 2];
        let mut s = BigInt::zero();
        for k in 2..=n - 2 {
            if !b[n - k].is_zero() {
                s += &weights[k] * &b[n - k];
            }
        }
        b.push(s);
    }
    b
}

/// `b₂..b_order`.
pub fn b_recurrence(order: usize) -> Vec<BigInt> {
    b_coefficients(order).into_iter().skip(2).collect()
}

/// `B(x) = -x + Σ bₙ xⁿ` from the recurrence.
pub fn b_series(order: usize) -> Series {
    Series::from_integers(b_coefficients(order))
}

/// `x B' + (B' + B) B`, one order shorter than `b`.
pub fn ode_residual_of(b: &Series) -> Series {
    let db = b.derivative();
    let lhs = db.mul_x().truncate(db.order());
    let rhs = (&db + b).mul(b);
    &lhs + &rhs
}

/// The differential-equation residual of the recurrence's `B`, to `order`.
pub fn ode_residual(order: usize) -> Series {
    ode_residual_of(&b_series(order + 1))
}

/// `A(x) = -x / B(x) = 1 / (-B(x)/x)` to `order`.
pub fn sif_series(order: usize) -> Series {
    let minus_b_over_x = (-&b_series(order + 1)).div_x().expect("B(0) = 0");
    minus_b_over_x.reciprocal().expect("-B(x)/x starts with 1")
}

/// `a₀..a_order` from `a₀ = a₁ = 1` and `(n-1)aₙ = (n+1)b_{n+1} + bₙ` for `n ≥ 2`.
pub fn a_recurrence(order: usize) -> Vec<BigInt> {
    let b = b_coefficients(order + 1);
    let mut a = vec![BigInt::one(); 2.min(order + 1)];
    for n in 2..=order {
        let num = BigInt::from(n as u64 + 1) * &b[n + 1] + &b[n];
        let (q, r) = num.div_rem(&BigInt::from(n as u64 - 1));
        assert!(r.is_zero(), "(n-1) divides (n+1)b_(n+1) + b_n at n = {n}");
        a.push(q);
    }
    a
}

/// `(1/n) [x^(n-1)] A(x)ⁿ` for `n = 1..=max_n`, indexed by `n - 1`.
pub fn lagrange_coefficients(a: &Series, max_n: usize) -> Vec<BigRational> {
    let order = max_n.saturating_sub(1).min(a.order());
    let a = a.truncate(order);
    let mut power = Series::one(order);
    let mut out = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        power = power.mul(&a);
        out.push(power.coeff(n - 1) / rat(n as u64));
    }
    out
}

/// The generating identity `β(α(x)) + x = α(x)` for a free operad with
/// generator series `beta` and element series `alpha`, checked to `order`.
pub fn free_operad_identity_holds(alpha: &Series, beta: &Series, order: usize) -> Result<bool> {
    let lhs = &beta.compose(alpha)? + &Series::x(order);
    Ok(lhs.agrees_to(alpha, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &Series) -> Vec<i64> {
        s.integer_coeffs().unwrap().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    /// Coefficient-by-coefficient inversion: g_n solves [xⁿ] f(g) = 0.
    fn inverse_by_coefficients(f: &Series) -> Series {
        let order = f.order();
        let mut g = Series::x(order).scale(&f.coeff(1).recip());
        for n in 2..=order {
            let c = f.compose(&g).unwrap().coeff(n).clone();
            let mut coeffs = g.coeffs().to_vec();
            coeffs[n] = -c / f.coeff(1);
            g = Series::new(coeffs);
        }
        g
    }

    #[test]
    fn lie_series_factorials() {
        let f = lie_series(10);
        assert_eq!(&ints(&f)[..5], &[0, 1, 1, 2, 6]);
        assert_eq!(f.coeff(10), &rat(362880));
    }

    #[test]
    fn b_values() {
        let expected = [1, 0, 1, 4, 22, 144, 1089, 9308, 88562];
        let got: Vec<i64> = b_recurrence(10).iter().map(|c| i64::try_from(c).unwrap()).collect();
        assert_eq!(got, expected);
        // b5 = (3b3 + b2) b3 + (4b4 + b3) b2
        assert_eq!(b_coefficients(5)[5], BigInt::from(4));
        assert!(b_recurrence(2) == vec![BigInt::one()]);
    }

    #[test]
    fn inverse_of_identity() {
        assert_eq!(Series::x(12).comp_inverse().unwrap(), Series::x(12));
    }

    #[test]
    fn inverse_of_f_is_minus_b() {
        let g = lie_series(20).comp_inverse().unwrap();
        assert_eq!(g, -&b_series(20));
        assert_eq!(g, inverse_by_coefficients(&lie_series(20)));
    }

    #[test]
    fn inverse_with_nonunit_slope() {
        let f = Series::from_integers([0, 2, 3, -1, 5, 0, 7]);
        let g = f.comp_inverse().unwrap();
        assert!(f.compose(&g).unwrap().agrees_to(&Series::x(6), 6));
        assert_eq!(g, inverse_by_coefficients(&f));
    }

    #[test]
    fn preconditions() {
        let c = Series::from_integers([1, 1, 0]);
        assert!(c.comp_inverse().is_err());
        assert!(Series::from_integers([0, 0, 1]).comp_inverse().is_err());
        assert!(Series::x(3).compose(&c).is_err());
        assert!(Series::x(3).reciprocal().is_err());
        assert!(c.div_x().is_err());
    }

    #[test]
    fn ode_holds_and_detects_perturbation() {
        assert!(ode_residual(50).is_zero());
        let mut b = b_coefficients(11);
        b[6] += 1;
        let r = ode_residual_of(&Series::from_integers(b));
        assert!(r.coeffs()[..6].iter().all(Zero::is_zero));
        assert!(!r.coeff(6).is_zero());
    }

    #[test]
    fn sif_values() {
        assert_eq!(&ints(&sif_series(8)), &[1, 1, 1, 2, 7, 34, 206, 1476, 12123]);
        let a = a_recurrence(30);
        assert_eq!(sif_series(30).integer_coeffs().unwrap(), a);
        assert_eq!(a[4], BigInt::from(7));
    }

    #[test]
    fn callan_identity() {
        let coeffs = lagrange_coefficients(&sif_series(25), 25);
        for n in 2..=25 {
            assert_eq!(coeffs[n - 1], rat(factorial(n as u64 - 1)), "n = {n}");
        }
    }

    #[test]
    fn free_operad_generating_identity() {
        let alpha = lie_series(25);
        let beta = &b_series(25) + &Series::x(25);
        assert!(free_operad_identity_holds(&alpha, &beta, 25).unwrap());
        let wrong = &beta + &Series::x(25).pow(4);
        assert!(!free_operad_identity_holds(&alpha, &wrong, 25).unwrap());
    }

    #[test]
    fn arithmetic_truncates_to_smaller_order() {
        let a = Series::from_integers([1, 2, 3]);
        let b = Series::from_integers([1, 1]);
        assert_eq!((&a + &b).order(), 1);
        assert_eq!(a.mul(&b), Series::from_integers([1, 3]));
        assert_eq!(a.derivative(), Series::from_integers([2, 6]));
        assert_eq!(a.truncate(4).order(), 4);
    }
}
