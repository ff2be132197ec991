//! Density of the primes in `L(n)` and of SIF permutations, against the
//! three-term predictions
//!
//! ```text
//! e · bₙ/(n-1)!  ≈  1 - 3/n - 5/(2n²)
//! e · aₙ/n!      ≈  1 - 1/n - 5/(2n²)
//! ```
//!
//! Densities are exact rationals. `e` is a partial sum of `Σ 1/k!` whose tail
//! is bounded by `1/(K!·K)`, chosen below `10^-(digits+5)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::par::Exec;
use crate::series::b_coefficients;

pub const MIN_DIGITS: u32 = 20;

/// A rational lower bound for `e` with `value < e < value + tail_bound`.
#[derive(Debug, Clone)]
pub struct EApprox {
    pub value: BigRational,
    pub terms: u32,
    pub tail_bound: BigRational,
}

/// `Σ_{k=0}^{K} 1/k!` with the tail `Σ_{k>K} 1/k! < 1/(K!·K)` below `10^-(digits+5)`.
pub fn e_approx(digits: u32) -> EApprox {
    let target = BigInt::from(10u32).pow(digits + 5);
    let mut fact = BigInt::one();
    let mut sum = BigInt::one(); // Σ K!/k! for k = 0..=K, built incrementally
    let mut k = 0u32;
    loop {
        k += 1;
        fact *= k;
        sum = sum * k + 1u32;
        if &fact * k > target {
            break;
        }
    }
    EApprox {
        value: BigRational::new(sum, fact.clone()),
        terms: k + 1,
        tail_bound: BigRational::new(BigInt::one(), fact * k),
    }
}

/// Fixed-point decimal with `frac` digits after the point, rounded half away from zero.
pub fn to_decimal(x: &BigRational, frac: u32) -> String {
    let scale = BigInt::from(10u32).pow(frac);
    let scaled = (x * BigRational::from_integer(scale.clone())).round().to_integer();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let (int, rem) = scaled.abs().div_rem(&scale);
    if frac == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", rem.to_string(), width = frac as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityKind {
    /// `bₙ/(n-1)!`
    Prime,
    /// `aₙ/n!`
    Sif,
}

fn ratio_string<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub kind: DensityKind,
    pub n: usize,
    #[serde(serialize_with = "ratio_string")]
    pub p_n: BigRational,
    pub e_p_n: String,
    pub predicted: String,
    pub residual: String,
    /// `n³ · residual`
    pub scaled_residual: String,
    pub digits: u32,
    #[serde(skip)]
    residual_value: BigRational,
}

impl DensityReport {
    /// Residual as computed with the lower bound for `e`; off by less than `10^-(digits+5)`.
    pub fn residual_value(&self) -> &BigRational {
        &self.residual_value
    }

    pub fn scaled_residual_value(&self) -> BigRational {
        let n = BigRational::from_integer(BigInt::from(self.n));
        &self.residual_value * &n * &n * &n
    }
}

impl fmt::Display for DensityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self.kind {
            DensityKind::Prime => "b_n/(n-1)!",
            DensityKind::Sif => "a_n/n!",
        };
        let p = if self.p_n.numer().bits() + self.p_n.denom().bits() > 256 {
            format!("{} (exact rational, {} digit denominator)", to_decimal(&self.p_n, self.digits), self.p_n.denom().to_string().len())
        } else {
            self.p_n.to_string()
        };
        writeln!(f, "{:<16}{}", "kind", label)?;
        writeln!(f, "{:<16}{}", "n", self.n)?;
        writeln!(f, "{:<16}{}", "p_n", p)?;
        writeln!(f, "{:<16}{}", "e*p_n", self.e_p_n)?;
        writeln!(f, "{:<16}{}", "predicted", self.predicted)?;
        writeln!(f, "{:<16}{}", "residual", self.residual)?;
        writeln!(f, "{:<16}{}", "n^3*residual", self.scaled_residual)?;
        write!(f, "{:<16}{}", "digits", self.digits)
    }
}

/// Exact `bₙ` (and so `aₙ`) up to a maximum `n`, plus `e` at a fixed precision.
#[derive(Debug, Clone)]
pub struct DensityTable {
    b: Vec<BigInt>,
    e: EApprox,
    digits: u32,
}

impl DensityTable {
    pub fn new(max_n: usize, digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::Precision(digits));
        }
        Ok(DensityTable { b: b_coefficients(max_n + 1), e: e_approx(digits), digits })
    }

    pub fn max_n(&self) -> usize {
        self.b.len() - 2
    }

    pub fn e(&self) -> &EApprox {
        &self.e
    }

    fn check(&self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::Precondition("densities are reported for n >= 2".into()));
        }
        if n > self.max_n() {
            return Err(Error::Precondition(format!("table only reaches n = {}", self.max_n())));
        }
        Ok(())
    }

    /// `bₙ/(n-1)!`.
    pub fn prime_density(&self, n: usize) -> Result<BigRational> {
        self.check(n)?;
        Ok(BigRational::new(self.b[n].clone(), crate::series::factorial(n as u64 - 1)))
    }

    /// `aₙ/n!` with `(n-1)aₙ = (n+1)b_{n+1} + bₙ`.
    pub fn sif_density(&self, n: usize) -> Result<BigRational> {
        self.check(n)?;
        let a = (BigInt::from(n + 1) * &self.b[n + 1] + &self.b[n]) / BigInt::from(n - 1);
        Ok(BigRational::new(a, crate::series::factorial(n as u64)))
    }

    pub fn report(&self, kind: DensityKind, n: usize) -> Result<DensityReport> {
        let (p, c1) = match kind {
            DensityKind::Prime => (self.prime_density(n)?, 3),
            DensityKind::Sif => (self.sif_density(n)?, 1),
        };
        let nn = BigRational::from_integer(BigInt::from(n));
        let predicted = BigRational::one()
            - BigRational::from_integer(BigInt::from(c1)) / &nn
            - BigRational::new(BigInt::from(5), BigInt::from(2)) / (&nn * &nn);
        let e_p = &self.e.value * &p;
        let residual = &e_p - &predicted;
        let scaled = &residual * &nn * &nn * &nn;
        let d = self.digits;
        Ok(DensityReport {
            kind,
            n,
            e_p_n: to_decimal(&e_p, d),
            predicted: to_decimal(&predicted, d),
            residual: to_decimal(&residual, d),
            scaled_residual: to_decimal(&scaled, d),
            digits: d,
            p_n: p,
            residual_value: residual,
        })
    }

    pub fn reports(&self, kind: DensityKind, ns: &[usize], exec: Exec) -> Result<Vec<DensityReport>> {
        exec.map(ns, |&n| self.report(kind, n)).into_iter().collect()
    }
}

pub fn density(n: usize, digits: u32) -> Result<DensityReport> {
    DensityTable::new(n, digits)?.report(DensityKind::Prime, n)
}

pub fn sif_density(n: usize, digits: u32) -> Result<DensityReport> {
    DensityTable::new(n, digits)?.report(DensityKind::Sif, n)
}

/// `|r|` against a bound, both as exact rationals.
pub fn abs_le(x: &BigRational, bound: &BigRational) -> bool {
    x.abs() <= *bound
}
