//! The full self-check: ten numbered checks covering enumeration, freeness,
//! the operad axioms, the series identities, SIF counts, densities and Lie
//! normalization. Random inputs come from a seeded ChaCha stream and are
//! drawn sequentially, so reports do not depend on the execution strategy.

use std::fmt;
use std::time::Instant;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::density::{to_decimal, DensityKind, DensityTable};
use crate::enumerate::{count_l_with, count_p_with, enumerate_l_with, EnumConfig};
use crate::error::Result;
use crate::expr::{compose, is_in_l, Expr};
use crate::free::{compose_free, decompose, tree_compose, tree_of, FreeElement};
use crate::golden;
use crate::lie::{evaluate, IntMatrix, LinComb, Normalizer};
use crate::par::Exec;
use crate::random::{all_bracketings, random_bracketing, random_free, random_l, random_word};
use crate::series::{
    a_recurrence, b_recurrence, b_series, factorial, free_operad_identity_holds, lagrange_coefficients,
    lie_series, ode_residual, sif_series, Series,
};
use crate::sif::{count_sif_with, SifConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    /// Order of the inversion and free-operad identities.
    pub order: usize,
    /// Order of the differential equation, `A·(-B) = x` and the inverse coefficients.
    pub long_order: usize,
    pub callan_max_n: usize,
    pub cardinality_max_n: usize,
    pub cardinality_budget_secs: f64,
    pub prime_max_n: usize,
    pub round_trip_max_n: usize,
    pub free_samples: usize,
    pub free_max_width: usize,
    pub operad_samples: usize,
    pub operad_max_n: usize,
    pub tree_samples: usize,
    pub sif_max_n: usize,
    pub sif_recurrence_max_n: usize,
    pub density_reference_n: usize,
    pub density_ns: Vec<usize>,
    pub digits: u32,
    pub fixed_max_n: usize,
    pub kernel_samples: usize,
    pub kernel_max_n: usize,
    pub eval_samples: usize,
    pub eval_max_n: usize,
    pub matrix_dim: usize,
    pub matrix_bound: i128,
    pub rank_max_n: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig::from_flags(25, 8, 50)
    }
}

impl VerifyConfig {
    /// `order` drives the short series checks and Callan (the long ones use
    /// `2·order`), `max_n` is the exhaustive round-trip size (cardinality goes
    /// one further, prime counts two), and `digits` is the precision of `e`.
    pub fn from_flags(order: usize, max_n: usize, digits: u32) -> Self {
        VerifyConfig {
            order,
            long_order: 2 * order,
            callan_max_n: order,
            cardinality_max_n: max_n + 1,
            cardinality_budget_secs: 10.0,
            prime_max_n: max_n + 2,
            round_trip_max_n: max_n,
            free_samples: 1000,
            free_max_width: 10,
            operad_samples: 1000,
            operad_max_n: 6,
            tree_samples: 500,
            sif_max_n: 8,
            sif_recurrence_max_n: 60,
            density_reference_n: 50,
            density_ns: vec![100, 200, 400, 800],
            digits,
            fixed_max_n: 7,
            kernel_samples: 500,
            kernel_max_n: 8,
            eval_samples: 100,
            eval_max_n: 7,
            matrix_dim: 5,
            matrix_bound: 3,
            rank_max_n: 5,
            seed: 1729,
            exec: Exec::default(),
        }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn enum_config(&self) -> EnumConfig {
        let max_n = self.cardinality_max_n.max(self.prime_max_n).max(self.round_trip_max_n);
        EnumConfig { max_n, exec: self.exec }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} [{:>2}] {:<22} {} ({:.2}s)", self.id, self.name, self.detail, self.seconds)
    }
}

/// Scaled density residuals and the bound they are held to.
#[derive(Debug, Clone, Serialize)]
pub struct DensityConstants {
    pub kind: DensityKind,
    pub reference_n: usize,
    /// `|r_ref| · ref³`
    pub reference: String,
    /// `2 · |r_ref| · ref³`
    pub bound: String,
    /// `(n, |rₙ| · n³)`
    pub scaled: Vec<(usize, String)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckReport>,
    pub density: Vec<DensityConstants>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        for d in &self.density {
            let kind = match d.kind {
                DensityKind::Prime => "prime",
                DensityKind::Sif => "sif",
            };
            writeln!(f, "density {kind}: |r_{}|·{}³ = {}, bound {}", d.reference_n, d.reference_n, d.reference, d.bound)?;
            for (n, s) in &d.scaled {
                writeln!(f, "  n = {n:<4} |r_n|·n³ = {s}")?;
            }
        }
        let total = self.checks.len();
        let ok = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "{ok}/{total} checks passed")
    }
}

type Outcome = Result<(bool, String)>;

fn timed(id: u8, name: &'static str, body: impl FnOnce() -> Outcome) -> CheckReport {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckReport { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

/// Runs `f` on every item; the first failure message in input order, if any.
fn first_failure<T, F>(exec: Exec, items: &[T], f: F) -> Option<String>
where
    T: Sync,
    F: Fn(&T) -> Option<String> + Sync + Send,
{
    exec.map(items, f).into_iter().flatten().next()
}

fn verdict(failure: Option<String>, ok: String) -> (bool, String) {
    match failure {
        None => (true, ok),
        Some(why) => (false, why),
    }
}

pub fn check_cardinality(cfg: &VerifyConfig) -> Outcome {
    let ec = cfg.enum_config();
    let start = Instant::now();
    for n in 2..=cfg.cardinality_max_n {
        let got = count_l_with(n, &ec)?;
        let want = factorial(n as u64 - 1);
        if BigInt::from(got.clone()) != want {
            return Ok((false, format!("|L({n})| = {got}, expected {want}")));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let within = secs <= cfg.cardinality_budget_secs;
    let detail = format!(
        "|L(n)| = (n-1)! for 2 <= n <= {} in {secs:.2}s (budget {}s)",
        cfg.cardinality_max_n, cfg.cardinality_budget_secs
    );
    Ok((within, detail))
}

pub fn check_prime_counts(cfg: &VerifyConfig) -> Outcome {
    let ec = cfg.enum_config();
    let rec = b_recurrence(cfg.prime_max_n);
    for n in 2..=cfg.prime_max_n {
        let counted = BigInt::from(count_p_with(n, &ec)?);
        if counted != rec[n - 2] {
            return Ok((false, format!("|P({n})| = {counted} but the recurrence gives {}", rec[n - 2])));
        }
        if let Some(g) = golden::b(n) {
            if counted != BigInt::from(g) {
                return Ok((false, format!("|P({n})| = {counted} but the reference value is {g}")));
            }
        }
    }
    let shown = rec.iter().map(BigInt::to_string).join(", ");
    Ok((true, format!("b_2..b_{} = {shown}", cfg.prime_max_n)))
}

pub fn check_round_trip(cfg: &VerifyConfig) -> Outcome {
    let ec = cfg.enum_config();
    let mut total = 0usize;
    for n in 2..=cfg.round_trip_max_n {
        let words = enumerate_l_with(n, &ec)?;
        total += words.len();
        let bad = first_failure(cfg.exec, &words, |w| match decompose(w).and_then(|f| compose_free(&f)) {
            Ok(back) if &back == w => None,
            Ok(back) => Some(format!("theta(psi({w})) = {back}")),
            Err(e) => Some(format!("{w}: {e}")),
        });
        if let Some(why) = bad {
            return Ok((false, why));
        }
    }
    let mut rng = cfg.rng(3);
    let samples: Vec<FreeElement> =
        (0..cfg.free_samples).map(|_| random_free(rng.gen_range(1..=cfg.free_max_width), &mut rng)).collect();
    let bad = first_failure(cfg.exec, &samples, |f| match compose_free(f).and_then(|e| decompose(&e)) {
        Ok(back) if &back == f => None,
        Ok(back) => Some(format!("psi(theta(f)) differs: {} vs {}", back.to_json(), f.to_json())),
        Err(e) => Some(format!("{}: {e}", f.to_json())),
    });
    Ok(verdict(
        bad,
        format!(
            "{total} words of L(2..={}) and {} free elements of width <= {}",
            cfg.round_trip_max_n, cfg.free_samples, cfg.free_max_width
        ),
    ))
}

fn operad_axioms(a: &Expr, b: &Expr, c: &Expr, i: usize, j: usize, i2: usize) -> Result<Option<String>> {
    let (m, k) = (a.arity()?, b.arity()?);
    let unit = Expr::unit();
    if compose(a, i, &unit)? != *a || compose(&unit, 1, a)? != *a {
        return Ok(Some(format!("unit law fails for {a}")));
    }
    let ab = compose(a, i, b)?;
    if !is_in_l(&ab)? {
        return Ok(Some(format!("{a} o_{i} {b} = {ab} is not in L")));
    }
    let lhs = compose(&ab, i + j - 1, c)?;
    let rhs = compose(a, i, &compose(b, j, c)?)?;
    if lhs != rhs {
        return Ok(Some(format!("sequential associativity fails for {a}, {b}, {c} at {i}, {j}")));
    }
    if m >= 2 {
        let (p, q) = (i.min(i2), i.max(i2));
        if p != q {
            let lhs = compose(&compose(a, q, c)?, p, b)?;
            let rhs = compose(&compose(a, p, b)?, q + k - 1, c)?;
            if lhs != rhs {
                return Ok(Some(format!("parallel associativity fails for {a}, {b}, {c} at {p}, {q}")));
            }
        }
    }
    Ok(None)
}

pub fn check_operad_axioms(cfg: &VerifyConfig) -> Outcome {
    let mut rng = cfg.rng(4);
    let max = cfg.operad_max_n;
    let triples: Vec<_> = (0..cfg.operad_samples)
        .map(|_| {
            let a = random_l(rng.gen_range(1..=max), &mut rng);
            let b = random_l(rng.gen_range(1..=max), &mut rng);
            let c = random_l(rng.gen_range(1..=max), &mut rng);
            let m = a.leaf_count();
            let (i, i2, j) = (rng.gen_range(1..=m), rng.gen_range(1..=m), rng.gen_range(1..=b.leaf_count()));
            (a, b, c, i, j, i2)
        })
        .collect();
    let bad = first_failure(cfg.exec, &triples, |(a, b, c, i, j, i2)| {
        operad_axioms(a, b, c, *i, *j, *i2).unwrap_or_else(|e| Some(e.to_string()))
    });
    Ok(verdict(bad, format!("{} random triples of arity <= {max}", cfg.operad_samples)))
}

pub fn check_tree_compatibility(cfg: &VerifyConfig) -> Outcome {
    let mut rng = cfg.rng(5);
    let max = cfg.operad_max_n;
    let pairs: Vec<_> = (0..cfg.tree_samples)
        .map(|_| {
            let a = random_l(rng.gen_range(1..=max), &mut rng);
            let b = random_l(rng.gen_range(1..=max), &mut rng);
            let i = rng.gen_range(1..=a.leaf_count());
            (a, i, b)
        })
        .collect();
    let bad = first_failure(cfg.exec, &pairs, |(a, i, b)| {
        let run = || -> Result<bool> {
            Ok(tree_of(&compose(a, *i, b)?)? == tree_compose(&tree_of(a)?, *i, &tree_of(b)?)?)
        };
        match run() {
            Ok(true) => None,
            Ok(false) => Some(format!("tree of {a} o_{i} {b} is not the composite tree")),
            Err(e) => Some(e.to_string()),
        }
    });
    Ok(verdict(bad, format!("{} random pairs", cfg.tree_samples)))
}

pub fn check_series(cfg: &VerifyConfig) -> Outcome {
    let (n, long) = (cfg.order, cfg.long_order);
    let x = Series::x(n);
    let f = lie_series(n);
    let minus_b = -&b_series(n);
    if !(-&b_series(n).compose(&f)?).agrees_to(&x, n) {
        return Ok((false, format!("-B(F(x)) != x to order {n}")));
    }
    if !f.compose(&minus_b)?.agrees_to(&x, n) {
        return Ok((false, format!("F(-B(x)) != x to order {n}")));
    }
    let beta = &b_series(n) + &x;
    if !free_operad_identity_holds(&f, &beta, n)? {
        return Ok((false, format!("beta(alpha) + x != alpha to order {n}")));
    }
    let residual = ode_residual(long);
    if !residual.is_zero() {
        return Ok((false, format!("differential equation residual is nonzero to order {long}")));
    }
    let a = sif_series(long);
    if !a.mul(&-&b_series(long)).agrees_to(&Series::x(long), long) {
        return Ok((false, format!("A·(-B) != x to order {long}")));
    }
    let inv = lie_series(long).comp_inverse()?;
    let rec = b_recurrence(long);
    for (k, b) in rec.iter().enumerate() {
        let deg = k + 2;
        if -inv.coeff(deg) != BigRational::from_integer(b.clone()) {
            return Ok((false, format!("coefficient {deg} of -F^(-1) is not b_{deg}")));
        }
    }
    Ok((true, format!("inversions and free identity to order {n}; ODE, A·(-B) = x and -F^(-1) = B to order {long}")))
}

pub fn check_callan(cfg: &VerifyConfig) -> Outcome {
    let max = cfg.callan_max_n;
    let coeffs = lagrange_coefficients(&sif_series(max), max);
    for n in 2..=max {
        let want = BigRational::from_integer(factorial(n as u64 - 1));
        if coeffs[n - 1] != want {
            return Ok((false, format!("(1/{n})[x^{}]A^{n} = {}, expected {want}", n - 1, coeffs[n - 1])));
        }
    }
    Ok((true, format!("(1/n)[x^(n-1)]A(x)^n = (n-1)! for 2 <= n <= {max}")))
}

pub fn check_sif(cfg: &VerifyConfig) -> Outcome {
    let sc = SifConfig { max_n: cfg.sif_max_n.max(crate::sif::DEFAULT_MAX_N), exec: cfg.exec };
    let mut counts = Vec::new();
    for n in 0..=cfg.sif_max_n {
        let c = count_sif_with(n, &sc)?;
        if let Some(g) = golden::a(n) {
            if c != BigUint::from(g) {
                return Ok((false, format!("a_{n} = {c} by search, reference {g}")));
            }
        }
        counts.push(c);
    }
    let max = cfg.sif_recurrence_max_n;
    let b = crate::series::b_coefficients(max + 1);
    let a = sif_series(max).integer_coeffs().ok_or_else(|| {
        crate::Error::Precondition("A(x) has a non-integer coefficient".into())
    })?;
    if a_recurrence(max) != a {
        return Ok((false, "a_n from the recurrence differ from the coefficients of -x/B".into()));
    }
    for n in 2..=max {
        if BigInt::from(n as u64 - 1) * &a[n] != BigInt::from(n as u64 + 1) * &b[n + 1] + &b[n] {
            return Ok((false, format!("(n-1)a_n != (n+1)b_(n+1) + b_n at n = {n}")));
        }
    }
    for (n, c) in counts.iter().enumerate() {
        if BigInt::from(c.clone()) != a[n] {
            return Ok((false, format!("a_{n} = {c} by search but {} from the series", a[n])));
        }
    }
    let shown = counts.iter().map(BigUint::to_string).join(", ");
    Ok((true, format!("a_0..a_{} = {shown}; recurrence exact for 2 <= n <= {max}", cfg.sif_max_n)))
}

/// Density bounds plus the constants they were checked against.
pub fn density_constants(cfg: &VerifyConfig) -> Result<Vec<DensityConstants>> {
    let top = cfg.density_ns.iter().copied().chain([cfg.density_reference_n]).max().unwrap_or(2);
    let table = DensityTable::new(top, cfg.digits)?;
    let mut out = Vec::new();
    for kind in [DensityKind::Prime, DensityKind::Sif] {
        let reference = table.report(kind, cfg.density_reference_n)?.scaled_residual_value().abs();
        let bound = &reference * BigRational::from_integer(BigInt::from(2));
        let scaled = table
            .reports(kind, &cfg.density_ns, cfg.exec)?
            .into_iter()
            .map(|r| (r.n, r.scaled_residual_value().abs()))
            .collect::<Vec<_>>();
        out.push((kind, reference, bound, scaled));
    }
    let d = cfg.digits.min(12);
    Ok(out
        .into_iter()
        .map(|(kind, reference, bound, scaled)| DensityConstants {
            kind,
            reference_n: cfg.density_reference_n,
            reference: to_decimal(&reference, d),
            bound: to_decimal(&bound, d),
            scaled: scaled.iter().map(|(n, s)| (*n, to_decimal(s, d))).collect(),
        })
        .collect())
}

pub fn check_density(cfg: &VerifyConfig) -> Outcome {
    let top = cfg.density_ns.iter().copied().chain([cfg.density_reference_n]).max().unwrap_or(2);
    let table = DensityTable::new(top, cfg.digits)?;
    let two = BigRational::from_integer(BigInt::from(2));
    let mut parts = Vec::new();
    for kind in [DensityKind::Prime, DensityKind::Sif] {
        let bound = table.report(kind, cfg.density_reference_n)?.scaled_residual_value().abs() * &two;
        for r in table.reports(kind, &cfg.density_ns, cfg.exec)? {
            let s = r.scaled_residual_value().abs();
            if s > bound {
                return Ok((
                    false,
                    format!("{kind:?} n = {}: |r_n|·n³ = {} exceeds {}", r.n, to_decimal(&s, 6), to_decimal(&bound, 6)),
                ));
            }
        }
        parts.push(format!("{kind:?} bound {}", to_decimal(&bound, 3)));
    }
    Ok((
        true,
        format!(
            "|r_n|·n³ <= 2·|r_{}|·{}³ at n = {:?} ({})",
            cfg.density_reference_n,
            cfg.density_reference_n,
            cfg.density_ns,
            parts.join(", ")
        ),
    ))
}

/// Shuffle `1..=n` and cut it into `parts` non-empty random bracketings.
fn random_blocks<R: Rng + ?Sized>(n: usize, parts: usize, rng: &mut R) -> Vec<Expr> {
    let mut leaves: Vec<u32> = (1..=n as u32).collect();
    leaves.shuffle(rng);
    let mut cuts = rand::seq::index::sample(rng, n - 1, parts - 1).into_vec();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().map(|c| c + 1).chain([n]) {
        out.push(random_bracketing(&leaves[prev..c], rng));
        prev = c;
    }
    out
}

fn kernel_instance<R: Rng + ?Sized>(k: usize, max_n: usize, rng: &mut R) -> Result<LinComb> {
    let br = |a: &Expr, b: &Expr| Expr::bracket(a.clone(), b.clone());
    let one = BigInt::one;
    if k.is_multiple_of(2) {
        let n = rng.gen_range(2..=max_n);
        let v = random_blocks(n, 2, rng);
        LinComb::from_terms(n, [(br(&v[0], &v[1]), one()), (br(&v[1], &v[0]), one())])
    } else {
        let n = rng.gen_range(3..=max_n);
        let v = random_blocks(n, 3, rng);
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        LinComb::from_terms(
            n,
            [(br(&br(a, b), c), one()), (br(&br(b, c), a), one()), (br(&br(c, a), b), one())],
        )
    }
}

/// Rank over the rationals by Gaussian elimination.
fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let factor = &row[c] / &pivot[c];
            for (x, y) in row.iter_mut().zip(&pivot).skip(c) {
                *x -= &factor * y;
            }
        }
        r += 1;
    }
    r
}

/// `[[x1,x3],x2] = [x1,[x3,x2]] + [x3,[x2,x1]]`, by normalization and by
/// matrices; and whether the sign-flipped `-[x3,[x2,x1]] - [x2,[x1,x3]]` also equals it.
fn jacobi_instances(norm: &Normalizer, mats: &[IntMatrix]) -> Result<(bool, bool)> {
    let comb = |terms: &[(&str, i64)]| -> Result<LinComb> {
        let parsed = terms.iter().map(|(s, k)| Ok((crate::parse(s)?, BigInt::from(*k)))).collect::<Result<Vec<_>>>()?;
        LinComb::from_terms(3, parsed)
    };
    let lhs = comb(&[("[[x1,x3],x2]", 1)])?;
    let rhs = comb(&[("[x1,[x3,x2]]", 1), ("[x3,[x2,x1]]", 1)])?;
    let flipped = comb(&[("[x3,[x2,x1]]", -1), ("[x2,[x1,x3]]", -1)])?;
    let holds = norm.normalize(&(&lhs - &rhs))?.is_zero() && evaluate(&lhs, mats)? == evaluate(&rhs, mats)?;
    let flipped_holds = norm.normalize(&(&lhs - &flipped))?.is_zero();
    Ok((holds, flipped_holds))
}

pub fn check_normalization(cfg: &VerifyConfig) -> Outcome {
    let norm = Normalizer::new();
    let ec = EnumConfig { max_n: cfg.fixed_max_n.max(cfg.rank_max_n), exec: cfg.exec };
    let mut fixed = 0;
    for n in 1..=cfg.fixed_max_n {
        let words = enumerate_l_with(n, &ec)?;
        fixed += words.len();
        let bad = first_failure(cfg.exec, &words, |w| {
            let c = LinComb::word(w.clone()).ok()?;
            match norm.normalize(&c) {
                Ok(nf) if nf == c => None,
                Ok(nf) => Some(format!("normalize({w}) = {nf}")),
                Err(e) => Some(e.to_string()),
            }
        });
        if let Some(why) = bad {
            return Ok((false, why));
        }
    }

    let mut rng = cfg.rng(10);
    let kernels = (0..cfg.kernel_samples)
        .map(|k| kernel_instance(k, cfg.kernel_max_n, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let bad = first_failure(cfg.exec, &kernels, |c| match norm.normalize(c) {
        Ok(nf) if nf.is_zero() => None,
        Ok(nf) => Some(format!("{c} normalizes to {nf}")),
        Err(e) => Some(e.to_string()),
    });
    if let Some(why) = bad {
        return Ok((false, why));
    }

    let (dim, bound) = (cfg.matrix_dim, cfg.matrix_bound);
    let cases: Vec<(Expr, Vec<IntMatrix>)> = (0..cfg.eval_samples)
        .map(|_| {
            let n = rng.gen_range(1..=cfg.eval_max_n);
            let w = random_word(n, &mut rng);
            let mats = (0..n).map(|_| IntMatrix::random(dim, bound, &mut rng)).collect();
            (w, mats)
        })
        .collect();
    let bad = first_failure(cfg.exec, &cases, |(w, mats)| {
        let run = || -> Result<Option<String>> {
            let c = LinComb::word(w.clone())?;
            let nf = norm.normalize(&c)?;
            if !nf.is_normal() {
                return Ok(Some(format!("normalize({w}) leaves L")));
            }
            if norm.normalize(&nf)? != nf {
                return Ok(Some(format!("normalize is not idempotent on {w}")));
            }
            if evaluate(&c, mats)? != evaluate(&nf, mats)? {
                return Ok(Some(format!("matrix evaluation of {w} differs from its normal form")));
            }
            Ok(None)
        };
        run().unwrap_or_else(|e| Some(e.to_string()))
    });
    if let Some(why) = bad {
        return Ok((false, why));
    }

    let mut ranks = Vec::new();
    for n in 1..=cfg.rank_max_n {
        let basis = enumerate_l_with(n, &ec)?;
        let index: std::collections::HashMap<String, usize> =
            basis.iter().enumerate().map(|(k, w)| (w.to_string(), k)).collect();
        let perms: Vec<Vec<u32>> = (1..=n as u32).permutations(n).collect();
        let rows = cfg.exec.flat_map(&perms, |p| {
            all_bracketings(p)
                .into_iter()
                .map(|w| {
                    let mut row = vec![BigRational::zero(); basis.len()];
                    for (t, k) in norm.normal_word(&w) {
                        row[index[&t.to_string()]] = BigRational::from_integer(k);
                    }
                    row
                })
                .collect::<Vec<_>>()
        });
        let rk = rank(rows);
        let want = basis.len();
        if rk != want {
            return Ok((false, format!("rank {rk} at n = {n}, expected {want}")));
        }
        ranks.push(rk.to_string());
    }

    let mats: Vec<IntMatrix> = (0..3).map(|_| IntMatrix::random(dim, bound, &mut rng)).collect();
    let (holds, flipped_holds) = jacobi_instances(&norm, &mats)?;
    if !holds || flipped_holds {
        return Ok((false, "the three-leaf Jacobi instance check failed".into()));
    }

    Ok((
        true,
        format!(
            "{fixed} basis words fixed, {} kernel instances vanish, {} matrix evaluations agree, ranks {}; \
             [[x1,x3],x2] = [x1,[x3,x2]] + [x3,[x2,x1]] holds, the sign-flipped variant does not",
            cfg.kernel_samples,
            cfg.eval_samples,
            ranks.join(", ")
        ),
    ))
}

pub const CHECK_NAMES: [&str; 10] = [
    "cardinality",
    "prime counts",
    "freeness round trip",
    "operad axioms",
    "tree compatibility",
    "series identities",
    "lagrange/callan",
    "sif ground truth",
    "density",
    "normalization",
];

/// Check number `id` in `1..=10`.
pub fn run_check(id: u8, cfg: &VerifyConfig) -> CheckReport {
    let name = CHECK_NAMES[id as usize - 1];
    let body: fn(&VerifyConfig) -> Outcome = match id {
        1 => check_cardinality,
        2 => check_prime_counts,
        3 => check_round_trip,
        4 => check_operad_axioms,
        5 => check_tree_compatibility,
        6 => check_series,
        7 => check_callan,
        8 => check_sif,
        9 => check_density,
        10 => check_normalization,
        _ => panic!("no check numbered {id}"),
    };
    timed(id, name, || body(cfg))
}

pub fn run_all(cfg: &VerifyConfig) -> VerifyReport {
    let checks = (1..=10).map(|id| run_check(id, cfg)).collect();
    let density = density_constants(cfg).unwrap_or_default();
    VerifyReport { checks, density }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        let mut cfg = VerifyConfig::from_flags(8, 5, 20);
        cfg.free_samples = 50;
        cfg.operad_samples = 50;
        cfg.tree_samples = 50;
        cfg.sif_max_n = 6;
        cfg.sif_recurrence_max_n = 20;
        cfg.density_reference_n = 20;
        cfg.density_ns = vec![40, 80];
        cfg.fixed_max_n = 5;
        cfg.kernel_samples = 40;
        cfg.eval_samples = 10;
        cfg.rank_max_n = 4;
        cfg
    }

    #[test]
    fn flags_map_onto_sizes() {
        let cfg = VerifyConfig::from_flags(25, 8, 50);
        assert_eq!((cfg.order, cfg.long_order, cfg.callan_max_n), (25, 50, 25));
        assert_eq!((cfg.round_trip_max_n, cfg.cardinality_max_n, cfg.prime_max_n), (8, 9, 10));
        assert_eq!(cfg, VerifyConfig::default());
    }

    #[test]
    fn small_run_passes() {
        let report = run_all(&small());
        assert!(report.passed(), "{report}");
        assert_eq!(report.density.len(), 2);
    }

    #[test]
    fn low_precision_is_a_failure_not_a_panic() {
        let mut cfg = small();
        cfg.digits = 5;
        let r = run_check(9, &cfg);
        assert!(!r.passed);
        assert!(r.detail.contains("error"));
    }

    #[test]
    fn rank_of_small_matrices() {
        let q = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(x.into())).collect::<Vec<_>>();
        assert_eq!(rank(vec![q(&[1, 2]), q(&[2, 4])]), 1);
        assert_eq!(rank(vec![q(&[0, 1]), q(&[1, 0]), q(&[1, 1])]), 2);
        assert_eq!(rank(vec![]), 0);
    }
}
