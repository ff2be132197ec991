//! Exhaustive generation of `L(n)` and of its primes `P(n)`.
//!
//! An element of `L(n)` is `[A1, A2]` where `A1` holds index 1 plus some
//! `(j-1)`-subset of `{2..n-1}` and `A2` holds the rest together with `n`.
//! Relabeling each side order-isomorphically gives elements of `L(j)` and
//! `L(n-j)`, and every choice of `(j, subset, A1', A2')` yields a distinct word.
//! Generation walks exactly that bijection, one split per task.

use itertools::Itertools;
use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::expr::{count_connected, Expr};
use crate::par::Exec;

pub const DEFAULT_MAX_N: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    pub max_n: usize,
    pub exec: Exec,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { max_n: DEFAULT_MAX_N, exec: Exec::default() }
    }
}

impl EnumConfig {
    pub fn with_exec(exec: Exec) -> Self {
        EnumConfig { exec, ..Self::default() }
    }

    fn check(&self, n: usize, min: usize) -> Result<()> {
        if n < min {
            return Err(Error::Precondition(format!("n must be at least {min}")));
        }
        if n > self.max_n {
            return Err(Error::ResourceLimit { n, limit: self.max_n });
        }
        Ok(())
    }
}

/// One top-level split: sizes of the two sides and their index sets.
struct Split {
    left_size: usize,
    left: Vec<u32>,
    right: Vec<u32>,
}

fn splits(n: usize) -> Vec<Split> {
    let n32 = n as u32;
    let middle: Vec<u32> = (2..n32).collect();
    let mut out = Vec::new();
    for j in 1..n {
        for chosen in middle.iter().copied().combinations(j - 1) {
            let mut left = vec![1];
            left.extend(&chosen);
            let mut right: Vec<u32> = middle.iter().copied().filter(|i| !chosen.contains(i)).collect();
            right.push(n32);
            out.push(Split { left_size: j, left, right });
        }
    }
    out
}

fn expand(split: &Split, levels: &[Vec<Expr>]) -> Vec<Expr> {
    let lefts = &levels[split.left_size];
    let rights = &levels[split.right.len()];
    let mut out = Vec::with_capacity(lefts.len() * rights.len());
    for a in lefts {
        let a = a.relabel(&split.left);
        for b in rights {
            out.push(Expr::bracket(a.clone(), b.relabel(&split.right)));
        }
    }
    out
}

/// `levels[m]` is `L(m)` in generation order for `1 <= m <= n`.
fn levels_up_to(n: usize, exec: Exec) -> Vec<Vec<Expr>> {
    let mut levels: Vec<Vec<Expr>> = vec![Vec::new(), vec![Expr::unit()]];
    for m in 2..=n {
        let next = exec.flat_map(&splits(m), |s| expand(s, &levels));
        levels.push(next);
    }
    levels
}

fn unsorted_l(n: usize, exec: Exec) -> Vec<Expr> {
    levels_up_to(n, exec).swap_remove(n)
}

fn sort_canonical(words: &mut [Expr], exec: Exec) {
    exec.sort_by_cached_key(words, |e| e.to_string());
}

pub(crate) fn is_prime_in_l(e: &Expr) -> bool {
    !e.is_leaf() && count_connected(e) == 1
}

pub fn enumerate_l(n: usize) -> Result<Vec<Expr>> {
    enumerate_l_with(n, &EnumConfig::default())
}

/// Every element of `L(n)` once, sorted by canonical string.
pub fn enumerate_l_with(n: usize, cfg: &EnumConfig) -> Result<Vec<Expr>> {
    cfg.check(n, 1)?;
    let mut words = unsorted_l(n, cfg.exec);
    sort_canonical(&mut words, cfg.exec);
    Ok(words)
}

pub fn enumerate_p(n: usize) -> Result<Vec<Expr>> {
    enumerate_p_with(n, &EnumConfig::default())
}

/// The prime elements of `L(n)` in the same order as [`enumerate_l_with`].
pub fn enumerate_p_with(n: usize, cfg: &EnumConfig) -> Result<Vec<Expr>> {
    cfg.check(n, 2)?;
    let levels = levels_up_to(n - 1, cfg.exec);
    let mut primes =
        cfg.exec.flat_map(&splits(n), |s| expand(s, &levels).into_iter().filter(is_prime_in_l).collect());
    sort_canonical(&mut primes, cfg.exec);
    Ok(primes)
}

pub fn count_l(n: usize) -> Result<BigUint> {
    count_l_with(n, &EnumConfig::default())
}

/// `|L(n)|`, counted by generating every word of the top level split by split.
pub fn count_l_with(n: usize, cfg: &EnumConfig) -> Result<BigUint> {
    cfg.check(n, 1)?;
    if n == 1 {
        return Ok(BigUint::from(1u32));
    }
    let levels = levels_up_to(n - 1, cfg.exec);
    let per_split = cfg.exec.map(&splits(n), |s| expand(s, &levels).len());
    Ok(per_split.into_iter().map(BigUint::from).sum())
}

pub fn count_p(n: usize) -> Result<BigUint> {
    count_p_with(n, &EnumConfig::default())
}

/// `|P(n)|` by generating `L(n)` and testing primality.
pub fn count_p_with(n: usize, cfg: &EnumConfig) -> Result<BigUint> {
    cfg.check(n, 2)?;
    let levels = levels_up_to(n - 1, cfg.exec);
    let per_split =
        cfg.exec.map(&splits(n), |s| expand(s, &levels).iter().filter(|e| is_prime_in_l(e)).count());
    Ok(per_split.into_iter().map(BigUint::from).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{is_in_l, is_prime};

    fn strings(v: &[Expr]) -> Vec<String> {
        v.iter().map(|e| e.to_string()).collect()
    }

    #[test]
    fn small_levels() {
        assert_eq!(strings(&enumerate_l(1).unwrap()), ["x1"]);
        assert_eq!(strings(&enumerate_l(2).unwrap()), ["[x1,x2]"]);
        assert_eq!(strings(&enumerate_l(3).unwrap()), ["[[x1,x2],x3]", "[x1,[x2,x3]]"]);
        assert!(enumerate_p(3).unwrap().is_empty());
        assert_eq!(strings(&enumerate_p(4).unwrap()), ["[[x1,x3],[x2,x4]]"]);
    }

    #[test]
    fn counts_match_factorials() {
        let mut fact = 1u64;
        for n in 1..=8 {
            if n > 1 {
                fact *= n as u64 - 1;
            }
            assert_eq!(enumerate_l(n).unwrap().len() as u64, fact);
            assert_eq!(count_l(n).unwrap(), BigUint::from(fact));
        }
        assert_eq!(count_l(9).unwrap(), BigUint::from(40320u32));
    }

    #[test]
    fn prime_counts() {
        assert_eq!(count_p(2).unwrap(), BigUint::from(1u32));
        assert_eq!(enumerate_p(6).unwrap().len(), 22);
        assert_eq!(count_p(7).unwrap(), BigUint::from(144u32));
    }

    #[test]
    fn output_is_sorted_unique_and_in_l() {
        let words = enumerate_l(6).unwrap();
        let s = strings(&words);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(words.iter().all(|e| is_in_l(e).unwrap()));
        let primes = enumerate_p(6).unwrap();
        let expected: Vec<_> = words.into_iter().filter(|e| is_prime(e).unwrap()).collect();
        assert_eq!(primes, expected);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let seq = EnumConfig::with_exec(Exec::Sequential);
        let par = EnumConfig::with_exec(Exec::Parallel);
        assert_eq!(enumerate_l_with(7, &seq).unwrap(), enumerate_l_with(7, &par).unwrap());
        assert_eq!(count_p_with(8, &seq).unwrap(), count_p_with(8, &par).unwrap());
    }

    #[test]
    fn splits_partition_middle_indices() {
        // sum over j of C(n-2, j-1) = 2^(n-2)
        assert_eq!(splits(6).len(), 16);
        for s in splits(6) {
            assert_eq!(s.left[0], 1);
            assert_eq!(*s.right.last().unwrap(), 6);
            assert_eq!(s.left.len() + s.right.len(), 6);
        }
    }

    #[test]
    fn limits_and_preconditions() {
        assert_eq!(enumerate_l(12), Err(Error::ResourceLimit { n: 12, limit: 11 }));
        assert!(matches!(enumerate_l(0), Err(Error::Precondition(_))));
        assert!(matches!(count_p(1), Err(Error::Precondition(_))));
        let small = EnumConfig { max_n: 4, ..Default::default() };
        assert_eq!(count_l_with(5, &small), Err(Error::ResourceLimit { n: 5, limit: 4 }));
    }
}
