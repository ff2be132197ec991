//! Stabilized-interval-free permutations by exhaustive search.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::par::Exec;

pub const DEFAULT_MAX_N: usize = 9;

/// A permutation of `1..=n` in one-line notation: `images[i - 1] = p(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            let slot = v.checked_sub(1).map(|i| i as usize).filter(|&i| i < n);
            match slot {
                Some(i) if !seen[i] => seen[i] = true,
                _ => return Err(Error::Precondition(format!("{images:?} is not a permutation of 1..={n}"))),
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n as u32).collect() }
    }

    /// Build from disjoint cycles on `1..=n`; unmentioned points are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (1..=n as u32).collect();
        for cycle in cycles {
            for (k, &from) in cycle.iter().enumerate() {
                let to = cycle[(k + 1) % cycle.len()];
                if from == 0 || from as usize > n {
                    return Err(Error::Precondition(format!("{from} is outside 1..={n}")));
                }
                images[from as usize - 1] = to;
            }
        }
        Permutation::new(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Cycles with each cycle starting at its smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 1..=n as u32 {
            if seen[start as usize - 1] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start as usize - 1] = true;
            let mut next = self.images[start as usize - 1];
            while next != start {
                seen[next as usize - 1] = true;
                cycle.push(next);
                next = self.images[next as usize - 1];
            }
            out.push(cycle);
        }
        out
    }
}

/// Cycle notation without fixed points, e.g. `(1 3)(2 4)`; `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return match self.images.len() {
                1 => write!(f, "(1)"),
                _ => write!(f, "()"),
            };
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(u32::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// Whether `images` maps no proper interval `[i..j]` onto itself. Tracks the
/// running min and max of the images while `j` grows.
pub fn is_sif_images(images: &[u32]) -> bool {
    let n = images.len();
    for i in 0..n {
        let (mut lo, mut hi) = (u32::MAX, 0u32);
        for j in i..n {
            if j - i + 1 == n {
                break;
            }
            lo = lo.min(images[j]);
            hi = hi.max(images[j]);
            if lo as usize == i + 1 && hi as usize == j + 1 {
                return false;
            }
        }
    }
    true
}

pub fn is_sif(p: &Permutation) -> bool {
    is_sif_images(&p.images)
}

/// Reference test comparing the image set of every proper interval with the interval.
pub fn is_sif_naive(p: &Permutation) -> bool {
    let n = p.images.len();
    for i in 1..=n {
        for j in i..=n {
            if j - i + 1 == n {
                continue;
            }
            let mut image: Vec<u32> = (i..=j).map(|t| p.images[t - 1]).collect();
            image.sort_unstable();
            if image == (i as u32..=j as u32).collect::<Vec<_>>() {
                return false;
            }
        }
    }
    true
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Visit the permutations of `1..=n` whose first image is `first`, in lexicographic order.
fn for_each_with_first<F: FnMut(&[u32])>(n: usize, first: u32, mut f: F) {
    let mut perm: Vec<u32> = std::iter::once(first).chain((1..=n as u32).filter(|&v| v != first)).collect();
    loop {
        f(&perm);
        if !next_permutation(&mut perm[1..]) {
            break;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SifConfig {
    pub max_n: usize,
    pub exec: Exec,
}

impl Default for SifConfig {
    fn default() -> Self {
        SifConfig { max_n: DEFAULT_MAX_N, exec: Exec::default() }
    }
}

impl SifConfig {
    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::ResourceLimit { n, limit: self.max_n });
        }
        Ok(())
    }
}

pub fn count_sif(n: usize) -> Result<BigUint> {
    count_sif_with(n, &SifConfig::default())
}

/// `aₙ` by testing every permutation of `1..=n`, sharded by first image.
pub fn count_sif_with(n: usize, cfg: &SifConfig) -> Result<BigUint> {
    cfg.check(n)?;
    if n == 0 {
        return Ok(BigUint::from(1u32));
    }
    let firsts: Vec<u32> = (1..=n as u32).collect();
    let per_shard = cfg.exec.map(&firsts, |&first| {
        let mut count = 0u64;
        for_each_with_first(n, first, |perm| count += is_sif_images(perm) as u64);
        count
    });
    Ok(per_shard.into_iter().map(BigUint::from).sum())
}

pub fn list_sif(n: usize) -> Result<Vec<Permutation>> {
    list_sif_with(n, &SifConfig::default())
}

/// SIF permutations in lexicographic order of one-line notation.
pub fn list_sif_with(n: usize, cfg: &SifConfig) -> Result<Vec<Permutation>> {
    cfg.check(n)?;
    if n == 0 {
        return Ok(vec![Permutation::identity(0)]);
    }
    let firsts: Vec<u32> = (1..=n as u32).collect();
    Ok(cfg.exec.flat_map(&firsts, |&first| {
        let mut out = Vec::new();
        for_each_with_first(n, first, |perm| {
            if is_sif_images(perm) {
                out.push(Permutation { images: perm.to_vec() });
            }
        });
        out
    }))
}
