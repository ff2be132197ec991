//! Random words, basis elements and free-operad elements for property checks.

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::enumerate::is_prime_in_l;
use crate::expr::Expr;
use crate::free::FreeElement;

/// Uniform element of `L(n)`, `n >= 1`. Every top-level split size carries
/// `(n-2)!` words, so the size is uniform and the rest recurses.
pub fn random_l<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Expr {
    assert!(n >= 1);
    if n == 1 {
        return Expr::unit();
    }
    let j = rng.gen_range(1..n);
    let mut chosen: Vec<u32> = index::sample(rng, n - 2, j - 1).into_iter().map(|k| k as u32 + 2).collect();
    chosen.sort_unstable();
    let mut left = vec![1];
    left.extend(&chosen);
    let mut right: Vec<u32> = (2..n as u32).filter(|i| chosen.binary_search(i).is_err()).collect();
    right.push(n as u32);
    Expr::bracket(random_l(j, rng).relabel(&left), random_l(n - j, rng).relabel(&right))
}

/// A random bracketing over the given leaf order.
pub fn random_bracketing<R: Rng + ?Sized>(leaves: &[u32], rng: &mut R) -> Expr {
    assert!(!leaves.is_empty());
    if leaves.len() == 1 {
        return Expr::Leaf(leaves[0]);
    }
    let cut = rng.gen_range(1..leaves.len());
    Expr::bracket(random_bracketing(&leaves[..cut], rng), random_bracketing(&leaves[cut..], rng))
}

/// A random bracketing of a random permutation of `1..=n`.
pub fn random_word<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Expr {
    let mut leaves: Vec<u32> = (1..=n as u32).collect();
    leaves.shuffle(rng);
    random_bracketing(&leaves, rng)
}

/// All bracketings over a fixed leaf order.
pub fn all_bracketings(leaves: &[u32]) -> Vec<Expr> {
    if leaves.len() == 1 {
        return vec![Expr::Leaf(leaves[0])];
    }
    let mut out = Vec::new();
    for cut in 1..leaves.len() {
        let lefts = all_bracketings(&leaves[..cut]);
        let rights = all_bracketings(&leaves[cut..]);
        for l in &lefts {
            for r in &rights {
                out.push(Expr::bracket(l.clone(), r.clone()));
            }
        }
    }
    out
}

/// A random prime of arity `m` by rejection; `None` where `P(m)` is empty.
pub fn random_prime<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Option<Expr> {
    if m < 2 || m == 3 {
        return None;
    }
    loop {
        let e = random_l(m, rng);
        if is_prime_in_l(&e) {
            return Some(e);
        }
    }
}

/// A random free-operad element of exactly the given width.
pub fn random_free<R: Rng + ?Sized>(width: usize, rng: &mut R) -> FreeElement {
    assert!(width >= 1);
    if width == 1 {
        return FreeElement::Unit;
    }
    let arities: Vec<usize> = (2..=width).filter(|&m| m != 3).collect();
    let m = *arities.choose(rng).unwrap();
    let mut cuts: Vec<usize> = index::sample(rng, width - 1, m - 1).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    let mut children = Vec::with_capacity(m);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(width)) {
        children.push(random_free(c - prev, rng));
        prev = c;
    }
    let pattern = random_prime(m, rng).expect("arity has primes");
    FreeElement::Node { pattern, children }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_l;
    use crate::expr::is_in_l;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    #[test]
    fn random_l_is_in_l_and_roughly_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut hits: HashMap<String, usize> = HashMap::new();
        for _ in 0..6000 {
            let e = random_l(4, &mut rng);
            assert!(is_in_l(&e).unwrap());
            *hits.entry(e.to_string()).or_default() += 1;
        }
        assert_eq!(hits.len(), enumerate_l(4).unwrap().len());
        assert!(hits.values().all(|&h| (800..1200).contains(&h)), "{hits:?}");
    }

    #[test]
    fn bracketing_counts_are_catalan() {
        let counts: Vec<usize> = (1..=6).map(|n| all_bracketings(&(1..=n).collect::<Vec<_>>()).len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 14, 42]);
    }

    #[test]
    fn random_free_is_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for w in 1..=10 {
            let f = random_free(w, &mut rng);
            f.validate().unwrap();
            assert_eq!(f.width(), w);
        }
        assert!(random_prime(3, &mut rng).is_none());
    }

    #[test]
    fn random_word_uses_each_index_once() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(random_word(7, &mut rng).arity().unwrap(), 7);
    }
}
