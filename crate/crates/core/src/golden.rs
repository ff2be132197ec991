//! Reference sequence prefixes, embedded for hermetic checks.

/// OEIS A134988: `b₂, b₃, ..., b₁₀`, the number of primes in `L(n)`.
pub const A134988: [u64; 9] = [1, 0, 1, 4, 22, 144, 1089, 9308, 88562];

/// OEIS A075834: `a₀, a₁, ..., a₈`, the number of SIF permutations of `[n]`.
pub const A075834: [u64; 9] = [1, 1, 1, 2, 7, 34, 206, 1476, 12123];

/// `bₙ` for `2 <= n <= 10`.
pub fn b(n: usize) -> Option<u64> {
    n.checked_sub(2).and_then(|k| A134988.get(k).copied())
}

/// `aₙ` for `0 <= n <= 8`.
pub fn a(n: usize) -> Option<u64> {
    A075834.get(n).copied()
}
