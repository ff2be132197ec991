//! Enumeration against brute force: every bracketing of every permutation,
//! filtered by the L rule.

use std::collections::BTreeSet;

use itertools::Itertools;
use lie_operad::enumerate::{count_l, count_p, enumerate_l, enumerate_p};
use lie_operad::free::count_free_elements;
use lie_operad::golden;
use lie_operad::random::all_bracketings;
use lie_operad::series::factorial;
use lie_operad::{is_in_l, is_prime, parse, Expr};
use num_bigint::{BigInt, BigUint};

fn brute_force(n: usize) -> BTreeSet<String> {
    (1..=n as u32)
        .permutations(n)
        .flat_map(|p| all_bracketings(&p))
        .filter(|e| is_in_l(e).unwrap())
        .map(|e| e.to_string())
        .collect()
}

#[test]
fn enumeration_matches_brute_force() {
    for n in 1..=7 {
        let fast: BTreeSet<String> = enumerate_l(n).unwrap().iter().map(Expr::to_string).collect();
        assert_eq!(fast, brute_force(n), "n = {n}");
    }
}

#[test]
fn primes_match_filtered_brute_force() {
    for n in 2..=7 {
        let fast: Vec<String> = enumerate_p(n).unwrap().iter().map(Expr::to_string).collect();
        let slow: Vec<String> =
            brute_force(n).into_iter().filter(|s| is_prime(&parse(s).unwrap()).unwrap()).collect();
        assert_eq!(fast, slow, "n = {n}");
    }
}

#[test]
fn print_then_parse_is_identity() {
    for e in enumerate_l(5).unwrap() {
        let text = e.to_string();
        assert_eq!(parse(&text).unwrap(), e);
        let spaced = text.replace('[', " [ ").replace(',', " ,\n").replace(']', "\t]");
        assert_eq!(parse(&spaced).unwrap(), e);
    }
}

#[test]
fn counts_match_references() {
    for n in 2..=10 {
        assert_eq!(count_l(n).unwrap(), factorial(n as u64 - 1).to_biguint().unwrap());
        assert_eq!(count_p(n).unwrap(), BigUint::from(golden::b(n).unwrap()), "n = {n}");
    }
}

#[test]
fn free_operad_on_primes_has_the_size_of_l() {
    let mut primes = vec![BigUint::from(0u32); 11];
    for n in 2..=10 {
        primes[n] = BigUint::from(golden::b(n).unwrap());
    }
    let counts = count_free_elements(&primes, 10);
    for n in 1..=10 {
        assert_eq!(BigInt::from(counts[n].clone()), factorial(n as u64 - 1), "n = {n}");
    }
}
