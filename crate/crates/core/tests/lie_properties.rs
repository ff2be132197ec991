use itertools::Itertools;
use lie_operad::enumerate::enumerate_l;
use lie_operad::lie::{bracket_normal, evaluate, normalize, IntMatrix, LinComb, Normalizer};
use lie_operad::random::{all_bracketings, random_l, random_word};
use lie_operad::Expr;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn basis_comb(seed: u64, n: usize, terms: usize) -> LinComb {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = (0..terms).map(|k| (random_l(n, &mut rng), BigInt::from(k as i64 - 1)));
    LinComb::from_terms(n, words).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bracket_is_antisymmetric_up_to_block_swap(s: [u64; 2], k in 1usize..5, m in 1usize..5) {
        let a = basis_comb(s[0], k, 3);
        let b = basis_comb(s[1], m, 3);
        let ab = bracket_normal(&a, &b).unwrap();
        // [b, a] lives on b's indices first; send them back behind a's
        let swap: Vec<u32> = (1..=m as u32).map(|i| i + k as u32).chain(1..=k as u32).collect();
        let ba = normalize(&bracket_normal(&b, &a).unwrap().relabel(&swap)).unwrap();
        prop_assert_eq!(ab, -&ba);
    }

    #[test]
    fn normal_forms_are_fixed_points(seed: u64, n in 1usize..9) {
        let w = random_word(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let nf = normalize(&LinComb::word(w).unwrap()).unwrap();
        prop_assert!(nf.is_normal());
        prop_assert_eq!(normalize(&nf).unwrap(), nf);
    }

    #[test]
    fn evaluation_is_preserved(seed: u64, n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(n, &mut rng);
        let mats: Vec<IntMatrix> = (0..n).map(|_| IntMatrix::random(4, 3, &mut rng)).collect();
        let c = LinComb::word(w).unwrap();
        prop_assert_eq!(evaluate(&c, &mats).unwrap(), evaluate(&normalize(&c).unwrap(), &mats).unwrap());
    }
}

#[test]
fn every_word_up_to_five_normalizes() {
    let norm = Normalizer::new();
    for n in 1..=5 {
        let basis: Vec<String> = enumerate_l(n).unwrap().iter().map(Expr::to_string).collect();
        for p in (1..=n as u32).permutations(n) {
            for w in all_bracketings(&p) {
                let nf = norm.normalize(&LinComb::word(w.clone()).unwrap()).unwrap();
                assert!(!nf.is_zero(), "{w}");
                assert!(nf.terms().all(|(t, _)| basis.contains(&t.to_string())), "{w}");
            }
        }
    }
}

#[test]
fn eight_leaf_words_normalize() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let norm = Normalizer::new();
    for _ in 0..20 {
        let w = random_word(8, &mut rng);
        let c = LinComb::word(w).unwrap();
        let nf = norm.normalize(&c).unwrap();
        assert!(nf.is_normal());
        let mats: Vec<IntMatrix> = (0..8).map(|_| IntMatrix::random(3, 2, &mut rng)).collect();
        assert_eq!(evaluate(&c, &mats).unwrap(), evaluate(&nf, &mats).unwrap());
    }
}

#[test]
fn left_normed_words_expand_with_unit_coefficients() {
    // [[x2,x1],x3] = -[[x1,x2],x3]
    let w = lie_operad::parse("[[x2,x1],x3]").unwrap();
    let nf = normalize(&LinComb::word(w).unwrap()).unwrap();
    assert_eq!(nf.lines(), ["-1·[[x1,x2],x3]"]);
}
