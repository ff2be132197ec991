//! Rewriting integer combinations of bracket words onto the `L(n)` basis.
//!
//! Only two relations are used:
//!
//! * antisymmetry `[A,B] = -[B,A]`
//! * the Jacobi move `[[A,B],C] = [A,[B,C]] + [[A,C],B]`
//!
//! At each level the smallest and largest index of the current subword are
//! tracked. Their *weight* is the number of proper brackets containing both.
//! A Jacobi move at the innermost such bracket turns one word of weight `w`
//! into two of weight `w - 1`; at weight zero antisymmetry puts the minimum on
//! the left, and the procedure recurses into both sides.
//!
//! [`evaluate`] interprets words in the commutator algebra of integer
//! matrices, which gives an independent check that rewriting preserves value.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::expr::Expr;

/// A formal integer combination of words on `1..arity`, keyed by canonical text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinComb {
    arity: usize,
    terms: BTreeMap<String, (Expr, BigInt)>,
}

impl LinComb {
    pub fn zero(arity: usize) -> Self {
        LinComb { arity, terms: BTreeMap::new() }
    }

    pub fn word(e: Expr) -> Result<Self> {
        let arity = e.arity()?;
        let mut c = LinComb::zero(arity);
        c.push(e, BigInt::one());
        Ok(c)
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Expr, BigInt)>) -> Result<Self> {
        let mut c = LinComb::zero(arity);
        for (e, coeff) in terms {
            let n = e.arity()?;
            if n != arity {
                return Err(Error::NotAWord { arity });
            }
            c.push(e, coeff);
        }
        Ok(c)
    }

    fn push(&mut self, e: Expr, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let key = e.to_string();
        match self.terms.get_mut(&key) {
            Some((_, c)) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, (e, coeff));
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Expr, &BigInt)> {
        self.terms.values().map(|(e, c)| (e, c))
    }

    pub fn coefficient(&self, e: &Expr) -> BigInt {
        self.terms.get(&e.to_string()).map(|(_, c)| c.clone()).unwrap_or_default()
    }

    /// Every term lies in `L(arity)`.
    pub fn is_normal(&self) -> bool {
        self.terms().all(|(e, _)| e.satisfies_l_rule())
    }

    pub fn scale(&self, k: &BigInt) -> LinComb {
        let mut out = LinComb::zero(self.arity);
        for (e, c) in self.terms() {
            out.push(e.clone(), c * k);
        }
        out
    }

    /// Apply an index permutation of `1..arity`, given as `i -> perm[i - 1]`.
    pub fn relabel(&self, perm: &[u32]) -> LinComb {
        let mut out = LinComb::zero(self.arity);
        for (e, c) in self.terms() {
            out.push(e.relabel(perm), c.clone());
        }
        out
    }

    /// One `±c·word` line per term.
    pub fn lines(&self) -> Vec<String> {
        self.terms()
            .map(|(e, c)| {
                let sign = if c.is_negative() { '-' } else { '+' };
                format!("{sign}{}·{e}", c.abs())
            })
            .collect()
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", self.lines().join(" "))
    }
}

impl Add for &LinComb {
    type Output = LinComb;

    fn add(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.push(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LinComb {
    type Output = LinComb;

    fn sub(self, rhs: &LinComb) -> LinComb {
        self + &(-rhs)
    }
}

impl Neg for &LinComb {
    type Output = LinComb;

    fn neg(self) -> LinComb {
        self.scale(&BigInt::from(-1))
    }
}

/// The weight of a word relative to its own smallest and largest index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightContext {
    pub expr: Expr,
    pub weight: usize,
}

impl WeightContext {
    pub fn of(expr: &Expr) -> Self {
        let s = expr.span();
        WeightContext { expr: expr.clone(), weight: shared_below(expr, s.lo, s.hi) }
    }
}

fn holds_both(e: &Expr, lo: u32, hi: u32) -> bool {
    e.contains_index(lo) && e.contains_index(hi)
}

fn shared_below(e: &Expr, lo: u32, hi: u32) -> usize {
    match e.children() {
        None => 0,
        Some((x, y)) => {
            if holds_both(x, lo, hi) {
                1 + shared_below(x, lo, hi)
            } else if holds_both(y, lo, hi) {
                1 + shared_below(y, lo, hi)
            } else {
                0
            }
        }
    }
}

/// One Jacobi move at the innermost proper bracket holding both the minimum
/// and the maximum. `None` when the two already sit in different children.
pub fn jacobi_step(e: &Expr) -> Option<[(Expr, i32); 2]> {
    let s = e.span();
    jacobi_at(e, s.lo, s.hi)
}

fn jacobi_at(node: &Expr, lo: u32, hi: u32) -> Option<[(Expr, i32); 2]> {
    let (x, y) = node.children()?;
    let (inner, other, inner_left) = if holds_both(x, lo, hi) {
        (x, y, true)
    } else if holds_both(y, lo, hi) {
        (y, x, false)
    } else {
        return None;
    };
    let (p, q) = inner.children().expect("a leaf cannot hold two indices");
    if !holds_both(p, lo, hi) && !holds_both(q, lo, hi) {
        // [[p,q],other] = [p,[q,other]] + [[p,other],q], negated when [p,q] sits on the right
        let sign = if inner_left { 1 } else { -1 };
        let a = Expr::bracket(p.clone(), Expr::bracket(q.clone(), other.clone()));
        let b = Expr::bracket(Expr::bracket(p.clone(), other.clone()), q.clone());
        return Some([(a, sign), (b, sign)]);
    }
    let [(a, ca), (b, cb)] = jacobi_at(inner, lo, hi)?;
    let wrap = |t: Expr| {
        if inner_left {
            Expr::bracket(t, other.clone())
        } else {
            Expr::bracket(other.clone(), t)
        }
    };
    Some([(wrap(a), ca), (wrap(b), cb)])
}

type NormalForm = Arc<Vec<(Expr, BigInt)>>;

/// Normalization with a memo of normal forms keyed by standardized pattern.
///
/// The cache only ever maps a key to its unique normal form, so it can be
/// shared between threads.
#[derive(Debug, Default)]
pub struct Normalizer {
    cache: RwLock<HashMap<String, NormalForm>>,
}

impl Normalizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cached_patterns(&self) -> usize {
        self.cache.read().unwrap().len()
    }

    pub fn normalize(&self, c: &LinComb) -> Result<LinComb> {
        let mut out = LinComb::zero(c.arity);
        for (e, coeff) in c.terms() {
            if e.arity()? != c.arity {
                return Err(Error::NotAWord { arity: c.arity });
            }
            for (t, k) in self.normal_word(e) {
                out.push(t, k * coeff);
            }
        }
        Ok(out)
    }

    /// Normal form of a single word with arbitrary distinct indices.
    pub fn normal_word(&self, e: &Expr) -> Vec<(Expr, BigInt)> {
        let (pattern, indices) = e.standardize();
        self.normal_pattern(&pattern)
            .iter()
            .map(|(t, k)| (t.relabel(&indices), k.clone()))
            .collect()
    }

    fn normal_pattern(&self, p: &Expr) -> NormalForm {
        let key = p.to_string();
        if let Some(hit) = self.cache.read().unwrap().get(&key) {
            return hit.clone();
        }
        let result = Arc::new(self.rewrite(p));
        self.cache.write().unwrap().entry(key).or_insert(result).clone()
    }

    fn rewrite(&self, p: &Expr) -> Vec<(Expr, BigInt)> {
        if p.is_leaf() {
            return vec![(p.clone(), BigInt::one())];
        }
        let lo = p.span().lo;
        let mut acc = LinComb::zero(0);
        let mut work = vec![(p.clone(), BigInt::one())];
        while let Some((w, c)) = work.pop() {
            if let Some(moves) = jacobi_step(&w) {
                for (t, s) in moves {
                    work.push((t, &c * s));
                }
                continue;
            }
            let (x, y) = w.children().unwrap();
            let (left, right, c) = if x.contains_index(lo) { (x, y, c) } else { (y, x, -c) };
            let lefts = self.normal_word(left);
            let rights = self.normal_word(right);
            for (l, cl) in &lefts {
                for (r, cr) in &rights {
                    acc.push(Expr::bracket(l.clone(), r.clone()), &c * cl * cr);
                }
            }
        }
        acc.terms.into_values().collect()
    }
}

pub fn normalize(c: &LinComb) -> Result<LinComb> {
    Normalizer::new().normalize(c)
}

/// `[a, b]` with `b` shifted past `a`'s indices, expanded bilinearly and normalized.
pub fn bracket_normal(a: &LinComb, b: &LinComb) -> Result<LinComb> {
    let k = a.arity as u32;
    let mut raw = LinComb::zero(a.arity + b.arity);
    for (ta, ca) in a.terms() {
        for (tb, cb) in b.terms() {
            raw.push(Expr::bracket(ta.clone(), tb.shift(k)), ca * cb);
        }
    }
    normalize(&raw)
}

/// A square matrix of `i128` with overflow-checked arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<i128>,
}

impl IntMatrix {
    pub fn zero(dim: usize) -> Self {
        IntMatrix { dim, entries: vec![0; dim * dim] }
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::Dimension { expected: dim, found: r.len() });
            }
            entries.extend_from_slice(r);
        }
        Ok(IntMatrix { dim, entries })
    }

    /// Entries uniform in `-bound..=bound`.
    pub fn random<R: Rng + ?Sized>(dim: usize, bound: i128, rng: &mut R) -> Self {
        let entries = (0..dim * dim).map(|_| rng.gen_range(-bound..=bound)).collect();
        IntMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> i128 {
        self.entries[row * self.dim + col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    fn check_dim(&self, other: &IntMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.check_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(IntMatrix { dim: self.dim, entries })
    }

    pub fn checked_scale(&self, k: i128) -> Result<IntMatrix> {
        let entries =
            self.entries.iter().map(|a| a.checked_mul(k).ok_or(Error::Overflow)).collect::<Result<_>>()?;
        Ok(IntMatrix { dim: self.dim, entries })
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.check_dim(other)?;
        let d = self.dim;
        let mut out = IntMatrix::zero(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    let p = a.checked_mul(other.entries[k * d + j]).ok_or(Error::Overflow)?;
                    let slot = &mut out.entries[i * d + j];
                    *slot = slot.checked_add(p).ok_or(Error::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    /// `XY - YX`.
    pub fn commutator(&self, other: &IntMatrix) -> Result<IntMatrix> {
        let xy = self.checked_mul(other)?;
        let yx = other.checked_mul(self)?;
        xy.checked_add(&yx.checked_scale(-1)?)
    }
}

/// Value of a word with leaf `i` bound to `assignment[i - 1]`.
pub fn evaluate_word(e: &Expr, assignment: &[IntMatrix]) -> Result<IntMatrix> {
    match e {
        Expr::Leaf(i) => assignment.get(*i as usize - 1).cloned().ok_or(Error::MissingAssignment(*i)),
        Expr::Bracket(l, r) => evaluate_word(l, assignment)?.commutator(&evaluate_word(r, assignment)?),
    }
}

pub fn evaluate(c: &LinComb, assignment: &[IntMatrix]) -> Result<IntMatrix> {
    let dim = assignment.first().map_or(0, IntMatrix::dim);
    if let Some(m) = assignment.iter().find(|m| m.dim != dim) {
        return Err(Error::Dimension { expected: dim, found: m.dim });
    }
    let mut total = IntMatrix::zero(dim);
    for (e, coeff) in c.terms() {
        let k = coeff.to_i128().ok_or(Error::Overflow)?;
        total = total.checked_add(&evaluate_word(e, assignment)?.checked_scale(k)?)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_l;
    use crate::expr::parse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> LinComb {
        LinComb::word(parse(s).unwrap()).unwrap()
    }

    fn combo(arity: usize, terms: &[(&str, i64)]) -> LinComb {
        LinComb::from_terms(arity, terms.iter().map(|&(s, c)| (parse(s).unwrap(), BigInt::from(c)))).unwrap()
    }

    #[test]
    fn antisymmetry_only() {
        assert_eq!(normalize(&w("[x2,x1]")).unwrap(), combo(2, &[("[x1,x2]", -1)]));
    }

    #[test]
    fn jacobi_example() {
        // [[x1,x3],x2] = [[x1,x2],x3] - [x1,[x2,x3]]
        let n = normalize(&w("[[x1,x3],x2]")).unwrap();
        assert_eq!(n, combo(3, &[("[[x1,x2],x3]", 1), ("[x1,[x2,x3]]", -1)]));
        // the Jacobi instance [[x1,x3],x2] = [x1,[x3,x2]] + [x3,[x2,x1]]
        let rhs = combo(3, &[("[x1,[x3,x2]]", 1), ("[x3,[x2,x1]]", 1)]);
        assert_eq!(normalize(&rhs).unwrap(), n);
        // with both signs flipped and [x2,[x1,x3]] in place of [x1,[x3,x2]] it is not an identity
        let flipped = combo(3, &[("[x3,[x2,x1]]", -1), ("[x2,[x1,x3]]", -1)]);
        assert_ne!(normalize(&flipped).unwrap(), n);
    }

    #[test]
    fn fixes_the_basis() {
        for n in 1..=6 {
            for e in enumerate_l(n).unwrap() {
                let c = LinComb::word(e).unwrap();
                assert_eq!(normalize(&c).unwrap(), c);
            }
        }
    }

    #[test]
    fn jacobi_steps_lower_weight_by_one() {
        let e = parse("[[[[x1,x5],x3],x2],x4]").unwrap();
        let ctx = WeightContext::of(&e);
        assert_eq!(ctx.weight, 3);
        let moves = jacobi_step(&e).unwrap();
        for (t, _) in &moves {
            assert_eq!(WeightContext::of(t).weight, 2);
        }
        assert_eq!(WeightContext::of(&parse("[x1,[x2,x3]]").unwrap()).weight, 0);
        assert!(jacobi_step(&parse("[x3,[x2,x1]]").unwrap()).is_none());
    }

    #[test]
    fn lines_are_signed_and_sorted() {
        let n = normalize(&w("[[x1,x3],x2]")).unwrap();
        assert_eq!(n.lines(), ["+1·[[x1,x2],x3]", "-1·[x1,[x2,x3]]"]);
        assert_eq!(LinComb::zero(3).to_string(), "0");
    }

    #[test]
    fn bracket_normal_examples() {
        assert_eq!(bracket_normal(&w("x1"), &w("x1")).unwrap(), w("[x1,x2]"));
        assert_eq!(bracket_normal(&w("x1"), &w("[x1,x2]")).unwrap(), w("[x1,[x2,x3]]"));
        assert_eq!(bracket_normal(&w("[x1,x2]"), &w("x1")).unwrap(), w("[[x1,x2],x3]"));
    }

    #[test]
    fn evaluation_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mats: Vec<IntMatrix> = (0..4).map(|_| IntMatrix::random(4, 3, &mut rng)).collect();
        for s in ["[[x1,x3],x2]", "[[x4,x1],[x3,x2]]", "[x4,[[x2,x1],x3]]"] {
            let c = w(s);
            assert_eq!(evaluate(&c, &mats).unwrap(), evaluate(&normalize(&c).unwrap(), &mats).unwrap());
        }
        let m = IntMatrix::random(3, 3, &mut rng);
        assert!(evaluate(&w("[x1,x2]"), &[m.clone(), m]).unwrap().is_zero());
    }

    #[test]
    fn evaluation_errors() {
        let a = IntMatrix::zero(2);
        let b = IntMatrix::zero(3);
        assert_eq!(evaluate(&w("[x1,x2]"), &[a.clone(), b]), Err(Error::Dimension { expected: 2, found: 3 }));
        assert_eq!(evaluate(&w("[x1,x2]"), &[a]), Err(Error::MissingAssignment(2)));
        let big = IntMatrix::from_rows(&[vec![i128::MAX, 1], vec![1, 1]]).unwrap();
        assert_eq!(big.checked_mul(&big), Err(Error::Overflow));
    }

    #[test]
    fn arity_is_enforced() {
        assert!(LinComb::from_terms(3, [(parse("[x1,x2]").unwrap(), BigInt::one())]).is_err());
        assert!(LinComb::word(parse("[x1,x3]").unwrap()).is_err());
    }

    #[test]
    fn cache_is_reused() {
        let norm = Normalizer::new();
        norm.normalize(&w("[[x1,x3],x2]")).unwrap();
        let before = norm.cached_patterns();
        norm.normalize(&w("[[x1,x3],x2]")).unwrap();
        assert_eq!(norm.cached_patterns(), before);
    }
}
