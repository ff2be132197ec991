//! The free operad on the primes and its identification with `L`.
//!
//! [`decompose`] cuts a word of `L(k)` along its connected brackets into a
//! tree of prime patterns, and [`compose_free`] glues such a tree back together
//! with the operad composition. The two are mutually inverse.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::enumerate::is_prime_in_l;
use crate::error::{Error, Result};
use crate::expr::{compose, is_in_l, Expr};

/// A reduced tree on `leaf_count` leaves: a nested family of index intervals,
/// each of size at least two, always including the full interval. The tree on
/// one leaf is the unit and has no vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedTree {
    leaf_count: usize,
    vertices: BTreeSet<(u32, u32)>,
}

impl ReducedTree {
    pub fn new(leaf_count: usize, vertices: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let vertices: BTreeSet<(u32, u32)> = vertices.into_iter().collect();
        let tree = ReducedTree { leaf_count, vertices };
        tree.validate()?;
        Ok(tree)
    }

    pub fn unit() -> Self {
        ReducedTree { leaf_count: 1, vertices: BTreeSet::new() }
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }

    /// Vertices as inclusive intervals `(lo, hi)`, ordered by `lo` then `hi`.
    pub fn vertices(&self) -> &BTreeSet<(u32, u32)> {
        &self.vertices
    }

    fn validate(&self) -> Result<()> {
        let k = self.leaf_count as u32;
        let bad = |msg: String| Err(Error::Precondition(msg));
        if k == 0 {
            return bad("a reduced tree has at least one leaf".into());
        }
        if k == 1 {
            return match self.vertices.is_empty() {
                true => Ok(()),
                false => bad("the one-leaf tree has no vertices".into()),
            };
        }
        if !self.vertices.contains(&(1, k)) {
            return bad(format!("missing the root vertex [1..{k}]"));
        }
        for &(lo, hi) in &self.vertices {
            if lo < 1 || hi > k || hi <= lo {
                return bad(format!("vertex [{lo}..{hi}] is not an interval of size >= 2 in [1..{k}]"));
            }
        }
        for &(a, b) in &self.vertices {
            for &(c, d) in &self.vertices {
                let disjoint = b < c || d < a;
                let nested = (a <= c && d <= b) || (c <= a && b <= d);
                if !disjoint && !nested {
                    return bad(format!("vertices [{a}..{b}] and [{c}..{d}] overlap"));
                }
            }
        }
        Ok(())
    }
}

/// `t1 ∘_i t2`: expand leaf `i` of `t1` into the block `[i..i+l-1]` and graft
/// the vertices of `t2`, shifted by `i-1`, onto it.
pub fn tree_compose(t1: &ReducedTree, i: usize, t2: &ReducedTree) -> Result<ReducedTree> {
    let k = t1.leaf_count;
    if i == 0 || i > k {
        return Err(Error::PositionOutOfRange { position: i, arity: k });
    }
    let (i, l) = (i as u32, t2.leaf_count as u32);
    let image = |j: u32, upper: bool| match j.cmp(&i) {
        std::cmp::Ordering::Less => j,
        std::cmp::Ordering::Greater => j + l - 1,
        std::cmp::Ordering::Equal if upper => i + l - 1,
        std::cmp::Ordering::Equal => i,
    };
    let mut vertices: BTreeSet<(u32, u32)> =
        t1.vertices.iter().map(|&(lo, hi)| (image(lo, false), image(hi, true))).collect();
    vertices.extend(t2.vertices.iter().map(|&(lo, hi)| (lo + i - 1, hi + i - 1)));
    Ok(ReducedTree { leaf_count: k + l as usize - 1, vertices })
}

/// The reduced tree with one vertex per connected bracket of `e ∈ L(k)`.
pub fn tree_of(e: &Expr) -> Result<ReducedTree> {
    let k = require_l(e)?;
    let mut vertices = BTreeSet::new();
    e.visit_spans(&mut |_, s| {
        if s.is_interval() {
            vertices.insert((s.lo, s.hi));
        }
    });
    Ok(ReducedTree { leaf_count: k, vertices })
}

fn require_l(e: &Expr) -> Result<usize> {
    let k = e.arity()?;
    if is_in_l(e)? {
        Ok(k)
    } else {
        Err(Error::NotInL(e.to_string()))
    }
}

/// An element of the free operad on the primes: a leaf, or a prime pattern of
/// arity `m` with `m` children.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FreeElement {
    Unit,
    Node { pattern: Expr, children: Vec<FreeElement> },
}

impl FreeElement {
    pub fn node(pattern: Expr, children: Vec<FreeElement>) -> Result<FreeElement> {
        let f = FreeElement::Node { pattern, children };
        f.validate()?;
        Ok(f)
    }

    pub fn width(&self) -> usize {
        match self {
            FreeElement::Unit => 1,
            FreeElement::Node { children, .. } => children.iter().map(FreeElement::width).sum(),
        }
    }

    /// Checks that every pattern is a prime whose arity equals its child count.
    pub fn validate(&self) -> Result<()> {
        match self {
            FreeElement::Unit => Ok(()),
            FreeElement::Node { pattern, children } => {
                let m = require_l(pattern)?;
                if m < 2 || !is_prime_in_l(pattern) {
                    return Err(Error::Precondition(format!("{pattern} is not prime")));
                }
                if children.len() != m {
                    return Err(Error::Precondition(format!(
                        "{pattern} has arity {m} but {} children",
                        children.len()
                    )));
                }
                children.iter().try_for_each(FreeElement::validate)
            }
        }
    }

    /// Nested JSON: `{"pattern": "...", "children": [...]}` with `"leaf"` for units.
    pub fn to_json(&self) -> Value {
        match self {
            FreeElement::Unit => json!("leaf"),
            FreeElement::Node { pattern, children } => json!({
                "pattern": pattern.to_string(),
                "children": children.iter().map(FreeElement::to_json).collect::<Vec<_>>(),
            }),
        }
    }

    /// The unlabeled tree underlying this element.
    pub fn shape(&self) -> ReducedTree {
        let mut vertices = BTreeSet::new();
        let width = self.collect_vertices(1, &mut vertices);
        ReducedTree { leaf_count: width, vertices }
    }

    fn collect_vertices(&self, start: u32, out: &mut BTreeSet<(u32, u32)>) -> usize {
        match self {
            FreeElement::Unit => 1,
            FreeElement::Node { children, .. } => {
                let mut width = 0;
                for c in children {
                    width += c.collect_vertices(start + width as u32, out);
                }
                out.insert((start, start + width as u32 - 1));
                width
            }
        }
    }
}

/// ψ: cut `e ∈ L(k)` along its maximal proper connected brackets, recursively.
pub fn decompose(e: &Expr) -> Result<FreeElement> {
    require_l(e)?;
    Ok(decompose_word(e))
}

fn decompose_word(e: &Expr) -> FreeElement {
    if e.is_leaf() {
        return FreeElement::Unit;
    }
    // Blocks: maximal proper connected brackets and free symbols, keyed by
    // their smallest index. Both kinds occupy disjoint intervals of the line.
    let mut blocks: Vec<(u32, Option<&Expr>)> = Vec::new();
    let (l, r) = e.children().unwrap();
    collect_blocks(l, &mut blocks);
    collect_blocks(r, &mut blocks);

    let mut firsts: Vec<u32> = blocks.iter().map(|b| b.0).collect();
    firsts.sort_unstable();
    let rank = |i: u32| firsts.binary_search(&i).unwrap() as u32 + 1;

    let mut children = vec![FreeElement::Unit; blocks.len()];
    for &(lo, sub) in &blocks {
        if let Some(sub) = sub {
            children[rank(lo) as usize - 1] = decompose_word(&sub.standardize().0);
        }
    }
    let pattern = collapse(e, &firsts);
    FreeElement::Node { pattern, children }
}

fn collect_blocks<'a>(e: &'a Expr, out: &mut Vec<(u32, Option<&'a Expr>)>) {
    match e {
        Expr::Leaf(i) => out.push((*i, None)),
        Expr::Bracket(l, r) => {
            let s = e.span();
            if s.is_interval() {
                out.push((s.lo, Some(e)));
            } else {
                collect_blocks(l, out);
                collect_blocks(r, out);
            }
        }
    }
}

/// Replace each block by one symbol numbered by the monotone map onto `1..m`.
fn collapse(e: &Expr, firsts: &[u32]) -> Expr {
    fn go(e: &Expr, firsts: &[u32]) -> Expr {
        match e {
            Expr::Leaf(i) => Expr::Leaf(firsts.binary_search(i).unwrap() as u32 + 1),
            Expr::Bracket(l, r) => {
                let s = e.span();
                if s.is_interval() {
                    Expr::Leaf(firsts.binary_search(&s.lo).unwrap() as u32 + 1)
                } else {
                    Expr::bracket(go(l, firsts), go(r, firsts))
                }
            }
        }
    }
    let (l, r) = e.children().expect("collapse of a bracket");
    Expr::bracket(go(l, firsts), go(r, firsts))
}

/// θ: `Unit ↦ x1`, `Node(p, c) ↦ p ∘ (θ(c_1), ..., θ(c_m))`.
pub fn compose_free(f: &FreeElement) -> Result<Expr> {
    match f {
        FreeElement::Unit => Ok(Expr::unit()),
        FreeElement::Node { pattern, children } => {
            let m = pattern.arity()?;
            if children.len() != m {
                return Err(Error::Precondition(format!(
                    "{pattern} has arity {m} but {} children",
                    children.len()
                )));
            }
            let mut out = pattern.clone();
            // descending positions leave the lower indices untouched
            for (pos, child) in children.iter().enumerate().rev() {
                out = compose(&out, pos + 1, &compose_free(child)?)?;
            }
            Ok(out)
        }
    }
}

/// Number of free-operad elements of each width `1..=n`, given prime counts
/// `primes[m] = |P(m)|` for `2 <= m <= n`.
pub fn count_free_elements(primes: &[BigUint], n: usize) -> Vec<BigUint> {
    // counts[w] = elements of width w; seq[m][w] = ordered m-tuples of total width w
    let mut counts = vec![BigUint::zero(); n + 1];
    if n >= 1 {
        counts[1] = BigUint::one();
    }
    for w in 2..=n {
        let mut total = BigUint::zero();
        // tuples[j] after m rounds counts m-tuples of width j, using widths < w
        let mut tuples = vec![BigUint::zero(); w + 1];
        tuples[0] = BigUint::one();
        for m in 1..=w {
            let mut next = vec![BigUint::zero(); w + 1];
            for (j, t) in tuples.iter().enumerate() {
                if t.is_zero() {
                    continue;
                }
                for part in 1..=(w - j).min(w - 1) {
                    next[j + part] += t * &counts[part];
                }
            }
            tuples = next;
            if m >= 2 {
                if let Some(b) = primes.get(m) {
                    total += b * &tuples[w];
                }
            }
        }
        counts[w] = total;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_l;
    use crate::expr::parse;

    fn e(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn node(p: &str, children: Vec<FreeElement>) -> FreeElement {
        FreeElement::node(e(p), children).unwrap()
    }

    use FreeElement::Unit;

    #[test]
    fn tree_composition_by_hand() {
        let t = ReducedTree::new(2, [(1, 2)]).unwrap();
        let left = tree_compose(&t, 1, &t).unwrap();
        assert_eq!(left, ReducedTree::new(3, [(1, 3), (1, 2)]).unwrap());
        let right = tree_compose(&t, 2, &t).unwrap();
        assert_eq!(right, ReducedTree::new(3, [(1, 3), (2, 3)]).unwrap());
        assert_eq!(left.vertices().len(), 2);
        assert!(tree_compose(&t, 3, &t).is_err());
        assert_eq!(tree_compose(&t, 2, &ReducedTree::unit()).unwrap(), t);
    }

    #[test]
    fn tree_validation() {
        assert!(ReducedTree::new(3, [(1, 2)]).is_err());
        assert!(ReducedTree::new(4, [(1, 4), (1, 3), (2, 4)]).is_err());
        assert!(ReducedTree::new(4, [(1, 4), (2, 2)]).is_err());
        assert!(ReducedTree::new(1, [(1, 1)]).is_err());
        assert!(ReducedTree::new(5, [(1, 5), (1, 4), (2, 3)]).is_ok());
    }

    #[test]
    fn trees_of_words() {
        assert_eq!(tree_of(&e("[[[x1,x3],[x2,x4]],x5]")).unwrap().vertices(), &BTreeSet::from([(1, 5), (1, 4)]));
        assert_eq!(tree_of(&e("[[x1,x3],[[x2,x4],x5]]")).unwrap().vertices(), &BTreeSet::from([(1, 5)]));
        assert_eq!(tree_of(&e("[x1,[x2,x3]]")).unwrap().vertices(), &BTreeSet::from([(1, 3), (2, 3)]));
        assert_eq!(tree_of(&Expr::unit()).unwrap(), ReducedTree::unit());
        assert!(tree_of(&e("[x2,x1]")).is_err());
    }

    #[test]
    fn decomposes_examples() {
        let f = decompose(&e("[[[x1,x3],[x2,x4]],x5]")).unwrap();
        let expected = node("[x1,x2]", vec![node("[[x1,x3],[x2,x4]]", vec![Unit, Unit, Unit, Unit]), Unit]);
        assert_eq!(f, expected);
        assert_eq!(compose_free(&f).unwrap().to_string(), "[[[x1,x3],[x2,x4]],x5]");

        assert_eq!(decompose(&e("[x1,x2]")).unwrap(), node("[x1,x2]", vec![Unit, Unit]));
        assert_eq!(
            decompose(&e("[x1,[x2,x3]]")).unwrap(),
            node("[x1,x2]", vec![Unit, node("[x1,x2]", vec![Unit, Unit])])
        );
        assert_eq!(decompose(&Expr::unit()).unwrap(), Unit);
        assert_eq!(compose_free(&node("[x1,x2]", vec![Unit, Unit])).unwrap().to_string(), "[x1,x2]");
    }

    #[test]
    fn inner_blocks_are_relabeled() {
        // [x2,x3] sits in the middle of a prime pattern
        let w = e("[[x1,[x3,x4]],[[x2,x5],x6]]");
        let f = decompose(&w).unwrap();
        if let FreeElement::Node { ref pattern, ref children } = f {
            assert_eq!(pattern.to_string(), "[[x1,x3],[[x2,x4],x5]]");
            assert_eq!(children[2], node("[x1,x2]", vec![Unit, Unit]));
        } else {
            panic!("expected a node");
        }
        assert_eq!(compose_free(&f).unwrap(), w);
        assert_eq!(f.shape(), tree_of(&w).unwrap());
    }

    #[test]
    fn json_shape() {
        let f = decompose(&e("[x1,[x2,x3]]")).unwrap();
        assert_eq!(
            f.to_json().to_string(),
            r#"{"children":["leaf",{"children":["leaf","leaf"],"pattern":"[x1,x2]"}],"pattern":"[x1,x2]"}"#
        );
    }

    #[test]
    fn round_trip_exhaustive_small() {
        for n in 1..=7 {
            for w in enumerate_l(n).unwrap() {
                let f = decompose(&w).unwrap();
                f.validate().unwrap();
                assert_eq!(f.width(), n);
                assert_eq!(compose_free(&f).unwrap(), w);
                assert_eq!(f.shape(), tree_of(&w).unwrap());
            }
        }
    }

    #[test]
    fn node_validation() {
        assert!(FreeElement::node(e("[x1,[x2,x3]]"), vec![Unit, Unit, Unit]).is_err());
        assert!(FreeElement::node(e("[x1,x2]"), vec![Unit]).is_err());
        assert!(FreeElement::node(e("[x2,x1]"), vec![Unit, Unit]).is_err());
    }

    #[test]
    fn free_counts_are_factorials() {
        // b_2..b_8 as counted by enumeration
        let primes: Vec<BigUint> = [0u32, 0, 1, 0, 1, 4, 22, 144, 1089].iter().map(|&b| BigUint::from(b)).collect();
        let counts = count_free_elements(&primes, 8);
        let mut fact = BigUint::one();
        for (n, count) in counts.iter().enumerate().skip(1) {
            if n > 1 {
                fact *= BigUint::from(n - 1);
            }
            assert_eq!(count, &fact, "width {n}");
        }
    }
}
