//! Bracket words, their canonical text form, and the operad structure of `L`.
//!
//! A word is a full binary tree of brackets over leaves `x1, x2, ...`. The set
//! `L(n)` consists of the words on `x1..xn` in which every bracket has its
//! smallest index somewhere in the left child and its largest index somewhere
//! in the right child.
//!
//! Text grammar (whitespace is ignored on input, never emitted):
//!
//! ```text
//! expr := leaf | '[' expr ',' expr ']'
//! leaf := 'x' nonzero-digit digit*
//! ```

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Leaf(u32),
    Bracket(Box<Expr>, Box<Expr>),
}

/// Minimum, maximum and number of the leaf indices under a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexSpan {
    pub lo: u32,
    pub hi: u32,
    pub count: u32,
}

impl IndexSpan {
    pub fn single(i: u32) -> Self {
        IndexSpan { lo: i, hi: i, count: 1 }
    }

    /// Span of the disjoint union of two leaf sets.
    pub fn join(self, other: IndexSpan) -> Self {
        IndexSpan {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
            count: self.count + other.count,
        }
    }

    /// The indices form a run of consecutive integers.
    pub fn is_interval(self) -> bool {
        self.count == self.hi - self.lo + 1
    }

    pub fn contains(self, i: u32) -> bool {
        self.lo <= i && i <= self.hi
    }
}

impl Expr {
    pub fn leaf(i: u32) -> Expr {
        Expr::Leaf(i)
    }

    pub fn bracket(left: Expr, right: Expr) -> Expr {
        Expr::Bracket(Box::new(left), Box::new(right))
    }

    /// The operad unit `x1`.
    pub fn unit() -> Expr {
        Expr::Leaf(1)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Expr::Leaf(_))
    }

    pub fn children(&self) -> Option<(&Expr, &Expr)> {
        match self {
            Expr::Leaf(_) => None,
            Expr::Bracket(l, r) => Some((l, r)),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Expr::Leaf(_) => 1,
            Expr::Bracket(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    pub fn bracket_count(&self) -> usize {
        self.leaf_count() - 1
    }

    /// Leaf indices in left-to-right order.
    pub fn indices(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.leaf_count());
        self.collect_indices(&mut out);
        out
    }

    fn collect_indices(&self, out: &mut Vec<u32>) {
        match self {
            Expr::Leaf(i) => out.push(*i),
            Expr::Bracket(l, r) => {
                l.collect_indices(out);
                r.collect_indices(out);
            }
        }
    }

    pub fn span(&self) -> IndexSpan {
        self.visit_spans(&mut |_, _| {})
    }

    pub fn contains_index(&self, i: u32) -> bool {
        match self {
            Expr::Leaf(j) => *j == i,
            Expr::Bracket(l, r) => l.contains_index(i) || r.contains_index(i),
        }
    }

    /// Post-order walk calling `f` on every bracket node with its span.
    /// Returns the span of `self`.
    pub fn visit_spans<F>(&self, f: &mut F) -> IndexSpan
    where
        F: FnMut(&Expr, IndexSpan),
    {
        match self {
            Expr::Leaf(i) => IndexSpan::single(*i),
            Expr::Bracket(l, r) => {
                let s = l.visit_spans(f).join(r.visit_spans(f));
                f(self, s);
                s
            }
        }
    }

    /// Bracket nodes in post order.
    pub fn brackets(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        self.collect_brackets(&mut out);
        out
    }

    fn collect_brackets<'a>(&'a self, out: &mut Vec<&'a Expr>) {
        if let Expr::Bracket(l, r) = self {
            l.collect_brackets(out);
            r.collect_brackets(out);
            out.push(self);
        }
    }

    pub fn map_indices<F>(&self, f: &F) -> Expr
    where
        F: Fn(u32) -> u32,
    {
        match self {
            Expr::Leaf(i) => Expr::Leaf(f(*i)),
            Expr::Bracket(l, r) => Expr::bracket(l.map_indices(f), r.map_indices(f)),
        }
    }

    pub fn shift(&self, by: u32) -> Expr {
        self.map_indices(&|i| i + by)
    }

    /// Relabel a word on `1..m` by `i -> targets[i - 1]`.
    pub fn relabel(&self, targets: &[u32]) -> Expr {
        self.map_indices(&|i| targets[i as usize - 1])
    }

    /// Order-isomorphic relabeling onto `1..m`. Returns the pattern together
    /// with the sorted original indices, so `pattern.relabel(&indices) == self`.
    pub fn standardize(&self) -> (Expr, Vec<u32>) {
        let mut sorted = self.indices();
        sorted.sort_unstable();
        let pattern = self.map_indices(&|i| sorted.binary_search(&i).unwrap() as u32 + 1);
        (pattern, sorted)
    }

    /// Number of symbols, provided the leaves carry exactly `1..n`.
    pub fn arity(&self) -> Result<usize> {
        let mut idx = self.indices();
        let n = idx.len();
        idx.sort_unstable();
        if idx.iter().enumerate().all(|(k, &i)| i as usize == k + 1) {
            Ok(n)
        } else {
            Err(Error::NotAWord { arity: n })
        }
    }

    /// Whether the word satisfies the min-left / max-right rule at every bracket.
    /// Does not check that the leaves are `1..n`.
    pub fn satisfies_l_rule(&self) -> bool {
        fn go(e: &Expr) -> Option<IndexSpan> {
            match e {
                Expr::Leaf(i) => Some(IndexSpan::single(*i)),
                Expr::Bracket(l, r) => {
                    let (ls, rs) = (go(l)?, go(r)?);
                    (ls.lo < rs.lo && rs.hi > ls.hi).then(|| ls.join(rs))
                }
            }
        }
        go(self).is_some()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Leaf(i) => write!(f, "x{i}"),
            Expr::Bracket(l, r) => write!(f, "[{l},{r}]"),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Expr> {
        parse(s)
    }
}

/// Parse the canonical grammar. Leaf indices must be nonzero and distinct but
/// need not form `1..n`.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, seen: HashSet::new() };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    seen: HashSet<u32>,
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'x') => self.leaf(),
            Some(b'[') => {
                self.pos += 1;
                let left = self.expr()?;
                self.expect(b',')?;
                let right = self.expr()?;
                self.expect(b']')?;
                Ok(Expr::bracket(left, right))
            }
            Some(_) => Err(self.syntax("expected 'x' or '['")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn leaf(&mut self) -> Result<Expr> {
        let start = self.pos;
        self.pos += 1;
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = &self.src[digits_start..self.pos];
        if digits.is_empty() {
            return Err(self.syntax("expected digits after 'x'"));
        }
        if digits[0] == b'0' {
            if digits.iter().all(|&d| d == b'0') {
                return Err(Error::ZeroIndex { pos: start });
            }
            return Err(Error::Syntax { pos: digits_start, msg: "leading zero in index".into() });
        }
        let index: u32 = std::str::from_utf8(digits)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Syntax { pos: digits_start, msg: "index too large".into() })?;
        if !self.seen.insert(index) {
            return Err(Error::DuplicateIndex { index });
        }
        Ok(Expr::Leaf(index))
    }
}

/// Membership in `L(n)`. Errors unless the leaves are exactly `1..n`.
pub fn is_in_l(e: &Expr) -> Result<bool> {
    e.arity()?;
    Ok(e.satisfies_l_rule())
}

fn require_l(e: &Expr) -> Result<usize> {
    let n = e.arity()?;
    if e.satisfies_l_rule() {
        Ok(n)
    } else {
        Err(Error::NotInL(e.to_string()))
    }
}

/// A bracket is connected when its leaf indices form an interval.
pub fn is_connected(node: &Expr) -> Result<bool> {
    match node {
        Expr::Leaf(_) => Err(Error::ExpectedBracket(node.to_string())),
        Expr::Bracket(..) => Ok(node.span().is_interval()),
    }
}

/// An element of `L(n)`, `n >= 2`, whose only connected bracket is the outer one.
pub fn is_prime(e: &Expr) -> Result<bool> {
    let n = require_l(e)?;
    if n < 2 {
        return Err(Error::Precondition("primes have at least two symbols".into()));
    }
    Ok(count_connected(e) == 1)
}

pub(crate) fn count_connected(e: &Expr) -> usize {
    let mut connected = 0;
    e.visit_spans(&mut |_, s| {
        if s.is_interval() {
            connected += 1;
        }
    });
    connected
}

/// `a ∘_i b`: substitute `b` (shifted by `i-1`) for leaf `i` of `a`, shifting the
/// indices of `a` above `i` by `l-1`.
pub fn compose(a: &Expr, i: usize, b: &Expr) -> Result<Expr> {
    let k = a.arity()?;
    let l = b.arity()?;
    if i == 0 || i > k {
        return Err(Error::PositionOutOfRange { position: i, arity: k });
    }
    Ok(substitute(a, i as u32, b, l as u32))
}

fn substitute(a: &Expr, i: u32, b: &Expr, l: u32) -> Expr {
    match a {
        Expr::Leaf(j) if *j < i => Expr::Leaf(*j),
        Expr::Leaf(j) if *j > i => Expr::Leaf(*j + l - 1),
        Expr::Leaf(_) => b.shift(i - 1),
        Expr::Bracket(x, y) => Expr::bracket(substitute(x, i, b, l), substitute(y, i, b, l)),
    }
}
