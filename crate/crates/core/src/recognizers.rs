//! Direct single-pass recognizers for extended non-associative words (E)
//! and balanced words (B), the tree view of E, and its enumeration.
//!
//! Nothing here calls into [`crate::grammar`]; the chart recognizer is kept
//! as an independent oracle for these.

use std::fmt;

use thiserror::Error;

use crate::exec::{self, Execution};
use crate::words::{Letter, Word};

/// The two leaf factors of an extended non-associative word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LeafKind {
    /// `pzp`
    Pzp,
    /// `pzzp`
    Pzzp,
}

impl LeafKind {
    pub fn z_count(self) -> usize {
        match self {
            LeafKind::Pzp => 1,
            LeafKind::Pzzp => 2,
        }
    }

    pub fn letters(self) -> &'static [Letter] {
        use Letter::*;
        match self {
            LeafKind::Pzp => &[P, Z, P],
            LeafKind::Pzzp => &[P, Z, Z, P],
        }
    }
}

/// Full binary tree view of a word of E: internal nodes are matched `x … y`
/// pairs, leaves are `pzp` or `pzzp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EnwTree {
    Leaf(LeafKind),
    Node(Box<EnwTree>, Box<EnwTree>),
}

impl EnwTree {
    pub fn node(left: EnwTree, right: EnwTree) -> EnwTree {
        EnwTree::Node(Box::new(left), Box::new(right))
    }

    pub fn serialize(&self) -> Word {
        let mut out = Word::empty();
        self.write_into(&mut out);
        out
    }

    fn write_into(&self, out: &mut Word) {
        match self {
            EnwTree::Leaf(kind) => kind.letters().iter().for_each(|&l| out.push(l)),
            EnwTree::Node(l, r) => {
                out.push(Letter::X);
                l.write_into(out);
                r.write_into(out);
                out.push(Letter::Y);
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            EnwTree::Leaf(_) => 1,
            EnwTree::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    pub fn internal_count(&self) -> usize {
        match self {
            EnwTree::Leaf(_) => 0,
            EnwTree::Node(l, r) => 1 + l.internal_count() + r.internal_count(),
        }
    }

    /// Leaf kinds in left-to-right order.
    pub fn leaves(&self) -> Vec<LeafKind> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<LeafKind>) {
        match self {
            EnwTree::Leaf(k) => out.push(*k),
            EnwTree::Node(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    /// Number of internal nodes above each leaf, left to right.
    pub fn leaf_depths(&self) -> Vec<usize> {
        fn walk(t: &EnwTree, d: usize, out: &mut Vec<usize>) {
            match t {
                EnwTree::Leaf(_) => out.push(d),
                EnwTree::Node(l, r) => {
                    walk(l, d + 1, out);
                    walk(r, d + 1, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, 0, &mut out);
        out
    }

    /// True when every leaf sits at the same depth.
    pub fn is_perfect(&self) -> bool {
        let depths = self.leaf_depths();
        depths.windows(2).all(|w| w[0] == w[1])
    }
}

impl fmt::Display for EnwTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnwTree::Leaf(LeafKind::Pzp) => f.write_str("PZP"),
            EnwTree::Leaf(LeafKind::Pzzp) => f.write_str("PZZP"),
            EnwTree::Node(l, r) => write!(f, "node({l}, {r})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum LeafProgress {
    None,
    P,
    Pz,
    Pzz,
}

/// Incremental recognizer for E.
///
/// The scanner reports failure on the first letter after which no
/// completion to a word of E exists, so it doubles as an exact viable-prefix
/// test.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EnwScanner {
    /// Children completed so far for each open `x`.
    open: Vec<u8>,
    leaf: LeafProgress,
    started: bool,
    closed: bool,
    dead: bool,
}

impl Default for EnwScanner {
    fn default() -> Self {
        Self::new()
    }
}

impl EnwScanner {
    pub fn new() -> Self {
        EnwScanner { open: Vec::new(), leaf: LeafProgress::None, started: false, closed: false, dead: false }
    }

    pub fn is_dead(&self) -> bool {
        self.dead
    }

    /// Current bracket nesting depth.
    pub fn depth(&self) -> usize {
        self.open.len()
    }

    fn child_done(&mut self) {
        match self.open.last_mut() {
            Some(top) => *top += 1,
            None => self.closed = true,
        }
    }

    /// Feeds one letter; returns `false` once the prefix read so far can no
    /// longer be extended to a word of E.
    pub fn push(&mut self, l: Letter) -> bool {
        if self.dead {
            return false;
        }
        let ok = self.step(l);
        if !ok {
            self.dead = true;
        }
        ok
    }

    fn step(&mut self, l: Letter) -> bool {
        use Letter::*;
        if self.closed {
            return false;
        }
        match (self.leaf, l) {
            (LeafProgress::P, Z) => {
                self.leaf = LeafProgress::Pz;
                true
            }
            (LeafProgress::Pz, Z) => {
                self.leaf = LeafProgress::Pzz;
                true
            }
            (LeafProgress::Pz | LeafProgress::Pzz, P) => {
                self.leaf = LeafProgress::None;
                self.child_done();
                true
            }
            (LeafProgress::None, X) => {
                if self.started && !matches!(self.open.last(), Some(c) if *c < 2) {
                    return false;
                }
                self.started = true;
                self.open.push(0);
                true
            }
            (LeafProgress::None, P) => {
                if matches!(self.open.last(), Some(c) if *c < 2) {
                    self.leaf = LeafProgress::P;
                    true
                } else {
                    false
                }
            }
            (LeafProgress::None, Y) if self.open.last() == Some(&2) => {
                self.open.pop();
                self.child_done();
                true
            }
            _ => false,
        }
    }

    pub fn accepts(&self) -> bool {
        !self.dead && self.closed
    }
}

/// Membership in E, the language generated from `x v₁ v₂ y` with
/// `v₁, v₂ ∈ {pzp, pzzp} ∪ E`.
pub fn is_enw(w: &Word) -> bool {
    let mut s = EnwScanner::new();
    w.letters().iter().all(|&l| s.push(l)) && s.accepts()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("not an extended non-associative word: at position {position} expected {expected}, found {}", found.map(|l| l.to_string()).unwrap_or_else(|| "end of word".into()))]
pub struct EnwParseError {
    pub position: usize,
    pub expected: &'static str,
    pub found: Option<Letter>,
}

/// Parses a word of E into its tree. Fails at the first position where the
/// word leaves E.
pub fn parse_enw(w: &Word) -> Result<EnwTree, EnwParseError> {
    let letters = w.letters();
    let err = |position: usize, expected: &'static str| EnwParseError {
        position,
        expected,
        found: letters.get(position).copied(),
    };
    let mut stack: Vec<Vec<EnwTree>> = Vec::new();
    let mut pos = 0;
    if letters.first() != Some(&Letter::X) {
        return Err(err(0, "x"));
    }
    loop {
        match letters.get(pos) {
            Some(Letter::X) => {
                if stack.last().is_some_and(|c| c.len() >= 2) {
                    return Err(err(pos, "y"));
                }
                stack.push(Vec::with_capacity(2));
                pos += 1;
            }
            Some(Letter::P) => {
                let Some(children) = stack.last_mut() else {
                    return Err(err(pos, "end of word"));
                };
                if children.len() >= 2 {
                    return Err(err(pos, "y"));
                }
                let kind = match (letters.get(pos + 1), letters.get(pos + 2), letters.get(pos + 3)) {
                    (Some(Letter::Z), Some(Letter::P), _) => LeafKind::Pzp,
                    (Some(Letter::Z), Some(Letter::Z), Some(Letter::P)) => LeafKind::Pzzp,
                    (Some(Letter::Z), Some(Letter::Z), _) => return Err(err(pos + 3, "p")),
                    (Some(Letter::Z), _, _) => return Err(err(pos + 2, "z or p")),
                    _ => return Err(err(pos + 1, "z")),
                };
                children.push(EnwTree::Leaf(kind));
                pos += kind.letters().len();
            }
            Some(Letter::Y) => {
                let Some(children) = stack.pop() else {
                    return Err(err(pos, "end of word"));
                };
                if children.len() != 2 {
                    stack.push(children);
                    return Err(err(pos, "x or p"));
                }
                let mut it = children.into_iter();
                let node = EnwTree::node(it.next().unwrap(), it.next().unwrap());
                pos += 1;
                match stack.last_mut() {
                    Some(parent) => parent.push(node),
                    None => {
                        return if pos == letters.len() { Ok(node) } else { Err(err(pos, "end of word")) };
                    }
                }
            }
            Some(Letter::Z) => {
                return Err(err(pos, if stack.last().is_some_and(|c| c.len() >= 2) { "y" } else { "x or p" }))
            }
            None => {
                let expected = if stack.last().is_some_and(|c| c.len() >= 2) { "y" } else { "x or p" };
                return Err(err(pos, expected));
            }
        }
    }
}

/// Which base case the inner blocks `p yⁱ xⁱ p` of a balanced word may use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BlockBase {
    /// `i ≥ 0`, so `pp` is a block. This is what the grammar's `T -> eps`
    /// generates.
    #[default]
    Grammar,
    /// `i ≥ 1`; `pp` is not a block. Kept for auditing the recursive
    /// definition read literally.
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum BalPhase {
    Lead,
    /// After a `p` that must be followed by one or two `z`.
    Gap {
        zs: u8,
    },
    /// After `Z p`: either a block body `yᵃ xᵃ p` or the closing `yⁱ`.
    AfterGap {
        ys: usize,
    },
    BlockXs {
        a: usize,
        b: usize,
    },
}

/// Incremental recognizer for B: words `xⁱ p Z β₁ Z β₂ … Z βₖ Z p yⁱ` with
/// `k ≥ 1`, `Z ∈ {z, zz}` and blocks `βⱼ = p yᵃ xᵃ p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BalancedScanner {
    base: BlockBase,
    phase: BalPhase,
    lead: usize,
    blocks: usize,
    dead: bool,
}

impl BalancedScanner {
    pub fn new(base: BlockBase) -> Self {
        BalancedScanner { base, phase: BalPhase::Lead, lead: 0, blocks: 0, dead: false }
    }

    pub fn is_dead(&self) -> bool {
        self.dead
    }

    pub fn push(&mut self, l: Letter) -> bool {
        if self.dead {
            return false;
        }
        let ok = self.step(l);
        if !ok {
            self.dead = true;
        }
        ok
    }

    fn close_block(&mut self, a: usize) -> bool {
        if self.base == BlockBase::Strict && a == 0 {
            return false;
        }
        self.blocks += 1;
        self.phase = BalPhase::Gap { zs: 0 };
        true
    }

    fn step(&mut self, l: Letter) -> bool {
        use Letter::*;
        match (self.phase, l) {
            (BalPhase::Lead, X) => {
                self.lead += 1;
                true
            }
            (BalPhase::Lead, P) => {
                self.phase = BalPhase::Gap { zs: 0 };
                true
            }
            (BalPhase::Gap { zs }, Z) if zs < 2 => {
                self.phase = BalPhase::Gap { zs: zs + 1 };
                true
            }
            (BalPhase::Gap { zs }, P) if zs > 0 => {
                self.phase = BalPhase::AfterGap { ys: 0 };
                true
            }
            (BalPhase::AfterGap { ys }, Y) => {
                self.phase = BalPhase::AfterGap { ys: ys + 1 };
                true
            }
            (BalPhase::AfterGap { ys }, X) if ys >= 1 => {
                self.phase = BalPhase::BlockXs { a: ys, b: 1 };
                true
            }
            (BalPhase::AfterGap { ys: 0 }, P) => self.close_block(0),
            (BalPhase::BlockXs { a, b }, X) if b < a => {
                self.phase = BalPhase::BlockXs { a, b: b + 1 };
                true
            }
            (BalPhase::BlockXs { a, b }, P) if a == b => self.close_block(a),
            _ => false,
        }
    }

    pub fn accepts(&self) -> bool {
        !self.dead && self.blocks >= 1 && self.phase == BalPhase::AfterGap { ys: self.lead }
    }
}

pub fn is_balanced(w: &Word) -> bool {
    is_balanced_with(w, BlockBase::Grammar)
}

pub fn is_balanced_with(w: &Word, base: BlockBase) -> bool {
    let mut s = BalancedScanner::new(base);
    w.letters().iter().all(|&l| s.push(l)) && s.accepts()
}

/// True iff every factor `p w' p` of `w` has as many `x` as `y` inside `w'`.
pub fn check_balanced_factors(w: &Word) -> bool {
    let letters = w.letters();
    for (i, &l) in letters.iter().enumerate() {
        if l != Letter::P {
            continue;
        }
        let mut diff: isize = 0;
        for &m in &letters[i + 1..] {
            match m {
                Letter::X => diff += 1,
                Letter::Y => diff -= 1,
                Letter::P if diff != 0 => return false,
                _ => {}
            }
        }
    }
    true
}

/// The `n`-th Catalan number.
pub fn catalan(n: u32) -> u128 {
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

/// `2^leaves · C_{leaves-1}`: the number of words of E with `leaves` leaves.
pub fn enw_count_formula(leaves: u32) -> u128 {
    (1u128 << leaves) * catalan(leaves - 1)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("a word of E has at least 2 leaves, got {0}")]
    TooFewLeaves(usize),
    #[error("{0} leaves is beyond the supported enumeration range (at most {1})")]
    TooManyLeaves(usize, usize),
}

/// Largest leaf count [`enumerate_enw`] accepts; the labelings are indexed by
/// a `u64` bitmask.
pub const MAX_ENUM_LEAVES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ShapeToken {
    Open,
    Leaf,
    Close,
}

/// Full binary tree shapes with `leaves` leaves, as bracket/leaf token
/// sequences, in canonical order: smaller left subtree first, then left
/// shape order, then right shape order.
pub(crate) fn shapes(leaves: usize) -> Vec<Vec<ShapeToken>> {
    let mut table: Vec<Vec<Vec<ShapeToken>>> = vec![Vec::new(), vec![vec![ShapeToken::Leaf]]];
    for k in 2..=leaves {
        let mut out = Vec::new();
        for left in 1..k {
            for a in &table[left] {
                for b in &table[k - left] {
                    let mut s = Vec::with_capacity(a.len() + b.len() + 2);
                    s.push(ShapeToken::Open);
                    s.extend_from_slice(a);
                    s.extend_from_slice(b);
                    s.push(ShapeToken::Close);
                    out.push(s);
                }
            }
        }
        table.push(out);
    }
    table.swap_remove(leaves)
}

/// Serializes a shape with leaf kinds taken from `mask`: the leftmost leaf
/// reads the most significant of `leaves` bits, a set bit meaning `pzzp`.
pub(crate) fn serialize_shape(shape: &[ShapeToken], leaves: usize, mask: u64, out: &mut Vec<Letter>) {
    let mut leaf = 0;
    for t in shape {
        match t {
            ShapeToken::Open => out.push(Letter::X),
            ShapeToken::Close => out.push(Letter::Y),
            ShapeToken::Leaf => {
                let bit = (mask >> (leaves - 1 - leaf)) & 1;
                let kind = if bit == 1 { LeafKind::Pzzp } else { LeafKind::Pzp };
                out.extend_from_slice(kind.letters());
                leaf += 1;
            }
        }
    }
}

/// Every word of E with exactly `leaves` leaves, in canonical order: shapes
/// as in the shape order above, then leaf labelings as a binary counter.
pub fn enumerate_enw(leaves: usize) -> Result<Vec<Word>, EnumerateError> {
    enumerate_enw_with(leaves, Execution::default())
}

pub fn enumerate_enw_with(leaves: usize, exec: Execution) -> Result<Vec<Word>, EnumerateError> {
    if leaves < 2 {
        return Err(EnumerateError::TooFewLeaves(leaves));
    }
    if leaves > MAX_ENUM_LEAVES {
        return Err(EnumerateError::TooManyLeaves(leaves, MAX_ENUM_LEAVES));
    }
    let shapes = shapes(leaves);
    let per_shape = exec::map_collect(exec, &shapes, |shape| {
        (0..1u64 << leaves)
            .map(|mask| {
                let mut out = Vec::with_capacity(shape.len() + 2 * leaves);
                serialize_shape(shape, leaves, mask, &mut out);
                Word::from_letters(out)
            })
            .collect::<Vec<_>>()
    });
    Ok(per_shape.into_iter().flatten().collect())
}
