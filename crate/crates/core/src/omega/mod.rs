//! Ω = E ∩ B, the balanced extended non-associative words.
//!
//! Every word of Ω serializes a perfect binary tree whose leaves are `pzp`
//! or `pzzp`, so a word of height `h` has between `2^h` and `2^{h+1}`
//! letters `z`. The [`audit`] submodule checks these laws exhaustively.

pub mod audit;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::recognizers::{is_balanced, is_enw, parse_enw, serialize_shape, EnwTree, LeafKind, ShapeToken};
use crate::words::{height, occur_letter, replace, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OmegaError {
    #[error("Ω({0}) is empty: words of Ω have at least 2 letters z")]
    TooFewZ(BigUint),
    #[error("n = {n} is outside the enumeration range 2..={max}")]
    OutOfRange { n: usize, max: usize },
    #[error("{0} is not in Ω")]
    NotOmega(Word),
    #[error("height must be at least 1 and leaf kinds must number 2^height")]
    BadTreeSpec,
}

/// Largest `n` accepted by [`enumerate_omega`].
pub const MAX_ENUM_Z: usize = 64;

/// Membership in Ω: both [`is_enw`] and [`is_balanced`].
pub fn is_omega(w: &Word) -> bool {
    is_enw(w) && is_balanced(w)
}

/// A perfect full binary tree of the given height with `pzp`/`pzzp` leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PerfectTreeSpec {
    height: u32,
    leaf_kinds: Vec<LeafKind>,
}

impl PerfectTreeSpec {
    pub fn new(height: u32, leaf_kinds: Vec<LeafKind>) -> Result<Self, OmegaError> {
        if height == 0 || height > 32 || leaf_kinds.len() != 1usize << height {
            return Err(OmegaError::BadTreeSpec);
        }
        Ok(PerfectTreeSpec { height, leaf_kinds })
    }

    /// Height `height` with the leftmost `pzp_count` leaves `pzp` and the rest `pzzp`.
    pub fn leftmost_pzp(height: u32, pzp_count: usize) -> Result<Self, OmegaError> {
        let leaves = 1usize.checked_shl(height).ok_or(OmegaError::BadTreeSpec)?;
        if pzp_count > leaves {
            return Err(OmegaError::BadTreeSpec);
        }
        let kinds = (0..leaves).map(|i| if i < pzp_count { LeafKind::Pzp } else { LeafKind::Pzzp }).collect();
        Self::new(height, kinds)
    }

    /// Recovers the tree from a word of E whose leaves all sit at one depth.
    pub fn from_word(w: &Word) -> Option<Self> {
        let tree = parse_enw(w).ok()?;
        if !tree.is_perfect() {
            return None;
        }
        let depth = tree.leaf_depths()[0] as u32;
        Self::new(depth, tree.leaves()).ok()
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn leaf_kinds(&self) -> &[LeafKind] {
        &self.leaf_kinds
    }

    pub fn z_count(&self) -> usize {
        self.leaf_kinds.iter().map(|k| k.z_count()).sum()
    }

    pub fn to_tree(&self) -> EnwTree {
        fn build(kinds: &[LeafKind]) -> EnwTree {
            if kinds.len() == 1 {
                return EnwTree::Leaf(kinds[0]);
            }
            let (l, r) = kinds.split_at(kinds.len() / 2);
            EnwTree::node(build(l), build(r))
        }
        build(&self.leaf_kinds)
    }

    pub fn serialize(&self) -> Word {
        let mut out = Vec::with_capacity(2 * self.leaf_kinds.len() + self.z_count() + self.leaf_kinds.len() * 2);
        let mut leaves = self.leaf_kinds.iter();
        for t in perfect_shape(self.height) {
            match t {
                ShapeToken::Open => out.push(Letter::X),
                ShapeToken::Close => out.push(Letter::Y),
                ShapeToken::Leaf => out.extend_from_slice(leaves.next().unwrap().letters()),
            }
        }
        Word::from_letters(out)
    }
}

/// Token sequence of the perfect tree of height `h`.
pub(crate) fn perfect_shape(h: u32) -> Vec<ShapeToken> {
    fn go(h: u32, out: &mut Vec<ShapeToken>) {
        if h == 0 {
            out.push(ShapeToken::Leaf);
        } else {
            out.push(ShapeToken::Open);
            go(h - 1, out);
            go(h - 1, out);
            out.push(ShapeToken::Close);
        }
    }
    let mut out = Vec::new();
    go(h, &mut out);
    out
}

/// Heights `h ≥ 1` with `2^h ≤ n ≤ 2^{h+1}`, ascending. Two heights exist
/// exactly when `n` is a power of two of at least 4.
pub fn feasible_heights(n: impl Into<BigUint>) -> Result<Vec<u64>, OmegaError> {
    let n = n.into();
    if n < BigUint::from(2u32) {
        return Err(OmegaError::TooFewZ(n));
    }
    let floor_log = n.bits() - 1;
    let power_of_two = n.count_ones() == 1;
    let mut out = Vec::with_capacity(2);
    if power_of_two && floor_log >= 2 {
        out.push(floor_log - 1);
    }
    out.push(floor_log);
    Ok(out)
}

/// A word of Ω with exactly `n` letters `z`.
///
/// With `2^{j-1} < n ≤ 2^j`, start from the all-`pzzp` perfect tree of
/// height `max(j-1, 1)` and replace the leftmost `pzzp` by `pzp` until `n`
/// letters `z` remain.
pub fn construct_omega(n: usize) -> Result<Word, OmegaError> {
    if n < 2 {
        return Err(OmegaError::TooFewZ(BigUint::from(n)));
    }
    let j = n.next_power_of_two().trailing_zeros();
    let h = j.saturating_sub(1).max(1);
    let mut w = PerfectTreeSpec::leftmost_pzp(h, 0)?.serialize();
    let (pzzp, pzp) = (Word::parse("pzzp").unwrap(), Word::parse("pzp").unwrap());
    let start = 1usize << (h + 1);
    for _ in n..start {
        w = replace(&w, &pzzp, &pzp).expect("pattern is nonempty");
    }
    Ok(w)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// `Σ_h C(2^h, n − 2^h)` over the feasible heights of `n`.
pub fn omega_count_formula(n: usize) -> Result<u128, OmegaError> {
    Ok(feasible_heights(n)?
        .into_iter()
        .map(|h| {
            let leaves = 1u128 << h;
            binomial(leaves, n as u128 - leaves)
        })
        .sum())
}

/// Lazily enumerates Ω(n): heights ascending, then leaf masks with
/// `n − 2^h` `pzzp` leaves in increasing binary order (leftmost leaf is the
/// most significant bit). Every word is checked with both recognizers before
/// it is yielded.
pub fn enumerate_omega(n: usize) -> Result<OmegaWords, OmegaError> {
    if !(2..=MAX_ENUM_Z).contains(&n) {
        return Err(OmegaError::OutOfRange { n, max: MAX_ENUM_Z });
    }
    let heights = feasible_heights(n)?;
    Ok(OmegaWords { n, heights, height_idx: 0, current: None })
}

struct HeightCursor {
    shape: Vec<ShapeToken>,
    leaves: usize,
    mask: u128,
}

pub struct OmegaWords {
    n: usize,
    heights: Vec<u64>,
    height_idx: usize,
    current: Option<HeightCursor>,
}

/// Next integer above `mask` with the same popcount.
fn next_same_popcount(mask: u128) -> Option<u128> {
    if mask == 0 {
        return None;
    }
    let c = mask & mask.wrapping_neg();
    let r = mask.checked_add(c)?;
    Some((((r ^ mask) >> 2) / c) | r)
}

impl Iterator for OmegaWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        loop {
            if self.current.is_none() {
                let h = *self.heights.get(self.height_idx)?;
                self.height_idx += 1;
                let leaves = 1usize << h;
                let k = self.n - leaves;
                let mask = if k == 0 { 0 } else { (1u128 << k) - 1 };
                self.current = Some(HeightCursor { shape: perfect_shape(h as u32), leaves, mask });
            }
            let cur = self.current.as_mut().unwrap();
            if cur.mask >> cur.leaves != 0 {
                self.current = None;
                continue;
            }
            let mut letters = Vec::with_capacity(cur.shape.len() + 3 * cur.leaves);
            serialize_shape(&cur.shape, cur.leaves, cur.mask as u64, &mut letters);
            match next_same_popcount(cur.mask) {
                Some(m) => cur.mask = m,
                None => cur.mask = 1u128 << cur.leaves,
            }
            let w = Word::from_letters(letters);
            assert!(is_omega(&w), "perfect-tree serialization {w} failed the Ω recognizers");
            return Some(w);
        }
    }
}

/// With `h = height(w)`: `x^h` is a prefix, `y^h` a suffix, and
/// `2^h ≤ occur(w, z) ≤ 2^{h+1}`.
pub fn verify_height_law(w: &Word) -> Result<bool, OmegaError> {
    if !is_omega(w) {
        return Err(OmegaError::NotOmega(w.clone()));
    }
    let h = height(w);
    let prefix_ok = w.starts_with(&Word::power(Letter::X, h));
    let suffix_ok = w.ends_with(&Word::power(Letter::Y, h));
    let z = BigUint::from(occur_letter(w, Letter::Z));
    let lower = BigUint::one() << h;
    let upper = BigUint::one() << (h + 1);
    Ok(prefix_ok && suffix_ok && lower <= z && z <= upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recognizers::enumerate_enw;
    use crate::words::pi;
    use std::collections::BTreeSet;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(is_omega(&w("xxpzppzpyxpzzppzzpyy")));
        assert!(!is_omega(&w("xpzpxpzppzzpyy")));
        assert!(is_omega(&w("xpzzppzzpy")));
        assert!(is_omega(&w("xxpzppzpyxpzppzpyy")));
    }

    #[test]
    fn feasible_height_examples() {
        assert_eq!(feasible_heights(4u32).unwrap(), vec![1, 2]);
        assert_eq!(feasible_heights(2u32).unwrap(), vec![1]);
        assert_eq!(feasible_heights(5u32).unwrap(), vec![2]);
        assert_eq!(feasible_heights(3u32).unwrap(), vec![1]);
        assert_eq!(feasible_heights(1024u32).unwrap(), vec![9, 10]);
        assert!(feasible_heights(1u32).is_err());
        assert!(feasible_heights(0u32).is_err());
    }

    #[test]
    fn feasible_heights_match_definition() {
        for n in 2u64..3000 {
            let brute: Vec<u64> = (1..20).filter(|&h| (1u64 << h) <= n && n <= (1u64 << (h + 1))).collect();
            assert_eq!(feasible_heights(n).unwrap(), brute, "n={n}");
        }
    }

    #[test]
    fn construction_examples() {
        assert_eq!(construct_omega(4).unwrap(), w("xpzzppzzpy"));
        assert_eq!(construct_omega(2).unwrap(), w("xpzppzpy"));
        assert_eq!(construct_omega(3).unwrap(), w("xpzppzzpy"));
        assert_eq!(construct_omega(5).unwrap(), w("xxpzppzpyxpzppzzpyy"));
        assert!(construct_omega(1).is_err());
        assert_eq!(pi(&construct_omega(17).unwrap()).len, BigUint::from(17u32));
    }

    #[test]
    fn construction_equals_leftmost_pzp_tree() {
        for n in 2..300usize {
            let word = construct_omega(n).unwrap();
            let j = n.next_power_of_two().trailing_zeros();
            let h = j.saturating_sub(1).max(1);
            let spec = PerfectTreeSpec::leftmost_pzp(h, (1usize << (h + 1)) - n).unwrap();
            assert_eq!(word, spec.serialize(), "n={n}");
            assert_eq!(spec.z_count(), n);
        }
    }

    #[test]
    fn height_law_examples() {
        assert!(verify_height_law(&w("xpzzppzzpy")).unwrap());
        let big = construct_omega(1000).unwrap();
        assert_eq!(height(&big), 9);
        assert!(verify_height_law(&big).unwrap());
        assert_eq!(verify_height_law(&w("xpzpxpzppzzpyy")), Err(OmegaError::NotOmega(w("xpzpxpzppzzpyy"))));
    }

    #[test]
    fn enumeration_examples() {
        let four: Vec<Word> = enumerate_omega(4).unwrap().collect();
        assert_eq!(four, vec![w("xpzzppzzpy"), w("xxpzppzpyxpzppzpyy")]);
        let three: Vec<Word> = enumerate_omega(3).unwrap().collect();
        assert_eq!(three, vec![w("xpzppzzpy"), w("xpzzppzpy")]);
        assert!(enumerate_omega(1).is_err());
        assert!(enumerate_omega(65).is_err());
        assert_eq!(enumerate_omega(64).unwrap().count(), 2);
    }

    #[test]
    fn enumeration_sizes_match_formula_below_32() {
        for n in 2..32usize {
            let words: Vec<Word> = enumerate_omega(n).unwrap().collect();
            let distinct: BTreeSet<&Word> = words.iter().collect();
            assert_eq!(distinct.len(), words.len());
            assert_eq!(words.len() as u128, omega_count_formula(n).unwrap(), "n={n}");
            for word in &words {
                assert_eq!(occur_letter(word, Letter::Z), n);
                assert!(verify_height_law(word).unwrap());
            }
        }
    }

    #[test]
    fn omega_is_balanced_slice_of_enw() {
        // Ω words with k leaves are exactly the balanced words among E words with k leaves.
        for k in 2..=8usize {
            let from_enw: BTreeSet<Word> = enumerate_enw(k).unwrap().into_iter().filter(is_balanced).collect();
            let from_omega: BTreeSet<Word> = (k..=2 * k)
                .filter(|&n| (2..=MAX_ENUM_Z).contains(&n))
                .flat_map(|n| enumerate_omega(n).unwrap())
                .filter(|x| parse_enw(x).unwrap().leaf_count() == k)
                .collect();
            assert_eq!(from_enw, from_omega, "k={k}");
            assert_eq!(from_enw.is_empty(), !k.is_power_of_two());
        }
    }

    #[test]
    fn spec_roundtrip() {
        let spec = PerfectTreeSpec::new(2, vec![LeafKind::Pzp, LeafKind::Pzp, LeafKind::Pzzp, LeafKind::Pzzp]).unwrap();
        let word = spec.serialize();
        assert_eq!(word, w("xxpzppzpyxpzzppzzpyy"));
        assert_eq!(spec.to_tree().serialize(), word);
        assert_eq!(PerfectTreeSpec::from_word(&word), Some(spec));
        assert_eq!(PerfectTreeSpec::from_word(&w("xpzpxpzppzzpyy")), None);
        assert!(PerfectTreeSpec::new(0, vec![LeafKind::Pzp]).is_err());
        assert!(PerfectTreeSpec::new(1, vec![LeafKind::Pzp]).is_err());
    }
}
