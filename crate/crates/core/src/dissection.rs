//! Dissecting unary languages with the image `π(R ∩ E ∩ B)`.
//!
//! A word of Ω with `m` letters `z` has height `h` with `2^h ≤ m ≤ 2^{h+1}`,
//! so consecutive members of a `c`-geometric language have heights at most
//! `α + 1` apart, where `2^α ≥ c`. A residue window of width `g = α + 1` on
//! the height then splits the language into two infinite parts, and the
//! window lifts to a regular language over `{x, y, z, p}` that reads only the
//! leading `x` run.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{self, Execution};
use crate::omega::{feasible_heights, is_omega, OmegaError, PerfectTreeSpec};
use crate::words::{occur_letter, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DissectError {
    #[error("growth constant must be greater than 1, got {0}")]
    GrowthConstant(BigRational),
    #[error("constant growth needs a nonempty step set of positive integers and c0 >= 1")]
    ConstantSteps,
    #[error("window width g must be at least 1")]
    ZeroWindow,
    #[error("need at least 2 members up to the cap, found {0}")]
    TooFewMembers(usize),
    #[error("lengths must be positive and strictly increasing: {0}")]
    BadLengths(String),
    #[error("growth check failed: member {first} has no successor within the bound ({count} violations)")]
    GrowthViolation { first: BigUint, count: usize },
    #[error("z^{0} is too long to build a witness word for")]
    WitnessTooLarge(BigUint),
    #[error(transparent)]
    Omega(#[from] OmegaError),
    #[error("cannot parse {0:?} as a number")]
    Parse(String),
}

/// The growth promise of a unary language, stated on lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthSpec {
    /// Every member of length at least `c0` has another member exactly
    /// `k` longer for some `k` in `steps`.
    Constant { c0: BigUint, steps: BTreeSet<BigUint> },
    /// Every member `u` has a member `v` with `|u| < |v| ≤ c·|u|`.
    Geometric { c: BigRational },
}

impl GrowthSpec {
    pub fn constant(c0: impl Into<BigUint>, steps: impl IntoIterator<Item = u64>) -> Result<Self, DissectError> {
        let c0 = c0.into();
        let steps: BTreeSet<BigUint> = steps.into_iter().map(BigUint::from).collect();
        if c0.is_zero() || steps.is_empty() || steps.iter().any(|s| s.is_zero()) {
            return Err(DissectError::ConstantSteps);
        }
        Ok(GrowthSpec::Constant { c0, steps })
    }

    pub fn geometric(c: BigRational) -> Result<Self, DissectError> {
        if c <= BigRational::one() {
            return Err(DissectError::GrowthConstant(c));
        }
        Ok(GrowthSpec::Geometric { c })
    }
}

/// A set of lengths, either listed or produced by a built-in generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnaryLanguage {
    Explicit(Vec<BigUint>),
    /// `{2^k : k ≥ 0}`
    Pow2,
    /// `{3^k : k ≥ 0}`
    Pow3,
    /// Distinct Fibonacci numbers `1, 2, 3, 5, 8, …`
    Fib,
}

impl UnaryLanguage {
    pub fn explicit(lengths: Vec<BigUint>) -> Result<Self, DissectError> {
        if lengths.first().is_some_and(|l| l.is_zero()) {
            return Err(DissectError::BadLengths("lengths must be positive".into()));
        }
        if let Some(w) = lengths.windows(2).find(|w| w[0] >= w[1]) {
            return Err(DissectError::BadLengths(format!("{} is followed by {}", w[0], w[1])));
        }
        Ok(UnaryLanguage::Explicit(lengths))
    }

    /// Parses one decimal length per line; `#` starts a comment, blank lines
    /// are ignored.
    pub fn from_lengths_text(text: &str) -> Result<Self, DissectError> {
        let mut lengths = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let n = BigUint::from_str(line)
                .map_err(|_| DissectError::BadLengths(format!("line {}: {line:?} is not a decimal length", i + 1)))?;
            lengths.push(n);
        }
        Self::explicit(lengths)
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "pow2" => Some(UnaryLanguage::Pow2),
            "pow3" => Some(UnaryLanguage::Pow3),
            "fib" => Some(UnaryLanguage::Fib),
            _ => None,
        }
    }

    /// Members of length at most `cap`, ascending.
    pub fn members_up_to(&self, cap: &BigUint) -> Vec<BigUint> {
        let powers = |base: u32| {
            let mut out = Vec::new();
            let mut v = BigUint::one();
            while &v <= cap {
                out.push(v.clone());
                v *= base;
            }
            out
        };
        match self {
            UnaryLanguage::Explicit(v) => v.iter().take_while(|l| *l <= cap).cloned().collect(),
            UnaryLanguage::Pow2 => powers(2),
            UnaryLanguage::Pow3 => powers(3),
            UnaryLanguage::Fib => {
                let mut out = Vec::new();
                let (mut a, mut b) = (BigUint::one(), BigUint::from(2u32));
                while &a <= cap {
                    out.push(a.clone());
                    let next = &a + &b;
                    a = std::mem::replace(&mut b, next);
                }
                out
            }
        }
    }
}

impl fmt::Display for UnaryLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnaryLanguage::Explicit(v) => write!(f, "explicit({} lengths)", v.len()),
            UnaryLanguage::Pow2 => f.write_str("pow2"),
            UnaryLanguage::Pow3 => f.write_str("pow3"),
            UnaryLanguage::Fib => f.write_str("fib"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthCheck {
    pub ok: bool,
    /// Members with no successor within the bound.
    #[serde(with = "decimal_vec")]
    pub violations: Vec<BigUint>,
    /// Members too close to the cap for the bound to be verified.
    #[serde(skip)]
    pub skipped: Vec<BigUint>,
}

/// Checks the growth promise on the members of `lang` up to `cap`.
pub fn check_growth(lang: &UnaryLanguage, spec: &GrowthSpec, cap: &BigUint) -> Result<GrowthCheck, DissectError> {
    let members = lang.members_up_to(cap);
    if members.len() < 2 {
        return Err(DissectError::TooFewMembers(members.len()));
    }
    let mut violations = Vec::new();
    let mut skipped = Vec::new();
    match spec {
        GrowthSpec::Geometric { c } => {
            if c <= &BigRational::one() {
                return Err(DissectError::GrowthConstant(c.clone()));
            }
            let (num, den) = (c.numer().to_biguint().unwrap(), c.denom().to_biguint().unwrap());
            for (i, u) in members.iter().enumerate() {
                let bound_num = &num * u;
                match members.get(i + 1) {
                    // next ≤ c·u  ⇔  next·den ≤ num·u
                    Some(next) => {
                        if next * &den > bound_num {
                            violations.push(u.clone());
                        }
                    }
                    // Nothing in (u, cap]; a violation only if c·u is within the cap.
                    None => {
                        if bound_num <= cap * &den {
                            violations.push(u.clone());
                        } else {
                            skipped.push(u.clone());
                        }
                    }
                }
            }
        }
        GrowthSpec::Constant { c0, steps } => {
            let max_step = steps.iter().next_back().unwrap();
            for u in &members {
                if u < c0 {
                    continue;
                }
                let found = steps.iter().any(|k| members.binary_search(&(u + k)).is_ok());
                if found {
                    continue;
                }
                if &(u + max_step) <= cap {
                    violations.push(u.clone());
                } else {
                    skipped.push(u.clone());
                }
            }
        }
    }
    Ok(GrowthCheck { ok: violations.is_empty(), violations, skipped })
}

/// The least `α ≥ 1` with `2^α ≥ c`.
pub fn alpha_for(c: &BigRational) -> Result<u32, DissectError> {
    if c <= &BigRational::one() {
        return Err(DissectError::GrowthConstant(c.clone()));
    }
    let mut alpha = 1u32;
    let mut power = BigRational::from_integer(BigInt::from(2));
    while &power < c {
        alpha += 1;
        power *= BigRational::from_integer(BigInt::from(2));
    }
    Ok(alpha)
}

/// The unary regular language `{xʰ : h mod 2g < g}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueDissector {
    g: u64,
}

impl ResidueDissector {
    pub fn window(&self) -> u64 {
        self.g
    }

    pub fn modulus(&self) -> u64 {
        2 * self.g
    }

    pub fn accepts(&self, h: u64) -> bool {
        h % self.modulus() < self.g
    }
}

pub fn residue_dissector(g: u64) -> Result<ResidueDissector, DissectError> {
    if g == 0 {
        return Err(DissectError::ZeroWindow);
    }
    Ok(ResidueDissector { g })
}

/// `R = {xʰ p v : h accepted by the base dissector, v arbitrary}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThetaRegular {
    pub base: ResidueDissector,
}

impl ThetaRegular {
    pub fn contains(&self, w: &Word) -> bool {
        let letters = w.letters();
        let h = letters.iter().take_while(|&&l| l == Letter::X).count();
        letters.get(h) == Some(&Letter::P) && self.base.accepts(h as u64)
    }
}

pub fn lift_to_theta(d: ResidueDissector) -> ThetaRegular {
    ThetaRegular { base: d }
}

/// Whether `z^m ∈ π(R ∩ Ω)`: some height feasible for `m` passes the window.
pub fn image_membership(m: &BigUint, d: &ResidueDissector) -> Result<bool, DissectError> {
    Ok(feasible_heights(m.clone())?.into_iter().any(|h| d.accepts(h)))
}

/// Largest `m` for which [`witness`] materializes a word.
pub const WITNESS_MAX_Z: usize = 1 << 22;

/// A word of `R ∩ Ω` with `m` letters `z`, if one exists: the perfect tree of
/// the smallest accepted feasible height, `pzp` leaves leftmost.
pub fn witness(m: &BigUint, d: &ResidueDissector) -> Result<Option<Word>, DissectError> {
    let heights = feasible_heights(m.clone())?;
    let Some(h) = heights.into_iter().find(|&h| d.accepts(h)) else {
        return Ok(None);
    };
    let m_small = usize::try_from(m)
        .ok()
        .filter(|&v| v <= WITNESS_MAX_Z)
        .ok_or_else(|| DissectError::WitnessTooLarge(m.clone()))?;
    let h = h as u32;
    let spec = PerfectTreeSpec::leftmost_pzp(h, (1usize << (h + 1)) - m_small)?;
    let w = spec.serialize();
    debug_assert!(is_omega(&w) && lift_to_theta(*d).contains(&w) && occur_letter(&w, Letter::Z) == m_small);
    Ok(Some(w))
}

/// Number of smallest lengths kept per side of a report.
pub const SAMPLE_LIMIT: usize = 16;

/// Members shorter than this are left out of the partition: the height
/// argument only applies once `log₂ m ≥ 2`, and `z`, `zz`, `zzz` are
/// finitely many.
pub const MIN_PARTITIONED: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DissectionReport {
    pub alpha: u32,
    pub g: u64,
    #[serde(with = "decimal")]
    pub cap: BigUint,
    pub in_count: u64,
    pub out_count: u64,
    /// Members below [`MIN_PARTITIONED`], not counted on either side.
    pub skipped: u64,
    #[serde(with = "decimal_vec")]
    pub samples_in: Vec<BigUint>,
    #[serde(with = "decimal_vec")]
    pub samples_out: Vec<BigUint>,
    pub growth_check: GrowthCheck,
}

impl DissectionReport {
    pub fn both_sides_nonempty(&self) -> bool {
        self.in_count > 0 && self.out_count > 0
    }
}

/// Splits the members of a `c`-geometric language up to `cap` by membership
/// in `π(R ∩ E ∩ B)`, with `R` lifted from the window `g = α + 1`.
pub fn dissect_geometric(
    lang: &UnaryLanguage,
    c: &BigRational,
    cap: &BigUint,
    exec: Execution,
) -> Result<DissectionReport, DissectError> {
    let spec = GrowthSpec::geometric(c.clone())?;
    let growth = check_growth(lang, &spec, cap)?;
    if !growth.ok {
        return Err(DissectError::GrowthViolation {
            first: growth.violations[0].clone(),
            count: growth.violations.len(),
        });
    }
    let alpha = alpha_for(c)?;
    let g = u64::from(alpha) + 1;
    let d = residue_dissector(g)?;
    let members = lang.members_up_to(cap);
    let min = BigUint::from(MIN_PARTITIONED);
    let (small, large): (Vec<BigUint>, Vec<BigUint>) = members.into_iter().partition(|m| m < &min);
    let verdicts = exec::map_collect(exec, &large, |m| image_membership(m, &d));
    let mut report = DissectionReport {
        alpha,
        g,
        cap: cap.clone(),
        in_count: 0,
        out_count: 0,
        skipped: small.len() as u64,
        samples_in: Vec::new(),
        samples_out: Vec::new(),
        growth_check: growth,
    };
    for (m, verdict) in large.into_iter().zip(verdicts) {
        let (count, samples) = if verdict? {
            (&mut report.in_count, &mut report.samples_in)
        } else {
            (&mut report.out_count, &mut report.samples_out)
        };
        *count += 1;
        if samples.len() < SAMPLE_LIMIT {
            samples.push(m);
        }
    }
    Ok(report)
}

/// Parses `a^b` or a plain decimal.
pub fn parse_length(s: &str) -> Result<BigUint, DissectError> {
    let err = || DissectError::Parse(s.to_string());
    let s = s.trim();
    match s.split_once('^') {
        Some((base, exp)) => {
            let base = BigUint::from_str(base.trim()).map_err(|_| err())?;
            let exp: u32 = exp.trim().parse().map_err(|_| err())?;
            Ok(base.pow(exp))
        }
        None => BigUint::from_str(s).map_err(|_| err()),
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `1.5`.
pub fn parse_rational(s: &str) -> Result<BigRational, DissectError> {
    let err = || DissectError::Parse(s.to_string());
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let digits = BigInt::from_str(&format!("{int}{frac}")).map_err(|_| err())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(digits, scale));
    }
    BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| err())
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::from_str(&s).map_err(serde::de::Error::custom)
    }
}

mod decimal_vec {
    use num_bigint::BigUint;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for n in v {
            seq.serialize_element(&n.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|s| BigUint::from_str(s).map_err(serde::de::Error::custom)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::enumerate_omega;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_for(&rat("2")).unwrap(), 1);
        assert_eq!(alpha_for(&rat("3")).unwrap(), 2);
        assert_eq!(alpha_for(&rat("16/15")).unwrap(), 1);
        assert_eq!(alpha_for(&rat("4")).unwrap(), 2);
        assert_eq!(alpha_for(&rat("4.01")).unwrap(), 3);
        assert!(alpha_for(&rat("1")).is_err());
        assert!(alpha_for(&rat("1/2")).is_err());
    }

    #[test]
    fn growth_examples() {
        let geo = |c: &str| GrowthSpec::geometric(rat(c)).unwrap();
        let pow2 = check_growth(&UnaryLanguage::Pow2, &geo("2"), &big(1 << 20)).unwrap();
        assert!(pow2.ok);
        assert_eq!(pow2.skipped, vec![big(1 << 20)]);
        let cap3 = big(3).pow(13);
        assert!(!check_growth(&UnaryLanguage::Pow3, &geo("2"), &cap3).unwrap().ok);
        assert!(check_growth(&UnaryLanguage::Pow3, &geo("3"), &cap3).unwrap().ok);
        assert!(check_growth(&UnaryLanguage::Fib, &geo("2"), &big(1_000_000)).unwrap().ok);
        assert!(!check_growth(&UnaryLanguage::Fib, &geo("3/2"), &big(1_000_000)).unwrap().ok);
        assert!(GrowthSpec::geometric(rat("1")).is_err());
    }

    #[test]
    fn growth_edge_cases() {
        let geo2 = GrowthSpec::geometric(rat("2")).unwrap();
        let one = UnaryLanguage::explicit(vec![big(5)]).unwrap();
        assert_eq!(check_growth(&one, &geo2, &big(100)), Err(DissectError::TooFewMembers(1)));
        // 10 has nothing in (10, 20] although 20 is under the cap.
        let gap = UnaryLanguage::explicit(vec![big(5), big(10)]).unwrap();
        let chk = check_growth(&gap, &geo2, &big(40)).unwrap();
        assert_eq!(chk.violations, vec![big(10)]);
        let chk = check_growth(&gap, &geo2, &big(15)).unwrap();
        assert!(chk.ok);
        assert_eq!(chk.skipped, vec![big(10)]);
    }

    #[test]
    fn constant_growth() {
        let spec = GrowthSpec::constant(3u32, [2, 3]).unwrap();
        let lang = UnaryLanguage::explicit((1..=40u64).filter(|n| n % 5 != 0).map(big).collect()).unwrap();
        let chk = check_growth(&lang, &spec, &big(40)).unwrap();
        assert!(chk.ok, "{chk:?}");
        let sparse = UnaryLanguage::explicit(vec![big(1), big(4), big(10), big(12)]).unwrap();
        let chk = check_growth(&sparse, &spec, &big(30)).unwrap();
        assert_eq!(chk.violations, vec![big(4), big(12)]);
        assert!(chk.skipped.is_empty());
        let chk = check_growth(&sparse, &spec, &big(13)).unwrap();
        assert_eq!(chk.violations, vec![big(4)]);
        assert_eq!(chk.skipped, vec![big(12)]);
        assert!(GrowthSpec::constant(0u32, [1]).is_err());
        assert!(GrowthSpec::constant(1u32, []).is_err());
        assert!(GrowthSpec::constant(1u32, [0]).is_err());
    }

    #[test]
    fn generators() {
        let cap = big(100);
        let fib: Vec<u64> = UnaryLanguage::Fib.members_up_to(&cap).iter().map(|b| b.try_into().unwrap()).collect();
        assert_eq!(fib, vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89]);
        assert_eq!(UnaryLanguage::Pow3.members_up_to(&cap).len(), 5);
        assert_eq!(UnaryLanguage::Pow2.members_up_to(&big(1u64 << 41)).len(), 42);
    }

    #[test]
    fn lengths_text() {
        let lang = UnaryLanguage::from_lengths_text("# sample\n4\n8  # eight\n\n16\n").unwrap();
        assert_eq!(lang, UnaryLanguage::Explicit(vec![big(4), big(8), big(16)]));
        assert!(UnaryLanguage::from_lengths_text("4\n4\n").is_err());
        assert!(UnaryLanguage::from_lengths_text("4\nfour\n").is_err());
        assert!(UnaryLanguage::from_lengths_text("0\n3\n").is_err());
    }

    #[test]
    fn residue_examples() {
        let d1 = residue_dissector(1).unwrap();
        assert!((0..20).all(|h| d1.accepts(h) == (h % 2 == 0)));
        let d2 = residue_dissector(2).unwrap();
        let accepted: Vec<u64> = (0..4).filter(|&h| d2.accepts(h)).collect();
        assert_eq!(accepted, vec![0, 1]);
        assert!(residue_dissector(0).is_err());
    }

    #[test]
    fn residue_halves_the_integers() {
        // lengths 5..=10^4 with window 3: brute count per residue class mod 6
        let d = residue_dissector(3).unwrap();
        let accepted = (5u64..=10_000).filter(|&h| d.accepts(h)).count();
        assert_eq!(accepted, 4998);
        assert_eq!(9996 - accepted, 4998);
    }

    #[test]
    fn lift_examples() {
        let r = lift_to_theta(residue_dissector(2).unwrap());
        assert!(r.contains(&w("xxxxpzz")));
        assert!(r.contains(&w("xpzppzpy")));
        assert!(!r.contains(&w("xxxpzp")));
        assert!(r.contains(&w("pzz")));
        assert!(!r.contains(&w("xxxx")));
        assert!(!r.contains(&w("xxz")));
    }

    #[test]
    fn image_membership_examples() {
        let d1 = residue_dissector(1).unwrap();
        let d2 = residue_dissector(2).unwrap();
        for k in 2..60u32 {
            let m = BigUint::one() << k;
            assert_eq!(image_membership(&m, &d2).unwrap(), k % 4 != 3, "k={k}");
        }
        assert!(image_membership(&big(4), &d1).unwrap());
        assert!(!image_membership(&big(2), &d1).unwrap());
        assert!(image_membership(&big(1), &d1).is_err());
    }

    #[test]
    fn witness_examples() {
        let d1 = residue_dissector(1).unwrap();
        assert_eq!(witness(&big(4), &d1).unwrap(), Some(w("xxpzppzpyxpzppzpyy")));
        assert_eq!(witness(&big(2), &d1).unwrap(), None);
        // h = 2 is outside the g = 2 window, inside the g = 3 window
        assert_eq!(witness(&big(5), &residue_dissector(2).unwrap()).unwrap(), None);
        let five = witness(&big(5), &residue_dissector(3).unwrap()).unwrap().unwrap();
        assert_eq!(five, w("xxpzppzpyxpzppzzpyy"));
        assert!(is_omega(&five));
        for k in 4..8u32 {
            let m = BigUint::one() << k;
            let d2 = residue_dissector(2).unwrap();
            let wit = witness(&m, &d2).unwrap();
            assert_eq!(wit.is_some(), image_membership(&m, &d2).unwrap());
            if let Some(x) = wit {
                assert!(is_omega(&x) && lift_to_theta(d2).contains(&x));
                assert_eq!(occur_letter(&x, Letter::Z), 1 << k);
            }
        }
        assert!(matches!(witness(&(BigUint::one() << 40), &d1), Err(DissectError::WitnessTooLarge(_))));
    }

    #[test]
    fn image_membership_matches_enumeration_small() {
        for g in 1..=3 {
            let d = residue_dissector(g).unwrap();
            let r = lift_to_theta(d);
            for m in 2..=20usize {
                let brute = enumerate_omega(m).unwrap().any(|x| r.contains(&x));
                assert_eq!(image_membership(&big(m as u64), &d).unwrap(), brute, "m={m} g={g}");
            }
        }
    }

    #[test]
    fn pow2_dissection_counts() {
        let report =
            dissect_geometric(&UnaryLanguage::Pow2, &rat("2"), &parse_length("2^41").unwrap(), Execution::Sequential)
                .unwrap();
        assert_eq!((report.alpha, report.g), (1, 2));
        assert_eq!((report.in_count, report.out_count, report.skipped), (30, 10, 2));
        assert_eq!(report.samples_out[0], big(8));
    }

    #[test]
    fn finite_sample_is_totally_partitioned() {
        let lang = UnaryLanguage::explicit(vec![big(4), big(8), big(16), big(32)]).unwrap();
        let report = dissect_geometric(&lang, &rat("2"), &big(32), Execution::Sequential).unwrap();
        assert_eq!(report.in_count + report.out_count, 4);
        assert_eq!(report.samples_out, vec![big(8)]);
    }

    #[test]
    fn dissection_rejects_bad_growth() {
        let err =
            dissect_geometric(&UnaryLanguage::Pow3, &rat("2"), &big(3).pow(10), Execution::Sequential).unwrap_err();
        assert_eq!(err, DissectError::GrowthViolation { first: big(1), count: 10 });
    }

    #[test]
    fn report_json_roundtrip() {
        let report = dissect_geometric(&UnaryLanguage::Pow3, &rat("3"), &big(3).pow(40), Execution::Parallel).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains(&format!("\"cap\":\"{}\"", big(3).pow(40))));
        let back: DissectionReport = serde_json::from_str(&json).unwrap();
        assert_eq!(
            DissectionReport {
                growth_check: GrowthCheck { skipped: vec![], ..report.growth_check.clone() },
                ..report.clone()
            },
            back
        );
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_length("2^41").unwrap(), BigUint::one() << 41);
        assert_eq!(parse_length("1000").unwrap(), big(1000));
        assert!(parse_length("2^").is_err());
        assert_eq!(rat("16/15"), BigRational::new(16.into(), 15.into()));
        assert_eq!(rat("1.5"), BigRational::new(3.into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn height_steps_are_bounded() {
        for (lang, c) in [(UnaryLanguage::Pow2, "2"), (UnaryLanguage::Pow3, "3"), (UnaryLanguage::Fib, "2")] {
            let alpha = alpha_for(&rat(c)).unwrap() as u64;
            let members = lang.members_up_to(&big(10).pow(30));
            for pair in members.windows(2).filter(|p| p[0] >= big(4)) {
                let h1 = feasible_heights(pair[0].clone()).unwrap();
                let h2 = feasible_heights(pair[1].clone()).unwrap();
                assert!(h2.iter().max().unwrap() <= &(alpha + 1 + h1.iter().min().unwrap()), "{pair:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn counts_grow_with_the_cap(a in 2u32..160, b in 2u32..160, which in 0usize..3) {
            let (lang, c) = [(UnaryLanguage::Pow2, "2"), (UnaryLanguage::Pow3, "3"), (UnaryLanguage::Fib, "2")][which].clone();
            let (lo, hi) = (BigUint::one() << a.min(b), BigUint::one() << a.max(b));
            let r1 = dissect_geometric(&lang, &rat(c), &lo, Execution::Sequential).unwrap();
            let r2 = dissect_geometric(&lang, &rat(c), &hi, Execution::Sequential).unwrap();
            prop_assert!(r1.in_count <= r2.in_count && r1.out_count <= r2.out_count);
            let members = lang.members_up_to(&hi).len() as u64;
            prop_assert_eq!(r2.in_count + r2.out_count + r2.skipped, members);
        }

        #[test]
        fn window_and_complement_are_nonempty(g in 1u64..1000) {
            let d = residue_dissector(g).unwrap();
            prop_assert!((0..d.modulus()).any(|h| d.accepts(h)));
            prop_assert!((0..d.modulus()).any(|h| !d.accepts(h)));
        }

        #[test]
        fn windows_capture_bounded_gap_sequences(
            g in 1u64..6,
            start in 0u64..50,
            gaps in proptest::collection::vec(1u64..=5, 1..200),
        ) {
            let gaps: Vec<u64> = gaps.into_iter().map(|x| 1 + (x - 1) % g).collect();
            let mut seq = vec![start];
            for gap in gaps {
                seq.push(seq.last().unwrap() + gap);
            }
            let d = residue_dissector(g).unwrap();
            let (first, last) = (seq[0], *seq.last().unwrap());
            // every full window of g consecutive values between first and last is hit
            let mut lo = first - first % g;
            while lo + g - 1 <= last {
                if lo >= first {
                    let hit = seq.iter().any(|&h| h >= lo && h < lo + g);
                    prop_assert!(hit, "window [{}, {}] missed", lo, lo + g - 1);
                    prop_assert!(d.accepts(lo) == (0..g).all(|i| d.accepts(lo + i)));
                }
                lo += g;
            }
        }
    }
}
