//! Differential testing of the direct recognizers against the chart parser.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{self, Execution};
use crate::grammar::{balanced_grammar, enw_grammar, recognize, Cfg};
use crate::omega::{is_omega, PerfectTreeSpec};
use crate::recognizers::{is_balanced, is_enw, EnwTree, LeafKind};
use crate::words::{Letter, Word};

/// Largest word length for the exhaustive part of [`oracle_diff`].
pub const MAX_EXHAUSTIVE: usize = 12;

/// Mismatches kept in a report.
pub const EXAMPLE_LIMIT: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("exhaustive length {0} exceeds {MAX_EXHAUSTIVE}")]
pub struct OracleDiffError(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Enw,
    Balanced,
    Omega,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mismatch {
    pub word: Word,
    pub language: Language,
    pub direct: bool,
    pub oracle: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub words: u64,
    pub enw: u64,
    pub balanced: u64,
    pub omega: u64,
    pub mismatches: u64,
    pub examples: Vec<Mismatch>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.words += other.words;
        self.enw += other.enw;
        self.balanced += other.balanced;
        self.omega += other.omega;
        self.mismatches += other.mismatches;
        self.examples.extend(other.examples);
        // keep the smallest, so the result does not depend on the split
        self.examples.sort_by(|a, b| (a.word.len(), a).cmp(&(b.word.len(), b)));
        self.examples.truncate(EXAMPLE_LIMIT);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDiffReport {
    pub max_exhaustive: usize,
    pub seed: u64,
    pub exhaustive: Tally,
    pub random: Tally,
}

impl OracleDiffReport {
    pub fn mismatches(&self) -> u64 {
        self.exhaustive.mismatches + self.random.mismatches
    }
}

struct Oracle {
    enw: Cfg,
    balanced: Cfg,
}

impl Oracle {
    fn new() -> Self {
        Oracle { enw: enw_grammar(), balanced: balanced_grammar() }
    }

    fn check(&self, w: &Word) -> Tally {
        let chart_e = recognize(&self.enw, w).accepted;
        let chart_b = recognize(&self.balanced, w).accepted;
        let (e, b, o) = (is_enw(w), is_balanced(w), is_omega(w));
        let mut t = Tally { words: 1, enw: e as u64, balanced: b as u64, omega: o as u64, ..Tally::default() };
        for (language, direct, oracle) in
            [(Language::Enw, e, chart_e), (Language::Balanced, b, chart_b), (Language::Omega, o, chart_e && chart_b)]
        {
            if direct != oracle {
                t.mismatches += 1;
                t.examples.push(Mismatch { word: w.clone(), language, direct, oracle });
            }
        }
        t
    }
}

/// Compares the direct recognizers with the chart parser on every word of
/// length at most `max_exhaustive` and on `random_samples` generated words.
///
/// Sample `i` is drawn from its own ChaCha stream, so the report depends only
/// on `seed`, never on the execution mode.
pub fn oracle_diff(
    max_exhaustive: usize,
    random_samples: u64,
    seed: u64,
    exec: Execution,
) -> Result<OracleDiffReport, OracleDiffError> {
    if max_exhaustive > MAX_EXHAUSTIVE {
        return Err(OracleDiffError(max_exhaustive));
    }
    let oracle = Oracle::new();
    let mut exhaustive = Tally::default();
    for len in 0..=max_exhaustive {
        let count = 1u64 << (2 * len);
        let t = exec::map_reduce(
            exec,
            0,
            count,
            Tally::default(),
            |i| oracle.check(&Word::from_index(i, len)),
            Tally::merge,
        );
        exhaustive = exhaustive.merge(t);
    }
    let random = exec::map_reduce(
        exec,
        0,
        random_samples,
        Tally::default(),
        |i| oracle.check(&sample_word(seed, i)),
        Tally::merge,
    );
    Ok(OracleDiffReport { max_exhaustive, seed, exhaustive, random })
}

/// Longest word produced by [`sample_word`].
pub const MAX_SAMPLE_LEN: usize = 200;

/// The `index`-th random word for `seed`: uniform words mixed with members
/// of E, B and Ω, half of the latter perturbed by a few edits.
pub fn sample_word(seed: u64, index: u64) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut w = match rng.gen_range(0..8) {
        0..=3 => {
            let len = rng.gen_range(1..=MAX_SAMPLE_LEN);
            return (0..len).map(|_| random_letter(&mut rng)).collect();
        }
        4 => {
            // at most 6k - 2 letters for k leaves
            let leaves = rng.gen_range(2..=32);
            random_tree(&mut rng, leaves).serialize()
        }
        5 => random_balanced(&mut rng),
        _ => {
            let h = rng.gen_range(1..=5u32);
            let kinds = (0..1usize << h).map(|_| random_leaf(&mut rng)).collect();
            PerfectTreeSpec::new(h, kinds).expect("leaf count matches height").serialize()
        }
    };
    if rng.gen_bool(0.5) {
        for _ in 0..rng.gen_range(1..=2) {
            mutate(&mut rng, &mut w);
        }
    }
    let mut letters = w.into_letters();
    letters.truncate(MAX_SAMPLE_LEN);
    Word::from_letters(letters)
}

fn random_letter(rng: &mut ChaCha8Rng) -> Letter {
    Letter::ALL[rng.gen_range(0..4)]
}

fn random_leaf(rng: &mut ChaCha8Rng) -> LeafKind {
    if rng.gen_bool(0.5) {
        LeafKind::Pzp
    } else {
        LeafKind::Pzzp
    }
}

fn random_tree(rng: &mut ChaCha8Rng, leaves: usize) -> EnwTree {
    if leaves == 1 {
        return EnwTree::Leaf(random_leaf(rng));
    }
    let left = rng.gen_range(1..leaves);
    EnwTree::node(random_tree(rng, left), random_tree(rng, leaves - left))
}

/// `xⁱ p Z V Z p yⁱ` with `V` a `Z`-separated chain of `p yʲ xʲ p` blocks.
fn random_balanced(rng: &mut ChaCha8Rng) -> Word {
    use Letter::*;
    let mut out = Vec::new();
    let zs = |rng: &mut ChaCha8Rng, out: &mut Vec<Letter>| out.extend(std::iter::repeat_n(Z, rng.gen_range(1..=2)));
    let lead = rng.gen_range(0..=12);
    out.extend(std::iter::repeat_n(X, lead));
    out.push(P);
    zs(rng, &mut out);
    for b in 0..rng.gen_range(1..=16) {
        if b > 0 {
            zs(rng, &mut out);
        }
        let j = rng.gen_range(0..=3);
        out.push(P);
        out.extend(std::iter::repeat_n(Y, j));
        out.extend(std::iter::repeat_n(X, j));
        out.push(P);
    }
    zs(rng, &mut out);
    out.push(P);
    out.extend(std::iter::repeat_n(Y, lead));
    Word::from_letters(out)
}

fn mutate(rng: &mut ChaCha8Rng, w: &mut Word) {
    let mut letters = std::mem::take(w).into_letters();
    let n = letters.len();
    match rng.gen_range(0..4) {
        0 if n > 0 => letters[rng.gen_range(0..n)] = random_letter(rng),
        1 => letters.insert(rng.gen_range(0..=n), random_letter(rng)),
        2 if n > 0 => {
            letters.remove(rng.gen_range(0..n));
        }
        3 if n > 1 => letters.swap(rng.gen_range(0..n - 1), rng.gen_range(0..n)),
        _ => letters.push(random_letter(rng)),
    }
    *w = Word::from_letters(letters);
}
