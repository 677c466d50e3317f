//! Exhaustive checks of the Ω laws that are too large to run word by word.
//!
//! [`audit_omega_class`] covers every word of Ω(n) by running one
//! deterministic letter-by-letter checker over the perfect-tree template and
//! merging words whose checker states coincide: two words in the same state
//! get the same verdict on every continuation. [`audit_perfectness`] scans
//! all words up to a length, skipping only prefixes that no word of E extends.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{feasible_heights, is_omega, omega_count_formula, perfect_shape, OmegaError, PerfectTreeSpec};
use crate::exec::{self, Execution};
use crate::recognizers::{BalancedScanner, BlockBase, EnwScanner, LeafKind, ShapeToken};
use crate::words::{Letter, Word};

/// Streaming form of the height law: longest `x` run `h`, leading `x` run,
/// trailing `y` run and `z` count.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HeightLawTracker {
    leading_done: bool,
    leading_x: usize,
    run: usize,
    max_run: usize,
    trailing_y: usize,
    z: usize,
}

impl HeightLawTracker {
    pub fn push(&mut self, l: Letter) {
        if l == Letter::X {
            self.run += 1;
            self.max_run = self.max_run.max(self.run);
            if !self.leading_done {
                self.leading_x += 1;
            }
        } else {
            self.leading_done = true;
            self.run = 0;
        }
        if l == Letter::Y {
            self.trailing_y += 1;
        } else {
            self.trailing_y = 0;
        }
        if l == Letter::Z {
            self.z += 1;
        }
    }

    pub fn z_count(&self) -> usize {
        self.z
    }

    pub fn holds(&self) -> bool {
        let h = self.max_run;
        let z = BigUint::from(self.z);
        self.leading_x >= h && self.trailing_y >= h && (BigUint::one() << h) <= z && z <= (BigUint::one() << (h + 1))
    }
}

/// Ω membership plus the height law, fed one letter at a time.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaChecker {
    enw: EnwScanner,
    balanced: BalancedScanner,
    law: HeightLawTracker,
}

impl Default for OmegaChecker {
    fn default() -> Self {
        OmegaChecker {
            enw: EnwScanner::new(),
            balanced: BalancedScanner::new(BlockBase::Grammar),
            law: HeightLawTracker::default(),
        }
    }
}

impl OmegaChecker {
    pub fn push(&mut self, l: Letter) {
        self.enw.push(l);
        self.balanced.push(l);
        self.law.push(l);
    }

    pub fn push_all(&mut self, letters: &[Letter]) {
        letters.iter().for_each(|&l| self.push(l));
    }

    pub fn is_omega(&self) -> bool {
        self.enw.accepts() && self.balanced.accepts()
    }

    pub fn height_law_holds(&self) -> bool {
        self.law.holds()
    }

    pub fn z_count(&self) -> usize {
        self.law.z_count()
    }
}

/// Outcome of checking every word of Ω(n).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassAudit {
    pub n: usize,
    /// Words covered, counted with multiplicity through merged states.
    pub words: u128,
    pub failures: u128,
    /// `Σ_h C(2^h, n − 2^h)`.
    pub formula: u128,
    /// Distinct checker states alive at the end.
    pub final_states: usize,
    /// One failing word, if any.
    pub counterexample: Option<String>,
}

impl ClassAudit {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.words == self.formula
    }
}

/// Checks, for every perfect-tree serialization with `n` letters `z`, that
/// it is in Ω and satisfies the height law.
pub fn audit_omega_class(n: usize) -> Result<ClassAudit, OmegaError> {
    audit_class_with(n, |st| st.is_omega() && st.height_law_holds() && st.z_count() == n)
}

fn audit_class_with(n: usize, verdict: impl Fn(&OmegaChecker) -> bool) -> Result<ClassAudit, OmegaError> {
    let heights = feasible_heights(n)?;
    let formula = omega_count_formula(n)?;
    let mut words = 0u128;
    let mut failures = 0u128;
    let mut final_states = 0;
    let mut counterexample = None;
    for h in heights {
        let h = h as u32;
        let shape = perfect_shape(h);
        let leaves = 1usize << h;
        let wanted_pzzp = n - leaves;
        // state -> (multiplicity, leaf kinds of the smallest representative)
        let mut states: HashMap<OmegaChecker, (u128, Vec<LeafKind>)> = HashMap::new();
        states.insert(OmegaChecker::default(), (1, Vec::new()));
        let mut leaves_done = 0usize;
        for token in &shape {
            match token {
                ShapeToken::Open | ShapeToken::Close => {
                    let l = if *token == ShapeToken::Open { Letter::X } else { Letter::Y };
                    let mut next = HashMap::with_capacity(states.len());
                    for (mut st, v) in states {
                        st.push(l);
                        merge(&mut next, st, v);
                    }
                    states = next;
                }
                ShapeToken::Leaf => {
                    leaves_done += 1;
                    let remaining = leaves - leaves_done;
                    let mut next = HashMap::with_capacity(states.len() * 2);
                    for (st, (count, rep)) in states {
                        for kind in [LeafKind::Pzp, LeafKind::Pzzp] {
                            let mut s = st.clone();
                            s.push_all(kind.letters());
                            let pzzp_used = s.z_count() - leaves_done;
                            if pzzp_used > wanted_pzzp || pzzp_used + remaining < wanted_pzzp {
                                continue;
                            }
                            let mut r = rep.clone();
                            r.push(kind);
                            merge(&mut next, s, (count, r));
                        }
                    }
                    states = next;
                }
            }
        }
        final_states += states.len();
        for (st, (count, rep)) in states {
            words += count;
            if !verdict(&st) {
                failures += count;
                if counterexample.is_none() {
                    counterexample = PerfectTreeSpec::new(h, rep).ok().map(|s| s.serialize().to_string());
                }
            }
        }
    }
    Ok(ClassAudit { n, words, failures, formula, final_states, counterexample })
}

fn merge(map: &mut HashMap<OmegaChecker, (u128, Vec<LeafKind>)>, st: OmegaChecker, v: (u128, Vec<LeafKind>)) {
    match map.get_mut(&st) {
        Some(entry) => {
            entry.0 += v.0;
            if v.1 < entry.1 {
                entry.1 = v.1;
            }
        }
        None => {
            map.insert(st, v);
        }
    }
}

pub fn audit_omega_classes(
    range: std::ops::RangeInclusive<usize>,
    exec: Execution,
) -> Result<Vec<ClassAudit>, OmegaError> {
    let ns: Vec<usize> = range.collect();
    exec::map_collect(exec, &ns, |&n| audit_omega_class(n)).into_iter().collect()
}

/// Result of scanning every word up to a length for Ω membership versus
/// being a perfect-tree serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectnessAudit {
    pub max_len: usize,
    /// Words examined letter by letter.
    pub visited: u128,
    /// Words skipped because a proper prefix already left every word of E.
    pub pruned: u128,
    /// Words of E found (complete trees).
    pub enw_words: u128,
    pub omega_words: BTreeSet<Word>,
    pub perfect_words: BTreeSet<Word>,
    /// Words where Ω membership and perfectness disagree.
    pub counterexamples: Vec<Word>,
}

impl PerfectnessAudit {
    /// `visited + pruned` must equal the number of words of length at most `max_len`.
    pub fn covers_all_words(&self) -> bool {
        let total: u128 = (0..=self.max_len as u32).map(|l| 4u128.pow(l)).sum();
        self.visited + self.pruned == total
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.covers_all_words() && self.omega_words == self.perfect_words
    }
}

#[derive(Default)]
struct ScanTally {
    visited: u128,
    pruned: u128,
    enw: u128,
    omega: BTreeSet<Word>,
    perfect: BTreeSet<Word>,
    counterexamples: Vec<Word>,
}

impl ScanTally {
    fn absorb(&mut self, other: ScanTally) {
        self.visited += other.visited;
        self.pruned += other.pruned;
        self.enw += other.enw;
        self.omega.extend(other.omega);
        self.perfect.extend(other.perfect);
        self.counterexamples.extend(other.counterexamples);
    }
}

/// Number of words of length `1..=remaining` extending a fixed prefix.
fn subtree_size(remaining: usize) -> u128 {
    (1..=remaining as u32).map(|l| 4u128.pow(l)).sum()
}

fn scan(buf: &mut Vec<Letter>, scanner: &EnwScanner, max_len: usize, tally: &mut ScanTally) {
    tally.visited += 1;
    if scanner.accepts() {
        tally.enw += 1;
        let w = Word::from_letters(buf.clone());
        let omega = is_omega(&w);
        let perfect = PerfectTreeSpec::from_word(&w).is_some();
        if omega {
            tally.omega.insert(w.clone());
        }
        if perfect {
            tally.perfect.insert(w.clone());
        }
        if omega != perfect {
            tally.counterexamples.push(w);
        }
    }
    if buf.len() == max_len {
        return;
    }
    let below = subtree_size(max_len - buf.len() - 1);
    for l in Letter::ALL {
        let mut next = scanner.clone();
        if next.push(l) {
            buf.push(l);
            scan(buf, &next, max_len, tally);
            buf.pop();
        } else {
            tally.pruned += 1 + below;
        }
    }
}

/// Scans all words of length at most `max_len`. Prefixes on which the
/// [`EnwScanner`] fails are skipped with their whole extension subtree: no
/// extension is in E, so none is in Ω or a tree serialization.
pub fn audit_perfectness(max_len: usize, exec: Execution) -> PerfectnessAudit {
    // Split on 3-letter prefixes; shorter words are scanned inline.
    let split = 3.min(max_len);
    let mut head = ScanTally::default();
    let mut roots: Vec<(Vec<Letter>, EnwScanner)> = Vec::new();
    fn expand(
        buf: &mut Vec<Letter>,
        scanner: &EnwScanner,
        split: usize,
        max_len: usize,
        head: &mut ScanTally,
        roots: &mut Vec<(Vec<Letter>, EnwScanner)>,
    ) {
        if buf.len() == split {
            roots.push((buf.clone(), scanner.clone()));
            return;
        }
        head.visited += 1;
        if scanner.accepts() {
            head.enw += 1;
        }
        let below = subtree_size(max_len - buf.len() - 1);
        for l in Letter::ALL {
            let mut next = scanner.clone();
            if next.push(l) {
                buf.push(l);
                expand(buf, &next, split, max_len, head, roots);
                buf.pop();
            } else {
                head.pruned += 1 + below;
            }
        }
    }
    expand(&mut Vec::new(), &EnwScanner::new(), split, max_len, &mut head, &mut roots);
    let tallies = exec::map_collect(exec, &roots, |(prefix, scanner)| {
        let mut t = ScanTally::default();
        scan(&mut prefix.clone(), scanner, max_len, &mut t);
        t
    });
    for t in tallies {
        head.absorb(t);
    }
    PerfectnessAudit {
        max_len,
        visited: head.visited,
        pruned: head.pruned,
        enw_words: head.enw,
        omega_words: head.omega,
        perfect_words: head.perfect,
        counterexamples: head.counterexamples,
    }
}

/// All perfect-tree serializations of length at most `max_len`, built
/// directly from heights and leaf labelings.
pub fn perfect_serializations_up_to(max_len: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for h in 1u32.. {
        let leaves = 1usize << h;
        let brackets = 2 * (leaves - 1);
        if brackets + 3 * leaves > max_len {
            break;
        }
        for mask in 0u64..(1u64 << leaves) {
            let kinds: Vec<LeafKind> =
                (0..leaves).map(|i| if mask >> i & 1 == 1 { LeafKind::Pzzp } else { LeafKind::Pzp }).collect();
            let w = PerfectTreeSpec::new(h, kinds).unwrap().serialize();
            if w.len() <= max_len {
                out.insert(w);
            }
        }
    }
    out
}
