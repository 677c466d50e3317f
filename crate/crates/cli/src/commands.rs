use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigUint;
use omegakit_core::crossval;
use omegakit_core::dissection::{self, DissectionReport, UnaryLanguage};
use omegakit_core::grammar::{balanced_grammar, enw_grammar, recognize};
use omegakit_core::omega::audit::audit_omega_class;
use omegakit_core::omega::{construct_omega, enumerate_omega, is_omega, MAX_ENUM_Z};
use omegakit_core::recognizers::{enumerate_enw_with, enw_count_formula, is_balanced, is_enw};
use omegakit_core::words::{height, occur_letter, Letter, Word};
use omegakit_core::Execution;

use crate::{Builtin, CheckLang, CountKind};

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn verdict(accepted: bool, stdout: String) -> Self {
        Outcome { code: if accepted { 0 } else { 1 }, stdout, stderr: String::new() }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

pub fn check(lang: CheckLang, word: &str) -> Outcome {
    let w = match Word::parse(word) {
        Ok(w) => w,
        Err(e) => return Outcome::usage(e),
    };
    let accepted = match lang {
        CheckLang::Enw => is_enw(&w),
        CheckLang::Balanced => is_balanced(&w),
        CheckLang::GrammarEnw => recognize(&enw_grammar(), &w).accepted,
        CheckLang::GrammarBalanced => recognize(&balanced_grammar(), &w).accepted,
        CheckLang::Omega => {
            if is_omega(&w) {
                return Outcome::ok(format!("height={} z={}\n", height(&w), occur_letter(&w, Letter::Z)));
            }
            false
        }
    };
    Outcome::verdict(accepted, format!("{accepted}\n"))
}

pub fn gen(n: usize, all: bool) -> Outcome {
    if n < 2 {
        return Outcome::usage(format!("Ω({n}) is empty: every word of Ω has at least 2 letters z"));
    }
    if !all {
        return match construct_omega(n) {
            Ok(w) => Outcome::ok(format!("{w}\n")),
            Err(e) => Outcome::usage(e),
        };
    }
    if n > MAX_ENUM_Z {
        return Outcome::usage(format!("--all needs n <= {MAX_ENUM_Z}"));
    }
    let mut out = String::new();
    for w in enumerate_omega(n).expect("n checked above") {
        let _ = writeln!(out, "{w}");
    }
    Outcome::ok(out)
}

pub fn count(kind: CountKind, n: usize, exec: Execution) -> Outcome {
    match kind {
        CountKind::EnwLeaves => {
            if !(2..=8).contains(&n) {
                return Outcome::usage("enw-leaves takes k in 2..=8");
            }
            let enumerated = enumerate_enw_with(n, exec).expect("k checked above").len() as u128;
            let formula = enw_count_formula(n as u32);
            Outcome::verdict(enumerated == formula, format!("enumerated={enumerated} formula={formula}\n"))
        }
        CountKind::Omega => {
            if !(2..=MAX_ENUM_Z).contains(&n) {
                return Outcome::usage(format!("omega takes n in 2..={MAX_ENUM_Z}"));
            }
            // Ω(48) alone has 6·10^8 words, so the count goes through the
            // state-merged audit rather than one word at a time.
            let audit = audit_omega_class(n).expect("n checked above");
            let mut out = Outcome::verdict(audit.passed(), format!("{}\n", audit.words));
            if !audit.passed() {
                out.stderr = format!("audit disagrees with the closed form {}: {audit:?}\n", audit.formula);
            }
            out
        }
    }
}

pub fn dissect(
    builtin: Option<Builtin>,
    lengths_file: Option<&Path>,
    c: &str,
    cap: &str,
    json: bool,
    exec: Execution,
) -> Outcome {
    let lang = match (builtin, lengths_file) {
        (Some(Builtin::Pow2), _) => UnaryLanguage::Pow2,
        (Some(Builtin::Pow3), _) => UnaryLanguage::Pow3,
        (Some(Builtin::Fib), _) => UnaryLanguage::Fib,
        (None, Some(path)) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return Outcome::usage(format!("{}: {e}", path.display())),
            };
            match UnaryLanguage::from_lengths_text(&text) {
                Ok(l) => l,
                Err(e) => return Outcome::usage(format!("{}: {e}", path.display())),
            }
        }
        (None, None) => return Outcome::usage("give --builtin or --lengths-file"),
    };
    let (c, cap) = match (dissection::parse_rational(c), dissection::parse_length(cap)) {
        (Ok(c), Ok(cap)) => (c, cap),
        (Err(e), _) | (_, Err(e)) => return Outcome::usage(e),
    };
    let report = match dissection::dissect_geometric(&lang, &c, &cap, exec) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(e),
    };
    let stdout =
        if json { serde_json::to_string_pretty(&report).expect("report serializes") + "\n" } else { table(&report) };
    let mut out = Outcome::verdict(report.both_sides_nonempty(), stdout);
    if out.code != 0 {
        out.stderr = "one side of the partition is empty at this cap; try a larger --cap\n".into();
    }
    out
}

fn table(r: &DissectionReport) -> String {
    let list = |v: &[BigUint]| v.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    let _ = writeln!(s, "alpha={} g={} cap={}", r.alpha, r.g, r.cap);
    let _ = writeln!(s, "in={} out={} skipped={}", r.in_count, r.out_count, r.skipped);
    let _ = writeln!(s, "samples_in: {}", list(&r.samples_in));
    let _ = writeln!(s, "samples_out: {}", list(&r.samples_out));
    s
}

pub fn oracle_diff(max_exhaustive: usize, random_samples: u64, seed: u64, exec: Execution) -> Outcome {
    let report = match crossval::oracle_diff(max_exhaustive, random_samples, seed, exec) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(e),
    };
    let mut out = Outcome::verdict(report.mismatches() == 0, format!("mismatches={}\n", report.mismatches()));
    for m in report.exhaustive.examples.iter().chain(&report.random.examples) {
        let _ = writeln!(out.stderr, "{:?} {}: direct={} chart={}", m.language, m.word, m.direct, m.oracle);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_verdicts() {
        assert_eq!(check(CheckLang::Omega, "xxpzppzpyxpzzppzzpyy"), Outcome::ok("height=2 z=6\n".into()));
        assert_eq!(check(CheckLang::Omega, "xpzpxpzppzzpyy").code, 1);
        assert_eq!(check(CheckLang::Enw, "").code, 1);
        assert_eq!(check(CheckLang::GrammarEnw, "xpzppzpy").code, 0);
        assert_eq!(check(CheckLang::GrammarBalanced, "pzppzp").code, 0);
        assert_eq!(check(CheckLang::Balanced, "pzppzp").code, 0);
        let bad = check(CheckLang::Enw, "xpaz");
        assert_eq!(bad.code, 2);
        assert!(bad.stderr.contains("byte offset 2"), "{}", bad.stderr);
    }

    #[test]
    fn gen_outputs() {
        assert_eq!(gen(2, false).stdout, "xpzppzpy\n");
        assert_eq!(gen(4, true).stdout.lines().count(), 2);
        assert_eq!(gen(1, false).code, 2);
        assert_eq!(gen(65, true).code, 2);
    }

    #[test]
    fn counts() {
        assert_eq!(count(CountKind::EnwLeaves, 4, Execution::Sequential).stdout, "enumerated=80 formula=80\n");
        assert_eq!(count(CountKind::EnwLeaves, 2, Execution::Sequential).stdout, "enumerated=4 formula=4\n");
        assert_eq!(count(CountKind::Omega, 3, Execution::Sequential).stdout, "2\n");
        assert_eq!(count(CountKind::EnwLeaves, 9, Execution::Sequential).code, 2);
        assert_eq!(count(CountKind::Omega, 65, Execution::Sequential).code, 2);
    }

    #[test]
    fn dissect_table() {
        let out = dissect(Some(Builtin::Pow2), None, "2", "2^41", false, Execution::Sequential);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("in=30 out=10"), "{}", out.stdout);
        let bad_growth = dissect(Some(Builtin::Pow3), None, "2", "3^10", false, Execution::Sequential);
        assert_eq!(bad_growth.code, 2);
        assert!(bad_growth.stderr.contains("member 1"));
        let small = dissect(Some(Builtin::Pow2), None, "2", "4", false, Execution::Sequential);
        assert_eq!(small.code, 1);
        assert_eq!(dissect(None, None, "2", "8", false, Execution::Sequential).code, 2);
        assert_eq!(dissect(Some(Builtin::Fib), None, "x", "8", false, Execution::Sequential).code, 2);
    }

    #[test]
    fn oracle_diff_vacuous() {
        assert_eq!(oracle_diff(0, 0, 0, Execution::Sequential), Outcome::ok("mismatches=0\n".into()));
        assert_eq!(oracle_diff(13, 0, 0, Execution::Sequential).code, 2);
    }
}
