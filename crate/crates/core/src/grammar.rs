//! Context-free grammars over `{x, y, z, p}` and a chart (Earley) recognizer.
//!
//! The recognizer is the independent membership oracle for the two grammars
//! whose intersection is the Ω language; the direct recognizers in
//! [`crate::recognizers`] are checked against it.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::words::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NonterminalId(u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Terminal(Letter),
    Nonterminal(NonterminalId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Production {
    pub lhs: NonterminalId,
    pub body: Vec<Symbol>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrammarError {
    #[error("nonterminal {0:?} is used but has no production")]
    Undefined(String),
    #[error("start symbol {0:?} has no production")]
    MissingStart(String),
    #[error("bad symbol {0:?}: terminals are x, y, z, p and nonterminals start with an uppercase letter")]
    BadSymbol(String),
}

/// An immutable, validated context-free grammar.
#[derive(Clone, Debug)]
pub struct Cfg {
    names: Vec<String>,
    start: NonterminalId,
    productions: Vec<Production>,
    by_lhs: Vec<Vec<usize>>,
    nullable: Vec<bool>,
    min_yield: Vec<usize>,
}

/// Collects productions written as whitespace-separated symbols, e.g.
/// `rule("S", "x P P y")`; `eps` (or an empty body) denotes ε.
#[derive(Debug)]
pub struct CfgBuilder {
    start: String,
    names: Vec<String>,
    ids: HashMap<String, NonterminalId>,
    productions: Vec<Production>,
    defined: HashSet<NonterminalId>,
    error: Option<GrammarError>,
}

impl CfgBuilder {
    pub fn new(start: &str) -> Self {
        let mut b = CfgBuilder {
            start: start.to_string(),
            names: Vec::new(),
            ids: HashMap::new(),
            productions: Vec::new(),
            defined: HashSet::new(),
            error: None,
        };
        b.intern(start);
        b
    }

    fn intern(&mut self, name: &str) -> NonterminalId {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = NonterminalId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        id
    }

    pub fn rule(mut self, lhs: &str, body: &str) -> Self {
        let lhs_id = self.intern(lhs);
        let mut symbols = Vec::new();
        for tok in body.split_whitespace() {
            if tok == "eps" {
                continue;
            }
            let mut chars = tok.chars();
            let first = chars.next().unwrap();
            if tok.len() == 1 {
                if let Some(l) = Letter::from_char(first) {
                    symbols.push(Symbol::Terminal(l));
                    continue;
                }
            }
            if first.is_ascii_uppercase() && tok.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                symbols.push(Symbol::Nonterminal(self.intern(tok)));
            } else if self.error.is_none() {
                self.error = Some(GrammarError::BadSymbol(tok.to_string()));
            }
        }
        self.defined.insert(lhs_id);
        self.productions.push(Production { lhs: lhs_id, body: symbols });
        self
    }

    /// Adds one production per `|`-separated alternative.
    pub fn rules(mut self, lhs: &str, alternatives: &str) -> Self {
        for alt in alternatives.split('|') {
            self = self.rule(lhs, alt);
        }
        self
    }

    pub fn build(self) -> Result<Cfg, GrammarError> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let start = self.ids[&self.start];
        if !self.defined.contains(&start) {
            return Err(GrammarError::MissingStart(self.start));
        }
        for (i, name) in self.names.iter().enumerate() {
            if !self.defined.contains(&NonterminalId(i as u32)) {
                return Err(GrammarError::Undefined(name.clone()));
            }
        }
        let n = self.names.len();
        let mut by_lhs = vec![Vec::new(); n];
        for (i, p) in self.productions.iter().enumerate() {
            by_lhs[p.lhs.0 as usize].push(i);
        }
        let mut cfg = Cfg {
            names: self.names,
            start,
            productions: self.productions,
            by_lhs,
            nullable: vec![false; n],
            min_yield: vec![usize::MAX; n],
        };
        cfg.compute_nullable();
        cfg.compute_min_yield();
        Ok(cfg)
    }
}

impl Cfg {
    pub fn start(&self) -> NonterminalId {
        self.start
    }

    pub fn name(&self, id: NonterminalId) -> &str {
        &self.names[id.0 as usize]
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = NonterminalId> + '_ {
        (0..self.names.len() as u32).map(NonterminalId)
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn productions_of(&self, id: NonterminalId) -> impl Iterator<Item = &Production> + '_ {
        self.by_lhs[id.0 as usize].iter().map(|&i| &self.productions[i])
    }

    pub fn terminals(&self) -> BTreeSet<Letter> {
        self.productions
            .iter()
            .flat_map(|p| p.body.iter())
            .filter_map(|s| match s {
                Symbol::Terminal(l) => Some(*l),
                Symbol::Nonterminal(_) => None,
            })
            .collect()
    }

    pub fn is_nullable(&self, id: NonterminalId) -> bool {
        self.nullable[id.0 as usize]
    }

    /// Length of the shortest terminal word derivable from `id`, or
    /// `usize::MAX` for unproductive nonterminals.
    pub fn min_yield(&self, id: NonterminalId) -> usize {
        self.min_yield[id.0 as usize]
    }

    fn compute_nullable(&mut self) {
        loop {
            let mut changed = false;
            for p in &self.productions {
                let lhs = p.lhs.0 as usize;
                if self.nullable[lhs] {
                    continue;
                }
                let all = p.body.iter().all(|s| match s {
                    Symbol::Terminal(_) => false,
                    Symbol::Nonterminal(n) => self.nullable[n.0 as usize],
                });
                if all {
                    self.nullable[lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn compute_min_yield(&mut self) {
        loop {
            let mut changed = false;
            for p in &self.productions {
                let mut total = 0usize;
                for s in &p.body {
                    let add = match s {
                        Symbol::Terminal(_) => 1,
                        Symbol::Nonterminal(n) => self.min_yield[n.0 as usize],
                    };
                    total = total.saturating_add(add);
                }
                let lhs = p.lhs.0 as usize;
                if total < self.min_yield[lhs] {
                    self.min_yield[lhs] = total;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn symbol_min_yield(&self, s: &Symbol) -> usize {
        match s {
            Symbol::Terminal(_) => 1,
            Symbol::Nonterminal(n) => self.min_yield(*n),
        }
    }
}

/// Prints the grammar as a BNF listing: one line per nonterminal, in the
/// order their productions were added, alternatives separated by `|`, ε
/// written `eps`.
impl fmt::Display for Cfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut order: Vec<NonterminalId> = Vec::new();
        for p in &self.productions {
            if !order.contains(&p.lhs) {
                order.push(p.lhs);
            }
        }
        for id in order {
            let alts: Vec<String> = self
                .productions_of(id)
                .map(|p| {
                    if p.body.is_empty() {
                        "eps".to_string()
                    } else {
                        p.body
                            .iter()
                            .map(|s| match s {
                                Symbol::Terminal(l) => l.to_string(),
                                Symbol::Nonterminal(n) => self.name(*n).to_string(),
                            })
                            .collect::<Vec<_>>()
                            .join(" ")
                    }
                })
                .collect();
            writeln!(f, "{} -> {}", self.name(id), alts.join(" | "))?;
        }
        Ok(())
    }
}

/// `S -> x P P y`, `P -> S | p z p | p z z p`.
pub fn enw_grammar() -> Cfg {
    CfgBuilder::new("S")
        .rule("S", "x P P y")
        .rules("P", "S | p z p | p z z p")
        .build()
        .expect("extended non-associative word grammar is well formed")
}

/// `S -> x S y | p Z V Z p`, `V -> V Z V | p T p`, `T -> y T x | eps`,
/// `Z -> z | z z`.
pub fn balanced_grammar() -> Cfg {
    CfgBuilder::new("S")
        .rules("S", "x S y | p Z V Z p")
        .rules("V", "V Z V | p T p")
        .rules("T", "y T x | eps")
        .rules("Z", "z | z z")
        .build()
        .expect("balanced word grammar is well formed")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChartRecognition {
    pub accepted: bool,
    /// Total number of Earley items created; diagnostic only.
    pub item_count: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Item {
    production: u32,
    dot: u32,
    origin: u32,
}

#[derive(Default)]
struct ItemSet {
    items: Vec<Item>,
    seen: HashSet<Item>,
}

impl ItemSet {
    fn add(&mut self, item: Item) {
        if self.seen.insert(item) {
            self.items.push(item);
        }
    }
}

/// Earley recognition with the nullable-prediction fix, so ε-productions and
/// left recursion need no grammar rewriting. Stops as soon as an item set
/// comes out empty.
pub fn recognize(g: &Cfg, w: &Word) -> ChartRecognition {
    let n = w.len();
    let mut sets: Vec<ItemSet> = Vec::with_capacity(n + 1);
    sets.push(ItemSet::default());
    for &pi in &g.by_lhs[g.start.0 as usize] {
        sets[0].add(Item { production: pi as u32, dot: 0, origin: 0 });
    }
    let mut item_count = 0;
    for i in 0..=n {
        if i < n {
            sets.push(ItemSet::default());
        }
        let mut j = 0;
        while j < sets[i].items.len() {
            let item = sets[i].items[j];
            j += 1;
            let prod = &g.productions[item.production as usize];
            match prod.body.get(item.dot as usize) {
                None => {
                    let origin = item.origin as usize;
                    let advanced: Vec<Item> = sets[origin]
                        .items
                        .iter()
                        .filter(|it| {
                            g.productions[it.production as usize].body.get(it.dot as usize)
                                == Some(&Symbol::Nonterminal(prod.lhs))
                        })
                        .map(|it| Item { dot: it.dot + 1, ..*it })
                        .collect();
                    for a in advanced {
                        sets[i].add(a);
                    }
                }
                Some(Symbol::Nonterminal(b)) => {
                    for &pi in &g.by_lhs[b.0 as usize] {
                        sets[i].add(Item { production: pi as u32, dot: 0, origin: i as u32 });
                    }
                    if g.is_nullable(*b) {
                        sets[i].add(Item { dot: item.dot + 1, ..item });
                    }
                }
                Some(Symbol::Terminal(a)) => {
                    if i < n && w[i] == *a {
                        sets[i + 1].add(Item { dot: item.dot + 1, ..item });
                    }
                }
            }
        }
        item_count += sets[i].items.len();
        if i < n && sets[i + 1].items.is_empty() {
            return ChartRecognition { accepted: false, item_count };
        }
    }
    let accepted = sets[n].items.iter().any(|it| {
        let p = &g.productions[it.production as usize];
        p.lhs == g.start && it.origin == 0 && it.dot as usize == p.body.len()
    });
    ChartRecognition { accepted, item_count }
}

/// All distinct words of length at most `max_len` generated by `g`.
///
/// Breadth-first over leftmost sentential forms; a form is dropped once its
/// terminal prefix plus the minimal yield of its remaining symbols exceeds
/// `max_len`.
pub fn enumerate_derivations(g: &Cfg, max_len: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let start = vec![Symbol::Nonterminal(g.start)];
    if g.min_yield(g.start) > max_len {
        return out;
    }
    let mut seen: HashSet<Vec<Symbol>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(form) = queue.pop_front() {
        let Some(pos) = form.iter().position(|s| matches!(s, Symbol::Nonterminal(_))) else {
            out.insert(
                form.iter()
                    .map(|s| match s {
                        Symbol::Terminal(l) => *l,
                        Symbol::Nonterminal(_) => unreachable!(),
                    })
                    .collect(),
            );
            continue;
        };
        let Symbol::Nonterminal(nt) = form[pos] else { unreachable!() };
        for p in g.productions_of(nt) {
            let mut next = Vec::with_capacity(form.len() + p.body.len());
            next.extend_from_slice(&form[..pos]);
            next.extend_from_slice(&p.body);
            next.extend_from_slice(&form[pos + 1..]);
            let bound = next.iter().fold(0usize, |acc, s| acc.saturating_add(g.symbol_min_yield(s)));
            if bound > max_len {
                continue;
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    out
}
