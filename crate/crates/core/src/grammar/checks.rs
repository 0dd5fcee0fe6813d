//! Bounded consistency checks and the stratification of recursive languages.

use std::collections::BTreeMap;
use std::fmt;

use super::analysis::{class_edges, occurrence_classes, shortest_witnesses, u0};
use super::{Grammar, GrammarError, Word};
use crate::lexorder::{bounded_languages, lex_classify, OrderClass, DEFAULT_CAP};

/// Simple cycles explored per nonterminal by the well-order probes.
pub const CYCLE_LIMIT: usize = 16;

/// A concrete certificate that a bounded check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Both words are in `L(X)` and `shorter` is a proper prefix of `longer`.
    PrefixPair { nonterminal: String, shorter: Word, longer: Word },
    /// Two pump words of `X` that are not prefix-comparable.
    IncomparablePumps { nonterminal: String, u: Word, v: Word },
    /// `word ∈ L(X)` with `pump <_s word` and `pump` not a prefix of `word`.
    Hierarchy { nonterminal: String, pump: Word, word: Word },
    /// Every cycle through `X` has an empty terminal prefix.
    EmptyPump { nonterminal: String },
}

impl Violation {
    pub fn render(&self, g: &Grammar) -> String {
        let a = g.alphabet();
        match self {
            Violation::PrefixPair { nonterminal, shorter, longer } => {
                format!("prefix {nonterminal}: {} <_p {}", a.render(shorter), a.render(longer))
            }
            Violation::IncomparablePumps { nonterminal, u, v } => {
                format!("pumps {nonterminal}: {} and {} are prefix-incomparable", a.render(u), a.render(v))
            }
            Violation::Hierarchy { nonterminal, pump, word } => {
                format!("hierarchy {nonterminal}: pump {} <_s {}", a.render(pump), a.render(word))
            }
            Violation::EmptyPump { nonterminal } => format!("empty-pump {nonterminal}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
    /// Some enumeration hit the word cap, so the check covered fewer words.
    pub truncated: bool,
}

impl ViolationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Reports every pair `(u, uv)` with `v ≠ ε` inside some `L(X)`, over words of
/// length at most `maxlen`.
pub fn check_prefix(g: &Grammar, maxlen: usize) -> ViolationReport {
    let langs = bounded_languages(g, maxlen, DEFAULT_CAP);
    let mut report = ViolationReport::default();
    for x in 0..g.nonterminals().len() {
        report.truncated |= langs.truncated(x);
        for w in langs.words(x) {
            for k in 1..w.len() {
                let p = Word::from(w.letters()[..k].to_vec());
                if langs.contains(x, &p) {
                    report.violations.push(Violation::PrefixPair {
                        nonterminal: g.name(x).to_string(),
                        shorter: p,
                        longer: w.clone(),
                    });
                }
            }
        }
    }
    report
}

/// Terminal labels of up to `limit` simple cycles through `x` in its class graph,
/// found depth first. Empty labels are kept.
pub fn collect_pump_words(g: &Grammar, x: &str, limit: usize) -> Result<Vec<Word>, GrammarError> {
    let xi = g.lookup(x)?;
    let classes = occurrence_classes(g);
    if !classes.recursive(xi) {
        return Err(GrammarError::NotRecursive(x.to_string()));
    }
    let edges = class_edges(g, &classes, &shortest_witnesses(g), xi);
    let mut out = Vec::new();
    let mut on_path = vec![false; g.nonterminals().len()];
    cycles(&edges, xi, xi, &mut Word::empty(), &mut on_path, limit, &mut out);
    Ok(out)
}

fn cycles(
    edges: &[(usize, usize, Word)],
    target: usize,
    node: usize,
    label: &mut Word,
    on_path: &mut [bool],
    limit: usize,
    out: &mut Vec<Word>,
) {
    on_path[node] = true;
    for (from, to, l) in edges {
        if out.len() >= limit {
            break;
        }
        if *from != node {
            continue;
        }
        let mark = label.len();
        label.extend(l);
        if *to == target {
            if !out.contains(label) {
                out.push(label.clone());
            }
        } else if !on_path[*to] {
            cycles(edges, target, *to, label, on_path, limit, out);
        }
        label.truncate(mark);
    }
    on_path[node] = false;
}

/// Necessary conditions for a well-ordered prefix grammar, probed on each
/// recursive nonterminal: pump words are pairwise prefix-comparable, and every
/// bounded `v ∈ L(X)` satisfies `v <_s u` or `u ≤_p v` for each pump word `u`.
pub fn check_wellorder_probes(g: &Grammar, maxlen: usize) -> ViolationReport {
    let langs = bounded_languages(g, maxlen, DEFAULT_CAP);
    let classes = occurrence_classes(g);
    let mut report = ViolationReport::default();
    for x in 0..g.nonterminals().len() {
        if !classes.recursive(x) {
            continue;
        }
        let name = g.name(x).to_string();
        report.truncated |= langs.truncated(x);
        let pumps: Vec<Word> = collect_pump_words(g, &name, CYCLE_LIMIT)
            .expect("recursive")
            .into_iter()
            .filter(|w| !w.is_empty())
            .collect();
        if pumps.is_empty() {
            report.violations.push(Violation::EmptyPump { nonterminal: name });
            continue;
        }
        for (i, u) in pumps.iter().enumerate() {
            for v in &pumps[i + 1..] {
                if !(u.is_prefix_of(v) || v.is_prefix_of(u)) {
                    report.violations.push(Violation::IncomparablePumps {
                        nonterminal: name.clone(),
                        u: u.clone(),
                        v: v.clone(),
                    });
                }
            }
        }
        let words = langs.words(x);
        for u in &pumps {
            let mut power = u.clone();
            while power.len() <= maxlen.max(u.len()) {
                for v in &words {
                    if matches!(lex_classify(&power, v), OrderClass::StrictLess) {
                        report.violations.push(Violation::Hierarchy {
                            nonterminal: name.clone(),
                            pump: power.clone(),
                            word: v.clone(),
                        });
                    }
                }
                power = power.concat(u);
            }
        }
    }
    report
}

/// The bounded words of `L(X)` split into strata by the number of leading
/// copies of `u₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strata {
    pub u0: Word,
    pub strata: BTreeMap<usize, Vec<Word>>,
    /// Words not of the form `u₀ⁿ x 0 y` with `x1 ≤_p u₀`.
    pub unclassified: Vec<Word>,
    pub truncated: bool,
}

fn classify(u0: &Word, w: &Word) -> Option<usize> {
    let (u, s) = (u0.letters(), w.letters());
    let mut m = 0;
    while s[m * u.len()..].starts_with(u) {
        m += 1;
    }
    let rest = &s[m * u.len()..];
    let i = rest.iter().zip(u).take_while(|(a, b)| a == b).count();
    (i < rest.len() && i < u.len() && rest[i] == 0 && u[i] == 1).then_some(m)
}

pub fn strata(g: &Grammar, x: &str, maxlen: usize) -> Result<Strata, GrammarError> {
    let xi = g.lookup(x)?;
    if g.alphabet().len() != 2 {
        return Err(GrammarError::NotBinary);
    }
    let langs = bounded_languages(g, maxlen, DEFAULT_CAP);
    let words = langs.words(xi);
    let u0 = match u0(g, x) {
        Ok(u) => u,
        Err(GrammarError::NotRecursive(_)) if words.len() < 2 => {
            return Err(GrammarError::Degenerate(x.to_string()))
        }
        Err(e) => return Err(e),
    };
    let mut out = Strata { u0, strata: BTreeMap::new(), unclassified: Vec::new(), truncated: langs.truncated(xi) };
    for w in words {
        match classify(&out.u0, &w) {
            Some(m) => out.strata.entry(m).or_default().push(w),
            None => out.unclassified.push(w),
        }
    }
    Ok(out)
}

/// Stratum `n`: the union over `x` of the sets `L(n, x, X)`, bounded by `maxlen`.
pub fn stratum(g: &Grammar, x: &str, n: usize, maxlen: usize) -> Result<Vec<Word>, GrammarError> {
    Ok(strata(g, x, maxlen)?.strata.remove(&n).unwrap_or_default())
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violation(s)", self.violations.len())?;
        if self.truncated {
            write!(f, " (enumeration truncated)")?;
        }
        Ok(())
    }
}
