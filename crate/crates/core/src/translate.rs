//! From fixed-point systems to prefix grammars: the labeled-frontier grammar
//! `G_L` and the frontier grammar `G′`, plus a bounded check of the
//! correspondence between grammar derivations and Kleene iterates.
//!
//! Nonterminals are the function variables `F_i` and the pairs `(F_i,j)`.
//! For each position `u` of a body `t_i`:
//!
//! * `t_i(u) = x_j` gives `(F_i,j) → û`;
//! * `t_i(u)` a constant or a function variable gives `F_i → û·t_i(u)`;
//!
//! where `û` spells the `(label, child)` pairs along the path to `u`. Pairs
//! below a function variable are the nonterminals `(F_k,j)`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::grammar::{height_bound, normalize, Grammar, GrammarError, Symbol, TerminalAlphabet, Word};
use crate::lexorder::{bounded_languages, DEFAULT_CAP};
use crate::ordinal::CnfOrdinal;
use crate::tree::{Label, PartialTree, TreeSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("nonterminal '{0}' derives both the empty word and a nonempty word")]
    MixedEpsilon(String),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

fn pair_name(base: &str, j: usize) -> String {
    format!("({base},{j})")
}

/// The letters `(σ,j)` ordered by child index, then by declaration of `σ`,
/// followed by the constants in declaration order.
pub fn labeled_alphabet(sys: &TreeSystem) -> TerminalAlphabet {
    let a = sys.alphabet();
    let mut letters = Vec::new();
    for j in 0..a.max_arity() {
        for (name, arity) in a.symbols() {
            if j < *arity {
                letters.push(pair_name(name, j));
            }
        }
    }
    letters.extend(a.symbols().iter().filter(|s| s.1 == 0).map(|s| s.0.clone()));
    if letters.is_empty() {
        letters.push("ε".into());
    }
    TerminalAlphabet::new(letters).expect("distinct letters")
}

/// Child indices `0 < 1 < … < k-1` for the largest arity `k` (at least `0`).
pub fn frontier_alphabet(sys: &TreeSystem) -> TerminalAlphabet {
    TerminalAlphabet::new((0..sys.alphabet().max_arity().max(1)).map(|j| j.to_string())).expect("distinct")
}

/// Nonterminal names in table order: `F_i, (F_i,0), …` for each equation.
fn nonterminal_names(sys: &TreeSystem) -> Vec<String> {
    let mut out = Vec::new();
    for e in sys.equations() {
        out.push(e.name.clone());
        out.extend((0..e.arity).map(|j| pair_name(&e.name, j)));
    }
    out
}

enum Flavor {
    Labeled,
    Frontier,
}

/// Productions as `(lhs name, rhs)` with possibly empty right-hand sides.
fn raw_productions(sys: &TreeSystem, flavor: &Flavor, alphabet: &TerminalAlphabet) -> Vec<(String, Vec<RawSym>)> {
    let mut out = Vec::new();
    for e in sys.equations() {
        let body = PartialTree::from(e.body.clone());
        body.walk(|pos, node| {
            let hat = body.hat(pos).expect("defined position");
            let mut rhs: Vec<RawSym> = hat
                .iter()
                .map(|&(l, j)| match l {
                    Label::Sym(s) => match flavor {
                        Flavor::Labeled => {
                            RawSym::T(alphabet.letter(&pair_name(sys.alphabet().name(s), j)).expect("letter"))
                        }
                        Flavor::Frontier => RawSym::T(alphabet.letter(&j.to_string()).expect("letter")),
                    },
                    Label::Fun(f) => RawSym::N(pair_name(&sys.equations()[f].name, j)),
                    Label::Var(_) => unreachable!("variables are leaves"),
                })
                .collect();
            match node.label() {
                Label::Var(j) => out.push((pair_name(&e.name, j), rhs)),
                Label::Sym(s) if sys.alphabet().arity(s) == 0 => {
                    if let Flavor::Labeled = flavor {
                        rhs.push(RawSym::T(alphabet.letter(sys.alphabet().name(s)).expect("constant")));
                    }
                    out.push((e.name.clone(), rhs));
                }
                Label::Fun(f) => {
                    rhs.push(RawSym::N(sys.equations()[f].name.clone()));
                    out.push((e.name.clone(), rhs));
                }
                Label::Sym(_) => {}
            }
            true
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum RawSym {
    T(u32),
    N(String),
}

/// Removes nonterminals whose language is exactly `{ε}` from right-hand sides.
/// A start symbol with language `{ε}` yields the one-word grammar.
/// Also returns the removed nonterminals.
fn assemble(
    sys: &TreeSystem,
    alphabet: TerminalAlphabet,
    raw: Vec<(String, Vec<RawSym>)>,
) -> Result<(Grammar, Vec<String>), TranslateError> {
    let names = nonterminal_names(sys);
    let start = names[0].clone();
    let mut nullable: HashSet<String> = HashSet::new();
    loop {
        let before = nullable.len();
        for (lhs, rhs) in &raw {
            if rhs.iter().all(|s| matches!(s, RawSym::N(n) if nullable.contains(n))) {
                nullable.insert(lhs.clone());
            }
        }
        if nullable.len() == before {
            break;
        }
    }
    let mut productive: HashSet<String> = HashSet::new();
    loop {
        let before = productive.len();
        for (lhs, rhs) in &raw {
            if rhs.iter().all(|s| matches!(s, RawSym::T(_)) || matches!(s, RawSym::N(n) if productive.contains(n))) {
                productive.insert(lhs.clone());
            }
        }
        if productive.len() == before {
            break;
        }
    }
    // Nonterminals deriving some nonempty word.
    let mut nonempty: HashSet<String> = HashSet::new();
    loop {
        let before = nonempty.len();
        for (lhs, rhs) in &raw {
            let usable = rhs.iter().all(|s| match s {
                RawSym::T(_) => true,
                RawSym::N(n) => productive.contains(n),
            });
            let grows = rhs.iter().any(|s| match s {
                RawSym::T(_) => true,
                RawSym::N(n) => nonempty.contains(n),
            });
            if usable && grows {
                nonempty.insert(lhs.clone());
            }
        }
        if nonempty.len() == before {
            break;
        }
    }
    if let Some(bad) = names.iter().find(|n| nullable.contains(*n) && nonempty.contains(*n)) {
        return Err(TranslateError::MixedEpsilon(bad.clone()));
    }
    let removed: Vec<String> = names.iter().filter(|n| nullable.contains(*n)).cloned().collect();
    if nullable.contains(&start) {
        return Ok((Grammar::epsilon_language(alphabet, &start), removed));
    }
    let mut g = Grammar::new(alphabet, &start);
    for n in &names {
        g.nonterminal(n);
    }
    for (lhs, rhs) in raw {
        if nullable.contains(&lhs) {
            continue;
        }
        let rhs: Vec<Symbol> = rhs
            .into_iter()
            .filter(|s| !matches!(s, RawSym::N(n) if nullable.contains(n)))
            .map(|s| match s {
                RawSym::T(l) => Symbol::T(l),
                RawSym::N(n) => Symbol::N(g.nonterminal(&n)),
            })
            .collect();
        let lhs = g.nonterminal(&lhs);
        g.add_production(lhs, rhs)?;
    }
    Ok((g, removed))
}

/// `G_L`, generating the labeled frontier of the principal tree. The grammar
/// is not reduced, so it lists every production the construction produces.
pub fn build_labeled_grammar(sys: &TreeSystem) -> Result<Grammar, TranslateError> {
    let alphabet = labeled_alphabet(sys);
    let raw = raw_productions(sys, &Flavor::Labeled, &alphabet);
    Ok(assemble(sys, alphabet, raw)?.0)
}

fn epsilon_only(sys: &TreeSystem) -> Vec<String> {
    let alphabet = labeled_alphabet(sys);
    let raw = raw_productions(sys, &Flavor::Labeled, &alphabet);
    assemble(sys, alphabet, raw).map(|r| r.1).unwrap_or_default()
}

/// `G′`: `G_L` with `(σ,j) ↦ j` and constants erased. Not reduced.
pub fn build_frontier_grammar(sys: &TreeSystem) -> Result<Grammar, TranslateError> {
    let alphabet = frontier_alphabet(sys);
    let raw = raw_productions(sys, &Flavor::Frontier, &alphabet);
    Ok(assemble(sys, alphabet, raw)?.0)
}

/// `ω^(ω^h)` for the height `h` of the start symbol of the reduced frontier
/// grammar of the binarized system.
pub fn frontier_ordinal_bound(sys: &TreeSystem) -> Result<CnfOrdinal, TranslateError> {
    let g = normalize(&build_frontier_grammar(&sys.binarize())?);
    Ok(height_bound(&g, g.start_name())?)
}

/// Which half of the correspondence a discrepancy violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// A word read off the iterate that the grammar does not derive.
    NotDerivable,
    /// A word the grammar derives within the depth bound that the iterate lacks.
    NotInIterate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub nonterminal: String,
    pub word: String,
    pub direction: Direction,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TranslationReport {
    /// Words read off the iterates (`A` sets).
    pub iterate_words: usize,
    /// Grammar words derivable within the depth bound (`B` sets).
    pub settled_words: usize,
    pub discrepancies: Vec<Discrepancy>,
    pub truncated: bool,
}

impl TranslationReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.direction {
            Direction::NotDerivable => "missing from the grammar",
            Direction::NotInIterate => "missing from the iterate",
        };
        write!(f, "{}: {} {what}", self.nonterminal, self.word)
    }
}

/// Words `û` (for `x_j` leaves) and `û·c` (for constant leaves) of every
/// component of the `depth`-th iterate, as letter-name sequences, keyed by nonterminal.
fn iterate_words(sys: &TreeSystem, depth: usize, maxlen: usize) -> Vec<(String, Vec<String>)> {
    let iterates = sys.kleene_expand_truncated(depth, Some(maxlen));
    let mut out = Vec::new();
    for (e, t) in sys.equations().iter().zip(&iterates) {
        for (pos, label) in t.frontier() {
            let mut word: Vec<String> = t
                .hat(&pos)
                .expect("frontier position")
                .into_iter()
                .map(|(l, j)| pair_name(&sys.label_name(l), j))
                .collect();
            let lhs = match label {
                Label::Var(j) => pair_name(&e.name, j),
                Label::Sym(s) => {
                    word.push(sys.alphabet().name(s).to_string());
                    e.name.clone()
                }
                Label::Fun(_) => unreachable!("iterates have no function variables"),
            };
            if word.len() <= maxlen {
                out.push((lhs, word));
            }
        }
    }
    out
}

/// Bounded words of every nonterminal derivable by parse trees of height at
/// most `depth`.
fn height_bounded(g: &Grammar, depth: usize, maxlen: usize) -> Vec<BTreeSet<Word>> {
    let n = g.nonterminals().len();
    let mut cur: Vec<BTreeSet<Word>> = vec![BTreeSet::new(); n];
    for _ in 0..depth {
        let mut next = vec![BTreeSet::new(); n];
        for p in g.productions() {
            let mut partial = vec![Word::empty()];
            for s in &p.rhs {
                let mut grown = Vec::new();
                for w in &partial {
                    match *s {
                        Symbol::T(l) => {
                            let mut v = w.clone();
                            v.push(l);
                            grown.push(v);
                        }
                        Symbol::N(y) => grown.extend(cur[y].iter().map(|x| w.concat(x))),
                    }
                }
                partial = grown.into_iter().filter(|w| w.len() <= maxlen).collect();
            }
            next[p.lhs].extend(partial);
        }
        cur = next;
    }
    cur
}

/// Checks `G_L` against the iterates of `sys`; see [`verify_translation_with`].
pub fn verify_translation(sys: &TreeSystem, depth: usize, maxlen: usize) -> Result<TranslationReport, TranslateError> {
    let gl = build_labeled_grammar(sys)?;
    Ok(verify_translation_with(sys, &gl, depth, maxlen))
}

/// Bounded check of the labeled-frontier correspondence for a candidate `G_L`:
///
/// * every `û` with `T_i(u) = x_j` (resp. `û·c` with `T_i(u) = c`) in the
///   `depth`-th iterate is derivable from `(F_i,j)` (resp. `F_i`);
/// * every word derivable from those nonterminals by a parse tree of height at
///   most `depth` occurs in the iterate.
///
/// Words longer than `maxlen` are ignored on both sides.
pub fn verify_translation_with(sys: &TreeSystem, gl: &Grammar, depth: usize, maxlen: usize) -> TranslationReport {
    let mut report = TranslationReport::default();
    let alphabet = gl.alphabet();
    // Nonterminals with language {ε} are removed by the construction; their
    // words are accepted as is, and each removal can hide one unfolding step
    // from the derivation height.
    let mut removed = epsilon_only(sys);
    if gl.is_epsilon() {
        removed.push(gl.start_name().to_string());
    }
    let langs = bounded_languages(gl, maxlen, DEFAULT_CAP);
    let settled = height_bounded(gl, depth.saturating_sub(removed.len()), maxlen);
    let mut seen: HashSet<(String, Word)> = HashSet::new();
    for (lhs, names) in iterate_words(sys, depth, maxlen) {
        report.iterate_words += 1;
        let word: Option<Vec<u32>> = names.iter().map(|n| alphabet.letter(n)).collect();
        let derivable = match (gl.index_of(&lhs), word.clone()) {
            _ if names.is_empty() => removed.contains(&lhs),
            (Some(x), Some(w)) => !gl.is_epsilon() && langs.contains(x, &Word::from(w)),
            _ => false,
        };
        if !derivable {
            report.discrepancies.push(Discrepancy {
                nonterminal: lhs.clone(),
                word: names.join(" "),
                direction: Direction::NotDerivable,
            });
        }
        if let Some(w) = word {
            seen.insert((lhs, Word::from(w)));
        }
    }
    for x in nonterminal_names(sys) {
        let Some(xi) = gl.index_of(&x) else { continue };
        report.truncated |= langs.truncated(xi);
        for w in &settled[xi] {
            report.settled_words += 1;
            if !seen.contains(&(x.clone(), w.clone())) {
                report.discrepancies.push(Discrepancy {
                    nonterminal: x.clone(),
                    word: alphabet.render(w),
                    direction: Direction::NotInIterate,
                });
            }
        }
    }
    report
}

/// Constant-leaf positions of the principal component of the `depth`-th
/// iterate with length at most `maxlen`, as words over child indices.
pub fn bounded_frontier(sys: &TreeSystem, depth: usize, maxlen: usize) -> Vec<Word> {
    let t = &sys.kleene_expand_truncated(depth, Some(maxlen))[0];
    let mut out: Vec<Word> = t
        .frontier()
        .into_iter()
        .filter(|(_, l)| matches!(l, Label::Sym(_)))
        .map(|(p, _)| Word::from(p.into_iter().map(|j| j as u32).collect::<Vec<_>>()))
        .collect();
    out.sort();
    out
}
