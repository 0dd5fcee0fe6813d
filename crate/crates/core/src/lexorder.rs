//! Prefix, strict and lexicographic orders on words, bounded enumeration of
//! grammar languages, and order-structure harnesses.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::grammar::{occurrence_classes, Grammar, GrammarError, Symbol, TerminalAlphabet, Word};
use crate::ordinal::CnfOrdinal;
use crate::synthesis::{SynthesisError, SynthesizedGrammar};

pub const DEFAULT_MAXLEN: usize = 12;
pub const DEFAULT_CAP: usize = 20_000;

/// How two words compare: exactly one case holds for any pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderClass {
    Equal,
    /// `u <_p v`: `v = uw` with `w` nonempty.
    PrefixLess,
    /// `u <_s v`: at the first difference `u` has the smaller letter.
    StrictLess,
    PrefixGreater,
    StrictGreater,
}

impl OrderClass {
    pub fn ordering(self) -> Ordering {
        match self {
            OrderClass::Equal => Ordering::Equal,
            OrderClass::PrefixLess | OrderClass::StrictLess => Ordering::Less,
            OrderClass::PrefixGreater | OrderClass::StrictGreater => Ordering::Greater,
        }
    }

    /// The class of `(v, u)` given the class of `(u, v)`.
    pub fn mirror(self) -> Self {
        match self {
            OrderClass::Equal => OrderClass::Equal,
            OrderClass::PrefixLess => OrderClass::PrefixGreater,
            OrderClass::StrictLess => OrderClass::StrictGreater,
            OrderClass::PrefixGreater => OrderClass::PrefixLess,
            OrderClass::StrictGreater => OrderClass::StrictLess,
        }
    }
}

pub fn lex_classify(u: &Word, v: &Word) -> OrderClass {
    let (a, b) = (u.letters(), v.letters());
    match a.iter().zip(b).find(|(x, y)| x != y) {
        Some((x, y)) if x < y => OrderClass::StrictLess,
        Some(_) => OrderClass::StrictGreater,
        None => match a.len().cmp(&b.len()) {
            Ordering::Less => OrderClass::PrefixLess,
            Ordering::Equal => OrderClass::Equal,
            Ordering::Greater => OrderClass::PrefixGreater,
        },
    }
}

/// [`lex_classify`] after checking that both words are over `alphabet`.
pub fn lex_classify_in(alphabet: &TerminalAlphabet, u: &Word, v: &Word) -> Result<OrderClass, GrammarError> {
    for w in [u, v] {
        if !alphabet.contains_word(w) {
            return Err(GrammarError::BadWord(format!("{w:?}")));
        }
    }
    Ok(lex_classify(u, v))
}

pub fn strict_less(u: &Word, v: &Word) -> bool {
    lex_classify(u, v) == OrderClass::StrictLess
}

pub fn prefix_less(u: &Word, v: &Word) -> bool {
    lex_classify(u, v) == OrderClass::PrefixLess
}

/// Words of each nonterminal's language up to a length bound, grouped by length.
#[derive(Debug, Clone)]
pub struct BoundedLanguages {
    maxlen: usize,
    by_len: Vec<Vec<Vec<Word>>>,
    truncated: Vec<bool>,
}

impl BoundedLanguages {
    pub fn maxlen(&self) -> usize {
        self.maxlen
    }

    /// All enumerated words of `nt`, sorted by `<_ℓ`.
    pub fn words(&self, nt: usize) -> Vec<Word> {
        let mut all: Vec<Word> = self.by_len[nt].iter().flatten().cloned().collect();
        all.sort();
        all
    }

    pub fn of_length(&self, nt: usize, len: usize) -> &[Word] {
        self.by_len[nt].get(len).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains(&self, nt: usize, w: &Word) -> bool {
        self.of_length(nt, w.len()).contains(w)
    }

    /// Whether the cap cut this nonterminal's enumeration short (directly or
    /// through a nonterminal it reaches).
    pub fn truncated(&self, nt: usize) -> bool {
        self.truncated[nt]
    }
}

/// Enumerates every language by exact length, shortest first. Non-unit
/// productions only combine strictly shorter pieces; unit productions are
/// closed to a fixed point within each length.
pub fn bounded_languages(g: &Grammar, maxlen: usize, cap: usize) -> BoundedLanguages {
    let n = g.nonterminals().len();
    let mut by_len: Vec<Vec<Vec<Word>>> = vec![vec![Vec::new(); maxlen + 1]; n];
    let mut seen: Vec<HashSet<Word>> = vec![HashSet::new(); n];
    let mut direct = vec![false; n];
    let (units, others): (Vec<_>, Vec<_>) =
        g.productions().iter().partition(|p| p.rhs.len() == 1 && matches!(p.rhs[0], Symbol::N(_)));
    for len in 1..=maxlen {
        for p in &others {
            if direct[p.lhs] {
                continue;
            }
            let mut out = Vec::new();
            let complete = combine(&by_len, &p.rhs, len, &mut Word::empty(), &mut out, cap);
            for w in out {
                if seen[p.lhs].len() >= cap {
                    direct[p.lhs] = true;
                    break;
                }
                if seen[p.lhs].insert(w.clone()) {
                    by_len[p.lhs][len].push(w);
                }
            }
            if !complete {
                direct[p.lhs] = true;
            }
        }
        loop {
            let mut changed = false;
            for p in &units {
                let Symbol::N(y) = p.rhs[0] else { unreachable!() };
                let incoming = by_len[y][len].clone();
                for w in incoming {
                    if seen[p.lhs].contains(&w) {
                        continue;
                    }
                    if seen[p.lhs].len() >= cap {
                        direct[p.lhs] = true;
                        break;
                    }
                    seen[p.lhs].insert(w.clone());
                    by_len[p.lhs][len].push(w);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    let classes = occurrence_classes(g);
    let truncated = (0..n).map(|x| (0..n).any(|y| direct[y] && classes.precedes(y, x))).collect();
    BoundedLanguages { maxlen, by_len, truncated }
}

/// Pushes every word of exactly `len` letters derivable from `rhs` (using the
/// already computed shorter levels). Returns false if `budget` ran out.
fn combine(
    by_len: &[Vec<Vec<Word>>],
    rhs: &[Symbol],
    len: usize,
    prefix: &mut Word,
    out: &mut Vec<Word>,
    budget: usize,
) -> bool {
    let Some((first, rest)) = rhs.split_first() else {
        if len == 0 {
            if out.len() >= budget {
                return false;
            }
            out.push(prefix.clone());
        }
        return true;
    };
    if len < rhs.len() {
        return true;
    }
    match *first {
        Symbol::T(l) => {
            let mark = prefix.len();
            prefix.push(l);
            let ok = combine(by_len, rest, len - 1, prefix, out, budget);
            prefix.truncate(mark);
            ok
        }
        Symbol::N(y) => {
            let max_here = len - rest.len();
            for k in 1..=max_here.min(by_len[y].len() - 1) {
                for w in &by_len[y][k] {
                    let mark = prefix.len();
                    prefix.extend(w);
                    let ok = combine(by_len, rest, len - k, prefix, out, budget);
                    prefix.truncate(mark);
                    if !ok {
                        return false;
                    }
                }
            }
            true
        }
    }
}

/// A bounded, `<_ℓ`-sorted slice of a language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub words: Vec<Word>,
    pub truncated: bool,
}

/// All words of `L(g)` of length at most `maxlen`, sorted by `<_ℓ`.
pub fn enumerate_words(g: &Grammar, maxlen: usize, cap: usize) -> Enumeration {
    if g.is_epsilon() {
        return Enumeration { words: vec![Word::empty()], truncated: false };
    }
    let langs = bounded_languages(g, maxlen, cap);
    Enumeration { words: langs.words(g.start()), truncated: langs.truncated(g.start()) }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankReport {
    Pass { count: usize, truncated: bool },
    /// `u <_ℓ v` but `rank(u) ≥ rank(v)`.
    NotIncreasing { u: Word, v: Word, rank_u: CnfOrdinal, rank_v: CnfOrdinal },
    TooLarge { word: Word, rank: CnfOrdinal },
    NotMember { word: Word, error: SynthesisError },
}

impl RankReport {
    pub fn passed(&self) -> bool {
        matches!(self, RankReport::Pass { .. })
    }
}

/// Ranks every enumerated word and checks strict monotonicity along `<_ℓ`
/// together with `rank < order type`.
pub fn verify_monotone_rank(sg: &SynthesizedGrammar, maxlen: usize) -> RankReport {
    let en = enumerate_words(sg.grammar(), maxlen, DEFAULT_CAP);
    let mut prev: Option<(Word, CnfOrdinal)> = None;
    for w in &en.words {
        let r = match sg.rank(w) {
            Ok(r) => r,
            Err(error) => return RankReport::NotMember { word: w.clone(), error },
        };
        if r >= *sg.order_type() {
            return RankReport::TooLarge { word: w.clone(), rank: r };
        }
        if let Some((pw, pr)) = prev {
            if pr >= r {
                return RankReport::NotIncreasing { u: pw, v: w.clone(), rank_u: pr, rank_v: r };
            }
        }
        prev = Some((w.clone(), r));
    }
    RankReport::Pass { count: en.words.len(), truncated: en.truncated }
}

/// Default chain predicate: `v` arises from `u` by inserting one nonempty block.
pub fn inserted_block(u: &Word, v: &Word) -> bool {
    let (a, b) = (u.letters(), v.letters());
    if b.len() <= a.len() {
        return false;
    }
    let lcp = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    let lcs = a.iter().rev().zip(b.iter().rev()).take_while(|(x, y)| x == y).count();
    lcp + lcs >= a.len()
}

/// Longest chain `w₁, w₂, …` of words with strictly increasing length,
/// `w_{i+1} <_s w_i`, and `related(w_i, w_{i+1})`. Returns `None` when no
/// chain of length two exists. Heuristic evidence only.
pub fn descending_chain_search(words: &[Word], related: impl Fn(&Word, &Word) -> bool) -> Option<Vec<Word>> {
    let mut order: Vec<usize> = (0..words.len()).collect();
    order.sort_by_key(|&i| words[i].len());
    // best[i]: longest chain starting at words[order[i]].
    let mut best: Vec<(usize, Option<usize>)> = vec![(1, None); order.len()];
    for i in (0..order.len()).rev() {
        let u = &words[order[i]];
        for j in i + 1..order.len() {
            let v = &words[order[j]];
            if v.len() > u.len() && strict_less(v, u) && related(u, v) && best[j].0 + 1 > best[i].0 {
                best[i] = (best[j].0 + 1, Some(j));
            }
        }
    }
    let (start, _) = best.iter().enumerate().max_by_key(|(i, b)| (b.0, std::cmp::Reverse(*i)))?;
    if best[start].0 < 2 {
        return None;
    }
    let mut chain = vec![words[order[start]].clone()];
    let mut cur = start;
    while let (_, Some(next)) = best[cur] {
        chain.push(words[order[next]].clone());
        cur = next;
    }
    Some(chain)
}
