//! Context-free grammars over a linearly ordered terminal alphabet.
//!
//! Grammars are stored with interned nonterminals; productions never have an
//! empty right-hand side. The one language containing the empty word that we
//! can represent is `{ε}` itself, flagged on the grammar (see
//! [`Grammar::epsilon_language`]).
//!
//! The text format is line oriented:
//!
//! ```text
//! # comment
//! terminals: 0 1
//! start: S
//! S -> 0 | 1 S
//! ```
//!
//! Tokens are whitespace separated; a parenthesized group such as `(F2,1)` is a
//! single token.

mod analysis;
mod checks;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

pub use analysis::{
    analyze, height, height_bound, is_recursive, normalize, occurrence_classes, primitive_root, pump_word,
    shortest_witness, u0, word_height, Height, NonterminalReport, OccurrenceClasses,
};
pub use checks::{
    check_prefix, check_wellorder_probes, collect_pump_words, strata, stratum, Strata, Violation,
    ViolationReport,
};

/// A terminal letter: its index in the alphabet order.
pub type Letter = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown terminal '{token}'")]
    UnknownTerminal { line: usize, token: String },
    #[error("line {line}: empty alternative for '{lhs}' (epsilon productions are not allowed)")]
    EmptyProduction { line: usize, lhs: String },
    #[error("unknown nonterminal '{0}'")]
    UnknownNonterminal(String),
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
    #[error("'{0}' is not a word over the alphabet")]
    BadWord(String),
    #[error("nonterminal '{0}' is not recursive")]
    NotRecursive(String),
    #[error("every cycle through '{0}' has an empty prefix, so the grammar is not a prefix grammar")]
    EmptyPump(String),
    #[error("primitive root of the empty word")]
    EmptyWord,
    #[error("nonterminal '{0}' generates no word")]
    EmptyLanguage(String),
    #[error("strata need a binary alphabet")]
    NotBinary,
    #[error("L({0}) has fewer than two words; strata are degenerate")]
    Degenerate(String),
}

/// The terminal letters in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalAlphabet {
    letters: Vec<String>,
    index: HashMap<String, Letter>,
}

impl TerminalAlphabet {
    pub fn new<S: Into<String>>(letters: impl IntoIterator<Item = S>) -> Result<Self, GrammarError> {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(GrammarError::Alphabet("no letters".into()));
        }
        let mut index = HashMap::new();
        for (i, l) in letters.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) || l.contains(['|', '#']) {
                return Err(GrammarError::Alphabet(format!("bad letter '{l}'")));
            }
            if index.insert(l.clone(), i as Letter).is_some() {
                return Err(GrammarError::Alphabet(format!("duplicate letter '{l}'")));
            }
        }
        Ok(Self { letters, index })
    }

    /// The alphabet `0 < 1`.
    pub fn binary() -> Self {
        Self::new(["0", "1"]).expect("valid alphabet")
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.index.get(name).copied()
    }

    pub fn name(&self, letter: Letter) -> &str {
        &self.letters[letter as usize]
    }

    fn single_chars(&self) -> bool {
        self.letters.iter().all(|l| l.chars().count() == 1)
    }

    /// Parses a word. With single-character letters the word may be written
    /// without separators (`"1010"`); otherwise letters are separated by
    /// whitespace. `""` and `"ε"` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, GrammarError> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        let bad = || GrammarError::BadWord(text.to_string());
        let letters: Option<Vec<Letter>> = if self.single_chars() {
            text.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| self.letter(c.encode_utf8(&mut [0; 4])))
                .collect()
        } else {
            tokenize(text).iter().map(|t| self.letter(t)).collect()
        };
        letters.map(Word::from).ok_or_else(bad)
    }

    pub fn render(&self, word: &Word) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        let sep = if self.single_chars() { "" } else { " " };
        word.letters().iter().map(|&l| self.name(l)).collect::<Vec<_>>().join(sep)
    }

    /// Checks that every letter of `word` belongs to this alphabet.
    pub fn contains_word(&self, word: &Word) -> bool {
        word.letters().iter().all(|&l| (l as usize) < self.letters.len())
    }
}

/// A finite word over a terminal alphabet, ordered by `<_ℓ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn extend(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn truncate(&mut self, len: usize) {
        self.0.truncate(len);
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn repeat(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    /// Convenience for binary words written as `"0110"`.
    pub fn bits(text: &str) -> Word {
        Word(
            text.chars()
                .map(|c| match c {
                    '0' => 0,
                    '1' => 1,
                    other => panic!("not a bit: {other:?}"),
                })
                .collect(),
        )
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        crate::lexorder::lex_classify(self, other).ordering()
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A right-hand-side symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    T(Letter),
    N(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Production {
    pub lhs: usize,
    pub rhs: Vec<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    alphabet: TerminalAlphabet,
    nonterminals: Vec<String>,
    start: usize,
    productions: Vec<Production>,
    epsilon: bool,
}

impl Grammar {
    /// A grammar with start symbol `start` and no productions.
    pub fn new(alphabet: TerminalAlphabet, start: &str) -> Self {
        Self {
            alphabet,
            nonterminals: vec![start.to_string()],
            start: 0,
            productions: Vec::new(),
            epsilon: false,
        }
    }

    /// The grammar whose language is exactly `{ε}`.
    pub fn epsilon_language(alphabet: TerminalAlphabet, start: &str) -> Self {
        Self { epsilon: true, ..Self::new(alphabet, start) }
    }

    pub fn alphabet(&self) -> &TerminalAlphabet {
        &self.alphabet
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn name(&self, nt: usize) -> &str {
        &self.nonterminals[nt]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.nonterminals.iter().position(|n| n == name)
    }

    pub(crate) fn lookup(&self, name: &str) -> Result<usize, GrammarError> {
        self.index_of(name).ok_or_else(|| GrammarError::UnknownNonterminal(name.to_string()))
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn start_name(&self) -> &str {
        &self.nonterminals[self.start]
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn productions_of(&self, nt: usize) -> impl Iterator<Item = &Production> {
        self.productions.iter().filter(move |p| p.lhs == nt)
    }

    /// True if the language is `{ε}`.
    pub fn is_epsilon(&self) -> bool {
        self.epsilon
    }

    /// The canonical empty grammar: a start symbol and nothing else.
    pub fn is_canonical_empty(&self) -> bool {
        !self.epsilon && self.productions.is_empty() && self.nonterminals.len() == 1
    }

    /// Interns `name`, returning its index.
    pub fn nonterminal(&mut self, name: &str) -> usize {
        match self.index_of(name) {
            Some(i) => i,
            None => {
                self.nonterminals.push(name.to_string());
                self.nonterminals.len() - 1
            }
        }
    }

    /// Adds `lhs -> rhs`, ignoring duplicates. Empty right-hand sides are rejected.
    pub fn add_production(&mut self, lhs: usize, rhs: Vec<Symbol>) -> Result<(), GrammarError> {
        if rhs.is_empty() {
            return Err(GrammarError::EmptyProduction { line: 0, lhs: self.name(lhs).to_string() });
        }
        let p = Production { lhs, rhs };
        if !self.productions.contains(&p) {
            self.productions.push(p);
        }
        Ok(())
    }

    /// Removes one production; returns whether it was present.
    pub fn remove_production(&mut self, lhs: usize, rhs: &[Symbol]) -> bool {
        let before = self.productions.len();
        self.productions.retain(|p| !(p.lhs == lhs && p.rhs == rhs));
        before != self.productions.len()
    }

    /// Parses one alternative written in the file syntax, e.g. `"1 O1"`.
    pub fn parse_rhs(&mut self, text: &str) -> Result<Vec<Symbol>, GrammarError> {
        tokenize(text).iter().map(|t| self.resolve_token(t, 0)).collect()
    }

    fn resolve_token(&mut self, token: &str, line: usize) -> Result<Symbol, GrammarError> {
        if let Some(l) = self.alphabet.letter(token) {
            return Ok(Symbol::T(l));
        }
        let first = token.chars().next().unwrap_or(' ');
        if first.is_alphabetic() || first == '_' || first == '(' {
            Ok(Symbol::N(self.nonterminal(token)))
        } else {
            Err(GrammarError::UnknownTerminal { line, token: token.to_string() })
        }
    }

    pub fn render_rhs(&self, rhs: &[Symbol]) -> String {
        rhs.iter()
            .map(|s| match *s {
                Symbol::T(l) => self.alphabet.name(l),
                Symbol::N(n) => self.name(n),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn token_key(&self, s: &Symbol) -> (u8, Letter, &str) {
        match *s {
            Symbol::T(l) => (0, l, ""),
            Symbol::N(n) => (1, 0, self.name(n)),
        }
    }

    fn rhs_cmp(&self, a: &[Symbol], b: &[Symbol]) -> std::cmp::Ordering {
        let ka = a.iter().map(|s| self.token_key(s));
        let kb = b.iter().map(|s| self.token_key(s));
        ka.cmp(kb)
    }

    /// Nonterminals with productions, grouped in first-use order: breadth first
    /// from the start symbol along sorted alternatives, then the rest in
    /// declaration order. Alternatives are sorted by `<_ℓ` on token sequences,
    /// terminals before nonterminals.
    pub fn canonical_groups(&self) -> Vec<(usize, Vec<&[Symbol]>)> {
        let mut alts: Vec<Vec<&[Symbol]>> = vec![Vec::new(); self.nonterminals.len()];
        for p in &self.productions {
            alts[p.lhs].push(&p.rhs);
        }
        for a in &mut alts {
            a.sort_by(|x, y| self.rhs_cmp(x, y));
        }
        let mut order = Vec::new();
        let mut seen = vec![false; self.nonterminals.len()];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for rhs in &alts[x] {
                for s in rhs.iter() {
                    if let Symbol::N(y) = *s {
                        if !seen[y] {
                            seen[y] = true;
                            queue.push_back(y);
                        }
                    }
                }
            }
        }
        order.extend((0..self.nonterminals.len()).filter(|&x| !seen[x]));
        order
            .into_iter()
            .filter_map(|x| {
                let a = std::mem::take(&mut alts[x]);
                (!a.is_empty()).then_some((x, a))
            })
            .collect()
    }

    /// The nonterminals appearing in the grammar's productions, plus the start.
    pub fn used_nonterminals(&self) -> BTreeSet<usize> {
        let mut used: BTreeSet<usize> = [self.start].into();
        for p in &self.productions {
            used.insert(p.lhs);
            used.extend(p.rhs.iter().filter_map(|s| match *s {
                Symbol::N(n) => Some(n),
                Symbol::T(_) => None,
            }));
        }
        used
    }

    /// Keeps only the productions satisfying `keep` and drops nonterminals
    /// that no longer occur. The start symbol is always kept.
    pub(crate) fn retain(&self, keep: impl Fn(&Production) -> bool) -> Grammar {
        let productions: Vec<Production> = self.productions.iter().filter(|p| keep(p)).cloned().collect();
        let mut g = Grammar::new(self.alphabet.clone(), self.start_name());
        g.epsilon = self.epsilon;
        let tmp = Grammar { productions, ..self.clone() };
        for nt in tmp.used_nonterminals() {
            g.nonterminal(self.name(nt));
        }
        let remap: Vec<Option<usize>> = (0..self.nonterminals.len()).map(|i| g.index_of(self.name(i))).collect();
        for p in tmp.productions {
            let rhs = p
                .rhs
                .iter()
                .map(|s| match *s {
                    Symbol::N(n) => Symbol::N(remap[n].expect("used")),
                    t => t,
                })
                .collect();
            g.productions.push(Production { lhs: remap[p.lhs].expect("used"), rhs });
        }
        g
    }
}

pub fn parse_grammar(text: &str) -> Result<Grammar, GrammarError> {
    let mut alphabet = None;
    let mut start: Option<String> = None;
    let mut epsilon = false;
    let mut grammar: Option<Grammar> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: &str| GrammarError::Syntax { line: line_no, message: message.to_string() };
        if let Some(rest) = line.strip_prefix("terminals:") {
            alphabet = Some(TerminalAlphabet::new(tokenize(rest)).map_err(|e| syntax(&e.to_string()))?);
            continue;
        }
        if let Some(rest) = line.strip_prefix("start:") {
            let toks = tokenize(rest);
            if toks.len() != 1 {
                return Err(syntax("expected exactly one start symbol"));
            }
            start = Some(toks[0].clone());
            continue;
        }
        if let Some(rest) = line.strip_prefix("language:") {
            if rest.trim() != "epsilon" {
                return Err(syntax("unknown language marker"));
            }
            epsilon = true;
            continue;
        }
        let g = match &mut grammar {
            Some(g) => g,
            None => {
                let (Some(a), Some(s)) = (&alphabet, &start) else {
                    return Err(syntax("'terminals:' and 'start:' must precede productions"));
                };
                if a.letter(s).is_some() {
                    return Err(syntax("start symbol is a terminal"));
                }
                grammar.insert(Grammar::new(a.clone(), s))
            }
        };
        let Some((lhs, rhs)) = line.split_once("->") else {
            return Err(syntax("expected 'LHS -> alternatives'"));
        };
        let lhs_toks = tokenize(lhs);
        if lhs_toks.len() != 1 {
            return Err(syntax("expected a single nonterminal on the left"));
        }
        let lhs_name = &lhs_toks[0];
        let lhs = match g.resolve_token(lhs_name, line_no)? {
            Symbol::N(n) => n,
            Symbol::T(_) => return Err(syntax("terminal on the left of a production")),
        };
        for alt in rhs.split('|') {
            let toks = tokenize(alt);
            if toks.is_empty() {
                return Err(GrammarError::EmptyProduction { line: line_no, lhs: lhs_name.clone() });
            }
            let syms = toks.iter().map(|t| g.resolve_token(t, line_no)).collect::<Result<Vec<_>, _>>()?;
            g.add_production(lhs, syms)?;
        }
    }
    let grammar = match grammar {
        Some(g) => g,
        None => match (alphabet, start) {
            (Some(a), Some(s)) => Grammar::new(a, &s),
            _ => {
                return Err(GrammarError::Syntax { line: 0, message: "missing 'terminals:' or 'start:' line".into() })
            }
        },
    };
    if epsilon && !grammar.productions.is_empty() {
        return Err(GrammarError::Syntax {
            line: 0,
            message: "'language: epsilon' grammars have no productions".into(),
        });
    }
    Ok(Grammar { epsilon, ..grammar })
}

/// Splits on whitespace, keeping `( … )` groups together with inner blanks removed.
pub(crate) fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut tok = String::new();
        if c == '(' {
            let mut depth = 0;
            for c in chars.by_ref() {
                if c.is_whitespace() {
                    continue;
                }
                tok.push(c);
                match c {
                    '(' => depth += 1,
                    ')' => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
            }
        } else {
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '(' {
                    break;
                }
                tok.push(c);
                chars.next();
            }
        }
        out.push(tok);
    }
    out
}

impl fmt::Display for Grammar {
    /// Canonical serialization; equal grammars print identically.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "terminals: {}", self.alphabet.letters().join(" "))?;
        writeln!(f, "start: {}", self.start_name())?;
        if self.epsilon {
            writeln!(f, "language: epsilon")?;
        }
        for (lhs, alts) in self.canonical_groups() {
            let alts: Vec<String> = alts.iter().map(|r| self.render_rhs(r)).collect();
            writeln!(f, "{} -> {}", self.name(lhs), alts.join(" | "))?;
        }
        Ok(())
    }
}
