//! Structural analysis: reduction, occurrence classes, heights, pump words.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use super::{Grammar, GrammarError, Symbol, Word};
use crate::ordinal::CnfOrdinal;

/// Removes nonterminals that are inaccessible or generate no word.
/// An empty language yields the canonical empty grammar.
pub fn normalize(g: &Grammar) -> Grammar {
    if g.is_epsilon() {
        return Grammar::epsilon_language(g.alphabet().clone(), g.start_name());
    }
    let n = g.nonterminals().len();
    let mut productive = vec![false; n];
    loop {
        let mut changed = false;
        for p in g.productions() {
            if !productive[p.lhs]
                && p.rhs.iter().all(|s| match *s {
                    Symbol::N(y) => productive[y],
                    Symbol::T(_) => true,
                })
            {
                productive[p.lhs] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !productive[g.start()] {
        return Grammar::new(g.alphabet().clone(), g.start_name());
    }
    let is_productive = |p: &super::Production| {
        productive[p.lhs]
            && p.rhs.iter().all(|s| match *s {
                Symbol::N(y) => productive[y],
                Symbol::T(_) => true,
            })
    };
    let mut accessible = vec![false; n];
    accessible[g.start()] = true;
    let mut queue = VecDeque::from([g.start()]);
    while let Some(x) = queue.pop_front() {
        for p in g.productions_of(x).filter(|p| is_productive(p)) {
            for s in &p.rhs {
                if let Symbol::N(y) = *s {
                    if !accessible[y] {
                        accessible[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    g.retain(|p| accessible[p.lhs] && is_productive(p))
}

/// The occurrence preorder `⪯` and its equivalence classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceClasses {
    /// `reach[x][y]`: y occurs in some sentential form derived from x (reflexive).
    reach: Vec<Vec<bool>>,
    /// `step[x][y]`: y is reachable from x in at least one production step.
    step: Vec<Vec<bool>>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl OccurrenceClasses {
    /// `y ⪯ x`.
    pub fn precedes(&self, y: usize, x: usize) -> bool {
        self.reach[x][y]
    }

    /// `y ≈ x`.
    pub fn equivalent(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    /// Classes, numbered bottom-up: a class only reaches classes with smaller ids.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// `[a] < [b]` in the induced class order.
    pub fn class_below(&self, a: usize, b: usize) -> bool {
        a != b && self.reach[self.classes[b][0]][self.classes[a][0]]
    }

    pub fn recursive(&self, x: usize) -> bool {
        self.step[x][x]
    }

    /// Number of classes strictly below `[x]`.
    pub fn height(&self, x: usize) -> usize {
        let c = self.class_of[x];
        (0..self.classes.len()).filter(|&d| self.class_below(d, c)).count()
    }
}

pub fn occurrence_classes(g: &Grammar) -> OccurrenceClasses {
    let n = g.nonterminals().len();
    let mut succ = vec![Vec::new(); n];
    for p in g.productions() {
        for s in &p.rhs {
            if let Symbol::N(y) = *s {
                if !succ[p.lhs].contains(&y) {
                    succ[p.lhs].push(y);
                }
            }
        }
    }
    let mut step = vec![vec![false; n]; n];
    for x in 0..n {
        let mut queue: VecDeque<usize> = succ[x].iter().copied().collect();
        for &y in &succ[x] {
            step[x][y] = true;
        }
        while let Some(y) = queue.pop_front() {
            for &z in &succ[y] {
                if !step[x][z] {
                    step[x][z] = true;
                    queue.push_back(z);
                }
            }
        }
    }
    let mut reach = step.clone();
    for (x, row) in reach.iter_mut().enumerate() {
        row[x] = true;
    }
    // Components by mutual reachability; ordered so lower classes come first,
    // ties broken by the smallest member's table index.
    let mut class_of = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&y| reach[x][y] && reach[y][x]).collect();
        for &m in &members {
            class_of[m] = comps.len();
        }
        comps.push(members);
    }
    let below_count = |c: &Vec<usize>| (0..n).filter(|&y| reach[c[0]][y]).count();
    let mut order: Vec<usize> = (0..comps.len()).collect();
    order.sort_by_key(|&i| (below_count(&comps[i]), comps[i][0]));
    let classes: Vec<Vec<usize>> = order.iter().map(|&i| comps[i].clone()).collect();
    for (id, c) in classes.iter().enumerate() {
        for &m in c {
            class_of[m] = id;
        }
    }
    OccurrenceClasses { reach, step, class_of, classes }
}

/// The height of a nonterminal, or of a word with no nonterminals (`-1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Height {
    Terminal,
    Level(usize),
}

pub fn height(g: &Grammar, x: &str) -> Result<usize, GrammarError> {
    let x = g.lookup(x)?;
    Ok(occurrence_classes(g).height(x))
}

/// Height of a sentential form: the maximum height of its nonterminals.
pub fn word_height(classes: &OccurrenceClasses, rhs: &[Symbol]) -> Height {
    rhs.iter()
        .filter_map(|s| match *s {
            Symbol::N(y) => Some(Height::Level(classes.height(y))),
            Symbol::T(_) => None,
        })
        .max()
        .unwrap_or(Height::Terminal)
}

pub fn is_recursive(g: &Grammar, x: &str) -> Result<bool, GrammarError> {
    let x = g.lookup(x)?;
    Ok(occurrence_classes(g).recursive(x))
}

/// Shortest words, ties broken `<_ℓ`-least, for every nonterminal (`None` if unproductive).
pub(crate) fn shortest_witnesses(g: &Grammar) -> Vec<Option<Word>> {
    let n = g.nonterminals().len();
    let mut best: Vec<Option<Word>> = vec![None; n];
    loop {
        let mut changed = false;
        for p in g.productions() {
            let mut w = Word::empty();
            let mut ok = true;
            for s in &p.rhs {
                match *s {
                    Symbol::T(l) => w.push(l),
                    Symbol::N(y) => match &best[y] {
                        Some(v) => w.extend(v),
                        None => {
                            ok = false;
                            break;
                        }
                    },
                }
            }
            if !ok {
                continue;
            }
            let better = match &best[p.lhs] {
                None => true,
                Some(cur) => (w.len(), &w) < (cur.len(), cur),
            };
            if better {
                best[p.lhs] = Some(w);
                changed = true;
            }
        }
        if !changed {
            return best;
        }
    }
}

pub fn shortest_witness(g: &Grammar, x: &str) -> Result<Word, GrammarError> {
    let xi = g.lookup(x)?;
    shortest_witnesses(g).swap_remove(xi).ok_or_else(|| GrammarError::EmptyLanguage(x.to_string()))
}

/// Edges of the class graph of `[x]`: `(from, to, label)`.
pub(crate) fn class_edges(
    g: &Grammar,
    classes: &OccurrenceClasses,
    witnesses: &[Option<Word>],
    x: usize,
) -> Vec<(usize, usize, Word)> {
    let mut edges = Vec::new();
    for p in g.productions().iter().filter(|p| classes.equivalent(p.lhs, x)) {
        let mut label = Word::empty();
        for s in &p.rhs {
            match *s {
                Symbol::T(l) => label.push(l),
                Symbol::N(z) => {
                    if classes.equivalent(z, x) {
                        edges.push((p.lhs, z, label.clone()));
                    }
                    match &witnesses[z] {
                        Some(w) => label.extend(w),
                        None => break,
                    }
                }
            }
        }
    }
    edges
}

/// A nonempty `v` with `X ⇒* vXq`: the label of a shortest cycle through `X`
/// in its class graph, ties `<_ℓ`-least.
pub fn pump_word(g: &Grammar, x: &str) -> Result<Word, GrammarError> {
    let xi = g.lookup(x)?;
    let classes = occurrence_classes(g);
    if !classes.recursive(xi) {
        return Err(GrammarError::NotRecursive(x.to_string()));
    }
    let witnesses = shortest_witnesses(g);
    let edges = class_edges(g, &classes, &witnesses, xi);
    pump_from_edges(&edges, xi).ok_or_else(|| GrammarError::EmptyPump(x.to_string()))
}

fn pump_from_edges(edges: &[(usize, usize, Word)], x: usize) -> Option<Word> {
    let mut dist: HashMap<(usize, bool), (usize, Word)> = HashMap::new();
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0usize, Word::empty(), x, false, true)));
    while let Some(Reverse((len, word, node, nonempty, initial))) = heap.pop() {
        if !initial {
            if node == x && nonempty {
                return Some(word);
            }
            if dist.contains_key(&(node, nonempty)) {
                continue;
            }
            dist.insert((node, nonempty), (len, word.clone()));
        }
        for (from, to, label) in edges {
            if *from != node {
                continue;
            }
            let next = word.concat(label);
            let flag = nonempty || !label.is_empty();
            if !dist.contains_key(&(*to, flag)) {
                heap.push(Reverse((next.len(), next, *to, flag, false)));
            }
        }
    }
    None
}

/// The shortest `u` with `v = uⁿ`, via the border array.
pub fn primitive_root(v: &Word) -> Result<Word, GrammarError> {
    let s = v.letters();
    let n = s.len();
    if n == 0 {
        return Err(GrammarError::EmptyWord);
    }
    let mut fail = vec![0usize; n + 1];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && s[i] != s[k] {
            k = fail[k];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i + 1] = k;
    }
    let period = n - fail[n];
    let p = if n.is_multiple_of(period) { period } else { n };
    Ok(Word::from(s[..p].to_vec()))
}

pub fn u0(g: &Grammar, x: &str) -> Result<Word, GrammarError> {
    primitive_root(&pump_word(g, x)?)
}

/// `ω^(ω^h)` for the height `h` of `x`.
pub fn height_bound(g: &Grammar, x: &str) -> Result<CnfOrdinal, GrammarError> {
    Ok(CnfOrdinal::omega_tower(height(g, x)? as u64))
}

/// Per-nonterminal analysis record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonterminalReport {
    pub name: String,
    pub class_id: usize,
    pub height: usize,
    pub recursive: bool,
    pub pump_word: Option<Word>,
    pub u0: Option<Word>,
    /// Set when the nonterminal is recursive but no pump word exists.
    pub pump_error: Option<GrammarError>,
    pub bound: CnfOrdinal,
}

/// Reports for every nonterminal of `g` (expected normalized), in table order.
pub fn analyze(g: &Grammar) -> Vec<NonterminalReport> {
    let classes = occurrence_classes(g);
    let witnesses = shortest_witnesses(g);
    (0..g.nonterminals().len())
        .map(|x| {
            let recursive = classes.recursive(x);
            let (pump, err) = if recursive {
                let edges = class_edges(g, &classes, &witnesses, x);
                match pump_from_edges(&edges, x) {
                    Some(w) => (Some(w), None),
                    None => (None, Some(GrammarError::EmptyPump(g.name(x).to_string()))),
                }
            } else {
                (None, None)
            };
            let height = classes.height(x);
            NonterminalReport {
                name: g.name(x).to_string(),
                class_id: classes.class_of(x),
                height,
                recursive,
                u0: pump.as_ref().map(|p| primitive_root(p).expect("nonempty pump")),
                pump_word: pump,
                pump_error: err,
                bound: CnfOrdinal::omega_tower(height as u64),
            }
        })
        .collect()
}
