//! Ordinal grammars for every ordinal below ω^(ω^ω), built from sums, products
//! and ω-powers, together with the rank of each word.
//!
//! The constructions over the binary alphabet `0 < 1`:
//!
//! ```text
//! sum        S → 0 S₁ | 1 S₂        o = o₁ + o₂
//! product    S → S₂ S₁              o = o₁ · o₂
//! ω-power    S → 0 | 1 S S₁         o = o₁^ω
//! ```

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::grammar::{parse_grammar, Grammar, GrammarError, Symbol, TerminalAlphabet, Word};
use crate::ordinal::{CnfExponent, CnfOrdinal};

/// Largest coefficient realized by a flat finite grammar.
pub const MAX_FINITE: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("the ω-power needs a base of at least 2, got {0}")]
    BaseTooSmall(CnfOrdinal),
    #[error("coefficient {0} is too large to synthesize")]
    TooLarge(String),
    #[error("not a member of the language (decoding failed at position {position})")]
    NotAMember { position: usize },
    #[error("recipe: {0}")]
    RecipeSyntax(String),
    #[error("the grammar does not match its recipe")]
    RecipeMismatch,
    #[error("missing '# recipe:' line")]
    MissingRecipe,
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

/// How a synthesized grammar is assembled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recipe {
    Zero,
    One,
    /// `n ≥ 2`.
    Finite(u64),
    OmegaBase,
    Sum(Box<Recipe>, Box<Recipe>),
    Product(Box<Recipe>, Box<Recipe>),
    OmegaPower(Box<Recipe>),
}

impl Recipe {
    pub fn finite(n: u64) -> Recipe {
        match n {
            0 => Recipe::Zero,
            1 => Recipe::One,
            n => Recipe::Finite(n),
        }
    }

    /// Sum with zero operands dropped.
    pub fn sum(a: Recipe, b: Recipe) -> Recipe {
        match (a, b) {
            (Recipe::Zero, b) => b,
            (a, Recipe::Zero) => a,
            (a, b) => Recipe::Sum(Box::new(a), Box::new(b)),
        }
    }

    /// Product collapsing to zero when either operand is zero.
    pub fn product(a: Recipe, b: Recipe) -> Recipe {
        match (a, b) {
            (Recipe::Zero, _) | (_, Recipe::Zero) => Recipe::Zero,
            (a, b) => Recipe::Product(Box::new(a), Box::new(b)),
        }
    }

    pub fn omega_power(base: Recipe) -> Result<Recipe, SynthesisError> {
        let o = base.order_type();
        if o < CnfOrdinal::natural(2u32) {
            return Err(SynthesisError::BaseTooSmall(o));
        }
        Ok(Recipe::OmegaPower(Box::new(base)))
    }

    pub fn order_type(&self) -> CnfOrdinal {
        match self {
            Recipe::Zero => CnfOrdinal::zero(),
            Recipe::One => CnfOrdinal::one(),
            Recipe::Finite(n) => CnfOrdinal::natural(*n),
            Recipe::OmegaBase => CnfOrdinal::omega(),
            Recipe::Sum(a, b) => a.order_type().add(&b.order_type()),
            Recipe::Product(a, b) => a.order_type().mul(&b.order_type()),
            Recipe::OmegaPower(a) => a.order_type().omega_power(),
        }
    }

    /// Drops zero operands and resolves `0^ω = 0`, `1^ω = 1`.
    pub fn simplified(self) -> Recipe {
        match self {
            Recipe::Finite(n) => Recipe::finite(n),
            Recipe::Sum(a, b) => Recipe::sum(a.simplified(), b.simplified()),
            Recipe::Product(a, b) => Recipe::product(a.simplified(), b.simplified()),
            Recipe::OmegaPower(a) => match a.simplified() {
                r @ (Recipe::Zero | Recipe::One) => r,
                r => Recipe::OmegaPower(Box::new(r)),
            },
            r => r,
        }
    }

    fn tag(&self) -> &'static str {
        match self {
            Recipe::Zero => "Z",
            Recipe::One => "U",
            Recipe::Finite(_) => "F",
            Recipe::OmegaBase => "W",
            Recipe::Sum(..) => "A",
            Recipe::Product(..) => "P",
            Recipe::OmegaPower(_) => "E",
        }
    }

    /// Builds a recipe whose order type is exactly `a`.
    pub fn from_cnf(a: &CnfOrdinal) -> Result<Recipe, SynthesisError> {
        let mut out = Recipe::Zero;
        for (e, c) in a.terms().iter().rev() {
            let c = c.to_u64().filter(|&c| c <= MAX_FINITE).ok_or_else(|| SynthesisError::TooLarge(c.to_string()))?;
            let term = if e.is_zero() {
                Recipe::finite(c)
            } else {
                let p = power_of_omega(e)?;
                if c == 1 {
                    p
                } else {
                    Recipe::product(p, Recipe::finite(c))
                }
            };
            out = Recipe::sum(term, out);
        }
        Ok(out)
    }
}

/// `ω^e` for `e = Σ ω^k·m`, as a left-nested product of towers `ω^(ω^k)`.
fn power_of_omega(e: &CnfExponent) -> Result<Recipe, SynthesisError> {
    let mut out: Option<Recipe> = None;
    for (k, m) in e.terms() {
        let tower = omega_tower(k)?;
        let m = m.to_u64().filter(|&m| m <= MAX_FINITE).ok_or_else(|| SynthesisError::TooLarge(m.to_string()))?;
        for _ in 0..m {
            out = Some(match out {
                None => tower.clone(),
                Some(acc) => Recipe::product(acc, tower.clone()),
            });
        }
    }
    Ok(out.unwrap_or(Recipe::One))
}

fn omega_tower(k: &BigUint) -> Result<Recipe, SynthesisError> {
    let k = k.to_u64().filter(|&k| k <= MAX_FINITE).ok_or_else(|| SynthesisError::TooLarge(k.to_string()))?;
    let mut r = Recipe::OmegaBase;
    for _ in 0..k {
        r = Recipe::OmegaPower(Box::new(r));
    }
    Ok(r)
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Zero => write!(f, "zero"),
            Recipe::One => write!(f, "one"),
            Recipe::Finite(n) => write!(f, "(finite {n})"),
            Recipe::OmegaBase => write!(f, "omega"),
            Recipe::Sum(a, b) => write!(f, "(sum {a} {b})"),
            Recipe::Product(a, b) => write!(f, "(product {a} {b})"),
            Recipe::OmegaPower(a) => write!(f, "(pow {a})"),
        }
    }
}

impl FromStr for Recipe {
    type Err = SynthesisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let spaced = s.replace('(', " ( ").replace(')', " ) ");
        let tokens: Vec<&str> = spaced.split_whitespace().collect();
        let mut pos = 0;
        let r = parse_recipe(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(SynthesisError::RecipeSyntax(format!("trailing input at token {pos}")));
        }
        Ok(r)
    }
}

fn parse_recipe(tokens: &[&str], pos: &mut usize) -> Result<Recipe, SynthesisError> {
    let err = |m: &str| SynthesisError::RecipeSyntax(m.to_string());
    let tok = *tokens.get(*pos).ok_or_else(|| err("unexpected end"))?;
    *pos += 1;
    match tok {
        "zero" => return Ok(Recipe::Zero),
        "one" => return Ok(Recipe::One),
        "omega" => return Ok(Recipe::OmegaBase),
        "(" => {}
        other => return Err(err(&format!("unexpected '{other}'"))),
    }
    let head = *tokens.get(*pos).ok_or_else(|| err("unexpected end"))?;
    *pos += 1;
    let r = match head {
        "finite" => {
            let n: u64 = tokens
                .get(*pos)
                .and_then(|t| t.parse().ok())
                .filter(|&n| n >= 2)
                .ok_or_else(|| err("finite needs a natural ≥ 2"))?;
            *pos += 1;
            Recipe::Finite(n)
        }
        "sum" | "product" => {
            let a = parse_recipe(tokens, pos)?;
            let b = parse_recipe(tokens, pos)?;
            if head == "sum" {
                Recipe::Sum(Box::new(a), Box::new(b))
            } else {
                Recipe::Product(Box::new(a), Box::new(b))
            }
        }
        "pow" => Recipe::omega_power(parse_recipe(tokens, pos)?)?,
        other => return Err(err(&format!("unknown constructor '{other}'"))),
    };
    if tokens.get(*pos) != Some(&")") {
        return Err(err("expected ')'"));
    }
    *pos += 1;
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    recipe: Recipe,
    /// Start nonterminal; `None` only for `Zero`.
    start: Option<usize>,
    order: CnfOrdinal,
    children: Vec<usize>,
}

/// A grammar together with the recipe it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesizedGrammar {
    grammar: Grammar,
    recipe: Recipe,
    nodes: Vec<Node>,
    by_start: HashMap<usize, usize>,
}

impl SynthesizedGrammar {
    pub fn new(recipe: Recipe) -> SynthesizedGrammar {
        Self::assemble(recipe, false)
    }

    /// Like [`SynthesizedGrammar::new`], but every product production lists
    /// the left operand first. The recipe (and so the claimed order type and
    /// the rank) is unchanged, so ranks stop being monotone: a diagnostic
    /// control for [`crate::lexorder::verify_monotone_rank`].
    pub fn swap_product_operands(recipe: Recipe) -> SynthesizedGrammar {
        Self::assemble(recipe, true)
    }

    fn assemble(recipe: Recipe, swapped: bool) -> SynthesizedGrammar {
        let recipe = recipe.simplified();
        let mut grammar = Grammar::new(TerminalAlphabet::binary(), recipe.tag());
        let mut nodes = Vec::new();
        build(&recipe, String::new(), &mut grammar, &mut nodes, swapped);
        let by_start = nodes.iter().enumerate().filter_map(|(i, n)| n.start.map(|s| (s, i))).collect();
        SynthesizedGrammar { grammar, recipe, nodes, by_start }
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn recipe(&self) -> &Recipe {
        &self.recipe
    }

    pub fn order_type(&self) -> &CnfOrdinal {
        &self.nodes[0].order
    }

    /// The recipe node rooted at nonterminal `nt` and its order type.
    pub fn node_order_type(&self, nt: &str) -> Option<&CnfOrdinal> {
        let i = self.grammar.index_of(nt)?;
        self.by_start.get(&i).map(|&n| &self.nodes[n].order)
    }

    /// Grammar file text with the recipe in a comment line.
    pub fn to_file_string(&self) -> String {
        format!("# recipe: {}\n# order type: {}\n{}", self.recipe, self.order_type(), self.grammar)
    }

    /// Reads a file written by [`SynthesizedGrammar::to_file_string`]; the
    /// grammar must be exactly the one the recipe builds.
    pub fn from_file_string(text: &str) -> Result<SynthesizedGrammar, SynthesisError> {
        let recipe_line = text
            .lines()
            .find_map(|l| l.trim().strip_prefix("# recipe:"))
            .ok_or(SynthesisError::MissingRecipe)?;
        let recipe: Recipe = recipe_line.parse()?;
        let grammar = parse_grammar(text)?;
        let sg = SynthesizedGrammar::new(recipe);
        if sg.grammar.to_string() != grammar.to_string() {
            return Err(SynthesisError::RecipeMismatch);
        }
        Ok(sg)
    }

    /// The position of `w` in `(L, <_ℓ)`.
    pub fn rank(&self, w: &Word) -> Result<CnfOrdinal, SynthesisError> {
        let s = w.letters();
        let (r, end) = self.decode(0, s, 0)?;
        if end != s.len() {
            return Err(SynthesisError::NotAMember { position: end });
        }
        Ok(r)
    }

    /// For an ω-power root, splits `1ⁿ0 b₁…bₙ` into `n` and the blocks.
    pub fn omega_power_blocks(&self, w: &Word) -> Result<(usize, Vec<Word>), SynthesisError> {
        let root = &self.nodes[0];
        if !matches!(root.recipe, Recipe::OmegaPower(_)) {
            return Err(SynthesisError::RecipeSyntax("root is not an ω-power".into()));
        }
        let s = w.letters();
        let n = s.iter().take_while(|&&l| l == 1).count();
        if s.get(n) != Some(&0) {
            return Err(SynthesisError::NotAMember { position: n });
        }
        let mut pos = n + 1;
        let mut blocks = Vec::new();
        for _ in 0..n {
            let (_, end) = self.decode(root.children[0], s, pos)?;
            blocks.push(Word::from(s[pos..end].to_vec()));
            pos = end;
        }
        if pos != s.len() {
            return Err(SynthesisError::NotAMember { position: pos });
        }
        Ok((n, blocks))
    }

    fn child_for(&self, node: usize, sym: Symbol, pos: usize) -> Result<usize, SynthesisError> {
        match sym {
            Symbol::N(y) => self.by_start.get(&y).copied().filter(|c| self.nodes[node].children.contains(c) || *c == node),
            Symbol::T(_) => None,
        }
        .ok_or(SynthesisError::NotAMember { position: pos })
    }

    /// Decodes one word of node `i` starting at `pos`; returns its rank and end.
    fn decode(&self, i: usize, s: &[u32], pos: usize) -> Result<(CnfOrdinal, usize), SynthesisError> {
        let node = &self.nodes[i];
        let miss = |p: usize| SynthesisError::NotAMember { position: p };
        let ones = s[pos.min(s.len())..].iter().take_while(|&&l| l == 1).count();
        match &node.recipe {
            Recipe::Zero => Err(miss(pos)),
            Recipe::One | Recipe::Finite(_) | Recipe::OmegaBase => {
                let limit = match node.recipe {
                    Recipe::One => 1,
                    Recipe::Finite(n) => n as usize,
                    _ => usize::MAX,
                };
                if ones >= limit || s.get(pos + ones) != Some(&0) {
                    return Err(miss(pos + ones.min(limit)));
                }
                Ok((CnfOrdinal::natural(ones), pos + ones + 1))
            }
            Recipe::Sum(..) => {
                let letter = *s.get(pos).ok_or(miss(pos))?;
                let start = node.start.expect("sum has a start");
                let p = self
                    .grammar
                    .productions_of(start)
                    .find(|p| p.rhs[0] == Symbol::T(letter))
                    .ok_or(miss(pos))?;
                let c = self.child_for(i, p.rhs[1], pos)?;
                let (r, end) = self.decode(c, s, pos + 1)?;
                if c == node.children[0] {
                    Ok((r, end))
                } else {
                    Ok((self.nodes[node.children[0]].order.add(&r), end))
                }
            }
            Recipe::Product(..) => {
                let start = node.start.expect("product has a start");
                let p = self.grammar.productions_of(start).next().expect("one production");
                let mut ranks = HashMap::new();
                let mut at = pos;
                for &sym in &p.rhs {
                    let c = self.child_for(i, sym, at)?;
                    let (r, end) = self.decode(c, s, at)?;
                    ranks.insert(c, r);
                    at = end;
                }
                let (l, r) = (node.children[0], node.children[1]);
                let left_order = &self.nodes[l].order;
                Ok((left_order.mul(&ranks[&r]).add(&ranks[&l]), at))
            }
            Recipe::OmegaPower(_) => {
                if s.get(pos + ones) != Some(&0) {
                    return Err(miss(pos + ones));
                }
                let base = node.children[0];
                let alpha = &self.nodes[base].order;
                let mut powers = vec![CnfOrdinal::one()];
                for k in 1..ones.max(1) {
                    let next = powers[k - 1].mul(alpha);
                    powers.push(next);
                }
                let mut rank = CnfOrdinal::zero();
                for p in powers.iter().take(ones) {
                    rank = rank.add(p);
                }
                let mut at = pos + ones + 1;
                for j in 0..ones {
                    let (r, end) = self.decode(base, s, at)?;
                    rank = rank.add(&powers[ones - 1 - j].mul(&r));
                    at = end;
                }
                Ok((rank, at))
            }
        }
    }
}

/// Adds the productions of `recipe` under names tagged with `path`; returns the node index.
fn build(recipe: &Recipe, path: String, g: &mut Grammar, nodes: &mut Vec<Node>, swapped: bool) -> usize {
    let idx = nodes.len();
    nodes.push(Node { recipe: recipe.clone(), start: None, order: recipe.order_type(), children: Vec::new() });
    if matches!(recipe, Recipe::Zero) {
        return idx;
    }
    let x = g.nonterminal(&format!("{}{}", recipe.tag(), path));
    nodes[idx].start = Some(x);
    let t = |l: u32| Symbol::T(l);
    let ones = |i: u64| std::iter::repeat_n(t(1), i as usize);
    let add = |g: &mut Grammar, rhs: Vec<Symbol>| g.add_production(x, rhs).expect("nonempty rhs");
    match recipe {
        Recipe::Zero => unreachable!(),
        Recipe::One => add(g, vec![t(0)]),
        Recipe::Finite(n) => {
            for i in 0..*n {
                add(g, ones(i).chain([t(0)]).collect());
            }
        }
        Recipe::OmegaBase => {
            add(g, vec![t(0)]);
            add(g, vec![t(1), Symbol::N(x)]);
        }
        Recipe::Sum(a, b) | Recipe::Product(a, b) => {
            let ca = build(a, format!("{path}0"), g, nodes, swapped);
            let cb = build(b, format!("{path}1"), g, nodes, swapped);
            nodes[idx].children = vec![ca, cb];
            let (sa, sb) = (nodes[ca].start, nodes[cb].start);
            let (sa, sb) = (Symbol::N(sa.expect("nonzero")), Symbol::N(sb.expect("nonzero")));
            if matches!(recipe, Recipe::Sum(..)) {
                add(g, vec![t(0), sa]);
                add(g, vec![t(1), sb]);
            } else if swapped {
                add(g, vec![sa, sb]);
            } else {
                add(g, vec![sb, sa]);
            }
        }
        Recipe::OmegaPower(a) => {
            let ca = build(a, format!("{path}0"), g, nodes, swapped);
            nodes[idx].children = vec![ca];
            let sa = Symbol::N(nodes[ca].start.expect("nonzero"));
            add(g, vec![t(0)]);
            add(g, vec![t(1), Symbol::N(x), sa]);
        }
    }
    idx
}

pub fn grammar_zero() -> SynthesizedGrammar {
    SynthesizedGrammar::new(Recipe::Zero)
}

pub fn grammar_one() -> SynthesizedGrammar {
    SynthesizedGrammar::new(Recipe::One)
}

pub fn grammar_finite(n: u64) -> SynthesizedGrammar {
    SynthesizedGrammar::new(Recipe::finite(n))
}

/// The grammar `Ω₁ → 0 | 1 Ω₁` of type ω.
pub fn grammar_omega() -> SynthesizedGrammar {
    SynthesizedGrammar::new(Recipe::OmegaBase)
}

pub fn sum_grammar(g1: &SynthesizedGrammar, g2: &SynthesizedGrammar) -> SynthesizedGrammar {
    SynthesizedGrammar::new(Recipe::sum(g1.recipe.clone(), g2.recipe.clone()))
}

pub fn product_grammar(g1: &SynthesizedGrammar, g2: &SynthesizedGrammar) -> SynthesizedGrammar {
    SynthesizedGrammar::new(Recipe::product(g1.recipe.clone(), g2.recipe.clone()))
}

pub fn omega_power_grammar(g1: &SynthesizedGrammar) -> Result<SynthesizedGrammar, SynthesisError> {
    Ok(SynthesizedGrammar::new(Recipe::omega_power(g1.recipe.clone())?))
}

pub fn from_cnf(a: &CnfOrdinal) -> Result<SynthesizedGrammar, SynthesisError> {
    Ok(SynthesizedGrammar::new(Recipe::from_cnf(a)?))
}
