//! Trees over ranked alphabets, fixed-point systems and their approximations.
//!
//! A tree is a prefix-closed map from positions (child-index words) to labels.
//! [`PartialTree`] stores it as a node structure where every node has exactly
//! as many child slots as its label's arity; an empty slot is an undefined
//! position (`⊥`).

mod parse;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("'{name}' expects {expected} argument(s), found {found}")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("undeclared symbol '{0}'")]
    UndeclaredSymbol(String),
    #[error("variable '{name}' out of range (the equation has {params} parameter(s))")]
    VariableOutOfRange { name: String, params: usize },
    #[error("the principal equation '{name}' must have no parameters, found {arity}")]
    PrincipalArity { name: String, arity: usize },
    #[error("'{0}' is declared twice")]
    Duplicate(String),
}

/// Function symbols with their arities, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedAlphabet {
    symbols: Vec<(String, usize)>,
}

impl RankedAlphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self, TreeError> {
        let symbols: Vec<(String, usize)> = symbols.into_iter().map(|(s, a)| (s.into(), a)).collect();
        if symbols.is_empty() {
            return Err(TreeError::Syntax { line: 0, message: "empty ranked alphabet".into() });
        }
        for (i, (name, _)) in symbols.iter().enumerate() {
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
                return Err(TreeError::Syntax { line: 0, message: format!("bad symbol name '{name}'") });
            }
            if symbols[..i].iter().any(|(n, _)| n == name) {
                return Err(TreeError::Duplicate(name.clone()));
            }
        }
        Ok(Self { symbols })
    }

    /// `Δ = {g:2, a:0}`.
    pub fn delta() -> Self {
        Self::new([("g", 2), ("a", 0)]).expect("valid")
    }

    pub fn symbols(&self) -> &[(String, usize)] {
        &self.symbols
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|(n, _)| n == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.symbols[i].0
    }

    pub fn arity(&self, i: usize) -> usize {
        self.symbols[i].1
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.1).max().unwrap_or(0)
    }
}

/// A node label: a ranked symbol, an individual variable `x_j`, or a function
/// variable `F_i` (by equation index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Sym(usize),
    Var(usize),
    Fun(usize),
}

/// A position: the child indices along the path from the root.
pub type Position = Vec<usize>;

/// A nonempty tree node; `children.len()` is the label's arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    label: Label,
    children: Vec<Option<Tree>>,
}

impl Tree {
    pub fn new(label: Label, children: Vec<Tree>) -> Tree {
        Tree { label, children: children.into_iter().map(Some).collect() }
    }

    pub fn leaf(label: Label) -> Tree {
        Tree { label, children: Vec::new() }
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn children(&self) -> &[Option<Tree>] {
        &self.children
    }

    fn walk(&self, pos: &mut Position, f: &mut impl FnMut(&Position, &Tree) -> bool) {
        if !f(pos, self) {
            return;
        }
        for (j, c) in self.children.iter().enumerate() {
            if let Some(c) = c {
                pos.push(j);
                c.walk(pos, f);
                pos.pop();
            }
        }
    }
}

/// A finite, possibly empty tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PartialTree(Option<Tree>);

impl From<Tree> for PartialTree {
    fn from(t: Tree) -> Self {
        PartialTree(Some(t))
    }
}

impl PartialTree {
    pub fn empty() -> Self {
        PartialTree(None)
    }

    pub fn root(&self) -> Option<&Tree> {
        self.0.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    /// Visits nodes in preorder (children by index); `f` returns whether to descend.
    pub fn walk(&self, mut f: impl FnMut(&Position, &Tree) -> bool) {
        if let Some(t) = &self.0 {
            t.walk(&mut Vec::new(), &mut f);
        }
    }

    /// The position map, sorted by `<_ℓ` on positions.
    pub fn entries(&self) -> BTreeMap<Position, Label> {
        let mut out = BTreeMap::new();
        self.walk(|p, t| {
            out.insert(p.clone(), t.label);
            true
        });
        out
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(|_, _| {
            n += 1;
            true
        });
        n
    }

    pub fn label_at(&self, pos: &[usize]) -> Option<Label> {
        let mut t = self.0.as_ref()?;
        for &j in pos {
            t = t.children.get(j)?.as_ref()?;
        }
        Some(t.label)
    }

    /// `self ⊑ other`: every defined position of `self` carries the same label in `other`.
    pub fn approximates(&self, other: &PartialTree) -> bool {
        let mut ok = true;
        self.walk(|p, t| {
            ok &= other.label_at(p) == Some(t.label);
            ok
        });
        ok
    }

    /// Keeps positions of length at most `depth`.
    pub fn truncate(&self, depth: usize) -> PartialTree {
        fn go(t: &Tree, left: usize) -> Tree {
            Tree {
                label: t.label,
                children: t
                    .children
                    .iter()
                    .map(|c| if left == 0 { None } else { c.as_ref().map(|c| go(c, left - 1)) })
                    .collect(),
            }
        }
        PartialTree(self.0.as_ref().map(|t| go(t, depth)))
    }

    /// Replaces every subtree rooted at a function variable by `⊥`.
    pub fn erase_unresolved(&self) -> PartialTree {
        fn go(t: &Tree) -> Option<Tree> {
            if matches!(t.label, Label::Fun(_)) {
                return None;
            }
            Some(Tree { label: t.label, children: t.children.iter().map(|c| c.as_ref().and_then(go)).collect() })
        }
        PartialTree(self.0.as_ref().and_then(go))
    }

    /// Leaves labeled by constants or variables, sorted by `<_ℓ` on positions.
    /// Subtrees under function variables are not positions of the tree and are skipped.
    pub fn frontier(&self) -> Vec<(Position, Label)> {
        let mut out = Vec::new();
        self.walk(|p, t| match t.label {
            Label::Fun(_) => false,
            Label::Var(_) => {
                out.push((p.clone(), t.label));
                false
            }
            Label::Sym(_) => {
                if t.children.is_empty() {
                    out.push((p.clone(), t.label));
                }
                true
            }
        });
        out.sort();
        out
    }

    /// Positions of unexpanded function-variable nodes.
    pub fn unresolved(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.walk(|p, t| {
            if matches!(t.label, Label::Fun(_)) {
                out.push(p.clone());
                false
            } else {
                true
            }
        });
        out.sort();
        out
    }

    /// `û`: the letter `(σ, j)` for every edge on the way to `pos`, where `σ`
    /// labels the parent and `j` is the child index.
    pub fn hat(&self, pos: &[usize]) -> Option<Vec<(Label, usize)>> {
        let mut t = self.0.as_ref()?;
        let mut out = Vec::with_capacity(pos.len());
        for &j in pos {
            out.push((t.label, j));
            t = t.children.get(j)?.as_ref()?;
        }
        Some(out)
    }

    /// Words `û` paired with the constant at `u`, for every constant leaf `u`.
    pub fn labeled_frontier(&self) -> Vec<FrontierWord> {
        self.frontier()
            .into_iter()
            .filter(|(_, l)| matches!(l, Label::Sym(_)))
            .map(|(position, label)| {
                let hat = self.hat(&position).expect("frontier position");
                FrontierWord { position, label, hat }
            })
            .collect()
    }
}

/// A labeled frontier entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierWord {
    pub position: Position,
    pub label: Label,
    pub hat: Vec<(Label, usize)>,
}

/// Second-order substitution: every node whose label has an image is replaced
/// by that image, with `x_j` in the image standing for the substituted `j`-th
/// child. Labels without an image are kept. `arity` gives each label's arity;
/// nodes deeper than `limit` are dropped while building.
pub fn substitute(
    t: &PartialTree,
    images: &HashMap<Label, PartialTree>,
    arity: impl Fn(Label) -> usize,
    limit: Option<usize>,
) -> Result<PartialTree, TreeError> {
    for (l, img) in images {
        let n = arity(*l);
        let mut bad = None;
        img.walk(|_, node| {
            if let Label::Var(j) = node.label {
                if j >= n {
                    bad = Some(j);
                }
            }
            true
        });
        if let Some(j) = bad {
            return Err(TreeError::ArityMismatch { name: format!("{l:?}"), expected: n, found: j + 1 });
        }
    }
    let s = Subst { images, limit: limit.unwrap_or(usize::MAX) };
    Ok(PartialTree(t.0.as_ref().and_then(|t| s.apply(t, 0))))
}

struct Subst<'a> {
    images: &'a HashMap<Label, PartialTree>,
    limit: usize,
}

impl Subst<'_> {
    fn apply(&self, t: &Tree, depth: usize) -> Option<Tree> {
        if depth > self.limit {
            return None;
        }
        match self.images.get(&t.label) {
            Some(img) => img.0.as_ref().and_then(|i| self.instantiate(i, &t.children, depth)),
            None => Some(Tree {
                label: t.label,
                children: t.children.iter().map(|c| c.as_ref().and_then(|c| self.apply(c, depth + 1))).collect(),
            }),
        }
    }

    fn instantiate(&self, img: &Tree, args: &[Option<Tree>], depth: usize) -> Option<Tree> {
        if depth > self.limit {
            return None;
        }
        if let Label::Var(j) = img.label {
            return args.get(j).and_then(|a| a.as_ref()).and_then(|a| self.apply(a, depth));
        }
        Some(Tree {
            label: img.label,
            children: img
                .children
                .iter()
                .map(|c| c.as_ref().and_then(|c| self.instantiate(c, args, depth + 1)))
                .collect(),
        })
    }
}

/// `F_i(x_0, …, x_{n_i-1}) = t_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub name: String,
    pub arity: usize,
    pub body: Tree,
}

/// A finite system of fixed-point equations; the first equation is principal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSystem {
    alphabet: RankedAlphabet,
    equations: Vec<Equation>,
}

impl TreeSystem {
    pub fn new(alphabet: RankedAlphabet, equations: Vec<Equation>) -> Result<Self, TreeError> {
        let first = equations.first().ok_or(TreeError::Syntax { line: 0, message: "no equations".into() })?;
        if first.arity != 0 {
            return Err(TreeError::PrincipalArity { name: first.name.clone(), arity: first.arity });
        }
        let sys = TreeSystem { alphabet, equations };
        for e in &sys.equations {
            sys.validate(&e.body, e.arity)?;
        }
        Ok(sys)
    }

    fn validate(&self, t: &Tree, params: usize) -> Result<(), TreeError> {
        let expected = match t.label {
            Label::Sym(s) if s < self.alphabet.symbols.len() => self.alphabet.arity(s),
            Label::Sym(s) => return Err(TreeError::UndeclaredSymbol(format!("#{s}"))),
            Label::Var(j) if j < params => 0,
            Label::Var(j) => return Err(TreeError::VariableOutOfRange { name: format!("x{j}"), params }),
            Label::Fun(f) if f < self.equations.len() => self.equations[f].arity,
            Label::Fun(f) => return Err(TreeError::UndeclaredSymbol(format!("F#{f}"))),
        };
        if t.children.len() != expected || t.children.iter().any(Option::is_none) {
            return Err(TreeError::ArityMismatch {
                name: self.label_name(t.label),
                expected,
                found: t.children.iter().flatten().count(),
            });
        }
        t.children.iter().flatten().try_for_each(|c| self.validate(c, params))
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn arity(&self, l: Label) -> usize {
        match l {
            Label::Sym(s) => self.alphabet.arity(s),
            Label::Var(_) => 0,
            Label::Fun(f) => self.equations[f].arity,
        }
    }

    pub fn label_name(&self, l: Label) -> String {
        match l {
            Label::Sym(s) => self.alphabet.name(s).to_string(),
            Label::Var(j) => format!("x{j}"),
            Label::Fun(f) => self.equations[f].name.clone(),
        }
    }

    pub fn substitute(
        &self,
        t: &PartialTree,
        images: &HashMap<Label, PartialTree>,
        limit: Option<usize>,
    ) -> Result<PartialTree, TreeError> {
        substitute(t, images, |l| self.arity(l), limit)
    }

    /// Unfoldings that keep unexpanded calls: `U⁰_i = F_i(x_0, …)` and
    /// `U^{d+1}_i = t_i[F_k ↦ U^d_k]`, cut at positions longer than `limit`.
    pub fn unfold(&self, depth: usize, limit: Option<usize>) -> Vec<PartialTree> {
        let mut cur: Vec<PartialTree> = self
            .equations
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let call = Tree::new(Label::Fun(i), (0..e.arity).map(|j| Tree::leaf(Label::Var(j))).collect());
                PartialTree::from(call)
            })
            .collect();
        if let Some(l) = limit {
            cur = cur.iter().map(|t| t.truncate(l)).collect();
        }
        for _ in 0..depth {
            let images: HashMap<Label, PartialTree> =
                cur.iter().enumerate().map(|(i, t)| (Label::Fun(i), t.clone())).collect();
            cur = self
                .equations
                .iter()
                .map(|e| {
                    self.substitute(&PartialTree::from(e.body.clone()), &images, limit)
                        .expect("images respect arities")
                })
                .collect();
        }
        cur
    }

    /// The `depth`-th Kleene iterate, starting from all-empty trees.
    pub fn kleene_expand(&self, depth: usize) -> Vec<PartialTree> {
        self.kleene_expand_truncated(depth, None)
    }

    /// The Kleene iterate restricted to positions of length at most `limit`.
    pub fn kleene_expand_truncated(&self, depth: usize, limit: Option<usize>) -> Vec<PartialTree> {
        self.unfold(depth, limit).iter().map(PartialTree::erase_unresolved).collect()
    }

    /// Rewrites every body over `Δ = {g:2, a:0}`: constants become `a`, unary
    /// symbols are spliced out, and a `k`-ary symbol becomes a right comb of
    /// `k - 1` nodes `g`.
    pub fn binarize(&self) -> TreeSystem {
        let (g, a) = (Label::Sym(0), Label::Sym(1));
        fn go(t: &Tree, g: Label, a: Label) -> Tree {
            let kids: Vec<Tree> = t.children.iter().flatten().map(|c| go(c, g, a)).collect();
            match t.label {
                Label::Sym(_) => match kids.len() {
                    0 => Tree::leaf(a),
                    1 => kids.into_iter().next().expect("one child"),
                    _ => {
                        let mut it = kids.into_iter().rev();
                        let mut acc = it.next().expect("children");
                        for k in it {
                            acc = Tree::new(g, vec![k, acc]);
                        }
                        acc
                    }
                },
                l => Tree::new(l, kids),
            }
        }
        let equations = self
            .equations
            .iter()
            .map(|e| Equation { name: e.name.clone(), arity: e.arity, body: go(&e.body, g, a) })
            .collect();
        TreeSystem { alphabet: RankedAlphabet::delta(), equations }
    }

    /// Writes a tree as a nested term; `⊥` marks an undefined child.
    pub fn render(&self, t: &PartialTree) -> String {
        match t.root() {
            None => "⊥".to_string(),
            Some(t) => self.render_tree(t),
        }
    }

    pub fn render_tree(&self, t: &Tree) -> String {
        let name = self.label_name(t.label);
        if t.children.is_empty() {
            return name;
        }
        let args: Vec<String> = t
            .children
            .iter()
            .map(|c| c.as_ref().map_or("⊥".to_string(), |c| self.render_tree(c)))
            .collect();
        format!("{name}({})", args.join(", "))
    }
}

pub fn parse_system(text: &str) -> Result<TreeSystem, TreeError> {
    parse::parse_system(text)
}

impl FromStr for TreeSystem {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_system(s)
    }
}

impl fmt::Display for TreeSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ops: Vec<String> = self.alphabet.symbols.iter().map(|(n, a)| format!("{n}:{a}")).collect();
        writeln!(f, "ops: {}", ops.join(" "))?;
        for e in &self.equations {
            let params: Vec<String> = (0..e.arity).map(|j| format!("x{j}")).collect();
            if params.is_empty() {
                writeln!(f, "{} = {}", e.name, self.render_tree(&e.body))?;
            } else {
                writeln!(f, "{}({}) = {}", e.name, params.join(", "), self.render_tree(&e.body))?;
            }
        }
        Ok(())
    }
}
