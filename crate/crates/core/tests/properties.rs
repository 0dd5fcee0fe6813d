use std::collections::BTreeSet;

use proptest::prelude::*;

use ordgram::grammar::{check_prefix, normalize, parse_grammar, primitive_root, Grammar};
use ordgram::lexorder::{bounded_languages, enumerate_words, lex_classify, verify_monotone_rank, OrderClass};
use ordgram::synthesis::from_cnf;
use ordgram::translate::{bounded_frontier, build_frontier_grammar, build_labeled_grammar, verify_translation};
use ordgram::tree::{Equation, Label, RankedAlphabet, Tree};
use ordgram::{CnfOrdinal, TreeSystem, Word};

/// Ordinals below `w^(w^3)` with small coefficients, built from text so that
/// normalization is exercised too.
fn ordinal(max_terms: usize) -> impl Strategy<Value = CnfOrdinal> {
    (prop::collection::vec((0..3u32, 0..3u32, 0..3u32, 1..4u32), 0..max_terms), 0..4u32).prop_map(|(terms, n)| {
        let mut text: Vec<String> = terms.iter().map(|(a, b, c, k)| format!("w^(w^2*{a} + w*{b} + {c})*{k}")).collect();
        text.push(n.to_string());
        text.join(" + ").parse().unwrap()
    })
}

fn word(maxlen: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..2u32, 0..maxlen).prop_map(Word::from)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ordinal_text_round_trips(a in ordinal(4)) {
        prop_assert_eq!(a.to_string().parse::<CnfOrdinal>().unwrap(), a);
    }

    #[test]
    fn ordinal_order_is_total(a in ordinal(3), b in ordinal(3), c in ordinal(3)) {
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
    }

    #[test]
    fn ordinal_arithmetic_laws(a in ordinal(3), b in ordinal(3), c in ordinal(3), n in 0..20u64) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        if !b.is_finite() {
            prop_assert_eq!(CnfOrdinal::from(n).add(&b), b.clone());
        }
        if a < b {
            prop_assert!(c.add(&a) < c.add(&b));
            prop_assert!(c.mul(&a) <= c.mul(&b));
        }
        prop_assert!(a <= a.add(&b) && b <= a.add(&b));
    }

    #[test]
    fn omega_power_exceeds_finite_powers(a in ordinal(2)) {
        prop_assume!(a >= CnfOrdinal::from(2));
        prop_assume!(a.leading_exponent().is_none_or(|e| e.as_natural().is_some()));
        let w = a.omega_power();
        let mut p = a.clone();
        for _ in 1..=6 {
            prop_assert!(p < w);
            p = p.mul(&a);
        }
    }

    #[test]
    fn lex_classification_is_antisymmetric(u in word(8), v in word(8)) {
        prop_assert_eq!(lex_classify(&u, &v), lex_classify(&v, &u).mirror());
        prop_assert_eq!(lex_classify(&u, &v) == OrderClass::Equal, u == v);
        let prefix = u.is_prefix_of(&v) && u != v;
        prop_assert_eq!(lex_classify(&u, &v) == OrderClass::PrefixLess, prefix);
    }

    #[test]
    fn lex_order_is_transitive(u in word(6), v in word(6), w in word(6)) {
        if u <= v && v <= w {
            prop_assert!(u <= w);
        }
    }

    #[test]
    fn primitive_roots(base in word(5).prop_filter("nonempty", |w| !w.is_empty()), k in 1..5usize) {
        let v = base.repeat(k);
        let r = primitive_root(&v).unwrap();
        prop_assert_eq!(v.len() % r.len(), 0);
        prop_assert_eq!(r.repeat(v.len() / r.len()), v);
        // no shorter word repeats to r
        for d in 1..r.len() {
            if r.len().is_multiple_of(d) {
                let head = Word::from(r.letters()[..d].to_vec());
                prop_assert_ne!(head.repeat(r.len() / d), r.clone());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn synthesized_grammars_are_consistent(a in ordinal(3)) {
        let sg = from_cnf(&a).unwrap();
        prop_assert_eq!(sg.order_type(), &a);
        let g = sg.grammar();
        let text = g.to_string();
        prop_assert_eq!(parse_grammar(&text).unwrap().to_string(), text.clone());
        prop_assert_eq!(normalize(g).to_string(), text);
        prop_assert!(check_prefix(g, 8).is_clean());
        prop_assert!(verify_monotone_rank(&sg, 8).passed());
    }
}

fn term(funs: Vec<usize>, params: usize, depth: u32) -> BoxedStrategy<Tree> {
    // alphabet: g:2 f:1 a:0
    let mut leaves: Vec<BoxedStrategy<Tree>> = vec![Just(Tree::leaf(Label::Sym(2))).boxed()];
    if params > 0 {
        leaves.push((0..params).prop_map(|j| Tree::leaf(Label::Var(j))).boxed());
    }
    let leaf = prop::strategy::Union::new(leaves).boxed();
    if depth == 0 {
        return leaf;
    }
    let sub = term(funs.clone(), params, depth - 1);
    let mut options = vec![
        leaf,
        (sub.clone(), sub.clone()).prop_map(|(l, r)| Tree::new(Label::Sym(0), vec![l, r])).boxed(),
        sub.clone().prop_map(|t| Tree::new(Label::Sym(1), vec![t])).boxed(),
    ];
    for (i, arity) in funs.into_iter().enumerate() {
        options.push(
            prop::collection::vec(sub.clone(), arity).prop_map(move |args| Tree::new(Label::Fun(i), args)).boxed(),
        );
    }
    prop::strategy::Union::new(options).boxed()
}

fn system() -> impl Strategy<Value = TreeSystem> {
    prop::collection::vec(0..3usize, 0..3)
        .prop_flat_map(|rest| {
            let mut arities = vec![0];
            arities.extend(rest);
            let bodies: Vec<BoxedStrategy<Tree>> = arities.iter().map(|&n| term(arities.clone(), n, 3)).collect();
            (Just(arities), bodies)
        })
        .prop_map(|(arities, bodies)| {
            let equations = arities
                .iter()
                .zip(bodies)
                .enumerate()
                .map(|(i, (&arity, body))| Equation { name: format!("F{i}"), arity, body })
                .collect();
            let alphabet = RankedAlphabet::new([("g", 2), ("f", 1), ("a", 0)]).unwrap();
            TreeSystem::new(alphabet, equations).unwrap()
        })
}

fn start_words(g: &Grammar, maxlen: usize) -> BTreeSet<String> {
    if g.is_epsilon() {
        return BTreeSet::from([String::new()]);
    }
    let langs = bounded_languages(g, maxlen, 20_000);
    langs.words(g.start()).iter().map(|w| g.alphabet().render(w)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Full iterates of random systems grow doubly exponentially, so these
    // work on depth-truncated ones.
    #[test]
    fn kleene_iterates_form_a_chain(sys in system(), d in 0..6usize) {
        let (a, b) = (sys.kleene_expand_truncated(d, Some(7)), sys.kleene_expand_truncated(d + 1, Some(7)));
        prop_assert!(a.iter().zip(&b).all(|(x, y)| x.approximates(y)));
    }

    #[test]
    fn truncation_commutes_with_expansion(sys in system(), d in 0..6usize, cut in 0..5usize) {
        let wide = sys.kleene_expand_truncated(d, Some(cut + 3));
        let narrow = sys.kleene_expand_truncated(d, Some(cut));
        for (x, y) in wide.iter().zip(&narrow) {
            prop_assert_eq!(&x.truncate(cut), y);
        }
    }

    #[test]
    fn settled_frontier_is_stable(sys in system(), d in 0..6usize) {
        let now = sys.kleene_expand_truncated(d, Some(7));
        let later = sys.kleene_expand_truncated(d + 1, Some(7));
        for (x, y) in now.iter().zip(&later) {
            let ys: BTreeSet<_> = y.frontier().into_iter().collect();
            prop_assert!(x.frontier().into_iter().all(|p| ys.contains(&p)));
        }
    }

    #[test]
    fn translated_grammars_are_prefix_grammars(sys in system()) {
        let gl = build_labeled_grammar(&sys).unwrap();
        let gp = build_frontier_grammar(&sys).unwrap();
        prop_assert!(check_prefix(&gl, 7).is_clean());
        prop_assert!(check_prefix(&gp, 7).is_clean());
        let binary = build_frontier_grammar(&sys.binarize()).unwrap();
        prop_assert!(check_prefix(&binary, 7).is_clean());
    }

    #[test]
    fn erasure_maps_labeled_words_onto_frontier_words(sys in system()) {
        let gl = build_labeled_grammar(&sys).unwrap();
        let gp = build_frontier_grammar(&sys).unwrap();
        let erased: BTreeSet<String> = start_words(&gl, 7)
            .into_iter()
            .map(|w| {
                w.split(' ')
                    .filter_map(|l| l.strip_suffix(')').and_then(|l| l.rsplit_once(',')).map(|p| p.1.to_string()))
                    .collect::<Vec<_>>()
                    .join("")
            })
            .collect();
        let frontier: BTreeSet<String> = start_words(&gp, 6).into_iter().map(|w| w.replace(' ', "")).collect();
        prop_assert_eq!(erased, frontier);
    }

    #[test]
    fn translation_matches_iterates(sys in system(), d in 1..6usize) {
        let r = verify_translation(&sys, d, 6).unwrap();
        prop_assert!(r.passed(), "{:?}", r.discrepancies);
    }

    #[test]
    fn iterate_frontier_is_generated(sys in system(), d in 1..7usize) {
        let b = sys.binarize();
        let gp = normalize(&build_frontier_grammar(&b).unwrap());
        let words: BTreeSet<Word> = if gp.is_epsilon() {
            BTreeSet::from([Word::empty()])
        } else {
            enumerate_words(&gp, 6, 20_000).words.into_iter().collect()
        };
        prop_assert!(bounded_frontier(&b, d, 6).iter().all(|w| words.contains(w)));
    }
}
