//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line; the process fails if any criterion does.
//!
//! Expected values come from oracles written here (closed-form word sets,
//! hand-derived class structure, the algebraic laws themselves), never from
//! the functions under test.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use ordgram::cli;
use ordgram::grammar::{
    analyze, check_prefix, check_wellorder_probes, height, height_bound, normalize, parse_grammar, Violation,
};
use ordgram::lexorder::{enumerate_words, verify_monotone_rank, RankReport, DEFAULT_CAP};
use ordgram::ordinal::parse_ordinal;
use ordgram::synthesis::{from_cnf, Recipe};
use ordgram::translate::{bounded_frontier, build_frontier_grammar};
use ordgram::tree::parse_system;
use ordgram::{CnfOrdinal, SynthesizedGrammar, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("ordgram").chain(args.iter().copied()), &mut out, &mut err);
    let mut text = String::from_utf8(out).unwrap();
    text.push_str(&String::from_utf8(err).unwrap());
    (code, text)
}

fn ord(s: &str) -> CnfOrdinal {
    parse_ordinal(s).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ones(n: usize) -> String {
    "1".repeat(n)
}

fn bits(w: &Word) -> String {
    w.letters().iter().map(|l| char::from(b'0' + *l as u8)).collect()
}

fn omega_family() -> Outcome {
    let (code, text) = run_cli(&["enumerate", &data("omega1.grammar"), "--maxlen", "12"]);
    let expected: Vec<String> = (0..12).map(|n| ones(n) + "0").collect();
    let got: Vec<&str> = text.lines().collect();
    ensure(code == 0 && got == expected, || format!("enumeration gave {got:?}"))?;
    let sg = from_cnf(&ord("w")).map_err(|e| e.to_string())?;
    ensure(*sg.order_type() == CnfOrdinal::omega(), || format!("order type {}", sg.order_type()))?;
    for n in 0..=10u64 {
        let r = sg.rank(&Word::bits(&(ones(n as usize) + "0"))).map_err(|e| e.to_string())?;
        ensure(r == CnfOrdinal::from(n), || format!("rank(1^{n}0) = {r}"))?;
    }
    Ok("12 words, ranks 0..10".into())
}

fn omega_two() -> Outcome {
    let g = normalize(&parse_grammar(&std::fs::read_to_string(data("omega2.grammar")).unwrap()).unwrap());
    let got: BTreeSet<String> = enumerate_words(&g, 12, DEFAULT_CAP).words.iter().map(bits).collect();
    let mut oracle = BTreeSet::new();
    for k in 0..=10 {
        for n in 0..=10 - k {
            oracle.insert(format!("{}0{}0", ones(k), ones(n)));
        }
    }
    ensure(got == oracle, || format!("{} words, expected {}", got.len(), oracle.len()))?;
    let sg = from_cnf(&ord("w^2")).map_err(|e| e.to_string())?;
    let sorted = enumerate_words(sg.grammar(), 12, DEFAULT_CAP).words;
    ensure(sorted.iter().map(bits).collect::<BTreeSet<_>>() == oracle, || "synthesized language differs".into())?;
    let mut prev: Option<CnfOrdinal> = None;
    for w in &sorted {
        let s = bits(w);
        let k = s.find('0').unwrap();
        let n = s.len() - k - 2;
        let expected = CnfOrdinal::omega().mul(&CnfOrdinal::from(k as u64)).add(&CnfOrdinal::from(n as u64));
        let r = sg.rank(w).map_err(|e| e.to_string())?;
        ensure(r == expected, || format!("rank({s}) = {r}, expected {expected}"))?;
        ensure(prev.as_ref().is_none_or(|p| *p < r), || format!("rank order breaks at {s}"))?;
        prev = Some(r);
    }
    Ok(format!("{} words, ranks w*k+n in lexicographic order", oracle.len()))
}

/// Matches `1*0`.
fn is_block(s: &str) -> bool {
    s.strip_suffix('0').is_some_and(|p| p.bytes().all(|c| c == b'1'))
}

/// Matches `1^n 0 b_1 … b_n` with every block in `1*0`.
fn omega_power_shape(s: &str) -> bool {
    let n = s.find('0').unwrap_or(s.len());
    if n == s.len() {
        return false;
    }
    let mut rest = &s[n + 1..];
    for _ in 0..n {
        match rest.find('0') {
            Some(i) => rest = &rest[i + 1..],
            None => return false,
        }
    }
    rest.is_empty()
}

fn omega_power() -> Outcome {
    let sg = from_cnf(&ord("w^w")).map_err(|e| e.to_string())?;
    let words = enumerate_words(sg.grammar(), 12, DEFAULT_CAP).words;
    for w in &words {
        ensure(omega_power_shape(&bits(w)), || format!("{} has the wrong shape", bits(w)))?;
        let (n, blocks) = sg.omega_power_blocks(w).map_err(|e| e.to_string())?;
        ensure(n == blocks.len() && blocks.iter().all(|b| is_block(&bits(b))), || {
            format!("bad blocks for {}", bits(w))
        })?;
    }
    // every word of the shape up to length 12 is generated
    let all = (1..=12usize)
        .flat_map(|len| (0..1u32 << len).map(move |m| format!("{m:0len$b}")))
        .filter(|s| omega_power_shape(s))
        .count();
    ensure(all == words.len(), || format!("{} words, {all} of the right shape", words.len()))?;
    let report = verify_monotone_rank(&sg, 12);
    ensure(report.passed(), || format!("{report:?}"))?;
    Ok(format!("{} words decoded, ranks monotone", words.len()))
}

/// `P → 0 | 1 P O_{n+1}` over the chain `O_{k+1} → 0 O_k | 1 O_{k+1}`, `O_1 → 0 | 1 O_1`.
fn chain_grammar(n: usize) -> String {
    let mut s = format!("terminals: 0 1\nstart: P\nP -> 0 | 1 P O{}\nO1 -> 0 | 1 O1\n", n + 1);
    for k in 1..=n {
        s.push_str(&format!("O{} -> 0 O{k} | 1 O{}\n", k + 1, k + 1));
    }
    s
}

fn heights_and_bounds() -> Outcome {
    let (code, text) = run_cli(&["analyze", &data("omega_pow.grammar")]);
    ensure(code == 0 && text.contains("P: class 1 height 1 ") && text.contains("start P bound w^w\n"), || text.clone())?;
    let x = normalize(&parse_grammar(&std::fs::read_to_string(data("x1x2.grammar")).unwrap()).unwrap());
    let (h1, h2) = (height(&x, "X1").unwrap(), height(&x, "X2").unwrap());
    ensure((h1, h2) == (1, 0), || format!("heights X1 {h1}, X2 {h2}"))?;
    for n in 0..=3usize {
        let g = normalize(&parse_grammar(&chain_grammar(n)).unwrap());
        let b = height_bound(&g, "P").unwrap();
        let expected = ord(&format!("w^(w^{})", n + 1));
        ensure(b == expected, || format!("chain {n}: bound {b}, expected {expected}"))?;
        ensure(analyze(&g).iter().all(|r| r.recursive), || format!("chain {n}: non-recursive class"))?;
    }
    Ok("heights 1 / (1, 0), chain bounds w^(w^1)..w^(w^4)".into())
}

const EXPECTED_GL: &str = "terminals: (sigma,0) (sigma,1) (sigma,2) a
start: F0
F0 -> F1 | (F1,0) a
F1 -> F2 | (F2,0) a
(F1,0) -> (F2,1)
(F2,0) -> (sigma,0) | (sigma,2) (F2,0) | (sigma,2) (F2,1) (F2,0)
(F2,1) -> (sigma,2) (F2,1) (F2,1)
F2 -> (sigma,1) a | (sigma,2) F2 | (sigma,2) (F2,1) F2
";

const EXPECTED_GPRIME: &str = "terminals: 0 1 2
start: F0
F0 -> F1 | (F1,0)
F1 -> F2 | (F2,0)
(F1,0) -> (F2,1)
(F2,0) -> 0 | 2 (F2,0) | 2 (F2,1) (F2,0)
(F2,1) -> 2 (F2,1) (F2,1)
F2 -> 1 | 2 F2 | 2 (F2,1) F2
";

fn translation_fidelity() -> Outcome {
    for (flag, expected) in [("--labeled", EXPECTED_GL), ("--frontier", EXPECTED_GPRIME)] {
        let (code, text) = run_cli(&["translate", &data("section5.sys"), flag]);
        let canonical = parse_grammar(expected).unwrap().to_string();
        ensure(code == 0 && text == canonical, || format!("{flag}:\n{text}"))?;
        let groups = text.lines().filter(|l| l.contains(" -> ")).count();
        ensure(groups == 6, || format!("{flag}: {groups} groups"))?;
    }
    Ok("G_L and G' match, six groups each".into())
}

fn iterate_oracle() -> Outcome {
    let mut notes = Vec::new();
    for (file, extra) in [("section5.sys", None), ("omega_example.sys", None), ("example3.sys", Some("--binarize"))] {
        let path = data(file);
        let mut args = vec!["verify", path.as_str(), "--depth", "6", "--maxlen", "8"];
        args.extend(extra);
        let (code, text) = run_cli(&args);
        ensure(code == 0 && text.starts_with("PASS") && text.contains(" 0 discrepancies"), || {
            format!("{file}: {text}")
        })?;
        notes.push(format!("{file}: {}", text.lines().next().unwrap().trim_start_matches("PASS: ")));
    }
    Ok(notes.join("; "))
}

fn random_exponent(rng: &mut ChaCha8Rng) -> String {
    format!("w^2*{} + w*{} + {}", rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(0..3))
}

/// A random ordinal below `w^(w^3)` written as an unnormalized sum.
fn random_ordinal(rng: &mut ChaCha8Rng) -> CnfOrdinal {
    let mut terms: Vec<String> = (0..rng.gen_range(0..4))
        .map(|_| format!("w^({})*{}", random_exponent(rng), rng.gen_range(1..4)))
        .collect();
    terms.push(rng.gen_range(0..3).to_string());
    ord(&terms.join(" + "))
}

fn cnf_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let one = CnfOrdinal::one();
    for i in 0..1000 {
        let (a, b, c) = (random_ordinal(&mut rng), random_ordinal(&mut rng), random_ordinal(&mut rng));
        let fail = |law: &str| format!("triple {i} ({a}, {b}, {c}): {law}");
        ensure(a.add(&b).add(&c) == a.add(&b.add(&c)), || fail("additive associativity"))?;
        ensure(a.mul(&b).mul(&c) == a.mul(&b.mul(&c)), || fail("multiplicative associativity"))?;
        ensure(a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c)), || fail("left distributivity"))?;
        let cmp = [a < b, a == b, a > b];
        ensure(cmp.iter().filter(|x| **x).count() == 1, || fail("trichotomy"))?;
        if a <= b && b <= c {
            ensure(a <= c, || fail("transitivity"))?;
        }
        if !b.is_finite() {
            let n = CnfOrdinal::from(rng.gen_range(0..50u64));
            ensure(n.add(&b) == b, || fail("absorption"))?;
            // (b+1)a ≤ ba+1 for successor a, (b+1)a ≤ ba otherwise
            let lhs = b.add(&one).mul(&a);
            if a.is_successor() {
                ensure(lhs <= b.mul(&a).add(&one), || fail("successor inequality"))?;
            } else {
                ensure(lhs <= b.mul(&a), || fail("limit inequality"))?;
            }
        }
        if a < b {
            ensure(c.add(&a) < c.add(&b), || fail("strict monotonicity of c+_"))?;
        }
        if a <= b {
            ensure(c.mul(&a) <= c.mul(&b), || fail("monotonicity of c*_"))?;
        }
    }
    Ok("1000 triples, seed 7".into())
}

fn synthesis_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..50 {
        let terms: Vec<String> = (0..rng.gen_range(1..4))
            .map(|_| format!("w^(w*{} + {})*{}", rng.gen_range(0..2), rng.gen_range(0..4), rng.gen_range(1..4)))
            .collect();
        let alpha = ord(&terms.join(" + "));
        let sg = from_cnf(&alpha).map_err(|e| format!("{alpha}: {e}"))?;
        let fail = |what: &str| format!("sample {i} ({alpha}): {what}");
        ensure(sg.recipe().order_type() == alpha && *sg.order_type() == alpha, || fail("order type"))?;
        ensure(check_prefix(sg.grammar(), 10).is_clean(), || fail("prefix check"))?;
        ensure(check_wellorder_probes(sg.grammar(), 10).is_clean(), || fail("well-order probes"))?;
        let report = verify_monotone_rank(&sg, 10);
        ensure(report.passed(), || fail(&format!("{report:?}")))?;
    }
    Ok("50 ordinals, seed 11".into())
}

fn negative_controls() -> Outcome {
    let bad = normalize(&parse_grammar(&std::fs::read_to_string(data("omega1_mutated.grammar")).unwrap()).unwrap());
    let pair = Violation::PrefixPair { nonterminal: "O1".into(), shorter: Word::bits("1"), longer: Word::bits("10") };
    ensure(check_prefix(&bad, 12).violations.contains(&pair), || "mutated grammar passed the prefix check".into())?;

    let recipe = Recipe::product(Recipe::finite(2), Recipe::OmegaBase);
    let swapped = SynthesizedGrammar::swap_product_operands(recipe);
    let witness = match verify_monotone_rank(&swapped, 8) {
        RankReport::NotIncreasing { u, v, rank_u, rank_v } => {
            format!("{} ({rank_u}) before {} ({rank_v})", bits(&u), bits(&v))
        }
        other => return Err(format!("swapped product: {other:?}")),
    };

    let (_, gl) = run_cli(&["translate", &data("section5.sys"), "--labeled"]);
    let mutated = gl.replace("F2 -> (sigma,1) a | ", "F2 -> ");
    ensure(mutated != gl, || "mutation did not apply".into())?;
    let path = std::env::temp_dir().join(format!("ordgram-mutated-{}.grammar", std::process::id()));
    std::fs::write(&path, mutated).unwrap();
    let (code, text) =
        run_cli(&["verify", &data("section5.sys"), "--depth", "6", "--maxlen", "8", "--grammar", path.to_str().unwrap()]);
    let _ = std::fs::remove_file(&path);
    let missing = text.lines().find(|l| l.contains("missing from the grammar"));
    ensure(code == 1 && missing.is_some(), || format!("mutated G_L: {text}"))?;
    Ok(format!("prefix pair (1, 10); rank {witness}; {}", missing.unwrap().trim()))
}

const INTRO: &str = "ops: g:2 a:0
F0 = G(a)
G(x0) = g(x0, G(F(x0)))
F(x0) = g(x0, F(x0))
";

fn intro_system() -> Outcome {
    let sys = parse_system(INTRO).unwrap().binarize();
    let gp = normalize(&build_frontier_grammar(&sys).map_err(|e| e.to_string())?);
    let frontier = bounded_frontier(&sys, 14, 8);
    let words = enumerate_words(&gp, 8, DEFAULT_CAP).words;
    let iso = frontier == words;
    let bound = height_bound(&gp, gp.start_name()).unwrap();
    let h = height(&gp, gp.start_name()).unwrap();
    let expected = ord("w^w");
    ensure(iso, || format!("frontier ({} positions) and G' ({} words) differ", frontier.len(), words.len()))?;
    ensure(bound == expected, || {
        format!("start height {h}, bound {bound}, expected {expected}; frontier/G' agree on {} words", words.len())
    })?;
    Ok(format!("bound {bound}, {} words agree", words.len()))
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() {
    let criteria: [Criterion; 10] = [
        ("omega_1 family", omega_family, 1),
        ("omega_2 words and ranks", omega_two, 1),
        ("omega-power structure", omega_power, 5),
        ("heights and bounds", heights_and_bounds, 1),
        ("translation fidelity", translation_fidelity, 1),
        ("iterate oracle", iterate_oracle, 60),
        ("CNF laws", cnf_laws, 10),
        ("synthesis round trip", synthesis_round_trip, 120),
        ("negative controls", negative_controls, 5),
        ("intro w^w system", intro_system, 10),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > Duration::from_secs(*limit) {
            outcome = Err(format!("took {elapsed:.2?}, limit {limit}s"));
        }
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {:>2} {tag} [{name}] {elapsed:.2?} (limit {limit}s): {detail}", i + 1);
        failed += outcome.is_err() as usize;
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
