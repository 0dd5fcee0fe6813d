//! Exact arithmetic on ordinals below ω^(ω^ω).
//!
//! Every such ordinal has a two-level Cantor normal form
//!
//! ```text
//! ω^e₁·c₁ + ω^e₂·c₂ + … + ω^eₙ·cₙ      e₁ > e₂ > … > eₙ,  cᵢ ≥ 1
//! ```
//!
//! where each exponent eᵢ is itself an ordinal below ω^ω, i.e. a polynomial
//! ω^k₁·d₁ + … + ω^kₘ·dₘ in ω with natural powers. [`CnfExponent`] holds the
//! inner level and [`CnfOrdinal`] the outer one. Coefficients and powers are
//! arbitrary-precision naturals.
//!
//! The textual syntax uses `w` for ω:
//!
//! ```text
//! ord   := term ("+" term)*
//! term  := "w" power? mult? | nat
//! power := "^" nat | "^" "w" power? | "^" "(" ord ")"
//! mult  := "*" nat
//! ```
//!
//! `+` is ordinal addition, so `1 + w` parses to `w`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// Errors produced while parsing ordinal expressions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("exponent at byte {position} is not below w^w")]
    ExponentOutOfRange { position: usize },
}

/// Ordered sum of `base^exp · coefficient` terms; shared by both CNF levels.
fn add_terms<E: Ord + Clone>(a: &[(E, BigUint)], b: &[(E, BigUint)]) -> Vec<(E, BigUint)> {
    let Some((lead, lead_coeff)) = b.first() else {
        return a.to_vec();
    };
    let mut out: Vec<(E, BigUint)> = a.iter().take_while(|(e, _)| e > lead).cloned().collect();
    match a.iter().find(|(e, _)| e == lead) {
        Some((_, c)) => {
            out.push((lead.clone(), c + lead_coeff));
            out.extend(b[1..].iter().cloned());
        }
        None => out.extend(b.iter().cloned()),
    }
    out
}

fn check_strictly_decreasing<E: Ord>(terms: &[(E, BigUint)]) -> bool {
    terms.windows(2).all(|w| w[0].0 > w[1].0) && terms.iter().all(|(_, c)| !c.is_zero())
}

/// An ordinal below ω^ω, written as Σ ω^k·c with natural powers `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CnfExponent {
    terms: Vec<(BigUint, BigUint)>,
}

impl CnfExponent {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The finite exponent `n`.
    pub fn natural(n: impl Into<BigUint>) -> Self {
        let n = n.into();
        if n.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(BigUint::zero(), n)] }
        }
    }

    /// The exponent ω^k.
    pub fn omega_power(k: impl Into<BigUint>) -> Self {
        Self { terms: vec![(k.into(), BigUint::one())] }
    }

    /// Builds an exponent from `(power, coefficient)` pairs, which must already
    /// be in normal form (strictly decreasing powers, positive coefficients).
    pub fn from_terms(terms: Vec<(BigUint, BigUint)>) -> Option<Self> {
        check_strictly_decreasing(&terms).then_some(Self { terms })
    }

    pub fn terms(&self) -> &[(BigUint, BigUint)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Power of the leading term; `None` for the zero exponent.
    pub fn leading_power(&self) -> Option<&BigUint> {
        self.terms.first().map(|(k, _)| k)
    }

    /// The exponent as a natural number, if it is finite.
    pub fn as_natural(&self) -> Option<BigUint> {
        match self.terms.as_slice() {
            [] => Some(BigUint::zero()),
            [(k, c)] if k.is_zero() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { terms: add_terms(&self.terms, &other.terms) }
    }

    fn as_ordinal(&self) -> CnfOrdinal {
        CnfOrdinal {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (CnfExponent::natural(k.clone()), c.clone()))
                .collect(),
        }
    }
}

impl Ord for CnfExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        // Larger leading term wins; a proper prefix is smaller.
        self.terms.cmp(&other.terms)
    }
}

impl PartialOrd for CnfExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CnfExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.as_ordinal(), f)
    }
}

/// An ordinal below ω^(ω^ω) in Cantor normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CnfOrdinal {
    terms: Vec<(CnfExponent, BigUint)>,
}

impl CnfOrdinal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::natural(1u32)
    }

    pub fn natural(n: impl Into<BigUint>) -> Self {
        let n = n.into();
        if n.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(CnfExponent::zero(), n)] }
        }
    }

    pub fn omega() -> Self {
        Self::omega_to(CnfExponent::natural(1u32))
    }

    /// ω^e.
    pub fn omega_to(e: CnfExponent) -> Self {
        Self { terms: vec![(e, BigUint::one())] }
    }

    /// ω^(ω^k).
    pub fn omega_tower(k: impl Into<BigUint>) -> Self {
        Self::omega_to(CnfExponent::omega_power(k))
    }

    /// Builds an ordinal from terms already in normal form.
    pub fn from_terms(terms: Vec<(CnfExponent, BigUint)>) -> Option<Self> {
        check_strictly_decreasing(&terms).then_some(Self { terms })
    }

    pub fn terms(&self) -> &[(CnfExponent, BigUint)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff the ordinal is nonzero and has no finite last term.
    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|(e, _)| !e.is_zero())
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|(e, _)| e.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        self.as_natural().is_some()
    }

    pub fn as_natural(&self) -> Option<BigUint> {
        match self.terms.as_slice() {
            [] => Some(BigUint::zero()),
            [(e, c)] if e.is_zero() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_exponent(&self) -> Option<&CnfExponent> {
        self.terms.first().map(|(e, _)| e)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { terms: add_terms(&self.terms, &other.terms) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let Some((lead, lead_coeff)) = self.terms.first() else {
            return Self::zero();
        };
        let mut acc = Self::zero();
        for (f, d) in &other.terms {
            let piece = if f.is_zero() {
                let mut terms = self.terms.clone();
                terms[0].1 = lead_coeff * d;
                Self { terms }
            } else {
                Self { terms: vec![(lead.add(f), d.clone())] }
            };
            acc = acc.add(&piece);
        }
        acc
    }

    /// `self^n` by repeated multiplication.
    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// α^ω, the supremum of the finite powers αⁿ.
    pub fn omega_power(&self) -> Self {
        if let Some(n) = self.as_natural() {
            return if n <= BigUint::one() { self.clone() } else { Self::omega() };
        }
        let k = self
            .leading_exponent()
            .and_then(CnfExponent::leading_power)
            .expect("infinite ordinal has a nonzero leading exponent");
        Self::omega_tower(k + 1u32)
    }
}

impl Ord for CnfOrdinal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.cmp(&other.terms)
    }
}

impl PartialOrd for CnfOrdinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for CnfOrdinal {
    fn from(n: u64) -> Self {
        Self::natural(n)
    }
}

pub fn compare(a: &CnfOrdinal, b: &CnfOrdinal) -> Ordering {
    a.cmp(b)
}

pub fn parse_ordinal(text: &str) -> Result<CnfOrdinal, OrdinalError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let value = p.ord()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

pub fn format_ordinal(a: &CnfOrdinal) -> String {
    a.to_string()
}

impl FromStr for CnfOrdinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ordinal(s)
    }
}

impl fmt::Display for CnfOrdinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            f.write_str("w")?;
            match e.as_natural() {
                Some(n) if n.is_one() => {}
                Some(n) => write!(f, "^{n}")?,
                None if e.terms.len() == 1 && e.terms[0].1.is_one() && e.terms[0].0.is_one() => {
                    f.write_str("^w")?
                }
                None => write!(f, "^({e})")?,
            }
            if !c.is_one() {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> OrdinalError {
        OrdinalError::Syntax { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ord(&mut self) -> Result<CnfOrdinal, OrdinalError> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            acc = acc.add(&self.term()?);
        }
        Ok(acc)
    }

    fn nat(&mut self) -> Result<BigUint, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("decimal digits"))
    }

    fn term(&mut self) -> Result<CnfOrdinal, OrdinalError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exponent = if self.eat(b'^') { self.power()? } else { CnfExponent::natural(1u32) };
                let coeff = if self.eat(b'*') { self.nat()? } else { BigUint::one() };
                if coeff.is_zero() {
                    return Ok(CnfOrdinal::zero());
                }
                Ok(CnfOrdinal { terms: vec![(exponent, coeff)] })
            }
            Some(b) if b.is_ascii_digit() => Ok(CnfOrdinal::natural(self.nat()?)),
            _ => Err(self.error("expected 'w' or a natural number")),
        }
    }

    fn power(&mut self) -> Result<CnfExponent, OrdinalError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let value = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.ord()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                inner
            }
            Some(b'w') => {
                self.pos += 1;
                let e = if self.eat(b'^') { self.power()? } else { CnfExponent::natural(1u32) };
                CnfOrdinal::omega_to(e)
            }
            Some(b) if b.is_ascii_digit() => CnfOrdinal::natural(self.nat()?),
            _ => return Err(self.error("expected exponent")),
        };
        to_exponent(&value).ok_or(OrdinalError::ExponentOutOfRange { position: start })
    }
}

/// Converts an ordinal below ω^ω into exponent form.
pub fn to_exponent(a: &CnfOrdinal) -> Option<CnfExponent> {
    let terms = a
        .terms
        .iter()
        .map(|(e, c)| e.as_natural().map(|k| (k, c.clone())))
        .collect::<Option<Vec<_>>>()?;
    Some(CnfExponent { terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> CnfOrdinal {
        parse_ordinal(s).unwrap()
    }

    #[test]
    fn parses_examples() {
        assert!(o("0").is_zero());
        assert_eq!(o("w^w"), CnfOrdinal::omega_tower(1u32));
        let a = o("w^(w*2+1)*3 + w*5 + 7");
        assert_eq!(a.terms().len(), 3);
        assert_eq!(a.to_string(), "w^(w*2 + 1)*3 + w*5 + 7");
        assert_eq!(o(&a.to_string()), a);
    }

    #[test]
    fn parse_normalizes_with_ordinal_sum() {
        assert_eq!(o("1 + w"), CnfOrdinal::omega());
        assert_eq!(o("w + w^2"), o("w^2"));
        assert_eq!(o("w*2 + w"), o("w*3"));
        assert_eq!(o("w^w^2"), o("w^(w^2)"));
        assert_eq!(o("w*0 + 3"), o("3"));
    }

    #[test]
    fn rejects_deep_exponents() {
        assert!(matches!(parse_ordinal("w^(w^w)"), Err(OrdinalError::ExponentOutOfRange { .. })));
        assert!(matches!(parse_ordinal("w^w^w"), Err(OrdinalError::ExponentOutOfRange { .. })));
        assert!(matches!(parse_ordinal("w +"), Err(OrdinalError::Syntax { .. })));
        assert!(matches!(parse_ordinal("w^(2"), Err(OrdinalError::Syntax { .. })));
        assert!(matches!(parse_ordinal("3 3"), Err(OrdinalError::Syntax { .. })));
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&o("w"), &o("w")), Ordering::Equal);
        assert_eq!(compare(&o("w*2+1"), &o("w^2")), Ordering::Less);
        assert_eq!(compare(&o("w^w"), &o("w^3")), Ordering::Greater);
        assert_eq!(compare(&o("w^w"), &o("w^(w+1)")), Ordering::Less);
        assert_eq!(compare(&o("w*2"), &o("w*2+1")), Ordering::Less);
    }

    #[test]
    fn add_examples() {
        assert_eq!(o("1").add(&o("w")), o("w"));
        assert_eq!(o("w^2").add(&o("w")), o("w^2 + w"));
        assert_eq!(o("w^2 + w").add(&o("w^2")), o("w^2*2"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(o("w").mul(&o("w")), o("w^2"));
        assert_eq!(o("w+1").mul(&o("w")), o("w^2"));
        assert_eq!(o("w").mul(&o("2")), o("w*2"));
        assert_eq!(o("2").mul(&o("w")), o("w"));
        assert_eq!(o("w+1").mul(&o("2")), o("w*2+1"));
        assert_eq!(o("w^w").mul(&o("0")), o("0"));
        assert_eq!(o("w^w").mul(&o("w^w")), o("w^(w*2)"));
    }

    #[test]
    fn omega_power_examples() {
        assert_eq!(o("0").omega_power(), o("0"));
        assert_eq!(o("1").omega_power(), o("1"));
        assert_eq!(o("2").omega_power(), o("w"));
        assert_eq!(o("w").omega_power(), o("w^w"));
        assert_eq!(o("w^w").omega_power(), o("w^(w^2)"));
        assert_eq!(o("w^2*3 + 1").omega_power(), o("w^w"));
    }

    #[test]
    fn limit_and_zero() {
        assert!(o("w").is_limit());
        assert!(!o("w+3").is_limit());
        assert!(!o("0").is_limit());
        assert!(o("0").is_zero());
    }

    #[test]
    fn bignum_coefficients() {
        let big = o("w*18446744073709551615");
        assert_eq!(big.add(&o("w")).to_string(), "w*18446744073709551616");
    }
}
