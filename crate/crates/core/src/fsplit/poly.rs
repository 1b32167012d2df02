//! Multivariate polynomials over GF(p).
//!
//! Text format:
//!
//! ```text
//! char 5
//! vars a b c d
//! 4 * a^2 d + b c - 1
//! ```
//!
//! The `char` header is required, `vars` is optional (variables are then
//! taken in order of first appearance), and each further non-empty line is
//! one polynomial. Lines starting with `#` are comments.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharPPolynomial {
    field: PrimeField,
    vars: Vec<String>,
    terms: BTreeMap<Exponents, u32>,
}

impl CharPPolynomial {
    pub fn zero(field: PrimeField, vars: &[String]) -> Self {
        Self { field, vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(field: PrimeField, vars: &[String], c: i64) -> Self {
        Self::monomial(field, vars, vec![0; vars.len()], c)
    }

    pub fn one(field: PrimeField, vars: &[String]) -> Self {
        Self::constant(field, vars, 1)
    }

    pub fn var(field: PrimeField, vars: &[String], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(field, vars, e, 1)
    }

    pub fn monomial(field: PrimeField, vars: &[String], exps: Exponents, c: i64) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(field, vars);
        let c = field.from_i64(c);
        if c != 0 {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Build from `(exponents, coefficient)` pairs; repeats are summed.
    pub fn from_terms(field: PrimeField, vars: &[String], terms: impl IntoIterator<Item = (Exponents, u32)>) -> Self {
        let mut p = Self::zero(field, vars);
        for (e, c) in terms {
            p.add_term(e, c % field.modulus());
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: u32) {
        let f = self.field;
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                let v = f.add(o.get(), &c);
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                if c != 0 {
                    v.insert(c);
                }
            }
        }
    }

    /// The same polynomial in a ring with variables `vars`, matched by name.
    pub fn embed(&self, vars: &[String]) -> Result<Self> {
        let slots: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).ok_or_else(|| Error::Parse(format!("unknown variable `{v}`"))))
            .collect::<Result<_>>()?;
        let terms = self.terms.iter().map(|(e, c)| {
            let mut out = vec![0; vars.len()];
            for (k, x) in e.iter().enumerate() {
                out[slots[k]] = *x;
            }
            (out, *c)
        });
        Ok(Self::from_terms(self.field, vars, terms))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn characteristic(&self) -> u32 {
        self.field.modulus()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, u32> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&vec![0; self.vars.len()]) == Some(&1)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn same_ring(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.spec().to_string(), other.field.spec().to_string()));
        }
        if self.vars != other.vars {
            return Err(Error::InvalidPresentation(format!(
                "polynomials in different variables ({} vs {})",
                self.vars.join(" "),
                other.vars.join(" ")
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(self.same_ring(other).is_ok());
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self { terms: self.terms.iter().map(|(e, c)| (e.clone(), f.neg(c))).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        if c % f.modulus() == 0 {
            return Self::zero(f, &self.vars);
        }
        Self { terms: self.terms.iter().map(|(e, x)| (e.clone(), f.mul(x, &c))).collect(), ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert!(self.same_ring(other).is_ok());
        let f = self.field;
        let mut acc: BTreeMap<Exponents, u32> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let slot = acc.entry(e).or_insert(0);
                *slot = f.add(slot, &f.mul(ca, cb));
            }
        }
        acc.retain(|_, c| *c != 0);
        Self { field: f, vars: self.vars.clone(), terms: acc }
    }

    /// Multiply by the monomial with exponents `e`.
    pub fn mul_monomial(&self, e: &[u32]) -> Self {
        Self {
            terms: self.terms.iter().map(|(x, c)| (x.iter().zip(e).map(|(a, b)| a + b).collect(), *c)).collect(),
            ..self.clone()
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.field, &self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `f^p`, computed termwise since Frobenius is additive.
    pub fn frobenius(&self) -> Self {
        let p = self.characteristic();
        Self {
            terms: self.terms.iter().map(|(e, c)| (e.iter().map(|x| x * p).collect(), *c)).collect(),
            ..self.clone()
        }
    }

    /// Parse one polynomial in the given variables.
    pub fn parse_in(field: PrimeField, vars: &[String], text: &str) -> Result<Self> {
        let mut names = vars.to_vec();
        let p = parse_expr(field, &mut names, text, false)?;
        Ok(p)
    }

    /// Render in the text format body syntax.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CharPPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let factors: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(x, _)| **x > 0)
                .map(|(x, v)| if *x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c} * {}", factors.join(" "))?;
            }
        }
        Ok(())
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parse a sum of terms. With `grow`, unknown variables are appended to
/// `names`; otherwise they are an error.
fn parse_expr(field: PrimeField, names: &mut Vec<String>, text: &str, grow: bool) -> Result<CharPPolynomial> {
    let bad = |m: String| Error::Parse(m);
    let mut raw: Vec<(bool, Vec<(String, u32)>, u32)> = Vec::new();
    let spaced = text.replace('-', " +- ");
    for term in spaced.split('+') {
        let mut t = term.trim();
        if t.is_empty() {
            continue;
        }
        let mut negative = false;
        while let Some(rest) = t.strip_prefix('-') {
            negative = !negative;
            t = rest.trim_start();
        }
        if t.is_empty() {
            return Err(bad(format!("dangling sign in `{text}`")));
        }
        let mut coeff = field.one();
        let mut factors = Vec::new();
        for tok in t.split(|c: char| c == '*' || c.is_whitespace()).filter(|s| !s.is_empty()) {
            if let Ok(v) = tok.parse::<i64>() {
                coeff = field.mul(&coeff, &field.from_i64(v));
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().map_err(|_| bad(format!("bad exponent in `{tok}`")))?),
                None => (tok, 1),
            };
            if !is_ident(name) {
                return Err(bad(format!("bad factor `{tok}`")));
            }
            factors.push((name.to_string(), exp));
        }
        raw.push((negative, factors, coeff));
    }
    for (_, factors, _) in &raw {
        for (name, _) in factors {
            if !names.contains(name) {
                if grow {
                    names.push(name.clone());
                } else {
                    return Err(bad(format!("unknown variable `{name}`")));
                }
            }
        }
    }
    let mut p = CharPPolynomial::zero(field, names);
    for (negative, factors, coeff) in raw {
        let mut e = vec![0u32; names.len()];
        for (name, x) in factors {
            let i = names.iter().position(|n| *n == name).expect("collected");
            e[i] += x;
        }
        let c = if negative { field.neg(&coeff) } else { coeff };
        if c != 0 {
            p.add_term(e, c);
        }
    }
    Ok(p)
}

/// Parse a polynomial file: header, optional variables, one polynomial per
/// line.
pub fn parse_polynomial_file(text: &str) -> Result<Vec<CharPPolynomial>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty polynomial file".into()))?;
    let p: u64 = header
        .strip_prefix("char")
        .map(str::trim)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected `char P` header, got `{header}`")))?;
    let field = PrimeField::new(u32::try_from(p).map_err(|_| Error::NotPrime(p))?)?;
    let rest: Vec<&str> = lines.collect();
    let (mut names, body): (Vec<String>, &[&str]) = match rest.first().and_then(|l| l.strip_prefix("vars")) {
        Some(v) => {
            let names: Vec<String> = v.split_whitespace().map(String::from).collect();
            if let Some(bad) = names.iter().find(|n| !is_ident(n)) {
                return Err(Error::Parse(format!("bad variable name `{bad}`")));
            }
            (names, &rest[1..])
        }
        None => (Vec::new(), &rest[..]),
    };
    let declared = !names.is_empty();
    let mut out = Vec::new();
    for line in body {
        out.push(parse_expr(field, &mut names, line, !declared)?);
    }
    // pad polynomials parsed before later variables appeared
    let n = names.len();
    Ok(out
        .into_iter()
        .map(|p| {
            let terms = p.terms.into_iter().map(|(mut e, c)| {
                e.resize(n, 0);
                (e, c)
            });
            CharPPolynomial::from_terms(field, &names, terms)
        })
        .collect())
}

/// Write polynomials sharing a ring in the file format.
pub fn render_polynomial_file(polys: &[CharPPolynomial]) -> String {
    let mut s = String::new();
    if let Some(first) = polys.first() {
        s.push_str(&format!("char {}\nvars {}\n", first.characteristic(), first.vars().join(" ")));
    }
    for p in polys {
        s.push_str(&p.render());
        s.push('\n');
    }
    s
}

/// All exponent vectors in `n` variables of total degree `≤ d`, by degree
/// and then lexicographically.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Exponents> {
    fn rec(i: usize, left: u32, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for x in (0..=left).rev() {
            cur[i] = x;
            rec(i + 1, left - x, cur, out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    for deg in 0..=d {
        let mut cur = vec![0; n];
        rec(0, deg, &mut cur, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn arithmetic() {
        let vars = vec!["x".to_string(), "y".to_string()];
        let x = CharPPolynomial::var(f(2), &vars, 0);
        let y = CharPPolynomial::var(f(2), &vars, 1);
        let s = x.add(&y);
        assert_eq!(s.pow(2), s.frobenius());
        assert!(s.sub(&s).is_zero());
        assert_eq!(x.mul(&y).degree(), Some(2));
    }

    #[test]
    fn text_round_trip() {
        let polys = parse_polynomial_file("# chart\nchar 5\nvars a b c d\n4 * a^2 d + b c - 1\na - a\n").unwrap();
        assert_eq!(polys.len(), 2);
        assert!(polys[1].is_zero());
        assert_eq!(polys[0].terms().len(), 3);
        let again = parse_polynomial_file(&render_polynomial_file(&polys)).unwrap();
        assert_eq!(again, polys);
        let inferred = parse_polynomial_file("char 3\nt^2 + s\n2*t\n").unwrap();
        assert_eq!(inferred[1].vars(), ["t", "s"]);
        assert_eq!(inferred[0].vars(), ["t", "s"]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_polynomial_file("char 4\nx\n"), Err(Error::NotPrime(4))));
        assert!(parse_polynomial_file("x + 1\n").is_err());
        assert!(parse_polynomial_file("char 3\nvars x\ny\n").is_err());
        assert!(parse_polynomial_file("char 3\nx^-1\n").is_err());
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_up_to(2, 2).len(), 6);
        assert_eq!(monomials_up_to(4, 12).len(), 1820);
        assert_eq!(monomials_up_to(2, 1), vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
    }
}
