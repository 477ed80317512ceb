//! Multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::inv_mod_general;

/// A polynomial in `nvars` variables. Terms map exponent vectors to nonzero
/// rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl IntPolynomial {
    pub fn zero(nvars: usize) -> Self {
        IntPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = IntPolynomial::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        IntPolynomial::constant(nvars, BigRational::from_integer(c.into()))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = IntPolynomial::zero(nvars);
        p.terms.insert(e, BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return IntPolynomial::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        IntPolynomial { nvars: self.nvars, terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(IntPolynomial::int(self.nvars, 1), |acc, _| &acc * self)
    }

    /// Largest exponent of each variable.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (slot, &x) in d.iter_mut().zip(e) {
                *slot = (*slot).max(x);
            }
        }
        d
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Substitutes `subs[i]` (all over a common variable count) for variable `i`.
    pub fn compose(&self, subs: &[IntPolynomial]) -> IntPolynomial {
        assert_eq!(subs.len(), self.nvars, "one substitute per variable");
        let nv = subs.first().map_or(0, |s| s.nvars);
        let mut out = IntPolynomial::zero(nv);
        for (e, c) in &self.terms {
            let mut term = IntPolynomial::constant(nv, c.clone());
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    term = &term * &subs[i].pow(x);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Re-indexes variables into a polynomial with `nvars` variables, sending
    /// variable `i` to `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> IntPolynomial {
        let subs: Vec<IntPolynomial> = map.iter().map(|&j| IntPolynomial::var(nvars, j)).collect();
        if self.nvars == 0 {
            let c = self.terms.values().next().cloned().unwrap_or_else(BigRational::zero);
            return IntPolynomial::constant(nvars, c);
        }
        self.compose(&subs)
    }

    pub fn eval(&self, x: &[BigInt]) -> BigRational {
        assert_eq!(x.len(), self.nvars, "argument count");
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut m = BigInt::one();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    m *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            acc += c * BigRational::from_integer(m);
        }
        acc
    }

    pub fn eval_int(&self, x: &[BigInt]) -> Result<BigInt> {
        let v = self.eval(x);
        if !v.is_integer() {
            return Err(Error::NonIntegerResult(format!("{self} at {x:?} is {v}")));
        }
        Ok(v.to_integer())
    }

    /// Certifies that the polynomial maps integer points to integers by
    /// checking the grid `Π {0, ..., deg_i}`, which determines an
    /// integer-valued polynomial through its binomial expansion.
    pub fn is_integer_valued(&self) -> bool {
        if self.denominator_lcm().is_one() {
            return true;
        }
        let degs = self.degrees();
        let mut point = vec![0u32; self.nvars];
        loop {
            let x: Vec<BigInt> = point.iter().map(|&v| BigInt::from(v)).collect();
            if !self.eval(&x).is_integer() {
                return false;
            }
            let mut i = 0;
            loop {
                if i == self.nvars {
                    return true;
                }
                if point[i] < degs[i] {
                    point[i] += 1;
                    break;
                }
                point[i] = 0;
                i += 1;
            }
        }
    }

    pub fn compile_mod(&self, n: u64) -> Result<ModPoly> {
        ModPoly::new(self, n)
    }

    pub fn compile_i128(&self) -> Option<I128Poly> {
        I128Poly::new(self)
    }

    /// Parses an expression over `names` with `+ - * / ^`, parentheses,
    /// integer literals; `/` only divides by constants.
    pub fn parse(text: &str, names: &[&str]) -> Result<IntPolynomial> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0, names, nvars: names.len() };
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::parse(1, format!("unexpected `{}`", p.tokens[p.pos])));
        }
        Ok(out)
    }

    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].to_string() } else { format!("{}^{k}", names[i]) })
                .collect();
            if mono.is_empty() {
                s.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    s.push_str(&a.to_string());
                    s.push('*');
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }

    fn insert_add(&mut self, e: Vec<u32>, c: BigRational) {
        let entry = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.render(&refs))
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut out = IntPolynomial::zero(self.nvars.max(rhs.nvars));
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_add(e, c1 * c2);
            }
        }
        out
    }
}

/// Evaluation modulo `n` with denominators inverted.
#[derive(Debug, Clone)]
pub struct ModPoly {
    n: u64,
    terms: Vec<(u64, Vec<(usize, u32)>)>,
}

impl ModPoly {
    fn new(p: &IntPolynomial, n: u64) -> Result<Self> {
        let ni = n as i128;
        let mut terms = Vec::new();
        for (e, c) in &p.terms {
            let num = (c.numer() % BigInt::from(n)).to_i128().expect("reduced");
            let den = (c.denom() % BigInt::from(n)).to_i128().expect("reduced");
            let inv = inv_mod_general(den, ni).ok_or(Error::NotCoprime {
                n,
                n0: c.denom().to_u64().unwrap_or(0),
            })?;
            let coef = (num.rem_euclid(ni) * inv % ni) as u64;
            if coef != 0 {
                let mono = e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (i, k)).collect();
                terms.push((coef, mono));
            }
        }
        Ok(ModPoly { n, terms })
    }

    /// Evaluates at residues `x` (each `< n`).
    #[inline]
    pub fn eval(&self, x: &[u64]) -> u64 {
        let n = self.n as u128;
        let mut acc: u128 = 0;
        for (c, mono) in &self.terms {
            let mut t = *c as u128;
            for &(i, k) in mono {
                for _ in 0..k {
                    t = t * x[i] as u128 % n;
                }
            }
            acc += t;
        }
        (acc % n) as u64
    }
}

/// Exact evaluation on machine integers: `Σ c_i m_i(x) / scale`, where the
/// `c_i` are the coefficients multiplied by the common denominator.
#[derive(Debug, Clone)]
pub struct I128Poly {
    scale: i128,
    terms: Vec<(i128, Vec<(usize, u32)>)>,
}

impl I128Poly {
    fn new(p: &IntPolynomial) -> Option<Self> {
        let l = p.denominator_lcm();
        let scale = l.to_i128()?;
        let mut terms = Vec::new();
        for (e, c) in &p.terms {
            let scaled = (c * BigRational::from_integer(l.clone())).to_integer().to_i128()?;
            let mono = e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (i, k)).collect();
            terms.push((scaled, mono));
        }
        Some(I128Poly { scale, terms })
    }

    /// `None` on overflow or a non-integral value.
    pub fn eval(&self, x: &[i128]) -> Option<i128> {
        let mut acc: i128 = 0;
        for (c, mono) in &self.terms {
            let mut t = *c;
            for &(i, k) in mono {
                for _ in 0..k {
                    t = t.checked_mul(x[i])?;
                }
            }
            acc = acc.checked_add(t)?;
        }
        (acc % self.scale == 0).then(|| acc / self.scale)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "{n}"),
            Tok::Ident(s) => f.write_str(s),
            Tok::Sym(c) => write!(f, "{c}"),
        }
    }
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Num(digits.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::parse(1, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    names: &'a [&'a str],
    nvars: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<IntPolynomial> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<IntPolynomial> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = match d.terms.len() {
                    1 if d.degrees().iter().all(|&x| x == 0) => d.terms.values().next().unwrap().clone(),
                    _ => return Err(Error::parse(1, "division by a non-constant")),
                };
                acc = acc.scale(&c.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<IntPolynomial> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Tok::Num(e)) => {
                    self.pos += 1;
                    let e = e.to_u32().ok_or_else(|| Error::parse(1, "exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::parse(1, "expected an exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IntPolynomial> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(IntPolynomial::constant(self.nvars, BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .names
                    .iter()
                    .position(|&v| v == name)
                    .ok_or_else(|| Error::parse(1, format!("unknown variable `{name}`")))?;
                Ok(IntPolynomial::var(self.nvars, i))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::parse(1, "missing `)`"));
                }
                Ok(e)
            }
            Some(t) => Err(Error::parse(1, format!("unexpected `{t}`"))),
            None => Err(Error::parse(1, "unexpected end of expression")),
        }
    }
}
