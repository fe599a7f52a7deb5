//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational coefficient.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Monomial order used for leading terms and canonical printing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    DegRevLex,
    Lex,
}

impl MonomialOrder {
    pub fn name(self) -> &'static str {
        match self {
            MonomialOrder::DegRevLex => "degrevlex",
            MonomialOrder::Lex => "lex",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "degrevlex" | "grevlex" => Some(MonomialOrder::DegRevLex),
            "lex" => Some(MonomialOrder::Lex),
            _ => None,
        }
    }

    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::DegRevLex => {
                let da: u64 = a.iter().map(|&e| e as u64).sum();
                let db: u64 = b.iter().map(|&e| e as u64).sum();
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

/// Ordered variables, characteristic and monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
    order: MonomialOrder,
    characteristic: u64,
}

pub type RingRef = Arc<Ring>;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn valid_ident(s: &str) -> bool {
    let mut ch = s.chars();
    match ch.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    ch.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Result<RingRef> {
        Ring::with_options(vars, MonomialOrder::DegRevLex, 0)
    }

    pub fn with_options<S: AsRef<str>>(
        vars: &[S],
        order: MonomialOrder,
        characteristic: u64,
    ) -> Result<RingRef> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !valid_ident(v) {
                return Err(Error::InvalidRing(format!("bad variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        if characteristic != 0 && !is_prime(characteristic) {
            return Err(Error::InvalidRing(format!(
                "characteristic {characteristic} is not prime"
            )));
        }
        Ok(Arc::new(Ring {
            vars,
            order,
            characteristic,
        }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn cmp_mono(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.order.cmp(a, b)
    }

    /// Same variables and characteristic, different order.
    pub fn with_order(&self, order: MonomialOrder) -> RingRef {
        Arc::new(Ring {
            order,
            ..self.clone()
        })
    }

    /// Reduce a coefficient into the prime field when the characteristic is positive.
    pub fn normalize(&self, c: Q) -> Q {
        if self.characteristic == 0 {
            return c;
        }
        let p = BigInt::from(self.characteristic);
        let num = c.numer().mod_floor(&p);
        let den = c.denom().mod_floor(&p);
        assert!(!den.is_zero(), "division by a multiple of the characteristic");
        // Fermat inverse.
        let inv = den.modpow(&(&p - BigInt::from(2)), &p);
        Q::from_integer((num * inv).mod_floor(&p))
    }
}

pub fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Exponent vector, one entry per ring variable.
pub type Mono = Vec<u32>;

pub fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn mono_div(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn mono_degree(a: &[u32]) -> u32 {
    a.iter().sum()
}

/// A polynomial in a fixed ring. No zero coefficients are stored.
#[derive(Clone, Debug)]
pub struct Poly {
    ring: RingRef,
    terms: BTreeMap<Mono, Q>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &RingRef) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &RingRef) -> Poly {
        Poly::constant(ring, Q::one())
    }

    pub fn constant(ring: &RingRef, c: Q) -> Poly {
        Poly::monomial(ring, vec![0; ring.nvars()], c)
    }

    pub fn int(ring: &RingRef, n: i64) -> Poly {
        Poly::constant(ring, q(n))
    }

    pub fn monomial(ring: &RingRef, exps: Mono, c: Q) -> Poly {
        assert_eq!(exps.len(), ring.nvars());
        let c = ring.normalize(c);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// The variable with the given index.
    pub fn var(ring: &RingRef, i: usize) -> Poly {
        let mut e = vec![0; ring.nvars()];
        e[i] = 1;
        Poly::monomial(ring, e, Q::one())
    }

    pub fn var_named(ring: &RingRef, name: &str) -> Result<Poly> {
        let i = ring
            .var_index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Poly::var(ring, i))
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, Q)>>(ring: &RingRef, it: I) -> Poly {
        let mut p = Poly::zero(ring);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    /// Constant term (coefficient of the empty monomial).
    pub fn constant_term(&self) -> Q {
        self.terms
            .get(&vec![0; self.ring.nvars()])
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u32]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Terms in storage order (ascending lexicographic exponent vectors).
    pub fn raw_terms(&self) -> impl Iterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    /// Terms sorted descending in the ring's monomial order.
    pub fn terms_desc(&self) -> Vec<(&Mono, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| self.ring.cmp_mono(b.0, a.0));
        v
    }

    pub fn leading(&self) -> Option<(&Mono, &Q)> {
        self.terms
            .iter()
            .max_by(|a, b| self.ring.cmp_mono(a.0, b.0))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| mono_degree(m)).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m[var] > 0)
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        debug_assert_eq!(m.len(), self.ring.nvars());
        let c = self.ring.normalize(c);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = self.ring.normalize(o.get() + c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_ring(&self, other: &Poly) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "rings ({}) and ({})",
                self.ring.vars.join(","),
                other.ring.vars.join(",")
            )))
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn multiply(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        let mut r = Poly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(mono_mul(m1, m2), c1 * c2);
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        let c = self.ring.normalize(c.clone());
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), self.ring.normalize(x * &c)))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &[u32], c: &Q) -> Poly {
        let mut r = Poly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            r.add_term(mono_mul(m1, m), c1 * c);
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one(&self.ring);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Formal partial derivative by variable index.
    pub fn partial(&self, var: usize) -> Poly {
        let mut r = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            if m[var] > 0 {
                let mut m2 = m.clone();
                m2[var] -= 1;
                r.add_term(m2, c * Q::from_integer(BigInt::from(m[var])));
            }
        }
        r
    }

    pub fn partial_derivative(&self, var: &str) -> Result<Poly> {
        let i = self
            .ring
            .var_index(var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        Ok(self.partial(i))
    }

    /// Ring homomorphism sending variable `i` to `images[i]` (all in one target ring).
    pub fn substitute_all(&self, target: &RingRef, images: &[Poly]) -> Result<Poly> {
        assert_eq!(images.len(), self.ring.nvars());
        for im in images {
            if !same_ring(im.ring(), target) {
                return Err(Error::ContextMismatch("substitution image ring".into()));
            }
        }
        let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::one(target)]; images.len()];
        let mut r = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            r = &r + &t;
        }
        Ok(r)
    }

    /// Substitute the named variables; the others are kept.
    pub fn substitute(&self, assignment: &[(&str, Poly)]) -> Result<Poly> {
        let mut images: Vec<Poly> = (0..self.ring.nvars())
            .map(|i| Poly::var(&self.ring, i))
            .collect();
        for (name, p) in assignment {
            let i = self
                .ring
                .var_index(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            self.check_ring(p)?;
            images[i] = p.clone();
        }
        self.substitute_all(&self.ring.clone(), &images)
    }

    /// Re-express in another ring by variable name; fails if a used variable is missing.
    pub fn to_ring(&self, target: &RingRef) -> Result<Poly> {
        if same_ring(&self.ring, target) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self
            .ring
            .vars
            .iter()
            .map(|v| target.var_index(v))
            .collect();
        let mut r = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut m2 = vec![0; target.nvars()];
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => m2[j] = e,
                    None => return Err(Error::UnknownVariable(self.ring.vars[i].clone())),
                }
            }
            r.add_term(m2, c.clone());
        }
        Ok(r)
    }

    /// Common weighted degree of all terms, `None` when not quasi-homogeneous.
    /// The zero polynomial has every degree; it reports `Some(0)`.
    pub fn quasi_degree(&self, weights: &[Q]) -> Option<Q> {
        assert_eq!(weights.len(), self.ring.nvars());
        let mut deg: Option<Q> = None;
        for m in self.terms.keys() {
            let d: Q = m
                .iter()
                .zip(weights)
                .map(|(&e, w)| w * Q::from_integer(BigInt::from(e)))
                .fold(Q::zero(), |a, b| a + b);
            match &deg {
                None => deg = Some(d),
                Some(d0) if *d0 != d => return None,
                _ => {}
            }
        }
        Some(deg.unwrap_or_else(Q::zero))
    }

    /// Maximal weighted degree over the terms.
    pub fn max_weighted_degree(&self, weights: &[Q]) -> Option<Q> {
        self.terms
            .keys()
            .map(|m| {
                m.iter()
                    .zip(weights)
                    .map(|(&e, w)| w * Q::from_integer(BigInt::from(e)))
                    .fold(Q::zero(), |a, b| a + b)
            })
            .max()
    }

    /// Homogeneous components by weighted degree, ascending.
    pub fn weighted_components(&self, weights: &[Q]) -> Vec<(Q, Poly)> {
        let mut out: BTreeMap<Q, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d: Q = m
                .iter()
                .zip(weights)
                .map(|(&e, w)| w * Q::from_integer(BigInt::from(e)))
                .fold(Q::zero(), |a, b| a + b);
            out.entry(d)
                .or_insert_with(|| Poly::zero(&self.ring))
                .add_term(m.clone(), c.clone());
        }
        out.into_iter().collect()
    }

    /// Terms of total degree at most `k`.
    pub fn truncate(&self, k: u32) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mono_degree(m) <= k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn parse(text: &str, ring: &RingRef) -> Result<Poly> {
        parse_polynomial(text, ring)
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        self.try_add(o).expect("ring mismatch in +")
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self.check_ring(o).expect("ring mismatch in -");
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        self.multiply(o).expect("ring mismatch in *")
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

impl std::ops::Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl std::ops::Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl std::ops::Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl std::ops::Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Canonical text of a rational: `a` or `a/b`, sign on the numerator.
pub fn format_q(c: &Q) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn format_mono(ring: &Ring, m: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.vars[i].clone()),
            _ => parts.push(format!("{}^{}", ring.vars[i], e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms_desc().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let ms = format_mono(&self.ring, m);
            if ms.is_empty() {
                write!(f, "{}", format_q(&a))?;
            } else if a.is_one() {
                write!(f, "{ms}")?;
            } else {
                write!(f, "{}*{}", format_q(&a), ms)?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- parser

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Op(char),
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(text: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer {
            src: text.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        while lx.pos < lx.src.len() {
            let c = lx.src[lx.pos] as char;
            let start = lx.pos;
            if c.is_ascii_whitespace() {
                lx.pos += 1;
            } else if c.is_ascii_digit() {
                let a = lx.digits();
                if lx.peek() == Some('/') {
                    lx.pos += 1;
                    if !lx.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(Error::Syntax {
                            pos: lx.pos,
                            msg: "expected denominator digits after `/`".into(),
                        });
                    }
                    let b = lx.digits();
                    let b: BigInt = b.parse().unwrap();
                    if b.is_zero() {
                        return Err(Error::Syntax {
                            pos: start,
                            msg: "zero denominator".into(),
                        });
                    }
                    out.push((Tok::Num(Q::new(a.parse().unwrap(), b)), start));
                } else {
                    out.push((Tok::Num(Q::from_integer(a.parse().unwrap())), start));
                }
            } else if c.is_ascii_alphabetic() || c == '_' {
                while lx
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    lx.pos += 1;
                }
                let s = std::str::from_utf8(&lx.src[start..lx.pos]).unwrap();
                out.push((Tok::Ident(s.to_string()), start));
            } else if "+-*^()".contains(c) {
                lx.pos += 1;
                out.push((Tok::Op(c), start));
            } else {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{c}`"),
                });
            }
        }
        Ok(out)
    }

    fn peek(&self) -> Option<char> {
        self.src.get(self.pos).map(|&b| b as char)
    }

    fn digits(&mut self) -> String {
        let s = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[s..self.pos]).unwrap().to_string()
    }
}

struct Parser<'r> {
    toks: Vec<(Tok, usize)>,
    i: usize,
    end: usize,
    ring: &'r RingRef,
}

impl Parser<'_> {
    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|t| t.1).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.0)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.to_string(),
        })
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.i += 1;
            let t = self.term()?;
            acc = if c == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.i += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                    return self.err("implicit multiplication is not allowed; use `*`");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.i += 1;
                Ok(-&self.factor()?)
            }
            Some(Tok::Op('+')) => {
                self.i += 1;
                self.factor()
            }
            _ => {
                let b = self.base()?;
                if let Some(Tok::Op('^')) = self.peek() {
                    self.i += 1;
                    let e = match self.peek() {
                        Some(Tok::Num(n)) if n.is_integer() && !n.is_negative() => {
                            n.to_integer().to_u32()
                        }
                        _ => None,
                    };
                    match e {
                        Some(e) => {
                            self.i += 1;
                            Ok(b.pow(e))
                        }
                        None => self.err("expected a non-negative integer exponent"),
                    }
                } else {
                    Ok(b)
                }
            }
        }
    }

    fn base(&mut self) -> Result<Poly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.i += 1;
                Ok(Poly::constant(self.ring, n))
            }
            Some(Tok::Ident(s)) => {
                self.i += 1;
                match self.ring.var_index(&s) {
                    Some(j) => Ok(Poly::var(self.ring, j)),
                    None => Err(Error::UnknownVariable(s)),
                }
            }
            Some(Tok::Op('(')) => {
                self.i += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.i += 1;
                        Ok(e)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse the polynomial grammar: rationals `a` or `a/b`, variables, `+ - * ^`, parentheses.
pub fn parse_polynomial(text: &str, ring: &RingRef) -> Result<Poly> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser {
        toks,
        i: 0,
        end: text.len(),
        ring,
    };
    if p.toks.is_empty() {
        return p.err("empty polynomial");
    }
    let r = p.expr()?;
    if p.i != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2() -> RingRef {
        Ring::new(&["x", "y"]).unwrap()
    }

    fn p(s: &str, r: &RingRef) -> Poly {
        parse_polynomial(s, r).unwrap()
    }

    #[test]
    fn parse_examples() {
        let r = r2();
        let a = p("x^2 + 2*x*y", &r);
        assert_eq!(a.coeff(&[2, 0]), q(1));
        assert_eq!(a.coeff(&[1, 1]), q(2));
        assert_eq!(a.nterms(), 2);
        assert!(p("0", &r).is_zero());
        assert_eq!(p("(x+y)^2", &r), p("x^2 + 2*x*y + y^2", &r));
    }

    #[test]
    fn parse_errors() {
        let r = r2();
        assert!(matches!(
            parse_polynomial("2x", &r),
            Err(Error::Syntax { pos: 1, .. })
        ));
        assert_eq!(
            parse_polynomial("x + z", &r),
            Err(Error::UnknownVariable("z".into()))
        );
        assert!(matches!(
            parse_polynomial("x +", &r),
            Err(Error::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_polynomial("1/0", &r),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_polynomial("x^y", &r),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn multiply_examples() {
        let r = r2();
        assert_eq!(p("x+1", &r) * p("x-1", &r), p("x^2-1", &r));
        assert!((p("x+1", &r) * Poly::zero(&r)).is_zero());
        assert_eq!(p("1/2*x", &r) * p("2/3*y", &r), p("1/3*x*y", &r));
        let other = Ring::new(&["u"]).unwrap();
        assert!(matches!(
            p("x", &r).multiply(&Poly::var(&other, 0)),
            Err(Error::ContextMismatch(_))
        ));
    }

    #[test]
    fn derivative_examples() {
        let r = r2();
        assert_eq!(
            p("x^3 + x*y", &r).partial_derivative("x").unwrap(),
            p("3*x^2 + y", &r)
        );
        assert!(p("x^3", &r).partial_derivative("y").unwrap().is_zero());
        assert_eq!(
            p("x^2*y^2", &r).partial_derivative("x").unwrap(),
            p("2*x*y^2", &r)
        );
        assert_eq!(
            p("x", &r).partial_derivative("q"),
            Err(Error::UnknownVariable("q".into()))
        );
    }

    #[test]
    fn substitute_examples() {
        let r = Ring::new(&["x", "u", "v"]).unwrap();
        let z = Poly::zero(&r);
        assert_eq!(
            p("x^2 + u*v", &r)
                .substitute(&[("u", z.clone()), ("v", z)])
                .unwrap(),
            p("x^2", &r)
        );
        assert_eq!(
            p("x", &r).substitute(&[("x", p("x", &r))]).unwrap(),
            p("x", &r)
        );
        let r2 = r2();
        assert_eq!(
            p("x+y", &r2).substitute(&[("y", p("x", &r2))]).unwrap(),
            p("2*x", &r2)
        );
    }

    #[test]
    fn quasi_degree_examples() {
        let r = r2();
        assert_eq!(p("x^3+y^3", &r).quasi_degree(&[q(1), q(1)]), Some(q(3)));
        assert_eq!(p("x^2+y^3", &r).quasi_degree(&[q(3), q(2)]), Some(q(6)));
        assert_eq!(p("x^2+y^3", &r).quasi_degree(&[q(1), q(1)]), None);
    }

    #[test]
    fn canonical_printing() {
        let r = r2();
        assert_eq!(p("2*x*y + x^2", &r).to_string(), "x^2 + 2*x*y");
        assert_eq!(p("-1/2*x + 3/4 - y^2", &r).to_string(), "-y^2 - 1/2*x + 3/4");
        assert_eq!(p("-x", &r).to_string(), "-x");
        assert_eq!(p("0", &r).to_string(), "0");
        assert_eq!(p("-(x*y)^2", &r).to_string(), "-x^2*y^2");
    }

    #[test]
    fn degrevlex_order() {
        let o = MonomialOrder::DegRevLex;
        // x*z < y^2 in degrevlex with x > y > z
        assert_eq!(o.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        assert_eq!(o.cmp(&[2, 0, 0], &[1, 1, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 0, 3], &[1, 0, 0]), Ordering::Greater);
    }

    #[test]
    fn prime_characteristic() {
        let r = Ring::with_options(&["x"], MonomialOrder::DegRevLex, 5).unwrap();
        assert_eq!(p("3*x + 4*x", &r).to_string(), "2*x");
        assert_eq!(p("1/2", &r).to_string(), "3");
        assert!(Ring::with_options(&["x"], MonomialOrder::DegRevLex, 6).is_err());
    }
}
