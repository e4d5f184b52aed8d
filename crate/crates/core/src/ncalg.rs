//! Noncommutative polynomials over matric and free generators.
//!
//! Words are ordered degree-lexicographically: shorter words first, equal
//! lengths compared letter by letter by generator rank. Generator rank puts
//! the families in the order `u < s < a < v < free`, then orders matric
//! generators row-major by `(row, col)` and free generators by name.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactnum::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    U,
    S,
    A,
    V,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::U => 'u',
            Family::S => 's',
            Family::A => 'a',
            Family::V => 'v',
        }
    }

    fn from_name(name: &str) -> Option<Family> {
        match name {
            "u" => Some(Family::U),
            "s" => Some(Family::S),
            "a" => Some(Family::A),
            "v" => Some(Family::V),
            _ => None,
        }
    }
}

/// `Matric { family, row: μ, col: ν }` stands for `family^μ_ν`; indices are
/// 1-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Matric { family: Family, row: u16, col: u16 },
    Free(Arc<str>),
}

impl Generator {
    pub fn matric(family: Family, row: usize, col: usize) -> Generator {
        Generator::Matric {
            family,
            row: row as u16,
            col: col as u16,
        }
    }

    pub fn u(row: usize, col: usize) -> Generator {
        Generator::matric(Family::U, row, col)
    }

    pub fn s(row: usize, col: usize) -> Generator {
        Generator::matric(Family::S, row, col)
    }

    pub fn a(row: usize, col: usize) -> Generator {
        Generator::matric(Family::A, row, col)
    }

    pub fn v(row: usize, col: usize) -> Generator {
        Generator::matric(Family::V, row, col)
    }

    pub fn free(name: &str) -> Generator {
        Generator::Free(Arc::from(name))
    }

    pub fn family(&self) -> Option<Family> {
        match self {
            Generator::Matric { family, .. } => Some(*family),
            Generator::Free(_) => None,
        }
    }

    /// The full `n × n` block of a matric family, row-major.
    pub fn matric_block(family: Family, n: usize) -> Vec<Generator> {
        let mut out = Vec::with_capacity(n * n);
        for r in 1..=n {
            for c in 1..=n {
                out.push(Generator::matric(family, r, c));
            }
        }
        out
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Matric { family, row, col } => {
                write!(f, "{}[{},{}]", family.letter(), row, col)
            }
            Generator::Free(name) => write!(f, "{name}"),
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Generator> {
        let mut p = Parser::new(s);
        let g = p.generator()?;
        p.skip_ws();
        if !p.at_end() {
            return Err(p.error("trailing input after generator"));
        }
        Ok(g)
    }
}

/// A monomial; the empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn one() -> Word {
        Word(Vec::new())
    }

    pub fn letter(g: Generator) -> Word {
        Word(vec![g])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().cloned().collect())
    }
}

impl FromIterator<Generator> for Word {
    fn from_iter<I: IntoIterator<Item = Generator>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

/// Degree first, then lexicographic by generator rank.
pub fn deglex_compare(a: &Word, b: &Word) -> Ordering {
    a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0))
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        deglex_compare(self, other)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A noncommutative polynomial with exact coefficients and no stored zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct NcPoly {
    terms: BTreeMap<Word, Scalar>,
}

impl NcPoly {
    pub fn zero() -> NcPoly {
        NcPoly::default()
    }

    pub fn one() -> NcPoly {
        NcPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> NcPoly {
        NcPoly::term(Word::one(), c)
    }

    pub fn term(w: Word, c: Scalar) -> NcPoly {
        let mut p = NcPoly::zero();
        p.add_term(w, &c);
        p
    }

    pub fn word(w: Word) -> NcPoly {
        NcPoly::term(w, Scalar::one())
    }

    pub fn generator(g: Generator) -> NcPoly {
        NcPoly::word(Word::letter(g))
    }

    /// Product of generators with coefficient 1.
    pub fn monomial<I: IntoIterator<Item = Generator>>(gens: I) -> NcPoly {
        NcPoly::word(gens.into_iter().collect())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing deglex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Largest word and its coefficient.
    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Maximal word length; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &NcPoly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, v) in &other.terms {
            self.add_term(w.clone(), &(v * c));
        }
    }

    pub fn scale(&self, c: &Scalar) -> NcPoly {
        let mut out = NcPoly::zero();
        out.add_scaled(self, c);
        out
    }

    /// Generators occurring in the polynomial.
    pub fn generators(&self) -> BTreeSet<Generator> {
        self.terms
            .keys()
            .flat_map(|w| w.0.iter().cloned())
            .collect()
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> NcPoly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip().expect("nonzero")),
            None => NcPoly::zero(),
        }
    }

    /// Extends `images` to an algebra homomorphism, or to an
    /// antihomomorphism (letters read right to left) when `antihom` is set.
    pub fn substitute(
        &self,
        images: &BTreeMap<Generator, NcPoly>,
        antihom: bool,
    ) -> Result<NcPoly> {
        let mut out = NcPoly::zero();
        let mut cache: BTreeMap<Word, NcPoly> = BTreeMap::new();
        for (w, c) in &self.terms {
            let mut acc = NcPoly::one();
            let letters: Box<dyn Iterator<Item = &Generator>> = if antihom {
                Box::new(w.0.iter().rev())
            } else {
                Box::new(w.0.iter())
            };
            let mut prefix = Vec::new();
            for g in letters {
                prefix.push(g.clone());
                let key = Word(prefix.clone());
                if let Some(hit) = cache.get(&key) {
                    acc = hit.clone();
                    continue;
                }
                let img = images
                    .get(g)
                    .ok_or_else(|| Error::MissingImage(g.to_string()))?;
                acc = &acc * img;
                cache.insert(key, acc.clone());
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }

    /// Multiplicative extension of generator images into `A ⊗ A`.
    pub fn coproduct_image(
        &self,
        images: &BTreeMap<Generator, TensorSquareElement>,
    ) -> Result<TensorSquareElement> {
        let mut out = TensorSquareElement::zero();
        for (w, c) in &self.terms {
            let mut acc = TensorSquareElement::one();
            for g in &w.0 {
                let img = images
                    .get(g)
                    .ok_or_else(|| Error::MissingImage(g.to_string()))?;
                acc = acc.mul(img);
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }

    /// Multiplicative extension of scalar generator images (a character).
    pub fn evaluate(&self, images: &BTreeMap<Generator, Scalar>) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for (w, c) in &self.terms {
            let mut acc = c.clone();
            for g in &w.0 {
                let img = images
                    .get(g)
                    .ok_or_else(|| Error::MissingImage(g.to_string()))?;
                if img.is_zero() {
                    acc = Scalar::zero();
                    break;
                }
                acc *= img;
            }
            total += &acc;
        }
        Ok(total)
    }
}

impl Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::from_int(-1));
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        self.scale(&Scalar::from_int(-1))
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.concat(b), &(x * y));
            }
        }
        out
    }
}

impl Add for NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: NcPoly) -> NcPoly {
        &self + &rhs
    }
}

impl Sub for NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: NcPoly) -> NcPoly {
        &self - &rhs
    }
}

impl Mul for NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: NcPoly) -> NcPoly {
        &self * &rhs
    }
}

impl fmt::Display for NcPoly {
    /// Canonical syntax, leading term first: `u[1,2]*s[2,1]-2*u[1,1]+1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            if w.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for NcPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<NcPoly> {
        Parser::new(s).polynomial()
    }
}

/// Element of the free algebra's tensor square, as a combination of word
/// pairs.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TensorSquareElement {
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl TensorSquareElement {
    pub fn zero() -> Self {
        TensorSquareElement::default()
    }

    /// `1 ⊗ 1`.
    pub fn one() -> Self {
        let mut t = TensorSquareElement::zero();
        t.add_term(Word::one(), Word::one(), &Scalar::one());
        t
    }

    pub fn simple(left: Word, right: Word) -> Self {
        let mut t = TensorSquareElement::zero();
        t.add_term(left, right, &Scalar::one());
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Word, &Scalar)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn add_term(&mut self, left: Word, right: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((left, right)) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TensorSquareElement, c: &Scalar) {
        for ((a, b), v) in &other.terms {
            self.add_term(a.clone(), b.clone(), &(v * c));
        }
    }

    /// `(a⊗b)(c⊗d) = ac ⊗ bd`.
    pub fn mul(&self, rhs: &TensorSquareElement) -> TensorSquareElement {
        let mut out = TensorSquareElement::zero();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &rhs.terms {
                out.add_term(a.concat(c), b.concat(d), &(x * y));
            }
        }
        out
    }

    /// Applies a linear map to each tensor factor and recollects.
    pub fn map_factors<F>(&self, mut f: F) -> Result<TensorSquareElement>
    where
        F: FnMut(&Word) -> Result<NcPoly>,
    {
        let mut cache: BTreeMap<Word, NcPoly> = BTreeMap::new();
        let mut image = |w: &Word| -> Result<NcPoly> {
            if let Some(p) = cache.get(w) {
                return Ok(p.clone());
            }
            let p = f(w)?;
            cache.insert(w.clone(), p.clone());
            Ok(p)
        };
        let mut out = TensorSquareElement::zero();
        for ((a, b), c) in &self.terms {
            let pa = image(a)?;
            let pb = image(b)?;
            for (wa, ca) in pa.terms() {
                for (wb, cb) in pb.terms() {
                    out.add_term(wa.clone(), wb.clone(), &(c * &(ca * cb)));
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TensorSquareElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((a, b), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if !c.is_one() {
                write!(f, "({c})*")?;
            }
            write!(f, "{a} (x) {b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TensorSquareElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at column {} in {:?}",
            self.pos + 1,
            self.src
        ))
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while<F: Fn(char) -> bool>(&mut self, f: F) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if f(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let d = self.take_while(|c| c.is_ascii_digit());
        d.parse().map_err(|_| self.error("expected an integer"))
    }

    fn generator(&mut self) -> Result<Generator> {
        self.skip_ws();
        let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        if name.is_empty() || name.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(self.error("expected a generator"));
        }
        if let Some(family) = Family::from_name(name) {
            let save = self.pos;
            if self.eat('[') {
                let row = self.integer()?;
                if !self.eat(',') {
                    return Err(self.error("expected ','"));
                }
                let col = self.integer()?;
                if !self.eat(']') {
                    return Err(self.error("expected ']'"));
                }
                if row == 0 || col == 0 {
                    return Err(self.error("indices are 1-based"));
                }
                return Ok(Generator::matric(family, row, col));
            }
            self.pos = save;
        }
        Ok(Generator::free(name))
    }

    fn factor(&mut self) -> Result<NcPoly> {
        self.skip_ws();
        let base = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                self.take_while(|c| c.is_ascii_digit());
                let save = self.pos;
                if self.eat('/') {
                    self.skip_ws();
                    if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        self.take_while(|c| c.is_ascii_digit());
                    } else {
                        self.pos = save;
                    }
                }
                let lit: String = self.src[start..self.pos]
                    .chars()
                    .filter(|c| !c.is_whitespace())
                    .collect();
                NcPoly::constant(lit.parse()?)
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                inner
            }
            _ => NcPoly::generator(self.generator()?),
        };
        if self.eat('^') {
            let k = self.integer()?;
            let mut acc = NcPoly::one();
            for _ in 0..k {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn product(&mut self) -> Result<NcPoly> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn sum(&mut self) -> Result<NcPoly> {
        let mut acc = NcPoly::zero();
        let mut sign = Scalar::one();
        if self.eat('-') {
            sign = Scalar::from_int(-1);
        } else {
            self.eat('+');
        }
        loop {
            let t = self.product()?;
            acc.add_scaled(&t, &sign);
            if self.eat('+') {
                sign = Scalar::one();
            } else if self.eat('-') {
                sign = Scalar::from_int(-1);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn polynomial(&mut self) -> Result<NcPoly> {
        let p = self.sum()?;
        self.skip_ws();
        if !self.at_end() {
            return Err(self.error("unexpected input"));
        }
        Ok(p)
    }
}
