use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::freealg::{Alphabet, Coeff, Word};
use crate::Q;

/// Graded projections of a noncommutative polynomial.
///
/// For two letters the x-degree counts letter 0 and the y-degree counts
/// letter 1. With more letters the "y-degree" counts every letter other
/// than letter 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    /// Words of exactly this length.
    Weight(usize),
    /// Words with x-degree `p` and y-degree `t`.
    Bidegree(usize, usize),
    /// Words with y-degree exactly `d`.
    YDegree(usize),
}

/// An element of the free associative algebra on `n` letters: a finitely
/// supported map from words to coefficients, with no zero coefficients
/// stored.
#[derive(Clone, PartialEq)]
pub struct NcPoly<C = Q> {
    n: usize,
    terms: BTreeMap<Word, C>,
}

fn ydegree(w: &Word) -> usize {
    w.letters().iter().filter(|&&l| l != 0).count()
}

impl Selector {
    pub fn matches(&self, w: &Word) -> bool {
        match *self {
            Selector::Weight(m) => w.len() == m,
            Selector::Bidegree(p, t) => {
                let y = ydegree(w);
                y == t && w.len() - y == p
            }
            Selector::YDegree(d) => ydegree(w) == d,
        }
    }
}

impl<C: Coeff> NcPoly<C> {
    pub fn zero(n: usize) -> Self {
        NcPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, Word::empty(), C::one())
    }

    /// The generator `i` (0-based).
    pub fn letter(n: usize, i: usize) -> Self {
        assert!(i < n, "letter {i} outside an alphabet of {n} letters");
        Self::monomial(n, Word::letter(i as u8), C::one())
    }

    pub fn monomial(n: usize, word: Word, coeff: C) -> Self {
        let mut p = Self::zero(n);
        p.add_term(word, coeff);
        p
    }

    /// Builds a polynomial from `(word, coeff)` pairs, summing repeats.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, C)>,
    {
        let mut p = Self::zero(n);
        for (w, c) in terms {
            if let Some(m) = w.max_letter() {
                if m as usize >= n {
                    return Err(Error::LetterOutOfRange {
                        letter: m as usize,
                        size: n,
                    });
                }
            }
            p.add_term(w, c);
        }
        Ok(p)
    }

    /// Parses a sum of words with integer coefficients, e.g. `xy - 2 yx`.
    pub fn parse_simple(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let mut p = Self::zero(alphabet.len());
        let normalized = text.replace('-', "+-");
        for part in normalized.split('+') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (sign, body) = match part.strip_prefix('-') {
                Some(b) => (-1i64, b.trim()),
                None => (1, part),
            };
            let split = body
                .find(|ch: char| !ch.is_ascii_digit())
                .unwrap_or(body.len());
            let (num, word) = body.split_at(split);
            let factor = if num.is_empty() {
                1
            } else {
                num.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad coefficient in `{part}`")))?
            };
            let word = word.trim();
            let w = if word.is_empty() {
                Word::empty()
            } else {
                alphabet.parse(word)?
            };
            p.add_term(w, C::from_i64(sign * factor));
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, C> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Word::empty())
    }

    /// Adds `coeff * word`, dropping the entry if it cancels.
    pub fn add_term(&mut self, word: Word, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(&coeff);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn sub_term(&mut self, word: Word, coeff: &C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            Entry::Vacant(e) => {
                e.insert(coeff.neg_ref());
            }
            Entry::Occupied(mut e) => {
                e.get_mut().sub_assign_ref(coeff);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_alphabet(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AlphabetMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Self, factor: &C) {
        assert_eq!(self.n, other.n, "alphabet mismatch");
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.mul_ref(factor));
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.n, other.n, "alphabet mismatch");
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        assert_eq!(self.n, other.n, "alphabet mismatch");
        for (w, c) in &other.terms {
            self.sub_term(w.clone(), c);
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_alphabet(other)?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_alphabet(other)?;
        let mut out = self.clone();
        out.sub_assign(other);
        Ok(out)
    }

    /// Concatenation product.
    pub fn nc_mul(&self, other: &Self) -> Result<Self> {
        self.check_alphabet(other)?;
        let mut out = Self::zero(self.n);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1.mul_ref(c2));
            }
        }
        Ok(out)
    }

    /// The commutator `ab - ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_alphabet(other)?;
        let mut out = Self::zero(self.n);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let c = c1.mul_ref(c2);
                out.sub_term(w2.concat(w1), &c);
                out.add_term(w1.concat(w2), c);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &C) -> Self {
        if factor.is_zero() {
            return Self::zero(self.n);
        }
        NcPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c.mul_ref(factor)))
                .collect(),
        }
    }

    pub fn scale_i64(&self, factor: i64) -> Self {
        self.scale(&C::from_i64(factor))
    }

    /// The right-factor derivative: words ending in letter `k`, with that
    /// last letter removed. Every `a` satisfies
    /// `a = a_0 + sum_k partial(a, k) * x_k`.
    pub fn partial(&self, k: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            if w.last() == Some(k as u8) {
                let letters = w.letters();
                out.terms
                    .insert(Word::from_letters(&letters[..letters.len() - 1]), c.clone());
            }
        }
        out
    }

    pub fn component(&self, selector: Selector) -> Self {
        NcPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| selector.matches(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous components keyed by weight.
    pub fn weight_components(&self) -> BTreeMap<usize, Self> {
        let mut out: BTreeMap<usize, Self> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.len())
                .or_insert_with(|| Self::zero(self.n))
                .terms
                .insert(w.clone(), c.clone());
        }
        out
    }

    pub fn weights(&self) -> Vec<usize> {
        self.weight_components().into_keys().collect()
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    pub fn min_weight(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.weights().len() <= 1
    }

    /// Minimal y-degree over all words; `None` for zero.
    pub fn depth(&self) -> Option<usize> {
        self.terms.keys().map(ydegree).min()
    }

    /// Rejects polynomials with words longer than `cap`.
    pub fn check_cap(&self, cap: usize) -> Result<()> {
        match self.max_weight() {
            Some(w) if w > cap => Err(Error::WeightCapExceeded { weight: w, cap }),
            _ => Ok(()),
        }
    }

    /// The algebra homomorphism sending letter `i` to `images[i]`.
    ///
    /// Images live in a common alphabet, possibly different from ours, and
    /// must have zero constant term so the grading is respected. Words are
    /// visited in sorted order and shared prefixes reuse their products.
    pub fn substitute(&self, images: &[NcPoly<C>]) -> Result<NcPoly<C>> {
        if images.len() != self.n {
            return Err(Error::ImageCount {
                expected: self.n,
                got: images.len(),
            });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let m = first.n;
        for (i, img) in images.iter().enumerate() {
            if img.n != m {
                return Err(Error::AlphabetMismatch {
                    left: m,
                    right: img.n,
                });
            }
            if !img.constant_term().is_zero() {
                return Err(Error::ConstantImage { letter: i });
            }
        }
        let mut out = NcPoly::zero(m);
        let mut prefix: Vec<u8> = Vec::new();
        let mut stack: Vec<NcPoly<C>> = vec![NcPoly::one(m)];
        for (w, c) in &self.terms {
            let letters = w.letters();
            let common = prefix
                .iter()
                .zip(letters)
                .take_while(|(a, b)| a == b)
                .count();
            prefix.truncate(common);
            stack.truncate(common + 1);
            for &l in &letters[common..] {
                let next = stack
                    .last()
                    .unwrap()
                    .nc_mul(&images[l as usize])
                    .expect("images share an alphabet");
                stack.push(next);
                prefix.push(l);
            }
            out.add_scaled(stack.last().unwrap(), c);
        }
        Ok(out)
    }

    /// Renames letters: letter `i` becomes `map[i]` in an alphabet of size `n`.
    pub fn relabel(&self, map: &[u8], n: usize) -> Self {
        let mut out = Self::zero(n);
        for (w, c) in &self.terms {
            out.add_term(w.relabel(map), c.clone());
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> NcPoly<D> {
        let mut out = NcPoly::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    pub fn to_rational(&self) -> NcPoly<Q> {
        self.map_coeffs(|c| c.to_rational())
    }

    /// Human-readable form over an alphabet, e.g. `xy - yx`.
    pub fn display_with(&self, alphabet: &Alphabet) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let word = alphabet.format(w);
            if w.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&word);
            } else {
                out.push_str(&format!("{mag} {word}"));
            }
        }
        out
    }
}

/// Free function form of the concatenation product.
pub fn nc_mul<C: Coeff>(a: &NcPoly<C>, b: &NcPoly<C>) -> Result<NcPoly<C>> {
    a.nc_mul(b)
}

/// Free function form of substitution.
pub fn nc_substitute<C: Coeff>(a: &NcPoly<C>, images: &[NcPoly<C>]) -> Result<NcPoly<C>> {
    a.substitute(images)
}

impl<C: Coeff> fmt::Debug for NcPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&Alphabet::standard(self.n)))
    }
}

impl<C: Coeff> fmt::Display for NcPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&Alphabet::standard(self.n)))
    }
}

// Operator forms panic on alphabet mismatch; use the checked methods when
// the alphabets are not known to agree.
impl<C: Coeff> Add for &NcPoly<C> {
    type Output = NcPoly<C>;
    fn add(self, rhs: &NcPoly<C>) -> NcPoly<C> {
        self.checked_add(rhs).expect("alphabet mismatch")
    }
}

impl<C: Coeff> Sub for &NcPoly<C> {
    type Output = NcPoly<C>;
    fn sub(self, rhs: &NcPoly<C>) -> NcPoly<C> {
        self.checked_sub(rhs).expect("alphabet mismatch")
    }
}

impl<C: Coeff> Mul for &NcPoly<C> {
    type Output = NcPoly<C>;
    fn mul(self, rhs: &NcPoly<C>) -> NcPoly<C> {
        self.nc_mul(rhs).expect("alphabet mismatch")
    }
}

impl<C: Coeff> Neg for &NcPoly<C> {
    type Output = NcPoly<C>;
    fn neg(self) -> NcPoly<C> {
        NcPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c.neg_ref()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> NcPoly {
        NcPoly::parse_simple(&Alphabet::xy(), text).unwrap()
    }

    #[test]
    fn products() {
        assert_eq!(&p("x") * &p("y"), p("xy"));
        assert_eq!(&p("x + y") * &p("x - y"), p("xx - xy + yx - yy"));
        let s = p("x + y");
        let fourth = &(&s * &s) * &(&s * &s);
        assert_eq!(fourth.len(), 16);
        assert!(fourth.terms().all(|(_, c)| *c == Q::from_integer(1.into())));
        assert!(matches!(
            p("x").nc_mul(&NcPoly::letter(3, 0)),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn right_partials() {
        assert_eq!(p("xy").partial(1), p("x"));
        assert!(p("xy").partial(0).is_zero());
        assert_eq!(p("xyx").partial(0), p("xy"));
        // [x,[x,y]] = xxy - 2xyx + yxx
        let b = p("xxy - 2xyx + yxx");
        assert_eq!(b.partial(1), p("xx"));
        assert_eq!(b.partial(0), p("-2xy + yx"));
    }

    #[test]
    fn substitution_examples() {
        let images = [p("x"), p("-x - y")];
        assert_eq!(p("xy").substitute(&images).unwrap(), p("-xx - xy"));
        assert_eq!(
            p("x").substitute(&[p("-x - y"), p("y")]).unwrap(),
            p("-x - y")
        );
        assert_eq!(
            p("x").substitute(&[p("1 + x"), p("y")]),
            Err(Error::ConstantImage { letter: 0 })
        );
    }

    #[test]
    fn components() {
        let a = p("xxy + xyy");
        assert_eq!(a.component(Selector::Bidegree(2, 1)), p("xxy"));
        assert_eq!(a.component(Selector::YDegree(2)), p("xyy"));
        assert_eq!(a.depth(), Some(1));
        let b = p("x + xy + yxy");
        let mut sum = NcPoly::zero(2);
        for m in 0..=3 {
            sum.add_assign(&b.component(Selector::Weight(m)));
        }
        assert_eq!(sum, b);
    }

    #[test]
    fn display_and_parse_agree() {
        let a = p("xx - 2 xy + 3 yx");
        assert_eq!(a.display_with(&Alphabet::xy()), "xx - 2 xy + 3 yx");
        assert_eq!(p(&a.to_string()), a);
    }
}
