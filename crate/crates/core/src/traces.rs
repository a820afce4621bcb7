//! Cyclic trace quotients `tr`, the signed `str` and the q-twisted `qtr`.
//!
//! The relation `x_i a = q a x_i` says that moving the first letter of a
//! word to the end multiplies its class by `q`. Each class is stored at its
//! lexicographically minimal rotation.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{cyclotomic_field, CyclotomicField, Scalar};
use crate::freealg::{Alphabet, NcPoly, Selector, Word};
use crate::tder::{tder_apply, TDer};
use crate::Q;

/// Canonical representative of the class of `w` in the order-`l` quotient:
/// `Some((w_min, r))` with `w = q^r w_min`, or `None` when the class is zero.
///
/// `r` is the smallest shift with `rotate_left(w, r) = w_min`. A word of
/// minimal period `p` satisfies `w = q^p w`, so it vanishes unless `l | p`.
pub fn canonical_class(w: &Word, l: u32) -> Option<(Word, usize)> {
    let m = w.len();
    if m == 0 {
        return Some((w.clone(), 0));
    }
    let letters = w.letters();
    let rotation = |r: usize| letters[r..].iter().chain(&letters[..r]);
    let mut best = 0;
    let mut period = m;
    for r in 1..m {
        if rotation(r).eq(rotation(0)) {
            period = r;
            break;
        }
        if rotation(r).lt(rotation(best)) {
            best = r;
        }
    }
    if !period.is_multiple_of(l as usize) {
        return None;
    }
    Some((w.rotate_left(best), best))
}

/// An element of `tr_n` (`l = 1`), `str_n` (`l = 2`) or `qtr_n`.
#[derive(Clone, PartialEq)]
pub struct TraceElem {
    n: usize,
    field: Arc<CyclotomicField>,
    terms: BTreeMap<Word, Scalar>,
}

/// Serialized form of one class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceTermJson {
    pub class: String,
    pub coeff: String,
    pub l: u32,
}

impl TraceElem {
    pub fn zero(n: usize, l: u32) -> Result<Self> {
        Ok(TraceElem {
            n,
            field: cyclotomic_field(l)?,
            terms: BTreeMap::new(),
        })
    }

    pub fn zero_in(n: usize, field: &Arc<CyclotomicField>) -> Self {
        TraceElem {
            n,
            field: Arc::clone(field),
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    /// Canonical classes and their coefficients, in word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
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

    /// Coefficient of a canonical class word; zero for other words.
    pub fn coeff(&self, class: &Word) -> Scalar {
        self.terms
            .get(class)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(&self.field))
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        let l = self.order();
        if l > 1 {
            if w.is_empty() {
                return Err(Error::NonzeroConstant);
            }
            if !w.len().is_multiple_of(l as usize) {
                return Err(Error::LengthNotDivisible {
                    length: w.len(),
                    order: l,
                });
            }
        }
        Ok(())
    }

    fn add_class(&mut self, class: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(class) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().checked_add(&c).expect("one field");
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Adds `c` times the class of the word `w`.
    pub fn add_word(&mut self, w: &Word, c: &Scalar) -> Result<()> {
        if c.field() != &self.field {
            return Err(Error::FieldMismatch {
                left: self.order(),
                right: c.order(),
            });
        }
        self.check_word(w)?;
        if let Some((class, r)) = canonical_class(w, self.order()) {
            let phase = Scalar::root_power(&self.field, r as i64);
            self.add_class(class, c.checked_mul(&phase)?);
        }
        Ok(())
    }

    /// Adds the projection of `a`, scaled by `c`.
    pub fn add_poly(&mut self, a: &NcPoly, c: &Scalar) -> Result<()> {
        if a.n() != self.n {
            return Err(Error::AlphabetMismatch {
                left: self.n,
                right: a.n(),
            });
        }
        for (w, coeff) in a.terms() {
            self.add_word(w, &c.scale(coeff))?;
        }
        Ok(())
    }

    fn check_compatible(&self, other: &TraceElem) -> Result<()> {
        if self.field != other.field {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        if self.n != other.n {
            return Err(Error::AlphabetMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &TraceElem) -> Result<TraceElem> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_class(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &TraceElem) -> Result<TraceElem> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_class(w.clone(), -c);
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Scalar) -> Result<TraceElem> {
        let mut out = TraceElem::zero_in(self.n, &self.field);
        for (w, c) in &self.terms {
            out.add_class(w.clone(), c.checked_mul(factor)?);
        }
        Ok(out)
    }

    pub fn scale_rational(&self, factor: &Q) -> TraceElem {
        let mut out = TraceElem::zero_in(self.n, &self.field);
        for (w, c) in &self.terms {
            out.add_class(w.clone(), c.scale(factor));
        }
        out
    }

    /// Graded projection; rotation preserves letter counts, so classes
    /// have well-defined weight and bidegree.
    pub fn component(&self, selector: Selector) -> TraceElem {
        TraceElem {
            n: self.n,
            field: Arc::clone(&self.field),
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| selector.matches(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// A polynomial whose projection is `self`, when all coefficients are
    /// rational.
    pub fn rational_lift(&self) -> Option<NcPoly> {
        let mut p = NcPoly::zero(self.n);
        for (w, c) in &self.terms {
            p.add_term(w.clone(), c.as_rational()?.clone());
        }
        Some(p)
    }

    pub fn to_json_terms(&self, alphabet: &Alphabet) -> Vec<TraceTermJson> {
        self.terms
            .iter()
            .map(|(w, c)| TraceTermJson {
                class: alphabet.format(w),
                coeff: c.to_string(),
                l: self.order(),
            })
            .collect()
    }

    pub fn display_with(&self, alphabet: &Alphabet) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let name = match self.order() {
            1 => "tr",
            2 => "str",
            _ => "qtr",
        };
        self.terms
            .iter()
            .map(|(w, c)| format!("({c}) {name}({})", alphabet.format(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for TraceElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&Alphabet::standard(self.n)))
    }
}

/// The natural projection of `a` to the order-`l` trace quotient.
pub fn qtr_project(a: &NcPoly, l: u32) -> Result<TraceElem> {
    let mut t = TraceElem::zero(a.n(), l)?;
    let one = Scalar::one(t.field());
    t.add_poly(a, &one)?;
    Ok(t)
}

/// Errors unless every weight of every component is divisible by `l`.
pub fn check_tder_order(u: &TDer, l: u32) -> Result<()> {
    if l <= 1 {
        return Ok(());
    }
    for a in u.components() {
        for m in a.body().weights() {
            if m % l as usize != 0 {
                return Err(Error::WeightNotDivisible {
                    weight: m,
                    order: l,
                });
            }
        }
    }
    Ok(())
}

/// The action of a tangential derivation on traces: lift, apply, project.
pub fn trace_act(u: &TDer, t: &TraceElem) -> Result<TraceElem> {
    check_tder_order(u, t.order())?;
    if u.n() != t.n() {
        return Err(Error::AlphabetMismatch {
            left: u.n(),
            right: t.n(),
        });
    }
    let mut out = TraceElem::zero_in(t.n(), t.field());
    for (w, c) in t.terms() {
        let image = tder_apply(
            u,
            &NcPoly::monomial(t.n(), w.clone(), Q::from_integer(1.into())),
        )?;
        out.add_poly(&image, c)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieElem;

    fn p(text: &str) -> NcPoly {
        NcPoly::parse_simple(&Alphabet::xy(), text).unwrap()
    }

    fn w(text: &str) -> Word {
        Alphabet::xy().parse(text).unwrap()
    }

    #[test]
    fn signed_trace_example() {
        let t = qtr_project(&p("xyyx"), 2).unwrap();
        let f = t.field().clone();
        assert_eq!(t.len(), 1);
        assert_eq!(t.coeff(&w("xxyy")), Scalar::from_i64(&f, -1));
    }

    #[test]
    fn cube_root_example() {
        let t = qtr_project(&p("xyx"), 3).unwrap();
        let q = Scalar::generator(t.field());
        assert_eq!(t.coeff(&w("xxy")), q.pow(2).unwrap());
        let lhs = qtr_project(&p("xxy"), 3).unwrap();
        assert_eq!(lhs, qtr_project(&p("xyx"), 3).unwrap().scale(&q).unwrap());
    }

    #[test]
    fn periodic_words() {
        assert!(qtr_project(&p("xyxy"), 4).unwrap().is_zero());
        assert!(!qtr_project(&p("xyxy"), 2).unwrap().is_zero());
        assert!(!qtr_project(&p("xyxy"), 1).unwrap().is_zero());
        // xy - yx vanishes in the ordinary trace
        assert!(qtr_project(&p("xy - yx"), 1).unwrap().is_zero());
    }

    #[test]
    fn bad_lengths() {
        assert_eq!(
            qtr_project(&p("xyx"), 2),
            Err(Error::LengthNotDivisible {
                length: 3,
                order: 2
            })
        );
    }

    #[test]
    fn swap_derivation_kills_tr_xy() {
        let u = TDer::new(vec![LieElem::y(), LieElem::x()]).unwrap();
        let t = qtr_project(&p("xy"), 1).unwrap();
        assert!(trace_act(&u, &t).unwrap().is_zero());
    }

    #[test]
    fn str_weight_four() {
        // The six classes listed as spanning; x^4 and y^4 are killed by
        // x * x^3 = -x^3 * x, so the space has dimension 4.
        let listed = ["xxxx", "xxxy", "xxyy", "xyxy", "xyyy", "yyyy"];
        let nonzero: Vec<_> = listed
            .iter()
            .filter(|s| !qtr_project(&p(s), 2).unwrap().is_zero())
            .collect();
        assert_eq!(nonzero, [&"xxxy", &"xxyy", &"xyxy", &"xyyy"]);
        let s = |t: &str| qtr_project(&p(t), 2).unwrap();
        assert_eq!(s("xxxy"), s("-yxxx"));
        assert_eq!(s("xxxy"), s("-xxyx"));
        assert_eq!(s("xxxy"), s("xyxx"));
        assert_eq!(s("xxyy"), s("-xyyx"));
        assert_eq!(s("xxyy"), s("yyxx"));
        assert_eq!(s("xyxy"), s("-yxyx"));
        assert_eq!(s("xyyy"), s("yyxy"));
        let mut classes = std::collections::BTreeSet::new();
        for bits in 0..16u8 {
            let word = Word::from_letters(&(0..4).map(|i| (bits >> i) & 1).collect::<Vec<_>>());
            if let Some((c, _)) = canonical_class(&word, 2) {
                classes.insert(c);
            }
        }
        assert_eq!(classes.len(), 4);
    }
}
