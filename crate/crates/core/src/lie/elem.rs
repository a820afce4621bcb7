use std::fmt;

use crate::error::{Error, Result};
use crate::freealg::{Coeff, NcPoly, Selector, Word};
use crate::Q;

/// Weight up to which debug builds re-run the Dynkin check after a
/// substitution.
const DEBUG_RECHECK_WEIGHT: usize = 8;

/// An element of the free Lie algebra, stored as its expansion in the free
/// associative algebra.
///
/// Equality compares values only, not whether the element was certified.
#[derive(Clone)]
pub struct LieElem {
    body: NcPoly,
    certified: bool,
}

impl PartialEq for LieElem {
    fn eq(&self, other: &Self) -> bool {
        self.body == other.body
    }
}

impl Eq for LieElem {}

impl LieElem {
    /// Wraps `body` after checking every weight component with the Dynkin
    /// criterion.
    pub fn new(body: NcPoly) -> Result<Self> {
        if let Some(weight) = first_non_lie_weight(&body) {
            return Err(Error::NotLie { weight });
        }
        Ok(LieElem {
            body,
            certified: true,
        })
    }

    /// Wraps `body` without checking; `certify` runs the check later.
    pub fn unchecked(body: NcPoly) -> Self {
        LieElem {
            body,
            certified: false,
        }
    }

    /// Wraps a body that is Lie because of how it was built, e.g. a
    /// bracket or substitution of certified elements.
    pub(crate) fn by_construction(body: NcPoly) -> Self {
        LieElem {
            body,
            certified: true,
        }
    }

    pub fn zero(n: usize) -> Self {
        LieElem {
            body: NcPoly::zero(n),
            certified: true,
        }
    }

    pub fn generator(n: usize, i: usize) -> Self {
        LieElem {
            body: NcPoly::letter(n, i),
            certified: true,
        }
    }

    /// `x` in the two-letter alphabet.
    pub fn x() -> Self {
        Self::generator(2, 0)
    }

    /// `y` in the two-letter alphabet.
    pub fn y() -> Self {
        Self::generator(2, 1)
    }

    pub fn body(&self) -> &NcPoly {
        &self.body
    }

    pub fn into_body(self) -> NcPoly {
        self.body
    }

    pub fn n(&self) -> usize {
        self.body.n()
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// True when the Dynkin check has passed on this value or on all inputs
    /// it was built from.
    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Runs the Dynkin check if it has not already passed.
    pub fn certify(mut self) -> Result<Self> {
        if !self.certified {
            if let Some(weight) = first_non_lie_weight(&self.body) {
                return Err(Error::NotLie { weight });
            }
            self.certified = true;
        }
        Ok(self)
    }

    pub fn component(&self, selector: Selector) -> LieElem {
        // Weight projections of a Lie element are Lie. Bidegree and depth
        // projections are too, since the Lie algebra is multigraded.
        LieElem {
            body: self.body.component(selector),
            certified: self.certified,
        }
    }

    pub fn weight_components(&self) -> Vec<(usize, LieElem)> {
        self.body
            .weight_components()
            .into_iter()
            .map(|(m, body)| {
                (
                    m,
                    LieElem {
                        body,
                        certified: self.certified,
                    },
                )
            })
            .collect()
    }

    pub fn depth(&self) -> Option<usize> {
        self.body.depth()
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.body.max_weight()
    }

    pub fn checked_add(&self, other: &LieElem) -> Result<LieElem> {
        Ok(LieElem {
            body: self.body.checked_add(&other.body)?,
            certified: self.certified && other.certified,
        })
    }

    pub fn checked_sub(&self, other: &LieElem) -> Result<LieElem> {
        Ok(LieElem {
            body: self.body.checked_sub(&other.body)?,
            certified: self.certified && other.certified,
        })
    }

    pub fn scale(&self, factor: &Q) -> LieElem {
        LieElem {
            body: self.body.scale(factor),
            certified: self.certified,
        }
    }

    pub fn scale_i64(&self, factor: i64) -> LieElem {
        self.scale(&Q::from_integer(factor.into()))
    }

    pub fn neg(&self) -> LieElem {
        self.scale_i64(-1)
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &LieElem, factor: &Q) {
        self.body.add_scaled(&other.body, factor);
        self.certified &= other.certified;
    }

    /// Linear combination `sum c_i e_i` of Lie elements in one alphabet.
    pub fn combination<'a>(n: usize, terms: impl IntoIterator<Item = (Q, &'a LieElem)>) -> LieElem {
        let mut out = LieElem::zero(n);
        for (c, e) in terms {
            out.add_scaled(e, &c);
        }
        out
    }
}

impl fmt::Debug for LieElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lie({:?})", self.body)
    }
}

impl fmt::Display for LieElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.body)
    }
}

/// `[a, b] = ab - ba`.
pub fn bracket(a: &LieElem, b: &LieElem) -> Result<LieElem> {
    Ok(LieElem {
        body: a.body.commutator(&b.body)?,
        certified: a.certified && b.certified,
    })
}

/// `ad_a^k b = [a, [a, ... [a, b]]]`.
pub fn ad(a: &LieElem, k: usize, b: &LieElem) -> Result<LieElem> {
    let mut out = b.clone();
    for _ in 0..k {
        out = bracket(a, &out)?;
    }
    Ok(out)
}

/// `ad_x^k y` in the two-letter alphabet.
pub fn ad_power(k: usize) -> LieElem {
    ad(&LieElem::x(), k, &LieElem::y()).expect("same alphabet")
}

/// The Dynkin map: a word `g1 g2 ... gm` goes to the left-nested bracket
/// `[[...[g1, g2], ...], gm]`.
pub fn dynkin<C: Coeff>(a: &NcPoly<C>) -> Result<NcPoly<C>> {
    if !a.constant_term().is_zero() {
        return Err(Error::NonzeroConstant);
    }
    let n = a.n();
    let mut out = NcPoly::zero(n);
    let mut prefix: Vec<u8> = Vec::new();
    // stack[k] is the left-nested bracket of the first k+1 letters.
    let mut stack: Vec<NcPoly<C>> = Vec::new();
    for (w, c) in a.terms() {
        let letters = w.letters();
        let common = prefix
            .iter()
            .zip(letters)
            .take_while(|(p, q)| p == q)
            .count();
        prefix.truncate(common);
        stack.truncate(common);
        for &l in &letters[common..] {
            let g = NcPoly::monomial(n, Word::letter(l), C::one());
            let next = match stack.last() {
                None => g,
                Some(prev) => prev.commutator(&g)?,
            };
            stack.push(next);
            prefix.push(l);
        }
        out.add_scaled(stack.last().expect("nonempty word"), c);
    }
    Ok(out)
}

fn first_non_lie_weight<C: Coeff>(a: &NcPoly<C>) -> Option<usize> {
    if !a.constant_term().is_zero() {
        return Some(0);
    }
    for (m, p) in a.weight_components() {
        let d = dynkin(&p).expect("no constant term");
        if d != p.scale(&C::from_i64(m as i64)) {
            return Some(m);
        }
    }
    None
}

/// Dynkin-Specht-Wever test: each weight-`m` component `p` satisfies
/// `dynkin(p) = m p`. A nonzero constant term is never Lie.
pub fn is_lie<C: Coeff>(a: &NcPoly<C>) -> bool {
    first_non_lie_weight(a).is_none()
}

/// Substitutes Lie elements for the generators of `psi`.
pub fn lie_substitute(psi: &LieElem, images: &[LieElem]) -> Result<LieElem> {
    let certified = psi.certified;
    for (i, img) in images.iter().enumerate() {
        if !img.body.constant_term().is_zero() {
            return Err(Error::ConstantImage { letter: i });
        }
        if !img.certified {
            if let Some(weight) = first_non_lie_weight(&img.body) {
                return Err(Error::NotLie { weight });
            }
        }
    }
    let bodies: Vec<NcPoly> = images.iter().map(|e| e.body.clone()).collect();
    let body = psi.body.substitute(&bodies)?;
    if cfg!(debug_assertions) && body.max_weight().unwrap_or(0) <= DEBUG_RECHECK_WEIGHT {
        debug_assert!(is_lie(&body), "substitution left the Lie algebra");
    }
    Ok(LieElem { body, certified })
}
