//! Tangential derivations, the divergence cocycles, the Ihara bracket and
//! the Kashiwara-Vergne membership tests.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{rational_field, Echelon, Scalar, SparseRow};
use crate::freealg::{Coeff, NcPoly, Selector, Word};
use crate::lie::{bracket, lie_substitute, lyndon_basis, lyndon_words, LieElem};
use crate::traces::{check_tder_order, qtr_project, TraceElem};
use crate::Q;

/// The tangential derivation `x_i -> [x_i, a_i]`.
#[derive(Clone, PartialEq, Debug)]
pub struct TDer {
    comps: Vec<LieElem>,
}

impl TDer {
    /// One component per generator, all in the same alphabet.
    pub fn new(comps: Vec<LieElem>) -> Result<Self> {
        let n = comps.len();
        for a in &comps {
            if a.n() != n {
                return Err(Error::AlphabetMismatch {
                    left: n,
                    right: a.n(),
                });
            }
        }
        Ok(TDer { comps })
    }

    pub fn zero(n: usize) -> Self {
        TDer {
            comps: vec![LieElem::zero(n); n],
        }
    }

    pub fn n(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[LieElem] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(LieElem::is_zero)
    }

    /// Keeps only the weight-`m` part of every component.
    pub fn weight_component(&self, m: usize) -> TDer {
        TDer {
            comps: self
                .comps
                .iter()
                .map(|a| a.component(Selector::Weight(m)))
                .collect(),
        }
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.comps.iter().filter_map(LieElem::max_weight).max()
    }

    pub fn checked_add(&self, other: &TDer) -> Result<TDer> {
        self.zip(other, |a, b| a.checked_add(b))
    }

    pub fn checked_sub(&self, other: &TDer) -> Result<TDer> {
        self.zip(other, |a, b| a.checked_sub(b))
    }

    pub fn scale(&self, factor: &Q) -> TDer {
        TDer {
            comps: self.comps.iter().map(|a| a.scale(factor)).collect(),
        }
    }

    fn zip(&self, other: &TDer, f: impl Fn(&LieElem, &LieElem) -> Result<LieElem>) -> Result<TDer> {
        if self.n() != other.n() {
            return Err(Error::AlphabetMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| f(a, b))
            .collect::<Result<_>>()?;
        Ok(TDer { comps })
    }
}

/// Applies the tangential derivation `x_i -> [x_i, a[i]]` to `f`.
pub fn tangential_apply<C: Coeff>(a: &[NcPoly<C>], f: &NcPoly<C>) -> NcPoly<C> {
    let mut out = NcPoly::zero(f.n());
    for (w, c) in f.terms() {
        let letters = w.letters();
        for (i, &g) in letters.iter().enumerate() {
            let (pre, rest) = letters.split_at(i);
            let post = &rest[1..];
            for (v, d) in a[g as usize].terms() {
                let cd = c.mul_ref(d);
                let mut left = Word::splice(pre, &[g], v.letters());
                let mut right = Word::splice(pre, v.letters(), &[g]);
                for &l in post {
                    left.push(l);
                    right.push(l);
                }
                out.add_term(right, cd.neg_ref());
                out.add_term(left, cd);
            }
        }
    }
    out
}

/// Component tuple of the commutator of two tangential derivations:
/// `c_k = u(b_k) - v(a_k) + [a_k, b_k]`.
pub fn tangential_bracket<C: Coeff>(a: &[NcPoly<C>], b: &[NcPoly<C>]) -> Vec<NcPoly<C>> {
    a.iter()
        .zip(b)
        .map(|(ak, bk)| {
            let mut c = tangential_apply(a, bk);
            c.sub_assign(&tangential_apply(b, ak));
            c.add_assign(&ak.commutator(bk).expect("one alphabet"));
            c
        })
        .collect()
}

/// Applies `u` to `a` as a derivation of the free associative algebra.
pub fn tder_apply(u: &TDer, a: &NcPoly) -> Result<NcPoly> {
    if u.n() != a.n() {
        return Err(Error::AlphabetMismatch {
            left: u.n(),
            right: a.n(),
        });
    }
    let bodies: Vec<NcPoly> = u.comps.iter().map(|c| c.body().clone()).collect();
    Ok(tangential_apply(&bodies, a))
}

/// Applies `u` to a Lie element; the result is again Lie.
pub fn tder_apply_lie(u: &TDer, a: &LieElem) -> Result<LieElem> {
    let body = tder_apply(u, a.body())?;
    let trusted = a.is_certified() && u.comps.iter().all(LieElem::is_certified);
    Ok(if trusted {
        LieElem::by_construction(body)
    } else {
        LieElem::unchecked(body)
    })
}

/// `[u, v]_k = u(b_k) - v(a_k) + [a_k, b_k]`.
pub fn tder_bracket(u: &TDer, v: &TDer) -> Result<TDer> {
    if u.n() != v.n() {
        return Err(Error::AlphabetMismatch {
            left: u.n(),
            right: v.n(),
        });
    }
    let comps = u
        .comps
        .iter()
        .zip(&v.comps)
        .map(|(a, b)| {
            let ub = tder_apply_lie(u, b)?;
            let va = tder_apply_lie(v, a)?;
            ub.checked_sub(&va)?.checked_add(&bracket(a, b)?)
        })
        .collect::<Result<_>>()?;
    Ok(TDer { comps })
}

/// `qdiv(u) = sum_k qtr(x_k d_k a_k)`; `l = 1` is the divergence and
/// `l = 2` the superdivergence.
pub fn qdiv(u: &TDer, l: u32) -> Result<TraceElem> {
    check_tder_order(u, l)?;
    let n = u.n();
    let mut total = NcPoly::zero(n);
    for (k, a) in u.comps.iter().enumerate() {
        let xk = NcPoly::letter(n, k);
        total.add_assign(&xk.nc_mul(&a.body().partial(k))?);
    }
    qtr_project(&total, l)
}

pub fn div(u: &TDer) -> Result<TraceElem> {
    qdiv(u, 1)
}

/// The derivation `x -> 0, y -> [y, psi]`.
pub fn slot_two(psi: &LieElem) -> Result<TDer> {
    if psi.n() != 2 {
        return Err(Error::AlphabetMismatch {
            left: 2,
            right: psi.n(),
        });
    }
    TDer::new(vec![LieElem::zero(2), psi.clone()])
}

/// `{psi1, psi2} = (0, psi1)(psi2) - (0, psi2)(psi1) + [psi1, psi2]`.
pub fn ihara(psi1: &LieElem, psi2: &LieElem) -> Result<LieElem> {
    let a = tder_apply_lie(&slot_two(psi1)?, psi2)?;
    let b = tder_apply_lie(&slot_two(psi2)?, psi1)?;
    a.checked_sub(&b)?.checked_add(&bracket(psi1, psi2)?)
}

/// `-x - y` in the two-letter alphabet.
fn minus_x_minus_y() -> LieElem {
    LieElem::x()
        .checked_add(&LieElem::y())
        .expect("same alphabet")
        .neg()
}

/// `nu(psi) = (psi(-x-y, x), psi(-x-y, y))`.
pub fn nu(psi: &LieElem) -> Result<TDer> {
    let s = minus_x_minus_y();
    let a = lie_substitute(psi, &[s.clone(), LieElem::x()])?;
    let b = lie_substitute(psi, &[s, LieElem::y()])?;
    TDer::new(vec![a, b])
}

fn power(p: &NcPoly, m: usize) -> NcPoly {
    let mut out = NcPoly::one(p.n());
    for _ in 0..m {
        out = &out * p;
    }
    out
}

/// `tr((x+y)^m - x^m - y^m)`.
fn duflo_delta(m: usize) -> Result<TraceElem> {
    let x = NcPoly::<Q>::letter(2, 0);
    let y = NcPoly::<Q>::letter(2, 1);
    let total = &(&power(&(&x + &y), m) - &power(&x, m)) - &power(&y, m);
    qtr_project(&total, 1)
}

/// `tr(-(-z)^m + (-y-z)^m + y^m)` in letters `(z, y)`.
fn duflo_delta_prime(m: usize) -> Result<TraceElem> {
    let z = NcPoly::<Q>::letter(2, 0);
    let y = NcPoly::<Q>::letter(2, 1);
    let mz = z.scale_i64(-1);
    let myz = (&y + &z).scale_i64(-1);
    let total = &(&power(&myz, m) - &power(&mz, m)) + &power(&y, m);
    qtr_project(&total, 1)
}

/// Decides `t = c * delta` for a scalar `c`, returning `c`. `None` means
/// `t` is not a multiple of `delta`; a zero `delta` only admits `t = 0`,
/// reported as `Some(None)`.
fn ratio(t: &TraceElem, delta: &TraceElem) -> Option<Option<Q>> {
    if delta.is_zero() {
        return if t.is_zero() { Some(None) } else { None };
    }
    let (w, d) = delta.terms().next().expect("nonzero");
    let c = t.coeff(w).checked_div(d).ok()?;
    let c = c.as_rational()?.clone();
    if delta.scale_rational(&c) == *t {
        Some(Some(c))
    } else {
        None
    }
}

/// Per-weight outcome of the Kashiwara-Vergne test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KrvWeight {
    pub weight: usize,
    pub condition_one: bool,
    pub condition_two: bool,
    /// Coefficient `c_m` of `t^m` in `f`; absent when undetermined or
    /// when condition two fails.
    pub c: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KrvReport {
    pub max_weight: usize,
    pub weights: Vec<KrvWeight>,
}

impl KrvReport {
    pub fn passes(&self) -> bool {
        self.weights
            .iter()
            .all(|w| w.condition_one && w.condition_two)
    }

    pub fn coefficient(&self, m: usize) -> Option<Q> {
        self.weights
            .iter()
            .find(|w| w.weight == m)
            .and_then(|w| w.c.as_deref())
            .map(|s| crate::exactla::parse_rational(s).expect("written by us"))
    }
}

/// Checks `[x,a] + [y,b] = 0` and `div(u) = tr(-f(x+y) + f(x) + f(y))`
/// weight by weight up to `max_weight`. Condition two at weight `m` asks
/// that `div(u)_m` be a multiple of `tr((x+y)^m - x^m - y^m)`, and
/// recovers `c_m` from `div(u)_m = -c_m tr((x+y)^m - x^m - y^m)`.
pub fn krv_check(u: &TDer, max_weight: usize) -> Result<KrvReport> {
    if u.n() != 2 {
        return Err(Error::AlphabetMismatch {
            left: 2,
            right: u.n(),
        });
    }
    let x = LieElem::x();
    let y = LieElem::y();
    let mut weights = Vec::new();
    for m in 1..=max_weight {
        let um = u.weight_component(m);
        let lhs = bracket(&x, &um.comps[0])?.checked_add(&bracket(&y, &um.comps[1])?)?;
        let condition_one = lhs.is_zero();
        let d = div(&um)?;
        let delta = duflo_delta(m)?;
        let (condition_two, c) = match ratio(&d, &delta) {
            None => (false, None),
            Some(None) => (true, None),
            Some(Some(r)) => (true, Some((-r).to_string())),
        };
        weights.push(KrvWeight {
            weight: m,
            condition_one,
            condition_two,
            c,
        });
    }
    Ok(KrvReport {
        max_weight,
        weights,
    })
}

/// krv': `psi(z, y) = b(-y-z, y)` over the alphabet `(z, y)`.
pub fn krvprime_transform(u: &TDer) -> Result<LieElem> {
    if u.n() != 2 {
        return Err(Error::AlphabetMismatch {
            left: 2,
            right: u.n(),
        });
    }
    let z = LieElem::generator(2, 0);
    let y = LieElem::generator(2, 1);
    let image = z.checked_add(&y)?.neg();
    lie_substitute(&u.comps[1], &[image, y])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KrvPrimeWeight {
    pub weight: usize,
    /// `[y, psi_m]` lies in the image of `ad_{y+z}`; for weight 1, `psi_1`
    /// is a multiple of `z + y`.
    pub image_condition: bool,
    /// `tr(y d_y psi_m)` is a multiple of `tr(-(-z)^m + (-y-z)^m + y^m)`.
    pub trace_condition: bool,
    /// `c` with `psi_1 = c(z+y)` at weight 1, else `c_m`.
    pub c: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KrvPrimeReport {
    pub max_weight: usize,
    pub weights: Vec<KrvPrimeWeight>,
}

impl KrvPrimeReport {
    pub fn passes(&self) -> bool {
        self.weights
            .iter()
            .all(|w| w.image_condition && w.trace_condition)
    }

    pub fn coefficient(&self, m: usize) -> Option<Q> {
        self.weights
            .iter()
            .find(|w| w.weight == m)
            .and_then(|w| w.c.as_deref())
            .map(|s| crate::exactla::parse_rational(s).expect("written by us"))
    }
}

fn lie_coordinates_row(p: &NcPoly, index: &HashMap<Word, usize>) -> Result<SparseRow> {
    let field = rational_field();
    let mut row: SparseRow = crate::lie::lyndon_coordinates(p)?
        .into_iter()
        .map(|(w, c)| (index[&w], Scalar::from_rational(&field, c)))
        .collect();
    row.sort_by_key(|(i, _)| *i);
    Ok(row)
}

/// Whether `target` (weight `m + 1`) lies in `ad_{y+z}` of the weight-`m`
/// Lie algebra in letters `(z, y)`.
fn in_ad_image(target: &NcPoly, m: usize) -> Result<bool> {
    let field = rational_field();
    let s = LieElem::generator(2, 0).checked_add(&LieElem::generator(2, 1))?;
    let words = lyndon_words(2, m + 1);
    let index: HashMap<Word, usize> = words
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let mut ech = Echelon::new(words.len(), &field);
    for b in lyndon_basis(2, m) {
        let img = bracket(&s, &b)?;
        ech.insert(lie_coordinates_row(img.body(), &index)?);
    }
    ech.finish();
    Ok(ech.contains(&lie_coordinates_row(target, &index)?))
}

/// The krv' conditions on `psi(z, y)` weight by weight up to `max_weight`.
pub fn krvprime_check(psi: &LieElem, max_weight: usize) -> Result<KrvPrimeReport> {
    if psi.n() != 2 {
        return Err(Error::AlphabetMismatch {
            left: 2,
            right: psi.n(),
        });
    }
    let y = LieElem::generator(2, 1);
    let y_poly = NcPoly::<Q>::letter(2, 1);
    let mut weights = Vec::new();
    for m in 1..=max_weight {
        let pm = psi.component(Selector::Weight(m));
        if m == 1 {
            let cz = pm.body().coeff(&Word::letter(0));
            let cy = pm.body().coeff(&Word::letter(1));
            let ok = cz == cy;
            weights.push(KrvPrimeWeight {
                weight: 1,
                image_condition: ok,
                trace_condition: true,
                c: ok.then(|| cz.to_string()),
            });
            continue;
        }
        let target = bracket(&y, &pm)?;
        let image_condition = in_ad_image(target.body(), m)?;
        let t = qtr_project(&(&y_poly * &pm.body().partial(1)), 1)?;
        let delta = duflo_delta_prime(m)?;
        let (trace_condition, c) = match ratio(&t, &delta) {
            None => (false, None),
            Some(None) => (true, None),
            Some(Some(r)) => (true, Some(r.to_string())),
        };
        weights.push(KrvPrimeWeight {
            weight: m,
            image_condition,
            trace_condition,
            c,
        });
    }
    Ok(KrvPrimeReport {
        max_weight,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Alphabet;
    use crate::lie::{ad_power, parse_bracket_expr, soule};

    fn lie(text: &str) -> LieElem {
        parse_bracket_expr(&Alphabet::xy(), text).unwrap()
    }

    fn swap() -> TDer {
        TDer::new(vec![LieElem::y(), LieElem::x()]).unwrap()
    }

    #[test]
    fn action_on_generators() {
        let u = swap();
        assert_eq!(
            tder_apply(&u, LieElem::x().body()).unwrap(),
            *lie("[x,y]").body()
        );
        let s3 = soule(3).unwrap();
        let v = slot_two(&s3).unwrap();
        assert!(tder_apply(&v, LieElem::x().body()).unwrap().is_zero());
        assert_eq!(
            tder_apply(&v, LieElem::y().body()).unwrap(),
            *bracket(&LieElem::y(), &s3).unwrap().body()
        );
    }

    #[test]
    fn bracket_with_itself_vanishes() {
        let u = swap();
        assert!(tder_bracket(&u, &u).unwrap().is_zero());
        let v = nu(&soule(3).unwrap()).unwrap();
        assert!(tder_bracket(&v, &v).unwrap().is_zero());
    }

    #[test]
    fn nu_of_sigma3() {
        let v = nu(&soule(3).unwrap()).unwrap();
        assert_eq!(v.components()[0], lie("[y,[y,x]]"));
        assert_eq!(v.components()[1], lie("[x,[x,y]]"));
        assert!(nu(&LieElem::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn divergences_of_examples() {
        let ab = Alphabet::xy();
        assert!(div(&swap()).unwrap().is_zero());
        let v = nu(&soule(3).unwrap()).unwrap();
        let target = NcPoly::parse_simple(&ab, "xyy + yxx").unwrap();
        assert_eq!(div(&v).unwrap(), qtr_project(&target, 1).unwrap());
        let q3 = qdiv(&v, 3).unwrap();
        assert_eq!(q3, qtr_project(&target, 3).unwrap());
        assert!(!q3.is_zero());
        assert!(matches!(qdiv(&v, 2), Err(Error::WeightNotDivisible { .. })));
    }

    #[test]
    fn ihara_is_antisymmetric() {
        let s3 = soule(3).unwrap();
        let s5 = soule(5).unwrap();
        assert!(ihara(&s3, &s3).unwrap().is_zero());
        let a = ihara(&s3, &s5).unwrap();
        let b = ihara(&s5, &s3).unwrap();
        assert_eq!(a, b.neg());
        assert_eq!(a.body().weights(), vec![8]);
    }

    #[test]
    fn krv_examples() {
        let r = krv_check(&swap(), 6).unwrap();
        assert!(r.passes());
        for m in 2..=6 {
            assert_eq!(r.coefficient(m), Some(Q::from_integer(0.into())));
        }
        let r = krv_check(&nu(&soule(3).unwrap()).unwrap(), 6).unwrap();
        assert!(r.passes());
        assert_eq!(r.coefficient(3), Some(Q::new((-1).into(), 3.into())));
        let bad = TDer::new(vec![LieElem::zero(2), ad_power(1)]).unwrap();
        let r = krv_check(&bad, 3).unwrap();
        assert!(!r.passes());
        assert!(!r.weights[1].condition_one);
    }

    #[test]
    fn krvprime_examples() {
        let s3 = soule(3).unwrap();
        let psi = krvprime_transform(&nu(&s3).unwrap()).unwrap();
        assert_eq!(psi, s3);
        assert!(krvprime_check(&psi, 6).unwrap().passes());
        let zy = LieElem::x().checked_add(&LieElem::y()).unwrap();
        let r = krvprime_check(&zy, 3).unwrap();
        assert!(r.passes());
        assert_eq!(r.coefficient(1), Some(Q::from_integer(1.into())));
        let r = krvprime_check(&ad_power(1), 3).unwrap();
        assert!(!r.weights[1].image_condition);
    }
}
