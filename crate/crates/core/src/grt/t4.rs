use std::fmt;

use crate::error::{Error, Result};
use crate::freealg::{Alphabet, Coeff, NcPoly, Word};
use crate::tder::{tangential_apply, tangential_bracket};
use crate::Q;

/// Letters of the free part: `t14, t24, t34`.
pub const T14: usize = 0;
pub const T24: usize = 1;
pub const T34: usize = 2;
/// Letters of the free part of `t3`: `t12, t23`.
pub const T12: usize = 0;
pub const T23: usize = 1;

/// Normal form of an element of the braid Lie algebra on four strands:
/// `f + g + gamma c`, with `f` a Lie element in `t14, t24, t34`, `g` a Lie
/// element in `t12, t23` and `c = t12 + t13 + t23` central in `t3`.
#[derive(Clone, PartialEq)]
pub struct T4Elem<C: Coeff = Q> {
    pub f: NcPoly<C>,
    pub g: NcPoly<C>,
    pub gamma: C,
}

impl<C: Coeff> T4Elem<C> {
    pub fn zero() -> Self {
        T4Elem {
            f: NcPoly::zero(3),
            g: NcPoly::zero(2),
            gamma: C::zero(),
        }
    }

    /// The generator `t^{ij}`, `1 <= i < j <= 4` (either order accepted).
    pub fn generator(i: usize, j: usize) -> Result<Self> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let mut e = Self::zero();
        match (i, j) {
            (1, 4) => e.f = NcPoly::letter(3, T14),
            (2, 4) => e.f = NcPoly::letter(3, T24),
            (3, 4) => e.f = NcPoly::letter(3, T34),
            (1, 2) => e.g = NcPoly::letter(2, T12),
            (2, 3) => e.g = NcPoly::letter(2, T23),
            (1, 3) => {
                // t13 = c - t12 - t23
                e.g = (&NcPoly::letter(2, T12) + &NcPoly::letter(2, T23)).scale_i64(-1);
                e.gamma = C::one();
            }
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "no generator t{i}{j} on four strands"
                )))
            }
        }
        Ok(e)
    }

    /// Parses `t12`, `t34`, ... .
    pub fn parse_generator(name: &str) -> Result<Self> {
        let digits: Vec<usize> = name
            .strip_prefix('t')
            .map(|d| {
                d.chars()
                    .filter_map(|c| c.to_digit(10))
                    .map(|d| d as usize)
                    .collect()
            })
            .unwrap_or_default();
        match digits.as_slice() {
            [i, j] => Self::generator(*i, *j),
            _ => Err(Error::Parse(format!("not a generator name: `{name}`"))),
        }
    }

    /// The central element `c = t12 + t13 + t23` of `t3`.
    pub fn central_t3() -> Self {
        let mut e = Self::zero();
        e.gamma = C::one();
        e
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.is_zero() && self.gamma.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut gamma = self.gamma.clone();
        gamma.add_assign_ref(&other.gamma);
        T4Elem {
            f: &self.f + &other.f,
            g: &self.g + &other.g,
            gamma,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut gamma = self.gamma.clone();
        gamma.sub_assign_ref(&other.gamma);
        T4Elem {
            f: &self.f - &other.f,
            g: &self.g - &other.g,
            gamma,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        T4Elem {
            f: self.f.scale(c),
            g: self.g.scale(c),
            gamma: self.gamma.mul_ref(c),
        }
    }

    pub fn map_coeffs<D: Coeff>(&self, h: impl Fn(&C) -> D) -> T4Elem<D> {
        T4Elem {
            f: self.f.map_coeffs(&h),
            g: self.g.map_coeffs(&h),
            gamma: h(&self.gamma),
        }
    }

    /// Coordinates keyed by part (`0` free part, `1` t3 part, `2` centre)
    /// and word, in a fixed order.
    pub fn coordinates(&self) -> Vec<((u8, Word), C)> {
        let mut out: Vec<((u8, Word), C)> = Vec::new();
        out.extend(self.f.terms().map(|(w, c)| ((0, w.clone()), c.clone())));
        out.extend(self.g.terms().map(|(w, c)| ((1, w.clone()), c.clone())));
        if !self.gamma.is_zero() {
            out.push(((2, Word::empty()), self.gamma.clone()));
        }
        out
    }
}

impl<C: Coeff> fmt::Debug for T4Elem<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T4[{} | {} | {} c]",
            self.f.display_with(&Alphabet::t4_free()),
            self.g.display_with(&Alphabet::t3_free()),
            self.gamma
        )
    }
}

/// Tangential components of the action of `t12` on the free part:
/// `t14 -> [t14, t24]`, `t24 -> [t24, t14]`, `t34 -> 0`.
pub fn rho_t12<C: Coeff>() -> Vec<NcPoly<C>> {
    vec![
        NcPoly::letter(3, T24),
        NcPoly::letter(3, T14),
        NcPoly::zero(3),
    ]
}

/// Action of `t23`: `t24 -> [t24, t34]`, `t34 -> [t34, t24]`.
pub fn rho_t23<C: Coeff>() -> Vec<NcPoly<C>> {
    vec![
        NcPoly::zero(3),
        NcPoly::letter(3, T34),
        NcPoly::letter(3, T24),
    ]
}

/// Action of `t13`: `t14 -> [t14, t34]`, `t34 -> [t34, t14]`.
pub fn rho_t13<C: Coeff>() -> Vec<NcPoly<C>> {
    vec![
        NcPoly::letter(3, T34),
        NcPoly::zero(3),
        NcPoly::letter(3, T14),
    ]
}

/// Action of the central element `c = t12 + t13 + t23`.
pub fn rho_c<C: Coeff>() -> Vec<NcPoly<C>> {
    let a = rho_t12::<C>();
    let b = rho_t13::<C>();
    let d = rho_t23::<C>();
    (0..3).map(|k| &(&a[k] + &b[k]) + &d[k]).collect()
}

fn add_tuples<C: Coeff>(a: &mut [NcPoly<C>], b: &[NcPoly<C>], factor: &C) {
    for (x, y) in a.iter_mut().zip(b) {
        x.add_scaled(y, factor);
    }
}

/// Applies the action of `g + gamma c` to a polynomial in the free part.
///
/// The action of a word `w k` in `t12, t23` is the action of `w` after
/// that of `k`, so `rho(g) f = g_0 f + sum_k rho(d_k g)(D_k f)`.
pub fn rho_apply<C: Coeff>(g: &NcPoly<C>, gamma: &C, f: &NcPoly<C>) -> NcPoly<C> {
    let mut out = rho_apply_free(g, f);
    if !gamma.is_zero() {
        out.add_scaled(&tangential_apply(&rho_c(), f), gamma);
    }
    out
}

fn rho_apply_free<C: Coeff>(g: &NcPoly<C>, f: &NcPoly<C>) -> NcPoly<C> {
    let mut out = f.scale(&g.constant_term());
    for (k, rho) in [(T12, rho_t12::<C>()), (T23, rho_t23::<C>())] {
        let dg = g.partial(k);
        if !dg.is_zero() {
            let df = tangential_apply(&rho, f);
            out.add_assign(&rho_apply_free(&dg, &df));
        }
    }
    out
}

/// The bracket of the semidirect product: free parts bracket and are acted
/// on by the `t3` parts, `t3` parts bracket inside `t3` with `c` central.
pub fn t4_bracket<C: Coeff>(a: &T4Elem<C>, b: &T4Elem<C>) -> T4Elem<C> {
    let mut f = a.f.commutator(&b.f).expect("free part alphabet");
    f.add_assign(&rho_apply(&a.g, &a.gamma, &b.f));
    f.sub_assign(&rho_apply(&b.g, &b.gamma, &a.f));
    T4Elem {
        f,
        g: a.g.commutator(&b.g).expect("t3 alphabet"),
        gamma: C::zero(),
    }
}

/// A `t4` element together with the tangential components of the action
/// of its `t3` part, so repeated brackets avoid re-expanding the action.
#[derive(Clone, Debug)]
pub struct Tracked<C: Coeff> {
    pub elem: T4Elem<C>,
    pub rho: Vec<NcPoly<C>>,
}

impl<C: Coeff> Tracked<C> {
    pub fn new(elem: T4Elem<C>) -> Self {
        assert!(
            elem.g.max_weight().unwrap_or(0) <= 1,
            "tracked elements start from degree one"
        );
        let mut rho = vec![NcPoly::zero(3); 3];
        add_tuples(
            &mut rho,
            &rho_t12(),
            &elem.g.coeff(&Word::letter(T12 as u8)),
        );
        add_tuples(
            &mut rho,
            &rho_t23(),
            &elem.g.coeff(&Word::letter(T23 as u8)),
        );
        add_tuples(&mut rho, &rho_c(), &elem.gamma);
        Tracked { elem, rho }
    }

    pub fn add(&self, other: &Self) -> Self {
        Tracked {
            elem: self.elem.add(&other.elem),
            rho: self
                .rho
                .iter()
                .zip(&other.rho)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn bracket(&self, other: &Self) -> Self {
        Tracked {
            elem: self.bracket_elem(other),
            rho: tangential_bracket(&self.rho, &other.rho),
        }
    }

    /// The bracket without the action components, for final results.
    pub fn bracket_elem(&self, other: &Self) -> T4Elem<C> {
        let a = &self.elem;
        let b = &other.elem;
        let mut f = a.f.commutator(&b.f).expect("free part alphabet");
        f.add_assign(&tangential_apply(&self.rho, &b.f));
        f.sub_assign(&tangential_apply(&other.rho, &a.f));
        T4Elem {
            f,
            g: a.g.commutator(&b.g).expect("t3 alphabet"),
            gamma: C::zero(),
        }
    }
}

/// The defining relations of `t4` evaluated in the normal form, labelled.
/// All of them vanish when the action table is right.
pub fn t4_relations<C: Coeff>() -> Vec<(String, T4Elem<C>)> {
    let t = |i: usize, j: usize| T4Elem::<C>::generator(i, j).expect("valid generator");
    let mut out = Vec::new();
    for (i, j, k, l) in [(1, 2, 3, 4), (1, 3, 2, 4), (1, 4, 2, 3)] {
        out.push((
            format!("[t{i}{j}, t{k}{l}]"),
            t4_bracket(&t(i, j), &t(k, l)),
        ));
    }
    for i in 1..=4 {
        for j in 1..=4 {
            for k in j + 1..=4 {
                if i == j || i == k {
                    continue;
                }
                // [t_ij + t_ik, t_jk] for each vertex i and pair {j, k}
                let lhs = t(i, j).add(&t(i, k));
                out.push((
                    format!(
                        "[t{}{} + t{}{}, t{j}{k}]",
                        i.min(j),
                        i.max(j),
                        i.min(k),
                        i.max(k)
                    ),
                    t4_bracket(&lhs, &t(j, k)),
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = T4Elem<Q>;

    fn t(i: usize, j: usize) -> E {
        E::generator(i, j).unwrap()
    }

    #[test]
    fn relations_vanish() {
        let rels = t4_relations::<Q>();
        assert_eq!(rels.len(), 15);
        for (name, value) in rels {
            assert!(value.is_zero(), "{name} = {value:?}");
        }
    }

    #[test]
    fn full_central_element() {
        let mut c = E::zero();
        for (i, j) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)] {
            c = c.add(&t(i, j));
        }
        for (i, j) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)] {
            assert!(t4_bracket(&c, &t(i, j)).is_zero(), "t{i}{j}");
        }
    }

    #[test]
    fn derived_bracket() {
        assert!(t4_bracket(&t(1, 2), &t(3, 4)).is_zero());
        assert!(t4_bracket(&t(1, 2).add(&t(1, 4)), &t(2, 4)).is_zero());
        let expected = E {
            f: NcPoly::parse_simple(&Alphabet::t4_free(), "t14t24 - t24t14")
                .unwrap()
                .clone(),
            g: NcPoly::zero(2),
            gamma: Q::from_integer(0.into()),
        };
        assert_eq!(t4_bracket(&t(1, 2), &t(1, 4)), expected);
    }

    #[test]
    fn tracked_matches_plain() {
        let a = Tracked::new(t(1, 2).add(&t(1, 3)));
        let b = Tracked::new(t(2, 4).add(&t(3, 4)));
        let c = Tracked::new(t(2, 3));
        let tracked = a.bracket(&b).bracket(&a.bracket(&c));
        let plain = t4_bracket(&t4_bracket(&a.elem, &b.elem), &t4_bracket(&a.elem, &c.elem));
        assert_eq!(tracked.elem, plain);
    }
}
