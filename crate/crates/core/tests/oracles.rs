//! Checks against small independent implementations that share no code with
//! the library beyond polynomial storage.

use std::collections::{BTreeMap, BTreeSet};

use kvdepth::freealg::{Alphabet, NcPoly, Word};
use kvdepth::lie::{lie_from_json, LieElem};
use kvdepth::tder::ihara;
use kvdepth::traces::qtr_project;
use kvdepth::Q;
use num_traits::{One, Zero};

fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

/// Dense two-letter polynomials as maps from letter strings.
type Dense = BTreeMap<Vec<u8>, Q>;

fn mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (u, c) in a {
        for (v, d) in b {
            let mut w = u.clone();
            w.extend(v);
            *out.entry(w).or_insert_with(Q::zero) += c * d;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn comm(a: &Dense, b: &Dense) -> Dense {
    let mut out = mul(a, b);
    for (w, c) in mul(b, a) {
        *out.entry(w).or_insert_with(Q::zero) -= c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn add_scaled(acc: &mut Dense, a: &Dense, f: &Q) {
    for (w, c) in a {
        *acc.entry(w.clone()).or_insert_with(Q::zero) += c * f;
    }
    acc.retain(|_, c| !c.is_zero());
}

fn letter(i: u8) -> Dense {
    Dense::from([(vec![i], Q::one())])
}

fn ad_x_y(k: usize) -> Dense {
    (0..k).fold(letter(1), |acc, _| comm(&letter(0), &acc))
}

fn binom(n: usize, k: usize) -> Q {
    (0..k).fold(Q::one(), |acc, i| {
        acc * q((n - i) as i64) / q((i + 1) as i64)
    })
}

/// `ad_x^b [y, ad_x^a y] - ad_x^a [y, ad_x^b y] + [ad_x^a y, ad_x^b y]`,
/// expanded with the Leibniz rule for `ad_x`.
fn hand_ihara(a: usize, b: usize) -> Dense {
    let mut out = comm(&ad_x_y(a), &ad_x_y(b));
    for (outer, inner, sign) in [(b, a, 1), (a, b, -1)] {
        for k in 0..=outer {
            let t = comm(&ad_x_y(k), &ad_x_y(outer - k + inner));
            add_scaled(&mut out, &t, &(binom(outer, k) * q(sign)));
        }
    }
    out
}

fn to_dense(p: &NcPoly) -> Dense {
    p.terms()
        .map(|(w, c)| (w.letters().to_vec(), c.clone()))
        .collect()
}

fn ad_power_elem(k: usize) -> LieElem {
    kvdepth::lie::ad_power(k)
}

#[test]
fn depth_two_ihara_matches_hand_expansion() {
    for a in 0..=5 {
        for b in 0..=5 {
            let lib = ihara(&ad_power_elem(a), &ad_power_elem(b)).unwrap();
            assert_eq!(to_dense(lib.body()), hand_ihara(a, b), "a = {a}, b = {b}");
        }
    }
}

#[test]
fn ihara_of_depth_one_is_depth_two() {
    let lib = ihara(&ad_power_elem(2), &ad_power_elem(4)).unwrap();
    assert!(lib.body().terms().all(|(w, _)| w.count(1) == 2));
}

#[test]
fn bracket_expression_input_agrees() {
    let e = lie_from_json(r#"["x", ["x", "y"]]"#, &Alphabet::xy()).unwrap();
    assert_eq!(to_dense(e.body()), to_dense(ad_power_elem(2).body()));
}

/// Brute-force quotient of `Q<x, y>` in weight `m` by `x_i a - s a x_i`,
/// with `s = 1` or `-1`, computed by dense Gaussian elimination.
struct Quotient {
    words: Vec<Vec<u8>>,
    pivots: Vec<(usize, Vec<Q>)>,
}

impl Quotient {
    fn new(m: usize, s: i64) -> Self {
        let words: Vec<Vec<u8>> = (0..1usize << m)
            .map(|bits| (0..m).map(|i| ((bits >> (m - 1 - i)) & 1) as u8).collect())
            .collect();
        let index: BTreeMap<&[u8], usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_slice(), i))
            .collect();
        let mut rows = Vec::new();
        for w in &words {
            let mut r = vec![Q::zero(); words.len()];
            let mut rotated = w[1..].to_vec();
            rotated.push(w[0]);
            r[index[w.as_slice()]] += Q::one();
            r[index[rotated.as_slice()]] -= q(s);
            rows.push(r);
        }
        let mut pivots: Vec<(usize, Vec<Q>)> = Vec::new();
        for mut r in rows {
            for (p, pr) in &pivots {
                if !r[*p].is_zero() {
                    let f = r[*p].clone();
                    for (x, y) in r.iter_mut().zip(pr) {
                        *x -= &f * y;
                    }
                }
            }
            if let Some(p) = r.iter().position(|c| !c.is_zero()) {
                let inv = Q::one() / &r[p];
                r.iter_mut().for_each(|c| *c *= &inv);
                for (_, pr) in pivots.iter_mut() {
                    if !pr[p].is_zero() {
                        let f = pr[p].clone();
                        for (x, y) in pr.iter_mut().zip(&r) {
                            *x -= &f * y;
                        }
                    }
                }
                pivots.push((p, r));
            }
        }
        Quotient { words, pivots }
    }

    fn dimension(&self) -> usize {
        self.words.len() - self.pivots.len()
    }

    fn in_span(&self, v: &[Q]) -> bool {
        let mut r = v.to_vec();
        for (p, pr) in &self.pivots {
            if !r[*p].is_zero() {
                let f = r[*p].clone();
                for (x, y) in r.iter_mut().zip(pr) {
                    *x -= &f * y;
                }
            }
        }
        r.iter().all(Q::is_zero)
    }
}

#[test]
fn rational_trace_quotients_match_brute_force() {
    for (l, s) in [(1u32, 1i64), (2, -1)] {
        for m in 1..=8usize {
            if m % l as usize != 0 {
                continue;
            }
            let oracle = Quotient::new(m, s);
            let images: Vec<_> = oracle
                .words
                .iter()
                .map(|w| qtr_project(&NcPoly::monomial(2, Word::from_letters(w), q(1)), l).unwrap())
                .collect();
            let classes: BTreeSet<Word> = images
                .iter()
                .flat_map(|t| t.terms().map(|(c, _)| c.clone()).collect::<Vec<_>>())
                .collect();
            assert_eq!(classes.len(), oracle.dimension(), "l = {l}, m = {m}");
            // Two words with the same image differ by a relation.
            for i in 0..images.len() {
                for j in i + 1..images.len() {
                    if images[i] == images[j] {
                        let mut v = vec![Q::zero(); oracle.words.len()];
                        v[i] += Q::one();
                        v[j] -= Q::one();
                        assert!(oracle.in_span(&v), "l = {l}, words {i} and {j}");
                    }
                }
                if images[i].is_zero() {
                    let mut v = vec![Q::zero(); oracle.words.len()];
                    v[i] += Q::one();
                    assert!(oracle.in_span(&v));
                }
            }
        }
    }
}
