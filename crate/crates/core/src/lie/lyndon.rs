use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::freealg::{Coeff, NcPoly, Word};
use crate::lie::LieElem;
use crate::Q;

/// Lyndon words of length `m` over `n` letters in increasing order
/// (Duval's algorithm).
pub fn lyndon_words(n: usize, m: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if n == 0 || m == 0 {
        return out;
    }
    let top = (n - 1) as u8;
    let mut w: Vec<u8> = vec![0];
    loop {
        if w.len() == m {
            out.push(Word::from_letters(&w));
        }
        let k = w.len();
        while w.len() < m {
            let c = w[w.len() - k];
            w.push(c);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            Some(l) => *l += 1,
            None => break,
        }
    }
    out
}

pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w[i..] > w[..])
}

/// Standard factorization `w = uv` with `v` the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[u8]) -> Option<(&[u8], &[u8])> {
    (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .map(|i| w.split_at(i))
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Dimension of the weight-`m` part of the free Lie algebra on `n` letters:
/// `(1/m) sum_{d | m} mu(d) n^(m/d)`.
pub fn witt_number(n: usize, m: usize) -> u128 {
    if m == 0 {
        return 0;
    }
    let mut total: i128 = 0;
    for d in 1..=m {
        if m.is_multiple_of(d) {
            total += mobius(d) as i128 * (n as i128).pow((m / d) as u32);
        }
    }
    (total / m as i128) as u128
}

/// Memoized standard bracketings of Lyndon words.
pub struct LyndonBracketer<C: Coeff> {
    n: usize,
    cache: HashMap<Word, NcPoly<C>>,
}

impl<C: Coeff> LyndonBracketer<C> {
    pub fn new(n: usize) -> Self {
        LyndonBracketer {
            n,
            cache: HashMap::new(),
        }
    }

    /// The standard bracketing of a Lyndon word, expanded.
    pub fn expand(&mut self, w: &Word) -> NcPoly<C> {
        if let Some(p) = self.cache.get(w) {
            return p.clone();
        }
        let p = match standard_factorization(w.letters()) {
            None => NcPoly::monomial(self.n, w.clone(), C::one()),
            Some((u, v)) => {
                let pu = self.expand(&Word::from_letters(u));
                let pv = self.expand(&Word::from_letters(v));
                pu.commutator(&pv).expect("one alphabet")
            }
        };
        self.cache.insert(w.clone(), p.clone());
        p
    }
}

/// Standard bracketing of one Lyndon word over `n` letters.
pub fn lyndon_bracket(n: usize, w: &Word) -> NcPoly {
    LyndonBracketer::<Q>::new(n).expand(w)
}

/// The Lyndon basis of the weight-`m` part of the free Lie algebra on `n`
/// letters, ordered by Lyndon word.
pub fn lyndon_basis(n: usize, m: usize) -> Vec<LieElem> {
    let mut b = LyndonBracketer::<Q>::new(n);
    lyndon_words(n, m)
        .iter()
        .map(|w| LieElem::by_construction(b.expand(w)))
        .collect()
}

/// Coordinates of a Lie element in the Lyndon basis, as `(word, coeff)`
/// pairs in word order.
///
/// Uses triangularity: the bracketing of a Lyndon word `L` is `L` plus
/// larger words of the same length, so the smallest surviving word is
/// always Lyndon when the input is Lie.
pub fn lyndon_coordinates(p: &NcPoly) -> Result<Vec<(Word, Q)>> {
    let mut rest = p.clone();
    let mut b = LyndonBracketer::<Q>::new(p.n());
    let mut coords = Vec::new();
    loop {
        let Some((w, c)) = rest.terms().next().map(|(w, c)| (w.clone(), c.clone())) else {
            break;
        };
        if !is_lyndon(w.letters()) {
            return Err(Error::NotLie { weight: w.len() });
        }
        let pw = b.expand(&w);
        rest.add_scaled(&pw, &-c.clone());
        coords.push((w, c));
    }
    coords.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(coords)
}

/// Dense coordinate vector of a homogeneous weight-`m` Lie element against
/// `lyndon_words(n, m)`.
pub fn lyndon_vector(p: &NcPoly, m: usize) -> Result<Vec<Q>> {
    let words = lyndon_words(p.n(), m);
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut v = vec![Q::from_integer(0.into()); words.len()];
    for (w, c) in lyndon_coordinates(p)? {
        match index.get(&w) {
            Some(&i) => v[i] = c,
            None => return Err(Error::NotLie { weight: w.len() }),
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Alphabet;

    #[test]
    fn small_lyndon_sets() {
        let ab = Alphabet::xy();
        let names: Vec<String> = lyndon_words(2, 4).iter().map(|w| ab.format(w)).collect();
        assert_eq!(names, ["xxxy", "xxyy", "xyyy"]);
        let names: Vec<String> = lyndon_words(2, 5).iter().map(|w| ab.format(w)).collect();
        assert_eq!(
            names,
            ["xxxxy", "xxxyy", "xxyxy", "xxyyy", "xyxyy", "xyyyy"]
        );
        assert_eq!(lyndon_words(2, 1).len(), 2);
    }

    #[test]
    fn witt_numbers() {
        assert_eq!(witt_number(2, 2), 1);
        assert_eq!(witt_number(2, 7), 18);
        assert_eq!(witt_number(3, 9), 2184);
        assert_eq!(witt_number(2, 12), 335);
        for m in 1..=10 {
            assert_eq!(lyndon_words(2, m).len() as u128, witt_number(2, m));
            assert_eq!(
                lyndon_words(3, m.min(7)).len() as u128,
                witt_number(3, m.min(7))
            );
        }
    }

    #[test]
    fn bracketing_and_coordinates() {
        let ab = Alphabet::xy();
        let xxy = ab.parse("xxy").unwrap();
        assert_eq!(
            lyndon_bracket(2, &xxy),
            NcPoly::parse_simple(&ab, "xxy - 2xyx + yxx").unwrap()
        );
        let xyy = ab.parse("xyy").unwrap();
        let p = &lyndon_bracket(2, &xxy).scale_i64(3) - &lyndon_bracket(2, &xyy);
        let coords = lyndon_coordinates(&p).unwrap();
        assert_eq!(coords.len(), 2);
        assert_eq!(coords[0].1, Q::from_integer(3.into()));
        assert_eq!(coords[1].1, Q::from_integer((-1).into()));
        assert!(lyndon_coordinates(&NcPoly::parse_simple(&ab, "yx").unwrap()).is_err());
    }
}
