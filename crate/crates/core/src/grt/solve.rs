use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{rational_field, Echelon, Scalar, SparseRow};
use crate::freealg::{check_weight, poly_to_terms, Alphabet, Coeff, NcPoly, TermJson, Word};
use crate::grt::t4::{T4Elem, Tracked};
use crate::lie::{
    lyndon_coordinates, lyndon_words, standard_factorization, LieElem, LyndonBracketer,
};
use crate::Q;

/// The five substitutions of the pentagon, as `(sign, first, second)` with
/// each argument a sum of generators `t^{ij}`:
/// `psi(t12, t23+t24) + psi(t13+t23, t34)
///  - psi(t23, t34) - psi(t12+t13, t24+t34) - psi(t12, t23)`.
type Substitution = (i64, &'static [(usize, usize)], &'static [(usize, usize)]);

const PENTAGON: [Substitution; 5] = [
    (1, &[(1, 2)], &[(2, 3), (2, 4)]),
    (1, &[(1, 3), (2, 3)], &[(3, 4)]),
    (-1, &[(2, 3)], &[(3, 4)]),
    (-1, &[(1, 2), (1, 3)], &[(2, 4), (3, 4)]),
    (-1, &[(1, 2)], &[(2, 3)]),
];

fn generator_sum(gens: &[(usize, usize)]) -> T4Elem<BigInt> {
    gens.iter().fold(T4Elem::zero(), |acc, &(i, j)| {
        acc.add(&T4Elem::generator(i, j).expect("valid generator"))
    })
}

/// Evaluates standard bracketings of Lyndon words at a pair of `t4`
/// elements, sharing the bracketings of common factors.
struct LyndonEvaluator {
    images: [Tracked<BigInt>; 2],
    memo: HashMap<Word, Tracked<BigInt>>,
}

impl LyndonEvaluator {
    fn new(a: T4Elem<BigInt>, b: T4Elem<BigInt>) -> Self {
        LyndonEvaluator {
            images: [Tracked::new(a), Tracked::new(b)],
            memo: HashMap::new(),
        }
    }

    fn eval(&mut self, w: &Word) -> Tracked<BigInt> {
        if let Some(t) = self.memo.get(w) {
            return t.clone();
        }
        let t = match standard_factorization(w.letters()) {
            None => self.images[w.letters()[0] as usize].clone(),
            Some((u, v)) => {
                let tu = self.eval(&Word::from_letters(u));
                let tv = self.eval(&Word::from_letters(v));
                tu.bracket(&tv)
            }
        };
        self.memo.insert(w.clone(), t.clone());
        t
    }

    /// Like `eval` but skips the action components of the result.
    fn eval_final(&mut self, w: &Word) -> T4Elem<BigInt> {
        if let Some(t) = self.memo.get(w) {
            return t.elem.clone();
        }
        match standard_factorization(w.letters()) {
            None => self.images[w.letters()[0] as usize].elem.clone(),
            Some((u, v)) => {
                let tu = self.eval(&Word::from_letters(u));
                let tv = self.eval(&Word::from_letters(v));
                tu.bracket_elem(&tv)
            }
        }
    }
}

/// Pentagon defect of each standard bracketing of the given Lyndon words.
pub fn pentagon_defects(words: &[Word]) -> Vec<T4Elem<BigInt>> {
    let parts: Vec<Vec<T4Elem<BigInt>>> = PENTAGON
        .par_iter()
        .map(|(sign, a, b)| {
            let mut ev = LyndonEvaluator::new(generator_sum(a), generator_sum(b));
            let s = BigInt::from(*sign);
            words.iter().map(|w| ev.eval_final(w).scale(&s)).collect()
        })
        .collect();
    (0..words.len())
        .map(|i| parts.iter().fold(T4Elem::zero(), |acc, p| acc.add(&p[i])))
        .collect()
}

/// `p(x, y) + p(y, x)`.
fn antisymmetry_defect<C: Coeff>(p: &NcPoly<C>) -> NcPoly<C> {
    let swapped = p
        .substitute(&[NcPoly::letter(2, 1), NcPoly::letter(2, 0)])
        .expect("two letters");
    p + &swapped
}

/// `p(x, y) + p(y, -x-y) + p(-x-y, x)`.
fn hexagon_defect<C: Coeff>(p: &NcPoly<C>) -> NcPoly<C> {
    let x = NcPoly::<C>::letter(2, 0);
    let y = NcPoly::<C>::letter(2, 1);
    let z = (&x + &y).scale_i64(-1);
    let a = p.substitute(&[y.clone(), z.clone()]).expect("two letters");
    let b = p.substitute(&[z, x]).expect("two letters");
    &(p + &a) + &b
}

/// Outcome of checking the three defining relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GrtCheck {
    pub antisymmetry: bool,
    pub hexagon: bool,
    pub pentagon: bool,
}

impl GrtCheck {
    pub fn passes(&self) -> bool {
        self.antisymmetry && self.hexagon && self.pentagon
    }
}

/// Checks antisymmetry, the hexagon and the pentagon (in `t4`) for `psi`.
pub fn grt_check(psi: &LieElem, cap: usize) -> Result<GrtCheck> {
    if psi.n() != 2 {
        return Err(Error::AlphabetMismatch {
            left: 2,
            right: psi.n(),
        });
    }
    check_weight(psi.max_weight().unwrap_or(0), cap)?;
    let body = psi.body();
    let antisymmetry = antisymmetry_defect(body).is_zero();
    let hexagon = hexagon_defect(body).is_zero();
    let coords = lyndon_coordinates(body)?;
    let words: Vec<Word> = coords.iter().map(|(w, _)| w.clone()).collect();
    let defects = pentagon_defects(&words);
    let mut total = T4Elem::<Q>::zero();
    for ((_, c), d) in coords.iter().zip(&defects) {
        total = total.add(&d.map_coeffs(|v| Q::from_integer(v.clone())).scale(c));
    }
    Ok(GrtCheck {
        antisymmetry,
        hexagon,
        pentagon: total.is_zero(),
    })
}

/// A graded component of the solution space, with its basis normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct GrtSolution {
    pub weight: usize,
    pub lyndon_words: Vec<Word>,
    /// Coordinates of each basis element against `lyndon_words`.
    pub coordinates: Vec<Vec<Q>>,
    pub basis: Vec<LieElem>,
}

impl GrtSolution {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrtSolutionJson {
    pub weight: usize,
    pub dimension: usize,
    pub lyndon_words: Vec<String>,
    pub coordinates: Vec<Vec<String>>,
    pub elements: Vec<Vec<TermJson>>,
}

impl GrtSolution {
    pub fn to_json(&self) -> GrtSolutionJson {
        let ab = Alphabet::xy();
        GrtSolutionJson {
            weight: self.weight,
            dimension: self.dimension(),
            lyndon_words: self.lyndon_words.iter().map(|w| ab.format(w)).collect(),
            coordinates: self
                .coordinates
                .iter()
                .map(|v| v.iter().map(|c| c.to_string()).collect())
                .collect(),
            elements: self
                .basis
                .iter()
                .map(|e| poly_to_terms(e.body(), &ab))
                .collect(),
        }
    }
}

/// Equation index: relation block, component and word.
type RowKey = (u8, u8, Word);

fn push_rows<C: Coeff>(
    rows: &mut BTreeMap<RowKey, Vec<(usize, Q)>>,
    block: u8,
    col: usize,
    coords: impl IntoIterator<Item = ((u8, Word), C)>,
) {
    for ((part, w), c) in coords {
        rows.entry((block, part, w))
            .or_default()
            .push((col, c.to_rational()));
    }
}

/// Solves the three defining relations in weight `m` over the Lyndon basis.
///
/// The basis is the reduced echelon form of the solution space with the
/// Lyndon word `x^(m-1) y` as leading coordinate, so when the depth-one
/// part is nonzero the first element has coefficient 1 on `ad_x^(m-1) y`
/// and the others have no depth-one part. Remaining elements have leading
/// Lyndon coordinate 1.
pub fn grt_solve(m: usize, cap: usize) -> Result<GrtSolution> {
    if m == 0 {
        return Err(Error::InvalidArgument("weight must be positive".into()));
    }
    check_weight(m, cap)?;
    let words = lyndon_words(2, m);
    let mut bracketer = LyndonBracketer::<BigInt>::new(2);
    let expansions: Vec<NcPoly<BigInt>> = words.iter().map(|w| bracketer.expand(w)).collect();
    let mut rows: BTreeMap<RowKey, Vec<(usize, Q)>> = BTreeMap::new();
    for (j, p) in expansions.iter().enumerate() {
        let a = antisymmetry_defect(p);
        push_rows(
            &mut rows,
            0,
            j,
            a.terms().map(|(w, c)| ((0, w.clone()), c.clone())),
        );
        let h = hexagon_defect(p);
        push_rows(
            &mut rows,
            1,
            j,
            h.terms().map(|(w, c)| ((0, w.clone()), c.clone())),
        );
    }
    for (j, d) in pentagon_defects(&words).into_iter().enumerate() {
        push_rows(&mut rows, 2, j, d.coordinates());
    }

    let field = rational_field();
    let mut ech = Echelon::new(words.len(), &field);
    for (_, entries) in rows {
        let mut row: SparseRow = entries
            .into_iter()
            .map(|(j, c)| (j, Scalar::from_rational(&field, c)))
            .collect();
        row.sort_by_key(|(j, _)| *j);
        ech.insert(row);
        if ech.rank() == words.len() {
            break;
        }
    }
    ech.finish();
    let raw = ech.nullspace_basis();

    // Re-echelon with the depth-one Lyndon word first.
    let lead = words
        .iter()
        .position(|w| w.count(1) == 1 && w.last() == Some(1));
    let perm: Vec<usize> = lead
        .into_iter()
        .chain((0..words.len()).filter(|&j| Some(j) != lead))
        .collect();
    let mut canon = Echelon::new(words.len(), &field);
    for v in &raw {
        let mut row: SparseRow = perm
            .iter()
            .enumerate()
            .filter(|(_, &j)| !v[j].is_zero())
            .map(|(pos, &j)| (pos, v[j].clone()))
            .collect();
        row.sort_by_key(|(p, _)| *p);
        canon.insert(row);
    }
    canon.finish();

    let mut coordinates = Vec::new();
    let mut basis = Vec::new();
    for row in canon.rows() {
        let mut v = vec![Q::from_integer(0.into()); words.len()];
        for (pos, c) in row {
            v[perm[*pos]] = c.as_rational().expect("rational").clone();
        }
        let mut body = NcPoly::zero(2);
        for (c, p) in v.iter().zip(&expansions) {
            body.add_scaled(&p.to_rational(), c);
        }
        coordinates.push(v);
        basis.push(LieElem::by_construction(body));
    }
    Ok(GrtSolution {
        weight: m,
        lyndon_words: words,
        coordinates,
        basis,
    })
}

/// Scales `psi` so that its coefficient on the word `x^(m-1) y` is one.
pub fn unit_depth1(psi: &LieElem, m: usize) -> Result<LieElem> {
    let mut letters = vec![0u8; m.saturating_sub(1)];
    letters.push(1);
    let c = psi.body().coeff(&Word::from_letters(&letters));
    if c == Q::from_integer(0.into()) {
        return Err(Error::Inconsistent(format!(
            "no depth-one part in weight {m}"
        )));
    }
    Ok(psi.scale(&(Q::from_integer(1.into()) / c)))
}

/// The depth-one generator in odd weight `m` with coefficient 1 on
/// `ad_x^(m-1) y`: rescaled hardcoded elements for `m = 3, 5`, otherwise
/// the first solver basis element.
pub fn soule_generator(m: usize, cap: usize) -> Result<LieElem> {
    if m == 3 || m == 5 {
        return unit_depth1(&crate::lie::soule(m)?, m);
    }
    let sol = grt_solve(m, cap)?;
    match sol.basis.into_iter().next() {
        Some(e) if e.depth() == Some(1) => unit_depth1(&e, m),
        _ => Err(Error::Inconsistent(format!(
            "no depth-one solution in weight {m}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::DEFAULT_WEIGHT_CAP;
    use crate::lie::{ad_power, soule};

    const CAP: usize = DEFAULT_WEIGHT_CAP;

    #[test]
    fn soule_elements_pass() {
        for m in [3, 5] {
            let c = grt_check(&soule(m).unwrap(), CAP).unwrap();
            assert!(c.passes(), "weight {m}: {c:?}");
        }
    }

    #[test]
    fn non_members_fail() {
        let c = grt_check(&ad_power(2), CAP).unwrap();
        assert!(!c.antisymmetry);
    }

    #[test]
    fn low_weights() {
        assert_eq!(grt_solve(1, CAP).unwrap().dimension(), 0);
        assert_eq!(grt_solve(2, CAP).unwrap().dimension(), 0);
        assert_eq!(grt_solve(4, CAP).unwrap().dimension(), 0);
        let s3 = grt_solve(3, CAP).unwrap();
        assert_eq!(s3.basis, vec![soule(3).unwrap()]);
        let s5 = grt_solve(5, CAP).unwrap();
        assert_eq!(
            s5.basis,
            vec![soule(5).unwrap().scale(&Q::new(1.into(), 2.into()))]
        );
        assert!(matches!(
            grt_solve(13, CAP),
            Err(Error::WeightCapExceeded { .. })
        ));
    }
}
