//! Depth-two kernels of the (q-)divergence, the equivalent functional
//! equations on binary forms, and the dihedral character count.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{
    cyclotomic_field, nullspace, rank_of_vectors, rational_field, CyclotomicField, ExactMatrix,
    Scalar,
};
use crate::freealg::{NcPoly, Selector, Word};
use crate::lie::{ad_power, bracket, LieElem};
use crate::traces::qtr_project;
use crate::Q;

/// The spanning set `e_k = [ad_x^k y, ad_x^(n-k) y]`, `0 <= k < n - k`, of
/// the depth-two Lie elements of x-degree `n`.
#[derive(Clone, Debug)]
pub struct Depth2Basis {
    n: usize,
    elements: Vec<LieElem>,
}

impl Depth2Basis {
    pub fn new(n: usize) -> Self {
        let elements = (0..n.div_ceil(2))
            .filter(|&k| 2 * k < n)
            .map(|k| bracket(&ad_power(k), &ad_power(n - k)).expect("two letters"))
            .collect();
        Depth2Basis { n, elements }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[LieElem] {
        &self.elements
    }

    /// Rank of the elements in the free associative algebra.
    pub fn rank(&self) -> usize {
        let field = rational_field();
        let words: BTreeSet<Word> = self
            .elements
            .iter()
            .flat_map(|e| e.body().terms().map(|(w, _)| w.clone()).collect::<Vec<_>>())
            .collect();
        let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let vectors: Vec<Vec<Scalar>> = self
            .elements
            .iter()
            .map(|e| {
                let mut v = vec![Scalar::zero(&field); words.len()];
                for (w, c) in e.body().terms() {
                    v[index[w]] = Scalar::from_rational(&field, c.clone());
                }
                v
            })
            .collect();
        rank_of_vectors(&field, &vectors)
    }

    /// Coordinates of `psi` against the basis, if it lies in the span.
    pub fn coordinates(&self, psi: &NcPoly) -> Result<Option<Vec<Q>>> {
        if psi.n() != 2 {
            return Err(Error::AlphabetMismatch {
                left: 2,
                right: psi.n(),
            });
        }
        let field = rational_field();
        let k = self.len();
        let mut entries = Vec::new();
        let mut rows: BTreeMap<Word, usize> = BTreeMap::new();
        let columns = self
            .elements
            .iter()
            .map(|e| e.body())
            .chain(std::iter::once(psi));
        for (col, p) in columns.enumerate() {
            for (w, c) in p.terms() {
                let next = rows.len();
                let row = *rows.entry(w.clone()).or_insert(next);
                entries.push((row, col, Scalar::from_rational(&field, c.clone())));
            }
        }
        let m = ExactMatrix::from_entries(rows.len(), k + 1, &field, entries)?;
        let ns = nullspace(&m);
        let Some(v) = ns.basis.iter().find(|v| !v[k].is_zero()) else {
            return Ok(if psi.is_zero() {
                Some(vec![Q::zero(); k])
            } else {
                None
            });
        };
        let last = v[k].as_rational().expect("rational").clone();
        Ok(Some(
            v[..k]
                .iter()
                .map(|c| -c.as_rational().expect("rational").clone() / &last)
                .collect(),
        ))
    }
}

/// Exact nullity and canonical kernel basis.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelDim {
    pub n: usize,
    pub l: u32,
    pub dimension: usize,
    pub basis: Vec<Vec<Scalar>>,
}

fn check_depth2_order(n: usize, l: u32) -> Result<()> {
    if l == 0 {
        return Err(Error::ZeroOrder);
    }
    if l > 1 && !(n + 2).is_multiple_of(l as usize) {
        return Err(Error::WeightNotDivisible {
            weight: n + 2,
            order: l,
        });
    }
    Ok(())
}

/// Kernel of `psi -> qtr(y d_y psi)` on the span of [`Depth2Basis`].
///
/// No weight cap applies: the elements are built directly in depth two.
pub fn kernel_dim(n: usize, l: u32) -> Result<KernelDim> {
    check_depth2_order(n, l)?;
    let field = cyclotomic_field(l)?;
    let basis = Depth2Basis::new(n);
    let y = NcPoly::letter(2, 1);
    let mut rows: BTreeMap<Word, usize> = BTreeMap::new();
    let mut entries = Vec::new();
    for (k, e) in basis.elements().iter().enumerate() {
        let t = qtr_project(&y.nc_mul(&e.body().partial(1))?, l)?;
        for (class, c) in t.terms() {
            let next = rows.len();
            let row = *rows.entry(class.clone()).or_insert(next);
            entries.push((row, k, c.clone()));
        }
    }
    let m = ExactMatrix::from_entries(rows.len(), basis.len(), &field, entries)?;
    let ns = nullspace(&m);
    Ok(KernelDim {
        n,
        l,
        dimension: ns.dim(),
        basis: ns.basis,
    })
}

/// Which functional equations `poly_space_dim` imposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum System {
    /// `p = -p(w, v)` and `p = -q p(v + w, (q - 1) v - w)`.
    Full,
    /// `p = -q p(v + w, (q - 1) v - w)` only.
    SingleB,
    /// `p = q p((q - 1) v - w, v + w)`.
    SingleComposed,
}

impl std::str::FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(System::Full),
            "single-b" => Ok(System::SingleB),
            "single-composed" => Ok(System::SingleComposed),
            _ => Err(Error::Parse(format!("unknown system `{s}`"))),
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::Full => "full",
            System::SingleB => "single-b",
            System::SingleComposed => "single-composed",
        })
    }
}

/// Solutions in degree `n`, as coefficient vectors `(a_0, ..., a_n)` of
/// `a_0 v^n + a_1 v^(n-1) w + ... + a_n w^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySpace {
    pub n: usize,
    pub l: u32,
    pub system: System,
    pub dimension: usize,
    pub basis: Vec<Vec<Scalar>>,
}

/// Product of two binary forms given by coefficient vectors.
fn form_mul(a: &[Scalar], b: &[Scalar], field: &Arc<CyclotomicField>) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(field); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// Matrix of `p(v, w) -> p(m00 v + m01 w, m10 v + m11 w)` on degree-`n`
/// coefficient vectors. Column `j` is the image of `v^(n-j) w^j`.
pub fn substitution_matrix(
    n: usize,
    m: &[[Scalar; 2]; 2],
    field: &Arc<CyclotomicField>,
) -> ExactMatrix {
    let powers = |row: &[Scalar; 2]| {
        let mut out = vec![vec![Scalar::one(field)]];
        for k in 1..=n {
            let next = form_mul(&out[k - 1], row, field);
            out.push(next);
        }
        out
    };
    let first = powers(&m[0]);
    let second = powers(&m[1]);
    let mut entries = Vec::new();
    for j in 0..=n {
        let image = form_mul(&first[n - j], &second[j], field);
        for (i, c) in image.into_iter().enumerate() {
            if !c.is_zero() {
                entries.push((i, j, c));
            }
        }
    }
    ExactMatrix::from_entries(n + 1, n + 1, field, entries).expect("square")
}

/// The swap `A` and the twisted substitution `B`.
fn swap_and_b(n: usize, field: &Arc<CyclotomicField>) -> (ExactMatrix, ExactMatrix) {
    let zero = Scalar::zero(field);
    let one = Scalar::one(field);
    let q = Scalar::root_power(field, 1);
    let q1 = &q - &one;
    let a = substitution_matrix(
        n,
        &[[zero.clone(), one.clone()], [one.clone(), zero]],
        field,
    );
    let b = substitution_matrix(n, &[[one.clone(), one.clone()], [q1, -&one]], field);
    (a, b)
}

/// Dimension and basis of the degree-`n` solutions of `system` over
/// `Q(zeta_l)` with `q = zeta_l`.
pub fn poly_space_dim(n: usize, l: u32, system: System) -> Result<PolySpace> {
    let field = cyclotomic_field(l)?;
    let one = Scalar::one(&field);
    let q = Scalar::root_power(&field, 1);
    let id = ExactMatrix::identity(n + 1, &field);
    let (a, b) = swap_and_b(n, &field);
    let qb = b.scale(&q)?;
    let m = match system {
        System::Full => id.add(&a)?.vstack(&id.add(&qb)?)?,
        System::SingleB => id.add(&qb)?,
        System::SingleComposed => {
            let composed =
                substitution_matrix(n, &[[&q - &one, -&one], [one.clone(), one.clone()]], &field);
            id.add(&composed.scale(&(-&q))?)?
        }
    };
    let ns = nullspace(&m);
    Ok(PolySpace {
        n,
        l,
        system,
        dimension: ns.dim(),
        basis: ns.basis,
    })
}

/// Representatives of the conjugacy classes of the dihedral group of order
/// twelve, with `s = a` and `r = b a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum D12Class {
    E,
    S,
    R,
    R2,
    R3,
    RS,
}

impl D12Class {
    pub const ALL: [D12Class; 6] = [
        D12Class::E,
        D12Class::S,
        D12Class::R,
        D12Class::R2,
        D12Class::R3,
        D12Class::RS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            D12Class::E => "e",
            D12Class::S => "s",
            D12Class::R => "r",
            D12Class::R2 => "r2",
            D12Class::R3 => "r3",
            D12Class::RS => "rs",
        }
    }

    pub fn size(self) -> i64 {
        match self {
            D12Class::E | D12Class::R3 => 1,
            D12Class::R | D12Class::R2 => 2,
            D12Class::S | D12Class::RS => 3,
        }
    }

    /// The class representative as a matrix acting on `(v, w)`.
    pub fn matrix(self) -> Mat2 {
        let r = mat2_mul(&GEN_B, &GEN_A);
        match self {
            D12Class::E => IDENTITY,
            D12Class::S => GEN_A,
            D12Class::R => r,
            D12Class::R2 => mat2_mul(&r, &r),
            D12Class::R3 => mat2_mul(&r, &mat2_mul(&r, &r)),
            D12Class::RS => mat2_mul(&r, &GEN_A),
        }
    }
}

impl std::str::FromStr for D12Class {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        D12Class::ALL
            .into_iter()
            .find(|c| {
                c.name() == s
                    || (s == "r^2" && *c == D12Class::R2)
                    || (s == "r^3" && *c == D12Class::R3)
            })
            .ok_or_else(|| Error::Parse(format!("unknown class `{s}`")))
    }
}

pub type Mat2 = [[i64; 2]; 2];

const IDENTITY: Mat2 = [[1, 0], [0, 1]];
/// `(v, w) -> (w, v)`.
pub const GEN_A: Mat2 = [[0, 1], [1, 0]];
/// `(v, w) -> (v + w, -w)`.
pub const GEN_B: Mat2 = [[1, 1], [0, -1]];

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Inverse of a matrix with determinant `1` or `-1`.
fn mat2_inv_unimodular(m: &Mat2) -> Mat2 {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    assert!(det == 1 || det == -1, "not unimodular");
    [
        [m[1][1] * det, -m[0][1] * det],
        [-m[1][0] * det, m[0][0] * det],
    ]
}

/// Character table rows `chi11, chi12, chi13, chi14, chi21, chi22` on the
/// classes in [`D12Class::ALL`] order.
pub const CHARACTER_TABLE: [[i64; 6]; 6] = [
    [1, 1, 1, 1, 1, 1],
    [1, 1, -1, 1, -1, -1],
    [1, -1, 1, 1, 1, -1],
    [1, -1, -1, 1, -1, 1],
    [2, 0, 1, -1, -2, 0],
    [2, 0, -1, -1, 2, 0],
];

pub const CHI13: [i64; 6] = CHARACTER_TABLE[2];

/// Column orthogonality of [`CHARACTER_TABLE`]: for classes `c, d`,
/// `sum_chi chi(c) chi(d) = [c = d] 12 / |c|`.
pub fn character_table_orthogonal() -> bool {
    let classes = D12Class::ALL;
    let sizes_sum: i64 = classes.iter().map(|c| c.size()).sum();
    sizes_sum == 12
        && (0..6).all(|c| {
            (0..6).all(|d| {
                let s: i64 = CHARACTER_TABLE.iter().map(|row| row[c] * row[d]).sum();
                let expected = if c == d { 12 / classes[c].size() } else { 0 };
                s == expected
            })
        })
}

fn binom(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        BigInt::zero()
    } else {
        binomial(BigInt::from(n), BigInt::from(k))
    }
}

fn sign(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Closed-form matrix of the class representative on degree-`n` forms,
/// with the action `g . p = p(g^-1 (v, w))`.
pub fn d12_matrix(n: usize, g: D12Class) -> ExactMatrix {
    let field = rational_field();
    let size = n + 1;
    let nn = n as i64;
    let entry = |i: i64, j: i64| -> BigInt {
        match g {
            D12Class::E => BigInt::from((i == j) as i64),
            D12Class::S => BigInt::from((i + j == nn + 2) as i64),
            D12Class::R3 => {
                if i == j {
                    sign(nn)
                } else {
                    BigInt::zero()
                }
            }
            D12Class::RS => sign(j - 1) * binom(nn - j + 1, nn - i + 1),
            D12Class::R => sign(nn + 1 - j) * binom(j - 1, nn + 1 - i),
            D12Class::R2 => sign(nn + 1 - j) * binom(nn - j + 1, i - 1),
        }
    };
    let mut entries = Vec::new();
    for i in 1..=size as i64 {
        for j in 1..=size as i64 {
            let v = entry(i, j);
            if !v.is_zero() {
                entries.push((
                    (i - 1) as usize,
                    (j - 1) as usize,
                    Scalar::from_rational(&field, Q::from_integer(v)),
                ));
            }
        }
    }
    ExactMatrix::from_entries(size, size, &field, entries).expect("square")
}

/// Matrix of `p -> p(m^-1 (v, w))` computed by substitution.
pub fn action_matrix(n: usize, m: &Mat2) -> ExactMatrix {
    let field = rational_field();
    let inv = mat2_inv_unimodular(m);
    let s = |v: i64| Scalar::from_i64(&field, v);
    substitution_matrix(
        n,
        &[[s(inv[0][0]), s(inv[0][1])], [s(inv[1][0]), s(inv[1][1])]],
        &field,
    )
}

/// `f_n = sum_k (-1)^k C(n - k, k)` for `n = 0..=max`.
pub fn f_seq(max: usize) -> Vec<BigInt> {
    (0..=max as i64)
        .map(|n| (0..=n / 2).map(|k| sign(k) * binom(n - k, k)).sum())
        .collect()
}

/// The character table row for degree `n`, read off from `n mod 6`.
pub fn character_closed_form(n: usize) -> [i64; 6] {
    let d = n as i64 + 1;
    match n % 6 {
        0 => [d, 1, 1, 1, d, 1],
        1 => [d, 0, 1, -1, -d, 0],
        2 => [d, 1, 0, 0, d, 1],
        3 => [d, 0, -1, 1, -d, 0],
        4 => [d, 1, -1, -1, d, 1],
        _ => [d, 0, 0, 0, -d, 0],
    }
}

/// Traces of the closed-form matrices, checked against
/// [`character_closed_form`] and the binomial sums for `r` and `r^2`.
pub fn d12_characters(n: usize) -> Result<[i64; 6]> {
    let mut chi = [0i64; 6];
    for (slot, g) in chi.iter_mut().zip(D12Class::ALL) {
        let t = d12_matrix(n, g).trace();
        *slot = t
            .as_rational()
            .and_then(|q| q.to_integer().to_i64())
            .ok_or_else(|| Error::Inconsistent("character is not a small integer".into()))?;
    }
    let f = f_seq(n)[n].to_i64().expect("f_n is 0 or +-1");
    let by_sum = [
        n as i64 + 1,
        chi[1],
        f,
        if n.is_multiple_of(2) { f } else { -f },
        chi[4],
        chi[5],
    ];
    if chi != character_closed_form(n) || chi != by_sum {
        return Err(Error::Inconsistent(format!(
            "characters in degree {n} disagree: traces {chi:?}, table {:?}",
            character_closed_form(n)
        )));
    }
    Ok(chi)
}

/// Multiplicity of `chi13` in the degree-`n` representation.
pub fn chi13_multiplicity(n: usize) -> Result<i64> {
    let chi = d12_characters(n)?;
    // Every class is closed under inversion.
    let total: i64 = D12Class::ALL
        .iter()
        .enumerate()
        .map(|(i, c)| c.size() * chi[i] * CHI13[i])
        .sum();
    if total % 12 != 0 {
        return Err(Error::Inconsistent(format!(
            "inner product {total}/12 is not an integer"
        )));
    }
    Ok(total / 12)
}

/// Outcome of enumerating the group generated by `a` and `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct D12GroupCheck {
    pub order: usize,
    pub a_involution: bool,
    pub b_involution: bool,
    pub r_order_six: bool,
    pub r_cubed_is_minus_identity: bool,
    pub dihedral_relation: bool,
}

impl D12GroupCheck {
    pub fn passes(&self) -> bool {
        self.order == 12
            && self.a_involution
            && self.b_involution
            && self.r_order_six
            && self.r_cubed_is_minus_identity
            && self.dihedral_relation
    }
}

pub fn d12_group_check() -> D12GroupCheck {
    let mut seen: BTreeSet<Mat2> = BTreeSet::from([IDENTITY]);
    let mut frontier = vec![IDENTITY];
    while let Some(g) = frontier.pop() {
        for h in [GEN_A, GEN_B] {
            let p = mat2_mul(&g, &h);
            if seen.insert(p) {
                frontier.push(p);
            }
        }
    }
    let r = mat2_mul(&GEN_B, &GEN_A);
    let pow = |m: &Mat2, k: usize| (0..k).fold(IDENTITY, |acc, _| mat2_mul(&acc, m));
    let r_inv = mat2_inv_unimodular(&r);
    D12GroupCheck {
        order: seen.len(),
        a_involution: pow(&GEN_A, 2) == IDENTITY,
        b_involution: pow(&GEN_B, 2) == IDENTITY,
        r_order_six: pow(&r, 6) == IDENTITY && (1..6).all(|k| pow(&r, k) != IDENTITY),
        r_cubed_is_minus_identity: pow(&r, 3) == [[-1, 0], [0, -1]],
        dihedral_relation: mat2_mul(&GEN_A, &mat2_mul(&r, &GEN_A)) == r_inv,
    }
}

/// Depth-two part of a Lie element in two letters.
pub fn depth2_part(psi: &LieElem) -> LieElem {
    psi.component(Selector::YDegree(2))
}

/// True when two nonzero vectors span the same line.
pub fn same_line(a: &[Scalar], b: &[Scalar]) -> bool {
    let Some(first) = a.first() else {
        return false;
    };
    let field = first.field().clone();
    a.len() == b.len()
        && a.iter().any(|x| !x.is_zero())
        && b.iter().any(|x| !x.is_zero())
        && rank_of_vectors(&field, &[a.to_vec(), b.to_vec()]) == 1
}

/// `floor(n / 6)` for even `n`, `0` for odd `n`.
pub fn expected_kernel_dim(n: usize, l: u32) -> usize {
    if l == 1 && n.is_multiple_of(2) {
        n / 6
    } else {
        0
    }
}

/// One cell of the dimension table. `None` marks a cell where the order
/// does not divide the weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimsRow {
    pub n: usize,
    pub l: u32,
    pub weight: usize,
    pub kernel_dim: Option<usize>,
    pub poly_dim: Option<usize>,
    pub multiplicity: Option<i64>,
    pub agree: Option<bool>,
}

pub fn dims_row(n: usize, l: u32) -> Result<DimsRow> {
    let mut row = DimsRow {
        n,
        l,
        weight: n + 2,
        kernel_dim: None,
        poly_dim: None,
        multiplicity: None,
        agree: None,
    };
    match check_depth2_order(n, l) {
        Err(Error::WeightNotDivisible { .. }) => return Ok(row),
        other => other?,
    }
    let k = kernel_dim(n, l)?.dimension;
    let p = poly_space_dim(n, l, System::Full)?.dimension;
    let mult = if l == 1 {
        Some(chi13_multiplicity(n)?)
    } else {
        None
    };
    row.kernel_dim = Some(k);
    row.poly_dim = Some(p);
    row.multiplicity = mult;
    row.agree = Some(k == p && mult.is_none_or(|m| m == k as i64));
    Ok(row)
}

/// Evaluates a coefficient vector as a binary form at rational points.
pub fn eval_form(coeffs: &[Scalar], v: &Scalar, w: &Scalar) -> Scalar {
    let n = coeffs.len().saturating_sub(1);
    let mut total = Scalar::zero(v.field());
    for (j, c) in coeffs.iter().enumerate() {
        let term = c * &(&v.pow((n - j) as i64).expect("nonnegative")
            * &w.pow(j as i64).expect("nonnegative"));
        total = &total + &term;
    }
    total
}

/// Binary form display `a0 v^n + ... + an w^n` for rational coefficients.
pub fn format_form(coeffs: &[Scalar]) -> String {
    let n = coeffs.len().saturating_sub(1);
    let mut parts: Vec<String> = Vec::new();
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mono = match (n - j, j) {
            (0, 0) => String::new(),
            (a, 0) => power_str("v", a),
            (0, b) => power_str("w", b),
            (a, b) => format!("{} {}", power_str("v", a), power_str("w", b)),
        };
        let coeff = match c.as_rational() {
            Some(q) if q.is_one() && !mono.is_empty() => String::new(),
            Some(q) if (-q).is_one() && !mono.is_empty() => "-".into(),
            Some(q) if q.is_negative() => format!("-{} ", -q),
            Some(q) => format!("{q} "),
            None => format!("({c}) "),
        };
        parts.push(format!("{coeff}{mono}").trim_end().to_string());
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => out.push_str(&format!(" - {rest}")),
            None => out.push_str(&format!(" + {p}")),
        }
    }
    out
}

fn power_str(var: &str, e: usize) -> String {
    if e == 1 {
        var.to_string()
    } else {
        format!("{var}^{e}")
    }
}

/// Depth-two part of the Ihara bracket of two Soulé generators.
#[derive(Clone, Debug)]
pub struct SouleBracket {
    pub i: usize,
    pub j: usize,
    pub depth2: LieElem,
    /// Coordinates against [`Depth2Basis`] of x-degree `i + j - 2`.
    pub coordinates: Vec<Q>,
}

/// The depth-two parts of `{sigma_i, sigma_j}`, `3 <= i < j`, `i + j = k`,
/// and the dimension of their span.
#[derive(Clone, Debug)]
pub struct SouleSpan {
    pub weight: usize,
    pub brackets: Vec<SouleBracket>,
    pub rank: usize,
    /// `floor((k - 2) / 6)` for even `k`, else zero.
    pub expected_rank: usize,
    /// `floor((k - 4) / 4) - floor((k - 2) / 6)` for even `k`.
    pub expected_relations: usize,
}

impl SouleSpan {
    pub fn relation_count(&self) -> usize {
        self.brackets.len() - self.rank
    }
}

/// Only the depth-one parts of the generators reach depth two, so the
/// brackets are taken between those.
pub fn soule_depth2_span(k: usize, cap: usize) -> Result<SouleSpan> {
    soule_depth2_span_with(k, cap, |m| crate::grt::soule_generator(m, cap))
}

/// As [`soule_depth2_span`], with the generators supplied by the caller.
pub fn soule_depth2_span_with(
    k: usize,
    cap: usize,
    mut generator: impl FnMut(usize) -> Result<LieElem>,
) -> Result<SouleSpan> {
    crate::freealg::check_weight(k, cap)?;
    let n = k.saturating_sub(2);
    let basis = Depth2Basis::new(n);
    let mut cache: BTreeMap<usize, LieElem> = BTreeMap::new();
    let mut depth1 = |m: usize| -> Result<LieElem> {
        if let Some(e) = cache.get(&m) {
            return Ok(e.clone());
        }
        let e = generator(m)?.component(Selector::YDegree(1));
        cache.insert(m, e.clone());
        Ok(e)
    };
    let mut brackets = Vec::new();
    for i in (3..k).step_by(2) {
        let j = k - i;
        if j <= i || j < 3 || j.is_multiple_of(2) {
            continue;
        }
        let d2 = depth2_part(&crate::tder::ihara(&depth1(i)?, &depth1(j)?)?);
        let coordinates = basis.coordinates(d2.body())?.ok_or_else(|| {
            Error::Inconsistent(format!(
                "bracket of weights {i}, {j} leaves the depth-two span"
            ))
        })?;
        brackets.push(SouleBracket {
            i,
            j,
            depth2: d2,
            coordinates,
        });
    }
    let field = rational_field();
    let vectors: Vec<Vec<Scalar>> = brackets
        .iter()
        .map(|b| {
            b.coordinates
                .iter()
                .map(|c| Scalar::from_rational(&field, c.clone()))
                .collect()
        })
        .collect();
    let rank = if vectors.is_empty() {
        0
    } else {
        rank_of_vectors(&field, &vectors)
    };
    let (expected_rank, expected_relations) = if k.is_multiple_of(2) && k >= 4 {
        ((k - 2) / 6, (k - 4) / 4 - (k - 2) / 6)
    } else {
        (0, 0)
    };
    Ok(SouleSpan {
        weight: k,
        brackets,
        rank,
        expected_rank,
        expected_relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::soule;
    use crate::tder::ihara;

    fn q(v: i64) -> Scalar {
        Scalar::from_i64(&rational_field(), v)
    }

    #[test]
    fn basis_sizes_and_rank() {
        for n in 1..=12 {
            let b = Depth2Basis::new(n);
            assert_eq!(b.len(), n.div_ceil(2));
            assert_eq!(b.rank(), b.len());
        }
    }

    #[test]
    fn kernel_small_cases() {
        assert_eq!(kernel_dim(5, 1).unwrap().dimension, 0);
        assert_eq!(kernel_dim(6, 1).unwrap().dimension, 1);
        assert_eq!(kernel_dim(12, 1).unwrap().dimension, 2);
        for l in [2, 4, 8] {
            assert_eq!(kernel_dim(6, l).unwrap().dimension, 0);
        }
        for l in [2, 3, 4, 6, 12] {
            assert_eq!(kernel_dim(10, l).unwrap().dimension, 0);
        }
        assert!(matches!(
            kernel_dim(5, 2),
            Err(Error::WeightNotDivisible {
                weight: 7,
                order: 2
            })
        ));
    }

    #[test]
    fn kernel_line_matches_bracket() {
        let s3 = soule(3).unwrap();
        let s5 = soule(5).unwrap();
        let d2 = depth2_part(&ihara(&s3, &s5).unwrap());
        let basis = Depth2Basis::new(6);
        let coords = basis.coordinates(d2.body()).unwrap().expect("in span");
        let f = rational_field();
        let v: Vec<Scalar> = coords
            .into_iter()
            .map(|c| Scalar::from_rational(&f, c))
            .collect();
        let k = kernel_dim(6, 1).unwrap();
        assert!(same_line(&v, &k.basis[0]));
    }

    #[test]
    fn superdivergence_quadratic() {
        let p = poly_space_dim(2, 2, System::SingleComposed).unwrap();
        assert_eq!(p.dimension, 1);
        let v = &p.basis[0];
        let scale = v[0].clone();
        let normalized: Vec<Scalar> = v.iter().map(|c| c.checked_div(&scale).unwrap()).collect();
        let rational: Vec<Q> = normalized
            .iter()
            .map(|c| c.as_rational().unwrap().clone())
            .collect();
        assert_eq!(
            rational,
            vec![
                Q::from_integer(1.into()),
                Q::from_integer(3.into()),
                Q::from_integer(1.into())
            ]
        );
        assert_eq!(format_form(&normalized), "v^2 + 3 v w + w^2");
        for n in [4, 8, 12] {
            assert_eq!(
                poly_space_dim(n, 2, System::SingleComposed)
                    .unwrap()
                    .dimension,
                0
            );
        }
        assert_eq!(
            poly_space_dim(6, 2, System::SingleComposed)
                .unwrap()
                .dimension,
            1
        );
    }

    #[test]
    fn closed_forms_match_substitution() {
        for n in 0..=9 {
            for g in D12Class::ALL {
                assert_eq!(
                    d12_matrix(n, g),
                    action_matrix(n, &g.matrix()),
                    "n={n} {g:?}"
                );
            }
        }
        let rs = d12_matrix(1, D12Class::RS);
        assert_eq!(
            rs,
            ExactMatrix::from_i64_rows(&rational_field(), &[vec![1, 0], vec![1, -1]])
        );
    }

    #[test]
    fn r_cubed_and_group_law() {
        let f = rational_field();
        for n in 0..=7 {
            let id = ExactMatrix::identity(n + 1, &f);
            let r3 = d12_matrix(n, D12Class::R3);
            if n % 2 == 0 {
                assert_eq!(r3, id);
            } else {
                assert_eq!(r3, id.scale(&q(-1)).unwrap());
            }
            let r = d12_matrix(n, D12Class::R);
            let s = d12_matrix(n, D12Class::S);
            assert_eq!(r.mul(&s).unwrap(), d12_matrix(n, D12Class::RS));
            // s r s = r^-1
            assert_eq!(s.mul(&r).unwrap().mul(&s).unwrap().mul(&r).unwrap(), id);
        }
    }

    #[test]
    fn characters_and_multiplicities() {
        assert_eq!(d12_characters(6).unwrap(), [7, 1, 1, 1, 7, 1]);
        let c8 = d12_characters(8).unwrap();
        assert_eq!((c8[2], c8[3]), (0, 0));
        assert_eq!(chi13_multiplicity(6).unwrap(), 1);
        assert_eq!(chi13_multiplicity(8).unwrap(), 1);
        for n in (1..20).step_by(2) {
            assert_eq!(chi13_multiplicity(n).unwrap(), 0);
        }
        let f: Vec<i64> = f_seq(6).iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(f, vec![1, 1, 0, -1, -1, 0, 1]);
        assert!(character_table_orthogonal());
    }

    #[test]
    fn group_enumeration() {
        let g = d12_group_check();
        assert_eq!(g.order, 12);
        assert!(g.passes());
    }

    #[test]
    fn dims_rows() {
        let r = dims_row(6, 1).unwrap();
        assert_eq!(r.kernel_dim, Some(1));
        assert_eq!(r.agree, Some(true));
        let bad = dims_row(5, 3).unwrap();
        assert_eq!(bad.kernel_dim, None);
        assert_eq!(dims_row(4, 3).unwrap().kernel_dim, Some(0));
    }

    #[test]
    fn soule_span_weight_eight() {
        let span = soule_depth2_span(8, 12).unwrap();
        assert_eq!(span.brackets.len(), 1);
        assert_eq!(span.rank, 1);
        assert_eq!(span.expected_rank, 1);
        assert_eq!(span.relation_count(), span.expected_relations);
        // 5[ad^4 y, ad^2 y] + 2[ad^5 y, ad y] = -5 e_2 - 2 e_1
        let c = &span.brackets[0].coordinates;
        let ratio = c[2].clone() / c[1].clone();
        assert_eq!(ratio, Q::new(5.into(), 2.into()));
        assert!(c[0].is_zero());
    }

    #[test]
    fn eval_form_points() {
        let p = [q(1), q(3), q(1)];
        assert_eq!(eval_form(&p, &q(2), &q(1)), q(11));
    }
}
