//! The cyclotomic fields Q(z) with z a primitive l-th root of unity.
//!
//! Elements are stored as residues modulo the l-th cyclotomic polynomial, so
//! every nonzero element is invertible. Orders 1 and 2 are the rationals.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Q;

/// Descriptor for Q(z), z a primitive `order`-th root of unity.
#[derive(Debug)]
pub struct CyclotomicField {
    order: u32,
    /// Monic cyclotomic polynomial, coefficients from low to high degree.
    modulus: Vec<Q>,
    /// Reduced residues of z^0, ..., z^(order-1).
    powers: Vec<Vec<Q>>,
}

impl CyclotomicField {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree of the extension, Euler's totient of the order.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Cyclotomic polynomial, low to high degree.
    pub fn modulus(&self) -> &[Q] {
        &self.modulus
    }

    fn reduce(&self, mut poly: Vec<Q>) -> Vec<Q> {
        let d = self.degree();
        while poly.len() > d {
            let top = poly.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = poly.len() - d;
            for (j, m) in self.modulus[..d].iter().enumerate() {
                poly[shift + j] -= &top * m;
            }
        }
        poly.resize(d, Q::zero());
        poly
    }
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for CyclotomicField {}

fn trim(p: &mut Vec<Q>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Polynomial long division over Q; `den` must be nonzero after trimming.
fn poly_divrem(num: &[Q], den: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let mut den = den.to_vec();
    trim(&mut den);
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Q::zero(); rem.len() - dd];
    while rem.len() >= den.len() {
        let shift = rem.len() - den.len();
        let factor = rem.last().unwrap() / &lead;
        for (j, c) in den.iter().enumerate() {
            rem[shift + j] -= &factor * c;
        }
        quot[shift] = factor;
        rem.pop();
        trim(&mut rem);
    }
    (quot, rem)
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// The l-th cyclotomic polynomial with integer coefficients, low to high.
///
/// Computed as x^l - 1 divided by the product of the cyclotomic polynomials
/// of all proper divisors of l.
pub fn cyclotomic_polynomial(l: u32) -> Result<Vec<BigInt>> {
    let field = cyclotomic_field(l)?;
    Ok(field.modulus.iter().map(|c| c.to_integer()).collect())
}

fn compute_modulus(l: u32) -> Vec<Q> {
    let mut num = vec![Q::zero(); l as usize + 1];
    num[0] = -Q::one();
    num[l as usize] = Q::one();
    let mut den = vec![Q::one()];
    for d in 1..l {
        if l.is_multiple_of(d) {
            let phi_d = compute_modulus(d);
            den = poly_mul(&den, &phi_d);
        }
    }
    let (quot, rem) = poly_divrem(&num, &den);
    debug_assert!(rem.is_empty());
    quot
}

fn build_field(l: u32) -> CyclotomicField {
    let modulus = compute_modulus(l);
    let mut field = CyclotomicField {
        order: l,
        modulus,
        powers: Vec::new(),
    };
    let powers = (0..l as usize)
        .map(|k| {
            let mut mono = vec![Q::zero(); k + 1];
            mono[k] = Q::one();
            field.reduce(mono)
        })
        .collect();
    field.powers = powers;
    field
}

/// Returns the (cached) field Q(z) for a primitive `l`-th root of unity z.
pub fn cyclotomic_field(l: u32) -> Result<Arc<CyclotomicField>> {
    if l == 0 {
        return Err(Error::ZeroOrder);
    }
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    Ok(guard
        .entry(l)
        .or_insert_with(|| Arc::new(build_field(l)))
        .clone())
}

/// The rationals, viewed as the cyclotomic field of order 1.
pub fn rational_field() -> Arc<CyclotomicField> {
    cyclotomic_field(1).expect("order 1 is valid")
}

/// An element of a cyclotomic field.
#[derive(Clone)]
pub struct Scalar {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Q>,
}

impl Scalar {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Scalar {
            field: field.clone(),
            coeffs: vec![Q::zero(); field.degree()],
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_rational(field, Q::one())
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, value: Q) -> Self {
        let mut coeffs = vec![Q::zero(); field.degree()];
        coeffs[0] = value;
        Scalar {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_i64(field: &Arc<CyclotomicField>, value: i64) -> Self {
        Self::from_rational(field, Q::from_integer(value.into()))
    }

    /// Builds an element from a coefficient vector in powers of z of any
    /// length; the vector is reduced modulo the cyclotomic polynomial.
    pub fn from_poly(field: &Arc<CyclotomicField>, poly: Vec<Q>) -> Self {
        Scalar {
            field: field.clone(),
            coeffs: field.reduce(poly),
        }
    }

    /// The generator z.
    pub fn generator(field: &Arc<CyclotomicField>) -> Self {
        Self::root_power(field, 1)
    }

    /// z^k for any integer k (negative exponents wrap modulo the order).
    pub fn root_power(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let l = field.order as i64;
        let idx = k.rem_euclid(l) as usize;
        Scalar {
            field: field.clone(),
            coeffs: field.powers[idx].clone(),
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    /// Coefficients in the power basis 1, z, ..., z^(deg-1).
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<&Q> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.field.order != other.field.order {
            return Err(Error::FieldMismatch {
                left: self.field.order,
                right: other.field.order,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Scalar {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Scalar {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        if self.field.degree() == 1 {
            return Ok(Scalar {
                field: self.field.clone(),
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            });
        }
        let prod = poly_mul(&self.coeffs, &other.coeffs);
        Ok(Scalar {
            field: self.field.clone(),
            coeffs: self.field.reduce(prod),
        })
    }

    pub fn scale(&self, factor: &Q) -> Scalar {
        Scalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm over Q[x].
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.field.degree() == 1 {
            return Ok(Scalar {
                field: self.field.clone(),
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        // Invariant: s * a = r (mod modulus) for both rows.
        let mut r0 = self.field.modulus.clone();
        let mut s0: Vec<Q> = Vec::new();
        let mut r1 = self.coeffs.clone();
        trim(&mut r1);
        let mut s1 = vec![Q::one()];
        while r1.len() > 1 {
            let (quot, rem) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&quot, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant because the modulus is irreducible.
        let c = r1[0].recip();
        let inv: Vec<Q> = s1.iter().map(|x| x * &c).collect();
        Ok(Scalar::from_poly(&self.field, inv))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, exp: i64) -> Result<Scalar> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Scalar::one(&self.field);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Parses the textual form produced by `Display`: a rational `p/q`, or a
    /// sum such as `1/2 + -3*z + 2*z^2` in the power basis.
    pub fn parse(field: &Arc<CyclotomicField>, text: &str) -> Result<Scalar> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let mut poly: Vec<Q> = Vec::new();
        for part in text.split(" + ") {
            let part = part.trim();
            let (coeff, power) = if let Some(idx) = part.find('z') {
                let head = part[..idx].trim_end_matches('*').trim();
                let tail = &part[idx + 1..];
                let power = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^')
                        .and_then(|p| p.parse::<usize>().ok())
                        .ok_or_else(|| Error::Parse(format!("bad power in `{part}`")))?
                };
                let coeff = match head {
                    "" => Q::one(),
                    "-" => -Q::one(),
                    h => parse_rational(h)?,
                };
                (coeff, power)
            } else {
                (parse_rational(part)?, 0)
            };
            if poly.len() <= power {
                poly.resize(power + 1, Q::zero());
            }
            poly[power] += coeff;
        }
        Ok(Scalar::from_poly(field, poly))
    }
}

/// Parses `p`, `-p` or `p/q` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Q> {
    let text = text.trim();
    let bad = || Error::Parse(format!("invalid rational `{text}`"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Q::new(n, d))
        }
        None => {
            let n: BigInt = text.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(n))
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for Scalar {}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar[l={}]({})", self.field.order, self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree() == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => c.to_string(),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{k}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

// Operator forms panic on mixed fields; the `checked_*` methods return errors.
impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar field mismatch")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar field mismatch")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Sign of a rational as -1, 0 or 1.
pub fn rational_signum(q: &Q) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1).unwrap(), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2).unwrap(), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4).unwrap(), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6).unwrap(), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12).unwrap(), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_field(8).unwrap().degree(), 4);
        assert!(matches!(cyclotomic_field(0), Err(Error::ZeroOrder)));
    }

    #[test]
    fn generator_is_primitive_root() {
        for l in 1..=12u32 {
            let k = cyclotomic_field(l).unwrap();
            let q = Scalar::generator(&k);
            assert!(q.pow(l as i64).unwrap().is_one(), "q^l = 1 for l = {l}");
            for m in 1..l as i64 {
                assert!(!q.pow(m).unwrap().is_one(), "q^{m} != 1 for l = {l}");
            }
        }
        let k1 = cyclotomic_field(1).unwrap();
        assert!(Scalar::generator(&k1).is_one());
        let k4 = cyclotomic_field(4).unwrap();
        let q = Scalar::generator(&k4);
        assert_eq!(&q * &q, Scalar::from_i64(&k4, -1));
    }

    #[test]
    fn inverse_and_parse_roundtrip() {
        let k = cyclotomic_field(5).unwrap();
        let a = Scalar::parse(&k, "1/2 + -3*z + 2*z^3").unwrap();
        assert_eq!(Scalar::parse(&k, &a.to_string()).unwrap(), a);
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert!(matches!(Scalar::zero(&k).inv(), Err(Error::DivisionByZero)));
        let q = Scalar::parse(&k, "z").unwrap();
        assert_eq!(q, Scalar::generator(&k));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = Scalar::one(&cyclotomic_field(3).unwrap());
        let b = Scalar::one(&cyclotomic_field(4).unwrap());
        assert_eq!(
            a.checked_add(&b),
            Err(Error::FieldMismatch { left: 3, right: 4 })
        );
    }
}
