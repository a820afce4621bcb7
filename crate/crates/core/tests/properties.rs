use std::sync::Arc;

use kvdepth::depth2::{d12_characters, f_seq, kernel_dim, poly_space_dim, System};
use kvdepth::exactla::{cyclotomic_field, nullspace, CyclotomicField, ExactMatrix, Scalar};
use kvdepth::freealg::{NcPoly, Word};
use kvdepth::grt::{t4_bracket, T4Elem};
use kvdepth::lie::{bracket, dynkin, is_lie, LieElem};
use kvdepth::tder::{tder_apply, TDer};
use kvdepth::traces::qtr_project;
use kvdepth::verify::{cocycle_defect, random_lie, random_tder};
use kvdepth::Q;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

fn field(l: u32) -> Arc<CyclotomicField> {
    cyclotomic_field(l).unwrap()
}

fn scalar(l: u32) -> impl Strategy<Value = Scalar> {
    prop::collection::vec(-4i64..=4, 0..6)
        .prop_map(move |c| Scalar::from_poly(&field(l), c.into_iter().map(q).collect()))
}

fn scalar_triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    prop::sample::select(vec![1u32, 2, 3, 4, 5, 8, 12])
        .prop_flat_map(|l| (scalar(l), scalar(l), scalar(l)))
}

fn word(n: u8, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..n, 0..=max_len).prop_map(|w| Word::from_letters(&w))
}

fn poly(n: u8, max_len: usize) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((word(n, max_len), -3i64..=3), 0..6).prop_map(move |terms| {
        let mut p = NcPoly::zero(n as usize);
        for (w, c) in terms {
            p.add_term(w, q(c));
        }
        p
    })
}

fn lie(seed: u64, m: usize) -> LieElem {
    random_lie(&mut ChaCha8Rng::seed_from_u64(seed), m)
}

fn rational_matrix() -> impl Strategy<Value = ExactMatrix> {
    (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-2i64..=2, c), r)
            .prop_map(|rows| ExactMatrix::from_i64_rows(&field(1), &rows))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((a, b, c) in scalar_triple()) {
        let ab = a.checked_mul(&b).unwrap();
        prop_assert_eq!(ab.clone(), b.checked_mul(&a).unwrap());
        prop_assert_eq!(
            ab.checked_mul(&c).unwrap(),
            a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.checked_mul(&b.checked_add(&c).unwrap()).unwrap(),
            ab.checked_add(&a.checked_mul(&c).unwrap()).unwrap()
        );
        if !a.is_zero() {
            prop_assert!(a.checked_mul(&a.inv().unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn root_of_unity_has_its_order(l in prop::sample::select(vec![1u32, 2, 3, 4, 6, 8, 12])) {
        let f = field(l);
        let r = Scalar::root_power(&f, 1);
        prop_assert!(r.pow(i64::from(l)).unwrap().is_one());
        for k in 1..l {
            prop_assert!(!r.pow(i64::from(k)).unwrap().is_one());
        }
    }

    #[test]
    fn nullspace_is_annihilated(m in rational_matrix()) {
        let ns = nullspace(&m);
        prop_assert_eq!(ns.rank + ns.basis.len(), m.cols());
        for v in &ns.basis {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn right_derivative_reconstruction(a in poly(3, 4)) {
        let mut rebuilt = NcPoly::monomial(3, Word::empty(), a.constant_term());
        for k in 0..3 {
            rebuilt.add_assign(&a.partial(k).nc_mul(&NcPoly::letter(3, k)).unwrap());
        }
        prop_assert_eq!(rebuilt, a);
    }

    #[test]
    fn substitution_is_multiplicative(a in poly(2, 3), b in poly(2, 3), s in poly(2, 2), t in poly(2, 2)) {
        let strip = |p: NcPoly| {
            let mut p = p;
            p.add_term(Word::empty(), -p.constant_term());
            p
        };
        let images = [strip(s), strip(t)];
        let lhs = a.nc_mul(&b).unwrap().substitute(&images).unwrap();
        let rhs = a.substitute(&images).unwrap().nc_mul(&b.substitute(&images).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_identity(s in any::<u64>(), ma in 1usize..4, mb in 1usize..4, mc in 1usize..4) {
        let (a, b, c) = (lie(s, ma), lie(s ^ 1, mb), lie(s ^ 2, mc));
        let mut total = bracket(&a, &bracket(&b, &c).unwrap()).unwrap();
        total = total.checked_add(&bracket(&b, &bracket(&c, &a).unwrap()).unwrap()).unwrap();
        total = total.checked_add(&bracket(&c, &bracket(&a, &b).unwrap()).unwrap()).unwrap();
        prop_assert!(total.is_zero());
    }

    #[test]
    fn dynkin_scales_lie_elements(s in any::<u64>(), m in 1usize..7) {
        let a = lie(s, m);
        prop_assert!(is_lie(a.body()));
        prop_assert_eq!(dynkin(a.body()).unwrap(), a.body().scale_i64(m as i64));
    }

    #[test]
    fn trace_rotation_picks_up_q(
        l in prop::sample::select(vec![1u32, 2, 3, 4]),
        letters in prop::collection::vec(0u8..2, 1..8),
        first in 0u8..2,
    ) {
        let mut w = vec![first];
        w.extend(letters);
        w.truncate(w.len() - w.len() % l as usize);
        prop_assume!(!w.is_empty());
        let f = field(l);
        let x = NcPoly::letter(2, w[0] as usize);
        let a = NcPoly::monomial(2, Word::from_letters(&w[1..]), q(1));
        let left = qtr_project(&x.nc_mul(&a).unwrap(), l).unwrap();
        let right = qtr_project(&a.nc_mul(&x).unwrap(), l).unwrap()
            .scale(&Scalar::root_power(&f, 1)).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn derivations_obey_leibniz(s in any::<u64>(), a in poly(2, 3), b in poly(2, 3)) {
        let u = random_tder(&mut ChaCha8Rng::seed_from_u64(s), &[1, 2, 3]);
        let lhs = tder_apply(&u, &a.nc_mul(&b).unwrap()).unwrap();
        let rhs = tder_apply(&u, &a).unwrap().nc_mul(&b).unwrap()
            .checked_add(&a.nc_mul(&tder_apply(&u, &b).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn t4_jacobi(picks in prop::collection::vec((0usize..6, -2i64..=2), 3..=9)) {
        let pairs = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
        let mut elems = [T4Elem::<Q>::zero(), T4Elem::zero(), T4Elem::zero()];
        for (k, &(g, c)) in picks.iter().enumerate() {
            let (i, j) = pairs[g];
            let gen = T4Elem::generator(i, j).unwrap().scale(&q(c));
            let slot = k % 3;
            let next = if k >= 3 {
                t4_bracket(&elems[slot], &gen).add(&gen)
            } else {
                gen
            };
            elems[slot] = next;
        }
        let [a, b, c] = elems;
        let total = t4_bracket(&a, &t4_bracket(&b, &c))
            .add(&t4_bracket(&b, &t4_bracket(&c, &a)))
            .add(&t4_bracket(&c, &t4_bracket(&a, &b)));
        prop_assert!(total.is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cocycle_identity(s in any::<u64>(), l in 1u32..=3) {
        let weights: Vec<usize> = (1..=6).filter(|m| m % l as usize == 0).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let u: TDer = random_tder(&mut rng, &weights);
        let v = random_tder(&mut rng, &weights);
        prop_assert!(cocycle_defect(&u, &v, l).unwrap().is_zero());
    }

    #[test]
    fn rotation_character_is_signed_f(n in 0usize..=36) {
        let chi = d12_characters(n).unwrap();
        let f = f_seq(n);
        let sign = if n % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(num_bigint::BigInt::from(chi[3] * sign), f[n].clone());
    }

    #[test]
    fn kernel_matches_functional_equations(n in 0usize..=24) {
        prop_assert_eq!(
            kernel_dim(n, 1).unwrap().dimension,
            poly_space_dim(n, 1, System::Full).unwrap().dimension
        );
    }
}
