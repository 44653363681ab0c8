//! Randomized invariants on fields too large for exhaustive checks.

use galois_mubs::cyclo::PhaseExponent;
use galois_mubs::gf::GaloisField;
use galois_mubs::mub::{mub_state, overlap_sq_scaled};
use galois_mubs::pauli::{u_op, PhaseConvention, WeylOperator};
use num_bigint::BigInt;
use proptest::prelude::*;

const FIELDS: [(u32, u32); 8] = [
    (2, 5),
    (2, 6),
    (3, 4),
    (5, 3),
    (7, 2),
    (11, 2),
    (13, 2),
    (2, 9),
];

fn field_and_labels(k: usize) -> impl Strategy<Value = (GaloisField, Vec<u32>)> {
    (0..FIELDS.len()).prop_flat_map(move |idx| {
        let (p, m) = FIELDS[idx];
        let f = GaloisField::new(p, m).unwrap();
        let n = f.order();
        (Just(f), proptest::collection::vec(0..n, k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms((f, v) in field_and_labels(3)) {
        let [a, b, c] = [v[0], v[1], v[2]].map(|x| f.element(x).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            prop_assert_eq!(f.div(f.mul(a, b), a).unwrap(), b);
        }
        let p = f.p() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
        prop_assert_eq!(f.pow(a, f.order() as u64), a);
    }

    #[test]
    fn characters_are_additive((f, v) in field_and_labels(2)) {
        let [a, b] = [v[0], v[1]].map(|x| f.element(x).unwrap());
        let lhs = (f.char_exponent(a) + f.char_exponent(b)) % f.p();
        prop_assert_eq!(lhs, f.char_exponent(f.add(a, b)));
    }

    #[test]
    fn weyl_composition_is_associative((f, v) in field_and_labels(6)) {
        let e = |x: u32| f.element(x).unwrap();
        let a = WeylOperator::new(&f, e(v[0]), e(v[1])).as_phased();
        let b = WeylOperator::new(&f, e(v[2]), e(v[3])).as_phased();
        let c = WeylOperator::new(&f, e(v[4]), e(v[5])).as_phased();
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(a.compose(&a.adjoint()).unwrap().is_identity());
    }

    #[test]
    fn u_group_law((f, v) in field_and_labels(3), shift in 0u32..1000) {
        let i = v[0] % (f.order() + 1);
        let conv = PhaseConvention::with_shift(f.element(shift % f.order()).unwrap());
        let l1 = f.element(v[1]).unwrap();
        let l2 = f.element(v[2]).unwrap();
        let a = u_op(&f, i, l1, conv).unwrap().as_phased();
        let b = u_op(&f, i, l2, conv).unwrap().as_phased();
        let sum = u_op(&f, i, f.add(l1, l2), conv).unwrap().as_phased();
        prop_assert_eq!(a.compose(&b).unwrap(), sum);
    }

    #[test]
    fn cross_basis_overlaps_are_exact((f, v) in field_and_labels(4)) {
        let n = f.order();
        let conv = PhaseConvention::default();
        let (i, j) = (1 + v[0] % n, 1 + v[1] % n);
        let a = mub_state(&f, i, f.element(v[2]).unwrap(), conv).unwrap();
        let b = mub_state(&f, j, f.element(v[3]).unwrap(), conv).unwrap();
        let value = overlap_sq_scaled(&f, &a, &b);
        let expected = if i != j {
            BigInt::from(n)
        } else if v[2] == v[3] {
            BigInt::from(n) * n
        } else {
            BigInt::from(0)
        };
        prop_assert_eq!(value, expected);
    }

    #[test]
    fn phase_exponents_form_a_group(p in prop::sample::select(vec![2u32, 3, 5, 7, 11]), a in any::<i32>(), b in any::<i32>()) {
        let den = 2 * p;
        let x = PhaseExponent::new(a as i64, den);
        let y = PhaseExponent::new(b as i64, den);
        prop_assert_eq!(x.compose(y), y.compose(x));
        prop_assert!(x.compose(x.inverse()).is_zero());
        prop_assert!(x.times(den as u64).is_zero());
        let z = x.to_complex() * y.to_complex();
        prop_assert!((z - x.compose(y).to_complex()).norm() < 1e-12);
    }
}
