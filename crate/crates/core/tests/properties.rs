use proptest::prelude::*;
use twisted_yangian::scalar::Scalar;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-4i64..5, 1i64..4, 0u32..3, 0u32..3).prop_map(|(n, d, a, b)| Scalar::ratio(n, d).mul_ref(&Scalar::eta().pow(a)).mul_ref(&Scalar::xi().pow(b)).add_ref(&Scalar::one()))
}

proptest! {
    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add_ref(&b).mul_ref(&c), a.mul_ref(&c).add_ref(&b.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        if !b.is_zero() {
            prop_assert_eq!(a.checked_div(&b).unwrap().mul_ref(&b), a.clone());
        }
    }

    #[test]
    fn canonical_string_parses_back(a in scalar(), b in scalar()) {
        let x = a.checked_div(&b).unwrap_or(a);
        let back: Scalar = x.to_canonical_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }
}
