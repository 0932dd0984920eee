use hecke_padic_core::padic::{PadicField, PadicNumber};
use proptest::prelude::*;

const N: i64 = 20;

fn elem(p: u64, deg: usize, c: &[i64]) -> PadicNumber {
    let k = PadicField::new(p, deg).unwrap();
    PadicNumber::from_coeffs(k, &c[..deg], N).unwrap()
}

fn field_params() -> impl Strategy<Value = (u64, usize)> {
    prop_oneof![Just((5u64, 1usize)), Just((7, 1)), Just((5, 2)), Just((7, 2))]
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-1_000_000_000i64..1_000_000_000, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distributive((p, d) in field_params(), a in coeffs(), b in coeffs(), c in coeffs()) {
        let (x, y, z) = (elem(p, d, &a), elem(p, d, &b), elem(p, d, &c));
        let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
        let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn inverse_of_units((p, d) in field_params(), a in coeffs()) {
        let x = elem(p, d, &a);
        prop_assume!(x.is_unit());
        let one = x.mul(&x.inverse().unwrap()).unwrap();
        prop_assert!(one.equals(&PadicNumber::one(x.field().clone(), N).unwrap()));
    }

    #[test]
    fn teichmuller_is_a_root_of_unity((p, d) in field_params(), a in coeffs()) {
        let x = elem(p, d, &a);
        prop_assume!(x.is_unit());
        let t = x.teichmuller().unwrap();
        let q = x.field().residue_size() as u64;
        prop_assert!(t.pow(q - 1).unwrap().equals(&PadicNumber::one(x.field().clone(), N).unwrap()));
        let modp = |v: &PadicNumber| v.residues().unwrap().iter().map(|r| r % p as u128).collect::<Vec<_>>();
        prop_assert_eq!(modp(&t), modp(&x));
    }

    #[test]
    fn log_inverts_exp((p, d) in field_params(), a in coeffs()) {
        let x = elem(p, d, &a).mul_int(p as i64).unwrap().with_precision(N);
        let back = x.pexp().unwrap().plog(true).unwrap();
        let prec = back.abs_precision().min(x.abs_precision());
        prop_assert!(back.with_precision(prec).equals(&x.with_precision(prec)));
    }
}
