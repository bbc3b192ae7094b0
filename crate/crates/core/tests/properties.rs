use padic_gk::padic::{CycloElement, Jet, PadicScalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const W: u32 = 30;

fn primes() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![5u32, 7, 11, 13])
}

fn scalar(p: u32, seed: u64, lo: i64, hi: i64) -> PadicScalar {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PadicScalar::random(&mut rng, p, lo..=hi, W)
}

fn cyclo(p: u32, seed: u64) -> CycloElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CycloElement::random(&mut rng, p, W)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn scalar_ring_axioms(p in primes(), s in any::<u64>()) {
        let a = scalar(p, s, -3, 3);
        let b = scalar(p, s ^ 1, -3, 3);
        let c = scalar(p, s ^ 2, -3, 3);
        prop_assert!((&a + &b).agrees_with(&(&b + &a)));
        prop_assert!((&a * &b).agrees_with(&(&b * &a)));
        prop_assert!((&(&a + &b) + &c).agrees_with(&(&a + &(&b + &c))));
        prop_assert!((&(&a * &b) * &c).agrees_with(&(&a * &(&b * &c))));
        prop_assert!((&a * &(&b + &c)).agrees_with(&(&(&a * &b) + &(&a * &c))));
        prop_assert!((&a - &a).is_zero());
        prop_assert!(a.checked_div(&b).unwrap().checked_mul(&b).unwrap().agrees_with(&a));
    }

    #[test]
    fn valuation_is_additive(p in primes(), s in any::<u64>()) {
        let a = scalar(p, s, -5, 5);
        let b = scalar(p, s ^ 7, -5, 5);
        prop_assert_eq!((&a * &b).valuation(), Some(a.valuation().unwrap() + b.valuation().unwrap()));
        let sum = &a + &b;
        if a.valuation() != b.valuation() && !sum.is_zero() {
            prop_assert_eq!(sum.valuation(), a.valuation().min(b.valuation()));
        }
        prop_assert_eq!(a.inv().unwrap().valuation(), a.valuation().map(|v| -v));
    }

    #[test]
    fn cyclo_ring_axioms(p in prop::sample::select(vec![5u32, 7]), s in any::<u64>()) {
        let a = cyclo(p, s);
        let b = cyclo(p, s ^ 3);
        let c = cyclo(p, s ^ 5);
        let ab = a.checked_mul(&b).unwrap();
        prop_assert!(ab.agrees_with(&b.checked_mul(&a).unwrap()));
        let lhs = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
        let rhs = ab.checked_add(&a.checked_mul(&c).unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
        if let Ok(q) = ab.checked_div(&b) {
            prop_assert!(q.agrees_with(&a));
        }
        if let (Ok(va), Ok(vb), Ok(vab)) = (a.valuation(), b.valuation(), ab.valuation()) {
            prop_assert_eq!(vab, va + vb);
        }
    }

    #[test]
    fn jet_chain_rule_on_polynomials(
        p in primes(),
        coeffs in prop::collection::vec(-50i64..50, 1..=5),
        x in -1000i64..1000,
    ) {
        // f(x) via Horner on jets against the symbolic derivative
        let s = Jet::variable(PadicScalar::from_i64(p, x, W), W);
        let mut f = Jet::constant(PadicScalar::exact_zero(p));
        for &c in coeffs.iter().rev() {
            f = f.mul(&s).unwrap().add(&Jet::constant(PadicScalar::from_i64(p, c, W))).unwrap();
        }
        let value: i128 = coeffs.iter().rev().fold(0i128, |acc, &c| acc * x as i128 + c as i128);
        let deriv: i128 = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0i128, |acc, (k, &c)| acc * x as i128 + k as i128 * c as i128);
        let expect = |n: i128| PadicScalar::from_bigint(p, &n.into(), W);
        prop_assert!(f.value.agrees_with(&expect(value)));
        prop_assert!(f.deriv.agrees_with(&expect(deriv)));
        // composing with g(s) = s^2 + 1 multiplies the derivative by 2x
        let one = Jet::constant(PadicScalar::one(p, W));
        let g = s.mul(&s).unwrap().add(&one).unwrap();
        let mut fg = Jet::constant(PadicScalar::exact_zero(p));
        for &c in coeffs.iter().rev() {
            fg = fg.mul(&g).unwrap().add(&Jet::constant(PadicScalar::from_i64(p, c, W))).unwrap();
        }
        let gx = x as i128 * x as i128 + 1;
        let fprime_at_g: i128 = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0i128, |acc, (k, &c)| acc * gx + k as i128 * c as i128);
        prop_assert!(fg.deriv.agrees_with(&expect(fprime_at_g * 2 * x as i128)));
    }

    #[test]
    fn text_round_trip(p in primes(), s in any::<u64>()) {
        let a = scalar(p, s, -10, 10);
        prop_assert_eq!(PadicScalar::parse(&a.to_string(), p).unwrap(), a.clone());
        let z = PadicScalar::zero_at(p, (s % 50) as i64 - 5);
        prop_assert_eq!(PadicScalar::parse(&z.to_string(), p).unwrap(), z);
        let j = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<PadicScalar>(&j).unwrap(), a);
        let c = cyclo(p, s);
        prop_assert_eq!(CycloElement::parse(&c.to_string(), p).unwrap(), c);
    }

    #[test]
    fn truncation_keeps_agreement(p in primes(), s in any::<u64>(), d in 1u32..W) {
        let a = scalar(p, s, -3, 3);
        let t = a.truncate(d);
        prop_assert_eq!(t.trusted(), d);
        prop_assert!(t.agrees_with(&a));
    }
}

#[test]
fn exact_zero_is_absorbing_and_neutral() {
    let p = 7;
    let a = PadicScalar::from_i64(p, 12, W);
    let z = PadicScalar::exact_zero(p);
    assert_eq!(&a + &z, a);
    assert!((&a * &z).is_exact_zero());
    assert!(a.checked_div(&z).is_err());
    assert!(PadicScalar::parse("7^2 * 3 :: 1", 5).is_err());
    assert!(PadicScalar::parse("garbage", 5).is_err());
}
