//! Randomized invariants of the exact arithmetic layer.

use num::{One, Zero};
use proptest::prelude::*;

use eqehrhart::linalg::{Int, Rat};
use eqehrhart::{CyclotomicValue, IntPolynomial, RationalFunction};

fn poly_strategy() -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-3i64..=3, 1..6).prop_map(|cs| IntPolynomial::from_i64(&cs))
}

fn factors_strategy() -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((1usize..=3, 1usize..=2), 0..3)
}

/// Extra denominator factor with constant term one, so the series exists.
fn extra_strategy() -> impl Strategy<Value = IntPolynomial> {
    (-2i64..=2).prop_map(|c| IntPolynomial::from_i64(&[1, c]))
}

fn convolve(a: &[Rat], b: &[Rat], k: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); k + 1];
    for (i, x) in a.iter().enumerate().take(k + 1) {
        for (j, y) in b.iter().enumerate() {
            if i + j > k {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

proptest! {
    /// Expanding a rational function and re-multiplying by its denominator
    /// reproduces the numerator, up to numerator degree plus five.
    #[test]
    fn series_round_trip(
        num in poly_strategy(),
        factors in factors_strategy(),
        extra in extra_strategy(),
    ) {
        let f = RationalFunction::new(num.clone(), &factors, extra.clone());
        let k = num.degree() + 5;
        let series = f.series(k + 1).expect("denominator has unit constant term");
        let mut denom = extra;
        for (a, b) in &factors {
            denom = denom.mul(&IntPolynomial::one_minus_t_pow(*a).pow(*b));
        }
        let product = convolve(&series, &denom.to_rat_coeffs(), k);
        for (i, c) in product.iter().enumerate() {
            prop_assert_eq!(
                c.clone(),
                Rat::from_integer(num.coeff(i)),
                "degree {} of series times denominator",
                i
            );
        }
    }

    /// Addition and multiplication of rational functions commute with
    /// pointwise evaluation away from poles.
    #[test]
    fn evaluation_is_a_homomorphism(
        num1 in poly_strategy(),
        num2 in poly_strategy(),
        factors in factors_strategy(),
        p in -5i64..=5,
        q in 2i64..=7,
    ) {
        let f = RationalFunction::new(num1, &factors, IntPolynomial::one());
        let g = RationalFunction::from_poly(num2);
        let x = Rat::new(Int::from(p), Int::from(q));
        prop_assume!(f.eval_at(&x).is_some());
        let fx = f.eval_at(&x).unwrap();
        let gx = g.eval_at(&x).unwrap();
        prop_assert_eq!(f.add(&g).eval_at(&x).unwrap(), &fx + &gx);
        prop_assert_eq!(f.mul(&g).eval_at(&x).unwrap(), &fx * &gx);
        prop_assert_eq!(f.sub(&g).eval_at(&x).unwrap(), &fx - &gx);
    }

    /// Cyclotomic arithmetic tracks floating-point arithmetic on the unit
    /// circle within 1e-9; exact equality remains the real contract.
    #[test]
    fn cyclotomic_matches_floating_point(
        n in 1usize..=12,
        k1 in 0usize..12,
        k2 in 0usize..12,
        s1 in -3i64..=3,
        s2 in -3i64..=3,
    ) {
        let a = CyclotomicValue::root_of_unity(n, k1 % n)
            .scale(&Rat::from_integer(Int::from(s1)));
        let b = CyclotomicValue::root_of_unity(n, k2 % n)
            .scale(&Rat::from_integer(Int::from(s2)));
        let (ar, ai) = a.to_complex();
        let (br, bi) = b.to_complex();
        let close = |x: (f64, f64), y: (f64, f64)| {
            (x.0 - y.0).abs() < 1e-9 && (x.1 - y.1).abs() < 1e-9
        };
        prop_assert!(close(a.add(&b).to_complex(), (ar + br, ai + bi)));
        prop_assert!(close(a.sub(&b).to_complex(), (ar - br, ai - bi)));
        prop_assert!(close(
            a.mul(&b).to_complex(),
            (ar * br - ai * bi, ar * bi + ai * br)
        ));
        let (cr, ci) = a.conjugate().to_complex();
        prop_assert!(close((cr, ci), (ar, -ai)));
    }

    /// An n-th root of unity has order dividing n, and the n-th power of any
    /// root returns to one.
    #[test]
    fn roots_of_unity_cycle(n in 1usize..=12, k in 0usize..12) {
        let z = CyclotomicValue::root_of_unity(n, k % n);
        let mut p = CyclotomicValue::one();
        for _ in 0..n {
            p = p.mul(&z);
        }
        prop_assert!(p.sub(&CyclotomicValue::one()).is_zero());
        prop_assert!(z.mul(&z.conjugate()).sub(&CyclotomicValue::one()).is_zero());
    }
}

#[test]
fn rational_scalars_stay_exact() {
    // a spot check that scaling never leaves the rational subfield
    let half = Rat::new(Int::one(), Int::from(2));
    let v = CyclotomicValue::from_rational(half.clone());
    assert_eq!(v.as_rational(), Some(half));
}
