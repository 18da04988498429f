use eiscong::bernoulli::{bernoulli_char, bernoulli_number, carlitz_certificate};
use eiscong::dirichlet::primitive_characters;
use eiscong::ntheory::{divisors, is_prime, primes_up_to};
use eiscong::reduction::lift_validate;
use eiscong::{CyclotomicNumber, DirichletCharacter, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rayon::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// B_{m, chi} for m <= max from the expansion of
/// `sum_a chi(a) t e^(a t) / (e^(f t) - 1)`, by series division.
fn series_oracle(chi: &DirichletCharacter, max: usize) -> Vec<CyclotomicNumber> {
    let f = chi.modulus();
    let n = chi.order();
    // numerator coefficients sum_a chi(a) a^j / j!
    let num: Vec<CyclotomicNumber> = (0..=max)
        .map(|j| {
            let fact = Rational::from_integer(factorial(j));
            let terms = (1..=f).filter_map(|a| {
                chi.exponent_u(a).map(|e| (e, Rational::from_integer(BigInt::from(a).pow(j as u32)) / &fact))
            });
            CyclotomicNumber::from_exponents(n, terms)
        })
        .collect();
    // (e^(f t) - 1) / t = sum_j f^(j+1) t^j / (j+1)!
    let den: Vec<Rational> = (0..=max)
        .map(|j| Rational::new(BigInt::from(f).pow(j as u32 + 1), factorial(j + 1)))
        .collect();
    let mut quot: Vec<CyclotomicNumber> = Vec::with_capacity(max + 1);
    for j in 0..=max {
        let mut acc = num[j].clone();
        for i in 1..=j {
            acc = acc.sub(&quot[j - i].scale(&den[i]));
        }
        quot.push(acc.scale(&den[0].recip()));
    }
    quot.into_iter()
        .enumerate()
        .map(|(m, c)| c.scale(&Rational::from_integer(factorial(m))))
        .collect()
}

#[test]
fn two_computations_agree() {
    let chars: Vec<DirichletCharacter> = (1..=50).flat_map(primitive_characters).collect();
    chars.par_iter().for_each(|chi| {
        let oracle = series_oracle(chi, 20);
        for (m, expected) in oracle.iter().enumerate().skip(1) {
            let b = bernoulli_char(m, chi).unwrap();
            assert!(b.equals_value(expected), "m = {m}, conductor {}", chi.modulus());
        }
    });
}

#[test]
fn von_staudt_clausen() {
    for k in (2..=30).step_by(2) {
        let den: BigInt = divisors(k as u64)
            .into_iter()
            .map(|d| d + 1)
            .filter(|&p| is_prime(p))
            .map(BigInt::from)
            .product();
        assert_eq!(bernoulli_number(k).denom(), &den, "k = {k}");
        let frac: Rational = divisors(k as u64)
            .into_iter()
            .map(|d| d + 1)
            .filter(|&p| is_prime(p))
            .map(|p| Rational::new(BigInt::one(), BigInt::from(p)))
            .sum();
        assert!((bernoulli_number(k) + frac).is_integer());
    }
    assert_eq!(bernoulli_number(30), Rational::new(BigInt::from(8615841276005i64), BigInt::from(14322)));
}

#[test]
fn parity_vanishing() {
    for f in 1..=40 {
        for chi in primitive_characters(f) {
            for m in 2..=14usize {
                let even = m % 2 == 0;
                if (chi.parity() == 1) != even {
                    assert!(bernoulli_char(m, &chi).unwrap().is_zero(), "m = {m}, f = {f}");
                }
            }
        }
    }
}

fn lift_and_weight() -> impl Strategy<Value = (DirichletCharacter, u32, u64)> {
    (2u64..=60, 2u32..=10, 0usize..64, 0usize..16).prop_filter_map("needs a primitive lift", |(f, k, i, j)| {
        let chars = primitive_characters(f);
        if chars.is_empty() {
            return None;
        }
        let chi = chars[i % chars.len()].clone();
        let ells: Vec<u64> = primes_up_to(80).into_iter().filter(|&l| l > k as u64 + 1 && lift_validate(&chi, l)).collect();
        let ell = ells[j % ells.len()];
        Some((chi, k, ell))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ell_integrality((chi, k, ell) in lift_and_weight()) {
        let b = bernoulli_char(k as usize, &chi).unwrap();
        prop_assert!(b.is_integral_at(ell));
        // The Carlitz multiplier clears the remaining denominators.
        if !chi.is_trivial() {
            let cert = carlitz_certificate(&chi, k as i64).unwrap();
            let scaled = cert.d.mul(&b).scale(&Rational::new(BigInt::one(), BigInt::from(k)));
            prop_assert!(scaled.is_algebraic_integer());
        }
    }
}

#[test]
fn classical_reference_values() {
    let t = DirichletCharacter::trivial();
    assert_eq!(bernoulli_char(12, &t).unwrap().as_rational(), Some(&Rational::new(BigInt::from(-691), BigInt::from(2730))));
    assert_eq!(bernoulli_char(2, &t).unwrap().as_rational(), Some(&Rational::new(BigInt::one(), BigInt::from(6))));
    let q3 = DirichletCharacter::quadratic(3).unwrap();
    assert_eq!(bernoulli_char(3, &q3).unwrap().as_rational(), Some(&Rational::new(BigInt::from(2), BigInt::from(3))));
    assert!(bernoulli_char(4, &q3).unwrap().is_zero());
    assert!(bernoulli_number(7).is_zero());
    assert_eq!(bernoulli_number(0), q(1));
}
