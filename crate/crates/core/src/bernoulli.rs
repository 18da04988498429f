//! Classical and generalized Bernoulli numbers.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cyclotomic::{CyclotomicNumber, Rational};
use crate::dirichlet::DirichletCharacter;
use crate::error::{Error, Result};
use crate::ntheory::factorize;

fn memo() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Rational::one()]))
}

fn binomials(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 1..=n {
        let next = &row[k - 1] * BigInt::from(n - k + 1) / BigInt::from(k);
        row.push(next);
    }
    row
}

/// Classical Bernoulli number `B_m` with `B_1 = -1/2`.
pub fn bernoulli_number(m: usize) -> Rational {
    if let Some(b) = memo().read().unwrap().get(m) {
        return b.clone();
    }
    let mut table = memo().write().unwrap();
    while table.len() <= m {
        let n = table.len();
        if n > 1 && n % 2 == 1 {
            table.push(Rational::zero());
            continue;
        }
        // sum_{j=0}^{n} C(n+1, j) B_j = 0
        let c = binomials(n + 1);
        let s: Rational = (0..n)
            .filter(|&j| !table[j].is_zero())
            .map(|j| &table[j] * Rational::from_integer(c[j].clone()))
            .sum();
        table.push(-s / Rational::from_integer(BigInt::from(n + 1)));
    }
    table[m].clone()
}

/// Generalized Bernoulli number `B_{m, chi}` for a primitive character,
/// computed as `f^(m-1) sum_{a=1}^{f} chi(a) B_m(a/f)`.
pub fn bernoulli_char(m: usize, chi: &DirichletCharacter) -> Result<CyclotomicNumber> {
    let f = chi.conductor();
    if f != chi.modulus() {
        return Err(Error::NotPrimitive { modulus: chi.modulus(), conductor: f });
    }
    let n = chi.order();
    // Power sums of a over each exponent class: sums[e][i] = sum a^i.
    let mut sums = vec![vec![BigInt::zero(); m + 1]; n as usize];
    for a in 1..=f {
        let Some(e) = chi.exponent_u(a) else { continue };
        let row = &mut sums[e as usize];
        let mut p = BigInt::one();
        let a_big = BigInt::from(a);
        for slot in row.iter_mut() {
            *slot += &p;
            p *= &a_big;
        }
    }
    // f^(m-1) B_m(a/f) = sum_j C(m, j) B_j a^(m-j) f^(j-1)
    let c = binomials(m);
    let f_q = Rational::from_integer(BigInt::from(f));
    let weights: Vec<Rational> = (0..=m)
        .map(|j| {
            let b = bernoulli_number(j);
            if b.is_zero() {
                return b;
            }
            let fp = if j == 0 { f_q.recip() } else { Rational::from_integer(BigInt::from(f).pow(j as u32 - 1)) };
            b * Rational::from_integer(c[j].clone()) * fp
        })
        .collect();
    let terms = sums.iter().enumerate().filter_map(|(e, row)| {
        if row[0].is_zero() {
            return None;
        }
        let s: Rational = (0..=m)
            .filter(|&j| !weights[j].is_zero())
            .map(|j| &weights[j] * Rational::from_integer(row[m - j].clone()))
            .sum();
        Some((e as u64, s))
    });
    Ok(CyclotomicNumber::from_exponents(n, terms))
}

/// Which row of the Carlitz multiplier table applies to a conductor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CarlitzCase {
    TwoPrimeDivisors,
    Four,
    PowerOfTwo,
    OddPrime,
    OddPrimePower,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarlitzCertificate {
    pub d: CyclotomicNumber,
    pub case: CarlitzCase,
}

/// The multiplier d making `d k^-1 B_{k, psi}` an algebraic integer.
pub fn carlitz_certificate(psi: &DirichletCharacter, k: i64) -> Result<CarlitzCertificate> {
    if psi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    let f = psi.conductor();
    if f != psi.modulus() {
        return Err(Error::NotPrimitive { modulus: psi.modulus(), conductor: f });
    }
    if k < 2 {
        return Err(Error::InvalidInput(format!("weight must be at least 2, got {k}")));
    }
    let n = psi.order();
    let fac = factorize(f);
    let (case, d) = match fac.as_slice() {
        [_, _, ..] => (CarlitzCase::TwoPrimeDivisors, CyclotomicNumber::one(n)),
        [(2, 2)] => (CarlitzCase::Four, CyclotomicNumber::from_integer(n, 2)),
        [(2, _)] => (CarlitzCase::PowerOfTwo, CyclotomicNumber::one(n)),
        [(p, 1)] => (CarlitzCase::OddPrime, CyclotomicNumber::from_integer(n, k * *p as i64)),
        [(p, _)] => (
            CarlitzCase::OddPrimePower,
            CyclotomicNumber::one(n).sub(&psi.eval(1 + *p as i64)),
        ),
        [] => unreachable!("nontrivial primitive characters have conductor > 1"),
    };
    Ok(CarlitzCertificate { d, case })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::primitive_characters;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn classical_values() {
        assert_eq!(bernoulli_number(0), q(1, 1));
        assert_eq!(bernoulli_number(1), q(-1, 2));
        assert_eq!(bernoulli_number(2), q(1, 6));
        assert_eq!(bernoulli_number(4), q(-1, 30));
        assert_eq!(bernoulli_number(12), q(-691, 2730));
        assert_eq!(bernoulli_number(13), q(0, 1));
    }

    #[test]
    fn trivial_character_is_classical() {
        let t = DirichletCharacter::trivial();
        assert_eq!(bernoulli_char(1, &t).unwrap().as_rational(), Some(&q(1, 2)));
        for m in 2..16 {
            assert_eq!(bernoulli_char(m, &t).unwrap().as_rational(), Some(&bernoulli_number(m)));
        }
    }

    #[test]
    fn small_generalized_values() {
        let q3 = DirichletCharacter::quadratic(3).unwrap();
        assert_eq!(bernoulli_char(3, &q3).unwrap().as_rational(), Some(&q(2, 3)));
        assert_eq!(bernoulli_char(1, &q3).unwrap().as_rational(), Some(&q(-1, 3)));
        assert!(bernoulli_char(2, &q3).unwrap().is_zero());
        let q4 = DirichletCharacter::quadratic(4).unwrap();
        assert_eq!(bernoulli_char(1, &q4).unwrap().as_rational(), Some(&q(-1, 2)));
        assert_eq!(bernoulli_char(3, &q4).unwrap().as_rational(), Some(&q(3, 2)));
        assert!(matches!(
            bernoulli_char(2, &DirichletCharacter::principal(3)),
            Err(Error::NotPrimitive { .. })
        ));
    }

    #[test]
    fn carlitz_table() {
        let c12 = &primitive_characters(12)[0];
        assert_eq!(carlitz_certificate(c12, 2).unwrap().d, CyclotomicNumber::one(2));
        let q4 = DirichletCharacter::quadratic(4).unwrap();
        assert_eq!(carlitz_certificate(&q4, 3).unwrap().case, CarlitzCase::Four);
        assert_eq!(carlitz_certificate(&q4, 3).unwrap().d, CyclotomicNumber::from_integer(2, 2));
        let c7 = &primitive_characters(7)[0];
        let cert = carlitz_certificate(c7, 4).unwrap();
        assert_eq!(cert.case, CarlitzCase::OddPrime);
        assert_eq!(cert.d.as_rational(), Some(&q(28, 1)));
        let c9 = primitive_characters(9).into_iter().next().unwrap();
        assert_eq!(carlitz_certificate(&c9, 2).unwrap().case, CarlitzCase::OddPrimePower);
        assert_eq!(
            carlitz_certificate(&DirichletCharacter::trivial(), 2),
            Err(Error::TrivialCharacter)
        );
    }
}
