//! Decision procedures for strong modularity and level raising of reducible
//! mod-ell representations `eps1 + eps2 * chi_ell^(k-1)`, given through the
//! characteristic-zero lifts chi1, chi2 of eps1, eps2.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::bernoulli::bernoulli_char;
use crate::dirichlet::DirichletCharacter;
use crate::eisenstein::{cusp_enumerate_with_classes, EisensteinSeries, Variant};
use crate::error::{Error, Result};
use crate::ntheory::{is_prime, prime_divisors, primes_up_to};
use crate::reduction::{lift_validate, place_above, place_over, reduce_at, restrict_place, FiniteFieldElement, Place};

/// Serre type (N, k, eps) of the representation, with eps given by its lift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SerreType {
    pub level: u64,
    pub weight: u32,
    pub nebentypus: DirichletCharacter,
    pub ell: u64,
}

/// Validates the hypotheses and returns `(N, k, chi1 chi2)`.
pub fn serre_type(chi1: &DirichletCharacter, chi2: &DirichletCharacter, k: u32, ell: u64) -> Result<SerreType> {
    for chi in [chi1, chi2] {
        let f = chi.conductor();
        if f != chi.modulus() {
            return Err(Error::NotPrimitive { modulus: chi.modulus(), conductor: f });
        }
    }
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if k < 2 || ell <= k as u64 + 1 {
        return Err(Error::WeightHypothesisViolated { k: k as i64, ell });
    }
    if !lift_validate(chi1, ell) || !lift_validate(chi2, ell) {
        return Err(Error::NotALift { ell });
    }
    let sign = if k % 2 == 0 { 1 } else { -1 };
    if chi1.parity() * chi2.parity() != sign {
        return Err(Error::NotOdd { k: k as i64 });
    }
    Ok(SerreType {
        level: chi1.modulus() * chi2.modulus(),
        weight: k,
        nebentypus: chi1.mul(chi2),
        ell,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    BernoulliVanishes,
    EulerFactorVanishes,
    MazurCongruence,
    #[serde(rename = "eta-Mk-unit")]
    EtaMkUnit,
    None,
}

impl Condition {
    pub fn as_str(&self) -> &'static str {
        match self {
            Condition::BernoulliVanishes => "bernoulli-vanishes",
            Condition::EulerFactorVanishes => "euler-factor-vanishes",
            Condition::MazurCongruence => "mazur-congruence",
            Condition::EtaMkUnit => "eta-Mk-unit",
            Condition::None => "none",
        }
    }
}

/// One tested prime p with the reduced value compared against 1
/// (`eta(p) p^k`, or `M mod ell` in the Mazur case).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeTest {
    pub prime: u64,
    pub value: FiniteFieldElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactValues {
    /// Reduced `B_{k, eta}`; absent for level-raising decisions.
    pub bernoulli: Option<FiniteFieldElement>,
    pub tested: Vec<PrimeTest>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub verdict: bool,
    pub condition: Condition,
    pub witness: Option<u64>,
    pub place: Arc<Place>,
    pub exact_values: ExactValues,
}

/// `psi_eta`: the primitive character attached to `conj(chi1) chi2`, the lift of eta.
pub fn eta_lift(chi1: &DirichletCharacter, chi2: &DirichletCharacter) -> DirichletCharacter {
    chi1.conj().mul(chi2).primitivize().1
}

fn eta_times_power(psi: &DirichletCharacter, p: u64, k: u32, place: &Arc<Place>) -> Result<FiniteFieldElement> {
    let eta = match psi.exponent_u(p) {
        Some(e) => FiniteFieldElement::root_of_unity(place, psi.order(), e)?,
        None => FiniteFieldElement::zero(place),
    };
    Ok(eta.mul(&FiniteFieldElement::from_int(place, p as i64).pow(k as u64)))
}

/// Strong modularity: `B_{k, eta} = 0` or `eta(p) p^k = 1` for some prime `p | N`.
pub fn decide_strong_modularity(chi1: &DirichletCharacter, chi2: &DirichletCharacter, k: u32, ell: u64) -> Result<Decision> {
    serre_type(chi1, chi2, k, ell)?;
    let psi = eta_lift(chi1, chi2);
    let place = place_above(ell, psi.order())?;
    decide_strong_modularity_at(chi1, chi2, k, ell, &place)
}

/// Same as [`decide_strong_modularity`] at a caller-chosen place of
/// Q(zeta_m), where the order n of `psi_eta` divides m. The decision is made
/// at the place of Q(zeta_n) below it.
pub fn decide_strong_modularity_at(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    k: u32,
    ell: u64,
    place: &Arc<Place>,
) -> Result<Decision> {
    let st = serre_type(chi1, chi2, k, ell)?;
    let psi = eta_lift(chi1, chi2);
    let place = &restrict_place(place, psi.order())?;
    let b = reduce_at(&bernoulli_char(k as usize, &psi)?, place)?;
    let tested = prime_divisors(st.level)
        .into_iter()
        .map(|p| Ok(PrimeTest { prime: p, value: eta_times_power(&psi, p, k, place)? }))
        .collect::<Result<Vec<_>>>()?;
    let (condition, witness) = if b.is_zero() {
        (Condition::BernoulliVanishes, None)
    } else if let Some(t) = tested.iter().find(|t| t.value.is_one()) {
        (Condition::EulerFactorVanishes, Some(t.prime))
    } else {
        (Condition::None, None)
    };
    Ok(Decision {
        verdict: condition != Condition::None,
        condition,
        witness,
        place: Arc::clone(place),
        exact_values: ExactValues { bernoulli: Some(b), tested },
    })
}

fn check_raising_prime(st: &SerreType, m: u64) -> Result<()> {
    if !is_prime(m) {
        return Err(Error::BadPrime { m, reason: "not prime".into() });
    }
    if st.level % m == 0 || m == st.ell {
        return Err(Error::BadPrime { m, reason: format!("divides N*ell = {}", st.level * st.ell) });
    }
    Ok(())
}

/// Level raising at M: `M = 1 mod ell` when (N, k) = (1, 2), else `eta(M) M^k = 1`.
pub fn decide_level_raise(chi1: &DirichletCharacter, chi2: &DirichletCharacter, k: u32, ell: u64, m: u64) -> Result<Decision> {
    serre_type(chi1, chi2, k, ell)?;
    let psi = eta_lift(chi1, chi2);
    let place = place_above(ell, psi.order())?;
    decide_level_raise_at(chi1, chi2, k, ell, m, &place)
}

pub fn decide_level_raise_at(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    k: u32,
    ell: u64,
    m: u64,
    place: &Arc<Place>,
) -> Result<Decision> {
    let st = serre_type(chi1, chi2, k, ell)?;
    check_raising_prime(&st, m)?;
    let place = &restrict_place(place, eta_lift(chi1, chi2).order())?;
    if decide_strong_modularity_at(chi1, chi2, k, ell, place)?.verdict {
        return Err(Error::PreconditionViolated("representation is strongly modular".into()));
    }
    level_raise_unchecked(chi1, chi2, &st, m, place)
}

fn level_raise_unchecked(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    st: &SerreType,
    m: u64,
    place: &Arc<Place>,
) -> Result<Decision> {
    let (value, condition) = if st.level == 1 && st.weight == 2 {
        (FiniteFieldElement::from_int(place, m as i64), Condition::MazurCongruence)
    } else {
        let psi = eta_lift(chi1, chi2);
        (eta_times_power(&psi, m, st.weight, place)?, Condition::EtaMkUnit)
    };
    let verdict = value.is_one();
    Ok(Decision {
        verdict,
        condition: if verdict { condition } else { Condition::None },
        witness: verdict.then_some(m),
        place: Arc::clone(place),
        exact_values: ExactValues { bernoulli: None, tested: vec![PrimeTest { prime: m, value }] },
    })
}

/// All level-raising primes `M <= bound` with `M` prime to `N ell`, ascending.
pub fn scan_level_raise(chi1: &DirichletCharacter, chi2: &DirichletCharacter, k: u32, ell: u64, bound: u64) -> Result<Vec<u64>> {
    serre_type(chi1, chi2, k, ell)?;
    let place = place_above(ell, eta_lift(chi1, chi2).order())?;
    scan_level_raise_at(chi1, chi2, k, ell, bound, &place)
}

/// [`scan_level_raise`] at a caller-chosen place, restricted as in
/// [`decide_level_raise_at`].
pub fn scan_level_raise_at(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    k: u32,
    ell: u64,
    bound: u64,
    place: &Arc<Place>,
) -> Result<Vec<u64>> {
    let st = serre_type(chi1, chi2, k, ell)?;
    let place = restrict_place(place, eta_lift(chi1, chi2).order())?;
    if decide_strong_modularity_at(chi1, chi2, k, ell, &place)?.verdict {
        return Err(Error::PreconditionViolated("representation is strongly modular".into()));
    }
    let candidates: Vec<u64> = primes_up_to(bound)
        .into_iter()
        .filter(|&m| st.level % m != 0 && m != ell)
        .collect();
    let hits = candidates
        .par_iter()
        .map(|&m| level_raise_unchecked(chi1, chi2, &st, m, &place).map(|d| d.verdict.then_some(m)))
        .collect::<Result<Vec<_>>>()?;
    Ok(hits.into_iter().flatten().collect())
}

/// Ambient order of the place used by [`verify_cuspidality`].
pub fn cuspidality_order(chi1: &DirichletCharacter, chi2: &DirichletCharacter, k: u32) -> Result<u64> {
    Ok(EisensteinSeries::new(chi1, chi2, k)?.cusp_data().common.order())
}

/// The place used by [`verify_cuspidality`]: the first place of
/// Q(zeta_L), L the [`cuspidality_order`], over the place chosen by the
/// decision procedures, so that both reduce chi1 and chi2 the same way.
pub fn cuspidality_place(es: &EisensteinSeries, ell: u64) -> Result<Arc<Place>> {
    let base = place_above(ell, eta_lift(es.chi1(), es.chi2()).order())?;
    place_over(&base, es.cusp_data().common.order())
}

/// True when the constant term of the chosen series (E, F1 or F2 at level
/// N*M) reduces to zero at every enumerated cusp.
pub fn verify_cuspidality(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    k: u32,
    ell: u64,
    m: u64,
    variant: Variant,
) -> Result<bool> {
    serre_type(chi1, chi2, k, ell)?;
    let es = EisensteinSeries::new(chi1, chi2, k)?;
    let place = cuspidality_place(&es, ell)?;
    verify_series_at(&es, m, variant, &place)
}

pub fn verify_cuspidality_at(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    k: u32,
    ell: u64,
    m: u64,
    variant: Variant,
    place: &Arc<Place>,
) -> Result<bool> {
    serre_type(chi1, chi2, k, ell)?;
    let es = EisensteinSeries::new(chi1, chi2, k)?;
    verify_series_at(&es, m, variant, place)
}

/// [`verify_cuspidality_at`] for an already constructed series, so that the
/// cached common factor is shared between calls. Hypotheses are not rechecked.
pub fn verify_series_at(es: &EisensteinSeries, m: u64, variant: Variant, place: &Arc<Place>) -> Result<bool> {
    if m == 0 {
        return Err(Error::InvalidInput("M must be positive".into()));
    }
    let common = reduce_at(&es.cusp_data().common, place)?;
    for gamma in cusp_enumerate_with_classes(es.level() * m, es.chi2().modulus()) {
        if !es.reduced_series_cusp_constant(&gamma, m, variant, place, &common)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
