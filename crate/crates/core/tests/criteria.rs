use std::sync::Arc;

use eiscong::criteria::{
    cuspidality_place, decide_level_raise, decide_strong_modularity, decide_strong_modularity_at, eta_lift,
    scan_level_raise, serre_type, verify_cuspidality, verify_series_at, Condition,
};
use eiscong::dirichlet::primitive_characters;
use eiscong::eisenstein::{EisensteinSeries, Variant};
use eiscong::ntheory::primes_up_to;
use eiscong::oracle::admissible_triples;
use eiscong::reduction::{all_places, FiniteFieldElement, Place};
use eiscong::{DirichletCharacter, Error};
use rayon::prelude::*;

fn cross_check_grid() -> Vec<(EisensteinSeries, u64)> {
    let mut out = Vec::new();
    for (c1, c2, k) in admissible_triples(40, 2..=8) {
        if c1.modulus() * c2.modulus() > 40 {
            continue;
        }
        let es = EisensteinSeries::new(&c1, &c2, k).unwrap();
        for ell in primes_up_to(97) {
            if serre_type(&c1, &c2, k, ell).is_ok() {
                out.push((es.clone(), ell));
            }
        }
    }
    out
}

#[test]
fn strong_modularity_matches_cusp_vanishing() {
    let grid = cross_check_grid();
    let bad: Vec<String> = grid
        .par_iter()
        .filter_map(|(es, ell)| {
            let d = decide_strong_modularity(es.chi1(), es.chi2(), es.weight(), *ell).unwrap();
            let place = cuspidality_place(es, *ell).unwrap();
            let v = verify_series_at(es, 1, Variant::E, &place).unwrap();
            (d.verdict != v).then(|| format!("{} {} {} {ell}", es.chi1().modulus(), es.chi2().modulus(), es.weight()))
        })
        .collect();
    assert!(bad.is_empty(), "{bad:?}");
}

/// The place `sigma(w)` for complex conjugation sigma: zeta maps to the
/// inverse of its image at `w`.
fn conjugate_place(w: &Arc<Place>) -> Arc<Place> {
    let n = w.m();
    let z = FiniteFieldElement::root_of_unity(w, n, n - 1).unwrap();
    let places = all_places(w.ell(), n).unwrap();
    let found = places.iter().find(|q| {
        q.min_poly()
            .iter()
            .rev()
            .fold(FiniteFieldElement::zero(w), |acc, &c| acc.mul(&z).add(&FiniteFieldElement::from_int(w, c as i64)))
            .is_zero()
    });
    Arc::clone(found.unwrap())
}

#[test]
fn conjugation_symmetry() {
    let triples = admissible_triples(12, 2..=6);
    let mut fixed_places = 0;
    for (c1, c2, k) in &triples {
        for ell in [7u64, 11, 13, 17, 19, 23, 29, 31, 37] {
            if serre_type(c1, c2, *k, ell).is_err() {
                continue;
            }
            let n = eta_lift(c1, c2).order();
            for w in all_places(ell, n).unwrap().iter() {
                let wbar = conjugate_place(w);
                let d = decide_strong_modularity_at(c1, c2, *k, ell, w).unwrap().verdict;
                let dbar = decide_strong_modularity_at(&c1.conj(), &c2.conj(), *k, ell, &wbar).unwrap().verdict;
                assert_eq!(d, dbar);
                if wbar == *w {
                    fixed_places += 1;
                    let same = decide_strong_modularity_at(&c1.conj(), &c2.conj(), *k, ell, w).unwrap().verdict;
                    assert_eq!(d, same);
                }
            }
        }
    }
    assert!(fixed_places > 0);
}

#[test]
fn mazur_consistency() {
    let t = DirichletCharacter::trivial();
    for ell in [5u64, 7, 11, 13] {
        let expected: Vec<u64> = primes_up_to(300).into_iter().filter(|p| p % ell == 1).collect();
        assert_eq!(scan_level_raise(&t, &t, 2, ell, 300).unwrap(), expected);
        let d = decide_level_raise(&t, &t, 2, ell, expected[0]).unwrap();
        assert_eq!(d.condition, Condition::MazurCongruence);
        assert_eq!(d.witness, Some(expected[0]));
    }
    assert!(!decide_strong_modularity(&t, &t, 2, 5).unwrap().verdict);
}

#[test]
fn level_raising_matches_f2_at_small_level() {
    let q4 = DirichletCharacter::quadratic(4).unwrap();
    let t = DirichletCharacter::trivial();
    for (c1, c2, k, ell) in [(&t, &q4, 3u32, 7u64), (&q4, &t, 3, 11), (&t, &t, 4, 7), (&t, &t, 6, 11)] {
        for m in primes_up_to(60) {
            if (c1.modulus() * c2.modulus()) % m == 0 || m == ell {
                continue;
            }
            let d = decide_level_raise(c1, c2, k, ell, m).unwrap().verdict;
            assert_eq!(d, verify_cuspidality(c1, c2, k, ell, m, Variant::F2).unwrap(), "M = {m}");
        }
    }
}

#[test]
fn error_cases() {
    let t = DirichletCharacter::trivial();
    let q3 = DirichletCharacter::quadratic(3).unwrap();
    assert!(matches!(decide_strong_modularity(&t, &t, 12, 13), Err(Error::WeightHypothesisViolated { .. })));
    assert!(matches!(decide_strong_modularity(&t, &t, 12, 15), Err(Error::NotPrime(15))));
    assert!(matches!(decide_strong_modularity(&t, &t, 3, 7), Err(Error::NotOdd { .. })));
    assert!(matches!(decide_strong_modularity(&q3, &t, 3, 3), Err(Error::WeightHypothesisViolated { .. })));
    let order5 = primitive_characters(11).into_iter().find(|c| c.order() == 5).unwrap();
    assert!(matches!(decide_strong_modularity(&order5, &q3, 3, 5), Err(Error::NotALift { .. })));
    let principal = DirichletCharacter::principal(5);
    assert!(matches!(decide_strong_modularity(&principal, &t, 4, 7), Err(Error::NotPrimitive { .. })));
    assert!(matches!(decide_level_raise(&t, &t, 4, 7, 9), Err(Error::BadPrime { .. })));
    assert!(matches!(decide_level_raise(&t, &t, 4, 7, 7), Err(Error::BadPrime { .. })));
    assert!(matches!(decide_level_raise(&t, &t, 12, 691, 2), Err(Error::PreconditionViolated(_))));
    let c7 = primitive_characters(7);
    assert!(c7.iter().any(|c| serre_type(&t, c, 3, 5).is_ok()));
}

#[test]
fn decisions_report_their_evidence() {
    let t = DirichletCharacter::trivial();
    let q4 = DirichletCharacter::quadratic(4).unwrap();
    let d = decide_strong_modularity(&t, &q4, 3, 7).unwrap();
    assert_eq!(d.exact_values.tested.iter().map(|p| p.prime).collect::<Vec<_>>(), vec![2]);
    assert!(d.exact_values.bernoulli.is_some());
    assert_eq!(d.place.ell(), 7);
    let d = decide_level_raise(&t, &q4, 3, 7, 3).unwrap();
    assert_eq!(d.exact_values.tested.len(), 1);
    assert_eq!(d.exact_values.bernoulli, None);
}
