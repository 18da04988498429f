//! Eisenstein series with character: q-expansions, degeneracy maps, the two
//! level-raising combinations and exact constant terms at cusps.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bernoulli::bernoulli_char;
use crate::cyclotomic::{CyclotomicNumber, Rational};
use crate::dirichlet::DirichletCharacter;
use crate::error::{Error, Result};
use crate::ntheory::{divisors, ext_gcd, gcd, is_prime, lcm, prime_divisors};
use crate::reduction::{reduce_at, FiniteFieldElement, Place};

/// An element `[[u, beta], [v, delta]]` of SL2(Z).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CuspMatrix {
    pub u: i64,
    pub beta: i64,
    pub v: i64,
    pub delta: i64,
}

impl CuspMatrix {
    pub fn new(u: i64, beta: i64, v: i64, delta: i64) -> Result<Self> {
        let det = u as i128 * delta as i128 - v as i128 * beta as i128;
        if det != 1 {
            return Err(Error::InvalidMatrix { det });
        }
        Ok(CuspMatrix { u, beta, v, delta })
    }

    pub fn identity() -> Self {
        CuspMatrix { u: 1, beta: 0, v: 0, delta: 1 }
    }

    /// Completes the bottom row `(v, delta)` with `gcd(v, delta) = 1`.
    pub fn from_bottom_row(v: i64, delta: i64) -> Option<Self> {
        let (g, x, y) = ext_gcd(delta as i128, v as i128);
        if g != 1 {
            return None;
        }
        // delta*x + v*y = 1, so u = x, beta = -y.
        Some(CuspMatrix { u: x as i64, beta: -(y as i64), v, delta })
    }

    /// Completes the left column `(u, v)` with `gcd(u, v) = 1`.
    pub fn from_left_column(u: i64, v: i64) -> Option<Self> {
        let (g, x, y) = ext_gcd(u as i128, v as i128);
        if g != 1 {
            return None;
        }
        Some(CuspMatrix { u, beta: -(y as i64), v, delta: x as i64 })
    }
}

/// One SL2(Z) matrix per cusp a/c of the congruence group Gamma0(level):
/// c runs over divisors of the level, a over units mod gcd(c, level/c).
/// The cusp with c = level is represented by the identity.
pub fn cusp_enumerate(level: u64) -> Vec<CuspMatrix> {
    let mut out = Vec::new();
    for c in divisors(level) {
        if c == level {
            out.push(CuspMatrix::identity());
            continue;
        }
        let g = gcd(c, level / c);
        for a in 0..g {
            if gcd(a, g) != 1 {
                continue;
            }
            let lifted = (0..)
                .map(|t| a + g * t)
                .find(|&x| gcd(x, c) == 1)
                .expect("a unit lift exists");
            out.push(
                CuspMatrix::from_left_column(lifted as i64, c as i64).expect("coprime column"),
            );
        }
    }
    out
}

/// Cusp matrices of the given level together with variants whose lower-right
/// entry runs over every unit class modulo `f`.
pub fn cusp_enumerate_with_classes(level: u64, f: u64) -> Vec<CuspMatrix> {
    let mut out = Vec::new();
    for base in cusp_enumerate(level) {
        out.push(base);
        if f <= 2 {
            continue;
        }
        let v = base.v;
        for j in 1..f {
            if gcd(j, f) != 1 || (base.delta as i128).rem_euclid(f as i128) as u64 == j {
                continue;
            }
            let candidate = if v == 0 {
                (j == f - 1).then_some(-1i64)
            } else {
                (0..4 * f * v.unsigned_abs())
                    .map(|t| (j + f * t) as i64)
                    .find(|&d| gcd(d.unsigned_abs(), v.unsigned_abs()) == 1)
            };
            if let Some(d) = candidate {
                if v == 0 {
                    out.push(CuspMatrix { u: -1, beta: 0, v: 0, delta: -1 });
                } else if let Some(m) = CuspMatrix::from_bottom_row(v, d) {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Which series a cusp or coefficient computation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    /// `alpha_M E` (plain E when M = 1).
    E,
    /// `E - chi2(M) M^(k-1) alpha_M E`.
    F1,
    /// `E - chi1(M) alpha_M E`.
    F2,
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E" | "e" => Ok(Variant::E),
            "F1" | "f1" => Ok(Variant::F1),
            "F2" | "f2" => Ok(Variant::F2),
            _ => Err(Error::InvalidInput(format!("unknown variant {s:?}"))),
        }
    }
}

/// The gamma-independent part of the cusp constants.
#[derive(Clone, Debug)]
pub struct CuspData {
    /// `(chi1 conj(chi2))_0`.
    pub psi0: DirichletCharacter,
    pub f0: u64,
    /// `(f2/f0)^k W(psi0) / W(conj chi2) * B_{k, conj psi0} / 2k * prod_{p | N} (1 - psi0(p) p^-k)`.
    pub common: CyclotomicNumber,
}

/// A cusp constant split as `scalar * common`, with the scalar a root of unity
/// in Q(zeta_coeff_order) times a rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspScalar {
    pub root_exp: u64,
    pub factor: Rational,
}

/// The data `(chi1, chi2, k)` of an admissible Eisenstein series.
#[derive(Clone, Debug)]
pub struct EisensteinSeries {
    chi1: DirichletCharacter,
    chi2: DirichletCharacter,
    k: u32,
    coeff_order: u64,
    cusp: OnceLock<Arc<CuspData>>,
}

impl EisensteinSeries {
    pub fn new(chi1: &DirichletCharacter, chi2: &DirichletCharacter, k: u32) -> Result<Self> {
        for chi in [chi1, chi2] {
            let f = chi.conductor();
            if f != chi.modulus() {
                return Err(Error::NotPrimitive { modulus: chi.modulus(), conductor: f });
            }
        }
        if k < 2 {
            return Err(Error::InvalidInput(format!("weight must be at least 2, got {k}")));
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        if chi1.parity() * chi2.parity() != sign {
            return Err(Error::NotOddCompatible { k: k as i64 });
        }
        if chi1.modulus() * chi2.modulus() == 1 && k == 2 {
            return Err(Error::UndefinedSeries);
        }
        Ok(EisensteinSeries {
            chi1: chi1.clone(),
            chi2: chi2.clone(),
            k,
            coeff_order: lcm(chi1.order(), chi2.order()),
            cusp: OnceLock::new(),
        })
    }

    pub fn chi1(&self) -> &DirichletCharacter {
        &self.chi1
    }

    pub fn chi2(&self) -> &DirichletCharacter {
        &self.chi2
    }

    pub fn weight(&self) -> u32 {
        self.k
    }

    pub fn level(&self) -> u64 {
        self.chi1.modulus() * self.chi2.modulus()
    }

    pub fn nebentypus(&self) -> DirichletCharacter {
        self.chi1.mul(&self.chi2)
    }

    /// Cyclotomic order in which the q-expansion coefficients live.
    pub fn coeff_order(&self) -> u64 {
        self.coeff_order
    }

    /// `a_0 = -delta(chi1) B_{k, chi2} / 2k`.
    pub fn constant_term(&self) -> CyclotomicNumber {
        if !self.chi1.is_trivial() {
            return CyclotomicNumber::zero(self.coeff_order);
        }
        let b = bernoulli_char(self.k as usize, &self.chi2).expect("primitive");
        let s = Rational::new(BigInt::from(-1), BigInt::from(2 * self.k));
        b.scale(&s).promote(self.coeff_order).expect("order divides")
    }

    /// `sigma_{k-1}^{chi1, chi2}(n) = sum_{m | n} chi1(n/m) chi2(m) m^(k-1)`, n >= 1.
    pub fn coefficient(&self, n: u64) -> CyclotomicNumber {
        if n == 0 {
            return self.constant_term();
        }
        let o = self.coeff_order;
        let (s1, s2) = (o / self.chi1.order(), o / self.chi2.order());
        let mut folded = vec![BigInt::zero(); o as usize];
        for m in divisors(n) {
            let (Some(e1), Some(e2)) = (self.chi1.exponent_u(n / m), self.chi2.exponent_u(m)) else {
                continue;
            };
            let e = (e1 * s1 + e2 * s2) % o;
            folded[e as usize] += BigInt::from(m).pow(self.k - 1);
        }
        CyclotomicNumber::from_integer_exponents(o, folded)
    }

    /// Coefficients `a_0 .. a_P`, computed in parallel.
    pub fn qexp(&self, precision: usize) -> QExpansion {
        let coeffs: Vec<CyclotomicNumber> = (0..=precision as u64)
            .into_par_iter()
            .map(|n| self.coefficient(n))
            .collect();
        QExpansion {
            level: self.level(),
            weight: self.k,
            nebentypus: self.nebentypus(),
            precision,
            coeffs,
        }
    }

    /// `E - chi2(M) M^(k-1) alpha_M E` or `E - chi1(M) alpha_M E` up to precision P.
    pub fn level_raise_combo(&self, m: u64, variant: Variant, precision: usize) -> Result<QExpansion> {
        self.check_raising_prime(m)?;
        let e = self.qexp(precision);
        let c = self.combo_multiplier(m, variant);
        let shifted = e.degeneracy(m);
        let coeffs = e
            .coeffs
            .iter()
            .zip(&shifted.coeffs)
            .map(|(a, b)| if b.is_zero() { a.clone() } else { a.sub(&b.mul(&c)) })
            .collect();
        Ok(QExpansion {
            level: self.level() * m,
            weight: self.k,
            nebentypus: self.nebentypus(),
            precision,
            coeffs,
        })
    }

    fn check_raising_prime(&self, m: u64) -> Result<()> {
        if !is_prime(m) {
            return Err(Error::NotPrime(m));
        }
        if self.level() % m == 0 {
            return Err(Error::BadLevel { m, level: self.level() });
        }
        Ok(())
    }

    /// The constant c in `E - c alpha_M E`.
    fn combo_multiplier(&self, m: u64, variant: Variant) -> CyclotomicNumber {
        let o = self.coeff_order;
        match variant {
            Variant::E => CyclotomicNumber::zero(o),
            Variant::F1 => {
                let p = Rational::from_integer(BigInt::from(m).pow(self.k - 1));
                self.chi2.eval(m as i64).scale(&p).promote(o).expect("order divides")
            }
            Variant::F2 => self.chi1.eval(m as i64).promote(o).expect("order divides"),
        }
    }

    /// The gamma-independent factor shared by all cusp constants (cached).
    pub fn cusp_data(&self) -> Arc<CuspData> {
        Arc::clone(self.cusp.get_or_init(|| Arc::new(self.compute_cusp_data())))
    }

    fn compute_cusp_data(&self) -> CuspData {
        let k = self.k;
        let f2 = self.chi2.modulus();
        let (f0, psi0) = self.chi1.mul(&self.chi2.conj()).primitivize();
        let w_psi0 = psi0.gauss_sum().expect("primitive");
        // 1 / W(conj chi2) = chi2(-1) W(chi2) / f2.
        let inv_w2 = self
            .chi2
            .gauss_sum()
            .expect("primitive")
            .scale(&Rational::new(BigInt::from(self.chi2.parity()), BigInt::from(f2)));
        let b = bernoulli_char(k as usize, &psi0.conj()).expect("primitive");
        let ratio = Rational::new(BigInt::from(f2).pow(k), BigInt::from(f0).pow(k) * BigInt::from(2 * k));
        let mut common = w_psi0.mul(&inv_w2).mul(&b).scale(&ratio);
        for p in prime_divisors(self.level()) {
            if let Some(e) = psi0.exponent_u(p) {
                let t = CyclotomicNumber::root_of_unity(psi0.order(), e)
                    .scale(&Rational::new(BigInt::one(), BigInt::from(p).pow(k)));
                common = common.mul(&CyclotomicNumber::one(1).sub(&t));
            }
        }
        let target = lcm(lcm(self.coeff_order, common.order()), lcm(f0, f2));
        let common = common.promote(target).expect("order divides");
        CuspData { psi0, f0, common }
    }

    /// The scalar part of `Upsilon(gamma, M)`, or `None` when the constant vanishes.
    pub fn cusp_scalar(&self, gamma: &CuspMatrix, m: u64) -> Option<CuspScalar> {
        assert!(m >= 1);
        let (f1, f2) = (self.chi1.modulus() as i64, self.chi2.modulus() as i64);
        let v = gamma.v;
        let r = gcd(v.unsigned_abs(), m) as i64;
        let vp = v / r;
        let mp = m as i64 / r;
        if vp % f2 != 0 || gcd((vp / f2).unsigned_abs(), f1 as u64) != 1 {
            return None;
        }
        let o = self.coeff_order;
        let (s1, s2) = (o / self.chi1.order(), o / self.chi2.order());
        let n2 = self.chi2.order();
        let e_delta = self.chi2.exponent(gamma.delta)?;
        let e_m = self.chi2.exponent(mp)?;
        let e_v = self.chi1.exponent(-vp / f2)?;
        let root_exp = ((e_delta + (n2 - e_m) % n2) % n2 * s2 + e_v * s1) % o;
        let factor = Rational::new(BigInt::from(-1), BigInt::from(mp).pow(self.k));
        Some(CuspScalar { root_exp, factor })
    }

    /// `Upsilon_k^{chi1, chi2}(gamma, M)`: the constant term of `(alpha_M E)|_k gamma`.
    /// Vanishing constants are returned as zero of the coefficient order.
    pub fn cusp_constant(&self, gamma: &CuspMatrix, m: u64) -> CyclotomicNumber {
        match self.cusp_scalar(gamma, m) {
            None => CyclotomicNumber::zero(self.coeff_order),
            Some(s) => self.scalar_value(&s).mul(&self.cusp_data().common),
        }
    }

    fn scalar_value(&self, s: &CuspScalar) -> CyclotomicNumber {
        CyclotomicNumber::root_of_unity(self.coeff_order, s.root_exp).scale(&s.factor)
    }

    /// Constant term at gamma of the chosen series at level N*M.
    pub fn series_cusp_constant(&self, gamma: &CuspMatrix, m: u64, variant: Variant) -> Result<CyclotomicNumber> {
        if variant == Variant::E {
            return Ok(self.cusp_constant(gamma, m));
        }
        self.check_raising_prime(m)?;
        let c = self.combo_multiplier(m, variant);
        Ok(self.cusp_constant(gamma, 1).sub(&c.mul(&self.cusp_constant(gamma, m))))
    }

    /// The constant term of the chosen series at gamma, reduced at a place of
    /// Q(zeta_L) with L the order of [`CuspData::common`]. Uses that reduction is
    /// a ring homomorphism: the reduced common factor is passed in.
    pub fn reduced_series_cusp_constant(
        &self,
        gamma: &CuspMatrix,
        m: u64,
        variant: Variant,
        place: &Arc<Place>,
        common: &FiniteFieldElement,
    ) -> Result<FiniteFieldElement> {
        let reduce_scalar = |mm: u64| -> Result<FiniteFieldElement> {
            match self.cusp_scalar(gamma, mm) {
                None => Ok(FiniteFieldElement::zero(place)),
                Some(s) => {
                    let root = FiniteFieldElement::root_of_unity(place, self.coeff_order, s.root_exp)?;
                    Ok(root.mul(&FiniteFieldElement::from_rational(place, &s.factor)?))
                }
            }
        };
        let scalar = match variant {
            Variant::E => reduce_scalar(m)?,
            _ => {
                self.check_raising_prime(m)?;
                let c = reduce_at(&self.combo_multiplier(m, variant), place)?;
                reduce_scalar(1)?.sub(&c.mul(&reduce_scalar(m)?))
            }
        };
        Ok(scalar.mul(common))
    }
}

/// Truncated q-expansion `a_0 + a_1 q + ... + a_P q^P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    pub level: u64,
    pub weight: u32,
    pub nebentypus: DirichletCharacter,
    pub precision: usize,
    pub coeffs: Vec<CyclotomicNumber>,
}

impl QExpansion {
    /// `alpha_M f`, keeping the same precision: `b_n = a_{n/M}` when `M | n`.
    pub fn degeneracy(&self, m: u64) -> QExpansion {
        assert!(m >= 1);
        let order = self.coeffs[0].order();
        let coeffs = (0..=self.precision as u64)
            .map(|n| {
                if n % m == 0 {
                    self.coeffs[(n / m) as usize].clone()
                } else {
                    CyclotomicNumber::zero(order)
                }
            })
            .collect();
        QExpansion {
            level: self.level * m,
            weight: self.weight,
            nebentypus: self.nebentypus.clone(),
            precision: self.precision,
            coeffs,
        }
    }

    /// Componentwise reduction at a place.
    pub fn reduce(&self, place: &Arc<Place>) -> Result<ReducedQExpansion> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                reduce_at(c, place).map_err(|e| match e {
                    Error::NotIntegral { ell, .. } => Error::NotIntegral { ell, index: Some(i) },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ReducedQExpansion { place: Arc::clone(place), coeffs })
    }
}

impl Serialize for QExpansion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            level: u64,
            weight: u32,
            nebentypus: &'a DirichletCharacter,
            precision: usize,
            coeffs: &'a [CyclotomicNumber],
        }
        Raw {
            level: self.level,
            weight: self.weight,
            nebentypus: &self.nebentypus,
            precision: self.precision,
            coeffs: &self.coeffs,
        }
        .serialize(serializer)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedQExpansion {
    pub place: Arc<Place>,
    pub coeffs: Vec<FiniteFieldElement>,
}

/// `E_k^{chi1, chi2}` up to precision P.
pub fn eis_qexp(chi1: &DirichletCharacter, chi2: &DirichletCharacter, k: u32, precision: usize) -> Result<QExpansion> {
    Ok(EisensteinSeries::new(chi1, chi2, k)?.qexp(precision))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernoulli::bernoulli_number;
    use crate::reduction::place_above;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn level_one_weight_four() {
        let t = DirichletCharacter::trivial();
        let f = eis_qexp(&t, &t, 4, 10).unwrap();
        assert_eq!(f.coeffs[0].as_rational(), Some(&q(1, 240)));
        assert_eq!(f.coeffs[1].as_rational(), Some(&q(1, 1)));
        assert_eq!(f.coeffs[2].as_rational(), Some(&q(9, 1)));
        assert_eq!(f.coeffs[6].as_rational(), Some(&q(1 + 8 + 27 + 216, 1)));
    }

    #[test]
    fn errors() {
        let t = DirichletCharacter::trivial();
        assert_eq!(eis_qexp(&t, &t, 2, 5).unwrap_err(), Error::UndefinedSeries);
        assert_eq!(eis_qexp(&t, &t, 3, 5).unwrap_err(), Error::NotOddCompatible { k: 3 });
        let q4 = DirichletCharacter::quadratic(4).unwrap();
        let e = EisensteinSeries::new(&t, &q4, 3).unwrap();
        assert_eq!(e.level_raise_combo(2, Variant::F1, 5).unwrap_err(), Error::BadLevel { m: 2, level: 4 });
        assert!(CuspMatrix::new(1, 1, 1, 1).is_err());
    }

    #[test]
    fn eigenvalues_at_primes() {
        let t = DirichletCharacter::trivial();
        let q4 = DirichletCharacter::quadratic(4).unwrap();
        let e = EisensteinSeries::new(&t, &q4, 3).unwrap();
        let f = e.qexp(30);
        for p in [2u64, 3, 5, 7, 11, 13] {
            let expect = t.eval(p as i64).add(&q4.eval(p as i64).scale(&q((p * p) as i64, 1)));
            assert!(f.coeffs[p as usize].equals_value(&expect), "p = {p}");
        }
    }

    #[test]
    fn combos() {
        let t = DirichletCharacter::trivial();
        let q3 = DirichletCharacter::quadratic(3).unwrap();
        let e = EisensteinSeries::new(&t, &q3, 3).unwrap();
        let m = 5;
        let f1 = e.level_raise_combo(m, Variant::F1, 20).unwrap();
        assert_eq!(f1.level, 15);
        assert!(f1.coeffs[5].equals_value(&t.eval(5)));
        let f2 = e.level_raise_combo(m, Variant::F2, 20).unwrap();
        let expect = q3.eval(5).scale(&q(25, 1));
        assert!(f2.coeffs[5].equals_value(&expect));
        let a0 = e.constant_term();
        assert!(f2.coeffs[0].is_zero());
        assert!(f1.coeffs[0].equals_value(&a0.mul(&CyclotomicNumber::one(1).sub(&q3.eval(5).scale(&q(25, 1))))));
    }

    #[test]
    fn degeneracy_dilates() {
        let t = DirichletCharacter::trivial();
        let f = eis_qexp(&t, &t, 4, 12).unwrap();
        assert_eq!(f.degeneracy(1), f);
        let g = f.degeneracy(2);
        assert_eq!(g.coeffs[0], f.coeffs[0]);
        assert!(g.coeffs[3].is_zero());
        assert_eq!(g.coeffs[4], f.coeffs[2]);
        assert_eq!(g.level, 2);
    }

    #[test]
    fn constants_at_infinity() {
        let t = DirichletCharacter::trivial();
        let q3 = DirichletCharacter::quadratic(3).unwrap();
        let id = CuspMatrix::identity();
        let e = EisensteinSeries::new(&t, &q3, 3).unwrap();
        assert!(e.cusp_constant(&id, 1).equals_value(&e.constant_term()));
        let e = EisensteinSeries::new(&q3, &t, 3).unwrap();
        assert!(e.cusp_constant(&id, 1).is_zero());
        let e = EisensteinSeries::new(&t, &t, 12).unwrap();
        assert_eq!(e.cusp_constant(&id, 1).as_rational(), Some(&(-bernoulli_number(12) / q(24, 1))));
    }

    #[test]
    fn cusp_lists() {
        assert_eq!(cusp_enumerate(1), vec![CuspMatrix::identity()]);
        assert_eq!(cusp_enumerate(7), vec![CuspMatrix { u: 0, beta: -1, v: 1, delta: 0 }, CuspMatrix::identity()]);
        assert_eq!(cusp_enumerate(12).len(), 6);
        assert_eq!(cusp_enumerate(36).len(), 12);
        for level in [4, 12, 30, 49, 60] {
            for g in cusp_enumerate_with_classes(level, 5) {
                assert!(CuspMatrix::new(g.u, g.beta, g.v, g.delta).is_ok());
            }
        }
    }

    #[test]
    fn reduction_of_level_one_weight_twelve() {
        let t = DirichletCharacter::trivial();
        let f = eis_qexp(&t, &t, 12, 10).unwrap();
        let place = place_above(691, 1).unwrap();
        let r = f.reduce(&place).unwrap();
        assert!(r.coeffs[0].is_zero());
        let place = place_above(7, 1).unwrap();
        assert_eq!(f.reduce(&place).unwrap_err(), Error::NotIntegral { ell: 7, index: Some(0) });
    }
}
