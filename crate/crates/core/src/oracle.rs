//! Floating-point oracles that re-derive Gauss sums, L-values and cusp
//! constants by direct summation, independently of the closed forms.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bernoulli::bernoulli_char;
use crate::cyclotomic::ComplexApprox;
use crate::dirichlet::{primitive_characters, DirichletCharacter};
use crate::eisenstein::{CuspMatrix, EisensteinSeries};
use crate::error::{Error, Result};
use crate::ntheory::{gcd, lcm};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleConfig {
    pub cutoff: u64,
    pub im_z: f64,
    pub tolerance: f64,
}

impl OracleConfig {
    pub fn new(cutoff: u64, im_z: f64, tolerance: f64) -> Result<Self> {
        if cutoff < 10 {
            return Err(Error::InvalidInput(format!("cutoff must be at least 10, got {cutoff}")));
        }
        if !(im_z >= 1.0) {
            return Err(Error::InvalidInput(format!("im_z must be at least 1, got {im_z}")));
        }
        if !(tolerance > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {tolerance}")));
        }
        Ok(OracleConfig { cutoff, im_z, tolerance })
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { cutoff: 1_000_000, im_z: 8.0, tolerance: 1e-6 }
    }
}

/// Complex values of a character indexed by residue.
fn numeric_table(chi: &DirichletCharacter) -> Vec<ComplexApprox> {
    let n = chi.order() as f64;
    chi.values()
        .iter()
        .map(|v| match v {
            Some(e) => ComplexApprox::from_polar(1.0, TAU * *e as f64 / n),
            None => ComplexApprox::new(0.0, 0.0),
        })
        .collect()
}

fn at(table: &[ComplexApprox], a: i64) -> ComplexApprox {
    table[(a as i128).rem_euclid(table.len() as i128) as usize]
}

/// `sum_{a=1}^{f} chi(a) exp(2 pi i a / f)` by direct summation.
pub fn oracle_gauss_sum(chi: &DirichletCharacter) -> ComplexApprox {
    let f = chi.modulus();
    let table = numeric_table(chi);
    (1..=f)
        .map(|a| at(&table, a as i64) * ComplexApprox::from_polar(1.0, TAU * a as f64 / f as f64))
        .sum()
}

/// `C_k = (-2 i pi)^k / (k-1)!`.
pub fn c_k(k: u32) -> ComplexApprox {
    let fact: f64 = (1..k).map(f64::from).product();
    ComplexApprox::new(0.0, -TAU).powu(k) / fact
}

/// `sum_{n <= cutoff} chi(n) n^-k`.
pub fn oracle_l_value(chi: &DirichletCharacter, k: u32, cfg: &OracleConfig) -> ComplexApprox {
    let table = numeric_table(chi);
    let mut acc = ComplexApprox::new(0.0, 0.0);
    // Smallest terms first.
    for n in (1..=cfg.cutoff).rev() {
        let c = at(&table, n as i64);
        if c.re != 0.0 || c.im != 0.0 {
            acc += c * (n as f64).powi(-(k as i32));
        }
    }
    acc
}

/// Closed form `L(k, chi) = -W(chi) C_k / f^k * B_{k, conj chi} / 2k` for a
/// primitive chi with `chi(-1) = (-1)^k`, evaluated from exact values.
pub fn l_value_closed_form(chi: &DirichletCharacter, k: u32) -> Result<ComplexApprox> {
    let w = chi.gauss_sum()?.embed();
    let b = bernoulli_char(k as usize, &chi.conj())?.embed();
    let f = chi.modulus() as f64;
    Ok(-w * c_k(k) / f.powi(k as i32) * b / (2.0 * k as f64))
}

/// `sum_{t > T} t^-k` by Euler-Maclaurin.
fn zeta_tail(t: f64, k: u32) -> f64 {
    let k = k as f64;
    t.powf(1.0 - k) / (k - 1.0) - t.powf(-k) / 2.0 + k * t.powf(-k - 1.0) / 12.0
        - k * (k + 1.0) * (k + 2.0) * t.powf(-k - 3.0) / 720.0
}

/// The one-dimensional sum over `C = {(m, n) != 0 : m M f2 u + n v = 0}`,
/// normalized by `f2^k / (2 C_k W(conj chi2))`.
pub fn oracle_cusp_constant(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    k: u32,
    gamma: &CuspMatrix,
    m: u64,
    cfg: &OracleConfig,
) -> ComplexApprox {
    normalize(chi2, k, line_sum(chi1, chi2, k, gamma, m, cfg.cutoff))
}

fn normalize(chi2: &DirichletCharacter, k: u32, sum: ComplexApprox) -> ComplexApprox {
    let f2 = chi2.modulus() as f64;
    let w = oracle_gauss_sum(&chi2.conj());
    sum * f2.powi(k as i32) / (2.0 * c_k(k) * w)
}

/// Sum of the terms on the line C, parametrized as `t (m0, n0)`.
fn line_sum(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    k: u32,
    gamma: &CuspMatrix,
    m: u64,
    cutoff: u64,
) -> ComplexApprox {
    let f2 = chi2.modulus() as i64;
    let a = m as i64 * f2 * gamma.u;
    let b = gamma.v;
    let g = gcd(a.unsigned_abs(), b.unsigned_abs()) as i64;
    let (m0, n0) = (b / g, -a / g);
    let d = (m0 as f64) * (m as f64) * (f2 as f64) * (gamma.beta as f64) + (n0 as f64) * (gamma.delta as f64);
    let t1 = numeric_table(chi1);
    let t2 = numeric_table(&chi2.conj());
    let coef = |t: i64| at(&t1, t * m0) * at(&t2, t * n0);
    let period = lcm(chi1.modulus(), chi2.modulus()) as i64;
    let reach = m0.unsigned_abs().max(n0.unsigned_abs()).max(1);
    let mut top = (cutoff / reach) as i64;
    if top >= period {
        top -= top % period;
    }
    let mut acc = ComplexApprox::new(0.0, 0.0);
    for t in (1..=top).rev() {
        let c = coef(t);
        if c.re != 0.0 || c.im != 0.0 {
            acc += c * (t as f64).powi(-(k as i32));
        }
    }
    if top >= period {
        let mean: ComplexApprox = (1..=period).map(coef).sum::<ComplexApprox>() / period as f64;
        acc += mean * zeta_tail(top as f64, k);
    }
    // The terms at t and -t agree because chi1(-1) conj(chi2)(-1) = (-1)^k.
    acc * 2.0 / d.powi(k as i32)
}

/// The full two-dimensional lattice sum `((alpha_{M f2} G_k) |_k gamma)(z)` at
/// `z = i * im_z * N * M * f2`, normalized like [`oracle_cusp_constant`].
/// The z-independent terms on the line C use the one-dimensional routine; all
/// other terms are summed over the box `|m|, |n| <= cutoff`.
pub fn oracle_lattice_2d(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    k: u32,
    gamma: &CuspMatrix,
    m: u64,
    cfg: &OracleConfig,
    line_cutoff: u64,
) -> Result<ComplexApprox> {
    if k < 3 {
        return Err(Error::WeightTwoUnsupported);
    }
    let f2 = chi2.modulus() as i64;
    let width = (chi1.modulus() * chi2.modulus()) as f64 * m as f64 * f2 as f64;
    let z = ComplexApprox::new(0.0, cfg.im_z * width);
    let a = m as i64 * f2 * gamma.u;
    let a2 = m as i64 * f2 * gamma.beta;
    let t1 = numeric_table(chi1);
    let t2 = numeric_table(&chi2.conj());
    let r = cfg.cutoff as i64;
    let rows: Vec<ComplexApprox> = (-r..=r)
        .into_par_iter()
        .map(|mm| {
            let c1 = at(&t1, mm);
            if c1.re == 0.0 && c1.im == 0.0 {
                return ComplexApprox::new(0.0, 0.0);
            }
            let mut acc = ComplexApprox::new(0.0, 0.0);
            for n in -r..=r {
                let lin = mm * a + n * gamma.v;
                if lin == 0 {
                    continue;
                }
                let c2 = at(&t2, n);
                if c2.re == 0.0 && c2.im == 0.0 {
                    continue;
                }
                let w = z * lin as f64 + (mm * a2 + n * gamma.delta) as f64;
                acc += c1 * c2 / w.powu(k);
            }
            acc
        })
        .collect();
    let off_line: ComplexApprox = rows.into_iter().sum();
    let line = line_sum(chi1, chi2, k, gamma, m, line_cutoff);
    Ok(normalize(chi2, k, off_line + line))
}

/// One entry of the randomized cusp-constant battery.
#[derive(Clone, Debug)]
pub struct BatteryCase {
    pub chi1: DirichletCharacter,
    pub chi2: DirichletCharacter,
    pub k: u32,
    pub m: u64,
    pub gamma: CuspMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatteryRow {
    pub f1: u64,
    pub f2: u64,
    pub k: u32,
    pub m: u64,
    pub gamma: CuspMatrix,
    pub exact: (f64, f64),
    pub oracle: (f64, f64),
    pub gap: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatteryReport {
    pub rows: Vec<BatteryRow>,
    pub max_gap: f64,
    pub passed: usize,
    pub failed: usize,
}

/// All admissible pairs of primitive characters with both conductors at most
/// `max_conductor`, with weights in `weights` of matching parity.
pub fn admissible_triples(max_conductor: u64, weights: std::ops::RangeInclusive<u32>) -> Vec<(DirichletCharacter, DirichletCharacter, u32)> {
    let chars: Vec<DirichletCharacter> = (1..=max_conductor).flat_map(primitive_characters).collect();
    let mut out = Vec::new();
    for c1 in &chars {
        for c2 in &chars {
            for k in weights.clone() {
                if EisensteinSeries::new(c1, c2, k).is_ok() {
                    out.push((c1.clone(), c2.clone(), k));
                }
            }
        }
    }
    out
}

/// A random matrix whose bottom-left entry is often a multiple of `f2`, so that
/// both vanishing and nonvanishing constants are exercised.
fn random_gamma(rng: &mut ChaCha8Rng, f2: u64, m: u64) -> CuspMatrix {
    loop {
        let v: i64 = match rng.gen_range(0..4) {
            0 => rng.gen_range(-30..=30),
            1 => f2 as i64 * rng.gen_range(-6..=6),
            _ => (f2 * m) as i64 * rng.gen_range(-4..=4) + if rng.gen_bool(0.5) { 0 } else { f2 as i64 },
        };
        let delta: i64 = rng.gen_range(-40..=40);
        if let Some(g) = CuspMatrix::from_bottom_row(v, delta) {
            return g;
        }
    }
}

/// The default seeded battery: conductors at most 12, k in [2, 6],
/// M in {1, 2, 3, 5}, with 20 random matrices per sampled series.
pub fn default_battery(seed: u64) -> Vec<BatteryCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples = admissible_triples(12, 2..=6);
    let mut out = Vec::new();
    for _ in 0..6 {
        let (chi1, chi2, k) = triples[rng.gen_range(0..triples.len())].clone();
        for _ in 0..20 {
            let m = [1u64, 2, 3, 5][rng.gen_range(0..4)];
            let gamma = random_gamma(&mut rng, chi2.modulus(), m);
            out.push(BatteryCase { chi1: chi1.clone(), chi2: chi2.clone(), k, m, gamma });
        }
    }
    // Always include the level-one weight-twelve series and a weight-two case.
    let t = DirichletCharacter::trivial();
    let q3 = DirichletCharacter::quadratic(3).expect("modulus 3");
    let q4 = DirichletCharacter::quadratic(4).expect("modulus 4");
    for (c1, c2, k) in [(t.clone(), t.clone(), 12), (q3.clone(), q3, 2), (q4, t, 3)] {
        for m in [1u64, 2, 3, 5] {
            let gamma = random_gamma(&mut rng, c2.modulus(), m);
            out.push(BatteryCase { chi1: c1.clone(), chi2: c2.clone(), k, m, gamma });
        }
    }
    out
}

/// Compares exact cusp constants against the one-dimensional oracle.
pub fn run_cusp_battery(cases: &[BatteryCase], cfg: &OracleConfig) -> Result<BatteryReport> {
    let rows = cases
        .par_iter()
        .map(|c| {
            let es = EisensteinSeries::new(&c.chi1, &c.chi2, c.k)?;
            let exact = es.cusp_constant(&c.gamma, c.m).embed();
            let oracle = oracle_cusp_constant(&c.chi1, &c.chi2, c.k, &c.gamma, c.m, cfg);
            let gap = (exact - oracle).norm();
            Ok(BatteryRow {
                f1: c.chi1.modulus(),
                f2: c.chi2.modulus(),
                k: c.k,
                m: c.m,
                gamma: c.gamma,
                exact: (exact.re, exact.im),
                oracle: (oracle.re, oracle.im),
                gap,
                pass: gap < cfg.tolerance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_gap = rows.iter().map(|r| r.gap).fold(0.0, f64::max);
    let passed = rows.iter().filter(|r| r.pass).count();
    Ok(BatteryReport { failed: rows.len() - passed, passed, max_gap, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta_two() {
        let cfg = OracleConfig::new(10_000, 8.0, 1e-4).unwrap();
        let z = oracle_l_value(&DirichletCharacter::trivial(), 2, &cfg);
        assert!((z.re - PI * PI / 6.0).abs() < 1e-4);
        let closed = l_value_closed_form(&DirichletCharacter::trivial(), 2).unwrap();
        assert!((closed.re - PI * PI / 6.0).abs() < 1e-12);
    }

    #[test]
    fn beta_three() {
        let q4 = DirichletCharacter::quadratic(4).unwrap();
        let cfg = OracleConfig::new(100_000, 8.0, 1e-6).unwrap();
        let l = oracle_l_value(&q4, 3, &cfg);
        assert!((l.re - PI.powi(3) / 32.0).abs() < 1e-6);
        let closed = l_value_closed_form(&q4, 3).unwrap();
        assert!((closed - ComplexApprox::new(PI.powi(3) / 32.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn identity_cusp_examples() {
        let cfg = OracleConfig::default();
        let t = DirichletCharacter::trivial();
        let q3 = DirichletCharacter::quadratic(3).unwrap();
        let id = CuspMatrix::identity();
        let v = oracle_cusp_constant(&t, &q3, 3, &id, 1, &cfg);
        assert!((v - ComplexApprox::new(-1.0 / 9.0, 0.0)).norm() < 1e-6);
        let v = oracle_cusp_constant(&q3, &t, 3, &id, 1, &cfg);
        assert!(v.norm() < 1e-8);
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::new(5, 8.0, 1e-6).is_err());
        assert!(OracleConfig::new(100, 0.5, 1e-6).is_err());
        assert!(OracleConfig::new(100, 8.0, 0.0).is_err());
    }
}
