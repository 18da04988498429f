//! Exact arithmetic in cyclotomic fields Q(zeta_m).
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^(phi(m)-1)` and
//! every constructor reduces modulo the m-th cyclotomic polynomial, so two
//! elements of the same order are equal exactly when their coefficient vectors
//! are. Orders are never minimized automatically; mixed-order arithmetic
//! promotes both operands to the lcm of their orders.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ntheory::{euler_phi, gcd, lcm, mobius};

pub type Rational = BigRational;

/// Complex floating-point approximation used by the numeric oracles.
pub type ComplexApprox = Complex64;

fn cyclo_cache() -> &'static RwLock<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients (ascending) of the m-th cyclotomic polynomial, cached per order.
///
/// Built from the Moebius factorization `Phi_m = prod_{d | m} (1 - x^d)^{mu(m/d)}`
/// as a power series truncated at degree `phi(m)`.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<i64>> {
    assert!(m > 0, "cyclotomic order must be positive");
    if let Some(p) = cyclo_cache().read().unwrap().get(&m) {
        return Arc::clone(p);
    }
    let poly = Arc::new(compute_cyclotomic(m));
    cyclo_cache()
        .write()
        .unwrap()
        .entry(m)
        .or_insert_with(|| Arc::clone(&poly));
    poly
}

fn compute_cyclotomic(m: u64) -> Vec<i64> {
    if m == 1 {
        return vec![-1, 1];
    }
    let deg = euler_phi(m) as usize;
    let mut series = vec![0i128; deg + 1];
    series[0] = 1;
    for d in crate::ntheory::divisors(m) {
        let d_us = d as usize;
        if d_us > deg {
            continue;
        }
        match mobius(m / d) {
            1 => {
                for i in (d_us..=deg).rev() {
                    series[i] -= series[i - d_us];
                }
            }
            -1 => {
                for i in d_us..=deg {
                    series[i] += series[i - d_us];
                }
            }
            _ => {}
        }
    }
    series
        .into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient exceeds i64"))
        .collect()
}

/// Reduces an integer polynomial of degree < m (already folded by x^m = 1)
/// modulo Phi_m, leaving `phi(m)` coefficients.
fn reduce_folded(m: u64, mut poly: Vec<BigInt>) -> Vec<BigInt> {
    let phi_poly = cyclotomic_polynomial(m);
    let deg = phi_poly.len() - 1;
    let support: Vec<(usize, i64)> = phi_poly[..deg]
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(i, c)| (i, *c))
        .collect();
    for top in (deg..poly.len()).rev() {
        if poly[top].is_zero() {
            continue;
        }
        let lead = std::mem::take(&mut poly[top]);
        let shift = top - deg;
        for &(i, c) in &support {
            poly[shift + i] -= &lead * c;
        }
    }
    poly.truncate(deg);
    poly.resize(deg, BigInt::zero());
    poly
}

fn reduce_folded_small(m: u64, poly: &[i128]) -> Option<Vec<i128>> {
    let phi_poly = cyclotomic_polynomial(m);
    let deg = phi_poly.len() - 1;
    let mut poly = poly.to_vec();
    for top in (deg..poly.len()).rev() {
        let lead = poly[top];
        if lead == 0 {
            continue;
        }
        poly[top] = 0;
        let shift = top - deg;
        for (i, &c) in phi_poly[..deg].iter().enumerate() {
            if c != 0 {
                let t = lead.checked_mul(c as i128)?;
                poly[shift + i] = poly[shift + i].checked_sub(t)?;
            }
        }
    }
    poly.truncate(deg);
    poly.resize(deg, 0);
    Some(poly)
}

/// An exact element of Q(zeta_m) in canonical power-basis form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    /// Canonical representative of `sum_i poly[i] zeta_order^i`.
    pub fn canonicalize(order: u64, poly: &[Rational]) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder);
        }
        let mut folded = vec![Rational::zero(); order as usize];
        for (i, c) in poly.iter().enumerate() {
            if !c.is_zero() {
                folded[i % order as usize] += c;
            }
        }
        Ok(Self::from_folded(order, folded))
    }

    /// Builds an element from `(exponent, coefficient)` pairs in zeta_order.
    pub fn from_exponents<I>(order: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, Rational)>,
    {
        assert!(order > 0);
        let mut folded = vec![Rational::zero(); order as usize];
        for (e, c) in terms {
            folded[(e % order) as usize] += c;
        }
        Self::from_folded(order, folded)
    }

    /// Builds an element from integer multiplicities of powers of zeta_order.
    pub fn from_integer_exponents(order: u64, folded: Vec<BigInt>) -> Self {
        assert_eq!(folded.len() as u64, order);
        let reduced = reduce_folded(order, folded);
        CyclotomicNumber {
            order,
            coeffs: reduced.into_iter().map(Rational::from_integer).collect(),
        }
    }

    fn from_folded(order: u64, folded: Vec<Rational>) -> Self {
        let (nums, den) = clear_denominators(&folded);
        Self::from_integer_form(order, reduce_folded(order, nums), &den)
    }

    fn from_integer_form(order: u64, nums: Vec<BigInt>, den: &BigInt) -> Self {
        let coeffs = nums
            .into_iter()
            .map(|n| Rational::new(n, den.clone()))
            .collect();
        CyclotomicNumber { order, coeffs }
    }

    fn integer_form(&self) -> (Vec<BigInt>, BigInt) {
        clear_denominators(&self.coeffs)
    }

    pub fn zero(order: u64) -> Self {
        assert!(order > 0);
        CyclotomicNumber {
            order,
            coeffs: vec![Rational::zero(); euler_phi(order) as usize],
        }
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u64, q: Rational) -> Self {
        let mut out = Self::zero(order);
        out.coeffs[0] = q;
        out
    }

    pub fn from_integer(order: u64, n: i64) -> Self {
        Self::from_rational(order, Rational::from_integer(BigInt::from(n)))
    }

    /// `zeta_order^exp`.
    pub fn root_of_unity(order: u64, exp: u64) -> Self {
        Self::from_exponents(order, [(exp, Rational::one())])
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    /// The same number stored with ambient order `target`.
    pub fn promote(&self, target: u64) -> Result<Self> {
        if target == 0 {
            return Err(Error::InvalidOrder);
        }
        if target % self.order != 0 {
            return Err(Error::IncompatibleOrders {
                have: self.order,
                target,
            });
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let step = target / self.order;
        let mut folded = vec![BigInt::zero(); target as usize];
        let (nums, den) = self.integer_form();
        for (i, n) in nums.into_iter().enumerate() {
            folded[(i as u64 * step) as usize] = n;
        }
        Ok(Self::from_integer_form(
            target,
            reduce_folded(target, folded),
            &den,
        ))
    }

    fn promote_pair(&self, other: &Self) -> (Self, Self) {
        let m = lcm(self.order, other.order);
        (
            self.promote(m).expect("lcm is a multiple"),
            other.promote(m).expect("lcm is a multiple"),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.order != other.order {
            let (a, b) = self.promote_pair(other);
            return a.add(&b);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CyclotomicNumber {
            order: self.order,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.order != other.order {
            let (a, b) = self.promote_pair(other);
            return a.mul(&b);
        }
        if let Some(q) = other.as_rational() {
            return self.scale(q);
        }
        if let Some(q) = self.as_rational() {
            return other.scale(q);
        }
        let m = self.order;
        let (an, ad) = self.integer_form();
        let (bn, bd) = other.integer_form();
        let den = ad * bd;
        let nums = match mul_folded_small(m, &an, &bn) {
            Some(v) => v,
            None => {
                let mut folded = vec![BigInt::zero(); m as usize];
                for (i, a) in an.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in bn.iter().enumerate() {
                        if !b.is_zero() {
                            folded[(i + j) % m as usize] += a * b;
                        }
                    }
                }
                reduce_folded(m, folded)
            }
        };
        Self::from_integer_form(m, nums, &den)
    }

    /// Multiplies by `zeta_order^exp` without a full convolution.
    pub fn mul_root_of_unity(&self, exp: u64) -> Self {
        let m = self.order;
        let (nums, den) = self.integer_form();
        let mut folded = vec![BigInt::zero(); m as usize];
        for (i, n) in nums.into_iter().enumerate() {
            folded[((i as u64 + exp) % m) as usize] = n;
        }
        Self::from_integer_form(m, reduce_folded(m, folded), &den)
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Phi_m.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(self.order, q.recip()));
        }
        let nonzero: Vec<usize> = (0..self.coeffs.len())
            .filter(|&i| !self.coeffs[i].is_zero())
            .collect();
        if nonzero.len() == 1 {
            let i = nonzero[0] as u64;
            let c = self.coeffs[nonzero[0]].recip();
            return Ok(Self::root_of_unity(self.order, self.order - i % self.order).scale(&c));
        }
        let modulus: Vec<Rational> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        let (g, s) = poly_ext_gcd(trim(self.coeffs.clone()), modulus);
        // g is a nonzero constant because Phi_m is irreducible over Q.
        debug_assert_eq!(g.len(), 1);
        let scale = g[0].recip();
        let s: Vec<Rational> = s.into_iter().map(|c| c * &scale).collect();
        Self::canonicalize(self.order, &s)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Image under the automorphism `zeta -> zeta^a`, `gcd(a, m) = 1`.
    pub fn galois(&self, a: u64) -> Self {
        let m = self.order;
        if m == 1 {
            return self.clone();
        }
        assert_eq!(gcd(a % m, m), 1, "galois exponent must be a unit");
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| ((i as u64 * a) % m, c.clone()));
        Self::from_exponents(m, terms)
    }

    /// Complex conjugate (`zeta -> zeta^-1`).
    pub fn conj(&self) -> Self {
        self.galois(self.order.max(2) - 1)
    }

    /// Value comparison across different ambient orders.
    pub fn equals_value(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self == other;
        }
        let (a, b) = self.promote_pair(other);
        a == b
    }

    /// Complex value under `zeta_m -> exp(2 pi i / m)`.
    pub fn embed(&self) -> ComplexApprox {
        let m = self.order as f64;
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = rational_to_f64(c);
            let (s, co) = (std::f64::consts::TAU * i as f64 / m).sin_cos();
            re += v * co;
            im += v * s;
        }
        ComplexApprox::new(re, im)
    }

    /// Embedding with a requested precision. Only double precision is
    /// available, so requests above 53 bits are served at 53.
    pub fn embed_with_precision(&self, precision_bits: u32) -> Result<ComplexApprox> {
        if precision_bits < 53 {
            return Err(Error::InvalidInput(format!(
                "precision must be at least 53 bits, got {precision_bits}"
            )));
        }
        Ok(self.embed())
    }

    /// Sum of absolute values of the coefficients.
    pub fn height(&self) -> f64 {
        self.coeffs.iter().map(|c| rational_to_f64(c).abs()).sum()
    }

    /// True when every coefficient denominator is prime to `ell`.
    pub fn is_integral_at(&self, ell: u64) -> bool {
        let ell = BigInt::from(ell);
        self.coeffs
            .iter()
            .all(|c| !c.denom().is_multiple_of(&ell))
    }

    /// True when every coefficient is an integer (an algebraic integer).
    pub fn is_algebraic_integer(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Rewrites the element in the smaller ambient order `target` when it lies in
    /// Q(zeta_target). Test helper; normal arithmetic never demotes.
    pub fn demote(&self, target: u64) -> Option<Self> {
        if target == 0 || self.order % target != 0 {
            return None;
        }
        let small_dim = euler_phi(target) as usize;
        let big_dim = self.coeffs.len();
        // Column j is the image of zeta_target^j in the big power basis.
        let columns: Vec<Vec<Rational>> = (0..small_dim)
            .map(|j| {
                Self::root_of_unity(target, j as u64)
                    .promote(self.order)
                    .expect("target divides order")
                    .coeffs
            })
            .collect();
        let mut rows: Vec<Vec<Rational>> = (0..big_dim)
            .map(|i| {
                let mut row: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
                row.push(self.coeffs[i].clone());
                row
            })
            .collect();
        let solution = solve_linear(&mut rows, small_dim)?;
        Some(CyclotomicNumber {
            order: target,
            coeffs: solution,
        })
    }
}

fn mul_folded_small(m: u64, a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let a: Vec<i64> = a.iter().map(|x| x.to_i64()).collect::<Option<_>>()?;
    let b: Vec<i64> = b.iter().map(|x| x.to_i64()).collect::<Option<_>>()?;
    let max_a = a.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as u128;
    let max_b = b.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as u128;
    let bound = max_a.checked_mul(max_b)?.checked_mul(a.len() as u128 + 1)?;
    if bound >= 1u128 << 100 {
        return None;
    }
    let mut folded = vec![0i128; m as usize];
    let nz_b: Vec<(usize, i128)> = b
        .iter()
        .enumerate()
        .filter(|(_, x)| **x != 0)
        .map(|(j, x)| (j, *x as i128))
        .collect();
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let x = x as i128;
        for &(j, y) in &nz_b {
            folded[(i + j) % m as usize] += x * y;
        }
    }
    let reduced = reduce_folded_small(m, &folded)?;
    Some(reduced.into_iter().map(BigInt::from).collect())
}

fn clear_denominators(coeffs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let den = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    (nums, den)
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Split very large numerators/denominators to keep precision.
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_divrem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = num.to_vec();
    let dlen = den.len();
    if rem.len() < dlen {
        return (vec![Rational::zero()], trim(rem));
    }
    let lead_inv = den[dlen - 1].recip();
    let mut quot = vec![Rational::zero(); rem.len() - dlen + 1];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dlen - 1] * &lead_inv;
        if !c.is_zero() {
            for (j, d) in den.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
        }
        quot[k] = c;
    }
    rem.truncate(dlen - 1);
    if rem.is_empty() {
        rem.push(Rational::zero());
    }
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn is_zero_poly(p: &[Rational]) -> bool {
    p.iter().all(Zero::is_zero)
}

/// Returns `(g, s)` with `s*a = g (mod b)`.
fn poly_ext_gcd(a: Vec<Rational>, b: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (vec![Rational::one()], vec![Rational::zero()]);
    while !is_zero_poly(&r1) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

/// Gaussian elimination on an augmented system; returns the unique solution
/// of the first `unknowns` columns or `None` if the system is inconsistent.
fn solve_linear(rows: &mut [Vec<Rational>], unknowns: usize) -> Option<Vec<Rational>> {
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..unknowns {
        let Some(r) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, r);
        let inv = rows[pivot_row][col].recip();
        for x in rows[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != pivot_row && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot = rows[pivot_row].clone();
                for (x, p) in rows[i].iter_mut().zip(pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[unknowns].is_zero()) {
        return None;
    }
    let mut out = vec![Rational::zero(); unknowns];
    for (r, &col) in pivots.iter().enumerate() {
        out[col] = rows[r][unknowns].clone();
    }
    Some(out)
}

/// Formats a rational as `"p/q"`.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(n, d))
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})[", self.order)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "z{}", self.order)?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicJson {
    order: u64,
    coeffs: Vec<String>,
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CyclotomicJson {
            order: self.order,
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CyclotomicJson::deserialize(deserializer)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        CyclotomicNumber::canonicalize(raw.order, &coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&n| q(n, 1)).collect()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.len(), 49);
        assert!(p105.contains(&-2));
    }

    #[test]
    fn canonicalize_examples() {
        let z = CyclotomicNumber::canonicalize(3, &ints(&[1, 1, 1])).unwrap();
        assert!(z.is_zero());
        let i2 = CyclotomicNumber::canonicalize(4, &ints(&[0, 0, 1])).unwrap();
        assert_eq!(i2, CyclotomicNumber::from_integer(4, -1));
        let r = CyclotomicNumber::canonicalize(1, &[q(7, 2)]).unwrap();
        assert_eq!(r.as_rational(), Some(&q(7, 2)));
        assert_eq!(
            CyclotomicNumber::canonicalize(0, &[]),
            Err(Error::InvalidOrder)
        );
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let a = CyclotomicNumber::canonicalize(12, &ints(&[3, -1, 4, 1, -5, 9, 2, 6, 5, 3, 5, 8, 9, 7]))
            .unwrap();
        let again = CyclotomicNumber::canonicalize(12, a.coeffs()).unwrap();
        assert_eq!(a, again);
    }

    #[test]
    fn promote_examples() {
        let minus_one = CyclotomicNumber::root_of_unity(2, 1);
        let p = minus_one.promote(4).unwrap();
        assert_eq!(p, CyclotomicNumber::from_integer(4, -1));
        let z3 = CyclotomicNumber::root_of_unity(3, 1);
        assert_eq!(z3.promote(6).unwrap(), CyclotomicNumber::root_of_unity(6, 2));
        let r = CyclotomicNumber::from_rational(1, q(5, 3)).promote(12).unwrap();
        assert_eq!(r.order(), 12);
        assert_eq!(r.as_rational(), Some(&q(5, 3)));
        assert_eq!(
            z3.promote(4),
            Err(Error::IncompatibleOrders { have: 3, target: 4 })
        );
    }

    #[test]
    fn mul_examples() {
        let i = CyclotomicNumber::root_of_unity(4, 1);
        assert_eq!(i.mul(&i), CyclotomicNumber::from_integer(4, -1));
        let z3 = CyclotomicNumber::root_of_unity(3, 1);
        assert_eq!(z3.mul(&i), CyclotomicNumber::root_of_unity(12, 7));
        let a = CyclotomicNumber::canonicalize(3, &ints(&[1, 1])).unwrap();
        let b = CyclotomicNumber::canonicalize(3, &ints(&[1, 0, 1])).unwrap();
        assert_eq!(a.mul(&b), CyclotomicNumber::one(3));
    }

    #[test]
    fn inverse_examples() {
        let z5 = CyclotomicNumber::root_of_unity(5, 1);
        assert_eq!(z5.inv().unwrap(), CyclotomicNumber::root_of_unity(5, 4));
        let r = CyclotomicNumber::from_rational(1, q(2, 3));
        assert_eq!(r.inv().unwrap().as_rational(), Some(&q(3, 2)));
        let a = CyclotomicNumber::canonicalize(3, &ints(&[1, 1])).unwrap();
        let v = a.inv().unwrap();
        assert_eq!(a.mul(&v), CyclotomicNumber::one(3));
        assert_eq!(v, CyclotomicNumber::root_of_unity(3, 1).neg());
        assert_eq!(
            CyclotomicNumber::zero(7).inv(),
            Err(Error::DivisionByZero)
        );
        let w = CyclotomicNumber::canonicalize(15, &[q(1, 2), q(-3, 1), q(0, 1), q(7, 5)]).unwrap();
        assert_eq!(w.mul(&w.inv().unwrap()), CyclotomicNumber::one(15));
    }

    #[test]
    fn embed_examples() {
        let i = CyclotomicNumber::root_of_unity(4, 1).embed();
        assert!((i - ComplexApprox::new(0.0, 1.0)).norm() < 1e-15);
        let s = CyclotomicNumber::canonicalize(3, &ints(&[1, 1, 1])).unwrap().embed();
        assert!(s.norm() < 1e-15);
        let d = CyclotomicNumber::canonicalize(3, &ints(&[0, 1, -1])).unwrap().embed();
        assert!((d - ComplexApprox::new(0.0, 3f64.sqrt())).norm() < 1e-9);
        assert!(CyclotomicNumber::one(3).embed_with_precision(40).is_err());
    }

    #[test]
    fn demote_round_trip() {
        let x = CyclotomicNumber::root_of_unity(3, 1).add(&CyclotomicNumber::from_integer(3, 2));
        let big = x.promote(15).unwrap();
        assert_eq!(big.demote(3), Some(x));
        assert_eq!(CyclotomicNumber::root_of_unity(15, 1).demote(3), None);
    }

    #[test]
    fn json_format() {
        let x = CyclotomicNumber::canonicalize(3, &[q(1, 2), q(-2, 3)]).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"order":3,"coeffs":["1/2","-2/3"]}"#);
        let back: CyclotomicNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn galois_and_conjugation() {
        let z = CyclotomicNumber::root_of_unity(7, 2);
        assert_eq!(z.conj(), CyclotomicNumber::root_of_unity(7, 5));
        assert_eq!(z.galois(3), CyclotomicNumber::root_of_unity(7, 6));
    }
}
