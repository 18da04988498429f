//! Places of Q(zeta_m) above a prime and reduction to their residue fields.
//!
//! A place is an irreducible factor g of Phi_m modulo ell; its residue field
//! is F_ell[x]/(g) with zeta_m mapped to the class of x. Factors are found by
//! equal-degree splitting and sorted so that the choice of place is the same
//! on every run.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::cyclotomic::{cyclotomic_polynomial, CyclotomicNumber, Rational};
use crate::dirichlet::DirichletCharacter;
use crate::error::{Error, Result};
use crate::ntheory::{gcd, inv_mod, is_prime, multiplicative_order};

/// Dense polynomials over F_p with ascending coefficients and no trailing zeros.
mod fp {
    use super::*;

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect();
        trim(out)
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u128; a.len() + b.len() - 1];
        let p128 = p as u128;
        if p < 1 << 32 {
            // Products fit in 64 bits, so the sums cannot overflow.
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (o, &y) in out[i..].iter_mut().zip(b) {
                    *o += (x * y) as u128;
                }
            }
            return trim(out.into_iter().map(|c| (c % p128) as u64).collect());
        }
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u128 * y as u128) % p128;
            }
        }
        trim(out.into_iter().map(|c| c as u64).collect())
    }

    /// Remainder of `a` modulo a nonzero `m`.
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p).expect("nonzero leading coefficient");
        if p < 1 << 32 {
            if a.len() <= dm {
                return trim(a.to_vec());
            }
            // Lazy reduction: rows are added as u128 and only the leading
            // coefficient is reduced before each elimination step.
            let p128 = p as u128;
            let neg: Vec<u64> = m[..dm].iter().map(|&x| (p - x) % p).collect();
            let mut r: Vec<u128> = a.iter().map(|&x| x as u128).collect();
            for top in (dm..r.len()).rev() {
                let c = (r[top] % p128) as u64 * lead_inv % p;
                if c != 0 {
                    for (ri, &ni) in r[top - dm..top].iter_mut().zip(&neg) {
                        *ri += (c * ni) as u128;
                    }
                }
            }
            r.truncate(dm);
            return trim(r.into_iter().map(|c| (c % p128) as u64).collect());
        }
        let mut r = a.to_vec();
        while r.len() > dm {
            let top = r.len() - 1;
            let c = (r[top] as u128 * lead_inv as u128 % p as u128) as u64;
            if c != 0 {
                let shift = top - dm;
                for (i, &mi) in m.iter().enumerate() {
                    let t = (c as u128 * mi as u128 % p as u128) as u64;
                    r[shift + i] = (r[shift + i] + p - t) % p;
                }
            }
            r.pop();
            r = trim(r);
        }
        trim(r)
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(base: &[u64], exp: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let base = rem(base, m, p);
        for i in (0..exp.bits()).rev() {
            acc = mulmod(&acc, &acc, m, p);
            if exp.bit(i) {
                acc = mulmod(&acc, &base, m, p);
            }
        }
        rem(&acc, m, p)
    }

    pub fn monic(a: &[u64], p: u64) -> Vec<u64> {
        let inv = inv_mod(*a.last().expect("nonzero polynomial"), p).expect("invertible");
        a.iter()
            .map(|&c| (c as u128 * inv as u128 % p as u128) as u64)
            .collect()
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = std::mem::replace(&mut y, r);
        }
        if x.is_empty() {
            x
        } else {
            monic(&x, p)
        }
    }

    /// Quotient of `a` by a monic divisor `b` (exact division).
    pub fn div_exact(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let db = b.len() - 1;
        let mut r = a.to_vec();
        let mut q = vec![0u64; a.len() - db];
        for k in (0..q.len()).rev() {
            let c = r[k + db];
            q[k] = c;
            if c != 0 {
                for (i, &bi) in b.iter().enumerate() {
                    let t = (c as u128 * bi as u128 % p as u128) as u64;
                    r[k + i] = (r[k + i] + p - t) % p;
                }
            }
        }
        trim(q)
    }

    /// Inverse of `a` modulo `m` (m irreducible, a nonzero mod m).
    pub fn invmod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
        let (mut r0, mut r1) = (m.to_vec(), rem(a, m, p));
        let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s2 = sub(&s0, &mul(&q, &s1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.len() != 1 {
            return None;
        }
        let c = inv_mod(r0[0], p)?;
        Some(rem(&mul(&s0, &[c], p), m, p))
    }

    fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let db = b.len() - 1;
        if a.len() <= db {
            return (Vec::new(), trim(a.to_vec()));
        }
        let lead_inv = inv_mod(b[db], p).expect("nonzero leading coefficient");
        let mut r = a.to_vec();
        let mut q = vec![0u64; a.len() - db];
        for k in (0..q.len()).rev() {
            let c = (r[k + db] as u128 * lead_inv as u128 % p as u128) as u64;
            q[k] = c;
            if c != 0 {
                for (i, &bi) in b.iter().enumerate() {
                    let t = (c as u128 * bi as u128 % p as u128) as u64;
                    r[k + i] = (r[k + i] + p - t) % p;
                }
            }
        }
        r.truncate(db);
        (trim(q), trim(r))
    }
}

/// Splits a squarefree monic `f` whose irreducible factors all have degree `d`.
fn equal_degree_factors(f: Vec<u64>, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    if n == d {
        return vec![f];
    }
    let q_d = BigUint::from(p).pow(d as u32);
    let half = (&q_d - BigUint::one()) >> 1;
    loop {
        let a: Vec<u64> = fp::trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = if p == 2 {
            // Trace map a + a^2 + ... + a^(2^(d-1)).
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = fp::mulmod(&t, &t, &f, p);
                acc = fp::add(&acc, &t, p);
            }
            acc
        } else {
            fp::sub(&fp::powmod(&a, &half, &f, p), &[1], p)
        };
        let g = fp::gcd(&b, &f, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = fp::div_exact(&f, &g, p);
            let mut out = equal_degree_factors(g, d, p, rng);
            out.extend(equal_degree_factors(fp::monic(&h, p), d, p, rng));
            return out;
        }
    }
}

/// A prime of Q(zeta_m) above ell, given by a monic factor of Phi_m mod ell.
pub struct Place {
    ell: u64,
    m: u64,
    min_poly: Vec<u64>,
    zeta_powers: OnceLock<Vec<Vec<u64>>>,
}

impl Place {
    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// Ambient cyclotomic order.
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Coefficients of the factor, constant term first, ending in 1.
    pub fn min_poly(&self) -> &[u64] {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    fn zeta_power(&self, e: u64) -> Vec<u64> {
        let e = e % self.m;
        // Cache the full table of powers only when it is small.
        if self.m as usize * self.degree() <= 1 << 20 {
            let table = self.zeta_powers.get_or_init(|| {
                let x = self.x();
                let mut out = Vec::with_capacity(self.m as usize);
                let mut cur = vec![1u64];
                for _ in 0..self.m {
                    out.push(cur.clone());
                    cur = fp::mulmod(&cur, &x, &self.min_poly, self.ell);
                }
                out
            });
            return table[e as usize].clone();
        }
        fp::powmod(&self.x(), &BigUint::from(e), &self.min_poly, self.ell)
    }

    fn x(&self) -> Vec<u64> {
        fp::rem(&[0, 1], &self.min_poly, self.ell)
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Place")
            .field("ell", &self.ell)
            .field("m", &self.m)
            .field("min_poly", &self.min_poly)
            .finish()
    }
}

impl PartialEq for Place {
    fn eq(&self, other: &Self) -> bool {
        self.ell == other.ell && self.m == other.m && self.min_poly == other.min_poly
    }
}

impl Eq for Place {}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            ell: u64,
            m: u64,
            min_poly: &'a [u64],
        }
        Raw { ell: self.ell, m: self.m, min_poly: &self.min_poly }.serialize(serializer)
    }
}

fn phi_mod(ell: u64, m: u64) -> Vec<u64> {
    let phi = cyclotomic_polynomial(m)
        .iter()
        .map(|&c| (c as i128).rem_euclid(ell as i128) as u64)
        .collect();
    fp::trim(phi)
}

type PlaceCache = Mutex<HashMap<(u64, u64), Arc<Vec<Arc<Place>>>>>;

fn place_cache() -> &'static PlaceCache {
    static CACHE: OnceLock<PlaceCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All places of Q(zeta_m) above ell, in lexicographic order of
/// `[c_0, c_1, ..., 1]`.
pub fn all_places(ell: u64, m: u64) -> Result<Arc<Vec<Arc<Place>>>> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    if m % ell == 0 {
        return Err(Error::RamifiedUnsupported { ell, m });
    }
    if let Some(p) = place_cache().lock().unwrap().get(&(ell, m)) {
        return Ok(Arc::clone(p));
    }
    let d = multiplicative_order(ell % m, m) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(ell.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ m);
    let mut factors = equal_degree_factors(phi_mod(ell, m), d, ell, &mut rng);
    factors.sort();
    let places: Vec<Arc<Place>> = factors
        .into_iter()
        .map(|g| {
            Arc::new(Place { ell, m, min_poly: g, zeta_powers: OnceLock::new() })
        })
        .collect();
    let places = Arc::new(places);
    place_cache()
        .lock()
        .unwrap()
        .insert((ell, m), Arc::clone(&places));
    Ok(places)
}

/// The distinguished place above ell: the smallest factor of Phi_m mod ell.
pub fn place_above(ell: u64, m: u64) -> Result<Arc<Place>> {
    Ok(Arc::clone(&all_places(ell, m)?[0]))
}

/// The place of Q(zeta_m) below `place`, for `m` dividing its ambient order.
pub fn restrict_place(place: &Arc<Place>, m: u64) -> Result<Arc<Place>> {
    if m == 0 || place.m % m != 0 {
        return Err(Error::IncompatiblePlace { ell: place.ell, m: place.m, order: m });
    }
    if m == place.m {
        return Ok(Arc::clone(place));
    }
    let p = place.ell;
    let zeta = place.zeta_power(place.m / m);
    let below = all_places(p, m)?;
    let hit = below.iter().find(|g| {
        let mut acc: Vec<u64> = Vec::new();
        for &c in g.min_poly.iter().rev() {
            acc = fp::add(&fp::mulmod(&acc, &zeta, &place.min_poly, p), &[c], p);
        }
        acc.is_empty()
    });
    Ok(Arc::clone(hit.expect("the image of zeta_m is a root of exactly one factor")))
}

type OverCache = Mutex<HashMap<(u64, u64, Vec<u64>, u64), Arc<Vec<Arc<Place>>>>>;

fn over_cache() -> &'static OverCache {
    static CACHE: OnceLock<OverCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The places of Q(zeta_m) lying over `place`, in the order of [`all_places`].
/// `m` must be a multiple of the ambient order of `place`.
pub fn places_over(place: &Arc<Place>, m: u64) -> Result<Arc<Vec<Arc<Place>>>> {
    let ell = place.ell;
    if m == 0 || m % place.m != 0 {
        return Err(Error::IncompatiblePlace { ell, m: place.m, order: m });
    }
    if m % ell == 0 {
        return Err(Error::RamifiedUnsupported { ell, m });
    }
    if m == place.m {
        return Ok(Arc::new(vec![Arc::clone(place)]));
    }
    let key = (ell, place.m, place.min_poly.clone(), m);
    if let Some(p) = over_cache().lock().unwrap().get(&key) {
        return Ok(Arc::clone(p));
    }
    // A factor lies over `place` exactly when zeta_m^(m/n) is a root of its
    // polynomial g, i.e. when it divides g(x^(m/n)).
    let step = (m / place.m) as usize;
    let mut lifted = vec![0u64; place.degree() * step + 1];
    for (i, &c) in place.min_poly.iter().enumerate() {
        lifted[i * step] = c;
    }
    let h = fp::monic(&fp::gcd(&phi_mod(ell, m), &lifted, ell), ell);
    let d = multiplicative_order(ell % m, m) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(ell.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ m ^ (place.m << 32));
    let mut factors = equal_degree_factors(h, d, ell, &mut rng);
    factors.sort();
    let places = Arc::new(
        factors
            .into_iter()
            .map(|g| Arc::new(Place { ell, m, min_poly: g, zeta_powers: OnceLock::new() }))
            .collect::<Vec<_>>(),
    );
    over_cache().lock().unwrap().insert(key, Arc::clone(&places));
    Ok(places)
}

/// The first place of Q(zeta_m) over `place`.
pub fn place_over(place: &Arc<Place>, m: u64) -> Result<Arc<Place>> {
    Ok(Arc::clone(&places_over(place, m)?[0]))
}

/// An element of the residue field of a place, in the polynomial basis.
#[derive(Clone)]
pub struct FiniteFieldElement {
    place: Arc<Place>,
    coeffs: Vec<u64>,
}

impl FiniteFieldElement {
    fn from_poly(place: &Arc<Place>, poly: Vec<u64>) -> Self {
        let mut coeffs = fp::rem(&poly, &place.min_poly, place.ell);
        coeffs.resize(place.degree(), 0);
        FiniteFieldElement { place: Arc::clone(place), coeffs }
    }

    pub fn zero(place: &Arc<Place>) -> Self {
        Self::from_poly(place, Vec::new())
    }

    pub fn one(place: &Arc<Place>) -> Self {
        Self::from_poly(place, vec![1])
    }

    pub fn from_int(place: &Arc<Place>, n: i64) -> Self {
        Self::from_poly(place, vec![(n as i128).rem_euclid(place.ell as i128) as u64])
    }

    pub fn from_rational(place: &Arc<Place>, q: &Rational) -> Result<Self> {
        Ok(Self::from_poly(place, vec![reduce_rational(q, place.ell)?]))
    }

    /// Image of `zeta_order^exp`; `order` must divide the ambient order.
    pub fn root_of_unity(place: &Arc<Place>, order: u64, exp: u64) -> Result<Self> {
        if order == 0 || place.m % order != 0 {
            return Err(Error::IncompatiblePlace { ell: place.ell, m: place.m, order });
        }
        let e = (exp % order) * (place.m / order);
        Ok(Self::from_poly(place, place.zeta_power(e)))
    }

    pub fn place(&self) -> &Arc<Place> {
        &self.place
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.first() == Some(&1) && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_poly(&self.place, fp::add(&self.coeffs, &other.coeffs, self.place.ell))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_poly(&self.place, fp::sub(&self.coeffs, &other.coeffs, self.place.ell))
    }

    pub fn neg(&self) -> Self {
        Self::zero(&self.place).sub(self)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.place.ell;
        Self::from_poly(&self.place, fp::mul(&fp::trim(self.coeffs.clone()), &fp::trim(other.coeffs.clone()), p))
    }

    pub fn inv(&self) -> Result<Self> {
        let p = self.place.ell;
        fp::invmod(&fp::trim(self.coeffs.clone()), &self.place.min_poly, p)
            .map(|v| Self::from_poly(&self.place, v))
            .ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, exp: u64) -> Self {
        let p = self.place.ell;
        Self::from_poly(
            &self.place,
            fp::powmod(&fp::trim(self.coeffs.clone()), &BigUint::from(exp), &self.place.min_poly, p),
        )
    }
}

impl PartialEq for FiniteFieldElement {
    fn eq(&self, other: &Self) -> bool {
        *self.place == *other.place && self.coeffs == other.coeffs
    }
}

impl Eq for FiniteFieldElement {}

impl fmt::Debug for FiniteFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {:?}", self.coeffs, self.place.min_poly)
    }
}

impl Serialize for FiniteFieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

fn reduce_rational(q: &Rational, ell: u64) -> Result<u64> {
    let l = BigInt::from(ell);
    let den = (q.denom() % &l).to_u64().expect("small residue");
    let inv = inv_mod(den, ell).ok_or(Error::NotIntegral { ell, index: None })?;
    let num = q.numer() % &l;
    let num = if num < BigInt::zero() { num + &l } else { num };
    let num = num.to_u64().expect("small residue");
    Ok((num as u128 * inv as u128 % ell as u128) as u64)
}

/// The image of x under the reduction map of `place`.
pub fn reduce_at(x: &CyclotomicNumber, place: &Arc<Place>) -> Result<FiniteFieldElement> {
    let o = x.order();
    if place.m % o != 0 {
        return Err(Error::IncompatiblePlace { ell: place.ell, m: place.m, order: o });
    }
    let p = place.ell;
    let step = place.m / o;
    let mut acc = vec![0u64; place.degree()];
    for (i, c) in x.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = reduce_rational(c, p)?;
        if c == 0 {
            continue;
        }
        let z = place.zeta_power(i as u64 * step);
        for (slot, zi) in acc.iter_mut().zip(z) {
            *slot = ((*slot as u128 + c as u128 * zi as u128) % p as u128) as u64;
        }
    }
    Ok(FiniteFieldElement { place: Arc::clone(place), coeffs: acc })
}

/// True when chi is the multiplicative lift of its own reduction mod ell,
/// i.e. both its order and its conductor are prime to ell.
pub fn lift_validate(chi: &DirichletCharacter, ell: u64) -> bool {
    gcd(chi.order(), ell) == 1 && gcd(chi.conductor(), ell) == 1
}
