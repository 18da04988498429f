//! Dirichlet characters stored as full value tables.
//!
//! A character of modulus q and order n records, for every residue class, the
//! exponent e of zeta_n (or `None` on non-units). Tables are always built by
//! multiplicativity from the canonical generator system of (Z/q)^*:
//! smallest primitive roots for odd prime powers, 3 for 4, and (-1, 5) for
//! higher powers of 2, each lifted by CRT.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::ntheory::{crt_pair, divisors, factorize, gcd, lcm, mul_mod, residue, smallest_primitive_root};

/// One canonical generator of (Z/q)^*: its residue mod q and its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub residue: u64,
    pub order: u64,
}

/// The canonical generator system of (Z/q)^*, ordered by prime, with the pair
/// (-1, 5) for 2^e, e >= 3.
pub fn canonical_generators(q: u64) -> Vec<Generator> {
    let mut out = Vec::new();
    for (p, e) in factorize(q) {
        let pe = p.pow(e);
        let rest = q / pe;
        let lift = |g: u64| crt_pair(g % pe, pe, 1 % rest, rest);
        if p == 2 {
            match e {
                1 => {}
                2 => out.push(Generator { residue: lift(3), order: 2 }),
                _ => {
                    out.push(Generator { residue: lift(pe - 1), order: 2 });
                    out.push(Generator { residue: lift(5), order: pe / 4 });
                }
            }
        } else {
            let g = smallest_primitive_root(p, e);
            out.push(Generator { residue: lift(g), order: pe / p * (p - 1) });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    /// Indexed by residue `a mod modulus`.
    values: Vec<Option<u64>>,
}

impl DirichletCharacter {
    /// The trivial character of modulus 1.
    pub fn trivial() -> Self {
        DirichletCharacter {
            modulus: 1,
            order: 1,
            values: vec![Some(0)],
        }
    }

    /// The principal character of modulus q.
    pub fn principal(q: u64) -> Self {
        assert!(q > 0);
        let values = (0..q).map(|a| (gcd(a, q) == 1).then_some(0)).collect();
        DirichletCharacter { modulus: q, order: 1, values }
    }

    /// Builds a character from images of canonical generators given as
    /// `(residue, exponent, root_order)`, meaning `chi(residue) = zeta_root_order^exponent`.
    /// Generators not listed map to 1.
    pub fn construct(modulus: u64, images: &[(u64, u64, u64)]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidCharacter("modulus must be positive".into()));
        }
        let gens = canonical_generators(modulus);
        let mut assigned: Vec<Option<(u64, u64)>> = vec![None; gens.len()];
        for &(res, exp, root_order) in images {
            let r = res % modulus;
            let Some(i) = gens.iter().position(|g| g.residue == r) else {
                return Err(Error::InvalidGenerator { residue: res, modulus });
            };
            if assigned[i].is_some() {
                return Err(Error::InvalidCharacter(format!("generator {res} given twice")));
            }
            if root_order == 0 {
                return Err(Error::InvalidCharacter("root order must be positive".into()));
            }
            assigned[i] = Some((exp % root_order, root_order));
        }
        let images: Vec<(u64, u64)> = assigned
            .into_iter()
            .map(|a| a.unwrap_or((0, 1)))
            .collect();
        Self::from_generator_images(modulus, &gens, &images)
    }

    /// Builds a character from `(exponent, root_order)` images listed in
    /// canonical generator order.
    pub fn from_generator_exponents(modulus: u64, images: &[(u64, u64)]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidCharacter("modulus must be positive".into()));
        }
        let gens = canonical_generators(modulus);
        if images.len() != gens.len() {
            return Err(Error::InvalidCharacter(format!(
                "modulus {modulus} has {} canonical generators, got {} images",
                gens.len(),
                images.len()
            )));
        }
        if images.iter().any(|&(_, r)| r == 0) {
            return Err(Error::InvalidCharacter("root order must be positive".into()));
        }
        let images: Vec<(u64, u64)> = images.iter().map(|&(e, r)| (e % r, r)).collect();
        Self::from_generator_images(modulus, &gens, &images)
    }

    /// The character sending every canonical generator to -1.
    pub fn quadratic(modulus: u64) -> Result<Self> {
        let n = canonical_generators(modulus).len();
        Self::from_generator_exponents(modulus, &vec![(1, 2); n])
    }

    fn from_generator_images(modulus: u64, gens: &[Generator], images: &[(u64, u64)]) -> Result<Self> {
        // Reduce each image to its exact order and check it divides the generator order.
        let mut reduced = Vec::with_capacity(gens.len());
        for (g, &(e, r)) in gens.iter().zip(images) {
            let d = gcd(e, r);
            let (e, r) = if e == 0 { (0, 1) } else { (e / d, r / d) };
            if g.order % r != 0 {
                return Err(Error::InvalidCharacter(format!(
                    "image of order {r} at generator {} of order {}",
                    g.residue, g.order
                )));
            }
            reduced.push((e, r));
        }
        let order = reduced.iter().fold(1, |acc, &(_, r)| lcm(acc, r));
        let steps: Vec<u64> = reduced.iter().map(|&(e, r)| e * (order / r)).collect();
        let mut values = vec![None; modulus as usize];
        values[(1 % modulus) as usize] = Some(0);
        // Walk all exponent tuples, generator by generator.
        let mut filled: Vec<(u64, u64)> = vec![(1 % modulus, 0)];
        for (g, &step) in gens.iter().zip(&steps) {
            let mut next = Vec::with_capacity(filled.len() * g.order as usize);
            for &(a, e) in &filled {
                let (mut x, mut ex) = (a, e);
                for _ in 0..g.order {
                    next.push((x, ex));
                    x = mul_mod(x, g.residue, modulus);
                    ex = (ex + step) % order;
                }
            }
            filled = next;
        }
        for (a, e) in filled {
            values[a as usize] = Some(e);
        }
        Ok(DirichletCharacter { modulus, order, values })
    }

    /// Validates a raw table (JSON form, index a-1 for a = 1..q).
    pub fn from_table(modulus: u64, order: u64, table: &[Option<u64>]) -> Result<Self> {
        let bad = |s: String| Err(Error::InvalidCharacter(s));
        if modulus == 0 || order == 0 {
            return bad("modulus and order must be positive".into());
        }
        if table.len() as u64 != modulus {
            return bad(format!("expected {modulus} values, got {}", table.len()));
        }
        let mut values = vec![None; modulus as usize];
        for (i, v) in table.iter().enumerate() {
            let a = (i as u64 + 1) % modulus;
            let unit = gcd(a, modulus) == 1;
            match (unit, v) {
                (true, Some(e)) if *e < order => values[a as usize] = Some(*e),
                (false, None) => {}
                _ => return bad(format!("bad entry at residue {}", i + 1)),
            }
        }
        let chi = DirichletCharacter { modulus, order, values };
        if chi.values[(1 % modulus) as usize] != Some(0) {
            return bad("value at 1 must be 0".into());
        }
        for a in 0..modulus {
            let Some(ea) = chi.values[a as usize] else { continue };
            for b in a..modulus {
                let Some(eb) = chi.values[b as usize] else { continue };
                if chi.values[mul_mod(a, b, modulus) as usize] != Some((ea + eb) % order) {
                    return bad(format!("not multiplicative at {a}*{b}"));
                }
            }
        }
        if chi.exact_order() != order {
            return bad(format!("declared order {order} is not the exact order"));
        }
        Ok(chi)
    }

    fn exact_order(&self) -> u64 {
        self.values
            .iter()
            .flatten()
            .fold(1, |acc, &e| lcm(acc, self.order / gcd(e, self.order)))
    }

    /// Rescales exponents so that `order` is the exact order.
    fn normalized(mut self) -> Self {
        let exact = self.exact_order();
        if exact != self.order {
            let f = self.order / exact;
            for v in self.values.iter_mut().flatten() {
                *v /= f;
            }
            self.order = exact;
        }
        self
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Exponent of zeta_order at `a`, `None` when `gcd(a, q) > 1`.
    pub fn exponent(&self, a: i64) -> Option<u64> {
        self.values[residue(a, self.modulus) as usize]
    }

    /// Same as [`exponent`](Self::exponent) for unsigned arguments.
    pub fn exponent_u(&self, a: u64) -> Option<u64> {
        self.values[(a % self.modulus) as usize]
    }

    /// `chi(a)` as an element of Q(zeta_order).
    pub fn eval(&self, a: i64) -> CyclotomicNumber {
        match self.exponent(a) {
            Some(e) => CyclotomicNumber::root_of_unity(self.order, e),
            None => CyclotomicNumber::zero(self.order),
        }
    }

    /// `chi(-1)` as +1 or -1.
    pub fn parity(&self) -> i32 {
        match self.exponent(-1) {
            Some(0) => 1,
            Some(_) => -1,
            None => unreachable!("-1 is always a unit"),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn mul(&self, other: &Self) -> Self {
        let modulus = lcm(self.modulus, other.modulus);
        let order = lcm(self.order, other.order);
        let (sa, sb) = (order / self.order, order / other.order);
        let values = (0..modulus)
            .map(|a| match (self.exponent_u(a), other.exponent_u(a)) {
                (Some(x), Some(y)) if gcd(a, modulus) == 1 => Some((x * sa + y * sb) % order),
                _ => None,
            })
            .collect();
        DirichletCharacter { modulus, order, values }.normalized()
    }

    pub fn conj(&self) -> Self {
        let n = self.order;
        DirichletCharacter {
            modulus: self.modulus,
            order: n,
            values: self
                .values
                .iter()
                .map(|v| v.map(|e| (n - e) % n))
                .collect(),
        }
    }

    /// The character of modulus `target` (a multiple of the modulus) induced by self.
    pub fn extend_to(&self, target: u64) -> Result<Self> {
        if target == 0 || target % self.modulus != 0 {
            return Err(Error::InvalidCharacter(format!(
                "{target} is not a multiple of {}",
                self.modulus
            )));
        }
        Ok(self.mul(&Self::principal(target)))
    }

    /// Smallest f | q such that chi is trivial on units congruent to 1 mod f.
    pub fn conductor(&self) -> u64 {
        let q = self.modulus;
        divisors(q)
            .into_iter()
            .find(|&f| {
                (0..q / f).all(|t| {
                    let a = (1 + f * t) % q;
                    self.values[a as usize].is_none_or(|e| e == 0)
                })
            })
            .unwrap_or(q)
    }

    /// `(conductor, primitive character inducing self)`.
    pub fn primitivize(&self) -> (u64, Self) {
        let f = self.conductor();
        if f == self.modulus {
            return (f, self.clone());
        }
        let q = self.modulus;
        let values = (0..f)
            .map(|b| {
                if gcd(b, f) != 1 {
                    return None;
                }
                (0..q / f).find_map(|t| self.values[((b + f * t) % q) as usize])
            })
            .collect();
        let prim = DirichletCharacter { modulus: f, order: self.order, values }.normalized();
        (f, prim)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// Gauss sum `sum_{a=1}^{f} chi(a) zeta_f^a` in Q(zeta_lcm(order, f)).
    pub fn gauss_sum(&self) -> Result<CyclotomicNumber> {
        let f = self.conductor();
        if f != self.modulus {
            return Err(Error::NotPrimitive { modulus: self.modulus, conductor: f });
        }
        let big = lcm(self.order, f);
        let (sn, sf) = (big / self.order, big / f);
        let mut folded = vec![BigInt::from(0); big as usize];
        for a in 1..=f {
            if let Some(e) = self.exponent_u(a) {
                folded[((e * sn + a * sf) % big) as usize] += 1;
            }
        }
        Ok(CyclotomicNumber::from_integer_exponents(big, folded))
    }

    /// Raw table indexed by residue mod q.
    pub fn values(&self) -> &[Option<u64>] {
        &self.values
    }
}

/// Every character of modulus q, in lexicographic order of generator exponents.
pub fn all_characters(q: u64) -> Vec<DirichletCharacter> {
    let gens = canonical_generators(q);
    let mut tuples: Vec<Vec<(u64, u64)>> = vec![Vec::new()];
    for g in &gens {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..g.order).map(move |e| {
                    let mut t = t.clone();
                    t.push((e, g.order));
                    t
                })
            })
            .collect();
    }
    tuples
        .into_iter()
        .map(|t| DirichletCharacter::from_generator_exponents(q, &t).expect("canonical images"))
        .collect()
}

/// Every primitive character of conductor f.
pub fn primitive_characters(f: u64) -> Vec<DirichletCharacter> {
    all_characters(f)
        .into_iter()
        .filter(DirichletCharacter::is_primitive)
        .collect()
}

#[derive(Serialize, Deserialize)]
struct CharacterJson {
    modulus: u64,
    order: u64,
    values: Vec<Option<u64>>,
}

impl Serialize for DirichletCharacter {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let q = self.modulus;
        CharacterJson {
            modulus: q,
            order: self.order,
            values: (1..=q).map(|a| self.values[(a % q) as usize]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DirichletCharacter {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = CharacterJson::deserialize(deserializer)?;
        DirichletCharacter::from_table(raw.modulus, raw.order, &raw.values)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        assert_eq!(canonical_generators(1), vec![]);
        assert_eq!(canonical_generators(4), vec![Generator { residue: 3, order: 2 }]);
        let g8 = canonical_generators(8);
        assert_eq!(g8[0], Generator { residue: 7, order: 2 });
        assert_eq!(g8[1], Generator { residue: 5, order: 2 });
        let g12 = canonical_generators(12);
        assert_eq!(g12, vec![Generator { residue: 7, order: 2 }, Generator { residue: 5, order: 2 }]);
    }

    #[test]
    fn construct_examples() {
        let t = DirichletCharacter::construct(1, &[]).unwrap();
        assert!(t.is_trivial());
        let q4 = DirichletCharacter::construct(4, &[(3, 1, 2)]).unwrap();
        assert_eq!(q4.exponent(1), Some(0));
        assert_eq!(q4.exponent(3), Some(1));
        let c5 = DirichletCharacter::construct(5, &[(2, 1, 4)]).unwrap();
        assert_eq!(c5.order(), 4);
        assert_eq!(c5.exponent(4), Some(2));
        assert_eq!(c5.exponent(3), Some(3));
        assert!(matches!(
            DirichletCharacter::construct(5, &[(2, 1, 3)]),
            Err(Error::InvalidCharacter(_))
        ));
        assert!(matches!(
            DirichletCharacter::construct(5, &[(3, 1, 4)]),
            Err(Error::InvalidGenerator { .. })
        ));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(DirichletCharacter::trivial().eval(0), CyclotomicNumber::one(1));
        let q4 = DirichletCharacter::quadratic(4).unwrap();
        assert_eq!(q4.eval(-1), CyclotomicNumber::from_integer(2, -1));
        assert!(q4.eval(6).is_zero());
    }

    #[test]
    fn mul_examples() {
        let q3 = DirichletCharacter::quadratic(3).unwrap();
        let q4 = DirichletCharacter::quadratic(4).unwrap();
        assert_eq!(q3.mul(&DirichletCharacter::trivial()), q3);
        let sq = q3.mul(&q3);
        assert!(sq.is_trivial());
        assert_eq!(sq.modulus(), 3);
        let p = q3.mul(&q4);
        assert_eq!(p.modulus(), 12);
        assert_eq!(p.exponent(11), Some(0));
    }

    #[test]
    fn primitivize_examples() {
        let (f, p) = DirichletCharacter::principal(6).primitivize();
        assert_eq!(f, 1);
        assert_eq!(p, DirichletCharacter::trivial());
        let q4 = DirichletCharacter::quadratic(4).unwrap();
        let (f, p) = q4.extend_to(8).unwrap().primitivize();
        assert_eq!((f, p), (4, q4));
        let c5 = DirichletCharacter::construct(5, &[(2, 1, 4)]).unwrap();
        assert_eq!(c5.primitivize(), (5, c5.clone()));
    }

    #[test]
    fn gauss_examples() {
        assert_eq!(DirichletCharacter::trivial().gauss_sum().unwrap(), CyclotomicNumber::one(1));
        let q4 = DirichletCharacter::quadratic(4).unwrap();
        assert_eq!(
            q4.gauss_sum().unwrap(),
            CyclotomicNumber::root_of_unity(4, 1).scale(&crate::Rational::from_integer(2.into()))
        );
        let q3 = DirichletCharacter::quadratic(3).unwrap();
        let expect = CyclotomicNumber::root_of_unity(3, 1).sub(&CyclotomicNumber::root_of_unity(3, 2));
        assert!(q3.gauss_sum().unwrap().equals_value(&expect));
        assert!(matches!(
            DirichletCharacter::principal(3).gauss_sum(),
            Err(Error::NotPrimitive { .. })
        ));
    }

    #[test]
    fn counts() {
        assert_eq!(all_characters(12).len(), 4);
        assert_eq!(primitive_characters(12).len(), 1);
        assert_eq!(primitive_characters(8).len(), 2);
        assert_eq!(primitive_characters(4).len(), 1);
        assert_eq!(primitive_characters(2).len(), 0);
        assert_eq!(primitive_characters(1).len(), 1);
    }

    #[test]
    fn json_round_trip() {
        let c5 = DirichletCharacter::construct(5, &[(2, 1, 4)]).unwrap();
        let s = serde_json::to_string(&c5).unwrap();
        assert_eq!(s, r#"{"modulus":5,"order":4,"values":[0,1,3,2,null]}"#);
        let back: DirichletCharacter = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c5);
        assert!(serde_json::from_str::<DirichletCharacter>(
            r#"{"modulus":5,"order":4,"values":[0,1,1,2,null]}"#
        )
        .is_err());
    }
}
