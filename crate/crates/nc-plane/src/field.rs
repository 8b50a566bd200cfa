//! Exact scalar arithmetic over the rationals, prime fields and small
//! Galois extensions.
//!
//! Arithmetic goes through a context object implementing [`Field`] so that the
//! modulus (or extension data) lives in one place and elements stay compact:
//! `u64` residues for prime fields, coefficient vectors for extensions,
//! arbitrary-precision fractions for the rationals.

use crate::error::{Error, Result};
use num::{BigInt, BigRational, One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A field given as a context object; elements are plain values.
pub trait Field: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b).expect("division by zero"))
    }
}

/// The field of rational numbers with arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| -> u64 { ((a as u128 * b as u128) % n as u128) as u64 };
    let pow = |mut b: u64, mut e: u64| -> u64 {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The prime field F_p, elements stored as canonical residues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// `p` must be prime and small enough that products fit in `u128`.
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::DegenerateParameters(format!("{p} is not prime")));
        }
        if p >= 1 << 62 {
            return Err(Error::DegenerateParameters(format!("modulus {p} too large")));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat.
        let mut e = self.p - 2;
        let mut b = *a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        Some(acc)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_i64(&self, n: i64) -> u64 {
        let p = self.p as i128;
        let r = (n as i128).rem_euclid(p);
        r as u64
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// F_{p^e} as F_p[t] modulo a monic irreducible; elements are coefficient
/// vectors of length `e` (constant term first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisField {
    base: PrimeField,
    e: usize,
    /// Monic modulus of degree `e`, length `e + 1`, constant term first.
    modulus: Vec<u64>,
}

impl GaloisField {
    /// Builds F_{p^e} with the lexicographically first monic irreducible
    /// modulus, so elements are reproducible across runs.
    pub fn new(p: u64, e: usize) -> Result<Self> {
        let base = PrimeField::new(p)?;
        if e == 0 || e > 8 {
            return Err(Error::BudgetExceeded(format!(
                "extension degree {e} outside supported range 1..=8"
            )));
        }
        if (p as u128).pow(e as u32) > 1 << 40 {
            return Err(Error::BudgetExceeded(format!(
                "field F_{{{p}^{e}}} too large to enumerate"
            )));
        }
        let modulus = first_irreducible(&base, e);
        Ok(GaloisField { base, e, modulus })
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }
    pub fn degree(&self) -> usize {
        self.e
    }

    /// Number of field elements, as u64 (bounded at construction).
    pub fn order(&self) -> u64 {
        (self.p() as u128).pow(self.e as u32) as u64
    }

    /// Canonical embedding of the prime field.
    pub fn lift(&self, a: u64) -> Vec<u64> {
        let mut v = vec![0; self.e];
        v[0] = a % self.p();
        v
    }

    /// The element with index `i` under base-p digit expansion; enumerating
    /// `0..order()` walks the whole field deterministically.
    pub fn element(&self, mut i: u64) -> Vec<u64> {
        let p = self.p();
        let mut v = vec![0; self.e];
        for c in v.iter_mut() {
            *c = i % p;
            i /= p;
        }
        v
    }

    fn reduce(&self, mut poly: Vec<u64>) -> Vec<u64> {
        let f = &self.base;
        // Reduce by the monic modulus from the top.
        while poly.len() > self.e {
            let d = poly.len() - 1;
            let lead = poly[d];
            if lead != 0 {
                let shift = d - self.e;
                for k in 0..=self.e {
                    let t = f.mul(&lead, &self.modulus[k]);
                    poly[shift + k] = f.sub(&poly[shift + k], &t);
                }
            }
            poly.pop();
        }
        poly.resize(self.e, 0);
        poly
    }
}

impl Field for GaloisField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.e]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.e];
        v[0] = self.base.one();
        v
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| self.base.add(x, y))
            .collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| self.base.sub(x, y))
            .collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let f = &self.base;
        let mut prod = vec![0u64; 2 * self.e - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = f.mul(x, y);
                prod[i + j] = f.add(&prod[i + j], &t);
            }
        }
        self.reduce(prod)
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        // Extended Euclid in F_p[t] against the modulus.
        let f = self.base.clone();
        let mut r0 = self.modulus.clone();
        let mut r1 = a.clone();
        trim(&mut r1);
        let mut s0: Vec<u64> = vec![];
        let mut s1 = vec![1u64];
        while !r1.is_empty() {
            let (q, rem) = poly_divmod(&f, &r0, &r1);
            let s2 = poly_sub(&f, &s0, &poly_mul(&f, &q, &s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        // r0 is a nonzero constant gcd.
        let c = f.inv(&r0[0])?;
        let mut out: Vec<u64> = s0.iter().map(|x| f.mul(x, &c)).collect();
        out.resize(self.e.max(out.len()), 0);
        Some(self.reduce(out))
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|x| *x == 0)
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        self.lift(self.base.from_i64(n))
    }
    fn fmt_elem(&self, a: &Vec<u64>) -> String {
        let coeffs: Vec<String> = a.iter().map(|x| x.to_string()).collect();
        format!("[{}]", coeffs.join(","))
    }
}

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn poly_sub(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = f.sub(&x, &y);
    }
    trim(&mut out);
    out
}

fn poly_mul(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let t = f.mul(x, y);
            out[i + j] = f.add(&out[i + j], &t);
        }
    }
    trim(&mut out);
    out
}

fn poly_divmod(f: &PrimeField, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let mut bb = b.to_vec();
    trim(&mut bb);
    assert!(!bb.is_empty(), "division by zero polynomial");
    let db = bb.len() - 1;
    let lead_inv = f.inv(bb.last().unwrap()).unwrap();
    if rem.len() < bb.len() {
        return (vec![], rem);
    }
    let mut q = vec![0u64; rem.len() - db];
    while rem.len() >= bb.len() {
        let d = rem.len() - 1;
        let c = f.mul(rem.last().unwrap(), &lead_inv);
        q[d - db] = c;
        for k in 0..=db {
            let t = f.mul(&c, &bb[k]);
            rem[d - db + k] = f.sub(&rem[d - db + k], &t);
        }
        trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    trim(&mut q);
    (q, rem)
}

fn poly_mod_pow_frobenius(f: &PrimeField, modulus: &[u64], iterations: u32) -> Vec<u64> {
    // t^(p^iterations) mod modulus, by repeated exponentiation by p.
    let mut cur = vec![0u64, 1]; // t
    for _ in 0..iterations {
        // cur <- cur^p mod modulus
        let mut acc = vec![1u64];
        let mut base = cur.clone();
        let mut e = f.p();
        while e > 0 {
            if e & 1 == 1 {
                let prod = poly_mul(f, &acc, &base);
                acc = poly_divmod(f, &prod, modulus).1;
            }
            let sq = poly_mul(f, &base, &base);
            base = poly_divmod(f, &sq, modulus).1;
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

fn poly_gcd(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    while !r1.is_empty() {
        let rem = poly_divmod(f, &r0, &r1).1;
        r0 = r1;
        r1 = rem;
    }
    r0
}

fn is_irreducible(f: &PrimeField, modulus: &[u64]) -> bool {
    // Rabin's test: t^(p^e) == t mod f, and gcd(t^(p^(e/q)) - t, f) = 1 for
    // every prime q dividing e.
    let e = (modulus.len() - 1) as u32;
    let t = vec![0u64, 1];
    let full = poly_mod_pow_frobenius(f, modulus, e);
    if poly_sub(f, &full, &t) != Vec::<u64>::new() {
        return false;
    }
    let mut rest = e;
    let mut primes = vec![];
    let mut q = 2;
    while q * q <= rest {
        if rest % q == 0 {
            primes.push(q);
            while rest % q == 0 {
                rest /= q;
            }
        }
        q += 1;
    }
    if rest > 1 {
        primes.push(rest);
    }
    for q in primes {
        let part = poly_mod_pow_frobenius(f, modulus, e / q);
        let g = poly_gcd(f, &poly_sub(f, &part, &t), modulus);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn first_irreducible(f: &PrimeField, e: usize) -> Vec<u64> {
    if e == 1 {
        return vec![0, 1]; // t itself; F_p^1 = F_p
    }
    // Scan lower coefficients in base-p counter order.
    let p = f.p();
    let total = (p as u128).pow(e as u32);
    let mut idx: u128 = 0;
    loop {
        assert!(idx < total, "no irreducible polynomial found");
        let mut modulus = vec![0u64; e + 1];
        modulus[e] = 1;
        let mut i = idx;
        for c in modulus.iter_mut().take(e) {
            *c = (i % p as u128) as u64;
            i /= p as u128;
        }
        if is_irreducible(f, &modulus) {
            return modulus;
        }
        idx += 1;
    }
}

/// A finite field whose elements can be walked in a fixed order.
pub trait Enumerable: Field {
    fn order(&self) -> u64;
    fn elem_at(&self, i: u64) -> Self::Elem;
}

impl Enumerable for PrimeField {
    fn order(&self) -> u64 {
        self.p()
    }
    fn elem_at(&self, i: u64) -> u64 {
        i % self.p()
    }
}

impl Enumerable for GaloisField {
    fn order(&self) -> u64 {
        GaloisField::order(self)
    }
    fn elem_at(&self, i: u64) -> Vec<u64> {
        self.element(i % GaloisField::order(self))
    }
}

/// Serializable field description: `"rationals"` or `{"p": 101}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Rationals(String),
    Prime { p: u64 },
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals("rationals".to_string())
    }
    pub fn prime(p: u64) -> Self {
        FieldSpec::Prime { p }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FieldSpec::Rationals(tag) => {
                if tag != "rationals" {
                    return Err(Error::Usage(format!("unknown field tag {tag:?}")));
                }
                Ok(())
            }
            FieldSpec::Prime { p } => PrimeField::new(*p).map(|_| ()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals(_) => write!(f, "Q"),
            FieldSpec::Prime { p } => write!(f, "F_{p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(f.add(&100, &5), 4);
        assert_eq!(f.mul(&51, &2), 1);
        assert_eq!(f.inv(&2), Some(51));
        assert_eq!(f.from_i64(-1), 100);
        assert!(PrimeField::new(100).is_err());
    }

    #[test]
    fn rationals_basics() {
        let f = Rationals;
        let a = f.div(&f.from_i64(1), &f.from_i64(3));
        let b = f.mul(&a, &f.from_i64(3));
        assert_eq!(b, f.one());
        assert_eq!(f.fmt_elem(&a), "1/3");
    }

    #[test]
    fn galois_field_inverse_and_order() {
        for (p, e) in [(2u64, 2usize), (2, 3), (3, 2), (101, 2)] {
            let f = GaloisField::new(p, e).unwrap();
            for i in 1..f.order().min(200) {
                let a = f.element(i);
                let inv = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &inv), f.one(), "p={p} e={e} i={i}");
            }
        }
    }

    #[test]
    fn galois_field_frobenius_fixed_field() {
        // x -> x^p fixes exactly the prime subfield.
        let f = GaloisField::new(3, 2).unwrap();
        let mut fixed = 0;
        for i in 0..f.order() {
            let a = f.element(i);
            let mut ap = f.one();
            for _ in 0..3 {
                ap = f.mul(&ap, &a);
            }
            if ap == a {
                fixed += 1;
            }
        }
        assert_eq!(fixed, 3);
    }

    #[test]
    fn field_spec_round_trip() {
        let s = FieldSpec::prime(101);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"p":101}"#);
        let back: FieldSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        let q = FieldSpec::rationals();
        let j = serde_json::to_string(&q).unwrap();
        assert_eq!(j, r#""rationals""#);
        let back: FieldSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, q);
    }
}
