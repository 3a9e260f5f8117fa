//! Exact arithmetic in cyclotomic fields.
//!
//! A [`RootOfUnity`] is e^{2 pi i j/m} stored as the reduced fraction j/m.
//! A [`CyclotomicNumber`] is a finite rational combination of roots of unity.
//! Equality and rationality tests reduce the combination modulo the
//! cyclotomic polynomial of the common order, so they are exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// e^{2 pi i * exponent / order}, with gcd(exponent, order) = 1 after
/// normalization and 0 <= exponent < order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RootOfUnity {
    order: u64,
    exponent: u64,
}

impl RootOfUnity {
    pub fn new(order: u64, exponent: u64) -> Self {
        assert!(order > 0, "root of unity needs positive order");
        let e = exponent % order;
        let g = e.gcd(&order);
        if e == 0 {
            Self { order: 1, exponent: 0 }
        } else {
            Self { order: order / g, exponent: e / g }
        }
    }

    pub fn one() -> Self {
        Self { order: 1, exponent: 0 }
    }

    pub fn minus_one() -> Self {
        Self { order: 2, exponent: 1 }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    /// The rational value, when the root is +-1.
    pub fn as_rational(&self) -> Option<i32> {
        match self.order {
            1 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn mul(self, other: Self) -> Self {
        let m = self.order.lcm(&other.order);
        let e = (self.exponent * (m / self.order) + other.exponent * (m / other.order)) % m;
        Self::new(m, e)
    }

    pub fn pow(self, t: i64) -> Self {
        let e = (t.rem_euclid(self.order as i64)) as u64 * self.exponent;
        Self::new(self.order, e)
    }

    pub fn conj(self) -> Self {
        Self::new(self.order, self.order - self.exponent)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order {
            1 => write!(f, "1"),
            2 => write!(f, "-1"),
            _ => write!(f, "z({},{})", self.order, self.exponent),
        }
    }
}

/// A finite sum of rational multiples of roots of unity.
///
/// The map never stores zero weights. The representation is not canonical
/// (distinct term maps can denote the same algebraic number); `is_zero`,
/// `eq` and `as_rational` are decided by reduction modulo the cyclotomic
/// polynomial of the lcm of the orders involved.
#[derive(Clone, Debug, Default)]
pub struct CyclotomicNumber {
    terms: BTreeMap<RootOfUnity, BigRational>,
}

impl CyclotomicNumber {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(RootOfUnity::one(), r);
        }
        Self { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_root(z: RootOfUnity) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(z, BigRational::one());
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RootOfUnity, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, z: RootOfUnity, w: BigRational) {
        if w.is_zero() {
            return;
        }
        let entry = self.terms.entry(z).or_insert_with(BigRational::zero);
        *entry += w;
        if entry.is_zero() {
            self.terms.remove(&z);
        }
    }

    /// lcm of the orders of all roots appearing in the term map.
    pub fn common_order(&self) -> u64 {
        self.terms.keys().fold(1u64, |acc, z| acc.lcm(&z.order()))
    }

    /// Coefficient vector in the power basis of Q(zeta_n), n = common order:
    /// the remainder of sum w_j x^{e_j} modulo Phi_n(x).
    fn reduced_poly(&self) -> (u64, Vec<BigRational>) {
        let n = self.common_order();
        let mut coeffs = vec![BigRational::zero(); n as usize];
        for (z, w) in &self.terms {
            let e = (z.exponent() * (n / z.order())) as usize;
            coeffs[e] += w;
        }
        let phi = cyclotomic_polynomial(n);
        (n, poly_rem(coeffs, &phi))
    }

    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        let (_, rem) = self.reduced_poly();
        rem.iter().all(|c| c.is_zero())
    }

    /// The exact rational value, if the number lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        let (_, rem) = self.reduced_poly();
        if rem.iter().skip(1).all(|c| c.is_zero()) {
            Some(rem.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(z, w)| (*z, w * r)).collect();
        Self { terms }
    }

    /// Complex conjugation, zeta -> zeta^{-1}.
    pub fn conj(&self) -> Self {
        let terms = self.terms.iter().map(|(z, w)| (z.conj(), w.clone())).collect();
        Self { terms }
    }

    /// The Galois action zeta -> zeta^t; `t` must be coprime to the common
    /// order for this to be a field automorphism.
    pub fn galois(&self, t: i64) -> Self {
        let mut out = Self::zero();
        for (z, w) in &self.terms {
            out.add_term(z.pow(t), w.clone());
        }
        out
    }

    /// Non-negative integer power by repeated multiplication.
    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = out * self.clone();
        }
        out
    }

    /// Multiplicative inverse in Q(zeta_n), via the extended Euclidean
    /// algorithm against Phi_n(x). Panics on zero.
    pub fn inverse(&self) -> Self {
        let (n, rem) = self.reduced_poly();
        assert!(rem.iter().any(|c| !c.is_zero()), "inverse of zero cyclotomic number");
        let phi = cyclotomic_polynomial(n);
        let inv_poly = poly_modular_inverse(&rem, &phi);
        let mut out = Self::zero();
        for (e, c) in inv_poly.into_iter().enumerate() {
            out.add_term(RootOfUnity::new(n, e as u64), c);
        }
        out
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero()
    }
}
impl Eq for CyclotomicNumber {}

impl Add for CyclotomicNumber {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (z, w) in rhs.terms {
            out.add_term(z, w);
        }
        out
    }
}

impl Sub for CyclotomicNumber {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for CyclotomicNumber {
    type Output = Self;
    fn neg(self) -> Self {
        let terms = self.terms.into_iter().map(|(z, w)| (z, -w)).collect();
        Self { terms }
    }
}

impl Mul for CyclotomicNumber {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (z1, w1) in &self.terms {
            for (z2, w2) in &rhs.terms {
                out.add_term(z1.mul(*z2), w1 * w2);
            }
        }
        out
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (z, w) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if z.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{w}*{z}")?;
            }
        }
        Ok(())
    }
}

/// Phi_n(x) as an integer-coefficient polynomial, computed by dividing
/// x^n - 1 by the cyclotomic polynomials of the proper divisors of n.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = int_poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials (remainder known to be zero).
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd].clone();
        if !c.is_zero() {
            for (j, dc) in den.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// Remainder of a rational polynomial modulo a monic integer polynomial.
fn poly_rem(mut coeffs: Vec<BigRational>, modulus: &[BigInt]) -> Vec<BigRational> {
    let d = modulus.len() - 1;
    while coeffs.len() > d {
        let lead = coeffs.pop().unwrap();
        if !lead.is_zero() {
            let k = coeffs.len() - d;
            for (j, mc) in modulus.iter().take(d).enumerate() {
                let sub = &lead * BigRational::from_integer(mc.clone());
                coeffs[k + j] -= sub;
            }
        }
    }
    coeffs.resize(d, BigRational::zero());
    coeffs
}

/// Inverse of `a` modulo the monic squarefree polynomial `m` over Q, by the
/// extended Euclidean algorithm.
fn poly_modular_inverse(a: &[BigRational], m: &[BigInt]) -> Vec<BigRational> {
    let m_rat: Vec<BigRational> =
        m.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    // invariants: old_r = old_s * a (mod m), r = s * a (mod m)
    let mut old_r = trim(m_rat);
    let mut r = trim(a.to_vec());
    let mut old_s: Vec<BigRational> = vec![];
    let mut s: Vec<BigRational> = vec![BigRational::one()];
    while !r.is_empty() {
        let (q, rem) = poly_divmod(&old_r, &r);
        let new_s = poly_sub(&old_s, &poly_mul(&q, &s));
        old_r = r;
        r = rem;
        old_s = s;
        s = new_s;
    }
    // old_r is the gcd, a nonzero constant since Phi_n is irreducible and a != 0 mod Phi_n
    assert_eq!(old_r.len(), 1, "input shares a factor with the modulus");
    let g = old_r[0].clone();
    let mut inv: Vec<BigRational> = old_s.into_iter().map(|c| c / &g).collect();
    // reduce the inverse modulo m
    inv = poly_rem(
        {
            let d = m.len() - 1;
            if inv.len() < d {
                inv.resize(d, BigRational::zero());
            }
            inv
        },
        m,
    );
    inv
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let dd = den.len() - 1;
    if num.len() <= dd {
        return (vec![], trim(num.to_vec()));
    }
    let mut rem = num.to_vec();
    let nd = rem.len() - 1;
    let lead = den[dd].clone();
    let mut quot = vec![BigRational::zero(); nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = &rem[i + dd] / &lead;
        if !c.is_zero() {
            for (j, dc) in den.iter().enumerate() {
                let sub = &c * dc;
                rem[i + j] -= sub;
            }
        }
        quot[i] = c;
    }
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}
