//! Eisenstein newforms and their q-expansions.
//!
//! The coefficient function is the signed divisor sum
//! sigma(n) = sum_{d | n} chi1(n/d) chi2(d) d^{k-1}, with chi1, chi2
//! primitive Dirichlet characters. A validated triple (chi1, chi2, k) is a
//! newform of level N1*N2 and nebentypus chi1*chi2; its Hecke eigenvalue at
//! a prime p not dividing the level is sigma(p) = chi1(p) + chi2(p) p^{k-1}.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;
use thiserror::Error;

use crate::bernoulli::l_value_at_negative_integers;
use crate::chars::{divisors, DirichletCharacter};
use crate::cyclo::CyclotomicNumber;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NewformError {
    #[error("chi1 is not primitive (conductor {conductor}, modulus {modulus})")]
    Chi1NotPrimitive { conductor: u64, modulus: u64 },
    #[error("chi2 is not primitive (conductor {conductor}, modulus {modulus})")]
    Chi2NotPrimitive { conductor: u64, modulus: u64 },
    #[error("parity mismatch: chi1*chi2(-1) = {found} but (-1)^k = {required}")]
    ParityMismatch { found: i32, required: i32 },
    #[error("excluded level-1 weight-2 case")]
    ExcludedLevelOneWeightTwo,
    #[error("weight must be at least 2, got {0}")]
    WeightTooSmall(u32),
    #[error("prime {0} divides the level; the ramified Hecke operator is out of scope")]
    RamifiedPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("n = {n} shares a factor with the level {level}")]
    NotCoprimeToLevel { n: u64, level: u64 },
    #[error("characters must be quadratic for sign computations")]
    NotQuadratic,
    #[error("twisting character must be quadratic")]
    TwistNotQuadratic,
    #[error("twist conductor {conductor} is not coprime to the level {level}")]
    TwistConductorNotCoprime { conductor: u64, level: u64 },
}

/// The signed divisor sum sigma^{k-1}_{chi1,chi2}(n), exact.
pub fn sigma(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    k: u32,
    n: u64,
) -> CyclotomicNumber {
    assert!(k >= 2 && n >= 1);
    if chi1.is_quadratic() && chi2.is_quadratic() {
        return CyclotomicNumber::from_rational(BigRational::from_integer(sigma_int(
            chi1, chi2, k, n,
        )));
    }
    let mut total = CyclotomicNumber::zero();
    for d in divisors(n) {
        let term = chi1.value_cyclotomic((n / d) as i64) * chi2.value_cyclotomic(d as i64);
        if !term.is_zero() {
            let pw = BigRational::from_integer(BigInt::from(d).pow(k - 1));
            total = total + term.scale(&pw);
        }
    }
    total
}

/// sigma for quadratic character pairs, as an exact integer.
pub fn sigma_int(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    k: u32,
    n: u64,
) -> BigInt {
    assert!(chi1.is_quadratic() && chi2.is_quadratic());
    let mut total = BigInt::zero();
    for d in divisors(n) {
        let c = chi1.value_i32((n / d) as i64) * chi2.value_i32(d as i64);
        if c != 0 {
            let pw = BigInt::from(d).pow(k - 1);
            if c > 0 {
                total += pw;
            } else {
                total -= pw;
            }
        }
    }
    total
}

/// sigma for quadratic pairs in machine arithmetic. Requires
/// n^{k-1} * d(n) to fit in i128; fine for the desk-scale scans that use it.
pub fn sigma_i128(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    k: u32,
    n: u64,
) -> i128 {
    let mut total: i128 = 0;
    for d in divisors(n) {
        let c = chi1.value_i32((n / d) as i64) * chi2.value_i32(d as i64);
        if c != 0 {
            total += c as i128 * (d as i128).pow(k - 1);
        }
    }
    total
}

/// The sign of sigma at n coprime to the level: equals chi2(n) (and sigma
/// never vanishes there).
pub fn sign_at(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    k: u32,
    n: u64,
) -> Result<i32, NewformError> {
    if !chi1.is_quadratic() || !chi2.is_quadratic() {
        return Err(NewformError::NotQuadratic);
    }
    let level = chi1.modulus() * chi2.modulus();
    let _ = k;
    if n.gcd(&level) != 1 {
        return Err(NewformError::NotCoprimeToLevel { n, level });
    }
    Ok(chi2.value_i32(n as i64))
}

/// delta(chi1)/2 * L(1-k, chi2): zero unless chi1 is principal.
pub fn constant_term(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    k: u32,
) -> CyclotomicNumber {
    if !chi1.is_principal() {
        return CyclotomicNumber::zero();
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    l_value_at_negative_integers(k, chi2).scale(&half)
}

/// A validated Eisenstein newform E(chi1, chi2, k).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EisensteinNewform {
    chi1: DirichletCharacter,
    chi2: DirichletCharacter,
    weight: u32,
    nebentypus: DirichletCharacter,
}

impl EisensteinNewform {
    pub fn new(
        chi1: DirichletCharacter,
        chi2: DirichletCharacter,
        k: u32,
    ) -> Result<Self, NewformError> {
        if k < 2 {
            return Err(NewformError::WeightTooSmall(k));
        }
        if !chi1.is_primitive() {
            return Err(NewformError::Chi1NotPrimitive {
                conductor: chi1.conductor(),
                modulus: chi1.modulus(),
            });
        }
        if !chi2.is_primitive() {
            return Err(NewformError::Chi2NotPrimitive {
                conductor: chi2.conductor(),
                modulus: chi2.modulus(),
            });
        }
        if chi1.modulus() == 1 && chi2.modulus() == 1 && k == 2 {
            return Err(NewformError::ExcludedLevelOneWeightTwo);
        }
        let required = if k % 2 == 0 { 1 } else { -1 };
        let found = chi1.parity() * chi2.parity();
        if found != required {
            return Err(NewformError::ParityMismatch { found, required });
        }
        let nebentypus = chi1.multiply(&chi2);
        Ok(Self { chi1, chi2, weight: k, nebentypus })
    }

    /// Construct from a pair of fundamental discriminants, "D1:D2:k" style.
    pub fn from_discriminants(d1: i64, d2: i64, k: u32) -> Result<Self, String> {
        let chi1 = DirichletCharacter::from_discriminant(d1).map_err(|e| e.to_string())?;
        let chi2 = DirichletCharacter::from_discriminant(d2).map_err(|e| e.to_string())?;
        Self::new(chi1, chi2, k).map_err(|e| e.to_string())
    }

    pub fn chi1(&self) -> &DirichletCharacter {
        &self.chi1
    }

    pub fn chi2(&self) -> &DirichletCharacter {
        &self.chi2
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn level(&self) -> u64 {
        self.chi1.modulus() * self.chi2.modulus()
    }

    pub fn nebentypus(&self) -> &DirichletCharacter {
        &self.nebentypus
    }

    pub fn is_quadratic(&self) -> bool {
        self.chi1.is_quadratic() && self.chi2.is_quadratic()
    }

    pub fn coefficient(&self, n: u64) -> CyclotomicNumber {
        sigma(&self.chi1, &self.chi2, self.weight, n)
    }

    pub fn constant_term(&self) -> CyclotomicNumber {
        constant_term(&self.chi1, &self.chi2, self.weight)
    }

    /// The eigenvalue with respect to T_p for p prime, p not dividing the
    /// level: chi1(p) + chi2(p) p^{k-1}.
    pub fn hecke_eigenvalue(&self, p: u64) -> Result<CyclotomicNumber, NewformError> {
        if !is_prime(p) {
            return Err(NewformError::NotPrime(p));
        }
        if self.level() % p == 0 {
            return Err(NewformError::RamifiedPrime(p));
        }
        Ok(self.coefficient(p))
    }

    pub fn q_expansion(&self, bound: u64) -> QExpansion {
        assert!(bound >= 1);
        let coeffs = (1..=bound).map(|n| self.coefficient(n)).collect();
        QExpansion {
            constant: self.constant_term(),
            coeffs,
            weight: self.weight,
            level: self.level(),
            nebentypus: self.nebentypus.clone(),
        }
    }

    /// The twist E(chi1*theta, chi2*theta, k) by a primitive quadratic
    /// character of conductor coprime to the level.
    pub fn twist(&self, theta: &DirichletCharacter) -> Result<Self, NewformError> {
        if !theta.is_quadratic() {
            return Err(NewformError::TwistNotQuadratic);
        }
        let theta = theta.primitive_part();
        if theta.conductor().gcd(&self.level()) != 1 {
            return Err(NewformError::TwistConductorNotCoprime {
                conductor: theta.conductor(),
                level: self.level(),
            });
        }
        Self::new(
            self.chi1.multiply(&theta),
            self.chi2.multiply(&theta),
            self.weight,
        )
    }

    /// The Galois conjugate newform E(chi1^sigma, chi2^sigma, k) for the
    /// automorphism zeta -> zeta^t.
    pub fn galois_conjugate(&self, t: i64) -> Result<Self, String> {
        let order = self.chi1.order().lcm(&self.chi2.order());
        if (t.rem_euclid(order as i64)).gcd(&(order as i64)) != 1 {
            return Err(format!("{t} is not coprime to the coefficient order {order}"));
        }
        let c1 = self.chi1.galois_conjugate(t).map_err(|e| e.to_string())?;
        let c2 = self.chi2.galois_conjugate(t).map_err(|e| e.to_string())?;
        Self::new(c1, c2, self.weight).map_err(|e| e.to_string())
    }

    pub fn descriptor(&self) -> String {
        match (self.chi1.discriminant(), self.chi2.discriminant()) {
            (Some(d1), Some(d2)) => format!("{d1}:{d2}:{k}", k = self.weight),
            _ => format!(
                "E({}, {}, {})",
                self.chi1.canonical_string(),
                self.chi2.canonical_string(),
                self.weight
            ),
        }
    }
}

/// A truncated exact q-expansion: constant term plus a(1..B).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QExpansion {
    pub constant: CyclotomicNumber,
    pub coeffs: Vec<CyclotomicNumber>,
    pub weight: u32,
    pub level: u64,
    pub nebentypus: DirichletCharacter,
}

impl QExpansion {
    pub fn bound(&self) -> u64 {
        self.coeffs.len() as u64
    }

    /// a(n) for 0 <= n <= bound.
    pub fn coefficient(&self, n: u64) -> &CyclotomicNumber {
        if n == 0 {
            &self.constant
        } else {
            &self.coeffs[n as usize - 1]
        }
    }

    pub fn is_rational(&self) -> bool {
        self.constant.is_rational() && self.coeffs.iter().all(|c| c.is_rational())
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "constant": render_coeff(&self.constant),
            "coeffs": self.coeffs.iter().map(render_coeff).collect::<Vec<_>>(),
            "k": self.weight,
            "N": self.level,
            "chi": self.nebentypus.canonical_string(),
        })
    }

    /// Rebuild an expansion from the `to_json` format. Only rational
    /// coefficients (integers or "p/q" strings) are accepted.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        let coeff = |v: &serde_json::Value| -> Result<CyclotomicNumber, String> {
            let s = v.as_str().ok_or("coefficient entries must be strings")?;
            let r = parse_rational(s).ok_or_else(|| format!("unreadable coefficient {s:?}"))?;
            Ok(CyclotomicNumber::from_rational(r))
        };
        let constant = coeff(v.get("constant").ok_or("missing \"constant\"")?)?;
        let coeffs = v
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or("missing \"coeffs\" array")?
            .iter()
            .map(coeff)
            .collect::<Result<Vec<_>, _>>()?;
        let weight = v
            .get("k")
            .and_then(|k| k.as_u64())
            .ok_or("missing weight \"k\"")? as u32;
        let level = v.get("N").and_then(|n| n.as_u64()).ok_or("missing level \"N\"")?;
        let chi_str = v
            .get("chi")
            .and_then(|c| c.as_str())
            .ok_or("missing nebentypus \"chi\"")?;
        let nebentypus = DirichletCharacter::parse_canonical(chi_str)?;
        Ok(Self { constant, coeffs, weight, level, nebentypus })
    }
}

/// Parse "n" or "p/q" into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn render_coeff(c: &CyclotomicNumber) -> String {
    match c.as_rational() {
        Some(r) => render_rational(&r),
        None => c.to_string(),
    }
}

pub fn render_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
