//! Exact multiplicity-one analysis between Eisenstein newforms.
//!
//! Agreement densities over primes are computed as residue-class
//! proportions modulo the product of the two levels (Dirichlet's theorem
//! identifies the two), so every density here is an exact rational.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::json;
use thiserror::Error;

use crate::chars::DirichletCharacter;
use crate::eisen::{sigma, EisensteinNewform};
use crate::kronecker::enumerate_fundamental_signed;
use crate::stats::primes_up_to;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MultOneError {
    #[error("weights differ ({0} vs {1}); eigenvalue growth separates the forms instead")]
    UnequalWeights(u32, u32),
    #[error("characters must be quadratic for this operation")]
    NotQuadratic,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Identical,
    TwistRelated,
    Unrelated,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Identical => "identical",
            Verdict::TwistRelated => "twist-related",
            Verdict::Unrelated => "unrelated",
        }
    }
}

/// Agreement data between two newforms over residue classes mod N*N'.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AgreementAnalysis {
    pub modulus: u64,
    pub agreeing_classes: Vec<u64>,
    /// #agreeing / phi(modulus), exact.
    pub density: BigRational,
    /// Primes at or below the small-prime threshold, compared directly.
    pub small_prime_exceptions: Vec<(u64, bool)>,
    pub verdict: Verdict,
}

impl AgreementAnalysis {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "modulus": self.modulus,
            "agreeing_classes": self.agreeing_classes,
            "density": self.density.to_string(),
            "small_prime_exceptions": self.small_prime_exceptions
                .iter()
                .map(|&(p, ok)| json!({"p": p, "agrees": ok}))
                .collect::<Vec<_>>(),
            "verdict": self.verdict.as_str(),
        })
    }
}

/// The least p0 such that for primes p > p0 an eigenvalue agreement
/// chi1(p) + chi2(p) p^{k-1} = psi1(p) + psi2(p) p^{k-1} forces the
/// character values to agree slot by slot. With quadratic values the
/// mismatch of the leading terms is at most 2, so p^{k-1} > 2 suffices.
pub fn agreement_threshold(
    f: &EisensteinNewform,
    g: &EisensteinNewform,
) -> Result<u64, MultOneError> {
    if f.weight() != g.weight() {
        return Err(MultOneError::UnequalWeights(f.weight(), g.weight()));
    }
    if !f.is_quadratic() || !g.is_quadratic() {
        return Err(MultOneError::NotQuadratic);
    }
    Ok(if f.weight() == 2 { 2 } else { 1 })
}

fn phi_classes(m: u64) -> impl Iterator<Item = u64> {
    (1..=m).filter(move |r| r.gcd(&m) == 1)
}

fn verdict_for(
    f: &EisensteinNewform,
    g: &EisensteinNewform,
    density: &BigRational,
) -> Verdict {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if density > &half {
        Verdict::Identical
    } else if density == &half && detect_twist(f, g).is_some() {
        Verdict::TwistRelated
    } else {
        Verdict::Unrelated
    }
}

/// Density of primes where the Hecke eigenvalues of f and g agree.
///
/// Equal weights: the proportion of coprime residue classes r mod N*N' on
/// which both induced character pairs agree (for p > p0 in such a class the
/// eigenvalues agree iff the characters do). Unequal weights: density 0 by
/// eigenvalue growth; any agreeing small primes are listed explicitly.
pub fn eigenvalue_agreement_density(
    f: &EisensteinNewform,
    g: &EisensteinNewform,
) -> Result<AgreementAnalysis, MultOneError> {
    if !f.is_quadratic() || !g.is_quadratic() {
        return Err(MultOneError::NotQuadratic);
    }
    let m = f.level() * g.level();
    if f.weight() != g.weight() {
        // growth separation: |a(p)| >= p^{k-1} - 1 > p^{k'-1} + 1 >= |a'(p)|
        // once p^{k'-1}(p^{|k-k'|} - 1) > 2, i.e. for every prime p > 2
        let mut exceptions = Vec::new();
        for p in primes_up_to(2.max(m)) {
            if m % p == 0 {
                continue;
            }
            let agrees = f.coefficient(p) == g.coefficient(p);
            if p <= 2 || agrees {
                exceptions.push((p, agrees));
            }
        }
        return Ok(AgreementAnalysis {
            modulus: m,
            agreeing_classes: Vec::new(),
            density: BigRational::zero(),
            small_prime_exceptions: exceptions,
            verdict: Verdict::Unrelated,
        });
    }
    let p0 = agreement_threshold(f, g)?;
    let (c1, c2) = (f.chi1(), f.chi2());
    let (p1, p2) = (g.chi1(), g.chi2());
    let agreeing: Vec<u64> = phi_classes(m)
        .filter(|&r| {
            let r = r as i64;
            c1.value_i32(r) == p1.value_i32(r) && c2.value_i32(r) == p2.value_i32(r)
        })
        .collect();
    let phi = phi_classes(m).count() as u64;
    let density = BigRational::new(BigInt::from(agreeing.len()), BigInt::from(phi));
    let small_prime_exceptions = primes_up_to(p0)
        .into_iter()
        .filter(|&p| m % p != 0)
        .map(|p| (p, f.coefficient(p) == g.coefficient(p)))
        .collect();
    let verdict = verdict_for(f, g, &density);
    Ok(AgreementAnalysis {
        modulus: m,
        agreeing_classes: agreeing,
        density,
        small_prime_exceptions,
        verdict,
    })
}

/// Density of primes where the coefficient signs of f and g agree: classes
/// where the two chi2 values coincide, since the sign at p coprime to the
/// level is chi2(p).
pub fn sign_agreement_density(
    f: &EisensteinNewform,
    g: &EisensteinNewform,
) -> Result<AgreementAnalysis, MultOneError> {
    if f.weight() != g.weight() {
        return Err(MultOneError::UnequalWeights(f.weight(), g.weight()));
    }
    if !f.is_quadratic() || !g.is_quadratic() {
        return Err(MultOneError::NotQuadratic);
    }
    let m = f.level() * g.level();
    let agreeing: Vec<u64> = phi_classes(m)
        .filter(|&r| f.chi2().value_i32(r as i64) == g.chi2().value_i32(r as i64))
        .collect();
    let phi = phi_classes(m).count() as u64;
    let density = BigRational::new(BigInt::from(agreeing.len()), BigInt::from(phi));
    let verdict = verdict_for(f, g, &density);
    Ok(AgreementAnalysis {
        modulus: m,
        agreeing_classes: agreeing,
        density,
        small_prime_exceptions: Vec::new(),
        verdict,
    })
}

/// The quadratic character theta with a_f(p) = theta(p) a_g(p) for all
/// p coprime to both levels, if one exists. Returns nothing for f = g
/// (the principal twist is rejected) and for unrelated pairs.
pub fn detect_twist(
    f: &EisensteinNewform,
    g: &EisensteinNewform,
) -> Option<DirichletCharacter> {
    if f.weight() != g.weight() || !f.is_quadratic() || !g.is_quadratic() {
        return None;
    }
    let theta = f.chi1().multiply(g.chi1()).primitive_part();
    let theta2 = f.chi2().multiply(g.chi2()).primitive_part();
    if theta != theta2 || theta.is_principal() {
        return None;
    }
    // certify the eigenvalue identity classwise on the common modulus
    let m = f.level() * g.level() * theta.modulus();
    for r in phi_classes(m) {
        let r = r as i64;
        let t = theta.value_i32(r);
        if f.chi1().value_i32(r) != t * g.chi1().value_i32(r)
            || f.chi2().value_i32(r) != t * g.chi2().value_i32(r)
        {
            return None;
        }
    }
    Some(theta)
}

/// The character theta with a_f(p) = theta(p) a_g(p) and chi_f = theta^2
/// chi_g, given that the eigenvalue n-th powers of f and g agree; general
/// (not necessarily quadratic) characters allowed.
pub fn nth_power_relation(
    f: &EisensteinNewform,
    g: &EisensteinNewform,
    n: u32,
) -> Result<Option<DirichletCharacter>, MultOneError> {
    assert!(n >= 2);
    if f.weight() != g.weight() {
        return Err(MultOneError::UnequalWeights(f.weight(), g.weight()));
    }
    let theta = f
        .chi1()
        .multiply(&g.chi1().galois_conjugate(-1).expect("conjugation is always valid"))
        .primitive_part();
    let m = f.level() * g.level() * theta.modulus();
    // a_f(p) = theta(p) a_g(p) identically in p within a class forces the
    // character identities slot by slot (p^{k-1} is unbounded in the class)
    for r in phi_classes(m) {
        let r = r as i64;
        let t = theta.value_cyclotomic(r);
        if f.chi1().value_cyclotomic(r) != t.clone() * g.chi1().value_cyclotomic(r)
            || f.chi2().value_cyclotomic(r) != t * g.chi2().value_cyclotomic(r)
        {
            return Ok(None);
        }
    }
    // nebentypus relation chi_f = theta^2 chi_g
    let theta_sq = theta.multiply(&theta);
    let rhs = theta_sq.multiply(g.nebentypus()).primitive_part();
    if f.nebentypus().primitive_part() != rhs {
        return Ok(None);
    }
    // the premise itself: n-th powers of the eigenvalue data agree classwise
    for r in phi_classes(m) {
        let r = r as i64;
        let lhs1 = f.chi1().value_cyclotomic(r).pow(n);
        let rhs1 = g.chi1().value_cyclotomic(r).pow(n);
        let lhs2 = f.chi2().value_cyclotomic(r).pow(n);
        let rhs2 = g.chi2().value_cyclotomic(r).pow(n);
        if lhs1 != rhs1 || lhs2 != rhs2 {
            return Ok(None);
        }
    }
    Ok(Some(theta))
}

/// Every newform with quadratic characters, level at most `max_level` and
/// the given weight, in a deterministic order.
pub fn quadratic_newforms(max_level: u64, k: u32) -> Vec<EisensteinNewform> {
    let discs: Vec<i64> = std::iter::once(1)
        .chain(enumerate_fundamental_signed(max_level))
        .collect();
    let mut out = Vec::new();
    let mut sorted = discs;
    sorted.sort_by_key(|d| (d.unsigned_abs(), *d));
    for &d1 in &sorted {
        for &d2 in &sorted {
            if d1.unsigned_abs() * d2.unsigned_abs() > max_level {
                continue;
            }
            if let Ok(e) = EisensteinNewform::from_discriminants(d1, d2, k) {
                out.push(e);
            }
        }
    }
    out
}

/// Direct eigenvalue comparison at small primes, used by tests to
/// cross-check the residue-class densities against actual divisor sums.
pub fn prime_agreement_count(
    f: &EisensteinNewform,
    g: &EisensteinNewform,
    x: u64,
) -> (u64, u64) {
    let m = f.level() * g.level();
    let mut total = 0u64;
    let mut agree = 0u64;
    for p in primes_up_to(x) {
        if m % p == 0 {
            continue;
        }
        total += 1;
        if sigma(f.chi1(), f.chi2(), f.weight(), p) == sigma(g.chi1(), g.chi2(), g.weight(), p) {
            agree += 1;
        }
    }
    (total, agree)
}
