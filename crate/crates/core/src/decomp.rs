//! The weight-k Eisenstein space at level N: shifted-newform bases, the
//! shift operator B_d, Galois traces, exact decomposition of q-expansions,
//! coefficient-field classification, and the negativity scanner for
//! combinations avoiding the all-positive newform.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::json;
use thiserror::Error;

use crate::chars::{divisors, DirichletCharacter};
use crate::cyclo::CyclotomicNumber;
use crate::eisen::{render_rational, EisensteinNewform, QExpansion};
use crate::linalg::{solve, SolveError};
use crate::stats::primes_up_to;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompError {
    #[error("parity mismatch: chi(-1) != (-1)^k, the space is zero")]
    ParityMismatch,
    #[error("the series is not in the Eisenstein space at this level")]
    NotInSpace,
    #[error("truncation too short: need at least {required} coefficients, got {got}")]
    NeedLargerBound { required: u64, got: u64 },
    #[error("operation requires rational coefficients")]
    NonRationalCoefficient,
    #[error("combination contains a shift of the all-positive newform (principal second character); hypothesis violated")]
    PrincipalShiftPresent,
    #[error("rational coefficients force a trivial or quadratic nebentypus; got order {0}")]
    NebentypusNotReal(u64),
    #[error("invalid term: {0}")]
    BadTerm(String),
    #[error("conductor of chi ({0}) does not divide the level {1}")]
    ConductorNotDividing(u64, u64),
}

/// All pairs (newform, shift d) spanning the weight-k Eisenstein space of
/// level N and nebentypus chi, in a deterministic canonical order.
///
/// The pairs run over primitive (chi1, chi2) with cond(chi1)*cond(chi2) = M
/// dividing N, chi1*chi2 inducing chi, and d | N/M; the weight-2 level-1
/// form does not exist and is skipped.
pub fn newform_basis(
    n: u64,
    chi: &DirichletCharacter,
    k: u32,
) -> Result<Vec<(EisensteinNewform, u64)>, DecompError> {
    if n % chi.conductor() != 0 {
        return Err(DecompError::ConductorNotDividing(chi.conductor(), n));
    }
    let required = if k % 2 == 0 { 1 } else { -1 };
    if chi.parity() != required {
        return Err(DecompError::ParityMismatch);
    }
    let target = chi.primitive_part();
    let mut out = Vec::new();
    for f1 in divisors(n) {
        for chi1 in DirichletCharacter::primitive_mod(f1) {
            for f2 in divisors(n / f1) {
                let m = f1 * f2;
                for chi2 in DirichletCharacter::primitive_mod(f2) {
                    if chi1.multiply(&chi2).primitive_part() != target {
                        continue;
                    }
                    let Ok(e) = EisensteinNewform::new(chi1.clone(), chi2, k) else {
                        continue; // the excluded weight-2 level-1 form
                    };
                    for d in divisors(n / m) {
                        out.push((e.clone(), d));
                    }
                }
            }
        }
    }
    out.sort_by_key(|(e, d)| {
        (
            e.level(),
            *d,
            e.chi1().canonical_string(),
            e.chi2().canonical_string(),
        )
    });
    Ok(out)
}

/// The shift operator B_d: b(n) = a(n/d) when d | n, else 0, with the
/// constant term carried over unchanged.
pub fn shift(a: &QExpansion, d: u64) -> QExpansion {
    assert!(d >= 1);
    let coeffs = (1..=a.bound())
        .map(|n| {
            if n % d == 0 {
                a.coefficient(n / d).clone()
            } else {
                CyclotomicNumber::zero()
            }
        })
        .collect();
    QExpansion {
        constant: a.constant.clone(),
        coeffs,
        weight: a.weight,
        level: a.level * d,
        nebentypus: a.nebentypus.clone(),
    }
}

/// Tr(alpha f) = sum over the Galois group of the coefficient field of
/// sigma(alpha) f^sigma, coefficientwise; always rational.
pub fn trace(alpha: &CyclotomicNumber, e: &EisensteinNewform, bound: u64) -> QExpansion {
    let m = e.chi1().order().lcm(&e.chi2().order());
    let automorphisms: Vec<i64> = (1..=m)
        .filter(|t| t.gcd(&m) == 1)
        .map(|t| t as i64)
        .collect();
    let apply = |c: CyclotomicNumber| -> CyclotomicNumber {
        let mut total = CyclotomicNumber::zero();
        for &t in &automorphisms {
            total = total + (alpha.clone() * c.clone()).galois(t);
        }
        total
    };
    let coeffs = (1..=bound).map(|n| apply(e.coefficient(n))).collect();
    QExpansion {
        constant: apply(e.constant_term()),
        coeffs,
        weight: e.weight(),
        level: e.level(),
        nebentypus: e.nebentypus().clone(),
    }
}

/// An exact linear combination of shifted newforms inside a fixed ambient
/// space (level, nebentypus, weight).
#[derive(Clone, PartialEq, Debug)]
pub struct ShiftedNewformCombination {
    terms: Vec<(CyclotomicNumber, EisensteinNewform, u64)>,
    level: u64,
    nebentypus: DirichletCharacter,
    weight: u32,
}

impl ShiftedNewformCombination {
    pub fn new(
        terms: Vec<(CyclotomicNumber, EisensteinNewform, u64)>,
        level: u64,
        nebentypus: DirichletCharacter,
        weight: u32,
    ) -> Result<Self, DecompError> {
        let target = nebentypus.primitive_part();
        for (i, (_, e, d)) in terms.iter().enumerate() {
            if e.weight() != weight {
                return Err(DecompError::BadTerm(format!(
                    "term {i} has weight {} in a weight-{weight} space",
                    e.weight()
                )));
            }
            if level % (e.level() * d) != 0 {
                return Err(DecompError::BadTerm(format!(
                    "term {i}: shifted level {} does not divide {level}",
                    e.level() * d
                )));
            }
            if e.nebentypus().primitive_part() != target {
                return Err(DecompError::BadTerm(format!(
                    "term {i} has the wrong nebentypus"
                )));
            }
            for (j, (_, e2, d2)) in terms.iter().enumerate().take(i) {
                if e == e2 && d == d2 {
                    return Err(DecompError::BadTerm(format!(
                        "terms {j} and {i} repeat the same shifted newform"
                    )));
                }
            }
        }
        Ok(Self { terms, level, nebentypus, weight })
    }

    pub fn terms(&self) -> &[(CyclotomicNumber, EisensteinNewform, u64)] {
        &self.terms
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn nebentypus(&self) -> &DirichletCharacter {
        &self.nebentypus
    }

    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|(c, _, _)| c.is_rational())
    }

    /// True when some term is a shift of the distinguished all-positive
    /// newform: the one whose second character is principal, so that the
    /// sign rule sgn a(n) = chi2(n) forces every coefficient to be
    /// non-negative.  A negativity scan over a combination containing such
    /// a term need not terminate, so the scan rejects these inputs.
    pub fn contains_all_positive_shift(&self) -> bool {
        self.terms.iter().any(|(_, e, _)| e.chi2().is_principal())
    }

    /// a(n) of the combination; n = 0 gives the constant term.
    pub fn coefficient(&self, n: u64) -> CyclotomicNumber {
        let mut total = CyclotomicNumber::zero();
        for (c, e, d) in &self.terms {
            if n == 0 {
                total = total + c.clone() * e.constant_term();
            } else if n % d == 0 {
                total = total + c.clone() * e.coefficient(n / d);
            }
        }
        total
    }

    pub fn q_expansion(&self, bound: u64) -> QExpansion {
        QExpansion {
            constant: self.coefficient(0),
            coeffs: (1..=bound).map(|n| self.coefficient(n)).collect(),
            weight: self.weight,
            level: self.level,
            nebentypus: self.nebentypus.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(c, e, d)| {
                let c_str = match c.as_rational() {
                    Some(r) => render_rational(&r),
                    None => c.to_string(),
                };
                match (e.chi1().discriminant(), e.chi2().discriminant()) {
                    (Some(d1), Some(d2)) => json!({
                        "c": c_str, "D1": d1, "D2": d2, "k": e.weight(), "d": d,
                    }),
                    _ => json!({
                        "c": c_str,
                        "chi1": e.chi1().canonical_string(),
                        "chi2": e.chi2().canonical_string(),
                        "k": e.weight(),
                        "d": d,
                    }),
                }
            })
            .collect();
        json!({
            "N": self.level,
            "chi": self.nebentypus.canonical_string(),
            "k": self.weight,
            "terms": terms,
        })
    }
}

/// The unique expression of a truncated q-expansion as a combination of
/// shifted newforms at the given level; exact, with the residual verified
/// on every provided coefficient.
pub fn decompose(
    a: &QExpansion,
    n: u64,
    chi: &DirichletCharacter,
    k: u32,
) -> Result<ShiftedNewformCombination, DecompError> {
    let basis = newform_basis(n, chi, k)?;
    if basis.is_empty() {
        return if a.constant.is_zero() && a.coeffs.iter().all(|c| c.is_zero()) {
            ShiftedNewformCombination::new(Vec::new(), n, chi.clone(), k)
        } else {
            Err(DecompError::NotInSpace)
        };
    }
    let required = basis.len() as u64 + 10;
    if a.bound() < required {
        return Err(DecompError::NeedLargerBound { required, got: a.bound() });
    }
    let mut rows: Vec<Vec<CyclotomicNumber>> = Vec::with_capacity(a.bound() as usize + 1);
    let mut rhs: Vec<CyclotomicNumber> = Vec::with_capacity(a.bound() as usize + 1);
    for m in 0..=a.bound() {
        let row = basis
            .iter()
            .map(|(e, d)| {
                if m == 0 {
                    e.constant_term()
                } else if m % d == 0 {
                    e.coefficient(m / d)
                } else {
                    CyclotomicNumber::zero()
                }
            })
            .collect();
        rows.push(row);
        rhs.push(a.coefficient(m).clone());
    }
    let solution = solve(&rows, &rhs).map_err(|err| match err {
        SolveError::Inconsistent => DecompError::NotInSpace,
        SolveError::Underdetermined(_) => DecompError::NeedLargerBound {
            required: 2 * required,
            got: a.bound(),
        },
        SolveError::ShapeMismatch { .. } => unreachable!("rows built alongside rhs"),
    })?;
    let terms = basis
        .into_iter()
        .zip(solution)
        .filter(|(_, c)| !c.is_zero())
        .map(|((e, d), c)| (c, e, d))
        .collect();
    ShiftedNewformCombination::new(terms, n, chi.clone(), k)
}

/// How a newform's coefficient field sits inside the cyclotomics.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldClass {
    Rational,
    TotallyReal,
    Cm,
}

impl FieldClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            FieldClass::Rational => "rational",
            FieldClass::TotallyReal => "totally-real",
            FieldClass::Cm => "CM",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoefficientFieldReport {
    /// Degree over Q of the field generated by the coefficients: phi(m) for
    /// m the lcm of the two character orders.
    pub degree: u64,
    pub abelian: bool,
    pub classification: FieldClass,
    pub contains_nebentypus_values: bool,
}

pub fn coefficient_field(e: &EisensteinNewform) -> CoefficientFieldReport {
    let m = e.chi1().order().lcm(&e.chi2().order());
    let degree = (1..=m).filter(|t| t.gcd(&m) == 1).count() as u64;
    let classification = if m <= 2 {
        FieldClass::Rational
    } else {
        // Q(zeta_m) for m > 2 is a CM field; real intermediate cases cannot
        // arise because the value group is the full group of m-th roots
        FieldClass::Cm
    };
    CoefficientFieldReport {
        degree,
        abelian: true,
        classification,
        contains_nebentypus_values: true,
    }
}

/// The decomposition of a rational series, split per the rational-structure
/// theorem: rational multiples of real-character newforms, plus
/// Galois-orbit groups with conjugate coefficients.
#[derive(Clone, Debug)]
pub struct RationalStructure {
    pub rational_terms: Vec<(BigRational, EisensteinNewform, u64)>,
    /// Each orbit lists (coefficient, form, shift) closed under conjugation,
    /// with coefficients verified conjugate along the orbit.
    pub orbits: Vec<Vec<(CyclotomicNumber, EisensteinNewform, u64)>>,
}

pub fn rational_structure(
    a: &QExpansion,
    n: u64,
    chi: &DirichletCharacter,
    k: u32,
) -> Result<RationalStructure, DecompError> {
    if !a.is_rational() {
        return Err(DecompError::NonRationalCoefficient);
    }
    if chi.order() > 2 {
        return Err(DecompError::NebentypusNotReal(chi.order()));
    }
    let comb = decompose(a, n, chi, k)?;
    let mut rational_terms = Vec::new();
    let mut remaining: Vec<(CyclotomicNumber, EisensteinNewform, u64)> = Vec::new();
    for (c, e, d) in comb.terms() {
        if e.is_quadratic() {
            let r = c.as_rational().ok_or(DecompError::NonRationalCoefficient)?;
            rational_terms.push((r, e.clone(), *d));
        } else {
            remaining.push((c.clone(), e.clone(), *d));
        }
    }
    let mut orbits: Vec<Vec<(CyclotomicNumber, EisensteinNewform, u64)>> = Vec::new();
    let mut used = vec![false; remaining.len()];
    for i in 0..remaining.len() {
        if used[i] {
            continue;
        }
        let (c0, e0, d0) = &remaining[i];
        let m = e0.chi1().order().lcm(&e0.chi2().order());
        let mut orbit = Vec::new();
        for t in (1..=m).filter(|t| t.gcd(&m) == 1) {
            let et = e0
                .galois_conjugate(t as i64)
                .map_err(DecompError::BadTerm)?;
            let ct = c0.galois(t as i64);
            let j = remaining
                .iter()
                .position(|(c, e, d)| d == d0 && *e == et && *c == ct)
                .ok_or(DecompError::NotInSpace)?;
            if !used[j] {
                used[j] = true;
                orbit.push(remaining[j].clone());
            }
        }
        orbits.push(orbit);
    }
    Ok(RationalStructure { rational_terms, orbits })
}

/// The first scanned index n <= bound where the combination's coefficient
/// drops below -threshold, following the proof's search pattern: n = d*p
/// over primes p coprime to the level, with d the least shift present.
/// Combinations containing a shift of the all-positive (principal-chi1)
/// newform are rejected: no such coefficient need exist for them.
pub fn nonnegativity_scan(
    comb: &ShiftedNewformCombination,
    threshold: &BigRational,
    bound: u64,
) -> Result<Option<(u64, BigRational)>, DecompError> {
    if !comb.is_rational() {
        return Err(DecompError::NonRationalCoefficient);
    }
    if comb.contains_all_positive_shift() {
        return Err(DecompError::PrincipalShiftPresent);
    }
    if comb.terms().is_empty() {
        return Ok(None);
    }
    let d_min = comb.terms().iter().map(|(_, _, d)| *d).min().unwrap();
    // at n = d_min * p with p prime to everything in sight,
    // a(n) = sum over terms with d | d_min of c * a_E(d_min/d) * a_E(p)
    let level = comb.level();
    let mut contributors: Vec<(BigRational, &EisensteinNewform)> = Vec::new();
    for (c, e, d) in comb.terms() {
        if d_min % d != 0 {
            continue;
        }
        let c = c.as_rational().expect("rationality checked above");
        let a = e
            .coefficient(d_min / d)
            .as_rational()
            .ok_or(DecompError::NonRationalCoefficient)?;
        contributors.push((c * a, e));
    }
    let neg_threshold = -threshold.clone();
    for p in primes_up_to(bound / d_min) {
        if level.gcd(&p) != 1 || d_min % p == 0 {
            continue;
        }
        let mut val = BigRational::zero();
        for (u, e) in &contributors {
            let ap = e
                .coefficient(p)
                .as_rational()
                .ok_or(DecompError::NonRationalCoefficient)?;
            val += u * ap;
        }
        if val < neg_threshold {
            return Ok(Some((d_min * p, val)));
        }
    }
    Ok(None)
}

/// Exhaustive fallback: scan every index n <= bound.
pub fn nonnegativity_scan_full(
    comb: &ShiftedNewformCombination,
    threshold: &BigRational,
    bound: u64,
) -> Result<Option<(u64, BigRational)>, DecompError> {
    if !comb.is_rational() {
        return Err(DecompError::NonRationalCoefficient);
    }
    if comb.contains_all_positive_shift() {
        return Err(DecompError::PrincipalShiftPresent);
    }
    let neg_threshold = -threshold.clone();
    for n in 1..=bound {
        let val = comb
            .coefficient(n)
            .as_rational()
            .ok_or(DecompError::NonRationalCoefficient)?;
        if val < neg_threshold {
            return Ok(Some((n, val)));
        }
    }
    Ok(None)
}
