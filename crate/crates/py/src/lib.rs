//! Python bindings for the eisenforms library.
//!
//! Exposes Dirichlet characters, Eisenstein newforms, sign statistics, the
//! discriminant-pair census, multiplicity-one agreement analysis and exact
//! decomposition of q-expansions.  Exact rational values cross the boundary
//! as Python ints when integral and as "p/q" strings otherwise; structured
//! reports cross as plain dicts/lists.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;

use eisenforms::chars::DirichletCharacter;
use eisenforms::cyclo::CyclotomicNumber;
use eisenforms::decomp::{
    self, coefficient_field, newform_basis, nonnegativity_scan, nonnegativity_scan_full,
    ShiftedNewformCombination,
};
use eisenforms::eisen::{parse_rational, render_rational, sigma_int, EisensteinNewform, QExpansion};
use eisenforms::multone;
use eisenforms::stats::{self, PairDomain, SignPattern};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// serde_json::Value -> Python object (dict / list / int / float / str / bool / None).
fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    match v {
        serde_json::Value::Null => py.None().into_py_any(py),
        serde_json::Value::Bool(b) => b.into_py_any(py),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_py_any(py)
            } else if let Some(u) = n.as_u64() {
                u.into_py_any(py)
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_py_any(py)
            }
        }
        serde_json::Value::String(s) => s.into_py_any(py),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_py_any(py)
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            dict.into_py_any(py)
        }
    }
}

/// Exact rational -> Python int when integral, else "p/q" string.
fn rational_to_py(py: Python<'_>, r: &BigRational) -> PyResult<Py<PyAny>> {
    if r.denom().is_one() {
        r.numer().clone().into_py_any(py)
    } else {
        render_rational(r).into_py_any(py)
    }
}

/// Exact cyclotomic value -> int, "p/q" string, or symbolic string.
fn cyclo_to_py(py: Python<'_>, c: &CyclotomicNumber) -> PyResult<Py<PyAny>> {
    match c.as_rational() {
        Some(r) => rational_to_py(py, &r),
        None => c.to_string().into_py_any(py),
    }
}

fn parse_rational_arg(s: &str) -> PyResult<BigRational> {
    parse_rational(s).ok_or_else(|| err(format!("invalid rational: {s}")))
}

fn parse_domain(s: &str) -> PyResult<PairDomain> {
    match s {
        "hyperbola" => Ok(PairDomain::Hyperbola),
        "box" => Ok(PairDomain::Box),
        other => Err(err(format!("unknown domain {other:?}; use \"hyperbola\" or \"box\""))),
    }
}

/// A Dirichlet character with exact root-of-unity values.
#[pyclass(name = "Character", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCharacter {
    inner: DirichletCharacter,
}

#[pymethods]
impl PyCharacter {
    /// The primitive quadratic character (D/.) of a fundamental discriminant.
    #[staticmethod]
    fn from_discriminant(d: i64) -> PyResult<Self> {
        DirichletCharacter::from_discriminant(d)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    /// The principal character mod n.
    #[staticmethod]
    fn principal(n: u64) -> PyResult<Self> {
        if n == 0 {
            return Err(err("modulus must be positive"));
        }
        Ok(Self { inner: DirichletCharacter::principal(n) })
    }

    /// Parse the canonical serialization ("disc:D" or "mod:N:[...]").
    #[staticmethod]
    fn parse(s: &str) -> PyResult<Self> {
        DirichletCharacter::parse_canonical(s)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    fn modulus(&self) -> u64 {
        self.inner.modulus()
    }

    fn conductor(&self) -> u64 {
        self.inner.conductor()
    }

    fn order(&self) -> u64 {
        self.inner.order()
    }

    /// chi(-1): +1 for even characters, -1 for odd ones.
    fn parity(&self) -> i32 {
        self.inner.parity()
    }

    fn is_principal(&self) -> bool {
        self.inner.is_principal()
    }

    fn is_primitive(&self) -> bool {
        self.inner.is_primitive()
    }

    fn is_quadratic(&self) -> bool {
        self.inner.is_quadratic()
    }

    /// The fundamental discriminant when the character is quadratic (or
    /// principal mod 1), else None.
    fn discriminant(&self) -> Option<i64> {
        self.inner.discriminant()
    }

    /// chi(n) as 0/+1/-1 for quadratic characters, else a symbolic string.
    fn value(&self, py: Python<'_>, n: i64) -> PyResult<Py<PyAny>> {
        if self.inner.is_quadratic() {
            self.inner.value_i32(n).into_py_any(py)
        } else {
            cyclo_to_py(py, &self.inner.value_cyclotomic(n))
        }
    }

    /// Pointwise product, defined mod lcm of the moduli.
    fn multiply(&self, other: &Self) -> Self {
        Self { inner: self.inner.multiply(&other.inner) }
    }

    /// The character mod m induced by this one (m must be a multiple of the
    /// conductor).
    fn induce(&self, m: u64) -> PyResult<Self> {
        self.inner.induce(m).map(|inner| Self { inner }).map_err(err)
    }

    /// The primitive character of the same conductor inducing this one.
    fn primitive_part(&self) -> Self {
        Self { inner: self.inner.primitive_part() }
    }

    /// The Galois conjugate chi^sigma_t : n -> chi(n)^t.
    fn galois_conjugate(&self, t: i64) -> PyResult<Self> {
        self.inner
            .galois_conjugate(t)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    fn canonical(&self) -> String {
        self.inner.canonical_string()
    }

    fn __repr__(&self) -> String {
        format!("Character({})", self.inner.canonical_string())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::collections::hash_map::DefaultHasher;
        use std::hash::{Hash, Hasher};
        let mut h = DefaultHasher::new();
        self.inner.canonical_string().hash(&mut h);
        h.finish()
    }
}

/// An Eisenstein newform E(chi1, chi2, k) with exact coefficients.
#[pyclass(name = "Newform", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyNewform {
    inner: EisensteinNewform,
}

#[pymethods]
impl PyNewform {
    #[new]
    fn new(chi1: &PyCharacter, chi2: &PyCharacter, k: u32) -> PyResult<Self> {
        EisensteinNewform::new(chi1.inner.clone(), chi2.inner.clone(), k)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    /// Construct from fundamental discriminants, matching the CLI
    /// descriptor "D1:D2:k".
    #[staticmethod]
    fn from_discriminants(d1: i64, d2: i64, k: u32) -> PyResult<Self> {
        EisensteinNewform::from_discriminants(d1, d2, k)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    fn chi1(&self) -> PyCharacter {
        PyCharacter { inner: self.inner.chi1().clone() }
    }

    fn chi2(&self) -> PyCharacter {
        PyCharacter { inner: self.inner.chi2().clone() }
    }

    fn weight(&self) -> u32 {
        self.inner.weight()
    }

    fn level(&self) -> u64 {
        self.inner.level()
    }

    fn nebentypus(&self) -> PyCharacter {
        PyCharacter { inner: self.inner.nebentypus().clone() }
    }

    fn is_quadratic(&self) -> bool {
        self.inner.is_quadratic()
    }

    /// "D1:D2:k" for quadratic-character forms.
    fn descriptor(&self) -> String {
        self.inner.descriptor()
    }

    /// a(n); exact int for quadratic-character forms.
    fn coefficient(&self, py: Python<'_>, n: u64) -> PyResult<Py<PyAny>> {
        if n == 0 {
            return self.constant_term(py);
        }
        cyclo_to_py(py, &self.inner.coefficient(n))
    }

    /// a(0) = delta(chi1)/2 * L(1-k, chi2).
    fn constant_term(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        cyclo_to_py(py, &self.inner.constant_term())
    }

    /// The T_p eigenvalue chi1(p) + chi2(p) p^{k-1} for p prime to the level.
    fn eigenvalue(&self, py: Python<'_>, p: u64) -> PyResult<Py<PyAny>> {
        let v = self.inner.hecke_eigenvalue(p).map_err(err)?;
        cyclo_to_py(py, &v)
    }

    /// sgn a(n) = chi2(n) for n coprime to the level.
    fn sign(&self, n: u64) -> PyResult<i32> {
        eisenforms::eisen::sign_at(self.inner.chi1(), self.inner.chi2(), self.inner.weight(), n)
            .map_err(err)
    }

    /// [a(0), a(1), ..., a(bound)].
    fn expansion(&self, py: Python<'_>, bound: u64) -> PyResult<Py<PyAny>> {
        let list = PyList::empty(py);
        list.append(self.constant_term(py)?)?;
        for n in 1..=bound {
            list.append(cyclo_to_py(py, &self.inner.coefficient(n))?)?;
        }
        list.into_py_any(py)
    }

    /// The q-expansion to the given bound in the library's JSON format.
    fn expansion_json(&self, bound: u64) -> String {
        self.inner.q_expansion(bound).to_json().to_string()
    }

    /// The quadratic twist E(chi1*theta, chi2*theta, k).
    fn twist(&self, theta: &PyCharacter) -> PyResult<Self> {
        self.inner
            .twist(&theta.inner)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    fn galois_conjugate(&self, t: i64) -> PyResult<Self> {
        self.inner
            .galois_conjugate(t)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    /// {"field": "rational" | "totally-real" | "cm", "degree": d}.
    fn coefficient_field(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let report = coefficient_field(&self.inner);
        let dict = PyDict::new(py);
        dict.set_item("field", report.classification.as_str())?;
        dict.set_item("degree", report.degree)?;
        dict.set_item("abelian", report.abelian)?;
        dict.set_item("contains_nebentypus_values", report.contains_nebentypus_values)?;
        dict.into_py_any(py)
    }

    fn __repr__(&self) -> String {
        if self.inner.is_quadratic() {
            format!("Newform({})", self.inner.descriptor())
        } else {
            format!(
                "Newform({}, {}, {})",
                self.inner.chi1().canonical_string(),
                self.inner.chi2().canonical_string(),
                self.inner.weight()
            )
        }
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// The signed divisor sum sigma^{k-1}_{(D1/.), (D2/.)}(n) as an exact int.
#[pyfunction]
fn sigma(d1: i64, d2: i64, k: u32, n: u64) -> PyResult<BigInt> {
    if k < 2 || n == 0 {
        return Err(err("need k >= 2 and n >= 1"));
    }
    let chi1 = DirichletCharacter::from_discriminant(d1).map_err(err)?;
    let chi2 = DirichletCharacter::from_discriminant(d2).map_err(err)?;
    Ok(sigma_int(&chi1, &chi2, k, n))
}

/// Empirical and exact sign densities of sigma_{(D1/.),(D2/.)} up to x.
#[pyfunction]
fn sign_density(py: Python<'_>, d1: i64, d2: i64, k: u32, x: u64) -> PyResult<Py<PyAny>> {
    let chi1 = DirichletCharacter::from_discriminant(d1).map_err(err)?;
    let chi2 = DirichletCharacter::from_discriminant(d2).map_err(err)?;
    let report = stats::sign_density(&chi1, &chi2, k, x).map_err(err)?;
    json_to_py(py, &report.to_json())
}

/// The least prime p coprime to the level with chi2(p) = -1, i.e. the first
/// negative coefficient index.
#[pyfunction]
fn first_negative(d1: i64, d2: i64, k: u32) -> PyResult<u64> {
    let chi1 = DirichletCharacter::from_discriminant(d1).map_err(err)?;
    let chi2 = DirichletCharacter::from_discriminant(d2).map_err(err)?;
    stats::first_negative(&chi1, &chi2, k).map_err(err)
}

/// Census of discriminant pairs realizing a sign pattern "p:eps,p:eps,...".
/// domain is "hyperbola" (|D1 D2| <= x) or "box" (first ceil(sqrt x)
/// discriminants per coordinate).
#[pyfunction]
#[pyo3(signature = (pattern, x, domain = "box", include_one = true))]
fn census(
    py: Python<'_>,
    pattern: &str,
    x: u64,
    domain: &str,
    include_one: bool,
) -> PyResult<Py<PyAny>> {
    let pattern = SignPattern::parse(pattern).map_err(err)?;
    let report = stats::census(&pattern, x, parse_domain(domain)?, include_one);
    json_to_py(py, &report.to_json())
}

/// The exact limiting proportion for a sign pattern.
#[pyfunction]
fn predicted_census(py: Python<'_>, pattern: &str) -> PyResult<Py<PyAny>> {
    let pattern = SignPattern::parse(pattern).map_err(err)?;
    rational_to_py(py, &stats::predicted_census(&pattern))
}

/// P(sign at p = eps) over discriminant pairs: p/(2p+2) for eps = +-1,
/// 1/(p+1) for eps = 0.
#[pyfunction]
fn prob_epsilon(py: Python<'_>, epsilon: i32, p: u64) -> PyResult<Py<PyAny>> {
    rational_to_py(py, &stats::prob_epsilon(epsilon, p).map_err(err)?)
}

/// The conjectural average first-negative prime, as a decimal string.
#[pyfunction]
#[pyo3(signature = (terms = 200, digits = 12))]
fn theta_constant(terms: usize, digits: usize) -> String {
    stats::theta_constant(terms, digits)
}

/// Average of the first-negative prime over discriminant pairs up to x.
#[pyfunction]
#[pyo3(signature = (x, domain = "box", include_one = true))]
fn average_eta(py: Python<'_>, x: u64, domain: &str, include_one: bool) -> PyResult<Py<PyAny>> {
    let report = stats::average_eta(x, parse_domain(domain)?, include_one);
    json_to_py(py, &report.to_json())
}

/// Chebyshev-race diagnostic: fraction of a log-spaced grid y <= x with
/// sum_{p <= y} chi2(p) < 0, plus the grid itself as CSV.
#[pyfunction]
#[pyo3(signature = (d, x, grid_points = 60))]
fn prime_race(py: Python<'_>, d: i64, x: u64, grid_points: usize) -> PyResult<Py<PyAny>> {
    let chi2 = DirichletCharacter::from_discriminant(d).map_err(err)?;
    let race = stats::prime_race(&chi2, x, grid_points).map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item("negative_fraction", rational_to_py(py, &race.negative_fraction)?)?;
    dict.set_item("csv", race.to_csv())?;
    dict.into_py_any(py)
}

/// Exact density of primes where the Hecke eigenvalues of f and g agree,
/// with the identical / twist-related / unrelated verdict.
#[pyfunction]
fn eigenvalue_agreement(py: Python<'_>, f: &PyNewform, g: &PyNewform) -> PyResult<Py<PyAny>> {
    let analysis = multone::eigenvalue_agreement_density(&f.inner, &g.inner).map_err(err)?;
    json_to_py(py, &analysis.to_json())
}

/// Exact density of primes where the eigenvalue signs of f and g agree.
#[pyfunction]
fn sign_agreement(py: Python<'_>, f: &PyNewform, g: &PyNewform) -> PyResult<Py<PyAny>> {
    let analysis = multone::sign_agreement_density(&f.inner, &g.inner).map_err(err)?;
    json_to_py(py, &analysis.to_json())
}

/// The quadratic character theta with g = f twisted by theta, when one
/// exists (certified at every residue class).
#[pyfunction]
fn detect_twist(f: &PyNewform, g: &PyNewform) -> Option<PyCharacter> {
    multone::detect_twist(&f.inner, &g.inner).map(|inner| PyCharacter { inner })
}

/// The shifted-newform basis of the weight-k Eisenstein space of the given
/// level and nebentypus, as (Newform, shift) pairs.
#[pyfunction]
fn basis(level: u64, chi: &PyCharacter, k: u32) -> PyResult<Vec<(PyNewform, u64)>> {
    let pairs = newform_basis(level, &chi.inner, k).map_err(err)?;
    Ok(pairs
        .into_iter()
        .map(|(e, d)| (PyNewform { inner: e }, d))
        .collect())
}

fn combination_from_terms(
    terms: Vec<(String, i64, i64, u32, u64)>,
    level: u64,
    chi: &PyCharacter,
    k: u32,
) -> PyResult<ShiftedNewformCombination> {
    let mut built = Vec::new();
    for (c, d1, d2, kk, d) in terms {
        let coeff = CyclotomicNumber::from_rational(parse_rational_arg(&c)?);
        let e = EisensteinNewform::from_discriminants(d1, d2, kk).map_err(err)?;
        built.push((coeff, e, d));
    }
    let nebentypus = chi.inner.induce(level).map_err(err)?;
    ShiftedNewformCombination::new(built, level, nebentypus, k).map_err(err)
}

/// Decompose a q-expansion [a(0), a(1), ...] (rationals as int or "p/q"
/// strings) in the space of the given level, nebentypus and weight.  Returns
/// the unique shifted-newform combination as a list of term dicts.
#[pyfunction]
fn decompose(
    py: Python<'_>,
    coefficients: Vec<String>,
    level: u64,
    chi: &PyCharacter,
    k: u32,
) -> PyResult<Py<PyAny>> {
    if coefficients.is_empty() {
        return Err(err("need at least the constant term a(0)"));
    }
    let parsed: Vec<CyclotomicNumber> = coefficients
        .iter()
        .map(|s| parse_rational_arg(s).map(CyclotomicNumber::from_rational))
        .collect::<PyResult<_>>()?;
    let nebentypus = chi.inner.induce(level).map_err(err)?;
    let expansion = QExpansion {
        constant: parsed[0].clone(),
        coeffs: parsed[1..].to_vec(),
        weight: k,
        level,
        nebentypus: nebentypus.clone(),
    };
    let comb = decomp::decompose(&expansion, level, &nebentypus, k).map_err(err)?;
    json_to_py(py, &comb.to_json())
}

/// Scan a rational shifted-newform combination for a coefficient below
/// -threshold.  Terms are (c, D1, D2, k, d) tuples.  Returns (n, a(n)) or
/// None; rejects combinations containing the all-positive newform.
#[pyfunction]
#[pyo3(signature = (terms, level, chi, k, threshold = "0", bound = 1_000_000, full = false))]
#[allow(clippy::too_many_arguments)]
fn nonneg_scan(
    py: Python<'_>,
    terms: Vec<(String, i64, i64, u32, u64)>,
    level: u64,
    chi: &PyCharacter,
    k: u32,
    threshold: &str,
    bound: u64,
    full: bool,
) -> PyResult<Py<PyAny>> {
    let comb = combination_from_terms(terms, level, chi, k)?;
    let threshold = parse_rational_arg(threshold)?;
    let hit = if full {
        nonnegativity_scan_full(&comb, &threshold, bound)
    } else {
        nonnegativity_scan(&comb, &threshold, bound)
    }
    .map_err(err)?;
    match hit {
        None => Ok(py.None()),
        Some((n, value)) => (n, rational_to_py(py, &value)?).into_py_any(py),
    }
}

#[pymodule]
fn eisenforms_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCharacter>()?;
    m.add_class::<PyNewform>()?;
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add_function(wrap_pyfunction!(sign_density, m)?)?;
    m.add_function(wrap_pyfunction!(first_negative, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_census, m)?)?;
    m.add_function(wrap_pyfunction!(prob_epsilon, m)?)?;
    m.add_function(wrap_pyfunction!(theta_constant, m)?)?;
    m.add_function(wrap_pyfunction!(average_eta, m)?)?;
    m.add_function(wrap_pyfunction!(prime_race, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalue_agreement, m)?)?;
    m.add_function(wrap_pyfunction!(sign_agreement, m)?)?;
    m.add_function(wrap_pyfunction!(detect_twist, m)?)?;
    m.add_function(wrap_pyfunction!(basis, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(nonneg_scan, m)?)?;
    Ok(())
}
