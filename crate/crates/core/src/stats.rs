//! Sign statistics for signed divisor sums: densities, the first negative
//! prime, discriminant-pair sign-pattern proportions and their limiting
//! products, the expected-first-negative-prime constant, and character-sum
//! prime races.
//!
//! Everything is counted exactly; decimals appear only when rendering.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::chars::DirichletCharacter;
use crate::decimal::decimal_string;
use crate::eisen::is_prime;
use crate::kronecker::{enumerate_fundamental, kronecker};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("pattern must list strictly increasing primes")]
    PatternNotIncreasing,
    #[error("pattern must be nonempty")]
    PatternEmpty,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("sign {0} is not one of -1, 0, 1")]
    BadSign(i32),
    #[error("chi2 must be non-principal: a principal character never changes sign")]
    PrincipalChi2,
    #[error("characters must be quadratic")]
    NotQuadratic,
    #[error("malformed pattern entry {0:?}, expected \"p:sign\"")]
    MalformedPattern(String),
}

/// All primes up to `n`, ascending.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p <= n {
        if sieve[p] {
            let mut j = p * p;
            while j <= n {
                sieve[j] = false;
                j += p;
            }
        }
        p += 1;
    }
    (2..=n as u64).filter(|&m| sieve[m as usize]).collect()
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut bound = 32u64.max(count as u64 * 16);
    loop {
        let ps = primes_up_to(bound);
        if ps.len() >= count {
            return ps[..count].to_vec();
        }
        bound *= 2;
    }
}

/// An ordered sign condition at finitely many primes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignPattern {
    entries: Vec<(u64, i32)>,
}

impl SignPattern {
    pub fn new(entries: Vec<(u64, i32)>) -> Result<Self, StatsError> {
        if entries.is_empty() {
            return Err(StatsError::PatternEmpty);
        }
        for &(p, e) in &entries {
            if !is_prime(p) {
                return Err(StatsError::NotPrime(p));
            }
            if !(-1..=1).contains(&e) {
                return Err(StatsError::BadSign(e));
            }
        }
        if !entries.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(StatsError::PatternNotIncreasing);
        }
        Ok(Self { entries })
    }

    /// Parse "3:-1" or "2:-1,3:1".
    pub fn parse(s: &str) -> Result<Self, StatsError> {
        let mut entries = Vec::new();
        for part in s.split(',') {
            let (p, e) = part
                .split_once(':')
                .ok_or_else(|| StatsError::MalformedPattern(part.to_string()))?;
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| StatsError::MalformedPattern(part.to_string()))?;
            let e: i32 = e
                .trim()
                .parse()
                .map_err(|_| StatsError::MalformedPattern(part.to_string()))?;
            entries.push((p, e));
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[(u64, i32)] {
        &self.entries
    }

    /// True iff the discriminant pair satisfies every entry under the sign
    /// rule: the sign at p is (D1/p) when p | D2, else (D2/p).
    pub fn matches(&self, d1: i64, d2: i64) -> bool {
        self.entries
            .iter()
            .all(|&(p, e)| pair_sign(d1, d2, p) == e)
    }
}

/// Sign of the eigenvalue of E((D1/.), (D2/.), k) at p, by the dominant-term
/// rule: (D2/p) when p does not divide D2, else (D1/p).
pub fn pair_sign(d1: i64, d2: i64, p: u64) -> i32 {
    if d2 % p as i64 == 0 {
        kronecker(d1, p as i64)
    } else {
        kronecker(d2, p as i64)
    }
}

/// An empirical count against an exact prediction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DensityReport {
    pub sample_size: u64,
    pub hits: u64,
    pub empirical: BigRational,
    pub predicted: BigRational,
}

impl DensityReport {
    pub fn new(sample_size: u64, hits: u64, predicted: BigRational) -> Self {
        let empirical = if sample_size == 0 {
            BigRational::zero()
        } else {
            BigRational::new(BigInt::from(hits), BigInt::from(sample_size))
        };
        Self { sample_size, hits, empirical, predicted }
    }

    pub fn abs_error(&self) -> BigRational {
        (&self.empirical - &self.predicted).abs()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "sample_size": self.sample_size,
            "hits": self.hits,
            "empirical": self.empirical.to_string(),
            "predicted": self.predicted.to_string(),
            "abs_error": decimal_string(&self.abs_error(), 30),
        })
    }

    pub fn csv_row(&self, label: &str) -> String {
        format!(
            "{label},{},{},{},{},{}",
            self.sample_size,
            self.hits,
            decimal_string(&self.empirical, 12),
            decimal_string(&self.predicted, 12),
            decimal_string(&self.abs_error(), 12),
        )
    }
}

/// Signed coefficient counts for a quadratic pair on n <= x, with both the
/// per-integer and the per-coprime-integer normalization.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignDensityReport {
    pub x: u64,
    pub level: u64,
    pub coprime_count: u64,
    pub positive: u64,
    pub negative: u64,
    pub predicted: BigRational,
}

impl SignDensityReport {
    pub fn negative_density_coprime(&self) -> BigRational {
        BigRational::new(BigInt::from(self.negative), BigInt::from(self.coprime_count))
    }

    pub fn positive_density_coprime(&self) -> BigRational {
        BigRational::new(BigInt::from(self.positive), BigInt::from(self.coprime_count))
    }

    pub fn negative_density_all(&self) -> BigRational {
        BigRational::new(BigInt::from(self.negative), BigInt::from(self.x))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "x": self.x,
            "level": self.level,
            "coprime_count": self.coprime_count,
            "positive": self.positive,
            "negative": self.negative,
            "negative_density_coprime": self.negative_density_coprime().to_string(),
            "negative_density_all": self.negative_density_all().to_string(),
            "predicted_coprime": self.predicted.to_string(),
        })
    }
}

/// Counts of sign(a(n)) = +-1 over n <= x coprime to the level. The sign
/// equals chi2(n) there, so the counts are exact character counts; the
/// limiting density in the coprime normalization is 1/2 each when chi2 is
/// non-principal.
pub fn sign_density(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    _k: u32,
    x: u64,
) -> Result<SignDensityReport, StatsError> {
    if !chi1.is_quadratic() || !chi2.is_quadratic() {
        return Err(StatsError::NotQuadratic);
    }
    let level = chi1.modulus() * chi2.modulus();
    let (mut pos, mut neg, mut coprime) = (0u64, 0u64, 0u64);
    for n in 1..=x {
        if gcd(n, level) != 1 {
            continue;
        }
        coprime += 1;
        match chi2.value_i32(n as i64) {
            1 => pos += 1,
            -1 => neg += 1,
            _ => unreachable!("quadratic character vanishes only off the coprime set"),
        }
    }
    Ok(SignDensityReport {
        x,
        level,
        coprime_count: coprime,
        positive: pos,
        negative: neg,
        predicted: BigRational::new(BigInt::one(), BigInt::from(2)),
    })
}

/// The smallest prime p coprime to the level with chi2(p) = -1; this is
/// where the coefficient sequence first becomes negative.
pub fn first_negative(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    _k: u32,
) -> Result<u64, StatsError> {
    if !chi1.is_quadratic() || !chi2.is_quadratic() {
        return Err(StatsError::NotQuadratic);
    }
    if chi2.is_principal() {
        return Err(StatsError::PrincipalChi2);
    }
    let level = chi1.modulus() * chi2.modulus();
    let mut bound = 64u64;
    loop {
        for p in primes_up_to(bound) {
            if gcd(p, level) == 1 && chi2.value_i32(p as i64) == -1 {
                return Ok(p);
            }
        }
        bound *= 2;
    }
}

/// Worst case of the first-negative prime over fundamental discriminants.
#[derive(Clone, Debug)]
pub struct ExponentScan {
    pub x: u64,
    pub max_ratio: f64,
    pub worst_d: i64,
    pub worst_p: u64,
    /// log p0 / log D for the Burgess-type comparison 1/(4 sqrt e) = 0.1516...
    pub burgess_exponent: f64,
}

/// max over fundamental 1 < D <= x of log(p0) / log(D), where p0 is the
/// least prime with (D/p) = -1.
pub fn first_negative_exponent_scan(x: u64) -> ExponentScan {
    let primes = first_primes(64);
    let discs = enumerate_fundamental(x);
    let per_disc = |&d: &i64| -> (f64, i64, u64) {
        let p0 = primes
            .iter()
            .copied()
            .find(|&p| kronecker(d, p as i64) == -1)
            .expect("a non-residue prime exists among the first 64 primes");
        ((p0 as f64).ln() / (d as f64).ln(), d, p0)
    };
    let (max_ratio, worst_d, worst_p) = discs
        .par_iter()
        .map(per_disc)
        .reduce(
            || (f64::NEG_INFINITY, 0, 0),
            |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    ExponentScan {
        x,
        max_ratio,
        worst_d,
        worst_p,
        burgess_exponent: 1.0 / (4.0 * (1.0f64).exp().sqrt()),
    }
}

/// Proportion of fundamental discriminants with (D/p) = epsilon:
/// p/(2p+2) for epsilon = +-1 and 1/(p+1) for epsilon = 0.
pub fn prob_epsilon(epsilon: i32, p: u64) -> Result<BigRational, StatsError> {
    if !is_prime(p) {
        return Err(StatsError::NotPrime(p));
    }
    if !(-1..=1).contains(&epsilon) {
        return Err(StatsError::BadSign(epsilon));
    }
    Ok(if epsilon == 0 {
        BigRational::new(BigInt::one(), BigInt::from(p + 1))
    } else {
        BigRational::new(BigInt::from(p), BigInt::from(2 * p + 2))
    })
}

/// Empirical counterpart of `prob_epsilon` over fundamental 1 < D <= x.
pub fn prob_epsilon_empirical(epsilon: i32, p: u64, x: u64) -> Result<DensityReport, StatsError> {
    let predicted = prob_epsilon(epsilon, p)?;
    let discs = enumerate_fundamental(x);
    let hits = discs
        .par_iter()
        .filter(|&&d| kronecker(d, p as i64) == epsilon)
        .count() as u64;
    Ok(DensityReport::new(discs.len() as u64, hits, predicted))
}

/// The limiting proportion of discriminant pairs realizing a sign pattern:
/// product over entries of 1/(p+1)^2 for sign 0 and p(p+2)/(2(p+1)^2)
/// otherwise.
pub fn predicted_census(pattern: &SignPattern) -> BigRational {
    let mut out = BigRational::one();
    for &(p, e) in pattern.entries() {
        let p = BigInt::from(p);
        let sq = (&p + 1) * (&p + 1);
        let factor = if e == 0 {
            BigRational::new(BigInt::one(), sq)
        } else {
            BigRational::new(&p * (&p + 2), BigInt::from(2) * sq)
        };
        out *= factor;
    }
    out
}

/// How pairs (D1, D2) of real-quadratic fundamental discriminants are
/// enumerated for a census with pair budget x.
///
/// `Hyperbola` is the region D1*D2 <= x; its convergence to the limiting
/// proportions is logarithmically slow for nonzero signs because small D2
/// are heavily over-weighted. `Box` draws both coordinates from the first m
/// discriminants with m^2 >= x, which has the same limit and converges at a
/// power rate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairDomain {
    Hyperbola,
    Box,
}

/// The discriminant list for one census coordinate.
fn census_discriminants(limit: u64, include_one: bool) -> Vec<i64> {
    let mut out = if include_one { vec![1] } else { Vec::new() };
    out.extend(enumerate_fundamental(limit));
    out
}

/// Exact enumeration of discriminant pairs against a sign pattern.
///
/// Parallelized over blocks of D1 with a commutative integer-counter merge,
/// so the result is identical for every thread count.
pub fn census(
    pattern: &SignPattern,
    x: u64,
    domain: PairDomain,
    include_one: bool,
) -> DensityReport {
    let predicted = predicted_census(pattern);
    let (total, hits) = match domain {
        PairDomain::Hyperbola => {
            let discs = census_discriminants(x, include_one);
            discs
                .par_iter()
                .map(|&d1| {
                    let cap = x / d1 as u64;
                    let mut total = 0u64;
                    let mut hits = 0u64;
                    for &d2 in &discs {
                        if d2 as u64 > cap {
                            break;
                        }
                        total += 1;
                        if pattern.matches(d1, d2) {
                            hits += 1;
                        }
                    }
                    (total, hits)
                })
                .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
        }
        PairDomain::Box => {
            let side = (x as f64).sqrt().ceil() as usize;
            let mut cap = 64u64.max(4 * side as u64);
            let discs = loop {
                let d = census_discriminants(cap, include_one);
                if d.len() >= side {
                    break d[..side].to_vec();
                }
                cap *= 2;
            };
            discs
                .par_iter()
                .map(|&d1| {
                    let mut hits = 0u64;
                    for &d2 in &discs {
                        if pattern.matches(d1, d2) {
                            hits += 1;
                        }
                    }
                    (discs.len() as u64, hits)
                })
                .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
        }
    };
    DensityReport::new(total, hits, predicted)
}

/// Partial sums of the expected first negative prime:
/// sum over primes p_l of p_l^2 (p_l+2) / (2 (p_l+1)^2) times the product
/// over earlier primes of (2 + p (p+2)) / (2 (p+1)^2).
pub fn theta_constant_exact(terms: usize) -> BigRational {
    assert!(terms >= 1);
    let mut total = BigRational::zero();
    let mut prefix = BigRational::one(); // P(no earlier prime had sign -1)
    for p in first_primes(terms) {
        let p = BigInt::from(p);
        let sq2 = BigRational::from_integer(BigInt::from(2) * (&p + 1) * (&p + 1));
        let term = BigRational::from_integer(&p * &p * (&p + 2)) / &sq2;
        total += &prefix * &term;
        prefix *= BigRational::from_integer(BigInt::from(2) + &p * (&p + 2)) / &sq2;
    }
    total
}

/// `theta_constant_exact` rendered to `digits` decimal places.
pub fn theta_constant(terms: usize, digits: usize) -> String {
    decimal_string(&theta_constant_exact(terms), digits)
}

/// Mean first negative prime over discriminant pairs.
#[derive(Clone, Debug)]
pub struct EtaReport {
    pub x: u64,
    pub pair_count: u64,
    /// Pairs whose first negative prime lies beyond the scan bound; counted,
    /// reported, and excluded from the mean.
    pub exhausted: u64,
    pub mean: BigRational,
    pub scan_primes: usize,
}

impl EtaReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "x": self.x,
            "pair_count": self.pair_count,
            "exhausted": self.exhausted,
            "mean": decimal_string(&self.mean, 12),
            "mean_exact": self.mean.to_string(),
            "scan_primes": self.scan_primes,
        })
    }
}

/// Average over pairs (D1, D2) of the least prime where the pair's sign rule
/// gives -1, scanning the first 25 primes.
pub fn average_eta(x: u64, domain: PairDomain, include_one: bool) -> EtaReport {
    const SCAN_PRIMES: usize = 25;
    let primes = first_primes(SCAN_PRIMES);
    let eta = |d1: i64, d2: i64| -> Option<u64> {
        primes
            .iter()
            .copied()
            .find(|&p| pair_sign(d1, d2, p) == -1)
    };
    // (pair count, exhausted count, sum of eta over finished pairs)
    let (pairs, exhausted, sum) = match domain {
        PairDomain::Hyperbola => {
            let discs = census_discriminants(x, include_one);
            discs
                .par_iter()
                .map(|&d1| {
                    let cap = x / d1 as u64;
                    let mut acc = (0u64, 0u64, 0u64);
                    for &d2 in &discs {
                        if d2 as u64 > cap {
                            break;
                        }
                        acc.0 += 1;
                        match eta(d1, d2) {
                            Some(p) => acc.2 += p,
                            None => acc.1 += 1,
                        }
                    }
                    acc
                })
                .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2))
        }
        PairDomain::Box => {
            let side = (x as f64).sqrt().ceil() as usize;
            let mut cap = 64u64.max(4 * side as u64);
            let discs = loop {
                let d = census_discriminants(cap, include_one);
                if d.len() >= side {
                    break d[..side].to_vec();
                }
                cap *= 2;
            };
            discs
                .par_iter()
                .map(|&d1| {
                    let mut acc = (0u64, 0u64, 0u64);
                    for &d2 in &discs {
                        acc.0 += 1;
                        match eta(d1, d2) {
                            Some(p) => acc.2 += p,
                            None => acc.1 += 1,
                        }
                    }
                    acc
                })
                .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2))
        }
    };
    let finished = pairs - exhausted;
    let mean = if finished == 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::from(sum), BigInt::from(finished))
    };
    EtaReport { x, pair_count: pairs, exhausted, mean, scan_primes: SCAN_PRIMES }
}

/// A character-sum prime race: S(y) = sum over primes p <= y of chi2(p) at a
/// log-spaced grid, plus the fraction of grid points with S(y) < 0.
#[derive(Clone, Debug)]
pub struct PrimeRace {
    pub points: Vec<(u64, i64)>,
    pub negative_fraction: BigRational,
}

impl PrimeRace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("y,S\n");
        for &(y, s) in &self.points {
            out.push_str(&format!("{y},{s}\n"));
        }
        out
    }
}

pub fn prime_race(
    chi2: &DirichletCharacter,
    x: u64,
    grid_points: usize,
) -> Result<PrimeRace, StatsError> {
    if !chi2.is_quadratic() {
        return Err(StatsError::NotQuadratic);
    }
    if chi2.is_principal() {
        return Err(StatsError::PrincipalChi2);
    }
    assert!(x >= 2 && grid_points >= 1);
    let mut grid: Vec<u64> = (1..=grid_points)
        .map(|j| (x as f64).powf(j as f64 / grid_points as f64).round() as u64)
        .filter(|&y| y >= 2)
        .collect();
    grid.dedup();
    let primes = primes_up_to(x);
    let mut points = Vec::with_capacity(grid.len());
    let mut s: i64 = 0;
    let mut idx = 0usize;
    for &y in &grid {
        while idx < primes.len() && primes[idx] <= y {
            s += chi2.value_i32(primes[idx] as i64) as i64;
            idx += 1;
        }
        points.push((y, s));
    }
    let neg = points.iter().filter(|&&(_, s)| s < 0).count();
    Ok(PrimeRace {
        negative_fraction: BigRational::new(BigInt::from(neg), BigInt::from(points.len())),
        points,
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
