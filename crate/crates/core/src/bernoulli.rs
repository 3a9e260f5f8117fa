//! Bernoulli numbers, generalized Bernoulli numbers and special L-values.
//!
//! L(1-k, chi) = -B_{k,chi}/k with the generalized Bernoulli number obtained
//! from the finite sum B_{k,chi} = f^{k-1} sum_{a=1}^{f} chi(a) B_k(a/f)
//! over the residues mod the conductor f, all in exact arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::chars::DirichletCharacter;
use crate::cyclo::CyclotomicNumber;

/// B_0, ..., B_n with the convention B_1 = -1/2.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut s = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (j, bj) in b.iter().enumerate() {
            s += bj * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m as u64 + 1)));
    }
    b
}

/// The Bernoulli polynomial B_k(x) evaluated at a rational point.
pub fn bernoulli_polynomial(k: u32, x: &BigRational) -> BigRational {
    let b = bernoulli_numbers(k as usize);
    let mut binom = BigInt::one();
    let mut xpow = BigRational::one();
    // accumulate C(k,j) B_j x^{k-j} from j = k down to 0 so x powers build up
    let mut total = BigRational::zero();
    for j in (0..=k).rev() {
        total += &b[j as usize] * BigRational::from_integer(binom.clone()) * &xpow;
        if j > 0 {
            binom = binom * BigInt::from(j) / BigInt::from(k - j + 1);
            xpow *= x;
        }
    }
    total
}

/// The generalized Bernoulli number B_{k,chi}, attached to the primitive
/// character inducing chi. Cyclotomic in general, rational for real chi.
pub fn generalized_bernoulli(k: u32, chi: &DirichletCharacter) -> CyclotomicNumber {
    let prim = chi.primitive_part();
    let f = prim.modulus();
    let fk = BigRational::from_integer(BigInt::from(f).pow(k - 1));
    let mut total = CyclotomicNumber::zero();
    for a in 1..=f {
        let v = prim.value_cyclotomic(a as i64);
        if v.is_zero() {
            continue;
        }
        let x = BigRational::new(BigInt::from(a), BigInt::from(f));
        total = total + v.scale(&(bernoulli_polynomial(k, &x) * &fk));
    }
    total
}

/// L(1-k, chi) = -B_{k,chi}/k, exact.
pub fn l_value_at_negative_integers(k: u32, chi: &DirichletCharacter) -> CyclotomicNumber {
    assert!(k >= 1);
    let scale = -BigRational::new(BigInt::one(), BigInt::from(k));
    generalized_bernoulli(k, chi).scale(&scale)
}
