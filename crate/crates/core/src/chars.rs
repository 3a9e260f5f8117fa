//! Exact Dirichlet characters.
//!
//! A character mod N is stored as a dense table of root-of-unity values on
//! the residues coprime to N. All operations (products, induction,
//! primitive part, Galois conjugation) are exact.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::cyclo::{CyclotomicNumber, RootOfUnity};
use crate::kronecker::{is_fundamental, kronecker};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharError {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("conductor {conductor} does not divide modulus {modulus}")]
    ConductorNotDividing { conductor: u64, modulus: u64 },
    #[error("{t} is not coprime to the character order {order}")]
    ExponentNotCoprime { t: i64, order: u64 },
    #[error("value table is not completely multiplicative at ({a}, {b})")]
    NotMultiplicative { a: u64, b: u64 },
    #[error("value table has wrong support at residue {0}")]
    WrongSupport(u64),
}

/// An exact Dirichlet character mod N.
#[derive(Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    /// Value at each residue 0..N; `None` encodes the value 0 on residues
    /// sharing a factor with N. For modulus 1 the table is `[Some(1)]`.
    values: Vec<Option<RootOfUnity>>,
    conductor: u64,
    order: u64,
}

impl DirichletCharacter {
    fn build(modulus: u64, values: Vec<Option<RootOfUnity>>) -> Self {
        let order = values
            .iter()
            .flatten()
            .fold(1u64, |acc, z| acc.lcm(&z.order()));
        let conductor = compute_conductor(modulus, &values);
        Self { modulus, values, conductor, order }
    }

    /// Validates complete multiplicativity and support before construction.
    pub fn from_values(
        modulus: u64,
        values: Vec<Option<RootOfUnity>>,
    ) -> Result<Self, CharError> {
        assert!(modulus >= 1 && values.len() == modulus as usize);
        if modulus == 1 {
            return Ok(Self::principal(1));
        }
        for r in 0..modulus {
            let coprime = r.gcd(&modulus) == 1;
            if coprime != values[r as usize].is_some() {
                return Err(CharError::WrongSupport(r));
            }
        }
        for a in 0..modulus {
            for b in a..modulus {
                let ab = (a * b) % modulus;
                match (&values[a as usize], &values[b as usize]) {
                    (Some(x), Some(y)) => {
                        if values[ab as usize] != Some(x.mul(*y)) {
                            return Err(CharError::NotMultiplicative { a, b });
                        }
                    }
                    _ => {
                        if values[ab as usize].is_some() {
                            return Err(CharError::NotMultiplicative { a, b });
                        }
                    }
                }
            }
        }
        Ok(Self::build(modulus, values))
    }

    /// The principal character mod N.
    pub fn principal(modulus: u64) -> Self {
        assert!(modulus >= 1);
        if modulus == 1 {
            return Self {
                modulus: 1,
                values: vec![Some(RootOfUnity::one())],
                conductor: 1,
                order: 1,
            };
        }
        let values = (0..modulus)
            .map(|r| (r.gcd(&modulus) == 1).then(RootOfUnity::one))
            .collect();
        Self::build(modulus, values)
    }

    /// The primitive quadratic character n -> (D/n) of conductor |D|.
    pub fn from_discriminant(d: i64) -> Result<Self, CharError> {
        if !is_fundamental(d) {
            return Err(CharError::NotFundamental(d));
        }
        if d == 1 {
            return Ok(Self::principal(1));
        }
        let modulus = d.unsigned_abs();
        let values = (0..modulus)
            .map(|r| match kronecker(d, r as i64) {
                1 => Some(RootOfUnity::one()),
                -1 => Some(RootOfUnity::minus_one()),
                _ => None,
            })
            .collect();
        Ok(Self::build(modulus, values))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// The value at n, as a root of unity; `None` encodes 0.
    pub fn value(&self, n: i64) -> Option<RootOfUnity> {
        if self.modulus == 1 {
            return Some(RootOfUnity::one());
        }
        let r = n.rem_euclid(self.modulus as i64) as usize;
        self.values[r]
    }

    /// The value at n in {-1, 0, 1}; panics unless the character is quadratic.
    pub fn value_i32(&self, n: i64) -> i32 {
        match self.value(n) {
            None => 0,
            Some(z) => z.as_rational().expect("character is not quadratic"),
        }
    }

    pub fn value_cyclotomic(&self, n: i64) -> CyclotomicNumber {
        match self.value(n) {
            None => CyclotomicNumber::zero(),
            Some(z) => CyclotomicNumber::from_root(z),
        }
    }

    pub fn is_principal(&self) -> bool {
        self.conductor == 1
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    /// True iff every value lies in {-1, 0, 1}.
    pub fn is_quadratic(&self) -> bool {
        self.order <= 2
    }

    /// chi(-1), always +-1.
    pub fn parity(&self) -> i32 {
        self.value(-1)
            .expect("-1 is coprime to every modulus")
            .as_rational()
            .expect("chi(-1) is a square root of unity")
    }

    /// The fundamental discriminant of a primitive quadratic character.
    pub fn discriminant(&self) -> Option<i64> {
        if !self.is_quadratic() || !self.is_primitive() {
            return None;
        }
        let d = if self.parity() == 1 {
            self.conductor as i64
        } else {
            -(self.conductor as i64)
        };
        debug_assert!(is_fundamental(d));
        Some(d)
    }

    /// Pointwise product, as a character modulo lcm of the moduli.
    pub fn multiply(&self, other: &Self) -> Self {
        let m = self.modulus.lcm(&other.modulus);
        if m == 1 {
            return Self::principal(1);
        }
        let values = (0..m)
            .map(|r| {
                if r.gcd(&m) != 1 {
                    return None;
                }
                let x = self.value(r as i64).expect("coprime to lcm implies coprime to N");
                let y = other.value(r as i64).expect("coprime to lcm implies coprime to M");
                Some(x.mul(y))
            })
            .collect();
        Self::build(m, values)
    }

    /// The character mod M agreeing with this one on residues coprime to M.
    pub fn induce(&self, m: u64) -> Result<Self, CharError> {
        if m % self.conductor != 0 {
            return Err(CharError::ConductorNotDividing {
                conductor: self.conductor,
                modulus: m,
            });
        }
        let prim = self.primitive_part();
        if m == 1 {
            return Ok(prim);
        }
        let values = (0..m)
            .map(|r| {
                if r.gcd(&m) != 1 {
                    None
                } else {
                    prim.value(r as i64)
                }
            })
            .collect();
        Ok(Self::build(m, values))
    }

    /// The unique primitive character inducing this one.
    pub fn primitive_part(&self) -> Self {
        let f = self.conductor;
        if f == self.modulus {
            return self.clone();
        }
        if f == 1 {
            return Self::principal(1);
        }
        let values = (0..f)
            .map(|r| {
                if r.gcd(&f) != 1 {
                    return None;
                }
                // lift r to a residue coprime to the full modulus
                let mut a = r;
                while a.gcd(&self.modulus) != 1 {
                    a += f;
                }
                self.value(a as i64)
            })
            .collect();
        Self::build(f, values)
    }

    /// The Galois conjugate g -> chi(g)^t, for t coprime to the order.
    pub fn galois_conjugate(&self, t: i64) -> Result<Self, CharError> {
        if t.rem_euclid(self.order as i64).gcd(&(self.order as i64)) != 1 {
            return Err(CharError::ExponentNotCoprime { t, order: self.order });
        }
        let values = self.values.iter().map(|v| v.map(|z| z.pow(t))).collect();
        Ok(Self::build(self.modulus, values))
    }

    /// Canonical text form: "disc:D" for primitive quadratic characters,
    /// "mod:N:[(r,m,j),...]" otherwise.
    pub fn canonical_string(&self) -> String {
        if let Some(d) = self.discriminant() {
            return format!("disc:{d}");
        }
        let entries: Vec<String> = (0..self.modulus)
            .filter_map(|r| {
                self.values[r as usize]
                    .map(|z| format!("({},{},{})", r, z.order(), z.exponent()))
            })
            .collect();
        format!("mod:{}:[{}]", self.modulus, entries.join(","))
    }

    pub fn parse_canonical(s: &str) -> Result<Self, String> {
        if let Some(d) = s.strip_prefix("disc:") {
            let d: i64 = d.parse().map_err(|e| format!("bad discriminant: {e}"))?;
            return Self::from_discriminant(d).map_err(|e| e.to_string());
        }
        let rest = s.strip_prefix("mod:").ok_or("expected disc: or mod: prefix")?;
        let (n, table) = rest.split_once(':').ok_or("expected mod:N:[...]")?;
        let n: u64 = n.parse().map_err(|e| format!("bad modulus: {e}"))?;
        let table = table
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or("expected bracketed value list")?;
        let mut values = vec![None; n.max(1) as usize];
        if n == 1 {
            values[0] = Some(RootOfUnity::one());
        }
        for entry in table.split("),").filter(|e| !e.is_empty()) {
            let entry = entry.trim_start_matches('(').trim_end_matches(')');
            let parts: Vec<&str> = entry.split(',').collect();
            if parts.len() != 3 {
                return Err(format!("bad value entry ({entry})"));
            }
            let r: u64 = parts[0].trim().parse().map_err(|e| format!("bad residue: {e}"))?;
            let m: u64 = parts[1].trim().parse().map_err(|e| format!("bad order: {e}"))?;
            let j: u64 = parts[2].trim().parse().map_err(|e| format!("bad exponent: {e}"))?;
            if r >= n {
                return Err(format!("residue {r} out of range for modulus {n}"));
            }
            values[r as usize] = Some(RootOfUnity::new(m, j));
        }
        Self::from_values(n, values).map_err(|e| e.to_string())
    }

    /// Every Dirichlet character mod N, in a deterministic order.
    pub fn all_mod(n: u64) -> Vec<Self> {
        if n == 1 {
            return vec![Self::principal(1)];
        }
        // generators of (Z/NZ)^* via CRT over the prime power factors
        let factors = factorize(n);
        let mut generators: Vec<(u64, u64)> = Vec::new(); // (generator mod N, order)
        for &(p, a) in &factors {
            let pa = p.pow(a);
            for (g, ord) in unit_group_generators(p, a) {
                // lift g mod p^a to a residue mod N that is 1 mod the other factors
                let lifted = crt_lift(g, pa, n);
                generators.push((lifted, ord));
            }
        }
        // discrete logs of every coprime residue with respect to the generators
        let orders: Vec<u64> = generators.iter().map(|&(_, o)| o).collect();
        let mut logs: Vec<Option<Vec<u64>>> = vec![None; n as usize];
        let mut exps = vec![0u64; generators.len()];
        'fill: loop {
            let mut r: u64 = 1;
            for (i, &(g, _)) in generators.iter().enumerate() {
                r = r * pow_mod(g, exps[i], n) % n;
            }
            logs[r as usize] = Some(exps.clone());
            // odometer increment
            for i in 0..exps.len() {
                exps[i] += 1;
                if exps[i] < orders[i] {
                    continue 'fill;
                }
                exps[i] = 0;
            }
            break;
        }
        debug_assert_eq!(
            logs.iter().filter(|l| l.is_some()).count() as u64,
            euler_phi(n)
        );
        // one character per exponent tuple
        let mut chars = Vec::new();
        let mut cexp = vec![0u64; generators.len()];
        'chars: loop {
            let values: Vec<Option<RootOfUnity>> = (0..n)
                .map(|r| {
                    logs[r as usize].as_ref().map(|ls| {
                        let mut v = RootOfUnity::one();
                        for (i, &l) in ls.iter().enumerate() {
                            v = v.mul(RootOfUnity::new(orders[i], cexp[i] * l % orders[i]));
                        }
                        v
                    })
                })
                .collect();
            chars.push(Self::build(n, values));
            for i in 0..cexp.len() {
                cexp[i] += 1;
                if cexp[i] < orders[i] {
                    continue 'chars;
                }
                cexp[i] = 0;
            }
            break;
        }
        chars
    }

    /// Every primitive character mod N.
    pub fn primitive_mod(n: u64) -> Vec<Self> {
        Self::all_mod(n).into_iter().filter(|c| c.is_primitive()).collect()
    }
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DirichletCharacter({}, cond {}, order {})",
            self.canonical_string(),
            self.conductor,
            self.order
        )
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_string())
    }
}

/// Smallest f | N with chi(a) = 1 for every a = 1 mod f coprime to N.
fn compute_conductor(modulus: u64, values: &[Option<RootOfUnity>]) -> u64 {
    if modulus == 1 {
        return 1;
    }
    'div: for f in divisors(modulus) {
        let mut a = 1 + f;
        while a <= modulus {
            if a.gcd(&modulus) == 1 && values[(a % modulus) as usize] != Some(RootOfUnity::one())
            {
                continue 'div;
            }
            a += f;
        }
        return f;
    }
    modulus
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut a = 0;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(1, |acc, (p, a)| acc * (p - 1) * p.pow(a - 1))
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Generators (with their orders) of the unit group mod p^a.
fn unit_group_generators(p: u64, a: u32) -> Vec<(u64, u64)> {
    let pa = p.pow(a);
    if p == 2 {
        return match a {
            1 => vec![],
            2 => vec![(3, 2)],
            _ => vec![(pa - 1, 2), (5, pa / 4)],
        };
    }
    let phi = (p - 1) * p.pow(a - 1);
    // a primitive root mod p lifts to p^a unless its (p-1)th power is 1 mod p^2
    let mut g = (2..p)
        .find(|&g| multiplicative_order(g, p) == p - 1)
        .expect("primitive root exists mod every odd prime");
    if a > 1 && pow_mod(g, p - 1, p * p) == 1 {
        g += p;
    }
    debug_assert_eq!(multiplicative_order(g % pa, pa), phi);
    vec![(g % pa, phi)]
}

fn multiplicative_order(g: u64, m: u64) -> u64 {
    let mut x = g % m;
    let mut k = 1;
    while x != 1 {
        x = x * g % m;
        k += 1;
    }
    k
}

/// Residue mod n that is g mod pa and 1 mod n/pa (pa || n).
fn crt_lift(g: u64, pa: u64, n: u64) -> u64 {
    let q = n / pa;
    if q == 1 {
        return g % n;
    }
    (0..q)
        .map(|t| g + t * pa)
        .find(|&x| x % q == 1)
        .expect("CRT lift exists for coprime factors")
        % n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_from_discriminant_values() {
        let chi = DirichletCharacter::from_discriminant(5).unwrap();
        assert_eq!(
            (1..5).map(|r| chi.value_i32(r)).collect::<Vec<_>>(),
            vec![1, -1, -1, 1]
        );
        assert_eq!(chi.conductor(), 5);
        assert!(chi.is_primitive() && chi.is_quadratic());

        let chi8 = DirichletCharacter::from_discriminant(8).unwrap();
        assert_eq!(chi8.value_i32(3), -1);
        assert_eq!(chi8.value_i32(7), 1);

        let one = DirichletCharacter::from_discriminant(1).unwrap();
        assert_eq!(one.modulus(), 1);
        assert!(one.is_principal());

        assert_eq!(
            DirichletCharacter::from_discriminant(9),
            Err(CharError::NotFundamental(9))
        );
    }

    #[test]
    fn parity_and_principal() {
        assert_eq!(DirichletCharacter::from_discriminant(5).unwrap().parity(), 1);
        assert_eq!(DirichletCharacter::from_discriminant(-3).unwrap().parity(), -1);
        assert_eq!(DirichletCharacter::principal(1).parity(), 1);
        assert!(!DirichletCharacter::from_discriminant(8).unwrap().is_principal());
    }

    #[test]
    fn products() {
        let chi5 = DirichletCharacter::from_discriminant(5).unwrap();
        let chi8 = DirichletCharacter::from_discriminant(8).unwrap();
        // square of a quadratic character is principal
        let sq = chi5.multiply(&chi5);
        assert!(sq.is_principal());
        assert_eq!(sq.modulus(), 5);
        // (5/.)(8/.) = (40/.)
        let prod = chi5.multiply(&chi8);
        let chi40 = DirichletCharacter::from_discriminant(40).unwrap();
        assert_eq!(prod, chi40);
        // identity: chi * principal mod 1
        assert_eq!(chi5.multiply(&DirichletCharacter::principal(1)), chi5);
    }

    #[test]
    fn induction_round_trips() {
        let chi5 = DirichletCharacter::from_discriminant(5).unwrap();
        let ind = chi5.induce(15).unwrap();
        assert_eq!(ind.modulus(), 15);
        assert_eq!(ind.conductor(), 5);
        assert_eq!(ind.primitive_part(), chi5);

        let p6 = DirichletCharacter::principal(1).induce(6).unwrap();
        assert_eq!(p6, DirichletCharacter::principal(6));

        assert_eq!(
            DirichletCharacter::principal(12).primitive_part(),
            DirichletCharacter::principal(1)
        );

        assert!(chi5.induce(12).is_err());
    }

    #[test]
    fn character_group_structure() {
        for n in [1u64, 2, 3, 4, 5, 8, 12, 15, 16, 21, 24, 40] {
            let chars = DirichletCharacter::all_mod(n);
            assert_eq!(chars.len() as u64, euler_phi(n), "group size mod {n}");
            // multiplicativity on every character
            for chi in &chars {
                for a in 1..n.max(2) {
                    for b in 1..n.max(2) {
                        let ab = chi.value((a * b) as i64);
                        let expect = match (chi.value(a as i64), chi.value(b as i64)) {
                            (Some(x), Some(y)) => Some(x.mul(y)),
                            _ => None,
                        };
                        assert_eq!(ab, expect, "chi mod {n} at {a},{b}");
                    }
                }
            }
            // orthogonality: non-principal characters sum to zero over a period
            for chi in &chars {
                if chi.is_principal() {
                    continue;
                }
                let mut s = CyclotomicNumber::zero();
                for r in 1..=n {
                    s = s + chi.value_cyclotomic(r as i64);
                }
                assert!(s.is_zero(), "orthogonality fails mod {n}");
            }
        }
    }

    #[test]
    fn primitive_counts() {
        // number of primitive characters mod n for small n (0 when n = 2 mod 4)
        assert_eq!(DirichletCharacter::primitive_mod(1).len(), 1);
        assert_eq!(DirichletCharacter::primitive_mod(2).len(), 0);
        assert_eq!(DirichletCharacter::primitive_mod(3).len(), 1);
        assert_eq!(DirichletCharacter::primitive_mod(4).len(), 1);
        assert_eq!(DirichletCharacter::primitive_mod(5).len(), 3);
        assert_eq!(DirichletCharacter::primitive_mod(8).len(), 2);
    }

    #[test]
    fn galois_conjugation() {
        // quadratic characters are fixed
        let chi8 = DirichletCharacter::from_discriminant(8).unwrap();
        assert_eq!(chi8.galois_conjugate(3).unwrap(), chi8);
        // an order-4 character mod 5: chi(2) = i goes to -i under t = 3
        let chi = DirichletCharacter::all_mod(5)
            .into_iter()
            .find(|c| c.order() == 4 && c.value(2) == Some(RootOfUnity::new(4, 1)))
            .expect("order-4 character with chi(2) = i exists mod 5");
        let conj = chi.galois_conjugate(3).unwrap();
        assert_eq!(conj.value(2), Some(RootOfUnity::new(4, 3)));
        assert_eq!(chi.galois_conjugate(1).unwrap(), chi);
        // composition law
        let a = chi.galois_conjugate(3).unwrap().galois_conjugate(3).unwrap();
        assert_eq!(a, chi.galois_conjugate(9).unwrap());
        assert!(chi.galois_conjugate(2).is_err());
    }

    #[test]
    fn canonical_strings_round_trip() {
        for d in [-8i64, -3, 1, 5, 8, 40] {
            let chi = DirichletCharacter::from_discriminant(d).unwrap();
            assert_eq!(chi.canonical_string(), format!("disc:{d}"));
            assert_eq!(DirichletCharacter::parse_canonical(&chi.canonical_string()).unwrap(), chi);
        }
        for chi in DirichletCharacter::all_mod(5) {
            let parsed = DirichletCharacter::parse_canonical(&chi.canonical_string()).unwrap();
            assert_eq!(parsed, chi);
        }
    }

    #[test]
    fn discriminant_of_primitive_quadratic() {
        for d in [-20i64, -8, -4, -3, 5, 8, 12, 13, 40] {
            let chi = DirichletCharacter::from_discriminant(d).unwrap();
            assert_eq!(chi.discriminant(), Some(d));
        }
        assert_eq!(DirichletCharacter::principal(6).discriminant(), None);
    }
}
