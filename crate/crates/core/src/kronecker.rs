//! Kronecker symbols and fundamental discriminants.
//!
//! The Kronecker symbol (D/n) is the completely multiplicative extension of
//! the Legendre symbol to all integers n, with the usual conventions at
//! n = 2, n = -1 and n = 0. For a fundamental discriminant D it is the
//! primitive quadratic character of conductor |D|.

/// Full Kronecker symbol (d/n), defined for all integer pairs.
///
/// Conventions: (d/2) is 0 for even d and otherwise +1 for d = ±1 mod 8,
/// -1 for d = ±3 mod 8; (d/-1) is the sign of d; (d/0) is 1 iff d = ±1.
pub fn kronecker(d: i64, n: i64) -> i32 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result: i32 = 1;
    if n < 0 {
        n = -n;
        if d < 0 {
            result = -result;
        }
    }
    // strip factors of 2 from n
    let mut twos = 0u32;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 {
            let r = d.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    if n == 1 {
        return result;
    }
    result * jacobi(d.rem_euclid(n), n)
}

/// Jacobi symbol (a/n) for odd positive n, 0 <= a < n.
fn jacobi(mut a: i64, mut n: i64) -> i32 {
    debug_assert!(n > 0 && n % 2 == 1 && (0..n).contains(&a));
    let mut result: i32 = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// True iff `d` is a fundamental discriminant: d = 1, d = 1 mod 4 squarefree,
/// or d = 4m with m = 2 or 3 mod 4 squarefree.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            let r = m.rem_euclid(4);
            (r == 2 || r == 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// All real-quadratic fundamental discriminants D with 1 < D <= x, ascending.
///
/// Squarefree parts are sieved in one pass; memory is linear in x.
pub fn enumerate_fundamental(x: u64) -> Vec<i64> {
    let x = x as usize;
    if x < 5 {
        return Vec::new();
    }
    let mut squarefree = vec![true; x + 1];
    let mut p = 2usize;
    while p * p <= x {
        let q = p * p;
        let mut j = q;
        while j <= x {
            squarefree[j] = false;
            j += q;
        }
        p += 1;
    }
    let mut out = Vec::new();
    for d in 2..=x {
        let fund = match d % 4 {
            1 => squarefree[d],
            0 => {
                let m = d / 4;
                (m % 4 == 2 || m % 4 == 3) && squarefree[m]
            }
            _ => false,
        };
        if fund {
            out.push(d as i64);
        }
    }
    out
}

/// All fundamental discriminants with |D| <= x, both signs, excluding D = 1.
pub fn enumerate_fundamental_signed(x: u64) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::new();
    for d in 2..=x as i64 {
        if is_fundamental(d) {
            out.push(d);
        }
        if is_fundamental(-d) {
            out.push(-d);
        }
    }
    out.sort_by_key(|d| (d.abs(), *d));
    out
}
