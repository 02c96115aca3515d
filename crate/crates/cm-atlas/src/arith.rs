//! Exact integer foundations: factorization, Kronecker symbol, squarefree parts.
//!
//! Everything here works at "desk scale": the discriminant scans of this crate
//! stay within |Δ| ≤ 10⁵, so trial division against a fixed prime table is the
//! right tool. Inputs whose prime factors exceed the table are rejected rather
//! than silently mis-factored.

use crate::{Error, Result};
use rug::ops::Pow;
use std::sync::OnceLock;

/// Trial-division primes cover all factor candidates up to this bound.
pub const PRIME_TABLE_BOUND: u64 = 10_000;

fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = PRIME_TABLE_BOUND as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut p = 2;
        while p * p <= n {
            if sieve[p] {
                let mut m = p * p;
                while m <= n {
                    sieve[m] = false;
                    m += p;
                }
            }
            p += 1;
        }
        (2..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
    })
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Signed prime factorization: `sign · ∏ pᵢ^eᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// +1 or −1.
    pub sign: i64,
    /// Strictly increasing primes with their exponents ≥ 1.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Multiplies the factorization back together.
    pub fn recompose(&self) -> i64 {
        let mut n = self.sign;
        for &(p, e) in &self.factors {
            n *= (p as i64).pow(e);
        }
        n
    }

    /// ω(n): the number of distinct prime divisors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }
}

/// Factorizes a nonzero integer by trial division.
///
/// Errors on 0, and on inputs that leave a composite cofactor beyond the
/// prime table (impossible for |n| ≤ 10⁸, far above every scan bound used
/// here).
pub fn factorize(n: i64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::FactorizeZero);
    }
    let sign = n.signum();
    let mut m = n.unsigned_abs();
    let mut factors = Vec::new();
    for &p in primes() {
        if p * p > m {
            break;
        }
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if m > 1 {
        // No factor ≤ 10⁴ remains, so m is prime whenever m < 10⁸.
        if m >= PRIME_TABLE_BOUND * PRIME_TABLE_BOUND {
            return Err(Error::FactorizeOverflow(n));
        }
        factors.push((m, 1));
    }
    Ok(Factorization { sign, factors })
}

/// (2/x) for odd x, via x mod 8.
fn kronecker_two(x: i64) -> i32 {
    match (x & 7) as u8 {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    }
}

/// Kronecker symbol (a/n), defined for all integer pairs.
///
/// Computed by 2-adic extraction and quadratic reciprocity, so even and
/// negative arguments are handled without Euler's criterion.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut a = a;
    let mut n = n;
    let mut v = 0u32;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    let mut k = if v % 2 == 0 { 1 } else { kronecker_two(a) };
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    // Invariant: n odd and positive.
    loop {
        if a == 0 {
            return if n > 1 { 0 } else { k };
        }
        v = 0;
        while a % 2 == 0 {
            a /= 2;
            v += 1;
        }
        if v % 2 == 1 {
            k *= kronecker_two(n);
        }
        // Reciprocity flip when both are ≡ 3 (mod 4); the bitwise test is
        // valid for negative a in two's complement.
        if a & n & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = n % r;
        n = r;
    }
}

/// Squarefree part: the unique squarefree m with n = m·s², sign preserved.
pub fn squarefree_part(n: i64) -> Result<i64> {
    let f = factorize(n)?;
    let mut m = f.sign;
    for &(p, e) in &f.factors {
        if e % 2 == 1 {
            m *= p as i64;
        }
    }
    Ok(m)
}

/// Largest s with s² | n (so that n = squarefree_part(n) · s²).
pub fn square_divisor(n: i64) -> Result<i64> {
    let f = factorize(n)?;
    let mut s = 1i64;
    for &(p, e) in &f.factors {
        s *= (p as i64).pow(e / 2);
    }
    Ok(s)
}

/// Floor of the k-th root of a nonnegative Integer, with exactness flag.
pub fn integer_nth_root(n: &rug::Integer, k: u32) -> (rug::Integer, bool) {
    let root = n.clone().root(k);
    let exact = root.clone().pow(k) == *n;
    (root, exact)
}
