use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::recognize::decimal_pairs;
use crate::{Error, Result};

const TRIAL_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    /// `(prime, multiplicity)` in ascending order. When `complete` is false the
    /// last entry may be composite.
    #[serde(with = "decimal_pairs")]
    pub factors: Vec<(BigInt, u32)>,
    pub complete: bool,
}

impl Factorization {
    pub fn product(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize))
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" * "))?;
        if !self.complete {
            write!(f, " (incomplete)")?;
        }
        Ok(())
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard's rho; `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut ys = y;
        let mut r = 1u64;
        let m = 128u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split(d, out);
    split(n / d, out);
}

fn collect(mut primes: Vec<u64>) -> Vec<(BigInt, u32)> {
    primes.sort_unstable();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == BigInt::from(p) => *e += 1,
            _ => out.push((BigInt::from(p), 1)),
        }
    }
    out
}

/// Complete factorization of a 64-bit integer `n >= 2`.
pub fn factorize_u64(n: u64) -> Result<Factorization> {
    if n < 2 {
        return Err(Error::invalid(format!("cannot factor {n}")));
    }
    let mut primes = Vec::new();
    let mut m = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while m % p == 0 {
            primes.push(p);
            m /= p;
        }
    }
    split(m, &mut primes);
    Ok(Factorization {
        factors: collect(primes),
        complete: true,
    })
}

/// Factors `n >= 2`. Inputs beyond 64 bits are trial-divided up to 2^20 and
/// finished exactly if the cofactor fits in 64 bits; otherwise the cofactor is
/// returned as the last entry and the result is marked incomplete.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    let two = BigInt::from(2);
    if n < &two {
        return Err(Error::invalid(format!("cannot factor {n}")));
    }
    if let Some(small) = n.to_u64() {
        return factorize_u64(small);
    }
    let mut m: BigUint = n.magnitude().clone();
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p < TRIAL_LIMIT && m.to_u64().is_none() {
        let bp = BigUint::from(p);
        while (&m % &bp) == BigUint::from(0u32) {
            primes.push(p);
            m /= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    match m.to_u64() {
        Some(rest) => {
            if rest > 1 {
                primes.extend(factorize_u64(rest)?.factors.iter().flat_map(|(q, e)| {
                    std::iter::repeat_n(q.to_u64().expect("64-bit factor"), *e as usize)
                }));
            }
            Ok(Factorization {
                factors: collect(primes),
                complete: true,
            })
        }
        None => {
            let mut factors = collect(primes);
            factors.push((BigInt::from(m), 1));
            Ok(Factorization {
                factors,
                complete: false,
            })
        }
    }
}
