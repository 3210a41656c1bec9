//! Small integer helpers: primes, factorisation, coprime parts.

use std::collections::BTreeSet;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
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

/// Prime factorisation as (prime, exponent) pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The set of prime divisors of `n` (empty for n = 1).
pub fn prime_divisors(n: u64) -> BTreeSet<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Largest divisor of `n` that is a power of `p`.
pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut part = 1;
    while n > 0 && n % p == 0 {
        n /= p;
        part *= p;
    }
    part
}

/// Largest divisor of `n` coprime to `p`.
pub fn p_prime_part(n: u64, p: u64) -> u64 {
    n / p_part(n, p)
}

/// Largest divisor of `n` whose prime divisors all lie in `pi`.
pub fn pi_part(n: u64, pi: &BTreeSet<u64>) -> u64 {
    pi.iter().map(|&p| p_part(n, p)).product()
}

/// True when every prime divisor of `n` lies in `pi` (1 is a pi-number).
pub fn is_pi_number(n: u64, pi: &BTreeSet<u64>) -> bool {
    pi_part(n, pi) == n
}

/// If `n` is a prime power p^k with k >= 1, returns (p, k).
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

pub fn smallest_prime_not_dividing(n: u64) -> u64 {
    (2..).find(|&q| is_prime(q) && n % q != 0).unwrap()
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&q| is_prime(q)).collect()
}
