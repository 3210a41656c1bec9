//! Small finite fields GF(p^k), used to build affine and semilinear groups.
//!
//! Elements are the integers `0..q`, read as base-p digit vectors of
//! polynomial coefficients. The modulus is the first primitive polynomial
//! found in lexicographic order, so `generator()` is a primitive element.

use crate::arith::prime_power;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: usize,
    k: usize,
    q: usize,
    exp: Vec<usize>,
    log: Vec<usize>,
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self> {
        let (p, k) = prime_power(q as u64)
            .ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
        let (p, k) = (p as usize, k as usize);
        for tail in 0..q {
            // modulus x^k + sum c_i x^i, with tail encoding c_0..c_{k-1}
            let coeffs = digits(tail, p, k);
            if coeffs[0] == 0 && k > 1 {
                continue;
            }
            if let Some(exp) = powers_of_x(p, k, &coeffs) {
                let mut log = vec![0; q];
                for (e, &v) in exp.iter().enumerate() {
                    log[v] = e;
                }
                return Ok(Self { p, k, q, exp, log });
            }
        }
        unreachable!("every finite field has a primitive polynomial")
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> usize {
        self.exp[1 % (self.q - 1)]
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (da, db) = (digits(a, self.p, self.k), digits(b, self.p, self.k));
        let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        undigits(&sum, self.p)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        self.exp[(self.log[a] * e) % (self.q - 1)]
    }

    /// The additive basis `1, x, .., x^(k-1)` as field elements.
    pub fn basis(&self) -> Vec<usize> {
        (0..self.k).map(|i| self.p.pow(i as u32)).collect()
    }
}

fn digits(mut n: usize, p: usize, k: usize) -> Vec<usize> {
    let mut d = vec![0; k];
    for slot in d.iter_mut() {
        *slot = n % p;
        n /= p;
    }
    d
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Powers of x modulo the monic polynomial with lower coefficients `tail`;
/// `None` unless x has multiplicative order exactly p^k - 1.
fn powers_of_x(p: usize, k: usize, tail: &[usize]) -> Option<Vec<usize>> {
    let q = p.pow(k as u32);
    let mut cur = vec![0; k];
    cur[0] = 1;
    let mut exp = Vec::with_capacity(q - 1);
    for step in 0..q - 1 {
        let v = undigits(&cur, p);
        if step > 0 && v == 1 {
            return None;
        }
        exp.push(v);
        // multiply by x
        let top = cur[k - 1];
        for i in (1..k).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        for i in 0..k {
            cur[i] = (cur[i] + p - (top * tail[i]) % p) % p;
        }
    }
    (undigits(&cur, p) == 1).then_some(exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_field(q: usize) {
        let f = FiniteField::new(q).unwrap();
        let elems: Vec<usize> = (0..q).collect();
        for &a in &elems {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            for &b in &elems {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in elems.iter().step_by(3) {
                    assert_eq!(
                        f.mul(a, f.add(b, c)),
                        f.add(f.mul(a, b), f.mul(a, c))
                    );
                }
            }
        }
        // generator has full order
        let g = f.generator();
        let mut x = 1;
        for e in 1..q - 1 {
            x = f.mul(x, g);
            assert_ne!(x, 1, "order {e} < q-1");
        }
        assert_eq!(f.mul(x, g), 1);
    }

    #[test]
    fn field_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            check_field(q);
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let f = FiniteField::new(8).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(f.pow(f.add(a, b), 2), f.add(f.pow(a, 2), f.pow(b, 2)));
            }
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(FiniteField::new(12).is_err());
        assert!(FiniteField::new(1).is_err());
    }
}
