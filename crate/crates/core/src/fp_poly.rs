//! Dense univariate polynomials over a prime field F_p.
//!
//! Coefficients are stored lowest degree first and kept trimmed, so the
//! zero polynomial is the empty vector.

use crate::arith::{inv_mod, mul_mod, prime_divisors};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut poly = Self {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.trim();
        poly
    }

    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    /// The monomial `t`.
    pub fn var(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + b) % self.p
            })
            .collect();
        Self::new(self.p, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        Self::new(self.p, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        Self::new(self.p, c)
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv_lead = inv_mod(divisor.lead(), self.p).expect("field coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(self.p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = mul_mod(rem[i], inv_lead, self.p);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = (rem[idx] + self.p - mul_mod(c, b, self.p)) % self.p;
            }
        }
        (Self::new(self.p, quot), Self::new(self.p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), self.p).expect("field coefficient");
        Self::new(self.p, self.coeffs.iter().map(|&c| mul_mod(c, inv, self.p)).collect())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, mut exp: u128, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = Self::one(self.p).rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            exp >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(n) => n,
        };
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let t = Self::var(self.p);
        // t^(p^n) ≡ t (mod f)
        let frob_n = iterate_frobenius(&t, self.p, n, &f);
        if frob_n != t.rem(&f) {
            return false;
        }
        for q in prime_divisors(n as u64) {
            let h = iterate_frobenius(&t, self.p, n / q as usize, &f).sub(&t);
            if h.gcd(&f).degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Monic polynomial of degree `deg` whose lower coefficients are the
    /// base-`p` digits of `index` (constant coefficient least significant).
    pub fn monic_from_index(p: u64, deg: usize, mut index: u64) -> Self {
        let mut c = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            c.push(index % p);
            index /= p;
        }
        c.push(1);
        Self::new(p, c)
    }

    /// First monic irreducible polynomial of degree `deg` in index order.
    pub fn first_irreducible(p: u64, deg: usize) -> Self {
        let count = (p as u128).pow(deg as u32);
        (0..count as u64)
            .map(|i| Self::monic_from_index(p, deg, i))
            .find(|f| f.is_irreducible())
            .expect("irreducible polynomials exist in every degree")
    }
}

/// `x^(p^k) mod f` by repeated p-th powering.
fn iterate_frobenius(x: &FpPoly, p: u64, k: usize, f: &FpPoly) -> FpPoly {
    let mut acc = x.rem(f);
    for _ in 0..k {
        acc = acc.pow_mod(p as u128, f);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force irreducibility for tiny degrees: no monic factor of
    /// degree at most half.
    fn irreducible_by_division(f: &FpPoly) -> bool {
        let n = f.degree().unwrap();
        let p = f.modulus();
        for deg in 1..=n / 2 {
            for i in 0..p.pow(deg as u32) {
                let g = FpPoly::monic_from_index(p, deg, i);
                if f.rem(&g).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division() {
        for p in [2u64, 3, 5] {
            for deg in 1..=4usize {
                for i in 0..p.pow(deg as u32) {
                    let f = FpPoly::monic_from_index(p, deg, i);
                    assert_eq!(f.is_irreducible(), irreducible_by_division(&f), "{f:?}");
                }
            }
        }
    }

    #[test]
    fn first_irreducibles() {
        assert_eq!(FpPoly::first_irreducible(2, 2).coeffs(), &[1, 1, 1]);
        assert_eq!(FpPoly::first_irreducible(3, 2).coeffs(), &[1, 0, 1]);
        assert_eq!(FpPoly::first_irreducible(2, 1).coeffs(), &[0, 1]);
        assert_eq!(FpPoly::first_irreducible(3, 3).coeffs(), &[1, 2, 0, 1]);
    }

    #[test]
    fn division_identity() {
        let a = FpPoly::new(5, vec![1, 2, 3, 4, 1]);
        let b = FpPoly::new(5, vec![2, 0, 3]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }
}
