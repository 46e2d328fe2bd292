//! `K_g = gcd_{r odd prime} #GSp(2g, F_r)`, by sampling and exactly.
//!
//! The exact computation minimizes `ν_q((u-1)∏(u^{2i}-1))` over units
//! `u ∈ Z_q^×` for each prime `q ≤ 2g+1`, refining residue classes mod
//! `q^j` until every class is either determined or provably no better than
//! the best determined one.

use crate::arith::{gcd, is_prime, primes_up_to};
use crate::error::KgError;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Sampling bound used to cross-check the exact computation.
pub const DEFAULT_SAMPLE_BOUND: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KgFactorization {
    pub g: u32,
    pub exponents: BTreeMap<u64, u32>,
    #[serde(with = "crate::kg::decimal")]
    pub value: BigUint,
}

impl KgFactorization {
    pub fn exponent(&self, q: u64) -> u32 {
        self.exponents.get(&q).copied().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<u64> {
        self.exponents.keys().copied().collect()
    }

    /// Whether `q` divides `K_g`.
    pub fn divides(&self, q: &BigUint) -> bool {
        (&self.value % q).is_zero()
    }
}

pub(crate) mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| D::Error::custom(format!("not a decimal integer: {s}")))
    }
}

/// `(r - 1) r^{g²} ∏_{i=1}^{g} (r^{2i} - 1)`.
pub fn gsp_order(g: u32, r: u64) -> Result<BigUint, KgError> {
    if !is_prime(r) {
        return Err(KgError::NotPrime(r));
    }
    let rb = BigUint::from(r);
    let mut acc = (&rb - 1u32) * rb.pow(g * g);
    for i in 1..=g {
        acc *= rb.pow(2 * i) - 1u32;
    }
    Ok(acc)
}

fn gcd_over(g: u32, primes: &[u64]) -> BigUint {
    primes
        .par_iter()
        .map(|&r| gsp_order(g, r).expect("sieved prime"))
        .reduce(BigUint::zero, |a, b| a.gcd(&b))
}

/// gcd of `#GSp(2g, F_r)` over odd primes `r ≤ bound`.
pub fn kg_sampled(g: u32, bound: u64) -> Result<BigUint, KgError> {
    if g == 0 {
        return Err(KgError::InvalidGenus);
    }
    if bound < 7 {
        return Err(KgError::BoundTooSmall(bound));
    }
    let primes: Vec<u64> = primes_up_to(bound).into_iter().filter(|&r| r != 2).collect();
    Ok(gcd_over(g, &primes))
}

/// gcd over primes in `(m, bound]`, compared with the exact value.
pub fn kg_stability(g: u32, m: u64, bound: u64) -> Result<bool, KgError> {
    if m <= 2 || m >= bound {
        return Err(KgError::BoundTooSmall(bound));
    }
    let exact = kg_exact(g)?;
    let primes: Vec<u64> = primes_up_to(bound).into_iter().filter(|&r| r > m).collect();
    Ok(gcd_over(g, &primes) == exact.value)
}

fn mul_mod128(a: u128, b: u128, m: u128) -> u128 {
    a * b % m
}

/// `ν_q(v)` capped at `j` for `v` known modulo `q^j`.
fn capped_valuation(mut v: u128, q: u128, j: u32) -> u32 {
    if v == 0 {
        return j;
    }
    let mut k = 0;
    while v % q == 0 {
        v /= q;
        k += 1;
    }
    k.min(j)
}

/// Lower bound for the valuation on the class `u mod q^j`, and whether it
/// is exact for every element of the class.
fn class_bound(g: u32, u: u128, q: u128, j: u32, modulus: u128) -> (u32, bool) {
    let mut total = 0;
    let mut exact = true;
    let mut factors = Vec::with_capacity(g as usize + 1);
    factors.push((u + modulus - 1) % modulus);
    let u2 = mul_mod128(u, u, modulus);
    let mut pw = 1 % modulus;
    for _ in 1..=g {
        pw = mul_mod128(pw, u2, modulus);
        factors.push((pw + modulus - 1) % modulus);
    }
    for f in factors {
        let v = capped_valuation(f, q, j);
        if v >= j {
            exact = false;
        }
        total += v;
    }
    (total, exact)
}

/// `min_{u ∈ Z_q^×} ν_q((u-1) ∏_{i ≤ g} (u^{2i} - 1))`.
pub fn min_unit_valuation(g: u32, q: u64) -> Result<u32, KgError> {
    let qq = q as u128;
    let mut best = u32::MAX;
    let mut open: Vec<u128> = (1..qq).collect();
    let mut j = 1;
    let mut modulus = qq;
    loop {
        let mut next = Vec::new();
        for &u in &open {
            let (lb, exact) = class_bound(g, u, qq, j, modulus);
            if exact {
                best = best.min(lb);
            } else if lb < best {
                next.push(u);
            }
        }
        next.retain(|&u| class_bound(g, u, qq, j, modulus).0 < best);
        if next.is_empty() {
            return Ok(best);
        }
        let wider = modulus.checked_mul(qq).filter(|&m| m < 1 << 63).ok_or(KgError::ModulusOverflow(q))?;
        open = next.iter().flat_map(|&u| (0..qq).map(move |t| u + t * modulus)).collect();
        modulus = wider;
        j += 1;
    }
}

/// Exact `K_g`, cross-checked against [`kg_sampled`] up to 10^4.
pub fn kg_exact(g: u32) -> Result<KgFactorization, KgError> {
    let f = kg_exact_unchecked(g)?;
    let sampled = kg_sampled(g, DEFAULT_SAMPLE_BOUND)?;
    if sampled != f.value {
        return Err(KgError::Inconsistent { g, exact: f.value.to_string(), sampled: sampled.to_string() });
    }
    Ok(f)
}

/// Exact `K_g` from the residue-class minimization alone.
pub fn kg_exact_unchecked(g: u32) -> Result<KgFactorization, KgError> {
    if g == 0 {
        return Err(KgError::InvalidGenus);
    }
    let mut exponents = BTreeMap::new();
    let mut value = BigUint::one();
    for q in primes_up_to(2 * g as u64 + 1) {
        let v = min_unit_valuation(g, q)?;
        if v > 0 {
            exponents.insert(q, v);
            value *= BigUint::from(q).pow(v);
        }
    }
    Ok(KgFactorization { g, exponents, value })
}

/// Largest power of `q` dividing `K_g`, returned as `q^ν`.
pub fn prime_part(kg: &KgFactorization, q: u64) -> u64 {
    q.pow(kg.exponent(q))
}

/// `gcd(n, K_g)` for a machine-size `n`.
pub fn gcd_with(kg: &KgFactorization, n: u64) -> u64 {
    let r = crate::arith::big_mod(&kg.value, n);
    gcd(n, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gsp_order_examples() {
        assert_eq!(gsp_order(1, 3).unwrap(), BigUint::from(48u32));
        assert_eq!(gsp_order(2, 3).unwrap(), BigUint::from(2u32 * 81 * 8 * 80));
        assert_eq!(gsp_order(1, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(gsp_order(1, 4), Err(KgError::NotPrime(4)));
    }

    #[test]
    fn sampled_is_monotone() {
        for g in 1..=3 {
            let lo = kg_sampled(g, 100).unwrap();
            let hi = kg_sampled(g, 1000).unwrap();
            assert!((&lo % &hi).is_zero());
        }
        assert_eq!(kg_sampled(1, 5), Err(KgError::BoundTooSmall(5)));
    }

    #[test]
    fn small_genus_matches_sampling() {
        for g in 1..=3 {
            let f = kg_exact(g).unwrap();
            assert!(f.support().iter().all(|&q| q <= 2 * g as u64 + 1));
        }
    }

    #[test]
    fn unit_valuation_by_brute_force() {
        // compare with a direct scan of odd primes r, which realize every unit class
        for g in 1..=3u32 {
            for q in primes_up_to(2 * g as u64 + 1) {
                let brute = primes_up_to(3000)
                    .into_iter()
                    .filter(|&r| r != 2 && r != q)
                    .map(|r| crate::arith::valuation_big(&gsp_order(g, r).unwrap(), q))
                    .min()
                    .unwrap();
                assert_eq!(min_unit_valuation(g, q).unwrap(), brute, "g = {g}, q = {q}");
            }
        }
    }

    #[test]
    fn two_adic_exponents() {
        // from a direct min over odd primes r < 10^4 of ν_2((r-1)∏(r^{2i}-1))
        let expected = [4, 8, 11, 16, 19, 23, 26, 32];
        for (g, &e) in (1..=8u32).zip(&expected) {
            assert_eq!(kg_exact_unchecked(g).unwrap().exponent(2), e, "g = {g}");
        }
    }

    #[test]
    fn json_round_trip() {
        let f = kg_exact(2).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains(&format!("\"{}\"", f.value)));
        assert_eq!(serde_json::from_str::<KgFactorization>(&s).unwrap(), f);
    }
}
