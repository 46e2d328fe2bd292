//! Choice of a witness pair `(d, q)`: `d ≤ g` and a prime power `q` with
//! `q | p^d + 1` and `q ∤ K_g`.

mod special33;

pub use special33::{build_33_group, Special33Data};

use crate::arith::{is_prime, multiplicative_order, next_prime, prime_pi, primes_up_to};
use crate::error::WitnessError;
use crate::kg::{kg_exact, KgFactorization};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default trial-division bound when looking for prime factors of `p^d + 1`.
pub const DEFAULT_FACTOR_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub g: u32,
    pub p: u64,
    pub d: u32,
    /// The prime power `q`.
    pub q: u64,
    /// The prime under `q`.
    pub prime: u64,
}

/// A prime power exactly dividing `p^d + 1`, with its verdict against `K_g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePowerVerdict {
    pub d: u32,
    pub prime: u64,
    pub exponent: u32,
    /// Exponent of `prime` in `K_g`.
    pub kg_exponent: u32,
    pub divides_kg: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalReport {
    pub g: u32,
    pub p: u64,
    /// Every prime power dividing some `p^d + 1`, `d ≤ g`.
    pub verdicts: Vec<PrimePowerVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessOutcome {
    Found(Witness),
    Exceptional(ExceptionalReport),
}

impl WitnessOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            WitnessOutcome::Found(w) => Some(w),
            WitnessOutcome::Exceptional(_) => None,
        }
    }

    pub fn is_exceptional(&self) -> bool {
        matches!(self, WitnessOutcome::Exceptional(_))
    }
}

pub fn pow_plus_one_big(p: u64, d: u32) -> BigUint {
    BigUint::from(p).pow(d) + 1u32
}

/// Strips all prime factors `≤ cap` from `n`; returns them (ascending, with
/// exponents) and the cofactor, whose prime factors all exceed `cap`.
pub fn trial_factor(n: &BigUint, cap: u64) -> (Vec<(u64, u32)>, BigUint) {
    let mut m = n.clone();
    let mut out = Vec::new();
    let mut r = 2u64;
    while r <= cap {
        let rb = BigUint::from(r);
        if &rb * &rb > m {
            break;
        }
        let mut e = 0;
        while (&m % &rb).is_zero() {
            m /= &rb;
            e += 1;
        }
        if e > 0 {
            out.push((r, e));
        }
        r = if r == 2 { 3 } else { r + 2 };
    }
    // what is left is 1, a prime, or has every factor above the scan
    if m > BigUint::one() && (m.to_u64().is_some_and(|v| v <= cap) || &BigUint::from(r) * BigUint::from(r) > m) {
        out.push((m.to_u64().expect("small prime"), 1));
        m = BigUint::one();
    }
    (out, m)
}

fn factor_big_u64(n: &BigUint) -> Option<u64> {
    n.to_u64().filter(|&v| is_prime(v))
}

/// Smallest `d`, then smallest prime power `q`, with `q | p^d + 1`, `q ∤ K_g`.
pub fn find_witness(g: u32, p: u64, kg: &KgFactorization, cap: u64) -> Result<WitnessOutcome, WitnessError> {
    if g < 2 {
        return Err(WitnessError::GenusTooSmall(g));
    }
    if !is_prime(p) {
        return Err(WitnessError::NotPrime(p));
    }
    let mut verdicts = Vec::new();
    for d in 1..=g {
        let n = pow_plus_one_big(p, d);
        let (small, cofactor) = trial_factor(&n, cap);
        let mut best: Option<(u64, u64)> = None;
        for &(r, e) in &small {
            let kv = kg.exponent(r);
            verdicts.push(PrimePowerVerdict { d, prime: r, exponent: e, kg_exponent: kv, divides_kg: e <= kv });
            if e > kv {
                let q = r.checked_pow(kv + 1).ok_or(WitnessError::SearchCap(cap))?;
                if best.is_none_or(|(bq, _)| q < bq) {
                    best = Some((q, r));
                }
            }
        }
        if cofactor > BigUint::one() {
            // every prime factor of the cofactor exceeds the cap
            match best {
                Some((q, _)) if q <= cap => {}
                _ => match factor_big_u64(&cofactor) {
                    Some(r) if kg.exponent(r) == 0 => {
                        if best.is_none_or(|(bq, _)| r < bq) {
                            best = Some((r, r));
                        }
                    }
                    _ => return Err(WitnessError::SearchCap(cap)),
                },
            }
        }
        if let Some((q, prime)) = best {
            return Ok(WitnessOutcome::Found(Witness { g, p, d, q, prime }));
        }
    }
    Ok(WitnessOutcome::Exceptional(ExceptionalReport { g, p, verdicts }))
}

/// Independent re-check of a witness with big-integer arithmetic.
pub fn is_admissible(g: u32, p: u64, d: u32, q: u64, kg: &KgFactorization) -> bool {
    if d == 0 || d > g || q < 2 {
        return false;
    }
    let qb = BigUint::from(q);
    (pow_plus_one_big(p, d) % &qb).is_zero() && !(&kg.value % &qb).is_zero() && kg.value.gcd(&qb) < qb
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZsigmondyHit {
    pub q: u64,
    pub d: u32,
}

/// Checks `π(2g+1) ≤ g - 1` (g ≥ 7) and `π(2g+1) ≤ g - 2` (g ≥ 10).
pub fn counting_facts(g: u32) -> Result<(), WitnessError> {
    let pi = prime_pi(2 * g as u64 + 1) as u32;
    if g >= 7 && pi + 1 > g {
        return Err(WitnessError::CountingFact(format!("pi({}) = {pi} > g - 1", 2 * g + 1)));
    }
    if g >= 10 && pi + 2 > g {
        return Err(WitnessError::CountingFact(format!("pi({}) = {pi} > g - 2", 2 * g + 1)));
    }
    Ok(())
}

/// Smallest prime `q > 2g+1` dividing `p^d + 1` for some `d ≤ g`.
///
/// `q | p^d + 1` for some `d` exactly when the order of `p` mod `q` is
/// even, and the least such `d` is half that order.
pub fn zsigmondy_scan(g: u32, p: u64, cap: u64) -> Result<ZsigmondyHit, WitnessError> {
    if g < 7 {
        return Err(WitnessError::ZsigmondyRange(g));
    }
    if !is_prime(p) {
        return Err(WitnessError::NotPrime(p));
    }
    counting_facts(g)?;
    let mut q = next_prime(2 * g as u64 + 1);
    while q <= cap {
        if q != p {
            let ord = multiplicative_order(p % q, q).expect("p is a unit mod q");
            if ord % 2 == 0 && ord / 2 <= g as u64 {
                let d = (ord / 2) as u32;
                debug_assert!((pow_plus_one_big(p, d) % q).is_zero());
                return Ok(ZsigmondyHit { q, d });
            }
        }
        q = next_prime(q);
    }
    Err(WitnessError::NoZsigmondyPrime { g, p })
}

/// Primes dividing `p^n + 1` but no `p^k + 1` with `k < n`, i.e. with
/// multiplicative order of `p` equal to `2n`. Needs `p^n + 1` to factor
/// below `cap`.
pub fn primitive_prime_divisors(p: u64, n: u32, cap: u64) -> Result<Vec<u64>, WitnessError> {
    let (small, cofactor) = trial_factor(&pow_plus_one_big(p, n), cap);
    if cofactor > BigUint::one() {
        return Err(WitnessError::SearchCap(cap));
    }
    Ok(small
        .into_iter()
        .map(|(r, _)| r)
        .filter(|&r| r != 2 && multiplicative_order(p % r, r) == Some(2 * n as u64))
        .collect())
}

/// All `(g, p)` with `2 ≤ g ≤ gmax`, `p ≤ pmax` prime, admitting no witness.
pub fn exceptional_scan(gmax: u32, pmax: u64) -> Result<Vec<(u32, u64)>, WitnessError> {
    let kgs: Vec<KgFactorization> = (2..=gmax).map(kg_exact).collect::<Result<_, _>>()?;
    let primes = primes_up_to(pmax);
    let cells: Vec<(usize, u64)> = (0..kgs.len()).flat_map(|i| primes.iter().map(move |&p| (i, p))).collect();
    let mut out: Vec<(u32, u64)> = cells
        .par_iter()
        .map(|&(i, p)| {
            let g = i as u32 + 2;
            find_witness(g, p, &kgs[i], DEFAULT_FACTOR_CAP).map(|o| o.is_exceptional().then_some((g, p)))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witness(g: u32, p: u64) -> WitnessOutcome {
        find_witness(g, p, &kg_exact(g).unwrap(), DEFAULT_FACTOR_CAP).unwrap()
    }

    #[test]
    fn witness_examples() {
        for (g, p, d, q) in [(2, 5, 2, 13), (2, 7, 2, 25), (3, 5, 2, 13), (4, 3, 4, 41), (7, 2, 4, 17)] {
            let w = witness(g, p);
            let w = w.witness().unwrap();
            assert_eq!((w.d, w.q), (d, q), "(g, p) = ({g}, {p})");
            assert!(is_admissible(g, p, w.d, w.q, &kg_exact(g).unwrap()));
        }
        assert!(witness(2, 2).is_exceptional());
    }

    #[test]
    fn seven_two_admits_forty_three() {
        assert!(is_admissible(7, 2, 7, 43, &kg_exact(7).unwrap()));
        assert_eq!(zsigmondy_scan(7, 2, 1 << 20).unwrap(), ZsigmondyHit { q: 17, d: 4 });
    }

    #[test]
    fn exceptional_transcripts() {
        let WitnessOutcome::Exceptional(r) = witness(2, 3) else { panic!("expected exceptional") };
        assert!(r.verdicts.iter().all(|v| v.divides_kg));
        let primes: Vec<_> = r.verdicts.iter().map(|v| (v.d, v.prime, v.exponent)).collect();
        assert_eq!(primes, vec![(1, 2, 2), (2, 2, 1), (2, 5, 1)]);
        let WitnessOutcome::Exceptional(r) = witness(3, 2) else { panic!("expected exceptional") };
        let primes: Vec<_> = r.verdicts.iter().map(|v| (v.d, v.prime, v.exponent)).collect();
        assert_eq!(primes, vec![(1, 3, 1), (2, 5, 1), (3, 3, 2)]);
    }

    #[test]
    fn zsigmondy_exception() {
        assert!(primitive_prime_divisors(2, 3, 1000).unwrap().is_empty());
        assert_eq!(primitive_prime_divisors(2, 5, 1000).unwrap(), vec![11]);
        assert_eq!(primitive_prime_divisors(3, 2, 1000).unwrap(), vec![5]);
    }

    #[test]
    fn zsigmondy_small_cases() {
        let hit = zsigmondy_scan(7, 3, 1 << 20).unwrap();
        assert!(hit.q > 15 && hit.d <= 7);
        assert!(matches!(zsigmondy_scan(6, 3, 1000), Err(WitnessError::ZsigmondyRange(6))));
    }

    #[test]
    fn trial_factor_splits_completely() {
        let (f, rest) = trial_factor(&BigUint::from(2u64 * 2 * 3 * 1_000_003), 2000);
        assert_eq!(f, vec![(2, 2), (3, 1), (1_000_003, 1)]);
        assert!(rest.is_one());
        let (_, rest) = trial_factor(&(BigUint::from(1_000_003u64) * 1_000_033u64), 100);
        assert_eq!(rest, BigUint::from(1_000_003u64 * 1_000_033));
    }
}
