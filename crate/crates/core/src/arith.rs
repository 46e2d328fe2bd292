//! Machine-word number theory: modular arithmetic, primality, factoring,
//! primitive roots and discrete logarithms.
//!
//! Everything here works on `u64` with `u128` intermediates. Sizes in this
//! crate stay far below the point where that matters.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

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

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Reduces a signed value into `[0, m)`.
#[inline]
pub fn reduce_signed(v: i128, m: u64) -> u64 {
    v.rem_euclid(m as i128) as u64
}

/// Solves `a * k ≡ b (mod m)`, returning the least non-negative solution
/// together with the modulus `m / gcd(a, m)` of the solution class.
pub fn solve_linear_congruence(a: u64, b: u64, m: u64) -> Option<(u64, u64)> {
    let a = a % m;
    let b = b % m;
    let g = gcd(a, m);
    if b % g != 0 {
        return None;
    }
    let m2 = m / g;
    if m2 == 1 {
        return Some((0, 1));
    }
    let inv = inv_mod(a / g, m2)?;
    Some((mul_mod(b / g, inv, m2), m2))
}

/// Chinese remaindering for coprime moduli.
pub fn crt(residues: &[(u64, u64)]) -> Option<(u64, u64)> {
    let mut acc = (0u64, 1u64);
    for &(r, m) in residues {
        let (r0, m0) = acc;
        let inv = inv_mod(m0 % m, m)?;
        let diff = (r % m + m - r0 % m) % m;
        let t = mul_mod(diff, inv, m);
        let modulus = m0.checked_mul(m)?;
        let value = (r0 as u128 + m0 as u128 * t as u128) % modulus as u128;
        acc = (value as u64, modulus);
    }
    Some(acc)
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &sp in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

/// Primality by trial division. Used where an independent check is wanted.
pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Sieve of Eratosthenes: all primes `<= limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn prime_pi(x: u64) -> usize {
    primes_up_to(x).len()
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Prime factorization by trial division, ascending primes.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(q, _)| q).collect()
}

/// Multiplicative order of `a` modulo `m` (requires `gcd(a, m) = 1`).
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(a % m, m) != 1 {
        return None;
    }
    let phi = euler_phi(m);
    let mut ord = phi;
    for q in prime_divisors(phi) {
        while ord % q == 0 && pow_mod(a, ord / q, m) == 1 {
            ord /= q;
        }
    }
    Some(ord)
}

pub fn euler_phi(m: u64) -> u64 {
    factor(m)
        .into_iter()
        .fold(m, |acc, (q, _)| acc / q * (q - 1))
}

/// Smallest primitive root modulo a prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let qs = prime_divisors(p - 1);
    (2..p)
        .find(|&g| qs.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// Discrete logarithm of `target` to base `g` modulo prime `p` by
/// baby-step giant-step. Returns the least non-negative exponent.
pub fn discrete_log(g: u64, target: u64, p: u64) -> Option<u64> {
    let target = target % p;
    if target == 0 {
        return None;
    }
    let n = p - 1;
    let step = (n as f64).sqrt().ceil() as u64 + 1;
    let mut baby = std::collections::HashMap::with_capacity(step as usize);
    let mut cur = 1u64;
    for j in 0..step {
        baby.entry(cur).or_insert(j);
        cur = mul_mod(cur, g, p);
    }
    let factor = inv_mod(pow_mod(g, step, p), p)?;
    let mut gamma = target;
    for i in 0..=step {
        if let Some(&j) = baby.get(&gamma) {
            let x = i * step + j;
            return Some(x % n.max(1));
        }
        gamma = mul_mod(gamma, factor, p);
    }
    None
}

/// Euler's criterion: whether `a` is a nonzero square modulo the odd prime `p`.
pub fn is_quadratic_residue(a: u64, p: u64) -> bool {
    let a = a % p;
    a != 0 && pow_mod(a, (p - 1) / 2, p) == 1
}

/// Whether `a` is a `k`-th power residue modulo prime `p`, for `k | p - 1`.
pub fn is_power_residue(a: u64, k: u64, p: u64) -> bool {
    let a = a % p;
    a != 0 && pow_mod(a, (p - 1) / k, p) == 1
}

/// Decomposes `n` as `2^s * odd`.
pub fn split_two_power(n: u64) -> (u32, u64) {
    let s = n.trailing_zeros();
    (s, n >> s)
}

/// `1 + b + ... + b^(len-1)` modulo `m`; zero for `len = 0`.
pub fn geometric_sum_mod(b: u64, len: u64, m: u64) -> u64 {
    let mut acc = 0u64;
    let mut term = 1 % m;
    for _ in 0..len {
        acc = (acc + term) % m;
        term = mul_mod(term, b, m);
    }
    acc
}

/// `1 + b + ... + b^(len-1)` exactly.
pub fn geometric_sum(b: u64, len: u32) -> u128 {
    let mut acc = 0u128;
    let mut term = 1u128;
    for _ in 0..len {
        acc += term;
        term *= b as u128;
    }
    acc
}

/// q-adic valuation of a nonzero big integer.
pub fn valuation_big(n: &BigUint, q: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let qb = BigUint::from(q);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let r = &m % &qb;
        if !r.is_zero() {
            return v;
        }
        m /= &qb;
        v += 1;
    }
}

pub fn valuation(mut n: u64, q: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let mut v = 0;
    while n % q == 0 {
        n /= q;
        v += 1;
    }
    v
}

/// `p^d + 1` as a machine word, if it fits.
pub fn pow_plus_one(p: u64, d: u32) -> Option<u64> {
    p.checked_pow(d)?.checked_add(1)
}

/// `BigUint` remainder as `u64`.
pub fn big_mod(n: &BigUint, m: u64) -> u64 {
    (n % BigUint::from(m)).to_u64().expect("remainder fits")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_match_trial_division() {
        for n in 0..5000 {
            assert_eq!(is_prime(n), is_prime_trial(n), "n = {n}");
        }
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn inverses_and_congruences() {
        assert_eq!(inv_mod(3, 10), Some(7));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(solve_linear_congruence(2, 4, 10), Some((2, 5)));
        assert_eq!(solve_linear_congruence(2, 3, 10), None);
        assert_eq!(crt(&[(1, 4), (2, 3)]), Some((5, 12)));
    }

    #[test]
    fn roots_and_logs() {
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(43), 3);
        for p in [3u64, 5, 7, 11, 13, 43, 101] {
            let g = primitive_root(p);
            for a in 1..p {
                let x = discrete_log(g, a, p).unwrap();
                assert_eq!(pow_mod(g, x, p), a);
            }
        }
        assert_eq!(multiplicative_order(2, 17), Some(8));
        assert_eq!(multiplicative_order(4, 13), Some(6));
    }

    #[test]
    fn euler_criterion_against_squares() {
        for p in [3u64, 7, 11, 43] {
            let squares: std::collections::HashSet<u64> = (1..p).map(|x| x * x % p).collect();
            for a in 1..p {
                assert_eq!(is_quadratic_residue(a, p), squares.contains(&a));
            }
        }
        // 3^21 ≡ -1 (mod 43)
        assert_eq!(pow_mod(3, 21, 43), 42);
        assert_eq!(pow_mod(7, 21, 43), 42);
    }

    #[test]
    fn factoring() {
        assert_eq!(factor(129), vec![(3, 1), (43, 1)]);
        assert_eq!(factor(2188), vec![(2, 2), (547, 1)]);
        assert_eq!(factor(1), vec![]);
        assert_eq!(valuation(48, 2), 4);
        assert_eq!(split_two_power(24), (3, 3));
    }
}
