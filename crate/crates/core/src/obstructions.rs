//! Ramified primes `N_1, N_2`, Frobenius data, and explicit solutions of the
//! local lifting problems at `∞`, `p`, `N_1` and `N_2`.

use crate::arith::{
    crt, discrete_log, gcd, geometric_sum_mod, is_power_residue, is_prime, is_quadratic_residue, pow_mod,
    primitive_root, reduce_signed, solve_linear_congruence, split_two_power,
};
use crate::error::ObstructionError;
use crate::metacyclic::{GroupShape, WordElement};
use serde::{Deserialize, Serialize};

/// Default upper bound for prime searches.
pub const DEFAULT_PRIME_CAP: u64 = 10_000_000;

/// Groups up to this order get the unsolvable lifts at `p` confirmed by
/// exhaustive search.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalPlace {
    Infinity,
    P,
    N1,
    N2,
}

/// `2d = 2^n d_1` with `d_1` odd.
pub fn decompose_2d(d: u32) -> (u32, u64) {
    let (n, d1) = split_two_power(2 * d as u64);
    (n, d1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingInstance {
    pub p: u64,
    pub d: u32,
    pub n: u32,
    pub d1: u64,
    pub n1: u64,
    pub n2: Option<u64>,
    /// `α` with `N_2 = 2 α d_1 + 1`.
    pub alpha_n2: Option<u64>,
    pub shape: GroupShape,
}

impl EmbeddingInstance {
    /// Checks conditions (a)-(c), `N_2 ≡ 1 mod d_1`, primality and distinctness.
    pub fn check(&self) -> Result<(), ObstructionError> {
        let bad = |m: &str| Err(ObstructionError::Constraints(m.to_string()));
        let two_n = 1u64 << self.n;
        if (two_n as u128 * self.d1 as u128) != 2 * self.d as u128 || self.d1 % 2 == 0 {
            return bad("2d = 2^n d_1");
        }
        if !is_prime(self.n1) || self.n1 == self.p {
            return bad("N_1 prime and distinct from p");
        }
        if self.n1 % (2 * two_n) != two_n + 1 {
            return bad("(a) N_1 = 2^n + 1 mod 2^(n+1)");
        }
        if is_quadratic_residue(self.p, self.n1) {
            return bad("(c) p is a non-residue mod N_1");
        }
        match (self.d1 > 1, self.n2, self.alpha_n2) {
            (false, None, None) => {}
            (true, Some(n2), Some(alpha)) => {
                if !is_prime(n2) || n2 == self.p || n2 == self.n1 {
                    return bad("N_2 prime and distinct from p, N_1");
                }
                if n2 != 2 * alpha * self.d1 + 1 {
                    return bad("N_2 = 2 alpha d_1 + 1");
                }
                if self.n1 % n2 != 1 {
                    return bad("(b) N_1 = 1 mod N_2");
                }
            }
            _ => return bad("N_2 present exactly when d_1 > 1"),
        }
        Ok(())
    }
}

/// Smallest `N_2 ≡ 1 mod d_1` (when `d_1 > 1`) and smallest `N_1` satisfying
/// (a)-(c), all distinct from `p`.
pub fn find_ramified_primes(p: u64, d: u32, cap: u64) -> Result<EmbeddingInstance, ObstructionError> {
    if p % 2 == 0 {
        return Err(ObstructionError::EvenPrime(p));
    }
    let (n, d1) = decompose_2d(d);
    let shape = GroupShape::standard(p, d)?;
    let (n2, alpha_n2) = if d1 > 1 {
        // odd primes ≡ 1 mod d_1 are ≡ 1 mod 2 d_1
        let mut t = 2 * d1 + 1;
        loop {
            if t > cap {
                return Err(ObstructionError::SearchCap(cap));
            }
            if t != p && is_prime(t) {
                break;
            }
            t += 2 * d1;
        }
        (Some(t), Some((t - 1) / (2 * d1)))
    } else {
        (None, None)
    };
    let two_n = 1u64 << n;
    let (start, step) = crt(&[(two_n + 1, 2 * two_n), (1, n2.unwrap_or(1))])
        .ok_or_else(|| ObstructionError::Constraints("(a) and (b) incompatible".into()))?;
    let mut t = if start < 3 { start + step } else { start };
    loop {
        if t > cap {
            return Err(ObstructionError::SearchCap(cap));
        }
        if t != p && Some(t) != n2 && is_prime(t) && !is_quadratic_residue(p, t) {
            break;
        }
        t += step;
    }
    let inst = EmbeddingInstance { p, d, n, d1, n1: t, n2, alpha_n2, shape };
    inst.check()?;
    Ok(inst)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusData {
    /// Image of Frobenius at `p` in `Z/2d`.
    pub at_p: u64,
    /// Image of Frobenius at `N_1` in `Z/(p-1)`.
    pub at_n1: u64,
    /// Image of Frobenius at `N_2`: `(a, b d_1)` in `Z/(p-1) × Z/2d`.
    pub at_n2: Option<(u64, u64)>,
}

fn log_mod(t: u64, prime: u64) -> Result<u64, ObstructionError> {
    if t % prime == 0 {
        return Err(ObstructionError::Ramified(prime));
    }
    Ok(discrete_log(primitive_root(prime), t % prime, prime).expect("primitive root"))
}

/// Index of `t` in the quotient of order `ord` of `(Z/prime)^×`.
fn quotient_index(t: u64, prime: u64, ord: u64) -> Result<u64, ObstructionError> {
    Ok(log_mod(t, prime)? % ord)
}

/// Whether the rule for the parity of the Frobenius index at `N_1` says odd.
pub fn n1_parity_rule_odd(p: u64, d: u32) -> bool {
    d % 2 == 0 || p % 4 == 1
}

/// Frobenius images, with discrete logs taken to the smallest primitive root.
pub fn frobenius_class(inst: &EmbeddingInstance) -> Result<FrobeniusData, ObstructionError> {
    let two_n = 1u64 << inst.n;
    let two_d = 2 * inst.d as u64;
    let p_in_f1 = quotient_index(inst.p, inst.n1, two_n)?;
    let p_in_f2 = match inst.n2 {
        Some(n2) => quotient_index(inst.p, n2, inst.d1)?,
        None => 0,
    };
    let (at_p, _) = crt(&[(p_in_f1, two_n), (p_in_f2, inst.d1)]).expect("coprime moduli");
    if at_p % 2 != 1 {
        return Err(ObstructionError::Parity("p".into()));
    }
    let at_n1 = log_mod(inst.n1, inst.p)?;
    if (at_n1 % 2 == 1) != n1_parity_rule_odd(inst.p, inst.d) {
        return Err(ObstructionError::Parity("N_1".into()));
    }
    let at_n2 = match inst.n2 {
        Some(n2) => {
            let a = log_mod(n2, inst.p)?;
            let idx = quotient_index(n2, inst.n1, two_n)?;
            let (bd1, _) = crt(&[(idx, two_n), (0, inst.d1)]).expect("coprime moduli");
            Some((a, bd1 % two_d))
        }
        None => None,
    };
    Ok(FrobeniusData { at_p, at_n1, at_n2 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TameLift {
    pub place: LocalPlace,
    pub sigma: WordElement,
    pub tau: WordElement,
    /// Solution of the lifting congruence, reduced mod `lift_modulus`.
    pub lift_exponent: u64,
    pub lift_modulus: u64,
    /// The twist exponent `t` in `σ τ σ^{-1} = τ^t`.
    pub twist: u64,
}

impl TameLift {
    pub fn holds(&self, shape: &GroupShape) -> bool {
        shape.conj(&self.sigma, &self.tau) == shape.pow(&self.tau, self.twist as u128)
    }
}

/// `((p-1)/2, d)`, the image of complex conjugation; must have order 2.
pub fn lift_at_infinity(shape: &GroupShape) -> Result<WordElement, ObstructionError> {
    if shape.p % 2 == 0 {
        return Err(ObstructionError::EvenPrime(shape.p));
    }
    let w = WordElement::new((shape.p - 1) / 2, shape.d as u64);
    if shape.element_order(&w) != 2 {
        return Err(ObstructionError::LiftFailed { place: "infinity".into(), detail: "order != 2".into() });
    }
    if shape.abelianization(&w) != ((shape.p - 1) / 2, shape.d as u64) {
        return Err(ObstructionError::LiftFailed { place: "infinity".into(), detail: "abelianization".into() });
    }
    Ok(w)
}

fn m_of(shape: &GroupShape) -> u64 {
    shape.e / (shape.p - 1)
}

/// `e' = (p^d+1) / gcd(p^d+1, 1 + p + ... + p^{a-2})`.
pub fn e_prime(shape: &GroupShape, a: u64) -> u64 {
    let m = m_of(shape);
    let s = if a >= 1 { geometric_sum_mod(shape.p, a - 1, m) } else { 0 };
    m / gcd(m, s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EprimeParity {
    pub e_prime: u64,
    pub holds: bool,
}

/// `e'` is odd exactly when `a` is odd.
pub fn eprime_parity(shape: &GroupShape, a: u64) -> EprimeParity {
    let ep = e_prime(shape, a);
    EprimeParity { e_prime: ep, holds: (ep % 2 == 1) == (a % 2 == 1) }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftAtP {
    Solved(TameLift),
    /// No lift; `brute_force_confirmed` when exhaustive search agreed.
    Unsolvable { brute_force_confirmed: bool },
}

/// Lift at `p` with Frobenius image `a ∈ Z/2d`.
pub fn lift_at_p(shape: &GroupShape, a: u64) -> LiftAtP {
    let p = shape.p;
    let a = a % shape.period;
    if a % 2 == 1 {
        let ep = e_prime(shape, a);
        // k (p-1) ≡ -1 mod e'
        if let Some((k, _)) = solve_linear_congruence((p - 1) % ep.max(1), reduce_signed(-1, ep), ep) {
            let lift = TameLift {
                place: LocalPlace::P,
                sigma: WordElement::new(0, a),
                tau: shape.element(1 + k as i128 * (p - 1) as i128, 0),
                lift_exponent: k,
                lift_modulus: ep,
                twist: p,
            };
            if lift.holds(shape) {
                return LiftAtP::Solved(lift);
            }
        }
        return LiftAtP::Unsolvable { brute_force_confirmed: false };
    }
    let confirmed = shape.order() <= BRUTE_FORCE_LIMIT && no_lift_at_p_exists(shape, a);
    LiftAtP::Unsolvable { brute_force_confirmed: confirmed }
}

/// Exhaustive: no `σ̃ = x^s y^a`, `τ̃ = x^t` with `t ≡ 1 mod p-1` satisfies
/// `σ̃ τ̃ σ̃^{-1} = τ̃^p`.
pub fn no_lift_at_p_exists(shape: &GroupShape, a: u64) -> bool {
    let am = shape.abelian_modulus();
    for s in 0..shape.e {
        let sigma = WordElement::new(s, a % shape.period);
        for t in (1 % am..shape.e).step_by(am as usize) {
            let tau = WordElement::new(t, 0);
            if shape.conj(&sigma, &tau) == shape.pow(&tau, shape.p as u128) {
                return false;
            }
        }
    }
    true
}

/// Lift at `N_1`: `σ̃ = x^{a + k(p-1)}`, `τ̃ = y^{d_1}`.
pub fn lift_at_n1(inst: &EmbeddingInstance, a: u64) -> Result<TameLift, ObstructionError> {
    let shape = &inst.shape;
    let p = inst.p;
    let m = m_of(shape);
    let s1 = geometric_sum_mod(p, inst.d1, m);
    let lhs = reduce_signed(1 - pow_mod(p, inst.d1, m) as i128, m);
    let rhs = (m / 2 + a % m * s1 % m) % m;
    if gcd(lhs, m) != 2 {
        return Err(ObstructionError::LiftFailed { place: "N_1".into(), detail: "gcd(1 - p^d1, p^d+1) != 2".into() });
    }
    if (m / 2 + a) % 2 != 0 {
        return Err(ObstructionError::Parity("N_1 solvability".into()));
    }
    let (k, modulus) = solve_linear_congruence(lhs, rhs, m)
        .ok_or_else(|| ObstructionError::LiftFailed { place: "N_1".into(), detail: "congruence".into() })?;
    let lift = TameLift {
        place: LocalPlace::N1,
        sigma: shape.element(a as i128 + k as i128 * (p - 1) as i128, 0),
        tau: WordElement::new(0, inst.d1),
        lift_exponent: k,
        lift_modulus: modulus,
        twist: inst.n1,
    };
    if !lift.holds(shape) {
        return Err(ObstructionError::LiftFailed { place: "N_1".into(), detail: "relation".into() });
    }
    Ok(lift)
}

/// Lift at `N_2`: `σ̃ = x^{a + k(p-1)} y^{b d_1}`, `τ̃ = y^{2^n}`.
pub fn lift_at_n2(inst: &EmbeddingInstance, a: u64, bd1: u64) -> Result<TameLift, ObstructionError> {
    let n2 = inst.n2.ok_or_else(|| ObstructionError::LiftFailed { place: "N_2".into(), detail: "d_1 = 1".into() })?;
    let shape = &inst.shape;
    let p = inst.p;
    let half = 1u64 << (inst.n - 1);
    let big_m = m_of(shape) / (p.pow(half as u32) + 1);
    let lhs = reduce_signed(1 - pow_mod(p, half, big_m) as i128, big_m);
    if gcd(lhs, big_m) != 1 {
        return Err(ObstructionError::LiftFailed { place: "N_2".into(), detail: "gcd(1 - p^(2^(n-1)), M) != 1".into() });
    }
    let rhs = a % big_m * geometric_sum_mod(p, half, big_m) % big_m;
    let (k, modulus) = solve_linear_congruence(lhs, rhs, big_m)
        .ok_or_else(|| ObstructionError::LiftFailed { place: "N_2".into(), detail: "congruence".into() })?;
    let lift = TameLift {
        place: LocalPlace::N2,
        sigma: shape.element(a as i128 + k as i128 * (p - 1) as i128, bd1 as i128),
        tau: WordElement::new(0, 1 << inst.n),
        lift_exponent: k,
        lift_modulus: modulus,
        twist: n2,
    };
    if !lift.holds(shape) {
        return Err(ObstructionError::LiftFailed { place: "N_2".into(), detail: "relation".into() });
    }
    Ok(lift)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub instance: EmbeddingInstance,
    pub frobenius: FrobeniusData,
    pub at_infinity: WordElement,
    pub at_p: TameLift,
    pub at_n1: TameLift,
    pub at_n2: Option<TameLift>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObstructionOutcome {
    /// `p = 2`: the extension splits and there is nothing to check.
    Trivial { d: u32 },
    Solved(Box<ObstructionReport>),
}

/// Runs the prime search, the Frobenius computation and all four lifts.
pub fn obstruction_report(p: u64, d: u32, cap: u64) -> Result<ObstructionOutcome, ObstructionError> {
    if p == 2 {
        return Ok(ObstructionOutcome::Trivial { d });
    }
    let instance = find_ramified_primes(p, d, cap)?;
    let frobenius = frobenius_class(&instance)?;
    let at_infinity = lift_at_infinity(&instance.shape)?;
    let at_p = match lift_at_p(&instance.shape, frobenius.at_p) {
        LiftAtP::Solved(l) => l,
        LiftAtP::Unsolvable { .. } => {
            return Err(ObstructionError::LiftFailed { place: "p".into(), detail: format!("a = {}", frobenius.at_p) })
        }
    };
    let at_n1 = lift_at_n1(&instance, frobenius.at_n1)?;
    let at_n2 = match frobenius.at_n2 {
        Some((a, bd1)) => Some(lift_at_n2(&instance, a, bd1)?),
        None => None,
    };
    Ok(ObstructionOutcome::Solved(Box::new(ObstructionReport {
        instance,
        frobenius,
        at_infinity,
        at_p,
        at_n1,
        at_n2,
    })))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SplitConstraint {
    /// `t ≡ 1 mod modulus`.
    CongruentOne { modulus: u64 },
    /// `t` is a `degree`-th power residue mod `prime`.
    PowerResidue { prime: u64, degree: u64 },
}

impl SplitConstraint {
    pub fn holds(&self, t: u64) -> bool {
        match *self {
            SplitConstraint::CongruentOne { modulus } => t % modulus == 1 % modulus,
            SplitConstraint::PowerResidue { prime, degree } => is_power_residue(t, degree, prime),
        }
    }
}

/// Smallest prime satisfying every constraint and not in `exclude`.
pub fn find_split_prime(constraints: &[SplitConstraint], exclude: &[u64], cap: u64) -> Result<u64, ObstructionError> {
    let step = constraints.iter().try_fold(1u64, |acc, c| match *c {
        SplitConstraint::CongruentOne { modulus } => {
            let g = gcd(acc, modulus);
            (acc / g).checked_mul(modulus).ok_or_else(|| ObstructionError::Constraints("modulus overflow".into()))
        }
        SplitConstraint::PowerResidue { prime, degree } => {
            if degree == 0 || (prime - 1) % degree != 0 {
                Err(ObstructionError::Constraints(format!("{degree} does not divide {prime} - 1")))
            } else {
                Ok(acc)
            }
        }
    })?;
    let mut t = 1 + step;
    while t <= cap {
        if is_prime(t) && !exclude.contains(&t) && constraints.iter().all(|c| c.holds(t)) {
            return Ok(t);
        }
        t += step;
    }
    Err(ObstructionError::SearchCap(cap))
}

/// Constraints for splitting completely in `F(ζ_p)` and in `Q(ζ_m)`.
pub fn splitting_constraints(inst: &EmbeddingInstance) -> Vec<SplitConstraint> {
    let mut cs = vec![
        SplitConstraint::CongruentOne { modulus: inst.p },
        SplitConstraint::PowerResidue { prime: inst.n1, degree: 1 << inst.n },
    ];
    if let Some(n2) = inst.n2 {
        cs.push(SplitConstraint::PowerResidue { prime: n2, degree: inst.d1 });
    }
    cs.push(SplitConstraint::CongruentOne { modulus: m_of(&inst.shape) });
    cs
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistDatum {
    pub l: u64,
    pub q: u64,
    pub c_sigma: WordElement,
    pub c_tau: WordElement,
    pub order: u64,
}

/// `c(σ) = 1`, `c(τ) = x^{e/q}`, an element of order `q` in `[N, N]`.
pub fn local_twist_data(l: u64, q: u64, shape: &GroupShape) -> Result<TwistDatum, ObstructionError> {
    if q < 2 || shape.e % q != 0 {
        return Err(ObstructionError::Twist(format!("{q} does not divide e = {}", shape.e)));
    }
    if (l - 1) % q != 0 {
        return Err(ObstructionError::Twist(format!("{q} does not divide l - 1 = {}", l - 1)));
    }
    let c_tau = WordElement::new(shape.e / q, 0);
    let g = shape.derived_generator();
    if c_tau.a % g != 0 {
        return Err(ObstructionError::Twist("c(tau) outside [N, N]".into()));
    }
    let order = shape.element_order(&c_tau);
    if order != q || shape.pow(&c_tau, (l - 1) as u128) != shape.identity() {
        return Err(ObstructionError::Twist("(l - 1) c(tau) != 0".into()));
    }
    Ok(TwistDatum { l, q, c_sigma: shape.identity(), c_tau, order })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompositions() {
        assert_eq!(decompose_2d(1), (1, 1));
        assert_eq!(decompose_2d(2), (2, 1));
        assert_eq!(decompose_2d(3), (1, 3));
        assert_eq!(decompose_2d(6), (2, 3));
    }

    #[test]
    fn ramified_primes_3_3() {
        let inst = find_ramified_primes(3, 3, DEFAULT_PRIME_CAP).unwrap();
        assert_eq!((inst.n, inst.d1, inst.n2, inst.n1), (1, 3, Some(7), 43));
        assert_eq!(inst.alpha_n2, Some(1));
        let f = frobenius_class(&inst).unwrap();
        assert_eq!(f.at_n1, 0);
    }

    #[test]
    fn ramified_primes_7_1() {
        let inst = find_ramified_primes(7, 1, DEFAULT_PRIME_CAP).unwrap();
        // 3 fails (7 ≡ 1 is a square mod 3); 7 is excluded; 7 is a non-square mod 11
        assert_eq!(inst.n1, 11);
        assert_eq!(inst.n2, None);
        assert_eq!(frobenius_class(&inst).unwrap().at_p % 2, 1);
        // the instance with N_1 = 43 is valid too, and also gives an odd index at p
        let alt = EmbeddingInstance { n1: 43, ..inst };
        alt.check().unwrap();
        assert_eq!(frobenius_class(&alt).unwrap().at_p % 2, 1);
    }

    #[test]
    fn lift_at_p_examples() {
        let s31 = GroupShape::standard(3, 1).unwrap();
        let LiftAtP::Solved(l) = lift_at_p(&s31, 1) else { panic!() };
        assert_eq!(l.lift_modulus, 1);
        assert_eq!(s31.conj(&s31.y(), &s31.x()), s31.pow(&s31.x(), 3));
        let s32 = GroupShape::standard(3, 2).unwrap();
        let LiftAtP::Solved(l) = lift_at_p(&s32, 3) else { panic!() };
        assert_eq!((l.lift_modulus, l.lift_exponent), (5, 2));
        assert_eq!(lift_at_p(&s32, 0), LiftAtP::Unsolvable { brute_force_confirmed: true });
        assert_eq!(lift_at_p(&s32, 2), LiftAtP::Unsolvable { brute_force_confirmed: true });
    }

    #[test]
    fn eprime_examples() {
        let s32 = GroupShape::standard(3, 2).unwrap();
        assert_eq!(eprime_parity(&s32, 3), EprimeParity { e_prime: 5, holds: true });
        assert_eq!(eprime_parity(&s32, 2), EprimeParity { e_prime: 10, holds: true });
        let s71 = GroupShape::standard(7, 1).unwrap();
        assert_eq!(eprime_parity(&s71, 3), EprimeParity { e_prime: 1, holds: true });
    }

    #[test]
    fn infinity_examples() {
        let s = GroupShape::standard(3, 1).unwrap();
        assert_eq!(lift_at_infinity(&s).unwrap(), WordElement::new(1, 1));
        let s = GroupShape::standard(3, 2).unwrap();
        assert_eq!(lift_at_infinity(&s).unwrap(), WordElement::new(1, 2));
    }

    #[test]
    fn n1_example_3_1() {
        let inst = find_ramified_primes(3, 1, DEFAULT_PRIME_CAP).unwrap();
        assert_eq!(inst.n1, 7);
        let lift = lift_at_n1(&inst, 0).unwrap();
        assert_eq!(lift.lift_exponent % 2, 1);
        let s = &inst.shape;
        // x^2 y x^-2 = x^4 y = y^3
        assert_eq!(s.conj(&WordElement::new(2, 0), &s.y()), s.pow(&s.y(), 3));
    }

    #[test]
    fn n2_example_3_3() {
        let inst = find_ramified_primes(3, 3, DEFAULT_PRIME_CAP).unwrap();
        for a in 0..2 {
            for bd1 in [0, 3] {
                let l = lift_at_n2(&inst, a, bd1).unwrap();
                assert_eq!(l.lift_modulus, 7);
                assert_eq!(l.tau, WordElement::new(0, 2));
            }
        }
    }

    #[test]
    fn reports() {
        for (p, d) in [(3, 1), (3, 3), (5, 2), (7, 3)] {
            let ObstructionOutcome::Solved(r) = obstruction_report(p, d, DEFAULT_PRIME_CAP).unwrap() else { panic!() };
            assert_eq!(r.at_n2.is_some(), r.instance.d1 > 1);
            assert!(r.at_p.holds(&r.instance.shape) && r.at_n1.holds(&r.instance.shape));
        }
        assert_eq!(obstruction_report(2, 3, 100).unwrap(), ObstructionOutcome::Trivial { d: 3 });
    }

    #[test]
    fn split_prime_examples() {
        let cs = [SplitConstraint::CongruentOne { modulus: 9 }, SplitConstraint::CongruentOne { modulus: 13 }];
        assert_eq!(find_split_prime(&cs, &[], 100_000).unwrap(), 937);
        let brute = (938..100_000u64).find(|&t| is_prime(t) && t % 9 == 1 && t % 13 == 1).unwrap();
        assert_eq!(find_split_prime(&cs, &[937], 100_000).unwrap(), brute);
    }

    #[test]
    fn power_residue_matches_subgroup_membership() {
        for prime in [13u64, 17, 29, 41] {
            for degree in (1..prime).filter(|k| (prime - 1) % k == 0) {
                let g = primitive_root(prime);
                let subgroup: std::collections::HashSet<u64> =
                    (0..(prime - 1) / degree).map(|i| pow_mod(g, i * degree, prime)).collect();
                for t in 1..prime {
                    assert_eq!(is_power_residue(t, degree, prime), subgroup.contains(&t));
                }
            }
        }
    }

    #[test]
    fn twist_examples() {
        let s = GroupShape::special33();
        let t = local_twist_data(937, 13, &s).unwrap();
        assert_eq!((t.c_tau, t.order), (WordElement::new(1, 0), 13));
        let s25 = GroupShape::standard(5, 2).unwrap();
        let t = local_twist_data(53, 13, &s25).unwrap();
        assert_eq!(t.c_tau.a, 8);
        assert!(local_twist_data(59, 13, &s25).is_err());
    }

    #[test]
    fn sweep_reports_and_parity() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            for d in 1..=6u32 {
                if p.checked_pow(d).is_none_or(|v| v > 1 << 40) {
                    continue;
                }
                let ObstructionOutcome::Solved(r) = obstruction_report(p, d, DEFAULT_PRIME_CAP).unwrap() else {
                    panic!()
                };
                r.instance.check().unwrap();
                let s = &r.instance.shape;
                for a in 2..s.period {
                    assert!(eprime_parity(s, a).holds, "p = {p}, d = {d}, a = {a}");
                }
            }
        }
    }
}
