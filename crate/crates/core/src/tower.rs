//! The tower F_p ⊂ k = F_{p^d} ⊂ l' = F_{p^{2d}}.
//!
//! `k` is F_p[t]/(f) for the first monic irreducible `f` of degree `d` in
//! index order (see [`FpPoly::monic_from_index`]). `l'` is `k(η)` where η
//! has minimal polynomial `s^2 + c1 s + c0` over `k`:
//!
//! * odd `p`: `c1 = 0`, `c0 = -u` with `u` the first primitive element of
//!   `k^×`, so `η^2 = u` generates `k^×`;
//! * `p = 2`: `c1 = 1`, `c0 = u` with `u` the first element of absolute
//!   trace one, so `tr_{l'|k}(η) = 1`.
//!
//! Elements of `l'` are stored in the F_p-basis
//! `1, t, …, t^{d-1}, η, tη, …, t^{d-1}η`, which is the identification
//! `l' = k^2` through the basis `{1, η}`. Enumeration ("basis order") reads
//! these `2d` coordinates as base-`p` digits, first coordinate least
//! significant.

use crate::arith::{is_prime, mul_mod, prime_divisors};
use crate::error::TowerError;
use crate::fp_poly::FpPoly;
use serde::{Deserialize, Serialize};

/// Element of the middle field `k`, as `d` coordinates in the power basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KElement(pub Vec<u64>);

/// Element of `l'`: `a + bη` with `a, b ∈ k`, flattened to `2d` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TowerElement {
    coords: Vec<u64>,
}

impl TowerElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn a(&self) -> KElement {
        let d = self.coords.len() / 2;
        KElement(self.coords[..d].to_vec())
    }

    pub fn b(&self) -> KElement {
        let d = self.coords.len() / 2;
        KElement(self.coords[d..].to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// True when the η-component vanishes.
    pub fn in_subfield(&self) -> bool {
        let d = self.coords.len() / 2;
        self.coords[d..].iter().all(|&c| c == 0)
    }
}

/// Serializable description of a tower: enough to rebuild it exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerParams {
    pub p: u64,
    pub d: u32,
    /// Defining polynomial of `k` over F_p, lowest degree first.
    pub k_modulus: Vec<u64>,
    /// Minimal polynomial of η over `k` as `[c0, c1, 1]`, each a `k`-coordinate list.
    pub eta_min_poly: Vec<Vec<u64>>,
}

#[derive(Clone, Debug)]
pub struct FieldTower {
    p: u64,
    d: usize,
    k_modulus: FpPoly,
    /// `t^{d+i} mod f` for `i < d - 1`.
    reductions: Vec<Vec<u64>>,
    eta_c0: KElement,
    eta_c1: KElement,
}

/// Result of solving `Norm_{l'|k}(α) = η^{1-p}`.
#[derive(Clone, Debug)]
pub struct AlphaChoice {
    pub alpha: TowerElement,
    pub target_norm: KElement,
    /// Whether some `α ∈ k^×` also solves the norm equation.
    pub subfield_solution_exists: bool,
}

impl FieldTower {
    /// Builds the tower for `(p, d)` with the deterministic choices above.
    pub fn build(p: u64, d: u32) -> Result<Self, TowerError> {
        if !is_prime(p) {
            return Err(TowerError::NotPrime(p));
        }
        if d == 0 {
            return Err(TowerError::InvalidDegree(d));
        }
        let d = d as usize;
        let k_modulus = FpPoly::first_irreducible(p, d);
        let mut tower = Self::with_modulus(p, d, k_modulus, KElement(vec![0; d]), KElement(vec![0; d]));
        let k_size = p.pow(d as u32);
        if p == 2 {
            let u = (1..k_size)
                .map(|i| tower.k_from_index(i))
                .find(|u| tower.trace_k_to_p(u) == 1)
                .expect("trace is onto F_2");
            tower.eta_c0 = u;
            tower.eta_c1 = tower.k_one();
        } else {
            let group_order = k_size - 1;
            let qs = prime_divisors(group_order);
            let u = (1..k_size)
                .map(|i| tower.k_from_index(i))
                .find(|u| qs.iter().all(|&q| tower.k_pow(u, (group_order / q) as u128) != tower.k_one()))
                .expect("k^× is cyclic");
            tower.eta_c0 = tower.k_neg(&u);
        }
        tower.check_invariants()?;
        Ok(tower)
    }

    /// Rebuilds a tower from serialized polynomials, re-checking every invariant.
    pub fn from_params(params: &TowerParams) -> Result<Self, TowerError> {
        if !is_prime(params.p) {
            return Err(TowerError::NotPrime(params.p));
        }
        let d = params.d as usize;
        let k_modulus = FpPoly::new(params.p, params.k_modulus.clone());
        if k_modulus.degree() != Some(d) || k_modulus.lead() != 1 {
            return Err(TowerError::Invariant("k modulus must be monic of degree d".into()));
        }
        if params.eta_min_poly.len() != 3 || params.eta_min_poly.iter().any(|c| c.len() != d) {
            return Err(TowerError::Invariant("eta minimal polynomial must have three k-coefficients".into()));
        }
        let mut one = vec![0; d];
        one[0] = 1;
        if params.eta_min_poly[2] != one {
            return Err(TowerError::Invariant("eta minimal polynomial must be monic".into()));
        }
        let red = |v: &Vec<u64>| KElement(v.iter().map(|c| c % params.p).collect());
        let tower = Self::with_modulus(
            params.p,
            d,
            k_modulus,
            red(&params.eta_min_poly[0]),
            red(&params.eta_min_poly[1]),
        );
        tower.check_invariants()?;
        Ok(tower)
    }

    fn with_modulus(p: u64, d: usize, k_modulus: FpPoly, c0: KElement, c1: KElement) -> Self {
        let reductions = (0..d.saturating_sub(1))
            .map(|i| {
                let mut mono = vec![0u64; d + i + 1];
                mono[d + i] = 1;
                let r = FpPoly::new(p, mono).rem(&k_modulus);
                let mut c = r.coeffs().to_vec();
                c.resize(d, 0);
                c
            })
            .collect();
        Self { p, d, k_modulus, reductions, eta_c0: c0, eta_c1: c1 }
    }

    fn check_invariants(&self) -> Result<(), TowerError> {
        if !self.k_modulus.is_irreducible() {
            return Err(TowerError::Invariant("k modulus is reducible".into()));
        }
        if self.p == 2 {
            if self.eta_c1 != self.k_one() {
                return Err(TowerError::Invariant("tr(eta) must be 1 in characteristic 2".into()));
            }
            // s^2 + s + u is irreducible over k iff the absolute trace of u is 1.
            if self.trace_k_to_p(&self.eta_c0) != 1 {
                return Err(TowerError::Invariant("s^2 + s + u is reducible over k".into()));
            }
        } else {
            if !self.k_is_zero(&self.eta_c1) {
                return Err(TowerError::Invariant("odd p requires eta^2 in k".into()));
            }
            let u = self.k_neg(&self.eta_c0);
            if self.k_order(&u) != self.k_size() - 1 {
                return Err(TowerError::Invariant("eta^2 does not generate k^×".into()));
            }
        }
        Ok(())
    }

    pub fn params(&self) -> TowerParams {
        let mut k_modulus = self.k_modulus.coeffs().to_vec();
        k_modulus.resize(self.d + 1, 0);
        TowerParams {
            p: self.p,
            d: self.d as u32,
            k_modulus,
            eta_min_poly: vec![self.eta_c0.0.clone(), self.eta_c1.0.clone(), self.k_one().0],
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Dimension of `l'` over F_p.
    pub fn dim(&self) -> usize {
        2 * self.d
    }

    pub fn k_size(&self) -> u64 {
        self.p.pow(self.d as u32)
    }

    /// `(p^d + 1)(p - 1)`, the order of the Cartan subgroup `C`.
    pub fn cartan_order(&self) -> u64 {
        (self.k_size() + 1) * (self.p - 1)
    }

    // ---- k arithmetic -------------------------------------------------

    pub fn k_zero(&self) -> KElement {
        KElement(vec![0; self.d])
    }

    pub fn k_one(&self) -> KElement {
        self.k_scalar(1)
    }

    pub fn k_scalar(&self, c: u64) -> KElement {
        let mut v = vec![0; self.d];
        v[0] = c % self.p;
        KElement(v)
    }

    pub fn k_from_index(&self, mut index: u64) -> KElement {
        let mut v = vec![0; self.d];
        for c in v.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        KElement(v)
    }

    pub fn k_is_zero(&self, x: &KElement) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    /// The F_p-value of `x` when `x` lies in the prime field.
    pub fn k_as_scalar(&self, x: &KElement) -> Option<u64> {
        x.0[1..].iter().all(|&c| c == 0).then_some(x.0[0])
    }

    pub fn k_add(&self, x: &KElement, y: &KElement) -> KElement {
        KElement(x.0.iter().zip(&y.0).map(|(a, b)| (a + b) % self.p).collect())
    }

    pub fn k_sub(&self, x: &KElement, y: &KElement) -> KElement {
        KElement(x.0.iter().zip(&y.0).map(|(a, b)| (a + self.p - b) % self.p).collect())
    }

    pub fn k_neg(&self, x: &KElement) -> KElement {
        KElement(x.0.iter().map(|a| (self.p - a) % self.p).collect())
    }

    pub fn k_mul(&self, x: &KElement, y: &KElement) -> KElement {
        let d = self.d;
        let p = self.p;
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &a) in x.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        let mut out = prod[..d].to_vec();
        for (i, &c) in prod[d..].iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&self.reductions[i]) {
                *o = (*o + mul_mod(c, r, p)) % p;
            }
        }
        KElement(out)
    }

    pub fn k_pow(&self, x: &KElement, mut exp: u128) -> KElement {
        let mut base = x.clone();
        let mut acc = self.k_one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.k_mul(&acc, &base);
            }
            base = self.k_mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    pub fn k_inv(&self, x: &KElement) -> Result<KElement, TowerError> {
        if self.k_is_zero(x) {
            return Err(TowerError::ZeroInverse);
        }
        Ok(self.k_pow(x, self.k_size() as u128 - 2))
    }

    /// Multiplicative order in `k^×`.
    pub fn k_order(&self, x: &KElement) -> u64 {
        let n = self.k_size() - 1;
        let mut ord = n;
        for q in prime_divisors(n) {
            while ord % q == 0 && self.k_pow(x, (ord / q) as u128) == self.k_one() {
                ord /= q;
            }
        }
        ord
    }

    /// `tr_{k|F_p}`.
    pub fn trace_k_to_p(&self, x: &KElement) -> u64 {
        let mut acc = self.k_zero();
        let mut cur = x.clone();
        for _ in 0..self.d {
            acc = self.k_add(&acc, &cur);
            cur = self.k_pow(&cur, self.p as u128);
        }
        self.k_as_scalar(&acc).expect("trace lands in the prime field")
    }

    // ---- l' arithmetic ------------------------------------------------

    pub fn element(&self, a: &KElement, b: &KElement) -> TowerElement {
        let mut coords = a.0.clone();
        coords.extend_from_slice(&b.0);
        TowerElement { coords }
    }

    pub fn from_coords(&self, coords: &[u64]) -> TowerElement {
        assert_eq!(coords.len(), self.dim(), "coordinate length");
        TowerElement { coords: coords.iter().map(|c| c % self.p).collect() }
    }

    pub fn from_index(&self, mut index: u64) -> TowerElement {
        let mut coords = vec![0; self.dim()];
        for c in coords.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        TowerElement { coords }
    }

    /// Size of `l'` as long as it fits a word.
    pub fn size(&self) -> u64 {
        self.p.pow(self.dim() as u32)
    }

    pub fn zero(&self) -> TowerElement {
        self.element(&self.k_zero(), &self.k_zero())
    }

    pub fn one(&self) -> TowerElement {
        self.element(&self.k_one(), &self.k_zero())
    }

    pub fn eta(&self) -> TowerElement {
        self.element(&self.k_zero(), &self.k_one())
    }

    pub fn embed(&self, a: &KElement) -> TowerElement {
        self.element(a, &self.k_zero())
    }

    /// `η^2` as an element of `k` (odd `p` only has `η^2 ∈ k`).
    pub fn eta_squared_in_k(&self) -> Option<KElement> {
        self.k_is_zero(&self.eta_c1).then(|| self.k_neg(&self.eta_c0))
    }

    pub fn add(&self, x: &TowerElement, y: &TowerElement) -> TowerElement {
        TowerElement {
            coords: x.coords.iter().zip(&y.coords).map(|(a, b)| (a + b) % self.p).collect(),
        }
    }

    pub fn sub(&self, x: &TowerElement, y: &TowerElement) -> TowerElement {
        TowerElement {
            coords: x.coords.iter().zip(&y.coords).map(|(a, b)| (a + self.p - b) % self.p).collect(),
        }
    }

    pub fn mul(&self, x: &TowerElement, y: &TowerElement) -> TowerElement {
        let (a, b) = (x.a(), x.b());
        let (c, d) = (y.a(), y.b());
        let bd = self.k_mul(&b, &d);
        let re = self.k_sub(&self.k_mul(&a, &c), &self.k_mul(&self.eta_c0, &bd));
        let im = self.k_sub(
            &self.k_add(&self.k_mul(&a, &d), &self.k_mul(&b, &c)),
            &self.k_mul(&self.eta_c1, &bd),
        );
        self.element(&re, &im)
    }

    pub fn pow(&self, x: &TowerElement, mut exp: u128) -> TowerElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: &TowerElement) -> Result<TowerElement, TowerError> {
        if x.is_zero() {
            return Err(TowerError::ZeroInverse);
        }
        // x^{-1} = conj(x) / Norm(x)
        let conj = self.frobenius_power(x, self.d);
        let n = self.norm_l_to_k(x);
        let n_inv = self.k_inv(&n)?;
        Ok(self.mul(&conj, &self.embed(&n_inv)))
    }

    /// `x ↦ x^{p^i}`.
    pub fn frobenius_power(&self, x: &TowerElement, i: usize) -> TowerElement {
        let mut cur = x.clone();
        for _ in 0..i % self.dim() {
            cur = self.pow(&cur, self.p as u128);
        }
        cur
    }

    /// `Norm_{l'|k}(x) = x · x^{p^d}`.
    pub fn norm_l_to_k(&self, x: &TowerElement) -> KElement {
        let n = self.mul(x, &self.frobenius_power(x, self.d));
        debug_assert!(n.in_subfield());
        n.a()
    }

    /// `tr_{l'|k}(x) = x + x^{p^d}`.
    pub fn trace_l_to_k(&self, x: &TowerElement) -> KElement {
        let t = self.add(x, &self.frobenius_power(x, self.d));
        debug_assert!(t.in_subfield());
        t.a()
    }

    /// `tr_{l'|F_p}` computed directly as the sum of all conjugates.
    pub fn trace_l_to_p(&self, x: &TowerElement) -> u64 {
        let mut acc = self.zero();
        let mut cur = x.clone();
        for _ in 0..self.dim() {
            acc = self.add(&acc, &cur);
            cur = self.pow(&cur, self.p as u128);
        }
        debug_assert!(acc.coords[1..].iter().all(|&c| c == 0));
        acc.coords[0]
    }

    /// Multiplicative order of a nonzero element, given the primes dividing
    /// some multiple `n` of it.
    pub fn order_dividing(&self, x: &TowerElement, n: u64, primes: &[u64]) -> Option<u64> {
        if self.pow(x, n as u128) != self.one() {
            return None;
        }
        let mut ord = n;
        for &q in primes {
            while ord % q == 0 && self.pow(x, (ord / q) as u128) == self.one() {
                ord /= q;
            }
        }
        Some(ord)
    }

    /// Primes dividing `(p^d + 1)(p - 1)`.
    pub fn cartan_order_primes(&self) -> Vec<u64> {
        let mut qs = prime_divisors(self.k_size() + 1);
        for q in prime_divisors(self.p - 1) {
            if !qs.contains(&q) {
                qs.push(q);
            }
        }
        qs.sort_unstable();
        qs
    }

    /// First element, in basis order, of `C = {x : Norm(x) ∈ F_p^×}` that
    /// generates it, i.e. has order exactly `(p^d + 1)(p - 1)`.
    pub fn find_cartan_generator(&self) -> TowerElement {
        let e = self.cartan_order();
        let primes = self.cartan_order_primes();
        (1..self.size())
            .map(|i| self.from_index(i))
            .find(|x| {
                matches!(self.k_as_scalar(&self.norm_l_to_k(x)), Some(c) if c != 0)
                    && self.order_dividing(x, e, &primes) == Some(e)
            })
            .expect("C is cyclic of order (p^d+1)(p-1)")
    }

    /// First `α` in basis order with `Norm_{l'|k}(α) = η^{1-p}`.
    pub fn find_alpha(&self) -> Result<AlphaChoice, TowerError> {
        let u = self.eta_squared_in_k().ok_or(TowerError::NotApplicable("find_alpha needs odd p"))?;
        // η^{1-p} = (η^2)^{-(p-1)/2}
        let target = self.k_inv(&self.k_pow(&u, ((self.p - 1) / 2) as u128))?;
        let alpha = (1..self.size())
            .map(|i| self.from_index(i))
            .find(|a| self.norm_l_to_k(a) == target)
            .expect("the norm map onto k^× is surjective");
        // α ∈ k has Norm(α) = α^2, so a subfield solution exists iff the
        // target is a square in k.
        let half = (self.k_size() - 1) / 2;
        let subfield_solution_exists = self.k_pow(&target, half as u128) == self.k_one();
        Ok(AlphaChoice { alpha, target_norm: target, subfield_solution_exists })
    }
}
