//! Normal-form arithmetic in `N = ⟨x, y | x^e = 1, y^{P} = x^t, y x y^{-1} = x^c⟩`.
//!
//! Elements are `x^a y^b` with `a ∈ Z/e`, `0 ≤ b < P`. For the Cartan
//! normalizer `P = 2d`, `c = p` and `t = e/2` (odd `p`) or `t = 0` (`p = 2`).

use crate::arith::{gcd, pow_mod};
use crate::error::GroupError;
use crate::symplectic::SympMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupShape {
    pub p: u64,
    pub d: u32,
    /// Order of `x`.
    pub e: u64,
    /// `b` runs over `Z/period`.
    pub period: u64,
    /// `y x y^{-1} = x^action`.
    pub action: u64,
    /// `y^period = x^carry`.
    pub carry: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(u64, u64)", into = "(u64, u64)")]
pub struct WordElement {
    pub a: u64,
    pub b: u64,
}

impl From<(u64, u64)> for WordElement {
    fn from((a, b): (u64, u64)) -> Self {
        Self { a, b }
    }
}

impl From<WordElement> for (u64, u64) {
    fn from(w: WordElement) -> Self {
        (w.a, w.b)
    }
}

impl WordElement {
    pub const fn new(a: u64, b: u64) -> Self {
        Self { a, b }
    }
}

impl GroupShape {
    /// Shape of the Cartan normalizer for `(p, d)`.
    pub fn standard(p: u64, d: u32) -> Result<Self, GroupError> {
        if d == 0 || p < 2 {
            return Err(GroupError::InvalidShape(format!("(p, d) = ({p}, {d})")));
        }
        let m = p
            .checked_pow(d)
            .and_then(|v| v.checked_add(1))
            .ok_or_else(|| GroupError::InvalidShape("p^d + 1 overflows".into()))?;
        let e = m * (p - 1);
        let carry = if p == 2 { 0 } else { e / 2 };
        Self::new(p, d, e, 2 * d as u64, p % e, carry)
    }

    /// `⟨x, y | x^13 = y^6 = 1, y x y^{-1} = x^4⟩`.
    pub fn special33() -> Self {
        Self::new(3, 3, 13, 6, 4, 0).expect("valid shape")
    }

    pub fn new(p: u64, d: u32, e: u64, period: u64, action: u64, carry: u64) -> Result<Self, GroupError> {
        if e == 0 || period == 0 {
            return Err(GroupError::InvalidShape("e and period must be positive".into()));
        }
        let s = Self { p, d, e, period, action: action % e, carry: carry % e };
        if gcd(s.action, e) != 1 && e > 1 {
            return Err(GroupError::InvalidShape("action must be a unit".into()));
        }
        if pow_mod(s.action, period, e) != 1 % e {
            return Err(GroupError::InvalidShape("action^period != 1 mod e".into()));
        }
        // y commutes with y^period = x^carry
        if (s.carry as u128 * (s.action as u128 + e as u128 - 1)) % e as u128 != 0 {
            return Err(GroupError::InvalidShape("carry not fixed by the action".into()));
        }
        Ok(s)
    }

    pub fn order(&self) -> u64 {
        self.e * self.period
    }

    pub fn identity(&self) -> WordElement {
        WordElement::new(0, 0)
    }

    pub fn x(&self) -> WordElement {
        WordElement::new(1 % self.e, 0)
    }

    pub fn y(&self) -> WordElement {
        WordElement::new(0, 1 % self.period)
    }

    pub fn element(&self, a: i128, b: i128) -> WordElement {
        WordElement::new(
            a.rem_euclid(self.e as i128) as u64,
            b.rem_euclid(self.period as i128) as u64,
        )
    }

    pub fn contains(&self, u: &WordElement) -> bool {
        u.a < self.e && u.b < self.period
    }

    fn action_pow(&self, b: u64) -> u64 {
        pow_mod(self.action, b, self.e)
    }

    pub fn mul(&self, u: &WordElement, v: &WordElement) -> WordElement {
        let e = self.e as u128;
        let sum_b = u.b + v.b;
        let wraps = (sum_b / self.period) as u128;
        let a = (u.a as u128 + v.a as u128 * self.action_pow(u.b) as u128 + self.carry as u128 * wraps) % e;
        WordElement::new(a as u64, sum_b % self.period)
    }

    /// Multiplication that rejects elements outside the normal-form box.
    pub fn try_mul(&self, u: &WordElement, v: &WordElement) -> Result<WordElement, GroupError> {
        if !self.contains(u) || !self.contains(v) {
            return Err(GroupError::ShapeMismatch);
        }
        Ok(self.mul(u, v))
    }

    pub fn inv(&self, u: &WordElement) -> WordElement {
        // (x^a y^b)^{-1} = y^{-b} x^{-a}; y^{-b} = x^{-carry} y^{period-b} for b > 0
        if u.b == 0 {
            return WordElement::new((self.e - u.a) % self.e, 0);
        }
        let y_neg_b = WordElement::new((self.e - self.carry) % self.e, self.period - u.b);
        self.mul(&y_neg_b, &WordElement::new((self.e - u.a) % self.e, 0))
    }

    pub fn pow(&self, u: &WordElement, mut exp: u128) -> WordElement {
        let mut base = *u;
        let mut acc = self.identity();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// `u^n` for a possibly negative exponent.
    pub fn pow_signed(&self, u: &WordElement, exp: i128) -> WordElement {
        let w = self.pow(u, exp.unsigned_abs());
        if exp < 0 {
            self.inv(&w)
        } else {
            w
        }
    }

    pub fn element_order(&self, u: &WordElement) -> u64 {
        let n = self.order();
        let mut ord = n;
        for q in crate::arith::prime_divisors(n) {
            while ord % q == 0 && self.pow(u, (ord / q) as u128) == self.identity() {
                ord /= q;
            }
        }
        ord
    }

    pub fn conj(&self, g: &WordElement, u: &WordElement) -> WordElement {
        self.mul(&self.mul(g, u), &self.inv(g))
    }

    /// `u v u^{-1} v^{-1}`.
    pub fn commutator(&self, u: &WordElement, v: &WordElement) -> WordElement {
        self.mul(&self.mul(u, v), &self.mul(&self.inv(u), &self.inv(v)))
    }

    pub fn elements(&self) -> impl Iterator<Item = WordElement> + '_ {
        (0..self.period).flat_map(move |b| (0..self.e).map(move |a| WordElement::new(a, b)))
    }

    /// Modulus of the first abelianization coordinate: `p - 1` for the odd
    /// normalizer, `1` for `p = 2` and the (3,3) shape.
    pub fn abelian_modulus(&self) -> u64 {
        gcd(gcd(self.e, (self.action + self.e - 1) % self.e), self.carry)
    }

    /// `x^a y^b ↦ (a mod A, b)` onto `Z/A × Z/period`.
    pub fn abelianization(&self, u: &WordElement) -> (u64, u64) {
        (u.a % self.abelian_modulus(), u.b)
    }

    pub fn abelianization_order(&self) -> u64 {
        self.abelian_modulus() * self.period
    }

    /// Exponent `g` with `[N, N] = ⟨x^g⟩`.
    pub fn derived_generator(&self) -> u64 {
        gcd(self.e, (self.action + self.e - 1) % self.e)
    }

    pub fn random_element(&self, rng: &mut impl Rng) -> WordElement {
        WordElement::new(rng.gen_range(0..self.e), rng.gen_range(0..self.period))
    }
}

/// Groups up to this order get every commutator listed explicitly.
pub const COMMUTATOR_ENUMERATION_LIMIT: u64 = 2_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedReport {
    /// `[N, N] = ⟨x^generator⟩`.
    pub generator: u64,
    pub order: u64,
    pub by_enumeration: bool,
}

/// Subgroup generated by `gens`, by closure.
pub fn generated_subgroup(shape: &GroupShape, gens: &[WordElement]) -> HashSet<WordElement> {
    let mut seen: HashSet<WordElement> = HashSet::from([shape.identity()]);
    let mut frontier = vec![shape.identity()];
    while let Some(u) = frontier.pop() {
        for g in gens {
            let v = shape.mul(&u, g);
            if seen.insert(v) {
                frontier.push(v);
            }
        }
    }
    seen
}

/// Computes `[N, N]` and checks it is `{x^{g·i}}` with `g = gcd(e, c - 1)`.
pub fn derived_subgroup_check(shape: &GroupShape) -> Result<DerivedReport, GroupError> {
    let g = shape.derived_generator();
    let expected: HashSet<WordElement> = (0..shape.e / g).map(|i| WordElement::new(i * g, 0)).collect();
    let by_enumeration = shape.order() <= COMMUTATOR_ENUMERATION_LIMIT;
    let subgroup = if by_enumeration {
        let all: Vec<WordElement> = shape.elements().collect();
        let comms: HashSet<WordElement> =
            all.iter().flat_map(|u| all.iter().map(move |v| shape.commutator(u, v))).collect();
        generated_subgroup(shape, &comms.into_iter().collect::<Vec<_>>())
    } else {
        // normal closure of [y, x] = x^{c-1}; N is generated by x and y
        let c = shape.commutator(&shape.y(), &shape.x());
        let mut gens = vec![c];
        let mut cur = c;
        for _ in 1..shape.period {
            cur = shape.conj(&shape.y(), &cur);
            gens.push(cur);
        }
        gens.push(shape.commutator(&shape.x(), &shape.y()));
        generated_subgroup(shape, &gens)
    };
    if subgroup != expected {
        return Err(GroupError::RelationFailed(format!(
            "[N,N] = <x^{g}> (found {} elements, expected {})",
            subgroup.len(),
            expected.len()
        )));
    }
    Ok(DerivedReport { generator: g, order: expected.len() as u64, by_enumeration })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub relations_checked: usize,
    pub products_checked: usize,
    pub orders_checked: usize,
}

/// `x^a y^b ↦ X^a Y^b`.
pub fn realize(mat_x: &SympMatrix, mat_y: &SympMatrix, u: &WordElement) -> SympMatrix {
    mat_x.pow(u.a as u128).mul(&mat_y.pow(u.b as u128)).expect("same form")
}

fn matrix_order_bounded(m: &SympMatrix, n: u64) -> u64 {
    let mut ord = n;
    if !m.pow(n as u128).matrix().is_identity() {
        return 0;
    }
    for q in crate::arith::prime_divisors(n) {
        while ord % q == 0 && m.pow((ord / q) as u128).matrix().is_identity() {
            ord /= q;
        }
    }
    ord
}

/// Checks that `x ↦ X, y ↦ Y` respects the presentation and agrees with
/// word multiplication on seeded random samples.
pub fn matrix_word_consistency(
    shape: &GroupShape,
    mat_x: &SympMatrix,
    mat_y: &SympMatrix,
    samples: usize,
    seed: u64,
) -> Result<ConsistencyReport, GroupError> {
    let mismatch = |what: String| GroupError::RealizationMismatch(what);
    if !mat_x.pow(shape.e as u128).matrix().is_identity() {
        return Err(mismatch("x^e".into()));
    }
    if mat_y.pow(shape.period as u128) != mat_x.pow(shape.carry as u128) {
        return Err(mismatch("y^period = x^carry".into()));
    }
    let yinv = mat_y.inverse().ok_or_else(|| mismatch("Y not invertible".into()))?;
    if mat_y.mul(mat_x)?.mul(&yinv)? != mat_x.pow(shape.action as u128) {
        return Err(mismatch("y x y^-1 = x^c".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let u = shape.random_element(&mut rng);
        let v = shape.random_element(&mut rng);
        let lhs = realize(mat_x, mat_y, &shape.mul(&u, &v));
        let rhs = realize(mat_x, mat_y, &u).mul(&realize(mat_x, mat_y, &v))?;
        if lhs != rhs {
            return Err(mismatch(format!("product of {u:?} and {v:?}")));
        }
    }
    let order_samples = samples.div_ceil(10);
    for _ in 0..order_samples {
        let u = shape.random_element(&mut rng);
        let m = realize(mat_x, mat_y, &u);
        if shape.element_order(&u) != matrix_order_bounded(&m, shape.order()) {
            return Err(mismatch(format!("order of {u:?}")));
        }
    }
    Ok(ConsistencyReport { relations_checked: 3, products_checked: samples, orders_checked: order_samples })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitVerdict {
    pub splits: bool,
    /// Lifts of the generators of `N^ab`: `(u, w)` with images `(1, 0)` and `(0, 1)`.
    pub witness: Option<(WordElement, WordElement)>,
    pub pairs_searched: u64,
}

/// Searches for a section of `N → N^ab` given by commuting lifts of the two
/// cyclic factors with the right orders.
pub fn extension_splits(shape: &GroupShape) -> SplitVerdict {
    let am = shape.abelian_modulus();
    let us: Vec<WordElement> = (0..shape.e)
        .filter(|a| a % am == 1 % am)
        .map(|a| WordElement::new(a, 0))
        .filter(|u| shape.pow(u, am as u128) == shape.identity())
        .collect();
    let ws: Vec<WordElement> = (0..shape.e)
        .filter(|a| a % am == 0)
        .map(|a| WordElement::new(a, 1 % shape.period))
        .filter(|w| shape.pow(w, shape.period as u128) == shape.identity())
        .collect();
    let mut searched = 0;
    for u in &us {
        for w in &ws {
            searched += 1;
            if shape.mul(u, w) == shape.mul(w, u) {
                return SplitVerdict { splits: true, witness: Some((*u, *w)), pairs_searched: searched };
            }
        }
    }
    SplitVerdict { splits: false, witness: None, pairs_searched: searched }
}

/// Independent check of splitting: look for a complement to `[N, N]`
/// among all two-generator subgroups. Only for small groups.
pub fn splits_by_complement_search(shape: &GroupShape) -> Option<bool> {
    if shape.order() > 200 {
        return None;
    }
    let g = shape.derived_generator();
    let target = shape.order() / (shape.e / g);
    let all: Vec<WordElement> = shape.elements().collect();
    for (i, u) in all.iter().enumerate() {
        for v in &all[i..] {
            let sub = generated_subgroup(shape, &[*u, *v]);
            if sub.len() as u64 == target && sub.iter().all(|w| w.b != 0 || w.a % g != 0 || w.a == 0) {
                return Some(true);
            }
        }
    }
    Some(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalizer::NormalizerData;
    use proptest::prelude::*;

    #[test]
    fn shape_3_1_examples() {
        let s = GroupShape::standard(3, 1).unwrap();
        assert_eq!((s.e, s.carry, s.period), (8, 4, 2));
        assert_eq!(s.mul(&s.y(), &s.x()), WordElement::new(3, 1));
        assert_eq!(s.mul(&s.y(), &s.y()), WordElement::new(4, 0));
        assert_eq!(s.element_order(&WordElement::new(1, 1)), 2);
    }

    #[test]
    fn abelianization_examples() {
        let s = GroupShape::standard(5, 2).unwrap();
        assert_eq!(s.abelian_modulus(), 4);
        assert_eq!(s.abelianization(&s.pow(&s.x(), 4)), (0, 0));
        assert_eq!(s.abelianization(&s.y()), (0, 1));
        assert_eq!(GroupShape::standard(2, 3).unwrap().abelian_modulus(), 1);
        assert_eq!(GroupShape::special33().abelian_modulus(), 1);
    }

    #[test]
    fn derived_examples() {
        let r = derived_subgroup_check(&GroupShape::standard(3, 1).unwrap()).unwrap();
        assert_eq!((r.generator, r.order), (2, 4));
        assert!(r.by_enumeration);
        let r = derived_subgroup_check(&GroupShape::standard(2, 2).unwrap()).unwrap();
        assert_eq!((r.generator, r.order), (1, 5));
        assert_eq!(derived_subgroup_check(&GroupShape::standard(3, 2).unwrap()).unwrap().order, 10);
        let big = derived_subgroup_check(&GroupShape::standard(7, 3).unwrap()).unwrap();
        assert!(!big.by_enumeration);
        assert_eq!(big.order, 344);
        assert_eq!(derived_subgroup_check(&GroupShape::special33()).unwrap().order, 13);
    }

    #[test]
    fn splitting_examples() {
        let s = extension_splits(&GroupShape::standard(2, 2).unwrap());
        assert!(s.splits);
        assert_eq!(s.witness.unwrap().1, WordElement::new(0, 1));
        assert!(!extension_splits(&GroupShape::standard(3, 1).unwrap()).splits);
        assert!(!extension_splits(&GroupShape::standard(3, 2).unwrap()).splits);
        assert!(extension_splits(&GroupShape::special33()).splits);
    }

    #[test]
    fn splitting_matches_complement_search() {
        for (p, d) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1), (5, 2), (11, 1)] {
            let s = GroupShape::standard(p, d).unwrap();
            if let Some(brute) = splits_by_complement_search(&s) {
                assert_eq!(brute, extension_splits(&s).splits, "({p}, {d})");
            }
        }
    }

    #[test]
    fn consistent_with_matrices() {
        for (p, d) in [(2, 2), (3, 1), (3, 2), (5, 1)] {
            let nd = NormalizerData::build(p, d).unwrap();
            let s = GroupShape::standard(p, d).unwrap();
            let r = matrix_word_consistency(&s, &nd.mat_x, &nd.mat_y, 1000, 1).unwrap();
            assert_eq!(r.orders_checked, 100);
        }
    }

    #[test]
    fn mismatched_realization_is_reported() {
        let nd = NormalizerData::build(3, 1).unwrap();
        let s = GroupShape::standard(3, 1).unwrap();
        assert!(matrix_word_consistency(&s, &nd.mat_x, &nd.mat_x, 10, 1).is_err());
    }

    #[test]
    fn invalid_shapes() {
        assert!(GroupShape::new(3, 1, 8, 2, 3, 1).is_err());
        assert!(GroupShape::new(3, 1, 8, 3, 3, 0).is_err());
        assert!(GroupShape::standard(3, 1).unwrap().try_mul(&WordElement::new(9, 0), &WordElement::new(0, 0)).is_err());
    }

    #[test]
    fn conjugation_by_y_multiplies_derived_exponents_by_p() {
        let s = GroupShape::standard(5, 2).unwrap();
        let g = s.derived_generator();
        for i in 0..s.e / g {
            let u = WordElement::new(i * g, 0);
            assert_eq!(s.conj(&s.y(), &u), WordElement::new(i * g * 5 % s.e, 0));
        }
    }

    fn shape_strategy() -> impl Strategy<Value = GroupShape> {
        prop_oneof![
            (prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), 1u32..=3)
                .prop_map(|(p, d)| GroupShape::standard(p, d).unwrap()),
            Just(GroupShape::special33()),
        ]
    }

    proptest! {
        #[test]
        fn group_laws(s in shape_strategy(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (u, v, w) = (s.random_element(&mut rng), s.random_element(&mut rng), s.random_element(&mut rng));
            prop_assert_eq!(s.mul(&s.mul(&u, &v), &w), s.mul(&u, &s.mul(&v, &w)));
            prop_assert_eq!(s.mul(&u, &s.inv(&u)), s.identity());
            prop_assert_eq!(s.mul(&s.inv(&u), &u), s.identity());
            let (au, av) = (s.abelianization(&u), s.abelianization(&v));
            let am = s.abelian_modulus();
            let uv = s.abelianization(&s.mul(&u, &v));
            prop_assert_eq!(uv, ((au.0 + av.0) % am, (au.1 + av.1) % s.period));
            prop_assert_eq!(s.pow(&u, s.order() as u128), s.identity());
        }
    }
}
