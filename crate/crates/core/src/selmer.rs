//! `H¹((Z/m)^×, Z/m)` with the multiplication action, local conditions on
//! cyclic subgroups and on the 2-inertia subgroup, and the transfer
//! `(a, b) ↦ p^{-a} b`.
//!
//! A cocycle is stored as its values on a fixed CRT generating set. Classes
//! are enumerated in canonical form: `v_j` is reduced modulo
//! `(g_j - 1) C_{j-1}`, where `C_{j-1}` is the set of `c` with
//! `(g_i - 1) c = 0` for `i < j`.

use crate::arith::{factor, gcd, inv_mod, mul_mod, pow_mod, primitive_root, reduce_signed};
use crate::error::CohomologyError;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Upper bound on partial classes visited during enumeration.
pub const CLASS_LIMIT: u128 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitGenerator {
    /// The generator as a unit mod `m` (≡ 1 at the other prime powers).
    pub value: u64,
    pub order: u64,
    /// The prime power `q^k` this generator lives at.
    pub component: u64,
    /// Its residue mod `component`.
    pub local: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitGroup {
    pub m: u64,
    pub generators: Vec<UnitGenerator>,
}

/// Discrete log of `target` to base `g` in a cyclic group of the given order.
fn bsgs(g: u64, target: u64, modulus: u64, order: u64) -> Option<u64> {
    let step = (order as f64).sqrt().ceil() as u64 + 1;
    let mut baby = HashMap::with_capacity(step as usize);
    let mut cur = 1 % modulus;
    for j in 0..step {
        baby.entry(cur).or_insert(j);
        cur = mul_mod(cur, g, modulus);
    }
    let giant = inv_mod(pow_mod(g, step, modulus), modulus)?;
    let mut gamma = target % modulus;
    for i in 0..=step {
        if let Some(&j) = baby.get(&gamma) {
            return Some((i * step + j) % order);
        }
        gamma = mul_mod(gamma, giant, modulus);
    }
    None
}

impl UnitGroup {
    pub fn new(m: u64) -> Result<Self, CohomologyError> {
        if m < 2 {
            return Err(CohomologyError::ModulusTooSmall(m));
        }
        let mut local = Vec::new();
        for (q, k) in factor(m) {
            let qk = q.pow(k);
            if q == 2 {
                if k >= 2 {
                    local.push((qk, qk - 1, 2));
                }
                if k >= 3 {
                    local.push((qk, 5, qk >> 2));
                }
            } else {
                let mut g = primitive_root(q);
                if k >= 2 && pow_mod(g, q - 1, q * q) == 1 {
                    g += q;
                }
                local.push((qk, g, qk / q * (q - 1)));
            }
        }
        let generators = local
            .into_iter()
            .map(|(qk, g, order)| {
                let rest = m / qk;
                // value ≡ g mod qk, ≡ 1 mod rest
                let t = mul_mod(reduce_signed(g as i128 - 1, qk), inv_mod(rest % qk, qk).unwrap_or(0), qk);
                let value = (1 + rest as u128 * t as u128) as u64 % m;
                UnitGenerator { value, order, component: qk, local: g }
            })
            .collect();
        Ok(UnitGroup { m, generators })
    }

    pub fn order(&self) -> u64 {
        self.generators.iter().map(|g| g.order).product()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Exponent vector of a unit.
    pub fn decompose(&self, u: u64) -> Option<Vec<u64>> {
        if gcd(u % self.m, self.m) != 1 {
            return None;
        }
        let mut out = Vec::with_capacity(self.rank());
        let mut i = 0;
        while i < self.generators.len() {
            let gen = &self.generators[i];
            let qk = gen.component;
            let r = u % qk;
            if qk % 2 == 0 {
                // (-1)^s 5^t mod 2^k
                let s = u64::from(r % 4 == 3);
                out.push(s);
                if qk >= 8 {
                    let pos = if s == 1 { qk - r } else { r };
                    out.push(bsgs(5, pos, qk, qk >> 2)?);
                    i += 1;
                }
            } else {
                out.push(bsgs(gen.local, r, qk, gen.order)?);
            }
            i += 1;
        }
        Some(out)
    }

    pub fn compose(&self, exps: &[u64]) -> u64 {
        self.generators
            .iter()
            .zip(exps)
            .fold(1 % self.m, |acc, (g, &e)| mul_mod(acc, pow_mod(g.value, e, self.m), self.m))
    }

    /// Generators lying in `ker((Z/m)^× → (Z/m_1)^×)`, `m = 2^r m_1`.
    pub fn two_part(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.generators[i].component % 2 == 0).collect()
    }

    /// `1 + g + ... + g^{order-1}` for generator `i`.
    fn norm(&self, i: usize) -> u64 {
        let g = &self.generators[i];
        crate::arith::geometric_sum_mod(g.value, g.order, self.m)
    }

    /// Calls `visit(u, f(u))` for every unit, extending the generator
    /// values `v` along the exponent box.
    pub fn for_each_value(&self, v: &[u64], mut visit: impl FnMut(u64, u64)) {
        fn rec(gr: &UnitGroup, v: &[u64], i: usize, u: u64, fu: u64, visit: &mut dyn FnMut(u64, u64)) {
            if i == gr.rank() {
                visit(u, fu);
                return;
            }
            let (mut u, mut fu) = (u, fu);
            let g = gr.generators[i].value;
            for _ in 0..gr.generators[i].order {
                rec(gr, v, i + 1, u, fu, visit);
                fu = (fu + mul_mod(u, v[i], gr.m)) % gr.m;
                u = mul_mod(u, g, gr.m);
            }
        }
        rec(self, v, 0, 1 % self.m, 0, &mut visit);
    }

    /// `f(u)` through the exponent vector, generators taken in the given order.
    pub fn evaluate(&self, v: &[u64], u: u64, reverse: bool) -> Option<u64> {
        let exps = self.decompose(u)?;
        let mut idx: Vec<usize> = (0..self.rank()).collect();
        if reverse {
            idx.reverse();
        }
        let m = self.m;
        let (mut prefix, mut acc) = (1 % m, 0u64);
        for i in idx {
            let g = self.generators[i].value;
            let val = mul_mod(crate::arith::geometric_sum_mod(g, exps[i], m), v[i], m);
            acc = (acc + mul_mod(prefix, val, m)) % m;
            prefix = mul_mod(prefix, pow_mod(g, exps[i], m), m);
        }
        Some(acc)
    }

    /// Whether `v` satisfies the norm and commutation relations.
    pub fn is_cocycle(&self, v: &[u64]) -> bool {
        let m = self.m;
        (0..self.rank()).all(|i| {
            mul_mod(self.norm(i), v[i], m) == 0
                && (0..i).all(|j| {
                    let gi = self.generators[i].value;
                    let gj = self.generators[j].value;
                    mul_mod((1 + m - gj) % m, v[i], m) == mul_mod((1 + m - gi) % m, v[j], m)
                })
        })
    }

    pub fn coboundary(&self, c: u64) -> Vec<u64> {
        self.generators.iter().map(|g| mul_mod((g.value + self.m - 1) % self.m, c, self.m)).collect()
    }
}

/// Solves `a_i c ≡ b_i mod m` simultaneously; returns `(c_0, s)` with solution
/// set `c_0 + s Z/m`.
pub fn solve_system(eqs: &[(u64, u64)], m: u64) -> Option<(u64, u64)> {
    let (mut r, mut modulus) = (0u64, 1u64);
    for &(a, b) in eqs {
        let (x, mi) = crate::arith::solve_linear_congruence(a % m, b % m, m)?;
        // merge r mod modulus with x mod mi, both dividing m
        let g = gcd(modulus, mi);
        if (x + g - r % g) % g != 0 {
            return None;
        }
        let l = modulus / g * mi;
        let step = modulus / g;
        let t = if mi / g == 1 {
            0
        } else {
            let diff = reduce_signed(x as i128 - r as i128, mi) / g;
            mul_mod(diff % (mi / g), inv_mod(step % (mi / g), mi / g)?, mi / g)
        };
        r = ((r as u128 + modulus as u128 * t as u128) % l as u128) as u64;
        modulus = l;
    }
    Some((r % modulus.max(1), modulus))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CocycleClass {
    pub m: u64,
    /// Canonical values on the generators.
    pub values: Vec<u64>,
}

impl CocycleClass {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

/// The canonical reduction moduli `h_j`.
fn reduction_moduli(gr: &UnitGroup) -> Vec<u64> {
    let m = gr.m;
    let mut ann = m; // gcd(m, g_1 - 1, ..., g_{j-1} - 1)
    gr.generators
        .iter()
        .map(|g| {
            let s = m / ann;
            let a = (g.value + m - 1) % m;
            let h = gcd((a as u128 * s as u128 % m as u128) as u64, m);
            ann = gcd(ann, a);
            h
        })
        .collect()
}

/// Canonical representative of the class of `v`.
pub fn canonicalize(gr: &UnitGroup, v: &[u64]) -> CocycleClass {
    let m = gr.m;
    let mut v = v.to_vec();
    let mut ann = m;
    for j in 0..gr.rank() {
        let s = m / ann;
        let a = (gr.generators[j].value + m - 1) % m;
        let h = gcd((a as u128 * s as u128 % m as u128) as u64, m);
        // find c ∈ C_{j-1} with v_j - (g_j - 1) c = v_j mod h
        let target = v[j] - v[j] % h;
        if target != 0 {
            let (k, _) = crate::arith::solve_linear_congruence(
                (a as u128 * s as u128 % m as u128) as u64,
                target,
                m,
            )
            .expect("target lies in the image");
            let c = mul_mod(k, s, m);
            for (vi, bi) in v.iter_mut().zip(gr.coboundary(c)) {
                *vi = (*vi + m - bi) % m;
            }
        }
        ann = gcd(ann, a);
    }
    CocycleClass { m, values: v }
}

/// Canonical representatives of every class in `H¹`.
pub fn crossed_hom_space(m: u64) -> Result<(UnitGroup, Vec<CocycleClass>), CohomologyError> {
    let gr = UnitGroup::new(m)?;
    let hs = reduction_moduli(&gr);
    let mut partial: Vec<Vec<u64>> = vec![Vec::new()];
    for (j, &h) in hs.iter().enumerate() {
        let gj = gr.generators[j].value;
        let mut next = Vec::new();
        for v in &partial {
            let mut eqs = vec![(gr.norm(j), 0)];
            for (i, &vi) in v.iter().enumerate() {
                let gi = gr.generators[i].value;
                eqs.push(((1 + m - gi) % m, mul_mod((1 + m - gj) % m, vi, m)));
            }
            let Some((x0, s)) = solve_system(&eqs, m) else { continue };
            let t = gcd(s, h);
            for k in 0..h / t {
                let mut w = v.clone();
                w.push(x0 % t + k * t);
                next.push(w);
            }
            if next.len() as u128 > CLASS_LIMIT {
                return Err(CohomologyError::TooLarge(next.len() as u128));
            }
        }
        partial = next;
    }
    let classes = partial.into_iter().map(|values| CocycleClass { m, values }).collect();
    Ok((gr, classes))
}

/// `f(h) ∈ (h - 1) Z/m` for every unit `h`.
pub fn trivial_on_cyclic_subgroups(gr: &UnitGroup, v: &[u64]) -> bool {
    let m = gr.m;
    let mut ok = true;
    gr.for_each_value(v, |h, fh| {
        if ok && fh % gcd((h + m - 1) % m, m) != 0 {
            ok = false;
        }
    });
    ok
}

/// A single `c` with `f(h) = (h - 1) c` on the 2-inertia subgroup, if any.
pub fn inertia_coboundary(gr: &UnitGroup, v: &[u64]) -> Option<u64> {
    let m = gr.m;
    let eqs: Vec<(u64, u64)> =
        gr.two_part().into_iter().map(|i| ((gr.generators[i].value + m - 1) % m, v[i])).collect();
    solve_system(&eqs, m).map(|(c, _)| c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelmerReport {
    pub m: u64,
    pub with_2_condition: bool,
    /// Order of the surviving subgroup of `H¹`.
    pub order: u64,
    pub h1_order: u64,
    /// A nonzero surviving class, if there is one.
    pub witness: Option<CocycleClass>,
}

pub fn selmer_report(m: u64, with_2_condition: bool) -> Result<SelmerReport, CohomologyError> {
    let (gr, classes) = crossed_hom_space(m)?;
    let h1_order = classes.len() as u64;
    let surviving: Vec<CocycleClass> = classes
        .into_iter()
        .filter(|c| trivial_on_cyclic_subgroups(&gr, &c.values))
        .filter(|c| !with_2_condition || inertia_coboundary(&gr, &c.values).is_some())
        .collect();
    let witness = surviving.iter().find(|c| !c.is_zero()).cloned();
    Ok(SelmerReport { m, with_2_condition, order: surviving.len() as u64, h1_order, witness })
}

/// Order of the subgroup of `H¹` passing the local conditions.
pub fn selmer_dim(m: u64, with_2_condition: bool) -> Result<u64, CohomologyError> {
    selmer_report(m, with_2_condition).map(|r| r.order)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialClassReport {
    pub m: u64,
    pub values: Vec<u64>,
    pub is_cocycle: bool,
    pub class_nonzero: bool,
    pub cyclic_trivial: bool,
    pub inertia_nontrivial: bool,
    /// `(h, c)` with `h ≡ 5 mod 8` and `(h - 1) c = m/2`.
    pub cyclic_witness: (u64, u64),
}

/// `χ(g) = 0` for `g ≡ 1, 3 mod 8` and `m/2` for `g ≡ 5, 7 mod 8`.
pub fn special_character(m: u64, g: u64) -> u64 {
    if matches!(g % 8, 5 | 7) {
        m / 2
    } else {
        0
    }
}

pub fn special_class_check(m: u64) -> Result<SpecialClassReport, CohomologyError> {
    if m % 8 != 0 {
        return Err(CohomologyError::NotSpecial(m));
    }
    let gr = UnitGroup::new(m)?;
    let values: Vec<u64> = gr.generators.iter().map(|g| special_character(m, g.value)).collect();
    let mut agrees = gr.is_cocycle(&values);
    gr.for_each_value(&values, |u, fu| agrees &= fu == special_character(m, u));
    let class_nonzero = !canonicalize(&gr, &values).is_zero()
        && solve_system(&gr.coboundary(1).into_iter().zip(values.iter().copied()).collect::<Vec<_>>(), m).is_none();
    let cyclic_trivial = trivial_on_cyclic_subgroups(&gr, &values);
    let inertia_nontrivial = inertia_coboundary(&gr, &values).is_none();
    let h = (5..m).step_by(8).find(|&h| gcd(h, m) == 1).expect("5 is a unit");
    let (c, _) = crate::arith::solve_linear_congruence(h - 1, m / 2, m)
        .ok_or_else(|| CohomologyError::SpecialClass(format!("no coboundary at h = {h}")))?;
    let report = SpecialClassReport {
        m,
        values,
        is_cocycle: agrees,
        class_nonzero,
        cyclic_trivial,
        inertia_nontrivial,
        cyclic_witness: (h, c),
    };
    for (ok, what) in [
        (report.is_cocycle, "cocycle law"),
        (report.class_nonzero, "class is zero"),
        (report.cyclic_trivial, "cyclic restriction"),
        (report.inertia_nontrivial, "inertia restriction is a coboundary"),
    ] {
        if !ok {
            return Err(CohomologyError::SpecialClass(what.into()));
        }
    }
    Ok(report)
}

/// `(a, b) ↦ p^{-a} b mod m`.
pub fn dual_transfer(a: u64, b: u64, p: u64, m: u64) -> Result<u64, CohomologyError> {
    let inv = inv_mod(p % m, m).ok_or(CohomologyError::NotInvertible(p, m))?;
    Ok(mul_mod(pow_mod(inv, a, m), b % m, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn units(m: u64) -> Vec<u64> {
        (1..m).filter(|&u| gcd(u, m) == 1).collect()
    }

    /// Brute force: all generator tuples whose extension obeys the cocycle
    /// law on every pair, and the coboundary tuples.
    fn brute(m: u64, keep: impl Fn(&HashMap<u64, u64>) -> bool) -> (usize, usize) {
        let gr = UnitGroup::new(m).unwrap();
        let us = units(m);
        let total = m.pow(gr.rank() as u32);
        let mut z1 = 0;
        for idx in 0..total {
            let v: Vec<u64> = (0..gr.rank()).map(|i| idx / m.pow(i as u32) % m).collect();
            let f: HashMap<u64, u64> = us.iter().map(|&u| (u, gr.evaluate(&v, u, false).unwrap())).collect();
            let law = us.iter().all(|&g| us.iter().all(|&h| f[&(g * h % m)] == (f[&g] + g * f[&h]) % m));
            if law && keep(&f) {
                z1 += 1;
            }
        }
        let b1: std::collections::HashSet<Vec<u64>> = (0..m).map(|c| gr.coboundary(c)).collect();
        (z1, b1.len())
    }

    #[test]
    fn unit_group_decomposition_is_bijective() {
        for m in 2..=200u64 {
            let gr = UnitGroup::new(m).unwrap();
            let us = units(m);
            assert_eq!(gr.order(), us.len().max(1) as u64, "m = {m}");
            for &u in &us {
                let e = gr.decompose(u).unwrap();
                assert!(e.iter().zip(&gr.generators).all(|(x, g)| *x < g.order));
                assert_eq!(gr.compose(&e), u % m);
            }
        }
    }

    #[test]
    fn small_h1() {
        let (_, c3) = crossed_hom_space(3).unwrap();
        assert_eq!(c3.len(), 1);
        let (_, c4) = crossed_hom_space(4).unwrap();
        assert_eq!(c4.len(), 2);
        assert_eq!(brute(3, |_| true), (3, 3));
        assert_eq!(brute(4, |_| true), (4, 2));
    }

    #[test]
    fn h1_matches_brute_force() {
        for m in 2..=40u64 {
            let (gr, classes) = crossed_hom_space(m).unwrap();
            if gr.rank() > 3 {
                continue;
            }
            let (z1, b1) = brute(m, |_| true);
            assert_eq!(classes.len(), z1 / b1, "m = {m}");
            let (z1s, _) = brute(m, |f| f.iter().all(|(&h, &fh)| fh % gcd((h + m - 1) % m, m) == 0));
            assert_eq!(selmer_dim(m, false).unwrap() as usize, z1s / b1, "m = {m}");
        }
    }

    #[test]
    fn classes_are_canonical() {
        for m in [8u64, 24, 26, 28, 40, 50, 82] {
            let (gr, classes) = crossed_hom_space(m).unwrap();
            let mut seen = std::collections::HashSet::new();
            for c in &classes {
                assert!(gr.is_cocycle(&c.values));
                assert_eq!(canonicalize(&gr, &c.values), *c);
                assert!(seen.insert(c.clone()));
                let shifted: Vec<u64> = c.values.iter().zip(gr.coboundary(7)).map(|(a, b)| (a + b) % m).collect();
                assert_eq!(canonicalize(&gr, &shifted), *c);
            }
        }
    }

    #[test]
    fn extension_is_path_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for m in [8u64, 15, 24, 40, 63, 80, 82, 96] {
            let (gr, classes) = crossed_hom_space(m).unwrap();
            let us = units(m);
            for c in &classes {
                for _ in 0..1000 {
                    let g = us[rng.gen_range(0..us.len())];
                    let h = us[rng.gen_range(0..us.len())];
                    let fg = gr.evaluate(&c.values, g, false).unwrap();
                    assert_eq!(fg, gr.evaluate(&c.values, g, true).unwrap());
                    let fh = gr.evaluate(&c.values, h, true).unwrap();
                    let fgh = gr.evaluate(&c.values, g * h % m, false).unwrap();
                    assert_eq!(fgh, (fg + g * fh) % m);
                }
            }
        }
    }

    #[test]
    fn selmer_examples() {
        assert_eq!(selmer_dim(8, false).unwrap(), 2);
        assert_eq!(selmer_dim(8, true).unwrap(), 1);
        assert_eq!(selmer_dim(10, false).unwrap(), 1);
        let r = selmer_report(16, false).unwrap();
        let w = r.witness.unwrap();
        let gr = UnitGroup::new(16).unwrap();
        let expected: Vec<u64> = gr.generators.iter().map(|g| special_character(16, g.value)).collect();
        assert_eq!(w, canonicalize(&gr, &expected));
    }

    #[test]
    fn special_class_examples() {
        let r = special_class_check(8).unwrap();
        assert_eq!([3, 5, 7].map(|g| special_character(8, g)), [0, 4, 4]);
        assert_eq!(r.cyclic_witness.0, 5);
        assert_eq!(4 * r.cyclic_witness.1 % 8, 4);
        let r = special_class_check(40).unwrap();
        assert_eq!(special_character(40, 13), 20);
        assert_eq!((r.cyclic_witness.0 - 1) * r.cyclic_witness.1 % 40, 20);
        assert_eq!(special_class_check(12), Err(CohomologyError::NotSpecial(12)));
    }

    #[test]
    fn transfer_examples() {
        assert_eq!(dual_transfer(1, 7, 3, 10).unwrap(), 9);
        assert_eq!(dual_transfer(0, 7, 3, 10).unwrap(), 7);
        assert_eq!(dual_transfer(3, 1, 3, 10).unwrap(), mul_mod(dual_transfer(1, 1, 3, 10).unwrap(), dual_transfer(2, 1, 3, 10).unwrap(), 10));
        for (p, d) in [(3u64, 2u32), (2, 3), (5, 1), (3, 3)] {
            let m = p.pow(d) + 1;
            let us = units(m);
            let kernel = (0..2 * d as u64)
                .flat_map(|a| us.iter().map(move |&b| (a, b)))
                .filter(|&(a, b)| dual_transfer(a, b, p, m).unwrap() == 1)
                .count();
            assert_eq!(kernel, 2 * d as usize);
            let image: std::collections::HashSet<u64> = us.iter().map(|&b| dual_transfer(1, b, p, m).unwrap()).collect();
            assert_eq!(image.len(), us.len());
        }
        assert_eq!(dual_transfer(1, 1, 2, 4), Err(CohomologyError::NotInvertible(2, 4)));
    }

    #[test]
    fn system_solver_agrees_with_scan() {
        let m = 48;
        for a1 in 0..m {
            for b1 in [0u64, 4, 6, 12] {
                let eqs = [(a1, b1), (10, 20)];
                let scan: Vec<u64> = (0..m).filter(|&c| eqs.iter().all(|&(a, b)| a * c % m == b % m)).collect();
                match solve_system(&eqs, m) {
                    None => assert!(scan.is_empty()),
                    Some((c0, s)) => {
                        let got: Vec<u64> = (0..m / s).map(|k| c0 + k * s).collect();
                        assert_eq!(got, scan);
                    }
                }
            }
        }
    }
}
