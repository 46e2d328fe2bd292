//! The Cartan subgroup `C = ⟨X⟩`, its symplectic part `C_1` and the group
//! `N = ⟨X, Y⟩ ⊂ GSp(2d, F_p)` as explicit matrices.

use crate::arith::{gcd, multiplicative_order, prime_divisors};
use crate::error::GroupError;
use crate::symplectic::{gram_matrix, operator_matrix, GramForm, Operator, SympMatrix};
use crate::tower::{AlphaChoice, FieldTower, TowerElement};
use std::collections::HashSet;
use std::sync::Arc;

/// Groups up to this order are also counted by listing every `X^a Y^b`.
pub const ENUMERATION_LIMIT: u64 = 100_000;

#[derive(Clone, Debug)]
pub struct NormalizerData {
    pub p: u64,
    pub d: u32,
    /// `(p^d + 1)(p - 1)`.
    pub e: u64,
    pub tower: Arc<FieldTower>,
    pub form: Arc<GramForm>,
    /// Cartan generator `x ∈ l'^×`.
    pub x: TowerElement,
    /// `α` with `Norm(α) = η^{1-p}`; absent for `p = 2`.
    pub alpha: Option<AlphaChoice>,
    pub mat_x: SympMatrix,
    pub mat_y: SympMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationReport {
    /// Names of the relations that were checked, in order.
    pub relations: Vec<String>,
    pub order_x: u64,
    pub order_y: u64,
    pub group_order: u64,
    /// Whether the order was additionally confirmed by listing all elements.
    pub enumerated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilitudeReport {
    pub sim_x: u64,
    pub norm_x: u64,
    pub sim_y: u64,
    pub surjective: bool,
    /// Order of `⟨X⟩ ∩ Sp`, when checked by enumeration.
    pub c1_order: Option<u64>,
}

fn fail(name: impl Into<String>) -> GroupError {
    GroupError::RelationFailed(name.into())
}

/// Order of a matrix known to divide `n`.
pub fn matrix_order(m: &SympMatrix, n: u64) -> Option<u64> {
    if !m.pow(n as u128).matrix().is_identity() {
        return None;
    }
    let mut ord = n;
    for q in prime_divisors(n) {
        while ord % q == 0 && m.pow((ord / q) as u128).matrix().is_identity() {
            ord /= q;
        }
    }
    Some(ord)
}

impl NormalizerData {
    /// Builds `X` (multiplication by the Cartan generator) and `Y`
    /// (Frobenius for `p = 2`, `ασ` for odd `p`) and checks the invariants.
    pub fn build(p: u64, d: u32) -> Result<Self, GroupError> {
        let tower = Arc::new(FieldTower::build(p, d)?);
        let form = Arc::new(gram_matrix(&tower));
        let x = tower.find_cartan_generator();
        let mat_x = SympMatrix::new(operator_matrix(&tower, &Operator::MultiplyBy(x.clone()))?, form.clone())?;
        let (alpha, y_op) = if p == 2 {
            (None, Operator::AlphaFrobenius { alpha: tower.one(), power: 1 })
        } else {
            let choice = tower.find_alpha()?;
            let op = Operator::AlphaFrobenius { alpha: choice.alpha.clone(), power: 1 };
            (Some(choice), op)
        };
        let mat_y = SympMatrix::new(operator_matrix(&tower, &y_op)?, form.clone())?;
        let nd = Self { p, d, e: tower.cartan_order(), tower, form, x, alpha, mat_x, mat_y };
        nd.check_invariants()?;
        Ok(nd)
    }

    /// Rebuilds from given matrices (used when re-checking serialized data).
    pub fn from_parts(
        tower: Arc<FieldTower>,
        x: TowerElement,
        alpha: Option<AlphaChoice>,
        mat_x: SympMatrix,
        mat_y: SympMatrix,
    ) -> Self {
        let form = mat_x.form().clone();
        Self { p: tower.p(), d: tower.d() as u32, e: tower.cartan_order(), tower, form, x, alpha, mat_x, mat_y }
    }

    /// Order of `N`: `2d·e`.
    pub fn group_order(&self) -> u64 {
        2 * self.d as u64 * self.e
    }

    fn check_invariants(&self) -> Result<(), GroupError> {
        if matrix_order(&self.mat_x, self.e) != Some(self.e) {
            return Err(fail("order(X) = e"));
        }
        if !self.mat_y.is_symplectic() {
            return Err(fail("Y in Sp"));
        }
        let y_order = if self.p == 2 { 2 * self.d as u64 } else { 4 * self.d as u64 };
        if matrix_order(&self.mat_y, y_order) != Some(y_order) {
            return Err(fail(format!("order(Y) = {y_order}")));
        }
        let yinv = self.mat_y.inverse().ok_or_else(|| fail("Y invertible"))?;
        let conj = self.mat_y.mul(&self.mat_x)?.mul(&yinv)?;
        if conj != self.mat_x.pow(self.p as u128) {
            return Err(fail("Y X Y^-1 = X^p"));
        }
        Ok(())
    }

    /// Checks the defining relations and certifies `|N| = 2d·e`.
    pub fn verify_presentation(&self) -> Result<PresentationReport, GroupError> {
        let e = self.e as u128;
        let two_d = 2 * self.d as u128;
        let mut relations = Vec::new();
        if !self.mat_x.pow(e).matrix().is_identity() {
            return Err(fail("X^e = I"));
        }
        relations.push("X^e = I".to_string());
        let y2d = self.mat_y.pow(two_d);
        if self.p == 2 {
            if !y2d.matrix().is_identity() {
                return Err(fail("Y^2d = I"));
            }
            relations.push("Y^2d = I".to_string());
        } else {
            if y2d != self.mat_x.pow(e / 2) {
                return Err(fail("Y^2d = X^(e/2)"));
            }
            relations.push("Y^2d = X^(e/2)".to_string());
        }
        let yinv = self.mat_y.inverse().ok_or_else(|| fail("Y invertible"))?;
        if self.mat_y.mul(&self.mat_x)?.mul(&yinv)? != self.mat_x.pow(self.p as u128) {
            return Err(fail("Y X Y^-1 = X^p"));
        }
        relations.push("Y X Y^-1 = X^p".to_string());

        let order_x = matrix_order(&self.mat_x, self.e).ok_or_else(|| fail("order(X)"))?;
        if order_x != self.e {
            return Err(fail("order(X) = e"));
        }
        let y_mult = if self.p == 2 { 2 * self.d as u64 } else { 4 * self.d as u64 };
        let order_y = matrix_order(&self.mat_y, y_mult).ok_or_else(|| fail("order(Y)"))?;

        // Y^b ∉ ⟨X⟩ for 0 < b < 2d: otherwise Y^b would commute with X, but
        // Y^b X Y^-b = X^{p^b} and p^b ≢ 1 mod order(X).
        let ord_p = multiplicative_order(self.p % self.e.max(2), self.e).unwrap_or(1);
        if self.e > 2 && ord_p as u128 != two_d {
            return Err(fail("p has order 2d modulo e"));
        }
        for b in 1..two_d {
            let yb = self.mat_y.pow(b);
            let comm = yb.mul(&self.mat_x)?.mul(&yb.inverse().ok_or_else(|| fail("Y invertible"))?)?;
            if comm == self.mat_x {
                return Err(fail(format!("Y^{b} outside <X>")));
            }
        }
        relations.push("Y^b outside <X> for 0 < b < 2d".to_string());

        let group_order = self.group_order();
        let enumerated = group_order <= ENUMERATION_LIMIT;
        if enumerated {
            let count = self.enumerate_elements().len() as u64;
            if count != group_order {
                return Err(fail(format!("|N| = {group_order}, listed {count}")));
            }
            relations.push("normal forms X^a Y^b distinct".to_string());
        }
        Ok(PresentationReport { relations, order_x, order_y, group_order, enumerated })
    }

    /// All matrices `X^a Y^b`, `0 ≤ a < e`, `0 ≤ b < 2d`.
    pub fn enumerate_elements(&self) -> HashSet<SympMatrix> {
        let mut out = HashSet::with_capacity(self.group_order() as usize);
        let mut yb = SympMatrix::identity(self.form.clone());
        for _ in 0..2 * self.d {
            let mut cur = yb.clone();
            for _ in 0..self.e {
                out.insert(cur.clone());
                cur = self.mat_x.mul(&cur).expect("same form");
            }
            yb = yb.mul(&self.mat_y).expect("same form");
        }
        out
    }

    /// Similitude of `X` is `Norm(x)`, `Y` is symplectic, and the similitude
    /// character is onto `F_p^×`.
    pub fn similitude_character_check(&self) -> Result<SimilitudeReport, GroupError> {
        let sim_x = self.mat_x.similitude()?;
        let sim_y = self.mat_y.similitude()?;
        let norm_x = self
            .tower
            .k_as_scalar(&self.tower.norm_l_to_k(&self.x))
            .ok_or_else(|| fail("Norm(x) in F_p"))?;
        if sim_x != norm_x {
            return Err(fail("similitude(X) = Norm(x)"));
        }
        if sim_y != 1 {
            return Err(fail("similitude(Y) = 1"));
        }
        // the image is generated by sim(X) and sim(Y) = 1
        let surjective = self.p == 2 || multiplicative_order(sim_x, self.p) == Some(self.p - 1);
        if !surjective {
            return Err(fail("similitude surjective"));
        }
        let c1_order = (self.tower.k_size() < 1 << 16).then(|| self.c1_by_enumeration());
        if let Some(c1) = c1_order {
            if c1 != self.tower.k_size() + 1 {
                return Err(fail("<X> ∩ Sp has order p^d+1"));
            }
        }
        Ok(SimilitudeReport { sim_x, norm_x, sim_y, surjective, c1_order })
    }

    /// Size of `⟨X⟩ ∩ Sp`, checking along the way that it is `⟨X^{p-1}⟩`.
    fn c1_by_enumeration(&self) -> u64 {
        let mut count = 0;
        let mut cur = SympMatrix::identity(self.form.clone());
        for a in 0..self.e {
            let in_sp = cur.is_symplectic();
            if in_sp != (a % (self.p - 1) == 0) {
                return 0;
            }
            count += in_sp as u64;
            cur = cur.mul(&self.mat_x).expect("same form");
        }
        count
    }

    /// `Y X^a Y^{-1} = X^{pa}` for every `a`.
    pub fn conjugation_is_p_power(&self) -> Result<bool, GroupError> {
        let yinv = self.mat_y.inverse().ok_or_else(|| fail("Y invertible"))?;
        let xp = self.mat_x.pow(self.p as u128);
        let mut xa = SympMatrix::identity(self.form.clone());
        let mut xpa = xa.clone();
        for _ in 0..self.e {
            if self.mat_y.mul(&xa)?.mul(&yinv)? != xpa {
                return Ok(false);
            }
            xa = xa.mul(&self.mat_x)?;
            xpa = xpa.mul(&xp)?;
        }
        Ok(true)
    }

    /// Order of `C_1 = ⟨X^{p-1}⟩`.
    pub fn c1_order(&self) -> u64 {
        self.e / gcd(self.e, self.p - 1)
    }
}
