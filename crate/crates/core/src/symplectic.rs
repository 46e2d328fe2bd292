//! The symplectic form `∧ = tr_{k|F_p} ∘ ∧_k` on `l' = k^2`, matrices of
//! F_p-linear operators on `l'`, similitude factors and the inclusion
//! `GSp(2d) ⊂ GSp(2g)`.

use crate::error::SymplecticError;
use crate::fp_matrix::FpMatrix;
use crate::tower::{FieldTower, KElement, TowerElement};
use std::sync::Arc;

/// Gram matrix `J` of an alternating nondegenerate form over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GramForm {
    j: FpMatrix,
}

impl GramForm {
    pub fn new(j: FpMatrix) -> Result<Self, SymplecticError> {
        if !j.is_square() || j.rows() % 2 != 0 {
            return Err(SymplecticError::InvalidForm("must be square of even size"));
        }
        if j.transpose() != j.neg() {
            return Err(SymplecticError::InvalidForm("not antisymmetric"));
        }
        if (0..j.rows()).any(|i| j.get(i, i) != 0) {
            return Err(SymplecticError::InvalidForm("nonzero diagonal"));
        }
        if j.det() == 0 {
            return Err(SymplecticError::InvalidForm("degenerate"));
        }
        Ok(Self { j })
    }

    /// The standard form on `n/2` hyperbolic planes, `[[0, 1], [-1, 0]]` blocks.
    pub fn hyperbolic(p: u64, n: usize) -> Self {
        let mut j = FpMatrix::zeros(p, n, n);
        for i in (0..n).step_by(2) {
            j.set(i, i + 1, 1);
            j.set(i + 1, i, p - 1);
        }
        Self { j }
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.j
    }

    pub fn dim(&self) -> usize {
        self.j.rows()
    }

    pub fn p(&self) -> u64 {
        self.j.p()
    }

    /// `v1ᵀ J v2`.
    pub fn pair(&self, v1: &[u64], v2: &[u64]) -> Result<u64, SymplecticError> {
        if v1.len() != self.dim() || v2.len() != self.dim() {
            return Err(SymplecticError::DimensionMismatch(v1.len().max(v2.len()), self.dim()));
        }
        let jv = self.j.mul_vec(v2);
        let p = self.p();
        Ok(v1.iter().zip(jv).fold(0, |acc, (a, b)| (acc + a * b % p) % p))
    }

    /// The factor `c` with `Mᵀ J M = c J`, if it exists and is nonzero.
    pub fn similitude_factor(&self, m: &FpMatrix) -> Result<u64, SymplecticError> {
        if m.rows() != self.dim() || m.cols() != self.dim() {
            return Err(SymplecticError::DimensionMismatch(m.rows(), self.dim()));
        }
        let lhs = m.transpose().mul(&self.j).mul(m);
        let (i, k) = (0..self.dim())
            .flat_map(|i| (0..self.dim()).map(move |k| (i, k)))
            .find(|&(i, k)| self.j.get(i, k) != 0)
            .expect("nondegenerate form has a nonzero entry");
        let inv = crate::arith::inv_mod(self.j.get(i, k), self.p()).expect("field");
        let c = crate::arith::mul_mod(lhs.get(i, k), inv, self.p());
        if c == 0 || lhs != self.j.scale(c) {
            return Err(SymplecticError::NotSimilitude);
        }
        Ok(c)
    }
}

/// `∧(v1, v2) = tr_{k|F_p}(a d - b c)` for `v1 = a + bη`, `v2 = c + dη`.
pub fn wedge_pairing(tower: &FieldTower, v1: &TowerElement, v2: &TowerElement) -> u64 {
    let ad = tower.k_mul(&v1.a(), &v2.b());
    let bc = tower.k_mul(&v1.b(), &v2.a());
    tower.trace_k_to_p(&tower.k_sub(&ad, &bc))
}

/// Same pairing on raw coordinate vectors; rejects mismatched lengths.
pub fn wedge_coords(tower: &FieldTower, v1: &[u64], v2: &[u64]) -> Result<u64, SymplecticError> {
    if v1.len() != tower.dim() || v2.len() != tower.dim() {
        return Err(SymplecticError::DimensionMismatch(v1.len().max(v2.len()), tower.dim()));
    }
    Ok(wedge_pairing(tower, &tower.from_coords(v1), &tower.from_coords(v2)))
}

fn basis_vector(tower: &FieldTower, i: usize) -> TowerElement {
    let mut c = vec![0; tower.dim()];
    c[i] = 1;
    tower.from_coords(&c)
}

/// `J[i][j] = ∧(b_i, b_j)` over the fixed F_p-basis of `l'`.
pub fn gram_matrix(tower: &FieldTower) -> GramForm {
    let n = tower.dim();
    let basis: Vec<_> = (0..n).map(|i| basis_vector(tower, i)).collect();
    let mut j = FpMatrix::zeros(tower.p(), n, n);
    for (r, bi) in basis.iter().enumerate() {
        for (c, bj) in basis.iter().enumerate() {
            j.set(r, c, wedge_pairing(tower, bi, bj));
        }
    }
    GramForm::new(j).expect("trace form of ∧_k is symplectic")
}

/// F_p-linear operators on `l'` that have a matrix in the fixed basis.
#[derive(Clone, Debug)]
pub enum Operator {
    /// `z ↦ βz`.
    MultiplyBy(TowerElement),
    /// `z ↦ α · frob_p^i(z)`.
    AlphaFrobenius { alpha: TowerElement, power: usize },
    /// The `k`-linear map `(a, b) ↦ (m00 a + m01 b, m10 a + m11 b)` on `k^2`.
    KLinear([KElement; 4]),
}

impl Operator {
    fn apply(&self, tower: &FieldTower, z: &TowerElement) -> TowerElement {
        match self {
            Operator::MultiplyBy(beta) => tower.mul(beta, z),
            Operator::AlphaFrobenius { alpha, power } => tower.mul(alpha, &tower.frobenius_power(z, *power)),
            Operator::KLinear([m00, m01, m10, m11]) => {
                let (a, b) = (z.a(), z.b());
                let na = tower.k_add(&tower.k_mul(m00, &a), &tower.k_mul(m01, &b));
                let nb = tower.k_add(&tower.k_mul(m10, &a), &tower.k_mul(m11, &b));
                tower.element(&na, &nb)
            }
        }
    }
}

/// Matrix of `op` acting on column coordinate vectors.
pub fn operator_matrix(tower: &FieldTower, op: &Operator) -> Result<FpMatrix, SymplecticError> {
    match op {
        Operator::MultiplyBy(b) | Operator::AlphaFrobenius { alpha: b, .. } if b.is_zero() => {
            return Err(SymplecticError::ZeroMultiplier)
        }
        _ => {}
    }
    let cols: Vec<Vec<u64>> = (0..tower.dim())
        .map(|i| op.apply(tower, &basis_vector(tower, i)).coords().to_vec())
        .collect();
    Ok(FpMatrix::from_columns(tower.p(), &cols))
}

/// A square matrix over F_p together with the form it is measured against.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SympMatrix {
    matrix: FpMatrix,
    form: Arc<GramForm>,
}

impl SympMatrix {
    pub fn new(matrix: FpMatrix, form: Arc<GramForm>) -> Result<Self, SymplecticError> {
        if matrix.rows() != form.dim() || matrix.cols() != form.dim() {
            return Err(SymplecticError::DimensionMismatch(matrix.rows(), form.dim()));
        }
        Ok(Self { matrix, form })
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    pub fn form(&self) -> &Arc<GramForm> {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn similitude(&self) -> Result<u64, SymplecticError> {
        self.form.similitude_factor(&self.matrix)
    }

    pub fn is_symplectic(&self) -> bool {
        self.similitude() == Ok(1)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SymplecticError> {
        if self.form != other.form {
            return Err(SymplecticError::FormMismatch);
        }
        Ok(Self { matrix: self.matrix.mul(&other.matrix), form: self.form.clone() })
    }

    pub fn pow(&self, exp: u128) -> Self {
        Self { matrix: self.matrix.pow(exp), form: self.form.clone() }
    }

    pub fn inverse(&self) -> Option<Self> {
        Some(Self { matrix: self.matrix.inverse()?, form: self.form.clone() })
    }

    pub fn identity(form: Arc<GramForm>) -> Self {
        Self { matrix: FpMatrix::identity(form.p(), form.dim()), form }
    }
}

/// Form on `F_p^{2g}`: `J` on the first `2d` coordinates followed by
/// `g - d` standard hyperbolic planes.
pub fn extended_form(form: &GramForm, g: usize) -> Result<GramForm, SymplecticError> {
    let n = form.dim();
    if n > 2 * g {
        return Err(SymplecticError::EmbeddingTooLarge(n, 2 * g));
    }
    let tail = GramForm::hyperbolic(form.p(), 2 * g - n);
    Ok(GramForm { j: form.matrix().direct_sum(tail.matrix()) })
}

/// The inclusion `GSp(2d) ⊂ GSp(2g)`: `M` on the first block and
/// `diag(1, c)` on each appended hyperbolic plane, `c` the similitude of `M`.
pub fn embed_gsp(m: &SympMatrix, g: usize, target: &Arc<GramForm>) -> Result<SympMatrix, SymplecticError> {
    let n = m.dim();
    if n > 2 * g {
        return Err(SymplecticError::EmbeddingTooLarge(n, 2 * g));
    }
    if target.dim() != 2 * g || *target.as_ref() != extended_form(m.form(), g)? {
        return Err(SymplecticError::FormMismatch);
    }
    let c = m.similitude()?;
    let p = m.form().p();
    let mut tail = FpMatrix::zeros(p, 2 * g - n, 2 * g - n);
    for i in (0..2 * g - n).step_by(2) {
        tail.set(i, i, 1);
        tail.set(i + 1, i + 1, c);
    }
    SympMatrix::new(m.matrix().direct_sum(&tail), target.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn wedge_examples() {
        let t = FieldTower::build(3, 2).unwrap();
        let one = t.one();
        let eta = t.eta();
        assert_eq!(wedge_pairing(&t, &one, &eta), 2);
        let t1 = FieldTower::build(3, 1).unwrap();
        let v1 = t1.from_coords(&[1, 1]);
        let v2 = t1.from_coords(&[1, 2]);
        assert_eq!(wedge_pairing(&t1, &v1, &v2), 1);
        assert_eq!(wedge_pairing(&t1, &v1, &v1), 0);
        assert!(matches!(wedge_coords(&t1, &[1, 0, 0], &[0, 1]), Err(SymplecticError::DimensionMismatch(..))));
    }

    #[test]
    fn gram_examples() {
        let j = gram_matrix(&FieldTower::build(2, 1).unwrap());
        assert_eq!(j.matrix().to_rows(), vec![vec![0, 1], vec![1, 0]]);
        let j3 = gram_matrix(&FieldTower::build(3, 1).unwrap());
        assert_eq!(j3.matrix().transpose(), j3.matrix().neg());
        let j32 = gram_matrix(&FieldTower::build(3, 2).unwrap());
        assert_eq!(j32.matrix().rank(), 4);
    }

    #[test]
    fn multiplication_is_a_homomorphism_and_scales_by_norm() {
        let t = FieldTower::build(3, 2).unwrap();
        let form = gram_matrix(&t);
        let eta = t.eta();
        let m_eta = operator_matrix(&t, &Operator::MultiplyBy(eta.clone())).unwrap();
        let m_eta2 = operator_matrix(&t, &Operator::MultiplyBy(t.mul(&eta, &eta))).unwrap();
        assert_eq!(m_eta.mul(&m_eta), m_eta2);
        assert!(operator_matrix(&t, &Operator::MultiplyBy(t.one())).unwrap().is_identity());
        let x = t.find_cartan_generator();
        let mx = operator_matrix(&t, &Operator::MultiplyBy(x.clone())).unwrap();
        let norm = t.k_as_scalar(&t.norm_l_to_k(&x)).unwrap();
        assert_eq!(form.similitude_factor(&mx), Ok(norm));
        assert!(matches!(
            operator_matrix(&t, &Operator::MultiplyBy(t.zero())),
            Err(SymplecticError::ZeroMultiplier)
        ));
    }

    #[test]
    fn alpha_frobenius_preserves_form() {
        let t = FieldTower::build(3, 1).unwrap();
        let form = gram_matrix(&t);
        let alpha = t.find_alpha().unwrap().alpha;
        let y = operator_matrix(&t, &Operator::AlphaFrobenius { alpha, power: 1 }).unwrap();
        assert_eq!(form.similitude_factor(&y), Ok(1));
    }

    #[test]
    fn scalar_similitude_is_square() {
        let form = gram_matrix(&FieldTower::build(5, 2).unwrap());
        for c in 1..5 {
            let m = FpMatrix::scalar(5, 4, c);
            assert_eq!(form.similitude_factor(&m), Ok(c * c % 5));
        }
        assert_eq!(form.similitude_factor(&FpMatrix::zeros(5, 4, 4)), Err(SymplecticError::NotSimilitude));
    }

    #[test]
    fn sl2_of_k_lands_in_sp() {
        let t = FieldTower::build(5, 2).unwrap();
        let form = gram_matrix(&t);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let k_size = t.k_size();
        let mut tested = 0;
        while tested < 1000 {
            let m: Vec<KElement> = (0..3).map(|_| t.k_from_index(rng.gen_range(0..k_size))).collect();
            // choose m11 so that m00 m11 - m01 m10 = 1 when m00 is invertible
            let Ok(inv) = t.k_inv(&m[0]) else { continue };
            let m11 = t.k_mul(&inv, &t.k_add(&t.k_one(), &t.k_mul(&m[1], &m[2])));
            let op = Operator::KLinear([m[0].clone(), m[1].clone(), m[2].clone(), m11]);
            let mat = operator_matrix(&t, &op).unwrap();
            assert_eq!(form.similitude_factor(&mat), Ok(1));
            tested += 1;
        }
    }

    #[test]
    fn multiplication_matrices_are_injective() {
        let t = FieldTower::build(3, 2).unwrap();
        let mut seen = std::collections::HashSet::new();
        for i in 1..t.size() {
            let m = operator_matrix(&t, &Operator::MultiplyBy(t.from_index(i))).unwrap();
            assert!(seen.insert(m));
        }
    }

    #[test]
    fn embedding_examples() {
        let t = FieldTower::build(3, 1).unwrap();
        let form = Arc::new(gram_matrix(&t));
        let x = t.find_cartan_generator();
        let mx = SympMatrix::new(operator_matrix(&t, &Operator::MultiplyBy(x)).unwrap(), form.clone()).unwrap();
        let same = Arc::new(extended_form(&form, 1).unwrap());
        assert_eq!(embed_gsp(&mx, 1, &same).unwrap().matrix(), mx.matrix());
        let big = Arc::new(extended_form(&form, 2).unwrap());
        let id = SympMatrix::identity(form.clone());
        assert!(embed_gsp(&id, 2, &big).unwrap().matrix().is_identity());
        assert_eq!(embed_gsp(&mx, 2, &big).unwrap().similitude(), mx.similitude());
        assert!(matches!(
            embed_gsp(&SympMatrix::identity(big.clone()), 1, &form),
            Err(SymplecticError::EmbeddingTooLarge(4, 2))
        ));
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let t = FieldTower::build(3, 1).unwrap();
        let form = Arc::new(gram_matrix(&t));
        let big = Arc::new(extended_form(&form, 2).unwrap());
        // all of GSp(2, F_3) = GL(2, F_3), exhaustively
        let mut group = Vec::new();
        for idx in 0..81u64 {
            let e: Vec<u64> = (0..4).map(|i| idx / 3u64.pow(i) % 3).collect();
            let m = FpMatrix::from_rows(3, &[vec![e[0], e[1]], vec![e[2], e[3]]]);
            if let Ok(sm) = SympMatrix::new(m, form.clone()) {
                if sm.similitude().is_ok() {
                    group.push(sm);
                }
            }
        }
        assert_eq!(group.len(), 48);
        for a in group.iter().step_by(5) {
            for b in group.iter().step_by(7) {
                let lhs = embed_gsp(&a.mul(b).unwrap(), 2, &big).unwrap();
                let rhs = embed_gsp(a, 2, &big).unwrap().mul(&embed_gsp(b, 2, &big).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
            let ainv = a.inverse().unwrap();
            assert_eq!(embed_gsp(&ainv, 2, &big).unwrap(), embed_gsp(a, 2, &big).unwrap().inverse().unwrap());
        }
    }
}
