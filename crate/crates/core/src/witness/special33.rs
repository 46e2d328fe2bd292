//! The order-78 subgroup of `GSp(6, F_3)` used for `(g, p) = (3, 3)`.
//!
//! `V = W ⊕ W*` with `W = F_27`, pairing `⟨(w, f), (w', f')⟩ = f(w') - f'(w)`.
//! `X` multiplies `W` by an element `ω` of order 13 and acts on `W*`
//! contragrediently. `Y` is searched for in the solution space of
//! `Y X = X^c Y`.

use crate::error::WitnessError;
use crate::fp_matrix::FpMatrix;
use crate::metacyclic::GroupShape;
use crate::normalizer::matrix_order;
use crate::symplectic::{GramForm, SympMatrix};
use crate::tower::{FieldTower, KElement};
use std::collections::HashSet;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct Special33Data {
    pub form: Arc<GramForm>,
    pub mat_x: SympMatrix,
    pub mat_y: SympMatrix,
    /// Defining cubic of `W = F_27`, lowest degree first.
    pub w_modulus: Vec<u64>,
    /// `ω` in the power basis of `W`.
    pub omega: Vec<u64>,
    /// The exponent `c` for which `Y` was found before normalizing to `c = 4`.
    pub found_with: u64,
    pub solution_dim: usize,
    pub candidates_tried: u64,
    pub group_order: u64,
    pub similitude_values: Vec<u64>,
    pub order13_subgroups: usize,
}

impl Special33Data {
    pub fn shape(&self) -> GroupShape {
        GroupShape::special33()
    }
}

fn err(msg: impl Into<String>) -> WitnessError {
    WitnessError::Special33(msg.into())
}

/// Form `[[0, -I], [I, 0]]` on `W ⊕ W*`.
fn doubled_form(n: usize) -> GramForm {
    let mut j = FpMatrix::zeros(3, 2 * n, 2 * n);
    for i in 0..n {
        j.set(i, n + i, 2);
        j.set(n + i, i, 1);
    }
    GramForm::new(j).expect("standard form")
}

/// Matrix of `z ↦ ωz` on `k` in the power basis.
fn multiplication_matrix(k: &FieldTower, omega: &KElement) -> FpMatrix {
    let d = k.d();
    let cols: Vec<Vec<u64>> = (0..d)
        .map(|i| {
            let mut e = vec![0; d];
            e[i] = 1;
            k.k_mul(omega, &KElement(e)).0
        })
        .collect();
    FpMatrix::from_columns(3, &cols)
}

/// Solutions `Y` of `Y X = Xc Y` as a basis of 6×6 matrices.
fn intertwiners(x: &FpMatrix, xc: &FpMatrix) -> Vec<FpMatrix> {
    let n = x.rows();
    // unknown Y_{ik} at column i*n + k; equation (i, j): Σ_k Y_ik X_kj - Σ_k Xc_ik Y_kj = 0
    let mut sys = FpMatrix::zeros(3, n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                let a = sys.get(row, i * n + k);
                sys.set(row, i * n + k, a + x.get(k, j));
                let b = sys.get(row, k * n + j);
                sys.set(row, k * n + j, b + 3 - xc.get(i, k));
            }
        }
    }
    sys.null_space()
        .into_iter()
        .map(|v| FpMatrix::from_rows(3, &v.chunks(n).map(<[u64]>::to_vec).collect::<Vec<_>>()))
        .collect()
}

fn closure(gens: &[SympMatrix]) -> HashSet<SympMatrix> {
    let id = SympMatrix::identity(gens[0].form().clone());
    let mut seen = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(m) = frontier.pop() {
        for g in gens {
            let n = m.mul(g).expect("same form");
            if seen.insert(n.clone()) {
                frontier.push(n);
            }
        }
    }
    seen
}

/// Builds `X, Y ∈ GSp(6, F_3)` generating a group of order 78 with
/// `X^13 = Y^6 = 1`, `Y X Y^{-1} = X^4` and surjective similitude.
pub fn build_33_group() -> Result<Special33Data, WitnessError> {
    let k = FieldTower::build(3, 3).map_err(|e| err(e.to_string()))?;
    let omega = (1..k.k_size())
        .map(|i| k.k_from_index(i))
        .find(|w| k.k_order(w) == 13)
        .ok_or_else(|| err("no element of order 13 in F_27"))?;
    let a = multiplication_matrix(&k, &omega);
    let a_dual = a.inverse().ok_or_else(|| err("ω not invertible"))?.transpose();
    let form = Arc::new(doubled_form(3));
    let mat_x = SympMatrix::new(a.direct_sum(&a_dual), form.clone()).map_err(|e| err(e.to_string()))?;
    if matrix_order(&mat_x, 13) != Some(13) || !mat_x.is_symplectic() {
        return Err(err("X must have order 13 in Sp(6, F_3)"));
    }

    let mut tried = 0u64;
    for c in [4u64, 10] {
        let basis = intertwiners(mat_x.matrix(), &mat_x.pow(c as u128).matrix().clone());
        let dim = basis.len();
        for idx in 1..3u64.pow(dim as u32) {
            tried += 1;
            let mut y = FpMatrix::zeros(3, 6, 6);
            let mut rest = idx;
            for b in &basis {
                y = y.add(&b.scale(rest % 3));
                rest /= 3;
            }
            if y.det() == 0 {
                continue;
            }
            let cand = SympMatrix::new(y, form.clone()).map_err(|e| err(e.to_string()))?;
            let Ok(sim) = cand.similitude() else { continue };
            if sim != 2 || !cand.pow(6).matrix().is_identity() {
                continue;
            }
            // y^5 acts by c^5; for c = 10 this is 4
            let mat_y = if c == 4 { cand } else { cand.pow(5) };
            return finish(form, mat_x, mat_y, &k, &omega, c, dim, tried);
        }
    }
    Err(err("no element of the solution space qualifies"))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    form: Arc<GramForm>,
    mat_x: SympMatrix,
    mat_y: SympMatrix,
    k: &FieldTower,
    omega: &KElement,
    c: u64,
    dim: usize,
    tried: u64,
) -> Result<Special33Data, WitnessError> {
    let yinv = mat_y.inverse().ok_or_else(|| err("Y singular"))?;
    let conj = mat_y.mul(&mat_x).and_then(|m| m.mul(&yinv)).map_err(|e| err(e.to_string()))?;
    if conj != mat_x.pow(4) {
        return Err(err("Y X Y^-1 = X^4"));
    }
    if !mat_x.pow(13).matrix().is_identity() || !mat_y.pow(6).matrix().is_identity() {
        return Err(err("X^13 = Y^6 = I"));
    }
    let group = closure(&[mat_x.clone(), mat_y.clone()]);
    if group.len() != 78 {
        return Err(err(format!("|<X, Y>| = {}", group.len())));
    }
    let mut sims: Vec<u64> = group
        .iter()
        .map(|m| m.similitude().map_err(|e| err(e.to_string())))
        .collect::<Result<HashSet<_>, _>>()?
        .into_iter()
        .collect();
    sims.sort_unstable();
    if sims != vec![1, 2] {
        return Err(err("similitude not surjective"));
    }
    let x_powers: HashSet<SympMatrix> = (0..13).map(|i| mat_x.pow(i)).collect();
    let order13: Vec<&SympMatrix> = group.iter().filter(|m| matrix_order(m, 78) == Some(13)).collect();
    if order13.len() != 12 || !order13.iter().all(|m| x_powers.contains(*m) && m.is_symplectic()) {
        return Err(err("order-13 elements lie outside <X>"));
    }
    Ok(Special33Data {
        form,
        mat_x,
        mat_y,
        w_modulus: k.params().k_modulus,
        omega: omega.0.clone(),
        found_with: c,
        solution_dim: dim,
        candidates_tried: tried,
        group_order: 78,
        similitude_values: sims,
        order13_subgroups: 1,
    })
}
