//! Classical low-degree André-Quillen values: `D₀ = Ω¹_A ⊗_A M` from the
//! Kähler presentation, and `D₁` from the conormal sequence of a complete
//! intersection.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{FiniteModule, PresentedAlgebra};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Label, LabeledSpace, LinearMap, Matrix, QuotientPresentation};

/// A classical dimension with the sizes of the linear problem behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalValue {
    pub degree: usize,
    pub dim: usize,
    pub ambient_dim: usize,
    pub rank: usize,
}

/// `Ω¹_A ⊗_A M` as `M ⊗ span{da_i}` modulo
/// `m ⊗ d(a_i a_j) − a_i m ⊗ da_j − a_j m ⊗ da_i` and `m ⊗ d(1)`.
///
/// Coordinate `(m, i)` sits at index `m * dim A + i` with label `m ⊗ da_i`.
pub fn kaehler_tensor<F: Field>(module: &FiniteModule<F>) -> QuotientPresentation<F::Elem> {
    let a = module.algebra();
    let field = a.field();
    let (da, dm) = (a.dim(), module.dim());
    let ambient = LabeledSpace::new(
        (0..dm)
            .flat_map(|m| (0..da).map(move |i| Label::Tensor(vec![m as u32, i as u32])))
            .collect(),
    );
    let idx = |m: usize, i: usize| m * da + i;
    let mut relations: Vec<Vec<F::Elem>> = Vec::new();
    for m in 0..dm {
        let mut em = vec![field.zero(); dm];
        em[m] = field.one();
        for i in 0..da {
            let ai_m = module.act_basis(i, &em);
            for j in i..da {
                let aj_m = module.act_basis(j, &em);
                let mut rel = vec![field.zero(); dm * da];
                for (k, c) in a.basis_product(i, j).iter().enumerate() {
                    if !field.is_zero(c) {
                        field.add_assign(&mut rel[idx(m, k)], c);
                    }
                }
                for (mm, c) in ai_m.iter().enumerate() {
                    if !field.is_zero(c) {
                        rel[idx(mm, j)] = field.sub(&rel[idx(mm, j)], c);
                    }
                }
                for (mm, c) in aj_m.iter().enumerate() {
                    if !field.is_zero(c) {
                        rel[idx(mm, i)] = field.sub(&rel[idx(mm, i)], c);
                    }
                }
                relations.push(rel);
            }
        }
        let mut rel = vec![field.zero(); dm * da];
        for (k, c) in a.unit().iter().enumerate() {
            if !field.is_zero(c) {
                rel[idx(m, k)] = c.clone();
            }
        }
        relations.push(rel);
    }
    let matrix = Matrix::from_columns(field, dm * da, &relations);
    let map = LinearMap {
        domain: LabeledSpace::indexed(relations.len()),
        codomain: ambient,
        matrix,
    };
    linalg::cokernel(field, &map)
}

pub fn classical_d0<F: Field>(module: &FiniteModule<F>) -> ClassicalValue {
    let q = kaehler_tensor(module);
    let ambient_dim = q.ambient.dim();
    ClassicalValue {
        degree: 0,
        dim: q.dim(),
        ambient_dim,
        rank: ambient_dim - q.dim(),
    }
}

/// The conormal map `⊕_j M·[g_j] -> ⊕_i M·dx_i`,
/// `m[g_j] ↦ Σ_i (∂g_j/∂x_i) m dx_i`. Row `i * dim M + k`, column
/// `j * dim M + l`.
pub fn conormal_map<F: Field>(p: &PresentedAlgebra<F>, module: &FiniteModule<F>) -> Matrix<F::Elem> {
    let field = module.field();
    let dm = module.dim();
    let (r, s) = (p.variables().len(), p.relators().len());
    let mut out = Matrix::zeros(field, r * dm, s * dm);
    for (j, g) in p.relators().iter().enumerate() {
        for i in 0..r {
            let partial = p.normal_form(&g.derivative(field, i));
            let block = module.act_matrix(&partial);
            for k in 0..dm {
                for l in 0..dm {
                    let x = block.get(k, l);
                    if !field.is_zero(x) {
                        out.set(i * dm + k, j * dm + l, x.clone());
                    }
                }
            }
        }
    }
    out
}

/// `D₁(A, M) = ker(⊕_j M·[g_j] -> ⊕_i M·dx_i)` for a complete intersection
/// with a confluent normal form.
pub fn classical_d1<F: Field>(p: &PresentedAlgebra<F>, module: &FiniteModule<F>) -> Result<ClassicalValue> {
    if !Arc::ptr_eq(p.algebra(), module.algebra()) && p.algebra().fingerprint() != module.algebra().fingerprint() {
        return Err(Error::InvalidArgument(
            "module is over a different algebra than the presentation".into(),
        ));
    }
    if !p.is_complete_intersection() {
        return Err(Error::OracleUnavailable(
            "complete-intersection flag not set; the conormal value would not be trusted".into(),
        ));
    }
    p.has_confluent_normal_form()?;
    if p.is_regular_sequence() != Some(true) {
        return Err(Error::OracleUnavailable(
            "relators declared a complete intersection but are not a regular sequence".into(),
        ));
    }
    let m = conormal_map(p, module);
    let rank = linalg::rank(module.field(), &m);
    Ok(ClassicalValue {
        degree: 1,
        dim: m.cols() - rank,
        ambient_dim: m.cols(),
        rank,
    })
}
