//! 𝒴-projective resolutions and the relative derived functors of `π₀`.

pub mod cover;
pub mod pi;
pub mod weight;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gamma::{GammaModule, NatTransform};
use crate::linalg::{self, Matrix};

pub use cover::{
    apply_sparse, cover_kernel, gamma_lambda_dim, y_cover, CertEntry, CoverOptions, CoverStage, CoverStrategy,
    SparseVec, DEFAULT_COVER_CAP,
};
pub use pi::{
    absolute_pi, apply_pi0, kunneth_check, relative_pi, relative_pi_with, KunnethRow, KunnethTable, Pi0Complex,
    PiParams, PiReport, StageSummary, Stability,
};
pub use weight::{apply_weight, weight_lambda_t, weight_t, weighted_contract, weighted_tor, Weight, WeightKind};

/// `... -> Z_1 -> Z_0 -> F` with each `Z_k = ⊕ Γ(λ)`.
///
/// Stage `k` maps `Z_k` onto the kernel of stage `k - 1` (onto `F` for
/// `k = 0`) and stores its generators in the coordinates of `Z_{k-1}`.
pub struct ModuleComplex<F: Field> {
    target: Arc<GammaModule<F>>,
    stages: Vec<CoverStage<F>>,
    options: CoverOptions,
}

impl<F: Field> ModuleComplex<F> {
    pub fn from_stages(target: &Arc<GammaModule<F>>, stages: Vec<CoverStage<F>>, options: CoverOptions) -> Result<Self> {
        for (k, s) in stages.iter().enumerate() {
            let expected = if k == 0 { target } else { stages[k - 1].module() };
            if !Arc::ptr_eq(s.parent(), expected) {
                return Err(Error::InvalidArgument(format!("stage {k} does not map into stage {}", k as i64 - 1)));
            }
        }
        Ok(ModuleComplex {
            target: Arc::clone(target),
            stages,
            options,
        })
    }

    pub fn target(&self) -> &Arc<GammaModule<F>> {
        &self.target
    }

    pub fn options(&self) -> &CoverOptions {
        &self.options
    }

    /// Highest homological degree `L`.
    pub fn length(&self) -> Option<usize> {
        self.stages.len().checked_sub(1)
    }

    pub fn stages(&self) -> &[CoverStage<F>] {
        &self.stages
    }

    pub fn stage(&self, k: usize) -> &CoverStage<F> {
        &self.stages[k]
    }

    pub fn module(&self, k: usize) -> &Arc<GammaModule<F>> {
        self.stages[k].module()
    }

    /// `Z_0 -> F`.
    pub fn augmentation(&self) -> Result<&NatTransform<F>> {
        self.stages[0].map()
    }

    /// `∂_k : Z_k -> Z_{k-1}` for `k >= 1`.
    pub fn differential(&self, k: usize) -> Result<&NatTransform<F>> {
        if k == 0 || k >= self.stages.len() {
            return Err(Error::InvalidArgument(format!("no differential in degree {k}")));
        }
        self.stages[k].map()
    }

    pub fn certified(&self) -> bool {
        self.stages.iter().all(CoverStage::certified)
    }

    /// Checks `∂_{k-1} ∂_k = 0` (and `ε ∂_1 = 0`) at every level `<= max_level`.
    pub fn check_d_squared(&self, max_level: usize) -> Result<bool> {
        let field = self.target.field();
        let top = max_level.min(self.target.trunc());
        for k in 1..self.stages.len() {
            for n in 0..=top {
                let lower = self.stages[k - 1].component(n)?;
                let upper = self.stages[k].component(n)?;
                if !lower.mul(field, &upper).is_zero(field) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Checks exactness `im ∂_{k+1} = ker ∂_k` at levels `<= max_level` for
    /// `k < L`, and surjectivity of the augmentation.
    pub fn check_exact(&self, max_level: usize) -> Result<bool> {
        let field = self.target.field();
        let top = max_level.min(self.target.trunc());
        for n in 0..=top {
            let aug = self.stages[0].component(n)?;
            if linalg::rank(field, &aug) != self.target.dim(n) {
                return Ok(false);
            }
            for k in 0..self.stages.len().saturating_sub(1) {
                let lower = self.stages[k].component(n)?;
                let upper = self.stages[k + 1].component(n)?;
                let kernel = self.stages[k].module().dim(n) - linalg::rank(field, &lower);
                if linalg::rank(field, &upper) != kernel {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Basis of `ker(Z_L([n]) -> Z_{L-1}([n]))` (of the augmentation when
    /// `L = 0`).
    pub fn top_kernel(&self, n: usize) -> Result<Vec<Vec<F::Elem>>> {
        let last = self.stages.last().ok_or_else(|| Error::InvalidArgument("empty complex".into()))?;
        let m: Matrix<F::Elem> = last.component(n)?;
        Ok(linalg::kernel_basis(self.target.field(), &m))
    }
}

/// Builds `Z_0, ..., Z_length` by iterated 𝒴-covers.
pub fn y_resolution<F: Field>(target: &Arc<GammaModule<F>>, length: usize, opts: &CoverOptions) -> Result<ModuleComplex<F>> {
    let mut stages: Vec<CoverStage<F>> = Vec::with_capacity(length + 1);
    stages.push(y_cover(target, opts)?);
    for _ in 0..length {
        let next = cover_kernel(stages.last().expect("nonempty"), opts)?;
        stages.push(next);
    }
    ModuleComplex::from_stages(target, stages, *opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_lam, corpus_algebra, FiniteModule, DEFAULT_LEVEL_CAP};
    use crate::field::{PrimeField, Rationals};
    use crate::gamma::{gamma_lambda, Partition};

    #[test]
    fn resolution_of_lam_is_exact_below_bound() {
        let f3 = PrimeField::new(3).unwrap();
        let (a, _) = corpus_algebra(&f3, "K[x]/(x^2)").unwrap();
        let l = build_lam(&Arc::new(FiniteModule::residue(&a).unwrap()), 3, DEFAULT_LEVEL_CAP).unwrap();
        let c = y_resolution(&l, 2, &CoverOptions::new(3)).unwrap();
        assert!(c.certified());
        assert!(c.check_d_squared(3).unwrap());
        assert!(c.check_exact(3).unwrap());
    }

    #[test]
    fn resolution_of_projective() {
        let q = Rationals;
        let g = gamma_lambda(&q, &Partition::new(vec![2, 1]).unwrap(), 3).unwrap();
        let c = y_resolution(&g, 1, &CoverOptions::new(3)).unwrap();
        assert!(c.certified());
        assert!(c.check_d_squared(3).unwrap());
        assert!(c.differential(0).is_err());
        assert!(c.differential(1).is_ok());
    }
}
