//! `π^𝒴_i(F) = H_i(π₀(Z_*))`, computed from a resolution by rank arithmetic.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gamma::{gamma_lambda, pi0, GammaModule, Partition, PartitionFamily};
use crate::linalg::{self, Matrix, QuotientPresentation};
use crate::resolution::cover::{CertEntry, CoverOptions, CoverStrategy, DEFAULT_COVER_CAP};
use crate::resolution::{y_resolution, ModuleComplex, SparseVec};

/// Truncation and construction parameters of a derived-functor run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PiParams {
    pub trunc: usize,
    pub bound: usize,
    pub degree: usize,
    pub family: PartitionFamily,
    pub strategy: CoverStrategy,
    pub cap: usize,
}

impl PiParams {
    pub fn new(degree: usize, trunc: usize, bound: usize) -> Self {
        PiParams {
            trunc,
            bound,
            degree,
            family: PartitionFamily::Young,
            strategy: CoverStrategy::Minimal,
            cap: DEFAULT_COVER_CAP,
        }
    }

    pub fn cover_options(&self) -> CoverOptions {
        CoverOptions {
            bound: self.bound,
            family: self.family,
            strategy: self.strategy,
            cap: self.cap,
        }
    }
}

/// A chain complex of finite-dimensional spaces `C_L -> ... -> C_0`, plus
/// the rank of the map into `C_L` from the next (unbuilt) stage.
#[derive(Clone, Debug)]
pub struct Pi0Complex<E> {
    pub dims: Vec<usize>,
    /// `differentials[k - 1]` is `C_k -> C_{k-1}`.
    pub differentials: Vec<Matrix<E>>,
    pub top_rank: usize,
    pub d_squared_zero: bool,
}

impl<E: Clone> Pi0Complex<E> {
    /// `r_0 = 0, r_1, ..., r_L, r_{L+1} = top_rank`.
    pub fn ranks<F: Field<Elem = E>>(&self, field: &F) -> Vec<usize> {
        let mut r = vec![0];
        r.extend(self.differentials.iter().map(|d| linalg::rank(field, d)));
        r.push(self.top_rank);
        r
    }

    /// `dim H_i = dim C_i - r_i - r_{i+1}`.
    pub fn homology<F: Field<Elem = E>>(&self, field: &F) -> Vec<usize> {
        let r = self.ranks(field);
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &p)| p - r[i] - r[i + 1])
            .collect()
    }
}

pub(crate) fn check_squares<F: Field>(field: &F, diffs: &[Matrix<F::Elem>]) -> bool {
    diffs
        .windows(2)
        .all(|w| w[0].mul(field, &w[1]).is_zero(field))
}

/// Per-summand quotient data for a functor applied to `⊕ Γ(λ_j)`.
pub(crate) struct SummandQuotients<E> {
    pub pres: Vec<Arc<QuotientPresentation<E>>>,
    pub offsets: Vec<usize>,
    pub dim: usize,
}

impl<E: Clone> SummandQuotients<E> {
    pub(crate) fn new(pres: Vec<Arc<QuotientPresentation<E>>>) -> Self {
        let mut offsets = Vec::with_capacity(pres.len());
        let mut dim = 0;
        for p in &pres {
            offsets.push(dim);
            dim += p.dim();
        }
        SummandQuotients { pres, offsets, dim }
    }
}

/// `π₀(Γ(λ))` by the cokernel formula, memoized per call site.
fn gamma_pi0<F: Field>(
    field: &F,
    lambda: &Partition,
    memo: &mut HashMap<Partition, Arc<QuotientPresentation<F::Elem>>>,
) -> Result<Arc<QuotientPresentation<F::Elem>>> {
    if let Some(p) = memo.get(lambda) {
        return Ok(Arc::clone(p));
    }
    let g = gamma_lambda(field, lambda, lambda.size().max(2))?;
    let p = Arc::new(pi0(&g)?);
    memo.insert(lambda.clone(), Arc::clone(&p));
    Ok(p)
}

/// Projects a sparse vector of `Z([1])` into `π₀(Z) = ⊕ π₀(Γ(λ_j))`.
fn project_level1<F: Field>(
    field: &F,
    module: &GammaModule<F>,
    q: &SummandQuotients<F::Elem>,
    x: &SparseVec<F::Elem>,
) -> Vec<F::Elem> {
    let mut out = vec![field.zero(); q.dim];
    for (c, coef) in x {
        let (j, _) = module.orbit_label(1, *c).expect("orbit sum");
        let local = c - module.summand_offset(1, j).expect("orbit sum");
        let p = &q.pres[j];
        for s in 0..p.dim() {
            let v = p.projection.get(s, local);
            if !field.is_zero(v) {
                field.add_assign(&mut out[q.offsets[j] + s], &field.mul(coef, v));
            }
        }
    }
    out
}

/// Applies `π₀` stage-wise to a resolution.
pub fn apply_pi0<F: Field>(complex: &ModuleComplex<F>) -> Result<Pi0Complex<F::Elem>> {
    let field = complex.target().field();
    let mut memo = HashMap::new();
    let mut quotients = Vec::with_capacity(complex.stages().len());
    for s in complex.stages() {
        let pres = s
            .summands
            .iter()
            .map(|l| gamma_pi0(field, l, &mut memo))
            .collect::<Result<Vec<_>>>()?;
        quotients.push(SummandQuotients::new(pres));
    }
    let mut differentials = Vec::new();
    for k in 1..complex.stages().len() {
        let stage = complex.stage(k);
        let (q_hi, q_lo) = (&quotients[k], &quotients[k - 1]);
        let lower = complex.module(k - 1);
        let mut cols = Vec::with_capacity(q_hi.dim);
        for (j, p) in q_hi.pres.iter().enumerate() {
            let base = stage.module().summand_offset(1, j).expect("orbit sum");
            for &s in &p.survivors {
                let img = stage.image_of_basis(1, base + s)?;
                cols.push(project_level1(field, lower, q_lo, &img));
            }
        }
        differentials.push(Matrix::from_columns(field, q_lo.dim, &cols));
    }
    let top_rank = match complex.length() {
        None => 0,
        Some(l) => {
            let kernel = complex.top_kernel(1)?;
            let q = &quotients[l];
            let module = complex.module(l);
            let cols: Vec<Vec<F::Elem>> = kernel
                .iter()
                .map(|k| project_level1(field, module, q, &crate::resolution::cover::to_sparse(field, k)))
                .collect();
            linalg::rank(field, &Matrix::from_columns(field, q.dim, &cols))
        }
    };
    Ok(Pi0Complex {
        dims: quotients.iter().map(|q| q.dim).collect(),
        d_squared_zero: check_squares(field, &differentials),
        differentials,
        top_rank,
    })
}

/// Summary of one resolution stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSummary {
    pub degree: usize,
    /// `(λ, multiplicity)` in summand order.
    pub summands: Vec<(String, usize)>,
    pub total_summands: usize,
    pub dim_at_trunc: usize,
    pub certificate: Vec<CertEntry>,
    pub certified: bool,
}

/// Comparison with the run at `(N - 1, B - 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stability {
    pub previous_trunc: usize,
    pub previous_bound: usize,
    pub previous_dims: Vec<usize>,
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiReport {
    pub target: String,
    pub field: String,
    /// `π₀` or the name of a weight.
    pub functor: String,
    pub params: PiParams,
    pub dims: Vec<usize>,
    /// Dimensions of the complex the homology is taken of.
    pub chain_dims: Vec<usize>,
    /// `r_1, ..., r_{d+1}`.
    pub ranks: Vec<usize>,
    pub stages: Vec<StageSummary>,
    pub certified: bool,
    pub d_squared_zero: bool,
    pub approximation: String,
    pub stability: Option<Stability>,
}

impl PiReport {
    /// Records the comparison with a smaller run.
    pub fn compare_with(&mut self, previous: &PiReport) {
        self.stability = Some(Stability {
            previous_trunc: previous.params.trunc,
            previous_bound: previous.params.bound,
            previous_dims: previous.dims.clone(),
            stable: previous.dims == self.dims,
        });
    }
}

pub(crate) fn stage_summaries<F: Field>(complex: &ModuleComplex<F>) -> Vec<StageSummary> {
    let trunc = complex.target().trunc();
    complex
        .stages()
        .iter()
        .enumerate()
        .map(|(k, s)| StageSummary {
            degree: k,
            summands: s.multiplicities().into_iter().map(|(l, m)| (l.to_string(), m)).collect(),
            total_summands: s.summands.len(),
            dim_at_trunc: s.dim_at(trunc),
            certificate: s.certificate.clone(),
            certified: s.certified(),
        })
        .collect()
}

pub(crate) fn build_report<F: Field>(
    complex: &ModuleComplex<F>,
    chain: &Pi0Complex<F::Elem>,
    params: PiParams,
    functor: &str,
) -> PiReport {
    let field = complex.target().field();
    let ranks = chain.ranks(field);
    PiReport {
        target: complex.target().name().to_string(),
        field: field.spec().to_string(),
        functor: functor.to_string(),
        params,
        dims: chain.homology(field),
        chain_dims: chain.dims.clone(),
        ranks: ranks[1..].to_vec(),
        stages: stage_summaries(complex),
        certified: complex.certified(),
        d_squared_zero: chain.d_squared_zero,
        approximation: format!("approximate at truncation (N,B) = ({},{})", params.trunc, params.bound),
        stability: None,
    }
}

pub(crate) fn resolve<F: Field>(target: &Arc<GammaModule<F>>, params: &PiParams) -> Result<ModuleComplex<F>> {
    if target.trunc() != params.trunc {
        return Err(Error::TruncationMismatch(target.trunc(), params.trunc));
    }
    if params.trunc < 2 {
        return Err(Error::Truncation {
            level: 2,
            trunc: params.trunc,
        });
    }
    y_resolution(target, params.degree, &params.cover_options())
}

/// `π^{𝒴,(N,B)}_i(F)` for `i <= d` from a resolution of length `d`.
pub fn relative_pi_with<F: Field>(target: &Arc<GammaModule<F>>, params: &PiParams) -> Result<PiReport> {
    let complex = resolve(target, params)?;
    let chain = apply_pi0(&complex)?;
    Ok(build_report(&complex, &chain, *params, "π₀"))
}

pub fn relative_pi<F: Field>(target: &Arc<GammaModule<F>>, degree: usize, trunc: usize, bound: usize) -> Result<PiReport> {
    relative_pi_with(target, &PiParams::new(degree, trunc, bound))
}

/// Left derived functors of `π₀` from covers by representables only.
pub fn absolute_pi<F: Field>(target: &Arc<GammaModule<F>>, degree: usize, trunc: usize) -> Result<PiReport> {
    let mut params = PiParams::new(degree, trunc, trunc);
    params.family = PartitionFamily::Representable;
    relative_pi_with(target, &params)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethRow {
    pub degree: usize,
    pub lhs: usize,
    pub pi_f: usize,
    pub t_zero: usize,
    pub f_zero: usize,
    pub pi_t: usize,
    pub rhs: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethTable {
    pub rows: Vec<KunnethRow>,
    pub holds: bool,
}

/// Compares `π_i(F ⊗ T)` with `π_i(F) ⊗ T([0]) ⊕ F([0]) ⊗ π_i(T)`.
pub fn kunneth_check<F: Field>(
    f: &Arc<GammaModule<F>>,
    t: &Arc<GammaModule<F>>,
    params: &PiParams,
) -> Result<KunnethTable> {
    let ft = GammaModule::tensor(f, t)?;
    let pf = relative_pi_with(f, params)?;
    let pt = relative_pi_with(t, params)?;
    let pft = relative_pi_with(&ft, params)?;
    let (f0, t0) = (f.dim(0), t.dim(0));
    let rows: Vec<KunnethRow> = (0..=params.degree)
        .map(|i| {
            let rhs = pf.dims[i] * t0 + f0 * pt.dims[i];
            KunnethRow {
                degree: i,
                lhs: pft.dims[i],
                pi_f: pf.dims[i],
                t_zero: t0,
                f_zero: f0,
                pi_t: pt.dims[i],
                rhs,
                holds: rhs == pft.dims[i],
            }
        })
        .collect();
    Ok(KunnethTable {
        holds: rows.iter().all(|r| r.holds),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_lam, corpus_algebra, FiniteModule, DEFAULT_LEVEL_CAP};
    use crate::field::{FieldSpec, PrimeField, Rationals};
    use crate::gamma::{partitions_up_to, representable};
    use crate::with_field;

    fn lam<F: Field>(field: &F, name: &str, regular: bool, trunc: usize) -> Arc<GammaModule<F>> {
        let (a, _) = corpus_algebra(field, name).unwrap();
        let m = if regular {
            FiniteModule::regular(&a)
        } else {
            FiniteModule::residue(&a).unwrap()
        };
        build_lam(&Arc::new(m), trunc, DEFAULT_LEVEL_CAP).unwrap()
    }

    #[test]
    fn projectives_have_no_higher_pi() {
        let q = Rationals;
        for lambda in partitions_up_to(3) {
            let g = gamma_lambda(&q, &lambda, 3).unwrap();
            let r = relative_pi(&g, 2, 3, 3).unwrap();
            assert_eq!(r.dims[1..], [0, 0], "{lambda}");
            assert_eq!(r.dims[0], lambda.len());
            assert!(r.certified && r.d_squared_zero);
        }
    }

    #[test]
    fn constant_module_vanishes() {
        let q = Rationals;
        let g0 = representable(&q, 0, 3).unwrap();
        assert_eq!(relative_pi(&g0, 2, 3, 3).unwrap().dims, vec![0, 0, 0]);
    }

    #[test]
    fn degree_zero_matches_pi0() {
        for spec in [FieldSpec::Rationals, FieldSpec::Prime(2)] {
            with_field!(spec, |field| {
                for name in ["K[x]/(x^2)", "K[x,y]/(x^2,xy,y^2)"] {
                    for regular in [true, false] {
                        let l = lam(&field, name, regular, 3);
                        let r = relative_pi(&l, 0, 3, 3).unwrap();
                        assert_eq!(r.dims[0], pi0(&l).unwrap().dim(), "{name}");
                    }
                }
            })
        }
    }

    #[test]
    fn top_rank_shortcut_matches_full_stage() {
        let f2 = PrimeField::new(2).unwrap();
        let l = lam(&f2, "K[x]/(x^2)", true, 3);
        let params = PiParams::new(1, 3, 3);
        let short = relative_pi_with(&l, &params).unwrap();
        let mut longer = params;
        longer.degree = 2;
        let long = relative_pi_with(&l, &longer).unwrap();
        assert_eq!(short.dims[..2], long.dims[..2]);
        assert_eq!(short.ranks[1], long.ranks[1]);
    }

    #[test]
    fn lam_k_degree_one() {
        let q = Rationals;
        let l = lam(&q, "K[x]/(x^2)", false, 3);
        let r = relative_pi(&l, 1, 3, 3).unwrap();
        assert_eq!(r.dims, vec![1, 1]);
        assert!(r.certified);
    }

    #[test]
    fn strategies_agree() {
        let f3 = PrimeField::new(3).unwrap();
        let l = lam(&f3, "K[x]/(x^2)", true, 3);
        let mut p = PiParams::new(1, 3, 3);
        let a = relative_pi_with(&l, &p).unwrap();
        p.strategy = CoverStrategy::Basis;
        let b = relative_pi_with(&l, &p).unwrap();
        assert_eq!(a.dims, b.dims);
    }

    #[test]
    fn determinism() {
        let q = Rationals;
        let l = lam(&q, "K[x]/(x^3)", false, 3);
        let a = serde_json::to_string(&relative_pi(&l, 1, 3, 3).unwrap()).unwrap();
        let b = serde_json::to_string(&relative_pi(&l, 1, 3, 3).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn kunneth_on_gamma_one() {
        let q = Rationals;
        let g1 = representable(&q, 1, 3).unwrap();
        let t = kunneth_check(&g1, &g1, &PiParams::new(1, 3, 3)).unwrap();
        assert!(t.holds, "{t:?}");
        assert_eq!(t.rows[0].lhs, 2);
        assert_eq!(t.rows[1].lhs, 0);
        let g0 = representable(&q, 0, 3).unwrap();
        let l = lam(&q, "K[x]/(x^2)", false, 3);
        let t = kunneth_check(&l, &g0, &PiParams::new(1, 3, 3)).unwrap();
        assert!(t.holds, "{t:?}");
    }
}
