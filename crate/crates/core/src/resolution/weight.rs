//! Contravariant weights `t` and `Λⁿ∘t`, the coend `T ⊗_Γ F`, and
//! `Tor^𝒴_*(T, F)`.
//!
//! `t([m])` is the space of maps `[m] -> K` vanishing at the basepoint, with
//! basis `φ_1, ..., φ_m`; `f : [n] -> [m]` acts by `φ_i ↦ φ_i ∘ f`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gamma::{enumerate_maps, young_generators, GammaModule, Partition, PointedMap};
use crate::linalg::{self, Echelon, Label, LabeledSpace, LinearMap, Matrix, QuotientPresentation};
use crate::resolution::pi::{build_report, check_squares, resolve, Pi0Complex, PiParams, PiReport, SummandQuotients};
use crate::resolution::ModuleComplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightKind {
    T,
    /// `Λⁿ∘t`.
    LambdaT(usize),
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightKind::T => write!(f, "t"),
            WeightKind::LambdaT(n) => write!(f, "Λ^{n}∘t"),
        }
    }
}

/// `Λⁿ(t([m]))` for `m <= trunc`, with the wedge basis of increasing
/// `n`-subsets of `{1..m}` in lexicographic order. `n = 1` is `t` itself.
#[derive(Clone, Debug)]
pub struct Weight {
    kind: WeightKind,
    power: usize,
    trunc: usize,
    subsets: Vec<Vec<Vec<u8>>>,
    index: Vec<HashMap<Vec<u8>, usize>>,
}

fn subsets_of(m: usize, n: usize) -> Vec<Vec<u8>> {
    fn go(start: u8, m: u8, n: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..=m {
            cur.push(i);
            go(i + 1, m, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, m as u8, n, &mut Vec::with_capacity(n), &mut out);
    out
}

pub fn weight_t(trunc: usize) -> Weight {
    Weight::build(WeightKind::T, 1, trunc)
}

pub fn weight_lambda_t(n: usize, trunc: usize) -> Result<Weight> {
    if n == 0 {
        return Err(Error::InvalidArgument("Λ⁰∘t is the constant weight; use n >= 1".into()));
    }
    Ok(if n == 1 {
        weight_t(trunc)
    } else {
        Weight::build(WeightKind::LambdaT(n), n, trunc)
    })
}

impl Weight {
    fn build(kind: WeightKind, power: usize, trunc: usize) -> Self {
        let subsets: Vec<Vec<Vec<u8>>> = (0..=trunc).map(|m| subsets_of(m, power)).collect();
        let index = subsets
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        Weight {
            kind,
            power,
            trunc,
            subsets,
            index,
        }
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn dim(&self, m: usize) -> usize {
        self.subsets[m].len()
    }

    pub fn level(&self, m: usize) -> LabeledSpace {
        LabeledSpace::new(
            self.subsets[m]
                .iter()
                .map(|s| Label::Wedge(s.iter().map(|&i| i as u32).collect()))
                .collect(),
        )
    }

    /// Least level whose elements generate the weight: every basis vector
    /// at level `m` is pulled back from `φ_1 ∧ ... ∧ φ_n` at level `n`.
    pub fn generation_level(&self) -> usize {
        self.power
    }

    /// `T(f) e_b` for `f : [n] -> [m]` and a basis vector `e_b` of `T([m])`,
    /// as signed basis indices of `T([n])`.
    pub fn pullback(&self, f: &PointedMap, b: usize) -> Vec<(usize, i64)> {
        let n = f.source();
        let wedge = &self.subsets[f.target()][b];
        let fibres: Vec<Vec<u8>> = wedge
            .iter()
            .map(|&i| (1..=n as u8).filter(|&k| f.eval(k as usize) == i as usize).collect())
            .collect();
        if fibres.iter().any(Vec::is_empty) {
            return Vec::new();
        }
        let mut out: HashMap<usize, i64> = HashMap::new();
        let mut choice = vec![0usize; fibres.len()];
        loop {
            let picked: Vec<u8> = choice.iter().zip(&fibres).map(|(&c, fib)| fib[c]).collect();
            // Fibres are disjoint, so the picked indices are distinct.
            let mut sorted = picked.clone();
            let mut sign = 1i64;
            for i in 0..sorted.len() {
                for j in 0..sorted.len() - 1 - i {
                    if sorted[j] > sorted[j + 1] {
                        sorted.swap(j, j + 1);
                        sign = -sign;
                    }
                }
            }
            *out.entry(self.index[n][&sorted]).or_insert(0) += sign;
            let mut k = 0;
            loop {
                if k == choice.len() {
                    let mut v: Vec<(usize, i64)> = out.into_iter().filter(|&(_, c)| c != 0).collect();
                    v.sort_unstable();
                    return v;
                }
                choice[k] += 1;
                if choice[k] < fibres[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    /// Matrix of `T(f) : T([m]) -> T([n])`.
    pub fn action<F: Field>(&self, field: &F, f: &PointedMap) -> Matrix<F::Elem> {
        let mut out = Matrix::zeros(field, self.dim(f.source()), self.dim(f.target()));
        for b in 0..self.dim(f.target()) {
            for (r, c) in self.pullback(f, b) {
                out.set(r, b, field.from_i64(c));
            }
        }
        out
    }

    fn pullback_vec<F: Field>(&self, field: &F, f: &PointedMap, b: usize, scale: &F::Elem, out: &mut [F::Elem]) {
        for (r, c) in self.pullback(f, b) {
            field.add_assign(&mut out[r], &field.mul(scale, &field.from_i64(c)));
        }
    }

    /// `T ⊗_Γ Γ(λ) = T([s])_{Σ(λ)}`.
    pub fn on_gamma_lambda<F: Field>(&self, field: &F, lambda: &Partition) -> Result<QuotientPresentation<F::Elem>> {
        let s = lambda.size();
        self.check_level(s)?;
        let space = self.level(s);
        let gens: Vec<LinearMap<F::Elem>> = young_generators(lambda)
            .iter()
            .map(|g| LinearMap {
                domain: space.clone(),
                codomain: space.clone(),
                matrix: self.action(field, g),
            })
            .collect();
        linalg::coinvariants(field, &space, &gens)
    }

    fn check_level(&self, m: usize) -> Result<()> {
        if m > self.trunc {
            return Err(Error::Truncation {
                level: m,
                trunc: self.trunc,
            });
        }
        Ok(())
    }
}

/// The coend `⊕_{n<=N} T([n]) ⊗ F([n])` modulo `T(f)t' ⊗ y - t' ⊗ F(f)y`.
///
/// Returns the surviving coordinates, labelled `(n, t, y)`.
pub fn weighted_contract<F: Field>(weight: &Weight, module: &GammaModule<F>) -> Result<LabeledSpace> {
    let field = module.field();
    let top = module.trunc();
    weight.check_level(top)?;
    let mut offsets = Vec::with_capacity(top + 1);
    let mut total = 0;
    for n in 0..=top {
        offsets.push(total);
        total += weight.dim(n) * module.dim(n);
    }
    let idx = |n: usize, t: usize, y: usize| offsets[n] + t * module.dim(n) + y;
    let mut ech = Echelon::new(field, total);
    'outer: for n in 0..=top {
        for m in 0..=top {
            for f in enumerate_maps(n, m) {
                let fy: Vec<_> = (0..module.dim(n)).map(|y| module.column(&f, y)).collect::<Result<_>>()?;
                for tp in 0..weight.dim(m) {
                    let pulled = weight.pullback(&f, tp);
                    for (y, col) in fy.iter().enumerate() {
                        let mut rel = vec![field.zero(); total];
                        for &(t, c) in &pulled {
                            field.add_assign(&mut rel[idx(n, t, y)], &field.from_i64(c));
                        }
                        for (z, c) in col {
                            rel[idx(m, tp, *z)] = field.sub(&rel[idx(m, tp, *z)], c);
                        }
                        ech.insert(rel);
                        if ech.rank() == total {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    let mut labels = Vec::new();
    for n in 0..=top {
        for t in 0..weight.dim(n) {
            for y in 0..module.dim(n) {
                if !ech.is_pivot(idx(n, t, y)) {
                    labels.push(Label::Tensor(vec![n as u32, t as u32, y as u32]));
                }
            }
        }
    }
    Ok(LabeledSpace::new(labels))
}

/// Projects `t ⊗ y` with `y ∈ Z([m])` sparse into `T ⊗_Γ Z`.
fn contract_element<F: Field>(
    weight: &Weight,
    module: &GammaModule<F>,
    q: &SummandQuotients<F::Elem>,
    m: usize,
    t: usize,
    y: &[(usize, F::Elem)],
) -> Vec<F::Elem> {
    let field = module.field();
    let mut out = vec![field.zero(); q.dim];
    for (c, coef) in y {
        let (j, rep) = module.orbit_label(m, *c).expect("orbit sum");
        let g = PointedMap::new_unchecked(m, rep.to_vec());
        let mut local = vec![field.zero(); q.pres[j].ambient.dim()];
        weight.pullback_vec(field, &g, t, coef, &mut local);
        let projected = q.pres[j].project(field, &local);
        for (s, v) in projected.into_iter().enumerate() {
            if !field.is_zero(&v) {
                field.add_assign(&mut out[q.offsets[j] + s], &v);
            }
        }
    }
    out
}

/// `T ⊗_Γ Z_*` for a resolution `Z_*`.
pub fn apply_weight<F: Field>(weight: &Weight, complex: &ModuleComplex<F>) -> Result<Pi0Complex<F::Elem>> {
    let field = complex.target().field();
    let mut memo: HashMap<Partition, Arc<QuotientPresentation<F::Elem>>> = HashMap::new();
    let mut quotients = Vec::with_capacity(complex.stages().len());
    for s in complex.stages() {
        let mut pres = Vec::with_capacity(s.summands.len());
        for l in &s.summands {
            if !memo.contains_key(l) {
                memo.insert(l.clone(), Arc::new(weight.on_gamma_lambda(field, l)?));
            }
            pres.push(Arc::clone(&memo[l]));
        }
        quotients.push(SummandQuotients::new(pres));
    }
    let mut differentials = Vec::new();
    for k in 1..complex.stages().len() {
        let stage = complex.stage(k);
        let module = stage.module();
        let lower = complex.module(k - 1);
        let mut cols = Vec::with_capacity(quotients[k].dim);
        for (j, lambda) in stage.summands.iter().enumerate() {
            let s = lambda.size();
            let table = module.orbit_table(j).expect("orbit sum");
            let identity: Vec<u8> = (1..=s as u8).collect();
            let id = module.summand_offset(s, j).expect("orbit sum") + table.lookup(s, &identity).expect("identity orbit");
            let img = stage.image_of_basis(s, id)?;
            for &tau in &quotients[k].pres[j].survivors {
                cols.push(contract_element(weight, lower, &quotients[k - 1], s, tau, &img));
            }
        }
        differentials.push(Matrix::from_columns(field, quotients[k - 1].dim, &cols));
    }
    let top_rank = match complex.length() {
        None => 0,
        Some(l) => {
            let g = weight.generation_level();
            if g > complex.options().bound || g > complex.target().trunc() {
                return Err(Error::InvalidArgument(format!(
                    "weight {} is generated in level {g}, above the bound {}",
                    weight.kind(),
                    complex.options().bound
                )));
            }
            let module = complex.module(l);
            let cols: Vec<Vec<F::Elem>> = complex
                .top_kernel(g)?
                .iter()
                .map(|v| {
                    let sparse = crate::resolution::cover::to_sparse(field, v);
                    contract_element(weight, module, &quotients[l], g, 0, &sparse)
                })
                .collect();
            linalg::rank(field, &Matrix::from_columns(field, quotients[l].dim, &cols))
        }
    };
    Ok(Pi0Complex {
        dims: quotients.iter().map(|q| q.dim).collect(),
        d_squared_zero: check_squares(field, &differentials),
        differentials,
        top_rank,
    })
}

/// `Tor^{𝒴,(N,B)}_i(T, F)` for `i <= d`.
pub fn weighted_tor<F: Field>(weight: &Weight, target: &Arc<GammaModule<F>>, params: &PiParams) -> Result<PiReport> {
    weight.check_level(params.trunc)?;
    let complex = resolve(target, params)?;
    let chain = apply_weight(weight, &complex)?;
    Ok(build_report(&complex, &chain, *params, &weight.kind().to_string()))
}
