//! 𝒴-projective covers `⊕_j Γ(λ_j) -> F`, built partition by partition.
//!
//! All invariant bookkeeping happens in orbit coordinates: a `Σ(λ)`-fixed
//! vector of a module that permutes its basis is determined by its values on
//! orbit representatives.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gamma::ops::{young_invariants, young_orbits};
use crate::gamma::{
    realize_orbit_sum, young_generators, GammaModule, NatTransform, OrbitTable, Partition, PartitionFamily,
    PointedMap,
};
use crate::linalg::{self, Echelon, Matrix};

/// Sparse vector: `(index, coefficient)` pairs, indices increasing.
pub type SparseVec<E> = Vec<(usize, E)>;

/// Default bound on the total dimension of a cover at level `N`.
pub const DEFAULT_COVER_CAP: usize = 200_000;

/// How generators of a cover are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoverStrategy {
    /// One summand `Γ(λ)` per basis vector of the invariants `F([s(λ)])^{Σ(λ)}`.
    Basis,
    /// Only the invariants not already reached by the summands chosen so far.
    Minimal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverOptions {
    pub bound: usize,
    pub family: PartitionFamily,
    pub strategy: CoverStrategy,
    pub cap: usize,
}

impl CoverOptions {
    pub fn new(bound: usize) -> Self {
        CoverOptions {
            bound,
            family: PartitionFamily::Young,
            strategy: CoverStrategy::Minimal,
            cap: DEFAULT_COVER_CAP,
        }
    }

    pub fn with_family(mut self, family: PartitionFamily) -> Self {
        self.family = family;
        self
    }

    pub fn with_strategy(mut self, strategy: CoverStrategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

/// Surjectivity record for one partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertEntry {
    pub partition: String,
    /// Dimension of the target's invariants at level `s(λ)`.
    pub invariants: usize,
    /// Summands `Γ(λ)` attached for this partition.
    pub added: usize,
    pub covered: bool,
}

/// Coordinates on the `Σ(λ)`-fixed vectors of one level.
pub(crate) enum Frame<E> {
    /// The module permutes its basis: coordinate `i` is the value on the
    /// least element of orbit `i`.
    Orbits {
        orbits: Vec<Vec<usize>>,
        coord_of: HashMap<usize, usize>,
    },
    /// Generic module: full coordinates, with a basis of the fixed space.
    Full { dim: usize, invariants: Vec<Vec<E>> },
}

impl<E: Clone> Frame<E> {
    pub(crate) fn new<F: Field<Elem = E>>(module: &GammaModule<F>, lambda: &Partition) -> Result<Self> {
        if let Some(orbits) = young_orbits(module, lambda) {
            let coord_of = orbits.iter().enumerate().map(|(i, o)| (o[0], i)).collect();
            return Ok(Frame::Orbits { orbits, coord_of });
        }
        Ok(Frame::Full {
            dim: module.dim(lambda.size()),
            invariants: young_invariants(module, lambda)?,
        })
    }

    pub(crate) fn dim(&self) -> usize {
        match self {
            Frame::Orbits { orbits, .. } => orbits.len(),
            Frame::Full { dim, .. } => *dim,
        }
    }

    /// Coordinates of the whole fixed space.
    pub(crate) fn invariant_coords<F: Field<Elem = E>>(&self, field: &F) -> Vec<Vec<E>> {
        match self {
            Frame::Orbits { orbits, .. } => (0..orbits.len())
                .map(|i| {
                    let mut v = vec![field.zero(); orbits.len()];
                    v[i] = field.one();
                    v
                })
                .collect(),
            Frame::Full { invariants, .. } => invariants.clone(),
        }
    }

    /// Accumulates `coef * (entry at index r)` into frame coordinates.
    fn accumulate<F: Field<Elem = E>>(&self, field: &F, out: &mut [E], r: usize, coef: &E) {
        match self {
            Frame::Orbits { coord_of, .. } => {
                if let Some(&i) = coord_of.get(&r) {
                    field.add_assign(&mut out[i], coef);
                }
            }
            Frame::Full { .. } => field.add_assign(&mut out[r], coef),
        }
    }

    /// The fixed vector with the given coordinates, as a sparse vector.
    pub(crate) fn lift<F: Field<Elem = E>>(&self, field: &F, coords: &[E]) -> SparseVec<E> {
        let mut out: Vec<(usize, E)> = Vec::new();
        match self {
            Frame::Orbits { orbits, .. } => {
                for (c, o) in coords.iter().zip(orbits) {
                    if !field.is_zero(c) {
                        out.extend(o.iter().map(|&i| (i, c.clone())));
                    }
                }
                out.sort_by_key(|(i, _)| *i);
            }
            Frame::Full { .. } => {
                out.extend(
                    coords
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !field.is_zero(c))
                        .map(|(i, c)| (i, c.clone())),
                );
            }
        }
        out
    }
}

/// `P(f)(x)` for a sparse `x`, read off in frame coordinates.
pub(crate) fn apply_into_frame<F: Field>(
    module: &GammaModule<F>,
    frame: &Frame<F::Elem>,
    f: &PointedMap,
    x: &SparseVec<F::Elem>,
    out: &mut [F::Elem],
) -> Result<()> {
    let field = module.field();
    for (c, coef) in x {
        for (r, y) in module.column(f, *c)? {
            frame.accumulate(field, out, r, &field.mul(coef, &y));
        }
    }
    Ok(())
}

/// `P(f)(x)` for a sparse `x`, as a sparse vector.
pub fn apply_sparse<F: Field>(module: &GammaModule<F>, f: &PointedMap, x: &SparseVec<F::Elem>) -> Result<SparseVec<F::Elem>> {
    let field = module.field();
    let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
    for (c, coef) in x {
        for (r, y) in module.column(f, *c)? {
            let e = acc.entry(r).or_insert_with(|| field.zero());
            field.add_assign(e, &field.mul(coef, &y));
        }
    }
    Ok(acc.into_iter().filter(|(_, v)| !field.is_zero(v)).collect())
}

pub(crate) fn to_dense<F: Field>(field: &F, dim: usize, x: &SparseVec<F::Elem>) -> Vec<F::Elem> {
    let mut v = vec![field.zero(); dim];
    for (i, c) in x {
        v[*i] = c.clone();
    }
    v
}

pub(crate) fn to_sparse<F: Field>(field: &F, v: &[F::Elem]) -> SparseVec<F::Elem> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !field.is_zero(x))
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// Orbits of `Σ(μ)` (post-composition) on the basis of `Γ(λ)([s(μ)])`,
/// memoized per `(λ, μ, N)`.
pub(crate) fn summand_orbits(lambda: &Partition, mu: &Partition, trunc: usize) -> Arc<Vec<Vec<usize>>> {
    type Key = (Partition, Partition, usize);
    static MEMO: OnceLock<Mutex<HashMap<Key, Arc<Vec<Vec<usize>>>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (lambda.clone(), mu.clone(), trunc);
    if let Some(o) = memo.lock().expect("orbit memo").get(&key) {
        return Arc::clone(o);
    }
    let table = OrbitTable::get(lambda, trunc);
    let n = mu.size();
    let dim = table.dim(n);
    let mut parent: Vec<usize> = (0..dim).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in young_generators(mu) {
        for i in 0..dim {
            let j = table.push_forward(&g, i);
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..dim {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let orbits = Arc::new(groups.into_values().collect::<Vec<_>>());
    memo.lock()
        .expect("orbit memo")
        .entry(key)
        .or_insert(orbits)
        .clone()
}

/// Dimension of `Γ(λ)([m])`.
pub fn gamma_lambda_dim(lambda: &Partition, m: usize) -> usize {
    lambda
        .parts()
        .iter()
        .map(|&p| crate::algebra::lam::binomial((m + p) as u64, p as u64) as usize)
        .product()
}

/// A cover `Z = ⊕_j Γ(λ_j) -> P` with generator `x_j ∈ P([s(λ_j)])`.
pub struct CoverStage<F: Field> {
    pub summands: Vec<Partition>,
    pub generators: Vec<SparseVec<F::Elem>>,
    pub certificate: Vec<CertEntry>,
    module: Arc<GammaModule<F>>,
    parent: Arc<GammaModule<F>>,
    map: OnceLock<NatTransform<F>>,
}

impl<F: Field> CoverStage<F> {
    /// Rebuilds a stage from its generators.
    pub fn from_generators(
        parent: &Arc<GammaModule<F>>,
        summands: Vec<Partition>,
        generators: Vec<SparseVec<F::Elem>>,
        certificate: Vec<CertEntry>,
    ) -> Result<Self> {
        if summands.len() != generators.len() {
            return Err(Error::InvalidArgument("one generator per summand required".into()));
        }
        for (l, x) in summands.iter().zip(&generators) {
            let dim = parent.dim(l.size());
            if x.iter().any(|(i, _)| *i >= dim) {
                return Err(Error::InvalidArgument(format!("generator for {l} out of range")));
            }
        }
        let module = GammaModule::orbit_sum(parent.field(), summands.clone(), parent.trunc())?;
        Ok(CoverStage {
            summands,
            generators,
            certificate,
            module,
            parent: Arc::clone(parent),
            map: OnceLock::new(),
        })
    }

    /// `Z = ⊕ Γ(λ_j)`.
    pub fn module(&self) -> &Arc<GammaModule<F>> {
        &self.module
    }

    /// The module covered (or whose submodule is covered).
    pub fn parent(&self) -> &Arc<GammaModule<F>> {
        &self.parent
    }

    pub fn certified(&self) -> bool {
        self.certificate.iter().all(|c| c.covered)
    }

    /// The natural transformation `Z -> P`.
    pub fn map(&self) -> Result<&NatTransform<F>> {
        if let Some(m) = self.map.get() {
            return Ok(m);
        }
        let field = self.parent.field();
        let dense = self
            .summands
            .iter()
            .zip(&self.generators)
            .map(|(l, x)| to_dense(field, self.parent.dim(l.size()), x))
            .collect();
        let m = realize_orbit_sum(&self.module, &self.parent, dense)?;
        Ok(self.map.get_or_init(|| m))
    }

    /// Image in `P([n])` of basis vector `c` of `Z([n])`.
    pub fn image_of_basis(&self, n: usize, c: usize) -> Result<SparseVec<F::Elem>> {
        let (j, rep) = self
            .module
            .orbit_label(n, c)
            .ok_or_else(|| Error::InvalidArgument("cover module is not an orbit sum".into()))?;
        let f = PointedMap::new_unchecked(n, rep.to_vec());
        apply_sparse(&self.parent, &f, &self.generators[j])
    }

    /// Dense matrix of `Z([n]) -> P([n])`.
    pub fn component(&self, n: usize) -> Result<Matrix<F::Elem>> {
        let field = self.parent.field();
        let cols: Vec<Vec<F::Elem>> = (0..self.module.dim(n))
            .into_par_iter()
            .map(|c| Ok(to_dense(field, self.parent.dim(n), &self.image_of_basis(n, c)?)))
            .collect::<Result<_>>()?;
        Ok(Matrix::from_columns(field, self.parent.dim(n), &cols))
    }

    /// Total dimension of `Z([m])`.
    pub fn dim_at(&self, m: usize) -> usize {
        self.summands.iter().map(|l| gamma_lambda_dim(l, m)).sum()
    }

    /// Multiplicity of each partition among the summands.
    pub fn multiplicities(&self) -> Vec<(Partition, usize)> {
        let mut out: Vec<(Partition, usize)> = Vec::new();
        for l in &self.summands {
            match out.iter_mut().find(|(p, _)| p == l) {
                Some((_, k)) => *k += 1,
                None => out.push((l.clone(), 1)),
            }
        }
        out
    }
}

/// Frame-coordinate images of the `Σ(μ)`-orbit sums of summand `Γ(λ)` with
/// generator `x`.
fn summand_images<F: Field>(
    parent: &GammaModule<F>,
    frame: &Frame<F::Elem>,
    lambda: &Partition,
    x: &SparseVec<F::Elem>,
    mu: &Partition,
) -> Result<Vec<Vec<F::Elem>>> {
    let field = parent.field();
    let n = mu.size();
    let table = OrbitTable::get(lambda, parent.trunc());
    let orbits = summand_orbits(lambda, mu, parent.trunc());
    orbits
        .par_iter()
        .map(|orbit| {
            let mut v = vec![field.zero(); frame.dim()];
            for &q in orbit {
                let f = PointedMap::new_unchecked(n, table.rep(n, q).to_vec());
                apply_into_frame(parent, frame, &f, x, &mut v)?;
            }
            Ok(v)
        })
        .collect()
}

/// Frame coordinates of the `Σ(μ)`-fixed vectors of `Ker(below)`, where
/// `below : P -> Q` is a cover stage and `P` permutes its basis.
fn kernel_invariants<F: Field>(below: &CoverStage<F>, frame: &Frame<F::Elem>, mu: &Partition) -> Result<Vec<Vec<F::Elem>>> {
    let field = below.parent.field();
    let n = mu.size();
    let Frame::Orbits { orbits, .. } = frame else {
        return Err(Error::InvalidArgument("kernel frames need a basis-permuting module".into()));
    };
    let qframe = Frame::new(&below.parent, mu)?;
    let columns: Vec<Vec<F::Elem>> = orbits
        .par_iter()
        .map(|orbit| {
            let mut v = vec![field.zero(); qframe.dim()];
            for &c in orbit {
                let (j, rep) = below.module.orbit_label(n, c).expect("orbit sum");
                let f = PointedMap::new_unchecked(n, rep.to_vec());
                apply_into_frame(&below.parent, &qframe, &f, &below.generators[j], &mut v)?;
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    if columns.is_empty() {
        return Ok(Vec::new());
    }
    let m = Matrix::from_columns(field, qframe.dim(), &columns);
    Ok(linalg::kernel_basis(field, &m))
}

fn cover_dim_at(summands: &[Partition], m: usize) -> usize {
    summands.iter().map(|l| gamma_lambda_dim(l, m)).sum()
}

/// Covers `P` itself (`below = None`) or the kernel of `below : P -> Q`.
fn build_cover<F: Field>(
    parent: &Arc<GammaModule<F>>,
    below: Option<&CoverStage<F>>,
    opts: &CoverOptions,
) -> Result<CoverStage<F>> {
    let field = parent.field();
    let trunc = parent.trunc();
    if opts.bound > trunc {
        return Err(Error::Truncation {
            level: opts.bound,
            trunc,
        });
    }
    let mut summands: Vec<Partition> = Vec::new();
    let mut generators: Vec<SparseVec<F::Elem>> = Vec::new();
    let mut certificate = Vec::new();
    for mu in opts.family.partitions(opts.bound) {
        let n = mu.size();
        let frame = Frame::new(parent, &mu)?;
        let wanted = match below {
            None => frame.invariant_coords(field),
            Some(b) => kernel_invariants(b, &frame, &mu)?,
        };
        if wanted.is_empty() {
            certificate.push(CertEntry {
                partition: mu.to_string(),
                invariants: 0,
                added: 0,
                covered: true,
            });
            continue;
        }
        let mut ech = Echelon::new(field, frame.dim());
        if opts.strategy == CoverStrategy::Minimal {
            for (l, x) in summands.iter().zip(&generators) {
                if l.size() > n {
                    continue;
                }
                for v in summand_images(parent, &frame, l, x, &mu)? {
                    ech.insert(v);
                }
                if ech.rank() == wanted.len() {
                    break;
                }
            }
        }
        let mut added = 0;
        for w in &wanted {
            if opts.strategy == CoverStrategy::Minimal && ech.contains(w) {
                continue;
            }
            let x = frame.lift(field, w);
            for v in summand_images(parent, &frame, &mu, &x, &mu)? {
                ech.insert(v);
            }
            summands.push(mu.clone());
            generators.push(x);
            added += 1;
            let dim = cover_dim_at(&summands, trunc);
            if dim > opts.cap {
                return Err(Error::ResourceCap {
                    level: trunc,
                    dim,
                    cap: opts.cap,
                    partition: mu.to_string(),
                });
            }
        }
        let covered = wanted.iter().all(|w| ech.contains(w));
        certificate.push(CertEntry {
            partition: mu.to_string(),
            invariants: wanted.len(),
            added,
            covered,
        });
    }
    CoverStage::from_generators(parent, summands, generators, certificate)
}

/// A 𝒴-projective cover of `F` by summands `Γ(λ)`, `s(λ) <= bound`.
pub fn y_cover<F: Field>(target: &Arc<GammaModule<F>>, opts: &CoverOptions) -> Result<CoverStage<F>> {
    build_cover(target, None, opts)
}

/// A 𝒴-projective cover of the kernel of a cover stage, mapping into that
/// stage's module.
pub fn cover_kernel<F: Field>(below: &CoverStage<F>, opts: &CoverOptions) -> Result<CoverStage<F>> {
    build_cover(below.module(), Some(below), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_lam, corpus_algebra, FiniteModule, DEFAULT_LEVEL_CAP};
    use crate::field::{PrimeField, Rationals};
    use crate::gamma::{corestrict, gamma_lambda, is_y_epi, is_y_epi_in, kernel_module, representable};

    fn lam_k<F: Field>(field: &F, name: &str, trunc: usize) -> Arc<GammaModule<F>> {
        let (a, _) = corpus_algebra(field, name).unwrap();
        build_lam(&Arc::new(FiniteModule::residue(&a).unwrap()), trunc, DEFAULT_LEVEL_CAP).unwrap()
    }

    #[test]
    fn zero_module_has_empty_cover() {
        let q = Rationals;
        let z = GammaModule::zero(&q, 3);
        let c = y_cover(&z, &CoverOptions::new(3)).unwrap();
        assert!(c.summands.is_empty());
        assert!(c.certified());
    }

    #[test]
    fn gamma_two_cover_contains_identity() {
        let q = Rationals;
        let g2 = gamma_lambda(&q, &Partition::single(2), 3).unwrap();
        for strategy in [CoverStrategy::Minimal, CoverStrategy::Basis] {
            let c = y_cover(&g2, &CoverOptions::new(3).with_strategy(strategy)).unwrap();
            let id = g2.orbit_table(0).unwrap().lookup(2, &[1, 2]).unwrap();
            let found = c
                .summands
                .iter()
                .zip(&c.generators)
                .any(|(l, x)| *l == Partition::single(2) && *x == vec![(id, q.one())]);
            assert!(found, "{strategy:?}");
            assert!(is_y_epi(c.map().unwrap(), 3).unwrap().holds);
        }
    }

    #[test]
    fn basis_multiplicities_match_invariants() {
        let q = Rationals;
        let l = lam_k(&q, "K[x]/(x^2)", 3);
        let c = y_cover(&l, &CoverOptions::new(3).with_strategy(CoverStrategy::Basis)).unwrap();
        let mult: HashMap<String, usize> = c
            .multiplicities()
            .into_iter()
            .map(|(p, k)| (p.to_string(), k))
            .collect();
        assert_eq!(mult["∅"], 1);
        assert_eq!(mult["(1)"], 2);
        assert_eq!(mult["(2)"], 3);
        assert_eq!(mult["(1,1)"], 4);
        assert!(is_y_epi(c.map().unwrap(), 3).unwrap().holds);
    }

    #[test]
    fn minimal_cover_of_lam_k() {
        let q = Rationals;
        let l = lam_k(&q, "K[x]/(x^2)", 4);
        let c = y_cover(&l, &CoverOptions::new(4)).unwrap();
        let names: Vec<String> = c.summands.iter().map(ToString::to_string).collect();
        assert_eq!(names, vec!["∅", "(1)", "(2)", "(3)", "(4)"]);
        assert!(c.certified());
        assert!(is_y_epi(c.map().unwrap(), 4).unwrap().holds);
    }

    #[test]
    fn kernel_cover_is_certified_independently() {
        let f2 = PrimeField::new(2).unwrap();
        let l = lam_k(&f2, "K[x]/(x^2)", 3);
        let opts = CoverOptions::new(3);
        let z0 = y_cover(&l, &opts).unwrap();
        let z1 = cover_kernel(&z0, &opts).unwrap();
        assert!(z1.certified());
        let (k, _) = kernel_module(z0.map().unwrap()).unwrap();
        let onto = corestrict(z1.map().unwrap(), &k).unwrap();
        assert!(is_y_epi(&onto, 3).unwrap().holds);
        // ∂∂ = 0
        for n in 0..=3 {
            let prod = z0.component(n).unwrap().mul(&f2, &z1.component(n).unwrap());
            assert!(prod.is_zero(&f2));
        }
    }

    #[test]
    fn representable_family_cover() {
        let q = Rationals;
        let g1 = representable(&q, 1, 3).unwrap();
        let opts = CoverOptions::new(3).with_family(PartitionFamily::Representable);
        let c = y_cover(&g1, &opts).unwrap();
        assert!(c.summands.iter().all(|l| l.is_trivial_group()));
        assert!(is_y_epi_in(c.map().unwrap(), 3, PartitionFamily::Representable).unwrap().holds);
    }

    #[test]
    fn cap_names_the_partition() {
        let q = Rationals;
        let (a, _) = corpus_algebra(&q, "K[x]/(x^3)").unwrap();
        let l = build_lam(&Arc::new(FiniteModule::regular(&a)), 3, DEFAULT_LEVEL_CAP).unwrap();
        let err = y_cover(&l, &CoverOptions::new(3).with_strategy(CoverStrategy::Basis).with_cap(50)).err().expect("cap should trip");
        match err {
            Error::ResourceCap { cap: 50, level: 3, .. } => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dims_formula() {
        assert_eq!(gamma_lambda_dim(&Partition::single(2), 2), 6);
        assert_eq!(gamma_lambda_dim(&Partition::empty(), 5), 1);
        assert_eq!(gamma_lambda_dim(&Partition::ones(3), 2), 27);
    }
}
