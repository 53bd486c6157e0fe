//! Constructions and tests on truncated Γ-modules: the projectives `Γⁿ` and
//! `Γ(λ)`, Young-subgroup invariants, `Hom(Γ(λ), F)`, `π₀`, the 𝒴-epimorphism
//! test, kernels, and functoriality checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gamma::maps::{compose_maps, enumerate_maps, partitions_up_to, young_generators, Partition, PointedMap};
use crate::gamma::module::{GammaModule, NatTransform};
use crate::linalg::{self, Echelon, LinearMap, Matrix, QuotientPresentation};

/// The representable `Γⁿ = K[Hom([n], -)]`.
pub fn representable<F: Field>(field: &F, n: usize, trunc: usize) -> Result<Arc<GammaModule<F>>> {
    GammaModule::orbit_sum(field, vec![Partition::ones(n)], trunc)
}

/// `Γ(λ)`: the `Σ(λ)`-coinvariants of `Γ^{s(λ)}`.
pub fn gamma_lambda<F: Field>(field: &F, lambda: &Partition, trunc: usize) -> Result<Arc<GammaModule<F>>> {
    GammaModule::orbit_sum(field, vec![lambda.clone()], trunc)
}

pub fn pointwise_tensor<F: Field>(
    a: &Arc<GammaModule<F>>,
    b: &Arc<GammaModule<F>>,
) -> Result<Arc<GammaModule<F>>> {
    GammaModule::tensor(a, b)
}

/// Which partitions index the projective building blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum PartitionFamily {
    /// Every partition, including the empty one.
    Young,
    /// Every nonempty partition.
    YoungNonEmpty,
    /// Only `(1, ..., 1)` and `∅`: the representables `Γⁿ`.
    Representable,
}

impl PartitionFamily {
    pub fn partitions(&self, bound: usize) -> Vec<Partition> {
        partitions_up_to(bound)
            .into_iter()
            .filter(|l| match self {
                PartitionFamily::Young => true,
                PartitionFamily::YoungNonEmpty => !l.is_empty(),
                PartitionFamily::Representable => l.is_trivial_group(),
            })
            .collect()
    }
}

/// Orbits of the basis of `F([n])` under the group generated by `gens`,
/// when those act by permuting labels. Orbits are listed by least element.
pub(crate) fn basis_orbits<F: Field>(module: &GammaModule<F>, gens: &[PointedMap]) -> Option<Vec<Vec<usize>>> {
    let n = gens.first().map(PointedMap::source);
    let dim = {
        let n = n?;
        module.dim(n)
    };
    let perms: Vec<Vec<usize>> = gens
        .iter()
        .map(|g| module.basis_permutation(g))
        .collect::<Option<_>>()?;
    let mut parent: Vec<usize> = (0..dim).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for p in &perms {
        for (i, &j) in p.iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..dim {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    Some(groups.into_values().collect())
}

/// Orbits for the Young subgroup of `λ` acting on `F([s(λ)])`, or singleton
/// orbits when the group is trivial.
pub(crate) fn young_orbits<F: Field>(module: &GammaModule<F>, lambda: &Partition) -> Option<Vec<Vec<usize>>> {
    let n = lambda.size();
    let gens = young_generators(lambda);
    if gens.is_empty() {
        return Some((0..module.dim(n)).map(|i| vec![i]).collect());
    }
    basis_orbits(module, &gens)
}

fn young_generator_maps<F: Field>(module: &GammaModule<F>, lambda: &Partition) -> Result<Vec<LinearMap<F::Elem>>> {
    let n = lambda.size();
    let space = module.level(n)?.clone();
    young_generators(lambda)
        .iter()
        .map(|g| {
            Ok(LinearMap {
                domain: space.clone(),
                codomain: space.clone(),
                matrix: (*module.action(g)?).clone(),
            })
        })
        .collect()
}

/// Basis of `F([s(λ)])^{Σ(λ)}`, any module kind.
pub(crate) fn young_invariants<F: Field>(
    module: &GammaModule<F>,
    lambda: &Partition,
) -> Result<Vec<Vec<F::Elem>>> {
    let field = module.field();
    let n = lambda.size();
    let dim = module.level(n)?.dim();
    if let Some(orbits) = young_orbits(module, lambda) {
        return Ok(orbits
            .into_iter()
            .map(|orbit| {
                let mut v = vec![field.zero(); dim];
                for i in orbit {
                    v[i] = field.one();
                }
                v
            })
            .collect());
    }
    if let Some((parent, basis, free)) = module.sub_structure(n) {
        // Fixed vectors of a submodule are the fixed vectors of the parent
        // that lie in the submodule.
        let parent_inv = young_invariants(parent, lambda)?;
        let pdim = parent.dim(n);
        let residuals: Vec<Vec<F::Elem>> = parent_inv
            .iter()
            .map(|p| {
                let mut r = p.clone();
                for (b, &fc) in basis.iter().zip(free) {
                    if !field.is_zero(&p[fc]) {
                        field.axpy(&mut r, &field.neg(&p[fc]), b);
                    }
                }
                r
            })
            .collect();
        let combos = linalg::kernel_basis(field, &Matrix::from_columns(field, pdim, &residuals));
        return Ok(combos
            .into_iter()
            .map(|c| {
                let mut v = vec![field.zero(); pdim];
                for (ck, p) in c.iter().zip(&parent_inv) {
                    if !field.is_zero(ck) {
                        field.axpy(&mut v, ck, p);
                    }
                }
                free.iter().map(|&fc| v[fc].clone()).collect()
            })
            .collect());
    }
    let gens = young_generator_maps(module, lambda)?;
    linalg::invariants(field, module.level(n)?, &gens)
}

/// Basis of the `Σ(λ)`-fixed space of `F([n])`, where `s(λ) = n`.
pub fn module_invariants<F: Field>(
    module: &GammaModule<F>,
    n: usize,
    lambda: &Partition,
) -> Result<Vec<Vec<F::Elem>>> {
    if lambda.size() != n {
        return Err(Error::PartitionMismatch {
            partition: lambda.to_string(),
            size: lambda.size(),
            level: n,
        });
    }
    module.level(n)?;
    young_invariants(module, lambda)
}

/// `Σ(λ)`-coinvariants of `F([s(λ)])`.
pub fn module_coinvariants<F: Field>(
    module: &GammaModule<F>,
    lambda: &Partition,
) -> Result<QuotientPresentation<F::Elem>> {
    let n = lambda.size();
    let gens = young_generator_maps(module, lambda)?;
    linalg::coinvariants(module.field(), module.level(n)?, &gens)
}

/// The natural transformation `⊕_j Γ(λ_j) -> target` sending the class of
/// `f : [s(λ_j)] -> [m]` in summand `j` to `target(f)(x_j)`.
pub fn realize_orbit_sum<F: Field>(
    source: &Arc<GammaModule<F>>,
    target: &Arc<GammaModule<F>>,
    generators: Vec<Vec<F::Elem>>,
) -> Result<NatTransform<F>> {
    let summands = source
        .orbit_summands()
        .ok_or_else(|| Error::InvalidArgument("source is not a sum of Γ(λ)".into()))?;
    if summands.len() != generators.len() {
        return Err(Error::InvalidArgument(format!(
            "{} summands but {} generators",
            summands.len(),
            generators.len()
        )));
    }
    for (l, x) in summands.iter().zip(&generators) {
        if x.len() != target.dim(l.size()) {
            return Err(Error::InvalidArgument(format!(
                "generator for {l} has length {}, expected {}",
                x.len(),
                target.dim(l.size())
            )));
        }
    }
    let generators = Arc::new(generators);
    let (src, tgt) = (Arc::clone(source), Arc::clone(target));
    NatTransform::from_rule(source, target, move |m| {
        let field = tgt.field();
        let count = src.orbit_summands().map_or(0, <[Partition]>::len);
        let columns: Vec<Vec<Vec<F::Elem>>> = (0..count)
            .into_par_iter()
            .map(|j| {
                let table = src.orbit_table(j).expect("orbit sum");
                let x = &generators[j];
                (0..table.dim(m))
                    .map(|i| {
                        let f = PointedMap::new_unchecked(m, table.rep(m, i).to_vec());
                        tgt.apply_unchecked(&f, x)
                    })
                    .collect()
            })
            .collect();
        let flat: Vec<Vec<F::Elem>> = columns.into_iter().flatten().collect();
        Ok(Matrix::from_columns(field, tgt.dim(m), &flat))
    })
}

/// `Hom(Γ(λ), F) ≅ F([s(λ)])^{Σ(λ)}`.
pub struct HomSpace<F: Field> {
    pub lambda: Partition,
    pub basis: Vec<Vec<F::Elem>>,
    source: Arc<GammaModule<F>>,
    target: Arc<GammaModule<F>>,
}

impl<F: Field> HomSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The natural transformation `Γ(λ) -> F` determined by a fixed vector.
    pub fn realize(&self, x: &[F::Elem]) -> Result<NatTransform<F>> {
        let n = self.lambda.size();
        if x.len() != self.target.dim(n) {
            return Err(Error::InvalidArgument(format!(
                "element has length {}, expected {}",
                x.len(),
                self.target.dim(n)
            )));
        }
        for g in young_generators(&self.lambda) {
            if self.target.apply(&g, x)? != x {
                return Err(Error::NotInvariant(self.lambda.to_string()));
            }
        }
        realize_orbit_sum(&self.source, &self.target, vec![x.to_vec()])
    }

    pub fn source(&self) -> &Arc<GammaModule<F>> {
        &self.source
    }
}

pub fn hom_space<F: Field>(lambda: &Partition, target: &Arc<GammaModule<F>>) -> Result<HomSpace<F>> {
    let trunc = target.trunc();
    if lambda.size() > trunc {
        return Err(Error::Truncation {
            level: lambda.size(),
            trunc,
        });
    }
    let source = gamma_lambda(target.field(), lambda, trunc)?;
    let basis = young_invariants(target, lambda)?;
    Ok(HomSpace {
        lambda: lambda.clone(),
        basis,
        source,
        target: Arc::clone(target),
    })
}

/// The map `F(d₀) − F(d₁) + F(d₂) : F([2]) → F([1])`.
pub fn pi0_relation_map<F: Field>(module: &GammaModule<F>) -> Result<LinearMap<F::Elem>> {
    if module.trunc() < 2 {
        return Err(Error::Truncation {
            level: 2,
            trunc: module.trunc(),
        });
    }
    let field = module.field();
    let (d1, d2) = (module.dim(1), module.dim(2));
    let mut m = Matrix::zeros(field, d1, d2);
    let faces = [
        (PointedMap::keep_first(), field.one()),
        (PointedMap::fold(), field.neg(&field.one())),
        (PointedMap::keep_second(), field.one()),
    ];
    for c in 0..d2 {
        for (f, sign) in &faces {
            for (r, x) in module.column(f, c)? {
                let cur = m.get(r, c).clone();
                m.set(r, c, field.add(&cur, &field.mul(sign, &x)));
            }
        }
    }
    LinearMap::new(module.level(2)?.clone(), module.level(1)?.clone(), m)
}

/// `π₀(F) = Coker(d₀ − d₁ + d₂ : F([2]) → F([1]))`.
pub fn pi0<F: Field>(module: &GammaModule<F>) -> Result<QuotientPresentation<F::Elem>> {
    let rel = pi0_relation_map(module)?;
    Ok(linalg::cokernel(module.field(), &rel))
}

/// Outcome of the 𝒴-epimorphism test.
#[derive(Clone, Debug)]
pub struct YEpiCheck<E> {
    pub holds: bool,
    /// First partition whose invariants are not hit, with an unhit invariant.
    pub witness: Option<(Partition, Vec<E>)>,
    pub checked: Vec<Partition>,
}

/// Images under `η` of a spanning set of `source([n])^{Σ(λ)}`.
pub(crate) fn invariant_images<F: Field>(
    eta: &NatTransform<F>,
    lambda: &Partition,
) -> Result<Vec<Vec<F::Elem>>> {
    let field = eta.source().field();
    let n = lambda.size();
    let comp = eta.component(n)?;
    if let Some(orbits) = young_orbits(eta.source(), lambda) {
        return Ok(orbits
            .iter()
            .map(|orbit| {
                let mut v = vec![field.zero(); comp.rows()];
                for &c in orbit {
                    for (r, out) in v.iter_mut().enumerate() {
                        let x = comp.get(r, c);
                        if !field.is_zero(x) {
                            field.add_assign(out, x);
                        }
                    }
                }
                v
            })
            .collect());
    }
    Ok(young_invariants(eta.source(), lambda)?
        .iter()
        .map(|v| comp.mul_vec(field, v))
        .collect())
}

/// Whether `η` is surjective on `Σ(λ)`-invariants at level `s(λ)` for every
/// partition of the family with `s(λ) <= bound`.
pub fn is_y_epi_in<F: Field>(
    eta: &NatTransform<F>,
    bound: usize,
    family: PartitionFamily,
) -> Result<YEpiCheck<F::Elem>> {
    let field = eta.source().field();
    if bound > eta.source().trunc() {
        return Err(Error::Truncation {
            level: bound,
            trunc: eta.source().trunc(),
        });
    }
    let mut checked = Vec::new();
    for lambda in family.partitions(bound) {
        let n = lambda.size();
        let wanted = young_invariants(eta.target(), &lambda)?;
        checked.push(lambda.clone());
        if wanted.is_empty() {
            continue;
        }
        let mut ech = Echelon::new(field, eta.target().dim(n));
        for v in invariant_images(eta, &lambda)? {
            ech.insert(v);
            if ech.rank() == wanted.len() {
                break;
            }
        }
        if let Some(miss) = wanted.into_iter().find(|w| !ech.contains(w)) {
            return Ok(YEpiCheck {
                holds: false,
                witness: Some((lambda, miss)),
                checked,
            });
        }
    }
    Ok(YEpiCheck {
        holds: true,
        witness: None,
        checked,
    })
}

pub fn is_y_epi<F: Field>(eta: &NatTransform<F>, bound: usize) -> Result<YEpiCheck<F::Elem>> {
    is_y_epi_in(eta, bound, PartitionFamily::Young)
}

/// Level-wise kernel of `η` with its inclusion.
pub fn kernel_module<F: Field>(eta: &NatTransform<F>) -> Result<(Arc<GammaModule<F>>, NatTransform<F>)> {
    let field = eta.source().field();
    let trunc = eta.source().trunc();
    let mut levels = Vec::with_capacity(trunc + 1);
    for n in 0..=trunc {
        let rr = linalg::rref(field, &*eta.component(n)?);
        let basis = linalg::kernel_from_rref(field, &rr);
        let free = linalg::free_columns(&rr);
        levels.push((basis, free));
    }
    let name = format!("Ker({:?})", eta);
    let kernel = GammaModule::submodule_reduced(eta.source(), levels, name);
    let inclusion = inclusion_of(&kernel)?;
    Ok((kernel, inclusion))
}

/// Inclusion of a submodule into its parent.
pub fn inclusion_of<F: Field>(sub: &Arc<GammaModule<F>>) -> Result<NatTransform<F>> {
    let (parent, _, _) = sub
        .sub_structure(0)
        .ok_or_else(|| Error::InvalidArgument("not a submodule".into()))?;
    let parent = Arc::clone(parent);
    let s = Arc::clone(sub);
    NatTransform::from_rule(sub, &parent.clone(), move |n| {
        let (p, basis, _) = s.sub_structure(n).expect("submodule");
        Ok(Matrix::from_columns(s.field(), p.dim(n), basis))
    })
}

/// Corestriction of `η : Z -> P` to a submodule `K ⊂ P` containing its image.
pub fn corestrict<F: Field>(eta: &NatTransform<F>, sub: &Arc<GammaModule<F>>) -> Result<NatTransform<F>> {
    match sub.sub_structure(0) {
        Some((parent, _, _)) if Arc::ptr_eq(parent, eta.target()) => {}
        _ => {
            return Err(Error::InvalidArgument(
                "corestriction target is not a submodule of the codomain".into(),
            ))
        }
    }
    let (e, s) = (eta.clone(), Arc::clone(sub));
    NatTransform::from_rule(eta.source(), sub, move |n| {
        let (_, _, free) = s.sub_structure(n).expect("submodule");
        let comp = e.component(n)?;
        Ok(comp.select_rows(free))
    })
}

/// How to sample composable pairs in [`check_functoriality`].
#[derive(Clone, Copy, Debug)]
pub enum Trials {
    /// Every composable pair with all levels `<= max_level`.
    Exhaustive { max_level: usize },
    /// `count` random pairs at levels `<= N`, reproducible from `seed`.
    Random { count: usize, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct FunctorialityCheck {
    pub holds: bool,
    /// `(f, g)` with `F(g ∘ f) ≠ F(g) F(f)`; `f == g` flags an identity failure.
    pub counterexample: Option<(PointedMap, PointedMap)>,
    pub pairs_checked: usize,
}

fn dense_column<F: Field>(module: &GammaModule<F>, f: &PointedMap, c: usize) -> Result<Vec<F::Elem>> {
    let field = module.field();
    let mut v = vec![field.zero(); module.dim(f.target())];
    for (r, x) in module.column(f, c)? {
        field.add_assign(&mut v[r], &x);
    }
    Ok(v)
}

fn pair_commutes<F: Field>(module: &GammaModule<F>, f: &PointedMap, g: &PointedMap) -> Result<bool> {
    let field = module.field();
    let gf = compose_maps(f, g)?;
    for c in 0..module.dim(f.source()) {
        let lhs = dense_column(module, &gf, c)?;
        let mut rhs = vec![field.zero(); module.dim(g.target())];
        for (i, x) in module.column(f, c)? {
            for (r, y) in module.column(g, i)? {
                field.add_assign(&mut rhs[r], &field.mul(&x, &y));
            }
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

fn identity_holds<F: Field>(module: &GammaModule<F>, n: usize) -> Result<bool> {
    let field = module.field();
    let id = PointedMap::identity(n);
    for c in 0..module.dim(n) {
        let col = dense_column(module, &id, c)?;
        let ok = col
            .iter()
            .enumerate()
            .all(|(r, x)| if r == c { field.is_one(x) } else { field.is_zero(x) });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `F(id) = id` and `F(g ∘ f) = F(g) F(f)` on composable pairs.
pub fn check_functoriality<F: Field>(module: &GammaModule<F>, trials: Trials) -> Result<FunctorialityCheck> {
    let trunc = module.trunc();
    for n in 0..=trunc {
        if !identity_holds(module, n)? {
            let id = PointedMap::identity(n);
            return Ok(FunctorialityCheck {
                holds: false,
                counterexample: Some((id.clone(), id)),
                pairs_checked: 0,
            });
        }
    }
    let mut pairs: Vec<(PointedMap, PointedMap)> = Vec::new();
    match trials {
        Trials::Exhaustive { max_level } => {
            let top = max_level.min(trunc);
            for a in 0..=top {
                for b in 0..=top {
                    let fs = enumerate_maps(a, b);
                    for c in 0..=top {
                        let gs = enumerate_maps(b, c);
                        for f in &fs {
                            for g in &gs {
                                pairs.push((f.clone(), g.clone()));
                            }
                        }
                    }
                }
            }
        }
        Trials::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let random_map = |n: usize, m: usize, rng: &mut ChaCha8Rng| {
                let images = (0..n).map(|_| rng.gen_range(0..=m) as u8).collect();
                PointedMap::new_unchecked(m, images)
            };
            for _ in 0..count {
                let (a, b, c) = (
                    rng.gen_range(0..=trunc),
                    rng.gen_range(0..=trunc),
                    rng.gen_range(0..=trunc),
                );
                let f = random_map(a, b, &mut rng);
                let g = random_map(b, c, &mut rng);
                pairs.push((f, g));
            }
        }
    }
    let failures: Vec<Option<(PointedMap, PointedMap)>> = pairs
        .par_iter()
        .map(|(f, g)| match pair_commutes(module, f, g) {
            Ok(true) => None,
            _ => Some((f.clone(), g.clone())),
        })
        .collect();
    let counterexample = failures.into_iter().flatten().next();
    Ok(FunctorialityCheck {
        holds: counterexample.is_none(),
        counterexample,
        pairs_checked: pairs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_lam, corpus_algebra, lam_of_algebra_surjection, FiniteModule, DEFAULT_LEVEL_CAP};
    use crate::algebra::lam::binomial;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::{prop_assert_eq, proptest, ProptestConfig};

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
    fn representable_dims() {
        let q = Rationals;
        assert_eq!(representable(&q, 0, 3).unwrap().dims(), vec![1, 1, 1, 1]);
        assert_eq!(representable(&q, 1, 3).unwrap().dims(), vec![1, 2, 3, 4]);
        assert_eq!(representable(&q, 2, 2).unwrap().dim(1), 4);
        assert!(matches!(representable(&q, 3, 2), Err(Error::Truncation { .. })));
    }

    #[test]
    fn gamma_lambda_dims() {
        let q = Rationals;
        let g11 = gamma_lambda(&q, &Partition::ones(2), 3).unwrap();
        assert_eq!(g11.dims(), vec![1, 4, 9, 16]);
        let g2 = gamma_lambda(&q, &Partition::single(2), 2).unwrap();
        assert_eq!(g2.dim(1), 3);
        assert_eq!(g2.dim(2), 6);
        for lambda in partitions_up_to(4) {
            let g = gamma_lambda(&q, &lambda, 4).unwrap();
            for m in 0..=4 {
                let want: u128 = lambda
                    .parts()
                    .iter()
                    .map(|&p| binomial((m + p) as u64, p as u64))
                    .product();
                assert_eq!(g.dim(m) as u128, want, "{lambda} at {m}");
            }
        }
    }

    #[test]
    fn gamma_lambda_agrees_with_coinvariant_quotient() {
        // Γ(λ)([m]) against the explicit coinvariant quotient of Γ^{s}([m]).
        let q = Rationals;
        for lambda in partitions_up_to(3) {
            let gs = representable(&q, lambda.size(), 3).unwrap();
            for m in 0..=3 {
                let gens: Vec<LinearMap<_>> = young_generators(&lambda)
                    .iter()
                    .map(|g| {
                        let sp = gs.level(m).unwrap().clone();
                        // precomposition by g on maps [s] -> [m]
                        let cols: Vec<Vec<_>> = (0..gs.dim(m))
                            .map(|c| {
                                let (_, rep) = gs.orbit_label(m, c).unwrap();
                                let f = PointedMap::new_unchecked(m, rep.to_vec());
                                let fg = compose_maps(g, &f).unwrap();
                                let mut v = vec![q.zero(); gs.dim(m)];
                                v[gs.orbit_table(0).unwrap().lookup(m, fg.images()).unwrap()] = q.one();
                                v
                            })
                            .collect();
                        LinearMap {
                            domain: sp.clone(),
                            codomain: sp,
                            matrix: Matrix::from_columns(&q, gs.dim(m), &cols),
                        }
                    })
                    .collect();
                let co = linalg::coinvariants(&q, gs.level(m).unwrap(), &gens).unwrap();
                let g = gamma_lambda(&q, &lambda, 3).unwrap();
                assert_eq!(co.dim(), g.dim(m), "{lambda} at {m}");
            }
        }
    }

    #[test]
    fn projectives_are_functorial() {
        let f2 = PrimeField::new(2).unwrap();
        for lambda in partitions_up_to(3) {
            let g = gamma_lambda(&f2, &lambda, 3).unwrap();
            let c = check_functoriality(&g, Trials::Exhaustive { max_level: 3 }).unwrap();
            assert!(c.holds, "{lambda}");
        }
        let g = representable(&f2, 2, 4).unwrap();
        assert!(check_functoriality(&g, Trials::Random { count: 300, seed: 7 }).unwrap().holds);
    }

    #[test]
    fn corrupted_action_is_caught() {
        let q = Rationals;
        let g1 = representable(&q, 1, 2).unwrap();
        let bad = GammaModule::with_overridden_action(&g1, PointedMap::fold(), Matrix::zeros(&q, 2, 3)).unwrap();
        let c = check_functoriality(&bad, Trials::Exhaustive { max_level: 2 }).unwrap();
        assert!(!c.holds);
        let (f, g) = c.counterexample.unwrap();
        assert!(f == PointedMap::fold() || g == PointedMap::fold() || compose_maps(&f, &g).unwrap() == PointedMap::fold());
    }

    #[test]
    fn tensor_dims() {
        let q = Rationals;
        let g1 = representable(&q, 1, 2).unwrap();
        let g0 = representable(&q, 0, 2).unwrap();
        assert_eq!(pointwise_tensor(&g1, &g1).unwrap().dim(1), 4);
        assert_eq!(pointwise_tensor(&g1, &g0).unwrap().dims(), g1.dims());
        let l = lam(&q, "K[x]/(x^2)", true, 2);
        assert_eq!(pointwise_tensor(&l, &l).unwrap().dim(1), 16);
        let g13 = representable(&q, 1, 3).unwrap();
        assert!(matches!(pointwise_tensor(&g1, &g13), Err(Error::TruncationMismatch(2, 3))));
        let t = pointwise_tensor(&g1, &g1).unwrap();
        assert!(check_functoriality(&t, Trials::Exhaustive { max_level: 2 }).unwrap().holds);
    }

    #[test]
    fn invariants_examples() {
        let q = Rationals;
        let g1 = representable(&q, 1, 2).unwrap();
        assert_eq!(module_invariants(&g1, 2, &Partition::single(2)).unwrap().len(), 2);
        assert_eq!(module_invariants(&g1, 2, &Partition::ones(2)).unwrap().len(), 3);
        assert!(matches!(
            module_invariants(&g1, 1, &Partition::single(2)),
            Err(Error::PartitionMismatch { .. })
        ));
        let l = lam(&q, "K[x]/(x^2)", true, 2);
        assert_eq!(module_invariants(&l, 2, &Partition::single(2)).unwrap().len(), 6);
    }

    #[test]
    fn invariants_equal_coinvariants_over_q() {
        let q = Rationals;
        let l = lam(&q, "K[x]/(x^3)", false, 4);
        let g = representable(&q, 2, 4).unwrap();
        for lambda in partitions_up_to(4) {
            let n = lambda.size();
            for m in [&l, &g] {
                let inv = module_invariants(m, n, &lambda).unwrap().len();
                let co = module_coinvariants(m, &lambda).unwrap().dim();
                assert_eq!(inv, co, "{lambda}");
            }
        }
    }

    #[test]
    fn hom_space_examples() {
        let q = Rationals;
        let l = lam(&q, "K[x]/(x^2)", true, 3);
        assert_eq!(hom_space(&Partition::single(1), &l).unwrap().dim(), l.dim(1));
        assert_eq!(hom_space(&Partition::empty(), &l).unwrap().dim(), l.dim(0));
        let h = hom_space(&Partition::single(2), &l).unwrap();
        assert_eq!(h.dim(), 6);
        for x in &h.basis {
            let eta = h.realize(x).unwrap();
            assert_eq!(eta.check_naturality(3).unwrap(), None);
        }
        let mut bad = vec![q.zero(); l.dim(2)];
        bad[1] = q.one();
        assert!(matches!(h.realize(&bad), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn yoneda_identity_in_hom() {
        // Γ(2) -> Γ(2) realized by the class of the identity is the identity.
        let q = Rationals;
        let g2 = gamma_lambda(&q, &Partition::single(2), 3).unwrap();
        let h = hom_space(&Partition::single(2), &g2).unwrap();
        let id_idx = g2.orbit_table(0).unwrap().lookup(2, &[1, 2]).unwrap();
        let mut x = vec![q.zero(); g2.dim(2)];
        x[id_idx] = q.one();
        let eta = h.realize(&x).unwrap();
        for n in 0..=3 {
            assert_eq!(*eta.component(n).unwrap(), Matrix::identity(&q, g2.dim(n)));
        }
    }

    #[test]
    fn pi0_examples() {
        let q = Rationals;
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(pi0(&*representable(&q, 0, 2).unwrap()).unwrap().dim(), 0);
        assert_eq!(pi0(&*representable(&q, 1, 2).unwrap()).unwrap().dim(), 1);
        assert_eq!(pi0(&*representable(&q, 2, 2).unwrap()).unwrap().dim(), 2);
        assert_eq!(pi0(&*lam(&q, "K[x]/(x^2)", true, 2)).unwrap().dim(), 1);
        assert_eq!(pi0(&*lam(&f2, "K[x]/(x^2)", true, 2)).unwrap().dim(), 2);
        assert!(matches!(pi0(&*representable(&q, 1, 1).unwrap()), Err(Error::Truncation { .. })));
        // the projection kills the relation image
        let l = lam(&q, "K[x,y]/(x^2,xy,y^2)", true, 2);
        let rel = pi0_relation_map(&l).unwrap();
        let p = pi0(&l).unwrap();
        assert!(p.projection.mul(&q, &rel.matrix).is_zero(&q));
    }

    #[test]
    fn pi0_of_gamma_lambda_counts_parts() {
        let q = Rationals;
        for lambda in partitions_up_to(4) {
            let g = gamma_lambda(&q, &lambda, 4).unwrap();
            assert_eq!(pi0(&g).unwrap().dim(), lambda.len(), "{lambda}");
        }
    }

    #[test]
    fn y_epi_examples() {
        let q = Rationals;
        let l = lam(&q, "K[x]/(x^2)", false, 3);
        let id = NatTransform::identity(&l);
        assert!(is_y_epi(&id, 3).unwrap().holds);
        let zero = NatTransform::zero(&l, &l).unwrap();
        let c = is_y_epi(&zero, 3).unwrap();
        assert!(!c.holds);
        assert_eq!(c.witness.unwrap().0, Partition::empty());
        let c = is_y_epi_in(&zero, 3, PartitionFamily::YoungNonEmpty).unwrap();
        assert_eq!(c.witness.unwrap().0, Partition::single(1));
    }

    #[test]
    fn algebra_surjection_is_y_epi_and_kernel() {
        let q = Rationals;
        let (b, _) = corpus_algebra(&q, "K[x]/(x^3)").unwrap();
        let (a, _) = corpus_algebra(&q, "K[x]/(x^2)").unwrap();
        // 1 ↦ 1, x ↦ x, x² ↦ 0
        let mut phi = Matrix::zeros(&q, 2, 3);
        phi.set(0, 0, q.one());
        phi.set(1, 1, q.one());
        for module in [FiniteModule::residue(&a).unwrap(), FiniteModule::regular(&a)] {
            let eta = lam_of_algebra_surjection(&b, &phi, &Arc::new(module), 3).unwrap();
            assert!(is_y_epi(&eta, 3).unwrap().holds);
            assert_eq!(eta.check_naturality(2).unwrap(), None);
        }
        let m = Arc::new(FiniteModule::residue(&a).unwrap());
        let eta = lam_of_algebra_surjection(&b, &phi, &m, 3).unwrap();
        let (k, inc) = kernel_module(&eta).unwrap();
        assert_eq!(k.dim(1), 1);
        assert_eq!(k.dim(0), 0);
        assert!(check_functoriality(&k, Trials::Exhaustive { max_level: 2 }).unwrap().holds);
        assert_eq!(inc.check_naturality(2).unwrap(), None);
    }

    #[test]
    fn kernel_extremes() {
        let q = Rationals;
        let g = representable(&q, 1, 2).unwrap();
        let (k, _) = kernel_module(&NatTransform::identity(&g)).unwrap();
        assert_eq!(k.dims(), vec![0, 0, 0]);
        let (k, _) = kernel_module(&NatTransform::zero(&g, &g).unwrap()).unwrap();
        assert_eq!(k.dims(), g.dims());
    }

    #[test]
    fn composition_of_y_epis() {
        let q = Rationals;
        let l = lam(&q, "K[x]/(x^2)", true, 3);
        let proj = |b: usize| {
            let parts = PartitionFamily::Young.partitions(b);
            let gens: Vec<Vec<_>> = parts
                .iter()
                .flat_map(|lam| young_invariants(&l, lam).unwrap())
                .collect();
            let summands: Vec<Partition> = parts
                .iter()
                .flat_map(|lam| vec![lam.clone(); young_invariants(&l, lam).unwrap().len()])
                .collect();
            let src = GammaModule::orbit_sum(&q, summands, 3).unwrap();
            realize_orbit_sum(&src, &l, gens).unwrap()
        };
        let eta = proj(3);
        assert!(is_y_epi(&eta, 3).unwrap().holds);
        let theta = NatTransform::identity(&l);
        assert!(is_y_epi(&eta.then(&theta).unwrap(), 3).unwrap().holds);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn realize_is_natural(seed in 0u64..1000, f_src in 0usize..3, f_tgt in 0usize..3) {
            let f3 = PrimeField::new(3).unwrap();
            let l = lam(&f3, "K[x]/(x^2)", true, 3);
            let h = hom_space(&Partition::single(2), &l).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut x = vec![f3.zero(); l.dim(2)];
            for b in &h.basis {
                let c = f3.from_i64(rng.gen_range(0..3));
                f3.axpy(&mut x, &c, b);
            }
            let eta = h.realize(&x).unwrap();
            let images = (0..f_src).map(|_| rng.gen_range(0..=f_tgt) as u8).collect();
            let f = PointedMap::new(f_tgt, images).unwrap();
            let src = eta.source();
            for c in 0..src.dim(f_src) {
                let lhs = eta.component(f_tgt).unwrap().mul_vec(&f3, &src.apply(&f, &{
                    let mut e = vec![f3.zero(); src.dim(f_src)];
                    e[c] = f3.one();
                    e
                }).unwrap());
                let rhs = l.apply(&f, &eta.component(f_src).unwrap().column(c)).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
