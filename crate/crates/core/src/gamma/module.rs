//! Truncated Γ-modules and natural transformations between them.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gamma::maps::{enumerate_maps, Partition, PointedMap};
use crate::linalg::{Label, LabeledSpace, Matrix};

/// A sparse column: `(row, coefficient)` pairs with distinct rows.
pub type SparseColumn<E> = Vec<(usize, E)>;

/// The action of pointed maps on a family of level spaces, for module kinds
/// defined outside this module.
pub trait ActionRule<F: Field>: Send + Sync {
    fn level(&self, n: usize) -> LabeledSpace;
    /// Image of basis vector `c` of level `f.source()` under `f`.
    fn column(&self, f: &PointedMap, c: usize) -> SparseColumn<F::Elem>;
    /// True when automorphisms of `[n]` act by permuting basis labels.
    fn permutes_basis(&self) -> bool {
        false
    }
    fn describe(&self) -> String;
}

/// Canonical orbit representatives of maps `[s(λ)] -> [m]` under
/// precomposition by `Σ(λ)`, for every `m <= N`.
#[derive(Debug)]
pub struct OrbitTable {
    partition: Partition,
    labels: Vec<Vec<Vec<u8>>>,
    index: Vec<HashMap<Vec<u8>, usize>>,
}

impl OrbitTable {
    fn build(partition: &Partition, trunc: usize) -> Self {
        let s = partition.size();
        let mut labels = Vec::with_capacity(trunc + 1);
        let mut index = Vec::with_capacity(trunc + 1);
        for m in 0..=trunc {
            let reps: Vec<Vec<u8>> = enumerate_maps(s, m)
                .into_iter()
                .map(|f| f.images().to_vec())
                .filter(|im| partition.is_canonical(im))
                .collect();
            let idx = reps.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
            labels.push(reps);
            index.push(idx);
        }
        OrbitTable {
            partition: partition.clone(),
            labels,
            index,
        }
    }

    /// Shared table; tables are immutable and memoized per `(λ, N)`.
    pub fn get(partition: &Partition, trunc: usize) -> Arc<OrbitTable> {
        static TABLES: OnceLock<Mutex<HashMap<(Partition, usize), Arc<OrbitTable>>>> =
            OnceLock::new();
        let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = tables.lock().expect("orbit table lock").get(&(partition.clone(), trunc)) {
            return Arc::clone(t);
        }
        let built = Arc::new(OrbitTable::build(partition, trunc));
        let mut guard = tables.lock().expect("orbit table lock");
        Arc::clone(
            guard
                .entry((partition.clone(), trunc))
                .or_insert(built),
        )
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn dim(&self, m: usize) -> usize {
        self.labels[m].len()
    }

    pub fn rep(&self, m: usize, i: usize) -> &[u8] {
        &self.labels[m][i]
    }

    /// Index of the orbit of `f ∘ rep` at level `f.target()`.
    pub fn push_forward(&self, f: &PointedMap, i: usize) -> usize {
        let rep = &self.labels[f.source()][i];
        let mut im: Vec<u8> = rep.iter().map(|&v| f.eval(v as usize) as u8).collect();
        self.partition.canonicalize(&mut im);
        self.index[f.target()][&im]
    }

    pub fn lookup(&self, m: usize, images: &[u8]) -> Option<usize> {
        let mut im = images.to_vec();
        self.partition.canonicalize(&mut im);
        self.index[m].get(&im).copied()
    }
}

/// A direct sum `⊕_j Γ(λ_j)`.
struct OrbitSum {
    summands: Vec<Partition>,
    tables: Vec<Arc<OrbitTable>>,
    /// `offsets[m][j]` is the first basis index of summand `j` at level `m`.
    offsets: Vec<Vec<usize>>,
}

impl OrbitSum {
    fn locate(&self, m: usize, c: usize) -> (usize, usize) {
        let offs = &self.offsets[m];
        let j = offs.partition_point(|&o| o <= c) - 1;
        (j, c - offs[j])
    }
}

struct SubLevel<E> {
    /// Basis vectors in parent coordinates; vector `i` has a 1 in
    /// coordinate `free[i]` and zeros in every other free coordinate.
    basis: Vec<Vec<E>>,
    free: Vec<usize>,
}

enum Kind<F: Field> {
    Orbits(OrbitSum),
    Tensor(Arc<GammaModule<F>>, Arc<GammaModule<F>>),
    Sum(Vec<Arc<GammaModule<F>>>),
    Sub {
        parent: Arc<GammaModule<F>>,
        levels: Vec<SubLevel<F::Elem>>,
    },
    Overridden {
        base: Arc<GammaModule<F>>,
        overrides: HashMap<PointedMap, Matrix<F::Elem>>,
    },
    Rule(Arc<dyn ActionRule<F>>),
}

/// A Γ-module truncated at level `N`: spaces `F([0..=N])` and the action of
/// every pointed map between them.
///
/// Actions are computed from the module's generating rule; dense action
/// matrices are memoized on first request.
pub struct GammaModule<F: Field> {
    field: F,
    trunc: usize,
    name: String,
    levels: Vec<LabeledSpace>,
    kind: Kind<F>,
    cache: RwLock<HashMap<PointedMap, Arc<Matrix<F::Elem>>>>,
}

impl<F: Field> fmt::Debug for GammaModule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<usize> = self.levels.iter().map(LabeledSpace::dim).collect();
        write!(f, "GammaModule({}, N={}, dims={:?})", self.name, self.trunc, dims)
    }
}

impl<F: Field> GammaModule<F> {
    fn build(field: &F, trunc: usize, name: String, levels: Vec<LabeledSpace>, kind: Kind<F>) -> Arc<Self> {
        Arc::new(GammaModule {
            field: field.clone(),
            trunc,
            name,
            levels,
            kind,
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// `⊕_j Γ(λ_j)` truncated at `N`; requires `s(λ_j) <= N`.
    pub fn orbit_sum(field: &F, summands: Vec<Partition>, trunc: usize) -> Result<Arc<Self>> {
        if let Some(big) = summands.iter().find(|l| l.size() > trunc) {
            return Err(Error::Truncation {
                level: big.size(),
                trunc,
            });
        }
        let tables: Vec<Arc<OrbitTable>> = summands
            .iter()
            .map(|l| OrbitTable::get(l, trunc))
            .collect();
        let single = summands.len() == 1;
        let mut offsets = Vec::with_capacity(trunc + 1);
        let mut levels = Vec::with_capacity(trunc + 1);
        for m in 0..=trunc {
            let mut offs = Vec::with_capacity(summands.len() + 1);
            let mut labels = Vec::new();
            let mut total = 0;
            for (j, t) in tables.iter().enumerate() {
                offs.push(total);
                total += t.dim(m);
                for rep in &t.labels[m] {
                    let l = Label::Map(rep.clone());
                    labels.push(if single { l } else { Label::Summand(j as u32, Box::new(l)) });
                }
            }
            offs.push(total);
            offsets.push(offs);
            levels.push(LabeledSpace::new(labels));
        }
        let name = if single {
            format!("Γ{}", summands[0])
        } else {
            format!("⊕Γ[{} summands]", summands.len())
        };
        Ok(Self::build(
            field,
            trunc,
            name,
            levels,
            Kind::Orbits(OrbitSum {
                summands,
                tables,
                offsets,
            }),
        ))
    }

    pub fn from_rule(field: &F, trunc: usize, rule: Arc<dyn ActionRule<F>>) -> Arc<Self> {
        let levels = (0..=trunc).map(|n| rule.level(n)).collect();
        let name = rule.describe();
        Self::build(field, trunc, name, levels, Kind::Rule(rule))
    }

    /// Pointwise tensor product `(F ⊗ T)([n]) = F([n]) ⊗ T([n])`.
    pub fn tensor(a: &Arc<Self>, b: &Arc<Self>) -> Result<Arc<Self>> {
        if a.trunc != b.trunc {
            return Err(Error::TruncationMismatch(a.trunc, b.trunc));
        }
        let levels = (0..=a.trunc)
            .map(|n| {
                let mut labels = Vec::with_capacity(a.dim(n) * b.dim(n));
                for la in a.levels[n].labels() {
                    for lb in b.levels[n].labels() {
                        labels.push(Label::Pair(Box::new(la.clone()), Box::new(lb.clone())));
                    }
                }
                LabeledSpace::new(labels)
            })
            .collect();
        Ok(Self::build(
            &a.field,
            a.trunc,
            format!("({} ⊗ {})", a.name, b.name),
            levels,
            Kind::Tensor(Arc::clone(a), Arc::clone(b)),
        ))
    }

    /// Direct sum; the empty sum is the zero module.
    pub fn direct_sum(field: &F, trunc: usize, parts: Vec<Arc<Self>>) -> Result<Arc<Self>> {
        if let Some(p) = parts.iter().find(|p| p.trunc != trunc) {
            return Err(Error::TruncationMismatch(p.trunc, trunc));
        }
        let levels = (0..=trunc)
            .map(|n| {
                let mut labels = Vec::new();
                for (j, p) in parts.iter().enumerate() {
                    for l in p.levels[n].labels() {
                        labels.push(Label::Summand(j as u32, Box::new(l.clone())));
                    }
                }
                LabeledSpace::new(labels)
            })
            .collect();
        let name = if parts.is_empty() {
            "0".to_string()
        } else {
            parts.iter().map(|p| p.name.clone()).collect::<Vec<_>>().join(" ⊕ ")
        };
        Ok(Self::build(field, trunc, name, levels, Kind::Sum(parts)))
    }

    pub fn zero(field: &F, trunc: usize) -> Arc<Self> {
        Self::direct_sum(field, trunc, Vec::new()).expect("empty sum has no truncation conflicts")
    }

    /// The subfunctor spanned level-wise by the given parent vectors. The
    /// caller guarantees the spans are closed under the action.
    pub fn submodule(parent: &Arc<Self>, spans: Vec<Vec<Vec<F::Elem>>>, name: String) -> Result<Arc<Self>> {
        let field = &parent.field;
        if spans.len() != parent.trunc + 1 {
            return Err(Error::InvalidArgument(format!(
                "submodule needs {} levels, got {}",
                parent.trunc + 1,
                spans.len()
            )));
        }
        let mut levels = Vec::with_capacity(spans.len());
        let mut labels = Vec::with_capacity(spans.len());
        for (n, span) in spans.into_iter().enumerate() {
            let dim = parent.dim(n);
            let m = Matrix::from_rows(dim, span);
            let rr = crate::linalg::rref(field, &m);
            let rank = rr.rank();
            let basis: Vec<Vec<F::Elem>> = rr.reduced.into_rows().into_iter().take(rank).collect();
            labels.push(LabeledSpace::new(
                rr.pivots.iter().map(|&p| parent.levels[n].label(p).clone()).collect(),
            ));
            levels.push(SubLevel {
                basis,
                free: rr.pivots,
            });
        }
        Ok(Self::build(
            field,
            parent.trunc,
            name,
            labels,
            Kind::Sub {
                parent: Arc::clone(parent),
                levels,
            },
        ))
    }

    /// Submodule from kernel vectors already in reduced form (`basis[i]` has
    /// a 1 at `free[i]` and zeros at the other free coordinates).
    pub(crate) fn submodule_reduced(
        parent: &Arc<Self>,
        levels: Vec<(Vec<Vec<F::Elem>>, Vec<usize>)>,
        name: String,
    ) -> Arc<Self> {
        let labels = levels
            .iter()
            .enumerate()
            .map(|(n, (_, free))| {
                LabeledSpace::new(free.iter().map(|&p| parent.levels[n].label(p).clone()).collect())
            })
            .collect();
        let levels = levels
            .into_iter()
            .map(|(basis, free)| SubLevel { basis, free })
            .collect();
        Self::build(
            &parent.field,
            parent.trunc,
            name,
            labels,
            Kind::Sub {
                parent: Arc::clone(parent),
                levels,
            },
        )
    }

    /// A copy of `base` whose action on `f` is replaced by `matrix`. Used to
    /// build non-functorial negative controls.
    pub fn with_overridden_action(base: &Arc<Self>, f: PointedMap, matrix: Matrix<F::Elem>) -> Result<Arc<Self>> {
        base.check_map(&f)?;
        if matrix.shape() != (base.dim(f.target()), base.dim(f.source())) {
            return Err(Error::MalformedAction(format!(
                "override for {f:?} has shape {:?}",
                matrix.shape()
            )));
        }
        let mut overrides = HashMap::new();
        overrides.insert(f, matrix);
        Ok(Self::build(
            &base.field,
            base.trunc,
            format!("{}*", base.name),
            base.levels.clone(),
            Kind::Overridden {
                base: Arc::clone(base),
                overrides,
            },
        ))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn level(&self, n: usize) -> Result<&LabeledSpace> {
        self.levels.get(n).ok_or(Error::Truncation {
            level: n,
            trunc: self.trunc,
        })
    }

    /// Dimension of `F([n])`; zero above the truncation.
    pub fn dim(&self, n: usize) -> usize {
        self.levels.get(n).map_or(0, LabeledSpace::dim)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(LabeledSpace::dim).collect()
    }

    /// Summand partitions when the module is a sum of `Γ(λ)`s.
    pub fn orbit_summands(&self) -> Option<&[Partition]> {
        match &self.kind {
            Kind::Orbits(o) => Some(&o.summands),
            _ => None,
        }
    }

    /// For a sum of `Γ(λ)`s: summand index and orbit representative of basis
    /// element `c` at level `m`.
    pub fn orbit_label(&self, m: usize, c: usize) -> Option<(usize, &[u8])> {
        match &self.kind {
            Kind::Orbits(o) => {
                let (j, local) = o.locate(m, c);
                Some((j, o.tables[j].rep(m, local)))
            }
            _ => None,
        }
    }

    /// First basis index of summand `j` at level `m` (sums of `Γ(λ)` only).
    pub fn summand_offset(&self, m: usize, j: usize) -> Option<usize> {
        match &self.kind {
            Kind::Orbits(o) => Some(o.offsets[m][j]),
            _ => None,
        }
    }

    pub fn orbit_table(&self, j: usize) -> Option<&Arc<OrbitTable>> {
        match &self.kind {
            Kind::Orbits(o) => o.tables.get(j),
            _ => None,
        }
    }

    /// Parent module and the free coordinates at level `n`, for submodules.
    pub fn sub_structure(&self, n: usize) -> Option<(&Arc<GammaModule<F>>, &[Vec<F::Elem>], &[usize])> {
        match &self.kind {
            Kind::Sub { parent, levels } => {
                let l = &levels[n];
                Some((parent, &l.basis, &l.free))
            }
            _ => None,
        }
    }

    pub fn permutes_basis(&self) -> bool {
        match &self.kind {
            Kind::Orbits(_) => true,
            Kind::Tensor(a, b) => a.permutes_basis() && b.permutes_basis(),
            Kind::Sum(parts) => parts.iter().all(|p| p.permutes_basis()),
            Kind::Rule(r) => r.permutes_basis(),
            Kind::Sub { .. } | Kind::Overridden { .. } => false,
        }
    }

    pub(crate) fn check_map(&self, f: &PointedMap) -> Result<()> {
        let top = f.source().max(f.target());
        if top > self.trunc {
            return Err(Error::Truncation {
                level: top,
                trunc: self.trunc,
            });
        }
        Ok(())
    }

    /// Image of basis vector `c` under `f`, as a sparse column.
    pub fn column(&self, f: &PointedMap, c: usize) -> Result<SparseColumn<F::Elem>> {
        self.check_map(f)?;
        Ok(self.column_unchecked(f, c))
    }

    fn column_unchecked(&self, f: &PointedMap, c: usize) -> SparseColumn<F::Elem> {
        let field = &self.field;
        match &self.kind {
            Kind::Orbits(o) => {
                let (j, local) = o.locate(f.source(), c);
                let idx = o.tables[j].push_forward(f, local);
                vec![(o.offsets[f.target()][j] + idx, field.one())]
            }
            Kind::Tensor(a, b) => {
                let db_src = b.dim(f.source());
                let db_tgt = b.dim(f.target());
                let ca = a.column_unchecked(f, c / db_src);
                let cb = b.column_unchecked(f, c % db_src);
                let mut out = Vec::with_capacity(ca.len() * cb.len());
                for (i, x) in &ca {
                    for (j, y) in &cb {
                        out.push((i * db_tgt + j, field.mul(x, y)));
                    }
                }
                out
            }
            Kind::Sum(parts) => {
                let (mut src_off, mut tgt_off) = (0, 0);
                for p in parts {
                    let ds = p.dim(f.source());
                    if c < src_off + ds {
                        return p
                            .column_unchecked(f, c - src_off)
                            .into_iter()
                            .map(|(i, x)| (i + tgt_off, x))
                            .collect();
                    }
                    src_off += ds;
                    tgt_off += p.dim(f.target());
                }
                unreachable!("basis index {c} out of range")
            }
            Kind::Sub { parent, levels } => {
                let v = &levels[f.source()].basis[c];
                let w = parent.apply_unchecked(f, v);
                levels[f.target()]
                    .free
                    .iter()
                    .enumerate()
                    .filter(|&(_, &p)| !field.is_zero(&w[p]))
                    .map(|(i, &p)| (i, w[p].clone()))
                    .collect()
            }
            Kind::Overridden { base, overrides } => match overrides.get(f) {
                Some(m) => (0..m.rows())
                    .filter(|&r| !field.is_zero(m.get(r, c)))
                    .map(|r| (r, m.get(r, c).clone()))
                    .collect(),
                None => base.column_unchecked(f, c),
            },
            Kind::Rule(r) => r.column(f, c),
        }
    }

    /// `F(f)(v)`.
    pub fn apply(&self, f: &PointedMap, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        self.check_map(f)?;
        if v.len() != self.dim(f.source()) {
            return Err(Error::MalformedAction(format!(
                "vector of length {} applied at level {} of dimension {}",
                v.len(),
                f.source(),
                self.dim(f.source())
            )));
        }
        Ok(self.apply_unchecked(f, v))
    }

    pub(crate) fn apply_unchecked(&self, f: &PointedMap, v: &[F::Elem]) -> Vec<F::Elem> {
        let field = &self.field;
        if let Kind::Sub { parent, levels } = &self.kind {
            let src = &levels[f.source()];
            let mut full = vec![field.zero(); parent.dim(f.source())];
            for (coef, b) in v.iter().zip(&src.basis) {
                if !field.is_zero(coef) {
                    field.axpy(&mut full, coef, b);
                }
            }
            let w = parent.apply_unchecked(f, &full);
            return levels[f.target()].free.iter().map(|&p| w[p].clone()).collect();
        }
        if let Some(m) = self.cached_action(f) {
            return m.mul_vec(field, v);
        }
        let mut out = vec![field.zero(); self.dim(f.target())];
        for (c, x) in v.iter().enumerate() {
            if field.is_zero(x) {
                continue;
            }
            for (r, y) in self.column_unchecked(f, c) {
                field.add_assign(&mut out[r], &field.mul(x, &y));
            }
        }
        out
    }

    fn cached_action(&self, f: &PointedMap) -> Option<Arc<Matrix<F::Elem>>> {
        self.cache.read().expect("action cache lock").get(f).cloned()
    }

    /// Dense matrix of `F(f)`, memoized.
    pub fn action(&self, f: &PointedMap) -> Result<Arc<Matrix<F::Elem>>> {
        self.check_map(f)?;
        if let Some(m) = self.cached_action(f) {
            return Ok(m);
        }
        let (rows, cols) = (self.dim(f.target()), self.dim(f.source()));
        let mut m = Matrix::zeros(&self.field, rows, cols);
        for c in 0..cols {
            for (r, x) in self.column_unchecked(f, c) {
                m.set(r, c, x);
            }
        }
        let m = Arc::new(m);
        // Concurrent writers may race; both computed the same matrix.
        let mut cache = self.cache.write().expect("action cache lock");
        Ok(Arc::clone(cache.entry(f.clone()).or_insert(m)))
    }

    /// For a bijection `σ` of `[n]` acting by permuting labels: the image
    /// index of every basis element.
    pub fn basis_permutation(&self, sigma: &PointedMap) -> Option<Vec<usize>> {
        if !sigma.is_bijection() || !self.permutes_basis() || sigma.source() > self.trunc {
            return None;
        }
        let one = self.field.one();
        (0..self.dim(sigma.source()))
            .map(|c| match self.column_unchecked(sigma, c).as_slice() {
                [(r, x)] if *x == one => Some(*r),
                _ => None,
            })
            .collect()
    }
}

type ComponentFn<E> = Arc<dyn Fn(usize) -> Result<Matrix<E>> + Send + Sync>;

/// A natural transformation between truncated Γ-modules; components are
/// produced on demand and memoized.
pub struct NatTransform<F: Field> {
    source: Arc<GammaModule<F>>,
    target: Arc<GammaModule<F>>,
    rule: ComponentFn<F::Elem>,
    components: Vec<OnceLock<Arc<Matrix<F::Elem>>>>,
}

impl<F: Field> Clone for NatTransform<F> {
    fn clone(&self) -> Self {
        NatTransform {
            source: Arc::clone(&self.source),
            target: Arc::clone(&self.target),
            rule: Arc::clone(&self.rule),
            components: self.components.clone(),
        }
    }
}

impl<F: Field> fmt::Debug for NatTransform<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NatTransform({} -> {})", self.source.name(), self.target.name())
    }
}

impl<F: Field> NatTransform<F> {
    pub fn from_rule(
        source: &Arc<GammaModule<F>>,
        target: &Arc<GammaModule<F>>,
        rule: impl Fn(usize) -> Result<Matrix<F::Elem>> + Send + Sync + 'static,
    ) -> Result<Self> {
        if source.trunc != target.trunc {
            return Err(Error::TruncationMismatch(source.trunc, target.trunc));
        }
        Ok(NatTransform {
            source: Arc::clone(source),
            target: Arc::clone(target),
            rule: Arc::new(rule),
            components: (0..=source.trunc).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn from_components(
        source: &Arc<GammaModule<F>>,
        target: &Arc<GammaModule<F>>,
        components: Vec<Matrix<F::Elem>>,
    ) -> Result<Self> {
        if components.len() != source.trunc + 1 {
            return Err(Error::InvalidArgument(format!(
                "expected {} components, got {}",
                source.trunc + 1,
                components.len()
            )));
        }
        for (n, c) in components.iter().enumerate() {
            if c.shape() != (target.dim(n), source.dim(n)) {
                return Err(Error::MalformedAction(format!(
                    "component {n} has shape {:?}, expected {}x{}",
                    c.shape(),
                    target.dim(n),
                    source.dim(n)
                )));
            }
        }
        let t = Self::from_rule(source, target, |_| unreachable!("all components preset"))?;
        for (slot, c) in t.components.iter().zip(components) {
            slot.set(Arc::new(c)).ok();
        }
        Ok(t)
    }

    pub fn identity(module: &Arc<GammaModule<F>>) -> Self {
        let m = Arc::clone(module);
        Self::from_rule(module, module, move |n| Ok(Matrix::identity(m.field(), m.dim(n))))
            .expect("equal truncation")
    }

    pub fn zero(source: &Arc<GammaModule<F>>, target: &Arc<GammaModule<F>>) -> Result<Self> {
        let (s, t) = (Arc::clone(source), Arc::clone(target));
        Self::from_rule(source, target, move |n| Ok(Matrix::zeros(s.field(), t.dim(n), s.dim(n))))
    }

    pub fn source(&self) -> &Arc<GammaModule<F>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GammaModule<F>> {
        &self.target
    }

    pub fn component(&self, n: usize) -> Result<Arc<Matrix<F::Elem>>> {
        let slot = self.components.get(n).ok_or(Error::Truncation {
            level: n,
            trunc: self.source.trunc,
        })?;
        if let Some(c) = slot.get() {
            return Ok(Arc::clone(c));
        }
        let c = Arc::new((self.rule)(n)?);
        Ok(Arc::clone(slot.get_or_init(|| c)))
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &NatTransform<F>) -> Result<NatTransform<F>> {
        if !Arc::ptr_eq(&self.target, &then.source) {
            return Err(Error::Composition(format!(
                "{self:?} does not end where {then:?} starts"
            )));
        }
        let (a, b) = (self.clone(), then.clone());
        let field = self.source.field().clone();
        Self::from_rule(&self.source, &then.target, move |n| {
            Ok(b.component(n)?.mul(&field, &*a.component(n)?))
        })
    }

    /// Checks `η_m ∘ F(f) = T(f) ∘ η_n` for every `f` between levels
    /// `<= max_level`; returns the first failing map.
    pub fn check_naturality(&self, max_level: usize) -> Result<Option<PointedMap>> {
        let field = self.source.field();
        let top = max_level.min(self.source.trunc);
        for n in 0..=top {
            for m in 0..=top {
                let (cn, cm) = (self.component(n)?, self.component(m)?);
                for f in enumerate_maps(n, m) {
                    for c in 0..self.source.dim(n) {
                        let mut lhs = vec![field.zero(); self.target.dim(m)];
                        for (r, x) in self.source.column_unchecked(&f, c) {
                            for (i, out) in lhs.iter_mut().enumerate() {
                                let y = cm.get(i, r);
                                if !field.is_zero(y) {
                                    field.add_assign(out, &field.mul(&x, y));
                                }
                            }
                        }
                        let rhs = self.target.apply_unchecked(&f, &cn.column(c));
                        if lhs != rhs {
                            return Ok(Some(f));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}
