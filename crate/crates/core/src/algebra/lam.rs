//! The Γ-module `L(A, M) : [n] ↦ M ⊗ A^{⊗n}`.
//!
//! A pointed map `f : [n] -> [m]` sends `a_0 ⊗ a_1 ⊗ ... ⊗ a_n` to
//! `b_0 ⊗ ... ⊗ b_m` with `b_j = ∏_{f(i) = j} a_i`; slot 0 holds the module
//! element and absorbs the slot-0 product through the action.

use std::sync::Arc;

use crate::algebra::{is_module_map, rank_of, FiniteAlgebra, FiniteModule};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gamma::{ActionRule, GammaModule, NatTransform, PointedMap, SparseColumn};
use crate::linalg::{Label, LabeledSpace, Matrix};

/// Largest level dimension [`build_lam`] accepts by default.
pub const DEFAULT_LEVEL_CAP: usize = 1 << 22;

/// Sparse vector as `(index, coefficient)` pairs.
type Sparse<E> = Vec<(usize, E)>;

pub struct LamRule<F: Field> {
    module: Arc<FiniteModule<F>>,
    /// `products[i][j]` is `a_i a_j` in sparse form.
    products: Vec<Vec<Sparse<F::Elem>>>,
    unit: Sparse<F::Elem>,
}

fn sparse<F: Field>(field: &F, v: &[F::Elem]) -> Sparse<F::Elem> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !field.is_zero(x))
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

impl<F: Field> LamRule<F> {
    pub fn new(module: &Arc<FiniteModule<F>>) -> Self {
        let a = module.algebra();
        let field = a.field();
        let d = a.dim();
        let products = (0..d)
            .map(|i| (0..d).map(|j| sparse(field, a.basis_product(i, j))).collect())
            .collect();
        LamRule {
            module: Arc::clone(module),
            products,
            unit: sparse(field, a.unit()),
        }
    }

    fn field(&self) -> &F {
        self.module.field()
    }

    fn algebra_dim(&self) -> usize {
        self.module.algebra().dim()
    }

    /// `v · a_i` for a sparse algebra element `v`.
    fn times_basis(&self, v: &Sparse<F::Elem>, i: usize) -> Sparse<F::Elem> {
        let field = self.field();
        let mut acc = vec![field.zero(); self.algebra_dim()];
        for (k, c) in v {
            for (l, x) in &self.products[*k][i] {
                field.add_assign(&mut acc[*l], &field.mul(c, x));
            }
        }
        sparse(field, &acc)
    }

    /// Digits of basis index `c` at level `n`: module index, then the
    /// algebra indices of slots `1..=n`.
    fn decode(&self, n: usize, mut c: usize) -> (usize, Vec<usize>) {
        let d = self.algebra_dim();
        let mut digits = vec![0; n];
        for k in (0..n).rev() {
            digits[k] = c % d;
            c /= d;
        }
        (c, digits)
    }
}

impl<F: Field> ActionRule<F> for LamRule<F> {
    fn level(&self, n: usize) -> LabeledSpace {
        let d = self.algebra_dim() as u32;
        let total = self.module.dim() * (d as usize).pow(n as u32);
        let labels = (0..total)
            .map(|c| {
                let (m, digits) = self.decode(n, c);
                let mut t = Vec::with_capacity(n + 1);
                t.push(m as u32);
                t.extend(digits.iter().map(|&x| x as u32));
                Label::Tensor(t)
            })
            .collect();
        LabeledSpace::new(labels)
    }

    fn column(&self, f: &PointedMap, c: usize) -> SparseColumn<F::Elem> {
        let field = self.field();
        let (m_idx, digits) = self.decode(f.source(), c);
        let target = f.target();
        // Slot products; `None` stands for the empty product.
        let mut slots: Vec<Option<Sparse<F::Elem>>> = vec![None; target + 1];
        for (k, &a) in digits.iter().enumerate() {
            let j = f.eval(k + 1);
            slots[j] = Some(match &slots[j] {
                None => vec![(a, field.one())],
                Some(v) => self.times_basis(v, a),
            });
        }
        // Slot 0 acts on the module element.
        let mut out: Sparse<F::Elem> = match &slots[0] {
            None => vec![(m_idx, field.one())],
            Some(v) => {
                let mut acc = vec![field.zero(); self.module.dim()];
                let mut e = vec![field.zero(); self.module.dim()];
                e[m_idx] = field.one();
                for (i, x) in v {
                    let w = self.module.act_basis(*i, &e);
                    field.axpy(&mut acc, x, &w);
                }
                sparse(field, &acc)
            }
        };
        let d = self.algebra_dim();
        for slot in &slots[1..] {
            let v = slot.as_ref().unwrap_or(&self.unit);
            let mut next = Vec::with_capacity(out.len() * v.len());
            for (i, x) in &out {
                for (j, y) in v {
                    next.push((i * d + j, field.mul(x, y)));
                }
            }
            out = next;
            if out.is_empty() {
                break;
            }
        }
        out
    }

    fn permutes_basis(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        format!(
            "L(A[{}], M[{}])",
            self.algebra_dim(),
            self.module.dim()
        )
    }
}

fn level_cap_check(module_dim: usize, algebra_dim: usize, trunc: usize, cap: usize) -> Result<()> {
    let mut dim = module_dim;
    for n in 0..=trunc {
        if dim > cap {
            return Err(Error::DimensionOverflow { level: n, dim, cap });
        }
        dim = dim.saturating_mul(algebra_dim);
    }
    Ok(())
}

/// `L(A, M)` truncated at `N`; fails when some level exceeds `cap`.
pub fn build_lam<F: Field>(module: &Arc<FiniteModule<F>>, trunc: usize, cap: usize) -> Result<Arc<GammaModule<F>>> {
    level_cap_check(module.dim(), module.algebra().dim(), trunc, cap)?;
    let rule = Arc::new(LamRule::new(module));
    Ok(GammaModule::from_rule(module.field(), trunc, rule))
}

/// `L(A, -)` applied to a short exact sequence `0 -> M1 -> M -> M2 -> 0`
/// given by the two module maps.
#[allow(clippy::type_complexity)]
pub fn lam_of_module_ses<F: Field>(
    m1: &Arc<FiniteModule<F>>,
    m: &Arc<FiniteModule<F>>,
    m2: &Arc<FiniteModule<F>>,
    iota: &Matrix<F::Elem>,
    pi: &Matrix<F::Elem>,
    trunc: usize,
) -> Result<(NatTransform<F>, NatTransform<F>)> {
    let field = m.field();
    if !is_module_map(iota, m1, m) || !is_module_map(pi, m, m2) {
        return Err(Error::NotExact("maps are not module homomorphisms".into()));
    }
    if !pi.mul(field, iota).is_zero(field) {
        return Err(Error::NotExact("composite is not zero".into()));
    }
    if rank_of(field, iota) != m1.dim() || rank_of(field, pi) != m2.dim() || m.dim() != m1.dim() + m2.dim() {
        return Err(Error::NotExact(
            "first map must be injective, second surjective, and dimensions must add".into(),
        ));
    }
    let l1 = build_lam(m1, trunc, DEFAULT_LEVEL_CAP)?;
    let l = build_lam(m, trunc, DEFAULT_LEVEL_CAP)?;
    let l2 = build_lam(m2, trunc, DEFAULT_LEVEL_CAP)?;
    let d = m.algebra().dim();
    let lift = |phi: &Matrix<F::Elem>| {
        let (phi, field) = (phi.clone(), field.clone());
        move |n: usize| Ok(phi.kronecker(&field, &Matrix::identity(&field, d.pow(n as u32))))
    };
    let i = NatTransform::from_rule(&l1, &l, lift(iota))?;
    let p = NatTransform::from_rule(&l, &l2, lift(pi))?;
    Ok((i, p))
}

/// Whether `phi` (columns are images of `B`'s basis) is a unital algebra map.
pub fn is_algebra_map<F: Field>(phi: &Matrix<F::Elem>, from: &FiniteAlgebra<F>, to: &FiniteAlgebra<F>) -> bool {
    let field = from.field();
    if phi.shape() != (to.dim(), from.dim()) {
        return false;
    }
    if phi.mul_vec(field, from.unit()) != to.unit() {
        return false;
    }
    let images: Vec<Vec<F::Elem>> = (0..from.dim()).map(|i| phi.column(i)).collect();
    (0..from.dim()).all(|i| {
        (0..from.dim()).all(|j| phi.mul_vec(field, from.basis_product(i, j)) == to.mul(&images[i], &images[j]))
    })
}

/// The transformation `L(B, M) -> L(A, M)` induced by a surjective algebra
/// map `φ : B -> A`, with `M` viewed as a `B`-module by restriction.
pub fn lam_of_algebra_surjection<F: Field>(
    source: &Arc<FiniteAlgebra<F>>,
    phi: &Matrix<F::Elem>,
    module: &Arc<FiniteModule<F>>,
    trunc: usize,
) -> Result<NatTransform<F>> {
    let target = module.algebra();
    let field = target.field();
    if !is_algebra_map(phi, source, target) {
        return Err(Error::Validation("φ is not a unital algebra map".into()));
    }
    if rank_of(field, phi) != target.dim() {
        return Err(Error::NotSurjective("φ".into()));
    }
    let restricted = Arc::new(module.restrict(source, phi)?);
    let lb = build_lam(&restricted, trunc, DEFAULT_LEVEL_CAP)?;
    let la = build_lam(module, trunc, DEFAULT_LEVEL_CAP)?;
    let (phi, field) = (phi.clone(), field.clone());
    let mdim = module.dim();
    NatTransform::from_rule(&lb, &la, move |n| {
        let mut acc = Matrix::identity(&field, mdim);
        for _ in 0..n {
            acc = acc.kronecker(&field, &phi);
        }
        Ok(acc)
    })
}

/// Binomial coefficient as `u128`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of monomials of total degree `e` in `vars` variables, counted by
/// enumeration.
pub fn count_monomials(vars: usize, e: u32) -> u128 {
    fn go(vars: usize, e: u32) -> u128 {
        match vars {
            0 => u128::from(e == 0),
            1 => 1,
            _ => (0..=e).map(|k| go(vars - 1, e - k)).sum(),
        }
    }
    go(vars, e)
}

/// Dimension check behind `L(K[t], K[t]) ≅ S^* ∘ Γ¹`: the degree-`e` part of
/// `K[t_0..t_m]` has dimension `dim S^e(K^{m+1}) = C(m+e, e)`.
pub fn symmetric_slice_law(m: usize, e: u32) -> (u128, u128) {
    (count_monomials(m + 1, e), binomial((m + e as usize) as u64, e as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{corpus_algebra, FiniteModule};
    use crate::field::{PrimeField, Rationals};
    use crate::gamma::{check_functoriality, module_invariants, Partition, Trials};

    fn lam_a<F: Field>(field: &F, name: &str, regular: bool, trunc: usize) -> Arc<GammaModule<F>> {
        let (a, _) = corpus_algebra(field, name).unwrap();
        let m = if regular {
            FiniteModule::regular(&a)
        } else {
            FiniteModule::residue(&a).unwrap()
        };
        build_lam(&Arc::new(m), trunc, DEFAULT_LEVEL_CAP).unwrap()
    }

    #[test]
    fn level_dimensions() {
        let l = lam_a(&Rationals, "K[x]/(x^3)", true, 3);
        assert_eq!(l.dims(), vec![3, 9, 27, 81]);
        let l = lam_a(&Rationals, "K[x]/(x^2)", false, 3);
        assert_eq!(l.dims(), vec![1, 2, 4, 8]);
    }

    #[test]
    fn fold_kills_x_tensor_x() {
        let q = Rationals;
        let l = lam_a(&q, "K[x]/(x^2)", true, 2);
        let c = l.level(2).unwrap().position(&Label::Tensor(vec![0, 1, 1])).unwrap();
        assert!(l.column(&PointedMap::fold(), c).unwrap().is_empty());
        // 1 ⊗ 1 ⊗ x folds to 1 ⊗ x
        let c = l.level(2).unwrap().position(&Label::Tensor(vec![0, 0, 1])).unwrap();
        let col = l.column(&PointedMap::fold(), c).unwrap();
        let target = l.level(1).unwrap().position(&Label::Tensor(vec![0, 1])).unwrap();
        assert_eq!(col, vec![(target, q.one())]);
    }

    #[test]
    fn collapse_acts_on_module_slot() {
        let q = Rationals;
        let l = lam_a(&q, "K[x]/(x^2)", true, 1);
        let to_base = PointedMap::new(0, vec![0]).unwrap();
        // 1 ⊗ x ↦ x·1 = x, and x ⊗ x ↦ 0.
        let c = l.level(1).unwrap().position(&Label::Tensor(vec![0, 1])).unwrap();
        assert_eq!(l.column(&to_base, c).unwrap(), vec![(1, q.one())]);
        let c = l.level(1).unwrap().position(&Label::Tensor(vec![1, 1])).unwrap();
        assert!(l.column(&to_base, c).unwrap().is_empty());
    }

    #[test]
    fn lam_is_functorial() {
        let f3 = PrimeField::new(3).unwrap();
        for name in ["K[x]/(x^2)", "K[x,y]/(x^2,xy,y^2)"] {
            for regular in [true, false] {
                let l = lam_a(&f3, name, regular, 3);
                let c = check_functoriality(&l, Trials::Exhaustive { max_level: 2 }).unwrap();
                assert!(c.holds, "{name}: {:?}", c.counterexample);
            }
        }
    }

    #[test]
    fn invariants_match_divided_powers() {
        // dim L(A,M)([n])^{Σ(λ)} = dim M · ∏ C(d-1+λ_i, λ_i) for dim A = 2.
        let q = Rationals;
        let l = lam_a(&q, "K[x]/(x^2)", true, 4);
        for n in 0..=4 {
            for lambda in crate::gamma::partitions_of(n) {
                let want: u128 = 2 * lambda.parts().iter().map(|&p| binomial(1 + p as u64, p as u64)).product::<u128>();
                let got = module_invariants(&l, n, &lambda).unwrap().len() as u128;
                assert_eq!(got, want, "{lambda}");
            }
        }
        let two = Partition::single(2);
        assert_eq!(module_invariants(&l, 2, &two).unwrap().len(), 6);
    }

    #[test]
    fn dimension_overflow_guard() {
        let (a, _) = corpus_algebra(&Rationals, "K[x]/(x^3)").unwrap();
        let m = Arc::new(FiniteModule::regular(&a));
        let err = build_lam(&m, 4, 100).unwrap_err();
        assert!(matches!(err, Error::DimensionOverflow { level: 4, dim: 243, .. }));
    }

    #[test]
    fn slice_law() {
        for m in 0..=4 {
            for e in 0..=3 {
                let (a, b) = symmetric_slice_law(m, e);
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn surjection_identity_and_rejection() {
        let q = Rationals;
        let (a, _) = corpus_algebra(&q, "K[x]/(x^2)").unwrap();
        let m = Arc::new(FiniteModule::residue(&a).unwrap());
        let id = Matrix::identity(&q, 2);
        let t = lam_of_algebra_surjection(&a, &id, &m, 2).unwrap();
        for n in 0..=2 {
            assert_eq!(*t.component(n).unwrap(), Matrix::identity(&q, 2usize.pow(n as u32)));
        }
        let zero = Matrix::zeros(&q, 2, 2);
        assert!(lam_of_algebra_surjection(&a, &zero, &m, 2).is_err());
    }
}
