//! Finite-dimensional commutative algebras given by structure constants, and
//! their modules given by action matrices.

pub mod classical;
pub mod lam;
pub mod presented;

use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::linalg::{self, Matrix};

pub use classical::{classical_d0, classical_d1, kaehler_tensor, ClassicalValue};
pub use lam::{build_lam, lam_of_algebra_surjection, lam_of_module_ses, LamRule, DEFAULT_LEVEL_CAP};
pub use presented::{Monomial, Polynomial, PresentedAlgebra};

/// A commutative unital algebra: `a_i · a_j = Σ_k c_ij^k a_k`.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra<F: Field> {
    field: F,
    names: Vec<String>,
    /// `structure[i][j]` is the coordinate vector of `a_i · a_j`.
    structure: Vec<Vec<Vec<F::Elem>>>,
    unit: Vec<F::Elem>,
}

/// Result of an exhaustive axiom check; `violation` names the failing basis
/// elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub holds: bool,
    pub violation: Option<String>,
}

impl AxiomCheck {
    fn ok() -> Self {
        AxiomCheck {
            holds: true,
            violation: None,
        }
    }

    fn fail(msg: String) -> Self {
        AxiomCheck {
            holds: false,
            violation: Some(msg),
        }
    }

    pub fn into_result(self) -> Result<()> {
        match self.violation {
            None => Ok(()),
            Some(v) => Err(Error::Validation(v)),
        }
    }
}

impl<F: Field> FiniteAlgebra<F> {
    /// Stores the table as given; see [`validate_algebra`].
    pub fn new(
        field: &F,
        names: Vec<String>,
        structure: Vec<Vec<Vec<F::Elem>>>,
        unit: Vec<F::Elem>,
    ) -> Result<Self> {
        let d = names.len();
        let shape_ok = structure.len() == d
            && structure
                .iter()
                .all(|row| row.len() == d && row.iter().all(|v| v.len() == d))
            && unit.len() == d;
        if !shape_ok {
            return Err(Error::Validation(format!(
                "structure constants must form a {d}x{d}x{d} array"
            )));
        }
        Ok(FiniteAlgebra {
            field: field.clone(),
            names,
            structure,
            unit,
        })
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground(field: &F) -> Self {
        FiniteAlgebra {
            field: field.clone(),
            names: vec!["1".into()],
            structure: vec![vec![vec![field.one()]]],
            unit: vec![field.one()],
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> &[F::Elem] {
        &self.unit
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[F::Elem] {
        &self.structure[i][j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim()];
        for (i, ai) in a.iter().enumerate() {
            if f.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if f.is_zero(bj) {
                    continue;
                }
                f.axpy(&mut out, &f.mul(ai, bj), &self.structure[i][j]);
            }
        }
        out
    }

    /// Multiplication by `a` as a matrix on the algebra.
    pub fn multiplication_matrix(&self, a: &[F::Elem]) -> Matrix<F::Elem> {
        let cols: Vec<Vec<F::Elem>> = (0..self.dim())
            .map(|j| self.mul(a, &self.basis_vector(j)))
            .collect();
        Matrix::from_columns(&self.field, self.dim(), &cols)
    }

    pub fn pow(&self, a: &[F::Elem], e: u32) -> Vec<F::Elem> {
        let mut acc = self.unit.clone();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Stable content hash of the field and structure constants.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.field.spec().token().as_bytes());
        for n in &self.names {
            h.update(n.as_bytes());
            h.update([0]);
        }
        for row in &self.structure {
            for v in row {
                for x in v {
                    h.update(self.field.format(x).as_bytes());
                    h.update([1]);
                }
            }
        }
        for x in &self.unit {
            h.update(self.field.format(x).as_bytes());
            h.update([2]);
        }
        hex::encode(h.finalize())
    }
}

/// Exhaustive check of commutativity, associativity, and the unit law.
pub fn validate_algebra<F: Field>(a: &FiniteAlgebra<F>) -> AxiomCheck {
    let d = a.dim();
    let name = |i: usize| a.names[i].clone();
    for i in 0..d {
        for j in i + 1..d {
            if a.structure[i][j] != a.structure[j][i] {
                return AxiomCheck::fail(format!(
                    "commutativity fails for ({}, {}) [basis indices ({i}, {j})]",
                    name(i),
                    name(j)
                ));
            }
        }
    }
    for i in 0..d {
        let ai = a.basis_vector(i);
        if a.mul(&a.unit, &ai) != ai {
            return AxiomCheck::fail(format!("unit law fails for {}", name(i)));
        }
    }
    for i in 0..d {
        for j in 0..d {
            let ij = a.structure[i][j].clone();
            for k in 0..d {
                let left = a.mul(&ij, &a.basis_vector(k));
                let right = a.mul(&a.basis_vector(i), &a.structure[j][k]);
                if left != right {
                    return AxiomCheck::fail(format!(
                        "associativity fails for ({}, {}, {})",
                        name(i),
                        name(j),
                        name(k)
                    ));
                }
            }
        }
    }
    AxiomCheck::ok()
}

/// A module over a [`FiniteAlgebra`]: one action matrix per algebra basis
/// element.
#[derive(Clone, Debug)]
pub struct FiniteModule<F: Field> {
    algebra: Arc<FiniteAlgebra<F>>,
    names: Vec<String>,
    action: Vec<Matrix<F::Elem>>,
}

impl<F: Field> FiniteModule<F> {
    pub fn new(algebra: &Arc<FiniteAlgebra<F>>, names: Vec<String>, action: Vec<Matrix<F::Elem>>) -> Result<Self> {
        let m = names.len();
        if action.len() != algebra.dim() || action.iter().any(|a| a.shape() != (m, m)) {
            return Err(Error::Validation(format!(
                "module needs {} action matrices of shape {m}x{m}",
                algebra.dim()
            )));
        }
        Ok(FiniteModule {
            algebra: Arc::clone(algebra),
            names,
            action,
        })
    }

    /// `A` acting on itself.
    pub fn regular(algebra: &Arc<FiniteAlgebra<F>>) -> Self {
        let action = (0..algebra.dim())
            .map(|i| algebra.multiplication_matrix(&algebra.basis_vector(i)))
            .collect();
        FiniteModule {
            algebra: Arc::clone(algebra),
            names: algebra.names.clone(),
            action,
        }
    }

    /// A one-dimensional module where `a_i` acts by `values[i]`.
    pub fn character(algebra: &Arc<FiniteAlgebra<F>>, name: &str, values: Vec<F::Elem>) -> Result<Self> {
        let action = values
            .into_iter()
            .map(|v| Matrix::from_vec(1, 1, vec![v]))
            .collect();
        Self::new(algebra, vec![name.to_string()], action)
    }

    /// The residue field `A/𝔪` of a local algebra whose unit is a basis
    /// element and whose other basis elements are nilpotent.
    pub fn residue(algebra: &Arc<FiniteAlgebra<F>>) -> Result<Self> {
        let f = algebra.field();
        let d = algebra.dim();
        let unit_idx = (0..d)
            .find(|&i| algebra.basis_vector(i) == algebra.unit)
            .ok_or_else(|| Error::Validation("residue module needs the unit as a basis element".into()))?;
        let mut values = vec![f.zero(); d];
        values[unit_idx] = f.one();
        for i in (0..d).filter(|&i| i != unit_idx) {
            let p = algebra.pow(&algebra.basis_vector(i), d as u32);
            if p.iter().any(|x| !f.is_zero(x)) {
                return Err(Error::Validation(format!(
                    "basis element {} is not nilpotent; residue module undefined",
                    algebra.names[i]
                )));
            }
        }
        Self::character(algebra, "k", values)
    }

    /// Restriction of scalars along an algebra map `φ : B -> A` given by its
    /// matrix (columns are images of `B`'s basis).
    pub fn restrict(&self, source: &Arc<FiniteAlgebra<F>>, phi: &Matrix<F::Elem>) -> Result<Self> {
        let action = (0..source.dim())
            .map(|i| self.act_matrix(&phi.column(i)))
            .collect();
        FiniteModule::new(source, self.names.clone(), action)
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra<F>> {
        &self.algebra
    }

    pub fn field(&self) -> &F {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn basis_action(&self, i: usize) -> &Matrix<F::Elem> {
        &self.action[i]
    }

    /// Action matrix of an arbitrary algebra element.
    pub fn act_matrix(&self, a: &[F::Elem]) -> Matrix<F::Elem> {
        let f = self.field();
        let mut out = Matrix::zeros(f, self.dim(), self.dim());
        for (i, ai) in a.iter().enumerate() {
            if !f.is_zero(ai) {
                let scaled = {
                    let mut s = self.action[i].clone();
                    for r in 0..s.rows() {
                        f.scale(s.row_mut(r), ai);
                    }
                    s
                };
                out = out.add(f, &scaled);
            }
        }
        out
    }

    /// `a_i · m` for basis element `a_i`.
    pub fn act_basis(&self, i: usize, m: &[F::Elem]) -> Vec<F::Elem> {
        self.action[i].mul_vec(self.field(), m)
    }

    pub fn fingerprint(&self) -> String {
        let f = self.field();
        let mut h = Sha256::new();
        h.update(self.algebra.fingerprint().as_bytes());
        for n in &self.names {
            h.update(n.as_bytes());
            h.update([0]);
        }
        for a in &self.action {
            for r in 0..a.rows() {
                for x in a.row(r) {
                    h.update(f.format(x).as_bytes());
                    h.update([1]);
                }
            }
        }
        hex::encode(h.finalize())
    }
}

/// Checks that the unit acts as the identity and that actions compose
/// according to the structure constants.
pub fn validate_module<F: Field>(m: &FiniteModule<F>) -> AxiomCheck {
    let a = &m.algebra;
    let f = a.field();
    if m.act_matrix(&a.unit) != Matrix::identity(f, m.dim()) {
        return AxiomCheck::fail("the unit does not act as the identity".into());
    }
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let lhs = m.action[i].mul(f, &m.action[j]);
            let rhs = m.act_matrix(&a.structure[i][j]);
            if lhs != rhs {
                return AxiomCheck::fail(format!(
                    "action of {}·{} is not the composite action",
                    a.names[i], a.names[j]
                ));
            }
        }
    }
    AxiomCheck::ok()
}

/// Checks that `phi : M -> N` commutes with the action of every basis element.
pub fn is_module_map<F: Field>(phi: &Matrix<F::Elem>, from: &FiniteModule<F>, to: &FiniteModule<F>) -> bool {
    let f = from.field();
    if phi.shape() != (to.dim(), from.dim()) {
        return false;
    }
    (0..from.algebra.dim()).all(|i| phi.mul(f, &from.action[i]) == to.action[i].mul(f, phi))
}

/// `Σ_k x_k e_k` with the algebra's unit, for user convenience in tests.
pub fn element<F: Field>(field: &F, coords: &[i64]) -> Vec<F::Elem> {
    coords.iter().map(|&c| field.from_i64(c)).collect()
}

/// The truncated polynomial algebra `K[x_1..x_r] / (monomials)` on its
/// standard monomial basis, together with its presentation.
pub fn monomial_algebra<F: Field>(
    field: &F,
    variables: &[&str],
    relators: &[Vec<u32>],
) -> Result<(Arc<FiniteAlgebra<F>>, PresentedAlgebra<F>)> {
    let rels: Vec<Polynomial<F>> = relators
        .iter()
        .map(|e| Polynomial::monomial(field, Monomial(e.clone())))
        .collect();
    let basis = presented::standard_monomials(variables.len(), relators)?;
    let names: Vec<String> = basis.iter().map(|m| m.render(variables)).collect();
    let d = basis.len();
    let index = |m: &Monomial| basis.iter().position(|b| b == m);
    let mut structure = vec![vec![vec![field.zero(); d]; d]; d];
    for (i, mi) in basis.iter().enumerate() {
        for (j, mj) in basis.iter().enumerate() {
            let prod = mi.mul(mj);
            if let Some(k) = index(&prod) {
                structure[i][j][k] = field.one();
            }
        }
    }
    let mut unit = vec![field.zero(); d];
    unit[index(&Monomial(vec![0; variables.len()])).expect("1 is standard")] = field.one();
    let algebra = Arc::new(FiniteAlgebra::new(field, names, structure, unit)?);
    let images = (0..variables.len())
        .map(|v| {
            let mut e = vec![0u32; variables.len()];
            e[v] = 1;
            match index(&Monomial(e)) {
                Some(k) => algebra.basis_vector(k),
                None => vec![field.zero(); d],
            }
        })
        .collect();
    let ci = presented::pairwise_coprime(relators) && relators.len() <= variables.len();
    let presentation = PresentedAlgebra::new(
        &algebra,
        variables.iter().map(|s| s.to_string()).collect(),
        rels,
        images,
        ci,
    )?;
    Ok((algebra, presentation))
}

/// Names of the built-in algebras.
pub const CORPUS_ALGEBRAS: [&str; 4] = ["K", "K[x]/(x^2)", "K[x]/(x^3)", "K[x,y]/(x^2,xy,y^2)"];

/// Built-in algebra by name, with its monomial presentation.
pub fn corpus_algebra<F: Field>(field: &F, name: &str) -> Result<(Arc<FiniteAlgebra<F>>, PresentedAlgebra<F>)> {
    match name {
        "K" => monomial_algebra(field, &[], &[]),
        "K[x]/(x^2)" => monomial_algebra(field, &["x"], &[vec![2]]),
        "K[x]/(x^3)" => monomial_algebra(field, &["x"], &[vec![3]]),
        "K[x,y]/(x^2,xy,y^2)" => monomial_algebra(field, &["x", "y"], &[vec![2, 0], vec![1, 1], vec![0, 2]]),
        other => Err(Error::InvalidArgument(format!("unknown corpus algebra `{other}`"))),
    }
}

/// Which module of the corpus: the algebra itself or its residue field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum CorpusModule {
    Regular,
    Residue,
}

impl CorpusModule {
    pub fn build<F: Field>(&self, algebra: &Arc<FiniteAlgebra<F>>) -> Result<FiniteModule<F>> {
        match self {
            CorpusModule::Regular => Ok(FiniteModule::regular(algebra)),
            CorpusModule::Residue => FiniteModule::residue(algebra),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CorpusModule::Regular => "A",
            CorpusModule::Residue => "K",
        }
    }
}

/// The three corpus fields.
pub fn corpus_fields() -> Vec<FieldSpec> {
    vec![FieldSpec::Rationals, FieldSpec::Prime(2), FieldSpec::Prime(3)]
}

/// Rank of a module map, for exactness checks.
pub(crate) fn rank_of<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    linalg::rank(field, m)
}
