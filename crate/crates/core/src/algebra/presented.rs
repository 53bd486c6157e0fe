//! Algebras presented as `K[x_1..x_r] / (g_1..g_s)`, with monomial normal
//! forms.

use std::fmt;
use std::sync::Arc;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Matrix};

/// Exponent vector of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(vars: usize) -> Self {
        Monomial(vec![0; vars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn render(&self, vars: &[&str]) -> String {
        let mut s = String::new();
        for (v, &e) in vars.iter().zip(&self.0) {
            match e {
                0 => {}
                1 => s.push_str(v),
                _ => s.push_str(&format!("{v}^{e}")),
            }
        }
        if s.is_empty() {
            "1".into()
        } else {
            s
        }
    }
}

/// A polynomial as a list of `(monomial, coefficient)` terms with distinct
/// monomials and nonzero coefficients.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    pub terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.terms.iter().map(|(m, _)| &m.0)).finish()
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn monomial(field: &F, m: Monomial) -> Self {
        Polynomial {
            terms: vec![(m, field.one())],
        }
    }

    /// Collects like terms and drops zeros.
    pub fn from_terms(field: &F, terms: Vec<(Monomial, F::Elem)>) -> Self {
        let mut out: Vec<(Monomial, F::Elem)> = Vec::new();
        for (m, c) in terms {
            match out.iter_mut().find(|(n, _)| *n == m) {
                Some((_, acc)) => field.add_assign(acc, &c),
                None => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !field.is_zero(c));
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Polynomial { terms: out }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn derivative(&self, field: &F, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[var] > 0)
            .map(|(m, c)| {
                let mut e = m.clone();
                let k = e.0[var];
                e.0[var] -= 1;
                (e, field.mul(c, &field.from_i64(k as i64)))
            })
            .collect();
        Self::from_terms(field, terms)
    }
}

/// Monomials not divisible by any relator, by degree then with earlier
/// variables first. Fails when some variable has no pure-power relator
/// (the quotient would be infinite-dimensional).
pub fn standard_monomials(vars: usize, relators: &[Vec<u32>]) -> Result<Vec<Monomial>> {
    let mut bounds = Vec::with_capacity(vars);
    for v in 0..vars {
        let pure = relators
            .iter()
            .filter(|e| e.len() == vars && e.iter().enumerate().all(|(i, &x)| i == v || x == 0) && e[v] > 0)
            .map(|e| e[v])
            .min();
        match pure {
            Some(b) => bounds.push(b),
            None => {
                return Err(Error::Validation(format!(
                    "variable {v} has no pure-power relator; the quotient is infinite-dimensional"
                )))
            }
        }
    }
    let rels: Vec<Monomial> = relators.iter().map(|e| Monomial(e.clone())).collect();
    let mut out = Vec::new();
    let mut cur = vec![0u32; vars];
    loop {
        let m = Monomial(cur.clone());
        if !rels.iter().any(|r| r.divides(&m)) {
            out.push(m);
        }
        // odometer over the box of exponents below the pure-power bounds
        let mut i = vars;
        loop {
            if i == 0 {
                out.sort_by(|a, b| a.degree().cmp(&b.degree()).then(b.0.cmp(&a.0)));
                return Ok(out);
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < bounds[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// A monomial sequence is regular exactly when it is pairwise coprime.
pub fn pairwise_coprime(relators: &[Vec<u32>]) -> bool {
    let ms: Vec<Monomial> = relators.iter().map(|e| Monomial(e.clone())).collect();
    ms.iter()
        .enumerate()
        .all(|(i, a)| ms[i + 1..].iter().all(|b| a.is_coprime(b)))
}

/// `A = K[x_1..x_r]/(g_1..g_s)` together with the images of the variables in
/// a [`FiniteAlgebra`].
#[derive(Clone, Debug)]
pub struct PresentedAlgebra<F: Field> {
    algebra: Arc<FiniteAlgebra<F>>,
    variables: Vec<String>,
    relators: Vec<Polynomial<F>>,
    images: Vec<Vec<F::Elem>>,
    complete_intersection: bool,
}

impl<F: Field> PresentedAlgebra<F> {
    /// Checks that every relator maps to zero in the algebra.
    pub fn new(
        algebra: &Arc<FiniteAlgebra<F>>,
        variables: Vec<String>,
        relators: Vec<Polynomial<F>>,
        images: Vec<Vec<F::Elem>>,
        complete_intersection: bool,
    ) -> Result<Self> {
        if images.len() != variables.len() || images.iter().any(|v| v.len() != algebra.dim()) {
            return Err(Error::Validation(
                "presentation needs one algebra element per variable".into(),
            ));
        }
        if relators
            .iter()
            .any(|g| g.terms.iter().any(|(m, _)| m.0.len() != variables.len()))
        {
            return Err(Error::Validation("relator has the wrong number of exponents".into()));
        }
        let p = PresentedAlgebra {
            algebra: Arc::clone(algebra),
            variables,
            relators,
            images,
            complete_intersection,
        };
        let field = algebra.field();
        for (j, g) in p.relators.iter().enumerate() {
            if p.normal_form(g).iter().any(|x| !field.is_zero(x)) {
                return Err(Error::Validation(format!(
                    "relator {j} does not vanish in the algebra"
                )));
            }
        }
        Ok(p)
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra<F>> {
        &self.algebra
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn relators(&self) -> &[Polynomial<F>] {
        &self.relators
    }

    pub fn is_complete_intersection(&self) -> bool {
        self.complete_intersection
    }

    fn eval_monomial(&self, m: &Monomial) -> Vec<F::Elem> {
        let mut acc = self.algebra.unit().to_vec();
        for (v, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                acc = self.algebra.mul(&acc, &self.images[v]);
            }
        }
        acc
    }

    /// Image of a polynomial in `A`, in the algebra's basis coordinates.
    pub fn normal_form(&self, p: &Polynomial<F>) -> Vec<F::Elem> {
        let field = self.algebra.field();
        let mut out = vec![field.zero(); self.algebra.dim()];
        for (m, c) in &p.terms {
            field.axpy(&mut out, c, &self.eval_monomial(m));
        }
        out
    }

    /// Monomial exponent vectors when every relator is a monomial.
    pub fn monomial_relators(&self) -> Option<Vec<Vec<u32>>> {
        self.relators
            .iter()
            .map(|g| g.is_monomial().then(|| g.terms[0].0 .0.clone()))
            .collect()
    }

    /// Whether the built-in monomial normal form applies and is confluent for
    /// this algebra: relators are monomials, and the standard monomials map
    /// to a basis of `A`.
    pub fn has_confluent_normal_form(&self) -> Result<()> {
        let rels = self.monomial_relators().ok_or_else(|| {
            Error::OracleUnavailable(
                "relators are not monomials and no normal-form rule was supplied".into(),
            )
        })?;
        let standard = standard_monomials(self.variables.len(), &rels)
            .map_err(|e| Error::OracleUnavailable(e.to_string()))?;
        if standard.len() != self.algebra.dim() {
            return Err(Error::OracleUnavailable(format!(
                "{} standard monomials but the algebra has dimension {}",
                standard.len(),
                self.algebra.dim()
            )));
        }
        let field = self.algebra.field();
        let cols: Vec<Vec<F::Elem>> = standard.iter().map(|m| self.eval_monomial(m)).collect();
        let rank = linalg::rank(field, &Matrix::from_columns(field, self.algebra.dim(), &cols));
        if rank != self.algebra.dim() {
            return Err(Error::OracleUnavailable(
                "standard monomials do not map to a basis of the algebra".into(),
            ));
        }
        Ok(())
    }

    /// The relators form a regular sequence; only decided for monomials.
    pub fn is_regular_sequence(&self) -> Option<bool> {
        let rels = self.monomial_relators()?;
        Some(pairwise_coprime(&rels) && rels.iter().all(|e| e.iter().any(|&x| x > 0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::monomial_algebra;
    use crate::field::Rationals;

    #[test]
    fn standard_monomials_of_corpus() {
        let s = standard_monomials(1, &[vec![3]]).unwrap();
        assert_eq!(s, vec![Monomial(vec![0]), Monomial(vec![1]), Monomial(vec![2])]);
        let s = standard_monomials(2, &[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap();
        let names: Vec<String> = s.iter().map(|m| m.render(&["x", "y"])).collect();
        assert_eq!(names, vec!["1", "x", "y"]);
        assert!(standard_monomials(2, &[vec![2, 0]]).is_err());
    }

    #[test]
    fn derivative_and_normal_form() {
        let q = Rationals;
        let (a, p) = monomial_algebra(&q, &["x"], &[vec![3]]).unwrap();
        p.has_confluent_normal_form().unwrap();
        let g = &p.relators()[0];
        let dg = g.derivative(&q, 0);
        assert_eq!(dg.terms.len(), 1);
        assert_eq!(dg.terms[0].0, Monomial(vec![2]));
        assert_eq!(q.format(&dg.terms[0].1), "3");
        // x^2 is the last basis element
        assert_eq!(p.normal_form(&Polynomial::monomial(&q, Monomial(vec![2]))), a.basis_vector(2));
        assert!(p.normal_form(g).iter().all(|x| q.is_zero(x)));
    }

    #[test]
    fn regularity() {
        assert!(pairwise_coprime(&[vec![2, 0], vec![0, 3]]));
        assert!(!pairwise_coprime(&[vec![2, 0], vec![1, 1]]));
        let (_, p) = monomial_algebra(&Rationals, &["x", "y"], &[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap();
        assert_eq!(p.is_regular_sequence(), Some(false));
        assert!(!p.is_complete_intersection());
    }
}
