//! Line-oriented problem files.
//!
//! ```text
//! # K[x]/(x^2) over F2, M = A
//! field Fp 2
//! algebra
//!   basis 1 x
//!   unit 1
//!   x * x = 0
//! end
//! module regular
//! presentation
//!   vars x
//!   rel x^2
//!   ci
//! end
//! params
//!   trunc 3
//!   bound 3
//!   degree 1
//! end
//! ```
//!
//! Products not listed are zero, except that a unit which is a single basis
//! element multiplies as the identity. The table is not symmetrized, so a
//! missing `y * x` line is caught by validation. `module` is one of
//! `regular`, `residue`, or an `explicit` block with `basis` and
//! `a . m = ...` lines. `functor gamma_lambda 2 1` replaces `L(A, M)` by
//! `Γ(2, 1)`.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{
    build_lam, validate_algebra, validate_module, FiniteAlgebra, FiniteModule, Monomial, Polynomial,
    PresentedAlgebra,
};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::gamma::{gamma_lambda, GammaModule, Partition};
use crate::linalg::Matrix;
use crate::with_field;

/// A rational coefficient `num / den` as written in the file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Coef {
    pub num: i64,
    pub den: i64,
}

impl Coef {
    const ONE: Coef = Coef { num: 1, den: 1 };

    fn negate(self) -> Coef {
        Coef {
            num: -self.num,
            den: self.den,
        }
    }
}

/// `Σ c_k · name_k`, names resolved to basis indices.
pub type Combination = Vec<(Coef, usize)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraBlock {
    pub basis: Vec<String>,
    pub unit: Combination,
    /// `(line, i, j, a_i a_j)`.
    pub products: Vec<(usize, usize, usize, Combination)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ModuleBlock {
    Regular,
    Residue,
    Explicit {
        basis: Vec<String>,
        /// `(line, algebra index, module index, a . m)`.
        actions: Vec<(usize, usize, usize, Combination)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationBlock {
    pub variables: Vec<String>,
    /// Image of each variable; `None` means the basis element of that name.
    pub images: Vec<Option<Combination>>,
    /// Relators as `(coefficient, exponents)` terms.
    pub relators: Vec<Vec<(Coef, Vec<u32>)>>,
    pub complete_intersection: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    pub trunc: Option<usize>,
    pub bound: Option<usize>,
    pub degree: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FunctorSpec {
    /// `L(A, M)`.
    Lam,
    GammaLambda(Partition),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProblemFile {
    pub name: String,
    pub field: FieldSpec,
    pub algebra: Option<AlgebraBlock>,
    pub module: Option<ModuleBlock>,
    pub presentation: Option<PresentationBlock>,
    pub params: Params,
    pub functor: FunctorSpec,
}

fn perr(line: usize, token: &str, message: impl fmt::Display) -> Error {
    Error::Parse {
        line,
        token: token.to_string(),
        message: message.to_string(),
    }
}

fn parse_coef(line: usize, s: &str) -> Result<Coef> {
    let bad = || perr(line, s, "expected an integer or fraction");
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?),
        None => (s.parse().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(perr(line, s, "zero denominator"));
    }
    Ok(Coef { num: n, den: d })
}

fn is_number(s: &str) -> bool {
    let s = s.strip_prefix('-').unwrap_or(s);
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || c == '/')
}

/// Splits `a + 2 b - c` into signed term strings.
fn split_terms(expr: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    for ch in expr.chars() {
        if (ch == '+' || ch == '-') && !cur.trim().is_empty() {
            out.push((negative, cur.trim().to_string()));
            cur.clear();
            negative = ch == '-';
        } else if ch == '-' {
            negative = !negative;
        } else if ch != '+' {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() {
        out.push((negative, cur.trim().to_string()));
    }
    out
}

/// Splits a term into an optional leading coefficient and the rest.
fn split_coef(line: usize, term: &str) -> Result<(Coef, String)> {
    let t = term.replace('·', " ");
    let mut parts = t.split_whitespace().collect::<Vec<_>>();
    if parts.len() == 1 {
        if let Some((c, rest)) = parts[0].split_once('*') {
            if is_number(c) {
                return Ok((parse_coef(line, c)?, rest.to_string()));
            }
        }
    }
    if parts.len() >= 2 && is_number(parts[0]) {
        let c = parse_coef(line, parts.remove(0))?;
        let rest = parts.join("").trim_start_matches('*').to_string();
        return Ok((c, rest));
    }
    Ok((Coef::ONE, parts.join("")))
}

fn parse_combination(line: usize, expr: &str, names: &[String]) -> Result<Combination> {
    let mut out = Vec::new();
    for (neg, term) in split_terms(expr) {
        if term == "0" && !names.iter().any(|n| n == "0") {
            continue;
        }
        let (c, name) = split_coef(line, &term)?;
        let idx = names
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| perr(line, &name, "unknown basis element"))?;
        out.push((if neg { c.negate() } else { c }, idx));
    }
    Ok(out)
}

fn parse_polynomial(line: usize, expr: &str, vars: &[String]) -> Result<Vec<(Coef, Vec<u32>)>> {
    let mut out = Vec::new();
    for (neg, term) in split_terms(expr) {
        let (mut c, mono) = if is_number(&term) {
            (parse_coef(line, &term)?, String::new())
        } else {
            split_coef(line, &term)?
        };
        if neg {
            c = c.negate();
        }
        let mut exps = vec![0u32; vars.len()];
        for factor in mono.split('*').filter(|f| !f.is_empty()) {
            let (v, e) = match factor.split_once('^') {
                Some((v, e)) => (v, e.parse::<u32>().map_err(|_| perr(line, factor, "bad exponent"))?),
                None => (factor, 1),
            };
            let i = vars
                .iter()
                .position(|n| n == v)
                .ok_or_else(|| perr(line, v, "unknown variable"))?;
            exps[i] += e;
        }
        out.push((c, exps));
    }
    Ok(out)
}

fn parse_usize(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| perr(line, s, "expected a nonnegative integer"))
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::vec::IntoIter<(usize, &'a str)>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines {
            inner: lines.into_iter().peekable(),
        }
    }

    /// Lines up to the matching `end`.
    fn block(&mut self, header_line: usize, header: &str) -> Result<Vec<(usize, &'a str)>> {
        let mut out = Vec::new();
        for (n, l) in self.inner.by_ref() {
            if l == "end" {
                return Ok(out);
            }
            out.push((n, l));
        }
        Err(perr(header_line, header, "block is missing `end`"))
    }
}

fn parse_algebra(lines: &[(usize, &str)]) -> Result<AlgebraBlock> {
    let mut basis: Option<Vec<String>> = None;
    let mut unit = None;
    let mut products = Vec::new();
    for &(n, l) in lines {
        let (head, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match head {
            "basis" => basis = Some(rest.split_whitespace().map(str::to_string).collect()),
            "unit" => {
                let b = basis.as_ref().ok_or_else(|| perr(n, head, "`basis` must come first"))?;
                unit = Some(parse_combination(n, rest, b)?);
            }
            _ => {
                let b = basis.as_ref().ok_or_else(|| perr(n, head, "`basis` must come first"))?;
                let (lhs, rhs) = l.split_once('=').ok_or_else(|| perr(n, l, "expected `a * b = ...`"))?;
                let (a, c) = lhs.split_once('*').ok_or_else(|| perr(n, lhs.trim(), "expected `a * b`"))?;
                let idx = |s: &str| {
                    let s = s.trim();
                    b.iter().position(|x| x == s).ok_or_else(|| perr(n, s, "unknown basis element"))
                };
                products.push((n, idx(a)?, idx(c)?, parse_combination(n, rhs, b)?));
            }
        }
    }
    let basis = basis.ok_or_else(|| perr(lines.first().map_or(0, |l| l.0), "algebra", "missing `basis`"))?;
    let unit = unit.ok_or_else(|| perr(lines.first().map_or(0, |l| l.0), "algebra", "missing `unit`"))?;
    Ok(AlgebraBlock { basis, unit, products })
}

fn parse_module_block(lines: &[(usize, &str)], algebra: &AlgebraBlock) -> Result<ModuleBlock> {
    let mut basis: Option<Vec<String>> = None;
    let mut actions = Vec::new();
    for &(n, l) in lines {
        if let Some(rest) = l.strip_prefix("basis") {
            basis = Some(rest.split_whitespace().map(str::to_string).collect());
            continue;
        }
        let b = basis.as_ref().ok_or_else(|| perr(n, l, "`basis` must come first"))?;
        let (lhs, rhs) = l.split_once('=').ok_or_else(|| perr(n, l, "expected `a . m = ...`"))?;
        let (a, m) = lhs.split_once('.').ok_or_else(|| perr(n, lhs.trim(), "expected `a . m`"))?;
        let ai = algebra
            .basis
            .iter()
            .position(|x| x == a.trim())
            .ok_or_else(|| perr(n, a.trim(), "unknown algebra basis element"))?;
        let mi = b
            .iter()
            .position(|x| x == m.trim())
            .ok_or_else(|| perr(n, m.trim(), "unknown module basis element"))?;
        actions.push((n, ai, mi, parse_combination(n, rhs, b)?));
    }
    let basis = basis.ok_or_else(|| perr(lines.first().map_or(0, |l| l.0), "module", "missing `basis`"))?;
    Ok(ModuleBlock::Explicit { basis, actions })
}

fn parse_presentation(lines: &[(usize, &str)], algebra: &AlgebraBlock) -> Result<PresentationBlock> {
    let mut variables: Option<Vec<String>> = None;
    let mut images = Vec::new();
    let mut relators = Vec::new();
    let mut ci = false;
    for &(n, l) in lines {
        let (head, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        if head == "vars" {
            let v: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            images = vec![None; v.len()];
            variables = Some(v);
            continue;
        }
        if head == "ci" {
            ci = true;
            continue;
        }
        let vars = variables.as_ref().ok_or_else(|| perr(n, head, "`vars` must come first"))?;
        match head {
            "map" => {
                let (v, rhs) = rest.split_once('=').ok_or_else(|| perr(n, rest, "expected `map x = ...`"))?;
                let i = vars
                    .iter()
                    .position(|x| x == v.trim())
                    .ok_or_else(|| perr(n, v.trim(), "unknown variable"))?;
                images[i] = Some(parse_combination(n, rhs, &algebra.basis)?);
            }
            "rel" => relators.push(parse_polynomial(n, rest, vars)?),
            other => return Err(perr(n, other, "expected `vars`, `map`, `rel` or `ci`")),
        }
    }
    let variables = variables.ok_or_else(|| perr(lines.first().map_or(0, |l| l.0), "presentation", "missing `vars`"))?;
    Ok(PresentationBlock {
        variables,
        images,
        relators,
        complete_intersection: ci,
    })
}

/// Parses without building anything over the field.
pub fn parse_problem_syntax(name: &str, text: &str) -> Result<ProblemFile> {
    let mut lines = Lines::new(text);
    let mut field = None;
    let mut algebra: Option<AlgebraBlock> = None;
    let mut module = None;
    let mut presentation = None;
    let mut params = Params::default();
    let mut functor = FunctorSpec::Lam;
    while let Some((n, l)) = lines.inner.next() {
        let mut words = l.split_whitespace();
        let head = words.next().unwrap_or("");
        let rest: Vec<&str> = words.collect();
        match head {
            "field" => {
                let spec = rest.join(" ").replace("Fp ", "F");
                field = Some(spec.parse::<FieldSpec>().map_err(|e| perr(n, &rest.join(" "), e))?);
            }
            "algebra" => algebra = Some(parse_algebra(&lines.block(n, head)?)?),
            "module" => {
                let a = algebra.as_ref().ok_or_else(|| perr(n, head, "`algebra` must come before `module`"))?;
                module = Some(match rest.first().copied() {
                    Some("regular") => ModuleBlock::Regular,
                    Some("residue") => ModuleBlock::Residue,
                    Some("explicit") | None => parse_module_block(&lines.block(n, head)?, a)?,
                    Some(other) => return Err(perr(n, other, "expected regular, residue or explicit")),
                });
            }
            "presentation" => {
                let a = algebra
                    .as_ref()
                    .ok_or_else(|| perr(n, head, "`algebra` must come before `presentation`"))?;
                presentation = Some(parse_presentation(&lines.block(n, head)?, a)?);
            }
            "params" => {
                for (m, p) in lines.block(n, head)? {
                    let (k, v) = p.split_once(char::is_whitespace).ok_or_else(|| perr(m, p, "expected `key value`"))?;
                    let v = parse_usize(m, v.trim())?;
                    match k {
                        "trunc" | "N" => params.trunc = Some(v),
                        "bound" | "B" => params.bound = Some(v),
                        "degree" | "d" => params.degree = Some(v),
                        other => return Err(perr(m, other, "unknown parameter")),
                    }
                }
            }
            "functor" => {
                functor = match rest.first().copied() {
                    Some("lam") => FunctorSpec::Lam,
                    Some("gamma_lambda") => {
                        let parts = rest[1..].iter().map(|s| parse_usize(n, s)).collect::<Result<Vec<_>>>()?;
                        FunctorSpec::GammaLambda(Partition::new(parts).map_err(|e| perr(n, l, e))?)
                    }
                    other => return Err(perr(n, other.unwrap_or(""), "expected `lam` or `gamma_lambda`")),
                }
            }
            other => return Err(perr(n, other, "unknown section")),
        }
    }
    let field = field.ok_or_else(|| perr(0, "field", "missing `field` line"))?;
    if functor == FunctorSpec::Lam && (algebra.is_none() || module.is_none()) {
        return Err(perr(0, "module", "an algebra and a module are required unless `functor gamma_lambda` is given"));
    }
    Ok(ProblemFile {
        name: name.to_string(),
        field,
        algebra,
        module,
        presentation,
        params,
        functor,
    })
}

/// Parses and validates: the algebra and module axioms hold and the
/// presentation, if any, has the algebra's dimension.
pub fn parse_problem_str(name: &str, text: &str) -> Result<ProblemFile> {
    let p = parse_problem_syntax(name, text)?;
    with_field!(p.field, |field| p.instantiate(&field).map(|_| ()))?;
    Ok(p)
}

pub fn parse_problem(path: &Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_problem_str(&name, &text)
}

/// A problem built over its field.
#[derive(Clone, Debug)]
pub struct Instance<F: Field> {
    pub algebra: Option<Arc<FiniteAlgebra<F>>>,
    pub module: Option<Arc<FiniteModule<F>>>,
    pub presentation: Option<PresentedAlgebra<F>>,
    pub functor: FunctorSpec,
}

fn coef<F: Field>(field: &F, line: usize, c: Coef) -> Result<F::Elem> {
    field
        .from_ratio(c.num, c.den)
        .map_err(|e| perr(line, &format!("{}/{}", c.num, c.den), e))
}

fn dense<F: Field>(field: &F, line: usize, dim: usize, comb: &Combination) -> Result<Vec<F::Elem>> {
    let mut v = vec![field.zero(); dim];
    for &(c, i) in comb {
        field.add_assign(&mut v[i], &coef(field, line, c)?);
    }
    Ok(v)
}

impl ProblemFile {
    pub fn instantiate<F: Field>(&self, field: &F) -> Result<Instance<F>> {
        if field.spec() != self.field {
            return Err(Error::InvalidField(format!(
                "problem is over {} but {} was requested",
                self.field,
                field.spec()
            )));
        }
        let mut inst = Instance {
            algebra: None,
            module: None,
            presentation: None,
            functor: self.functor.clone(),
        };
        let Some(ab) = &self.algebra else {
            return Ok(inst);
        };
        let d = ab.basis.len();
        let unit = dense(field, 0, d, &ab.unit)?;
        let unit_index = match ab.unit.as_slice() {
            [(Coef { num: 1, den: 1 }, i)] => Some(*i),
            _ => None,
        };
        let mut structure = vec![vec![vec![field.zero(); d]; d]; d];
        if let Some(u) = unit_index {
            for b in 0..d {
                structure[u][b] = field_basis(field, d, b);
                structure[b][u] = field_basis(field, d, b);
            }
        }
        for (line, i, j, comb) in &ab.products {
            structure[*i][*j] = dense(field, *line, d, comb)?;
        }
        let alg = Arc::new(FiniteAlgebra::new(field, ab.basis.clone(), structure, unit)?);
        validate_algebra(&alg).into_result()?;
        if let Some(mb) = &self.module {
            let m = match mb {
                ModuleBlock::Regular => FiniteModule::regular(&alg),
                ModuleBlock::Residue => FiniteModule::residue(&alg)?,
                ModuleBlock::Explicit { basis, actions } => {
                    let dm = basis.len();
                    let mut mats: Vec<Matrix<F::Elem>> = (0..d).map(|_| Matrix::zeros(field, dm, dm)).collect();
                    if let Some(u) = unit_index {
                        mats[u] = Matrix::identity(field, dm);
                    }
                    let mut seen = std::collections::HashSet::new();
                    for (line, a, m, comb) in actions {
                        if seen.insert(*a) && Some(*a) == unit_index {
                            mats[*a] = Matrix::zeros(field, dm, dm);
                        }
                        let col = dense(field, *line, dm, comb)?;
                        for (r, v) in col.into_iter().enumerate() {
                            mats[*a].set(r, *m, v);
                        }
                    }
                    FiniteModule::new(&alg, basis.clone(), mats)?
                }
            };
            validate_module(&m).into_result()?;
            inst.module = Some(Arc::new(m));
        }
        if let Some(pb) = &self.presentation {
            let images = pb
                .variables
                .iter()
                .zip(&pb.images)
                .map(|(v, img)| match img {
                    Some(c) => dense(field, 0, d, c),
                    None => ab
                        .basis
                        .iter()
                        .position(|b| b == v)
                        .map(|i| field_basis(field, d, i))
                        .ok_or_else(|| perr(0, v, "variable has no `map` line and no basis element of that name")),
                })
                .collect::<Result<Vec<_>>>()?;
            let relators = pb
                .relators
                .iter()
                .map(|terms| {
                    let t = terms
                        .iter()
                        .map(|(c, e)| Ok((Monomial(e.clone()), coef(field, 0, *c)?)))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Polynomial::from_terms(field, t))
                })
                .collect::<Result<Vec<_>>>()?;
            let p = PresentedAlgebra::new(&alg, pb.variables.clone(), relators, images, pb.complete_intersection)?;
            if let Some(rels) = p.monomial_relators() {
                let std = crate::algebra::presented::standard_monomials(pb.variables.len(), &rels)?;
                if std.len() != d {
                    return Err(Error::Validation(format!(
                        "presentation has {} standard monomials but the algebra has dimension {d}",
                        std.len()
                    )));
                }
            }
            inst.presentation = Some(p);
        }
        inst.algebra = Some(alg);
        Ok(inst)
    }
}

fn field_basis<F: Field>(field: &F, d: usize, i: usize) -> Vec<F::Elem> {
    let mut v = vec![field.zero(); d];
    v[i] = field.one();
    v
}

impl<F: Field> Instance<F> {
    /// The Γ-module the problem describes, truncated at `trunc`.
    pub fn target(&self, field: &F, trunc: usize, level_cap: usize) -> Result<Arc<GammaModule<F>>> {
        match &self.functor {
            FunctorSpec::GammaLambda(l) => gamma_lambda(field, l, trunc),
            FunctorSpec::Lam => {
                let m = self
                    .module
                    .as_ref()
                    .ok_or_else(|| Error::InvalidArgument("problem has no module".into()))?;
                build_lam(m, trunc, level_cap)
            }
        }
    }

    /// Content fingerprint of the input functor, for cache keys.
    pub fn fingerprint(&self) -> String {
        match (&self.functor, &self.algebra, &self.module) {
            (FunctorSpec::GammaLambda(l), _, _) => format!("gamma_lambda({l})"),
            (FunctorSpec::Lam, Some(a), Some(m)) => format!("{}:{}", a.fingerprint(), m.fingerprint()),
            _ => "unknown".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    const DUAL_F2: &str = "field Fp 2\nalgebra\n basis 1 x\n unit 1\n x * x = 0\nend\nmodule regular\npresentation\n vars x\n rel x^2\n ci\nend\nparams\n trunc 3\n bound 3\n degree 1\nend\n";

    #[test]
    fn parses_dual_numbers() {
        let p = parse_problem_str("dual", DUAL_F2).unwrap();
        assert_eq!(p.field, FieldSpec::Prime(2));
        assert_eq!(p.algebra.as_ref().unwrap().basis.len(), 2);
        assert_eq!(p.params.degree, Some(1));
        let f2 = PrimeField::new(2).unwrap();
        let inst = p.instantiate(&f2).unwrap();
        assert_eq!(inst.algebra.unwrap().dim(), 2);
        assert!(inst.presentation.unwrap().is_complete_intersection());
    }

    #[test]
    fn missing_commutativity_names_the_pair() {
        let text = "field Q\nalgebra\n basis 1 x y z\n unit 1\n x * y = z\nend\nmodule regular\n";
        let err = parse_problem_str("bad", text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("commutativity") && msg.contains("(x, y)"), "{msg}");
    }

    #[test]
    fn syntax_errors_name_line_and_token() {
        let text = "field Q\nalgebra\n basis 1 x\n unit 1\n x * w = 0\nend\n";
        match parse_problem_str("bad", text).unwrap_err() {
            Error::Parse { line, token, .. } => assert_eq!((line, token.as_str()), (5, "w")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_problem_str("bad", "field Q\nalgebra\n basis 1\n").unwrap_err(),
            Error::Parse { .. }
        ));
    }

    #[test]
    fn combinations_and_fractions() {
        let names: Vec<String> = ["1", "x", "y"].iter().map(|s| s.to_string()).collect();
        let c = parse_combination(1, "2 x - 1/2*y + 1", &names).unwrap();
        assert_eq!(c, vec![(Coef { num: 2, den: 1 }, 1), (Coef { num: -1, den: 2 }, 2), (Coef::ONE, 0)]);
        assert!(parse_combination(1, "0", &names).unwrap().is_empty());
        let vars = vec!["x".to_string(), "y".to_string()];
        let p = parse_polynomial(1, "x^2*y - 3 y^3 + 1", &vars).unwrap();
        assert_eq!(p[0].1, vec![2, 1]);
        assert_eq!(p[1], (Coef { num: -3, den: 1 }, vec![0, 3]));
        assert_eq!(p[2].1, vec![0, 0]);
    }

    #[test]
    fn explicit_module_and_gamma_functor() {
        let text = "field Fp 3\nalgebra\n basis 1 x\n unit 1\nend\nmodule explicit\n basis m\n x . m = 0\nend\n";
        let p = parse_problem_str("k", text).unwrap();
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(p.instantiate(&f3).unwrap().module.unwrap().dim(), 1);
        let g = parse_problem_str("g", "field Q\nfunctor gamma_lambda 2\n").unwrap();
        assert_eq!(g.functor, FunctorSpec::GammaLambda(Partition::new(vec![2]).unwrap()));
    }

    #[test]
    fn presentation_must_match_dimension() {
        let text = "field Q\nalgebra\n basis 1 x\n unit 1\nend\nmodule regular\npresentation\n vars x\n rel x^3\nend\n";
        assert!(parse_problem_str("p", text).is_err());
    }

    #[test]
    fn bad_module_action_is_rejected() {
        // x acting by the identity contradicts x * x = 0.
        let text = "field Q\nalgebra\n basis 1 x\n unit 1\nend\nmodule explicit\n basis m\n x . m = m\nend\n";
        assert!(matches!(parse_problem_str("m", text).unwrap_err(), Error::Validation(_)));
    }
}
