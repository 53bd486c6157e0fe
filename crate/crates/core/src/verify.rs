//! Verification batteries, one per named suite. Each instance reports
//! PASS, FAIL, INCONCLUSIVE or INFO; an instance that errors counts as a
//! failure.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{
    build_lam, classical_d0, classical_d1, corpus_algebra, lam_of_algebra_surjection, lam_of_module_ses,
    CorpusModule, FiniteAlgebra, FiniteModule, CORPUS_ALGEBRAS, DEFAULT_LEVEL_CAP,
};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::gamma::{
    gamma_lambda, hom_space, is_y_epi, module_invariants, partitions_up_to, pi0, representable, GammaModule,
    NatTransform, Partition,
};
use crate::linalg::Matrix;
use crate::resolution::{
    absolute_pi, kunneth_check, relative_pi, relative_pi_with, weight_lambda_t, weight_t, weighted_contract,
    weighted_tor, y_cover, CoverOptions, PiParams, DEFAULT_COVER_CAP,
};
use crate::with_field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Suite {
    Lemma21,
    Lemma22,
    Lemma32,
    Lemma33,
    Lemma41,
    Lemma42,
    Theorem45,
    RemarkT,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Lemma21,
        Suite::Lemma22,
        Suite::Lemma32,
        Suite::Lemma33,
        Suite::Lemma41,
        Suite::Lemma42,
        Suite::Theorem45,
        Suite::RemarkT,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Lemma21 => "lemma21",
            Suite::Lemma22 => "lemma22",
            Suite::Lemma32 => "lemma32",
            Suite::Lemma33 => "lemma33",
            Suite::Lemma41 => "lemma41",
            Suite::Lemma42 => "lemma42",
            Suite::Theorem45 => "theorem45",
            Suite::RemarkT => "remark-t",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(Suite::name).collect();
                Error::InvalidArgument(format!("unknown suite `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    /// Recorded output with no asserted target.
    Info,
    Error,
}

impl Status {
    pub fn is_failure(&self) -> bool {
        matches!(self, Status::Fail | Status::Error)
    }

    /// `Pass` when `ok`, else `Fail`.
    pub fn of_match(ok: bool) -> Status {
        Self::of(ok)
    }

    fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Info => "INFO",
            Status::Error => "ERROR",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub details: Value,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub instances: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

type Outcome = Result<(Status, Value, Option<String>)>;
type Job = (String, Box<dyn Fn() -> Outcome + Send + Sync>);

fn job(name: impl Into<String>, f: impl Fn() -> Outcome + Send + Sync + 'static) -> Job {
    (name.into(), Box::new(f))
}

fn finish(suite: &str, jobs: Vec<Job>) -> SuiteReport {
    let instances: Vec<CheckResult> = jobs
        .par_iter()
        .map(|(name, f)| match f() {
            Ok((status, details, witness)) => CheckResult {
                name: name.clone(),
                status,
                details,
                witness,
            },
            Err(e) => CheckResult {
                name: name.clone(),
                status: Status::Error,
                details: Value::Null,
                witness: Some(e.to_string()),
            },
        })
        .collect();
    let count = |p: fn(&Status) -> bool| instances.iter().filter(|c| p(&c.status)).count();
    SuiteReport {
        suite: suite.to_string(),
        passed: count(|s| *s == Status::Pass),
        failed: count(Status::is_failure),
        inconclusive: count(|s| *s == Status::Inconclusive),
        instances,
    }
}

pub fn run_suite(suite: Suite) -> SuiteReport {
    let jobs = match suite {
        Suite::Lemma21 => lemma21(),
        Suite::Lemma22 => lemma22(),
        Suite::Lemma32 => lemma32(),
        Suite::Lemma33 => lemma33(),
        Suite::Lemma41 => lemma41(),
        Suite::Lemma42 => lemma42(),
        Suite::Theorem45 => theorem45(),
        Suite::RemarkT => remark_t(),
    };
    finish(suite.name(), jobs)
}

/// The four corpus algebras crossed with `M = A, K` and the three fields.
pub fn full_corpus() -> Vec<(FieldSpec, &'static str, CorpusModule)> {
    let mut out = Vec::new();
    for spec in crate::algebra::corpus_fields() {
        for name in CORPUS_ALGEBRAS {
            for m in [CorpusModule::Regular, CorpusModule::Residue] {
                out.push((spec, name, m));
            }
        }
    }
    out
}

/// The complete-intersection part of the corpus.
pub fn ci_corpus() -> Vec<(FieldSpec, &'static str, CorpusModule)> {
    full_corpus()
        .into_iter()
        .filter(|(_, n, _)| *n == "K[x]/(x^2)" || *n == "K[x]/(x^3)")
        .collect()
}

pub fn instance_name(spec: FieldSpec, name: &str, m: CorpusModule) -> String {
    format!("L({name}, {}) over {spec}", m.label())
}

fn corpus_lam<F: Field>(field: &F, name: &str, m: CorpusModule, trunc: usize) -> Result<Arc<GammaModule<F>>> {
    let (a, _) = corpus_algebra(field, name)?;
    build_lam(&Arc::new(m.build(&a)?), trunc, DEFAULT_LEVEL_CAP)
}

fn check_epi<F: Field>(eta: &NatTransform<F>, bound: usize, expect: bool) -> Outcome {
    let c = is_y_epi(eta, bound)?;
    let witness = c.witness.as_ref().map(|(l, _)| format!("invariants at λ = {l} not hit"));
    Ok((
        Status::of(c.holds == expect),
        json!({"is_y_epi": c.holds, "expected": expect, "bound": bound, "partitions_checked": c.checked.len()}),
        witness,
    ))
}

/// `0 -> m1 -> m1 ⊕ m2 -> m2 -> 0`.
fn split_module<F: Field>(m1: &FiniteModule<F>, m2: &FiniteModule<F>) -> Result<(FiniteModule<F>, Matrix<F::Elem>, Matrix<F::Elem>)> {
    let a = m1.algebra();
    let field = a.field();
    let (d1, d2) = (m1.dim(), m2.dim());
    let action = (0..a.dim())
        .map(|i| Matrix::block_diagonal(field, &[m1.basis_action(i), m2.basis_action(i)]))
        .collect();
    let names = m1.names().iter().chain(m2.names()).cloned().collect();
    let sum = FiniteModule::new(a, names, action)?;
    let mut iota = Matrix::zeros(field, d1 + d2, d1);
    let mut pi = Matrix::zeros(field, d2, d1 + d2);
    for i in 0..d1 {
        iota.set(i, i, field.one());
    }
    for i in 0..d2 {
        pi.set(i, d1 + i, field.one());
    }
    Ok((sum, iota, pi))
}

/// `0 -> 𝔪 -> A -> K -> 0` for a monomial algebra whose basis is the unit
/// followed by the maximal ideal.
fn residue_sequence<F: Field>(
    a: &Arc<FiniteAlgebra<F>>,
) -> Result<(FiniteModule<F>, FiniteModule<F>, FiniteModule<F>, Matrix<F::Elem>, Matrix<F::Elem>)> {
    let field = a.field();
    let d = a.dim();
    let reg = FiniteModule::regular(a);
    let ideal: Vec<usize> = (1..d).collect();
    let action = (0..d)
        .map(|i| reg.basis_action(i).select_rows(&ideal).select_columns(&ideal))
        .collect();
    let m1 = FiniteModule::new(a, ideal.iter().map(|&i| a.names()[i].clone()).collect(), action)?;
    let k = FiniteModule::residue(a)?;
    let mut iota = Matrix::zeros(field, d, d - 1);
    for (c, &i) in ideal.iter().enumerate() {
        iota.set(i, c, field.one());
    }
    let mut pi = Matrix::zeros(field, 1, d);
    pi.set(0, 0, field.one());
    Ok((m1, reg, k, iota, pi))
}

/// `K[x]/(x³) -> K[x]/(x²)`.
fn truncation_map<F: Field>(field: &F) -> Result<(Arc<FiniteAlgebra<F>>, Arc<FiniteAlgebra<F>>, Matrix<F::Elem>)> {
    let (b, _) = corpus_algebra(field, "K[x]/(x^3)")?;
    let (a, _) = corpus_algebra(field, "K[x]/(x^2)")?;
    let mut phi = Matrix::zeros(field, 2, 3);
    phi.set(0, 0, field.one());
    phi.set(1, 1, field.one());
    Ok((b, a, phi))
}

fn lemma21() -> Vec<Job> {
    let mut jobs = Vec::new();
    for spec in crate::algebra::corpus_fields() {
        for name in ["K[x]/(x^2)", "K[x]/(x^3)"] {
            jobs.push(job(format!("split L({name}, K ⊕ A) -> L({name}, A) over {spec}"), move || {
                with_field!(spec, |field| {
                    let (a, _) = corpus_algebra(&field, name)?;
                    let (k, reg) = (FiniteModule::residue(&a)?, FiniteModule::regular(&a));
                    let (sum, iota, pi) = split_module(&k, &reg)?;
                    let (_, p) = lam_of_module_ses(&Arc::new(k), &Arc::new(sum), &Arc::new(reg), &iota, &pi, 3)?;
                    check_epi(&p, 3, true)
                })
            }));
        }
        jobs.push(job(format!("split Γ¹ ⊕ Γ(2) -> Γ(2) over {spec}"), move || {
            with_field!(spec, |field| {
                let g1 = representable(&field, 1, 3)?;
                let g2 = gamma_lambda(&field, &Partition::single(2), 3)?;
                let sum = GammaModule::direct_sum(&field, 3, vec![g1.clone(), g2.clone()])?;
                let comps = (0..=3)
                    .map(|n| {
                        let mut m = Matrix::zeros(&field, g2.dim(n), sum.dim(n));
                        for i in 0..g2.dim(n) {
                            m.set(i, g1.dim(n) + i, field.one());
                        }
                        m
                    })
                    .collect();
                let p = NatTransform::from_components(&sum, &g2, comps)?;
                if let Some(f) = p.check_naturality(3)? {
                    return Ok((Status::Fail, json!({}), Some(format!("projection not natural at {f}"))));
                }
                check_epi(&p, 3, true)
            })
        }));
        jobs.push(job(format!("composition cover ∘ truncation over {spec}"), move || {
            with_field!(spec, |field| {
                let (b, a, phi) = truncation_map(&field)?;
                let m = Arc::new(FiniteModule::residue(&a)?);
                let theta = lam_of_algebra_surjection(&b, &phi, &m, 3)?;
                let cover = y_cover(theta.source(), &CoverOptions::new(3))?;
                let composite = cover.map()?.then(&theta)?;
                check_epi(&composite, 3, true)
            })
        }));
        jobs.push(job(format!("identity and zero maps over {spec}"), move || {
            with_field!(spec, |field| {
                let l = corpus_lam(&field, "K[x]/(x^2)", CorpusModule::Regular, 3)?;
                let id = is_y_epi(&NatTransform::identity(&l), 3)?.holds;
                let zero = is_y_epi(&NatTransform::zero(&l, &l)?, 3)?.holds;
                Ok((
                    Status::of(id && !zero),
                    json!({"identity": id, "zero": zero}),
                    (!id || zero).then(|| "identity must pass and zero must fail".to_string()),
                ))
            })
        }));
    }
    jobs
}

fn lemma22() -> Vec<Job> {
    let mut jobs = Vec::new();
    for spec in [FieldSpec::Rationals, FieldSpec::Prime(2)] {
        jobs.push(job(format!("Hom(Γ(λ), L(K[x]/(x^2), A)) ≅ invariants, s(λ) <= 3, over {spec}"), move || {
            with_field!(spec, |field| {
                let l = corpus_lam(&field, "K[x]/(x^2)", CorpusModule::Regular, 3)?;
                let mut rows = Vec::new();
                let mut ok = true;
                for lambda in partitions_up_to(3) {
                    let h = hom_space(&lambda, &l)?;
                    let inv = module_invariants(&l, lambda.size(), &lambda)?.len();
                    let natural = h.basis.iter().try_fold(true, |acc, x| {
                        Ok::<_, Error>(acc && h.realize(x)?.check_naturality(3)?.is_none())
                    })?;
                    ok &= h.dim() == inv && natural;
                    rows.push(json!({"lambda": lambda.to_string(), "hom": h.dim(), "invariants": inv, "natural": natural}));
                }
                let six = hom_space(&Partition::single(2), &l)?.dim();
                ok &= six == 6;
                Ok((Status::of(ok), json!({"rows": rows}), (!ok).then(|| "dimension or naturality mismatch".into())))
            })
        }));
        jobs.push(job(format!("cover of L(K[x]/(x^3), A) is a 𝒴-epimorphism over {spec}"), move || {
            with_field!(spec, |field| {
                let l = corpus_lam(&field, "K[x]/(x^3)", CorpusModule::Regular, 3)?;
                let c = y_cover(&l, &CoverOptions::new(3))?;
                let check = is_y_epi(c.map()?, 3)?;
                Ok((
                    Status::of(check.holds && c.certified()),
                    json!({"summands": c.summands.len(), "certified": c.certified(), "is_y_epi": check.holds}),
                    check.witness.map(|(l, _)| format!("λ = {l}")),
                ))
            })
        }));
        for lambda in partitions_up_to(3) {
            jobs.push(job(format!("π^𝒴_*(Γ({lambda})) vanishes above 0 over {spec}"), move || {
                with_field!(spec, |field| {
                    let g = gamma_lambda(&field, &lambda, 3)?;
                    let r = relative_pi(&g, 2, 3, 3)?;
                    let ok = r.dims[1] == 0 && r.dims[2] == 0 && r.dims[0] == lambda.len();
                    Ok((Status::of(ok), json!({"dims": r.dims}), (!ok).then(|| format!("dims {:?}", r.dims))))
                })
            }));
        }
    }
    jobs
}

fn lemma32() -> Vec<Job> {
    full_corpus()
        .into_iter()
        .map(|(spec, name, m)| {
            job(instance_name(spec, name, m), move || {
                with_field!(spec, |field| {
                    let (a, _) = corpus_algebra(&field, name)?;
                    let module = Arc::new(m.build(&a)?);
                    let l = build_lam(&module, 2, DEFAULT_LEVEL_CAP)?;
                    let p = pi0(&l)?.dim();
                    let k = classical_d0(&module).dim;
                    Ok((
                        Status::of(p == k),
                        json!({"pi0": p, "kaehler": k, "match": p == k}),
                        (p != k).then(|| format!("π₀ = {p}, Ω¹ ⊗ M = {k}")),
                    ))
                })
            })
        })
        .collect()
}

/// `dim D^k(K^d) = C(d - 1 + k, k)`.
fn divided_power_dim(d: usize, k: usize) -> usize {
    crate::algebra::lam::binomial((d - 1 + k) as u64, k as u64) as usize
}

fn lemma33() -> Vec<Job> {
    let mut jobs = Vec::new();
    for spec in crate::algebra::corpus_fields() {
        for name in ["K[x]/(x^2)", "K[x]/(x^3)"] {
            jobs.push(job(format!("L({name}, 0 -> 𝔪 -> A -> K -> 0) over {spec}"), move || {
                with_field!(spec, |field| {
                    let (a, _) = corpus_algebra(&field, name)?;
                    let (m1, m, m2, iota, pi) = residue_sequence(&a)?;
                    let (i, p) = lam_of_module_ses(&Arc::new(m1), &Arc::new(m), &Arc::new(m2), &iota, &pi, 3)?;
                    let natural = i.check_naturality(3)?.is_none() && p.check_naturality(3)?.is_none();
                    let (status, details, witness) = check_epi(&p, 3, true)?;
                    let ok = status == Status::Pass && natural;
                    Ok((Status::of(ok), json!({"epi": details, "natural": natural}), witness))
                })
            }));
        }
        for m in [CorpusModule::Residue, CorpusModule::Regular] {
            jobs.push(job(format!("L(K[x]/(x^3) -> K[x]/(x^2), {}) over {spec}", m.label()), move || {
                with_field!(spec, |field| {
                    let (b, a, phi) = truncation_map(&field)?;
                    let eta = lam_of_algebra_surjection(&b, &phi, &Arc::new(m.build(&a)?), 3)?;
                    check_epi(&eta, 3, true)
                })
            }));
        }
        jobs.push(job(format!("invariants of L(A, M) = M ⊗ D^λ(A), dim A = 2, n <= 4, over {spec}"), move || {
            with_field!(spec, |field| {
                let mut ok = true;
                let mut rows = Vec::new();
                for m in [CorpusModule::Residue, CorpusModule::Regular] {
                    let l = corpus_lam(&field, "K[x]/(x^2)", m, 4)?;
                    let dm = l.dim(0);
                    for lambda in partitions_up_to(4) {
                        let got = module_invariants(&l, lambda.size(), &lambda)?.len();
                        let want = dm * lambda.parts().iter().map(|&k| divided_power_dim(2, k)).product::<usize>();
                        ok &= got == want;
                        rows.push(json!({"module": m.label(), "lambda": lambda.to_string(), "dim": got, "expected": want}));
                    }
                }
                Ok((Status::of(ok), json!({"rows": rows}), (!ok).then(|| "invariant dimension mismatch".into())))
            })
        }));
    }
    jobs
}

fn lemma41() -> Vec<Job> {
    full_corpus()
        .into_iter()
        .filter(|(s, _, _)| *s == FieldSpec::Rationals)
        .map(|(spec, name, m)| {
            job(instance_name(spec, name, m), move || {
                with_field!(spec, |field| {
                    let l = corpus_lam(&field, name, m, 3)?;
                    let rel = relative_pi(&l, 1, 3, 3)?;
                    let abs = absolute_pi(&l, 1, 3)?;
                    let ok = rel.dims == abs.dims;
                    Ok((
                        Status::of(ok),
                        json!({"relative": rel.dims, "absolute": abs.dims}),
                        (!ok).then(|| format!("relative {:?} vs absolute {:?}", rel.dims, abs.dims)),
                    ))
                })
            })
        })
        .collect()
}

fn kunneth_outcome<F: Field>(f: &Arc<GammaModule<F>>, t: &Arc<GammaModule<F>>, expect_pi1: Option<usize>) -> Outcome {
    let table = kunneth_check(f, t, &PiParams::new(1, 3, 3))?;
    let mut ok = table.holds;
    if let Some(e) = expect_pi1 {
        ok &= table.rows[1].lhs == e;
    }
    let rows: Vec<String> = table
        .rows
        .iter()
        .map(|r| format!("i={}: {} = {}·{} + {}·{} = {}", r.degree, r.lhs, r.pi_f, r.t_zero, r.f_zero, r.pi_t, r.rhs))
        .collect();
    Ok((
        Status::of(ok),
        serde_json::to_value(&table).expect("serializable"),
        (!ok).then(|| rows.join("; ")),
    ))
}

fn lemma42() -> Vec<Job> {
    vec![
        job("(Γ¹, Γ¹) over Q", || {
            let q = crate::field::Rationals;
            let g = representable(&q, 1, 3)?;
            kunneth_outcome(&g, &g, Some(0))
        }),
        job("(L(A, A), L(A, A)), A = K[x]/(x^2) over F2", || {
            let f2 = crate::field::PrimeField::new(2)?;
            let l = corpus_lam(&f2, "K[x]/(x^2)", CorpusModule::Regular, 3)?;
            kunneth_outcome(&l, &l, Some(8))
        }),
    ]
}

/// Dimensions at successive `(N, B) = (N, N)` until two consecutive runs
/// agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stabilization {
    pub trajectory: Vec<(usize, usize, Vec<usize>)>,
    /// The smaller parameters of the first stable pair.
    pub stable_at: Option<(usize, usize)>,
    pub dims: Option<Vec<usize>>,
    pub stopped: Option<String>,
}

/// Runs `relative_pi` at `(N, N)` for `N = start, start + 1, ...` up to
/// `max_trunc`, stopping at the first `N` whose value agrees with `N + 1`.
pub fn stabilize<F: Field>(
    make_target: impl Fn(usize) -> Result<Arc<GammaModule<F>>>,
    degree: usize,
    start: usize,
    max_trunc: usize,
    cap: usize,
) -> Result<Stabilization> {
    let mut out = Stabilization {
        trajectory: Vec::new(),
        stable_at: None,
        dims: None,
        stopped: None,
    };
    for n in start..=max_trunc {
        let mut params = PiParams::new(degree, n, n);
        params.cap = cap;
        let run = make_target(n).and_then(|t| relative_pi_with(&t, &params));
        let report = match run {
            Ok(r) => r,
            Err(e @ (Error::ResourceCap { .. } | Error::DimensionOverflow { .. })) => {
                out.stopped = Some(e.to_string());
                return Ok(out);
            }
            Err(e) => return Err(e),
        };
        if let Some((_, _, prev)) = out.trajectory.last() {
            if *prev == report.dims {
                out.stable_at = Some((n - 1, n - 1));
                out.dims = Some(report.dims.clone());
                out.trajectory.push((n, n, report.dims));
                return Ok(out);
            }
        }
        out.trajectory.push((n, n, report.dims));
    }
    out.stopped = Some(format!("no two consecutive values agree up to N = {max_trunc}"));
    Ok(out)
}

/// Largest truncation tried by the stability protocol.
pub const STABILITY_MAX_TRUNC: usize = 5;

pub fn theorem45_instance(spec: FieldSpec, name: &'static str, m: CorpusModule) -> Outcome {
    with_field!(spec, |field| {
        let (a, p) = corpus_algebra(&field, name)?;
        let module = Arc::new(m.build(&a)?);
        let d0 = classical_d0(&module).dim;
        let d1 = classical_d1(&p, &module)?.dim;
        let run = stabilize(
            |n| build_lam(&module, n, DEFAULT_LEVEL_CAP),
            1,
            3,
            STABILITY_MAX_TRUNC,
            DEFAULT_COVER_CAP,
        )?;
        let details = json!({"D0": d0, "D1": d1, "stabilization": run});
        Ok(match &run.dims {
            Some(dims) if dims[1] == d1 && dims[0] == d0 => (Status::Pass, details, None),
            Some(dims) => (
                Status::Fail,
                details,
                Some(format!("stable π^𝒴 = {dims:?} but (D₀, D₁) = ({d0}, {d1})")),
            ),
            None => (Status::Inconclusive, details, run.stopped.clone()),
        })
    })
}

fn theorem45() -> Vec<Job> {
    ci_corpus()
        .into_iter()
        .map(|(spec, name, m)| job(instance_name(spec, name, m), move || theorem45_instance(spec, name, m)))
        .collect()
}

fn remark_t() -> Vec<Job> {
    let mut jobs = Vec::new();
    for (spec, name, m) in full_corpus() {
        jobs.push(job(format!("Tor(t, {})", instance_name(spec, name, m)), move || {
            with_field!(spec, |field| {
                let l = corpus_lam(&field, name, m, 3)?;
                let params = PiParams::new(1, 3, 3);
                let tor = weighted_tor(&weight_t(3), &l, &params)?;
                let pi = relative_pi_with(&l, &params)?;
                let contract = weighted_contract(&weight_t(3), &l)?.dim();
                let p0 = pi0(&l)?.dim();
                let ok = tor.dims == pi.dims && contract == p0;
                Ok((
                    Status::of(ok),
                    json!({"tor": tor.dims, "relative_pi": pi.dims, "contract": contract, "pi0": p0}),
                    (!ok).then(|| format!("Tor {:?} vs π {:?}, t ⊗ F = {contract} vs π₀ = {p0}", tor.dims, pi.dims)),
                ))
            })
        }));
    }
    for spec in crate::algebra::corpus_fields() {
        jobs.push(job(format!("t ⊗ Γⁿ = π₀(Γⁿ), n <= 2, over {spec}"), move || {
            with_field!(spec, |field| {
                let mut got = Vec::new();
                for n in 0..=2 {
                    let g = representable(&field, n, 3)?;
                    got.push((weighted_contract(&weight_t(3), &g)?.dim(), pi0(&g)?.dim()));
                }
                let ok = got.iter().all(|(a, b)| a == b);
                Ok((Status::of(ok), json!({"pairs": got}), (!ok).then(|| format!("{got:?}"))))
            })
        }));
    }
    jobs.push(job("Tor(Λ²∘t, L(K[x]/(x^2), A)) over Q", || {
        let q = crate::field::Rationals;
        let l = corpus_lam(&q, "K[x]/(x^2)", CorpusModule::Regular, 3)?;
        let r = weighted_tor(&weight_lambda_t(2, 3)?, &l, &PiParams::new(1, 3, 3))?;
        Ok((Status::Info, json!({"dims": r.dims}), None))
    }));
    jobs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("lemma99".parse::<Suite>().is_err());
    }

    #[test]
    fn corpus_sizes() {
        assert_eq!(full_corpus().len(), 24);
        assert_eq!(ci_corpus().len(), 12);
    }

    #[test]
    fn divided_powers() {
        assert_eq!(divided_power_dim(2, 2), 3);
        assert_eq!(divided_power_dim(2, 0), 1);
    }

    #[test]
    fn quick_suites_pass() {
        for s in [Suite::Lemma21, Suite::Lemma32, Suite::Lemma42] {
            let r = run_suite(s);
            assert!(r.ok(), "{}", serde_json::to_string_pretty(&r).unwrap());
        }
    }
}
