//! The command implementations behind the `gamma-aq` binary.

use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Value};

use crate::algebra::{classical_d0, classical_d1, DEFAULT_LEVEL_CAP};
use crate::cache::{Cache, CacheKey, Lookup};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gamma::{pi0, GammaModule, PartitionFamily};
use crate::problem::{FunctorSpec, Instance, ProblemFile};
use crate::report::Report;
use crate::resolution::pi::{build_report, resolve};
use crate::resolution::{
    apply_pi0, apply_weight, weight_lambda_t, weight_t, CoverStrategy, ModuleComplex, PiParams, PiReport, Weight,
    WeightKind, DEFAULT_COVER_CAP,
};
use crate::verify::{run_suite, Status, Suite};
use crate::with_field;

pub const DEFAULT_TRUNC: usize = 3;
pub const DEFAULT_DEGREE: usize = 1;

fn timed(mut report: Report, start: Instant) -> Report {
    report.wall_seconds = start.elapsed().as_secs_f64();
    report
}

/// A report for a command that could not run.
pub fn error_report(command: &str, err: &Error) -> Report {
    Report::new(command, Status::Error, json!({"error": err.to_string()}))
}

/// `dim π₀(F)` against `dim Ω¹_A ⊗_A M`.
pub fn cmd_pi0(problem: &ProblemFile, trunc: Option<usize>) -> Result<Report> {
    let start = Instant::now();
    let n = trunc.unwrap_or(2);
    if n < 2 {
        return Err(Error::Truncation { level: 2, trunc: n });
    }
    with_field!(problem.field, |field| {
        let inst = problem.instantiate(&field)?;
        let target = inst.target(&field, n, DEFAULT_LEVEL_CAP)?;
        let p = pi0(&target)?.dim();
        let (kaehler, status, verdict) = match &inst.module {
            Some(m) if inst.functor == FunctorSpec::Lam => {
                let k = classical_d0(m).dim;
                let s = if k == p { "MATCH" } else { "MISMATCH" };
                (Value::from(k), Status::of_match(k == p), s)
            }
            _ => (Value::Null, Status::Info, "NO_ORACLE"),
        };
        let result = json!({
            "problem": problem.name,
            "field": problem.field.token(),
            "target": target.name(),
            "trunc": n,
            "pi0": p,
            "kaehler": kaehler,
            "verdict": verdict,
        });
        Ok(timed(Report::new("pi0", status, result), start))
    })
}

/// The classical value `D_degree(A, M)`.
pub fn cmd_classical(problem: &ProblemFile, degree: usize) -> Result<Report> {
    let start = Instant::now();
    with_field!(problem.field, |field| {
        let inst = problem.instantiate(&field)?;
        let m = inst
            .module
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("classical values need an algebra and a module".into()))?;
        let v = match degree {
            0 => classical_d0(m),
            1 => {
                let p = inst.presentation.as_ref().ok_or_else(|| {
                    Error::OracleUnavailable("D₁ needs a `presentation` block".into())
                })?;
                classical_d1(p, m)?
            }
            d => return Err(Error::InvalidArgument(format!("classical values exist for degree 0 and 1, not {d}"))),
        };
        let result = json!({
            "problem": problem.name,
            "field": problem.field.token(),
            "degree": v.degree,
            "dim": v.dim,
            "ambient_dim": v.ambient_dim,
            "rank": v.rank,
        });
        Ok(timed(Report::new("classical", Status::Pass, result), start))
    })
}

/// Which weight to contract a resolution with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightArg {
    T,
    LambdaT(usize),
}

impl FromStr for WeightArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "t" {
            return Ok(WeightArg::T);
        }
        s.strip_prefix("lambda^")
            .and_then(|n| n.parse().ok())
            .filter(|&n| n >= 1)
            .map(|n| if n == 1 { WeightArg::T } else { WeightArg::LambdaT(n) })
            .ok_or_else(|| Error::InvalidArgument(format!("unknown weight `{s}`; expected t or lambda^n")))
    }
}

impl WeightArg {
    fn build(&self, trunc: usize) -> Result<Weight> {
        match self {
            WeightArg::T => Ok(weight_t(trunc)),
            WeightArg::LambdaT(n) => weight_lambda_t(*n, trunc),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct PiyArgs {
    pub degree: Option<usize>,
    pub trunc: Option<usize>,
    pub bound: Option<usize>,
    pub absolute: bool,
    pub weight: Option<WeightArg>,
    pub no_empty_partition: bool,
    pub cap: Option<usize>,
    pub basis_strategy: bool,
}

impl PiyArgs {
    pub fn params(&self, problem: &ProblemFile, warnings: &mut Vec<String>) -> PiParams {
        let trunc = self.trunc.or(problem.params.trunc).unwrap_or(DEFAULT_TRUNC);
        let degree = self.degree.or(problem.params.degree).unwrap_or(DEFAULT_DEGREE);
        let mut bound = self.bound.or(problem.params.bound).unwrap_or(trunc);
        let mut family = if self.no_empty_partition {
            PartitionFamily::YoungNonEmpty
        } else {
            PartitionFamily::Young
        };
        if self.absolute {
            if bound != trunc {
                warnings.push(format!("--absolute covers by representables up to N; bound {bound} replaced by {trunc}"));
            }
            bound = trunc;
            family = PartitionFamily::Representable;
        }
        PiParams {
            trunc,
            bound,
            degree,
            family,
            strategy: if self.basis_strategy {
                CoverStrategy::Basis
            } else {
                CoverStrategy::Minimal
            },
            cap: self.cap.unwrap_or(DEFAULT_COVER_CAP),
        }
    }
}

fn obtain<F: Field>(
    cache: Option<&Cache>,
    key: &CacheKey,
    target: &Arc<GammaModule<F>>,
    params: &PiParams,
    warnings: &mut Vec<String>,
) -> Result<(ModuleComplex<F>, &'static str)> {
    let Some(cache) = cache else {
        return Ok((resolve(target, params)?, "disabled"));
    };
    match cache.load(key, target) {
        Lookup::Hit(c) => return Ok((c, "hit")),
        Lookup::Ignored(why) => warnings.push(format!("cache entry ignored: {why}")),
        Lookup::Miss => {}
    }
    let c = resolve(target, params)?;
    if let Err(e) = cache.store(key, &c) {
        warnings.push(format!("could not store resolution: {e}"));
    }
    Ok((c, "miss"))
}

fn contract<F: Field>(complex: &ModuleComplex<F>, params: &PiParams, weight: Option<WeightArg>) -> Result<PiReport> {
    match weight {
        None => Ok(build_report(complex, &apply_pi0(complex)?, *params, "π₀")),
        Some(w) => {
            let w = w.build(params.trunc)?;
            let name = match w.kind() {
                WeightKind::T => "t".to_string(),
                k => k.to_string(),
            };
            Ok(build_report(complex, &apply_weight(&w, complex)?, *params, &name))
        }
    }
}

fn piy_in<F: Field>(
    field: &F,
    problem: &ProblemFile,
    args: &PiyArgs,
    cache: Option<&Cache>,
    warnings: &mut Vec<String>,
) -> Result<(PiReport, &'static str, Value)> {
    let params = args.params(problem, warnings);
    let inst: Instance<F> = problem.instantiate(field)?;
    let target = inst.target(field, params.trunc, DEFAULT_LEVEL_CAP)?;
    let key = CacheKey::new(&inst.fingerprint(), problem.field, &params);
    let (complex, cache_status) = obtain(cache, &key, &target, &params, warnings)?;
    let mut report = contract(&complex, &params, args.weight)?;
    if let Some(cache) = cache {
        if params.trunc > 2 && params.bound > 0 {
            let mut prev = params;
            prev.trunc -= 1;
            prev.bound = (params.bound - 1).min(prev.trunc);
            if args.absolute {
                prev.bound = prev.trunc;
            }
            let pkey = CacheKey::new(&inst.fingerprint(), problem.field, &prev);
            // Γ(λ) with |λ| = N has no truncation below N; there is nothing to compare.
            if let Ok(ptarget) = inst.target(field, prev.trunc, DEFAULT_LEVEL_CAP) {
                match cache.load(&pkey, &ptarget) {
                    Lookup::Hit(pc) => report.compare_with(&contract(&pc, &prev, args.weight)?),
                    Lookup::Ignored(why) => warnings.push(format!("cache entry ignored: {why}")),
                    Lookup::Miss => {}
                }
            }
        }
    }
    let mut oracle = Value::Null;
    if let (Some(m), FunctorSpec::Lam, None) = (&inst.module, &inst.functor, args.weight) {
        let d0 = classical_d0(m).dim;
        let d1 = match &inst.presentation {
            Some(p) => classical_d1(p, m).map(|v| v.dim).map_err(|e| e.to_string()),
            None => Err("no presentation".to_string()),
        };
        let agree0 = report.dims.first() == Some(&d0);
        let agree1 = match (&d1, report.dims.get(1)) {
            (Ok(d1), Some(p1)) => json!(p1 == d1),
            _ => Value::Null,
        };
        let d1 = match d1 {
            Ok(v) => json!(v),
            Err(why) => json!(why),
        };
        oracle = json!({"D0": d0, "D1": d1, "pi0_agrees": agree0, "pi1_agrees": agree1});
    }
    Ok((report, cache_status, oracle))
}

/// Largest `N' < N` (with `B' = min(B, N')`) whose resolution fits the cap.
fn feasible_trunc(problem: &ProblemFile, args: &PiyArgs) -> Option<(usize, usize)> {
    let mut w = Vec::new();
    let params = args.params(problem, &mut w);
    (2..params.trunc).rev().find_map(|n| {
        let mut smaller = args.clone();
        smaller.trunc = Some(n);
        smaller.bound = Some(params.bound.min(n));
        let p = smaller.params(problem, &mut w);
        let ok = with_field!(problem.field, |field| {
            problem
                .instantiate(&field)
                .and_then(|inst| inst.target(&field, n, DEFAULT_LEVEL_CAP))
                .and_then(|t| resolve(&t, &p))
                .is_ok()
        });
        ok.then_some((n, p.bound))
    })
}

/// `π^{𝒴,(N,B)}_i` (or weighted Tor) of the problem's functor.
pub fn cmd_piy(problem: &ProblemFile, args: &PiyArgs, cache: Option<&Cache>) -> Result<Report> {
    let start = Instant::now();
    let mut warnings = Vec::new();
    let run = with_field!(problem.field, |field| piy_in(&field, problem, args, cache, &mut warnings));
    let mut report = match run {
        Ok((pi, cache_status, oracle)) => {
            let status = Status::of_match(pi.certified && pi.d_squared_zero);
            let result = json!({
                "problem": problem.name,
                "report": pi,
                "classical": oracle,
                "cache": cache_status,
            });
            Report::new("piy", status, result)
        }
        Err(e @ (Error::ResourceCap { .. } | Error::DimensionOverflow { .. })) => {
            let suggestion = feasible_trunc(problem, args).map(|(n, b)| json!({"trunc": n, "bound": b}));
            Report::new(
                "piy",
                Status::Error,
                json!({"problem": problem.name, "error": e.to_string(), "largest_feasible": suggestion}),
            )
        }
        Err(e) => return Err(e),
    };
    report.warnings = warnings;
    Ok(timed(report, start))
}

/// Runs the named suites in order.
pub fn cmd_verify(suites: &[Suite]) -> Report {
    let start = Instant::now();
    let reports: Vec<_> = suites.iter().map(|s| run_suite(*s)).collect();
    let failed = reports.iter().any(|r| !r.ok());
    let inconclusive = reports.iter().any(|r| r.inconclusive > 0);
    let status = if failed {
        Status::Fail
    } else if inconclusive {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    timed(Report::new("verify", status, json!({"suites": reports})), start)
}

pub fn cmd_cache_ls(cache: &Cache) -> Result<Report> {
    let entries = cache.list()?;
    Ok(Report::new(
        "cache ls",
        Status::Pass,
        json!({"dir": cache.dir().display().to_string(), "count": entries.len(), "entries": entries}),
    ))
}

pub fn cmd_cache_clear(cache: &Cache) -> Result<Report> {
    let removed = cache.clear()?;
    Ok(Report::new(
        "cache clear",
        Status::Pass,
        json!({"dir": cache.dir().display().to_string(), "removed": removed}),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::parse_problem_str;

    const LAM_K: &str = "field Q\nalgebra\n basis 1 x\n unit 1\nend\nmodule residue\npresentation\n vars x\n rel x^2\n ci\nend\n";

    #[test]
    fn pi0_examples() {
        let p = parse_problem_str("k", LAM_K).unwrap();
        let r = cmd_pi0(&p, None).unwrap();
        assert_eq!(r.result["pi0"], 1);
        assert_eq!(r.result["verdict"], "MATCH");
        let ground = parse_problem_str("g", "field Q\nalgebra\n basis 1\n unit 1\nend\nmodule residue\n").unwrap();
        let r = cmd_pi0(&ground, None).unwrap();
        assert_eq!((r.result["pi0"].clone(), r.result["kaehler"].clone()), (json!(0), json!(0)));
        assert!(cmd_pi0(&p, Some(1)).is_err());
    }

    #[test]
    fn piy_with_weight_t_reproduces_default() {
        let p = parse_problem_str("k", LAM_K).unwrap();
        let a = cmd_piy(&p, &PiyArgs::default(), None).unwrap();
        let b = cmd_piy(
            &p,
            &PiyArgs {
                weight: Some(WeightArg::T),
                ..Default::default()
            },
            None,
        )
        .unwrap();
        assert_eq!(a.result["report"]["dims"], json!([1, 1]));
        assert_eq!(a.result["report"]["dims"], b.result["report"]["dims"]);
        assert_eq!(a.result["classical"]["pi1_agrees"], json!(true));
    }

    #[test]
    fn piy_on_gamma_lambda() {
        let p = parse_problem_str("g", "field Q\nfunctor gamma_lambda 2\n").unwrap();
        let r = cmd_piy(
            &p,
            &PiyArgs {
                degree: Some(2),
                ..Default::default()
            },
            None,
        )
        .unwrap();
        assert_eq!(r.result["report"]["dims"], json!([1, 0, 0]));
    }

    #[test]
    fn cap_error_suggests_smaller_truncation() {
        let text = "field Fp 3\nalgebra\n basis 1 x x2\n unit 1\n x * x = x2\nend\nmodule regular\n";
        let p = parse_problem_str("c", text).unwrap();
        let r = cmd_piy(
            &p,
            &PiyArgs {
                trunc: Some(4),
                cap: Some(2000),
                ..Default::default()
            },
            None,
        )
        .unwrap();
        assert_eq!(r.status, Status::Error, "{}", r.to_json());
        let n = r.result["largest_feasible"]["trunc"].as_u64();
        assert_eq!(n, Some(3), "{}", r.to_json());
    }

    #[test]
    fn cached_runs_match_and_report_stability() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let p = parse_problem_str("k", LAM_K).unwrap();
        let small = PiyArgs {
            trunc: Some(3),
            ..Default::default()
        };
        let big = PiyArgs {
            trunc: Some(4),
            ..Default::default()
        };
        let first = cmd_piy(&p, &small, Some(&cache)).unwrap();
        let second = cmd_piy(&p, &small, Some(&cache)).unwrap();
        assert_eq!(first.result["cache"], "miss");
        assert_eq!(second.result["cache"], "hit");
        assert_eq!(first.result["report"], second.result["report"]);
        let uncached = cmd_piy(&p, &small, None).unwrap();
        assert_eq!(first.result["report"], uncached.result["report"]);
        let b = cmd_piy(&p, &big, Some(&cache)).unwrap();
        assert_eq!(b.result["report"]["stability"]["stable"], json!(true));
    }

    #[test]
    fn weight_arguments() {
        assert_eq!("t".parse::<WeightArg>().unwrap(), WeightArg::T);
        assert_eq!("lambda^2".parse::<WeightArg>().unwrap(), WeightArg::LambdaT(2));
        assert!("lambda^0".parse::<WeightArg>().is_err());
        assert!("s".parse::<WeightArg>().is_err());
    }
}
