//! Dispatch from a [`ScenarioConfig`] to the library, and parallel sweeps.

use std::collections::BTreeMap;
use std::time::Instant;

use cmv_core::ad::hermitian_ad_recursive;
use cmv_core::{
    assemble_system, build_cmv, compute_olp, gram_schmidt_oracle, hermitian_relations_check, lebesgue_solution,
    nullspace, operator_matrix, reconstruct_operator, verify_kernel_basis, BandMatrix, Classification, CmvError,
    CmvPair, ExactComplex, FloatComplex, RelationCheck, Scalar, SolutionBasis, Tolerance, VerblunskySeq,
};
use rayon::prelude::*;

use crate::config::{Backend, Num, OmegaConfig, ScenarioConfig, ScenarioKind, ToleranceConfig};
use crate::error::CliError;
use crate::report::{
    operator_terms, terms, triplets, Check, CrossCheck, IdentityResult, KernelResult, OlpResult, Payload,
    ReconstructResult, Report, SolveResult, Status,
};

/// A payload plus whether every check it carries passed.
struct Outcome {
    payload: Payload,
    horizon: Option<usize>,
    passed: bool,
}

/// Runs one scenario. The echoed scenario carries the resolved tolerances.
/// Config problems and library errors come back as
/// `Err`; a scenario that ran but failed a check is an `Ok` report with
/// status `failed`.
pub fn run_scenario(config: &ScenarioConfig, timing: bool) -> Result<Report, CliError> {
    let start = Instant::now();
    let outcome = match config.backend {
        Backend::Exact => execute::<ExactComplex>(config),
        Backend::Float => execute::<FloatComplex>(config),
    }?;
    let mut echo = config.clone();
    let tol = config.tolerance.resolve()?;
    echo.tolerance = ToleranceConfig {
        zero: Some(tol.zero),
        rank: Some(tol.rank),
    };
    Ok(Report {
        scenario: echo,
        backend: config.backend,
        status: if outcome.passed { Status::Ok } else { Status::Failed },
        error: None,
        horizon: outcome.horizon,
        wall_clock_ms: timing.then(|| start.elapsed().as_secs_f64() * 1e3),
        result: Some(outcome.payload),
    })
}

/// Like [`run_scenario`], but errors become a report with status `error`.
pub fn run_captured(config: &ScenarioConfig, timing: bool) -> Report {
    run_scenario(config, timing).unwrap_or_else(|e| Report {
        scenario: config.clone(),
        backend: config.backend,
        status: if e.is_config_error() { Status::Invalid } else { Status::Error },
        error: Some(e.to_string()),
        horizon: None,
        wall_clock_ms: None,
        result: None,
    })
}

/// Runs every scenario on a pool of `jobs` threads; report `i` belongs to
/// `configs[i]`.
pub fn sweep(configs: &[ScenarioConfig], jobs: usize, timing: bool) -> Vec<Report> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| configs.par_iter().map(|c| run_captured(c, timing)).collect())
}

fn lift(config: &ScenarioConfig, e: CmvError) -> CliError {
    match e {
        CmvError::WindowTooSmall { reason } => CliError::invalid("window", reason),
        CmvError::InvalidPattern(reason) => CliError::invalid("pattern", reason),
        CmvError::ZeroArgument => CliError::invalid("z", "must be nonzero"),
        source => CliError::Scenario {
            scenario: config.label(),
            source,
        },
    }
}

fn classification_name(c: Classification) -> String {
    match c {
        Classification::Trivial => "trivial",
        Classification::LebesgueType => "lebesgue-type",
        Classification::Other => "other",
    }
    .to_string()
}

fn execute<T: Scalar>(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let kind = config.kind.ok_or_else(|| CliError::invalid("kind", "missing"))?;
    let tol = config.tolerance.resolve()?;
    let alpha = config.verblunsky.build::<T>()?;
    let window = config.resolved_window()?;
    let err = |e| lift(config, e);
    match kind {
        ScenarioKind::Solve => run_solve(config, &alpha, window, &tol),
        ScenarioKind::VerifyIdentities => {
            let n = config.require_order()?;
            let pair = build_cmv(&alpha, window).map_err(err)?;
            let default = OmegaConfig::Random {
                band: 1,
                seed: 0,
                hermitian: true,
            };
            let omega = build_omega(config.omega.as_ref().unwrap_or(&default), &pair)?;
            let r = hermitian_relations_check(&pair, &omega, n, &tol).map_err(err)?;
            let image = hermitian_ad_recursive(&pair, &omega, n).map_err(err)?;
            let mut checks = BTreeMap::new();
            let mut put = |name: &str, c: RelationCheck| {
                checks.insert(
                    name.to_string(),
                    Check {
                        holds: c.holds,
                        residual: c.residual,
                    },
                );
            };
            put("adjoint-symmetry", r.adjoint_symmetry);
            put("hermitian-adjoint", r.hermitian_adjoint);
            put("definition-vs-recursion", r.definition_vs_recursion);
            if let Some(c) = r.explicit_form {
                put("explicit-form", c);
            }
            put("transpose", r.transpose);
            put("conjugation", r.conjugation);
            put("factorization", r.factorization);
            let all_hold = r.all_hold();
            Ok(Outcome {
                payload: Payload::Identities(IdentityResult {
                    order: n,
                    checks,
                    all_hold,
                }),
                horizon: Some(image.horizon()),
                passed: all_hold,
            })
        }
        ScenarioKind::VerifyKernel => {
            let n = config.require_order()?;
            let z: T = config
                .z
                .as_ref()
                .ok_or_else(|| CliError::invalid("z", "required for verify-kernel"))?
                .parse()
                .ok_or_else(|| CliError::invalid("z", "not a valid scalar for this backend"))?;
            let tail: Vec<T> = match &config.tail {
                Some(values) => values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v.parse().ok_or_else(|| CliError::invalid(&format!("tail[{i}]"), "not a scalar")))
                    .collect::<Result<_, _>>()?,
                None => (1..=window as i64).map(T::from_i64).collect(),
            };
            let r = verify_kernel_basis(&alpha, &z, n, window, &tail, &tol).map_err(err)?;
            let nums = |v: &[T]| v.iter().map(Num::from_scalar).collect::<Vec<_>>();
            let all_pass = r.all_pass();
            Ok(Outcome {
                horizon: Some(r.cascade_rows),
                passed: all_pass,
                payload: Payload::Kernel(KernelResult {
                    order: n,
                    z: Num::from_scalar(&z),
                    cascade: r.cascade,
                    cascade_rows: r.cascade_rows,
                    band: r.band,
                    band_ok: r.band_ok,
                    gamma: nums(&r.gamma),
                    gamma_expected: nums(&r.gamma_expected),
                    gamma_ok: r.gamma_ok,
                    gamma_nonzero: r.gamma_nonzero,
                    delta: nums(&r.delta),
                    delta_expected: nums(&r.delta_expected),
                    delta_ok: r.delta_ok,
                    all_pass,
                }),
            })
        }
        ScenarioKind::Reconstruct => {
            let r = config
                .max_order
                .ok_or_else(|| CliError::invalid("max_order", "required for reconstruct"))?;
            let pair = build_cmv(&alpha, window).map_err(err)?;
            let omega = build_omega(config.omega.as_ref().unwrap_or(&OmegaConfig::Lebesgue), &pair)?;
            let d = reconstruct_operator(&alpha, &omega, r, window, &tol).map_err(err)?;
            // compare on the rows the fit could see
            let size = omega.horizon().min(window) / 2;
            let forward = operator_matrix(&alpha, &d, size, &tol).map_err(err)?;
            let scale = omega.max_magnitude().max(1.0);
            let round_trip = (0..size).all(|i| {
                (0..size).all(|j| (forward.get(i, j) - omega.get(i, j)).is_negligible(scale, tol.zero))
            });
            Ok(Outcome {
                horizon: Some(omega.horizon()),
                passed: round_trip,
                payload: Payload::Reconstruct(ReconstructResult {
                    order: d.order(),
                    coefficients: operator_terms(&d),
                    display: format!("{d:?}"),
                    round_trip,
                }),
            })
        }
        ScenarioKind::OlpDump => {
            let count = config
                .count
                .ok_or_else(|| CliError::invalid("count", "required for olp-dump"))?;
            let olp = compute_olp(&alpha, count);
            let oracle_agrees = if T::EXACT {
                Some(gram_schmidt_oracle(&alpha, count).map_err(err)? == olp)
            } else {
                None
            };
            Ok(Outcome {
                horizon: None,
                passed: oracle_agrees.unwrap_or(true),
                payload: Payload::Olp(OlpResult {
                    x: olp.x.iter().map(terms).collect(),
                    chi: olp.chi.iter().map(terms).collect(),
                    oracle_agrees,
                }),
            })
        }
    }
}

fn solve_typed<T: Scalar>(
    config: &ScenarioConfig,
    alpha: &VerblunskySeq<T>,
    window: usize,
    tol: &Tolerance,
) -> Result<(SolutionBasis<T>, usize, usize, usize), CliError> {
    let n = config.require_order()?;
    let pattern = config
        .pattern
        .as_ref()
        .ok_or_else(|| CliError::invalid("pattern", "required for solve"))?
        .build()?;
    let system = assemble_system(alpha, n, pattern, window).map_err(|e| lift(config, e))?;
    let basis = nullspace(&system, tol).map_err(|e| lift(config, e))?;
    Ok((basis, system.unknowns(), system.equations(), system.horizon))
}

fn run_solve<T: Scalar>(
    config: &ScenarioConfig,
    alpha: &VerblunskySeq<T>,
    window: usize,
    tol: &Tolerance,
) -> Result<Outcome, CliError> {
    let (sol, unknowns, equations, horizon) = solve_typed(config, alpha, window, tol)?;
    // float rank decisions are re-derived exactly whenever α has an exact form
    let cross_check = if T::EXACT {
        None
    } else {
        match config.verblunsky.build::<ExactComplex>() {
            Ok(exact_alpha) => {
                let (exact, ..) = solve_typed(config, &exact_alpha, window, tol)?;
                Some(CrossCheck {
                    exact_dimension: exact.dimension,
                    exact_classification: classification_name(exact.classification),
                    agrees: exact.dimension == sol.dimension && exact.classification == sol.classification,
                })
            }
            Err(_) => None,
        }
    };
    let passed = cross_check.as_ref().is_none_or(|c| c.agrees);
    Ok(Outcome {
        horizon: Some(horizon),
        passed,
        payload: Payload::Solve(SolveResult {
            dimension: sol.dimension,
            classification: classification_name(sol.classification),
            unknowns,
            equations,
            basis: sol.basis.iter().map(triplets).collect(),
            cross_check,
        }),
    })
}

fn build_omega<T: Scalar>(omega: &OmegaConfig, pair: &CmvPair<T>) -> Result<BandMatrix<T>, CliError> {
    let window = pair.window();
    Ok(match omega {
        OmegaConfig::Identity => BandMatrix::identity(window),
        OmegaConfig::Lebesgue => lebesgue_solution(window),
        OmegaConfig::CmvSum => pair.c.add(&pair.c.dagger()).expect("same window"),
        OmegaConfig::Diagonal { values } => {
            let mut d = values
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    v.parse::<T>()
                        .ok_or_else(|| CliError::invalid(&format!("omega.values[{i}]"), "not a valid scalar"))
                })
                .collect::<Result<Vec<T>, _>>()?;
            d.resize(window, T::zero());
            d.truncate(window);
            BandMatrix::from_diagonal(d)
        }
        OmegaConfig::Random { band, seed, hermitian } => {
            if *hermitian {
                BandMatrix::random_hermitian(window, *band, *seed)
            } else {
                BandMatrix::random(window, *band, *band, *seed)
            }
        }
    })
}
