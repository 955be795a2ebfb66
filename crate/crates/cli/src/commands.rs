//! Subcommand implementations. Each returns the exit code on success paths
//! and a [`CliError`] carrying the code otherwise.

use std::fs;
use std::io::Write;
use std::path::Path;

use fixrate::mapping::{resolve, CatalogEntry};
use fixrate::space::verify_convexity_axioms;
use fixrate::{
    bound_sequence, berinde_compare, check_bound_dominance, classify_mapping, lambda_of, run_algorithm, AlgorithmKind,
    BoundKind, ClassParams, CompareOptions, ContractiveMapping, MappingClass, ModelTag, Point, RunOptions, Schedule,
    Schedules, SpaceModel, Termination, ZamfirescuParams,
};
use fixrate::rate::error_ratios;

use crate::config::{parse_config, ExperimentConfig};
use crate::format::{csv_writer, fmt_float};
use crate::{
    BoundsArgs, ClassifyArgs, CliError, CompareArgs, CompareMode, RunArgs, VerifySpaceArgs, EXIT_DOMINANCE, EXIT_FAILED,
    EXIT_HYPOTHESIS, EXIT_LAMBDA, EXIT_OK,
};

type Res = Result<i32, CliError>;

/// Grid size (per axis) used to certify a mapping before trusting a
/// dominance failure.
pub fn default_grid(dim: usize) -> usize {
    if dim == 1 {
        fixrate::mapping::CERTIFICATE_GRID
    } else {
        17
    }
}

fn point_text(p: &Point<f64>) -> String {
    let c: Vec<String> = p.coords().iter().map(|&v| fmt_float(v)).collect();
    format!("({})", c.join(" "))
}

pub fn verify_space(a: &VerifySpaceArgs, out: &mut dyn Write) -> Res {
    let model: ModelTag = a.model.parse().map_err(|_| CliError::usage(format!("unknown model: {}", a.model)))?;
    let dim = a.dim.unwrap_or(2);
    let space = SpaceModel::<f64>::new(model, dim)?;
    let tol = a.tol.unwrap_or(match model {
        ModelTag::Euclidean => 1e-9,
        ModelTag::Halfplane => 1e-7,
    });
    let report = verify_convexity_axioms(&space, a.samples, a.seed, tol)?;
    writeln!(out, "model={model} dim={dim} samples={} seed={} tol={}", a.samples, a.seed, fmt_float(tol))?;
    for (i, r) in report.residuals.iter().enumerate() {
        let status = if report.axiom_passed(i) { "pass" } else { "fail" };
        writeln!(out, "W{} max_residual={} {status}", i + 1, fmt_float(*r))?;
    }
    let passed = report.passed();
    writeln!(out, "result={}", if passed { "pass" } else { "fail" })?;
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

fn parse_abc(text: &str) -> Result<ZamfirescuParams<f64>, CliError> {
    let v: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::usage(format!("--abc expects three numbers a,b,c (got '{text}')")))?;
    match v.as_slice() {
        &[a, b, c] => Ok(ZamfirescuParams::new(a, b, c)?),
        _ => Err(CliError::usage(format!("--abc expects three numbers a,b,c (got '{text}')"))),
    }
}

pub fn classify(a: &ClassifyArgs, out: &mut dyn Write) -> Res {
    let target: MappingClass = a.class.parse()?;
    let m = resolve::<f64>(&a.mapping)?.mapping;
    let grid = a.grid.unwrap_or_else(|| default_grid(m.space().dim()));
    let mut params = match a.h {
        Some(h) => ClassParams::with_h(h)?,
        None => ClassParams::default(),
    };
    if let Some(abc) = &a.abc {
        params.zamfirescu = Some(parse_abc(abc)?);
    }
    let report = classify_mapping(&m, grid, &params)?;
    writeln!(out, "mapping={} grid_points={} pairs={}", m.name(), report.grid_points, report.pair_count)?;
    for e in &report.entries {
        let status = match e.holds {
            Some(true) => "holds",
            Some(false) => "fails",
            None => "unchecked",
        };
        let worst = e.worst_pair.as_ref().map(|(x, y)| format!("{} {}", point_text(x), point_text(y))).unwrap_or_default();
        writeln!(
            out,
            "{}: {status} min_h={} violations={} worst_pair={worst}",
            e.class,
            fmt_float(e.min_param),
            e.violations
        )?;
    }
    match report.holds(target) {
        Some(true) => Ok(EXIT_OK),
        Some(false) => Ok(EXIT_FAILED),
        None => Err(CliError::usage(format!("{target} needs --abc to be checked"))),
    }
}

fn read_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// Everything a run needs once the configuration has been resolved.
struct Prepared {
    cfg: ExperimentConfig,
    mapping: ContractiveMapping<f64>,
    schedules: Schedules<f64>,
    x0: Point<f64>,
    p: Point<f64>,
    lambda: f64,
}

fn usable_lambda(m: &ContractiveMapping<f64>) -> Result<f64, CliError> {
    let l = m
        .lambda()
        .ok_or_else(|| CliError::usage(format!("mapping {} has no class parameter h", m.name())))??;
    if !l.usable {
        return Err(CliError {
            code: EXIT_LAMBDA,
            message: format!(
                "lambda = {} >= 1 (h = {}): rate machinery requires h < 1/2",
                fmt_float(l.value),
                fmt_float(m.params().h.unwrap_or(f64::NAN))
            ),
        });
    }
    Ok(l.value)
}

fn prepare(cfg: ExperimentConfig) -> Result<Prepared, CliError> {
    let CatalogEntry { mapping, .. } = resolve::<f64>(&cfg.mapping.name)?;
    let space = SpaceModel::<f64>::new(cfg.space.model, cfg.space.dim)?.with_tolerance(cfg.space.tolerance)?;
    let x0 = space.point(cfg.run.x0.clone())?;
    if !mapping.domain().contains(&x0) {
        return Err(CliError::usage(format!("x0 = {} lies outside the domain of {}", point_text(&x0), mapping.name())));
    }
    let p = match &cfg.mapping.fixed_point {
        Some(c) => space.point(c.clone())?,
        None => mapping.fixed_point().cloned().ok_or_else(|| CliError::usage("no fixed point known; set [mapping] fixed_point"))?,
    };
    let lambda = usable_lambda(&mapping)?;
    let schedules = Schedules { alpha: cfg.algorithm.alpha, beta: cfg.algorithm.beta, gamma: cfg.algorithm.gamma };
    Ok(Prepared { cfg, mapping, schedules, x0, p, lambda })
}

fn grid_verified(m: &ContractiveMapping<f64>) -> Result<bool, CliError> {
    let grid = default_grid(m.space().dim());
    if m.check_self_map(grid)?.is_some() {
        return Ok(false);
    }
    let report = classify_mapping(m, grid, m.params())?;
    Ok(report.holds(MappingClass::GeneralizedCq) == Some(true))
}

pub fn run(a: &RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Res {
    let pr = prepare(read_config(&a.config)?)?;
    let kind = pr.cfg.algorithm.kind;
    let bound_kind = match &a.bound {
        Some(b) => b.parse::<BoundKind>()?,
        None => BoundKind::for_algorithm(kind),
    };
    if bound_kind.algorithm() != kind {
        return Err(CliError::usage(format!("bound {bound_kind} does not describe the {kind} iteration")));
    }

    let opts = RunOptions { max_iter: pr.cfg.run.max_iter, tol: pr.cfg.run.tol, record_transients: pr.cfg.run.verbosity > 0 };
    let traj = run_algorithm(kind, &pr.mapping, &pr.x0, &pr.schedules, &pr.p, opts)?;
    let steps = traj.iterations();
    let bound = bound_sequence(bound_kind, pr.lambda, traj.distances[0], &pr.schedules, steps)?;

    let mut w = csv_writer(fs::File::create(&a.out)?);
    w.write_record(["n", "distance", "bound", "certifying"])?;
    for (n, (d, b)) in traj.distances.iter().zip(&bound.values).enumerate() {
        w.write_record([n.to_string(), fmt_float(*d), fmt_float(*b), bound.certifying.to_string()])?;
    }
    w.flush()?;

    if let Some(tr) = &traj.transients {
        for (n, (y, z)) in tr.iter().enumerate() {
            let show = |p: &Option<Point<f64>>| p.as_ref().map(point_text).unwrap_or_else(|| "-".into());
            writeln!(out, "step={n} y={} z={}", show(y), show(z))?;
        }
    }
    let termination = match traj.termination {
        Termination::ToleranceReached => "tolerance",
        Termination::MaxIterations => "max_iter",
    };
    writeln!(
        out,
        "algorithm={kind} mapping={} lambda={} bound={bound_kind} certifying={}",
        pr.mapping.name(),
        fmt_float(pr.lambda),
        bound.certifying
    )?;
    writeln!(
        out,
        "iterations={steps} termination={termination} final_distance={}",
        fmt_float(*traj.distances.last().expect("trajectory has x0"))
    )?;

    if !bound.certifying {
        writeln!(err, "notice: bound {bound_kind} is non-certifying (a factor leaves [0, 1]); dominance check skipped")?;
        writeln!(out, "dominance=skipped")?;
        return Ok(EXIT_OK);
    }
    let excess = check_bound_dominance(&traj, &bound)?;
    let limit = 1e-10 * bound.d0;
    writeln!(out, "dominance max_excess={}", fmt_float(excess))?;
    if excess > limit {
        if grid_verified(&pr.mapping)? {
            return Err(CliError {
                code: EXIT_DOMINANCE,
                message: format!("bound {bound_kind} violated by {} (allowed {})", fmt_float(excess), fmt_float(limit)),
            });
        }
        writeln!(err, "warning: bound exceeded by {}, but the mapping is not grid-verified", fmt_float(excess))?;
    }
    Ok(EXIT_OK)
}

fn hypotheses(a: &ExperimentConfig, b: &ExperimentConfig) -> Result<(), CliError> {
    let what = if a.space != b.space {
        Some("space")
    } else if a.mapping.name != b.mapping.name {
        Some("mapping")
    } else if a.run.x0 != b.run.x0 {
        Some("x0")
    } else if a.mapping.fixed_point != b.mapping.fixed_point {
        Some("fixed point")
    } else {
        None
    };
    match what {
        Some(w) => Err(CliError {
            code: EXIT_HYPOTHESIS,
            message: format!("theorem hypotheses require same initial guess, mapping, space and fixed point ({w} differs)"),
        }),
        None => Ok(()),
    }
}

fn envelope(pr: &Prepared, xunoor: BoundKind, d0: f64, n: usize) -> Result<Vec<f64>, CliError> {
    let kind = match pr.cfg.algorithm.kind {
        AlgorithmKind::XuNoor => xunoor,
        k => BoundKind::for_algorithm(k),
    };
    Ok(bound_sequence(kind, pr.lambda, d0, &pr.schedules, n)?.values)
}

fn empirical(pr: &Prepared, n: usize) -> Result<Vec<f64>, CliError> {
    let opts = RunOptions { max_iter: n, tol: f64::MIN_POSITIVE, record_transients: false };
    let mut d = run_algorithm(pr.cfg.algorithm.kind, &pr.mapping, &pr.x0, &pr.schedules, &pr.p, opts)?.distances;
    d.resize(n + 1, 0.0);
    Ok(d)
}

pub fn compare(a: &CompareArgs, out: &mut dyn Write) -> Res {
    let (ca, cb) = (read_config(&a.a)?, read_config(&a.b)?);
    hypotheses(&ca, &cb)?;
    let xunoor: BoundKind = a.xunoor_bound.parse()?;
    if xunoor.algorithm() != AlgorithmKind::XuNoor {
        return Err(CliError::usage(format!("--xunoor-bound must be a Xu-Noor envelope (got {xunoor})")));
    }
    if a.n == 0 {
        return Err(CliError::usage("--n must be positive"));
    }
    let (pa, pb) = (prepare(ca)?, prepare(cb)?);
    let (sa, sb) = match a.mode {
        CompareMode::Bounds => {
            let d0 = pa.mapping.space().distance(&pa.x0, &pa.p)?;
            (envelope(&pa, xunoor, d0, a.n)?, envelope(&pb, xunoor, d0, a.n)?)
        }
        CompareMode::Empirical => (empirical(&pa, a.n)?, empirical(&pb, a.n)?),
    };
    let ratios = error_ratios(&sa, &sb, (0.0, 0.0));
    let mut w = csv_writer(fs::File::create(&a.out)?);
    w.write_record(["n", "a", "b", "ratio"])?;
    for (n, ((x, y), r)) in sa.iter().zip(&sb).zip(&ratios).enumerate() {
        w.write_record([n.to_string(), fmt_float(*x), fmt_float(*y), fmt_float(*r)])?;
    }
    w.flush()?;
    let v = berinde_compare(&sa, &sb, (0.0, 0.0), &CompareOptions::default())?;
    writeln!(out, "tail=[{}, {})", v.tail_start, v.tail_end)?;
    writeln!(out, "verdict={} l_estimate={}", v.verdict, fmt_float(v.limit))?;
    Ok(EXIT_OK)
}

fn schedule_arg(s: &Option<String>) -> Result<Option<Schedule<f64>>, CliError> {
    s.as_deref().map(str::parse).transpose().map_err(CliError::from)
}

pub fn bounds(a: &BoundsArgs, out: &mut dyn Write, err: &mut dyn Write) -> Res {
    let kind: BoundKind = a.kind.parse()?;
    let lambda = match (a.lambda, a.h) {
        (Some(l), _) => l,
        (None, Some(h)) => {
            let l = lambda_of(h)?;
            if !l.usable {
                return Err(CliError {
                    code: EXIT_LAMBDA,
                    message: format!("lambda = {} >= 1: rate machinery requires h < 1/2", fmt_float(l.value)),
                });
            }
            l.value
        }
        (None, None) => return Err(CliError::usage("one of --lambda or --h is required")),
    };
    let schedules = Schedules { alpha: schedule_arg(&a.alpha)?, beta: schedule_arg(&a.beta)?, gamma: schedule_arg(&a.gamma)? };
    let b = bound_sequence(kind, lambda, a.d0, &schedules, a.n)?;
    let mut buf = Vec::new();
    {
        let mut w = csv_writer(&mut buf);
        w.write_record(["n", "bound"])?;
        for (n, v) in b.values.iter().enumerate() {
            w.write_record([n.to_string(), fmt_float(*v)])?;
        }
        w.flush()?;
    }
    match &a.out {
        Some(path) => fs::write(path, &buf)?,
        None => out.write_all(&buf)?,
    }
    writeln!(err, "certifying={}", b.certifying)?;
    Ok(EXIT_OK)
}
