//! The `fracweyl` command line.
//!
//! Exit codes: 0 success or pass, 1 a verified negative verdict, 2 invalid
//! input, 3 inconclusive within the given cutoffs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fractal::{
    self, fix_point, fractal_basis, lambdas_from_interpolation, orthonormalize, FixPointConfig, InterpolationSet,
    RbOperator, ScaleVector, SchemeContext,
};
use crate::ifs::{self, attractor_iterate, hausdorff_distance, hutchinson_apply, AttractorConfig, IteratedSystem, PointCloud};
use crate::partition::{self, PartitionScheme, PartitionSchemeJson};
use crate::sets::{q, IntervalUnion, PolyUnion, SetJson, Units};
use crate::wavelet::{
    self, construct_dilation_reflection, construct_nd, verify_dilation_reflection, verify_nd, ConstructConfig,
    DilationReflectionSpec, DrCutoffs, DrSet, ExpansiveMatrix, NdCutoffs, ReportJson,
};
use crate::weyl::{rank2_catalog, tessellate, CatalogDump, Region};

/// Environment variable capping attractor point clouds.
pub const MAX_POINTS_ENV: &str = "FRACWEYL_MAX_POINTS";

#[derive(Debug, Parser)]
#[command(name = "fracweyl", version, about = "Fractal interpolation, affine Weyl groups and wavelet sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

/// Overrides shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct RunConfig {
    /// Tolerance (target bound, defect tolerance or epsilon, by command).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Iteration or quadrature depth.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Dilation exponent window `|k| ≤ cutoff`.
    #[arg(long, global = true)]
    pub cutoff: Option<u32>,
    /// Maximal Weyl word length.
    #[arg(long, global = true)]
    pub max_words: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file for point clouds, meshes and sets.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

const MAX_DEPTH: usize = 14;
const MAX_CUTOFF: u32 = 256;
const MAX_WORDS: usize = 40;

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tol {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::InvalidInput("--tol must be positive".into()));
            }
        }
        if self.depth.is_some_and(|d| d > MAX_DEPTH) {
            return Err(Error::InvalidInput(format!("--depth is capped at {MAX_DEPTH}")));
        }
        if self.cutoff.is_some_and(|c| c == 0 || c > MAX_CUTOFF) {
            return Err(Error::InvalidInput(format!("--cutoff must lie in 1..={MAX_CUTOFF}")));
        }
        if self.max_words.is_some_and(|w| w > MAX_WORDS) {
            return Err(Error::InvalidInput(format!("--max-words is capped at {MAX_WORDS}")));
        }
        Ok(())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Approximate the attractor of an iterated function system.
    Attractor {
        /// Fixture name (cantor, sierpinski, example2) or a JSON system file.
        system: String,
    },
    /// Fractal interpolation surface over a partition scheme.
    Surface {
        /// Fixture name (example2, interval) or a JSON scheme file.
        scheme: String,
        /// Interpolation values; three interior values for example2,
        /// otherwise one per vertex.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        z: Vec<f64>,
        /// Uniform vertical scaling factor.
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
    },
    /// Fractal basis, Gram matrix and orthonormal coefficients.
    Basis {
        scheme: String,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
    },
    /// Root system catalog entry.
    Rootsys { name: String },
    /// Alcoves of an affine Weyl group meeting a ball.
    Tessellate {
        name: String,
        #[arg(long, default_value_t = 3.0)]
        radius: f64,
        /// Random points for the fold idempotence check.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Wavelet set checks and constructions.
    Waveletset {
        #[command(subcommand)]
        action: WaveletCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum WaveletCommand {
    /// Check a set given as JSON (line or plane).
    Verify {
        set: PathBuf,
        /// Planar dilation matrix, row-major, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        matrix: Vec<f64>,
        /// Planar region radius.
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
    },
    /// Exchange construction of an approximate wavelet set.
    Construct {
        #[arg(long)]
        epsilon: f64,
        /// Seed set JSON on the line; `[0, 2π)` when absent.
        #[arg(long)]
        from: Option<PathBuf>,
        /// 1 for the line, 2 for the plane.
        #[arg(long, default_value_t = 1)]
        dim: u32,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        matrix: Vec<f64>,
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
    },
    /// The Shannon set, its report and samples of its wavelet.
    Shannon {
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Check a dilation-reflection wavelet set.
    VerifyDr {
        set: PathBuf,
        #[command(flatten)]
        spec: DrArgs,
    },
    /// Construct a dilation-reflection wavelet set.
    ConstructDr {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        from: Option<PathBuf>,
        #[command(flatten)]
        spec: DrArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct DrArgs {
    /// Catalog name of the affine Weyl group.
    #[arg(long, default_value = "A1")]
    pub root: String,
    /// Interior point; the barycenter when absent.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Vec<f64>,
    /// Scalar dilation factor, or a row-major matrix.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "2")]
    pub dilation: Vec<f64>,
    #[arg(long, default_value_t = 20.0)]
    pub radius: f64,
}

/// Maps an error to its exit code.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::RankDeficient(_) => 1,
        Error::Inconclusive(_)
        | Error::ResourceLimit(_)
        | Error::NotClosedWithinCap(_)
        | Error::FoldDiverged(_)
        | Error::ConstructionStalled { .. } => 3,
        _ => 2,
    }
}

/// Parses the process arguments, runs, and returns the exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            error_exit_code(&e)
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(value)?;
    writeln!(out, "{s}")?;
    Ok(())
}

fn write_file(path: &Path, f: impl FnOnce(&mut fs::File) -> Result<()>) -> Result<()> {
    let mut file = fs::File::create(path)?;
    f(&mut file)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn is_file(arg: &str) -> bool {
    arg.ends_with(".json") || Path::new(arg).is_file()
}

fn load_system(arg: &str) -> Result<IteratedSystem> {
    if is_file(arg) {
        IteratedSystem::from_spec(&read_json(Path::new(arg))?)
    } else {
        ifs::fixtures::by_name(arg)
    }
}

fn load_scheme(arg: &str) -> Result<PartitionScheme> {
    if is_file(arg) {
        let j: PartitionSchemeJson = read_json(Path::new(arg))?;
        PartitionScheme::from_json(&j)
    } else {
        partition::fixtures::by_name(arg)
    }
}

fn max_points() -> Result<usize> {
    match std::env::var(MAX_POINTS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Error::InvalidInput(format!("{MAX_POINTS_ENV} must be a positive integer"))),
        Err(_) => Ok(ifs::DEFAULT_MAX_POINTS),
    }
}

/// Runs a parsed command, writing the report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let cfg = &cli.config;
    cfg.validate()?;
    match &cli.command {
        Command::Attractor { system } => cmd_attractor(cfg, system, out),
        Command::Surface { scheme, z, s } => cmd_surface(cfg, scheme, z, *s, out),
        Command::Basis { scheme, s } => cmd_basis(cfg, scheme, *s, out),
        Command::Rootsys { name } => {
            emit(out, &CatalogDump::new(&rank2_catalog(name)?)?)?;
            Ok(0)
        }
        Command::Tessellate { name, radius, samples } => cmd_tessellate(cfg, name, *radius, *samples, out),
        Command::Waveletset { action } => cmd_waveletset(cfg, action, out),
    }
}

fn cmd_attractor(cfg: &RunConfig, system: &str, out: &mut dyn Write) -> Result<i32> {
    let sys = load_system(system)?;
    if !sys.is_contractive() {
        return Err(Error::NotContractive(sys.contraction()));
    }
    let tol = cfg.tol.unwrap_or(1e-6);
    let config = AttractorConfig { max_points: max_points()?, ..AttractorConfig::default() };
    // merged points cost at most dedup/(1−c), a quarter of the target
    let dedup = tol * (1.0 - sys.contraction()) / 4.0;
    let seed = PointCloud::new(sys.dim(), &[vec![0.0; sys.dim()]], dedup)?;
    let approx = attractor_iterate(&sys, &seed, tol, config)?;
    let residual = hausdorff_distance(&hutchinson_apply(&sys, &approx.cloud)?, &approx.cloud)?;
    if let Some(path) = &cfg.out {
        write_file(path, |f| approx.cloud.write_csv(f))?;
    }
    emit(
        out,
        &json!({
            "system": system,
            "dim": sys.dim(),
            "maps": sys.maps().len(),
            "contraction": sys.contraction(),
            "iterations": approx.iterations,
            "points": approx.cloud.len(),
            "certified_bound": approx.certified_bound,
            "dedup_slack": approx.dedup_slack,
            "residual": residual,
        }),
    )?;
    Ok(0)
}

fn surface_values(ctx: &SchemeContext, scheme: &str, z: &[f64]) -> Result<InterpolationSet> {
    if matches!(scheme, "example2" | "four-cell") && z.len() == 3 {
        return fractal::fixtures::four_cell_values(ctx, [z[0], z[1], z[2]]);
    }
    InterpolationSet::new(&ctx.labelling, z.to_vec())
}

fn cmd_surface(cfg: &RunConfig, scheme: &str, z: &[f64], s: f64, out: &mut dyn Write) -> Result<i32> {
    if !(s.abs() < 1.0) {
        return Err(Error::InvalidInput(format!("scaling factor {s} must satisfy |s| < 1")));
    }
    let ctx = SchemeContext::new(load_scheme(scheme)?)?;
    let values = surface_values(&ctx, scheme, z)?;
    let scales = ScaleVector::uniform(ctx.n_cells(), s);
    let lambdas = lambdas_from_interpolation(&ctx, &values, &scales)?;
    let mut config = FixPointConfig::default();
    if let Some(d) = cfg.depth {
        config = config.with_grid_depth(d);
    }
    if let Some(t) = cfg.tol {
        config.tol = t;
    }
    let f = fix_point(RbOperator::new(ctx.clone(), lambdas, scales)?, &config)?;
    let mismatch = (0..values.values.len())
        .map(|v| (f.vertex_value(v) - values.values[v]).abs())
        .fold(0.0, f64::max);
    if let Some(path) = &cfg.out {
        let csv = path.extension().is_some_and(|e| e == "csv") || ctx.dim() != 2;
        write_file(path, |file| if csv { fractal::write_csv(&f, file) } else { fractal::write_obj(&f, file) })?;
    }
    emit(
        out,
        &json!({
            "scheme": scheme,
            "s": s,
            "grid_depth": config.grid_depth,
            "grid_points": f.grid.len(),
            "grid_residual": f.grid_residual,
            "iterations": f.iterations,
            "vertex_values": values.values,
            "max_vertex_mismatch": mismatch,
        }),
    )?;
    Ok(0)
}

fn cmd_basis(cfg: &RunConfig, scheme: &str, s: f64, out: &mut dyn Write) -> Result<i32> {
    if !(s.abs() < 1.0) {
        return Err(Error::InvalidInput(format!("scaling factor {s} must satisfy |s| < 1")));
    }
    let ctx = SchemeContext::new(load_scheme(scheme)?)?;
    let scales = ScaleVector::uniform(ctx.n_cells(), s);
    let basis = fractal_basis(&ctx, &scales, &FixPointConfig::default())?;
    let onb = orthonormalize(&basis, cfg.depth.unwrap_or(8))?;
    emit(out, &onb)?;
    let tol = cfg.tol.unwrap_or(1e-6);
    Ok(if onb.deviation <= tol { 0 } else { 1 })
}

fn cmd_tessellate(cfg: &RunConfig, name: &str, radius: f64, samples: usize, out: &mut dyn Write) -> Result<i32> {
    let weyl = rank2_catalog(name)?;
    let region = Region::ball(weyl.dim(), radius);
    let t = tessellate(&weyl, &region, cfg.max_words.unwrap_or(8))?;
    let cell = weyl.alcove.volume();
    let overlap = t.max_relative_overlap(cell);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(0));
    let mut fold_defect: f64 = 0.0;
    for _ in 0..samples {
        let x: Vec<f64> = (0..weyl.dim()).map(|_| rng.random_range(-radius..radius)).collect();
        let (y, _) = weyl.fold(&x)?;
        let (z, w) = weyl.fold(&y)?;
        let d = y.iter().zip(&z).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        fold_defect = fold_defect.max(d).max(if w.is_empty() { 0.0 } else { f64::INFINITY });
    }
    if let Some(path) = &cfg.out {
        write_file(path, |f| t.write_csv(f))?;
    }
    let relative_uncovered = t.uncovered / t.region_volume;
    emit(
        out,
        &json!({
            "name": name,
            "radius": radius,
            "cells": t.cells.len(),
            "words_enumerated": t.words_enumerated,
            "region_volume": t.region_volume,
            "uncovered": t.uncovered,
            "relative_uncovered": relative_uncovered,
            "max_relative_overlap": overlap,
            "fold_samples": samples,
            "fold_defect": fold_defect,
        }),
    )?;
    let tol = cfg.tol.unwrap_or(1e-6);
    Ok(if fold_defect > 1e-9 || overlap > 1e-9 {
        1
    } else if relative_uncovered > tol {
        3
    } else {
        0
    })
}

fn load_set(path: &Path) -> Result<SetJson> {
    read_json(path)
}

fn planar_matrix(entries: &[f64]) -> Result<ExpansiveMatrix> {
    match entries.len() {
        0 => ExpansiveMatrix::scalar(2, 2.0),
        1 => ExpansiveMatrix::scalar(2, entries[0]),
        4 => ExpansiveMatrix::from_rows(&[entries[0..2].to_vec(), entries[2..4].to_vec()]),
        _ => Err(Error::InvalidInput("a planar matrix has one or four entries".into())),
    }
}

fn nd_cutoffs(cfg: &RunConfig, radius: f64) -> NdCutoffs {
    let d = NdCutoffs::default();
    NdCutoffs { window: cfg.cutoff.unwrap_or(d.window), region_radius: radius, tol: cfg.tol.unwrap_or(d.tol), ..d }
}

fn report_out(out: &mut dyn Write, report: &ReportJson, extra: Option<serde_json::Value>) -> Result<i32> {
    let mut v = serde_json::to_value(report)?;
    if let (Some(obj), Some(serde_json::Value::Object(more))) = (v.as_object_mut(), extra) {
        obj.extend(more);
    }
    emit(out, &v)?;
    Ok(report.verdict.exit_code())
}

fn dr_spec(args: &DrArgs) -> Result<DilationReflectionSpec> {
    let weyl = rank2_catalog(&args.root)?;
    let n = weyl.dim();
    let a = match args.dilation.len() {
        1 => ExpansiveMatrix::scalar(n, args.dilation[0])?,
        k if k == n * n => {
            ExpansiveMatrix::from_rows(&args.dilation.chunks(n).map(|r| r.to_vec()).collect::<Vec<_>>())?
        }
        _ => return Err(Error::InvalidInput("dilation has the wrong number of entries".into())),
    };
    let theta = if args.theta.is_empty() { None } else { Some(args.theta.clone()) };
    DilationReflectionSpec::new(weyl, theta, a)
}

fn dr_cutoffs(cfg: &RunConfig, radius: f64) -> DrCutoffs {
    let d = DrCutoffs::default();
    DrCutoffs {
        window: cfg.cutoff.unwrap_or(d.window),
        max_word_len: cfg.max_words.unwrap_or(d.max_word_len),
        region_radius: radius,
        tol: cfg.tol.unwrap_or(d.tol),
    }
}

fn save_set(cfg: &RunConfig, set: &SetJson) -> Result<()> {
    if let Some(path) = &cfg.out {
        let s = serde_json::to_string_pretty(set)?;
        fs::write(path, s + "\n")?;
    }
    Ok(())
}

fn cmd_waveletset(cfg: &RunConfig, action: &WaveletCommand, out: &mut dyn Write) -> Result<i32> {
    match action {
        WaveletCommand::Verify { set, matrix, radius } => {
            let j = load_set(set)?;
            match j.space {
                1 => {
                    let e = IntervalUnion::from_json(&j)?;
                    let r = wavelet::verify_1d(&e, cfg.cutoff.unwrap_or(ConstructConfig::default().window))?;
                    report_out(out, &r.to_json(), None)
                }
                2 => {
                    let e = PolyUnion::from_json(&j)?;
                    let r = verify_nd(&e, &planar_matrix(matrix)?, &nd_cutoffs(cfg, *radius))?;
                    report_out(out, &r.to_json(), None)
                }
                n => Err(Error::InvalidInput(format!("unsupported space dimension {n}"))),
            }
        }
        WaveletCommand::Construct { epsilon, from, dim, matrix, radius } => match dim {
            1 => {
                let seed = match from {
                    Some(p) => IntervalUnion::from_json(&load_set(p)?)?,
                    None => IntervalUnion::interval(q(0), q(2), Units::Pi),
                };
                let mut config = ConstructConfig::default();
                if let Some(c) = cfg.cutoff {
                    config.window = c;
                }
                let c = wavelet::construct_1d(*epsilon, &seed, &config)?;
                save_set(cfg, &c.set.to_json())?;
                let extra = json!({ "rounds": c.rounds, "round_defects": c.defects, "set": c.set.to_json() });
                report_out(out, &c.report.to_json(), Some(extra))?;
                Ok(0)
            }
            2 => {
                let c = construct_nd(&planar_matrix(matrix)?, *epsilon, &nd_cutoffs(cfg, *radius), 32)?;
                save_set(cfg, &c.set.to_json())?;
                let extra = json!({ "rounds": c.rounds, "round_defects": c.defects, "pieces": c.set.components() });
                report_out(out, &c.report.to_json(), Some(extra))
            }
            n => Err(Error::InvalidInput(format!("unsupported dimension {n}"))),
        },
        WaveletCommand::Shannon { samples } => {
            let e = wavelet::shannon_set();
            let r = wavelet::verify_1d(&e, cfg.cutoff.unwrap_or(ConstructConfig::default().window))?;
            if let Some(path) = &cfg.out {
                let n = (*samples).max(2);
                write_file(path, |f| {
                    writeln!(f, "t,psi")?;
                    for i in 0..n {
                        let t = -10.0 + 20.0 * i as f64 / (n - 1) as f64;
                        writeln!(f, "{t:.16e},{:.16e}", wavelet::shannon_psi(t))?;
                    }
                    Ok(())
                })?;
            }
            report_out(out, &r.to_json(), Some(json!({ "set": e.to_json(), "measure_over_pi": "2" })))
        }
        WaveletCommand::VerifyDr { set, spec } => {
            let s = dr_spec(spec)?;
            let e = DrSet::from_json(&load_set(set)?)?;
            let r = verify_dilation_reflection(&e, &s, &dr_cutoffs(cfg, spec.radius))?;
            report_out(out, &r.to_json(), Some(json!({ "theta": s.theta })))
        }
        WaveletCommand::ConstructDr { epsilon, from, spec } => {
            let s = dr_spec(spec)?;
            let seed = from.as_deref().map(|p| load_set(p).and_then(|j| DrSet::from_json(&j))).transpose()?;
            let c = construct_dilation_reflection(&s, *epsilon, seed.as_ref(), &dr_cutoffs(cfg, spec.radius), 32)?;
            save_set(cfg, &c.set.to_json())?;
            let extra = json!({
                "theta": s.theta,
                "rounds": c.rounds,
                "round_defects": c.defects,
                "set": c.set.to_json(),
            });
            report_out(out, &c.report.to_json(), Some(extra))
        }
    }
}

/// Runs the command line given as a list of arguments (without the program
/// name) and captures the report.
pub fn run_args(args: &[&str]) -> (i32, String) {
    let argv = std::iter::once("fracweyl").chain(args.iter().copied());
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => return (if e.use_stderr() { 2 } else { 0 }, e.to_string()),
    };
    let mut buf = Vec::new();
    let code = match run(&cli, &mut buf) {
        Ok(c) => c,
        Err(e) => error_exit_code(&e),
    };
    (code, String::from_utf8_lossy(&buf).into_owned())
}
