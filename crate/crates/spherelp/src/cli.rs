//! Command-line surface.
//!
//! Exit codes: 0 when every check passes, 1 on an analytic failure (a
//! certificate, membership or Poisson check that does not hold, or an LP
//! that is not optimal), 2 on usage errors and malformed input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use spherelp_core::auxfn::{CertificationReport, CertifyOptions};
use spherelp_core::bounds::{bound_from_series, sequence_bound, BoundKind, DensityBound};
use spherelp_core::simplex::LpStatus;
use spherelp_core::{constructions, lpsearch, periodization, CosineSeries, Lattice};

use crate::docs::{self, LatticeDoc, Meta, ProblemDoc, SeriesDoc, SolutionDoc};
use crate::parallel::{certify_parallel, default_jobs};
use crate::tables::{self, BoundRow};

#[derive(Debug, Parser)]
#[command(name = "spherelp", version, about = "Periodic auxiliary functions and sphere-packing density bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a named explicit series and write it as JSON.
    Construct(ConstructArgs),
    /// Check dual membership, periodicity and nonpositivity of a series.
    Verify(VerifyArgs),
    /// Density bounds from one or more series files.
    Bound(BoundArgs),
    /// Periodize a one-dimensional profile and compare against its spectrum.
    Periodize(PeriodizeArgs),
    /// Search for an auxiliary function by linear programming.
    Search(SearchArgs),
    /// Merge bound CSVs into a sequence summary and a plot data file.
    Report(ReportArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructArgs {
    /// `onedim`, `onedim:<m>`, `hex2` or `cubic3`.
    pub name: String,
    /// Scale for `onedim` (at least 3).
    #[arg(long)]
    pub m: Option<u32>,
    /// Series JSON output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CertifyFlags {
    /// Certification tolerance.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    /// Covering radius of the certification grid (default 1e-4 in one
    /// dimension, 2e-3 otherwise).
    #[arg(long = "grid")]
    pub h: Option<f64>,
    /// Worker threads for the grid sweep (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    pub series: PathBuf,
    #[command(flatten)]
    pub certify: CertifyFlags,
    /// Seed for the periodicity spot checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random periodicity spot checks.
    #[arg(long, default_value_t = 32)]
    pub spot_checks: usize,
    /// Write `x…,value` samples over the fundamental cell.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    pub dump_per_axis: usize,
    /// Write the certification report as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundArgs {
    #[arg(required = true)]
    pub series: Vec<PathBuf>,
    #[command(flatten)]
    pub certify: CertifyFlags,
    /// Skip certification and report the bounds as given.
    #[arg(long)]
    pub no_certify: bool,
    /// CSV output `n,m,sharp,delta,Delta,flag`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct PeriodizeArgs {
    /// `triangle` or `ce_h`.
    pub profile: String,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Largest spectral index kept in the truncated series.
    #[arg(long, default_value_t = 10_000)]
    pub max_index: u64,
    /// Random points in the Poisson comparison (plus the origin).
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scales for the sharp sequence (default: `--m`).
    #[arg(long, value_delimiter = ',')]
    pub ms: Vec<u32>,
    /// Truncated spectral series as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sharp sequence as CSV `n,m,sharp,delta,Delta,flag`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    /// `hex`, `cubic`, `z<n>` or a lattice JSON file.
    #[arg(long)]
    pub lattice: String,
    /// Scale (default 1 for names, the file's value for documents).
    #[arg(long)]
    pub m: Option<u32>,
    /// Frequency radius, or `auto`.
    #[arg(long, default_value = "auto")]
    pub max_freq: String,
    /// Constraint grid spacing.
    #[arg(long, default_value_t = 0.01)]
    pub grid: f64,
    /// Cutting-plane rounds.
    #[arg(long, default_value_t = 10)]
    pub rounds: u32,
    /// Certification tolerance inside the refinement loop.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    /// Certification covering radius (default: `--grid / 4`).
    #[arg(long)]
    pub cert_grid: Option<f64>,
    /// Solution JSON output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Final LP problem JSON output.
    #[arg(long)]
    pub problem_out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    /// Bound CSV files.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Summary CSV including the liminf rows.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// gnuplot data file with one `m sharp` block per dimension.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Construct(a) => construct(&a),
        Command::Verify(a) => verify(&a),
        Command::Bound(a) => bound(&a),
        Command::Periodize(a) => periodize(&a),
        Command::Search(a) => search(&a),
        Command::Report(a) => report(&a),
    }
}

fn sharp_line(sharp: f64) -> String {
    format!("sharp: {sharp:.6} ({sharp})")
}

/// Resolves a construction name to its label and series.
pub fn named_series(name: &str, m: Option<u32>) -> Result<(String, CosineSeries)> {
    let (base, inline_m) = match name.split_once(':') {
        Some((b, v)) => {
            let v: u32 = v.parse().with_context(|| format!("bad scale in {name:?}"))?;
            (b, Some(v))
        }
        None => (name, None),
    };
    if inline_m.is_some() && m.is_some() && inline_m != m {
        bail!("conflicting scales in {name:?} and --m");
    }
    let m = inline_m.or(m);
    match base {
        "onedim" => {
            let m = m.ok_or_else(|| anyhow!("onedim needs --m (at least 3)"))?;
            let c = constructions::one_dim_coeffs(m)?;
            Ok((format!("onedim:{m}"), c.series()))
        }
        "hex2" | "cubic3" => {
            let s = if base == "hex2" {
                constructions::hex_g2()
            } else {
                constructions::cubic_g3()
            };
            if let Some(m) = m {
                if m != s.lattice().scale() {
                    bail!("{base} is defined only at m = {}", s.lattice().scale());
                }
            }
            Ok((base.to_string(), s))
        }
        _ => bail!("unknown construction {name:?} (expected onedim, hex2 or cubic3)"),
    }
}

fn construct(a: &ConstructArgs) -> Result<Outcome> {
    let (label, series) = named_series(&a.name, a.m)?;
    let b = bound_from_series(&series, &label);
    println!("series: {label}");
    println!("terms: {}", series.terms().len());
    println!("{}", sharp_line(series.sharp()));
    print!("{}", b.report());
    if let Some(out) = &a.out {
        let meta = Meta::new("construct", a, None);
        docs::write_json(out, &SeriesDoc::from_series(&series, Some(&label), Some(meta)))?;
        println!("wrote {}", out.display());
    }
    Ok(Outcome::Pass)
}

fn report_json(r: &CertificationReport) -> serde_json::Value {
    serde_json::json!({
        "threshold": r.threshold,
        "spacing": r.spacing,
        "covering_radius": r.covering_radius,
        "lipschitz": r.lipschitz,
        "curvature": r.curvature,
        "max_sample": r.max_sample.is_finite().then_some(r.max_sample),
        "argmax": r.argmax,
        "region_max": r.region_max.is_finite().then_some(r.region_max),
        "region_argmax": r.region_argmax,
        "first_order_bound": r.first_order_bound.is_finite().then_some(r.first_order_bound),
        "second_order_bound": r.second_order_bound.is_finite().then_some(r.second_order_bound),
        "certified_bound": r.certified_bound.is_finite().then_some(r.certified_bound),
        "samples": r.samples,
        "kept": r.kept,
        "tolerance": r.tolerance,
        "pass": r.pass,
    })
}

fn print_certificate(r: &CertificationReport) {
    println!(
        "certificate: samples {} kept {} r {:.3e} max {:.6e} first-order {:.6e} second-order {:.6e}",
        r.samples, r.kept, r.covering_radius, r.max_sample, r.first_order_bound, r.second_order_bound
    );
    if let Some(x) = &r.argmax {
        println!("certificate argmax: {x:?}");
    }
    println!(
        "certificate: bound {:.6e} {} tol {:.1e}: {}",
        r.certified_bound,
        if r.pass { "<=" } else { ">" },
        r.tolerance,
        if r.pass { "pass" } else { "FAIL" }
    );
}

fn certify(series: &CosineSeries, flags: &CertifyFlags) -> Result<CertificationReport> {
    let h = flags.h.unwrap_or(if series.dim() == 1 { 1e-4 } else { 2e-3 });
    if !(flags.tol > 0.0) || !(h > 0.0) {
        bail!("--tol and --grid must be positive");
    }
    let jobs = flags.jobs.unwrap_or_else(default_jobs);
    Ok(certify_parallel(series, CertifyOptions::new(flags.tol, h), jobs)?)
}

/// Largest `|g(x) − g(x + v)|` over random `x` and small lattice vectors `v`.
pub fn periodicity_spot_checks(series: &CosineSeries, checks: usize, seed: u64) -> Result<f64> {
    let lattice = series.lattice();
    let n = lattice.dim();
    let gens = lattice.scaled_basis();
    let span = gens.iter().map(|v| spherelp_core::lattice::euclidean_norm(v)).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for i in 0..checks {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0) * span).collect();
        let mut v = vec![0.0; n];
        if i < n {
            v.clone_from(&gens[i]);
        } else {
            for g in &gens {
                let k = rng.gen_range(-3i32..=3) as f64;
                v.iter_mut().zip(g).for_each(|(a, b)| *a += k * b);
            }
        }
        worst = worst.max(series.periodicity_residual(&x, &v)?);
    }
    Ok(worst)
}

fn dump_samples(series: &CosineSeries, per_axis: usize, path: &Path, meta: &Meta) -> Result<()> {
    let lattice = series.lattice();
    let n = lattice.dim();
    if per_axis == 0 {
        bail!("--dump-per-axis must be positive");
    }
    let total = per_axis.checked_pow(n as u32).filter(|&t| t <= 10_000_000);
    let total = total.ok_or_else(|| anyhow!("sample dump too large"))?;
    let mut rows = Vec::with_capacity(total);
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        let y: Vec<f64> = idx.iter().map(|&k| (k as f64 + 0.5) / per_axis as f64).collect();
        let x = lattice.from_coefficients(&y);
        let v = series.evaluate(&x);
        rows.push((x, v));
        for k in idx.iter_mut() {
            *k += 1;
            if *k < per_axis {
                break;
            }
            *k = 0;
        }
    }
    tables::write_samples(path, meta, n, &rows)
}

fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let (doc, series) = docs::read_series(&a.series)?;
    let label = doc.name.clone().unwrap_or_else(|| a.series.display().to_string());
    println!("series: {label} (n = {}, m = {}, terms = {})", series.dim(), series.lattice().scale(), series.terms().len());
    let membership = series.verify_dual_membership();
    let worst_member = membership.residuals.iter().copied().fold(0.0, f64::max);
    println!(
        "membership: {} (max residual {:.3e})",
        if membership.ok { "ok" } else { "FAIL" },
        worst_member
    );
    let period = periodicity_spot_checks(&series, a.spot_checks, a.seed)?;
    let period_tol = 1e-9 * series.evaluate(&vec![0.0; series.dim()]).abs().max(1.0);
    let period_ok = period <= period_tol;
    println!(
        "periodicity: {} (max residual {:.3e} over {} checks)",
        if period_ok { "ok" } else { "FAIL" },
        period,
        a.spot_checks
    );
    let r = certify(&series, &a.certify)?;
    print_certificate(&r);
    let meta = Meta::new("verify", a, Some(a.seed));
    if let Some(path) = &a.report {
        let mut v = report_json(&r);
        v["membership_ok"] = membership.ok.into();
        v["periodicity_residual"] = period.into();
        v["meta"] = serde_json::to_value(&meta)?;
        docs::write_json(path, &v)?;
    }
    if let Some(path) = &a.dump {
        dump_samples(&series, a.dump_per_axis, path, &meta)?;
    }
    Ok(Outcome::from_pass(membership.ok && period_ok && r.pass))
}

fn bound(a: &BoundArgs) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut pass = true;
    for path in &a.series {
        let (doc, series) = docs::read_series(path)?;
        let label = doc.name.clone().unwrap_or_else(|| path.display().to_string());
        if !a.no_certify {
            let r = certify(&series, &a.certify)?;
            print_certificate(&r);
            if !r.pass || !series.verify_dual_membership().ok {
                println!("{label}: not certified; no bound");
                pass = false;
                continue;
            }
        }
        let b = bound_from_series(&series, &label);
        println!("{}", sharp_line(series.sharp()));
        print!("{}", b.report());
        rows.push(BoundRow::from_bound(&b, series.sharp()));
    }
    if let Some(csv) = &a.csv {
        tables::write_bounds(csv, &Meta::new("bound", a, None), &rows)?;
    }
    Ok(Outcome::from_pass(pass))
}

fn periodize(a: &PeriodizeArgs) -> Result<Outcome> {
    let p = periodization::profile_by_name(&a.profile)
        .ok_or_else(|| anyhow!("unknown profile {:?} (expected triangle or ce_h)", a.profile))?;
    if a.m == 0 {
        bail!("--m must be positive");
    }
    let meta = Meta::new("periodize", a, Some(a.seed));
    let mut pass = true;
    println!("profile: {} (m = {})", p.name, a.m);
    let direct = periodization::periodize_direct(&p, a.m, 0.0)?;
    println!("direct f_m(0): {} (tail <= {:.3e}, {} terms)", direct.value, direct.tail_bound, direct.max_k);
    if p.fourier.is_some() {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let r = periodization::poisson_residual(&p, a.m, a.max_index, a.samples, &mut rng)?;
        let ok = r.max_residual <= r.bound;
        pass &= ok;
        println!(
            "poisson residual: {:.3e} at x = {} (bound {:.3e}): {}",
            r.max_residual,
            r.worst_x,
            r.bound,
            if ok { "ok" } else { "FAIL" }
        );
        if let Some(out) = &a.out {
            let s = periodization::periodize_spectrum(&p, a.m, a.max_index)?;
            docs::write_json(out, &SeriesDoc::from_series(&s, Some(p.name), Some(meta.clone())))?;
        }
    } else {
        println!("spectral comparison unavailable: profile has no Fourier evaluator");
        if a.out.is_some() {
            bail!("--out needs a profile with a Fourier evaluator");
        }
    }
    let hz = periodization::hat_zero(&p)?;
    println!("hat f(0): {} (error <= {:.1e})", hz.value, hz.error_bound);
    let ms = if a.ms.is_empty() { vec![a.m] } else { a.ms.clone() };
    let sharps = periodization::sharp_sequence(&p, &ms)?;
    let mut rows = Vec::new();
    for (&m, &s) in ms.iter().zip(&sharps) {
        println!("m = {m}: {}", sharp_line(s));
        let b = DensityBound::from_sharp(
            1,
            s,
            spherelp_core::bounds::Provenance {
                source: p.name.to_string(),
                ms: vec![m],
                kind: BoundKind::PerM,
            },
        );
        rows.push(BoundRow::from_bound(&b, s));
    }
    if let Some(csv) = &a.csv {
        tables::write_bounds(csv, &meta, &rows)?;
    }
    Ok(Outcome::from_pass(pass))
}

/// Resolves `hex`, `cubic`, `z<n>` or a lattice JSON path.
pub fn resolve_lattice(name: &str, m: Option<u32>) -> Result<Lattice> {
    let named = |base: Lattice| -> Result<Lattice> { Ok(base.with_scale(m.unwrap_or(1))?) };
    match name {
        "hex" => named(constructions::hex_lattice(1)?),
        "cubic" => named(constructions::cubic_lattice()),
        _ if name.starts_with('z') && name[1..].parse::<usize>().is_ok() => {
            Ok(Lattice::integer(name[1..].parse()?, m.unwrap_or(1))?)
        }
        _ => {
            let doc: LatticeDoc = docs::read_json(Path::new(name))?;
            let l = doc.to_lattice()?;
            match m {
                Some(m) => Ok(l.with_scale(m)?),
                None => Ok(l),
            }
        }
    }
}

fn search(a: &SearchArgs) -> Result<Outcome> {
    let lattice = resolve_lattice(&a.lattice, a.m)?;
    let radius = if a.max_freq == "auto" {
        lpsearch::auto_radius(&lattice)?
    } else {
        a.max_freq
            .parse::<f64>()
            .ok()
            .filter(|r| *r > 0.0)
            .ok_or_else(|| anyhow!("--max-freq must be a positive number or auto"))?
    };
    if !(a.grid > 0.0) || !(a.tol > 0.0) {
        bail!("--grid and --tol must be positive");
    }
    let cert_grid = a.cert_grid.unwrap_or(a.grid / 4.0);
    let problem = lpsearch::build_problem(&lattice, radius, a.grid)?;
    println!(
        "lattice: n = {}, m = {}, det = {}",
        lattice.dim(),
        lattice.scale(),
        lattice.determinant()
    );
    println!(
        "frequencies: {} within radius {radius:.6}; constraints: {}",
        problem.frequencies.len(),
        problem.points.len()
    );
    let solution = lpsearch::solve(&problem);
    let out = lpsearch::refine(problem, solution, a.rounds, a.tol, cert_grid)?;
    let sol = &out.solution;
    println!("status: {}", docs::status_name(sol.status));
    println!("iterations: {}", sol.iterations);
    println!("rounds: {} (constraints now {})", out.rounds, out.problem.points.len());
    let mut pass = sol.status == LpStatus::Optimal;
    if pass {
        println!("objective: {:.6}", sol.objective);
        println!("max violation: {:.3e}", sol.max_violation(&out.problem));
    }
    if let Some(r) = &out.report {
        print_certificate(r);
        pass &= r.pass;
    }
    let meta = Meta::new("search", a, None);
    if pass {
        let b = lpsearch::bound_from_solution(sol, &lattice, "search");
        print!("{}", b.report());
        if let Some(csv) = &a.csv {
            tables::write_bounds(csv, &meta, &[BoundRow::from_bound(&b, sol.objective / lattice.determinant())])?;
        }
    } else {
        println!("no certified bound");
    }
    if let Some(path) = &a.out {
        docs::write_json(path, &SolutionDoc::from_solution(&out.problem, sol, Some(meta.clone())))?;
    }
    if let Some(path) = &a.problem_out {
        docs::write_json(path, &ProblemDoc::from_problem(&out.problem, Some(meta)))?;
    }
    Ok(Outcome::from_pass(pass))
}

fn report(a: &ReportArgs) -> Result<Outcome> {
    // n → m → smallest sharp seen
    let mut groups: BTreeMap<usize, BTreeMap<u32, f64>> = BTreeMap::new();
    for path in &a.inputs {
        for row in tables::read_bounds(path)? {
            if row.flag == BoundKind::SequenceLiminf.as_str() {
                continue;
            }
            let e = groups.entry(row.n).or_default().entry(row.m).or_insert(f64::INFINITY);
            *e = e.min(row.sharp);
        }
    }
    if groups.is_empty() {
        bail!("no bound rows in the inputs");
    }
    let mut rows = Vec::new();
    let mut liminf = Vec::new();
    let mut blocks = Vec::new();
    for (&n, ms) in &groups {
        let entries: Vec<(u32, f64)> = ms.iter().map(|(&m, &s)| (m, s)).collect();
        for &(m, s) in &entries {
            let b = sequence_bound(n, "report", &[(m, s)])?;
            rows.push(BoundRow::from_bound(&b, s));
        }
        let b = sequence_bound(n, "report", &entries)?;
        let sharp = b.delta * 2f64.powi(n as i32);
        liminf.push((b, sharp));
        blocks.push((n, entries));
    }
    println!("{:>3} {:>8} {:>16} {:>16} {:>16}  flag", "n", "m", "sharp", "delta", "Delta");
    for r in &rows {
        println!(
            "{:>3} {:>8} {:>16.12} {:>16.12} {:>16.12}  {}",
            r.n, r.m, r.sharp, r.delta, r.big_delta, r.flag
        );
    }
    for (b, sharp) in &liminf {
        let ms = &b.provenance.ms;
        let range = format!("{}..{}", ms[0], ms[ms.len() - 1]);
        println!(
            "{:>3} {:>8} {:>16.12} {:>16.12} {:>16.12}  {} (empirical liminf over m = {range})",
            b.n,
            "liminf",
            sharp,
            b.delta,
            b.big_delta,
            b.provenance.kind.as_str()
        );
    }
    for kind in [BoundKind::PerM, BoundKind::SequenceLiminf] {
        if liminf.iter().any(|(b, _)| b.provenance.kind == kind) {
            eprintln!("note: {}", kind.note());
        }
    }
    let meta = Meta::new("report", a, None);
    if let Some(out) = &a.out {
        let mut all = rows.clone();
        all.extend(liminf.iter().map(|(b, s)| BoundRow::from_bound(b, *s)));
        tables::write_bounds(out, &meta, &all)?;
    }
    if let Some(plot) = &a.plot {
        tables::write_plot_data(plot, &meta, &blocks)?;
    }
    Ok(Outcome::Pass)
}
