//! Command-line front end for the `vmf` library.
//!
//! Subcommands: `div` (one divergence evaluation, JSON to stdout), `sweep`
//! (geometric concentration grid, CSV), `moments` (first and second moments,
//! JSON), `profile` (density profiles over the angle from the mean
//! direction, CSV), and `check` (built-in verification suites).
//!
//! Exit codes: 0 on success, 1 when a check suite fails, 2 on usage or
//! validation errors.

mod checks;
mod record;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vmf::{
    chi_square, hellinger_sq, kl, log_normalizer, renyi, tv_bounds, DivergenceResult,
    ReferenceDistribution, VmfDistribution,
};

use record::{fmt_float, json_number, JsonMap};

#[derive(Parser)]
#[command(
    name = "vmf",
    about = "von Mises-Fisher densities, moments, and exact f-divergences",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one divergence between an obtained vMF distribution and a
    /// reference, printing a JSON record.
    Div(DivArgs),
    /// Evaluate a divergence along a geometric grid of obtained
    /// concentrations, printing CSV rows that expose the growth order.
    Sweep(SweepArgs),
    /// First and second moments of a vMF distribution, as JSON.
    Moments(MomentsArgs),
    /// Density profile against the angle from the mean direction, as CSV.
    Profile(ProfileArgs),
    /// Run the built-in verification suites.
    Check(CheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DivergenceKind {
    Kl,
    Renyi,
    Chi2,
    Hellinger2,
    TvBounds,
}

impl DivergenceKind {
    fn as_str(self) -> &'static str {
        match self {
            Self::Kl => "kl",
            Self::Renyi => "renyi",
            Self::Chi2 => "chi2",
            Self::Hellinger2 => "hellinger2",
            Self::TvBounds => "tv-bounds",
        }
    }
}

#[derive(Args)]
struct DivArgs {
    #[arg(long, value_enum)]
    kind: DivergenceKind,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    kappa_y: f64,
    /// Mean direction of the obtained distribution, comma-separated floats.
    #[arg(long)]
    mu_y: String,
    #[arg(long)]
    kappa_z: Option<f64>,
    #[arg(long)]
    mu_z: Option<String>,
    /// Use the uniform distribution on the sphere as the reference.
    #[arg(long)]
    uniform_ref: bool,
    /// Renyi order; required for --kind renyi, rejected otherwise.
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    kind: DivergenceKind,
    #[arg(long)]
    p: usize,
    /// Geometric grid start:stop:factor, e.g. 1e2:1e6:10.
    #[arg(long)]
    kappa_y_grid: String,
    #[arg(long)]
    mu_y: String,
    #[arg(long)]
    kappa_z: Option<f64>,
    #[arg(long)]
    mu_z: Option<String>,
    #[arg(long)]
    uniform_ref: bool,
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    kappa: f64,
    #[arg(long)]
    mu: String,
}

#[derive(Args)]
struct ProfileArgs {
    /// Dimension; profiles are emitted for the circle and sphere only.
    #[arg(long)]
    p: usize,
    /// Comma-separated list of concentrations.
    #[arg(long)]
    kappa: String,
    /// Number of angle samples on [0, pi].
    #[arg(long, default_value_t = 181)]
    points: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Identities,
    Oracle,
    Bounds,
    Asymptotics,
    All,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Monte Carlo sample count; also settable via VMF_CHECK_SAMPLES
    /// (default 1e6).
    #[arg(long)]
    samples: Option<String>,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Div(args) => cmd_div(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Moments(args) => cmd_moments(args),
        Command::Profile(args) => cmd_profile(args),
        Command::Check(args) => cmd_check(args),
    }
}

/// Parse a comma-separated float list into a normalized direction, warning
/// on stderr when the input norm deviates noticeably from one.
fn parse_direction(p: usize, text: &str, flag: &str) -> Result<Vec<f64>, String> {
    let coords: Vec<f64> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("{flag}: cannot parse `{t}` as a float"))
        })
        .collect::<Result<_, _>>()?;
    if coords.len() != p {
        return Err(format!(
            "{flag}: expected {p} components, got {}",
            coords.len()
        ));
    }
    let norm: f64 = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !norm.is_finite() || norm == 0.0 {
        return Err(format!("{flag}: direction must be a nonzero finite vector"));
    }
    if (norm - 1.0).abs() > 1e-6 {
        eprintln!("warning: {flag} has norm {norm}; normalizing to unit length");
    }
    Ok(coords)
}

struct Pair {
    y: VmfDistribution,
    z: ReferenceDistribution,
    mu_y: Vec<f64>,
    kappa_z: Option<f64>,
    mu_z: Option<Vec<f64>>,
}

fn build_pair(
    p: usize,
    kappa_y: f64,
    mu_y_text: &str,
    kappa_z: Option<f64>,
    mu_z_text: Option<&str>,
    uniform_ref: bool,
) -> Result<Pair, String> {
    let mu_y = parse_direction(p, mu_y_text, "--mu-y")?;
    let y = VmfDistribution::new(p, kappa_y, &mu_y).map_err(|e| e.to_string())?;
    if uniform_ref {
        if kappa_z.is_some() || mu_z_text.is_some() {
            return Err("--uniform-ref conflicts with --kappa-z/--mu-z".into());
        }
        let z = ReferenceDistribution::uniform(p).map_err(|e| e.to_string())?;
        return Ok(Pair {
            y,
            z,
            mu_y,
            kappa_z: None,
            mu_z: None,
        });
    }
    let (kappa_z, mu_z_text) = match (kappa_z, mu_z_text) {
        (Some(k), Some(m)) => (k, m),
        _ => return Err("provide either --uniform-ref or both --kappa-z and --mu-z".into()),
    };
    let mu_z = parse_direction(p, mu_z_text, "--mu-z")?;
    let zd = VmfDistribution::new(p, kappa_z, &mu_z).map_err(|e| e.to_string())?;
    Ok(Pair {
        y,
        z: ReferenceDistribution::Vmf(zd),
        mu_y,
        kappa_z: Some(kappa_z),
        mu_z: Some(mu_z),
    })
}

fn check_alpha(kind: DivergenceKind, alpha: Option<f64>) -> Result<Option<f64>, String> {
    match (kind, alpha) {
        (DivergenceKind::Renyi, Some(a)) => Ok(Some(a)),
        (DivergenceKind::Renyi, None) => Err("--kind renyi requires --alpha".into()),
        (_, Some(_)) => Err("--alpha only applies to --kind renyi".into()),
        (_, None) => Ok(None),
    }
}

fn evaluate(
    kind: DivergenceKind,
    y: &VmfDistribution,
    z: &ReferenceDistribution,
    alpha: Option<f64>,
) -> Result<DivergenceResult, String> {
    let result = match kind {
        DivergenceKind::Kl => kl(y, z),
        DivergenceKind::Chi2 => chi_square(y, z),
        DivergenceKind::Hellinger2 => hellinger_sq(y, z),
        DivergenceKind::Renyi => renyi(y, z, alpha.expect("validated")),
        DivergenceKind::TvBounds => unreachable!("tv-bounds handled separately"),
    };
    result.map_err(|e| e.to_string())
}

fn cmd_div(args: DivArgs) -> Result<i32, String> {
    let alpha = check_alpha(args.kind, args.alpha)?;
    let pair = build_pair(
        args.p,
        args.kappa_y,
        &args.mu_y,
        args.kappa_z,
        args.mu_z.as_deref(),
        args.uniform_ref,
    )?;

    let mut map = JsonMap::new();
    map.push("kind", args.kind.as_str().into());
    map.push("p", (args.p as u64).into());
    map.push("kappa_y", json_number(args.kappa_y));
    map.push("mu_y", record::json_vector(&pair.mu_y));
    match (&pair.kappa_z, &pair.mu_z) {
        (Some(kz), Some(mz)) => {
            map.push("reference", "vmf".into());
            map.push("kappa_z", json_number(*kz));
            map.push("mu_z", record::json_vector(mz));
        }
        _ => map.push("reference", "uniform".into()),
    }
    if let Some(a) = alpha {
        map.push("alpha", json_number(a));
    }

    if args.kind == DivergenceKind::TvBounds {
        let rep = tv_bounds(&pair.y, &pair.z).map_err(|e| e.to_string())?;
        map.push("hellinger_sq", json_number(rep.hellinger_sq));
        map.push("kl", json_number(rep.kl));
        map.push("chi_sq", json_number(rep.chi_sq));
        map.push("pinsker_bound", json_number(rep.pinsker_bound));
        map.push("best_tv_upper", json_number(rep.best_tv_upper));
    } else {
        let result = evaluate(args.kind, &pair.y, &pair.z, alpha)?;
        map.push("value", json_number(result.value));
        map.push("branch", result.branch.as_str().into());
    }
    println!("{}", map.into_value());
    Ok(0)
}

fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err("--kappa-y-grid must look like start:stop:factor".into());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| format!("--kappa-y-grid: cannot parse `{t}`"))
        })
        .collect::<Result<_, _>>()?;
    let (start, stop, factor) = (nums[0], nums[1], nums[2]);
    if nums.iter().any(|v| !v.is_finite()) || start <= 0.0 || stop < start || factor <= 1.0 {
        return Err("--kappa-y-grid requires 0 < start <= stop and factor > 1".into());
    }
    let mut grid = Vec::new();
    let mut kappa = start;
    while kappa <= stop * (1.0 + 1e-12) {
        grid.push(kappa);
        kappa *= factor;
    }
    if grid.is_empty() {
        return Err("--kappa-y-grid produced an empty grid".into());
    }
    Ok(grid)
}

fn cmd_sweep(args: SweepArgs) -> Result<i32, String> {
    if args.kind == DivergenceKind::TvBounds {
        return Err("--kind tv-bounds is not sweepable; use div".into());
    }
    let alpha = check_alpha(args.kind, args.alpha)?;
    let grid = parse_grid(&args.kappa_y_grid)?;
    let mu_y = parse_direction(args.p, &args.mu_y, "--mu-y")?;
    let reference = build_pair(
        args.p,
        grid[0],
        &args.mu_y,
        args.kappa_z,
        args.mu_z.as_deref(),
        args.uniform_ref,
    )?
    .z;

    println!("kappa_y,value,value_over_ln_kappa_y,value_over_kappa_y");
    for &kappa in &grid {
        let y = VmfDistribution::new(args.p, kappa, &mu_y).map_err(|e| e.to_string())?;
        let value = evaluate(args.kind, &y, &reference, alpha)?.value;
        println!(
            "{},{},{},{}",
            fmt_float(kappa),
            fmt_float(value),
            fmt_float(value / kappa.ln()),
            fmt_float(value / kappa)
        );
    }
    Ok(0)
}

fn cmd_moments(args: MomentsArgs) -> Result<i32, String> {
    let mu = parse_direction(args.p, &args.mu, "--mu")?;
    let dist = VmfDistribution::new(args.p, args.kappa, &mu).map_err(|e| e.to_string())?;
    let m = dist.moments().map_err(|e| e.to_string())?;

    let mut map = JsonMap::new();
    map.push("p", (args.p as u64).into());
    map.push("kappa", json_number(args.kappa));
    map.push("mu", record::json_vector(dist.mu().coords()));
    map.push("mean", record::json_vector(&m.mean));
    map.push("covariance_row_major", record::json_vector(&m.covariance));
    map.push("mean_resultant_length", json_number(m.mean_resultant_length));
    map.push("circular_variance", json_number(m.circular_variance));
    map.push("covariance_trace", json_number(m.covariance_trace()));
    println!("{}", map.into_value());
    Ok(0)
}

fn cmd_profile(args: ProfileArgs) -> Result<i32, String> {
    if args.p != 2 && args.p != 3 {
        return Err("--p must be 2 or 3 for profiles".into());
    }
    if args.points < 2 {
        return Err("--points must be at least 2".into());
    }
    let kappas: Vec<f64> = args
        .kappa
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("--kappa: cannot parse `{t}`"))
        })
        .collect::<Result<_, _>>()?;
    if kappas.is_empty() {
        return Err("--kappa list is empty".into());
    }

    println!("kappa,theta,density");
    for &kappa in &kappas {
        let log_c = log_normalizer(args.p, kappa).map_err(|e| e.to_string())?;
        for i in 0..args.points {
            let theta = std::f64::consts::PI * i as f64 / (args.points - 1) as f64;
            let density = (kappa * theta.cos() - log_c).exp();
            println!(
                "{},{},{}",
                fmt_float(kappa),
                fmt_float(theta),
                fmt_float(density)
            );
        }
    }
    Ok(0)
}

fn cmd_check(args: CheckArgs) -> Result<i32, String> {
    let samples = match args.samples {
        Some(text) => checks::parse_samples(&text)
            .ok_or_else(|| format!("--samples: cannot parse `{text}`"))?,
        None => match std::env::var("VMF_CHECK_SAMPLES") {
            Ok(text) => checks::parse_samples(&text)
                .ok_or_else(|| format!("VMF_CHECK_SAMPLES: cannot parse `{text}`"))?,
            Err(_) => 1_000_000,
        },
    };

    let results = match args.suite {
        Suite::Identities => checks::identities(args.seed),
        Suite::Oracle => checks::oracle(args.seed, samples),
        Suite::Bounds => checks::bounds(),
        Suite::Asymptotics => checks::asymptotics(),
        Suite::All => {
            let mut all = checks::identities(args.seed);
            all.extend(checks::oracle(args.seed, samples));
            all.extend(checks::bounds());
            all.extend(checks::asymptotics());
            all
        }
    };

    println!("{:<12} {:<44} {:<6} detail", "suite", "check", "status");
    let mut all_passed = true;
    for r in &results {
        all_passed &= r.passed;
        println!(
            "{:<12} {:<44} {:<6} {}",
            r.suite,
            r.name,
            if r.passed { "pass" } else { "FAIL" },
            r.detail
        );
    }
    println!(
        "{} of {} checks passed",
        results.iter().filter(|r| r.passed).count(),
        results.len()
    );
    Ok(if all_passed { 0 } else { 1 })
}
