//! `momentkit` command-line front end. Every command is a thin shell over
//! library calls.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical
//! instability under `MOMENTKIT_STRICT=1`.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use momentkit::basis::{Family, MethodSpec, DEFAULT_BESSEL_ORDER, DEFAULT_JACOBI_P, DEFAULT_JACOBI_Q};
use momentkit::engine::{decompose, reconstruct, with_threads, Interp, Mapping, MomentSet, Rule, Scheme, Strategy};
use momentkit::harness::{run_accuracy, run_recognition, run_reconstruction, ExperimentConfig, Report};
use momentkit::invariants::{magnitude_features, nn_classify};
use momentkit::io::{read_image, write_image, MomentFile};
use momentkit::MomentError;

#[derive(Parser)]
#[command(name = "momentkit", version, about = "Orthogonal moments of grayscale images")]
struct Cli {
    /// Worker threads (0 = one per core). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the moments of a PGM image.
    Decompose {
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Rebuild an image from a moment file.
    Reconstruct {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        size: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write the rotation-invariant magnitudes of a moment file as CSV.
    Features {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Label a query image by its nearest gallery image.
    Classify {
        /// Directory of PGM images; labels are file stems.
        #[arg(long)]
        gallery: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
    },
    /// Run one experiment and write its report (`.json` or CSV).
    Bench {
        #[arg(value_enum)]
        experiment: Experiment,
        #[arg(long)]
        config: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Accuracy,
    Reconstruction,
    Recognition,
}

#[derive(Args)]
struct MethodArgs {
    /// Family name (zm, pzm, ofmm, chfm, pjfm, jfm, rhfm, efm, pcet, pct,
    /// pst, bfm, fjfm, grhfm, gpcet, gpct, gpst).
    #[arg(long)]
    method: String,
    #[arg(long, default_value_t = DEFAULT_JACOBI_P)]
    p: f64,
    #[arg(long, default_value_t = DEFAULT_JACOBI_Q)]
    q: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long = "bessel-v", default_value_t = DEFAULT_BESSEL_ORDER)]
    bessel_v: f64,
    /// Maximum order.
    #[arg(short = 'K', long = "K")]
    k: usize,
}

/// Omitted fields take the method's default scheme.
#[derive(Args)]
struct SchemeArgs {
    #[arg(long)]
    mapping: Option<Mapping>,
    /// `zoa`, `up:<s>` or `gauss:<g>`.
    #[arg(long)]
    rule: Option<Rule>,
    #[arg(long)]
    strategy: Option<Strategy>,
    /// FFT grid size.
    #[arg(short = 'M', long = "M")]
    fft_size: Option<usize>,
    /// Polar ring count.
    #[arg(long)]
    rings: Option<usize>,
    /// Interpolation of polar resampling (nearest, bilinear, bicubic).
    #[arg(long)]
    interp: Option<Interp>,
}

enum Failure {
    Usage(String),
    Data(String),
    Unstable(String),
}

impl From<MomentError> for Failure {
    fn from(e: MomentError) -> Self {
        Failure::Data(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage(e: MomentError) -> Failure {
    Failure::Usage(e.to_string())
}

fn strict_mode() -> bool {
    std::env::var("MOMENTKIT_STRICT").is_ok_and(|v| v == "1")
}

impl MethodArgs {
    fn spec(&self) -> CliResult<MethodSpec> {
        let family: Family = self.method.parse().map_err(usage)?;
        MethodSpec::build(family, self.p, self.q, self.alpha, self.bessel_v).map_err(usage)
    }
}

impl SchemeArgs {
    fn scheme(&self, method: &MethodSpec, k: usize, strict: bool) -> CliResult<Scheme> {
        let mut scheme = Scheme::default_for(method, k);
        if let Some(m) = self.mapping {
            scheme.mapping = m;
        }
        if let Some(r) = self.rule {
            scheme.rule = r;
        }
        if let Some(s) = self.strategy {
            scheme.strategy = s;
        }
        if let Some(i) = self.interp {
            scheme.interp = i;
        }
        scheme.fft_size = self.fft_size;
        scheme.rings = self.rings;
        scheme.strict = strict;
        scheme.validate(method).map_err(usage)?;
        Ok(scheme)
    }
}

fn check_finite(moments: &MomentSet, strict: bool) -> CliResult<()> {
    if moments.is_finite() {
        return Ok(());
    }
    let msg = format!("{} produced non-finite coefficients at K = {}", moments.method.label(), moments.k);
    if strict {
        Err(Failure::Unstable(msg))
    } else {
        log::warn!("{msg}");
        Ok(())
    }
}

fn compute(
    image_path: &Path,
    method: &MethodArgs,
    scheme: &SchemeArgs,
    strict: bool,
) -> CliResult<(MethodSpec, Scheme, momentkit::image::Image, MomentSet)> {
    let spec = method.spec()?;
    let scheme = scheme.scheme(&spec, method.k, strict)?;
    let image = read_image(image_path)?;
    let moments = decompose(&image, &spec, method.k, &scheme)?;
    check_finite(&moments, strict)?;
    Ok((spec, scheme, image, moments))
}

fn features_csv(moments: &MomentSet) -> String {
    let features = magnitude_features(moments);
    let mut out = String::from("n,m,magnitude\n");
    for (idx, v) in moments.indices().iter().zip(&features.values) {
        out.push_str(&format!("{},{},{:?}\n", idx.n, idx.m, v));
    }
    out
}

fn classify(gallery: &Path, query: &Path, method: &MethodArgs, scheme: &SchemeArgs, strict: bool) -> CliResult<String> {
    let spec = method.spec()?;
    let scheme = scheme.scheme(&spec, method.k, strict)?;
    let mut paths: Vec<PathBuf> = std::fs::read_dir(gallery)
        .map_err(MomentError::from)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Failure::Data(format!("no PGM images in {}", gallery.display())));
    }
    let features = |path: &Path| -> CliResult<_> {
        let ms = decompose(&read_image(path)?, &spec, method.k, &scheme)?;
        check_finite(&ms, strict)?;
        Ok(magnitude_features(&ms))
    };
    let entries = paths
        .iter()
        .map(|p| Ok((p.file_stem().unwrap_or_default().to_string_lossy().into_owned(), features(p)?)))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(nn_classify(&features(query)?, &entries)?.to_string())
}

fn bench(experiment: Experiment, config: &Path, output: &Path, strict: bool) -> CliResult<()> {
    let mut cfg = ExperimentConfig::read(config)?;
    cfg.validate().map_err(usage)?;
    if strict {
        if let Some(s) = cfg.scheme.as_mut() {
            s.strict = true;
        }
    }
    let report: Report = match experiment {
        Experiment::Accuracy => run_accuracy(&cfg)?,
        Experiment::Reconstruction => run_reconstruction(&cfg)?,
        Experiment::Recognition => run_recognition(&cfg)?,
    };
    report.write(output)?;
    let unstable = report.rows.iter().filter(|r| r.flag == "unstable").count();
    if unstable > 0 {
        let msg = format!("{unstable} report rows flagged unstable");
        if strict {
            return Err(Failure::Unstable(msg));
        }
        log::warn!("{msg}");
    }
    Ok(())
}

fn run(command: Command) -> CliResult<()> {
    let strict = strict_mode();
    match command {
        Command::Decompose {
            method,
            scheme,
            input,
            output,
        } => {
            let (_, _, image, moments) = compute(&input, &method, &scheme, strict)?;
            MomentFile::from_moments(&moments, Some(&image)).write(&output)?;
        }
        Command::Reconstruct { input, size, output } => {
            let moments = MomentFile::read(&input)?.to_moments()?;
            let image = reconstruct(&moments, size).map_err(|e| match e {
                MomentError::InvalidParameter(_) => usage(e),
                e => e.into(),
            })?;
            write_image(&image, &output)?;
        }
        Command::Features { input, output } => {
            let moments = MomentFile::read(&input)?.to_moments()?;
            check_finite(&moments, strict)?;
            std::fs::write(&output, features_csv(&moments)).map_err(MomentError::from)?;
        }
        Command::Classify {
            gallery,
            query,
            method,
            scheme,
        } => {
            let label = classify(&gallery, &query, &method, &scheme, strict)?;
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{label}").map_err(MomentError::from)?;
        }
        Command::Bench {
            experiment,
            config,
            output,
        } => bench(experiment, &config, &output, strict)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = cli.threads;
    let outcome = with_threads(threads, move || run(cli.command)).unwrap_or_else(|e| Err(usage(e)));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Unstable(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
