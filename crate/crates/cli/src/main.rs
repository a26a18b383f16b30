//! Command-line surface for the weylcount library.
//!
//! Exit codes are a contract: 0 on success, 1 on usage or input errors
//! (clap's default usage code of 2 is remapped), and 2 when a verification
//! command found a numeric tolerance breach.

use std::collections::BTreeSet;
use std::error::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use weylcount::chamber::Spectrum;
use weylcount::counting::{BoundConvention, Normalizer};
use weylcount::experiment::{
    dirichlet_check_to_string, enumerate_and_complete, kernel_check_to_string,
    run_dirichlet_check, run_kernel_check, run_pgt_experiment, run_tauberian_experiment,
    run_theta_experiment, CountKind, DirichletCheckConfig, EnumerateConfig, KernelCheckConfig,
    PgtConfig, TauberianConfig, ThetaConfig,
};
use weylcount::io::{
    field_table_to_string, ingest_field_table, pole_model_from_str, ratio_report_to_string,
    read_text_file, record_is_table_complete, spectrum_from_str, spectrum_to_string,
    verdict_to_string, write_field_cache, write_text_file,
};
use weylcount::numberfield::{
    enumerate_units_in_box, find_fundamental_units, CubicPoly, EnumerationConfig, FieldRecord,
    PrimeSetPolicy,
};
use weylcount::tauberian::{synth_spectrum, ASource, Generator, SynthSpec};

#[derive(Parser)]
#[command(
    name = "weylcount",
    version,
    about = "Weighted lattice counting in Weyl chambers: spectra, series checks, convergence harness, and cubic-field unit counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate or revalidate totally real cubic field tables.
    #[command(subcommand)]
    Fields(FieldsCommand),
    /// Units of a single field inside an alpha-box.
    #[command(subcommand)]
    Units(UnitsCommand),
    /// Weighted unit-box ratio runs over a field table.
    #[command(subcommand)]
    Theta(ThetaCommand),
    /// Chamber-count ratio runs over a stored spectrum.
    #[command(subcommand)]
    Pgt(PgtCommand),
    /// Kernel limit checks and ratio verdicts along rays.
    #[command(subcommand)]
    Tauberian(TauberianCommand),
    /// Closed-form versus quadrature cross-check.
    #[command(subcommand)]
    Dirichlet(DirichletCommand),
    /// Synthetic spectra with known growth.
    #[command(subcommand)]
    Spectrum(SpectrumCommand),
}

#[derive(Subcommand)]
enum FieldsCommand {
    /// Scan a coefficient box for fields up to a discriminant bound,
    /// search fundamental units, and certify class numbers where possible.
    /// Fields the run cannot complete (class number uncertified, or no unit
    /// pair at the search height) are reported on stderr and omitted from
    /// the table; JSON caches keep them with the gaps recorded.
    Enumerate(EnumerateArgs),
    /// Revalidate every row of a stored table, listing rejections.
    Ingest(IngestArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    /// Keep fields with field discriminant at or below this bound.
    #[arg(long)]
    disc_bound: i64,
    /// Comma-separated primes of the working set S (each non-decomposed).
    #[arg(long)]
    primes: String,
    /// Permit prime sets with fewer than two members.
    #[arg(long)]
    allow_small_primes: bool,
    /// Unit-search coordinate height; zero skips unit completion.
    #[arg(long, default_value_t = 8)]
    unit_height: i64,
    /// Coefficient scan bound for |a|.
    #[arg(long, default_value_t = 15)]
    coeff_a: i64,
    /// Coefficient scan bound for |b|.
    #[arg(long, default_value_t = 60)]
    coeff_b: i64,
    /// Coefficient scan bound for |c|.
    #[arg(long, default_value_t = 60)]
    coeff_c: i64,
    /// Worker threads; zero uses the ambient pool.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Write the field table here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write one JSON cache document per field into this directory.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct IngestArgs {
    /// Field table CSV to revalidate.
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated primes; rows where any of them decomposes are rejected.
    #[arg(long)]
    primes: Option<String>,
    /// Permit prime sets with fewer than two members.
    #[arg(long)]
    allow_small_primes: bool,
    /// Write the accepted rows back out as a canonical table.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum UnitsCommand {
    /// Enumerate units (mod sign) with alpha-coordinates inside a box.
    Box(BoxArgs),
}

#[derive(Args)]
struct BoxArgs {
    /// Coefficient a of x^3 + a x^2 + b x + c.
    #[arg(long, allow_negative_numbers = true)]
    poly_a: i64,
    /// Coefficient b.
    #[arg(long, allow_negative_numbers = true)]
    poly_b: i64,
    /// Coefficient c.
    #[arg(long, allow_negative_numbers = true)]
    poly_c: i64,
    /// First alpha-box bound.
    #[arg(long)]
    t1: f64,
    /// Second alpha-box bound.
    #[arg(long)]
    t2: f64,
    /// Unit-search coordinate height.
    #[arg(long, default_value_t = 8)]
    height: i64,
    /// Demand table-confirmed units (requires --input).
    #[arg(long)]
    strict: bool,
    /// Field table supplying confirmed units for this polynomial.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write the unit list here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ThetaCommand {
    /// Weighted unit-box counts over a bounds grid, with normalizer ratios.
    Run(ThetaArgs),
}

#[derive(Args)]
struct ThetaArgs {
    /// Field table CSV.
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated primes of the working set S.
    #[arg(long)]
    primes: String,
    /// Permit prime sets with fewer than two members.
    #[arg(long)]
    allow_small_primes: bool,
    /// Comma-separated strictly increasing bounds for the first axis.
    #[arg(long)]
    axis1: String,
    /// Comma-separated strictly increasing bounds for the second axis.
    #[arg(long)]
    axis2: String,
    /// Demand table-confirmed units for every record.
    #[arg(long)]
    strict_units: bool,
    /// Worker threads; zero uses the ambient pool.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Write the ratio report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PgtCommand {
    /// Evaluate a chamber count over a bounds grid and normalize.
    Run(PgtArgs),
}

#[derive(Args)]
struct PgtArgs {
    /// Stored spectrum (TSV).
    #[arg(long)]
    spectrum: PathBuf,
    /// Comma-separated bounds for one axis; repeat the flag per axis.
    #[arg(long = "axis", required = true)]
    axis: Vec<String>,
    /// Bound convention: log or mult.
    #[arg(long, default_value = "log")]
    convention: String,
    /// Count kind: psi, phi, phi-j, or pi.
    #[arg(long, default_value = "psi")]
    count: String,
    /// Moment order for phi-j and the pnt-profile normalizer.
    #[arg(long, default_value_t = 0)]
    j: u32,
    /// Normalizer: pnt-profile, product-t, or product-t-over-logs.
    #[arg(long, default_value = "pnt-profile")]
    normalizer: String,
    /// Constant for the product-t normalizer.
    #[arg(long)]
    constant: Option<f64>,
    /// Free-form label recorded in the report header.
    #[arg(long, default_value = "pgt")]
    label: String,
    /// Worker threads; zero uses the ambient pool.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Write the ratio report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TauberianCommand {
    /// Kernel limit check (default) or ratio verdict along a ray.
    Check(TauberianArgs),
}

#[derive(Args)]
struct TauberianArgs {
    /// "kernel" for the smoothed-integral limit check (exit 2 on breach),
    /// "verdict" for ratio samples with tail envelopes (no pass/fail).
    #[arg(long, default_value = "kernel")]
    mode: String,
    /// Kernel support half-width (kernel mode).
    #[arg(long, default_value_t = 1.0)]
    s1: f64,
    /// Kernel table resolution (kernel mode).
    #[arg(long, default_value_t = 2000)]
    resolution: usize,
    /// Comma-separated moment orders to check (kernel mode).
    #[arg(long, default_value = "0,1,2")]
    k_values: String,
    /// Comma-separated strictly increasing evaluation points (kernel mode).
    #[arg(long, default_value = "20,40,80")]
    y_values: String,
    /// Relative deviation allowed at the largest y (kernel mode).
    #[arg(long, default_value_t = 0.02)]
    tolerance: f64,
    /// Stored spectrum to sample (verdict mode).
    #[arg(long)]
    spectrum: Option<PathBuf>,
    /// Synthetic source: chebyshev, product-lattice, or exact-continuum
    /// (verdict mode, alternative to --spectrum).
    #[arg(long)]
    generator: Option<String>,
    /// Rank of a synthetic source.
    #[arg(long, default_value_t = 1)]
    rank: usize,
    /// Moment order of the sampled ratio.
    #[arg(long, default_value_t = 0)]
    j: u32,
    /// Lattice step of a synthetic source.
    #[arg(long, default_value_t = 0.25)]
    step: f64,
    /// Length cutoff of a synthetic source.
    #[arg(long)]
    cutoff: Option<f64>,
    /// Comma-separated ray direction (verdict mode).
    #[arg(long, default_value = "1")]
    ray: String,
    /// Comma-separated strictly increasing sample radii (verdict mode).
    #[arg(long)]
    radii: Option<String>,
    /// Worker threads; zero uses the ambient pool.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DirichletCommand {
    /// Cross-check the closed pole form against iterated quadrature.
    Check(DirichletArgs),
}

#[derive(Args)]
struct DirichletArgs {
    /// Relative agreement demanded of every grid combination.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Quadrature subintervals per axis.
    #[arg(long, default_value_t = 4000)]
    resolution: usize,
    /// Worker threads; zero uses the ambient pool.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SpectrumCommand {
    /// Manufacture a synthetic spectrum and write it as TSV.
    Synth(SynthArgs),
}

#[derive(Args)]
struct SynthArgs {
    /// Generator: product-lattice, chebyshev, or pole-model.
    #[arg(long)]
    generator: String,
    /// Pole model file (required with the pole-model generator, which takes
    /// its rank and moment order from the file).
    #[arg(long)]
    model: Option<PathBuf>,
    /// Rank of the generated spectrum.
    #[arg(long, default_value_t = 1)]
    rank: usize,
    /// Moment order of the generated profile.
    #[arg(long, default_value_t = 0)]
    j: u32,
    /// Lattice step (ignored by the chebyshev generator).
    #[arg(long, default_value_t = 0.25)]
    step: f64,
    /// Length cutoff: classes keep every coordinate at or below this.
    #[arg(long)]
    cutoff: f64,
    /// Write the spectrum here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

type CliResult = Result<u8, Box<dyn Error>>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests exit 0; genuine usage errors exit 1
            // (clap's default of 2 is reserved for tolerance breaches here).
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Fields(FieldsCommand::Enumerate(args)) => fields_enumerate(args),
        Command::Fields(FieldsCommand::Ingest(args)) => fields_ingest(args),
        Command::Units(UnitsCommand::Box(args)) => units_box(args),
        Command::Theta(ThetaCommand::Run(args)) => theta_run(args),
        Command::Pgt(PgtCommand::Run(args)) => pgt_run(args),
        Command::Tauberian(TauberianCommand::Check(args)) => tauberian_check(args),
        Command::Dirichlet(DirichletCommand::Check(args)) => dirichlet_check(args),
        Command::Spectrum(SpectrumCommand::Synth(args)) => spectrum_synth(args),
    }
}

// ---------------------------------------------------------------------------
// Handlers.
// ---------------------------------------------------------------------------

fn fields_enumerate(args: &EnumerateArgs) -> CliResult {
    let config = EnumerateConfig {
        disc_bound: i128::from(args.disc_bound),
        s: parse_primes(&args.primes)?,
        policy: policy(args.allow_small_primes),
        coeff_box: EnumerationConfig {
            max_abs_a: args.coeff_a,
            max_abs_b: args.coeff_b,
            max_abs_c: args.coeff_c,
        },
        unit_height: args.unit_height,
        workers: args.workers,
    };
    let records = enumerate_and_complete(&config)?;
    if let Some(dir) = &args.cache_dir {
        for record in &records {
            write_field_cache(dir, record)?;
        }
    }
    let (complete, incomplete): (Vec<_>, Vec<_>) = records
        .into_iter()
        .partition(|r| record_is_table_complete(r));
    for record in &incomplete {
        let (a, b, c) = record.poly().coeffs();
        let mut missing = Vec::new();
        if record.h().is_none() {
            missing.push("class number uncertified");
        }
        if record.fundamental_units().is_none() {
            missing.push("no unit pair at this search height");
        }
        eprintln!(
            "disc {} (poly {a},{b},{c}): {}; omitted from table",
            record.disc_field(),
            missing.join(", ")
        );
    }
    emit(args.output.as_deref(), &field_table_to_string(&complete)?)?;
    Ok(0)
}

fn fields_ingest(args: &IngestArgs) -> CliResult {
    let s = args.primes.as_deref().map(parse_primes).transpose()?;
    let report = ingest_field_table(&args.input, s.as_ref(), policy(args.allow_small_primes))?;
    for row in &report.rejected {
        eprintln!("line {}: rejected ({}): {}", row.line, row.reason, row.raw);
    }
    if let Some(path) = &args.output {
        write_text_file(path, &field_table_to_string(&report.accepted)?)?;
    }
    println!(
        "accepted {} rejected {}",
        report.accepted.len(),
        report.rejected.len()
    );
    Ok(0)
}

fn units_box(args: &BoxArgs) -> CliResult {
    let poly = CubicPoly::new(args.poly_a, args.poly_b, args.poly_c)?;
    let mut record = match &args.input {
        Some(path) => {
            let report = ingest_field_table(path, None, PrimeSetPolicy::AllowSmall)?;
            report
                .accepted
                .into_iter()
                .find(|r| r.poly().coeffs() == poly.coeffs())
                .ok_or("the table has no accepted row for this polynomial")?
        }
        None => FieldRecord::computed(poly, &BTreeSet::new())?,
    };
    if record.fundamental_units().is_none() {
        let (units, status) = find_fundamental_units(&record, args.height)?;
        record.attach_units(units, status)?;
    }
    let (found, cert) = enumerate_units_in_box(&record, [args.t1, args.t2], args.strict)?;
    let mut out = format!(
        "# weylcount units format=1 poly={},{},{} t1={} t2={} status={} count={}\n",
        args.poly_a,
        args.poly_b,
        args.poly_c,
        args.t1,
        args.t2,
        cert.status.as_str(),
        found.len()
    );
    out.push_str("c0,c1,c2,alpha_1,alpha_2\n");
    for unit in &found {
        let [c0, c1, c2] = unit.coords();
        let [a1, a2] = unit.alpha();
        out.push_str(&format!("{c0},{c1},{c2},{a1},{a2}\n"));
    }
    emit(args.output.as_deref(), &out)?;
    Ok(0)
}

fn theta_run(args: &ThetaArgs) -> CliResult {
    let s = parse_primes(&args.primes)?;
    let policy = policy(args.allow_small_primes);
    let report = ingest_field_table(&args.input, Some(&s), policy)?;
    for row in &report.rejected {
        eprintln!("line {}: rejected ({}): {}", row.line, row.reason, row.raw);
    }
    let config = ThetaConfig {
        axes: [parse_f64_list(&args.axis1)?, parse_f64_list(&args.axis2)?],
        s,
        policy,
        strict_units: args.strict_units,
        workers: args.workers,
    };
    let ratios = run_theta_experiment(&report.accepted, &config)?;
    emit(args.output.as_deref(), &ratio_report_to_string(&ratios)?)?;
    Ok(0)
}

fn pgt_run(args: &PgtArgs) -> CliResult {
    let spectrum = spectrum_from_str(&read_text_file(&args.spectrum)?)?;
    let convention = match args.convention.as_str() {
        "log" => BoundConvention::LogScale,
        "mult" => BoundConvention::MultScale,
        other => return Err(format!("unknown convention {other:?} (log or mult)").into()),
    };
    let kind = CountKind::parse(&args.count)
        .ok_or_else(|| format!("unknown count {:?} (psi, phi, phi-j, pi)", args.count))?;
    let normalizer = match args.normalizer.as_str() {
        "pnt-profile" => Normalizer::PntProfile { j: args.j },
        "product-t-over-logs" => Normalizer::ProductTOverLogs,
        "product-t" => Normalizer::ProductT {
            constant: args
                .constant
                .ok_or("--constant is required with the product-t normalizer")?,
        },
        other => {
            return Err(format!(
                "unknown normalizer {other:?} (pnt-profile, product-t, product-t-over-logs)"
            )
            .into())
        }
    };
    let mut axes = Vec::with_capacity(args.axis.len());
    for axis in &args.axis {
        axes.push(parse_f64_list(axis)?);
    }
    let config = PgtConfig {
        axes,
        convention,
        j: args.j,
        kind,
        normalizer,
        label: args.label.clone(),
        workers: args.workers,
    };
    let ratios = run_pgt_experiment(&spectrum, &config)?;
    emit(args.output.as_deref(), &ratio_report_to_string(&ratios)?)?;
    Ok(0)
}

fn tauberian_check(args: &TauberianArgs) -> CliResult {
    match args.mode.as_str() {
        "kernel" => {
            let config = KernelCheckConfig {
                s1: args.s1,
                resolution: args.resolution,
                k_values: parse_u32_list(&args.k_values)?,
                y_values: parse_f64_list(&args.y_values)?,
                tolerance: args.tolerance,
                workers: args.workers,
            };
            let report = run_kernel_check(&config)?;
            emit(args.output.as_deref(), &kernel_check_to_string(&report))?;
            if report.breach {
                eprintln!(
                    "tolerance breach: a moment integral misses 2*pi*f(0) by more than {} at the largest y",
                    report.tolerance
                );
                return Ok(2);
            }
            Ok(0)
        }
        "verdict" => {
            let holder: Option<Spectrum> = match (&args.spectrum, args.generator.as_deref()) {
                (Some(_), Some(_)) => {
                    return Err("--spectrum and --generator are mutually exclusive".into())
                }
                (Some(path), None) => Some(spectrum_from_str(&read_text_file(path)?)?),
                (None, Some("exact-continuum")) => None,
                (None, Some(name @ ("chebyshev" | "product-lattice"))) => {
                    let generator = if name == "chebyshev" {
                        Generator::Chebyshev
                    } else {
                        Generator::ProductLattice
                    };
                    let cutoff = args
                        .cutoff
                        .ok_or("--cutoff is required with a synthetic generator")?;
                    let spec = SynthSpec::new(args.rank, args.j, generator, args.step, cutoff)?;
                    Some(synth_spectrum(&spec)?)
                }
                (None, Some(other)) => {
                    return Err(format!(
                        "unknown generator {other:?} (chebyshev, product-lattice, exact-continuum)"
                    )
                    .into())
                }
                (None, None) => {
                    return Err("verdict mode needs --spectrum or --generator".into())
                }
            };
            let source = match &holder {
                Some(spectrum) => ASource::Spectrum(spectrum),
                None => ASource::ExactContinuum,
            };
            let config = TauberianConfig {
                j: args.j,
                ray: parse_f64_list(&args.ray)?,
                radii: parse_f64_list(
                    args.radii
                        .as_deref()
                        .ok_or("--radii is required in verdict mode")?,
                )?,
            };
            let report = run_tauberian_experiment(source, &config)?;
            emit(args.output.as_deref(), &verdict_to_string(&report))?;
            Ok(0)
        }
        other => Err(format!("unknown mode {other:?} (kernel or verdict)").into()),
    }
}

fn dirichlet_check(args: &DirichletArgs) -> CliResult {
    let config = DirichletCheckConfig {
        tolerance: args.tolerance,
        resolution: args.resolution,
        workers: args.workers,
    };
    let report = run_dirichlet_check(&config)?;
    emit(args.output.as_deref(), &dirichlet_check_to_string(&report))?;
    if report.breach {
        eprintln!(
            "tolerance breach: quadrature and the closed form differ by more than {} somewhere on the grid",
            report.tolerance
        );
        return Ok(2);
    }
    Ok(0)
}

fn spectrum_synth(args: &SynthArgs) -> CliResult {
    let spec = match args.generator.as_str() {
        "product-lattice" => SynthSpec::new(
            args.rank,
            args.j,
            Generator::ProductLattice,
            args.step,
            args.cutoff,
        )?,
        "chebyshev" => SynthSpec::new(
            args.rank,
            args.j,
            Generator::Chebyshev,
            args.step,
            args.cutoff,
        )?,
        "pole-model" => {
            let path = args
                .model
                .as_deref()
                .ok_or("--model is required with the pole-model generator")?;
            let model = pole_model_from_str(&read_text_file(path)?)?;
            let (rank, j) = (model.rank(), model.j());
            SynthSpec::new(rank, j, Generator::PoleModel(model), args.step, args.cutoff)?
        }
        other => {
            return Err(format!(
                "unknown generator {other:?} (product-lattice, chebyshev, pole-model)"
            )
            .into())
        }
    };
    let spectrum = synth_spectrum(&spec)?;
    emit(args.output.as_deref(), &spectrum_to_string(&spectrum)?)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// Small shared helpers.
// ---------------------------------------------------------------------------

fn policy(allow_small: bool) -> PrimeSetPolicy {
    if allow_small {
        PrimeSetPolicy::AllowSmall
    } else {
        PrimeSetPolicy::Strict
    }
}

fn parse_primes(text: &str) -> Result<BTreeSet<u64>, Box<dyn Error>> {
    let mut out = BTreeSet::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        out.insert(
            part.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad prime {part:?}"))?,
        );
    }
    Ok(out)
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>, Box<dyn Error>> {
    let mut out = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        out.push(
            part.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number {part:?}"))?,
        );
    }
    Ok(out)
}

fn parse_u32_list(text: &str) -> Result<Vec<u32>, Box<dyn Error>> {
    let mut out = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        out.push(
            part.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad integer {part:?}"))?,
        );
    }
    Ok(out)
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Box<dyn Error>> {
    match output {
        Some(path) => write_text_file(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
