use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spdc_oam::interferometer::DEFAULT_TILT_RATIO;
use spdc_oam::scenario::{sweep_base, ScanConfig};
use spdc_oam::{
    detect_fork, parse_pgm, run_scenario, sweep, Error, ErrorKind, ForkReport, GrayImage,
    MichelsonConfig, ScenarioConfig, ScenarioRun,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 3;
const EXIT_SAMPLING: u8 = 4;
const EXIT_DEMODULATION: u8 = 5;
const EXIT_FORMAT: u8 = 6;

const FIGURES: [&str; 5] = ["fig2", "fig3a", "fig3b", "fig4a", "fig4b"];

/// Simulate orbital angular momentum transfer in stimulated parametric
/// down-conversion and read the idler charge three ways.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output directory [default: out/<scenario>]
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Noise seed; scenario k of a sweep uses seed + k
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Enable shot noise with this mean count per detector pixel
    #[arg(long, global = true)]
    counts: Option<f64>,
    /// Grid samples per axis (the physical extent is kept)
    #[arg(long, global = true)]
    grid_n: Option<usize>,
    /// Print nothing but errors
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a JSON config
    Run { config: PathBuf },
    /// Run every (m_p, m_s) pair over a charge range
    Sweep {
        /// Inclusive range, e.g. -2..2
        #[arg(long, default_value = "-2..2", allow_hyphen_values = true, value_parser = parse_range)]
        charges: RangeInclusive<i32>,
    },
    /// Reproduce one of the figure scenarios
    Figure {
        #[arg(value_parser = FIGURES)]
        name: String,
    },
    /// Detect the fork in an external P5 graymap interferogram
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    image: PathBuf,
    /// Take the interferometer (and pixel size, if the image matches a scan) from a config
    #[arg(long)]
    config: Option<PathBuf>,
    /// Pixel pitch; lengths below are in the same unit [default: 1]
    #[arg(long)]
    pixel_size: Option<f64>,
    /// Fringe period
    #[arg(long, required_unless_present = "config")]
    period: Option<f64>,
    /// Horizontal shear between the arms
    #[arg(long, required_unless_present = "config")]
    shear: Option<f64>,
    /// Vertical tilt over horizontal tilt
    #[arg(long, default_value_t = DEFAULT_TILT_RATIO)]
    tilt_ratio: f64,
}

fn parse_range(s: &str) -> Result<RangeInclusive<i32>, String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: i32 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi: i32 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok(lo..=hi)
}

fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Config => EXIT_CONFIG,
        ErrorKind::Sampling => EXIT_SAMPLING,
        ErrorKind::Demodulation => EXIT_DEMODULATION,
        ErrorKind::Format => EXIT_FORMAT,
        ErrorKind::Domain | ErrorKind::Geometry | ErrorKind::Io => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn execute(cli: &Cli) -> Result<(), Error> {
    let common = &cli.common;
    match &cli.command {
        Command::Run { config } => run_one(common, read_config(config)?),
        Command::Figure { name } => run_one(common, ScenarioConfig::preset(name)?),
        Command::Sweep { charges } => run_sweep(common, charges.clone()),
        Command::Analyze(args) => analyze(common, args),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Error> {
    fs::read(path).map_err(|e| Error::from(e).with_context(path.display().to_string()))
}

fn read_config(path: &Path) -> Result<ScenarioConfig, Error> {
    let text = String::from_utf8(read(path)?)
        .map_err(|_| Error::Config(format!("{} is not UTF-8", path.display())))?;
    ScenarioConfig::from_json(&text)
}

fn apply_overrides(common: &Common, cfg: &mut ScenarioConfig) -> Result<(), Error> {
    if let Some(seed) = common.seed {
        cfg.noise_seed = Some(seed);
    }
    if let Some(counts) = common.counts {
        cfg.mean_counts = Some(counts);
    }
    if let Some(n) = common.grid_n {
        cfg.grid.n_x = n;
        cfg.grid.n_y = n;
    }
    cfg.validate()
}

fn out_dir(common: &Common, name: &str) -> PathBuf {
    common.out_dir.clone().unwrap_or_else(|| {
        let leaf = if name.is_empty() { "scenario" } else { name };
        Path::new("out").join(leaf)
    })
}

fn write_images(dir: &Path, run: &ScenarioRun) -> Result<(), Error> {
    for (record, image) in run.report.images.iter().zip(&run.images) {
        fs::write(dir.join(&record.file), &image.bitmap.bytes)?;
    }
    Ok(())
}

fn summary(run: &ScenarioRun) -> String {
    let r = &run.report;
    let m = r.measured;
    format!(
        "{}: m_p={:+} m_s={:+} expected {:+}, spectrum {:+} winding {:+} fork {:+} [{}]",
        r.name,
        r.pump_charge,
        r.aux_charge,
        r.expected_charge,
        m.spectrum,
        m.winding,
        m.fork,
        if r.conserved() {
            "conserved"
        } else {
            "MISMATCH"
        }
    )
}

fn run_one(common: &Common, mut cfg: ScenarioConfig) -> Result<(), Error> {
    apply_overrides(common, &mut cfg)?;
    let run = run_scenario(&cfg)?;
    let dir = out_dir(common, &cfg.name);
    fs::create_dir_all(&dir)?;
    write_images(&dir, &run)?;
    let report = serde_json::to_string_pretty(&run.report).expect("report serializes");
    fs::write(dir.join("report.json"), report + "\n")?;
    if !common.quiet {
        println!("{}", summary(&run));
        for w in &run.report.warnings {
            eprintln!("warning: {w}");
        }
        println!("wrote {}", dir.display());
    }
    Ok(())
}

fn run_sweep(common: &Common, charges: RangeInclusive<i32>) -> Result<(), Error> {
    let mut base = sweep_base();
    apply_overrides(common, &mut base)?;
    let runs = sweep(&base, charges)?;
    let dir = out_dir(common, &base.name);
    fs::create_dir_all(&dir)?;
    for run in &runs {
        write_images(&dir, run)?;
    }
    let reports: Vec<_> = runs.iter().map(|r| &r.report).collect();
    let report = serde_json::to_string_pretty(&reports).expect("report serializes");
    fs::write(dir.join("report.json"), report + "\n")?;
    if !common.quiet {
        for run in &runs {
            println!("{}", summary(run));
        }
        let ok = runs.iter().filter(|r| r.report.conserved()).count();
        println!(
            "{ok}/{} scenarios conserved; wrote {}",
            runs.len(),
            dir.display()
        );
    }
    Ok(())
}

/// Pixel pitch of `img` under `cfg`: the scan whose resolution matches the
/// image, over its window (or the whole grid).
fn scan_pixel_size(cfg: &ScenarioConfig, img: &GrayImage) -> Option<f64> {
    let matches = |s: &ScanConfig| s.n_x == img.width && s.n_y == img.height;
    let scan = [cfg.scan, cfg.pump_scan].into_iter().find(matches)?;
    let (ex, _) = scan
        .extent
        .unwrap_or((cfg.grid.extent_x, cfg.grid.extent_y));
    Some(ex / scan.n_x as f64)
}

fn analyze(common: &Common, args: &AnalyzeArgs) -> Result<(), Error> {
    let img = parse_pgm(&read(&args.image)?)?;
    let (michelson, pixel_size) = match &args.config {
        Some(path) => {
            let cfg = read_config(path)?;
            let pixel = args
                .pixel_size
                .or_else(|| scan_pixel_size(&cfg, &img))
                .ok_or_else(|| {
                    Error::Config(format!(
                        "{}x{} image matches no scan of the config; pass --pixel-size",
                        img.width, img.height
                    ))
                })?;
            (cfg.michelson, pixel)
        }
        None => {
            let (period, shear) = args.period.zip(args.shear).ok_or_else(|| {
                Error::Config("--period and --shear are required without --config".into())
            })?;
            (
                MichelsonConfig::from_fringes(period, args.tilt_ratio, shear),
                args.pixel_size.unwrap_or(1.0),
            )
        }
    };
    michelson.validate()?;
    let grid = img.to_real_grid(pixel_size)?;
    let report: ForkReport = detect_fork(&grid, &michelson)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    if !common.quiet {
        eprintln!("fork charge {:+}", report.charge);
    }
    Ok(())
}
