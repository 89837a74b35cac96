mod config;

use std::f64::consts::{PI, TAU};
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lpf_core::export::{
    emit_bode_svg, emit_comparison_csv, emit_netlist, emit_response_csv, emit_transient_csv,
    fmt_sig9, Analysis, DesignReport,
};
use lpf_core::model::validate_spec;
use lpf_core::response::{
    compare, harmonic_amplitude, sample_response, simulate_square_wave, FrequencyGrid,
    FrequencyResponse,
};
use lpf_core::sallen_key::{
    realization_error, round_to_series, synth_cascade, SallenKeyCascade, DEFAULT_C_FIRST_FARADS,
    DEFAULT_R_OHMS,
};
use lpf_core::{Corner, ESeries, FilterFamily, FilterRealization, FilterSpecification};

use config::{Config, ConfigError};

const DEFAULT_GRID_LO: f64 = 1.0;
const DEFAULT_GRID_HI: f64 = 1e4;
const DEFAULT_POINTS: usize = 512;
const DEFAULT_FIN_HZ: f64 = 15.91;
const DEFAULT_PERIODS: f64 = 40.0;
const ANALYSIS_PERIODS: usize = 10;

#[derive(Parser, Debug)]
#[command(
    name = "lpf",
    version,
    about = "Butterworth and Chebyshev-I low-pass filter design"
)]
struct Cli {
    /// TOML file whose keys mirror the long flag names; flags take precedence
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order, poles and cascade for a spec
    Design {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        format: FormatArgs,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Sampled frequency response as CSV, optionally an SVG Bode plot
    Respond {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Shift magnitudes so the grid maximum is 0 dB
        #[arg(long)]
        normalized: bool,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Square-wave transient through the cascade as CSV
    Simulate {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        square: SquareArgs,
        /// Integration step, seconds
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Sallen-Key component values and the error they introduce
    Synth {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        components: ComponentArgs,
        #[command(flatten)]
        format: FormatArgs,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// SPICE netlist of the synthesized cascade
    Netlist {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        components: ComponentArgs,
        #[arg(long, value_enum)]
        analysis: Option<AnalysisArg>,
        #[arg(long)]
        f_lo_hz: Option<f64>,
        #[arg(long)]
        f_hi_hz: Option<f64>,
        #[command(flatten)]
        square: SquareArgs,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Two designs of the same spec side by side
    Compare {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum)]
        family_b: Option<FamilyArg>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SpecArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Passband attenuation, dB (positive)
    #[arg(long)]
    ap: Option<f64>,
    /// Passband edge, rad/s
    #[arg(long)]
    wp: Option<f64>,
    /// Stopband attenuation, dB (positive)
    #[arg(long = "as")]
    as_db: Option<f64>,
    /// Stopband edge, rad/s
    #[arg(long)]
    ws: Option<f64>,
    /// Butterworth edge met exactly
    #[arg(long, value_enum)]
    corner: Option<CornerArg>,
    /// Read --wp, --ws, --grid-lo and --grid-hi as Hz
    #[arg(long)]
    hz: bool,
}

#[derive(Args, Debug)]
struct FormatArgs {
    #[arg(long, conflicts_with = "text")]
    json: bool,
    #[arg(long)]
    text: bool,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long)]
    grid_lo: Option<f64>,
    #[arg(long)]
    grid_hi: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Args, Debug)]
struct SquareArgs {
    #[arg(long)]
    fin_hz: Option<f64>,
    #[arg(long)]
    amp: Option<f64>,
    /// Seconds
    #[arg(long)]
    duration: Option<f64>,
}

#[derive(Args, Debug)]
struct ComponentArgs {
    #[arg(long)]
    r_ohms: Option<f64>,
    /// Capacitor of the first-order section, farads
    #[arg(long)]
    c_first: Option<f64>,
    #[arg(long, value_enum)]
    series: Option<SeriesArg>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    Butterworth,
    #[value(alias = "chebyshev", alias = "chebyshev_i")]
    Cheby1,
}

impl From<FamilyArg> for FilterFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Butterworth => FilterFamily::Butterworth,
            FamilyArg::Cheby1 => FilterFamily::ChebyshevI,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CornerArg {
    Passband,
    Stopband,
}

impl From<CornerArg> for Corner {
    fn from(c: CornerArg) -> Self {
        match c {
            CornerArg::Passband => Corner::Passband,
            CornerArg::Stopband => Corner::Stopband,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SeriesArg {
    E24,
    E96,
    None,
}

impl From<SeriesArg> for ESeries {
    fn from(s: SeriesArg) -> Self {
        match s {
            SeriesArg::E24 => ESeries::E24,
            SeriesArg::E96 => ESeries::E96,
            SeriesArg::None => ESeries::None,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum AnalysisArg {
    Ac,
    Tran,
}

#[derive(Debug)]
enum CliError {
    /// Bad spec, parameters or config contents.
    Usage(String),
    Io(String),
}

impl CliError {
    fn usage(e: impl Display) -> Self {
        CliError::Usage(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

fn from_config<T: ValueEnum>(value: Option<&String>, key: &str) -> Result<Option<T>, CliError> {
    value
        .map(|s| {
            T::from_str(s, true)
                .map_err(|_| CliError::Usage(format!("config: invalid {key} '{s}'")))
        })
        .transpose()
}

fn required(flag: Option<f64>, cfg: Option<f64>, name: &str) -> Result<f64, CliError> {
    flag.or(cfg)
        .ok_or_else(|| CliError::Usage(format!("missing --{name} (flag or config key '{name}')")))
}

struct Design {
    spec: FilterSpecification,
    corner: Corner,
    hz: bool,
}

impl Design {
    fn resolve(args: &SpecArgs, cfg: &Config) -> Result<Self, CliError> {
        let hz = args.hz || cfg.hz.unwrap_or(false);
        let scale = if hz { TAU } else { 1.0 };
        let ap = required(args.ap, cfg.ap, "ap")?;
        let wp = required(args.wp, cfg.wp, "wp")? * scale;
        let as_db = required(args.as_db, cfg.as_db, "as")?;
        let ws = required(args.ws, cfg.ws, "ws")? * scale;
        let spec = validate_spec(ap, wp, as_db, ws).map_err(CliError::usage)?;
        let corner = match args.corner {
            Some(c) => c,
            None => from_config(cfg.corner.as_ref(), "corner")?.unwrap_or(CornerArg::Passband),
        };
        Ok(Self {
            spec,
            corner: corner.into(),
            hz,
        })
    }

    fn family(args: &SpecArgs, cfg: &Config) -> Result<FilterFamily, CliError> {
        let family = match args.family {
            Some(f) => f,
            None => from_config(cfg.family.as_ref(), "family")?.unwrap_or(FamilyArg::Butterworth),
        };
        Ok(family.into())
    }

    fn realize(&self, family: FilterFamily) -> Result<FilterRealization, CliError> {
        lpf_core::design(family, &self.spec, self.corner).map_err(CliError::usage)
    }

    fn grid(&self, args: &GridArgs, cfg: &Config) -> Result<FrequencyGrid, CliError> {
        let scale = if self.hz { TAU } else { 1.0 };
        let lo = args.grid_lo.or(cfg.grid_lo).unwrap_or(DEFAULT_GRID_LO) * scale;
        let hi = args.grid_hi.or(cfg.grid_hi).unwrap_or(DEFAULT_GRID_HI) * scale;
        let points = args.points.or(cfg.points).unwrap_or(DEFAULT_POINTS);
        FrequencyGrid::log(lo, hi, points).map_err(CliError::usage)
    }
}

struct Square {
    freq_hz: f64,
    amplitude: f64,
    duration: f64,
}

impl Square {
    fn resolve(args: &SquareArgs, cfg: &Config) -> Self {
        let freq_hz = args.fin_hz.or(cfg.fin_hz).unwrap_or(DEFAULT_FIN_HZ);
        Self {
            freq_hz,
            amplitude: args.amp.or(cfg.amp).unwrap_or(1.0),
            duration: args
                .duration
                .or(cfg.duration)
                .unwrap_or(DEFAULT_PERIODS / freq_hz),
        }
    }
}

struct Components {
    r: f64,
    c_first: f64,
    series: ESeries,
}

impl Components {
    fn resolve(args: &ComponentArgs, cfg: &Config) -> Result<Self, CliError> {
        let series = match args.series {
            Some(s) => s,
            None => from_config(cfg.series.as_ref(), "series")?.unwrap_or(SeriesArg::None),
        };
        Ok(Self {
            r: args.r_ohms.or(cfg.r_ohms).unwrap_or(DEFAULT_R_OHMS),
            c_first: args
                .c_first
                .or(cfg.c_first)
                .unwrap_or(DEFAULT_C_FIRST_FARADS),
            series: series.into(),
        })
    }

    fn synth(&self, realization: &FilterRealization) -> Result<SallenKeyCascade, CliError> {
        let exact = synth_cascade(&realization.transfer_function(), self.r, self.c_first)
            .map_err(CliError::usage)?;
        Ok(round_to_series(&exact, self.series))
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report_text(
    report: &DesignReport,
    format: &FormatArgs,
    text_default: bool,
    cfg: &Config,
) -> String {
    let text = format.text || (!format.json && (cfg.text.unwrap_or(text_default)));
    if text {
        report.to_text()
    } else {
        report.to_json()
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        None => Config::default(),
        Some(path) => Config::load(path).map_err(|e| match e {
            ConfigError::Read(e) => CliError::Io(format!("cannot read {}: {e}", path.display())),
            ConfigError::Parse(e) => CliError::Usage(format!("config {}: {e}", path.display())),
        })?,
    };

    match &cli.command {
        Command::Design { spec, format, out } => {
            let design = Design::resolve(spec, &cfg)?;
            let realization = design.realize(Design::family(spec, &cfg)?)?;
            let report = DesignReport::new(&design.spec, &realization, Some(design.corner), None);
            write_output(out.as_deref(), &report_text(&report, format, false, &cfg))
        }

        Command::Respond {
            spec,
            grid,
            normalized,
            svg,
            out,
        } => {
            let design = Design::resolve(spec, &cfg)?;
            let family = Design::family(spec, &cfg)?;
            let realization = design.realize(family)?;
            let grid = design.grid(grid, &cfg)?;
            let mut resp = sample_response(&realization.transfer_function(), &grid);
            eprintln!(
                "{family} order {}: grid peak {} dB",
                realization.order(),
                fmt_sig9(resp.peak_db())
            );
            if *normalized || cfg.normalized.unwrap_or(false) {
                resp = resp.normalized_to_peak();
            }
            if let Some(path) = svg {
                let label = format!("{family} n={}", realization.order());
                let plot = emit_bode_svg(&[(&resp, &label)]).map_err(CliError::usage)?;
                write_output(Some(path), &plot)?;
            }
            write_output(out.as_deref(), &emit_response_csv(&resp))
        }

        Command::Simulate {
            spec,
            square,
            dt,
            out,
        } => {
            let design = Design::resolve(spec, &cfg)?;
            let realization = design.realize(Design::family(spec, &cfg)?)?;
            let tf = realization.transfer_function();
            let sq = Square::resolve(square, &cfg);
            let max_pole = tf.poles().iter().map(|p| p.magnitude()).fold(0.0, f64::max);
            let auto_dt = (1.0 / (200.0 * sq.freq_hz)).min(0.01 / max_pole);
            let dt = dt.or(cfg.dt).unwrap_or(auto_dt);
            let trace = simulate_square_wave(&tf, sq.freq_hz, sq.amplitude, sq.duration, dt)
                .map_err(CliError::usage)?;
            for harmonic in [1, 3] {
                let w = TAU * sq.freq_hz * harmonic as f64;
                let expected = 4.0 / PI * sq.amplitude / harmonic as f64 * tf.evaluate(w).norm();
                if let Some(measured) =
                    harmonic_amplitude(&trace, sq.freq_hz, harmonic, ANALYSIS_PERIODS)
                {
                    eprintln!(
                        "harmonic {harmonic}: measured {} expected {}",
                        fmt_sig9(measured),
                        fmt_sig9(expected)
                    );
                }
            }
            write_output(out.as_deref(), &emit_transient_csv(&trace))
        }

        Command::Synth {
            spec,
            components,
            format,
            out,
        } => {
            let design = Design::resolve(spec, &cfg)?;
            let realization = design.realize(Design::family(spec, &cfg)?)?;
            let comps = Components::resolve(components, &cfg)?;
            let cascade = comps.synth(&realization)?;
            let tf = realization.transfer_function();
            let wc = realization.char_freq();
            let grid = FrequencyGrid::log(wc / 100.0, wc * 100.0, 1000).map_err(CliError::usage)?;
            let err =
                realization_error(&tf, &cascade.realized_tf, &grid).map_err(CliError::usage)?;
            let mut report = DesignReport::new(
                &design.spec,
                &realization,
                Some(design.corner),
                Some((&cascade, comps.r, comps.c_first, comps.series)),
            );
            report.notes.push(format!(
                "realized response error ({} components): max {} dB, rms {} dB",
                comps.series,
                fmt_sig9(err.max_db),
                fmt_sig9(err.rms_db)
            ));
            write_output(out.as_deref(), &report_text(&report, format, true, &cfg))
        }

        Command::Netlist {
            spec,
            components,
            analysis,
            f_lo_hz,
            f_hi_hz,
            square,
            out,
        } => {
            let design = Design::resolve(spec, &cfg)?;
            let family = Design::family(spec, &cfg)?;
            let realization = design.realize(family)?;
            let cascade = Components::resolve(components, &cfg)?.synth(&realization)?;
            let kind = match analysis {
                Some(a) => *a,
                None => from_config(cfg.analysis.as_ref(), "analysis")?.unwrap_or(AnalysisArg::Ac),
            };
            let analysis = match kind {
                AnalysisArg::Ac => Analysis::Ac {
                    f_lo_hz: f_lo_hz.or(cfg.f_lo_hz).unwrap_or(0.1),
                    f_hi_hz: f_hi_hz.or(cfg.f_hi_hz).unwrap_or(1e3),
                },
                AnalysisArg::Tran => {
                    let sq = Square::resolve(square, &cfg);
                    Analysis::Tran {
                        freq_hz: sq.freq_hz,
                        amplitude: sq.amplitude,
                        duration: sq.duration,
                    }
                }
            };
            let s = &design.spec;
            let title = format!(
                "{family} low-pass, order {}, Ap {} dB at {} rad/s, As {} dB at {} rad/s",
                realization.order(),
                fmt_sig9(s.ap_db()),
                fmt_sig9(s.omega_p()),
                fmt_sig9(s.as_db()),
                fmt_sig9(s.omega_s())
            );
            let text = emit_netlist(&title, &cascade, &analysis).map_err(CliError::usage)?;
            write_output(out.as_deref(), &text)
        }

        Command::Compare {
            spec,
            family_b,
            grid,
            svg,
            out,
        } => {
            let design = Design::resolve(spec, &cfg)?;
            let family_a = Design::family(spec, &cfg)?;
            let family_b: FilterFamily = match family_b {
                Some(f) => *f,
                None => {
                    from_config(cfg.family_b.as_ref(), "family-b")?.unwrap_or(FamilyArg::Cheby1)
                }
            }
            .into();
            let grid = design.grid(grid, &cfg)?;
            let a = design.realize(family_a)?;
            let b = design.realize(family_b)?;
            let resp_a = sample_response(&a.transfer_function(), &grid);
            let resp_b = sample_response(&b.transfer_function(), &grid);
            let band = (design.spec.omega_p(), design.spec.omega_s());
            let cmp = compare(&resp_a, &resp_b, band).map_err(CliError::usage)?;
            summarize(
                &[
                    (family_a, &a, cmp.slope_a_db_per_octave),
                    (family_b, &b, cmp.slope_b_db_per_octave),
                ],
                band,
            );
            if let Some(path) = svg {
                let la = format!("{family_a} n={}", a.order());
                let lb = format!("{family_b} n={}", b.order());
                let curves: [(&FrequencyResponse, &str); 2] = [(&resp_a, &la), (&resp_b, &lb)];
                let plot = emit_bode_svg(&curves).map_err(CliError::usage)?;
                write_output(Some(path), &plot)?;
            }
            write_output(out.as_deref(), &emit_comparison_csv(&resp_a, &resp_b, &cmp))
        }
    }
}

fn summarize(designs: &[(FilterFamily, &FilterRealization, f64); 2], band: (f64, f64)) {
    for (family, r, slope) in designs {
        eprintln!(
            "{family}: order {}, slope {} dB/octave between {} and {} rad/s",
            r.order(),
            fmt_sig9(*slope),
            fmt_sig9(band.0),
            fmt_sig9(band.1)
        );
    }
    let [(fa, ra, sa), (fb, rb, sb)] = designs;
    match ra.order().cmp(&rb.order()) {
        std::cmp::Ordering::Less => {
            eprintln!(
                "{fa} meets the spec with the smaller order ({} vs {})",
                ra.order(),
                rb.order()
            )
        }
        std::cmp::Ordering::Greater => {
            eprintln!(
                "{fb} meets the spec with the smaller order ({} vs {})",
                rb.order(),
                ra.order()
            )
        }
        std::cmp::Ordering::Equal => eprintln!("both designs need order {}", ra.order()),
    }
    let steeper = if sb < sa { fb } else { fa };
    eprintln!("steeper roll-off in the transition band: {steeper}");
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lpf: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
