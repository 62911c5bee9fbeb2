//! Command-line front-end: signal generation, filter design, frequency
//! analysis, filtering, multi-resolution decomposition, simulation, and
//! system identification over CSV/JSON files.
//!
//! Exit codes: 0 on success, 1 for runtime or numerical failures (one
//! diagnostic line on stderr), 2 for usage errors.

mod io;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ltikit::filters::{
    butterworth, fir_apply, fir_zero_phase, firwin, iir_zero_phase, WindowKind,
};
use ltikit::lti::{RationalTransferFunction, TfDomain};
use ltikit::mra::{decompose, FrequencySplitting};
use ltikit::signal::{elementary, sample_continuous, DiscreteSignal, Elementary};
use ltikit::spectral::{dft, fft_pow2, frequency_grid};
use ltikit::stochastic::{
    synthetic_signal, white_noise, NoiseDistribution, NoiseSpec, ToneComponent,
};
use ltikit::sysid::{to_transfer_function, HankelRegression};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ltikit", version, about = "SISO LTI systems toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a signal file.
    Gen(GenArgs),
    /// Design a low-pass FIR filter (windowed sinc) and write its taps.
    FirDesign(FirDesignArgs),
    /// Design a low-pass Butterworth filter and write its transfer function.
    IirDesign(IirDesignArgs),
    /// Evaluate a filter's frequency response on a uniform grid.
    Freqz(FreqzArgs),
    /// Apply a filter causally to a signal.
    Filter(FilterArgs),
    /// Apply a filter with zero phase (offline).
    Filtfilt(FilterArgs),
    /// Decompose a signal into frequency-band scales.
    Mra(MraArgs),
    /// Drive a discrete transfer function with an input signal.
    Simulate(SimulateArgs),
    /// Impulse response of a transfer function.
    Impulse(ResponseArgs),
    /// Step response of a transfer function.
    StepResponse(ResponseArgs),
    /// Discrete Fourier transform of a signal.
    Dft(DftArgs),
    /// Identify difference-equation coefficients from input/output data.
    Sysid(SysidArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Exercise1,
    Exercise5,
    Tone,
    Noise,
    Step,
    Delta,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistKind {
    Uniform01,
    Gaussian,
}

#[derive(Clone, Copy, ValueEnum)]
enum WindowArg {
    Rectangular,
    Hanning,
    Hamming,
    Blackman,
}

impl From<WindowArg> for WindowKind {
    fn from(w: WindowArg) -> Self {
        match w {
            WindowArg::Rectangular => WindowKind::Rectangular,
            WindowArg::Hanning => WindowKind::Hanning,
            WindowArg::Hamming => WindowKind::Hamming,
            WindowArg::Blackman => WindowKind::Blackman,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// Signal kind.
    #[arg(long, value_enum)]
    kind: GenKind,
    /// Sample count (tone/noise/step/delta).
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Sample rate in Hz (tone).
    #[arg(long)]
    fs: Option<f64>,
    /// Tone frequency in Hz.
    #[arg(long, default_value_t = 1.0)]
    freq: f64,
    /// Tone amplitude.
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    /// Index of the step/delta onset.
    #[arg(long, default_value_t = 0)]
    k0: usize,
    /// Noise seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Noise distribution.
    #[arg(long, value_enum, default_value_t = DistKind::Uniform01)]
    dist: DistKind,
    /// Gaussian mean.
    #[arg(long, default_value_t = 0.0)]
    mean: f64,
    /// Gaussian standard deviation.
    #[arg(long, default_value_t = 1.0)]
    std: f64,
    /// Output signal file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FirDesignArgs {
    /// Filter order (odd tap count).
    #[arg(long)]
    order: usize,
    /// Cut-off frequency in Hz.
    #[arg(long)]
    fc: f64,
    /// Sample rate in Hz.
    #[arg(long)]
    fs: f64,
    /// Window function.
    #[arg(long, value_enum, default_value_t = WindowArg::Hamming)]
    window: WindowArg,
    /// Output tap file (single-column CSV).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct IirDesignArgs {
    /// Filter order (pole count).
    #[arg(long)]
    order: usize,
    /// Cut-off frequency in Hz.
    #[arg(long)]
    fc: f64,
    /// Sample rate in Hz.
    #[arg(long)]
    fs: f64,
    /// Output transfer-function JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FreqzArgs {
    /// Filter file: tap CSV or transfer-function JSON.
    #[arg(long)]
    filter: PathBuf,
    /// Number of grid points over [0, fs).
    #[arg(long, default_value_t = 512)]
    points: usize,
    /// Sample rate override in Hz (defaults to the filter's own, else 1).
    #[arg(long)]
    fs: Option<f64>,
    /// Output spectrum CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FilterArgs {
    /// Filter file: tap CSV or transfer-function JSON.
    #[arg(long)]
    filter: PathBuf,
    /// Input signal file.
    #[arg(long)]
    input: PathBuf,
    /// Output signal file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MraArgs {
    /// Comma-separated splitting frequencies in Hz.
    #[arg(long)]
    split: String,
    /// Shared filter order (odd).
    #[arg(long, default_value_t = 511)]
    order: usize,
    /// Window function.
    #[arg(long, value_enum, default_value_t = WindowArg::Hamming)]
    window: WindowArg,
    /// Sample rate override in Hz (defaults to the input file's).
    #[arg(long)]
    fs: Option<f64>,
    /// Input signal file.
    #[arg(long)]
    input: PathBuf,
    /// Output per-scale CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Transfer-function JSON (z-domain).
    #[arg(long)]
    tf: PathBuf,
    /// Input signal file.
    #[arg(long)]
    input: PathBuf,
    /// Output signal file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ResponseArgs {
    /// Transfer-function JSON.
    #[arg(long)]
    tf: PathBuf,
    /// Response length in samples (z-domain).
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Evaluation rate in Hz for continuous responses.
    #[arg(long, default_value_t = 100.0)]
    fs: f64,
    /// Time horizon in seconds for continuous responses.
    #[arg(long, default_value_t = 5.0)]
    t_max: f64,
    /// Output signal file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DftArgs {
    /// Input signal file.
    #[arg(long)]
    input: PathBuf,
    /// Use the radix-2 transform (length must be a power of two).
    #[arg(long)]
    fft: bool,
    /// Sample rate override in Hz for the frequency column.
    #[arg(long)]
    fs: Option<f64>,
    /// Output spectrum CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SysidArgs {
    /// Input (excitation) signal file.
    #[arg(long)]
    input: PathBuf,
    /// Measured output signal file.
    #[arg(long)]
    output_data: PathBuf,
    /// Feedforward lag count.
    #[arg(long)]
    nb: usize,
    /// Feedback lag count.
    #[arg(long)]
    na: usize,
    /// Ridge regularization weight.
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Drop the rows contaminated by the zero pre-history.
    #[arg(long)]
    drop_contaminated: bool,
    /// Sample period override in seconds (defaults to the data's).
    #[arg(long)]
    dt: Option<f64>,
    /// Output model JSON.
    #[arg(long)]
    out: PathBuf,
    /// Optional diagnostics JSON (weights, residual, condition estimate).
    #[arg(long)]
    diagnostics: Option<PathBuf>,
}

enum LoadedFilter {
    Fir(Vec<f64>),
    Iir(RationalTransferFunction),
}

fn load_filter(path: &Path) -> Result<LoadedFilter> {
    if path.extension().is_some_and(|e| e == "json") {
        Ok(LoadedFilter::Iir(load_tf(path)?))
    } else {
        Ok(LoadedFilter::Fir(io::read_taps(path)?))
    }
}

fn load_tf(path: &Path) -> Result<RationalTransferFunction> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(RationalTransferFunction::from_json(&text)?)
}

fn require_fs(file_fs: Option<f64>, flag_fs: Option<f64>, what: &str) -> Result<f64> {
    flag_fs
        .or(file_fs)
        .ok_or_else(|| anyhow!("{what} needs a sample rate: add a t column or pass --fs"))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(args) => gen(args),
        Command::FirDesign(args) => {
            let design = firwin(args.order, args.fc, args.fs, args.window.into())?;
            io::write_taps(&args.out, design.taps())
        }
        Command::IirDesign(args) => {
            let tf = butterworth(args.order, args.fc, args.fs)?;
            std::fs::write(&args.out, tf.to_json())
                .with_context(|| format!("writing {}", args.out.display()))
        }
        Command::Freqz(args) => freqz(args),
        Command::Filter(args) => {
            let u = io::read_signal(&args.input)?;
            let y = match load_filter(&args.filter)? {
                LoadedFilter::Fir(taps) => fir_apply(&taps, &u)?,
                LoadedFilter::Iir(tf) => tf.simulate(&u)?,
            };
            io::write_signal(&args.out, &y)
        }
        Command::Filtfilt(args) => {
            let u = io::read_signal(&args.input)?;
            let y = match load_filter(&args.filter)? {
                LoadedFilter::Fir(taps) => fir_zero_phase(&taps, &u)?,
                LoadedFilter::Iir(tf) => iir_zero_phase(&tf, &u)?,
            };
            io::write_signal(&args.out, &y)
        }
        Command::Mra(args) => mra(args),
        Command::Simulate(args) => {
            let tf = load_tf(&args.tf)?;
            let u = io::read_signal(&args.input)?;
            io::write_signal(&args.out, &tf.simulate(&u)?)
        }
        Command::Impulse(args) => response(args, false),
        Command::StepResponse(args) => response(args, true),
        Command::Dft(args) => run_dft(args),
        Command::Sysid(args) => sysid(args),
    }
}

fn gen(args: GenArgs) -> Result<()> {
    let signal = match args.kind {
        GenKind::Exercise1 => {
            // Damped cosine sampled at 100 Hz over 320 points.
            sample_continuous(|t| (-0.2 * t).exp() * (2.0 * PI * t).cos(), 100.0, 320, 0.0)?
        }
        GenKind::Exercise5 => {
            let fs = 1000.0;
            let grid: Vec<f64> = (0..4096).map(|k| k as f64 / fs).collect();
            let components = [
                ToneComponent {
                    amplitude: 2.0,
                    frequency_hz: 1.0,
                    center_s: 1.0,
                    width: 0.05,
                },
                ToneComponent {
                    amplitude: 1.0,
                    frequency_hz: 20.0,
                    center_s: 2.2,
                    width: 0.05,
                },
                ToneComponent {
                    amplitude: 1.0,
                    frequency_hz: 90.0,
                    center_s: 0.0,
                    width: f64::INFINITY,
                },
            ];
            let noise = NoiseSpec::new(
                args.seed,
                NoiseDistribution::Gaussian {
                    mean: 0.0,
                    std_dev: 0.2,
                },
            )?;
            synthetic_signal(&grid, &components, Some(&noise))?.set_sample_rate(fs)?
        }
        GenKind::Tone => {
            let fs = args
                .fs
                .ok_or_else(|| anyhow!("tone generation requires --fs"))?;
            let (a, f) = (args.amplitude, args.freq);
            sample_continuous(|t| a * (2.0 * PI * f * t).sin(), fs, args.n, 0.0)?
        }
        GenKind::Noise => {
            let dist = match args.dist {
                DistKind::Uniform01 => NoiseDistribution::Uniform01,
                DistKind::Gaussian => NoiseDistribution::Gaussian {
                    mean: args.mean,
                    std_dev: args.std,
                },
            };
            let signal = white_noise(&NoiseSpec::new(args.seed, dist)?, args.n)?;
            match args.fs {
                Some(fs) => signal.set_sample_rate(fs)?,
                None => signal,
            }
        }
        GenKind::Step => elementary(Elementary::Step, args.n, args.k0, None)?,
        GenKind::Delta => elementary(Elementary::Delta, args.n, args.k0, None)?,
    };
    io::write_signal(&args.out, &signal)
}

fn freqz(args: FreqzArgs) -> Result<()> {
    if args.points == 0 {
        bail!("--points must be at least 1");
    }
    let n = args.points;
    match load_filter(&args.filter)? {
        LoadedFilter::Fir(taps) => {
            let fs = args.fs.unwrap_or(1.0);
            let thetas: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
            let frame = ltikit::spectral::dtft(&DiscreteSignal::new(taps)?, &thetas);
            io::write_spectrum(&args.out, &frame, &frequency_grid(n, fs)?)
        }
        LoadedFilter::Iir(tf) => match tf.domain() {
            TfDomain::Z => {
                let fs = args.fs.or(tf.dt().map(|dt| 1.0 / dt)).unwrap_or(1.0);
                let thetas: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
                let frame = tf.freq_response(&thetas)?;
                io::write_spectrum(&args.out, &frame, &frequency_grid(n, fs)?)
            }
            TfDomain::S => {
                let fs = args.fs.unwrap_or(1.0);
                let f_hz = frequency_grid(n, fs)?;
                let omegas: Vec<f64> = f_hz.iter().map(|f| 2.0 * PI * f).collect();
                let frame = tf.freq_response(&omegas)?;
                io::write_spectrum(&args.out, &frame, &f_hz)
            }
        },
    }
}

fn mra(args: MraArgs) -> Result<()> {
    let u = io::read_signal(&args.input)?;
    let fs = require_fs(u.sample_rate(), args.fs, "mra")?;
    let cutoffs: Vec<f64> = args
        .split
        .split(',')
        .map(|s| s.trim().parse::<f64>().context("bad splitting frequency"))
        .collect::<Result<_>>()?;
    let split = FrequencySplitting::new(cutoffs, fs, args.order, args.window.into())?;
    let scales = decompose(&u, &split)?;
    io::write_scales(&args.out, &scales)
}

fn response(args: ResponseArgs, step: bool) -> Result<()> {
    let tf = load_tf(&args.tf)?;
    let signal = match tf.domain() {
        TfDomain::Z => {
            if step {
                let u = elementary(Elementary::Step, args.n, 0, None)?;
                tf.simulate(&u)?
            } else {
                tf.impulse_response_z(args.n)?
            }
        }
        TfDomain::S => {
            if !(args.fs > 0.0) || !(args.t_max > 0.0) {
                bail!("continuous responses need positive --fs and --t-max");
            }
            let count = (args.t_max * args.fs).round() as usize + 1;
            let grid: Vec<f64> = (0..count).map(|k| k as f64 / args.fs).collect();
            let values = if step {
                tf.step_response_s(&grid)?
            } else {
                tf.impulse_response_s(&grid)?
            };
            DiscreteSignal::with_sample_rate(values, args.fs)?
        }
    };
    io::write_signal(&args.out, &signal)
}

fn run_dft(args: DftArgs) -> Result<()> {
    let u = io::read_signal(&args.input)?;
    let frame = if args.fft { fft_pow2(&u)? } else { dft(&u)? };
    let fs = args.fs.or(u.sample_rate()).unwrap_or(1.0);
    io::write_spectrum(&args.out, &frame, &frequency_grid(u.len(), fs)?)
}

fn sysid(args: SysidArgs) -> Result<()> {
    let u = io::read_signal(&args.input)?;
    let y = io::read_signal(&args.output_data)?;
    let mut reg = HankelRegression::build(&u, &y, args.nb, args.na)?;
    let mut rows_dropped = 0;
    if args.drop_contaminated {
        rows_dropped = reg.rows();
        reg = reg.drop_contaminated()?;
        rows_dropped -= reg.rows();
    }
    let solution = reg.ridge_solve(args.alpha)?;
    let dt = args
        .dt
        .or(u.sample_rate().map(|fs| 1.0 / fs))
        .unwrap_or(1.0);
    let model = to_transfer_function(&solution.weights, args.nb, args.na, dt)?;
    std::fs::write(&args.out, model.to_json())
        .with_context(|| format!("writing {}", args.out.display()))?;
    if let Some(path) = args.diagnostics {
        let report = serde_json::json!({
            "weights": solution.weights,
            "residual_norm": solution.residual_norm,
            "condition_estimate": solution.condition_estimate,
            "rows_dropped": rows_dropped,
            "alpha": args.alpha,
            "nb": args.nb,
            "na": args.na,
        });
        std::fs::write(&path, serde_json::to_string_pretty(&report)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
