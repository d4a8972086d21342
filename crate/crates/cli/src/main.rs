//! `surround`: region detection, 5.1 rendering and audio similarity from the
//! command line.

mod commands;
mod config;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{ConfigFile, CONFIG_ENV};

#[derive(Debug, Parser)]
#[command(
    name = "surround",
    version,
    about = "Place, render and compare 5.1 surround audio"
)]
struct Cli {
    /// More log output on stderr (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    /// JSON config file with default render, mapping and metric parameters.
    #[arg(long, env = CONFIG_ENV, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    F32,
    Pcm16,
}

impl From<FormatArg> for surround_core::io::OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::F32 => surround_core::io::OutputFormat::F32,
            FormatArg::Pcm16 => surround_core::io::OutputFormat::Pcm16,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AxisArg {
    Frontal,
    Vertical,
    Lateral,
}

#[derive(Debug, Clone, Args)]
struct RenderFlags {
    /// Output sample rate in Hz.
    #[arg(long, visible_alias = "render.sample-rate")]
    sample_rate: Option<u32>,
    /// Speed of sound in m/s.
    #[arg(long, visible_alias = "render.speed-of-sound")]
    speed_of_sound: Option<f64>,
    /// Distance (m) below which attenuation stops growing.
    #[arg(long, visible_alias = "render.attenuation-clamp")]
    attenuation_clamp: Option<f64>,
    /// Linear-interpolation fractional delays.
    #[arg(long, visible_alias = "render.fractional-delay")]
    fractional_delay: bool,
    /// 120 Hz low-pass on the LFE channel.
    #[arg(long, visible_alias = "render.lfe-lowpass")]
    lfe_lowpass: bool,
    #[arg(long, value_enum, visible_alias = "render.output-format")]
    output_format: Option<FormatArg>,
}

#[derive(Debug, Clone, Args)]
struct MappingFlags {
    #[arg(long = "mapping.lateral-extent")]
    lateral_extent: Option<f64>,
    #[arg(long = "mapping.frontal-extent")]
    frontal_extent: Option<f64>,
    #[arg(long = "mapping.vertical-extent")]
    vertical_extent: Option<f64>,
    #[arg(long = "mapping.depth-axis", value_enum)]
    depth_axis: Option<AxisArg>,
}

#[derive(Debug, Clone, Args)]
struct MetricFlags {
    #[arg(long = "metrics.sample-rate")]
    sample_rate: Option<u32>,
    #[arg(long = "metrics.frame-length")]
    frame_length: Option<usize>,
    #[arg(long = "metrics.hop-length")]
    hop_length: Option<usize>,
    #[arg(long = "metrics.n-mfcc")]
    n_mfcc: Option<usize>,
    #[arg(long = "metrics.spectrum-window")]
    spectrum_window: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect regions in a mask + depth map and write them as JSON.
    Geometry {
        #[arg(long)]
        mask: PathBuf,
        #[arg(long)]
        depth: PathBuf,
        /// Drop regions smaller than this fraction of the image.
        #[arg(long)]
        min_area: Option<f64>,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        mapping: MappingFlags,
    },
    /// Render a scene file to a 6-channel WAV.
    Render {
        scene: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        render: RenderFlags,
        #[command(flatten)]
        mapping: MappingFlags,
    },
    /// Compare two WAV files, or every pair listed in a manifest.
    Metrics {
        #[arg(required_unless_present = "manifest", conflicts_with = "manifest")]
        a: Option<PathBuf>,
        #[arg(required_unless_present = "manifest", conflicts_with = "manifest")]
        b: Option<PathBuf>,
        /// Text file with one `path_a path_b` pair per line.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        /// CSV summary for manifest mode (default: output with .csv extension).
        #[arg(long, requires = "manifest")]
        csv: Option<PathBuf>,
        #[command(flatten)]
        params: MetricFlags,
    },
    /// Mask + depth + per-region clips to a 6-channel WAV in one go.
    Pipeline {
        #[arg(long)]
        mask: PathBuf,
        #[arg(long)]
        depth: PathBuf,
        /// JSON object mapping region id or label to a mono WAV path.
        #[arg(long)]
        clips: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Regions JSON output (default: output with .regions.json extension).
        #[arg(long)]
        regions: Option<PathBuf>,
        /// Also write the intermediate scene file here.
        #[arg(long)]
        scene_out: Option<PathBuf>,
        #[arg(long)]
        min_area: Option<f64>,
        /// Command run for regions without a clip; `{id}`, `{label}` and
        /// `{out}` are substituted, and the command must write a WAV to `{out}`.
        #[arg(long)]
        generator: Option<String>,
        #[command(flatten)]
        render: RenderFlags,
        #[command(flatten)]
        mapping: MappingFlags,
    },
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format(|buf, record| {
            writeln!(
                buf,
                "level={} target={} msg={:?}",
                record.level(),
                record.target(),
                record.args().to_string()
            )
        })
        .target(env_logger::Target::Stderr)
        .init();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging(cli.verbose);
    let result =
        ConfigFile::load(cli.config.as_deref()).and_then(|cfg| commands::run(cli.command, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
