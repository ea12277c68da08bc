use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use sonohaptics::analyze::{analyze, AnalysisMode, DistinctivenessReport};
use sonohaptics::scene_io::{load_presets, load_scene, PngTextures};
use sonohaptics::simulate::{simulate, DEFAULT_NOISE_DEG, DEFAULT_TRIALS};
use sonohaptics::trace::{load_trace, replay, write_events};
use sonohaptics::wav::{write_haptics_json, write_wav};
use sonohaptics::{server, simulate};
use sonohaptics_core::crossmodal::{CueKind, HeadPose, PresetTable};
use sonohaptics_core::engine::{Engine, EngineConfig, DEFAULT_CAST_RADIUS, DEFAULT_LOCAL_RADIUS};
use sonohaptics_core::synthesis::{render_cue_audio, render_cue_haptics, SynthConfig};
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(name = "sonohaptics", version, about = "Audio-haptic hover cues for gaze-based object selection")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct EngineArgs {
    /// Sphere cast radius in scene units.
    #[arg(long, default_value_t = DEFAULT_CAST_RADIUS)]
    cast_radius: f64,
    #[arg(long, value_enum, default_value = "sonohaptics")]
    kind: KindArg,
    /// Snap pitches to the nearest semitone between C3 and B5.
    #[arg(long)]
    snap: bool,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum KindArg {
    Sonohaptics,
    Static,
    Silent,
}

impl From<KindArg> for CueKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Sonohaptics => CueKind::Sonohaptics,
            KindArg::Static => CueKind::Static,
            KindArg::Silent => CueKind::Silent,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Report the cue table and pairwise cue gaps for a scene.
    Analyze {
        scene: PathBuf,
        #[arg(long, value_enum, default_value = "global")]
        mode: AnalysisMode,
        #[arg(long)]
        anchor: Option<String>,
        #[arg(long, default_value_t = DEFAULT_LOCAL_RADIUS)]
        radius: f64,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Run a gaze trace through a fresh engine and write the event log.
    Replay {
        scene: PathBuf,
        trace: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LOCAL_RADIUS)]
        radius: f64,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Estimate selection error under angular gaze noise.
    Simulate {
        scene: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NOISE_DEG)]
        noise_deg: f64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CAST_RADIUS)]
        cast_radius: f64,
    },
    /// Render one object's hover cue to WAV (and optionally haptic JSON).
    Render {
        scene: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long)]
        wav: PathBuf,
        #[arg(long)]
        haptics: Option<PathBuf>,
        /// JSON list of timbre presets overriding the defaults.
        #[arg(long)]
        presets: Option<PathBuf>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Serve interactive sessions over WebSocket (`/ws`).
    Serve {
        scene: PathBuf,
        #[arg(long, default_value_t = 8787)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long, default_value_t = DEFAULT_LOCAL_RADIUS)]
        radius: f64,
        #[arg(long)]
        presets: Option<PathBuf>,
        #[command(flatten)]
        engine: EngineArgs,
    },
}

fn build_engine(scene_path: &Path, args: &EngineArgs, local_radius: f64) -> Result<Engine> {
    let scene = load_scene(scene_path)?;
    let mut config = EngineConfig { cast_radius: args.cast_radius, local_radius, ..EngineConfig::default() };
    config.cue.kind = args.kind.into();
    config.cue.snap_to_scale = args.snap;
    Ok(Engine::new(scene, config, &PngTextures::beside(scene_path))?)
}

fn presets_from(path: Option<&Path>) -> Result<PresetTable> {
    Ok(path.map(load_presets).transpose()?.unwrap_or_default())
}

fn print_report(report: &DistinctivenessReport) {
    println!("{:<28} {:>9} {:>9} {:>7}  timbre", "object", "pitch Hz", "amp", "pan");
    for row in &report.cues {
        println!("{:<28} {:>9.2} {:>9.4} {:>7.3}  {}", row.id, row.pitch_hz, row.amplitude, row.pan, row.timbre);
    }
    let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
    println!("pitch gap      min {} mean {}", fmt(report.pitch_gap.min), fmt(report.pitch_gap.mean));
    println!("amplitude gap  min {} mean {}", fmt(report.amplitude_gap.min), fmt(report.amplitude_gap.mean));
    if let (Some(p), Some(a)) = (report.global_pitch_gap, report.global_amplitude_gap) {
        println!("global feedback on the same cluster:");
        println!("pitch gap      min {} mean {}", fmt(p.min), fmt(p.mean));
        println!("amplitude gap  min {} mean {}", fmt(a.min), fmt(a.mean));
    }
}

fn main() -> Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("warn")))
        .with_writer(std::io::stderr)
        .init();

    match Cli::parse().command {
        Cmd::Analyze { scene, mode, anchor, radius, json, engine } => {
            if mode == AnalysisMode::Local && anchor.is_none() {
                bail!("--mode local needs --anchor ID");
            }
            let engine = build_engine(&scene, &engine, radius)?;
            let report = analyze(&engine, mode, anchor.as_deref(), radius)?;
            print_report(&report);
            if let Some(path) = json {
                fs::write(&path, serde_json::to_string_pretty(&report)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Cmd::Replay { scene, trace, out, radius, engine } => {
            let engine = build_engine(&scene, &engine, radius)?;
            let lines = load_trace(&trace)?;
            let events = replay(engine, &lines);
            write_events(&events, &out)?;
            eprintln!("{} events -> {}", events.len(), out.display());
        }
        Cmd::Simulate { scene, noise_deg, trials, seed, cast_radius } => {
            if trials == 0 {
                bail!("--trials must be positive");
            }
            if !(noise_deg >= 0.0 && noise_deg.is_finite()) {
                bail!("--noise-deg must be a non-negative number");
            }
            let args = EngineArgs { cast_radius, kind: KindArg::Sonohaptics, snap: false };
            let engine = build_engine(&scene, &args, DEFAULT_LOCAL_RADIUS)?;
            let report: simulate::SimulationReport = simulate(&engine, noise_deg, trials, seed);
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Cmd::Render { scene, object, wav, haptics, presets, seed, engine } => {
            let engine = build_engine(&scene, &engine, DEFAULT_LOCAL_RADIUS)?;
            let vp = engine.scene().viewpoint();
            let cue = engine.global_cue(&object, &HeadPose { position: vp.position, forward: vp.forward })?;
            let cfg = SynthConfig { seed, ..SynthConfig::default() };
            let audio = render_cue_audio(&cue, &presets_from(presets.as_deref())?, &cfg)?;
            write_wav(&audio, &wav)?;
            if let Some(path) = haptics {
                write_haptics_json(&render_cue_haptics(&cue, &cfg)?, path)?;
            }
            println!("{}", serde_json::to_string(&cue)?);
        }
        Cmd::Serve { scene, port, host, radius, presets, engine } => {
            let engine = build_engine(&scene, &engine, radius)?;
            let presets = presets_from(presets.as_deref())?;
            let runtime = tokio::runtime::Runtime::new()?;
            runtime
                .block_on(server::serve(engine, presets, SocketAddr::new(host, port)))
                .context("server failed")?;
        }
    }
    Ok(())
}
