use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use simvec::adapters::{Rasterizer, TopicProvider};
use simvec::config::{parse_mix, Config};
use simvec::pipeline::{
    cmd_convert, cmd_eval, cmd_oldify, cmd_render, cmd_synth, cmd_tokens, cmd_verify, EvalMode, PipelineError,
    SynthOptions,
};
use simvec::IngestOptions;

#[derive(Parser)]
#[command(name = "simvec", version, about = "SimVec chart corpus tools")]
struct Cli {
    /// TOML config; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate charts, SimVec, QA and a manifest.
    Synth {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        /// Chart type weights, bar:line:area.
        #[arg(long)]
        mix: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write historical variants (historical, faded; none disables).
        #[arg(long)]
        oldify_preset: Option<String>,
        #[arg(long)]
        workers: Option<usize>,
        /// Rasterizer template with {input}, {output} and {width}.
        #[arg(long)]
        rasterizer_cmd: Option<String>,
    },
    /// SVG to SimVec.
    Convert {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fail on unsupported content instead of skipping it.
        #[arg(long)]
        strict: bool,
    },
    /// SimVec to SVG.
    Render {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Restyle an SVG chart as a historical print.
    Oldify {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        oldify_preset: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Score predictions against a manifest.
    Eval {
        manifest: PathBuf,
        predictions: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Directory for the JSON and text reports.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Token counts of SVG against SimVec.
    Tokens {
        manifest: PathBuf,
        /// Write the report as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a manifest and the files it references.
    ManifestVerify { manifest: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Recon,
    Qa,
}

fn usage<E: std::fmt::Display>(e: E) -> PipelineError {
    PipelineError::Usage(e.to_string())
}

fn write_out(path: &Path, text: &str) -> Result<(), PipelineError> {
    std::fs::write(path, text).map_err(|source| PipelineError::Io { path: path.to_path_buf(), source })
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    let config = match &cli.config {
        Some(p) => Config::load(p).map_err(|e| match e {
            simvec::config::ConfigError::Io { path, source } => PipelineError::Io { path, source },
            e => usage(e),
        })?,
        None => Config::default(),
    };
    let seed_of = |flag: Option<u64>| flag.or(config.seed).unwrap_or(0);
    let params = |preset: Option<String>, seed: u64| {
        let preset = preset.or(config.oldify_preset.clone()).unwrap_or_else(|| "historical".into());
        let p = config.antiqua_params(&preset, seed).map_err(usage)?.expect("known preset");
        p.validate().map_err(usage)?;
        Ok::<_, PipelineError>((preset, p))
    };
    let mut stdout = std::io::stdout().lock();
    let mut print = |s: &str| {
        let _ = stdout.write_all(s.as_bytes());
    };
    match cli.command {
        Command::Synth { seed, n, mix, out, oldify_preset, workers, rasterizer_cmd } => {
            let seed = seed_of(seed);
            let mix = parse_mix(mix.as_deref().or(config.mix.as_deref()).unwrap_or("1:1:1")).map_err(usage)?;
            let antiqua = match oldify_preset.clone().or(config.oldify_preset.clone()) {
                None => None,
                Some(p) if p == "none" => None,
                Some(_) => Some(params(oldify_preset, seed)?.1),
            };
            let mut rasterizer = config.rasterizer.as_ref().map(Rasterizer::from);
            if let Some(cmd) = rasterizer_cmd {
                rasterizer = Some(Rasterizer { command: cmd, ..rasterizer.unwrap_or_else(|| Rasterizer::new("")) });
            }
            let opts = SynthOptions {
                n: n.or(config.n).unwrap_or(300),
                mix,
                seed,
                out: out.or(config.out.clone()).unwrap_or_else(|| "corpus".into()),
                antiqua,
                workers: workers.or(config.workers),
                rasterizer,
                topic_provider: config.topic_provider.as_ref().map(TopicProvider::from),
            };
            let s = cmd_synth(&opts)?;
            for w in &s.warnings {
                eprintln!("warning: {w}");
            }
            print(&format!(
                "{} charts ({} bar, {} line, {} area), {} records, {} retrieve and {} extreme QA items\nmanifest: {}\n",
                s.charts,
                s.counts[0],
                s.counts[1],
                s.counts[2],
                s.records,
                s.retrieve_items,
                s.extreme_items,
                s.manifest.display()
            ));
        }
        Command::Convert { input, out, strict } => {
            let opts = IngestOptions { strict: strict || config.strict.unwrap_or(false), ..Default::default() };
            let c = cmd_convert(&input, out.as_deref(), &opts)?;
            for w in &c.warnings {
                eprintln!("{}", w.to_json_line());
            }
            if out.is_none() {
                print(&c.simvec);
            }
        }
        Command::Render { input, out } => {
            let svg = cmd_render(&input, out.as_deref())?;
            if out.is_none() {
                print(&svg);
            }
        }
        Command::Oldify { input, out, oldify_preset, seed } => {
            let (_, p) = params(oldify_preset, seed_of(seed))?;
            let svg = cmd_oldify(&input, out.as_deref(), &p)?;
            if out.is_none() {
                print(&svg);
            }
        }
        Command::Eval { manifest, predictions, mode, out } => {
            let mode = match mode {
                Mode::Recon => EvalMode::Recon,
                Mode::Qa => EvalMode::Qa,
            };
            let options = config.eval.clone().unwrap_or_default();
            let outcome = cmd_eval(&manifest, &predictions, mode, &options, out.as_deref())?;
            print(&outcome.table());
        }
        Command::Tokens { manifest, out } => {
            let report = cmd_tokens(&manifest)?;
            if let Some(out) = out {
                write_out(&out, &(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"))?;
            }
            print(&report.table());
        }
        Command::ManifestVerify { manifest } => {
            let r = cmd_verify(&manifest)?;
            for p in &r.problems {
                eprintln!("{}: {}", p.id, p.reason);
            }
            print(&format!("{} records, {} QA items, {} problems\n", r.records, r.qa_items, r.problems.len()));
            if !r.ok() {
                return Err(PipelineError::Validation(format!("{}: manifest check failed", manifest.display())));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
