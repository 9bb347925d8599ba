use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand};

use adams_workbench::chart::Chart;
use adams_workbench::commands::{cmd_algnov, cmd_audit, cmd_ext, cmd_transfer, Context, ExtTarget, Floor};
use adams_workbench::config::{ConfigOverrides, Format, WorkbenchConfig};
use adams_workbench::error::WorkbenchError;
use adams_workbench::svg::{render, SvgOptions};

#[derive(Parser)]
#[command(name = "adams-workbench", version, about = "Odd-primary Adams and algebraic Novikov charts")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    #[arg(long, global = true)]
    prime: Option<u32>,
    #[arg(long, global = true)]
    smax: Option<u32>,
    #[arg(long, global = true)]
    tmax: Option<u32>,
    #[arg(long, global = true)]
    kmax: Option<u32>,
    #[arg(long, global = true)]
    rmax: Option<u32>,
    /// Digits of p-adic precision (default k_max + r_max + 2).
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Cache directory (default from the environment variable ADAMS_WORKBENCH_CACHE).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (default stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML file whose settings override the flags above.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Discard a cache written by another format version.
    #[arg(long, global = true)]
    rebuild: bool,
}

#[derive(Args)]
struct FloorArgs {
    #[arg(long, default_value_t = 0)]
    smin: u32,
    #[arg(long, default_value_t = 0)]
    tmin: u32,
}

impl FloorArgs {
    fn floor(&self) -> Floor {
        Floor {
            s: self.smin,
            t: self.tmin,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List E_2 classes: `adams`, `algnov-k<k>` or `ctau`.
    Ext {
        which: String,
        #[command(flatten)]
        floor: FloorArgs,
    },
    /// Run the algebraic Novikov spectral sequence over the window.
    Algnov {
        #[command(flatten)]
        floor: FloorArgs,
    },
    /// Convert the differentials of an algnov chart into Adams statements.
    Transfer {
        input: PathBuf,
        /// Also emit nonpermanence certificates.
        #[arg(long)]
        nonpermanence: bool,
    },
    /// Run the consistency suites over the window.
    Audit,
    /// Render a chart file as SVG.
    Chart {
        input: PathBuf,
        /// Algebraic Novikov page to draw classes from.
        #[arg(long)]
        page: Option<u32>,
        #[arg(long, default_value_t = 40)]
        cell: u32,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Returns the exit code for a successful run; errors carry their own.
fn run(cli: Cli) -> anyhow::Result<u8> {
    let g = &cli.global;
    let flags = ConfigOverrides {
        prime: g.prime,
        s_max: g.smax,
        t_max: g.tmax,
        k_max: g.kmax,
        r_max: g.rmax,
        precision: g.precision,
        cache_dir: g.cache_dir.clone(),
        format: g.format,
    };
    let cfg = WorkbenchConfig::resolve(&flags, g.config.as_deref())?;
    if let Command::Chart { input, page, cell } = &cli.command {
        let (chart, _) = Chart::read_file(input)?;
        let svg = render(&chart, SvgOptions { cell: *cell, page: *page })?;
        emit(&g.out, &svg)?;
        return Ok(0);
    }
    let ctx = Context::new(cfg, g.rebuild)?;
    for w in ctx.warnings() {
        eprintln!("warning: {w}");
    }
    let format = ctx.config().format;
    match &cli.command {
        Command::Ext { which, floor } => {
            let which: ExtTarget = which.parse()?;
            emit(&g.out, &cmd_ext(&ctx, which, floor.floor())?.to_text(format))?;
        }
        Command::Algnov { floor } => {
            emit(&g.out, &cmd_algnov(&ctx, floor.floor())?.to_text(format))?;
        }
        Command::Transfer { input, nonpermanence } => {
            let (chart, _) = Chart::read_file(input)?;
            let result = cmd_transfer(&ctx, &chart, *nonpermanence)?;
            for s in &result.skipped {
                eprintln!("warning: skipped {s}");
            }
            emit(&g.out, &result.chart.to_text(format))?;
        }
        Command::Audit => {
            let result = cmd_audit(&ctx)?;
            emit(&g.out, &result.chart.to_text(format))?;
            if !result.passed() {
                for f in &result.failures {
                    eprintln!("FAIL {f}");
                }
                return Ok(2);
            }
        }
        Command::Chart { .. } => unreachable!(),
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<WorkbenchError>().map_or(1, |w| w.exit_code());
            ExitCode::from(code as u8)
        }
    }
}
