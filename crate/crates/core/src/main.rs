//! Command-line interface: enumerate diagrams, cross-check against the
//! brute-force oracle, annotate surviving diagrams with vorticity
//! constraints, and render DOT views.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{ArgAction, Parser, Subcommand, ValueEnum};

use vortex_diagrams::annotate::emit_constraints;
use vortex_diagrams::oracle::brute_force_pipeline;
use vortex_diagrams::pipeline::{run_pipeline, DiagramSet, PipelineOptions};
use vortex_diagrams::render;

#[derive(Parser)]
#[command(name = "vortex-diagrams", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Dot,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AnnotateFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run the staged enumeration and write the surviving diagrams.
    Enumerate {
        /// Vertex count, 3..=8.
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the stage statistics table to stderr.
        #[arg(long)]
        stats: bool,
        /// Deduplicate color-swapped pairs with equal traces.
        #[arg(long, default_value_t = true, action = ArgAction::Set,
              num_args = 0..=1, default_missing_value = "true")]
        dedupe_swap: bool,
        /// Worker threads; the output is identical for every value.
        #[arg(long)]
        jobs: Option<usize>,
        /// Directory for per-stage dump files.
        #[arg(long)]
        stage_dump: Option<PathBuf>,
    },
    /// Brute-force pair enumeration (n <= 4), optionally compared
    /// against the staged pipeline.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        compare: bool,
    },
    /// Read a diagram-set file and emit per-diagram constraints.
    Annotate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: AnnotateFormat,
    },
    /// Read a diagram-set file and write a DOT rendering.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn write_output(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn stats_report(set: &DiagramSet, jobs: Option<usize>) -> String {
    let mut out = String::new();
    if let Some(stats) = &set.stats {
        out.push_str(&format!(
            "n={} dedupe_swap={} jobs={}\n",
            set.n,
            set.manifest.dedupe_swap,
            jobs.map_or("default".into(), |j| j.to_string()),
        ));
        out.push_str(&format!(
            "stage timings: candidates {:?}, w-expansion {:?}, pair filter {:?}, dedup {:?}, total {:?}\n",
            stats.timings.candidates,
            stats.timings.w_expansion,
            stats.timings.pair_filter,
            stats.timings.dedup,
            stats.timings.total,
        ));
        out.push_str(&format!(
            "initial {:?} filtered {:?} t {:?} u {:?} final {}\n",
            stats.initial, stats.filtered, stats.t_sets, stats.u_sets, stats.final_count,
        ));
    }
    out
}

fn run() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Enumerate {
            n,
            format,
            out,
            stats,
            dedupe_swap,
            jobs,
            stage_dump,
        } => {
            let options = PipelineOptions { dedupe_swap, jobs };
            let set = run_pipeline(n, &options)?;
            if let Some(dir) = stage_dump {
                render::write_stage_dumps(&dir, n)
                    .with_context(|| format!("writing stage dumps to {}", dir.display()))?;
            }
            let text = match format {
                OutputFormat::Json => render::to_json(&set),
                OutputFormat::Dot => render::render_dot_set(&set),
                OutputFormat::Table => render::render_table(&set),
            };
            write_output(out.as_ref(), &text)?;
            if stats {
                eprint!("{}", stats_report(&set, jobs));
            }
        }
        Command::Oracle { n, compare } => {
            let oracle_set = brute_force_pipeline(n, true)?;
            println!("oracle: n={} gives {} diagrams", n, oracle_set.diagrams.len());
            if compare {
                let pipeline_set = run_pipeline(n, &PipelineOptions::default())?;
                if oracle_set.diagrams == pipeline_set.diagrams {
                    println!("oracle and pipeline agree");
                } else {
                    bail!(
                        "oracle ({}) and pipeline ({}) disagree",
                        oracle_set.diagrams.len(),
                        pipeline_set.diagrams.len()
                    );
                }
            }
        }
        Command::Annotate { input, format } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let pairs = render::pairs_from_json(&text)?;
            let docs: Vec<render::AnnotationDoc> = pairs
                .iter()
                .map(|p| render::AnnotationDoc {
                    key: p.encoding(),
                    constraints: emit_constraints(p),
                })
                .collect();
            let rendered = match format {
                AnnotateFormat::Json => render::annotations_to_json(&docs),
                AnnotateFormat::Text => render::annotations_to_text(&docs),
            };
            print!("{rendered}");
        }
        Command::Render { input, out } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let pairs = render::pairs_from_json(&text)?;
            let mut dot = String::new();
            for (t, p) in pairs.iter().enumerate() {
                dot.push_str(&format!("// {}\n", p.encoding()));
                dot.push_str(&render::render_dot(p, &format!("d{t}")));
                if t + 1 != pairs.len() {
                    dot.push('\n');
                }
            }
            write_output(Some(&out), &dot)?;
        }
    }
    Ok(())
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
