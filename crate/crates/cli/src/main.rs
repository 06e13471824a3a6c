use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adhocscan_core::analytics::{self, ClusterConfig, DEFAULT_TOP_FUNCTIONS, DEFAULT_VOCABULARY};
use adhocscan_core::corpus::{self, CorpusError, OutputFormat, ProjectGranularity, ScanConfig, ScanOutput};
use adhocscan_core::graph::dump_pdg;
use adhocscan_core::{FunctionAnalysis, ImportMap, KnownApiTable, ParsedModule};
use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

mod show;

#[derive(Parser)]
#[command(name = "adhocscan", version, about = "Find and profile ad hoc string parsers in Python code")]
struct Cli {
    /// Only print errors on standard error.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Projects {
    /// Each root is one project.
    Root,
    /// Each child directory of a root is a project.
    Children,
}

#[derive(Subcommand)]
enum Command {
    /// Scan source trees and write one record per parser.
    Scan {
        #[arg(long = "root", required = true, num_args = 1..)]
        roots: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: Format,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        jobs: u32,
        #[arg(long, value_enum, default_value = "root")]
        projects: Projects,
        /// Extra known-API entries, one per line.
        #[arg(long)]
        api_table: Option<PathBuf>,
        #[arg(long)]
        follow_symlinks: bool,
    },
    /// Summarize a scan.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOP_FUNCTIONS)]
        top: usize,
    },
    /// Cluster the parsers of a scan with k-means.
    Cluster {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Vocabulary size of each multiset feature family.
        #[arg(long, default_value_t = DEFAULT_VOCABULARY)]
        features: usize,
        #[arg(long, default_value_t = 3)]
        exemplars: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also report inertia and silhouette for every k from 1 to this value.
        #[arg(long)]
        sweep: Option<usize>,
    },
    /// Print the source of one parser with its slice lines marked.
    Show {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        id: String,
        /// Non-slice lines kept around each slice line; the whole function by default.
        #[arg(long)]
        context: Option<u32>,
        /// Project directory, when sources moved since the scan.
        #[arg(long)]
        root: Option<PathBuf>,
    },
    /// Print the control and dependence edges of each function in one file.
    Graph {
        #[arg(long)]
        file: PathBuf,
        /// Only this function, by qualified name.
        #[arg(long)]
        function: Option<String>,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Internal(e)
    }
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        if e.is_configuration() {
            Failure::Usage(e.into())
        } else {
            Failure::Internal(e.into())
        }
    }
}

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(anyhow::anyhow!("{msg}"))
}

fn load(path: &Path) -> Result<ScanOutput, Failure> {
    if !path.is_file() {
        return Err(usage(format!("no such records file: {}", path.display())));
    }
    Ok(corpus::read_jsonl(path)?)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).context("serializing output")?;
    std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn run(command: Command, quiet: bool) -> Result<(), Failure> {
    match command {
        Command::Scan { roots, out, format, jobs, projects, api_table, follow_symlinks } => {
            let config = ScanConfig {
                roots,
                project_granularity: match projects {
                    Projects::Root => ProjectGranularity::RootIsOneProject,
                    Projects::Children => ProjectGranularity::EachChildDirIsAProject,
                },
                jobs: jobs as usize,
                follow_symlinks,
                table_extensions: api_table,
                output_path: out,
                output_format: match format {
                    Format::Jsonl => OutputFormat::Jsonl,
                    Format::Csv => OutputFormat::Csv,
                },
            };
            let projects = corpus::run_scan(&config)?;
            corpus::write_records(&projects, &config)?;
            if !quiet {
                let records: usize = projects.iter().map(|(_, r)| r.len()).sum();
                let failures: u32 = projects.iter().map(|(s, _)| s.parse_failures).sum();
                eprintln!("{} projects, {records} parsers, {failures} failed files", projects.len());
            }
        }
        Command::Report { input, out, top } => {
            let scan = load(&input)?;
            let report = analytics::describe_with(&scan.records, &scan.stats, top);
            if let Some(path) = out {
                write_json(&path, &report)?;
            }
            print!("{}", report.render_text());
        }
        Command::Cluster { input, k, seed, features, exemplars, out, sweep } => {
            let scan = load(&input)?;
            let k = k as usize;
            if k > scan.records.len() {
                return Err(usage(format!("--k {k} exceeds the {} records", scan.records.len())));
            }
            let config = ClusterConfig { k, seed, vocabulary: features, exemplars };
            let clustering = analytics::cluster(&scan.records, config).map_err(|e| usage(e))?;
            println!(
                "k {}  seed {}  inertia {:.6}  iterations {}",
                clustering.k, seed, clustering.inertia, clustering.iterations
            );
            match clustering.silhouette {
                Some(s) => println!("silhouette {s:.6}"),
                None => println!("silhouette -"),
            }
            for (c, ids) in clustering.exemplars.iter().enumerate() {
                println!("cluster {c}  size {}", clustering.cluster_sizes[c]);
                for id in ids {
                    println!("  {id}");
                }
            }
            if let Some(max) = sweep {
                println!("\n{:>4} {:>14} {:>11}", "k", "inertia", "silhouette");
                for p in analytics::sweep(&scan.records, 1..=max, seed, features).map_err(|e| usage(e))? {
                    let s = p.silhouette.map(|s| format!("{s:.6}")).unwrap_or_else(|| "-".into());
                    println!("{:>4} {:>14.6} {:>11}", p.k, p.inertia, s);
                }
            }
            if let Some(path) = out {
                write_json(&path, &clustering)?;
            }
        }
        Command::Show { input, id, context, root } => {
            let scan = load(&input)?;
            let record = scan
                .records
                .iter()
                .find(|r| r.slice_id == id)
                .ok_or_else(|| usage(format!("no record with id {id}")))?;
            let root = root
                .or_else(|| {
                    scan.stats.iter().find(|s| s.project_name == record.project_name).map(|s| PathBuf::from(&s.root))
                })
                .ok_or_else(|| usage(format!("no project root recorded for {}; pass --root", record.project_name)))?;
            let text = show::render(record, &root, context)?;
            print!("{text}");
        }
        Command::Graph { file, function } => {
            let bytes = std::fs::read(&file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let path = file.to_string_lossy().into_owned();
            let module = ParsedModule::parse(&path, String::from_utf8_lossy(&bytes).into_owned())
                .map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let api = KnownApiTable::shipped();
            let imports = ImportMap::from_module(&module.root);
            let mut found = false;
            for unit in module.functions() {
                if function.as_deref().is_some_and(|f| f != unit.qualified_name) {
                    continue;
                }
                found = true;
                let a = FunctionAnalysis::new(unit, &imports, &api);
                print!("{}", dump_pdg(&a.pdg, &a.unit.qualified_name, &path));
            }
            if !found {
                return Err(usage(format!("no function {} in {}", function.unwrap_or_default(), file.display())));
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
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    env_logger::Builder::new()
        .filter_level(if cli.quiet { log::LevelFilter::Error } else { log::LevelFilter::Warn })
        .parse_default_env()
        .format_timestamp(None)
        .format_target(false)
        .init();
    match run(cli.command, cli.quiet) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
