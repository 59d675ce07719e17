//! `albumaudit`: scan album-policy datasets, generate synthetic ones, and
//! run the HTTP service.
//!
//! Exit codes: 0 success, 1 invalid input (parse, validation, infeasible
//! request, bad flags), 2 I/O failure (including a port that cannot be bound).

use std::fmt::Write as _;
use std::io::Write as _;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use albumaudit_core::generate::{generate, GenerateParams};
use albumaudit_core::{build_level1, io, render_svg, scan, DatasetError, MisconfigKind, ScanReport};
use albumaudit_service::{router, serve, AuditService, DEFAULT_VIEWPORT};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "albumaudit", version, about = "Audit photo album privacy policies for misconfigurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Svg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scan a dataset and print the per-group report.
    Scan {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded synthetic dataset with planted misconfigurations.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Users besides the owner.
        #[arg(long, default_value_t = 10)]
        users: usize,
        #[arg(long, default_value_t = 4)]
        lists: usize,
        #[arg(long, default_value_t = 6)]
        albums: usize,
        /// Comma-separated kinds to plant, e.g. `m1,m6`.
        #[arg(long, value_delimiter = ',')]
        mix: Vec<MisconfigKind>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve the JSON API (and an optional UI bundle) for a dataset.
    Serve {
        file: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Directory with the built UI bundle, served at `/`.
        #[arg(long)]
        ui: Option<PathBuf>,
    },
}

enum Failure {
    Invalid(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Io(_) => 2,
        }
    }
}

impl From<DatasetError> for Failure {
    fn from(e: DatasetError) -> Self {
        match e {
            DatasetError::Io { .. } => Failure::Io(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

fn write_output(out: Option<&Path>, payload: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, payload).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(payload.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn text_report(report: &ScanReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dataset {}", report.fingerprint);
    let _ = writeln!(out, "{:<24} {:<36} {:>6} {:>11}  FINDINGS", "GROUP", "POLICY", "ALBUMS", "SENSITIVITY");
    for g in &report.groups {
        let findings: Vec<String> = g.misconfigurations.iter().map(|m| m.kind.to_string()).collect();
        let findings = if findings.is_empty() { "-".to_owned() } else { findings.join(",") };
        let _ = writeln!(
            out,
            "{:<24} {:<36} {:>6} {:>11.1}  {}",
            g.key.as_str(),
            g.policy.summary(),
            g.albums.len(),
            g.sensitivity,
            findings
        );
    }
    out
}

fn cmd_scan(file: &Path, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let ds = io::load(file)?;
    let report = scan(&ds).map_err(|e| Failure::Invalid(format!("invalid dataset: {e}")))?;
    let payload = match format {
        Format::Text => text_report(&report),
        Format::Json => report.to_json() + "\n",
        Format::Svg => {
            let nodes = build_level1(&report, DEFAULT_VIEWPORT).map_err(|e| Failure::Invalid(e.to_string()))?;
            render_svg(&nodes, DEFAULT_VIEWPORT)
        }
    };
    write_output(out, &payload)
}

fn cmd_generate(params: GenerateParams, out: &Path) -> Result<(), Failure> {
    let ds = generate(&params).map_err(|e| Failure::Invalid(e.to_string()))?;
    io::save(&ds, out)?;
    Ok(())
}

fn cmd_serve(file: &Path, addr: SocketAddr, ui: Option<PathBuf>) -> Result<(), Failure> {
    let service = AuditService::open(file)?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
    runtime.block_on(async move {
        let listener =
            tokio::net::TcpListener::bind(addr).await.map_err(|e| Failure::Io(format!("cannot bind {addr}: {e}")))?;
        let bound = listener.local_addr().map_err(|e| Failure::Io(e.to_string()))?;
        println!("listening on http://{bound}");
        let _ = std::io::stdout().flush();
        serve(listener, router(Arc::new(service), ui)).await.map_err(|e| Failure::Io(e.to_string()))
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Scan { file, format, out } => cmd_scan(&file, format, out.as_deref()),
        Command::Generate { seed, users, lists, albums, mix, out } => {
            cmd_generate(GenerateParams { seed, users, lists, albums, mix: mix.into_iter().collect() }, &out)
        }
        Command::Serve { file, port, host, ui } => cmd_serve(&file, SocketAddr::new(host, port), ui),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (Failure::Invalid(msg) | Failure::Io(msg)) = &failure;
            eprintln!("albumaudit: {msg}");
            ExitCode::from(failure.code())
        }
    }
}
