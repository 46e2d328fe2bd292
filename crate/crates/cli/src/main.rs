use anyhow::{Context, Result};
use cartan_core::certificate::{construct_certificate, verify_certificate, CertificateKind, ConstructConfig};
use cartan_core::error::CertificateError;
use cartan_core::kg::kg_exact;
use cartan_core::selmer::selmer_report;
use cartan_core::witness::{exceptional_scan, find_witness, WitnessOutcome, DEFAULT_FACTOR_CAP};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_VERIFY: u8 = 1;
const EXIT_EXCEPTIONAL: u8 = 2;
const EXIT_SEARCH_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "cartan", version, about = "Build and check Galois representation certificates for (g, p)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and emit a certificate.
    Construct {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        p: u64,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Upper bound for factoring and prime searches.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Re-check a certificate from scratch.
    Verify { file: PathBuf },
    /// Exact K_g with its factorization.
    Kg {
        #[arg(long)]
        g: u32,
    },
    /// Witness pair (d, q) for (g, p).
    Witness {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        p: u64,
    },
    /// Order of H^1 under the local conditions.
    Selmer {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        with_2_condition: bool,
    },
    /// Pairs (g, p) with no witness.
    Scan {
        #[arg(long)]
        gmax: u32,
        #[arg(long)]
        pmax: u64,
    },
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn construct(g: u32, p: u64, out: Option<PathBuf>, cap: Option<u64>) -> Result<ExitCode> {
    let mut cfg = ConstructConfig::default();
    if let Some(c) = cap {
        cfg.factor_cap = c;
        cfg.prime_cap = c;
    }
    let cert = match construct_certificate(g, p, &cfg) {
        Ok(c) => c,
        Err(CertificateError::SearchCap(why)) => {
            eprintln!("search cap exceeded: {why}");
            return Ok(ExitCode::from(EXIT_SEARCH_CAP));
        }
        Err(e) => return Err(e).context(format!("constructing certificate for (g, p) = ({g}, {p})")),
    };
    if let Err(e) = verify_certificate(&cert) {
        eprintln!("freshly built certificate failed verification: {e}");
        return Ok(ExitCode::from(EXIT_VERIFY));
    }
    let json = cert.to_json()?;
    match out {
        Some(path) => std::fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    if cert.kind == CertificateKind::Exceptional {
        eprintln!("({g}, {p}) is exceptional: no witness prime power exists");
        return Ok(ExitCode::from(EXIT_EXCEPTIONAL));
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(file: PathBuf) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
    match cartan_core::certificate::verify_json(&text) {
        Ok(report) => {
            println!("PASS ({} checks: {})", report.passed.len(), report.passed.join(", "));
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            println!("FAIL {e}");
            Ok(ExitCode::from(EXIT_VERIFY))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Construct { g, p, out, cap } => construct(g, p, out, cap),
        Command::Verify { file } => verify(file),
        Command::Kg { g } => {
            print_json(&kg_exact(g)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Witness { g, p } => {
            let kg = kg_exact(g)?;
            match find_witness(g, p, &kg, DEFAULT_FACTOR_CAP) {
                Ok(WitnessOutcome::Found(w)) => {
                    print_json(&w)?;
                    Ok(ExitCode::SUCCESS)
                }
                Ok(WitnessOutcome::Exceptional(report)) => {
                    print_json(&report)?;
                    Ok(ExitCode::from(EXIT_EXCEPTIONAL))
                }
                Err(cartan_core::error::WitnessError::SearchCap(c)) => {
                    eprintln!("factoring cap {c} exceeded");
                    Ok(ExitCode::from(EXIT_SEARCH_CAP))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Selmer { m, with_2_condition } => {
            print_json(&selmer_report(m, with_2_condition)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan { gmax, pmax } => {
            print_json(&exceptional_scan(gmax, pmax)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
