//! Command-line interface for antichain saturation computations.
//!
//! Exit codes: 0 success (for `verify`, saturated; for `construct`, the
//! built family passed verification), 1 verification or feasibility
//! failure, 2 usage or parse error, 3 capacity or overflow. Diagnostics
//! go to stderr; results go to stdout.

mod format;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use antichain_sat::{
    c_sequence, cascade, colex_segment, construct_saturated, dilworth, greedy_saturate,
    is_k_antichain_saturated, nu_colex, oracle_min_sat, r_expansion, sat_value, skipless_cover,
    symmetric_chain_decomposition, AddOrder, Culprit, ElementSet, Error, Family, Result,
    SatStatus, SaturationReport,
};

#[derive(Parser)]
#[command(name = "antichain-sat", version, about = "Antichain saturation in the Boolean lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print sat(n, k) and how it is known (exact, bound, or power set).
    SatValue {
        n: u32,
        k: u64,
        /// Emit a machine-readable report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Build a minimum k-antichain saturated family and verify it.
    Construct {
        n: u32,
        k: u64,
        /// Family file to write.
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the witness chain cover here.
        #[arg(long)]
        chains: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Check whether a family file is k-antichain saturated.
    Verify {
        family: PathBuf,
        k: u64,
        #[arg(long)]
        json: bool,
    },
    /// Rewrite a chain cover into disjoint skipless chains.
    CoverSkipless {
        cover: PathBuf,
        /// Cover file to write.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Width of a family with antichain and chain-partition certificates.
    Dilworth {
        family: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write the symmetric chain decomposition of 2^[n].
    Scd {
        n: u32,
        /// Cover file to write.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// List the first m sets of layer t in colexicographic order.
    Colex { m: u64, t: u32 },
    /// Cascade notation of m at rank r.
    Cascade { m: u64, r: u32 },
    /// The r-expansion of m.
    Expansion { m: u64, r: u32 },
    /// Matching number of the colex segment of size m at layer r.
    NuColex { m: u64, r: u32 },
    /// Layer quota sequence c_0..c_{floor(ell/2)} for k.
    CSeq { k: u64 },
    /// Exhaustive minimum saturation search (n <= 4).
    Oracle { n: u32, k: u64 },
    /// Greedily saturate the empty family in seeded random order.
    Greedy {
        n: u32,
        k: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn status_name(status: SatStatus) -> &'static str {
    match status {
        SatStatus::FullPowerset => "full_powerset",
        SatStatus::LowerBound => "lower_bound",
        SatStatus::ExactNicecase => "exact_nicecase",
        SatStatus::Exact => "exact",
    }
}

fn set_elements(set: &ElementSet) -> Vec<u32> {
    set.elements().collect()
}

fn family_elements(family: &Family) -> Vec<Vec<u32>> {
    family.iter().map(set_elements).collect()
}

#[derive(Serialize)]
struct SizeInputs {
    n: u32,
    k: u64,
}

#[derive(Serialize)]
struct SatValueOut {
    command: &'static str,
    inputs: SizeInputs,
    value: u64,
    status: &'static str,
}

#[derive(Serialize)]
struct ConstructCertificates {
    family: String,
    chains: Option<String>,
    chain_count: u64,
}

#[derive(Serialize)]
struct ConstructOut {
    command: &'static str,
    inputs: SizeInputs,
    value: u64,
    status: &'static str,
    certificates: ConstructCertificates,
}

#[derive(Serialize)]
struct FileInputs {
    family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u64>,
}

#[derive(Serialize)]
struct QuotaRow {
    layer: u32,
    quota: u64,
    lower_count: u64,
    upper_count: u64,
    satisfied: bool,
}

#[derive(Serialize)]
struct CulpritOut {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    set: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    antichain: Option<Vec<Vec<u32>>>,
}

#[derive(Serialize)]
struct VerifyCertificates {
    width: u64,
    culprit: Option<CulpritOut>,
    layer_profile: Vec<u64>,
    quota_check: Vec<QuotaRow>,
}

#[derive(Serialize)]
struct VerifyOut {
    command: &'static str,
    inputs: FileInputs,
    value: u64,
    status: &'static str,
    certificates: VerifyCertificates,
}

#[derive(Serialize)]
struct DilworthCertificates {
    antichain: Vec<Vec<u32>>,
    partition: Vec<Vec<Vec<u32>>>,
}

#[derive(Serialize)]
struct DilworthOut {
    command: &'static str,
    inputs: FileInputs,
    value: u64,
    status: &'static str,
    certificates: DilworthCertificates,
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable output"));
}

fn verify_report(report: &SaturationReport) -> VerifyCertificates {
    VerifyCertificates {
        width: report.width as u64,
        culprit: report.culprit.as_ref().map(|c| match c {
            Culprit::Addable(set) => CulpritOut {
                kind: "addable",
                set: Some(set_elements(set)),
                antichain: None,
            },
            Culprit::WideAntichain(a) => CulpritOut {
                kind: "antichain",
                set: None,
                antichain: Some(family_elements(a)),
            },
        }),
        layer_profile: report.layer_profile.clone(),
        quota_check: report
            .c_check
            .iter()
            .map(|row| QuotaRow {
                layer: row.layer,
                quota: row.quota,
                lower_count: row.lower_count,
                upper_count: row.upper_count,
                satisfied: row.satisfied,
            })
            .collect(),
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::SatValue { n, k, json } => {
            let profile = sat_value(n, k)?;
            if json {
                print_json(&SatValueOut {
                    command: "sat-value",
                    inputs: SizeInputs { n, k },
                    value: profile.value,
                    status: status_name(profile.status),
                });
            } else {
                println!("{}", profile.value);
                println!("status: {}", status_name(profile.status));
            }
            Ok(0)
        }
        Command::Construct {
            n,
            k,
            output,
            chains,
            json,
        } => {
            let profile = sat_value(n, k)?;
            let (family, cover) = construct_saturated(n, k)?;
            write_file(&output, &format::write_family(&family))?;
            if let Some(path) = &chains {
                write_file(path, &format::write_cover(&cover))?;
            }
            if json {
                print_json(&ConstructOut {
                    command: "construct",
                    inputs: SizeInputs { n, k },
                    value: family.len() as u64,
                    status: status_name(profile.status),
                    certificates: ConstructCertificates {
                        family: output.display().to_string(),
                        chains: chains.as_ref().map(|p| p.display().to_string()),
                        chain_count: cover.len() as u64,
                    },
                });
            } else {
                println!("{}", family.len());
                println!("status: {}", status_name(profile.status));
                println!("wrote {}", output.display());
                if let Some(path) = &chains {
                    println!("wrote {}", path.display());
                }
            }
            Ok(0)
        }
        Command::Verify { family, k, json } => {
            let parsed = format::parse_family(&read_file(&family)?)?;
            let report = is_k_antichain_saturated(&parsed, k)?;
            if json {
                print_json(&VerifyOut {
                    command: "verify",
                    inputs: FileInputs {
                        family: family.display().to_string(),
                        k: Some(k),
                    },
                    value: report.width as u64,
                    status: if report.is_saturated {
                        "saturated"
                    } else {
                        "not_saturated"
                    },
                    certificates: verify_report(&report),
                });
            } else {
                println!(
                    "{}",
                    if report.is_saturated {
                        "saturated"
                    } else {
                        "not saturated"
                    }
                );
                println!("width: {}", report.width);
                match &report.culprit {
                    Some(Culprit::Addable(set)) => println!("culprit: addable {set}"),
                    Some(Culprit::WideAntichain(a)) => {
                        println!("culprit: antichain of {} sets", a.len())
                    }
                    None => {}
                }
            }
            Ok(if report.is_saturated { 0 } else { 1 })
        }
        Command::CoverSkipless { cover, output } => {
            let parsed = format::parse_cover(&read_file(&cover)?)?;
            let result = skipless_cover(&parsed)?;
            write_file(&output, &format::write_cover(&result))?;
            println!(
                "wrote {} ({} chains, {} sets)",
                output.display(),
                result.len(),
                result.set_count()
            );
            Ok(0)
        }
        Command::Dilworth { family, json } => {
            let parsed = format::parse_family(&read_file(&family)?)?;
            let (width, antichain, partition) = dilworth(&parsed)?;
            if json {
                print_json(&DilworthOut {
                    command: "dilworth",
                    inputs: FileInputs {
                        family: family.display().to_string(),
                        k: None,
                    },
                    value: width as u64,
                    status: "ok",
                    certificates: DilworthCertificates {
                        antichain: family_elements(&antichain),
                        partition: partition
                            .chains()
                            .iter()
                            .map(|c| c.sets().iter().map(set_elements).collect())
                            .collect(),
                    },
                });
            } else {
                println!("width: {width}");
                println!("antichain: {} sets", antichain.len());
                println!("partition: {} chains", partition.len());
            }
            Ok(0)
        }
        Command::Scd { n, output } => {
            let cover = symmetric_chain_decomposition(n)?;
            write_file(&output, &format::write_cover(&cover))?;
            println!(
                "wrote {} ({} chains, {} sets)",
                output.display(),
                cover.len(),
                cover.set_count()
            );
            Ok(0)
        }
        Command::Colex { m, t } => {
            let segment = colex_segment(m, t)?;
            for set in segment.iter() {
                println!("{set}");
            }
            Ok(0)
        }
        Command::Cascade { m, r } => {
            let expansion = cascade(m, r)?;
            println!("{}", binomial_sum(expansion.terms()));
            Ok(0)
        }
        Command::Expansion { m, r } => {
            let expansion = r_expansion(m, r)?;
            println!("{}", binomial_sum(expansion.terms()));
            Ok(0)
        }
        Command::NuColex { m, r } => {
            println!("{}", nu_colex(m, r)?);
            Ok(0)
        }
        Command::CSeq { k } => {
            let seq = c_sequence(k)?;
            println!("ell: {}", seq.ell);
            let quotas: Vec<String> = seq.c.iter().map(u64::to_string).collect();
            println!("c: {}", quotas.join(", "));
            Ok(0)
        }
        Command::Oracle { n, k } => {
            let (value, witness) = oracle_min_sat(n, k)?;
            println!("{value}");
            print!("{}", format::write_family(&witness));
            Ok(0)
        }
        Command::Greedy { n, k, seed } => {
            let family = greedy_saturate(&Family::new(n)?, k, AddOrder::Shuffled { seed })?;
            print!("{}", format::write_family(&family));
            Ok(0)
        }
    }
}

fn binomial_sum(terms: &[(u64, u32)]) -> String {
    terms
        .iter()
        .map(|(a, i)| format!("C({a},{i})"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Exit code for an error: feasibility and verification failures are 1,
/// resource limits and overflow are 3, everything else is a usage error.
fn exit_code(error: &Error) -> u8 {
    match error {
        Error::InfeasibleTarget { .. } | Error::ConstructionInvariant(_) => 1,
        Error::Capacity(_) | Error::Overflow(_) | Error::UniverseTooLarge(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(exit_code(&error))
        }
    }
}
