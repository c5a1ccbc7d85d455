//! Argument parsing and verb dispatch.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use maxclass5_core::classify::{
    classify_by_transfers, family_label, Classification, PropositionId,
};
use maxclass5_core::consistency::{
    consistency_check, CheckMode, ConsistencyReport, DEFAULT_SAMPLES,
};
use maxclass5_core::field::{
    parse_table, predict_families, validate_record, FieldRecord, RecordFlag, Scenario,
};
use maxclass5_core::transfer::maximal_transfer_fingerprint;
use maxclass5_core::{FamilyLabel, PcGroup, PresentationParams, RawParams};
use serde::Serialize;

use crate::{export, parse_n_range, sweep, CliError, Status};

#[derive(Debug, Parser)]
#[command(
    name = "maxclass5",
    version,
    about = "Metabelian 5-groups of maximal class G_a^(n)(z,w)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a group and run the consistency check. The report goes to standard
    /// output; `-o` also writes the bare descriptor.
    Build {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        check: CheckArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Structural invariants: central series, maximal subgroups, chi2, defect.
    Invariants {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Transfers from the six maximal subgroups to gamma2.
    Transfers {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Family label and the transfer-driven classification.
    Classify {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sweep every parameter tuple in a range and check one statement.
    Verify {
        /// 3.1, 3.2, 3.3, thm2.2 or lemma2.1 (also prop31, thm22, lemma21, ...)
        proposition: PropositionId,
        /// Range of n, as A..B (inclusive) or a single value.
        #[arg(long = "n", value_name = "A..B", value_parser = parse_n_range, conflicts_with = "n_range")]
        n: Option<[usize; 2]>,
        #[arg(long = "n-range", value_name = "A..B", value_parser = parse_n_range)]
        n_range: Option<[usize; 2]>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Candidate Galois groups for each row of a class-group table.
    Predict {
        #[arg(long, value_name = "CSV")]
        table: PathBuf,
        /// HL or HTilde.
        #[arg(long)]
        scenario: Scenario,
        /// Exponent s with h_5(L~) = 5^s.
        #[arg(long)]
        s: Option<u32>,
        /// The group is known to have order at least 5^7.
        #[arg(long)]
        large: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Export a group as a dot diagram, JSON or multiplication table.
    Export {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Dot,
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

/// Either explicit parameters or a descriptor file.
#[derive(Debug, Args)]
pub struct GroupArgs {
    #[arg(
        long = "n",
        required_unless_present = "input",
        allow_negative_numbers = true
    )]
    pub n: Option<i64>,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub w: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub z: i64,
    /// Comma list a_{n-1},...,a_{n-k}.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub a: Vec<i64>,
    /// Group descriptor JSON {"p","n","w","z","a"}.
    #[arg(long, short = 'i', conflicts_with_all = ["n", "w", "z", "a"])]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output file; standard output when absent.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

impl GroupArgs {
    pub fn raw(&self) -> Result<RawParams, CliError> {
        match (&self.input, self.n) {
            (Some(path), _) => {
                let text = read(path)?;
                serde_json::from_str(&text).map_err(|source| CliError::Json {
                    path: path.clone(),
                    source,
                })
            }
            (None, Some(n)) => Ok(RawParams::new(n, self.w, self.z, &self.a)),
            (None, None) => Err(CliError::Usage("either --n or --input is required".into())),
        }
    }

    pub fn build(&self) -> Result<PcGroup, CliError> {
        let params = PresentationParams::from_raw(&self.raw()?)?;
        Ok(PcGroup::build(&params)?)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit_text(out: &OutArgs, text: &str) -> Result<(), CliError> {
    match &out.output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = io::stdout().lock();
            match stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
            {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source: e,
                }),
                _ => Ok(()),
            }
        }
    }
}

fn emit_json<T: Serialize>(out: &OutArgs, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    emit_text(out, &text)
}

#[derive(Debug, Serialize)]
pub struct BuildOutput {
    pub descriptor: RawParams,
    pub label: String,
    pub order_log5: usize,
    /// Defect 3, beyond the range the classification was checked on.
    pub outside_verified_family: bool,
    pub consistency: ConsistencyReport,
}

#[derive(Debug, Serialize)]
pub struct ClassifyOutput {
    pub descriptor: RawParams,
    pub label: FamilyLabel,
    pub outside_verified_family: bool,
    pub fingerprint: [bool; 6],
    pub classification: Classification,
    /// Whether a non-empty candidate set contains the extracted label.
    pub label_in_candidates: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct PredictionRow {
    pub record: FieldRecord,
    pub flags: Vec<RecordFlag>,
    pub scenario: Scenario,
    pub s: Option<u32>,
    pub candidates: Vec<String>,
    pub unrealizable: Vec<String>,
    pub error: Option<String>,
}

pub fn run(cli: Cli) -> Result<Status, CliError> {
    match cli.command {
        Command::Build { group, check, out } => {
            let g = group.build()?;
            let mode = match check.mode {
                Some(Mode::Exhaustive) => CheckMode::Exhaustive,
                Some(Mode::Sampled) => CheckMode::Sampled {
                    count: check.samples,
                    seed: check.seed,
                },
                None if g.n() <= 4 => CheckMode::Exhaustive,
                None => CheckMode::Sampled {
                    count: check.samples,
                    seed: check.seed,
                },
            };
            let consistency = consistency_check(&g, mode);
            let passed = consistency.passed();
            let output = BuildOutput {
                descriptor: g.params().to_raw(),
                label: g.params().label(),
                order_log5: g.n(),
                outside_verified_family: g.params().outside_verified_family(),
                consistency,
            };
            if out.output.is_some() {
                emit_json(&out, &output.descriptor)?;
            }
            emit_json(&OutArgs { output: None }, &output)?;
            Ok(if passed { Status::Ok } else { Status::Invalid })
        }
        Command::Invariants { group, out } => {
            let g = group.build()?;
            emit_json(&out, &export::invariants(&g)?)?;
            Ok(Status::Ok)
        }
        Command::Transfers { group, out } => {
            let g = group.build()?;
            emit_json(&out, &export::transfers(&g))?;
            Ok(Status::Ok)
        }
        Command::Classify { group, out } => {
            let g = group.build()?;
            let label = family_label(&g)?;
            let classification = classify_by_transfers(&g);
            let label_in_candidates = (!classification.candidates.is_empty())
                .then(|| classification.candidates.contains(&label));
            emit_json(
                &out,
                &ClassifyOutput {
                    descriptor: g.params().to_raw(),
                    label,
                    outside_verified_family: g.params().outside_verified_family(),
                    fingerprint: maximal_transfer_fingerprint(&g),
                    classification,
                    label_in_candidates,
                },
            )?;
            Ok(Status::Ok)
        }
        Command::Verify {
            proposition,
            n,
            n_range,
            out,
        } => {
            let range = n
                .or(n_range)
                .ok_or_else(|| CliError::Usage("verify needs --n A..B or --n-range A..B".into()))?;
            let report = sweep::verify(proposition, range)?;
            emit_json(&out, &report)?;
            Ok(if report.passed() {
                Status::Ok
            } else {
                Status::Violations
            })
        }
        Command::Predict {
            table,
            scenario,
            s,
            large,
            out,
        } => {
            let records = parse_table(&read(&table)?)?;
            let rows: Vec<PredictionRow> = records
                .into_iter()
                .map(|record| {
                    let flags = validate_record(&record);
                    let (candidates, unrealizable, error) =
                        match predict_families(&record, scenario, s, large) {
                            Ok(p) => (p.candidates, p.unrealizable, None),
                            Err(e) => (Vec::new(), Vec::new(), Some(e.to_string())),
                        };
                    PredictionRow {
                        record,
                        flags,
                        scenario,
                        s,
                        candidates,
                        unrealizable,
                        error,
                    }
                })
                .collect();
            emit_json(&out, &rows)?;
            Ok(Status::Ok)
        }
        Command::Export { group, format, out } => {
            let g = group.build()?;
            match format {
                ExportFormat::Dot => emit_text(&out, &export::dot(&g)?)?,
                ExportFormat::Json => emit_json(&out, &export::json(&g)?)?,
                ExportFormat::Table => emit_text(&out, &export::table(&g)?)?,
            }
            Ok(Status::Ok)
        }
    }
}
