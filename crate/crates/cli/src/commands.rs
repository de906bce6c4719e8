//! The subcommands as library functions. Each returns the exit code and the
//! text to print on stdout.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;
use vcsp_core::blp::{check_tightness, extract_labeling, solve_blp};
use vcsp_core::fpoly::{find_symmetric_fpoly, find_violation, ConstraintRow, SymmetricSearch};
use vcsp_core::lift::lift_to;
use vcsp_core::stp::{pair_to_tournament, stp_to_submodular};
use vcsp_core::{Caps, Error, Instance, Language, Rational};

use crate::error::{CliError, Result};
use crate::formats::{
    format_rational, read_json, to_json, write_json, FpolyFile, InstanceFile, LanguageFile,
    PairFile, Transcript,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

impl Outcome {
    fn new(code: i32, report: String) -> Self {
        Outcome { code, report }
    }
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub caps: Caps,
    pub seed: u64,
}

impl Options {
    /// Caps the exhaustive enumerations (brute-force minimization and
    /// admittance checks) at `states`.
    pub fn with_state_cap(mut self, states: u128) -> Self {
        self.caps.enumeration = states;
        self.caps.admits = states;
        self
    }
}

pub fn load_language(path: &Path) -> Result<Language<Rational>> {
    read_json::<LanguageFile>(path)?.to_language()
}

#[derive(Serialize)]
struct ActiveRow {
    row: String,
    multiplier: String,
}

#[derive(Serialize)]
struct FarkasReport {
    verified: bool,
    farkas: Vec<String>,
    active_rows: Vec<ActiveRow>,
}

fn describe_row(row: &ConstraintRow) -> String {
    match row {
        ConstraintRow::Admittance {
            function,
            labelings,
        } => format!("{function} at {labelings:?}"),
        ConstraintRow::Normalization => "weights sum to 1".into(),
    }
}

pub fn check_language(lang_path: &Path, arity: usize, out: Option<&Path>, opts: &Options) -> Result<Outcome> {
    let lang = load_language(lang_path)?;
    match find_symmetric_fpoly(&lang, arity, &opts.caps)? {
        SymmetricSearch::Feasible(omega) => {
            let file = FpolyFile::from_fpoly(&omega);
            if let Some(path) = out {
                write_json(path, &file)?;
            }
            Ok(Outcome::new(
                EXIT_OK,
                format!("FEASIBLE\nsymmetric fractional polymorphism of arity {arity}:\n{}\n", to_json(&file)),
            ))
        }
        SymmetricSearch::Infeasible(proof) => {
            let report = FarkasReport {
                verified: proof.verify(),
                farkas: proof.farkas.iter().map(format_rational).collect(),
                active_rows: proof
                    .active_rows()
                    .map(|(row, y)| ActiveRow {
                        row: describe_row(row),
                        multiplier: format_rational(y),
                    })
                    .collect(),
            };
            Ok(Outcome::new(
                EXIT_NEGATIVE,
                format!("INFEASIBLE\nFarkas certificate:\n{}\n", to_json(&report)),
            ))
        }
    }
}

pub fn lift(lang_path: &Path, fpoly_path: &Path, to: usize, out: Option<&Path>, opts: &Options) -> Result<Outcome> {
    let lang = load_language(lang_path)?;
    let seed = read_json::<FpolyFile>(fpoly_path)?.to_fpoly()?;
    let lifted = lift_to(&lang, &seed, to, &opts.caps)?;
    let admitted = vcsp_core::fpoly::admits(&lang, &lifted, opts.caps.admits)?;
    let mut file = FpolyFile::from_fpoly(&lifted);
    file.transcript = Some(Transcript {
        seed_arity: seed.arity_in(),
        admits: admitted,
    });
    if let Some(path) = out {
        write_json(path, &file)?;
    }
    let code = if admitted { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Outcome::new(
        code,
        format!(
            "lifted arity {} -> {to}\nadmits: {admitted}\n{}\n",
            seed.arity_in(),
            to_json(&file)
        ),
    ))
}

pub fn solve(inst_path: &Path, lang_path: &Path, compare: bool, opts: &Options) -> Result<Outcome> {
    let lang = Arc::new(load_language(lang_path)?);
    let inst = read_json::<InstanceFile>(inst_path)?.to_instance(lang)?;
    if !compare {
        let (_, solution) = solve_blp(&inst, &opts.caps)?;
        return Ok(Outcome::new(
            EXIT_OK,
            format!("blp optimum: {}\n", format_rational(&solution.value)),
        ));
    }
    let t = check_tightness(&inst, &opts.caps)?;
    let mut report = String::new();
    writeln!(report, "blp optimum: {}", format_rational(&t.blp)).unwrap();
    writeln!(report, "integral optimum: {}", format_rational(&t.integral)).unwrap();
    writeln!(report, "minimizer: {:?}", t.minimizer).unwrap();
    writeln!(report, "gap: {}", format_rational(&t.gap)).unwrap();
    if t.is_tight() {
        let x = extract_labeling(&inst, &opts.caps)?;
        writeln!(report, "rounded labeling: {x:?}").unwrap();
        writeln!(report, "TIGHT").unwrap();
        Ok(Outcome::new(EXIT_OK, report))
    } else {
        writeln!(report, "GAP {}", format_rational(&t.gap)).unwrap();
        Ok(Outcome::new(EXIT_NEGATIVE, report))
    }
}

pub fn stp(lang_path: &Path, pair_path: &Path, out: Option<&Path>, opts: &Options) -> Result<Outcome> {
    let lang = load_language(lang_path)?;
    let pair = read_json::<PairFile>(pair_path)?.to_pair()?;
    if pair.domain() != lang.domain() {
        return Err(CliError::Invalid(format!(
            "pair is over {} labels, language over {}",
            pair.domain().size(),
            lang.domain().size()
        )));
    }
    pair_to_tournament(&pair)?;
    let result = match stp_to_submodular(&lang, &pair, opts.caps.admits) {
        Ok(r) => r,
        Err(Error::NotAdmitted(msg)) => {
            return Ok(Outcome::new(EXIT_NEGATIVE, format!("NOT ADMITTED\n{msg}\n")));
        }
        Err(e) => return Err(e.into()),
    };
    let file = PairFile::from_pair(&result.pair);
    if let Some(path) = out {
        write_json(path, &file)?;
    }
    let mut report = String::new();
    writeln!(report, "flips: {}", result.flips.len()).unwrap();
    for f in &result.flips {
        writeln!(
            report,
            "  reverse ({}, {}) on cycle through {} (inserting {})",
            f.from, f.to, f.witness, f.round
        )
        .unwrap();
    }
    let order: Vec<String> = result.order.iter().map(|a| a.to_string()).collect();
    writeln!(report, "order: {}", order.join(" < ")).unwrap();
    writeln!(report, "submodular pair:\n{}", to_json(&file)).unwrap();
    Ok(Outcome::new(EXIT_OK, report))
}

pub fn verify(lang_path: &Path, fpoly_path: &Path, opts: &Options) -> Result<Outcome> {
    let lang = load_language(lang_path)?;
    let rho = read_json::<FpolyFile>(fpoly_path)?.to_fpoly()?;
    match find_violation(&lang, &rho, opts.caps.admits)? {
        None => Ok(Outcome::new(
            EXIT_OK,
            format!(
                "ADMITTED\nevery function admits the {} -> {} fractional polymorphism\n",
                rho.arity_in(),
                rho.arity_out()
            ),
        )),
        Some(v) => Ok(Outcome::new(
            EXIT_NEGATIVE,
            format!(
                "VIOLATED\nfunction: {}\nlabelings: {:?}\nlhs: {}\nrhs: {}\n",
                v.function,
                v.labelings,
                format_rational(&v.lhs),
                format_rational(&v.rhs)
            ),
        )),
    }
}

pub fn random_instance(lang_path: &Path, nodes: usize, terms: usize, opts: &Options) -> Result<Outcome> {
    let lang = Arc::new(load_language(lang_path)?);
    let inst = Instance::random(lang, nodes, terms, opts.seed)?;
    Ok(Outcome::new(
        EXIT_OK,
        to_json(&InstanceFile::from_instance(&inst)) + "\n",
    ))
}
