//! Command-line front end: model files, commands and reports.
//!
//! Exit codes: 0 when every executed check passes, 1 when any check fails,
//! 2 on unreadable or invalid input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::coherence::{self, ParseError};
use crate::fock::{self, FockError, ProcessProgram, ProgramSyntaxError};
use crate::group::{
    check_transmutation, Bicharacter, GroupError, GroupHom, GroupSpec, RationalPhase,
};
use crate::model::{
    BraidSpec, CMatrix, CrossSpec, ExpansionSign, ModelError, ParticleModel, DEFAULT_TOL,
};
use crate::report::{Check, CheckReport, Status, Verdict};
use crate::transmute::{self, Transmutation, TransmuteError};
use crate::word::{FockVector, TensorWord};

pub const DEFAULT_NMAX: usize = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Transmute(#[from] TransmuteError),
    #[error(transparent)]
    Expr(#[from] ParseError),
    #[error(transparent)]
    Program(#[from] ProgramSyntaxError),
    #[error("bad vector {text:?}: {reason}")]
    Vector { text: String, reason: String },
}

/// A complex number written `[re, im]`, or a bare real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexEntry {
    Pair([f64; 2]),
    Real(f64),
}

impl From<ComplexEntry> for Complex64 {
    fn from(c: ComplexEntry) -> Self {
        match c {
            ComplexEntry::Pair([re, im]) => Complex64::new(re, im),
            ComplexEntry::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

impl From<Complex64> for ComplexEntry {
    fn from(c: Complex64) -> Self {
        ComplexEntry::Pair([c.re, c.im])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSection {
    pub orders: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BicharacterSection {
    #[serde(rename = "Q")]
    pub q: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorsSection {
    pub grades: Vec<Vec<i64>>,
    pub pairing: Vec<Vec<ComplexEntry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum BraidSection {
    #[serde(rename = "grade-diagonal")]
    GradeDiagonal,
    #[serde(rename = "matrix")]
    Matrix {
        #[serde(rename = "R")]
        r: Vec<Vec<ComplexEntry>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CrossSection {
    #[serde(rename = "derived")]
    Derived,
    #[serde(rename = "matrix")]
    Matrix {
        #[serde(rename = "T")]
        t: Vec<Vec<ComplexEntry>>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansion_sign: Option<String>,
}

/// On-disk model description. Rational phases are strings `"p/q"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub group: GroupSection,
    pub bicharacter: BicharacterSection,
    pub generators: GeneratorsSection,
    pub braid: BraidSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross: Option<CrossSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsSection>,
}

/// Run settings resolved from file options and command-line flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub tolerance: f64,
    pub n_max: usize,
}

fn matrix(rows: &[Vec<ComplexEntry>], what: &str) -> Result<CMatrix, CliError> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if let Some((k, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
        return Err(CliError::Schema(format!(
            "{what}: row {k} has {} entries, row 0 has {m}",
            row.len()
        )));
    }
    Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j].into()))
}

fn rows(m: &CMatrix) -> Vec<Vec<ComplexEntry>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
        .collect()
}

fn bicharacter(group: &GroupSection, q: &BicharacterSection) -> Result<Bicharacter, CliError> {
    let g = GroupSpec::new(&group.orders)?;
    let q =
        q.q.iter()
            .map(|row| {
                row.iter()
                    .map(|s| s.parse())
                    .collect::<Result<Vec<RationalPhase>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
    Ok(Bicharacter::new(g, q)?)
}

impl ModelFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        read_json(path)
    }

    pub fn to_model(&self) -> Result<ParticleModel, CliError> {
        let eps = bicharacter(&self.group, &self.bicharacter)?;
        let g = eps.group().clone();
        let grades = self
            .generators
            .grades
            .iter()
            .map(|r| g.checked_element(r))
            .collect::<Result<Vec<_>, _>>()?;
        let pairing = matrix(&self.generators.pairing, "pairing")?;
        let braid = match &self.braid {
            BraidSection::GradeDiagonal => BraidSpec::GradeDiagonal,
            BraidSection::Matrix { r } => BraidSpec::Matrix(matrix(r, "braid matrix R")?),
        };
        let cross = match &self.cross {
            None | Some(CrossSection::Derived) => CrossSpec::DerivedFromBraid,
            Some(CrossSection::Matrix { t }) => CrossSpec::Matrix(matrix(t, "cross matrix T")?),
        };
        let sign = match self
            .options
            .as_ref()
            .and_then(|o| o.expansion_sign.as_deref())
        {
            None | Some("+") => ExpansionSign::Plus,
            Some("-") => ExpansionSign::Minus,
            Some(other) => {
                return Err(CliError::Schema(format!(
                    "options.expansion_sign must be \"+\" or \"-\", got {other:?}"
                )))
            }
        };
        Ok(ParticleModel::new(eps, grades, pairing, braid, cross)?.with_expansion_sign(sign))
    }

    pub fn from_model(model: &ParticleModel, options: Option<OptionsSection>) -> Self {
        let eps = model.bicharacter();
        let as_i64 = |r: &[u64]| r.iter().map(|&x| x as i64).collect::<Vec<_>>();
        ModelFile {
            group: GroupSection {
                orders: as_i64(model.group().orders()),
            },
            bicharacter: BicharacterSection {
                q: eps
                    .matrix()
                    .iter()
                    .map(|row| row.iter().map(|p| p.to_string()).collect())
                    .collect(),
            },
            generators: GeneratorsSection {
                grades: model
                    .grades()
                    .iter()
                    .map(|g| as_i64(g.residues()))
                    .collect(),
                pairing: rows(model.pairing()),
            },
            braid: match model.braid_spec() {
                BraidSpec::GradeDiagonal => BraidSection::GradeDiagonal,
                BraidSpec::Matrix(r) => BraidSection::Matrix { r: rows(r) },
            },
            cross: match model.cross_spec() {
                CrossSpec::DerivedFromBraid => None,
                CrossSpec::Matrix(t) => Some(CrossSection::Matrix { t: rows(t) }),
            },
            options,
        }
    }

    pub fn run_options(&self, tol: Option<f64>, n_max: Option<usize>) -> RunOptions {
        let file = self.options.clone().unwrap_or_default();
        RunOptions {
            tolerance: tol.or(file.tolerance).unwrap_or(DEFAULT_TOL),
            n_max: n_max.or(file.n_max).unwrap_or(DEFAULT_NMAX),
        }
    }
}

/// Generator images of a homomorphism, one residue vector per source factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    pub images: Vec<Vec<i64>>,
}

/// A target group and bicharacter, in the same layout as a model file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BicharacterFile {
    pub group: GroupSection,
    pub bicharacter: BicharacterSection,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (k, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..k]);
                start = k + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Parses `2*[2] + 3*[1]`, `[]`, `(0.5,-1)*[1,2]` or `-[1]`. Letters are
/// 1-based.
pub fn parse_vector(text: &str, n_gen: usize) -> Result<FockVector, CliError> {
    let bad = |reason: String| CliError::Vector {
        text: text.to_string(),
        reason,
    };
    let mut v = FockVector::zero();
    for term in split_top_level(text, '+') {
        let term = term.trim();
        if term.is_empty() {
            return Err(bad("empty term".into()));
        }
        let pieces = split_top_level(term, '*');
        let (coef, word) = match pieces.as_slice() {
            [word] => match word.trim().strip_prefix('-') {
                Some(rest) => (Complex64::new(-1.0, 0.0), rest.trim()),
                None => (Complex64::new(1.0, 0.0), word.trim()),
            },
            [coef, word] => (parse_coefficient(coef.trim()).map_err(bad)?, word.trim()),
            _ => return Err(bad(format!("term {term:?} has more than one '*'"))),
        };
        let inner = word
            .strip_prefix('[')
            .and_then(|w| w.strip_suffix(']'))
            .ok_or_else(|| bad(format!("expected a word like [1,2], got {word:?}")))?;
        let mut letters = Vec::new();
        for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let k: usize = tok
                .parse()
                .map_err(|_| bad(format!("letter {tok:?} is not a positive integer")))?;
            if k == 0 || k > n_gen {
                return Err(bad(format!("letter {k} outside 1..={n_gen}")));
            }
            letters.push(k - 1);
        }
        v.add_term(TensorWord::new(letters), coef);
    }
    Ok(v)
}

fn parse_coefficient(s: &str) -> Result<Complex64, String> {
    if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let (re, im) = inner
            .split_once(',')
            .ok_or_else(|| format!("complex coefficient {s:?} must be (re,im)"))?;
        let re: f64 = re
            .trim()
            .parse()
            .map_err(|_| format!("bad number {re:?}"))?;
        let im: f64 = im
            .trim()
            .parse()
            .map_err(|_| format!("bad number {im:?}"))?;
        return Ok(Complex64::new(re, im));
    }
    s.parse::<f64>()
        .map(|re| Complex64::new(re, 0.0))
        .map_err(|_| format!("bad coefficient {s:?}"))
}

fn vector_json(v: &FockVector) -> Value {
    Value::Array(
        v.iter()
            .map(|(w, c)| json!({"word": w.to_string(), "re": c.re, "im": c.im}))
            .collect(),
    )
}

#[derive(Debug, Parser)]
#[command(
    name = "statcat",
    version,
    about = "Graded particle statistics toolkit"
)]
pub struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full check suite on a model file.
    Check {
        model: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Gram matrix of one sector with its rank and smallest eigenvalue.
    Gram {
        model: PathBuf,
        #[arg(long)]
        sector: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Apply a process program such as "c1;c2;x1;b2" to a vector.
    Apply {
        model: PathBuf,
        #[arg(long)]
        program: String,
        #[arg(long, default_value = "[]")]
        vector: String,
    },
    /// Push a grade-diagonal model along a group homomorphism.
    Transmute {
        model: PathBuf,
        #[arg(long)]
        hom: PathBuf,
        #[arg(long = "target-bichar")]
        target_bichar: PathBuf,
        /// Where to write the transmuted model when all checks pass.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Normal form of a monoidal expression.
    Normalize {
        #[arg(long)]
        expr: String,
    },
}

/// Machine-readable outcome of one command, plus its human rendering.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    pub results: Value,
    #[serde(skip)]
    pub text: Vec<String>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            checks: Vec::new(),
            results: json!({}),
            text: Vec::new(),
        }
    }

    fn add(&mut self, report: CheckReport) {
        self.checks.extend(report.checks);
    }

    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(Check::failed) {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.command);
        out.push_str(
            &CheckReport {
                checks: self.checks.clone(),
            }
            .to_string(),
        );
        for line in &self.text {
            out.push_str(line);
            out.push('\n');
        }
        let failed = self.checks.iter().filter(|c| c.failed()).count();
        let skipped = self
            .checks
            .iter()
            .filter(|c| c.status == Status::Skipped)
            .count();
        out.push_str(&format!(
            "{}: {} checks, {} failed, {} skipped\n",
            if failed == 0 { "PASS" } else { "FAIL" },
            self.checks.len(),
            failed,
            skipped
        ));
        out
    }
}

fn load_model(path: &Path) -> Result<(ModelFile, ParticleModel), CliError> {
    let file = ModelFile::load(path)?;
    let model = file.to_model()?;
    Ok((file, model))
}

fn verdict_check<W: std::fmt::Display>(name: &str, v: &Verdict<W>) -> Check {
    let c = Check::exact(name, v.holds());
    match v.witness() {
        Some(w) => c.with_witness(w.to_string()),
        None => c,
    }
}

/// Largest group for which the bicharacter laws are checked exhaustively.
pub const LAW_CHECK_MAX_ORDER: u64 = 64;

pub fn cmd_check(path: &Path, tol: Option<f64>, nmax: Option<usize>) -> Result<Report, CliError> {
    let (file, model) = load_model(path)?;
    let opts = file.run_options(tol, nmax);
    let (tol, n_max) = (opts.tolerance, opts.n_max);
    let mut report = Report::new("check");
    let eps = model.bicharacter();

    report.checks.push(Check::exact("bicharacter_valid", true));
    if model.group().size() <= LAW_CHECK_MAX_ORDER {
        report
            .checks
            .push(verdict_check("bicharacter_laws", &eps.check_laws()));
    } else {
        report.checks.push(Check::skipped(
            "bicharacter_laws",
            format!("group order above {LAW_CHECK_MAX_ORDER}"),
        ));
    }
    let normalized = eps
        .is_normalized()
        .map_witness(|(a, b)| format!("({a}, {b})"));
    report.checks.push(verdict_check("normalized", &normalized));
    report.add(model.check_yang_baxter(tol));
    let symmetry = model.check_symmetry(tol);
    let symmetric = symmetry.all_pass();
    report.add(symmetry);
    report.add(fock::check_infinite_statistics(&model, n_max, tol)?);
    report
        .checks
        .push(fock::commutator_defect_all(&model, n_max, tol)?);
    if symmetric {
        report.add(fock::check_braid_exchange_relations(&model, n_max, tol)?);
    } else {
        let note = "braiding does not square to the identity";
        for name in [
            "exchange:annihilator_creator",
            "exchange:creator_creator",
            "exchange:annihilator_annihilator",
        ] {
            report.checks.push(Check::skipped(name, note));
        }
    }

    let mut dims = Vec::new();
    report
        .text
        .push("sector  full  rank  min_eigenvalue".into());
    for n in 0..=n_max {
        let gram = fock::gram_matrix(&model, n)?;
        let asymmetry = gram.hermiticity_defect();
        report.checks.push(Check::from_defect(
            format!("gram_hermitian@n={n}"),
            asymmetry,
            tol,
        ));
        let psd = fock::gram_psd_check(&model, n, tol)?;
        report.checks.push(psd.check);
        let rank = gram.rank(tol);
        dims.push(json!({
            "n": n,
            "full": gram.dim(),
            "rank": rank,
            "min_eigenvalue": psd.min_eigenvalue,
        }));
        report.text.push(format!(
            "{n:>6}  {:>4}  {rank:>4}  {}",
            gram.dim(),
            psd.min_eigenvalue
                .map_or("n/a (not Hermitian)".to_string(), |e| format!("{e:.6e}"))
        ));
    }
    report.results = json!({
        "generators": model.n_generators(),
        "group": model.group().to_string(),
        "tolerance": tol,
        "n_max": n_max,
        "sector_dimensions": dims,
    });
    Ok(report)
}

pub fn cmd_gram(path: &Path, sector: usize, tol: Option<f64>) -> Result<Report, CliError> {
    let (file, model) = load_model(path)?;
    let tol = file.run_options(tol, None).tolerance;
    let gram = fock::gram_matrix(&model, sector)?;
    let psd = fock::gram_psd_check(&model, sector, tol)?;
    let rank = gram.rank(tol);
    let mut report = Report::new("gram");
    report.checks.push(psd.check);
    let matrix: Vec<Vec<[f64; 2]>> = (0..gram.dim())
        .map(|i| {
            (0..gram.dim())
                .map(|j| [gram.matrix[(i, j)].re, gram.matrix[(i, j)].im])
                .collect()
        })
        .collect();
    report.text.push(format!(
        "sector {sector}: rank {rank} of {}, hermiticity defect {:.3e}, min eigenvalue {}",
        gram.dim(),
        gram.hermiticity_defect(),
        psd.min_eigenvalue
            .map_or("n/a (not Hermitian)".to_string(), |e| format!("{e:.6e}"))
    ));
    report.results = json!({
        "sector": sector,
        "full": gram.dim(),
        "rank": rank,
        "hermiticity_defect": gram.hermiticity_defect(),
        "min_eigenvalue": psd.min_eigenvalue,
        "words": gram.words.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "matrix": matrix,
    });
    Ok(report)
}

pub fn cmd_apply(path: &Path, program: &str, vector: &str) -> Result<Report, CliError> {
    let (_, model) = load_model(path)?;
    let program: ProcessProgram = program.parse()?;
    let input = parse_vector(vector, model.n_generators())?;
    let output = fock::apply_program(&model, &program, &input)?;
    let mut report = Report::new("apply");
    report.text.push(format!("{program} on {input} = {output}"));
    report.results = json!({
        "program": program.to_string(),
        "input": vector_json(&input),
        "output": vector_json(&output),
    });
    Ok(report)
}

pub fn cmd_transmute(
    path: &Path,
    hom: &Path,
    target_bichar: &Path,
    out: Option<&Path>,
    tol: Option<f64>,
    nmax: Option<usize>,
) -> Result<Report, CliError> {
    let (file, model) = load_model(path)?;
    let opts = file.run_options(tol, nmax);
    let hom_file: HomFile = read_json(hom)?;
    let target_file: BicharacterFile = read_json(target_bichar)?;
    let eps_target = bicharacter(&target_file.group, &target_file.bicharacter)?;
    let target_group = eps_target.group().clone();
    let images = hom_file
        .images
        .iter()
        .map(|r| target_group.element(r))
        .collect::<Result<Vec<_>, _>>()?;
    let h = GroupHom::new(model.group().clone(), target_group, images)?;

    let mut report = Report::new("transmute");
    let verdict = check_transmutation(&h, model.bicharacter(), &eps_target)?;
    report.checks.push(verdict_check("transmutation", &verdict));
    let t = Transmutation::along(model, h, &eps_target)?;
    report.add(transmute::check_cross_symmetric(&t, opts.tolerance));
    report.add(transmute::check_relation_transport(
        &t,
        opts.n_max,
        opts.tolerance,
    )?);

    let target = ModelFile::from_model(t.target(), file.options.clone());
    let passed = report.exit_code() == 0;
    if let (true, Some(out)) = (passed, out) {
        let text = serde_json::to_string_pretty(&target).expect("model file serializes");
        fs::write(out, text + "\n").map_err(|source| CliError::Io {
            path: out.to_path_buf(),
            source,
        })?;
        report.text.push(format!("wrote {}", out.display()));
    }
    report.results = json!({
        "target": serde_json::to_value(&target).expect("model file serializes"),
        "written": passed && out.is_some(),
    });
    Ok(report)
}

pub fn cmd_normalize(expr: &str) -> Result<Report, CliError> {
    let e = coherence::parse_expr(expr)?;
    let nf = coherence::normalize(&e);
    let mut report = Report::new("normalize");
    report.text.push(format!("{expr} => {nf}"));
    report.results = json!({"input": expr, "normal_form": nf.to_string()});
    Ok(report)
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Check { model, tol, nmax } => cmd_check(model, *tol, *nmax),
        Command::Gram { model, sector, tol } => cmd_gram(model, *sector, *tol),
        Command::Apply {
            model,
            program,
            vector,
        } => cmd_apply(model, program, vector),
        Command::Transmute {
            model,
            hom,
            target_bichar,
            out,
            tol,
            nmax,
        } => cmd_transmute(model, hom, target_bichar, out.as_deref(), *tol, *nmax),
        Command::Normalize { expr } => cmd_normalize(expr),
    }
}

/// Parses `args`, runs the command and writes the report. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{e}");
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            let text = if cli.json {
                report.to_json() + "\n"
            } else {
                report.to_text()
            };
            let _ = out.write_all(text.as_bytes());
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
