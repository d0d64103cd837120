//! Subcommands: argument definitions and their mapping onto library calls.

use crate::formats::{lambda_string, parse_exact, FamilyDocument, FormatError, PencilDocument, SubspaceDocument};
use crate::report::{Check, Input, ReportDocument, Status};
use bipencil::algebra::{irreducible_factors, rational_to_f64, Matrix, Polynomial, Rational};
use bipencil::charts::{
    bi_involution_check, compatibility_check, completeness_check, eigenvalue_differential_check,
    eigenvalue_differential_convergence, jacobi_check, jk_regular_scan, sample_points, standard_integrals_verify,
    verify_eigenvalue_shift_at, ChartPencil, Form, FunctionFamily, FunctionTag, IdentityCheck, MultiPoly,
};
use bipencil::corpus::{self, EntryKind};
use bipencil::flows::{bi_hamiltonian_field, drift_report, integrate};
use bipencil::pencil::{canonical_pencil, same_bundle, Lambda};
use bipencil::subspace::{
    build_bi_lagrangian, complex_structure, eigen_splitting, is_bi_isotropic, is_bi_lagrangian, nilpotent_companion,
    reduce_pencil, reduce_subspace, spectrum_containment,
};
use bipencil::{Error, JkInvariants, PencilEigenvalue, SkewPencil, Subspace};
use clap::{Args, Parser, Subcommand};
use num::{BigInt, One, Zero};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Parser, Debug)]
#[command(name = "bipencil", version, about = "Invariants of skew pencils and checks on compatible Poisson pencils")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// A point given as comma-separated exact rationals or decimals.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(pub Vec<Rational>);

impl FromStr for Point {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',').map(parse_number).collect::<Result<Vec<_>, _>>().map(Point)
    }
}

/// `p/q`, an integer, or a decimal such as `-1.25e-3`, all read exactly.
pub fn parse_number(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    if let Ok(r) = parse_exact(t) {
        return Ok(r);
    }
    let err = || format!("not a number: \"{t}\"");
    let (mantissa, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() || !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let int: BigInt = format!("{whole}{frac}").parse().map_err(|_| err())?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if shift >= 0 {
        Rational::from_integer(int * num::pow(ten, shift as usize))
    } else {
        Rational::new(int, num::pow(ten, (-shift) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

#[derive(Args, Debug)]
pub struct PencilArg {
    /// Pencil document path, or `corpus:NAME`.
    pub pencil: String,
}

#[derive(Args, Debug)]
pub struct AtArg {
    /// Evaluation point for non-constant charts, e.g. `1,1/2,0.25`.
    #[arg(long)]
    pub at: Option<Point>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// Seed for random sample points.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of random sample points.
    #[arg(long, default_value_t = 8)]
    pub samples: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Jordan–Kronecker invariants.
    Jk {
        #[command(flatten)]
        pencil: PencilArg,
        #[command(flatten)]
        at: AtArg,
    },
    /// Characteristic polynomial and eigenvalues.
    Charpoly {
        #[command(flatten)]
        pencil: PencilArg,
        #[command(flatten)]
        at: AtArg,
    },
    /// Core subspace.
    Core {
        #[command(flatten)]
        pencil: PencilArg,
        #[command(flatten)]
        at: AtArg,
        /// Write the core as a subspace document.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare bundles: two constant pencils, or a chart across sample points.
    Bundle {
        #[command(flatten)]
        pencil: PencilArg,
        #[command(flatten)]
        at: AtArg,
        /// Second pencil to compare with.
        #[arg(long)]
        with: Option<String>,
        #[command(flatten)]
        samples: SampleArgs,
    },
    /// Linear reduction by an admissible bi-isotropic subspace.
    Reduce {
        #[command(flatten)]
        pencil: PencilArg,
        #[command(flatten)]
        at: AtArg,
        /// Subspace document to reduce by.
        #[arg(long)]
        subspace: PathBuf,
        /// Bi-Lagrangian subspace document to carry to the quotient.
        #[arg(long)]
        lagrangian: Option<PathBuf>,
        /// Write the reduced pencil document.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a bi-Lagrangian subspace (or verify one with --verify).
    Bilagrangian {
        #[command(flatten)]
        pencil: PencilArg,
        #[command(flatten)]
        at: AtArg,
        /// Bi-isotropic invariant seed to extend (default: zero).
        #[arg(long)]
        subspace: Option<PathBuf>,
        /// Check this subspace instead of building one.
        #[arg(long, conflicts_with = "subspace")]
        verify: Option<PathBuf>,
        /// Write the subspace document.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Primary decomposition under the recursion operator.
    Split {
        #[command(flatten)]
        pencil: PencilArg,
        #[command(flatten)]
        at: AtArg,
    },
    /// Complex structure for a single conjugate pair of eigenvalues.
    Complexify {
        #[command(flatten)]
        pencil: PencilArg,
        #[command(flatten)]
        at: AtArg,
    },
    /// Jacobi identity for both bivectors.
    CheckJacobi {
        #[command(flatten)]
        pencil: PencilArg,
    },
    /// Compatibility of the two bivectors.
    CheckCompat {
        #[command(flatten)]
        pencil: PencilArg,
    },
    /// Eigenvalue shift under A ↦ A + fB for a common Casimir f.
    Shift {
        #[command(flatten)]
        pencil: PencilArg,
        /// The Casimir, e.g. `x3^2 + x4`.
        #[arg(long)]
        casimir: String,
        /// Single point instead of random samples.
        #[command(flatten)]
        at: AtArg,
        #[command(flatten)]
        samples: SampleArgs,
    },
    /// Bi-involution of a family.
    Involution {
        #[command(flatten)]
        pencil: PencilArg,
        /// Family document path, or `corpus:NAME`.
        #[arg(long)]
        family: String,
    },
    /// Completeness of a family at a point.
    Complete {
        #[command(flatten)]
        pencil: PencilArg,
        #[arg(long)]
        family: String,
        #[arg(long)]
        at: Point,
        /// Subspace that dG(x) must equal.
        #[arg(long)]
        target: Option<PathBuf>,
        #[command(flatten)]
        samples: SampleArgs,
    },
    /// Standard-integral checks for a tagged family with Hamiltonians.
    Integrals {
        #[command(flatten)]
        pencil: PencilArg,
        #[arg(long)]
        family: String,
        #[command(flatten)]
        samples: SampleArgs,
    },
    /// Numeric check of (A − μB)·dμ = 0 with convergence orders.
    Eigdiff {
        #[command(flatten)]
        pencil: PencilArg,
        #[arg(long)]
        at: Point,
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
    /// Integrate the bi-Hamiltonian field and monitor the family.
    Flow {
        #[command(flatten)]
        pencil: PencilArg,
        #[arg(long)]
        family: String,
        /// Initial state.
        #[arg(long)]
        at: Point,
        #[arg(long, default_value_t = 10.0)]
        horizon: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        /// Write the trajectory as JSON lines.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// List the bundled examples, or export their documents.
    Corpus {
        /// Print the pencil document of one entry.
        #[arg(long)]
        export: Option<String>,
        /// Print a bundled family document (`so3-frozen`, `euler-top`).
        #[arg(long, conflicts_with = "export")]
        export_family: Option<String>,
        /// Write every pencil and family document into this directory.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Jk { .. } => "jk",
            Command::Charpoly { .. } => "charpoly",
            Command::Core { .. } => "core",
            Command::Bundle { .. } => "bundle",
            Command::Reduce { .. } => "reduce",
            Command::Bilagrangian { .. } => "bilagrangian",
            Command::Split { .. } => "split",
            Command::Complexify { .. } => "complexify",
            Command::CheckJacobi { .. } => "check-jacobi",
            Command::CheckCompat { .. } => "check-compat",
            Command::Shift { .. } => "shift",
            Command::Involution { .. } => "involution",
            Command::Complete { .. } => "complete",
            Command::Integrals { .. } => "integrals",
            Command::Eigdiff { .. } => "eigdiff",
            Command::Flow { .. } => "flow",
            Command::Corpus { .. } => "corpus",
        }
    }
}

/// Why a command stopped before producing its report.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or documents: exit 2.
    Usage(String),
    /// A library precondition failed on valid input: reported as a failed check.
    Precondition(Error),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::DimensionMismatch { .. } => Failure::Usage(e.to_string()),
            e => Failure::Precondition(e),
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

/// What a command prints on stdout.
pub enum Output {
    Report(ReportDocument),
    /// A document printed verbatim (corpus export); exit 0.
    Document(String),
}

struct LoadedPencil {
    chart: ChartPencil,
    constant: bool,
}

fn read(source: &str) -> Result<Vec<u8>, Failure> {
    std::fs::read(source).map_err(|e| Failure::Usage(format!("{source}: {e}")))
}

fn corpus_document(entry: &corpus::CorpusEntry) -> PencilDocument {
    let vars = match entry.kind {
        EntryKind::Constant => Vec::new(),
        EntryKind::Chart => PencilDocument::default_variables(entry.chart.dim()),
    };
    PencilDocument::from_chart(&entry.chart, vars)
}

/// Dimension, tagged family and Hamiltonians of a bundled family.
type BundledFamily = (usize, FunctionFamily, Vec<(Lambda, MultiPoly)>);

fn corpus_family(name: &str) -> Option<BundledFamily> {
    match name {
        "so3-frozen" => Some((3, corpus::so3_frozen_family(), corpus::symmetric_top_hamiltonians())),
        "euler-top" => {
            let f = corpus::euler_top_integrals();
            let family = FunctionFamily::new(vec![
                (f[0].clone(), FunctionTag::CasimirAt(Lambda::int(0))),
                (f[1].clone(), FunctionTag::HamiltonianAt(Lambda::int(0))),
            ]);
            Some((3, family, vec![(Lambda::int(0), corpus::euler_top_hamiltonian())]))
        }
        _ => None,
    }
}

const FAMILY_NAMES: [&str; 2] = ["so3-frozen", "euler-top"];

struct Context<'a> {
    report: &'a mut ReportDocument,
}

impl Context<'_> {
    fn pencil(&mut self, source: &str, role: &str) -> Result<LoadedPencil, Failure> {
        if let Some(name) = source.strip_prefix("corpus:") {
            let entry = corpus::find(name).ok_or_else(|| Failure::Usage(format!("no corpus entry \"{name}\"")))?;
            let text = corpus_document(&entry).to_json();
            self.report.inputs.push(Input::new(role, source, text.as_bytes()));
            return Ok(LoadedPencil { constant: entry.kind == EntryKind::Constant, chart: entry.chart });
        }
        let bytes = read(source)?;
        self.report.inputs.push(Input::new(role, source, &bytes));
        let text = String::from_utf8_lossy(&bytes);
        let doc = PencilDocument::parse(&text).map_err(|e| Failure::Usage(format!("{source}: {e}")))?;
        Ok(LoadedPencil { chart: doc.to_chart()?, constant: doc.is_constant() })
    }

    fn subspace(&mut self, path: &Path, role: &str, n: usize) -> Result<Subspace, Failure> {
        let source = path.display().to_string();
        let bytes = read(&source)?;
        self.report.inputs.push(Input::new(role, &source, &bytes));
        let doc = SubspaceDocument::parse(&String::from_utf8_lossy(&bytes))
            .map_err(|e| Failure::Usage(format!("{source}: {e}")))?;
        let u = doc.to_subspace()?;
        if u.ambient() != n {
            return usage(format!("{source}: ambient dimension {} for a pencil of dimension {n}", u.ambient()));
        }
        Ok(u)
    }

    fn family(&mut self, source: &str, n: usize) -> Result<(FunctionFamily, Vec<(Lambda, MultiPoly)>), Failure> {
        let (dim, family, hamiltonians) = if let Some(name) = source.strip_prefix("corpus:") {
            let (dim, family, hs) =
                corpus_family(name).ok_or_else(|| Failure::Usage(format!("no bundled family \"{name}\"")))?;
            let text = FamilyDocument::from_family(dim, &family, &hs).to_json();
            self.report.inputs.push(Input::new("family", source, text.as_bytes()));
            (dim, family, hs)
        } else {
            let bytes = read(source)?;
            self.report.inputs.push(Input::new("family", source, &bytes));
            let doc = FamilyDocument::parse(&String::from_utf8_lossy(&bytes))
                .map_err(|e| Failure::Usage(format!("{source}: {e}")))?;
            (doc.dimension, doc.to_family()?, doc.hamiltonian_pairs()?)
        };
        if dim != n {
            return usage(format!("family of dimension {dim} for a pencil of dimension {n}"));
        }
        Ok((family, hamiltonians))
    }
}

fn point_in(at: &Point, n: usize) -> Result<Vec<Rational>, Failure> {
    if at.0.len() != n {
        return usage(format!("point has {} coordinates, pencil has dimension {n}", at.0.len()));
    }
    Ok(at.0.clone())
}

/// The constant pencil: a constant document, or a chart evaluated at `--at`.
fn pointwise(p: &LoadedPencil, at: &AtArg, report: &mut ReportDocument) -> Result<SkewPencil, Failure> {
    let n = p.chart.dim();
    let x = match (&at.at, p.constant) {
        (Some(x), _) => point_in(x, n)?,
        (None, true) => vec![Rational::zero(); n],
        (None, false) => return usage("--at is required for a non-constant chart"),
    };
    if !p.constant {
        report.result("point", strings(&x));
    }
    Ok(p.chart.evaluate_at(&x))
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn matrix_json(m: &Matrix<Rational>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| strings(m.row(i))).collect()
}

fn subspace_json(u: &Subspace) -> Value {
    serde_json::to_value(SubspaceDocument::from_subspace(u)).expect("documents serialize")
}

fn invariants_json(inv: &JkInvariants) -> Value {
    let jordan: Vec<Value> = inv
        .jordan
        .iter()
        .map(|j| {
            let minimal = match &j.eigenvalue {
                bipencil::Eigenvalue::Finite(q) => q.to_string(),
                bipencil::Eigenvalue::Infinite => "inf".into(),
            };
            json!({ "eigenvalue": j.eigenvalue.to_string(), "minimal_polynomial": minimal, "partition": j.partition })
        })
        .collect();
    json!({ "kronecker": inv.kronecker, "jordan": jordan, "summary": inv.to_string() })
}

fn eigenvalues_json(values: &[PencilEigenvalue]) -> Value {
    values
        .iter()
        .map(|e| {
            let approx: Vec<[f64; 2]> = e.approximations.iter().map(|z| [z.re, z.im]).collect();
            json!({ "eigenvalue": e.value.to_string(), "multiplicity": e.multiplicity, "approximations": approx })
        })
        .collect()
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn identity_checks(report: &mut ReportDocument, name: &str, check: &IdentityCheck) {
    let witness = check.witness.as_ref().map(|w| format!("{} at ({}, {}, {})", w.residual, w.triple[0], w.triple[1], w.triple[2]));
    let failures: Vec<Value> = check
        .failures
        .iter()
        .map(|w| json!({ "triple": w.triple, "residual": w.residual.to_string() }))
        .collect();
    report.result(&format!("{name}_failures"), failures);
    let mut c = Check::holds(name, check.holds);
    if let Some(w) = witness {
        c = c.witness(w);
    }
    report.check(c);
}

fn form_name(f: Form) -> &'static str {
    match f {
        Form::A => "A",
        Form::B => "B",
    }
}

/// Runs one subcommand into `report`, or returns a document to print verbatim.
pub fn execute(cmd: &Command, report: &mut ReportDocument) -> Result<Option<String>, Failure> {
    let mut ctx = Context { report };
    match cmd {
        Command::Jk { pencil, at } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            let p = pointwise(&lp, at, ctx.report)?;
            let inv = p.jk_invariants()?;
            let r = ctx.report;
            r.result("dimension", p.dim());
            r.result("rank", p.rank());
            r.result("invariants", invariants_json(&inv));
            r.result("summary", inv.to_string());
            let rebuilt = canonical_pencil(&inv)?.jk_invariants()?;
            r.check(Check::holds("canonical form has the same invariants", rebuilt == inv));
            r.check(Check::holds("rank equals dimension minus Kronecker count", inv.rank() == p.rank()));
        }
        Command::Charpoly { pencil, at } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            let p = pointwise(&lp, at, ctx.report)?;
            let cp = p.characteristic_polynomial()?;
            let r = ctx.report;
            r.result("characteristic_polynomial", irreducible_factors(&cp).to_string());
            r.result("expanded", cp.to_string());
            r.result("eigenvalues", eigenvalues_json(&p.eigenvalues()));
            r.result("rank", p.rank());
            // finite Jordan data only: Kronecker and ∞ blocks contribute nothing
            let inv = p.jk_invariants()?;
            let expected: usize = inv
                .jordan
                .iter()
                .filter(|j| j.eigenvalue != bipencil::Eigenvalue::Infinite)
                .map(|j| j.eigenvalue.degree() * j.partition.iter().sum::<usize>())
                .sum();
            let degree = cp.degree().unwrap_or(0);
            r.check(
                Check::holds("degree matches the finite Jordan blocks", degree == expected)
                    .detail(format!("degree {degree}, expected {expected}")),
            );
        }
        Command::Core { pencil, at, out } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            let p = pointwise(&lp, at, ctx.report)?;
            let core = p.core_subspace();
            let r = ctx.report;
            r.result("core", subspace_json(&core));
            r.result("core_dimension", core.dim());
            r.check(Check::holds("core is bi-isotropic", is_bi_isotropic(&p, &core)));
            if let Some(path) = out {
                write_file(path, &SubspaceDocument::from_subspace(&core).to_json())?;
            }
        }
        Command::Bundle { pencil, at, with, samples } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            if let Some(other) = with {
                let lq = ctx.pencil(other, "other")?;
                let p = pointwise(&lp, at, ctx.report)?;
                let q = pointwise(&lq, at, ctx.report)?;
                let same = p.dim() == q.dim() && same_bundle(&p, &q)?;
                let r = ctx.report;
                r.result("invariants", invariants_json(&p.jk_invariants()?));
                r.result("other_invariants", invariants_json(&q.jk_invariants()?));
                r.check(Check::holds("same bundle", same));
            } else if lp.constant {
                return usage("bundle on a constant pencil needs --with");
            } else {
                let n = lp.chart.dim();
                let base = match &at.at {
                    Some(x) => point_in(x, n)?,
                    None => return usage("--at is required as the base point"),
                };
                let pts = sample_points(n, samples.samples, samples.seed);
                let scan = jk_regular_scan(&lp.chart, &base, &pts)?;
                let r = ctx.report;
                r.result("base", strings(&base));
                r.result("base_invariants", invariants_json(&scan.base_invariants));
                let entries: Vec<Value> = scan
                    .entries
                    .iter()
                    .map(|e| json!({ "point": strings(&e.point), "rank": e.rank, "same_bundle": e.same_bundle }))
                    .collect();
                r.result("samples", entries);
                let changes = scan.changes();
                let mut c = Check::holds("bundle agrees at every sample", changes.is_empty());
                if let Some(e) = changes.first() {
                    c = c.witness(format!("({}) with rank {}", strings(&e.point).join(", "), e.rank));
                }
                r.check(c);
            }
        }
        Command::Reduce { pencil, at, subspace, lagrangian, out } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            let p = pointwise(&lp, at, ctx.report)?;
            let u = ctx.subspace(subspace, "subspace", p.dim())?;
            let l = lagrangian.as_ref().map(|path| ctx.subspace(path, "lagrangian", p.dim())).transpose()?;
            let red = reduce_pencil(&p, &u)?;
            let reduced_doc = PencilDocument::from_chart(&corpus::constant_chart(&red.pencil), Vec::new());
            let r = ctx.report;
            r.result("reduced_dimension", red.pencil.dim());
            r.result("reduced_pencil", &reduced_doc);
            r.result("reduced_invariants", invariants_json(&red.pencil.jk_invariants()?));
            if u.contains(&p.core_subspace()) {
                let s = spectrum_containment(&p, &u)?;
                r.check(Check::holds("reduced spectrum is contained in the original", s.contained));
                r.check(Check::holds("reduced pencil has corank 0", s.reduced_corank == 0));
            } else {
                r.result("note", "subspace does not contain the core; spectrum checks skipped");
            }
            if let Some(l) = l {
                r.check(Check::holds("input subspace is bi-Lagrangian", is_bi_lagrangian(&p, &l)));
                let lr = reduce_subspace(&p, &u, &l)?;
                r.result("reduced_lagrangian", subspace_json(&lr));
                r.check(Check::holds("reduced subspace is bi-Lagrangian", is_bi_lagrangian(&red.pencil, &lr)));
            }
            if let Some(path) = out {
                write_file(path, &reduced_doc.to_json())?;
            }
        }
        Command::Bilagrangian { pencil, at, subspace, verify, out } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            let p = pointwise(&lp, at, ctx.report)?;
            let n = p.dim();
            let l = match verify {
                Some(path) => ctx.subspace(path, "candidate", n)?,
                None => {
                    let seed = match subspace {
                        Some(path) => ctx.subspace(path, "seed", n)?,
                        None => Subspace::zero(n),
                    };
                    let l = build_bi_lagrangian(&p, &seed)?;
                    ctx.report.check(Check::holds("result contains the seed", l.contains(&seed)));
                    l
                }
            };
            let r = ctx.report;
            r.result("subspace", subspace_json(&l));
            r.check(Check::holds("bi-Lagrangian", is_bi_lagrangian(&p, &l)));
            match nilpotent_companion(&p) {
                Ok(nc) => r.check(Check::holds("bi-Lagrangian for the nilpotent companion", is_bi_lagrangian(&nc, &l))),
                Err(Error::SingularB) => {
                    r.result("note", "B is degenerate; nilpotent companion check skipped");
                }
                Err(e) => return Err(e.into()),
            }
            if let Some(path) = out {
                write_file(path, &SubspaceDocument::from_subspace(&l).to_json())?;
            }
        }
        Command::Split { pencil, at } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            let p = pointwise(&lp, at, ctx.report)?;
            let parts = eigen_splitting(&p)?;
            let r = ctx.report;
            let mut total = Subspace::zero(p.dim());
            let mut single = true;
            let mut summands = Vec::new();
            for (u, q) in &parts {
                total = total.sum(u);
                let ev = q.eigenvalues();
                single &= ev.len() == 1;
                summands.push(json!({
                    "dimension": u.dim(),
                    "subspace": subspace_json(u),
                    "eigenvalues": eigenvalues_json(&ev),
                    "invariants": invariants_json(&q.jk_invariants()?),
                }));
            }
            r.result("summands", summands);
            let dims: usize = parts.iter().map(|(u, _)| u.dim()).sum();
            r.check(Check::holds("summands form a direct sum of the space", dims == p.dim() && total.dim() == p.dim()));
            r.check(Check::holds("each summand has a single eigenvalue", single));
        }
        Command::Complexify { pencil, at } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            let p = pointwise(&lp, at, ctx.report)?;
            let cs = complex_structure(&p)?;
            let n = p.dim();
            let r = ctx.report;
            r.result("alpha", cs.alpha.to_string());
            r.result("beta", cs.beta.to_string());
            r.result("j", matrix_json(&cs.j));
            r.result("a_hat", matrix_json(&cs.a_hat));
            let minus_id = Matrix::<Rational>::identity(n).scale(&-Rational::one());
            r.check(Check::holds("J² = −id", cs.j.mul(&cs.j) == minus_id));
            let skew = cs.a_hat.is_skew();
            r.check(Check::holds("Â is skew-symmetric", skew));
            if skew {
                let q = SkewPencil::new(cs.a_hat.clone(), p.b().clone())?;
                let cp = q.characteristic_polynomial()?;
                let expected = Polynomial::variable('λ').pow(n / 2);
                r.result("a_hat_characteristic_polynomial", irreducible_factors(&cp).to_string());
                r.check(Check::holds("(Â, B) has the single eigenvalue 0", cp.with_var('λ') == expected));
            }
        }
        Command::CheckJacobi { pencil } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            identity_checks(ctx.report, "jacobi_a", &jacobi_check(lp.chart.a()));
            identity_checks(ctx.report, "jacobi_b", &jacobi_check(lp.chart.b()));
        }
        Command::CheckCompat { pencil } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            let c = compatibility_check(lp.chart.a(), lp.chart.b())?;
            identity_checks(ctx.report, "compatibility", &c);
        }
        Command::Shift { pencil, casimir, at, samples } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            let n = lp.chart.dim();
            let f = MultiPoly::parse(n, casimir).ok_or_else(|| Failure::Usage(format!("cannot parse \"{casimir}\"")))?;
            let points = match &at.at {
                Some(x) => vec![point_in(x, n)?],
                None => sample_points(n, samples.samples, samples.seed),
            };
            let reports = verify_eigenvalue_shift_at(&lp.chart, &f, &points)?;
            let r = ctx.report;
            let spectrum = |s: &[(bipencil::Eigenvalue, usize)]| -> Vec<Value> {
                s.iter().map(|(e, m)| json!({ "eigenvalue": e.to_string(), "multiplicity": m })).collect()
            };
            let rows: Vec<Value> = reports
                .iter()
                .map(|s| {
                    json!({
                        "point": strings(&s.point),
                        "shift": s.shift.to_string(),
                        "before": spectrum(&s.before),
                        "after": spectrum(&s.after),
                        "passed": s.passed,
                    })
                })
                .collect();
            r.result("casimir", f.to_string());
            r.result("points", rows);
            let failed = reports.iter().find(|s| !s.passed);
            let mut c = Check::holds("finite eigenvalues move by f(x)", failed.is_none())
                .detail(format!("{} of {} points", reports.iter().filter(|s| s.passed).count(), reports.len()));
            if let Some(s) = failed {
                c = c.witness(format!("({})", strings(&s.point).join(", ")));
            }
            r.check(c);
        }
        Command::Involution { pencil, family } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            let (fam, _) = ctx.family(family, lp.chart.dim())?;
            let inv = bi_involution_check(&lp.chart, &fam.functions());
            let mut c = Check::holds("family is in bi-involution", inv.holds);
            if let Some(w) = &inv.witness {
                c = c.witness(format!(
                    "{{f{}, f{}}}_{} = {}",
                    w.pair.0 + 1,
                    w.pair.1 + 1,
                    form_name(w.form),
                    w.residual
                ));
            }
            ctx.report.result("functions", fam.functions().iter().map(|f| f.to_string()).collect::<Vec<_>>());
            ctx.report.check(c);
        }
        Command::Complete { pencil, family, at, target, samples } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            let n = lp.chart.dim();
            let (fam, _) = ctx.family(family, n)?;
            let x = point_in(at, n)?;
            let t = target.as_ref().map(|path| ctx.subspace(path, "target", n)).transpose()?;
            let pts = sample_points(n, samples.samples, samples.seed);
            let rep = completeness_check(&lp.chart, &fam.functions(), &x, t.as_ref(), &pts)?;
            let r = ctx.report;
            r.result("expected", rep.expected);
            r.result("count", rep.count);
            r.result("pencil_rank", rep.pencil_rank);
            r.result("rank_at_point", rep.rank_at_point);
            r.result("sample_ranks", &rep.sample_ranks);
            r.check(Check::holds("count equals dim − rk/2", rep.count == rep.expected));
            let independent = rep.rank_at_point == rep.expected || rep.sample_ranks.contains(&rep.expected);
            r.check(Check::holds("functionally independent", independent));
            if let Some(m) = rep.target_match {
                r.check(Check::holds("dG(x) equals the target subspace", m));
            }
        }
        Command::Integrals { pencil, family, samples } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            let n = lp.chart.dim();
            let (fam, hs) = ctx.family(family, n)?;
            let pts = sample_points(n, samples.samples, samples.seed);
            let rep = standard_integrals_verify(&lp.chart, &fam, &hs, &pts);
            let r = ctx.report;
            r.result("dependent_hamiltonians", &rep.dependent_hamiltonians);
            r.result("hamiltonians", hs.iter().map(|(l, h)| json!({ "lambda": lambda_string(l), "polynomial": h.to_string() })).collect::<Vec<_>>());
            for item in &rep.items {
                r.check(Check::holds(item.name.clone(), item.passed).detail(item.detail.clone()));
            }
        }
        Command::Eigdiff { pencil, at, step, tolerance } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            let n = lp.chart.dim();
            let x: Vec<f64> = point_in(at, n)?.iter().map(rational_to_f64).collect();
            if !(*step > 0.0 && *tolerance > 0.0) {
                return usage("--step and --tolerance must be positive");
            }
            let rep = eigenvalue_differential_check(&lp.chart, &x, *step, *tolerance);
            let steps = [10.0 * step, 5.0 * step, 2.5 * step];
            let conv = eigenvalue_differential_convergence(&lp.chart, &x, &steps);
            let r = ctx.report;
            r.result("point", &x);
            r.result("step", step);
            r.result("convergence_steps", steps);
            let mut values = Vec::new();
            for (k, e) in rep.entries.iter().enumerate() {
                values.push([e.value.re, e.value.im]);
                let mut c = Check::bounded(format!("eigenvalue {}: (A − μB)·dμ", k + 1), e.residual, *tolerance);
                c.status = e.status.into();
                if !e.note.is_empty() {
                    c.detail = Some(e.note.clone());
                }
                r.check(c);
            }
            r.result("eigenvalues", values);
            if rep.entries.is_empty() {
                r.check(Check::new("eigenvalues found", rep.status.into()));
            }
            let orders: Vec<Option<f64>> = conv.orders.clone();
            r.result("observed_orders", &orders);
            for (k, o) in orders.iter().enumerate() {
                if let Some(o) = o {
                    r.check(
                        Check::holds(format!("eigenvalue {}: observed order in [1.7, 2.3]", k + 1), (1.7..=2.3).contains(o))
                            .detail(format!("order {o:.3}")),
                    );
                }
            }
            if conv.status == bipencil::charts::eigdiff::Status::Inconclusive {
                r.check(Check::new("convergence study", Status::Inconclusive).detail("eigenvalue count varies with the step"));
            }
        }
        Command::Flow { pencil, family, at, horizon, step, tolerance, trajectory } => {
            let lp = ctx.pencil(&pencil.pencil, "pencil")?;
            let n = lp.chart.dim();
            let (fam, hs) = ctx.family(family, n)?;
            if hs.is_empty() {
                return usage("the family document lists no hamiltonians");
            }
            let x0: Vec<f64> = point_in(at, n)?.iter().map(rational_to_f64).collect();
            let field = bi_hamiltonian_field(&lp.chart, &hs)?;
            let traj = integrate(&field, &x0, *horizon, *step)?;
            let rep = drift_report(&traj, &fam, Some((&field, &hs)));
            let r = ctx.report;
            r.result("steps", traj.states.len() - 1);
            r.result("final_time", traj.times.last().copied().unwrap_or(0.0));
            r.result("final_state", traj.last());
            r.result("max_drift", rep.max_drift());
            let mut c = Check::holds("trajectory reaches the horizon", traj.is_complete());
            if let Some(e) = &traj.error {
                c = c.detail(e.to_string());
            }
            r.check(c);
            for ((f, _), d) in fam.members.iter().zip(&rep.drifts) {
                r.check(Check::bounded(format!("drift of {f}"), *d, *tolerance));
            }
            for ((l1, l2), d) in &rep.inconsistency {
                r.check(Check::bounded(format!("fields of H at {l1} and {l2} agree"), *d, *tolerance));
            }
            if let Some(path) = trajectory {
                let file = std::fs::File::create(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                traj.write_json_lines(&fam.functions(), std::io::BufWriter::new(file))
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            }
        }
        Command::Corpus { export, export_family, dir } => {
            if let Some(name) = export {
                let entry = corpus::find(name).ok_or_else(|| Failure::Usage(format!("no corpus entry \"{name}\"")))?;
                return Ok(Some(corpus_document(&entry).to_json()));
            }
            if let Some(name) = export_family {
                let (dim, fam, hs) =
                    corpus_family(name).ok_or_else(|| Failure::Usage(format!("no bundled family \"{name}\"")))?;
                return Ok(Some(FamilyDocument::from_family(dim, &fam, &hs).to_json()));
            }
            corpus_manifest(ctx.report, dir.as_deref())?;
        }
    }
    Ok(None)
}

/// File name for a corpus entry: anything outside `[A-Za-z0-9-]` becomes `_`.
pub fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

fn corpus_manifest(r: &mut ReportDocument, dir: Option<&Path>) -> Result<(), Failure> {
    if let Some(d) = dir {
        std::fs::create_dir_all(d).map_err(|e| Failure::Usage(format!("{}: {e}", d.display())))?;
    }
    let mut manifest = Vec::new();
    for mut entry in corpus::corpus() {
        let doc = corpus_document(&entry);
        let text = doc.to_json();
        let round_trip = PencilDocument::parse(&text).map(|again| again == doc && again.to_json() == text);
        r.check(Check::holds(format!("{}: document round trip", entry.name), round_trip == Ok(true)));
        let checks = entry.chart.verify();
        let poisson = checks.jacobi_a.holds && checks.jacobi_b.holds && checks.compatibility.holds;
        let outcome = if poisson { "Poisson pencil" } else { "not a Poisson pencil" };
        r.check(
            Check::holds(format!("{}: check outcome matches the manifest", entry.name), poisson == entry.valid)
                .detail(outcome),
        );
        let file = format!("{}.json", file_stem(entry.name));
        if let Some(d) = dir {
            write_file(&d.join(&file), &text)?;
        }
        manifest.push(json!({
            "name": entry.name,
            "kind": match entry.kind { EntryKind::Constant => "constant", EntryKind::Chart => "chart" },
            "dimension": entry.chart.dim(),
            "valid": entry.valid,
            "notes": entry.notes,
            "file": file,
        }));
    }
    for name in FAMILY_NAMES {
        let (dim, fam, hs) = corpus_family(name).expect("bundled family");
        if let Some(d) = dir {
            let text = FamilyDocument::from_family(dim, &fam, &hs).to_json();
            write_file(&d.join(format!("family-{name}.json")), &text)?;
        }
    }
    r.result("count", manifest.len());
    r.result("entries", manifest);
    r.result("families", FAMILY_NAMES);
    Ok(())
}
