//! Command-line interface: argument grammar, validated run configuration,
//! dispatch, and report rendering.
//!
//! JSON is the canonical output; csv and text are renderings of the same
//! data. Reports are pure functions of the resolved configuration, so
//! identical invocations produce byte-identical output. Exit codes: 0 for
//! success or a passing verdict, 1 when a requested check or verdict fails,
//! 2 for usage, parse, and budget errors.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::algebra::{
    basis_digest, cache_file_name, read_table_cache, write_table_cache, Algebra, AlgebraError,
    AlgebraFamily, AlgebraId, CacheError, MultiplicationTable,
};
use crate::budget::{Budget, DEFAULT_TUPLE_BUDGET};
use crate::covers::{
    parse_subset_spec, synthesize_idempotent, verify_cover, CoverError, Synthesis,
};
use crate::exactla::{CoefficientRing, RingError};
use crate::mv::{build_mv, check_acyclic, export_complex, simplex_decomposition_check, MvError};
use crate::torlab::{
    induced_tor_map, tor_report, verify_theorem, TheoremId, TorError, TorMethod,
};

/// Environment variable naming the default cache directory for `multable`.
pub const CACHE_DIR_ENV: &str = "DIAGHOM_CACHE_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Mv(#[from] MvError),
    #[error(transparent)]
    Tor(#[from] TorError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("writing report: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser, PartialEq)]
#[command(
    name = "diaghom",
    version,
    about = "Exact homology toolkit for diagram algebras",
    long_about = "Builds partition-style diagram algebras, audits their idempotent ideal \
                  covers and Mayer-Vietoris complexes, and computes Tor groups and induced \
                  comparison maps exactly over Z, Q, F_p and Z/m."
)]
pub struct Cli {
    /// Output format; json is canonical, csv and text render the same data.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Worker threads for the parallel sections (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Ceiling on basis tuples per chain degree.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, PartialEq)]
pub enum Command {
    /// Print the dimension of an algebra.
    Dim(AlgebraTarget),
    /// Build the multiplication table and write it to the cache directory.
    Multable {
        #[command(flatten)]
        target: AlgebraTarget,
        /// Cache directory (default: $DIAGHOM_CACHE_DIR, else the working directory).
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Audits of the canonical ideal cover.
    #[command(subcommand)]
    Cover(CoverCommand),
    /// Classify one intersection of cover ideals and synthesize its idempotent.
    Idem {
        #[command(flatten)]
        target: AlgebraTarget,
        /// Subset of cover ideals, e.g. "1,3" (annular arcs) or "2,1-3" (partition).
        #[arg(long)]
        subset: String,
        #[command(flatten)]
        coeffs: CoeffArgs,
    },
    /// The Mayer-Vietoris complex of the canonical cover.
    #[command(subcommand)]
    Mv(MvCommand),
    /// Tor groups of the trivial module over an algebra.
    Tor {
        #[command(flatten)]
        target: AlgebraTarget,
        #[command(flatten)]
        ring: RingArgs,
        /// Computation route.
        #[arg(long, value_enum, default_value_t = MethodArg::Bar)]
        method: MethodArg,
    },
    /// Classify the maps the quotient onto the group algebra induces on Tor.
    Compare {
        #[command(flatten)]
        target: AlgebraTarget,
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Run every check of one comparison theorem and emit a verdict.
    Verify {
        /// Theorem name: partition, jones, or jones-sroka.
        theorem: String,
        /// Strand count.
        n: usize,
        #[command(flatten)]
        ring: RingArgs,
    },
}

#[derive(Debug, Subcommand, PartialEq)]
pub enum CoverCommand {
    /// Check that the cover spans the lower ideal and classify every subset
    /// intersection up to the height.
    Verify {
        #[command(flatten)]
        target: AlgebraTarget,
        /// Intersection height to audit (default: the designed cover height).
        #[arg(long)]
        height: Option<u8>,
        #[command(flatten)]
        coeffs: CoeffArgs,
    },
}

#[derive(Debug, Subcommand, PartialEq)]
pub enum MvCommand {
    /// Build the complex, print its shape, optionally export the matrices.
    Build {
        #[command(flatten)]
        target: AlgebraTarget,
        /// Directory to write manifest.json and the triplet matrices into.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integral acyclicity plus the per-diagram simplex decomposition.
    Check {
        #[command(flatten)]
        target: AlgebraTarget,
    },
}

#[derive(Debug, Args, PartialEq)]
pub struct AlgebraTarget {
    /// Algebra family.
    #[arg(value_enum)]
    pub family: FamilyArg,
    /// Strand or letter count.
    pub n: usize,
}

/// Required coefficient data for tor, compare and verify.
#[derive(Debug, Args, PartialEq)]
pub struct RingArgs {
    /// Coefficient ring: Z, Q, Fp:<prime> (alias F<prime>), or Zmod:<m>.
    #[arg(long)]
    pub ring: String,
    /// Loop parameter, an integer literal reduced into the ring.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: i64,
    /// Highest homological degree to compute.
    #[arg(long)]
    pub qmax: u8,
}

/// Optional coefficient data for cover audits and idempotent synthesis.
#[derive(Debug, Args, PartialEq)]
pub struct CoeffArgs {
    /// Coefficient ring: Z, Q, Fp:<prime> (alias F<prime>), or Zmod:<m>.
    #[arg(long, default_value = "Z")]
    pub ring: String,
    /// Loop parameter, an integer literal reduced into the ring.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub delta: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Partition,
    Brauer,
    Tl,
    Jones,
    SymmetricGroup,
    CyclicGroup,
}

impl From<FamilyArg> for AlgebraFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Partition => AlgebraFamily::Partition,
            FamilyArg::Brauer => AlgebraFamily::Brauer,
            FamilyArg::Tl => AlgebraFamily::TemperleyLieb,
            FamilyArg::Jones => AlgebraFamily::JonesAnnular,
            FamilyArg::SymmetricGroup => AlgebraFamily::GroupAlgebraSymmetric,
            FamilyArg::CyclicGroup => AlgebraFamily::GroupAlgebraCyclic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Bar,
    Minres,
}

impl From<MethodArg> for TorMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Bar => TorMethod::Bar,
            MethodArg::Minres => TorMethod::MinimalResolution,
        }
    }
}

/// A fully validated invocation: ring specs parsed, defaults resolved,
/// subset selectors canonicalized. `to_args` prints a command line that
/// parses back to an equal configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub format: OutputFormat,
    pub threads: Option<usize>,
    pub budget: u64,
    pub action: Action,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Action {
    Dim {
        family: AlgebraFamily,
        n: usize,
    },
    Multable {
        family: AlgebraFamily,
        n: usize,
        cache: Option<PathBuf>,
    },
    CoverVerify {
        family: AlgebraFamily,
        n: usize,
        height: Option<u8>,
        ring: CoefficientRing,
    },
    Idem {
        family: AlgebraFamily,
        n: usize,
        subset: String,
        ring: CoefficientRing,
    },
    MvBuild {
        family: AlgebraFamily,
        n: usize,
        out: Option<PathBuf>,
    },
    MvCheck {
        family: AlgebraFamily,
        n: usize,
    },
    Tor {
        family: AlgebraFamily,
        n: usize,
        ring: CoefficientRing,
        q_max: u8,
        method: TorMethod,
    },
    Compare {
        family: AlgebraFamily,
        n: usize,
        ring: CoefficientRing,
        q_max: u8,
    },
    Verify {
        theorem: TheoremId,
        n: usize,
        ring: CoefficientRing,
        q_max: u8,
    },
}

/// Parses a ring spec, accepting the shorthand `F<p>` for `Fp:<p>`.
pub fn parse_ring(spec: &str, delta: i64) -> Result<CoefficientRing, RingError> {
    let shorthand = spec
        .strip_prefix('F')
        .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()));
    let kind = match shorthand {
        Some(p) => CoefficientRing::parse_kind(&format!("Fp:{p}"))?,
        None => CoefficientRing::parse_kind(spec)?,
    };
    CoefficientRing::new(kind, delta)
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let action = match cli.command {
            Command::Dim(t) => Action::Dim {
                family: t.family.into(),
                n: t.n,
            },
            Command::Multable { target, cache } => Action::Multable {
                family: target.family.into(),
                n: target.n,
                cache,
            },
            Command::Cover(CoverCommand::Verify {
                target,
                height,
                coeffs,
            }) => Action::CoverVerify {
                family: target.family.into(),
                n: target.n,
                height,
                ring: parse_ring(&coeffs.ring, coeffs.delta)?,
            },
            Command::Idem {
                target,
                subset,
                coeffs,
            } => {
                let family: AlgebraFamily = target.family.into();
                let diagram = family.diagram_family().ok_or_else(|| {
                    CoverError::UnsupportedFamily(AlgebraId::new(family, target.n))
                })?;
                let selector = parse_subset_spec(diagram, target.n, &subset)?;
                Action::Idem {
                    family,
                    n: target.n,
                    subset: selector.to_string(),
                    ring: parse_ring(&coeffs.ring, coeffs.delta)?,
                }
            }
            Command::Mv(MvCommand::Build { target, out }) => Action::MvBuild {
                family: target.family.into(),
                n: target.n,
                out,
            },
            Command::Mv(MvCommand::Check { target }) => Action::MvCheck {
                family: target.family.into(),
                n: target.n,
            },
            Command::Tor {
                target,
                ring,
                method,
            } => Action::Tor {
                family: target.family.into(),
                n: target.n,
                ring: parse_ring(&ring.ring, ring.delta)?,
                q_max: ring.qmax,
                method: method.into(),
            },
            Command::Compare { target, ring } => Action::Compare {
                family: target.family.into(),
                n: target.n,
                ring: parse_ring(&ring.ring, ring.delta)?,
                q_max: ring.qmax,
            },
            Command::Verify { theorem, n, ring } => Action::Verify {
                theorem: theorem.parse::<TheoremId>()?,
                n,
                ring: parse_ring(&ring.ring, ring.delta)?,
                q_max: ring.qmax,
            },
        };
        Ok(RunConfig {
            format: cli.format,
            threads: cli.threads,
            budget: cli.budget.unwrap_or(DEFAULT_TUPLE_BUDGET),
            action,
        })
    }

    /// The canonical command line for this configuration.
    pub fn to_args(&self) -> Vec<String> {
        let mut v: Vec<String> = vec!["diaghom".into()];
        let push_ring = |v: &mut Vec<String>, ring: &CoefficientRing| {
            v.push("--ring".into());
            v.push(ring.kind.to_string());
            v.push("--delta".into());
            v.push(ring.delta.to_string());
        };
        match &self.action {
            Action::Dim { family, n } => {
                v.extend(["dim".into(), family.to_string(), n.to_string()]);
            }
            Action::Multable { family, n, cache } => {
                v.extend(["multable".into(), family.to_string(), n.to_string()]);
                if let Some(dir) = cache {
                    v.push("--cache".into());
                    v.push(dir.display().to_string());
                }
            }
            Action::CoverVerify {
                family,
                n,
                height,
                ring,
            } => {
                v.extend([
                    "cover".into(),
                    "verify".into(),
                    family.to_string(),
                    n.to_string(),
                ]);
                if let Some(h) = height {
                    v.push("--height".into());
                    v.push(h.to_string());
                }
                push_ring(&mut v, ring);
            }
            Action::Idem {
                family,
                n,
                subset,
                ring,
            } => {
                v.extend(["idem".into(), family.to_string(), n.to_string()]);
                v.push("--subset".into());
                v.push(subset.clone());
                push_ring(&mut v, ring);
            }
            Action::MvBuild { family, n, out } => {
                v.extend([
                    "mv".into(),
                    "build".into(),
                    family.to_string(),
                    n.to_string(),
                ]);
                if let Some(dir) = out {
                    v.push("--out".into());
                    v.push(dir.display().to_string());
                }
            }
            Action::MvCheck { family, n } => {
                v.extend([
                    "mv".into(),
                    "check".into(),
                    family.to_string(),
                    n.to_string(),
                ]);
            }
            Action::Tor {
                family,
                n,
                ring,
                q_max,
                method,
            } => {
                v.extend(["tor".into(), family.to_string(), n.to_string()]);
                push_ring(&mut v, ring);
                v.push("--qmax".into());
                v.push(q_max.to_string());
                v.push("--method".into());
                v.push(
                    match method {
                        TorMethod::Bar => "bar",
                        TorMethod::MinimalResolution => "minres",
                    }
                    .into(),
                );
            }
            Action::Compare {
                family,
                n,
                ring,
                q_max,
            } => {
                v.extend(["compare".into(), family.to_string(), n.to_string()]);
                push_ring(&mut v, ring);
                v.push("--qmax".into());
                v.push(q_max.to_string());
            }
            Action::Verify {
                theorem,
                n,
                ring,
                q_max,
            } => {
                v.extend(["verify".into(), theorem.to_string(), n.to_string()]);
                push_ring(&mut v, ring);
                v.push("--qmax".into());
                v.push(q_max.to_string());
            }
        }
        v.push("--format".into());
        v.push(
            match self.format {
                OutputFormat::Json => "json",
                OutputFormat::Csv => "csv",
                OutputFormat::Text => "text",
            }
            .into(),
        );
        if let Some(t) = self.threads {
            v.push("--threads".into());
            v.push(t.to_string());
        }
        v.push("--budget".into());
        v.push(self.budget.to_string());
        v
    }
}

/// One rendered report plus the exit code.
pub struct Output {
    pub json: serde_json::Value,
    pub csv: String,
    pub text: String,
    pub exit: i32,
}

impl Output {
    fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.json).expect("report serializes");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.csv.clone(),
            OutputFormat::Text => self.text.clone(),
        }
    }
}

fn csv_row(fields: &[String]) -> String {
    let mut row = String::new();
    for (i, f) in fields.iter().enumerate() {
        if i > 0 {
            row.push(',');
        }
        if f.contains(',') || f.contains('"') || f.contains('\n') {
            row.push('"');
            row.push_str(&f.replace('"', "\"\""));
            row.push('"');
        } else {
            row.push_str(f);
        }
    }
    row.push('\n');
    row
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = csv_row(&header.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    for r in rows {
        out.push_str(&csv_row(r));
    }
    out
}

/// Parses, validates and executes a full command line, printing the report
/// to stdout and errors to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let config = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Some(t) = config.threads {
        // The global pool can already exist when run is called twice in one
        // process; the second configuration attempt is a no-op then.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match dispatch(&config) {
        Ok(out) => {
            print!("{}", out.render(config.format));
            out.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Executes one validated configuration and assembles its report.
pub fn dispatch(config: &RunConfig) -> Result<Output, CliError> {
    let budget = Budget::new(config.budget);
    match &config.action {
        Action::Dim { family, n } => {
            let alg = Algebra::new(AlgebraId::new(*family, *n))?;
            let dim = alg.dim();
            Ok(Output {
                json: json!({"family": family.to_string(), "n": n, "dim": dim}),
                csv: csv_table(
                    &["family", "n", "dim"],
                    &[vec![family.to_string(), n.to_string(), dim.to_string()]],
                ),
                text: format!("{dim}\n"),
                exit: 0,
            })
        }
        Action::Multable { family, n, cache } => {
            let alg = Algebra::new(AlgebraId::new(*family, *n))?;
            let table = MultiplicationTable::build(&alg);
            let dir = cache
                .clone()
                .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&dir)?;
            let path = dir.join(cache_file_name(&alg));
            write_table_cache(&path, &alg, &table)?;
            // Read back through the validating loader so a bad write cannot
            // leave a poisoned cache behind.
            let _ = read_table_cache(&path, &alg)?;
            let digest: String = basis_digest(&alg)?
                .iter()
                .map(|b| format!("{b:02x}"))
                .collect();
            let dim = alg.dim();
            let shown = path.display().to_string();
            Ok(Output {
                json: json!({
                    "algebra": alg.id().to_string(),
                    "dim": dim,
                    "entries": dim * dim,
                    "path": shown,
                    "basis_digest": digest,
                }),
                csv: csv_table(
                    &["family", "n", "dim", "path", "basis_digest"],
                    &[vec![
                        family.to_string(),
                        n.to_string(),
                        dim.to_string(),
                        shown.clone(),
                        digest.clone(),
                    ]],
                ),
                text: format!("wrote {shown} ({dim} x {dim}, digest {digest})\n"),
                exit: 0,
            })
        }
        Action::CoverVerify {
            family,
            n,
            height,
            ring,
        } => {
            let alg = Algebra::new(AlgebraId::new(*family, *n))?;
            let report = verify_cover(&alg, ring, *height)?;
            let ok = report.all_ok();
            let (zero, certified, impossible) = report.counts();
            let rows: Vec<Vec<String>> = report
                .subsets
                .iter()
                .map(|s| {
                    vec![
                        s.selector.to_string(),
                        match s.outcome {
                            crate::covers::SubsetOutcome::Zero => "zero".to_string(),
                            crate::covers::SubsetOutcome::Certified => "certified".to_string(),
                            crate::covers::SubsetOutcome::Impossible { .. } => {
                                "impossible".to_string()
                            }
                        },
                    ]
                })
                .collect();
            let mut text = format!(
                "cover of {}: width {}, checked height {}, union {}\n",
                alg.id(),
                report.descriptor.width,
                report.checked_height,
                if report.union_matches_target {
                    "matches the lower ideal"
                } else {
                    "MISMATCH"
                },
            );
            text.push_str(&format!(
                "subsets: {zero} zero, {certified} certified, {impossible} impossible\n",
            ));
            text.push_str(if ok { "result: pass\n" } else { "result: fail\n" });
            Ok(Output {
                json: report.to_json(&alg),
                csv: csv_table(&["subset", "outcome"], &rows),
                text,
                exit: if ok { 0 } else { 1 },
            })
        }
        Action::Idem {
            family,
            n,
            subset,
            ring,
        } => {
            let alg = Algebra::new(AlgebraId::new(*family, *n))?;
            let diagram = family
                .diagram_family()
                .ok_or_else(|| CoverError::UnsupportedFamily(alg.id()))?;
            let selector = parse_subset_spec(diagram, *n, subset)?;
            let synthesis = synthesize_idempotent(&alg, &selector, ring)?;
            let (outcome, exit, mut detail) = match &synthesis {
                Synthesis::Zero => ("zero", 0, json!({})),
                Synthesis::Certified(cert) => {
                    ("certified", 0, json!({"certificate": cert.to_json(&alg)}))
                }
                Synthesis::Impossible { reason } => ("impossible", 1, json!({"reason": reason})),
            };
            detail["algebra"] = json!(alg.id().to_string());
            detail["subset"] = json!(selector.to_string());
            detail["outcome"] = json!(outcome);
            detail["ring"] = json!(ring.kind.to_string());
            detail["delta"] = json!(ring.delta);
            let mut text = format!("subset {selector}: {outcome}\n");
            if let Synthesis::Impossible { reason } = &synthesis {
                text.push_str(&format!("reason: {reason}\n"));
            }
            Ok(Output {
                json: detail,
                csv: csv_table(
                    &["subset", "outcome"],
                    &[vec![selector.to_string(), outcome.to_string()]],
                ),
                text,
                exit,
            })
        }
        Action::MvBuild { family, n, out } => {
            let alg = Algebra::new(AlgebraId::new(*family, *n))?;
            let cx = build_mv(&alg, None, &budget)?;
            let mut rows: Vec<Vec<String>> = vec![vec![
                "quotient".to_string(),
                cx.dims()[0].to_string(),
            ]];
            let mut text = format!(
                "complex of {}: width {}, quotient dim {}\n",
                alg.id(),
                cx.width(),
                cx.dims()[0],
            );
            for p in 0..=cx.built_to() {
                let dim = cx.dims()[p as usize + 1];
                rows.push(vec![p.to_string(), dim.to_string()]);
                text.push_str(&format!("degree {p}: dim {dim}\n"));
            }
            let json = if let Some(dir) = out {
                let manifest = export_complex(&alg, &cx, dir)?;
                text.push_str(&format!("exported to {}\n", dir.display()));
                serde_json::to_value(&manifest).expect("manifest serializes")
            } else {
                json!({
                    "algebra": alg.id().to_string(),
                    "width": cx.width(),
                    "dims": cx.dims(),
                })
            };
            Ok(Output {
                json,
                csv: csv_table(&["degree", "dim"], &rows),
                text,
                exit: 0,
            })
        }
        Action::MvCheck { family, n } => {
            let alg = Algebra::new(AlgebraId::new(*family, *n))?;
            let cx = build_mv(&alg, None, &budget)?;
            let (acyclic_ok, acyclic) = match check_acyclic(&cx) {
                Ok(rep) => (true, serde_json::to_value(&rep).expect("report serializes")),
                Err(MvError::NotAcyclic { degree, group }) => {
                    (false, json!({"degree": degree, "group": group}))
                }
                Err(e) => return Err(e.into()),
            };
            let (simplex_ok, simplex) = match simplex_decomposition_check(&alg, &cx) {
                Ok(rep) => (true, serde_json::to_value(&rep).expect("report serializes")),
                Err(MvError::BadDecomposition(detail)) => (false, json!({"detail": detail})),
                Err(e) => return Err(e.into()),
            };
            let ok = acyclic_ok && simplex_ok;
            let status = |b: bool| if b { "pass" } else { "fail" };
            Ok(Output {
                json: json!({
                    "algebra": alg.id().to_string(),
                    "acyclic": {"status": status(acyclic_ok), "data": acyclic},
                    "simplex": {"status": status(simplex_ok), "data": simplex},
                    "overall": status(ok),
                }),
                csv: csv_table(
                    &["check", "status"],
                    &[
                        vec!["acyclic".to_string(), status(acyclic_ok).to_string()],
                        vec!["simplex".to_string(), status(simplex_ok).to_string()],
                    ],
                ),
                text: format!(
                    "acyclic: {}\nsimplex: {}\nresult: {}\n",
                    status(acyclic_ok),
                    status(simplex_ok),
                    status(ok),
                ),
                exit: if ok { 0 } else { 1 },
            })
        }
        Action::Tor {
            family,
            n,
            ring,
            q_max,
            method,
        } => {
            let alg = Algebra::new(AlgebraId::new(*family, *n))?;
            let report = tor_report(&alg, ring, *q_max, *method, &budget)?;
            let rows: Vec<Vec<String>> = report
                .groups
                .iter()
                .enumerate()
                .map(|(q, g)| {
                    vec![
                        q.to_string(),
                        g.to_string(),
                        g.free_rank.to_string(),
                        g.torsion
                            .iter()
                            .map(|d| d.to_string())
                            .collect::<Vec<_>>()
                            .join(";"),
                    ]
                })
                .collect();
            let mut text = format!(
                "{} over {} delta {} by {}\n",
                report.algebra, report.ring, report.delta, report.method,
            );
            for (q, g) in report.groups.iter().enumerate() {
                text.push_str(&format!("q={q}: {g}\n"));
            }
            Ok(Output {
                json: serde_json::to_value(&report).expect("report serializes"),
                csv: csv_table(&["q", "group", "free_rank", "torsion"], &rows),
                text,
                exit: 0,
            })
        }
        Action::Compare {
            family,
            n,
            ring,
            q_max,
        } => {
            let alg = Algebra::new(AlgebraId::new(*family, *n))?;
            let report = induced_tor_map(&alg, ring, *q_max, &budget)?;
            let route_token = |d: &crate::torlab::InducedDegree| {
                serde_json::to_value(d.route)
                    .expect("route serializes")
                    .as_str()
                    .expect("route is a string")
                    .to_string()
            };
            let rows: Vec<Vec<String>> = report
                .degrees
                .iter()
                .map(|d| {
                    vec![
                        d.q.to_string(),
                        d.source_group.to_string(),
                        d.target_group.to_string(),
                        d.classification.to_string(),
                        route_token(d),
                    ]
                })
                .collect();
            let mut text = format!(
                "{} -> {} over {} delta {}\n",
                report.source, report.target, report.ring, report.delta,
            );
            match (report.claimed.iso_through, report.claimed.surjective_at) {
                (Some(t), Some(s)) => text.push_str(&format!(
                    "claimed: isomorphism through q={t}, surjection at q={s}\n"
                )),
                (Some(t), None) => {
                    text.push_str(&format!("claimed: isomorphism through q={t}\n"))
                }
                (None, Some(s)) => text.push_str(&format!("claimed: surjection at q={s}\n")),
                (None, None) => text.push_str("claimed: nothing in this range\n"),
            }
            for d in &report.degrees {
                text.push_str(&format!(
                    "q={}: {} -> {} {} [{}]\n",
                    d.q,
                    d.source_group,
                    d.target_group,
                    d.classification,
                    route_token(d),
                ));
            }
            text.push_str(if report.verdict {
                "verdict: pass\n"
            } else {
                "verdict: fail\n"
            });
            let exit = if report.verdict { 0 } else { 1 };
            Ok(Output {
                json: serde_json::to_value(&report).expect("report serializes"),
                csv: csv_table(
                    &["q", "source", "target", "classification", "route"],
                    &rows,
                ),
                text,
                exit,
            })
        }
        Action::Verify {
            theorem,
            n,
            ring,
            q_max,
        } => {
            let verdict = verify_theorem(*theorem, *n, ring, *q_max, &budget)?;
            let rows: Vec<Vec<String>> = verdict
                .checks
                .iter()
                .map(|c| vec![c.name.clone(), c.status.clone()])
                .collect();
            let mut text = format!("theorem {theorem}, n = {n}\n");
            for c in &verdict.checks {
                text.push_str(&format!("{}: {}\n", c.name, c.status));
            }
            text.push_str(&format!("overall: {}\n", verdict.overall));
            let exit = if verdict.passed() { 0 } else { 1 };
            Ok(Output {
                json: serde_json::to_value(&verdict).expect("verdict serializes"),
                csv: csv_table(&["check", "status"], &rows),
                text,
                exit,
            })
        }
    }
}
