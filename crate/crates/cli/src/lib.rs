//! Batch front end for extlift-core.
//!
//! Every command produces one JSON document (or a text table for
//! `verify-all --format text`) and an exit code: 0 for a computed positive
//! verdict, 1 for a computed negative verdict, 2 for an input error and 3
//! when an enumeration bound is exceeded.

pub mod corpus;
pub mod input;
pub mod report;
pub mod verify;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use extlift_core::abelian::{abelian_structure, ActionMatrix};
use extlift_core::cohomology::cohomology_group;
use extlift_core::group::normal_subgroups;
use extlift_core::reduction::Reducer;
use extlift_core::splitting::{is_split_extension, split_kernels, splitting_report};
use extlift_core::wells::{extension_with_bounds, Bounds, ExtensionData};
use extlift_core::{Error, FiniteGroup, GroupAutomorphism, Subgroup};

use report::*;
use verify::{verify_extension, VerifyOptions, VerifyOutcome};

pub const DEFAULT_SEED: u64 = 20240229;

/// Environment variable overriding the automorphism enumeration bound.
pub const MAX_ORDER_ENV: &str = "EXTLIFT_MAX_ORDER";

#[derive(Debug, Parser)]
#[command(
    name = "extlift",
    version,
    about = "Automorphism extension and lifting in abelian group extensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct ExtArgs {
    /// `catalog:<expr>` or a group JSON file.
    #[arg(long)]
    pub group: String,
    /// `center`, `derived`, `trivial`, `whole`, `sylow:p`, `members:a,b,..`,
    /// inline `{"members": [..]}` or a subgroup JSON file.
    #[arg(long)]
    pub subgroup: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compatible pairs, obstructions and exactness for an extension.
    Analyze(ExtArgs),
    /// Order of the second cohomology group.
    H2 {
        /// The acting group `H`, or `G` when `--subgroup` is given.
        #[arg(long)]
        group: String,
        /// Coefficient group as a catalog expression (must be abelian).
        #[arg(long)]
        coeffs: Option<String>,
        /// `trivial`, or `invert-outside:<subgroup>` for an index-2 kernel.
        #[arg(long, default_value = "trivial")]
        action: String,
        /// Use `H² (G/N, N)` of the extension instead.
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// Extend an automorphism of `N` to `G`, trivially on `G/N`.
    Extend {
        #[command(flatten)]
        ext: ExtArgs,
        /// Automorphism of `N`, in terms of the `G` indices of its members.
        #[arg(long)]
        theta: String,
    },
    /// Lift an automorphism of `G/N` to `G`, centralizing `N`.
    Lift {
        #[command(flatten)]
        ext: ExtArgs,
        /// Automorphism of `H = G/N`.
        #[arg(long)]
        phi: String,
    },
    /// Realize a compatible pair by an automorphism of `G`.
    LiftPair {
        #[command(flatten)]
        ext: ExtArgs,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        phi: String,
    },
    /// Sylow reduction of a lift (`--phi`), extension (`--theta`) or pair.
    Sylow {
        #[command(flatten)]
        ext: ExtArgs,
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        phi: Option<String>,
    },
    /// Splitting of the extension and of the automorphism sequences.
    Split(ExtArgs),
    /// All regression checks on one extension.
    Verify(ExtArgs),
    /// All regression checks on every abelian normal subgroup of every
    /// group in a corpus directory.
    VerifyAll {
        /// Directory of group JSON files.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// List catalog families, print one group as JSON, or write the corpus.
    Catalog {
        /// A catalog expression such as `dihedral(8)` or `cyclic(2)^3`.
        expr: Option<String>,
        /// Write the shipped corpus into this directory.
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Print the report JSON schema.
    Schema,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// A finished command: exit code and the bytes to emit.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
}

impl Outcome {
    fn json<T: Serialize>(code: i32, value: &T) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
        text.push('\n');
        Self { code, text }
    }

    fn error(command: &str, e: &Error) -> Self {
        let code = if e.is_bound() { 3 } else { 2 };
        Self::json(
            code,
            &ErrorReport {
                schema_version: SCHEMA_VERSION,
                command: command.to_string(),
                error: ErrorJson {
                    kind: error_kind(e),
                    message: e.to_string(),
                },
            },
        )
    }
}

/// Enumeration bounds, with the group-order bound taken from
/// `EXTLIFT_MAX_ORDER` when set.
pub fn bounds_from_env() -> Result<Bounds, Error> {
    let mut b = Bounds::default();
    if let Ok(v) = std::env::var(MAX_ORDER_ENV) {
        b.aut_order = v
            .trim()
            .parse()
            .ok()
            .filter(|&n: &usize| n > 0)
            .ok_or_else(|| Error::invalid(format!("{MAX_ORDER_ENV} must be a positive integer")))?;
    }
    Ok(b)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze(_) => "analyze",
        Command::H2 { .. } => "h2",
        Command::Extend { .. } => "extend",
        Command::Lift { .. } => "lift",
        Command::LiftPair { .. } => "lift-pair",
        Command::Sylow { .. } => "sylow",
        Command::Split(_) => "split",
        Command::Verify(_) => "verify",
        Command::VerifyAll { .. } => "verify-all",
        Command::Catalog { .. } => "catalog",
        Command::Schema => "schema",
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let name = command_name(&cli.command);
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) => Outcome::error(name, &e),
    }
}

/// Parses `args` (including the program name) and runs them; clap usage
/// errors map to exit code 2.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            Outcome {
                code,
                text: e.to_string(),
            }
        }
    }
}

fn load_extension(args: &ExtArgs) -> Result<ExtensionData, Error> {
    let g = input::load_group(&args.group)?;
    let n = input::resolve_subgroup(&g, &args.subgroup)?;
    extension_with_bounds(&g, &n, bounds_from_env()?)
}

fn theta_of(ext: &ExtensionData, spec: &str) -> Result<GroupAutomorphism, Error> {
    let n = ext.n().clone();
    input::resolve_automorphism(ext.coeffs().local_group(), spec, &|x| n.local_index(x))
}

fn phi_of(ext: &ExtensionData, spec: &str) -> Result<GroupAutomorphism, Error> {
    let order = ext.h().order();
    input::resolve_automorphism(ext.h(), spec, &|x| (x < order).then_some(x))
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Analyze(args) => analyze(&load_extension(args)?),
        Command::H2 {
            group,
            coeffs,
            action,
            subgroup,
        } => h2(group, coeffs.as_deref(), action, subgroup.as_deref()),
        Command::Extend { ext, theta } => {
            let ext = load_extension(ext)?;
            let theta = theta_of(&ext, theta)?;
            let r = ext.extend_automorphism(&theta)?;
            Ok(realize_outcome("extend", &ext, Some(&theta), None, &r))
        }
        Command::Lift { ext, phi } => {
            let ext = load_extension(ext)?;
            let phi = phi_of(&ext, phi)?;
            let r = ext.lift_automorphism(&phi)?;
            Ok(realize_outcome("lift", &ext, None, Some(&phi), &r))
        }
        Command::LiftPair { ext, theta, phi } => {
            let ext = load_extension(ext)?;
            let theta = theta_of(&ext, theta)?;
            let phi = phi_of(&ext, phi)?;
            let r = ext.realize_pair(&theta, &phi)?;
            Ok(realize_outcome("lift-pair", &ext, Some(&theta), Some(&phi), &r))
        }
        Command::Sylow { ext, theta, phi } => {
            let ext = load_extension(ext)?;
            let theta = theta.as_deref().map(|s| theta_of(&ext, s)).transpose()?;
            let phi = phi.as_deref().map(|s| phi_of(&ext, s)).transpose()?;
            let mut red = Reducer::new(&ext);
            let (mode, check) = match (&theta, &phi) {
                (Some(t), Some(p)) => ("pair", red.pair_check(t, p)?),
                (None, Some(p)) => ("lift", red.lift_check(p)?),
                (Some(t), None) => ("extend", red.extend_check(t)?),
                (None, None) => return Err(Error::invalid("sylow needs --theta, --phi or both")),
            };
            let rep = SylowCommandReport::new(&ext, mode, &check);
            Ok(Outcome::json(if check.verdict { 0 } else { 1 }, &rep))
        }
        Command::Split(args) => {
            let ext = load_extension(args)?;
            let kernels = split_kernels(&ext)?;
            let complement = is_split_extension(&ext)?.map(|c| c.members);
            let r = splitting_report(&ext)?;
            let rep = SplitReport {
                schema_version: SCHEMA_VERSION,
                command: "split",
                extension: ExtensionJson::new(&ext),
                splitting: SplittingJson::new(&ext, &r, &kernels, complement),
            };
            Ok(Outcome::json(if r.extension_splits { 0 } else { 1 }, &rep))
        }
        Command::Verify(args) => {
            let ext = load_extension(args)?;
            let outcome = verify_extension(&ext, &VerifyOptions::with_seed(cli.seed));
            let rep = VerifyReport {
                schema_version: SCHEMA_VERSION,
                command: "verify",
                extension: ExtensionJson::new(&ext),
                all_pass: outcome.all_pass(),
                outcome,
            };
            Ok(Outcome::json(if rep.all_pass { 0 } else { 1 }, &rep))
        }
        Command::VerifyAll { corpus, format } => Ok(verify_all_outcome(corpus, cli.seed, *format)),
        Command::Catalog { expr, write } => catalog_command(expr.as_deref(), write.as_deref()),
        Command::Schema => Ok(Outcome {
            code: 0,
            text: REPORT_SCHEMA.to_string(),
        }),
    }
}

fn analyze(ext: &ExtensionData) -> Result<Outcome, Error> {
    let c1 = ext.c1()?;
    let c2 = ext.c2()?;
    let mut extendable = Vec::new();
    let mut liftable = Vec::new();
    let mut obstructions = Obstructions {
        theta: Vec::new(),
        phi: Vec::new(),
    };
    for (i, theta) in c1.iter().enumerate() {
        let class = ext.lambda1(theta)?;
        if class.is_trivial() {
            extendable.push(i);
        } else {
            obstructions.theta.push(IndexedObstruction {
                index: i,
                obstruction: ObstructionJson::new(&class),
            });
        }
    }
    for (i, phi) in c2.iter().enumerate() {
        let class = ext.lambda2(phi)?;
        if class.is_trivial() {
            liftable.push(i);
        } else {
            obstructions.phi.push(IndexedObstruction {
                index: i,
                obstruction: ObstructionJson::new(&class),
            });
        }
    }
    let ex = ext.verify_exactness()?;
    let rep = WellsReport {
        schema_version: SCHEMA_VERSION,
        command: "analyze",
        extension: ExtensionJson::new(ext),
        c1_order: c1.len(),
        c2_order: c2.len(),
        h2_order: to_u64(&ext.cohomology()?.h2_order()),
        c1: c1.iter().map(|t| theta_images(ext, t)).collect(),
        c2: c2.iter().map(|p| p.images().to_vec()).collect(),
        extendable,
        liftable,
        obstructions,
        exactness: ExactnessJson {
            seq_1_1: ex.seq_1_1,
            seq_1_2: ex.seq_1_2,
            seq_1_3: ex.seq_1_3,
        },
    };
    Ok(Outcome::json(0, &rep))
}

fn h2(group: &str, coeffs: Option<&str>, action: &str, subgroup: Option<&str>) -> Result<Outcome, Error> {
    let (name, cg) = match (coeffs, subgroup) {
        (Some(_), Some(_)) => return Err(Error::invalid("give either --coeffs or --subgroup, not both")),
        (None, None) => return Err(Error::invalid("h2 needs --coeffs or --subgroup")),
        (None, Some(sub)) => {
            let ext = load_extension(&ExtArgs {
                group: group.to_string(),
                subgroup: sub.to_string(),
            })?;
            (ext.g().name().to_string(), ext.cohomology()?.clone())
        }
        (Some(c), None) => {
            let h = input::load_group(group)?;
            let cgrp = extlift_core::catalog::parse_group_expr(c.strip_prefix("catalog:").unwrap_or(c))?;
            let coeffs = abelian_structure(&Subgroup::whole(&cgrp))?;
            let m = coeffs.moduli().to_vec();
            let matrices: Vec<ActionMatrix> = if action == "trivial" {
                vec![ActionMatrix::identity(&m); h.order()]
            } else if let Some(k) = action.strip_prefix("invert-outside:") {
                let kernel = input::resolve_subgroup(&h, k)?;
                if kernel.order() * 2 != h.order() {
                    return Err(Error::invalid("the kernel of a sign action must have index 2"));
                }
                h.elements()
                    .map(|x| {
                        if kernel.contains(x) {
                            ActionMatrix::identity(&m)
                        } else {
                            ActionMatrix::scalar(&m, -1)
                        }
                    })
                    .collect()
            } else {
                return Err(Error::invalid(format!("unknown action `{action}`")));
            };
            (h.name().to_string(), cohomology_group(&h, &coeffs, matrices)?)
        }
    };
    let rep = H2Report {
        schema_version: SCHEMA_VERSION,
        command: "h2",
        group: name,
        moduli: cg.moduli().to_vec(),
        h2_order: to_u64(&cg.h2_order()),
        z2_order: to_u64(cg.z2_order()),
        b2_order: to_u64(cg.b2_order()),
    };
    Ok(Outcome::json(0, &rep))
}

fn realize_outcome(
    command: &'static str,
    ext: &ExtensionData,
    theta: Option<&GroupAutomorphism>,
    phi: Option<&GroupAutomorphism>,
    r: &extlift_core::wells::Realization,
) -> Outcome {
    let rep = RealizeReport {
        schema_version: SCHEMA_VERSION,
        command,
        extension: ExtensionJson::new(ext),
        theta: theta.map(|t| theta_images(ext, t)),
        phi: phi.map(|p| p.images().to_vec()),
        result: RealizationJson::new(r),
    };
    Outcome::json(if r.is_realized() { 0 } else { 1 }, &rep)
}

fn catalog_command(expr: Option<&str>, write: Option<&Path>) -> Result<Outcome, Error> {
    if let Some(dir) = write {
        let files = corpus::write_shipped(dir).map_err(|e| Error::invalid(format!("{}: {e}", dir.display())))?;
        let names: Vec<String> = files
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        return Ok(Outcome::json(
            0,
            &CatalogReport {
                schema_version: SCHEMA_VERSION,
                command: "catalog",
                families: None,
                group: None,
                written: Some(names),
            },
        ));
    }
    let rep = match expr {
        None => CatalogReport {
            schema_version: SCHEMA_VERSION,
            command: "catalog",
            families: Some(
                extlift_core::catalog::CATALOG_NAMES
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
            ),
            group: None,
            written: None,
        },
        Some(e) => {
            let g = extlift_core::catalog::parse_group_expr(e.strip_prefix("catalog:").unwrap_or(e))?;
            CatalogReport {
                schema_version: SCHEMA_VERSION,
                command: "catalog",
                families: None,
                group: Some(serde_json::to_value(extlift_core::json::GroupJson::from_group(&g)).unwrap()),
                written: None,
            }
        }
    };
    Ok(Outcome::json(0, &rep))
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub extension: ExtensionJson,
    pub all_pass: bool,
    #[serde(flatten)]
    pub outcome: VerifyOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub families: Option<Vec<String>>,
    pub group: Option<serde_json::Value>,
    pub written: Option<Vec<String>>,
}

/// One `(G, N)` row of a corpus run.
#[derive(Debug, Clone, Serialize)]
pub struct PairSummary {
    pub file: String,
    pub group: String,
    pub order: usize,
    pub n_members: Vec<usize>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub outcome: Option<VerifyOutcome>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyAllReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub files: usize,
    pub pairs: usize,
    pub checks_passed: usize,
    pub checks_failed: usize,
    pub checks_skipped: usize,
    pub all_pass: bool,
    pub entries: Vec<PairSummary>,
}

/// Every abelian normal subgroup of `g`, in size order.
pub fn abelian_normal_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    normal_subgroups(g).into_iter().filter(Subgroup::is_abelian).collect()
}

fn summarize(file: &str, g: &FiniteGroup, n: &Subgroup, r: Result<VerifyOutcome, Error>) -> PairSummary {
    let mut s = PairSummary {
        file: file.to_string(),
        group: g.name().to_string(),
        order: g.order(),
        n_members: n.members().to_vec(),
        passed: 0,
        failed: 0,
        skipped: 0,
        outcome: None,
        error: None,
    };
    match r {
        Ok(o) => {
            for c in &o.checks {
                match c.passed {
                    Some(true) => s.passed += 1,
                    Some(false) => s.failed += 1,
                    None => s.skipped += 1,
                }
            }
            s.outcome = Some(o);
        }
        Err(e) if e.is_bound() => {
            s.skipped += 1;
            s.error = Some(format!("skipped: {e}"));
        }
        Err(e) => {
            s.failed += 1;
            s.error = Some(e.to_string());
        }
    }
    s
}

/// Runs [`verify_extension`] over a corpus directory. Entries run in
/// parallel; output order is by file name, then subgroup size and members.
pub fn verify_all(dir: &Path, seed: u64) -> Result<VerifyAllReport, String> {
    let files = corpus::corpus_files(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut jobs: Vec<(String, FiniteGroup, Subgroup)> = Vec::new();
    for path in &files {
        let g = corpus::load_corpus_file(path)?;
        let file = path.file_name().unwrap().to_string_lossy().into_owned();
        for n in abelian_normal_subgroups(&g) {
            jobs.push((file.clone(), g.clone(), n));
        }
    }
    let bounds = bounds_from_env().map_err(|e| e.to_string())?;
    let opts = VerifyOptions::with_seed(seed);
    let entries: Vec<PairSummary> = jobs
        .par_iter()
        .map(|(file, g, n)| {
            let r = extension_with_bounds(g, n, bounds).map(|ext| verify_extension(&ext, &opts));
            summarize(file, g, n, r)
        })
        .collect();
    let sum = |f: fn(&PairSummary) -> usize| entries.iter().map(f).sum::<usize>();
    let checks_failed = sum(|e| e.failed);
    Ok(VerifyAllReport {
        schema_version: SCHEMA_VERSION,
        command: "verify-all",
        files: files.len(),
        pairs: entries.len(),
        checks_passed: sum(|e| e.passed),
        checks_failed,
        checks_skipped: sum(|e| e.skipped),
        all_pass: checks_failed == 0,
        entries,
    })
}

/// A fixed-width summary table of a corpus run.
pub fn render_table(r: &VerifyAllReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<16} {:<28} {:>5}  {:<24} {:>4} {:>4} {:>4}\n",
        "file", "group", "|G|", "N", "pass", "fail", "skip"
    ));
    for e in &r.entries {
        let n = format!("{:?}", e.n_members);
        let n = if n.len() > 24 { format!("{}..", &n[..22]) } else { n };
        out.push_str(&format!(
            "{:<16} {:<28} {:>5}  {:<24} {:>4} {:>4} {:>4}\n",
            e.file, e.group, e.order, n, e.passed, e.failed, e.skipped
        ));
        if let Some(o) = &e.outcome {
            for c in o.checks.iter().filter(|c| c.passed == Some(false)) {
                out.push_str(&format!("    FAIL {}: {}\n", c.name, c.detail));
            }
        }
        if let Some(err) = &e.error {
            out.push_str(&format!("    {err}\n"));
        }
    }
    out.push_str(&format!(
        "{} files, {} pairs: {} checks passed, {} failed, {} skipped\n",
        r.files, r.pairs, r.checks_passed, r.checks_failed, r.checks_skipped
    ));
    out
}

fn verify_all_outcome(dir: &Path, seed: u64, format: Format) -> Outcome {
    match verify_all(dir, seed) {
        Ok(r) => {
            let code = if r.all_pass { 0 } else { 1 };
            match format {
                Format::Json => Outcome::json(code, &r),
                Format::Text => Outcome {
                    code,
                    text: render_table(&r),
                },
            }
        }
        Err(msg) => Outcome::json(
            2,
            &ErrorReport {
                schema_version: SCHEMA_VERSION,
                command: "verify-all".into(),
                error: ErrorJson {
                    kind: "invalid_input",
                    message: msg,
                },
            },
        ),
    }
}
