use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use shg_core::constructions::{self, ConstructionError};
use shg_core::{
    FiniteSemihypergroup, FreeProduct, FreeProductError, GroupError, Rational, ThreeElementParams,
    UniversalLift,
};

use crate::files::{self, FileError};

#[derive(Debug, Parser)]
#[command(
    name = "shg",
    version,
    about = "Check, build and combine finite semihypergroups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report axioms, identity and purity of a structure file.
    Check {
        file: String,
        /// Skip the A1/A3 checks.
        #[arg(long)]
        no_check: bool,
    },
    /// Print p_x * p_y.
    Convolve {
        file: String,
        x: String,
        y: String,
        #[arg(long)]
        no_check: bool,
    },
    /// Emit a structure file from a construction.
    #[command(subcommand)]
    Gen(Gen),
    /// Build a free product and inspect it up to a word length.
    Free {
        #[arg(required = true)]
        files: Vec<String>,
        #[arg(long)]
        max_len: usize,
        /// Print the truncated convolution table.
        #[arg(long)]
        table: bool,
        /// Run associativity, identity and probability checks on the truncation.
        #[arg(long)]
        assoc_check: bool,
    },
    /// Verify the lift of per-factor homomorphisms to the free product.
    Lift {
        /// Comma-separated structure files.
        spec: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        hom: String,
        #[arg(long)]
        max_len: usize,
    },
    /// List the reduced words of a free product.
    Words {
        /// Comma-separated structure files.
        spec: String,
        #[arg(long)]
        max_len: usize,
    },
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write to a file instead of stdout.
    #[arg(long, short)]
    pub output: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Gen {
    /// A semigroup given as a Cayley table (.grp format).
    Semigroup {
        file: String,
        #[command(flatten)]
        out: Output,
    },
    Coset {
        group: String,
        #[arg(long)]
        subgroup: String,
        #[command(flatten)]
        out: Output,
    },
    DoubleCoset {
        group: String,
        #[arg(long)]
        subgroup: String,
        #[command(flatten)]
        out: Output,
    },
    Orbit {
        group: String,
        #[arg(long)]
        action: String,
        #[command(flatten)]
        out: Output,
    },
    ThreeElement {
        /// x1,x2,x3,y1,y2,y3,z1,z2
        #[arg(long)]
        params: String,
        #[command(flatten)]
        out: Output,
    },
}

/// Exit status and the two output streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    report: String,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            report: String::new(),
            message: message.into(),
        }
    }

    fn math(report: String, message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            report,
            message: message.into(),
        }
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure {
            code: e.exit_code(),
            report: String::new(),
            message: e.to_string(),
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        let code = match &e {
            ConstructionError::Group(GroupError::UnknownElement(_)) => 2,
            ConstructionError::Structure(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            report: String::new(),
            message: e.to_string(),
        }
    }
}

impl From<FreeProductError> for Failure {
    fn from(e: FreeProductError) -> Self {
        let code = match e {
            FreeProductError::NoFactors
            | FreeProductError::MapCount { .. }
            | FreeProductError::InvalidWord(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            report: String::new(),
            message: e.to_string(),
        }
    }
}

type Res = Result<String, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli.command),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            }
        }
    }
}

pub fn run(command: Command) -> Outcome {
    let result = match command {
        Command::Check { file, no_check } => check(&file, no_check),
        Command::Convolve {
            file,
            x,
            y,
            no_check,
        } => convolve(&file, &x, &y, no_check),
        Command::Gen(g) => generate(g),
        Command::Free {
            files,
            max_len,
            table,
            assoc_check,
        } => free(&files, max_len, table, assoc_check),
        Command::Lift {
            spec,
            target,
            hom,
            max_len,
        } => lift(&spec, &target, &hom, max_len),
        Command::Words { spec, max_len } => words(&spec, max_len),
    };
    match result {
        Ok(stdout) => Outcome::ok(stdout),
        Err(f) => Outcome {
            code: f.code,
            stdout: f.report,
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn load_structure(path: &str, check_axioms: bool) -> Result<FiniteSemihypergroup, Failure> {
    Ok(files::parse_structure(
        &files::read_file(path)?,
        check_axioms,
    )?)
}

fn identity_summary(k: &FiniteSemihypergroup) -> String {
    match (k.identity(), k.right_identity(), k.left_identity()) {
        (Some(e), _, _) => k.element_name(e).to_string(),
        (None, Some(r), _) => format!("none (right identity {})", k.element_name(r)),
        (None, None, Some(l)) => format!("none (left identity {})", k.element_name(l)),
        _ => "none".to_string(),
    }
}

fn purity_summary(k: &FiniteSemihypergroup) -> String {
    match k.impurity_witness() {
        None => "yes".to_string(),
        Some((x, y)) => {
            let e = k.identity().map_or("e", |e| k.element_name(e));
            format!(
                "no (p_{} * p_{} = p_{e})",
                k.element_name(x),
                k.element_name(y)
            )
        }
    }
}

fn check(path: &str, no_check: bool) -> Res {
    let k = load_structure(path, false)?;
    let tail = format!(
        "identity: {}; pure: {}",
        identity_summary(&k),
        purity_summary(&k)
    );
    if no_check {
        return Ok(format!("A1: skipped; A3: skipped; {tail}\n"));
    }
    let report = k.verify_axioms();
    let a1 = if report.associativity_passed() {
        format!("pass ({} triples)", report.triples_checked)
    } else {
        let bad = report
            .violations
            .iter()
            .filter(|v| matches!(v, shg_core::Violation::NotAssociative { .. }))
            .count();
        format!("fail ({bad} of {} triples)", report.triples_checked)
    };
    let a3 = if report.probability_passed() {
        "pass".to_string()
    } else {
        let bad = report
            .violations
            .iter()
            .filter(|v| matches!(v, shg_core::Violation::NotProbability { .. }))
            .count();
        format!("fail ({bad} of {} pairs)", report.pairs_checked)
    };
    let mut out = format!("A1: {a1}; A3: {a3}; {tail}\n");
    if report.passed() {
        return Ok(out);
    }
    let first = report.violations[0].describe(&k);
    let _ = writeln!(out, "witness: {first}");
    Err(Failure::math(out, first))
}

fn element(k: &FiniteSemihypergroup, name: &str) -> Result<usize, Failure> {
    k.index_of(name)
        .ok_or_else(|| Failure::usage(format!("`{name}` is not an element of {}", k.name())))
}

fn convolve(path: &str, x: &str, y: &str, no_check: bool) -> Res {
    let k = load_structure(path, !no_check)?;
    let m = k.product(element(&k, x)?, element(&k, y)?);
    Ok(format!("{}\n", k.format_measure(m)))
}

fn deliver(text: String, out: &Output) -> Res {
    match &out.output {
        None => Ok(text),
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::usage(format!("{path}: {e}")))?;
            Ok(String::new())
        }
    }
}

fn subgroup(g: &shg_core::FiniteGroup, spec: &str) -> Result<Vec<usize>, Failure> {
    let names: Vec<&str> = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    g.subgroup_by_names(&names).map_err(|e| match e {
        GroupError::UnknownElement(_) => Failure::usage(e.to_string()),
        other => Failure::math(String::new(), other.to_string()),
    })
}

fn load_group(path: &str) -> Result<shg_core::FiniteGroup, Failure> {
    Ok(files::parse_group(&files::read_file(path)?)?)
}

fn parse_params(text: &str) -> Result<ThreeElementParams, Failure> {
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<Rational>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::usage(format!("--params: {e}")))?;
    ThreeElementParams::from_slice(&values)
        .ok_or_else(|| Failure::usage(format!("--params needs 8 values, got {}", values.len())))
}

fn generate(g: Gen) -> Res {
    let (k, out) = match g {
        Gen::Semigroup { file, out } => {
            let (name, elements, table) = files::parse_cayley(&files::read_file(&file)?)?;
            (constructions::from_semigroup(name, elements, table)?, out)
        }
        Gen::Coset {
            group,
            subgroup: h,
            out,
        } => {
            let g = load_group(&group)?;
            let h = subgroup(&g, &h)?;
            (constructions::coset_space(&g, &h)?, out)
        }
        Gen::DoubleCoset {
            group,
            subgroup: h,
            out,
        } => {
            let g = load_group(&group)?;
            let h = subgroup(&g, &h)?;
            (constructions::double_coset_space(&g, &h)?, out)
        }
        Gen::Orbit { group, action, out } => {
            let g = load_group(&group)?;
            let action = files::parse_action(&files::read_file(&action)?, g)?;
            (constructions::orbit_space(&action)?, out)
        }
        Gen::ThreeElement { params, out } => {
            let p = parse_params(&params)?;
            (constructions::three_element_hypergroup(&p)?, out)
        }
    };
    deliver(files::emit_structure(&k), &out)
}

fn build_product(paths: &[String]) -> Result<FreeProduct, Failure> {
    let factors = paths
        .iter()
        .map(|p| load_structure(p, true))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FreeProduct::build(factors)?)
}

fn split_spec(spec: &str) -> Vec<String> {
    spec.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn free(paths: &[String], max_len: usize, table: bool, assoc_check: bool) -> Res {
    let f = build_product(paths)?;
    let words = f.enumerate_words(max_len);
    let mut out = String::new();
    let _ = writeln!(out, "mode: {}", f.mode());
    let rendered: Vec<String> = words.iter().map(|w| f.render_word(w)).collect();
    let _ = writeln!(
        out,
        "words up to length {max_len} ({}): {}",
        words.len(),
        rendered.join(", ")
    );
    if table {
        for (x, rx) in words.iter().zip(&rendered) {
            for (y, ry) in words.iter().zip(&rendered) {
                let m = f.convolve_words(x, y)?;
                let _ = writeln!(out, "p {rx}*{ry} = {}", f.format_measure(&m));
            }
        }
    }
    if !assoc_check {
        return Ok(out);
    }
    let report = f.check_associativity(max_len);
    let identity = f.identity_law_failures(max_len);
    let probability = f.probability_failures(max_len);
    let verdict = |ok: bool| if ok { "pass" } else { "fail" };
    if report.passed() {
        let _ = writeln!(
            out,
            "associativity: pass ({} triples)",
            report.triples_checked
        );
    } else {
        let _ = writeln!(
            out,
            "associativity: fail ({} of {} triples)",
            report.failures.len(),
            report.triples_checked
        );
    }
    let _ = writeln!(
        out,
        "identity law: {}",
        if f.has_identity() {
            verdict(identity.is_empty())
        } else {
            "n/a (no identity)"
        }
    );
    let _ = writeln!(out, "probability: {}", verdict(probability.is_empty()));
    if let Some(t) = report.failures.first() {
        let message = format!(
            "triple ({}, {}, {}): {} vs {}",
            f.render_word(&t.x),
            f.render_word(&t.y),
            f.render_word(&t.z),
            f.format_measure(&t.left),
            f.format_measure(&t.right)
        );
        return Err(Failure::math(out, message));
    }
    if !identity.is_empty() || !probability.is_empty() {
        return Err(Failure::math(out, "truncated laws fail"));
    }
    Ok(out)
}

fn words(spec: &str, max_len: usize) -> Res {
    let f = build_product(&split_spec(spec))?;
    let mut out = String::new();
    for w in f.enumerate_words(max_len) {
        let _ = writeln!(out, "{}", f.render_word(&w));
    }
    Ok(out)
}

fn lift(spec: &str, target: &str, hom: &str, max_len: usize) -> Res {
    let f = build_product(&split_spec(spec))?;
    let h = load_structure(target, true)?;
    let maps = files::parse_maps(&files::read_file(hom)?, f.factors(), &h)?;
    let lift = UniversalLift::new(&f, &h, maps)?;
    let report = lift.verify_multiplicative(max_len);
    let mut out = String::new();
    let restricted: Vec<bool> = (0..f.factors().len())
        .map(|a| lift.restricts_to_factor(a))
        .collect();
    let _ = writeln!(
        out,
        "multiplicative: {} ({} pairs up to length {max_len})",
        if report.passed() { "pass" } else { "fail" },
        report.pairs_checked
    );
    for (a, ok) in restricted.iter().enumerate() {
        let _ = writeln!(
            out,
            "factor {}: restriction {}",
            a + 1,
            if *ok { "matches" } else { "differs" }
        );
    }
    if let Some(fail) = report.failures.first() {
        let message = format!(
            "Gamma(p_{} * p_{}) = {} but Gamma(p_x) * Gamma(p_y) = {}",
            f.render_word(&fail.x),
            f.render_word(&fail.y),
            h.format_measure(&fail.image_of_product),
            h.format_measure(&fail.product_of_images)
        );
        return Err(Failure::math(out, message));
    }
    if restricted.iter().any(|ok| !ok) {
        return Err(Failure::math(
            out,
            "lift does not restrict to the factor lifts",
        ));
    }
    Ok(out)
}
