//! Command-line front end. `run` turns a parsed configuration into an exit
//! status and the text to print; it never touches the process itself.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bicyclopermutohedron::{
    build_qp, classify_critical_qp, expected_qp_critical_counts, expected_qp_homology,
    lift_violations, qp_morse_data, qp_path_report, reflection_sign, verify_boundary_dichotomy,
    verify_class_monotone, verify_reflection_chain_map, QpError, QpMorseData,
};
use crate::complex::{CellId, ChainComplex};
use crate::cp_morse::{
    build_cp_matching, classify_critical_cp, cp_morse_data, expected_cp_critical_counts,
    expected_cp_homology, path_lemma_report, CpMorseData, CpMorseError,
};
use crate::cyclopermutohedron::{
    build_cp, good_triple_violations, incidence_of_facet, random_good_triple, CpError,
};
use crate::discrete_morse::{enumerate_gradient_paths, path_weight, MorseComplex, Pairing};
use crate::homology::{homology_mod2, homology_of_boundaries, homology_z, HomologyResult};
use crate::linkage::{build_moduli_complex, build_reduced_moduli, LengthVector, LinkageError};
use crate::partitions::CyclicCell;
use crate::ResourceGuard;

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "CYCLO_THREADS";

/// Exhaustive good-triple sweeps up to this `n`; sampled beyond.
const SWEEP_MAX_N: usize = 6;
const GOOD_TRIPLE_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "cyclo",
    version,
    about = "Cyclopermutohedra, their reflection quotients and polygon moduli spaces"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub guard: GuardArgs,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct GuardArgs {
    /// Largest n accepted by the builders.
    #[arg(long, global = true, default_value_t = ResourceGuard::DEFAULT_MAX_N)]
    pub limit: usize,
    /// Lift the size limit entirely.
    #[arg(long, global = true)]
    pub allow_large: bool,
}

impl GuardArgs {
    pub fn guard(&self) -> ResourceGuard {
        if self.allow_large {
            ResourceGuard::unlimited()
        } else {
            ResourceGuard { max_n: self.limit }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Cp,
    Qp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Cp,
    Qp,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coeff {
    Z,
    Z2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Build a complex and print cell counts, or export it as JSON.
    Build {
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Homology of a complex.
    Homology {
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Coeff::Z)]
        coeff: Coeff,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// The stepwise matching, its critical cells and Morse complex.
    Morse {
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Print every gradient path between critical cells as JSON lines.
        #[arg(long)]
        emit_paths: bool,
    },
    /// Moduli space of polygons with the given side lengths.
    Linkage {
        /// Comma-separated lengths; fractions such as 3/2 are exact.
        #[arg(long)]
        lengths: String,
        /// Quotient by the reflection of the plane.
        #[arg(long)]
        reduced: bool,
        /// Also compute integral homology.
        #[arg(long)]
        homology: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Describe one cell of the cyclopermutohedron, e.g. `1|2,3|4,5|6`.
    Cell {
        cell: String,
        /// Accept any rotation and element order.
        #[arg(long)]
        normalize: bool,
    },
    /// Run the verification suite.
    Verify {
        target: Target,
        /// Check every n from 3 up to this value.
        #[arg(long, conflicts_with = "n")]
        max_n: Option<usize>,
        /// Check a single n.
        #[arg(long)]
        n: Option<usize>,
    },
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Failure classes with their exit codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Verification(String),
    Usage(String),
    Guard(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Self::Verification(_) => 1,
            Self::Usage(_) => 2,
            Self::Guard(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Verification(m) | Self::Usage(m) | Self::Guard(m) => m,
        }
    }
}

impl From<CpError> for Failure {
    fn from(e: CpError) -> Self {
        match e {
            CpError::Guard { .. } => Self::Guard(format!("{e}; pass --limit or --allow-large")),
            CpError::TooSmall(_) => Self::Usage(e.to_string()),
            other => Self::Verification(other.to_string()),
        }
    }
}

impl From<QpError> for Failure {
    fn from(e: QpError) -> Self {
        match e {
            QpError::Build(b) => b.into(),
            other => Self::Verification(other.to_string()),
        }
    }
}

impl From<CpMorseError> for Failure {
    fn from(e: CpMorseError) -> Self {
        match e {
            CpMorseError::Build(b) => b.into(),
            other => Self::Verification(other.to_string()),
        }
    }
}

impl From<LinkageError> for Failure {
    fn from(e: LinkageError) -> Self {
        match e {
            LinkageError::Guard { .. } => {
                Self::Guard(format!("{e}; pass --limit or --allow-large"))
            }
            LinkageError::Complex(_)
            | LinkageError::FixedCell(_)
            | LinkageError::NotRegular { .. } => Self::Verification(e.to_string()),
            other => Self::Usage(other.to_string()),
        }
    }
}

fn internal<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Verification(e.to_string())
}

/// Execute one invocation.
pub fn run(config: &RunConfig) -> Outcome {
    let guard = config.guard.guard();
    let result = match &config.command {
        Command::Build { kind, n, format } => build(*kind, *n, *format, &guard),
        Command::Homology {
            kind,
            n,
            coeff,
            format,
        } => homology(*kind, *n, *coeff, *format, &guard),
        Command::Morse {
            kind,
            n,
            emit_paths,
        } => morse(*kind, *n, *emit_paths, &guard),
        Command::Linkage {
            lengths,
            reduced,
            homology,
            format,
        } => linkage(lengths, *reduced, *homology, *format, &guard),
        Command::Cell { cell, normalize } => describe_cell(cell, *normalize),
        Command::Verify { target, max_n, n } => {
            return verify(*target, *max_n, *n, config.seed, &guard)
        }
    };
    match result {
        Ok(out) => Outcome::ok(out),
        Err(f) => Outcome {
            code: f.code(),
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message()),
        },
    }
}

fn label(kind: Kind) -> &'static str {
    match kind {
        Kind::Cp => "cp",
        Kind::Qp => "qp",
    }
}

fn counts_text<C: CellId>(title: &str, cc: &ChainComplex<C>) -> String {
    let mut out = format!("{title}\n");
    for (d, c) in cc.cell_counts().iter().enumerate() {
        let _ = writeln!(out, "dim {d}: {c} cells");
    }
    let _ = writeln!(out, "euler characteristic: {}", cc.euler_characteristic());
    out
}

fn build(kind: Kind, n: usize, format: Format, guard: &ResourceGuard) -> Result<String, Failure> {
    let title = format!("{} n={n}", label(kind));
    let json = format == Format::Json;
    if format == Format::Csv {
        return Err(Failure::Usage("build supports text and json output".into()));
    }
    Ok(match kind {
        Kind::Cp => {
            let cc = build_cp(n, guard)?;
            if json {
                cc.to_json() + "\n"
            } else {
                counts_text(&title, &cc)
            }
        }
        Kind::Qp => {
            let cc = build_qp(n, guard)?;
            if json {
                cc.to_json() + "\n"
            } else {
                counts_text(&title, &cc)
            }
        }
    })
}

fn homology(
    kind: Kind,
    n: usize,
    coeff: Coeff,
    format: Format,
    guard: &ResourceGuard,
) -> Result<String, Failure> {
    match kind {
        Kind::Cp => homology_report(&build_cp(n, guard)?, coeff, format),
        Kind::Qp => homology_report(&build_qp(n, guard)?, coeff, format),
    }
}

fn homology_report<C: CellId>(
    cc: &ChainComplex<C>,
    coeff: Coeff,
    format: Format,
) -> Result<String, Failure> {
    match coeff {
        Coeff::Z => Ok(render_homology(&homology_z(cc).map_err(internal)?, format)),
        Coeff::Z2 => Ok(render_mod2(&homology_mod2(cc).map_err(internal)?, format)),
    }
}

fn torsion_field(h: &HomologyResult, k: usize) -> String {
    h.torsion[k]
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_homology(h: &HomologyResult, format: Format) -> String {
    match format {
        Format::Text => (0..h.num_dims())
            .map(|k| format!("dim {k}: {}\n", h.group_label(k)))
            .collect(),
        Format::Csv => {
            let mut out = String::from("dim,betti,torsion,betti_mod2\n");
            for k in 0..h.num_dims() {
                let _ = writeln!(
                    out,
                    "{k},{},{},{}",
                    h.betti[k],
                    torsion_field(h, k),
                    h.betti_mod2[k]
                );
            }
            out
        }
        Format::Json => serde_json::to_string(h).expect("plain data serializes") + "\n",
    }
}

fn render_mod2(b: &[usize], format: Format) -> String {
    match format {
        Format::Text => b
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                if x == 0 {
                    format!("dim {k}: 0\n")
                } else {
                    format!("dim {k}: Z2^{x}\n")
                }
            })
            .collect(),
        Format::Csv => {
            let mut out = String::from("dim,betti,torsion,betti_mod2\n");
            for (k, x) in b.iter().enumerate() {
                let _ = writeln!(out, "{k},,,{x}");
            }
            out
        }
        Format::Json => json!({ "betti_mod2": b }).to_string() + "\n",
    }
}

fn cp_data(n: usize, guard: &ResourceGuard) -> Result<CpMorseData, Failure> {
    Ok(cp_morse_data(n, guard)?)
}

fn qp_data(n: usize, guard: &ResourceGuard) -> Result<QpMorseData, Failure> {
    Ok(qp_morse_data(n, guard)?)
}

fn morse(kind: Kind, n: usize, emit_paths: bool, guard: &ResourceGuard) -> Result<String, Failure> {
    match kind {
        Kind::Cp => {
            let d = cp_data(n, guard)?;
            Ok(morse_report(
                kind,
                n,
                &d.complex,
                d.steps.matching.len(),
                &d.pairing,
                &d.morse,
                emit_paths,
            ))
        }
        Kind::Qp => {
            let d = qp_data(n, guard)?;
            Ok(morse_report(
                kind,
                n,
                &d.complex,
                d.steps.matching.len(),
                &d.pairing,
                &d.morse,
                emit_paths,
            ))
        }
    }
}

fn morse_homology(mc: &MorseComplex) -> HomologyResult {
    homology_of_boundaries(&mc.counts(), &mc.boundary)
}

fn morse_report<C: CellId>(
    kind: Kind,
    n: usize,
    cc: &ChainComplex<C>,
    pairs: usize,
    pairing: &Pairing,
    mc: &MorseComplex,
    emit_paths: bool,
) -> String {
    if emit_paths {
        return path_lines(cc, pairing, mc);
    }
    let mut out = format!("{} n={n}\nmatched pairs: {pairs}\n", label(kind));
    for (d, crit) in mc.critical.iter().enumerate() {
        let names: Vec<String> = crit.iter().map(|&i| cc.cells(d)[i].to_string()).collect();
        let _ = writeln!(out, "dim {d}: {} critical: {}", crit.len(), names.join(" "));
    }
    let zero: Vec<String> = (1..mc.boundary.len())
        .map(|k| {
            format!(
                "{k}:{}",
                if mc.boundary[k].is_zero() {
                    "zero"
                } else {
                    "nonzero"
                }
            )
        })
        .collect();
    let _ = writeln!(out, "morse boundary: {}", zero.join(" "));
    let _ = writeln!(out, "morse homology: {}", morse_homology(mc));
    out
}

fn path_lines<C: CellId>(cc: &ChainComplex<C>, pairing: &Pairing, mc: &MorseComplex) -> String {
    let mut out = String::new();
    for k in 1..mc.critical.len() {
        let d = cc.boundary_ref(k).expect("dimension in range");
        for (col, &tau) in mc.critical[k].iter().enumerate() {
            for (row, count) in mc.path_counts[k].column(col) {
                let sigma = mc.critical[k - 1][row];
                let mut paths = Vec::new();
                for (facet, inc) in d.column(tau) {
                    for p in enumerate_gradient_paths(cc, pairing, k - 1, facet, sigma) {
                        let mut labels = vec![cc.cells(k)[tau].to_string()];
                        labels.extend(p.labels(cc));
                        paths.push(json!({ "incidence": inc, "weight": path_weight(cc, &p), "cells": labels }));
                    }
                }
                let line = json!({
                    "dim": k,
                    "from": cc.cells(k)[tau].to_string(),
                    "to": cc.cells(k - 1)[sigma].to_string(),
                    "count": count,
                    "coefficient": mc.boundary[k].get(row, col),
                    "paths": paths,
                });
                let _ = writeln!(out, "{line}");
            }
        }
    }
    out
}

fn linkage(
    lengths: &str,
    reduced: bool,
    with_homology: bool,
    format: Format,
    guard: &ResourceGuard,
) -> Result<String, Failure> {
    let ell: LengthVector = lengths.parse()?;
    let cc = if reduced {
        build_reduced_moduli(&ell, guard)?
    } else {
        build_moduli_complex(&ell, guard)?
    };
    let title = format!(
        "{} lengths={ell}",
        if reduced { "reduced moduli" } else { "moduli" }
    );
    if format == Format::Json && !with_homology {
        return Ok(cc.to_json() + "\n");
    }
    if !with_homology {
        return Ok(counts_text(&title, &cc));
    }
    let h = homology_z(&cc).map_err(internal)?;
    Ok(match format {
        Format::Text => counts_text(&title, &cc) + &render_homology(&h, format),
        _ => render_homology(&h, format),
    })
}

fn describe_cell(text: &str, normalize: bool) -> Result<String, Failure> {
    let c = CyclicCell::parse(text, normalize).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut out = format!("cell: {c}\ndim: {}\n", c.dim());
    if let Ok(cl) = c.class_of() {
        let _ = writeln!(
            out,
            "class: {cl} ({})",
            if cl.is_ascending() {
                "ascending"
            } else {
                "descending"
            }
        );
        let _ = writeln!(out, "reflection: {}", c.reflect());
        let _ = writeln!(out, "reflection sign: {:+}", reflection_sign(&c));
    }
    for f in c.facets() {
        let v = incidence_of_facet(&c, &f).map_err(internal)?;
        let _ = writeln!(out, "facet {}: {:+}", f.cell, v);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// verification

#[derive(Default)]
struct Checks {
    out: String,
    failed: usize,
}

impl Checks {
    fn record(&mut self, scope: &str, name: &str, result: Result<(), String>) {
        match result {
            Ok(()) => {
                let _ = writeln!(self.out, "PASS {scope}: {name}");
            }
            Err(e) => {
                self.failed += 1;
                let _ = writeln!(self.out, "FAIL {scope}: {name}: {e}");
            }
        }
    }

    fn note(&mut self, scope: &str, text: &str) {
        let _ = writeln!(self.out, "NOTE {scope}: {text}");
    }
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("got {got:?}, expected {want:?}"))
    }
}

fn first_few(items: &[String]) -> String {
    let shown: Vec<&str> = items.iter().take(3).map(String::as_str).collect();
    format!("{} cases, e.g. {}", items.len(), shown.join("; "))
}

fn none_of(items: &[String]) -> Result<(), String> {
    if items.is_empty() {
        Ok(())
    } else {
        Err(first_few(items))
    }
}

fn structural<C: CellId>(checks: &mut Checks, scope: &str, cc: &ChainComplex<C>) {
    checks.record(
        scope,
        "diamond property",
        cc.verify_diamond().map_err(|e| e.to_string()),
    );
    checks.record(
        scope,
        "boundary squares to zero",
        cc.verify_boundary_squared().map_err(|e| e.to_string()),
    );
}

fn morse_vs_direct(checks: &mut Checks, scope: &str, direct: &HomologyResult, mc: &MorseComplex) {
    checks.record(
        scope,
        "Morse homology equals direct homology",
        expect_eq(&morse_homology(mc), direct),
    );
}

fn verify_cp(
    checks: &mut Checks,
    n: usize,
    seed: u64,
    guard: &ResourceGuard,
) -> Result<(), Failure> {
    let scope = format!("cp n={n}");
    let d = cp_data(n, guard)?;
    let cc = &d.complex;
    structural(checks, &scope, cc);
    checks.record(&scope, "matching is acyclic", Ok(()));
    checks.record(
        &scope,
        "no step conflicts",
        expect_eq(d.steps.conflicts.len(), 0),
    );
    checks.record(
        &scope,
        "critical census",
        expect_eq(d.morse.counts(), expected_cp_critical_counts(n)),
    );
    checks.record(
        &scope,
        "critical cells classified",
        classify_critical_cp(cc, &d.pairing)
            .map(|_| ())
            .map_err(|e| e.to_string()),
    );
    checks.record(
        &scope,
        "Morse boundary vanishes",
        if d.morse.is_boundary_zero() {
            Ok(())
        } else {
            Err("nonzero".into())
        },
    );
    let r = path_lemma_report(&d);
    checks.record(&scope, "path counts are 0 or 2", none_of(&r.bad_counts));
    checks.record(
        &scope,
        "two-path targets match the three shapes",
        none_of(&r.shape_mismatches),
    );
    checks.record(
        &scope,
        "two-path weights are +1",
        none_of(&r.negative_weights),
    );
    if n <= SWEEP_MAX_N {
        checks.record(
            &scope,
            "good triples multiply to -1 (exhaustive)",
            none_of(&good_triple_violations(cc)),
        );
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bad: Vec<String> = (0..GOOD_TRIPLE_SAMPLES)
            .map(|_| random_good_triple(n, &mut rng))
            .filter(|t| t.sign().ok() != Some(-1))
            .map(|t| format!("{} | {} in {}", t.t1, t.t2, t.s))
            .collect();
        checks.record(
            &scope,
            "good triples multiply to -1 (sampled)",
            none_of(&bad),
        );
    }
    let h = homology_z(cc).map_err(internal)?;
    morse_vs_direct(checks, &scope, &h, &d.morse);
    checks.record(
        &scope,
        "homology matches the closed form",
        expect_eq(&h, &expected_cp_homology(n)),
    );
    Ok(())
}

fn verify_qp(checks: &mut Checks, n: usize, guard: &ResourceGuard) -> Result<(), Failure> {
    let scope = format!("qp n={n}");
    let d = qp_data(n, guard)?;
    let qp = &d.complex;
    structural(checks, &scope, qp);
    let halves: Vec<usize> = d.cp.cell_counts().iter().map(|c| c / 2).collect();
    checks.record(
        &scope,
        "cell counts are half of cp",
        expect_eq(qp.cell_counts(), halves),
    );
    checks.record(
        &scope,
        "incidences are +-1",
        expect_eq(qp.max_abs_entry(), 1),
    );
    checks.record(
        &scope,
        "reflection with sign correction is a chain map",
        verify_reflection_chain_map(&d.cp).map_err(|(s, t)| format!("{s} on facet {t}")),
    );
    checks.record(&scope, "matching is acyclic", Ok(()));
    let cm = build_cp_matching(&d.cp);
    checks.record(
        &scope,
        "matching lifts into the cp matching",
        none_of(&lift_violations(qp, &d.steps, &d.cp, &cm)),
    );
    checks.record(
        &scope,
        "critical census",
        expect_eq(d.morse.counts(), expected_qp_critical_counts(n)),
    );
    checks.record(
        &scope,
        "critical cells classified",
        classify_critical_qp(qp, &d.pairing)
            .map(|_| ())
            .map_err(|e| e.to_string()),
    );
    checks.record(
        &scope,
        "classes climb along gradient paths",
        verify_class_monotone(qp, &d.pairing),
    );
    let r = qp_path_report(&d);
    checks.record(&scope, "path counts are 0 or 2", none_of(&r.bad_counts));
    checks.record(
        &scope,
        "two-path targets match the extended shape family",
        none_of(&r.extended_mismatches),
    );
    if !r.literal_shapes_hold() {
        checks.note(
            &scope,
            &format!(
                "two-path targets outside the five listed shapes: {}",
                first_few(&r.literal_outliers)
            ),
        );
    }
    checks.record(
        &scope,
        "Morse boundary is zero or 2-full rank",
        verify_boundary_dichotomy(&d.morse),
    );
    let h = homology_z(qp).map_err(internal)?;
    morse_vs_direct(checks, &scope, &h, &d.morse);
    checks.record(
        &scope,
        "homology matches the closed form",
        expect_eq(&h, &expected_qp_homology(n)),
    );
    Ok(())
}

fn verify_linkage(checks: &mut Checks, guard: &ResourceGuard) -> Result<(), Failure> {
    let ell = LengthVector::from_integers(&[1, 1, 1, 1, 1]).map_err(internal)?;
    let full = build_moduli_complex(&ell, guard)?;
    let scope = "linkage 1,1,1,1,1";
    structural(checks, scope, &full);
    let h = homology_z(&full).map_err(internal)?;
    checks.record(
        scope,
        "homology",
        expect_eq(h.to_string(), "(Z; Z^8; Z)".to_string()),
    );
    checks.record(
        scope,
        "euler characteristic",
        expect_eq(full.euler_characteristic(), -6),
    );
    let red = build_reduced_moduli(&ell, guard)?;
    let scope = "reduced linkage 1,1,1,1,1";
    structural(checks, scope, &red);
    let h = homology_z(&red).map_err(internal)?;
    checks.record(
        scope,
        "homology",
        expect_eq(h.to_string(), "(Z; Z^4 + Z2; 0)".to_string()),
    );
    checks.record(
        scope,
        "euler characteristic",
        expect_eq(red.euler_characteristic(), -3),
    );
    Ok(())
}

fn verify(
    target: Target,
    max_n: Option<usize>,
    n: Option<usize>,
    seed: u64,
    guard: &ResourceGuard,
) -> Outcome {
    let range = match (n, max_n) {
        (Some(n), _) => n..=n,
        (None, Some(m)) => 3..=m,
        (None, None) => {
            return Outcome {
                code: 2,
                stdout: String::new(),
                stderr: "error: verify needs --n or --max-n\n".into(),
            }
        }
    };
    if range.is_empty() || *range.start() < 3 {
        return Outcome {
            code: 2,
            stdout: String::new(),
            stderr: "error: n must be at least 3\n".into(),
        };
    }
    let mut checks = Checks::default();
    let mut run_all = || -> Result<(), Failure> {
        for n in range.clone() {
            if matches!(target, Target::Cp | Target::All) {
                verify_cp(&mut checks, n, seed, guard)?;
            }
            if matches!(target, Target::Qp | Target::All) {
                verify_qp(&mut checks, n, guard)?;
            }
        }
        if target == Target::All {
            verify_linkage(&mut checks, guard)?;
        }
        Ok(())
    };
    if let Err(f) = run_all() {
        return Outcome {
            code: f.code(),
            stdout: checks.out,
            stderr: format!("error: {}\n", f.message()),
        };
    }
    let mut stdout = checks.out;
    let failed = checks.failed;
    let _ = writeln!(stdout, "{} failed", failed);
    Outcome {
        code: if failed == 0 { 0 } else { 1 },
        stdout,
        stderr: String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        let mut full = vec!["cyclo"];
        full.extend_from_slice(args);
        run(&RunConfig::try_parse_from(full).unwrap())
    }

    #[test]
    fn homology_text_and_csv() {
        let out = run_args(&["homology", "qp", "--n", "4"]);
        assert_eq!(out.stdout, "dim 0: Z\ndim 1: Z2^5\ndim 2: Z^6\n");
        let out = run_args(&["homology", "qp", "--n", "3", "--coeff", "z2"]);
        assert_eq!(out.stdout, "dim 0: Z2^1\ndim 1: Z2^4\n");
        let out = run_args(&["homology", "qp", "--n", "4", "--format", "csv"]);
        assert_eq!(
            out.stdout,
            "dim,betti,torsion,betti_mod2\n0,1,,1\n1,0,2 2 2 2 2,5\n2,6,,11\n"
        );
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["build", "cp", "--n", "9"]).code, 3);
        assert_eq!(run_args(&["build", "cp", "--n", "2"]).code, 2);
        assert_eq!(run_args(&["cell", "4|3,2|1"]).code, 2);
        assert_eq!(run_args(&["cell", "4|3,2|1", "--normalize"]).code, 0);
        assert_eq!(run_args(&["linkage", "--lengths", "1,1,1,1"]).code, 2);
        assert_eq!(run_args(&["verify", "cp"]).code, 2);
    }

    #[test]
    fn deterministic_json() {
        let a = run_args(&["build", "qp", "--n", "4", "--format", "json"]);
        let b = run_args(&["build", "qp", "--n", "4", "--format", "json"]);
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
        assert_eq!(v["dims"], json!([0, 1, 2]));
    }

    #[test]
    fn linkage_homology() {
        let out = run_args(&[
            "linkage",
            "--lengths",
            "1,1,1,1,1",
            "--reduced",
            "--homology",
        ]);
        assert_eq!(out.code, 0);
        assert!(
            out.stdout
                .ends_with("dim 0: Z\ndim 1: Z^4 + Z2\ndim 2: 0\n"),
            "{}",
            out.stdout
        );
    }

    #[test]
    fn verify_small() {
        let out = run_args(&["verify", "all", "--max-n", "4"]);
        assert_eq!(out.code, 0, "{}", out.stdout);
        assert!(out.stdout.contains("NOTE qp n=4"));
    }

    #[test]
    fn emit_paths_lines() {
        let out = run_args(&["morse", "cp", "--n", "3", "--emit-paths"]);
        let lines: Vec<serde_json::Value> = out
            .stdout
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(lines.len(), 7);
        assert!(lines
            .iter()
            .all(|l| l["count"] == 2 && l["coefficient"] == 0));
    }
}
