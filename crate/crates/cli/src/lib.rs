//! The `gbs` command line front end.
//!
//! Every subcommand builds an [`OutputDocument`]; `main` only chooses between
//! the JSON and the text rendering and maps errors to exit codes.
//!
//! Word syntax accepted by `check` and `reduce-word`:
//!
//! ```text
//! word   := factor ('*'? factor)*
//! factor := atom ('^' integer)?
//! atom   := NAME | '1' | '(' word ')' | '[' word ',' word ']'
//! ```
//!
//! `[u, v]` expands to `u⁻¹ v⁻¹ u v`.

use std::fmt::Write as _;
use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gbs_core::abelian::{
    relation_matrix, smith_normal_form, subgroup_matrix_invariants, AbelianInvariants, IntMatrix,
};
use gbs_core::arith::is_prime;
use gbs_core::center::{center_exponents, modulus_hom};
use gbs_core::gamma_omega::{gamma_is_commutator_subgroup, gamma_omega_tree, Mode};
use gbs_core::np_omega::{np_omega_tree, staged_adjacent_elements, Element};
use gbs_core::oracle::{annihilation_check, build_catalog, AnnihilationReport};
use gbs_core::reference::erratum_notes;
use gbs_core::tree_model::{normalize_signs_with_flips, standard_presentation, VertexId};
use gbs_core::words::{normal_form, parse_word};
use gbs_core::{parse_tree, GroupWord, LabeledTree};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const DEFAULT_MAX_ORDER: u64 = 27;

#[derive(Debug, Parser)]
#[command(name = "gbs", version, about = "Residual nilpotence of GBS tree groups")]
pub struct Cli {
    /// Emit a JSON document instead of text
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Center exponents and the modulus homomorphism
    Center(FileArg),
    /// Normal-closure generators of the ω-term of the lower central series
    GammaOmega {
        #[command(flatten)]
        input: FileArg,
        #[arg(long, value_enum, default_value_t = ModeArg::CenterOrder)]
        mode: ModeArg,
        /// Keep elements that are trivial in the group
        #[arg(long)]
        keep_trivial: bool,
    },
    /// Normal-closure generators of (N_p)_ω
    NpOmega {
        #[command(flatten)]
        input: FileArg,
        #[arg(long)]
        p: BigInt,
        /// Also list the first-stage power words of adjacent pairs
        #[arg(long)]
        staged: bool,
        #[arg(long)]
        keep_trivial: bool,
    },
    /// Invariant factors of the abelianization, optionally of a quotient
    Abelianization {
        #[command(flatten)]
        input: FileArg,
        #[arg(long, value_enum)]
        quotient: Option<QuotientArg>,
        /// Prime for `--quotient np`
        #[arg(long)]
        p: Option<BigInt>,
        #[arg(long, value_enum, default_value_t = ModeArg::CenterOrder)]
        mode: ModeArg,
    },
    /// Smith normal form of an integer matrix file
    Snf {
        #[command(flatten)]
        input: FileArg,
        /// Print U and V with U·A·V = S and verify them
        #[arg(long)]
        certify: bool,
    },
    /// Look for a finite nilpotent quotient in which an element survives
    Check {
        #[command(flatten)]
        input: FileArg,
        element: String,
        #[arg(long, value_enum, default_value_t = CheckMode::Gamma)]
        mode: CheckMode,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, env = "GBS_ORACLE_MAX_ORDER", default_value_t = DEFAULT_MAX_ORDER)]
        max_order: u64,
        /// Primes of the catalog in gamma mode (default: every prime up to the bound)
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        /// Exit with status 3 when a witness is found
        #[arg(long)]
        expect_member: bool,
    },
    /// Normal form of a word
    ReduceWord {
        #[command(flatten)]
        input: FileArg,
        word: String,
    },
}

#[derive(Debug, Args)]
pub struct FileArg {
    /// Input file, `-` for standard input
    pub file: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Path,
    CenterOrder,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Path => Mode::Path,
            ModeArg::CenterOrder => Mode::CenterOrder,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuotientArg {
    Gamma,
    Np,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckMode {
    Gamma,
    Np,
}

/// Bad input: exit status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

fn input_err(e: impl std::fmt::Display) -> InputError {
    InputError(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputDocument {
    pub command: String,
    /// SHA-256 of the raw input bytes, hex.
    pub input_digest: String,
    pub result: Value,
    pub warnings: Vec<String>,
}

impl OutputDocument {
    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("document serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }
}

/// A finished command: the document, its text rendering and the exit status.
#[derive(Debug, Clone)]
pub struct Report {
    pub document: OutputDocument,
    pub text: String,
    pub exit_code: i32,
}

impl Report {
    fn ok(document: OutputDocument, text: String) -> Self {
        Report { document, text, exit_code: 0 }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.document.to_json()
        } else {
            self.text.clone()
        }
    }
}

pub fn run(command: &Command) -> Result<Report, InputError> {
    match command {
        Command::Center(f) => {
            let input = TreeInput::load(&f.file)?;
            cmd_center(&input)
        }
        Command::GammaOmega { input, mode, keep_trivial } => {
            let input = TreeInput::load(&input.file)?;
            cmd_gamma_omega(&input, (*mode).into(), !keep_trivial)
        }
        Command::NpOmega { input, p, staged, keep_trivial } => {
            let input = TreeInput::load(&input.file)?;
            cmd_np_omega(&input, p, *staged, !keep_trivial)
        }
        Command::Abelianization { input, quotient, p, mode } => {
            let input = TreeInput::load(&input.file)?;
            let q = match (quotient, p) {
                (None, _) => None,
                (Some(QuotientArg::Gamma), _) => Some(Quotient::Gamma((*mode).into())),
                (Some(QuotientArg::Np), Some(p)) => Some(Quotient::Np(p.clone())),
                (Some(QuotientArg::Np), None) => return Err(InputError("--quotient np needs --p".into())),
            };
            cmd_abelianization(&input, q)
        }
        Command::Snf { input, certify } => {
            let bytes = read_bytes(&input.file)?;
            cmd_snf(&bytes, *certify)
        }
        Command::Check { input, element, mode, p, max_order, primes, expect_member } => {
            let input = TreeInput::load(&input.file)?;
            let target = match (mode, p) {
                (CheckMode::Np, Some(p)) => CheckTarget::Np(*p),
                (CheckMode::Np, None) => return Err(InputError("--mode np needs --p".into())),
                (CheckMode::Gamma, _) => CheckTarget::Gamma(primes.clone()),
            };
            cmd_check(&input, element, &target, *max_order, *expect_member)
        }
        Command::ReduceWord { input, word } => {
            let input = TreeInput::load(&input.file)?;
            cmd_reduce_word(&input, word)
        }
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, InputError> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(input_err)?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
    }
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn int(n: &BigInt) -> Value {
    Value::Number(n.to_string().parse().expect("integer literal is a JSON number"))
}

fn ints(ns: &[BigInt]) -> Value {
    Value::Array(ns.iter().map(int).collect())
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| ints(r)).collect())
}

fn invariants_json(inv: &AbelianInvariants) -> Value {
    json!({
        "free_rank": inv.free_rank,
        "group": inv.to_string(),
        "torsion": ints(&inv.torsion),
    })
}

/// A parsed, sign-normalized tree together with its raw bytes.
#[derive(Debug, Clone)]
pub struct TreeInput {
    pub tree: LabeledTree,
    pub digest: String,
    /// Vertices whose generator was replaced by its inverse during normalization.
    pub flipped: Vec<VertexId>,
    pub warnings: Vec<String>,
}

impl TreeInput {
    pub fn load(path: &Path) -> Result<Self, InputError> {
        let bytes = read_bytes(path)?;
        Self::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, InputError> {
        let text = std::str::from_utf8(bytes).map_err(|e| InputError(format!("input is not UTF-8: {e}")))?;
        let parsed = parse_tree(text).map_err(input_err)?;
        let mut warnings = Vec::new();
        let (tree, flipped) = if parsed.is_normalized() {
            (parsed, Vec::new())
        } else {
            let (t, flipped) = normalize_signs_with_flips(&parsed);
            let mut msg = "negative labels normalized by flipping edges".to_string();
            if !flipped.is_empty() {
                let names: Vec<&str> = flipped.iter().map(|&v| t.name(v)).collect();
                let _ = write!(msg, "; generators {} replaced by their inverses", names.join(", "));
            }
            warnings.push(msg);
            (t, flipped)
        };
        if tree.vertex_count() == 1 {
            warnings.push("single-vertex tree: the group is ℤ, so γ_ω and (N_p)_ω are trivial".to_string());
        }
        Ok(TreeInput { tree, digest: digest(bytes), flipped, warnings })
    }

    /// Parses a word over the input's generators and rewrites it in the
    /// normalized generators.
    pub fn word(&self, text: &str) -> Result<GroupWord, InputError> {
        let w = parse_word(text, self.tree.names()).map_err(input_err)?;
        if self.flipped.is_empty() {
            return Ok(w);
        }
        let syllables = w
            .syllables()
            .iter()
            .map(|(v, e)| (*v, if self.flipped.contains(v) { -e.clone() } else { e.clone() }))
            .collect();
        Ok(GroupWord::from_syllables(syllables))
    }

    fn document(&self, command: &str, result: Value, extra: Vec<String>) -> OutputDocument {
        let mut warnings = self.warnings.clone();
        warnings.extend(extra);
        OutputDocument { command: command.to_string(), input_digest: self.digest.clone(), result, warnings }
    }

    fn names(&self) -> &[String] {
        self.tree.names()
    }
}

fn push_warnings(text: &mut String, warnings: &[String]) {
    for w in warnings {
        let _ = writeln!(text, "warning: {w}");
    }
}

pub fn cmd_center(input: &TreeInput) -> Result<Report, InputError> {
    let t = &input.tree;
    let c = center_exponents(t).map_err(input_err)?;
    let m = modulus_hom(t).map_err(input_err)?;
    let names = input.names();
    let vertices: Vec<Value> = (0..names.len())
        .map(|i| json!({ "image": int(&m.images[i]), "name": names[i], "r": int(&c.exponents[i]) }))
        .collect();
    let edges: Vec<Value> = t
        .edges()
        .iter()
        .zip(&c.edge_multipliers)
        .map(|(e, n)| json!({ "multiplier": int(n), "u": t.name(e.u), "v": t.name(e.v) }))
        .collect();
    let result = json!({
        "degenerate": c.degenerate,
        "edges": edges,
        "modulus": int(&m.r),
        "vertices": vertices,
    });
    let doc = input.document("center", result, Vec::new());

    let pair = |xs: &[BigInt], sep: &str| {
        names.iter().zip(xs).map(|(n, x)| format!("{n}{sep}{x}")).collect::<Vec<_>>().join(" ")
    };
    let mut text = String::new();
    let _ = writeln!(text, "{}", pair(&c.exponents, ":"));
    let _ = writeln!(text, "modulus {}: {}", m.r, pair(&m.images, "↦"));
    push_warnings(&mut text, &doc.warnings);
    Ok(Report::ok(doc, text))
}

fn segment_labels(t: &LabeledTree) -> Option<(&BigInt, &BigInt)> {
    match t.edges() {
        [e] => Some((&e.label_u, &e.label_v)),
        _ => None,
    }
}

pub fn cmd_gamma_omega(input: &TreeInput, mode: Mode, filter: bool) -> Result<Report, InputError> {
    let t = &input.tree;
    let g = gamma_omega_tree(t, mode, filter).map_err(input_err)?;
    let names = input.names();
    let show = |c: &gbs_core::Commutator| c.display_with(names).to_string();

    let mut notes = Vec::new();
    if filter {
        notes.push(if g.elements.is_empty() { "residually nilpotent" } else { "not residually nilpotent" });
    }
    if let Some((k, l)) = segment_labels(t) {
        if gamma_is_commutator_subgroup(k, l) {
            notes.push("γ_ω = G′");
        }
    }
    let extra = if mode == Mode::Path { erratum_notes(t) } else { Vec::new() };
    let mode_name = match mode {
        Mode::Path => "path",
        Mode::CenterOrder => "center-order",
    };
    let pairs: Vec<Value> = g
        .pairs
        .iter()
        .map(|p| {
            json!({
                "elements": p.elements.iter().map(show).collect::<Vec<_>>(),
                "k": int(&p.k),
                "l": int(&p.l),
                "u": t.name(p.u),
                "v": t.name(p.v),
            })
        })
        .collect();
    let elements: Vec<String> = g.elements.iter().map(show).collect();
    let trivial: Vec<String> = g.trivial.iter().map(show).collect();
    let result = json!({
        "elements": elements,
        "filtered": filter,
        "mode": mode_name,
        "notes": notes,
        "pairs": pairs,
        "trivial": trivial,
    });
    let doc = input.document("gamma-omega", result, extra);

    let mut text = String::new();
    let _ = writeln!(text, "# γ_ω generators ({mode_name} mode): {}", elements.len());
    for e in &elements {
        let _ = writeln!(text, "{e}");
    }
    if !trivial.is_empty() {
        let _ = writeln!(text, "# dropped as trivial: {}", trivial.join(", "));
    }
    for n in &notes {
        let _ = writeln!(text, "# note: {n}");
    }
    push_warnings(&mut text, &doc.warnings);
    Ok(Report::ok(doc, text))
}

fn pair_label(t: &LabeledTree, u: VertexId, v: VertexId) -> String {
    format!("H_{}^{}", t.name(u), t.name(v))
}

pub fn cmd_np_omega(input: &TreeInput, p: &BigInt, staged: bool, filter: bool) -> Result<Report, InputError> {
    let t = &input.tree;
    if !is_prime(p) {
        return Err(InputError(format!("{p} is not prime")));
    }
    let r = np_omega_tree(t, p, filter).map_err(input_err)?;
    let names = input.names();
    let show = |e: &Element| e.display_with(names).to_string();

    let mut notes = Vec::new();
    if filter && r.elements.is_empty() {
        notes.push(format!("residually a finite {p}-group"));
    }
    let pairs: Vec<Value> = r
        .pairs
        .iter()
        .map(|q| {
            json!({
                "K": int(&q.k),
                "L": int(&q.l),
                "elements": q.elements.iter().map(show).collect::<Vec<_>>(),
                "label": pair_label(t, q.u, q.v),
                "u": t.name(q.u),
                "v": t.name(q.v),
            })
        })
        .collect();
    let elements: Vec<String> = r.elements.iter().map(show).collect();
    let trivial: Vec<String> = r.trivial.iter().map(show).collect();
    let mut result = json!({
        "elements": elements,
        "filtered": filter,
        "notes": notes,
        "p": int(p),
        "pairs": pairs,
        "trivial": trivial,
    });
    let stage: Option<Vec<String>> = if staged {
        Some(staged_adjacent_elements(t, p).map_err(input_err)?.iter().map(show).collect())
    } else {
        None
    };
    if let Some(s) = &stage {
        result["staged"] = json!(s);
    }
    let doc = input.document("np-omega", result, erratum_notes(t));

    let mut text = String::new();
    let _ = writeln!(text, "# (N_{p})_ω generators: {}", elements.len());
    let mut seen: Vec<&Element> = Vec::new();
    for q in &r.pairs {
        let _ = writeln!(text, "# {} (K, L) = ({}, {})", pair_label(t, q.u, q.v), q.k, q.l);
        for e in &q.elements {
            // the flat union lists each element once
            if seen.contains(&e) {
                let _ = writeln!(text, "#   repeated: {}", show(e));
            } else {
                seen.push(e);
                let _ = writeln!(text, "{}", show(e));
            }
        }
    }
    if let Some(s) = &stage {
        let _ = writeln!(text, "# stage 1 (adjacent pairs): {}", s.join(", "));
    }
    if !trivial.is_empty() {
        let _ = writeln!(text, "# dropped as trivial: {}", trivial.join(", "));
    }
    for n in &notes {
        let _ = writeln!(text, "# note: {n}");
    }
    push_warnings(&mut text, &doc.warnings);
    Ok(Report::ok(doc, text))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quotient {
    Gamma(Mode),
    Np(BigInt),
}

pub fn cmd_abelianization(input: &TreeInput, quotient: Option<Quotient>) -> Result<Report, InputError> {
    let t = &input.tree;
    let pres = standard_presentation(t);
    let mut words: Vec<GroupWord> = pres.relators.clone();
    let mut extra = Vec::new();
    let quotient_name = match &quotient {
        None => Value::Null,
        Some(Quotient::Gamma(mode)) => {
            let g = gamma_omega_tree(t, *mode, true).map_err(input_err)?;
            words.extend(g.elements.iter().map(|c| c.to_word()));
            if *mode == Mode::Path {
                extra = erratum_notes(t);
            }
            json!("gamma")
        }
        Some(Quotient::Np(p)) => {
            if !is_prime(p) {
                return Err(InputError(format!("{p} is not prime")));
            }
            let r = np_omega_tree(t, p, true).map_err(input_err)?;
            words.extend(r.elements.iter().map(|e| e.to_word()));
            extra = erratum_notes(t);
            json!(format!("np:{p}"))
        }
    };
    let n = t.vertex_count();
    let rows = words.iter().map(|w| w.exponent_sums(n)).collect();
    let m = IntMatrix::from_rows(rows, n).map_err(input_err)?;
    let inv = subgroup_matrix_invariants(&m);
    debug_assert!(quotient.is_some() || inv == subgroup_matrix_invariants(&relation_matrix(&pres)));
    let result = json!({
        "invariants": invariants_json(&inv),
        "quotient": quotient_name,
        "relation_matrix": matrix_json(&m),
    });
    let doc = input.document("abelianization", result, extra);
    let mut text = format!("{inv}\n");
    push_warnings(&mut text, &doc.warnings);
    Ok(Report::ok(doc, text))
}

pub fn cmd_snf(bytes: &[u8], certify: bool) -> Result<Report, InputError> {
    let text_in = std::str::from_utf8(bytes).map_err(|e| InputError(format!("input is not UTF-8: {e}")))?;
    let a = IntMatrix::parse(text_in).map_err(input_err)?;
    let d = smith_normal_form(&a);
    let mut result = Map::new();
    result.insert("diagonal".into(), ints(&d.diagonal()));
    result.insert("S".into(), matrix_json(&d.s));
    result.insert("invariants".into(), invariants_json(&AbelianInvariants::from_smith(&d)));
    let mut text = String::new();
    let diag: Vec<String> = d.diagonal().iter().map(|x| x.to_string()).collect();
    let _ = writeln!(text, "diagonal: {}", diag.join(" "));
    let _ = write!(text, "S:\n{}", d.s);
    if certify {
        let ok = d.certifies(&a);
        result.insert("U".into(), matrix_json(&d.u));
        result.insert("V".into(), matrix_json(&d.v));
        result.insert("certified".into(), json!(ok));
        let _ = write!(text, "U:\n{}V:\n{}", d.u, d.v);
        let _ = writeln!(text, "certificate U·A·V = S: {}", if ok { "verified" } else { "FAILED" });
    }
    let doc = OutputDocument {
        command: "snf".into(),
        input_digest: digest(bytes),
        result: Value::Object(result),
        warnings: Vec::new(),
    };
    Ok(Report::ok(doc, text))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckTarget {
    /// Nilpotent quotients; an empty list means every prime up to the bound.
    Gamma(Vec<u64>),
    Np(u64),
}

fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&q| is_prime(&BigInt::from(q))).collect()
}

pub fn cmd_check(
    input: &TreeInput,
    element: &str,
    target: &CheckTarget,
    max_order: u64,
    expect_member: bool,
) -> Result<Report, InputError> {
    let t = &input.tree;
    let word = input.word(element)?;
    let (mode, primes) = match target {
        CheckTarget::Gamma(ps) if ps.is_empty() => ("gamma", primes_up_to(max_order)),
        CheckTarget::Gamma(ps) => ("gamma", ps.clone()),
        CheckTarget::Np(p) => ("np", vec![*p]),
    };
    let catalog = build_catalog(max_order, &primes).map_err(input_err)?;
    let report: AnnihilationReport = annihilation_check(t, &word, &catalog);
    let names = input.names();
    let verdict = if report.annihilated {
        format!("no witness up to order {max_order}")
    } else {
        "witness found".to_string()
    };
    let witness = match &report.witness {
        None => Value::Null,
        Some(w) => {
            let images: Map<String, Value> =
                names.iter().zip(&w.hom.images).map(|(n, i)| (n.clone(), json!(i))).collect();
            json!({ "group": w.group, "image": w.image, "images": images })
        }
    };
    let result = json!({
        "annihilated": report.annihilated,
        "catalog_size": catalog.len(),
        "element": word.display_with(names).to_string(),
        "groups_checked": report.groups_checked,
        "max_order": max_order,
        "mode": mode,
        "primes": primes,
        "verdict": verdict,
        "witness": witness,
    });
    let doc = input.document("check", result, Vec::new());

    let mut text = format!("{verdict}\n");
    if let Some(w) = &report.witness {
        let images: Vec<String> = names.iter().zip(&w.hom.images).map(|(n, i)| format!("{n}↦{i}")).collect();
        let _ = writeln!(text, "group {}: {} (element ↦ {})", w.group, images.join(" "), w.image);
    }
    push_warnings(&mut text, &doc.warnings);
    let exit_code = if expect_member && !report.annihilated { 3 } else { 0 };
    Ok(Report { document: doc, text, exit_code })
}

pub fn cmd_reduce_word(input: &TreeInput, text_word: &str) -> Result<Report, InputError> {
    let t = &input.tree;
    let word = input.word(text_word)?;
    let nf = normal_form(t, &word).map_err(input_err)?;
    let names = input.names();
    let shown = nf.display_with(names).to_string();
    let result = json!({
        "input": word.display_with(names).to_string(),
        "normal_form": shown,
        "trivial": nf.is_empty(),
    });
    let doc = input.document("reduce-word", result, Vec::new());
    let mut text = format!("{shown}\n");
    push_warnings(&mut text, &doc.warnings);
    Ok(Report::ok(doc, text))
}
