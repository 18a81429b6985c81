//! Certificate envelopes: a typed payload with its provenance and a SHA-256
//! hash over everything else, plus re-verification from the payload alone.

use std::fmt::Write as _;

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::coloring::{greedy_color, ColoringRecord};
use crate::comparison::{ComparisonCertificate, Witness};
use crate::crossed::IsometryCertificate;
use crate::error::{Error, Result};
use crate::prefix_set::PrefixSet;
use crate::towers::{TowerFamily, TowerReport, VerifyMode};
use crate::word::Word;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// JSON with object keys sorted and no whitespace.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string(&v)?)
}

/// Hex SHA-256 of the canonical JSON.
pub fn content_hash<T: Serialize>(value: &T) -> Result<String> {
    Ok(hex::encode(Sha256::digest(canonical_json(value)?.as_bytes())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Towers,
    Coloring,
    Comparison,
    Isometry,
    Witness,
}

/// A tower family with the verification it passed. `complements` is present
/// for strengthened towers: `G ∖ g_i·A_i` is the cone at the i-th word.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowersPayload {
    pub family: TowerFamily,
    pub report: TowerReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complements: Option<Vec<Word>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema_version: u32,
    pub kind: Kind,
    pub tool_version: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    pub payload: Value,
    pub hash: String,
}

#[derive(Serialize)]
struct Hashed<'a> {
    schema_version: u32,
    kind: Kind,
    tool_version: &'a str,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u64>,
    payload: &'a Value,
}

impl Envelope {
    pub fn new<T: Serialize>(kind: Kind, seed: u64, payload: &T, elapsed_ms: Option<u64>) -> Result<Envelope> {
        let payload = serde_json::to_value(payload)?;
        let mut env = Envelope { schema_version: SCHEMA_VERSION, kind, tool_version: TOOL_VERSION.into(), seed, elapsed_ms, payload, hash: String::new() };
        env.hash = env.compute_hash()?;
        Ok(env)
    }

    pub fn compute_hash(&self) -> Result<String> {
        content_hash(&Hashed {
            schema_version: self.schema_version,
            kind: self.kind,
            tool_version: &self.tool_version,
            seed: self.seed,
            elapsed_ms: self.elapsed_ms,
            payload: &self.payload,
        })
    }

    /// Pretty JSON with sorted keys, ending in a newline.
    pub fn to_json(&self) -> Result<String> {
        let v = serde_json::to_value(self)?;
        Ok(serde_json::to_string_pretty(&v)? + "\n")
    }

    pub fn parse(text: &str) -> Result<Envelope> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn payload<T: DeserializeOwned>(&self) -> Result<T> {
        Ok(serde_json::from_value(self.payload.clone())?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportLine {
    pub check: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub kind: Kind,
    pub lines: Vec<ReportLine>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    /// A plain-text table of the checks.
    pub fn render(&self) -> String {
        let width = self.lines.iter().map(|l| l.check.chars().count()).max().unwrap_or(5).max(5);
        let mut out = String::new();
        let _ = writeln!(out, "{:?} certificate", self.kind);
        let _ = writeln!(out, "{:<width$}  verdict", "check");
        for l in &self.lines {
            let pad = width - l.check.chars().count();
            let verdict = if l.pass { "pass" } else { "FAIL" };
            let _ = write!(out, "{}{}  {verdict}", l.check, " ".repeat(pad));
            if let Some(d) = &l.detail {
                let _ = write!(out, "  ({d})");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "overall: {}", if self.pass() { "pass" } else { "FAIL" });
        out
    }
}

struct Lines(Vec<ReportLine>);

impl Lines {
    fn push(&mut self, check: impl Into<String>, pass: bool, detail: Option<String>) {
        self.0.push(ReportLine { check: check.into(), pass, detail: if pass { None } else { detail } });
    }
}

fn mode_label(mode: &VerifyMode) -> String {
    match mode {
        VerifyMode::Exact => "exact".into(),
        VerifyMode::Ball { radius } => format!("ball radius {radius}"),
    }
}

fn verify_towers(p: &TowersPayload, lines: &mut Lines) {
    let mode = p.report.mode;
    let label = mode_label(&mode);
    match p.family.verify(mode) {
        Ok(r) => {
            lines.push(format!("translates disjoint [{label}]"), r.checks.disjoint.pass, r.checks.disjoint.counterexample.as_ref().map(|c| format!("{}: {}", c.element, c.detail)));
            lines.push(format!("translates cover [{label}]"), r.checks.cover.pass, r.checks.cover.counterexample.as_ref().map(|c| format!("{}: {}", c.element, c.detail)));
            lines.push("recorded verdicts match", r == p.report, Some("recorded report differs from the recomputed one".into()));
        }
        Err(e) => lines.push(format!("tower verification [{label}]"), false, Some(e.to_string())),
    }
    if let Some(comps) = &p.complements {
        lines.push("complements pairwise disjoint", strengthened_ok(&p.family, comps), Some("complement list does not match the towers".into()));
    }
}

fn strengthened_ok(family: &TowerFamily, comps: &[Word]) -> bool {
    if comps.len() != family.items.len() {
        return false;
    }
    let cones: Vec<PrefixSet> = comps.iter().map(|c| PrefixSet::cone(2, c)).collect();
    let matches = family.items.iter().zip(&cones).all(|(item, cone)| {
        match (item.set.normalize(2), item.g.as_word()) {
            (Ok(a), Some(g)) => a.translate(g).complement() == *cone,
            _ => false,
        }
    });
    let disjoint = (0..cones.len()).all(|i| (i + 1..cones.len()).all(|j| cones[i].is_disjoint(&cones[j])));
    matches && disjoint
}

fn verify_coloring(rec: &ColoringRecord, lines: &mut Lines) {
    let own = rec.verify();
    lines.push("coloring proper on the window", own.is_ok(), own.err());
    let fresh = greedy_color(rec.group, &rec.generators).map(|c| c.snapshot(rec.window));
    let same = matches!(&fresh, Ok(f) if f == rec);
    lines.push("coloring is the greedy one", same, Some("recomputed greedy coloring differs".into()));
}

fn verify_witness(w: &Witness, lines: &mut Lines) {
    let r = w.verify();
    lines.push("witness well formed", r.well_formed.pass, r.well_formed.counterexample);
    lines.push("pieces cover the sources", r.covers_sources.pass, r.covers_sources.counterexample);
    lines.push("images disjoint per copy", r.disjoint_images.pass, r.disjoint_images.counterexample);
    lines.push("images inside the targets", r.inside_targets.pass, r.inside_targets.counterexample);
}

/// Re-checks a certificate. Malformed envelopes and payloads are errors; a
/// well-formed certificate that fails any check gives a failing report. The
/// payload is only examined once the content hash matches.
pub fn verify_envelope(env: &Envelope) -> Result<VerifyReport> {
    if env.schema_version != SCHEMA_VERSION {
        return Err(Error::Invalid(format!("unsupported schema version {}", env.schema_version)));
    }
    let mut lines = Lines(Vec::new());
    let hash = env.compute_hash()?;
    lines.push("content hash", hash == env.hash, Some(format!("recorded {} but computed {hash}", env.hash)));
    if hash != env.hash {
        lines.push("payload checks", false, Some("skipped after the hash mismatch".into()));
        return Ok(VerifyReport { kind: env.kind, lines: lines.0 });
    }
    match env.kind {
        Kind::Towers => verify_towers(&env.payload()?, &mut lines),
        Kind::Coloring => verify_coloring(&env.payload()?, &mut lines),
        Kind::Witness => verify_witness(&env.payload()?, &mut lines),
        Kind::Comparison => {
            let cert: ComparisonCertificate = env.payload()?;
            for (name, v) in cert.verify() {
                lines.push(name, v.pass, v.counterexample);
            }
        }
        Kind::Isometry => {
            let cert: IsometryCertificate = env.payload()?;
            for c in cert.verify() {
                lines.push(c.name, c.pass, c.counterexample);
            }
        }
    }
    Ok(VerifyReport { kind: env.kind, lines: lines.0 })
}
