//! Command dispatch and the versioned JSON report.
//!
//! Exit codes: 0 for In / certified / success, 3 for Out (and for rejected
//! certificates or disconnection evidence), 4 for Unknown / NotFound / no
//! conclusion, 1 for errors.

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::character::Character;
use crate::dsl::Workspace;
use crate::engine::{sample_sphere, sigma1, sigma2, EngineError, Status};
use crate::group::{validate_finiteness, GroupError, GroupExpr};
use crate::lab::{
    ball, connectivity_evidence, find_renz_certificate, verify_renz_certificate, ConcreteGroup, LabError,
    RenzCertificate, SearchOutcome,
};
use crate::omega::{omega1, prop1_hypothesis, reidemeister_conclusions, Omega1Description, OmegaError};
use crate::rational::{fmt_qvec, parse_q};

pub const SCHEMA: &str = "sigma-report/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_OUT: i32 = 3;
pub const EXIT_UNKNOWN: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Sigma1,
    Sigma2,
    Omega1,
    Reid,
    Sample,
    BallEvidence,
    Certify,
    FindCert,
    Validate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Command {
    pub kind: CommandKind,
    pub group: String,
    /// Character name, or an inline vector such as `[1, -1/2]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character: Option<String>,
    pub radius: u32,
    pub margin: u32,
    pub resolution: u32,
    pub level: u8,
    pub max_t_len: usize,
    pub max_w_len: usize,
    /// Certificate JSON for `certify`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
}

impl Command {
    pub fn new(kind: CommandKind, group: &str) -> Self {
        Command {
            kind,
            group: group.to_string(),
            character: None,
            radius: crate::lab::DEFAULT_RADIUS,
            margin: crate::lab::DEFAULT_MARGIN,
            resolution: 3,
            level: 1,
            max_t_len: 3,
            max_w_len: 5,
            certificate: None,
        }
    }

    pub fn with_char(mut self, c: &str) -> Self {
        self.character = Some(c.to_string());
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error("unknown group {0}")]
    UnknownGroup(String),
    #[error("unknown character {0}")]
    UnknownCharacter(String),
    #[error("this command needs --char")]
    MissingCharacter,
    #[error("character {name} is defined on {on}, not on {group}")]
    WrongGroup { name: String, on: String, group: String },
    #[error("cannot parse inline character {0:?}")]
    BadInlineCharacter(String),
    #[error("this command needs --cert")]
    MissingCertificate,
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Lab(#[from] LabError),
    #[error(transparent)]
    Omega(#[from] OmegaError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: Command,
    pub outcome: String,
    pub exit_code: i32,
    pub result: Value,
    #[serde(skip)]
    pub text: String,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn status_exit(s: Status) -> i32 {
    match s {
        Status::In => EXIT_OK,
        Status::Out => EXIT_OUT,
        Status::Unknown => EXIT_UNKNOWN,
    }
}

fn parse_inline(s: &str) -> Option<Vec<crate::rational::Q>> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(parse_q).collect()
}

fn resolve_group<'w>(ws: &'w Workspace, cmd: &Command) -> Result<&'w crate::dsl::GroupDef, RunError> {
    ws.group(&cmd.group)
        .ok_or_else(|| RunError::UnknownGroup(cmd.group.clone()))
}

fn resolve_char(ws: &Workspace, cmd: &Command, expr: &GroupExpr) -> Result<Character, RunError> {
    let c = cmd.character.as_deref().ok_or(RunError::MissingCharacter)?;
    if c.trim_start().starts_with('[') {
        let coords = parse_inline(c).ok_or_else(|| RunError::BadInlineCharacter(c.to_string()))?;
        return Ok(crate::character::make_character(expr, coords).map_err(EngineError::from)?);
    }
    let def = ws
        .character(c)
        .ok_or_else(|| RunError::UnknownCharacter(c.to_string()))?;
    let same = def.group == cmd.group || ws.group(&def.group).is_some_and(|g| &g.expr == expr);
    if !same {
        return Err(RunError::WrongGroup {
            name: c.to_string(),
            on: def.group.clone(),
            group: cmd.group.clone(),
        });
    }
    Ok(def.character.clone())
}

fn concrete(def: &crate::dsl::GroupDef) -> Result<ConcreteGroup, LabError> {
    match &def.gens {
        Some(names) => {
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            ConcreteGroup::with_names(&def.expr, &names)
        }
        None => ConcreteGroup::new(&def.expr),
    }
}

pub fn run(cmd: &Command, ws: &Workspace) -> Result<Report, RunError> {
    let def = resolve_group(ws, cmd)?;
    let expr = &def.expr;
    let (outcome, exit_code, result, text): (String, i32, Value, String) = match cmd.kind {
        CommandKind::Sigma1 | CommandKind::Sigma2 => {
            let chi = resolve_char(ws, cmd, expr)?;
            let v = if cmd.kind == CommandKind::Sigma1 {
                sigma1(expr, &chi)?
            } else {
                sigma2(expr, &chi)?
            };
            (
                v.status.to_string().to_lowercase(),
                status_exit(v.status),
                json!({ "character": fmt_qvec(chi.coords()), "verdict": v }),
                v.render(),
            )
        }
        CommandKind::Validate => {
            expr.validate()?;
            let fin = validate_finiteness(expr)?;
            let ab = expr.abelianization();
            let text = format!(
                "fg: {}\nfp: {}\nabelianization free rank: {}{}\n{}",
                fin.fg,
                fin.fp,
                ab.free_rank,
                if ab.has_torsion { " (plus torsion)" } else { "" },
                fin.reasons.iter().map(|r| format!("  - {r}\n")).collect::<String>()
            );
            (
                "ok".into(),
                EXIT_OK,
                json!({ "fg": fin.fg, "fp": fin.fp, "reasons": fin.reasons, "abelianization": ab }),
                text,
            )
        }
        CommandKind::Sample => {
            let s = sample_sphere(expr, cmd.level, cmd.resolution)?;
            let mut text = format!(
                "Σ{} on S^{} at resolution {}: {} rays, {} in, {} out, {} unknown\n",
                if s.level == 1 { "¹" } else { "²" },
                s.dimension,
                s.resolution,
                s.sample_count,
                s.counts.inside,
                s.counts.out,
                s.counts.unknown
            );
            for sub in &s.subspheres {
                text.push_str(&format!(
                    "  {} (dim {}): {} in, {} out, {} unknown\n",
                    sub.description, sub.dimension, sub.counts.inside, sub.counts.out, sub.counts.unknown
                ));
            }
            for c in &s.complement {
                text.push_str(&format!("  {c}\n"));
            }
            (
                "ok".into(),
                EXIT_OK,
                serde_json::to_value(&s).expect("serializes"),
                text,
            )
        }
        CommandKind::Omega1 => {
            let d = omega1(expr)?;
            let (outcome, code, text) = match &d {
                Omega1Description::Certified {
                    region, cardinality, ..
                } => ("certified", EXIT_OK, format!("Ω¹ = {region}, {cardinality:?}\n")),
                Omega1Description::Unknown { .. } => ("unknown", EXIT_UNKNOWN, "Ω¹ not certified\n".into()),
            };
            (
                outcome.into(),
                code,
                serde_json::to_value(&d).expect("serializes"),
                text,
            )
        }
        CommandKind::Reid => {
            let hyp = prop1_hypothesis(expr)?;
            let cs = reidemeister_conclusions(expr)?;
            let mut text = String::new();
            for c in &cs {
                text.push_str(&format!("{:?}: {}\n  cites: {}\n", c.kind, c.statement, c.citation));
                for t in &c.trail {
                    text.push_str(&format!("    - {t}\n"));
                }
            }
            if cs.is_empty() {
                text.push_str("no conclusion\n");
            }
            let (outcome, code) = if cs.is_empty() {
                ("none", EXIT_UNKNOWN)
            } else {
                ("conclusions", EXIT_OK)
            };
            (
                outcome.into(),
                code,
                json!({ "hypothesis": hyp, "conclusions": cs }),
                text,
            )
        }
        CommandKind::BallEvidence => {
            let chi = resolve_char(ws, cmd, expr)?;
            let g = concrete(def)?;
            let b = ball(&g, cmd.radius)?;
            let ev = connectivity_evidence(&b, &chi, cmd.margin)?;
            let (outcome, code) = if ev.is_disconnection() {
                ("disconnection_witness", EXIT_OUT)
            } else {
                ("connected_up_to", EXIT_OK)
            };
            let text = format!(
                "ball of radius {}: {} vertices, {} directed edges\nevidence (not a proof): {ev:?}\n",
                b.radius(),
                b.vertex_count(),
                b.edge_count()
            );
            (
                outcome.into(),
                code,
                json!({
                    "character": fmt_qvec(chi.coords()),
                    "vertices": b.vertex_count(),
                    "edges": b.edge_count(),
                    "evidence": ev,
                    "note": "truncated-ball evidence; neither outcome is a proof",
                }),
                text,
            )
        }
        CommandKind::Certify => {
            let chi = resolve_char(ws, cmd, expr)?;
            let g = concrete(def)?;
            let raw = cmd.certificate.as_deref().ok_or(RunError::MissingCertificate)?;
            let cert = RenzCertificate::from_json(raw)?;
            let check = verify_renz_certificate(&g, &chi, &cert)?;
            let code = if check.valid { EXIT_OK } else { EXIT_OUT };
            let text = if check.valid {
                "certificate verified\n".to_string()
            } else {
                check
                    .failures
                    .iter()
                    .map(|f| {
                        format!(
                            "{:?} at {}: {}\n",
                            f.clause,
                            f.generator.as_deref().unwrap_or("t"),
                            f.detail
                        )
                    })
                    .collect()
            };
            (
                if check.valid { "valid" } else { "invalid" }.into(),
                code,
                json!({ "character": fmt_qvec(chi.coords()), "certificate": cert, "check": check }),
                text,
            )
        }
        CommandKind::FindCert => {
            let chi = resolve_char(ws, cmd, expr)?;
            let g = concrete(def)?;
            let found = find_renz_certificate(&g, &chi, cmd.max_t_len, cmd.max_w_len)?;
            match &found {
                SearchOutcome::Found { certificate } => {
                    let check = verify_renz_certificate(&g, &chi, certificate)?;
                    let mut text = format!("t = {} (as letter {})\n", certificate.t, certificate.t_letter);
                    for r in &certificate.rewrites {
                        text.push_str(&format!("  {} -> {}\n", r.x, r.w));
                    }
                    (
                        "found".into(),
                        EXIT_OK,
                        json!({ "character": fmt_qvec(chi.coords()), "search": found, "check": check }),
                        text,
                    )
                }
                SearchOutcome::NotFound { .. } => (
                    "not_found".into(),
                    EXIT_UNKNOWN,
                    json!({ "character": fmt_qvec(chi.coords()), "search": found }),
                    "no certificate within the bounds (inconclusive)\n".into(),
                ),
            }
        }
    };
    Ok(Report {
        schema: SCHEMA,
        tool_version: TOOL_VERSION,
        command: cmd.clone(),
        outcome,
        exit_code,
        result,
        text,
    })
}
