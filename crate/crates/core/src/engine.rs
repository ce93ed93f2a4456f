//! Three-valued decision procedure for `[chi] ∈ Σ¹(Γ)` and `[chi] ∈ Σ²(Γ)`.
//!
//! The engine walks the expression tree and applies one rule per node. Every
//! rule application is recorded with the result it relies on, so a verdict can
//! be audited line by line. Boolean combinations use Kleene logic: a
//! sub-verdict of `Unknown` only matters when it could change the outcome.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::character::{make_character, wreath_support, Character, CharacterError, Ray, TClass};
use crate::group::{validate_finiteness, GroupError, GroupExpr, OrbitSize, Wreath};
use crate::rational::{q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("Σ² is only defined for finitely presented groups: {}", reasons.join("; "))]
    NotFinitelyPresented { reasons: Vec<String> },
    #[error("{path}: Σ² with chi|_M = 0 needs the diagonal orbit data on X^2 (pairs=...)")]
    MissingPairData { path: String },
    #[error("{path}: annotated atom asserts Σ² membership outside its Σ¹ region")]
    InconsistentOracle { path: String },
    #[error("the character sphere is empty (abelianization has free rank 0)")]
    EmptySphere,
    #[error("level must be 1 or 2, got {0}")]
    BadLevel(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    In,
    Out,
    Unknown,
}

impl Status {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Status::In
        } else {
            Status::Out
        }
    }

    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Out, _) | (_, Status::Out) => Status::Out,
            (Status::In, Status::In) => Status::In,
            _ => Status::Unknown,
        }
    }

    pub fn or(self, other: Status) -> Status {
        match (self, other) {
            (Status::In, _) | (_, Status::In) => Status::In,
            (Status::Out, Status::Out) => Status::Out,
            _ => Status::Unknown,
        }
    }

    pub fn all(items: impl IntoIterator<Item = Status>) -> Status {
        items.into_iter().fold(Status::In, Status::and)
    }

    pub fn any(items: impl IntoIterator<Item = Status>) -> Status {
        items.into_iter().fold(Status::Out, Status::or)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::In => "In",
            Status::Out => "Out",
            Status::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RuleId {
    /// Atoms, Σ¹.
    A1,
    /// Atoms, Σ².
    A2,
    /// Direct product, Σ¹.
    P1,
    /// Direct product, Σ².
    P2,
    /// Wreath, chi|_M = 0, Σ¹.
    W1,
    /// Wreath, chi|_M != 0, Σ¹.
    W2,
    /// Wreath, |T| >= 2, Σ².
    W3,
    /// Wreath, |T| = 1, Σ².
    #[serde(rename = "W3'")]
    W3Split,
    /// Wreath, chi|_M = 0, Σ².
    W4,
    /// Graph-wreath, Σ¹.
    GW1,
    /// Graph-wreath, Σ².
    GW2,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleId::W3Split => "W3'",
            other => return write!(f, "{other:?}"),
        };
        f.write_str(s)
    }
}

pub mod cite {
    pub const ABELIAN: &str =
        "Kochloukova, Theorem C with N = Γ abelian: {[χ] : χ(N) ≠ 0} ⊆ Σ^m(Γ), so Σ¹ and Σ² of ℤⁿ are the whole sphere";
    pub const FREE: &str = "engine axiom (standard BNS theory): Σ¹(F_k) = ∅ for k ≥ 2, hence Σ²(F_k) = ∅";
    pub const ORACLE: &str = "annotated atom: user-supplied membership region";
    pub const PRODUCT_1: &str =
        "Gehrke direct product formula: [χ] ∈ Σ¹(G₁ × G₂) iff χ_i ≠ 0 for i = 1,2, or [χ_i] ∈ Σ¹(G_i) for some i";
    pub const PRODUCT_2: &str = "Gehrke direct product formula: [χ] ∈ Σ²(G₁ × G₂) iff [χ₁] ∈ Σ¹(G₁) and χ₂ ≠ 0, or [χ₂] ∈ Σ¹(G₂) and χ₁ ≠ 0, or [χ_i] ∈ Σ²(G_i) for some i";
    pub const WREATH_TOP: &str =
        "wreath Σ¹, case χ|_M = 0: [χ] ∈ Σ¹(H ≀_X G) iff [χ|_G] ∈ Σ¹(G) and χ|_{G_x} ≠ 0 for all x ∈ X";
    pub const WREATH_MOVING: &str =
        "Renz criterion with t = ^g h: if χ|_{H_x} ≠ 0 for some x with G·x ≠ {x}, then [χ] ∈ Σ¹(H ≀_X G)";
    pub const WREATH_FIXED: &str = "wreath Σ¹, χ|_M ≠ 0 supported on fixed points (Γ ≅ ∏_{x∈T} H_x × (H ≀_{X∖T} G)): [χ] ∈ Σ¹ iff |T| ≥ 2, or χ|_G ≠ 0, or T = {x₁} and [χ|_{H_{x₁}}] ∈ Σ¹(H)";
    pub const GRAPH_TOP: &str =
        "graph-wreath Σ¹, case χ|_M = 0: [χ] ∈ Σ¹ iff [χ|_G] ∈ Σ¹(G) and χ|_{G_x} ≠ 0 for all x ∈ X";
    pub const GRAPH_GAP: &str = "no rule covers graph-wreath products beyond Σ¹ with χ|_M = 0";
    pub const WREATH_SIGMA2_T: &str =
        "wreath Σ², |T| ≥ 2: [χ] ∈ Σ² iff [χ|_{H_x}] ∈ Σ¹(H) for some x ∈ T, or χ|_G ≠ 0, or |T| ≥ 3";
    pub const WREATH_SIGMA2_SPLIT: &str =
        "wreath Σ², T = {x₁}: Γ ≅ H_{x₁} × (H ≀_{X∖{x₁}} G), then the Gehrke Σ² formula";
    pub const WREATH_SIGMA2_TOP: &str = "wreath Σ², case χ|_M = 0: sufficient if (1) [χ|_G] ∈ Σ²(G), (2) [χ|_{G_x}] ∈ Σ¹(G_x) for all x, (3) χ|_{G_(x,y)} ≠ 0 for all (x,y) ∈ X²";
    pub const RETRACT: &str = "Meinert retract theorem: G is a retract of Γ, so [χ] ∈ Σ²(Γ) forces [χ|_G] ∈ Σ²(G); condition (1) is necessary";
    pub const PAIR_NECESSITY: &str =
        "if χ|_M = 0 and χ|_{G_(x,y)} = 0 for some (x,y) ∈ X², then [χ] ∉ Σ²(Γ); condition (3) is necessary";
    pub const BCK_NECESSITY: &str =
        "Bartholdi–Cornulier–Kochloukova: when H^ab is infinite, condition (2) is necessary";
    pub const SIGMA2_GAP: &str = "open case: condition (2) fails while (1) and (3) hold and H^ab is finite; only sufficiency of (1)-(3) is known, necessity of (2) needs H^ab infinite";
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleApplication {
    pub rule: RuleId,
    pub node: String,
    pub citation: &'static str,
    pub detail: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub subverdicts: Vec<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub query: String,
    pub status: Status,
    pub trace: Vec<RuleApplication>,
}

impl Verdict {
    fn ruled(query: String, app: RuleApplication) -> Verdict {
        Verdict {
            query,
            status: app.status,
            trace: vec![app],
        }
    }

    /// Verdict for a sub-query whose character restricts to zero: the zero
    /// homomorphism is never a point of the sphere.
    fn zero(query: String) -> Verdict {
        Verdict {
            query,
            status: Status::Out,
            trace: Vec::new(),
        }
    }

    /// All rule identifiers in the trace tree, depth first.
    pub fn rules_applied(&self) -> Vec<RuleId> {
        let mut out = Vec::new();
        self.collect_rules(&mut out);
        out
    }

    fn collect_rules(&self, out: &mut Vec<RuleId>) {
        for app in &self.trace {
            out.push(app.rule);
            for sub in &app.subverdicts {
                sub.collect_rules(out);
            }
        }
    }

    /// All citations in the trace tree, depth first.
    pub fn citations(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        self.collect_citations(&mut out);
        out
    }

    fn collect_citations(&self, out: &mut Vec<&'static str>) {
        for app in &self.trace {
            out.push(app.citation);
            for sub in &app.subverdicts {
                sub.collect_citations(out);
            }
        }
    }

    /// Renders the trace as an indented outline.
    pub fn render(&self) -> String {
        let mut s = String::new();
        self.render_into(&mut s, 0);
        s
    }

    fn render_into(&self, s: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        s.push_str(&format!("{pad}{} => {}\n", self.query, self.status));
        for app in &self.trace {
            s.push_str(&format!(
                "{pad}  [{}] at {}: {}\n{pad}    cites: {}\n",
                app.rule, app.node, app.detail, app.citation
            ));
            for sub in &app.subverdicts {
                sub.render_into(s, depth + 2);
            }
        }
    }
}

fn query1(path: &str, chi: &Character) -> String {
    format!("Σ¹ at {path}, χ = {chi}")
}

fn query2(path: &str, chi: &Character) -> String {
    format!("Σ² at {path}, χ = {chi}")
}

fn check_query(expr: &GroupExpr, chi: &Character) -> Result<(), EngineError> {
    expr.validate()?;
    make_character(expr, chi.coords().to_vec())?;
    if chi.is_zero() {
        return Err(CharacterError::Zero.into());
    }
    Ok(())
}

pub fn sigma1(expr: &GroupExpr, chi: &Character) -> Result<Verdict, EngineError> {
    check_query(expr, chi)?;
    s1(expr, chi, "root")
}

pub fn sigma2(expr: &GroupExpr, chi: &Character) -> Result<Verdict, EngineError> {
    check_query(expr, chi)?;
    let fin = validate_finiteness(expr)?;
    if !fin.fp {
        return Err(EngineError::NotFinitelyPresented { reasons: fin.reasons });
    }
    s2(expr, chi, "root")
}

/// Σ¹ query on a sub-group with a possibly zero character.
fn s1_or_zero(expr: &GroupExpr, chi: &Character, path: &str) -> Result<Verdict, EngineError> {
    if chi.is_zero() {
        Ok(Verdict::zero(query1(path, chi)))
    } else {
        s1(expr, chi, path)
    }
}

fn s2_or_zero(expr: &GroupExpr, chi: &Character, path: &str) -> Result<Verdict, EngineError> {
    if chi.is_zero() {
        Ok(Verdict::zero(query2(path, chi)))
    } else {
        s2(expr, chi, path)
    }
}

fn s1(expr: &GroupExpr, chi: &Character, path: &str) -> Result<Verdict, EngineError> {
    let query = query1(path, chi);
    let app = match expr {
        GroupExpr::FreeAbelian(_) | GroupExpr::Free(1) => RuleApplication {
            rule: RuleId::A1,
            node: path.into(),
            citation: cite::ABELIAN,
            detail: "abelian atom, every nonzero character is in Σ¹".into(),
            status: Status::In,
            subverdicts: vec![],
        },
        GroupExpr::Free(k) => RuleApplication {
            rule: RuleId::A1,
            node: path.into(),
            citation: cite::FREE,
            detail: format!("free group of rank {k}"),
            status: Status::Out,
            subverdicts: vec![],
        },
        // Unreachable for nonzero characters: these atoms have rank 0.
        GroupExpr::Cyclic(_) => return Err(EngineError::EmptySphere),
        GroupExpr::Annotated(a) => {
            let status = match a.sigma1.contains(chi.coords()) {
                Some(b) => Status::from_bool(b),
                None => Status::Unknown,
            };
            RuleApplication {
                rule: RuleId::A1,
                node: path.into(),
                citation: cite::ORACLE,
                detail: "membership read from the Σ¹ region of the annotation".into(),
                status,
                subverdicts: vec![],
            }
        }
        GroupExpr::Product(factors) => product1(factors, chi, path)?,
        GroupExpr::Wreath(w) => {
            if chi.vanishes_on_base(w) {
                let (status, detail, subs) = top_supported_sigma1(w, chi, path, None)?;
                RuleApplication {
                    rule: RuleId::W1,
                    node: path.into(),
                    citation: cite::WREATH_TOP,
                    detail,
                    status,
                    subverdicts: subs,
                }
            } else {
                wreath_moving_sigma1(w, chi, path)?
            }
        }
        GroupExpr::GraphWreath(g) => {
            if chi.vanishes_on_base(&g.wreath) {
                let (status, detail, subs) = top_supported_sigma1(&g.wreath, chi, path, None)?;
                RuleApplication {
                    rule: RuleId::GW1,
                    node: path.into(),
                    citation: cite::GRAPH_TOP,
                    detail,
                    status,
                    subverdicts: subs,
                }
            } else {
                RuleApplication {
                    rule: RuleId::GW1,
                    node: path.into(),
                    citation: cite::GRAPH_GAP,
                    detail: "χ|_M ≠ 0 on a graph-wreath product".into(),
                    status: Status::Unknown,
                    subverdicts: vec![],
                }
            }
        }
    };
    Ok(Verdict::ruled(query, app))
}

fn split_factors(factors: &[GroupExpr], chi: &Character) -> Vec<Character> {
    let mut at = 0;
    factors
        .iter()
        .map(|f| {
            let n = f.free_rank();
            let part = Character::new(chi.coords()[at..at + n].to_vec());
            at += n;
            part
        })
        .collect()
}

fn nonzero_flags(parts: &[Character]) -> String {
    let flags: Vec<&str> = parts.iter().map(|p| if p.is_zero() { "0" } else { "≠0" }).collect();
    format!("factor restrictions: ({})", flags.join(", "))
}

fn product1(factors: &[GroupExpr], chi: &Character, path: &str) -> Result<RuleApplication, EngineError> {
    let parts = split_factors(factors, chi);
    let mut subs = Vec::new();
    // Left fold of the two-factor formula: (acc × G_i).
    let mut acc: Option<(bool, Status)> = None;
    for (i, (f, part)) in factors.iter().zip(&parts).enumerate() {
        let v = s1_or_zero(f, part, &format!("{path}.factor[{i}]"))?;
        let (nz, st) = (!part.is_zero(), v.status);
        if nz {
            subs.push(v);
        }
        acc = Some(match acc {
            None => (nz, st),
            Some((acc_nz, acc_st)) => (acc_nz || nz, Status::from_bool(acc_nz && nz).or(acc_st).or(st)),
        });
    }
    let (_, status) = acc.expect("validated products are nonempty");
    Ok(RuleApplication {
        rule: RuleId::P1,
        node: path.into(),
        citation: cite::PRODUCT_1,
        detail: nonzero_flags(&parts),
        status,
        subverdicts: subs,
    })
}

fn product2(factors: &[GroupExpr], chi: &Character, path: &str) -> Result<RuleApplication, EngineError> {
    let parts = split_factors(factors, chi);
    let mut subs = Vec::new();
    let mut acc: Option<(bool, Status, Status)> = None;
    for (i, (f, part)) in factors.iter().zip(&parts).enumerate() {
        let fpath = format!("{path}.factor[{i}]");
        let v1 = s1_or_zero(f, part, &fpath)?;
        let v2 = s2_or_zero(f, part, &fpath)?;
        let nz = !part.is_zero();
        let (st1, st2) = (v1.status, v2.status);
        if nz {
            subs.push(v1);
            subs.push(v2);
        }
        acc = Some(match acc {
            None => (nz, st1, st2),
            Some((a_nz, a1, a2)) => {
                let s1 = Status::from_bool(a_nz && nz).or(a1).or(st1);
                let s2 = a1
                    .and(Status::from_bool(nz))
                    .or(st1.and(Status::from_bool(a_nz)))
                    .or(a2)
                    .or(st2);
                (a_nz || nz, s1, s2)
            }
        });
    }
    let (_, _, status) = acc.expect("validated products are nonempty");
    Ok(RuleApplication {
        rule: RuleId::P2,
        node: path.into(),
        citation: cite::PRODUCT_2,
        detail: nonzero_flags(&parts),
        status,
        subverdicts: subs,
    })
}

/// `[chi|_G] ∈ Σ¹(G)` and `chi|_{G_x} != 0` for every orbit (optionally
/// skipping the orbits in `skip`, for the reduced wreath product).
fn top_supported_sigma1(
    w: &Wreath,
    chi: &Character,
    path: &str,
    skip: Option<&[usize]>,
) -> Result<(Status, String, Vec<Verdict>), EngineError> {
    let theta = chi.top_block(w);
    let top = s1_or_zero(&w.top, &theta, &format!("{path}.top"))?;
    let mut vanishing = Vec::new();
    for (i, o) in w.gset.orbits.iter().enumerate() {
        if skip.is_some_and(|s| s.contains(&i)) {
            continue;
        }
        if theta.restrict(&o.stabilizer.image)?.is_zero() {
            vanishing.push(o.label.clone());
        }
    }
    let stabs_ok = vanishing.is_empty();
    let detail = if stabs_ok {
        format!("χ|_G = {theta}; χ|_{{G_x}} ≠ 0 on every orbit")
    } else {
        format!("χ|_G = {theta}; χ|_{{G_x}} = 0 on orbit(s) {}", vanishing.join(", "))
    };
    let status = top.status.and(Status::from_bool(stabs_ok));
    Ok((status, detail, vec![top]))
}

fn wreath_moving_sigma1(w: &Wreath, chi: &Character, path: &str) -> Result<RuleApplication, EngineError> {
    let t = wreath_support(chi, w);
    if let Some(&i) = t.orbits_in_t.iter().find(|&&i| w.gset.orbits[i].size != OrbitSize::One) {
        let o = &w.gset.orbits[i];
        return Ok(RuleApplication {
            rule: RuleId::W2,
            node: path.into(),
            citation: cite::WREATH_MOVING,
            detail: format!(
                "χ|_{{H_x}} ≠ 0 on orbit {} of size {}, which is not a fixed point",
                o.label, o.size
            ),
            status: Status::In,
            subverdicts: vec![],
        });
    }
    let theta = chi.top_block(w);
    let mut subs = Vec::new();
    let status = if t.class.at_least_two() || !theta.is_zero() {
        Status::In
    } else {
        let x1 = t.orbits_in_t[0];
        let v = s1(
            &w.base,
            &chi.base_block(w, x1),
            &format!("{path}.base@{}", w.gset.orbits[x1].label),
        )?;
        let st = v.status;
        subs.push(v);
        st
    };
    Ok(RuleApplication {
        rule: RuleId::W2,
        node: path.into(),
        citation: cite::WREATH_FIXED,
        detail: format!(
            "T consists of fixed points, |T| class {:?}, χ|_G {}",
            t.class,
            if theta.is_zero() { "= 0" } else { "≠ 0" }
        ),
        status,
        subverdicts: subs,
    })
}

fn s2(expr: &GroupExpr, chi: &Character, path: &str) -> Result<Verdict, EngineError> {
    let query = query2(path, chi);
    let app = match expr {
        GroupExpr::FreeAbelian(_) | GroupExpr::Free(1) => RuleApplication {
            rule: RuleId::A2,
            node: path.into(),
            citation: cite::ABELIAN,
            detail: "abelian atom, every nonzero character is in Σ²".into(),
            status: Status::In,
            subverdicts: vec![],
        },
        GroupExpr::Free(k) => RuleApplication {
            rule: RuleId::A2,
            node: path.into(),
            citation: cite::FREE,
            detail: format!("free group of rank {k}; Σ² ⊆ Σ¹ = ∅"),
            status: Status::Out,
            subverdicts: vec![],
        },
        GroupExpr::Cyclic(_) => return Err(EngineError::EmptySphere),
        GroupExpr::Annotated(a) => {
            let status = match a.sigma2.contains(chi.coords()) {
                Some(b) => Status::from_bool(b),
                None => Status::Unknown,
            };
            if status == Status::In && a.sigma1.contains(chi.coords()) == Some(false) {
                return Err(EngineError::InconsistentOracle { path: path.into() });
            }
            RuleApplication {
                rule: RuleId::A2,
                node: path.into(),
                citation: cite::ORACLE,
                detail: "membership read from the Σ² region of the annotation".into(),
                status,
                subverdicts: vec![],
            }
        }
        GroupExpr::Product(factors) => product2(factors, chi, path)?,
        GroupExpr::Wreath(w) => {
            let t = wreath_support(chi, w);
            match t.class {
                TClass::Empty => wreath_top_sigma2(w, chi, path)?,
                TClass::One => wreath_split_sigma2(w, chi, path, t.orbits_in_t[0])?,
                _ => wreath_support_sigma2(w, chi, path, &t.orbits_in_t, t.class)?,
            }
        }
        GroupExpr::GraphWreath(_) => RuleApplication {
            rule: RuleId::GW2,
            node: path.into(),
            citation: cite::GRAPH_GAP,
            detail: "Σ² of graph-wreath products".into(),
            status: Status::Unknown,
            subverdicts: vec![],
        },
    };
    Ok(Verdict::ruled(query, app))
}

fn wreath_support_sigma2(
    w: &Wreath,
    chi: &Character,
    path: &str,
    orbits_in_t: &[usize],
    class: TClass,
) -> Result<RuleApplication, EngineError> {
    let theta = chi.top_block(w);
    let mut subs = Vec::new();
    let mut status = Status::from_bool(!theta.is_zero() || class.at_least_three());
    for &i in orbits_in_t {
        if status == Status::In {
            break;
        }
        let v = s1(
            &w.base,
            &chi.base_block(w, i),
            &format!("{path}.base@{}", w.gset.orbits[i].label),
        )?;
        status = status.or(v.status);
        subs.push(v);
    }
    Ok(RuleApplication {
        rule: RuleId::W3,
        node: path.into(),
        citation: cite::WREATH_SIGMA2_T,
        detail: format!(
            "|T| class {class:?}, χ|_G {}",
            if theta.is_zero() { "= 0" } else { "≠ 0" }
        ),
        status,
        subverdicts: subs,
    })
}

fn wreath_split_sigma2(w: &Wreath, chi: &Character, path: &str, x1: usize) -> Result<RuleApplication, EngineError> {
    // Γ ≅ H × Γ' with Γ' = H ≀_{X'} G and chi = (eta, chi'), chi' = (0, theta).
    // Gehrke: (S1(H) ∧ theta≠0) ∨ (S1(Γ') ∧ eta≠0) ∨ S2(H) ∨ S2(Γ'); eta ≠ 0 and
    // S2(Γ') ⊆ S1(Γ'), so the last clause is absorbed by the second.
    let eta = chi.base_block(w, x1);
    let theta = chi.top_block(w);
    let hpath = format!("{path}.base@{}", w.gset.orbits[x1].label);
    let h1 = s1(&w.base, &eta, &hpath)?;
    let h2 = s2(&w.base, &eta, &hpath)?;
    let theta_nz = !theta.is_zero();
    let (reduced, detail) = if theta_nz {
        let (st, detail, subs) = top_supported_sigma1(w, chi, &format!("{path}∖{{x1}}"), Some(&[x1]))?;
        (
            Verdict {
                query: query1(&format!("{path}∖{{x1}}"), &Character::new(chi.coords().to_vec())),
                status: st,
                trace: vec![RuleApplication {
                    rule: RuleId::W1,
                    node: format!("{path}∖{{x1}}"),
                    citation: cite::WREATH_TOP,
                    detail,
                    status: st,
                    subverdicts: subs,
                }],
            },
            "T = {x1}, χ|_G ≠ 0",
        )
    } else {
        (
            Verdict::zero(format!("Σ¹ at {path}∖{{x1}}, zero restriction")),
            "T = {x1}, χ|_G = 0",
        )
    };
    let status = h1
        .status
        .and(Status::from_bool(theta_nz))
        .or(reduced.status)
        .or(h2.status);
    Ok(RuleApplication {
        rule: RuleId::W3Split,
        node: path.into(),
        citation: cite::WREATH_SIGMA2_SPLIT,
        detail: detail.into(),
        status,
        subverdicts: vec![h1, h2, reduced],
    })
}

fn wreath_top_sigma2(w: &Wreath, chi: &Character, path: &str) -> Result<RuleApplication, EngineError> {
    let pairs = w
        .gset
        .pairs
        .as_ref()
        .ok_or_else(|| EngineError::MissingPairData { path: path.into() })?;
    let theta = chi.top_block(w);
    let mut subs = Vec::new();

    let c1 = s2(&w.top, &theta, &format!("{path}.top"))?;
    let c1_status = c1.status;
    subs.push(c1);

    let mut c2 = Status::In;
    for (i, o) in w.gset.orbits.iter().enumerate() {
        let r = theta.restrict(&o.stabilizer.image)?;
        let v = s1_or_zero(&o.stabilizer.group, &r, &format!("{path}.orbit[{i}].stab"))?;
        c2 = c2.and(v.status);
        subs.push(v);
    }

    let mut vanishing = Vec::new();
    for p in pairs {
        if theta.restrict(&p.image)?.is_zero() {
            vanishing.push(p.label.clone());
        }
    }
    let c3 = vanishing.is_empty();

    let conditions = format!(
        "(1) {c1_status}, (2) {c2}, (3) {}",
        if c3 {
            "χ|_{G_(x,y)} ≠ 0 on every pair orbit".to_string()
        } else {
            format!("χ|_{{G_(x,y)}} = 0 on {}", vanishing.join(", "))
        }
    );
    let (status, citation, why) = if c1_status == Status::Out {
        (Status::Out, cite::RETRACT, "condition (1) fails")
    } else if !c3 {
        (Status::Out, cite::PAIR_NECESSITY, "condition (3) fails")
    } else if c1_status == Status::In && c2 == Status::In {
        (Status::In, cite::WREATH_SIGMA2_TOP, "all sufficient conditions hold")
    } else if c2 == Status::Out {
        if w.base_rank() >= 1 {
            (
                Status::Out,
                cite::BCK_NECESSITY,
                "condition (2) fails and H^ab is infinite",
            )
        } else {
            (
                Status::Unknown,
                cite::SIGMA2_GAP,
                "condition (2) fails and H^ab is finite",
            )
        }
    } else {
        (Status::Unknown, cite::WREATH_SIGMA2_TOP, "a sub-verdict is undecided")
    };
    Ok(RuleApplication {
        rule: RuleId::W4,
        node: path.into(),
        citation,
        detail: format!("{why}: {conditions}"),
        status,
        subverdicts: subs,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StatusCounts {
    #[serde(rename = "in")]
    pub inside: usize,
    pub out: usize,
    pub unknown: usize,
}

impl StatusCounts {
    fn add(&mut self, s: Status) {
        match s {
            Status::In => self.inside += 1,
            Status::Out => self.out += 1,
            Status::Unknown => self.unknown += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.inside + self.out + self.unknown
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayStatus {
    pub ray: Ray,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subsphere {
    pub description: String,
    /// Dimension of the subsphere; `-1` when it is empty.
    pub dimension: i64,
    pub counts: StatusCounts,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereSummary {
    pub level: u8,
    pub dimension: usize,
    pub resolution: u32,
    pub sample_count: usize,
    pub counts: StatusCounts,
    pub subspheres: Vec<Subsphere>,
    /// Symbolic descriptions of the sampled complement, when it coincides
    /// with one of the subspheres above.
    pub complement: Vec<String>,
    pub rays: Vec<RayStatus>,
}

/// All rays through nonzero integer vectors of max-norm at most `resolution`,
/// in canonical order.
pub fn ray_grid(rank: usize, resolution: u32) -> Vec<Ray> {
    let r = resolution as i64;
    let mut rays = BTreeSet::new();
    let mut v = vec![-r; rank];
    if rank == 0 {
        return Vec::new();
    }
    loop {
        if v.iter().any(|&x| x != 0) {
            let chi = Character::new(v.iter().map(|&x| q(x)).collect());
            rays.insert(chi.ray().expect("nonzero"));
        }
        let mut k = 0;
        loop {
            if k == rank {
                return rays.into_iter().collect();
            }
            if v[k] < r {
                v[k] += 1;
                break;
            }
            v[k] = -r;
            k += 1;
        }
    }
}

type CoordTest = Box<dyn Fn(&[Q]) -> bool>;

pub fn sample_sphere(expr: &GroupExpr, level: u8, resolution: u32) -> Result<SphereSummary, EngineError> {
    if level != 1 && level != 2 {
        return Err(EngineError::BadLevel(level));
    }
    expr.validate()?;
    let rank = expr.free_rank();
    if rank == 0 {
        return Err(EngineError::EmptySphere);
    }
    if level == 2 {
        let fin = validate_finiteness(expr)?;
        if !fin.fp {
            return Err(EngineError::NotFinitelyPresented { reasons: fin.reasons });
        }
    }
    let rays = ray_grid(rank, resolution);
    let results: Result<Vec<RayStatus>, EngineError> = rays
        .into_par_iter()
        .map(|ray| {
            let chi = ray.character();
            let v = if level == 1 {
                sigma1(expr, &chi)?
            } else {
                sigma2(expr, &chi)?
            };
            Ok(RayStatus { ray, status: v.status })
        })
        .collect();
    let rays = results?;
    let mut counts = StatusCounts::default();
    for r in &rays {
        counts.add(r.status);
    }

    let mut subspheres = Vec::new();
    let mut complement = Vec::new();
    let wreath = match expr {
        GroupExpr::Wreath(w) => Some(&**w),
        GroupExpr::GraphWreath(g) => Some(&g.wreath),
        _ => None,
    };
    if let Some(w) = wreath {
        let top = w.top_block();
        let classes: [(&str, CoordTest, usize); 2] = [
            (
                "χ|_M = 0",
                Box::new(move |c: &[Q]| c[..top.start].iter().all(|x| *x == q(0))),
                w.top_rank(),
            ),
            (
                "χ|_G = 0",
                Box::new({
                    let top = w.top_block();
                    move |c: &[Q]| c[top.clone()].iter().all(|x| *x == q(0))
                }),
                w.gset.orbits.len() * w.base_rank(),
            ),
        ];
        for (desc, member, dim) in classes {
            let mut sub = StatusCounts::default();
            for r in rays.iter().filter(|r| member(r.ray.coords())) {
                sub.add(r.status);
            }
            let off_sub_all_in = rays
                .iter()
                .filter(|r| !member(r.ray.coords()))
                .all(|r| r.status == Status::In);
            if sub.total() > 0 && sub.inside == 0 && sub.unknown == 0 && off_sub_all_in {
                complement.push(format!(
                    "sampled complement is exactly the subsphere {{{desc}}} ({} rays)",
                    sub.total()
                ));
            }
            subspheres.push(Subsphere {
                description: format!("{{[χ] : {desc}}}"),
                dimension: dim as i64 - 1,
                counts: sub,
            });
        }
    }
    Ok(SphereSummary {
        level,
        dimension: rank - 1,
        resolution,
        sample_count: rays.len(),
        counts,
        subspheres,
        complement,
        rays,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{regular_wreath, GSetSpec, OrbitRecord};
    use crate::rational::{qvec, RatMatrix};

    fn zwrz() -> GroupExpr {
        regular_wreath(GroupExpr::FreeAbelian(1), GroupExpr::FreeAbelian(1))
    }

    fn lamplighter() -> GroupExpr {
        regular_wreath(GroupExpr::Cyclic(2), GroupExpr::FreeAbelian(1))
    }

    fn chi(v: &[i64]) -> Character {
        Character::new(qvec(v))
    }

    #[test]
    fn kleene_tables() {
        use Status::*;
        assert_eq!(In.and(Unknown), Unknown);
        assert_eq!(Out.and(Unknown), Out);
        assert_eq!(In.or(Unknown), In);
        assert_eq!(Out.or(Unknown), Unknown);
        assert_eq!(Status::all([]), In);
        assert_eq!(Status::any([]), Out);
    }

    #[test]
    fn sigma1_examples() {
        let v = sigma1(&lamplighter(), &chi(&[1])).unwrap();
        assert_eq!(v.status, Status::Out);
        assert_eq!(v.trace[0].rule, RuleId::W1);
        assert_eq!(sigma1(&lamplighter(), &chi(&[-1])).unwrap().status, Status::Out);

        let v = sigma1(&zwrz(), &chi(&[1, 0])).unwrap();
        assert_eq!(v.status, Status::In);
        assert_eq!(v.trace[0].citation, cite::WREATH_MOVING);

        let f2f2 = GroupExpr::Product(vec![GroupExpr::Free(2), GroupExpr::Free(2)]);
        assert_eq!(sigma1(&f2f2, &chi(&[1, 0, 1, 0])).unwrap().status, Status::In);
        assert_eq!(sigma1(&f2f2, &chi(&[1, 0, 0, 0])).unwrap().status, Status::Out);
    }

    #[test]
    fn sigma2_examples() {
        let v = sigma2(&zwrz(), &chi(&[1, 0])).unwrap();
        assert_eq!(v.status, Status::In);
        assert_eq!(v.trace[0].rule, RuleId::W3);

        let v = sigma2(&zwrz(), &chi(&[0, 1])).unwrap();
        assert_eq!(v.status, Status::Out);
        assert_eq!(v.trace[0].citation, cite::PAIR_NECESSITY);

        let f2z = GroupExpr::Product(vec![GroupExpr::Free(2), GroupExpr::FreeAbelian(1)]);
        assert_eq!(sigma2(&f2z, &chi(&[1, 0, 1])).unwrap().status, Status::In);
        assert_eq!(sigma2(&f2z, &chi(&[1, 0, 0])).unwrap().status, Status::Out);
    }

    fn tristate(base: GroupExpr) -> GroupExpr {
        let top = GroupExpr::Product(vec![GroupExpr::Free(2), GroupExpr::FreeAbelian(1)]);
        let image = RatMatrix::from_int_rows(&[&[1, 0], &[0, 1], &[0, 0]]);
        let mut orbit = OrbitRecord::free("x", OrbitSize::Infinite, 3);
        orbit.stabilizer.group = GroupExpr::Free(2);
        orbit.stabilizer.image = image.clone();
        let off = crate::group::PairOrbitRecord::off_diagonal("offdiag", image);
        GroupExpr::wreath(base, top, GSetSpec::new(vec![orbit], Some(vec![off])))
    }

    #[test]
    fn open_case_is_unknown_only_for_finite_base_abelianization() {
        let v = sigma2(&tristate(GroupExpr::Cyclic(2)), &chi(&[1, 0, 1])).unwrap();
        assert_eq!(v.status, Status::Unknown);
        assert_eq!(v.trace[0].citation, cite::SIGMA2_GAP);
        let v = sigma2(&tristate(GroupExpr::FreeAbelian(1)), &chi(&[0, 1, 0, 1])).unwrap();
        assert_eq!(v.status, Status::Out);
        assert_eq!(v.trace[0].citation, cite::BCK_NECESSITY);
    }

    #[test]
    fn fixed_point_support() {
        let top = GroupExpr::FreeAbelian(1);
        let two = GroupExpr::wreath(
            GroupExpr::Free(2),
            top.clone(),
            GSetSpec::new(
                vec![OrbitRecord::fixed("p", &top), OrbitRecord::fixed("q", &top)],
                Some(vec![]),
            ),
        );
        // |T| = 2 -> Σ¹ In; Σ² needs Σ¹(F2) (no), θ ≠ 0 (no) or |T| ≥ 3 (no).
        let c = chi(&[1, 0, 1, 0, 0]);
        assert_eq!(sigma1(&two, &c).unwrap().status, Status::In);
        assert_eq!(sigma2(&two, &c).unwrap().status, Status::Out);
        // T = {p}, θ = 0 and Σ¹(F2) = ∅ -> Out.
        let c = chi(&[1, 0, 0, 0, 0]);
        assert_eq!(sigma1(&two, &c).unwrap().status, Status::Out);
        // T = {p}, θ ≠ 0: Σ¹ In; Σ² via the split needs Σ¹ of the rest.
        let c = chi(&[1, 0, 0, 0, 1]);
        assert_eq!(sigma1(&two, &c).unwrap().status, Status::In);
        let v = sigma2(&two, &c).unwrap();
        assert_eq!(v.trace[0].rule, RuleId::W3Split);
        assert_eq!(v.status, Status::In);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            sigma1(&zwrz(), &chi(&[0, 0])),
            Err(EngineError::Character(CharacterError::Zero))
        ));
        assert!(matches!(
            sigma1(&zwrz(), &chi(&[1])),
            Err(EngineError::Character(CharacterError::LengthMismatch { .. }))
        ));
        let top = GroupExpr::FreeAbelian(1);
        let no_pairs = GroupExpr::wreath(
            GroupExpr::FreeAbelian(1),
            top.clone(),
            GSetSpec::new(vec![OrbitRecord::free("x", OrbitSize::Infinite, 1)], None),
        );
        assert!(matches!(
            sigma2(&no_pairs, &chi(&[0, 1])),
            Err(EngineError::NotFinitelyPresented { .. })
        ));
    }

    #[test]
    fn grid_counts() {
        // Primitive vectors in [-2, 2]^2: 24 - 8 non-primitive = 16.
        assert_eq!(ray_grid(2, 2).len(), 16);
        assert_eq!(ray_grid(1, 5).len(), 2);
    }

    #[test]
    fn zwrz_sphere() {
        let s = sample_sphere(&zwrz(), 1, 2).unwrap();
        assert_eq!(s.counts.out, 2);
        assert_eq!(s.counts.total(), s.sample_count);
        for r in &s.rays {
            let eta_zero = r.ray.coords()[0] == q(0);
            assert_eq!(r.status == Status::Out, eta_zero);
        }
        assert_eq!(s.complement.len(), 1);
        let s = sample_sphere(&GroupExpr::Free(2), 1, 3).unwrap();
        assert_eq!(s.counts.out, s.sample_count);
        let s = sample_sphere(&GroupExpr::FreeAbelian(2), 1, 3).unwrap();
        assert_eq!(s.counts.inside, s.sample_count);
    }
}
