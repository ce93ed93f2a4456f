//! Koban's Ω¹ for wreath products whose Σ¹ is exactly `{χ|_M ≠ 0}`, and the
//! twisted-conjugacy consequences.

use serde::Serialize;
use thiserror::Error;

use crate::group::{validate_finiteness, GroupError, GroupExpr, OrbitSize, Wreath};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OmegaError {
    #[error("Ω¹ is computed for wreath products only")]
    NotWreath,
    #[error("the group is not finitely generated: {}", reasons.join("; "))]
    NotFinitelyGenerated { reasons: Vec<String> },
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub mod cite {
    pub const SIGMA1_SHAPE: &str = "wreath Σ¹: with χ|_M = 0, [χ] ∈ Σ¹ needs χ|_{G_x} ≠ 0 for all x; Renz criterion: χ|_{H_x} ≠ 0 on a non-singleton orbit gives [χ] ∈ Σ¹";
    pub const OMEGA_DEF: &str = "Koban: Ω¹(Γ) is the set of [χ] whose open hemisphere-neighbourhood lies in Σ¹(Γ); with Σ¹ = {χ|_M ≠ 0} this is {[χ] : χ|_G = 0}";
    pub const KOBAN_WONG: &str = "Koban–Wong: if Ω¹(Γ) is finite, nonempty and consists of discrete characters, then a subgroup of index at most 2 in Aut(Γ) consists of automorphisms with R(φ) = ∞; for Ω¹ = {[ν], [−ν]} the index is exactly 2";
    pub const GONCALVES_KOCHLOUKOVA: &str = "Gonçalves–Kochloukova: if Σ¹(Γ)^c is finite, nonempty and consists of discrete characters, then a finite-index subgroup of Aut(Γ) consists of automorphisms with R(φ) = ∞";
    pub const KOBAN_WONG_POINT: &str = "Koban–Wong: if Ω¹(Γ) is a single point, Γ has property R∞";
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Hypothesis {
    Certified { reasons: Vec<String> },
    Unknown { reasons: Vec<String> },
}

impl Hypothesis {
    pub fn is_certified(&self) -> bool {
        matches!(self, Hypothesis::Certified { .. })
    }

    pub fn reasons(&self) -> &[String] {
        match self {
            Hypothesis::Certified { reasons } | Hypothesis::Unknown { reasons } => reasons,
        }
    }
}

fn wreath_of(expr: &GroupExpr) -> Result<&Wreath, OmegaError> {
    let w = expr.as_wreath().ok_or(OmegaError::NotWreath)?;
    expr.validate()?;
    let fin = validate_finiteness(expr)?;
    if !fin.fg {
        return Err(OmegaError::NotFinitelyGenerated { reasons: fin.reasons });
    }
    Ok(w)
}

/// Structural certificate that Σ¹(G) = ∅ (never guessed from sampling).
fn sigma1_certified_empty(g: &GroupExpr) -> Option<String> {
    match g {
        GroupExpr::Free(k) if *k >= 2 => Some(format!("Σ¹(F_{k}) = ∅")),
        GroupExpr::Cyclic(_) => Some("the group has no nonzero characters".into()),
        t if t.free_rank() == 0 => Some("the group has no nonzero characters".into()),
        GroupExpr::Annotated(a) if a.sigma1.is_empty_set() => Some("annotation asserts Σ¹ = ∅".into()),
        GroupExpr::Product(fs) => {
            let ranked: Vec<&GroupExpr> = fs.iter().filter(|f| f.free_rank() > 0).collect();
            match ranked.as_slice() {
                [only] => sigma1_certified_empty(only).map(|r| format!("single factor with characters: {r}")),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Checks the sufficient conditions for `Σ¹(Γ) = {[χ] : χ|_M ≠ 0}`: no
/// singleton orbit, and for some orbit either `(G_x)^ab` finite or no
/// character of Σ¹(G) is nonzero on `G_x`.
pub fn prop1_hypothesis(expr: &GroupExpr) -> Result<Hypothesis, OmegaError> {
    let w = wreath_of(expr)?;
    let mut reasons = Vec::new();
    if let Some(o) = w.gset.orbits.iter().find(|o| o.size == OrbitSize::One) {
        reasons.push(format!("orbit {} is a single point", o.label));
        return Ok(Hypothesis::Unknown { reasons });
    }
    reasons.push("no orbit is a single point".into());
    for o in &w.gset.orbits {
        let s = &o.stabilizer;
        if s.finitely_generated && s.group.free_rank() == 0 {
            reasons.push(format!("orbit {}: (G_x)^ab is finite", o.label));
            return Ok(Hypothesis::Certified { reasons });
        }
        if s.image.is_zero() {
            reasons.push(format!("orbit {}: χ|_{{G_x}} = 0 for every χ", o.label));
            return Ok(Hypothesis::Certified { reasons });
        }
        if let Some(why) = sigma1_certified_empty(&w.top) {
            reasons.push(format!("orbit {}: Σ¹(G) is empty ({why})", o.label));
            return Ok(Hypothesis::Certified { reasons });
        }
    }
    reasons.push("no orbit satisfies a certified sufficient condition".into());
    Ok(Hypothesis::Unknown { reasons })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Cardinality {
    Empty,
    TwoPoints,
    PositiveDimensional { dimension: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Omega1Description {
    Certified {
        region: String,
        cardinality: Cardinality,
        hypothesis: Vec<String>,
        citation: &'static str,
    },
    Unknown {
        hypothesis: Vec<String>,
    },
}

pub fn omega1(expr: &GroupExpr) -> Result<Omega1Description, OmegaError> {
    let w = wreath_of(expr)?;
    Ok(match prop1_hypothesis(expr)? {
        Hypothesis::Certified { reasons } => {
            let m = w.gset.orbits.len() * w.base_rank();
            let cardinality = match m {
                0 => Cardinality::Empty,
                1 => Cardinality::TwoPoints,
                _ => Cardinality::PositiveDimensional { dimension: m - 1 },
            };
            Omega1Description::Certified {
                region: "{[χ] : χ|_G = 0}".into(),
                cardinality,
                hypothesis: reasons,
                citation: cite::OMEGA_DEF,
            }
        }
        Hypothesis::Unknown { reasons } => Omega1Description::Unknown { hypothesis: reasons },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReidKind {
    IndexTwoSubgroupRInfinity,
    FiniteIndexSubgroupRInfinity,
    FullRInfinity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReidConclusion {
    pub kind: ReidKind,
    pub statement: String,
    pub citation: &'static str,
    pub trail: Vec<String>,
}

const DISCRETE: &str = "all characters in the model are rational, hence discrete";

pub fn reidemeister_conclusions(expr: &GroupExpr) -> Result<Vec<ReidConclusion>, OmegaError> {
    let w = wreath_of(expr)?;
    let hyp = prop1_hypothesis(expr)?;
    let mut out = Vec::new();
    let Hypothesis::Certified { reasons } = hyp else {
        return Ok(out);
    };
    let mut base_trail = reasons.clone();
    base_trail.push(format!("Σ¹(Γ) = {{[χ] : χ|_M ≠ 0}} ({})", cite::SIGMA1_SHAPE));

    let omega = omega1(expr)?;
    let Omega1Description::Certified { cardinality, .. } = omega else {
        return Ok(out);
    };
    if w.gset.transitive() && w.base_rank() == 1 {
        debug_assert_eq!(cardinality, Cardinality::TwoPoints);
        let mut trail = base_trail.clone();
        trail.push("transitive action and rank(H^ab) = 1".into());
        trail.push("Ω¹(Γ) = {[χ] : χ|_G = 0} = {[ν], [−ν]}".into());
        trail.push(DISCRETE.into());
        out.push(ReidConclusion {
            kind: ReidKind::IndexTwoSubgroupRInfinity,
            statement: "Aut(Γ) has a subgroup N of index 2 with R(φ) = ∞ for every φ ∈ N".into(),
            citation: cite::KOBAN_WONG,
            trail,
        });
    }
    if w.top_rank() == 1 {
        let mut trail = base_trail.clone();
        trail.push("rank(G^ab) = 1".into());
        trail.push("Σ¹(Γ)^c = {[χ] : χ|_M = 0} = {[θ], [−θ]}".into());
        trail.push(DISCRETE.into());
        out.push(ReidConclusion {
            kind: ReidKind::FiniteIndexSubgroupRInfinity,
            statement: "Aut(Γ) has a finite-index subgroup N with R(φ) = ∞ for every φ ∈ N".into(),
            citation: cite::GONCALVES_KOCHLOUKOVA,
            trail,
        });
    }
    // Ω¹ = {χ|_G = 0} is a subsphere, closed under χ ↦ −χ, so it is never a
    // single point and the full R∞ conclusion cannot be reached this way.
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{regular_wreath, GSetSpec, OrbitRecord};

    #[test]
    fn catalog_examples() {
        let zwrz = regular_wreath(GroupExpr::FreeAbelian(1), GroupExpr::FreeAbelian(1));
        let Omega1Description::Certified { cardinality, .. } = omega1(&zwrz).unwrap() else {
            panic!()
        };
        assert_eq!(cardinality, Cardinality::TwoPoints);
        let kinds: Vec<ReidKind> = reidemeister_conclusions(&zwrz)
            .unwrap()
            .iter()
            .map(|c| c.kind)
            .collect();
        assert_eq!(
            kinds,
            vec![
                ReidKind::IndexTwoSubgroupRInfinity,
                ReidKind::FiniteIndexSubgroupRInfinity
            ]
        );

        let lamp = regular_wreath(GroupExpr::Cyclic(2), GroupExpr::FreeAbelian(1));
        let Omega1Description::Certified { cardinality, .. } = omega1(&lamp).unwrap() else {
            panic!()
        };
        assert_eq!(cardinality, Cardinality::Empty);
        let kinds: Vec<ReidKind> = reidemeister_conclusions(&lamp)
            .unwrap()
            .iter()
            .map(|c| c.kind)
            .collect();
        assert_eq!(kinds, vec![ReidKind::FiniteIndexSubgroupRInfinity]);

        let z2wrz = regular_wreath(GroupExpr::FreeAbelian(2), GroupExpr::FreeAbelian(1));
        let Omega1Description::Certified { cardinality, .. } = omega1(&z2wrz).unwrap() else {
            panic!()
        };
        assert_eq!(cardinality, Cardinality::PositiveDimensional { dimension: 1 });

        let f2c3 = regular_wreath(GroupExpr::Free(2), GroupExpr::Cyclic(3));
        assert!(reidemeister_conclusions(&f2c3).unwrap().is_empty());
    }

    #[test]
    fn singleton_orbit_blocks_the_hypothesis() {
        let top = GroupExpr::FreeAbelian(1);
        let w = GroupExpr::wreath(
            GroupExpr::FreeAbelian(1),
            top.clone(),
            GSetSpec::new(vec![OrbitRecord::fixed("p", &top)], None),
        );
        assert!(!prop1_hypothesis(&w).unwrap().is_certified());
        assert!(matches!(omega1(&w).unwrap(), Omega1Description::Unknown { .. }));
        assert!(reidemeister_conclusions(&w).unwrap().is_empty());
        assert_eq!(omega1(&GroupExpr::Free(2)), Err(OmegaError::NotWreath));
    }
}
