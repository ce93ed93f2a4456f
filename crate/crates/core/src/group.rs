//! Group expressions: atoms, direct products and permutational (graph-)wreath
//! products together with the G-set data that the decision rules consume.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::rational::{dot, fmt_qvec, sign, RatMatrix, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("{path}: wreath product needs at least one orbit")]
    EmptyOrbits { path: String },
    #[error("{path}: wreath product base must be a nontrivial group")]
    TrivialBase { path: String },
    #[error("{path}: direct product needs at least one factor")]
    EmptyProduct { path: String },
    #[error("{path}: cyclic modulus must be at least 1")]
    ZeroModulus { path: String },
    #[error("{path}: finite orbit sizes other than 1 must be at least 2, got {size}")]
    BadOrbitSize { path: String, size: u64 },
    #[error("{path}: stabilizer map must be {rows}x{cols}, got {got_rows}x{got_cols}")]
    MatrixShape {
        path: String,
        rows: usize,
        cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("{path}: singleton orbit must have the whole top group as stabilizer (image rank {rank}, need {need})")]
    SingletonStabilizer { path: String, rank: usize, need: usize },
    #[error("{path}: pair record refers to orbit {orbit}, which does not exist")]
    BadDiagonal { path: String, orbit: usize },
    #[error("{path}: graph data needs {expected} orbit-pair flags, got {got}")]
    GraphFlags { path: String, expected: usize, got: usize },
    #[error("{path}: membership condition has length {got}, atom rank is {rank}")]
    RegionShape { path: String, rank: usize, got: usize },
}

/// Three-valued orbit cardinality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitSize {
    One,
    Finite(u64),
    Infinite,
}

impl fmt::Display for OrbitSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitSize::One => write!(f, "1"),
            OrbitSize::Finite(k) => write!(f, "{k}"),
            OrbitSize::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerData {
    pub group: GroupExpr,
    /// Rows index the top group's abelianization, columns the stabilizer's.
    pub image: RatMatrix,
    pub finitely_generated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitRecord {
    pub label: String,
    pub size: OrbitSize,
    pub stabilizer: StabilizerData,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairOrbitRecord {
    pub label: String,
    pub image: RatMatrix,
    /// `Some(i)` for the diagonal orbit `{(x, x) : x in orbit i}`.
    pub diagonal_of: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GSetSpec {
    pub orbits: Vec<OrbitRecord>,
    pub pairs: Option<Vec<PairOrbitRecord>>,
}

impl GSetSpec {
    /// Builds a G-set description; when pair data is given, a diagonal record
    /// is added for every orbit that lacks one.
    pub fn new(orbits: Vec<OrbitRecord>, pairs: Option<Vec<PairOrbitRecord>>) -> Self {
        let pairs = pairs.map(|mut pairs| {
            for (i, orbit) in orbits.iter().enumerate() {
                if !pairs.iter().any(|p| p.diagonal_of == Some(i)) {
                    pairs.push(PairOrbitRecord {
                        label: format!("diag({})", orbit.label),
                        image: orbit.stabilizer.image.clone(),
                        diagonal_of: Some(i),
                    });
                }
            }
            pairs
        });
        GSetSpec { orbits, pairs }
    }

    pub fn transitive(&self) -> bool {
        self.orbits.len() == 1
    }

    pub fn has_singleton_orbit(&self) -> bool {
        self.orbits.iter().any(|o| o.size == OrbitSize::One)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Wreath {
    pub base: GroupExpr,
    pub top: GroupExpr,
    pub gset: GSetSpec,
}

impl Wreath {
    pub fn base_rank(&self) -> usize {
        self.base.free_rank()
    }

    pub fn top_rank(&self) -> usize {
        self.top.free_rank()
    }

    /// Coordinates of the copy of H^ab attached to orbit `i`.
    pub fn orbit_block(&self, i: usize) -> std::ops::Range<usize> {
        let r = self.base_rank();
        i * r..(i + 1) * r
    }

    pub fn top_block(&self) -> std::ops::Range<usize> {
        let start = self.gset.orbits.len() * self.base_rank();
        start..start + self.top_rank()
    }
}

/// Graph-wreath product over a G-graph. Only the orbit data is consumed by the
/// rules; `edges` records, per unordered orbit pair `(i, j)` with `i <= j` in
/// row-major order, whether copies over those orbits commute.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphWreath {
    pub wreath: Wreath,
    pub edges: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Positive,
    Zero,
    NonZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearCondition {
    pub normal: Vec<Q>,
    pub relation: Relation,
}

impl LinearCondition {
    pub fn holds(&self, chi: &[Q]) -> bool {
        let s = sign(&dot(&self.normal, chi));
        match self.relation {
            Relation::Positive => s > 0,
            Relation::Zero => s == 0,
            Relation::NonZero => s != 0,
        }
    }
}

impl fmt::Display for LinearCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Positive => ">",
            Relation::Zero => "=",
            Relation::NonZero => "!=",
        };
        write!(f, "{}{}0", fmt_qvec(&self.normal), rel)
    }
}

/// A conjunction of linear sign conditions on a character.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    pub conditions: Vec<LinearCondition>,
}

/// User-supplied membership oracle for an annotated atom: a finite union of
/// clauses, or `Unknown` when nothing is asserted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    Unknown,
    Union(Vec<Clause>),
}

impl Region {
    pub fn everything() -> Self {
        Region::Union(vec![Clause::default()])
    }

    pub fn nothing() -> Self {
        Region::Union(vec![])
    }

    pub fn contains(&self, chi: &[Q]) -> Option<bool> {
        match self {
            Region::Unknown => None,
            Region::Union(clauses) => Some(clauses.iter().any(|c| c.conditions.iter().all(|cond| cond.holds(chi)))),
        }
    }

    pub fn is_empty_set(&self) -> bool {
        matches!(self, Region::Union(c) if c.is_empty())
    }

    fn conditions(&self) -> impl Iterator<Item = &LinearCondition> {
        let clauses: &[Clause] = match self {
            Region::Unknown => &[],
            Region::Union(c) => c,
        };
        clauses.iter().flat_map(|c| c.conditions.iter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AnnotatedAtom {
    pub rank: usize,
    pub torsion: bool,
    pub finitely_generated: bool,
    pub finitely_presented: bool,
    pub sigma1: Region,
    pub sigma2: Region,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupExpr {
    FreeAbelian(u32),
    Free(u32),
    Cyclic(u64),
    Product(Vec<GroupExpr>),
    Wreath(Box<Wreath>),
    GraphWreath(Box<GraphWreath>),
    Annotated(Box<AnnotatedAtom>),
}

impl GroupExpr {
    pub fn wreath(base: GroupExpr, top: GroupExpr, gset: GSetSpec) -> Self {
        GroupExpr::Wreath(Box::new(Wreath { base, top, gset }))
    }

    /// Torsion-free rank of the abelianization.
    pub fn free_rank(&self) -> usize {
        match self {
            GroupExpr::FreeAbelian(n) | GroupExpr::Free(n) => *n as usize,
            GroupExpr::Cyclic(_) => 0,
            GroupExpr::Product(fs) => fs.iter().map(GroupExpr::free_rank).sum(),
            GroupExpr::Wreath(w) => w.gset.orbits.len() * w.base_rank() + w.top_rank(),
            GroupExpr::GraphWreath(g) => g.wreath.gset.orbits.len() * g.wreath.base_rank() + g.wreath.top_rank(),
            GroupExpr::Annotated(a) => a.rank,
        }
    }

    pub fn has_torsion(&self) -> bool {
        match self {
            GroupExpr::FreeAbelian(_) | GroupExpr::Free(_) => false,
            GroupExpr::Cyclic(m) => *m >= 2,
            GroupExpr::Product(fs) => fs.iter().any(GroupExpr::has_torsion),
            GroupExpr::Wreath(w) => w.base.has_torsion() || w.top.has_torsion(),
            GroupExpr::GraphWreath(g) => g.wreath.base.has_torsion() || g.wreath.top.has_torsion(),
            GroupExpr::Annotated(a) => a.torsion,
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            GroupExpr::FreeAbelian(0) | GroupExpr::Free(0) | GroupExpr::Cyclic(1) => true,
            GroupExpr::Product(fs) => fs.iter().all(GroupExpr::is_trivial),
            _ => false,
        }
    }

    /// Structural well-formedness of the whole expression tree.
    pub fn validate(&self) -> Result<(), GroupError> {
        self.validate_at("root")
    }

    fn validate_at(&self, path: &str) -> Result<(), GroupError> {
        match self {
            GroupExpr::FreeAbelian(_) | GroupExpr::Free(_) => Ok(()),
            GroupExpr::Cyclic(0) => Err(GroupError::ZeroModulus { path: path.into() }),
            GroupExpr::Cyclic(_) => Ok(()),
            GroupExpr::Product(fs) => {
                if fs.is_empty() {
                    return Err(GroupError::EmptyProduct { path: path.into() });
                }
                for (i, f) in fs.iter().enumerate() {
                    f.validate_at(&format!("{path}.factor[{i}]"))?;
                }
                Ok(())
            }
            GroupExpr::Wreath(w) => validate_wreath(w, path),
            GroupExpr::GraphWreath(g) => {
                validate_wreath(&g.wreath, path)?;
                let n = g.wreath.gset.orbits.len();
                let expected = n * (n + 1) / 2;
                if g.edges.len() != expected {
                    return Err(GroupError::GraphFlags {
                        path: path.into(),
                        expected,
                        got: g.edges.len(),
                    });
                }
                Ok(())
            }
            GroupExpr::Annotated(a) => {
                for cond in a.sigma1.conditions().chain(a.sigma2.conditions()) {
                    if cond.normal.len() != a.rank {
                        return Err(GroupError::RegionShape {
                            path: path.into(),
                            rank: a.rank,
                            got: cond.normal.len(),
                        });
                    }
                }
                Ok(())
            }
        }
    }

    pub fn abelianization(&self) -> AbelBasis {
        AbelBasis {
            free_rank: self.free_rank(),
            has_torsion: self.has_torsion(),
            layout: self.layout("root", 0),
        }
    }

    fn layout(&self, label: &str, start: usize) -> Block {
        let children = match self {
            GroupExpr::Product(fs) => {
                let mut at = start;
                fs.iter()
                    .enumerate()
                    .map(|(i, f)| {
                        let b = f.layout(&format!("factor[{i}]"), at);
                        at += b.len;
                        b
                    })
                    .collect()
            }
            GroupExpr::Wreath(w) => wreath_layout(w, start),
            GroupExpr::GraphWreath(g) => wreath_layout(&g.wreath, start),
            _ => Vec::new(),
        };
        Block {
            label: label.to_string(),
            start,
            len: self.free_rank(),
            children,
        }
    }

    pub fn as_wreath(&self) -> Option<&Wreath> {
        match self {
            GroupExpr::Wreath(w) => Some(w),
            _ => None,
        }
    }
}

fn wreath_layout(w: &Wreath, start: usize) -> Vec<Block> {
    let mut blocks: Vec<Block> = w
        .gset
        .orbits
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let r = w.orbit_block(i);
            w.base.layout(&format!("base@{}", o.label), start + r.start)
        })
        .collect();
    blocks.push(w.top.layout("top", start + w.top_block().start));
    blocks
}

fn validate_wreath(w: &Wreath, path: &str) -> Result<(), GroupError> {
    w.base.validate_at(&format!("{path}.base"))?;
    w.top.validate_at(&format!("{path}.top"))?;
    if w.base.is_trivial() {
        return Err(GroupError::TrivialBase { path: path.into() });
    }
    if w.gset.orbits.is_empty() {
        return Err(GroupError::EmptyOrbits { path: path.into() });
    }
    let top_rank = w.top_rank();
    for (i, o) in w.gset.orbits.iter().enumerate() {
        let opath = format!("{path}.orbit[{i}]");
        if let OrbitSize::Finite(k) = o.size {
            if k < 2 {
                return Err(GroupError::BadOrbitSize { path: opath, size: k });
            }
        }
        let stab = &o.stabilizer;
        stab.group.validate_at(&format!("{opath}.stab"))?;
        check_shape(&stab.image, top_rank, stab.group.free_rank(), &opath)?;
        if o.size == OrbitSize::One {
            let rank = stab.image.rank();
            if rank != top_rank {
                return Err(GroupError::SingletonStabilizer {
                    path: opath,
                    rank,
                    need: top_rank,
                });
            }
        }
    }
    if let Some(pairs) = &w.gset.pairs {
        for (j, p) in pairs.iter().enumerate() {
            let ppath = format!("{path}.pair[{j}]");
            if p.image.rows() != top_rank {
                return Err(GroupError::MatrixShape {
                    path: ppath,
                    rows: top_rank,
                    cols: p.image.cols(),
                    got_rows: p.image.rows(),
                    got_cols: p.image.cols(),
                });
            }
            if let Some(orbit) = p.diagonal_of {
                if orbit >= w.gset.orbits.len() {
                    return Err(GroupError::BadDiagonal { path: ppath, orbit });
                }
            }
        }
    }
    Ok(())
}

fn check_shape(m: &RatMatrix, rows: usize, cols: usize, path: &str) -> Result<(), GroupError> {
    if m.rows() != rows || m.cols() != cols {
        return Err(GroupError::MatrixShape {
            path: path.into(),
            rows,
            cols,
            got_rows: m.rows(),
            got_cols: m.cols(),
        });
    }
    Ok(())
}

/// Coordinate block of the character space owned by one expression node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub label: String,
    pub start: usize,
    pub len: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Block>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelBasis {
    pub free_rank: usize,
    pub has_torsion: bool,
    pub layout: Block,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinitenessReport {
    pub fg: bool,
    pub fp: bool,
    pub reasons: Vec<String>,
}

/// Finite generation and finite presentability from the wreath criteria:
/// fg needs fg base/top (finitely many orbits is structural); fp further needs
/// fp base/top, finitely many diagonal orbits on X^2 (pair data present) and
/// finitely generated point stabilizers.
pub fn validate_finiteness(expr: &GroupExpr) -> Result<FinitenessReport, GroupError> {
    expr.validate()?;
    let mut reasons = Vec::new();
    let (fg, fp) = finiteness_at(expr, "root", &mut reasons);
    Ok(FinitenessReport {
        fg,
        fp: fg && fp,
        reasons,
    })
}

fn finiteness_at(expr: &GroupExpr, path: &str, reasons: &mut Vec<String>) -> (bool, bool) {
    match expr {
        GroupExpr::FreeAbelian(_) | GroupExpr::Free(_) | GroupExpr::Cyclic(_) => (true, true),
        GroupExpr::Annotated(a) => {
            if !a.finitely_generated {
                reasons.push(format!("{path}: annotated atom declared not finitely generated"));
            } else if !a.finitely_presented {
                reasons.push(format!("{path}: annotated atom declared not finitely presented"));
            }
            (a.finitely_generated, a.finitely_generated && a.finitely_presented)
        }
        GroupExpr::Product(fs) => fs.iter().enumerate().fold((true, true), |(g, p), (i, f)| {
            let (fg, fp) = finiteness_at(f, &format!("{path}.factor[{i}]"), reasons);
            (g && fg, p && fp)
        }),
        GroupExpr::Wreath(w) => wreath_finiteness(w, path, reasons),
        GroupExpr::GraphWreath(g) => {
            let (fg, _) = wreath_finiteness(&g.wreath, path, reasons);
            reasons.push(format!(
                "{path}: no finite presentability criterion is modeled for graph-wreath products"
            ));
            (fg, false)
        }
    }
}

fn wreath_finiteness(w: &Wreath, path: &str, reasons: &mut Vec<String>) -> (bool, bool) {
    let (base_fg, base_fp) = finiteness_at(&w.base, &format!("{path}.base"), reasons);
    let (top_fg, top_fp) = finiteness_at(&w.top, &format!("{path}.top"), reasons);
    let fg = base_fg && top_fg;
    if !fg {
        reasons.push(format!(
            "{path}: not finitely generated (base and top must be finitely generated)"
        ));
    }
    let mut fp = base_fp && top_fp;
    if w.gset.pairs.is_none() {
        reasons.push(format!(
            "{path}: no diagonal orbit data on X^2 (finitely many orbits of the diagonal action required)"
        ));
        fp = false;
    }
    for (i, o) in w.gset.orbits.iter().enumerate() {
        if !o.stabilizer.finitely_generated {
            reasons.push(format!("{path}.orbit[{i}]: point stabilizer is not finitely generated"));
            fp = false;
        }
    }
    (fg, fp)
}

/// Helpers for the common shapes of G-set data.
impl OrbitRecord {
    /// Free orbit: trivial stabilizer.
    pub fn free(label: &str, size: OrbitSize, top_rank: usize) -> Self {
        OrbitRecord {
            label: label.to_string(),
            size,
            stabilizer: StabilizerData {
                group: GroupExpr::FreeAbelian(0),
                image: RatMatrix::zeros(top_rank, 0),
                finitely_generated: true,
            },
        }
    }

    /// Fixed point: the stabilizer is the whole top group.
    pub fn fixed(label: &str, top: &GroupExpr) -> Self {
        let r = top.free_rank();
        OrbitRecord {
            label: label.to_string(),
            size: OrbitSize::One,
            stabilizer: StabilizerData {
                group: top.clone(),
                image: RatMatrix::identity(r),
                finitely_generated: true,
            },
        }
    }
}

impl PairOrbitRecord {
    pub fn off_diagonal(label: &str, image: RatMatrix) -> Self {
        PairOrbitRecord {
            label: label.to_string(),
            image,
            diagonal_of: None,
        }
    }
}

/// Regular wreath product `base ≀ top` (X = top, left multiplication).
pub fn regular_wreath(base: GroupExpr, top: GroupExpr) -> GroupExpr {
    let r = top.free_rank();
    let size = match &top {
        GroupExpr::Cyclic(1) => OrbitSize::One,
        GroupExpr::Cyclic(m) => OrbitSize::Finite(*m),
        t if t.is_trivial() => OrbitSize::One,
        _ => OrbitSize::Infinite,
    };
    if size == OrbitSize::One {
        let orbit = OrbitRecord::fixed("x0", &top);
        return GroupExpr::wreath(base, top, GSetSpec::new(vec![orbit], Some(vec![])));
    }
    let orbit = OrbitRecord::free("x0", size, r);
    // Off-diagonal pairs (x, gx), g != 1, all have trivial stabilizer.
    let off = PairOrbitRecord::off_diagonal("offdiag", RatMatrix::zeros(r, 0));
    GroupExpr::wreath(base, top, GSetSpec::new(vec![orbit], Some(vec![off])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    fn lamplighter() -> GroupExpr {
        regular_wreath(GroupExpr::Cyclic(2), GroupExpr::FreeAbelian(1))
    }

    #[test]
    fn wreath_rank_formula() {
        let zwrz = regular_wreath(GroupExpr::FreeAbelian(1), GroupExpr::FreeAbelian(1));
        let ab = zwrz.abelianization();
        assert_eq!(ab.free_rank, 2);
        assert!(!ab.has_torsion);
        let ab = lamplighter().abelianization();
        assert_eq!(ab.free_rank, 1);
        assert!(ab.has_torsion);
        assert_eq!(ab.layout.children.len(), 2);
        assert_eq!(ab.layout.children[1].start, 0);
        assert_eq!(ab.layout.children[1].len, 1);
    }

    #[test]
    fn finiteness_examples() {
        let rep = validate_finiteness(&lamplighter()).unwrap();
        assert!(rep.fg && rep.fp, "{rep:?}");

        let mut orbit = OrbitRecord::free("x", OrbitSize::Infinite, 2);
        orbit.stabilizer.finitely_generated = false;
        let w = GroupExpr::wreath(
            GroupExpr::FreeAbelian(1),
            GroupExpr::Free(2),
            GSetSpec::new(vec![orbit], Some(vec![])),
        );
        let rep = validate_finiteness(&w).unwrap();
        assert!(rep.fg && !rep.fp);
        assert!(rep.reasons.iter().any(|r| r.contains("stabilizer")));

        let p = GroupExpr::Product(vec![GroupExpr::Free(2), GroupExpr::FreeAbelian(3)]);
        let rep = validate_finiteness(&p).unwrap();
        assert!(rep.fg && rep.fp);
    }

    #[test]
    fn malformed_expressions_are_rejected() {
        let w = GroupExpr::wreath(
            GroupExpr::FreeAbelian(1),
            GroupExpr::FreeAbelian(1),
            GSetSpec::new(vec![], None),
        );
        assert!(matches!(validate_finiteness(&w), Err(GroupError::EmptyOrbits { .. })));
        let w = regular_wreath(GroupExpr::Cyclic(1), GroupExpr::FreeAbelian(1));
        assert!(matches!(w.validate(), Err(GroupError::TrivialBase { .. })));
        // Singleton orbit whose stabilizer misses part of G^ab.
        let mut fixed = OrbitRecord::fixed("p", &GroupExpr::FreeAbelian(2));
        fixed.stabilizer.image = RatMatrix::from_int_rows(&[&[1, 0], &[0, 0]]);
        let w = GroupExpr::wreath(
            GroupExpr::FreeAbelian(1),
            GroupExpr::FreeAbelian(2),
            GSetSpec::new(vec![fixed], None),
        );
        assert!(matches!(w.validate(), Err(GroupError::SingletonStabilizer { .. })));
    }

    #[test]
    fn diagonal_pairs_are_derived() {
        let mut o = OrbitRecord::free("x", OrbitSize::Infinite, 1);
        o.stabilizer.group = GroupExpr::FreeAbelian(1);
        o.stabilizer.image = RatMatrix::from_int_rows(&[&[2]]);
        let g = GSetSpec::new(
            vec![o.clone(), OrbitRecord::free("y", OrbitSize::Infinite, 1)],
            Some(vec![]),
        );
        let pairs = g.pairs.unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].diagonal_of, Some(0));
        assert_eq!(pairs[0].image, o.stabilizer.image);
        // Without pair data nothing is invented.
        assert!(GSetSpec::new(vec![o], None).pairs.is_none());
    }

    #[test]
    fn fp_implies_fg_for_annotated_atoms() {
        let a = GroupExpr::Annotated(Box::new(AnnotatedAtom {
            rank: 1,
            torsion: false,
            finitely_generated: false,
            finitely_presented: true,
            sigma1: Region::everything(),
            sigma2: Region::Unknown,
        }));
        let rep = validate_finiteness(&a).unwrap();
        assert!(!rep.fg && !rep.fp);
    }

    #[test]
    fn region_membership() {
        let r = Region::Union(vec![Clause {
            conditions: vec![
                LinearCondition {
                    normal: qvec(&[1, 0]),
                    relation: Relation::Positive,
                },
                LinearCondition {
                    normal: qvec(&[0, 1]),
                    relation: Relation::Zero,
                },
            ],
        }]);
        assert_eq!(r.contains(&qvec(&[2, 0])), Some(true));
        assert_eq!(r.contains(&qvec(&[2, 1])), Some(false));
        assert_eq!(Region::Unknown.contains(&qvec(&[1, 0])), None);
        assert_eq!(Region::nothing().contains(&qvec(&[1])), Some(false));
    }
}
