//! Concrete realizations with canonical forms, so equality of elements is
//! structural equality.

use std::collections::BTreeMap;
use std::fmt;

use crate::group::{GroupExpr, Wreath};

use super::LabError;

/// Canonical form of a group element. The derived order is the fixed total
/// order used for lamp positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Abelian(Vec<i64>),
    Cyclic(u64),
    /// Freely reduced word; letter `±(i + 1)` is generator `i` or its inverse.
    Free(Vec<i32>),
    Tuple(Vec<Elem>),
    /// Finitely supported lamp map (identity values never stored) and a top element.
    Wreath {
        lamps: BTreeMap<Elem, Elem>,
        top: Box<Elem>,
    },
}

impl Elem {
    pub fn is_identity(&self) -> bool {
        match self {
            Elem::Abelian(v) => v.iter().all(|&x| x == 0),
            Elem::Cyclic(x) => *x == 0,
            Elem::Free(w) => w.is_empty(),
            Elem::Tuple(es) => es.iter().all(Elem::is_identity),
            Elem::Wreath { lamps, top } => lamps.is_empty() && top.is_identity(),
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Abelian(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            Elem::Cyclic(x) => write!(f, "{x}"),
            Elem::Free(w) if w.is_empty() => f.write_str("e"),
            Elem::Free(w) => {
                let parts: Vec<String> = w
                    .iter()
                    .map(|&l| if l > 0 { format!("f{l}") } else { format!("f{}^-1", -l) })
                    .collect();
                f.write_str(&parts.join(" "))
            }
            Elem::Tuple(es) => {
                let parts: Vec<String> = es.iter().map(Elem::to_string).collect();
                write!(f, "<{}>", parts.join("; "))
            }
            Elem::Wreath { lamps, top } => {
                let parts: Vec<String> = lamps.iter().map(|(x, h)| format!("{x}: {h}")).collect();
                write!(f, "{{{}}} | {top}", parts.join(", "))
            }
        }
    }
}

/// Sublattice of `Z^d` in Hermite normal form; reduction modulo it is canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(dim: usize, gens: Vec<Vec<i64>>) -> Lattice {
        let mut rows = gens;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..dim {
            loop {
                let best = (r..rows.len())
                    .filter(|&i| rows[i][c] != 0)
                    .min_by_key(|&i| rows[i][c].abs());
                let Some(p) = best else { break };
                rows.swap(r, p);
                let mut done = true;
                for i in r + 1..rows.len() {
                    let k = rows[i][c].div_euclid(rows[r][c]);
                    if k != 0 {
                        let pivot = rows[r].clone();
                        for (a, b) in rows[i].iter_mut().zip(&pivot) {
                            *a -= k * b;
                        }
                    }
                    if rows[i][c] != 0 {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if r < rows.len() && rows[r][c] != 0 {
                if rows[r][c] < 0 {
                    rows[r].iter_mut().for_each(|x| *x = -*x);
                }
                let pivot = rows[r].clone();
                for row in rows.iter_mut().take(r) {
                    let k = row[c].div_euclid(pivot[c]);
                    for (a, b) in row.iter_mut().zip(&pivot) {
                        *a -= k * b;
                    }
                }
                pivots.push(c);
                r += 1;
            }
        }
        rows.truncate(r);
        Lattice { dim, rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, mut v: Vec<i64>) -> Vec<i64> {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let k = v[c].div_euclid(row[c]);
            if k != 0 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= k * b;
                }
            }
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    /// X = G with left multiplication.
    Regular,
    /// X = Z^d / L with translation.
    Quotient(Lattice),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Concrete {
    FreeAbelian(usize),
    Cyclic(u64),
    Free(usize),
    Product(Vec<Concrete>),
    Wreath {
        base: Box<Concrete>,
        top: Box<Concrete>,
        action: Action,
    },
}

fn free_reduce_push(w: &mut Vec<i32>, l: i32) {
    if w.last() == Some(&-l) {
        w.pop();
    } else {
        w.push(l);
    }
}

impl Concrete {
    pub fn identity(&self) -> Elem {
        match self {
            Concrete::FreeAbelian(n) => Elem::Abelian(vec![0; *n]),
            Concrete::Cyclic(_) => Elem::Cyclic(0),
            Concrete::Free(_) => Elem::Free(Vec::new()),
            Concrete::Product(fs) => Elem::Tuple(fs.iter().map(Concrete::identity).collect()),
            Concrete::Wreath { top, .. } => Elem::Wreath {
                lamps: BTreeMap::new(),
                top: Box::new(top.identity()),
            },
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (Concrete::FreeAbelian(_), Elem::Abelian(x), Elem::Abelian(y)) => {
                Elem::Abelian(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (Concrete::Cyclic(m), Elem::Cyclic(x), Elem::Cyclic(y)) => Elem::Cyclic((x + y) % m),
            (Concrete::Free(_), Elem::Free(x), Elem::Free(y)) => {
                let mut w = x.clone();
                for &l in y {
                    free_reduce_push(&mut w, l);
                }
                Elem::Free(w)
            }
            (Concrete::Product(fs), Elem::Tuple(x), Elem::Tuple(y)) => {
                Elem::Tuple(fs.iter().zip(x.iter().zip(y)).map(|(f, (p, q))| f.mul(p, q)).collect())
            }
            (
                Concrete::Wreath { base, top, action },
                Elem::Wreath { lamps: f1, top: g1 },
                Elem::Wreath { lamps: f2, top: g2 },
            ) => {
                // (f1, g1)(f2, g2) = (f1 · g1.f2, g1 g2), (g.f)(g x) = f(x).
                let mut lamps = f1.clone();
                for (x, h) in f2 {
                    let y = Self::act(top, action, g1, x);
                    let v = match lamps.get(&y) {
                        Some(cur) => base.mul(cur, h),
                        None => h.clone(),
                    };
                    if v.is_identity() {
                        lamps.remove(&y);
                    } else {
                        lamps.insert(y, v);
                    }
                }
                Elem::Wreath {
                    lamps,
                    top: Box::new(top.mul(g1, g2)),
                }
            }
            _ => panic!("element does not belong to this group"),
        }
    }

    pub fn inv(&self, a: &Elem) -> Elem {
        match (self, a) {
            (Concrete::FreeAbelian(_), Elem::Abelian(x)) => Elem::Abelian(x.iter().map(|v| -v).collect()),
            (Concrete::Cyclic(m), Elem::Cyclic(x)) => Elem::Cyclic((m - x) % m),
            (Concrete::Free(_), Elem::Free(w)) => Elem::Free(w.iter().rev().map(|l| -l).collect()),
            (Concrete::Product(fs), Elem::Tuple(x)) => Elem::Tuple(fs.iter().zip(x).map(|(f, p)| f.inv(p)).collect()),
            (Concrete::Wreath { base, top, action }, Elem::Wreath { lamps, top: g }) => {
                // (f, g)^-1 = (g^-1.f^-1, g^-1).
                let gi = top.inv(g);
                let lamps = lamps
                    .iter()
                    .map(|(x, h)| (Self::act(top, action, &gi, x), base.inv(h)))
                    .collect();
                Elem::Wreath {
                    lamps,
                    top: Box::new(gi),
                }
            }
            _ => panic!("element does not belong to this group"),
        }
    }

    fn act(top: &Concrete, action: &Action, g: &Elem, x: &Elem) -> Elem {
        match (action, g, x) {
            (Action::Regular, _, _) => top.mul(g, x),
            (Action::Quotient(l), Elem::Abelian(a), Elem::Abelian(b)) => {
                Elem::Abelian(l.reduce(a.iter().zip(b).map(|(p, q)| p + q).collect()))
            }
            _ => panic!("quotient actions need a free abelian top group"),
        }
    }

    fn basepoint(top: &Concrete, action: &Action) -> Elem {
        match action {
            Action::Regular => top.identity(),
            Action::Quotient(l) => Elem::Abelian(vec![0; l.dim()]),
        }
    }

    /// Standard generators, in abelianization-coordinate order.
    pub fn generators(&self) -> Vec<Elem> {
        match self {
            Concrete::FreeAbelian(n) => (0..*n)
                .map(|i| {
                    let mut v = vec![0; *n];
                    v[i] = 1;
                    Elem::Abelian(v)
                })
                .collect(),
            Concrete::Cyclic(m) if *m <= 1 => Vec::new(),
            Concrete::Cyclic(_) => vec![Elem::Cyclic(1)],
            Concrete::Free(k) => (1..=*k as i32).map(|l| Elem::Free(vec![l])).collect(),
            Concrete::Product(fs) => {
                let ids: Vec<Elem> = fs.iter().map(Concrete::identity).collect();
                let mut out = Vec::new();
                for (i, f) in fs.iter().enumerate() {
                    for g in f.generators() {
                        let mut t = ids.clone();
                        t[i] = g;
                        out.push(Elem::Tuple(t));
                    }
                }
                out
            }
            Concrete::Wreath { base, top, action } => {
                let x0 = Self::basepoint(top, action);
                let mut out: Vec<Elem> = base
                    .generators()
                    .into_iter()
                    .map(|h| Elem::Wreath {
                        lamps: BTreeMap::from([(x0.clone(), h)]),
                        top: Box::new(top.identity()),
                    })
                    .collect();
                out.extend(top.generators().into_iter().map(|g| Elem::Wreath {
                    lamps: BTreeMap::new(),
                    top: Box::new(g),
                }));
                out
            }
        }
    }

    /// Torsion-free rank of the abelianization of the realized group.
    pub fn rank(&self) -> usize {
        match self {
            Concrete::FreeAbelian(n) | Concrete::Free(n) => *n,
            Concrete::Cyclic(_) => 0,
            Concrete::Product(fs) => fs.iter().map(Concrete::rank).sum(),
            Concrete::Wreath { base, top, .. } => base.rank() + top.rank(),
        }
    }

    /// Image in the free part of the abelianization (single-orbit layout:
    /// the H-block then the G-block).
    pub fn abel(&self, a: &Elem) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.rank());
        self.abel_into(a, &mut out);
        out
    }

    fn abel_into(&self, a: &Elem, out: &mut Vec<i64>) {
        match (self, a) {
            (Concrete::FreeAbelian(_), Elem::Abelian(x)) => out.extend_from_slice(x),
            (Concrete::Cyclic(_), _) => {}
            (Concrete::Free(k), Elem::Free(w)) => {
                let start = out.len();
                out.resize(start + *k, 0);
                for &l in w {
                    out[start + l.unsigned_abs() as usize - 1] += l.signum() as i64;
                }
            }
            (Concrete::Product(fs), Elem::Tuple(x)) => {
                for (f, p) in fs.iter().zip(x) {
                    f.abel_into(p, out);
                }
            }
            (Concrete::Wreath { base, top, .. }, Elem::Wreath { lamps, top: g }) => {
                let mut sum = vec![0; base.rank()];
                for h in lamps.values() {
                    for (s, v) in sum.iter_mut().zip(base.abel(h)) {
                        *s += v;
                    }
                }
                out.extend(sum);
                top.abel_into(g, out);
            }
            _ => panic!("element does not belong to this group"),
        }
    }
}

/// Builds a concrete realization of `expr`, when the expression lies in the
/// supported family: atoms, direct products, and single-orbit wreath products
/// whose action is regular or a translation action of `Z^d` on `Z^d / L`.
pub fn realize(expr: &GroupExpr) -> Result<Concrete, LabError> {
    match expr {
        GroupExpr::FreeAbelian(n) => Ok(Concrete::FreeAbelian(*n as usize)),
        GroupExpr::Free(k) => Ok(Concrete::Free(*k as usize)),
        GroupExpr::Cyclic(m) => Ok(Concrete::Cyclic(*m)),
        GroupExpr::Product(fs) => Ok(Concrete::Product(fs.iter().map(realize).collect::<Result<_, _>>()?)),
        GroupExpr::Wreath(w) => realize_wreath(w),
        GroupExpr::GraphWreath(_) => Err(LabError::Unsupported(
            "graph-wreath products have no concrete realization".into(),
        )),
        GroupExpr::Annotated(_) => Err(LabError::Unsupported(
            "annotated atoms have no concrete realization".into(),
        )),
    }
}

fn realize_wreath(w: &Wreath) -> Result<Concrete, LabError> {
    let [orbit] = w.gset.orbits.as_slice() else {
        return Err(LabError::Unsupported(format!(
            "only transitive actions are realized, got {} orbits",
            w.gset.orbits.len()
        )));
    };
    let base = realize(&w.base)?;
    let top = realize(&w.top)?;
    let stab = &orbit.stabilizer;
    let action = if stab.group.is_trivial() {
        Action::Regular
    } else {
        match (&top, &stab.group) {
            (Concrete::FreeAbelian(d), GroupExpr::FreeAbelian(_)) if stab.image.is_integral() => {
                let gens = (0..stab.image.cols())
                    .map(|c| {
                        stab.image
                            .column(c)
                            .iter()
                            .map(|x| {
                                i64::try_from(x.to_integer())
                                    .map_err(|_| LabError::Unsupported("stabilizer entry too large".into()))
                            })
                            .collect::<Result<Vec<i64>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let lattice = Lattice::from_generators(*d, gens);
                if lattice.rank() != stab.image.rank() {
                    return Err(LabError::Unsupported(
                        "stabilizer map must be injective to define the lattice".into(),
                    ));
                }
                Action::Quotient(lattice)
            }
            _ => {
                return Err(LabError::Unsupported(
                    "nontrivial stabilizers are realized only for Z^d acting on Z^d/L".into(),
                ))
            }
        }
    };
    Ok(Concrete::Wreath {
        base: Box::new(base),
        top: Box::new(top),
        action,
    })
}
