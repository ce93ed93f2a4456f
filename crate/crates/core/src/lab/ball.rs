//! Truncated Cayley graphs and χ-connectivity evidence.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::character::Character;

use super::concrete::Elem;
use super::word::{letter_weight, ConcreteGroup, Letter, Word};
use super::LabError;

pub const DEFAULT_VERTEX_CAP: usize = 1_000_000;

/// The ball of radius `R` about the identity in the word metric, with every
/// edge between ball vertices (both directions).
#[derive(Clone, Debug)]
pub struct BallGraph {
    radius: u32,
    names: Vec<String>,
    vertices: Vec<Elem>,
    depth: Vec<u32>,
    parent: Vec<Option<(usize, Letter)>>,
    abel: Vec<Vec<i64>>,
    edges: Vec<(usize, usize, Letter)>,
}

impl BallGraph {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Elem] {
        &self.vertices
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.depth[v]
    }

    pub fn edges(&self) -> &[(usize, usize, Letter)] {
        &self.edges
    }

    /// A geodesic word for vertex `v` (BFS tree path).
    pub fn word_to(&self, mut v: usize) -> Word {
        let mut w = Vec::new();
        while let Some((p, l)) = self.parent[v] {
            w.push(l);
            v = p;
        }
        w.reverse();
        w
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "ε".into();
        }
        w.iter()
            .map(|l| {
                if l.inverse {
                    format!("{}⁻¹", self.names[l.gen])
                } else {
                    self.names[l.gen].clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Vertex count at each depth `0..=R`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.radius as usize + 1];
        for &d in &self.depth {
            out[d as usize] += 1;
        }
        out
    }
}

pub fn ball(g: &ConcreteGroup, radius: u32) -> Result<BallGraph, LabError> {
    ball_with_cap(g, radius, DEFAULT_VERTEX_CAP)
}

/// Breadth-first ball. Frontier products are computed in parallel; inserts
/// happen sequentially in frontier order, so the vertex order is deterministic.
pub fn ball_with_cap(g: &ConcreteGroup, radius: u32, cap: usize) -> Result<BallGraph, LabError> {
    let letters = g.letters();
    let images: Vec<(Letter, Elem)> = letters.iter().map(|&l| (l, g.letter_image(l))).collect();
    let rank = g.realization().rank();
    let letter_abel: Vec<Vec<i64>> = images.iter().map(|(_, e)| g.realization().abel(e)).collect();

    let id = g.identity();
    let mut index: HashMap<Elem, usize> = HashMap::from([(id.clone(), 0)]);
    let mut vertices = vec![id];
    let mut depth = vec![0];
    let mut parent = vec![None];
    let mut abel = vec![vec![0i64; rank]];

    let mut frontier = 0..1;
    for d in 1..=radius {
        let products: Vec<Vec<Elem>> = vertices[frontier.clone()]
            .par_iter()
            .map(|u| images.iter().map(|(_, x)| g.multiply(u, x)).collect())
            .collect();
        let start = vertices.len();
        for (offset, nbrs) in products.into_iter().enumerate() {
            let u = frontier.start + offset;
            for (k, v) in nbrs.into_iter().enumerate() {
                if index.contains_key(&v) {
                    continue;
                }
                if vertices.len() >= cap {
                    return Err(LabError::CapExceeded {
                        cap,
                        vertices: vertices.len(),
                        radius_reached: d - 1,
                    });
                }
                index.insert(v.clone(), vertices.len());
                vertices.push(v);
                depth.push(d);
                parent.push(Some((u, images[k].0)));
                abel.push(abel[u].iter().zip(&letter_abel[k]).map(|(a, b)| a + b).collect());
            }
        }
        frontier = start..vertices.len();
        if frontier.is_empty() {
            break;
        }
    }

    let edges: Vec<(usize, usize, Letter)> = vertices
        .par_iter()
        .enumerate()
        .flat_map_iter(|(u, e)| {
            let index = &index;
            images
                .iter()
                .filter_map(move |(l, x)| index.get(&g.multiply(e, x)).map(|&v| (u, v, *l)))
        })
        .collect();

    Ok(BallGraph {
        radius,
        names: g.names().to_vec(),
        vertices,
        depth,
        parent,
        abel,
        edges,
    })
}

/// Outcome of a truncated connectivity test. Neither variant is a proof:
/// connectivity inside a ball says nothing about larger radii, and a
/// separation may heal further out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Evidence {
    ConnectedUpTo {
        radius: u32,
        margin: u32,
        checked_vertices: usize,
    },
    DisconnectionWitness {
        radius: u32,
        margin: u32,
        first: String,
        second: String,
        separating_radius: u32,
        components: usize,
    },
}

impl Evidence {
    pub fn is_disconnection(&self) -> bool {
        matches!(self, Evidence::DisconnectionWitness { .. })
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Tests whether the χ ≥ 0 vertices within distance `R - margin` lie in one
/// component of the χ ≥ 0 subgraph of the whole ball.
pub fn connectivity_evidence(ball: &BallGraph, chi: &Character, margin: u32) -> Result<Evidence, LabError> {
    if margin >= ball.radius {
        return Err(LabError::BadMargin {
            margin,
            radius: ball.radius,
        });
    }
    let dim = ball.abel.first().map_or(0, Vec::len);
    if chi.dim() != dim {
        return Err(crate::character::CharacterError::LengthMismatch {
            expected: dim,
            got: chi.dim(),
        }
        .into());
    }
    let weights: Vec<i128> = crate::rational::primitive_integer(chi.coords())
        .iter()
        .map(|x| num_traits::ToPrimitive::to_i128(x).ok_or(LabError::Overflow))
        .collect::<Result<_, _>>()?;
    let nonneg: Vec<bool> = ball
        .abel
        .iter()
        .map(|a| weights.iter().zip(a).map(|(w, &x)| w * x as i128).sum::<i128>() >= 0)
        .collect();

    let mut uf = UnionFind((0..ball.vertices.len()).collect());
    for &(u, v, _) in &ball.edges {
        if nonneg[u] && nonneg[v] {
            uf.union(u, v);
        }
    }
    let inner = ball.radius - margin;
    let checked: Vec<usize> = (0..ball.vertices.len())
        .filter(|&v| nonneg[v] && ball.depth[v] <= inner)
        .collect();
    let root = uf.find(0);
    let stray = checked.iter().copied().find(|&v| uf.find(v) != root);
    Ok(match stray {
        None => Evidence::ConnectedUpTo {
            radius: ball.radius,
            margin,
            checked_vertices: checked.len(),
        },
        Some(v) => {
            let mut roots: Vec<usize> = checked.iter().map(|&c| uf.find(c)).collect();
            roots.sort_unstable();
            roots.dedup();
            Evidence::DisconnectionWitness {
                radius: ball.radius,
                margin,
                first: ball.format_word(&ball.word_to(0)),
                second: ball.format_word(&ball.word_to(v)),
                separating_radius: ball.radius,
                components: roots.len(),
            }
        }
    })
}

/// χ value (integer-scaled) of a word; used by tests and the search.
pub(crate) fn word_weight(w: &[Letter], weights: &[i128]) -> i128 {
    w.iter().map(|&l| letter_weight(l, weights)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{regular_wreath, GroupExpr};
    use crate::rational::qvec;

    #[test]
    fn small_balls() {
        let z = ConcreteGroup::new(&GroupExpr::FreeAbelian(1)).unwrap();
        assert_eq!(ball(&z, 3).unwrap().vertex_count(), 7);
        let f2 = ConcreteGroup::new(&GroupExpr::Free(2)).unwrap();
        let b = ball(&f2, 2).unwrap();
        assert_eq!(b.vertex_count(), 17);
        assert_eq!(b.sphere_sizes(), vec![1, 4, 12]);
        // Every edge has its reverse.
        let mut set: std::collections::HashSet<(usize, usize)> = Default::default();
        for &(u, v, _) in b.edges() {
            set.insert((u, v));
        }
        assert!(set.iter().all(|&(u, v)| set.contains(&(v, u))));
    }

    #[test]
    fn cap_is_reported() {
        let f2 = ConcreteGroup::new(&GroupExpr::Free(2)).unwrap();
        assert!(matches!(
            ball_with_cap(&f2, 5, 50),
            Err(LabError::CapExceeded { cap: 50, .. })
        ));
    }

    #[test]
    fn lamplighter_separates() {
        let l = regular_wreath(GroupExpr::Cyclic(2), GroupExpr::FreeAbelian(1));
        let g = ConcreteGroup::with_names(&l, &["a", "s"]).unwrap();
        let b = ball(&g, 6).unwrap();
        let e = connectivity_evidence(&b, &Character::new(qvec(&[1])), 2).unwrap();
        assert!(e.is_disconnection());
        let z2 = ConcreteGroup::new(&GroupExpr::FreeAbelian(2)).unwrap();
        let b = ball(&z2, 5).unwrap();
        let e = connectivity_evidence(&b, &Character::new(qvec(&[2, -1])), 2).unwrap();
        assert!(!e.is_disconnection());
    }
}
