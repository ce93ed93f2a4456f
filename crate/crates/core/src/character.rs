//! Rational characters on the free part of an abelianization, their rays,
//! and restriction to stabilizers and base copies.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::group::{GroupExpr, OrbitSize, Wreath};
use crate::rational::{fmt_qvec, is_zero_vec, serialize_qvec, RatMatrix, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("character has {got} coordinates, the group's abelianization has free rank {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the zero homomorphism is not a point of the character sphere")]
    Zero,
    #[error("restriction map expects a character with {expected} coordinates, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("expected a wreath product expression")]
    NotWreath,
}

/// A homomorphism to the rationals, written in the coordinates of
/// [`GroupExpr::abelianization`]. For a wreath node the layout is
/// `(eta_1, ..., eta_n, theta)`: one block per orbit for the copies of H,
/// then the top group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Character {
    #[serde(serialize_with = "serialize_qvec")]
    coords: Vec<Q>,
}

impl Character {
    pub fn new(coords: Vec<Q>) -> Self {
        Character { coords }
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coords)
    }

    pub fn scaled(&self, factor: &Q) -> Character {
        Character::new(self.coords.iter().map(|c| c * factor).collect())
    }

    /// Composition with a stabilizer's abelianized inclusion.
    pub fn restrict(&self, image: &RatMatrix) -> Result<Character, CharacterError> {
        image
            .pull_back(&self.coords)
            .map(Character::new)
            .ok_or(CharacterError::ShapeMismatch {
                expected: image.rows(),
                got: self.dim(),
            })
    }

    /// `chi|_{H_x}` for `x` in orbit `i`; constant along the orbit.
    pub fn base_block(&self, w: &Wreath, orbit: usize) -> Character {
        Character::new(self.coords[w.orbit_block(orbit)].to_vec())
    }

    /// `chi|_G`.
    pub fn top_block(&self, w: &Wreath) -> Character {
        Character::new(self.coords[w.top_block()].to_vec())
    }

    pub fn vanishes_on_base(&self, w: &Wreath) -> bool {
        is_zero_vec(&self.coords[..w.top_block().start])
    }

    pub fn ray(&self) -> Result<Ray, CharacterError> {
        Ray::of(self)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_qvec(&self.coords))
    }
}

pub fn make_character(expr: &GroupExpr, coords: Vec<Q>) -> Result<Character, CharacterError> {
    let expected = expr.free_rank();
    if coords.len() != expected {
        return Err(CharacterError::LengthMismatch {
            expected,
            got: coords.len(),
        });
    }
    Ok(Character::new(coords))
}

/// A point of the character sphere: the character rescaled so that its first
/// nonzero coordinate is `+1` or `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Ray {
    #[serde(serialize_with = "serialize_qvec")]
    coords: Vec<Q>,
}

impl Ray {
    pub fn of(chi: &Character) -> Result<Ray, CharacterError> {
        let lead = chi
            .coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(CharacterError::Zero)?
            .abs();
        Ok(Ray {
            coords: chi.coords.iter().map(|c| c / &lead).collect(),
        })
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn character(&self) -> Character {
        Character::new(self.coords.clone())
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_qvec(&self.coords))
    }
}

/// Size class of `T = {x : chi|_{H_x} != 0}`, saturating at three.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TClass {
    Empty,
    One,
    Two,
    AtLeastThreeFinite,
    Infinite,
}

impl TClass {
    pub fn at_least_two(self) -> bool {
        self >= TClass::Two
    }

    pub fn at_least_three(self) -> bool {
        self >= TClass::AtLeastThreeFinite
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TSummary {
    pub orbits_in_t: Vec<usize>,
    pub class: TClass,
}

pub fn support_t(chi: &Character, expr: &GroupExpr) -> Result<TSummary, CharacterError> {
    let w = match expr {
        GroupExpr::Wreath(w) => w,
        GroupExpr::GraphWreath(g) => &g.wreath,
        _ => return Err(CharacterError::NotWreath),
    };
    if chi.dim() != expr.free_rank() {
        return Err(CharacterError::LengthMismatch {
            expected: expr.free_rank(),
            got: chi.dim(),
        });
    }
    Ok(wreath_support(chi, w))
}

pub(crate) fn wreath_support(chi: &Character, w: &Wreath) -> TSummary {
    let orbits_in_t: Vec<usize> = (0..w.gset.orbits.len())
        .filter(|&i| !chi.base_block(w, i).is_zero())
        .collect();
    let mut count: u64 = 0;
    let mut infinite = false;
    for &i in &orbits_in_t {
        match w.gset.orbits[i].size {
            OrbitSize::One => count += 1,
            OrbitSize::Finite(k) => count = count.saturating_add(k),
            OrbitSize::Infinite => infinite = true,
        }
    }
    let class = if infinite {
        TClass::Infinite
    } else {
        match count {
            0 => TClass::Empty,
            1 => TClass::One,
            2 => TClass::Two,
            _ => TClass::AtLeastThreeFinite,
        }
    };
    TSummary { orbits_in_t, class }
}

/// Rational characters have cyclic image, so every nonzero one is discrete.
pub fn is_discrete(chi: &Character) -> Result<bool, CharacterError> {
    if chi.is_zero() {
        return Err(CharacterError::Zero);
    }
    Ok(true)
}
