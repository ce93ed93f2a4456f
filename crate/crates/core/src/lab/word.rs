//! Generating alphabets, words, and exact χ valuations on a realized group.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::character::{make_character, Character};
use crate::group::GroupExpr;
use crate::rational::{primitive_integer, q, Q};

use super::concrete::{realize, Concrete, Elem};
use super::LabError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

pub type Word = Vec<Letter>;

pub fn inverse_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inv()).collect()
}

/// A realized group together with a named generating alphabet. Extra letters
/// (such as a Renz letter `t`) may stand for arbitrary elements.
#[derive(Clone, Debug)]
pub struct ConcreteGroup {
    expr: GroupExpr,
    realization: Concrete,
    names: Vec<String>,
    images: Vec<Elem>,
}

fn check_name(name: &str) -> Result<(), LabError> {
    if name.is_empty()
        || name.chars().any(char::is_whitespace)
        || name.contains('^')
        || name.contains('⁻')
        || name.contains('¹')
    {
        return Err(LabError::BadAlphabet(format!("invalid letter name {name:?}")));
    }
    Ok(())
}

impl ConcreteGroup {
    /// Realizes `expr` with letters `g1, g2, ...`.
    pub fn new(expr: &GroupExpr) -> Result<Self, LabError> {
        let realization = realize(expr)?;
        let images = realization.generators();
        let names = (1..=images.len()).map(|i| format!("g{i}")).collect();
        Ok(ConcreteGroup {
            expr: expr.clone(),
            realization,
            names,
            images,
        })
    }

    pub fn with_names(expr: &GroupExpr, names: &[&str]) -> Result<Self, LabError> {
        let mut g = Self::new(expr)?;
        if names.len() != g.images.len() {
            return Err(LabError::BadAlphabet(format!(
                "{} names for {} generators",
                names.len(),
                g.images.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            check_name(n)?;
            if names[..i].contains(n) {
                return Err(LabError::BadAlphabet(format!("duplicate letter {n}")));
            }
        }
        g.names = names.iter().map(|s| s.to_string()).collect();
        Ok(g)
    }

    /// Adds a letter standing for the value of `word`.
    pub fn extend(&self, name: &str, word: &[Letter]) -> Result<Self, LabError> {
        check_name(name)?;
        if self.names.iter().any(|n| n == name) {
            return Err(LabError::BadAlphabet(format!("letter {name} already in the alphabet")));
        }
        let image = self.evaluate(word);
        let mut g = self.clone();
        g.names.push(name.to_string());
        g.images.push(image);
        Ok(g)
    }

    pub fn expr(&self) -> &GroupExpr {
        &self.expr
    }

    pub fn realization(&self) -> &Concrete {
        &self.realization
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    /// `X^{±1}` in the order `x1, x1⁻¹, x2, x2⁻¹, ...`.
    pub fn letters(&self) -> Vec<Letter> {
        (0..self.names.len())
            .flat_map(|gen| [Letter { gen, inverse: false }, Letter { gen, inverse: true }])
            .collect()
    }

    pub fn letter_name(&self, l: Letter) -> String {
        if l.inverse {
            format!("{}⁻¹", self.names[l.gen])
        } else {
            self.names[l.gen].clone()
        }
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        w.iter().map(|&l| self.letter_name(l)).collect::<Vec<_>>().join(" ")
    }

    /// Space-separated letters; `x⁻¹` or `x^-1` for inverses.
    pub fn parse_word(&self, s: &str) -> Result<Word, LabError> {
        s.split_whitespace()
            .enumerate()
            .map(|(position, token)| {
                let (name, inverse) = if let Some(n) = token.strip_suffix("⁻¹") {
                    (n, true)
                } else if let Some(n) = token.strip_suffix("^-1") {
                    (n, true)
                } else {
                    (token, false)
                };
                self.names
                    .iter()
                    .position(|x| x == name)
                    .map(|gen| Letter { gen, inverse })
                    .ok_or_else(|| LabError::UnknownLetter {
                        token: token.to_string(),
                        position,
                    })
            })
            .collect()
    }

    pub fn identity(&self) -> Elem {
        self.realization.identity()
    }

    pub fn multiply(&self, a: &Elem, b: &Elem) -> Elem {
        self.realization.mul(a, b)
    }

    pub fn inverse(&self, a: &Elem) -> Elem {
        self.realization.inv(a)
    }

    pub fn letter_image(&self, l: Letter) -> Elem {
        let g = &self.images[l.gen];
        if l.inverse {
            self.realization.inv(g)
        } else {
            g.clone()
        }
    }

    pub fn evaluate(&self, w: &[Letter]) -> Elem {
        w.iter().fold(self.identity(), |acc, &l| {
            self.realization.mul(&acc, &self.letter_image(l))
        })
    }

    pub fn evaluate_word(&self, s: &str) -> Result<Elem, LabError> {
        Ok(self.evaluate(&self.parse_word(s)?))
    }

    fn check_character(&self, chi: &Character) -> Result<(), LabError> {
        make_character(&self.expr, chi.coords().to_vec())?;
        Ok(())
    }

    pub fn chi_value(&self, chi: &Character, e: &Elem) -> Result<Q, LabError> {
        self.check_character(chi)?;
        let ab = self.realization.abel(e);
        Ok(chi.coords().iter().zip(ab).fold(q(0), |acc, (c, v)| acc + c * q(v)))
    }

    /// Prefix minimum of χ along the word; `0` for the empty word.
    pub fn v_chi(&self, chi: &Character, w: &[Letter]) -> Result<Q, LabError> {
        let values = self.letter_values(chi)?;
        let mut acc = q(0);
        let mut min: Option<Q> = None;
        for l in w {
            if l.inverse {
                acc -= &values[l.gen];
            } else {
                acc += &values[l.gen];
            }
            if min.as_ref().is_none_or(|m| acc < *m) {
                min = Some(acc.clone());
            }
        }
        Ok(min.unwrap_or_else(|| q(0)))
    }

    fn letter_values(&self, chi: &Character) -> Result<Vec<Q>, LabError> {
        self.images.iter().map(|g| self.chi_value(chi, g)).collect()
    }

    /// χ scaled to a primitive integer functional, evaluated on each letter.
    /// Positive rescaling preserves every comparison the lab makes.
    pub fn integer_weights(&self, chi: &Character) -> Result<Vec<i128>, LabError> {
        self.check_character(chi)?;
        let scaled: Vec<BigInt> = primitive_integer(chi.coords());
        let scaled: Vec<i128> = scaled
            .iter()
            .map(|x| x.to_i128().ok_or(LabError::Overflow))
            .collect::<Result<_, _>>()?;
        self.images
            .iter()
            .map(|g| {
                let ab = self.realization.abel(g);
                scaled
                    .iter()
                    .zip(ab)
                    .try_fold(0i128, |acc, (c, v)| {
                        c.checked_mul(v as i128).and_then(|p| acc.checked_add(p))
                    })
                    .ok_or(LabError::Overflow)
            })
            .collect()
    }
}

/// Integer variant of `v_chi` used by the search loops.
pub(crate) fn v_weights(w: &[Letter], weights: &[i128]) -> i128 {
    let mut acc = 0;
    let mut min = None;
    for &l in w {
        acc += letter_weight(l, weights);
        min = Some(min.map_or(acc, |m: i128| m.min(acc)));
    }
    min.unwrap_or(0)
}

pub(crate) fn letter_weight(l: Letter, weights: &[i128]) -> i128 {
    if l.inverse {
        -weights[l.gen]
    } else {
        weights[l.gen]
    }
}
