//! Renz certificates for `[χ] ∈ Σ¹`: a letter `t` with `χ(t) > 0` and, for
//! every other letter `x`, a word `w_x = t⁻¹xt` with `v_χ(t⁻¹xt) < v_χ(w_x)`.
//!
//! If `t` is not a single generator it is adjoined to the alphabet as a new
//! letter, so the criterion is applied to the enlarged generating set.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::character::Character;
use crate::rational::fmt_q;

use super::ball::word_weight;
use super::concrete::Elem;
use super::word::{inverse_word, letter_weight, v_weights, ConcreteGroup, Letter, Word};
use super::LabError;

pub const DEFAULT_T_LETTER: &str = "t";
pub const DEFAULT_SEARCH_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rewrite {
    pub x: String,
    pub w: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenzCertificate {
    /// Word for `t` over the original alphabet.
    pub t: String,
    /// Name of `t` inside the rewrites: the generator itself when `t` is a
    /// single letter, otherwise a fresh letter.
    pub t_letter: String,
    /// One entry per letter of `X^{±1}` other than `t^{±1}`. A missing inverse
    /// entry `x⁻¹` defaults to the formal inverse of `w_x`.
    pub rewrites: Vec<Rewrite>,
}

impl RenzCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, LabError> {
        serde_json::from_str(s).map_err(|e| LabError::BadCertificate(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    Parse,
    Positivity,
    Missing,
    Equality,
    Valuation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertFailure {
    pub generator: Option<String>,
    pub clause: Clause,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub valid: bool,
    pub failures: Vec<CertFailure>,
}

/// Resolved form: the alphabet in which the rewrites live and the index of `t`.
struct Setup {
    group: ConcreteGroup,
    t_gen: Letter,
}

fn setup(g: &ConcreteGroup, t_word: &[Letter], t_letter: &str) -> Result<Setup, LabError> {
    if let [single] = t_word {
        if g.letter_name(*single) == t_letter {
            return Ok(Setup {
                group: g.clone(),
                t_gen: *single,
            });
        }
    }
    let group = g.extend(t_letter, t_word)?;
    let t_gen = Letter {
        gen: group.generator_count() - 1,
        inverse: false,
    };
    Ok(Setup { group, t_gen })
}

fn conjugate(t: Letter, x: Letter) -> Word {
    vec![t.inv(), x, t]
}

fn fail(generator: Option<String>, clause: Clause, detail: String) -> CertificateCheck {
    CertificateCheck {
        valid: false,
        failures: vec![CertFailure {
            generator,
            clause,
            detail,
        }],
    }
}

pub fn verify_renz_certificate(
    g: &ConcreteGroup,
    chi: &Character,
    cert: &RenzCertificate,
) -> Result<CertificateCheck, LabError> {
    let t_word = match g.parse_word(&cert.t) {
        Ok(w) => w,
        Err(e) => return Ok(fail(None, Clause::Parse, format!("t: {e}"))),
    };
    let Setup { group: ext, t_gen } = match setup(g, &t_word, &cert.t_letter) {
        Ok(s) => s,
        Err(e) => return Ok(fail(None, Clause::Parse, format!("t letter: {e}"))),
    };
    let mut failures = Vec::new();
    let chi_t = g.chi_value(chi, &g.evaluate(&t_word))?;
    if chi_t <= crate::rational::q(0) {
        failures.push(CertFailure {
            generator: None,
            clause: Clause::Positivity,
            detail: format!("χ(t) = {} is not positive", fmt_q(&chi_t)),
        });
    }
    let table: BTreeMap<&str, &str> = cert.rewrites.iter().map(|r| (r.x.as_str(), r.w.as_str())).collect();
    for x in ext.letters() {
        if x.gen == t_gen.gen {
            continue;
        }
        let name = ext.letter_name(x);
        let w = match table.get(name.as_str()) {
            Some(w) => ext.parse_word(w).map_err(|e| e.to_string()),
            None if x.inverse => match table.get(ext.letter_name(x.inv()).as_str()) {
                Some(w) => ext.parse_word(w).map(|w| inverse_word(&w)).map_err(|e| e.to_string()),
                None => Err(String::new()),
            },
            None => Err(String::new()),
        };
        let w = match w {
            Ok(w) => w,
            Err(e) if e.is_empty() => {
                failures.push(CertFailure {
                    generator: Some(name),
                    clause: Clause::Missing,
                    detail: "no rewrite given".into(),
                });
                continue;
            }
            Err(e) => {
                failures.push(CertFailure {
                    generator: Some(name),
                    clause: Clause::Parse,
                    detail: e,
                });
                continue;
            }
        };
        let lhs = conjugate(t_gen, x);
        if ext.evaluate(&w) != ext.evaluate(&lhs) {
            failures.push(CertFailure {
                generator: Some(name),
                clause: Clause::Equality,
                detail: format!("{} does not equal {}", ext.format_word(&w), ext.format_word(&lhs)),
            });
            continue;
        }
        let (vl, vw) = (ext.v_chi(chi, &lhs)?, ext.v_chi(chi, &w)?);
        if vl >= vw {
            failures.push(CertFailure {
                generator: Some(name),
                clause: Clause::Valuation,
                detail: format!("v_χ(t⁻¹xt) = {} is not below v_χ(w) = {}", fmt_q(&vl), fmt_q(&vw)),
            });
        }
    }
    Ok(CertificateCheck {
        valid: failures.is_empty(),
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum SearchOutcome {
    Found {
        certificate: RenzCertificate,
    },
    /// Inconclusive: no certificate within the bounds.
    NotFound {
        max_t_len: usize,
        max_w_len: usize,
        candidates: usize,
    },
}

/// Reduced words of length `1..=max_len` in shortlex order (letters ordered
/// `x1, x1⁻¹, x2, ...`).
fn reduced_words(letters: &[Letter], max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in letters {
                if w.last() == Some(&l.inv()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn find_renz_certificate(
    g: &ConcreteGroup,
    chi: &Character,
    max_t_len: usize,
    max_w_len: usize,
) -> Result<SearchOutcome, LabError> {
    find_renz_certificate_with_cap(g, chi, max_t_len, max_w_len, DEFAULT_SEARCH_CAP)
}

pub fn find_renz_certificate_with_cap(
    g: &ConcreteGroup,
    chi: &Character,
    max_t_len: usize,
    max_w_len: usize,
    cap: usize,
) -> Result<SearchOutcome, LabError> {
    if chi.is_zero() {
        return Err(LabError::ZeroCharacter);
    }
    if max_t_len == 0 || max_w_len == 0 {
        return Err(LabError::BadBounds);
    }
    let weights = g.integer_weights(chi)?;
    let t_letter = (0..)
        .map(|i| {
            if i == 0 {
                DEFAULT_T_LETTER.to_string()
            } else {
                format!("t{i}")
            }
        })
        .find(|n| !g.names().contains(n))
        .expect("some fresh name");

    // Candidates t, deduplicated by value, first word wins.
    let mut seen = HashMap::new();
    let candidates: Vec<Word> = reduced_words(&g.letters(), max_t_len)
        .into_iter()
        .filter(|w| word_weight(w, &weights) > 0)
        .filter(|w| seen.insert(g.evaluate(w), ()).is_none())
        .collect();

    let found = candidates
        .par_iter()
        .map(|t| try_candidate(g, chi, t, &t_letter, max_w_len, cap))
        .find_map_first(|r| r.transpose())
        .transpose()?;
    Ok(match found {
        Some(certificate) => SearchOutcome::Found { certificate },
        None => SearchOutcome::NotFound {
            max_t_len,
            max_w_len,
            candidates: candidates.len(),
        },
    })
}

fn try_candidate(
    g: &ConcreteGroup,
    chi: &Character,
    t_word: &[Letter],
    fresh: &str,
    max_w_len: usize,
    cap: usize,
) -> Result<Option<RenzCertificate>, LabError> {
    let t_name = match t_word {
        [single] => g.letter_name(*single),
        _ => fresh.to_string(),
    };
    let Setup { group: ext, t_gen } = setup(g, t_word, &t_name)?;
    let weights = ext.integer_weights(chi)?;
    let letters = ext.letters();

    // Targets grouped by threshold v_χ(t⁻¹xt).
    let mut by_threshold: BTreeMap<i128, Vec<(Letter, Elem)>> = BTreeMap::new();
    for &x in letters.iter().filter(|x| x.gen != t_gen.gen) {
        let lhs = conjugate(t_gen, x);
        by_threshold
            .entry(v_weights(&lhs, &weights))
            .or_default()
            .push((x, ext.evaluate(&lhs)));
    }

    let mut rewrites = BTreeMap::new();
    for (v0, targets) in by_threshold {
        match region_search(&ext, &letters, &weights, v0, &targets, max_w_len, cap)? {
            Some(found) => rewrites.extend(found),
            None => return Ok(None),
        }
    }
    Ok(Some(RenzCertificate {
        t: g.format_word(t_word),
        t_letter: t_name,
        rewrites: ext
            .letters()
            .into_iter()
            .filter_map(|x| {
                rewrites.remove(&x).map(|w: Word| Rewrite {
                    x: ext.letter_name(x),
                    w: ext.format_word(&w),
                })
            })
            .collect(),
    }))
}

/// Element, BFS parent link, χ-weight.
type SearchNode = (Elem, Option<(usize, Letter)>, i128);

/// Breadth-first search from the identity through elements with χ > v0 (the
/// identity itself is exempt: it is the empty prefix). Shortest paths to the
/// targets are exactly the shortest words with `v_χ > v0`.
fn region_search(
    g: &ConcreteGroup,
    letters: &[Letter],
    weights: &[i128],
    v0: i128,
    targets: &[(Letter, Elem)],
    max_len: usize,
    cap: usize,
) -> Result<Option<Vec<(Letter, Word)>>, LabError> {
    let images: Vec<Elem> = letters.iter().map(|&l| g.letter_image(l)).collect();
    let mut pending: HashMap<&Elem, Vec<Letter>> = HashMap::new();
    for (x, e) in targets {
        pending.entry(e).or_default().push(*x);
    }
    let mut nodes: Vec<SearchNode> = vec![(g.identity(), None, 0)];
    let mut index: HashMap<Elem, usize> = HashMap::from([(g.identity(), 0)]);
    let mut found = Vec::new();
    let mut queue = VecDeque::from([(0usize, 0usize)]);

    let path = |nodes: &[SearchNode], mut v: usize| {
        let mut w = Vec::new();
        while let Some((p, l)) = nodes[v].1 {
            w.push(l);
            v = p;
        }
        w.reverse();
        w
    };

    while let Some((u, d)) = queue.pop_front() {
        if d == max_len {
            continue;
        }
        for (k, &l) in letters.iter().enumerate() {
            let wt = nodes[u].2 + letter_weight(l, weights);
            if wt <= v0 {
                continue;
            }
            let e = g.multiply(&nodes[u].0, &images[k]);
            if index.contains_key(&e) {
                continue;
            }
            if nodes.len() >= cap {
                return Err(LabError::CapExceeded {
                    cap,
                    vertices: nodes.len(),
                    radius_reached: d as u32,
                });
            }
            let v = nodes.len();
            index.insert(e.clone(), v);
            nodes.push((e, Some((u, l)), wt));
            if let Some(xs) = pending.remove(&nodes[v].0) {
                let w = path(&nodes, v);
                found.extend(xs.into_iter().map(|x| (x, w.clone())));
                if pending.is_empty() {
                    return Ok(Some(found));
                }
            }
            queue.push_back((v, d + 1));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{regular_wreath, GroupExpr};
    use crate::rational::qvec;

    fn zwrz() -> ConcreteGroup {
        let e = regular_wreath(GroupExpr::FreeAbelian(1), GroupExpr::FreeAbelian(1));
        ConcreteGroup::with_names(&e, &["h", "z"]).unwrap()
    }

    #[test]
    fn explicit_certificate() {
        let g = zwrz();
        let chi = Character::new(qvec(&[1, 0]));
        let mut cert = RenzCertificate {
            t: "z h z⁻¹".into(),
            t_letter: "t".into(),
            rewrites: vec![
                Rewrite {
                    x: "h".into(),
                    w: "h".into(),
                },
                Rewrite {
                    x: "z".into(),
                    w: "z t z⁻¹ t⁻¹ z".into(),
                },
            ],
        };
        assert!(verify_renz_certificate(&g, &chi, &cert).unwrap().valid);
        cert.rewrites[1].w = "z".into();
        let check = verify_renz_certificate(&g, &chi, &cert).unwrap();
        assert!(!check.valid);
        assert_eq!(check.failures[0].clause, Clause::Equality);
        assert_eq!(check.failures[0].generator.as_deref(), Some("z"));
    }

    #[test]
    fn search_and_round_trip() {
        let g = zwrz();
        let chi = Character::new(qvec(&[1, 0]));
        let SearchOutcome::Found { certificate } = find_renz_certificate(&g, &chi, 3, 5).unwrap() else {
            panic!("expected a certificate");
        };
        let back = RenzCertificate::from_json(&certificate.to_json()).unwrap();
        assert_eq!(back, certificate);
        assert!(verify_renz_certificate(&g, &chi, &back).unwrap().valid);
    }

    #[test]
    fn abelian_trivial_table() {
        let g = ConcreteGroup::new(&GroupExpr::FreeAbelian(1)).unwrap();
        let chi = Character::new(qvec(&[1]));
        let SearchOutcome::Found { certificate } = find_renz_certificate(&g, &chi, 1, 2).unwrap() else {
            panic!("expected a certificate");
        };
        assert_eq!(certificate.t, "g1");
        assert!(certificate.rewrites.is_empty());
    }
}
