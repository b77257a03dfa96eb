//! Reference methods for comparison: pairwise substitution with penalties and
//! one auxiliary per monomial.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::poly::{Monomial, Polynomial, VarId};
use crate::quad4::{lemma_formula, Coeffs4, Lemma};
use crate::quadratization::{Component, Quadratization, Step, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BaselineError {
    #[error("input contains auxiliary variable {0}")]
    AuxiliaryInput(VarId),
    #[error("pair ({0}, {1}) occurs in no remaining super-quadratic term")]
    PairNotPresent(VarId, VarId),
    #[error("pair list exhausted with degree {0} terms left")]
    PairsExhausted(usize),
    #[error("degree {0} monomial; per-term gadgets cover degree <= 4")]
    DegreeTooHigh(usize),
}

fn reject_aux(p: &Polynomial) -> Result<(), BaselineError> {
    match p.aux_vars().into_iter().next() {
        Some(v) => Err(BaselineError::AuxiliaryInput(v)),
        None => Ok(()),
    }
}

fn most_frequent_pair(work: &BTreeMap<Monomial, f64>) -> (VarId, VarId) {
    let mut counts: BTreeMap<(VarId, VarId), usize> = BTreeMap::new();
    for m in work.keys() {
        let vs = m.vars();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                *counts.entry((vs[i], vs[j])).or_default() += 1;
            }
        }
    }
    // BTreeMap iterates in pair order, so the first maximum wins ties
    let mut best = None;
    for (&pair, &n) in &counts {
        if best.is_none_or(|(_, bn)| n > bn) {
            best = Some((pair, n));
        }
    }
    best.expect("nonempty work set").0
}

/// Replaces pairs `b_u b_v` by fresh auxiliaries until every term is
/// quadratic. Each substitution adds the penalty
/// `M (b_u b_v - 2 b_u a - 2 b_v a + 3a)` with `M` the total magnitude of the
/// super-quadratic terms containing the pair at that moment.
///
/// Without `pairs`, the pair occurring in the most remaining terms is taken
/// (ties by variable order). Degree-<=2 input terms are never rewritten.
pub fn rosenberg(
    p: &Polynomial,
    pairs: Option<&[(VarId, VarId)]>,
) -> Result<Quadratization, BaselineError> {
    reject_aux(p)?;
    let (residual, high) = p.degree_split();
    let mut work: BTreeMap<Monomial, f64> = high.terms().map(|(m, c)| (m.clone(), c)).collect();
    let mut body = Polynomial::new();
    let mut penalties = Vec::new();
    let mut aux_vars = Vec::new();
    let mut given = pairs.map(|ps| ps.iter());

    while !work.is_empty() {
        let (u, v) = match given.as_mut() {
            Some(it) => match it.next() {
                Some(&(u, v)) => (u.min(v), u.max(v)),
                None => {
                    let d = work.keys().map(Monomial::degree).max().unwrap_or(0);
                    return Err(BaselineError::PairsExhausted(d));
                }
            },
            None => most_frequent_pair(&work),
        };
        let hits: Vec<Monomial> = work
            .keys()
            .filter(|m| m.contains(u) && m.contains(v))
            .cloned()
            .collect();
        if hits.is_empty() {
            return Err(BaselineError::PairNotPresent(u, v));
        }
        let a = VarId::aux(aux_vars.len() as u32);
        aux_vars.push(a);
        let mut weight = 0.0;
        for m in hits {
            let c = work.remove(&m).expect("present");
            weight += c.abs();
            let reduced = Monomial::new(m.vars().iter().copied().filter(|&x| x != u && x != v).chain([a]));
            if reduced.degree() <= 2 {
                body.add_term(reduced, c);
            } else {
                *work.entry(reduced).or_insert(0.0) += c;
            }
        }
        let penalty = Polynomial::from_terms([
            (Monomial::new([u, v]), weight),
            (Monomial::new([u, a]), -2.0 * weight),
            (Monomial::new([v, a]), -2.0 * weight),
            (Monomial::new([a]), 3.0 * weight),
        ]);
        penalties.push(Component {
            step: Step::Substitution {
                pair: (u, v),
                aux: a,
                weight,
            },
            poly: penalty,
        });
    }

    let mut components = Vec::with_capacity(penalties.len() + 1);
    if !body.is_empty() {
        components.push(Component {
            step: Step::Body,
            poly: body,
        });
    }
    components.extend(penalties);
    Ok(Quadratization::assemble(residual, components, aux_vars, Tolerance::default()))
}

/// One auxiliary per degree-3/4 monomial: the single-term case of `L1`
/// for positive coefficients, of `L2` for negative ones.
pub fn termwise(p: &Polynomial) -> Result<Quadratization, BaselineError> {
    reject_aux(p)?;
    let (residual, high) = p.degree_split();
    let mut components = Vec::new();
    let mut aux_vars = Vec::new();
    for (m, c) in high.terms() {
        if m.degree() > 4 {
            return Err(BaselineError::DegreeTooHigh(m.degree()));
        }
        let a = VarId::aux(aux_vars.len() as u32);
        aux_vars.push(a);
        let lemma = if c > 0.0 { Lemma::L1 } else { Lemma::L2 };
        let coeffs = if m.degree() == 4 {
            Coeffs4::new(c, 0.0, 0.0, 0.0, 0.0)
        } else {
            Coeffs4::new(0.0, c, 0.0, 0.0, 0.0)
        };
        let support = m.vars().to_vec();
        let mut g = lemma_formula(lemma, &coeffs);
        if support.len() == 3 {
            g = g.fix(VarId::orig(3), false);
        }
        let g = g.relabel(|v| if v.is_aux() { a } else { support[v.index as usize] });
        components.push(Component {
            step: Step::Monomial {
                support,
                lemma,
                aux: a,
            },
            poly: g,
        });
    }
    Ok(Quadratization::assemble(residual, components, aux_vars, Tolerance::default()))
}

/// Size and conditioning summary of a quadratization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Metrics {
    pub aux_count: usize,
    /// Degree-2 terms summed over the produced components (gadgets,
    /// substitution body, penalties), before merging; pass-through input
    /// terms are not counted.
    pub new_quadratic_terms: usize,
    /// Coefficient range of the merged output, constant included.
    pub coeff_min: f64,
    pub coeff_max: f64,
}

pub fn metrics(q: &Quadratization) -> Metrics {
    let new_quadratic_terms = q
        .components
        .iter()
        .map(|c| c.poly.terms().filter(|(m, _)| m.degree() == 2).count())
        .sum();
    let (coeff_min, coeff_max) = q.quadratic.coeff_range();
    Metrics {
        aux_count: q.aux_vars.len(),
        new_quadratic_terms,
        coeff_min,
        coeff_max,
    }
}
