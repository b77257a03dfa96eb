//! Grouping terms of degree-4 polynomials into 4-variable blocks, one
//! auxiliary per block.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::exec::Exec;
use crate::poly::{Monomial, Polynomial, VarId};
use crate::quad4::{gadget_for, Lemma, Quad4Error, Quad4Options};
use crate::quadratization::{Component, Quadratization, Step, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error("degree {0} term; only degree <= 4 is supported")]
    DegreeTooHigh(usize),
    #[error("input contains auxiliary variable {0}")]
    AuxiliaryInput(VarId),
    #[error(transparent)]
    Quad4(#[from] Quad4Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermGroup {
    pub support: Vec<VarId>,
    /// The super-quadratic terms assigned to this group.
    pub part: Polynomial,
}

/// Greedy cover of the degree-3/4 terms by blocks of at most 4 variables.
///
/// Repeatedly seeds a group with the highest-degree uncovered term (ties by
/// support order), then absorbs, in the same order, every uncovered term that
/// keeps the block within 4 variables. Returns the groups and the degree-<=2
/// remainder.
pub fn group_terms(p: &Polynomial) -> Result<(Vec<TermGroup>, Polynomial), PartitionError> {
    if let Some(v) = p.aux_vars().into_iter().next() {
        return Err(PartitionError::AuxiliaryInput(v));
    }
    if p.degree() > 4 {
        return Err(PartitionError::DegreeTooHigh(p.degree()));
    }
    let (low, high) = p.degree_split();
    let mut terms: Vec<(&Monomial, f64)> = high.terms().collect();
    terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(a.0.cmp(b.0)));
    let mut covered = vec![false; terms.len()];
    let mut groups = Vec::new();
    while let Some(seed) = covered.iter().position(|c| !c) {
        let mut support: BTreeSet<VarId> = terms[seed].0.vars().iter().copied().collect();
        let mut part = Polynomial::new();
        for (i, (m, c)) in terms.iter().enumerate().skip(seed) {
            if covered[i] {
                continue;
            }
            let joined: BTreeSet<VarId> = support.iter().chain(m.vars()).copied().collect();
            if joined.len() <= 4 {
                support = joined;
                part.add_term((*m).clone(), *c);
                covered[i] = true;
            }
        }
        groups.push(TermGroup {
            support: support.into_iter().collect(),
            part,
        });
    }
    Ok((groups, low))
}

#[derive(Clone, Debug, Default)]
pub struct QuadratizeOptions {
    pub tolerance: Tolerance,
    /// Lemma preference per group support.
    pub hints: BTreeMap<Vec<VarId>, Lemma>,
    pub exec: Exec,
}

/// Quadratizes a degree-<=4 polynomial with one auxiliary per group.
pub fn quadratize_n(p: &Polynomial) -> Result<Quadratization, PartitionError> {
    quadratize_n_with(p, &QuadratizeOptions::default())
}

pub fn quadratize_n_with(
    p: &Polynomial,
    opts: &QuadratizeOptions,
) -> Result<Quadratization, PartitionError> {
    let (groups, residual) = group_terms(p)?;
    let built = opts.exec.map(groups.len(), |k| {
        let g = &groups[k];
        let aux = VarId::aux(k as u32);
        let o = Quad4Options {
            prefer: opts.hints.get(&g.support).copied(),
            tolerance: opts.tolerance,
            exec: opts.exec,
        };
        gadget_for(&g.part, &g.support, aux, &o).map(|(poly, plan)| Component {
            step: Step::Group {
                support: g.support.clone(),
                plan,
                aux,
            },
            poly,
        })
    });
    let components = built.into_iter().collect::<Result<Vec<_>, _>>()?;
    let aux = (0..components.len() as u32).map(VarId::aux).collect();
    Ok(Quadratization::assemble(residual, components, aux, opts.tolerance))
}
