use serde::Serialize;

use crate::poly::{Polynomial, VarId};
use crate::quad4::{CasePlan, Lemma};

/// Acceptance bound `abs + rel * |f(x)|` used by every perfection check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-9,
            rel: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    #[inline]
    pub fn bound(&self, fx: f64) -> f64 {
        self.abs + self.rel * fx.abs()
    }
}

/// Where a component came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Step {
    /// One 4-variable gadget.
    Group {
        support: Vec<VarId>,
        plan: CasePlan,
        aux: VarId,
    },
    /// Substituted super-quadratic terms of a pairwise reduction.
    Body,
    /// Penalty enforcing `aux = u*v`.
    Substitution {
        pair: (VarId, VarId),
        aux: VarId,
        weight: f64,
    },
    /// Single-monomial gadget.
    Monomial {
        support: Vec<VarId>,
        lemma: Lemma,
        aux: VarId,
    },
    /// Hand-entered summand of a stored fixture.
    Transcribed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub step: Step,
    pub poly: Polynomial,
}

/// A quadratic `q(x, a)` meant to satisfy `min_a q = f` pointwise.
///
/// `quadratic` is `residual` plus every component, merged.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadratization {
    pub quadratic: Polynomial,
    pub aux_vars: Vec<VarId>,
    pub residual: Polynomial,
    pub components: Vec<Component>,
    pub tolerance: Tolerance,
}

impl Quadratization {
    /// Assembles the merged quadratic from its parts.
    pub fn assemble(
        residual: Polynomial,
        components: Vec<Component>,
        aux_vars: Vec<VarId>,
        tolerance: Tolerance,
    ) -> Self {
        let mut quadratic = residual.clone();
        for c in &components {
            quadratic += &c.poly;
        }
        Quadratization {
            quadratic,
            aux_vars,
            residual,
            components,
            tolerance,
        }
    }

    /// Group plans in construction order.
    pub fn plans(&self) -> impl Iterator<Item = (&[VarId], &CasePlan)> + '_ {
        self.components.iter().filter_map(|c| match &c.step {
            Step::Group { support, plan, .. } => Some((support.as_slice(), plan)),
            _ => None,
        })
    }
}
