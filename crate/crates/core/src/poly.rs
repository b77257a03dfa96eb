//! Multilinear polynomials over binary variables.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Coefficients with magnitude below this are dropped.
pub const PRUNE_EPS: f64 = 1e-12;
/// Default tolerance for coefficient comparisons.
pub const COMPARE_TOL: f64 = 1e-9;
/// Largest arity accepted by the truth-table transform.
pub const MAX_TABLE_VARS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PbfError {
    #[error("assignment has no value for {0}")]
    MissingVariable(VarId),
    #[error("truth table length {got} does not match 2^{vars} = {expected}")]
    LengthMismatch {
        vars: usize,
        expected: usize,
        got: usize,
    },
    #[error("too many variables: {got} (limit {limit})")]
    TooManyVariables { got: usize, limit: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VarKind {
    Original,
    Auxiliary,
}

/// A variable. Originals sort before auxiliaries; indices are 0-based and
/// unique within a kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId {
    pub kind: VarKind,
    pub index: u32,
}

impl VarId {
    pub const fn orig(index: u32) -> Self {
        VarId {
            kind: VarKind::Original,
            index,
        }
    }

    pub const fn aux(index: u32) -> Self {
        VarId {
            kind: VarKind::Auxiliary,
            index,
        }
    }

    pub fn is_aux(self) -> bool {
        self.kind == VarKind::Auxiliary
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::Original => write!(f, "b{}", self.index + 1),
            VarKind::Auxiliary => write!(f, "a{}", self.index + 1),
        }
    }
}

/// A product of distinct variables, kept sorted. The empty monomial is 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<VarId>);

impl Monomial {
    /// Builds a monomial; repeated variables collapse since b*b = b.
    pub fn new(vars: impl IntoIterator<Item = VarId>) -> Self {
        let mut v: Vec<VarId> = vars.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Monomial(v)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// Monomial over original variables given by 1-based indices.
    pub fn of(indices: &[u32]) -> Self {
        Monomial::new(indices.iter().map(|&i| VarId::orig(i - 1)))
    }

    pub fn vars(&self) -> &[VarId] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn product(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn is_subset_of(&self, set: &BTreeSet<VarId>) -> bool {
        self.0.iter().all(|v| set.contains(v))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for v in &self.0 {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A full or partial 0/1 assignment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<VarId, bool>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bit `j` of `bits` is the value of `vars[j]`.
    pub fn from_bits(vars: &[VarId], bits: u64) -> Self {
        Assignment(
            vars.iter()
                .enumerate()
                .map(|(j, &v)| (v, (bits >> j) & 1 == 1))
                .collect(),
        )
    }

    pub fn set(&mut self, v: VarId, value: bool) {
        self.0.insert(v, value);
    }

    pub fn get(&self, v: VarId) -> Option<bool> {
        self.0.get(&v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, bool)> + '_ {
        self.0.iter().map(|(&v, &b)| (v, b))
    }
}

/// Sparse multilinear polynomial: monomial to coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, f64>,
    eps: f64,
}

impl Default for Polynomial {
    fn default() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
            eps: PRUNE_EPS,
        }
    }
}

impl Polynomial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_epsilon(eps: f64) -> Self {
        Polynomial {
            terms: BTreeMap::new(),
            eps,
        }
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Self::new();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, f64)>) -> Self {
        let mut p = Self::new();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Shorthand for tests and fixtures: terms over 1-based original indices.
    pub fn from_indexed(terms: &[(f64, &[u32])]) -> Self {
        Self::from_terms(terms.iter().map(|(c, ix)| (Monomial::of(ix), *c)))
    }

    pub fn epsilon(&self) -> f64 {
        self.eps
    }

    /// Adds `c` to the coefficient of `m`, pruning if the result is tiny.
    pub fn add_term(&mut self, m: Monomial, c: f64) {
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().abs() < self.eps {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if c.abs() >= self.eps {
                    v.insert(c);
                }
            }
        }
    }

    pub fn coeff(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars().iter().copied()).collect()
    }

    pub fn original_vars(&self) -> BTreeSet<VarId> {
        self.variables().into_iter().filter(|v| !v.is_aux()).collect()
    }

    pub fn aux_vars(&self) -> BTreeSet<VarId> {
        self.variables().into_iter().filter(|v| v.is_aux()).collect()
    }

    /// Number of original variables implied by the largest original index.
    pub fn original_count(&self) -> usize {
        self.original_vars()
            .iter()
            .map(|v| v.index as usize + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn evaluate(&self, x: &Assignment) -> Result<f64, PbfError> {
        let mut total = 0.0;
        for (m, c) in self.terms() {
            let mut on = true;
            for &v in m.vars() {
                if !x.get(v).ok_or(PbfError::MissingVariable(v))? {
                    on = false;
                    break;
                }
            }
            if on {
                total += c;
            }
        }
        Ok(total)
    }

    pub fn scaled(&self, k: f64) -> Polynomial {
        Polynomial::from_terms(self.terms().map(|(m, c)| (m.clone(), c * k)))
    }

    /// Multilinear product.
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::new();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                out.add_term(m1.product(m2), c1 * c2);
            }
        }
        out
    }

    /// Coefficient-wise comparison with absolute tolerance.
    pub fn approx_eq(&self, other: &Polynomial, tol: f64) -> bool {
        let keys: BTreeSet<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .all(|m| (self.coeff(m) - other.coeff(m)).abs() <= tol)
    }

    /// Largest coefficient difference against `other`.
    pub fn max_diff(&self, other: &Polynomial) -> f64 {
        let keys: BTreeSet<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .map(|m| (self.coeff(m) - other.coeff(m)).abs())
            .fold(0.0, f64::max)
    }

    /// Substitutes `b <- 1 - b` for every variable in `vars`.
    pub fn flip_variables(&self, vars: &BTreeSet<VarId>) -> Polynomial {
        let mut out = Polynomial::with_epsilon(self.eps);
        for (m, c) in self.terms() {
            let (flipped, kept): (Vec<VarId>, Vec<VarId>) =
                m.vars().iter().partition(|v| vars.contains(v));
            // prod (1 - b_f) = sum over subsets T of (-1)^|T| b_T
            for sub in 0u32..(1 << flipped.len()) {
                let mut vs = kept.clone();
                let mut sign = 1.0;
                for (j, &v) in flipped.iter().enumerate() {
                    if sub >> j & 1 == 1 {
                        vs.push(v);
                        sign = -sign;
                    }
                }
                out.add_term(Monomial::new(vs), sign * c);
            }
        }
        out
    }

    /// Renames variables. A non-injective map merges factors (b*b = b).
    pub fn relabel(&self, map: impl Fn(VarId) -> VarId) -> Polynomial {
        Polynomial::from_terms(
            self.terms()
                .map(|(m, c)| (Monomial::new(m.vars().iter().map(|&v| map(v))), c)),
        )
    }

    /// Fixes one variable to a constant.
    pub fn fix(&self, v: VarId, value: bool) -> Polynomial {
        let mut out = Polynomial::with_epsilon(self.eps);
        for (m, c) in self.terms() {
            if m.contains(v) {
                if value {
                    out.add_term(Monomial::new(m.vars().iter().copied().filter(|&u| u != v)), c);
                }
            } else {
                out.add_term(m.clone(), c);
            }
        }
        out
    }

    /// `(degree <= 2 part, degree >= 3 part)`.
    pub fn degree_split(&self) -> (Polynomial, Polynomial) {
        let mut low = Polynomial::with_epsilon(self.eps);
        let mut high = Polynomial::with_epsilon(self.eps);
        for (m, c) in self.terms() {
            if m.degree() <= 2 {
                low.add_term(m.clone(), c);
            } else {
                high.add_term(m.clone(), c);
            }
        }
        (low, high)
    }

    /// Smallest and largest coefficient, constant included. `(0, 0)` when empty.
    pub fn coeff_range(&self) -> (f64, f64) {
        if self.is_empty() {
            return (0.0, 0.0);
        }
        self.terms().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, c)| {
            (lo.min(c), hi.max(c))
        })
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(a.0.cmp(b.0)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let sign = if c < 0.0 { "-" } else if i > 0 { "+" } else { "" };
            let mag = c.abs();
            if m.degree() == 0 {
                write!(f, "{sign}{mag}")?;
            } else if (mag - 1.0).abs() < 1e-15 {
                write!(f, "{sign}{m}")?;
            } else {
                write!(f, "{sign}{mag}{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in rhs.terms() {
            self.add_term(m.clone(), c);
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &rhs.scaled(-1.0)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scaled(-1.0)
    }
}

/// Polynomial compiled against an ordered variable list; bit `j` of the
/// argument to [`Compiled::eval`] is `vars[j]`.
#[derive(Clone, Debug)]
pub struct Compiled {
    terms: Vec<(u64, f64)>,
}

impl Compiled {
    pub fn new(p: &Polynomial, vars: &[VarId]) -> Result<Self, PbfError> {
        if vars.len() > 64 {
            return Err(PbfError::TooManyVariables {
                got: vars.len(),
                limit: 64,
            });
        }
        let pos: BTreeMap<VarId, usize> = vars.iter().enumerate().map(|(j, &v)| (v, j)).collect();
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let mut mask = 0u64;
            for v in m.vars() {
                mask |= 1 << pos.get(v).ok_or(PbfError::MissingVariable(*v))?;
            }
            terms.push((mask, c));
        }
        Ok(Compiled { terms })
    }

    #[inline]
    pub fn eval(&self, bits: u64) -> f64 {
        self.terms
            .iter()
            .filter(|(m, _)| m & !bits == 0)
            .map(|(_, c)| c)
            .sum()
    }
}

/// Multilinear interpolation of a table indexed by bitmask (bit `j` is
/// variable `j`, 0-based), via the Moebius transform.
pub fn truth_table_to_multilinear(values: &[f64], n: usize) -> Result<Polynomial, PbfError> {
    if n > MAX_TABLE_VARS {
        return Err(PbfError::TooManyVariables {
            got: n,
            limit: MAX_TABLE_VARS,
        });
    }
    if values.len() != 1 << n {
        return Err(PbfError::LengthMismatch {
            vars: n,
            expected: 1 << n,
            got: values.len(),
        });
    }
    let mut a = values.to_vec();
    for i in 0..n {
        let bit = 1 << i;
        for x in 0..a.len() {
            if x & bit != 0 {
                a[x] -= a[x ^ bit];
            }
        }
    }
    let mut p = Polynomial::new();
    for (mask, c) in a.into_iter().enumerate() {
        if c != 0.0 {
            p.add_term(
                Monomial::new((0..n).filter(|j| mask >> j & 1 == 1).map(|j| VarId::orig(j as u32))),
                c,
            );
        }
    }
    Ok(p)
}

/// Values of `p` on all `2^n` assignments of `b1..bn`, same indexing as
/// [`truth_table_to_multilinear`].
pub fn tabulate(p: &Polynomial, n: usize) -> Result<Vec<f64>, PbfError> {
    if n > MAX_TABLE_VARS {
        return Err(PbfError::TooManyVariables {
            got: n,
            limit: MAX_TABLE_VARS,
        });
    }
    let vars: Vec<VarId> = (0..n as u32).map(VarId::orig).collect();
    let c = Compiled::new(p, &vars)?;
    Ok((0..1u64 << n).map(|x| c.eval(x)).collect())
}
