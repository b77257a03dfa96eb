//! One-auxiliary perfect quadratization of 4-variable functions.
//!
//! A group is written in the form
//!
//! ```text
//! f = A b1b2b3b4 + a123 b1b2b3 + a124 b1b2b4 + a134 b1b3b4 + a234 b2b3b4 + (degree <= 2)
//! ```
//!
//! Four closed-form gadgets ([`Lemma`]) cover the canonical region
//! `A >= 0, a123 <= a124 <= a134 <= a234`. Everything else is reached by
//! complementing variables and relabeling, following a 35-row case table.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;
use crate::poly::{Compiled, Monomial, Polynomial, VarId};
use crate::quadratization::{Component, Quadratization, Step, Tolerance};

const LOCAL: [VarId; 4] = [VarId::orig(0), VarId::orig(1), VarId::orig(2), VarId::orig(3)];
const LOCAL_AUX: VarId = VarId::aux(0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Quad4Error {
    #[error("expected at most 4 original variables, got {0}")]
    TooManyVariables(usize),
    #[error("input contains auxiliary variable {0}")]
    AuxiliaryInput(VarId),
    #[error("coefficients outside the region of {0}")]
    PreconditionViolated(Lemma),
    #[error("{lemma} gadget is not perfect here (gap {gap:e})")]
    InterpretationFailure { lemma: Lemma, gap: f64 },
    #[error("no candidate plan verified")]
    NoPlan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Lemma {
    L1,
    L2,
    L3,
    L4,
}

impl Lemma {
    pub const ALL: [Lemma; 4] = [Lemma::L1, Lemma::L2, Lemma::L3, Lemma::L4];
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            Lemma::L1 => 1,
            Lemma::L2 => 2,
            Lemma::L3 => 3,
            Lemma::L4 => 4,
        };
        write!(f, "L{n}")
    }
}

/// Quartic and cubic coefficients of a group. `cubics[k]` belongs to the
/// triple that omits variable `k` (0-based), so `cubics = [a234, a134, a124, a123]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Coeffs4 {
    pub quartic: f64,
    pub cubics: [f64; 4],
}

impl Coeffs4 {
    pub fn new(a1234: f64, a123: f64, a124: f64, a134: f64, a234: f64) -> Self {
        Coeffs4 {
            quartic: a1234,
            cubics: [a234, a134, a124, a123],
        }
    }

    pub fn a123(&self) -> f64 {
        self.cubics[3]
    }
    pub fn a124(&self) -> f64 {
        self.cubics[2]
    }
    pub fn a134(&self) -> f64 {
        self.cubics[1]
    }
    pub fn a234(&self) -> f64 {
        self.cubics[0]
    }

    /// Reads the degree-3/4 coefficients over `vars`.
    pub fn from_polynomial(p: &Polynomial, vars: &[VarId; 4]) -> Self {
        let mut cubics = [0.0; 4];
        for (k, c) in cubics.iter_mut().enumerate() {
            *c = p.coeff(&triple(vars, k));
        }
        Coeffs4 {
            quartic: p.coeff(&Monomial::new(vars.iter().copied())),
            cubics,
        }
    }

    pub fn to_polynomial(&self, vars: &[VarId; 4]) -> Polynomial {
        let mut p = Polynomial::new();
        p.add_term(Monomial::new(vars.iter().copied()), self.quartic);
        for k in 0..4 {
            p.add_term(triple(vars, k), self.cubics[k]);
        }
        p
    }

    pub fn is_canonical(&self) -> bool {
        self.quartic >= 0.0 && self.is_sorted()
    }

    fn is_sorted(&self) -> bool {
        self.a123() <= self.a124() && self.a124() <= self.a134() && self.a134() <= self.a234()
    }

    /// Complements the local variables in `mask` (bit `k` = variable `k`).
    /// Returns the new coefficients and the degree-<=2 remainder created.
    pub fn flip(&self, mask: u8) -> (Coeffs4, Polynomial) {
        let set: BTreeSet<VarId> = (0..4).filter(|k| mask >> k & 1 == 1).map(|k| LOCAL[k]).collect();
        let g = self.to_polynomial(&LOCAL).flip_variables(&set);
        let (rem, _) = g.degree_split();
        (Coeffs4::from_polynomial(&g, &LOCAL), rem)
    }
}

fn triple(vars: &[VarId; 4], omit: usize) -> Monomial {
    Monomial::new((0..4).filter(|&j| j != omit).map(|j| vars[j]))
}

/// Sorts cubics into canonical order. `perm[k]` is the input variable that
/// lands in slot `k`. Already-sorted input maps to the identity; otherwise
/// ties go to the smaller omitted-variable index first.
pub fn canonicalize(c: &Coeffs4) -> (Coeffs4, [u8; 4]) {
    if c.is_sorted() {
        return (*c, [0, 1, 2, 3]);
    }
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| c.cubics[i].total_cmp(&c.cubics[j]).then(i.cmp(&j)));
    // ascending values fill a123, a124, a134, a234 = slots omitting 3, 2, 1, 0
    let mut perm = [0u8; 4];
    for (rank, &src) in order.iter().enumerate() {
        perm[3 - rank] = src as u8;
    }
    let mut cubics = [0.0; 4];
    for k in 0..4 {
        cubics[k] = c.cubics[perm[k] as usize];
    }
    (
        Coeffs4 {
            quartic: c.quartic,
            cubics,
        },
        perm,
    )
}

fn lemma1_formula(c: &Coeffs4) -> Polynomial {
    let a = c.quartic;
    let sum: f64 = c.cubics.iter().sum();
    let mut q = Polynomial::new();
    q.add_term(Monomial::new([LOCAL_AUX]), 3.0 * a + sum);
    for i in 0..4 {
        for j in i + 1..4 {
            let both: f64 = (0..4).filter(|&k| k != i && k != j).map(|k| c.cubics[k]).sum();
            q.add_term(Monomial::new([LOCAL[i], LOCAL[j]]), a + both);
        }
        let with_i: f64 = (0..4).filter(|&k| k != i).map(|k| c.cubics[k]).sum();
        q.add_term(Monomial::new([LOCAL[i], LOCAL_AUX]), -(2.0 * a + with_i));
    }
    q
}

fn lemma2_formula(c: &Coeffs4) -> Polynomial {
    let a = c.quartic;
    let sum: f64 = c.cubics.iter().sum();
    let mut q = Polynomial::new();
    q.add_term(Monomial::new([LOCAL_AUX]), -3.0 * a - 2.0 * sum);
    for i in 0..4 {
        let with_i: f64 = (0..4).filter(|&k| k != i).map(|k| c.cubics[k]).sum();
        q.add_term(Monomial::new([LOCAL[i], LOCAL_AUX]), a + with_i);
    }
    q
}

fn lemma3_formula(c: &Coeffs4) -> Polynomial {
    let (a, x123, x124, x134, x234) = (c.quartic, c.a123(), c.a124(), c.a134(), c.a234());
    let [b1, b2, b3, b4] = LOCAL;
    let ba = LOCAL_AUX;
    let m = |vs: &[VarId]| Monomial::new(vs.iter().copied());
    let big = a + x134 + x234;
    Polynomial::from_terms([
        (m(&[b3]), -x123),
        (m(&[b4]), -x124),
        (m(&[ba]), big),
        (m(&[b1, b3]), x123),
        (m(&[b2, b3]), x123),
        (m(&[b1, b4]), x124),
        (m(&[b2, b4]), x124),
        (m(&[b3, b4]), big),
        (m(&[b1, ba]), -x123 - x124 + x134),
        (m(&[b2, ba]), -x123 - x124 + x234),
        (m(&[b3, ba]), x123 - big),
        (m(&[b4, ba]), x124 - big),
    ])
}

/// The `L3` gadget with its auxiliary complemented.
fn lemma4_formula(c: &Coeffs4) -> Polynomial {
    lemma3_formula(c).flip_variables(&[LOCAL_AUX].into())
}

/// Gadget over local variables `b1..b4 = orig(0..3)` and `aux(0)`, with no
/// region check.
pub fn lemma_formula(lemma: Lemma, c: &Coeffs4) -> Polynomial {
    match lemma {
        Lemma::L1 => lemma1_formula(c),
        Lemma::L2 => lemma2_formula(c),
        Lemma::L3 => lemma3_formula(c),
        Lemma::L4 => lemma4_formula(c),
    }
}

/// Whether `c` lies in the stated region of `lemma`, with slack `tol`.
pub fn precondition_holds(lemma: Lemma, c: &Coeffs4, tol: f64) -> bool {
    let le = |x: f64, y: f64| x <= y + tol;
    let a = c.quartic;
    let (x123, x124, x134, x234) = (c.a123(), c.a124(), c.a134(), c.a234());
    match lemma {
        Lemma::L1 => {
            let pos = le(0.0, a) && c.cubics.iter().all(|&x| le(-a / 2.0, x));
            let one_low = le(-a, x123)
                && le(x123, -a / 2.0)
                && le(-a / 2.0, 0.0)
                && le(0.0, x234)
                && le(x234, x134)
                && le(x134, x124);
            let pair = le(-a, x123)
                && le(x123, -a / 2.0)
                && le(-a / 2.0, x124)
                && le(x124, x134)
                && le(x134, x234)
                && le(x234, 0.0)
                && le(-a, x123 + x124);
            pos || one_low || pair
        }
        Lemma::L2 => le(a, 0.0) && c.cubics.iter().all(|&x| le(x, 0.0)),
        Lemma::L3 => {
            le(0.0, a)
                && le(x123, -a)
                && le(-a / 2.0, x124)
                && le(x124, x134)
                && le(x134, 0.0)
                && le(0.0, x234)
        }
        Lemma::L4 => {
            le(0.0, a)
                && le(x123, -a / 2.0)
                && le(-a / 2.0, x124)
                && le(x124, x134)
                && le(x134, x234)
                && le(x234, 0.0)
                && le(x123 + x124, -a)
        }
    }
}

/// Worst violation of `min_a q = f` over the 32 local points, beyond `tol`.
/// `None` when perfect.
fn local_violation(f: &Polynomial, q: &Polynomial, tol: Tolerance) -> Option<f64> {
    let vars = [LOCAL[0], LOCAL[1], LOCAL[2], LOCAL[3], LOCAL_AUX];
    let cf = Compiled::new(f, &vars).ok()?;
    let cq = Compiled::new(q, &vars).ok()?;
    let mut worst: Option<f64> = None;
    for x in 0..16u64 {
        let fx = cf.eval(x);
        let m = cq.eval(x).min(cq.eval(x | 16));
        let gap = (m - fx).abs();
        if gap > tol.bound(fx) {
            worst = Some(worst.map_or(gap, |w: f64| w.max(gap)));
        }
    }
    worst
}

fn checked(lemma: Lemma, c: &Coeffs4, self_verify: bool) -> Result<Polynomial, Quad4Error> {
    if !precondition_holds(lemma, c, 1e-9) {
        return Err(Quad4Error::PreconditionViolated(lemma));
    }
    let q = lemma_formula(lemma, c);
    if self_verify {
        if let Some(gap) = local_violation(&c.to_polynomial(&LOCAL), &q, Tolerance::default()) {
            return Err(Quad4Error::InterpretationFailure { lemma, gap });
        }
    }
    Ok(q)
}

pub fn lemma1(c: &Coeffs4) -> Result<Polynomial, Quad4Error> {
    checked(Lemma::L1, c, false)
}

pub fn lemma2(c: &Coeffs4) -> Result<Polynomial, Quad4Error> {
    checked(Lemma::L2, c, false)
}

/// Verified against `f` on all 32 points before returning.
pub fn lemma3(c: &Coeffs4) -> Result<Polynomial, Quad4Error> {
    checked(Lemma::L3, c, true)
}

/// Verified against `f` on all 32 points before returning.
pub fn lemma4(c: &Coeffs4) -> Result<Polynomial, Quad4Error> {
    checked(Lemma::L4, c, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RowLemma {
    Fixed(Lemma),
    /// `L1` when `a123 + a124 >= -A`, `L4` when `<= -A`.
    Split,
}

struct Row {
    intervals: [u8; 4],
    flips: u8,
    lemma: RowLemma,
}

const fn row(iv: u16, flips: u8, lemma: RowLemma) -> Row {
    Row {
        intervals: [
            (iv / 1000) as u8,
            (iv / 100 % 10) as u8,
            (iv / 10 % 10) as u8,
            (iv % 10) as u8,
        ],
        flips,
        lemma,
    }
}

use RowLemma::{Fixed, Split};
const F1: RowLemma = Fixed(Lemma::L1);
const F2: RowLemma = Fixed(Lemma::L2);
const F3: RowLemma = Fixed(Lemma::L3);
const F4: RowLemma = Fixed(Lemma::L4);
const B34: u8 = 0b1100;
const B23: u8 = 0b0110;
const ALL: u8 = 0b1111;

/// Intervals (for a123, a124, a134, a234): 1 = `<= -A`, 2 = `[-A, -A/2]`,
/// 3 = `[-A/2, 0]`, 4 = `>= 0`. Flips are bitmasks over b1..b4.
const TABLE: [Row; 35] = [
    row(4444, 0, F1),
    row(3444, 0, F1),
    row(2444, 0, F1),
    row(1444, 0b1000, F2),
    row(3344, 0, F1),
    row(2344, 0b1010, F3),
    row(1344, B34, F1),
    row(2244, B34, F1),
    row(1244, B34, F1),
    row(1144, B34, F1),
    row(3334, 0, F1),
    row(2334, 0b1001, F4),
    row(1334, 0, F3),
    row(2234, B34, F1),
    row(1234, B34, F1),
    row(1134, B34, F1),
    row(2224, ALL, F4),
    row(1224, B23, F3),
    row(1124, B34, F1),
    row(1114, 0b1110, F2),
    row(3333, 0, F1),
    row(2333, 0, Split),
    row(1333, 0, F4),
    row(2233, B34, F1),
    row(1233, B34, F1),
    row(1133, B34, F1),
    row(2223, B34, Split),
    row(1223, B23, F4),
    row(1123, B23, F3),
    row(1113, ALL, F1),
    row(2222, ALL, F1),
    row(1222, ALL, F1),
    row(1122, ALL, F1),
    row(1112, ALL, F1),
    row(1111, ALL, F1),
];

fn in_interval(x: f64, a: f64, iv: u8, tol: f64) -> bool {
    match iv {
        1 => x <= -a + tol,
        2 => -a - tol <= x && x <= -a / 2.0 + tol,
        3 => -a / 2.0 - tol <= x && x <= tol,
        _ => x >= -tol,
    }
}

/// A matched row of the case table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseRow {
    /// 1-based row number.
    pub row: u8,
    /// Variables to complement, bit `k` = canonical variable `k`.
    pub flips: u8,
    pub lemma: Lemma,
}

/// Every row matching canonical coefficients `c`, in table order. A split
/// row contributes one entry per admissible lemma.
pub fn matching_rows(c: &Coeffs4, tol: f64) -> Vec<CaseRow> {
    let a = c.quartic;
    let xs = [c.a123(), c.a124(), c.a134(), c.a234()];
    let mut out = Vec::new();
    for (i, r) in TABLE.iter().enumerate() {
        if !(0..4).all(|k| in_interval(xs[k], a, r.intervals[k], tol)) {
            continue;
        }
        let mut push = |lemma| {
            out.push(CaseRow {
                row: i as u8 + 1,
                flips: r.flips,
                lemma,
            })
        };
        match r.lemma {
            Fixed(l) => push(l),
            Split => {
                let s = xs[0] + xs[1];
                if s >= -a - tol {
                    push(Lemma::L1);
                }
                if s <= -a + tol {
                    push(Lemma::L4);
                }
            }
        }
    }
    out
}

/// The earliest matching row, or the earliest whose lemma is `prefer`.
pub fn classify_case(c: &Coeffs4, prefer: Option<Lemma>) -> Option<CaseRow> {
    let rows = matching_rows(c, 1e-9);
    prefer
        .and_then(|l| rows.iter().find(|r| r.lemma == l).copied())
        .or_else(|| rows.first().copied())
}

/// How a group gadget is built.
///
/// Group variable 1 is complemented first when `pre_flip` is set (negative
/// quartic). Canonical variable `k` is group variable `permutation[k]`;
/// `flip_mask` (bit `k` = canonical variable `k`) is complemented next, then
/// lemma slot `s` takes canonical variable `resort[s]`. Everything is undone
/// on the output. `case_row` is `None` when found by exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CasePlan {
    pub flip_mask: u8,
    pub permutation: [u8; 4],
    pub lemma: Lemma,
    pub case_row: Option<u8>,
    pub pre_flip: bool,
    pub resort: [u8; 4],
}

impl CasePlan {
    /// 1-based canonical variables complemented, as in `{3,4}`.
    pub fn flips(&self) -> Vec<u8> {
        (0..4).filter(|k| self.flip_mask >> k & 1 == 1).map(|k| k + 1).collect()
    }

    /// All complemented group variables, bit `k` = group variable `k`.
    pub fn net_mask(&self) -> u8 {
        let mut mask = self.pre_flip as u8;
        for j in 0..4 {
            if self.flip_mask >> j & 1 == 1 {
                mask ^= 1 << self.permutation[j];
            }
        }
        mask
    }

    /// Group variable feeding each lemma slot.
    pub fn slots(&self) -> [u8; 4] {
        std::array::from_fn(|s| self.permutation[self.resort[s] as usize])
    }
}

/// Gadget for the super-quadratic part `high` (over `LOCAL`).
pub fn realize(high: &Polynomial, plan: &CasePlan) -> Polynomial {
    let mask = plan.net_mask();
    let set: BTreeSet<VarId> = (0..4).filter(|k| mask >> k & 1 == 1).map(|k| LOCAL[k]).collect();
    let slots = plan.slots();
    let mut slot_of = [0u32; 4];
    for (s, &v) in slots.iter().enumerate() {
        slot_of[v as usize] = s as u32;
    }
    let to_slot = |v: VarId| if v.is_aux() { v } else { VarId::orig(slot_of[v.index as usize]) };
    let from_slot = |v: VarId| if v.is_aux() { v } else { VarId::orig(slots[v.index as usize] as u32) };

    let w = high.flip_variables(&set).relabel(to_slot);
    let c = Coeffs4::from_polynomial(&w, &LOCAL);
    let (rem, _) = w.degree_split();
    let q = &lemma_formula(plan.lemma, &c) + &rem;
    q.relabel(from_slot).flip_variables(&set)
}

/// Case-table plan for `high` (over `LOCAL`).
fn table_plan(high: &Polynomial, prefer: Option<Lemma>) -> Option<CasePlan> {
    let raw = Coeffs4::from_polynomial(high, &LOCAL);
    let pre_flip = raw.quartic < 0.0;
    let (start, _) = raw.flip(pre_flip as u8);
    let (canon, permutation) = canonicalize(&start);
    let hit = classify_case(&canon, prefer)?;
    let (flipped, _) = canon.flip(hit.flips);
    let (_, resort) = canonicalize(&flipped);
    Some(CasePlan {
        flip_mask: hit.flips,
        permutation,
        lemma: hit.lemma,
        case_row: Some(hit.row),
        pre_flip,
        resort,
    })
}

pub fn permutations() -> Vec<[u8; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                if a != b && a != c && b != c {
                    out.push([a, b, c, 6 - a - b - c]);
                }
            }
        }
    }
    out
}

/// Options for [`quadratize_4var_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Quad4Options {
    /// Prefer the earliest matching row that uses this lemma.
    pub prefer: Option<Lemma>,
    pub tolerance: Tolerance,
    pub exec: Exec,
}

/// Plan and gadget for a super-quadratic part over `LOCAL`; `full` is the
/// whole local function the gadget plus `full`'s low part must reproduce.
fn plan_local(
    full: &Polynomial,
    high: &Polynomial,
    opts: &Quad4Options,
) -> Result<(CasePlan, Polynomial), Quad4Error> {
    let (low, _) = full.degree_split();
    let attempt = |plan: &CasePlan| {
        let q = &realize(high, plan) + &low;
        local_violation(full, &q, opts.tolerance)
            .is_none()
            .then_some(q)
    };
    if let Some(plan) = table_plan(high, opts.prefer) {
        if let Some(q) = attempt(&plan) {
            return Ok((plan, q));
        }
    }
    let perms = permutations();
    let n = Lemma::ALL.len() * perms.len() * 16;
    opts.exec
        .find_first(n, |rank| {
            let plan = CasePlan {
                flip_mask: (rank % 16) as u8,
                permutation: perms[rank / 16 % 24],
                lemma: Lemma::ALL[rank / (16 * 24)],
                case_row: None,
                pre_flip: false,
                resort: [0, 1, 2, 3],
            };
            attempt(&plan).map(|q| (plan, q))
        })
        .ok_or(Quad4Error::NoPlan)
}

/// Perfect quadratization of `f` (at most 4 original variables) using
/// auxiliary `aux`. The degree-<=2 part of `f` passes through unchanged.
pub fn quadratize_4var(f: &Polynomial, aux: VarId) -> Result<Quadratization, Quad4Error> {
    quadratize_4var_with(f, aux, &Quad4Options::default())
}

pub fn quadratize_4var_with(
    f: &Polynomial,
    aux: VarId,
    opts: &Quad4Options,
) -> Result<Quadratization, Quad4Error> {
    if let Some(v) = f.aux_vars().into_iter().next() {
        return Err(Quad4Error::AuxiliaryInput(v));
    }
    let (low, high) = f.degree_split();
    if high.is_empty() {
        return Ok(Quadratization::assemble(low, Vec::new(), Vec::new(), opts.tolerance));
    }
    let support: Vec<VarId> = high.variables().into_iter().collect();
    if support.len() > 4 {
        return Err(Quad4Error::TooManyVariables(support.len()));
    }
    let (gadget, plan) = gadget_for(&high, &support, aux, opts)?;
    let component = Component {
        step: Step::Group {
            support: support.clone(),
            plan,
            aux,
        },
        poly: gadget,
    };
    Ok(Quadratization::assemble(low, vec![component], vec![aux], opts.tolerance))
}

/// Gadget (no pass-through part) for super-quadratic `high` on `support`.
pub(crate) fn gadget_for(
    high: &Polynomial,
    support: &[VarId],
    aux: VarId,
    opts: &Quad4Options,
) -> Result<(Polynomial, CasePlan), Quad4Error> {
    let local_of = |v: VarId| {
        let k = support.iter().position(|&s| s == v).expect("variable in support");
        LOCAL[k]
    };
    let high_local = high.relabel(local_of);
    let (plan, q) = plan_local(&high_local, &high_local, opts)?;
    // slots past the support are phantom variables: pin them to 0
    let mut q = q;
    for phantom in &LOCAL[support.len()..] {
        q = q.fix(*phantom, false);
    }
    let back = |v: VarId| if v.is_aux() { aux } else { support[v.index as usize] };
    Ok((q.relabel(back), plan))
}
