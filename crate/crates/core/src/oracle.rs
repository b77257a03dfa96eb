//! Independent checks: exhaustive perfection verification and a brute-force
//! one-auxiliary gadget synthesizer.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::exec::Exec;
use crate::poly::{Assignment, Compiled, Monomial, PbfError, Polynomial, VarId};
use crate::quadratization::Tolerance;

/// Largest enumeration, in bits, [`verify_perfect`] will attempt.
pub const BUDGET_BITS: usize = 28;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("enumeration needs 2^{bits} points, budget is 2^{limit}")]
    BudgetExceeded { bits: usize, limit: usize },
    #[error("target function contains auxiliary variable {0}")]
    AuxiliaryInTarget(VarId),
    #[error("synthesizer takes at most 4 variables, got {0}")]
    TooManyVariables(usize),
    #[error(transparent)]
    Pbf(#[from] PbfError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub ok: bool,
    /// Largest `|min_a q(x,a) - f(x)|` seen.
    pub worst_gap: f64,
    /// Original-variable assignment where `worst_gap` occurs (lowest index on ties).
    pub witness: Assignment,
    /// Number of original assignments checked.
    pub points: u64,
}

#[derive(Clone, Copy)]
struct Chunk {
    worst: f64,
    at: u64,
    failed: bool,
}

/// Checks `min over aux of q(x, aux) == f(x)` for every assignment of the
/// original variables, within `tol`.
///
/// Auxiliaries that share no monomial with another auxiliary are minimized in
/// closed form, so only coupled auxiliaries count against the budget
/// `2^(n + m) <= 2^28`.
pub fn verify_perfect(
    f: &Polynomial,
    q: &Polynomial,
    tol: Tolerance,
) -> Result<VerificationReport, OracleError> {
    verify_perfect_with(f, q, tol, Exec::default())
}

pub fn verify_perfect_with(
    f: &Polynomial,
    q: &Polynomial,
    tol: Tolerance,
    exec: Exec,
) -> Result<VerificationReport, OracleError> {
    if let Some(v) = f.aux_vars().into_iter().next() {
        return Err(OracleError::AuxiliaryInTarget(v));
    }
    let originals: Vec<VarId> = f.original_vars().union(&q.original_vars()).copied().collect();
    let mut coupled = BTreeSet::new();
    for (m, _) in q.terms() {
        let aux: Vec<VarId> = m.vars().iter().copied().filter(|v| v.is_aux()).collect();
        if aux.len() > 1 {
            coupled.extend(aux);
        }
    }
    let free: Vec<VarId> = q.aux_vars().difference(&coupled).copied().collect();
    let coupled: Vec<VarId> = coupled.into_iter().collect();

    let n = originals.len();
    let bits = n + coupled.len();
    if bits > BUDGET_BITS {
        return Err(OracleError::BudgetExceeded {
            bits,
            limit: BUDGET_BITS,
        });
    }

    // q = g + sum_k a_k h_k(x) over the free auxiliaries a_k
    let mut g = Polynomial::new();
    let mut hs = vec![Polynomial::new(); free.len()];
    for (m, c) in q.terms() {
        match free.iter().position(|a| m.contains(*a)) {
            Some(k) => hs[k].add_term(
                Monomial::new(m.vars().iter().copied().filter(|&v| v != free[k])),
                c,
            ),
            None => g.add_term(m.clone(), c),
        }
    }
    let mut gvars = originals.clone();
    gvars.extend(&coupled);
    let cg = Compiled::new(&g, &gvars)?;
    let ch: Vec<Compiled> = hs
        .iter()
        .map(|h| Compiled::new(h, &originals))
        .collect::<Result<_, _>>()?;
    let cf = Compiled::new(f, &originals)?;

    let total = 1u64 << n;
    let chunk_bits = n.saturating_sub(8);
    let chunks = (total >> chunk_bits) as usize;
    let ys = 1u64 << coupled.len();
    let results = exec.map(chunks, |ci| {
        let mut out = Chunk {
            worst: 0.0,
            at: (ci as u64) << chunk_bits,
            failed: false,
        };
        let start = (ci as u64) << chunk_bits;
        for x in start..start + (1u64 << chunk_bits) {
            let fx = cf.eval(x);
            let mut m = f64::INFINITY;
            for y in 0..ys {
                m = m.min(cg.eval(x | y << n));
            }
            for h in &ch {
                m += h.eval(x).min(0.0);
            }
            let gap = (m - fx).abs();
            if gap > out.worst {
                out.worst = gap;
                out.at = x;
            }
            if gap > tol.bound(fx) {
                out.failed = true;
            }
        }
        out
    });

    let mut best = Chunk {
        worst: 0.0,
        at: 0,
        failed: false,
    };
    for c in results {
        if c.worst > best.worst {
            best.worst = c.worst;
            best.at = c.at;
        }
        best.failed |= c.failed;
    }
    Ok(VerificationReport {
        ok: !best.failed,
        worst_gap: best.worst,
        witness: Assignment::from_bits(&originals, best.at),
        points: total,
    })
}

/// A gadget found by [`synthesize_one_aux`].
#[derive(Clone, Debug, PartialEq)]
pub struct Synthesized {
    /// Bit `x` says which auxiliary value is tight at local point `x`.
    pub pattern: u32,
    pub quadratic: Polynomial,
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
const PIVOT_EPS: f64 = 1e-10;

/// Unknowns: 1, b1..b4, a, six pairs bibj, four pairs bi*a.
fn basis_row(x: usize, a: bool) -> [f64; 16] {
    let b = |i: usize| (x >> i & 1) as f64;
    let av = a as u8 as f64;
    let mut r = [0.0; 16];
    r[0] = 1.0;
    for i in 0..4 {
        r[1 + i] = b(i);
        r[12 + i] = b(i) * av;
    }
    r[5] = av;
    for (k, &(i, j)) in PAIRS.iter().enumerate() {
        r[6 + k] = b(i) * b(j);
    }
    r
}

fn solve16(mut m: [[f64; 16]; 16], mut rhs: [f64; 16]) -> Option<[f64; 16]> {
    for col in 0..16 {
        let (piv, val) = (col..16)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        if val < PIVOT_EPS {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..16 {
            let k = m[r][col] / m[col][col];
            if k != 0.0 {
                for c in col..16 {
                    m[r][c] -= k * m[col][c];
                }
                rhs[r] -= k * rhs[col];
            }
        }
    }
    let mut x = [0.0; 16];
    for r in (0..16).rev() {
        let s: f64 = (r + 1..16).map(|c| m[r][c] * x[c]).sum();
        x[r] = (rhs[r] - s) / m[r][r];
    }
    Some(x)
}

fn dot(a: &[f64; 16], b: &[f64; 16]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Scans all `2^16` tight-value patterns in increasing order and returns the
/// first whose linear system is solvable and whose solution is perfect for
/// `f` (at most 4 original variables). The auxiliary is `aux(0)`.
pub fn synthesize_one_aux(f: &Polynomial, tol: Tolerance) -> Result<Option<Synthesized>, OracleError> {
    synthesize_one_aux_with(f, tol, Exec::default())
}

pub fn synthesize_one_aux_with(
    f: &Polynomial,
    tol: Tolerance,
    exec: Exec,
) -> Result<Option<Synthesized>, OracleError> {
    if let Some(v) = f.aux_vars().into_iter().next() {
        return Err(OracleError::AuxiliaryInTarget(v));
    }
    let support: Vec<VarId> = f.original_vars().into_iter().collect();
    if support.len() > 4 {
        return Err(OracleError::TooManyVariables(support.len()));
    }
    let cf = Compiled::new(f, &support)?;
    let fx: [f64; 16] = std::array::from_fn(|x| cf.eval(x as u64 & ((1 << support.len()) - 1)));
    let rows: [[[f64; 16]; 2]; 16] = std::array::from_fn(|x| [basis_row(x, false), basis_row(x, true)]);

    let hit = exec.find_first(1 << 16, |p| {
        let s = |x: usize| p >> x & 1 == 1;
        let m: [[f64; 16]; 16] = std::array::from_fn(|x| rows[x][s(x) as usize]);
        let c = solve16(m, fx)?;
        (0..16)
            .all(|x| {
                let bound = tol.bound(fx[x]);
                (dot(&rows[x][s(x) as usize], &c) - fx[x]).abs() <= bound
                    && dot(&rows[x][!s(x) as usize], &c) >= fx[x] - bound
            })
            .then_some((p as u32, c))
    });

    Ok(hit.map(|(pattern, c)| {
        let local = |i: usize| VarId::orig(i as u32);
        let a = VarId::aux(0);
        let mut q = Polynomial::new();
        q.add_term(Monomial::one(), c[0]);
        for i in 0..4 {
            q.add_term(Monomial::new([local(i)]), c[1 + i]);
            q.add_term(Monomial::new([local(i), a]), c[12 + i]);
        }
        q.add_term(Monomial::new([a]), c[5]);
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            q.add_term(Monomial::new([local(i), local(j)]), c[6 + k]);
        }
        for k in support.len()..4 {
            q = q.fix(local(k), false);
        }
        let quadratic = q.relabel(|v| if v.is_aux() { v } else { support[v.index as usize] });
        Synthesized { pattern, quadratic }
    }))
}
