//! Text formats: term lists, value tables and QUBO files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use quadkit::{Monomial, Polynomial, VarId};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn parse_f64(tok: &str, line: usize) -> Result<f64, ParseError> {
    let v: f64 = tok
        .parse()
        .map_err(|_| err(line, format!("bad number '{tok}'")))?;
    if !v.is_finite() {
        return Err(err(line, format!("non-finite number '{tok}'")));
    }
    Ok(v)
}

fn parse_index(tok: &str, line: usize) -> Result<u32, ParseError> {
    match tok.parse::<u32>() {
        Ok(i) if i >= 1 => Ok(i),
        _ => Err(err(line, format!("bad variable index '{tok}' (1-based)"))),
    }
}

/// Parses `coef : i j k` lines. Duplicate monomials are summed.
pub fn parse_polynomial(text: &str) -> Result<Polynomial, ParseError> {
    let mut p = Polynomial::new();
    for (line, body) in content_lines(text) {
        let (coef, vars) = body
            .split_once(':')
            .ok_or_else(|| err(line, "expected 'coefficient : variables'"))?;
        let c = parse_f64(coef.trim(), line)?;
        let mut seen = Vec::new();
        for tok in vars.split_whitespace() {
            let i = parse_index(tok, line)?;
            if seen.contains(&i) {
                return Err(err(line, format!("variable {i} repeated in one term")));
            }
            seen.push(i);
        }
        p.add_term(Monomial::new(seen.into_iter().map(|i| VarId::orig(i - 1))), c);
    }
    Ok(p)
}

/// 1-based index of `v` when originals occupy `1..=n` and auxiliaries follow.
pub fn dense_index(v: VarId, n: u32) -> u32 {
    if v.is_aux() {
        n + v.index + 1
    } else {
        v.index + 1
    }
}

/// Term-list text. Auxiliaries are written as `n + k`.
pub fn print_polynomial(p: &Polynomial, n: u32) -> String {
    let mut out = String::new();
    for (m, c) in p.terms() {
        let idx: Vec<String> = m.vars().iter().map(|&v| dense_index(v, n).to_string()).collect();
        let _ = writeln!(out, "{c} : {}", idx.join(" "));
    }
    out
}

/// Whitespace-separated values, `#` comments allowed; length must be a power of two.
pub fn parse_table(text: &str) -> Result<(Vec<f64>, usize), ParseError> {
    let mut values = Vec::new();
    let mut last = 0;
    for (line, body) in content_lines(text) {
        last = line;
        for tok in body.split_whitespace() {
            values.push(parse_f64(tok, line)?);
        }
    }
    if values.is_empty() || !values.len().is_power_of_two() {
        return Err(err(last, format!("{} values; need a power of two", values.len())));
    }
    let n = values.len().trailing_zeros() as usize;
    Ok((values, n))
}

/// Upper-triangular QUBO with originals `1..=n` and auxiliaries `n+1..=n+m`.
#[derive(Clone, Debug, PartialEq)]
pub struct Qubo {
    pub n: u32,
    pub m: u32,
    pub constant: f64,
    pub entries: BTreeMap<(u32, u32), f64>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuboError {
    #[error("degree {0} monomial cannot be written as QUBO")]
    NotQuadratic(usize),
    #[error("original variable b{0} outside 1..={1}")]
    OutOfRange(u32, u32),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

impl Qubo {
    /// `n` is the original-variable count of the source function.
    pub fn from_polynomial(q: &Polynomial, n: u32) -> Result<Qubo, QuboError> {
        if q.degree() > 2 {
            return Err(QuboError::NotQuadratic(q.degree()));
        }
        let m = q.aux_vars().iter().map(|v| v.index + 1).max().unwrap_or(0);
        let mut qubo = Qubo {
            n,
            m,
            constant: 0.0,
            entries: BTreeMap::new(),
        };
        for (mono, c) in q.terms() {
            let ix: Vec<u32> = mono.vars().iter().map(|&v| dense_index(v, n)).collect();
            if let Some(v) = mono.vars().iter().find(|v| !v.is_aux() && v.index >= n) {
                return Err(QuboError::OutOfRange(v.index + 1, n));
            }
            match ix[..] {
                [] => qubo.constant = c,
                [i] => {
                    qubo.entries.insert((i, i), c);
                }
                [i, j] => {
                    qubo.entries.insert((i.min(j), i.max(j)), c);
                }
                _ => unreachable!("degree checked"),
            }
        }
        Ok(qubo)
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let var = |i: u32| {
            if i <= self.n {
                VarId::orig(i - 1)
            } else {
                VarId::aux(i - self.n - 1)
            }
        };
        let mut p = Polynomial::constant(self.constant);
        for (&(i, j), &c) in &self.entries {
            p.add_term(Monomial::new([var(i), var(j)]), c);
        }
        p
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.m, sig17(self.constant));
        for (&(i, j), &c) in &self.entries {
            let _ = writeln!(out, "{i} {j} {}", sig17(c));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Qubo, QuboError> {
        let mut lines = content_lines(text);
        let (hl, header) = lines.next().ok_or_else(|| err(1, "missing 'n m c0' header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        let [n, m, c0] = h[..] else {
            return Err(err(hl, "header must be 'n m c0'").into());
        };
        let n: u32 = n.parse().map_err(|_| err(hl, format!("bad count '{n}'")))?;
        let m: u32 = m.parse().map_err(|_| err(hl, format!("bad count '{m}'")))?;
        let mut qubo = Qubo {
            n,
            m,
            constant: parse_f64(c0, hl)?,
            entries: BTreeMap::new(),
        };
        for (line, body) in lines {
            let t: Vec<&str> = body.split_whitespace().collect();
            let [i, j, c] = t[..] else {
                return Err(err(line, "expected 'i j coeff'").into());
            };
            let (i, j) = (parse_index(i, line)?, parse_index(j, line)?);
            if i > j {
                return Err(err(line, format!("need i <= j, got {i} {j}")).into());
            }
            if j > n + m {
                return Err(err(line, format!("index {j} exceeds n + m = {}", n + m)).into());
            }
            *qubo.entries.entry((i, j)).or_insert(0.0) += parse_f64(c, line)?;
        }
        Ok(qubo)
    }
}
