//! Built-in worked examples, rerun end to end and compared with stored
//! expected outputs. Known misprints in the published numbers are reported as
//! `DEVIATION` lines; they do not fail the run.

use std::fmt;

use quadkit::fixtures::{self, GroupFixture};
use quadkit::partition::{quadratize_n_with, QuadratizeOptions};
use quadkit::quad4::{quadratize_4var_with, Quad4Options};
use quadkit::{
    baselines, metrics, quadratize_n, verify_perfect, Metrics, Monomial, Polynomial, Quadratization, Step,
    Tolerance, VarId,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Deviation,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Deviation => "DEVIATION",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub example: &'static str,
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<9} {} {}: {}", self.status, self.example, self.name, self.detail)
    }
}

struct Log {
    example: &'static str,
    checks: Vec<Check>,
}

impl Log {
    fn add(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.checks.push(Check {
            example: self.example,
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    fn expect(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.add(name, status, detail);
    }

    fn perfect(&mut self, name: &str, f: &Polynomial, q: &Polynomial) {
        match verify_perfect(f, q, Tolerance::default()) {
            Ok(r) => self.expect(name, r.ok, format!("worst gap {:e} over {} points", r.worst_gap, r.points)),
            Err(e) => self.expect(name, false, e.to_string()),
        }
    }

    fn metrics(&mut self, name: &str, m: &Metrics, aux: usize, terms: Option<usize>, range: (f64, f64)) {
        let ok = m.aux_count == aux
            && terms.is_none_or(|t| t == m.new_quadratic_terms)
            && close(m.coeff_min, range.0, 1e-9)
            && close(m.coeff_max, range.1, 1e-9);
        self.expect(
            name,
            ok,
            format!(
                "aux {} new terms {} range {:.2}..{:.2}",
                m.aux_count, m.new_quadratic_terms, m.coeff_min, m.coeff_max
            ),
        );
    }

    fn groups(&mut self, groups: &[GroupFixture]) {
        for g in groups {
            let opts = Quad4Options {
                prefer: g.prefer,
                ..Default::default()
            };
            match quadratize_4var_with(&g.function, g.aux, &opts) {
                Ok(q) => {
                    let d = q.quadratic.max_diff(&g.expected);
                    self.expect(format!("group {}", g.name), d < 1e-9, format!("max coefficient diff {d:e}"));
                }
                Err(e) => self.expect(format!("group {}", g.name), false, e.to_string()),
            }
        }
    }
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol
}

fn b(i: u32) -> VarId {
    VarId::orig(i - 1)
}

fn penalties(q: &Quadratization) -> Vec<f64> {
    q.components
        .iter()
        .filter_map(|c| match c.step {
            Step::Substitution { weight, .. } => Some(weight),
            _ => None,
        })
        .collect()
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>().join(",")
}

fn hinted(groups: &[GroupFixture]) -> QuadratizeOptions {
    QuadratizeOptions {
        hints: fixtures::hints(groups),
        ..Default::default()
    }
}

fn rosenberg_block(log: &mut Log, p: &Polynomial, pairs: Option<&[(VarId, VarId)]>, want: &[f64]) -> Option<Metrics> {
    match baselines::rosenberg(p, pairs) {
        Ok(r) => {
            let w = penalties(&r);
            let ok = w.len() == want.len() && w.iter().zip(want).all(|(x, y)| close(*x, *y, 1e-9));
            log.expect("rosenberg penalties", ok, fmt_list(&w));
            log.perfect("rosenberg perfect", p, &r.quadratic);
            Some(metrics(&r))
        }
        Err(e) => {
            log.expect("rosenberg", false, e.to_string());
            None
        }
    }
}

fn example_a() -> Vec<Check> {
    let mut log = Log {
        example: "A",
        checks: Vec::new(),
    };
    let groups = fixtures::example_a_groups();
    log.groups(&groups);

    // the published red gadget carries an overall minus on the aux factor
    let red = &groups[1];
    let printed = Polynomial::from_terms(red.expected.terms().map(|(m, c)| {
        let c = if m.contains(red.aux) { -c } else { c };
        (m.clone(), c)
    }));
    if let Ok(r) = verify_perfect(&red.function, &printed, Tolerance::default()) {
        log.add(
            "red gadget sign",
            Status::Deviation,
            format!("printed minus form gives gap {:.2}; shipped +b_a(31 - ...)", r.worst_gap),
        );
    }

    let p = fixtures::example_a();
    match quadratize_n(&p) {
        Ok(q) => {
            log.perfect("present perfect", &p, &q.quadratic);
            log.metrics("present metrics", &metrics(&q), 2, Some(14), (-13.0, 31.0));
        }
        Err(e) => log.expect("present", false, e.to_string()),
    }
    let pairs = [(b(1), b(2)), (b(3), b(4)), (b(5), b(6)), (b(7), b(8))];
    if let Some(m) = rosenberg_block(&mut log, &p, Some(&pairs), &[3.0, 6.0, 6.0, 10.0]) {
        log.metrics("rosenberg metrics", &m, 4, None, (-20.0, 30.0));
    }
    log.checks
}

fn example_b() -> Vec<Check> {
    let mut log = Log {
        example: "B",
        checks: Vec::new(),
    };
    for n in 2..=5u32 {
        let p = fixtures::example_b(n);
        match (quadratize_n(&p), baselines::termwise(&p)) {
            (Ok(q), Ok(t)) => {
                let (qa, ta) = (q.aux_vars.len(), t.aux_vars.len());
                log.expect(
                    format!("N={n} counts"),
                    qa == n as usize && ta == 2 * n as usize,
                    format!("present aux {qa}, termwise aux {ta}"),
                );
                log.perfect(&format!("N={n} present perfect"), &p, &q.quadratic);
                log.perfect(&format!("N={n} termwise perfect"), &p, &t.quadratic);
            }
            (Err(e), _) => log.expect(format!("N={n}"), false, e.to_string()),
            (_, Err(e)) => log.expect(format!("N={n}"), false, e.to_string()),
        }
    }
    log.checks
}

fn example_c() -> Vec<Check> {
    let mut log = Log {
        example: "C",
        checks: Vec::new(),
    };
    let groups = fixtures::example_c_groups();
    log.groups(&groups);
    let p = fixtures::example_c();
    match quadratize_n_with(&p, &hinted(&groups)) {
        Ok(q) => {
            log.perfect("present perfect", &p, &q.quadratic);
            log.metrics("present metrics", &metrics(&q), 3, Some(27), (-7.0, 10.0));
        }
        Err(e) => log.expect("present", false, e.to_string()),
    }
    let pairs = [(b(1), b(2)), (b(3), b(4)), (b(3), b(5)), (b(4), b(5))];
    if let Some(m) = rosenberg_block(&mut log, &p, Some(&pairs), &[21.0, 8.0, 6.0, 8.0]) {
        log.metrics("rosenberg metrics", &m, 4, None, (-42.0, 63.0));
    }
    log.checks
}

fn example_d() -> Vec<Check> {
    let mut log = Log {
        example: "D",
        checks: Vec::new(),
    };
    let groups = fixtures::example_d_groups();
    log.groups(&groups);
    let p = fixtures::example_d();
    match quadratize_n_with(&p, &hinted(&groups)) {
        Ok(q) => {
            log.perfect("present perfect", &p, &q.quadratic);
            let m = metrics(&q);
            log.metrics("present metrics", &m, 5, None, (-7.0, 10.0));
            log.add(
                "present range",
                Status::Deviation,
                format!("published -7..+8, merged output {:.0}..{:.0}", m.coeff_min, m.coeff_max),
            );
        }
        Err(e) => log.expect("present", false, e.to_string()),
    }
    let cover = fixtures::example_d_pairwise_cover();
    log.perfect("pairwise cover perfect", &p, &cover.quadratic);
    log.metrics("pairwise cover metrics", &metrics(&cover), 5, Some(31), (-42.0, 63.0));
    log.checks
}

/// Published rounded coefficients of the example E transform.
pub const E_PRINTED: [f64; 5] = [1.76, 1.76, -1.04, 3.02, 0.55];

/// Merged 1-aux quadratic of the rounded example E polynomial, in the order
/// `a, b1b2, b1b3, b1b4, b2b3, b2b4, b3b4, b1a, b2a, b3a, b4a`.
pub const E_PRESENT: [f64; 11] = [5.70, 0.20, 1.24, 1.96, 4.26, 4.98, 4.26, -1.44, -4.46, -5.50, -4.46];
/// The same list as published.
pub const E_PRESENT_PRINTED: [f64; 11] = [-5.70, 0.20, 1.24, 1.96, 4.26, 4.98, 4.26, -1.44, 4.46, 5.50, 4.46];

pub fn e_present_order() -> [Monomial; 11] {
    let a = VarId::aux(0);
    let m = |v: &[VarId]| Monomial::new(v.iter().copied());
    [
        m(&[a]),
        m(&[b(1), b(2)]),
        m(&[b(1), b(3)]),
        m(&[b(1), b(4)]),
        m(&[b(2), b(3)]),
        m(&[b(2), b(4)]),
        m(&[b(3), b(4)]),
        m(&[b(1), a]),
        m(&[b(2), a]),
        m(&[b(3), a]),
        m(&[b(4), a]),
    ]
}

fn example_e() -> Vec<Check> {
    let mut log = Log {
        example: "E",
        checks: Vec::new(),
    };
    let exact = fixtures::example_e();
    let order = [
        Monomial::of(&[1, 4]),
        Monomial::of(&[2, 4]),
        Monomial::of(&[1, 2, 4]),
        Monomial::of(&[2, 3, 4]),
        Monomial::of(&[1, 2, 3, 4]),
    ];
    let got: Vec<f64> = order.iter().map(|m| exact.coeff(m)).collect();
    let closed = fixtures::example_e_closed_form();
    let ok = exact.len() == 5 && got.iter().zip(closed).all(|(g, c)| close(*g, c, 1e-12));
    log.expect("transform", ok, format!("coefficients {}", fmt_list(&got)));
    let off: Vec<usize> = (0..5).filter(|&k| !close(got[k], E_PRINTED[k], 0.01)).collect();
    if !off.is_empty() {
        log.add(
            "transform",
            Status::Deviation,
            format!("published quartic {:.2} omits the sqrt(5) factor; transform gives {:.4}", E_PRINTED[4], got[4]),
        );
    }

    match quadratize_n(&exact) {
        Ok(q) => {
            log.perfect("present perfect (unrounded)", &exact, &q.quadratic);
            log.expect("present aux", q.aux_vars.len() == 1, format!("aux {}", q.aux_vars.len()));
        }
        Err(e) => log.expect("present", false, e.to_string()),
    }

    let rounded = fixtures::round2(&exact);
    match quadratize_n(&rounded) {
        Ok(q) => {
            log.perfect("present perfect (rounded)", &rounded, &q.quadratic);
            let vals: Vec<f64> = e_present_order().iter().map(|m| q.quadratic.coeff(m)).collect();
            let ok = q.quadratic.len() == 11 && vals.iter().zip(E_PRESENT).all(|(v, w)| close(*v, w, 0.005));
            log.expect("present coefficients", ok, fmt_list(&vals));
            let flipped = (0..11).filter(|&k| !close(vals[k], E_PRESENT_PRINTED[k], 0.005)).count();
            if flipped > 0 {
                let printed = Polynomial::from_terms(e_present_order().into_iter().zip(E_PRESENT_PRINTED));
                let gap = verify_perfect(&rounded, &printed, Tolerance::default()).map_or(f64::NAN, |r| r.worst_gap);
                log.add(
                    "present coefficients",
                    Status::Deviation,
                    format!("{flipped} published signs differ; the published list has gap {gap:.2}"),
                );
            }
            let m = metrics(&q);
            log.metrics("present metrics", &m, 1, None, (-5.50, 5.70));
            log.add(
                "present range",
                Status::Deviation,
                format!("published -1.44..+5.50, merged output {:.2}..{:.2}", m.coeff_min, m.coeff_max),
            );
        }
        Err(e) => log.expect("present", false, e.to_string()),
    }
    if let Some(m) = rosenberg_block(&mut log, &rounded, None, &[5.30, 1.24]) {
        log.metrics("rosenberg metrics", &m, 2, None, (-10.60, 15.90));
    }
    log.checks
}

pub fn run_all() -> Vec<Check> {
    [example_a(), example_b(), example_c(), example_d(), example_e()].concat()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_fails() {
        let checks = run_all();
        let failed: Vec<String> = checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .map(|c| c.to_string())
            .collect();
        assert!(failed.is_empty(), "{failed:#?}");
        for ex in ["A", "B", "C", "D", "E"] {
            assert!(checks.iter().any(|c| c.example == ex));
        }
    }
}
