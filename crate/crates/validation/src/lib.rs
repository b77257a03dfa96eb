//! Bookkeeping for the acceptance run. Each criterion collects named checks
//! and prints exactly one `PASS` or `FAIL` line when finished.

use std::time::{Duration, Instant};

struct Check {
    name: String,
    ok: bool,
    detail: String,
}

pub struct Criterion {
    number: u8,
    title: &'static str,
    budget: Option<Duration>,
    start: Instant,
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Criterion {
    pub fn new(number: u8, title: &'static str, budget: Option<Duration>) -> Self {
        Criterion {
            number,
            title,
            budget,
            start: Instant::now(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check {
            name: name.into(),
            ok,
            detail: detail.into(),
        });
        ok
    }

    /// Informational line; never affects the verdict.
    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Prints the checks and the verdict line, returns whether it passed.
    pub fn finish(mut self) -> bool {
        let elapsed = self.start.elapsed();
        let timing = match self.budget {
            Some(b) => {
                let ok = elapsed < b;
                self.check("runtime", ok, format!("{:.2} s (limit {} s)", elapsed.as_secs_f64(), b.as_secs()));
                format!("{:.2} s / {} s", elapsed.as_secs_f64(), b.as_secs())
            }
            None => format!("{:.2} s", elapsed.as_secs_f64()),
        };
        println!("criterion {}: {}", self.number, self.title);
        for c in &self.checks {
            println!("    {:<5} {}: {}", if c.ok { "ok" } else { "MISS" }, c.name, c.detail);
        }
        for n in &self.notes {
            println!("    note  {n}");
        }
        let missed: Vec<&str> = self.checks.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect();
        if missed.is_empty() {
            println!("PASS {} {} [{timing}]", self.number, self.title);
        } else {
            println!("FAIL {} {} [{timing}] missed: {}", self.number, self.title, missed.join("; "));
        }
        missed.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        let mut c = Criterion::new(0, "demo", None);
        c.check("a", true, "");
        c.note("n");
        assert!(c.finish());
        let mut c = Criterion::new(0, "demo", Some(Duration::from_secs(60)));
        c.check("a", false, "x");
        assert!(!c.finish());
    }
}
