//! Inequality checks. Each check evaluates both sides with certified
//! series values and compares the margin against four times the propagated
//! operand error.

mod checks;
mod report;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{SequenceSpec, SeriesParams};

pub use checks::{
    check_chain_001, check_complete_monotonicity, check_log_convexity, check_lower_bound_002,
    check_mm, check_re1, check_turan, check_wilkins, check_zzkk, SERIES_TOL,
};
pub use report::{CheckReport, CheckVerdict, BUDGET_FACTOR};

/// Default r grid shared by the suites.
pub const DEFAULT_R_GRID: [f64; 6] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Suite {
    Monotone,
    LogConvex,
    Chain001,
    LowerBound002,
    Re1,
    Turan,
    Zzkk,
    Mm,
    Wilkins,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Monotone,
        Suite::LogConvex,
        Suite::Chain001,
        Suite::LowerBound002,
        Suite::Re1,
        Suite::Turan,
        Suite::Zzkk,
        Suite::Mm,
        Suite::Wilkins,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Monotone => "monotone",
            Suite::LogConvex => "logconvex",
            Suite::Chain001 => "001",
            Suite::LowerBound002 => "002",
            Suite::Re1 => "re1",
            Suite::Turan => "turan",
            Suite::Zzkk => "zzkk",
            Suite::Mm => "mm",
            Suite::Wilkins => "wilkins",
        }
    }

    pub fn parse(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown suite `{s}`")))
    }
}

/// Parameter lists a suite is run over. Every field is a list; a suite
/// takes the cartesian product of the fields it uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
    pub z: Vec<f64>,
    pub r: Vec<f64>,
    /// Points for the finite-difference and log-convexity checks.
    pub x: Vec<f64>,
    pub h: f64,
    pub order_max: usize,
    pub lambda: Vec<f64>,
}

impl Grid {
    /// Default grid for a suite. Points failing a suite's guard are
    /// dropped when the suite runs.
    pub fn default_for(suite: Suite) -> Grid {
        let base = Grid {
            alpha: vec![2.0],
            beta: vec![1.0],
            mu: vec![2.0],
            nu: vec![1.0],
            z: vec![1.0],
            r: DEFAULT_R_GRID.to_vec(),
            x: vec![0.5, 1.0, 2.0, 4.0],
            h: 0.25,
            order_max: 6,
            lambda: vec![0.25, 0.5, 0.75],
        };
        match suite {
            Suite::Monotone | Suite::LogConvex | Suite::Chain001 | Suite::LowerBound002 => Grid {
                alpha: vec![2.0, 3.0],
                mu: vec![1.5, 2.0, 3.0],
                nu: vec![0.5, 1.0],
                z: vec![0.5, 1.0],
                ..base
            },
            Suite::Re1 => Grid {
                mu: vec![1.5, 2.0, 2.5, 3.0],
                ..base
            },
            Suite::Turan => Grid {
                alpha: vec![2.0, 3.0],
                mu: vec![3.0, 4.0],
                nu: vec![1.0, 2.0],
                r: vec![0.5, 1.0, 2.0],
                ..base
            },
            Suite::Zzkk => Grid {
                mu: vec![2.5, 3.0, 4.0],
                nu: vec![0.5, 1.0, 2.0],
                ..base
            },
            Suite::Mm => Grid {
                nu: vec![1.0, 1.5, 2.0],
                ..base
            },
            Suite::Wilkins => base,
        }
    }

    fn series_points(&self) -> Vec<SeriesParams> {
        let mut out = Vec::new();
        for &alpha in &self.alpha {
            for &beta in &self.beta {
                for &mu in &self.mu {
                    for &nu in &self.nu {
                        for &z in &self.z {
                            let p = SeriesParams {
                                alpha,
                                beta,
                                mu,
                                nu,
                                r: 0.0,
                                z,
                            };
                            // ζ-weight guard: αμ - β > ν on |z| = 1
                            if p.validate().is_ok() && (z.abs() < 1.0 || alpha * mu - beta > nu) {
                                out.push(p);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

type Task = Box<dyn Fn() -> Result<Vec<CheckReport>> + Send + Sync>;

fn one(r: Result<CheckReport>) -> Result<Vec<CheckReport>> {
    r.map(|x| vec![x])
}

fn tasks(suite: Suite, g: &Grid) -> Vec<Task> {
    let seq = SequenceSpec::index();
    let mut out: Vec<Task> = Vec::new();
    match suite {
        Suite::Monotone => {
            for p in g.series_points().into_iter().filter(|p| p.z >= 0.0) {
                let (seq, x, h, k) = (seq.clone(), g.x.clone(), g.h, g.order_max);
                out.push(Box::new(move || {
                    check_complete_monotonicity(&p, &seq, k, &x, h)
                }));
            }
        }
        Suite::LogConvex => {
            let pairs: Vec<(f64, f64)> =
                g.x.iter()
                    .enumerate()
                    .flat_map(|(i, &a)| g.x[i + 1..].iter().map(move |&b| (a, b)))
                    .collect();
            for p in g.series_points().into_iter().filter(|p| p.z >= 0.0) {
                for &lambda in &g.lambda {
                    let (seq, pairs) = (seq.clone(), pairs.clone());
                    out.push(Box::new(move || {
                        check_log_convexity(&p, &seq, &pairs, lambda)
                    }));
                }
            }
        }
        Suite::Chain001 => {
            for p in g.series_points().into_iter().filter(|p| p.z >= 0.0) {
                for (i, &r1) in g.r.iter().enumerate() {
                    for &r2 in &g.r[i + 1..] {
                        let seq = seq.clone();
                        out.push(Box::new(move || {
                            check_chain_001(&p, &seq, r1, r2).map(|pair| pair.to_vec())
                        }));
                    }
                }
            }
        }
        Suite::LowerBound002 => {
            for p in g.series_points().into_iter().filter(|p| p.z >= 0.0) {
                for &r in &g.r {
                    let seq = seq.clone();
                    out.push(Box::new(move || one(check_lower_bound_002(&p, &seq, r))));
                }
            }
        }
        Suite::Re1 => {
            for &mu in g.mu.iter().filter(|&&mu| mu > 1.0) {
                for &r in &g.r {
                    out.push(Box::new(move || one(check_re1(mu, r))));
                }
            }
        }
        Suite::Turan => {
            for &alpha in &g.alpha {
                for &mu in &g.mu {
                    for &nu in &g.nu {
                        if !(alpha * mu - alpha - 2.0 > nu) {
                            continue;
                        }
                        for &r in &g.r {
                            out.push(Box::new(move || one(check_turan(alpha, mu, nu, r))));
                        }
                    }
                }
            }
        }
        Suite::Zzkk => {
            for &mu in &g.mu {
                for &nu in g.nu.iter().filter(|&&nu| 2.0 * mu - 3.0 > nu) {
                    for &r in &g.r {
                        out.push(Box::new(move || one(check_zzkk(mu, nu, r))));
                    }
                }
            }
        }
        Suite::Mm => {
            for &nu in g.nu.iter().filter(|&&nu| (1.0..3.0).contains(&nu)) {
                for &r in &g.r {
                    out.push(Box::new(move || one(check_mm(nu, r))));
                }
            }
        }
        Suite::Wilkins => {
            for &r in &g.r {
                out.push(Box::new(move || one(check_wilkins(r))));
            }
        }
    }
    out
}

/// Runs the given suites on their grids with `jobs` worker threads
/// (0 = rayon default). A grid point whose evaluation errors out becomes an
/// inconclusive report carrying the error. Output is sorted by check id,
/// then grid point, independent of `jobs`.
pub fn run_suites(suites: &[(Suite, Grid)], jobs: usize) -> Result<Vec<CheckReport>> {
    let all: Vec<(Suite, Task)> = suites
        .iter()
        .flat_map(|(s, g)| tasks(*s, g).into_iter().map(move |t| (*s, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    let mut reports: Vec<CheckReport> = pool.install(|| {
        all.par_iter()
            .flat_map_iter(|(s, t)| match t() {
                Ok(v) => v,
                Err(e) => vec![CheckReport::inconclusive(s.name(), vec![], e.to_string())],
            })
            .collect()
    });
    reports.sort_by(|a, b| a.sort_key_cmp(b));
    Ok(reports)
}

/// Runs one suite on its default grid.
pub fn run_default(suite: Suite, jobs: usize) -> Result<Vec<CheckReport>> {
    run_suites(&[(suite, Grid::default_for(suite))], jobs)
}

/// Counts of (pass, fail, inconclusive).
pub fn tally(reports: &[CheckReport]) -> (usize, usize, usize) {
    reports
        .iter()
        .fold((0, 0, 0), |(p, f, i), r| match r.verdict {
            CheckVerdict::Pass => (p + 1, f, i),
            CheckVerdict::Fail => (p, f + 1, i),
            CheckVerdict::Inconclusive => (p, f, i + 1),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()).unwrap(), s);
        }
        assert!(Suite::parse("nope").is_err());
    }

    #[test]
    fn ordering_independent_of_jobs() {
        let a = run_default(Suite::Wilkins, 1).unwrap();
        let b = run_default(Suite::Wilkins, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(tally(&a), (6, 0, 0));
    }
}
