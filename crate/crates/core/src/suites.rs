//! Randomized property checks, run by `acsl check`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{s3_expectation, satellite_expand, simplicial_satellite, CouplingLevel};
use crate::link::FramedLink;
use crate::manifolds::{
    reference_homology, s1xs2_expectation, s1xs2_presentation, s1xsigma_expectation,
    t3_presentation,
};
use crate::random::{move_sequence, observed_link, presentation, rng};
use crate::surgery::{oracle_expectation, surgery_expectation, SurgeryPresentation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Periodicity,
    Satellite,
    Kirby,
    Oracle,
    Manifolds,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Periodicity,
        Suite::Satellite,
        Suite::Kirby,
        Suite::Oracle,
        Suite::Manifolds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Periodicity => "periodicity",
            Suite::Satellite => "satellite",
            Suite::Kirby => "kirby",
            Suite::Oracle => "oracle",
            Suite::Manifolds => "manifolds",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub k: i64,
    pub seed: u64,
    pub trials: usize,
    /// Trials that ran to a comparison.
    pub checked: usize,
    /// Trials skipped, e.g. above the oracle term cap.
    pub skipped: usize,
    /// One line per failing trial.
    pub failures: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct Config {
    pub k: CouplingLevel,
    pub trials: usize,
    pub seed: u64,
    pub max_terms: u128,
}

pub fn run(suite: Suite, cfg: &Config) -> Result<Report> {
    let mut report = Report {
        suite,
        k: cfg.k.get(),
        seed: cfg.seed,
        trials: cfg.trials,
        checked: 0,
        skipped: 0,
        failures: Vec::new(),
        passed: false,
    };
    let mut r = rng(cfg.seed);
    for t in 0..cfg.trials {
        let outcome = match suite {
            Suite::Periodicity => periodicity(&mut r, cfg.k),
            Suite::Satellite => satellite(&mut r, cfg.k),
            Suite::Kirby => kirby(&mut r, cfg.k),
            Suite::Oracle => oracle(&mut r, cfg.k, cfg.max_terms),
            Suite::Manifolds => manifolds(&mut r, cfg.k),
        }?;
        match outcome {
            Outcome::Pass => report.checked += 1,
            Outcome::Skip => report.skipped += 1,
            Outcome::Fail(msg) => {
                report.checked += 1;
                report.failures.push(format!("trial {t}: {msg}"));
            }
        }
    }
    report.passed = report.failures.is_empty();
    Ok(report)
}

enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

fn expect(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(msg())
    }
}

fn random_link<R: Rng>(r: &mut R, k: CouplingLevel) -> FramedLink {
    let n = r.gen_range(1..=4);
    observed_link(r, n, 4, 2 * k.colours() as i64)
}

fn periodicity<R: Rng>(r: &mut R, k: CouplingLevel) -> Result<Outcome> {
    let fl = random_link(r, k);
    let j = r.gen_range(0..fl.len());
    let shift = if r.gen_bool(0.5) { 1 } else { -1 } * k.colours() as i64;
    let mut moved = fl.clone();
    moved.charges[j] += shift;
    let a = s3_expectation(&fl, k)?;
    let b = s3_expectation(&moved, k)?;
    Ok(expect(a.same_value(&b), || {
        format!("charge {j} shifted by {shift} changed {:?}", fl)
    }))
}

fn satellite<R: Rng>(r: &mut R, k: CouplingLevel) -> Result<Outcome> {
    let fl = random_link(r, k);
    let before = s3_expectation(&fl, k)?;
    let sat = simplicial_satellite(&fl)?;
    if !s3_expectation(&sat, k)?.same_value(&before) {
        return Ok(Outcome::Fail(format!(
            "simplicial satellite changed {fl:?}"
        )));
    }
    let j = r.gen_range(0..fl.len());
    let sign = if r.gen_bool(0.5) { 1 } else { -1 };
    let one = satellite_expand(&fl, j, sign)?;
    Ok(expect(s3_expectation(&one, k)?.same_value(&before), || {
        format!("expanding component {j} with sign {sign} changed {fl:?}")
    }))
}

/// Exact value or `None` for a vanishing normalization.
fn surgery_value(p: &SurgeryPresentation) -> Result<Option<crate::cyclotomic::CycNum>> {
    match surgery_expectation(p) {
        Ok(inv) => Ok(Some(inv.value)),
        Err(Error::DenominatorZero) => Ok(None),
        Err(e) => Err(e),
    }
}

fn kirby<R: Rng>(r: &mut R, k: CouplingLevel) -> Result<Outcome> {
    let (obs, surg) = (r.gen_range(0..=2), r.gen_range(1..=3));
    let p = presentation(r, k, obs, surg, 2);
    let len = r.gen_range(1..=5);
    let (moves, end) = move_sequence(r, &p, len, 5);
    let a = surgery_value(&p)?;
    let b = surgery_value(&end)?;
    Ok(expect(a == b, || {
        format!("moves {moves:?} changed the value of {:?}", p.link)
    }))
}

fn oracle<R: Rng>(r: &mut R, k: CouplingLevel, max_terms: u128) -> Result<Outcome> {
    let (obs, surg) = (r.gen_range(0..=2), r.gen_range(0..=3));
    let p = presentation(r, k, obs, surg, 3);
    let float = match oracle_expectation(&p, max_terms) {
        Err(Error::TermLimit { .. }) => return Ok(Outcome::Skip),
        other => other,
    };
    let exact = surgery_expectation(&p);
    Ok(match (exact, float) {
        (Ok(inv), Ok((re, im))) => {
            let err = (inv.numeric.0 - re).hypot(inv.numeric.1 - im);
            expect(err < 1e-9, || {
                format!("exact and float values differ by {err:e} for {:?}", p.link)
            })
        }
        (Err(Error::DenominatorZero), Err(Error::DenominatorZero)) => Outcome::Pass,
        (exact, float) => Outcome::Fail(format!(
            "exact {exact:?} vs float {float:?} for {:?}",
            p.link
        )),
    })
}

fn manifolds<R: Rng>(r: &mut R, k: CouplingLevel) -> Result<Outcome> {
    let n = r.gen_range(1..=3);
    let obs = observed_link(r, n, 3, k.colours() as i64);
    let b = 2 * k.colours() as i64;
    let (p, closed) = if r.gen_bool(0.5) {
        let core: Vec<i64> = (0..n).map(|_| r.gen_range(-b..=b)).collect();
        let p = s1xs2_presentation(&obs, &core, k)?;
        let h = reference_homology(&p).ok_or(Error::Overflow("homology"))?;
        let closed = s1xs2_expectation(&h, k)?;
        (p, closed)
    } else {
        let rows: Vec<[i64; 3]> = (0..n)
            .map(|_| [0; 3].map(|_: i64| r.gen_range(-b..=b)))
            .collect();
        let p = t3_presentation(&obs, &rows, k)?;
        let h = reference_homology(&p).ok_or(Error::Overflow("homology"))?;
        let closed = s1xsigma_expectation(&h, k)?;
        (p, closed)
    };
    let surg = surgery_expectation(&p)?;
    Ok(expect(
        surg.same_value(&closed) && surg.is_zero == closed.is_zero,
        || format!("surgery and closed form disagree for {:?}", p.link),
    ))
}
