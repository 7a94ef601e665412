//! Expectation values in 3-manifolds presented by integer surgery on links
//! in S³.
//!
//! Every surgery component is given the colour state summing all residues
//! of `Z_{2|k|}`, so the value in the surgered manifold is the ratio of two
//! finite Gauss sums
//!
//! ```text
//!   N = Σ_c ζ^{-sgn(k)·Q(q ⊕ c)}      D = Σ_c ζ^{-sgn(k)·Q(0 ⊕ c)}
//! ```
//!
//! over colour vectors `c ∈ Z_{2|k|}^s` on the `s` surgery components,
//! with `ζ = ζ_{4|k|}` and `Q` the full quadratic form of the linking
//! matrix. Both sums are evaluated exactly in `Q(ζ_{4|k|})`.

use std::num::NonZeroUsize;

use crate::cyclotomic::CycNum;
use crate::error::{check_sign, Error, Result};
use crate::invariants::{CouplingLevel, Invariant};
use crate::link::{FramedLink, Role};

/// A framed link in S³ whose surgery components present a closed
/// 3-manifold and whose observed components carry Wilson lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryPresentation {
    pub link: FramedLink,
    pub k: CouplingLevel,
}

impl SurgeryPresentation {
    pub fn new(link: FramedLink, k: CouplingLevel) -> Self {
        SurgeryPresentation { link, k }
    }

    pub fn surgery_count(&self) -> usize {
        self.link.count(Role::Surgery)
    }

    /// Number of colour vectors a Gauss sum runs over, `(2|k|)^s`.
    pub fn lattice_size(&self) -> Option<u128> {
        let m = self.k.colours() as u128;
        (0..self.surgery_count()).try_fold(1u128, |acc, _| acc.checked_mul(m))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussSum {
    pub value: CycNum,
    /// Number of colour vectors summed.
    pub terms: u64,
    /// How many terms landed on each residue `e` of `ζ^e`.
    pub histogram: Vec<u64>,
}

/// Worker count: `ACSL_THREADS` if set to a positive integer, otherwise
/// the machine's available parallelism.
pub fn worker_threads() -> usize {
    std::env::var("ACSL_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, NonZeroUsize::get))
}

/// Reflected mixed-radix Gray code over `radix^len` digit vectors, started
/// at an arbitrary rank. Consecutive vectors differ in one digit by ±1.
#[derive(Debug, Clone)]
pub struct GrayCounter {
    radix: u64,
    digits: Vec<u64>,
    forward: Vec<bool>,
}

impl GrayCounter {
    /// Positions the counter at the vector of rank `start`. Digit 0 is the
    /// fastest-changing one. `radix` must be at least 2.
    pub fn at(radix: u64, len: usize, start: u128) -> Self {
        assert!(radix >= 2);
        let r = radix as u128;
        let mut digits = Vec::with_capacity(len);
        let mut forward = Vec::with_capacity(len);
        let mut rest = start;
        for _ in 0..len {
            let d = (rest % r) as u64;
            rest /= r;
            // rest is now the rank of the higher digits; odd means reversed.
            let fwd = rest.is_multiple_of(2);
            digits.push(if fwd { d } else { radix - 1 - d });
            forward.push(fwd);
        }
        GrayCounter {
            radix,
            digits,
            forward,
        }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Advances to the next vector. Returns the digit that moved and by
    /// how much, or `None` past the last vector.
    pub fn step(&mut self) -> Option<(usize, i64)> {
        for j in 0..self.digits.len() {
            let g = self.digits[j];
            let moved = if self.forward[j] {
                (g + 1 < self.radix).then(|| {
                    self.digits[j] = g + 1;
                    1
                })
            } else {
                (g > 0).then(|| {
                    self.digits[j] = g - 1;
                    -1
                })
            };
            if let Some(delta) = moved {
                for f in &mut self.forward[..j] {
                    *f = !*f;
                }
                return Some((j, delta));
            }
        }
        None
    }
}

struct Lattice {
    /// Linking matrix entries mod `order`.
    l: Vec<Vec<i64>>,
    /// Fixed charge vector mod `order` (zero on surgery components).
    base: Vec<i64>,
    surgery: Vec<usize>,
    order: i64,
    sign: i64,
    radix: u64,
}

impl Lattice {
    fn new(p: &SurgeryPresentation, include_observed: bool) -> Self {
        let order = p.k.order() as i64;
        let fl = &p.link;
        let n = fl.len();
        Lattice {
            l: fl
                .linking
                .iter()
                .map(|row| row.iter().map(|v| v.rem_euclid(order)).collect())
                .collect(),
            base: (0..n)
                .map(|i| match fl.roles[i] {
                    Role::Observed if include_observed => fl.charges[i].rem_euclid(order),
                    _ => 0,
                })
                .collect(),
            surgery: fl.indices_with(Role::Surgery),
            order,
            sign: p.k.sign(),
            radix: p.k.colours(),
        }
    }

    /// Phase histogram over the ranks `[start, end)`.
    fn histogram(&self, start: u128, end: u128) -> Vec<u64> {
        let m = self.order;
        let mut counts = vec![0u64; m as usize];
        if start >= end {
            return counts;
        }
        let mut gray = GrayCounter::at(self.radix, self.surgery.len(), start);

        let mut x = self.base.clone();
        for (&idx, &g) in self.surgery.iter().zip(gray.digits()) {
            x[idx] = g as i64;
        }
        let n = x.len();
        // y = L x restricted to surgery rows; q = xᵀ L x.
        let row =
            |i: usize| -> i64 { (0..n).fold(0i64, |acc, j| (acc + self.l[i][j] * x[j] % m) % m) };
        let mut y: Vec<i64> = self.surgery.iter().map(|&i| row(i)).collect();
        let mut q = (0..n).fold(0i64, |acc, i| (acc + x[i] * row(i) % m) % m);

        let mut record = |q: i64| {
            counts[(-self.sign * q).rem_euclid(m) as usize] += 1;
        };
        record(q);
        for _ in start + 1..end {
            let (p, delta) = gray.step().expect("rank range inside the lattice");
            let col = self.surgery[p];
            // Q(x + δe) = Q(x) + 2δ(Lx)_p + δ² L_pp
            q = (q + 2 * delta * y[p] + self.l[col][col]).rem_euclid(m);
            for (yr, &r) in y.iter_mut().zip(&self.surgery) {
                *yr = (*yr + delta * self.l[r][col]).rem_euclid(m);
            }
            record(q);
        }
        counts
    }
}

/// Below this many terms a Gauss sum runs on the calling thread.
const PARALLEL_THRESHOLD: u128 = 1 << 15;

/// Exact Gauss sum over all surgery colourings, using the default worker
/// count (see [`worker_threads`]).
pub fn gauss_sum(p: &SurgeryPresentation, include_observed: bool) -> Result<GaussSum> {
    gauss_sum_with_threads(p, include_observed, worker_threads())
}

/// As [`gauss_sum`] with an explicit worker count. The result does not
/// depend on `threads`.
pub fn gauss_sum_with_threads(
    p: &SurgeryPresentation,
    include_observed: bool,
    threads: usize,
) -> Result<GaussSum> {
    p.link.validate()?;
    let total = p
        .lattice_size()
        .filter(|&t| t <= u64::MAX as u128)
        .ok_or(Error::Overflow("Gauss sum lattice size"))?;
    let lattice = Lattice::new(p, include_observed);

    let workers = if total < PARALLEL_THRESHOLD {
        1
    } else {
        threads.max(1).min(total as usize)
    };
    let histogram = if workers == 1 {
        lattice.histogram(0, total)
    } else {
        let chunk = total.div_ceil(workers as u128);
        let parts: Vec<Vec<u64>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers as u128)
                .map(|w| {
                    let lattice = &lattice;
                    let lo = (w * chunk).min(total);
                    let hi = ((w + 1) * chunk).min(total);
                    s.spawn(move || lattice.histogram(lo, hi))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("Gauss sum worker panicked"))
                .collect()
        });
        let mut merged = vec![0u64; lattice.order as usize];
        for part in parts {
            for (m, c) in merged.iter_mut().zip(part) {
                *m += c;
            }
        }
        merged
    };

    Ok(GaussSum {
        value: CycNum::from_residue_counts(p.k.order(), &histogram),
        terms: total as u64,
        histogram,
    })
}

/// The expectation value in the surgered manifold, as the exact ratio of
/// the Gauss sums with and without the observed charges.
pub fn surgery_expectation(p: &SurgeryPresentation) -> Result<Invariant> {
    let den = gauss_sum(p, false)?;
    if den.value.is_zero() {
        return Err(Error::DenominatorZero);
    }
    let num = gauss_sum(p, true)?;
    if num.value.is_zero() {
        return Ok(Invariant::zero(p.k.order()));
    }
    if num.histogram == den.histogram {
        return Ok(Invariant::from_value(CycNum::one(p.k.order())));
    }
    Ok(Invariant::from_value(num.value.try_div(&den.value)?))
}

/// Adds an unknotted, unlinked surgery component with framing `sign`.
pub fn blow_up(p: &SurgeryPresentation, sign: i64) -> Result<SurgeryPresentation> {
    let sign = check_sign(sign)?;
    let mut out = p.clone();
    let n = out.link.len();
    out.link
        .push(sign, &vec![0; n], 0, Role::Surgery, format!("U{}", n + 1));
    Ok(out)
}

/// Removes an isolated ±1-framed surgery component.
pub fn blow_down(p: &SurgeryPresentation, j: usize) -> Result<SurgeryPresentation> {
    p.link.check_index(j)?;
    if p.link.roles[j] != Role::Surgery {
        return Err(Error::NotSurgery(j));
    }
    let f = p.link.framing(j);
    if f.abs() != 1 {
        return Err(Error::NotUnitFramed(j, f));
    }
    if (0..p.link.len()).any(|i| i != j && p.link.linking[i][j] != 0) {
        return Err(Error::NotIsolated(j));
    }
    Ok(SurgeryPresentation {
        link: p.link.remove(j)?,
        k: p.k,
    })
}

/// Slides component `i` over surgery component `j`: in homology the class
/// of `i` becomes `[i] + sign·[j]`. Charges are unchanged.
pub fn handle_slide(
    p: &SurgeryPresentation,
    i: usize,
    j: usize,
    sign: i64,
) -> Result<SurgeryPresentation> {
    let fl = &p.link;
    fl.check_index(i)?;
    fl.check_index(j)?;
    if i == j {
        return Err(Error::SelfSlide(i));
    }
    if fl.roles[j] != Role::Surgery {
        return Err(Error::NotSurgery(j));
    }
    let sign = check_sign(sign)?;
    let overflow = || Error::Overflow("handle slide");
    let l = &fl.linking;

    let mut out = p.clone();
    for m in 0..fl.len() {
        if m == i {
            continue;
        }
        let v = l[i][m].checked_add(sign * l[j][m]).ok_or_else(overflow)?;
        out.link.linking[i][m] = v;
        out.link.linking[m][i] = v;
    }
    out.link.linking[i][i] = l[i][j]
        .checked_mul(2 * sign)
        .and_then(|t| t.checked_add(l[i][i]))
        .and_then(|t| t.checked_add(l[j][j]))
        .ok_or_else(overflow)?;
    Ok(out)
}

/// One Kirby move, as applied by [`apply_move`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KirbyMove {
    BlowUp(i64),
    BlowDown(usize),
    Slide { i: usize, j: usize, sign: i64 },
}

pub fn apply_move(p: &SurgeryPresentation, m: KirbyMove) -> Result<SurgeryPresentation> {
    match m {
        KirbyMove::BlowUp(sign) => blow_up(p, sign),
        KirbyMove::BlowDown(j) => blow_down(p, j),
        KirbyMove::Slide { i, j, sign } => handle_slide(p, i, j, sign),
    }
}

/// Surgery components that [`blow_down`] accepts.
pub fn blow_down_candidates(p: &SurgeryPresentation) -> Vec<usize> {
    let fl = &p.link;
    (0..fl.len())
        .filter(|&j| {
            fl.roles[j] == Role::Surgery
                && fl.framing(j).abs() == 1
                && (0..fl.len()).all(|i| i == j || fl.linking[i][j] == 0)
        })
        .collect()
}

/// Numerator and denominator sums in double precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSums {
    pub numerator: (f64, f64),
    pub denominator: (f64, f64),
}

/// Below this modulus the float denominator is treated as zero.
pub const ORACLE_ZERO: f64 = 1e-6;

impl OracleSums {
    pub fn ratio(&self) -> Option<(f64, f64)> {
        let (a, b) = self.numerator;
        let (c, d) = self.denominator;
        let norm = c * c + d * d;
        if norm.sqrt() < ORACLE_ZERO {
            return None;
        }
        Some(((a * c + b * d) / norm, (b * c - a * d) / norm))
    }
}

pub const DEFAULT_MAX_TERMS: u128 = 1_000_000;

/// Independent floating-point evaluation: plain odometer enumeration,
/// quadratic form recomputed from scratch per term, phases summed as
/// `exp(-2πi Q / 4k)`.
pub fn oracle_sums(p: &SurgeryPresentation, max_terms: u128) -> Result<OracleSums> {
    p.link.validate()?;
    let terms = p.lattice_size().unwrap_or(u128::MAX);
    if terms > max_terms {
        return Err(Error::TermLimit {
            terms,
            cap: max_terms,
        });
    }
    let fl = &p.link;
    let n = fl.len();
    let k = p.k.get() as f64;
    let four_k = 4 * p.k.get().unsigned_abs() as i128;
    let surgery = fl.indices_with(Role::Surgery);
    let radix = p.k.colours() as i64;

    let mut num = (0.0, 0.0);
    let mut den = (0.0, 0.0);
    let mut colours = vec![0i64; surgery.len()];
    loop {
        for (with_obs, acc) in [(true, &mut num), (false, &mut den)] {
            let mut x = vec![0i128; n];
            for i in 0..n {
                if fl.roles[i] == Role::Observed && with_obs {
                    x[i] = fl.charges[i] as i128;
                }
            }
            for (&i, &c) in surgery.iter().zip(&colours) {
                x[i] = c as i128;
            }
            let mut q: i128 = 0;
            for i in 0..n {
                for j in 0..n {
                    q = (q + (x[i] * fl.linking[i][j] as i128 % four_k) * x[j]) % four_k;
                }
            }
            let angle = -2.0 * std::f64::consts::PI * q as f64 / (4.0 * k);
            acc.0 += angle.cos();
            acc.1 += angle.sin();
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == colours.len() {
                return Ok(OracleSums {
                    numerator: num,
                    denominator: den,
                });
            }
            colours[pos] += 1;
            if colours[pos] < radix {
                break;
            }
            colours[pos] = 0;
            pos += 1;
        }
    }
}

/// Floating-point expectation value from [`oracle_sums`].
pub fn oracle_expectation(p: &SurgeryPresentation, max_terms: u128) -> Result<(f64, f64)> {
    oracle_sums(p, max_terms)?
        .ratio()
        .ok_or(Error::DenominatorZero)
}
