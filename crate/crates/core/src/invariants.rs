//! Wilson-line expectation values in S³ and the link operations that
//! leave them unchanged.
//!
//! In S³ the expectation value of a coloured framed link is the single
//! phase `exp(-2πi Q / 4k)` with `Q = qᵀ L q`. It is represented exactly
//! as `ζ_{4|k|}^{e}` with `e = -sgn(k)·Q mod 4|k|`.

use crate::cyclotomic::CycNum;
use crate::error::{check_sign, Error, Result};
use crate::link::{FramedLink, Role, RoleFilter};

/// Largest supported `|k|`; keeps every residue product inside `i128`.
pub const MAX_LEVEL: i64 = 1 << 20;

/// The Chern–Simons coupling constant, a nonzero integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CouplingLevel(i64);

impl CouplingLevel {
    pub fn new(k: i64) -> Result<Self> {
        if k == 0 {
            Err(Error::ZeroLevel)
        } else if k.unsigned_abs() > MAX_LEVEL as u64 {
            Err(Error::Overflow("coupling level"))
        } else {
            Ok(CouplingLevel(k))
        }
    }

    pub fn get(self) -> i64 {
        self.0
    }

    pub fn sign(self) -> i64 {
        self.0.signum()
    }

    /// Size of the colour ring `Z_{2|k|}`.
    pub fn colours(self) -> u64 {
        2 * self.0.unsigned_abs()
    }

    /// Root order `4|k|` of the phases.
    pub fn order(self) -> u64 {
        4 * self.0.unsigned_abs()
    }

    pub fn flipped(self) -> Self {
        CouplingLevel(-self.0)
    }

    /// The phase exponent of `exp(-2πi Q / 4k)`.
    pub fn phase_of(self, q_form_mod: i64) -> PhaseExponent {
        let n = self.order() as i128;
        let e = (-(self.sign() as i128) * q_form_mod as i128).rem_euclid(n);
        PhaseExponent {
            e: e as u64,
            order: self.order(),
        }
    }
}

/// A residue `e mod n` standing for `ζ_n^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhaseExponent {
    e: u64,
    order: u64,
}

impl PhaseExponent {
    pub fn new(e: i64, order: u64) -> Self {
        PhaseExponent {
            e: e.rem_euclid(order as i64) as u64,
            order,
        }
    }

    pub fn exponent(self) -> u64 {
        self.e
    }

    pub fn order(self) -> u64 {
        self.order
    }

    pub fn value(self) -> CycNum {
        CycNum::root_power(self.order, self.e as i64)
    }
}

/// An expectation value: exact field element plus its numeric embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct Invariant {
    pub value: CycNum,
    pub is_zero: bool,
    pub numeric: (f64, f64),
}

impl Invariant {
    pub fn from_value(value: CycNum) -> Self {
        Invariant {
            is_zero: value.is_zero(),
            numeric: value.embed_numeric(),
            value,
        }
    }

    pub fn zero(order: u64) -> Self {
        Self::from_value(CycNum::zero(order))
    }

    pub fn phase(p: PhaseExponent) -> Self {
        Self::from_value(p.value())
    }

    /// `Some(e)` when the value is exactly `ζ_n^e`.
    pub fn phase_exponent(&self) -> Option<u64> {
        self.value.root_exponent()
    }

    pub fn order(&self) -> u64 {
        self.value.order()
    }

    /// Exact equality of the underlying field elements.
    pub fn same_value(&self, other: &Invariant) -> bool {
        self.value == other.value
    }
}

/// `Q = Σ_ij q_i L_ij q_j` over the admitted components.
pub fn quadratic_form(fl: &FramedLink, filter: RoleFilter) -> Result<i128> {
    fl.validate()?;
    let n = fl.len();
    let q: Vec<i128> = (0..n)
        .map(|i| {
            if filter.admits(fl.roles[i]) {
                fl.charges[i] as i128
            } else {
                0
            }
        })
        .collect();
    let overflow = || Error::Overflow("quadratic form");
    let mut total: i128 = 0;
    for i in 0..n {
        if q[i] == 0 {
            continue;
        }
        for j in 0..n {
            if q[j] == 0 {
                continue;
            }
            let term = q[i]
                .checked_mul(fl.linking[i][j] as i128)
                .and_then(|t| t.checked_mul(q[j]))
                .ok_or_else(overflow)?;
            total = total.checked_add(term).ok_or_else(overflow)?;
        }
    }
    Ok(total)
}

/// `Q mod m` without overflow, for any integer entries.
pub(crate) fn quadratic_form_mod(fl: &FramedLink, filter: RoleFilter, m: u64) -> i64 {
    let m = m as i128;
    let n = fl.len();
    let q: Vec<i128> = (0..n)
        .map(|i| {
            if filter.admits(fl.roles[i]) {
                (fl.charges[i] as i128).rem_euclid(m)
            } else {
                0
            }
        })
        .collect();
    let mut total: i128 = 0;
    for i in 0..n {
        for j in 0..n {
            let l = (fl.linking[i][j] as i128).rem_euclid(m);
            total = (total + q[i] * l % m * q[j]) % m;
        }
    }
    total as i64
}

/// Expectation value in S³: `ζ_{4|k|}^{-sgn(k)·Q}`. Never zero.
pub fn s3_expectation(fl: &FramedLink, k: CouplingLevel) -> Result<Invariant> {
    fl.validate()?;
    if let Some(j) = fl.roles.iter().position(|&r| r == Role::Surgery) {
        return Err(Error::SurgeryComponent(j));
    }
    let q = quadratic_form_mod(fl, RoleFilter::All, k.order());
    Ok(Invariant::phase(k.phase_of(q)))
}

/// Replaces each observed charge by its residue in `[0, 2|k|)`.
pub fn reduce_colours(fl: &FramedLink, k: CouplingLevel) -> FramedLink {
    let m = k.colours() as i64;
    let mut out = fl.clone();
    for (q, role) in out.charges.iter_mut().zip(&fl.roles) {
        if *role == Role::Observed {
            *q = q.rem_euclid(m);
        }
    }
    out
}

/// Orientation reversal of component `j`, expressed as `q_j -> -q_j`.
pub fn reverse_component(fl: &FramedLink, j: usize) -> Result<FramedLink> {
    fl.check_index(j)?;
    let mut out = fl.clone();
    out.charges[j] = out.charges[j]
        .checked_neg()
        .ok_or(Error::Overflow("charge negation"))?;
    Ok(out)
}

/// Replaces observed component `j` by its two-component satellite with
/// charges `q + sign` and `-sign`.
///
/// Both new components keep `j`'s linkings with everything else; each has
/// framing `f = L_jj` and they link each other `f` times.
pub fn satellite_expand(fl: &FramedLink, j: usize, sign: i64) -> Result<FramedLink> {
    fl.check_index(j)?;
    let sign = check_sign(sign)?;
    if fl.roles[j] != Role::Observed {
        return Err(Error::SurgeryComponent(j));
    }
    let f = fl.framing(j);
    let q1 = fl.charges[j]
        .checked_add(sign)
        .ok_or(Error::Overflow("satellite charge"))?;

    let n = fl.len();
    // K1 takes j's slot, K2 is appended.
    let mut out = fl.clone();
    out.charges[j] = q1;
    out.names[j] = format!("{}.1", fl.names[j]);
    let mut links: Vec<i64> = (0..n).map(|i| fl.linking[i][j]).collect();
    links[j] = f;
    out.push(
        f,
        &links,
        -sign,
        Role::Observed,
        format!("{}.2", fl.names[j]),
    );
    Ok(out)
}

/// Component cap for [`simplicial_satellite`]; reduce colours first to
/// stay well below it.
pub const SATELLITE_LIMIT: u64 = 4096;

/// Drops every observed component with charge 0, then expands satellites
/// until each observed charge is +1 or -1. Surgery components are kept.
pub fn simplicial_satellite(fl: &FramedLink) -> Result<FramedLink> {
    fl.validate()?;
    let mut out = drop_uncoloured(fl);
    let size = (0..out.len()).try_fold(0u64, |acc, i| match out.roles[i] {
        Role::Observed => acc.checked_add(out.charges[i].unsigned_abs()),
        Role::Surgery => acc.checked_add(1),
    });
    if size.is_none_or(|s| s > SATELLITE_LIMIT) {
        return Err(Error::Overflow("satellite size"));
    }
    let mut j = 0;
    while j < out.len() {
        let q = out.charges[j];
        if out.roles[j] == Role::Observed && q.unsigned_abs() > 1 {
            // sign = -sgn(q) peels off a component of charge sgn(q).
            out = satellite_expand(&out, j, -q.signum())?;
        } else {
            j += 1;
        }
    }
    Ok(out)
}

/// Deletes every observed component whose charge is zero.
pub fn drop_uncoloured(fl: &FramedLink) -> FramedLink {
    let keep: Vec<usize> = (0..fl.len())
        .filter(|&i| fl.roles[i] == Role::Surgery || fl.charges[i] != 0)
        .collect();
    fl.select(&keep)
}
