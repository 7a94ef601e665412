//! Closed forms for S¹×S² and S¹×Σ_g, and the reference surgery
//! presentations they are checked against.
//!
//! S¹×S² is 0-surgery on an unknot. S¹×T² (the 3-torus) is 0-surgery on the
//! Borromean rings, whose linking matrix vanishes, so only the linkings of
//! the observed components with the three surgery components matter.

use crate::error::{Error, Result};
use crate::invariants::{CouplingLevel, Invariant};
use crate::link::{FramedLink, Role, RoleFilter};
use crate::surgery::SurgeryPresentation;

/// Homological data of a link in S¹×Σ_g.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyData {
    pub genus: u32,
    /// Intersection numbers with the surface generators; `2g + 1` entries.
    pub n: Vec<i64>,
    /// Framed self-linking form of the link.
    pub q_self: i64,
}

impl HomologyData {
    pub fn new(genus: u32, n: Vec<i64>, q_self: i64) -> Result<Self> {
        let h = HomologyData { genus, n, q_self };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        let expected = 2 * self.genus as usize + 1;
        if self.n.len() != expected {
            return Err(Error::LengthMismatch {
                what: "N",
                expected,
                got: self.n.len(),
            });
        }
        Ok(())
    }
}

/// Expectation value in S¹×S².
pub fn s1xs2_expectation(h: &HomologyData, k: CouplingLevel) -> Result<Invariant> {
    if h.genus != 0 {
        return Err(Error::GenusMismatch {
            expected: 0,
            got: h.genus,
        });
    }
    s1xsigma_expectation(h, k)
}

/// Expectation value in S¹×Σ_g: zero unless every `N_j ≡ 0 mod 2|k|`,
/// otherwise the phase of `Q_self`.
pub fn s1xsigma_expectation(h: &HomologyData, k: CouplingLevel) -> Result<Invariant> {
    h.validate()?;
    let m = k.colours() as i64;
    if h.n.iter().any(|n| n.rem_euclid(m) != 0) {
        return Ok(Invariant::zero(k.order()));
    }
    let q = h.q_self.rem_euclid(k.order() as i64);
    Ok(Invariant::phase(k.phase_of(q)))
}

fn append_surgery(
    observed: &FramedLink,
    columns: usize,
    linking: impl Fn(usize, usize) -> i64,
    k: CouplingLevel,
    prefix: &str,
) -> Result<SurgeryPresentation> {
    observed.validate()?;
    if let Some(j) = observed.roles.iter().position(|&r| r == Role::Surgery) {
        return Err(Error::SurgeryComponent(j));
    }
    let mut link = observed.clone();
    let n = observed.len();
    for c in 0..columns {
        let mut links: Vec<i64> = (0..n).map(|i| linking(i, c)).collect();
        links.extend(std::iter::repeat_n(0, c));
        let name = if columns == 1 {
            prefix.to_string()
        } else {
            format!("{prefix}{}", c + 1)
        };
        link.push(0, &links, 0, Role::Surgery, name);
    }
    Ok(SurgeryPresentation::new(link, k))
}

/// Adds a 0-framed surgery unknot linking observed component `i`
/// `core_linkings[i]` times.
pub fn s1xs2_presentation(
    observed: &FramedLink,
    core_linkings: &[i64],
    k: CouplingLevel,
) -> Result<SurgeryPresentation> {
    if core_linkings.len() != observed.len() {
        return Err(Error::LengthMismatch {
            what: "core linkings",
            expected: observed.len(),
            got: core_linkings.len(),
        });
    }
    append_surgery(observed, 1, |i, _| core_linkings[i], k, "core")
}

/// Adds 0-framed Borromean rings as three surgery components; row `i` of
/// `linkings` gives observed component `i`'s linking with each ring.
pub fn t3_presentation(
    observed: &FramedLink,
    linkings: &[[i64; 3]],
    k: CouplingLevel,
) -> Result<SurgeryPresentation> {
    if linkings.len() != observed.len() {
        return Err(Error::LengthMismatch {
            what: "linkings rows",
            expected: observed.len(),
            got: linkings.len(),
        });
    }
    append_surgery(observed, 3, |i, c| linkings[i][c], k, "B")
}

/// Reads the homology data back off a presentation built by
/// [`s1xs2_presentation`] or [`t3_presentation`]: `N_j = Σ_i q_i·lk(C_i, S_j)`
/// and `Q_self` the observed block's form. `None` for any other shape, or
/// on overflow.
pub fn reference_homology(p: &SurgeryPresentation) -> Option<HomologyData> {
    let fl = &p.link;
    fl.validate().ok()?;
    let surgery = fl.indices_with(Role::Surgery);
    let genus = match surgery.len() {
        1 => 0,
        3 => 1,
        _ => return None,
    };
    if surgery
        .iter()
        .any(|&a| surgery.iter().any(|&b| fl.linking[a][b] != 0))
    {
        return None;
    }
    let observed = fl.indices_with(Role::Observed);
    let n = surgery
        .iter()
        .map(|&s| {
            observed.iter().try_fold(0i64, |acc, &i| {
                fl.charges[i]
                    .checked_mul(fl.linking[i][s])
                    .and_then(|t| acc.checked_add(t))
            })
        })
        .collect::<Option<Vec<i64>>>()?;
    let q = crate::invariants::quadratic_form(fl, RoleFilter::Only(Role::Observed)).ok()?;
    Some(HomologyData {
        genus,
        n,
        q_self: q.try_into().ok()?,
    })
}
