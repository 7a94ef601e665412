//! Framed coloured links reduced to their linking data.
//!
//! Everything downstream of the diagram front end works on [`FramedLink`]:
//! a symmetric integer matrix whose off-diagonal entries are pairwise
//! linking numbers and whose diagonal holds the framings, plus one integer
//! charge and one role per component.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Carries a Wilson line with the component's charge.
    Observed,
    /// Part of a surgery presentation; its charge is summed over.
    Surgery,
}

/// Which components a quadratic form is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoleFilter {
    All,
    Only(Role),
}

impl RoleFilter {
    pub fn admits(self, role: Role) -> bool {
        match self {
            RoleFilter::All => true,
            RoleFilter::Only(r) => r == role,
        }
    }
}

/// Non-fatal findings of [`FramedLink::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// Surgery components are summed over; a user charge on one is ignored.
    SurgeryCharge { component: usize, charge: i64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::SurgeryCharge { component, charge } => write!(
                f,
                "surgery component {component} carries charge {charge}, which is ignored"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FramedLink {
    /// `linking[i][j]` = lk(C_i, C_j) for i != j; `linking[j][j]` is the framing.
    pub linking: Vec<Vec<i64>>,
    pub charges: Vec<i64>,
    pub roles: Vec<Role>,
    pub names: Vec<String>,
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("C{}", i + 1)).collect()
}

impl FramedLink {
    /// A link with every component observed and default names.
    pub fn new(linking: Vec<Vec<i64>>, charges: Vec<i64>) -> Self {
        let n = linking.len();
        FramedLink {
            linking,
            charges,
            roles: vec![Role::Observed; n],
            names: default_names(n),
        }
    }

    pub fn with_roles(linking: Vec<Vec<i64>>, charges: Vec<i64>, roles: Vec<Role>) -> Self {
        let n = linking.len();
        FramedLink {
            linking,
            charges,
            roles,
            names: default_names(n),
        }
    }

    pub fn empty() -> Self {
        FramedLink::new(Vec::new(), Vec::new())
    }

    /// `n` unlinked components with the given framings and charges.
    pub fn unlink(framings: &[i64], charges: &[i64]) -> Self {
        let n = framings.len();
        let mut linking = vec![vec![0; n]; n];
        for (i, &f) in framings.iter().enumerate() {
            linking[i][i] = f;
        }
        FramedLink::new(linking, charges.to_vec())
    }

    pub fn len(&self) -> usize {
        self.linking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.linking.is_empty()
    }

    pub fn framing(&self, j: usize) -> i64 {
        self.linking[j][j]
    }

    pub fn indices_with(&self, role: Role) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.roles[i] == role).collect()
    }

    pub fn count(&self, role: Role) -> usize {
        self.roles.iter().filter(|&&r| r == role).count()
    }

    pub(crate) fn check_index(&self, j: usize) -> Result<()> {
        if j < self.len() {
            Ok(())
        } else {
            Err(Error::Index {
                index: j,
                len: self.len(),
            })
        }
    }

    /// Checks shape and symmetry. Returns warnings for suspicious but
    /// usable data.
    pub fn validate(&self) -> Result<Vec<Warning>> {
        let n = self.len();
        for row in &self.linking {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    what: "linking matrix row",
                    expected: n,
                    got: row.len(),
                });
            }
        }
        for (what, got) in [
            ("charges", self.charges.len()),
            ("roles", self.roles.len()),
            ("names", self.names.len()),
        ] {
            if got != n {
                return Err(Error::LengthMismatch {
                    what,
                    expected: n,
                    got,
                });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (self.linking[i][j], self.linking[j][i]);
                if a != b {
                    return Err(Error::Asymmetric { i, j, a, b });
                }
            }
        }
        Ok((0..n)
            .filter(|&i| self.roles[i] == Role::Surgery && self.charges[i] != 0)
            .map(|i| Warning::SurgeryCharge {
                component: i,
                charge: self.charges[i],
            })
            .collect())
    }

    /// Removes component `j`.
    pub fn remove(&self, j: usize) -> Result<FramedLink> {
        self.check_index(j)?;
        let keep: Vec<usize> = (0..self.len()).filter(|&i| i != j).collect();
        Ok(self.select(&keep))
    }

    /// Sub-link on the given components, in the given order.
    pub fn select(&self, idx: &[usize]) -> FramedLink {
        FramedLink {
            linking: idx
                .iter()
                .map(|&i| idx.iter().map(|&j| self.linking[i][j]).collect())
                .collect(),
            charges: idx.iter().map(|&i| self.charges[i]).collect(),
            roles: idx.iter().map(|&i| self.roles[i]).collect(),
            names: idx.iter().map(|&i| self.names[i].clone()).collect(),
        }
    }

    /// Appends a component with the given framing and linkings to the
    /// existing components.
    pub fn push(&mut self, framing: i64, linkings: &[i64], charge: i64, role: Role, name: String) {
        assert_eq!(
            linkings.len(),
            self.len(),
            "one linking per existing component"
        );
        for (row, &l) in self.linking.iter_mut().zip(linkings) {
            row.push(l);
        }
        let mut last = linkings.to_vec();
        last.push(framing);
        self.linking.push(last);
        self.charges.push(charge);
        self.roles.push(role);
        self.names.push(name);
    }

    /// Disjoint union: block-diagonal linking matrix.
    pub fn split_union(&self, other: &FramedLink) -> FramedLink {
        let mut out = self.clone();
        let base = self.len();
        for j in 0..other.len() {
            let mut links = vec![0; base];
            links.extend_from_slice(&other.linking[j][..j]);
            out.push(
                other.linking[j][j],
                &links,
                other.charges[j],
                other.roles[j],
                other.names[j].clone(),
            );
        }
        out
    }
}
