//! Planar-diagram (PD) codes for oriented links.
//!
//! A crossing `X(a,b,c,d)` lists its four edge ends counterclockwise,
//! starting from the incoming under-strand:
//!
//! ```text
//!              c
//!              ^
//!              |
//!     d ------------> b        over-strand d -> b : sign +1
//!              |               over-strand b -> d : sign -1
//!              |
//!              a
//! ```
//!
//! The under-strand enters at `a` and leaves at `c`. The over-strand runs
//! either `d -> b` (a positive crossing) or `b -> d` (negative); which one
//! is read off the component orientations given in the component block.
//!
//! Text format: whitespace-separated `X(a,b,c,d)` terms followed by a
//! component block `C: 1 2 3 4; 5 6` listing each component's edges in
//! orientation order. A component with a single edge that touches no
//! crossing is a free unknot.
//!
//! Over-strand directions are resolved by matching every strand to an
//! unused transition `e -> succ(e)` of its component. Two-edge components
//! that never pass under anything are symmetric under this matching; their
//! first over-strand (in crossing order) is taken to run `d -> b`. Either
//! choice is a valid orientation of the same curve, and the linking numbers
//! of such a component with everything else are zero.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::link::FramedLink;

/// Edge ends of one crossing in counterclockwise order `[a, b, c, d]`.
pub type Crossing = [u64; 4];

/// How the diagonal of the linking matrix is filled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Framing {
    /// One integer per component.
    Explicit(Vec<i64>),
    /// Each component's writhe in the diagram.
    Blackboard,
}

/// A validated oriented link diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    components: Vec<Vec<u64>>,
    edge_component: HashMap<u64, usize>,
    /// Per crossing: does the over-strand run `d -> b`?
    over_d_to_b: Vec<bool>,
}

impl Diagram {
    /// Validates the combinatorics and resolves strand directions.
    pub fn new(crossings: Vec<Crossing>, components: Vec<Vec<u64>>) -> Result<Diagram> {
        let mut edge_component = HashMap::new();
        let mut position = HashMap::new();
        for (ci, comp) in components.iter().enumerate() {
            if comp.is_empty() {
                return Err(Error::ComponentCycle(format!(
                    "component {ci} has no edges"
                )));
            }
            for (pos, &e) in comp.iter().enumerate() {
                if e == 0 {
                    return Err(Error::ComponentCycle("edge labels must be positive".into()));
                }
                if edge_component.insert(e, ci).is_some() {
                    return Err(Error::ComponentCycle(format!(
                        "edge {e} is listed more than once"
                    )));
                }
                position.insert(e, pos);
            }
        }

        let mut counts: HashMap<u64, usize> = HashMap::new();
        for x in &crossings {
            for &e in x {
                if !edge_component.contains_key(&e) {
                    return Err(Error::ComponentCycle(format!(
                        "edge {e} is not listed in any component"
                    )));
                }
                *counts.entry(e).or_default() += 1;
            }
        }
        for comp in &components {
            for &e in comp {
                let count = counts.get(&e).copied().unwrap_or(0);
                let free_loop = count == 0 && comp.len() == 1;
                if count != 2 && !free_loop {
                    return Err(Error::EdgeMultiplicity { edge: e, count });
                }
            }
        }

        let succ = |e: u64| -> u64 {
            let comp = &components[edge_component[&e]];
            comp[(position[&e] + 1) % comp.len()]
        };

        // used[e] marks the transition e -> succ(e) as consumed.
        let mut used: HashMap<u64, usize> = HashMap::new();
        let consume = |e: u64, at: usize, used: &mut HashMap<u64, usize>| -> Result<()> {
            match used.insert(e, at) {
                None => Ok(()),
                Some(prev) => Err(Error::ComponentCycle(format!(
                    "transition {e} -> {} occurs at crossings {prev} and {at}",
                    succ(e)
                ))),
            }
        };

        for (i, &[a, _, c, _]) in crossings.iter().enumerate() {
            if edge_component[&a] != edge_component[&c] || succ(a) != c {
                return Err(Error::ComponentCycle(format!(
                    "crossing {i}: under-strand {a} -> {c} is not consecutive in a component"
                )));
            }
            consume(a, i, &mut used)?;
        }

        let mut over_d_to_b = vec![true; crossings.len()];
        let mut ambiguous = Vec::new();
        for (i, &[_, b, _, d]) in crossings.iter().enumerate() {
            if edge_component[&b] != edge_component[&d] {
                return Err(Error::ComponentCycle(format!(
                    "crossing {i}: over-strand edges {b} and {d} lie on different components"
                )));
            }
            match (succ(d) == b, succ(b) == d) {
                (true, false) => consume(d, i, &mut used)?,
                (false, true) => {
                    over_d_to_b[i] = false;
                    consume(b, i, &mut used)?;
                }
                (true, true) => ambiguous.push(i),
                (false, false) => {
                    return Err(Error::ComponentCycle(format!(
                        "crossing {i}: over-strand edges {b} and {d} are not consecutive"
                    )))
                }
            }
        }
        for i in ambiguous {
            let [_, b, _, d] = crossings[i];
            if !used.contains_key(&d) {
                consume(d, i, &mut used)?;
            } else {
                over_d_to_b[i] = false;
                consume(b, i, &mut used)?;
            }
        }

        Ok(Diagram {
            crossings,
            components,
            edge_component,
            over_d_to_b,
        })
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn components(&self) -> &[Vec<u64>] {
        &self.components
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn component_of_edge(&self, e: u64) -> Option<usize> {
        self.edge_component.get(&e).copied()
    }

    fn check_crossing(&self, i: usize) -> Result<()> {
        if i < self.crossings.len() {
            Ok(())
        } else {
            Err(Error::Index {
                index: i,
                len: self.crossings.len(),
            })
        }
    }

    /// `(incoming, outgoing)` edges of the under-strand at crossing `i`.
    pub fn under_strand(&self, i: usize) -> Result<(u64, u64)> {
        self.check_crossing(i)?;
        let [a, _, c, _] = self.crossings[i];
        Ok((a, c))
    }

    /// `(incoming, outgoing)` edges of the over-strand at crossing `i`.
    pub fn over_strand(&self, i: usize) -> Result<(u64, u64)> {
        self.check_crossing(i)?;
        let [_, b, _, d] = self.crossings[i];
        Ok(if self.over_d_to_b[i] { (d, b) } else { (b, d) })
    }

    /// Components of the `(under, over)` strands at crossing `i`.
    pub fn crossing_components(&self, i: usize) -> Result<(usize, usize)> {
        self.check_crossing(i)?;
        let [a, b, _, _] = self.crossings[i];
        Ok((self.edge_component[&a], self.edge_component[&b]))
    }

    /// +1 when the over-strand runs `d -> b`, otherwise -1.
    pub fn crossing_sign(&self, i: usize) -> Result<i64> {
        self.check_crossing(i)?;
        Ok(if self.over_d_to_b[i] { 1 } else { -1 })
    }

    /// Sum of the signs of the self-crossings of component `j`.
    pub fn writhe(&self, j: usize) -> Result<i64> {
        if j >= self.components.len() {
            return Err(Error::Index {
                index: j,
                len: self.components.len(),
            });
        }
        let mut w = 0;
        for i in 0..self.crossings.len() {
            if self.crossing_components(i)? == (j, j) {
                w += self.crossing_sign(i)?;
            }
        }
        Ok(w)
    }

    /// Compiles the diagram to linking data: off-diagonal entries are half
    /// the signed count of crossings between two components.
    pub fn linking_matrix(&self, framing: &Framing) -> Result<FramedLink> {
        let n = self.components.len();
        if let Framing::Explicit(f) = framing {
            if f.len() != n {
                return Err(Error::LengthMismatch {
                    what: "framings",
                    expected: n,
                    got: f.len(),
                });
            }
        }
        let mut signed = vec![vec![0i64; n]; n];
        let mut count = vec![vec![0usize; n]; n];
        for i in 0..self.crossings.len() {
            let (u, o) = self.crossing_components(i)?;
            let s = self.crossing_sign(i)?;
            signed[u][o] += s;
            count[u][o] += 1;
            if u != o {
                signed[o][u] += s;
                count[o][u] += 1;
            }
        }
        let mut linking = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    linking[i][i] = match framing {
                        Framing::Explicit(f) => f[i],
                        Framing::Blackboard => signed[i][i],
                    };
                } else {
                    if !count[i][j].is_multiple_of(2) {
                        return Err(Error::OddInterCrossings {
                            i: i.min(j),
                            j: i.max(j),
                            count: count[i][j],
                        });
                    }
                    linking[i][j] = signed[i][j] / 2;
                }
            }
        }
        let charges = vec![0; n];
        Ok(FramedLink::new(linking, charges))
    }

    /// The same diagram with component `j` traversed the other way.
    pub fn reverse_component(&self, j: usize) -> Result<Diagram> {
        if j >= self.components.len() {
            return Err(Error::Index {
                index: j,
                len: self.components.len(),
            });
        }
        let mut components = self.components.clone();
        components[j].reverse();
        let crossings = self
            .crossings
            .iter()
            .map(|&x| {
                let [a, b, c, d] = x;
                if self.edge_component[&a] == j {
                    [c, d, a, b]
                } else {
                    x
                }
            })
            .collect();
        Diagram::new(crossings, components)
    }

    /// Mirror image: reverses the cyclic order at every crossing.
    pub fn mirror(&self) -> Diagram {
        let crossings = self
            .crossings
            .iter()
            .map(|&[a, b, c, d]| [a, d, c, b])
            .collect();
        Diagram::new(crossings, self.components.clone()).expect("mirroring preserves validity")
    }
}

impl std::fmt::Display for Diagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for [a, b, c, d] in &self.crossings {
            write!(f, "X({a},{b},{c},{d}) ")?;
        }
        write!(f, "C:")?;
        for (i, comp) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            for e in comp {
                write!(f, " {e}")?;
            }
        }
        Ok(())
    }
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, ch: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", ch as char))
        }
    }

    fn label(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a positive edge label");
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        match text.parse::<u64>() {
            Ok(0) => {
                self.pos = start;
                self.err("edge labels must be positive")
            }
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("edge label out of range")
            }
        }
    }

    fn crossing(&mut self) -> Result<Crossing> {
        self.expect(b'X')?;
        self.expect(b'(')?;
        let mut x = [0u64; 4];
        for (i, slot) in x.iter_mut().enumerate() {
            if i > 0 {
                self.skip_ws();
                if self.peek() == Some(b')') {
                    return self.err("crossing needs exactly four edge labels");
                }
                self.expect(b',')?;
            }
            *slot = self.label()?;
        }
        self.skip_ws();
        if self.peek() == Some(b',') {
            return self.err("crossing needs exactly four edge labels");
        }
        self.expect(b')')?;
        Ok(x)
    }
}

/// Parses only the crossing terms; the text must contain nothing else.
pub fn parse_crossings(text: &str) -> Result<Vec<Crossing>> {
    let mut lx = Lexer {
        s: text.as_bytes(),
        pos: 0,
    };
    let mut out = Vec::new();
    loop {
        lx.skip_ws();
        match lx.peek() {
            None => return Ok(out),
            Some(b'X') => out.push(lx.crossing()?),
            Some(_) => return lx.err("expected 'X(' or end of input"),
        }
    }
}

/// Parses a full PD text: crossing terms followed by a `C:` component block.
pub fn parse_pd(text: &str) -> Result<Diagram> {
    let mut lx = Lexer {
        s: text.as_bytes(),
        pos: 0,
    };
    let mut crossings = Vec::new();
    loop {
        lx.skip_ws();
        match lx.peek() {
            Some(b'X') => crossings.push(lx.crossing()?),
            Some(b'C') => break,
            None => return lx.err("missing component block 'C:'"),
            Some(_) => return lx.err("expected 'X(' or 'C:'"),
        }
    }
    lx.expect(b'C')?;
    lx.expect(b':')?;
    let mut components = vec![Vec::new()];
    loop {
        lx.skip_ws();
        match lx.peek() {
            None => break,
            Some(b';') => {
                lx.pos += 1;
                components.push(Vec::new());
            }
            Some(c) if c.is_ascii_digit() => {
                let e = lx.label()?;
                components.last_mut().expect("nonempty").push(e);
            }
            Some(_) => return lx.err("expected an edge label or ';'"),
        }
    }
    if components.last().is_some_and(Vec::is_empty) && components.len() > 1 {
        // tolerate a trailing ';'
        components.pop();
    }
    Diagram::new(crossings, components)
}
