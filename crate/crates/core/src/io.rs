//! JSON input and output.
//!
//! Three input shapes are accepted, each with an optional `k`:
//!
//! ```text
//! {"linking": [[..],..], "charges"?: [..], "roles"?: [..], "names"?: [..]}
//! {"pd": "X(..) ..", "components": [[..],..], "framings": [..] | "blackboard",
//!  "charges"?: [..], "roles"?: [..], "names"?: [..]}
//! {"genus": g, "N": [..], "q_self": q}
//! ```
//!
//! Schema errors carry the JSON path of the offending field.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::cyclotomic::CycNum;
use crate::diagram::{parse_crossings, Diagram, Framing};
use crate::error::{Error, Result};
use crate::invariants::{CouplingLevel, Invariant, MAX_LEVEL};
use crate::link::FramedLink;
use crate::manifolds::HomologyData;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Link(FramedLink),
    Diagram {
        diagram: Diagram,
        framing: Framing,
        /// The diagram compiled to linking data, with the document's
        /// charges, roles and names applied.
        link: FramedLink,
    },
    Homology(HomologyData),
}

/// A parsed and validated input document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub k: Option<CouplingLevel>,
    pub input: Input,
    pub warnings: Vec<String>,
}

impl Document {
    /// The framed link, for link and diagram inputs.
    pub fn link(&self) -> Option<&FramedLink> {
        match &self.input {
            Input::Link(fl) | Input::Diagram { link: fl, .. } => Some(fl),
            Input::Homology(_) => None,
        }
    }
}

fn schema(path: &str, msg: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        msg: msg.into(),
    }
}

fn int(v: &Value, path: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| schema(path, "expected a 64-bit integer"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| schema(path, "expected an array"))
}

fn int_vec(v: &Value, path: &str) -> Result<Vec<i64>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| int(x, &format!("{path}[{i}]")))
        .collect()
}

fn matrix(v: &Value, path: &str) -> Result<Vec<Vec<i64>>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, row)| int_vec(row, &format!("{path}[{i}]")))
        .collect()
}

fn check_len(len: usize, expected: usize, path: &str) -> Result<()> {
    if len == expected {
        Ok(())
    } else {
        Err(schema(
            path,
            format!("expected {expected} entries, found {len}"),
        ))
    }
}

const LINK_KEYS: &[&str] = &["k", "linking", "charges", "roles", "names"];
const DIAGRAM_KEYS: &[&str] = &[
    "k",
    "pd",
    "components",
    "framings",
    "charges",
    "roles",
    "names",
];
const HOMOLOGY_KEYS: &[&str] = &["k", "genus", "N", "q_self"];

/// Fills charges, roles and names of an `n`-component link from the
/// document, applying defaults for missing fields.
fn decorations(
    obj: &Map<String, Value>,
    mut link: FramedLink,
    warnings: &mut Vec<String>,
) -> Result<FramedLink> {
    let n = link.len();
    match obj.get("charges") {
        Some(v) => {
            let charges = int_vec(v, "$.charges")?;
            check_len(charges.len(), n, "$.charges")?;
            link.charges = charges;
        }
        None => {
            warnings.push("no charges given; all components uncoloured".into());
            link.charges = vec![0; n];
        }
    }
    if let Some(v) = obj.get("roles") {
        let roles = array(v, "$.roles")?;
        check_len(roles.len(), n, "$.roles")?;
        link.roles = roles
            .iter()
            .enumerate()
            .map(|(i, r)| {
                serde_json::from_value(r.clone()).map_err(|_| {
                    schema(
                        &format!("$.roles[{i}]"),
                        "expected \"observed\" or \"surgery\"",
                    )
                })
            })
            .collect::<Result<_>>()?;
    }
    if let Some(v) = obj.get("names") {
        let names = array(v, "$.names")?;
        check_len(names.len(), n, "$.names")?;
        link.names = names
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| schema(&format!("$.names[{i}]"), "expected a string"))
            })
            .collect::<Result<_>>()?;
    }
    for w in link
        .validate()
        .map_err(|e| schema("$.linking", e.to_string()))?
    {
        warnings.push(w.to_string());
    }
    Ok(link)
}

fn load_link(obj: &Map<String, Value>, warnings: &mut Vec<String>) -> Result<Input> {
    let linking = matrix(&obj["linking"], "$.linking")?;
    let n = linking.len();
    for (i, row) in linking.iter().enumerate() {
        check_len(row.len(), n, &format!("$.linking[{i}]"))?;
    }
    let link = FramedLink::new(linking, vec![0; n]);
    Ok(Input::Link(decorations(obj, link, warnings)?))
}

fn load_diagram(obj: &Map<String, Value>, warnings: &mut Vec<String>) -> Result<Input> {
    let pd = obj["pd"]
        .as_str()
        .ok_or_else(|| schema("$.pd", "expected a string of crossings"))?;
    let crossings = parse_crossings(pd).map_err(|e| schema("$.pd", e.to_string()))?;
    let components_v = obj
        .get("components")
        .ok_or_else(|| schema("$.components", "missing"))?;
    let components = array(components_v, "$.components")?
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let path = format!("$.components[{i}]");
            array(c, &path)?
                .iter()
                .enumerate()
                .map(|(j, e)| {
                    e.as_u64()
                        .ok_or_else(|| schema(&format!("{path}[{j}]"), "expected an edge label"))
                })
                .collect::<Result<Vec<u64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let diagram = Diagram::new(crossings, components).map_err(|e| schema("$.pd", e.to_string()))?;
    let framing = match obj.get("framings") {
        Some(Value::String(s)) if s == "blackboard" => Framing::Blackboard,
        Some(v @ Value::Array(_)) => {
            let f = int_vec(v, "$.framings")?;
            check_len(f.len(), diagram.component_count(), "$.framings")?;
            Framing::Explicit(f)
        }
        Some(_) => {
            return Err(schema(
                "$.framings",
                "expected an integer array or \"blackboard\"",
            ))
        }
        None => return Err(schema("$.framings", "missing")),
    };
    let link = diagram
        .linking_matrix(&framing)
        .map_err(|e| schema("$.pd", e.to_string()))?;
    let link = decorations(obj, link, warnings)?;
    Ok(Input::Diagram {
        diagram,
        framing,
        link,
    })
}

fn load_homology(obj: &Map<String, Value>) -> Result<Input> {
    let genus = int(&obj["genus"], "$.genus")?;
    let genus: u32 = genus
        .try_into()
        .map_err(|_| schema("$.genus", "expected a non-negative genus"))?;
    let n = int_vec(obj.get("N").ok_or_else(|| schema("$.N", "missing"))?, "$.N")?;
    check_len(n.len(), 2 * genus as usize + 1, "$.N")?;
    let q_self = int(
        obj.get("q_self")
            .ok_or_else(|| schema("$.q_self", "missing"))?,
        "$.q_self",
    )?;
    Ok(Input::Homology(HomologyData { genus, n, q_self }))
}

/// Parses a document from a JSON value.
pub fn load_value(v: &Value) -> Result<Document> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema("$", "expected an object"))?;
    let shapes: Vec<&str> = ["linking", "pd", "genus"]
        .into_iter()
        .filter(|key| obj.contains_key(*key))
        .collect();
    let shape = match shapes.as_slice() {
        [one] => *one,
        [] => {
            return Err(schema(
                "$",
                "expected one of \"linking\", \"pd\" or \"genus\"",
            ))
        }
        _ => {
            return Err(schema(
                "$",
                format!("conflicting input forms: {}", shapes.join(", ")),
            ))
        }
    };
    let allowed = match shape {
        "linking" => LINK_KEYS,
        "pd" => DIAGRAM_KEYS,
        _ => HOMOLOGY_KEYS,
    };
    if let Some(key) = obj.keys().find(|key| !allowed.contains(&key.as_str())) {
        return Err(schema(&format!("$.{key}"), "unknown field"));
    }
    let k = match obj.get("k") {
        None => None,
        Some(v) => {
            Some(CouplingLevel::new(int(v, "$.k")?).map_err(|e| schema("$.k", e.to_string()))?)
        }
    };
    let mut warnings = Vec::new();
    let input = match shape {
        "linking" => load_link(obj, &mut warnings)?,
        "pd" => load_diagram(obj, &mut warnings)?,
        _ => load_homology(obj)?,
    };
    Ok(Document { k, input, warnings })
}

pub fn load_str(text: &str) -> Result<Document> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema("$", e.to_string()))?;
    load_value(&v)
}

pub fn load_link_json(path: impl AsRef<Path>) -> Result<Document> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| schema("$", format!("cannot read {}: {e}", path.display())))?;
    load_str(&text)
}

/// Serializes a link in the matrix form read by [`load_value`].
pub fn link_to_json(fl: &FramedLink, k: Option<CouplingLevel>) -> Value {
    let mut obj = Map::new();
    if let Some(k) = k {
        obj.insert("k".into(), json!(k.get()));
    }
    obj.insert("linking".into(), json!(fl.linking));
    obj.insert("charges".into(), json!(fl.charges));
    obj.insert("roles".into(), json!(fl.roles));
    obj.insert("names".into(), json!(fl.names));
    Value::Object(obj)
}

pub fn homology_to_json(h: &HomologyData, k: Option<CouplingLevel>) -> Value {
    let mut v = json!({"genus": h.genus, "N": h.n, "q_self": h.q_self});
    if let Some(k) = k {
        v["k"] = json!(k.get());
    }
    v
}

fn big_to_json(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(v) => json!(v),
        None => json!(b.to_string()),
    }
}

fn big_from_json(v: &Value, path: &str) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    v.as_str()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| schema(path, "expected an integer or integer string"))
}

/// Largest order accepted when decoding, `4 * MAX_LEVEL`.
pub const MAX_ORDER: u64 = 4 * MAX_LEVEL as u64;

/// `{"n": order, "coeffs": [[num, den], ..]}` in the power basis of `ζ_n`.
pub fn cyc_to_json(c: &CycNum) -> Value {
    let coeffs: Vec<Value> = c
        .coeffs()
        .iter()
        .map(|r| json!([big_to_json(r.numer()), big_to_json(r.denom())]))
        .collect();
    json!({"n": c.order(), "coeffs": coeffs})
}

pub fn cyc_from_json(v: &Value) -> Result<CycNum> {
    let n = v
        .get("n")
        .and_then(Value::as_u64)
        .filter(|&n| n > 0)
        .ok_or_else(|| schema("$.n", "expected a positive order"))?;
    if n > MAX_ORDER {
        return Err(schema("$.n", "order above the largest supported 4|k|"));
    }
    let coeffs = array(
        v.get("coeffs")
            .ok_or_else(|| schema("$.coeffs", "missing"))?,
        "$.coeffs",
    )?
    .iter()
    .enumerate()
    .map(|(i, pair)| {
        let path = format!("$.coeffs[{i}]");
        match array(pair, &path)?.as_slice() {
            [num, den] => {
                let num = big_from_json(num, &format!("{path}[0]"))?;
                let den = big_from_json(den, &format!("{path}[1]"))?;
                if den == BigInt::from(0) {
                    return Err(schema(&format!("{path}[1]"), "zero denominator"));
                }
                Ok(BigRational::new(num, den))
            }
            _ => Err(schema(&path, "expected [numerator, denominator]")),
        }
    })
    .collect::<Result<Vec<_>>>()?;
    if coeffs.len() as u64 > n {
        return Err(schema("$.coeffs", "more coefficients than the order"));
    }
    Ok(CycNum::from_poly(n, &coeffs))
}

/// Result record: exact value, root-of-unity data when applicable, and the
/// complex embedding.
pub fn invariant_to_json(inv: &Invariant) -> Value {
    let mut v = json!({
        "zero": inv.is_zero,
        "order": inv.order(),
        "value": cyc_to_json(&inv.value),
        "numeric": [inv.numeric.0, inv.numeric.1],
    });
    if let Some(e) = inv.phase_exponent() {
        v["phase_exponent"] = json!(e);
    }
    v
}
