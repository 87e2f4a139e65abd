//! Canonical distribution file format and CSV exports.
//!
//! Distributions are stored as JSON with `variables`, `alphabets`, and
//! `outcomes`; each outcome row lists the symbols followed by the
//! probability as an exact rational string, so the round trip is
//! bit-exact. CSV exports use a header row and LF line endings.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::dist::{rat_from_str, JointDistribution, Rat};
use crate::error::{Error, Result};
use crate::profiles::Profile;
use crate::shannon::InfoDiagram;
use crate::symbol::Symbol;

fn symbol_to_value(s: &Symbol) -> Value {
    match s {
        Symbol::Int(v) => json!(v),
        Symbol::Tuple(items) => Value::Array(items.iter().map(symbol_to_value).collect()),
    }
}

fn value_to_symbol(v: &Value) -> Result<Symbol> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .map(Symbol::int)
            .ok_or_else(|| Error::Parse(format!("symbol {n} is not a nonnegative integer"))),
        Value::Array(items) => Ok(Symbol::Tuple(
            items.iter().map(value_to_symbol).collect::<Result<_>>()?,
        )),
        other => Err(Error::Parse(format!("invalid symbol {other}"))),
    }
}

pub fn to_canonical_string(d: &JointDistribution) -> String {
    let mut doc = Map::new();
    doc.insert(
        "variables".into(),
        Value::Array(d.variables().iter().map(|v| json!(v)).collect()),
    );
    doc.insert(
        "alphabets".into(),
        Value::Array(
            d.alphabets()
                .iter()
                .map(|a| Value::Array(a.iter().map(symbol_to_value).collect()))
                .collect(),
        ),
    );
    doc.insert(
        "outcomes".into(),
        Value::Array(
            d.outcomes()
                .map(|(t, p)| {
                    let mut row: Vec<Value> = t.iter().map(symbol_to_value).collect();
                    row.push(json!(p.to_string()));
                    Value::Array(row)
                })
                .collect(),
        ),
    );
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
    text.push('\n');
    text
}

pub fn from_canonical_str(text: &str) -> Result<JointDistribution> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let field = |name: &str| -> Result<&Vec<Value>> {
        doc.get(name)
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse(format!("missing array field `{name}`")))
    };
    let variables: Vec<String> = field("variables")?
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Parse(format!("invalid variable name {v}")))
        })
        .collect::<Result<_>>()?;
    let n = variables.len();
    let mut rows: Vec<(Vec<Symbol>, Rat)> = Vec::new();
    for row in field("outcomes")? {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse("outcome rows must be arrays".into()))?;
        if row.len() != n + 1 {
            return Err(Error::ArityMismatch {
                expected: n + 1,
                got: row.len(),
            });
        }
        let tuple: Vec<Symbol> = row[..n].iter().map(value_to_symbol).collect::<Result<_>>()?;
        let p_text = row[n]
            .as_str()
            .ok_or_else(|| Error::Parse("probability must be a rational string".into()))?;
        rows.push((tuple, rat_from_str(p_text)?));
    }
    let d = JointDistribution::from_outcomes(variables, rows)?;
    match doc.get("alphabets").and_then(Value::as_array) {
        Some(alphabets) => {
            let alphabets: Vec<Vec<Symbol>> = alphabets
                .iter()
                .map(|a| {
                    a.as_array()
                        .ok_or_else(|| Error::Parse("alphabets must be arrays".into()))?
                        .iter()
                        .map(value_to_symbol)
                        .collect()
                })
                .collect::<Result<_>>()?;
            d.with_alphabets(alphabets)
        }
        None => Ok(d),
    }
}

pub fn write_distribution(path: impl AsRef<Path>, d: &JointDistribution) -> Result<()> {
    std::fs::write(path, to_canonical_string(d))?;
    Ok(())
}

pub fn read_distribution(path: impl AsRef<Path>) -> Result<JointDistribution> {
    from_canonical_str(&std::fs::read_to_string(path)?)
}

/// `mask,atom,value` rows in ascending subset-mask order.
pub fn idiagram_csv(diagram: &InfoDiagram) -> String {
    let mut out = String::from("mask,atom,value\n");
    for (mask, value) in diagram.atoms() {
        out.push_str(&format!("{mask},{},{value:.9}\n", diagram.label(mask)));
    }
    out
}

/// `scale,value` rows in point order.
pub fn profile_csv(profile: &Profile) -> String {
    let mut out = String::from("scale,value\n");
    for &(x, v) in &profile.points {
        out.push_str(&format!("{x:.6},{v:.6}\n"));
    }
    out
}
