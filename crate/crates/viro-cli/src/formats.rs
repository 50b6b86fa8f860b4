//! JSON file formats for the command-line tool.
//!
//! Four kinds of files are understood:
//!
//! * polytope: `{"dim": d, "vertices": [[x, y, ...], ...]}` with integer
//!   coordinates.  The stated `dim` is checked against the hull of the
//!   vertex set; facet data is always recomputed, never read.
//! * triangulation: `{"points": [[x, ...], ...], "simplices": [[i, ...],
//!   ...], "lifting": ["p/q", ...]}` where `lifting` is optional and its
//!   entries are exact rationals written as `"p"` or `"p/q"` strings (bare
//!   JSON integers are also accepted).
//! * signs: `{"signs": [1, -1, ...]}`, one entry of `1` or `-1` per
//!   triangulation point.  A bare array is also accepted.
//! * system: a JSON array describing several signed triangulations at
//!   once, one entry `{"polytope": ..., "triangulation": ..., "signs":
//!   ..., "lifting": ...}` per equation.  `polytope` and `lifting` are
//!   optional; a `lifting` entry overrides the one inside the
//!   triangulation, and a missing polytope defaults to the convex hull of
//!   the triangulation's points.
//!
//! Writers emit the same shapes, so every emitted artifact reparses to an
//! equal value, and the field order is fixed so identical inputs produce
//! byte-identical output.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use viro_core::polytope::{convex_hull, LatticePolytope};
use viro_core::triangulation::Triangulation;
use viro_core::{Int, Rat};

use crate::CliError;

/// Read a file and parse it as JSON.  Both failure modes (unreadable file,
/// malformed text) are input errors.
pub fn load_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Io(format!("{} is not valid JSON: {e}", path.display())))
}

fn shape(what: &str, detail: impl Into<String>) -> CliError {
    CliError::Io(format!("{what}: {}", detail.into()))
}

fn as_i64(v: &Value, what: &str) -> Result<i64, CliError> {
    v.as_i64()
        .ok_or_else(|| shape(what, format!("expected an integer, found {v}")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array()
        .ok_or_else(|| shape(what, format!("expected an array, found {v}")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object()
        .ok_or_else(|| shape(what, format!("expected an object, found {v}")))
}

/// Integer matrix (point list) from a JSON array of arrays.
pub fn parse_points(v: &Value, what: &str) -> Result<Vec<Vec<Int>>, CliError> {
    let rows = as_array(v, what)?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let cells = as_array(row, &format!("{what}[{i}]"))?;
        let mut p = Vec::with_capacity(cells.len());
        for (j, c) in cells.iter().enumerate() {
            p.push(Int::from(as_i64(c, &format!("{what}[{i}][{j}]"))?));
        }
        out.push(p);
    }
    Ok(out)
}

pub fn points_json(points: &[Vec<Int>]) -> Result<Value, CliError> {
    let mut rows = Vec::with_capacity(points.len());
    for p in points {
        let mut row = Vec::with_capacity(p.len());
        for c in p {
            row.push(int_json(c)?);
        }
        rows.push(Value::Array(row));
    }
    Ok(Value::Array(rows))
}

/// Exact integer as JSON: a number when it fits in 64 bits, otherwise a
/// decimal string.
pub fn int_json(n: &Int) -> Result<Value, CliError> {
    match n.to_i64() {
        Some(v) => Ok(json!(v)),
        None => Ok(Value::String(n.to_string())),
    }
}

/// Exact rational as a string: `"p"` when the denominator is one,
/// `"p/q"` otherwise, always in lowest terms.
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact rational from `"p"`, `"p/q"`, or a bare JSON integer.
pub fn parse_rat(v: &Value, what: &str) -> Result<Rat, CliError> {
    if let Some(n) = v.as_i64() {
        return Ok(Rat::from_integer(Int::from(n)));
    }
    let s = v
        .as_str()
        .ok_or_else(|| shape(what, format!("expected a rational string, found {v}")))?;
    let bad = || shape(what, format!("`{s}` is not a rational number"));
    let parse_int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let denom = parse_int(q)?;
            if denom.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(parse_int(p)?, denom))
        }
    }
}

/// Lattice polytope from `{"dim", "vertices"}`.  The hull is recomputed
/// from the vertex list; a stated `dim` that contradicts it is rejected.
pub fn parse_polytope(v: &Value, what: &str) -> Result<LatticePolytope, CliError> {
    let obj = as_object(v, what)?;
    let verts = obj
        .get("vertices")
        .ok_or_else(|| shape(what, "missing `vertices`"))?;
    let points = parse_points(verts, &format!("{what}.vertices"))?;
    if points.is_empty() {
        return Err(shape(what, "`vertices` must not be empty"));
    }
    let poly = convex_hull(&points).map_err(CliError::from)?;
    if let Some(d) = obj.get("dim") {
        let d = as_i64(d, &format!("{what}.dim"))?;
        if d < 0 || d as usize != poly.dim() {
            return Err(shape(
                what,
                format!("stated dim {d} but the hull has dimension {}", poly.dim()),
            ));
        }
    }
    Ok(poly)
}

pub fn polytope_json(p: &LatticePolytope) -> Result<Value, CliError> {
    let mut obj = Map::new();
    obj.insert("dim".into(), json!(p.dim()));
    obj.insert("vertices".into(), points_json(p.vertices())?);
    Ok(Value::Object(obj))
}

/// Triangulation from `{"points", "simplices", "lifting"?}`.  Indices are
/// checked against the point list; the lifting, when present, must have
/// one entry per point.
pub fn parse_triangulation(v: &Value, what: &str) -> Result<Triangulation, CliError> {
    let obj = as_object(v, what)?;
    let points = parse_points(
        obj.get("points")
            .ok_or_else(|| shape(what, "missing `points`"))?,
        &format!("{what}.points"),
    )?;
    // A missing simplex list means "points and lifting only", which is all
    // the regular-subdivision command needs.
    let empty = Value::Array(vec![]);
    let simp_val = obj.get("simplices").unwrap_or(&empty);
    let rows = as_array(simp_val, &format!("{what}.simplices"))?;
    let mut simplices = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let tag = format!("{what}.simplices[{i}]");
        let cells = as_array(row, &tag)?;
        let mut s = Vec::with_capacity(cells.len());
        for c in cells {
            let idx = as_i64(c, &tag)?;
            if idx < 0 || idx as usize >= points.len() {
                return Err(shape(&tag, format!("point index {idx} out of range")));
            }
            s.push(idx as usize);
        }
        simplices.push(s);
    }
    let lifting = match obj.get("lifting") {
        None | Some(Value::Null) => None,
        Some(l) => Some(parse_lifting(l, &format!("{what}.lifting"), points.len())?),
    };
    Ok(Triangulation {
        points,
        simplices,
        lifting,
    })
}

/// A lifting array of exact rationals, checked for length.
pub fn parse_lifting(v: &Value, what: &str, expect: usize) -> Result<Vec<Rat>, CliError> {
    let rows = as_array(v, what)?;
    if rows.len() != expect {
        return Err(shape(
            what,
            format!("expected {expect} heights, found {}", rows.len()),
        ));
    }
    rows.iter()
        .enumerate()
        .map(|(i, r)| parse_rat(r, &format!("{what}[{i}]")))
        .collect()
}

pub fn lifting_json(lifting: &[Rat]) -> Value {
    Value::Array(
        lifting
            .iter()
            .map(|r| Value::String(rat_string(r)))
            .collect(),
    )
}

pub fn triangulation_json(t: &Triangulation) -> Result<Value, CliError> {
    let mut obj = Map::new();
    obj.insert("points".into(), points_json(&t.points)?);
    obj.insert(
        "simplices".into(),
        Value::Array(
            t.simplices
                .iter()
                .map(|s| Value::Array(s.iter().map(|&i| json!(i)).collect()))
                .collect(),
        ),
    );
    if let Some(l) = &t.lifting {
        obj.insert("lifting".into(), lifting_json(l));
    }
    Ok(Value::Object(obj))
}

/// Sign distribution from `{"signs": [...]}` or a bare array; every entry
/// must be `1` or `-1`.
pub fn parse_signs(v: &Value, what: &str) -> Result<Vec<i8>, CliError> {
    let arr = match v {
        Value::Object(obj) => as_array(
            obj.get("signs")
                .ok_or_else(|| shape(what, "missing `signs`"))?,
            &format!("{what}.signs"),
        )?,
        other => as_array(other, what)?,
    };
    let mut out = Vec::with_capacity(arr.len());
    for (i, s) in arr.iter().enumerate() {
        match as_i64(s, &format!("{what}[{i}]"))? {
            1 => out.push(1),
            -1 => out.push(-1),
            other => {
                return Err(shape(
                    &format!("{what}[{i}]"),
                    format!("signs must be 1 or -1, found {other}"),
                ))
            }
        }
    }
    Ok(out)
}

/// One equation of a system file: a signed triangulation with an optional
/// explicit polytope and an optional overriding lifting.
pub struct SystemEntry {
    pub polytope: LatticePolytope,
    pub triangulation: Triangulation,
    pub signs: Vec<i8>,
}

/// Parse a system file: a JSON array with one entry per equation.
pub fn parse_system(v: &Value) -> Result<Vec<SystemEntry>, CliError> {
    let rows = as_array(v, "system")?;
    if rows.is_empty() {
        return Err(shape("system", "the file must list at least one equation"));
    }
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let what = format!("system[{i}]");
        let obj = as_object(row, &what)?;
        let mut t = parse_triangulation(
            obj.get("triangulation")
                .ok_or_else(|| shape(&what, "missing `triangulation`"))?,
            &format!("{what}.triangulation"),
        )?;
        if let Some(l) = obj.get("lifting") {
            t.lifting = Some(parse_lifting(
                l,
                &format!("{what}.lifting"),
                t.points.len(),
            )?);
        }
        let signs = parse_signs(
            obj.get("signs")
                .ok_or_else(|| shape(&what, "missing `signs`"))?,
            &format!("{what}.signs"),
        )?;
        if signs.len() != t.points.len() {
            return Err(shape(
                &what,
                format!(
                    "{} signs for {} triangulation points",
                    signs.len(),
                    t.points.len()
                ),
            ));
        }
        let polytope = match obj.get("polytope") {
            Some(p) => parse_polytope(p, &format!("{what}.polytope"))?,
            None => convex_hull(&t.points).map_err(CliError::from)?,
        };
        out.push(SystemEntry {
            polytope,
            triangulation: t,
            signs,
        });
    }
    Ok(out)
}

/// Parse a comma-separated list of integers from a flag value.
pub fn parse_i64_list(s: &str, what: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Io(format!("{what}: `{t}` is not an integer")))
        })
        .collect()
}

/// Rational as JSON: an integer number when exact and small, a string
/// otherwise.
pub fn rat_json(r: &Rat) -> Value {
    if r.denom().is_one() {
        if let Some(v) = r.numer().to_i64() {
            return json!(v);
        }
    }
    Value::String(rat_string(r))
}
