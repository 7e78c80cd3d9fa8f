use serde_json::{json, Value};

use crate::ca::{ConfigRepr, Configuration, LinearCA, Pattern};
use crate::counterexamples::{LazySparseConfig, SparseVector, Tail};
use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, GroupElement, GroupKind, Window};
use crate::linalg::{Fp, Matrix};

use super::FORMAT_VERSION;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub(crate) fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field `{key}`")))
}

pub(crate) fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| parse_err(format!("{what} must be a non-negative integer")))
}

pub(crate) fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| parse_err(format!("{what} must be an integer")))
}

pub(crate) fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be an array")))
}

pub(crate) fn as_usize(v: &Value, what: &str) -> Result<usize> {
    usize::try_from(as_u64(v, what)?).map_err(|_| parse_err(format!("{what} out of range")))
}

pub fn element_to_json(g: &GroupElement) -> Value {
    match g {
        GroupElement::Int(k) => json!(k),
        GroupElement::Lattice(v) => json!(v),
        GroupElement::Finite(id) => json!(id),
        GroupElement::Word(w) => Value::String(w.iter().map(|l| l.to_char()).collect()),
    }
}

pub fn element_from_json(group: &GroupDescriptor, v: &Value) -> Result<GroupElement> {
    let g = match group.kind() {
        GroupKind::Integers => GroupElement::Int(as_i64(v, "integer element")?),
        GroupKind::Lattice { .. } => GroupElement::Lattice(
            as_array(v, "lattice element")?.iter().map(|x| as_i64(x, "lattice coordinate")).collect::<Result<_>>()?,
        ),
        GroupKind::Finite(_) => GroupElement::Finite(as_usize(v, "finite element id")?),
        GroupKind::Free { .. } => {
            let s = v.as_str().ok_or_else(|| parse_err("free group element must be a string"))?;
            GroupElement::word(s).ok_or_else(|| parse_err(format!("`{s}` is not a word over a..z, A..Z")))?
        }
    };
    group.check(&g)?;
    Ok(g)
}

pub fn group_to_json(g: &GroupDescriptor) -> Value {
    match g.kind() {
        GroupKind::Integers => json!({"kind": "integers"}),
        GroupKind::Lattice { dim } => json!({"kind": "lattice", "dim": dim}),
        GroupKind::Free { rank } => json!({"kind": "free", "rank": rank}),
        GroupKind::Finite(t) => json!({
            "kind": "finite",
            "table": t.rows(),
            "identity": t.identity(),
            "generators": g.generators().iter().map(element_to_json).collect::<Vec<_>>(),
        }),
    }
}

/// Accepts the canonical kinds plus the shorthands `cyclic` (`n`) and
/// `symmetric` (`k`), which expand to finite tables.
pub fn group_from_json(v: &Value) -> Result<GroupDescriptor> {
    let kind = field(v, "kind")?.as_str().ok_or_else(|| parse_err("group kind must be a string"))?;
    match kind {
        "integers" => Ok(GroupDescriptor::integers()),
        "lattice" => GroupDescriptor::lattice(as_usize(field(v, "dim")?, "lattice dim")?),
        "free" => GroupDescriptor::free(as_usize(field(v, "rank")?, "free rank")?),
        "cyclic" => GroupDescriptor::cyclic(as_usize(field(v, "n")?, "cyclic order")?),
        "symmetric" => GroupDescriptor::symmetric(as_usize(field(v, "k")?, "symmetric degree")?),
        "finite" => {
            let table = as_array(field(v, "table")?, "table")?
                .iter()
                .map(|row| as_array(row, "table row")?.iter().map(|x| as_usize(x, "table entry")).collect())
                .collect::<Result<Vec<Vec<usize>>>>()?;
            let identity = as_usize(field(v, "identity")?, "identity")?;
            let g = GroupDescriptor::finite(table.clone(), identity)?;
            match v.get("generators") {
                None => Ok(g),
                Some(gens) => {
                    let gens = as_array(gens, "generators")?
                        .iter()
                        .map(|x| element_from_json(&g, x))
                        .collect::<Result<Vec<_>>>()?;
                    GroupDescriptor::finite_with_generators(table, identity, gens)
                }
            }
        }
        other => Err(parse_err(format!("unknown group kind `{other}`"))),
    }
}

fn matrix_to_json(m: &Matrix) -> Value {
    json!(m.to_rows())
}

fn matrix_from_json(field: Fp, dim: usize, v: &Value) -> Result<Matrix> {
    let rows = as_array(v, "block")?
        .iter()
        .map(|r| as_array(r, "block row")?.iter().map(|x| as_i64(x, "block entry")).collect())
        .collect::<Result<Vec<Vec<i64>>>>()?;
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(parse_err(format!("blocks must be {dim}x{dim}")));
    }
    if dim == 0 {
        return Ok(Matrix::zeros(field, 0, 0));
    }
    Matrix::from_rows(field, &rows)
}

pub fn ca_to_json(ca: &LinearCA) -> Value {
    json!({
        "version": FORMAT_VERSION,
        "group": group_to_json(ca.group()),
        "p": ca.field().p(),
        "dimV": ca.dim(),
        "memory": ca.memory().iter().map(element_to_json).collect::<Vec<_>>(),
        "blocks": ca.rule().blocks().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn ca_from_json(v: &Value) -> Result<LinearCA> {
    if let Some(ver) = v.get("version") {
        if as_u64(ver, "version")? != FORMAT_VERSION {
            return Err(parse_err(format!("unsupported format version {ver}")));
        }
    }
    let group = group_from_json(field(v, "group")?)?;
    let f = Fp::new(as_u64(field(v, "p")?, "p")?)?;
    let dim = as_usize(field(v, "dimV")?, "dimV")?;
    let memory = as_array(field(v, "memory")?, "memory")?;
    let blocks = as_array(field(v, "blocks")?, "blocks")?;
    if memory.len() != blocks.len() {
        return Err(parse_err(format!("{} memory elements but {} blocks", memory.len(), blocks.len())));
    }
    let mut pairs = Vec::with_capacity(memory.len());
    for (m, b) in memory.iter().zip(blocks) {
        pairs.push((element_from_json(&group, m)?, matrix_from_json(f, dim, b)?));
    }
    LinearCA::from_blocks(group, f, dim, pairs)
}

fn vector_from_json(field: Fp, dim: usize, v: &Value) -> Result<Vec<u32>> {
    let out = as_array(v, "vector")?
        .iter()
        .map(|x| Ok(field.reduce(as_i64(x, "vector entry")?)))
        .collect::<Result<Vec<u32>>>()?;
    if out.len() != dim {
        return Err(parse_err(format!("vector of length {} where dimV = {dim}", out.len())));
    }
    Ok(out)
}

fn cells_to_json<'a>(cells: impl Iterator<Item = (&'a GroupElement, &'a Vec<u32>)>) -> Value {
    Value::Array(cells.map(|(g, v)| json!([element_to_json(g), v])).collect())
}

fn cells_from_json(group: &GroupDescriptor, field: Fp, dim: usize, v: &Value) -> Result<Vec<(GroupElement, Vec<u32>)>> {
    as_array(v, "cells")?
        .iter()
        .map(|cell| {
            let pair = as_array(cell, "cell")?;
            if pair.len() != 2 {
                return Err(parse_err("a cell is [element, vector]"));
            }
            Ok((element_from_json(group, &pair[0])?, vector_from_json(field, dim, &pair[1])?))
        })
        .collect()
}

pub fn config_to_json(x: &Configuration) -> Value {
    match x.repr() {
        ConfigRepr::Finite(m) => json!({"kind": "finite", "dimV": x.dim(), "cells": cells_to_json(m.iter())}),
        ConfigRepr::Periodic(values) => json!({"kind": "periodic", "dimV": x.dim(), "values": values}),
        ConfigRepr::Constant(v) => json!({"kind": "constant", "dimV": x.dim(), "value": v}),
    }
}

pub fn pattern_to_json(x: &Pattern) -> Value {
    json!({"kind": "pattern", "dimV": x.dim(), "cells": cells_to_json(x.iter())})
}

/// A configuration or a pattern, as accepted by `eval`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueFile {
    Configuration(Configuration),
    Pattern(Pattern),
}

pub fn value_from_json(group: &GroupDescriptor, field: Fp, v: &Value) -> Result<ValueFile> {
    let kind = field_str(v, "kind")?;
    let dim = as_usize(self::field(v, "dimV")?, "dimV")?;
    match kind {
        "finite" => Ok(ValueFile::Configuration(Configuration::finite(
            dim,
            cells_from_json(group, field, dim, self::field(v, "cells")?)?,
        )?)),
        "periodic" => {
            let values = as_array(self::field(v, "values")?, "values")?
                .iter()
                .map(|x| vector_from_json(field, dim, x))
                .collect::<Result<Vec<_>>>()?;
            Ok(ValueFile::Configuration(Configuration::periodic(dim, values)?))
        }
        "constant" => Ok(ValueFile::Configuration(Configuration::constant(
            dim,
            vector_from_json(field, dim, self::field(v, "value")?)?,
        )?)),
        "pattern" => Ok(ValueFile::Pattern(Pattern::new(dim, cells_from_json(group, field, dim, self::field(v, "cells")?)?)?)),
        other => Err(parse_err(format!("unknown configuration kind `{other}`"))),
    }
}

pub fn config_from_json(group: &GroupDescriptor, field: Fp, v: &Value) -> Result<Configuration> {
    match value_from_json(group, field, v)? {
        ValueFile::Configuration(x) => Ok(x),
        ValueFile::Pattern(_) => Err(parse_err("expected a configuration, found a pattern")),
    }
}

pub fn pattern_from_json(group: &GroupDescriptor, field: Fp, v: &Value) -> Result<Pattern> {
    match value_from_json(group, field, v)? {
        ValueFile::Pattern(x) => Ok(x),
        ValueFile::Configuration(_) => Err(parse_err("expected a pattern, found a configuration")),
    }
}

pub(crate) fn field_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?.as_str().ok_or_else(|| parse_err(format!("`{key}` must be a string")))
}

pub fn window_to_json(w: &[GroupElement]) -> Value {
    Value::Array(w.iter().map(element_to_json).collect())
}

pub fn sparse_to_json(v: &SparseVector) -> Value {
    Value::Array(v.iter().map(|(i, c)| json!([i, c])).collect())
}

pub fn sparse_from_json(field: Fp, v: &Value) -> Result<SparseVector> {
    let entries = as_array(v, "sparse vector")?
        .iter()
        .map(|e| {
            let pair = as_array(e, "sparse entry")?;
            if pair.len() != 2 {
                return Err(parse_err("a sparse entry is [index, scalar]"));
            }
            let i = as_usize(&pair[0], "basis index")?;
            if i == 0 {
                return Err(parse_err("basis indices start at 1"));
            }
            Ok((i, field.reduce(as_i64(&pair[1], "scalar")?)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseVector::from_entries(entries))
}

pub fn lazy_to_json(x: &LazySparseConfig) -> Value {
    let cells: Vec<Value> = x.cells().map(|(n, v)| json!([n, sparse_to_json(v)])).collect();
    let tail = match x.tail() {
        None => Value::Null,
        Some(Tail::PartialSums { start }) => json!({"kind": "partial-sums", "start": start}),
        Some(Tail::Constant { start, value }) => json!({"kind": "constant", "start": start, "value": sparse_to_json(value)}),
    };
    json!({"cells": cells, "tail": tail})
}

pub fn lazy_from_json(field: Fp, v: &Value) -> Result<LazySparseConfig> {
    let cells = as_array(self::field(v, "cells")?, "cells")?
        .iter()
        .map(|c| {
            let pair = as_array(c, "cell")?;
            if pair.len() != 2 {
                return Err(parse_err("a cell is [n, vector]"));
            }
            Ok((as_i64(&pair[0], "cell")?, sparse_from_json(field, &pair[1])?))
        })
        .collect::<Result<Vec<_>>>()?;
    match v.get("tail") {
        None | Some(Value::Null) => Ok(LazySparseConfig::finite(cells)),
        Some(t) => {
            let start = as_i64(self::field(t, "start")?, "tail start")?;
            let tail = match field_str(t, "kind")? {
                "partial-sums" => Tail::PartialSums { start },
                "constant" => Tail::Constant { start, value: sparse_from_json(field, self::field(t, "value")?)? },
                other => return Err(parse_err(format!("unknown tail kind `{other}`"))),
            };
            LazySparseConfig::with_tail(cells, tail)
        }
    }
}

pub fn window_from_json(group: &GroupDescriptor, v: &Value) -> Result<Window> {
    as_array(v, "window")?.iter().map(|x| element_from_json(group, x)).collect()
}
