use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, GroupElement, GroupKind, Window};
use crate::linalg::Fp;

/// Representation of a global configuration `x : G -> V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConfigRepr {
    /// Finitely supported; zero vectors are never stored.
    Finite(BTreeMap<GroupElement, Vec<u32>>),
    /// Periodic on `Z`: `x(n) = values[n mod len]`, with `len` the minimal period (at least 2).
    Periodic(Vec<Vec<u32>>),
    /// Constant and nonzero.
    Constant(Vec<u32>),
}

/// A configuration from one of the finitely describable families, kept in
/// canonical form so that `==` is equality of maps `G -> V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    dim: usize,
    repr: ConfigRepr,
}

fn check_len(dim: usize, v: &[u32]) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch(format!("vector of length {} in V of dimension {dim}", v.len())));
    }
    Ok(())
}

fn is_zero(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}

impl Configuration {
    pub fn zero(dim: usize) -> Self {
        Self { dim, repr: ConfigRepr::Finite(BTreeMap::new()) }
    }

    pub fn finite(dim: usize, cells: impl IntoIterator<Item = (GroupElement, Vec<u32>)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (g, v) in cells {
            check_len(dim, &v)?;
            if map.contains_key(&g) {
                return Err(Error::InvalidConfiguration(format!("cell {g} given twice")));
            }
            map.insert(g, v);
        }
        map.retain(|_, v| !is_zero(v));
        Ok(Self { dim, repr: ConfigRepr::Finite(map) })
    }

    /// `v` at `at`, zero elsewhere.
    pub fn delta(dim: usize, at: GroupElement, v: Vec<u32>) -> Result<Self> {
        Self::finite(dim, [(at, v)])
    }

    pub fn constant(dim: usize, v: Vec<u32>) -> Result<Self> {
        check_len(dim, &v)?;
        if is_zero(&v) {
            return Ok(Self::zero(dim));
        }
        Ok(Self { dim, repr: ConfigRepr::Constant(v) })
    }

    /// Periodic configuration on `Z` with `x(n) = values[n mod values.len()]`.
    pub fn periodic(dim: usize, values: Vec<Vec<u32>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidConfiguration("period must be at least 1".into()));
        }
        for v in &values {
            check_len(dim, v)?;
        }
        let len = values.len();
        let q = (1..=len)
            .find(|&q| len % q == 0 && (0..len).all(|i| values[i] == values[i % q]))
            .unwrap_or(len);
        let mut values = values;
        values.truncate(q);
        if q == 1 {
            return Self::constant(dim, values.pop().unwrap());
        }
        Ok(Self { dim, repr: ConfigRepr::Periodic(values) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn repr(&self) -> &ConfigRepr {
        &self.repr
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.repr, ConfigRepr::Finite(m) if m.is_empty())
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.repr, ConfigRepr::Periodic(_))
    }

    /// A period valid for this configuration on `Z` (1 for constants and zero).
    pub fn period(&self) -> Option<usize> {
        match &self.repr {
            ConfigRepr::Finite(m) if m.is_empty() => Some(1),
            ConfigRepr::Finite(_) => None,
            ConfigRepr::Periodic(v) => Some(v.len()),
            ConfigRepr::Constant(_) => Some(1),
        }
    }

    pub fn value_at(&self, g: &GroupElement) -> Result<Vec<u32>> {
        match &self.repr {
            ConfigRepr::Finite(m) => Ok(m.get(g).cloned().unwrap_or_else(|| vec![0; self.dim])),
            ConfigRepr::Constant(v) => Ok(v.clone()),
            ConfigRepr::Periodic(values) => match g {
                GroupElement::Int(n) => Ok(values[n.rem_euclid(values.len() as i64) as usize].clone()),
                _ => Err(Error::InvalidConfiguration(format!("periodic configuration evaluated at {g}"))),
            },
        }
    }

    /// Checks that the configuration lives over `group` with scalars in `field`.
    pub fn check(&self, group: &GroupDescriptor, field: Fp) -> Result<()> {
        let scalars: Box<dyn Iterator<Item = &u32>> = match &self.repr {
            ConfigRepr::Finite(m) => {
                for g in m.keys() {
                    group.check(g)?;
                }
                Box::new(m.values().flatten())
            }
            ConfigRepr::Periodic(values) => {
                if !matches!(group.kind(), GroupKind::Integers) {
                    return Err(Error::InvalidConfiguration(format!(
                        "periodic configurations are only supported on Z, not {group}"
                    )));
                }
                Box::new(values.iter().flatten())
            }
            ConfigRepr::Constant(v) => Box::new(v.iter()),
        };
        for &x in scalars {
            field.check(x)?;
        }
        Ok(())
    }

    /// The shifted configuration `(g x)(h) = x(g^-1 h)`.
    pub fn shift(&self, group: &GroupDescriptor, g: &GroupElement) -> Result<Configuration> {
        group.check(g)?;
        Ok(match &self.repr {
            ConfigRepr::Finite(m) => Configuration {
                dim: self.dim,
                repr: ConfigRepr::Finite(m.iter().map(|(h, v)| (group.mul(g, h), v.clone())).collect()),
            },
            ConfigRepr::Constant(_) => self.clone(),
            ConfigRepr::Periodic(values) => {
                let GroupElement::Int(s) = g else {
                    return Err(Error::InvalidConfiguration("periodic shift needs an integer".into()));
                };
                let p = values.len() as i64;
                let shifted = (0..p).map(|n| values[(n - s).rem_euclid(p) as usize].clone()).collect();
                Configuration::periodic(self.dim, shifted)?
            }
        })
    }

    /// Restriction to a finite window.
    pub fn restrict(&self, window: &Window) -> Result<Pattern> {
        let values = window.iter().map(|g| Ok((g.clone(), self.value_at(g)?))).collect::<Result<_>>()?;
        Ok(Pattern { dim: self.dim, values })
    }
}

/// A finite partial configuration: a vector at each element of its domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    dim: usize,
    values: BTreeMap<GroupElement, Vec<u32>>,
}

impl Pattern {
    pub fn new(dim: usize, cells: impl IntoIterator<Item = (GroupElement, Vec<u32>)>) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (g, v) in cells {
            check_len(dim, &v)?;
            if values.insert(g.clone(), v).is_some() {
                return Err(Error::InvalidConfiguration(format!("cell {g} given twice")));
            }
        }
        Ok(Self { dim, values })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, values: BTreeMap::new() }
    }

    /// Pattern on `window` read from the flattened layout (element order, then coordinate).
    pub fn from_flat(window: &Window, dim: usize, flat: &[u32]) -> Result<Self> {
        if flat.len() != window.len() * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} scalars for a window of {} cells with dim {dim}",
                flat.len(),
                window.len()
            )));
        }
        let values = window
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), flat[i * dim..(i + 1) * dim].to_vec()))
            .collect();
        Ok(Self { dim, values })
    }

    /// Flattened values in window order; every window cell must be in the domain.
    pub fn to_flat(&self, window: &Window) -> Result<Vec<u32>> {
        let mut out = Vec::with_capacity(window.len() * self.dim);
        for g in window {
            let v = self
                .values
                .get(g)
                .ok_or_else(|| Error::InvalidConfiguration(format!("pattern undefined at {g}")))?;
            out.extend_from_slice(v);
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> Window {
        Window::new(self.values.keys().cloned().collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, g: &GroupElement) -> Option<&[u32]> {
        self.values.get(g).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &Vec<u32>)> {
        self.values.iter()
    }

    pub fn restrict(&self, window: &Window) -> Result<Pattern> {
        let values = window
            .iter()
            .map(|g| {
                self.values
                    .get(g)
                    .map(|v| (g.clone(), v.clone()))
                    .ok_or_else(|| Error::InvalidConfiguration(format!("pattern undefined at {g}")))
            })
            .collect::<Result<_>>()?;
        Ok(Pattern { dim: self.dim, values })
    }

    /// Finitely supported extension by zero.
    pub fn to_configuration(&self) -> Configuration {
        Configuration::finite(self.dim, self.values.clone()).expect("pattern vectors have length dim")
    }

    pub fn check(&self, group: &GroupDescriptor, field: Fp) -> Result<()> {
        for (g, v) in &self.values {
            group.check(g)?;
            for &x in v {
                field.check(x)?;
            }
        }
        Ok(())
    }
}
