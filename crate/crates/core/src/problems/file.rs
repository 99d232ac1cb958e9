//! Plain-text problem definitions.
//!
//! One `key = value` per line, `#` starts a comment. Recognized keys:
//!
//! ```text
//! name = example61
//! bifunction = affine | linear_vi | damped_radial | saturating_radial
//! space = euclidean | l2
//! dim = 5
//! matrix P = 3.1 2 0 0 0; 2 3.6 0 0 0; ...   (row-major, affine only)
//! matrix Q = ...                              (affine only)
//! vector q = 1, -2, -1, 2, -1                 (affine only)
//! matrix M = ...                              (linear_vi only)
//! vector m = ...                              (linear_vi only)
//! set = box_halfspace(lo, hi, level) | ball(r) | box(lo, hi)
//! solution = zero                             (optional)
//! ```
//!
//! `damped_radial` is `<(3/2 - |x|) x, y - x>` and `saturating_radial` is
//! `<x / (1 + |x|^2), y - x>`; both carry their known constants.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{parse_reals, InnerProductSpace, Vector};
use crate::problems::bifunction::{
    affine_bifunction, damped_radial, linear_operator, saturating_radial, spectral_norm,
    vi_bifunction,
};
use crate::problems::{FeasibleSet, ProblemInstance};

struct Entry {
    line: usize,
    value: String,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_entries(text: &str) -> Result<BTreeMap<String, Entry>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected `key = value`, got {content:?}")))?;
        let key = key.split_whitespace().collect::<Vec<_>>().join(" ");
        if out.contains_key(&key) {
            return Err(err(line, format!("duplicate key {key:?}")));
        }
        out.insert(
            key,
            Entry {
                line,
                value: value.trim().to_string(),
            },
        );
    }
    Ok(out)
}

fn parse_set(entry: &Entry) -> Result<FeasibleSet> {
    let v = entry.value.as_str();
    let (kind, rest) = v
        .split_once('(')
        .ok_or_else(|| err(entry.line, format!("malformed set {v:?}")))?;
    let args = rest
        .strip_suffix(')')
        .ok_or_else(|| err(entry.line, format!("missing `)` in {v:?}")))?;
    let args = parse_reals(args).map_err(|m| err(entry.line, m))?;
    let set = match (kind.trim(), args.as_slice()) {
        ("box", &[lo, hi]) => FeasibleSet::Box { lo, hi },
        ("ball", &[radius]) => FeasibleSet::Ball { radius },
        ("box_halfspace", &[lo, hi, level]) => FeasibleSet::BoxHalfspace { lo, hi, level },
        (k, a) => {
            return Err(err(
                entry.line,
                format!("unknown set {k:?} with {} argument(s)", a.len()),
            ))
        }
    };
    set.validate().map_err(|e| err(entry.line, e.to_string()))?;
    Ok(set)
}

struct Reader {
    entries: BTreeMap<String, Entry>,
}

impl Reader {
    fn take(&mut self, key: &str) -> Option<Entry> {
        self.entries.remove(key)
    }

    fn require(&mut self, key: &str) -> Result<Entry> {
        self.take(key)
            .ok_or_else(|| err(0, format!("missing key {key:?}")))
    }

    fn reals(&mut self, key: &str, len: usize) -> Result<Vec<f64>> {
        let e = self.require(key)?;
        let v = parse_reals(&e.value).map_err(|m| err(e.line, m))?;
        if v.len() != len {
            return Err(err(
                e.line,
                format!("{key} has {} entries, expected {len}", v.len()),
            ));
        }
        Ok(v)
    }

    fn matrix(&mut self, key: &str, n: usize) -> Result<DMatrix<f64>> {
        let v = self.reals(key, n * n)?;
        Ok(DMatrix::from_row_slice(n, n, &v))
    }

    fn optional_real(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<f64>()
                .map(Some)
                .map_err(|_| err(e.line, format!("{key}: not a number: {:?}", e.value))),
        }
    }
}

/// Parses a problem definition. `grid` overrides `dim` for `l2` spaces.
pub fn parse_problem(text: &str, grid: Option<usize>) -> Result<ProblemInstance> {
    let mut r = Reader {
        entries: parse_entries(text)?,
    };
    let name = r
        .take("name")
        .map(|e| e.value)
        .unwrap_or_else(|| "problem".into());
    let kind = r.require("bifunction")?;
    let space_entry = r.take("space");
    let dim_entry = r.require("dim")?;
    let dim: usize = dim_entry
        .value
        .parse()
        .map_err(|_| err(dim_entry.line, format!("dim: not a positive integer: {:?}", dim_entry.value)))?;
    let space = match space_entry.as_ref().map(|e| e.value.as_str()).unwrap_or("euclidean") {
        "euclidean" => InnerProductSpace::euclidean(dim),
        "l2" => InnerProductSpace::trapezoid(grid.unwrap_or(dim)),
        other => {
            let line = space_entry.as_ref().map_or(0, |e| e.line);
            return Err(err(line, format!("unknown space {other:?}")));
        }
    }
    .map_err(|e| err(dim_entry.line, e.to_string()))?;
    let n = space.dim();
    let set = parse_set(&r.require("set")?)?;

    let bifunction: Arc<dyn crate::problems::Bifunction> = match kind.value.as_str() {
        "affine" => {
            let p = r.matrix("matrix P", n)?;
            let q = r.matrix("matrix Q", n)?;
            let shift = Vector::new(&space, r.reals("vector q", n)?)?;
            Arc::new(affine_bifunction(p, q, &shift)?)
        }
        "linear_vi" => {
            let m = r.matrix("matrix M", n)?;
            let shift = r.reals("vector m", n)?;
            let l = match r.optional_real("lipschitz_l")? {
                Some(l) => l,
                None => spectral_norm(&m),
            };
            let gamma = r.optional_real("strong_modulus")?;
            Arc::new(vi_bifunction(linear_operator(m, shift), Some(l), gamma).with_label("linear"))
        }
        "damped_radial" => {
            Arc::new(vi_bifunction(damped_radial(), Some(3.5), Some(0.5)).with_label("damped_radial"))
        }
        "saturating_radial" => Arc::new(
            vi_bifunction(saturating_radial(), Some(1.0), Some(0.5)).with_label("saturating_radial"),
        ),
        other => return Err(err(kind.line, format!("unknown bifunction {other:?}"))),
    };

    let known_solution = match r.take("solution") {
        None => None,
        Some(e) if e.value == "zero" => Some(Vector::zeros(&space)),
        Some(e) => Some(
            Vector::new(&space, parse_reals(&e.value).map_err(|m| err(e.line, m))?)
                .map_err(|x| err(e.line, x.to_string()))?,
        ),
    };

    if let Some((key, e)) = r.entries.iter().next() {
        return Err(err(e.line, format!("unexpected key {key:?}")));
    }

    Ok(ProblemInstance {
        name,
        bifunction,
        set,
        space,
        known_solution,
    })
}

pub fn load_problem(path: &Path, grid: Option<usize>) -> Result<ProblemInstance> {
    let text = std::fs::read_to_string(path)?;
    parse_problem(&text, grid)
}
