//! Run configuration: `key = value` lines, `#` comments, no nesting.
//!
//! ```text
//! shape = helix:1:0.05        # line | circle:<kappa> | helix:<kappa>:<tau> | file:<path>
//! length = 20
//! nodes = 401
//! width = constant:1          # or piecewise:<sigma1>:<f1>,<sigma2>:<f2>,...
//! boundary = antikink:a=1,b=-2   # constant:<psi0> | antikink:[f=..,]a=..,b=.. | file:<path>
//! u_max = 4
//! n_u = 201
//! contact_threshold = 0.3
//! time = linear:2             # none | constant:<c> | linear:<c>
//! time_max = 1.4
//! output_dir = out
//! ```
//!
//! Relative paths are taken from the directory holding the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::{read_boundary, read_shape, resolve};
use crate::curve::{sigma_of_s, ArcGrid, CurveShape, KAPPA_MIN};
use crate::error::{Error, Result};
use crate::evolution::{BoundaryData, CharacteristicGrid, TimeMap};
use crate::ribbon::WidthProfile;
use crate::soliton::{parse_pairs, AntikinkParams};

const KEYS: &[&str] = &[
    "shape",
    "length",
    "nodes",
    "width",
    "boundary",
    "u_max",
    "n_sigma",
    "n_u",
    "contact_threshold",
    "contact_exclusion",
    "time",
    "time_max",
    "n_t",
    "output_dir",
    "outputs",
];

#[derive(Debug, Clone, PartialEq)]
pub enum ShapeSpec {
    /// Straight segment, held at the minimum admissible curvature.
    Line,
    Circle { kappa: f64 },
    Helix { kappa: f64, tau: f64 },
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundarySpec {
    Constant(f64),
    /// `f` defaults to the width at `sigma = 0`.
    Antikink { f: Option<f64>, a: f64, b: f64 },
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeSpec {
    None,
    /// `gamma(t) = c`.
    Constant(f64),
    /// `gamma(t) = c t`.
    Linear(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputSelection {
    pub psi: bool,
    pub trajectory: bool,
    pub summary: bool,
    /// Time-labeled trajectory; only written when a time map is set.
    pub timed: bool,
}

impl Default for OutputSelection {
    fn default() -> Self {
        Self {
            psi: true,
            trajectory: true,
            summary: true,
            timed: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub shape: ShapeSpec,
    pub length: Option<f64>,
    pub nodes: usize,
    pub width: WidthProfile,
    pub boundary: BoundarySpec,
    pub u_max: f64,
    pub n_sigma: Option<usize>,
    pub n_u: usize,
    /// Zero disables contact detection.
    pub contact_threshold: f64,
    pub contact_exclusion: usize,
    pub time: TimeSpec,
    pub time_max: Option<f64>,
    pub n_t: usize,
    pub output_dir: PathBuf,
    pub outputs: OutputSelection,
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::ConfigSyntax {
        line,
        message: message.into(),
    }
}

fn invalid(message: impl Into<String>) -> Error {
    Error::ConfigValidation(message.into())
}

/// Parses `key = value` lines; paths resolve against the working directory.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_in(text, Path::new("."), &[])
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config_in(&text, base, &[])
}

/// Parses with relative paths taken from `base`. Each `(key, value)` in
/// `overrides` replaces or adds that entry before validation.
pub fn parse_config_in(text: &str, base: &Path, overrides: &[(String, String)]) -> Result<RunConfig> {
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(syntax(line, "empty key or value"));
        }
        if !KEYS.contains(&key) {
            return Err(syntax(line, format!("unknown key `{key}`")));
        }
        if entries.insert(key.to_string(), (line, value.to_string())).is_some() {
            return Err(syntax(line, format!("duplicate key `{key}`")));
        }
    }
    for (key, value) in overrides {
        if !KEYS.contains(&key.as_str()) {
            return Err(invalid(format!("unknown key `{key}` in override")));
        }
        entries.insert(key.clone(), (0, value.clone()));
    }
    let cfg = build(&entries, base)?;
    cfg.validate()?;
    Ok(cfg)
}

fn build(entries: &BTreeMap<String, (usize, String)>, base: &Path) -> Result<RunConfig> {
    let get = |k: &str| entries.get(k).map(|(l, v)| (*l, v.as_str()));
    let required = |k: &str| get(k).ok_or_else(|| invalid(format!("missing required key `{k}`")));
    let float = |k: &str| -> Result<Option<f64>> {
        get(k)
            .map(|(l, v)| v.parse().map_err(|_| syntax(l, format!("`{k}` expects a number, got `{v}`"))))
            .transpose()
    };
    let count = |k: &str| -> Result<Option<usize>> {
        get(k)
            .map(|(l, v)| v.parse().map_err(|_| syntax(l, format!("`{k}` expects a count, got `{v}`"))))
            .transpose()
    };

    let (line, shape) = required("shape")?;
    let shape = parse_shape_spec(shape, base).map_err(|m| syntax(line, m))?;
    let (line, width) = get("width").unwrap_or((0, "constant:1"));
    let width = parse_width(width).map_err(|e| match e {
        Error::InvalidWidth(m) => invalid(format!("width: {m}")),
        other => syntax(line, other.to_string()),
    })?;
    let (line, boundary) = required("boundary")?;
    let boundary = parse_boundary_spec(boundary, base).map_err(|m| syntax(line, m))?;
    let (line, time) = get("time").unwrap_or((0, "none"));
    let time = parse_time_spec(time).map_err(|m| syntax(line, m))?;
    let outputs = match get("outputs") {
        Some((line, v)) => parse_outputs(v).map_err(|m| syntax(line, m))?,
        None => OutputSelection::default(),
    };

    Ok(RunConfig {
        shape,
        length: float("length")?,
        nodes: count("nodes")?.unwrap_or(201),
        width,
        boundary,
        u_max: float("u_max")?.ok_or_else(|| invalid("missing required key `u_max`"))?,
        n_sigma: count("n_sigma")?,
        n_u: count("n_u")?.unwrap_or(101),
        contact_threshold: float("contact_threshold")?.unwrap_or(0.0),
        contact_exclusion: count("contact_exclusion")?.unwrap_or(3),
        time,
        time_max: float("time_max")?,
        n_t: count("n_t")?.unwrap_or(11),
        output_dir: resolve(base, get("output_dir").map_or("out", |(_, v)| v)),
        outputs,
    })
}

fn number(s: &str) -> std::result::Result<f64, String> {
    s.trim().parse().map_err(|_| format!("`{s}` is not a number"))
}

fn parse_shape_spec(v: &str, base: &Path) -> std::result::Result<ShapeSpec, String> {
    let (kind, rest) = v.split_once(':').unwrap_or((v, ""));
    let args: Vec<&str> = if rest.is_empty() { vec![] } else { rest.split(':').collect() };
    match (kind, args.as_slice()) {
        ("line", []) => Ok(ShapeSpec::Line),
        ("circle", [k]) => Ok(ShapeSpec::Circle { kappa: number(k)? }),
        ("helix", [k, t]) => Ok(ShapeSpec::Helix {
            kappa: number(k)?,
            tau: number(t)?,
        }),
        ("file", _) if !rest.is_empty() => Ok(ShapeSpec::File(resolve(base, rest))),
        _ => Err(format!(
            "shape must be line, circle:<kappa>, helix:<kappa>:<tau> or file:<path>, got `{v}`"
        )),
    }
}

/// `constant:<f0>` or `piecewise:<sigma1>:<f1>,<sigma2>:<f2>,...`.
pub fn parse_width(v: &str) -> Result<WidthProfile> {
    let bad = |m: String| Error::InvalidParams(m);
    if let Some(f0) = v.strip_prefix("constant:") {
        return WidthProfile::constant(number(f0).map_err(bad)?);
    }
    if let Some(list) = v.strip_prefix("piecewise:") {
        let mut breakpoints = Vec::new();
        let mut values = Vec::new();
        for item in list.split(',') {
            let (s, f) = item
                .split_once(':')
                .ok_or_else(|| bad(format!("expected <sigma>:<f>, got `{item}`")))?;
            breakpoints.push(number(s).map_err(bad)?);
            values.push(number(f).map_err(bad)?);
        }
        return WidthProfile::piecewise(breakpoints, values);
    }
    Err(bad(format!(
        "width must be constant:<f0> or piecewise:<sigma1>:<f1>,..., got `{v}`"
    )))
}

fn parse_boundary_spec(v: &str, base: &Path) -> std::result::Result<BoundarySpec, String> {
    if let Some(psi0) = v.strip_prefix("constant:") {
        return Ok(BoundarySpec::Constant(number(psi0)?));
    }
    if let Some(pairs) = v.strip_prefix("antikink:") {
        let (mut f, mut a, mut b) = (None, None, None);
        for (k, val) in parse_pairs(pairs).map_err(|e| e.to_string())? {
            match k.as_str() {
                "f" => f = Some(val),
                "a" => a = Some(val),
                "b" => b = Some(val),
                other => return Err(format!("unknown antikink parameter `{other}`")),
            }
        }
        return Ok(BoundarySpec::Antikink {
            f,
            a: a.ok_or("antikink boundary needs `a`")?,
            b: b.ok_or("antikink boundary needs `b`")?,
        });
    }
    if let Some(path) = v.strip_prefix("file:") {
        return Ok(BoundarySpec::File(resolve(base, path)));
    }
    Err(format!(
        "boundary must be constant:<psi0>, antikink:a=..,b=.. or file:<path>, got `{v}`"
    ))
}

fn parse_time_spec(v: &str) -> std::result::Result<TimeSpec, String> {
    if v == "none" {
        return Ok(TimeSpec::None);
    }
    if let Some(c) = v.strip_prefix("constant:") {
        return Ok(TimeSpec::Constant(number(c)?));
    }
    if let Some(c) = v.strip_prefix("linear:") {
        return Ok(TimeSpec::Linear(number(c)?));
    }
    Err(format!("time must be none, constant:<c> or linear:<c>, got `{v}`"))
}

fn parse_outputs(v: &str) -> std::result::Result<OutputSelection, String> {
    let mut sel = OutputSelection {
        psi: false,
        trajectory: false,
        summary: false,
        timed: false,
    };
    for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "psi" => sel.psi = true,
            "trajectory" => sel.trajectory = true,
            "summary" => sel.summary = true,
            "timed" => sel.timed = true,
            other => return Err(format!("unknown output `{other}`")),
        }
    }
    Ok(sel)
}

impl RunConfig {
    /// Curvature and torsion of the base curve on its arclength grid.
    pub fn build_shape(&self) -> Result<CurveShape> {
        if let ShapeSpec::File(path) = &self.shape {
            return read_shape(path);
        }
        let length = self
            .length
            .ok_or_else(|| invalid("built-in shapes need `length`"))?;
        let grid = ArcGrid::spanning(length, self.nodes)?;
        match self.shape {
            ShapeSpec::Line => CurveShape::constant(grid, KAPPA_MIN, 0.0),
            ShapeSpec::Circle { kappa } => CurveShape::constant(grid, kappa, 0.0),
            ShapeSpec::Helix { kappa, tau } => CurveShape::constant(grid, kappa, tau),
            ShapeSpec::File(_) => unreachable!(),
        }
    }

    /// Characteristic grid over `[0, K] x [0, u_max]`, with `K` the
    /// indicatrix length of `shape`.
    pub fn grid_for(&self, shape: &CurveShape) -> Result<CharacteristicGrid> {
        let n_sigma = self.n_sigma.unwrap_or(shape.grid().n_samples());
        CharacteristicGrid::new(sigma_of_s(shape).total, self.u_max, n_sigma, self.n_u)
    }

    /// Antikink parameters of the boundary, with `f` filled in from the width.
    pub fn antikink(&self) -> Option<AntikinkParams> {
        match self.boundary {
            BoundarySpec::Antikink { f, a, b } => Some(AntikinkParams {
                f: f.unwrap_or_else(|| self.width.value(0.0)),
                a,
                b,
            }),
            _ => None,
        }
    }

    pub fn time_map(&self) -> Result<Option<TimeMap>> {
        let t_max = || {
            self.time_max
                .ok_or_else(|| invalid("a time map needs `time_max`"))
        };
        Ok(match self.time {
            TimeSpec::None => None,
            TimeSpec::Constant(c) => Some(TimeMap::constant(c, t_max()?, self.n_t)?),
            TimeSpec::Linear(c) => Some(TimeMap::linear(c, t_max()?, self.n_t)?),
        })
    }

    /// Boundary samples on `grid`, for the boundary kinds that do not need
    /// the width profile's segments.
    pub fn boundary_data(&self, grid: &CharacteristicGrid) -> Result<BoundaryData> {
        match &self.boundary {
            BoundarySpec::Constant(psi0) => BoundaryData::constant(grid, *psi0),
            BoundarySpec::File(path) => read_boundary(path),
            BoundarySpec::Antikink { .. } => {
                let p = self.antikink().expect("antikink boundary");
                BoundaryData::from_antikink(grid, &p)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(format!("`{name}` = {v} must be positive")))
            }
        };
        match self.shape {
            ShapeSpec::Circle { kappa } | ShapeSpec::Helix { kappa, .. } if !(kappa >= KAPPA_MIN) => {
                return Err(invalid(format!("shape curvature {kappa} is below {KAPPA_MIN:e}")));
            }
            ShapeSpec::File(ref p) if !p.is_file() => {
                return Err(invalid(format!("shape file {} does not exist", p.display())));
            }
            ShapeSpec::File(_) => {}
            _ => {
                positive("length", self.length.ok_or_else(|| invalid("built-in shapes need `length`"))?)?;
                if self.nodes < 2 {
                    return Err(invalid("`nodes` must be at least 2"));
                }
            }
        }
        self.width
            .validate()
            .map_err(|e| invalid(format!("width: {e}")))?;
        positive("u_max", self.u_max)?;
        if self.n_u < 2 || self.n_sigma.is_some_and(|n| n < 2) {
            return Err(invalid("`n_sigma` and `n_u` must be at least 2"));
        }
        if !(self.contact_threshold >= 0.0 && self.contact_threshold.is_finite()) {
            return Err(invalid("`contact_threshold` must be non-negative"));
        }
        match &self.boundary {
            BoundarySpec::File(p) if !p.is_file() => {
                return Err(invalid(format!("boundary file {} does not exist", p.display())));
            }
            BoundarySpec::Antikink { .. } => {
                self.antikink()
                    .expect("antikink boundary")
                    .validate()
                    .map_err(|e| invalid(format!("boundary: {e}")))?;
            }
            _ => {}
        }
        match self.time {
            TimeSpec::None => {}
            TimeSpec::Constant(c) | TimeSpec::Linear(c) => {
                positive("time rate", c)?;
                positive("time_max", self.time_max.unwrap_or(f64::NAN))?;
                if self.n_t < 2 {
                    return Err(invalid("`n_t` must be at least 2"));
                }
            }
        }

        let shape = self.build_shape().map_err(|e| invalid(format!("shape: {e}")))?;
        let grid = self.grid_for(&shape).map_err(|e| invalid(e.to_string()))?;
        grid.check_contraction(self.width.max_value())
            .map_err(|e| invalid(e.to_string()))?;
        if let BoundarySpec::File(_) = self.boundary {
            let bd = self.boundary_data(&grid).map_err(|e| invalid(format!("boundary: {e}")))?;
            if bd.bottom().len() != grid.n_sigma() || bd.left().len() != grid.n_u() {
                return Err(invalid(format!(
                    "boundary file holds {} x {} samples but the grid is {} x {}",
                    bd.bottom().len(),
                    bd.left().len(),
                    grid.n_sigma(),
                    grid.n_u()
                )));
            }
        }
        Ok(())
    }
}
