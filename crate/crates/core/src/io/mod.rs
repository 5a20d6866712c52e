//! Plain-text file formats and the run configuration.
//!
//! Every float is written with 9 significant digits in C-style exponent
//! notation (`-1.23456789e-04`), so files diff cleanly across platforms.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub use config::{
    load_config, parse_config, parse_config_in, parse_width, BoundarySpec, OutputSelection, RunConfig,
    ShapeSpec, TimeSpec,
};

use crate::curve::{ArcGrid, CurveShape, Vec3};
use crate::error::{Error, Result};
use crate::evolution::{BoundaryData, CharacteristicGrid, PsiField2D, ShapeTrajectory};

pub const SHAPE_HEADER: &str = "ribbonfold-shape v1";
pub const BOUNDARY_HEADER: &str = "ribbonfold-boundary v1";
pub const PSI_CSV_HEADER: &str = "sigma,u,psi";

/// `x` with 9 significant digits and a signed, two-digit exponent.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.8e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Where a text payload came from, for error messages.
fn format_error(origin: &Path, message: impl Into<String>) -> Error {
    Error::Format {
        path: origin.to_path_buf(),
        message: message.into(),
    }
}

fn parse_f64(origin: &Path, line: usize, token: &str) -> Result<f64> {
    token
        .parse()
        .map_err(|_| format_error(origin, format!("line {line}: expected a number, got {token:?}")))
}

fn parse_usize(origin: &Path, line: usize, token: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| format_error(origin, format!("line {line}: expected a count, got {token:?}")))
}

/// Non-empty lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| format_error(path, e.to_string()))
}

// Shape files

pub fn shape_to_string(shape: &CurveShape) -> String {
    let grid = shape.grid();
    let mut out = String::new();
    writeln!(out, "{SHAPE_HEADER}").unwrap();
    writeln!(out, "{} {}", grid.n_samples(), format_float(grid.ds())).unwrap();
    for (k, t) in shape.kappa().iter().zip(shape.tau()) {
        writeln!(out, "{} {}", format_float(*k), format_float(*t)).unwrap();
    }
    out
}

pub fn parse_shape(text: &str, origin: &Path) -> Result<CurveShape> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, SHAPE_HEADER)) => {}
        _ => return Err(format_error(origin, format!("missing header {SHAPE_HEADER:?}"))),
    }
    let (ln, dims) = lines
        .next()
        .ok_or_else(|| format_error(origin, "missing `n ds` line"))?;
    let dims: Vec<&str> = dims.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(format_error(origin, format!("line {ln}: expected `n ds`")));
    }
    let n = parse_usize(origin, ln, dims[0])?;
    let ds = parse_f64(origin, ln, dims[1])?;
    let mut kappa = Vec::with_capacity(n);
    let mut tau = Vec::with_capacity(n);
    for (ln, line) in lines {
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 2 {
            return Err(format_error(origin, format!("line {ln}: expected `kappa tau`")));
        }
        kappa.push(parse_f64(origin, ln, cols[0])?);
        tau.push(parse_f64(origin, ln, cols[1])?);
    }
    if kappa.len() != n {
        return Err(format_error(
            origin,
            format!("header announces {n} samples, found {}", kappa.len()),
        ));
    }
    CurveShape::new(ArcGrid::new(n, ds)?, kappa, tau)
}

pub fn read_shape(path: &Path) -> Result<CurveShape> {
    parse_shape(&read_text(path)?, path)
}

pub fn write_shape(path: &Path, shape: &CurveShape) -> Result<()> {
    fs::write(path, shape_to_string(shape))?;
    Ok(())
}

// Twist field CSV

/// Contents of a `sigma,u,psi` file: the two axes and the values with `u`
/// slices contiguous. Keeping the parsed axes lets a file be rewritten
/// byte for byte.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiTable {
    pub sigma: Vec<f64>,
    pub u: Vec<f64>,
    pub psi: Vec<f64>,
}

impl PsiTable {
    pub fn from_field(field: &PsiField2D) -> Self {
        let g = field.grid();
        Self {
            sigma: (0..g.n_sigma()).map(|i| g.sigma(i)).collect(),
            u: (0..g.n_u()).map(|j| g.u(j)).collect(),
            psi: field.values().to_vec(),
        }
    }

    /// Field on the uniform grid spanned by the last axis values.
    pub fn to_field(&self) -> Result<PsiField2D> {
        let grid = CharacteristicGrid::new(
            *self.sigma.last().unwrap_or(&0.0),
            *self.u.last().unwrap_or(&0.0),
            self.sigma.len(),
            self.u.len(),
        )?;
        PsiField2D::from_values(grid, self.psi.clone())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(48 * self.psi.len() + 16);
        writeln!(out, "{PSI_CSV_HEADER}").unwrap();
        let ns = self.sigma.len();
        for (j, u) in self.u.iter().enumerate() {
            let u = format_float(*u);
            for (i, s) in self.sigma.iter().enumerate() {
                writeln!(out, "{},{u},{}", format_float(*s), format_float(self.psi[j * ns + i])).unwrap();
            }
        }
        out
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut lines = content_lines(text);
        match lines.next() {
            Some((_, PSI_CSV_HEADER)) => {}
            _ => return Err(format_error(origin, format!("missing header {PSI_CSV_HEADER:?}"))),
        }
        let mut sigma = Vec::new();
        let mut u: Vec<f64> = Vec::new();
        let mut psi = Vec::new();
        let mut row = 0;
        for (ln, line) in lines {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(format_error(origin, format!("line {ln}: expected 3 columns")));
            }
            let (s, uu, p) = (
                parse_f64(origin, ln, cols[0])?,
                parse_f64(origin, ln, cols[1])?,
                parse_f64(origin, ln, cols[2])?,
            );
            if u.last() != Some(&uu) {
                if !sigma.is_empty() && row != sigma.len() {
                    return Err(format_error(origin, format!("line {ln}: short u slice")));
                }
                u.push(uu);
                row = 0;
            }
            if u.len() == 1 {
                sigma.push(s);
            } else if row >= sigma.len() || sigma[row] != s {
                return Err(format_error(
                    origin,
                    format!("line {ln}: sigma column differs from the first u slice"),
                ));
            }
            row += 1;
            psi.push(p);
        }
        if u.is_empty() || row != sigma.len() {
            return Err(format_error(origin, "incomplete grid"));
        }
        Ok(Self { sigma, u, psi })
    }
}

pub fn write_psi_csv(path: &Path, field: &PsiField2D) -> Result<()> {
    fs::write(path, PsiTable::from_field(field).to_csv())?;
    Ok(())
}

pub fn read_psi_csv(path: &Path) -> Result<PsiTable> {
    PsiTable::parse(&read_text(path)?, path)
}

// Boundary files

pub fn boundary_to_string(bd: &BoundaryData) -> String {
    let mut out = String::new();
    writeln!(out, "{BOUNDARY_HEADER}").unwrap();
    writeln!(out, "{} {}", bd.bottom().len(), bd.left().len()).unwrap();
    for v in bd.bottom().iter().chain(bd.left()) {
        writeln!(out, "{}", format_float(*v)).unwrap();
    }
    out
}

/// Header, `n_sigma n_u`, then `psi(sigma_i, 0)` for every `i` followed by
/// `psi(0, u_j)` for every `j`, one value per line.
pub fn parse_boundary(text: &str, origin: &Path) -> Result<BoundaryData> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, BOUNDARY_HEADER)) => {}
        _ => return Err(format_error(origin, format!("missing header {BOUNDARY_HEADER:?}"))),
    }
    let (ln, dims) = lines
        .next()
        .ok_or_else(|| format_error(origin, "missing `n_sigma n_u` line"))?;
    let dims: Vec<&str> = dims.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(format_error(origin, format!("line {ln}: expected `n_sigma n_u`")));
    }
    let ns = parse_usize(origin, ln, dims[0])?;
    let nu = parse_usize(origin, ln, dims[1])?;
    let values = lines
        .map(|(ln, l)| parse_f64(origin, ln, l))
        .collect::<Result<Vec<_>>>()?;
    if values.len() != ns + nu {
        return Err(format_error(
            origin,
            format!("expected {} values, found {}", ns + nu, values.len()),
        ));
    }
    let left = values[ns..].to_vec();
    let mut bottom = values;
    bottom.truncate(ns);
    BoundaryData::new(bottom, left)
}

pub fn read_boundary(path: &Path) -> Result<BoundaryData> {
    parse_boundary(&read_text(path)?, path)
}

// Trajectories

/// One XYZ frame per slice, labeled `u=<value>` or `t=<value>`.
pub fn trajectory_to_xyz(traj: &ShapeTrajectory) -> String {
    let mut out = String::new();
    for slice in &traj.slices {
        push_xyz_frame(&mut out, traj.axis.label(), slice.param, &slice.curve.positions());
    }
    out
}

pub fn push_xyz_frame(out: &mut String, label: &str, param: f64, points: &[Vec3]) {
    writeln!(out, "{}", points.len()).unwrap();
    writeln!(out, "{label}={}", format_float(param)).unwrap();
    for p in points {
        writeln!(
            out,
            "C {} {} {}",
            format_float(p.x),
            format_float(p.y),
            format_float(p.z)
        )
        .unwrap();
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct XyzFrame {
    pub label: String,
    pub points: Vec<Vec3>,
}

pub fn parse_xyz(text: &str, origin: &Path) -> Result<Vec<XyzFrame>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut frames = Vec::new();
    let mut at = 0;
    while at < lines.len() {
        if lines[at].trim().is_empty() {
            at += 1;
            continue;
        }
        let n = parse_usize(origin, at + 1, lines[at].trim())?;
        let label = lines
            .get(at + 1)
            .ok_or_else(|| format_error(origin, "frame without a comment line"))?
            .trim()
            .to_string();
        let mut points = Vec::with_capacity(n);
        for k in 0..n {
            let ln = at + 2 + k;
            let cols: Vec<&str> = lines
                .get(ln)
                .ok_or_else(|| format_error(origin, "truncated frame"))?
                .split_whitespace()
                .collect();
            if cols.len() != 4 {
                return Err(format_error(origin, format!("line {}: expected `C x y z`", ln + 1)));
            }
            points.push(Vec3::new(
                parse_f64(origin, ln + 1, cols[1])?,
                parse_f64(origin, ln + 1, cols[2])?,
                parse_f64(origin, ln + 1, cols[3])?,
            ));
        }
        frames.push(XyzFrame { label, points });
        at += 2 + n;
    }
    Ok(frames)
}

/// `path` if absolute, otherwise `base/path`.
pub(crate) fn resolve(base: &Path, path: &str) -> PathBuf {
    let p = Path::new(path);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn origin() -> &'static Path {
        Path::new("<test>")
    }

    #[test]
    fn floats_have_nine_significant_digits() {
        assert_eq!(format_float(1.0), "1.00000000e+00");
        assert_eq!(format_float(-0.000123456789123), "-1.23456789e-04");
        assert_eq!(format_float(6.02214076e23), "6.02214076e+23");
        assert_eq!(format_float(1e-300), "1.00000000e-300");
        assert_eq!("1.23456789e-04".parse::<f64>().unwrap(), 1.23456789e-4);
    }

    #[test]
    fn shape_file_layout() {
        let shape = CurveShape::constant(ArcGrid::new(3, 0.5).unwrap(), 1.0, -2.0).unwrap();
        let text = shape_to_string(&shape);
        assert_eq!(
            text,
            "ribbonfold-shape v1\n3 5.00000000e-01\n\
             1.00000000e+00 -2.00000000e+00\n1.00000000e+00 -2.00000000e+00\n1.00000000e+00 -2.00000000e+00\n"
        );
        assert_eq!(parse_shape(&text, origin()).unwrap(), shape);
    }

    #[test]
    fn malformed_shape_files_are_rejected() {
        assert!(parse_shape("ribbonfold-shape v2\n1 1\n1 0\n", origin()).is_err());
        assert!(parse_shape("ribbonfold-shape v1\n3 0.1\n1 0\n1 0\n", origin()).is_err());
        assert!(parse_shape("ribbonfold-shape v1\n2 0.1\n1 0\n1 x\n", origin()).is_err());
        let err = parse_shape("ribbonfold-shape v1\n2 0.1\n1 0\n0 0\n", origin()).unwrap_err();
        assert!(matches!(err, Error::InvalidShape(_)), "{err}");
    }

    #[test]
    fn psi_csv_is_u_major() {
        let grid = CharacteristicGrid::new(1.0, 2.0, 2, 2).unwrap();
        let field = PsiField2D::from_fn(grid, |s, u| s + 10.0 * u);
        let text = PsiTable::from_field(&field).to_csv();
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows[0], "sigma,u,psi");
        assert_eq!(rows[2], "1.00000000e+00,0.00000000e+00,1.00000000e+00");
        assert_eq!(rows[3], "0.00000000e+00,2.00000000e+00,2.00000000e+01");
        let back = PsiTable::parse(&text, origin()).unwrap().to_field().unwrap();
        assert_eq!(back, field);
    }

    #[test]
    fn ragged_csv_is_rejected() {
        let text = "sigma,u,psi\n0,0,1\n1,0,1\n0,1,1\n";
        assert!(PsiTable::parse(text, origin()).is_err());
        let text = "sigma,u,psi\n0,0,1\n1,0,1\n0,1,1\n2,1,1\n";
        assert!(PsiTable::parse(text, origin()).is_err());
    }

    #[test]
    fn boundary_file_round_trip() {
        let bd = BoundaryData::new(vec![0.5, 1.0, 1.5], vec![0.5, 0.25]).unwrap();
        let text = boundary_to_string(&bd);
        assert_eq!(parse_boundary(&text, origin()).unwrap(), bd);
        assert!(parse_boundary("ribbonfold-boundary v1\n2 2\n0\n1\n", origin()).is_err());
    }

    #[test]
    fn xyz_frames_parse_back() {
        let mut text = String::new();
        push_xyz_frame(&mut text, "u", 0.5, &[Vec3::new(1.0, 2.0, 3.0), Vec3::zeros()]);
        push_xyz_frame(&mut text, "u", 1.0, &[Vec3::new(-1.0, 0.0, 0.0)]);
        let frames = parse_xyz(&text, origin()).unwrap();
        assert_eq!(frames.len(), 2);
        assert_eq!(frames[0].label, "u=5.00000000e-01");
        assert_eq!(frames[0].points[0], Vec3::new(1.0, 2.0, 3.0));
        assert_eq!(frames[1].points.len(), 1);
    }

    proptest! {
        #[test]
        fn shape_files_rewrite_identically(
            ds in 1e-4f64..10.0,
            rows in prop::collection::vec((1e-6f64..1e3, -1e3f64..1e3), 2..40),
        ) {
            let grid = ArcGrid::new(rows.len(), ds).unwrap();
            let (k, t): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
            let text = shape_to_string(&CurveShape::new(grid, k, t).unwrap());
            let back = parse_shape(&text, origin()).unwrap();
            prop_assert_eq!(shape_to_string(&back), text);
        }

        #[test]
        fn psi_csv_rewrites_identically(
            k in 1e-3f64..100.0,
            u in 1e-3f64..100.0,
            ns in 2usize..12,
            nu in 2usize..12,
            seed in -50.0f64..50.0,
        ) {
            let grid = CharacteristicGrid::new(k, u, ns, nu).unwrap();
            let field = PsiField2D::from_fn(grid, |s, v| seed * (s - v).sin() + s * v);
            let text = PsiTable::from_field(&field).to_csv();
            let table = PsiTable::parse(&text, origin()).unwrap();
            prop_assert_eq!(table.to_csv(), text.clone());
            // Values read back equal the decimal strings, bit for bit.
            for (line, p) in text.lines().skip(1).zip(&table.psi) {
                let col: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
                prop_assert_eq!(col.to_bits(), p.to_bits());
            }
        }
    }
}
