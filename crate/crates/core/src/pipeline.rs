//! End-to-end runs behind the command-line driver.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::curve::{estimate_shape, integrate_frenet, CurveShape, EmbeddedCurve, Frame};
use crate::error::{Error, Result};
use crate::evolution::{
    pde_residual, run_until_contact, time_reparameterize, BoundaryData, CharacteristicGrid,
    FieldSource, PsiField2D, RunOutcome, ShapeTrajectory,
};
use crate::io::{
    format_float, parse_config_in, push_xyz_frame, read_shape, trajectory_to_xyz, BoundarySpec,
    PsiTable, RunConfig,
};
use crate::ribbon::WidthProfile;
use crate::soliton::{kink_speed, AntikinkParams, PiecewiseAntikink};

pub const PSI_FILE: &str = "psi_field.csv";
pub const TRAJECTORY_FILE: &str = "trajectory.xyz";
pub const TIMED_FILE: &str = "trajectory_t.xyz";
pub const SUMMARY_FILE: &str = "summary.txt";

/// Closed-form solution matching a run's boundary data, when one exists.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    Antikink(AntikinkParams),
    Piecewise(PiecewiseAntikink),
}

impl ClosedForm {
    pub fn field(&self, grid: CharacteristicGrid) -> PsiField2D {
        match self {
            ClosedForm::Antikink(p) => PsiField2D::from_antikink(grid, p),
            ClosedForm::Piecewise(pw) => PsiField2D::from_piecewise(grid, pw),
        }
    }
}

/// Everything a `simulate` run computes.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub config: RunConfig,
    pub shape: CurveShape,
    pub grid: CharacteristicGrid,
    pub outcome: RunOutcome,
    pub timed: Option<ShapeTrajectory>,
    /// Antikink named by the boundary spec, whether or not it solves the run.
    pub kink: Option<AntikinkParams>,
    pub closed_form: Option<ClosedForm>,
    pub residual: f64,
    pub closed_form_error: Option<f64>,
}

/// The antikink and, if the boundary is one, the closed form it continues
/// into under `width`.
fn closed_form_for(config: &RunConfig) -> Result<(Option<AntikinkParams>, Option<ClosedForm>)> {
    let Some(p) = config.antikink() else {
        return Ok((None, None));
    };
    let cf = match &config.width {
        WidthProfile::Constant(f0) if *f0 == p.f => Some(ClosedForm::Antikink(p)),
        WidthProfile::Piecewise { breakpoints, values } if values[0] == p.f => {
            Some(ClosedForm::Piecewise(PiecewiseAntikink::matched(p, breakpoints, values)?))
        }
        _ => None,
    };
    Ok((Some(p), cf))
}

/// Solves the twist field, rebuilds shapes slice by slice until contact,
/// and resamples in time if a time map is configured. Nothing is written.
pub fn simulate(config: &RunConfig) -> Result<Simulation> {
    let shape = config.build_shape()?;
    let grid = config.grid_for(&shape)?;
    let (kink, closed_form) = closed_form_for(config)?;
    let boundary = match (&config.boundary, &closed_form) {
        (BoundarySpec::Antikink { .. }, Some(ClosedForm::Piecewise(pw))) => {
            BoundaryData::from_fn(&grid, |s, u| pw.psi(s, u))?
        }
        _ => config.boundary_data(&grid)?,
    };
    let outcome = run_until_contact(
        &shape,
        &config.width,
        &FieldSource::Boundary(boundary),
        &grid,
        config.contact_threshold,
        config.contact_exclusion,
    )?;
    let residual = pde_residual(&outcome.field, &config.width);
    let closed_form_error = closed_form
        .as_ref()
        .map(|cf| outcome.field.max_abs_diff(&cf.field(grid)));

    let timed = match config.time_map()? {
        Some(tm) => {
            let last = outcome.trajectory.slices.last().map_or(0.0, |s| s.param);
            tm.truncated(last)
                .map(|tm| time_reparameterize(&outcome.trajectory, &tm))
                .transpose()?
        }
        None => None,
    };

    Ok(Simulation {
        config: config.clone(),
        shape,
        grid,
        outcome,
        timed,
        kink,
        closed_form,
        residual,
        closed_form_error,
    })
}

impl Simulation {
    /// `key = value` report; a deterministic function of the run.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let g = &self.grid;
        let traj = &self.outcome.trajectory;
        writeln!(out, "# ribbonfold simulation summary").unwrap();
        writeln!(out, "shape_nodes = {}", self.shape.grid().n_samples()).unwrap();
        writeln!(out, "ds = {}", format_float(self.shape.grid().ds())).unwrap();
        writeln!(out, "sigma_extent = {}", format_float(g.k_extent())).unwrap();
        writeln!(out, "u_extent = {}", format_float(g.u_extent())).unwrap();
        writeln!(out, "grid = {} x {}", g.n_sigma(), g.n_u()).unwrap();
        writeln!(out, "slices_computed = {}", traj.len()).unwrap();
        match &self.outcome.contact {
            None => writeln!(out, "contact = none").unwrap(),
            Some(ev) => {
                writeln!(out, "contact = {}", ev.slice).unwrap();
                writeln!(out, "contact_u = {}", format_float(ev.u)).unwrap();
                writeln!(out, "contact_nodes = {} {}", ev.contact.i, ev.contact.j).unwrap();
                writeln!(out, "contact_distance = {}", format_float(ev.contact.distance)).unwrap();
            }
        }
        if let Some(p) = &self.kink {
            writeln!(
                out,
                "kink = f={} a={} b={} speed={}",
                format_float(p.f),
                format_float(p.a),
                format_float(p.b),
                format_float(kink_speed(p))
            )
            .unwrap();
        }
        if let Some(ClosedForm::Piecewise(pw)) = &self.closed_form {
            for (n, seg) in pw.segments().iter().enumerate() {
                writeln!(
                    out,
                    "segment_{} = sigma=({}, {}] f={} a={} b={}",
                    n + 1,
                    format_float(seg.start),
                    format_float(seg.end),
                    format_float(seg.params.f),
                    format_float(seg.params.a),
                    format_float(seg.params.b)
                )
                .unwrap();
            }
        }
        writeln!(out, "max_residual = {}", format_float(self.residual)).unwrap();
        if let Some(e) = self.closed_form_error {
            writeln!(out, "max_error_vs_closed_form = {}", format_float(e)).unwrap();
        }
        if let Some(timed) = &self.timed {
            let t_last = timed.slices.last().map_or(0.0, |s| s.param);
            writeln!(out, "timed_slices = {}", timed.len()).unwrap();
            writeln!(out, "timed_t_max = {}", format_float(t_last)).unwrap();
        }
        out
    }

    /// Writes the selected outputs into `dir` and returns their paths.
    pub fn write_outputs(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let sel = self.config.outputs;
        let mut written = Vec::new();
        let mut put = |name: &str, text: String| -> Result<()> {
            let path = dir.join(name);
            fs::write(&path, text)?;
            written.push(path);
            Ok(())
        };
        if sel.psi {
            put(PSI_FILE, PsiTable::from_field(&self.outcome.field).to_csv())?;
        }
        if sel.trajectory {
            put(TRAJECTORY_FILE, trajectory_to_xyz(&self.outcome.trajectory))?;
        }
        if let (true, Some(timed)) = (sel.timed, &self.timed) {
            put(TIMED_FILE, trajectory_to_xyz(timed))?;
        }
        if sel.summary {
            put(SUMMARY_FILE, self.summary())?;
        }
        Ok(written)
    }
}

/// `simulate` followed by writing into the configured output directory.
pub fn cmd_simulate(config: &RunConfig) -> Result<Simulation> {
    let sim = simulate(config)?;
    sim.write_outputs(&config.output_dir)?;
    Ok(sim)
}

/// The closed-form field on `grid`, continued across the joints of a
/// piecewise width when one is given.
pub fn antikink_field(
    params: &AntikinkParams,
    grid: CharacteristicGrid,
    width: Option<&WidthProfile>,
) -> Result<(PsiField2D, Option<PiecewiseAntikink>)> {
    params.validate()?;
    match width {
        None | Some(WidthProfile::Constant(_)) => Ok((PsiField2D::from_antikink(grid, params), None)),
        Some(WidthProfile::Piecewise { breakpoints, values }) => {
            let pw = PiecewiseAntikink::matched(*params, breakpoints, values)?;
            Ok((PsiField2D::from_piecewise(grid, &pw), Some(pw)))
        }
        Some(WidthProfile::Sampled(_)) => Err(Error::InvalidWidth(
            "closed-form antikinks exist only for piecewise-constant widths".into(),
        )),
    }
}

/// A shape file rebuilt into 3D, with the re-estimated shape as a check.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub shape: CurveShape,
    pub curve: EmbeddedCurve,
    /// Max interior `|kappa_hat - kappa|` and `|tau_hat - tau|`.
    pub kappa_error: f64,
    pub tau_error: f64,
}

impl Reconstruction {
    pub fn to_xyz(&self) -> String {
        let mut out = String::new();
        push_xyz_frame(&mut out, "s", self.shape.grid().length(), &self.curve.positions());
        out
    }
}

pub fn reconstruct(shape: &CurveShape) -> Result<Reconstruction> {
    let curve = integrate_frenet(shape, &Frame::canonical())?;
    let n = shape.kappa().len();
    let (mut kappa_error, mut tau_error) = (0.0_f64, 0.0_f64);
    if n >= 5 {
        let est = estimate_shape(&curve)?;
        for i in 2..n - 2 {
            kappa_error = kappa_error.max((est.kappa()[i] - shape.kappa()[i]).abs());
            tau_error = tau_error.max((est.tau()[i] - shape.tau()[i]).abs());
        }
    }
    Ok(Reconstruction {
        shape: shape.clone(),
        curve,
        kappa_error,
        tau_error,
    })
}

pub fn cmd_reconstruct(shape_file: &Path) -> Result<Reconstruction> {
    reconstruct(&read_shape(shape_file)?)
}

/// One run of a sweep.
#[derive(Debug)]
pub struct SweepRun {
    pub value: String,
    pub output_dir: PathBuf,
    pub result: Result<Simulation>,
}

/// Runs the config once per value of `key`, concurrently, each into
/// `<output_dir>/<key>=<value>`.
pub fn cmd_sweep(config_path: &Path, key: &str, values: &[String]) -> Result<Vec<SweepRun>> {
    let text = fs::read_to_string(config_path)?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    // Parse every variant up front so a bad value fails before any run.
    let configs = values
        .iter()
        .map(|v| {
            let mut cfg = parse_config_in(&text, base, &[(key.to_string(), v.clone())])?;
            cfg.output_dir = cfg.output_dir.join(format!("{key}={v}"));
            Ok(cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    let results: Vec<Result<Simulation>> = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|cfg| scope.spawn(move || cmd_simulate(cfg)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    Ok(values
        .iter()
        .zip(configs)
        .zip(results)
        .map(|((v, cfg), result)| SweepRun {
            value: v.clone(),
            output_dir: cfg.output_dir,
            result,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_config;

    const BASE: &str = "\
shape = circle:1
length = 6
nodes = 121
width = constant:1
boundary = antikink:a=1,b=-2
u_max = 2
n_u = 41
";

    #[test]
    fn constant_boundary_gives_identical_slices() {
        let cfg = parse_config(&BASE.replace("antikink:a=1,b=-2", "constant:0")).unwrap();
        let sim = simulate(&cfg).unwrap();
        let slices = &sim.outcome.trajectory.slices;
        assert_eq!(slices.len(), 41);
        for s in &slices[1..] {
            assert_eq!(s.curve, slices[0].curve);
        }
        assert!(sim.kink.is_none() && sim.closed_form_error.is_none());
        assert!(sim.summary().contains("contact = none"));
    }

    #[test]
    fn antikink_run_reports_kink_and_error() {
        let sim = simulate(&parse_config(BASE).unwrap()).unwrap();
        assert_eq!(sim.closed_form, Some(ClosedForm::Antikink(AntikinkParams::new(1.0, 1.0, -2.0).unwrap())));
        let e = sim.closed_form_error.unwrap();
        assert!(e < 1e-3, "{e:e}");
        let summary = sim.summary();
        assert!(summary.contains("kink = f=1.00000000e+00 a=1.00000000e+00 b=-2.00000000e+00"), "{summary}");
        assert!(summary.contains("max_residual = "));
    }

    #[test]
    fn piecewise_run_echoes_matched_segments() {
        let cfg = parse_config(&BASE.replace("constant:1", "piecewise:2:1,6:4")).unwrap();
        let sim = simulate(&cfg).unwrap();
        let summary = sim.summary();
        assert!(
            summary.contains("segment_2 = sigma=(2.00000000e+00, 6.00000000e+00] f=4.00000000e+00 a=5.00000000e-01 b=2.00000000e+00"),
            "{summary}"
        );
        assert!(sim.closed_form_error.unwrap() < 5e-2);
    }

    #[test]
    fn mismatched_kink_width_has_no_closed_form() {
        let cfg = parse_config(&BASE.replace("antikink:a=1", "antikink:f=2,a=1")).unwrap();
        let sim = simulate(&cfg).unwrap();
        assert_eq!(sim.kink.unwrap().f, 2.0);
        assert!(sim.closed_form.is_none());
    }

    #[test]
    fn time_map_is_cut_at_the_last_slice() {
        let cfg = parse_config(&format!("{BASE}time = linear:2\ntime_max = 2\nn_t = 5\n")).unwrap();
        let sim = simulate(&cfg).unwrap();
        // g(t) = t^2 reaches u_max = 2 between t = 1 and t = 1.5.
        assert_eq!(sim.timed.unwrap().len(), 3);
    }

    #[test]
    fn antikink_field_rejects_sampled_width() {
        let grid = CharacteristicGrid::new(2.0, 1.0, 11, 11).unwrap();
        let p = AntikinkParams::new(1.0, 1.0, 0.0).unwrap();
        let w = WidthProfile::sampled(crate::curve::SigmaSamples::new(1.0, vec![1.0, 2.0, 3.0])).unwrap();
        assert!(antikink_field(&p, grid, Some(&w)).is_err());
        let (_, pw) = antikink_field(&p, grid, Some(&WidthProfile::piecewise(vec![1.0], vec![1.0]).unwrap())).unwrap();
        assert_eq!(pw.unwrap().segments().len(), 1);
    }
}
