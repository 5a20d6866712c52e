//! Closed-form antikinks of `psi_{sigma u} + f sin psi = 0`.
//!
//! `psi(sigma, u) = 4 atan(exp(sqrt(f) (a u - sigma / a + b)))` sweeps from
//! `2 pi` (far left) down to `0` (far right), with its center at
//! `sigma = a^2 u + a b`.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::evolution::CharacteristicGrid;

/// Argument magnitude beyond which the exponential is replaced by the
/// asymptote.
const SATURATION: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntikinkParams {
    pub f: f64,
    pub a: f64,
    pub b: f64,
}

impl AntikinkParams {
    pub fn new(f: f64, a: f64, b: f64) -> Result<Self> {
        let p = Self { f, a, b };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f.is_finite() && self.f > 0.0) {
            return Err(Error::InvalidParams(format!("f = {} must be positive", self.f)));
        }
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(Error::InvalidParams(format!("a = {} must be positive", self.a)));
        }
        if !self.b.is_finite() {
            return Err(Error::InvalidParams(format!("b = {} must be finite", self.b)));
        }
        Ok(())
    }

    /// `sqrt(f) (a u - sigma / a + b)`.
    pub fn argument(&self, sigma: f64, u: f64) -> f64 {
        self.f.sqrt() * (self.a * u - sigma / self.a + self.b)
    }

    pub fn psi(&self, sigma: f64, u: f64) -> f64 {
        antikink_psi(self, sigma, u)
    }
}

impl fmt::Display for AntikinkParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "antikink f={} a={} b={}", self.f, self.a, self.b)
    }
}

/// Parses `antikink f=<v> a=<v> b=<v>`. The leading word is optional and the
/// pairs may be separated by whitespace or commas.
impl FromStr for AntikinkParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let pairs = parse_pairs(s.trim().strip_prefix("antikink").unwrap_or(s))?;
        let mut f = None;
        let mut a = None;
        let mut b = None;
        for (key, value) in pairs {
            match key.as_str() {
                "f" => f = Some(value),
                "a" => a = Some(value),
                "b" => b = Some(value),
                other => return Err(Error::InvalidParams(format!("unknown key `{other}`"))),
            }
        }
        let missing = |k: &str| Error::InvalidParams(format!("missing `{k}`"));
        Self::new(f.ok_or_else(|| missing("f"))?, a.ok_or_else(|| missing("a"))?, b.ok_or_else(|| missing("b"))?)
    }
}

/// Splits `k=v` tokens separated by whitespace or commas.
pub(crate) fn parse_pairs(s: &str) -> Result<Vec<(String, f64)>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|tok| {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::InvalidParams(format!("expected key=value, got `{tok}`")))?;
            let v: f64 = v
                .parse()
                .map_err(|_| Error::InvalidParams(format!("`{v}` is not a number")))?;
            Ok((k.to_string(), v))
        })
        .collect()
}

/// `4 atan(exp(z))`, evaluated through `e^{-|z|}` so both tails keep full
/// relative precision. Saturates to the exact asymptote for `|z| > 700`.
pub fn antikink_profile(z: f64) -> f64 {
    if z > SATURATION {
        TAU
    } else if z < -SATURATION {
        0.0
    } else if z > 0.0 {
        TAU - 4.0 * (-z).exp().atan()
    } else {
        4.0 * z.exp().atan()
    }
}

pub fn antikink_psi(params: &AntikinkParams, sigma: f64, u: f64) -> f64 {
    antikink_profile(params.argument(sigma, u))
}

/// Max of `|psi_{sigma u} + f sin psi|` over cell centers, with the compact
/// mixed difference of the four cell corners and `psi` evaluated exactly at
/// the center. Both the stencil and the center value are second order.
pub fn antikink_residual(params: &AntikinkParams, grid: &CharacteristicGrid) -> f64 {
    let (ns, nu) = (grid.n_sigma(), grid.n_u());
    let (ds, du) = (grid.d_sigma(), grid.d_u());
    let field: Vec<f64> = (0..nu)
        .flat_map(|j| (0..ns).map(move |i| (i, j)))
        .map(|(i, j)| params.psi(grid.sigma(i), grid.u(j)))
        .collect();
    let at = |i: usize, j: usize| field[j * ns + i];
    let mut worst = 0.0_f64;
    for j in 1..nu {
        let u_mid = grid.u(j) - 0.5 * du;
        for i in 1..ns {
            let mixed = (at(i, j) - at(i - 1, j) - at(i, j - 1) + at(i - 1, j - 1)) / (ds * du);
            let center = params.psi(grid.sigma(i) - 0.5 * ds, u_mid);
            worst = worst.max((mixed + params.f * center.sin()).abs());
        }
    }
    worst
}

/// Chooses `b` so that `psi(0, 0) = psi0`, then the smallest `a` keeping
/// `psi(sigma, 0)` within `flatness_tol` of `psi0` on `[0, extent]`.
pub fn fit_antikink_to_constant(
    psi0: f64,
    extent: f64,
    flatness_tol: f64,
    f: f64,
) -> Result<AntikinkParams> {
    if !(psi0 > 0.0 && psi0 < TAU) {
        return Err(Error::OutOfRange(format!(
            "psi0 = {psi0} lies outside the antikink range (0, 2 pi)"
        )));
    }
    if !(flatness_tol > 0.0) || !(extent > 0.0) || !(f > 0.0) {
        return Err(Error::OutOfRange(
            "flatness tolerance, extent and f must be positive".into(),
        ));
    }
    // psi(., 0) is decreasing in sigma and stays above 0, so the deviation
    // never reaches psi0; a tolerance that large admits every a.
    if flatness_tol >= psi0 {
        return Err(Error::OutOfRange(format!(
            "flatness tolerance {flatness_tol} admits arbitrarily small a for psi0 = {psi0}"
        )));
    }
    let b = (psi0 / 4.0).tan().ln() / f.sqrt();
    // The deviation is largest at the far end of the interval.
    let deviation = |a: f64| psi0 - antikink_profile(f.sqrt() * (-extent / a + b));

    let mut hi = 1.0;
    while deviation(hi) > flatness_tol {
        hi *= 2.0;
    }
    let mut lo = hi;
    while deviation(lo) <= flatness_tol {
        lo *= 0.5;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if deviation(mid) <= flatness_tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    AntikinkParams::new(f, hi, b)
}

/// Parameters `(a2, b2)` continuing an antikink across a jump of width from
/// `f1` to `f2` at `sigma1`, so the two arguments agree for every `u`.
pub fn match_piecewise(f1: f64, a1: f64, b1: f64, sigma1: f64, f2: f64) -> Result<(f64, f64)> {
    if !(f1 > 0.0 && f2 > 0.0 && a1 > 0.0) {
        return Err(Error::InvalidParams(
            "widths and the incoming a must be positive".into(),
        ));
    }
    let ratio = (f1 / f2).sqrt();
    let a2 = a1 * ratio;
    let b2 = ratio * (b1 - sigma1 / a1) + sigma1 / a2;
    Ok((a2, b2))
}

pub fn kink_center(params: &AntikinkParams, u: f64) -> f64 {
    params.a * params.a * u + params.a * params.b
}

/// `d sigma_c / du`, in indicatrix arclength per unit `u`.
pub fn kink_speed(params: &AntikinkParams) -> f64 {
    params.a * params.a
}

/// One segment `(start, end]` of a matched multi-segment antikink.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub params: AntikinkParams,
}

/// Antikink pieces over a piecewise-constant width, continuous at every
/// breakpoint for all `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseAntikink {
    segments: Vec<Segment>,
}

/// Tolerance on the argument coefficients at a breakpoint.
const MATCH_TOL: f64 = 1e-12;

impl PiecewiseAntikink {
    /// Starts from `first` on `[0, ends[0]]` and matches each following
    /// segment `(ends[i-1], ends[i]]` with width `widths[i]`. `widths[0]`
    /// must equal `first.f`.
    pub fn matched(first: AntikinkParams, ends: &[f64], widths: &[f64]) -> Result<Self> {
        first.validate()?;
        if ends.is_empty() || ends.len() != widths.len() {
            return Err(Error::InvalidParams(format!(
                "{} segment ends for {} widths",
                ends.len(),
                widths.len()
            )));
        }
        if widths[0] != first.f {
            return Err(Error::InvalidParams(format!(
                "first segment width {} differs from the antikink f = {}",
                widths[0], first.f
            )));
        }
        if !(ends[0] > 0.0) || ends.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParams(
                "segment ends must be positive and strictly increasing".into(),
            ));
        }
        let mut segments = vec![Segment {
            start: 0.0,
            end: ends[0],
            params: first,
        }];
        for (&end, &f2) in ends.iter().zip(widths).skip(1) {
            let prev = *segments.last().expect("non-empty");
            let (a2, b2) = match_piecewise(prev.params.f, prev.params.a, prev.params.b, prev.end, f2)?;
            segments.push(Segment {
                start: prev.end,
                end,
                params: AntikinkParams::new(f2, a2, b2)?,
            });
        }
        let pw = Self { segments };
        pw.check_continuity()?;
        Ok(pw)
    }

    /// At each joint the arguments, affine in `u`, must agree in both the
    /// slope and the intercept.
    pub fn check_continuity(&self) -> Result<()> {
        for w in self.segments.windows(2) {
            let (l, r, s) = (w[0].params, w[1].params, w[0].end);
            let slope = (l.f.sqrt() * l.a, r.f.sqrt() * r.a);
            let intercept = (l.argument(s, 0.0), r.argument(s, 0.0));
            let scale = 1.0_f64.max(intercept.0.abs());
            if (slope.0 - slope.1).abs() > MATCH_TOL * slope.0.max(1.0)
                || (intercept.0 - intercept.1).abs() > MATCH_TOL * scale
            {
                return Err(Error::InvalidParams(format!(
                    "antikink pieces disagree at sigma = {s}"
                )));
            }
        }
        Ok(())
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Segment owning `sigma`; breakpoints belong to the left segment.
    pub fn segment_at(&self, sigma: f64) -> &Segment {
        let idx = self.segments.partition_point(|s| s.end < sigma);
        &self.segments[idx.min(self.segments.len() - 1)]
    }

    pub fn psi(&self, sigma: f64, u: f64) -> f64 {
        self.segment_at(sigma).params.psi(sigma, u)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.segments.iter().map(|s| s.end).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.segments.iter().map(|s| s.params.f).collect()
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use proptest::prelude::*;

    use super::*;

    fn params(f: f64, a: f64, b: f64) -> AntikinkParams {
        AntikinkParams::new(f, a, b).unwrap()
    }

    #[test]
    fn profile_values() {
        assert!((antikink_psi(&params(1.0, 1.0, 0.0), 0.0, 0.0) - PI).abs() < 1e-15);
        // 4 atan(e^2), evaluated independently with extended precision.
        let expected = 5.745_113_325_681_823_4;
        assert!((antikink_psi(&params(1.0, 2.0, 0.0), 0.0, 1.0) - expected).abs() < 1e-14);
        let p = params(1.0, 1.0, 0.0);
        assert!(p.psi(50.0, 0.0) < 1e-20);
        assert!((p.psi(-50.0, 0.0) - TAU).abs() < 1e-15);
        assert_eq!(p.psi(1e6, 0.0), 0.0);
        assert_eq!(p.psi(-1e6, 0.0), TAU);
    }

    #[test]
    fn parses_parameter_strings() {
        let p: AntikinkParams = "antikink f=1 a=2 b=-0.5".parse().unwrap();
        assert_eq!(p, params(1.0, 2.0, -0.5));
        let p: AntikinkParams = "f=4,a=1,b=0".parse().unwrap();
        assert_eq!(p, params(4.0, 1.0, 0.0));
        assert!("f=1 a=0 b=0".parse::<AntikinkParams>().is_err());
        assert!("f=1 a=1".parse::<AntikinkParams>().is_err());
        assert!("f=1 a=1 b=0 c=2".parse::<AntikinkParams>().is_err());
        let shown = params(1.0, 2.0, -0.5).to_string();
        assert_eq!(shown.parse::<AntikinkParams>().unwrap(), params(1.0, 2.0, -0.5));
    }

    #[test]
    fn residual_is_second_order() {
        for (f, a, b) in [(1.0, 1.0, 0.0), (4.0, 1.0, 0.0)] {
            let p = params(f, a, b);
            let coarse = antikink_residual(&p, &CharacteristicGrid::new(5.0, 5.0, 251, 251).unwrap());
            let fine = antikink_residual(&p, &CharacteristicGrid::new(5.0, 5.0, 501, 501).unwrap());
            let ratio = coarse / fine;
            assert!((3.5..4.5).contains(&ratio), "f={f}: ratio {ratio}");
        }
    }

    #[test]
    fn fit_recovers_b_and_bounds_deviation() {
        let p = fit_antikink_to_constant(PI, 10.0, 0.01, 1.0).unwrap();
        assert!(p.b.abs() < 1e-15);
        let dev = |a: f64| {
            (0..=10_000)
                .map(|i| (antikink_psi(&params(1.0, a, p.b), i as f64 * 1e-3, 0.0) - PI).abs())
                .fold(0.0, f64::max)
        };
        assert!(dev(p.a) <= 0.01 + 1e-12);
        assert!(dev(2.0 * p.a) <= 0.01);
        assert!(dev(0.99 * p.a) > 0.01);

        let loose = fit_antikink_to_constant(PI, 10.0, 0.1, 1.0).unwrap();
        assert!(loose.a < p.a);
    }

    #[test]
    fn fit_rejects_out_of_range_psi0() {
        assert!(fit_antikink_to_constant(0.0, 1.0, 0.1, 1.0).is_err());
        assert!(fit_antikink_to_constant(TAU, 1.0, 0.1, 1.0).is_err());
        assert!(fit_antikink_to_constant(1.0, 1.0, 1.5, 1.0).is_err());
    }

    #[test]
    fn matching_examples() {
        assert_eq!(match_piecewise(2.0, 1.5, 0.3, 1.0, 2.0).unwrap(), (1.5, 0.3));
        let (a2, b2) = match_piecewise(1.0, 1.0, 0.0, 2.0, 4.0).unwrap();
        assert!((a2 - 0.5).abs() < 1e-15 && (b2 - 3.0).abs() < 1e-15);
        for u in [0.0, 1.0, 3.7] {
            let left = 1.0 * (u - 2.0 + 0.0);
            let right = 2.0 * (a2 * u - 2.0 / a2 + b2);
            assert!((left - (u - 2.0)).abs() < 1e-12 && (right - (u - 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn three_segments_stay_continuous() {
        let pw = PiecewiseAntikink::matched(params(1.0, 1.0, 0.0), &[2.0, 5.0, 9.0], &[1.0, 4.0, 0.25])
            .unwrap();
        for s in &pw.segments()[..2] {
            let next = pw.segment_at(s.end + 1e-9).params;
            for u in [0.0, 0.5, 1.0] {
                assert!((s.params.psi(s.end, u) - next.psi(s.end, u)).abs() <= 1e-12);
            }
        }
        assert!(PiecewiseAntikink::matched(params(1.0, 1.0, 0.0), &[2.0], &[3.0]).is_err());
    }

    #[test]
    fn kink_kinematics() {
        assert_eq!(kink_center(&params(1.0, 1.0, 0.0), 2.5), 2.5);
        assert_eq!(kink_speed(&params(1.0, 1.0, 0.0)), 1.0);
        assert_eq!(kink_speed(&params(1.0, 3.0, 0.0)), 9.0);
        assert_eq!(kink_center(&params(1.0, 1.0, -2.0), 0.0), -2.0);
    }

    proptest! {
        #[test]
        fn psi_is_decreasing_and_in_range(
            f in 0.1f64..5.0, a in 0.2f64..5.0, b in -3.0f64..3.0, u in 0.0f64..2.0,
            s0 in -5.0f64..5.0, gap in 1e-3f64..1.0,
        ) {
            let p = params(f, a, b);
            let (lo, hi) = (p.psi(s0 + gap, u), p.psi(s0, u));
            prop_assume!(p.argument(s0, u).abs() < 30.0 && p.argument(s0 + gap, u).abs() < 30.0);
            prop_assert!(lo < hi);
            prop_assert!(lo > 0.0 && hi < TAU);
        }

        #[test]
        fn matching_is_an_identity_in_u(
            f1 in 0.1f64..5.0, f2 in 0.1f64..5.0, a1 in 0.2f64..4.0, b1 in -3.0f64..3.0,
            sigma1 in 0.1f64..5.0, u in -2.0f64..2.0,
        ) {
            let (a2, b2) = match_piecewise(f1, a1, b1, sigma1, f2).unwrap();
            let left = f1.sqrt() * (a1 * u - sigma1 / a1 + b1);
            let right = f2.sqrt() * (a2 * u - sigma1 / a2 + b2);
            prop_assert!((left - right).abs() <= 1e-10 * (1.0 + left.abs()));
        }
    }
}
