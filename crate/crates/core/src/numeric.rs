//! Small grid utilities shared by the geometry and solver modules.

/// Cumulative trapezoidal integral on a uniform grid, starting at zero.
pub fn cumulative_trapezoid(values: &[f64], step: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * step * (w[0] + w[1]);
        out.push(acc);
    }
    out.truncate(values.len());
    out
}

/// First derivative on a uniform grid: central differences in the interior,
/// second-order one-sided stencils at both ends.
pub fn derivative(values: &[f64], step: f64) -> Vec<f64> {
    let n = values.len();
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        2 => {
            let d = (values[1] - values[0]) / step;
            vec![d, d]
        }
        _ => {
            let mut out = vec![0.0; n];
            // Written as differences so a constant gives exactly zero.
            out[0] = (4.0 * (values[1] - values[0]) - (values[2] - values[0])) / (2.0 * step);
            for i in 1..n - 1 {
                out[i] = (values[i + 1] - values[i - 1]) / (2.0 * step);
            }
            out[n - 1] = (4.0 * (values[n - 1] - values[n - 2]) - (values[n - 1] - values[n - 3]))
                / (2.0 * step);
            out
        }
    }
}

/// Linear interpolation of samples on the uniform grid `x_i = i * step`.
/// Arguments outside the grid are clamped to the end values.
pub fn interp_uniform(values: &[f64], step: f64, x: f64) -> f64 {
    let n = values.len();
    if n == 1 || x <= 0.0 {
        return values[0];
    }
    let pos = x / step;
    let last = (n - 1) as f64;
    if pos >= last {
        return values[n - 1];
    }
    let i = pos.floor() as usize;
    let w = pos - i as f64;
    if w == 0.0 {
        values[i]
    } else {
        (1.0 - w) * values[i] + w * values[i + 1]
    }
}

/// Linear interpolation on a strictly increasing, possibly non-uniform grid.
pub fn interp_monotone(xs: &[f64], values: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return values[0];
    }
    if x >= xs[n - 1] {
        return values[n - 1];
    }
    let hi = xs.partition_point(|&v| v <= x);
    let lo = hi - 1;
    let w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    if w == 0.0 {
        values[lo]
    } else {
        (1.0 - w) * values[lo] + w * values[hi]
    }
}
