use super::grid::RealGrid;

/// Local six-point Lagrange interpolation of sampled data.
#[derive(Debug, Clone)]
pub struct Interpolant {
    x: Vec<f64>,
    y: Vec<f64>,
}

const STENCIL: usize = 6;

impl Interpolant {
    pub fn new(grid: &RealGrid, values: &[f64]) -> Self {
        Self { x: grid.points().to_vec(), y: values.to_vec() }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let m = STENCIL.min(n);
        let pos = self.x.partition_point(|&p| p < t);
        let start = pos.saturating_sub(m / 2).min(n - m);
        let xs = &self.x[start..start + m];
        let ys = &self.y[start..start + m];
        let mut acc = 0.0;
        for i in 0..m {
            if t == xs[i] {
                return ys[i];
            }
            let mut w = 1.0;
            for j in 0..m {
                if j != i {
                    w *= (t - xs[j]) / (xs[i] - xs[j]);
                }
            }
            acc += w * ys[i];
        }
        acc
    }
}

/// Derivative on an arbitrary grid: fourth-order five-point stencils on
/// uniform grids, second order otherwise.
pub fn derivative(grid: &RealGrid, v: &[f64]) -> Vec<f64> {
    let x = grid.points();
    let n = x.len();
    if let (Some(h), true) = (grid.spacing(), n >= 5) {
        let mut d = vec![0.0; n];
        for i in 2..n - 2 {
            d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
        }
        let fwd = |i: usize| {
            (-25.0 * v[i] + 48.0 * v[i + 1] - 36.0 * v[i + 2] + 16.0 * v[i + 3] - 3.0 * v[i + 4]) / (12.0 * h)
        };
        let bwd = |i: usize| {
            (25.0 * v[i] - 48.0 * v[i - 1] + 36.0 * v[i - 2] - 16.0 * v[i - 3] + 3.0 * v[i - 4]) / (12.0 * h)
        };
        d[0] = fwd(0);
        d[n - 1] = bwd(n - 1);
        d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h);
        d[n - 2] = (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]) / (12.0 * h);
        return d;
    }
    let mut d = vec![0.0; n];
    for i in 0..n {
        let (a, b, c) = if i == 0 {
            (0, 1, 2.min(n - 1))
        } else if i == n - 1 {
            (n.saturating_sub(3), n - 2, n - 1)
        } else {
            (i - 1, i, i + 1)
        };
        if a == b || b == c {
            d[i] = (v[c] - v[a]) / (x[c] - x[a]);
            continue;
        }
        // derivative of the quadratic through (a, b, c) at x[i]
        let t = x[i];
        d[i] = v[a] * ((t - x[b]) + (t - x[c])) / ((x[a] - x[b]) * (x[a] - x[c]))
            + v[b] * ((t - x[a]) + (t - x[c])) / ((x[b] - x[a]) * (x[b] - x[c]))
            + v[c] * ((t - x[a]) + (t - x[b])) / ((x[c] - x[a]) * (x[c] - x[b]));
    }
    d
}
