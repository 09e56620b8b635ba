//! Piecewise cubic Hermite interpolation with caller-supplied derivatives.
//!
//! Every table in this crate stores exact (analytic or ODE-identity) node
//! derivatives, so plain Hermite achieves full O(h^4) accuracy without the
//! order loss of slope-estimating schemes.

use crate::error::{Error, Result};

/// Locate `x` in the sorted node array: returns `i` with `xs[i] <= x <= xs[i+1]`.
pub fn bracket(xs: &[f64], x: f64) -> Result<usize> {
    let n = xs.len();
    if n < 2 || x < xs[0] || x > xs[n - 1] {
        return Err(Error::domain(format!(
            "x = {x} outside table range [{}, {}]",
            xs.first().copied().unwrap_or(f64::NAN),
            xs.last().copied().unwrap_or(f64::NAN)
        )));
    }
    match xs.partition_point(|&v| v <= x) {
        0 => Ok(0),
        p if p >= n => Ok(n - 2),
        p => Ok(p - 1),
    }
}

/// Cubic Hermite value at `x` for data `(xs, ys, dys)`.
pub fn hermite(xs: &[f64], ys: &[f64], dys: &[f64], x: f64) -> Result<f64> {
    let i = bracket(xs, x)?;
    let h = xs[i + 1] - xs[i];
    let t = (x - xs[i]) / h;
    let (h00, h10, h01, h11) = basis(t);
    Ok(h00 * ys[i] + h10 * h * dys[i] + h01 * ys[i + 1] + h11 * h * dys[i + 1])
}

/// Derivative of the Hermite interpolant at `x`.
pub fn hermite_d1(xs: &[f64], ys: &[f64], dys: &[f64], x: f64) -> Result<f64> {
    let i = bracket(xs, x)?;
    let h = xs[i + 1] - xs[i];
    let t = (x - xs[i]) / h;
    let dh00 = (6.0 * t * t - 6.0 * t) / h;
    let dh10 = 3.0 * t * t - 4.0 * t + 1.0;
    let dh01 = (6.0 * t - 6.0 * t * t) / h;
    let dh11 = 3.0 * t * t - 2.0 * t;
    Ok(dh00 * ys[i] + dh10 * dys[i] + dh01 * ys[i + 1] + dh11 * dys[i + 1])
}

fn basis(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    (
        2.0 * t3 - 3.0 * t2 + 1.0,
        t3 - 2.0 * t2 + t,
        -2.0 * t3 + 3.0 * t2,
        t3 - t2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_cubics() {
        let xs: Vec<f64> = (0..=10).map(|i| i as f64 * 0.3).collect();
        let f = |x: f64| 1.0 - 2.0 * x + x.powi(3);
        let df = |x: f64| -2.0 + 3.0 * x * x;
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let dys: Vec<f64> = xs.iter().map(|&x| df(x)).collect();
        for &x in &[0.0, 0.1234, 1.5, 2.9999, 3.0] {
            assert!((hermite(&xs, &ys, &dys, x).unwrap() - f(x)).abs() < 1e-12);
            assert!((hermite_d1(&xs, &ys, &dys, x).unwrap() - df(x)).abs() < 1e-11);
        }
    }

    #[test]
    fn fourth_order_on_smooth() {
        let check = |n: usize| -> f64 {
            let xs: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
            let ys: Vec<f64> = xs.iter().map(|&x| (3.0 * x).sin()).collect();
            let dys: Vec<f64> = xs.iter().map(|&x| 3.0 * (3.0 * x).cos()).collect();
            let mut worst: f64 = 0.0;
            for k in 0..200 {
                let x = (k as f64 + 0.5) / 200.0;
                let e = (hermite(&xs, &ys, &dys, x).unwrap() - (3.0 * x).sin()).abs();
                worst = worst.max(e);
            }
            worst
        };
        let e1 = check(20);
        let e2 = check(40);
        assert!(e1 / e2 > 12.0, "expected ~16x error drop, got {}", e1 / e2);
    }

    #[test]
    fn refuses_extrapolation() {
        let xs = [0.0, 1.0];
        assert!(hermite(&xs, &[0.0, 1.0], &[1.0, 1.0], 1.5).is_err());
    }
}
