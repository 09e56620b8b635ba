//! Adaptive Dormand-Prince 5(4) integrator for small non-stiff systems.

use crate::error::{Error, Result};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
// 5th order solution weights
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// embedded 4th order weights
const E1: f64 = 5179.0 / 57600.0;
const E3: f64 = 7571.0 / 16695.0;
const E4: f64 = 393.0 / 640.0;
const E5: f64 = -92097.0 / 339200.0;
const E6: f64 = 187.0 / 2100.0;
const E7: f64 = 1.0 / 40.0;

pub struct Options {
    pub rtol: f64,
    pub atol: f64,
    /// Hard ceiling on the step size (also the dense-output spacing cap).
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: f64::INFINITY,
            max_steps: 50_000_000,
        }
    }
}

/// Integrates `y' = f(x, y)` from `x0` to `x1` (`x1 > x0`), calling `observe`
/// at `x0`, at every accepted step and at `x1`. The integrator lands exactly
/// on `x1`.
pub fn integrate<const N: usize>(
    mut f: impl FnMut(f64, &[f64; N]) -> [f64; N],
    x0: f64,
    x1: f64,
    y0: [f64; N],
    opt: &Options,
    mut observe: impl FnMut(f64, &[f64; N]),
) -> Result<[f64; N]> {
    assert!(x1 > x0);
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, &y);
    let mut h = opt.max_step.min((x1 - x0) / 100.0).min(0.1);
    observe(x, &y);
    let mut steps = 0usize;
    while x < x1 {
        steps += 1;
        if steps > opt.max_steps {
            return Err(Error::numerics("ODE integration exceeded max step count"));
        }
        h = h.min(x1 - x).min(opt.max_step);
        if h <= f64::EPSILON * x.abs().max(1.0) {
            return Err(Error::numerics(format!(
                "ODE step size underflow at x = {x}"
            )));
        }
        let mut yt = [0.0; N];

        for i in 0..N {
            yt[i] = y[i] + h * A21 * k1[i];
        }
        let k2 = f(x + h / 5.0, &yt);
        for i in 0..N {
            yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        let k3 = f(x + 3.0 * h / 10.0, &yt);
        for i in 0..N {
            yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        let k4 = f(x + 4.0 * h / 5.0, &yt);
        for i in 0..N {
            yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        let k5 = f(x + 8.0 * h / 9.0, &yt);
        for i in 0..N {
            yt[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let k6 = f(x + h, &yt);
        let mut y5 = [0.0; N];
        for i in 0..N {
            y5[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        let k7 = f(x + h, &y5);

        let mut err: f64 = 0.0;
        for i in 0..N {
            let y4 = y[i]
                + h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opt.atol + opt.rtol * y[i].abs().max(y5[i].abs());
            err = err.max(((y5[i] - y4) / sc).abs());
        }

        if err <= 1.0 {
            x += h;
            y = y5;
            k1 = k7; // FSAL
            observe(x, &y);
        }
        let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h *= fac;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential() {
        let y = integrate(
            |_x, y: &[f64; 1]| [y[0]],
            0.0,
            1.0,
            [1.0],
            &Options::default(),
            |_, _| {},
        )
        .unwrap();
        assert!((y[0] - 1.0f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn harmonic_oscillator_landing() {
        let opt = Options {
            max_step: 0.05,
            ..Options::default()
        };
        let mut last_x = f64::NAN;
        let y = integrate(
            |_x, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            std::f64::consts::TAU,
            [1.0, 0.0],
            &opt,
            |x, _| last_x = x,
        )
        .unwrap();
        assert_eq!(last_x, std::f64::consts::TAU);
        assert!((y[0] - 1.0).abs() < 1e-9);
        assert!(y[1].abs() < 1e-9);
    }
}
