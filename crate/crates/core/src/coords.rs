//! Coordinate systems, conformal-factor scalings and pointwise scalar
//! curvature for radial conformally flat metrics.
//!
//! Three cylindrical-frame factors are in play:
//! `w(s,t) = r^2 u^(1-m)`, `w-hat(eta,tau) = (T-t)^-1 w` with
//! `eta = (T-t)^gamma s`, and `w-bar(xi,tau) = e^(gamma tau) w-hat` with
//! `xi = (eta - A) e^(gamma tau)`. All transforms are node-wise and
//! allocate fresh profiles.

use crate::error::{Error, Result};
use crate::num::fd;
use crate::params::FlowParams;
use crate::profile::{Coord, CurvatureField, Profile, TimeTag};

fn expect_coord(p: &Profile, want: Coord, op: &str) -> Result<()> {
    if p.coord != want {
        return Err(Error::invalid(format!(
            "{op}: expected a {:?} profile, got {:?}",
            want, p.coord
        )));
    }
    Ok(())
}

fn tau_of(p: &Profile) -> Result<f64> {
    match p.time {
        TimeTag::Tau(tau) => Ok(tau),
        TimeTag::T(_) => Err(Error::invalid("profile is tagged with t, expected tau")),
    }
}

/// u on an r-grid -> w on the s = ln r grid: `w(s) = r^2 u^(1-m)(r)`.
pub fn u_to_w(u: &Profile, params: &FlowParams) -> Result<Profile> {
    expect_coord(u, Coord::Radial, "u_to_w")?;
    if u.grid[0] <= 0.0 {
        return Err(Error::domain("u_to_w needs a strictly positive r-grid"));
    }
    let one_m = 1.0 - params.m;
    let grid: Vec<f64> = u.grid.iter().map(|&r| r.ln()).collect();
    let values: Vec<f64> = u
        .grid
        .iter()
        .zip(&u.values)
        .map(|(&r, &uv)| r * r * uv.powf(one_m))
        .collect();
    Profile::new(Coord::Cylindrical, u.time, grid, values)
}

/// w on an s-grid -> u on the r = e^s grid: `u = (e^(-2s) w)^(1/(1-m))`.
pub fn w_to_u(w: &Profile, params: &FlowParams) -> Result<Profile> {
    expect_coord(w, Coord::Cylindrical, "w_to_u")?;
    let inv = 1.0 / (1.0 - params.m);
    let grid: Vec<f64> = w.grid.iter().map(|&s| s.exp()).collect();
    let values: Vec<f64> = w
        .grid
        .iter()
        .zip(&w.values)
        .map(|(&s, &wv)| ((-2.0 * s).exp() * wv).powf(inv))
        .collect();
    Profile::new(Coord::Radial, w.time, grid, values)
}

/// Outer rescaling: `w-hat(eta, tau) = (T-t)^-1 w(s, t)`, `eta = (T-t)^gamma s`.
pub fn w_to_outer(w: &Profile, t: f64, params: &FlowParams) -> Result<Profile> {
    expect_coord(w, Coord::Cylindrical, "w_to_outer")?;
    let tau = params.tau_of_t(t)?;
    let tmt = params.t_blowup - t;
    let scale = tmt.powf(params.gamma);
    let grid: Vec<f64> = w.grid.iter().map(|&s| scale * s).collect();
    let values: Vec<f64> = w.values.iter().map(|&v| v / tmt).collect();
    Profile::new(Coord::Outer, TimeTag::Tau(tau), grid, values)
}

/// Inverse of [`w_to_outer`].
pub fn outer_to_cyl(hat: &Profile, params: &FlowParams) -> Result<Profile> {
    expect_coord(hat, Coord::Outer, "outer_to_cyl")?;
    let tau = tau_of(hat)?;
    let tmt = (-tau).exp();
    let scale = tmt.powf(params.gamma);
    let grid: Vec<f64> = hat.grid.iter().map(|&eta| eta / scale).collect();
    let values: Vec<f64> = hat.values.iter().map(|&v| v * tmt).collect();
    Profile::new(
        Coord::Cylindrical,
        TimeTag::T(params.t_of_tau(tau)),
        grid,
        values,
    )
}

/// Inner rescaling: `w-bar(xi, tau) = e^(gamma tau) w-hat(A + e^(-gamma tau) xi, tau)`.
pub fn outer_to_inner(hat: &Profile, params: &FlowParams) -> Result<Profile> {
    expect_coord(hat, Coord::Outer, "outer_to_inner")?;
    let tau = tau_of(hat)?;
    let e = (params.gamma * tau).exp();
    let grid: Vec<f64> = hat.grid.iter().map(|&eta| (eta - params.a) * e).collect();
    let values: Vec<f64> = hat.values.iter().map(|&v| v * e).collect();
    Profile::new(Coord::Inner, TimeTag::Tau(tau), grid, values)
}

/// Inverse of [`outer_to_inner`].
pub fn inner_to_outer(bar: &Profile, params: &FlowParams) -> Result<Profile> {
    expect_coord(bar, Coord::Inner, "inner_to_outer")?;
    let tau = tau_of(bar)?;
    let e = (params.gamma * tau).exp();
    let grid: Vec<f64> = bar.grid.iter().map(|&xi| params.a + xi / e).collect();
    let values: Vec<f64> = bar.values.iter().map(|&v| v / e).collect();
    Profile::new(Coord::Outer, TimeTag::Tau(tau), grid, values)
}

/// Direct composition s -> xi: `w-bar(xi, tau) = e^((1+gamma) tau) w(A e^(gamma tau) + xi, T - e^-tau)`.
pub fn cyl_to_inner(w: &Profile, t: f64, params: &FlowParams) -> Result<Profile> {
    let hat = w_to_outer(w, t, params)?;
    outer_to_inner(&hat, params)
}

/// Inverse of [`cyl_to_inner`].
pub fn inner_to_cyl(bar: &Profile, params: &FlowParams) -> Result<Profile> {
    let hat = inner_to_outer(bar, params)?;
    outer_to_cyl(&hat, params)
}

/// Scalar curvature of `g = u^(1-m) delta` on a radial grid:
/// `R = -cbar u^-1 Delta(u^m)` with the radial Laplacian
/// `Delta f = f'' + (n-1) f'/r`, by centered finite differences.
///
/// A grid starting at r = 0 is handled by even extension
/// (`Delta f(0) = n f''(0)`); a positive left end gets a one-sided stencil,
/// as does the right end.
pub fn scalar_curvature(u: &Profile, params: &FlowParams) -> Result<CurvatureField> {
    expect_coord(u, Coord::Radial, "scalar_curvature")?;
    let n = u.grid.len();
    if n < 5 {
        return Err(Error::invalid(format!(
            "curvature stencil needs at least 5 nodes, got {n}"
        )));
    }
    if u.grid[0] < 0.0 {
        return Err(Error::domain("radial grid must start at r >= 0"));
    }
    let f: Vec<f64> = u.values.iter().map(|&v| v.powf(params.m)).collect();
    let nf = params.n as f64;
    let mut lap = vec![0.0; n];
    for i in 0..n {
        let r = u.grid[i];
        if i == 0 && r == 0.0 {
            // even extension: f'(0) = 0 and Delta f(0) = n f''(0), with
            // f''(0) from the symmetric 3-point stencil through the ghost
            // node (-r1, f(r1)).
            let r1 = u.grid[1];
            lap[0] = nf * 2.0 * (f[1] - f[0]) / (r1 * r1);
            continue;
        }
        // symmetric 3-point stencil at interior nodes, 4-point one-sided at
        // the ends
        let (lo, len) = if i == 0 {
            (0, 4)
        } else if i + 1 >= n {
            (n - 4, 4)
        } else {
            (i - 1, 3)
        };
        let nodes = &u.grid[lo..lo + len];
        let w = fd::weights(r, nodes, 2);
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for (j, &x) in (lo..lo + nodes.len()).zip(nodes.iter()) {
            let _ = x;
            d1 += w[1][j - lo] * f[j];
            d2 += w[2][j - lo] * f[j];
        }
        lap[i] = d2 + (nf - 1.0) * d1 / r;
    }
    let r_vals: Vec<f64> = lap
        .iter()
        .zip(&u.values)
        .map(|(&l, &uv)| -params.cbar * l / uv)
        .collect();
    let rmf = params.rm_factor();
    let rm_norm = r_vals.iter().map(|&r| r * rmf).collect();
    Ok(CurvatureField {
        grid: u.grid.clone(),
        r: r_vals,
        rm_norm,
    })
}

/// Checks the flow identity `d/dt u^(1-m) = -R u^(1-m)` between two radial
/// snapshots a small `dt` apart. Returns the max relative discrepancy over
/// interior nodes; degenerate 0/0 nodes (flat regions) contribute 0.
pub fn curvature_consistency(u1: &Profile, u2: &Profile, params: &FlowParams) -> Result<f64> {
    expect_coord(u1, Coord::Radial, "curvature_consistency")?;
    expect_coord(u2, Coord::Radial, "curvature_consistency")?;
    if u1.grid != u2.grid {
        return Err(Error::GridMismatch(
            "curvature_consistency needs identical r-grids".into(),
        ));
    }
    let (t1, t2) = match (u1.time, u2.time) {
        (TimeTag::T(a), TimeTag::T(b)) if b > a => (a, b),
        _ => {
            return Err(Error::invalid(
                "snapshots must be t-tagged with t2 > t1",
            ))
        }
    };
    let dt = t2 - t1;
    let one_m = 1.0 - params.m;
    let p1: Vec<f64> = u1.values.iter().map(|&v| v.powf(one_m)).collect();
    let p2: Vec<f64> = u2.values.iter().map(|&v| v.powf(one_m)).collect();
    // midpoint profile for the curvature evaluation
    let u_mid: Vec<f64> = p1
        .iter()
        .zip(&p2)
        .map(|(&a, &b)| (0.5 * (a + b)).powf(1.0 / one_m))
        .collect();
    let mid = Profile::new(
        Coord::Radial,
        TimeTag::T(0.5 * (t1 + t2)),
        u1.grid.clone(),
        u_mid,
    )?;
    let curv = scalar_curvature(&mid, params)?;
    let n = u1.grid.len();
    let mut worst: f64 = 0.0;
    for i in 2..n - 2 {
        let p_mid = 0.5 * (p1[i] + p2[i]);
        let dpdt = (p2[i] - p1[i]) / dt;
        let rhs = curv.r[i] * p_mid;
        if rhs.abs() <= 1e-10 * p_mid.max(1e-300) {
            // stationary/flat: 0/0 by convention contributes nothing
            continue;
        }
        worst = worst.max((dpdt + rhs).abs() / rhs.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Overrides;

    fn p5() -> FlowParams {
        FlowParams::default_lab()
    }

    /// u-profile of the radius-rho round sphere in stereographic coordinates.
    fn sphere_u_at(rho_sq: f64, t: f64, lo: f64, hi: f64, n: usize, params: &FlowParams) -> Profile {
        let inv = 1.0 / (1.0 - params.m);
        Profile::sample(Coord::Radial, TimeTag::T(t), lo, hi, n, |r| {
            let p = rho_sq * (2.0 / (1.0 + r * r)).powi(2);
            p.powf(inv)
        })
        .unwrap()
    }

    fn sphere_u(rho_sq: f64, lo: f64, hi: f64, n: usize, params: &FlowParams) -> Profile {
        sphere_u_at(rho_sq, 0.0, lo, hi, n, params)
    }

    #[test]
    fn flat_metric_maps_to_e2s() {
        let p = p5();
        let u = Profile::sample(Coord::Radial, TimeTag::T(0.0), 0.5, 2.0, 21, |_| 1.0).unwrap();
        let w = u_to_w(&u, &p).unwrap();
        for (s, v) in w.grid.iter().zip(&w.values) {
            assert!((v - (2.0 * s).exp()).abs() < 1e-12 * v);
        }
    }

    #[test]
    fn cylinder_maps_to_constant() {
        // u^(1-m) = 12 T' / r^2 => w = 12 T'
        let p = p5();
        let tp = 0.35;
        let inv = 1.0 / (1.0 - p.m);
        let u = Profile::sample(Coord::Radial, TimeTag::T(0.0), 0.5, 4.0, 31, |r| {
            (12.0 * tp / (r * r)).powf(inv)
        })
        .unwrap();
        let w = u_to_w(&u, &p).unwrap();
        for v in &w.values {
            assert!((v - 12.0 * tp).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_maps_to_sech_profile() {
        let p = p5();
        let rho_sq = 2.3;
        let u = sphere_u(rho_sq, 0.2, 5.0, 49, &p); // grid hits r = 1 (s = 0)
        let w = u_to_w(&u, &p).unwrap();
        let mut max_val: f64 = 0.0;
        for (s, v) in w.grid.iter().zip(&w.values) {
            let expect = 4.0 * rho_sq * (2.0 * s).exp() / (1.0 + (2.0 * s).exp()).powi(2);
            assert!((v - expect).abs() < 1e-12 * expect);
            max_val = max_val.max(*v);
        }
        // max value rho^2 attained at s = 0
        assert!((max_val - rho_sq).abs() < 1e-3);
    }

    #[test]
    fn outer_transform_cancels_on_cylinder() {
        let p = p5();
        let t = 0.2;
        let w = Profile::sample(Coord::Cylindrical, TimeTag::T(t), 1.0, 3.0, 11, |_| {
            12.0 * (p.t_blowup - t)
        })
        .unwrap();
        let hat = w_to_outer(&w, t, &p).unwrap();
        for v in &hat.values {
            assert!((v - 12.0).abs() < 1e-12);
        }
    }

    #[test]
    fn outer_transform_identity_at_tau_zero() {
        let p = FlowParams::new(5, 1.0, 1.0, 1.5, Overrides::default()).unwrap();
        let t = p.t_blowup - 1.0; // tau = 0
        let w = Profile::sample(Coord::Cylindrical, TimeTag::T(t), 0.5, 2.0, 11, |s| {
            1.0 + s * s
        })
        .unwrap();
        let hat = w_to_outer(&w, t, &p).unwrap();
        assert_eq!(hat.grid, w.grid);
        for (a, b) in hat.values.iter().zip(&w.values) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn outer_transform_exponential_example() {
        // w(s) = e^(2s), T - t = e^-1, gamma = 1 -> w-hat(eta) = e * e^(2 e eta)
        let p = FlowParams::new(5, 1.0, 1.0, 0.5, Overrides::default()).unwrap();
        let t = p.t_blowup - (-1.0f64).exp();
        let w = Profile::sample(Coord::Cylindrical, TimeTag::T(t), 0.1, 1.0, 11, |s| {
            (2.0 * s).exp()
        })
        .unwrap();
        let hat = w_to_outer(&w, t, &p).unwrap();
        let e = 1.0f64.exp();
        for (eta, v) in hat.grid.iter().zip(&hat.values) {
            let expect = e * (2.0 * e * eta).exp();
            assert!((v - expect).abs() < 1e-10 * expect);
        }
    }

    #[test]
    fn inner_scaling_of_constant() {
        let p = p5();
        let tau = 1.7;
        let hat =
            Profile::sample(Coord::Outer, TimeTag::Tau(tau), 1.1, 4.0, 11, |_| 3.0).unwrap();
        let bar = outer_to_inner(&hat, &p).unwrap();
        let expect = 3.0 * (p.gamma * tau).exp();
        for v in &bar.values {
            assert!((v - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn round_trip_composition_identity() {
        // w -> w-hat -> w-bar equals e^((1+gamma)tau) w(A e^(gamma tau) + xi)
        let p = FlowParams::new(5, 0.7, 1.3, 0.8, Overrides::default()).unwrap();
        let t = 0.55;
        let tau = p.tau_of_t(t).unwrap();
        let wf = |s: f64| 2.0 + (0.3 * s).sin().powi(2) + 0.1 * s;
        let w = Profile::sample(Coord::Cylindrical, TimeTag::T(t), 2.0, 9.0, 41, wf).unwrap();
        let bar = cyl_to_inner(&w, t, &p).unwrap();
        let e = ((1.0 + p.gamma) * tau).exp();
        let eg = (p.gamma * tau).exp();
        for (xi, v) in bar.grid.iter().zip(&bar.values) {
            let expect = e * wf(p.a * eg + xi);
            assert!(
                (v - expect).abs() < 1e-12 * expect.abs(),
                "xi = {xi}: {v} vs {expect}"
            );
        }
        // and back
        let w2 = inner_to_cyl(&bar, &p).unwrap();
        for ((a, b), (x, y)) in w2
            .grid
            .iter()
            .zip(&w.grid)
            .zip(w2.values.iter().zip(&w.values))
        {
            assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()));
            assert!((x - y).abs() < 1e-12 * y.abs());
        }
    }

    #[test]
    fn flat_curvature_is_zero() {
        let p = p5();
        let u = Profile::sample(Coord::Radial, TimeTag::T(0.0), 0.0, 2.0, 41, |_| 1.0).unwrap();
        let c = scalar_curvature(&u, &p).unwrap();
        for r in &c.r {
            assert!(r.abs() < 1e-10);
        }
    }

    #[test]
    fn sphere_curvature_matches_space_form() {
        // R = n(n-1)/rho^2 = 20/rho^2 for n = 5
        let p = p5();
        let rho_sq = 1.7;
        let u = sphere_u(rho_sq, 0.0, 3.0, 1501, &p);
        let c = scalar_curvature(&u, &p).unwrap();
        let expect = 20.0 / rho_sq;
        for (i, r) in c.r.iter().enumerate().take(c.r.len() - 1) {
            assert!(
                (r - expect).abs() < 2e-5 * expect,
                "node {i}: {r} vs {expect}"
            );
        }
        // rmNorm convention: R / sqrt(n(n-1))
        for (rn, r) in c.rm_norm.iter().zip(&c.r) {
            assert!((rn - r / 20.0f64.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn cylinder_curvature_all_dimensions() {
        // w = (n-1)(n-2)(T'-t) => R = 1/(T'-t), away from r = 0
        let tp = 0.4;
        for n in [3u32, 4, 5, 6, 7] {
            let p = FlowParams::new(n, 1.0, 1.0, 0.5, Overrides::default()).unwrap();
            let inv = 1.0 / (1.0 - p.m);
            let u = Profile::sample(Coord::Radial, TimeTag::T(0.0), 1.0, 3.0, 2001, |r| {
                (p.nn2() * tp / (r * r)).powf(inv)
            })
            .unwrap();
            let c = scalar_curvature(&u, &p).unwrap();
            let expect = 1.0 / tp;
            for (i, r) in c.r.iter().enumerate().skip(1).take(c.r.len() - 2) {
                assert!(
                    (r - expect).abs() < 1e-5 * expect,
                    "n = {n}, node {i}: {r} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn sphere_curvature_second_order_convergence() {
        let p = p5();
        let rho_sq = 1.0;
        let err = |nodes: usize| -> f64 {
            let u = sphere_u(rho_sq, 0.0, 2.0, nodes, &p);
            let c = scalar_curvature(&u, &p).unwrap();
            c.r[..c.r.len() - 1]
                .iter()
                .map(|r| (r - 20.0).abs())
                .fold(0.0, f64::max)
        };
        let e1 = err(251);
        let e2 = err(501);
        let order = (e1 / e2).log2();
        assert!(order >= 1.8, "observed order {order}");
    }

    #[test]
    fn consistency_on_exact_cylinder() {
        let p = p5();
        let tp = 0.5;
        let dt = 1e-6;
        let inv = 1.0 / (1.0 - p.m);
        let prof = |t: f64| {
            Profile::sample(Coord::Radial, TimeTag::T(t), 1.0, 3.0, 4001, |r| {
                (12.0 * (tp - t) / (r * r)).powf(inv)
            })
            .unwrap()
        };
        let d = curvature_consistency(&prof(0.0), &prof(dt), &p).unwrap();
        assert!(d < 1e-6, "cylinder discrepancy {d}");
    }

    #[test]
    fn consistency_on_exact_sphere() {
        let p = p5();
        let dt = 1e-6;
        let prof = |t: f64| sphere_u_at(1.0 - 20.0 * t, t, 0.0, 3.0, 2001, &p);
        let d = curvature_consistency(&prof(0.0), &prof(dt), &p).unwrap();
        assert!(d < 1e-3, "sphere discrepancy {d}");
    }

    #[test]
    fn consistency_flat_is_zero() {
        let p = p5();
        let prof = |t: f64| {
            Profile::sample(Coord::Radial, TimeTag::T(t), 0.0, 2.0, 101, |_| 1.0).unwrap()
        };
        let d = curvature_consistency(&prof(0.0), &prof(1e-4), &p).unwrap();
        assert_eq!(d, 0.0);
    }
}
