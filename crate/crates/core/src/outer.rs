//! Outer-region barrier machinery.
//!
//! The leading transport profile on eta > A is
//! `w0(eta) = (n-1)(n-2) [1 - (eta/A)^(-1/gamma)]`. Sub/supersolution
//! candidates take the form `w0 + e^(-2 gamma tau) (w1 + theta w2)`, where
//! `w1`, `w2` solve the first-order linear ODE
//! `gamma eta wi' + (1 + 2 gamma) wi = fi` with the two inhomogeneous terms
//! `f1 = -(n-1) w0''/w0 > 0` and `f2 = -(n-1) (w0'/w0)^2 < 0`. For
//! `gamma <= 1/2` an extra sum of `e^(-2k gamma tau) c_kl v_kl` corrections
//! is required, with `v_kl = eta^(-2k-1/gamma) (ln eta)^l`.
//!
//! `w2` is fixed positive by integrating `f2` from infinity; `w1` is
//! anchored by `w1(2A) = 0` so that the build's constants are reproducible.
//! Tables are built by adaptive quadrature on a log grid in `eta - A` and
//! evaluated by cubic Hermite interpolation; derivatives always come from
//! the ODE identity, never from differencing the tables.

use crate::error::{Error, Result};
use crate::num::{fit, interp, quad};
use crate::params::FlowParams;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// `w0(eta)`, the zero-order outer profile.
pub fn leading(eta: f64, p: &FlowParams) -> Result<f64> {
    guard_eta(eta, p)?;
    let q = p.q();
    Ok(p.nn2() * p.a.powf(q) * depth(eta, p))
}

/// `w0'(eta)`.
pub fn leading_d1(eta: f64, p: &FlowParams) -> Result<f64> {
    guard_eta(eta, p)?;
    let q = p.q();
    Ok(p.nn2() * p.a.powf(q) * q * eta.powf(-q - 1.0))
}

/// `w0''(eta)`.
pub fn leading_d2(eta: f64, p: &FlowParams) -> Result<f64> {
    guard_eta(eta, p)?;
    let q = p.q();
    Ok(-p.nn2() * p.a.powf(q) * q * (q + 1.0) * eta.powf(-q - 2.0))
}

/// `f1(eta) = -(n-1) w0''/w0 > 0`, the diffusion forcing.
pub fn forcing_diffusion(eta: f64, p: &FlowParams) -> Result<f64> {
    guard_eta(eta, p)?;
    let (n1, q) = (p.n as f64 - 1.0, p.q());
    Ok(n1 * q * (q + 1.0) * eta.powf(-q - 2.0) / depth(eta, p))
}

/// `f2(eta) = -(n-1) (w0'/w0)^2 < 0`, the gradient forcing.
pub fn forcing_gradient(eta: f64, p: &FlowParams) -> Result<f64> {
    guard_eta(eta, p)?;
    let (n1, q) = (p.n as f64 - 1.0, p.q());
    Ok(-n1 * q * q * eta.powf(-2.0 * q - 2.0) / depth(eta, p).powi(2))
}

/// d/d eta of `f1`.
pub fn forcing_diffusion_d1(eta: f64, p: &FlowParams) -> Result<f64> {
    guard_eta(eta, p)?;
    let (n1, q) = (p.n as f64 - 1.0, p.q());
    let d = depth(eta, p);
    Ok(-n1 * q * (q + 1.0) * eta.powf(-q - 3.0) * ((q + 2.0) * d + q * eta.powf(-q)) / (d * d))
}

/// d/d eta of `f2`.
pub fn forcing_gradient_d1(eta: f64, p: &FlowParams) -> Result<f64> {
    guard_eta(eta, p)?;
    let (n1, q) = (p.n as f64 - 1.0, p.q());
    let d = depth(eta, p);
    Ok(n1
        * q
        * q
        * eta.powf(-2.0 * q - 3.0)
        * ((2.0 * q + 2.0) * d + 2.0 * q * eta.powf(-q))
        / (d * d * d))
}

/// `d(eta) = A^(-q) - eta^(-q)`, positive on eta > A.
fn depth(eta: f64, p: &FlowParams) -> f64 {
    let q = p.q();
    p.a.powf(-q) - eta.powf(-q)
}

fn guard_eta(eta: f64, p: &FlowParams) -> Result<()> {
    if eta <= p.a {
        return Err(Error::domain(format!(
            "eta = {eta} must exceed A = {}",
            p.a
        )));
    }
    Ok(())
}

/// The correction basis `v_kl = eta^(-2k - 1/gamma) (ln eta)^l` together with
/// its first two derivatives. Negative `l` returns zeros (the recursion's
/// convention).
pub fn power_log_basis(k: u32, l: i32, eta: f64, p: &FlowParams) -> Result<(f64, f64, f64)> {
    if l < 0 {
        return Ok((0.0, 0.0, 0.0));
    }
    if k < 2 || l as u32 > k {
        return Err(Error::invalid(format!(
            "basis indices out of range: k = {k}, l = {l}"
        )));
    }
    if eta <= 1.0 {
        return Err(Error::domain(format!("basis needs eta > 1, got {eta}")));
    }
    let a = 2.0 * k as f64 + p.q();
    let lf = l as f64;
    let ln = eta.ln();
    let pw = eta.powf(-a);
    let lpow = |e: i32| -> f64 {
        if (l + e) < 0 {
            0.0
        } else {
            ln.powi(l + e)
        }
    };
    let v = pw * lpow(0);
    let v1 = pw / eta * (-a * lpow(0) + lf * lpow(-1));
    let v2 = pw / (eta * eta)
        * (a * (a + 1.0) * lpow(0) - lf * (2.0 * a + 1.0) * lpow(-1) + lf * (lf - 1.0) * lpow(-2));
    Ok((v, v1, v2))
}

/// One correction coefficient `c_kl`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correction {
    pub k: u32,
    pub l: u32,
    pub c: f64,
}

/// Build options for the quadrature tables.
#[derive(Debug, Clone)]
pub struct BuildOptions {
    /// Tables cover eta in [A (1 + em_min_rel), eta_max].
    pub em_min_rel: f64,
    pub eta_max: f64,
    pub tol: f64,
    /// Nodes per decade of eta - A.
    pub nodes_per_decade: usize,
}

impl BuildOptions {
    pub fn for_params(p: &FlowParams) -> Self {
        BuildOptions {
            em_min_rel: 1e-8,
            eta_max: 1e5 * p.a,
            tol: 1e-12,
            nodes_per_decade: 96,
        }
    }
}

/// Theta-independent quadrature tables of the correction profiles:
/// the cumulative integral `J1(eta) = int_2A^eta f1 x^(1+q)/gamma dx`
/// (so `w1 = eta^(-2-q) J1`) and `I2(eta) = int_eta^inf (-f2) x^(1+q)/gamma dx`
/// (so `w2 = eta^(-2-q) I2 > 0`), on a log grid in eta - A.
#[derive(Debug, Clone)]
pub struct OuterTables {
    pub params: FlowParams,
    pub eta0: f64,
    pub eta_max: f64,
    pub tol: f64,
    log_em: Vec<f64>,
    j1: Vec<f64>,
    dj1: Vec<f64>,
    log_i2: Vec<f64>,
    dlog_i2: Vec<f64>,
}

impl OuterTables {
    pub fn build(params: &FlowParams, opts: &BuildOptions) -> Result<Self> {
        params.validate()?;
        let a = params.a;
        let gamma = params.gamma;
        let q = params.q();
        let em_lo = opts.em_min_rel * a;
        let em_hi = opts.eta_max - a;
        if !(em_hi > em_lo) {
            return Err(Error::invalid("eta_max too small for the table range"));
        }
        let decades = (em_hi / em_lo).log10();
        let n_nodes = ((decades * opts.nodes_per_decade as f64).ceil() as usize).max(16) + 1;
        let (l0, l1) = (em_lo.ln(), em_hi.ln());
        let log_em: Vec<f64> = (0..n_nodes)
            .map(|i| l0 + (l1 - l0) * i as f64 / (n_nodes - 1) as f64)
            .collect();
        let etas: Vec<f64> = log_em.iter().map(|u| a + u.exp()).collect();

        let g1 = |x: f64| forcing_diffusion(x, params).unwrap() * x.powf(1.0 + q) / gamma;
        let g2 = |x: f64| -forcing_gradient(x, params).unwrap() * x.powf(1.0 + q) / gamma;

        // J1: signed cumulative integral outward from the anchor eta0 = 2A.
        let eta0 = 2.0 * a;
        let mut j1 = vec![0.0; n_nodes];
        let anchor_idx = etas.partition_point(|&e| e < eta0);
        // upward sweep from the anchor
        let mut acc = if anchor_idx < n_nodes {
            quad::integrate(g1, eta0, etas[anchor_idx], opts.tol)?.0
        } else {
            return Err(Error::invalid("table must extend past the anchor 2A"));
        };
        j1[anchor_idx] = acc;
        for i in anchor_idx + 1..n_nodes {
            acc += quad::integrate(g1, etas[i - 1], etas[i], opts.tol)?.0;
            j1[i] = acc;
        }
        // downward sweep
        if anchor_idx > 0 {
            acc = quad::integrate(g1, eta0, etas[anchor_idx - 1], opts.tol)?.0;
            j1[anchor_idx - 1] = acc;
            for i in (0..anchor_idx - 1).rev() {
                acc -= quad::integrate(g1, etas[i], etas[i + 1], opts.tol)?.0;
                j1[i] = acc;
            }
        }
        let dj1: Vec<f64> = etas
            .iter()
            .map(|&e| g1(e) * (e - a)) // dJ1/d ln(eta - A)
            .collect();

        // I2: tail integral. Beyond the cutoff the two-term expansion of f2
        // gives the remainder (n-1) q A^2q X^-q (1 + A^q X^-q) / gamma with
        // relative error at most z^2, z = (A/X)^q.
        let x_cut = (10.0 * opts.eta_max).max(a * 1e8f64.powf(gamma));
        let z = (a / x_cut).powf(q);
        let n1 = params.n as f64 - 1.0;
        let tail = n1 * q / gamma * a.powf(2.0 * q) * x_cut.powf(-q) * (1.0 + z);
        let mut i2 = vec![0.0; n_nodes];
        acc = tail + quad::integrate(g2, etas[n_nodes - 1], x_cut, opts.tol)?.0;
        i2[n_nodes - 1] = acc;
        for i in (0..n_nodes - 1).rev() {
            acc += quad::integrate(g2, etas[i], etas[i + 1], opts.tol)?.0;
            i2[i] = acc;
        }
        let log_i2: Vec<f64> = i2.iter().map(|v| v.ln()).collect();
        let dlog_i2: Vec<f64> = etas
            .iter()
            .zip(&i2)
            .map(|(&e, &v)| -g2(e) * (e - a) / v)
            .collect();

        Ok(OuterTables {
            params: params.clone(),
            eta0,
            eta_max: opts.eta_max,
            tol: opts.tol,
            log_em,
            j1,
            dj1,
            log_i2,
            dlog_i2,
        })
    }

    fn log_em_of(&self, eta: f64) -> Result<f64> {
        let em = eta - self.params.a;
        if em <= 0.0 {
            return Err(Error::domain(format!(
                "eta = {eta} must exceed A = {}",
                self.params.a
            )));
        }
        let u = em.ln();
        if u < self.log_em[0] || u > *self.log_em.last().unwrap() {
            return Err(Error::domain(format!(
                "eta = {eta} outside table range (eta - A in [{:.3e}, {:.3e}])",
                self.log_em[0].exp(),
                self.log_em.last().unwrap().exp()
            )));
        }
        Ok(u)
    }

    /// `w1(eta)`, anchored at `w1(2A) = 0`.
    pub fn w1(&self, eta: f64) -> Result<f64> {
        let u = self.log_em_of(eta)?;
        let j = interp::hermite(&self.log_em, &self.j1, &self.dj1, u)?;
        Ok(j * eta.powf(-2.0 - self.params.q()))
    }

    /// `w2(eta) > 0`.
    pub fn w2(&self, eta: f64) -> Result<f64> {
        let u = self.log_em_of(eta)?;
        let li = interp::hermite(&self.log_em, &self.log_i2, &self.dlog_i2, u)?;
        Ok(li.exp() * eta.powf(-2.0 - self.params.q()))
    }

    /// First derivatives from the ODE identity `wi' = (fi - (1+2 gamma) wi) / (gamma eta)`.
    pub fn w1_d1(&self, eta: f64) -> Result<f64> {
        let p = &self.params;
        Ok((forcing_diffusion(eta, p)? - (1.0 + 2.0 * p.gamma) * self.w1(eta)?)
            / (p.gamma * eta))
    }

    pub fn w2_d1(&self, eta: f64) -> Result<f64> {
        let p = &self.params;
        Ok((forcing_gradient(eta, p)? - (1.0 + 2.0 * p.gamma) * self.w2(eta)?) / (p.gamma * eta))
    }

    /// Second derivatives from the differentiated identity
    /// `wi'' = (fi' - (1+3 gamma) wi') / (gamma eta)`.
    pub fn w1_d2(&self, eta: f64) -> Result<f64> {
        let p = &self.params;
        Ok((forcing_diffusion_d1(eta, p)? - (1.0 + 3.0 * p.gamma) * self.w1_d1(eta)?)
            / (p.gamma * eta))
    }

    pub fn w2_d2(&self, eta: f64) -> Result<f64> {
        let p = &self.params;
        Ok((forcing_gradient_d1(eta, p)? - (1.0 + 3.0 * p.gamma) * self.w2_d1(eta)?)
            / (p.gamma * eta))
    }

    /// `h = w1 + theta w2` and its first two derivatives.
    pub fn h012(&self, eta: f64, theta: f64) -> Result<(f64, f64, f64)> {
        Ok((
            self.w1(eta)? + theta * self.w2(eta)?,
            self.w1_d1(eta)? + theta * self.w2_d1(eta)?,
            self.w1_d2(eta)? + theta * self.w2_d2(eta)?,
        ))
    }
}

/// Computes the `c_kl` correction coefficients for `0 < gamma <= 1/2`
/// (empty for `gamma > 1/2`), choosing the normalization `c_k0 = 0`.
///
/// The level k = 2 cancels against the far-field expansion of `h'' ~
/// K v_21 + C'' v_20`: K is the closed-form constant
/// `(n-1) A^(1/gamma) (1+gamma)(1+2gamma)(1+3gamma) / gamma^5` and C''
/// depends on the w1 anchor, so it is recovered by least squares against
/// {v_21, v_20} on eta in [100 A, 10^4 A]. Higher levels cancel exactly
/// through `(v_(k-1,l))'' = a'(a'+1) v_kl - l(2a'+1) v_(k,l-1) + l(l-1) v_(k,l-2)`
/// with `a' = 2(k-1) + 1/gamma`.
pub fn correction_coeffs(
    params: &FlowParams,
    theta: f64,
    tables: &OuterTables,
) -> Result<(Vec<Correction>, f64)> {
    if params.gamma > 0.5 {
        return Ok((Vec::new(), 0.0));
    }
    let n2 = params.n as f64 - 2.0;
    let n1 = params.n as f64 - 1.0;
    let gamma = params.gamma;
    let q = params.q();
    let n_levels = (1.0 / (2.0 * gamma)).floor() as u32 + 1;

    // far-field fit of h'' against {v_21, v_20}
    let n_fit = 80;
    let (lo, hi) = ((100.0 * params.a).ln(), (1e4 * params.a).ln());
    let mut rows = Vec::with_capacity(n_fit);
    let mut ys = Vec::with_capacity(n_fit);
    for i in 0..n_fit {
        let eta = (lo + (hi - lo) * i as f64 / (n_fit - 1) as f64).exp();
        let (v21, _, _) = power_log_basis(2, 1, eta, params)?;
        let (v20, _, _) = power_log_basis(2, 0, eta, params)?;
        let (_, _, hpp) = tables.h012(eta, theta)?;
        // weight by 1/v20 so both columns are O(1) across the window
        rows.push(vec![v21 / v20, 1.0]);
        ys.push(hpp / v20);
    }
    let coef = fit::lsq(&rows, &ys);
    let (k_fit, c2pp) = (coef[0], coef[1]);
    let k_exact =
        n1 * params.a.powf(q) * (1.0 + gamma) * (1.0 + 2.0 * gamma) * (1.0 + 3.0 * gamma)
            / gamma.powi(5);
    if ((k_fit - k_exact) / k_exact).abs() > 1e-2 {
        return Err(Error::numerics(format!(
            "far-field fit of h'' disagrees with the closed-form log coefficient: \
             fitted {k_fit:.6e} vs {k_exact:.6e}; increase eta_max"
        )));
    }

    // dense coefficient store c[k][l], k = 0..=N (rows < 2 unused)
    let nl = n_levels as usize;
    let mut c = vec![vec![0.0; nl + 3]; nl + 1];
    c[2][2] = -k_exact / (2.0 * gamma * n2);
    c[2][1] = -c2pp / (gamma * n2);
    for k in 3..=nl {
        let ap = 2.0 * (k as f64 - 1.0) + q;
        for j in 0..k {
            let jf = j as f64;
            let rhs = ap * (ap + 1.0) * c[k - 1][j]
                - (jf + 1.0) * (2.0 * ap + 1.0) * c[k - 1][j + 1]
                + (jf + 1.0) * (jf + 2.0) * c[k - 1][j + 2];
            c[k][j + 1] = -rhs / (gamma * (jf + 1.0) * n2);
        }
    }

    let mut out = Vec::new();
    for (k, row) in c.iter().enumerate().skip(2) {
        for (l, &v) in row.iter().enumerate().take(k + 1) {
            if l >= 1 {
                out.push(Correction {
                    k: k as u32,
                    l: l as u32,
                    c: v,
                });
            }
        }
    }
    Ok((out, c2pp))
}

/// Pointwise data of an outer barrier candidate at `(eta, tau)`.
#[derive(Debug, Clone, Copy)]
pub struct OuterEval {
    pub w: f64,
    pub d_eta: f64,
    pub d2_eta: f64,
    pub d_tau: f64,
}

/// A fully assembled outer sub/supersolution candidate
/// `w0 + e^(-2 gamma tau)(w1 + theta w2) [+ corrections]`.
#[derive(Debug, Clone)]
pub struct OuterAnsatz {
    pub params: FlowParams,
    pub theta: f64,
    pub tables: Arc<OuterTables>,
    pub corrections: Vec<Correction>,
    /// Highest correction level N (0 when gamma > 1/2).
    pub n_levels: u32,
    /// Fitted anchor constant C'' (metadata; 0 when gamma > 1/2).
    pub c2pp: f64,
}

impl OuterAnsatz {
    pub fn from_tables(tables: Arc<OuterTables>, theta: f64) -> Result<Self> {
        let params = tables.params.clone();
        let (corrections, c2pp) = correction_coeffs(&params, theta, &tables)?;
        let n_levels = if params.gamma > 0.5 {
            0
        } else {
            (1.0 / (2.0 * params.gamma)).floor() as u32 + 1
        };
        Ok(OuterAnsatz {
            params,
            theta,
            tables,
            corrections,
            n_levels,
            c2pp,
        })
    }

    pub fn build(params: &FlowParams, theta: f64, opts: &BuildOptions) -> Result<Self> {
        let tables = Arc::new(OuterTables::build(params, opts)?);
        Self::from_tables(tables, theta)
    }

    /// Value and derivatives at `(eta, tau)`; refuses eta outside the tables.
    pub fn eval(&self, eta: f64, tau: f64) -> Result<OuterEval> {
        let p = &self.params;
        let (h, h1, h2) = self.tables.h012(eta, self.theta)?;
        let e2 = (-2.0 * p.gamma * tau).exp();
        let mut w = leading(eta, p)? + e2 * h;
        let mut d_eta = leading_d1(eta, p)? + e2 * h1;
        let mut d2_eta = leading_d2(eta, p)? + e2 * h2;
        let mut d_tau = -2.0 * p.gamma * e2 * h;
        for cor in &self.corrections {
            let (v, v1, v2) = power_log_basis(cor.k, cor.l as i32, eta, p)?;
            let ek = (-2.0 * cor.k as f64 * p.gamma * tau).exp();
            w += cor.c * ek * v;
            d_eta += cor.c * ek * v1;
            d2_eta += cor.c * ek * v2;
            d_tau -= 2.0 * cor.k as f64 * p.gamma * cor.c * ek * v;
        }
        Ok(OuterEval {
            w,
            d_eta,
            d2_eta,
            d_tau,
        })
    }

    /// The composite-barrier outer branch `e^(gamma tau) w(A + xi e^(-gamma tau), tau)`
    /// together with its xi-derivative (which is just `w_eta` at the mapped point).
    pub fn glued_value(&self, xi: f64, tau: f64) -> Result<(f64, f64)> {
        let p = &self.params;
        let eg = (p.gamma * tau).exp();
        let eta = p.a + xi / eg;
        let ev = self.eval(eta, tau)?;
        Ok((eg * ev.w, ev.d_eta))
    }

    /// d/dtau of the glued outer branch at fixed xi (used for the exact
    /// slopes of the glue shifts).
    pub fn glued_dtau(&self, xi: f64, tau: f64) -> Result<f64> {
        let p = &self.params;
        let eg = (p.gamma * tau).exp();
        let eta = p.a + xi / eg;
        let ev = self.eval(eta, tau)?;
        Ok(p.gamma * eg * ev.w - p.gamma * xi * ev.d_eta + eg * ev.d_tau)
    }
}
