//! Flow parameters shared by every module.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Parameters of a conformally flat Yamabe flow run and of the barrier
/// family built for it.
///
/// `gamma` and `a` set the modeled blow-up: the curvature rate is
/// `(T-t)^-(1+gamma)` with scalar constant `2*gamma*a`, and the inner
/// traveling wave moves with speed `gamma*a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowParams {
    /// Space dimension (>= 3).
    pub n: u32,
    /// Fast-diffusion exponent m = (n-2)/(n+2).
    pub m: f64,
    /// Conformal Laplacian constant 4(n-1)/(n-2).
    pub cbar: f64,
    pub gamma: f64,
    /// Matching parameter A; the tip sits near s = A e^(gamma tau).
    pub a: f64,
    /// Blow-up time T.
    pub t_blowup: f64,
    /// Supersolution weight, > (n-6)/4.
    pub theta_plus: f64,
    /// Subsolution weight, < (n-6)/4.
    pub theta_minus: f64,
    /// Inner barrier pinch factor, in (0,1).
    pub eps: f64,
    /// Outer-region validity edge: eta >= A + xi0 e^(-gamma tau).
    pub xi0: f64,
    /// Gluing location of the composite barriers.
    pub xi1: f64,
    /// Start of the outer barrier validity window.
    pub tau0: f64,
}

/// Optional overrides for the derived defaults of [`FlowParams::new`].
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Overrides {
    pub theta_plus: Option<f64>,
    pub theta_minus: Option<f64>,
    pub eps: Option<f64>,
    pub xi0: Option<f64>,
    pub xi1: Option<f64>,
    pub tau0: Option<f64>,
}

impl FlowParams {
    /// Builds a parameter set, filling derived constants and defaults
    /// (theta = (n-6)/4 +- 1/2 unless overridden).
    pub fn new(n: u32, gamma: f64, a: f64, t_blowup: f64, over: Overrides) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(format!("dimension n = {n} must be >= 3")));
        }
        if !(gamma > 0.0) {
            return Err(Error::invalid(format!("gamma = {gamma} must be positive")));
        }
        if !(a > 0.0) {
            return Err(Error::invalid(format!("A = {a} must be positive")));
        }
        if !(t_blowup > 0.0) {
            return Err(Error::invalid(format!("T = {t_blowup} must be positive")));
        }
        let nf = n as f64;
        let thresh = (nf - 6.0) / 4.0;
        let p = FlowParams {
            n,
            m: (nf - 2.0) / (nf + 2.0),
            cbar: 4.0 * (nf - 1.0) / (nf - 2.0),
            gamma,
            a,
            t_blowup,
            theta_plus: over.theta_plus.unwrap_or(thresh + 0.5),
            theta_minus: over.theta_minus.unwrap_or(thresh - 0.5),
            eps: over.eps.unwrap_or(0.05),
            xi0: over.xi0.unwrap_or(10.0),
            xi1: over.xi1.unwrap_or(20.0),
            tau0: over.tau0.unwrap_or(2.0),
        };
        p.validate()?;
        Ok(p)
    }

    /// The default laboratory configuration (n = 5, gamma = A = 1).
    pub fn default_lab() -> Self {
        FlowParams::new(5, 1.0, 1.0, 0.5, Overrides::default()).unwrap()
    }

    pub fn validate(&self) -> Result<()> {
        let thresh = self.theta_threshold();
        if !(self.theta_minus < thresh && thresh < self.theta_plus) {
            return Err(Error::invalid(format!(
                "need theta_minus < (n-6)/4 < theta_plus, got {} / {} / {}",
                self.theta_minus, thresh, self.theta_plus
            )));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::invalid(format!("eps = {} outside (0,1)", self.eps)));
        }
        if !(self.xi1 > self.xi0 && self.xi0 > 0.0) {
            return Err(Error::invalid(format!(
                "need xi1 > xi0 > 0, got xi1 = {}, xi0 = {}",
                self.xi1, self.xi0
            )));
        }
        Ok(())
    }

    /// (n-1)(n-2), the cylinder constant.
    pub fn nn2(&self) -> f64 {
        ((self.n - 1) * (self.n - 2)) as f64
    }

    /// 1/gamma, the exponent of the outer ansatz.
    pub fn q(&self) -> f64 {
        1.0 / self.gamma
    }

    /// The sub/supersolution threshold (n-6)/4.
    pub fn theta_threshold(&self) -> f64 {
        (self.n as f64 - 6.0) / 4.0
    }

    /// Traveling-wave speed gamma * A.
    pub fn speed(&self) -> f64 {
        self.gamma * self.a
    }

    /// Norm conversion: |Rm| = R / sqrt(n(n-1)) at the isotropic origin.
    pub fn rm_factor(&self) -> f64 {
        1.0 / ((self.n * (self.n - 1)) as f64).sqrt()
    }

    /// tau = -ln(T - t).
    pub fn tau_of_t(&self, t: f64) -> Result<f64> {
        if t >= self.t_blowup {
            return Err(Error::domain(format!(
                "t = {t} is past the blow-up time T = {}",
                self.t_blowup
            )));
        }
        Ok(-(self.t_blowup - t).ln())
    }

    /// t = T - e^(-tau).
    pub fn t_of_tau(&self, tau: f64) -> f64 {
        self.t_blowup - (-tau).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n5_constants() {
        let p = FlowParams::new(5, 1.0, 1.0, 0.5, Overrides::default()).unwrap();
        assert!((p.m - 3.0 / 7.0).abs() < 1e-15);
        assert!((p.cbar - 16.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.nn2(), 12.0);
        assert!((p.theta_threshold() + 0.25).abs() < 1e-15);
    }

    #[test]
    fn n3_constants() {
        let p = FlowParams::new(3, 0.7, 2.0, 1.0, Overrides::default()).unwrap();
        assert!((p.m - 1.0 / 5.0).abs() < 1e-15);
        assert!((p.cbar - 8.0).abs() < 1e-15);
    }

    #[test]
    fn n6_defaults() {
        let p = FlowParams::new(6, 1.0, 1.0, 0.5, Overrides::default()).unwrap();
        assert_eq!(p.theta_threshold(), 0.0);
        assert_eq!(p.theta_plus, 0.5);
        assert_eq!(p.theta_minus, -0.5);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(FlowParams::new(2, 1.0, 1.0, 0.5, Overrides::default()).is_err());
        assert!(FlowParams::new(5, -1.0, 1.0, 0.5, Overrides::default()).is_err());
        assert!(FlowParams::new(5, 1.0, 0.0, 0.5, Overrides::default()).is_err());
        assert!(FlowParams::new(5, 1.0, 1.0, -0.5, Overrides::default()).is_err());
        let over = Overrides {
            eps: Some(1.5),
            ..Overrides::default()
        };
        assert!(FlowParams::new(5, 1.0, 1.0, 0.5, over).is_err());
    }

    #[test]
    fn time_maps_are_inverse() {
        let p = FlowParams::default_lab();
        let t = 0.3;
        let tau = p.tau_of_t(t).unwrap();
        assert!((p.t_of_tau(tau) - t).abs() < 1e-14);
        assert!(p.tau_of_t(0.5).is_err());
    }
}
