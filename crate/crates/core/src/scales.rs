//! Scale calculus tying densities to radii.
//!
//! The estimators are indexed by a radius `r`; density levels `lambda`
//! map onto radii through the ball-mass threshold
//!
//! ```text
//! v_d r^d lambda = k/n + (C_delta / n) sqrt(k d ln n)
//! ```
//!
//! and back through the lower threshold `k/n - (C_delta / n) sqrt(k d ln n)`
//! used by pruning. Logarithms are natural throughout. `C_delta` absorbs an
//! unspecified absolute constant `C_o` through `C_delta = 2 C_o ln(2/delta)`;
//! `C_delta = 0` gives the plug-in scale `r = (k / (n v_d lambda))^(1/d)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::unit_ball_volume;

/// Sample size, neighborhood size, dimension and the confidence constants
/// that fix the radius/density correspondence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub alpha: f64,
    pub delta: f64,
    #[serde(rename = "C_delta")]
    pub c_delta: f64,
    pub eps_tilde: f64,
}

/// `C_delta = 2 C_o ln(2 / delta)`.
pub fn c_delta_from(c_o: f64, delta: f64) -> f64 {
    2.0 * c_o * (2.0 / delta).ln()
}

impl ScaleParams {
    pub fn new(
        n: usize,
        k: usize,
        d: usize,
        alpha: f64,
        delta: f64,
        c_delta: f64,
        eps_tilde: f64,
    ) -> Result<Self> {
        let p = ScaleParams {
            n,
            k,
            d,
            alpha,
            delta,
            c_delta,
            eps_tilde,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with `C_delta` derived from the absolute constant `C_o`.
    pub fn with_c_o(
        n: usize,
        k: usize,
        d: usize,
        alpha: f64,
        delta: f64,
        c_o: f64,
        eps_tilde: f64,
    ) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::param(
                "delta",
                format!("must lie in (0, 1), got {delta}"),
            ));
        }
        if !c_o.is_finite() || c_o < 0.0 {
            return Err(Error::param(
                "C_o",
                format!("must be finite and >= 0, got {c_o}"),
            ));
        }
        Self::new(n, k, d, alpha, delta, c_delta_from(c_o, delta), eps_tilde)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::param("k", "must be at least 1"));
        }
        if self.n < self.k {
            return Err(Error::param(
                "n",
                format!("n = {} is below k = {}", self.n, self.k),
            ));
        }
        if self.d < 1 {
            return Err(Error::param("d", "must be at least 1"));
        }
        if !self.alpha.is_finite() || self.alpha < 1.0 {
            return Err(Error::param(
                "alpha",
                format!("must be >= 1, got {}", self.alpha),
            ));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::param(
                "delta",
                format!("must lie in (0, 1), got {}", self.delta),
            ));
        }
        if !self.c_delta.is_finite() || self.c_delta < 0.0 {
            return Err(Error::param(
                "C_delta",
                format!("must be finite and >= 0, got {}", self.c_delta),
            ));
        }
        if !self.eps_tilde.is_finite() || self.eps_tilde < 0.0 {
            return Err(Error::param(
                "eps_tilde",
                format!("must be finite and >= 0, got {}", self.eps_tilde),
            ));
        }
        Ok(())
    }

    pub fn with_eps_tilde(mut self, eps_tilde: f64) -> Result<Self> {
        self.eps_tilde = eps_tilde;
        self.validate()?;
        Ok(self)
    }

    pub fn with_n_k(mut self, n: usize, k: usize) -> Result<Self> {
        self.n = n;
        self.k = k;
        self.validate()?;
        Ok(self)
    }

    pub fn unit_ball_volume(&self) -> f64 {
        unit_ball_volume(self.d).expect("validated d >= 1")
    }

    fn margin(&self) -> f64 {
        let (n, k, d) = (self.n as f64, self.k as f64, self.d as f64);
        self.c_delta / n * (k * d * n.ln()).sqrt()
    }

    /// `k/n + (C_delta/n) sqrt(k d ln n)`.
    pub fn upper_mass_threshold(&self) -> f64 {
        self.k as f64 / self.n as f64 + self.margin()
    }

    /// `k/n - (C_delta/n) sqrt(k d ln n)`. Not clamped; may be negative.
    pub fn lower_mass_threshold(&self) -> f64 {
        self.k as f64 / self.n as f64 - self.margin()
    }

    /// The radius `r(lambda)` at which clusters of density level `lambda`
    /// are resolved: `(upper / (v_d lambda))^(1/d)`.
    pub fn r_of_lambda(&self, lambda: f64) -> Result<f64> {
        if !(lambda > 0.0) {
            return Err(Error::param(
                "lambda",
                format!("must be positive, got {lambda}"),
            ));
        }
        Ok(root(
            self.upper_mass_threshold() / (self.unit_ball_volume() * lambda),
            self.d,
        ))
    }

    /// Density level looked up by pruning at radius `r`:
    /// `lower / (v_d r^d) - eps_tilde`. May be zero or negative.
    pub fn lambda_tilde(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::param("r", format!("must be positive, got {r}")));
        }
        Ok(
            self.lower_mass_threshold() / (self.unit_ball_volume() * r.powi(self.d as i32))
                - self.eps_tilde,
        )
    }

    /// Lower bound on all k-NN radii under a density bounded by `lambda_max`:
    /// `(k / (2 n v_d lambda_max))^(1/d)`.
    pub fn r_floor(&self, lambda_max: f64) -> Result<f64> {
        if !(lambda_max > 0.0) {
            return Err(Error::param(
                "Lambda",
                format!("must be positive, got {lambda_max}"),
            ));
        }
        let (n, k) = (self.n as f64, self.k as f64);
        Ok(root(
            k / (2.0 * n * self.unit_ball_volume() * lambda_max),
            self.d,
        ))
    }

    /// Sample size sufficient for separating clusters at density `lambda`
    /// and buffer `sigma`: `k / (v_d (sigma/2)^d lambda) * (1 + eps/2)`.
    pub fn sample_size_bound(&self, sigma: f64, lambda: f64, eps: f64) -> Result<f64> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::param(
                "sigma",
                format!("must be positive, got {sigma}"),
            ));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::param(
                "lambda",
                format!("must be positive, got {lambda}"),
            ));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::param(
                "eps",
                format!("must lie in (0, 1), got {eps}"),
            ));
        }
        let vol = self.unit_ball_volume() * (sigma / 2.0).powi(self.d as i32);
        Ok(self.k as f64 / (vol * lambda) * (1.0 + eps / 2.0))
    }

    /// Neighborhood size asked of robust single linkage for separation
    /// slack `eps`: `C d ln n / eps^2 * ln^2(1/delta)`.
    pub fn k_min_rsl(&self, eps: f64, c: f64) -> Result<f64> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::param(
                "eps",
                format!("must lie in (0, 1), got {eps}"),
            ));
        }
        if !(c > 0.0) {
            return Err(Error::param("C", format!("must be positive, got {c}")));
        }
        let n = self.n as f64;
        let l = (1.0 / self.delta).ln();
        Ok(c * self.d as f64 * n.ln() / (eps * eps) * l * l)
    }

    /// Neighborhood size needed by the k-NN graph estimator when the density
    /// peaks at `lambda_max` and clusters sit at `lambda`:
    /// `(lambda_max / lambda) * C d ln n * ln(1/delta)`.
    pub fn k_min_knn(&self, lambda_max: f64, lambda: f64, c: f64) -> Result<f64> {
        if !(lambda > 0.0) {
            return Err(Error::param(
                "lambda",
                format!("must be positive, got {lambda}"),
            ));
        }
        if !(lambda_max >= lambda) {
            return Err(Error::param(
                "Lambda",
                format!("must be >= lambda = {lambda}, got {lambda_max}"),
            ));
        }
        if !(c > 0.0) {
            return Err(Error::param("C", format!("must be positive, got {c}")));
        }
        let n = self.n as f64;
        Ok(lambda_max / lambda * c * self.d as f64 * n.ln() * (1.0 / self.delta).ln())
    }

    /// Smallest density level covered by the pruning guarantees:
    /// `k / (n v_d (sigma/2)^d) * (1+eps)/(1-eps) + eps_tilde / (1-eps)`.
    pub fn pruning_level_floor(&self, sigma: f64, eps: f64) -> Result<f64> {
        if !(sigma > 0.0) {
            return Err(Error::param(
                "sigma",
                format!("must be positive, got {sigma}"),
            ));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::param(
                "eps",
                format!("must lie in (0, 1), got {eps}"),
            ));
        }
        let mass = self.n as f64 * self.unit_ball_volume() * (sigma / 2.0).powi(self.d as i32);
        Ok(self.k as f64 / mass * (1.0 + eps) / (1.0 - eps) + self.eps_tilde / (1.0 - eps))
    }

    /// Radius above which the low-level variant reconnects everything:
    /// `(k / (10 n v_d eps_tilde))^(1/d)`. `None` when `eps_tilde = 0`.
    pub fn low_level_cutoff(&self) -> Option<f64> {
        (self.eps_tilde > 0.0).then(|| {
            let (n, k) = (self.n as f64, self.k as f64);
            root(
                k / (10.0 * n * self.unit_ball_volume() * self.eps_tilde),
                self.d,
            )
        })
    }

    /// Radius from which `lambda_tilde(r) <= 0`; `Some(0)` when every level
    /// is clamped and `None` when none is.
    pub fn clamp_radius(&self) -> Option<f64> {
        let lower = self.lower_mass_threshold();
        if lower <= 0.0 {
            return Some(0.0);
        }
        if self.eps_tilde == 0.0 {
            return None;
        }
        Some(root(
            lower / (self.unit_ball_volume() * self.eps_tilde),
            self.d,
        ))
    }

    /// Pruning lookup level `r(max(lambda_tilde(r), 0))`, with `+inf` for a
    /// clamped level.
    ///
    /// Evaluated in the algebraically equivalent form
    /// `r * (upper / (lower - eps_tilde v_d r^d))^(1/d)` so that it returns
    /// exactly `r` when `C_delta = eps_tilde = 0`, and is nondecreasing in `r`.
    pub fn lookup_radius(&self, r: f64) -> f64 {
        let lower = self.lower_mass_threshold();
        if r <= 0.0 {
            // Limit r -> 0+: lambda_tilde -> +inf unless lower <= 0.
            return if lower > 0.0 { 0.0 } else { f64::INFINITY };
        }
        let slack = lower - self.eps_tilde * self.unit_ball_volume() * r.powi(self.d as i32);
        if slack <= 0.0 {
            return f64::INFINITY;
        }
        r * root(self.upper_mass_threshold() / slack, self.d)
    }
}

fn root(x: f64, d: usize) -> f64 {
    match d {
        1 => x,
        2 => x.sqrt(),
        3 => x.cbrt(),
        _ => x.powf(1.0 / d as f64),
    }
}
