//! The two-asset financial market: a jump-diffusion risky asset with exact
//! Poisson-mixture distribution and closed-form power moments, a riskless
//! bond, and the one-period portfolio return.

use crate::stochastic::{normal_cdf, PathRng, RngStream};
use crate::{exec, require_finite, Error, Result};

/// Parameters of the risky asset: log-price drift `mu`, diffusion
/// volatility `sigma`, jump intensity `lambda`, and jump-size standard
/// deviation `sigma_u` (jumps are centered normals N(0, sigma_u^2)).
/// `lambda == 0` or `sigma_u == 0` reduces the model to geometric Brownian
/// motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpDiffusionParams {
    mu: f64,
    sigma: f64,
    lambda: f64,
    sigma_u: f64,
}

impl JumpDiffusionParams {
    pub fn new(mu: f64, sigma: f64, lambda: f64, sigma_u: f64) -> Result<Self> {
        require_finite("mu", mu)?;
        require_finite("sigma", sigma)?;
        require_finite("lambda", lambda)?;
        require_finite("sigma_u", sigma_u)?;
        if sigma <= 0.0 {
            return Err(Error::invalid("sigma", format!("must be > 0, got {sigma}")));
        }
        if lambda < 0.0 {
            return Err(Error::invalid("lambda", format!("must be >= 0, got {lambda}")));
        }
        if sigma_u < 0.0 {
            return Err(Error::invalid("sigma_u", format!("must be >= 0, got {sigma_u}")));
        }
        Ok(JumpDiffusionParams { mu, sigma, lambda, sigma_u })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn sigma_u(&self) -> f64 {
        self.sigma_u
    }
}

/// Portfolio weight of the risky asset; the bond gets the rest. Short
/// selling is banned, so the weight lives in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Allocation {
    omega1: f64,
}

impl Allocation {
    pub fn new(omega1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&omega1) {
            return Err(Error::invalid(
                "omega1",
                format!("must lie in [0, 1], got {omega1}"),
            ));
        }
        Ok(Allocation { omega1 })
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn bond_weight(&self) -> f64 {
        1.0 - self.omega1
    }
}

/// Where the one-period economic-provision minimization lands: an interior
/// optimum exists iff the drift sits strictly between the riskless rate and
/// `r + 2 sigma^2 + lambda (e^{2 sigma_u^2} - e^{sigma_u^2 / 2})` (the
/// sign conditions of the objective's derivative at the two endpoints).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    /// Unique optimum strictly inside (0, 1).
    Interior,
    /// Drift no better than the bond: everything goes to the bond.
    AllBond,
    /// Drift beats the upper bound: everything goes to the risky asset.
    AllRisky,
}

/// The market: risky asset, riskless rate (continuously compounded) and the
/// period length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketModel {
    risky: JumpDiffusionParams,
    riskless_rate: f64,
    horizon: f64,
}

impl MarketModel {
    pub fn new(risky: JumpDiffusionParams, riskless_rate: f64, horizon: f64) -> Result<Self> {
        require_finite("riskless_rate", riskless_rate)?;
        require_finite("horizon", horizon)?;
        if horizon <= 0.0 {
            return Err(Error::invalid("horizon", format!("must be > 0, got {horizon}")));
        }
        Ok(MarketModel { risky, riskless_rate, horizon })
    }

    pub fn risky(&self) -> &JumpDiffusionParams {
        &self.risky
    }

    pub fn riskless_rate(&self) -> f64 {
        self.riskless_rate
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Bond value at the horizon, exp(r t).
    pub fn bond_value(&self) -> f64 {
        (self.riskless_rate * self.horizon).exp()
    }

    /// One terminal value of the risky asset: Poisson jump count, Gaussian
    /// diffusion, and the jump sum collapsed to one normal of variance
    /// `n sigma_u^2`.
    pub fn sample_risky(&self, rng: &mut PathRng) -> f64 {
        let p = &self.risky;
        let t = self.horizon;
        let n = rng.poisson_unchecked(p.lambda * t);
        let mut log_ret = (p.mu - 0.5 * p.sigma * p.sigma) * t + p.sigma * t.sqrt() * rng.std_normal();
        if n > 0 && p.sigma_u > 0.0 {
            log_ret += p.sigma_u * (n as f64).sqrt() * rng.std_normal();
        }
        log_ret.exp()
    }

    /// `n_paths` terminal values; path `i` draws only from
    /// `stream.substream(i)`.
    pub fn sample_risky_paths(&self, stream: RngStream, n_paths: u64) -> Vec<f64> {
        exec::map_indices(n_paths, |i| {
            let mut rng = stream.substream(i).rng();
            self.sample_risky(&mut rng)
        })
    }

    /// P[A1(t) <= x]: the Poisson mixture of normal CDFs, truncated once
    /// the remaining Poisson mass is below 1e-12.
    pub fn cdf_risky(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x <= 0.0 {
            return Err(Error::invalid("x", format!("must be > 0, got {x}")));
        }
        Ok(MixtureKernel::new(self).cdf_of_ln(x.ln()))
    }

    /// E[A1(t)^p], closed form; valid for every real `p`.
    pub fn power_moment(&self, p: f64) -> f64 {
        let jp = &self.risky;
        let t = self.horizon;
        let diffusion = p * (jp.mu - 0.5 * jp.sigma * jp.sigma) * t + 0.5 * p * p * jp.sigma * jp.sigma * t;
        let jumps = jp.lambda * t * f64::exp_m1(0.5 * p * p * jp.sigma_u * jp.sigma_u);
        (diffusion + jumps).exp()
    }

    /// Terminal portfolio value per unit invested: omega1 * risky +
    /// (1 - omega1) * exp(r t).
    pub fn portfolio_return(&self, a: Allocation, risky_value: f64) -> f64 {
        a.omega1() * risky_value + a.bond_weight() * self.bond_value()
    }

    /// Upper drift bound of the interior-optimum condition.
    pub fn interior_upper_bound(&self) -> f64 {
        let p = &self.risky;
        self.riskless_rate
            + 2.0 * p.sigma * p.sigma
            + p.lambda * ((2.0 * p.sigma_u * p.sigma_u).exp() - (0.5 * p.sigma_u * p.sigma_u).exp())
    }

    /// Where the one-period economic-provision minimization lands: interior
    /// iff r < mu < upper bound, all-bond iff mu <= r, all-risky otherwise.
    pub fn mfpe_feasibility(&self) -> Feasibility {
        if self.risky.mu <= self.riskless_rate {
            Feasibility::AllBond
        } else if self.risky.mu >= self.interior_upper_bound() {
            Feasibility::AllRisky
        } else {
            Feasibility::Interior
        }
    }
}

/// Precomputed Poisson-mixture kernel: P[A1(t) <= x] = sum_n w_n *
/// Phi((ln x - (mu - sigma^2/2) t) / sqrt(n sigma_u^2 + t sigma^2)).
///
/// Also evaluates the conditional asset-shortfall probability of the ruin
/// estimator, where `ln x` is replaced by `ln rho(s)`.
pub(crate) struct MixtureKernel {
    drift: f64,
    weights: Vec<f64>,
    inv_sds: Vec<f64>,
}

/// Poisson tail mass below which the series is truncated.
const SERIES_TAIL_TOL: f64 = 1e-12;

impl MixtureKernel {
    pub(crate) fn new(market: &MarketModel) -> Self {
        let p = market.risky();
        let t = market.horizon();
        let rate = p.lambda() * t;
        let var_diffusion = p.sigma() * p.sigma() * t;
        let var_jump = p.sigma_u() * p.sigma_u();

        let mut weights = Vec::new();
        let mut inv_sds = Vec::new();
        let mut w = (-rate).exp();
        let mut cum = w;
        let mut n = 0u32;
        loop {
            weights.push(w);
            inv_sds.push(1.0 / (n as f64 * var_jump + var_diffusion).sqrt());
            if 1.0 - cum < SERIES_TAIL_TOL || rate == 0.0 {
                break;
            }
            n += 1;
            w *= rate / n as f64;
            cum += w;
        }
        MixtureKernel {
            drift: (p.mu() - 0.5 * p.sigma() * p.sigma()) * t,
            weights,
            inv_sds,
        }
    }

    #[cfg(test)]
    pub(crate) fn terms(&self) -> usize {
        self.weights.len()
    }

    /// CDF evaluated at a point given as a logarithm.
    pub(crate) fn cdf_of_ln(&self, ln_x: f64) -> f64 {
        let z = ln_x - self.drift;
        self.weights
            .iter()
            .zip(&self.inv_sds)
            .map(|(w, inv_sd)| w * normal_cdf(z * inv_sd))
            .sum()
    }
}
