//! The two insured risks: lognormal marginals coupled by a Frank copula,
//! sampled with the conditional-distribution method, plus the empirical
//! and comonotonic quantile summaries of the aggregate loss S1 + S2.

use crate::stochastic::{norm_quantile_unchecked, normal_cdf, PathRng, RngStream};
use crate::{exec, require_finite, Error, Result};

/// Lognormal claim law LN(mu, sigma): ln S ~ N(mu, sigma^2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LognormalMarginal {
    mu: f64,
    sigma: f64,
}

impl LognormalMarginal {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        require_finite("mu", mu)?;
        require_finite("sigma", sigma)?;
        if sigma <= 0.0 {
            return Err(Error::invalid("sigma", format!("must be > 0, got {sigma}")));
        }
        Ok(LognormalMarginal { mu, sigma })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// E[S] = exp(mu + sigma^2 / 2).
    pub fn mean(&self) -> f64 {
        (self.mu + 0.5 * self.sigma * self.sigma).exp()
    }

    /// P[S <= x].
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            normal_cdf((x.ln() - self.mu) / self.sigma)
        }
    }

    /// Quantile exp(mu + sigma * z_p).
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::invalid("p", format!("must lie in (0, 1), got {p}")));
        }
        Ok(self.quantile_unchecked(p))
    }

    pub(crate) fn quantile_unchecked(&self, p: f64) -> f64 {
        (self.mu + self.sigma * norm_quantile_unchecked(p)).exp()
    }
}

/// Frank copula with dependence parameter `alpha`.
///
/// `alpha == 0` is treated as the independence copula u1*u2 (the closed
/// form is 0/0 there; the limit is independence). Negative alpha models
/// negative dependence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrankCopula {
    alpha: f64,
}

impl FrankCopula {
    pub fn new(alpha: f64) -> Result<Self> {
        require_finite("alpha", alpha)?;
        Ok(FrankCopula { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// C(u1, u2) = -(1/a) ln{1 + (e^{-a u1}-1)(e^{-a u2}-1)/(e^{-a}-1)}.
    pub fn cdf(&self, u1: f64, u2: f64) -> Result<f64> {
        check_unit("u1", u1)?;
        check_unit("u2", u2)?;
        if self.alpha == 0.0 {
            return Ok(u1 * u2);
        }
        let a = self.alpha;
        let g = f64::exp_m1(-a * u1) * f64::exp_m1(-a * u2) / f64::exp_m1(-a);
        Ok(-g.ln_1p() / a)
    }

    /// Conditional CDF of U2 given U1 = u1: dC/du1 evaluated at (u1, u2).
    pub fn conditional_cdf(&self, u1: f64, u2: f64) -> Result<f64> {
        check_open_unit("u1", u1)?;
        check_unit("u2", u2)?;
        if self.alpha == 0.0 {
            return Ok(u2);
        }
        let a = self.alpha;
        let e1 = (-a * u1).exp();
        let g2 = f64::exp_m1(-a * u2);
        Ok(e1 * g2 / (f64::exp_m1(-a) + (e1 - 1.0) * g2))
    }

    /// Inverse of [`Self::conditional_cdf`] in its second argument: the u2
    /// with C_{u1}(u2) = v2, via the closed-form inverse.
    pub fn conditional_inverse(&self, u1: f64, v2: f64) -> Result<f64> {
        check_open_unit("u1", u1)?;
        check_open_unit("v2", v2)?;
        if self.alpha == 0.0 {
            return Ok(v2);
        }
        Ok(self.conditional_inverse_raw(u1, v2))
    }

    #[inline]
    fn conditional_inverse_raw(&self, u1: f64, v2: f64) -> f64 {
        let a = self.alpha;
        let g = f64::exp_m1(-a) * v2 / (v2 + (1.0 - v2) * (-a * u1).exp());
        -g.ln_1p() / a
    }
}

fn check_unit(name: &'static str, u: f64) -> Result<()> {
    if (0.0..=1.0).contains(&u) {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must lie in [0, 1], got {u}")))
    }
}

fn check_open_unit(name: &'static str, u: f64) -> Result<()> {
    if u > 0.0 && u < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must lie strictly in (0, 1), got {u}")))
    }
}

/// The insurer's claim model: two lognormal branches and their copula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaimsModel {
    branch1: LognormalMarginal,
    branch2: LognormalMarginal,
    copula: FrankCopula,
}

impl ClaimsModel {
    pub fn new(branch1: LognormalMarginal, branch2: LognormalMarginal, copula: FrankCopula) -> Self {
        ClaimsModel { branch1, branch2, copula }
    }

    pub fn branch1(&self) -> &LognormalMarginal {
        &self.branch1
    }

    pub fn branch2(&self) -> &LognormalMarginal {
        &self.branch2
    }

    pub fn copula(&self) -> &FrankCopula {
        &self.copula
    }

    /// E[S1 + S2]; does not depend on the copula parameter.
    pub fn expected_total(&self) -> f64 {
        self.branch1.mean() + self.branch2.mean()
    }

    /// One draw of (S1, S2) by the conditional-distribution method:
    /// u1 = v1, u2 = C_{u1}^{-1}(v2), then the marginal quantiles.
    pub fn sample_pair(&self, rng: &mut PathRng) -> (f64, f64) {
        let v1 = rng.uniform();
        let v2 = rng.uniform();
        let u2 = if self.copula.alpha == 0.0 {
            v2
        } else {
            self.copula.conditional_inverse_raw(v1, v2)
        };
        (
            self.branch1.quantile_unchecked(v1),
            self.branch2.quantile_unchecked(u2),
        )
    }

    /// `n_paths` independent draws of S1 + S2; draw `i` consumes only
    /// `stream.substream(i)`, so the vector is identical for any worker
    /// count.
    pub fn sample_total(&self, stream: RngStream, n_paths: u64) -> Vec<f64> {
        exec::map_indices(n_paths, |i| {
            let mut rng = stream.substream(i).rng();
            let (s1, s2) = self.sample_pair(&mut rng);
            s1 + s2
        })
    }

    /// Quantile of the comonotonic upper bound S^c = sum_i exp(mu_i +
    /// sigma_i z_p): both branches driven by one uniform, so the quantile
    /// is the sum of the marginal quantiles.
    pub fn comonotonic_upper_bound_quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::invalid("p", format!("must lie in (0, 1), got {p}")));
        }
        Ok(self.branch1.quantile_unchecked(p) + self.branch2.quantile_unchecked(p))
    }
}

/// Order-statistic Value-at-Risk: the ceil(p*N)-th smallest sample. This is
/// inf{x : empirical CDF(x) >= p} — no interpolation, so reruns are
/// bit-identical.
pub fn empirical_var(samples: &[f64], p: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid("p", format!("must lie in (0, 1), got {p}")));
    }
    let mut buf = samples.to_vec();
    let k = order_index(samples.len(), p);
    let (_, kth, _) = buf.select_nth_unstable_by(k, f64::total_cmp);
    Ok(*kth)
}

/// Zero-based index of the ceil(p*N)-th order statistic. The 1e-9 nudge
/// recovers the mathematical ceiling when p*N lands a hair above an
/// integer through rounding.
pub(crate) fn order_index(n: usize, p: f64) -> usize {
    let k = (p * n as f64 - 1e-9).ceil().max(1.0) as usize;
    k.min(n) - 1
}
