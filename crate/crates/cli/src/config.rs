//! Scenario files: flat dotted keys (`market.sigma_u = 0.2`), `#` comments,
//! blank lines. Unset keys fall back to the reference scenario. Parsing and
//! validation collect every error instead of stopping at the first.

use std::fmt;
use std::path::Path;

use mfpe_core::assets::{JumpDiffusionParams, MarketModel};
use mfpe_core::claims::{ClaimsModel, FrankCopula, LognormalMarginal};
use mfpe_core::regimes::RegimeParams;

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimsConfig {
    pub mu1: f64,
    pub sigma1: f64,
    pub mu2: f64,
    pub sigma2: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarketConfig {
    pub mu: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub sigma_u: f64,
    pub r: f64,
    pub horizon: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeConfig {
    pub gamma: f64,
    pub margin_rate: f64,
    pub provision_confidence: f64,
    pub ruin_confidence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub seed: u64,
    pub n_paths_curve: u64,
    pub n_paths_final: u64,
    pub grid_step: f64,
    pub capital_tol: f64,
}

/// Full scenario. The default is the reference scenario: two lognormal
/// branches calibrated to means 150 and 50, Frank dependence alpha = 1,
/// 15% loading, and the jump-diffusion market (mu 6%, sigma 15%, one jump
/// every two periods of size N(0, 0.2^2)) against a 3.5% discrete-rate bond.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub claims: ClaimsConfig,
    pub market: MarketConfig,
    pub regime: RegimeConfig,
    pub simulation: SimulationConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let sigma1 = 0.0377;
        let sigma2 = 0.3740;
        ScenarioConfig {
            claims: ClaimsConfig {
                // calibrated so the branch means are exactly 150 and 50
                mu1: 150f64.ln() - sigma1 * sigma1 / 2.0,
                sigma1,
                mu2: 50f64.ln() - sigma2 * sigma2 / 2.0,
                sigma2,
                alpha: 1.0,
            },
            market: MarketConfig {
                mu: 0.06,
                sigma: 0.15,
                lambda: 0.5,
                sigma_u: 0.2,
                r: 0.0344,
                horizon: 1.0,
            },
            regime: RegimeConfig {
                gamma: 0.15,
                margin_rate: 0.18,
                provision_confidence: 0.75,
                ruin_confidence: 0.995,
            },
            simulation: SimulationConfig {
                seed: 42,
                n_paths_curve: 200_000,
                n_paths_final: 1_000_000,
                grid_step: 0.01,
                capital_tol: 0.01,
            },
        }
    }
}

/// One parse or validation problem, tagged with the config key it concerns.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
    pub line: Option<usize>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "{}: {} (line {n})", self.key, self.message),
            None => write!(f, "{}: {}", self.key, self.message),
        }
    }
}

impl ScenarioConfig {
    /// Parse a scenario file on top of the defaults, collecting every error.
    pub fn from_str_collecting(text: &str) -> (Self, Vec<ConfigError>) {
        let mut config = ScenarioConfig::default();
        let mut errors = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                errors.push(ConfigError {
                    key: line.to_string(),
                    message: "expected `key = value`".to_string(),
                    line: Some(line_no),
                });
                continue;
            };
            let key = key.trim();
            let value = value.trim();
            if let Err(message) = config.apply(key, value) {
                errors.push(ConfigError { key: key.to_string(), message, line: Some(line_no) });
            }
        }
        errors.extend(config.validate());
        (config, errors)
    }

    /// Read and parse a scenario file. I/O problems are returned apart from
    /// config problems so the caller can exit with the right code.
    pub fn load(path: &Path) -> std::io::Result<(Self, Vec<ConfigError>)> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::from_str_collecting(&text))
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), String> {
        let as_f64 = || -> Result<f64, String> {
            value.parse::<f64>().map_err(|_| format!("expected a number, got `{value}`"))
        };
        let as_u64 = || -> Result<u64, String> {
            value.parse::<u64>().map_err(|_| format!("expected a non-negative integer, got `{value}`"))
        };
        match key {
            "claims.mu1" => self.claims.mu1 = as_f64()?,
            "claims.sigma1" => self.claims.sigma1 = as_f64()?,
            "claims.mu2" => self.claims.mu2 = as_f64()?,
            "claims.sigma2" => self.claims.sigma2 = as_f64()?,
            "claims.alpha" => self.claims.alpha = as_f64()?,
            "market.mu" => self.market.mu = as_f64()?,
            "market.sigma" => self.market.sigma = as_f64()?,
            "market.lambda" => self.market.lambda = as_f64()?,
            "market.sigma_u" => self.market.sigma_u = as_f64()?,
            "market.r" => self.market.r = as_f64()?,
            "market.horizon" => self.market.horizon = as_f64()?,
            "regime.gamma" => self.regime.gamma = as_f64()?,
            "regime.margin_rate" => self.regime.margin_rate = as_f64()?,
            "regime.provision_confidence" => self.regime.provision_confidence = as_f64()?,
            "regime.ruin_confidence" => self.regime.ruin_confidence = as_f64()?,
            "simulation.seed" => self.simulation.seed = as_u64()?,
            "simulation.n_paths_curve" => self.simulation.n_paths_curve = as_u64()?,
            "simulation.n_paths_final" => self.simulation.n_paths_final = as_u64()?,
            "simulation.grid_step" => self.simulation.grid_step = as_f64()?,
            "simulation.capital_tol" => self.simulation.capital_tol = as_f64()?,
            _ => return Err("unknown key".to_string()),
        }
        Ok(())
    }

    /// Field-level invariants, every violation reported.
    fn validate(&self) -> Vec<ConfigError> {
        let mut errors = Vec::new();
        let mut fail = |key: &str, message: String| {
            errors.push(ConfigError { key: key.to_string(), message, line: None });
        };
        let finite = |v: f64| v.is_finite();

        if !finite(self.claims.mu1) {
            fail("claims.mu1", format!("must be finite, got {}", self.claims.mu1));
        }
        if !finite(self.claims.mu2) {
            fail("claims.mu2", format!("must be finite, got {}", self.claims.mu2));
        }
        if !(self.claims.sigma1 > 0.0 && finite(self.claims.sigma1)) {
            fail("claims.sigma1", format!("must be > 0, got {}", self.claims.sigma1));
        }
        if !(self.claims.sigma2 > 0.0 && finite(self.claims.sigma2)) {
            fail("claims.sigma2", format!("must be > 0, got {}", self.claims.sigma2));
        }
        if !finite(self.claims.alpha) {
            fail("claims.alpha", format!("must be finite (0 means independence), got {}", self.claims.alpha));
        }
        if !finite(self.market.mu) {
            fail("market.mu", format!("must be finite, got {}", self.market.mu));
        }
        if !(self.market.sigma > 0.0 && finite(self.market.sigma)) {
            fail("market.sigma", format!("must be > 0, got {}", self.market.sigma));
        }
        if !(self.market.lambda >= 0.0 && finite(self.market.lambda)) {
            fail("market.lambda", format!("must be >= 0, got {}", self.market.lambda));
        }
        if !(self.market.sigma_u >= 0.0 && finite(self.market.sigma_u)) {
            fail("market.sigma_u", format!("must be >= 0, got {}", self.market.sigma_u));
        }
        if !finite(self.market.r) {
            fail("market.r", format!("must be finite, got {}", self.market.r));
        }
        if !(self.market.horizon > 0.0 && finite(self.market.horizon)) {
            fail("market.horizon", format!("must be > 0, got {}", self.market.horizon));
        }
        if !(self.regime.gamma >= 0.0 && finite(self.regime.gamma)) {
            fail("regime.gamma", format!("must be >= 0, got {}", self.regime.gamma));
        }
        if !(self.regime.margin_rate >= 0.0 && finite(self.regime.margin_rate)) {
            fail("regime.margin_rate", format!("must be >= 0, got {}", self.regime.margin_rate));
        }
        if !(self.regime.provision_confidence > 0.0 && self.regime.provision_confidence < 1.0) {
            fail(
                "regime.provision_confidence",
                format!("must lie in (0, 1), got {}", self.regime.provision_confidence),
            );
        }
        if !(self.regime.ruin_confidence > 0.0 && self.regime.ruin_confidence < 1.0) {
            fail(
                "regime.ruin_confidence",
                format!("must lie in (0, 1), got {}", self.regime.ruin_confidence),
            );
        }
        if self.simulation.n_paths_curve == 0 {
            fail("simulation.n_paths_curve", "must be >= 1".to_string());
        }
        if self.simulation.n_paths_final == 0 {
            fail("simulation.n_paths_final", "must be >= 1".to_string());
        }
        if !(self.simulation.grid_step > 0.0 && self.simulation.grid_step <= 1.0) {
            fail(
                "simulation.grid_step",
                format!("must lie in (0, 1], got {}", self.simulation.grid_step),
            );
        }
        if !(self.simulation.capital_tol > 0.0 && finite(self.simulation.capital_tol)) {
            fail(
                "simulation.capital_tol",
                format!("must be > 0, got {}", self.simulation.capital_tol),
            );
        }
        errors
    }

    /// The resolved key/value lines, in file order, for
    /// `--print-effective-config`.
    pub fn effective_lines(&self) -> Vec<String> {
        vec![
            format!("claims.mu1 = {}", self.claims.mu1),
            format!("claims.sigma1 = {}", self.claims.sigma1),
            format!("claims.mu2 = {}", self.claims.mu2),
            format!("claims.sigma2 = {}", self.claims.sigma2),
            format!("claims.alpha = {}", self.claims.alpha),
            format!("market.mu = {}", self.market.mu),
            format!("market.sigma = {}", self.market.sigma),
            format!("market.lambda = {}", self.market.lambda),
            format!("market.sigma_u = {}", self.market.sigma_u),
            format!("market.r = {}", self.market.r),
            format!("market.horizon = {}", self.market.horizon),
            format!("regime.gamma = {}", self.regime.gamma),
            format!("regime.margin_rate = {}", self.regime.margin_rate),
            format!("regime.provision_confidence = {}", self.regime.provision_confidence),
            format!("regime.ruin_confidence = {}", self.regime.ruin_confidence),
            format!("simulation.seed = {}", self.simulation.seed),
            format!("simulation.n_paths_curve = {}", self.simulation.n_paths_curve),
            format!("simulation.n_paths_final = {}", self.simulation.n_paths_final),
            format!("simulation.grid_step = {}", self.simulation.grid_step),
            format!("simulation.capital_tol = {}", self.simulation.capital_tol),
        ]
    }

    /// Instantiate the engine models. Call only on a validated config.
    pub fn build_models(&self) -> (ClaimsModel, MarketModel, RegimeParams) {
        let claims = ClaimsModel::new(
            LognormalMarginal::new(self.claims.mu1, self.claims.sigma1).expect("validated"),
            LognormalMarginal::new(self.claims.mu2, self.claims.sigma2).expect("validated"),
            FrankCopula::new(self.claims.alpha).expect("validated"),
        );
        let market = MarketModel::new(
            JumpDiffusionParams::new(
                self.market.mu,
                self.market.sigma,
                self.market.lambda,
                self.market.sigma_u,
            )
            .expect("validated"),
            self.market.r,
            self.market.horizon,
        )
        .expect("validated");
        let params = RegimeParams::new(
            self.regime.gamma,
            self.regime.margin_rate,
            self.regime.provision_confidence,
            self.regime.ruin_confidence,
        )
        .expect("validated");
        (claims, market, params)
    }

    /// Same market with the jump size forced to zero (the no-jump variant).
    pub fn build_nojump_market(&self) -> MarketModel {
        MarketModel::new(
            JumpDiffusionParams::new(self.market.mu, self.market.sigma, self.market.lambda, 0.0)
                .expect("validated"),
            self.market.r,
            self.market.horizon,
        )
        .expect("validated")
    }

    /// The allocation grid 0, step, 2*step, ..., 1.
    pub fn omega_grid(&self) -> Vec<f64> {
        let step = self.simulation.grid_step;
        let n = (1.0 / step).round() as usize;
        (0..=n).map(|i| (i as f64 * step).min(1.0)).collect()
    }
}
