//! Shared fixtures: the reference scenario used across integration tests.
#![allow(dead_code)] // each test target uses a different subset

use mfpe_core::assets::{JumpDiffusionParams, MarketModel};
use mfpe_core::claims::{ClaimsModel, FrankCopula, LognormalMarginal};

pub const SEED: u64 = 42;

pub fn reference_claims() -> ClaimsModel {
    let sigma1 = 0.0377;
    let sigma2 = 0.3740;
    ClaimsModel::new(
        LognormalMarginal::new(150f64.ln() - sigma1 * sigma1 / 2.0, sigma1).unwrap(),
        LognormalMarginal::new(50f64.ln() - sigma2 * sigma2 / 2.0, sigma2).unwrap(),
        FrankCopula::new(1.0).unwrap(),
    )
}

pub fn reference_market() -> MarketModel {
    MarketModel::new(
        JumpDiffusionParams::new(0.06, 0.15, 0.5, 0.2).unwrap(),
        0.0344,
        1.0,
    )
    .unwrap()
}

pub fn nojump_market() -> MarketModel {
    MarketModel::new(
        JumpDiffusionParams::new(0.06, 0.15, 0.5, 0.0).unwrap(),
        0.0344,
        1.0,
    )
    .unwrap()
}

/// Allocation grid 0, step, 2*step, ..., 1.
pub fn omega_grid(step: f64) -> Vec<f64> {
    let n = (1.0 / step).round() as usize;
    (0..=n).map(|i| (i as f64 * step).min(1.0)).collect()
}
