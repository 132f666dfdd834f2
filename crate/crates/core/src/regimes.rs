//! Regulatory balance sheets: technical provisions and required capital
//! under the French regime (allocation-independent solvency margin) and a
//! Solvency-2-style regime (99.5% target capital, allocation-dependent).

use crate::assets::{Allocation, MarketModel, MixtureKernel};
use crate::claims::ClaimsModel;
use crate::stochastic::norm_quantile_unchecked;
use crate::{exec, require_finite, Error, Result};

/// The prudential regime a balance sheet was computed under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    French,
    Solvency2,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::French => write!(f, "french"),
            Regime::Solvency2 => write!(f, "solvency2"),
        }
    }
}

/// Regulatory parameters: premium loading, French margin factor, the
/// provision confidence level (75% in the reference scenario) and the ruin
/// confidence level (99.5%).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeParams {
    loading_rate: f64,
    margin_rate: f64,
    provision_confidence: f64,
    ruin_confidence: f64,
}

impl RegimeParams {
    pub fn new(
        loading_rate: f64,
        margin_rate: f64,
        provision_confidence: f64,
        ruin_confidence: f64,
    ) -> Result<Self> {
        require_finite("loading_rate", loading_rate)?;
        require_finite("margin_rate", margin_rate)?;
        if loading_rate < 0.0 {
            return Err(Error::invalid("loading_rate", format!("must be >= 0, got {loading_rate}")));
        }
        if !(provision_confidence > 0.0 && provision_confidence < 1.0) {
            return Err(Error::invalid(
                "provision_confidence",
                format!("must lie in (0, 1), got {provision_confidence}"),
            ));
        }
        if !(ruin_confidence > 0.0 && ruin_confidence < 1.0) {
            return Err(Error::invalid(
                "ruin_confidence",
                format!("must lie in (0, 1), got {ruin_confidence}"),
            ));
        }
        Ok(RegimeParams { loading_rate, margin_rate, provision_confidence, ruin_confidence })
    }

    pub fn loading_rate(&self) -> f64 {
        self.loading_rate
    }

    pub fn margin_rate(&self) -> f64 {
        self.margin_rate
    }

    pub fn provision_confidence(&self) -> f64 {
        self.provision_confidence
    }

    pub fn ruin_confidence(&self) -> f64 {
        self.ruin_confidence
    }

    /// Ruin probability the target capital must not exceed.
    pub fn ruin_tail(&self) -> f64 {
        1.0 - self.ruin_confidence
    }
}

impl Default for RegimeParams {
    /// Reference scenario: 15% loading, 18% margin factor, 75% provisions,
    /// 99.5% ruin control.
    fn default() -> Self {
        RegimeParams {
            loading_rate: 0.15,
            margin_rate: 0.18,
            provision_confidence: 0.75,
            ruin_confidence: 0.995,
        }
    }
}

/// Opening balance sheet: per-branch provisions, their total, and the
/// required capital. `allocation` is `None` under the French regime, whose
/// capital does not depend on the asset mix.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceSheet {
    pub provisions_by_branch: Vec<f64>,
    pub provisions_total: f64,
    pub required_capital: f64,
    pub regime: Regime,
    pub allocation: Option<Allocation>,
}

impl BalanceSheet {
    /// Total opening liabilities L0 + E0.
    pub fn total(&self) -> f64 {
        self.provisions_total + self.required_capital
    }
}

/// French balance sheet, fully closed form: per-branch provisions at the
/// expected claim cost (no discounting) and the premium-based solvency
/// margin `margin_rate * (1 + loading) * E[total claims]`.
pub fn french_balance_sheet(claims: &ClaimsModel, params: &RegimeParams) -> BalanceSheet {
    let by_branch = vec![claims.branch1().mean(), claims.branch2().mean()];
    let total: f64 = by_branch.iter().sum();
    BalanceSheet {
        provisions_by_branch: by_branch,
        provisions_total: total,
        required_capital: params.margin_rate * (1.0 + params.loading_rate) * total,
        regime: Regime::French,
        allocation: None,
    }
}

/// Solvency-2-style provisions: the per-branch claim VaR at the provision
/// confidence level, discounted at the riskless rate over the horizon.
/// Closed form for lognormal branches: exp(mu_i - r t + sigma_i z_p).
pub fn s2_provisions(
    claims: &ClaimsModel,
    market: &MarketModel,
    params: &RegimeParams,
) -> Vec<f64> {
    let discount = (-market.riskless_rate() * market.horizon()).exp();
    let z = norm_quantile_unchecked(params.provision_confidence);
    [claims.branch1(), claims.branch2()]
        .iter()
        .map(|b| (b.mu() + b.sigma() * z).exp() * discount)
        .collect()
}

/// Market-value-margin loading: the factor `exp(sigma z_p - sigma^2/2) - 1`
/// with `VaR(S, p) = (1 + factor) * E[S]` for a lognormal S.
pub fn market_value_margin_factor(sigma: f64, p: f64) -> Result<f64> {
    require_finite("sigma", sigma)?;
    if sigma <= 0.0 {
        return Err(Error::invalid("sigma", format!("must be > 0, got {sigma}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid("p", format!("must lie in (0, 1), got {p}")));
    }
    Ok(f64::exp_m1(sigma * norm_quantile_unchecked(p) - 0.5 * sigma * sigma))
}

/// Hybrid ruin estimator over a pre-sorted claim sample: the empirical mean
/// of the conditional asset-shortfall probability
/// `P[omega1 A1 + (1-omega1) e^{rt} <= s_k / total_assets]`, with the asset
/// dimension integrated exactly by the Poisson-mixture series.
///
/// For `omega1 == 0` the conditional probability degenerates to the
/// indicator `{s_k > total_assets e^{rt}}`; for `rho(s) <= 0` the bond leg
/// alone covers the scaled claim and the probability is 0.
pub(crate) fn ruin_probability_sorted(
    sorted_claims: &[f64],
    market: &MarketModel,
    a: Allocation,
    total_assets: f64,
) -> f64 {
    let n = sorted_claims.len() as f64;
    let bond = market.bond_value();
    let omega = a.omega1();
    if omega == 0.0 {
        let threshold = total_assets * bond;
        let below = sorted_claims.partition_point(|&s| s <= threshold);
        return (sorted_claims.len() - below) as f64 / n;
    }
    let kernel = MixtureKernel::new(market);
    let bond_leg = (1.0 - omega) * bond;
    // rho(s) <= 0 exactly for s <= total_assets * bond_leg: zero contribution
    let start = sorted_claims.partition_point(|&s| s <= total_assets * bond_leg);
    let sum = exec::block_sum(&sorted_claims[start..], |s| {
        let rho = (s / total_assets - bond_leg) / omega;
        kernel.cdf_of_ln(rho.ln())
    });
    sum / n
}

const MAX_BRACKET_GROWTH: u32 = 64;
const MAX_BISECTIONS: u32 = 200;

/// Smallest capital `E0 >= 0` (to absolute tolerance `tol`) whose ruin
/// probability, estimated by the hybrid estimator on `claims_samples`, does
/// not exceed `1 - ruin_confidence`. Monotonicity of the ruin probability
/// in `E0` justifies bisection; the upper bracket grows geometrically until
/// feasible.
pub fn target_capital(
    claims_samples: &[f64],
    market: &MarketModel,
    a: Allocation,
    l0: f64,
    params: &RegimeParams,
    tol: f64,
) -> Result<f64> {
    if claims_samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid("tol", format!("must be > 0, got {tol}")));
    }
    let mut sorted = claims_samples.to_vec();
    exec::sort(&mut sorted);
    target_capital_sorted(&sorted, market, a, l0, params, tol)
}

pub(crate) fn target_capital_sorted(
    sorted_claims: &[f64],
    market: &MarketModel,
    a: Allocation,
    l0: f64,
    params: &RegimeParams,
    tol: f64,
) -> Result<f64> {
    let tail = params.ruin_tail();
    let ruin = |e0: f64| ruin_probability_sorted(sorted_claims, market, a, l0 + e0);

    if ruin(0.0) <= tail {
        return Ok(0.0);
    }
    let mut hi = l0.max(1.0);
    let mut growths = 0;
    while ruin(hi) > tail {
        hi *= 2.0;
        growths += 1;
        if growths > MAX_BRACKET_GROWTH {
            return Err(Error::NoConvergence { max_iterations: MAX_BRACKET_GROWTH });
        }
    }
    let mut lo = 0.0;
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if ruin(mid) <= tail {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
        if iterations > MAX_BISECTIONS {
            return Err(Error::NoConvergence { max_iterations: MAX_BISECTIONS });
        }
    }
    Ok(hi)
}

/// Target capital at each grid allocation, on common claim samples (sorted
/// once, shared across the grid).
pub fn target_capital_curve(
    claims_samples: &[f64],
    market: &MarketModel,
    l0: f64,
    params: &RegimeParams,
    omega_grid: &[f64],
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    if claims_samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let allocations: Vec<Allocation> = omega_grid
        .iter()
        .map(|&w| Allocation::new(w))
        .collect::<Result<_>>()?;
    let mut sorted = claims_samples.to_vec();
    exec::sort(&mut sorted);
    let capitals = exec::map_indices(allocations.len() as u64, |i| {
        let a = allocations[i as usize];
        target_capital_sorted(&sorted, market, a, l0, params, tol)
    });
    omega_grid
        .iter()
        .zip(capitals)
        .map(|(&w, c)| c.map(|c| (w, c)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets::JumpDiffusionParams;
    use crate::claims::{empirical_var, FrankCopula, LognormalMarginal};
    use crate::stochastic::RngStream;

    fn reference_claims() -> ClaimsModel {
        let sigma1 = 0.0377;
        let sigma2 = 0.3740;
        ClaimsModel::new(
            LognormalMarginal::new(150f64.ln() - sigma1 * sigma1 / 2.0, sigma1).unwrap(),
            LognormalMarginal::new(50f64.ln() - sigma2 * sigma2 / 2.0, sigma2).unwrap(),
            FrankCopula::new(1.0).unwrap(),
        )
    }

    fn reference_market() -> MarketModel {
        MarketModel::new(
            JumpDiffusionParams::new(0.06, 0.15, 0.5, 0.2).unwrap(),
            0.0344,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn regime_params_validation() {
        assert!(RegimeParams::new(-0.1, 0.18, 0.75, 0.995).is_err());
        assert!(RegimeParams::new(0.15, 0.18, 0.0, 0.995).is_err());
        assert!(RegimeParams::new(0.15, 0.18, 0.75, 1.0).is_err());
        assert!(RegimeParams::new(0.15, 0.18, 0.75, 0.995).is_ok());
    }

    #[test]
    fn french_bilan_reference_values() {
        let bilan = french_balance_sheet(&reference_claims(), &RegimeParams::default());
        assert!((bilan.provisions_by_branch[0] - 150.0).abs() / 150.0 < 1e-9);
        assert!((bilan.provisions_by_branch[1] - 50.0).abs() / 50.0 < 1e-9);
        assert!((bilan.provisions_total - 200.0).abs() / 200.0 < 1e-9);
        assert!((bilan.required_capital - 41.4).abs() / 41.4 < 1e-9);
        assert!((bilan.total() - 241.4).abs() / 241.4 < 1e-9);
        assert_eq!(bilan.regime, Regime::French);
        assert!(bilan.allocation.is_none());
    }

    #[test]
    fn french_capital_drops_loading() {
        let params = RegimeParams::new(0.0, 0.18, 0.75, 0.995).unwrap();
        let bilan = french_balance_sheet(&reference_claims(), &params);
        assert!((bilan.required_capital - 36.0).abs() < 1e-9);
    }

    #[test]
    fn french_bilan_ignores_dependence_and_allocation() {
        // the margin is a function of the marginal means alone: changing
        // the copula leaves the bilan untouched, and no market or
        // allocation enters the computation at all
        let claims = reference_claims();
        let params = RegimeParams::default();
        let recoupled = ClaimsModel::new(
            *claims.branch1(),
            *claims.branch2(),
            FrankCopula::new(-4.0).unwrap(),
        );
        let a = french_balance_sheet(&claims, &params);
        let b = french_balance_sheet(&recoupled, &params);
        assert_eq!(a, b);
        assert!(a.allocation.is_none());
    }

    #[test]
    fn s2_provisions_reference_values() {
        let p = s2_provisions(&reference_claims(), &reference_market(), &RegimeParams::default());
        assert!((p[0] - 148.55).abs() < 0.01, "branch 1 provision {}", p[0]);
        assert!((p[1] - 57.97).abs() < 0.01, "branch 2 provision {}", p[1]);
        let total: f64 = p.iter().sum();
        assert!((total - 206.52).abs() < 0.01, "total {total}");
        assert!((total / 200.0 - 1.0326).abs() < 0.0003);
    }

    #[test]
    fn s2_provision_below_mean_for_small_sigma() {
        // sigma -> 0: provision tends to exp(mu - r) < E[S]
        let b = LognormalMarginal::new(50f64.ln(), 1e-8).unwrap();
        let claims = ClaimsModel::new(b, b, FrankCopula::new(0.0).unwrap());
        let p = s2_provisions(&claims, &reference_market(), &RegimeParams::default());
        let expect = 50.0 * (-0.0344f64).exp();
        assert!((p[0] - expect).abs() < 1e-4);
        assert!(p[0] < b.mean());
    }

    #[test]
    fn margin_factor_consistency_with_provisions() {
        // e^{-r} (1 + factor) E[S_i] must equal the closed-form provision
        let claims = reference_claims();
        let market = reference_market();
        let params = RegimeParams::default();
        let p = s2_provisions(&claims, &market, &params);
        let discount = (-market.riskless_rate()).exp();
        for (branch, &prov) in [claims.branch1(), claims.branch2()].iter().zip(&p) {
            let factor = market_value_margin_factor(branch.sigma(), 0.75).unwrap();
            let via_factor = discount * (1.0 + factor) * branch.mean();
            assert!((via_factor - prov).abs() < 1e-10);
        }
    }

    #[test]
    fn margin_factor_edge_cases() {
        // p = Phi(sigma/2) makes the exponent vanish
        let sigma = 0.4;
        let p = crate::stochastic::normal_cdf(sigma / 2.0);
        assert!(market_value_margin_factor(sigma, p).unwrap().abs() < 1e-12);
        // increasing in p
        let mut last = -1.0;
        for i in 1..20 {
            let f = market_value_margin_factor(sigma, i as f64 / 20.0).unwrap();
            assert!(f > last);
            last = f;
        }
        assert!(market_value_margin_factor(0.0, 0.75).is_err());
        assert!(market_value_margin_factor(0.4, 0.0).is_err());
    }

    #[test]
    fn bond_only_capital_matches_order_statistic() {
        // omega = 0 reduces the solver to the discounted claim VaR minus L0
        let claims = reference_claims();
        let market = reference_market();
        let params = RegimeParams::default();
        let samples = claims.sample_total(RngStream::new(5, 1), 50_000);
        let l0: f64 = s2_provisions(&claims, &market, &params).iter().sum();
        let cap = target_capital(
            &samples,
            &market,
            Allocation::new(0.0).unwrap(),
            l0,
            &params,
            0.001,
        )
        .unwrap();
        let var995 = empirical_var(&samples, 0.995).unwrap();
        let expect = var995 * (-0.0344f64).exp() - l0;
        assert!(
            (cap - expect).abs() < 0.002,
            "solver {cap} vs order statistic {expect}"
        );
    }

    #[test]
    fn target_capital_is_zero_when_already_safe() {
        let market = reference_market();
        let params = RegimeParams::default();
        let samples = vec![1.0; 1000];
        let cap = target_capital(
            &samples,
            &market,
            Allocation::new(0.3).unwrap(),
            100.0,
            &params,
            0.01,
        )
        .unwrap();
        assert_eq!(cap, 0.0);
    }

    #[test]
    fn target_capital_rejects_bad_inputs() {
        let market = reference_market();
        let params = RegimeParams::default();
        assert!(matches!(
            target_capital(&[], &market, Allocation::new(0.1).unwrap(), 10.0, &params, 0.01),
            Err(Error::EmptySamples)
        ));
        assert!(target_capital(
            &[1.0],
            &market,
            Allocation::new(0.1).unwrap(),
            10.0,
            &params,
            0.0
        )
        .is_err());
    }

    #[test]
    fn larger_capital_weakly_reduces_ruin() {
        let claims = reference_claims();
        let market = reference_market();
        let mut samples = claims.sample_total(RngStream::new(6, 2), 20_000);
        exec::sort(&mut samples);
        let a = Allocation::new(0.2).unwrap();
        let mut last = f64::INFINITY;
        for e0 in [0.0, 20.0, 40.0, 80.0, 160.0] {
            let pi = ruin_probability_sorted(&samples, &market, a, 206.5 + e0);
            assert!(pi <= last, "ruin must not increase with capital");
            last = pi;
        }
    }

    #[test]
    fn target_capital_non_increasing_in_provisions() {
        let claims = reference_claims();
        let market = reference_market();
        let params = RegimeParams::default();
        let samples = claims.sample_total(RngStream::new(7, 3), 20_000);
        let a = Allocation::new(0.1).unwrap();
        let mut last = f64::INFINITY;
        for l0 in [180.0, 200.0, 220.0, 240.0] {
            let cap = target_capital(&samples, &market, a, l0, &params, 0.01).unwrap();
            assert!(cap <= last + 0.011, "capital must not grow with provisions");
            last = cap;
        }
    }

    #[test]
    fn ruin_at_returned_capital_honors_the_tail() {
        let claims = reference_claims();
        let market = reference_market();
        let params = RegimeParams::default();
        let mut samples = claims.sample_total(RngStream::new(8, 4), 100_000);
        exec::sort(&mut samples);
        let l0: f64 = s2_provisions(&claims, &market, &params).iter().sum();
        for omega in [0.0, 0.061, 0.3, 1.0] {
            let a = Allocation::new(omega).unwrap();
            let cap = target_capital_sorted(&samples, &market, a, l0, &params, 0.01).unwrap();
            let at = ruin_probability_sorted(&samples, &market, a, l0 + cap);
            assert!(at <= params.ruin_tail() + 1e-15, "omega {omega}: ruin {at}");
            if cap > 0.0 {
                let just_below = ruin_probability_sorted(&samples, &market, a, l0 + cap - 0.011);
                assert!(
                    just_below > params.ruin_tail(),
                    "omega {omega}: capital not minimal ({just_below})"
                );
            }
        }
    }

    #[test]
    fn curve_runs_on_common_samples_and_respects_grid_order(){
        let claims = reference_claims();
        let market = reference_market();
        let params = RegimeParams::default();
        let samples = claims.sample_total(RngStream::new(9, 5), 20_000);
        let l0: f64 = s2_provisions(&claims, &market, &params).iter().sum();
        let grid = [0.0, 0.05, 0.1, 1.0];
        let curve = target_capital_curve(&samples, &market, l0, &params, &grid, 0.01).unwrap();
        assert_eq!(curve.len(), 4);
        for ((w, _), expect) in curve.iter().zip(grid) {
            assert_eq!(*w, expect);
        }
        // identical inputs reproduce identical capitals
        let again = target_capital_curve(&samples, &market, l0, &params, &grid, 0.01).unwrap();
        assert_eq!(curve, again);
        // grid outside [0,1] is rejected
        assert!(target_capital_curve(&samples, &market, l0, &params, &[1.5], 0.01).is_err());
    }
}
