//! The allocation criterion: expected economic equity per unit of required
//! capital, its ruin-probability companion, and the one-dimensional studies
//! that sweep and refine the risky-asset weight under each regime.
//!
//! Every study evaluates its whole grid against one fixed claim-sample set
//! and one fixed asset-sample set (common random numbers), then refines the
//! best bracket by golden section on the same final-resolution samples.

use crate::assets::{Allocation, MarketModel};
use crate::claims::ClaimsModel;
use crate::regimes::{
    french_balance_sheet, ruin_probability_sorted, s2_provisions, target_capital_sorted, Regime,
    RegimeParams,
};
use crate::stochastic::RngStream;
use crate::{exec, Error, Result};

/// Substream roles inside a study stream.
const ASSETS_CURVE: u64 = 0;
const CLAIMS_CURVE: u64 = 1;
const ASSETS_FINAL: u64 = 2;
const CLAIMS_FINAL: u64 = 3;

/// Monte Carlo budget of a study: path counts for the grid sweep and the
/// final optimum confirmation, plus the capital-solver tolerance.
#[derive(Debug, Clone, Copy)]
pub struct StudyBudget {
    pub n_paths_curve: u64,
    pub n_paths_final: u64,
    pub capital_tol: f64,
}

/// One evaluated allocation: the objective (economic equity over required
/// capital), the capital backing it, the ruin probability and the economic
/// equity itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveSample {
    pub omega1: f64,
    pub objective: f64,
    pub capital: f64,
    pub ruin_prob: f64,
    pub economic_equity: f64,
}

/// One bracketing step of the golden-section refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

/// Grid sweep plus refined optimum for one regime.
#[derive(Debug, Clone)]
pub struct AllocationStudy {
    pub regime: Regime,
    pub grid: Vec<ObjectiveSample>,
    pub optimum: ObjectiveSample,
    pub refinement: Vec<Bracket>,
}

/// Golden-section search for the maximum of a unimodal function on
/// [lo, hi]. Returns the bracket midpoint at tolerance `tol` and the trace
/// of brackets visited. Derivative-free, so Monte Carlo noise frozen by
/// common random numbers cannot destabilize it.
pub fn golden_section_max<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> (f64, Vec<Bracket>) {
    assert!(lo <= hi && tol > 0.0);
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut trace = Vec::new();
    let (mut a, mut b) = (lo, hi);
    if b - a <= tol {
        return (0.5 * (a + b), trace);
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        trace.push(Bracket { lo: a, hi: b });
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    (0.5 * (a + b), trace)
}

/// E[claims] * E[1/(portfolio return)], the economic provision of a claim
/// stream with the given mean. The all-bond case needs no sampling:
/// the result is exactly `claims_mean * exp(-r t)`.
pub fn discounted_liability_mean(
    claims_mean: f64,
    market: &MarketModel,
    a: Allocation,
    n_paths: u64,
    stream: RngStream,
) -> f64 {
    claims_mean * inverse_return_mean_sampled(market, a, n_paths, stream)
}

fn inverse_return_mean_sampled(
    market: &MarketModel,
    a: Allocation,
    n_paths: u64,
    stream: RngStream,
) -> f64 {
    if a.omega1() == 0.0 {
        return (-market.riskless_rate() * market.horizon()).exp();
    }
    let assets = market.sample_risky_paths(stream, n_paths);
    inverse_return_mean(&assets, market, a.omega1())
}

/// Mean of 1/(omega1 A + (1-omega1) e^{rt}) over a fixed asset sample.
fn inverse_return_mean(assets: &[f64], market: &MarketModel, omega1: f64) -> f64 {
    if omega1 == 0.0 {
        return (-market.riskless_rate() * market.horizon()).exp();
    }
    let bond_leg = (1.0 - omega1) * market.bond_value();
    exec::block_sum(assets, |a1| 1.0 / (omega1 * a1 + bond_leg)) / assets.len() as f64
}

/// One-period ruin probability at the given allocation and opening assets,
/// by the hybrid estimator: empirical mean over claim samples of the exact
/// conditional asset-shortfall probability.
pub fn ruin_probability(
    claims_samples: &[f64],
    market: &MarketModel,
    a: Allocation,
    total_assets: f64,
) -> Result<f64> {
    if claims_samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if total_assets.is_nan() || total_assets <= 0.0 {
        return Err(Error::invalid(
            "total_assets",
            format!("must be > 0, got {total_assets}"),
        ));
    }
    let mut sorted = claims_samples.to_vec();
    exec::sort(&mut sorted);
    Ok(ruin_probability_sorted(&sorted, market, a, total_assets))
}

/// French-regime study: the capital is allocation-free, so the objective
/// reduces to minimizing E[1/(portfolio return)] (equivalently maximizing
/// the equity-over-capital ratio reported here). The grid is swept on
/// curve-resolution samples; the optimum is refined by golden section and
/// re-evaluated on final-resolution samples.
pub fn french_objective_curve(
    claims: &ClaimsModel,
    market: &MarketModel,
    params: &RegimeParams,
    grid: &[f64],
    stream: RngStream,
    budget: StudyBudget,
) -> Result<AllocationStudy> {
    validate_grid(grid)?;
    let bilan = french_balance_sheet(claims, params);
    let capital = bilan.required_capital;
    let total = bilan.total();
    let expected = claims.expected_total();

    let assets_curve = market.sample_risky_paths(stream.substream(ASSETS_CURVE), budget.n_paths_curve);
    let claims_curve = sorted_totals(claims, stream.substream(CLAIMS_CURVE), budget.n_paths_curve);

    let point = |assets: &[f64], claims_sorted: &[f64], omega1: f64| -> ObjectiveSample {
        let einv = inverse_return_mean(assets, market, omega1);
        let equity = total - expected * einv;
        let a = Allocation::new(omega1).expect("validated grid");
        ObjectiveSample {
            omega1,
            objective: equity / capital,
            capital,
            ruin_prob: ruin_probability_sorted(claims_sorted, market, a, total),
            economic_equity: equity,
        }
    };

    let grid_samples: Vec<ObjectiveSample> = exec::map_indices(grid.len() as u64, |i| {
        point(&assets_curve, &claims_curve, grid[i as usize])
    });

    let assets_final = market.sample_risky_paths(stream.substream(ASSETS_FINAL), budget.n_paths_final);
    let claims_final = sorted_totals(claims, stream.substream(CLAIMS_FINAL), budget.n_paths_final);

    // Refinement maximizes the final-resolution objective; capital is
    // constant, so only the inverse-return mean matters.
    let objective_final =
        |omega1: f64| (total - expected * inverse_return_mean(&assets_final, market, omega1)) / capital;
    let (optimum, refinement) =
        refine_optimum(&grid_samples, grid, objective_final, |omega1| {
            point(&assets_final, &claims_final, omega1)
        });

    Ok(AllocationStudy { regime: Regime::French, grid: grid_samples, optimum, refinement })
}

/// Solvency-2-style objective at one allocation: provisions minus economic
/// provision in the numerator, the target capital at this allocation in the
/// denominator. Reported in the equity-over-capital form, which is the
/// excess-value ratio plus one; the constant shift cannot move the argmax.
/// Asset paths are drawn from `stream`; claim samples are supplied by the
/// caller so a whole grid can share them.
#[allow(clippy::too_many_arguments)]
pub fn s2_objective(
    claims: &ClaimsModel,
    market: &MarketModel,
    params: &RegimeParams,
    a: Allocation,
    claims_samples: &[f64],
    stream: RngStream,
    n_asset_paths: u64,
    capital_tol: f64,
) -> Result<ObjectiveSample> {
    if claims_samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let l0: f64 = s2_provisions(claims, market, params).iter().sum();
    let mut sorted = claims_samples.to_vec();
    exec::sort(&mut sorted);
    let einv = inverse_return_mean_sampled(market, a, n_asset_paths, stream);
    s2_point(claims, market, params, &sorted, l0, einv, a.omega1(), capital_tol)
}

#[allow(clippy::too_many_arguments)]
fn s2_point(
    claims: &ClaimsModel,
    market: &MarketModel,
    params: &RegimeParams,
    claims_sorted: &[f64],
    l0: f64,
    einv: f64,
    omega1: f64,
    capital_tol: f64,
) -> Result<ObjectiveSample> {
    let a = Allocation::new(omega1)?;
    let capital = target_capital_sorted(claims_sorted, market, a, l0, params, capital_tol)?;
    let excess = l0 - claims.expected_total() * einv;
    Ok(ObjectiveSample {
        omega1,
        objective: 1.0 + excess / capital,
        capital,
        ruin_prob: params.ruin_tail(),
        economic_equity: capital + excess,
    })
}

/// Joint capital/allocation study under the Solvency-2-style regime: sweep
/// the grid on curve-resolution common samples, then golden-refine and
/// confirm the optimum on final-resolution samples. Returns the pair
/// (omega1*, target capital at omega1*) inside `optimum`.
pub fn s2_optimize(
    claims: &ClaimsModel,
    market: &MarketModel,
    params: &RegimeParams,
    grid: &[f64],
    stream: RngStream,
    budget: StudyBudget,
) -> Result<AllocationStudy> {
    validate_grid(grid)?;
    let l0: f64 = s2_provisions(claims, market, params).iter().sum();

    let assets_curve = market.sample_risky_paths(stream.substream(ASSETS_CURVE), budget.n_paths_curve);
    let claims_curve = sorted_totals(claims, stream.substream(CLAIMS_CURVE), budget.n_paths_curve);

    let grid_results: Vec<Result<ObjectiveSample>> = exec::map_indices(grid.len() as u64, |i| {
        let omega1 = grid[i as usize];
        let einv = inverse_return_mean(&assets_curve, market, omega1);
        s2_point(claims, market, params, &claims_curve, l0, einv, omega1, budget.capital_tol)
    });
    let grid_samples: Vec<ObjectiveSample> = grid_results.into_iter().collect::<Result<_>>()?;

    let assets_final = market.sample_risky_paths(stream.substream(ASSETS_FINAL), budget.n_paths_final);
    let claims_final = sorted_totals(claims, stream.substream(CLAIMS_FINAL), budget.n_paths_final);

    let objective_final = |omega1: f64| {
        let einv = inverse_return_mean(&assets_final, market, omega1);
        s2_point(claims, market, params, &claims_final, l0, einv, omega1, budget.capital_tol)
            .map(|s| s.objective)
            .unwrap_or(f64::NEG_INFINITY)
    };
    let (optimum, refinement) = refine_optimum(&grid_samples, grid, objective_final, |omega1| {
        let einv = inverse_return_mean(&assets_final, market, omega1);
        s2_point(claims, market, params, &claims_final, l0, einv, omega1, budget.capital_tol)
            .expect("feasible optimum")
    });

    Ok(AllocationStudy { regime: Regime::Solvency2, grid: grid_samples, optimum, refinement })
}

/// Pointwise ratio of target capitals (with jumps over without) on common
/// claim samples. The two markets must differ only in their jump
/// parameters. Identical capitals short-circuit to a ratio of exactly 1,
/// which in particular pins the all-bond point to 1.
#[allow(clippy::too_many_arguments)]
pub fn capital_ratio_curve(
    claims: &ClaimsModel,
    market_jumps: &MarketModel,
    market_nojumps: &MarketModel,
    params: &RegimeParams,
    grid: &[f64],
    stream: RngStream,
    n_paths: u64,
    capital_tol: f64,
) -> Result<Vec<(f64, f64)>> {
    validate_grid(grid)?;
    if market_jumps.riskless_rate() != market_nojumps.riskless_rate()
        || market_jumps.horizon() != market_nojumps.horizon()
        || market_jumps.risky().mu() != market_nojumps.risky().mu()
        || market_jumps.risky().sigma() != market_nojumps.risky().sigma()
    {
        return Err(Error::invalid(
            "market_nojumps",
            "must match market_jumps in everything but jump parameters",
        ));
    }
    let l0: f64 = s2_provisions(claims, market_jumps, params).iter().sum();
    let claims_sorted = sorted_totals(claims, stream.substream(CLAIMS_CURVE), n_paths);

    let ratios: Vec<Result<(f64, f64)>> = exec::map_indices(grid.len() as u64, |i| {
        let omega1 = grid[i as usize];
        let a = Allocation::new(omega1)?;
        let with_jumps =
            target_capital_sorted(&claims_sorted, market_jumps, a, l0, params, capital_tol)?;
        let without =
            target_capital_sorted(&claims_sorted, market_nojumps, a, l0, params, capital_tol)?;
        let ratio = if with_jumps == without { 1.0 } else { with_jumps / without };
        Ok((omega1, ratio))
    });
    ratios.into_iter().collect()
}

fn sorted_totals(claims: &ClaimsModel, stream: RngStream, n_paths: u64) -> Vec<f64> {
    let mut totals = claims.sample_total(stream, n_paths);
    exec::sort(&mut totals);
    totals
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "must contain at least one allocation"));
    }
    for &w in grid {
        Allocation::new(w)?;
    }
    Ok(())
}

/// Golden-refine around the best grid point, then pick the best of the
/// refined midpoint, the bracket edges and the best grid point — so exact
/// boundary optima (all-bond, all-risky) are returned exactly.
fn refine_optimum(
    grid_samples: &[ObjectiveSample],
    grid: &[f64],
    mut objective: impl FnMut(f64) -> f64,
    evaluate: impl Fn(f64) -> ObjectiveSample,
) -> (ObjectiveSample, Vec<Bracket>) {
    let best = argmax(grid_samples);
    let lo = grid[best.saturating_sub(2)];
    let hi = grid[(best + 2).min(grid.len() - 1)];
    let (mid, trace) = golden_section_max(&mut objective, lo, hi, 1e-4);

    let mut candidates = vec![mid, lo, hi, grid[best]];
    candidates.dedup_by(|a, b| a == b);
    let winner = candidates
        .into_iter()
        .map(|w| (w, objective(w)))
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(w, _)| w)
        .expect("non-empty candidate set");
    (evaluate(winner), trace)
}

fn argmax(samples: &[ObjectiveSample]) -> usize {
    let mut best = 0;
    for (i, s) in samples.iter().enumerate() {
        if s.objective > samples[best].objective {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets::JumpDiffusionParams;
    use crate::claims::{FrankCopula, LognormalMarginal};

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

    fn small_budget() -> StudyBudget {
        StudyBudget { n_paths_curve: 20_000, n_paths_final: 40_000, capital_tol: 0.01 }
    }

    #[test]
    fn golden_section_finds_quadratic_maximum() {
        let (x, trace) = golden_section_max(|x| -(x - 2.0) * (x - 2.0) + 1.0, 0.0, 4.0, 1e-6);
        assert!((x - 2.0).abs() < 1e-4);
        assert!(!trace.is_empty());
        // brackets shrink monotonically
        for w in trace.windows(2) {
            assert!(w[1].hi - w[1].lo < w[0].hi - w[0].lo);
        }
    }

    #[test]
    fn golden_section_is_affine_invariant() {
        let f = |x: f64| -(x - 1.3) * (x - 1.3);
        let (x1, _) = golden_section_max(f, 0.0, 3.0, 1e-5);
        let (x2, _) = golden_section_max(|x| 2.0 * f(x) + 1.0, 0.0, 3.0, 1e-5);
        // rounding on near-tie comparisons can move the argmax by at most
        // the solver tolerance
        assert!((x1 - x2).abs() <= 2e-5);
    }

    #[test]
    fn discounted_liability_all_bond_is_exact() {
        let market = reference_market();
        let got = discounted_liability_mean(
            200.0,
            &market,
            Allocation::new(0.0).unwrap(),
            1000,
            RngStream::new(1, 0),
        );
        assert_eq!(got, 200.0 * (-0.0344f64).exp());
    }

    #[test]
    fn discounted_liability_all_risky_matches_moment() {
        let market = reference_market();
        let got = discounted_liability_mean(
            200.0,
            &market,
            Allocation::new(1.0).unwrap(),
            1_000_000,
            RngStream::new(42, 6),
        );
        let closed = 200.0 * market.power_moment(-1.0);
        assert!((got - closed).abs() < 0.3, "MC {got} vs closed {closed}");
    }

    #[test]
    fn jensen_inequality_holds_on_every_allocation() {
        let market = reference_market();
        let assets = market.sample_risky_paths(RngStream::new(2, 2), 100_000);
        let mean_a = assets.iter().sum::<f64>() / assets.len() as f64;
        for i in 0..=20 {
            let w = i as f64 / 20.0;
            let einv = inverse_return_mean(&assets, &market, w);
            let mean_r = w * mean_a + (1.0 - w) * market.bond_value();
            assert!(
                einv >= 1.0 / mean_r - 1e-12,
                "Jensen violated at omega {w}: {einv} < {}",
                1.0 / mean_r
            );
        }
    }

    #[test]
    fn ruin_probability_validates_and_vanishes_for_rich_insurers() {
        let market = reference_market();
        let claims = reference_claims();
        let samples = claims.sample_total(RngStream::new(3, 3), 10_000);
        let a = Allocation::new(0.3).unwrap();
        assert!(ruin_probability(&[], &market, a, 100.0).is_err());
        assert!(ruin_probability(&samples, &market, a, 0.0).is_err());
        let huge = ruin_probability(&samples, &market, a, 1e9).unwrap();
        assert!(huge < 1e-12, "ruin with enormous assets: {huge}");
        let tiny = ruin_probability(&samples, &market, a, 1.0).unwrap();
        assert!(tiny > 0.999);
    }

    #[test]
    fn french_study_boundary_case_all_bond() {
        // mu <= r: everything goes to the bond and the optimum is exactly 0
        let market = MarketModel::new(
            JumpDiffusionParams::new(0.02, 0.15, 0.5, 0.2).unwrap(),
            0.0344,
            1.0,
        )
        .unwrap();
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let study = french_objective_curve(
            &reference_claims(),
            &market,
            &RegimeParams::default(),
            &grid,
            RngStream::new(4, 4),
            small_budget(),
        )
        .unwrap();
        assert_eq!(study.optimum.omega1, 0.0);
        assert_eq!(study.regime, Regime::French);
    }

    #[test]
    fn french_study_interior_optimum_and_convexity() {
        let grid: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
        let study = french_objective_curve(
            &reference_claims(),
            &reference_market(),
            &RegimeParams::default(),
            &grid,
            RngStream::new(5, 5),
            small_budget(),
        )
        .unwrap();
        // capital is the solvency margin everywhere
        for s in &study.grid {
            assert!((s.capital - 41.4).abs() < 1e-9);
        }
        // interior optimum at these parameters
        assert!(study.optimum.omega1 > 0.0 && study.optimum.omega1 < 1.0);
        // grid runs on curve samples, the optimum on final samples, so the
        // comparison carries Monte Carlo noise at this small budget
        assert!(
            study.optimum.objective
                >= study.grid.iter().map(|s| s.objective).fold(f64::MIN, f64::max) - 0.01
        );
        // E[1/R] curve convex up to Monte Carlo noise <=> objective concave
        let obj: Vec<f64> = study.grid.iter().map(|s| s.objective).collect();
        for w in obj.windows(3) {
            let second_diff = w[2] - 2.0 * w[1] + w[0];
            assert!(second_diff < 1e-4, "objective second difference {second_diff}");
        }
    }

    #[test]
    fn s2_objective_all_bond_reduces_to_closed_numerator() {
        let claims = reference_claims();
        let market = reference_market();
        let params = RegimeParams::default();
        let samples = claims.sample_total(RngStream::new(6, 6), 50_000);
        let s = s2_objective(
            &claims,
            &market,
            &params,
            Allocation::new(0.0).unwrap(),
            &samples,
            RngStream::new(6, 7),
            1000,
            0.005,
        )
        .unwrap();
        let l0: f64 = s2_provisions(&claims, &market, &params).iter().sum();
        let numerator = l0 - claims.expected_total() * (-0.0344f64).exp();
        assert!(((s.objective - 1.0) * s.capital - numerator).abs() < 1e-9);
        assert_eq!(s.ruin_prob, params.ruin_tail());
    }

    #[test]
    fn s2_objective_shift_does_not_move_the_argmax() {
        // the equity-over-capital and excess-value objectives differ by a
        // constant, so their grid argmaxes must coincide
        let claims = reference_claims();
        let market = reference_market();
        let params = RegimeParams::default();
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.04).collect();
        let study = s2_optimize(
            &claims,
            &market,
            &params,
            &grid,
            RngStream::new(7, 7),
            small_budget(),
        )
        .unwrap();
        let by_ratio = argmax(&study.grid);
        let shifted: Vec<ObjectiveSample> = study
            .grid
            .iter()
            .map(|s| ObjectiveSample { objective: s.objective - 1.0, ..*s })
            .collect();
        assert_eq!(by_ratio, argmax(&shifted));
    }

    #[test]
    fn s2_study_reports_joint_pair() {
        let claims = reference_claims();
        let market = reference_market();
        let grid: Vec<f64> = (0..=12).map(|i| i as f64 * 0.025).collect();
        let study = s2_optimize(
            &claims,
            &market,
            &RegimeParams::default(),
            &grid,
            RngStream::new(8, 8),
            small_budget(),
        )
        .unwrap();
        assert_eq!(study.regime, Regime::Solvency2);
        assert!(study.optimum.capital > 0.0);
        // curve-vs-final sample noise; see the French study test
        assert!(
            study.optimum.objective
                >= study.grid.iter().map(|s| s.objective).fold(f64::MIN, f64::max) - 0.02
        );
        // ruin at the optimum is pinned to the tail by construction
        assert_eq!(study.optimum.ruin_prob, RegimeParams::default().ruin_tail());
    }

    #[test]
    fn jumps_reduce_the_optimal_risky_weight() {
        // same seed, same claims: removing the jumps must raise the optimum
        let claims = reference_claims();
        let params = RegimeParams::default();
        let nojumps = MarketModel::new(
            JumpDiffusionParams::new(0.06, 0.15, 0.5, 0.0).unwrap(),
            0.0344,
            1.0,
        )
        .unwrap();
        let grid: Vec<f64> = (0..=25).map(|i| i as f64 * 0.02).collect();
        let stream = RngStream::new(10, 10);
        let with_jumps =
            s2_optimize(&claims, &reference_market(), &params, &grid, stream, small_budget())
                .unwrap();
        let without_jumps =
            s2_optimize(&claims, &nojumps, &params, &grid, stream, small_budget()).unwrap();
        assert!(
            with_jumps.optimum.omega1 < without_jumps.optimum.omega1,
            "jump optimum {} must undercut the no-jump optimum {}",
            with_jumps.optimum.omega1,
            without_jumps.optimum.omega1
        );
    }

    #[test]
    fn capital_ratio_is_one_at_the_bond_point_and_validates_markets() {
        let claims = reference_claims();
        let jumps = reference_market();
        let nojumps = MarketModel::new(
            JumpDiffusionParams::new(0.06, 0.15, 0.5, 0.0).unwrap(),
            0.0344,
            1.0,
        )
        .unwrap();
        let curve = capital_ratio_curve(
            &claims,
            &jumps,
            &nojumps,
            &RegimeParams::default(),
            &[0.0, 0.5, 1.0],
            RngStream::new(9, 9),
            20_000,
            0.01,
        )
        .unwrap();
        assert_eq!(curve[0], (0.0, 1.0));
        assert!(curve[2].1 > 1.0);

        let drifted = MarketModel::new(
            JumpDiffusionParams::new(0.07, 0.15, 0.5, 0.0).unwrap(),
            0.0344,
            1.0,
        )
        .unwrap();
        assert!(capital_ratio_curve(
            &claims,
            &jumps,
            &drifted,
            &RegimeParams::default(),
            &[0.0],
            RngStream::new(9, 9),
            1000,
            0.01,
        )
        .is_err());
    }
}
