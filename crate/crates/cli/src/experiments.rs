//! The named experiments: each produces a report, curve experiments also a
//! CSV. All engine calls are seeded from the scenario; file writes happen
//! sequentially here after the parallel compute finishes.

use std::path::PathBuf;

use mfpe_core::assets::{Allocation, MarketModel};
use mfpe_core::claims::ClaimsModel;
use mfpe_core::mfpe::{
    capital_ratio_curve, french_objective_curve, golden_section_max, ruin_probability,
    s2_optimize, AllocationStudy, StudyBudget,
};
use mfpe_core::regimes::{
    french_balance_sheet, s2_provisions, target_capital, target_capital_curve, RegimeParams,
};
use mfpe_core::stochastic::RngStream;

use crate::config::ScenarioConfig;
use crate::output::{write_csv, write_report};
use crate::CliError;

/// Stream roles. Studies derive their own substreams internally; the two
/// MFPE studies share one role so the jump and no-jump variants run on
/// identical seeds (common random numbers across markets).
const STREAM_FRENCH_STUDY: u64 = 0;
const STREAM_S2_STUDY: u64 = 1;
const STREAM_RATIO: u64 = 2;
const STREAM_RUIN_CLAIMS: u64 = 3;
const STREAM_CURVE_CLAIMS: u64 = 4;
const STREAM_FINAL_CLAIMS: u64 = 5;
const STREAM_SE_PROBE: u64 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Experiment {
    FrenchBilan,
    FrenchMfpe,
    FrenchRuin,
    S2Bilan,
    S2CapitalCurve,
    S2Mfpe,
    NojumpCapitalCurve,
    CapitalRatio,
    NojumpMfpe,
    All,
}

impl Experiment {
    pub fn file_stem(&self) -> &'static str {
        match self {
            Experiment::FrenchBilan => "french-bilan",
            Experiment::FrenchMfpe => "french-mfpe",
            Experiment::FrenchRuin => "french-ruin",
            Experiment::S2Bilan => "s2-bilan",
            Experiment::S2CapitalCurve => "s2-capital-curve",
            Experiment::S2Mfpe => "s2-mfpe",
            Experiment::NojumpCapitalCurve => "nojump-capital-curve",
            Experiment::CapitalRatio => "capital-ratio",
            Experiment::NojumpMfpe => "nojump-mfpe",
            Experiment::All => "all",
        }
    }
}

pub struct Context {
    pub config: ScenarioConfig,
    pub claims: ClaimsModel,
    pub market: MarketModel,
    pub nojump_market: MarketModel,
    pub params: RegimeParams,
    pub out_dir: PathBuf,
}

impl Context {
    pub fn new(config: ScenarioConfig, out_dir: PathBuf) -> Self {
        let (claims, market, params) = config.build_models();
        let nojump_market = config.build_nojump_market();
        Context { config, claims, market, nojump_market, params, out_dir }
    }

    fn seed(&self) -> u64 {
        self.config.simulation.seed
    }

    fn stream(&self, role: u64) -> RngStream {
        RngStream::new(self.seed(), role)
    }

    fn budget(&self) -> StudyBudget {
        StudyBudget {
            n_paths_curve: self.config.simulation.n_paths_curve,
            n_paths_final: self.config.simulation.n_paths_final,
            capital_tol: self.config.simulation.capital_tol,
        }
    }

    fn csv_path(&self, exp: Experiment) -> PathBuf {
        self.out_dir.join(format!("{}.csv", exp.file_stem()))
    }

    fn report_path(&self, exp: Experiment) -> PathBuf {
        self.out_dir.join(format!("{}-report.txt", exp.file_stem()))
    }

    fn report_header(&self, exp: Experiment) -> Vec<String> {
        let sim = &self.config.simulation;
        vec![
            format!("experiment: {}", exp.file_stem()),
            format!("seed: {}", sim.seed),
            format!("paths (curves): {}", sim.n_paths_curve),
            format!("paths (final optima): {}", sim.n_paths_final),
            format!("grid step: {}", sim.grid_step),
            format!("capital solver tolerance: {}", sim.capital_tol),
            String::new(),
        ]
    }

    /// Sampling standard error of the E[1/R] estimator at the final path
    /// count, from a 100k-path probe of the return distribution.
    fn inverse_return_se(&self, market: &MarketModel, omega1: f64) -> f64 {
        if omega1 == 0.0 {
            return 0.0;
        }
        let n_probe = 100_000u64;
        let assets = market.sample_risky_paths(self.stream(STREAM_SE_PROBE), n_probe);
        let bond_leg = (1.0 - omega1) * market.bond_value();
        let inv: Vec<f64> = assets.iter().map(|&a| 1.0 / (omega1 * a + bond_leg)).collect();
        let mean = inv.iter().sum::<f64>() / inv.len() as f64;
        let var = inv.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (inv.len() - 1) as f64;
        (var / self.config.simulation.n_paths_final as f64).sqrt()
    }

    /// Conservative bound on the hybrid ruin estimator's standard error.
    fn ruin_se_bound(&self, p: f64, n: u64) -> f64 {
        (p * (1.0 - p) / n as f64).sqrt()
    }
}

pub fn run_experiment(ctx: &Context, exp: Experiment) -> Result<(), CliError> {
    std::fs::create_dir_all(&ctx.out_dir).map_err(|e| CliError::io(&ctx.out_dir, e))?;
    match exp {
        Experiment::FrenchBilan => french_bilan(ctx),
        Experiment::FrenchMfpe => {
            let study = run_french_study(ctx)?;
            write_french_mfpe(ctx, &study)
        }
        Experiment::FrenchRuin => french_ruin(ctx),
        Experiment::S2Bilan => {
            let study = run_s2_study(ctx, &ctx.market)?;
            write_s2_bilan(ctx, &study)
        }
        Experiment::S2Mfpe => {
            let study = run_s2_study(ctx, &ctx.market)?;
            write_mfpe_study(ctx, &study, Experiment::S2Mfpe)
        }
        Experiment::NojumpMfpe => {
            let study = run_s2_study(ctx, &ctx.nojump_market)?;
            write_mfpe_study(ctx, &study, Experiment::NojumpMfpe)
        }
        Experiment::S2CapitalCurve => capital_curve(ctx, &ctx.market, Experiment::S2CapitalCurve),
        Experiment::NojumpCapitalCurve => {
            capital_curve(ctx, &ctx.nojump_market, Experiment::NojumpCapitalCurve)
        }
        Experiment::CapitalRatio => capital_ratio(ctx),
        Experiment::All => {
            french_bilan(ctx)?;
            let french = run_french_study(ctx)?;
            write_french_mfpe(ctx, &french)?;
            french_ruin(ctx)?;
            let s2 = run_s2_study(ctx, &ctx.market)?;
            write_s2_bilan(ctx, &s2)?;
            write_mfpe_study(ctx, &s2, Experiment::S2Mfpe)?;
            capital_curve(ctx, &ctx.market, Experiment::S2CapitalCurve)?;
            capital_curve(ctx, &ctx.nojump_market, Experiment::NojumpCapitalCurve)?;
            capital_ratio(ctx)?;
            let nojump = run_s2_study(ctx, &ctx.nojump_market)?;
            write_mfpe_study(ctx, &nojump, Experiment::NojumpMfpe)
        }
    }
}

fn french_bilan(ctx: &Context) -> Result<(), CliError> {
    let exp = Experiment::FrenchBilan;
    let bilan = french_balance_sheet(&ctx.claims, &ctx.params);
    let mut lines = ctx.report_header(exp);
    lines.push("balance sheet (French regime, closed form -- no Monte Carlo error)".to_string());
    lines.push(format!("  provisions branch 1 (L0_1): {:.6}", bilan.provisions_by_branch[0]));
    lines.push(format!("  provisions branch 2 (L0_2): {:.6}", bilan.provisions_by_branch[1]));
    lines.push(format!("  provisions total (L0):      {:.6}", bilan.provisions_total));
    lines.push(format!("  required capital (E0):      {:.6}", bilan.required_capital));
    lines.push(format!("  total liabilities (E0+L0):  {:.6}", bilan.total()));
    write_report(&ctx.report_path(exp), &lines).map_err(|e| CliError::io(&ctx.report_path(exp), e))
}

fn run_french_study(ctx: &Context) -> Result<AllocationStudy, CliError> {
    french_objective_curve(
        &ctx.claims,
        &ctx.market,
        &ctx.params,
        &ctx.config.omega_grid(),
        ctx.stream(STREAM_FRENCH_STUDY),
        ctx.budget(),
    )
    .map_err(CliError::engine)
}

fn write_french_mfpe(ctx: &Context, study: &AllocationStudy) -> Result<(), CliError> {
    let exp = Experiment::FrenchMfpe;
    let bilan = french_balance_sheet(&ctx.claims, &ctx.params);
    let l0 = bilan.provisions_total;
    let total = bilan.total();
    // value column: economic provision as a fraction of the registered one
    let rows: Vec<Vec<f64>> = study
        .grid
        .iter()
        .map(|s| vec![s.omega1, (total - s.economic_equity) / l0, s.capital, s.ruin_prob])
        .collect();
    write_csv(&ctx.csv_path(exp), "omega1,value,capital,ruin_prob", &rows)
        .map_err(|e| CliError::io(&ctx.csv_path(exp), e))?;

    let best = &study.optimum;
    let econ_provision = total - best.economic_equity;
    let se = ctx.inverse_return_se(&ctx.market, best.omega1) * ctx.claims.expected_total();
    let mut lines = ctx.report_header(exp);
    lines.push("French-regime MFPE study (capital is allocation-free)".to_string());
    lines.push(format!("  optimal risky weight (omega1*): {:.6}", best.omega1));
    lines.push(format!("  objective (economic equity / E0): {:.6}", best.objective));
    lines.push(format!("  economic equity: {:.6} (se ~ {:.4})", best.economic_equity, se));
    lines.push(format!(
        "  economic provision: {:.6} = {:.4}% of registered provisions",
        econ_provision,
        100.0 * econ_provision / l0
    ));
    lines.push(format!(
        "  ruin probability at omega1*: {:.6} (se <= {:.6})",
        best.ruin_prob,
        ctx.ruin_se_bound(best.ruin_prob, ctx.config.simulation.n_paths_final)
    ));
    lines.push(format!("  refinement brackets: {}", study.refinement.len()));
    write_report(&ctx.report_path(exp), &lines).map_err(|e| CliError::io(&ctx.report_path(exp), e))
}

fn french_ruin(ctx: &Context) -> Result<(), CliError> {
    let exp = Experiment::FrenchRuin;
    let total = french_balance_sheet(&ctx.claims, &ctx.params).total();
    let n = ctx.config.simulation.n_paths_final;
    let samples = ctx.claims.sample_total(ctx.stream(STREAM_RUIN_CLAIMS), n);
    let ruin_at = |omega: f64| {
        ruin_probability(&samples, &ctx.market, Allocation::new(omega).expect("grid"), total)
            .expect("non-empty samples")
    };
    let grid = ctx.config.omega_grid();
    let curve: Vec<f64> = grid.iter().map(|&w| ruin_at(w)).collect();
    let rows: Vec<Vec<f64>> = grid.iter().zip(&curve).map(|(&w, &p)| vec![w, p]).collect();
    write_csv(&ctx.csv_path(exp), "omega1,value", &rows)
        .map_err(|e| CliError::io(&ctx.csv_path(exp), e))?;

    let best = (0..grid.len()).min_by(|&i, &j| curve[i].total_cmp(&curve[j])).expect("grid");
    let lo = grid[best.saturating_sub(2)];
    let hi = grid[(best + 2).min(grid.len() - 1)];
    let (omega_min, _) = golden_section_max(|w| -ruin_at(w), lo, hi, 1e-4);
    let min_ruin = ruin_at(omega_min).min(curve[best]);

    let mut lines = ctx.report_header(exp);
    lines.push(format!("ruin probability against the French bilan (E0+L0 = {total:.4})"));
    lines.push(format!(
        "  minimum ruin probability: {:.6} at omega1 = {:.6} (se <= {:.6})",
        min_ruin,
        omega_min,
        ctx.ruin_se_bound(min_ruin, n)
    ));
    lines.push(format!("  ruin at omega1 = 0: {:.6}", curve[0]));
    lines.push(format!("  ruin at omega1 = 1: {:.6}", curve[grid.len() - 1]));
    write_report(&ctx.report_path(exp), &lines).map_err(|e| CliError::io(&ctx.report_path(exp), e))
}

fn run_s2_study(ctx: &Context, market: &MarketModel) -> Result<AllocationStudy, CliError> {
    s2_optimize(
        &ctx.claims,
        market,
        &ctx.params,
        &ctx.config.omega_grid(),
        ctx.stream(STREAM_S2_STUDY),
        ctx.budget(),
    )
    .map_err(CliError::engine)
}

fn write_s2_bilan(ctx: &Context, study: &AllocationStudy) -> Result<(), CliError> {
    let exp = Experiment::S2Bilan;
    let provisions = s2_provisions(&ctx.claims, &ctx.market, &ctx.params);
    let l0: f64 = provisions.iter().sum();
    let best = &study.optimum;
    let mut lines = ctx.report_header(exp);
    lines.push("balance sheet (Solvency-2-style regime, at the MFPE optimum)".to_string());
    lines.push(format!("  provisions branch 1 (L0_1): {:.6}  [closed form]", provisions[0]));
    lines.push(format!("  provisions branch 2 (L0_2): {:.6}  [closed form]", provisions[1]));
    lines.push(format!("  provisions total (L0):      {l0:.6}  [closed form]"));
    lines.push(format!("  optimal risky weight (omega1*): {:.6}", best.omega1));
    lines.push(format!(
        "  target capital at omega1* (E0R): {:.6} (solver tolerance {})",
        best.capital, ctx.config.simulation.capital_tol
    ));
    lines.push(format!("  total liabilities (E0R+L0): {:.6}", best.capital + l0));
    lines.push(format!(
        "  ruin probability at the pair: {:.6} by construction",
        best.ruin_prob
    ));
    write_report(&ctx.report_path(exp), &lines).map_err(|e| CliError::io(&ctx.report_path(exp), e))
}

fn write_mfpe_study(ctx: &Context, study: &AllocationStudy, exp: Experiment) -> Result<(), CliError> {
    let market =
        if exp == Experiment::NojumpMfpe { &ctx.nojump_market } else { &ctx.market };
    let rows: Vec<Vec<f64>> = study
        .grid
        .iter()
        .map(|s| vec![s.omega1, s.objective, s.capital, s.ruin_prob])
        .collect();
    write_csv(&ctx.csv_path(exp), "omega1,value,capital,ruin_prob", &rows)
        .map_err(|e| CliError::io(&ctx.csv_path(exp), e))?;

    let best = &study.optimum;
    let se = ctx.inverse_return_se(market, best.omega1) * ctx.claims.expected_total();
    let mut lines = ctx.report_header(exp);
    lines.push("Solvency-2-style MFPE study (joint capital/allocation)".to_string());
    lines.push(format!("  optimal risky weight (omega1*): {:.6}", best.omega1));
    lines.push(format!(
        "  target capital at omega1* (E0R): {:.6} (solver tolerance {})",
        best.capital, ctx.config.simulation.capital_tol
    ));
    lines.push(format!(
        "  objective: {:.6} (equity/capital form), {:.6} (excess form)",
        best.objective,
        best.objective - 1.0
    ));
    lines.push(format!(
        "  firm value (economic equity): {:.6} (se ~ {:.4})",
        best.economic_equity, se
    ));
    lines.push(format!("  ruin probability at the pair: {:.6} by construction", best.ruin_prob));
    lines.push(format!("  refinement brackets: {}", study.refinement.len()));
    write_report(&ctx.report_path(exp), &lines).map_err(|e| CliError::io(&ctx.report_path(exp), e))
}

fn capital_curve(ctx: &Context, market: &MarketModel, exp: Experiment) -> Result<(), CliError> {
    let l0: f64 = s2_provisions(&ctx.claims, market, &ctx.params).iter().sum();
    let tol = ctx.config.simulation.capital_tol;
    let samples =
        ctx.claims.sample_total(ctx.stream(STREAM_CURVE_CLAIMS), ctx.config.simulation.n_paths_curve);
    let curve = target_capital_curve(&samples, market, l0, &ctx.params, &ctx.config.omega_grid(), tol)
        .map_err(CliError::engine)?;
    let rows: Vec<Vec<f64>> = curve.iter().map(|&(w, c)| vec![w, c]).collect();
    write_csv(&ctx.csv_path(exp), "omega1,value", &rows)
        .map_err(|e| CliError::io(&ctx.csv_path(exp), e))?;

    // refine the minimum and the all-risky endpoint at final resolution
    let samples_final =
        ctx.claims.sample_total(ctx.stream(STREAM_FINAL_CLAIMS), ctx.config.simulation.n_paths_final);
    let capital_at = |omega: f64| -> Result<f64, CliError> {
        target_capital(&samples_final, market, Allocation::new(omega).expect("grid"), l0, &ctx.params, tol)
            .map_err(CliError::engine)
    };
    let best = (0..curve.len()).min_by(|&i, &j| curve[i].1.total_cmp(&curve[j].1)).expect("grid");
    let lo = curve[best.saturating_sub(2)].0;
    let hi = curve[(best + 2).min(curve.len() - 1)].0;
    let mut solver_error = None;
    let (omega_min, _) = golden_section_max(
        |w| match capital_at(w) {
            Ok(c) => -c,
            Err(e) => {
                solver_error = Some(e);
                f64::NEG_INFINITY
            }
        },
        lo,
        hi,
        1e-4,
    );
    if let Some(e) = solver_error {
        return Err(e);
    }
    let min_capital = capital_at(omega_min)?;
    let all_risky = capital_at(1.0)?;

    let mut lines = ctx.report_header(exp);
    lines.push("target capital against the risky-asset weight".to_string());
    lines.push(format!(
        "  provisions (L0): {l0:.6}; capital solver tolerance {tol}"
    ));
    lines.push(format!(
        "  curve minimum (final resolution): {min_capital:.6} at omega1 = {omega_min:.6}"
    ));
    lines.push(format!("  capital at omega1 = 0: {:.6}", curve[0].1));
    lines.push(format!(
        "  capital at omega1 = 1: {all_risky:.6}; total liabilities there: {:.6}",
        all_risky + l0
    ));
    write_report(&ctx.report_path(exp), &lines).map_err(|e| CliError::io(&ctx.report_path(exp), e))
}

fn capital_ratio(ctx: &Context) -> Result<(), CliError> {
    let exp = Experiment::CapitalRatio;
    let curve = capital_ratio_curve(
        &ctx.claims,
        &ctx.market,
        &ctx.nojump_market,
        &ctx.params,
        &ctx.config.omega_grid(),
        ctx.stream(STREAM_RATIO),
        ctx.config.simulation.n_paths_curve,
        ctx.config.simulation.capital_tol,
    )
    .map_err(CliError::engine)?;
    let rows: Vec<Vec<f64>> = curve.iter().map(|&(w, r)| vec![w, r]).collect();
    write_csv(&ctx.csv_path(exp), "omega1,value", &rows)
        .map_err(|e| CliError::io(&ctx.csv_path(exp), e))?;

    let mut lines = ctx.report_header(exp);
    lines.push("target-capital ratio: jump-diffusion over no-jump market".to_string());
    lines.push(format!("  ratio at omega1 = 0: {:.10} (forced to 1 by construction)", curve[0].1));
    lines.push(format!("  ratio at omega1 = 1: {:.6}", curve[curve.len() - 1].1));
    write_report(&ctx.report_path(exp), &lines).map_err(|e| CliError::io(&ctx.report_path(exp), e))
}
