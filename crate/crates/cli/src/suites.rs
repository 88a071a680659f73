//! Property suites behind `qtur verify`.
//!
//! Each check records a violation per draw: the amount by which an identity
//! misses or an inequality is broken (negative when it holds with room). A
//! check passes when its worst violation is within its tolerance.

use std::fmt;

use clap::ValueEnum;
use rayon::prelude::*;

use qtur_core::bound::{big_b, f_of, g, h};
use qtur_core::channel::{dpi_margin, fixed_point_bound, KrausChannel};
use qtur_core::montecarlo::saturation_family;
use qtur_core::random::{random_density, random_ensemble, random_observable, substream};
use qtur_core::{
    build_surrogate, cauchy_schwarz_chain, classical_tur, entropy_production, expectation, flux_capacity_relation,
    full_report, qtur_check, relative_entropy, surrogate_kl, symmetric_relative_entropy, tanh_bound,
    trajectory_dual, variance_decomposition, ClassicalEnsemble, DensityMatrixF64, Error, ExtendedReal,
    ThermoProcessF64,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Surrogate,
    Classical,
    Channels,
    Thermo,
    Bounds,
    All,
}

impl Suite {
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Bounds, Suite::Surrogate, Suite::Classical, Suite::Channels, Suite::Thermo],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Surrogate => "surrogate",
            Suite::Classical => "classical",
            Suite::Channels => "channels",
            Suite::Thermo => "thermo",
            Suite::Bounds => "bounds",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
    pub worst: f64,
    pub evaluated: usize,
    pub skipped: usize,
    pub failures: usize,
}

impl Check {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            worst: f64::NEG_INFINITY,
            evaluated: 0,
            skipped: 0,
            failures: 0,
        }
    }

    fn record(&mut self, violation: Option<f64>) {
        let Some(v) = violation else {
            self.skipped += 1;
            return;
        };
        self.evaluated += 1;
        // NaN counts as a failure and poisons the worst value
        if v.is_nan() || v > self.worst {
            self.worst = v;
        }
        if !(v <= self.tolerance) {
            self.failures += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:<50} worst {:>11.3e}  tol {:.0e}  evaluated {}",
            self.name, self.worst, self.tolerance, self.evaluated
        )?;
        if self.skipped > 0 {
            write!(f, "  skipped {}", self.skipped)?;
        }
        if self.failures > 0 {
            write!(f, "  failures {}", self.failures)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.suite.name())?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

/// Evaluates `draw` for every index in parallel and folds the violations
/// into one check per `(name, tolerance)` in `layout`.
fn sweep<F>(draws: usize, layout: &[(&'static str, f64)], draw: F) -> Vec<Check>
where
    F: Fn(u64) -> Vec<Option<f64>> + Sync,
{
    let rows: Vec<Vec<Option<f64>>> = (0..draws as u64).into_par_iter().map(&draw).collect();
    let mut checks: Vec<Check> = layout.iter().map(|&(n, t)| Check::new(n, t)).collect();
    for row in rows {
        debug_assert_eq!(row.len(), checks.len());
        for (c, v) in checks.iter_mut().zip(row) {
            c.record(v);
        }
    }
    checks
}

/// `a - b` relative to `max(1, |b|)`: positive when `a` exceeds `b`.
fn excess(a: f64, b: f64) -> f64 {
    (a - b) / b.abs().max(1.0)
}

fn ext_diff(a: ExtendedReal<f64>, b: ExtendedReal<f64>) -> f64 {
    a.abs_diff(&b)
}

pub fn run_suite(suite: Suite, draws: usize, seed: u64) -> Vec<SuiteReport> {
    suite
        .expand()
        .into_iter()
        .map(|s| {
            let checks = match s {
                Suite::Bounds => bounds(draws),
                Suite::Surrogate => surrogate(draws, seed),
                Suite::Classical => classical(draws, seed),
                Suite::Channels => channels(draws, seed),
                Suite::Thermo => thermo(draws, seed),
                Suite::All => unreachable!("expanded above"),
            };
            SuiteReport { suite: s, checks }
        })
        .collect()
}

/// Roundtrips on a logarithmic grid of `max(draws, 2)` points in `[1e-3, 20]`
/// and the saturating family.
pub fn bounds(draws: usize) -> Vec<Check> {
    let n = draws.max(2);
    let (lo, hi) = (1e-3f64.ln(), 20f64.ln());
    let mut checks = sweep(n, &[("g(h(x)) = x", 1e-10), ("B(f(x)) = x", 1e-10)], |k| {
        let x = (lo + (hi - lo) * k as f64 / (n - 1) as f64).exp();
        let gh = h(x).and_then(g).map(|v| (v - x).abs());
        let bf = f_of(x).and_then(|y| big_b(y.to_scalar())).map(|v| (v - x).abs());
        vec![Some(gh.unwrap_or(f64::NAN)), Some(bf.unwrap_or(f64::NAN))]
    });
    let grid = [0.1, 0.5, 1.0, 2.0, 4.0];
    let mut sat = Check::new("saturating pair: |U - f(S̃)|", 1e-8);
    let mut s_h = Check::new("saturating pair: |S̃ - ε tanh(ε/2)|", 1e-10);
    match saturation_family::<f64>(&grid, 1.0) {
        Ok(points) => {
            for p in points {
                sat.record(Some(p.gap().abs()));
                s_h.record(Some((p.record.s_tilde - p.h_epsilon).abs()));
            }
        }
        Err(_) => {
            sat.record(Some(f64::NAN));
            s_h.record(Some(f64::NAN));
        }
    }
    checks.push(sat);
    checks.push(s_h);
    checks
}

pub fn surrogate(draws: usize, seed: u64) -> Vec<Check> {
    let layout = [
        ("surrogate mean under P = tr(ρθ)", 1e-10),
        ("surrogate mean under Q = tr(σθ)", 1e-10),
        ("tr(ρθ²) ≥ ⟨|Θ|²⟩_P", 1e-9),
        ("tr(σθ²) ≥ ⟨|Θ|²⟩_Q", 1e-9),
        ("U ≥ U_cl", 1e-9),
        ("U_cl ≥ f(S̃)", 1e-9),
        ("D(P|Q) = S(ρ‖σ)", 1e-10),
        ("D̃(P,Q) = S̃(ρ,σ)", 1e-10),
    ];
    sweep(draws, &layout, |k| {
        let mut rng = substream(seed, k);
        let dim = 2 + (k % 3) as usize;
        let mut draw = || -> Result<Vec<Option<f64>>, Error> {
            let rho: DensityMatrixF64 = random_density(dim, &mut rng)?;
            let sigma = random_density(dim, &mut rng)?;
            let theta = random_observable(dim, &mut rng);
            let s = build_surrogate(&rho, &sigma, &theta)?;
            let (mp, mq) = (s.mean_p(), s.mean_q());
            let tp = expectation(&rho, &theta)?;
            let tq = expectation(&sigma, &theta)?;
            let sq = theta.squared();
            let report = match full_report(&rho, &sigma, &theta) {
                Ok(r) => Some(r),
                Err(Error::EqualMeans { .. }) => None,
                Err(e) => return Err(e),
            };
            let (pq, qp) = surrogate_kl(&s);
            Ok(vec![
                Some((mp.re - tp).abs().max(mp.im.abs())),
                Some((mq.re - tq).abs().max(mq.im.abs())),
                Some(s.second_moment_p() - expectation(&rho, &sq)?),
                Some(s.second_moment_q() - expectation(&sigma, &sq)?),
                report
                    .as_ref()
                    .and_then(|r| r.u_classical.map(|c| excess(c, r.u_quantum))),
                report.as_ref().and_then(|r| match (r.u_classical, r.bound) {
                    (Some(c), ExtendedReal::Finite(b)) => Some(excess(b, c)),
                    (Some(_), ExtendedReal::Infinite) => Some(f64::INFINITY),
                    (None, _) => None,
                }),
                Some(ext_diff(pq, relative_entropy(&rho, &sigma)?)),
                Some(ext_diff(ExtendedReal::mean(pq, qp), symmetric_relative_entropy(&rho, &sigma)?)),
            ])
        };
        draw().unwrap_or_else(|_| vec![Some(f64::NAN); layout.len()])
    })
}

pub fn classical(draws: usize, seed: u64) -> Vec<Check> {
    let layout = [
        ("variance identity residual", 1e-12),
        ("Cauchy-Schwarz shift spread", 1e-12),
        ("Cauchy-Schwarz inequality", 1e-12),
        ("contrast ≤ tanh²(g(D̃)/2)", 1e-10),
        ("U ≥ f(D̃)", 1e-9),
    ];
    let mut checks = sweep(draws, &layout, |k| {
        let mut rng = substream(seed, k);
        let size = 2 + (k % 7) as usize;
        let e = random_ensemble::<f64, _>(size, &mut rng);
        let chain = cauchy_schwarz_chain(&e);
        let cs = chain
            .shifted_forms
            .iter()
            .zip(&chain.shifted_bounds)
            .fold(chain.lhs - chain.rhs, |m, (a, b)| m.max(a - b));
        let tb = tanh_bound(&e).map(|(c, t)| c - t).unwrap_or(f64::NAN);
        let tur = match classical_tur(&e) {
            Ok((u, b)) => Some(excess(b.to_scalar(), u)),
            Err(Error::EqualMeans { .. }) => None,
            Err(_) => Some(f64::NAN),
        };
        vec![
            Some(variance_decomposition(&e).residual),
            Some(chain.spread),
            Some(cs),
            Some(tb),
            tur,
        ]
    });
    let mut sat = Check::new("exchange family saturates U = f(D̃)", 1e-9);
    for k in 0..draws.clamp(2, 200) {
        let eps = 0.05 + 7.95 * k as f64 / (draws.clamp(2, 200) - 1) as f64;
        let v = ClassicalEnsemble::exchange_family(eps)
            .and_then(|e| classical_tur(&e))
            .map(|(u, b)| excess(u, b.to_scalar()).abs())
            .unwrap_or(f64::NAN);
        sat.record(Some(v));
    }
    checks.push(sat);
    checks
}

pub fn channels(draws: usize, seed: u64) -> Vec<Check> {
    let mut checks = sweep(draws, &[("S̃ after channel ≤ S̃ before", 1e-10)], |k| {
        let mut rng = substream(seed, k);
        let dim = 2 + (k % 3) as usize;
        let margin = (|| -> Result<f64, Error> {
            let ch = KrausChannel::random(dim, 1 + (k % 4) as usize, &mut rng)?;
            let rho: DensityMatrixF64 = random_density(dim, &mut rng)?;
            let sigma = random_density(dim, &mut rng)?;
            Ok(-dpi_margin(&ch, &rho, &sigma)?.margin())
        })();
        vec![Some(margin.unwrap_or(f64::NAN))]
    });
    let starts = draws.min(100);
    let depol = KrausChannel::depolarizing(2, 0.05).expect("valid probability");
    let damp = KrausChannel::amplitude_damping(0.1).expect("valid probability");
    let mixed = DensityMatrixF64::maximally_mixed(2);
    let ground = DensityMatrixF64::diagonal(&[1.0, 0.0]).expect("valid state");
    let fixed_layout = [
        ("fixed-point bound, depolarizing, 50 steps", 1e-9),
        ("fixed-point bound, amplitude damping, 50 steps", 1e-9),
    ];
    let fixed = sweep(starts, &fixed_layout, |k| {
        let mut rng = substream(seed ^ 0x5EED, k);
        let mut worst = |ch: &KrausChannel<f64>, star: &DensityMatrixF64| -> Result<Option<f64>, Error> {
            let rho0: DensityMatrixF64 = random_density(2, &mut rng)?;
            let theta = random_observable(2, &mut rng);
            let r = fixed_point_bound(ch, &rho0, star, &theta, 50)?;
            let b = r.bound.to_scalar();
            Ok(r.steps
                .iter()
                .filter_map(|s| s.u.map(|u| excess(b, u).max(excess(s.bound_now.to_scalar(), u))))
                .reduce(f64::max))
        };
        vec![
            worst(&depol, &mixed).unwrap_or(Some(f64::NAN)),
            worst(&damp, &ground).unwrap_or(Some(f64::NAN)),
        ]
    });
    checks.extend(fixed);
    checks
}

pub fn thermo(draws: usize, seed: u64) -> Vec<Check> {
    let layout = [
        ("Σ ≥ 0", 1e-10),
        ("Σ* ≥ 0", 1e-10),
        ("Σ* = S(U†σU‖ρ_S⊗ρ_E)", 1e-10),
        ("dual of dual = Σ", 1e-10),
        ("⟨σ⟩ over trajectories = Σ*", 1e-8),
        ("U ≥ f((Σ+Σ*)/2), joint θ", 1e-9),
        ("capacities ≥ f(S̃_E) ≥ f((Σ+Σ*)/2)", 1e-9),
        ("(Σ+Σ*)/2 ≥ B(2(χ+χ′)/Φ²)", 1e-9),
        ("Σ+Σ* ≥ S(ρ_E′‖ρ_E)+S(ρ_E‖ρ_E′)", 1e-9),
    ];
    sweep(draws, &layout, |k| {
        let mut rng = substream(seed, k);
        let mut draw = || -> Result<Vec<Option<f64>>, Error> {
            let p = ThermoProcessF64::random(2, 2, &mut rng)?;
            let ep = entropy_production(&p)?;
            let again = relative_entropy(p.rho(), p.sigma())?;
            let (_, mean) = trajectory_dual(&p)?;
            let theta = random_observable(4, &mut rng);
            let qtur = match qtur_check(&p, &theta) {
                Ok(q) => Some(excess(q.bound.to_scalar(), q.report.u_quantum)),
                Err(Error::EqualMeans { .. }) => None,
                Err(e) => return Err(e),
            };
            let flux = match flux_capacity_relation(&p) {
                Ok(fr) => Some(fr),
                Err(Error::ZeroFlux { .. }) => None,
                Err(e) => return Err(e),
            };
            let chain = flux.as_ref().map(|fr| {
                let first = excess(fr.bound_env.to_scalar(), fr.uncertainty);
                let second = excess(fr.bound_total.to_scalar(), fr.bound_env.to_scalar());
                first.max(second)
            });
            let inverted = flux
                .as_ref()
                .map(|fr| excess(fr.inverted.to_scalar(), fr.half_total.to_scalar()));
            let env = flux
                .as_ref()
                .map(|fr| excess(fr.env_divergence.to_scalar(), fr.total.to_scalar()));
            Ok(vec![
                Some(-ep.sigma.to_scalar()),
                Some(-ep.sigma_dual.to_scalar()),
                Some(ep.unitary_route_residual()),
                Some(ep.dual().dual().sigma.abs_diff(&again)),
                Some((mean - ep.sigma_dual.to_scalar()).abs()),
                qtur,
                chain,
                inverted,
                env,
            ])
        };
        draw().unwrap_or_else(|_| vec![Some(f64::NAN); layout.len()])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_tracks_worst_and_failures() {
        let mut c = Check::new("x", 1e-3);
        c.record(Some(-1.0));
        c.record(None);
        c.record(Some(5e-4));
        assert!(c.passed());
        assert_eq!((c.evaluated, c.skipped, c.worst), (2, 1, 5e-4));
        c.record(Some(f64::NAN));
        assert!(!c.passed());
    }

    #[test]
    fn small_runs_of_every_suite_pass() {
        for report in run_suite(Suite::All, 30, 7) {
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn suites_are_deterministic() {
        assert_eq!(run_suite(Suite::Thermo, 10, 3), run_suite(Suite::Thermo, 10, 3));
    }
}
