//! System-environment processes `ρ = U(ρ_S⊗ρ_E)U†`: entropy production and
//! its dual, the uncertainty bound they control, the flux-capacity relations
//! and the four-measurement trajectory ensemble.

use num_complex::Complex;
use rand::Rng;

use crate::bound;
use crate::divergence::relative_entropy;
use crate::error::{Error, Result};
use crate::extended::{BoundValue, ExtendedReal};
use crate::matrix::{ComplexMatrix, Subsystem};
use crate::random::{random_density, random_unitary};
use crate::scalar::Real;
use crate::state::{expectation, log_observable, variance, DensityMatrix, Observable};
use crate::surrogate::{full_report, UncertaintyReport};
use crate::tolerance;

/// Largest joint dimension accepted by [`trajectory_dual`].
pub const MAX_TRAJECTORY_DIM: usize = 16;

/// A joint unitary acting on a product of system and environment states.
#[derive(Debug, Clone)]
pub struct ThermoProcess<T> {
    rho_s: DensityMatrix<T>,
    rho_e: DensityMatrix<T>,
    unitary: ComplexMatrix<T>,
    initial: DensityMatrix<T>,
    rho: DensityMatrix<T>,
    sigma: DensityMatrix<T>,
    rho_s_prime: DensityMatrix<T>,
    rho_e_prime: DensityMatrix<T>,
}

impl<T: Real> ThermoProcess<T> {
    pub fn new(rho_s: DensityMatrix<T>, rho_e: DensityMatrix<T>, unitary: ComplexMatrix<T>) -> Result<Self> {
        let (ds, de) = (rho_s.dim(), rho_e.dim());
        if unitary.dim() != ds * de {
            return Err(Error::DimensionMismatch {
                expected: ds * de,
                found: unitary.dim(),
            });
        }
        let residual = unitary.unitarity_residual();
        if residual > T::tol(tolerance::UNITARY) {
            return Err(Error::NotUnitary {
                residual: residual.as_f64(),
            });
        }
        let initial = rho_s.tensor(&rho_e)?;
        let rho = initial.evolve(&unitary)?;
        let rho_s_prime = rho.reduce(ds, de, Subsystem::First)?;
        let rho_e_prime = rho.reduce(ds, de, Subsystem::Second)?;
        let sigma = rho_s_prime.tensor(&rho_e)?;
        Ok(Self {
            rho_s,
            rho_e,
            unitary,
            initial,
            rho,
            sigma,
            rho_s_prime,
            rho_e_prime,
        })
    }

    /// Random full-rank system and environment states and a random joint unitary.
    pub fn random<R: Rng + ?Sized>(dim_s: usize, dim_e: usize, rng: &mut R) -> Result<Self> {
        let rho_s = random_density(dim_s, rng)?;
        let rho_e = random_density(dim_e, rng)?;
        let unitary = random_unitary(dim_s * dim_e, rng);
        Self::new(rho_s, rho_e, unitary)
    }

    pub fn dim_s(&self) -> usize {
        self.rho_s.dim()
    }

    pub fn dim_e(&self) -> usize {
        self.rho_e.dim()
    }

    pub fn rho_s(&self) -> &DensityMatrix<T> {
        &self.rho_s
    }

    pub fn rho_e(&self) -> &DensityMatrix<T> {
        &self.rho_e
    }

    pub fn unitary(&self) -> &ComplexMatrix<T> {
        &self.unitary
    }

    /// `ρ_S ⊗ ρ_E`.
    pub fn initial(&self) -> &DensityMatrix<T> {
        &self.initial
    }

    /// `U(ρ_S⊗ρ_E)U†`.
    pub fn rho(&self) -> &DensityMatrix<T> {
        &self.rho
    }

    /// `ρ_S′ ⊗ ρ_E`.
    pub fn sigma(&self) -> &DensityMatrix<T> {
        &self.sigma
    }

    pub fn rho_s_prime(&self) -> &DensityMatrix<T> {
        &self.rho_s_prime
    }

    pub fn rho_e_prime(&self) -> &DensityMatrix<T> {
        &self.rho_e_prime
    }
}

/// `diag(e^{x/2}, e^{-x/2}) / (2 cosh(x/2))` with `x = βω`.
pub fn thermal_qubit<T: Real>(beta_omega: T) -> DensityMatrix<T> {
    let half = beta_omega * T::lit(0.5);
    let z = T::lit(2.0) * half.cosh();
    DensityMatrix::diagonal(&[half.exp() / z, (-half).exp() / z]).expect("thermal weights are normalized")
}

/// `cos(α) I - i sin(α) SWAP` on `d ⊗ d`, i.e. `exp(-iα SWAP)`.
pub fn partial_swap<T: Real>(dim: usize, angle: T) -> ComplexMatrix<T> {
    let (c, s) = (angle.cos(), angle.sin());
    ComplexMatrix::from_fn(dim * dim, |r, col| {
        let mut z = Complex::new(T::zero(), T::zero());
        if r == col {
            z.re = c;
        }
        let swapped = (col % dim) * dim + col / dim;
        if r == swapped {
            z.im = -s;
        }
        z
    })
}

/// `Σ = S(ρ‖σ)` and `Σ* = S(σ‖ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyProduction<T> {
    pub sigma: ExtendedReal<T>,
    pub sigma_dual: ExtendedReal<T>,
    /// `S(U†σU ‖ ρ_S⊗ρ_E)`, equal to `Σ*` by unitary invariance.
    pub dual_via_unitary: ExtendedReal<T>,
}

impl<T: Real> EntropyProduction<T> {
    /// The pair with the roles of `ρ` and `σ` exchanged; applying it twice
    /// returns the original.
    pub fn dual(&self) -> Self {
        Self {
            sigma: self.sigma_dual,
            sigma_dual: self.sigma,
            dual_via_unitary: self.sigma,
        }
    }

    /// `(Σ + Σ*) / 2`, which is `S̃(ρ,σ)`.
    pub fn half_total(&self) -> ExtendedReal<T> {
        ExtendedReal::mean(self.sigma, self.sigma_dual)
    }

    /// `|Σ* - S(U†σU‖ρ_S⊗ρ_E)|`.
    pub fn unitary_route_residual(&self) -> T {
        self.sigma_dual.abs_diff(&self.dual_via_unitary)
    }
}

pub fn entropy_production<T: Real>(p: &ThermoProcess<T>) -> Result<EntropyProduction<T>> {
    let sigma = relative_entropy(&p.rho, &p.sigma)?;
    let sigma_dual = relative_entropy(&p.sigma, &p.rho)?;
    let pulled_back = p.sigma.evolve(&p.unitary.adjoint())?;
    let dual_via_unitary = relative_entropy(&pulled_back, &p.initial)?;
    Ok(EntropyProduction {
        sigma,
        sigma_dual,
        dual_via_unitary,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QturReport<T> {
    pub report: UncertaintyReport<T>,
    pub production: EntropyProduction<T>,
    /// `f((Σ+Σ*)/2)`.
    pub bound: BoundValue<T>,
}

impl<T: Real> QturReport<T> {
    /// `U(θ;ρ,σ) ≥ f((Σ+Σ*)/2) - slack·max(1, U)`.
    pub fn holds(&self, slack: T) -> bool {
        match self.bound {
            ExtendedReal::Finite(b) => self.report.u_quantum >= b - scaled(slack, self.report.u_quantum),
            ExtendedReal::Infinite => false,
        }
    }
}

/// Uncertainty of a joint observable between `ρ` and `σ`, against the bound
/// in terms of `Σ` and `Σ*`.
pub fn qtur_check<T: Real>(p: &ThermoProcess<T>, theta: &Observable<T>) -> Result<QturReport<T>> {
    let report = full_report(&p.rho, &p.sigma, theta)?;
    let production = entropy_production(p)?;
    let bound = bound::f(production.half_total())?;
    Ok(QturReport {
        report,
        production,
        bound,
    })
}

/// Flux, capacities and the bounds chained through them.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxReport<T> {
    /// `Φ = tr((ρ_E - ρ_E′) ln ρ_E)`.
    pub phi: T,
    /// `Var_{ρ_E}(ln ρ_E)`.
    pub chi: T,
    /// `Var_{ρ_E′}(ln ρ_E)`.
    pub chi_prime: T,
    /// `(χ + χ′) / (Φ²/2)`.
    pub uncertainty: T,
    /// `f(S̃(ρ_E′, ρ_E))`.
    pub bound_env: BoundValue<T>,
    /// `f((Σ+Σ*)/2)`.
    pub bound_total: BoundValue<T>,
    /// `(Σ+Σ*)/2`.
    pub half_total: ExtendedReal<T>,
    /// `B(2(χ+χ′)/Φ²)`; infinite when the capacities vanish.
    pub inverted: ExtendedReal<T>,
    /// `S(ρ_E′‖ρ_E) + S(ρ_E‖ρ_E′)`.
    pub env_divergence: ExtendedReal<T>,
    /// `Σ + Σ*`.
    pub total: ExtendedReal<T>,
}

impl<T: Real> FluxReport<T> {
    /// `(χ+χ′)/(Φ²/2) ≥ f(S̃(ρ_E′,ρ_E)) ≥ f((Σ+Σ*)/2)`.
    pub fn capacity_chain_holds(&self, slack: T) -> bool {
        let first = match self.bound_env {
            ExtendedReal::Finite(b) => self.uncertainty >= b - scaled(slack, self.uncertainty),
            ExtendedReal::Infinite => false,
        };
        let second = self
            .bound_total
            .le_with_slack(&self.bound_env, scaled(slack, self.bound_env.to_scalar()));
        first && second
    }

    /// `(Σ+Σ*)/2 ≥ B(2(χ+χ′)/Φ²)`.
    pub fn inverted_holds(&self, slack: T) -> bool {
        self.inverted
            .le_with_slack(&self.half_total, scaled(slack, self.half_total.to_scalar()))
    }

    /// `Σ + Σ* ≥ S(ρ_E′‖ρ_E) + S(ρ_E‖ρ_E′)`.
    pub fn environment_holds(&self, slack: T) -> bool {
        self.env_divergence
            .le_with_slack(&self.total, scaled(slack, self.total.to_scalar()))
    }

    /// All three checks; each `slack` is scaled by `max(1, |larger side|)`.
    pub fn holds(&self, slack: T) -> bool {
        self.capacity_chain_holds(slack) && self.inverted_holds(slack) && self.environment_holds(slack)
    }
}

/// `slack · max(1, |x|)`; the comparisons run near values far above one, where
/// a fixed absolute slack is below the float spacing.
fn scaled<T: Real>(slack: T, x: T) -> T {
    if x.is_finite() {
        slack * T::one().max(x.abs())
    } else {
        slack
    }
}

/// Evaluates the flux and capacities of `θ = ln ρ_E`.
pub fn flux_capacity_relation<T: Real>(p: &ThermoProcess<T>) -> Result<FluxReport<T>> {
    for (name, state) in [("ρ_E", &p.rho_e), ("ρ_E′", &p.rho_e_prime)] {
        if !state.has_full_support() {
            return Err(Error::SupportFailure(format!(
                "{name} lacks full support (smallest eigenvalue {:e})",
                state.min_eigenvalue().as_f64()
            )));
        }
    }
    let log_e = log_observable(&p.rho_e);
    let phi = expectation(&p.rho_e, &log_e)? - expectation(&p.rho_e_prime, &log_e)?;
    if !(phi.abs() > T::tol(tolerance::MEAN_GAP)) {
        return Err(Error::ZeroFlux { flux: phi.as_f64() });
    }
    let chi = variance(&p.rho_e, &log_e)?;
    let chi_prime = variance(&p.rho_e_prime, &log_e)?;
    let uncertainty = (chi + chi_prime) / (phi * phi * T::lit(0.5));

    let forward = relative_entropy(&p.rho_e_prime, &p.rho_e)?;
    let backward = relative_entropy(&p.rho_e, &p.rho_e_prime)?;
    let bound_env = bound::f(ExtendedReal::mean(forward, backward))?;

    let production = entropy_production(p)?;
    let half_total = production.half_total();
    let bound_total = bound::f(half_total)?;
    let inverted = if uncertainty > T::zero() {
        ExtendedReal::Finite(bound::big_b(uncertainty)?)
    } else {
        ExtendedReal::Infinite
    };
    Ok(FluxReport {
        phi,
        chi,
        chi_prime,
        uncertainty,
        bound_env,
        bound_total,
        half_total,
        inverted,
        env_divergence: forward.add(backward),
        total: production.sigma.add(production.sigma_dual),
    })
}

/// Forward and backward probabilities over `γ = (m, ν′, n, ν)`.
///
/// `n`, `ν` label eigenvectors of `ρ_S`, `ρ_E` (the initial measurement) and
/// `m`, `ν′` eigenvectors of `ρ_S′`, `ρ_E` (the final one); the flat index is
/// `((m·d_E + ν′)·d_S + n)·d_E + ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEnsemble<T> {
    dim_s: usize,
    dim_e: usize,
    forward: Vec<T>,
    backward: Vec<T>,
}

impl<T: Real> TrajectoryEnsemble<T> {
    pub fn index(&self, m: usize, nu_prime: usize, n: usize, nu: usize) -> usize {
        ((m * self.dim_e + nu_prime) * self.dim_s + n) * self.dim_e + nu
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn forward(&self) -> &[T] {
        &self.forward
    }

    pub fn backward(&self) -> &[T] {
        &self.backward
    }

    /// `D(P_F‖P_B)`, the mean stochastic entropy production.
    pub fn mean_entropy_production(&self) -> Result<T> {
        let cutoff = T::tol(tolerance::SUPPORT_CUTOFF);
        let mut leak = T::zero();
        let mut total = T::zero();
        for (&pf, &pb) in self.forward.iter().zip(&self.backward) {
            if pf <= cutoff {
                continue;
            }
            if pb <= cutoff {
                leak = leak + pf;
            } else {
                total = total + pf * (pf / pb).ln();
            }
        }
        if leak > T::tol(tolerance::SUPPORT_LEAK) {
            return Err(Error::SupportFailure(format!(
                "forward mass {:e} on trajectories of zero backward probability",
                leak.as_f64()
            )));
        }
        Ok(total)
    }
}

/// Builds `P_F(γ) = |⟨n,ν|U†|ψ_m,ν′⟩|² p′_m q_ν′` and
/// `P_B(γ) = |⟨ψ_m,ν′|U|n,ν⟩|² p_n q_ν`, and returns them with `D(P_F‖P_B)`.
pub fn trajectory_dual<T: Real>(p: &ThermoProcess<T>) -> Result<(TrajectoryEnsemble<T>, T)> {
    let (ds, de) = (p.dim_s(), p.dim_e());
    if ds * de > MAX_TRAJECTORY_DIM {
        return Err(Error::DimensionTooLarge {
            dim: ds * de,
            max: MAX_TRAJECTORY_DIM,
        });
    }
    let cutoff = T::tol(tolerance::SUPPORT_CUTOFF);
    let weight = |l: T| if l > cutoff { l } else { T::zero() };
    let initial_s = p.rho_s.spectrum();
    let final_s = p.rho_s_prime.spectrum();
    let env = p.rho_e.spectrum();
    let product = |a: &[Complex<T>], b: &[Complex<T>]| -> Vec<Complex<T>> {
        a.iter().flat_map(|x| b.iter().map(move |y| *x * *y)).collect()
    };
    let u_dag = p.unitary.adjoint();

    let mut forward = Vec::with_capacity(ds * de * ds * de);
    let mut backward = Vec::with_capacity(ds * de * ds * de);
    for m in 0..ds {
        for nu_prime in 0..de {
            let after = product(&final_s.vector(m), &env.vector(nu_prime));
            let pulled = u_dag.mul_vec(&after);
            let final_weight = weight(final_s.eigenvalues()[m]) * weight(env.eigenvalues()[nu_prime]);
            for n in 0..ds {
                for nu in 0..de {
                    let before = product(&initial_s.vector(n), &env.vector(nu));
                    let amplitude = before
                        .iter()
                        .zip(&pulled)
                        .fold(Complex::new(T::zero(), T::zero()), |acc, (b, x)| acc + b.conj() * x);
                    let transition = amplitude.norm_sqr();
                    let initial_weight = weight(initial_s.eigenvalues()[n]) * weight(env.eigenvalues()[nu]);
                    forward.push(transition * final_weight);
                    backward.push(transition * initial_weight);
                }
            }
        }
    }
    let ensemble = TrajectoryEnsemble {
        dim_s: ds,
        dim_e: de,
        forward,
        backward,
    };
    let mean = ensemble.mean_entropy_production()?;
    Ok((ensemble, mean))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::substream;

    type Rho = DensityMatrix<f64>;

    fn swap_process() -> ThermoProcess<f64> {
        let rho_s = Rho::diagonal(&[0.7, 0.3]).unwrap();
        let rho_e = thermal_qubit(1.0);
        ThermoProcess::new(rho_s, rho_e, partial_swap(2, std::f64::consts::FRAC_PI_2)).unwrap()
    }

    #[test]
    fn partial_swap_is_unitary_and_full_swap_exchanges() {
        let u = partial_swap::<f64>(3, 0.4);
        assert!(u.unitarity_residual() < 1e-15);
        let p = swap_process();
        assert!(p.rho_s_prime().matrix().max_abs_diff(p.rho_e().matrix()) < 1e-15);
        assert!(p.rho_e_prime().matrix().max_abs_diff(p.rho_s().matrix()) < 1e-15);
    }

    #[test]
    fn rejects_non_unitary() {
        let u = ComplexMatrix::identity(4).scale_real(1.1);
        let r = ThermoProcess::new(Rho::maximally_mixed(2), Rho::maximally_mixed(2), u);
        assert!(matches!(r, Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn identity_produces_nothing() {
        let mut rng = substream(4, 0);
        let p = ThermoProcess::<f64>::new(
            random_density(2, &mut rng).unwrap(),
            random_density(2, &mut rng).unwrap(),
            ComplexMatrix::identity(4),
        )
        .unwrap();
        let ep = entropy_production(&p).unwrap();
        assert!(ep.sigma.value().unwrap() < 1e-12);
        assert!(ep.sigma_dual.value().unwrap() < 1e-12);
        let (_, mean) = trajectory_dual(&p).unwrap();
        assert!(mean.abs() < 1e-12);
        assert!(matches!(flux_capacity_relation(&p), Err(Error::ZeroFlux { .. })));
    }

    #[test]
    fn swap_production_matches_direct_formula() {
        let p = swap_process();
        let ep = entropy_production(&p).unwrap();
        let direct = relative_entropy(
            &p.rho_e().tensor(p.rho_s()).unwrap(),
            &p.rho_e().tensor(p.rho_e()).unwrap(),
        )
        .unwrap();
        assert!(ep.sigma.abs_diff(&direct) < 1e-12);
        assert!(ep.unitary_route_residual() < 1e-12);
        let twice = ep.dual().dual();
        assert_eq!((twice.sigma, twice.sigma_dual), (ep.sigma, ep.sigma_dual));
    }

    #[test]
    fn trajectory_matches_dual_production() {
        for k in 0..10 {
            let mut rng = substream(11, k);
            let p = ThermoProcess::<f64>::random(2, 2, &mut rng).unwrap();
            let (ens, mean) = trajectory_dual(&p).unwrap();
            let sf: f64 = ens.forward().iter().sum();
            let sb: f64 = ens.backward().iter().sum();
            assert!((sf - 1.0).abs() < 1e-10 && (sb - 1.0).abs() < 1e-10);
            let dual = entropy_production(&p).unwrap().sigma_dual.value().unwrap();
            assert!((mean - dual).abs() < 1e-8, "draw {k}: {mean} vs {dual}");
        }
    }

    #[test]
    fn trajectory_rejects_large_dimensions() {
        let p = ThermoProcess::new(
            Rho::maximally_mixed(5),
            Rho::maximally_mixed(4),
            ComplexMatrix::identity(20),
        )
        .unwrap();
        assert!(matches!(trajectory_dual(&p), Err(Error::DimensionTooLarge { .. })));
    }

    #[test]
    fn log_environment_observable_reproduces_flux_uncertainty() {
        let p = ThermoProcess::<f64>::new(thermal_qubit(0.3), thermal_qubit(2.0), partial_swap(2, 0.7)).unwrap();
        let flux = flux_capacity_relation(&p).unwrap();
        assert!(flux.holds(1e-9));
        let theta = log_observable(p.rho_e()).embed(2, Subsystem::Second);
        let q = qtur_check(&p, &theta).unwrap();
        assert!((q.report.u_quantum - flux.uncertainty).abs() < 1e-10 * flux.uncertainty);
        assert!(q.holds(1e-9));
        assert_eq!(q.bound, q.report.bound);
    }

    #[test]
    fn pure_environment_is_a_support_failure() {
        let p = ThermoProcess::new(
            thermal_qubit(1.0),
            Rho::diagonal(&[1.0, 0.0]).unwrap(),
            partial_swap(2, 0.5),
        )
        .unwrap();
        assert!(matches!(flux_capacity_relation(&p), Err(Error::SupportFailure(_))));
    }
}
