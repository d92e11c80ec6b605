//! The nonlinear superposition rule for pure density states.
//!
//! Given orthogonal pure states ρ₁, ρ₂, weights p₁ + p₂ = 1 and a
//! rank-one projector P₀ carrying the relative phase, the rule
//!
//! ρ = p₁ρ₁ + p₂ρ₂ + √(p₁p₂)·(ρ₁P₀ρ₂ + ρ₂P₀ρ₁)/√(Tr ρ₁P₀ρ₂P₀)
//!
//! produces the pure superposition |ψ⟩⟨ψ| of the two states. The same
//! state is reachable three ways: directly on operators, through the
//! star product of atomic symbols, and in tomogram form; the routes are
//! cross-checked against each other.
//!
//! Phase convention, fixed against a brute-force low-dimensional oracle:
//! the rule's output equals the projector of
//! |ψ⟩ = √p₁|ψ₁⟩ + e^{iφ}√p₂|ψ₂⟩ with φ = arg(⟨χ|ψ₁⟩⟨ψ₂|χ⟩),
//! where P₀ = |χ⟩⟨χ|.

use num_complex::Complex64 as C64;

use crate::coherent::Span;
use crate::diagonal::PhaseWeight;
use crate::error::{Error, Result};
use crate::fock::{purity, span_to_fock_dim, FockOperator, FockVector, TruncationPolicy};
use crate::star::{star_chain, star_trace};
use crate::tomogram::{tomogram_of_fock, trapezoid, Ray, Tomogram};

/// Smallest admissible Tr(ρ₁P₀ρ₂P₀) before the rule's denominator is
/// treated as vanishing.
pub const DENOMINATOR_FLOOR: f64 = 1e-14;
/// Orthogonality tolerance on |⟨ψ₁|ψ₂⟩|.
pub const ORTHOGONALITY_TOL: f64 = 1e-8;

/// A pure state in either backend.
#[derive(Debug, Clone)]
pub enum PureState {
    /// A normalized number-basis ket.
    Ket(FockVector),
    /// A rank-one density operator in the exact span algebra.
    Projector(Span),
}

impl PureState {
    fn fock_dim(&self, policy: &TruncationPolicy) -> Result<usize> {
        match self {
            PureState::Ket(v) => Ok(v.dim()),
            PureState::Projector(s) => policy.span_dim(s.max_radius()),
        }
    }

    fn to_fock(&self, dim: usize) -> Result<FockOperator> {
        match self {
            PureState::Ket(v) => Ok(v.padded(dim)?.projector()),
            PureState::Projector(s) => Ok(span_to_fock_dim(s, dim)),
        }
    }

    fn check_pure_density(&self, name: &str) -> Result<()> {
        match self {
            PureState::Ket(v) => {
                if (v.norm() - 1.0).abs() > 1e-10 {
                    return Err(Error::Precondition(format!(
                        "{name} ket has norm {} (must be 1 ± 1e-10)",
                        v.norm()
                    )));
                }
            }
            PureState::Projector(s) => {
                let tr = s.trace();
                if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
                    return Err(Error::Precondition(format!(
                        "{name} projector has trace {tr} (must be 1 ± 1e-10)"
                    )));
                }
                if !s.adjoint().approx_eq(s, 1e-10) {
                    return Err(Error::Precondition(format!(
                        "{name} projector is not Hermitian"
                    )));
                }
                let pur = s.multiply(s).trace().re;
                if (pur - 1.0).abs() > 1e-8 {
                    return Err(Error::Precondition(format!(
                        "{name} has purity {pur} (must be rank one)"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Inputs to the superposition rule.
#[derive(Debug, Clone)]
pub struct SuperpositionSpec {
    pub p1: f64,
    pub p2: f64,
    pub state1: PureState,
    pub state2: PureState,
    /// The rank-one, unit-trace projector fixing the relative phase.
    pub projector: PureState,
}

impl SuperpositionSpec {
    pub fn new(
        p1: f64,
        p2: f64,
        state1: PureState,
        state2: PureState,
        projector: PureState,
    ) -> Result<Self> {
        if !(p1.is_finite() && p2.is_finite()) || p1 < -1e-12 || p2 < -1e-12 {
            return Err(Error::Precondition(format!(
                "weights must be nonnegative, got p1={p1}, p2={p2}"
            )));
        }
        if (p1 + p2 - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!(
                "weights must satisfy p1 + p2 = 1 ± 1e-12, got {}",
                p1 + p2
            )));
        }
        Ok(Self {
            p1,
            p2,
            state1,
            state2,
            projector,
        })
    }

    /// Checks purity/trace of each input and the orthogonality premise.
    pub fn validate(&self, policy: &TruncationPolicy) -> Result<()> {
        self.state1.check_pure_density("state1")?;
        self.state2.check_pure_density("state2")?;
        self.projector.check_pure_density("projector")?;
        let olap = self.state_overlap(policy)?;
        if olap > ORTHOGONALITY_TOL {
            return Err(Error::Precondition(format!(
                "input states are not orthogonal: |⟨ψ₁|ψ₂⟩| = {olap:.3e}"
            )));
        }
        Ok(())
    }

    /// |⟨ψ₁|ψ₂⟩| between the two input states.
    fn state_overlap(&self, policy: &TruncationPolicy) -> Result<f64> {
        match (&self.state1, &self.state2) {
            (PureState::Ket(a), PureState::Ket(b)) => {
                let dim = a.dim().max(b.dim());
                Ok(a.padded(dim)?.inner(&b.padded(dim)?).norm())
            }
            (PureState::Projector(a), PureState::Projector(b)) => {
                Ok(a.multiply(b).trace().re.max(0.0).sqrt())
            }
            _ => {
                let dim = self
                    .state1
                    .fock_dim(policy)?
                    .max(self.state2.fock_dim(policy)?);
                let r1 = self.state1.to_fock(dim)?;
                let r2 = self.state2.to_fock(dim)?;
                Ok((&r1.mat * &r2.mat).diagonal().sum().re.max(0.0).sqrt())
            }
        }
    }

    fn all_spans(&self) -> Option<(&Span, &Span, &Span)> {
        match (&self.state1, &self.state2, &self.projector) {
            (PureState::Projector(a), PureState::Projector(b), PureState::Projector(p)) => {
                Some((a, b, p))
            }
            _ => None,
        }
    }
}

/// The superposed density state, in whichever backend the inputs used.
#[derive(Debug, Clone)]
pub enum DensityState {
    Fock(FockOperator),
    Span(Span),
}

impl DensityState {
    pub fn to_fock(&self, policy: &TruncationPolicy) -> Result<FockOperator> {
        match self {
            DensityState::Fock(op) => Ok(op.clone()),
            DensityState::Span(s) => crate::fock::span_to_fock(s, policy),
        }
    }

    pub fn to_fock_dim(&self, dim: usize) -> Result<FockOperator> {
        match self {
            DensityState::Fock(op) => op.padded(dim),
            DensityState::Span(s) => Ok(span_to_fock_dim(s, dim)),
        }
    }
}

/// Ket-level superposition |ψ⟩ = √p₁|ψ₁⟩ + e^{iφ}√p₂|ψ₂⟩ with the phase
/// supplied explicitly. Both states must be number-basis kets.
pub fn superpose_kets(spec: &SuperpositionSpec, phase: f64) -> Result<FockVector> {
    let (a, b) = match (&spec.state1, &spec.state2) {
        (PureState::Ket(a), PureState::Ket(b)) => (a, b),
        _ => {
            return Err(Error::Precondition(
                "the ket route needs both states as number-basis kets".into(),
            ))
        }
    };
    spec.validate(&TruncationPolicy::default())?;
    let dim = a.dim().max(b.dim());
    let a = a.padded(dim)?;
    let b = b.padded(dim)?;
    let c1 = C64::new(spec.p1.max(0.0).sqrt(), 0.0);
    let c2 = C64::new(0.0, phase).exp() * spec.p2.max(0.0).sqrt();
    Ok(FockVector::new(&a.amps * c1 + &b.amps * c2))
}

/// The phase the density-level rule induces for a given projector
/// P₀ = |χ⟩⟨χ|: φ = arg(⟨χ|ψ₁⟩⟨ψ₂|χ⟩).
pub fn induced_phase(psi1: &FockVector, psi2: &FockVector, chi: &FockVector) -> Result<f64> {
    let dim = psi1.dim().max(psi2.dim()).max(chi.dim());
    let c1 = chi.padded(dim)?.inner(&psi1.padded(dim)?);
    let c2 = psi2.padded(dim)?.inner(&chi.padded(dim)?);
    let prod = c1 * c2;
    if prod.norm() < DENOMINATOR_FLOOR {
        return Err(Error::Precondition(
            "projector is orthogonal to an input state; the phase is undefined".into(),
        ));
    }
    Ok(prod.arg())
}

/// Density-level superposition rule. All-span inputs stay in the exact
/// span algebra; any ket input switches the computation to the Fock
/// backend at a common dimension.
pub fn superpose_densities(
    spec: &SuperpositionSpec,
    policy: &TruncationPolicy,
) -> Result<DensityState> {
    spec.validate(policy)?;
    let cross_scale = (spec.p1 * spec.p2).sqrt();
    if let Some((s1, s2, p0)) = spec.all_spans() {
        let mut out = s1.scale(C64::new(spec.p1, 0.0)).add(&s2.scale(C64::new(spec.p2, 0.0)));
        if cross_scale > 0.0 {
            let denom = check_denominator(s1.multiply(p0).multiply(s2).multiply(p0).trace())?;
            let cross = s1
                .multiply(p0)
                .multiply(s2)
                .add(&s2.multiply(p0).multiply(s1))
                .scale(C64::new(cross_scale / denom.sqrt(), 0.0));
            out = out.add(&cross);
        }
        return Ok(DensityState::Span(out));
    }
    let dim = spec
        .state1
        .fock_dim(policy)?
        .max(spec.state2.fock_dim(policy)?)
        .max(spec.projector.fock_dim(policy)?);
    let r1 = spec.state1.to_fock(dim)?;
    let r2 = spec.state2.to_fock(dim)?;
    let (total, _, _, cross) = eq12_terms(&r1, &r2, &spec.projector.to_fock(dim)?, spec.p1, spec.p2)?;
    let _ = cross;
    Ok(DensityState::Fock(total))
}

/// The three Eq.-12 pieces in Fock form: (total, p₁ρ₁, p₂ρ₂, cross).
fn eq12_terms(
    rho1: &FockOperator,
    rho2: &FockOperator,
    p0: &FockOperator,
    p1: f64,
    p2: f64,
) -> Result<(FockOperator, FockOperator, FockOperator, FockOperator)> {
    let t1 = rho1.scale(C64::new(p1, 0.0));
    let t2 = rho2.scale(C64::new(p2, 0.0));
    let cross_scale = (p1 * p2).sqrt();
    let cross = if cross_scale > 0.0 {
        let r1p = rho1.multiply(p0);
        let r2p = rho2.multiply(p0);
        let denom = check_denominator(r1p.multiply(&r2p).trace())?;
        r1p.multiply(rho2)
            .add(&r2p.multiply(rho1))
            .scale(C64::new(cross_scale / denom.sqrt(), 0.0))
    } else {
        FockOperator::zeros(rho1.dim())
    };
    let total = t1.add(&t2).add(&cross);
    Ok((total, t1, t2, cross))
}

fn check_denominator(tr: C64) -> Result<f64> {
    if tr.re <= DENOMINATOR_FLOOR || tr.im.abs() > 1e-10 * tr.re.abs().max(1e-12) {
        return Err(Error::Precondition(format!(
            "Tr(ρ₁P₀ρ₂P₀) = {tr} vanishes; the projector is orthogonal to an input state"
        )));
    }
    Ok(tr.re)
}

/// Symbol-level superposition: p₁φ₁ + p₂φ₂ plus the star-product cross
/// terms, everything carried in operator (span) form since the cross
/// terms are off-diagonal.
#[derive(Debug, Clone)]
pub struct SymbolSuperposition {
    /// The superposed state as a coherent span.
    pub operator: Span,
    /// The denominator ∫(φ₁∗φ₀∗φ₂∗φ₀)(z) dx dy = Tr(ρ₁P₀ρ₂P₀).
    pub denominator: f64,
}

/// Superposition rule on atoms-only symbols: each operand must be the
/// symbol of a pure coherent projector (a single unit-weight atom), and
/// the two state symbols must sit far enough apart to be orthogonal
/// within tolerance.
pub fn superpose_symbols(
    p1: f64,
    p2: f64,
    phi1: &PhaseWeight,
    phi2: &PhaseWeight,
    phi0: &PhaseWeight,
) -> Result<SymbolSuperposition> {
    if (p1 + p2 - 1.0).abs() > 1e-12 || p1 < -1e-12 || p2 < -1e-12 {
        return Err(Error::Precondition(format!(
            "weights must be nonnegative with p1 + p2 = 1, got ({p1}, {p2})"
        )));
    }
    let a1 = single_atom(phi1, "phi1")?;
    let a2 = single_atom(phi2, "phi2")?;
    single_atom(phi0, "phi0")?;
    let olap = crate::coherent::overlap(a1, a2).norm();
    if olap > ORTHOGONALITY_TOL {
        return Err(Error::Precondition(format!(
            "symbols at {a1} and {a2} are not orthogonal within tolerance: \
             |⟨α₁|α₂⟩| = {olap:.3e}"
        )));
    }
    let s1 = crate::diagonal::weight_to_span(phi1)?;
    let s2 = crate::diagonal::weight_to_span(phi2)?;
    let mut out = s1
        .scale(C64::new(p1, 0.0))
        .add(&s2.scale(C64::new(p2, 0.0)));
    let cross_scale = (p1 * p2).sqrt();
    let mut denominator = 0.0;
    if cross_scale > 0.0 {
        let denom_product = star_chain(&[phi1, phi0, phi2, phi0])?;
        denominator = check_denominator(star_trace(&denom_product))?;
        let c12 = star_chain(&[phi1, phi0, phi2])?;
        let c21 = star_chain(&[phi2, phi0, phi1])?;
        let cross = c12
            .operator
            .add(&c21.operator)
            .scale(C64::new(cross_scale / denominator.sqrt(), 0.0));
        out = out.add(&cross);
    }
    Ok(SymbolSuperposition {
        operator: out,
        denominator,
    })
}

fn single_atom(phi: &PhaseWeight, name: &str) -> Result<C64> {
    if !phi.is_atoms_only() || phi.atoms.len() != 1 {
        return Err(Error::OutOfClass(format!(
            "{name} must be the symbol of a single coherent projector (one atom)"
        )));
    }
    if (phi.atoms[0].weight - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition(format!(
            "{name} must have unit weight, got {}",
            phi.atoms[0].weight
        )));
    }
    Ok(phi.atoms[0].location)
}

/// The superposed state's tomogram together with the tomograms of the
/// rule's three pieces, for verifying the additive structure.
#[derive(Debug, Clone)]
pub struct TomogramSuperposition {
    pub total: Tomogram,
    term1: FockOperator,
    term2: FockOperator,
    cross: FockOperator,
}

/// Pointwise/integral report on the three-term additive structure.
#[derive(Debug, Clone)]
pub struct StructureReport {
    /// max |w_total − (w₁-term + w₂-term + w_cross)| over the samples
    pub max_pointwise_dev: f64,
    /// max |∫ w_cross dX| over the sampled rays
    pub max_cross_integral: f64,
}

/// Tomogram-level superposition: the tomogram of the density-rule
/// output, carrying the per-term operators so the additive three-term
/// structure can be verified on any rays.
pub fn superpose_tomograms(
    spec: &SuperpositionSpec,
    policy: &TruncationPolicy,
) -> Result<TomogramSuperposition> {
    spec.validate(policy)?;
    let dim = spec
        .state1
        .fock_dim(policy)?
        .max(spec.state2.fock_dim(policy)?)
        .max(spec.projector.fock_dim(policy)?);
    let r1 = spec.state1.to_fock(dim)?;
    let r2 = spec.state2.to_fock(dim)?;
    let p0 = spec.projector.to_fock(dim)?;
    let (total, t1, t2, cross) = eq12_terms(&r1, &r2, &p0, spec.p1, spec.p2)?;
    Ok(TomogramSuperposition {
        total: Tomogram::numeric(total),
        term1: t1,
        term2: t2,
        cross,
    })
}

impl TomogramSuperposition {
    /// Checks w = w₁-term + w₂-term + w_cross pointwise and that the
    /// cross term integrates to zero on every sampled ray.
    ///
    /// The X-window covers both input states out to 8σ; the cross term
    /// lives inside their combined support, so its integral over the
    /// window stands in for the full-line integral.
    pub fn verify_structure(&self, rays: &[Ray], points: usize) -> Result<StructureReport> {
        let mut max_dev: f64 = 0.0;
        let mut max_cross: f64 = 0.0;
        for &ray in rays {
            let xs = self.term_covering_grid(ray, points);
            let total = self.total.eval_ray(ray, &xs)?;
            let w1 = tomogram_of_fock(&self.term1, ray, &xs)?;
            let w2 = tomogram_of_fock(&self.term2, ray, &xs)?;
            let wc = tomogram_of_fock(&self.cross, ray, &xs)?;
            for i in 0..xs.len() {
                max_dev = max_dev.max((total[i] - (w1[i] + w2[i] + wc[i])).abs());
            }
            max_cross = max_cross.max(trapezoid(&xs, &wc).abs());
        }
        Ok(StructureReport {
            max_pointwise_dev: max_dev,
            max_cross_integral: max_cross,
        })
    }

    fn term_covering_grid(&self, ray: Ray, points: usize) -> Vec<f64> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (term, weight) in [(&self.term1, self.term1.trace().re), (&self.term2, self.term2.trace().re)] {
            if weight <= 0.0 {
                continue;
            }
            let unit = term.scale(C64::new(1.0 / weight, 0.0));
            let (mean, var) = crate::fock::quadrature_moments(&unit, ray.mu, ray.nu);
            let sigma = var.sqrt().max(1e-6);
            lo = lo.min(mean - 8.0 * sigma);
            hi = hi.max(mean + 8.0 * sigma);
        }
        crate::tomogram::linspace(lo, hi, points.max(2))
    }
}

/// Gram–Schmidt orthonormalization of (|α⟩, |−α⟩) as span projectors:
/// ψ₁ = |α⟩ and ψ₂ ∝ |−α⟩ − ⟨α|−α⟩·|α⟩. Unlike the parity cats, both
/// states overlap the vacuum, so P₀ = |0⟩⟨0| is an admissible phase
/// projector for them.
pub fn orthonormal_coherent_pair(alpha: C64) -> Result<(Span, Span)> {
    let t = crate::coherent::overlap(alpha, -alpha);
    let first = Span::projector(alpha);
    let second = Span::pure(&[(-t, alpha), (C64::new(1.0, 0.0), -alpha)])?;
    Ok((first, second))
}

/// Orthonormalized even/odd coherent superpositions (cat states) over
/// ±α, as exact span projectors.
pub fn cat_span(alpha: C64, even: bool) -> Result<Span> {
    let sign = if even { 1.0 } else { -1.0 };
    Span::pure(&[
        (C64::new(1.0, 0.0), alpha),
        (C64::new(sign, 0.0), -alpha),
    ])
}

/// The same cat states as normalized Fock kets.
pub fn cat_ket(alpha: C64, even: bool, dim: usize) -> Result<FockVector> {
    let sign = C64::new(if even { 1.0 } else { -1.0 }, 0.0);
    let a = crate::fock::coherent_vector(alpha, dim);
    let b = crate::fock::coherent_vector(-alpha, dim);
    FockVector::new(&a.amps + &b.amps * sign).normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ket(amps: &[C64]) -> FockVector {
        FockVector::new(DVector::from_column_slice(amps)).normalized().unwrap()
    }

    fn plus_state() -> FockVector {
        ket(&[c(1.0, 0.0), c(1.0, 0.0)])
    }

    #[test]
    fn two_level_equal_superposition() {
        // ρ₁=|0⟩⟨0|, ρ₂=|1⟩⟨1|, P₀=|+⟩⟨+| → |+⟩⟨+|, by 2×2 matrix algebra
        let spec = SuperpositionSpec::new(
            0.5,
            0.5,
            PureState::Ket(FockVector::number_state(0, 2)),
            PureState::Ket(FockVector::number_state(1, 2)),
            PureState::Ket(plus_state()),
        )
        .unwrap();
        let rho = superpose_densities(&spec, &TruncationPolicy::default()).unwrap();
        let rho = match rho {
            DensityState::Fock(op) => op,
            _ => panic!("expected Fock route"),
        };
        let expect = plus_state().projector();
        assert!(rho.frobenius_distance(&expect) < 1e-12);
        assert!((purity(&rho).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn p1_equal_one_returns_state1() {
        let spec = SuperpositionSpec::new(
            1.0,
            0.0,
            PureState::Ket(FockVector::number_state(0, 3)),
            PureState::Ket(FockVector::number_state(2, 3)),
            PureState::Ket(plus_state()),
        )
        .unwrap();
        let rho = superpose_densities(&spec, &TruncationPolicy::default()).unwrap();
        if let DensityState::Fock(op) = rho {
            assert!(op.frobenius_distance(&FockVector::number_state(0, 3).projector()) < 1e-14);
        } else {
            panic!("expected Fock route");
        }
    }

    #[test]
    fn phase_convention_matches_brute_force_oracle_in_dim_3() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for trial in 0..50 {
            let dim = 3;
            let randv = |rng: &mut rand_chacha::ChaCha8Rng| {
                FockVector::new(DVector::from_iterator(
                    dim,
                    (0..dim).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
                ))
            };
            // Gram–Schmidt pair
            let v1 = randv(&mut rng).normalized().unwrap();
            let raw2 = randv(&mut rng);
            let proj = v1.inner(&raw2);
            let v2 = FockVector::new(&raw2.amps - &v1.amps * proj)
                .normalized()
                .unwrap();
            let chi = randv(&mut rng).normalized().unwrap();
            if chi.inner(&v1).norm() < 1e-2 || chi.inner(&v2).norm() < 1e-2 {
                continue;
            }
            let p1 = rng.gen_range(0.05..0.95);
            let spec = SuperpositionSpec::new(
                p1,
                1.0 - p1,
                PureState::Ket(v1.clone()),
                PureState::Ket(v2.clone()),
                PureState::Ket(chi.clone()),
            )
            .unwrap();
            let rho = match superpose_densities(&spec, &TruncationPolicy::default()).unwrap() {
                DensityState::Fock(op) => op,
                _ => unreachable!(),
            };
            let phase = induced_phase(&v1, &v2, &chi).unwrap();
            let psi = superpose_kets(&spec, phase).unwrap();
            let oracle = psi.projector();
            assert!(
                rho.frobenius_distance(&oracle) < 1e-12,
                "trial {trial}: density rule disagrees with the ket oracle"
            );
            assert!((purity(&rho).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn non_orthogonal_inputs_rejected() {
        let spec = SuperpositionSpec::new(
            0.5,
            0.5,
            PureState::Ket(plus_state()),
            PureState::Ket(FockVector::number_state(0, 2)),
            PureState::Ket(FockVector::number_state(1, 2)),
        )
        .unwrap();
        assert!(matches!(
            superpose_densities(&spec, &TruncationPolicy::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn orthogonal_projector_rejected() {
        // χ = ψ₂ = |1⟩ makes ⟨χ|ψ₁⟩ = 0: the denominator vanishes
        let spec = SuperpositionSpec::new(
            0.5,
            0.5,
            PureState::Ket(FockVector::number_state(0, 2)),
            PureState::Ket(FockVector::number_state(1, 2)),
            PureState::Ket(FockVector::number_state(1, 2)),
        )
        .unwrap();
        assert!(matches!(
            superpose_densities(&spec, &TruncationPolicy::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ket_route_basics() {
        let spec = SuperpositionSpec::new(
            0.5,
            0.5,
            PureState::Ket(FockVector::number_state(0, 2)),
            PureState::Ket(FockVector::number_state(1, 2)),
            PureState::Ket(plus_state()),
        )
        .unwrap();
        let psi = superpose_kets(&spec, 0.0).unwrap();
        let expect = plus_state();
        assert!((psi.inner(&expect).norm() - 1.0).abs() < 1e-12);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cat_spans_are_orthonormal() {
        let alpha = c(2.0, 0.0);
        let even = cat_span(alpha, true).unwrap();
        let odd = cat_span(alpha, false).unwrap();
        assert!((even.trace().re - 1.0).abs() < 1e-12);
        assert!((odd.trace().re - 1.0).abs() < 1e-12);
        assert!(even.multiply(&odd).trace().norm() < 1e-12);
        assert!((even.multiply(&even).trace().re - 1.0).abs() < 1e-12);
        // ket version agrees
        let k = cat_ket(alpha, true, 48).unwrap();
        assert!((k.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn span_route_cat_superposition_is_pure() {
        // orthonormalized ±α basis, P₀ = vacuum projector
        let alpha = c(2.0, 0.0);
        let spec = SuperpositionSpec::new(
            0.5,
            0.5,
            PureState::Projector(cat_span(alpha, true).unwrap()),
            PureState::Projector(cat_span(alpha, false).unwrap()),
            PureState::Projector(Span::projector(c(0.0, 0.0))),
        )
        .unwrap();
        let out = superpose_densities(&spec, &TruncationPolicy::default()).unwrap();
        let span = match &out {
            DensityState::Span(s) => s.clone(),
            _ => panic!("expected span route"),
        };
        assert!((span.trace().re - 1.0).abs() < 1e-10);
        let pur = span.multiply(&span).trace().re;
        assert!((pur - 1.0).abs() < 1e-8, "span purity {pur}");
        // and the Fock embedding passes the density validator with purity 1
        let op = out.to_fock(&TruncationPolicy::default()).unwrap();
        assert!((purity(&op).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn symbol_route_matches_density_route() {
        // far-separated atoms are orthogonal within tolerance
        let alpha = c(3.2, 0.0);
        let phi1 = PhaseWeight::atom(alpha);
        let phi2 = PhaseWeight::atom(-alpha);
        let phi0 = PhaseWeight::atom(c(0.0, 0.0));
        let sym = superpose_symbols(0.4, 0.6, &phi1, &phi2, &phi0).unwrap();

        let spec = SuperpositionSpec::new(
            0.4,
            0.6,
            PureState::Projector(Span::projector(alpha)),
            PureState::Projector(Span::projector(-alpha)),
            PureState::Projector(Span::projector(c(0.0, 0.0))),
        )
        .unwrap();
        let dens = superpose_densities(&spec, &TruncationPolicy::default()).unwrap();
        let span = match dens {
            DensityState::Span(s) => s,
            _ => panic!("expected span route"),
        };
        assert!(
            sym.operator.approx_eq(&span, 1e-10),
            "symbol and density routes disagree"
        );
        // denominator equals the operator trace Tr(ρ₁P₀ρ₂P₀)
        let tr = Span::projector(alpha)
            .multiply(&Span::projector(c(0.0, 0.0)))
            .multiply(&Span::projector(-alpha))
            .multiply(&Span::projector(c(0.0, 0.0)))
            .trace();
        assert!((sym.denominator - tr.re).abs() < 1e-12 * tr.re.max(1e-300));
    }

    #[test]
    fn symbol_route_rejects_degenerate_inputs() {
        let phi0 = PhaseWeight::atom(c(0.0, 0.0));
        assert!(matches!(
            superpose_symbols(0.5, 0.5, &phi0, &phi0, &phi0),
            Err(Error::Precondition(_))
        ));
        let g = PhaseWeight::gaussian(c(0.0, 0.0), 1.0).unwrap();
        assert!(matches!(
            superpose_symbols(0.5, 0.5, &g, &PhaseWeight::atom(c(3.2, 0.0)), &phi0),
            Err(Error::OutOfClass(_))
        ));
    }

    #[test]
    fn tomogram_route_structure() {
        let spec = SuperpositionSpec::new(
            0.5,
            0.5,
            PureState::Ket(FockVector::number_state(0, 2)),
            PureState::Ket(FockVector::number_state(1, 2)),
            PureState::Ket(plus_state()),
        )
        .unwrap();
        let ts = superpose_tomograms(&spec, &TruncationPolicy::default()).unwrap();
        let rays: Vec<Ray> = [(1.0, 0.0), (0.0, 1.0), (0.7, 0.7)]
            .iter()
            .map(|&(m, n)| Ray::new(m, n).unwrap())
            .collect();
        let rep = ts.verify_structure(&rays, 101).unwrap();
        assert!(rep.max_pointwise_dev < 1e-8);
        assert!(rep.max_cross_integral < 1e-8);

        // the total tomogram matches the wavefunction route on (1,0)
        let phase = induced_phase(
            &FockVector::number_state(0, 2),
            &FockVector::number_state(1, 2),
            &plus_state(),
        )
        .unwrap();
        let psi_ket = superpose_kets(&spec, phase).unwrap();
        let psi = crate::tomogram::wavefunction(&psi_ket);
        let ray = Ray::new(1.0, 0.0).unwrap();
        let xs = ts.total.default_grid(ray, 41, 5.0);
        let via_op = ts.total.eval_ray(ray, &xs).unwrap();
        let via_wf =
            crate::tomogram::tomogram_of_pure(&psi, ray, &xs, &Default::default());
        for i in 0..xs.len() {
            assert!(
                (via_op[i] - via_wf[i]).abs() < 1e-8,
                "X={}: {} vs {}",
                xs[i],
                via_op[i],
                via_wf[i]
            );
        }
    }

    #[test]
    fn weight_sum_enforced() {
        assert!(SuperpositionSpec::new(
            0.6,
            0.6,
            PureState::Ket(FockVector::number_state(0, 2)),
            PureState::Ket(FockVector::number_state(1, 2)),
            PureState::Ket(plus_state()),
        )
        .is_err());
    }
}
