//! The diagonal representation: weight functions φ(z) made of point atoms
//! and isotropic Gaussian components, the Husimi–Kano dual symbol Q(z),
//! and the maps between weights, operators and tomograms.
//!
//! The dequantizer and the inverse maps are genuine distributions, so
//! they are realized as maps on closed state classes (atoms + Gaussians
//! strictly wider than vacuum), never as pointwise kernels. The measure
//! convention is d Re z d Im z with no 1/π, so Σ weights = Tr ρ and
//! ∫Q d²z = π for density states.

use num_complex::Complex64 as C64;

use crate::coherent::{Span, MERGE_TOL};
use crate::error::{Error, Result};
use crate::fock::{coherent_vector, displacement_matrix, FockOperator, TruncationPolicy};
use crate::tomogram::{GaussComponent, Tomogram};

/// Tolerance on |Σ weights − 1| for density-mode weight functions.
pub const WEIGHT_SUM_TOL: f64 = 1e-10;
/// Relative width threshold separating "atom" from "invalid sub-vacuum
/// component" in the inverse maps.
pub const WIDTH_EPS: f64 = 1e-9;

/// A point mass w·δ²(z − location).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightAtom {
    pub weight: f64,
    pub location: C64,
}

/// An isotropic Gaussian component w·e^{−|z−center|²/variance}/(π·variance),
/// normalized to ∫ = w; `variance` is E|z−center|².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightGaussian {
    pub weight: f64,
    pub center: C64,
    pub variance: f64,
}

/// A diagonal-representation weight function φ(z) as a finite mixture of
/// atoms and isotropic Gaussians.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseWeight {
    pub atoms: Vec<WeightAtom>,
    pub gaussians: Vec<WeightGaussian>,
    /// Set on objects that are operator symbols rather than classical
    /// probability weights; only these may carry negative atom weights.
    pub non_classical: bool,
}

impl PhaseWeight {
    /// A weight function representing a density state: weights sum to 1
    /// and are nonnegative, Gaussian variances are positive.
    pub fn density(atoms: Vec<WeightAtom>, gaussians: Vec<WeightGaussian>) -> Result<Self> {
        let w = Self {
            atoms,
            gaussians,
            non_classical: false,
        };
        w.check_finite()?;
        if let Some(neg) = w
            .atoms
            .iter()
            .map(|a| a.weight)
            .chain(w.gaussians.iter().map(|g| g.weight))
            .find(|&x| x < 0.0)
        {
            return Err(Error::InvalidInput(format!(
                "negative weight {neg} requires a non-classical symbol"
            )));
        }
        let total = w.total_weight();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidInput(format!(
                "density weights must sum to 1, got {total}"
            )));
        }
        Ok(w)
    }

    /// A general operator symbol; weights may be negative and need not
    /// sum to 1.
    pub fn symbol(atoms: Vec<WeightAtom>, gaussians: Vec<WeightGaussian>) -> Result<Self> {
        let w = Self {
            atoms,
            gaussians,
            non_classical: true,
        };
        w.check_finite()?;
        Ok(w)
    }

    /// Single atom of weight 1: the vacuum weight δ²(z) when z = 0,
    /// generally the symbol of the coherent projector |z⟩⟨z|.
    pub fn atom(location: C64) -> Self {
        Self {
            atoms: vec![WeightAtom {
                weight: 1.0,
                location,
            }],
            gaussians: Vec::new(),
            non_classical: false,
        }
    }

    /// Single Gaussian of weight 1 (a displaced thermal state of mean
    /// occupation `variance`).
    pub fn gaussian(center: C64, variance: f64) -> Result<Self> {
        if !(variance > 0.0) {
            return Err(Error::InvalidInput(format!(
                "Gaussian variance must be positive, got {variance}"
            )));
        }
        Ok(Self {
            atoms: Vec::new(),
            gaussians: vec![WeightGaussian {
                weight: 1.0,
                center,
                variance,
            }],
            non_classical: false,
        })
    }

    fn check_finite(&self) -> Result<()> {
        let finite = self.atoms.iter().all(|a| {
            a.weight.is_finite() && a.location.re.is_finite() && a.location.im.is_finite()
        }) && self.gaussians.iter().all(|g| {
            g.weight.is_finite()
                && g.center.re.is_finite()
                && g.center.im.is_finite()
                && g.variance.is_finite()
                && g.variance > 0.0
        });
        if !finite {
            return Err(Error::InvalidInput(
                "weight function has a non-finite or non-positive-variance component".into(),
            ));
        }
        Ok(())
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum::<f64>()
            + self.gaussians.iter().map(|g| g.weight).sum::<f64>()
    }

    pub fn is_atoms_only(&self) -> bool {
        self.gaussians.is_empty()
    }

    /// Largest |center| plus Gaussian reach, used for truncation sizing.
    fn radius_for_tail(&self, tail: f64) -> f64 {
        let spread = (2.0 * (1.0 / tail).ln()).sqrt();
        self.atoms
            .iter()
            .map(|a| a.location.norm())
            .chain(
                self.gaussians
                    .iter()
                    .map(|g| g.center.norm() + g.variance.sqrt() * spread),
            )
            .fold(0.0, f64::max)
    }

    /// Normally ordered characteristic function Tr[ρD(u)]e^{|u|²/2} in
    /// closed form: atoms give pure phases Σ w exp(loc*·u − loc·u*),
    /// Gaussians an extra e^{−s|u|²} decay.
    pub fn normally_ordered_charfn(&self, u: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for a in &self.atoms {
            acc += (a.location.conj() * u - a.location * u.conj()).exp() * a.weight;
        }
        for g in &self.gaussians {
            acc += (g.center.conj() * u - g.center * u.conj()).exp()
                * (-g.variance * u.norm_sqr()).exp()
                * g.weight;
        }
        acc
    }
}

/// Exact coherent span Σ wᵢ |zᵢ⟩⟨zᵢ| of an atoms-only weight function.
pub fn weight_to_span(weight: &PhaseWeight) -> Result<Span> {
    if !weight.is_atoms_only() {
        return Err(Error::OutOfClass(
            "only atoms-only weight functions embed exactly as coherent spans".into(),
        ));
    }
    Span::mixture(
        &weight
            .atoms
            .iter()
            .map(|a| (a.weight, a.location))
            .collect::<Vec<_>>(),
    )
}

/// Reconstructs the density operator ρ = ∫φ(z)|z⟩⟨z| d²z.
///
/// Atoms embed exactly as coherent projectors; an isotropic Gaussian of
/// variance s centered at c is the displaced thermal state
/// D(c)·ρ_th(n̄=s)·D(c)†. The result must pass the density validator.
pub fn weight_to_operator(weight: &PhaseWeight, policy: &TruncationPolicy) -> Result<FockOperator> {
    let total = weight.total_weight();
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::InvalidInput(format!(
            "weight_to_operator needs unit total weight (density mode), got {total}"
        )));
    }
    let radius = weight.radius_for_tail(policy.target_tail);
    let dim = policy.dim_for_radius(radius)?;
    let mut op = FockOperator::zeros(dim);
    for a in &weight.atoms {
        let v = coherent_vector(a.location, dim);
        op = op.add(&v.projector().scale(C64::new(a.weight, 0.0)));
    }
    for g in &weight.gaussians {
        op = op.add(&displaced_thermal(g.center, g.variance, dim).scale(C64::new(g.weight, 0.0)));
    }
    op.validate_density()?;
    Ok(op)
}

/// Thermal state of mean occupation n̄, ρₙₙ = n̄ⁿ/(1+n̄)^{n+1}.
pub fn thermal_operator(nbar: f64, dim: usize) -> FockOperator {
    let mut op = FockOperator::zeros(dim);
    let ratio = nbar / (1.0 + nbar);
    let mut p = 1.0 / (1.0 + nbar);
    for n in 0..dim {
        op.mat[(n, n)] = C64::new(p, 0.0);
        p *= ratio;
    }
    op
}

/// Displaced thermal state D(c)·ρ_th(n̄)·D(c)†.
pub fn displaced_thermal(center: C64, nbar: f64, dim: usize) -> FockOperator {
    let th = thermal_operator(nbar, dim);
    if center.norm() == 0.0 {
        return th;
    }
    let d = displacement_matrix(center, dim);
    d.multiply(&th).multiply(&d.adjoint())
}

/// Closed-form tomogram of a weight function: atoms contribute Gaussians
/// of mean √2(μx+νy) and variance (μ²+ν²)/2, Gaussian components widen
/// the variance to (μ²+ν²)(1/2 + s).
pub fn weight_to_tomogram(weight: &PhaseWeight) -> Tomogram {
    let mut comps = Vec::with_capacity(weight.atoms.len() + weight.gaussians.len());
    for a in &weight.atoms {
        comps.push(GaussComponent {
            weight: a.weight,
            center: a.location,
            widen: 0.0,
        });
    }
    for g in &weight.gaussians {
        comps.push(GaussComponent {
            weight: g.weight,
            center: g.center,
            widen: g.variance,
        });
    }
    Tomogram::Mixture(comps)
}

/// Inverse of [`weight_to_tomogram`] on the Gaussian-mixture tomogram
/// class. Components at vacuum ray-variance map to atoms; components
/// below vacuum width are rejected (the inversion integral diverges
/// there).
pub fn tomogram_to_weight_gaussian(tomogram: &Tomogram) -> Result<PhaseWeight> {
    let comps = match tomogram {
        Tomogram::Mixture(comps) => comps,
        Tomogram::Numeric { .. } => {
            return Err(Error::OutOfClass(
                "only Gaussian-mixture tomograms invert in closed form; \
                 numeric-backend tomograms are outside the class"
                    .into(),
            ))
        }
    };
    let mut atoms = Vec::new();
    let mut gaussians = Vec::new();
    for c in comps {
        // the X-variance rule is (μ²+ν²)(1/2 + s): negative s means a
        // sub-vacuum component
        let s = c.widen;
        if s.abs() <= WIDTH_EPS * 0.5 {
            atoms.push(WeightAtom {
                weight: c.weight,
                location: c.center,
            });
        } else if s > 0.0 {
            gaussians.push(WeightGaussian {
                weight: c.weight,
                center: c.center,
                variance: s,
            });
        } else {
            return Err(Error::OutOfClass(format!(
                "tomogram component at {} has ray variance (μ²+ν²)(1/2 {s:+.3e}) below \
                 the vacuum's; its weight-function preimage diverges",
                c.center
            )));
        }
    }
    PhaseWeight::density(atoms, gaussians)
}

/// One Gaussian component of a Husimi mixture, contributing
/// (w/width)·e^{−|z−center|²/width}; the vacuum has width 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HusimiGaussian {
    pub weight: f64,
    pub center: C64,
    pub width: f64,
}

/// The Husimi–Kano function Q(z) = ⟨z|ρ|z⟩ in one of two forms.
#[derive(Debug, Clone)]
pub enum HusimiFunction {
    /// Tagged finite Gaussian mixture (closed under the P→Q map).
    Mixture(Vec<HusimiGaussian>),
    /// Evaluation through a Fock operator.
    Operator(FockOperator),
}

impl HusimiFunction {
    pub fn eval(&self, z: C64) -> f64 {
        match self {
            HusimiFunction::Mixture(comps) => comps
                .iter()
                .map(|c| c.weight / c.width * (-(z - c.center).norm_sqr() / c.width).exp())
                .sum(),
            HusimiFunction::Operator(op) => husimi(op, z),
        }
    }
}

/// Q(z) = ⟨z|ρ|z⟩ for a Fock operator; real and in [0,1] for density
/// states (up to the operator's truncation).
pub fn husimi(rho: &FockOperator, z: C64) -> f64 {
    rho.expectation(&coherent_vector(z, rho.dim())).re
}

/// Q(z) of a coherent span, in closed form.
pub fn husimi_of_span(span: &Span, z: C64) -> f64 {
    span.dyads()
        .iter()
        .map(|d| {
            d.weight * crate::coherent::overlap(z, d.ket) * crate::coherent::overlap(d.bra, z)
        })
        .sum::<C64>()
        .re
}

/// The P→Q convolution Q(z) = ∫φ(z₁) e^{−|z−z₁|²} d²z₁ in closed form:
/// atoms map to vacuum-width Gaussians, variance-s components to
/// width (1+s) Gaussians.
pub fn p_to_q(weight: &PhaseWeight) -> HusimiFunction {
    let mut comps = Vec::with_capacity(weight.atoms.len() + weight.gaussians.len());
    for a in &weight.atoms {
        comps.push(HusimiGaussian {
            weight: a.weight,
            center: a.location,
            width: 1.0,
        });
    }
    for g in &weight.gaussians {
        comps.push(HusimiGaussian {
            weight: g.weight,
            center: g.center,
            width: 1.0 + g.variance,
        });
    }
    HusimiFunction::Mixture(comps)
}

/// Pointwise value of the P→Q map.
pub fn p_to_q_value(weight: &PhaseWeight, z: C64) -> f64 {
    p_to_q(weight).eval(z)
}

/// Deconvolves a tagged Gaussian-mixture Husimi function back to its
/// weight function. Components at vacuum width (1, within 1e−9
/// relative) map to atoms; narrower components are rejected because the
/// deconvolution diverges for them.
pub fn q_to_p_gaussian(q: &HusimiFunction) -> Result<PhaseWeight> {
    let comps = match q {
        HusimiFunction::Mixture(comps) => comps,
        HusimiFunction::Operator(_) => {
            return Err(Error::OutOfClass(
                "only tagged Gaussian-mixture Husimi functions deconvolve in closed form".into(),
            ))
        }
    };
    let mut atoms = Vec::new();
    let mut gaussians = Vec::new();
    for c in comps {
        let excess = c.width - 1.0;
        if excess.abs() <= WIDTH_EPS {
            atoms.push(WeightAtom {
                weight: c.weight,
                location: c.center,
            });
        } else if excess > 0.0 {
            gaussians.push(WeightGaussian {
                weight: c.weight,
                center: c.center,
                variance: excess,
            });
        } else {
            return Err(Error::OutOfClass(format!(
                "Husimi component at {} has width {} at or below the vacuum's; \
                 its weight-function preimage is a genuine distribution",
                c.center, c.width
            )));
        }
    }
    PhaseWeight::density(atoms, gaussians)
}

/// Normally ordered characteristic function Tr[ρD(u)]·e^{|u|²/2} of a
/// Fock operator.
pub fn normally_ordered_charfn(rho: &FockOperator, u: C64) -> C64 {
    let d = displacement_matrix(u, rho.dim());
    let mut tr = C64::new(0.0, 0.0);
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            tr += rho.mat[(i, j)] * d.mat[(j, i)];
        }
    }
    tr * (0.5 * u.norm_sqr()).exp()
}

/// Reads the atomic weight function off a nonnegative mixture of
/// diagonal coherent dyads — the dequantizer realized on its closed
/// class. Off-diagonal dyads leave the class and are rejected.
pub fn dequantize_span(span: &Span) -> Result<PhaseWeight> {
    let mut atoms = Vec::with_capacity(span.dyads().len());
    for d in span.dyads() {
        if !d.is_diagonal() {
            return Err(Error::OutOfClass(format!(
                "span holds an off-diagonal dyad |{}⟩⟨{}|; its symbol leaves the atomic class",
                d.ket, d.bra
            )));
        }
        if d.weight.im.abs() > MERGE_TOL || d.weight.re < -MERGE_TOL {
            return Err(Error::OutOfClass(format!(
                "dyad weight {} is not a nonnegative mixture coefficient",
                d.weight
            )));
        }
        atoms.push(WeightAtom {
            weight: d.weight.re,
            location: d.ket,
        });
    }
    PhaseWeight::density(atoms, Vec::new())
}

/// ∫Q d²z by trapezoid quadrature on a square grid; equals π·Tr ρ.
pub fn husimi_integral(q: &HusimiFunction, half_width: f64, steps: usize) -> f64 {
    let xs = crate::tomogram::linspace(-half_width, half_width, steps);
    let h = xs[1] - xs[0];
    let mut acc = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let wx = if i == 0 || i == steps - 1 { 0.5 } else { 1.0 };
        for (j, &y) in xs.iter().enumerate() {
            let wy = if j == 0 || j == steps - 1 { 0.5 } else { 1.0 };
            acc += wx * wy * q.eval(C64::new(x, y));
        }
    }
    acc * h * h
}
