//! Symplectic tomograms: the probability density w(X,μ,ν) of the
//! quadrature μq̂ + νp̂, for states in either backend.
//!
//! Two evaluation paths cross-validate each other. States whose weight
//! function is a mixture of atoms and isotropic Gaussians have tomograms
//! in closed form (a Gaussian mixture in X for every ray); arbitrary
//! Fock operators go through Fourier inversion of the tomographic
//! characteristic function Tr[ρ D(α(k))], α(k) = k(ν−iμ)/√2.

use num_complex::Complex64 as C64;

use crate::coherent::ray_displacement;
use crate::error::{Error, Result};
use crate::fock::{displacement_matrix, quadrature_moments, FockOperator};

/// A tomographic ray (μ,ν), i.e. the quadrature direction μq̂ + νp̂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub mu: f64,
    pub nu: f64,
}

impl Ray {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if !mu.is_finite() || !nu.is_finite() || mu * mu + nu * nu <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "invalid ray (mu, nu) = ({mu}, {nu}): need finite with mu^2 + nu^2 > 0"
            )));
        }
        Ok(Self { mu, nu })
    }

    /// Vacuum-scale standard deviation √((μ²+ν²)/2) of this ray.
    pub fn sigma0(&self) -> f64 {
        (0.5 * (self.mu * self.mu + self.nu * self.nu)).sqrt()
    }
}

/// Fourier-quadrature controls for the operator-trace path.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSettings {
    /// K = (2√n_supp + k_sigma)/σ₀; 8 leaves the vacuum charfn below
    /// e^{−32} at the cutoff.
    pub k_sigma: f64,
    /// Point count at the vacuum cutoff K = 8/σ₀; scaled linearly for
    /// wider ranges so the grid spacing stays fixed.
    pub base_points: usize,
    /// Fock-support tail used to size the k-range from the operator.
    pub support_tail: f64,
    /// The charfn modulus at the grid edge must fall below this; if not,
    /// the range doubles (a few times) before giving up.
    pub edge_tol: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            k_sigma: 8.0,
            base_points: 2048,
            support_tail: 1e-12,
            edge_tol: 1e-10,
        }
    }
}

/// One Gaussian component of a closed-form tomogram: on the ray (μ,ν)
/// it contributes a normal density with mean √2(μ·cₓ + ν·c_y) and
/// variance (μ²+ν²)(1/2 + widen). Atoms of the weight function have
/// widen = 0; an isotropic Gaussian weight component of variance s has
/// widen = s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussComponent {
    pub weight: f64,
    pub center: C64,
    pub widen: f64,
}

/// A tomogram in one of its two backends.
#[derive(Debug, Clone)]
pub enum Tomogram {
    /// Closed-form Gaussian mixture.
    Mixture(Vec<GaussComponent>),
    /// Lazily evaluated functional over a Fock operator.
    Numeric {
        op: FockOperator,
        quad: QuadratureSettings,
    },
}

impl Tomogram {
    pub fn numeric(op: FockOperator) -> Self {
        Tomogram::Numeric {
            op,
            quad: QuadratureSettings::default(),
        }
    }

    /// w(X,μ,ν) at a single point.
    pub fn eval(&self, ray: Ray, x: f64) -> Result<f64> {
        Ok(self.eval_ray(ray, &[x])?[0])
    }

    /// w(X,μ,ν) over an X-array on one ray.
    pub fn eval_ray(&self, ray: Ray, xs: &[f64]) -> Result<Vec<f64>> {
        match self {
            Tomogram::Mixture(comps) => Ok(xs
                .iter()
                .map(|&x| mixture_value(comps, ray, x))
                .collect()),
            Tomogram::Numeric { op, quad } => tomogram_of_fock_with(op, ray, xs, quad),
        }
    }

    /// Characteristic function χ(k,μ,ν) = ∫ w(X,μ,ν) e^{ikX} dX.
    ///
    /// χ(0) = Tr ρ, |χ| ≤ 1 for density states, and χ(−k) = χ(k)* for
    /// Hermitian operators. In operator form this is Tr[ρ D(α(−k))].
    pub fn charfn(&self, ray: Ray, k: f64) -> C64 {
        match self {
            Tomogram::Mixture(comps) => comps
                .iter()
                .map(|c| {
                    let (m, v) = component_moments(c, ray);
                    C64::new(0.0, k * m).exp() * (-0.5 * k * k * v).exp() * c.weight
                })
                .sum(),
            Tomogram::Numeric { op, .. } => {
                let u = ray_displacement(-k, ray.mu, ray.nu);
                let d = displacement_matrix(u, op.dim());
                trace_product(op, &d)
            }
        }
    }

    /// Mean and variance of X on the given ray.
    pub fn moments(&self, ray: Ray) -> (f64, f64) {
        match self {
            Tomogram::Mixture(comps) => {
                let mut m1 = 0.0;
                let mut m2 = 0.0;
                for c in comps {
                    let (m, v) = component_moments(c, ray);
                    m1 += c.weight * m;
                    m2 += c.weight * (v + m * m);
                }
                (m1, (m2 - m1 * m1).max(0.0))
            }
            Tomogram::Numeric { op, .. } => quadrature_moments(op, ray.mu, ray.nu),
        }
    }

    /// Default X-grid: mean ± `span_sigmas` standard deviations.
    pub fn default_grid(&self, ray: Ray, points: usize, span_sigmas: f64) -> Vec<f64> {
        let (mean, var) = self.moments(ray);
        let sigma = var.sqrt().max(1e-6);
        linspace(
            mean - span_sigmas * sigma,
            mean + span_sigmas * sigma,
            points.max(2),
        )
    }
}

fn component_moments(c: &GaussComponent, ray: Ray) -> (f64, f64) {
    let mean = std::f64::consts::SQRT_2 * (ray.mu * c.center.re + ray.nu * c.center.im);
    let var = (ray.mu * ray.mu + ray.nu * ray.nu) * (0.5 + c.widen);
    (mean, var)
}

fn mixture_value(comps: &[GaussComponent], ray: Ray, x: f64) -> f64 {
    comps
        .iter()
        .map(|c| {
            let (m, v) = component_moments(c, ray);
            c.weight * (-(x - m) * (x - m) / (2.0 * v)).exp()
                / (2.0 * std::f64::consts::PI * v).sqrt()
        })
        .sum()
}

/// Tomogram of a Fock operator on one ray, with default quadrature.
///
/// Computes w(X) = (1/2π) ∫ e^{ikX} Tr[ρ D(α(k))] dk with
/// α(k) = k(ν − iμ)/√2, by trapezoid quadrature over a k-range sized
/// from the operator's Fock support.
pub fn tomogram_of_fock(rho: &FockOperator, ray: Ray, xs: &[f64]) -> Result<Vec<f64>> {
    tomogram_of_fock_with(rho, ray, xs, &QuadratureSettings::default())
}

pub fn tomogram_of_fock_with(
    rho: &FockOperator,
    ray: Ray,
    xs: &[f64],
    quad: &QuadratureSettings,
) -> Result<Vec<f64>> {
    let (ks, chis) = charfn_grid(rho, ray, quad)?;
    let dk = ks[1] - ks[0];
    let inv_two_pi = 0.5 / std::f64::consts::PI;
    let n = ks.len();
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        let mut acc = C64::new(0.0, 0.0);
        for (j, (&k, &chi)) in ks.iter().zip(&chis).enumerate() {
            let trap = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            acc += chi * C64::new(0.0, k * x).exp() * trap;
        }
        out.push(acc.re * dk * inv_two_pi);
    }
    Ok(out)
}

/// The k-grid and Tr[ρ D(α(k))] samples used by the Fourier inversion,
/// with the range extended until the charfn has decayed at the edges.
pub fn charfn_grid(
    rho: &FockOperator,
    ray: Ray,
    quad: &QuadratureSettings,
) -> Result<(Vec<f64>, Vec<C64>)> {
    let sigma0 = ray.sigma0();
    let supp = fock_support(rho, quad.support_tail);
    let mut k_max = (2.0 * (supp as f64).sqrt() + quad.k_sigma) / sigma0;
    let scale = rho.max_abs_entry().max(f64::MIN_POSITIVE);
    for attempt in 0..4 {
        let points = ((quad.base_points as f64) * k_max * sigma0 / quad.k_sigma)
            .ceil()
            .max(quad.base_points as f64) as usize;
        let ks = linspace(-k_max, k_max, points);
        let chis: Vec<C64> = ks
            .iter()
            .map(|&k| {
                let d = displacement_matrix(ray_displacement(k, ray.mu, ray.nu), rho.dim());
                trace_product(rho, &d)
            })
            .collect();
        let edge = chis
            .iter()
            .take(8)
            .chain(chis.iter().rev().take(8))
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if edge <= quad.edge_tol * scale.max(1.0) {
            return Ok((ks, chis));
        }
        if attempt == 3 {
            return Err(Error::Quadrature(format!(
                "characteristic function has not decayed at |k| = {k_max:.3} on ray \
                 (mu, nu) = ({}, {}): edge magnitude {edge:.3e}; the k-range is insufficient",
                ray.mu, ray.nu
            )));
        }
        k_max *= 2.0;
    }
    unreachable!()
}

/// Tr[A·B] without forming the product.
fn trace_product(a: &FockOperator, b: &FockOperator) -> C64 {
    let n = a.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a.mat[(i, j)] * b.mat[(j, i)];
        }
    }
    acc
}

/// Index past the last Fock level carrying weight above `tail` relative
/// to the largest entry.
fn fock_support(rho: &FockOperator, tail: f64) -> usize {
    let n = rho.dim();
    let scale = rho.max_abs_entry();
    if scale == 0.0 {
        return 1;
    }
    for lvl in (0..n).rev() {
        let mut row_col_max: f64 = 0.0;
        for j in 0..n {
            row_col_max = row_col_max.max(rho.mat[(lvl, j)].norm());
            row_col_max = row_col_max.max(rho.mat[(j, lvl)].norm());
        }
        if row_col_max > tail * scale {
            return lvl + 1;
        }
    }
    1
}

/// Controls for the pure-state (wavefunction) path.
#[derive(Debug, Clone, Copy)]
pub struct PureQuadrature {
    pub half_width: f64,
    pub points: usize,
}

impl Default for PureQuadrature {
    fn default() -> Self {
        Self {
            half_width: 16.0,
            points: 16385,
        }
    }
}

/// Tomogram of a pure state given by its position wavefunction,
/// w(X,μ,ν) = (1/2π|ν|)|∫ψ(y) exp(iμy²/2ν − iXy/ν) dy|².
///
/// At ν = 0 the μ↔ν dual form reduces to the position density
/// |ψ(X/μ)|²/|μ| and is evaluated as such.
pub fn tomogram_of_pure<F>(psi: F, ray: Ray, xs: &[f64], quad: &PureQuadrature) -> Vec<f64>
where
    F: Fn(f64) -> C64,
{
    if ray.nu == 0.0 {
        return xs
            .iter()
            .map(|&x| psi(x / ray.mu).norm_sqr() / ray.mu.abs())
            .collect();
    }
    let ys = linspace(-quad.half_width, quad.half_width, quad.points);
    let dy = ys[1] - ys[0];
    // chirped wavefunction ψ(y) e^{iμy²/2ν}, with trapezoid end weights
    let chirped: Vec<C64> = ys
        .iter()
        .enumerate()
        .map(|(j, &y)| {
            let trap = if j == 0 || j == quad.points - 1 { 0.5 } else { 1.0 };
            psi(y) * C64::new(0.0, 0.5 * ray.mu * y * y / ray.nu).exp() * trap
        })
        .collect();
    let norm = dy * dy / (2.0 * std::f64::consts::PI * ray.nu.abs());
    xs.iter()
        .map(|&x| {
            let mut acc = C64::new(0.0, 0.0);
            for (&y, &c) in ys.iter().zip(&chirped) {
                acc += c * C64::new(0.0, -x * y / ray.nu).exp();
            }
            acc.norm_sqr() * norm
        })
        .collect()
}

/// Position wavefunction ψ(y) = Σ cₙ hₙ(y) of a Fock-basis ket, with hₙ
/// the harmonic-oscillator eigenfunctions (ħ = 1).
pub fn wavefunction(ket: &crate::fock::FockVector) -> impl Fn(f64) -> C64 + '_ {
    move |y: f64| {
        let n = ket.dim();
        let mut h_prev = 0.0f64;
        let mut h = std::f64::consts::PI.powf(-0.25) * (-0.5 * y * y).exp();
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..n {
            acc += ket.amps[k] * h;
            let kf = k as f64;
            let h_next =
                (2.0 / (kf + 1.0)).sqrt() * y * h - (kf / (kf + 1.0)).sqrt() * h_prev;
            h_prev = h;
            h = h_next;
        }
        acc
    }
}

/// Scaling-law report for w(λX, λμ, λν) = w(X,μ,ν)/|λ|.
#[derive(Debug, Clone)]
pub struct HomogeneityReport {
    pub lambda: f64,
    pub max_abs_dev: f64,
    pub samples: usize,
}

/// Checks the tomogram homogeneity law on the given sample points.
pub fn check_homogeneity(
    tomogram: &Tomogram,
    lambda: f64,
    ray: Ray,
    xs: &[f64],
) -> Result<HomogeneityReport> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidInput(
            "lambda must be finite and nonzero".into(),
        ));
    }
    let scaled_ray = Ray::new(lambda * ray.mu, lambda * ray.nu)?;
    let scaled_xs: Vec<f64> = xs.iter().map(|&x| lambda * x).collect();
    let base = tomogram.eval_ray(ray, xs)?;
    let scaled = tomogram.eval_ray(scaled_ray, &scaled_xs)?;
    let max_abs_dev = base
        .iter()
        .zip(&scaled)
        .map(|(&b, &s)| (s * lambda.abs() - b).abs())
        .fold(0.0, f64::max);
    Ok(HomogeneityReport {
        lambda,
        max_abs_dev,
        samples: xs.len(),
    })
}

/// A filled grid of tomogram values: one row per ray over a shared X-array.
#[derive(Debug, Clone)]
pub struct TomogramGrid {
    pub rays: Vec<Ray>,
    pub xs: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl TomogramGrid {
    pub fn fill(tomogram: &Tomogram, rays: &[Ray], xs: &[f64]) -> Result<Self> {
        let values = rays
            .iter()
            .map(|&ray| tomogram.eval_ray(ray, xs))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rays: rays.to_vec(),
            xs: xs.to_vec(),
            values,
        })
    }

    /// |∫w dX − 1| per ray under the trapezoid rule.
    pub fn normalization_residuals(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|row| (trapezoid(&self.xs, row) - 1.0).abs())
            .collect()
    }

    pub fn min_value(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Trapezoid rule over a not-necessarily-uniform grid.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|j| a + step * j as f64).collect()
}

/// Closed-form vacuum tomogram,
/// w₀ = exp(−X²/(μ²+ν²)) / √(π(μ²+ν²)).
pub fn vacuum_tomogram_value(ray: Ray, x: f64) -> f64 {
    let r2 = ray.mu * ray.mu + ray.nu * ray.nu;
    (-x * x / r2).exp() / (std::f64::consts::PI * r2).sqrt()
}
