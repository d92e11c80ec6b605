//! Truncated number-basis numerics: state vectors, operators, displacement
//! matrices and the shared density-state validator.
//!
//! Conventions: ħ = 1, â = (q̂ + ip̂)/√2, so q̂ = (â+â†)/√2 and
//! p̂ = (â−â†)/(i√2). Dense matrices only; desk scale is N ≤ 256.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::coherent::Span;
use crate::error::{Error, Result};

/// Max-abs-entry tolerance for the Hermiticity check.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Tolerance on |Tr ρ − 1|.
pub const TRACE_TOL: f64 = 1e-8;
/// Eigenvalues above −PSD_TOL count as nonnegative.
pub const PSD_TOL: f64 = 1e-8;

/// How Fock dimensions are chosen when embedding coherent-state objects.
#[derive(Debug, Clone, Copy)]
pub struct TruncationPolicy {
    /// Per-dyad Poisson tail bound Σ_{k≥N} e^{−R²} R^{2k}/k! to leave
    /// outside the truncation.
    pub target_tail: f64,
    /// Hard cap on the matrix dimension.
    pub max_dim: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            target_tail: 1e-12,
            max_dim: 256,
        }
    }
}

impl TruncationPolicy {
    pub fn new(target_tail: f64, max_dim: usize) -> Result<Self> {
        if !(target_tail > 0.0 && target_tail < 1.0) {
            return Err(Error::InvalidInput(format!(
                "target_tail must lie in (0,1), got {target_tail}"
            )));
        }
        Ok(Self {
            target_tail,
            max_dim,
        })
    }

    /// Smallest dimension keeping the Poisson tail of a coherent state of
    /// radius `r` below `target_tail`.
    pub fn dim_for_radius(&self, r: f64) -> Result<usize> {
        let needed = min_dim_for_tail(r * r, self.target_tail);
        if needed > self.max_dim {
            return Err(Error::MaxDimExceeded {
                needed,
                max_dim: self.max_dim,
            });
        }
        Ok(needed)
    }

    /// Dimension for embedding a span: the per-dyad dimension, doubled so
    /// that operator products stay accurate after truncation.
    pub fn span_dim(&self, max_radius: f64) -> Result<usize> {
        let needed = 2 * min_dim_for_tail(max_radius * max_radius, self.target_tail);
        if needed > self.max_dim {
            return Err(Error::MaxDimExceeded {
                needed,
                max_dim: self.max_dim,
            });
        }
        Ok(needed)
    }
}

/// Poisson tail Σ_{k≥n} e^{−x} x^k / k!, summed from the top so small
/// tails keep full relative precision.
pub fn poisson_tail(x: f64, n: usize) -> f64 {
    if x <= 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let mut term = (-x).exp();
    let mut tail = 0.0;
    let mut cum = 0.0;
    let stop = (x + 12.0 * x.sqrt() + 60.0).ceil() as usize;
    for k in 0..stop.max(n + 60) {
        if k >= n {
            tail += term;
        } else {
            cum += term;
        }
        term *= x / (k + 1) as f64;
        if k > n && k as f64 > x && term < tail * 1e-18 {
            break;
        }
    }
    // guard: for n far left of the bulk the suffix sum is 1 − head
    if tail > 0.5 {
        (1.0 - cum).max(tail.min(1.0))
    } else {
        tail
    }
}

fn min_dim_for_tail(x: f64, target: f64) -> usize {
    let mut n = 1;
    while poisson_tail(x, n) > target {
        n += 1;
        if n > 100_000 {
            break;
        }
    }
    n
}

/// A ket in the truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub amps: DVector<C64>,
}

impl FockVector {
    pub fn new(amps: DVector<C64>) -> Self {
        Self { amps }
    }

    pub fn from_slice(amps: &[C64]) -> Self {
        Self {
            amps: DVector::from_column_slice(amps),
        }
    }

    /// Number state |n⟩ in dimension `dim`.
    pub fn number_state(n: usize, dim: usize) -> Self {
        let mut amps = DVector::zeros(dim);
        amps[n] = C64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// |self⟩⟨self| as an operator.
    pub fn projector(&self) -> FockOperator {
        let n = self.dim();
        let mut mat = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                mat[(i, j)] = self.amps[i] * self.amps[j].conj();
            }
        }
        FockOperator { mat }
    }

    /// Zero-pad (or error on shrink) to dimension `dim`.
    pub fn padded(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::InvalidInput(format!(
                "cannot shrink vector of dim {} to {}",
                self.dim(),
                dim
            )));
        }
        let mut amps = DVector::zeros(dim);
        amps.rows_mut(0, self.dim()).copy_from(&self.amps);
        Ok(Self { amps })
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= 0.0 {
            return Err(Error::InvalidInput("cannot normalize zero vector".into()));
        }
        Ok(Self {
            amps: &self.amps / C64::new(n, 0.0),
        })
    }
}

/// Truncated coherent state, cₙ = e^{−|α|²/2} αⁿ/√n!.
pub fn coherent_vector(alpha: C64, dim: usize) -> FockVector {
    let mut amps = DVector::zeros(dim.max(1));
    let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..dim.max(1) {
        amps[n] = c;
        c *= alpha / ((n + 1) as f64).sqrt();
    }
    FockVector { amps }
}

/// Truncated coherent state whose tail is checked against `target_tail`.
pub fn coherent_vector_with_tail(alpha: C64, dim: usize, target_tail: f64) -> Result<FockVector> {
    let tail = poisson_tail(alpha.norm_sqr(), dim);
    if tail > target_tail {
        return Err(Error::DimensionTooSmall {
            dim,
            needed: min_dim_for_tail(alpha.norm_sqr(), target_tail),
            target: target_tail,
        });
    }
    Ok(coherent_vector(alpha, dim))
}

/// An operator on the truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub mat: DMatrix<C64>,
}

impl FockOperator {
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidInput(format!(
                "operator matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { mat })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.mat.diagonal().sum()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
        }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        Self {
            mat: &self.mat * &other.mat,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            mat: &self.mat + &other.mat,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            mat: &self.mat - &other.mat,
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            mat: self.mat.map(|v| v * factor),
        }
    }

    /// ⟨v|M|v⟩.
    pub fn expectation(&self, v: &FockVector) -> C64 {
        v.amps.dotc(&(&self.mat * &v.amps))
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (&self.mat - &other.mat).norm()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.mat.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Zero-pad to dimension `dim`.
    pub fn padded(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::InvalidInput(format!(
                "cannot shrink operator of dim {} to {}",
                self.dim(),
                dim
            )));
        }
        let mut mat = DMatrix::zeros(dim, dim);
        mat.view_mut((0, 0), (self.dim(), self.dim()))
            .copy_from(&self.mat);
        Ok(Self { mat })
    }

    /// Hermiticity defect: max |(M − M†)ᵢⱼ|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Checks the density-state invariants: Hermitian within 1e−10,
    /// unit trace within 1e−8, positive semidefinite within 1e−8.
    pub fn validate_density(&self) -> Result<()> {
        let h = self.hermiticity_defect();
        if h > HERMITICITY_TOL {
            return Err(Error::NotDensity(format!(
                "hermiticity defect {h:.3e} exceeds {HERMITICITY_TOL:.1e}"
            )));
        }
        let t = self.trace();
        if (t.re - 1.0).abs() > TRACE_TOL || t.im.abs() > TRACE_TOL {
            return Err(Error::NotDensity(format!(
                "trace {t} deviates from 1 beyond {TRACE_TOL:.1e}"
            )));
        }
        let eigs = hermitian_eigenvalues(&self.mat);
        if let Some(&min) = eigs.first() {
            if min < -PSD_TOL {
                return Err(Error::NotDensity(format!(
                    "minimum eigenvalue {min:.3e} below −{PSD_TOL:.1e}"
                )));
            }
        }
        Ok(())
    }
}

/// Real eigenvalues of a Hermitian matrix, sorted ascending.
pub fn hermitian_eigenvalues(mat: &DMatrix<C64>) -> Vec<f64> {
    let eig = mat.clone().symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Purity Tr ρ² of a density state.
pub fn purity(rho: &FockOperator) -> Result<f64> {
    rho.validate_density()?;
    Ok((&rho.mat * &rho.mat).diagonal().sum().re)
}

/// Displacement operator D(α) = exp(α↠− α*â) in the truncated basis,
/// via the associated-Laguerre closed form
/// ⟨n+d|D(α)|n⟩ = √(n!/(n+d)!) α^d e^{−|α|²/2} L_n^{(d)}(|α|²).
pub fn displacement_matrix(alpha: C64, dim: usize) -> FockOperator {
    let n = dim.max(1);
    let x = alpha.norm_sqr();
    let mut mat = DMatrix::zeros(n, n);
    fill_displacement_band(&mut mat, alpha, x, false);
    fill_displacement_band(&mut mat, -alpha.conj(), x, true);
    FockOperator { mat }
}

/// Fills the lower (`upper = false`) or strict upper (`upper = true`)
/// triangle along diagonals of offset d, carrying the prefactor
/// e^{−x/2} α^d √(n!/(n+d)!) multiplicatively so nothing overflows.
fn fill_displacement_band(mat: &mut DMatrix<C64>, alpha: C64, x: f64, upper: bool) {
    let n = mat.nrows();
    let half = C64::new((-0.5 * x).exp(), 0.0);
    for d in 0..n {
        if upper && d == 0 {
            continue;
        }
        let mut w = half;
        for j in 1..=d {
            w *= alpha / (j as f64).sqrt();
        }
        // associated Laguerre L_k^{(d)}(x) by the three-term recurrence
        let mut lm1 = 0.0f64;
        let mut l = 1.0f64;
        for k in 0..(n - d) {
            let value = w * l;
            if upper {
                mat[(k, k + d)] = value;
            } else {
                mat[(k + d, k)] = value;
            }
            let kf = k as f64;
            let df = d as f64;
            let lp1 = ((2.0 * kf + 1.0 + df - x) * l - (kf + df) * lm1) / (kf + 1.0);
            lm1 = l;
            l = lp1;
            w *= ((kf + 1.0) / (kf + 1.0 + df)).sqrt();
        }
    }
}

/// Embeds a coherent span as an N×N matrix with N chosen by the policy
/// (per-dyad tail bound, then doubled for products).
pub fn span_to_fock(span: &Span, policy: &TruncationPolicy) -> Result<FockOperator> {
    let dim = policy.span_dim(span.max_radius())?;
    Ok(span_to_fock_dim(span, dim))
}

/// Embeds a coherent span at an explicit dimension.
pub fn span_to_fock_dim(span: &Span, dim: usize) -> FockOperator {
    let n = dim.max(1);
    let mut mat = DMatrix::zeros(n, n);
    for d in span.dyads() {
        let ket = coherent_vector(d.ket, n);
        let bra = coherent_vector(d.bra, n);
        for i in 0..n {
            for j in 0..n {
                mat[(i, j)] += (ket.amps[i] * bra.amps[j].conj()) * d.weight;
            }
        }
    }
    FockOperator { mat }
}

/// Quadrature operator μq̂ + νp̂ (tridiagonal in the number basis).
pub fn ray_quadrature_operator(mu: f64, nu: f64, dim: usize) -> FockOperator {
    let mut mat = DMatrix::zeros(dim, dim);
    // q = (a + a†)/√2, p = (a − a†)/(i√2):
    // ⟨n−1|μq+νp|n⟩ = √(n/2)(μ − iν), ⟨n+1|μq+νp|n⟩ = √((n+1)/2)(μ + iν)
    let s = std::f64::consts::SQRT_2;
    for n in 0..dim {
        if n + 1 < dim {
            let f = ((n + 1) as f64).sqrt() / s;
            mat[(n, n + 1)] = C64::new(mu, -nu) * f;
            mat[(n + 1, n)] = C64::new(mu, nu) * f;
        }
    }
    FockOperator { mat }
}

/// Mean and variance of the quadrature μq̂+νp̂ in the state ρ.
pub fn quadrature_moments(rho: &FockOperator, mu: f64, nu: f64) -> (f64, f64) {
    let q = ray_quadrature_operator(mu, nu, rho.dim());
    let m1 = (&rho.mat * &q.mat).diagonal().sum().re;
    let q2 = &q.mat * &q.mat;
    let m2 = (&rho.mat * q2).diagonal().sum().re;
    (m1, (m2 - m1 * m1).max(0.0))
}
