//! Exact operator algebra over finite sums of coherent-state dyads.
//!
//! A [`Span`] is a finite sum Σ wᵢⱼ |αᵢ⟩⟨βⱼ| of weighted coherent dyads.
//! Products, adjoints and traces close over this class and evaluate in
//! closed form through Gaussian overlaps, so spans serve as the analytic
//! oracle against which the truncated Fock backend is checked.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Absolute tolerance on phase-space coordinates when merging dyads.
pub const MERGE_TOL: f64 = 1e-12;

/// Overlap ⟨α|β⟩ = exp(−|α|²/2 − |β|²/2 + α*β) of two coherent states.
///
/// The modulus is exp(−|α−β|²/2) ≤ 1, with equality iff α = β.
pub fn overlap(alpha: C64, beta: C64) -> C64 {
    (-0.5 * alpha.norm_sqr() - 0.5 * beta.norm_sqr() + alpha.conj() * beta).exp()
}

/// Matrix element ⟨β|D(u)|α⟩ of the displacement operator between
/// coherent states, from D(u)|α⟩ = e^{(uα* − u*α)/2} |α+u⟩.
pub fn displaced_overlap(beta: C64, u: C64, alpha: C64) -> C64 {
    let phase = 0.5 * (u * alpha.conj() - u.conj() * alpha);
    phase.exp() * overlap(beta, alpha + u)
}

/// Diagonal Weyl-system expectation ⟨z|e^{−k(iμq̂+iνp̂)}|z⟩.
///
/// Equals exp(z*α − α*z − |α|²/2) with α = k(ν − iμ)/√2; the modulus is
/// exp(−|α|²/2) ≤ 1.
pub fn weyl_expectation(z: C64, k: f64, mu: f64, nu: f64) -> C64 {
    let alpha = ray_displacement(k, mu, nu);
    (z.conj() * alpha - alpha.conj() * z - C64::new(0.5 * alpha.norm_sqr(), 0.0)).exp()
}

/// Displacement argument α = k(ν − iμ)/√2 of the ray (μ,ν) at Fourier
/// variable k, so e^{−ik(μq̂+νp̂)} = D(α).
pub fn ray_displacement(k: f64, mu: f64, nu: f64) -> C64 {
    C64::new(nu, -mu) * (k / std::f64::consts::SQRT_2)
}

/// One weighted dyad w·|ket⟩⟨bra|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dyad {
    pub weight: C64,
    pub ket: C64,
    pub bra: C64,
}

impl Dyad {
    pub fn new(weight: C64, ket: C64, bra: C64) -> Result<Self> {
        for v in [weight, ket, bra] {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "non-finite dyad component {v}"
                )));
            }
        }
        Ok(Self { weight, ket, bra })
    }

    /// Whether ket and bra coincide within the merge tolerance.
    pub fn is_diagonal(&self) -> bool {
        (self.ket - self.bra).norm() <= MERGE_TOL
    }
}

/// A finite complex-weighted sum of coherent dyads. The empty span is the
/// zero operator.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Span {
    dyads: Vec<Dyad>,
}

impl Span {
    /// The zero operator.
    pub fn empty() -> Self {
        Self { dyads: Vec::new() }
    }

    pub fn from_dyads(dyads: Vec<Dyad>) -> Self {
        let mut s = Self { dyads };
        s.merge();
        s
    }

    /// Single dyad w·|ket⟩⟨bra|.
    pub fn dyad(weight: C64, ket: C64, bra: C64) -> Result<Self> {
        Ok(Self {
            dyads: vec![Dyad::new(weight, ket, bra)?],
        })
    }

    /// Projector |z⟩⟨z|.
    pub fn projector(z: C64) -> Self {
        Self {
            dyads: vec![Dyad {
                weight: C64::new(1.0, 0.0),
                ket: z,
                bra: z,
            }],
        }
    }

    /// Convex (or signed) mixture Σ wᵢ |zᵢ⟩⟨zᵢ| of diagonal dyads.
    pub fn mixture(terms: &[(f64, C64)]) -> Result<Self> {
        let dyads = terms
            .iter()
            .map(|&(w, z)| Dyad::new(C64::new(w, 0.0), z, z))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_dyads(dyads))
    }

    /// Projector onto the (unnormalized) ket Σ cᵢ |zᵢ⟩, i.e.
    /// ΣΣ cᵢ c̄ⱼ |zᵢ⟩⟨zⱼ| divided by the squared norm.
    pub fn pure(terms: &[(C64, C64)]) -> Result<Self> {
        let mut dyads = Vec::with_capacity(terms.len() * terms.len());
        let mut norm_sqr = C64::new(0.0, 0.0);
        for &(ci, zi) in terms {
            for &(cj, zj) in terms {
                norm_sqr += ci * cj.conj() * overlap(zj, zi);
                dyads.push(Dyad::new(ci * cj.conj(), zi, zj)?);
            }
        }
        if norm_sqr.re <= 0.0 {
            return Err(Error::InvalidInput(
                "pure span has vanishing norm".into(),
            ));
        }
        let inv = C64::new(1.0 / norm_sqr.re, 0.0);
        for d in &mut dyads {
            d.weight *= inv;
        }
        Ok(Self::from_dyads(dyads))
    }

    pub fn dyads(&self) -> &[Dyad] {
        &self.dyads
    }

    pub fn is_empty(&self) -> bool {
        self.dyads.is_empty()
    }

    /// Largest |coordinate| over all kets and bras; 0 for the empty span.
    pub fn max_radius(&self) -> f64 {
        self.dyads
            .iter()
            .flat_map(|d| [d.ket.norm(), d.bra.norm()])
            .fold(0.0, f64::max)
    }

    /// Operator product, dyad by dyad:
    /// (w₁|α⟩⟨β|)(w₂|γ⟩⟨δ|) = w₁w₂⟨β|γ⟩ |α⟩⟨δ|.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut dyads = Vec::with_capacity(self.dyads.len() * other.dyads.len());
        for a in &self.dyads {
            for b in &other.dyads {
                dyads.push(Dyad {
                    weight: a.weight * b.weight * overlap(a.bra, b.ket),
                    ket: a.ket,
                    bra: b.bra,
                });
            }
        }
        Self::from_dyads(dyads)
    }

    /// Trace Σ wᵢⱼ ⟨βⱼ|αᵢ⟩.
    pub fn trace(&self) -> C64 {
        self.dyads
            .iter()
            .map(|d| d.weight * overlap(d.bra, d.ket))
            .sum()
    }

    /// Adjoint, (w|α⟩⟨β|)† = w*|β⟩⟨α|.
    pub fn adjoint(&self) -> Self {
        Self::from_dyads(
            self.dyads
                .iter()
                .map(|d| Dyad {
                    weight: d.weight.conj(),
                    ket: d.bra,
                    bra: d.ket,
                })
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut dyads = self.dyads.clone();
        dyads.extend_from_slice(&other.dyads);
        Self::from_dyads(dyads)
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            dyads: self
                .dyads
                .iter()
                .map(|d| Dyad {
                    weight: factor * d.weight,
                    ..*d
                })
                .collect(),
        }
    }

    /// Characteristic-function value Tr[S D(u)] = Σ wᵢⱼ ⟨βⱼ|D(u)|αᵢ⟩.
    pub fn tr_displacement(&self, u: C64) -> C64 {
        self.dyads
            .iter()
            .map(|d| d.weight * displaced_overlap(d.bra, u, d.ket))
            .sum()
    }

    /// Merge dyads whose coordinates coincide within [`MERGE_TOL`] and drop
    /// terms with negligible weight, to stop span growth in iterated
    /// products.
    fn merge(&mut self) {
        let mut merged: Vec<Dyad> = Vec::with_capacity(self.dyads.len());
        for d in self.dyads.drain(..) {
            match merged.iter_mut().find(|m| {
                (m.ket - d.ket).norm() <= MERGE_TOL && (m.bra - d.bra).norm() <= MERGE_TOL
            }) {
                Some(m) => m.weight += d.weight,
                None => merged.push(d),
            }
        }
        merged.retain(|d| d.weight.norm() > 0.0);
        self.dyads = merged;
    }

    /// Termwise comparison after canonical ordering; weights and
    /// coordinates must agree within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        fn canon(s: &Span) -> Vec<Dyad> {
            let mut d = s.dyads.clone();
            d.sort_by(|a, b| {
                (a.ket.re, a.ket.im, a.bra.re, a.bra.im)
                    .partial_cmp(&(b.ket.re, b.ket.im, b.bra.re, b.bra.im))
                    .unwrap()
            });
            d
        }
        let a = canon(self);
        let b = canon(other);
        if a.len() != b.len() {
            return false;
        }
        a.iter().zip(&b).all(|(x, y)| {
            (x.ket - y.ket).norm() <= tol
                && (x.bra - y.bra).norm() <= tol
                && (x.weight - y.weight).norm() <= tol
        })
    }

    /// Max deviation in the termwise comparison, or `None` when the spans
    /// have different dyad structure.
    pub fn max_deviation(&self, other: &Self) -> Option<f64> {
        if self.dyads.len() != other.dyads.len() {
            return None;
        }
        let mut dev: f64 = 0.0;
        for d in &self.dyads {
            let m = other.dyads.iter().find(|m| {
                (m.ket - d.ket).norm() <= MERGE_TOL * 10.0
                    && (m.bra - d.bra).norm() <= MERGE_TOL * 10.0
            })?;
            dev = dev.max((m.weight - d.weight).norm());
        }
        Some(dev)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn overlap_identity_and_vacuum() {
        let a = c(0.7, -1.3);
        assert!((overlap(a, a) - c(1.0, 0.0)).norm() < 1e-15);
        let b = c(1.1, 0.4);
        let expect = (-0.5 * b.norm_sqr()).exp();
        assert!((overlap(c(0.0, 0.0), b) - c(expect, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn overlap_against_fock_inner_product() {
        // oracle: truncated Fock expansion c_n = e^{−|α|²/2} α^n/√n!
        let alpha = c(1.0, 0.0);
        let beta = c(0.0, 1.0);
        let n = 40;
        let mut acc = C64::new(0.0, 0.0);
        let mut ca = c((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        let mut cb = c((-0.5 * beta.norm_sqr()).exp(), 0.0);
        for k in 0..n {
            acc += ca.conj() * cb;
            let s = ((k + 1) as f64).sqrt();
            ca *= alpha / s;
            cb *= beta / s;
        }
        assert!((overlap(alpha, beta) - acc).norm() < 1e-12);
        // also the closed form exp(−1 + i) for this pair
        assert!((overlap(alpha, beta) - c(-1.0, 1.0).exp()).norm() < 1e-15);
    }

    #[test]
    fn overlap_modulus_bounded() {
        let a = c(0.3, 2.0);
        let b = c(-1.0, 0.5);
        assert!(overlap(a, b).norm() < 1.0);
        assert!((overlap(a, b).norm() - (-0.5 * (a - b).norm_sqr()).exp()).abs() < 1e-15);
    }

    #[test]
    fn vacuum_projector_is_idempotent() {
        let p0 = Span::projector(c(0.0, 0.0));
        let sq = p0.multiply(&p0);
        assert!(sq.approx_eq(&p0, 0.0), "ρ₀² = ρ₀ must be exact");
    }

    #[test]
    fn empty_span_is_absorbing() {
        let s = Span::projector(c(1.0, 2.0));
        assert!(Span::empty().multiply(&s).is_empty());
        assert!(s.multiply(&Span::empty()).is_empty());
        assert_eq!(Span::empty().trace(), c(0.0, 0.0));
    }

    #[test]
    fn projector_product_trace() {
        // Tr(|α⟩⟨α| |β⟩⟨β|) = |⟨α|β⟩|² = e^{−1} for α=1, β=2
        let p = Span::projector(c(1.0, 0.0)).multiply(&Span::projector(c(2.0, 0.0)));
        let tr = p.trace();
        assert!((tr - c((-1.0f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn trace_of_diagonal_mixture() {
        let s = Span::mixture(&[(0.5, c(0.0, 0.0)), (0.5, c(2.0, 0.0))]).unwrap();
        assert!((s.trace() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn trace_of_offdiagonal_dyad() {
        let a = c(0.4, 0.2);
        let b = c(-0.3, 1.0);
        let s = Span::dyad(c(1.0, 0.0), a, b).unwrap();
        assert!((s.trace() - overlap(b, a)).norm() < 1e-15);
    }

    #[test]
    fn adjoint_rules() {
        let a = c(0.5, 0.0);
        let b = c(0.0, 0.7);
        let s = Span::dyad(c(0.0, 1.0), a, b).unwrap();
        let adj = s.adjoint();
        assert_eq!(adj.dyads()[0].weight, c(0.0, -1.0));
        assert_eq!(adj.dyads()[0].ket, b);
        assert_eq!(adj.dyads()[0].bra, a);
        let diag = Span::projector(a);
        assert!(diag.adjoint().approx_eq(&diag, 0.0));
    }

    #[test]
    fn trace_of_adjoint_is_conjugate() {
        let s = Span::from_dyads(vec![
            Dyad::new(c(0.3, 0.8), c(1.0, 0.2), c(-0.5, 0.1)).unwrap(),
            Dyad::new(c(-0.1, 0.4), c(0.0, -1.2), c(0.9, 0.0)).unwrap(),
        ]);
        assert!((s.adjoint().trace() - s.trace().conj()).norm() < 1e-15);
    }

    #[test]
    fn weyl_expectation_basics() {
        let z = c(0.8, -0.2);
        assert!((weyl_expectation(z, 0.0, 1.0, 0.5) - c(1.0, 0.0)).norm() < 1e-15);
        // z = 0: exp(−k²(μ²+ν²)/4)
        let (k, mu, nu) = (1.3f64, 0.7f64, -1.1f64);
        let expect = (-k * k * (mu * mu + nu * nu) / 4.0).exp();
        assert!((weyl_expectation(c(0.0, 0.0), k, mu, nu) - c(expect, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn weyl_expectation_formula() {
        // z=1, k=1, μ=1, ν=0 → α = −i/√2
        let alpha = ray_displacement(1.0, 1.0, 0.0);
        assert!((alpha - c(0.0, -1.0 / std::f64::consts::SQRT_2)).norm() < 1e-15);
        let z = c(1.0, 0.0);
        let expect =
            (z.conj() * alpha - alpha.conj() * z - c(0.5 * alpha.norm_sqr(), 0.0)).exp();
        assert!((weyl_expectation(z, 1.0, 1.0, 0.0) - expect).norm() < 1e-15);
    }

    #[test]
    fn merging_collapses_repeated_dyads() {
        let z = c(1.0, 1.0);
        let s = Span::from_dyads(vec![
            Dyad::new(c(0.25, 0.0), z, z).unwrap(),
            Dyad::new(c(0.75, 0.0), z, z).unwrap(),
        ]);
        assert_eq!(s.dyads().len(), 1);
        assert!((s.dyads()[0].weight - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(Dyad::new(c(f64::NAN, 0.0), c(0.0, 0.0), c(0.0, 0.0)).is_err());
        assert!(Dyad::new(c(1.0, 0.0), c(f64::INFINITY, 0.0), c(0.0, 0.0)).is_err());
    }

    proptest! {
        #[test]
        fn adjoint_is_involutive(ws in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0), 1..6)) {
            let dyads = ws.iter().map(|&(wr, wi, kr, ki, br, bi)| {
                Dyad::new(C64::new(wr, wi), C64::new(kr, ki), C64::new(br, bi)).unwrap()
            }).collect();
            let s = Span::from_dyads(dyads);
            prop_assert!(s.adjoint().adjoint().approx_eq(&s, 1e-14));
        }

        #[test]
        fn multiply_is_associative(coords in proptest::collection::vec(-2.0f64..2.0, 6)) {
            let a = Span::projector(C64::new(coords[0], coords[1]));
            let b = Span::projector(C64::new(coords[2], coords[3]));
            let c = Span::projector(C64::new(coords[4], coords[5]));
            let left = a.multiply(&b).multiply(&c);
            let right = a.multiply(&b.multiply(&c));
            prop_assert!(left.approx_eq(&right, 1e-12));
        }

        #[test]
        fn diagonal_mixture_trace_and_purity(ws in proptest::collection::vec((0.05f64..1.0, -2.0f64..2.0, -2.0f64..2.0), 1..5)) {
            let total: f64 = ws.iter().map(|w| w.0).sum();
            let terms: Vec<(f64, C64)> = ws.iter()
                .map(|&(w, x, y)| (w / total, C64::new(x, y)))
                .collect();
            let s = Span::mixture(&terms).unwrap();
            prop_assert!((s.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
            let p = s.multiply(&s).trace().re;
            prop_assert!(p > 0.0 && p <= 1.0 + 1e-12);
        }
    }
}
