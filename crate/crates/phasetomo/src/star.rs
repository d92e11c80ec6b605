//! Star product of diagonal symbols, realized through the exact operator
//! route: multiplying the coherent-span reconstructions of two atomic
//! symbols is precisely the product the star-product kernel defines, so
//! no kernel integral is ever evaluated pointwise (as a generalized
//! function it has none).

use num_complex::Complex64 as C64;

use crate::coherent::{Span, MERGE_TOL};
use crate::diagonal::{weight_to_span, PhaseWeight, WeightAtom};
use crate::error::{Error, Result};

/// Result of a star product of atomic symbols: the operator form always
/// exists; the symbol form only when every resulting dyad is diagonal
/// with a real weight.
#[derive(Debug, Clone)]
pub struct SymbolProduct {
    /// The product operator in the exact span algebra.
    pub operator: Span,
    /// The atomic symbol of the product, when it stays in the class.
    pub weight: Option<PhaseWeight>,
}

impl SymbolProduct {
    fn from_span(operator: Span) -> Self {
        let weight = symbol_of_diagonal_span(&operator);
        Self { operator, weight }
    }
}

/// Atomic symbol of a span whose dyads are all diagonal with real
/// weights; `None` once any dyad leaves that class.
fn symbol_of_diagonal_span(span: &Span) -> Option<PhaseWeight> {
    let mut atoms = Vec::with_capacity(span.dyads().len());
    for d in span.dyads() {
        if !d.is_diagonal() || d.weight.im.abs() > MERGE_TOL {
            return None;
        }
        atoms.push(WeightAtom {
            weight: d.weight.re,
            location: d.ket,
        });
    }
    PhaseWeight::symbol(atoms, Vec::new()).ok()
}

/// Star product (φ_A ∗ φ_B)(z) of two atoms-only symbols.
pub fn star(phi_a: &PhaseWeight, phi_b: &PhaseWeight) -> Result<SymbolProduct> {
    let a = atoms_only_span(phi_a)?;
    let b = atoms_only_span(phi_b)?;
    Ok(SymbolProduct::from_span(a.multiply(&b)))
}

/// Star product of a whole sequence, left to right.
pub fn star_chain(symbols: &[&PhaseWeight]) -> Result<SymbolProduct> {
    let mut spans = symbols.iter().map(|s| atoms_only_span(s));
    let first = spans
        .next()
        .ok_or_else(|| Error::InvalidInput("empty star chain".into()))??;
    let mut acc = first;
    for s in spans {
        acc = acc.multiply(&s?);
    }
    Ok(SymbolProduct::from_span(acc))
}

fn atoms_only_span(phi: &PhaseWeight) -> Result<Span> {
    if !phi.is_atoms_only() {
        return Err(Error::OutOfClass(
            "star products are implemented for atoms-only symbols; Gaussian \
             components are not closed under the product"
                .into(),
        ));
    }
    weight_to_span(phi)
}

/// Symbol integral of a product, ∫(φ_A ∗ φ_B)(z) dx dy — equal to the
/// trace of the product operator.
pub fn star_trace(product: &SymbolProduct) -> C64 {
    product.operator.trace()
}

/// Associativity report for (A∗B)∗C vs A∗(B∗C).
#[derive(Debug, Clone)]
pub struct AssociativityReport {
    pub max_abs_dev: f64,
    pub dyads: usize,
}

/// Checks (A∗B)∗C = A∗(B∗C) termwise in the span algebra.
pub fn kernel_check_associativity(
    phi_a: &PhaseWeight,
    phi_b: &PhaseWeight,
    phi_c: &PhaseWeight,
) -> Result<AssociativityReport> {
    let a = atoms_only_span(phi_a)?;
    let b = atoms_only_span(phi_b)?;
    let c = atoms_only_span(phi_c)?;
    let left = a.multiply(&b).multiply(&c);
    let right = a.multiply(&b.multiply(&c));
    if left.is_empty() && right.is_empty() {
        return Ok(AssociativityReport {
            max_abs_dev: 0.0,
            dyads: 0,
        });
    }
    let max_abs_dev = left.max_deviation(&right).ok_or_else(|| {
        Error::Precondition("associativity comparison found mismatched dyad structure".into())
    })?;
    Ok(AssociativityReport {
        max_abs_dev,
        dyads: left.dyads().len(),
    })
}
