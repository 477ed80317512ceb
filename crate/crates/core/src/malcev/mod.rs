//! Torsion-free nilpotent groups in Mal'cev coordinates, their finite
//! quotients, root densities of coordinate polynomials and derivatives of maps.

mod density;
mod derivative;
mod group;
mod poly;

pub use density::{dphi_quotient_sequence, root_density, univariate_bound_holds, vanishing_density, QuotientSequence};
pub use derivative::{degree_at_most, second_derivative_direct, DegreeVerdict, EvalMap};
pub use group::{FastMalcev, MalcevElement, MalcevGroup};
pub use poly::{I128Poly, IntPolynomial, ModPoly};

use crate::error::Result;
use crate::group::GroupWord;

/// Evaluates an equation at an assignment of Mal'cev elements.
pub fn eval_equation(
    g: &MalcevGroup,
    w: &GroupWord<MalcevElement>,
    assignment: &[MalcevElement],
) -> Result<MalcevElement> {
    w.evaluate(g, assignment)
}
