//! Polynomial self-maps of A^N with integer coefficients.
//!
//! A [`PolyMap`] is a tuple of N polynomials in X1..XN over ℤ; evaluated
//! over every commutative ring at once, these are the polynomial families
//! whose composition and inversion behaviour the symbolic layer checks.

use num_traits::One;
use thiserror::Error;

use crate::intpoly::MPolyZ;
use crate::rings::{Ring, Value};

/// Default bound on the number of monomials allowed to appear while
/// composing maps; symbolic inverses can blow up in rank >= 2.
pub const DEFAULT_MONOMIAL_CEILING: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum PolyFamError {
    #[error("arity mismatch: {0} vs {1} variables")]
    ArityMismatch(usize, usize),
    #[error("monomial ceiling {0} exceeded during composition")]
    MonomialCeiling(usize),
}

/// A polynomial self-map of A^N: component i gives the i-th output coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    n_vars: usize,
    components: Vec<MPolyZ>,
}

impl PolyMap {
    pub fn new(components: Vec<MPolyZ>) -> PolyMap {
        let n_vars = components.len();
        assert!(n_vars >= 1, "a polynomial map needs at least one component");
        for c in &components {
            assert_eq!(c.nvars(), n_vars, "component arity mismatch");
        }
        PolyMap { n_vars, components }
    }

    pub fn identity(n_vars: usize) -> PolyMap {
        PolyMap::new((0..n_vars).map(|i| MPolyZ::var(n_vars, i)).collect())
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn components(&self) -> &[MPolyZ] {
        &self.components
    }

    /// f ∘ g: component i is f_i with X_j substituted by g_j.
    pub fn compose(f: &PolyMap, g: &PolyMap) -> Result<PolyMap, PolyFamError> {
        Self::compose_with_ceiling(f, g, DEFAULT_MONOMIAL_CEILING)
    }

    pub fn compose_with_ceiling(
        f: &PolyMap,
        g: &PolyMap,
        ceiling: usize,
    ) -> Result<PolyMap, PolyFamError> {
        if f.n_vars != g.n_vars {
            return Err(PolyFamError::ArityMismatch(f.n_vars, g.n_vars));
        }
        let mut components = Vec::with_capacity(f.n_vars);
        for c in &f.components {
            // cheap a-priori bound: substituting can multiply term counts
            let bound: usize = c
                .terms()
                .iter()
                .map(|(e, _)| {
                    e.iter()
                        .enumerate()
                        .map(|(j, &k)| g.components[j].num_terms().max(1).saturating_pow(k))
                        .product::<usize>()
                })
                .sum();
            if bound > ceiling {
                return Err(PolyFamError::MonomialCeiling(ceiling));
            }
            let s = c.substitute(&g.components);
            if s.num_terms() > ceiling {
                return Err(PolyFamError::MonomialCeiling(ceiling));
            }
            components.push(s);
        }
        Ok(PolyMap::new(components))
    }

    /// True iff component i is exactly X_i for all i.
    pub fn is_identity(&self) -> bool {
        self.components.iter().enumerate().all(|(i, c)| c.is_var(i))
    }

    /// Checks f' ∘ f = id and f ∘ f' = id. Both sides are checked; a genuine
    /// inverse pair can never be one-sided only, so an asymmetric outcome is
    /// reported as `false` rather than trusted.
    pub fn verify_two_sided_inverse(f: &PolyMap, finv: &PolyMap) -> Result<bool, PolyFamError> {
        let left = Self::compose(finv, f)?;
        let right = Self::compose(f, finv)?;
        Ok(left.is_identity() && right.is_identity())
    }

    /// Determinant of the formal Jacobian matrix (∂f_i/∂X_j) over ℤ[X].
    pub fn jacobian_det(&self) -> MPolyZ {
        let n = self.n_vars;
        let jac: Vec<Vec<MPolyZ>> =
            self.components.iter().map(|c| (0..n).map(|j| c.derivative(j)).collect()).collect();
        poly_det(&jac)
    }

    /// Evaluate over a ring at a point.
    pub fn evaluate(&self, ring: &Ring, point: &[Value]) -> Vec<Value> {
        assert_eq!(point.len(), self.n_vars, "evaluation arity mismatch");
        self.components
            .iter()
            .map(|c| {
                c.eval_generic(
                    point,
                    &|n| ring.from_int(n),
                    &|a, b| ring.add(a, b),
                    &|a, b| ring.mul(a, b),
                )
            })
            .collect()
    }
}

/// Determinant of a square polynomial matrix by cofactor expansion
/// (dimensions here are at most the rank-2 cell sizes, so N! is fine).
fn poly_det(m: &[Vec<MPolyZ>]) -> MPolyZ {
    let n = m.len();
    if n == 0 {
        return MPolyZ::one(0);
    }
    let nv = m[0][0].nvars();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MPolyZ::zero(nv);
    for (j, top) in m[0].iter().enumerate() {
        if top.is_zero() {
            continue;
        }
        let minor: Vec<Vec<MPolyZ>> = m[1..]
            .iter()
            .map(|row| {
                row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect()
            })
            .collect();
        let cof = top.mul(&poly_det(&minor));
        acc = if j % 2 == 0 { acc.add(&cof) } else { acc.sub(&cof) };
    }
    acc
}

/// True iff the polynomial is the constant +1 or -1.
pub fn is_unit_constant(p: &MPolyZ) -> bool {
    p.as_constant().map_or(false, |c| c.is_one() || (-c).is_one())
}
