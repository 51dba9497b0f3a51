//! Two-variable `(ξ, ξ̄)` Euler data for small bundles, used to check that
//! setting `ξ = 0` recovers the antiholomorphic classes.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cohom_ring::{CohomClass, RingSpec};
use crate::equivariant::bundle::{IsotypicBundle, RealEquivariantBundle};
use crate::equivariant::class::EquivariantClass;
use crate::error::{Error, Result};
use crate::lattice_fn::ArgumentChoice;
use crate::scalar::Field;

pub const TWO_VARIABLE_MAX_RANK: u32 = 4;

/// Polynomial in `ξ, ξ̄` with cohomology coefficients; key `(a, b)` is `ξ^a ξ̄^b`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoVariableClass<C> {
    ring: Arc<RingSpec>,
    terms: BTreeMap<(u32, u32), CohomClass<C>>,
}

impl<C: Field> TwoVariableClass<C> {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        TwoVariableClass {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn term(a: u32, b: u32, c: CohomClass<C>) -> Self {
        let mut out = Self::zero(c.ring());
        out.add_term((a, b), c);
        out
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Self::term(0, 0, CohomClass::one(ring))
    }

    /// The weight `w_λ = λξ̄ − λ̄ξ`.
    pub fn weight(ring: &Arc<RingSpec>, lambda: &C) -> Self {
        let mut out = Self::term(0, 1, CohomClass::constant(ring, lambda.clone()));
        out.add_term((1, 0), CohomClass::constant(ring, -lambda.conj()));
        out
    }

    fn add_term(&mut self, key: (u32, u32), c: CohomClass<C>) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&key) {
            Some(old) => old.add(&c).expect("same ring"),
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(&self.ring);
        for (k, c) in &self.terms {
            out.add_term(*k, c.scale(s));
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(&self.ring);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.add_term((a1 + a2, b1 + b2), c1.multiply(c2)?);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut out = Self::one(&self.ring);
        for _ in 0..n {
            out = out.multiply(self)?;
        }
        Ok(out)
    }

    /// Set `ξ = 0`.
    pub fn restrict_xi_zero(&self) -> EquivariantClass<C> {
        let mut out = EquivariantClass::zero(&self.ring);
        for ((a, b), c) in &self.terms {
            if *a == 0 {
                out = out
                    .add(&EquivariantClass::term(*b as i32, c.clone()))
                    .expect("same ring");
            }
        }
        out
    }
}

/// `∏_λ Σ_j c_j(E_λ)·w_λ^{rk−j}`.
pub fn top_chern_two_variable<C: Field>(b: &IsotypicBundle<C>) -> Result<TwoVariableClass<C>> {
    let ring = b.ring();
    let mut out = TwoVariableClass::one(ring);
    for c in b.effective() {
        let w = TwoVariableClass::weight(ring, c.lambda());
        let mut factor = TwoVariableClass::zero(ring);
        for j in 0..=c.rank() {
            factor = factor.add(&w.pow(c.rank() - j)?.multiply(&TwoVariableClass::term(
                0,
                0,
                c.chern(j as usize),
            ))?);
        }
        out = out.multiply(&factor)?;
    }
    Ok(out)
}

/// `∏_{pairs} Σ_j c_j(E_μ)·w_μ^{rk−j}` with `μ` the member of larger argument;
/// real rank of `V^eff` at most [`TWO_VARIABLE_MAX_RANK`].
pub fn euler_two_variable<C: Field>(
    v: &RealEquivariantBundle<C>,
    arg_choice: &ArgumentChoice,
) -> Result<TwoVariableClass<C>> {
    if v.effective_real_rank() > TWO_VARIABLE_MAX_RANK {
        return Err(Error::InvalidBundle(format!(
            "the two-variable path handles real rank <= {TWO_VARIABLE_MAX_RANK}, got {}",
            v.effective_real_rank()
        )));
    }
    let upper: Vec<_> = v
        .upper_components(arg_choice)
        .into_iter()
        .cloned()
        .collect();
    let half = IsotypicBundle::new(v.ring(), None, upper)?;
    top_chern_two_variable(&half)
}
