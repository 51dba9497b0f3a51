use std::sync::Arc;

use crate::cohom_ring::{CohomClass, RingSpec};
use crate::error::{Error, Result};
use crate::lattice_fn::ArgumentChoice;
use crate::scalar::Field;

fn check_chern<C: Field>(ring: &Arc<RingSpec>, rank: u32, chern: &[CohomClass<C>]) -> Result<()> {
    if chern.len() > rank as usize {
        return Err(Error::InvalidBundle(format!(
            "{} Chern classes given for rank {rank}",
            chern.len()
        )));
    }
    for (i, c) in chern.iter().enumerate() {
        let j = i as u32 + 1;
        if !(Arc::ptr_eq(c.ring(), ring) || **c.ring() == **ring) {
            return Err(Error::RingMismatch);
        }
        if !c.is_homogeneous(2 * j) {
            return Err(Error::DegreeMismatch {
                expected: format!("c{j} homogeneous of degree {}", 2 * j),
                found: c.render(),
            });
        }
    }
    Ok(())
}

fn chern_at<C: Field>(ring: &Arc<RingSpec>, chern: &[CohomClass<C>], j: usize) -> CohomClass<C> {
    if j == 0 {
        return CohomClass::one(ring);
    }
    chern
        .get(j - 1)
        .cloned()
        .unwrap_or_else(|| CohomClass::zero(ring))
}

/// `E_λ`: the part of a bundle on which the torus acts through `ρ_λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsotypicComponent<C> {
    ring: Arc<RingSpec>,
    lambda: C,
    rank: u32,
    chern: Vec<CohomClass<C>>,
}

impl<C: Field> IsotypicComponent<C> {
    /// `chern[j-1] = c_j`, of degree `2j`; missing classes are zero.
    pub fn new(
        ring: &Arc<RingSpec>,
        lambda: C,
        rank: u32,
        chern: Vec<CohomClass<C>>,
    ) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::InvalidBundle(
                "effective components need a nonzero weight".into(),
            ));
        }
        if rank == 0 {
            return Err(Error::InvalidBundle(
                "component rank must be positive".into(),
            ));
        }
        check_chern(ring, rank, &chern)?;
        Ok(IsotypicComponent {
            ring: ring.clone(),
            lambda,
            rank,
            chern,
        })
    }

    pub fn lambda(&self) -> &C {
        &self.lambda
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    /// `c_j` for `0 ≤ j`, with `c_0 = 1`.
    pub fn chern(&self, j: usize) -> CohomClass<C> {
        chern_at(&self.ring, &self.chern, j)
    }

    pub fn chern_classes(&self) -> &[CohomClass<C>] {
        &self.chern
    }

    /// The conjugate component: weight `−λ`, `c_j ↦ (−1)^j c_j`.
    pub fn conjugate(&self) -> Self {
        IsotypicComponent {
            ring: self.ring.clone(),
            lambda: -self.lambda.clone(),
            rank: self.rank,
            chern: self
                .chern
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 0 { c.neg() } else { c.clone() })
                .collect(),
        }
    }
}

/// `E = E_0 ⊕ E^eff` with `E^eff = ⊕_λ E_λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsotypicBundle<C> {
    ring: Arc<RingSpec>,
    zero_rank: u32,
    zero_chern: Vec<CohomClass<C>>,
    effective: Vec<IsotypicComponent<C>>,
}

impl<C: Field> IsotypicBundle<C> {
    pub fn new(
        ring: &Arc<RingSpec>,
        zero: Option<(u32, Vec<CohomClass<C>>)>,
        effective: Vec<IsotypicComponent<C>>,
    ) -> Result<Self> {
        let (zero_rank, zero_chern) = zero.unwrap_or((0, Vec::new()));
        check_chern(ring, zero_rank, &zero_chern)?;
        for (i, c) in effective.iter().enumerate() {
            if !(Arc::ptr_eq(&c.ring, ring) || *c.ring == **ring) {
                return Err(Error::RingMismatch);
            }
            if effective[..i].iter().any(|d| d.lambda == c.lambda) {
                return Err(Error::InvalidBundle(format!(
                    "weight {} appears twice",
                    c.lambda.render()
                )));
            }
        }
        Ok(IsotypicBundle {
            ring: ring.clone(),
            zero_rank,
            zero_chern,
            effective,
        })
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn effective(&self) -> &[IsotypicComponent<C>] {
        &self.effective
    }

    pub fn zero_rank(&self) -> u32 {
        self.zero_rank
    }

    pub fn zero_chern(&self, j: usize) -> CohomClass<C> {
        chern_at(&self.ring, &self.zero_chern, j)
    }

    pub fn effective_rank(&self) -> u32 {
        self.effective.iter().map(|c| c.rank).sum()
    }

    pub fn total_rank(&self) -> u32 {
        self.zero_rank + self.effective_rank()
    }
}

/// A real bundle through its complexification, whose effective weights
/// come in pairs `±λ` with conjugate Chern data.
#[derive(Clone, Debug, PartialEq)]
pub struct RealEquivariantBundle<C> {
    complexification: IsotypicBundle<C>,
}

impl<C: Field> RealEquivariantBundle<C> {
    pub fn new(complexification: IsotypicBundle<C>) -> Result<Self> {
        for c in &complexification.effective {
            let partner = complexification
                .effective
                .iter()
                .find(|d| d.lambda == -c.lambda.clone())
                .ok_or_else(|| {
                    Error::InvalidBundle(format!(
                        "weight {} has no partner of opposite sign",
                        c.lambda.render()
                    ))
                })?;
            if *partner != c.conjugate() {
                return Err(Error::InvalidBundle(format!(
                    "components at ±{} are not conjugate (ranks or Chern classes differ)",
                    c.lambda.render()
                )));
            }
        }
        Ok(RealEquivariantBundle { complexification })
    }

    /// `V ⊗ ℂ = E ⊕ Ē` for the complex structure given by `components`.
    pub fn from_complex_structure(
        ring: &Arc<RingSpec>,
        zero: Option<(u32, Vec<CohomClass<C>>)>,
        components: Vec<IsotypicComponent<C>>,
    ) -> Result<Self> {
        let mut all = components.clone();
        all.extend(components.iter().map(IsotypicComponent::conjugate));
        let zero = zero.map(|(rank, chern)| (2 * rank, complexify_chern(ring, &chern)));
        RealEquivariantBundle::new(IsotypicBundle::new(ring, zero, all)?)
    }

    pub fn complexification(&self) -> &IsotypicBundle<C> {
        &self.complexification
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.complexification.ring
    }

    pub fn real_rank(&self) -> u32 {
        self.complexification.total_rank()
    }

    /// Real rank of `V^eff`.
    pub fn effective_real_rank(&self) -> u32 {
        self.complexification.effective_rank()
    }

    /// The member of each pair `{λ, −λ}` with the larger argument under `arg_choice`.
    pub fn upper_components(&self, arg_choice: &ArgumentChoice) -> Vec<&IsotypicComponent<C>> {
        self.complexification
            .effective
            .iter()
            .filter(|c| arg_choice.is_upper(c.lambda.to_c64()))
            .collect()
    }
}

/// Chern classes of `E ⊕ Ē` from those of `E`.
fn complexify_chern<C: Field>(ring: &Arc<RingSpec>, chern: &[CohomClass<C>]) -> Vec<CohomClass<C>> {
    let rank = chern.len();
    let mut total = CohomClass::one(ring);
    let mut conj = CohomClass::one(ring);
    for (i, c) in chern.iter().enumerate() {
        total = total.add(c).expect("same ring");
        conj = conj
            .add(&if i % 2 == 0 { c.neg() } else { c.clone() })
            .expect("same ring");
    }
    let product = total.multiply(&conj).expect("same ring");
    (1..=2 * rank as u32)
        .map(|j| product.component(2 * j))
        .collect()
}
