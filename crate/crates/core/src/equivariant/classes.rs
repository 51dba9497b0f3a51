//! Equivariant Chern and Euler classes in the antiholomorphic sector.

use crate::cohom_ring::{power_sums_from_elementary, CohomClass};
use crate::equivariant::bundle::{IsotypicBundle, IsotypicComponent, RealEquivariantBundle};
use crate::equivariant::class::EquivariantClass;
use crate::error::{Error, Result};
use crate::lattice_fn::ArgumentChoice;
use crate::scalar::{Field, Scalar};
use crate::series::inv_int;

/// `c_1(L) + λ·ξ̄_Λ`.
pub fn first_chern_antiholo<C: Field>(
    c1: &CohomClass<C>,
    lambda: C,
) -> Result<EquivariantClass<C>> {
    if !c1.is_homogeneous(2) {
        return Err(Error::DegreeMismatch {
            expected: "homogeneous degree 2".into(),
            found: c1.render(),
        });
    }
    EquivariantClass::from_cohom(c1).add(&EquivariantClass::xi_power(c1.ring(), 1, lambda))
}

/// `ξ̄^{rk E^eff}·∏_λ λ^{rk E_λ}`.
pub fn weight_polynomial_antiholo<C: Field>(b: &IsotypicBundle<C>) -> Result<EquivariantClass<C>> {
    if b.effective().is_empty() {
        return Err(Error::InvalidBundle("the effective part is empty".into()));
    }
    let mut scalar = C::one();
    for c in b.effective() {
        for _ in 0..c.rank() {
            scalar = scalar * c.lambda().clone();
        }
    }
    Ok(EquivariantClass::xi_power(
        b.ring(),
        b.effective_rank() as i32,
        scalar,
    ))
}

/// `ĉ(E_λ) = exp(Σ_k (−1)^{k+1} s_k(E_λ)/(k·λ^k)·ξ̄^{−k})`.
fn normalized_component<C: Field>(c: &IsotypicComponent<C>) -> Result<EquivariantClass<C>> {
    let ring = c.ring();
    let max_k = (ring.top_degree() / 2) as usize;
    let sums = power_sums_from_elementary(ring, c.chern_classes(), max_k);
    let inv = c
        .lambda()
        .inverse()
        .ok_or_else(|| Error::InvalidBundle("zero weight in the effective part".into()))?;
    let mut exponent = EquivariantClass::zero(ring);
    let mut inv_pow = C::one();
    for (i, s) in sums.into_iter().enumerate() {
        let k = i + 1;
        inv_pow = inv_pow * inv.clone();
        let mut coef = inv_pow.clone() * inv_int::<C>(k);
        if k % 2 == 0 {
            coef = -coef;
        }
        exponent = exponent.add(&EquivariantClass::term(-(k as i32), s.scale(&coef)))?;
    }
    exponent.exp()
}

/// `∏_λ ∏_i (1 + α_i(E_λ)/(λ·ξ̄_Λ))`, via power sums.
pub fn normalized_top_chern_antiholo<C: Field>(
    b: &IsotypicBundle<C>,
) -> Result<EquivariantClass<C>> {
    let mut out = EquivariantClass::one(b.ring());
    for c in b.effective() {
        out = out.multiply(&normalized_component(c)?)?;
    }
    Ok(out)
}

/// `∏_λ Σ_j c_j(E_λ)·(λξ̄_Λ)^{rk−j}`, the top Chern class of `E^eff`.
pub fn top_chern_antiholo<C: Field>(b: &IsotypicBundle<C>) -> Result<EquivariantClass<C>> {
    let mut out = EquivariantClass::one(b.ring());
    for c in b.effective() {
        let mut factor = EquivariantClass::zero(b.ring());
        let mut lam_pow = C::one();
        for j in (0..=c.rank() as usize).rev() {
            let power = (c.rank() as usize - j) as i32;
            factor = factor.add(&EquivariantClass::term(power, c.chern(j).scale(&lam_pow)))?;
            lam_pow = lam_pow * c.lambda().clone();
        }
        out = out.multiply(&factor)?;
    }
    Ok(out)
}

/// `∏_{pairs} μ^{rk E_μ}` with `μ` the member of larger argument:
/// the value of `i^{rk V/2}·∏_λ λ^{rk E_λ/2}` under the argument choice.
pub fn euler_prefactor<C: Field>(v: &RealEquivariantBundle<C>, arg_choice: &ArgumentChoice) -> C {
    let mut out = C::one();
    for c in v.upper_components(arg_choice) {
        for _ in 0..c.rank() {
            out = out * c.lambda().clone();
        }
    }
    out
}

/// `eul^{∂̄}(V^eff) = (iξ̄_Λ)^{rk V^eff/2}·∏_λ λ^{rk E_λ/2}·√ĉ(V^eff ⊗ ℂ)`.
pub fn equivariant_euler_antiholo<C: Field>(
    v: &RealEquivariantBundle<C>,
    arg_choice: &ArgumentChoice,
) -> Result<EquivariantClass<C>> {
    let ring = v.ring();
    let root = normalized_top_chern_antiholo(v.complexification())?.sqrt()?;
    let half_rank = (v.effective_real_rank() / 2) as i32;
    let prefactor = EquivariantClass::xi_power(ring, half_rank, euler_prefactor(v, arg_choice));
    prefactor.multiply(&root)
}

/// `(−1)^{half_rank}` as a scalar.
pub fn sign_power<C: Scalar>(half_rank: u32) -> C {
    if half_rank.is_multiple_of(2) {
        C::one()
    } else {
        -C::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohom_ring::{parse_class, RingSpec};
    use crate::lattice_fn::{Lattice, LatticePoint};
    use crate::scalar::{c64, exact, rational, Complex64, Exact};
    use num_rational::BigRational;
    use std::collections::BTreeMap;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn ring() -> Arc<RingSpec> {
        let mut table = BTreeMap::new();
        table.insert(vec![2], rational(1, 1));
        RingSpec::new(vec![("x".into(), 2)], 4, table).unwrap()
    }

    fn cls(r: &Arc<RingSpec>, s: &str) -> CohomClass<Exact> {
        parse_class(r, s)
            .unwrap()
            .map_coeffs(|q: &BigRational| Exact::new(q.clone(), rational(0, 1)))
    }

    #[test]
    fn first_chern_examples() {
        let r = ring();
        let zero = CohomClass::<Exact>::zero(&r);
        assert!(first_chern_antiholo(&zero, exact(0, 0)).unwrap().is_zero());
        let x = cls(&r, "x");
        assert_eq!(
            first_chern_antiholo(&x, exact(0, 0)).unwrap(),
            EquivariantClass::from_cohom(&x)
        );
        let tau = c64(0.3, 1.2);
        let l = Lattice::from_tau(tau).unwrap();
        let lam = l.point(LatticePoint::new(1, 1));
        let xc = x.map_coeffs(|q: &Exact| q.to_c64());
        let c = first_chern_antiholo(&xc, lam).unwrap();
        assert_eq!(c.coeff(1).constant_term(), c64(1.0, 0.0) + tau);
        assert!(c.is_homogeneous(2));
        assert!(first_chern_antiholo(&cls(&r, "x^2"), exact(1, 0)).is_err());
    }

    #[test]
    fn weight_polynomial_examples() {
        let r = ring();
        let one = |lam, rank| IsotypicComponent::new(&r, lam, rank, vec![]).unwrap();
        let b = IsotypicBundle::new(&r, None, vec![one(exact(2, 0), 1)]).unwrap();
        assert_eq!(
            weight_polynomial_antiholo(&b).unwrap(),
            EquivariantClass::xi_power(&r, 1, exact(2, 0))
        );
        let lam = exact(3, 2);
        let b =
            IsotypicBundle::new(&r, None, vec![one(lam.clone(), 1), one(-lam.clone(), 1)]).unwrap();
        let wp = weight_polynomial_antiholo(&b).unwrap();
        assert_eq!(
            wp,
            EquivariantClass::xi_power(&r, 2, -(lam.clone() * lam.clone()))
        );
        for d in 1..4u32 {
            let b = IsotypicBundle::new(&r, None, vec![one(lam.clone(), d), one(-lam.clone(), d)])
                .unwrap();
            let mut expected = if d % 2 == 0 {
                exact(1, 0)
            } else {
                exact(-1, 0)
            };
            for _ in 0..2 * d {
                expected *= lam.clone();
            }
            let wp = weight_polynomial_antiholo(&b).unwrap();
            assert_eq!(wp, EquivariantClass::xi_power(&r, 2 * d as i32, expected));
            assert!(wp.is_homogeneous(4 * d as i64));
        }
        let empty = IsotypicBundle::<Exact>::new(&r, None, vec![]).unwrap();
        assert!(weight_polynomial_antiholo(&empty).is_err());
    }

    #[test]
    fn normalized_top_chern_examples() {
        let r = ring();
        let lam = exact(1, 2);
        let trivial = IsotypicBundle::new(
            &r,
            None,
            vec![IsotypicComponent::new(&r, lam.clone(), 2, vec![]).unwrap()],
        )
        .unwrap();
        assert_eq!(
            normalized_top_chern_antiholo(&trivial).unwrap(),
            EquivariantClass::one(&r)
        );
        let x = cls(&r, "x");
        let line = IsotypicComponent::new(&r, lam.clone(), 1, vec![x.clone()]).unwrap();
        let b = IsotypicBundle::new(&r, None, vec![line.clone()]).unwrap();
        let c = normalized_top_chern_antiholo(&b).unwrap();
        let inv = exact(1, 0) / lam.clone();
        let expected = EquivariantClass::one(&r)
            .add(&EquivariantClass::term(-1, x.scale(&inv)))
            .unwrap();
        assert_eq!(c, expected);
        // lines at ±λ, both with c₁ = x: (1 + x/(λξ̄))(1 − x/(λξ̄))
        let minus = IsotypicComponent::new(&r, -lam.clone(), 1, vec![x.clone()]).unwrap();
        let b = IsotypicBundle::new(&r, None, vec![line, minus]).unwrap();
        let c = normalized_top_chern_antiholo(&b).unwrap();
        let expected = EquivariantClass::one(&r)
            .sub(&EquivariantClass::term(
                -2,
                x.multiply(&x).unwrap().scale(&(inv.clone() * inv)),
            ))
            .unwrap();
        assert_eq!(c, expected);
        assert!(c.is_homogeneous(0));
    }

    #[test]
    fn euler_of_rank_two() {
        let r = RingSpec::point();
        for lam in [c64(1.0, 0.0), c64(0.0, 1.0), c64(-3.0, 2.0), c64(0.5, -2.0)] {
            let component = IsotypicComponent::new(&r, lam, 1, vec![]).unwrap();
            let v =
                RealEquivariantBundle::from_complex_structure(&r, None, vec![component]).unwrap();
            for base in [0.0, PI / 2.0, -3.0] {
                let a = ArgumentChoice::new(base).unwrap();
                let e = equivariant_euler_antiholo(&v, &a).unwrap();
                let mu = if a.is_upper(lam) { lam } else { -lam };
                assert_eq!(e, EquivariantClass::xi_power(&r, 1, mu));
                // λ^{1/2}(−λ)^{1/2} through the branch, times i
                let via_sqrt = Complex64::i() * a.sqrt(lam) * a.sqrt(-lam);
                assert!((via_sqrt - mu).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn doubling_identity_small() {
        let r = ring();
        let x = cls(&r, "x");
        let c = IsotypicComponent::new(
            &r,
            exact(2, -1),
            2,
            vec![x.scale(&exact(3, 0)), x.multiply(&x).unwrap()],
        )
        .unwrap();
        let v = RealEquivariantBundle::from_complex_structure(&r, None, vec![c]).unwrap();
        let a = ArgumentChoice::new(0.7).unwrap();
        let e = equivariant_euler_antiholo(&v, &a).unwrap();
        let top = top_chern_antiholo(v.complexification()).unwrap();
        let wp = weight_polynomial_antiholo(v.complexification()).unwrap();
        let nt = normalized_top_chern_antiholo(v.complexification()).unwrap();
        assert_eq!(wp.multiply(&nt).unwrap(), top);
        assert_eq!(e.multiply(&e).unwrap(), top.scale(&sign_power::<Exact>(2)));
        assert!(e.is_homogeneous(4));
    }
}
