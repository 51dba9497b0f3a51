//! The regularized top Chern class of the normal bundle of `X ⊂ Maps(ℂ/Λ, X)`
//! and the Witten genus.

use crate::cohom_ring::{genus_class, witten_class_with, ManifoldSpec};
use crate::equivariant::class::EquivariantClass;
use crate::error::{Error, Result};
use crate::lattice_fn::{
    sigma_over_z_series_with, ArgumentChoice, Lattice, LatticeConstants, NumericConstants,
    SymbolicConstants,
};
use crate::scalar::{Complex64, GPoly, Scalar};

/// `e^{−ζ₂·p_1·ξ̄^{−2}}·∏_j σ(z)/z |_{z = α_j ξ̄^{−1}}`; the prefactor is dropped when `p_1 = 0`.
pub fn loopspace_regularized_top_chern_with<C: Scalar>(
    m: &ManifoldSpec,
    consts: &impl LatticeConstants<C>,
) -> Result<EquivariantClass<C>> {
    let order = (m.ring().top_degree() / 2) as usize;
    let product = genus_class(&sigma_over_z_series_with(consts, order), m.tangent())?;
    let graded = EquivariantClass::graded(&product);
    if m.string_flag() {
        return Ok(graded);
    }
    let p1 = m
        .tangent()
        .pontryagin(1)
        .map_coeffs(|q| C::from_rational(q));
    let prefactor = EquivariantClass::term(-2, p1.scale(&-consts.zeta2())).exp()?;
    prefactor.multiply(&graded)
}

/// `Σ_j Wit_j(X)·ξ̄^{−j}`.
pub fn graded_witten_class_with<C: Scalar>(
    m: &ManifoldSpec,
    consts: &impl LatticeConstants<C>,
) -> Result<EquivariantClass<C>> {
    Ok(EquivariantClass::graded(&witten_class_with(m, consts)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct WittenGenus<C> {
    pub value: C,
    pub xi_power: i32,
}

/// `∫_X 1/ĉ^{∂̄;ζ}_top`: the coefficient of `ξ̄^{−d/2}`, with every other power checked to vanish.
pub fn witten_genus_with<C: Scalar>(
    m: &ManifoldSpec,
    consts: &impl LatticeConstants<C>,
) -> Result<WittenGenus<C>> {
    let inverse = loopspace_regularized_top_chern_with(m, consts)?.inverse_unipotent()?;
    let xi_power = -((m.dimension() / 2) as i32);
    let mut value = C::zero();
    for (n, v) in inverse.integrate() {
        if n == xi_power {
            value = v;
        } else {
            return Err(Error::UnexpectedXiPower { power: n });
        }
    }
    Ok(WittenGenus { value, xi_power })
}

fn numeric_constants(
    m: &ManifoldSpec,
    lattice: &Lattice,
    arg_choice: &ArgumentChoice,
) -> Result<NumericConstants> {
    NumericConstants::new(lattice, arg_choice, m.ring().top_degree().max(4))
}

pub fn loopspace_regularized_top_chern(
    m: &ManifoldSpec,
    lattice: &Lattice,
    arg_choice: &ArgumentChoice,
) -> Result<EquivariantClass<Complex64>> {
    loopspace_regularized_top_chern_with(m, &numeric_constants(m, lattice, arg_choice)?)
}

pub fn witten_genus(
    m: &ManifoldSpec,
    lattice: &Lattice,
    arg_choice: &ArgumentChoice,
) -> Result<WittenGenus<Complex64>> {
    witten_genus_with(m, &numeric_constants(m, lattice, arg_choice)?)
}

pub fn witten_genus_symbolic(m: &ManifoldSpec) -> Result<WittenGenus<GPoly>> {
    witten_genus_with(m, &SymbolicConstants)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohom_ring::{parse_class, RingSpec, TangentData};
    use crate::lattice_fn::eisenstein;
    use crate::scalar::{c64, rational};
    use std::collections::BTreeMap;
    use std::sync::Arc;

    fn ring8(p2_integral: i64) -> Arc<RingSpec> {
        let mut table = BTreeMap::new();
        table.insert(vec![2, 0], rational(0, 1));
        table.insert(vec![0, 1], rational(p2_integral, 1));
        RingSpec::new(vec![("p1".into(), 4), ("p2".into(), 8)], 8, table).unwrap()
    }

    fn manifold(r: &Arc<RingSpec>, p: &[&str]) -> ManifoldSpec {
        let classes = p.iter().map(|s| parse_class(r, s).unwrap()).collect();
        ManifoldSpec::new(TangentData::new(r, classes, r.top_degree()).unwrap()).unwrap()
    }

    #[test]
    fn trivial_tangent() {
        let r = ring8(1);
        let m = manifold(&r, &[]);
        let c = loopspace_regularized_top_chern_with(&m, &SymbolicConstants).unwrap();
        assert_eq!(c, EquivariantClass::one(&r));
        let g = witten_genus_symbolic(&m).unwrap();
        assert_eq!(g.value, GPoly::default());
        assert_eq!(g.xi_power, -4);
    }

    #[test]
    fn string_8_genus_symbolic_and_numeric() {
        for n in [1, 3] {
            let r = ring8(n);
            let m = manifold(&r, &["0", "p2"]);
            let g = witten_genus_symbolic(&m).unwrap();
            assert_eq!(
                g.value.render(),
                format!(
                    "-{}",
                    if n == 1 {
                        "G4".to_string()
                    } else {
                        format!("{n}*G4")
                    }
                )
            );
            let l = Lattice::from_tau(c64(-0.2, 0.9)).unwrap();
            let g = witten_genus(&m, &l, &ArgumentChoice::standard(&l)).unwrap();
            let g4 = eisenstein(&l, 4, l.default_radius()).unwrap();
            assert!((g.value + g4 * n as f64).norm() < 1e-10 * g4.norm().max(1.0));
        }
    }

    #[test]
    fn reciprocal_with_witten_class() {
        let r = ring8(1);
        for p in [vec![], vec!["0", "p2"], vec!["p1", "-3*p2"]] {
            let m = manifold(&r, &p);
            let c = loopspace_regularized_top_chern_with(&m, &SymbolicConstants).unwrap();
            let w = graded_witten_class_with(&m, &SymbolicConstants).unwrap();
            assert_eq!(c.multiply(&w).unwrap(), EquivariantClass::one(&r));
            assert!(c.is_homogeneous(0));
        }
    }

    #[test]
    fn argument_choice_dependence_non_string() {
        let r = ring8(1);
        let m = manifold(&r, &["p1", "p2"]);
        let l = Lattice::square();
        let a = ArgumentChoice::new(0.0).unwrap();
        let b = ArgumentChoice::new(std::f64::consts::FRAC_PI_2).unwrap();
        let ca = loopspace_regularized_top_chern(&m, &l, &a).unwrap();
        let cb = loopspace_regularized_top_chern(&m, &l, &b).unwrap();
        let za = crate::lattice_fn::g2_regularized(&l, &a).unwrap();
        let zb = crate::lattice_fn::g2_regularized(&l, &b).unwrap();
        let p1 = m
            .tangent()
            .pontryagin(1)
            .map_coeffs(Complex64::from_rational);
        let ratio = EquivariantClass::term(-2, p1.scale(&(za - zb)))
            .exp()
            .unwrap();
        let predicted = ca.multiply(&ratio).unwrap();
        for (n, coeff) in cb.terms() {
            for (mono, v) in coeff.terms() {
                assert!((*v - predicted.coeff(*n).coeff(mono)).norm() < 1e-12 * v.norm().max(1.0));
            }
        }
        assert_eq!(cb.terms().len(), predicted.terms().len());
    }

    #[test]
    fn four_dim_string_has_no_genus() {
        let mut table = BTreeMap::new();
        table.insert(vec![1], rational(1, 1));
        let r = RingSpec::new(vec![("u".into(), 4)], 4, table).unwrap();
        let m = ManifoldSpec::new(TangentData::trivial(&r, 4).unwrap()).unwrap();
        let g = witten_genus_symbolic(&m).unwrap();
        assert_eq!(g.value, GPoly::default());
        assert_eq!(g.xi_power, -2);
    }
}
