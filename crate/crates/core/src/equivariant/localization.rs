//! The localization formula and the worked example on `S²`.

use std::f64::consts::PI;

use crate::cohom_ring::RingSpec;
use crate::equivariant::bundle::{IsotypicComponent, RealEquivariantBundle};
use crate::equivariant::class::{EquivariantClass, LaurentData};
use crate::equivariant::classes::equivariant_euler_antiholo;
use crate::error::{Error, Result};
use crate::lattice_fn::{ArgumentChoice, Lattice, LatticePoint};
use crate::quadrature::integrate_2d;
use crate::scalar::{exact, exact_from_c64, Complex64, Exact, Field};

/// A fixed component: `ι*ω`, its normal bundle and an orientation sign.
#[derive(Clone, Debug)]
pub struct FixedComponent<C> {
    pub omega: EquivariantClass<C>,
    pub normal: RealEquivariantBundle<C>,
    pub orientation_sign: i32,
}

/// `Σ_F ±∫_F ι*ω / eul^{∂̄}(ν_F)`, with the `ξ̄` powers kept apart.
pub fn localization_rhs<C: Field>(
    components: &[FixedComponent<C>],
    arg_choice: &ArgumentChoice,
) -> Result<LaurentData<C>> {
    let mut total = LaurentData::new();
    for (i, f) in components.iter().enumerate() {
        if f.orientation_sign != 1 && f.orientation_sign != -1 {
            return Err(Error::InvalidInput(format!(
                "orientation sign of fixed component {i} must be +1 or -1"
            )));
        }
        if f.normal.complexification().zero_rank() != 0 {
            return Err(Error::InvalidBundle(format!(
                "normal bundle of fixed component {i} has a zero-weight part"
            )));
        }
        let eul = equivariant_euler_antiholo(&f.normal, arg_choice)?;
        let integrand = f.omega.multiply(&eul.inverse()?)?;
        for (n, v) in integrand.integrate() {
            let v = if f.orientation_sign < 0 { -v } else { v };
            let entry = total.entry(n).or_insert_with(C::zero);
            *entry = entry.clone() + v;
        }
    }
    total.retain(|_, v| !v.is_zero());
    Ok(total)
}

/// Orientation signs `[North, South]` induced by the argument choice.
pub fn s2_orientation_signs(lambda: Complex64, arg_choice: &ArgumentChoice) -> [i32; 2] {
    if arg_choice.is_upper(lambda) {
        [1, -1]
    } else {
        [-1, 1]
    }
}

/// Fixed-point data of the rotation of `S²` through `ρ_λ`, with `ω` in units of `4π`:
/// `ι*ω_ξ̄ = 0` at the North pole, `−λ·ξ̄_Λ` at the South pole.
pub fn s2_fixed_components(
    lambda: Complex64,
    signs: [i32; 2],
) -> Result<Vec<FixedComponent<Exact>>> {
    let lam =
        exact_from_c64(lambda).ok_or_else(|| Error::InvalidInput("weight is not finite".into()))?;
    let ring = RingSpec::point();
    let normal = RealEquivariantBundle::from_complex_structure(
        &ring,
        None,
        vec![IsotypicComponent::new(&ring, lam.clone(), 1, vec![])?],
    )?;
    Ok(vec![
        FixedComponent {
            omega: EquivariantClass::zero(&ring),
            normal: normal.clone(),
            orientation_sign: signs[0],
        },
        FixedComponent {
            omega: EquivariantClass::xi_power(&ring, 1, -lam),
            normal,
            orientation_sign: signs[1],
        },
    ])
}

#[derive(Clone, Debug, PartialEq)]
pub struct S2Report {
    pub lambda: Complex64,
    pub orientation_signs: [i32; 2],
    /// Gauss–Legendre value of `∫_{S²} ω`.
    pub lhs_numeric: f64,
    /// Localization sum in units of `4π`, by `ξ̄` power.
    pub rhs_units_of_4pi: LaurentData<Exact>,
    /// `4π` times the `ξ̄⁰` coefficient.
    pub rhs_numeric: f64,
}

impl S2Report {
    /// The localization sum is exactly `4π·ξ̄⁰`.
    pub fn rhs_is_exactly_4pi(&self) -> bool {
        self.rhs_units_of_4pi.len() == 1 && self.rhs_units_of_4pi.get(&0) == Some(&exact(1, 0))
    }
}

/// Area of the unit sphere by the `n × n` product rule in `(θ, φ)`.
pub fn sphere_area_quadrature(n: usize) -> f64 {
    integrate_2d(|theta, _| theta.sin(), (0.0, PI), (0.0, 2.0 * PI), n)
}

pub const S2_QUADRATURE_ORDER: usize = 64;

/// Both sides of the localization formula for `S²` with weight `λ`.
pub fn s2_example(
    lattice: &Lattice,
    lambda: LatticePoint,
    arg_choice: &ArgumentChoice,
) -> Result<S2Report> {
    let signs = s2_orientation_signs(lattice.point(lambda), arg_choice);
    s2_example_with_signs(lattice, lambda, arg_choice, signs)
}

pub fn s2_example_with_signs(
    lattice: &Lattice,
    lambda: LatticePoint,
    arg_choice: &ArgumentChoice,
    signs: [i32; 2],
) -> Result<S2Report> {
    if lambda.is_zero() {
        return Err(Error::InvalidInput(
            "the S² example needs a nonzero weight".into(),
        ));
    }
    let lam = lattice.point(lambda);
    let rhs = localization_rhs(&s2_fixed_components(lam, signs)?, arg_choice)?;
    let rhs_numeric = 4.0 * PI * rhs.get(&0).map_or(0.0, |v| v.to_c64().re);
    let orientation = if signs == s2_orientation_signs(lam, arg_choice) {
        1.0
    } else {
        -1.0
    };
    Ok(S2Report {
        lambda: lam,
        orientation_signs: signs,
        lhs_numeric: orientation * sphere_area_quadrature(S2_QUADRATURE_ORDER),
        rhs_units_of_4pi: rhs,
        rhs_numeric,
    })
}

/// `n` points of the (2, 3) Halton sequence scaled to `[−half_width, half_width]²`.
pub fn halton_points(n: usize, half_width: f64) -> Vec<(f64, f64)> {
    fn radical_inverse(mut i: usize, base: usize) -> f64 {
        let mut f = 1.0;
        let mut r = 0.0;
        while i > 0 {
            f /= base as f64;
            r += f * (i % base) as f64;
            i /= base;
        }
        r
    }
    (1..=n)
        .map(|i| {
            (
                half_width * (2.0 * radical_inverse(i, 2) - 1.0),
                half_width * (2.0 * radical_inverse(i, 3) - 1.0),
            )
        })
        .collect()
}

pub const CLOSEDNESS_STEP: f64 = 1e-5;

/// Largest `|ι_v ω + (λ/(2i·vol))·dH|` over the sample points of the stereographic chart,
/// where `ω = 4/(1+ρ²)² dx∧dy`, `H = −4π/(1+ρ²)` and `v` generates `∂/∂z̄` through `ρ_λ`.
/// Derivatives are central differences with step `h`.
pub fn verify_closedness_s2(
    lattice: &Lattice,
    lambda: Complex64,
    sample_points: &[(f64, f64)],
    h: f64,
) -> Result<f64> {
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidInput(
            "λ = 0 acts trivially; the closedness check needs a nonzero weight".into(),
        ));
    }
    let vol = lattice.volume();
    // rotation angle of z ∈ ℂ/Λ acting through ρ_λ
    let theta = |z: Complex64| 2.0 * PI * (lambda * z.conj()).im / vol;
    let dtheta_da = (theta(Complex64::new(h, 0.0)) - theta(Complex64::new(-h, 0.0))) / (2.0 * h);
    let dtheta_db = (theta(Complex64::new(0.0, h)) - theta(Complex64::new(0.0, -h))) / (2.0 * h);
    let coef = Complex64::new(dtheta_da, dtheta_db) / 2.0;
    let contraction_scale = lambda / (Complex64::new(0.0, 2.0) * vol);

    let hamiltonian = |x: f64, y: f64| -4.0 * PI / (1.0 + x * x + y * y);
    let rotate = |x: f64, y: f64, t: f64| (x * t.cos() - y * t.sin(), x * t.sin() + y * t.cos());
    let mut worst: f64 = 0.0;
    for &(x, y) in sample_points {
        let f = 4.0 / (1.0 + x * x + y * y).powi(2);
        let (xp, yp) = rotate(x, y, h);
        let (xm, ym) = rotate(x, y, -h);
        let (phi_x, phi_y) = ((xp - xm) / (2.0 * h), (yp - ym) / (2.0 * h));
        let dh_x = (hamiltonian(x + h, y) - hamiltonian(x - h, y)) / (2.0 * h);
        let dh_y = (hamiltonian(x, y + h) - hamiltonian(x, y - h)) / (2.0 * h);
        // ι_v(f dx∧dy) = f·(v_x dy − v_y dx)
        let r_x = coef * (-f * phi_y) + contraction_scale * dh_x;
        let r_y = coef * (f * phi_x) + contraction_scale * dh_y;
        worst = worst.max((r_x.norm_sqr() + r_y.norm_sqr()).sqrt());
    }
    Ok(worst)
}
