//! The Weierstraß σ-function, its Taylor series and the ζ-regularized product
//! `∏_{λ≠0} (1 + z/λ)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice_fn::lattice::{shell_sum, ArgumentChoice, Lattice};
use crate::lattice_fn::modular::{
    eisenstein_values, g2_iterated, g2_regularized, LatticeSumEstimate, DEFAULT_LATTICE_TOL,
};
use crate::scalar::{Complex64, GPoly, Scalar};
use crate::series::{ComplexSeries, Series};

/// Source of the lattice constants entering σ and the Witten class.
pub trait LatticeConstants<C: Scalar> {
    /// `G_{2k}(Λ)` for `2k ≥ 4`.
    fn eisenstein(&self, two_k: u32) -> C;
    /// The regularized `ζ_{Λ∖0}(2)`.
    fn zeta2(&self) -> C;
}

/// Numeric constants of a lattice, computed once.
#[derive(Clone, Debug)]
pub struct NumericConstants {
    eisenstein: Vec<LatticeSumEstimate>,
    zeta2: Complex64,
}

impl NumericConstants {
    /// `G_4 … G_{max_two_k}` at the default radius and tolerance, `ζ₂` for `arg_choice`.
    pub fn new(lattice: &Lattice, arg_choice: &ArgumentChoice, max_two_k: u32) -> Result<Self> {
        Self::with_options(
            lattice,
            arg_choice,
            max_two_k,
            lattice.default_radius(),
            DEFAULT_LATTICE_TOL,
        )
    }

    pub fn with_options(
        lattice: &Lattice,
        arg_choice: &ArgumentChoice,
        max_two_k: u32,
        radius: f64,
        tol: f64,
    ) -> Result<Self> {
        let max_two_k = max_two_k.max(4) + max_two_k % 2;
        Ok(NumericConstants {
            eisenstein: eisenstein_values(lattice, max_two_k, radius, tol)?,
            zeta2: g2_regularized(lattice, arg_choice)?,
        })
    }

    pub fn estimates(&self) -> &[LatticeSumEstimate] {
        &self.eisenstein
    }

    pub fn max_two_k(&self) -> u32 {
        2 * self.eisenstein.len() as u32 + 2
    }
}

impl LatticeConstants<Complex64> for NumericConstants {
    fn eisenstein(&self, two_k: u32) -> Complex64 {
        assert!(
            two_k >= 4 && two_k.is_multiple_of(2),
            "G_{two_k} is not an absolutely convergent Eisenstein series"
        );
        let idx = (two_k / 2 - 2) as usize;
        self.eisenstein
            .get(idx)
            .unwrap_or_else(|| panic!("G_{two_k} was not precomputed (max G_{})", self.max_two_k()))
            .value
    }

    fn zeta2(&self) -> Complex64 {
        self.zeta2
    }
}

/// Formal symbols `G4, G6, …` and `G2` for `ζ₂`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SymbolicConstants;

impl LatticeConstants<GPoly> for SymbolicConstants {
    fn eisenstein(&self, two_k: u32) -> GPoly {
        GPoly::symbol(two_k)
    }

    fn zeta2(&self) -> GPoly {
        GPoly::symbol(2)
    }
}

/// `log(σ(z)/z) = −Σ_{k≥2} G_{2k} z^{2k}/(2k)`, truncated at `order`.
pub fn log_sigma_over_z<C: Scalar>(consts: &impl LatticeConstants<C>, order: usize) -> Series<C> {
    let mut coeffs = vec![C::zero(); order + 1];
    for two_k in (4..=order).step_by(2) {
        coeffs[two_k] = -(consts.eisenstein(two_k as u32)
            * C::from_rational(&crate::scalar::rational(1, two_k as i64)));
    }
    Series::new(coeffs, order)
}

/// Taylor series of `σ(z)/z` up to `z^order`.
pub fn sigma_over_z_series_with<C: Scalar>(
    consts: &impl LatticeConstants<C>,
    order: usize,
) -> Series<C> {
    log_sigma_over_z(consts, order)
        .exp()
        .expect("no constant term")
}

/// Taylor series of `σ(z)` up to `z^order`.
pub fn sigma_series_with<C: Scalar>(consts: &impl LatticeConstants<C>, order: usize) -> Series<C> {
    if order == 0 {
        return Series::zero(0);
    }
    let inner = sigma_over_z_series_with(consts, order - 1);
    let mut coeffs = vec![C::zero()];
    coeffs.extend(inner.coeffs().iter().cloned());
    Series::new(coeffs, order)
}

/// Taylor series of `z/σ(z) = exp(Σ_{k≥2} G_{2k} z^{2k}/(2k))` up to `z^order`.
pub fn witten_char_series_with<C: Scalar>(
    consts: &impl LatticeConstants<C>,
    order: usize,
) -> Series<C> {
    let log = log_sigma_over_z(consts, order);
    let negated = log.map(|c| -c.clone());
    negated.exp().expect("no constant term")
}

fn constants_for_order(lattice: &Lattice, order: usize) -> Result<NumericConstants> {
    NumericConstants::new(
        lattice,
        &ArgumentChoice::standard(lattice),
        order.max(4) as u32,
    )
}

/// Taylor coefficients of `σ_Λ(z)` up to `z^order`.
pub fn sigma_series(lattice: &Lattice, order: usize) -> Result<ComplexSeries> {
    if order == 0 {
        return Err(Error::InvalidInput(
            "sigma series order must be >= 1".into(),
        ));
    }
    Ok(sigma_series_with(
        &constants_for_order(lattice, order)?,
        order,
    ))
}

/// Taylor coefficients of `z/σ_Λ(z)` up to `z^order`.
pub fn witten_char_series(lattice: &Lattice, order: usize) -> Result<ComplexSeries> {
    Ok(witten_char_series_with(
        &constants_for_order(lattice, order)?,
        order,
    ))
}

/// `ln(1−w) + w + w²/2`, accurate for small `w`.
fn weierstrass_log_factor(w: Complex64) -> Complex64 {
    if w.norm() < 0.25 {
        // −Σ_{n≥3} wⁿ/n
        let mut term = w * w * w;
        let mut acc = Complex64::new(0.0, 0.0);
        for n in 3..48 {
            acc -= term / n as f64;
            term *= w;
        }
        acc
    } else {
        (Complex64::new(1.0, 0.0) - w).ln() + w + w * w / 2.0
    }
}

/// `z·∏_{0<|λ|≤radius} (1 − z/λ)·exp(z/λ + z²/(2λ²))`.
pub fn sigma_direct(z: Complex64, lattice: &Lattice, radius: f64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    let on_lattice = shell_sum(lattice, 0.0, radius, 1, true, |l, acc| {
        if l == z {
            acc[0].add(Complex64::new(1.0, 0.0));
        }
    })[0];
    if on_lattice.re > 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let log = shell_sum(lattice, 0.0, radius, 1, true, |l, acc| {
        acc[0].add(weierstrass_log_factor(z / l));
    })[0];
    z * log.exp()
}

/// `σ` for the lattice `ℤ ⊕ ℤτ`, by the q-product with `|Im w| ≤ Im τ/2`.
fn sigma_normalized(w: Complex64, tau: Complex64, g2: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let q = (i * 2.0 * PI * tau).exp();
    let u = (i * 2.0 * PI * w).exp();
    let uinv = u.inv();
    let mut prod = one;
    let mut qn = one;
    let bound = u.norm().max(uinv.norm());
    for _ in 0..10_000 {
        qn *= q;
        let factor = (one - qn * u) * (one - qn * uinv) / ((one - qn) * (one - qn));
        prod *= factor;
        if qn.norm() * bound < 1e-18 {
            break;
        }
    }
    let sine = (i * PI * w).exp() - (-i * PI * w).exp();
    (g2 * w * w / 2.0).exp() * sine / (i * 2.0 * PI) * prod
}

/// `σ_Λ(z)` by the q-product and quasi-periodicity.
pub fn weierstrass_sigma(z: Complex64, lattice: &Lattice) -> Result<Complex64> {
    let w1 = lattice.omega1();
    let tau = lattice.tau();
    let g2 = g2_iterated(tau)?;
    let w = z / w1;
    let n = (w.im / tau.im).round();
    let w0 = w - tau * n;
    let base = sigma_normalized(w0, tau, g2);
    // σ(w₀ + nτ) = (−1)ⁿ e^{η₂(n·w₀ + n²τ/2)} σ(w₀),  η₂ = τ·G₂ − 2πi
    let eta2 = tau * g2 - Complex64::new(0.0, 2.0 * PI);
    let sign = if (n as i64) % 2 == 0 { 1.0 } else { -1.0 };
    let factor = (eta2 * (w0 * n + tau * (n * n / 2.0))).exp() * sign;
    Ok(w1 * base * factor)
}

/// Whether `z` is a nonzero lattice point (to relative precision 1e-12).
fn is_nonzero_lattice_point(z: Complex64, lattice: &Lattice) -> bool {
    // z = xω₁ + yω₂ with x, y real
    let w1 = lattice.omega1();
    let w2 = lattice.omega2();
    let det = lattice.volume();
    let y = (w1.conj() * z).im / det;
    let x = (z * w2.conj()).im / -det;
    let near = |t: f64| (t - t.round()).abs() < 1e-12 * t.abs().max(1.0);
    near(x) && near(y) && (x.round() != 0.0 || y.round() != 0.0)
}

/// `e^{ζ₁z − ζ₂z²/2}·σ_Λ(z)/z`, the Weierstraß ζ-regularized product of the
/// factors `(1 + z/λ)` over `λ ∈ Λ∖0`.
///
/// `ζ₂ = g2_regularized(lattice, arg_choice)`; `ζ₁` is supplied by the caller.
pub fn zeta_regularized_product(
    z: Complex64,
    lattice: &Lattice,
    arg_choice: &ArgumentChoice,
    zeta1: Complex64,
) -> Result<Complex64> {
    let zeta2 = g2_regularized(lattice, arg_choice)?;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if is_nonzero_lattice_point(z, lattice) {
        return Err(Error::OnLattice(crate::scalar::format_complex(z)));
    }
    let sigma = weierstrass_sigma(z, lattice)?;
    Ok((zeta1 * z - zeta2 * z * z / 2.0).exp() * sigma / z)
}
