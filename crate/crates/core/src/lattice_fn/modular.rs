//! Eisenstein series, the regularized `G₂` and the Dedekind η-function.

use std::f64::consts::PI;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::lattice_fn::lattice::{shell_sum, ArgumentChoice, Lattice};
use crate::scalar::Complex64;

/// Default relative tolerance for the radius-doubling check.
pub const DEFAULT_LATTICE_TOL: f64 = 1e-8;

/// Upper bound on the number of lattice points a doubling step may visit.
pub const MAX_POINTS: f64 = 1.5e8;

/// A lattice sum together with its radius-doubling error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeSumEstimate {
    pub value: Complex64,
    /// `|S(R) − S(R/2)|` at the final radius.
    pub error_estimate: f64,
    /// Radius of the last disc summed.
    pub radius: f64,
    pub converged: bool,
}

fn check_two_k(two_k: u32) -> Result<()> {
    if two_k < 4 || !two_k.is_multiple_of(2) {
        return Err(Error::InvalidEisensteinExponent(two_k as i64));
    }
    Ok(())
}

/// `G_{2k}(Λ)` for `2k = 4, 6, …, max_two_k`, all from the same sequence of discs.
///
/// Starts from the disc of radius `radius`, then doubles the radius (adding only
/// the new annulus) until every value moves by at most `tol·max(1, |G|)`.
pub fn eisenstein_values(
    lattice: &Lattice,
    max_two_k: u32,
    radius: f64,
    tol: f64,
) -> Result<Vec<LatticeSumEstimate>> {
    check_two_k(max_two_k)?;
    if !(radius > 0.0) {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    let count = ((max_two_k - 2) / 2) as usize;
    let accumulate = |z: Complex64, acc: &mut [crate::scalar::CompensatedSum]| {
        let inv2 = z.inv().powu(2);
        let mut p = inv2 * inv2;
        for slot in acc.iter_mut() {
            slot.add(p);
            p *= inv2;
        }
    };
    let mut current = shell_sum(lattice, 0.0, radius, count, true, accumulate);
    let mut r = radius;
    loop {
        let next_r = 2.0 * r;
        let cost = PI * next_r * next_r / lattice.volume();
        if cost > MAX_POINTS {
            // Can't afford another doubling: report what we have, unconverged.
            return Ok(current
                .iter()
                .map(|&v| LatticeSumEstimate {
                    value: v,
                    error_estimate: f64::NAN,
                    radius: r,
                    converged: false,
                })
                .collect());
        }
        let annulus = shell_sum(lattice, r, next_r, count, true, accumulate);
        let next: Vec<Complex64> = current.iter().zip(&annulus).map(|(a, b)| a + b).collect();
        let done = annulus
            .iter()
            .zip(&next)
            .all(|(d, v)| d.norm() <= tol * v.norm().max(1.0));
        if done {
            return Ok(next
                .iter()
                .zip(&annulus)
                .map(|(&v, d)| LatticeSumEstimate {
                    value: v,
                    error_estimate: d.norm(),
                    radius: next_r,
                    converged: true,
                })
                .collect());
        }
        current = next;
        r = next_r;
    }
}

/// `G_{2k}(Λ) = Σ_{λ≠0} λ^{-2k}` with an error estimate.
pub fn eisenstein_estimate(
    lattice: &Lattice,
    two_k: u32,
    radius: f64,
    tol: f64,
) -> Result<LatticeSumEstimate> {
    check_two_k(two_k)?;
    let all = eisenstein_values(lattice, two_k, radius, tol)?;
    Ok(*all.last().expect("at least G4"))
}

/// `G_{2k}(Λ)` for even `2k ≥ 4`, starting the doubling check at `radius`.
pub fn eisenstein(lattice: &Lattice, two_k: u32, radius: f64) -> Result<Complex64> {
    Ok(eisenstein_estimate(lattice, two_k, radius, DEFAULT_LATTICE_TOL)?.value)
}

/// `G₂(τ) = π²/3 + Σ_{n≠0} Σ_m (m+nτ)^{-2}`, summed over `m` first.
///
/// The inner sum is `π²/sin²(πnτ)`.
pub fn g2_iterated(tau: Complex64) -> Result<Complex64> {
    if !(tau.im > 0.0) {
        return Err(Error::NotInUpperHalfPlane(tau.im));
    }
    // Terms decay like 4π²·e^{-2πn·Im τ}; stop once that is below e^{-45}.
    let n_max = (45.0 / (2.0 * PI * tau.im)).ceil() as i64 + 1;
    let mut tail = Complex64::new(0.0, 0.0);
    for n in (1..=n_max).rev() {
        let s = (tau * (PI * n as f64)).sin();
        tail += Complex64::new(PI * PI, 0.0) / (s * s);
    }
    Ok(Complex64::new(PI * PI / 3.0, 0.0) + tail * 2.0)
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// An oriented basis `(μ, ν)` of `Λ` with `arg μ` equal to the given angle.
fn basis_along(lattice: &Lattice, angle: f64) -> Option<(Complex64, Complex64)> {
    let w1 = lattice.omega1();
    if angle_distance(w1.arg(), angle) < 1e-12 {
        return Some((w1, lattice.omega2()));
    }
    let mut best: Option<(f64, i64, i64)> = None;
    for a in -24i64..=24 {
        for b in -24i64..=24 {
            if a.gcd(&b) != 1 {
                continue;
            }
            let mu = w1 * a as f64 + lattice.omega2() * b as f64;
            if angle_distance(mu.arg(), angle) < 1e-12 && best.is_none_or(|(r, _, _)| mu.norm() < r)
            {
                best = Some((mu.norm(), a, b));
            }
        }
    }
    let (_, a, b) = best?;
    // c, d with a·d − b·c = 1
    let eg = a.extended_gcd(&b);
    let (d, c) = (eg.x * eg.gcd, -eg.y * eg.gcd);
    let mu = w1 * a as f64 + lattice.omega2() * b as f64;
    let nu = w1 * c as f64 + lattice.omega2() * d as f64;
    Some((mu, nu))
}

/// The regularized value `ζ_{Λ∖0}(2)` for the given argument choice.
///
/// With base angle `arg(μ)` for a primitive `μ ∈ Λ`, completed to an oriented
/// basis `(μ, ν)`, this is `μ^{-2}·G₂(ν/μ)`. Base angles that point along no
/// short primitive lattice vector are rejected.
pub fn g2_regularized(lattice: &Lattice, arg_choice: &ArgumentChoice) -> Result<Complex64> {
    let (mu, nu) = regularization_basis(lattice, arg_choice)?;
    Ok(g2_iterated(nu / mu)? / (mu * mu))
}

/// The oriented basis `(μ, ν)` behind [`g2_regularized`].
pub fn regularization_basis(
    lattice: &Lattice,
    arg_choice: &ArgumentChoice,
) -> Result<(Complex64, Complex64)> {
    basis_along(lattice, arg_choice.base_angle()).ok_or_else(|| {
        Error::ArgumentChoice(format!(
            "base angle {} is not the argument of a primitive lattice vector",
            arg_choice.base_angle()
        ))
    })
}

fn check_tau(tau: Complex64) -> Result<()> {
    if !(tau.im > 0.0) || !tau.is_finite() {
        return Err(Error::NotInUpperHalfPlane(tau.im));
    }
    Ok(())
}

/// Number of product factors that brings `|q|ⁿ` below `1e-18`.
pub fn eta_order(tau: Complex64) -> u32 {
    let decay = 2.0 * PI * tau.im.max(1e-3);
    ((18.0 * 10f64.ln() / decay).ceil() as u32 + 2).min(100_000)
}

/// `η(τ) = e^{πiτ/12}·∏_{n=1}^{order} (1 − qⁿ)`, `q = e^{2πiτ}`.
pub fn dedekind_eta(tau: Complex64, order: u32) -> Result<Complex64> {
    check_tau(tau)?;
    if order == 0 {
        return Err(Error::InvalidInput("eta product order must be >= 1".into()));
    }
    let i = Complex64::new(0.0, 1.0);
    let q = (i * 2.0 * PI * tau).exp();
    let mut qn = Complex64::new(1.0, 0.0);
    let mut prod = Complex64::new(1.0, 0.0);
    for _ in 0..order {
        qn *= q;
        prod *= Complex64::new(1.0, 0.0) - qn;
    }
    Ok((i * PI * tau / 12.0).exp() * prod)
}

/// `η′(τ)/η(τ) = 2πi·(1/24 − Σ_{n≤order} n·qⁿ/(1 − qⁿ))`.
pub fn eta_log_derivative(tau: Complex64, order: u32) -> Result<Complex64> {
    check_tau(tau)?;
    let i = Complex64::new(0.0, 1.0);
    let q = (i * 2.0 * PI * tau).exp();
    let mut qn = Complex64::new(1.0, 0.0);
    let mut s = Complex64::new(0.0, 0.0);
    for n in 1..=order {
        qn *= q;
        s += qn * n as f64 / (Complex64::new(1.0, 0.0) - qn);
    }
    Ok(i * 2.0 * PI * (Complex64::new(1.0 / 24.0, 0.0) - s))
}

/// `−4πi·η′(τ)/η(τ)`, which equals `G₂(τ)`.
pub fn g2_from_eta(tau: Complex64, order: u32) -> Result<Complex64> {
    Ok(Complex64::new(0.0, -4.0 * PI) * eta_log_derivative(tau, order)?)
}
