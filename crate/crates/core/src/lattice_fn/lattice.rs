//! Lattice geometry, characters and deterministic lattice enumeration.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Complex64};

/// Rank-2 lattice `Λ = ℤω₁ ⊕ ℤω₂ ⊂ ℂ` with an oriented basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice {
    omega1: Complex64,
    omega2: Complex64,
}

/// The lattice element `m·ω₁ + n·ω₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub m: i64,
    pub n: i64,
}

impl LatticePoint {
    pub fn new(m: i64, n: i64) -> Self {
        LatticePoint { m, n }
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0 && self.n == 0
    }
}

impl std::ops::Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint::new(-self.m, -self.n)
    }
}

impl Lattice {
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Self> {
        if !(omega1.is_finite() && omega2.is_finite()) {
            return Err(Error::InvalidLattice("basis vectors must be finite".into()));
        }
        if omega1.norm_sqr() == 0.0 {
            return Err(Error::InvalidLattice("omega1 must be nonzero".into()));
        }
        let tau = omega2 / omega1;
        if !(tau.im > 0.0) {
            return Err(Error::InvalidLattice(format!(
                "basis is not oriented: Im(omega2/omega1) = {} <= 0",
                tau.im
            )));
        }
        Ok(Lattice { omega1, omega2 })
    }

    /// `ℤ ⊕ ℤτ`.
    pub fn from_tau(tau: Complex64) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(Error::NotInUpperHalfPlane(tau.im));
        }
        Lattice::new(Complex64::new(1.0, 0.0), tau)
    }

    /// The Gaussian integers `ℤ[i]`.
    pub fn square() -> Self {
        Lattice {
            omega1: Complex64::new(1.0, 0.0),
            omega2: Complex64::new(0.0, 1.0),
        }
    }

    pub fn omega1(&self) -> Complex64 {
        self.omega1
    }

    pub fn omega2(&self) -> Complex64 {
        self.omega2
    }

    pub fn tau(&self) -> Complex64 {
        self.omega2 / self.omega1
    }

    /// Area of a fundamental domain, `Im(conj(ω₁)·ω₂)`.
    pub fn volume(&self) -> f64 {
        (self.omega1.conj() * self.omega2).im
    }

    pub fn point(&self, p: LatticePoint) -> Complex64 {
        self.omega1 * p.m as f64 + self.omega2 * p.n as f64
    }

    /// `cΛ` with basis `(cω₁, cω₂)`.
    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        Lattice::new(self.omega1 * c, self.omega2 * c)
    }

    /// Smallest radius enclosing at least 10⁴ lattice points.
    pub fn default_radius(&self) -> f64 {
        (1.0e4 * self.volume() / PI).sqrt() + self.omega1.norm().max(self.omega2.norm())
    }

    /// Rows `n` of the lattice meeting the closed disc of radius `radius`,
    /// each with an inclusive range of `m` that covers the disc.
    pub(crate) fn rows(&self, radius: f64) -> Vec<(i64, i64, i64)> {
        let a = self.omega1.norm_sqr();
        let height = self.volume() / self.omega1.norm();
        let n_max = (radius / height).floor() as i64 + 1;
        let mut rows = Vec::with_capacity((2 * n_max + 1) as usize);
        for n in -n_max..=n_max {
            let offset = self.omega2 * n as f64;
            let b = (self.omega1.conj() * offset).re;
            let c = offset.norm_sqr() - radius * radius;
            let disc = b * b - a * c;
            if disc < 0.0 {
                continue;
            }
            let s = disc.sqrt();
            let lo = ((-b - s) / a).floor() as i64 - 1;
            let hi = ((-b + s) / a).ceil() as i64 + 1;
            rows.push((n, lo, hi));
        }
        rows
    }
}

/// Nonzero lattice points with `|λ| ≤ radius`, sorted by `(|λ|, arg λ)`.
pub fn lattice_points(lattice: &Lattice, radius: f64) -> Vec<LatticePoint> {
    assert!(radius > 0.0, "radius must be positive");
    let r2 = radius * radius;
    let mut pts: Vec<(f64, f64, LatticePoint)> = Vec::new();
    for (n, lo, hi) in lattice.rows(radius) {
        for m in lo..=hi {
            let p = LatticePoint::new(m, n);
            if p.is_zero() {
                continue;
            }
            let z = lattice.point(p);
            let r = z.norm_sqr();
            if r <= r2 {
                pts.push((r, z.arg(), p));
            }
        }
    }
    pts.sort_by(|x, y| {
        x.0.total_cmp(&y.0)
            .then(x.1.total_cmp(&y.1))
            .then(x.2.cmp(&y.2))
    });
    pts.into_iter().map(|(_, _, p)| p).collect()
}

/// `Σ f(λ)` over nonzero `λ` with `r_inner < |λ| ≤ r_outer`, one accumulator
/// per output slot.
///
/// Rows are reduced in ascending `n` with compensated summation, so the
/// serial and parallel paths give bit-identical results.
pub(crate) fn shell_sum<F>(
    lattice: &Lattice,
    r_inner: f64,
    r_outer: f64,
    slots: usize,
    parallel: bool,
    f: F,
) -> Vec<Complex64>
where
    F: Fn(Complex64, &mut [CompensatedSum]) + Sync,
{
    let rows = lattice.rows(r_outer);
    let lo2 = r_inner * r_inner;
    let hi2 = r_outer * r_outer;
    let row_sum = |&(n, lo, hi): &(i64, i64, i64)| -> Vec<CompensatedSum> {
        let mut acc = vec![CompensatedSum::default(); slots];
        for m in lo..=hi {
            let p = LatticePoint::new(m, n);
            if p.is_zero() {
                continue;
            }
            let z = lattice.point(p);
            let r = z.norm_sqr();
            if r > lo2 && r <= hi2 {
                f(z, &mut acc);
            }
        }
        acc
    };
    let partials: Vec<Vec<CompensatedSum>> = if parallel {
        rows.par_iter().map(row_sum).collect()
    } else {
        rows.iter().map(row_sum).collect()
    };
    let mut total = vec![CompensatedSum::default(); slots];
    for row in &partials {
        for (t, r) in total.iter_mut().zip(row) {
            t.add(r.value());
        }
    }
    total.iter().map(CompensatedSum::value).collect()
}

/// Sharp lattice sum `Σ_{0<|λ|≤radius} λ^{-exponent}` for any exponent ≥ 1.
///
/// For exponents 1 and 2 the infinite sum is only conditionally convergent;
/// this returns the disc-truncated value regardless.
pub fn lattice_sum(lattice: &Lattice, exponent: u32, radius: f64) -> Complex64 {
    assert!(exponent >= 1);
    shell_sum(lattice, 0.0, radius, 1, true, |z, acc| {
        acc[0].add(z.inv().powu(exponent));
    })[0]
}

/// Argument assignment `arg(λ) ∈ [base − π, base + π)` for nonzero λ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArgumentChoice {
    base_angle: f64,
}

impl ArgumentChoice {
    pub fn new(base_angle: f64) -> Result<Self> {
        if !base_angle.is_finite() || !(-PI..PI).contains(&base_angle) {
            return Err(Error::ArgumentChoice(format!(
                "base angle {base_angle} is not in [-pi, pi)"
            )));
        }
        Ok(ArgumentChoice { base_angle })
    }

    /// The standard choice: `arg(ω₁)` in `[−π, π)`.
    pub fn standard(lattice: &Lattice) -> Self {
        let a = lattice.omega1().arg();
        ArgumentChoice {
            base_angle: if a >= PI { a - 2.0 * PI } else { a },
        }
    }

    pub fn base_angle(&self) -> f64 {
        self.base_angle
    }

    /// `arg(z)` in `[base − π, base + π)`.
    pub fn arg(&self, z: Complex64) -> f64 {
        let mut a = z.arg();
        while a < self.base_angle - PI {
            a += 2.0 * PI;
        }
        while a >= self.base_angle + PI {
            a -= 2.0 * PI;
        }
        a
    }

    /// `z^{1/2} = |z|^{1/2} e^{i·arg(z)/2}` for this choice.
    pub fn sqrt(&self, z: Complex64) -> Complex64 {
        Complex64::from_polar(z.norm().sqrt(), self.arg(z) / 2.0)
    }

    /// Whether `z` carries the larger argument of the pair `{z, −z}`,
    /// i.e. `arg(−z) = arg(z) − π`.
    pub fn is_upper(&self, z: Complex64) -> bool {
        // equivalent to arg(z) ≥ base, and exactly one member of each pair passes
        self.arg(z) > self.arg(-z)
    }
}

/// The character `ρ_λ(z) = exp(π(λz̄ − λ̄z)/vol)` of `ℂ/Λ`.
pub fn character_value(lattice: &Lattice, lambda: LatticePoint, z: Complex64) -> Complex64 {
    let l = lattice.point(lambda);
    ((l * z.conj() - l.conj() * z) * PI / lattice.volume()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    #[test]
    fn rejects_unoriented_basis() {
        assert!(Lattice::new(c64(1.0, 0.0), c64(0.0, -1.0)).is_err());
        assert!(Lattice::new(c64(0.0, 0.0), c64(0.0, 1.0)).is_err());
        assert!(Lattice::from_tau(c64(0.3, 0.0)).is_err());
    }

    #[test]
    fn square_lattice_shells() {
        let l = Lattice::square();
        let p = lattice_points(&l, 1.0);
        assert_eq!(p.len(), 4);
        let vals: Vec<_> = p.iter().map(|&q| l.point(q)).collect();
        // sorted by arg: -i (−π/2), 1 (0), i (π/2), -1 (π)
        assert_eq!(
            vals,
            vec![c64(0.0, -1.0), c64(1.0, 0.0), c64(0.0, 1.0), c64(-1.0, 0.0)]
        );
        assert_eq!(lattice_points(&l, 1.5).len(), 8);
        let big = Lattice::new(c64(2.0, 0.0), c64(0.0, 2.0)).unwrap();
        assert!(lattice_points(&big, 1.0).is_empty());
    }

    #[test]
    fn enumeration_matches_brute_force_on_skew_lattice() {
        let l = Lattice::new(c64(0.7, 0.2), c64(-0.4, 1.3)).unwrap();
        let r = 6.3;
        let mut brute = Vec::new();
        for m in -40..=40 {
            for n in -40..=40 {
                let p = LatticePoint::new(m, n);
                if !p.is_zero() && l.point(p).norm() <= r {
                    brute.push(p);
                }
            }
        }
        let mut got = lattice_points(&l, r);
        got.sort();
        brute.sort();
        assert_eq!(got, brute);
    }

    #[test]
    fn serial_and_parallel_sums_agree_bitwise() {
        let l = Lattice::from_tau(c64(0.3, 1.1)).unwrap();
        let f = |z: Complex64, acc: &mut [CompensatedSum]| {
            acc[0].add(z.inv().powu(4));
            acc[1].add(z.inv().powu(6));
        };
        let a = shell_sum(&l, 0.0, 80.0, 2, false, f);
        let b = shell_sum(&l, 0.0, 80.0, 2, true, f);
        assert_eq!(a, b);
    }

    #[test]
    fn odd_sums_vanish() {
        let l = Lattice::from_tau(c64(0.2, 0.9)).unwrap();
        for e in [3, 5, 7] {
            assert!(lattice_sum(&l, e, 60.0).norm() < 1e-12);
        }
    }

    #[test]
    fn argument_choice_ranges() {
        let a = ArgumentChoice::new(0.0).unwrap();
        assert_eq!(a.arg(c64(-1.0, 0.0)), -PI);
        assert!(a.is_upper(c64(1.0, 0.0)));
        assert!(!a.is_upper(c64(-1.0, 0.0)));
        assert!(a.is_upper(c64(0.0, 1.0)));
        let b = ArgumentChoice::new(PI / 2.0).unwrap();
        assert_eq!(b.arg(c64(0.0, -1.0)), -PI / 2.0);
        assert!(b.arg(c64(-1.0, -1e-9)) > PI);
        assert!(ArgumentChoice::new(PI).is_err());
        let s = ArgumentChoice::standard(&Lattice::new(c64(-1.0, 0.0), c64(0.0, -1.0)).unwrap());
        assert_eq!(s.base_angle(), -PI);
    }

    #[test]
    fn paired_square_roots() {
        // λ^{1/2}(−λ)^{1/2} = −i·μ with μ the member of {λ, −λ} with larger argument.
        let a = ArgumentChoice::new(0.3).unwrap();
        for l in [
            c64(1.0, 0.0),
            c64(0.0, 1.0),
            c64(3.0, 2.0),
            c64(-2.0, 0.5),
            c64(0.1, -4.0),
        ] {
            let prod = a.sqrt(l) * a.sqrt(-l);
            let mu = if a.is_upper(l) { l } else { -l };
            assert!((prod - c64(0.0, -1.0) * mu).norm() < 1e-12);
        }
    }

    #[test]
    fn characters() {
        let l = Lattice::square();
        let z = c64(0.37, -1.2);
        assert_eq!(
            character_value(&l, LatticePoint::new(0, 0), z),
            c64(1.0, 0.0)
        );
        let lam = LatticePoint::new(2, -3);
        let v = character_value(&l, lam, z);
        assert!((v.norm() - 1.0).abs() < 1e-12);
        let shifted = character_value(&l, lam, z + l.point(LatticePoint::new(5, 7)));
        assert!((v - shifted).norm() < 1e-12);
        let half = character_value(&l, LatticePoint::new(1, 0), c64(0.0, 0.5));
        assert!((half - c64(-1.0, 0.0)).norm() < 1e-12);
        for p in lattice_points(&l, 3.0) {
            assert!((character_value(&l, lam, l.point(p)) - 1.0).norm() < 1e-12);
        }
    }
}
