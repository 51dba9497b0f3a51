//! Coefficient types.
//!
//! Three coefficient rings run through the same algebra:
//!
//! - [`Complex64`] for lattice-dependent numerics,
//! - [`Exact`] (Gaussian rationals, `Complex<BigRational>`) for exact identities,
//! - [`GPoly`] for symbolic output, polynomials over ℚ in the formal
//!   lattice constants `G2, G4, G6, …`.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
pub use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Gaussian rational numbers.
pub type Exact = Complex<BigRational>;

/// Ring operations shared by every coefficient type.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rational(q: &BigRational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Deterministic textual form (15 significant digits for floats).
    fn render(&self) -> String;

    /// Size used by approximate comparisons.
    fn magnitude(&self) -> f64;
}

/// Scalars with division and a numeric image in ℂ.
pub trait Field: Scalar + Div<Output = Self> {
    fn to_c64(&self) -> Complex64;

    /// Complex conjugate (identity on real fields).
    fn conj(&self) -> Self;

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }
}

pub fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn exact(re: i64, im: i64) -> Exact {
    Complex::new(rational(re, 1), rational(im, 1))
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The exact Gaussian rational equal to a finite double.
pub fn exact_from_c64(z: Complex64) -> Option<Exact> {
    Some(Complex::new(
        BigRational::from_float(z.re)?,
        BigRational::from_float(z.im)?,
    ))
}

impl Scalar for Complex64 {
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn render(&self) -> String {
        format_complex(*self)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Field for Complex64 {
    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }
}

impl Scalar for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn render(&self) -> String {
        self.to_string()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Field for BigRational {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn conj(&self) -> Self {
        self.clone()
    }
}

impl Scalar for Exact {
    fn from_rational(q: &BigRational) -> Self {
        Complex::new(q.clone(), BigRational::zero())
    }

    fn render(&self) -> String {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => self.re.to_string(),
            (true, false) => format!("{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                format!("{}{}{}i", self.re, sign, self.im.abs())
            }
        }
    }

    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl Field for Exact {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }
}

/// `%.15g`-style formatting.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.14e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn format_complex(z: Complex64) -> String {
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im == 0.0 {
        return format_real(re);
    }
    if re == 0.0 {
        return format!("{}i", format_real(im));
    }
    let sign = if im < 0.0 { "-" } else { "+" };
    format!("{}{}{}i", format_real(re), sign, format_real(im.abs()))
}

/// Polynomial over ℚ in the formal lattice constants.
///
/// Exponent slot `j` belongs to `G_{2(j+1)}`; slot 0 is `G2`, which stands
/// for the regularized value ζ_{Λ∖0}(2).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GPoly {
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl GPoly {
    /// The formal symbol `G_{two_k}`.
    pub fn symbol(two_k: u32) -> Self {
        assert!(
            two_k >= 2 && two_k.is_multiple_of(2),
            "G symbols have even index >= 2"
        );
        let mut exps = vec![0; (two_k / 2) as usize];
        exps[(two_k / 2 - 1) as usize] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, BigRational::one());
        GPoly { terms }
    }

    pub fn constant(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Vec::new(), q);
        }
        GPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Substitute numeric values: `values[j]` for `G_{2(j+1)}`.
    pub fn evaluate(&self, values: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(exps, c)| {
                let mut v = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
                for (j, &e) in exps.iter().enumerate() {
                    if e > 0 {
                        v *= values[j].powu(e);
                    }
                }
                v
            })
            .sum()
    }

    fn insert(&mut self, mut exps: Vec<u32>, c: BigRational) {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        let entry = self.terms.entry(exps).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }
}

impl Add for GPoly {
    type Output = GPoly;
    fn add(mut self, rhs: GPoly) -> GPoly {
        for (k, v) in rhs.terms {
            self.insert(k, v);
        }
        self
    }
}

impl Neg for GPoly {
    type Output = GPoly;
    fn neg(self) -> GPoly {
        GPoly {
            terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

impl Sub for GPoly {
    type Output = GPoly;
    fn sub(self, rhs: GPoly) -> GPoly {
        self + (-rhs)
    }
}

impl Mul for GPoly {
    type Output = GPoly;
    fn mul(self, rhs: GPoly) -> GPoly {
        let mut out = GPoly::default();
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                let len = ka.len().max(kb.len());
                let exps = (0..len)
                    .map(|j| ka.get(j).copied().unwrap_or(0) + kb.get(j).copied().unwrap_or(0))
                    .collect();
                out.insert(exps, va * vb);
            }
        }
        out
    }
}

impl Zero for GPoly {
    fn zero() -> Self {
        GPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for GPoly {
    fn one() -> Self {
        GPoly::constant(BigRational::one())
    }
}

impl Scalar for GPoly {
    fn from_rational(q: &BigRational) -> Self {
        GPoly::constant(q.clone())
    }

    fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (exps, c)) in self.terms.iter().enumerate() {
            let monomial: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        format!("G{}", 2 * (j + 1))
                    } else {
                        format!("G{}^{}", 2 * (j + 1), e)
                    }
                })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if monomial.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&monomial.join("*"));
            }
        }
        out
    }

    fn magnitude(&self) -> f64 {
        self.terms
            .values()
            .map(|v| v.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

/// Neumaier-compensated complex summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    carry: Complex64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: Complex64) {
        self.sum = Complex64::new(
            neumaier(self.sum.re, x.re, &mut self.carry.re),
            neumaier(self.sum.im, x.im, &mut self.carry.im),
        );
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

fn neumaier(sum: f64, x: f64, carry: &mut f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *carry += (sum - t) + x;
    } else {
        *carry += (x - t) + sum;
    }
    t
}
