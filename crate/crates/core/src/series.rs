//! Truncated power series in one variable.

use crate::error::{Error, Result};
use crate::scalar::{Complex64, Field, Scalar};

/// `Σ_{k=0}^{order} a_k z^k`; everything above `order` is discarded.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

pub type ComplexSeries = Series<Complex64>;

impl<C: Scalar> Series<C> {
    /// Coefficients beyond `order` are dropped, missing ones are zero.
    pub fn new(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Series::new(vec![C::one()], order)
    }

    pub fn monomial(power: usize, c: C, order: usize) -> Self {
        let mut s = Series::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Series::new(self.coeffs.clone(), order)
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].clone() + other.coeffs[k].clone())
            .collect();
        Series { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].clone() - other.coeffs[k].clone())
            .collect();
        Series { coeffs }
    }

    pub fn scale(&self, c: &C) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|a| c.clone() * a.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Series { coeffs }
    }

    /// `exp` of a series without constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InvalidInput(
                "exp needs a series with zero constant term".into(),
            ));
        }
        // f = exp(g) ⇒ n f_n = Σ_{k=1}^n k g_k f_{n-k}
        let order = self.order();
        let mut f = vec![C::zero(); order + 1];
        f[0] = C::one();
        for n in 1..=order {
            let mut acc = C::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc = acc + C::from_int(k as i64) * self.coeffs[k].clone() * f[n - k].clone();
                }
            }
            f[n] = acc * inv_int::<C>(n);
        }
        Ok(Series { coeffs: f })
    }

    /// `log` of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NonUnitSeries);
        }
        // n g_n = n f_n − Σ_{k=1}^{n-1} k g_k f_{n-k}
        let order = self.order();
        let mut g = vec![C::zero(); order + 1];
        for n in 1..=order {
            let mut acc = C::from_int(n as i64) * self.coeffs[n].clone();
            for k in 1..n {
                if !g[k].is_zero() {
                    acc = acc - C::from_int(k as i64) * g[k].clone() * self.coeffs[n - k].clone();
                }
            }
            g[n] = acc * inv_int::<C>(n);
        }
        Ok(Series { coeffs: g })
    }

    /// `self(inner(z))`; `inner` must have no constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InvalidInput(
                "composition needs an inner series with zero constant term".into(),
            ));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut out = Series::zero(order);
        for c in self.coeffs[..=order].iter().rev() {
            out = out.mul(&inner);
            out.coeffs[0] = out.coeffs[0].clone() + c.clone();
        }
        Ok(out)
    }

    /// Divide by `z^k`. The low coefficients must vanish; the order drops by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order() || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(Error::InvalidInput(format!(
                "series is not divisible by z^{k}"
            )));
        }
        Ok(Series {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// For an even series `f(z)`, the series `g(w)` with `g(z²) = f(z)`.
    pub fn even_in_square(&self) -> Result<Self> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return Err(Error::InvalidInput("series is not even".into()));
        }
        Ok(Series {
            coeffs: self.coeffs.iter().step_by(2).cloned().collect(),
        })
    }

    pub fn eval(&self, z: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * z.clone() + c.clone())
    }
}

impl<C: Field> Series<C> {
    pub fn reciprocal(&self) -> Result<Self> {
        let a0inv = self.coeffs[0]
            .inverse()
            .ok_or_else(|| Error::NotInvertible("series with zero constant term".into()))?;
        let order = self.order();
        let mut b = vec![C::zero(); order + 1];
        b[0] = a0inv.clone();
        for n in 1..=order {
            let mut acc = C::zero();
            for k in 1..=n {
                acc = acc + self.coeffs[k].clone() * b[n - k].clone();
            }
            b[n] = -(a0inv.clone() * acc);
        }
        Ok(Series { coeffs: b })
    }
}

pub(crate) fn inv_int<C: Scalar>(n: usize) -> C {
    C::from_rational(&num_rational::BigRational::new(1.into(), (n as i64).into()))
}
