use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::cohom_ring::{CohomClass, RingSpec};
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use crate::series::inv_int;

/// Coefficients of `ξ̄_Λ^n`, as returned by integration.
pub type LaurentData<C> = BTreeMap<i32, C>;

/// Laurent polynomial in `ξ̄_Λ` (degree 2) with coefficients in a truncated ring.
#[derive(Clone, Debug)]
pub struct EquivariantClass<C> {
    ring: Arc<RingSpec>,
    terms: BTreeMap<i32, CohomClass<C>>,
}

impl<C: PartialEq> PartialEq for EquivariantClass<C> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
            && self.terms == other.terms
    }
}

impl<C: Scalar> EquivariantClass<C> {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        EquivariantClass {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Self::from_cohom(&CohomClass::one(ring))
    }

    /// `c·ξ̄^n`.
    pub fn xi_power(ring: &Arc<RingSpec>, n: i32, c: C) -> Self {
        Self::term(n, CohomClass::constant(ring, c))
    }

    /// `a·ξ̄^n`.
    pub fn term(n: i32, a: CohomClass<C>) -> Self {
        let mut out = Self::zero(a.ring());
        out.add_term(n, a);
        out
    }

    /// A non-equivariant class, at `ξ̄⁰`.
    pub fn from_cohom(a: &CohomClass<C>) -> Self {
        Self::term(0, a.clone())
    }

    /// `z ↦ α·ξ̄^{−1}` substitution: degree-`2k` components move to `ξ̄^{−k}`.
    pub fn graded(a: &CohomClass<C>) -> Self {
        let mut out = Self::zero(a.ring());
        for (k, comp) in a.homogeneous_components().into_iter().enumerate() {
            out.add_term(-(k as i32), comp);
        }
        out
    }

    fn add_term(&mut self, n: i32, a: CohomClass<C>) {
        if a.is_zero() {
            return;
        }
        let v = match self.terms.remove(&n) {
            Some(old) => old.add(&a).expect("same ring"),
            None => a,
        };
        if !v.is_zero() {
            self.terms.insert(n, v);
        }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<i32, CohomClass<C>> {
        &self.terms
    }

    /// Coefficient of `ξ̄^n`.
    pub fn coeff(&self, n: i32) -> CohomClass<C> {
        self.terms
            .get(&n)
            .cloned()
            .unwrap_or_else(|| CohomClass::zero(&self.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (n, a) in &other.terms {
            out.add_term(*n, a.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(&self.ring);
        for (n, a) in &self.terms {
            out.add_term(*n, a.scale(s));
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (na, a) in &self.terms {
            for (nb, b) in &other.terms {
                out.add_term(na + nb, a.multiply(b)?);
            }
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> EquivariantClass<D> {
        let mut out = EquivariantClass::zero(&self.ring);
        for (n, a) in &self.terms {
            out.add_term(*n, a.map_coeffs(&f));
        }
        out
    }

    /// Whether every term satisfies `cohomological degree + 2n = total`.
    pub fn is_homogeneous(&self, total: i64) -> bool {
        self.terms.iter().all(|(n, a)| {
            a.terms()
                .keys()
                .all(|m| self.ring.degree(m) as i64 + 2 * *n as i64 == total)
        })
    }

    /// The total degree, when homogeneous and nonzero.
    pub fn total_degree(&self) -> Option<i64> {
        let (n, a) = self.terms.iter().next()?;
        let m = a.terms().keys().next()?;
        let d = self.ring.degree(m) as i64 + 2 * *n as i64;
        self.is_homogeneous(d).then_some(d)
    }

    /// Every term has cohomological degree ≥ 2, so the class is nilpotent.
    fn is_nilpotent(&self) -> bool {
        self.terms
            .values()
            .all(|a| a.min_degree().is_none_or(|d| d >= 2))
    }

    /// `Σ_n f_n x^n` for nilpotent `x`.
    fn apply_series(&self, coeffs: impl Fn(usize) -> C) -> Result<Self> {
        if !self.is_nilpotent() {
            return Err(Error::InvalidInput(
                "series substitution needs terms of cohomological degree >= 2".into(),
            ));
        }
        let mut out = Self::xi_power(&self.ring, 0, coeffs(0));
        let mut power = Self::one(&self.ring);
        for n in 1..=(self.ring.top_degree() / 2) as usize {
            power = power.multiply(self)?;
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&coeffs(n)))?;
        }
        Ok(out)
    }

    /// `exp` of a nilpotent class.
    pub fn exp(&self) -> Result<Self> {
        let max = (self.ring.top_degree() / 2 + 1) as usize;
        let mut fact = vec![C::one()];
        for n in 1..=max {
            let next = fact[n - 1].clone() * inv_int::<C>(n);
            fact.push(next);
        }
        self.apply_series(|n| fact[n].clone())
    }

    /// `1 +` nilpotent part, or an error.
    fn unipotent_part(&self) -> Result<Self> {
        let x = self.sub(&Self::one(&self.ring))?;
        if !x.is_nilpotent() {
            return Err(Error::NonUnitSeries);
        }
        Ok(x)
    }

    /// `log` of `1 + nilpotent`.
    pub fn log(&self) -> Result<Self> {
        self.unipotent_part()?.apply_series(|n| match n {
            0 => C::zero(),
            n if n % 2 == 1 => inv_int::<C>(n),
            n => -inv_int::<C>(n),
        })
    }

    /// `exp(½·log)` of `1 + nilpotent`.
    pub fn sqrt(&self) -> Result<Self> {
        self.log()?.scale(&inv_int::<C>(2)).exp()
    }

    /// Inverse of `1 + nilpotent`.
    pub fn inverse_unipotent(&self) -> Result<Self> {
        self.unipotent_part()
            .map_err(|_| Error::NotInvertible("class is not 1 + nilpotent".into()))?
            .apply_series(|n| if n % 2 == 0 { C::one() } else { -C::one() })
    }

    /// `∫` applied to every coefficient; zero results are dropped.
    pub fn integrate(&self) -> LaurentData<C> {
        self.terms
            .iter()
            .map(|(n, a)| (*n, a.integrate()))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(n, a)| {
                let body = a.render();
                let xi = match n {
                    0 => return body,
                    1 => "xibar".to_string(),
                    n => format!("xibar^{n}"),
                };
                if body == "1" {
                    xi
                } else if a.terms().len() == 1 && !body.contains(' ') {
                    format!("{body}*{xi}")
                } else {
                    format!("({body})*{xi}")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<C: Field> EquivariantClass<C> {
    /// Inverse of `u·ξ̄^m·(1 + nilpotent)` with `u` an invertible scalar.
    pub fn inverse(&self) -> Result<Self> {
        let units: Vec<(i32, C)> = self
            .terms
            .iter()
            .map(|(n, a)| (*n, a.constant_term()))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let [(m, u)] = units.as_slice() else {
            return Err(Error::NotInvertible(format!(
                "expected exactly one invertible xi-bar power, found {}",
                units.len()
            )));
        };
        let uinv = u.inverse().expect("nonzero");
        let normalizer = Self::xi_power(&self.ring, -m, uinv);
        self.multiply(&normalizer)?
            .inverse_unipotent()?
            .multiply(&normalizer)
    }
}

impl<C: Scalar> fmt::Display for EquivariantClass<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
