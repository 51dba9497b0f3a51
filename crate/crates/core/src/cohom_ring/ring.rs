use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use crate::series::inv_int;

/// Exponent vector, one entry per generator.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

/// Graded truncated polynomial ring on even generators, with the integral
/// of every top-degree monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    generators: Vec<Generator>,
    top_degree: u32,
    integral_table: BTreeMap<Monomial, BigRational>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RingSpec {
    pub fn new(
        generators: Vec<(String, u32)>,
        top_degree: u32,
        integral_table: BTreeMap<Monomial, BigRational>,
    ) -> Result<Arc<Self>> {
        if !top_degree.is_multiple_of(2) {
            return Err(Error::InvalidRing(format!(
                "top degree {top_degree} is odd"
            )));
        }
        let mut gens: Vec<Generator> = Vec::with_capacity(generators.len());
        for (name, degree) in generators {
            if !is_identifier(&name) {
                return Err(Error::InvalidRing(format!(
                    "generator name {name:?} is not an identifier"
                )));
            }
            if gens.iter().any(|g| g.name == name) {
                return Err(Error::InvalidRing(format!("duplicate generator {name:?}")));
            }
            if degree == 0 || degree % 2 != 0 {
                return Err(Error::InvalidRing(format!(
                    "generator {name:?} has degree {degree}; degrees must be even and positive"
                )));
            }
            gens.push(Generator { name, degree });
        }
        let spec = RingSpec {
            generators: gens,
            top_degree,
            integral_table: BTreeMap::new(),
        };
        for mono in integral_table.keys() {
            if mono.len() != spec.generators.len() {
                return Err(Error::InvalidRing(format!(
                    "integral table entry {mono:?} has {} exponents, expected {}",
                    mono.len(),
                    spec.generators.len()
                )));
            }
            let d = spec.degree(mono);
            if d != top_degree {
                return Err(Error::InvalidRing(format!(
                    "integral table entry {} has degree {d}, expected {top_degree}",
                    spec.render_monomial(mono)
                )));
            }
        }
        for mono in spec.monomials_of_degree(top_degree) {
            if !integral_table.contains_key(&mono) {
                return Err(Error::InvalidRing(format!(
                    "integral table is missing the top-degree monomial {}",
                    spec.render_monomial(&mono)
                )));
            }
        }
        Ok(Arc::new(RingSpec {
            integral_table,
            ..spec
        }))
    }

    /// `H^•(pt)`: no generators, `∫ 1 = 1`.
    pub fn point() -> Arc<Self> {
        let mut table = BTreeMap::new();
        table.insert(Vec::new(), BigRational::one());
        RingSpec::new(Vec::new(), 0, table).expect("point ring")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn integral_table(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.integral_table
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn degree(&self, mono: &[u32]) -> u32 {
        mono.iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    /// All monomials of cohomological degree exactly `d`, in lexicographic order.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        fn rec(
            gens: &[Generator],
            i: usize,
            left: u32,
            cur: &mut Monomial,
            out: &mut Vec<Monomial>,
        ) {
            if i == gens.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let deg = gens[i].degree;
            for e in 0..=left / deg {
                cur[i] = e;
                rec(gens, i + 1, left - e * deg, cur, out);
            }
            cur[i] = 0;
        }
        let mut out = Vec::new();
        let mut cur = vec![0; self.generators.len()];
        rec(&self.generators, 0, d, &mut cur, &mut out);
        out
    }

    pub fn render_monomial(&self, mono: &[u32]) -> String {
        let parts: Vec<String> = mono
            .iter()
            .zip(&self.generators)
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| {
                if *e == 1 {
                    g.name.clone()
                } else {
                    format!("{}^{}", g.name, e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub(crate) fn mul_monomials(&self, a: &[u32], b: &[u32]) -> Monomial {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
}

pub(crate) fn same_ring(a: &Arc<RingSpec>, b: &Arc<RingSpec>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Element of a [`RingSpec`] with coefficients in `C`; zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct CohomClass<C> {
    ring: Arc<RingSpec>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: PartialEq> PartialEq for CohomClass<C> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<C: Scalar> CohomClass<C> {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        CohomClass {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<RingSpec>, c: C) -> Self {
        let mut out = Self::zero(ring);
        out.add_term(vec![0; ring.generators.len()], c);
        out
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Self::constant(ring, C::one())
    }

    pub fn generator(ring: &Arc<RingSpec>, name: &str) -> Result<Self> {
        let idx = ring
            .generator_index(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown generator {name:?}")))?;
        let mut mono = vec![0; ring.generators.len()];
        mono[idx] = 1;
        Ok(Self::monomial(ring, mono, C::one()))
    }

    /// `c·mono`, or zero when the monomial lies above the top degree.
    pub fn monomial(ring: &Arc<RingSpec>, mono: Monomial, c: C) -> Self {
        assert_eq!(mono.len(), ring.generators.len(), "monomial length");
        let mut out = Self::zero(ring);
        out.add_term(mono, c);
        out
    }

    pub fn from_terms(
        ring: &Arc<RingSpec>,
        terms: impl IntoIterator<Item = (Monomial, C)>,
    ) -> Result<Self> {
        let mut out = Self::zero(ring);
        for (mono, c) in terms {
            if mono.len() != ring.generators.len() {
                return Err(Error::InvalidInput(format!(
                    "monomial {mono:?} has {} exponents, expected {}",
                    mono.len(),
                    ring.generators.len()
                )));
            }
            out.add_term(mono, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, mono: Monomial, c: C) {
        if self.ring.degree(&mono) > self.ring.top_degree || c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    e.insert(v);
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, C> {
        &self.terms
    }

    pub fn coeff(&self, mono: &[u32]) -> C {
        self.terms.get(mono).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.ring.generators.len()])
    }

    /// Largest degree of a nonzero term (`None` for zero).
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.ring.degree(m)).max()
    }

    /// Smallest degree of a nonzero term (`None` for zero).
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.ring.degree(m)).min()
    }

    /// Whether every term has degree `d` (zero is homogeneous of every degree).
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| self.ring.degree(m) == d)
    }

    pub fn component(&self, d: u32) -> Self {
        CohomClass {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.ring.degree(m) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous components in degrees `0, 2, …, D`.
    pub fn homogeneous_components(&self) -> Vec<Self> {
        (0..=self.ring.top_degree)
            .step_by(2)
            .map(|d| self.component(d))
            .collect()
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
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
        for (m, c) in &self.terms {
            out.add_term(m.clone(), s.clone() * c.clone());
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = Self::zero(&self.ring);
        let top = self.ring.top_degree;
        for (ma, ca) in &self.terms {
            let da = self.ring.degree(ma);
            for (mb, cb) in &other.terms {
                if da + self.ring.degree(mb) > top {
                    continue;
                }
                out.add_term(self.ring.mul_monomials(ma, mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(&self.ring);
        for _ in 0..n {
            out = out.multiply(self).expect("same ring");
        }
        out
    }

    /// `Σ_{deg m = D} coeff(m)·∫m`.
    pub fn integrate(&self) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            if let Some(v) = self.ring.integral_table.get(m) {
                if !v.is_zero() {
                    acc = acc + c.clone() * C::from_rational(v);
                }
            }
        }
        acc
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> CohomClass<D> {
        let mut out = CohomClass::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// `Σ_n f_n x^n` for `x` without constant term (then `x^n = 0` once `2n > D`).
    pub fn apply_series(&self, coeffs: impl Fn(usize) -> C) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::InvalidInput(
                "series substitution needs a class without constant term".into(),
            ));
        }
        let mut out = Self::constant(&self.ring, coeffs(0));
        let mut power = Self::one(&self.ring);
        for n in 1..=(self.ring.top_degree / 2) as usize {
            power = power.multiply(self)?;
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&coeffs(n)))?;
        }
        Ok(out)
    }

    /// `exp` of a class without constant term.
    pub fn exp(&self) -> Result<Self> {
        let mut fact = Vec::new();
        let mut f = C::one();
        for n in 0..=(self.ring.top_degree / 2 + 1) as usize {
            if n > 0 {
                f = f * inv_int::<C>(n);
            }
            fact.push(f.clone());
        }
        self.apply_series(|n| fact[n].clone())
    }

    /// `log` of a class with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::NonUnitSeries);
        }
        let x = self.sub(&Self::one(&self.ring))?;
        x.apply_series(|n| {
            if n == 0 {
                C::zero()
            } else if n % 2 == 1 {
                inv_int::<C>(n)
            } else {
                -inv_int::<C>(n)
            }
        })
    }

    /// `exp(½·log)` of a class with constant term 1.
    pub fn sqrt(&self) -> Result<Self> {
        self.log()?.scale(&inv_int::<C>(2)).exp()
    }

    /// Inverse of a class with constant term 1.
    pub fn inverse_unipotent(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::NotInvertible(
                "class with constant term other than 1".into(),
            ));
        }
        let x = self.sub(&Self::one(&self.ring))?;
        x.apply_series(|n| if n % 2 == 0 { C::one() } else { -C::one() })
    }

    /// Readable form in the generator names, lowest degree first.
    pub fn render(&self) -> String {
        let mut terms: Vec<(&Monomial, &C)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            self.ring
                .degree(a)
                .cmp(&self.ring.degree(b))
                .then_with(|| b.cmp(a))
        });
        render_terms(
            terms
                .into_iter()
                .map(|(m, c)| (self.ring.render_monomial(m), c.render())),
        )
    }
}

impl<C: Field> CohomClass<C> {
    /// Inverse of a class with invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let inv = c0
            .inverse()
            .ok_or_else(|| Error::NotInvertible("class with zero constant term".into()))?;
        Ok(self.scale(&inv).inverse_unipotent()?.scale(&inv))
    }
}

impl<C: Scalar> fmt::Display for CohomClass<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Join `(monomial, coefficient)` renderings as `c*m ± …`.
pub(crate) fn render_terms(terms: impl Iterator<Item = (String, String)>) -> String {
    let mut out = String::new();
    for (mono, coef) in terms {
        let compound = coef.trim_start_matches('-').contains(['+', '-', ' ']);
        let (neg, body) = if compound {
            (false, format!("({coef})"))
        } else if let Some(rest) = coef.strip_prefix('-') {
            (true, rest.to_string())
        } else {
            (false, coef)
        };
        let term = if mono == "1" {
            body
        } else if body == "1" {
            mono
        } else {
            format!("{body}*{mono}")
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn ring_x_y() -> Arc<RingSpec> {
        // x in degree 2, y in degree 4, D = 4
        let mut table = BTreeMap::new();
        table.insert(vec![2, 0], rational(1, 1));
        table.insert(vec![0, 1], rational(3, 1));
        RingSpec::new(vec![("x".into(), 2), ("y".into(), 4)], 4, table).unwrap()
    }

    #[test]
    fn validation() {
        let t = BTreeMap::new();
        assert!(RingSpec::new(vec![("x".into(), 3)], 6, t.clone()).is_err());
        assert!(RingSpec::new(vec![("x".into(), 2)], 5, t.clone()).is_err());
        assert!(RingSpec::new(vec![("x".into(), 2), ("x".into(), 4)], 0, t.clone()).is_err());
        // missing x^2
        assert!(RingSpec::new(vec![("x".into(), 2)], 4, t.clone()).is_err());
        let mut bad = BTreeMap::new();
        bad.insert(vec![1], rational(1, 1));
        assert!(RingSpec::new(vec![("x".into(), 2)], 4, bad).is_err());
        let mut ok = BTreeMap::new();
        ok.insert(vec![2], rational(0, 1));
        assert!(RingSpec::new(vec![("x".into(), 2)], 4, ok).is_ok());
    }

    #[test]
    fn multiply_and_truncate() {
        let r = ring_x_y();
        let one = CohomClass::<BigRational>::one(&r);
        let x = CohomClass::<BigRational>::generator(&r, "x").unwrap();
        let y = CohomClass::<BigRational>::generator(&r, "y").unwrap();
        assert_eq!(one.multiply(&x).unwrap(), x);
        assert!(x.multiply(&y).unwrap().is_zero());
        assert!(x.pow(3).is_zero());
        let a = one.add(&y).unwrap();
        let b = one.sub(&y).unwrap();
        assert_eq!(a.multiply(&b).unwrap(), one);
        let c = one.add(&x).unwrap();
        let d = one.sub(&x).unwrap();
        assert_eq!(c.multiply(&d).unwrap(), one.sub(&x.pow(2)).unwrap());
    }

    #[test]
    fn integration() {
        let r = ring_x_y();
        assert_eq!(
            CohomClass::<BigRational>::one(&r).integrate(),
            rational(0, 1)
        );
        let y = CohomClass::<BigRational>::generator(&r, "y").unwrap();
        assert_eq!(y.scale(&rational(3, 1)).integrate(), rational(9, 1));
        let x = CohomClass::<BigRational>::generator(&r, "x").unwrap();
        assert_eq!(x.integrate(), rational(0, 1));
        let mut table = BTreeMap::new();
        table.insert(vec![1], rational(1, 1));
        let v = RingSpec::new(vec![("v".into(), 2)], 2, table).unwrap();
        let g = CohomClass::<BigRational>::generator(&v, "v").unwrap();
        assert_eq!(g.scale(&rational(3, 1)).integrate(), rational(3, 1));
    }

    #[test]
    fn ring_mismatch() {
        let a = CohomClass::<BigRational>::one(&ring_x_y());
        let b = CohomClass::<BigRational>::one(&RingSpec::point());
        assert_eq!(a.multiply(&b), Err(Error::RingMismatch));
    }

    #[test]
    fn components_resum() {
        let r = ring_x_y();
        let x = CohomClass::<BigRational>::generator(&r, "x").unwrap();
        let y = CohomClass::<BigRational>::generator(&r, "y").unwrap();
        let c = CohomClass::one(&r)
            .add(&x)
            .unwrap()
            .add(&y.scale(&rational(-2, 3)))
            .unwrap();
        let mut sum = CohomClass::zero(&r);
        for comp in c.homogeneous_components() {
            sum = sum.add(&comp).unwrap();
        }
        assert_eq!(sum, c);
        assert!(c.component(4).is_homogeneous(4));
    }

    #[test]
    fn exp_log_sqrt_inverse() {
        let r = ring_x_y();
        let x = CohomClass::<BigRational>::generator(&r, "x").unwrap();
        let y = CohomClass::<BigRational>::generator(&r, "y").unwrap();
        let n = x.scale(&rational(2, 1)).add(&y).unwrap();
        let e = n.exp().unwrap();
        assert_eq!(e.log().unwrap(), n);
        let s = e.sqrt().unwrap();
        assert_eq!(s.multiply(&s).unwrap(), e);
        assert_eq!(e.inverse().unwrap(), n.neg().exp().unwrap());
        let twice = e.scale(&rational(2, 1));
        assert_eq!(
            twice.multiply(&twice.inverse().unwrap()).unwrap(),
            CohomClass::one(&r)
        );
    }

    #[test]
    fn rendering() {
        let r = ring_x_y();
        let x = CohomClass::<BigRational>::generator(&r, "x").unwrap();
        let y = CohomClass::<BigRational>::generator(&r, "y").unwrap();
        let c = CohomClass::one(&r)
            .sub(&x.pow(2).scale(&rational(1, 2)))
            .unwrap()
            .add(&y.scale(&rational(-3, 1)))
            .unwrap();
        assert_eq!(c.render(), "1 - 1/2*x^2 - 3*y");
        assert_eq!(CohomClass::<BigRational>::zero(&r).render(), "0");
    }
}
