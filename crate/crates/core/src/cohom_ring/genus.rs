//! Splitting-principle calculus and multiplicative genera.

use std::sync::Arc;

use num_rational::BigRational;

use crate::cohom_ring::ring::{same_ring, CohomClass, RingSpec};
use crate::error::{Error, Result};
use crate::lattice_fn::{
    witten_char_series_with, ArgumentChoice, Lattice, LatticeConstants, NumericConstants,
    SymbolicConstants,
};
use crate::scalar::{Complex64, GPoly, Scalar};
use crate::series::{inv_int, Series};

/// Pontryagin classes `p_1, p_2, …` of a real bundle of rank `dimension`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentData {
    ring: Arc<RingSpec>,
    pontryagin: Vec<CohomClass<BigRational>>,
    dimension: u32,
}

impl TangentData {
    /// `pontryagin[k-1] = p_k`; each must be homogeneous of degree `4k`.
    pub fn new(
        ring: &Arc<RingSpec>,
        pontryagin: Vec<CohomClass<BigRational>>,
        dimension: u32,
    ) -> Result<Self> {
        if !dimension.is_multiple_of(2) {
            return Err(Error::InvalidTangent(format!(
                "dimension {dimension} is odd"
            )));
        }
        for (i, p) in pontryagin.iter().enumerate() {
            let k = i as u32 + 1;
            if !same_ring(p.ring(), ring) {
                return Err(Error::RingMismatch);
            }
            if !p.is_homogeneous(4 * k) {
                return Err(Error::DegreeMismatch {
                    expected: format!("p{k} homogeneous of degree {}", 4 * k),
                    found: p.render(),
                });
            }
            if 2 * k > dimension && !p.is_zero() {
                return Err(Error::InvalidTangent(format!(
                    "p{k} must vanish for a rank-{dimension} bundle"
                )));
            }
        }
        let mut pontryagin = pontryagin;
        while pontryagin.last().is_some_and(|p| p.is_zero()) {
            pontryagin.pop();
        }
        Ok(TangentData {
            ring: ring.clone(),
            pontryagin,
            dimension,
        })
    }

    /// All Pontryagin classes zero.
    pub fn trivial(ring: &Arc<RingSpec>, dimension: u32) -> Result<Self> {
        TangentData::new(ring, Vec::new(), dimension)
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// `p_k` (zero beyond the stored list).
    pub fn pontryagin(&self, k: usize) -> CohomClass<BigRational> {
        if k == 0 {
            return CohomClass::one(&self.ring);
        }
        self.pontryagin
            .get(k - 1)
            .cloned()
            .unwrap_or_else(|| CohomClass::zero(&self.ring))
    }

    pub fn pontryagin_classes(&self) -> &[CohomClass<BigRational>] {
        &self.pontryagin
    }

    /// Total Pontryagin class `1 + p_1 + p_2 + …`.
    pub fn total_pontryagin(&self) -> CohomClass<BigRational> {
        let mut out = CohomClass::one(&self.ring);
        for p in &self.pontryagin {
            out = out.add(p).expect("same ring");
        }
        out
    }

    /// `c_1 … c_dimension` of the complexification: `c_{2k} = (−1)^k p_k`, odd ones zero.
    pub fn complexified_chern(&self) -> Vec<CohomClass<BigRational>> {
        (1..=self.dimension as usize)
            .map(|j| {
                if j % 2 == 1 {
                    CohomClass::zero(&self.ring)
                } else {
                    let p = self.pontryagin(j / 2);
                    if (j / 2) % 2 == 1 {
                        p.neg()
                    } else {
                        p
                    }
                }
            })
            .collect()
    }

    /// Pontryagin data of the Whitney sum, `p(t ⊕ t′) = p(t)·p(t′)`.
    pub fn whitney_sum(&self, other: &TangentData) -> Result<TangentData> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let total = self
            .total_pontryagin()
            .multiply(&other.total_pontryagin())?;
        let dimension = self.dimension + other.dimension;
        let pont = (1..=dimension / 2)
            .map(|k| total.component(4 * k))
            .collect();
        TangentData::new(&self.ring, pont, dimension)
    }
}

/// A closed manifold: cohomology model plus tangent Pontryagin data.
#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldSpec {
    ring: Arc<RingSpec>,
    tangent: TangentData,
    string_flag: bool,
}

impl ManifoldSpec {
    pub fn new(tangent: TangentData) -> Result<Self> {
        let ring = tangent.ring.clone();
        if tangent.dimension != ring.top_degree() {
            return Err(Error::InvalidTangent(format!(
                "tangent dimension {} differs from the ring's top degree {}",
                tangent.dimension,
                ring.top_degree()
            )));
        }
        let string_flag = tangent.pontryagin(1).is_zero();
        Ok(ManifoldSpec {
            ring,
            tangent,
            string_flag,
        })
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn tangent(&self) -> &TangentData {
        &self.tangent
    }

    pub fn dimension(&self) -> u32 {
        self.tangent.dimension
    }

    /// `p_1 = 0` in the (rational) ring.
    pub fn string_flag(&self) -> bool {
        self.string_flag
    }
}

/// Power sums from elementary symmetric data `e_1, e_2, …` by Newton's identities:
/// `s_k = Σ_{i=1}^{k−1} (−1)^{i−1} e_i s_{k−i} + (−1)^{k−1} k e_k`.
pub fn power_sums_from_elementary<C: Scalar>(
    ring: &Arc<RingSpec>,
    elementary: &[CohomClass<C>],
    max_k: usize,
) -> Vec<CohomClass<C>> {
    let e = |i: usize| {
        elementary
            .get(i - 1)
            .cloned()
            .unwrap_or_else(|| CohomClass::zero(ring))
    };
    let mut s: Vec<CohomClass<C>> = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        let mut acc = e(k).scale(&C::from_int(k as i64));
        if k % 2 == 0 {
            acc = acc.neg();
        }
        for i in 1..k {
            let term = e(i).multiply(&s[k - i - 1]).expect("same ring");
            acc = if i % 2 == 1 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            }
            .expect("same ring");
        }
        s.push(acc);
    }
    s
}

/// `s_k = Σ_j α_j^k` (`k = 1..max_k`) for the Chern roots of `TX ⊗ ℂ`.
pub fn power_sums_from_pontryagin(t: &TangentData, max_k: usize) -> Vec<CohomClass<BigRational>> {
    power_sums_from_elementary(&t.ring, &t.complexified_chern(), max_k)
}

/// `Σ_j β_j^k` (`k = 1..max_k`) for the Pontryagin roots, `e_k(β) = p_k`.
pub fn pontryagin_root_power_sums(t: &TangentData, max_k: usize) -> Vec<CohomClass<BigRational>> {
    power_sums_from_elementary(&t.ring, &t.pontryagin, max_k)
}

/// `exp(Σ_k q_k s_k)` with `log Q = Σ q_k z^k`; coefficients past the series order count as zero.
fn genus_from_power_sums<C: Scalar>(
    ring: &Arc<RingSpec>,
    series: &Series<C>,
    power_sums: &[CohomClass<BigRational>],
) -> Result<CohomClass<C>> {
    if !series.coeff(0).is_one() {
        return Err(Error::NonUnitSeries);
    }
    let n = power_sums.len();
    let log = series.truncate(n.max(series.order())).log()?;
    let mut exponent = CohomClass::zero(ring);
    for (k, s) in power_sums.iter().enumerate() {
        let q = log.coeff(k + 1);
        if q.is_zero() || s.is_zero() {
            continue;
        }
        exponent = exponent.add(&s.map_coeffs(|c| C::from_rational(c)).scale(&q))?;
    }
    exponent.exp()
}

/// `∏_j Q(α_j)` over the Chern roots of `TX ⊗ ℂ` (`z` has degree 2).
pub fn genus_class<C: Scalar>(series: &Series<C>, t: &TangentData) -> Result<CohomClass<C>> {
    let max_k = (t.ring.top_degree() / 2) as usize;
    genus_from_power_sums(&t.ring, series, &power_sums_from_pontryagin(t, max_k))
}

/// `∏_j Q(β_j)` over the Pontryagin roots (`w` has degree 4).
pub fn pontryagin_genus_class<C: Scalar>(
    series: &Series<C>,
    t: &TangentData,
) -> Result<CohomClass<C>> {
    let max_k = (t.ring.top_degree() / 4) as usize;
    genus_from_power_sums(&t.ring, series, &pontryagin_root_power_sums(t, max_k))
}

/// `exp(c·p_1)`.
fn p1_exponential<C: Scalar>(m: &ManifoldSpec, c: C) -> Result<CohomClass<C>> {
    m.tangent
        .pontryagin(1)
        .map_coeffs(|q| C::from_rational(q))
        .scale(&c)
        .exp()
}

/// Witten class `∏_j α_j/σ(α_j)`, times `exp(ζ₂·p_1)` when `p_1 ≠ 0`.
pub fn witten_class_with<C: Scalar>(
    m: &ManifoldSpec,
    consts: &impl LatticeConstants<C>,
) -> Result<CohomClass<C>> {
    let order = (m.ring.top_degree() / 2) as usize;
    let g = genus_class(&witten_char_series_with(consts, order), &m.tangent)?;
    if m.string_flag {
        Ok(g)
    } else {
        g.multiply(&p1_exponential(m, consts.zeta2())?)
    }
}

/// Real Witten class `∏_j √β_j/σ(√β_j)`, times `exp(ζ₂·p_1/2)` when `p_1 ≠ 0`.
pub fn real_witten_class_with<C: Scalar>(
    m: &ManifoldSpec,
    consts: &impl LatticeConstants<C>,
) -> Result<CohomClass<C>> {
    let order = (m.ring.top_degree() / 4) as usize;
    // log(√w/σ(√w)) = Σ_{k≥2} G_{2k} w^k/(2k)
    let mut log = vec![C::zero(); order + 1];
    for (k, slot) in log.iter_mut().enumerate().skip(2) {
        *slot = consts.eisenstein(2 * k as u32) * inv_int::<C>(2 * k);
    }
    let series = Series::new(log, order).exp()?;
    let g = pontryagin_genus_class(&series, &m.tangent)?;
    if m.string_flag {
        Ok(g)
    } else {
        g.multiply(&p1_exponential(m, consts.zeta2() * inv_int::<C>(2))?)
    }
}

fn numeric_constants(
    m: &ManifoldSpec,
    lattice: &Lattice,
    arg_choice: &ArgumentChoice,
) -> Result<NumericConstants> {
    NumericConstants::new(lattice, arg_choice, m.ring.top_degree().max(4))
}

/// Numeric Witten class of `m` for the lattice.
pub fn witten_class(
    m: &ManifoldSpec,
    lattice: &Lattice,
    arg_choice: &ArgumentChoice,
) -> Result<CohomClass<Complex64>> {
    witten_class_with(m, &numeric_constants(m, lattice, arg_choice)?)
}

/// Numeric real Witten class; the prefactor of non-string manifolds uses the standard argument choice.
pub fn real_witten_class(m: &ManifoldSpec, lattice: &Lattice) -> Result<CohomClass<Complex64>> {
    real_witten_class_with(
        m,
        &numeric_constants(m, lattice, &ArgumentChoice::standard(lattice))?,
    )
}

/// Witten class with formal coefficients in `G2, G4, …`.
pub fn witten_class_symbolic(m: &ManifoldSpec) -> Result<CohomClass<GPoly>> {
    witten_class_with(m, &SymbolicConstants)
}

pub fn real_witten_class_symbolic(m: &ManifoldSpec) -> Result<CohomClass<GPoly>> {
    real_witten_class_with(m, &SymbolicConstants)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohom_ring::parse::parse_class;
    use crate::lattice_fn::eisenstein;
    use crate::scalar::rational;
    use std::collections::BTreeMap;

    /// D = 8 ring on p1 (deg 4) and p2 (deg 8).
    fn ring8() -> Arc<RingSpec> {
        let mut table = BTreeMap::new();
        table.insert(vec![2, 0], rational(0, 1));
        table.insert(vec![0, 1], rational(1, 1));
        RingSpec::new(vec![("p1".into(), 4), ("p2".into(), 8)], 8, table).unwrap()
    }

    fn tangent(ring: &Arc<RingSpec>, p: &[&str], d: u32) -> TangentData {
        let classes = p.iter().map(|s| parse_class(ring, s).unwrap()).collect();
        TangentData::new(ring, classes, d).unwrap()
    }

    #[test]
    fn tangent_validation() {
        let r = ring8();
        assert!(TangentData::new(&r, vec![parse_class(&r, "p2").unwrap()], 8).is_err());
        assert!(TangentData::new(&r, vec![], 7).is_err());
        let t = tangent(&r, &["p1"], 8);
        assert!(ManifoldSpec::new(t).is_ok());
        let t = tangent(&r, &["p1"], 4);
        assert!(ManifoldSpec::new(t).is_err());
    }

    #[test]
    fn power_sums_examples() {
        let r = ring8();
        let t = tangent(&r, &["p1", "p2"], 8);
        let s = power_sums_from_pontryagin(&t, 4);
        assert!(s[0].is_zero());
        assert!(s[2].is_zero());
        assert_eq!(s[1], parse_class(&r, "2*p1").unwrap());
        assert_eq!(s[3], parse_class(&r, "2*p1^2 - 4*p2").unwrap());
        let b = pontryagin_root_power_sums(&t, 2);
        assert_eq!(b[0], parse_class(&r, "p1").unwrap());
        assert_eq!(b[1], parse_class(&r, "p1^2 - 2*p2").unwrap());
    }

    #[test]
    fn genus_examples() {
        let r = ring8();
        let t = tangent(&r, &["p1"], 8);
        let one = Series::<BigRational>::one(4);
        assert_eq!(genus_class(&one, &t).unwrap(), CohomClass::one(&r));
        let q = Series::new(vec![rational(1, 1), rational(0, 1), rational(1, 1)], 4);
        let triv = TangentData::trivial(&r, 8).unwrap();
        assert_eq!(genus_class(&q, &triv).unwrap(), CohomClass::one(&r));
        // ∏(1+α²) = exp(Σ log(1+α²)) = exp(s₂ − s₄/2) with s₂ = 2p₁, s₄ = 2p₁²
        let g = genus_class(&q, &t).unwrap();
        assert_eq!(g, parse_class(&r, "1 + 2*p1 + p1^2").unwrap());
        let bad = Series::new(vec![rational(2, 1)], 4);
        assert_eq!(genus_class(&bad, &t), Err(Error::NonUnitSeries));
    }

    #[test]
    fn symbolic_witten_string_8() {
        let r = ring8();
        let m = ManifoldSpec::new(tangent(&r, &["0", "p2"], 8)).unwrap();
        assert!(m.string_flag());
        let w = witten_class_symbolic(&m).unwrap();
        assert_eq!(w.component(4).render(), "0");
        assert_eq!(w.component(8).render(), "-G4*p2");
        let real = real_witten_class_symbolic(&m).unwrap();
        assert_eq!(real.component(8).render(), "-1/2*G4*p2");
        assert_eq!(real.multiply(&real).unwrap(), w);
    }

    #[test]
    fn symbolic_witten_non_string() {
        let r = ring8();
        let m = ManifoldSpec::new(tangent(&r, &["p1", "p2"], 8)).unwrap();
        assert!(!m.string_flag());
        let w = witten_class_symbolic(&m).unwrap();
        assert_eq!(w.component(4).render(), "G2*p1");
        let real = real_witten_class_symbolic(&m).unwrap();
        assert_eq!(real.component(4).render(), "1/2*G2*p1");
        assert_eq!(real.multiply(&real).unwrap(), w);
    }

    #[test]
    fn numeric_witten_matches_eisenstein() {
        let r = ring8();
        let m = ManifoldSpec::new(tangent(&r, &["0", "p2"], 8)).unwrap();
        let l = Lattice::from_tau(Complex64::new(0.1, 1.3)).unwrap();
        let w = witten_class(&m, &l, &ArgumentChoice::standard(&l)).unwrap();
        let g4 = eisenstein(&l, 4, l.default_radius()).unwrap();
        assert!((w.coeff(&[0, 1]) + g4).norm() < 1e-12);
    }

    #[test]
    fn whitney_sum_multiplies() {
        let r = ring8();
        let a = tangent(&r, &["p1"], 4);
        let b = tangent(&r, &["2*p1", "p2"], 4);
        let s = a.whitney_sum(&b).unwrap();
        assert_eq!(s.pontryagin(1), parse_class(&r, "3*p1").unwrap());
        assert_eq!(s.pontryagin(2), parse_class(&r, "2*p1^2 + p2").unwrap());
    }
}
