use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wittenloc::cohom_ring::{
    genus_class, power_sums_from_pontryagin, witten_class_symbolic, CohomClass, ManifoldSpec,
    RingSpec, TangentData,
};
use wittenloc::equivariant::{
    equivariant_euler_antiholo, euler_prefactor, normalized_top_chern_antiholo, sign_power,
    top_chern_antiholo, weight_polynomial_antiholo, IsotypicComponent, RealEquivariantBundle,
};
use wittenloc::lattice_fn::{eisenstein, sigma_series, weierstrass_sigma, ArgumentChoice, Lattice};
use wittenloc::scalar::{c64, exact, rational, Exact, Field};
use wittenloc::series::Series;

fn bundle_ring() -> Arc<RingSpec> {
    let mut table = BTreeMap::new();
    table.insert(vec![4, 0], rational(1, 1));
    table.insert(vec![2, 1], rational(2, 1));
    table.insert(vec![0, 2], rational(-1, 1));
    RingSpec::new(vec![("x".into(), 2), ("y".into(), 4)], 8, table).unwrap()
}

fn random_class(rng: &mut ChaCha8Rng, ring: &Arc<RingSpec>, degree: u32) -> CohomClass<Exact> {
    let terms = ring.monomials_of_degree(degree).into_iter().map(|m| {
        let re = rational(rng.gen_range(-3..=3), rng.gen_range(1..=3));
        let im = rational(rng.gen_range(-2..=2), rng.gen_range(1..=2));
        (m, Exact::new(re, im))
    });
    CohomClass::from_terms(ring, terms).unwrap()
}

/// Real rank `2·Σ ranks ≤ 8`, pairwise non-opposite Gaussian-integer weights.
fn random_bundle(seed: u64, ring: &Arc<RingSpec>) -> RealEquivariantBundle<Exact> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut budget: u32 = rng.gen_range(1..=4);
    let mut weights: Vec<Exact> = Vec::new();
    let mut components = Vec::new();
    while budget > 0 {
        let rank = rng.gen_range(1..=budget.min(2));
        budget -= rank;
        let lambda = loop {
            let l = exact(rng.gen_range(-4..=4), rng.gen_range(-4..=4));
            if l != exact(0, 0) && !weights.iter().any(|w| *w == l || *w == -l.clone()) {
                break l;
            }
        };
        weights.push(lambda.clone());
        let chern = (1..=rank)
            .map(|j| random_class(&mut rng, ring, 2 * j))
            .collect();
        components.push(IsotypicComponent::new(ring, lambda, rank, chern).unwrap());
    }
    RealEquivariantBundle::from_complex_structure(ring, None, components).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn euler_square_is_signed_top_chern(seed in any::<u64>(), base in -3.1f64..3.1) {
        let ring = bundle_ring();
        let v = random_bundle(seed, &ring);
        let arg = ArgumentChoice::new(base).unwrap();
        let eul = equivariant_euler_antiholo(&v, &arg).unwrap();
        let c = v.complexification();
        let top = top_chern_antiholo(c).unwrap();
        let factored = weight_polynomial_antiholo(c).unwrap().multiply(&normalized_top_chern_antiholo(c).unwrap()).unwrap();
        prop_assert_eq!(&factored, &top);
        let rk = v.effective_real_rank();
        prop_assert_eq!(eul.multiply(&eul).unwrap(), top.scale(&sign_power::<Exact>(rk / 2)));
        prop_assert!(eul.is_homogeneous(rk as i64));
        prop_assert!(top.is_homogeneous(2 * rk as i64));
    }

    #[test]
    fn normalized_part_ignores_argument_choice(seed in any::<u64>(), a in -3.1f64..3.1, b in -3.1f64..3.1) {
        let ring = bundle_ring();
        let v = random_bundle(seed, &ring);
        let (ca, cb) = (ArgumentChoice::new(a).unwrap(), ArgumentChoice::new(b).unwrap());
        let ea = equivariant_euler_antiholo(&v, &ca).unwrap();
        let eb = equivariant_euler_antiholo(&v, &cb).unwrap();
        let ra = ea.scale(&euler_prefactor(&v, &ca).inverse().unwrap());
        let rb = eb.scale(&euler_prefactor(&v, &cb).inverse().unwrap());
        prop_assert_eq!(&ra, &rb);
        prop_assert!(ea == eb || ea == eb.neg());
        prop_assert!(normalized_top_chern_antiholo(v.complexification()).unwrap().is_homogeneous(0));
    }
}

fn pontryagin_ring() -> Arc<RingSpec> {
    let mut table = BTreeMap::new();
    table.insert(vec![2, 0], rational(1, 1));
    table.insert(vec![1, 1], rational(0, 1));
    table.insert(vec![0, 2], rational(3, 1));
    RingSpec::new(vec![("a".into(), 4), ("b".into(), 4)], 8, table).unwrap()
}

fn random_tangent(ring: &Arc<RingSpec>, coeffs: &[i64], dimension: u32) -> TangentData {
    let mono = |m: Vec<u32>, c: i64| (m, rational(c, 1));
    let p1 = CohomClass::from_terms(
        ring,
        [mono(vec![1, 0], coeffs[0]), mono(vec![0, 1], coeffs[1])],
    )
    .unwrap();
    let mut p = vec![p1];
    if dimension >= 8 {
        let p2 = CohomClass::from_terms(
            ring,
            [
                mono(vec![2, 0], coeffs[2]),
                mono(vec![1, 1], coeffs[3]),
                mono(vec![0, 2], coeffs[4]),
            ],
        )
        .unwrap();
        p.push(p2);
    }
    TangentData::new(ring, p, dimension).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn genus_is_multiplicative(
        c in proptest::collection::vec(-4i64..=4, 10),
        q in proptest::collection::vec(-5i64..=5, 4),
    ) {
        let ring = pontryagin_ring();
        let s = Series::new(
            vec![rational(1, 1), rational(0, 1), rational(q[0], 2), rational(0, 1), rational(q[1], 3),
                 rational(0, 1), rational(q[2], 5), rational(0, 1), rational(q[3], 7)],
            8,
        );
        let t1 = random_tangent(&ring, &c[..5], 4);
        let t2 = random_tangent(&ring, &c[5..], 4);
        let sum = t1.whitney_sum(&t2).unwrap();
        let lhs = genus_class(&s, &sum).unwrap();
        let rhs = genus_class(&s, &t1).unwrap().multiply(&genus_class(&s, &t2).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn witten_class_is_weight_homogeneous(c in proptest::collection::vec(-4i64..=4, 5)) {
        let ring = pontryagin_ring();
        let m = ManifoldSpec::new(random_tangent(&ring, &c, 8)).unwrap();
        let w = witten_class_symbolic(&m).unwrap();
        for (mono, coeff) in w.terms() {
            let degree = ring.degree(mono);
            for (exps, _) in coeff.terms() {
                let weight: u32 = exps.iter().enumerate().map(|(j, e)| 2 * (j as u32 + 1) * e).sum();
                prop_assert_eq!(2 * weight, degree);
            }
        }
    }

    #[test]
    fn sigma_is_odd(tr in -0.5f64..0.5, ti in 0.6f64..2.0, zr in -0.45f64..0.45, zi in -0.45f64..0.45) {
        let l = Lattice::from_tau(c64(tr, ti)).unwrap();
        let z = c64(zr, zi);
        let s = weierstrass_sigma(z, &l).unwrap();
        let m = weierstrass_sigma(-z, &l).unwrap();
        prop_assert!((s + m).norm() <= 1e-12 * s.norm().max(1e-300));
    }

    #[test]
    fn eisenstein_scales_with_the_lattice(tr in -0.5f64..0.5, ti in 0.8f64..1.6, cr in 0.5f64..2.0, ci in -1.0f64..1.0) {
        let l = Lattice::from_tau(c64(tr, ti)).unwrap();
        let c = c64(cr, ci);
        let scaled = l.scaled(c).unwrap();
        for two_k in [4u32, 6] {
            let g = eisenstein(&l, two_k, l.default_radius()).unwrap();
            let gs = eisenstein(&scaled, two_k, scaled.default_radius()).unwrap();
            prop_assert!((gs * c.powu(two_k) - g).norm() <= 1e-7 * g.norm().max(1.0));
        }
    }
}

#[test]
fn sigma_series_is_odd() {
    let l = Lattice::from_tau(c64(0.1, 1.1)).unwrap();
    let s = sigma_series(&l, 13).unwrap();
    for k in (0..=13).step_by(2) {
        assert_eq!(s.coeff(k), c64(0.0, 0.0));
    }
    assert_eq!(s.coeff(1), c64(1.0, 0.0));
}

/// Ring with three degree-2 roots `x, y, z`; the tangent has Chern roots `±x, ±y, ±z`.
fn root_ring() -> Arc<RingSpec> {
    let ring_gens = vec![("x".into(), 2), ("y".into(), 2), ("z".into(), 2)];
    let mut table = BTreeMap::new();
    for a in 0..=6u32 {
        for b in 0..=(6 - a) {
            table.insert(vec![a, b, 6 - a - b], rational(1, 1));
        }
    }
    RingSpec::new(ring_gens, 12, table).unwrap()
}

#[test]
fn newton_identities_match_brute_force_roots() {
    let ring = root_ring();
    let g = |n: &str| CohomClass::<BigRational>::generator(&ring, n).unwrap();
    for roots in [vec!["x"], vec!["x", "y"], vec!["x", "y", "z"]] {
        let sq: Vec<_> = roots
            .iter()
            .map(|r| g(r).multiply(&g(r)).unwrap())
            .collect();
        // p_k = e_k(x_i²)
        let mut e = vec![CohomClass::one(&ring)];
        for s in &sq {
            let mut next = e.clone();
            next.push(CohomClass::zero(&ring));
            for k in 1..next.len() {
                next[k] = next[k].add(&e[k - 1].multiply(s).unwrap()).unwrap();
            }
            e = next;
        }
        let t = TangentData::new(&ring, e[1..].to_vec(), 12).unwrap();
        let sums = power_sums_from_pontryagin(&t, 6);
        for (i, s) in sums.iter().enumerate() {
            let k = i as u32 + 1;
            let mut brute = CohomClass::zero(&ring);
            for r in &roots {
                let x = g(r);
                brute = brute.add(&x.pow(k)).unwrap().add(&x.neg().pow(k)).unwrap();
            }
            assert_eq!(s, &brute, "k = {k}, roots {roots:?}");
        }
    }
}
