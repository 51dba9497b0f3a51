//! Subcommand implementations; each returns a [`Report`].

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use num_rational::BigRational;
use wittenloc::cohom_ring::{
    real_witten_class_symbolic, real_witten_class_with, witten_class_symbolic, witten_class_with,
    CohomClass, ManifoldSpec, RingSpec, TangentData,
};
use wittenloc::equivariant::{
    equivariant_euler_antiholo, graded_witten_class_with, halton_points,
    loopspace_regularized_top_chern_with, s2_example, s2_example_with_signs, s2_orientation_signs,
    sign_power, top_chern_antiholo, verify_closedness_s2, witten_genus_symbolic, witten_genus_with,
    EquivariantClass, IsotypicComponent, LaurentData, RealEquivariantBundle, CLOSEDNESS_STEP,
};
use wittenloc::lattice_fn::{
    dedekind_eta, eisenstein_estimate, eta_log_derivative, eta_order, g2_from_eta, g2_iterated,
    regularization_basis, sigma_direct, sigma_over_z_series_with, sigma_series_with,
    weierstrass_sigma, witten_char_series_with, ArgumentChoice, Lattice, LatticePoint,
    NumericConstants, DEFAULT_LATTICE_TOL,
};
use wittenloc::scalar::{exact, Exact, Scalar};

use crate::manifest::{parse_manifest, LatticeInput, Manifest};
use crate::report::{Check, Report, Val};

/// Lattice given on the command line; the square lattice when nothing is set.
#[derive(Clone, Copy, Debug, Default)]
pub struct LatticeSpec {
    pub tau: Option<Complex64>,
    pub omega1: Option<Complex64>,
    pub omega2: Option<Complex64>,
}

impl LatticeSpec {
    pub fn input(&self) -> LatticeInput {
        match (self.tau, self.omega1, self.omega2) {
            (_, Some(a), Some(b)) => LatticeInput::Basis(a, b),
            (Some(t), _, _) => LatticeInput::Tau(t),
            _ => LatticeInput::Tau(Complex64::new(0.0, 1.0)),
        }
    }
}

fn echo_lattice(r: &mut Report, input: &LatticeInput) {
    match *input {
        LatticeInput::Tau(t) => r.input("tau", t),
        LatticeInput::Basis(a, b) => {
            r.input("omega1", a);
            r.input("omega2", b);
        }
    }
}

fn arg_choice(lattice: &Lattice, base: Option<f64>) -> Result<ArgumentChoice> {
    Ok(match base {
        Some(b) => ArgumentChoice::new(b)?,
        None => ArgumentChoice::standard(lattice),
    })
}

struct Stopwatch(Instant);

impl Stopwatch {
    fn start() -> Self {
        Stopwatch(Instant::now())
    }

    fn lap(&mut self, r: &mut Report, stage: &str) {
        r.time(stage, self.0.elapsed().as_secs_f64());
        self.0 = Instant::now();
    }
}

fn new_report(command: &str, timings: bool) -> Report {
    let mut r = Report::new(command);
    if timings {
        r.timings = Some(Vec::new());
    }
    r
}

pub struct EisensteinArgs {
    pub lattice: LatticeSpec,
    pub two_k: u32,
    pub radius: Option<f64>,
    pub tol: f64,
    pub arg_base: Option<f64>,
    pub timings: bool,
}

pub fn eisenstein(a: &EisensteinArgs) -> Result<Report> {
    let mut r = new_report("eisenstein", a.timings);
    let mut clock = Stopwatch::start();
    let input = a.lattice.input();
    echo_lattice(&mut r, &input);
    r.input("two_k", a.two_k);
    let lattice = input.lattice()?;
    if a.two_k == 2 {
        let arg = arg_choice(&lattice, a.arg_base)?;
        r.input("arg_base", arg.base_angle());
        let (mu, nu) = regularization_basis(&lattice, &arg)?;
        let tau = nu / mu;
        let iterated = g2_iterated(tau)? / (mu * mu);
        let order = eta_order(tau);
        let from_eta = g2_from_eta(tau, order)? / (mu * mu);
        r.value("basis_mu", mu);
        r.value("basis_nu", nu);
        r.value("G2", iterated);
        r.value("G2_eta_formula", from_eta);
        r.estimate("eta_product_order", order);
        r.estimate("abs_G2_minus_eta_formula", (iterated - from_eta).norm());
        clock.lap(&mut r, "g2");
        return Ok(r);
    }
    let radius = a.radius.unwrap_or_else(|| lattice.default_radius());
    r.input("radius", radius);
    r.input("tol", a.tol);
    let est = eisenstein_estimate(&lattice, a.two_k, radius, a.tol)?;
    r.value(format!("G{}", a.two_k), est.value);
    r.estimate("doubling_error", est.error_estimate);
    r.estimate("final_radius", est.radius);
    r.estimate("converged", est.converged);
    if !est.converged {
        r.warn("the radius-doubling check did not reach the tolerance within the point budget");
    }
    clock.lap(&mut r, "lattice_sum");
    Ok(r)
}

pub struct EtaArgs {
    pub tau: Complex64,
    pub order: Option<u32>,
    pub timings: bool,
}

pub fn eta(a: &EtaArgs) -> Result<Report> {
    let mut r = new_report("eta", a.timings);
    let mut clock = Stopwatch::start();
    let tau = a.tau;
    r.input("tau", tau);
    let order = a.order.unwrap_or_else(|| eta_order(tau));
    r.input("order", order);
    let value = dedekind_eta(tau, order)?;
    let log_derivative = eta_log_derivative(tau, order)?;
    let from_eta = g2_from_eta(tau, order)?;
    let iterated = g2_iterated(tau)?;
    r.value("eta", value);
    r.value("eta_log_derivative", log_derivative);
    r.value("G2_eta_formula", from_eta);
    r.value("G2_iterated", iterated);
    // η(−1/τ) = √(−iτ)·η(τ)
    let inv = -tau.inv();
    let inv_order = a.order.unwrap_or_else(|| eta_order(inv));
    let lhs = dedekind_eta(inv, inv_order)?;
    let rhs = (Complex64::new(0.0, -1.0) * tau).sqrt() * value;
    r.estimate("abs_G2_eta_minus_iterated", (from_eta - iterated).norm());
    r.estimate("modular_residual", (lhs - rhs).norm());
    clock.lap(&mut r, "eta");
    Ok(r)
}

pub struct SigmaArgs {
    pub lattice: LatticeSpec,
    pub order: usize,
    pub points: Vec<Complex64>,
    pub product_radius: f64,
    pub radius: Option<f64>,
    pub tol: f64,
    pub timings: bool,
}

/// `n` points of the disc `|z| ≤ r`.
pub fn disc_points(n: usize, r: f64) -> Vec<Complex64> {
    halton_points(n, 0.5)
        .into_iter()
        .map(|(u, v)| Complex64::from_polar(r * (u + 0.5).sqrt(), 2.0 * PI * (v + 0.5)))
        .collect()
}

pub fn sigma(a: &SigmaArgs) -> Result<Report> {
    let mut r = new_report("sigma", a.timings);
    let mut clock = Stopwatch::start();
    let input = a.lattice.input();
    echo_lattice(&mut r, &input);
    if a.order == 0 {
        bail!("--order must be at least 1");
    }
    r.input("order", a.order);
    r.input("product_radius", a.product_radius);
    let lattice = input.lattice()?;
    let radius = a.radius.unwrap_or_else(|| lattice.default_radius());
    r.input("radius", radius);
    r.input("tol", a.tol);
    let consts = NumericConstants::with_options(
        &lattice,
        &ArgumentChoice::standard(&lattice),
        (a.order + 1).max(4) as u32,
        radius,
        a.tol,
    )?;
    let series = sigma_series_with(&consts, a.order);
    for k in 0..=a.order {
        let c = series.coeff(k);
        if c != Complex64::new(0.0, 0.0) {
            r.value(format!("sigma_coeff[{k}]"), c);
        }
    }
    clock.lap(&mut r, "series");
    let points = if a.points.is_empty() {
        disc_points(20, 0.4)
    } else {
        a.points.clone()
    };
    let mut worst_direct: f64 = 0.0;
    let mut worst_product: f64 = 0.0;
    for (k, z) in points.iter().enumerate() {
        let s = series.eval(z);
        let d = sigma_direct(*z, &lattice, a.product_radius);
        let q = weierstrass_sigma(*z, &lattice)?;
        worst_direct = worst_direct.max((d - s).norm());
        worst_product = worst_product.max((q - s).norm());
        r.value(
            format!("point[{k:02}] z series direct q_product"),
            Val::List(vec![
                Val::Complex(*z),
                Val::Complex(s),
                Val::Complex(d),
                Val::Complex(q),
            ]),
        );
    }
    clock.lap(&mut r, "evaluations");
    let reciprocal =
        witten_char_series_with(&consts, a.order).mul(&sigma_over_z_series_with(&consts, a.order));
    let worst_reciprocal = (0..=a.order)
        .map(|k| {
            (reciprocal.coeff(k)
                - if k == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                })
            .norm()
        })
        .fold(0.0, f64::max);
    r.estimate("max_abs_direct_minus_series", worst_direct);
    r.estimate("max_abs_q_product_minus_series", worst_product);
    r.estimate("max_reciprocal_coeff_error", worst_reciprocal);
    for (k, e) in consts.estimates().iter().enumerate() {
        r.estimate(format!("G{}_doubling_error", 2 * k + 4), e.error_estimate);
    }
    Ok(r)
}

pub struct WittenArgs {
    pub manifest: String,
    pub symbolic: bool,
    pub real: bool,
    pub arg_base: Option<f64>,
    pub order: Option<u32>,
    pub radius: Option<f64>,
    pub tol: Option<f64>,
    pub timings: bool,
}

pub fn load_manifest(path: &str) -> Result<Manifest> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read manifest {path}"))?;
    parse_manifest(&text).map_err(|e| anyhow!("{path}: {e}"))
}

fn component_rows<C: Scalar>(r: &mut Report, name: &str, class: &CohomClass<C>, max_j: u32) {
    for j in 0..=max_j {
        r.value(format!("{name}_{j}"), class.component(2 * j).render());
    }
}

pub fn witten(a: &WittenArgs) -> Result<Report> {
    let mut r = new_report("witten", a.timings);
    let mut clock = Stopwatch::start();
    let manifest = load_manifest(&a.manifest)?;
    let m = manifest.manifold();
    let lattice = manifest.lattice.lattice()?;
    let chosen = a.arg_base.or(manifest.arg_base);
    let arg = arg_choice(&lattice, chosen)?;
    let radius = a
        .radius
        .or(manifest.options.radius)
        .unwrap_or_else(|| lattice.default_radius());
    let tol = a
        .tol
        .or(manifest.options.tolerance)
        .unwrap_or(DEFAULT_LATTICE_TOL);

    r.input("manifest", a.manifest.as_str());
    echo_lattice(&mut r, &manifest.lattice);
    r.input("arg_base", arg.base_angle());
    r.input("dimension", m.dimension());
    r.input("string", m.string_flag());
    r.input("class", if a.real { "real" } else { "complex" });
    r.input(
        "coefficients",
        if a.symbolic { "symbolic" } else { "numeric" },
    );
    r.input("radius", radius);
    r.input("tol", tol);
    if !m.string_flag() && chosen.is_none() {
        r.warn(format!(
            "p1 is nonzero, so the Witten class and genus depend on the argument choice; \
             using base angle {} (set --arg-base to choose)",
            Val::Real(arg.base_angle()).human()
        ));
    }
    clock.lap(&mut r, "load");

    let max_j = a.order.unwrap_or(u32::MAX).min(m.dimension() / 2);
    let name = if a.real { "Wit_real" } else { "Wit" };
    let consts =
        NumericConstants::with_options(&lattice, &arg, m.ring().top_degree().max(4), radius, tol)?;
    if a.symbolic {
        let class = if a.real {
            real_witten_class_symbolic(&m)?
        } else {
            witten_class_symbolic(&m)?
        };
        component_rows(&mut r, name, &class, max_j);
        let g = witten_genus_symbolic(&m)?;
        r.value("genus_symbolic", g.value.render());
    } else {
        let class = if a.real {
            real_witten_class_with(&m, &consts)?
        } else {
            witten_class_with(&m, &consts)?
        };
        component_rows(&mut r, name, &class, max_j);
    }
    clock.lap(&mut r, "class");
    let g = witten_genus_with(&m, &consts)?;
    r.value("genus", g.value);
    r.value("xi_power", g.xi_power as i64);
    for (k, e) in consts.estimates().iter().enumerate() {
        r.estimate(format!("G{}_doubling_error", 2 * k + 4), e.error_estimate);
    }
    clock.lap(&mut r, "genus");
    Ok(r)
}

pub struct LocalizeArgs {
    pub lattice: LatticeSpec,
    pub lambda: Complex64,
    pub arg_base: Option<f64>,
    pub points: usize,
    pub step: f64,
    pub tol: f64,
    pub flip_orientation: bool,
    pub timings: bool,
}

/// `z` as `m·ω₁ + n·ω₂`, when it is a lattice point.
pub fn lattice_coordinates(lattice: &Lattice, z: Complex64) -> Option<LatticePoint> {
    let vol = lattice.volume();
    let n = (lattice.omega1().conj() * z).im / vol;
    let m = -(z * lattice.omega2().conj()).im / vol;
    let close = |t: f64| (t - t.round()).abs() <= 1e-9 * t.abs().max(1.0);
    (close(m) && close(n)).then(|| LatticePoint::new(m.round() as i64, n.round() as i64))
}

fn render_laurent(data: &LaurentData<Exact>) -> String {
    if data.is_empty() {
        return "0".into();
    }
    data.iter()
        .rev()
        .map(|(n, c)| {
            if *n == 0 {
                format!("({})", c.render())
            } else {
                format!("({})*xibar^{n}", c.render())
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn localize_s2(a: &LocalizeArgs) -> Result<Report> {
    let mut r = new_report("localize-s2", a.timings);
    let mut clock = Stopwatch::start();
    let input = a.lattice.input();
    echo_lattice(&mut r, &input);
    let lattice = input.lattice()?;
    let arg = arg_choice(&lattice, a.arg_base)?;
    r.input("lambda", a.lambda);
    r.input("arg_base", arg.base_angle());
    r.input("points", a.points);
    r.input("step", a.step);
    r.input("tol", a.tol);
    r.input("flip_orientation", a.flip_orientation);
    let p = lattice_coordinates(&lattice, a.lambda).ok_or_else(|| {
        anyhow!(
            "lambda = {} is not a lattice point",
            Val::Complex(a.lambda).human()
        )
    })?;
    if p.is_zero() {
        bail!("lambda must be a nonzero lattice point");
    }
    let lam = lattice.point(p);
    let report = if a.flip_orientation {
        let [n, s] = s2_orientation_signs(lam, &arg);
        s2_example_with_signs(&lattice, p, &arg, [-n, -s])?
    } else {
        s2_example(&lattice, p, &arg)?
    };
    clock.lap(&mut r, "localization");
    let sample = halton_points(a.points, 2.0);
    let residual = verify_closedness_s2(&lattice, lam, &sample, a.step)?;
    clock.lap(&mut r, "closedness");

    let orientation = if a.flip_orientation { -1 } else { 1 };
    let expected = 4.0 * PI * orientation as f64;
    r.value(
        "lattice_coordinates",
        Val::List(vec![Val::Int(p.m), Val::Int(p.n)]),
    );
    r.value(
        "orientation_signs",
        Val::List(
            report
                .orientation_signs
                .iter()
                .map(|s| Val::Int(*s as i64))
                .collect(),
        ),
    );
    r.value("lhs", report.lhs_numeric);
    r.value("rhs_units_of_4pi", render_laurent(&report.rhs_units_of_4pi));
    r.value("rhs", report.rhs_numeric);
    r.value("closedness_residual", residual);
    r.estimate("abs_lhs_minus_4pi", (report.lhs_numeric - expected).abs());
    r.estimate(
        "abs_lhs_minus_rhs",
        (report.lhs_numeric - report.rhs_numeric).abs(),
    );

    let exact_rhs = report.rhs_units_of_4pi.len() == 1
        && report.rhs_units_of_4pi.get(&0) == Some(&exact(orientation, 0));
    r.check(Check::within(
        "quadrature lhs = 4pi",
        (report.lhs_numeric - expected).abs(),
        a.tol,
    ));
    r.check(Check::exact("localization rhs is exactly 4pi", exact_rhs));
    r.check(Check::within(
        "lhs = rhs",
        (report.lhs_numeric - report.rhs_numeric).abs(),
        a.tol,
    ));
    r.check(Check::within("closedness residual", residual, a.tol));
    Ok(r)
}

/// A ring with `x` in degree 2 and `y` in degree 4, top degree 8.
fn bundle_ring() -> Arc<RingSpec> {
    let q = |n: i64| BigRational::from_integer(n.into());
    let table = BTreeMap::from([(vec![4, 0], q(1)), (vec![2, 1], q(1)), (vec![0, 2], q(1))]);
    RingSpec::new(vec![("x".into(), 2), ("y".into(), 4)], 8, table).expect("valid ring")
}

fn sample_bundles(ring: &Arc<RingSpec>) -> Result<Vec<RealEquivariantBundle<Exact>>> {
    let q = |p: i64, d: i64| {
        Exact::new(
            BigRational::new(p.into(), d.into()),
            BigRational::from_integer(0.into()),
        )
    };
    let x = CohomClass::<Exact>::generator(ring, "x")?;
    let y = CohomClass::<Exact>::generator(ring, "y")?;
    let xx = x.multiply(&x)?;
    let a = IsotypicComponent::new(ring, exact(1, 2), 1, vec![x.scale(&q(1, 2))])?;
    let b = IsotypicComponent::new(
        ring,
        exact(-3, 1),
        2,
        vec![x.scale(&exact(2, 1)), y.add(&xx.scale(&q(-1, 3)))?],
    )?;
    let c = IsotypicComponent::new(ring, exact(2, -2), 1, vec![x.scale(&exact(0, 1))])?;
    Ok(vec![
        RealEquivariantBundle::from_complex_structure(ring, None, vec![a.clone()])?,
        RealEquivariantBundle::from_complex_structure(ring, None, vec![a.clone(), b.clone()])?,
        RealEquivariantBundle::from_complex_structure(ring, None, vec![a, b, c])?,
    ])
}

fn string8_manifold(p2_integral: i64) -> Result<ManifoldSpec> {
    let q = |n: i64| BigRational::from_integer(n.into());
    let ring = RingSpec::new(
        vec![("p1".into(), 4), ("p2".into(), 8)],
        8,
        BTreeMap::from([(vec![2, 0], q(0)), (vec![0, 1], q(p2_integral))]),
    )?;
    let p2 = CohomClass::generator(&ring, "p2")?;
    Ok(ManifoldSpec::new(TangentData::new(
        &ring,
        vec![CohomClass::zero(&ring), p2],
        8,
    )?)?)
}

fn max_deviation_from_one(c: &EquivariantClass<Complex64>) -> f64 {
    let one = EquivariantClass::one(c.ring());
    let diff = c.sub(&one).expect("same ring");
    diff.terms()
        .values()
        .flat_map(|a| a.terms().values().map(|v| v.norm()).collect::<Vec<_>>())
        .fold(0.0, f64::max)
}

pub fn selfcheck(timings: bool) -> Result<Report> {
    let mut r = new_report("selfcheck", timings);
    let mut clock = Stopwatch::start();
    let c = |re, im| Complex64::new(re, im);

    let square = Lattice::square();
    let g2i = g2_iterated(c(0.0, 1.0))?;
    r.check(Check::within("G2(i) = pi", (g2i - PI).norm(), 1e-9));
    for tau in [c(0.0, 1.0), c(0.0, 2.0), c(0.5, 1.5)] {
        let d = (g2_iterated(tau)? - g2_from_eta(tau, eta_order(tau))?).norm();
        r.check(Check::within(
            format!("G2 iterated = eta formula at {}", Val::Complex(tau).human()),
            d,
            1e-8,
        ));
    }
    clock.lap(&mut r, "g2");

    let g6 = eisenstein_estimate(&square, 6, square.default_radius(), DEFAULT_LATTICE_TOL)?.value;
    r.check(Check::within("G6(Z[i]) = 0", g6.norm(), 1e-10));
    let tau = c(0.0, 2.0);
    let g4 = eisenstein_estimate(&Lattice::from_tau(tau)?, 4, 300.0, 1e-10)?.value;
    let g4_inv = eisenstein_estimate(&Lattice::from_tau(-tau.inv())?, 4, 300.0, 1e-10)?.value;
    r.check(Check::within(
        "G4(-1/tau) = tau^4 G4(tau) at 2i",
        (g4_inv - tau.powu(4) * g4).norm(),
        1e-8,
    ));
    clock.lap(&mut r, "eisenstein");

    let consts = NumericConstants::new(&square, &ArgumentChoice::standard(&square), 14)?;
    let series = sigma_series_with(&consts, 13);
    let worst = disc_points(20, 0.4)
        .into_iter()
        .map(|z| (sigma_direct(z, &square, 100.0) - series.eval(&z)).norm())
        .fold(0.0, f64::max);
    r.check(Check::within(
        "sigma_direct = sigma series, |z| <= 0.4",
        worst,
        1e-6,
    ));
    let product = witten_char_series_with(&consts, 12).mul(&sigma_over_z_series_with(&consts, 12));
    let recip = (0..=12)
        .map(|k| (product.coeff(k) - if k == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) }).norm())
        .fold(0.0, f64::max);
    r.check(Check::within(
        "(z/sigma) * (sigma/z) = 1 to order 12",
        recip,
        1e-12,
    ));
    clock.lap(&mut r, "sigma");

    let arg = ArgumentChoice::standard(&square);
    for lam in [c(1.0, 0.0), c(0.0, 1.0), c(3.0, 2.0)] {
        let p = lattice_coordinates(&square, lam).expect("lattice point");
        let s2 = s2_example(&square, p, &arg)?;
        let ok = s2.rhs_is_exactly_4pi() && (s2.lhs_numeric - 4.0 * PI).abs() <= 1e-6;
        r.check(Check::exact(
            format!(
                "S2 localization = 4pi, lambda = {}",
                Val::Complex(lam).human()
            ),
            ok,
        ));
    }
    let residual = verify_closedness_s2(
        &square,
        c(1.0, 0.0),
        &halton_points(100, 2.0),
        CLOSEDNESS_STEP,
    )?;
    r.check(Check::within("S2 closedness residual", residual, 1e-6));
    clock.lap(&mut r, "s2");

    let ring = bundle_ring();
    for (k, v) in sample_bundles(&ring)?.iter().enumerate() {
        let eul = equivariant_euler_antiholo(v, &ArgumentChoice::new(0.3)?)?;
        let top = top_chern_antiholo(v.complexification())?;
        let ok =
            eul.multiply(&eul)? == top.scale(&sign_power::<Exact>(v.effective_real_rank() / 2));
        r.check(Check::exact(
            format!("Euler class squared = signed top Chern, bundle {k}"),
            ok,
        ));
    }
    clock.lap(&mut r, "doubling");

    let m = string8_manifold(1)?;
    let lattice = Lattice::from_tau(c(0.2, 1.1))?;
    let consts = NumericConstants::new(&lattice, &ArgumentChoice::standard(&lattice), 8)?;
    let genus = witten_genus_with(&m, &consts)?;
    let g4 = consts.estimates()[0].value;
    r.check(Check::within(
        "8-dim string genus = -G4",
        (genus.value + g4).norm(),
        1e-10,
    ));
    r.check(Check::exact("genus sits at xibar^-4", genus.xi_power == -4));
    let inverse = loopspace_regularized_top_chern_with(&m, &consts)?
        .multiply(&graded_witten_class_with(&m, &consts)?)?;
    r.check(Check::within(
        "regularized top Chern * graded Witten = 1",
        max_deviation_from_one(&inverse),
        1e-12,
    ));
    clock.lap(&mut r, "witten");
    Ok(r)
}
