//! Gauss–Legendre quadrature.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `∫_a^b f` with the `n`-point rule.
pub fn integrate_1d(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    let half = (b - a) / 2.0;
    let mid = (a + b) / 2.0;
    x.iter()
        .zip(&w)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Tensor-product rule on `[a1, b1] × [a2, b2]`, summed row by row.
pub fn integrate_2d(
    f: impl Fn(f64, f64) -> f64,
    (a1, b1): (f64, f64),
    (a2, b2): (f64, f64),
    n: usize,
) -> f64 {
    let (x, w) = gauss_legendre(n);
    let (h1, m1) = ((b1 - a1) / 2.0, (a1 + b1) / 2.0);
    let (h2, m2) = ((b2 - a2) / 2.0, (a2 + b2) / 2.0);
    let mut total = 0.0;
    for (xi, wi) in x.iter().zip(&w) {
        let u = m1 + h1 * xi;
        let row: f64 = x
            .iter()
            .zip(&w)
            .map(|(xj, wj)| wj * f(u, m2 + h2 * xj))
            .sum();
        total += wi * row;
    }
    total * h1 * h2
}
