//! Quadrature building blocks: Gauss-Legendre rules, geometrically graded
//! radial panels, spherical rules for `m = 2, 3`, and polynomial
//! extrapolation to zero.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Nodes and weights of a composite rule on `[0, radius]` with panels
/// `[0, t 2^-20], ..., [t 2^j, t 2^{j+1}], ...` up to `min(1, radius)`,
/// then panels of width at most `outer_width`.
pub fn graded_radial_rule(t: f64, radius: f64, nodes: usize, outer_width: f64) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(nodes);
    let mut edges = vec![0.0];
    let knee = radius.min(1.0).max(t);
    let mut e = t * libm::pow(2.0, -20.0);
    while e < knee {
        edges.push(e);
        e *= 2.0;
    }
    edges.push(knee);
    let mut cur = knee;
    while cur < radius - 1e-12 {
        let n = libm::ceil((radius - cur) / outer_width);
        let step = (radius - cur) / n;
        cur += step;
        edges.push(cur);
    }
    let mut r = Vec::with_capacity(edges.len() * nodes);
    let mut w = Vec::with_capacity(edges.len() * nodes);
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b <= a {
            continue;
        }
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, wt) in gx.iter().zip(&gw) {
            r.push(mid + half * x);
            w.push(half * wt);
        }
    }
    (r, w)
}

/// Angular rule on the unit sphere of `R^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngularScheme {
    /// Trapezoid rule with `n` points on the circle (`m = 2`).
    Circle { n: usize },
    /// Gauss-Legendre in `cos(theta)` times trapezoid in `phi` (`m = 3`).
    SphereProduct { polar: usize, azimuth: usize },
}

impl AngularScheme {
    pub fn default_for(m: usize) -> Result<Self> {
        match m {
            2 => Ok(AngularScheme::Circle { n: 16 }),
            3 => Ok(AngularScheme::SphereProduct { polar: 8, azimuth: 16 }),
            _ => Err(Error::Unsupported(alloc::format!("quadrature checks need m in {{2, 3}}, got {m}"))),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            AngularScheme::Circle { .. } => 2,
            AngularScheme::SphereProduct { .. } => 3,
        }
    }

    /// Unit directions and weights; weights sum to the sphere area.
    pub fn nodes(&self) -> Vec<(Vec<f64>, f64)> {
        match *self {
            AngularScheme::Circle { n } => (0..n)
                .map(|i| {
                    let a = 2.0 * PI * i as f64 / n as f64;
                    (vec![libm::cos(a), libm::sin(a)], 2.0 * PI / n as f64)
                })
                .collect(),
            AngularScheme::SphereProduct { polar, azimuth } => {
                let (cx, cw) = gauss_legendre(polar);
                let mut out = Vec::with_capacity(polar * azimuth);
                for (c, wc) in cx.iter().zip(&cw) {
                    let s = libm::sqrt(1.0 - c * c);
                    for j in 0..azimuth {
                        let a = 2.0 * PI * j as f64 / azimuth as f64;
                        out.push((vec![s * libm::cos(a), s * libm::sin(a), *c], wc * 2.0 * PI / azimuth as f64));
                    }
                }
                out
            }
        }
    }
}

/// Weights `w` with `p(0) = sum_i w_i y_i` for the least-squares polynomial
/// of degree `order` through `(t_i, y_i)`; exact interpolation when
/// `order + 1 == t.len()`.
pub fn extrapolation_weights(t: &[f64], order: usize) -> Result<Vec<f64>> {
    let n = t.len();
    if order + 1 > n {
        return Err(Error::Config(alloc::format!(
            "extrapolation order {order} needs at least {} ladder points, got {n}",
            order + 1
        )));
    }
    let d = order + 1;
    if d == n {
        // Lagrange basis at 0
        return Ok((0..n)
            .map(|i| (0..n).filter(|&j| j != i).map(|j| t[j] / (t[j] - t[i])).product())
            .collect());
    }
    // least squares via modified Gram-Schmidt: p(0) = e0' R^-1 Q' y, so w = Q R^-T e0
    let scale = t.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut q: Vec<Vec<f64>> = (0..d).map(|j| t.iter().map(|&x| libm::pow(x / scale, j as f64)).collect()).collect();
    let mut r = vec![vec![0.0; d]; d];
    for j in 0..d {
        for i in 0..j {
            let dot: f64 = q[i].iter().zip(&q[j]).map(|(a, b)| a * b).sum();
            r[i][j] = dot;
            let qi = q[i].clone();
            for (a, b) in q[j].iter_mut().zip(&qi) {
                *a -= dot * b;
            }
        }
        let norm = libm::sqrt(q[j].iter().map(|a| a * a).sum());
        if norm < 1e-14 {
            return Err(Error::Config("degenerate extrapolation ladder".into()));
        }
        r[j][j] = norm;
        for a in q[j].iter_mut() {
            *a /= norm;
        }
    }
    // forward solve R' z = e0
    let mut z = vec![0.0; d];
    for i in 0..d {
        let s: f64 = (0..i).map(|k| r[k][i] * z[k]).sum();
        z[i] = (if i == 0 { 1.0 } else { 0.0 } - s) / r[i][i];
    }
    Ok((0..n).map(|k| (0..d).map(|j| q[j][k] * z[j]).sum()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1usize, 2, 5, 16] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..2 * n {
                let approx: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * libm::pow(*xi, deg as f64)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((approx - exact).abs() < 1e-14, "n = {n}, deg = {deg}");
            }
        }
    }

    #[test]
    fn radial_rule_integrates_gaussian_moment() {
        let (r, w) = graded_radial_rule(0.05, 6.0, 16, 0.5);
        let approx: f64 = r.iter().zip(&w).map(|(r, w)| w * r * r * libm::exp(-r * r)).sum();
        assert!((approx - libm::sqrt(PI) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_rules_have_correct_area() {
        let s: f64 = AngularScheme::Circle { n: 16 }.nodes().iter().map(|n| n.1).sum();
        assert!((s - 2.0 * PI).abs() < 1e-14);
        let s: f64 = AngularScheme::SphereProduct { polar: 8, azimuth: 16 }.nodes().iter().map(|n| n.1).sum();
        assert!((s - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn extrapolation_is_exact_on_polynomials() {
        let t: Vec<f64> = (1..=8).rev().map(|i| 0.05 * i as f64).collect();
        let w = extrapolation_weights(&t, 7).unwrap();
        let y: Vec<f64> = t.iter().map(|x| 3.0 - 2.0 * x + x * x * x * x * x * x * x).collect();
        let v: f64 = w.iter().zip(&y).map(|(a, b)| a * b).sum();
        assert!((v - 3.0).abs() < 1e-10);
        let w = extrapolation_weights(&[0.4, 0.2, 0.1], 2).unwrap();
        let v: f64 = w.iter().zip([0.4, 0.2, 0.1]).map(|(a, t)| a * (1.0 + t * t)).sum();
        assert!((v - 1.0).abs() < 1e-14);
        let t: Vec<f64> = (1..=10).rev().map(|i| 0.04 * i as f64).collect();
        let w = extrapolation_weights(&t, 3).unwrap();
        let v: f64 = w.iter().zip(&t).map(|(a, x)| a * (2.0 + x - x * x * x)).sum();
        assert!((v - 2.0).abs() < 1e-12);
    }
}
