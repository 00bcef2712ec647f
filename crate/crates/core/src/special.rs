//! Gamma-type functions, sphere areas, the profile function `F_m` and
//! exact Gaussian moments.

use core::f64::consts::PI;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `Gamma(x)`.
#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Nearest non-positive integer `-n` if `z` sits on a Gamma pole.
pub fn gamma_pole(z: f64) -> Option<u32> {
    let n = libm::round(z);
    if n <= 0.0 && (z - n).abs() < 1e-12 {
        Some((-n) as u32)
    } else {
        None
    }
}

/// Area of the unit sphere `S^{d-1}` in `R^d`.
pub fn sigma(d: usize) -> f64 {
    assert!(d >= 1, "sigma needs d >= 1");
    2.0 * libm::pow(PI, d as f64 / 2.0) / gamma(d as f64 / 2.0)
}

/// Digamma `psi(x)`.
pub fn digamma(x: f64) -> f64 {
    if x <= 0.0 && x == libm::floor(x) {
        return f64::NAN;
    }
    if x < 0.5 {
        // psi(1 - x) - psi(x) = pi cot(pi x)
        return digamma(1.0 - x) - PI / libm::tan(PI * x);
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    let series = x2
        * (1.0 / 12.0
            - x2 * (1.0 / 120.0
                - x2 * (1.0 / 252.0
                    - x2 * (1.0 / 240.0 - x2 * (1.0 / 132.0 - x2 * (691.0 / 32760.0 - x2 / 12.0))))));
    acc + libm::log(x) - 0.5 / x - series
}

/// Trigamma `psi'(x)`.
pub fn trigamma(x: f64) -> f64 {
    if x <= 0.0 && x == libm::floor(x) {
        return f64::NAN;
    }
    if x < 0.5 {
        // psi'(1 - x) + psi'(x) = pi^2 / sin^2(pi x)
        let s = libm::sin(PI * x);
        return PI * PI / (s * s) - trigamma(1.0 - x);
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let xi = 1.0 / x;
    let x2 = xi * xi;
    let series = xi
        + 0.5 * x2
        + xi * x2
            * (1.0 / 6.0
                - x2 * (1.0 / 30.0
                    - x2 * (1.0 / 42.0
                        - x2 * (1.0 / 30.0 - x2 * (5.0 / 66.0 - x2 * (691.0 / 2730.0 - x2 * 7.0 / 6.0))))));
    acc + series
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |a, k| a * k as f64)
}

/// `Gamma(z)` off the poles, and the constant Laurent coefficient
/// `(-1)^n psi(n+1) / n!` at `z = -n`.
pub fn fp_gamma(z: f64) -> f64 {
    match gamma_pole(z) {
        Some(n) => sign(n) * digamma(n as f64 + 1.0) / factorial(n),
        None => gamma(z),
    }
}

/// Finite part of `d/dz Gamma(z) = Gamma(z) psi(z)`; at `z = -n` this is
/// the linear Laurent coefficient of `Gamma`.
pub fn fp_gamma_derivative(z: f64) -> f64 {
    match gamma_pole(z) {
        Some(n) => {
            let np = n as f64 + 1.0;
            let p = digamma(np);
            sign(n) / (2.0 * factorial(n)) * (PI * PI / 3.0 + p * p - trigamma(np))
        }
        None => gamma(z) * digamma(z),
    }
}

#[inline]
fn sign(n: u32) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Finite part of `int_0^inf r^s (ln r)^kappa e^{-r^2} dr` for `kappa` in `{0, 1}`.
pub fn gauss_radial_moment(s: f64, kappa: u8) -> f64 {
    let z = (s + 1.0) / 2.0;
    match kappa {
        0 => 0.5 * fp_gamma(z),
        1 => 0.25 * fp_gamma_derivative(z),
        _ => panic!("log power {kappa} not supported"),
    }
}

/// `int_{S^{m-1}} w^alpha dS` for the monomial `w_1^a1 ... w_m^am`.
pub fn sphere_moment(alpha: &[u32]) -> f64 {
    let m = alpha.len();
    if alpha.iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    let total: u32 = alpha.iter().sum();
    // Gamma((a+1)/2)/sqrt(pi) = (a-1)!! / 2^{a/2}; keeps alpha = 0 equal to sigma(m)
    let mut prod = 1.0;
    for &a in alpha {
        let mut k = a as i64 - 1;
        while k > 1 {
            prod *= k as f64;
            k -= 2;
        }
        prod /= libm::pow(2.0, a as f64 / 2.0);
    }
    2.0 * libm::pow(PI, m as f64 / 2.0) * prod / gamma((total as f64 + m as f64) / 2.0)
}

/// Unregularized incomplete beta `B(x; a, b)` given `x` and `1 - x` separately,
/// by the Lentz continued fraction. Accurate for `x < (a+1)/(a+b+2)`.
fn incbeta_cf(x: f64, xc: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for i in 1..=500 {
        let mf = i as f64;
        let m2 = 2.0 * mf;
        let aa = mf * (b - mf) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + mf) * (qab + mf) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    libm::exp(a * libm::log(x) + b * libm::log(xc)) / a * h
}

/// `F_m(inf) = (sqrt(pi)/2) Gamma(m/2) / Gamma((m+1)/2)`.
pub fn profile_at_infinity(m: usize) -> f64 {
    let mf = m as f64;
    0.5 * libm::sqrt(PI) * gamma(mf / 2.0) / gamma((mf + 1.0) / 2.0)
}

/// `(F_m(v), F_m(inf) - F_m(v))` for `v >= 0`, each computed directly in
/// the regime where it is the small quantity.
pub fn profile_pair(m: usize, v: f64) -> (f64, f64) {
    assert!(m >= 1, "profile needs m >= 1");
    assert!(v >= 0.0, "profile_pair needs v >= 0");
    let inf = profile_at_infinity(m);
    if v == 0.0 {
        return (0.0, inf);
    }
    if v.is_infinite() {
        return (inf, 0.0);
    }
    let a = m as f64 / 2.0;
    let b = 0.5;
    let v2 = v * v;
    let x = v2 / (1.0 + v2);
    let xc = 1.0 / (1.0 + v2);
    if x < (a + 1.0) / (a + b + 2.0) {
        let f = 0.5 * incbeta_cf(x, xc, a, b);
        (f, inf - f)
    } else {
        let t = 0.5 * incbeta_cf(xc, x, b, a);
        (inf - t, t)
    }
}

/// `F_m(v) = int_0^v t^{m-1} (1+t^2)^{-(m+1)/2} dt`, extended to `v < 0` by
/// `F_m(-v) = (-1)^m F_m(v)`; `at_infinity` returns `F_m(+inf)`.
pub fn profile(m: usize, v: f64, at_infinity: bool) -> f64 {
    if at_infinity {
        return profile_at_infinity(m);
    }
    if v >= 0.0 {
        profile_pair(m, v).0
    } else {
        let f = profile_pair(m, -v).0;
        if m % 2 == 0 {
            f
        } else {
            -f
        }
    }
}

/// `F_m(inf) - F_m(v)` for `v >= 0`.
pub fn profile_tail(m: usize, v: f64) -> f64 {
    profile_pair(m, v).1
}

/// Double factorial `n!!` with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> f64 {
    let mut k = n;
    let mut p = 1.0;
    while k > 1 {
        p *= k as f64;
        k -= 2;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sigma_values() {
        assert_relative_eq!(sigma(2), 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(sigma(3), 4.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(sigma(4), 2.0 * PI * PI, max_relative = 1e-15);
    }

    #[test]
    fn digamma_and_trigamma_known_values() {
        assert_relative_eq!(digamma(1.0), -EULER_GAMMA, max_relative = 1e-14);
        assert_relative_eq!(digamma(0.5), -EULER_GAMMA - 2.0 * core::f64::consts::LN_2, max_relative = 1e-14);
        assert_relative_eq!(trigamma(1.0), PI * PI / 6.0, max_relative = 1e-14);
        assert_relative_eq!(trigamma(0.5), PI * PI / 2.0, max_relative = 1e-14);
        assert_relative_eq!(digamma(-0.5), digamma(1.5) + PI / libm::tan(-0.5 * PI + PI), epsilon = 1e-13);
    }

    #[test]
    fn fp_gamma_poles() {
        assert_relative_eq!(fp_gamma(0.5), libm::sqrt(PI), max_relative = 1e-15);
        assert_relative_eq!(fp_gamma(0.0), -EULER_GAMMA, max_relative = 1e-14);
        assert_relative_eq!(fp_gamma(-1.0), EULER_GAMMA - 1.0, max_relative = 1e-14);
    }

    #[test]
    fn fp_gamma_derivative_matches_symmetric_difference_at_pole() {
        // Gamma(-n + e) = c_{-1}/e + c0 + c1 e + ...; the odd part cancels in
        // [Gamma(-n+e) + Gamma(-n-e)]/2 = c0 + c2 e^2, and the even part in
        // [Gamma(-n+e) - Gamma(-n-e)]/2 = c_{-1}/e + c1 e + c3 e^3.
        for n in 0..4u32 {
            let z = -(n as f64);
            let e = 1e-3;
            let res = sign(n) / factorial(n);
            let odd = 0.5 * (gamma(z + e) - gamma(z - e));
            let c1 = (odd - res / e) / e;
            assert_relative_eq!(fp_gamma_derivative(z), c1, max_relative = 1e-4);
        }
    }

    #[test]
    fn profile_known_values() {
        assert_eq!(profile(3, 0.0, false), 0.0);
        assert_relative_eq!(profile(1, 1.0, false), PI / 4.0, max_relative = 1e-15);
        assert_relative_eq!(profile(2, 1.0, false), 1.0 - 1.0 / libm::sqrt(2.0), max_relative = 1e-14);
        assert_relative_eq!(profile_at_infinity(1), PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(profile_at_infinity(2), 1.0, max_relative = 1e-15);
        assert_relative_eq!(profile(2, -1.0, false), profile(2, 1.0, false));
        assert_relative_eq!(profile(3, -1.0, false), -profile(3, 1.0, false));
    }

    #[test]
    fn profile_tail_is_accurate_for_large_v() {
        // F_2(inf) - F_2(v) = (1+v^2)^{-1/2}
        for &v in &[10.0, 1e3, 1e6] {
            let exact = 1.0 / libm::sqrt(1.0 + v * v);
            assert_relative_eq!(profile_tail(2, v), exact, max_relative = 1e-13);
        }
        // F_1 tail = pi/2 - atan v = atan(1/v)
        assert_relative_eq!(profile_tail(1, 1e4), libm::atan(1e-4), max_relative = 1e-13);
    }

    #[test]
    fn sphere_moment_values() {
        assert_eq!(sphere_moment(&[0, 0]), sigma(2));
        assert_eq!(sphere_moment(&[0, 0, 0]), sigma(3));
        assert_relative_eq!(sphere_moment(&[2, 0, 0]), 4.0 * PI / 3.0, max_relative = 1e-15);
        assert_eq!(sphere_moment(&[1, 2]), 0.0);
    }
}
