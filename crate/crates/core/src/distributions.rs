//! Distributions on the boundary `R^m`: finite-part radial pieces
//! `c ln^k(r) r^b [w]` plus derivatives of `delta`, the normalized
//! families `T*` and `U*`, powers of the Dirac and Hilbert-Dirac operators,
//! the log-type fundamental solutions, and the boundary-value tables of the
//! potential chain.
//!
//! Pairings against Gaussian-polynomial test functions are exact: radial
//! pieces reduce to sphere moments and (finite parts of) Gamma values.
//! Clifford coefficients of a distribution multiply from the left.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::clifford::{AlgebraContext, Multivector};
use crate::error::{unsupported, Error, Result};
use crate::special::{double_factorial, gamma, gamma_pole, gauss_radial_moment, sigma, sphere_moment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "+",
            Side::Minus => "-",
        })
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "upper" => Ok(Side::Plus),
            "-" | "minus" | "lower" => Ok(Side::Minus),
            _ => Err(Error::Config(format!("bad side {s:?}, expected + or -"))),
        }
    }
}

/// Boundary-value series: `a_k`, `b_k` or `c_k = a_k/2 + ebar0 b_k/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Series {
    A,
    B,
    C,
}

impl FromStr for Series {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(Series::A),
            "b" | "B" => Ok(Series::B),
            "c" | "C" => Ok(Series::C),
            _ => Err(Error::Config(format!("bad series {s:?}, expected a, b or c"))),
        }
    }
}

/// `T` (scalar) or `U` (vector) radial family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    T,
    U,
}

/// A complex Clifford number `re + i im`.
#[derive(Clone, Debug, PartialEq)]
pub struct Coeff {
    pub re: Multivector,
    pub im: Multivector,
}

impl Coeff {
    pub fn real(re: Multivector) -> Self {
        let im = Multivector::zero(re.context());
        Self { re, im }
    }

    pub fn scalar(ctx: AlgebraContext, x: f64) -> Self {
        Self::real(Multivector::scalar(ctx, x))
    }

    pub fn complex_scalar(ctx: AlgebraContext, re: f64, im: f64) -> Self {
        Self { re: Multivector::scalar(ctx, re), im: Multivector::scalar(ctx, im) }
    }

    pub fn zero(ctx: AlgebraContext) -> Self {
        Self::scalar(ctx, 0.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { re: self.re.scale(s), im: self.im.scale(s) }
    }

    /// Product with the complex scalar `a + i b`.
    pub fn scale_complex(&self, a: f64, b: f64) -> Self {
        let mut re = self.re.scale(a);
        re.axpy(-b, &self.im);
        let mut im = self.im.scale(a);
        im.axpy(b, &self.re);
        Self { re, im }
    }

    pub fn add(&self, o: &Coeff) -> Self {
        Self { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Coeff) -> Self {
        Self { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    /// `x * self`.
    pub fn left_mul(&self, x: &Multivector) -> Self {
        Self { re: x * &self.re, im: x * &self.im }
    }

    /// `self * x`.
    pub fn right_mul(&self, x: &Multivector) -> Self {
        Self { re: &self.re * x, im: &self.im * x }
    }

    pub fn max_abs(&self) -> f64 {
        self.re.max_abs().max(self.im.max_abs())
    }

    pub fn norm(&self) -> f64 {
        libm::hypot(self.re.norm(), self.im.norm())
    }

    pub fn is_zero(&self) -> bool {
        self.max_abs() == 0.0
    }

    pub fn is_real(&self) -> bool {
        self.im.max_abs() == 0.0
    }

    /// The value as a real scalar if it is one.
    pub fn as_real_scalar(&self) -> Option<f64> {
        let s = self.re.scalar_part();
        let rest = self.re.coeffs().iter().skip(1).all(|c| *c == 0.0);
        (rest && self.is_real()).then_some(s)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.as_real_scalar() {
            return write!(f, "{}", s);
        }
        if self.is_real() {
            write!(f, "({})", self.re)
        } else {
            write!(f, "(({}) + i ({}))", self.re, self.im)
        }
    }
}

/// `coeff * ln^log_power(r) * Fp r^exponent`, times `w = x/r` if `omega`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialPiece {
    pub coeff: Coeff,
    pub omega: bool,
    pub log_power: u8,
    pub exponent: f64,
}

/// Point-supported pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointKind {
    /// `(-Laplace)^l delta`.
    Laplacian(u32),
    /// `Dirac^{2l+1} delta`.
    DiracOdd(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointPiece {
    pub coeff: Coeff,
    pub kind: PointKind,
}

const EXPONENT_TOL: f64 = 1e-12;

/// A finite sum of radial and point-supported pieces.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryDistribution {
    ctx: AlgebraContext,
    pub radial: Vec<RadialPiece>,
    pub point: Vec<PointPiece>,
}

impl BoundaryDistribution {
    pub fn zero(ctx: AlgebraContext) -> Self {
        Self { ctx, radial: Vec::new(), point: Vec::new() }
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn point_piece(ctx: AlgebraContext, c: f64, kind: PointKind) -> Self {
        let mut d = Self::zero(ctx);
        d.point.push(PointPiece { coeff: Coeff::scalar(ctx, c), kind });
        d
    }

    pub fn delta(ctx: AlgebraContext) -> Self {
        Self::point_piece(ctx, 1.0, PointKind::Laplacian(0))
    }

    /// `c * ln^log(r) * Fp r^exponent [* w]` with a real scalar `c`.
    pub fn radial_piece(ctx: AlgebraContext, c: f64, omega: bool, log_power: u8, exponent: f64) -> Self {
        let mut d = Self::zero(ctx);
        d.radial.push(RadialPiece { coeff: Coeff::scalar(ctx, c), omega, log_power, exponent });
        d
    }

    /// Hilbert kernel `H = -(2/sigma_{m+1}) Pv w/r^m`.
    pub fn hilbert(ctx: AlgebraContext) -> Self {
        Self::radial_piece(ctx, -2.0 / sigma(ctx.m() + 1), true, 0, -(ctx.m() as f64))
    }

    pub fn is_zero(&self) -> bool {
        self.radial.is_empty() && self.point.is_empty()
    }

    fn map_coeffs(&self, f: impl Fn(&Coeff) -> Coeff) -> Self {
        Self {
            ctx: self.ctx,
            radial: self.radial.iter().map(|p| RadialPiece { coeff: f(&p.coeff), ..p.clone() }).collect(),
            point: self.point.iter().map(|p| PointPiece { coeff: f(&p.coeff), kind: p.kind }).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_coeffs(|c| c.scale(s))
    }

    pub fn scale_complex(&self, a: f64, b: f64) -> Self {
        self.map_coeffs(|c| c.scale_complex(a, b))
    }

    /// `x * self`.
    pub fn left_mul(&self, x: &Multivector) -> Self {
        self.map_coeffs(|c| c.left_mul(x))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ctx, other.ctx, "distributions from different algebras");
        let mut out = self.clone();
        out.radial.extend(other.radial.iter().cloned());
        out.point.extend(other.point.iter().cloned());
        out.normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Merges like pieces and drops zero coefficients; radial pieces are
    /// ordered by exponent, then `w`, then log power.
    pub fn normalized(&self) -> Self {
        let mut radial: Vec<RadialPiece> = Vec::new();
        for p in &self.radial {
            match radial.iter_mut().find(|q| {
                q.omega == p.omega && q.log_power == p.log_power && (q.exponent - p.exponent).abs() < EXPONENT_TOL
            }) {
                Some(q) => q.coeff = q.coeff.add(&p.coeff),
                None => radial.push(p.clone()),
            }
        }
        radial.retain(|p| !p.coeff.is_zero());
        radial.sort_by(|a, b| {
            a.exponent
                .partial_cmp(&b.exponent)
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(a.omega.cmp(&b.omega))
                .then(a.log_power.cmp(&b.log_power))
        });
        let mut point: BTreeMap<PointKind, Coeff> = BTreeMap::new();
        for p in &self.point {
            let e = point.entry(p.kind).or_insert_with(|| Coeff::zero(self.ctx));
            *e = e.add(&p.coeff);
        }
        let point = point
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(kind, coeff)| PointPiece { coeff, kind })
            .collect();
        Self { ctx: self.ctx, radial, point }
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.radial
            .iter()
            .map(|p| p.coeff.max_abs())
            .chain(self.point.iter().map(|p| p.coeff.max_abs()))
            .fold(0.0, f64::max)
    }

    /// Same pieces with coefficients equal to `tol` relative to the larger operand.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.ctx != other.ctx {
            return false;
        }
        let scale = self.max_coeff().max(other.max_coeff()).max(f64::MIN_POSITIVE);
        self.sub(other).max_coeff() <= tol * scale
    }

    /// Exact pairing `<T, phi>` as a complex Clifford number.
    pub fn pair_complex(&self, phi: &GaussPoly) -> Result<Coeff> {
        self.ctx.check(&phi.ctx)?;
        let m = self.ctx.m();
        let mut acc = Coeff::zero(self.ctx);
        for piece in &self.radial {
            let mut inner = Multivector::zero(self.ctx);
            for (alpha, c) in &phi.terms {
                let deg: u32 = alpha.iter().sum();
                let s = piece.exponent + deg as f64 + m as f64 - 1.0;
                if piece.omega {
                    let mut w = Multivector::zero(self.ctx);
                    let mut any = false;
                    let mut a = alpha.clone();
                    for j in 0..m {
                        a[j] += 1;
                        let mom = sphere_moment(&a);
                        a[j] -= 1;
                        if mom != 0.0 {
                            w.set(1 << (j + 1), mom);
                            any = true;
                        }
                    }
                    if any {
                        let rad = gauss_radial_moment(s, piece.log_power);
                        inner += &(&w * c).scale(rad);
                    }
                } else {
                    let mom = sphere_moment(alpha);
                    if mom != 0.0 {
                        inner.axpy(mom * gauss_radial_moment(s, piece.log_power), c);
                    }
                }
            }
            acc = acc.add(&piece.coeff.right_mul(&inner));
        }
        for piece in &self.point {
            let val = match piece.kind {
                PointKind::Laplacian(l) => phi.neg_laplacian_pow(l).value_at_origin(),
                PointKind::DiracOdd(l) => phi.dirac_pow(2 * l + 1).value_at_origin().scale(-1.0),
            };
            acc = acc.add(&piece.coeff.right_mul(&val));
        }
        Ok(acc)
    }

    /// Exact real pairing; fails if the result has an imaginary part.
    pub fn pair(&self, phi: &GaussPoly) -> Result<Multivector> {
        let c = self.pair_complex(phi)?;
        if c.im.max_abs() > 1e-12 * (1.0 + c.re.max_abs()) {
            return Err(unsupported("complex-valued pairing; use pair_complex"));
        }
        Ok(c.re)
    }

    /// `<-Dirac T, phi> = sum_j e_j <T, d_j phi>`.
    pub fn pair_neg_dirac(&self, phi: &GaussPoly) -> Result<Coeff> {
        let mut acc = Coeff::zero(self.ctx);
        for j in 0..self.ctx.m() {
            let e = Multivector::generator(self.ctx, j + 1);
            acc = acc.add(&self.pair_complex(&phi.partial(j))?.left_mul(&e));
        }
        Ok(acc)
    }
}

impl fmt::Display for BoundaryDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.normalized();
        if d.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            Ok(())
        };
        for p in &d.point {
            sep(f)?;
            let one = p.coeff.as_real_scalar() == Some(1.0);
            if !one {
                write!(f, "{} · ", p.coeff)?;
            }
            match p.kind {
                PointKind::Laplacian(0) => write!(f, "delta")?,
                PointKind::Laplacian(l) => write!(f, "(-Lap)^{} delta", l)?,
                PointKind::DiracOdd(0) => write!(f, "Dirac delta")?,
                PointKind::DiracOdd(l) => write!(f, "Dirac^{} delta", 2 * l + 1)?,
            }
        }
        for p in &d.radial {
            sep(f)?;
            write!(f, "{}", p.coeff)?;
            match p.log_power {
                0 => {}
                1 => write!(f, " · ln(r)")?,
                k => write!(f, " · ln^{}(r)", k)?,
            }
            write!(f, " · r^{}", p.exponent)?;
            if p.omega {
                write!(f, " · ω")?;
            }
        }
        Ok(())
    }
}

/// Test function `sum_alpha C_alpha x^alpha e^{-|x|^2}` with Clifford
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussPoly {
    ctx: AlgebraContext,
    terms: BTreeMap<Vec<u32>, Multivector>,
}

impl GaussPoly {
    pub fn zero(ctx: AlgebraContext) -> Self {
        Self { ctx, terms: BTreeMap::new() }
    }

    /// `e^{-|x|^2}`.
    pub fn gaussian(ctx: AlgebraContext) -> Self {
        Self::zero(ctx).with_term(&[], Multivector::scalar(ctx, 1.0))
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    /// Adds `c x^alpha e^{-r^2}`; `alpha` may be shorter than `m`.
    pub fn with_term(mut self, alpha: &[u32], c: Multivector) -> Self {
        assert!(alpha.len() <= self.ctx.m(), "monomial has more than m exponents");
        let mut a = vec![0u32; self.ctx.m()];
        a[..alpha.len()].copy_from_slice(alpha);
        self.push(a, &c);
        self
    }

    /// Adds `c x^alpha e^{-r^2}` with a scalar coefficient.
    pub fn with_scalar(self, alpha: &[u32], c: f64) -> Self {
        let ctx = self.ctx;
        self.with_term(alpha, Multivector::scalar(ctx, c))
    }

    fn push(&mut self, a: Vec<u32>, c: &Multivector) {
        let e = self.terms.entry(a).or_insert_with(|| Multivector::zero(c.context()));
        *e += c;
    }

    fn prune(mut self) -> Self {
        self.terms.retain(|_, c| c.max_abs() != 0.0);
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Multivector)> {
        self.terms.iter().map(|(a, c)| (a.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.max_abs() == 0.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { ctx: self.ctx, terms: self.terms.iter().map(|(a, c)| (a.clone(), c.scale(s))).collect() }
    }

    pub fn add(&self, other: &GaussPoly) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.push(a.clone(), c);
        }
        out.prune()
    }

    /// `x * phi` for a constant Clifford number `x`.
    pub fn left_mul(&self, x: &Multivector) -> Self {
        Self { ctx: self.ctx, terms: self.terms.iter().map(|(a, c)| (a.clone(), x * c)).collect() }.prune()
    }

    /// `d phi / d x_{j+1}`, with `j` zero-based.
    pub fn partial(&self, j: usize) -> Self {
        let mut out = Self::zero(self.ctx);
        for (a, c) in &self.terms {
            if a[j] > 0 {
                let mut b = a.clone();
                b[j] -= 1;
                out.push(b, &c.scale(a[j] as f64));
            }
            let mut b = a.clone();
            b[j] += 1;
            out.push(b, &c.scale(-2.0));
        }
        out.prune()
    }

    /// `x_{j+1} phi`.
    pub fn mul_coord(&self, j: usize) -> Self {
        let mut out = Self::zero(self.ctx);
        for (a, c) in &self.terms {
            let mut b = a.clone();
            b[j] += 1;
            out.push(b, c);
        }
        out
    }

    /// `x phi` with the vector variable on the left.
    pub fn mul_xvec(&self) -> Self {
        let mut out = Self::zero(self.ctx);
        for j in 0..self.ctx.m() {
            let e = Multivector::generator(self.ctx, j + 1);
            out = out.add(&self.mul_coord(j).left_mul(&e));
        }
        out
    }

    /// Left Dirac operator `sum_j e_j d_j phi`.
    pub fn dirac(&self) -> Self {
        let mut out = Self::zero(self.ctx);
        for j in 0..self.ctx.m() {
            let e = Multivector::generator(self.ctx, j + 1);
            out = out.add(&self.partial(j).left_mul(&e));
        }
        out
    }

    pub fn dirac_pow(&self, k: u32) -> Self {
        (0..k).fold(self.clone(), |p, _| p.dirac())
    }

    pub fn neg_laplacian(&self) -> Self {
        let mut out = Self::zero(self.ctx);
        for j in 0..self.ctx.m() {
            out = out.add(&self.partial(j).partial(j).scale(-1.0));
        }
        out
    }

    pub fn neg_laplacian_pow(&self, l: u32) -> Self {
        (0..l).fold(self.clone(), |p, _| p.neg_laplacian())
    }

    pub fn value_at_origin(&self) -> Multivector {
        let zero = vec![0u32; self.ctx.m()];
        self.terms.get(&zero).cloned().unwrap_or_else(|| Multivector::zero(self.ctx))
    }

    /// Polynomial part `sum C_alpha x^alpha` at `x` (without the Gaussian).
    pub fn poly_at(&self, x: &[f64]) -> Multivector {
        let mut out = Multivector::zero(self.ctx);
        for (a, c) in &self.terms {
            let mono: f64 = a.iter().zip(x).map(|(&k, &xi)| libm::pow(xi, k as f64)).product();
            out.axpy(mono, c);
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> Multivector {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        self.poly_at(x).scale(libm::exp(-r2))
    }

    /// The fixed battery of test functions used by the checks:
    /// `(1 + x1) G`, `(1/2 - x2 + x1^2) G`, `(e1 + e2 x2 + e0 x1 x2) G`,
    /// `(x1 - 0.3 x1^3 + x1 x2 + e12 (1 + x2)) G`.
    pub fn battery(ctx: AlgebraContext) -> Vec<(String, GaussPoly)> {
        let e0 = Multivector::generator(ctx, 0);
        let e1 = Multivector::generator(ctx, 1);
        let e2 = Multivector::generator(ctx, 2);
        let e12 = &e1 * &e2;
        let phi1 = Self::zero(ctx).with_scalar(&[], 1.0).with_scalar(&[1], 1.0);
        let phi2 = Self::zero(ctx).with_scalar(&[], 0.5).with_scalar(&[0, 1], -1.0).with_scalar(&[2], 1.0);
        let phi3 = Self::zero(ctx).with_term(&[], e1).with_term(&[0, 1], e2).with_term(&[1, 1], e0);
        let phi4 = Self::zero(ctx)
            .with_scalar(&[1], 1.0)
            .with_scalar(&[3], -0.3)
            .with_scalar(&[1, 1], 1.0)
            .with_term(&[], e12.clone())
            .with_term(&[0, 1], e12);
        vec![
            ("phi1".into(), phi1),
            ("phi2".into(), phi2),
            ("phi3".into(), phi3),
            ("phi4".into(), phi4),
        ]
    }
}

/// `(-1)^n` as a float.
#[inline]
fn parity(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn near_int(x: f64) -> Option<i64> {
    let n = libm::round(x);
    ((x - n).abs() < 1e-12).then_some(n as i64)
}

/// Normalized `T*_lambda` or `U*_lambda`.
pub fn make_normalized(ctx: AlgebraContext, family: Family, lambda: f64) -> BoundaryDistribution {
    let m = ctx.m() as f64;
    match family {
        Family::T => match gamma_pole((lambda + m) / 2.0) {
            Some(l) => {
                let c = libm::pow(PI, m / 2.0 - l as f64) / (libm::pow(4.0, l as f64) * gamma(m / 2.0 + l as f64));
                BoundaryDistribution::point_piece(ctx, c, PointKind::Laplacian(l))
            }
            None => {
                let z = (lambda + m) / 2.0;
                BoundaryDistribution::radial_piece(ctx, libm::pow(PI, z) / gamma(z), false, 0, lambda)
            }
        },
        Family::U => match gamma_pole((lambda + m + 1.0) / 2.0) {
            Some(l) => {
                let c = -libm::pow(PI, m / 2.0 - l as f64)
                    / (libm::pow(2.0, 2.0 * l as f64 + 1.0) * gamma(m / 2.0 + l as f64 + 1.0));
                BoundaryDistribution::point_piece(ctx, c, PointKind::DiracOdd(l))
            }
            None => {
                let z = (lambda + m + 1.0) / 2.0;
                BoundaryDistribution::radial_piece(ctx, libm::pow(PI, z) / gamma(z), true, 0, lambda)
            }
        },
    }
}

/// Constants `p_n`, `q_n` of the log-type fundamental solutions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PqConstants {
    pub n: u32,
    pub p: f64,
    pub q: f64,
}

pub fn pq_constants(m: usize, n: u32) -> PqConstants {
    let mf = m as f64;
    let mut p = -1.0 / (libm::pow(2.0, mf - 1.0) * libm::pow(PI, mf));
    let mut q = 0.0;
    for i in 0..n {
        if i % 2 == 0 {
            // 2j -> 2j+1
            let j2 = i as f64;
            q = -(q - p / (mf + j2)) / (2.0 * PI);
            p = -p / (2.0 * PI);
        } else {
            // 2j+1 -> 2j+2
            let k = i as f64 + 1.0;
            q = (q - p / k) / k;
            p /= k;
        }
    }
    PqConstants { n, p, q }
}

/// `(p_n ln r + q_n) T*_n` for even `n`, `(p_n ln r + q_n) U*_n` for odd `n`:
/// the log-type kernel `E_{m+n}` (even `m`) or `F_{m+n}` (odd `m`).
pub fn log_kernel(ctx: AlgebraContext, n: u32) -> BoundaryDistribution {
    let PqConstants { p, q, .. } = pq_constants(ctx.m(), n);
    let family = if n % 2 == 0 { Family::T } else { Family::U };
    let base = make_normalized(ctx, family, n as f64);
    let piece = &base.radial[0];
    let c = piece.coeff.as_real_scalar().expect("real normalization");
    let mut d = BoundaryDistribution::zero(ctx);
    for (coef, log) in [(p, 1u8), (q, 0u8)] {
        d.radial.push(RadialPiece {
            coeff: Coeff::scalar(ctx, coef * c),
            omega: piece.omega,
            log_power: log,
            exponent: n as f64,
        });
    }
    d.normalized()
}

/// `cos(pi mu), sin(pi mu)` with exact values at integers.
fn unit_phase(mu: f64) -> (f64, f64) {
    match near_int(mu) {
        Some(n) => (parity(n), 0.0),
        None => (libm::cos(PI * mu), libm::sin(PI * mu)),
    }
}

/// `sum_i (a_i + i b_i) * 2^mu Gamma(g_i) / pi^{e_i} * F_i*_{-m-mu}`, skipping
/// terms whose phase factor vanishes.
fn two_family_kernel(ctx: AlgebraContext, mu: f64, t_phase: (f64, f64), u_phase: (f64, f64)) -> BoundaryDistribution {
    let m = ctx.m() as f64;
    let lambda = -m - mu;
    let mut out = BoundaryDistribution::zero(ctx);
    let two_mu = libm::pow(2.0, mu);
    if t_phase != (0.0, 0.0) {
        let c = two_mu * gamma((m + mu) / 2.0) / libm::pow(PI, (m - mu) / 2.0);
        let t = make_normalized(ctx, Family::T, lambda).scale(c).scale_complex(t_phase.0, t_phase.1);
        out = out.add(&t);
    }
    if u_phase != (0.0, 0.0) {
        let c = two_mu * gamma((m + mu + 1.0) / 2.0) / libm::pow(PI, (m - mu + 1.0) / 2.0);
        let u = make_normalized(ctx, Family::U, lambda).scale(c).scale_complex(u_phase.0, u_phase.1);
        out = out.add(&u);
    }
    out
}

/// Kernel of `Dirac^mu` for real `mu`; `E_{m+n}` at the exceptional powers
/// `mu = -m-n` in even dimension.
pub fn dirac_power_kernel(ctx: AlgebraContext, mu: f64) -> BoundaryDistribution {
    let m = ctx.m() as i64;
    if let Some(k) = near_int(mu) {
        if m % 2 == 0 && -k >= m {
            return log_kernel(ctx, (-k - m) as u32);
        }
    }
    let (c, s) = unit_phase(mu);
    // (1 + e^{i pi mu})/2 on T*, -(1 - e^{i pi mu})/2 on U*
    two_family_kernel(ctx, mu, ((1.0 + c) / 2.0, s / 2.0), (-(1.0 - c) / 2.0, s / 2.0))
}

/// Kernel of `Dirac^mu H` for real `mu`; `F_{m+n}` at the exceptional powers
/// `mu = -m-n` in odd dimension.
pub fn hilbert_power_kernel(ctx: AlgebraContext, mu: f64) -> BoundaryDistribution {
    let m = ctx.m() as i64;
    if let Some(k) = near_int(mu) {
        if m % 2 == 1 && -k >= m {
            return log_kernel(ctx, (-k - m) as u32);
        }
    }
    let (c, s) = unit_phase(mu);
    // (1 - e^{i pi mu})/2 on T*, -(1 + e^{i pi mu})/2 on U*
    two_family_kernel(ctx, mu, ((1.0 - c) / 2.0, -s / 2.0), (-(1.0 + c) / 2.0, -s / 2.0))
}

/// Whether `a_i` (`i >= 0`) is one of the log-type exceptional values.
pub fn a_is_exceptional(m: usize, i: i32) -> bool {
    let m = m as i32;
    i >= m - 1 && (i - (m - 1)).rem_euclid(2) == 0
}

/// Whether `b_i` (`i >= 0`) is one of the log-type exceptional values.
pub fn b_is_exceptional(m: usize, i: i32) -> bool {
    let m = m as i32;
    i >= m && (i - m).rem_euclid(2) == 0
}

/// Boundary value `a_k^side`, `b_k^side` or `c_k^side` of the potential chain.
pub fn boundary_value(ctx: AlgebraContext, series: Series, k: i32, side: Side) -> BoundaryDistribution {
    match series {
        Series::A => a_value(ctx, k, side),
        Series::B => b_value(ctx, k, side),
        Series::C => {
            let e0bar = Multivector::generator(ctx, 0).scale(-1.0);
            a_value(ctx, k, side).scale(0.5).add(&b_value(ctx, k, side).left_mul(&e0bar).scale(0.5))
        }
    }
}

fn side_parity(m: usize, side: Side) -> f64 {
    match side {
        Side::Plus => 1.0,
        Side::Minus => parity(m as i64),
    }
}

fn a_value(ctx: AlgebraContext, k: i32, side: Side) -> BoundaryDistribution {
    let m = ctx.m();
    let mf = m as f64;
    if k == -1 {
        return BoundaryDistribution::delta(ctx).scale(side.sign());
    }
    if k <= -2 {
        let kk = -k;
        let l = (kk / 2) as u32;
        if kk % 2 == 0 {
            let c = parity(l as i64 - 1) * libm::pow(2.0, l as f64 - 1.0) * double_factorial(2 * l as i64 - 1)
                * gamma((mf + 2.0 * l as f64 - 1.0) / 2.0)
                / libm::pow(PI, (mf + 1.0) / 2.0);
            return BoundaryDistribution::radial_piece(ctx, c, false, 0, -(mf + 2.0 * l as f64 - 1.0));
        }
        return BoundaryDistribution::point_piece(ctx, side.sign(), PointKind::Laplacian(l));
    }
    if a_is_exceptional(m, k) {
        let d = log_kernel(ctx, (k + 1 - m as i32) as u32);
        return if m % 2 == 0 { d } else { d.neg() };
    }
    if k % 2 == 0 {
        let kk = (k / 2) as f64;
        let c = -gamma((mf - 2.0 * kk - 1.0) / 2.0)
            / (libm::pow(2.0, 2.0 * kk + 1.0) * libm::pow(PI, (mf + 2.0 * kk + 1.0) / 2.0));
        make_normalized(ctx, Family::T, -mf + 2.0 * kk + 1.0).scale(c)
    } else {
        let kk = ((k + 1) / 2) as f64;
        let c = gamma((mf - 2.0 * kk) / 2.0) / (libm::pow(2.0, 2.0 * kk) * libm::pow(PI, (mf + 2.0 * kk) / 2.0));
        make_normalized(ctx, Family::T, -mf + 2.0 * kk).scale(c * side_parity(m, side))
    }
}

fn b_value(ctx: AlgebraContext, k: i32, side: Side) -> BoundaryDistribution {
    let m = ctx.m();
    let mf = m as f64;
    if k == -1 {
        return BoundaryDistribution::hilbert(ctx);
    }
    if k <= -2 {
        let kk = -k;
        let l = (kk / 2) as u32;
        if kk % 2 == 0 {
            return BoundaryDistribution::point_piece(ctx, -side.sign(), PointKind::DiracOdd(l - 1));
        }
        let c = parity(l as i64 - 1) * libm::pow(2.0, l as f64) * double_factorial(2 * l as i64 - 1)
            * gamma((mf + 2.0 * l as f64 + 1.0) / 2.0)
            / libm::pow(PI, (mf + 1.0) / 2.0);
        return BoundaryDistribution::radial_piece(ctx, c, true, 0, -(mf + 2.0 * l as f64));
    }
    if b_is_exceptional(m, k) {
        let d = log_kernel(ctx, (k + 1 - m as i32) as u32);
        return if m % 2 == 0 { d.neg() } else { d };
    }
    if k % 2 == 0 {
        let kk = (k / 2) as f64;
        let c = gamma((mf - 2.0 * kk) / 2.0)
            / (libm::pow(2.0, 2.0 * kk + 1.0) * libm::pow(PI, (mf + 2.0 * kk + 2.0) / 2.0));
        make_normalized(ctx, Family::U, -mf + 2.0 * kk + 1.0).scale(c * side_parity(m, side))
    } else {
        let kk = ((k + 1) / 2) as f64;
        let c = -gamma((mf - 2.0 * kk + 1.0) / 2.0)
            / (libm::pow(2.0, 2.0 * kk) * libm::pow(PI, (mf + 2.0 * kk + 1.0) / 2.0));
        make_normalized(ctx, Family::U, -mf + 2.0 * kk).scale(c)
    }
}

/// One identity of the lemma on a test function.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaPairing {
    /// `"a"` for `-Dirac a_k = b_{k-1}`, `"b"` for `-Dirac b_k = a_{k-1}`.
    pub identity: &'static str,
    pub side: Side,
    pub phi: String,
    pub lhs: Multivector,
    pub rhs: Multivector,
    pub error: f64,
}

/// Table-level consistency of the Hilbert-transform identities.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaTableCheck {
    /// `a_k^+ = sign Dirac^{-(k+1)} X` with `X` in `{delta, H}`.
    pub a_kernel: &'static str,
    pub sign: f64,
    /// `H[a_k^+] = b_k^+` and `H[b_k^+] = a_k^+`.
    pub plus_consistent: bool,
    /// Product of the side factors of `a_k^-` and `b_k^-` equals `(-1)^m`.
    pub minus_consistent: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaReport {
    pub m: usize,
    pub k: i32,
    pub pairings: Vec<LemmaPairing>,
    pub table: LemmaTableCheck,
}

impl LemmaReport {
    pub fn max_error(&self) -> f64 {
        self.pairings.iter().map(|p| p.error).fold(0.0, f64::max)
    }
}

/// Checks the lemma for `k >= 1`: parts (i)-(ii) by exact pairing against
/// the standard battery plus `x e^{-r^2}`, parts (iii)-(iv) on the tables.
pub fn lemma_check(ctx: AlgebraContext, k: i32) -> Result<LemmaReport> {
    if k < 1 {
        return Err(Error::Config(format!("lemma needs k >= 1, got {k}")));
    }
    let m = ctx.m();
    let mut phis = GaussPoly::battery(ctx);
    phis.push(("gauss".into(), GaussPoly::gaussian(ctx)));
    phis.push(("x_gauss".into(), GaussPoly::gaussian(ctx).mul_xvec()));
    let mut pairings = Vec::new();
    for side in [Side::Plus, Side::Minus] {
        for (identity, from, to) in [("a", Series::A, Series::B), ("b", Series::B, Series::A)] {
            let lhs_d = boundary_value(ctx, from, k, side);
            let rhs_d = boundary_value(ctx, to, k - 1, side);
            for (name, phi) in &phis {
                let lhs = lhs_d.pair_neg_dirac(phi)?;
                let rhs = rhs_d.pair_complex(phi)?;
                let error = lhs.sub(&rhs).max_abs();
                pairings.push(LemmaPairing {
                    identity,
                    side,
                    phi: name.clone(),
                    lhs: lhs.re,
                    rhs: rhs.re,
                    error,
                });
            }
        }
    }
    Ok(LemmaReport { m, k, pairings, table: lemma_table(ctx, k) })
}

fn lemma_table(ctx: AlgebraContext, k: i32) -> LemmaTableCheck {
    let m = ctx.m();
    let mu = -(k as f64 + 1.0);
    let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
    let a_plus = boundary_value(ctx, Series::A, k, Side::Plus);
    let b_plus = boundary_value(ctx, Series::B, k, Side::Plus);
    let delta_k = dirac_power_kernel(ctx, mu).scale(sign);
    let hilbert_k = hilbert_power_kernel(ctx, mu).scale(sign);
    const TOL: f64 = 1e-12;
    let (a_kernel, plus_consistent) = if a_plus.approx_eq(&delta_k, TOL) {
        ("delta", b_plus.approx_eq(&hilbert_k, TOL))
    } else if a_plus.approx_eq(&hilbert_k, TOL) {
        ("H", b_plus.approx_eq(&delta_k, TOL))
    } else {
        ("unmatched", false)
    };
    let factor = |series| {
        let plus = boundary_value(ctx, series, k, Side::Plus);
        let minus = boundary_value(ctx, series, k, Side::Minus);
        if minus.approx_eq(&plus, TOL) {
            Some(1.0)
        } else if minus.approx_eq(&plus.neg(), TOL) {
            Some(-1.0)
        } else {
            None
        }
    };
    let minus_consistent = match (factor(Series::A), factor(Series::B)) {
        (Some(fa), Some(fb)) => fa * fb == parity(m as i64),
        _ => false,
    };
    LemmaTableCheck { a_kernel, sign, plus_consistent, minus_consistent }
}
