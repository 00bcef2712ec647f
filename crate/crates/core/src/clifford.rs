//! The real Clifford algebra `R_{0,m+1}` with generators `e0, e1, ..., em`,
//! all squaring to `-1`.
//!
//! Blades are stored as bitmasks: bit `j` set means `e_j` is a factor, so
//! `e0` is bit 0 and the boundary generators `e1..em` are bits `1..=m`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Dimension data shared by every multivector of one algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraContext {
    m: usize,
}

impl AlgebraContext {
    pub const MIN_DIM: usize = 2;
    pub const MAX_DIM: usize = 12;

    pub fn new(m: usize) -> Result<Self> {
        if !(Self::MIN_DIM..=Self::MAX_DIM).contains(&m) {
            return Err(Error::Dimension(m));
        }
        Ok(Self { m })
    }

    /// Boundary dimension `m`.
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn generators(&self) -> usize {
        self.m + 1
    }

    #[inline]
    pub fn blade_count(&self) -> usize {
        1 << (self.m + 1)
    }

    /// Bitmask of the boundary generator `e_j`, `1 <= j <= m`.
    #[inline]
    pub fn boundary_blade(j: usize) -> usize {
        1 << j
    }

    pub fn check(&self, other: &AlgebraContext) -> Result<()> {
        if self.m != other.m {
            return Err(Error::ContextMismatch { left: self.m, right: other.m });
        }
        Ok(())
    }
}

/// Sign of `e_A e_B = sign * e_{A xor B}`.
#[inline]
pub fn blade_product_sign(a: usize, b: usize) -> f64 {
    let mut swaps = 0u32;
    let mut t = a >> 1;
    while t != 0 {
        swaps += (t & b).count_ones();
        t >>= 1;
    }
    swaps += (a & b).count_ones();
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[inline]
pub fn grade(blade: usize) -> u32 {
    blade.count_ones()
}

/// Label of a blade: `"1"`, `"e0"`, `"e13"`; indices above 9 are separated by dots.
pub fn blade_label(blade: usize) -> String {
    use core::fmt::Write;
    if blade == 0 {
        return String::from("1");
    }
    let wide = blade >> 10 != 0;
    let mut s = String::from("e");
    let mut first = true;
    for j in 0..usize::BITS as usize {
        if blade & (1 << j) != 0 {
            if wide && !first {
                s.push('.');
            }
            let _ = write!(s, "{}", j);
            first = false;
        }
    }
    s
}

/// A dense element of `R_{0,m+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector {
    ctx: AlgebraContext,
    coeffs: Vec<f64>,
}

impl Multivector {
    pub fn zero(ctx: AlgebraContext) -> Self {
        Self { ctx, coeffs: vec![0.0; ctx.blade_count()] }
    }

    pub fn scalar(ctx: AlgebraContext, s: f64) -> Self {
        Self::blade(ctx, 0, s)
    }

    /// `value * e_A` for the blade bitmask `A`.
    pub fn blade(ctx: AlgebraContext, mask: usize, value: f64) -> Self {
        let mut v = Self::zero(ctx);
        v.coeffs[mask] = value;
        v
    }

    /// The generator `e_j`, `0 <= j <= m`.
    pub fn generator(ctx: AlgebraContext, j: usize) -> Self {
        assert!(j <= ctx.m(), "generator index {j} out of range");
        Self::blade(ctx, 1 << j, 1.0)
    }

    pub fn from_coeffs(ctx: AlgebraContext, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != ctx.blade_count() {
            return Err(Error::Config(alloc::format!(
                "expected {} coefficients, got {}",
                ctx.blade_count(),
                coeffs.len()
            )));
        }
        Ok(Self { ctx, coeffs })
    }

    /// `x0 e0 + sum_j x_j e_j`.
    pub fn vector(ctx: AlgebraContext, x0: f64, xvec: &[f64]) -> Self {
        let mut v = Self::zero(ctx);
        v.coeffs[1] = x0;
        for (j, &x) in xvec.iter().enumerate() {
            v.coeffs[1 << (j + 1)] = x;
        }
        v
    }

    #[inline]
    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn get(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    #[inline]
    pub fn set(&mut self, mask: usize, value: f64) {
        self.coeffs[mask] = value;
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn grade_part(&self, k: u32) -> Self {
        let mut out = Self::zero(self.ctx);
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if grade(mask) == k {
                out.coeffs[mask] = c;
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.coeffs.iter().map(|c| c * c).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |a, c| a.max(c.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { ctx: self.ctx, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Adds `s * other` in place.
    pub fn axpy(&mut self, s: f64, other: &Multivector) {
        debug_assert_eq!(self.ctx, other.ctx);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }

    /// Main anti-involution: grade `k` picks up `(-1)^{k(k+1)/2}`.
    pub fn conjugate(&self) -> Self {
        let mut out = self.clone();
        for (mask, c) in out.coeffs.iter_mut().enumerate() {
            let k = grade(mask);
            if (k * (k + 1) / 2) % 2 == 1 {
                *c = -*c;
            }
        }
        out
    }

    pub fn geometric_product(&self, other: &Multivector) -> Result<Self> {
        self.ctx.check(&other.ctx)?;
        let mut out = Self::zero(self.ctx);
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in other.coeffs.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                out.coeffs[a ^ b] += blade_product_sign(a, b) * ca * cb;
            }
        }
        Ok(out)
    }

    /// `e_A * self` scaled by `s`.
    pub fn left_mul_blade(&self, mask: usize, s: f64) -> Self {
        let mut out = Self::zero(self.ctx);
        for (b, &cb) in self.coeffs.iter().enumerate() {
            if cb != 0.0 {
                out.coeffs[mask ^ b] += blade_product_sign(mask, b) * s * cb;
            }
        }
        out
    }

    /// `self * e_A` scaled by `s`.
    pub fn right_mul_blade(&self, mask: usize, s: f64) -> Self {
        let mut out = Self::zero(self.ctx);
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca != 0.0 {
                out.coeffs[a ^ mask] += blade_product_sign(a, mask) * s * ca;
            }
        }
        out
    }

    pub fn approx_eq(&self, other: &Multivector, tol: f64) -> bool {
        self.ctx == other.ctx
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| (a - b).abs() <= tol)
    }

    /// Nonzero blades in ascending bitmask order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0.0).map(|(i, c)| (i, *c))
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.terms() {
            if first {
                write!(f, "{}", c)?;
            } else if c < 0.0 {
                write!(f, " - {}", -c)?;
            } else {
                write!(f, " + {}", c)?;
            }
            if mask != 0 {
                write!(f, " {}", blade_label(mask))?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn same_ctx(a: &Multivector, b: &Multivector) {
    if a.ctx != b.ctx {
        panic!("algebra context mismatch: m = {} vs m = {}", a.ctx.m, b.ctx.m);
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        same_ctx(self, rhs);
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        same_ctx(self, rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        same_ctx(self, rhs);
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

/// Geometric product. Panics on a context mismatch; use
/// [`Multivector::geometric_product`] for the checked form.
impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        same_ctx(self, rhs);
        self.geometric_product(rhs).expect("contexts checked")
    }
}

/// A point `x = x0 e0 + x` of `R^{m+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub x0: f64,
    pub xvec: Vec<f64>,
}

impl Point {
    pub fn new(x0: f64, xvec: Vec<f64>) -> Self {
        Self { x0, xvec }
    }

    /// `r = |x|` of the boundary part.
    pub fn r(&self) -> f64 {
        libm::sqrt(self.xvec.iter().map(|x| x * x).sum())
    }

    pub fn norm(&self) -> f64 {
        libm::hypot(self.x0, self.r())
    }

    pub fn check_dim(&self, ctx: &AlgebraContext) -> Result<()> {
        if self.xvec.len() != ctx.m() {
            return Err(Error::PointDimension { expected: ctx.m(), got: self.xvec.len() });
        }
        Ok(())
    }
}

pub fn embed_point(ctx: AlgebraContext, p: &Point) -> Result<Multivector> {
    p.check_dim(&ctx)?;
    Ok(Multivector::vector(ctx, p.x0, &p.xvec))
}

/// A value `s + s0 e0 + (v + v0 e0) w` where `w = x/r` is the unit boundary
/// direction. Every potential of the chain is of this shape, and the shape
/// is closed under left multiplication by `e0`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AxialValue {
    pub s: f64,
    pub s0: f64,
    pub v: f64,
    pub v0: f64,
}

impl AxialValue {
    pub fn scale(self, k: f64) -> Self {
        Self { s: self.s * k, s0: self.s0 * k, v: self.v * k, v0: self.v0 * k }
    }

    pub fn add(self, o: Self) -> Self {
        Self { s: self.s + o.s, s0: self.s0 + o.s0, v: self.v + o.v, v0: self.v0 + o.v0 }
    }

    /// `e0 * self`, using `e0 e0 = -1`.
    pub fn left_mul_e0(self) -> Self {
        Self { s: -self.s0, s0: self.s, v: -self.v0, v0: self.v }
    }

    pub fn is_finite(&self) -> bool {
        self.s.is_finite() && self.s0.is_finite() && self.v.is_finite() && self.v0.is_finite()
    }

    /// Expands against the unit direction `w` (length `m`).
    pub fn to_multivector(self, ctx: AlgebraContext, w: &[f64]) -> Multivector {
        let mut out = Multivector::zero(ctx);
        out.coeffs[0] = self.s;
        out.coeffs[1] = self.s0;
        for (j, &wj) in w.iter().enumerate() {
            let b = 1 << (j + 1);
            out.coeffs[b] = self.v * wj;
            // e0 e_j is the blade 1|b with sign +1
            out.coeffs[1 | b] = self.v0 * wj;
        }
        out
    }
}
