//! Exact calculus on sums of terms `c * E * x0^a (r^2)^s |x|^{-q} * x^eps`
//! with `E` in `{1, e0}`, `eps` in `{0, 1}` and `x` the boundary vector.
//!
//! The Cauchy kernel, the Green function and every downstream potential
//! live in this class, which is closed under `d/dx0` and the boundary
//! Dirac operator. Coefficients are kept as small integers or dyadic
//! rationals next to a common floating prefactor, so cancellations are
//! exact in double precision.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::clifford::{AlgebraContext, AxialValue, Multivector, Point};
use crate::error::{domain, Result};
use crate::special::sigma;

/// Shape of one term; the coefficient is stored separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    /// Left factor `e0` present.
    pub e0: bool,
    /// Exponent of `x0`.
    pub a: u32,
    /// Exponent of `r^2`.
    pub s: u32,
    /// `|x|^{-q}`.
    pub q: u32,
    /// Right factor `x` present.
    pub vec: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalTerm {
    pub c: f64,
    pub key: TermKey,
}

/// A canonical sum of terms times a common `scale`.
#[derive(Clone, Debug, PartialEq)]
pub struct TermSum {
    ctx: AlgebraContext,
    scale: f64,
    terms: BTreeMap<TermKey, f64>,
}

const ZERO_TOL: f64 = 1e-14;

impl TermSum {
    pub fn zero(ctx: AlgebraContext) -> Self {
        Self { ctx, scale: 1.0, terms: BTreeMap::new() }
    }

    pub fn with_scale(ctx: AlgebraContext, scale: f64) -> Self {
        Self { ctx, scale, terms: BTreeMap::new() }
    }

    pub fn from_terms(ctx: AlgebraContext, scale: f64, terms: &[CanonicalTerm]) -> Self {
        let mut out = Self::with_scale(ctx, scale);
        for t in terms {
            out.push(t.c, t.key);
        }
        out.prune();
        out
    }

    /// The constant function `c`.
    pub fn constant(ctx: AlgebraContext, c: f64) -> Self {
        Self::from_terms(
            ctx,
            1.0,
            &[CanonicalTerm { c, key: TermKey { e0: false, a: 0, s: 0, q: 0, vec: false } }],
        )
    }

    /// `C_{-1} = (1/sigma_{m+1}) (x0 + e0 x) / |x|^{m+1}`.
    pub fn cauchy_kernel(ctx: AlgebraContext) -> Self {
        let q = ctx.m() as u32 + 1;
        Self::from_terms(
            ctx,
            1.0 / sigma(ctx.m() + 1),
            &[
                CanonicalTerm { c: 1.0, key: TermKey { e0: false, a: 1, s: 0, q, vec: false } },
                CanonicalTerm { c: 1.0, key: TermKey { e0: true, a: 0, s: 0, q, vec: true } },
            ],
        )
    }

    /// Scalar Green function `A_0 = -(2/((m-1) sigma_{m+1})) |x|^{1-m}`.
    pub fn green_scalar(ctx: AlgebraContext) -> Self {
        let m = ctx.m();
        Self::from_terms(
            ctx,
            -2.0 / ((m as f64 - 1.0) * sigma(m + 1)),
            &[CanonicalTerm {
                c: 1.0,
                key: TermKey { e0: false, a: 0, s: 0, q: m as u32 - 1, vec: false },
            }],
        )
    }

    #[inline]
    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms with the common scale folded into the coefficients.
    pub fn terms(&self) -> impl Iterator<Item = CanonicalTerm> + '_ {
        self.terms.iter().map(move |(k, c)| CanonicalTerm { c: c * self.scale, key: *k })
    }

    pub fn scaled(&self, k: f64) -> Self {
        let mut out = self.clone();
        out.scale *= k;
        out
    }

    /// Sum of two term sums; coefficients are rescaled to `self`'s scale.
    pub fn add(&self, other: &TermSum) -> Self {
        assert_eq!(self.ctx, other.ctx, "term sums from different algebras");
        let mut out = self.clone();
        let ratio = other.scale / self.scale;
        for (k, c) in &other.terms {
            out.push(c * ratio, *k);
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &TermSum) -> Self {
        self.add(&other.scaled(-1.0))
    }

    /// Inserts a term, rewriting `x0^2 |x|^{-q} = |x|^{2-q} - r^2 |x|^{-q}`
    /// until `a < 2` or `q < 2`.
    fn push(&mut self, c: f64, key: TermKey) {
        if c == 0.0 {
            return;
        }
        if key.a >= 2 && key.q >= 2 {
            self.push(c, TermKey { a: key.a - 2, q: key.q - 2, ..key });
            self.push(-c, TermKey { a: key.a - 2, s: key.s + 1, ..key });
            return;
        }
        *self.terms.entry(key).or_insert(0.0) += c;
    }

    fn prune(&mut self) {
        let big = self.terms.values().fold(0.0f64, |a, c| a.max(c.abs()));
        let cut = ZERO_TOL * big.max(1.0);
        self.terms.retain(|_, c| c.abs() > cut);
    }

    fn map_terms(&self, mut f: impl FnMut(f64, TermKey, &mut TermSum)) -> Self {
        let mut out = Self::with_scale(self.ctx, self.scale);
        for (k, c) in &self.terms {
            f(*c, *k, &mut out);
        }
        out.prune();
        out
    }

    /// Exact `d/dx0`.
    pub fn d_x0(&self) -> Self {
        self.map_terms(|c, k, out| {
            if k.a > 0 {
                out.push(c * k.a as f64, TermKey { a: k.a - 1, ..k });
            }
            if k.q > 0 {
                out.push(-c * k.q as f64, TermKey { a: k.a + 1, q: k.q + 2, ..k });
            }
        })
    }

    /// Exact left action of the boundary Dirac operator `sum_j e_j d/dx_j`.
    pub fn dirac_vec(&self) -> Self {
        let m = self.ctx.m() as f64;
        self.map_terms(|c, k, out| {
            // d(e0 X) = -e0 dX since e_j anticommutes with e0
            let c = if k.e0 { -c } else { c };
            // d f = h x with h = 2s f/r^2 - q f/|x|^2 for f = x0^a (r^2)^s |x|^{-q}
            let mut h: [(f64, u32, u32); 2] = [(0.0, 0, 0); 2];
            if k.s > 0 {
                h[0] = (2.0 * k.s as f64, k.s - 1, k.q);
            }
            if k.q > 0 {
                h[1] = (-(k.q as f64), k.s, k.q + 2);
            }
            if !k.vec {
                for &(hc, s, q) in &h {
                    if hc != 0.0 {
                        out.push(c * hc, TermKey { s, q, vec: true, ..k });
                    }
                }
            } else {
                // d(f x) = (df) x + f (dx) = h x^2 - m f = -r^2 h - m f
                for &(hc, s, q) in &h {
                    if hc != 0.0 {
                        out.push(-c * hc, TermKey { s: s + 1, q, vec: false, ..k });
                    }
                }
                out.push(-c * m, TermKey { vec: false, ..k });
            }
        })
    }

    /// `e0 * self`.
    pub fn left_mul_e0(&self) -> Self {
        self.map_terms(|c, k, out| {
            if k.e0 {
                out.push(-c, TermKey { e0: false, ..k });
            } else {
                out.push(c, TermKey { e0: true, ..k });
            }
        })
    }

    /// `D = (d/dx0 - e0 d)/2` or, when `conjugated`, `Dbar = (d/dx0 + e0 d)/2`.
    pub fn apply_cr(&self, conjugated: bool) -> Self {
        let dv = self.dirac_vec().left_mul_e0();
        let d0 = self.d_x0();
        let sum = if conjugated { d0.add(&dv) } else { d0.sub(&dv) };
        sum.scaled(0.5)
    }

    /// Value at a point as an axial value `s + s0 e0 + (v + v0 e0) w`.
    pub fn eval_axial(&self, x0: f64, r: f64) -> Result<AxialValue> {
        let n2 = x0 * x0 + r * r;
        if n2 == 0.0 {
            return Err(domain("term sums are singular at the origin"));
        }
        let inv = 1.0 / libm::sqrt(n2);
        let r2 = r * r;
        let mut out = AxialValue::default();
        for (k, c) in &self.terms {
            let mut val = c * pow_u(x0, k.a) * pow_u(r2, k.s) * pow_u(inv, k.q);
            if k.vec {
                val *= r;
                if k.e0 {
                    out.v0 += val;
                } else {
                    out.v += val;
                }
            } else if k.e0 {
                out.s0 += val;
            } else {
                out.s += val;
            }
        }
        Ok(out.scale(self.scale))
    }

    pub fn evaluate(&self, p: &Point) -> Result<Multivector> {
        p.check_dim(&self.ctx)?;
        let r = p.r();
        let val = self.eval_axial(p.x0, r)?;
        Ok(val.to_multivector(self.ctx, &unit_direction(&p.xvec, r)))
    }
}

#[inline]
fn pow_u(x: f64, n: u32) -> f64 {
    libm::pow(x, n as f64)
}

/// `x / r`, or zero when `r = 0`.
pub(crate) fn unit_direction(xvec: &[f64], r: f64) -> Vec<f64> {
    if r == 0.0 {
        alloc::vec![0.0; xvec.len()]
    } else {
        xvec.iter().map(|x| x / r).collect()
    }
}

impl fmt::Display for TermSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{} * [", self.scale)?;
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", c)?;
            if k.e0 {
                write!(f, " e0")?;
            }
            if k.a > 0 {
                write!(f, " x0^{}", k.a)?;
            }
            if k.s > 0 {
                write!(f, " r^{}", 2 * k.s)?;
            }
            if k.q > 0 {
                write!(f, " |x|^-{}", k.q)?;
            }
            if k.vec {
                write!(f, " x")?;
            }
        }
        write!(f, "]")
    }
}

/// The downstream chain `C_{-1}, C_{-2} = Dbar C_{-1}, ...` up to a fixed depth.
#[derive(Clone, Debug)]
pub struct DownstreamChain {
    chain: Vec<TermSum>,
}

impl DownstreamChain {
    pub const DEFAULT_DEPTH: usize = 8;

    pub fn new(ctx: AlgebraContext, depth: usize) -> Self {
        let mut chain = Vec::with_capacity(depth);
        let mut cur = TermSum::cauchy_kernel(ctx);
        for _ in 0..depth {
            let next = cur.apply_cr(true);
            chain.push(cur);
            cur = next;
        }
        Self { chain }
    }

    pub fn depth(&self) -> usize {
        self.chain.len()
    }

    /// `C_{-k}` for `1 <= k <= depth`.
    pub fn get(&self, k: usize) -> Option<&TermSum> {
        k.checked_sub(1).and_then(|i| self.chain.get(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(m: usize) -> AlgebraContext {
        AlgebraContext::new(m).unwrap()
    }

    fn key(e0: bool, a: u32, s: u32, q: u32, vec: bool) -> TermKey {
        TermKey { e0, a, s, q, vec }
    }

    #[test]
    fn d_x0_power_rule() {
        let c = ctx(2);
        let f = TermSum::from_terms(c, 1.0, &[CanonicalTerm { c: 1.0, key: key(false, 1, 0, 3, false) }]);
        // x0 |x|^-3 -> |x|^-3 - 3 x0^2 |x|^-5 = |x|^-3 - 3 (|x|^-3 - r^2 |x|^-5)
        let expect = TermSum::from_terms(
            c,
            1.0,
            &[
                CanonicalTerm { c: -2.0, key: key(false, 0, 0, 3, false) },
                CanonicalTerm { c: 3.0, key: key(false, 0, 1, 5, false) },
            ],
        );
        assert_eq!(f.d_x0(), expect);
        assert!(TermSum::constant(c, 1.0).d_x0().is_empty());
    }

    #[test]
    fn dirac_vec_basic_rules() {
        let c = ctx(3);
        let r2 = TermSum::from_terms(c, 1.0, &[CanonicalTerm { c: 1.0, key: key(false, 0, 1, 0, false) }]);
        let expect = TermSum::from_terms(c, 1.0, &[CanonicalTerm { c: 2.0, key: key(false, 0, 0, 0, true) }]);
        assert_eq!(r2.dirac_vec(), expect);
        let x = TermSum::from_terms(c, 1.0, &[CanonicalTerm { c: 1.0, key: key(false, 0, 0, 0, true) }]);
        assert_eq!(x.dirac_vec(), TermSum::constant(c, -3.0));
    }

    #[test]
    fn cauchy_kernel_is_monogenic_exactly() {
        for m in 2..=6 {
            let k = TermSum::cauchy_kernel(ctx(m));
            assert!(k.apply_cr(false).is_empty(), "m = {m}");
        }
        assert!(TermSum::constant(ctx(2), 1.0).apply_cr(true).is_empty());
    }

    #[test]
    fn green_function_derivatives() {
        for m in 2..=6 {
            let c = ctx(m);
            let half_a0 = TermSum::green_scalar(c).scaled(0.5);
            let cauchy = TermSum::cauchy_kernel(c);
            // Dbar (A_0/2) = C_{-1}/2; the B_0 half supplies the rest of C_{-1}
            let diff = half_a0.apply_cr(true).sub(&cauchy.scaled(0.5));
            assert!(diff.is_empty(), "m = {m}: {diff}");
            // D (A_0/2) = (1/2sigma)(x0 - e0 x)|x|^{-m-1}
            let other = TermSum::from_terms(
                c,
                0.5 / sigma(m + 1),
                &[
                    CanonicalTerm { c: 1.0, key: key(false, 1, 0, m as u32 + 1, false) },
                    CanonicalTerm { c: -1.0, key: key(true, 0, 0, m as u32 + 1, true) },
                ],
            );
            assert!(half_a0.apply_cr(false).sub(&other).is_empty(), "m = {m}");
        }
    }

    #[test]
    fn evaluate_cauchy_kernel_examples() {
        let c = ctx(2);
        let k = TermSum::cauchy_kernel(c);
        let pi = core::f64::consts::PI;
        let v = k.evaluate(&Point::new(1.0, alloc::vec![0.0, 0.0])).unwrap();
        assert!((v.scalar_part() - 1.0 / (4.0 * pi)).abs() < 1e-16);
        let v = k.evaluate(&Point::new(2.0, alloc::vec![0.0, 0.0])).unwrap();
        assert!((v.scalar_part() - 1.0 / (16.0 * pi)).abs() < 1e-16);
        let v = k.evaluate(&Point::new(0.0, alloc::vec![0.6, 0.8])).unwrap();
        // (1/4pi) e0 x
        assert!((v.get(0b011) - 0.6 / (4.0 * pi)).abs() < 1e-16);
        assert!((v.get(0b101) - 0.8 / (4.0 * pi)).abs() < 1e-16);
        assert!(k.evaluate(&Point::new(0.0, alloc::vec![0.0, 0.0])).is_err());
    }
}
