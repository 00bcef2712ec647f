//! Pointwise evaluation of the potentials `A_k`, `B_k`, `C_k` in both
//! half-spaces, and their closed-form limits.
//!
//! Every potential has the axial shape `C = A/2 - (beta/2) e0 x` with
//! `B = beta x`, so evaluation works on the pair `(x0, r)` and expands to a
//! multivector only at the end.

use alloc::format;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::clifford::{AlgebraContext, AxialValue, Multivector, Point};
use crate::error::{domain, unsupported, Error, Result};
use crate::special::{profile_at_infinity, profile_pair, sigma};
use crate::terms::{unit_direction, DownstreamChain, TermSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    A,
    B,
    C,
}

/// Identifies `A_k`, `B_k` or `C_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PotentialId {
    pub component: Component,
    pub k: i32,
}

impl PotentialId {
    pub fn new(component: Component, k: i32) -> Self {
        Self { component, k }
    }

    pub fn c(k: i32) -> Self {
        Self::new(Component::C, k)
    }
}

impl fmt::Display for PotentialId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.component {
            Component::A => 'A',
            Component::B => 'B',
            Component::C => 'C',
        };
        write!(f, "{}:{}", c, self.k)
    }
}

impl FromStr for PotentialId {
    type Err = Error;

    /// Parses `"C:-2"`, `"A:1"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad potential id {s:?}, expected e.g. C:-2"));
        let (c, k) = s.split_once(':').ok_or_else(bad)?;
        let component = match c.trim() {
            "A" | "a" => Component::A,
            "B" | "b" => Component::B,
            "C" | "c" => Component::C,
            _ => return Err(bad()),
        };
        let k = k.trim().parse::<i32>().map_err(|_| bad())?;
        Ok(Self { component, k })
    }
}

/// Which half-space a limit is taken from.
pub use crate::distributions::Side;

/// Evaluator for the potential chain in a fixed dimension.
#[derive(Clone, Debug)]
pub struct Potentials {
    ctx: AlgebraContext,
    chain: DownstreamChain,
    sig: f64,
    sig_m: f64,
}

impl Potentials {
    pub fn new(ctx: AlgebraContext) -> Self {
        Self::with_depth(ctx, DownstreamChain::DEFAULT_DEPTH)
    }

    pub fn with_depth(ctx: AlgebraContext, depth: usize) -> Self {
        let m = ctx.m();
        Self { ctx, chain: DownstreamChain::new(ctx, depth), sig: sigma(m + 1), sig_m: sigma(m) }
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn depth(&self) -> usize {
        self.chain.depth()
    }

    /// `C_k` as an exact term sum, for `k <= -1`.
    pub fn downstream(&self, k: i32) -> Option<&TermSum> {
        if k > -1 {
            return None;
        }
        self.chain.get((-k) as usize)
    }

    /// Checks that `id` has an interior evaluator in this dimension.
    pub fn check_id(&self, id: PotentialId) -> Result<()> {
        let m = self.ctx.m();
        match id.k {
            k if k <= -1 => {
                if (-k) as usize > self.depth() {
                    return Err(unsupported(format!(
                        "chain depth is {}, {} is out of range",
                        self.depth(),
                        id
                    )));
                }
            }
            0 | 1 => {}
            2 if m >= 3 => {}
            2 => return Err(unsupported(format!("{id} needs m >= 3"))),
            _ => {
                return Err(unsupported(format!(
                    "{id}: upstream potentials beyond k = 2 are known only through their boundary values"
                )))
            }
        }
        Ok(())
    }

    /// Signed profile `F~_n(r/x0)` for `x0 != 0`: the profile itself for
    /// `x0 > 0` and its continuation `(1 + (-1)^n) F_n(inf) - F_n(r/|x0|)`
    /// below.
    fn profile_signed(n: usize, x0: f64, r: f64) -> f64 {
        let v = r / x0.abs();
        let (f, tail) = profile_pair(n, v);
        if x0 > 0.0 {
            f
        } else if n % 2 == 0 {
            profile_at_infinity(n) + tail
        } else {
            -f
        }
    }

    /// `r^{-p} F~_n(r/x0)`, stable as `r -> 0`.
    fn profile_over_power(n: usize, p: usize, x0: f64, r: f64) -> Result<f64> {
        let ax = x0.abs();
        let continued = x0 < 0.0 && n % 2 == 0;
        if r > 1e-6 * ax || (continued && r > 0.0) {
            return Ok(Self::profile_signed(n, x0, r) / libm::pow(r, p as f64));
        }
        if continued {
            return Err(domain("even-dimensional lower potentials are singular on the negative x0-axis"));
        }
        // F_n(v) = v^n/n - (n+1) v^{n+2}/(2(n+2)) + ..., here p == n
        debug_assert_eq!(p, n);
        let v = r / ax;
        let nf = n as f64;
        let lead = 1.0 / nf - (nf + 1.0) * v * v / (2.0 * (nf + 2.0));
        let sign = if x0 < 0.0 { -1.0 } else { 1.0 };
        Ok(sign * lead / libm::pow(ax, nf))
    }

    /// `(A_k, beta_k)` with `B_k = beta_k x`, for `k >= 0`.
    fn upstream(&self, k: i32, x0: f64, r: f64) -> Result<(f64, f64)> {
        let m = self.ctx.m();
        let mf = m as f64;
        let s = self.sig;
        let n2 = x0 * x0 + r * r;
        if n2 == 0.0 {
            return Err(domain("potentials are singular at the origin"));
        }
        let nx = libm::sqrt(n2);
        let a0 = -2.0 / ((mf - 1.0) * s) * libm::pow(nx, 1.0 - mf);
        if x0 == 0.0 {
            return Err(domain(format!("C_{k} needs x0 != 0; use the pointwise limit on the boundary")));
        }
        let pm = Self::profile_over_power(m, m, x0, r)?;
        match k {
            0 => Ok((a0, 2.0 / s * pm)),
            1 => {
                let a1 = if m == 2 {
                    // x0 + |x|, computed without cancellation below the boundary
                    let w = if x0 > 0.0 { x0 + nx } else { r * r / (nx - x0) };
                    if w == 0.0 {
                        return Err(domain("A_1 is singular on the negative x0-axis for m = 2"));
                    }
                    -libm::log(w) / (2.0 * PI)
                } else {
                    2.0 / ((mf - 1.0) * s) * self.r_pow_profile(m - 2, x0, r)?
                };
                let b1 = 2.0 / s * x0 * pm - 2.0 / ((mf - 1.0) * s) * libm::pow(nx, 1.0 - mf);
                Ok((a1, b1))
            }
            2 => {
                let a2 = if m == 3 {
                    let t = if r > 1e-6 * x0.abs() {
                        x0 * Self::profile_signed(1, x0, r) / r
                    } else {
                        1.0 - r * r / (3.0 * x0 * x0)
                    };
                    (t + libm::log(nx)) / s
                } else {
                    2.0 / ((mf - 1.0) * s) * x0 * self.r_pow_profile(m - 2, x0, r)?
                        - 2.0 / ((mf - 1.0) * (mf - 3.0) * s) * libm::pow(nx, 3.0 - mf)
                };
                let pm2 = Self::profile_over_power(m - 2, m - 2, x0, r)?;
                let b2 = n2 * pm / s - (mf - 3.0) / (mf - 1.0) / s * pm2;
                Ok((a2, b2))
            }
            _ => Err(unsupported(format!("no interior evaluator for k = {k}"))),
        }
    }

    /// `r^{2-m} F~_{m-2}(r/x0)`.
    fn r_pow_profile(&self, n: usize, x0: f64, r: f64) -> Result<f64> {
        Self::profile_over_power(n, n, x0, r)
    }

    /// `C_k(x0, r)` in axial form.
    pub fn axial(&self, k: i32, x0: f64, r: f64) -> Result<AxialValue> {
        self.check_id(PotentialId::c(k))?;
        if k <= -1 {
            return self.downstream(k).expect("checked").eval_axial(x0, r);
        }
        let (a, beta) = self.upstream(k, x0, r)?;
        Ok(AxialValue { s: 0.5 * a, s0: 0.0, v: 0.0, v0: -0.5 * beta * r })
    }

    /// Component `id` at `(x0, r)`: `A` lands in `s`, `B = beta x` in `v`.
    pub fn axial_component(&self, id: PotentialId, x0: f64, r: f64) -> Result<AxialValue> {
        if x0 == 0.0 && id.k >= 0 {
            // the Green function is defined on the boundary too
            if id == PotentialId::new(Component::A, 0) && r > 0.0 {
                let mf = self.ctx.m() as f64;
                return Ok(AxialValue { s: -2.0 / ((mf - 1.0) * self.sig) * libm::pow(r, 1.0 - mf), ..Default::default() });
            }
            self.check_id(id)?;
            return Err(domain(format!("{id} needs x0 != 0; use the pointwise limit on the boundary")));
        }
        let c = self.axial(id.k, x0, r)?;
        Ok(match id.component {
            Component::C => c,
            Component::A => AxialValue { s: 2.0 * c.s, ..Default::default() },
            Component::B => AxialValue { v: -2.0 * c.v0, ..Default::default() },
        })
    }

    pub fn eval(&self, id: PotentialId, p: &Point) -> Result<Multivector> {
        p.check_dim(&self.ctx)?;
        let r = p.r();
        let v = self.axial_component(id, p.x0, r)?;
        Ok(v.to_multivector(self.ctx, &unit_direction(&p.xvec, r)))
    }

    /// Limit of `id` as `x0 -> 0` from `side` at a boundary point `x != 0`.
    pub fn pointwise_limit(&self, id: PotentialId, xvec: &[f64], side: Side) -> Result<Multivector> {
        let p = Point::new(0.0, xvec.to_vec());
        p.check_dim(&self.ctx)?;
        let r = p.r();
        if r == 0.0 {
            return Err(domain("pointwise limits need a nonzero boundary point"));
        }
        self.check_id(id)?;
        let m = self.ctx.m();
        let mf = m as f64;
        let s = self.sig;
        let parity = if m % 2 == 0 { 1.0 } else { -1.0 };
        let side_factor = match side {
            Side::Plus => 1.0,
            Side::Minus => parity,
        };
        // (A, beta) at the boundary
        let (a, beta) = match id.k {
            -1 => (0.0, -2.0 / s / libm::pow(r, mf + 1.0)),
            0 => (
                -2.0 / ((mf - 1.0) * s) * libm::pow(r, 1.0 - mf),
                side_factor / self.sig_m / libm::pow(r, mf),
            ),
            1 => {
                let a1 = if m == 2 {
                    -libm::log(r) / (2.0 * PI)
                } else {
                    side_factor / (self.sig_m * (mf - 2.0)) * libm::pow(r, 2.0 - mf)
                };
                (a1, -2.0 / ((mf - 1.0) * s) * libm::pow(r, 1.0 - mf))
            }
            2 => {
                let a2 = if m == 3 {
                    libm::log(r) / s
                } else {
                    -2.0 / ((mf - 1.0) * (mf - 3.0) * s) * libm::pow(r, 3.0 - mf)
                };
                (a2, side_factor / (2.0 * self.sig_m * (mf - 2.0)) * libm::pow(r, 2.0 - mf))
            }
            _ => return Err(unsupported(format!("no closed-form pointwise limit for {id}"))),
        };
        let c = AxialValue { s: 0.5 * a, v0: -0.5 * beta * r, ..Default::default() };
        let v = match id.component {
            Component::C => c,
            Component::A => AxialValue { s: a, ..Default::default() },
            Component::B => AxialValue { v: beta * r, ..Default::default() },
        };
        Ok(v.to_multivector(self.ctx, &unit_direction(xvec, r)))
    }

    /// Limit of `id` as `x -> 0` with `x0 != 0` fixed.
    pub fn axis_limit(&self, id: PotentialId, x0: f64) -> Result<Multivector> {
        if x0 == 0.0 {
            return Err(domain("axis limits need x0 != 0"));
        }
        self.check_id(id)?;
        let m = self.ctx.m();
        let mf = m as f64;
        let s = self.sig;
        let ax = x0.abs();
        let regular = matches!((id.k, id.component), (0, Component::A)) || id.k < 0;
        if x0 < 0.0 && m % 2 == 0 && !regular {
            return Err(domain("even-dimensional lower potentials are singular on the negative x0-axis"));
        }
        let signed_pow = |p: f64| libm::copysign(1.0, x0) * libm::pow(ax, p);
        let a = match id.k {
            k if k <= -1 => {
                let v = self.downstream(k).expect("checked").eval_axial(x0, 0.0)?;
                2.0 * v.s
            }
            0 => -2.0 / ((mf - 1.0) * s) * libm::pow(ax, 1.0 - mf),
            1 if m == 2 => -libm::log(2.0 * x0) / (2.0 * PI),
            1 => 2.0 / ((mf - 1.0) * (mf - 2.0) * s) * signed_pow(2.0 - mf),
            2 if m == 3 => (1.0 + libm::log(ax)) / s,
            2 => -2.0 / ((mf - 1.0) * (mf - 2.0) * (mf - 3.0) * s) * libm::pow(ax, 3.0 - mf),
            _ => unreachable!("check_id"),
        };
        let v = match id.component {
            Component::A => AxialValue { s: a, ..Default::default() },
            Component::B => AxialValue::default(),
            Component::C => AxialValue { s: 0.5 * a, ..Default::default() },
        };
        Ok(v.to_multivector(self.ctx, &alloc::vec![0.0; m]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use alloc::vec::Vec;

    fn pots(m: usize) -> Potentials {
        Potentials::new(AlgebraContext::new(m).unwrap())
    }

    fn rel(a: &Multivector, b: &Multivector) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn documented_values() {
        let p = pots(2);
        let v = p.eval(PotentialId::new(Component::A, -1), &Point::new(1.0, vec![0.0, 0.0])).unwrap();
        assert!((v.scalar_part() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        let x = [0.6, 0.8];
        let v = p.eval(PotentialId::new(Component::B, 0), &Point::new(1.0, x.to_vec())).unwrap();
        let c = (1.0 - 1.0 / libm::sqrt(2.0)) / (2.0 * PI);
        assert!((v.get(2) - c * 0.6).abs() < 1e-14 && (v.get(4) - c * 0.8).abs() < 1e-14, "{v} vs {}", c);
        // the Green function is A_0 / 2, the scalar part of C_0
        let at = Point::new(1.0, vec![0.0; 3]);
        let v = pots(3).eval(PotentialId::new(Component::A, 0), &at).unwrap();
        assert!((v.scalar_part() + 1.0 / (2.0 * PI * PI)).abs() < 1e-15);
        let v = pots(3).eval(PotentialId::c(0), &at).unwrap();
        assert!((v.scalar_part() + 1.0 / (4.0 * PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn id_parsing_and_availability() {
        assert_eq!("C:-2".parse::<PotentialId>().unwrap(), PotentialId::c(-2));
        assert_eq!("a:1".parse::<PotentialId>().unwrap(), PotentialId::new(Component::A, 1));
        assert!("D:1".parse::<PotentialId>().is_err());
        assert!("C:x".parse::<PotentialId>().is_err());
        assert_eq!(PotentialId::new(Component::B, -3).to_string(), "B:-3");
        assert!(pots(2).check_id(PotentialId::c(2)).is_err());
        assert!(pots(3).check_id(PotentialId::c(2)).is_ok());
        assert!(pots(5).check_id(PotentialId::c(3)).is_err());
        assert!(pots(5).check_id(PotentialId::c(-9)).is_err());
        assert!(pots(3).eval(PotentialId::c(1), &Point::new(0.0, vec![1.0, 0.0, 0.0])).is_err());
        assert!(pots(3).eval(PotentialId::c(-1), &Point::new(0.0, vec![0.0; 3])).is_err());
    }

    #[test]
    fn pointwise_limits_match_evaluation_near_the_boundary() {
        let t = 1e-7;
        for m in 2..=5 {
            let p = pots(m);
            let x: Vec<f64> = (0..m).map(|j| 0.4 + 0.1 * j as f64).collect();
            for k in -1..=2 {
                if p.check_id(PotentialId::c(k)).is_err() {
                    continue;
                }
                for comp in [Component::A, Component::B, Component::C] {
                    let id = PotentialId::new(comp, k);
                    for (side, x0) in [(Side::Plus, t), (Side::Minus, -t)] {
                        let lim = p.pointwise_limit(id, &x, side).unwrap();
                        let v = p.eval(id, &Point::new(x0, x.clone())).unwrap();
                        if comp == Component::A && k == -1 {
                            assert!(v.norm() < 1e-5 && lim.norm() == 0.0);
                            continue;
                        }
                        assert!(rel(&v, &lim) < 1e-5, "m={m} {id} {side}: {v} vs {lim}");
                    }
                }
            }
        }
    }

    #[test]
    fn side_factor_follows_the_parity_of_m() {
        let x = [1.0, 0.0, 0.0, 0.0, 0.0];
        for m in 2..=5 {
            let p = pots(m);
            let id = PotentialId::new(Component::B, 0);
            let plus = p.pointwise_limit(id, &x[..m], Side::Plus).unwrap();
            let minus = p.pointwise_limit(id, &x[..m], Side::Minus).unwrap();
            let expect = if m % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(minus.get(2), expect * plus.get(2));
            assert!((plus.get(2) - 1.0 / sigma(m)).abs() < 1e-15);
        }
    }

    #[test]
    fn axis_limits_match_evaluation_near_the_axis() {
        for m in 2..=5 {
            let p = pots(m);
            for k in -3..=2 {
                if p.check_id(PotentialId::c(k)).is_err() {
                    continue;
                }
                for x0 in [0.7, -0.7] {
                    let id = PotentialId::new(Component::A, k);
                    let lim = match p.axis_limit(id, x0) {
                        Ok(l) => l,
                        Err(_) => {
                            assert!(x0 < 0.0 && m % 2 == 0 && k >= 1);
                            continue;
                        }
                    };
                    let mut x = vec![0.0; m];
                    x[0] = 1e-5;
                    let v = p.eval(id, &Point::new(x0, x)).unwrap();
                    assert!(rel(&v, &lim) < 1e-6, "m={m} {id} x0={x0}: {v} vs {lim}");
                }
            }
        }
        let lim = pots(3).axis_limit(PotentialId::new(Component::A, -1), 2.0).unwrap();
        assert!((lim.scalar_part() - 2.0 / sigma(4) / 8.0).abs() < 1e-15);
    }

    #[test]
    fn even_dimensions_continue_across_the_boundary() {
        for m in [2, 4] {
            let p = pots(m);
            let x: Vec<f64> = (0..m).map(|j| 0.5 - 0.2 * j as f64).collect();
            let id = PotentialId::new(Component::B, 0);
            let up = p.eval(id, &Point::new(1e-6, x.clone())).unwrap();
            let down = p.eval(id, &Point::new(-1e-6, x.clone())).unwrap();
            assert!(rel(&up, &down) < 1e-5);
        }
        let p = pots(3);
        let x = vec![0.5, 0.3, -0.2];
        let id = PotentialId::new(Component::B, 0);
        let up = p.eval(id, &Point::new(1e-6, x.clone())).unwrap();
        let down = p.eval(id, &Point::new(-1e-6, x)).unwrap();
        assert!(rel(&up, &down.scale(-1.0)) < 1e-5);
    }

    #[test]
    fn green_function_reaches_the_boundary() {
        for m in 2..=5 {
            let p = pots(m);
            let mut x = vec![0.0; m];
            x[m - 1] = 1.3;
            let a0 = PotentialId::new(Component::A, 0);
            let on = p.eval(a0, &Point::new(0.0, x.clone())).unwrap();
            assert_eq!(on, p.pointwise_limit(a0, &x, Side::Plus).unwrap());
            let near = p.eval(a0, &Point::new(1e-9, x.clone())).unwrap();
            assert!((&on - &near).norm() < 1e-12);
            let err = p.eval(PotentialId::new(Component::B, 0), &Point::new(0.0, x)).unwrap_err();
            assert!(err.to_string().contains("B:0 needs x0 != 0"), "{err}");
        }
    }
}
