//! Hyperfunction representations of `Dirac^n delta` and `Dirac^n H` as pairs
//! of monogenic functions in the two half-spaces, and the numerical harness
//! that measures their jumps across `R^m`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::clifford::{AlgebraContext, AxialValue, Multivector, Point};
use crate::distributions::{
    boundary_value, dirac_power_kernel, hilbert_power_kernel, BoundaryDistribution, GaussPoly, Series, Side,
};
use crate::error::{domain, unsupported, Error, Result};
use crate::potentials::{PotentialId, Potentials};
use crate::quadrature::{extrapolation_weights, graded_radial_rule, AngularScheme};

/// Left factor applied to a half-space potential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prefactor {
    One,
    MinusOne,
    E0,
    E0Bar,
}

impl Prefactor {
    pub fn apply_axial(self, v: AxialValue) -> AxialValue {
        match self {
            Prefactor::One => v,
            Prefactor::MinusOne => v.scale(-1.0),
            Prefactor::E0 => v.left_mul_e0(),
            Prefactor::E0Bar => v.left_mul_e0().scale(-1.0),
        }
    }

    pub fn apply(self, x: &Multivector) -> Multivector {
        match self {
            Prefactor::One => x.clone(),
            Prefactor::MinusOne => x.scale(-1.0),
            Prefactor::E0 => x.left_mul_blade(1, 1.0),
            Prefactor::E0Bar => x.left_mul_blade(1, -1.0),
        }
    }

    pub fn to_multivector(self, ctx: AlgebraContext) -> Multivector {
        self.apply(&Multivector::scalar(ctx, 1.0))
    }
}

impl fmt::Display for Prefactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Prefactor::One => "1",
            Prefactor::MinusOne => "-1",
            Prefactor::E0 => "e0",
            Prefactor::E0Bar => "-e0",
        })
    }
}

/// Whether an entry can be realized by the potential chain in dimension `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Applicability {
    Applicable,
    /// `n <= -1` in even dimension: the upstream potential continues across
    /// `R^m` and its jump vanishes.
    ParityObstructed,
    /// `n < -3`: the potential is known only through its boundary values.
    NotEvaluable,
}

impl Applicability {
    pub fn is_applicable(self) -> bool {
        self == Applicability::Applicable
    }
}

impl fmt::Display for Applicability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Applicability::Applicable => "applicable",
            Applicability::ParityObstructed => "parity-obstructed",
            Applicability::NotEvaluable => "not-evaluable",
        })
    }
}

/// `Dirac^n delta <-> (p+ C, p- C)` and `Dirac^n H <-> (q+ C, q- C)` with
/// `C = C_{-n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RepresentationEntry {
    pub n: i32,
    pub potential: PotentialId,
    pub delta: (Prefactor, Prefactor),
    pub hilbert: (Prefactor, Prefactor),
    pub target_delta: BoundaryDistribution,
    pub target_hilbert: BoundaryDistribution,
    pub applicability: Applicability,
}

impl RepresentationEntry {
    /// Distribution expected for `c+ + c-` (no prefactors):
    /// `e0bar Dirac^n H` for even `n`, `-Dirac^n H` for odd `n`.
    pub fn sum_target(&self) -> BoundaryDistribution {
        let ctx = self.target_hilbert.context();
        if self.n.rem_euclid(2) == 0 {
            self.target_hilbert.left_mul(&Prefactor::E0Bar.to_multivector(ctx))
        } else {
            self.target_hilbert.neg()
        }
    }
}

/// The registry entry for index `n`.
pub fn representation(ctx: AlgebraContext, n: i32) -> RepresentationEntry {
    use Prefactor::*;
    let (delta, hilbert) = if n.rem_euclid(2) == 0 { ((One, One), (E0, E0Bar)) } else { ((E0Bar, E0Bar), (MinusOne, One)) };
    let applicability = if n <= -1 && ctx.m() % 2 == 0 {
        Applicability::ParityObstructed
    } else if n < -3 {
        Applicability::NotEvaluable
    } else {
        Applicability::Applicable
    };
    RepresentationEntry {
        n,
        potential: PotentialId::c(-n - 1),
        delta,
        hilbert,
        target_delta: dirac_power_kernel(ctx, n as f64),
        target_hilbert: hilbert_power_kernel(ctx, n as f64),
        applicability,
    }
}

/// Quadrature and extrapolation settings for interior pairings.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Strictly decreasing distances `|x0|` from the boundary.
    pub ladder: Vec<f64>,
    /// Gauss-Legendre nodes per radial panel.
    pub radial_nodes: usize,
    pub angular: AngularScheme,
    /// Degree of the extrapolating polynomial in `x0`.
    pub order: usize,
    /// Truncation radius.
    pub radius: f64,
    /// Panel width beyond `r = 1`.
    pub outer_width: f64,
}

impl QuadratureConfig {
    pub const MIN_LADDER: f64 = 0.05;
    pub const MIN_RADIAL_NODES: usize = 8;

    pub fn for_dimension(m: usize) -> Result<Self> {
        Ok(Self {
            ladder: (1..=8).rev().map(|i| 0.05 * i as f64).collect(),
            radial_nodes: 16,
            angular: AngularScheme::default_for(m)?,
            order: 7,
            radius: 6.0,
            outer_width: 0.5,
        })
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        let bad = |s: String| Err(Error::Config(s));
        if self.ladder.is_empty() {
            return bad("empty x0 ladder".into());
        }
        if self.ladder.windows(2).any(|w| w[1] >= w[0]) {
            return bad("x0 ladder must be strictly decreasing".into());
        }
        let last = *self.ladder.last().expect("nonempty");
        if last < Self::MIN_LADDER - 1e-12 {
            return bad(format!("x0 ladder goes down to {last}, minimum is {}", Self::MIN_LADDER));
        }
        if self.order + 1 > self.ladder.len() {
            return bad(format!("order {} needs {} ladder points", self.order, self.order + 1));
        }
        if self.radial_nodes < Self::MIN_RADIAL_NODES {
            return bad(format!("radial nodes {} below minimum {}", self.radial_nodes, Self::MIN_RADIAL_NODES));
        }
        if !(self.radius >= 4.0 && self.outer_width > 0.0) {
            return bad("radius must be at least 4 and the outer panel width positive".into());
        }
        match self.angular {
            AngularScheme::Circle { n } if n < 8 => return bad(format!("circle rule needs >= 8 points, got {n}")),
            AngularScheme::SphereProduct { polar, azimuth } if polar < 4 || azimuth < 8 => {
                return bad(format!("sphere rule needs polar >= 4 and azimuth >= 8, got {polar} x {azimuth}"))
            }
            _ => {}
        }
        if self.angular.dimension() != m {
            return Err(unsupported(format!("angular rule is for m = {}, not m = {m}", self.angular.dimension())));
        }
        Ok(())
    }
}

/// Radial nodes with the angular averages of each test function.
struct RadialSamples {
    r: Vec<f64>,
    /// `r^{m-1} w_r`.
    w: Vec<f64>,
    /// `phi0[f][i] = int_S phi_f(r_i w) dw`, `phi1` with `w phi_f` instead.
    phi0: Vec<Vec<Multivector>>,
    phi1: Vec<Vec<Multivector>>,
}

impl RadialSamples {
    fn new(ctx: AlgebraContext, t: f64, phis: &[GaussPoly], cfg: &QuadratureConfig) -> Self {
        let m = ctx.m();
        let (r, wr) = graded_radial_rule(t, cfg.radius, cfg.radial_nodes, cfg.outer_width);
        let w: Vec<f64> = r.iter().zip(&wr).map(|(r, w)| w * libm::pow(*r, m as f64 - 1.0)).collect();
        let angular = cfg.angular.nodes();
        let dirs: Vec<Multivector> = angular.iter().map(|(d, _)| Multivector::vector(ctx, 0.0, d)).collect();
        let mut phi0 = Vec::with_capacity(phis.len());
        let mut phi1 = Vec::with_capacity(phis.len());
        let mut x = vec![0.0; m];
        for phi in phis {
            let mut a0 = Vec::with_capacity(r.len());
            let mut a1 = Vec::with_capacity(r.len());
            for &ri in &r {
                let mut s0 = Multivector::zero(ctx);
                let mut s1 = Multivector::zero(ctx);
                for ((d, wa), dv) in angular.iter().zip(&dirs) {
                    for (xj, dj) in x.iter_mut().zip(d) {
                        *xj = ri * dj;
                    }
                    let v = phi.eval(&x);
                    s0.axpy(*wa, &v);
                    s1.axpy(*wa, &(dv * &v));
                }
                a0.push(s0);
                a1.push(s1);
            }
            phi0.push(a0);
            phi1.push(a1);
        }
        Self { r, w, phi0, phi1 }
    }

    /// `int prefactor C(x0, x) phi_f(x) dx` for every test function.
    fn pair(&self, ctx: AlgebraContext, c: impl Fn(f64) -> Result<AxialValue>) -> Result<Vec<Multivector>> {
        let e0 = Multivector::generator(ctx, 0);
        let mut out = vec![Multivector::zero(ctx); self.phi0.len()];
        for (i, (&r, &w)) in self.r.iter().zip(&self.w).enumerate() {
            let v = c(r)?;
            if !v.is_finite() {
                return Err(domain(format!("potential is not finite at r = {r}")));
            }
            for (f, acc) in out.iter_mut().enumerate() {
                acc.axpy(w * v.s, &self.phi0[f][i]);
                acc.axpy(w * v.s0, &(&e0 * &self.phi0[f][i]));
                acc.axpy(w * v.v, &self.phi1[f][i]);
                acc.axpy(w * v.v0, &(&e0 * &self.phi1[f][i]));
            }
        }
        Ok(out)
    }
}

/// `int_{R^m} prefactor C_k(x0, x) phi(x) dx` for each `phi`, by polar quadrature.
pub fn pair_interior(
    pots: &Potentials,
    id: PotentialId,
    prefactor: Prefactor,
    x0: f64,
    phis: &[GaussPoly],
    cfg: &QuadratureConfig,
) -> Result<Vec<Multivector>> {
    let ctx = pots.context();
    cfg.validate(ctx.m())?;
    if x0 == 0.0 {
        return Err(domain("interior pairings need x0 != 0"));
    }
    pots.check_id(id)?;
    for phi in phis {
        ctx.check(&phi.context())?;
    }
    let samples = RadialSamples::new(ctx, x0.abs(), phis, cfg);
    samples.pair(ctx, |r| Ok(prefactor.apply_axial(pots.axial_component(id, x0, r)?)))
}

/// Which identity a jump row checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `p+ c+ - p- c- = Dirac^n delta`.
    Delta,
    /// `q+ c+ - q- c- = Dirac^n H`.
    Hilbert,
    /// `c+ + c-` against the Hilbert partner.
    Sum,
    /// Bare `c+ - c-` against the boundary-value tables.
    Raw,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Delta => "delta",
            Relation::Hilbert => "hilbert",
            Relation::Sum => "sum",
            Relation::Raw => "raw",
        })
    }
}

/// One extrapolated pairing compared with its target.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpRow {
    pub relation: Relation,
    pub phi_id: String,
    pub jump_value: Multivector,
    pub target_value: Multivector,
    /// Relative error, or absolute when the target vanishes.
    pub rel_err: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpReport {
    pub n: i32,
    pub m: usize,
    pub applicability: Applicability,
    pub ladder: Vec<f64>,
    pub rows: Vec<JumpRow>,
}

impl JumpReport {
    pub fn applicable(&self) -> bool {
        self.applicability.is_applicable()
    }

    pub fn max_rel_err(&self) -> f64 {
        self.rows.iter().map(|r| r.rel_err).fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        !self.rows.is_empty() && self.max_rel_err() <= tol
    }
}

/// Tolerance used by the jump suites.
pub const JUMP_TOLERANCE: f64 = 5e-3;

/// Test functions used by [`jump_check`]: the fixed battery plus `G` and `x G`.
pub fn jump_battery(ctx: AlgebraContext) -> Vec<(String, GaussPoly)> {
    let mut out = vec![
        ("gauss".into(), GaussPoly::gaussian(ctx)),
        ("x_gauss".into(), GaussPoly::gaussian(ctx).mul_xvec()),
    ];
    out.extend(GaussPoly::battery(ctx));
    out
}

pub fn relative_error(value: &Multivector, target: &Multivector) -> f64 {
    let t = target.norm();
    let d = (value - target).norm();
    if t > 1e-12 {
        d / t
    } else {
        d
    }
}

/// Extrapolated one-sided pairings `lim_{t -> 0+} int C(+-t) phi` for each
/// `phi`, as `(plus, minus)`.
pub fn boundary_pairings(
    pots: &Potentials,
    id: PotentialId,
    phis: &[GaussPoly],
    cfg: &QuadratureConfig,
) -> Result<(Vec<Multivector>, Vec<Multivector>)> {
    let ctx = pots.context();
    cfg.validate(ctx.m())?;
    pots.check_id(id)?;
    let w = extrapolation_weights(&cfg.ladder, cfg.order)?;
    let mut plus = vec![Multivector::zero(ctx); phis.len()];
    let mut minus = plus.clone();
    for (&t, &wt) in cfg.ladder.iter().zip(&w) {
        let samples = RadialSamples::new(ctx, t, phis, cfg);
        let p = samples.pair(ctx, |r| pots.axial_component(id, t, r))?;
        let q = samples.pair(ctx, |r| pots.axial_component(id, -t, r))?;
        for f in 0..phis.len() {
            plus[f].axpy(wt, &p[f]);
            minus[f].axpy(wt, &q[f]);
        }
    }
    Ok((plus, minus))
}

/// Measures the jumps of the representation of index `n` on the test
/// battery. The raw jump `c+ - c-` is always compared with the boundary-value
/// tables; for obstructed entries it is the only check, and it vanishes.
pub fn jump_check(pots: &Potentials, n: i32, cfg: &QuadratureConfig) -> Result<JumpReport> {
    let ctx = pots.context();
    if !(-3..=3).contains(&n) {
        return Err(unsupported(format!("jump checks cover -3 <= n <= 3, got {n}")));
    }
    let entry = representation(ctx, n);
    if entry.applicability == Applicability::NotEvaluable {
        return Err(unsupported(format!("n = {n}: {}", entry.applicability)));
    }
    let battery = jump_battery(ctx);
    let phis: Vec<GaussPoly> = battery.iter().map(|(_, p)| p.clone()).collect();
    let (plus, minus) = boundary_pairings(pots, entry.potential, &phis, cfg)?;
    let mut rows = Vec::new();
    let mut push = |relation, targets: &BoundaryDistribution, pp: Prefactor, pm: Prefactor, sign: f64| -> Result<()> {
        for (f, (name, phi)) in battery.iter().enumerate() {
            let jump = &pp.apply(&plus[f]) - &pm.apply(&minus[f]).scale(sign);
            let target = targets.pair(phi)?;
            rows.push(JumpRow {
                relation,
                phi_id: name.clone(),
                rel_err: relative_error(&jump, &target),
                jump_value: jump,
                target_value: target,
            });
        }
        Ok(())
    };
    if entry.applicability == Applicability::Applicable {
        push(Relation::Delta, &entry.target_delta, entry.delta.0, entry.delta.1, 1.0)?;
        push(Relation::Hilbert, &entry.target_hilbert, entry.hilbert.0, entry.hilbert.1, 1.0)?;
        push(Relation::Sum, &entry.sum_target(), Prefactor::One, Prefactor::One, -1.0)?;
    }
    let k = entry.potential.k;
    let raw = boundary_value(ctx, Series::C, k, Side::Plus).sub(&boundary_value(ctx, Series::C, k, Side::Minus));
    push(Relation::Raw, &raw, Prefactor::One, Prefactor::One, 1.0)?;
    Ok(JumpReport { n, m: ctx.m(), applicability: entry.applicability, ladder: cfg.ladder.clone(), rows })
}

/// Summary of a residual over the points of one half-space.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ResidualStats {
    pub count: usize,
    pub max_abs: f64,
    pub mean_abs: f64,
    /// Largest residual divided by its local scale.
    pub max_rel: f64,
}

impl ResidualStats {
    fn push(&mut self, abs: f64, scale: f64) {
        self.count += 1;
        self.max_abs = self.max_abs.max(abs);
        self.mean_abs += (abs - self.mean_abs) / self.count as f64;
        let rel = if scale > 0.0 { abs / scale } else { abs };
        self.max_rel = self.max_rel.max(rel);
    }

    fn merge(&mut self, other: &ResidualStats) {
        let n = self.count + other.count;
        if n == 0 {
            return;
        }
        self.mean_abs = (self.mean_abs * self.count as f64 + other.mean_abs * other.count as f64) / n as f64;
        self.count = n;
        self.max_abs = self.max_abs.max(other.max_abs);
        self.max_rel = self.max_rel.max(other.max_rel);
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ResidualReport {
    pub upper: ResidualStats,
    pub lower: ResidualStats,
}

impl ResidualReport {
    pub fn max_rel(&self) -> f64 {
        self.upper.max_rel.max(self.lower.max_rel)
    }

    pub fn merge(&mut self, other: &ResidualReport) {
        self.upper.merge(&other.upper);
        self.lower.merge(&other.lower);
    }

    fn push(&mut self, x0: f64, abs: f64, scale: f64) {
        if x0 > 0.0 {
            self.upper.push(abs, scale);
        } else {
            self.lower.push(abs, scale);
        }
    }
}

/// Central-difference partials `(d0 f, [d1 f, ..., dm f])`.
pub fn fd_gradient(
    f: &impl Fn(&Point) -> Result<Multivector>,
    p: &Point,
    h: f64,
) -> Result<(Multivector, Vec<Multivector>)> {
    let shifted = |j: usize, d: f64| {
        let mut q = p.clone();
        if j == 0 {
            q.x0 += d;
        } else {
            q.xvec[j - 1] += d;
        }
        q
    };
    let diff = |j: usize| -> Result<Multivector> { Ok((&f(&shifted(j, h))? - &f(&shifted(j, -h))?).scale(0.5 / h)) };
    let d0 = diff(0)?;
    let dj = (1..=p.xvec.len()).map(diff).collect::<Result<Vec<_>>>()?;
    Ok((d0, dj))
}

/// `(1/2)(d0 f + s e0 sum_j e_j dj f)`: `D` for `s = -1`, `Dbar` for `s = +1`,
/// together with the scale `(1/2)(|d0 f| + sum_j |dj f|)`.
fn fd_cauchy_riemann(
    f: &impl Fn(&Point) -> Result<Multivector>,
    p: &Point,
    h: f64,
    s: f64,
) -> Result<(Multivector, f64)> {
    let (d0, dj) = fd_gradient(f, p, h)?;
    let mut scale = d0.norm();
    let mut vec_part = Multivector::zero(d0.context());
    for (j, d) in dj.iter().enumerate() {
        scale += d.norm();
        vec_part += &d.left_mul_blade(1 << (j + 1), 1.0);
    }
    let mut out = d0;
    out += &vec_part.left_mul_blade(1, s);
    Ok((out.scale(0.5), 0.5 * scale))
}

fn check_points(points: &[Point], h: f64) -> Result<()> {
    for p in points {
        if p.norm() < 0.1 || p.x0.abs() < 2.0 * h {
            return Err(domain(format!("point ({}, {:?}) is too close to the origin or the boundary", p.x0, p.xvec)));
        }
    }
    Ok(())
}

/// Central-difference residual `|D f|` of an arbitrary field.
pub fn fd_dirac_residual_fn(
    f: impl Fn(&Point) -> Result<Multivector>,
    points: &[Point],
    h: f64,
) -> Result<ResidualReport> {
    check_points(points, h)?;
    let mut rep = ResidualReport::default();
    for p in points {
        let (d, scale) = fd_cauchy_riemann(&f, p, h, -1.0)?;
        rep.push(p.x0, d.norm(), scale);
    }
    Ok(rep)
}

/// Central-difference residual `|D f|` of the potential `id`.
pub fn fd_dirac_residual(pots: &Potentials, id: PotentialId, points: &[Point], h: f64) -> Result<ResidualReport> {
    pots.check_id(id)?;
    fd_dirac_residual_fn(|p| pots.eval(id, p), points, h)
}

/// `|Dbar C_k - C_{k-1}|` at each point, relative to the larger of
/// `|C_{k-1}|` and the local derivative scale of `C_k`.
pub fn fd_chain_residual(pots: &Potentials, k: i32, points: &[Point], h: f64) -> Result<ResidualReport> {
    let (id, prev) = (PotentialId::c(k), PotentialId::c(k - 1));
    pots.check_id(id)?;
    pots.check_id(prev)?;
    check_points(points, h)?;
    let f = |p: &Point| pots.eval(id, p);
    let mut rep = ResidualReport::default();
    for p in points {
        let (d, scale) = fd_cauchy_riemann(&f, p, h, 1.0)?;
        let target = pots.eval(prev, p)?;
        rep.push(p.x0, (&d - &target).norm(), target.norm().max(scale));
    }
    Ok(rep)
}

/// Central-difference residual of the Laplacian in `R^{m+1}`, relative to
/// `sum_j |dj^2 f|`.
pub fn fd_laplacian_residual(pots: &Potentials, id: PotentialId, points: &[Point], h: f64) -> Result<ResidualReport> {
    pots.check_id(id)?;
    check_points(points, h)?;
    let mut rep = ResidualReport::default();
    for p in points {
        let f0 = pots.eval(id, p)?;
        let mut lap = Multivector::zero(f0.context());
        let mut scale = 0.0;
        for j in 0..=p.xvec.len() {
            let mut a = p.clone();
            let mut b = p.clone();
            if j == 0 {
                a.x0 += h;
                b.x0 -= h;
            } else {
                a.xvec[j - 1] += h;
                b.xvec[j - 1] -= h;
            }
            let mut second = &pots.eval(id, &a)? + &pots.eval(id, &b)?;
            second.axpy(-2.0, &f0);
            let second = second.scale(1.0 / (h * h));
            scale += second.norm();
            lap += &second;
        }
        rep.push(p.x0, lap.norm(), scale);
    }
    Ok(rep)
}
