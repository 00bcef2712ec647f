//! Verification suites. Each returns an ordered list of [`Check`]s; work is
//! fanned out on the supplied pool and merged in a fixed order.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use monopot_core::distributions::{
    dirac_power_kernel, lemma_check, make_normalized, pq_constants, Family, GaussPoly,
};
use monopot_core::hyperfunctions::{
    fd_chain_residual, fd_dirac_residual, fd_laplacian_residual, jump_check, representation, Applicability,
    JumpReport, QuadratureConfig, JUMP_TOLERANCE,
};
use monopot_core::quadrature::{graded_radial_rule, AngularScheme};
use monopot_core::special::sigma;
use monopot_core::terms::DownstreamChain;
use monopot_core::{AlgebraContext, Component, Multivector, Point, PotentialId, Potentials, Side};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::output::Check;
use crate::points::{shell_battery, DEFAULT_SEED};
use crate::AppError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// Exact and finite-difference monogenicity, chain steps, harmonicity.
    Monogenic,
    /// Jumps of the hyperfunction pairs (m = 2, 3).
    Pairs,
    /// Boundary-value lemma, exact pairings plus table consistency.
    Lemma,
    /// Convergence to the pointwise boundary limits.
    Limits,
    /// Entirety of the normalized families and the log kernels.
    Kernels,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Monogenic => "monogenic",
            Suite::Pairs => "pairs",
            Suite::Lemma => "lemma",
            Suite::Limits => "limits",
            Suite::Kernels => "kernels",
        })
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Suite as clap::ValueEnum>::from_str(s, true)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub points_per_half: usize,
    pub seed: u64,
    pub h: f64,
    /// Replaces the suite's main tolerance.
    pub tolerance: Option<f64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { points_per_half: 100, seed: DEFAULT_SEED, h: 1e-4, tolerance: None }
    }
}

pub const MONOGENIC_TOLERANCE: f64 = 1e-5;
pub const HARMONIC_TOLERANCE: f64 = 1e-4;
pub const LEMMA_TOLERANCE: f64 = 1e-10;
pub const ENTIRE_TOLERANCE: f64 = 1e-10;
pub const LIMIT_TOLERANCE: f64 = 1e-3;

pub fn run_suite(suite: Suite, m: usize, opts: &SuiteOptions, pool: &ThreadPool) -> Result<Vec<Check>, AppError> {
    let ctx = AlgebraContext::new(m)?;
    match suite {
        Suite::Monogenic => monogenic(ctx, opts, pool),
        Suite::Pairs => pairs(ctx, opts, pool),
        Suite::Lemma => lemma(ctx, opts, pool),
        Suite::Limits => limits(ctx, opts),
        Suite::Kernels => kernels(ctx, opts, pool),
    }
}

/// Potentials with an interior evaluator that the monogenic suite covers.
pub fn monogenic_ids(m: usize) -> Vec<PotentialId> {
    let mut ids: Vec<PotentialId> = (1..=5).map(|k| PotentialId::c(-k)).collect();
    ids.extend([PotentialId::c(0), PotentialId::c(1)]);
    if m >= 3 {
        ids.push(PotentialId::c(2));
    }
    ids
}

fn monogenic(ctx: AlgebraContext, opts: &SuiteOptions, pool: &ThreadPool) -> Result<Vec<Check>, AppError> {
    let m = ctx.m();
    let tol = opts.tolerance.unwrap_or(MONOGENIC_TOLERANCE);
    let pots = Potentials::new(ctx);
    let pts = shell_battery(m, opts.points_per_half, opts.seed);
    let mut checks = exact_monogenic(ctx, 6);
    let ids = monogenic_ids(m);
    let fd: Vec<Result<Vec<Check>, AppError>> = pool.install(|| {
        ids.par_iter()
            .map(|&id| {
                let rep = fd_dirac_residual(&pots, id, &pts, opts.h)?;
                let mut out = vec![Check::at_most("dirac", format!("D {id}"), rep.max_rel(), tol)
                    .with_detail(format!("upper max {:.2e}, lower max {:.2e}", rep.upper.max_rel, rep.lower.max_rel))];
                for comp in [Component::A, Component::B] {
                    let cid = PotentialId::new(comp, id.k);
                    let rep = fd_laplacian_residual(&pots, cid, &pts, opts.h)?;
                    out.push(Check::at_most("laplacian", format!("Lap {cid}"), rep.max_rel(), HARMONIC_TOLERANCE));
                }
                Ok(out)
            })
            .collect()
    });
    for c in fd {
        checks.extend(c?);
    }
    for k in 0..=2 {
        if pots.check_id(PotentialId::c(k)).is_err() {
            continue;
        }
        let rep = fd_chain_residual(&pots, k, &pts, opts.h)?;
        checks.push(Check::at_most("chain", format!("Dbar C:{k} = C:{}", k - 1), rep.max_rel(), tol));
    }
    Ok(checks)
}

/// `D C_{-k}` reduces to the empty term sum for `k = 1..=depth`.
pub fn exact_monogenic(ctx: AlgebraContext, depth: usize) -> Vec<Check> {
    let chain = DownstreamChain::new(ctx, depth);
    (1..=depth)
        .map(|k| {
            let left = chain.get(k).expect("within depth").apply_cr(false);
            Check::flag("exact", format!("D C:-{k} = 0"), left.is_empty())
                .with_detail(format!("{} terms left", left.len()))
        })
        .collect()
}

/// Jump reports for `n = -3..=3`, in order; `None` where the potential has
/// no evaluator in this dimension.
pub fn jump_reports(
    ctx: AlgebraContext,
    cfg: &QuadratureConfig,
    pool: &ThreadPool,
) -> Result<Vec<(i32, Option<JumpReport>)>, AppError> {
    let pots = Potentials::new(ctx);
    let out: Vec<Result<(i32, Option<JumpReport>), AppError>> = pool.install(|| {
        (-3..=3)
            .into_par_iter()
            .map(|n| {
                let e = representation(ctx, n);
                if pots.check_id(e.potential).is_err() {
                    return Ok((n, None));
                }
                Ok((n, Some(jump_check(&pots, n, cfg)?)))
            })
            .collect()
    });
    out.into_iter().collect()
}

fn pairs(ctx: AlgebraContext, opts: &SuiteOptions, pool: &ThreadPool) -> Result<Vec<Check>, AppError> {
    let tol = opts.tolerance.unwrap_or(JUMP_TOLERANCE);
    let cfg = QuadratureConfig::for_dimension(ctx.m())?;
    let mut checks = Vec::new();
    for (n, rep) in jump_reports(ctx, &cfg, pool)? {
        let Some(rep) = rep else {
            let e = representation(ctx, n);
            checks.push(
                Check::flag("jump", format!("n={n}"), true)
                    .with_detail(format!("skipped: {} has no interior evaluator for m = {}", e.potential, ctx.m())),
            );
            continue;
        };
        for r in &rep.rows {
            checks.push(
                Check::at_most("jump", format!("n={n} {} {}", r.relation, r.phi_id), r.rel_err, tol)
                    .with_detail(rep.applicability.to_string()),
            );
        }
    }
    Ok(checks)
}

fn lemma(ctx: AlgebraContext, opts: &SuiteOptions, pool: &ThreadPool) -> Result<Vec<Check>, AppError> {
    let tol = opts.tolerance.unwrap_or(LEMMA_TOLERANCE);
    let reps: Vec<_> = pool.install(|| (1..=3).into_par_iter().map(|k| lemma_check(ctx, k)).collect());
    let mut checks = Vec::new();
    for rep in reps {
        let rep = rep?;
        let k = rep.k;
        checks.push(Check::at_most("lemma", format!("k={k} (i)-(ii)"), rep.max_error(), tol).with_detail(format!(
            "{} exact pairings",
            rep.pairings.len()
        )));
        let t = &rep.table;
        checks.push(
            Check::flag("lemma-table", format!("k={k} (iii)-(iv)"), t.plus_consistent && t.minus_consistent)
                .with_detail(format!(
                    "a_k = {:+} Dirac^-{} {}, plus {}, minus {}",
                    t.sign,
                    k + 1,
                    t.a_kernel,
                    t.plus_consistent,
                    t.minus_consistent
                )),
        );
    }
    Ok(checks)
}

/// Errors `|eval(id, (+-t, e1)) - limit|` over `ts`.
pub fn limit_errors(pots: &Potentials, id: PotentialId, side: Side, ts: &[f64]) -> Result<Vec<f64>, AppError> {
    let m = pots.context().m();
    let mut x = vec![0.0; m];
    x[0] = 1.0;
    let lim = pots.pointwise_limit(id, &x, side)?;
    ts.iter()
        .map(|&t| {
            let v = pots.eval(id, &Point::new(side.sign() * t, x.clone()))?;
            Ok((&v - &lim).norm())
        })
        .collect()
}

pub const LIMIT_LADDER: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Potentials with a side-dependent pointwise limit checked by the suite.
pub fn limit_ids(m: usize) -> Vec<PotentialId> {
    let mut ids = vec![PotentialId::new(Component::B, 0)];
    if m > 2 {
        ids.push(PotentialId::new(Component::A, 1));
    }
    if m > 3 {
        ids.push(PotentialId::new(Component::B, 2));
    }
    ids
}

fn limits(ctx: AlgebraContext, opts: &SuiteOptions) -> Result<Vec<Check>, AppError> {
    let tol = opts.tolerance.unwrap_or(LIMIT_TOLERANCE);
    let m = ctx.m();
    let pots = Potentials::new(ctx);
    let mut checks = Vec::new();
    let mut x = vec![0.0; m];
    x[0] = 1.0;
    for id in limit_ids(m) {
        for side in [Side::Plus, Side::Minus] {
            let errs = limit_errors(&pots, id, side, &LIMIT_LADDER)?;
            let monotone = errs.windows(2).all(|w| w[1] < w[0]);
            let last = *errs.last().expect("nonempty ladder");
            let mut c = Check::at_most("limit", format!("{id} {side}"), last, tol)
                .with_detail(format!("errors {:.2e} {:.2e} {:.2e}", errs[0], errs[1], errs[2]));
            c.passed &= monotone;
            checks.push(c);
        }
        // the minus-side limit is (-1)^m times the plus-side one exactly where a side factor appears
        let plus = pots.pointwise_limit(id, &x, Side::Plus)?;
        let minus = pots.pointwise_limit(id, &x, Side::Minus)?;
        let parity = if m % 2 == 0 { 1.0 } else { -1.0 };
        let exact = minus == plus.scale(parity);
        let t = LIMIT_LADDER[2];
        let up = pots.eval(id, &Point::new(t, x.clone()))?;
        let down = pots.eval(id, &Point::new(-t, x.clone()))?;
        let sign_ok = up.coeffs().iter().zip(down.coeffs()).all(|(a, b)| {
            (*a == 0.0 && *b == 0.0) || a.signum() * parity == b.signum()
        });
        checks.push(Check::flag("side-factor", format!("{id} (-1)^m"), exact && sign_ok));
    }
    Ok(checks)
}

/// `<T*_l, G>` and `<U*_l, x G>` against their closed forms on
/// `l = -m-4, -m-3.5, ..., 4`; returns the largest error per family.
pub fn entirety_errors(ctx: AlgebraContext) -> Result<(f64, f64), AppError> {
    let m = ctx.m();
    let mf = m as f64;
    let g = GaussPoly::gaussian(ctx);
    let xg = g.mul_xvec();
    let half = sigma(m) / 2.0;
    let (mut et, mut eu) = (0.0f64, 0.0f64);
    let steps = (2.0 * (mf + 8.0)) as usize;
    for i in 0..=steps {
        let lambda = -mf - 4.0 + 0.5 * i as f64;
        let t = make_normalized(ctx, Family::T, lambda).pair(&g)?;
        let u = make_normalized(ctx, Family::U, lambda).pair(&xg)?;
        let tt = Multivector::scalar(ctx, half * PI.powf((lambda + mf) / 2.0));
        let ut = Multivector::scalar(ctx, -half * PI.powf((lambda + mf + 1.0) / 2.0));
        et = et.max((&t - &tt).norm());
        eu = eu.max((&u - &ut).norm());
    }
    Ok((et, eu))
}

/// `<E_2, -Lap phi>` by polar quadrature of `-(1/2pi) ln r (-Lap phi)(x)`.
pub fn fundamental_solution_quadrature(phi: &GaussPoly) -> Result<Multivector, AppError> {
    let ctx = phi.context();
    if ctx.m() != 2 {
        return Err(AppError::Usage("the log-kernel quadrature check is two-dimensional".into()));
    }
    let lap = phi.neg_laplacian();
    let (r, w) = graded_radial_rule(1e-3, 7.0, 24, 0.25);
    let ang = AngularScheme::Circle { n: 32 }.nodes();
    let mut acc = Multivector::zero(ctx);
    for (ri, wi) in r.iter().zip(&w) {
        let k = -ri.ln() / (2.0 * PI) * ri * wi;
        for (d, wa) in &ang {
            acc.axpy(k * wa, &lap.eval(&[ri * d[0], ri * d[1]]));
        }
    }
    Ok(acc)
}

fn kernels(ctx: AlgebraContext, opts: &SuiteOptions, _pool: &ThreadPool) -> Result<Vec<Check>, AppError> {
    let tol = opts.tolerance.unwrap_or(ENTIRE_TOLERANCE);
    let (et, eu) = entirety_errors(ctx)?;
    let mut checks = vec![
        Check::at_most("entire", "<T*, G>", et, tol),
        Check::at_most("entire", "<U*, x G>", eu, tol),
    ];
    if ctx.m() == 2 {
        let e2 = dirac_power_kernel(ctx, -2.0);
        let log = e2.radial.iter().find(|p| p.log_power == 1 && p.exponent == 0.0);
        let c = log.and_then(|p| p.coeff.as_real_scalar()).unwrap_or(f64::NAN);
        let rest = e2.radial.iter().filter(|p| p.log_power != 1).count() + e2.point.len();
        // T*_0 carries pi^{m/2}/Gamma(m/2) = pi
        let p0 = pq_constants(2, 0).p * PI;
        let err = (c - p0).abs().max((c + 0.5 / PI).abs());
        checks.push(
            Check::at_most("log-kernel", "E_2 = -(1/2pi) ln r", if rest == 0 { err } else { f64::INFINITY }, 1e-14)
                .with_detail(format!("ln r coefficient {c:.17e}")),
        );
        for (name, phi) in GaussPoly::battery(ctx).into_iter().take(2) {
            let v = fundamental_solution_quadrature(&phi)?;
            let err = (&v - &phi.value_at_origin()).norm();
            checks.push(Check::at_most("log-kernel", format!("<E_2, -Lap {name}> = {name}(0)"), err, 1e-6));
        }
    }
    Ok(checks)
}

/// Whether the entry of index `n` is realizable in dimension `m`.
pub fn applicability(m: usize, n: i32) -> Result<Applicability, AppError> {
    Ok(representation(AlgebraContext::new(m)?, n).applicability)
}
