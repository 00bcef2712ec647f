//! Serialized report shapes. Every JSON payload carries `"schema": 1`.

use monopot_core::clifford::blade_label;
use monopot_core::hyperfunctions::{JumpReport, JumpRow};
use monopot_core::{Multivector, Point};
use serde::Serialize;

pub const SCHEMA: u32 = 1;

/// One blade coefficient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Blade {
    pub blade: String,
    pub value: f64,
}

/// All blades in ascending bitmask order.
pub fn blades(x: &Multivector) -> Vec<Blade> {
    x.coeffs().iter().enumerate().map(|(b, &value)| Blade { blade: blade_label(b), value }).collect()
}

pub fn blade_labels(m: usize) -> Vec<String> {
    (0..1usize << (m + 1)).map(blade_label).collect()
}

pub fn point_coords(p: &Point) -> Vec<f64> {
    std::iter::once(p.x0).chain(p.xvec.iter().copied()).collect()
}

#[derive(Debug, Serialize)]
pub struct EvalRow {
    pub point: Vec<f64>,
    pub blades: Vec<Blade>,
}

#[derive(Debug, Serialize)]
pub struct EvalOutput {
    pub schema: u32,
    pub command: &'static str,
    pub m: usize,
    pub potential: String,
    pub results: Vec<EvalRow>,
}

#[derive(Debug, Serialize)]
pub struct TableRow {
    pub series: String,
    pub k: i32,
    pub side: String,
    pub distribution: String,
}

#[derive(Debug, Serialize)]
pub struct TableOutput {
    pub schema: u32,
    pub command: &'static str,
    pub m: usize,
    pub rows: Vec<TableRow>,
}

/// A single tolerance check of a verification suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub group: String,
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn at_most(group: &str, name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { group: group.into(), name: name.into(), value, tolerance, passed: value <= tolerance, detail: None }
    }

    pub fn flag(group: &str, name: impl Into<String>, ok: bool) -> Self {
        Self {
            group: group.into(),
            name: name.into(),
            value: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed: ok,
            detail: None,
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyOutput {
    pub schema: u32,
    pub command: &'static str,
    pub m: usize,
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Debug, Serialize)]
pub struct JumpRowOutput {
    pub n: i32,
    pub m: usize,
    pub relation: String,
    pub phi_id: String,
    pub jump_value: Vec<Blade>,
    pub target_value: Vec<Blade>,
    pub rel_err: f64,
    pub applicable: bool,
    pub ladder: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct JumpOutput {
    pub schema: u32,
    pub command: &'static str,
    pub m: usize,
    pub n: i32,
    pub applicable: bool,
    pub applicability: String,
    pub tolerance: f64,
    pub passed: bool,
    pub ladder: Vec<f64>,
    pub rows: Vec<JumpRowOutput>,
}

fn jump_row(rep: &JumpReport, r: &JumpRow) -> JumpRowOutput {
    JumpRowOutput {
        n: rep.n,
        m: rep.m,
        relation: r.relation.to_string(),
        phi_id: r.phi_id.clone(),
        jump_value: blades(&r.jump_value),
        target_value: blades(&r.target_value),
        rel_err: r.rel_err,
        applicable: rep.applicable(),
        ladder: rep.ladder.clone(),
    }
}

impl JumpOutput {
    pub fn new(rep: &JumpReport, tolerance: f64) -> Self {
        Self {
            schema: SCHEMA,
            command: "jump",
            m: rep.m,
            n: rep.n,
            applicable: rep.applicable(),
            applicability: rep.applicability.to_string(),
            tolerance,
            passed: rep.passes(tolerance),
            ladder: rep.ladder.clone(),
            rows: rep.rows.iter().map(|r| jump_row(rep, r)).collect(),
        }
    }
}
