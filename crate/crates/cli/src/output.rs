//! JSON document shapes. Complex numbers are serialized as decimal-string
//! pairs with 17 significant digits for bit-stable, cross-language artifacts.

use crate::SCHEMA;
use lawson_core::analysis::{NewtonSolution, TraceProfile};
use lawson_core::monodromy::Monodromy;
use lawson_core::symmetry::SymmetryReport;
use lawson_core::{Complex, Error, Mat2};
use serde::Serialize;

#[derive(Serialize)]
pub struct Cx {
    pub re: String,
    pub im: String,
}

pub fn cx(z: Complex) -> Cx {
    Cx {
        re: format!("{:.16e}", z.re),
        im: format!("{:.16e}", z.im),
    }
}

#[derive(Serialize)]
pub struct MatrixJson {
    pub a11: Cx,
    pub a12: Cx,
    pub a21: Cx,
    pub a22: Cx,
}

pub fn mat_json(m: &Mat2) -> MatrixJson {
    MatrixJson {
        a11: cx(m.a11),
        a12: cx(m.a12),
        a21: cx(m.a21),
        a22: cx(m.a22),
    }
}

pub fn error_json(e: &Error) -> String {
    let doc = serde_json::json!({
        "error": e.code(),
        "detail": e.to_string(),
    });
    serde_json::to_string(&doc).expect("error document serializes")
}

#[derive(Serialize)]
pub struct SpinRow {
    pub class: String,
    pub pullback: String,
    pub fixed: bool,
}

#[derive(Serialize)]
pub struct SpinTableDoc {
    pub schema: &'static str,
    pub rows: Vec<SpinRow>,
}

impl SpinTableDoc {
    pub fn new(rows: Vec<SpinRow>) -> Self {
        SpinTableDoc {
            schema: SCHEMA,
            rows,
        }
    }
}

#[derive(Serialize)]
pub struct ResidueEntry {
    pub point: String,
    pub location: Cx,
    pub matrix: MatrixJson,
}

#[derive(Serialize)]
pub struct ResiduesDoc {
    pub schema: &'static str,
    pub zeta: Cx,
    #[serde(rename = "A")]
    pub a: Cx,
    #[serde(rename = "G")]
    pub g: Cx,
    pub residues: Vec<ResidueEntry>,
    pub sum_defect: f64,
}

impl ResiduesDoc {
    pub fn new(
        zeta: Complex,
        a: Complex,
        g: Complex,
        residues: Vec<ResidueEntry>,
        sum_defect: f64,
    ) -> Self {
        ResiduesDoc {
            schema: SCHEMA,
            zeta: cx(zeta),
            a: cx(a),
            g: cx(g),
            residues,
            sum_defect,
        }
    }
}

#[derive(Serialize)]
pub struct MonodromyDoc {
    pub schema: &'static str,
    #[serde(rename = "loop")]
    pub loop_name: String,
    pub zeta: Cx,
    #[serde(rename = "A")]
    pub a: Cx,
    #[serde(rename = "G")]
    pub g: Cx,
    pub matrix: MatrixJson,
    pub trace: Cx,
    pub det: Cx,
    pub err_estimate: f64,
    pub steps: u64,
}

impl MonodromyDoc {
    pub fn new(loop_name: String, zeta: Complex, a: Complex, g: Complex, m: &Monodromy) -> Self {
        MonodromyDoc {
            schema: SCHEMA,
            loop_name,
            zeta: cx(zeta),
            a: cx(a),
            g: cx(g),
            matrix: mat_json(&m.matrix),
            trace: cx(m.matrix.trace()),
            det: cx(m.matrix.det()),
            err_estimate: m.err_estimate,
            steps: m.steps_taken,
        }
    }
}

#[derive(Serialize)]
pub struct ReportJson {
    pub name: String,
    pub max_defect: f64,
    pub sample_count: usize,
    pub pass: bool,
    pub tolerance: f64,
}

#[derive(Serialize)]
pub struct SymmetryDoc {
    pub schema: &'static str,
    pub zeta: Cx,
    #[serde(rename = "A")]
    pub a: Cx,
    #[serde(rename = "G")]
    pub g: Cx,
    pub reports: Vec<ReportJson>,
}

impl SymmetryDoc {
    pub fn new(zeta: Complex, a: Complex, g: Complex, reports: &[SymmetryReport]) -> Self {
        SymmetryDoc {
            schema: SCHEMA,
            zeta: cx(zeta),
            a: cx(a),
            g: cx(g),
            reports: reports
                .iter()
                .map(|r| ReportJson {
                    name: r.name.clone(),
                    max_defect: r.max_defect,
                    sample_count: r.sample_count,
                    pass: r.pass,
                    tolerance: r.tolerance,
                })
                .collect(),
        }
    }
}

/// One profile as a single NDJSON line with fixed key order.
pub fn profile_json(p: &TraceProfile) -> String {
    #[derive(Serialize)]
    struct ProfileRow<'a> {
        schema: &'static str,
        zeta: Cx,
        #[serde(rename = "A")]
        a: Cx,
        #[serde(rename = "G")]
        g: Cx,
        t1: Cx,
        t2: Cx,
        t3: Cx,
        t4: Cx,
        t12: Cx,
        t13: Cx,
        t14: Cx,
        t123: Cx,
        #[serde(rename = "tA1")]
        ta1: Cx,
        #[serde(rename = "tA2")]
        ta2: Cx,
        #[serde(rename = "tA3")]
        ta3: Cx,
        #[serde(rename = "tA4")]
        ta4: Cx,
        unitarizable: String,
        defect: f64,
        err_estimate: f64,
        error: &'a Option<String>,
    }
    let row = ProfileRow {
        schema: SCHEMA,
        zeta: cx(p.zeta),
        a: cx(p.a),
        g: cx(p.g),
        t1: cx(p.t[0]),
        t2: cx(p.t[1]),
        t3: cx(p.t[2]),
        t4: cx(p.t[3]),
        t12: cx(p.t12),
        t13: cx(p.t13),
        t14: cx(p.t14),
        t123: cx(p.t123),
        ta1: cx(p.ta[0]),
        ta2: cx(p.ta[1]),
        ta3: cx(p.ta[2]),
        ta4: cx(p.ta[3]),
        unitarizable: p.verdict.to_string(),
        defect: p.defect,
        err_estimate: p.err_estimate,
        error: &p.error,
    };
    serde_json::to_string(&row).expect("profile row serializes")
}

#[derive(Serialize)]
pub struct UnitarizeDoc {
    pub schema: &'static str,
    pub zeta: Cx,
    #[serde(rename = "A")]
    pub a: Cx,
    #[serde(rename = "G")]
    pub g: Cx,
    pub residual: f64,
    pub iterations: usize,
    pub t12: Cx,
    pub t14: Cx,
    pub unitarizable: String,
    pub defect: f64,
}

impl UnitarizeDoc {
    pub fn new(zeta: Complex, sol: &NewtonSolution, profile: &TraceProfile) -> Self {
        UnitarizeDoc {
            schema: SCHEMA,
            zeta: cx(zeta),
            a: cx(sol.a),
            g: cx(sol.g),
            residual: sol.residual,
            iterations: sol.iterations,
            t12: cx(profile.t12),
            t14: cx(profile.t14),
            unitarizable: profile.verdict.to_string(),
            defect: profile.defect,
        }
    }
}

#[derive(Serialize)]
pub struct LocalModelDoc {
    pub schema: &'static str,
    pub flatness_defect: f64,
    pub holomorphy_defect: f64,
    pub unitarity_defect: f64,
}
