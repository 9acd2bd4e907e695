//! Sampled Hopf curves of the scalar reduced equation.

use pyragas::eqspec::hopf_curves;
use pyragas::Result;
use serde::Serialize;

use crate::report::{Cell, Csv};

#[derive(Debug, Clone, Serialize)]
pub struct HopfRequest {
    pub lambda: f64,
    pub delay: f64,
    pub branches: Vec<i64>,
    pub samples: usize,
    pub guard: f64,
}

#[derive(Debug, Serialize)]
pub struct HopfRow {
    pub omega: f64,
    pub re_k: f64,
    pub im_k: f64,
}

#[derive(Debug, Serialize)]
pub struct HopfBranchRows {
    pub m: i64,
    pub samples: Vec<HopfRow>,
}

pub fn hopf(req: &HopfRequest) -> Result<(Vec<HopfBranchRows>, Csv)> {
    let family = hopf_curves(req.lambda, req.delay, &req.branches, req.samples, req.guard)?;
    let mut csv = Csv::new(["m", "omega", "re_k", "im_k"]);
    let mut out = Vec::with_capacity(family.branches.len());
    for b in family.branches {
        let samples: Vec<HopfRow> = b.samples.iter().map(|s| HopfRow { omega: s.omega, re_k: s.gain.re, im_k: s.gain.im }).collect();
        for s in &samples {
            csv.row([Cell::Int(b.m), s.omega.into(), s.re_k.into(), s.im_k.into()]);
        }
        out.push(HopfBranchRows { m: b.m, samples });
    }
    Ok((out, csv))
}

/// Comma-separated branch indices; the empty string is the empty list.
pub fn parse_branches(text: &str) -> std::result::Result<Vec<i64>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|e| format!("invalid branch index `{s}`: {e}")))
        .collect()
}
