//! Verification commands behind the `feec4d` binary.

use std::path::PathBuf;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dofs::{build_dofset, check_unisolvence, DofKind, PIVOT_THRESHOLD};
use crate::exterior::{apply_d, exterior_derivative, upsilon, upsilon_inv};
use crate::interp::{commuting_check, ibp_identity_check, random_ibp_fields, IbpIdentity};
use crate::pullback::{dof_invariance_check, functoriality_check, naturality_check};
use crate::report::{Case, Report};
use crate::rng::{random_affine, random_field, seeded};
use crate::spaces::{bubble_basis, space_basis, space_dim, trace_dof_dim, vol_dof_dim, SpaceSpec};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Dims,
    Unisolvence,
    Exactness,
    Commute,
    Traceids,
    Pullback,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dims => "dims",
            Command::Unisolvence => "unisolvence",
            Command::Exactness => "exactness",
            Command::Commute => "commute",
            Command::Traceids => "traceids",
            Command::Pullback => "pullback",
        }
    }

    pub fn default_tol(self) -> f64 {
        match self {
            Command::Dims => 0.0,
            Command::Unisolvence => PIVOT_THRESHOLD,
            Command::Exactness => 1e-12,
            Command::Commute => 1e-10,
            Command::Traceids => 1e-11,
            Command::Pullback => 1e-11,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub k_range: (usize, usize),
    pub s_list: Vec<usize>,
    pub seed: u64,
    pub tol: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub which: Option<IbpIdentity>,
    pub det_negative: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            k_range: (1, 3),
            s_list: (0..=4).collect(),
            seed: 1,
            tol: None,
            format: Format::Text,
            out: None,
            which: None,
            det_negative: false,
        }
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(self.command.default_tol())
    }

    fn ks(&self) -> Vec<usize> {
        (self.k_range.0..=self.k_range.1).collect()
    }

    fn grid(&self) -> Vec<(usize, usize)> {
        self.ks()
            .into_iter()
            .flat_map(|k| self.s_list.iter().map(move |&s| (k, s)))
            .collect()
    }
}

/// `A`, `A..B` (inclusive) or `A..=B`, with `A >= 1`.
pub fn parse_k_range(text: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidArgument(format!("invalid k range {text:?}"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let v = num(text)?;
            (v, v)
        }
    };
    if a == 0 || b < a {
        return Err(Error::InvalidArgument(format!(
            "k range {text:?} must satisfy 1 <= A <= B"
        )));
    }
    Ok((a, b))
}

/// Comma list of form degrees and ranges, e.g. `0..4`, `1,3`, `2`.
pub fn parse_s_list(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("invalid s list {text:?}; degrees are 0..=4"));
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let (a, b) = match part.split_once("..") {
            Some((a, b)) => (a, b.trim_start_matches('=')),
            None => (part, part),
        };
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if b > 4 || a > b {
            return Err(bad());
        }
        for s in a..=b {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Independent stream per case so parallel execution stays reproducible.
fn case_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = seeded(seed);
    r.set_stream(stream);
    r
}

fn stream(k: usize, s: usize) -> u64 {
    (k as u64) * 16 + s as u64
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    match cfg.command {
        Command::Dims => cmd_dims(cfg),
        Command::Unisolvence => cmd_unisolvence(cfg),
        Command::Exactness => cmd_exactness(cfg),
        Command::Commute => cmd_commute(cfg),
        Command::Traceids => cmd_traceids(cfg),
        Command::Pullback => cmd_pullback(cfg),
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    }
}

pub fn cmd_dims(cfg: &RunConfig) -> Result<Report> {
    let cases = cfg
        .grid()
        .par_iter()
        .map(|&(k, s)| -> Result<Case> {
            let spec = SpaceSpec::new(k, s)?;
            let basis = space_basis(spec).len();
            let dofs = build_dofset(k, s)?;
            let vol = dofs.count(DofKind::Volume);
            let trace = dofs.trace_count();
            let mut ok = basis == space_dim(spec)
                && trace == trace_dof_dim(spec)
                && vol == vol_dof_dim(spec);
            let mut case = Case::new(Some(k), Some(s))
                .metric("space_dim", space_dim(spec))
                .metric("basis_count", basis)
                .metric("trace_dim", trace_dof_dim(spec))
                .metric("trace_dofs", trace)
                .metric("vol_dim", vol_dof_dim(spec))
                .metric("vol_dofs", vol);
            if s < 4 {
                let bubbles = bubble_basis(spec)?.len();
                ok &= bubbles == vol_dof_dim(spec);
                case = case.metric("bubble_count", bubbles);
            }
            Ok(case.passed(ok))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new("dims", cfg.seed, cfg.tol(), cases))
}

pub fn cmd_unisolvence(cfg: &RunConfig) -> Result<Report> {
    let tol = cfg.tol();
    let cases = cfg
        .grid()
        .par_iter()
        .map(|&(k, s)| -> Result<Case> {
            let r = check_unisolvence(k, s)?;
            let counts_ok = r.counts.iter().all(|c| c.count == c.expected);
            let mut case = Case::new(Some(k), Some(s))
                .metric("size", r.size)
                .metric("pivot_ratio", r.pivot_ratio);
            for c in r.counts.iter().filter(|c| c.expected > 0 || c.count > 0) {
                case = case.metric(&format!("dofs_{}", c.kind.name()), c.count);
            }
            Ok(case
                .metric("counts_match", counts_ok)
                .passed(counts_ok && r.pivot_ratio > tol))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new("unisolvence", cfg.seed, tol, cases))
}

/// Proxy identity and `d o d = 0` residuals over 20 random forms of
/// per-axis degree 3, relative to the size of `d w`.
pub fn exactness_case(s: usize, seed: u64, tol: f64) -> Result<Case> {
    if s > 3 {
        return Ok(Case::new(None, Some(s))
            .metric("note", "no derivative on 4-forms")
            .passed(true));
    }
    let mut rng = case_rng(seed, stream(0, s));
    let (mut proxy, mut dd, mut dd_oracle) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let f = random_field(&mut rng, s, 3);
        let w = upsilon_inv(&f);
        let dw = exterior_derivative(&w)?;
        let df = apply_d(&f)?;
        let scale = df.max_abs_coeff().max(1.0);
        proxy = proxy.max(upsilon(&dw).sub(&df).max_abs_coeff() / scale);
        if s < 3 {
            dd = dd.max(apply_d(&df)?.max_abs_coeff() / scale);
            let ddw = exterior_derivative(&dw)?;
            dd_oracle = dd_oracle.max(upsilon(&ddw).max_abs_coeff() / scale);
        }
    }
    let worst = proxy.max(dd).max(dd_oracle);
    Ok(Case::new(None, Some(s))
        .metric("proxy_residual", proxy)
        .metric("dd_residual", dd)
        .metric("dd_oracle_residual", dd_oracle)
        .passed(worst < tol))
}

pub fn cmd_exactness(cfg: &RunConfig) -> Result<Report> {
    let tol = cfg.tol();
    let cases = cfg
        .s_list
        .iter()
        .map(|&s| exactness_case(s, cfg.seed, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new("exactness", cfg.seed, tol, cases))
}

/// Ten random inputs of per-axis degree `k + 1`.
pub fn commute_case(k: usize, s: usize, seed: u64, tol: f64) -> Result<Case> {
    if s > 3 {
        return Ok(Case::new(Some(k), Some(s))
            .metric("note", "skipped: no derivative on 4-forms")
            .passed(true));
    }
    let mut rng = case_rng(seed, stream(k, s));
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let p = random_field(&mut rng, s, k + 1);
        let r = commuting_check(k, s, &p)?;
        worst = worst.max(r.residual / r.scale);
    }
    Ok(Case::new(Some(k), Some(s))
        .metric("trials", 10)
        .metric("max_residual", worst)
        .passed(worst < tol))
}

pub fn cmd_commute(cfg: &RunConfig) -> Result<Report> {
    let tol = cfg.tol();
    let cases = cfg
        .grid()
        .par_iter()
        .map(|&(k, s)| commute_case(k, s, cfg.seed, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new("commute", cfg.seed, tol, cases))
}

/// Ten random field pairs of per-axis degree 3.
pub fn traceid_case(which: IbpIdentity, seed: u64, tol: f64) -> Result<Case> {
    let idx = IbpIdentity::ALL.iter().position(|&w| w == which).unwrap();
    let mut rng = case_rng(seed, 1000 + idx as u64);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let (a, b) = random_ibp_fields(which, &mut rng, 3);
        let r = ibp_identity_check(which, &a, &b)?;
        worst = worst.max(r.residual / r.scale);
    }
    Ok(Case::new(None, None)
        .metric("which", which.tag())
        .metric("trials", 10)
        .metric("max_residual", worst)
        .passed(worst < tol))
}

pub fn cmd_traceids(cfg: &RunConfig) -> Result<Report> {
    let tol = cfg.tol();
    let which: Vec<IbpIdentity> = match cfg.which {
        Some(w) => vec![w],
        None => IbpIdentity::ALL.to_vec(),
    };
    let cases = which
        .par_iter()
        .map(|&w| traceid_case(w, cfg.seed, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new("traceids", cfg.seed, tol, cases))
}

/// Naturality and functoriality over 20 random affine maps, plus DOF
/// invariance over 3 of them.
pub fn pullback_case(k: usize, s: usize, seed: u64, tol: f64, det_negative: bool) -> Result<Case> {
    let mut rng = case_rng(seed, stream(k, s) + if det_negative { 500 } else { 0 });
    let (mut nat, mut func, mut dofs) = (0.0f64, 0.0f64, 0.0f64);
    let mut flagged = 0usize;
    for trial in 0..20 {
        let phi = random_affine(&mut rng, det_negative);
        let psi = random_affine(&mut rng, det_negative);
        let f = random_field(&mut rng, s, k);
        if s < 4 {
            nat = nat.max(naturality_check(&f, &phi, &mut rng)?);
        }
        func = func.max(functoriality_check(&f, &phi, &psi, &mut rng)?);
        if trial < 3 {
            let r = dof_invariance_check(k, s, &phi, &mut rng, tol)?;
            dofs = dofs.max(r.max_discrepancy);
            flagged += r.flagged as usize;
        }
    }
    let worst = nat.max(func).max(dofs);
    Ok(Case::new(Some(k), Some(s))
        .metric("naturality", nat)
        .metric("functoriality", func)
        .metric("dof_invariance", dofs)
        .metric("flagged_negative_det", flagged)
        .passed(worst < tol))
}

pub fn cmd_pullback(cfg: &RunConfig) -> Result<Report> {
    let tol = cfg.tol();
    let cases = cfg
        .grid()
        .par_iter()
        .map(|&(k, s)| pullback_case(k, s, cfg.seed, tol, cfg.det_negative))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new("pullback", cfg.seed, tol, cases))
}
