//! Reproduction scripts for the worked examples.
//!
//! Each script runs the probes on one built-in space and compares the
//! outcome with the expected one, claim by claim.

mod ex42;
mod scripts;

use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

pub use ex42::{
    ex42_back_top_edge, ex42_edge_distance, ex42_ideal_map, ex42_right_top_edge,
    ex42_vietoris_curve, ex42_vietoris_path_end, EdgePolyline,
};
pub use scripts::{
    ex35_join_check, ex35_meet_jumps, ex35_points, ex36_candidate, ex36_witness_ok,
    ex42_hausdorff_alpha, ex42_meet_check, thm34_claims, Ex42Alpha, LatticeCheck, MeetJump,
};

use crate::geom::{Point, DEFAULT_RESOLUTION, DEFAULT_SEED};
use crate::hyperspace::ProbeError;
use crate::order::OrderError;
use crate::props::PropsError;

#[derive(Debug, Error, PartialEq)]
pub enum ReproError {
    #[error("unknown example `{0}`; expected one of {ids}", ids = EXAMPLES.join(", "))]
    UnknownExample(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Probe(#[from] ProbeError),
    #[error(transparent)]
    Props(#[from] PropsError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("point {0} is outside the solid")]
    OutsideSolid(Point),
    #[error("outside the closed-form regime: {0}")]
    Regime(String),
    #[error("no separating curve exists at this point")]
    NoCurve,
}

/// Example ids in the order `all` runs them.
pub const EXAMPLES: [&str; 6] = ["ex25", "ex35", "ex36", "ex41", "ex42", "thm34"];

#[derive(Clone, Debug, PartialEq)]
pub struct ReproConfig {
    pub resolution: usize,
    pub seed: u64,
    /// Seeded sample points per example.
    pub points: usize,
    /// Directory for CSV dumps of the clouds behind the claims.
    pub plot_dir: Option<PathBuf>,
    /// Use the `u`-analogue curve for the cubic-surface Vietoris claim.
    pub u_branch: bool,
    pub dense_strict: bool,
}

impl Default for ReproConfig {
    fn default() -> Self {
        ReproConfig {
            resolution: DEFAULT_RESOLUTION,
            seed: DEFAULT_SEED,
            points: 5,
            plot_dir: None,
            u_branch: false,
            dense_strict: false,
        }
    }
}

impl ReproConfig {
    /// Resolution for probes in dimension `dim`; 3-D grids are halved.
    pub fn resolution_for(&self, dim: usize) -> usize {
        if dim >= 3 {
            (self.resolution / 2).max(9)
        } else {
            self.resolution
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClaimStatus {
    Matched,
    Mismatched,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub id: String,
    pub description: String,
    pub expected: String,
    pub observed: String,
    pub status: ClaimStatus,
    pub evidence: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproReport {
    pub example: String,
    pub resolution: usize,
    pub seed: u64,
    pub status: ClaimStatus,
    pub claims: Vec<Claim>,
    pub notes: Vec<String>,
    pub plots: Vec<String>,
}

/// Worst status: any mismatch, else any inconclusive claim.
pub fn overall(claims: &[Claim]) -> ClaimStatus {
    if claims.iter().any(|c| c.status == ClaimStatus::Mismatched) {
        ClaimStatus::Mismatched
    } else if claims.iter().any(|c| c.status == ClaimStatus::Inconclusive) || claims.is_empty() {
        ClaimStatus::Inconclusive
    } else {
        ClaimStatus::Matched
    }
}

pub fn run_repro(id: &str, cfg: &ReproConfig) -> Result<ReproReport, ReproError> {
    let mut ctx = scripts::Ctx::new(id, cfg);
    match id {
        "ex25" => scripts::ex25(&mut ctx)?,
        "ex35" => scripts::ex35(&mut ctx)?,
        "ex36" => scripts::ex36(&mut ctx)?,
        "ex41" => scripts::ex41(&mut ctx)?,
        "ex42" => scripts::ex42(&mut ctx)?,
        "thm34" => scripts::thm34(&mut ctx)?,
        _ => return Err(ReproError::UnknownExample(id.into())),
    }
    Ok(ctx.finish())
}

/// Runs every example in order.
pub fn run_all(cfg: &ReproConfig) -> Result<Vec<ReproReport>, ReproError> {
    EXAMPLES.iter().map(|id| run_repro(id, cfg)).collect()
}
