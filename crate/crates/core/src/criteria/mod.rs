//! Properness and cubulation diagnostics over a finite wallspace.

mod axis;
mod induce;
mod profile;
mod select;

use thiserror::Error;

use crate::dual::DualError;
use crate::group::GroupError;
use crate::wallspace::WallError;

pub use axis::{axis_separation, is_infinite_order, AxisOptions, AxisReport, AxisWitness};
pub use induce::{induce_wallspace, InducedWall, InducedWallspace};
pub use profile::{linear_separation_profile, ProfileRow, SeparationProfile};
pub use select::{
    conjugacy_representatives, reverify_selection, select_walls, selection_stability,
    CoverageRow, CoverageStatus, SelectOptions, SelectedWall, SelectionPhase, SelectionResult,
    Stability,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CriteriaError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Wall(#[from] WallError),
    #[error(transparent)]
    Dual(#[from] DualError),
    #[error("scale error: {message} (minimal radius {minimal_radius})")]
    Scale { message: String, minimal_radius: u32 },
    #[error("invalid input: {0}")]
    Input(String),
}
