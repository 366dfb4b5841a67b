//! State preparations, scans and the full noisy-experiment model.
//!
//! Ideal scans evaluate the balanced tritter directly on the Gram matrix of
//! the prepared states. [`simulate_counts`] adds the heralded sources,
//! partial purity, noise photons and threshold-detector cascades, and reports
//! click-pattern probabilities per heralded trial.

mod cascade;
mod preparation;
mod scan;
mod simulate;

pub use cascade::{click_distribution, DetectionCascade, Splitter};
pub use preparation::{
    delay_condition, dynamic_phase, prepare, theta_for_phase, Preparation, Recipe, RecipeKind,
};
pub use scan::{
    column_occupation, default_delay_grid, default_phase_grid, delay_preparations, ideal_row,
    ideal_scan, linspace, scan_delays, scan_triad, triad_preparations, ScanMetadata, ScanResult,
    Series, EVENT_COLUMNS,
};
pub use simulate::{
    click_patterns, dip_visibility, simulate_counts, ClickPattern, ExperimentSetup,
    DEFAULT_TRIAL_RATE_HZ, TRUNCATION_WARNING,
};
