//! Measured quantities: densities, currents, arrival times, entropy, visibility, transmission,
//! dwell times, expectation values and the moment equations' closed forms.

mod arrival;
mod current;
mod density;
mod ehrenfest;
mod entropy;
mod expectation;
mod scattering;
mod series;
mod visibility;

pub use arrival::{arrival_statistics, ArrivalOptions};
pub use current::{current_density, current_profile, current_series};
pub use density::{
    kernel_position_values, position_density_eigenbasis, position_density_momentum, position_profile_eigenbasis,
    position_profile_momentum, DensityProfile,
};
pub use ehrenfest::{ehrenfest_closed_forms, projectile_peak_height, EhrenfestKind};
pub use entropy::{entropy_series, entropy_series_exact, linear_entropy};
pub use expectation::{expectation, expectation_series};
pub use scattering::{
    dwell_statistics, monochromatic_dwell_times, region_overlap_matrix, stationary_transmission, transmission_cutoff,
    transmission_series, DwellStats,
};
pub use series::{ArrivalStats, TimeSeries};
pub use visibility::{cat_component_densities, visibility, visibility_at, CatComponents};
