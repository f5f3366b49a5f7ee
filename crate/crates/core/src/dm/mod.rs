//! Steady-state density-matrix engine for multilevel atoms.
//!
//! A [`LevelScheme`] lists ground and excited sublevels with their dipole
//! couplings; [`build_system`] turns it and a [`Drive`] into the real
//! linear system for the steady state, [`steady_state`] solves it and
//! [`extract_response`] reads absorption, rotation, phase shift and
//! ellipticity change off the induced polarization. [`response`] takes the
//! small-ellipticity limit that defines the self-rotation parameter g, and
//! [`doppler_average`] folds in the thermal velocity distribution.

mod doppler;
mod liouville;
mod response;
mod scheme;

pub use doppler::{doppler_average, gauss_hermite, DopplerAverage, DopplerOptions, GaussHermite, DOPPLER_ORDER, DOPPLER_TOLERANCE, MAX_DOPPLER_ORDER};
pub use liouville::{build_system, steady_state, DensityMatrix, Drive, SteadyStateSystem};
pub use response::{extract_response, local_response, local_response_at, probe_limit, probe_search, response, DmResponse, LocalResponse, EPS_PROBE, MAX_PROBE_HALVINGS};
pub use scheme::{Coupling, Level, LevelScheme, Manifold};
