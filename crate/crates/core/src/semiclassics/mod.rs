//! Semiclassical quantization on the Kummer shape.

mod action;
mod landscape;
mod period;
mod quantize;

pub use action::{action_area, angle_q, phase_correction, total_action, tunneling_integral, ActionSet, AngleQ};
pub use landscape::{turning_points, Branch, Region, TurningPoint, TurningPointSet};
pub use period::{bin_average_density, dos_curve, period_T, saddle_energies, DosCurve, DosPoint, SADDLE_EXCLUSION};
pub use quantize::{quantize_double_well, quantize_single_well, Regime, SemiclassicalLevel, SemiclassicalSpectrum};
