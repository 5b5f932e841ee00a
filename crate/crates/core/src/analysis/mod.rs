//! Independent charge measurements: azimuthal spectrum, direct winding of a
//! phase map, and fork detection on interferograms.

pub mod fork;
pub mod fringe;
pub mod spectrum;
pub mod winding;

pub use fork::{detect_fork, ForkReport};
pub use fringe::{demodulate, fringe_demodulate, Demodulated};
pub use spectrum::{dominant_charge, oam_spectrum, OAMSpectrum, AZIMUTHAL_SAMPLES};
pub use winding::{plaquette_residues, winding_number};
