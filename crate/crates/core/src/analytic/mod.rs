//! Free-fermion description of the solvable line: momentum grids, occupation
//! patterns, dispersions, closed-form spectra and gaps, fermionic modes and
//! the left eigenvectors assembled from them.

mod dispersion;
mod eigenvectors;
mod four_mode;
mod grid;
mod modes;
mod spectrum;

pub use dispersion::{brickwall_mode, FermionDispersion};
pub use eigenvectors::{
    brickwall_left_eigenvector, brickwall_left_eigenvector_with, brickwall_mode_operators, left_residual,
    local_left_eigenvector, local_mode_operators, vacuum_row, BrickwallEigenvector, ModePair, PairingSign,
    BRICKWALL_EIGENVECTOR_CAP, LOCAL_EIGENVECTOR_CAP,
};
pub use four_mode::{four_mode_check, FourModeCheck};
pub use grid::{momentum_grid, MomentumGrid, OccupationPattern};
pub use modes::{fermion_modes, EigenmodeSet, ModeOperator, DENSE_MODE_CAP};
pub use spectrum::{
    brickwall_eigenvalue, brickwall_gap, enumerate_brickwall_spectrum, enumerate_brickwall_with,
    enumerate_local_spectrum, enumerate_local_with, enumerate_spectrum, local_eigenvalue, local_gap,
    AnalyticEigenvalue, AnalyticSpectrum, MAX_ENUMERATION,
};
