//! Dense reference spectra, spectrum matching and `(e, g)` gap scans.

mod dense;
mod matching;
mod scan;

pub use dense::{
    dense_eigenvalues, moment_spectrum, subleading_modulus, third_modulus, NumericSpectrum, DENSE_DIM_CAP,
};
pub use matching::{match_spectra, MatchReport, MatchedPair};
pub use scan::{
    gap_at, scan_grid, scan_records_to_csv, slope_sign_changes, solvable_line_scan, solvable_line_to_csv,
    GapScanRecord, ScanRange, SolvableLinePoint, MAX_SCAN_RESOLUTION, MAX_SCAN_SITES,
};
