//! Error types shared across the solver.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("operation not supported on this grid kind: {0}")]
    UnsupportedGrid(String),

    #[error("nonpositive temperature: {0} K")]
    NonpositiveTemperature(f64),

    #[error("contour stepping diverged ({0}); reduce the slice length")]
    Divergence(String),

    #[error("spectral truncation insufficient: spectral tail weight {tail:.3e} exceeds {limit:.1e}")]
    TruncationInsufficient { tail: f64, limit: f64 },

    #[error("eigensolver failed to converge")]
    NoConvergence,

    #[error("single-particle partition function underflowed")]
    ZeroPartition,

    #[error("pair partition function vanished (antisymmetric collapse)")]
    ZeroPairPartition,

    #[error("density must be nonnegative")]
    NegativeDensity,

    #[error("occupation list does not fit the spectrum: {0}")]
    OccupationMismatch(String),

    #[error("potential specification invalid on this grid: {0}")]
    SpecOutOfDomain(String),

    #[error("log domain error: propagator diagonal is nonpositive where the density is positive")]
    LogDomain,

    #[error("analysis region is empty or outside the grid")]
    RegionEmpty,

    #[error("wavepacket too close to a non-periodic boundary")]
    PacketNearBoundary,

    #[error("wavepacket reached the grid boundary; absorbing mask exhausted")]
    PacketReachesBoundary,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
