use thiserror::Error;

/// Errors raised by the field model.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    /// A cell index lies outside the surface grid.
    #[error("cell (n={n}, m={m}) is outside the {rows}x{cols} surface")]
    IndexOutOfRange {
        /// Row index.
        n: i32,
        /// Column index.
        m: i32,
        /// Grid rows.
        rows: usize,
        /// Grid columns.
        cols: usize,
    },
    /// An angle argument lies outside its domain.
    #[error("angle {angle} rad is outside [{min}, {max}]")]
    AngleOutOfRange {
        /// Offending value.
        angle: f64,
        /// Lower bound.
        min: f64,
        /// Upper bound.
        max: f64,
    },
    /// Two points that must differ coincide.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),
    /// A phase profile does not match the surface it is applied to.
    #[error("profile is {found_rows}x{found_cols} but the surface is {rows}x{cols}")]
    DimensionMismatch {
        /// Surface rows.
        rows: usize,
        /// Surface columns.
        cols: usize,
        /// Profile rows.
        found_rows: usize,
        /// Profile columns.
        found_cols: usize,
    },
    /// A scalar parameter violates its contract.
    #[error("invalid {name}: {reason}")]
    InvalidParameter {
        /// Parameter name.
        name: &'static str,
        /// What is wrong with it.
        reason: &'static str,
    },
    /// More cells are switched on than the surface has.
    #[error("{n_on} cells switched on, but the surface only has {cells}")]
    TooManyCellsOn {
        /// Requested on-state cells.
        n_on: usize,
        /// Cells on the surface.
        cells: usize,
    },
}

/// Crate result alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: &'static str) -> Error {
    Error::InvalidParameter { name, reason }
}
