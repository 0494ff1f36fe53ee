use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("infeasible CRC allocation: total {total} < {partitions} partitions x floor {floor}")]
    InfeasibleCrcAllocation {
        total: usize,
        partitions: usize,
        floor: usize,
    },

    #[error("frame cap of {max_frames} reached after {events} first-error events (wanted {wanted})")]
    FrameCapReached {
        max_frames: u64,
        events: u64,
        wanted: u64,
    },

    #[error("malformed file {path}: {reason}")]
    Malformed { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
