use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "eigensolver failed to converge for n={n}, m={m}, seed={seed}, index={index} (lapack info {info})"
    )]
    EigenSolve {
        n: usize,
        m: usize,
        seed: u64,
        index: u64,
        info: i32,
    },

    #[error("lambda0={lambda0} is not strictly inside the bulk support ({lo}, {hi})")]
    OutsideBulk { lambda0: f64, lo: f64, hi: f64 },

    #[error("degenerate lower edge: c = 1 puts lambda_- at 0 and the edge scale diverges")]
    DegenerateEdge,

    #[error("scaling parameters within a block are too close (gap {gap:e} < {min_gap:e}); separate the points")]
    IllConditionedXis { gap: f64, min_gap: f64 },

    #[error("airy argument {x} outside supported range [{lo}, {hi}]")]
    AiryRange { x: f64, lo: f64, hi: f64 },

    #[error("normalizer estimate is not positive (sign {sign}); increase the sample count")]
    DegenerateNormalizer { sign: i8 },

    #[error("all sampled values were zero; estimate is degenerate")]
    DegenerateEstimate,

    #[error("operation requires {what}")]
    Unsupported { what: String },
}

pub type Result<T> = std::result::Result<T, Error>;
