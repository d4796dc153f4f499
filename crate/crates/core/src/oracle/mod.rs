//! Closed-form eigenvalues for the ball with constant scalar coefficients.

mod ball;
pub mod bessel;
pub mod roots;

pub use ball::{
    ball_resonances, expand, modified_ball_eigenvalues, original_ball_sequences, OracleConfig,
    OracleEigenvalue, OriginalSequences,
};
