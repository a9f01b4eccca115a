use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quaternion has norm {norm}, expected a unit quaternion")]
    NotUnit { norm: f64 },
    #[error("quaternion has real part {real}, expected a traceless element")]
    NotTraceless { real: f64 },
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("generator index {index} out of range for {strands} strands")]
    Index { index: u64, strands: usize },
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("sign tuple has product -1")]
    SignProduct,
    #[error("braid closure has {components} components, expected 2")]
    NotTwoComponents { components: usize },
    #[error("braid has {strands} strands, only 2-strand braids are supported")]
    NotTwoStrands { strands: usize },
    #[error("epsilon {epsilon:?} does not give w2 != 0; for 2-strand braids only (-1, -1) is admissible")]
    UnsupportedEpsilon { epsilon: Vec<i8> },
    #[error("quadruple is not on the pillowcase: |ab - cd| = {residual}")]
    NotOnPillowcase { residual: f64 },
    #[error("configuration is a singular (reducible) point of the pillowcase")]
    SingularPoint,
    #[error("configuration is reducible; the orbit frame drops rank")]
    ReduciblePoint,
    #[error("no complement frame with non-degenerate df image")]
    DegenerateComplement,
    #[error("frame is degenerate: change-of-basis determinant {determinant}")]
    DegenerateFrame { determinant: f64 },
    #[error("vectors do not lie in the span of the reference frame (residual {residual})")]
    NotInSpan { residual: f64 },
    #[error("intersection at theta = {theta} is not transverse (determinant {determinant})")]
    TangencyUnresolved { theta: f64, determinant: f64 },
}
