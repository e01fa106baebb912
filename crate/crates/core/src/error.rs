use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("dual is undefined on conditionals: {0}")]
    DualOfConditional(String),
    #[error("variable {0} is not bound")]
    UnboundVariable(String),
    #[error("variable {0} is bound to the open term {1}")]
    OpenBinding(String, String),
    #[error("term is not closed: {0}")]
    OpenTerm(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("term is not closed: {0}")]
    OpenTerm(String),
    #[error("atom {0} is not understood by this valuation")]
    UnknownAtom(String),
    #[error("register {index} out of range (model has {count} registers)")]
    RegisterOutOfRange { index: usize, count: usize },
    #[error("malformed atom {0}")]
    MalformedAtom(String),
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid model spec `{0}`")]
    InvalidSpec(String),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("enumeration bound too large: {0}")]
    BoundTooLarge(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
