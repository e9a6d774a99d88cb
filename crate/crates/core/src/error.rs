use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("duplicate equation `{0}`")]
    DuplicateEquation(String),
    #[error("parameter `{param}` of `{equation}` shadows an equation name")]
    ParamShadowsEquation { equation: String, param: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("LTS line {line}: {msg}")]
    Lts { line: usize, msg: String },
    #[error("LTS has no `initial` declaration")]
    MissingInitial,
    #[error("kind error in `{equation}`: {msg}")]
    Kind { equation: String, msg: String },
    #[error("ambiguous kind for `{0}`; add an annotation")]
    AmbiguousKind(String),
    #[error("entry equation `{0}` must have kind o")]
    EntryNotProp(String),
    #[error("formula is not closed: `{0}` is free")]
    NotClosed(String),
    #[error("semantic domain too large ({count} elements)")]
    DomainTooLarge { count: u128 },
    #[error("too many refinement types ({count})")]
    TooManyTypes { count: u128 },
    #[error("unfolding budget exceeded")]
    BudgetExceeded,
    #[error("approximation depth must be positive")]
    NonPositiveDepth,
    #[error("{0}")]
    Precondition(String),
}
