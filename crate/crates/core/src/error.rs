use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("precedence graph contains a cycle through jobs {0:?}")]
    CycleDetected(Vec<usize>),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("schedule job set does not match the instance: {0}")]
    JobSetMismatch(String),
    #[error("machine {machine} out of range for job {job}")]
    MachineOutOfRange { job: usize, machine: usize },
    #[error("schedule is empty")]
    EmptySchedule,
    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),
    #[error("input schedule is infeasible: {0}")]
    InfeasibleInput(String),
    #[error("jobs {first} and {second} of machine {machine} are not co-located")]
    CoLocationViolated {
        machine: usize,
        first: usize,
        second: usize,
    },
    #[error("makespan {makespan} is not below the co-location delay {c_infinity}")]
    MakespanTooLarge { makespan: String, c_infinity: u64 },
    #[error("job {0} does not have unit length")]
    NonUnitLengths(usize),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("more than the allowed fraction of job {0}'s copies ran off their home machine group")]
    MisplacedFractionExceeded(usize),
    #[error("fractional schedule property violated: {0}")]
    PropertyViolated(String),
    #[error("iteration budget of {0} steps exceeded")]
    IterationBudgetExceeded(usize),
    #[error("machine {machine} has more than two jobs in slot {slot}")]
    TooManyJobsPerSlot { machine: usize, slot: usize },
    #[error("gamma * horizon exceeds 1/(10n): {0}")]
    PreconditionGamma(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("n = {n} is not divisible by Q = {q}")]
    DivisibilityError { n: usize, q: usize },
    #[error("integer overflow while computing {0}")]
    Overflow(String),
    #[error("instance too large to materialize: {0}")]
    TooLarge(String),
    #[error("wrong instance kind: expected {expected}, found {found}")]
    WrongKind { expected: String, found: String },
    #[error("format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
