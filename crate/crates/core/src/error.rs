use thiserror::Error;

/// Errors raised by the exact algebra layer and the check runner.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    /// Involution machinery is only defined away from characteristic 2.
    #[error("operation requires odd characteristic, got p = 2")]
    CharacteristicTwo,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An enumeration or search would exceed its node/count budget.
    #[error("budget exceeded while {what}: needs {required} but budget is {budget}")]
    BudgetExceeded {
        what: String,
        required: u128,
        budget: u64,
    },

    #[error("unknown check `{0}`")]
    UnknownCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn budget(what: impl Into<String>, required: u128, budget: Budget) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            required,
            budget: budget.limit(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

/// Per-operation ceiling on enumerated objects or search nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Budget(u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(10_000_000);

    pub const fn new(limit: u64) -> Self {
        Budget(limit)
    }

    pub const fn limit(self) -> u64 {
        self.0
    }

    pub fn admits(self, count: u128) -> bool {
        count <= self.0 as u128
    }

    /// Fails with [`Error::BudgetExceeded`] when `count` is over the limit.
    pub fn check(self, what: &str, count: u128) -> Result<()> {
        if self.admits(count) {
            Ok(())
        } else {
            Err(Error::budget(what, count, self))
        }
    }

    /// Reads `SYMPLECTA_BUDGET`, falling back to [`Budget::DEFAULT`].
    pub fn from_env() -> Self {
        std::env::var("SYMPLECTA_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .map(Budget)
            .unwrap_or(Budget::DEFAULT)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

/// Node counter for backtracking searches.
#[derive(Debug)]
pub(crate) struct NodeCounter {
    what: &'static str,
    nodes: u64,
    budget: Budget,
}

impl NodeCounter {
    pub(crate) fn new(what: &'static str, budget: Budget) -> Self {
        NodeCounter {
            what,
            nodes: 0,
            budget,
        }
    }

    pub(crate) fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget.limit() {
            Err(Error::budget(self.what, self.nodes as u128, self.budget))
        } else {
            Ok(())
        }
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }
}
