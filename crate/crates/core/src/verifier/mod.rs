//! Named desk-scale checks with budgets, seeds and JSON reports.

mod checks;
pub mod inducing;
pub mod report;

use std::time::Instant;

use crate::error::{Budget, Error, Result};

use checks::{Context, Outcome};
pub use inducing::{find_inducing_element, reconstruct_inducing_element, InducedTable};
pub use report::{
    CountedQuantity, Counterexample, ExactnessClaim, MapProperty, Mode, Params, Report, Rows, Side,
    Status,
};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 42;

/// A request to run one registered check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckSpec {
    pub name: String,
    pub params: Params,
    pub seed: u64,
    pub budget: Budget,
}

impl CheckSpec {
    pub fn new(name: impl Into<String>) -> Self {
        CheckSpec {
            name: name.into(),
            params: Params::default(),
            seed: DEFAULT_SEED,
            budget: Budget::DEFAULT,
        }
    }

    pub fn with_params(mut self, params: Params) -> Self {
        self.params = params;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }
}

type Runner = fn(&Context) -> Result<Outcome>;

/// A registry entry.
pub struct CheckInfo {
    pub name: &'static str,
    pub summary: &'static str,
    /// Whether the check accepts `mode = sampled` for a quantifier it
    /// otherwise sweeps exhaustively.
    pub samplable: bool,
    run: Runner,
}

const REGISTRY: &[CheckInfo] = &[
    CheckInfo {
        name: "enumeration",
        summary: "|H_1| and base-subset counts against closed-form and recursive identities",
        samplable: false,
        run: checks::enumeration,
    },
    CheckInfo {
        name: "fact1",
        summary: "maximal commuting sets of involutions are exactly the base subsets",
        samplable: false,
        run: checks::fact1,
    },
    CheckInfo {
        name: "fact2",
        summary: "p_k carries base subsets of level k onto level n-k and intertwines induced maps",
        samplable: false,
        run: checks::fact2,
    },
    CheckInfo {
        name: "perp_iff_base",
        summary: "two hyperbolic lines are orthogonal iff a base subset contains both",
        samplable: false,
        run: checks::perp_iff_base,
    },
    CheckInfo {
        name: "example1",
        summary: "flips preserve base subsets and are not induced for nonempty X",
        samplable: false,
        run: checks::example1,
    },
    CheckInfo {
        name: "thm2_flip_negative",
        summary: "flips fix every perp pair, respect perp, and are not induced",
        samplable: false,
        run: checks::thm2_flip_negative,
    },
    CheckInfo {
        name: "lemma1",
        summary: "maximal inexact subsets of B_k are the incidence sets B_k(alpha)",
        samplable: false,
        run: checks::lemma1,
    },
    CheckInfo {
        name: "lemma2",
        summary: "bijections preserving maximal inexact subsets of B_k permute incidence sets",
        samplable: true,
        run: checks::lemma2,
    },
    CheckInfo {
        name: "lemma3",
        summary: "subsets deviating from the source at one index at most are exact",
        samplable: false,
        run: checks::lemma3,
    },
    CheckInfo {
        name: "lemma4",
        summary: "maximal inexact subsets of S_k are the incidence sets S_k(M)",
        samplable: false,
        run: checks::lemma4,
    },
    CheckInfo {
        name: "lemma5",
        summary: "bijections preserving maximal inexact subsets of S_k permute incidence sets",
        samplable: true,
        run: checks::lemma5,
    },
    CheckInfo {
        name: "lemma7",
        summary:
            "large subspaces of a non-degenerate M contain 1, 2 or 3 orthogonal hyperbolic lines",
        samplable: false,
        run: checks::lemma7,
    },
    CheckInfo {
        name: "lemma9_for_maps",
        summary: "induced maps, flips and their p_k-conjugates respect perp",
        samplable: false,
        run: checks::lemma9_for_maps,
    },
    CheckInfo {
        name: "thm1_positive",
        summary: "induced maps preserve base subsets and admit a reconstructed witness",
        samplable: false,
        run: checks::thm1_positive,
    },
    CheckInfo {
        name: "thm1_explore",
        summary:
            "searches perturbed induced maps for base-subset-preserving maps that are not induced",
        samplable: false,
        run: checks::thm1_explore,
    },
];

pub fn registry() -> &'static [CheckInfo] {
    REGISTRY
}

pub fn lookup(name: &str) -> Result<&'static CheckInfo> {
    REGISTRY
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownCheck(name.to_string()))
}

/// Runs one check. Budget exhaustion yields a `refused` report; invalid
/// names or parameters are errors.
pub fn run_check(spec: &CheckSpec) -> Result<Report> {
    let info = lookup(&spec.name)?;
    if spec.params.mode == Some(Mode::Sampled) && !info.samplable {
        return Err(Error::InvalidArgument(format!(
            "{} has no sampled mode",
            info.name
        )));
    }
    let ctx = Context {
        params: spec.params.clone(),
        seed: spec.seed,
        budget: spec.budget,
    };
    let start = Instant::now();
    let outcome = match (info.run)(&ctx) {
        Ok(outcome) => outcome,
        Err(e @ Error::BudgetExceeded { .. }) => {
            let mut refused = Outcome::default();
            refused.notes.push(e.to_string());
            return Ok(report(spec, refused, Status::Refused, start));
        }
        Err(e) => return Err(e),
    };
    let status = outcome.status();
    Ok(report(spec, outcome, status, start))
}

fn report(spec: &CheckSpec, outcome: Outcome, status: Status, start: Instant) -> Report {
    Report {
        check: spec.name.clone(),
        params: outcome.params.unwrap_or_else(|| spec.params.clone()),
        status,
        counts: outcome.counts,
        counterexample: outcome.counterexample,
        seed: spec.seed,
        budget: spec.budget.limit(),
        runtime_ms: start.elapsed().as_millis() as u64,
        version: env!("CARGO_PKG_VERSION").to_string(),
        notes: outcome.notes,
    }
}

/// The default suite: every registered check at its desk parameters, plus
/// a sampled Lemma 5 run at n = 5 where the plus-variant applies.
pub fn default_suite() -> Vec<CheckSpec> {
    let mut specs: Vec<CheckSpec> = REGISTRY.iter().map(|c| CheckSpec::new(c.name)).collect();
    specs.push(CheckSpec::new("lemma5").with_params(Params {
        n: Some(5),
        mode: Some(Mode::Sampled),
        ..Params::default()
    }));
    specs
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub reports: Vec<Report>,
}

impl SuiteOutcome {
    /// 1 if any check failed, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.reports.iter().any(|r| r.status == Status::Fail) {
            1
        } else {
            0
        }
    }

    pub fn refused(&self) -> impl Iterator<Item = &Report> {
        self.reports.iter().filter(|r| r.status == Status::Refused)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.reports).expect("reports serialize")
    }
}

/// Runs `names` (or the default suite) with a shared seed and budget. The
/// checks run on parallel threads; reports keep the requested order.
pub fn run_suite(names: Option<&[String]>, seed: u64, budget: Budget) -> Result<SuiteOutcome> {
    let specs: Vec<CheckSpec> = match names {
        None => default_suite(),
        Some(names) => names
            .iter()
            .map(|n| lookup(n).map(|_| CheckSpec::new(n.clone())))
            .collect::<Result<_>>()?,
    };
    let specs: Vec<CheckSpec> = specs
        .into_iter()
        .map(|s| s.with_seed(seed).with_budget(budget))
        .collect();
    let results: Vec<Result<Report>> = std::thread::scope(|scope| {
        let handles: Vec<_> = specs
            .iter()
            .map(|s| scope.spawn(move || run_check(s)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check thread panicked"))
            .collect()
    });
    Ok(SuiteOutcome {
        reports: results.into_iter().collect::<Result<_>>()?,
    })
}
