//! Hidden-system protocol: design or take a plan, excite once per column,
//! identify, and fall back to a counterexample when the plan is deficient.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::adversary::{counterexample, AdversaryError, CounterexamplePair};
use crate::identify::{gain_from_data, identify, Gain, Identification, IdentifyError};
use crate::properties::{minimum_subspace, Dims, PropertyError, PropertySpec, SystemPair};
use crate::richness::{design_minimum_input, Dataset, InputSection};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Plan {
    /// Use the minimum design for the property.
    Designed,
    Explicit(InputSection),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub dims: Dims,
    pub hidden: SystemPair,
    pub property: PropertySpec,
    pub plan: Plan,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    HiddenShape { expected: Dims, found: Dims },
    PlanShape { expected: Dims, found: Dims },
    Property(PropertyError),
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::HiddenShape { expected, found } => write!(
                f,
                "hidden system has n = {}, m = {}; scenario declares n = {}, m = {}",
                found.n, found.m, expected.n, expected.m
            ),
            ScenarioError::PlanShape { expected, found } => write!(
                f,
                "plan has n = {}, m = {}; scenario declares n = {}, m = {}",
                found.n, found.m, expected.n, expected.m
            ),
            ScenarioError::Property(e) => write!(f, "{e}"),
        }
    }
}

impl From<PropertyError> for ScenarioError {
    fn from(e: PropertyError) -> Self {
        ScenarioError::Property(e)
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.hidden.dims() != self.dims {
            return Err(ScenarioError::HiddenShape { expected: self.dims, found: self.hidden.dims() });
        }
        if let Plan::Explicit(s) = &self.plan {
            if s.dims() != self.dims {
                return Err(ScenarioError::PlanShape { expected: self.dims, found: s.dims() });
            }
        }
        self.property.validate(self.dims)?;
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub dataset: Dataset,
    pub outcome: Result<Identification, IdentifyError>,
    /// Excitations actually applied.
    pub k_used: usize,
    /// `n + m`, what full model identification needs.
    pub k_model_based: usize,
    /// Present when the data has `k = n` and invertible `X₋`.
    pub gain: Option<Gain>,
    /// Present when the plan was not sufficiently rich.
    pub counterexample: Option<Result<CounterexamplePair, AdversaryError>>,
}

/// One-step responses `X₊ = A·X₋ + B·U₋`, column by column.
pub fn excite(hidden: &SystemPair, s: &InputSection) -> Dataset {
    let x_plus = hidden.augmented().mul(&s.stacked());
    Dataset::new(s.clone(), x_plus).expect("hidden system conforms to the section")
}

pub fn run(sc: &Scenario) -> Result<RunReport, ScenarioError> {
    sc.validate()?;
    let section = match &sc.plan {
        Plan::Designed => design_minimum_input(&sc.property, sc.dims)?,
        Plan::Explicit(s) => s.clone(),
    };
    let dataset = excite(&sc.hidden, &section);
    let outcome = identify(&dataset, &sc.property);
    let counterexample = match &outcome {
        Err(IdentifyError::NotSufficientlyRich { .. }) => Some(counterexample(&section, &sc.property, sc.seed)),
        _ => None,
    };
    Ok(RunReport {
        gain: gain_from_data(&dataset).ok(),
        k_used: section.k(),
        k_model_based: sc.dims.total(),
        dataset,
        outcome,
        counterexample,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EfficiencyRow {
    pub property: String,
    pub n: usize,
    pub m: usize,
    pub dim_lp: usize,
    pub model_based: usize,
    /// `(n + m − dim L_P) / (n + m)`
    pub savings: f64,
}

/// Minimum excitation count per scenario next to the `n + m` of full identification.
pub fn report_efficiency(batch: &[Scenario]) -> Result<Vec<EfficiencyRow>, ScenarioError> {
    batch
        .iter()
        .map(|sc| {
            let dim_lp = minimum_subspace(&sc.property, sc.dims)?.dim();
            let total = sc.dims.total();
            Ok(EfficiencyRow {
                property: sc.property.name().into(),
                n: sc.dims.n,
                m: sc.dims.m,
                dim_lp,
                model_based: total,
                savings: (total - dim_lp) as f64 / total as f64,
            })
        })
        .collect()
}
