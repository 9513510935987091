//! TOML documents for properties, input sections, datasets and scenarios.
//!
//! Matrices are stored as literals (`"1, 1/2; 0, 1"`) and scalars as exact
//! rational strings, so every document round-trips without loss.

use std::fs;
use std::path::{Path, PathBuf};

use propid_core::adversary::CounterexamplePair;
use propid_core::harness::{Plan, Scenario};
use propid_core::numerics::{parse_rational, Mat, Rational};
use propid_core::properties::{BoundedSet, Dims, LinearConstraint, PropertySpec, SetExpr, StructureMode, SystemPair};
use propid_core::richness::{Dataset, InputSection};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::Failure;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeDoc {
    Intersection,
    Expression,
}

/// A bounded set as `[lo, hi]` pieces, or a single point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetDoc {
    Point(String),
    Pieces(Vec<[String; 2]>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintDoc {
    /// Row literal of length `n(n+m)`, indexed like `vec([A, B])`.
    pub h: String,
    pub set: SetDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PropertyDoc {
    Identifiability,
    Stabilizability,
    Controllability,
    Sparsity {
        #[serde(default)]
        zeros_a: Vec<[usize; 2]>,
        #[serde(default)]
        zeros_b: Vec<[usize; 2]>,
    },
    Linear {
        mode: ModeDoc,
        /// Required in expression mode; intersection mode defaults to `1 & 2 & …`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expr: Option<String>,
        constraints: Vec<ConstraintDoc>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyFile {
    pub n: usize,
    pub m: usize,
    #[serde(flatten)]
    pub property: PropertyDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputFile {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    #[serde(rename = "X")]
    pub x: String,
    #[serde(rename = "U")]
    pub u: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataFile {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    #[serde(rename = "X")]
    pub x: String,
    #[serde(rename = "U")]
    pub u: String,
    #[serde(rename = "X_plus")]
    pub x_plus: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDoc {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
}

/// Either a path to a property file (relative to the scenario) or an inline table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PropertyRef {
    Path(String),
    Inline(PropertyDoc),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlanDoc {
    Named(String),
    Explicit {
        #[serde(rename = "X")]
        x: String,
        #[serde(rename = "U")]
        u: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub n: usize,
    pub m: usize,
    #[serde(default)]
    pub seed: u64,
    pub plan: PlanDoc,
    pub hidden: SystemDoc,
    pub property: PropertyRef,
}

pub fn read_toml<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    parse_toml(&text).map_err(|e| e.context(&path.display().to_string()))
}

pub fn parse_toml<T: DeserializeOwned>(text: &str) -> Result<T, Failure> {
    toml::from_str(text).map_err(|e| Failure::Malformed(e.to_string()))
}

pub fn to_toml<T: Serialize>(doc: &T) -> Result<String, Failure> {
    toml::to_string(doc).map_err(|e| Failure::Internal(format!("serializing: {e}")))
}

pub fn write_toml<T: Serialize>(path: &Path, doc: &T) -> Result<(), Failure> {
    fs::write(path, to_toml(doc)?).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn matrix(field: &str, text: &str) -> Result<Mat, Failure> {
    text.parse().map_err(|e| Failure::Malformed(format!("{field}: {e}")))
}

fn rational(field: &str, text: &str) -> Result<Rational, Failure> {
    parse_rational(text).map_err(|e| Failure::Malformed(format!("{field}: {e}")))
}

fn dims(n: usize, m: usize) -> Result<Dims, Failure> {
    Ok(Dims::new(n, m)?)
}

fn expect_shape(field: &str, mat: &Mat, rows: usize, cols: usize) -> Result<(), Failure> {
    if mat.shape() != (rows, cols) {
        let (r, c) = mat.shape();
        return Err(Failure::Malformed(format!("{field} is {r}x{c}, expected {rows}x{cols}")));
    }
    Ok(())
}

impl SetDoc {
    pub fn to_set(&self) -> Result<BoundedSet, Failure> {
        let set = match self {
            SetDoc::Point(v) => BoundedSet::point(rational("set", v)?),
            SetDoc::Pieces(pieces) => {
                let pieces = pieces
                    .iter()
                    .map(|[lo, hi]| Ok((rational("set", lo)?, rational("set", hi)?)))
                    .collect::<Result<Vec<_>, Failure>>()?;
                BoundedSet::new(pieces).map_err(|e| Failure::Malformed(format!("set: {e}")))?
            }
        };
        Ok(set)
    }

    pub fn from_set(s: &BoundedSet) -> SetDoc {
        match s.pieces() {
            [(lo, hi)] if lo == hi => SetDoc::Point(lo.to_string()),
            pieces => SetDoc::Pieces(pieces.iter().map(|(lo, hi)| [lo.to_string(), hi.to_string()]).collect()),
        }
    }
}

impl PropertyDoc {
    pub fn to_spec(&self, d: Dims) -> Result<PropertySpec, Failure> {
        let pairs = |v: &[[usize; 2]]| v.iter().map(|&[i, j]| (i, j)).collect();
        let spec = match self {
            PropertyDoc::Identifiability => PropertySpec::Identifiability,
            PropertyDoc::Stabilizability => PropertySpec::Stabilizability,
            PropertyDoc::Controllability => PropertySpec::Controllability,
            PropertyDoc::Sparsity { zeros_a, zeros_b } => {
                PropertySpec::Sparsity { zeros_a: pairs(zeros_a), zeros_b: pairs(zeros_b) }
            }
            PropertyDoc::Linear { mode, expr, constraints } => {
                let constraints = constraints
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let field = format!("constraint {}", i + 1);
                        let h = matrix(&field, &c.h)?;
                        if h.rows() != 1 {
                            return Err(Failure::Malformed(format!("{field}: h must be a single row")));
                        }
                        LinearConstraint::new(h.row(0), c.set.to_set()?)
                            .map_err(|e| Failure::Malformed(format!("{field}: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let mode = match mode {
                    ModeDoc::Intersection => StructureMode::Intersection,
                    ModeDoc::Expression => StructureMode::Expression,
                };
                let expr = match (expr, mode) {
                    (Some(e), _) => e.parse::<SetExpr>().map_err(|e| Failure::Malformed(format!("expr: {e}")))?,
                    (None, StructureMode::Intersection) => SetExpr::conjunction(constraints.len()),
                    (None, StructureMode::Expression) => {
                        return Err(Failure::Malformed("expression mode needs an `expr`".into()))
                    }
                };
                PropertySpec::LinearStructure { constraints, expr, mode }
            }
        };
        spec.validate(d)?;
        Ok(spec)
    }

    pub fn from_spec(p: &PropertySpec) -> PropertyDoc {
        let pairs = |v: &[(usize, usize)]| v.iter().map(|&(i, j)| [i, j]).collect();
        match p {
            PropertySpec::Identifiability => PropertyDoc::Identifiability,
            PropertySpec::Stabilizability => PropertyDoc::Stabilizability,
            PropertySpec::Controllability => PropertyDoc::Controllability,
            PropertySpec::Sparsity { zeros_a, zeros_b } => {
                PropertyDoc::Sparsity { zeros_a: pairs(zeros_a), zeros_b: pairs(zeros_b) }
            }
            PropertySpec::LinearStructure { constraints, expr, mode } => PropertyDoc::Linear {
                mode: match mode {
                    StructureMode::Intersection => ModeDoc::Intersection,
                    StructureMode::Expression => ModeDoc::Expression,
                },
                expr: Some(expr.to_string()),
                constraints: constraints
                    .iter()
                    .map(|c| ConstraintDoc {
                        h: Mat::from_rows(vec![c.h.clone()]).to_string(),
                        set: SetDoc::from_set(&c.set),
                    })
                    .collect(),
            },
        }
    }
}

impl PropertyFile {
    pub fn load(&self) -> Result<(Dims, PropertySpec), Failure> {
        let d = dims(self.n, self.m)?;
        Ok((d, self.property.to_spec(d)?))
    }

    pub fn new(d: Dims, p: &PropertySpec) -> PropertyFile {
        PropertyFile { n: d.n, m: d.m, property: PropertyDoc::from_spec(p) }
    }
}

fn section(x: &str, u: &str, n: usize, m: usize, k: Option<usize>) -> Result<InputSection, Failure> {
    let (x, u) = (matrix("X", x)?, matrix("U", u)?);
    let k = k.unwrap_or(x.cols());
    expect_shape("X", &x, n, k)?;
    expect_shape("U", &u, m, k)?;
    InputSection::new(x, u).map_err(|e| Failure::Malformed(e.to_string()))
}

impl InputFile {
    pub fn load(&self) -> Result<InputSection, Failure> {
        section(&self.x, &self.u, self.n, self.m, Some(self.k))
    }

    pub fn new(s: &InputSection) -> InputFile {
        let d = s.dims();
        InputFile { n: d.n, m: d.m, k: s.k(), x: s.x_minus().to_string(), u: s.u_minus().to_string() }
    }
}

impl DataFile {
    pub fn load(&self) -> Result<Dataset, Failure> {
        let s = section(&self.x, &self.u, self.n, self.m, Some(self.k))?;
        let xp = matrix("X_plus", &self.x_plus)?;
        expect_shape("X_plus", &xp, self.n, self.k)?;
        Dataset::new(s, xp).map_err(|e| Failure::Malformed(e.to_string()))
    }

    pub fn new(d: &Dataset) -> DataFile {
        let s = d.section();
        let dims = d.dims();
        DataFile {
            n: dims.n,
            m: dims.m,
            k: s.k(),
            x: s.x_minus().to_string(),
            u: s.u_minus().to_string(),
            x_plus: d.x_plus().to_string(),
        }
    }
}

impl SystemDoc {
    pub fn load(&self, d: Dims) -> Result<SystemPair, Failure> {
        let (a, b) = (matrix("A", &self.a)?, matrix("B", &self.b)?);
        expect_shape("A", &a, d.n, d.n)?;
        expect_shape("B", &b, d.n, d.m)?;
        Ok(SystemPair::new(a, b))
    }

    pub fn new(s: &SystemPair) -> SystemDoc {
        SystemDoc { a: s.a.to_string(), b: s.b.to_string() }
    }
}

impl ScenarioFile {
    /// Resolves property paths against `base` (the scenario's directory).
    pub fn load(&self, base: &Path) -> Result<Scenario, Failure> {
        let d = dims(self.n, self.m)?;
        let property = match &self.property {
            PropertyRef::Inline(doc) => doc.to_spec(d)?,
            PropertyRef::Path(p) => {
                let file: PropertyFile = read_toml(&base.join(p))?;
                let (pd, spec) = file.load()?;
                if pd != d {
                    return Err(Failure::Malformed(format!(
                        "property file {p} is for n = {}, m = {}; scenario has n = {}, m = {}",
                        pd.n, pd.m, d.n, d.m
                    )));
                }
                spec
            }
        };
        let plan = match &self.plan {
            PlanDoc::Named(name) if name == "designed" => Plan::Designed,
            PlanDoc::Named(name) if name == "trajectory" => {
                return Err(Failure::Malformed(
                    "trajectory plans are not supported: every excitation starts from a freshly set state \
                     (x0, u0); data whose initial states cannot be reset is outside this tool's scope"
                        .into(),
                ))
            }
            PlanDoc::Named(other) => {
                return Err(Failure::Malformed(format!("unknown plan {other:?}; use \"designed\" or {{ X, U }}")))
            }
            PlanDoc::Explicit { x, u } => Plan::Explicit(section(x, u, d.n, d.m, None)?),
        };
        let sc = Scenario { dims: d, hidden: self.hidden.load(d)?, property, plan, seed: self.seed };
        sc.validate().map_err(|e| Failure::Malformed(e.to_string()))?;
        Ok(sc)
    }

    pub fn new(sc: &Scenario) -> ScenarioFile {
        ScenarioFile {
            n: sc.dims.n,
            m: sc.dims.m,
            seed: sc.seed,
            plan: match &sc.plan {
                Plan::Designed => PlanDoc::Named("designed".into()),
                Plan::Explicit(s) => PlanDoc::Explicit { x: s.x_minus().to_string(), u: s.u_minus().to_string() },
            },
            hidden: SystemDoc::new(&sc.hidden),
            property: PropertyRef::Inline(PropertyDoc::from_spec(&sc.property)),
        }
    }
}

/// Both systems of a counterexample with the data they share.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleFile {
    pub construction: String,
    pub seed: Option<u64>,
    /// Unexcited direction of `R^(n+m)`, as a row literal.
    pub direction: String,
    pub data: DataFile,
    pub with: SystemDoc,
    pub without: SystemDoc,
}

impl CounterexampleFile {
    pub fn new(pair: &CounterexamplePair) -> CounterexampleFile {
        CounterexampleFile {
            construction: pair.construction.to_string(),
            seed: pair.seed,
            direction: Mat::from_rows(vec![pair.direction.clone()]).to_string(),
            data: DataFile::new(&pair.dataset()),
            with: SystemDoc::new(&pair.sys_with),
            without: SystemDoc::new(&pair.sys_without),
        }
    }
}

/// Loads a scenario file, resolving relative property paths next to it.
pub fn load_scenario(path: &Path) -> Result<Scenario, Failure> {
    let file: ScenarioFile = read_toml(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    file.load(&base).map_err(|e| e.context(&path.display().to_string()))
}
