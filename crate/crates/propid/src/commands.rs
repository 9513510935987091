//! One function per CLI verb. Each returns the report to print and the exit status.

use std::path::Path;

use propid_core::adversary::{counterexample as build_counterexample, AdversaryError};
use propid_core::harness::{report_efficiency, run};
use propid_core::identify::{gain_from_data, identify_checked, recover_model};
use propid_core::properties::{minimum_subspace, Dims, PropertySpec};
use propid_core::richness::{design_minimum_input, missing_directions, Dataset, InputSection};
use rayon::prelude::*;

use crate::error::Failure;
use crate::files::{load_scenario, read_toml, write_toml, CounterexampleFile, DataFile, InputFile, PropertyFile};
use crate::report::{self, Table, RUN_HEADER};

pub struct Output {
    pub table: Table,
    pub code: u8,
}

impl From<Table> for Output {
    fn from(table: Table) -> Self {
        Output { table, code: 0 }
    }
}

fn property(path: &Path) -> Result<(Dims, PropertySpec), Failure> {
    read_toml::<PropertyFile>(path)?.load().map_err(|e| e.context(&path.display().to_string()))
}

fn input(path: &Path) -> Result<InputSection, Failure> {
    read_toml::<InputFile>(path)?.load().map_err(|e| e.context(&path.display().to_string()))
}

fn data(path: &Path) -> Result<Dataset, Failure> {
    read_toml::<DataFile>(path)?.load().map_err(|e| e.context(&path.display().to_string()))
}

fn same_dims(property: Dims, found: Dims) -> Result<(), Failure> {
    if property != found {
        return Err(Failure::Malformed(format!(
            "property is stated for n = {}, m = {} but the file has n = {}, m = {}",
            property.n, property.m, found.n, found.m
        )));
    }
    Ok(())
}

pub fn design(property_path: &Path, out: Option<&Path>) -> Result<Output, Failure> {
    let (d, p) = property(property_path)?;
    let s = design_minimum_input(&p, d)?;
    if let Some(out) = out {
        write_toml(out, &InputFile::new(&s))?;
    }
    Ok(report::design(d, &p, &s).into())
}

pub fn check(property_path: &Path, input_path: &Path) -> Result<Output, Failure> {
    let (d, p) = property(property_path)?;
    let s = input(input_path)?;
    same_dims(d, s.dims())?;
    let dim_lp = minimum_subspace(&p, d)?.dim();
    let missing = missing_directions(&s, &p)?;
    Ok(report::check(&p, &s, dim_lp, &missing).into())
}

pub fn identify(property_path: &Path, data_path: &Path, verbose: bool) -> Result<Output, Failure> {
    let (d, p) = property(property_path)?;
    let ds = data(data_path)?;
    let id = identify_checked(&ds, &p, d)?;
    Ok(report::identification(&p, &id, verbose).into())
}

pub fn recover(data_path: &Path) -> Result<Output, Failure> {
    let sys = recover_model(&data(data_path)?)?;
    Ok(report::model(&sys).into())
}

pub fn gain(data_path: &Path) -> Result<Output, Failure> {
    let g = gain_from_data(&data(data_path)?)?;
    Ok(report::gain(&g).into())
}

pub fn counterexample(
    property_path: &Path,
    input_path: &Path,
    seed: u64,
    out: Option<&Path>,
) -> Result<Output, Failure> {
    let (d, p) = property(property_path)?;
    let s = input(input_path)?;
    same_dims(d, s.dims())?;
    match build_counterexample(&s, &p, seed) {
        Ok(pair) => {
            if let Some(out) = out {
                write_toml(out, &CounterexampleFile::new(&pair))?;
            }
            Ok(report::counterexample(&p, &pair).into())
        }
        Err(AdversaryError::SectionIsRich) => {
            let mut t = Table::pairs();
            t.push("property", p.name()).push("sufficiently_rich", true).push("counterexample", "none");
            Ok(t.into())
        }
        Err(e) => Err(e.into()),
    }
}

fn name_of(path: &Path) -> String {
    let file = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    match file.split('.').next() {
        Some(stem) if !stem.is_empty() => stem.to_string(),
        _ => path.display().to_string(),
    }
}

/// Runs every scenario in parallel; rows come back in argument order. The exit
/// status is the most severe outcome across the batch.
pub fn simulate(paths: &[&Path], verbose: bool) -> Result<Output, Failure> {
    let results: Vec<Result<(Vec<String>, u8), Failure>> = paths
        .par_iter()
        .map(|&path| {
            let sc = load_scenario(path)?;
            let r = run(&sc).map_err(|e| Failure::Malformed(e.to_string()))?;
            let code = match &r.outcome {
                Ok(_) => 0,
                Err(e) => Failure::from(e.clone()).code(),
            };
            let code = match &r.counterexample {
                Some(Ok(pair)) if !pair.verify(&sc.property) => 4,
                Some(Err(AdversaryError::Internal(_))) => 4,
                _ => code,
            };
            Ok((report::run_row(&name_of(path), &sc.property, &r, verbose), code))
        })
        .collect();
    let mut table = Table::grid(&RUN_HEADER);
    let mut code = 0;
    for r in results {
        let (row, c) = r?;
        table.push_row(row);
        code = code.max(c);
    }
    Ok(Output { table, code })
}

pub fn bench(paths: &[&Path]) -> Result<Output, Failure> {
    let loaded: Vec<_> = paths.par_iter().map(|&p| load_scenario(p).map(|sc| (name_of(p), sc))).collect();
    let loaded = loaded.into_iter().collect::<Result<Vec<_>, _>>()?;
    let scenarios: Vec<_> = loaded.iter().map(|(_, sc)| sc.clone()).collect();
    let rows = report_efficiency(&scenarios).map_err(|e| Failure::Malformed(e.to_string()))?;
    let named: Vec<_> = loaded.into_iter().map(|(n, _)| n).zip(rows).collect();
    Ok(report::efficiency(&named).into())
}
