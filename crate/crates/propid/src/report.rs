//! Reports rendered as aligned text or CSV.

use propid_core::adversary::{CounterexamplePair, Sign};
use propid_core::harness::{EfficiencyRow, RunReport};
use propid_core::identify::{consistent_set_contains, Evidence, Gain, Identification};
use propid_core::numerics::{Mat, Rational};
use propid_core::properties::{has_property, Dims, PropertySpec, SystemPair};
use propid_core::richness::InputSection;

use crate::error::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Key/value reports omit the header in text form.
    keyed: bool,
}

impl Table {
    pub fn pairs() -> Table {
        Table { header: vec!["field".into(), "value".into()], rows: Vec::new(), keyed: true }
    }

    pub fn grid(header: &[&str]) -> Table {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new(), keyed: false }
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.rows.push(vec![key.into(), value.to_string()]);
        self
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn value(&self, key: &str) -> Option<&str> {
        self.rows.iter().find(|r| r[0] == key).map(|r| r[1].as_str())
    }

    pub fn render(&self, format: Format) -> Result<String, Failure> {
        match format {
            Format::Text => Ok(self.text()),
            Format::Csv => self.csv(),
        }
    }

    fn text(&self) -> String {
        let mut lines: Vec<&Vec<String>> = Vec::new();
        if !self.keyed {
            lines.push(&self.header);
        }
        lines.extend(&self.rows);
        let cols = self.header.len();
        let widths: Vec<usize> =
            (0..cols).map(|c| lines.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for row in lines {
            let mut line = String::new();
            for (c, cell) in row.iter().enumerate() {
                if c + 1 == cols {
                    line.push_str(cell);
                } else {
                    line.push_str(&format!("{cell:<w$}  ", w = widths[c]));
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    fn csv(&self) -> Result<String, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let write = |w: &mut csv::Writer<Vec<u8>>, r: &[String]| {
            w.write_record(r).map_err(|e| Failure::Internal(format!("csv: {e}")))
        };
        write(&mut w, &self.header)?;
        for r in &self.rows {
            write(&mut w, r)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::Internal(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Failure::Internal(format!("csv: {e}")))
    }
}

fn vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(Rational::to_string).collect();
    format!("({})", parts.join(", "))
}

fn matrix(m: &Mat) -> String {
    format!("[{m}]")
}

pub fn design(d: Dims, p: &PropertySpec, s: &InputSection) -> Table {
    let mut t = Table::pairs();
    t.push("property", p.name())
        .push("n", d.n)
        .push("m", d.m)
        .push("k", s.k())
        .push("model_based_k", d.total())
        .push("X", matrix(s.x_minus()))
        .push("U", matrix(s.u_minus()));
    t
}

pub fn check(p: &PropertySpec, s: &InputSection, dim_lp: usize, missing: &[Vec<Rational>]) -> Table {
    let mut t = Table::pairs();
    t.push("property", p.name())
        .push("k", s.k())
        .push("dim_lp", dim_lp)
        .push("sufficiently_rich", missing.is_empty())
        .push("missing", missing.len());
    for (i, v) in missing.iter().enumerate() {
        t.push(&format!("missing_{}", i + 1), vector(v));
    }
    t
}

pub fn identification(p: &PropertySpec, id: &Identification, verbose: bool) -> Table {
    let mut t = Table::pairs();
    t.push("property", p.name()).push("verdict", id.verdict);
    match &id.evidence {
        Evidence::ZeroPattern { q, x_plus_q, entries } => {
            t.push("Q", matrix(q));
            if verbose {
                t.push("X_plus_Q", matrix(x_plus_q));
            }
            let nonzero: Vec<_> = entries.iter().filter(|e| e.value != Rational::from_integer(0.into())).collect();
            t.push("checked_entries", entries.len()).push("nonzero_entries", nonzero.len());
            for e in if verbose { entries.iter().collect() } else { nonzero } {
                t.push(&format!("entry_{}_{}", e.row, e.col), &e.value);
            }
        }
        Evidence::BlockTraces { q, values, members } => {
            t.push("Q", matrix(q));
            for (i, (v, inside)) in values.iter().zip(members).enumerate() {
                t.push(&format!("constraint_{}", i + 1), format!("{v} ({})", if *inside { "in set" } else { "outside" }));
            }
        }
        Evidence::Model(sys) => {
            t.push("A", matrix(&sys.a)).push("B", matrix(&sys.b));
        }
        Evidence::InputGain { q, b } => {
            t.push("Q", matrix(q)).push("B", matrix(b));
        }
    }
    t
}

pub fn model(sys: &SystemPair) -> Table {
    let mut t = Table::pairs();
    t.push("A", matrix(&sys.a)).push("B", matrix(&sys.b));
    t
}

pub fn gain(g: &Gain) -> Table {
    let mut t = Table::pairs();
    t.push("K", matrix(&g.k))
        .push("closed_loop", matrix(&g.closed_loop))
        .push("spectral_radius", format!("{:.12}", g.radius.value))
        .push("stabilizing", g.is_stabilizing());
    t
}

pub fn counterexample(p: &PropertySpec, pair: &CounterexamplePair) -> Table {
    let d = pair.dataset();
    let mut t = Table::pairs();
    t.push("property", p.name())
        .push("construction", pair.construction)
        .push("direction", vector(&pair.direction))
        .push("X_plus", matrix(&pair.shared_feedback))
        .push("A_with", matrix(&pair.sys_with.a))
        .push("B_with", matrix(&pair.sys_with.b))
        .push("A_without", matrix(&pair.sys_without.a))
        .push("B_without", matrix(&pair.sys_without.b));
    if let Some(signs) = &pair.signs {
        let s: Vec<&str> = signs.iter().map(|s| if *s == Sign::Keep { "keep" } else { "complement" }).collect();
        t.push("signs", s.join(" "));
    }
    if let Some(seed) = pair.seed {
        t.push("seed", seed);
    }
    t.push("with_reproduces_data", consistent_set_contains(&d, &pair.sys_with))
        .push("without_reproduces_data", consistent_set_contains(&d, &pair.sys_without))
        .push("with_has_property", has_property(&pair.sys_with, p))
        .push("without_has_property", has_property(&pair.sys_without, p))
        .push("verified", pair.verify(p));
    t
}

pub const RUN_HEADER: [&str; 8] = ["scenario", "property", "n", "m", "k_used", "k_model_based", "outcome", "counterexample"];

pub fn run_row(name: &str, p: &PropertySpec, r: &RunReport, verbose: bool) -> Vec<String> {
    let outcome = match &r.outcome {
        Ok(id) => id.verdict.to_string(),
        Err(e) => e.to_string(),
    };
    let cx = match &r.counterexample {
        None => "-".to_string(),
        Some(Ok(pair)) if verbose => format!("{} verified={} {}", pair.construction, pair.verify(p), pair.sys_without),
        Some(Ok(pair)) => format!("{} verified={}", pair.construction, pair.verify(p)),
        Some(Err(e)) => format!("failed: {e}"),
    };
    let d = r.dataset.dims();
    vec![
        name.into(),
        p.name().into(),
        d.n.to_string(),
        d.m.to_string(),
        r.k_used.to_string(),
        r.k_model_based.to_string(),
        outcome,
        cx,
    ]
}

pub fn efficiency(rows: &[(String, EfficiencyRow)]) -> Table {
    let mut t = Table::grid(&["scenario", "property", "n", "m", "dim_lp", "n_plus_m", "savings"]);
    for (name, r) in rows {
        t.push_row(vec![
            name.clone(),
            r.property.clone(),
            r.n.to_string(),
            r.m.to_string(),
            r.dim_lp.to_string(),
            r.model_based.to_string(),
            format!("{:.3}", r.savings),
        ]);
    }
    t
}
