//! Configuration, test-function library and verification suites.

pub mod config;
pub mod functions;
pub mod suites;

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::domain::sci;
use crate::error::Result;
pub use config::{ExperimentConfig, Suite};
pub use functions::{function_library, lookup, TestFunction, STANDARD_SET};
pub use suites::{Assertion, Relation, SuiteOutput, Table};

/// Outputs of one `run_suite` call, in the order the suites were selected.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub outputs: Vec<SuiteOutput>,
    pub out_dir: PathBuf,
}

impl RunOutcome {
    pub fn all_pass(&self) -> bool {
        self.outputs.iter().all(SuiteOutput::all_pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn assertions(&self) -> impl Iterator<Item = &Assertion> {
        self.outputs.iter().flat_map(|o| o.assertions.iter())
    }
}

pub const DEFAULT_OUT_DIR: &str = "out";

/// Runs the given suites; in parallel when `cfg.parallel` is set.
pub fn run_suites(cfg: &ExperimentConfig, suites: &[Suite]) -> Result<Vec<SuiteOutput>> {
    if cfg.parallel {
        suites.par_iter().map(|&s| suites::run(cfg, s)).collect()
    } else {
        suites.iter().map(|&s| suites::run(cfg, s)).collect()
    }
}

/// Runs the selected suites and writes `<suite>.csv` plus `summary.csv` into
/// the configured output directory.
pub fn run_suite(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let outputs = run_suites(cfg, &cfg.selected_suites())?;
    let out_dir = cfg
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    write_outputs(&outputs, &out_dir)?;
    Ok(RunOutcome { outputs, out_dir })
}

pub fn write_table(table: &Table, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary<'a>(assertions: impl Iterator<Item = &'a Assertion>, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["suite", "assertion", "measured", "relation", "bound", "verdict"])?;
    for a in assertions {
        w.write_record([
            a.suite.name(),
            &a.name,
            &sci(a.measured),
            a.relation.symbol(),
            &sci(a.bound),
            if a.pass { "PASS" } else { "FAIL" },
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_outputs(outputs: &[SuiteOutput], dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for o in outputs {
        write_table(&o.table, &dir.join(format!("{}.csv", o.suite.name())))?;
    }
    write_summary(outputs.iter().flat_map(|o| o.assertions.iter()), &dir.join("summary.csv"))
}
