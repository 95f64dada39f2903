use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ExperimentConfig, ExperimentResults};
use crate::data::fmt_f64;

pub const MANIFEST_FILE: &str = "manifest.json";
const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("bad manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },
}

/// Everything needed to rerun an experiment exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub config: ExperimentConfig,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>, OutputError> {
    let file = File::create(path).map_err(io_err(path))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

fn write_rows<I>(path: &Path, header: &[&str], rows: I) -> Result<(), OutputError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let wrap = |source| OutputError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(wrap)?;
    for row in rows {
        w.write_record(&row).map_err(wrap)?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes `curve_<algo>.csv`, `trace_<algo>.csv`, `bench.csv` and the
/// manifest into `dir`, creating it if needed. Returns the written paths.
pub fn emit_outputs(
    results: &ExperimentResults,
    config: &ExperimentConfig,
    dir: &Path,
) -> Result<Vec<PathBuf>, OutputError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::new();

    for curve in &results.curves {
        let path = dir.join(format!("curve_{}.csv", curve.algo));
        let (db, sdb) = (curve.mse_db(), curve.smoothed_db());
        let rows = (0..curve.len()).map(|i| {
            vec![
                i.to_string(),
                fmt_f64(curve.mse[i]),
                fmt_f64(db[i]),
                fmt_f64(curve.smoothed[i]),
                fmt_f64(sdb[i]),
            ]
        });
        write_rows(
            &path,
            &["iteration", "mse", "mse_db", "mse_smooth", "mse_smooth_db"],
            rows,
        )?;
        written.push(path);
    }

    for (algo, trace) in &results.traces {
        let path = dir.join(format!("trace_{algo}.csv"));
        let rows = trace.iter().map(|r| {
            let mut row = vec![r.n.to_string()];
            row.extend(r.d.iter().chain(&r.y).map(|&v| fmt_f64(v)));
            row.push(fmt_f64(r.sq_err));
            row
        });
        write_rows(
            &path,
            &["n", "d_a", "d_b", "d_c", "y_a", "y_b", "y_c", "sq_err"],
            rows,
        )?;
        written.push(path);
    }

    let path = dir.join("bench.csv");
    let rows = results.bench.iter().map(|b| {
        vec![
            b.algo.to_string(),
            b.len.to_string(),
            b.iterations.to_string(),
            b.counted_mults.to_string(),
            b.counted_adds.to_string(),
            b.predicted_mults.to_string(),
            b.predicted_adds.to_string(),
            b.output_mults.to_string(),
            b.output_adds.to_string(),
            b.within_budget().to_string(),
        ]
    });
    write_rows(
        &path,
        &[
            "algo",
            "len",
            "iterations",
            "counted_mults",
            "counted_adds",
            "predicted_mults",
            "predicted_adds",
            "output_mults",
            "output_adds",
            "within_budget",
        ],
        rows,
    )?;
    written.push(path);

    let path = dir.join(MANIFEST_FILE);
    let manifest = Manifest {
        version: MANIFEST_VERSION,
        config: config.clone(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
    fs::write(&path, text + "\n").map_err(io_err(&path))?;
    written.push(path);

    Ok(written)
}

pub fn read_manifest(path: &Path) -> Result<ExperimentConfig, OutputError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| OutputError::Manifest {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    if manifest.version != MANIFEST_VERSION {
        return Err(OutputError::Manifest {
            path: path.to_path_buf(),
            message: format!("unsupported version {}", manifest.version),
        });
    }
    Ok(manifest.config)
}

#[cfg(test)]
mod tests {
    use super::super::{run_experiment, DataSource};
    use super::*;
    use crate::data::SyntheticSpec;

    #[test]
    fn files_and_row_counts() {
        let mut config = ExperimentConfig::new(DataSource::Synthetic {
            spec: SyntheticSpec::wind_like(1, 120),
        });
        config.trials = 2;
        config.filter.step_size = 1e-3;
        config.smooth = 5;
        let results = run_experiment(&config).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let written = emit_outputs(&results, &config, dir.path()).unwrap();
        assert_eq!(written.len(), 4 + 4 + 2);
        let curve = fs::read_to_string(dir.path().join("curve_atlms.csv")).unwrap();
        assert_eq!(curve.lines().count() - 1, 120 - 8);
        assert!(curve.starts_with("iteration,mse,mse_db"));
        let trace = fs::read_to_string(dir.path().join("trace_qlms.csv")).unwrap();
        assert!(trace.starts_with("n,d_a,d_b,d_c,y_a,y_b,y_c,sq_err"));
        assert_eq!(
            read_manifest(&dir.path().join(MANIFEST_FILE)).unwrap(),
            config
        );
    }

    #[test]
    fn unwritable_directory() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let config = ExperimentConfig::new(DataSource::Synthetic {
            spec: SyntheticSpec::wind_like(1, 20),
        });
        let results = super::super::ExperimentResults {
            curves: vec![],
            traces: Default::default(),
            bench: vec![],
            diverged: Default::default(),
            effective_trials: 0,
            warnings: vec![],
        };
        assert!(matches!(
            emit_outputs(&results, &config, &blocker.join("sub")),
            Err(OutputError::Io { .. })
        ));
    }
}
