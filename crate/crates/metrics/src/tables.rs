//! Comma-delimited score tables.
//!
//! Three summary tables (aspects x models, properties x models, a single
//! overall row) plus one per-size accuracy table per (aspect, property)
//! cell. Values print at 3 decimals; the leading header cell is empty so
//! each file reads as a labeled matrix.

use std::fs;
use std::path::{Path, PathBuf};

use crate::{MetricsError, ScoreTable};

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

fn header(models: &[String]) -> String {
    let mut line = String::new();
    for m in models {
        line.push(',');
        line.push_str(m);
    }
    line.push('\n');
    line
}

fn row(label: &str, values: &[f64]) -> String {
    let mut line = String::from(label);
    for v in values {
        line.push_str(&format!(",{v:.3}"));
    }
    line.push('\n');
    line
}

pub fn render_aspect_table(scores: &ScoreTable) -> String {
    let mut out = header(&scores.grid.models);
    for (ai, aspect) in scores.grid.aspects.iter().enumerate() {
        out.push_str(&row(aspect.as_str(), &scores.r_ai[ai]));
    }
    out
}

pub fn render_property_table(scores: &ScoreTable) -> String {
    let mut out = header(&scores.grid.models);
    for (pi, property) in scores.grid.properties.iter().enumerate() {
        out.push_str(&row(property, &scores.r_pi[pi]));
    }
    out
}

pub fn render_overall_table(scores: &ScoreTable) -> String {
    let mut out = header(&scores.grid.models);
    out.push_str(&row("overall", &scores.r_i));
    out
}

pub fn render_per_size_table(scores: &ScoreTable, ai: usize, pi: usize) -> String {
    let cell = &scores.grid.per_size[ai][pi];
    let mut out = String::from("gsize");
    for m in &scores.grid.models {
        out.push(',');
        out.push_str(m);
    }
    out.push('\n');
    for (j, size) in cell.sizes.iter().enumerate() {
        out.push_str(&size.to_string());
        for mi in 0..scores.grid.models.len() {
            out.push_str(&format!(",{:.3}", cell.accuracy[mi][j]));
        }
        out.push('\n');
    }
    out
}

/// Writes aspects.csv, properties.csv, overall.csv, and
/// `per_size/<aspect>_<property>.csv` under `out_dir`; returns the paths.
pub fn emit_tables(scores: &ScoreTable, out_dir: &Path) -> Result<Vec<PathBuf>, TableError> {
    let write = |path: PathBuf, body: String| -> Result<PathBuf, TableError> {
        fs::write(&path, body).map_err(|source| TableError::Io { path: path.clone(), source })?;
        Ok(path)
    };
    fs::create_dir_all(out_dir)
        .map_err(|source| TableError::Io { path: out_dir.to_path_buf(), source })?;
    let per_size_dir = out_dir.join("per_size");
    fs::create_dir_all(&per_size_dir)
        .map_err(|source| TableError::Io { path: per_size_dir.clone(), source })?;

    let mut written = vec![
        write(out_dir.join("aspects.csv"), render_aspect_table(scores))?,
        write(out_dir.join("properties.csv"), render_property_table(scores))?,
        write(out_dir.join("overall.csv"), render_overall_table(scores))?,
    ];
    for (ai, aspect) in scores.grid.aspects.iter().enumerate() {
        for (pi, property) in scores.grid.properties.iter().enumerate() {
            let name = format!("{}_{}.csv", aspect.as_str(), property);
            written.push(write(per_size_dir.join(name), render_per_size_table(scores, ai, pi))?);
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{score_results, Aspect};

    fn grid_text(models: usize, properties: usize) -> String {
        let mut text = String::new();
        for mi in 0..models {
            for pi in 0..properties {
                for aspect in Aspect::ALL {
                    for j in 0..10u32 {
                        let acc = 0.5 + ((mi * 7 + pi * 3 + j as usize) % 50) as f64 / 100.0;
                        text.push_str(&format!("m{mi},prop{pi},{aspect},{},{acc}\n", 6 + j));
                    }
                }
            }
        }
        text
    }

    #[test]
    fn tables_have_expected_shapes() {
        let scores = score_results(&grid_text(9, 16), 10).unwrap();
        let aspects = render_aspect_table(&scores);
        let props = render_property_table(&scores);
        let overall = render_overall_table(&scores);
        // 9 model columns; 3, 16, and 1 data rows.
        assert_eq!(aspects.lines().count(), 4);
        assert_eq!(props.lines().count(), 17);
        assert_eq!(overall.lines().count(), 2);
        for table in [&aspects, &props, &overall] {
            for line in table.lines() {
                assert_eq!(line.split(',').count(), 10, "label column + 9 models");
            }
        }
        // 3-decimal rendering.
        let first_value = aspects.lines().nth(1).unwrap().split(',').nth(1).unwrap();
        assert_eq!(first_value.split('.').nth(1).unwrap().len(), 3);
    }

    #[test]
    fn single_model_tables_are_all_ones() {
        let scores = score_results(&grid_text(1, 3), 10).unwrap();
        let overall = render_overall_table(&scores);
        assert!(overall.lines().nth(1).unwrap().ends_with("1.000"));
        let props = render_property_table(&scores);
        for line in props.lines().skip(1) {
            assert!(line.ends_with("1.000"), "{line}");
        }
    }

    #[test]
    fn emit_writes_summary_and_per_size_files() {
        let dir = tempfile::tempdir().unwrap();
        let scores = score_results(&grid_text(2, 2), 10).unwrap();
        let written = emit_tables(&scores, dir.path()).unwrap();
        // 3 summary tables + 3 aspects x 2 properties per-size tables.
        assert_eq!(written.len(), 3 + 6);
        assert!(dir.path().join("per_size/sensitivity_prop1.csv").exists());
        let body = fs::read_to_string(dir.path().join("per_size/sensitivity_prop1.csv")).unwrap();
        assert_eq!(body.lines().count(), 11); // header + 10 sizes
        assert!(body.starts_with("gsize,m0,m1\n"));
    }
}
