//! Scoring algebra over externally supplied accuracy results.
//!
//! The unified score of one (aspect, property, model) cell is the
//! graph-size-weighted mean of its per-size accuracies. Relative scores
//! normalize each cell by the mean over models at the same aspect and
//! property, then aggregate over properties, aspects, and both.
//!
//! Nothing here trains or runs models: accuracies arrive as text records
//! `model,property,aspect,gsize,accuracy`, one per line.

pub mod rational;
pub mod tables;

use std::collections::BTreeSet;

pub use tables::emit_tables;

/// Tolerance for the algebraic identities checked in moduli tests
/// (mean-of-relative-scores equals one, and the like).
pub const ALGEBRA_TOLERANCE: f64 = 1e-9;

/// The standard test grid spans ten sizes (base+1 ..= base+10).
pub const DEFAULT_TEST_SIZES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Aspect {
    Generalizability,
    Sensitivity,
    Robustness,
}

impl Aspect {
    pub const ALL: [Aspect; 3] = [Aspect::Generalizability, Aspect::Sensitivity, Aspect::Robustness];

    pub fn as_str(&self) -> &'static str {
        match self {
            Aspect::Generalizability => "generalizability",
            Aspect::Sensitivity => "sensitivity",
            Aspect::Robustness => "robustness",
        }
    }

    pub fn parse(s: &str) -> Option<Aspect> {
        match s {
            "generalizability" => Some(Aspect::Generalizability),
            "sensitivity" => Some(Aspect::Sensitivity),
            "robustness" => Some(Aspect::Robustness),
            _ => None,
        }
    }
}

impl std::fmt::Display for Aspect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRecord {
    pub model: String,
    pub property: String,
    pub aspect: Aspect,
    pub gsize: u32,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{aspect}/{property}/{model}: expected {expected} sizes, found {got}")]
    WrongPointCount { aspect: String, property: String, model: String, expected: usize, got: usize },
    #[error("sizes must be strictly increasing (duplicate or unordered gsize {gsize})")]
    NonIncreasingSizes { gsize: u32 },
    #[error("accuracy {value} outside [0, 1]")]
    AccuracyOutOfRange { value: f64 },
    #[error("incomplete grid; missing cells: {}", render_cells(.missing))]
    IncompleteGrid { missing: Vec<(String, String, String)> },
    #[error("mean unified score is zero at ({aspect}, {property}); relative scores undefined")]
    DegenerateMean { aspect: String, property: String },
}

fn render_cells(cells: &[(String, String, String)]) -> String {
    let shown: Vec<String> = cells
        .iter()
        .take(8)
        .map(|(a, p, m)| format!("({a}, {p}, {m})"))
        .collect();
    let mut out = shown.join(", ");
    if cells.len() > 8 {
        out.push_str(&format!(", ... {} total", cells.len()));
    }
    out
}

/// Parses `model,property,aspect,gsize,accuracy` lines. Blank lines and
/// `#` comments are skipped.
pub fn parse_results(text: &str) -> Result<Vec<AccuracyRecord>, MetricsError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| MetricsError::Parse { line: idx + 1, message };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(err(format!("expected 5 comma-separated fields, found {}", fields.len())));
        }
        let aspect = Aspect::parse(fields[2])
            .ok_or_else(|| err(format!("unknown aspect `{}`", fields[2])))?;
        let gsize: u32 = fields[3]
            .parse()
            .map_err(|_| err(format!("bad graph size `{}`", fields[3])))?;
        let accuracy: f64 = fields[4]
            .parse()
            .map_err(|_| err(format!("bad accuracy `{}`", fields[4])))?;
        if !(0.0..=1.0).contains(&accuracy) {
            return Err(err(format!("accuracy {accuracy} outside [0, 1]")));
        }
        out.push(AccuracyRecord {
            model: fields[0].to_string(),
            property: fields[1].to_string(),
            aspect,
            gsize,
            accuracy,
        });
    }
    Ok(out)
}

/// Graph-size-weighted mean accuracy: sum(acc_j * gsize_j) / sum(gsize_j).
/// Requires exactly `expected_count` points with strictly increasing sizes.
pub fn u_score(points: &[(u32, f64)], expected_count: usize) -> Result<f64, MetricsError> {
    if points.len() != expected_count {
        return Err(MetricsError::WrongPointCount {
            aspect: String::new(),
            property: String::new(),
            model: String::new(),
            expected: expected_count,
            got: points.len(),
        });
    }
    for pair in points.windows(2) {
        if pair[1].0 <= pair[0].0 {
            return Err(MetricsError::NonIncreasingSizes { gsize: pair[1].0 });
        }
    }
    let mut weighted = 0.0;
    let mut total = 0.0;
    for &(gsize, accuracy) in points {
        if !(0.0..=1.0).contains(&accuracy) {
            return Err(MetricsError::AccuracyOutOfRange { value: accuracy });
        }
        weighted += accuracy * gsize as f64;
        total += gsize as f64;
    }
    Ok(weighted / total)
}

/// Per-size accuracies of one (aspect, property) cell: shared size axis,
/// one accuracy row per model.
#[derive(Debug, Clone, PartialEq)]
pub struct PerSizeTable {
    pub sizes: Vec<u32>,
    /// `accuracy[model_index][size_index]`
    pub accuracy: Vec<Vec<f64>>,
}

/// Unified scores over the full (aspect, property, model) grid plus the
/// raw per-size accuracies they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct UGrid {
    pub models: Vec<String>,
    pub properties: Vec<String>,
    pub aspects: Vec<Aspect>,
    /// `u[aspect_index][property_index][model_index]`
    pub u: Vec<Vec<Vec<f64>>>,
    /// `per_size[aspect_index][property_index]`
    pub per_size: Vec<Vec<PerSizeTable>>,
}

impl UGrid {
    /// Builds the grid from parsed records; models and properties keep
    /// first-appearance order, aspects their canonical order. Missing
    /// cells or wrong per-cell size counts are rejected.
    pub fn from_records(
        records: &[AccuracyRecord],
        sizes_per_cell: usize,
    ) -> Result<UGrid, MetricsError> {
        let mut models: Vec<String> = Vec::new();
        let mut properties: Vec<String> = Vec::new();
        let mut aspect_set: BTreeSet<Aspect> = BTreeSet::new();
        for r in records {
            if !models.contains(&r.model) {
                models.push(r.model.clone());
            }
            if !properties.contains(&r.property) {
                properties.push(r.property.clone());
            }
            aspect_set.insert(r.aspect);
        }
        let aspects: Vec<Aspect> =
            Aspect::ALL.into_iter().filter(|a| aspect_set.contains(a)).collect();

        let mut missing: Vec<(String, String, String)> = Vec::new();
        let mut u = vec![vec![vec![0.0; models.len()]; properties.len()]; aspects.len()];
        let mut per_size: Vec<Vec<PerSizeTable>> = Vec::with_capacity(aspects.len());
        for (ai, aspect) in aspects.iter().enumerate() {
            let mut row = Vec::with_capacity(properties.len());
            for (pi, property) in properties.iter().enumerate() {
                let mut sizes_axis: Option<Vec<u32>> = None;
                let mut acc_rows: Vec<Vec<f64>> = Vec::with_capacity(models.len());
                for (mi, model) in models.iter().enumerate() {
                    let mut points: Vec<(u32, f64)> = records
                        .iter()
                        .filter(|r| {
                            r.aspect == *aspect && &r.property == property && &r.model == model
                        })
                        .map(|r| (r.gsize, r.accuracy))
                        .collect();
                    if points.is_empty() {
                        missing.push((aspect.to_string(), property.clone(), model.clone()));
                        acc_rows.push(Vec::new());
                        continue;
                    }
                    points.sort_by_key(|p| p.0);
                    let score = u_score(&points, sizes_per_cell).map_err(|e| match e {
                        MetricsError::WrongPointCount { expected, got, .. } => {
                            MetricsError::WrongPointCount {
                                aspect: aspect.to_string(),
                                property: property.clone(),
                                model: model.clone(),
                                expected,
                                got,
                            }
                        }
                        other => other,
                    })?;
                    u[ai][pi][mi] = score;
                    let axis: Vec<u32> = points.iter().map(|p| p.0).collect();
                    match &sizes_axis {
                        None => sizes_axis = Some(axis),
                        Some(existing) => {
                            if *existing != axis {
                                return Err(MetricsError::Parse {
                                    line: 0,
                                    message: format!(
                                        "size axes differ across models at ({aspect}, {property})"
                                    ),
                                });
                            }
                        }
                    }
                    acc_rows.push(points.iter().map(|p| p.1).collect());
                }
                row.push(PerSizeTable {
                    sizes: sizes_axis.unwrap_or_default(),
                    accuracy: acc_rows,
                });
            }
            per_size.push(row);
        }
        if !missing.is_empty() {
            return Err(MetricsError::IncompleteGrid { missing });
        }
        Ok(UGrid { models, properties, aspects, u, per_size })
    }
}

/// Relative scores: each cell normalized by its (aspect, property) mean
/// over models, plus the per-aspect, per-property, and overall means.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub grid: UGrid,
    /// `r_api[aspect][property][model]`
    pub r_api: Vec<Vec<Vec<f64>>>,
    /// `r_ai[aspect][model]`: mean over properties.
    pub r_ai: Vec<Vec<f64>>,
    /// `r_pi[property][model]`: mean over aspects.
    pub r_pi: Vec<Vec<f64>>,
    /// `r_i[model]`: mean over both.
    pub r_i: Vec<f64>,
}

pub fn relative_scores(grid: UGrid) -> Result<ScoreTable, MetricsError> {
    let (na, np, ng) = (grid.aspects.len(), grid.properties.len(), grid.models.len());
    let mut r_api = vec![vec![vec![0.0; ng]; np]; na];
    for (ai, plane) in r_api.iter_mut().enumerate() {
        for (pi, row) in plane.iter_mut().enumerate() {
            let mean: f64 = grid.u[ai][pi].iter().sum::<f64>() / ng as f64;
            if mean == 0.0 {
                return Err(MetricsError::DegenerateMean {
                    aspect: grid.aspects[ai].to_string(),
                    property: grid.properties[pi].clone(),
                });
            }
            for (mi, cell) in row.iter_mut().enumerate() {
                *cell = grid.u[ai][pi][mi] / mean;
            }
        }
    }
    let mut r_ai = vec![vec![0.0; ng]; na];
    for (ai, row) in r_ai.iter_mut().enumerate() {
        for (mi, cell) in row.iter_mut().enumerate() {
            *cell = (0..np).map(|pi| r_api[ai][pi][mi]).sum::<f64>() / np as f64;
        }
    }
    let mut r_pi = vec![vec![0.0; ng]; np];
    for (pi, row) in r_pi.iter_mut().enumerate() {
        for (mi, cell) in row.iter_mut().enumerate() {
            *cell = (0..na).map(|ai| r_api[ai][pi][mi]).sum::<f64>() / na as f64;
        }
    }
    let mut r_i = vec![0.0; ng];
    for (mi, cell) in r_i.iter_mut().enumerate() {
        *cell = (0..na)
            .flat_map(|ai| (0..np).map(move |pi| (ai, pi)))
            .map(|(ai, pi)| r_api[ai][pi][mi])
            .sum::<f64>()
            / (na * np) as f64;
    }
    Ok(ScoreTable { grid, r_api, r_ai, r_pi, r_i })
}

/// Convenience: parse, grid, and normalize in one step.
pub fn score_results(text: &str, sizes_per_cell: usize) -> Result<ScoreTable, MetricsError> {
    let records = parse_results(text)?;
    let grid = UGrid::from_records(&records, sizes_per_cell)?;
    relative_scores(grid)
}
