//! Train/test split categories and the seeded train/validation partition.
//!
//! Train is exactly the base-size dataset; Test is exactly the ten sizes
//! above it. The base dataset additionally gets a 95/5 row partition for
//! training and validation, seeded and written as one line per record.

use std::fs;
use std::path::{Path, PathBuf};

use rand_chacha::rand_core::RngCore;

use crate::dataset::{data_path, manifest_path_for, read_dataset, IoError};
use crate::generator::Family;
use crate::seeds;

pub const TEST_SIZE_SPAN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitCategory {
    RandomTrain,
    RandomTest,
    PerturbTrain,
    PerturbTest,
}

impl SplitCategory {
    pub fn name(&self) -> &'static str {
        match self {
            SplitCategory::RandomTrain => "GraphRandom-Train",
            SplitCategory::RandomTest => "GraphRandom-Test",
            SplitCategory::PerturbTrain => "GraphPerturb-Train",
            SplitCategory::PerturbTest => "GraphPerturb-Test",
        }
    }

    pub fn train(family: Family) -> SplitCategory {
        match family {
            Family::Random => SplitCategory::RandomTrain,
            Family::Perturb => SplitCategory::PerturbTrain,
        }
    }

    pub fn test(family: Family) -> SplitCategory {
        match family {
            Family::Random => SplitCategory::RandomTest,
            Family::Perturb => SplitCategory::PerturbTest,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSpec {
    pub category: SplitCategory,
    pub property: String,
    pub family: Family,
    pub dataset_ids: Vec<String>,
}

impl SplitSpec {
    fn render(&self) -> String {
        let mut out = format!(
            "category: {}\nproperty: {}\nfamily: {}\n",
            self.category.name(),
            self.property,
            self.family
        );
        for id in &self.dataset_ids {
            out.push_str(&format!("dataset: {id}\n"));
        }
        out
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SplitError {
    #[error("missing dataset sizes for {property}/{family}: {missing:?}")]
    Gap { property: String, family: Family, missing: Vec<usize> },
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Checks all eleven datasets exist, writes the Train/Test category specs
/// and the seeded 95/5 row partition of the base dataset, and returns the
/// specs. `seed` is the master seed (the partition stream is derived).
pub fn make_splits(
    root: &Path,
    property: &str,
    base_size: usize,
    family: Family,
    seed: u64,
) -> Result<Vec<SplitSpec>, SplitError> {
    let sizes: Vec<usize> = (base_size..=base_size + TEST_SIZE_SPAN).collect();
    let missing: Vec<usize> = sizes
        .iter()
        .copied()
        .filter(|&s| {
            let data = data_path(root, property, family, s);
            !(data.exists() && manifest_path_for(&data).exists())
        })
        .collect();
    if !missing.is_empty() {
        return Err(SplitError::Gap { property: property.to_string(), family, missing });
    }

    let id = |s: usize| format!("{property}/{family}/v{s}");
    let train = SplitSpec {
        category: SplitCategory::train(family),
        property: property.to_string(),
        family,
        dataset_ids: vec![id(base_size)],
    };
    let test = SplitSpec {
        category: SplitCategory::test(family),
        property: property.to_string(),
        family,
        dataset_ids: sizes[1..].iter().map(|&s| id(s)).collect(),
    };

    let dir = root.join(property).join(family.as_str());
    write(&dir.join("split.train.txt"), &train.render())?;
    write(&dir.join("split.test.txt"), &test.render())?;

    // 95/5 train/validation partition over the base dataset's records.
    let base_data = data_path(root, property, family, base_size);
    let (set, _) = read_dataset(&base_data)?;
    let total = set.positives.len() + set.negatives.len();
    let assignment = partition_rows(total, seeds::split_seed(seed, property, family).rng());
    let mut body = String::with_capacity(total * 8);
    for (row, is_val) in assignment.iter().enumerate() {
        body.push_str(&format!("{row}\t{}\n", if *is_val { "val" } else { "train" }));
    }
    write(&dir.join(format!("v{base_size}.partition")), &body)?;

    Ok(vec![train, test])
}

/// Marks round(5%) of the rows as validation via a seeded shuffle.
pub fn partition_rows(total: usize, mut rng: rand_chacha::ChaCha8Rng) -> Vec<bool> {
    let val_count = (total * 5 + 50) / 100;
    let mut order: Vec<usize> = (0..total).collect();
    for i in (1..total).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    let mut is_val = vec![false; total];
    for &row in order.iter().take(val_count) {
        is_val[row] = true;
    }
    is_val
}

fn write(path: &Path, body: &str) -> Result<(), SplitError> {
    fs::write(path, body).map_err(|source| SplitError::File { path: path.to_path_buf(), source })
}
