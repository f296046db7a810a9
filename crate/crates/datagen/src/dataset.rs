//! Bit-exact dataset files and manifests.
//!
//! Data file: one record per line, `<label>\t<n>\t<bitstring>[\t<pair_ref>]`,
//! positives first in emission order, then negatives. `pair_ref` is the
//! 0-based line index of the paired positive (perturb negatives only).
//! The manifest is adjacent structured text with a fixed key order; its
//! checksum is the SHA-256 of the data file bytes.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use propforge_core::graph::DirectedGraph;
use sha2::{Digest, Sha256};

use crate::generator::{Family, GeneratedDataset, LabeledSet, Provenance};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetManifest {
    pub property: String,
    pub family: Family,
    pub size: usize,
    pub base_size: usize,
    pub positives: usize,
    pub negatives: usize,
    pub seed: u64,
    pub sampler: String,
    pub symmetry_breaking: bool,
    pub exhaustive: bool,
    pub max_fbits: usize,
    pub attempt_cap: usize,
    pub enumeration_cap: usize,
    pub checksum_sha256: String,
    pub tool_version: String,
}

impl DatasetManifest {
    /// `<property>/<family>/v<size>`, the dataset id used in split specs
    /// and results files.
    pub fn dataset_id(&self) -> String {
        format!("{}/{}/v{}", self.property, self.family, self.size)
    }

    fn render(&self) -> String {
        format!(
            "property: {}\nfamily: {}\nsize: {}\nbase_size: {}\npositives: {}\nnegatives: {}\nseed: {}\nsampler: {}\nsymmetry_breaking: {}\nexhaustive: {}\nmax_fbits: {}\nattempt_cap: {}\nenumeration_cap: {}\nchecksum_sha256: {}\ntool_version: {}\n",
            self.property,
            self.family,
            self.size,
            self.base_size,
            self.positives,
            self.negatives,
            self.seed,
            self.sampler,
            self.symmetry_breaking,
            self.exhaustive,
            self.max_fbits,
            self.attempt_cap,
            self.enumeration_cap,
            self.checksum_sha256,
            self.tool_version,
        )
    }

    fn parse(text: &str, path: &Path) -> Result<DatasetManifest, IoError> {
        let mut fields: HashMap<&str, &str> = HashMap::new();
        for line in text.lines() {
            if line.trim().is_empty() {
                continue;
            }
            let (key, value) = line.split_once(':').ok_or_else(|| IoError::ManifestParse {
                path: path.to_path_buf(),
                message: format!("malformed line `{line}`"),
            })?;
            fields.insert(key.trim(), value.trim());
        }
        let get = |key: &str| {
            fields.get(key).copied().ok_or_else(|| IoError::ManifestParse {
                path: path.to_path_buf(),
                message: format!("missing field `{key}`"),
            })
        };
        let parse_usize = |key: &str| -> Result<usize, IoError> {
            get(key)?.parse().map_err(|_| IoError::ManifestParse {
                path: path.to_path_buf(),
                message: format!("field `{key}` is not an integer"),
            })
        };
        let parse_bool = |key: &str| -> Result<bool, IoError> {
            get(key)?.parse().map_err(|_| IoError::ManifestParse {
                path: path.to_path_buf(),
                message: format!("field `{key}` is not a boolean"),
            })
        };
        let family_text = get("family")?;
        let family = Family::parse(family_text).ok_or_else(|| IoError::ManifestParse {
            path: path.to_path_buf(),
            message: format!("unknown family `{family_text}`"),
        })?;
        Ok(DatasetManifest {
            property: get("property")?.to_string(),
            family,
            size: parse_usize("size")?,
            base_size: parse_usize("base_size")?,
            positives: parse_usize("positives")?,
            negatives: parse_usize("negatives")?,
            seed: get("seed")?.parse().map_err(|_| IoError::ManifestParse {
                path: path.to_path_buf(),
                message: "field `seed` is not an integer".into(),
            })?,
            sampler: get("sampler")?.to_string(),
            symmetry_breaking: parse_bool("symmetry_breaking")?,
            exhaustive: parse_bool("exhaustive")?,
            max_fbits: parse_usize("max_fbits")?,
            attempt_cap: parse_usize("attempt_cap")?,
            enumeration_cap: parse_usize("enumeration_cap")?,
            checksum_sha256: get("checksum_sha256")?.to_string(),
            tool_version: get("tool_version")?.to_string(),
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} already exists (pass overwrite to replace)")]
    AlreadyExists { path: PathBuf },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{path}: manifest error: {message}")]
    ManifestParse { path: PathBuf, message: String },
    #[error("{path}: checksum mismatch (manifest {expected}, file {actual})")]
    ChecksumMismatch { path: PathBuf, expected: String, actual: String },
    #[error("{path}: record counts do not match manifest ({message})")]
    CountMismatch { path: PathBuf, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io { path: path.to_path_buf(), source }
}

/// Data-file path for a dataset id inside an output root.
pub fn data_path(root: &Path, property: &str, family: Family, size: usize) -> PathBuf {
    root.join(property).join(family.as_str()).join(format!("v{size}.data"))
}

pub fn manifest_path_for(data: &Path) -> PathBuf {
    data.with_extension("manifest")
}

fn render_records(set: &LabeledSet) -> String {
    let mut out = String::new();
    for g in &set.positives {
        out.push_str(&format!("1\t{}\t{}\n", g.node_count(), g.encode_bitstring()));
    }
    for (j, g) in set.negatives.iter().enumerate() {
        match set.pair_map.as_ref().and_then(|m| m.get(j)) {
            Some(&pi) => out.push_str(&format!(
                "0\t{}\t{}\t{}\n",
                g.node_count(),
                g.encode_bitstring(),
                pi
            )),
            None => out.push_str(&format!("0\t{}\t{}\n", g.node_count(), g.encode_bitstring())),
        }
    }
    out
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Writes the data file and manifest atomically (temp file + rename).
pub fn write_dataset(
    dataset: &GeneratedDataset,
    root: &Path,
    overwrite: bool,
) -> Result<DatasetManifest, IoError> {
    let p = &dataset.provenance;
    let data = data_path(root, &p.property, p.family, p.size);
    let manifest_file = manifest_path_for(&data);
    if !overwrite && (data.exists() || manifest_file.exists()) {
        return Err(IoError::AlreadyExists { path: data });
    }
    let dir = data.parent().expect("data path has a parent");
    fs::create_dir_all(dir).map_err(io_err(dir))?;

    let body = render_records(&dataset.set);
    let manifest = manifest_from(p, &dataset.set, sha256_hex(body.as_bytes()));

    write_atomic(&data, body.as_bytes())?;
    write_atomic(&manifest_file, manifest.render().as_bytes())?;
    Ok(manifest)
}

fn manifest_from(p: &Provenance, set: &LabeledSet, checksum: String) -> DatasetManifest {
    DatasetManifest {
        property: p.property.clone(),
        family: p.family,
        size: p.size,
        base_size: p.base_size,
        positives: set.positives.len(),
        negatives: set.negatives.len(),
        seed: p.seed,
        sampler: p.sampler.clone(),
        symmetry_breaking: p.symmetry_breaking,
        exhaustive: p.exhaustive,
        max_fbits: p.max_fbits,
        attempt_cap: p.attempt_cap,
        enumeration_cap: p.enumeration_cap,
        checksum_sha256: checksum,
        tool_version: TOOL_VERSION.to_string(),
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    use std::sync::atomic::{AtomicU64, Ordering};
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    // Unique temp name so concurrent writers of the same target cannot
    // clobber each other's staging file.
    let tmp = path.with_extension(format!(
        "tmp.{}.{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    {
        let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
        f.write_all(bytes).map_err(io_err(&tmp))?;
    }
    fs::rename(&tmp, path).map_err(io_err(path))?;
    Ok(())
}

/// Reads a dataset back; verifies the manifest checksum and record counts.
/// Label verification against a property is a separate pass
/// (`generator::verify_dataset`).
pub fn read_dataset(data: &Path) -> Result<(LabeledSet, DatasetManifest), IoError> {
    let manifest_file = manifest_path_for(data);
    let manifest_text = fs::read_to_string(&manifest_file).map_err(io_err(&manifest_file))?;
    let manifest = DatasetManifest::parse(&manifest_text, &manifest_file)?;
    let body = fs::read_to_string(data).map_err(io_err(data))?;

    let actual = sha256_hex(body.as_bytes());
    if actual != manifest.checksum_sha256 {
        return Err(IoError::ChecksumMismatch {
            path: data.to_path_buf(),
            expected: manifest.checksum_sha256,
            actual,
        });
    }

    let mut positives = Vec::with_capacity(manifest.positives);
    let mut negatives = Vec::with_capacity(manifest.negatives);
    let mut pair_refs: Vec<Option<usize>> = Vec::new();
    for (lineno, line) in body.lines().enumerate() {
        let parse_err = |message: String| IoError::Parse {
            path: data.to_path_buf(),
            line: lineno + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 3 || fields.len() > 4 {
            return Err(parse_err(format!("expected 3 or 4 fields, found {}", fields.len())));
        }
        let label: u8 = fields[0]
            .parse()
            .ok()
            .filter(|l| *l <= 1)
            .ok_or_else(|| parse_err(format!("label `{}` is not 0 or 1", fields[0])))?;
        let n: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(format!("bad node count `{}`", fields[1])))?;
        let graph = DirectedGraph::decode_bitstring(n, fields[2])
            .map_err(|e| parse_err(e.to_string()))?;
        let pair_ref = match fields.get(3) {
            None => None,
            Some(raw) => Some(
                raw.parse::<usize>()
                    .map_err(|_| parse_err(format!("bad pair reference `{raw}`")))?,
            ),
        };
        if label == 1 {
            if !negatives.is_empty() {
                return Err(parse_err("positive record after negatives".into()));
            }
            if pair_ref.is_some() {
                return Err(parse_err("positive record carries a pair reference".into()));
            }
            positives.push(graph);
        } else {
            negatives.push(graph);
            pair_refs.push(pair_ref);
        }
    }

    if positives.len() != manifest.positives || negatives.len() != manifest.negatives {
        return Err(IoError::CountMismatch {
            path: data.to_path_buf(),
            message: format!(
                "manifest says {}+{}, file has {}+{}",
                manifest.positives,
                manifest.negatives,
                positives.len(),
                negatives.len()
            ),
        });
    }

    let with_refs = pair_refs.iter().filter(|r| r.is_some()).count();
    let pair_map = if with_refs == 0 {
        None
    } else if with_refs == negatives.len() {
        Some(pair_refs.into_iter().map(|r| r.unwrap()).collect())
    } else {
        return Err(IoError::CountMismatch {
            path: data.to_path_buf(),
            message: format!("{with_refs} of {} negatives carry pair references", negatives.len()),
        });
    };

    Ok((LabeledSet { positives, negatives, pair_map }, manifest))
}
