//! Command implementations.
//!
//! Exit-code contract: 0 success, 1 usage or input parse error,
//! 2 generation failure (budget, stall, unpaired, gaps, incomplete grid),
//! 3 verification failure. Diagnostics go to stderr prefixed `error:`;
//! data and reports go to stdout.

use std::fs;
use std::path::{Path, PathBuf};

use propforge_core::cnf::{ground, negate_and_ground};
use propforge_core::dsl::{builtin_catalog, find_property, parse, Formula, PropertyDef};
use propforge_core::eval::check;
use propforge_core::graph::DirectedGraph;
use propforge_core::oracle::{brute_enumerate, differential_test};
use propforge_core::sat::add_symmetry_breaking;
use propforge_datagen::generator::{
    gen_graphperturb, gen_graphrandom, verify_dataset, Family, GenJob, GenLimits,
};
use propforge_datagen::{make_splits, write_dataset, SplitError};
use propforge_metrics::{emit_tables, score_results, MetricsError};
use rayon::prelude::*;

use crate::sizespec::SizeSpec;
use crate::{CheckArgs, GenerateArgs, ScoreArgs, SplitArgs, StatsArgs};

pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> CliError {
        CliError { code: 1, message: message.into() }
    }

    pub fn generation(message: impl Into<String>) -> CliError {
        CliError { code: 2, message: message.into() }
    }

    pub fn verification(message: impl Into<String>) -> CliError {
        CliError { code: 3, message: message.into() }
    }
}

fn resolve_properties(selector: &str) -> Result<Vec<PropertyDef>, CliError> {
    if selector == "all16" {
        return Ok(builtin_catalog());
    }
    let mut out = Vec::new();
    for name in selector.split(',') {
        let name = name.trim();
        out.push(
            find_property(name)
                .ok_or_else(|| CliError::usage(format!("unknown property `{name}`")))?,
        );
    }
    Ok(out)
}

fn resolve_families(family: &str) -> Result<Vec<Family>, CliError> {
    match family {
        "both" => Ok(vec![Family::Random, Family::Perturb]),
        other => Family::parse(other)
            .map(|f| vec![f])
            .ok_or_else(|| CliError::usage(format!("unknown family `{other}`"))),
    }
}

fn output_root(out: &Option<PathBuf>) -> PathBuf {
    out.clone()
        .or_else(|| std::env::var_os("PROPFORGE_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("datasets"))
}

pub fn cmd_generate(args: &GenerateArgs, forced_family: Option<Family>) -> Result<(), CliError> {
    let properties = resolve_properties(&args.property)?;
    let families = match forced_family {
        Some(f) => vec![f],
        None => resolve_families(&args.family)?,
    };
    let spec = SizeSpec::parse(&args.sizes).map_err(CliError::usage)?;

    let mut jobs: Vec<(PropertyDef, Family, usize)> = Vec::new();
    for property in &properties {
        let sizes = spec.resolve(property.base_size).map_err(CliError::usage)?;
        for &family in &families {
            for &size in &sizes {
                jobs.push((property.clone(), family, size));
            }
        }
    }

    if args.dry_run {
        for (property, family, size) in &jobs {
            println!("plan: {}/{}/v{}", property.name, family, size);
        }
        println!("planned jobs: {}", jobs.len());
        return Ok(());
    }

    let root = output_root(&args.out);
    let run_one = |(property, family, size): &(PropertyDef, Family, usize)| -> Result<String, CliError> {
        let mut job = GenJob::new(property.clone(), *family, *size, args.seed);
        job.target_positives = args.positives;
        job.max_fbits = args.max_fbits;
        job.limits = GenLimits {
            enumeration_cap: args.enumeration_cap,
            attempt_cap: args.attempt_cap,
            conflict_budget: args.conflict_budget,
            symmetry_breaking_at_base: !args.no_symmetry_breaking,
            ..GenLimits::default()
        };
        let dataset = match family {
            Family::Random => gen_graphrandom(&job),
            Family::Perturb => gen_graphperturb(&job),
        }
        .map_err(|e| CliError::generation(format!("{}/{}/v{}: {e}", property.name, family, size)))?;
        let report = verify_dataset(&dataset.set, property, job.max_fbits.max(1));
        if !report.ok() {
            return Err(CliError::verification(format!(
                "{}/{}/v{}: {}",
                property.name,
                family,
                size,
                report.render()
            )));
        }
        let manifest = write_dataset(&dataset, &root, args.overwrite)
            .map_err(|e| CliError::generation(e.to_string()))?;
        if !args.quiet {
            eprintln!(
                "wrote {} ({} + {} records{})",
                manifest.dataset_id(),
                manifest.positives,
                manifest.negatives,
                if manifest.exhaustive { ", exhaustive" } else { "" }
            );
        }
        Ok(manifest.dataset_id())
    };

    let results: Vec<Result<String, CliError>> = match args.jobs {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::usage(e.to_string()))?
            .install(|| jobs.par_iter().map(run_one).collect()),
        None => jobs.par_iter().map(run_one).collect(),
    };
    let mut written = 0;
    for result in results {
        match result {
            Ok(_) => written += 1,
            Err(e) => return Err(e),
        }
    }
    if !args.quiet {
        eprintln!("{written} dataset(s) written under {}", root.display());
    }
    Ok(())
}

fn parse_graph_spec(spec: &str) -> Result<DirectedGraph, CliError> {
    let (n_text, bits) = spec
        .split_once(':')
        .ok_or_else(|| CliError::usage(format!("graph spec `{spec}` is not n:bits")))?;
    let n: usize = n_text
        .parse()
        .map_err(|_| CliError::usage(format!("bad node count `{n_text}`")))?;
    DirectedGraph::decode_bitstring(n, bits).map_err(|e| CliError::usage(format!("{spec}: {e}")))
}

/// Property formula from one of: catalog name, inline text, or a DSL file.
fn formula_from(
    property: &Option<String>,
    formula: &Option<String>,
    formula_file: &Option<PathBuf>,
) -> Result<(String, Formula), CliError> {
    let sources =
        usize::from(property.is_some()) + usize::from(formula.is_some()) + usize::from(formula_file.is_some());
    if sources != 1 {
        return Err(CliError::usage(
            "pass exactly one of --property, --formula, --formula-file",
        ));
    }
    if let Some(name) = property {
        let def = find_property(name)
            .ok_or_else(|| CliError::usage(format!("unknown property `{name}`")))?;
        return Ok((def.name, def.formula));
    }
    let (label, text) = match (formula, formula_file) {
        (Some(text), None) => ("formula".to_string(), text.clone()),
        (None, Some(path)) => {
            let body = fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            (
                path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
                body,
            )
        }
        _ => unreachable!("source count checked above"),
    };
    let f = parse(text.trim()).map_err(|e| CliError::usage(e.to_string()))?;
    if !f.is_closed() {
        return Err(CliError::usage("formula must be closed"));
    }
    Ok((label, f))
}

pub fn cmd_check(args: &CheckArgs) -> Result<(), CliError> {
    let (label, formula) = formula_from(&args.property, &args.formula, &args.formula_file)?;
    let mut specs: Vec<String> = args.graph.clone();
    if let Some(path) = &args.graph_file {
        let body = fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        for line in body.lines() {
            let line = line.trim();
            if !line.is_empty() && !line.starts_with('#') {
                specs.push(line.to_string());
            }
        }
    }
    if specs.is_empty() && args.dataset.is_none() {
        return Err(CliError::usage(
            "no graphs given; pass --graph n:bits, --graph-file, or --dataset",
        ));
    }
    for spec in &specs {
        let graph = parse_graph_spec(spec)?;
        let verdict = if check(&formula, &graph) { "satisfies" } else { "violates" };
        println!("{spec}\t{verdict}");
    }
    if let Some(path) = &args.dataset {
        verify_dataset_file(path, &label, &formula)?;
    }
    Ok(())
}

/// Reads a dataset back (checksum enforced) and re-verifies every label,
/// naming the offending line on failure.
fn verify_dataset_file(path: &Path, label: &str, formula: &Formula) -> Result<(), CliError> {
    use propforge_datagen::IoError;
    let (set, manifest) = propforge_datagen::read_dataset(path).map_err(|e| match e {
        IoError::ChecksumMismatch { .. } => CliError::verification(e.to_string()),
        IoError::Parse { .. } | IoError::ManifestParse { .. } => CliError::usage(e.to_string()),
        other => CliError::generation(other.to_string()),
    })?;
    let def = PropertyDef {
        name: label.to_string(),
        formula: formula.clone(),
        base_size: manifest.base_size.max(1),
        category: propforge_core::dsl::PropertyCategory::Basic,
    };
    let report = verify_dataset(&set, &def, manifest.max_fbits.max(1));
    if !report.ok() {
        use propforge_datagen::Violation;
        let mut lines = String::new();
        for v in &report.violations {
            let line = match v {
                Violation::Label { positive: true, index }
                | Violation::Duplicate { positive: true, index } => Some(index + 1),
                Violation::Label { positive: false, index }
                | Violation::Duplicate { positive: false, index } => {
                    Some(set.positives.len() + index + 1)
                }
                Violation::PairDistance { neg_index, .. } | Violation::PairIndex { neg_index, .. } => {
                    Some(set.positives.len() + neg_index + 1)
                }
                _ => None,
            };
            match line {
                Some(l) => lines.push_str(&format!("  line {l}: {v}\n")),
                None => lines.push_str(&format!("  {v}\n")),
            }
        }
        return Err(CliError::verification(format!(
            "{}: {} violation(s) against {label}\n{lines}",
            path.display(),
            report.violations.len()
        )));
    }
    println!(
        "{}: {} + {} records verified against {label}",
        path.display(),
        set.positives.len(),
        set.negatives.len()
    );
    Ok(())
}

pub fn cmd_split(args: &SplitArgs) -> Result<(), CliError> {
    let property = find_property(&args.property)
        .ok_or_else(|| CliError::usage(format!("unknown property `{}`", args.property)))?;
    let family = Family::parse(&args.family)
        .ok_or_else(|| CliError::usage(format!("unknown family `{}`", args.family)))?;
    let root = output_root(&args.root);
    let specs = make_splits(&root, &property.name, property.base_size, family, args.seed)
        .map_err(|e| match e {
            SplitError::Gap { .. } => CliError::generation(e.to_string()),
            other => CliError::generation(other.to_string()),
        })?;
    for spec in &specs {
        println!("{}: {} dataset(s)", spec.category.name(), spec.dataset_ids.len());
    }
    let dir = root.join(&property.name).join(family.as_str());
    println!(
        "split manifests and v{} partition written under {}",
        property.base_size,
        dir.display()
    );
    Ok(())
}

pub fn cmd_score(args: &ScoreArgs) -> Result<(), CliError> {
    let body = fs::read_to_string(&args.results)
        .map_err(|e| CliError::usage(format!("{}: {e}", args.results.display())))?;
    let scores = score_results(&body, args.sizes).map_err(|e| match e {
        MetricsError::IncompleteGrid { .. } | MetricsError::WrongPointCount { .. } => {
            CliError::generation(e.to_string())
        }
        other => CliError::usage(other.to_string()),
    })?;
    let out_dir = args.out.clone().unwrap_or_else(|| PathBuf::from("scores"));
    let written =
        emit_tables(&scores, &out_dir).map_err(|e| CliError::generation(e.to_string()))?;
    print!("{}", propforge_metrics::tables::render_overall_table(&scores));
    eprintln!("{} table(s) written under {}", written.len(), out_dir.display());
    Ok(())
}

pub fn cmd_stats(args: &StatsArgs) -> Result<(), CliError> {
    let (label, formula) = formula_from(&args.property, &args.formula, &args.formula_file)?;
    let n = args.n;
    let mut did_something = false;

    if let Some(path) = &args.emit_cnf {
        let mut cnf = if args.negate {
            negate_and_ground(&formula, n)
        } else {
            ground(&formula, n)
        }
        .map_err(|e| CliError::generation(e.to_string()))?;
        if args.symmetry_breaking {
            cnf = add_symmetry_breaking(&cnf, n);
        }
        fs::write(path, cnf.to_dimacs())
            .map_err(|e| CliError::generation(format!("{}: {e}", path.display())))?;
        eprintln!("cnf written to {}", path.display());
        did_something = true;
    }

    let def = PropertyDef {
        name: label.clone(),
        formula: formula.clone(),
        base_size: 1,
        category: propforge_core::dsl::PropertyCategory::Basic,
    };

    if args.exact {
        let graphs =
            brute_enumerate(&def, n).map_err(|e| CliError::generation(e.to_string()))?;
        let total: u128 = 1 << (n * n);
        println!("property: {label}");
        println!("n: {n}");
        println!("positives: {}", graphs.len());
        println!("fraction: {}/{} = {:.4e}", graphs.len(), total, graphs.len() as f64 / total as f64);
        did_something = true;
    }

    if args.differential {
        let report =
            differential_test(&def, n).map_err(|e| CliError::generation(e.to_string()))?;
        print!("{}", report.render());
        if !report.agree() {
            return Err(CliError::verification(format!(
                "differential disagreement for {label} at n={n}"
            )));
        }
        did_something = true;
    }

    if args.formula_only {
        if label != "total_order" {
            return Err(CliError::usage(
                "--formula-only has a closed form only for total_order (n!/2^(n*n))",
            ));
        }
        let ln_count: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
        let log10 = (ln_count - (n * n) as f64 * 2f64.ln()) / 10f64.ln();
        let exponent = log10.floor();
        let mantissa = 10f64.powf(log10 - exponent);
        println!("labeled positives: {n}!");
        println!("fraction: {n}!/2^{} = {mantissa:.3}e{exponent}", n * n);
        did_something = true;
    }

    if !did_something {
        return Err(CliError::usage(
            "pass at least one of --exact, --differential, --formula-only, --emit-cnf",
        ));
    }
    Ok(())
}
