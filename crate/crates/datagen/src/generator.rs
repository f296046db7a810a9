//! Dataset builders for the two families.
//!
//! GraphRandom pairs every positive with an independently drawn random
//! graph that violates the property. GraphPerturb pairs every positive
//! with a near-duplicate negative obtained by flipping one or two bits of
//! its adjacency string and re-checking the property.
//!
//! Positives come from the SAT route: exhaustive (symmetry-reduced,
//! capped) enumeration at the base size, randomized sampling above it.
//! Everything is a pure function of the job, seed included.

use std::collections::HashSet;

use propforge_core::bits::BitString;
use propforge_core::cnf::{ground, negate_and_ground, GroundError};
use propforge_core::dsl::PropertyDef;
use propforge_core::eval::check;
use propforge_core::graph::{DirectedGraph, EdgeIndex, GraphError};
use propforge_core::sat::{
    add_symmetry_breaking, enumerate_chrono, sample, SolveConfig, SolveMode, SolverError,
    DEFAULT_CONFLICT_BUDGET,
};
use rand_chacha::rand_core::RngCore;
use rand_chacha::ChaCha8Rng;

use crate::seeds::{self, SeedMaterial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Random,
    Perturb,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::Perturb => "perturb",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "random" => Some(Family::Random),
            "perturb" => Some(Family::Perturb),
            _ => None,
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Desk-scale guardrails; the defaults are the normative values recorded
/// in manifests.
#[derive(Debug, Clone)]
pub struct GenLimits {
    /// Stop base-size enumeration here and mark the set non-exhaustive.
    pub enumeration_cap: usize,
    /// Per-(positive, flip-width) attempt ceiling, on top of C(n*n, f).
    pub attempt_cap: usize,
    /// Consecutive acceptless random-negative draws before the solver
    /// fallback engages.
    pub stall_guard: u64,
    /// Admissible fraction of unpaired positives (perturb family).
    pub unpaired_threshold: f64,
    pub conflict_budget: u64,
    /// Apply lex-leader symmetry breaking for base-size enumeration.
    pub symmetry_breaking_at_base: bool,
}

impl Default for GenLimits {
    fn default() -> Self {
        GenLimits {
            enumeration_cap: 1_000_000,
            attempt_cap: 100_000,
            stall_guard: 1_000_000,
            unpaired_threshold: 0.0,
            conflict_budget: DEFAULT_CONFLICT_BUDGET,
            symmetry_breaking_at_base: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenJob {
    pub property: PropertyDef,
    pub size: usize,
    /// M: positives to sample at sizes above base.
    pub target_positives: usize,
    pub max_fbits: usize,
    /// Master seed; the per-job seed is derived from it and the job
    /// coordinates.
    pub seed: u64,
    pub family: Family,
    pub limits: GenLimits,
}

impl GenJob {
    pub fn new(property: PropertyDef, family: Family, size: usize, seed: u64) -> GenJob {
        GenJob {
            property,
            size,
            target_positives: 5000,
            max_fbits: 2,
            seed,
            family,
            limits: GenLimits::default(),
        }
    }

    pub fn job_seed(&self) -> SeedMaterial {
        seeds::job_seed(self.seed, &self.property.name, self.family, self.size)
    }

    fn validate(&self) -> Result<(), GenError> {
        if self.size == 0 {
            return Err(GenError::BadJob("size must be at least 1".into()));
        }
        if self.target_positives == 0 {
            return Err(GenError::BadJob("target_positives must be at least 1".into()));
        }
        if self.max_fbits == 0 {
            return Err(GenError::BadJob("max_fbits must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSet {
    pub positives: Vec<DirectedGraph>,
    pub negatives: Vec<DirectedGraph>,
    /// Perturb family: `pair_map[j]` is the index of the positive paired
    /// with `negatives[j]`.
    pub pair_map: Option<Vec<usize>>,
}

/// Generation facts recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub property: String,
    pub family: Family,
    pub size: usize,
    pub base_size: usize,
    pub seed: u64,
    pub sampler: String,
    pub symmetry_breaking: bool,
    pub exhaustive: bool,
    /// 0 for the random family.
    pub max_fbits: usize,
    pub attempt_cap: usize,
    pub enumeration_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedDataset {
    pub set: LabeledSet,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenError {
    #[error("invalid job: {0}")]
    BadJob(String),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error("solver failure: {0}")]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("no positive samples exist for {property} at size {size}")]
    NoPositives { property: String, size: usize },
    #[error("negative generation stalled: produced {produced} of {needed}")]
    NegativesExhausted { produced: usize, needed: usize },
    #[error("{unpaired} of {total} positives could not be paired within max_fbits")]
    UnpairedPositives { unpaired: usize, total: usize },
}

/// GraphRandom: enumerated/sampled positives plus rejection-sampled random
/// negatives, deduplicated and balanced.
pub fn gen_graphrandom(job: &GenJob) -> Result<GeneratedDataset, GenError> {
    job.validate()?;
    let material = job.job_seed();
    let (positives, exhaustive, symmetry) = generate_positives(job, &material)?;
    let negatives = random_negatives(job, &material, positives.len())?;
    let provenance = Provenance {
        property: job.property.name.clone(),
        family: Family::Random,
        size: job.size,
        base_size: job.property.base_size,
        seed: material.as_u64(),
        sampler: sampler_id(job).to_string(),
        symmetry_breaking: symmetry,
        exhaustive,
        max_fbits: 0,
        attempt_cap: job.limits.attempt_cap,
        enumeration_cap: job.limits.enumeration_cap,
    };
    Ok(GeneratedDataset {
        set: LabeledSet { positives, negatives, pair_map: None },
        provenance,
    })
}

/// GraphPerturb: every positive is paired with a verified negative at
/// Hamming distance in [1, max_fbits], searching one flip width at a time
/// with at most min(C(n*n, f), attempt_cap) random candidates each.
pub fn gen_graphperturb(job: &GenJob) -> Result<GeneratedDataset, GenError> {
    job.validate()?;
    let material = job.job_seed();
    let (positives, exhaustive, symmetry) = generate_positives(job, &material)?;
    let bit_len = job.size * job.size;

    let mut taken: HashSet<BitString> = HashSet::with_capacity(positives.len());
    let mut paired: Vec<Option<DirectedGraph>> = vec![None; positives.len()];
    let mut unpaired = 0usize;
    for (pi, s) in positives.iter().enumerate() {
        let mut rng = seeds::positive_seed(&material, &s.encode_bitstring()).rng();
        let mut found = None;
        'widths: for f in 1..=job.max_fbits {
            let attempts = combinations(bit_len, f).min(job.limits.attempt_cap as u128) as usize;
            for _ in 0..attempts {
                let positions = draw_distinct_positions(&mut rng, bit_len, f);
                let t = s.flip_bits(&positions)?;
                if !check(&job.property.formula, &t) && !taken.contains(t.bits()) {
                    taken.insert(t.bits().clone());
                    found = Some(t);
                    break 'widths;
                }
            }
        }
        match found {
            Some(t) => paired[pi] = Some(t),
            None => unpaired += 1,
        }
    }

    if unpaired as f64 > job.limits.unpaired_threshold * positives.len() as f64 {
        return Err(GenError::UnpairedPositives { unpaired, total: positives.len() });
    }
    // Drop unpaired positives (none under the default threshold of 0).
    let mut kept_positives = Vec::with_capacity(positives.len() - unpaired);
    let mut negatives = Vec::with_capacity(positives.len() - unpaired);
    let mut pair_map = Vec::with_capacity(positives.len() - unpaired);
    for (s, t) in positives.into_iter().zip(paired) {
        if let Some(t) = t {
            pair_map.push(kept_positives.len());
            kept_positives.push(s);
            negatives.push(t);
        }
    }
    let provenance = Provenance {
        property: job.property.name.clone(),
        family: Family::Perturb,
        size: job.size,
        base_size: job.property.base_size,
        seed: material.as_u64(),
        sampler: sampler_id(job).to_string(),
        symmetry_breaking: symmetry,
        exhaustive,
        max_fbits: job.max_fbits,
        attempt_cap: job.limits.attempt_cap,
        enumeration_cap: job.limits.enumeration_cap,
    };
    Ok(GeneratedDataset {
        set: LabeledSet { positives: kept_positives, negatives, pair_map: Some(pair_map) },
        provenance,
    })
}

fn sampler_id(job: &GenJob) -> &'static str {
    if job.size == job.property.base_size {
        "enumerate-cdcl"
    } else {
        // Randomized branching, not uniform over models.
        "randomized-cdcl"
    }
}

fn generate_positives(
    job: &GenJob,
    material: &SeedMaterial,
) -> Result<(Vec<DirectedGraph>, bool, bool), GenError> {
    let n = job.size;
    let cnf = ground(&job.property.formula, n)?;
    let at_base = n == job.property.base_size;
    let symmetry = at_base && job.limits.symmetry_breaking_at_base;
    let (models, exhausted) = if at_base {
        let searched = if symmetry { add_symmetry_breaking(&cnf, n) } else { cnf };
        let cfg = SolveConfig {
            seed: material.child("positives").as_u64(),
            mode: SolveMode::EnumerateAll,
            max_models: Some(job.limits.enumeration_cap),
            symmetry_breaking: symmetry,
            randomize: false,
            conflict_budget: job.limits.conflict_budget,
        };
        let out = enumerate_chrono(&searched, n * n, &cfg)?;
        (out.models, out.exhausted)
    } else {
        let cfg = SolveConfig {
            seed: material.child("positives").as_u64(),
            mode: SolveMode::Sample,
            max_models: Some(job.target_positives),
            symmetry_breaking: false,
            randomize: true,
            conflict_budget: job.limits.conflict_budget,
        };
        let out = sample(&cnf, n * n, job.target_positives, &cfg)?;
        (out.models, out.exhausted)
    };
    if models.is_empty() {
        return Err(GenError::NoPositives { property: job.property.name.clone(), size: n });
    }
    let graphs = models
        .into_iter()
        .map(|bits| DirectedGraph::from_bits(n, bits).expect("projection has width n*n"))
        .collect();
    Ok((graphs, exhausted, symmetry))
}

/// Uniform random graphs filtered by the evaluator, drawn until balance.
/// If draws stall (positives dominating the space), falls back to sampling
/// the negated grounding through the solver.
fn random_negatives(
    job: &GenJob,
    material: &SeedMaterial,
    needed: usize,
) -> Result<Vec<DirectedGraph>, GenError> {
    let n = job.size;
    let mut rng = material.child("negatives").rng();
    let mut negatives: Vec<DirectedGraph> = Vec::with_capacity(needed);
    let mut seen: HashSet<BitString> = HashSet::with_capacity(needed);
    let mut stall = 0u64;
    while negatives.len() < needed {
        let g = random_graph(n, &mut rng);
        if !check(&job.property.formula, &g) && seen.insert(g.bits().clone()) {
            negatives.push(g);
            stall = 0;
        } else {
            stall += 1;
            if stall >= job.limits.stall_guard {
                return solver_negatives(job, material, needed, negatives, seen);
            }
        }
    }
    Ok(negatives)
}

fn solver_negatives(
    job: &GenJob,
    material: &SeedMaterial,
    needed: usize,
    mut negatives: Vec<DirectedGraph>,
    seen: HashSet<BitString>,
) -> Result<Vec<DirectedGraph>, GenError> {
    let n = job.size;
    let mut cnf = negate_and_ground(&job.property.formula, n)?;
    // Exclude negatives already drawn.
    for bits in &seen {
        let blocking: Vec<i32> = (0..n * n)
            .map(|t| if bits.get(t) { -((t + 1) as i32) } else { (t + 1) as i32 })
            .collect();
        cnf.clauses.push(blocking);
    }
    let cfg = SolveConfig {
        seed: material.child("negatives-solver").as_u64(),
        mode: SolveMode::Sample,
        max_models: None,
        symmetry_breaking: false,
        randomize: true,
        conflict_budget: job.limits.conflict_budget,
    };
    let out = sample(&cnf, n * n, needed - negatives.len(), &cfg)?;
    for bits in out.models {
        negatives.push(DirectedGraph::from_bits(n, bits).expect("projection has width n*n"));
    }
    if negatives.len() < needed {
        return Err(GenError::NegativesExhausted { produced: negatives.len(), needed });
    }
    Ok(negatives)
}

fn random_graph(n: usize, rng: &mut ChaCha8Rng) -> DirectedGraph {
    let mut word = 0u64;
    DirectedGraph::from_fn(n, |t| {
        if t % 64 == 0 {
            word = rng.next_u64();
        }
        word >> (t % 64) & 1 == 1
    })
    .expect("valid node count")
}

fn draw_distinct_positions(rng: &mut ChaCha8Rng, limit: usize, count: usize) -> Vec<EdgeIndex> {
    let mut out: Vec<EdgeIndex> = Vec::with_capacity(count);
    while out.len() < count {
        let t = (rng.next_u64() % limit as u64) as usize;
        if !out.contains(&EdgeIndex(t)) {
            out.push(EdgeIndex(t));
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> u128 {
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    result
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A record whose label disagrees with the evaluator.
    Label { positive: bool, index: usize },
    Duplicate { positive: bool, index: usize },
    Imbalance { positives: usize, negatives: usize },
    /// Perturb: paired negative outside [1, max_fbits] Hamming distance.
    PairDistance { neg_index: usize, distance: usize, max_fbits: usize },
    PairIndex { neg_index: usize, value: usize },
    /// Perturb: pair map must cover every negative.
    PairCount { expected: usize, got: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Label { positive, index } => {
                let side = if *positive { "positive" } else { "negative" };
                write!(f, "{side} {index}: label disagrees with the evaluator")
            }
            Violation::Duplicate { positive, index } => {
                let side = if *positive { "positive" } else { "negative" };
                write!(f, "{side} {index}: duplicate bitstring")
            }
            Violation::Imbalance { positives, negatives } => {
                write!(f, "imbalanced: {positives} positives vs {negatives} negatives")
            }
            Violation::PairDistance { neg_index, distance, max_fbits } => {
                write!(f, "negative {neg_index}: pair distance {distance} outside 1..={max_fbits}")
            }
            Violation::PairIndex { neg_index, value } => {
                write!(f, "negative {neg_index}: pair index {value} out of range")
            }
            Violation::PairCount { expected, got } => {
                write!(f, "pair map covers {got} of {expected} negatives")
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn render(&self) -> String {
        if self.ok() {
            "ok: no violations\n".to_string()
        } else {
            let mut out = format!("{} violation(s)\n", self.violations.len());
            for v in &self.violations {
                out.push_str(&format!("  {v}\n"));
            }
            out
        }
    }
}

/// Post-generation audit: re-checks every label with the evaluator, plus
/// balance, duplicate-freedom, and (perturb) pairing distance bounds.
pub fn verify_dataset(set: &LabeledSet, property: &PropertyDef, max_fbits: usize) -> VerifyReport {
    let mut violations = Vec::new();
    if set.positives.len() != set.negatives.len() {
        violations.push(Violation::Imbalance {
            positives: set.positives.len(),
            negatives: set.negatives.len(),
        });
    }
    let mut seen: HashSet<&BitString> = HashSet::with_capacity(set.positives.len());
    for (i, g) in set.positives.iter().enumerate() {
        if !check(&property.formula, g) {
            violations.push(Violation::Label { positive: true, index: i });
        }
        if !seen.insert(g.bits()) {
            violations.push(Violation::Duplicate { positive: true, index: i });
        }
    }
    let mut seen_neg: HashSet<&BitString> = HashSet::with_capacity(set.negatives.len());
    for (i, g) in set.negatives.iter().enumerate() {
        if check(&property.formula, g) {
            violations.push(Violation::Label { positive: false, index: i });
        }
        if !seen_neg.insert(g.bits()) {
            violations.push(Violation::Duplicate { positive: false, index: i });
        }
    }
    if let Some(pair_map) = &set.pair_map {
        if pair_map.len() != set.negatives.len() {
            violations.push(Violation::PairCount {
                expected: set.negatives.len(),
                got: pair_map.len(),
            });
        }
        for (j, &pi) in pair_map.iter().enumerate() {
            if pi >= set.positives.len() {
                violations.push(Violation::PairIndex { neg_index: j, value: pi });
                continue;
            }
            if j >= set.negatives.len() {
                continue;
            }
            match set.positives[pi].hamming(&set.negatives[j]) {
                Ok(d) if (1..=max_fbits).contains(&d) => {}
                Ok(d) => violations.push(Violation::PairDistance {
                    neg_index: j,
                    distance: d,
                    max_fbits,
                }),
                Err(_) => violations.push(Violation::PairIndex { neg_index: j, value: pi }),
            }
        }
    }
    VerifyReport { violations }
}
