//! Acceptance suite.
//!
//! Each criterion is one test that prints a `[PASS]` line with its
//! headline numbers. The dataset-building criteria share one fixture tree
//! built through the real binary: four properties in both families across
//! all eleven sizes, plus the connex perturb slice.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;
use std::time::Instant;

use propforge_core::dsl::{builtin_catalog, find_property, parse, Formula};
use propforge_core::eval::check;
use propforge_core::graph::{DirectedGraph, EdgeIndex};
use propforge_core::oracle::{brute_enumerate, differential_test, KNOWN_COUNTS_N3};
use propforge_datagen::generator::{gen_graphperturb, verify_dataset, Family, GenJob};
use propforge_datagen::{data_path, read_dataset};

const MASTER_SEED: &str = "42";
const FULL_PROPERTIES: [&str; 4] =
    ["reflexivity", "irreflexivity", "total_order", "partial_order"];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_propforge"))
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("binary runs");
    assert!(
        out.status.success(),
        "command failed ({:?}):\nstdout: {}\nstderr: {}",
        cmd.get_args().collect::<Vec<_>>(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr),
    );
    out
}

struct Fixture {
    root: PathBuf,
    build_secs: f64,
    _dir: tempfile::TempDir,
}

static FIXTURE: OnceLock<Fixture> = OnceLock::new();

/// Builds the shared dataset tree once: the four full properties in both
/// families (sizes base..base+10, 5000+5000 above base) and connex perturb
/// for sizes 6..10.
fn fixture() -> &'static Fixture {
    FIXTURE.get_or_init(|| {
        let dir = tempfile::tempdir().expect("tempdir");
        let root = dir.path().to_path_buf();
        let t0 = Instant::now();
        run_ok(bin()
            .args(["generate", "--property"])
            .arg(FULL_PROPERTIES.join(","))
            .args(["--family", "both", "--sizes", "base..base+10"])
            .args(["--seed", MASTER_SEED, "--positives", "5000", "-q", "--out"])
            .arg(&root));
        run_ok(bin()
            .args(["perturb", "--property", "connex", "--sizes", "base..base+4"])
            .args(["--seed", MASTER_SEED, "--positives", "5000", "-q", "--out"])
            .arg(&root));
        Fixture { root, build_secs: t0.elapsed().as_secs_f64(), _dir: dir }
    })
}

fn read_verified(
    root: &Path,
    property: &str,
    family: Family,
    size: usize,
) -> (propforge_datagen::LabeledSet, propforge_datagen::DatasetManifest) {
    let path = data_path(root, property, family, size);
    let (set, manifest) = read_dataset(&path).expect("dataset reads back");
    let def = find_property(property).unwrap();
    let report = verify_dataset(&set, &def, manifest.max_fbits.max(2));
    assert!(report.ok(), "{property}/{family}/v{size}: {}", report.render());
    (set, manifest)
}

#[test]
fn criterion_1_oracle_equivalence() {
    let t0 = Instant::now();
    let mut checked = 0;
    for property in builtin_catalog() {
        for n in 2..=4usize {
            let report = differential_test(&property, n).expect("differential run");
            assert!(
                report.agree(),
                "criterion 1: {} at n={n} disagrees:\n{}",
                property.name,
                report.render()
            );
            assert_eq!(report.brute_count, report.solver_count);
            checked += 1;
        }
    }
    let elapsed = t0.elapsed();
    assert!(
        elapsed.as_secs() < 120,
        "criterion 1: oracle equivalence took {elapsed:?} (budget 2 minutes)"
    );
    println!(
        "[PASS] criterion 1: SAT enumeration == brute force for {checked} (property, n) pairs in {elapsed:.1?}"
    );
}

#[test]
fn criterion_2_known_count_anchors() {
    for (name, expected) in KNOWN_COUNTS_N3 {
        let property = find_property(name).unwrap();
        let got = brute_enumerate(&property, 3).unwrap().len() as u64;
        assert_eq!(got, expected, "criterion 2: {name} at n=3");
    }
    println!("[PASS] criterion 2: all 16 known n=3 counts match exactly");
}

#[test]
fn criterion_3_graphrandom_desk_build() {
    let fx = fixture();
    for name in ["reflexivity", "total_order"] {
        let base = find_property(name).unwrap().base_size;
        for size in base..=base + 10 {
            let (set, manifest) = read_verified(&fx.root, name, Family::Random, size);
            if size > base {
                assert_eq!(
                    set.positives.len() + set.negatives.len(),
                    10_000,
                    "criterion 3: {name}/random/v{size} must hold exactly 10000 records"
                );
            } else {
                assert!(manifest.exhaustive, "criterion 3: base dataset must be exhaustive");
            }
        }
    }
    assert!(
        fx.build_secs < 900.0,
        "criterion 3: fixture build took {:.0}s (budget 15 minutes)",
        fx.build_secs
    );
    println!(
        "[PASS] criterion 3: reflexivity + total_order random builds verified clean ({:.0}s for the whole fixture)",
        fx.build_secs
    );
}

#[test]
fn criterion_4_graphperturb_pairing() {
    let fx = fixture();
    let mut pairs_checked = 0usize;
    let mut jobs = vec![("reflexivity", 5usize, 15usize)];
    jobs.push(("connex", 6, 10));
    for (name, lo, hi) in jobs {
        for size in lo..=hi {
            let (set, _) = read_verified(&fx.root, name, Family::Perturb, size);
            let pair_map = set.pair_map.as_ref().expect("perturb datasets carry pairs");
            assert_eq!(
                pair_map.len(),
                set.positives.len(),
                "criterion 4: every positive of {name}/v{size} must be paired"
            );
            assert_eq!(set.negatives.len(), set.positives.len());
            for (j, &pi) in pair_map.iter().enumerate() {
                let d = set.positives[pi].hamming(&set.negatives[j]).unwrap();
                assert!(
                    (1..=2).contains(&d),
                    "criterion 4: {name}/v{size} pair {j} at distance {d}"
                );
            }
            pairs_checked += pair_map.len();
        }
    }

    // The complete digraph needs distance 2: every single flip keeps
    // connex (exhaustively at the criterion's base size 6), and the
    // generator pairs it at exactly 2.
    let connex = find_property("connex").unwrap();
    let complete6 = DirectedGraph::complete(6).unwrap();
    for t in 0..36 {
        let g = complete6.flip_bits(&[EdgeIndex(t)]).unwrap();
        assert!(check(&connex.formula, &g), "criterion 4: single flip {t} must stay connex");
    }
    let mut some_two_flip_negative = false;
    for a in 0..36 {
        for b in a + 1..36 {
            let g = complete6.flip_bits(&[EdgeIndex(a), EdgeIndex(b)]).unwrap();
            if !check(&connex.formula, &g) {
                some_two_flip_negative = true;
            }
        }
    }
    assert!(some_two_flip_negative);

    // Generator-level demonstration on an enumerable connex variant: the
    // complete digraph is in the positive set and pairs at distance 2.
    let mut tiny = connex.clone();
    tiny.base_size = 3;
    let job = GenJob::new(tiny, Family::Perturb, 3, 7);
    let out = gen_graphperturb(&job).unwrap();
    let complete3 = DirectedGraph::complete(3).unwrap();
    let pi = out
        .set
        .positives
        .iter()
        .position(|g| *g == complete3)
        .expect("complete digraph survives lex-leader breaking");
    let j = out.set.pair_map.as_ref().unwrap().iter().position(|&p| p == pi).unwrap();
    assert_eq!(out.set.positives[pi].hamming(&out.set.negatives[j]).unwrap(), 2);

    println!(
        "[PASS] criterion 4: 100% of positives paired at distance <= 2 across {pairs_checked} pairs; complete-digraph case requires distance 2"
    );
}

#[test]
fn criterion_5_determinism_across_reruns_and_jobs() {
    let cases: [(&str, &str, &str); 2] = [
        ("generate", "total_order", "base"),
        ("perturb", "reflexivity", "base+1"),
    ];
    let mut files_compared = 0;
    for (cmd, property, sizes) in cases {
        let mut outputs: Vec<(PathBuf, tempfile::TempDir)> = Vec::new();
        for jobs in ["1", "4"] {
            let dir = tempfile::tempdir().unwrap();
            run_ok(bin()
                .args([cmd, "--property", property, "--sizes", sizes])
                .args(["--seed", "987654321", "--positives", "500", "-q"])
                .args(["--jobs", jobs, "--out"])
                .arg(dir.path()));
            outputs.push((dir.path().to_path_buf(), dir));
        }
        let family = if cmd == "perturb" { "perturb" } else { "random" };
        let dir_rel = Path::new(property).join(family);
        let first = &outputs[0].0;
        for entry in fs::read_dir(first.join(&dir_rel)).unwrap() {
            let name = entry.unwrap().file_name();
            let a = fs::read(first.join(&dir_rel).join(&name)).unwrap();
            let b = fs::read(outputs[1].0.join(&dir_rel).join(&name)).unwrap();
            assert_eq!(a, b, "criterion 5: {property}/{family}/{name:?} differs across reruns");
            files_compared += 1;
        }
    }
    assert!(files_compared >= 4);
    println!(
        "[PASS] criterion 5: {files_compared} dataset/manifest files byte-identical across reruns and --jobs settings"
    );
}

#[test]
fn criterion_6_metric_algebra() {
    use propforge_metrics::rational::{BigInt, BigRational};
    use propforge_metrics::{relative_scores, u_score, UGrid};

    // Eq. 1 on the step pattern: sizes 6..15, first five ones.
    let points: Vec<(u32, f64)> =
        (0..10).map(|j| (6 + j, if j < 5 { 1.0 } else { 0.0 })).collect();
    let got = u_score(&points, 10).unwrap();
    assert!((got - 40.0 / 105.0).abs() < 1e-12, "criterion 6: u_score {got}");
    let exact_points: Vec<(u32, BigRational)> = points
        .iter()
        .map(|&(g, a)| (g, BigRational::from_integer(BigInt::from(a as i64))))
        .collect();
    assert_eq!(
        propforge_metrics::rational::u_score(&exact_points),
        BigRational::new(BigInt::from(40), BigInt::from(105))
    );

    // Synthetic grid: mean over models of R equals 1; scaling any (a, p)
    // cell leaves relative scores and rankings unchanged.
    let models: Vec<String> = (0..6).map(|i| format!("m{i}")).collect();
    let properties: Vec<String> = (0..5).map(|i| format!("p{i}")).collect();
    let aspects = propforge_metrics::Aspect::ALL.to_vec();
    let value = |ai: usize, pi: usize, mi: usize| {
        0.35 + (((ai * 31 + pi * 17 + mi * 7) % 13) as f64) / 25.0
    };
    let u: Vec<Vec<Vec<f64>>> = (0..3)
        .map(|ai| {
            (0..5)
                .map(|pi| (0..6).map(|mi| value(ai, pi, mi)).collect())
                .collect()
        })
        .collect();
    let grid = UGrid {
        models: models.clone(),
        properties: properties.clone(),
        aspects: aspects.clone(),
        u: u.clone(),
        per_size: vec![vec![propforge_metrics::PerSizeTable { sizes: vec![], accuracy: vec![] }; 5]; 3],
    };
    let table = relative_scores(grid.clone()).unwrap();
    for ai in 0..3 {
        for pi in 0..5 {
            let mean: f64 = table.r_api[ai][pi].iter().sum::<f64>() / 6.0;
            assert!((mean - 1.0).abs() < 1e-9, "criterion 6: mean {mean}");
        }
    }
    // Exact-rational mean is exactly one.
    let exact_u: Vec<BigRational> = (0..6)
        .map(|mi| propforge_metrics::rational::parse_decimal(&format!("{:.6}", value(0, 0, mi))).unwrap())
        .collect();
    let exact_r = propforge_metrics::rational::relative_scores(&exact_u);
    let mean: BigRational =
        exact_r.iter().sum::<BigRational>() / BigRational::from_integer(BigInt::from(6));
    assert_eq!(mean, BigRational::from_integer(BigInt::from(1)));

    let mut scaled = grid;
    for pi in 0..5 {
        for mi in 0..6 {
            scaled.u[2][pi][mi] *= 3.7;
        }
    }
    let scaled_table = relative_scores(scaled).unwrap();
    for ai in 0..3 {
        for pi in 0..5 {
            let mut rank_a: Vec<usize> = (0..6).collect();
            let mut rank_b = rank_a.clone();
            rank_a.sort_by(|&x, &y| table.r_api[ai][pi][y].total_cmp(&table.r_api[ai][pi][x]));
            rank_b.sort_by(|&x, &y| {
                scaled_table.r_api[ai][pi][y].total_cmp(&scaled_table.r_api[ai][pi][x])
            });
            assert_eq!(rank_a, rank_b, "criterion 6: ranking changed at ({ai}, {pi})");
            for mi in 0..6 {
                assert!(
                    (table.r_api[ai][pi][mi] - scaled_table.r_api[ai][pi][mi]).abs() < 1e-9,
                    "criterion 6: scaling changed R at ({ai}, {pi}, {mi})"
                );
            }
        }
    }
    println!("[PASS] criterion 6: u_score = 40/105 (exact in rational mode); mean R = 1; scaling invariance holds");
}

#[test]
fn criterion_7_table_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("results.txt");
    let mut body = String::new();
    let properties: Vec<String> = builtin_catalog().iter().map(|p| p.name.clone()).collect();
    for mi in 0..9 {
        for (pi, property) in properties.iter().enumerate() {
            for (ai, aspect) in ["generalizability", "sensitivity", "robustness"]
                .iter()
                .enumerate()
            {
                for j in 0..10u32 {
                    let acc = 0.4 + (((mi * 13 + pi * 5 + ai * 3 + j as usize) % 31) as f64) / 60.0;
                    body.push_str(&format!("model{mi},{property},{aspect},{},{acc:.6}\n", 6 + j));
                }
            }
        }
    }
    fs::write(&results, body).unwrap();
    let out_dir = dir.path().join("scores");
    run_ok(bin().arg("score").arg(&results).arg("--out").arg(&out_dir));

    let shape = |file: &str, rows: usize| {
        let text = fs::read_to_string(out_dir.join(file)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), rows + 1, "criterion 7: {file} data rows");
        for line in &lines {
            assert_eq!(line.split(',').count(), 10, "criterion 7: {file} needs 9 model columns");
        }
        for line in &lines[1..] {
            for cell in line.split(',').skip(1) {
                let decimals = cell.split('.').nth(1).map(str::len);
                assert_eq!(decimals, Some(3), "criterion 7: {file} cell `{cell}` not 3-decimal");
            }
        }
    };
    shape("aspects.csv", 3);
    shape("properties.csv", 16);
    shape("overall.csv", 1);
    let per_size = fs::read_dir(out_dir.join("per_size")).unwrap().count();
    assert_eq!(per_size, 48, "criterion 7: one per-size table per (aspect, property)");
    println!("[PASS] criterion 7: score tables match the 3/16/1-row by 9-column shapes at 3 decimals");
}

#[test]
fn criterion_8_dataset_census() {
    // Dry-run plan enumerates the full 16-property, both-family build.
    let out = run_ok(bin()
        .args(["generate", "--property", "all16", "--family", "both"])
        .args(["--sizes", "base..base+10", "--seed", "0", "--dry-run"]));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let plan_lines = stdout.lines().filter(|l| l.starts_with("plan: ")).count();
    assert_eq!(plan_lines, 352, "criterion 8: plan must list 352 jobs");
    assert!(stdout.trim_end().ends_with("planned jobs: 352"));
    let ids: HashSet<&str> = stdout
        .lines()
        .filter_map(|l| l.strip_prefix("plan: "))
        .collect();
    assert_eq!(ids.len(), 352, "criterion 8: plan ids must be distinct");

    // Structural validation at desk scale: four properties built fully.
    let fx = fixture();
    let mut manifests = 0;
    for name in FULL_PROPERTIES {
        let base = find_property(name).unwrap().base_size;
        for family in [Family::Random, Family::Perturb] {
            for size in base..=base + 10 {
                let path = data_path(&fx.root, name, family, size).with_extension("manifest");
                assert!(path.exists(), "criterion 8: missing {path:?}");
                manifests += 1;
            }
        }
    }
    assert_eq!(manifests, 88);
    println!(
        "[PASS] criterion 8: dry-run plan lists 352 jobs; {manifests} manifests from 4 fully built properties"
    );
}

/// Tiny deterministic generator of closed formulas for the round-trip
/// criterion.
struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn below(&mut self, k: u64) -> u64 {
        self.next() % k
    }
}

fn random_formula(rng: &mut XorShift, depth: usize, scope: &mut Vec<String>) -> Formula {
    const NAMES: [&str; 6] = ["u", "v", "w", "x", "y", "z"];
    if scope.is_empty() || (depth > 0 && rng.below(4) == 0) {
        let count = 1 + rng.below(2) as usize;
        let vars: Vec<String> = (0..count)
            .map(|_| NAMES[rng.below(6) as usize].to_string())
            .collect();
        scope.extend(vars.iter().cloned());
        let body = random_formula(rng, depth.saturating_sub(1), scope);
        scope.truncate(scope.len() - vars.len());
        return if rng.below(2) == 0 {
            Formula::Forall(vars, Box::new(body))
        } else {
            Formula::Exists(vars, Box::new(body))
        };
    }
    if depth == 0 || rng.below(5) == 4 {
        let pick = |rng: &mut XorShift, scope: &[String]| {
            scope[rng.below(scope.len() as u64) as usize].clone()
        };
        let (a, b) = (pick(rng, scope), pick(rng, scope));
        return match rng.below(3) {
            0 => Formula::Edge(a, b),
            1 => Formula::Eq(a, b),
            _ => Formula::Neq(a, b),
        };
    }
    match rng.below(5) {
        0 => Formula::not(random_formula(rng, depth - 1, scope)),
        1 => Formula::and(
            random_formula(rng, depth - 1, scope),
            random_formula(rng, depth - 1, scope),
        ),
        2 => Formula::or(
            random_formula(rng, depth - 1, scope),
            random_formula(rng, depth - 1, scope),
        ),
        3 => Formula::implies(
            random_formula(rng, depth - 1, scope),
            random_formula(rng, depth - 1, scope),
        ),
        _ => Formula::iff(
            random_formula(rng, depth - 1, scope),
            random_formula(rng, depth - 1, scope),
        ),
    }
}

#[test]
fn criterion_9_dsl_roundtrip() {
    for property in builtin_catalog() {
        let text = property.formula.to_string();
        let reparsed = parse(&text).unwrap_or_else(|e| {
            panic!("criterion 9: `{text}` failed to reparse: {e}")
        });
        assert_eq!(reparsed, property.formula, "criterion 9: {}", property.name);
    }
    let mut rng = XorShift(0x9E3779B97F4A7C15);
    for i in 0..100 {
        let f = random_formula(&mut rng, 4, &mut Vec::new());
        assert!(f.is_closed(), "criterion 9: generated formula {i} must be closed");
        let text = f.to_string();
        let reparsed = parse(&text)
            .unwrap_or_else(|e| panic!("criterion 9: formula {i} `{text}`: {e}"));
        assert_eq!(reparsed, f, "criterion 9: formula {i} `{text}`");
    }
    println!("[PASS] criterion 9: parse/pretty-print fixed point for 16 catalog + 100 random formulas");
}
