//! Invariant suites behind the `selftest` command and the acceptance tests.
//! Every criterion is a pure function of (scope, seed) and reports one
//! machine-checkable verdict; identical inputs give byte-identical reports.

use crate::algebra::{ambient_size, build_algebra, MatrixLieAlgebra};
use crate::diagram::{self, arrow_count, surjectivity_status, FormId, Verdict};
use crate::linalg;
use crate::solver::{self, DescentConfig, SolverError, IM_AD_ANGLE_TOL, WITNESS_TOL};
use crate::structure;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Trial counts and enumeration bounds for one suite run.
#[derive(Debug, Clone)]
pub struct SuiteScope {
    /// Parameter bound for the catalog slice (criteria 1 and 4).
    pub catalog_size: u32,
    /// Total random draws for the image/complement check.
    pub angle_total: usize,
    /// Trials per algebra for the general witness suite.
    pub witness_trials: usize,
    /// Trials per algebra for the restricted p suite.
    pub p_trials: usize,
    /// Trials per algebra for the compact and split corollaries.
    pub corollary_trials: usize,
    /// Samples per algebra for the convexity check.
    pub convexity_samples: usize,
    /// Trials for the two-commutator fallback.
    pub two_commutator_trials: usize,
    /// Case-insensitive substring filters on algebra names; empty = all.
    pub families: Vec<String>,
}

impl SuiteScope {
    /// The acceptance-grade scope.
    pub fn full() -> Self {
        SuiteScope {
            catalog_size: 12,
            angle_total: 200,
            witness_trials: 50,
            p_trials: 50,
            corollary_trials: 50,
            convexity_samples: 100,
            two_commutator_trials: 50,
            families: Vec::new(),
        }
    }

    /// A fast scope for the command-line self-test.
    pub fn quick() -> Self {
        SuiteScope {
            catalog_size: 8,
            angle_total: 60,
            witness_trials: 5,
            p_trials: 6,
            corollary_trials: 6,
            convexity_samples: 12,
            two_commutator_trials: 6,
            families: Vec::new(),
        }
    }

    fn keeps(&self, name: &str) -> bool {
        if self.families.is_empty() {
            return true;
        }
        let lower = name.to_ascii_lowercase();
        self.families.iter().any(|f| lower.contains(&f.to_ascii_lowercase()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub index: usize,
    pub name: String,
    pub passed: bool,
    pub trials: usize,
    pub failures: usize,
    /// Worst observed value of the criterion's quantity (residual, angle,
    /// hull distance, or mismatch count).
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionReport>,
}

fn fnv(tag: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn trial_rng(seed: u64, tag: &str, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(
        seed ^ fnv(tag) ^ (trial as u64).wrapping_mul(0x9e3779b97f4a7c15),
    )
}

fn random_coords(d: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0))
}

fn random_p_coords(alg: &MatrixLieAlgebra, rng: &mut ChaCha8Rng) -> DVector<f64> {
    let mut x = random_coords(alg.dim(), rng);
    x.rows_mut(0, alg.k_dim).fill(0.0);
    x
}

/// The open list, restated independently of the flag machinery: unitary
/// forms beyond rank-one hyperbolic, the even-orthogonal quasi-split tail
/// with the stated parities, odd quaternionic unitary forms, and the rank-2
/// hermitian exceptional form.
fn expected_open(id: &FormId) -> bool {
    match *id {
        FormId::Su { p, q } => p.min(q) >= 1 && p.max(q) > 1,
        FormId::So { p, q } => {
            let (lo, hi) = (p.min(q), p.max(q));
            hi - lo == 2 && (lo % 2 == 1 || lo == 2)
        }
        FormId::UStarH { n } => n % 2 == 1,
        FormId::Exceptional { ref name } => name.eq_ignore_ascii_case("EIII"),
        _ => false,
    }
}

/// Criterion 1: the combinatorial classification agrees with the known
/// open/surjective split over the whole catalog slice.
pub fn classification_exactness(scope: &SuiteScope) -> CriterionReport {
    let records = diagram::load_catalog().sample_records(scope.catalog_size);
    let mut mismatches = Vec::new();
    let mut open = 0usize;
    for r in &records {
        let got = surjectivity_status(r).verdict == Verdict::Open;
        let want = expected_open(&r.id);
        if got {
            open += 1;
        }
        if got != want {
            mismatches.push(r.name.clone());
        }
    }
    CriterionReport {
        index: 1,
        name: "classification-exactness".to_string(),
        passed: mismatches.is_empty(),
        trials: records.len(),
        failures: mismatches.len(),
        worst: mismatches.len() as f64,
        tolerance: 0.0,
        detail: if mismatches.is_empty() {
            format!("{} records, {} open, no mismatches", records.len(), open)
        } else {
            format!("mismatched: {}", mismatches.join(", "))
        },
    }
}

const CROSS_CHECK_NAMES: [&str; 13] = [
    "su(1,1)",
    "su(1,2)",
    "su(2,2)",
    "so(2,3)",
    "so(3,4)",
    "so(4,6)",
    "sp(1,1)",
    "sp(1,2)",
    "sl(2,R)",
    "sl(3,R)",
    "sl(2,H)",
    "sl(2,C)",
    "u*(3,H)",
];

/// Criterion 2: the arrow count of the diagram equals the numerically
/// computed dimension of the center of m, and semisimplicity of m matches
/// the arrow-free condition.
pub fn arrow_center_cross_check(seed: u64) -> CriterionReport {
    let mut failures = Vec::new();
    let mut worst = 0usize;
    for name in CROSS_CHECK_NAMES {
        let mut rng = trial_rng(seed, "arrow-center", fnv(name) as usize);
        let outcome = structure::build_with_structure(name, &mut rng).and_then(|(alg, st)| {
            let numeric = structure::center_dim_of_m_numerical(&alg, &st);
            let combinatorial = arrow_count(&alg.record.diagram);
            let semisimple = alg.is_semisimple_subalgebra(&st.m).map_err(structure::StructureError::Algebra)?;
            Ok((numeric, combinatorial, semisimple))
        });
        match outcome {
            Ok((numeric, combinatorial, semisimple)) => {
                if numeric != combinatorial || semisimple != (combinatorial == 0) {
                    worst = worst.max(numeric.abs_diff(combinatorial));
                    failures.push(format!("{name}: diagram {combinatorial}, numeric {numeric}"));
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    CriterionReport {
        index: 2,
        name: "arrow-count-vs-center-of-m".to_string(),
        passed: failures.is_empty(),
        trials: CROSS_CHECK_NAMES.len(),
        failures: failures.len(),
        worst: worst as f64,
        tolerance: 0.0,
        detail: if failures.is_empty() {
            format!("{} instances, exact agreement", CROSS_CHECK_NAMES.len())
        } else {
            failures.join("; ")
        },
    }
}

const ANGLE_NAMES: [&str; 7] =
    ["sl(2,R)", "su(1,2)", "so(2,3)", "sl(2,H)", "sp(1,1)", "su(2)", "sl(2,C)"];

/// Criterion 3: Im ad(x) equals the Killing-orthocomplement of z(x) to
/// within the stated principal angle, across many random draws.
pub fn image_complement_suite(scope: &SuiteScope, seed: u64) -> CriterionReport {
    let names: Vec<&str> = ANGLE_NAMES.iter().copied().filter(|n| scope.keeps(n)).collect();
    if names.is_empty() {
        return skipped(3, "image-of-ad-complement", IM_AD_ANGLE_TOL);
    }
    let per = scope.angle_total.div_ceil(names.len());
    let mut worst = 0.0f64;
    let mut trials = 0usize;
    let mut failures = 0usize;
    let mut first_failure = String::new();
    for name in &names {
        let record = match diagram::resolve(name, &[]) {
            Ok(r) => r,
            Err(e) => return errored(3, "image-of-ad-complement", IM_AD_ANGLE_TOL, &e.to_string()),
        };
        let alg = match build_algebra(&record) {
            Ok(a) => a,
            Err(e) => return errored(3, "image-of-ad-complement", IM_AD_ANGLE_TOL, &e.to_string()),
        };
        for t in 0..per {
            let mut rng = trial_rng(seed, &format!("im-ad:{name}"), t);
            let x = random_coords(alg.dim(), &mut rng);
            let rep = solver::check_im_ad(&alg, &x);
            worst = worst.max(rep.max_angle);
            trials += 1;
            if !rep.pass {
                failures += 1;
                if first_failure.is_empty() {
                    first_failure = format!("{name} trial {t}: angle {:.3e}", rep.max_angle);
                }
            }
        }
    }
    CriterionReport {
        index: 3,
        name: "image-of-ad-complement".to_string(),
        passed: failures == 0,
        trials,
        failures,
        worst,
        tolerance: IM_AD_ANGLE_TOL,
        detail: if failures == 0 {
            format!("{} algebras, {} draws, worst angle {:.3e}", names.len(), trials, worst)
        } else {
            first_failure
        },
    }
}

/// Catalog slice for the general witness suite: arrow-free realizable
/// records in small ambient dimension.
pub fn general_witness_names(catalog_size: u32) -> Vec<String> {
    diagram::load_catalog()
        .sample_records(catalog_size)
        .into_iter()
        .filter(|r| {
            r.realizable
                && r.diagram.arrows.is_empty()
                && ambient_size(&r.id).is_some_and(|n| n <= 12)
        })
        .map(|r| r.name)
        .collect()
}

/// Criterion 4: solve_general produces verifiable witnesses on every
/// arrow-free catalog algebra with a small realization.
pub fn general_witness_suite(
    scope: &SuiteScope,
    seed: u64,
    mut timings: Option<&mut Vec<f64>>,
) -> CriterionReport {
    let names: Vec<String> = general_witness_names(scope.catalog_size)
        .into_iter()
        .filter(|n| scope.keeps(n))
        .collect();
    if names.is_empty() {
        return skipped(4, "general-witnesses", WITNESS_TOL);
    }
    let cfg = DescentConfig::default();
    let mut worst = 0.0f64;
    let mut trials = 0usize;
    let mut failures = 0usize;
    let mut first_failure = String::new();
    for name in &names {
        let mut rng = trial_rng(seed, &format!("general-setup:{name}"), 0);
        let (alg, st) = match structure::build_with_structure(name, &mut rng) {
            Ok(v) => v,
            Err(e) => {
                failures += 1;
                trials += 1;
                if first_failure.is_empty() {
                    first_failure = format!("{name}: {e}");
                }
                continue;
            }
        };
        for t in 0..scope.witness_trials {
            let mut rng = trial_rng(seed, &format!("general:{name}"), t);
            let x = random_coords(alg.dim(), &mut rng);
            let started = std::time::Instant::now();
            let outcome = solver::solve_general(&alg, &st, &x, &cfg, &mut rng)
                .and_then(|dec| solver::make_witness(&alg, &x, &dec))
                .and_then(|w| solver::verify_witness(&w).map(|r| (w, r)));
            if let Some(sink) = timings.as_deref_mut() {
                sink.push(started.elapsed().as_secs_f64());
            }
            trials += 1;
            match outcome {
                Ok((_, residual)) => worst = worst.max(residual),
                Err(e) => {
                    failures += 1;
                    if first_failure.is_empty() {
                        first_failure = format!("{name} trial {t}: {e}");
                    }
                }
            }
        }
    }
    CriterionReport {
        index: 4,
        name: "general-witnesses".to_string(),
        passed: failures == 0,
        trials,
        failures,
        worst,
        tolerance: WITNESS_TOL,
        detail: if failures == 0 {
            format!("{} algebras, {} witnesses, worst residual {:.3e}", names.len(), trials, worst)
        } else {
            first_failure
        },
    }
}

const P_SUITE_NAMES: [&str; 11] = [
    "sl(2,R)",
    "su(1,1)",
    "sl(3,R)",
    "so(2,3)",
    "so(1,4)",
    "sp(1,1)",
    "sl(2,H)",
    "su(1,2)",
    "su(2,2)",
    "so(3,5)",
    "u*(3,H)",
];

/// Criterion 5: the restricted solver handles p-inputs on both surjective
/// and open forms, with a p-regular certified factor.
pub fn p_witness_suite(scope: &SuiteScope, seed: u64) -> CriterionReport {
    let names: Vec<&str> = P_SUITE_NAMES.iter().copied().filter(|n| scope.keeps(n)).collect();
    if names.is_empty() {
        return skipped(5, "restricted-p-witnesses", WITNESS_TOL);
    }
    let cfg = DescentConfig::default();
    let mut worst = 0.0f64;
    let mut trials = 0usize;
    let mut failures = 0usize;
    let mut first_failure = String::new();
    for name in &names {
        let mut rng = trial_rng(seed, &format!("p-setup:{name}"), 0);
        let (alg, st) = match structure::build_with_structure(name, &mut rng) {
            Ok(v) => v,
            Err(e) => {
                failures += 1;
                trials += 1;
                if first_failure.is_empty() {
                    first_failure = format!("{name}: {e}");
                }
                continue;
            }
        };
        for t in 0..scope.p_trials {
            let mut rng = trial_rng(seed, &format!("p:{name}"), t);
            let x = random_p_coords(&alg, &mut rng);
            trials += 1;
            let outcome = solver::solve_in_p(&alg, &st, &x, &cfg, &mut rng)
                .and_then(|dec| {
                    if dec.certificate.space != "p" || dec.certificate.expected_dim != st.a.dim() {
                        return Err(SolverError::BadWitness(
                            "certificate is not p-regularity at the flat dimension".to_string(),
                        ));
                    }
                    solver::make_witness(&alg, &x, &dec)
                })
                .and_then(|w| solver::verify_witness(&w));
            match outcome {
                Ok(residual) => worst = worst.max(residual),
                Err(e) => {
                    failures += 1;
                    if first_failure.is_empty() {
                        first_failure = format!("{name} trial {t}: {e}");
                    }
                }
            }
        }
    }
    CriterionReport {
        index: 5,
        name: "restricted-p-witnesses".to_string(),
        passed: failures == 0,
        trials,
        failures,
        worst,
        tolerance: WITNESS_TOL,
        detail: if failures == 0 {
            format!("{} algebras, {} witnesses, worst residual {:.3e}", names.len(), trials, worst)
        } else {
            first_failure
        },
    }
}

/// Criterion 6: the compact and split routes with certified regular factors.
pub fn corollary_suite(scope: &SuiteScope, seed: u64) -> CriterionReport {
    let compact: Vec<&str> = ["su(2)", "su(3)"].into_iter().filter(|n| scope.keeps(n)).collect();
    let split: Vec<&str> =
        ["sl(2,R)", "sl(3,R)", "sl(4,R)"].into_iter().filter(|n| scope.keeps(n)).collect();
    if compact.is_empty() && split.is_empty() {
        return skipped(6, "compact-and-split-witnesses", WITNESS_TOL);
    }
    let cfg = DescentConfig::default();
    let mut worst = 0.0f64;
    let mut trials = 0usize;
    let mut failures = 0usize;
    let mut first_failure = String::new();
    let mut run = |name: &str, compact_route: bool| {
        let mut rng = trial_rng(seed, &format!("corollary-setup:{name}"), 0);
        let built = if compact_route {
            diagram::resolve(name, &[])
                .map_err(|e| e.to_string())
                .and_then(|r| build_algebra(&r).map_err(|e| e.to_string()))
                .map(|alg| (alg, None))
        } else {
            structure::build_with_structure(name, &mut rng)
                .map(|(alg, st)| (alg, Some(st)))
                .map_err(|e| e.to_string())
        };
        let (alg, st) = match built {
            Ok(v) => v,
            Err(e) => {
                failures += 1;
                trials += 1;
                if first_failure.is_empty() {
                    first_failure = format!("{name}: {e}");
                }
                return;
            }
        };
        for t in 0..scope.corollary_trials {
            let mut rng = trial_rng(seed, &format!("corollary:{name}"), t);
            let x = random_coords(alg.dim(), &mut rng);
            trials += 1;
            let outcome = if compact_route {
                solver::solve_compact(&alg, &x, &cfg, &mut rng)
            } else {
                solver::solve_split(&alg, st.as_ref().unwrap(), &x, &cfg, &mut rng)
            }
            .and_then(|dec| solver::make_witness(&alg, &x, &dec))
            .and_then(|w| solver::verify_witness(&w));
            match outcome {
                Ok(residual) => worst = worst.max(residual),
                Err(e) => {
                    failures += 1;
                    if first_failure.is_empty() {
                        first_failure = format!("{name} trial {t}: {e}");
                    }
                }
            }
        }
    };
    for name in &compact {
        run(name, true);
    }
    for name in &split {
        run(name, false);
    }
    CriterionReport {
        index: 6,
        name: "compact-and-split-witnesses".to_string(),
        passed: failures == 0,
        trials,
        failures,
        worst,
        tolerance: WITNESS_TOL,
        detail: if failures == 0 {
            format!("{} witnesses, worst residual {:.3e}", trials, worst)
        } else {
            first_failure
        },
    }
}

const HULL_TOL: f64 = 1e-8;
const MASS_CENTER_TOL: f64 = 1e-10;

/// Criterion 7: the flat projection of a conjugated p-element lies in the
/// convex hull of the reflection orbit of its flattened representative, and
/// the orbit's mass center vanishes.
pub fn convexity_suite(scope: &SuiteScope, seed: u64) -> CriterionReport {
    let names: Vec<&str> = ["so(2,3)", "su(1,2)"].into_iter().filter(|n| scope.keeps(n)).collect();
    if names.is_empty() {
        return skipped(7, "projection-convexity", HULL_TOL);
    }
    let cfg = DescentConfig::default();
    let mut worst_dist = 0.0f64;
    let mut worst_center = 0.0f64;
    let mut trials = 0usize;
    let mut failures = 0usize;
    let mut first_failure = String::new();
    for name in &names {
        let mut rng = trial_rng(seed, &format!("convexity-setup:{name}"), 0);
        let prep = structure::build_with_structure(name, &mut rng).and_then(|(alg, st)| {
            let roots = structure::restricted_roots(&alg, &st, &mut rng)?;
            Ok((alg, st, roots))
        });
        let (alg, st, roots) = match prep {
            Ok(v) => v,
            Err(e) => {
                failures += 1;
                trials += 1;
                if first_failure.is_empty() {
                    first_failure = format!("{name}: {e}");
                }
                continue;
            }
        };
        let off_flat = match alg.ortho_complement(&st.a, &alg.p_subspace(), false) {
            Ok(v) => v,
            Err(e) => {
                failures += 1;
                trials += 1;
                if first_failure.is_empty() {
                    first_failure = format!("{name}: {e}");
                }
                continue;
            }
        };
        let r = st.a.dim();
        let cap = (1usize << r) * (1..=r).product::<usize>() * 2 + 8;
        for t in 0..scope.convexity_samples {
            let mut rng = trial_rng(seed, &format!("convexity:{name}"), t);
            let x = random_p_coords(&alg, &mut rng);
            trials += 1;
            // Representative of the orbit inside the flat.
            let diag = match solver::kostant_flatten(&alg, &x, &off_flat, &alg.k_subspace(), &cfg, &mut rng)
            {
                Ok((_, d)) => d,
                Err(e) => {
                    failures += 1;
                    if first_failure.is_empty() {
                        first_failure = format!("{name} trial {t}: {e}");
                    }
                    continue;
                }
            };
            let diag_a = st.a.frame.transpose() * &diag;
            // A random group move, then project the moved element to the flat.
            let mut moved = x.clone();
            for _ in 0..3 {
                let u = {
                    let coeffs = DVector::from_fn(alg.k_dim, |_, _| rng.gen_range(-0.7..0.7));
                    &alg.k_subspace().frame * coeffs
                };
                moved = linalg::exp_action(&alg.ad(&u), 1.0, &moved);
            }
            let target = st.a.frame.transpose() * &moved;
            let orbit = match structure::weyl_orbit(&roots.roots, &diag_a, cap) {
                Ok(o) => o,
                Err(e) => {
                    failures += 1;
                    if first_failure.is_empty() {
                        first_failure = format!("{name} trial {t}: {e}");
                    }
                    continue;
                }
            };
            let center = structure::orbit_mass_center(&orbit).norm();
            worst_center = worst_center.max(center);
            let points = nalgebra::DMatrix::from_columns(&orbit);
            let (dist, _) = linalg::convex_hull_distance(&points, &target);
            worst_dist = worst_dist.max(dist);
            if dist > HULL_TOL || center > MASS_CENTER_TOL * diag_a.norm().max(1.0) {
                failures += 1;
                if first_failure.is_empty() {
                    first_failure =
                        format!("{name} trial {t}: hull distance {dist:.3e}, center {center:.3e}");
                }
            }
        }
    }
    CriterionReport {
        index: 7,
        name: "projection-convexity".to_string(),
        passed: failures == 0,
        trials,
        failures,
        worst: worst_dist,
        tolerance: HULL_TOL,
        detail: if failures == 0 {
            format!(
                "{} samples, worst hull distance {:.3e}, worst orbit center {:.3e}",
                trials, worst_dist, worst_center
            )
        } else {
            first_failure
        },
    }
}

/// Criterion 8: the two-commutator fallback on an open form.
pub fn two_commutator_suite(scope: &SuiteScope, seed: u64) -> CriterionReport {
    let name = "su(1,2)";
    if !scope.keeps(name) {
        return skipped(8, "two-commutator-fallback", WITNESS_TOL);
    }
    let record = match diagram::resolve(name, &[]) {
        Ok(r) => r,
        Err(e) => return errored(8, "two-commutator-fallback", WITNESS_TOL, &e.to_string()),
    };
    let alg = match build_algebra(&record) {
        Ok(a) => a,
        Err(e) => return errored(8, "two-commutator-fallback", WITNESS_TOL, &e.to_string()),
    };
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    let mut first_failure = String::new();
    for t in 0..scope.two_commutator_trials {
        let mut rng = trial_rng(seed, "two-commutator", t);
        let z = random_coords(alg.dim(), &mut rng);
        let outcome = solver::solve_two_commutators(&alg, &z, &mut rng)
            .and_then(|tc| solver::make_two_commutator_witness(&alg, &z, &tc))
            .and_then(|w| solver::verify_two_commutator_witness(&w));
        match outcome {
            Ok(residual) => worst = worst.max(residual),
            Err(e) => {
                failures += 1;
                if first_failure.is_empty() {
                    first_failure = format!("trial {t}: {e}");
                }
            }
        }
    }
    CriterionReport {
        index: 8,
        name: "two-commutator-fallback".to_string(),
        passed: failures == 0,
        trials: scope.two_commutator_trials,
        failures,
        worst,
        tolerance: WITNESS_TOL,
        detail: if failures == 0 {
            format!("{} witnesses on {name}, worst residual {:.3e}", scope.two_commutator_trials, worst)
        } else {
            first_failure
        },
    }
}

fn skipped(index: usize, name: &str, tolerance: f64) -> CriterionReport {
    CriterionReport {
        index,
        name: name.to_string(),
        passed: true,
        trials: 0,
        failures: 0,
        worst: 0.0,
        tolerance,
        detail: "skipped: no algebras match the family filter".to_string(),
    }
}

fn errored(index: usize, name: &str, tolerance: f64, msg: &str) -> CriterionReport {
    CriterionReport {
        index,
        name: name.to_string(),
        passed: false,
        trials: 0,
        failures: 1,
        worst: f64::INFINITY,
        tolerance,
        detail: msg.to_string(),
    }
}

/// Runs criteria 1 through 8. Determinism of the serialized report under a
/// fixed seed is itself the ninth acceptance property.
pub fn run_all(scope: &SuiteScope, seed: u64) -> SuiteReport {
    let criteria = vec![
        classification_exactness(scope),
        arrow_center_cross_check(seed),
        image_complement_suite(scope, seed),
        general_witness_suite(scope, seed, None),
        p_witness_suite(scope, seed),
        corollary_suite(scope, seed),
        convexity_suite(scope, seed),
        two_commutator_suite(scope, seed),
    ];
    SuiteReport {
        schema_version: 1,
        seed,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}
