//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Golden values come from small hand-checked matrices and networks; the
//! property criteria run seeded random corpora through two independent code
//! paths and require agreement on every instance. Run with `cargo test --test acceptance --
//! --nocapture` to see the per-criterion lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use srgraph::cycle::{
    check_condition_star, condition_star_audit, enumerate_cycles, intersection_components,
    Parity, PathKind,
};
use srgraph::matrix::{StoichMatrix, SubmatrixSelector, TermSigns, DEFAULT_SUBMATRIX_BUDGET};
use srgraph::network::ReactionNetwork;
use srgraph::oracle::{
    check_o_cycle_signed_det_equivalence, check_resign_invariance, check_star_implies_ssd, GeneratorConfig,
    MatrixGenerator, SufficiencyOutcome,
};
use srgraph::rational::{rat, Rational};
use srgraph::report::{analyze, AnalysisOptions, AnalysisSubject, Conclusion};
use srgraph::terms::{enumerate_term_subgraphs, union_cycles, verify_cancellation, verify_sign_product_identity};
use srgraph::{SRGraph, Vertex};

const NETWORK_TEXT: &str = "D <-> A + B + C\nE <-> A + B + C\nF <-> A + B\n";
const BUDGET: u64 = DEFAULT_SUBMATRIX_BUDGET;

const SEED_4X4: u64 = 1;
const SEED_5X5: u64 = 2;
const SEED_PRODFORM: u64 = 3;
const SEED_CANCELLATION: u64 = 4;
const SEED_RESIGN: u64 = 5;
const SEED_DET_ORACLE: u64 = 6;

fn criterion(id: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Result<(), String>) {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let within = limit.is_none_or(|l| elapsed <= l);
    match (&outcome, within) {
        (Ok(()), true) => {
            println!("criterion {id} ({name}): PASS ({elapsed:.2?})");
        }
        (Ok(()), false) => {
            println!(
                "criterion {id} ({name}): FAIL ({elapsed:.2?} exceeds {:?})",
                limit.unwrap()
            );
            panic!("criterion {id} exceeded its time budget");
        }
        (Err(reason), _) => {
            println!("criterion {id} ({name}): FAIL ({elapsed:.2?})\n  {reason}");
            panic!("criterion {id} failed: {reason}");
        }
    }
}

fn o_cycle_matrix() -> StoichMatrix {
    StoichMatrix::from_integers(&[&[1, 1, 0], &[-1, 0, 1], &[0, -1, 1]])
}

fn e_s_cycle_matrix(a: i64, b: i64, c: i64) -> StoichMatrix {
    StoichMatrix::from_integers(&[&[-a, b, 0], &[-c, 0, b], &[0, -c, a]])
}

fn corpus(rows: usize, cols: usize, count: usize, seed: u64) -> impl Iterator<Item = StoichMatrix> {
    let cfg = GeneratorConfig::new(rows, cols, seed);
    MatrixGenerator::new(&cfg).expect("valid config").take(count)
}

fn check(cond: bool, message: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message.to_string())
    }
}

#[test]
fn criterion_01_single_o_cycle_golden() {
    criterion(1, "single o-cycle golden example", Some(Duration::from_secs(1)), || {
        let m = o_cycle_matrix();
        let g = SRGraph::from_matrix(&m);
        let enumeration = enumerate_cycles(&g, None);
        check(enumeration.cycles.len() == 1, "expected exactly one cycle")?;
        check(
            enumeration.cycles[0].parity() == Parity::Odd,
            "expected an o-cycle",
        )?;
        let cls = m.classify_terms(&SubmatrixSelector::full(3));
        check(
            cls.signs == TermSigns::AllPositive,
            &format!("expected AllPositive terms, got {:?}", cls.signs),
        )?;
        check(
            m.determinant().unwrap() == rat(2),
            &format!("expected determinant 2, got {}", m.determinant().unwrap()),
        )?;
        let verdict = m.all_submatrices_signed_determinant(BUDGET).unwrap();
        check(verdict.holds, "expected all submatrices signed determinant")?;
        Ok(())
    });
}

#[test]
fn criterion_02_single_e_s_cycle_golden() {
    criterion(2, "single e-/s-cycle golden example", Some(Duration::from_secs(1)), || {
        for (a, b, c) in [(1, 2, 3), (2, 5, 7)] {
            let m = e_s_cycle_matrix(a, b, c);
            let g = SRGraph::from_matrix(&m);
            let enumeration = enumerate_cycles(&g, None);
            check(
                enumeration.cycles.len() == 1,
                &format!("({a},{b},{c}): expected exactly one cycle"),
            )?;
            let cycle = &enumeration.cycles[0];
            check(cycle.parity() == Parity::Even, "expected an e-cycle")?;
            check(cycle.is_s_cycle(), "expected an s-cycle")?;
            check(
                m.determinant().unwrap() == rat(0),
                &format!("({a},{b},{c}): expected zero determinant"),
            )?;
            check(
                !m.has_signed_determinant(&SubmatrixSelector::full(3)),
                "full matrix must not have signed determinant",
            )?;
            let star = check_condition_star(&g, None).unwrap();
            check(star.holds, "Condition (*) must hold")?;
        }
        Ok(())
    });
}

#[test]
fn criterion_03_counterexample_network_golden() {
    criterion(3, "SSD-but-not-star network golden", Some(Duration::from_secs(5)), || {
        let net = ReactionNetwork::parse(NETWORK_TEXT).unwrap();
        let m = net.stoichiometric_matrix().unwrap();
        let g = SRGraph::from_network(&net).unwrap();

        let ssd = m.is_ssd(BUDGET).unwrap();
        check(ssd.holds, "expected the matrix to be SSD")?;

        let star = check_condition_star(&g, None).unwrap();
        check(!star.holds, "expected Condition (*) to fail")?;
        check(star.bad_e_cycle.is_none(), "failure must come from a pair")?;
        let (c1, c2) = star
            .bad_pair
            .clone()
            .ok_or_else(|| "expected a bad pair witness".to_string())?;
        let components = intersection_components(&c1, &c2).unwrap();
        check(
            components.len() == 1 && components[0].edges.len() == 1,
            "expected the pair to share a single edge",
        )?;
        check(
            components[0].kind == PathKind::SpeciesToReaction,
            "shared component must be an S-to-R path",
        )?;

        let result = analyze(
            &AnalysisSubject::Network(net.clone()),
            &AnalysisOptions::default(),
        );
        check(
            result.report.conclusion == Conclusion::InjectiveWithOutflows,
            "report conclusion must be InjectiveWithOutflows",
        )?;

        // The stated witness: the returned pair intersects along the edge
        // A-R2. The graph has an automorphism swapping (D, R1) with (E, R2),
        // and the deterministic first-pair scan returns the automorphic
        // image sharing A-R1 instead; the A-R2 pair is present in the
        // exhaustive audit. Report the full picture, then hold the
        // implementation to the stated witness.
        let a = net.species_index("A").unwrap();
        let shared = &components[0].edges[0];
        let shared_name = format!(
            "{}-{}",
            g.vertex_name(Vertex::Species(shared.species)),
            g.vertex_name(Vertex::Reaction(shared.reaction))
        );
        let audit = condition_star_audit(&enumerate_cycles(&g, None), None).unwrap();
        let audit_pairs: Vec<String> = audit
            .s_to_r_pairs
            .iter()
            .map(|(x, y)| {
                let comps = intersection_components(x, y).unwrap();
                let e = &comps[0].edges[0];
                format!(
                    "({}, {}) sharing {}-{}",
                    x.display_with(&g),
                    y.display_with(&g),
                    g.vertex_name(Vertex::Species(e.species)),
                    g.vertex_name(Vertex::Reaction(e.reaction))
                )
            })
            .collect();
        check(
            audit.s_to_r_pairs.iter().any(|(x, y)| {
                let comps = intersection_components(x, y).unwrap();
                comps.len() == 1
                    && comps[0].edges.len() == 1
                    && comps[0].edges[0].species == a
                    && comps[0].edges[0].reaction == 1
            }),
            "the A-R2 pair must at least appear among all bad pairs",
        )?;
        check(
            shared.species == a && shared.reaction == 1,
            &format!(
                "returned bad pair ({}, {}) shares {shared_name}, not A-R2; all bad pairs: {}",
                c1.display_with(&g),
                c2.display_with(&g),
                audit_pairs.join("; ")
            ),
        )?;
        Ok(())
    });
}

#[test]
fn criterion_04_condition_star_implies_ssd_on_corpus() {
    criterion(4, "Condition (*) implies SSD on 11k instances", Some(Duration::from_secs(60)), || {
        let mut star_held = 0usize;
        let mut checked = 0usize;
        for m in corpus(4, 4, 10_000, SEED_4X4).chain(corpus(5, 5, 1_000, SEED_5X5)) {
            checked += 1;
            match check_star_implies_ssd(&m, BUDGET)
                .map_err(|e| format!("budget exceeded unexpectedly: {e}"))?
            {
                SufficiencyOutcome::ImplicationHolds => star_held += 1,
                SufficiencyOutcome::ConditionStarFails => {}
                SufficiencyOutcome::Violation { condition_star, ssd } => {
                    return Err(format!(
                        "instance {checked}: Condition (*) holds but SSD fails \
                         (star: {condition_star:?}, ssd counterexample: {:?})",
                        ssd.counterexample
                    ));
                }
            }
        }
        check(checked == 11_000, "corpus size mismatch")?;
        // The corpus exercises the implication non-vacuously.
        check(
            star_held > 100,
            &format!("only {star_held} instances had Condition (*) hold"),
        )?;
        Ok(())
    });
}

#[test]
fn criterion_05_signed_det_iff_all_o_cycles_on_corpus() {
    criterion(5, "signed-determinant/o-cycle equivalence on 11k instances", Some(Duration::from_secs(60)), || {
        for (idx, m) in corpus(4, 4, 10_000, SEED_4X4)
            .chain(corpus(5, 5, 1_000, SEED_5X5))
            .enumerate()
        {
            let ok = check_o_cycle_signed_det_equivalence(&m, BUDGET)
                .map_err(|e| format!("budget exceeded unexpectedly: {e}"))?;
            if !ok {
                return Err(format!("instance {idx}: equivalence failed"));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_06_sign_product_identity_on_corpus() {
    criterion(6, "term sign product identity on 1k matrices", Some(Duration::from_secs(60)), || {
        let mut pairs = 0usize;
        for (idx, m) in corpus(4, 4, 1_000, SEED_PRODFORM).enumerate() {
            for sel in all_selectors(&m) {
                let terms = enumerate_term_subgraphs(&m, &sel);
                for i in 0..terms.len() {
                    for j in (i + 1)..terms.len() {
                        pairs += 1;
                        if !verify_sign_product_identity(&terms[i], &terms[j]).unwrap() {
                            return Err(format!(
                                "instance {idx}, selector {sel:?}, terms {i}/{j}: identity failed"
                            ));
                        }
                    }
                }
            }
        }
        check(pairs > 10_000, &format!("only {pairs} pairs exercised"))?;
        Ok(())
    });
}

#[test]
fn criterion_07_exact_cancellation_on_filtered_pairs() {
    criterion(7, "exact cancellation on single-e-s-cycle pairs", None, || {
        let mut found = 0usize;
        for m in corpus(4, 4, 2_000, SEED_CANCELLATION) {
            for sel in all_selectors(&m) {
                let terms = enumerate_term_subgraphs(&m, &sel);
                for i in 0..terms.len() {
                    for j in (i + 1)..terms.len() {
                        let cycles = union_cycles(&terms[i], &terms[j]).unwrap();
                        let meets = cycles.len() == 1
                            && cycles[0].is_e_cycle()
                            && cycles[0].is_s_cycle();
                        if !meets {
                            continue;
                        }
                        found += 1;
                        match verify_cancellation(&terms[i], &terms[j]) {
                            Ok(true) => {}
                            other => {
                                return Err(format!(
                                    "pair {i}/{j} met the precondition but got {other:?}"
                                ));
                            }
                        }
                    }
                }
            }
            if found >= 100 {
                break;
            }
        }
        check(
            found >= 100,
            &format!("only {found} filtered instances, need at least 100"),
        )?;
        Ok(())
    });
}

#[test]
fn criterion_08_resign_invariance_on_corpus() {
    criterion(8, "column re-signing invariance on 1k pairs", Some(Duration::from_secs(60)), || {
        for (idx, m) in corpus(4, 4, 1_000, SEED_RESIGN).enumerate() {
            let signing_seed = SEED_RESIGN
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                .wrapping_add(idx as u64);
            let ok = check_resign_invariance(&m, signing_seed, BUDGET)
                .map_err(|e| format!("instance {idx}: {e}"))?;
            if !ok {
                return Err(format!("instance {idx}: analysis changed under re-signing"));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_09_determinant_equals_term_sum_on_corpus() {
    criterion(9, "determinant equals term sum on 1k matrices", Some(Duration::from_secs(60)), || {
        for (idx, m) in corpus(4, 4, 1_000, SEED_DET_ORACLE).enumerate() {
            for sel in all_selectors(&m) {
                let sum: Rational = enumerate_term_subgraphs(&m, &sel)
                    .iter()
                    .map(|t| t.value().clone())
                    .sum();
                let det = m.submatrix(&sel).determinant().unwrap();
                if sum != det {
                    return Err(format!(
                        "instance {idx}, selector {sel:?}: term sum {sum} != determinant {det}"
                    ));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_10_cli_reports_are_byte_identical() {
    criterion(10, "CLI JSON determinism", None, || {
        let sample = concat!(env!("CARGO_MANIFEST_DIR"), "/../../samples/counterexample.rxn");
        let run = || {
            let output = std::process::Command::new(env!("CARGO_BIN_EXE_analyze"))
                .args(["--input", sample, "--check", "all", "--report", "json"])
                .output()
                .expect("binary runs");
            (output.status.code(), output.stdout)
        };
        let (code1, out1) = run();
        let (code2, out2) = run();
        check(code1 == Some(0), &format!("first run exited {code1:?}"))?;
        check(code2 == Some(0), &format!("second run exited {code2:?}"))?;
        check(!out1.is_empty(), "report is empty")?;
        check(out1 == out2, "reports differ between runs")?;
        let parsed: serde_json::Value = serde_json::from_slice(&out1)
            .map_err(|e| format!("report is not valid JSON: {e}"))?;
        check(
            parsed["conclusion"] == serde_json::json!("InjectiveWithOutflows"),
            "JSON conclusion mismatch",
        )?;
        Ok(())
    });
}

fn all_selectors(m: &StoichMatrix) -> Vec<SubmatrixSelector> {
    let mut out = Vec::new();
    for k in 1..=m.rows().min(m.cols()) {
        out.extend(selectors_of_size(m.rows(), m.cols(), k));
    }
    out
}

fn selectors_of_size(n: usize, mcols: usize, k: usize) -> Vec<SubmatrixSelector> {
    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(k);
        fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if current.len() == k {
                out.push(current.clone());
                return;
            }
            for i in start..n {
                current.push(i);
                rec(i + 1, n, k, current, out);
                current.pop();
            }
        }
        rec(0, n, k, &mut current, &mut out);
        out
    }
    let mut out = Vec::new();
    for rows in combinations(n, k) {
        for cols in combinations(mcols, k) {
            out.push(SubmatrixSelector::new(rows.clone(), cols).unwrap());
        }
    }
    out
}

/// The corpus generators themselves are deterministic; two passes see the
/// same matrices. Guards the seeds used above.
#[test]
fn corpus_generators_are_reproducible() {
    let first: Vec<String> = corpus(4, 4, 5, SEED_4X4).map(|m| m.to_text()).collect();
    let second: Vec<String> = corpus(4, 4, 5, SEED_4X4).map(|m| m.to_text()).collect();
    assert_eq!(first, second);
    let distinct: BTreeSet<String> = first.into_iter().collect();
    assert!(distinct.len() > 1, "generator must not repeat one matrix");
}
