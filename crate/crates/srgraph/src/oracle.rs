//! Seeded random instances and brute-force cross-validation.
//!
//! The graph-side checks (cycle parities, Condition (*)) and the matrix-side
//! checks (sign classification, SSD) are implemented through entirely
//! different code paths; on small random matrices their known relationships
//! must hold on every instance. This module generates the instances and runs
//! the per-instance comparisons; any failure is an implementation bug, never
//! an expected outcome.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cycle::{check_condition_star, enumerate_cycles, ConditionStarVerdict, Parity};
use crate::graph::SRGraph;
use crate::matrix::{BudgetExceeded, MatrixError, SsdVerdict, StoichMatrix};
use crate::rational::{rat, Rational, Sign};

/// Configuration for the seeded matrix generator. The same seed always
/// yields the same matrix sequence.
#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub rows: usize,
    pub cols: usize,
    /// Values drawn for nonzero entries; zeros in the pool are ignored
    /// (sparsity comes from `density`).
    pub entry_pool: Vec<Rational>,
    /// Probability that an entry is nonzero.
    pub density: f64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(rows: usize, cols: usize, seed: u64) -> GeneratorConfig {
        GeneratorConfig {
            rows,
            cols,
            entry_pool: default_entry_pool(),
            density: 0.6,
            seed,
        }
    }
}

/// The default pool: integers -2..=2.
pub fn default_entry_pool() -> Vec<Rational> {
    (-2..=2).map(rat).collect()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeneratorError {
    #[error("matrix dimensions must be at least 1x1")]
    EmptyDims,
    #[error("entry pool is empty")]
    EmptyPool,
    #[error("density is positive but the pool has no nonzero entries")]
    NoNonzeroEntries,
    #[error("density must lie in [0, 1], got {0}")]
    InvalidDensity(f64),
}

/// Deterministic stream of random matrices.
#[derive(Debug)]
pub struct MatrixGenerator {
    rows: usize,
    cols: usize,
    nonzero_pool: Vec<Rational>,
    density: f64,
    rng: ChaCha8Rng,
}

impl MatrixGenerator {
    pub fn new(cfg: &GeneratorConfig) -> Result<MatrixGenerator, GeneratorError> {
        if cfg.rows == 0 || cfg.cols == 0 {
            return Err(GeneratorError::EmptyDims);
        }
        if cfg.entry_pool.is_empty() {
            return Err(GeneratorError::EmptyPool);
        }
        if !(0.0..=1.0).contains(&cfg.density) || cfg.density.is_nan() {
            return Err(GeneratorError::InvalidDensity(cfg.density));
        }
        let nonzero_pool: Vec<Rational> = cfg
            .entry_pool
            .iter()
            .filter(|v| !v.is_zero())
            .cloned()
            .collect();
        if cfg.density > 0.0 && nonzero_pool.is_empty() {
            return Err(GeneratorError::NoNonzeroEntries);
        }
        Ok(MatrixGenerator {
            rows: cfg.rows,
            cols: cfg.cols,
            nonzero_pool,
            density: cfg.density,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        })
    }

    /// Draws the next matrix: entries in row-major order, each nonzero with
    /// probability `density` and then uniform over the nonzero pool.
    pub fn next_matrix(&mut self) -> StoichMatrix {
        let mut m = StoichMatrix::zero(self.rows, self.cols).expect("validated dims");
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.density > 0.0 && self.rng.gen_bool(self.density) {
                    let pick = self.rng.gen_range(0..self.nonzero_pool.len());
                    m.set(i, j, self.nonzero_pool[pick].clone());
                }
            }
        }
        m
    }
}

impl Iterator for MatrixGenerator {
    type Item = StoichMatrix;

    fn next(&mut self) -> Option<StoichMatrix> {
        Some(self.next_matrix())
    }
}

/// Draws a single matrix from a fresh generator seeded by the config.
pub fn random_matrix(cfg: &GeneratorConfig) -> Result<StoichMatrix, GeneratorError> {
    Ok(MatrixGenerator::new(cfg)?.next_matrix())
}

/// Per-instance outcome of the sufficiency check: Condition (*) may fail
/// (the implication is then vacuous), or it holds and SSD must hold too.
/// `Violation` carries both witnesses and is never expected.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)] // the witness payload only exists on failure
pub enum SufficiencyOutcome {
    ConditionStarFails,
    ImplicationHolds,
    Violation {
        condition_star: ConditionStarVerdict,
        ssd: SsdVerdict,
    },
}

/// If Condition (*) holds for the SR graph, SSD must hold for the matrix.
pub fn check_star_implies_ssd(
    s: &StoichMatrix,
    budget: u64,
) -> Result<SufficiencyOutcome, BudgetExceeded> {
    let g = SRGraph::from_matrix(s);
    let star = check_condition_star(&g, None).expect("no length cap");
    if !star.holds {
        return Ok(SufficiencyOutcome::ConditionStarFails);
    }
    let ssd = s.is_ssd(budget)?;
    if ssd.holds {
        Ok(SufficiencyOutcome::ImplicationHolds)
    } else {
        Ok(SufficiencyOutcome::Violation {
            condition_star: star,
            ssd,
        })
    }
}

/// The two equivalent statements: every cycle is an o-cycle iff every square
/// submatrix has signed determinant. Returns their agreement; `false` is an
/// implementation bug.
pub fn check_o_cycle_signed_det_equivalence(s: &StoichMatrix, budget: u64) -> Result<bool, BudgetExceeded> {
    let g = SRGraph::from_matrix(s);
    let enumeration = enumerate_cycles(&g, None);
    let all_o = enumeration.cycles.iter().all(|c| c.parity() == Parity::Odd);
    let signed = s.all_submatrices_signed_determinant(budget)?;
    Ok(all_o == signed.holds)
}

/// Compares the full analysis of a matrix against its column-resigned
/// version: the cycle classification multiset (length, parity, stoich value)
/// and every verdict, including witness walks, must be identical.
pub fn compare_resigned(
    s: &StoichMatrix,
    signs: &[Sign],
    budget: u64,
) -> Result<bool, ResignCheckError> {
    let resigned = s.resign_columns(signs)?;
    let g = SRGraph::from_matrix(s);
    let g2 = SRGraph::from_matrix(&resigned);

    let classify = |g: &SRGraph| -> Vec<(usize, Parity, Rational)> {
        let mut classes: Vec<(usize, Parity, Rational)> = enumerate_cycles(g, None)
            .cycles
            .iter()
            .map(|c| (c.len(), c.parity(), c.stoich().clone()))
            .collect();
        classes.sort();
        classes
    };
    if classify(&g) != classify(&g2) {
        return Ok(false);
    }

    let star1 = check_condition_star(&g, None).expect("no cap");
    let star2 = check_condition_star(&g2, None).expect("no cap");
    let walks = |v: &ConditionStarVerdict| {
        (
            v.holds,
            v.bad_e_cycle.as_ref().map(|c| c.walk().to_vec()),
            v.bad_pair
                .as_ref()
                .map(|(a, b)| (a.walk().to_vec(), b.walk().to_vec())),
        )
    };
    if walks(&star1) != walks(&star2) {
        return Ok(false);
    }

    let ssd1 = s.is_ssd(budget)?;
    let ssd2 = resigned.is_ssd(budget)?;
    if ssd1 != ssd2 {
        return Ok(false);
    }
    let sd1 = s.all_submatrices_signed_determinant(budget)?;
    let sd2 = resigned.all_submatrices_signed_determinant(budget)?;
    Ok(sd1 == sd2)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResignCheckError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// Draws a random ±1 column signing from `seed` and runs
/// [`compare_resigned`].
pub fn check_resign_invariance(
    s: &StoichMatrix,
    seed: u64,
    budget: u64,
) -> Result<bool, ResignCheckError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signs: Vec<Sign> = (0..s.cols())
        .map(|_| if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus })
        .collect();
    compare_resigned(s, &signs, budget)
}

/// Sizes and counts for one oracle batch.
#[derive(Debug, Clone, Serialize)]
pub struct OracleBatch {
    pub rows: usize,
    pub cols: usize,
    pub count: usize,
}

/// Configuration of a full oracle run.
#[derive(Debug, Clone, Serialize)]
pub struct OracleRunConfig {
    pub batches: Vec<OracleBatch>,
    pub density: f64,
    pub seed: u64,
    pub budget: u64,
}

impl Default for OracleRunConfig {
    fn default() -> Self {
        OracleRunConfig {
            batches: vec![
                OracleBatch { rows: 4, cols: 4, count: 10_000 },
                OracleBatch { rows: 5, cols: 5, count: 1_000 },
            ],
            density: 0.6,
            seed: 1,
            budget: crate::matrix::DEFAULT_SUBMATRIX_BUDGET,
        }
    }
}

/// A failing instance, addressable for replay: batch index plus position in
/// that batch's generator sequence.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceRef {
    pub batch: usize,
    pub index: usize,
    pub rows: usize,
    pub cols: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CheckTally {
    pub checked: usize,
    pub failures: Vec<InstanceRef>,
}

/// Machine-readable summary of an oracle run.
#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    pub config: OracleRunConfig,
    pub instances: usize,
    /// Instances skipped because a submatrix budget was exceeded; skipped
    /// instances are never counted as passes.
    pub skipped_budget: usize,
    pub star_implies_ssd: CheckTally,
    pub o_cycle_signed_det: CheckTally,
    pub resign_invariance: CheckTally,
    pub ok: bool,
}

/// Runs the three per-instance checks over every batch. Batch `i` uses seed
/// `config.seed + i`; the per-instance re-signing seed mixes in the index.
pub fn run_oracle(config: &OracleRunConfig) -> OracleSummary {
    let mut summary = OracleSummary {
        config: config.clone(),
        instances: 0,
        skipped_budget: 0,
        star_implies_ssd: CheckTally::default(),
        o_cycle_signed_det: CheckTally::default(),
        resign_invariance: CheckTally::default(),
        ok: true,
    };
    for (batch_idx, batch) in config.batches.iter().enumerate() {
        let mut cfg = GeneratorConfig::new(batch.rows, batch.cols, config.seed + batch_idx as u64);
        cfg.density = config.density;
        let mut gen = MatrixGenerator::new(&cfg).expect("valid oracle config");
        for index in 0..batch.count {
            let m = gen.next_matrix();
            summary.instances += 1;
            let at = || InstanceRef {
                batch: batch_idx,
                index,
                rows: batch.rows,
                cols: batch.cols,
            };
            match check_star_implies_ssd(&m, config.budget) {
                Ok(SufficiencyOutcome::Violation { .. }) => {
                    summary.star_implies_ssd.checked += 1;
                    summary.star_implies_ssd.failures.push(at());
                }
                Ok(_) => summary.star_implies_ssd.checked += 1,
                Err(BudgetExceeded { .. }) => summary.skipped_budget += 1,
            }
            match check_o_cycle_signed_det_equivalence(&m, config.budget) {
                Ok(true) => summary.o_cycle_signed_det.checked += 1,
                Ok(false) => {
                    summary.o_cycle_signed_det.checked += 1;
                    summary.o_cycle_signed_det.failures.push(at());
                }
                Err(_) => summary.skipped_budget += 1,
            }
            let resign_seed = config
                .seed
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                .wrapping_add(index as u64)
                .wrapping_add((batch_idx as u64) << 32);
            match check_resign_invariance(&m, resign_seed, config.budget) {
                Ok(true) => summary.resign_invariance.checked += 1,
                Ok(false) => {
                    summary.resign_invariance.checked += 1;
                    summary.resign_invariance.failures.push(at());
                }
                Err(_) => summary.skipped_budget += 1,
            }
        }
    }
    summary.ok = summary.star_implies_ssd.failures.is_empty()
        && summary.o_cycle_signed_det.failures.is_empty()
        && summary.resign_invariance.failures.is_empty();
    summary
}
