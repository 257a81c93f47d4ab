//! Exact-rational matrices and qualitative (sign-pattern) classification.
//!
//! The central object is [`StoichMatrix`], an n×m matrix of exact rationals.
//! On top of it this module implements the sign-pattern predicates: whether a
//! square submatrix is sign nonsingular (every matrix with the same sign
//! pattern is nonsingular), sign singular (every such matrix is singular),
//! has a signed determinant (one of the two), and whether the whole matrix is
//! SSD (every square submatrix sign nonsingular or numerically singular).

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{parse_rational, rat, rational_to_string, Rational, Sign};
use crate::terms::Permutation;

/// Default cap on the number of square submatrices visited by the
/// exhaustive checks ([`StoichMatrix::is_ssd`] and friends).
pub const DEFAULT_SUBMATRIX_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow { row: usize, got: usize, expected: usize },
    #[error("determinant requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected {expected} column signs, got {got}")]
    SignCountMismatch { expected: usize, got: usize },
}

/// Line/column-addressed parse failure for the matrix text format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct MatrixParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// An exact rational matrix, row-major. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoichMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl StoichMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MatrixError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(MatrixError::Empty);
        }
        let cols = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::RaggedRow {
                    row: i,
                    got: row.len(),
                    expected: cols,
                });
            }
        }
        Ok(StoichMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Test/ergonomics helper: builds a matrix from integer rows.
    /// Panics on empty or ragged input.
    pub fn from_integers(rows: &[&[i64]]) -> Self {
        StoichMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&n| rat(n)).collect())
                .collect(),
        )
        .expect("well-formed integer rows")
    }

    pub fn zero(rows: usize, cols: usize) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty);
        }
        Ok(StoichMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.data[row * self.cols + col] = value;
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    /// Parses the grid text format: one row per line, entries separated by
    /// whitespace and/or commas, each entry an integer or `p/q` fraction.
    /// `#` starts a comment; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, MatrixParseError> {
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut width: Option<usize> = None;
        for (line_idx, raw_line) in text.lines().enumerate() {
            let line_no = line_idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let mut row = Vec::new();
            let mut token = String::new();
            let mut token_col = 0usize;
            let mut col = 0usize;
            let flush = |token: &mut String, token_col: usize, row: &mut Vec<Rational>| {
                if token.is_empty() {
                    return Ok(());
                }
                let value = parse_rational(token).map_err(|e| MatrixParseError {
                    line: line_no,
                    column: token_col,
                    message: e.to_string(),
                })?;
                token.clear();
                row.push(value);
                Ok(())
            };
            for ch in line.chars() {
                col += 1;
                if ch.is_whitespace() || ch == ',' {
                    flush(&mut token, token_col, &mut row)?;
                } else if ch.is_ascii_digit() || ch == '-' || ch == '+' || ch == '/' {
                    if token.is_empty() {
                        token_col = col;
                    }
                    token.push(ch);
                } else {
                    return Err(MatrixParseError {
                        line: line_no,
                        column: col,
                        message: format!("unexpected character `{ch}`"),
                    });
                }
            }
            flush(&mut token, token_col, &mut row)?;
            if row.is_empty() {
                continue;
            }
            match width {
                None => width = Some(row.len()),
                Some(w) if w != row.len() => {
                    return Err(MatrixParseError {
                        line: line_no,
                        column: 1,
                        message: format!("row has {} entries, expected {}", row.len(), w),
                    });
                }
                _ => {}
            }
            rows.push(row);
        }
        StoichMatrix::from_rows(rows).map_err(|e| MatrixParseError {
            line: 1,
            column: 1,
            message: e.to_string(),
        })
    }

    /// Canonical text form (space-separated reduced rationals, one row per
    /// line). `parse` of the result reproduces the matrix exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let row = (0..self.cols)
                .map(|j| rational_to_string(self.get(i, j)))
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&row);
            out.push('\n');
        }
        out
    }

    /// Returns a copy with column `j` multiplied by `signs[j]`.
    pub fn resign_columns(&self, signs: &[Sign]) -> Result<Self, MatrixError> {
        if signs.len() != self.cols {
            return Err(MatrixError::SignCountMismatch {
                expected: self.cols,
                got: signs.len(),
            });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for (j, sign) in signs.iter().enumerate() {
                if *sign == Sign::Minus {
                    let v = -out.get(i, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn submatrix(&self, sel: &SubmatrixSelector) -> StoichMatrix {
        let data = sel
            .rows
            .iter()
            .flat_map(|&i| sel.cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        StoichMatrix {
            rows: sel.size(),
            cols: sel.size(),
            data,
        }
    }

    /// Exact determinant by Gaussian elimination over the rationals.
    pub fn determinant(&self) -> Result<Rational, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut work: Vec<Rational> = self.data.clone();
        let at = |w: &Vec<Rational>, i: usize, j: usize| w[i * n + j].clone();
        let mut det = Rational::one();
        for col in 0..n {
            let pivot_row = match (col..n).find(|&r| !work[r * n + col].is_zero()) {
                Some(r) => r,
                None => return Ok(Rational::zero()),
            };
            if pivot_row != col {
                for j in 0..n {
                    work.swap(pivot_row * n + j, col * n + j);
                }
                det = -det;
            }
            let pivot = at(&work, col, col);
            det *= pivot.clone();
            for r in (col + 1)..n {
                if work[r * n + col].is_zero() {
                    continue;
                }
                let factor = at(&work, r, col) / pivot.clone();
                for j in col..n {
                    let delta = factor.clone() * at(&work, col, j);
                    work[r * n + j] -= delta;
                }
            }
        }
        Ok(det)
    }

    /// Classifies the signs of the nonzero determinant terms of the selected
    /// square submatrix. Enumeration backtracks over column choices with
    /// row-support pruning and exits early once terms of both signs are seen.
    pub fn classify_terms(&self, sel: &SubmatrixSelector) -> TermClassification {
        let k = sel.size();
        // Candidate column positions per row position, by matrix support.
        let support: Vec<Vec<usize>> = (0..k)
            .map(|i| {
                (0..k)
                    .filter(|&j| !self.get(sel.rows[i], sel.cols[j]).is_zero())
                    .collect()
            })
            .collect();
        if support.iter().any(|s| s.is_empty()) {
            return TermClassification {
                signs: TermSigns::NoNonzeroTerms,
                witnesses: Vec::new(),
            };
        }
        let mut first_plus: Option<Vec<usize>> = None;
        let mut first_minus: Option<Vec<usize>> = None;
        let mut images: Vec<usize> = Vec::with_capacity(k);
        let mut used = vec![false; k];
        // Depth-first over rows in order; images are generated in
        // lexicographic order, so witnesses are deterministic.
        let mut stack: Vec<std::slice::Iter<usize>> = vec![support[0].iter()];
        'outer: while let Some(iter) = stack.last_mut() {
            let mut advanced = false;
            for &j in iter.by_ref() {
                if used[j] {
                    continue;
                }
                // Sign of the partial product plus permutation parity is only
                // needed at the leaf; entries are small, so recompute there.
                images.push(j);
                used[j] = true;
                if images.len() == k {
                    let perm = Permutation::from_images(images.clone())
                        .expect("backtracking yields bijections");
                    let mut sign = perm.parity();
                    for (i, &jj) in images.iter().enumerate() {
                        sign = sign
                            * Sign::of(self.get(sel.rows[i], sel.cols[jj]))
                                .expect("support guarantees nonzero");
                    }
                    match sign {
                        Sign::Plus => {
                            if first_plus.is_none() {
                                first_plus = Some(images.clone());
                            }
                        }
                        Sign::Minus => {
                            if first_minus.is_none() {
                                first_minus = Some(images.clone());
                            }
                        }
                    }
                    used[j] = false;
                    images.pop();
                    if first_plus.is_some() && first_minus.is_some() {
                        break 'outer;
                    }
                } else {
                    stack.push(support[images.len()].iter());
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                stack.pop();
                if let Some(&j) = images.last() {
                    used[j] = false;
                    images.pop();
                }
            }
        }
        let witness = |images: Option<Vec<usize>>| {
            images.map(|v| Permutation::from_images(v).expect("bijection"))
        };
        match (witness(first_plus), witness(first_minus)) {
            (None, None) => TermClassification {
                signs: TermSigns::NoNonzeroTerms,
                witnesses: Vec::new(),
            },
            (Some(p), None) => TermClassification {
                signs: TermSigns::AllPositive,
                witnesses: vec![p],
            },
            (None, Some(m)) => TermClassification {
                signs: TermSigns::AllNegative,
                witnesses: vec![m],
            },
            (Some(p), Some(m)) => TermClassification {
                signs: TermSigns::MixedSigns,
                witnesses: vec![p, m],
            },
        }
    }

    /// True iff every matrix with this submatrix's sign pattern is
    /// nonsingular: at least one nonzero term, all of one sign.
    pub fn is_sign_nonsingular(&self, sel: &SubmatrixSelector) -> bool {
        matches!(
            self.classify_terms(sel).signs,
            TermSigns::AllPositive | TermSigns::AllNegative
        )
    }

    /// True iff every matrix with this submatrix's sign pattern is singular:
    /// the determinant expansion has no nonzero term at all.
    pub fn is_sign_singular(&self, sel: &SubmatrixSelector) -> bool {
        self.classify_terms(sel).signs == TermSigns::NoNonzeroTerms
    }

    /// Sign nonsingular or sign singular; equivalently, no two terms of
    /// opposite sign.
    pub fn has_signed_determinant(&self, sel: &SubmatrixSelector) -> bool {
        self.classify_terms(sel).signs != TermSigns::MixedSigns
    }

    /// Checks that every square submatrix is sign nonsingular or numerically
    /// singular. On failure returns the first counterexample, ordered by
    /// size, then lexicographically by (rows, cols).
    pub fn is_ssd(&self, budget: u64) -> Result<SsdVerdict, BudgetExceeded> {
        let counterexample = self.first_failing_submatrix(budget, |m, sel| {
            match m.classify_terms(sel).signs {
                TermSigns::AllPositive | TermSigns::AllNegative | TermSigns::NoNonzeroTerms => true,
                TermSigns::MixedSigns => m.submatrix(sel).determinant().expect("square").is_zero(),
            }
        })?;
        Ok(SsdVerdict {
            holds: counterexample.is_none(),
            counterexample,
        })
    }

    /// Checks that no square submatrix has determinant terms of both signs.
    /// Strictly stronger than [`StoichMatrix::is_ssd`].
    pub fn all_submatrices_signed_determinant(
        &self,
        budget: u64,
    ) -> Result<SignedDetVerdict, BudgetExceeded> {
        let counterexample =
            self.first_failing_submatrix(budget, |m, sel| m.has_signed_determinant(sel))?;
        Ok(SignedDetVerdict {
            holds: counterexample.is_none(),
            counterexample,
        })
    }

    fn first_failing_submatrix(
        &self,
        budget: u64,
        ok: impl Fn(&StoichMatrix, &SubmatrixSelector) -> bool,
    ) -> Result<Option<SubmatrixSelector>, BudgetExceeded> {
        let required = submatrix_count(self.rows, self.cols);
        if required > budget as u128 {
            return Err(BudgetExceeded {
                required,
                budget,
            });
        }
        for k in 1..=self.rows.min(self.cols) {
            for rows in (0..self.rows).combinations(k) {
                for cols in (0..self.cols).combinations(k) {
                    let sel = SubmatrixSelector { rows: rows.clone(), cols };
                    if !ok(self, &sel) {
                        return Ok(Some(sel));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Number of square submatrices of an n×m matrix: Σ_k C(n,k)·C(m,k).
pub fn submatrix_count(n: usize, m: usize) -> u128 {
    let mut total: u128 = 0;
    for k in 1..=n.min(m) {
        total = total.saturating_add(binomial(n, k).saturating_mul(binomial(m, k)));
    }
    total
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Row/column index sets selecting a square submatrix. Both lists are
/// strictly increasing and of equal, nonzero length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubmatrixSelector {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectorError {
    #[error("row and column selections must have equal nonzero length")]
    BadShape,
    #[error("indices must be strictly increasing")]
    NotIncreasing,
    #[error("index out of bounds for {rows}x{cols} matrix")]
    OutOfBounds { rows: usize, cols: usize },
}

impl SubmatrixSelector {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self, SelectorError> {
        if rows.is_empty() || rows.len() != cols.len() {
            return Err(SelectorError::BadShape);
        }
        let increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&rows) || !increasing(&cols) {
            return Err(SelectorError::NotIncreasing);
        }
        Ok(SubmatrixSelector { rows, cols })
    }

    /// Selects the full square of a k×k matrix.
    pub fn full(k: usize) -> Self {
        SubmatrixSelector {
            rows: (0..k).collect(),
            cols: (0..k).collect(),
        }
    }

    pub fn checked_for(&self, m: &StoichMatrix) -> Result<(), SelectorError> {
        let ok = self.rows.iter().all(|&i| i < m.rows()) && self.cols.iter().all(|&j| j < m.cols());
        if ok {
            Ok(())
        } else {
            Err(SelectorError::OutOfBounds {
                rows: m.rows(),
                cols: m.cols(),
            })
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }
}

/// Sign structure of the nonzero terms in a determinant expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermSigns {
    NoNonzeroTerms,
    AllPositive,
    AllNegative,
    MixedSigns,
}

/// Classification result plus up to two witnessing permutations (column
/// images over the selector's positions): one for a uniform sign, a
/// positive/negative pair for `MixedSigns`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermClassification {
    pub signs: TermSigns,
    pub witnesses: Vec<Permutation>,
}

/// Outcome of the SSD check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsdVerdict {
    pub holds: bool,
    /// Present iff `!holds`: a submatrix that is neither sign nonsingular
    /// nor singular.
    pub counterexample: Option<SubmatrixSelector>,
}

/// Outcome of the all-submatrices-signed-determinant check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedDetVerdict {
    pub holds: bool,
    /// Present iff `!holds`: a submatrix with terms of both signs.
    pub counterexample: Option<SubmatrixSelector>,
}

/// The exhaustive submatrix checks refuse inputs whose submatrix count
/// exceeds the budget rather than running unbounded.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("submatrix enumeration needs {required} submatrices, budget is {budget}; raise the budget to proceed")]
pub struct BudgetExceeded {
    pub required: u128,
    pub budget: u64,
}
