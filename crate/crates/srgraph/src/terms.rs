//! Determinant terms as permutations and matchings.
//!
//! For a square submatrix, each permutation of the selected columns whose
//! entries are all nonzero contributes one signed term to the determinant
//! expansion and corresponds to one perfect matching (a term subgraph) in the
//! bipartite graph of the selection. Two distinct term subgraphs overlay to a
//! disjoint union of cycles, one per nontrivial cycle of the connecting
//! permutation; how term signs interact is governed entirely by the parities
//! of those cycles. This module makes all of that executable, including the
//! sign product identity and the cancellation rule used by the theorem-level
//! property checks.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cycle::{Cycle, Parity};
use crate::graph::Edge;
use crate::matrix::{StoichMatrix, SubmatrixSelector};
use crate::rational::{Rational, Sign};

/// A permutation of positions `0..k`, stored as the image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("image vector is not a bijection on 0..{expected}")]
pub struct PermutationError {
    pub expected: usize,
}

impl Permutation {
    pub fn identity(k: usize) -> Permutation {
        Permutation {
            images: (0..k).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Permutation, PermutationError> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &j in &images {
            if j >= k || seen[j] {
                return Err(PermutationError { expected: k });
            }
            seen[j] = true;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: (0..self.degree()).map(|i| self.image(other.image(i))).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// Disjoint cycle decomposition including trivial (length-1) cycles.
    /// Each cycle starts at its smallest element; cycles are ordered by
    /// their smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut at = self.image(start);
            while at != start {
                seen[at] = true;
                cycle.push(at);
                at = self.image(at);
            }
            out.push(cycle);
        }
        out
    }

    pub fn nontrivial_cycles(&self) -> Vec<Vec<usize>> {
        self.cycles().into_iter().filter(|c| c.len() > 1).collect()
    }

    /// Parity from the cycle decomposition: (-1)^(elements in cycles minus
    /// number of cycles). Including or excluding trivial cycles does not
    /// change the result, since each contributes zero to the exponent.
    pub fn parity(&self) -> Sign {
        let cycles = self.cycles();
        let elements: usize = cycles.iter().map(Vec::len).sum();
        Sign::neg_one_pow(elements - cycles.len())
    }
}

/// One nonzero term of a determinant expansion, as a perfect matching on the
/// selected rows and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermSubgraph {
    selector: SubmatrixSelector,
    perm: Permutation,
    /// `edges[i]` is the matrix entry at (selector.rows[i],
    /// selector.cols[perm(i)]), as a signed, valued graph edge.
    edges: Vec<Edge>,
    /// P(α) times the product of the matched entries; never zero.
    value: Rational,
}

impl TermSubgraph {
    pub fn selector(&self) -> &SubmatrixSelector {
        &self.selector
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn sign(&self) -> Sign {
        Sign::of(&self.value).expect("term values are nonzero")
    }
}

/// Enumerates every nonzero determinant term of the selected submatrix, in
/// lexicographic order of the permutation image vectors. The term values sum
/// to the exact determinant.
pub fn enumerate_term_subgraphs(s: &StoichMatrix, sel: &SubmatrixSelector) -> Vec<TermSubgraph> {
    let k = sel.size();
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(k);
    let mut used = vec![false; k];
    fn recurse(
        s: &StoichMatrix,
        sel: &SubmatrixSelector,
        images: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<TermSubgraph>,
    ) {
        let k = sel.size();
        let i = images.len();
        if i == k {
            let perm = Permutation::from_images(images.clone()).expect("bijection");
            let mut value = Rational::from_integer(perm.parity().as_int().into());
            let edges = images
                .iter()
                .enumerate()
                .map(|(row_pos, &col_pos)| {
                    let entry = s.get(sel.rows[row_pos], sel.cols[col_pos]);
                    value *= entry.clone();
                    Edge {
                        species: sel.rows[row_pos],
                        reaction: sel.cols[col_pos],
                        sign: Sign::of(entry).expect("nonzero"),
                        value: entry.clone().abs(),
                    }
                })
                .collect();
            out.push(TermSubgraph {
                selector: sel.clone(),
                perm,
                edges,
                value,
            });
            return;
        }
        for j in 0..k {
            if used[j] || s.get(sel.rows[i], sel.cols[j]).is_zero() {
                continue;
            }
            images.push(j);
            used[j] = true;
            recurse(s, sel, images, used, out);
            images.pop();
            used[j] = false;
        }
    }
    recurse(s, sel, &mut images, &mut used, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermPairError {
    #[error("terms come from different submatrix selections")]
    SelectorMismatch,
    #[error("the two terms are identical")]
    IdenticalTerms,
}

/// Overlays two distinct term subgraphs and materializes one SR-graph cycle
/// per nontrivial cycle of the connecting permutation. Isolated shared edges
/// (fixed points) contribute nothing. Cycles are returned sorted and are
/// pairwise edge-disjoint.
pub fn union_cycles(a: &TermSubgraph, b: &TermSubgraph) -> Result<Vec<Cycle>, TermPairError> {
    if a.selector != b.selector {
        return Err(TermPairError::SelectorMismatch);
    }
    if a.perm == b.perm {
        return Err(TermPairError::IdenticalTerms);
    }
    let connecting = b.perm.compose(&a.perm.inverse());
    let a_inv = a.perm.inverse();
    let mut cycles = Vec::new();
    for perm_cycle in connecting.nontrivial_cycles() {
        // perm_cycle lists column positions c_1..c_r; row position a(j)
        // carries the a-edge into c_j and the b-edge into c_{j+1}.
        let mut edges = Vec::with_capacity(2 * perm_cycle.len());
        for &col_pos in &perm_cycle {
            let row_pos = a_inv.image(col_pos);
            debug_assert_eq!(a.perm.image(row_pos), col_pos);
            edges.push(a.edges[row_pos].clone());
            edges.push(b.edges[row_pos].clone());
        }
        cycles.push(Cycle::from_edges(edges).expect("matching overlay forms cycles"));
    }
    cycles.sort();
    Ok(cycles)
}

/// Checks the sign product identity on a pair of nonzero terms: the sign of
/// the term product must equal (-1) raised to the number of even-parity
/// cycles in the overlay. Both sides are computed independently; a `false`
/// return would indicate an implementation bug.
pub fn verify_sign_product_identity(a: &TermSubgraph, b: &TermSubgraph) -> Result<bool, TermPairError> {
    let cycles = union_cycles(a, b)?;
    let e_count = cycles.iter().filter(|c| c.parity() == Parity::Even).count();
    let lhs = a.sign() * b.sign();
    Ok(lhs == Sign::neg_one_pow(e_count))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CancellationError {
    #[error(transparent)]
    Pair(#[from] TermPairError),
    #[error("precondition unmet: overlay has {cycles} cycles, e-cycle: {e_cycle}, s-cycle: {s_cycle}")]
    PreconditionUnmet {
        cycles: usize,
        e_cycle: bool,
        s_cycle: bool,
    },
}

/// For a pair whose overlay is exactly one cycle that is both an e-cycle and
/// an s-cycle, checks that the two terms cancel exactly. The precondition
/// failing is an error, distinct from the check returning `false`.
pub fn verify_cancellation(a: &TermSubgraph, b: &TermSubgraph) -> Result<bool, CancellationError> {
    let cycles = union_cycles(a, b)?;
    let (e_cycle, s_cycle) = match cycles.as_slice() {
        [only] => (only.is_e_cycle(), only.is_s_cycle()),
        _ => (false, false),
    };
    if cycles.len() != 1 || !e_cycle || !s_cycle {
        return Err(CancellationError::PreconditionUnmet {
            cycles: cycles.len(),
            e_cycle,
            s_cycle,
        });
    }
    Ok((a.value.clone() + b.value.clone()).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use std::collections::BTreeSet;

    fn o_cycle_matrix() -> StoichMatrix {
        StoichMatrix::from_integers(&[&[1, 1, 0], &[-1, 0, 1], &[0, -1, 1]])
    }

    fn e_s_cycle_matrix(a: i64, b: i64, c: i64) -> StoichMatrix {
        StoichMatrix::from_integers(&[&[-a, b, 0], &[-c, 0, b], &[0, -c, a]])
    }

    #[test]
    fn parity_examples() {
        // Image vector for the worked 4-element example: one fixed point and
        // one 3-cycle, an even permutation.
        let alpha = Permutation::from_images(vec![0, 2, 3, 1]).unwrap();
        assert_eq!(alpha.parity(), Sign::Plus);
        assert_eq!(Permutation::identity(5).parity(), Sign::Plus);
        let transposition = Permutation::from_images(vec![1, 0, 2]).unwrap();
        assert_eq!(transposition.parity(), Sign::Minus);
    }

    #[test]
    fn group_laws() {
        let p = Permutation::from_images(vec![2, 0, 1, 3]).unwrap();
        let q = Permutation::from_images(vec![1, 3, 0, 2]).unwrap();
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(4));
        assert_eq!(p.inverse().compose(&p), Permutation::identity(4));
        // Decomposition reproduces the mapping.
        let rebuilt = {
            let mut images = vec![0; p.degree()];
            for cycle in p.cycles() {
                for (i, &x) in cycle.iter().enumerate() {
                    images[x] = cycle[(i + 1) % cycle.len()];
                }
            }
            Permutation::from_images(images).unwrap()
        };
        assert_eq!(rebuilt, p);
        // Parity is a homomorphism.
        assert_eq!(p.compose(&q).parity(), p.parity() * q.parity());
    }

    #[test]
    fn from_images_rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![0, 2]).is_err());
        assert!(Permutation::from_images(vec![]).is_ok());
    }

    #[test]
    fn term_enumeration_examples() {
        let sel = SubmatrixSelector::full(3);
        let terms = enumerate_term_subgraphs(&o_cycle_matrix(), &sel);
        assert_eq!(terms.len(), 2);
        let values: BTreeSet<Rational> = terms.iter().map(|t| t.value.clone()).collect();
        assert_eq!(values, BTreeSet::from([rat(1)]));

        let terms = enumerate_term_subgraphs(&e_s_cycle_matrix(1, 2, 3), &sel);
        assert_eq!(terms.len(), 2);
        let values: BTreeSet<Rational> = terms.iter().map(|t| t.value.clone()).collect();
        assert_eq!(values, BTreeSet::from([rat(-6), rat(6)]));

        let zero = StoichMatrix::zero(3, 3).unwrap();
        assert!(enumerate_term_subgraphs(&zero, &sel).is_empty());
    }

    #[test]
    fn terms_sum_to_determinant() {
        let samples = [
            o_cycle_matrix(),
            e_s_cycle_matrix(1, 2, 3),
            StoichMatrix::from_integers(&[
                &[2, -1, 0, 3],
                &[1, 1, -2, 0],
                &[0, 4, 1, -1],
                &[-3, 0, 2, 1],
            ]),
        ];
        for m in &samples {
            let sel = SubmatrixSelector::full(m.rows());
            let sum: Rational = enumerate_term_subgraphs(m, &sel)
                .iter()
                .map(|t| t.value.clone())
                .sum();
            assert_eq!(sum, m.determinant().unwrap());
        }
    }

    #[test]
    fn term_subgraphs_are_matchings() {
        let sel = SubmatrixSelector::full(3);
        for term in enumerate_term_subgraphs(&o_cycle_matrix(), &sel) {
            let mut rows = BTreeSet::new();
            let mut cols = BTreeSet::new();
            for e in term.edges() {
                assert!(rows.insert(e.species));
                assert!(cols.insert(e.reaction));
            }
            assert_eq!(rows.len(), 3);
            assert_eq!(cols.len(), 3);
        }
    }

    /// Over an all-ones 4x4, the permutations with image vectors [0,2,3,1]
    /// and [1,3,2,0] connect via two transpositions and overlay into two
    /// 4-cycles whose edge sets can be written down by hand.
    #[test]
    fn union_of_two_matchings_yields_two_4_cycles() {
        let ones = StoichMatrix::from_integers(&[
            &[1, 1, 1, 1],
            &[1, 1, 1, 1],
            &[1, 1, 1, 1],
            &[1, 1, 1, 1],
        ]);
        let sel = SubmatrixSelector::full(4);
        let terms = enumerate_term_subgraphs(&ones, &sel);
        let find = |images: &[usize]| {
            terms
                .iter()
                .find(|t| t.perm.images() == images)
                .expect("term exists")
                .clone()
        };
        let alpha = find(&[0, 2, 3, 1]);
        let beta = find(&[1, 3, 2, 0]);
        let connecting = beta.perm.compose(&alpha.perm.inverse());
        assert_eq!(
            connecting.nontrivial_cycles(),
            vec![vec![0, 1], vec![2, 3]]
        );
        let cycles = union_cycles(&alpha, &beta).unwrap();
        assert_eq!(cycles.len(), 2);
        let keys: Vec<BTreeSet<(usize, usize)>> =
            cycles.iter().map(|c| c.edge_keys()).collect();
        assert!(keys.contains(&BTreeSet::from([(0, 0), (0, 1), (3, 1), (3, 0)])));
        assert!(keys.contains(&BTreeSet::from([(1, 2), (1, 3), (2, 3), (2, 2)])));
    }

    #[test]
    fn union_of_adjacent_transposition_is_one_4_cycle() {
        let ones = StoichMatrix::from_integers(&[&[1, 1], &[1, 1]]);
        let sel = SubmatrixSelector::full(2);
        let terms = enumerate_term_subgraphs(&ones, &sel);
        assert_eq!(terms.len(), 2);
        let cycles = union_cycles(&terms[0], &terms[1]).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 4);
    }

    #[test]
    fn union_of_the_singular_example_matchings_is_its_6_cycle() {
        let m = e_s_cycle_matrix(1, 2, 3);
        let sel = SubmatrixSelector::full(3);
        let terms = enumerate_term_subgraphs(&m, &sel);
        assert_eq!(terms.len(), 2);
        let cycles = union_cycles(&terms[0], &terms[1]).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 6);
        assert!(cycles[0].is_e_cycle());
        assert!(cycles[0].is_s_cycle());
    }

    #[test]
    fn union_rejects_identical_terms() {
        let m = e_s_cycle_matrix(1, 2, 3);
        let sel = SubmatrixSelector::full(3);
        let terms = enumerate_term_subgraphs(&m, &sel);
        assert_eq!(
            union_cycles(&terms[0], &terms[0]),
            Err(TermPairError::IdenticalTerms)
        );
    }

    #[test]
    fn sign_product_identity_examples() {
        // Same-sign pair over a single o-cycle.
        let sel = SubmatrixSelector::full(3);
        let terms = enumerate_term_subgraphs(&o_cycle_matrix(), &sel);
        assert_eq!(terms[0].sign() * terms[1].sign(), Sign::Plus);
        let cycles = union_cycles(&terms[0], &terms[1]).unwrap();
        assert_eq!(
            cycles.iter().filter(|c| c.is_e_cycle()).count(),
            0
        );
        assert!(verify_sign_product_identity(&terms[0], &terms[1]).unwrap());

        // Opposite-sign pair over a single e-cycle.
        let terms = enumerate_term_subgraphs(&e_s_cycle_matrix(1, 2, 3), &sel);
        assert_eq!(terms[0].sign() * terms[1].sign(), Sign::Minus);
        assert!(verify_sign_product_identity(&terms[0], &terms[1]).unwrap());
    }

    #[test]
    fn cancellation_examples() {
        let sel = SubmatrixSelector::full(3);
        let terms = enumerate_term_subgraphs(&e_s_cycle_matrix(1, 2, 3), &sel);
        assert_eq!(verify_cancellation(&terms[0], &terms[1]), Ok(true));

        // The o-cycle pair does not meet the precondition.
        let terms = enumerate_term_subgraphs(&o_cycle_matrix(), &sel);
        assert!(matches!(
            verify_cancellation(&terms[0], &terms[1]),
            Err(CancellationError::PreconditionUnmet { cycles: 1, e_cycle: false, .. })
        ));
    }

    #[test]
    fn union_vertex_degrees_are_one_or_two() {
        let m = StoichMatrix::from_integers(&[
            &[1, -1, 2, 0],
            &[0, 1, 1, -1],
            &[2, 0, -1, 1],
            &[1, 1, 0, 1],
        ]);
        let sel = SubmatrixSelector::full(4);
        let terms = enumerate_term_subgraphs(&m, &sel);
        for i in 0..terms.len() {
            for j in (i + 1)..terms.len() {
                let mut degree: std::collections::BTreeMap<(bool, usize), usize> =
                    Default::default();
                let mut keys = BTreeSet::new();
                for e in terms[i].edges().iter().chain(terms[j].edges()) {
                    if keys.insert(e.key()) {
                        *degree.entry((true, e.species)).or_default() += 1;
                        *degree.entry((false, e.reaction)).or_default() += 1;
                    }
                }
                assert!(degree.values().all(|&d| d == 1 || d == 2));
                // Overlay cycles are pairwise edge-disjoint.
                let cycles = union_cycles(&terms[i], &terms[j]).unwrap();
                let mut seen = BTreeSet::new();
                for c in &cycles {
                    for k in c.edge_keys() {
                        assert!(seen.insert(k), "cycles share an edge");
                    }
                }
            }
        }
    }
}
