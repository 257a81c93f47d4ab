//! Analysis orchestration and the machine/human report.
//!
//! The JSON schema is stable: field order is fixed by the struct layout,
//! every collection is deterministically ordered, and identical inputs yield
//! byte-identical reports. Rationals appear as strings (`p` or `p/q`).

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cycle::{
    condition_star_audit, condition_star_from, enumerate_cycles, Cycle, CycleEnumeration,
    Parity, PathComponent,
};
use crate::graph::SRGraph;
use crate::matrix::{StoichMatrix, SubmatrixSelector};
use crate::network::ReactionNetwork;
use crate::rational::rational_to_string;

/// Which analyses to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckSelection {
    ConditionStar,
    Ssd,
    SignedDeterminants,
    OCycles,
    All,
}

impl CheckSelection {
    fn wants_cycles(self) -> bool {
        matches!(
            self,
            CheckSelection::ConditionStar | CheckSelection::OCycles | CheckSelection::All
        )
    }

    fn wants_star(self) -> bool {
        matches!(self, CheckSelection::ConditionStar | CheckSelection::All)
    }

    fn wants_ssd(self) -> bool {
        matches!(self, CheckSelection::Ssd | CheckSelection::All)
    }

    fn wants_signed(self) -> bool {
        matches!(self, CheckSelection::SignedDeterminants | CheckSelection::All)
    }
}

impl std::str::FromStr for CheckSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "star" => Ok(CheckSelection::ConditionStar),
            "ssd" => Ok(CheckSelection::Ssd),
            "signed-det" => Ok(CheckSelection::SignedDeterminants),
            "o-cycles" => Ok(CheckSelection::OCycles),
            "all" => Ok(CheckSelection::All),
            other => Err(format!(
                "unknown check `{other}` (expected star, ssd, signed-det, o-cycles or all)"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub checks: CheckSelection,
    pub max_cycle_len: Option<usize>,
    pub submatrix_budget: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            checks: CheckSelection::All,
            max_cycle_len: None,
            submatrix_budget: crate::matrix::DEFAULT_SUBMATRIX_BUDGET,
        }
    }
}

/// What is being analyzed: a parsed reaction network or a bare matrix.
#[derive(Debug, Clone)]
pub enum AnalysisSubject {
    Network(ReactionNetwork),
    Matrix(StoichMatrix),
}

/// Overall outcome class, mapped to the CLI exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalysisStatus {
    /// Every requested check ran to completion.
    Complete,
    /// The network violates the no-one-step-catalysis requirement; no
    /// structural analysis was possible.
    InvalidInput,
    /// A submatrix budget or cycle length cap stopped a requested check.
    BudgetExceeded,
}

#[derive(Debug, Clone)]
pub struct AnalysisResult {
    pub report: AnalysisReport,
    pub status: AnalysisStatus,
    /// The graph and witnesses, for DOT rendering.
    pub graph: Option<SRGraph>,
    pub highlight_cycles: Vec<Cycle>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: InputSummary,
    /// `null` for bare-matrix input, where one-step catalysis is undefined.
    pub n1c: Option<N1cSummary>,
    pub cycles: Option<CycleSummary>,
    pub condition_star: Option<ConditionStarSummary>,
    pub ssd: Option<VerdictSummary>,
    pub signed_determinants: Option<VerdictSummary>,
    pub all_o_cycles: Option<bool>,
    pub conclusion: Conclusion,
    pub note: String,
    /// Human-readable reason when a check was refused (budget, truncation).
    pub refusal: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub kind: String,
    /// SHA-256 of the canonicalized input text.
    pub digest: String,
    pub rows: usize,
    pub cols: usize,
    pub species: Vec<String>,
    pub reactions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct N1cSummary {
    pub holds: bool,
    pub violations: Vec<N1cViolationSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct N1cViolationSummary {
    pub species: String,
    pub reaction: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleSummary {
    pub total: usize,
    pub truncated: bool,
    pub e_cycles: usize,
    pub o_cycles: usize,
    pub s_cycles: usize,
    /// Counts keyed by (length, parity, s-cycle flag), sorted.
    pub classes: Vec<CycleClassCount>,
    /// Audit counts behind the Condition (*) pair scan (absent when the
    /// enumeration was truncated).
    pub e_cycle_pairs_with_s_to_r_intersection: Option<usize>,
    pub e_cycle_pairs_with_empty_intersection: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleClassCount {
    pub length: usize,
    pub parity: String,
    pub s_cycle: bool,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionStarSummary {
    pub holds: bool,
    /// Walk of an e-cycle with nonzero stoich value, as vertex names.
    pub bad_e_cycle: Option<Vec<String>>,
    pub bad_e_cycle_stoich: Option<String>,
    /// Walks of the first e-cycle pair with S-to-R intersection.
    pub bad_pair: Option<(Vec<String>, Vec<String>)>,
    /// The shared components of that pair.
    pub bad_pair_shared: Option<Vec<PathSummary>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSummary {
    pub vertices: Vec<String>,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictSummary {
    pub holds: bool,
    pub counterexample: Option<SubmatrixSelector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    /// The stoichiometric matrix is SSD: with concentration-increasing
    /// outflows for every species, the system is injective and cannot admit
    /// multiple equilibria, for any kinetics.
    InjectiveWithOutflows,
    NoConclusion,
}

const NOTE: &str = "InjectiveWithOutflows applies to the system with outflows for every species; \
without outflows the same verdict rules out multiple positive nondegenerate equilibria.";

fn digest_of(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let hex: String = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    format!("sha256:{hex}")
}

fn path_summary(g: &SRGraph, component: &PathComponent) -> PathSummary {
    let mut vertices = vec![component.endpoints.0];
    let mut at = component.endpoints.0;
    for edge in &component.edges {
        at = edge.other_endpoint(at);
        vertices.push(at);
    }
    PathSummary {
        vertices: vertices.iter().map(|&v| g.vertex_name(v).to_string()).collect(),
        kind: match component.kind {
            crate::cycle::PathKind::SpeciesToReaction => "S-to-R".to_string(),
            crate::cycle::PathKind::SpeciesToSpecies => "S-to-S".to_string(),
            crate::cycle::PathKind::ReactionToReaction => "R-to-R".to_string(),
        },
    }
}

fn walk_names(g: &SRGraph, c: &Cycle) -> Vec<String> {
    c.walk().iter().map(|&v| g.vertex_name(v).to_string()).collect()
}

fn cycle_summary(enumeration: &CycleEnumeration, max_len: Option<usize>) -> CycleSummary {
    let mut classes: std::collections::BTreeMap<(usize, Parity, bool), usize> = Default::default();
    for c in &enumeration.cycles {
        *classes.entry((c.len(), c.parity(), c.is_s_cycle())).or_default() += 1;
    }
    let audit = condition_star_audit(enumeration, max_len).ok();
    CycleSummary {
        total: enumeration.cycles.len(),
        truncated: enumeration.truncated,
        e_cycles: enumeration.cycles.iter().filter(|c| c.is_e_cycle()).count(),
        o_cycles: enumeration.cycles.iter().filter(|c| !c.is_e_cycle()).count(),
        s_cycles: enumeration.cycles.iter().filter(|c| c.is_s_cycle()).count(),
        classes: classes
            .into_iter()
            .map(|((length, parity, s_cycle), count)| CycleClassCount {
                length,
                parity: parity.to_string(),
                s_cycle,
                count,
            })
            .collect(),
        e_cycle_pairs_with_s_to_r_intersection: audit.as_ref().map(|a| a.s_to_r_pairs.len()),
        e_cycle_pairs_with_empty_intersection: audit.as_ref().map(|a| a.empty_intersection_pairs),
    }
}

/// Runs the selected checks and assembles the report.
pub fn analyze(subject: &AnalysisSubject, opts: &AnalysisOptions) -> AnalysisResult {
    let (matrix, graph, n1c, input) = match subject {
        AnalysisSubject::Network(net) => {
            let text = net.to_text();
            let violations = net.validate_n1c();
            let n1c = N1cSummary {
                holds: violations.is_empty(),
                violations: violations
                    .iter()
                    .map(|v| N1cViolationSummary {
                        species: net.species()[v.species].name.clone(),
                        reaction: format!("R{}", v.reaction + 1),
                    })
                    .collect(),
            };
            let input = InputSummary {
                kind: "network".to_string(),
                digest: digest_of(&text),
                rows: net.species().len(),
                cols: net.reactions().len(),
                species: net.species().iter().map(|s| s.name.clone()).collect(),
                reactions: (1..=net.reactions().len()).map(|j| format!("R{j}")).collect(),
            };
            if !n1c.holds {
                return AnalysisResult {
                    report: AnalysisReport {
                        input,
                        n1c: Some(n1c),
                        cycles: None,
                        condition_star: None,
                        ssd: None,
                        signed_determinants: None,
                        all_o_cycles: None,
                        conclusion: Conclusion::NoConclusion,
                        note: NOTE.to_string(),
                        refusal: Some(
                            "analysis requires that no species occurs on both sides of a reaction"
                                .to_string(),
                        ),
                    },
                    status: AnalysisStatus::InvalidInput,
                    graph: None,
                    highlight_cycles: Vec::new(),
                };
            }
            let matrix = net.stoichiometric_matrix().expect("validated");
            let graph = SRGraph::from_network(net).expect("validated");
            (matrix, graph, Some(n1c), input)
        }
        AnalysisSubject::Matrix(matrix) => {
            let text = matrix.to_text();
            let graph = SRGraph::from_matrix(matrix);
            let input = InputSummary {
                kind: "matrix".to_string(),
                digest: digest_of(&text),
                rows: matrix.rows(),
                cols: matrix.cols(),
                species: (1..=matrix.rows()).map(|i| format!("S{i}")).collect(),
                reactions: (1..=matrix.cols()).map(|j| format!("R{j}")).collect(),
            };
            (matrix.clone(), graph, None, input)
        }
    };

    let mut report = AnalysisReport {
        input,
        n1c,
        cycles: None,
        condition_star: None,
        ssd: None,
        signed_determinants: None,
        all_o_cycles: None,
        conclusion: Conclusion::NoConclusion,
        note: NOTE.to_string(),
        refusal: None,
    };
    let mut status = AnalysisStatus::Complete;
    let mut highlight_cycles = Vec::new();
    let mut refusals: Vec<String> = Vec::new();

    let enumeration = if opts.checks.wants_cycles() {
        Some(enumerate_cycles(&graph, opts.max_cycle_len))
    } else {
        None
    };
    if let Some(enumeration) = &enumeration {
        report.cycles = Some(cycle_summary(enumeration, opts.max_cycle_len));
        if matches!(opts.checks, CheckSelection::OCycles | CheckSelection::All) {
            if enumeration.truncated {
                refusals.push("cycle enumeration truncated; o-cycle verdict withheld".to_string());
                status = AnalysisStatus::BudgetExceeded;
            } else {
                report.all_o_cycles =
                    Some(enumeration.cycles.iter().all(|c| c.parity() == Parity::Odd));
            }
        }
        if opts.checks.wants_star() {
            match condition_star_from(enumeration, opts.max_cycle_len) {
                Ok(verdict) => {
                    let bad_pair_shared = verdict.bad_pair.as_ref().map(|(a, b)| {
                        crate::cycle::intersection_components(a, b)
                            .expect("distinct")
                            .iter()
                            .map(|p| path_summary(&graph, p))
                            .collect()
                    });
                    if let Some(c) = &verdict.bad_e_cycle {
                        highlight_cycles.push(c.clone());
                    }
                    if let Some((a, b)) = &verdict.bad_pair {
                        highlight_cycles.push(a.clone());
                        highlight_cycles.push(b.clone());
                    }
                    report.condition_star = Some(ConditionStarSummary {
                        holds: verdict.holds,
                        bad_e_cycle: verdict.bad_e_cycle.as_ref().map(|c| walk_names(&graph, c)),
                        bad_e_cycle_stoich: verdict
                            .bad_e_cycle
                            .as_ref()
                            .map(|c| rational_to_string(c.stoich())),
                        bad_pair: verdict
                            .bad_pair
                            .as_ref()
                            .map(|(a, b)| (walk_names(&graph, a), walk_names(&graph, b))),
                        bad_pair_shared,
                    });
                }
                Err(e) => {
                    refusals.push(e.to_string());
                    status = AnalysisStatus::BudgetExceeded;
                }
            }
        }
    }

    if opts.checks.wants_ssd() {
        match matrix.is_ssd(opts.submatrix_budget) {
            Ok(verdict) => {
                report.ssd = Some(VerdictSummary {
                    holds: verdict.holds,
                    counterexample: verdict.counterexample,
                });
            }
            Err(e) => {
                refusals.push(e.to_string());
                status = AnalysisStatus::BudgetExceeded;
            }
        }
    }
    if opts.checks.wants_signed() {
        match matrix.all_submatrices_signed_determinant(opts.submatrix_budget) {
            Ok(verdict) => {
                report.signed_determinants = Some(VerdictSummary {
                    holds: verdict.holds,
                    counterexample: verdict.counterexample,
                });
            }
            Err(e) => {
                refusals.push(e.to_string());
                status = AnalysisStatus::BudgetExceeded;
            }
        }
    }

    // Condition (*) holding forces SSD whenever both were computed; a
    // violation here is an implementation bug.
    if let (Some(star), Some(ssd)) = (&report.condition_star, &report.ssd) {
        assert!(
            !star.holds || ssd.holds,
            "internal inconsistency: Condition (*) holds but SSD fails"
        );
    }

    // The injectivity conclusion is tied to a fully verified SSD verdict.
    report.conclusion = match &report.ssd {
        Some(v) if v.holds => Conclusion::InjectiveWithOutflows,
        _ => Conclusion::NoConclusion,
    };
    if !refusals.is_empty() {
        report.refusal = Some(refusals.join("; "));
    }

    AnalysisResult {
        report,
        status,
        graph: Some(graph),
        highlight_cycles,
    }
}

impl AnalysisReport {
    /// Stable, pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    /// Human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "input: {} ({} rows x {} cols), {}\n",
            self.input.kind, self.input.rows, self.input.cols, self.input.digest
        ));
        if let Some(n1c) = &self.n1c {
            if n1c.holds {
                out.push_str("one-step catalysis: none\n");
            } else {
                out.push_str("one-step catalysis found:\n");
                for v in &n1c.violations {
                    out.push_str(&format!("  {} occurs on both sides of {}\n", v.species, v.reaction));
                }
            }
        }
        if let Some(cycles) = &self.cycles {
            out.push_str(&format!(
                "cycles: {} total ({} e-cycles, {} o-cycles, {} s-cycles){}\n",
                cycles.total,
                cycles.e_cycles,
                cycles.o_cycles,
                cycles.s_cycles,
                if cycles.truncated { " [truncated]" } else { "" }
            ));
            for class in &cycles.classes {
                out.push_str(&format!(
                    "  length {:>2}, {}-cycle, {}: {}\n",
                    class.length,
                    class.parity,
                    if class.s_cycle { "s-cycle" } else { "non-s" },
                    class.count
                ));
            }
        }
        if let Some(star) = &self.condition_star {
            if star.holds {
                out.push_str("condition (*): holds\n");
            } else if let Some(walk) = &star.bad_e_cycle {
                out.push_str(&format!(
                    "condition (*): fails; e-cycle {} has stoich value {}\n",
                    walk.join("-"),
                    star.bad_e_cycle_stoich.as_deref().unwrap_or("?")
                ));
            } else if let Some((a, b)) = &star.bad_pair {
                let shared = star
                    .bad_pair_shared
                    .as_ref()
                    .map(|paths| {
                        paths
                            .iter()
                            .map(|p| p.vertices.join("-"))
                            .collect::<Vec<_>>()
                            .join(", ")
                    })
                    .unwrap_or_default();
                out.push_str(&format!(
                    "condition (*): fails; e-cycles {} and {} intersect along {}\n",
                    a.join("-"),
                    b.join("-"),
                    shared
                ));
            }
        }
        let verdict_line = |name: &str, v: &Option<VerdictSummary>| -> String {
            match v {
                None => String::new(),
                Some(v) if v.holds => format!("{name}: holds\n"),
                Some(v) => {
                    let c = v.counterexample.as_ref().expect("failure has witness");
                    format!(
                        "{name}: fails (rows {:?}, cols {:?})\n",
                        c.rows, c.cols
                    )
                }
            }
        };
        out.push_str(&verdict_line("SSD", &self.ssd));
        out.push_str(&verdict_line(
            "all submatrices signed determinant",
            &self.signed_determinants,
        ));
        if let Some(all_o) = self.all_o_cycles {
            out.push_str(&format!(
                "all cycles o-cycles: {}\n",
                if all_o { "yes" } else { "no" }
            ));
        }
        if let Some(refusal) = &self.refusal {
            out.push_str(&format!("refused: {refusal}\n"));
        }
        let conclusion = match self.conclusion {
            Conclusion::InjectiveWithOutflows => {
                "injective with outflows; multiple equilibria are ruled out"
            }
            Conclusion::NoConclusion => "no conclusion",
        };
        out.push_str(&format!("conclusion: {conclusion}\n"));
        out.push_str(&format!("note: {}\n", self.note));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const COUNTEREXAMPLE: &str = "D <-> A + B + C\nE <-> A + B + C\nF <-> A + B\n";

    fn network(text: &str) -> AnalysisSubject {
        AnalysisSubject::Network(ReactionNetwork::parse(text).unwrap())
    }

    #[test]
    fn full_analysis_of_the_counterexample_network() {
        let result = analyze(&network(COUNTEREXAMPLE), &AnalysisOptions::default());
        assert_eq!(result.status, AnalysisStatus::Complete);
        let report = &result.report;
        assert!(report.n1c.as_ref().unwrap().holds);
        assert!(report.ssd.as_ref().unwrap().holds);
        assert!(!report.condition_star.as_ref().unwrap().holds);
        assert_eq!(report.conclusion, Conclusion::InjectiveWithOutflows);
        let cycles = report.cycles.as_ref().unwrap();
        assert_eq!(cycles.total, 7);
        assert_eq!(cycles.e_cycles, 5);
        assert_eq!(cycles.e_cycle_pairs_with_s_to_r_intersection, Some(4));
        // Both highlight cycles share one edge, for DOT rendering.
        assert_eq!(result.highlight_cycles.len(), 2);
    }

    #[test]
    fn json_report_round_trips_and_is_deterministic() {
        let opts = AnalysisOptions::default();
        let a = analyze(&network(COUNTEREXAMPLE), &opts).report;
        let b = analyze(&network(COUNTEREXAMPLE), &opts).report;
        assert_eq!(a.to_json(), b.to_json());
        let parsed: AnalysisReport = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(parsed, a);
    }

    #[test]
    fn n1c_violation_blocks_analysis() {
        let result = analyze(&network("A <-> A + B\n"), &AnalysisOptions::default());
        assert_eq!(result.status, AnalysisStatus::InvalidInput);
        let n1c = result.report.n1c.as_ref().unwrap();
        assert!(!n1c.holds);
        assert_eq!(n1c.violations[0].species, "A");
        assert!(result.report.ssd.is_none());
        assert_eq!(result.report.conclusion, Conclusion::NoConclusion);
    }

    #[test]
    fn star_only_check_leaves_ssd_unverified() {
        let e_s = StoichMatrix::from_integers(&[&[-1, 2, 0], &[-3, 0, 2], &[0, -3, 1]]);
        let opts = AnalysisOptions {
            checks: CheckSelection::ConditionStar,
            ..AnalysisOptions::default()
        };
        let result = analyze(&AnalysisSubject::Matrix(e_s), &opts);
        assert_eq!(result.status, AnalysisStatus::Complete);
        assert!(result.report.condition_star.as_ref().unwrap().holds);
        assert!(result.report.ssd.is_none());
        // SSD was not verified, so no injectivity claim is made.
        assert_eq!(result.report.conclusion, Conclusion::NoConclusion);
    }

    #[test]
    fn truncated_enumeration_withholds_verdicts() {
        let net = ReactionNetwork::parse(COUNTEREXAMPLE).unwrap();
        let opts = AnalysisOptions {
            max_cycle_len: Some(4),
            ..AnalysisOptions::default()
        };
        let result = analyze(&AnalysisSubject::Network(net), &opts);
        assert_eq!(result.status, AnalysisStatus::BudgetExceeded);
        assert!(result.report.condition_star.is_none());
        assert!(result.report.all_o_cycles.is_none());
        assert!(result.report.refusal.is_some());
        // SSD itself is unaffected by the cycle cap.
        assert!(result.report.ssd.as_ref().unwrap().holds);
        assert!(result.report.cycles.as_ref().unwrap().truncated);
    }

    #[test]
    fn ssd_budget_refusal_blocks_conclusion() {
        let net = ReactionNetwork::parse(COUNTEREXAMPLE).unwrap();
        let opts = AnalysisOptions {
            submatrix_budget: 10,
            ..AnalysisOptions::default()
        };
        let result = analyze(&AnalysisSubject::Network(net), &opts);
        assert_eq!(result.status, AnalysisStatus::BudgetExceeded);
        assert!(result.report.ssd.is_none());
        assert_eq!(result.report.conclusion, Conclusion::NoConclusion);
        assert!(result.report.refusal.as_ref().unwrap().contains("budget"));
    }

    #[test]
    fn matrix_input_has_no_n1c_section() {
        let m = StoichMatrix::from_integers(&[&[1, 2], &[1, 1]]);
        let result = analyze(&AnalysisSubject::Matrix(m), &AnalysisOptions::default());
        assert!(result.report.n1c.is_none());
        assert!(!result.report.condition_star.as_ref().unwrap().holds);
        assert!(!result.report.ssd.as_ref().unwrap().holds);
        assert_eq!(result.report.conclusion, Conclusion::NoConclusion);
        // The bad e-cycle is highlighted for DOT.
        assert_eq!(result.highlight_cycles.len(), 1);
    }

    #[test]
    fn text_report_mentions_the_verdicts() {
        let result = analyze(&network(COUNTEREXAMPLE), &AnalysisOptions::default());
        let text = result.report.to_text();
        assert!(text.contains("SSD: holds"));
        assert!(text.contains("condition (*): fails"));
        assert!(text.contains("conclusion: injective with outflows"));
    }
}
