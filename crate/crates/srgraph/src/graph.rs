//! The SR graph: a signed, valued bipartite graph with one species vertex
//! per matrix row, one reaction vertex per matrix column, and one edge per
//! nonzero entry. Edge signs follow the entry signs, edge values are the
//! entry magnitudes. Any rational matrix has an SR graph; no reaction-network
//! interpretation is required.

use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

use crate::cycle::Cycle;
use crate::matrix::StoichMatrix;
use crate::network::ReactionNetwork;
use crate::rational::{rational_to_string, Rational, Sign};

/// A vertex of the SR graph. The derived order puts all species vertices
/// before all reaction vertices, which fixes the canonical form of cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Species(usize),
    Reaction(usize),
}

/// An edge between species vertex `species` and reaction vertex `reaction`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub species: usize,
    pub reaction: usize,
    pub sign: Sign,
    /// Magnitude of the matrix entry; always positive.
    pub value: Rational,
}

impl Edge {
    pub fn key(&self) -> (usize, usize) {
        (self.species, self.reaction)
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (Vertex::Species(self.species), Vertex::Reaction(self.reaction))
    }

    /// The endpoint other than `v`; panics if `v` is not an endpoint.
    pub fn other_endpoint(&self, v: Vertex) -> Vertex {
        let (s, r) = self.endpoints();
        if v == s {
            r
        } else {
            assert_eq!(v, r, "vertex not incident on edge");
            s
        }
    }
}

#[derive(Debug, Clone)]
pub struct SRGraph {
    species_count: usize,
    reaction_count: usize,
    /// Sorted by (species, reaction).
    edges: Vec<Edge>,
    /// Edge index by (species, reaction).
    by_key: BTreeMap<(usize, usize), usize>,
    species_names: Vec<String>,
    reaction_names: Vec<String>,
}

impl SRGraph {
    /// Builds the SR graph of a matrix with default vertex names
    /// (`S1..Sn`, `R1..Rm`).
    pub fn from_matrix(matrix: &StoichMatrix) -> SRGraph {
        let species_names = (1..=matrix.rows()).map(|i| format!("S{i}")).collect();
        let reaction_names = (1..=matrix.cols()).map(|j| format!("R{j}")).collect();
        SRGraph::from_matrix_with_names(matrix, species_names, reaction_names)
    }

    /// Builds the SR graph of a network's stoichiometric matrix, naming the
    /// species vertices after the species.
    pub fn from_network(net: &ReactionNetwork) -> Result<SRGraph, crate::network::N1cError> {
        let matrix = net.stoichiometric_matrix()?;
        let species_names = net.species().iter().map(|s| s.name.clone()).collect();
        let reaction_names = (1..=net.reactions().len()).map(|j| format!("R{j}")).collect();
        Ok(SRGraph::from_matrix_with_names(
            &matrix,
            species_names,
            reaction_names,
        ))
    }

    pub fn from_matrix_with_names(
        matrix: &StoichMatrix,
        species_names: Vec<String>,
        reaction_names: Vec<String>,
    ) -> SRGraph {
        assert_eq!(species_names.len(), matrix.rows());
        assert_eq!(reaction_names.len(), matrix.cols());
        let mut edges = Vec::new();
        for i in 0..matrix.rows() {
            for j in 0..matrix.cols() {
                let entry = matrix.get(i, j);
                if entry.is_zero() {
                    continue;
                }
                edges.push(Edge {
                    species: i,
                    reaction: j,
                    sign: Sign::of(entry).expect("nonzero"),
                    value: entry.abs(),
                });
            }
        }
        let by_key = edges
            .iter()
            .enumerate()
            .map(|(idx, e)| (e.key(), idx))
            .collect();
        SRGraph {
            species_count: matrix.rows(),
            reaction_count: matrix.cols(),
            edges,
            by_key,
            species_names,
            reaction_names,
        }
    }

    pub fn species_count(&self) -> usize {
        self.species_count
    }

    pub fn reaction_count(&self) -> usize {
        self.reaction_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_between(&self, species: usize, reaction: usize) -> Option<&Edge> {
        self.by_key.get(&(species, reaction)).map(|&i| &self.edges[i])
    }

    pub fn vertex_name(&self, v: Vertex) -> &str {
        match v {
            Vertex::Species(i) => &self.species_names[i],
            Vertex::Reaction(j) => &self.reaction_names[j],
        }
    }

    /// Global vertex numbering used for canonical orders: species first,
    /// then reactions.
    pub fn vertex_id(&self, v: Vertex) -> usize {
        match v {
            Vertex::Species(i) => i,
            Vertex::Reaction(j) => self.species_count + j,
        }
    }

    pub fn vertex_of_id(&self, id: usize) -> Vertex {
        if id < self.species_count {
            Vertex::Species(id)
        } else {
            Vertex::Reaction(id - self.species_count)
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.species_count + self.reaction_count
    }

    /// Edges incident on a vertex, ordered by the opposite endpoint.
    pub fn incident_edges(&self, v: Vertex) -> Vec<&Edge> {
        self.edges
            .iter()
            .filter(|e| {
                let (s, r) = e.endpoints();
                s == v || r == v
            })
            .collect()
    }

    /// Renders the graph in DOT. Species vertices are circles, reaction
    /// vertices boxes; positive edges are solid, negative edges dashed
    /// (the usual drawing convention for SR graphs). Edge values other than
    /// one are shown as labels. Cycles in `highlights` are colored.
    pub fn to_dot(&self, highlights: &[Cycle]) -> String {
        const PALETTE: [&str; 6] = ["red", "blue", "darkgreen", "orange", "purple", "brown"];
        let mut highlight_color: BTreeMap<(usize, usize), &str> = BTreeMap::new();
        for (idx, cycle) in highlights.iter().enumerate() {
            let color = PALETTE[idx % PALETTE.len()];
            for edge in cycle.edges() {
                highlight_color.entry(edge.key()).or_insert(color);
            }
        }
        let mut out = String::from("graph sr {\n");
        for (i, name) in self.species_names.iter().enumerate() {
            out.push_str(&format!("  s{i} [label=\"{name}\", shape=circle];\n"));
        }
        for (j, name) in self.reaction_names.iter().enumerate() {
            out.push_str(&format!("  r{j} [label=\"{name}\", shape=box];\n"));
        }
        for edge in &self.edges {
            let mut attrs: Vec<String> = Vec::new();
            if edge.sign == Sign::Minus {
                attrs.push("style=dashed".to_string());
            }
            if !edge.value.is_one() {
                attrs.push(format!("label=\"{}\"", rational_to_string(&edge.value)));
            }
            if let Some(color) = highlight_color.get(&edge.key()) {
                attrs.push(format!("color={color}"));
                attrs.push("penwidth=2".to_string());
            }
            let attr_text = if attrs.is_empty() {
                String::new()
            } else {
                format!(" [{}]", attrs.join(", "))
            };
            out.push_str(&format!(
                "  s{} -- r{}{};\n",
                edge.species, edge.reaction, attr_text
            ));
        }
        out.push_str("}\n");
        out
    }
}
