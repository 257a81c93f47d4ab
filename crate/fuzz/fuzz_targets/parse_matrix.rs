#![no_main]

use libfuzzer_sys::fuzz_target;
use srgraph::{SRGraph, StoichMatrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(matrix) = StoichMatrix::parse(text) else {
        return;
    };
    // Canonical text must reparse to the identical matrix.
    let reparsed = StoichMatrix::parse(&matrix.to_text()).expect("canonical text parses");
    assert_eq!(matrix, reparsed);

    if matrix.rows() * matrix.cols() <= 64 {
        let graph = SRGraph::from_matrix(&matrix);
        assert_eq!(graph.edge_count(), matrix.nonzero_count());
    }
});
