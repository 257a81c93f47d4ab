#![no_main]

use libfuzzer_sys::fuzz_target;
use srgraph::network::ReactionNetwork;
use srgraph::SRGraph;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(net) = ReactionNetwork::parse(text) else {
        return;
    };
    // Canonical text must reparse to the identical network.
    let reparsed = ReactionNetwork::parse(&net.to_text()).expect("canonical text parses");
    assert_eq!(net, reparsed);

    // Bounded deeper pass over the structural invariants.
    if net.species().len() * net.reactions().len() > 256 {
        return;
    }
    if !net.validate_n1c().is_empty() {
        return;
    }
    let matrix = net.stoichiometric_matrix().expect("no catalysis");
    let graph = SRGraph::from_matrix(&matrix);
    assert_eq!(graph.edge_count(), matrix.nonzero_count());
});
