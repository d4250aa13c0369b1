#![no_main]
use citenet::EdgeList;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(parsed) = EdgeList::parse(text) {
        let g = &parsed.graph;
        let again = EdgeList::parse(&g.to_edge_list()).expect("own output parses");
        assert_eq!(again.graph.edge_count(), g.edge_count());
        assert_eq!(again.dropped(), 0);
        let _ = g.largest_component();
    }
});
