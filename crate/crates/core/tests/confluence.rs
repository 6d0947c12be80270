use onsager_core::rewrite::{check_overlap, enumerate_overlaps};

#[test]
fn overlaps_resolve_bound_two() {
    for w in enumerate_overlaps(2) {
        let r = check_overlap(&w).unwrap();
        assert!(r.agrees, "{w}: {} vs {}", r.nf_left, r.nf_right);
    }
}
