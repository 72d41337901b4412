//! Filter quotients have their universal property on the small corpus
//! frames: every homomorphism into another frame that sends the filter to 1
//! factors through the projection, uniquely.

use sheafcalc_core::corpus::corpus_frames;
use sheafcalc_core::frames::{filter_generated, frame_homomorphisms, quotient_by_filter};
use sheafcalc_core::Caps;

#[test]
fn homomorphisms_killing_the_filter_factor_uniquely() {
    let caps = Caps::default();
    let small: Vec<_> = corpus_frames(&caps)
        .into_iter()
        .filter(|(_, frame)| frame.element_count() <= 6)
        .collect();
    assert!(small.len() >= 8, "expected several small corpus frames");

    let mut factorizations = 0usize;
    for (name_a, a) in &small {
        for (name_b, b) in &small {
            let homs_ab = frame_homomorphisms(a, b).expect("within enumeration bounds");
            for u in a.elements() {
                let filter = filter_generated(a, &[u]);
                let quotient = quotient_by_filter(a, &filter);
                let homs_qb =
                    frame_homomorphisms(&quotient.frame, b).expect("within enumeration bounds");
                for h in &homs_ab {
                    if !filter.members().iter().all(|&m| h[m.0] == b.top()) {
                        continue;
                    }
                    let factors = homs_qb
                        .iter()
                        .filter(|hq| a.elements().all(|x| hq[quotient.projection[x.0]] == h[x.0]))
                        .count();
                    assert_eq!(
                        factors,
                        1,
                        "{name_a} -> {name_b} through the filter at {}: {factors} factorizations",
                        a.name(u)
                    );
                    factorizations += 1;
                }
            }
        }
    }
    assert!(
        factorizations > 50,
        "only {factorizations} factorizations exercised"
    );
}
