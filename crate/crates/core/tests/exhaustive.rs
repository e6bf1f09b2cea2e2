mod common;

use quotforge::adhm::{is_stable, orbit_witness, stabilizer_lie_dimension, OrbitVerdict};
use quotforge::deform::{companion_pair, verify_lemma_2_3};
use quotforge::jordan::{compatible_jordan_frame, jordan_type, verify_frame};

use common::{all_data, commuting_nilpotent_pairs, general_linear};

#[test]
fn frames_over_gf2() {
    for d in 1..=3 {
        for (b1, b2) in commuting_nilpotent_pairs(2, d) {
            let frame = compatible_jordan_frame(&b1, &b2).unwrap();
            assert!(verify_frame(&frame, &b1, &b2).ok(), "{b1:?} {b2:?}");
            assert_eq!(frame.mu().to_vec(), jordan_type(&b1).unwrap());
        }
    }
}

#[test]
fn companion_conclusions_over_small_fields() {
    for (p, max_d) in [(2, 3), (3, 2)] {
        for d in 1..=max_d {
            for (b1, b2) in commuting_nilpotent_pairs(p, d) {
                companion_pair(&b1, &b2).unwrap();
                let report = verify_lemma_2_3(&b1, &b2, 4).unwrap();
                assert!(report.all_pass(), "p={p} {b1:?} {b2:?}: {report:?}");
            }
        }
    }
}

#[test]
fn pair_counts_match_enumeration() {
    let counts: Vec<usize> = (1..=3)
        .map(|d| commuting_nilpotent_pairs(2, d).len())
        .collect();
    assert_eq!(counts, vec![1, 10, 400]);
    let fast: Vec<u128> = (1..=3)
        .map(|d| {
            quotforge::census::count_commuting_nilpotent_pairs(d, 2, &Default::default()).unwrap()
        })
        .collect();
    assert_eq!(fast, counts.iter().map(|&c| c as u128).collect::<Vec<_>>());
}

#[test]
fn stabilizers_over_gf2() {
    for r in 1..=2 {
        for x in all_data(2, 2, r) {
            if is_stable(&x) {
                assert_eq!(stabilizer_lie_dimension(&x), 0);
            }
        }
    }
}

#[test]
fn orbit_witness_matches_search_gf2() {
    let group = general_linear(2, 2);
    assert_eq!(group.len(), 6);
    let stable: Vec<_> = all_data(2, 2, 1).into_iter().filter(is_stable).collect();
    for a in &stable {
        for b in &stable {
            let found = group.iter().find(|g| a.act(g).unwrap() == *b);
            match orbit_witness(a, b).unwrap() {
                OrbitVerdict::Equivalent(g) => assert_eq!(Some(&g), found),
                OrbitVerdict::Distinct => assert!(found.is_none()),
            }
        }
    }
}
