use knotlg::alexander;
use knotlg::braid::{MarkovMove, Sign};
use knotlg::families;
use knotlg::lgcore::{self, LgError, RMatrixData, RMATRIX_TABLE};
use knotlg::poly2::Laurent2;
use knotlg::BraidWord;
use proptest::prelude::*;

fn lg(b: &BraidWord) -> Laurent2 {
    lgcore::lg_invariant(b, false).unwrap()
}

fn arb_word(max_strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (2..=max_strands).prop_flat_map(move |n| {
        let g = (1..n as i32, any::<bool>()).prop_map(|(g, s)| if s { g } else { -g });
        prop::collection::vec(g, 0..=max_len).prop_map(move |l| BraidWord::new(n, l).unwrap())
    })
}

#[test]
fn small_knots_through_the_engine() {
    let unknot = lg(&"1:".parse().unwrap());
    assert!(unknot.is_one());
    let fig8 = lg(&"3: 1 -2 1 -2".parse().unwrap());
    assert_eq!(fig8, families::lg_twist(-1).unwrap());
    assert_eq!(fig8, fig8.invert());
    let split = lg(&"3: 1".parse().unwrap());
    assert!(split.is_zero());
}

#[test]
fn scalar_verification_on_fixed_words() {
    for w in ["2: 1 1 1", "3: 1 -2 1 -2", "3: 1 1 2 -1 -1 2", "4: 1 2 3 -1"] {
        let b: BraidWord = w.parse().unwrap();
        assert_eq!(lgcore::lg_invariant(&b, true).unwrap(), lg(&b), "{w}");
    }
}

#[test]
fn corrupted_table_names_an_identity() {
    let bad = RMATRIX_TABLE.replacen("4 4 -> 4 4 : t1", "4 4 -> 4 4 : t0", 1);
    match RMatrixData::from_table(&bad) {
        Err(LgError::Convention { .. }) => {}
        other => panic!("expected a convention error, got {other:?}"),
    }
}

#[test]
fn too_many_strands_is_rejected() {
    let b = BraidWord::identity(lgcore::MAX_STRANDS + 1);
    assert!(matches!(lgcore::lg_invariant(&b, false), Err(LgError::TooManyStrands(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn markov_and_mirror(w in arb_word(3, 7), k in 1i32..3, positive in any::<bool>()) {
        let v = lg(&w);
        let k = 1 + (k - 1) % (w.strands() as i32 - 1);
        let g = if positive { k } else { -k };
        prop_assert_eq!(lg(&w.apply(MarkovMove::Conjugate(g)).unwrap()), v.clone());
        let s = if positive { Sign::Positive } else { Sign::Negative };
        prop_assert_eq!(lg(&w.apply(MarkovMove::Stabilize(s)).unwrap()), v.clone());
        prop_assert_eq!(lg(&w.mirror()), v.invert());
        prop_assert!(v.is_swap_symmetric());
    }

    #[test]
    fn evaluations_match_burau(w in arb_word(4, 8)) {
        let v = lg(&w);
        let d = alexander::alexander_closure(&w).unwrap();
        prop_assert!(alexander::evaluation_check(&v, &d).holds(w.components()));
    }
}
