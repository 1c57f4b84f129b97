use fbcode_core::games::{max_messages, Game};
use fbcode_core::search::hamming_code;
use fbcode_core::strategy::*;
use fbcode_core::verify::{simulate, verify_strategy, AdversaryAction};
use fbcode_core::{ErrorGraph, FeedbackStrategy, NonadaptiveCode, Word};
use proptest::prelude::*;

fn assert_verified(s: &FeedbackStrategy) {
    let r = verify_strategy(s);
    assert!(r.passed(), "first failure {:?}", r.failures.first());
    let q = u64::from(s.graph().q());
    assert_eq!(r.total_cases, s.len() as u64 * (1 + s.n() as u64 * (q - 1)));
}

#[test]
fn hamming_construction_all_lengths() {
    for n in 3..=16 {
        let (k, count) = corollary1_best(n).unwrap();
        let s = corollary1_strategy(n, k).unwrap();
        assert_eq!(s.len() as u64, count, "n={n}");
        assert_verified(&s);
    }
}

#[test]
fn one_feedback_row() {
    let mut book = BscCodeBook::default();
    let want = [2, 2, 4, 8, 16, 28, 50, 90, 168, 312, 576, 1088, 2048, 3854];
    for (n, &w) in (3..=16).zip(want.iter()) {
        let s = best_one_feedback_bsc(n, &mut book).unwrap();
        assert_eq!(s.len() as u64, w, "n={n}");
        assert!(s.feedbacks() <= 1);
        if n <= 13 {
            assert_verified(&s);
        }
    }
}

#[test]
fn two_feedbacks_reach_the_optimum() {
    let mut book = BscCodeBook::default();
    for n in 10..=13 {
        let s = build_two_feedback(n, &mut book).unwrap();
        assert_eq!(s.len() as u128, m_ad(n));
        assert_eq!(s.feedbacks(), 2);
        assert_verified(&s);
        // clouds of a complete-feedback-optimal code have at least n + 1 words
        let r = verify_strategy(&s);
        assert!(r.cloud_census.keys().all(|&size| size > n));
    }
}

#[test]
fn repeated_lifting_matches_the_game() {
    let mut s = trivial_strategy();
    for n in 2..=12 {
        let prev = s.len() as u128;
        s = dada_lift(&s).unwrap();
        assert_eq!(s.len() as u128, theorem2_count(prev, n));
        assert_eq!(s.len() as u128, m_ad(n), "n={n}");
        assert_eq!(s.len() as u64, max_messages(Game::Symmetric, n));
        assert_verified(&s);
    }
}

#[test]
fn lifting_an_empty_strategy() {
    let empty = FeedbackStrategy::new(ErrorGraph::bsc(), vec![3], Vec::new(), std::iter::empty()).unwrap();
    assert_eq!(dada_lift(&empty).unwrap().len(), 0);
    assert_eq!(theorem2_count(0, 4), 0);
}

#[test]
fn example_family_error_in_first_block() {
    let s = assemble_one_feedback(&example_family_8()).unwrap();
    assert_eq!(s.len(), 53);
    assert_verified(&s);
    let vertex = Word::parse("101100", 2).unwrap();
    let m = (0..s.len()).find(|&m| s.plans()[m].first == vertex).unwrap();
    let (got, decoded) = simulate(&s, m, AdversaryAction::Replace { position: 0, symbol: 0 }).unwrap();
    assert_eq!(got.prefix(6), Word::parse("001100", 2).unwrap());
    assert_eq!(decoded, Some(m));
    // the tail is a free point of the code at the received vertex
    let code = example_family_8().code(&got.prefix(6)).clone();
    assert!(code.cloud_lookup().unwrap().is_free(&got.suffix(6)));
    // a 0 cannot turn into 1 on this channel
    let (same, _) = simulate(&s, m, AdversaryAction::Replace { position: 1, symbol: 1 }).unwrap();
    assert_eq!(same, s.root(m).unwrap());
}

#[test]
fn hamming_strategy_first_block_error() {
    let s = corollary1_strategy(8, 3).unwrap();
    let root = s.root(0).unwrap();
    let flipped = 1 - root.symbol(0);
    let (got, decoded) = simulate(&s, 0, AdversaryAction::Replace { position: 0, symbol: flipped }).unwrap();
    assert_ne!(got.prefix(1), root.prefix(1));
    assert_eq!(decoded, Some(0));
}

#[test]
fn z_channel_configurations() {
    for family in [example_family_9(), example_weight_family_9(), example_family_11()] {
        let s = assemble_one_feedback(&family).unwrap();
        assert_eq!(s.len() as u64, family.message_count());
        assert_verified(&s);
    }
    // the weight-class optimiser on the length-4 table gives the same count
    let plan = corollary2_optimize(5, 4, &[(2, 12), (3, 9), (4, 4)]).unwrap();
    assert_eq!(plan.total, 96);
    let nested = ["0000", "0011", "1100", "1111"];
    let code = |m: u64| {
        let words = nested[..m as usize].iter().map(|s| Word::parse(s, 2).unwrap()).collect();
        NonadaptiveCode::new(4, 1, ErrorGraph::z_channel(), words).unwrap()
    };
    let s = assemble_one_feedback(&corollary2_family(&plan, &code).unwrap()).unwrap();
    assert_eq!(s.len(), 96);
    assert_verified(&s);
}

#[test]
fn game_agrees_with_closed_form() {
    for n in 1..=14 {
        assert_eq!(u128::from(max_messages(Game::Symmetric, n)), m_ad(n), "n={n}");
        assert!(max_messages(Game::HalfLie, n) >= max_messages(Game::Symmetric, n));
    }
}

fn small_bsc_code(n: usize, mask: u32) -> NonadaptiveCode {
    // greedy code over the words picked by `mask`
    let mut chosen: Vec<u64> = Vec::new();
    for v in 0..1u64 << n {
        if mask >> (v % 32) & 1 == 1 && chosen.iter().all(|&c| (c ^ v).count_ones() >= 3) {
            chosen.push(v);
        }
    }
    NonadaptiveCode::binary(n, 1, ErrorGraph::bsc(), chosen).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // assembly fails exactly when some vertex is overloaded, and any
    // assembled strategy survives every single error
    #[test]
    fn assembly_iff_loads_fit(n1 in 1usize..=3, n2 in 2usize..=4, masks in proptest::collection::vec(any::<u32>(), 8), sizes in proptest::collection::vec(0usize..3, 8)) {
        let family = CodeFamily::from_fn(n1, n2, ErrorGraph::bsc(), |u| {
            let i = u.value() as usize;
            let c = small_bsc_code(n2, masks[i]);
            let keep = c.centers()[..sizes[i].min(c.len())].to_vec();
            NonadaptiveCode::new(n2, 1, ErrorGraph::bsc(), keep).unwrap()
        }).unwrap();
        let overloaded = !family.violations().unwrap().is_empty();
        match assemble_one_feedback(&family) {
            Ok(s) => {
                prop_assert!(!overloaded);
                prop_assert_eq!(s.len() as u64, family.message_count());
                prop_assert!(verify_strategy(&s).passed());
            }
            Err(StrategyError::ConstraintViolation { required, available, .. }) => {
                prop_assert!(overloaded);
                prop_assert!(required > available);
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn lift_count_matches_formula(n in 3usize..=7, mask in any::<u32>()) {
        let code = small_bsc_code(n, mask);
        let family = CodeFamily::new(0, n, ErrorGraph::bsc(), vec![code]).unwrap();
        let inner = assemble_one_feedback(&family).unwrap();
        let lifted = dada_lift(&inner).unwrap();
        prop_assert_eq!(lifted.len() as u128, theorem2_count(inner.len() as u128, n + 1));
        prop_assert!(verify_strategy(&lifted).passed());
    }
}

#[test]
fn hamming_code_sizes() {
    for k in 1..=4 {
        let h = hamming_code(k).unwrap();
        assert_eq!(h.len(), 1 << ((1 << k) - 1 - k));
        assert_eq!(h.free_count().unwrap(), 0);
    }
}
