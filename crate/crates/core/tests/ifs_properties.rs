mod common;

use common::{arb_rational_ifs, corpus, q};
use num::{BigRational, Signed, Zero};
use proptest::prelude::*;
use selfsim::ifs_core::{all_words, IfsError, attractor_hull, check_ssc, compose, derive, iterate, SscVerdict, Word};

fn weight_sum(ifs: &selfsim::ifs_core::WeightedIFS) -> BigRational {
    ifs.weights().iter().cloned().sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn compose_is_associative(a in arb_rational_ifs(), b in arb_rational_ifs(), c in arb_rational_ifs()) {
        let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.canonical(), right.canonical());
    }

    #[test]
    fn composed_weights_sum_to_one(a in arb_rational_ifs(), b in arb_rational_ifs()) {
        prop_assert_eq!(weight_sum(&compose(&a, &b).unwrap()), q(1, 1));
    }

    #[test]
    fn iterate_splits(a in arb_rational_ifs(), m in 1u32..=2, n in 1u32..=2) {
        let whole = iterate(&a, m + n).unwrap();
        let split = compose(&iterate(&a, m).unwrap(), &iterate(&a, n).unwrap()).unwrap();
        prop_assert!(whole.same_system(&split));
    }

    #[test]
    fn hull_of_square(a in arb_rational_ifs()) {
        let tol = q(1, 1_000_000);
        let h1 = attractor_hull(&a, &tol).unwrap();
        let h2 = attractor_hull(&compose(&a, &a).unwrap(), &tol).unwrap();
        let two_tol = &tol + &tol;
        prop_assert!((&h1.lo - &h2.lo).abs() <= two_tol && (&h1.hi - &h2.hi).abs() <= two_tol);
    }

    #[test]
    fn ssc_verified_is_monotone(a in arb_rational_ifs(), d in 1usize..=5) {
        if let SscVerdict::Verified { .. } = check_ssc(&a, d).unwrap() {
            let still = matches!(check_ssc(&a, d + 1).unwrap(), SscVerdict::Verified { .. });
            prop_assert!(still);
        }
    }

    #[test]
    fn prefix_code_weights_sum_to_one(a in arb_rational_ifs(), splits in prop::collection::vec(any::<bool>(), 1..6)) {
        // Grow a complete prefix code by expanding words according to `splits`.
        let n = a.len();
        let mut code: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        for (k, expand) in splits.iter().enumerate() {
            if *expand {
                let i = k % code.len();
                let w = code.remove(i);
                for l in 0..n {
                    let mut v = w.clone();
                    v.push(l);
                    code.push(v);
                }
            }
        }
        let words: Vec<Word> = code.into_iter().map(|v| Word::new(v, n).unwrap()).collect();
        // Distinct words may give the same composite map, which derive rejects.
        let derived = derive(&a, &words);
        prop_assume!(!matches!(derived, Err(IfsError::DuplicateMap(..))));
        prop_assert_eq!(derived.unwrap().weight_sum, q(1, 1));
    }
}

#[test]
fn corpus_algebra() {
    let corpus = corpus();
    for (name, doc) in &corpus {
        let a = &doc.ifs;
        assert_eq!(weight_sum(&compose(a, a).unwrap()), q(1, 1), "{name}");
        assert!(iterate(a, 3).unwrap().same_system(&compose(&iterate(a, 1).unwrap(), &iterate(a, 2).unwrap()).unwrap()), "{name}");
        let words = all_words(a.len(), 2);
        match derive(a, &words) {
            Ok(d) => assert_eq!(d.weight_sum, q(1, 1), "{name}"),
            Err(e) => assert!(matches!(e, IfsError::DuplicateMap(..)), "{name}: {e}"),
        }
        let tol = q(1, 1_000_000_000);
        let h1 = attractor_hull(a, &tol).unwrap();
        let h2 = attractor_hull(&compose(a, a).unwrap(), &tol).unwrap();
        assert!((&h1.lo - &h2.lo).abs() <= &tol + &tol && (&h1.hi - &h2.hi).abs() <= &tol + &tol, "{name}");
        for d in 1..4 {
            if let SscVerdict::Verified { .. } = check_ssc(a, d).unwrap() {
                assert!(matches!(check_ssc(a, d + 1).unwrap(), SscVerdict::Verified { .. }), "{name}");
            }
        }
    }
    // Cross-context composition of the same basis declarations.
    let (_, irr) = corpus.iter().find(|(n, _)| n == "irrational_translations").unwrap();
    let again = selfsim::cli::parse_document(&irr.to_string()).unwrap();
    assert!(compose(&irr.ifs, &again.ifs).is_ok());
    assert!(!weight_sum(&irr.ifs).is_zero());
}
