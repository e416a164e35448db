#![allow(dead_code)]

use std::path::PathBuf;

use num::BigRational;
use proptest::prelude::*;
use selfsim::cli::{parse_document, IfsDocument};
use selfsim::ifs_core::{Similitude, WeightedIFS};
use selfsim::algebraic::BasisContext;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// `(file stem, document)` for every corpus file, sorted by name.
pub fn corpus() -> Vec<(String, IfsDocument)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "ifs"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).expect("readable");
            let doc = parse_document(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            (p.file_stem().unwrap().to_string_lossy().into_owned(), doc)
        })
        .collect()
}

pub fn corpus_ifs(name: &str) -> WeightedIFS {
    corpus().into_iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("no corpus file {name}")).1.ifs
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Homogeneous with a positive rational ratio.
pub fn positive_rational_homogeneous(ifs: &WeightedIFS) -> bool {
    ifs.common_ratio().and_then(|r| r.as_rational().cloned()).is_some_and(|r| r > q(0, 1))
}

/// Random rational IFS: 2 or 3 maps with ratios in (-1,1) \ {0}, small
/// rational translations and positive weights summing to 1.
pub fn arb_rational_ifs() -> impl Strategy<Value = WeightedIFS> {
    (2usize..=3)
        .prop_flat_map(|n| {
            (
                prop::collection::vec((-4i64..=4, 5i64..=9), n),
                prop::collection::vec((-6i64..=6, 1i64..=4), n),
                prop::collection::vec(1i64..=5, n),
            )
        })
        .prop_filter_map("distinct maps", |(rs, bs, ws)| {
            let ctx = BasisContext::rational();
            let total: i64 = ws.iter().sum();
            let maps: Option<Vec<Similitude>> = rs
                .iter()
                .zip(&bs)
                .map(|(&(rn, rd), &(bn, bd))| if rn == 0 { None } else { Similitude::rational(&ctx, (rn, rd), (bn, bd)).ok() })
                .collect();
            let weights = ws.iter().map(|&w| q(w, total)).collect();
            WeightedIFS::new(maps?, weights).ok()
        })
}
