mod common;

use common::{corpus, q};
use num::complex::Complex64;
use num::BigRational;
use proptest::prelude::*;
use selfsim::exppoly::{find_zeros, verify_zero_set_union, winding_number, ExponentialPolynomial, Window, ZeroReport};

const TOL: f64 = 1e-9;

fn arb_ep() -> impl Strategy<Value = ExponentialPolynomial> {
    prop::collection::vec(((1i64..=6, 1i64..=4), (0i64..=6, 1i64..=3)), 2..=4).prop_filter_map("two distinct frequencies", |terms| {
        let f = ExponentialPolynomial::rational(&terms).ok()?;
        (f.len() >= 2).then_some(f)
    })
}

fn has_zero_near(report: &ZeroReport, z: Complex64, eps: f64) -> bool {
    report.zeros.iter().any(|w| (w.z - z).norm() <= eps)
}

fn constant(c: BigRational, f: &ExponentialPolynomial) -> ExponentialPolynomial {
    let zero = selfsim::algebraic::AlgebraicReal::zero(f.ctx());
    ExponentialPolynomial::new(f.ctx(), vec![(c, zero)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiply_commutes_and_associates(f in arb_ep(), g in arb_ep(), h in arb_ep()) {
        prop_assert_eq!(f.multiply(&g).unwrap(), g.multiply(&f).unwrap());
        let left = f.multiply(&g).unwrap().multiply(&h).unwrap();
        let right = f.multiply(&g.multiply(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn reported_zeros_are_zeros(f in arb_ep()) {
        let report = find_zeros(&f, 10.0, TOL).unwrap();
        let g = f.normalize().poly;
        for z in &report.zeros {
            prop_assert!(z.residual <= TOL, "{:?}", z);
            prop_assert!(g.eval(z.z).norm() <= TOL);
        }
    }

    #[test]
    fn conjugate_symmetry(f in arb_ep()) {
        let report = find_zeros(&f, 10.0, TOL).unwrap();
        for z in &report.zeros {
            prop_assert!(has_zero_near(&report, z.z.conj(), 1e-7), "{:?}", z);
        }
    }

    #[test]
    fn normalization_keeps_zeros(f in arb_ep(), c in 1i64..=7) {
        let scaled = f.multiply(&constant(q(c, 3), &f)).unwrap();
        let (a, b) = (find_zeros(&f, 10.0, TOL).unwrap(), find_zeros(&scaled.normalize().poly, 10.0, TOL).unwrap());
        prop_assert_eq!(a.zeros.len(), b.zeros.len());
        for z in &a.zeros {
            prop_assert!(has_zero_near(&b, z.z, 1e-7));
        }
    }

    #[test]
    fn winding_is_additive(f in arb_ep(), lo in -9.0f64..0.0, hi in 0.5f64..9.0, t in 0.2f64..0.8) {
        let g = f.normalize().poly;
        let strip = selfsim::exppoly::zero_strip(&g);
        let w = Window { re_lo: strip.re_lo - 1.0, re_hi: strip.re_hi + 1.0, im_lo: lo, im_hi: hi };
        let y = lo + t * (hi - lo);
        let (w1, w2) = (Window { im_hi: y, ..w }, Window { im_lo: y, ..w });
        let parts = (winding_number(&g, &w), winding_number(&g, &w1), winding_number(&g, &w2));
        // A zero on a contour makes the count undefined; skip those draws.
        prop_assume!(parts.0.is_ok() && parts.1.is_ok() && parts.2.is_ok());
        prop_assert_eq!(parts.0.unwrap(), parts.1.unwrap() + parts.2.unwrap());
    }
}

#[test]
fn product_zeros_are_the_union() {
    let f = ExponentialPolynomial::rational(&[((1, 1), (0, 1)), ((1, 1), (1, 1))]).unwrap();
    let g = ExponentialPolynomial::rational(&[((2, 1), (0, 1)), ((1, 1), (2, 3))]).unwrap();
    let h = ExponentialPolynomial::rational(&[((1, 1), (0, 1)), ((3, 1), (1, 2))]).unwrap();
    for (a, b) in [(&f, &g), (&f, &f), (&g, &h), (&f, &h)] {
        let prod = a.multiply(b).unwrap();
        let (ra, rb, rp) = (find_zeros(a, 12.0, TOL).unwrap(), find_zeros(b, 12.0, TOL).unwrap(), find_zeros(&prod, 12.0, TOL).unwrap());
        assert!(rp.complete_in_window);
        assert_eq!(rp.total_multiplicity(), ra.total_multiplicity() + rb.total_multiplicity());
        for z in ra.zeros.iter().chain(&rb.zeros) {
            let own = ra.zeros.iter().chain(&rb.zeros).filter(|w| (w.z - z.z).norm() < 1e-7).map(|w| w.multiplicity).sum::<u32>();
            let found = rp.zeros.iter().find(|w| (w.z - z.z).norm() < 1e-6).expect("zero of a factor is a zero of the product");
            assert_eq!(found.multiplicity, own);
        }
    }
}

#[test]
fn zero_set_union_on_corpus() {
    for (name, doc) in corpus() {
        if !doc.ifs.is_homogeneous() {
            continue;
        }
        assert!(verify_zero_set_union(&doc.ifs, 3, 12.0, TOL).unwrap(), "{name}");
    }
}
