use std::collections::{BTreeMap, BTreeSet};

use circhad::audit::{full_audit, AuditMode, AuditReport};
use circhad::circulant::{integer, rational, CirculantMatrix, Rational};
use circhad::hadamard::{
    build_s, is_doubly_stochastic, is_hadamard, normalize_sign, regular_profile,
};
use circhad::search::{
    canonical_form, pacf, search_barker, search_circulant_hadamard, SearchOptions,
};
use circhad::SignVector;
use proptest::prelude::*;

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| rational(p, q))
}

fn circulant_strategy(n: usize) -> impl Strategy<Value = CirculantMatrix> {
    prop::collection::vec(rational_strategy(), n).prop_map(|row| CirculantMatrix::new(row).unwrap())
}

fn triple() -> impl Strategy<Value = (CirculantMatrix, CirculantMatrix, CirculantMatrix)> {
    (1usize..=16).prop_flat_map(|n| {
        (
            circulant_strategy(n),
            circulant_strategy(n),
            circulant_strategy(n),
        )
    })
}

/// Row-by-column product of the materialized matrices.
fn naive_product(a: &CirculantMatrix, b: &CirculantMatrix) -> Vec<Vec<Rational>> {
    let n = a.order();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a.entry(i, k) * b.entry(k, j)).sum())
                .collect()
        })
        .collect()
}

fn materialize(a: &CirculantMatrix) -> Vec<Vec<Rational>> {
    (0..a.order()).map(|i| a.row(i)).collect()
}

fn rows_of(n: usize) -> impl Iterator<Item = SignVector> {
    (0u64..1 << n).map(move |bits| {
        SignVector::new(
            (0..n)
                .map(|i| if bits >> i & 1 == 1 { 1 } else { -1 })
                .collect(),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_laws((a, b, c) in triple(), alpha in rational_strategy(), beta in rational_strategy()) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.mul(&a).unwrap());
        prop_assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        let lhs = CirculantMatrix::linear_combine(&alpha, &a, &beta, &b).unwrap().mul(&c).unwrap();
        let rhs = CirculantMatrix::linear_combine(&alpha, &a.mul(&c).unwrap(), &beta, &b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn convolution_matches_naive_product((a, b, _c) in triple()) {
        prop_assert_eq!(materialize(&a.mul(&b).unwrap()), naive_product(&a, &b));
    }

    #[test]
    fn transpose_laws((a, b, _c) in triple()) {
        let t = |m: &CirculantMatrix| m.conj_transpose();
        let lhs = t(&a.mul(&b).unwrap());
        prop_assert_eq!(&lhs, &t(&b).mul(&t(&a)).unwrap());
        prop_assert_eq!(&lhs, &t(&a).mul(&t(&b)).unwrap());
        prop_assert_eq!(t(&t(&a)), a.clone());
        let n = a.order();
        let at = t(&a);
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(at.entry(i, j), a.entry(j, i));
                prop_assert_eq!(a.entry(i, j), &a.first_row()[(j + n - i) % n]);
            }
        }
    }

    #[test]
    fn json_round_trip(a in (1usize..=8).prop_flat_map(circulant_strategy)) {
        let back: CirculantMatrix = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn symmetric_pacf(bits in any::<u32>(), n in 1usize..=20) {
        let row = SignVector::new((0..n).map(|i| if bits >> i & 1 == 1 { 1 } else { -1 }).collect()).unwrap();
        let p = pacf(&row);
        prop_assert_eq!(p.at(0), n as i64);
        for k in 1..n {
            prop_assert_eq!(p.at(k), p.at(n - k));
        }
        let c = canonical_form(&row);
        prop_assert_eq!(canonical_form(&c), c);
    }
}

#[test]
fn all_ones_square() {
    for n in 1..=16 {
        let j = CirculantMatrix::all_ones(n).unwrap();
        assert_eq!(j.mul(&j).unwrap(), j.scale(&integer(n as i64)));
    }
}

#[test]
fn pacf_oracle_equivalence_exhaustive() {
    for n in 1..=12 {
        for row in rows_of(n) {
            assert_eq!(pacf(&row).is_perfect(), is_hadamard(&row), "({row})");
        }
    }
}

#[test]
fn hadamard_rows_are_regular_and_give_doubly_stochastic_s() {
    for n in [1usize, 4] {
        for row in rows_of(n).filter(is_hadamard) {
            if n == 4 {
                let p = regular_profile(&row).unwrap();
                assert!(p.h_is_odd());
                assert_eq!(p.positive_count + p.negative_count, 4);
            }
            assert!(is_doubly_stochastic(
                &build_s(&normalize_sign(&row).unwrap()).unwrap()
            ));
        }
    }
}

#[test]
fn canonical_form_orbit_soundness() {
    for n in 1..=10 {
        let mut classes: BTreeMap<SignVector, BTreeSet<SignVector>> = BTreeMap::new();
        for row in rows_of(n) {
            // orbit by direct enumeration of shifts and negation
            let orbit: BTreeSet<SignVector> = (0..n)
                .flat_map(|k| [row.shifted(k), row.negated().shifted(k)])
                .collect();
            let canon = canonical_form(&row);
            assert!(orbit.contains(&canon));
            assert_eq!(&canon, orbit.iter().next().unwrap());
            classes.entry(canon).or_default().insert(row);
        }
        for (canon, members) in &classes {
            let orbit: BTreeSet<SignVector> = (0..n)
                .flat_map(|k| [canon.shifted(k), canon.negated().shifted(k)])
                .collect();
            assert_eq!(members, &orbit, "n={n}");
        }
    }
}

#[test]
fn pruned_search_equals_naive_enumeration() {
    for n in 1..=12 {
        let pruned = SearchOptions {
            confirm_excluded_orders: true,
            ..Default::default()
        };
        let plain = SearchOptions {
            pruning: false,
            ..pruned.clone()
        };
        let a = search_circulant_hadamard(n, &pruned).unwrap();
        let b = search_circulant_hadamard(n, &plain).unwrap();
        let naive: Vec<SignVector> = rows_of(n).filter(is_hadamard).collect();
        let canon: BTreeSet<SignVector> = naive.iter().map(canonical_form).collect();
        assert_eq!(a.survivors, b.survivors);
        assert_eq!(a.survivors, canon.into_iter().collect::<Vec<_>>());
        assert_eq!(a.raw_count, naive.len() as u64);
        assert_eq!(b.raw_count, naive.len() as u64);
        assert_eq!(a.raw_count, a.orbit_total());
    }
}

#[test]
fn weight_restriction_loses_nothing_at_order_four() {
    let full: BTreeSet<SignVector> = rows_of(4).filter(is_hadamard).collect();
    assert_eq!(full.len(), 8);
    assert!(full.iter().all(|r| r.weight() == 3 || r.weight() == 1));
    let report = search_circulant_hadamard(4, &SearchOptions::default()).unwrap();
    assert_eq!(report.weights, [3]);
    let expanded: BTreeSet<SignVector> = report
        .survivors
        .iter()
        .flat_map(|s| (0..4).flat_map(move |k| [s.shifted(k), s.negated().shifted(k)]))
        .collect();
    assert_eq!(expanded, full);
}

#[test]
fn parallel_determinism() {
    let single = SearchOptions::default();
    let four = SearchOptions {
        worker_count: 4,
        ..Default::default()
    };
    for (n, confirm) in [(4, false), (12, true), (16, true), (18, true)] {
        let a = search_circulant_hadamard(
            n,
            &SearchOptions {
                confirm_excluded_orders: confirm,
                ..single.clone()
            },
        )
        .unwrap();
        let b = search_circulant_hadamard(
            n,
            &SearchOptions {
                confirm_excluded_orders: confirm,
                ..four.clone()
            },
        )
        .unwrap();
        assert_eq!(a.certificate(false), b.certificate(false), "n={n}");
    }
    for n in [11, 13, 16] {
        let a = search_barker(n, &single).unwrap();
        let b = search_barker(n, &four).unwrap();
        assert_eq!(a.certificate(false), b.certificate(false), "n={n}");
    }
}

#[test]
fn audit_reports_are_deterministic_and_round_trip() {
    for row in rows_of(4).filter(is_hadamard) {
        let a = full_audit(&row, AuditMode::Strict).unwrap();
        let b = full_audit(&row, AuditMode::Strict).unwrap();
        assert_eq!(a, b);
        let back: AuditReport = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
        assert!(a
            .steps
            .iter()
            .all(|s| s.verdict.needs_witness() == s.witness.is_some()));
    }
}
