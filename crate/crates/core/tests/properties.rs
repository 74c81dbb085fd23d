use ihsat_core::datasets::parse_expr;
use ihsat_core::{
    dual, exterior_power_decomposition, gysin_assemble, invariant_kummer_row, partition_normalize,
    sum_add, sum_subtract, taut_graded_dims, weyl_dimension, GradedTable, GysinPage, IrrepSum,
    Partition, Term,
};
use proptest::prelude::*;

fn partition(max_rows: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0u32..4, 0..=max_rows).prop_map(|mut parts| {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let raw: Vec<i64> = parts.into_iter().map(i64::from).collect();
        partition_normalize(&raw, 4).unwrap()
    })
}

fn term() -> impl Strategy<Value = Term> {
    (partition(3), prop::option::of(-6i32..=6)).prop_map(|(p, t)| Term::new(p, t))
}

fn irrep_sum() -> impl Strategy<Value = IrrepSum> {
    prop::collection::vec((term(), 1u64..5), 0..5).prop_map(|v| v.into_iter().collect())
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #[test]
    fn add_then_subtract_round_trips(a in irrep_sum(), b in irrep_sum()) {
        prop_assert_eq!(sum_subtract(&sum_add(&a, &b), &b).unwrap(), a);
    }

    #[test]
    fn addition_commutes(a in irrep_sum(), b in irrep_sum()) {
        prop_assert_eq!(sum_add(&a, &b), sum_add(&b, &a));
    }

    #[test]
    fn subtracting_more_than_present_fails(a in irrep_sum(), t in term()) {
        let extra = IrrepSum::from_term(t.clone(), a.multiplicity(&t) + 1);
        prop_assert!(sum_subtract(&a, &extra).is_err());
    }

    #[test]
    fn normalize_is_idempotent(mut raw in prop::collection::vec(0i64..6, 0..5)) {
        raw.sort_unstable_by(|a, b| b.cmp(a));
        let once = partition_normalize(&raw, 5).unwrap();
        let again: Vec<i64> = once.parts().iter().map(|&p| i64::from(p)).collect();
        prop_assert_eq!(partition_normalize(&again, 5).unwrap(), once);
    }

    #[test]
    fn increasing_input_is_rejected(a in 0i64..5, b in 1i64..5) {
        prop_assert!(partition_normalize(&[a, a + b], 4).is_err());
    }

    #[test]
    fn dual_is_an_involution(a in irrep_sum()) {
        prop_assert_eq!(dual(&dual(&a)), a.clone());
        prop_assert_eq!(dual(&a).untwisted(), a.untwisted());
    }

    #[test]
    fn expressions_round_trip(a in irrep_sum()) {
        let text = a.to_string();
        prop_assert_eq!(parse_expr(&text, 4).unwrap(), a);
    }

    #[test]
    fn exterior_powers_are_symmetric(g in 1u32..=12, q in 0u32..=24) {
        prop_assume!(q <= 2 * g);
        prop_assert_eq!(
            exterior_power_decomposition(g, q as i64).unwrap(),
            exterior_power_decomposition(g, (2 * g - q) as i64).unwrap()
        );
    }

    // without forced differentials the page total is the termwise sum
    #[test]
    fn gysin_total_is_the_column_sum(cols in prop::collection::vec(prop::collection::vec(irrep_sum(), 0..4), 1..4)) {
        let tables: Vec<GradedTable> = cols
            .iter()
            .enumerate()
            .map(|(p, col)| GradedTable::from_entries(4, col.iter().enumerate().map(|(q, s)| ((p + q) as u32, s.clone()))))
            .collect();
        let groups: Vec<Vec<&GradedTable>> = tables.iter().map(|t| vec![t]).collect();
        let page = GysinPage::from_strata(4, &groups);
        let total = gysin_assemble(&page).unwrap();
        let expected: u128 = tables.iter().flat_map(|t| t.dimension_row()).sum();
        prop_assert_eq!(total.dimension_row().iter().sum::<u128>(), expected);
    }
}

#[test]
fn exterior_power_dimensions_are_binomial() {
    for g in 1..=12u32 {
        for q in 0..=2 * g {
            let dim: u128 = exterior_power_decomposition(g, q as i64)
                .unwrap()
                .terms()
                .map(|(t, m)| m as u128 * weyl_dimension(&t.partition, g))
                .sum();
            assert_eq!(dim, binomial(2 * g as u128, q as u128), "g={g} q={q}");
        }
    }
}

#[test]
fn taut_dims_sum_to_subsets() {
    for g in 1..=20 {
        let dims = taut_graded_dims(g).dims;
        assert_eq!(dims.iter().sum::<u64>(), 1 << g);
        assert!(dims.iter().skip(1).step_by(2).all(|&d| d == 0));
    }
}

#[test]
fn taut_dims_match_product() {
    for g in 1..=16u32 {
        let mut poly = vec![1u64];
        for i in 1..=g as usize {
            let mut next = vec![0u64; poly.len() + 2 * i];
            for (d, c) in poly.iter().enumerate() {
                next[d] += c;
                next[d + 2 * i] += c;
            }
            poly = next;
        }
        assert_eq!(taut_graded_dims(g).dims, poly, "g={g}");
    }
}

// the row is Λ^p V_1 in even p; its rank is the binomial coefficient
#[test]
fn kummer_row_ranks() {
    for g in 1..=10u32 {
        let row = invariant_kummer_row(g);
        for p in 0..g {
            let want = if p % 2 == 0 {
                binomial(2 * (g - 1) as u128, p as u128)
            } else {
                0
            };
            assert_eq!(row.get(p).dimension(g - 1), want, "g={g} p={p}");
        }
    }
}
