use ihsat_core::engine::degree_profile;
use ihsat_core::{
    builtin_registry, render_csv, render_text, run_genus, run_through, taut_graded_dims,
    BettiValue, Error, GenusReport, Registry,
};

fn reports() -> Vec<GenusReport> {
    run_through(4, &builtin_registry()).unwrap()
}

fn ledger(r: &GenusReport) -> Vec<(u32, u32, String, i64)> {
    r.ledger
        .iter()
        .map(|e| {
            (
                e.stratum,
                e.fiber_degree,
                e.system.to_string(),
                e.shift_label,
            )
        })
        .collect()
}

#[test]
fn genus_two_is_semi_small() {
    let r = run_genus(2, &builtin_registry()).unwrap();
    assert_eq!(r.defect, 0);
    assert_eq!(ledger(&r), vec![(1, 2, "Q".into(), 0)]);
    assert_eq!(r.ih().row_string(), "1 0 1 0 1 0 1");
}

#[test]
fn genus_three_ledger() {
    let r = &reports()[2];
    assert_eq!(
        ledger(r),
        vec![
            (2, 2, "Q".into(), -1),
            (2, 4, "Q".into(), 1),
            (1, 4, "Q".into(), -1),
            (1, 6, "Q".into(), 1),
        ]
    );
    assert!(r.constraints.is_empty());
    assert!(r.global.relations.is_empty());
}

#[test]
fn genus_four_base_stratum_is_the_exceptional_divisor() {
    let r = &reports()[3];
    let base: Vec<(u32, u64)> = degree_profile(&r.ledger, 0).into_iter().collect();
    assert_eq!(
        base,
        vec![
            (2, 1),
            (4, 1),
            (6, 2),
            (8, 3),
            (10, 3),
            (12, 3),
            (14, 2),
            (16, 1),
            (18, 1)
        ]
    );
    assert!(r.blowup.as_ref().unwrap().base_matches_exceptional);
    assert_eq!(r.defect, 8);
    assert_eq!(r.strat.fiber_dims, vec![9, 6, 5, 3]);
}

#[test]
fn ledger_is_symmetric_about_the_codimension() {
    for r in reports() {
        for k in 0..r.genus {
            let centre = r.strat.codim(k);
            let profile = degree_profile(&r.ledger, k);
            for (&j, &m) in &profile {
                assert_eq!(
                    profile.get(&(2 * centre - j)),
                    Some(&m),
                    "g={} k={k} j={j}",
                    r.genus
                );
            }
        }
    }
}

#[test]
fn lower_genera_are_reused_unchanged() {
    let all = reports();
    let reg = builtin_registry();
    for g in 1..=3 {
        let alone = run_genus(g, &reg).unwrap();
        assert_eq!(alone.ih(), all[g as usize - 1].ih());
    }
}

#[test]
fn ih_dominates_the_tautological_ring() {
    for r in reports() {
        let taut = taut_graded_dims(r.genus).dims;
        for (j, v) in r.ih().values.iter().enumerate() {
            assert!(taut[j] <= v.lower(), "g={} j={j}", r.genus);
        }
    }
}

// where nothing is unknown, the fiber splits exactly into prediction and new systems
#[test]
fn fiber_dimension_bookkeeping() {
    for r in reports() {
        for step in &r.steps {
            let ctx = step.fiber.context_genus;
            for d in 0..=step.fiber.extent() {
                if step.predicted.unknowns_at(d).is_some() {
                    continue;
                }
                let new: u128 = step
                    .new
                    .iter()
                    .filter(|e| e.fiber_degree == d)
                    .map(|e| e.system.dimension(ctx))
                    .sum();
                assert_eq!(
                    step.fiber.get(d).dimension(ctx),
                    step.predicted.known.get(d).dimension(ctx) + new,
                    "g={} k={} d={d}",
                    r.genus,
                    step.stratum
                );
            }
        }
    }
}

#[test]
fn genus_four_decomposition_sums() {
    let r = &reports()[3];
    let sums: Vec<String> = r
        .global
        .sum_row()
        .iter()
        .map(BettiValue::to_string)
        .collect();
    let tor: Vec<String> = r
        .global
        .toroidal
        .values
        .iter()
        .map(BettiValue::to_string)
        .collect();
    assert_eq!(
        sums,
        tor.iter()
            .map(|s| if s == "?" {
                ">=19".to_string()
            } else {
                s.clone()
            })
            .collect::<Vec<_>>()
    );
    assert_eq!(r.global.relations.len(), 1);
    assert_eq!(
        r.global.relations[0].to_string(),
        "h10(vor4) = 17 + IH10(Sat_4) + IH6(Sat_3,V[1,1])"
    );
}

#[test]
fn reports_are_deterministic() {
    let reg = builtin_registry();
    for g in 1..=4 {
        let a = run_genus(g, &reg).unwrap();
        let b = run_genus(g, &reg).unwrap();
        assert_eq!(render_text(&a, true), render_text(&b, true));
        assert_eq!(render_csv(&a), render_csv(&b));
    }
}

#[test]
fn text_report_layout() {
    let r = &reports()[3];
    let text = render_text(r, true);
    assert!(text.contains("policy: minimal-new"));
    assert!(text.contains("IH(Perf_4) = 1 0 2 0 4 0 9 0 14 0 >=16 0 14 0 9 0 4 0 2 0 1"));
    assert!(text.contains("IH6(N_{0,4},Q) + IH2(N_{0,3},V[1,1]) = Q"));
    assert!(!render_text(r, false).contains("\nconstraints\n"));
    let g1 = render_text(&reports()[0], false);
    assert!(g1.contains("no new local systems"));
}

#[test]
fn csv_blocks() {
    let csv = render_csv(&reports()[3]);
    let blocks: Vec<&str> = csv.split("\n\n").collect();
    assert_eq!(blocks.len(), 4);
    assert!(blocks[0].starts_with("stratum,fiber_degree,system,shift_label\n"));
    assert_eq!(blocks[1].lines().count(), 7);
    assert!(blocks[2].contains("vor4,10,?,19"));
    assert!(blocks[2].contains("IH(Sat_4),10,?,2"));
    assert!(blocks[3].contains("\"N_{2,4},Q\",13,4,?"));
}

#[test]
fn missing_genus_is_reported() {
    let err = run_genus(5, &builtin_registry()).unwrap_err();
    assert!(matches!(err, Error::MissingDataset(_)));
    assert!(err.to_string().starts_with("no dataset"));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn missing_toroidal_row_is_reported() {
    let mut reg = Registry::empty();
    for (name, text) in ihsat_core::datasets::registry::builtin_sources() {
        if !name.contains('4') {
            reg.insert_text(name, text).unwrap();
        }
    }
    let text = include_str!("../data/genus4.ihdat");
    let cut = text.find("[betti space=vor4").unwrap();
    reg.insert_text("partial", &text[..cut]).unwrap();
    let err = run_genus(4, &reg).unwrap_err();
    assert!(err.to_string().contains("toroidal"), "{err}");
}
