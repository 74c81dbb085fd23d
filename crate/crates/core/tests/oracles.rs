use std::collections::BTreeMap;

use ihsat_core::datasets::{builtin_registry, parse_expr};
use ihsat_core::{gysin_assemble, weyl_dimension, Partition};

/// Counts King symplectic tableaux of shape `shape` over `1 < 1' < ... < g < g'`.
/// Rows weakly increase, columns strictly increase, row `r` holds only letters `≥ r`.
fn king_tableaux(shape: &[u32], g: u32) -> u128 {
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
        .collect();
    let mut grid = vec![vec![0u32; shape.first().copied().unwrap_or(0) as usize]; shape.len()];
    fn fill(i: usize, cells: &[(usize, usize)], grid: &mut Vec<Vec<u32>>, letters: u32) -> u128 {
        if i == cells.len() {
            return 1;
        }
        let (r, c) = cells[i];
        let mut lo = 2 * r as u32;
        if c > 0 {
            lo = lo.max(grid[r][c - 1]);
        }
        if r > 0 {
            lo = lo.max(grid[r - 1][c] + 1);
        }
        let mut n = 0;
        for x in lo..letters {
            grid[r][c] = x;
            n += fill(i + 1, cells, grid, letters);
        }
        n
    }
    fill(0, &cells, &mut grid, 2 * g)
}

fn shapes(max_weight: u32, max_rows: usize) -> Vec<Vec<u32>> {
    fn go(left: u32, cap: u32, rows: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        if rows == 0 {
            return;
        }
        for p in 1..=cap.min(left) {
            cur.push(p);
            go(left - p, p, rows - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(max_weight, max_weight, max_rows, &mut Vec::new(), &mut out);
    out
}

#[test]
fn weyl_dimension_counts_king_tableaux() {
    for g in 1..=3 {
        for shape in shapes(4, g as usize) {
            let p = Partition::from_parts(&shape).unwrap();
            assert_eq!(
                weyl_dimension(&p, g),
                king_tableaux(&shape, g),
                "g={g} shape={shape:?}"
            );
        }
    }
}

#[test]
fn known_small_dimensions() {
    let dim = |parts: &[u32], g| weyl_dimension(&Partition::from_parts(parts).unwrap(), g);
    assert_eq!(dim(&[1], 2), 4);
    assert_eq!(dim(&[1, 1], 2), 5);
    assert_eq!(dim(&[2], 2), 10);
    assert_eq!(dim(&[1, 1], 3), 14);
    assert_eq!(dim(&[2, 2], 3), 90);
}

/// Total dimension per degree of the Gysin page over `A_1` in genus 4, summed
/// straight from the dataset text, with forced pairs removed on both ends.
fn direct_sum(text: &str) -> BTreeMap<u32, u128> {
    let mut out = BTreeMap::new();
    let mut forced = Vec::new();
    let mut inside = false;
    for line in text.lines() {
        if line.starts_with('[') {
            inside = line.starts_with("[gysin g=4 k=1");
            continue;
        }
        if !inside {
            continue;
        }
        if let Some(rest) = line.strip_prefix("differential ") {
            let (arrow, sys) = rest.split_once(": ").unwrap();
            let (src, _) = arrow.split_once("->").unwrap();
            let nums: Vec<u32> = src
                .trim_matches(['(', ')'])
                .split(',')
                .map(|n| n.parse().unwrap())
                .collect();
            forced.push((nums[0] + nums[1], parse_expr(sys, 1).unwrap().dimension(1)));
            continue;
        }
        let Some((pos, expr)) = line.split_once(": ") else {
            continue;
        };
        if !pos.starts_with('(') {
            continue;
        }
        let nums: Vec<u32> = pos
            .trim_matches(['(', ')'])
            .split(',')
            .map(|n| n.parse().unwrap())
            .collect();
        *out.entry(nums[0] + nums[1]).or_insert(0) += parse_expr(expr, 1).unwrap().dimension(1);
    }
    for (d, dim) in forced {
        *out.get_mut(&d).unwrap() -= dim;
        *out.get_mut(&(d + 1)).unwrap() -= dim;
    }
    out
}

#[test]
fn gysin_page_matches_direct_summation() {
    let text = include_str!("../data/genus4.ihdat");
    let oracle = direct_sum(text);
    let reg = builtin_registry();
    let total = gysin_assemble(reg.gysin(4, 1).unwrap()).unwrap();
    let row = total.dimension_row();
    for (d, want) in &oracle {
        assert_eq!(
            row.get(*d as usize).copied().unwrap_or(0),
            *want,
            "degree {d}"
        );
    }
    // V[2] has rank 3 over A_1, so degree 4 is 3 + 2 and degree 7 is empty
    assert_eq!(oracle[&4], 5);
    assert_eq!(oracle[&7], 0);
    assert_eq!(row.iter().sum::<u128>(), oracle.values().sum::<u128>());
}

#[test]
fn gysin_page_without_the_differential_keeps_degree_seven() {
    let reg = builtin_registry();
    let mut page = reg.gysin(4, 1).unwrap().clone();
    page.forced.clear();
    let total = gysin_assemble(&page).unwrap();
    assert_eq!(total.get(7).to_string(), "V[2](-2)");
    assert_eq!(total.get(8).untwisted().to_string(), "V[2] + 4 Q");
}
