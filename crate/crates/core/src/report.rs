//! Text and CSV renderings of genus reports. Output depends only on the
//! report, so repeated runs are byte-identical.

use std::fmt::Write as _;

use crate::betti::BettiValue;
use crate::engine::{GenusReport, LinkFamily, LinkStore, StratumStep, SummandRow, POLICY};
use crate::rep::IrrepSum;

/// Link families shown in the link table: everything except `N_{r-1,r}` with
/// trivial coefficients, whose cohomology comes from the circle bundle.
pub fn reported_families(links: &LinkStore, max_upper: u32) -> Vec<LinkFamily> {
    let mut out: Vec<LinkFamily> = links
        .families()
        .filter(|f| f.upper <= max_upper)
        .filter(|f| !(f.coeff.is_trivial() && f.upper == f.lower + 1))
        .cloned()
        .collect();
    out.sort_by(|a, b| {
        (!a.coeff.is_trivial(), &a.coeff, a.upper, a.lower).cmp(&(
            !b.coeff.is_trivial(),
            &b.coeff,
            b.upper,
            b.lower,
        ))
    });
    out
}

fn cell_text(v: &Option<IrrepSum>) -> String {
    match v {
        Some(s) => s.to_string(),
        None => "?".into(),
    }
}

/// Cells `q = 0..=truncation` of one link row, `?` where unknown.
pub fn link_row_cells(links: &LinkStore, family: &LinkFamily) -> Vec<String> {
    links.lower_row(family).iter().map(cell_text).collect()
}

fn pad_table(rows: &[Vec<String>], right_from: usize) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (c, w) in widths.iter().enumerate() {
            let s = r.get(c).map(String::as_str).unwrap_or("");
            if c > 0 {
                line.push(' ');
            }
            if c >= right_from {
                write!(line, "{s:>w$}").unwrap();
            } else {
                write!(line, "{s:<w$}").unwrap();
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn support(row: &SummandRow, report: &GenusReport) -> (usize, usize) {
    match row.fiber_degree {
        Some(j) => (j as usize, (j + 2 * report.strat.s(row.stratum)) as usize),
        None => {
            let nz: Vec<usize> = (0..row.values.len())
                .filter(|&m| row.values[m] != BettiValue::Known(0))
                .collect();
            (
                nz.first().copied().unwrap_or(0),
                nz.last().copied().unwrap_or(0),
            )
        }
    }
}

/// Whether every row of the decomposition table vanishes in odd degrees.
fn odd_free(report: &GenusReport) -> bool {
    let g = &report.global;
    let rows = std::iter::once(&g.toroidal.values)
        .chain(std::iter::once(&g.ih.values))
        .chain(g.summands.iter().map(|r| &r.values));
    rows.into_iter().all(|vals| {
        vals.iter()
            .skip(1)
            .step_by(2)
            .all(|v| *v == BettiValue::Known(0))
    })
}

/// The decomposition table: toroidal Betti row, `IH(Sat_g)`, every summand
/// row, and the column sums.
pub fn decomposition_table(report: &GenusReport) -> String {
    let g = &report.global;
    let top = g.toroidal.top_degree();
    let step = if odd_free(report) { 2 } else { 1 };
    let degrees: Vec<usize> = (0..=top).step_by(step).collect();

    let mut rows = Vec::new();
    let mut head = vec!["j".to_string()];
    head.extend(degrees.iter().map(|m| m.to_string()));
    rows.push(head);
    let mut tor = vec![format!("h^j({})", g.toroidal.label)];
    tor.extend(degrees.iter().map(|&m| g.toroidal.get(m).to_string()));
    rows.push(tor);
    let mut ih = vec![format!("ih(Sat_{})", report.genus)];
    ih.extend(degrees.iter().map(|&m| g.ih.get(m).to_string()));
    rows.push(ih);
    for r in &g.summands {
        let (lo, hi) = support(r, report);
        let mut line = vec![r.label.clone()];
        line.extend(degrees.iter().map(|&m| {
            if m < lo || m > hi {
                String::new()
            } else {
                r.values[m].to_string()
            }
        }));
        rows.push(line);
    }
    let sums = g.sum_row();
    let mut sum = vec!["sum".to_string()];
    sum.extend(degrees.iter().map(|&m| sums[m].to_string()));
    rows.push(sum);
    pad_table(&rows, 1)
}

/// `d | predicted | fiber | new` over one stratum.
pub fn stratum_table(report: &GenusReport, step: &StratumStep) -> String {
    let top = step
        .fiber
        .extent()
        .max(step.predicted.reach)
        .max(step.new.iter().map(|e| e.fiber_degree).max().unwrap_or(0));
    let mut rows = vec![vec![
        "d".into(),
        "|".into(),
        "predicted".into(),
        "|".into(),
        "fiber".into(),
        "|".into(),
        "new".into(),
    ]];
    for d in (0..=top).rev() {
        let new = step
            .new
            .iter()
            .find(|e| e.fiber_degree == d)
            .map(|e| e.system.to_string())
            .unwrap_or_default();
        rows.push(vec![
            d.to_string(),
            "|".into(),
            step.predicted.describe(d),
            "|".into(),
            step.fiber.get(d).to_string(),
            "|".into(),
            new,
        ]);
    }
    let _ = report;
    pad_table(&rows, 7)
}

pub fn link_table(links: &LinkStore, max_upper: u32) -> String {
    let fams = reported_families(links, max_upper);
    let width = fams.iter().map(|f| f.truncation() + 1).max().unwrap_or(0);
    let mut rows = Vec::new();
    let mut head = vec!["link".to_string(), "dim".to_string(), "|".to_string()];
    head.extend((0..width).map(|q| format!("q={q}")));
    rows.push(head);
    for f in &fams {
        let mut line = vec![
            format!("IH^q({})", f.label()),
            f.real_dim().to_string(),
            "|".into(),
        ];
        line.extend(link_row_cells(links, f));
        rows.push(line);
    }
    pad_table(&rows, 99)
}

pub fn render_text(report: &GenusReport, emit_constraints: bool) -> String {
    let g = report.genus;
    let s = &report.strat;
    let mut out = String::new();
    writeln!(out, "genus {g}").unwrap();
    let dims: Vec<String> = (0..=g).map(|k| s.s(k).to_string()).collect();
    writeln!(out, "stratum dims s_0..s_{g}: {}", dims.join(" ")).unwrap();
    let fibers: Vec<String> = s.fiber_dims.iter().map(u32::to_string).collect();
    writeln!(out, "fiber dims f_0..f_{}: {}", g - 1, fibers.join(" ")).unwrap();
    writeln!(out, "defect: {}", report.defect).unwrap();
    writeln!(out, "policy: {POLICY}").unwrap();

    for step in &report.steps {
        writeln!(
            out,
            "\nover A_{} (new systems symmetric about {})",
            step.stratum,
            s.codim(step.stratum)
        )
        .unwrap();
        out.push_str(&stratum_table(report, step));
    }

    out.push_str("\nnew local systems\n");
    if report.ledger.is_empty() {
        out.push_str("no new local systems\n");
    } else {
        let mut rows = vec![vec![
            "stratum".to_string(),
            "j".into(),
            "shift".into(),
            "system".into(),
        ]];
        for e in &report.ledger {
            rows.push(vec![
                format!("A_{}", e.stratum),
                e.fiber_degree.to_string(),
                format!("[{}]", e.shift_label),
                e.system.to_string(),
            ]);
        }
        out.push_str(&pad_table(&rows, 99));
    }

    let fams = reported_families(&report.links, g);
    if !fams.is_empty() {
        out.push_str("\nlink cohomology below the middle; IH^q = IH^{dim-q} above it\n");
        out.push_str(&link_table(&report.links, g));
    }

    if emit_constraints {
        out.push_str("\nconstraints\n");
        if report.constraints.is_empty() {
            out.push_str("none\n");
        }
        for c in &report.constraints {
            writeln!(out, "{c}").unwrap();
        }
    }

    out.push_str("\ndecomposition\n");
    out.push_str(&decomposition_table(report));

    if !report.global.relations.is_empty() {
        out.push_str("\nrelations\n");
        for r in &report.global.relations {
            writeln!(out, "{r}").unwrap();
            let bounds: Vec<String> = r
                .bounds
                .iter()
                .map(|(s, b)| format!("{s} >= {b}"))
                .collect();
            writeln!(out, "  {}", bounds.join(", ")).unwrap();
        }
    }

    out.push('\n');
    for c in &report.global.coefficient_ih {
        writeln!(out, "{} = {}", c.label, c.row_string()).unwrap();
    }
    writeln!(out, "IH(Sat_{g}) = {}", report.global.ih.row_string()).unwrap();
    if let Some(b) = &report.blowup {
        writeln!(out, "{} = {}", b.ih.label, b.ih.row_string()).unwrap();
        let verdict = if b.base_matches_exceptional {
            "yes"
        } else {
            "no"
        };
        writeln!(
            out,
            "new systems over A_0 are exactly the exceptional divisor classes: {verdict}"
        )
        .unwrap();
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn bound_fields(v: &BettiValue) -> (String, String) {
    match v {
        BettiValue::Known(n) => (n.to_string(), n.to_string()),
        BettiValue::Unknown { lower, .. } => ("?".into(), lower.to_string()),
    }
}

/// CSV blocks separated by blank lines: ledger, constraints, Betti rows, links.
pub fn render_csv(report: &GenusReport) -> String {
    let mut out = String::from("stratum,fiber_degree,system,shift_label\n");
    for e in &report.ledger {
        writeln!(
            out,
            "{},{},{},{}",
            e.stratum,
            e.fiber_degree,
            csv_field(&e.system.to_string()),
            e.shift_label
        )
        .unwrap();
    }

    out.push_str("\nstratum,degree,lhs,rhs\n");
    for c in &report.constraints {
        writeln!(
            out,
            "{},{},{},{}",
            c.origin.stratum.unwrap_or(0),
            c.origin.degree.unwrap_or(0),
            csv_field(&c.lhs_string()),
            csv_field(&c.rhs.to_string())
        )
        .unwrap();
    }

    out.push_str("\nspace,degree,value,lower_bound\n");
    let g = &report.global;
    let mut rows = vec![&g.toroidal, &g.ih];
    rows.extend(g.coefficient_ih.iter());
    if let Some(b) = &report.blowup {
        rows.push(&b.ih);
    }
    for row in rows {
        for (m, v) in row.values.iter().enumerate() {
            let (value, lower) = bound_fields(v);
            writeln!(out, "{},{m},{value},{lower}", csv_field(&row.label)).unwrap();
        }
    }

    out.push_str("\nlink,real_dim,degree,value\n");
    for f in reported_families(&report.links, report.genus) {
        for (q, v) in report.links.lower_row(&f).iter().enumerate() {
            writeln!(
                out,
                "{},{},{q},{}",
                csv_field(&f.label()),
                f.real_dim(),
                csv_field(&cell_text(v))
            )
            .unwrap();
        }
    }
    out
}
