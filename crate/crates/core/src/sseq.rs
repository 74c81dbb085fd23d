//! The two spectral sequences the engine runs explicitly: the two-row Leray
//! sequence of the circle bundle `N_{g-1,g} → X_{g-1}` and the `E_1` page of
//! the Gysin sequence that assembles a fiber from its strata.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rep::{exterior_power_decomposition, sum_min, sum_subtract, IrrepSum, Term};

/// Degree-indexed local systems over `A_{context_genus}`. Missing degrees are zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedTable {
    entries: BTreeMap<u32, IrrepSum>,
    pub context_genus: u32,
    pub top_degree: Option<u32>,
}

impl GradedTable {
    pub fn new(context_genus: u32) -> Self {
        GradedTable {
            entries: BTreeMap::new(),
            context_genus,
            top_degree: None,
        }
    }

    pub fn with_top(mut self, top: u32) -> Self {
        self.top_degree = Some(top);
        self
    }

    pub fn from_entries<I>(context_genus: u32, entries: I) -> Self
    where
        I: IntoIterator<Item = (u32, IrrepSum)>,
    {
        let mut t = GradedTable::new(context_genus);
        for (d, s) in entries {
            t.add(d, &s);
        }
        t
    }

    pub fn get(&self, degree: u32) -> IrrepSum {
        self.entries.get(&degree).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, degree: u32, value: IrrepSum) {
        if value.is_zero() {
            self.entries.remove(&degree);
        } else {
            self.entries.insert(degree, value);
        }
    }

    pub fn add(&mut self, degree: u32, value: &IrrepSum) {
        let sum = &self.get(degree) + value;
        self.set(degree, sum);
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, &IrrepSum)> {
        self.entries.iter().map(|(&d, s)| (d, s))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Highest degree with a nonzero entry.
    pub fn max_degree(&self) -> Option<u32> {
        self.entries.keys().next_back().copied()
    }

    /// Declared top degree, else the highest nonzero degree.
    pub fn extent(&self) -> u32 {
        self.top_degree.or(self.max_degree()).unwrap_or(0)
    }

    /// Ranks of the local systems, degree by degree up to `extent()`.
    pub fn dimension_row(&self) -> Vec<u128> {
        (0..=self.extent())
            .map(|d| self.get(d).dimension(self.context_genus))
            .collect()
    }

    /// Number of irreducible summands per degree, i.e. the Betti row when
    /// every summand is `Q`.
    pub fn count_row(&self) -> Vec<u64> {
        (0..=self.extent()).map(|d| self.get(d).count()).collect()
    }

    pub fn untwisted(&self) -> GradedTable {
        GradedTable {
            entries: self
                .entries
                .iter()
                .map(|(&d, s)| (d, s.untwisted()))
                .collect(),
            context_genus: self.context_genus,
            top_degree: self.top_degree,
        }
    }

    pub fn equivalent(&self, other: &GradedTable) -> bool {
        let top = self.extent().max(other.extent());
        (0..=top).all(|d| self.get(d).equivalent(&other.get(d)))
    }

    pub fn has_odd_entries(&self) -> bool {
        self.entries.keys().any(|d| d % 2 == 1)
    }
}

/// Invariant cohomology of the universal family of dimension `dim`, i.e.
/// `Λ^p V_1` in even degrees and zero in odd ones, for `0 ≤ p ≤ 2·dim`.
fn kummer_cohomology(dim: u32) -> GradedTable {
    let mut t = GradedTable::new(dim).with_top(2 * dim);
    for p in (0..=2 * dim).step_by(2) {
        t.set(
            p,
            exterior_power_decomposition(dim, p as i64).expect("p within 0..=2·dim"),
        );
    }
    t
}

/// The base row of the Leray sequence for `N_{g-1,g}` in degrees `p ≤ g - 1`.
pub fn invariant_kummer_row(g: u32) -> GradedTable {
    assert!(g >= 1, "genus must be positive");
    let full = kummer_cohomology(g - 1);
    let mut row = GradedTable::new(g - 1).with_top(g - 1);
    for p in 0..g {
        row.set(p, full.get(p));
    }
    row
}

/// `IH^q(N_{g-1,g})` for `q ≤ g - 1`.
///
/// Both rows of the circle-bundle Leray sequence equal the Kummer row, and
/// `d_2: E^{p,1} → E^{p+2,0}` has maximal rank on every isotypic component.
pub fn circle_link_ih(g: u32) -> GradedTable {
    assert!(g >= 1, "genus must be positive");
    let base = kummer_cohomology(g - 1);
    let image = |p: u32| sum_min(&base.get(p), &base.get(p + 2));

    let mut out = GradedTable::new(g - 1).with_top(g - 1);
    for m in 0..g {
        let mut e3_row0 = base.get(m);
        if m >= 2 {
            e3_row0 = sum_subtract(&e3_row0, &image(m - 2)).expect("image lies in target");
        }
        let e3_row1 = if m >= 1 {
            sum_subtract(&base.get(m - 1), &image(m - 1)).expect("image lies in source")
        } else {
            IrrepSum::zero()
        };
        out.set(m, &e3_row0 + &e3_row1);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcedDifferential {
    pub source: (u32, u32),
    pub system: IrrepSum,
}

impl ForcedDifferential {
    pub fn target(&self) -> (u32, u32) {
        (self.source.0 + 1, self.source.1)
    }
}

/// An `E_1` page `E_1^{p,q} = H_c^{p+q}(stratum_p)` with the differentials
/// the data asserts to be isomorphisms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GysinPage {
    pub columns: Vec<(u32, GradedTable)>,
    pub forced: Vec<ForcedDifferential>,
}

impl GysinPage {
    /// Builds the page from groups of strata given by total degree: group `p`
    /// becomes column `p`, with `q = degree - p`.
    pub fn from_strata(context_genus: u32, groups: &[Vec<&GradedTable>]) -> Self {
        let columns = groups
            .iter()
            .enumerate()
            .map(|(p, group)| {
                let p = p as u32;
                let mut col = GradedTable::new(context_genus);
                for table in group {
                    for (d, s) in table.entries() {
                        assert!(d >= p, "degree {d} below column {p}");
                        col.add(d - p, s);
                    }
                }
                (p, col)
            })
            .collect();
        GysinPage {
            columns,
            forced: Vec::new(),
        }
    }

    pub fn entry(&self, p: u32, q: u32) -> IrrepSum {
        self.columns
            .iter()
            .filter(|(c, _)| *c == p)
            .map(|(_, t)| t.get(q))
            .fold(IrrepSum::zero(), |acc, s| &acc + &s)
    }

    fn context_genus(&self) -> u32 {
        self.columns
            .first()
            .map(|(_, t)| t.context_genus)
            .unwrap_or(0)
    }
}

/// Whether `entry` contains `system`; untwisted terms of `system` match any twist.
fn remove_matching(entry: &IrrepSum, system: &IrrepSum) -> Option<IrrepSum> {
    let mut rest = entry.clone();
    for (t, m) in system.terms() {
        if t.twist.is_some() {
            rest = sum_subtract(&rest, &IrrepSum::from_term(t.clone(), m)).ok()?;
            continue;
        }
        let mut need = m;
        let candidates: Vec<(Term, u64)> = rest
            .terms()
            .filter(|(c, _)| c.partition == t.partition)
            .map(|(c, k)| (c.clone(), k))
            .collect();
        for (c, k) in candidates {
            let take = k.min(need);
            rest = sum_subtract(&rest, &IrrepSum::from_term(c, take)).ok()?;
            need -= take;
            if need == 0 {
                break;
            }
        }
        if need > 0 {
            return None;
        }
    }
    Some(rest)
}

/// Sums the page by total degree `p + q` after cancelling both ends of every
/// forced differential. The result is the compactly supported cohomology of
/// the whole fiber.
pub fn gysin_assemble(page: &GysinPage) -> Result<GradedTable> {
    let mut total = GradedTable::new(page.context_genus());
    for (p, col) in &page.columns {
        for (q, s) in col.entries() {
            total.add(p + q, s);
        }
    }
    for diff in &page.forced {
        let (sp, sq) = diff.source;
        let (tp, tq) = diff.target();
        let mismatch = |side| Error::MismatchedDifferential {
            from: diff.source,
            to: diff.target(),
            system: diff.system.to_string(),
            side,
        };
        remove_matching(&page.entry(sp, sq), &diff.system).ok_or_else(|| mismatch("source"))?;
        remove_matching(&page.entry(tp, tq), &diff.system).ok_or_else(|| mismatch("target"))?;
        for degree in [sp + sq, tp + tq] {
            let rest = remove_matching(&total.get(degree), &diff.system)
                .ok_or_else(|| mismatch("total"))?;
            total.set(degree, rest);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::Partition;

    fn col(q: usize) -> IrrepSum {
        IrrepSum::single(Partition::column(q), 1)
    }

    #[test]
    fn kummer_rows() {
        let r2 = invariant_kummer_row(2);
        assert_eq!(r2.get(0), IrrepSum::trivial(1));
        assert!(r2.get(1).is_zero());
        let r4 = invariant_kummer_row(4);
        assert_eq!(r4.get(2), &IrrepSum::trivial(1) + &col(2));
        assert!(r4.get(3).is_zero());
        let r1 = invariant_kummer_row(1);
        assert_eq!(r1.get(0), IrrepSum::trivial(1));
        assert_eq!(r1.extent(), 0);
    }

    #[test]
    fn circle_links() {
        let l4 = circle_link_ih(4);
        assert_eq!(l4.get(0), IrrepSum::trivial(1));
        assert!(l4.get(1).is_zero());
        assert_eq!(l4.get(2), col(2));
        assert!(l4.get(3).is_zero());
        assert_eq!(circle_link_ih(3).get(2), col(2));
        let l1 = circle_link_ih(1);
        assert_eq!(l1.get(0), IrrepSum::trivial(1));
        assert_eq!(l1.extent(), 0);
        let l2 = circle_link_ih(2);
        assert_eq!(l2.get(0), IrrepSum::trivial(1));
        assert!(l2.get(1).is_zero());
    }

    #[test]
    fn single_column_is_reindexed() {
        let t =
            GradedTable::from_entries(1, [(0, IrrepSum::trivial(1)), (2, IrrepSum::trivial(3))]);
        let page = GysinPage {
            columns: vec![(0, t.clone())],
            forced: vec![],
        };
        assert_eq!(gysin_assemble(&page).unwrap(), t);

        let shifted = GysinPage {
            columns: vec![(2, t)],
            forced: vec![],
        };
        let out = gysin_assemble(&shifted).unwrap();
        assert_eq!(out.get(4), IrrepSum::trivial(3));
    }

    #[test]
    fn missing_cancellation_is_rejected() {
        let t = GradedTable::from_entries(1, [(0, IrrepSum::trivial(1))]);
        let page = GysinPage {
            columns: vec![(0, t.clone()), (1, t)],
            forced: vec![ForcedDifferential {
                source: (0, 0),
                system: IrrepSum::single(Partition::from_parts(&[2]).unwrap(), 1),
            }],
        };
        assert!(matches!(
            gysin_assemble(&page),
            Err(Error::MismatchedDifferential { side: "source", .. })
        ));
    }

    #[test]
    fn twists_must_match_when_given() {
        let v2 =
            |tw| IrrepSum::from_term(Term::new(Partition::from_parts(&[2]).unwrap(), Some(tw)), 1);
        let page = GysinPage {
            columns: vec![
                (0, GradedTable::from_entries(1, [(1, v2(-2))])),
                (1, GradedTable::from_entries(1, [(1, v2(-1))])),
            ],
            forced: vec![ForcedDifferential {
                source: (0, 1),
                system: v2(-2),
            }],
        };
        assert!(matches!(
            gysin_assemble(&page),
            Err(Error::MismatchedDifferential { side: "target", .. })
        ));
    }
}
