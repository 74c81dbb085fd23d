//! Partitions labelling irreducible symplectic local systems and formal
//! non-negative sums of them.
//!
//! A partition `(μ_1 ≥ … ≥ μ_k)` with `k ≤ g` labels the irreducible
//! representation of `Sp(2g)` with that highest weight. Zero rows are dropped,
//! so the same literal can name a system over several different `A_g`; the
//! genus is carried by whatever table holds the sum.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// The empty partition, i.e. the constant system `Q`.
    pub fn trivial() -> Self {
        Partition { parts: Vec::new() }
    }

    /// `1^q`, the highest weight of the primitive part of `Λ^q V_1`.
    pub fn column(q: usize) -> Self {
        Partition { parts: vec![1; q] }
    }

    /// Builds a partition from already-normalized parts without a row bound.
    pub fn from_parts(parts: &[u32]) -> Result<Self> {
        let raw: Vec<i64> = parts.iter().map(|&p| p as i64).collect();
        partition_normalize(&raw, u32::MAX)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.is_empty()
    }

    /// Hodge weight `Σ μ_i`. Nothing in the engine consumes it.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn fits_genus(&self, genus: u32) -> bool {
        self.parts.len() <= genus as usize
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("Q");
        }
        f.write_str("V[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

/// Drops zero rows and checks the shape against the row bound `ambient_genus`.
pub fn partition_normalize(raw: &[i64], ambient_genus: u32) -> Result<Partition> {
    if raw.iter().any(|&p| p < 0) || raw.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NonMonotone { raw: raw.to_vec() });
    }
    let parts: Vec<u32> = raw
        .iter()
        .take_while(|&&p| p > 0)
        .map(|&p| p as u32)
        .collect();
    if parts.len() as u64 > ambient_genus as u64 {
        return Err(Error::TooManyRows {
            raw: raw.to_vec(),
            rows: parts.len(),
            genus: ambient_genus,
        });
    }
    Ok(Partition { parts })
}

/// Dimension of the irreducible `Sp(2g)` representation with highest weight
/// `p`, from the type C Weyl dimension formula.
///
/// With `l = λ + ρ`, `ρ = (g, g-1, …, 1)`:
/// `dim = Π_{i<j} (l_i² - l_j²)/(ρ_i² - ρ_j²) · Π_i l_i/ρ_i`.
pub fn weyl_dimension(p: &Partition, genus: u32) -> u128 {
    assert!(
        p.fits_genus(genus),
        "{p} does not fit Sp({})",
        2 * genus as u64
    );
    let g = genus as usize;
    let rho: Vec<u128> = (0..g).map(|i| (g - i) as u128).collect();
    let shifted: Vec<u128> = (0..g)
        .map(|i| rho[i] + p.parts.get(i).copied().unwrap_or(0) as u128)
        .collect();

    let mut num: u128 = 1;
    let mut den: u128 = 1;
    let mut mul = |a: u128, b: u128| {
        num *= a;
        den *= b;
        let d = num.gcd(&den);
        num /= d;
        den /= d;
    };
    for i in 0..g {
        for j in i + 1..g {
            mul(
                shifted[i] * shifted[i] - shifted[j] * shifted[j],
                rho[i] * rho[i] - rho[j] * rho[j],
            );
        }
        mul(shifted[i], rho[i]);
    }
    debug_assert_eq!(den, 1);
    num / den
}

/// One summand class: a partition with an optional Tate twist `(k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub partition: Partition,
    pub twist: Option<i32>,
}

impl Term {
    pub fn new(partition: Partition, twist: Option<i32>) -> Self {
        Term { partition, twist }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.partition)?;
        if let Some(t) = self.twist {
            write!(f, "({t})")?;
        }
        Ok(())
    }
}

/// A formal sum `⊕ m_i V_{μ_i}(t_i)` with positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct IrrepSum {
    terms: BTreeMap<Term, u64>,
}

impl IrrepSum {
    pub fn zero() -> Self {
        IrrepSum::default()
    }

    /// `m Q`.
    pub fn trivial(m: u64) -> Self {
        IrrepSum::single(Partition::trivial(), m)
    }

    pub fn single(p: Partition, m: u64) -> Self {
        IrrepSum::from_term(Term::new(p, None), m)
    }

    pub fn from_term(t: Term, m: u64) -> Self {
        let mut s = IrrepSum::zero();
        s.push(t, m);
        s
    }

    pub fn push(&mut self, t: Term, m: u64) {
        if m > 0 {
            *self.terms.entry(t).or_insert(0) += m;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Term, u64)> {
        self.terms.iter().map(|(t, &m)| (t, m))
    }

    pub fn multiplicity(&self, t: &Term) -> u64 {
        self.terms.get(t).copied().unwrap_or(0)
    }

    /// Total multiplicity, i.e. the number of irreducible summands.
    pub fn count(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn has_twists(&self) -> bool {
        self.terms.keys().any(|t| t.twist.is_some())
    }

    pub fn untwisted(&self) -> IrrepSum {
        let mut out = IrrepSum::zero();
        for (t, m) in self.terms() {
            out.push(Term::new(t.partition.clone(), None), m);
        }
        out
    }

    /// Rank of the local system over `A_genus`.
    pub fn dimension(&self, genus: u32) -> u128 {
        self.terms()
            .map(|(t, m)| m as u128 * weyl_dimension(&t.partition, genus))
            .sum()
    }

    pub fn fits_genus(&self, genus: u32) -> bool {
        self.terms.keys().all(|t| t.partition.fits_genus(genus))
    }

    pub fn scale(&self, factor: u64) -> IrrepSum {
        let mut out = IrrepSum::zero();
        for (t, m) in self.terms() {
            out.push(t.clone(), m * factor);
        }
        out
    }

    /// Equality with twists compared only when both sides carry them.
    pub fn equivalent(&self, other: &IrrepSum) -> bool {
        if self.has_twists() && other.has_twists() {
            self == other
        } else {
            self.untwisted() == other.untwisted()
        }
    }

    /// Termwise `self / c`, if every multiplicity is divisible by `c`.
    pub fn divide(&self, c: u64) -> Option<IrrepSum> {
        if c == 0 {
            return None;
        }
        let mut out = IrrepSum::zero();
        for (t, m) in self.terms() {
            if m % c != 0 {
                return None;
            }
            out.push(t.clone(), m / c);
        }
        Some(out)
    }
}

impl fmt::Display for IrrepSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (t, m)) in self.terms().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m > 1 {
                write!(f, "{m} ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl std::ops::Add for &IrrepSum {
    type Output = IrrepSum;

    fn add(self, rhs: &IrrepSum) -> IrrepSum {
        sum_add(self, rhs)
    }
}

impl std::ops::AddAssign<&IrrepSum> for IrrepSum {
    fn add_assign(&mut self, rhs: &IrrepSum) {
        for (t, m) in rhs.terms() {
            self.push(t.clone(), m);
        }
    }
}

impl FromIterator<(Term, u64)> for IrrepSum {
    fn from_iter<I: IntoIterator<Item = (Term, u64)>>(iter: I) -> Self {
        let mut s = IrrepSum::zero();
        for (t, m) in iter {
            s.push(t, m);
        }
        s
    }
}

pub fn sum_add(a: &IrrepSum, b: &IrrepSum) -> IrrepSum {
    let mut out = a.clone();
    out += b;
    out
}

/// Termwise `a - b`; fails if `b` is not contained in `a`.
pub fn sum_subtract(a: &IrrepSum, b: &IrrepSum) -> Result<IrrepSum> {
    let mut out = a.clone();
    for (t, m) in b.terms() {
        let have = out.multiplicity(t);
        if have < m {
            return Err(Error::NegativeMultiplicity {
                missing: IrrepSum::from_term(t.clone(), m - have).to_string(),
                context: format!("{a} - {b}"),
            });
        }
        if have == m {
            out.terms.remove(t);
        } else {
            out.terms.insert(t.clone(), have - m);
        }
    }
    Ok(out)
}

/// Termwise minimum: what a maximal-rank map between the two kills.
pub fn sum_min(a: &IrrepSum, b: &IrrepSum) -> IrrepSum {
    a.terms()
        .map(|(t, m)| (t.clone(), m.min(b.multiplicity(t))))
        .collect()
}

/// `Λ^q V_1` for `Sp(2g)`: `V_{1^q} ⊕ V_{1^{q-2}} ⊕ …`, with `q > g` read
/// off from `2g - q`.
pub fn exterior_power_decomposition(g: u32, q: i64) -> Result<IrrepSum> {
    if q < 0 || q > 2 * g as i64 {
        return Err(Error::OutOfRange { q, max: 2 * g });
    }
    let q = q as u32;
    let q = if q > g { 2 * g - q } else { q };
    Ok((0..=q / 2)
        .map(|i| (Term::new(Partition::column((q - 2 * i) as usize), None), 1))
        .collect())
}

/// Symplectic representations are self-dual; only the twists flip sign.
pub fn dual(a: &IrrepSum) -> IrrepSum {
    a.terms()
        .map(|(t, m)| (Term::new(t.partition.clone(), t.twist.map(|w| -w)), m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(parts: &[u32]) -> Partition {
        Partition::from_parts(parts).unwrap()
    }

    fn q(m: u64) -> IrrepSum {
        IrrepSum::trivial(m)
    }

    fn sys(parts: &[u32]) -> IrrepSum {
        IrrepSum::single(v(parts), 1)
    }

    #[test]
    fn normalize_drops_zero_rows() {
        assert_eq!(partition_normalize(&[1, 1, 0], 3).unwrap(), v(&[1, 1]));
        assert_eq!(partition_normalize(&[2, 2], 2).unwrap().parts(), &[2, 2]);
        assert_eq!(
            partition_normalize(&[0, 0], 2).unwrap(),
            Partition::trivial()
        );
    }

    #[test]
    fn normalize_rejects_bad_shapes() {
        assert!(matches!(
            partition_normalize(&[1, 1, 1], 2),
            Err(Error::TooManyRows {
                rows: 3,
                genus: 2,
                ..
            })
        ));
        assert!(matches!(
            partition_normalize(&[1, 2], 3),
            Err(Error::NonMonotone { .. })
        ));
        assert!(matches!(
            partition_normalize(&[1, 0, 1], 3),
            Err(Error::NonMonotone { .. })
        ));
        assert!(matches!(
            partition_normalize(&[-1], 3),
            Err(Error::NonMonotone { .. })
        ));
    }

    #[test]
    fn weyl_small_cases() {
        for g in 1..6 {
            assert_eq!(weyl_dimension(&Partition::trivial(), g), 1);
            assert_eq!(weyl_dimension(&v(&[1]), g), 2 * g as u128);
        }
        assert_eq!(weyl_dimension(&v(&[1, 1]), 2), 5);
        assert_eq!(weyl_dimension(&v(&[2]), 1), 3);
        // Sym^2 of the standard rep is the adjoint: dim g(2g+1).
        assert_eq!(weyl_dimension(&v(&[2]), 3), 21);
        assert_eq!(weyl_dimension(&v(&[2, 2]), 2), 14);
    }

    #[test]
    fn add_subtract_min_examples() {
        assert_eq!(sum_add(&q(1), &q(1)), q(2));
        assert_eq!(
            sum_add(&(&sys(&[1, 1]) + &q(1)), &q(1)),
            &sys(&[1, 1]) + &q(2)
        );
        assert_eq!(sum_add(&IrrepSum::zero(), &sys(&[2])), sys(&[2]));

        assert_eq!(
            sum_subtract(&(&sys(&[1, 1]) + &q(2)), &q(1)).unwrap(),
            &sys(&[1, 1]) + &q(1)
        );
        let x = &sys(&[2, 2]) + &q(3);
        assert!(sum_subtract(&x, &x).unwrap().is_zero());
        assert!(matches!(
            sum_subtract(&q(1), &sys(&[1, 1])),
            Err(Error::NegativeMultiplicity { .. })
        ));

        assert_eq!(sum_min(&(&q(2) + &sys(&[1, 1])), &q(1)), q(1));
        assert!(sum_min(&x, &IrrepSum::zero()).is_zero());
        let a = &q(1) + &sys(&[1, 1]);
        let b = &a + &sys(&[1, 1, 1]);
        assert_eq!(sum_min(&a, &b), a);
    }

    #[test]
    fn exterior_powers() {
        assert_eq!(exterior_power_decomposition(3, 0).unwrap(), q(1));
        for g in 2..8 {
            assert_eq!(
                exterior_power_decomposition(g, 2).unwrap(),
                &sys(&[1, 1]) + &q(1)
            );
        }
        assert_eq!(
            exterior_power_decomposition(3, 4).unwrap(),
            &sys(&[1, 1]) + &q(1)
        );
        let l3 = exterior_power_decomposition(3, 3).unwrap();
        assert_eq!(l3, &sys(&[1, 1, 1]) + &sys(&[1]));
        assert_eq!(l3.dimension(3), 20);
        assert!(matches!(
            exterior_power_decomposition(3, 7),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            exterior_power_decomposition(3, -1),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn duality() {
        assert_eq!(dual(&sys(&[1, 1])), sys(&[1, 1]));
        assert!(dual(&IrrepSum::zero()).is_zero());
        let twisted = IrrepSum::from_term(Term::new(v(&[2]), Some(-2)), 1);
        assert_eq!(dual(&twisted).terms().next().unwrap().0.twist, Some(2));
        assert_eq!(dual(&dual(&twisted)), twisted);
    }

    #[test]
    fn twist_sensitive_equality_only_when_both_sides_twisted() {
        let a = IrrepSum::from_term(Term::new(v(&[2]), Some(-2)), 1);
        let b = IrrepSum::from_term(Term::new(v(&[2]), Some(-1)), 1);
        assert!(!a.equivalent(&b));
        assert!(a.equivalent(&sys(&[2])));
        assert!(sys(&[2]).equivalent(&b));
    }

    #[test]
    fn display_orders_larger_systems_first() {
        let s = &(&sys(&[2, 2]) + &sys(&[1, 1])) + &q(2);
        assert_eq!(s.to_string(), "V[2,2] + V[1,1] + 2 Q");
        assert_eq!(IrrepSum::zero().to_string(), "0");
        let t = IrrepSum::from_term(Term::new(v(&[2]), Some(-2)), 1);
        assert_eq!(t.to_string(), "V[2](-2)");
    }
}
