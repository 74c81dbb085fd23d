//! Graded dimensions of the tautological ring `R_g = Q[λ_1, …, λ_g]` modulo
//! its single relation. As a vector space it has the basis `Π λ_i^{ε_i}`,
//! `ε_i ∈ {0, 1}`, with `λ_i` in cohomological degree `2i`.

use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TautBasisElement {
    pub subset: BTreeSet<u32>,
    pub degree: u32,
}

/// Socle degree `g(g+1)`.
pub fn socle_degree(g: u32) -> u32 {
    g * (g + 1)
}

fn mask_degree(mask: u64, g: u32) -> u32 {
    (1..=g)
        .filter(|i| mask >> (i - 1) & 1 == 1)
        .map(|i| 2 * i)
        .sum()
}

pub fn taut_basis(g: u32) -> Vec<TautBasisElement> {
    assert!((1..64).contains(&g), "genus {g} out of range");
    (0..1u64 << g)
        .map(|mask| TautBasisElement {
            subset: (1..=g).filter(|i| mask >> (i - 1) & 1 == 1).collect(),
            degree: mask_degree(mask, g),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedDims {
    pub dims: Vec<u64>,
}

impl GradedDims {
    pub fn get(&self, j: usize) -> u64 {
        self.dims.get(j).copied().unwrap_or(0)
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    /// Row in the `j | r^j` layout used for Betti tables.
    pub fn render(&self) -> String {
        let width = self
            .dims
            .iter()
            .map(|d| d.to_string().len())
            .max()
            .unwrap_or(1)
            .max(2);
        let mut head = String::from("  j |");
        let mut row = String::from("r^j |");
        for (j, d) in self.dims.iter().enumerate() {
            head.push_str(&format!(" {j:>width$}"));
            row.push_str(&format!(" {d:>width$}"));
        }
        format!("{head}\n{row}\n")
    }
}

/// `dims[j] = #{S ⊆ {1..g} : 2·ΣS = j}`, by enumerating subsets.
pub fn taut_graded_dims(g: u32) -> GradedDims {
    assert!((1..=30).contains(&g), "genus {g} out of range");
    let mut dims = vec![0u64; socle_degree(g) as usize + 1];
    for mask in 0..1u64 << g {
        dims[mask_degree(mask, g) as usize] += 1;
    }
    GradedDims { dims }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingReport {
    pub genus: u32,
    /// `(j, dims[j], dims[g(g+1) - j])` for every degree.
    pub per_degree: Vec<(u32, u64, u64)>,
    /// Every basis element's complement has the complementary degree.
    pub complement_ok: bool,
}

impl PairingReport {
    pub fn passed(&self) -> bool {
        self.complement_ok && self.per_degree.iter().all(|&(_, a, b)| a == b)
    }
}

/// Checks that `ε ↦ 1 - ε` pairs the basis into the socle degree.
pub fn pairing_check(g: u32) -> PairingReport {
    let top = socle_degree(g);
    let full = (1u64 << g) - 1;
    let complement_ok =
        (0..1u64 << g).all(|mask| mask_degree(mask, g) + mask_degree(full ^ mask, g) == top);
    let dims = taut_graded_dims(g);
    let per_degree = (0..=top)
        .map(|j| (j, dims.get(j as usize), dims.get((top - j) as usize)))
        .collect();
    PairingReport {
        genus: g,
        per_degree,
        complement_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_degrees() {
        let b1: Vec<u32> = taut_basis(1).iter().map(|e| e.degree).collect();
        assert_eq!(b1, vec![0, 2]);
        let mut b2: Vec<u32> = taut_basis(2).iter().map(|e| e.degree).collect();
        b2.sort();
        assert_eq!(b2, vec![0, 2, 4, 6]);
        let mut b3: Vec<u32> = taut_basis(3).iter().map(|e| e.degree).collect();
        b3.sort();
        assert_eq!(b3, vec![0, 2, 4, 6, 6, 8, 10, 12]);
    }

    #[test]
    fn graded_dims_low_genus() {
        assert_eq!(taut_graded_dims(2).dims, vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(
            taut_graded_dims(3).dims,
            vec![1, 0, 1, 0, 1, 0, 2, 0, 1, 0, 1, 0, 1]
        );
        let even: Vec<u64> = taut_graded_dims(4)
            .dims
            .iter()
            .step_by(2)
            .copied()
            .collect();
        assert_eq!(even, vec![1, 1, 1, 2, 2, 2, 2, 2, 1, 1, 1]);
    }

    #[test]
    fn pairing() {
        assert!(pairing_check(1).passed());
        let r4 = pairing_check(4);
        assert!(r4.passed());
        assert_eq!(r4.per_degree.len(), 21);
        let start = std::time::Instant::now();
        assert!(pairing_check(16).passed());
        assert!(start.elapsed().as_secs_f64() < 1.0);
    }

    #[test]
    fn render_layout() {
        assert_eq!(
            taut_graded_dims(1).render(),
            "  j |  0  1  2\nr^j |  1  0  1\n"
        );
    }
}
