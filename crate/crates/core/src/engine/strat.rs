use crate::error::{Error, Result};

/// `Sat_g = A_g ⊔ A_{g-1} ⊔ … ⊔ A_0` with `dim A_k = k(k+1)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratification {
    pub genus: u32,
    /// `s_k` for `k = 0..=g`.
    pub strata_dims: Vec<u32>,
    /// `n = s_g`.
    pub dim: u32,
    /// Complex fiber dimension over `A_k` for `k < g`.
    pub fiber_dims: Vec<u32>,
}

impl Stratification {
    pub fn s(&self, k: u32) -> u32 {
        self.strata_dims[k as usize]
    }

    /// Complex codimension `n - s_k`; new systems over `A_k` are symmetric about it.
    pub fn codim(&self, k: u32) -> u32 {
        self.dim - self.s(k)
    }

    /// Real dimension of the link of `A_k` in the closure of `A_r`.
    pub fn link_dim(&self, k: u32, r: u32) -> u32 {
        link_dim(self.s(k), self.s(r))
    }

    /// Highest link degree that reaches the fiber, `s_r - s_k - 1`.
    pub fn link_truncation(&self, k: u32, r: u32) -> u32 {
        self.s(r) - self.s(k) - 1
    }
}

pub(crate) fn link_dim(sk: u32, sr: u32) -> u32 {
    2 * (sr - sk) - 1
}

pub fn stratum_dim(k: u32) -> u32 {
    k * (k + 1) / 2
}

pub fn make_stratification(g: u32, fiber_dims: &[i64]) -> Result<Stratification> {
    if g == 0 {
        return Err(Error::BadDims("genus must be positive".into()));
    }
    if fiber_dims.len() != g as usize {
        return Err(Error::BadDims(format!(
            "genus {g} needs {g} fiber dimensions, got {}",
            fiber_dims.len()
        )));
    }
    let fiber_dims = fiber_dims
        .iter()
        .enumerate()
        .map(|(k, &f)| {
            u32::try_from(f)
                .map_err(|_| Error::BadDims(format!("fiber over A_{k} has dimension {f}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let strata_dims: Vec<u32> = (0..=g).map(stratum_dim).collect();
    Ok(Stratification {
        genus: g,
        dim: strata_dims[g as usize],
        strata_dims,
        fiber_dims,
    })
}

/// `max_k (2 f_k + s_k - n)`, floored at 0 (the open stratum contributes 0).
pub fn defect(strat: &Stratification) -> u32 {
    strat
        .fiber_dims
        .iter()
        .enumerate()
        .map(|(k, &f)| (2 * f + strat.s(k as u32)) as i64 - strat.dim as i64)
        .max()
        .unwrap_or(0)
        .max(0) as u32
}
