//! Hypercube geometry: face signatures of `x ∈ [0, ½]ⁿ`, the rescaled
//! deformation matrix `Σ` on `M ⊔ R`, and the four-case fiber catalog.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::SkewMatrix;
use crate::numerics::Real;

/// Float coordinates within this distance of `0` or `½` snap to the boundary.
pub const X_SNAP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Block {
    L,
    M,
    R,
}

/// A hypercube point with its partition `L = {x_i = 0}`, `M = {0 < x_i < ½}`,
/// `R = {x_i = ½}`. Indices are 0-based and ascending.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberPoint {
    pub x: Vec<Real>,
    #[serde(rename = "L")]
    pub l: Vec<usize>,
    #[serde(rename = "M")]
    pub m: Vec<usize>,
    #[serde(rename = "R")]
    pub r: Vec<usize>,
}

fn classify_coordinate(v: &Real) -> Result<Block> {
    let half = Real::ratio(1, 2);
    match v {
        Real::Exact(_) => {
            if v.is_negative() || v.cmp_value(&half).is_gt() {
                Err(Error::Domain(format!("coordinate {v} outside [0, 1/2]")))
            } else if v.is_zero() {
                Ok(Block::L)
            } else if *v == half {
                Ok(Block::R)
            } else {
                Ok(Block::M)
            }
        }
        Real::Approx(f) => {
            if !f.is_finite() || *f < -X_SNAP || *f > 0.5 + X_SNAP {
                Err(Error::Domain(format!("coordinate {f} outside [0, 1/2]")))
            } else if f.abs() <= X_SNAP {
                Ok(Block::L)
            } else if (f - 0.5).abs() <= X_SNAP {
                Ok(Block::R)
            } else {
                Ok(Block::M)
            }
        }
    }
}

pub fn face_signature(x: &[Real]) -> Result<FiberPoint> {
    let mut p = FiberPoint { x: x.to_vec(), l: vec![], m: vec![], r: vec![] };
    for (i, v) in x.iter().enumerate() {
        match classify_coordinate(v)? {
            Block::L => p.l.push(i),
            Block::M => p.m.push(i),
            Block::R => p.r.push(i),
        }
    }
    Ok(p)
}

impl FiberPoint {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// `(|L|, |M|, |R|)`.
    pub fn signature(&self) -> (usize, usize, usize) {
        (self.l.len(), self.m.len(), self.r.len())
    }

    pub fn block_of(&self, i: usize) -> Block {
        if self.l.contains(&i) {
            Block::L
        } else if self.m.contains(&i) {
            Block::M
        } else {
            Block::R
        }
    }

    /// `M ⊔ R` in the order used for `Σ`: `M` ascending, then `R` ascending.
    pub fn m_then_r(&self) -> Vec<usize> {
        self.m.iter().chain(&self.r).copied().collect()
    }

    /// The coordinate as it enters square roots: snapped to `0` or `½` on
    /// the boundary.
    pub fn coordinate(&self, i: usize) -> Real {
        match self.block_of(i) {
            Block::L => Real::zero(),
            Block::R => Real::ratio(1, 2),
            Block::M => self.x[i],
        }
    }
}

/// Principal submatrix `(Θ_S)_{ab} = Θ_{S(a), S(b)}`.
pub fn theta_restrict(theta: &SkewMatrix, s: &[usize]) -> Result<SkewMatrix> {
    theta.restrict(s)
}

/// `Σ` on `M ⊔ R` (ordered `M` then `R`): `4Θ` on `M×M`, `2Θ` on mixed
/// pairs, `Θ` on `R×R`.
pub fn sigma_matrix(theta: &SkewMatrix, m: &[usize], r: &[usize]) -> Result<SkewMatrix> {
    if let Some(i) = m.iter().find(|i| r.contains(i)) {
        return Err(Error::Domain(format!("index {} is in both M and R", i + 1)));
    }
    let order: Vec<usize> = m.iter().chain(r).copied().collect();
    let base = theta.restrict(&order)?;
    let in_m = |a: usize| a < m.len();
    Ok(base.map(|a, b, v| match (in_m(a), in_m(b)) {
        (true, true) => v.scale(4),
        (false, false) => v,
        _ => v.scale(2),
    }))
}

/// `rank K₀ = 2^{m+r−1}` for `m + r > 1`.
pub fn k0_rank(signature: (usize, usize, usize)) -> Result<u64> {
    let (_, m, r) = signature;
    if m + r <= 1 {
        return Err(Error::NotApplicable(format!(
            "m + r = {} ≤ 1: the fiber is a matrix algebra over a commutative algebra",
            m + r
        )));
    }
    Ok(1u64 << (m + r - 1))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiberDescriptor {
    pub point: FiberPoint,
    pub signature: (usize, usize, usize),
    pub case_tag: u8,
    pub clifford_rank: usize,
    pub sigma: SkewMatrix,
    pub k0_rank: Option<u64>,
    pub algebra: String,
}

pub fn fiber_descriptor(theta: &SkewMatrix, x: &[Real]) -> Result<FiberDescriptor> {
    let n = theta.n();
    if x.len() != n {
        return Err(Error::DimensionMismatch(format!("{} coordinates for n = {n}", x.len())));
    }
    let point = face_signature(x)?;
    let (l, m, r) = point.signature();
    let sigma = sigma_matrix(theta, &point.m, &point.r)?;
    let (case_tag, clifford_rank, algebra) = if m + r >= 2 {
        let rank = 2 * (l + m);
        let clifford = if rank == 0 { String::new() } else { format!("Cl_{rank} ⊗ ") };
        (1, rank, format!("{clifford}C(T^{}_Σ)", m + r))
    } else if m == 1 {
        (2, 2 * n, format!("Cl_{} ⊗ C(T)", 2 * n))
    } else if r == 1 {
        let rank = 2 * n - 2;
        let algebra = if rank == 0 { "C(T)".to_string() } else { format!("Cl_{rank} ⊗ C(T)") };
        (3, rank, algebra)
    } else {
        (4, 2 * n, format!("Cl_{}", 2 * n))
    };
    let k0_rank = (case_tag == 1).then(|| k0_rank(point.signature())).transpose()?;
    Ok(FiberDescriptor { point, signature: (l, m, r), case_tag, clifford_rank, sigma, k0_rank, algebra })
}
