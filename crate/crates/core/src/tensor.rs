//! Finite-dimensional representation combinatorics of sl2 and osp(1|2):
//! Clebsch-Gordan decompositions, the root-of-unity truncated products, the
//! forgetful map osp(1|2) -> sl2, and the explicit-matrix osp(1|2) oracle
//! that re-derives tensor decompositions from exact kernels of the raising
//! generator.

use std::fmt;
use std::ops::Add;

use num::{One, Zero};
use thiserror::Error;

use crate::matrix::ExactMatrix;
use crate::ring::{rat_int, Rat};

/// An element of Z/2, used for osp(1|2) superscripts, super-grading of basis
/// vectors and the branch tag of weight lines.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_u32(n: u32) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn as_u32(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Parity shifted by an integer offset.
    pub fn offset(self, d: u32) -> Parity {
        Parity::from_u32(self.as_u32() + d)
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_u32(self.as_u32() + rhs.as_u32())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u32())
    }
}

/// The (n+1)-dimensional irreducible sl2-module.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Sl2Irrep(pub u32);

impl Sl2Irrep {
    pub fn dim(self) -> u64 {
        u64::from(self.0) + 1
    }
}

/// The (2n+1)-dimensional irreducible osp(1|2)-module with superscript
/// `parity` (the two parities are isomorphic up to parity change).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OspIrrep {
    pub n: u32,
    pub parity: Parity,
}

impl OspIrrep {
    pub fn new(n: u32, parity: Parity) -> Self {
        OspIrrep { n, parity }
    }

    pub fn dim(self) -> u64 {
        2 * u64::from(self.n) + 1
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TruncationError {
    #[error("index {index} exceeds the sl2 truncation bound {bound}")]
    Sl2AboveBound { index: u32, bound: u32 },
    #[error("index {index} is not below the osp truncation order {order}")]
    OspAboveOrder { index: u32, order: u32 },
}

/// Clebsch-Gordan: `V_a (x) V_b = V_{a+b} (+) V_{a+b-2} (+) ... (+) V_{|a-b|}`.
/// Returned ascending.
pub fn sl2_tensor(a: Sl2Irrep, b: Sl2Irrep) -> Vec<Sl2Irrep> {
    let lo = a.0.abs_diff(b.0);
    let hi = a.0 + b.0;
    (lo..=hi).step_by(2).map(Sl2Irrep).collect()
}

/// Kazhdan-Lusztig fusion at level `kmax`: the upper Clebsch-Gordan bound is
/// replaced by `min(2*kmax - a - b, a + b)`. For inputs within the bound the
/// range is never empty.
pub fn sl2_truncated_tensor(
    a: Sl2Irrep,
    b: Sl2Irrep,
    kmax: u32,
) -> Result<Vec<Sl2Irrep>, TruncationError> {
    for n in [a.0, b.0] {
        if n > kmax {
            return Err(TruncationError::Sl2AboveBound { index: n, bound: kmax });
        }
    }
    let lo = a.0.abs_diff(b.0);
    let hi = (2 * kmax - a.0 - b.0).min(a.0 + b.0);
    assert!(hi >= lo, "truncation bound fell below |a-b|");
    Ok((lo..=hi).step_by(2).map(Sl2Irrep).collect())
}

/// osp(1|2) tensor decomposition: indices run from `|r1-r2|` to `r1+r2` in
/// steps of 1, superscripts alternating so that both extremes carry the sum
/// of the input parities. Returned ascending.
pub fn osp_tensor(a: OspIrrep, b: OspIrrep) -> Vec<OspIrrep> {
    let lo = a.n.abs_diff(b.n);
    let hi = a.n + b.n;
    let base = a.parity + b.parity;
    (lo..=hi).map(|n| OspIrrep::new(n, base.offset(n - lo))).collect()
}

/// Root-of-unity truncation of [`osp_tensor`] at order `l`: only indices up
/// to `min(2(l-1) - r1 - r2, r1 + r2)` are kept, the non-semisimple part is
/// discarded. Parity alternates from the bottom exactly as in the full
/// product.
pub fn osp_truncated_tensor(
    a: OspIrrep,
    b: OspIrrep,
    l: u32,
) -> Result<Vec<OspIrrep>, TruncationError> {
    for n in [a.n, b.n] {
        if n >= l {
            return Err(TruncationError::OspAboveOrder { index: n, order: l });
        }
    }
    let lo = a.n.abs_diff(b.n);
    let hi = (2 * (l - 1) - a.n - b.n).min(a.n + b.n);
    assert!(hi >= lo, "truncation bound fell below |r1-r2|");
    let base = a.parity + b.parity;
    Ok((lo..=hi).map(|n| OspIrrep::new(n, base.offset(n - lo))).collect())
}

/// The forgetful functor to sl2-modules: `V_m^a -> V_m (+) V_{m-1}`, with the
/// `V_{-1}` term dropped at `m = 0`. Independent of the superscript.
pub fn osp_forget_to_sl2(a: OspIrrep) -> Vec<Sl2Irrep> {
    if a.n == 0 {
        vec![Sl2Irrep(0)]
    } else {
        vec![Sl2Irrep(a.n - 1), Sl2Irrep(a.n)]
    }
}

/// Explicit matrices for the generators of the irreducible osp(1|2)-module:
/// `x_plus`, `x_minus` odd, `h` even, satisfying the anticommutator relation
/// `x_plus x_minus + x_minus x_plus = h` exactly.
#[derive(Clone, Debug)]
pub struct OspMatrixRep {
    pub n: u32,
    pub parity: Parity,
    pub x_plus: ExactMatrix,
    pub x_minus: ExactMatrix,
    pub h: ExactMatrix,
    /// Super-degree of each basis vector; entry `i` is `(i + parity) mod 2`.
    pub parity_vector: Vec<Parity>,
}

/// Build the (2n+1)-dimensional module on basis `u_0..u_{2n}`:
/// `h u_i = (n-i) u_i`, `x_minus u_i = u_{i+1}`, `x_plus u_i = c_i u_{i-1}`
/// with `c_0 = 0` and `c_{i+1} = (n-i) - c_i`.
pub fn osp_matrix_rep(n: u32, parity: Parity) -> OspMatrixRep {
    let dim = (2 * n + 1) as usize;
    let ni = i64::from(n);
    let mut h = ExactMatrix::zeros(dim, dim);
    let mut x_minus = ExactMatrix::zeros(dim, dim);
    let mut x_plus = ExactMatrix::zeros(dim, dim);
    // c_{2j} = -j, c_{2j+1} = n - j
    let mut c = vec![Rat::zero(); dim + 1];
    for i in 0..dim {
        let weight = ni - i as i64;
        c[i + 1] = rat_int(weight) - &c[i];
        h[(i, i)] = rat_int(weight);
    }
    for i in 0..dim - 1 {
        x_minus[(i + 1, i)] = Rat::one();
    }
    for i in 1..dim {
        x_plus[(i - 1, i)] = c[i].clone();
    }
    let parity_vector =
        (0..dim).map(|i| parity.offset(i as u32)).collect();
    OspMatrixRep { n, parity, x_plus, x_minus, h, parity_vector }
}

/// Independent derivation of [`osp_tensor`]: realizes both factors by exact
/// matrices, builds the tensor-product action with the Koszul sign on the
/// second factor, and reads off one irreducible summand per kernel vector of
/// `x_plus` in each (weight, parity) subspace.
pub fn osp_tensor_oracle(a: OspIrrep, b: OspIrrep) -> Vec<OspIrrep> {
    let ra = osp_matrix_rep(a.n, a.parity);
    let rb = osp_matrix_rep(b.n, b.parity);
    let da = (2 * a.n + 1) as usize;
    let db = (2 * b.n + 1) as usize;

    // basis u_i (x) w_j, index i*db + j; weight (a.n - i) + (b.n - j)
    let weight_of = |i: usize, j: usize| -> i64 {
        i64::from(a.n) - i as i64 + i64::from(b.n) - j as i64
    };
    let parity_of =
        |i: usize, j: usize| -> Parity { ra.parity_vector[i] + rb.parity_vector[j] };

    // x_plus on the product: x+ u (x) w + (-1)^{|u|} u (x) x+ w
    // group basis indices by (weight, parity)
    let mut slots: std::collections::BTreeMap<(i64, Parity), Vec<(usize, usize)>> =
        std::collections::BTreeMap::new();
    for i in 0..da {
        for j in 0..db {
            slots.entry((weight_of(i, j), parity_of(i, j))).or_default().push((i, j));
        }
    }

    let mut out = Vec::new();
    let mut dim_check = 0u64;
    for (&(w, parity), domain) in &slots {
        // x_plus raises the weight by 1 and flips the parity
        let empty = Vec::new();
        let codomain = slots.get(&(w + 1, parity.flip())).unwrap_or(&empty);
        let col_index: std::collections::HashMap<(usize, usize), usize> =
            codomain.iter().copied().zip(0..).collect();
        let mut m = ExactMatrix::zeros(codomain.len(), domain.len());
        for (col, &(i, j)) in domain.iter().enumerate() {
            // first-factor action
            if i > 0 {
                let coeff = ra.x_plus[(i - 1, i)].clone();
                if !coeff.is_zero() {
                    let row = col_index[&(i - 1, j)];
                    m[(row, col)] += coeff;
                }
            }
            // second-factor action with the sign rule
            if j > 0 {
                let mut coeff = rb.x_plus[(j - 1, j)].clone();
                if ra.parity_vector[i] == Parity::Odd {
                    coeff = -coeff;
                }
                if !coeff.is_zero() {
                    let row = col_index[&(i, j - 1)];
                    m[(row, col)] += coeff;
                }
            }
        }
        let kernel_dim = m.kernel_basis().len();
        if w >= 0 {
            for _ in 0..kernel_dim {
                out.push(OspIrrep::new(w as u32, parity));
                dim_check += 2 * w as u64 + 1;
            }
        } else {
            assert_eq!(kernel_dim, 0, "singular vector at negative weight");
        }
    }
    out.sort();
    assert_eq!(dim_check, a.dim() * b.dim(), "summand dimensions do not add up");
    out
}
