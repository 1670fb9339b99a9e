//! Integer matrices of `σw⁻¹ − 1` on the character lattice.
//!
//! Coordinates: `ν₁, …, ν_l` is the orthonormal basis in which Weyl group
//! elements are signed permutation matrices. The rows of the transition
//! matrix `S` are the simple roots `ν_i − ν_{i+1}` and `ν_{l-1} + ν_l`; the
//! columns of `S⁻¹` are the fundamental weights. A signed permutation matrix
//! `R` becomes `S R S⁻¹` on the weight lattice, and the torus attached to a
//! class is the cokernel of `q S R S⁻¹ − E`.
//!
//! Besides that main matrix this module builds the auxiliary matrices used
//! to reduce it by hand (`J`, `B`, `P_{εk}`, the twisted Frobenius `M`), and
//! the reduced bordered matrix whose diagonal block is
//! `diag(q^{l_k} − ε_k)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use crate::matrix::{HalfIntMatrix, IntMatrix};
use crate::weyl::{block_representative, permutation_matrix, standard_representative, Sign, SignedCycleType, SignedPermutation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("rank l = {0} is too small, need l >= 2")]
    RankTooSmall(usize),
    #[error("q = {0} is too small, need q >= 2")]
    QTooSmall(u64),
    #[error("type {0} has a single part; the bordered reduction needs at least two (pipeline-degenerate)")]
    PipelineDegenerate(String),
    #[error("conjugated matrix is not integral")]
    NotIntegral,
    #[error("matrix must be a square signed permutation matrix")]
    NotMonomial,
}

fn check_rank(l: usize) -> Result<(), LatticeError> {
    if l < 2 {
        Err(LatticeError::RankTooSmall(l))
    } else {
        Ok(())
    }
}

fn check_q(q: u64) -> Result<BigInt, LatticeError> {
    if q < 2 {
        Err(LatticeError::QTooSmall(q))
    } else {
        Ok(BigInt::from(q))
    }
}

/// `S`: rows `(1,-1,0,…)`, …, `(…,1,-1)`, `(…,1,1)`. Determinant 2.
pub fn transition_matrix(l: usize) -> Result<IntMatrix, LatticeError> {
    check_rank(l)?;
    let mut s = IntMatrix::zeros(l, l);
    for i in 0..l - 1 {
        s[(i, i)] = BigInt::one();
        s[(i, i + 1)] = -BigInt::one();
    }
    s[(l - 1, l - 2)] = BigInt::one();
    s[(l - 1, l - 1)] = BigInt::one();
    Ok(s)
}

/// `S⁻¹`, whose columns are the fundamental weights in `ν` coordinates:
/// `ω_i = ν₁ + … + ν_i` for `i ≤ l−2`, `ω_{l−1} = ½(ν₁ + … + ν_{l−1} − ν_l)`,
/// `ω_l = ½(ν₁ + … + ν_l)`.
pub fn inverse_transition(l: usize) -> Result<HalfIntMatrix, LatticeError> {
    check_rank(l)?;
    let mut twice = IntMatrix::zeros(l, l);
    for col in 0..l - 2 {
        for row in 0..=col {
            twice[(row, col)] = BigInt::from(2);
        }
    }
    for row in 0..l {
        twice[(row, l - 2)] = BigInt::from(if row + 1 < l { 1 } else { -1 });
        twice[(row, l - 1)] = BigInt::one();
    }
    Ok(HalfIntMatrix::from_numerators(twice))
}

/// `S R S⁻¹` for a signed permutation matrix `R`: the same element acting on
/// the weight lattice in the basis of fundamental weights.
pub fn weight_basis_matrix(r: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    if !r.is_signed_monomial() {
        return Err(LatticeError::NotMonomial);
    }
    let l = r.rows();
    let s = transition_matrix(l)?;
    let s_inv = inverse_transition(l)?;
    s_inv.left_mul(&(&s * r)).to_integral().ok_or(LatticeError::NotIntegral)
}

/// `q S R S⁻¹ − E` for an arbitrary signed permutation.
pub fn torus_matrix_of(p: &SignedPermutation, q: u64) -> Result<IntMatrix, LatticeError> {
    let q = check_q(q)?;
    let w = weight_basis_matrix(&permutation_matrix(p))?;
    let l = w.rows();
    Ok(w.scale(&q).checked_sub(&IntMatrix::identity(l)).expect("square"))
}

/// The torus matrix `q S R S⁻¹ − E` of a class, `R` the matrix of its
/// standard representative. `|det| = ∏ (q^{l_k} − ε_k)`.
pub fn torus_matrix(t: &SignedCycleType, q: u64) -> Result<IntMatrix, LatticeError> {
    check_rank(t.rank())?;
    torus_matrix_of(&standard_representative(t), q)
}

/// The Frobenius of the twisted form on the root lattice: `q·E` with the
/// trailing `2×2` block replaced by `[[0, q], [q, 0]]`.
pub fn twist_matrix(l: usize, q: u64) -> Result<IntMatrix, LatticeError> {
    check_rank(l)?;
    let q = check_q(q)?;
    let mut m = IntMatrix::zeros(l, l);
    for i in 0..l - 2 {
        m[(i, i)] = q.clone();
    }
    m[(l - 2, l - 1)] = q.clone();
    m[(l - 1, l - 2)] = q;
    Ok(m)
}

/// `J`: zero except for a last column of ones. `J² = J` and
/// `(E + J)⁻¹ = E − ½J`.
pub fn j_matrix(l: usize) -> IntMatrix {
    let mut j = IntMatrix::zeros(l, l);
    for i in 0..l {
        j[(i, l - 1)] = BigInt::one();
    }
    j
}

/// `B`: zero outside the last block-column (width `l₋₁`, the last part),
/// whose `i`-th block is
///
/// ```text
/// ε₋₁ 0 … 0 −(1+ε₋₁)/2
/// …
/// ε₋₁ 0 … 0 −(ε_i+ε₋₁)/2     (last row of the block)
/// ```
///
/// When `l₋₁ = 1` the first and last columns coincide and the entries add,
/// which gives the degenerate column forms; `l_i = 1` keeps only the last row.
pub fn b_matrix(t: &SignedCycleType) -> IntMatrix {
    let l = t.rank();
    let last = *t.parts().last().expect("nonempty type");
    let e_last = last.sign.value();
    let first_col = l - last.length;
    let mut b = IntMatrix::zeros(l, l);
    let mut row = 0;
    for part in t.parts() {
        for k in 0..part.length {
            b[(row, first_col)] += BigInt::from(e_last);
            let corner = if k + 1 < part.length {
                -(1 + e_last) / 2
            } else {
                -(part.sign.value() + e_last) / 2
            };
            b[(row, l - 1)] += BigInt::from(corner);
            row += 1;
        }
    }
    b
}

/// Checks `q(E+J)R(E−½J) − E = qR − E + qB` exactly, `R` the block sum
/// `⊕ R_{ε_i l_i}` (split labels are ignored).
pub fn orm1_check(t: &SignedCycleType, q: u64) -> Result<bool, LatticeError> {
    let l = t.rank();
    check_rank(l)?;
    let qb = check_q(q)?;
    let e = IntMatrix::identity(l);
    let j = j_matrix(l);
    let r = permutation_matrix(&block_representative(t));
    let e_plus_j = e.checked_add(&j).expect("square");
    // E − ½J as numerators over 2
    let half_inverse = HalfIntMatrix::from_numerators(e.scale(&BigInt::from(2)).checked_sub(&j).expect("square"));
    let lhs = half_inverse
        .left_mul(&(&e_plus_j * &r))
        .scale(&qb)
        .sub(&HalfIntMatrix::from_int(&e));
    let rhs = r
        .scale(&qb)
        .checked_sub(&e)
        .and_then(|m| m.checked_add(&b_matrix(t).scale(&qb)))
        .expect("square");
    Ok(lhs == HalfIntMatrix::from_int(&rhs))
}

/// `P_{εk}`: unit upper-triangular powers of `q` in the first `k−1`
/// rows, last row `(q, q², …, q^{k−1}, ε)`.
pub fn p_block(eps: Sign, k: usize, q: u64) -> IntMatrix {
    let q = BigInt::from(q);
    let mut p = IntMatrix::zeros(k, k);
    for i in 0..k.saturating_sub(1) {
        for j in i..k - 1 {
            p[(i, j)] = Pow::pow(&q, (j - i) as u32);
        }
    }
    for j in 0..k.saturating_sub(1) {
        p[(k - 1, j)] = Pow::pow(&q, (j + 1) as u32);
    }
    p[(k - 1, k - 1)] = BigInt::from(eps.value());
    p
}

/// `P'_{εk}`: `P_{εk}` with its last row replaced by `(0, …, 0, ε)`.
pub fn p_block_last(eps: Sign, k: usize, q: u64) -> IntMatrix {
    let mut p = p_block(eps, k, q);
    for j in 0..k - 1 {
        p[(k - 1, j)] = BigInt::zero();
    }
    p
}

/// The left multiplier `diag(P_{ε₁l₁}, …, P_{ε₋₂l₋₂}, P'_{ε₋₁l₋₁})` that
/// turns `qR − E + qB` into a matrix with unit columns outside the bordered
/// core.
pub fn pipeline_left_multiplier(t: &SignedCycleType, q: u64) -> IntMatrix {
    let n = t.parts().len();
    let blocks: Vec<IntMatrix> = t
        .parts()
        .iter()
        .enumerate()
        .map(|(idx, p)| {
            if idx + 1 == n {
                p_block_last(p.sign, p.length, q)
            } else {
                p_block(p.sign, p.length, q)
            }
        })
        .collect();
    IntMatrix::block_diagonal(&blocks)
}

/// `q^lo + … + q^hi`, zero when `lo > hi`.
fn power_sum(q: &BigInt, lo: usize, hi: usize) -> BigInt {
    (lo..=hi).map(|t| Pow::pow(q, t as u32)).sum()
}

fn exact_half(v: BigInt) -> BigInt {
    let (quo, rem) = v.div_rem(&BigInt::from(2));
    assert!(rem.is_zero(), "odd numerator in a half-integer formula");
    quo
}

/// The bordered matrix left after clearing the unit rows and columns:
///
/// ```text
/// [ D | a_i  b_i ]                 [ D | a_i + b_i ]
/// [ 0 | a    b   ]        or       [ 0 | q − ε₋₁   ]
/// [ 0 | 2q  −q−ε₋₁ ]
/// ```
///
/// for `l₋₁ > 1` and `l₋₁ = 1` respectively, where the last canonical part
/// plays the role of index `−1`, `D = diag(q^{l_i} − ε_i)` over the other
/// parts, and
///
/// ```text
/// a_i = ε₋₁(ε_i q + q² + … + q^{l_i})
/// b_i = −((1 + ε₋₁ε_i) q + (1 + ε₋₁)(q² + … + q^{l_i})) / 2
/// a   = −1 + ε₋₁(q + … + q^{l₋₁−1})
/// b   = −(1 + ε₋₁)(q + … + q^{l₋₁−1}) / 2 + q^{l₋₁−1}
/// ```
///
/// The `+q^{l₋₁−1}` term in `b` is what the elimination actually produces;
/// with the opposite sign the determinant is `3q^{l₋₁} + ε₋₁` instead of
/// `±(q^{l₋₁} − ε₋₁)`.
pub fn orm2_matrix(t: &SignedCycleType, q: u64) -> Result<IntMatrix, LatticeError> {
    check_rank(t.rank())?;
    let qb = check_q(q)?;
    let parts = t.parts();
    if parts.len() < 2 {
        return Err(LatticeError::PipelineDegenerate(t.to_string()));
    }
    let (last, others) = parts.split_last().expect("at least two parts");
    let e_last = BigInt::from(last.sign.value());
    let one = BigInt::one();
    let m = others.len();

    let a_i = |l_i: usize, e_i: i64| &e_last * (BigInt::from(e_i) * &qb + power_sum(&qb, 2, l_i));
    let b_i = |l_i: usize, e_i: i64| {
        let lead = (&one + &e_last * BigInt::from(e_i)) * &qb;
        let tail = (&one + &e_last) * power_sum(&qb, 2, l_i);
        -exact_half(lead + tail)
    };

    if last.length > 1 {
        let g = power_sum(&qb, 1, last.length - 1);
        let a = -&one + &e_last * &g;
        let b = -exact_half((&one + &e_last) * &g) + Pow::pow(&qb, (last.length - 1) as u32);
        let mut out = IntMatrix::zeros(m + 2, m + 2);
        for (i, p) in others.iter().enumerate() {
            let e_i = p.sign.value();
            out[(i, i)] = Pow::pow(&qb, p.length as u32) - e_i;
            out[(i, m)] = a_i(p.length, e_i);
            out[(i, m + 1)] = b_i(p.length, e_i);
        }
        out[(m, m)] = a;
        out[(m, m + 1)] = b;
        out[(m + 1, m)] = BigInt::from(2) * &qb;
        out[(m + 1, m + 1)] = -&qb - &e_last;
        Ok(out)
    } else {
        let mut out = IntMatrix::zeros(m + 1, m + 1);
        for (i, p) in others.iter().enumerate() {
            let e_i = p.sign.value();
            out[(i, i)] = Pow::pow(&qb, p.length as u32) - e_i;
            out[(i, m)] = a_i(p.length, e_i) + b_i(p.length, e_i);
        }
        out[(m, m)] = &qb - &e_last;
        Ok(out)
    }
}
