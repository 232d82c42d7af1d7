//! Complex banded LU factorization and substitution for bandwidths 1 and 2.
//!
//! Doolittle factorization without pivoting; the Cayley matrices
//! `1 + i H dt / 2 hbar` are strongly diagonally dominant for the regimes
//! here, so pivoting is unnecessary. Reciprocal pivots are cached because the
//! back substitution runs once per time step.

use num_complex::Complex64;

use crate::error::{Error, Result};

const PIVOT_FLOOR: f64 = 1e-300;

/// LU factors of a tridiagonal matrix with constant off-diagonal `b` and
/// varying diagonal `a_j`.
#[derive(Debug, Clone)]
pub struct TriLU {
    /// L sub-diagonal multipliers, length n-1 (l[j] couples row j+1 to row j).
    l: Vec<Complex64>,
    /// Reciprocals of the U diagonal, length n.
    d_inv: Vec<Complex64>,
    /// U super-diagonal (equals b everywhere for these systems).
    u: Complex64,
}

impl TriLU {
    pub fn factor(diag: &[Complex64], b: Complex64) -> Result<Self> {
        let n = diag.len();
        let mut l = vec![Complex64::ZERO; n.saturating_sub(1)];
        let mut d_inv = vec![Complex64::ZERO; n];
        let mut d_prev = diag[0];
        if d_prev.norm_sqr() < PIVOT_FLOOR {
            return Err(Error::SingularFactorization { row: 0 });
        }
        d_inv[0] = d_prev.finv();
        for j in 1..n {
            let lj = b * d_inv[j - 1];
            l[j - 1] = lj;
            d_prev = diag[j] - lj * b;
            if d_prev.norm_sqr() < PIVOT_FLOOR {
                return Err(Error::SingularFactorization { row: j });
            }
            d_inv[j] = d_prev.finv();
        }
        Ok(TriLU { l, d_inv, u: b })
    }

    /// Solve `A x = rhs` in place.
    pub fn solve(&self, rhs: &mut [Complex64]) {
        let n = rhs.len();
        debug_assert_eq!(n, self.d_inv.len());
        for j in 1..n {
            let corr = self.l[j - 1] * rhs[j - 1];
            rhs[j] -= corr;
        }
        rhs[n - 1] *= self.d_inv[n - 1];
        for j in (0..n - 1).rev() {
            rhs[j] = (rhs[j] - self.u * rhs[j + 1]) * self.d_inv[j];
        }
    }
}

/// LU factors of a pentadiagonal matrix with constant off-diagonals
/// `b` (offset 1) and `c` (offset 2) and varying diagonal `a_j`.
#[derive(Debug, Clone)]
pub struct PentaLU {
    /// First sub-diagonal of L, length n-1.
    l1: Vec<Complex64>,
    /// Second sub-diagonal of L, length n-2.
    l2: Vec<Complex64>,
    /// Reciprocals of the U diagonal, length n.
    d_inv: Vec<Complex64>,
    /// First super-diagonal of U, length n-1.
    u1: Vec<Complex64>,
    /// Second super-diagonal of U (equals c), length n-2.
    u2: Complex64,
}

impl PentaLU {
    pub fn factor(diag: &[Complex64], b: Complex64, c: Complex64) -> Result<Self> {
        let n = diag.len();
        if n < 3 {
            return Err(Error::InvalidGrid(format!(
                "pentadiagonal system needs at least 3 rows, got {n}"
            )));
        }
        let mut l1 = vec![Complex64::ZERO; n - 1];
        let mut l2 = vec![Complex64::ZERO; n - 2];
        let mut d = vec![Complex64::ZERO; n];
        let mut d_inv = vec![Complex64::ZERO; n];
        let mut u1 = vec![Complex64::ZERO; n - 1];

        let check = |v: Complex64, row: usize| -> Result<Complex64> {
            if v.norm_sqr() < PIVOT_FLOOR {
                Err(Error::SingularFactorization { row })
            } else {
                Ok(v.finv())
            }
        };

        d[0] = diag[0];
        d_inv[0] = check(d[0], 0)?;
        u1[0] = b;
        l1[0] = b * d_inv[0];
        d[1] = diag[1] - l1[0] * u1[0];
        d_inv[1] = check(d[1], 1)?;
        if n > 2 {
            u1[1] = b - l1[0] * c;
        }
        for j in 2..n {
            let l2j = c * d_inv[j - 2];
            l2[j - 2] = l2j;
            let l1j = (b - l2j * u1[j - 2]) * d_inv[j - 1];
            l1[j - 1] = l1j;
            d[j] = diag[j] - l2j * c - l1j * u1[j - 1];
            d_inv[j] = check(d[j], j)?;
            if j + 1 < n {
                u1[j] = b - l1j * c;
            }
        }
        Ok(PentaLU { l1, l2, d_inv, u1, u2: c })
    }

    /// Solve `A x = rhs` in place.
    pub fn solve(&self, rhs: &mut [Complex64]) {
        let n = rhs.len();
        debug_assert_eq!(n, self.d_inv.len());
        rhs[1] = rhs[1] - self.l1[0] * rhs[0];
        for j in 2..n {
            let corr = self.l1[j - 1] * rhs[j - 1] + self.l2[j - 2] * rhs[j - 2];
            rhs[j] -= corr;
        }
        rhs[n - 1] *= self.d_inv[n - 1];
        rhs[n - 2] = (rhs[n - 2] - self.u1[n - 2] * rhs[n - 1]) * self.d_inv[n - 2];
        for j in (0..n - 2).rev() {
            rhs[j] = (rhs[j] - self.u1[j] * rhs[j + 1] - self.u2 * rhs[j + 2]) * self.d_inv[j];
        }
    }
}
