//! Dense matrix kernel for grounded-Laplacian objectives.
//!
//! Everything here works on small-to-medium dense `f64` matrices: direct
//! inversion by LU with partial pivoting, the Laplacian pseudo-inverse via the
//! rank-one shift `(L + J/n)^-1 - J/n`, the first grounded inverse read
//! entrywise off the pseudo-inverse, and the rank-2 Woodbury update that
//! deletes one row/column from an already-known inverse in O(n^2).
//!
//! The row/column-removal update is the workhorse of the accelerated
//! objective oracle: once the inverse of a grounded Laplacian is known,
//! the inverse after grounding one more node never needs a fresh O(n^3)
//! factorization.

use thiserror::Error;

/// Relative pivot threshold below which LU factorization reports singularity.
pub const PIVOT_RTOL: f64 = 1e-12;

/// Relative determinant threshold for the 2x2 capacitance matrix in the
/// Woodbury removal update.
pub const CAPACITANCE_RTOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is singular (near-zero pivot at step {step})")]
    Singular { step: usize },
    #[error("removal makes matrix singular")]
    RemovalSingular,
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Row-major dense matrix of `f64`.
///
/// Entries are validated to be finite on construction; operations assume
/// (and preserve) finiteness. The 0x0 matrix is legal and has trace 0.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major data, rejecting NaN/Inf entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        assert_eq!(data.len(), rows * cols, "data length must be rows*cols");
        for (idx, &v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(LinalgError::NonFinite {
                    row: idx / cols.max(1),
                    col: idx % cols.max(1),
                });
            }
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds from nested row slices; panics on ragged input (test helper).
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self::new(r, c, data).expect("finite entries")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Sum of the diagonal. Defined as 0 for the 0x0 matrix.
    pub fn trace(&self) -> f64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Naive row-major matrix product (i-k-j loop order).
    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            });
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a_ik = self.get(i, k);
                if a_ik == 0.0 {
                    continue;
                }
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                let oth_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(oth_row) {
                    *o += a_ik * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, factor: f64) -> DenseMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// Largest absolute entry (0 for empty matrices).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        debug_assert_eq!(self.rows, other.rows);
        debug_assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    /// Swaps row `i` with row `j` and column `i` with column `j` in place.
    ///
    /// This is the shared permutation step used by both the pseudo-inverse
    /// grounding path and the Woodbury removal path; applying it twice is the
    /// identity.
    pub fn swap_row_col(&mut self, i: usize, j: usize) {
        debug_assert!(self.is_square());
        debug_assert!(i < self.rows && j < self.rows);
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// Returns a copy with row `m` and column `m` removed, remaining indices
    /// in their original (stable) order. The 1x1 case yields the 0x0 matrix.
    pub fn delete_row_col(&self, m: usize) -> Result<DenseMatrix> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if m >= self.rows {
            return Err(LinalgError::IndexOutOfRange {
                index: m,
                dim: self.rows,
            });
        }
        let n = self.rows;
        let mut out = DenseMatrix::zeros(n - 1, n - 1);
        let mut oi = 0;
        for i in 0..n {
            if i == m {
                continue;
            }
            let mut oj = 0;
            for j in 0..n {
                if j == m {
                    continue;
                }
                out.data[oi * (n - 1) + oj] = self.get(i, j);
                oj += 1;
            }
            oi += 1;
        }
        Ok(out)
    }

    /// Direct inverse by LU factorization with partial pivoting.
    ///
    /// Reports `Singular` when a pivot falls below `PIVOT_RTOL` relative to
    /// the largest entry of the input. The 0x0 matrix inverts to itself.
    pub fn inverse(&self) -> Result<DenseMatrix> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(DenseMatrix::zeros(0, 0));
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            return Err(LinalgError::Singular { step: 0 });
        }
        let threshold = PIVOT_RTOL * scale;

        // LU decomposition of a copy, tracking row permutation.
        let mut lu = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_val = lu[k * n + k].abs();
            for r in (k + 1)..n {
                let v = lu[r * n + k].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = r;
                }
            }
            if pivot_val <= threshold {
                return Err(LinalgError::Singular { step: k });
            }
            if pivot_row != k {
                for c in 0..n {
                    lu.swap(k * n + c, pivot_row * n + c);
                }
                perm.swap(k, pivot_row);
            }
            let pivot = lu[k * n + k];
            for r in (k + 1)..n {
                let factor = lu[r * n + k] / pivot;
                lu[r * n + k] = factor;
                if factor != 0.0 {
                    let (head, tail) = lu.split_at_mut(r * n);
                    let pivot_row_slice = &head[k * n + k + 1..k * n + n];
                    let target = &mut tail[k + 1..n];
                    for (t, &p) in target.iter_mut().zip(pivot_row_slice) {
                        *t -= factor * p;
                    }
                }
            }
        }

        // Solve A X = I column by column: forward then backward substitution.
        let mut inv = vec![0.0; n * n];
        let mut y = vec![0.0; n];
        for col in 0..n {
            for i in 0..n {
                let mut sum = if perm[i] == col { 1.0 } else { 0.0 };
                for j in 0..i {
                    sum -= lu[i * n + j] * y[j];
                }
                y[i] = sum;
            }
            for i in (0..n).rev() {
                let mut sum = y[i];
                for j in (i + 1)..n {
                    sum -= lu[i * n + j] * inv[j * n + col];
                }
                inv[i * n + col] = sum / lu[i * n + i];
            }
        }
        Ok(DenseMatrix {
            rows: n,
            cols: n,
            data: inv,
        })
    }
}

impl std::fmt::Display for DenseMatrix {
    /// Plain row-per-line text format for debugging fixtures.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v}")).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Moore-Penrose pseudo-inverse of a connected-graph Laplacian via the
/// rank-one shift `(L + J/n)^-1 - J/n`, where `J` is the all-ones matrix.
///
/// The shifted matrix is singular exactly when the graph is disconnected,
/// in which case the `Singular` error propagates.
pub fn pinv_laplacian(l_mat: &DenseMatrix) -> Result<DenseMatrix> {
    if !l_mat.is_square() {
        return Err(LinalgError::NotSquare {
            rows: l_mat.rows(),
            cols: l_mat.cols(),
        });
    }
    let n = l_mat.rows();
    let inv_n = 1.0 / n as f64;
    let mut shifted = l_mat.clone();
    for v in shifted.data.iter_mut() {
        *v += inv_n;
    }
    let mut pinv = shifted.inverse()?;
    for v in pinv.data.iter_mut() {
        *v -= inv_n;
    }
    Ok(pinv)
}

/// Inverse of the Laplacian grounded at node `m`, read entrywise off the
/// pseudo-inverse: `[L_m^-1]_xy = Ld_xy - Ld_xm - Ld_my + Ld_mm`.
///
/// Removal of an arbitrary `m` reduces to the last-index formula by the
/// row/column interchange convention; the surviving indices come back in
/// stable (increasing) order. Costs O(n^2).
pub fn ground_from_pinv(l_pinv: &DenseMatrix, m: usize) -> Result<DenseMatrix> {
    if !l_pinv.is_square() {
        return Err(LinalgError::NotSquare {
            rows: l_pinv.rows(),
            cols: l_pinv.cols(),
        });
    }
    let n = l_pinv.rows();
    if m >= n {
        return Err(LinalgError::IndexOutOfRange { index: m, dim: n });
    }
    let corner = l_pinv.get(m, m);
    let mut out = DenseMatrix::zeros(n - 1, n - 1);
    let mut oi = 0;
    for x in 0..n {
        if x == m {
            continue;
        }
        let col_x = l_pinv.get(x, m);
        let mut oj = 0;
        for y in 0..n {
            if y == m {
                continue;
            }
            out.data[oi * (n - 1) + oj] = l_pinv.get(x, y) - col_x - l_pinv.get(m, y) + corner;
            oj += 1;
        }
        oi += 1;
    }
    Ok(out)
}

/// Rank-2 factors that zero the last row and column of a matrix (except the
/// corner element) when added as `U * V^T`.
///
/// Both factors are stored as `l x 2` matrices; `corner` is the `(l-1, l-1)`
/// entry preserved by the update, and `removed_index` records which original
/// index the removal targets.
#[derive(Debug, Clone)]
pub struct WoodburyUpdate {
    pub u_factor: DenseMatrix,
    pub v_factor: DenseMatrix,
    pub corner: f64,
    pub removed_index: usize,
}

impl WoodburyUpdate {
    /// Builds the update for a matrix whose row/column to remove has already
    /// been swapped into the last position.
    pub fn for_swapped(a_prime: &DenseMatrix, removed_index: usize) -> Self {
        let l = a_prime.rows();
        debug_assert!(l >= 1);
        let last = l - 1;
        let corner = a_prime.get(last, last);
        // U columns: e_last and the last column with its corner zeroed.
        // V columns: -(last row with corner zeroed) and -e_last, so that
        // A' + U V^T clears the last row and column but keeps the corner.
        let mut u = DenseMatrix::zeros(l, 2);
        let mut v = DenseMatrix::zeros(l, 2);
        u.set(last, 0, 1.0);
        v.set(last, 1, -1.0);
        for i in 0..last {
            u.set(i, 1, a_prime.get(i, last));
            v.set(i, 0, -a_prime.get(last, i));
        }
        Self {
            u_factor: u,
            v_factor: v,
            corner,
            removed_index,
        }
    }

    /// `A' + U V^T`, for checking the zeroing invariant.
    pub fn apply_to(&self, a_prime: &DenseMatrix) -> Result<DenseMatrix> {
        let uv = self.u_factor.matmul(&self.v_factor.transpose())?;
        a_prime.add(&uv)
    }
}

/// Inverse of `a` with row and column `m` removed, computed from the known
/// inverse `a_inv` via the rank-2 Woodbury identity instead of a fresh
/// factorization.
///
/// Conceptually: swap row/column `m` to the last position, add the rank-2
/// update that zeroes the last row/column, expand the inverse of the update
/// through the Woodbury identity, truncate the last row/column, and map the
/// survivors back to stable order. The swap is a symmetric permutation, so
/// it is applied implicitly here: the pulled-back factors read directly off
/// row and column `m` (`u1 = e_m`, `u2 = column m with entry m zeroed`,
/// `v1 = -(row m with entry m zeroed)`, `v2 = -e_m`), which also lets the
/// factor products skip their zero entries. The dominant cost is the final
/// rank-2 correction, about `2 l^2` multiplications.
pub fn woodbury_remove(a_inv: &DenseMatrix, a: &DenseMatrix, m: usize) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() != a_inv.rows() || a.cols() != a_inv.cols() {
        return Err(LinalgError::DimensionMismatch {
            left: format!("{}x{}", a_inv.rows(), a_inv.cols()),
            right: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    let l = a.rows();
    if m >= l {
        return Err(LinalgError::IndexOutOfRange { index: m, dim: l });
    }

    // Nonzero entries of column m and row m of `a` (entry m excluded).
    let mut col_nz: Vec<(usize, f64)> = Vec::new();
    let mut row_nz: Vec<(usize, f64)> = Vec::new();
    for i in 0..l {
        if i == m {
            continue;
        }
        let cv = a.get(i, m);
        if cv != 0.0 {
            col_nz.push((i, cv));
        }
        let rv = a.get(m, i);
        if rv != 0.0 {
            row_nz.push((i, rv));
        }
    }

    // p = A^-1 u1 (column m of the inverse), q = A^-1 u2,
    // r^T = v1^T A^-1, s^T = v2^T A^-1 (negated row m of the inverse).
    let mut p = vec![0.0; l];
    let mut q = vec![0.0; l];
    for i in 0..l {
        let inv_row = a_inv.row(i);
        p[i] = inv_row[m];
        let mut qi = 0.0;
        for &(j, w) in &col_nz {
            qi += inv_row[j] * w;
        }
        q[i] = qi;
    }
    let mut r = vec![0.0; l];
    for &(i, w) in &row_nz {
        let inv_row = a_inv.row(i);
        for (rj, &aij) in r.iter_mut().zip(inv_row) {
            *rj -= w * aij;
        }
    }
    let s: Vec<f64> = a_inv.row(m).iter().map(|&x| -x).collect();

    // Capacitance C = I + V^T A^-1 U (2x2); its second row comes from
    // v2 = -e_m directly.
    let mut c00 = 1.0;
    let mut c01 = 0.0;
    for &(i, w) in &row_nz {
        c00 -= w * p[i];
        c01 -= w * q[i];
    }
    let c10 = -p[m];
    let c11 = 1.0 - q[m];
    let det = c00 * c11 - c01 * c10;
    let c_scale = c00.abs().max(c01.abs()).max(c10.abs()).max(c11.abs()).max(1.0);
    if det.abs() <= CAPACITANCE_RTOL * c_scale * c_scale {
        return Err(LinalgError::RemovalSingular);
    }
    let ci = [[c11 / det, -c01 / det], [-c10 / det, c00 / det]];

    // B^-1 = A^-1 - [p q] C^-1 [r; s], restricted to the survivors.
    let last = l - 1;
    let mut out = DenseMatrix::zeros(last, last);
    let mut oi = 0;
    for i in 0..l {
        if i == m {
            continue;
        }
        let pp = p[i] * ci[0][0] + q[i] * ci[1][0];
        let qq = p[i] * ci[0][1] + q[i] * ci[1][1];
        let inv_row = a_inv.row(i);
        let out_row = &mut out.data[oi * last..(oi + 1) * last];
        let mut oj = 0;
        for j in 0..l {
            if j == m {
                continue;
            }
            out_row[oj] = inv_row[j] - pp * r[j] - qq * s[j];
            oj += 1;
        }
        oi += 1;
    }
    Ok(out)
}
