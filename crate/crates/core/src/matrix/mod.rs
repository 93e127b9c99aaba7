//! Dense row-major matrices, strided quadrant views and the element-wise
//! block operations the recursive kernels are built from.

mod io;
mod ops;
mod view;

use std::fmt::{Debug, Display};
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use num_traits::Signed;

use crate::error::{dim_err, Result};

pub use io::{read_matrix, write_matrix};
pub use ops::{block_add, max_abs_diff, pad_to_order, pad_to_pow2, unpad, Operand, Sign};
pub(crate) use view::views_alias;
pub use view::{MatrixView, MatrixViewMut};

/// Element type of a matrix: a signed ring with a text representation.
///
/// Integers give bit-exact arithmetic for oracle comparisons; floats exercise
/// the tolerance paths.
pub trait Scalar: Copy + PartialOrd + Debug + Display + FromStr + Signed + Send + Sync + 'static {
    /// Text form used by the matrix file writer.
    fn to_text(self) -> String;
}

macro_rules! int_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn to_text(self) -> String {
                self.to_string()
            }
        }
    )*};
}

macro_rules! real_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            // 17 significant digits: one before the point, sixteen after.
            fn to_text(self) -> String {
                format!("{:.16e}", self)
            }
        }
    )*};
}

int_scalar!(i32, i64, i128);
real_scalar!(f32, f64);

/// Dense matrix stored row-major in one contiguous buffer.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    /// Wraps row-major `data`. Both extents must be positive and
    /// `data.len() == rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return dim_err(format!("matrix extents must be positive, got {rows}x{cols}"));
        }
        if data.len() != rows * cols {
            return dim_err(format!(
                "{rows}x{cols} matrix needs {} elements, got {}",
                rows * cols,
                data.len()
            ));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; every row must have the same length.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return dim_err(format!("row {i} has {} entries, expected {cols}", r.len()));
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    /// # Panics
    /// If either extent is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix extents must be positive");
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, order, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "matrix extents must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square_pow2(&self) -> bool {
        self.rows == self.cols && self.rows.is_power_of_two()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self[(i, j)] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn view(&self) -> MatrixView<'_, T> {
        MatrixView::from_slice(&self.data, self.rows, self.cols)
    }

    pub fn view_mut(&mut self) -> MatrixViewMut<'_, T> {
        MatrixViewMut::from_slice(&mut self.data, self.rows, self.cols)
    }

    /// Read-only window of `rows x cols` starting at `(row_off, col_off)`.
    pub fn submatrix(
        &self,
        row_off: usize,
        col_off: usize,
        rows: usize,
        cols: usize,
    ) -> Result<MatrixView<'_, T>> {
        self.view().submatrix(row_off, col_off, rows, cols)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Debug> Debug for Matrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in self.data.chunks(self.cols) {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_rejects_bad_lengths() {
        assert!(Matrix::new(2, 2, vec![1i64, 2, 3]).is_err());
        assert!(Matrix::<i64>::new(0, 2, vec![]).is_err());
        assert!(Matrix::from_rows(&[vec![1i64, 2], vec![3]]).is_err());
    }

    #[test]
    fn identity_and_indexing() {
        let id = Matrix::<i64>::identity(3);
        assert_eq!(id[(1, 1)], 1);
        assert_eq!(id[(1, 2)], 0);
        let m = Matrix::from_rows(&[[1i64, 2, 3], [4, 5, 6]]).unwrap();
        assert_eq!(m.row(1), &[4, 5, 6]);
        assert_eq!(m.transpose().shape(), (3, 2));
        assert_eq!(m.transpose()[(2, 1)], 6);
    }

    #[test]
    fn real_text_has_17_significant_digits() {
        let s = (0.1f64).to_text();
        let mantissa = s.split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 17);
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
    }
}
