use std::marker::PhantomData;

use super::{Matrix, Scalar};
use crate::error::{dim_err, Result};

/// Non-owning read-only window into row-major storage.
///
/// Element `(i, j)` lives at `ptr + i * stride + j`. Views are `Copy`; the
/// lifetime ties them to the borrowed storage.
#[derive(Clone, Copy)]
pub struct MatrixView<'a, T> {
    ptr: *const T,
    rows: usize,
    cols: usize,
    stride: usize,
    _marker: PhantomData<&'a T>,
}

/// Non-owning writable window into row-major storage.
///
/// Splitting with [`MatrixViewMut::quadrants`] yields four views over
/// disjoint elements, which is what lets the in-place schedules write into
/// input quadrants while reading their siblings.
pub struct MatrixViewMut<'a, T> {
    ptr: *mut T,
    rows: usize,
    cols: usize,
    stride: usize,
    _marker: PhantomData<&'a mut T>,
}

unsafe impl<T: Sync> Send for MatrixView<'_, T> {}
unsafe impl<T: Sync> Sync for MatrixView<'_, T> {}
unsafe impl<T: Send> Send for MatrixViewMut<'_, T> {}
unsafe impl<T: Sync> Sync for MatrixViewMut<'_, T> {}

fn check_window(
    rows: usize,
    cols: usize,
    row_off: usize,
    col_off: usize,
    sub_rows: usize,
    sub_cols: usize,
) -> Result<()> {
    if sub_rows == 0 || sub_cols == 0 {
        return dim_err("window extents must be positive");
    }
    if row_off + sub_rows > rows || col_off + sub_cols > cols {
        return dim_err(format!(
            "window {sub_rows}x{sub_cols} at ({row_off}, {col_off}) exceeds {rows}x{cols} source"
        ));
    }
    Ok(())
}

fn check_even(rows: usize, cols: usize) -> Result<()> {
    if rows % 2 != 0 || cols % 2 != 0 {
        return dim_err(format!("cannot split {rows}x{cols} view into quadrants"));
    }
    Ok(())
}

impl<'a, T: Scalar> MatrixView<'a, T> {
    pub(crate) fn from_slice(data: &'a [T], rows: usize, cols: usize) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { ptr: data.as_ptr(), rows, cols, stride: cols, _marker: PhantomData }
    }

    /// # Safety
    /// For every `i < rows`, `j < cols` the element at `ptr + i * stride + j`
    /// must be valid for reads and not mutated for `'a`.
    pub unsafe fn from_raw_parts(ptr: *const T, rows: usize, cols: usize, stride: usize) -> Self {
        Self { ptr, rows, cols, stride, _marker: PhantomData }
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

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn as_ptr(&self) -> *const T {
        self.ptr
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        unsafe { *self.ptr.add(i * self.stride + j) }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &'a [T] {
        assert!(i < self.rows);
        unsafe { std::slice::from_raw_parts(self.ptr.add(i * self.stride), self.cols) }
    }

    pub fn submatrix(self, row_off: usize, col_off: usize, rows: usize, cols: usize) -> Result<Self> {
        check_window(self.rows, self.cols, row_off, col_off, rows, cols)?;
        Ok(unsafe { self.window_unchecked(row_off, col_off, rows, cols) })
    }

    unsafe fn window_unchecked(self, row_off: usize, col_off: usize, rows: usize, cols: usize) -> Self {
        Self {
            ptr: self.ptr.add(row_off * self.stride + col_off),
            rows,
            cols,
            stride: self.stride,
            _marker: PhantomData,
        }
    }

    /// Splits into `[top-left, top-right, bottom-left, bottom-right]`.
    pub fn quadrants(self) -> Result<[Self; 4]> {
        check_even(self.rows, self.cols)?;
        let (h, w) = (self.rows / 2, self.cols / 2);
        unsafe {
            Ok([
                self.window_unchecked(0, 0, h, w),
                self.window_unchecked(0, w, h, w),
                self.window_unchecked(h, 0, h, w),
                self.window_unchecked(h, w, h, w),
            ])
        }
    }

    pub fn to_matrix(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j))
    }

    pub(crate) fn extent(&self) -> (usize, usize) {
        let start = self.ptr as usize;
        let last = (self.rows - 1) * self.stride + self.cols;
        (start, start + last * std::mem::size_of::<T>())
    }
}

impl<'a, T: Scalar> MatrixViewMut<'a, T> {
    pub(crate) fn from_slice(data: &'a mut [T], rows: usize, cols: usize) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { ptr: data.as_mut_ptr(), rows, cols, stride: cols, _marker: PhantomData }
    }

    /// # Safety
    /// For every `i < rows`, `j < cols` the element at `ptr + i * stride + j`
    /// must be valid for reads and writes, and not accessed through any other
    /// pointer for `'a`.
    pub unsafe fn from_raw_parts(ptr: *mut T, rows: usize, cols: usize, stride: usize) -> Self {
        Self { ptr, rows, cols, stride, _marker: PhantomData }
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

    /// Shared reborrow.
    pub fn rb(&self) -> MatrixView<'_, T> {
        MatrixView {
            ptr: self.ptr,
            rows: self.rows,
            cols: self.cols,
            stride: self.stride,
            _marker: PhantomData,
        }
    }

    /// Exclusive reborrow for a shorter lifetime.
    pub fn rb_mut(&mut self) -> MatrixViewMut<'_, T> {
        MatrixViewMut {
            ptr: self.ptr,
            rows: self.rows,
            cols: self.cols,
            stride: self.stride,
            _marker: PhantomData,
        }
    }

    pub fn into_view(self) -> MatrixView<'a, T> {
        MatrixView {
            ptr: self.ptr,
            rows: self.rows,
            cols: self.cols,
            stride: self.stride,
            _marker: PhantomData,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.rb().get(i, j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        unsafe { *self.ptr.add(i * self.stride + j) = value }
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        assert!(i < self.rows);
        unsafe { std::slice::from_raw_parts_mut(self.ptr.add(i * self.stride), self.cols) }
    }

    pub fn submatrix(self, row_off: usize, col_off: usize, rows: usize, cols: usize) -> Result<Self> {
        check_window(self.rows, self.cols, row_off, col_off, rows, cols)?;
        Ok(unsafe { self.window_unchecked(row_off, col_off, rows, cols) })
    }

    unsafe fn window_unchecked(&self, row_off: usize, col_off: usize, rows: usize, cols: usize) -> Self {
        Self {
            ptr: self.ptr.add(row_off * self.stride + col_off),
            rows,
            cols,
            stride: self.stride,
            _marker: PhantomData,
        }
    }

    /// Splits into four disjoint writable quadrants
    /// `[top-left, top-right, bottom-left, bottom-right]`.
    pub fn quadrants(self) -> Result<[Self; 4]> {
        check_even(self.rows, self.cols)?;
        let (h, w) = (self.rows / 2, self.cols / 2);
        // The four windows cover disjoint elements, so handing out four
        // exclusive views is sound.
        unsafe {
            Ok([
                self.window_unchecked(0, 0, h, w),
                self.window_unchecked(0, w, h, w),
                self.window_unchecked(h, 0, h, w),
                self.window_unchecked(h, w, h, w),
            ])
        }
    }

    pub fn copy_from(&mut self, src: MatrixView<'_, T>) -> Result<()> {
        if src.shape() != self.shape() {
            return dim_err(format!("copy {:?} into {:?}", src.shape(), self.shape()));
        }
        for i in 0..self.rows {
            self.row_mut(i).copy_from_slice(src.row(i));
        }
        Ok(())
    }

    pub fn fill(&mut self, value: T) {
        for i in 0..self.rows {
            self.row_mut(i).fill(value);
        }
    }
}

/// True when the element ranges spanned by two views intersect. Coarse: it
/// compares address ranges, so interleaved but disjoint quadrants of one
/// parent can report an overlap.
pub(crate) fn ranges_overlap<T: Scalar>(a: MatrixView<'_, T>, b: MatrixView<'_, T>) -> bool {
    let (a0, a1) = a.extent();
    let (b0, b1) = b.extent();
    a0 < b1 && b0 < a1
}

/// Exact disjointness test for two strided windows: true when some element
/// address is shared.
pub(crate) fn views_alias<T: Scalar>(a: MatrixView<'_, T>, b: MatrixView<'_, T>) -> bool {
    if !ranges_overlap(a, b) {
        return false;
    }
    let size = std::mem::size_of::<T>().max(1);
    let rows_b: Vec<(usize, usize)> = (0..b.rows())
        .map(|i| {
            let s = b.row(i).as_ptr() as usize;
            (s, s + b.cols() * size)
        })
        .collect();
    (0..a.rows()).any(|i| {
        let s = a.row(i).as_ptr() as usize;
        let e = s + a.cols() * size;
        rows_b.iter().any(|&(bs, be)| s < be && bs < e)
    })
}
