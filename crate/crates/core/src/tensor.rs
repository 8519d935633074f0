//! Dense real and complex matrices with deterministic kernels.
//!
//! Shapes are row-major and immutable after construction. Complex data is
//! stored as separate real/imaginary planes, which keeps the training hot
//! path (real-valued activations against complex weights) on plain `f64`
//! arithmetic; element accessors present ordinary complex entries.
//!
//! All reductions run in a fixed order (sequentially over the summation
//! index), so results are bit-stable across runs and thread counts.

use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

/// Dense row-major matrix of complex numbers.
///
/// Storage is planar: one contiguous buffer holding the full real plane
/// followed by the full imaginary plane. Training exploits the layout by
/// treating the weight matrix as a stacked `2 rows x cols` real matrix in
/// a single GEMM call.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTensor {
    rows: usize,
    cols: usize,
    /// `rows*cols` real parts, then `rows*cols` imaginary parts.
    data: Vec<f64>,
}

impl ComplexTensor {
    /// All-zero tensor of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexTensor {
            rows,
            cols,
            data: vec![0.0; 2 * rows * cols],
        }
    }

    /// Builds a tensor from a row-major slice of complex entries.
    pub fn from_entries(rows: usize, cols: usize, entries: &[Complex]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::shape(
                "ComplexTensor::from_entries",
                format!("{} entries", rows * cols),
                format!("{}", entries.len()),
            ));
        }
        let mut t = ComplexTensor::zeros(rows, cols);
        let n = rows * cols;
        for (i, z) in entries.iter().enumerate() {
            t.data[i] = z.re;
            t.data[n + i] = z.im;
        }
        Ok(t)
    }

    /// Builds a tensor by evaluating `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut t = ComplexTensor::zeros(rows, cols);
        let n = rows * cols;
        for r in 0..rows {
            for c in 0..cols {
                let z = f(r, c);
                t.data[r * cols + c] = z.re;
                t.data[n + r * cols + c] = z.im;
            }
        }
        t
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        ComplexTensor::from_fn(n, n, |r, c| {
            if r == c {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        })
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

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        let idx = row * self.cols + col;
        Complex::new(self.data[idx], self.data[self.len() + idx])
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex) {
        let n = self.len();
        let idx = row * self.cols + col;
        self.data[idx] = value.re;
        self.data[n + idx] = value.im;
    }

    /// Row-major iterator over complex entries.
    pub fn entries(&self) -> impl Iterator<Item = Complex> + '_ {
        let (re, im) = self.data.split_at(self.len());
        re.iter()
            .zip(im.iter())
            .map(|(&re, &im)| Complex::new(re, im))
    }

    /// Real plane, row-major.
    pub fn re_plane(&self) -> &[f64] {
        &self.data[..self.len()]
    }

    /// Imaginary plane, row-major.
    pub fn im_plane(&self) -> &[f64] {
        &self.data[self.len()..]
    }

    /// Both planes as one `2 rows x cols` stacked real matrix (real rows
    /// first).
    pub fn stacked_planes(&self) -> &[f64] {
        &self.data
    }

    pub fn stacked_planes_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Sum over rows of `|entry|^2`, one value per column.
    ///
    /// Used by the photon accounting: column `i` holds the squared-magnitude
    /// weight load seen by input `i`.
    pub fn column_norms_sq(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for r in 0..2 * self.rows {
            let base = r * self.cols;
            for c in 0..self.cols {
                let v = self.data[base + c];
                out[c] += v * v;
            }
        }
        out
    }
}

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealTensor {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealTensor {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RealTensor {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(
                "RealTensor::from_data",
                format!("{} entries", rows * cols),
                format!("{}", data.len()),
            ));
        }
        Ok(RealTensor { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let data = (0..rows * cols)
            .map(|i| f(i / cols, i % cols))
            .collect();
        RealTensor { rows, cols, data }
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

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col] = value;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

/// Complex matrix-vector product `W x`, summing inputs in index order.
pub fn matvec(w: &ComplexTensor, x: &[Complex]) -> Result<Vec<Complex>> {
    if x.len() != w.cols {
        return Err(Error::shape(
            "matvec",
            format!("vector of length {}", w.cols),
            format!("{}", x.len()),
        ));
    }
    let (re, im) = w.data.split_at(w.rows * w.cols);
    let mut out = Vec::with_capacity(w.rows);
    for r in 0..w.rows {
        let base = r * w.cols;
        let mut acc_re = 0.0;
        let mut acc_im = 0.0;
        for c in 0..w.cols {
            let wr = re[base + c];
            let wi = im[base + c];
            let xr = x[c].re;
            let xi = x[c].im;
            acc_re += wr * xr - wi * xi;
            acc_im += wr * xi + wi * xr;
        }
        out.push(Complex::new(acc_re, acc_im));
    }
    Ok(out)
}

/// `W x` for a real input vector; the common case in network inference,
/// where activations are real-valued.
pub fn matvec_real_input(w: &ComplexTensor, x: &[f64]) -> Result<Vec<Complex>> {
    if x.len() != w.cols {
        return Err(Error::shape(
            "matvec_real_input",
            format!("vector of length {}", w.cols),
            format!("{}", x.len()),
        ));
    }
    let (re, im) = w.data.split_at(w.rows * w.cols);
    let mut out = Vec::with_capacity(w.rows);
    for r in 0..w.rows {
        let base = r * w.cols;
        let mut acc_re = 0.0;
        let mut acc_im = 0.0;
        for (c, &xc) in x.iter().enumerate() {
            acc_re += re[base + c] * xc;
            acc_im += im[base + c] * xc;
        }
        out.push(Complex::new(acc_re, acc_im));
    }
    Ok(out)
}

/// Real matrix-vector product.
pub fn matvec_real(w: &RealTensor, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != w.cols {
        return Err(Error::shape(
            "matvec_real",
            format!("vector of length {}", w.cols),
            format!("{}", x.len()),
        ));
    }
    let mut out = Vec::with_capacity(w.rows);
    for r in 0..w.rows {
        let mut acc = 0.0;
        for (c, &xc) in x.iter().enumerate() {
            acc += w.data[r * w.cols + c] * xc;
        }
        out.push(acc);
    }
    Ok(out)
}
