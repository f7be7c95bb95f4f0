//! Dense tensor values at a point: shapes, index bookkeeping, and the
//! algebraic operations the connection and curvature modules are built from.
//!
//! Index convention, used by the whole crate: components are stored
//! row-major with all contravariant (upper) slots first, then all covariant
//! (lower) slots. A `(1,2)` tensor `T^a_bc` in dimension `n` stores
//! `T[a][b][c]` at linear index `(a*n + b)*n + c`.

use crate::chart::{MAX_DIM, MIN_DIM};
use crate::error::{Error, Result};

/// Highest supported total rank; `R^l_ijk` is the largest object needed,
/// plus one derivative slot on a rank-2 field.
pub const MAX_RANK: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorShape {
    contravariant: usize,
    covariant: usize,
    dimension: usize,
}

impl TensorShape {
    pub fn new(contravariant: usize, covariant: usize, dimension: usize) -> Result<Self> {
        if contravariant + covariant > MAX_RANK {
            return Err(Error::shape(format!(
                "rank {} exceeds supported maximum {MAX_RANK}",
                contravariant + covariant
            )));
        }
        if !(MIN_DIM..=MAX_DIM).contains(&dimension) {
            return Err(Error::shape(format!(
                "dimension {dimension} outside supported range {MIN_DIM}..={MAX_DIM}"
            )));
        }
        Ok(TensorShape {
            contravariant,
            covariant,
            dimension,
        })
    }

    pub fn contravariant_rank(&self) -> usize {
        self.contravariant
    }

    pub fn covariant_rank(&self) -> usize {
        self.covariant
    }

    pub fn rank(&self) -> usize {
        self.contravariant + self.covariant
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Total component count `n^(p+q)`.
    pub fn len(&self) -> usize {
        self.dimension.pow(self.rank() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false // a scalar still has one component
    }

    /// Shape with one more covariant slot (a derivative slot).
    pub fn with_extra_covariant(&self) -> Result<TensorShape> {
        TensorShape::new(self.contravariant, self.covariant + 1, self.dimension)
    }

    pub fn linear(&self, indices: &[usize]) -> usize {
        debug_assert_eq!(indices.len(), self.rank());
        let mut flat = 0;
        for &i in indices {
            debug_assert!(i < self.dimension);
            flat = flat * self.dimension + i;
        }
        flat
    }

    /// Inverse of [`linear`](Self::linear); fills `out[..rank]`.
    pub fn unravel(&self, mut flat: usize, out: &mut [usize; MAX_RANK]) {
        let rank = self.rank();
        for slot in (0..rank).rev() {
            out[slot] = flat % self.dimension;
            flat /= self.dimension;
        }
    }
}

/// Dense component values of a tensor at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorComponents {
    shape: TensorShape,
    data: Vec<f64>,
}

impl TensorComponents {
    /// Build from raw data; rejects length mismatches and non-finite entries.
    pub fn new(shape: TensorShape, data: Vec<f64>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(Error::shape(format!(
                "data length {} does not match shape size {}",
                data.len(),
                shape.len()
            )));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                context: "tensor components".into(),
            });
        }
        Ok(TensorComponents { shape, data })
    }

    pub fn zeros(shape: TensorShape) -> Self {
        TensorComponents {
            data: vec![0.0; shape.len()],
            shape,
        }
    }

    /// Scalar (rank-0) value on a chart of the given dimension.
    pub fn scalar(value: f64, dimension: usize) -> Result<Self> {
        TensorComponents::new(TensorShape::new(0, 0, dimension)?, vec![value])
    }

    /// The mixed `(1,1)` identity `δ^a_b`.
    pub fn identity_mixed(dimension: usize) -> Result<Self> {
        let shape = TensorShape::new(1, 1, dimension)?;
        let mut t = TensorComponents::zeros(shape);
        for a in 0..dimension {
            t.data[a * dimension + a] = 1.0;
        }
        Ok(t)
    }

    pub fn shape(&self) -> TensorShape {
        self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, indices: &[usize]) -> f64 {
        self.data[self.shape.linear(indices)]
    }

    pub fn set(&mut self, indices: &[usize], value: f64) {
        let i = self.shape.linear(indices);
        self.data[i] = value;
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn add(&self, other: &TensorComponents) -> Result<TensorComponents> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TensorComponents) -> Result<TensorComponents> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: f64) -> TensorComponents {
        TensorComponents {
            shape: self.shape,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &TensorComponents,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<TensorComponents> {
        if self.shape != other.shape {
            return Err(Error::shape("shape mismatch in tensor arithmetic"));
        }
        Ok(TensorComponents {
            shape: self.shape,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }

    /// Contract one contravariant slot against one covariant slot.
    ///
    /// `upper_slot` counts within the contravariant group (`< p`),
    /// `lower_slot` within the covariant group (`< q`). The result drops
    /// both slots and sums the paired index over the chart dimension.
    pub fn contract(&self, upper_slot: usize, lower_slot: usize) -> Result<TensorComponents> {
        let (p, q, n) = (
            self.shape.contravariant_rank(),
            self.shape.covariant_rank(),
            self.shape.dimension(),
        );
        if upper_slot >= p {
            return Err(Error::shape(format!(
                "upper slot {upper_slot} out of range for contravariant rank {p}"
            )));
        }
        if lower_slot >= q {
            return Err(Error::shape(format!(
                "lower slot {lower_slot} out of range for covariant rank {q}"
            )));
        }
        let out_shape = TensorShape::new(p - 1, q - 1, n)?;
        let mut out = TensorComponents::zeros(out_shape);
        let mut out_idx = [0usize; MAX_RANK];
        let mut in_idx = [0usize; MAX_RANK];
        for flat in 0..out_shape.len() {
            out_shape.unravel(flat, &mut out_idx);
            // out uppers: 0..p-1 map to input uppers skipping upper_slot;
            // out lowers likewise.
            let mut sum = 0.0;
            for k in 0..n {
                let mut src = 0;
                for slot in 0..p {
                    use std::cmp::Ordering::*;
                    in_idx[slot] = match slot.cmp(&upper_slot) {
                        Less => out_idx[src],
                        Equal => k,
                        Greater => out_idx[src],
                    };
                    if slot != upper_slot {
                        src += 1;
                    }
                }
                for slot in 0..q {
                    use std::cmp::Ordering::*;
                    in_idx[p + slot] = match slot.cmp(&lower_slot) {
                        Less => out_idx[src],
                        Equal => k,
                        Greater => out_idx[src],
                    };
                    if slot != lower_slot {
                        src += 1;
                    }
                }
                sum += self.data[self.shape.linear(&in_idx[..p + q])];
            }
            out.data[flat] = sum;
        }
        Ok(out)
    }

    /// Tensor product; the result's contravariant slots are `self`'s
    /// followed by `other`'s, and likewise for the covariant slots.
    pub fn tensor_product(&self, other: &TensorComponents) -> Result<TensorComponents> {
        let n = self.shape.dimension();
        if n != other.shape.dimension() {
            return Err(Error::shape(format!(
                "dimension mismatch: {} vs {}",
                n,
                other.shape.dimension()
            )));
        }
        let (pa, qa) = (self.shape.contravariant_rank(), self.shape.covariant_rank());
        let (pb, qb) = (
            other.shape.contravariant_rank(),
            other.shape.covariant_rank(),
        );
        let out_shape = TensorShape::new(pa + pb, qa + qb, n)?;
        let mut out = TensorComponents::zeros(out_shape);
        let mut out_idx = [0usize; MAX_RANK];
        let mut a_idx = [0usize; MAX_RANK];
        let mut b_idx = [0usize; MAX_RANK];
        for flat in 0..out_shape.len() {
            out_shape.unravel(flat, &mut out_idx);
            a_idx[..pa].copy_from_slice(&out_idx[..pa]);
            b_idx[..pb].copy_from_slice(&out_idx[pa..pa + pb]);
            a_idx[pa..pa + qa].copy_from_slice(&out_idx[pa + pb..pa + pb + qa]);
            b_idx[pb..pb + qb].copy_from_slice(&out_idx[pa + pb + qa..pa + pb + qa + qb]);
            out.data[flat] = self.data[self.shape.linear(&a_idx[..pa + qa])]
                * other.data[other.shape.linear(&b_idx[..pb + qb])];
        }
        Ok(out)
    }

    /// `T` minus `T` with slots `slot_a` and `slot_b` swapped (unnormalized).
    ///
    /// Slots are global positions (contravariant first); both must have the
    /// same variance.
    pub fn antisymmetrize_pair(&self, slot_a: usize, slot_b: usize) -> Result<TensorComponents> {
        let p = self.shape.contravariant_rank();
        let rank = self.shape.rank();
        if slot_a >= rank || slot_b >= rank {
            return Err(Error::shape(format!(
                "slot pair ({slot_a}, {slot_b}) out of range for rank {rank}"
            )));
        }
        if slot_a == slot_b {
            return Err(Error::shape("antisymmetrization slots must differ"));
        }
        if (slot_a < p) != (slot_b < p) {
            return Err(Error::shape(
                "antisymmetrization slots must have the same variance",
            ));
        }
        let mut out = TensorComponents::zeros(self.shape);
        let mut idx = [0usize; MAX_RANK];
        for flat in 0..self.shape.len() {
            self.shape.unravel(flat, &mut idx);
            idx.swap(slot_a, slot_b);
            let swapped = self.shape.linear(&idx[..rank]);
            out.data[flat] = self.data[flat] - self.data[swapped];
        }
        Ok(out)
    }
}
