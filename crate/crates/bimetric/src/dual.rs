//! Forward-mode dual numbers, first and second order.
//!
//! [`Jet1`] carries a value plus its gradient, [`Jet2`] additionally the full
//! Hessian. Both use fixed [`MAX_DIM`] lanes (unused lanes stay zero), so they
//! are `Copy` and allocation-free in evaluation loops.
//!
//! The value lane of every operation performs exactly the same `f64`
//! arithmetic as the plain scalar implementation, so an evaluation on jets
//! reproduces the scalar result bit for bit. Hessian updates group the two
//! `i↔j`-mirrored terms with a commutative addition before anything else
//! touches them, which keeps the stored Hessian symmetric bit for bit.

use crate::chart::MAX_DIM;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic shared by `f64`, [`Jet1`] and [`Jet2`]; lets one generic
/// evaluator serve plain evaluation and both derivative orders.
pub(crate) trait DualNum:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    /// Seed for coordinate `axis` with value `x` (derivative lanes get the
    /// corresponding unit vector).
    fn coordinate(x: f64, axis: usize) -> Self;
    fn value(&self) -> f64;
    fn all_finite(&self) -> bool;

    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn tan(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn powi(self, k: i32) -> Self;
    fn powf(self, e: f64) -> Self;
}

impl DualNum for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn coordinate(x: f64, _axis: usize) -> Self {
        x
    }
    fn value(&self) -> f64 {
        *self
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn tan(self) -> Self {
        f64::tan(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    fn powi(self, k: i32) -> Self {
        f64::powi(self, k)
    }
    fn powf(self, e: f64) -> Self {
        f64::powf(self, e)
    }
}

/// First-order dual number: value and gradient.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Jet1 {
    pub v: f64,
    pub d: [f64; MAX_DIM],
}

impl Jet1 {
    pub fn new(v: f64, d: [f64; MAX_DIM]) -> Self {
        Jet1 { v, d }
    }

    /// Chain rule for a unary map with derivative `f1` at the value.
    fn chain(self, fv: f64, f1: f64) -> Jet1 {
        let mut d = [0.0; MAX_DIM];
        for i in 0..MAX_DIM {
            d[i] = f1 * self.d[i];
        }
        Jet1 { v: fv, d }
    }
}

impl Add for Jet1 {
    type Output = Jet1;
    fn add(self, o: Jet1) -> Jet1 {
        let mut d = [0.0; MAX_DIM];
        for i in 0..MAX_DIM {
            d[i] = self.d[i] + o.d[i];
        }
        Jet1 { v: self.v + o.v, d }
    }
}

impl Sub for Jet1 {
    type Output = Jet1;
    fn sub(self, o: Jet1) -> Jet1 {
        let mut d = [0.0; MAX_DIM];
        for i in 0..MAX_DIM {
            d[i] = self.d[i] - o.d[i];
        }
        Jet1 { v: self.v - o.v, d }
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, o: Jet1) -> Jet1 {
        let mut d = [0.0; MAX_DIM];
        for i in 0..MAX_DIM {
            d[i] = self.d[i] * o.v + self.v * o.d[i];
        }
        Jet1 { v: self.v * o.v, d }
    }
}

impl Div for Jet1 {
    type Output = Jet1;
    fn div(self, o: Jet1) -> Jet1 {
        let q = self.v / o.v;
        let mut d = [0.0; MAX_DIM];
        for i in 0..MAX_DIM {
            d[i] = (self.d[i] - q * o.d[i]) / o.v;
        }
        Jet1 { v: q, d }
    }
}

impl Neg for Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        let mut d = [0.0; MAX_DIM];
        for i in 0..MAX_DIM {
            d[i] = -self.d[i];
        }
        Jet1 { v: -self.v, d }
    }
}

impl DualNum for Jet1 {
    fn constant(c: f64) -> Self {
        Jet1 {
            v: c,
            d: [0.0; MAX_DIM],
        }
    }
    fn coordinate(x: f64, axis: usize) -> Self {
        let mut d = [0.0; MAX_DIM];
        d[axis] = 1.0;
        Jet1 { v: x, d }
    }
    fn value(&self) -> f64 {
        self.v
    }
    fn all_finite(&self) -> bool {
        self.v.is_finite() && self.d.iter().all(|x| x.is_finite())
    }
    fn sin(self) -> Self {
        self.chain(self.v.sin(), self.v.cos())
    }
    fn cos(self) -> Self {
        self.chain(self.v.cos(), -self.v.sin())
    }
    fn tan(self) -> Self {
        let t = self.v.tan();
        self.chain(t, 1.0 + t * t)
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e)
    }
    fn ln(self) -> Self {
        self.chain(self.v.ln(), 1.0 / self.v)
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s)
    }
    fn sinh(self) -> Self {
        self.chain(self.v.sinh(), self.v.cosh())
    }
    fn cosh(self) -> Self {
        self.chain(self.v.cosh(), self.v.sinh())
    }
    fn powi(self, k: i32) -> Self {
        let fv = self.v.powi(k);
        let f1 = if k == 0 {
            0.0
        } else {
            k as f64 * self.v.powi(k - 1)
        };
        self.chain(fv, f1)
    }
    fn powf(self, e: f64) -> Self {
        self.chain(self.v.powf(e), e * self.v.powf(e - 1.0))
    }
}

/// Second-order dual number: value, gradient, and Hessian.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Jet2 {
    pub v: f64,
    pub d: [f64; MAX_DIM],
    pub h: [[f64; MAX_DIM]; MAX_DIM],
}

const ZH: [[f64; MAX_DIM]; MAX_DIM] = [[0.0; MAX_DIM]; MAX_DIM];

impl Jet2 {
    /// Chain rule for a unary map: value `fv`, first derivative `f1`,
    /// second derivative `f2` at the argument value.
    fn chain(self, fv: f64, f1: f64, f2: f64) -> Jet2 {
        let mut d = [0.0; MAX_DIM];
        let mut h = ZH;
        for i in 0..MAX_DIM {
            d[i] = f1 * self.d[i];
        }
        for i in 0..MAX_DIM {
            for j in 0..MAX_DIM {
                h[i][j] = f2 * (self.d[i] * self.d[j]) + f1 * self.h[i][j];
            }
        }
        Jet2 { v: fv, d, h }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        let mut d = [0.0; MAX_DIM];
        let mut h = ZH;
        for i in 0..MAX_DIM {
            d[i] = self.d[i] + o.d[i];
        }
        for i in 0..MAX_DIM {
            for j in 0..MAX_DIM {
                h[i][j] = self.h[i][j] + o.h[i][j];
            }
        }
        Jet2 {
            v: self.v + o.v,
            d,
            h,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        let mut d = [0.0; MAX_DIM];
        let mut h = ZH;
        for i in 0..MAX_DIM {
            d[i] = self.d[i] - o.d[i];
        }
        for i in 0..MAX_DIM {
            for j in 0..MAX_DIM {
                h[i][j] = self.h[i][j] - o.h[i][j];
            }
        }
        Jet2 {
            v: self.v - o.v,
            d,
            h,
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        let mut d = [0.0; MAX_DIM];
        let mut h = ZH;
        for i in 0..MAX_DIM {
            d[i] = self.d[i] * o.v + self.v * o.d[i];
        }
        for i in 0..MAX_DIM {
            for j in 0..MAX_DIM {
                // cross terms summed first: symmetric under i↔j by
                // commutativity of + and *
                let cross = self.d[i] * o.d[j] + self.d[j] * o.d[i];
                h[i][j] = self.h[i][j] * o.v + cross + self.v * o.h[i][j];
            }
        }
        Jet2 {
            v: self.v * o.v,
            d,
            h,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        // q = a/b:  q' = (a' - q b')/b,  q'' = (a'' - q'⊗b' - b'⊗q' - q b'')/b
        let q = self.v / o.v;
        let mut d = [0.0; MAX_DIM];
        let mut h = ZH;
        for i in 0..MAX_DIM {
            d[i] = (self.d[i] - q * o.d[i]) / o.v;
        }
        for i in 0..MAX_DIM {
            for j in 0..MAX_DIM {
                let cross = d[i] * o.d[j] + d[j] * o.d[i];
                h[i][j] = (self.h[i][j] - cross - q * o.h[i][j]) / o.v;
            }
        }
        Jet2 { v: q, d, h }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        let mut d = [0.0; MAX_DIM];
        let mut h = ZH;
        for i in 0..MAX_DIM {
            d[i] = -self.d[i];
        }
        for i in 0..MAX_DIM {
            for j in 0..MAX_DIM {
                h[i][j] = -self.h[i][j];
            }
        }
        Jet2 { v: -self.v, d, h }
    }
}

impl DualNum for Jet2 {
    fn constant(c: f64) -> Self {
        Jet2 {
            v: c,
            d: [0.0; MAX_DIM],
            h: ZH,
        }
    }
    fn coordinate(x: f64, axis: usize) -> Self {
        let mut d = [0.0; MAX_DIM];
        d[axis] = 1.0;
        Jet2 { v: x, d, h: ZH }
    }
    fn value(&self) -> f64 {
        self.v
    }
    fn all_finite(&self) -> bool {
        self.v.is_finite()
            && self.d.iter().all(|x| x.is_finite())
            && self.h.iter().all(|row| row.iter().all(|x| x.is_finite()))
    }
    fn sin(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.chain(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.chain(c, -s, -c)
    }
    fn tan(self) -> Self {
        let t = self.v.tan();
        let sec2 = 1.0 + t * t;
        self.chain(t, sec2, 2.0 * t * sec2)
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
    fn ln(self) -> Self {
        let inv = 1.0 / self.v;
        self.chain(self.v.ln(), inv, -inv * inv)
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        let f1 = 0.5 / s;
        self.chain(s, f1, -0.5 * f1 / self.v)
    }
    fn sinh(self) -> Self {
        let (sh, ch) = (self.v.sinh(), self.v.cosh());
        self.chain(sh, ch, sh)
    }
    fn cosh(self) -> Self {
        let (sh, ch) = (self.v.sinh(), self.v.cosh());
        self.chain(ch, sh, ch)
    }
    fn powi(self, k: i32) -> Self {
        let fv = self.v.powi(k);
        let f1 = if k == 0 {
            0.0
        } else {
            k as f64 * self.v.powi(k - 1)
        };
        let f2 = if k == 0 || k == 1 {
            0.0
        } else {
            (k as f64) * ((k - 1) as f64) * self.v.powi(k - 2)
        };
        self.chain(fv, f1, f2)
    }
    fn powf(self, e: f64) -> Self {
        self.chain(
            self.v.powf(e),
            e * self.v.powf(e - 1.0),
            e * (e - 1.0) * self.v.powf(e - 2.0),
        )
    }
}

/// Result of a second-order dual evaluation: value, gradient, and Hessian
/// truncated to the chart dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Dual2 {
    pub value: f64,
    /// Length-n gradient.
    pub gradient: Vec<f64>,
    /// Row-major n×n Hessian; symmetric.
    pub hessian: Vec<f64>,
}

impl Dual2 {
    pub(crate) fn from_jet(jet: &Jet2, dim: usize) -> Dual2 {
        let mut hessian = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                hessian.push(jet.h[i][j]);
            }
        }
        Dual2 {
            value: jet.v,
            gradient: jet.d[..dim].to_vec(),
            hessian,
        }
    }

    pub fn second(&self, i: usize, j: usize) -> f64 {
        self.hessian[i * self.gradient.len() + j]
    }
}
