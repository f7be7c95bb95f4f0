//! Shared helpers for the integration suites: a random expression generator
//! and a finite-difference oracle that only touches plain evaluation.

use bimetric::expr::{BinaryOp, Expr, UnaryOp};
use bimetric::rng::XorShiftRng;
use bimetric::{eval, ChartSpec, Point};

/// Random expression tree of depth at most `depth` over `dim` coordinates.
///
/// `log` and `sqrt` are applied to `1 + u^2` so they stay in-domain by
/// construction; everything else may wander out of domain or overflow, and
/// callers skip points where evaluation fails.
pub fn random_expr(rng: &mut XorShiftRng, dim: usize, depth: usize) -> Expr {
    if depth == 0 {
        return if rng.next_f64() < 0.4 {
            Expr::constant((rng.range(-2.0, 2.0) * 100.0).round() / 100.0)
        } else {
            Expr::coord((rng.next_u64() % dim as u64) as usize)
        };
    }
    match rng.next_u64() % 10 {
        0 | 1 => Expr::binary(
            BinaryOp::Add,
            random_expr(rng, dim, depth - 1),
            random_expr(rng, dim, depth - 1),
        ),
        2 => Expr::binary(
            BinaryOp::Sub,
            random_expr(rng, dim, depth - 1),
            random_expr(rng, dim, depth - 1),
        ),
        3 | 4 => Expr::binary(
            BinaryOp::Mul,
            random_expr(rng, dim, depth - 1),
            random_expr(rng, dim, depth - 1),
        ),
        5 => Expr::binary(
            BinaryOp::Div,
            random_expr(rng, dim, depth - 1),
            random_expr(rng, dim, depth - 1),
        ),
        6 => {
            let op = match rng.next_u64() % 6 {
                0 => UnaryOp::Sin,
                1 => UnaryOp::Cos,
                2 => UnaryOp::Tan,
                3 => UnaryOp::Exp,
                4 => UnaryOp::Sinh,
                _ => UnaryOp::Cosh,
            };
            Expr::unary(op, random_expr(rng, dim, depth - 1))
        }
        7 => {
            // log(1 + u^2) or sqrt(1 + u^2)
            let op = if rng.next_u64().is_multiple_of(2) {
                UnaryOp::Log
            } else {
                UnaryOp::Sqrt
            };
            let guarded = Expr::binary(
                BinaryOp::Add,
                Expr::constant(1.0),
                Expr::pow(random_expr(rng, dim, depth - 1), 2.0),
            );
            Expr::unary(op, guarded)
        }
        8 => {
            let arg = random_expr(rng, dim, depth - 1);
            // keep parser normal form: a negated literal folds into the
            // constant at parse time, so never build Neg(Constant)
            if let Expr::Constant { value, .. } = arg {
                Expr::constant(-value)
            } else {
                Expr::unary(UnaryOp::Neg, arg)
            }
        }
        _ => {
            let exponent: f64 = [2.0, 3.0, -1.0, 0.5][(rng.next_u64() % 4) as usize];
            let base = if exponent == exponent.trunc() && exponent > 0.0 {
                random_expr(rng, dim, depth - 1)
            } else {
                // fractional and negative powers blow up near zero; keep the
                // base at least 1 so derivatives of all orders stay tame
                Expr::binary(
                    BinaryOp::Add,
                    Expr::constant(1.0),
                    Expr::pow(random_expr(rng, dim, depth - 1), 2.0),
                )
            };
            Expr::pow(base, exponent)
        }
    }
}

pub fn chart_of_dim(dim: usize) -> ChartSpec {
    let names: Vec<&str> = ["x", "y", "z", "w"][..dim].to_vec();
    ChartSpec::from_names(&names).expect("test chart")
}

pub fn random_point(rng: &mut XorShiftRng, dim: usize) -> Point {
    Point::new((0..dim).map(|_| rng.range(-1.0, 1.0)).collect()).expect("finite point")
}

/// Central-difference gradient of `e` with the fixed oracle step `h = 1e-5`,
/// computed from plain evaluation only.
#[allow(dead_code)] // each integration target compiles its own copy
pub fn fd_gradient_oracle(e: &Expr, point: &Point) -> Option<Vec<f64>> {
    let h = 1e-5;
    let dim = point.dim();
    let mut grad = Vec::with_capacity(dim);
    for axis in 0..dim {
        let mut plus = point.coords().to_vec();
        let mut minus = point.coords().to_vec();
        plus[axis] += h;
        minus[axis] -= h;
        let fp = eval(e, &plus).ok()?;
        let fm = eval(e, &minus).ok()?;
        grad.push((fp - fm) / (2.0 * h));
    }
    Some(grad)
}
