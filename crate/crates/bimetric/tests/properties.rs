//! Property suites: algebraic invariants on random tensors, expression
//! round-trips, derivative cross-checks against an independent
//! finite-difference oracle, and the geometric identities on random metric
//! families.

mod common;

use bimetric::catalog::random_metric;
use bimetric::checks::sample_points;
use bimetric::expr::{self, Expr};
use bimetric::rng::XorShiftRng;
use bimetric::{
    christoffel_classic, christoffel_relative, eval, eval_dual2, jet, riemann_classic,
    riemann_relative, DiffMode, ExprField, MetricField, Point, TensorComponents, TensorShape,
};
use common::{chart_of_dim, fd_gradient_oracle, random_expr, random_point};
use proptest::prelude::*;

fn random_field(dim: usize, seed: u64) -> MetricField {
    MetricField::from_manifest(&random_metric(dim, seed, 2).unwrap()).unwrap()
}

// ---------------------------------------------------------------------------
// Tensor algebra
// ---------------------------------------------------------------------------

/// Integer-valued tensors keep every float operation exact, so algebraic
/// identities must hold bitwise.
fn integer_tensor(shape: TensorShape, values: &mut impl Iterator<Item = i32>) -> TensorComponents {
    let data = (0..shape.len())
        .map(|_| values.next().unwrap() as f64)
        .collect();
    TensorComponents::new(shape, data).unwrap()
}

proptest! {
    #[test]
    fn contract_commutes_with_product_exactly(
        seed in any::<u64>(),
        dim in 2usize..=4,
    ) {
        let mut rng = XorShiftRng::new(seed);
        let mut ints = std::iter::from_fn(move || Some((rng.next_u64() % 19) as i32 - 9));
        let a = integer_tensor(TensorShape::new(1, 1, dim).unwrap(), &mut ints);
        let b = integer_tensor(TensorShape::new(0, 1, dim).unwrap(), &mut ints);
        let lhs = a.contract(0, 0).unwrap().tensor_product(&b).unwrap();
        let rhs = a.tensor_product(&b).unwrap().contract(0, 0).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn antisymmetrize_twice_doubles_exactly(
        seed in any::<u64>(),
        dim in 2usize..=4,
    ) {
        let mut rng = XorShiftRng::new(seed);
        let shape = TensorShape::new(0, 2, dim).unwrap();
        let data: Vec<f64> = (0..shape.len()).map(|_| rng.range(-5.0, 5.0)).collect();
        let t = TensorComponents::new(shape, data).unwrap();
        let once = t.antisymmetrize_pair(0, 1).unwrap();
        let twice = once.antisymmetrize_pair(0, 1).unwrap();
        prop_assert_eq!(twice, once.scale(2.0));
    }

    #[test]
    fn identity_trace_is_dimension(dim in 2usize..=8) {
        let id = TensorComponents::identity_mixed(dim).unwrap();
        let trace = id.contract(0, 0).unwrap();
        prop_assert_eq!(trace.data(), &[dim as f64]);
    }
}

// ---------------------------------------------------------------------------
// Expression engine
// ---------------------------------------------------------------------------

proptest! {
    /// parse ∘ pretty ∘ parse is the identity on ASTs.
    #[test]
    fn pretty_print_round_trips(seed in any::<u64>(), dim in 2usize..=3) {
        let chart = chart_of_dim(dim);
        let mut rng = XorShiftRng::new(seed);
        let tree = random_expr(&mut rng, dim, 5);
        let printed = expr::pretty(&tree, &chart);
        let reparsed = expr::parse(&printed, &chart)
            .unwrap_or_else(|e| panic!("`{printed}` failed to re-parse: {e}"));
        prop_assert_eq!(&tree, &reparsed, "source `{}`", printed);
        // printing is stable from the first round on
        let printed_again = expr::pretty(&reparsed, &chart);
        prop_assert_eq!(printed, printed_again);
    }
}

/// Estimated largest third derivative, from central differences of the
/// exact gradient; bounds the truncation error of the gradient oracle.
fn third_derivative_estimate(tree: &Expr, p: &Point) -> Option<f64> {
    let delta = 1e-2;
    let dim = p.dim();
    let mut worst = 0.0f64;
    for axis in 0..dim {
        let mut plus = p.coords().to_vec();
        let mut minus = p.coords().to_vec();
        plus[axis] += delta;
        minus[axis] -= delta;
        let gp = eval_dual2(tree, &Point::new(plus).ok()?).ok()?;
        let gm = eval_dual2(tree, &Point::new(minus).ok()?).ok()?;
        for (a, b) in gp.hessian.iter().zip(&gm.hessian) {
            worst = worst.max(((a - b) / (2.0 * delta)).abs());
        }
    }
    Some(worst)
}

/// 200 random trees at 10 points each: the dual gradient stays within
/// 1e-5·(1+|fd|) of the fixed-step central-difference oracle, the Hessian is
/// symmetric, and the dual value equals plain evaluation bit for bit.
#[test]
fn dual_gradient_matches_fd_oracle() {
    let mut rng = XorShiftRng::new(2024);
    let mut trees = 0usize;
    let mut points_checked = 0usize;
    while trees < 200 {
        let dim = if rng.next_u64().is_multiple_of(2) {
            2
        } else {
            3
        };
        let tree = random_expr(&mut rng, dim, 6);
        let mut used = false;
        for _ in 0..10 {
            let p = random_point(&mut rng, dim);
            let Ok(dual) = eval_dual2(&tree, &p) else {
                continue;
            };
            // the oracle is only trustworthy at moderate magnitudes and
            // third derivatives; outside that envelope its own truncation
            // dominates the comparison
            let magnitude = dual
                .value
                .abs()
                .max(dual.gradient.iter().fold(0.0f64, |m, g| m.max(g.abs())))
                .max(dual.hessian.iter().fold(0.0f64, |m, h| m.max(h.abs())));
            if magnitude > 1e3 {
                continue;
            }
            match third_derivative_estimate(&tree, &p) {
                Some(f3) if f3 <= 1e5 => {}
                _ => continue,
            }
            let Some(fd) = fd_gradient_oracle(&tree, &p) else {
                continue;
            };
            let plain = eval(&tree, p.coords()).unwrap();
            assert_eq!(
                plain.to_bits(),
                dual.value.to_bits(),
                "value channel diverged"
            );
            for (axis, (d, f)) in dual.gradient.iter().zip(&fd).enumerate() {
                assert!(
                    (d - f).abs() <= 1e-5 * (1.0 + f.abs()),
                    "axis {axis}: dual {d} vs oracle {f} at {p}"
                );
            }
            for i in 0..dim {
                for j in 0..dim {
                    assert!(
                        (dual.second(i, j) - dual.second(j, i)).abs() <= 1e-12,
                        "hessian asymmetry at {p}"
                    );
                }
            }
            used = true;
            points_checked += 1;
        }
        if used {
            trees += 1;
        }
    }
    assert!(
        points_checked >= 1000,
        "only {points_checked} points checked"
    );
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

#[test]
fn mixed_second_partials_are_symmetric_in_both_modes() {
    let mut rng = XorShiftRng::new(31);
    for _ in 0..40 {
        let dim = if rng.next_u64().is_multiple_of(2) {
            2
        } else {
            3
        };
        let chart = chart_of_dim(dim);
        let Ok(field) = ExprField::new(
            chart,
            TensorShape::new(0, 0, dim).unwrap(),
            vec![random_expr(&mut rng, dim, 4)],
        ) else {
            continue;
        };
        let p = random_point(&mut rng, dim);
        for (mode, tol) in [(DiffMode::Dual, 1e-12), (DiffMode::CentralFd, 1e-4)] {
            let Ok(j) = jet(&field, &p, 2, mode) else {
                continue;
            };
            let second = j.second_partials.unwrap();
            for i in 0..dim {
                for k in 0..dim {
                    let asym = (second.get(&[i, k]) - second.get(&[k, i])).abs();
                    assert!(asym <= tol, "mode {mode}: asymmetry {asym} at {p}");
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Metric inversion
// ---------------------------------------------------------------------------

/// Gauss-Jordan elimination with partial pivoting; oracle independent of the
/// Cholesky-based production inverse.
fn gauss_jordan_inverse(n: usize, mat: &[f64]) -> Vec<f64> {
    let mut a = mat.to_vec();
    let mut inv: Vec<f64> = (0..n * n)
        .map(|k| if k / n == k % n { 1.0 } else { 0.0 })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| {
                a[r * n + col]
                    .abs()
                    .partial_cmp(&a[s * n + col].abs())
                    .unwrap()
            })
            .unwrap();
        for k in 0..n {
            a.swap(col * n + k, pivot_row * n + k);
            inv.swap(col * n + k, pivot_row * n + k);
        }
        let pivot = a[col * n + col];
        for k in 0..n {
            a[col * n + k] /= pivot;
            inv[col * n + k] /= pivot;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[row * n + col];
            for k in 0..n {
                a[row * n + k] -= factor * a[col * n + k];
                inv[row * n + k] -= factor * inv[col * n + k];
            }
        }
    }
    inv
}

#[test]
fn metric_inverse_matches_elimination_oracle() {
    let mut rng = XorShiftRng::new(70);
    for index in 0..8u64 {
        let dim = if index.is_multiple_of(2) { 2 } else { 3 };
        let m = random_field(dim, 300 + index);
        let points = sample_points(std::slice::from_ref(&m), 15, &mut rng).unwrap();
        for p in &points {
            let inv = bimetric::inverse_metric(&m, p).unwrap();
            let mat = m.value_matrix(p).unwrap();
            // m · m⁻¹ = identity
            for i in 0..dim {
                for j in 0..dim {
                    let mut s = 0.0;
                    for k in 0..dim {
                        s += mat[i * dim + k] * inv.get(&[k, j]);
                    }
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (s - expected).abs() <= 1e-12,
                        "m·inv[{i}][{j}] = {s} at {p}"
                    );
                }
            }
            // agreement with the independent elimination oracle
            let oracle = gauss_jordan_inverse(dim, &mat);
            for i in 0..dim {
                for j in 0..dim {
                    let diff = (inv.get(&[i, j]) - oracle[i * dim + j]).abs();
                    assert!(diff <= 1e-12, "inverse diverges from oracle at {p}");
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Connection identities on random metric families
// ---------------------------------------------------------------------------

#[test]
fn christoffel_argument_antisymmetry_over_random_pairs() {
    let mut rng = XorShiftRng::new(71);
    for index in 0..8u64 {
        let dim = if index.is_multiple_of(2) { 2 } else { 3 };
        let g = random_field(dim, 400 + index);
        let m = random_field(dim, 500 + index);
        let points = sample_points(&[g.clone(), m.clone()], 10, &mut rng).unwrap();
        for p in &points {
            let ab = christoffel_relative(&g, &m, p, DiffMode::Dual)
                .unwrap()
                .values;
            let ba = christoffel_relative(&m, &g, p, DiffMode::Dual)
                .unwrap()
                .values;
            let drift = ab.add(&ba).unwrap().max_abs() / (1.0 + ab.max_abs());
            assert!(drift <= 1e-10, "antisymmetry drift {drift} at {p}");
        }
    }
}

#[test]
fn chart_recovery_classic_equals_relative_to_euclidean() {
    let mut rng = XorShiftRng::new(72);
    for index in 0..8u64 {
        let dim = if index.is_multiple_of(2) { 2 } else { 3 };
        let g = random_field(dim, 600 + index);
        let delta = MetricField::euclidean(g.chart());
        let points = sample_points(std::slice::from_ref(&g), 10, &mut rng).unwrap();
        for p in &points {
            let classic = christoffel_classic(&g, p, DiffMode::Dual).unwrap().values;
            let relative = christoffel_relative(&delta, &g, p, DiffMode::Dual)
                .unwrap()
                .values;
            let drift = classic.sub(&relative).unwrap().max_abs() / (1.0 + classic.max_abs());
            assert!(drift <= 1e-12, "paths diverge by {drift} at {p}");
        }
    }
}

// ---------------------------------------------------------------------------
// Curvature invariants on random metric families
// ---------------------------------------------------------------------------

#[test]
fn riemann_antisymmetry_and_first_bianchi() {
    let mut rng = XorShiftRng::new(73);
    for index in 0..6u64 {
        let dim = if index.is_multiple_of(2) { 2 } else { 3 };
        let g = random_field(dim, 700 + index);
        let m = random_field(dim, 800 + index);
        let points = sample_points(&[g.clone(), m.clone()], 8, &mut rng).unwrap();
        for p in &points {
            for r in [
                riemann_classic(&m, p, DiffMode::Dual).unwrap(),
                riemann_relative(&g, &m, p, DiffMode::Dual).unwrap(),
            ] {
                let n = dim;
                let scale = 1.0 + r.values.max_abs();
                for l in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            for k in 0..n {
                                let anti = (r.get(l, i, j, k) + r.get(l, i, k, j)).abs();
                                assert!(anti <= 1e-9 * scale, "antisymmetry {anti} at {p}");
                                let cyclic =
                                    (r.get(l, i, j, k) + r.get(l, j, k, i) + r.get(l, k, i, j))
                                        .abs();
                                assert!(cyclic <= 1e-8 * scale, "bianchi {cyclic} at {p}");
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn ricci_cocycle_closes_by_linearity_of_contraction() {
    let mut rng = XorShiftRng::new(75);
    for index in 0..4u64 {
        let dim = if index.is_multiple_of(2) { 2 } else { 3 };
        let a = random_field(dim, 1100 + index);
        let b = random_field(dim, 1200 + index);
        let c = random_field(dim, 1300 + index);
        let points = sample_points(&[a.clone(), b.clone(), c.clone()], 8, &mut rng).unwrap();
        for p in &points {
            let ab = bimetric::ricci(&a, &b, p, DiffMode::Dual).unwrap();
            let bc = bimetric::ricci(&b, &c, p, DiffMode::Dual).unwrap();
            let ca = bimetric::ricci(&c, &a, p, DiffMode::Dual).unwrap();
            let sum = ab.add(&bc).unwrap().add(&ca).unwrap();
            let scale = ab.max_abs().max(bc.max_abs()).max(ca.max_abs());
            assert!(
                sum.max_abs() / (1.0 + scale) < 1e-7,
                "ricci cocycle residual {} at {p}",
                sum.max_abs()
            );
        }
    }
}

#[test]
fn lowered_riemann_has_pair_exchange_symmetry() {
    // R_lijk = R_jkli for the chart curvature of m, lowered with m itself
    let mut rng = XorShiftRng::new(74);
    for index in 0..6u64 {
        let dim = if index.is_multiple_of(2) { 2 } else { 3 };
        let m = random_field(dim, 900 + index);
        let points = sample_points(std::slice::from_ref(&m), 8, &mut rng).unwrap();
        for p in &points {
            let r = riemann_classic(&m, p, DiffMode::Dual).unwrap().values;
            let mat = m.value_matrix(p).unwrap();
            let n = dim;
            let mut lowered = vec![0.0; n * n * n * n];
            for a in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            let mut s = 0.0;
                            for l in 0..n {
                                s += mat[a * n + l] * r.get(&[l, i, j, k]);
                            }
                            lowered[((a * n + i) * n + j) * n + k] = s;
                        }
                    }
                }
            }
            let max = lowered.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            for a in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            let lhs = lowered[((a * n + i) * n + j) * n + k];
                            let rhs = lowered[((j * n + k) * n + a) * n + i];
                            assert!(
                                (lhs - rhs).abs() <= 1e-8 * (1.0 + max),
                                "pair exchange broken at {p}"
                            );
                        }
                    }
                }
            }
        }
    }
}
