//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use pyragas::model::{catalog, constructed_periodic, BenchmarkCase, DelayFeedback, EquilibriumProblem, PeriodicLinearProblem, Problem};
use pyragas::vfield::{BinOp, Expr, Func};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub const PARAMS: [(&str, f64); 2] = [("a", 0.7), ("beta", -1.3)];

pub fn params() -> BTreeMap<String, f64> {
    PARAMS.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub fn case(name: &str) -> BenchmarkCase {
    catalog().into_iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no catalog case {name}"))
}

pub fn equilibrium(name: &str) -> EquilibriumProblem {
    match case(name).problem() {
        Problem::Equilibrium(p) => p,
        _ => panic!("{name} is not an equilibrium problem"),
    }
}

pub fn periodic(name: &str) -> PeriodicLinearProblem {
    match case(name).problem() {
        Problem::PeriodicLinear(p) => p,
        _ => panic!("{name} is not a periodic problem"),
    }
}

fn leaf(rng: &mut TestRng, dim: usize) -> Expr {
    match rng.gen_range(0..4) {
        0 => Expr::Num(rng.gen_range(-2.0..2.0)),
        1 => Expr::Time,
        2 => {
            let (name, value) = PARAMS[rng.gen_range(0..PARAMS.len())];
            Expr::Param { name: name.into(), value }
        }
        _ => Expr::Var(rng.gen_range(0..dim)),
    }
}

fn plus_square(c: f64, e: Expr) -> Expr {
    Expr::bin(BinOp::Add, Expr::Num(c), Expr::Pow(Box::new(e), 2))
}

/// Random expression in `x1..x_dim`, `t` and [`PARAMS`], defined and smooth everywhere.
pub fn random_expr(rng: &mut TestRng, depth: usize, dim: usize) -> Expr {
    if depth == 0 || rng.gen_bool(0.2) {
        return leaf(rng, dim);
    }
    let sub = |rng: &mut TestRng| Box::new(random_expr(rng, depth - 1, dim));
    match rng.gen_range(0..11) {
        0 => Expr::Neg(sub(rng)),
        1 => Expr::Bin(BinOp::Add, sub(rng), sub(rng)),
        2 => Expr::Bin(BinOp::Sub, sub(rng), sub(rng)),
        3 | 4 => Expr::Bin(BinOp::Mul, sub(rng), sub(rng)),
        5 => {
            let num = sub(rng);
            Expr::Bin(BinOp::Div, num, Box::new(plus_square(1.5, *sub(rng))))
        }
        6 => Expr::Pow(sub(rng), rng.gen_range(0..4)),
        7 => Expr::Call([Func::Sin, Func::Cos, Func::Tanh][rng.gen_range(0..3)], sub(rng)),
        8 => Expr::Call(Func::Exp, Box::new(Expr::Call(Func::Sin, sub(rng)))),
        9 => Expr::Call(Func::Log, Box::new(plus_square(0.5, *sub(rng)))),
        _ => Expr::Call(Func::Sqrt, Box::new(plus_square(1.0, *sub(rng)))),
    }
}

pub fn uniform_matrix(rng: &mut TestRng, n: usize, scale: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.gen_range(-scale..scale))
}

/// Well-conditioned random similarity `I + 0.3 U`.
fn similarity(rng: &mut TestRng, n: usize) -> DMatrix<f64> {
    DMatrix::identity(n, n) + uniform_matrix(rng, n, 0.3 / n as f64)
}

/// Real `5 × 5` matrix with `dim ker(iω − J) = g` for `ω = 2πn/T`; other
/// eigenvalues are real and at least 0.2 away from the imaginary axis.
pub fn resonant_jacobian(rng: &mut TestRng, g: usize, delay: f64, n: i64) -> DMatrix<f64> {
    let dim = 5;
    let omega = std::f64::consts::TAU * n as f64 / delay;
    let mut d = DMatrix::zeros(dim, dim);
    for b in 0..g {
        d[(2 * b, 2 * b + 1)] = -omega;
        d[(2 * b + 1, 2 * b)] = omega;
    }
    for i in 2 * g..dim {
        let mag = rng.gen_range(0.2..1.5);
        d[(i, i)] = if rng.gen_bool(0.5) { mag } else { -mag };
    }
    let v = similarity(rng, dim);
    let vi = v.clone().try_inverse().expect("similarity is invertible");
    v * d * vi
}

/// Constructed periodic problem in dimension 3 whose monodromy has
/// `dim ker(I − Y₀(T)) = g`; the remaining Floquet exponents are real and nonzero.
pub fn random_constructed(rng: &mut TestRng, g: usize, period: f64) -> PeriodicLinearProblem {
    let n = 3;
    let mut b = DMatrix::zeros(n, n);
    for i in g..n {
        let mag = rng.gen_range(0.05..0.2);
        b[(i, i)] = if rng.gen_bool(0.5) { mag } else { -mag };
    }
    let v = similarity(rng, n);
    let b = &v * b * v.clone().try_inverse().unwrap();
    let raw = uniform_matrix(rng, n, 0.5);
    let s = &raw - raw.transpose();
    let coefficient = constructed_periodic(s, b, period).unwrap();
    let feedback = DelayFeedback::new(uniform_matrix(rng, n, 0.5), period).unwrap();
    PeriodicLinearProblem::new(coefficient, period, feedback).unwrap()
}

pub fn rng(seed: u64) -> TestRng {
    TestRng::seed_from_u64(seed)
}
