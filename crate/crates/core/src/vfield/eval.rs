//! Evaluation of syntax trees over plain reals and forward-mode dual numbers.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::ast::{BinOp, Expr, Func};
use crate::scalar::Real;

/// Value type an expression can be evaluated over.
pub trait FieldValue<R: Real>:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    /// True when a derivative is propagated, which tightens the domain of `sqrt`.
    const DIFFERENTIATES: bool;

    fn constant(c: R) -> Self;
    fn value(self) -> R;
    fn apply(self, f: Func) -> Self;
    fn powi(self, n: i32) -> Self;
}

impl<R: Real> FieldValue<R> for R {
    const DIFFERENTIATES: bool = false;

    fn constant(c: R) -> Self {
        c
    }

    fn value(self) -> R {
        self
    }

    fn apply(self, f: Func) -> Self {
        match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Exp => self.exp(),
            Func::Log => self.ln(),
            Func::Sqrt => self.sqrt(),
            Func::Tanh => self.tanh(),
        }
    }

    fn powi(self, n: i32) -> Self {
        nalgebra::ComplexField::powi(self, n)
    }
}

/// First-order dual number `v + d ε`, `ε² = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual<R> {
    pub v: R,
    pub d: R,
}

impl<R: Real> Dual<R> {
    pub fn variable(v: R) -> Self {
        Self { v, d: R::one() }
    }

    pub fn constant(v: R) -> Self {
        Self { v, d: R::zero() }
    }
}

impl<R: Real> Add for Dual<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { v: self.v + o.v, d: self.d + o.d }
    }
}

impl<R: Real> Sub for Dual<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { v: self.v - o.v, d: self.d - o.d }
    }
}

impl<R: Real> Mul for Dual<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { v: self.v * o.v, d: self.d * o.v + self.v * o.d }
    }
}

impl<R: Real> Div for Dual<R> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let v = self.v / o.v;
        Self { v, d: (self.d - v * o.d) / o.v }
    }
}

impl<R: Real> Neg for Dual<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { v: -self.v, d: -self.d }
    }
}

impl<R: Real> FieldValue<R> for Dual<R> {
    const DIFFERENTIATES: bool = true;

    fn constant(c: R) -> Self {
        Dual::constant(c)
    }

    fn value(self) -> R {
        self.v
    }

    fn apply(self, f: Func) -> Self {
        let (v, dv) = match f {
            Func::Sin => (self.v.sin(), self.v.cos()),
            Func::Cos => (self.v.cos(), -self.v.sin()),
            Func::Exp => {
                let e = self.v.exp();
                (e, e)
            }
            Func::Log => (self.v.ln(), R::one() / self.v),
            Func::Sqrt => {
                let s = self.v.sqrt();
                (s, R::lit(0.5) / s)
            }
            Func::Tanh => {
                let th = self.v.tanh();
                (th, R::one() - th * th)
            }
        };
        Self { v, d: dv * self.d }
    }

    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Dual::constant(R::one());
        }
        let v = nalgebra::ComplexField::powi(self.v, n);
        let dv = R::lit(n as f64) * nalgebra::ComplexField::powi(self.v, n - 1);
        Self { v, d: dv * self.d }
    }
}

/// Evaluates `e` at state `x` and time `t`; domain violations yield a message.
pub fn eval<R: Real, V: FieldValue<R>>(e: &Expr, x: &[V], t: V) -> Result<V, String> {
    let out = match e {
        Expr::Num(c) => V::constant(R::lit(*c)),
        Expr::Var(i) => *x
            .get(*i)
            .ok_or_else(|| format!("variable x{} out of range", i + 1))?,
        Expr::Time => t,
        Expr::Param { value, .. } => V::constant(R::lit(*value)),
        Expr::Neg(a) => -eval(a, x, t)?,
        Expr::Bin(op, a, b) => {
            let (a, b) = (eval(a, x, t)?, eval(b, x, t)?);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.value() == R::zero() {
                        return Err("division by zero".into());
                    }
                    a / b
                }
            }
        }
        Expr::Pow(a, n) => {
            let a = eval(a, x, t)?;
            if *n < 0 && a.value() == R::zero() {
                return Err("negative power of zero".into());
            }
            a.powi(*n)
        }
        Expr::Call(f, a) => {
            let a = eval(a, x, t)?;
            let v = a.value();
            match f {
                Func::Log if v <= R::zero() => return Err(format!("log of nonpositive value {v:?}")),
                Func::Sqrt if v < R::zero() => return Err(format!("sqrt of negative value {v:?}")),
                Func::Sqrt if V::DIFFERENTIATES && v == R::zero() => {
                    return Err("sqrt is not differentiable at 0".into())
                }
                _ => {}
            }
            a.apply(*f)
        }
    };
    if !out.value().is_finite() {
        return Err("non-finite value".into());
    }
    Ok(out)
}
