//! Vector fields `f(x, t)`: expression parsing, evaluation and exact
//! Jacobians by forward-mode differentiation of the syntax tree.

mod ast;
mod coeff;
mod eval;
mod parser;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

pub use ast::{BinOp, Expr, Func};
pub use coeff::{CoefficientFn, TrigInterp};
pub use eval::{eval, Dual, FieldValue};
pub use parser::{is_valid_parameter_name, parse_expression, ParseError, ParseErrorKind};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub enum FieldKind<R: Real> {
    Expressions(Vec<Expr>),
    /// `f(x, t) = A(t) x`.
    Linear(CoefficientFn<R>),
}

/// Right-hand side `f(x, t)` with exact Jacobian access.
#[derive(Debug, Clone)]
pub struct VectorFieldSpec<R: Real = f64> {
    dim: usize,
    kind: FieldKind<R>,
    params: BTreeMap<String, f64>,
    builtin: Option<String>,
}

/// Parses one expression per component; variables are `x1..xN` with `N = source.len()`.
pub fn parse<R: Real, S: AsRef<str>>(source: &[S], params: &BTreeMap<String, f64>) -> Result<VectorFieldSpec<R>> {
    VectorFieldSpec::parse(source, params)
}

/// Exact Jacobian `∂f_i/∂x_j` at `(x, t)`.
pub fn jacobian<R: Real>(field: &VectorFieldSpec<R>, x: &DVector<R>, t: R) -> Result<DMatrix<R>> {
    field.jacobian(x, t)
}

impl<R: Real> VectorFieldSpec<R> {
    pub fn parse<S: AsRef<str>>(source: &[S], params: &BTreeMap<String, f64>) -> Result<Self> {
        if source.is_empty() {
            return Err(Error::Input("a vector field needs at least one component".into()));
        }
        if let Some(bad) = params.keys().find(|k| !is_valid_parameter_name(k)) {
            return Err(Error::Input(format!("`{bad}` cannot be used as a parameter name")));
        }
        if let Some((name, _)) = params.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Input(format!("parameter `{name}` is not finite")));
        }
        let dim = source.len();
        let exprs = source
            .iter()
            .enumerate()
            .map(|(i, s)| parse_expression(s.as_ref(), i, dim, params))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            dim,
            kind: FieldKind::Expressions(exprs),
            params: params.clone(),
            builtin: None,
        })
    }

    pub fn from_exprs(exprs: Vec<Expr>) -> Result<Self> {
        let dim = exprs.len();
        if dim == 0 {
            return Err(Error::Input("a vector field needs at least one component".into()));
        }
        if let Some(k) = exprs.iter().filter_map(Expr::max_var).max() {
            if k >= dim {
                return Err(Error::Input(format!("variable x{} exceeds dimension {dim}", k + 1)));
            }
        }
        Ok(Self { dim, kind: FieldKind::Expressions(exprs), params: BTreeMap::new(), builtin: None })
    }

    pub fn linear(coefficient: CoefficientFn<R>) -> Self {
        Self {
            dim: coefficient.dimension(),
            kind: FieldKind::Linear(coefficient),
            params: BTreeMap::new(),
            builtin: None,
        }
    }

    /// Tags the field with the name of a built-in definition.
    pub fn with_builtin_name(mut self, name: &str) -> Self {
        self.builtin = Some(name.to_string());
        self
    }

    pub fn builtin_name(&self) -> Option<&str> {
        self.builtin.as_deref()
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &FieldKind<R> {
        &self.kind
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn expressions(&self) -> Option<&[Expr]> {
        match &self.kind {
            FieldKind::Expressions(e) => Some(e),
            FieldKind::Linear(_) => None,
        }
    }

    /// Pretty-printed components, re-parseable with the same parameters.
    pub fn to_strings(&self) -> Option<Vec<String>> {
        self.expressions().map(|e| e.iter().map(|x| x.to_string()).collect())
    }

    fn check_len(&self, x: &DVector<R>) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Input(format!("state has length {}, field dimension is {}", x.len(), self.dim)));
        }
        Ok(())
    }

    pub fn eval(&self, x: &DVector<R>, t: R) -> Result<DVector<R>> {
        self.check_len(x)?;
        match &self.kind {
            FieldKind::Expressions(exprs) => {
                let xs: Vec<R> = x.iter().copied().collect();
                let mut out = DVector::zeros(self.dim);
                for (i, e) in exprs.iter().enumerate() {
                    out[i] = eval(e, &xs, t).map_err(|message| Error::Domain { component: i, message })?;
                }
                Ok(out)
            }
            FieldKind::Linear(a) => Ok(a.at(t)? * x),
        }
    }

    /// Forward-mode Jacobian: one dual-number pass per state variable.
    pub fn jacobian(&self, x: &DVector<R>, t: R) -> Result<DMatrix<R>> {
        self.check_len(x)?;
        match &self.kind {
            FieldKind::Expressions(exprs) => {
                let mut jac = DMatrix::zeros(self.dim, self.dim);
                let tt = Dual::constant(t);
                for j in 0..self.dim {
                    let xs: Vec<Dual<R>> = (0..self.dim)
                        .map(|k| if k == j { Dual::variable(x[k]) } else { Dual::constant(x[k]) })
                        .collect();
                    for (i, e) in exprs.iter().enumerate() {
                        let v = eval(e, &xs, tt).map_err(|message| Error::Domain { component: i, message })?;
                        jac[(i, j)] = v.d;
                    }
                }
                Ok(jac)
            }
            FieldKind::Linear(a) => a.at(t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn scalar_linear_field() {
        let f: VectorFieldSpec = parse(&["0.05*x1"], &BTreeMap::new()).unwrap();
        let v = f.eval(&DVector::from_vec(vec![2.0]), 0.0).unwrap();
        assert!((v[0] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn focus_field_jacobian() {
        let f: VectorFieldSpec = parse(&["l*x1 - w*x2", "w*x1 + l*x2"], &params(&[("l", 0.05), ("w", 1.0)])).unwrap();
        let j = f.jacobian(&DVector::from_vec(vec![0.3, -7.0]), 1.0).unwrap();
        assert_eq!(j, DMatrix::from_row_slice(2, 2, &[0.05, -1.0, 1.0, 0.05]));
    }

    #[test]
    fn trailing_operator_reports_end_position() {
        let err = parse::<f64, _>(&["x1 +"], &BTreeMap::new()).unwrap_err();
        match err {
            Error::Parse(p) => {
                assert_eq!(p.position, 5);
                assert!(matches!(p.kind, ParseErrorKind::Syntax { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn square_jacobian() {
        let f: VectorFieldSpec = parse(&["x1^2"], &BTreeMap::new()).unwrap();
        let j = f.jacobian(&DVector::from_vec(vec![3.0]), 0.0).unwrap();
        assert_eq!(j[(0, 0)], 6.0);
    }

    #[test]
    fn product_rule_against_finite_differences() {
        let f: VectorFieldSpec = parse(&["sin(x1)*x2", "x1"], &BTreeMap::new()).unwrap();
        let x = DVector::from_vec(vec![0.0, 2.0]);
        let j = f.jacobian(&x, 0.0).unwrap();
        let h = 1e-6;
        for c in 0..2 {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[c] += h;
            xm[c] -= h;
            let fd = (f.eval(&xp, 0.0).unwrap() - f.eval(&xm, 0.0).unwrap()) / (2.0 * h);
            for r in 0..2 {
                assert!((fd[r] - j[(r, c)]).abs() < 1e-6);
            }
        }
        assert_eq!(j, DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 1.0, 0.0]));
    }

    #[test]
    fn unknown_identifier_and_arity() {
        let e = parse::<f64, _>(&["y + 1"], &BTreeMap::new()).unwrap_err();
        assert!(matches!(e, Error::Parse(ParseError { kind: ParseErrorKind::UnknownIdentifier(_), position: 1, .. })));
        let e = parse::<f64, _>(&["sin(x1, x1)"], &BTreeMap::new()).unwrap_err();
        assert!(matches!(e, Error::Parse(ParseError { kind: ParseErrorKind::Arity { found: 2, .. }, .. })));
        let e = parse::<f64, _>(&["x2"], &BTreeMap::new()).unwrap_err();
        assert!(matches!(e, Error::Parse(ParseError { kind: ParseErrorKind::UnknownIdentifier(_), .. })));
        let e = parse::<f64, _>(&["x1^0.5"], &BTreeMap::new()).unwrap_err();
        assert!(matches!(e, Error::Parse(ParseError { position: 4, .. })));
    }

    #[test]
    fn precedence_and_printing() {
        let f: VectorFieldSpec = parse(&["-x1^2 + 3*(x1 - t)/2"], &BTreeMap::new()).unwrap();
        let e = &f.expressions().unwrap()[0];
        assert!(matches!(e, Expr::Bin(BinOp::Add, l, _) if matches!(**l, Expr::Neg(_))));
        let v = f.eval(&DVector::from_vec(vec![2.0]), 1.0).unwrap();
        assert!((v[0] - (-4.0 + 1.5)).abs() < 1e-15);
        let printed = f.to_strings().unwrap();
        let g: VectorFieldSpec = parse(&printed, &BTreeMap::new()).unwrap();
        assert_eq!(g.expressions(), f.expressions());
    }

    #[test]
    fn negative_literal_base_keeps_its_parentheses() {
        let e = Expr::Pow(Box::new(Expr::Num(-1.5)), 2);
        assert_eq!(e.to_string(), "(-1.5)^2");
        let f: VectorFieldSpec = VectorFieldSpec::from_exprs(vec![e]).unwrap();
        let g: VectorFieldSpec = parse(&f.to_strings().unwrap(), &BTreeMap::new()).unwrap();
        assert_eq!(g.eval(&DVector::zeros(1), 0.0).unwrap()[0], 2.25);
    }

    #[test]
    fn domain_errors_carry_component() {
        let f: VectorFieldSpec = parse(&["x1", "log(x1)"], &BTreeMap::new()).unwrap();
        let e = f.jacobian(&DVector::from_vec(vec![-1.0, 0.0]), 0.0).unwrap_err();
        assert!(matches!(e, Error::Domain { component: 1, .. }));
        let g: VectorFieldSpec = parse(&["sqrt(x1)"], &BTreeMap::new()).unwrap();
        assert!(g.eval(&DVector::from_vec(vec![0.0]), 0.0).is_ok());
        assert!(g.jacobian(&DVector::from_vec(vec![0.0]), 0.0).is_err());
    }

    #[test]
    fn single_precision_evaluation() {
        let f: VectorFieldSpec<f32> = parse(&["exp(x1)*cos(t)"], &BTreeMap::new()).unwrap();
        let j = f.jacobian(&DVector::from_vec(vec![0.5f32]), 0.0).unwrap();
        assert!((j[(0, 0)] - 0.5f32.exp()).abs() < 1e-6);
    }
}
