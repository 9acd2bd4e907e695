use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Tanh,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "tanh" => Func::Tanh,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Tanh => "tanh",
        }
    }
}

/// Syntax tree of one vector-field component.
///
/// Variables are zero-based (`Var(0)` is `x1`). Parameters keep both their
/// name, for printing, and the value bound at parse time.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Time,
    Param { name: String, value: f64 },
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_POWER: u8 = 4;

impl Expr {
    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Bin(op, Box::new(l), Box::new(r))
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(i) => Some(*i),
            Expr::Num(_) | Expr::Time | Expr::Param { .. } => None,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.max_var(),
            Expr::Bin(_, a, b) => match (a.max_var(), b.max_var()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        match self {
            // A negative literal reads as unary minus, which binds looser than `^`.
            Expr::Num(v) => wrap(f, v.is_sign_negative() && ctx > PREC_UNARY, |f| write!(f, "{v:?}")),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Time => f.write_str("t"),
            Expr::Param { name, .. } => f.write_str(name),
            Expr::Call(func, arg) => {
                write!(f, "{}(", func.name())?;
                arg.write_prec(f, 0)?;
                f.write_str(")")
            }
            Expr::Neg(a) => wrap(f, ctx > PREC_UNARY, |f| {
                f.write_str("-")?;
                a.write_prec(f, PREC_UNARY)
            }),
            Expr::Pow(base, n) => wrap(f, ctx > PREC_POWER, |f| {
                base.write_prec(f, PREC_POWER + 1)?;
                write!(f, "^{n}")
            }),
            Expr::Bin(op, l, r) => {
                let (prec, sym) = match op {
                    BinOp::Add => (PREC_SUM, " + "),
                    BinOp::Sub => (PREC_SUM, " - "),
                    BinOp::Mul => (PREC_PRODUCT, "*"),
                    BinOp::Div => (PREC_PRODUCT, "/"),
                };
                wrap(f, ctx > prec, |f| {
                    l.write_prec(f, prec)?;
                    f.write_str(sym)?;
                    r.write_prec(f, prec + 1)
                })
            }
        }
    }
}

fn wrap(
    f: &mut fmt::Formatter<'_>,
    parens: bool,
    body: impl FnOnce(&mut fmt::Formatter<'_>) -> fmt::Result,
) -> fmt::Result {
    if parens {
        f.write_str("(")?;
        body(f)?;
        f.write_str(")")
    } else {
        body(f)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}
