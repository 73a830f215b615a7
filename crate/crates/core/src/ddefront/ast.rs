//! Expression trees of the DSL and their canonical printer.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::exactpoly::{rat_to_text, BigRat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigRat),
    /// The series variable `t`.
    T,
    /// The catalytic variable.
    U,
    /// The evaluation point as a constant.
    Point,
    /// A declared parameter, by index.
    Param(usize),
    /// Unknown `F_i(t, u)`.
    Unknown(usize),
    /// `F_i(t, a)`.
    Spec(usize),
    /// `D^j[F_i]`, the j-fold divided difference at the point.
    Delta { order: u32, unknown: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn num(v: i64) -> Expr {
        Expr::Num(BigRat::from_integer(v.into()))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, e: u32) -> Expr {
        Expr::Pow(Box::new(a), e)
    }

    /// Folds constant subexpressions bottom-up. Idempotent.
    pub fn fold(self) -> Expr {
        use Expr::*;
        match self {
            Neg(a) => match a.fold() {
                Num(v) => Num(-v),
                a => Neg(Box::new(a)),
            },
            Add(a, b) => match (a.fold(), b.fold()) {
                (Num(x), Num(y)) => Num(x + y),
                (a, b) => Expr::add(a, b),
            },
            Sub(a, b) => match (a.fold(), b.fold()) {
                (Num(x), Num(y)) => Num(x - y),
                (a, b) => Expr::sub(a, b),
            },
            Mul(a, b) => match (a.fold(), b.fold()) {
                (Num(x), Num(y)) => Num(x * y),
                (a, b) => Expr::mul(a, b),
            },
            Div(a, b) => match (a.fold(), b.fold()) {
                (Num(x), Num(y)) if !y.is_zero() => Num(x / y),
                (a, b) => Expr::div(a, b),
            },
            Pow(a, e) => match a.fold() {
                Num(x) => Num(num_traits::pow(x, e as usize)),
                a => Expr::pow(a, e),
            },
            e => e,
        }
    }

    /// Replaces `T` by `with` everywhere.
    pub fn subst_t(&self, with: &Expr) -> Expr {
        self.map_leaves(&|e| match e {
            Expr::T => Some(with.clone()),
            _ => None,
        })
    }

    /// Replaces `U` by `with` everywhere.
    pub fn subst_u(&self, with: &Expr) -> Expr {
        self.map_leaves(&|e| match e {
            Expr::U => Some(with.clone()),
            _ => None,
        })
    }

    pub fn map_leaves(&self, f: &dyn Fn(&Expr) -> Option<Expr>) -> Expr {
        use Expr::*;
        if let Some(r) = f(self) {
            return r;
        }
        match self {
            Neg(a) => Neg(Box::new(a.map_leaves(f))),
            Add(a, b) => Expr::add(a.map_leaves(f), b.map_leaves(f)),
            Sub(a, b) => Expr::sub(a.map_leaves(f), b.map_leaves(f)),
            Mul(a, b) => Expr::mul(a.map_leaves(f), b.map_leaves(f)),
            Div(a, b) => Expr::div(a.map_leaves(f), b.map_leaves(f)),
            Pow(a, e) => Expr::pow(a.map_leaves(f), *e),
            e => e.clone(),
        }
    }

    /// Largest `D` order used.
    pub fn max_delta(&self) -> u32 {
        use Expr::*;
        match self {
            Delta { order, .. } => *order,
            Neg(a) | Pow(a, _) => a.max_delta(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => a.max_delta().max(b.max_delta()),
            _ => 0,
        }
    }

    fn prec(&self) -> u8 {
        use Expr::*;
        match self {
            Add(..) | Sub(..) => 1,
            Mul(..) | Div(..) => 2,
            Neg(..) => 3,
            Pow(..) => 4,
            Num(v) if v.is_negative() || !v.is_integer() => 0,
            _ => 5,
        }
    }
}

/// Names used when printing.
pub struct Names<'a> {
    pub unknowns: &'a [String],
    pub params: &'a [String],
    pub catalytic: &'a str,
    pub point: &'a str,
}

pub fn print_expr(e: &Expr, names: &Names<'_>) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, names);
    s
}

fn write_child(out: &mut String, e: &Expr, min: u8, names: &Names<'_>) {
    if e.prec() < min {
        out.push('(');
        write_expr(out, e, names);
        out.push(')');
    } else {
        write_expr(out, e, names);
    }
}

fn write_expr(out: &mut String, e: &Expr, names: &Names<'_>) {
    use Expr::*;
    match e {
        Num(v) => {
            if v.is_negative() || !v.is_integer() {
                // parenthesized by the caller through prec 0, except at top level
                out.push_str(&rat_to_text(v));
            } else {
                out.push_str(&v.to_string());
            }
        }
        T => out.push('t'),
        U => out.push_str(names.catalytic),
        Point => out.push_str(names.point),
        Param(i) => out.push_str(&names.params[*i]),
        Unknown(i) => out.push_str(&names.unknowns[*i]),
        Spec(i) => {
            let _ = write!(out, "{}({})", names.unknowns[*i], names.point);
        }
        Delta { order, unknown } => {
            if *order == 1 {
                let _ = write!(out, "D[{}]", names.unknowns[*unknown]);
            } else {
                let _ = write!(out, "D^{}[{}]", order, names.unknowns[*unknown]);
            }
        }
        Neg(a) => {
            out.push('-');
            write_child(out, a, 3, names);
        }
        Add(a, b) => {
            write_child(out, a, 1, names);
            out.push_str(" + ");
            write_child(out, b, 2, names);
        }
        Sub(a, b) => {
            write_child(out, a, 1, names);
            out.push_str(" - ");
            write_child(out, b, 2, names);
        }
        Mul(a, b) => {
            write_child(out, a, 2, names);
            out.push('*');
            write_child(out, b, 3, names);
        }
        Div(a, b) => {
            write_child(out, a, 2, names);
            out.push('/');
            write_child(out, b, 3, names);
        }
        Pow(a, k) => {
            write_child(out, a, 5, names);
            let _ = write!(out, "^{k}");
        }
    }
}

/// Text of a rational in declarations: `3`, `-1/2`.
pub fn decl_rational(v: &BigRat) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        rat_to_text(v)
    }
}
