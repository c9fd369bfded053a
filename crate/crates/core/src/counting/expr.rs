//! Expression trees in one variable, evaluated numerically and, where a classical
//! criterion applies, exactly.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::enumerate::BoundedNumber;
use crate::error::Result;
use crate::numeric;
use crate::poly::{self, Poly};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    /// The variable.
    Var,
    /// A rational (`"3/2"`, `"0.25"`) or one of `"pi"`, `"e"`.
    Const(String),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn constant(q: impl Into<Rational>) -> Self {
        Expr::Const(q.into().to_string())
    }

    /// `sum c_i x^i` from rational coefficient strings, lowest degree first.
    pub fn polynomial(coeffs: &[Rational]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| match i {
                0 => Expr::constant(c.clone()),
                _ => Expr::Mul(vec![Expr::constant(c.clone()), Expr::Pow(Box::new(Expr::Var), Box::new(Expr::constant(i as i64)))]),
            })
            .collect::<Vec<_>>();
        if terms.is_empty() {
            Expr::constant(0)
        } else {
            Expr::Add(terms)
        }
    }

    pub fn depends_on_var(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Const(_) => false,
            Expr::Add(v) | Expr::Mul(v) => v.iter().any(Expr::depends_on_var),
            Expr::Sub(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => a.depends_on_var() || b.depends_on_var(),
            Expr::Neg(a) | Expr::Exp(a) => a.depends_on_var(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Expr::Const(s) => parse_const(s, 64).map(|_| ()),
            Expr::Var => Ok(()),
            Expr::Add(v) | Expr::Mul(v) => v.iter().try_for_each(Expr::validate),
            Expr::Sub(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => a.validate().and(b.validate()),
            Expr::Neg(a) | Expr::Exp(a) => a.validate(),
        }
    }

    /// Numeric value; NaN outside the domain.
    pub fn eval(&self, x: &Float) -> Float {
        let p = x.prec();
        match self {
            Expr::Var => x.clone(),
            Expr::Const(s) => match parse_const(s, p) {
                Ok(Const::Rational(q)) => Float::with_val(p, &q),
                Ok(Const::Pi) => numeric::pi(p),
                Ok(Const::E) => Float::with_val(p, 1).exp(),
                Err(_) => Float::with_val(p, f64::NAN),
            },
            Expr::Add(v) => v.iter().fold(Float::new(p), |acc, e| acc + e.eval(x)),
            Expr::Mul(v) => v.iter().fold(Float::with_val(p, 1), |acc, e| acc * e.eval(x)),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Neg(a) => -a.eval(x),
            Expr::Exp(a) => a.eval(x).exp(),
            Expr::Pow(a, b) => {
                let (base, e) = (a.eval(x), b.eval(x));
                if e.is_integer() && e.clone().abs() < 1e6 {
                    let n = e.to_i32_saturating().unwrap_or(0);
                    base.pow(n)
                } else if base > 0 {
                    (base.ln() * e).exp()
                } else if base == 0 && e > 0 {
                    Float::new(p)
                } else {
                    Float::with_val(p, f64::NAN)
                }
            }
        }
    }

    /// What can be decided about the value at an exactly known input.
    pub fn eval_exact(&self, x: &Exact) -> Exact {
        use Exact::*;
        match self {
            Expr::Var => x.clone(),
            Expr::Const(s) => match parse_const(s, 64) {
                Ok(Const::Rational(q)) => Rational(q),
                Ok(_) => Transcendental,
                Err(_) => Unknown,
            },
            Expr::Neg(a) => match a.eval_exact(x) {
                Rational(q) => Rational(-q),
                Transcendental => Transcendental,
                _ => Unknown,
            },
            Expr::Add(v) => v.iter().map(|e| e.eval_exact(x)).fold(Rational(rug::Rational::new()), add),
            Expr::Sub(a, b) => add(a.eval_exact(x), Expr::Neg(b.clone()).eval_exact(x)),
            Expr::Mul(v) => v.iter().map(|e| e.eval_exact(x)).fold(Rational(rug::Rational::from(1)), mul),
            Expr::Div(a, b) => match (a.eval_exact(x), b.eval_exact(x)) {
                (_, Rational(q)) if q == 0 => Undefined,
                (Rational(p), Rational(q)) => Rational(p / q),
                (Rational(p), _) if p == 0 => Rational(p),
                (Transcendental, Rational(_)) | (Rational(_), Transcendental) => Transcendental,
                _ => Unknown,
            },
            Expr::Exp(a) => match a.eval_exact(x) {
                Rational(q) if q == 0 => Rational(rug::Rational::from(1)),
                // Lindemann: exp of a nonzero algebraic number is transcendental
                Rational(_) | Algebraic(_) => Transcendental,
                _ => Unknown,
            },
            Expr::Pow(a, b) => pow(a.eval_exact(x), b.eval_exact(x)),
        }
    }
}

#[derive(Clone, Debug)]
enum Const {
    Rational(Rational),
    Pi,
    E,
}

fn parse_const(s: &str, _prec: u32) -> Result<Const> {
    match s.trim() {
        "pi" => Ok(Const::Pi),
        "e" => Ok(Const::E),
        t => Ok(Const::Rational(numeric::parse_rational(t)?)),
    }
}

/// Exact knowledge about a real value.
#[derive(Clone, Debug)]
pub enum Exact {
    Rational(Rational),
    /// Irrational algebraic with known minimal polynomial.
    Algebraic(Poly),
    Transcendental,
    /// Outside the domain (division by zero, even root of a negative number).
    Undefined,
    /// Nothing decided; callers fall back to numerics.
    Unknown,
}

impl Exact {
    pub fn from_bounded(b: &BoundedNumber) -> Self {
        match &b.rational {
            Some(q) => Exact::Rational(q.clone()),
            None => Exact::Algebraic(b.min_poly.clone()),
        }
    }
}

fn add(a: Exact, b: Exact) -> Exact {
    use Exact::*;
    match (a, b) {
        (Undefined, _) | (_, Undefined) => Undefined,
        (Rational(p), Rational(q)) => Rational(p + q),
        (Transcendental, Rational(_)) | (Rational(_), Transcendental) => Transcendental,
        _ => Unknown,
    }
}

fn mul(a: Exact, b: Exact) -> Exact {
    use Exact::*;
    match (a, b) {
        (Undefined, _) | (_, Undefined) => Undefined,
        (Rational(p), Rational(q)) => Rational(p * q),
        (Rational(p), _) | (_, Rational(p)) if p == 0 => Rational(p),
        (Transcendental, Rational(_)) | (Rational(_), Transcendental) => Transcendental,
        _ => Unknown,
    }
}

fn pow(a: Exact, b: Exact) -> Exact {
    use Exact::*;
    match (a, b) {
        (Undefined, _) | (_, Undefined) => Undefined,
        (Rational(c), Rational(e)) => radical(&c, &e),
        (Rational(c), _) if c == 1 => Rational(c),
        // Gelfond-Schneider: a^b is transcendental for algebraic a != 0, 1 and irrational algebraic b
        (Rational(c), Algebraic(_)) if c > 0 => Transcendental,
        (Algebraic(_), Algebraic(_)) => Transcendental,
        _ => Unknown,
    }
}

/// Largest `s | q` such that `c > 0` is an `s`-th power in `Q`, and its `s`-th root.
fn largest_power_root(c: &Rational, q: u32) -> (u32, Rational) {
    let (n, d) = (c.numer(), c.denom());
    let mut best = (1, c.clone());
    for s in crate::poly::divisors(q as u64) {
        let s = s as u32;
        let rn = Integer::from(n.root_ref(s));
        let rd = Integer::from(d.root_ref(s));
        if Integer::from((&rn).pow(s)) == *n && Integer::from((&rd).pow(s)) == *d && s > best.0 {
            best = (s, Rational::from((rn, rd)));
        }
    }
    best
}

/// Exponents above this are treated as unknown rather than expanded.
const MAX_EXACT_EXPONENT: u32 = 4096;

/// `c^e` for rationals. For `c > 0` and `e = p/q` in lowest terms the real root has degree
/// `q / s` where `s` is the largest divisor of `q` with `c` an `s`-th power, because the
/// degree of a positive real radical is its order in `R^* / Q^*`.
fn radical(c: &Rational, e: &Rational) -> Exact {
    let (p, q) = (e.numer(), e.denom());
    let (Some(pi), Some(qu)) = (p.to_i64(), q.to_u32()) else { return Exact::Unknown };
    if pi.unsigned_abs() > MAX_EXACT_EXPONENT as u64 || qu > MAX_EXACT_EXPONENT {
        return Exact::Unknown;
    }
    if *c == 0 {
        return if pi > 0 { Exact::Rational(Rational::new()) } else { Exact::Undefined };
    }
    let ipow = |b: &Rational, k: i64| -> Rational {
        let r = Rational::from(b.pow(k.unsigned_abs() as u32));
        if k < 0 { r.recip() } else { r }
    };
    if qu == 1 {
        return Exact::Rational(ipow(c, pi));
    }
    if *c < 0 {
        // odd denominators have a real root; keep it simple and let numerics decide
        return if qu % 2 == 0 { Exact::Undefined } else { Exact::Unknown };
    }
    let (s, root) = largest_power_root(c, qu);
    let d = qu / s;
    // c^(p/q) = root^(p/d) with root not a perfect power of any divisor of d
    let base = ipow(&root, pi);
    if d == 1 {
        return Exact::Rational(base);
    }
    // minimal polynomial den * y^d - num
    let mut m: Poly = vec![Integer::new(); d as usize + 1];
    m[0] = Integer::from(-base.numer());
    m[d as usize] = base.denom().clone();
    Exact::Algebraic(poly::primitive(&m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exact {
        Exact::Rational(Rational::from((n, d)))
    }

    #[test]
    fn radicals() {
        let two_x = Expr::Pow(Box::new(Expr::constant(2)), Box::new(Expr::Var));
        assert!(matches!(two_x.eval_exact(&q(3, 1)), Exact::Rational(r) if r == 8));
        match two_x.eval_exact(&q(3, 2)) {
            Exact::Algebraic(m) => assert_eq!(m, poly::from_i64(&[-8, 0, 1])),
            other => panic!("{other:?}"),
        }
        // 4^(1/2) = 2, 4^(1/4) = sqrt 2, 8^(2/3) = 4
        let c = |b: i64, e: Exact| Expr::Pow(Box::new(Expr::constant(b)), Box::new(Expr::Var)).eval_exact(&e);
        assert!(matches!(c(4, q(1, 2)), Exact::Rational(r) if r == 2));
        assert!(matches!(c(4, q(1, 4)), Exact::Algebraic(m) if m == poly::from_i64(&[-2, 0, 1])));
        assert!(matches!(c(8, q(2, 3)), Exact::Rational(r) if r == 4));
        assert!(matches!(c(4, q(-1, 2)), Exact::Rational(r) if r == (1, 2)));
    }

    #[test]
    fn transcendence_rules() {
        let e = Expr::Exp(Box::new(Expr::Var));
        assert!(matches!(e.eval_exact(&q(0, 1)), Exact::Rational(r) if r == 1));
        assert!(matches!(e.eval_exact(&q(1, 3)), Exact::Transcendental));
        let two_x = Expr::Pow(Box::new(Expr::constant(2)), Box::new(Expr::Var));
        assert!(matches!(two_x.eval_exact(&Exact::Algebraic(poly::from_i64(&[-2, 0, 1]))), Exact::Transcendental));
        let pi_plus = Expr::Add(vec![Expr::Const("pi".into()), Expr::Var]);
        assert!(matches!(pi_plus.eval_exact(&q(1, 2)), Exact::Transcendental));
    }

    #[test]
    fn numeric_matches_exact() {
        let f = Expr::polynomial(&[Rational::from(1), Rational::from((-1, 2)), Rational::from(3)]);
        let x = Float::with_val(128, 0.75);
        let exact = match f.eval_exact(&q(3, 4)) {
            Exact::Rational(r) => r,
            other => panic!("{other:?}"),
        };
        assert_eq!(exact, Rational::from((37, 16)));
        assert_eq!(f.eval(&x), Float::with_val(128, &exact));
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<Expr>(&j).unwrap(), f);
        let g: Expr = serde_json::from_str(r#"{"pow": [{"const": "2"}, "var"]}"#).unwrap();
        assert_eq!(g.eval(&Float::with_val(64, 3)), 8);
    }
}
