//! Parsers for the command-line literals.
//!
//! ```text
//! domain   := "quad:d=" int | "val:gens=" real ("," real)*
//! rational := ["-"] digits ["/" digits]
//! real     := term (("+" | "-") term)*          term: rational ["*" sqrtN] | sqrtN ["/" digits]
//! element  := term (("+" | "-") term)*          term: rational ["*"] ["w"] | "w"
//! ideal    := "ideal(" element ("," element)* ")" ["/" digits]
//! cut      := "cut(" real "," ("weak" | "strict") ")"
//! expr     := atom | fn "(" expr ("," expr)* ")"   fn: mul colon add intersect inverse vclose tclose
//! ```
//!
//! Whitespace is ignored between tokens. Errors carry the byte offset.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::domain::IdealArithmetic;
use crate::error::{Error, Result};
use crate::exact::{BigRat, ExactReal};
use crate::quadratic::{OrderSpec, QuadIdeal, QuadNum};
use crate::valuation::{CutIdeal, CutKind, ValueGroup};

/// A parsed domain literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainSpec {
    Quad(OrderSpec),
    Val(ValueGroup),
}

struct Cursor<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(input: &'a str) -> Self {
        Cursor { input, pos: 0 }
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            input: self.input.to_string(),
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.input.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.error(format!("expected `{token}`"))
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos == self.input.len() {
            Ok(())
        } else {
            self.error("unexpected trailing input")
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return None;
        }
        let n = self.rest()[..len].parse().ok();
        self.pos += len;
        n
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let len = self
            .rest()
            .bytes()
            .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
            .count();
        let s = &self.rest()[..len];
        self.pos += len;
        s
    }

    /// Unsigned rational `p` or `p/q`.
    fn unsigned_rational(&mut self) -> Result<Option<BigRat>> {
        let Some(p) = self.digits() else {
            return Ok(None);
        };
        if self.rest().starts_with('/') && self.rest()[1..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
            let q = self.digits().expect("digit follows");
            if q.is_zero() {
                return self.error("zero denominator");
            }
            return Ok(Some(BigRat::new(p, q)));
        }
        Ok(Some(BigRat::from_integer(p)))
    }

    /// Leading sign of a term: `Some(±1)` if a term starts here.
    fn sign(&mut self, first: bool) -> Option<i32> {
        if self.eat("+") {
            Some(1)
        } else if self.eat("-") {
            Some(-1)
        } else if first {
            Some(1)
        } else {
            None
        }
    }

    fn radical(&mut self) -> Option<usize> {
        self.skip_ws();
        for (name, idx) in [("sqrt2", 1), ("sqrt3", 2), ("sqrt6", 3)] {
            if self.rest().starts_with(name) {
                self.pos += name.len();
                return Some(idx);
            }
        }
        None
    }

    fn exact_real(&mut self) -> Result<ExactReal> {
        let mut coeffs: [BigRat; 4] = Default::default();
        let mut first = true;
        while let Some(sign) = self.sign(first) {
            let start = self.pos;
            let (q, idx) = if let Some(idx) = self.radical() {
                let mut q = BigRat::one();
                if self.eat("/") {
                    match self.digits() {
                        Some(n) if !n.is_zero() => q = BigRat::new(BigInt::one(), n),
                        _ => return self.error("expected a nonzero integer divisor"),
                    }
                }
                (q, idx)
            } else if let Some(q) = self.unsigned_rational()? {
                let idx = if self.eat("*") {
                    match self.radical() {
                        Some(idx) => idx,
                        None => return self.error("expected sqrt2, sqrt3 or sqrt6"),
                    }
                } else {
                    self.radical().unwrap_or(0)
                };
                (q, idx)
            } else {
                self.pos = start;
                return self.error("expected a real number term");
            };
            coeffs[idx] += if sign < 0 { -q } else { q };
            first = false;
        }
        let [a, b, c, d] = coeffs;
        Ok(ExactReal::new(a, b, c, d))
    }

    fn quad_num(&mut self) -> Result<QuadNum> {
        let (mut x, mut y) = (BigRat::zero(), BigRat::zero());
        let mut first = true;
        while let Some(sign) = self.sign(first) {
            let q = self.unsigned_rational()?;
            let has_w = {
                self.eat("*");
                self.eat("w")
            };
            let q = match (q, has_w) {
                (Some(q), _) => q,
                (None, true) => BigRat::one(),
                (None, false) => return self.error("expected a rational or `w`"),
            };
            let q = if sign < 0 { -q } else { q };
            if has_w {
                y += q;
            } else {
                x += q;
            }
            first = false;
        }
        Ok(QuadNum::new(x, y))
    }

    fn quad_ideal(&mut self, order: &OrderSpec) -> Result<QuadIdeal> {
        let start = self.pos;
        self.expect("ideal")?;
        self.expect("(")?;
        let mut gens = vec![self.quad_num()?];
        while self.eat(",") {
            gens.push(self.quad_num()?);
        }
        self.expect(")")?;
        let mut den = BigInt::one();
        if self.eat("/") {
            match self.digits() {
                Some(n) if !n.is_zero() => den = n,
                _ => return self.error("expected a nonzero integer denominator"),
            }
        }
        let scale = QuadNum::new(BigRat::new(BigInt::one(), den), BigRat::zero());
        let gens: Vec<QuadNum> = gens.iter().map(|g| order.mul_elements(g, &scale)).collect();
        order.ideal(&gens).map_err(|e| Error::Parse {
            input: self.input.to_string(),
            pos: start,
            msg: e.to_string(),
        })
    }

    fn cut(&mut self, group: &ValueGroup) -> Result<CutIdeal> {
        self.expect("cut")?;
        self.expect("(")?;
        let gamma = self.exact_real()?;
        self.expect(",")?;
        let kind = match self.ident() {
            "weak" => CutKind::Weak,
            "strict" => CutKind::Strict,
            _ => return self.error("expected `weak` or `strict`"),
        };
        self.expect(")")?;
        Ok(group.cut(gamma, kind))
    }
}

fn whole<T>(input: &str, f: impl FnOnce(&mut Cursor) -> Result<T>) -> Result<T> {
    let mut c = Cursor::new(input);
    let v = f(&mut c)?;
    c.finish()?;
    Ok(v)
}

pub fn parse_rational(input: &str) -> Result<BigRat> {
    whole(input, |c| {
        let neg = c.eat("-");
        match c.unsigned_rational()? {
            Some(q) => Ok(if neg { -q } else { q }),
            None => c.error("expected a rational"),
        }
    })
}

pub fn parse_exact_real(input: &str) -> Result<ExactReal> {
    whole(input, |c| c.exact_real())
}

pub fn parse_quad_num(input: &str) -> Result<QuadNum> {
    whole(input, |c| c.quad_num())
}

pub fn parse_quad_ideal(order: &OrderSpec, input: &str) -> Result<QuadIdeal> {
    whole(input, |c| c.quad_ideal(order))
}

pub fn parse_cut(group: &ValueGroup, input: &str) -> Result<CutIdeal> {
    whole(input, |c| c.cut(group))
}

pub fn parse_domain(input: &str) -> Result<DomainSpec> {
    let mut c = Cursor::new(input);
    if c.eat("quad:d=") {
        let neg = c.eat("-");
        let Some(n) = c.digits() else {
            return c.error("expected an integer");
        };
        c.finish()?;
        let d: i64 = i64::try_from(if neg { -n } else { n })
            .map_err(|_| Error::Validation(format!("d out of range in `{input}`")))?;
        let order = OrderSpec::new(d).map_err(|e| Error::Validation(e.to_string()))?;
        Ok(DomainSpec::Quad(order))
    } else if c.eat("val:gens=") {
        let mut gens = vec![c.exact_real()?];
        while c.eat(",") {
            gens.push(c.exact_real()?);
        }
        c.finish()?;
        let group = ValueGroup::new(gens).map_err(|e| Error::Validation(e.to_string()))?;
        Ok(DomainSpec::Val(group))
    } else {
        c.error("expected `quad:d=<int>` or `val:gens=<real>,...`")
    }
}

/// Comma-separated list of real literals, as taken by `--probe-points`.
pub fn parse_real_list(input: &str) -> Result<Vec<ExactReal>> {
    whole(input, |c| {
        let mut out = vec![c.exact_real()?];
        while c.eat(",") {
            out.push(c.exact_real()?);
        }
        Ok(out)
    })
}

/// Ideal expression over atoms of one domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr<I> {
    Atom(I),
    Call(Op, Vec<Expr<I>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Mul,
    Colon,
    Add,
    Intersect,
    Inverse,
    VClose,
    TClose,
}

impl Op {
    fn from_name(name: &str) -> Option<Op> {
        Some(match name {
            "mul" => Op::Mul,
            "colon" => Op::Colon,
            "add" => Op::Add,
            "intersect" => Op::Intersect,
            "inverse" => Op::Inverse,
            "vclose" => Op::VClose,
            "tclose" => Op::TClose,
            _ => return None,
        })
    }

    fn arity(self) -> usize {
        match self {
            Op::Inverse | Op::VClose | Op::TClose => 1,
            _ => 2,
        }
    }
}

/// Domains whose ideal literals can be parsed.
pub trait IdealLiteral: IdealArithmetic {
    /// Keyword that starts an ideal literal (`ideal` or `cut`).
    const ATOM: &'static str;

    fn parse_ideal(&self, input: &str) -> Result<Self::Ideal>;
    fn parse_element(&self, input: &str) -> Result<Self::Element>;
}

impl IdealLiteral for crate::domain::QuadraticDomain {
    const ATOM: &'static str = "ideal";

    fn parse_ideal(&self, input: &str) -> Result<QuadIdeal> {
        parse_quad_ideal(&self.order, input)
    }

    fn parse_element(&self, input: &str) -> Result<QuadNum> {
        let x = parse_quad_num(input)?;
        if !self.order.unit_ideal().contains_element(&x) || x.is_zero() {
            return Err(Error::Validation(format!("{input} is not a nonzero element of the order")));
        }
        Ok(x)
    }
}

impl IdealLiteral for crate::domain::ValuationDomain {
    const ATOM: &'static str = "cut";

    fn parse_ideal(&self, input: &str) -> Result<CutIdeal> {
        parse_cut(&self.group, input)
    }

    /// Elements are given by their value, which must be a non-negative
    /// group element.
    fn parse_element(&self, input: &str) -> Result<ExactReal> {
        let v = parse_exact_real(input)?;
        if !self.group.contains(&v) || v < ExactReal::zero() {
            return Err(Error::Validation(format!(
                "{input} is not the value of an element of the valuation ring"
            )));
        }
        Ok(v)
    }
}

fn expr<D: IdealLiteral>(d: &D, c: &mut Cursor) -> Result<Expr<D::Ideal>> {
    c.skip_ws();
    let start = c.pos;
    let name = c.ident();
    if name == D::ATOM {
        c.pos = start;
        let ideal = atom_extent(c)?;
        return d.parse_ideal(ideal).map(Expr::Atom).map_err(|e| shift(e, c.input, start));
    }
    let Some(op) = Op::from_name(name) else {
        c.pos = start;
        return c.error(format!("expected `{}(...)` or one of mul, colon, add, intersect, inverse, vclose, tclose", D::ATOM));
    };
    c.expect("(")?;
    let mut args = vec![expr(d, c)?];
    while c.eat(",") {
        args.push(expr(d, c)?);
    }
    if args.len() != op.arity() {
        return c.error(format!("`{name}` takes {} argument(s), got {}", op.arity(), args.len()));
    }
    c.expect(")")?;
    Ok(Expr::Call(op, args))
}

/// Consume `name(...)` with balanced parentheses and an optional `/digits`
/// suffix, returning the consumed text.
fn atom_extent<'a>(c: &mut Cursor<'a>) -> Result<&'a str> {
    let start = c.pos;
    c.ident();
    c.expect("(")?;
    let mut depth = 1;
    for (k, ch) in c.rest().char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 {
            c.pos += k + 1;
            break;
        }
    }
    if depth != 0 {
        return c.error("unbalanced parentheses");
    }
    let save = c.pos;
    if c.eat("/") && c.digits().is_none() {
        c.pos = save;
    }
    Ok(&c.input[start..c.pos])
}

/// Re-anchor an error from a sub-parser to the enclosing input.
fn shift(e: Error, input: &str, offset: usize) -> Error {
    match e {
        Error::Parse { pos, msg, .. } => Error::Parse {
            input: input.to_string(),
            pos: pos + offset,
            msg,
        },
        other => other,
    }
}

pub fn parse_expr<D: IdealLiteral>(d: &D, input: &str) -> Result<Expr<D::Ideal>> {
    whole(input, |c| expr(d, c))
}

pub fn eval<D: IdealArithmetic>(d: &D, e: &Expr<D::Ideal>) -> D::Ideal {
    match e {
        Expr::Atom(i) => i.clone(),
        Expr::Call(op, args) => {
            let v: Vec<D::Ideal> = args.iter().map(|a| eval(d, a)).collect();
            match op {
                Op::Mul => d.mul(&v[0], &v[1]),
                Op::Colon => d.colon(&v[0], &v[1]),
                Op::Add => d.add(&v[0], &v[1]),
                Op::Intersect => d.intersect(&v[0], &v[1]),
                Op::Inverse => d.inverse(&v[0]),
                Op::VClose => d.v_closure(&v[0]),
                Op::TClose => d.t_closure(&v[0]),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{QuadraticDomain, ValuationDomain};
    use crate::exact::rat;

    #[test]
    fn reals_round_trip_through_display() {
        for s in ["0", "4-sqrt3", "1/2*sqrt3", "-1+2*sqrt2-sqrt6", "sqrt3/2", "3 + 1/2*sqrt6"] {
            let x = parse_exact_real(s).unwrap();
            assert_eq!(parse_exact_real(&x.to_string()).unwrap(), x, "{s}");
        }
        assert_eq!(
            parse_exact_real("sqrt3/2").unwrap(),
            ExactReal::sqrt3().scale(&rat(1, 2))
        );
    }

    #[test]
    fn quad_elements() {
        assert_eq!(parse_quad_num("1+w").unwrap(), QuadNum::from_ints(1, 1));
        assert_eq!(parse_quad_num("-w").unwrap(), QuadNum::from_ints(0, -1));
        assert_eq!(parse_quad_num("3 - 2*w").unwrap(), QuadNum::from_ints(3, -2));
        assert_eq!(
            parse_quad_num("1/2+3/2w").unwrap(),
            QuadNum::new(rat(1, 2), rat(3, 2))
        );
    }

    #[test]
    fn ideals_and_errors() {
        let o = OrderSpec::new(-5).unwrap();
        let p = parse_quad_ideal(&o, "ideal(2, 1+w)").unwrap();
        assert_eq!(p.to_string(), "ideal(2, 1+w)");
        assert_eq!(parse_quad_ideal(&o, &p.to_string()).unwrap(), p);
        let half = parse_quad_ideal(&o, "ideal(2,1+w)/2").unwrap();
        assert_eq!(half.mul(&o.principal(&QuadNum::from_ints(2, 0)).unwrap()), p);
        match parse_quad_ideal(&o, "ideal(2, 1+w") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 12),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_quad_ideal(&o, "ideal(0)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn domains() {
        assert_eq!(
            parse_domain("quad:d=-5").unwrap(),
            DomainSpec::Quad(OrderSpec::new(-5).unwrap())
        );
        assert!(matches!(parse_domain("quad:d=4"), Err(Error::Validation(_))));
        assert!(matches!(parse_domain("val:gens=1,0"), Err(Error::Validation(_))));
        assert!(matches!(parse_domain("val:gens=1,sqrt2"), Ok(DomainSpec::Val(_))));
        assert!(matches!(parse_domain("ring:x"), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn expressions() {
        let d = QuadraticDomain::with_d(-5).unwrap();
        let e = parse_expr(&d, "colon(ideal(2), ideal(2,1+w))").unwrap();
        assert_eq!(eval(&d, &e).to_string(), "ideal(2, 1+w)");
        assert!(parse_expr(&d, "colon(ideal(2))").is_err());
        let v = ValuationDomain::new(ValueGroup::new(vec![ExactReal::one(), ExactReal::sqrt2()]).unwrap());
        let e = parse_expr(&v, "mul(cut(4-sqrt3, strict), cut(sqrt3, strict))").unwrap();
        assert_eq!(eval(&v, &e).to_string(), "cut(4,strict)");
    }
}
