use std::collections::BTreeMap;

use super::{HomogPoly, MonomialTable};
use crate::error::{Error, Result};
use crate::gf::{FieldDesc, WorkingField};

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    field: &'a FieldDesc,
    n: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::syntax(start, "expected an integer"));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| Error::syntax(start, "integer too large"))
    }

    fn coeff(&mut self) -> Result<u32> {
        match self.peek() {
            Some(b'[') => {
                let open = self.pos;
                let close = self.text[open..]
                    .find(']')
                    .map(|k| open + k)
                    .ok_or_else(|| Error::syntax(open, "unclosed '['"))?;
                let inner = &self.text[open + 1..close];
                self.pos = close + 1;
                self.field.parse_elem(inner).map_err(|e| match e {
                    Error::Syntax { pos, msg } => Error::Syntax { pos: open + 1 + pos, msg },
                    other => other,
                })
            }
            _ => {
                let k = self.int()?;
                Ok((k % self.field.p() as u64) as u32)
            }
        }
    }

    fn expect(&mut self, byte: u8, msg: &str) -> Result<()> {
        if self.peek() != Some(byte) {
            return Err(Error::syntax(self.pos, msg));
        }
        self.pos += 1;
        Ok(())
    }

    /// expr := ['-'] term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Sparse> {
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        }
        let mut acc = Sparse::default();
        loop {
            let mut t = self.term()?;
            if negate {
                t.scale(&self.field.arith(), self.field.arith().neg(1));
            }
            acc.add(&self.field.arith(), t)?;
            match self.peek() {
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    /// term := power ('*' power)*
    fn term(&mut self) -> Result<Sparse> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.power()?;
            acc = acc.mul(&self.field.arith(), &rhs);
        }
        Ok(acc)
    }

    /// power := atom ['^' int]
    fn power(&mut self) -> Result<Sparse> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.pos;
        let k = u32::try_from(self.int()?).map_err(|_| Error::syntax(at, "exponent too large"))?;
        if let Some(exps) = base.single_variable() {
            let exps = exps
                .iter()
                .map(|&e| e.checked_mul(k).ok_or_else(|| Error::syntax(at, "exponent too large")))
                .collect::<Result<Vec<u32>>>()?;
            return Ok(Sparse::monomial(exps, 1));
        }
        let w = self.field.arith();
        let mut acc = Sparse::monomial(vec![0; self.n + 1], 1);
        for _ in 0..k {
            acc = acc.mul(&w, &base);
        }
        Ok(acc)
    }

    /// atom := 'x' index | coefficient | '(' expr ')'
    fn atom(&mut self) -> Result<Sparse> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                if !matches!(self.bytes.get(self.pos), Some(b) if b.is_ascii_digit()) {
                    return Err(Error::syntax(self.pos, "expected a variable index"));
                }
                let index = self.int()? as usize;
                if index > self.n {
                    return Err(Error::BadVariableIndex { index, n: self.n });
                }
                let mut exps = vec![0; self.n + 1];
                exps[index] = 1;
                Ok(Sparse::monomial(exps, 1))
            }
            Some(b'[') | Some(b'0'..=b'9') => {
                let c = self.coeff()?;
                Ok(Sparse::monomial(vec![0; self.n + 1], c))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')', "expected ')'")?;
                Ok(inner)
            }
            _ => Err(Error::syntax(self.pos, "expected a variable 'x<i>', a coefficient or '('")),
        }
    }
}

/// Homogeneous sparse polynomial; zero coefficients are kept so that the
/// degree of cancelling expressions is still known.
#[derive(Default)]
struct Sparse {
    terms: BTreeMap<Vec<u32>, u32>,
    degree: Option<u32>,
}

impl Sparse {
    fn monomial(exps: Vec<u32>, c: u32) -> Self {
        let degree = Some(exps.iter().sum());
        Sparse {
            terms: BTreeMap::from([(exps, c)]),
            degree,
        }
    }

    /// The exponent vector of a bare monomial with coefficient 1.
    fn single_variable(&self) -> Option<&Vec<u32>> {
        match self.terms.iter().next() {
            Some((e, &1)) if self.terms.len() == 1 => Some(e),
            _ => None,
        }
    }

    fn scale(&mut self, w: &WorkingField, c: u32) {
        for v in self.terms.values_mut() {
            *v = w.mul(*v, c);
        }
    }

    fn add(&mut self, w: &WorkingField, other: Sparse) -> Result<()> {
        match (self.degree, other.degree) {
            (Some(d0), Some(d)) if d0 != d => return Err(Error::NotHomogeneous(d0, d)),
            (None, d) => self.degree = d,
            _ => {}
        }
        for (e, c) in other.terms {
            let slot = self.terms.entry(e).or_insert(0);
            *slot = w.add(*slot, c);
        }
        Ok(())
    }

    fn mul(&self, w: &WorkingField, other: &Sparse) -> Sparse {
        let mut terms = BTreeMap::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let slot = terms.entry(e).or_insert(0);
                *slot = w.add(*slot, w.mul(ca, cb));
            }
        }
        Sparse {
            terms,
            degree: self.degree.zip(other.degree).map(|(x, y)| x + y),
        }
    }
}

pub(super) fn parse_poly(text: &str, field: &FieldDesc, n: usize) -> Result<HomogPoly> {
    let mut parser = Parser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
        field,
        n,
    };
    let sparse = parser.expr()?;
    if parser.peek().is_some() {
        return Err(Error::syntax(parser.pos, "expected '+', '-' or end of input"));
    }
    let d = sparse.degree.unwrap_or(0);
    let mut f = HomogPoly::zero(field, n, d);
    let table = MonomialTable::get(n, d);
    for (exps, c) in sparse.terms {
        let i = table.index_of(&exps).expect("homogeneous of degree d");
        f.coeffs[i] = c;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let f2 = FieldDesc::new(2, 1).unwrap();
        let f = parse_poly("x0^3 + x1^3 + x2^3", &f2, 2).unwrap();
        assert_eq!(f.degree(), 3);
        assert_eq!(f.terms().count(), 3);
        let g = parse_poly("x0*x1^2 + x2^3", &f2, 2).unwrap();
        assert_eq!(g.terms().count(), 2);
        assert_eq!(g.to_string(), "x0*x1^2+x2^3");
        assert_eq!(parse_poly("x0 + x1^2", &f2, 2), Err(Error::NotHomogeneous(1, 2)));
    }

    #[test]
    fn parse_errors_and_coefficients() {
        let f2 = FieldDesc::new(2, 1).unwrap();
        assert_eq!(
            parse_poly("x3", &f2, 2),
            Err(Error::BadVariableIndex { index: 3, n: 2 })
        );
        assert!(matches!(parse_poly("x0 + * x1", &f2, 2), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse_poly("[g]*x0", &f2, 2), Err(Error::CoefficientNotInField(_))));
        let f3 = FieldDesc::new(3, 1).unwrap();
        let f = parse_poly("x0*x1 - x1*x0 + 4*x2^2", &f3, 2).unwrap();
        assert_eq!(f.to_string(), "x2^2");
        let h = parse_poly("-x0", &f3, 1).unwrap();
        assert_eq!(h.to_string(), "2*x0");
        let f4 = FieldDesc::new(2, 2).unwrap();
        let k = parse_poly("[g+1]*x0*x1 + x1 * x1", &f4, 1).unwrap();
        assert_eq!(k.to_string(), "[g+1]*x0*x1+x1^2");
        assert_eq!(parse_poly("0", &f2, 2).unwrap().degree(), 0);
    }

    #[test]
    fn parentheses_and_powers() {
        let f2 = FieldDesc::new(2, 1).unwrap();
        let f = parse_poly("x0*(x1^2+x1*x2+x2^2)", &f2, 2).unwrap();
        assert_eq!(f, parse_poly("x0*x1^2+x0*x1*x2+x0*x2^2", &f2, 2).unwrap());
        let g = parse_poly("(x0+x1)^2", &f2, 2).unwrap();
        assert_eq!(g.to_string(), parse_poly("x0^2+x1^2", &f2, 2).unwrap().to_string());
        let f3 = FieldDesc::new(3, 1).unwrap();
        let h = parse_poly("-(x0-x1)*(x0+x1)", &f3, 1).unwrap();
        assert_eq!(h, parse_poly("x1^2-x0^2", &f3, 1).unwrap());
        assert_eq!(parse_poly("(x0^2)^3", &f3, 1).unwrap().degree(), 6);
        assert_eq!(parse_poly("x0*(x1+x2^2)", &f2, 2), Err(Error::NotHomogeneous(1, 2)));
        assert!(matches!(parse_poly("(x0+x1", &f2, 2), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(parse_poly("x0)", &f2, 2), Err(Error::Syntax { pos: 2, .. })));
    }
}
