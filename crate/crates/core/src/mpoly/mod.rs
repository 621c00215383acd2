//! Dense homogeneous polynomials over F_q.
//!
//! A form of degree d in x_0..x_n is a coefficient vector indexed by a
//! [`MonomialTable`]. Coefficients are base-field codes; evaluation embeds
//! them into whichever [`WorkingField`] the point lives in.

mod parse;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Range;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldDesc, WorkingField};

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Exponent vectors of the degree-d monomials in x_0..x_n.
///
/// Order is graded colexicographic: monomials are sorted by the exponent of
/// x_n first, then x_{n-1}, and so on, so `x0^d` comes first and `xn^d` last.
#[derive(Debug)]
pub struct MonomialTable {
    n: usize,
    d: u32,
    exps: Vec<u32>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialTable {
    /// Shared table for (n, d).
    pub fn get(n: usize, d: u32) -> Arc<MonomialTable> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<MonomialTable>>>> =
            OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().unwrap().get(&(n, d)) {
            return t.clone();
        }
        let table = Arc::new(MonomialTable::build(n, d));
        cache.lock().unwrap().entry((n, d)).or_insert(table).clone()
    }

    fn build(n: usize, d: u32) -> Self {
        fn rec(var: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<u32>) {
            if var == 0 {
                cur[0] = left;
                out.extend_from_slice(cur);
                return;
            }
            for k in 0..=left {
                cur[var] = k;
                rec(var - 1, left - k, cur, out);
            }
            cur[var] = 0;
        }
        let mut exps = Vec::new();
        let mut cur = vec![0; n + 1];
        rec(n, d, &mut cur, &mut exps);
        let index = exps
            .chunks(n + 1)
            .enumerate()
            .map(|(i, e)| (e.to_vec(), i))
            .collect();
        MonomialTable { n, d, exps, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.exps.len() / (self.n + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exps(&self, i: usize) -> &[u32] {
        &self.exps[i * (self.n + 1)..(i + 1) * (self.n + 1)]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.exps.chunks(self.n + 1)
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }
}

/// A form f ∈ S_d over F_q.
#[derive(Clone)]
pub struct HomogPoly {
    base: Arc<WorkingField>,
    n: usize,
    d: u32,
    coeffs: Vec<u32>,
}

impl PartialEq for HomogPoly {
    fn eq(&self, other: &Self) -> bool {
        *self.base == *other.base && self.n == other.n && self.d == other.d && self.coeffs == other.coeffs
    }
}

impl Eq for HomogPoly {}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomogPoly({} over {}, deg {})", self, self.field(), self.d)
    }
}

impl HomogPoly {
    pub fn zero(field: &FieldDesc, n: usize, d: u32) -> Self {
        let len = MonomialTable::get(n, d).len();
        HomogPoly {
            base: field.arith(),
            n,
            d,
            coeffs: vec![0; len],
        }
    }

    pub fn from_coeffs(field: &FieldDesc, n: usize, d: u32, coeffs: Vec<u32>) -> Result<Self> {
        let len = MonomialTable::get(n, d).len();
        if coeffs.len() != len {
            return Err(Error::InvalidInput(format!(
                "expected {len} coefficients, got {}",
                coeffs.len()
            )));
        }
        let q = field.q();
        if let Some(&c) = coeffs.iter().find(|&&c| c as u64 >= q) {
            return Err(Error::CoefficientNotInField(c.to_string()));
        }
        Ok(HomogPoly {
            base: field.arith(),
            n,
            d,
            coeffs,
        })
    }

    /// c · x^exps.
    pub fn monomial(field: &FieldDesc, exps: &[u32], c: u32) -> Self {
        let n = exps.len() - 1;
        let d = exps.iter().sum();
        let mut f = HomogPoly::zero(field, n, d);
        let i = f.table().index_of(exps).expect("exponents sum to d");
        f.coeffs[i] = c;
        f
    }

    /// Parses the textual grammar `poly := term ('+' term | '-' term)*`.
    pub fn parse(text: &str, field: &FieldDesc, n: usize) -> Result<Self> {
        parse::parse_poly(text, field, n)
    }

    /// Uniform element of S_d: every coefficient independently uniform in F_q.
    pub fn random<R: Rng + ?Sized>(field: &FieldDesc, n: usize, d: u32, rng: &mut R) -> Self {
        let len = MonomialTable::get(n, d).len();
        let q = field.q() as u32;
        HomogPoly {
            base: field.arith(),
            n,
            d,
            coeffs: (0..len).map(|_| rng.gen_range(0..q)).collect(),
        }
    }

    pub fn field(&self) -> &FieldDesc {
        self.base.base()
    }

    /// F_q as a working field.
    pub fn base(&self) -> &Arc<WorkingField> {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn table(&self) -> Arc<MonomialTable> {
        MonomialTable::get(self.n, self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn coeff(&self, exps: &[u32]) -> u32 {
        self.table().index_of(exps).map_or(0, |i| self.coeffs[i])
    }

    /// Nonzero terms in table order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, u32)> + '_ {
        let table = self.table();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (table.exps(i).to_vec(), c))
            .collect::<Vec<_>>()
            .into_iter()
    }

    fn check_compatible(&self, other: &HomogPoly) -> Result<()> {
        if *self.base != *other.base || self.n != other.n {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.check_compatible(other)?;
        if self.d != other.d {
            return Err(Error::NotHomogeneous(self.d, other.d));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&x, &y)| self.base.add(x, y))
            .collect();
        Ok(HomogPoly { coeffs, ..self.clone() })
    }

    pub fn scale(&self, c: u32) -> HomogPoly {
        let coeffs = self.coeffs.iter().map(|&x| self.base.mul(x, c)).collect();
        HomogPoly { coeffs, ..self.clone() }
    }

    pub fn mul(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.check_compatible(other)?;
        let d = self.d + other.d;
        let mut out = HomogPoly::zero(self.field(), self.n, d);
        let table = out.table();
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let e: Vec<u32> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
                let i = table.index_of(&e).expect("degree adds up");
                out.coeffs[i] = self.base.add(out.coeffs[i], self.base.mul(ca, cb));
            }
        }
        Ok(out)
    }

    /// Formal partial derivative ∂f/∂x_i, of degree d-1 (the zero form of
    /// degree 0 when d = 0).
    pub fn derive(&self, i: usize) -> HomogPoly {
        assert!(i <= self.n, "variable index out of range");
        if self.d == 0 {
            return HomogPoly::zero(self.field(), self.n, 0);
        }
        let mut out = HomogPoly::zero(self.field(), self.n, self.d - 1);
        let table = out.table();
        for (mut e, c) in self.terms() {
            if e[i] == 0 {
                continue;
            }
            let k = self.base.from_int(e[i] as i64);
            e[i] -= 1;
            let j = table.index_of(&e).expect("degree d-1");
            out.coeffs[j] = self.base.mul(c, k);
        }
        out
    }

    /// Substitutes x_j = 1. The other variables keep their original indices.
    pub fn dehomogenize(&self, j: usize) -> AffinePoly {
        assert!(j <= self.n, "chart index out of range");
        let vars: Vec<usize> = (0..=self.n).filter(|&i| i != j).collect();
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms() {
            let key: Vec<u32> = vars.iter().map(|&i| e[i]).collect();
            let slot = terms.entry(key).or_insert(0);
            *slot = self.base.add(*slot, c);
        }
        terms.retain(|_, c| *c != 0);
        AffinePoly {
            base: self.base.clone(),
            vars,
            terms,
        }
    }

    /// Coefficients embedded into `w`.
    pub fn embedded(&self, w: &WorkingField) -> Result<Vec<u32>> {
        if w.base() != self.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(self.coeffs.iter().map(|&c| w.embed(c)).collect())
    }

    /// f(point) with coefficients embedded into the point's field. Uses a
    /// per-point table of coordinate powers up to d.
    pub fn eval(&self, w: &WorkingField, point: &[u32]) -> Result<u32> {
        if w.base() != self.field() {
            return Err(Error::FieldMismatch);
        }
        if point.len() != self.n + 1 {
            return Err(Error::InvalidInput(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                self.n + 1
            )));
        }
        let powers = power_table(w, point, self.d);
        let stride = self.d as usize + 1;
        let table = self.table();
        let mut acc = 0;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut term = w.embed(c);
            for (i, &a) in table.exps(k).iter().enumerate() {
                term = w.mul(term, powers[i * stride + a as usize]);
            }
            acc = w.add(acc, term);
        }
        Ok(acc)
    }

    /// Value, gradient and quadratic part of the chart dehomogenization at a
    /// normalized point, by substituting x_i = p_i + u_i and truncating at
    /// total degree 2.
    pub fn jet2(&self, w: &WorkingField, point: &[u32]) -> Result<Jet2> {
        if w.base() != self.field() {
            return Err(Error::FieldMismatch);
        }
        let chart = normalized_lead(point, self.n)?;
        let local: Vec<usize> = (0..=self.n).filter(|&i| i != chart).collect();
        let k = local.len();
        let qlen = k * (k + 1) / 2;
        let mut value = 0;
        let mut gradient = vec![0; k];
        let mut quad = vec![0; qlen];
        let powers = power_table(w, point, self.d);
        let stride = self.d as usize + 1;
        let pw = |i: usize, a: i64| -> u32 {
            if a < 0 {
                0
            } else {
                powers[i * stride + a as usize]
            }
        };
        let table = self.table();
        let mut lin = vec![0; k];
        let mut qd = vec![0; qlen];
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let e = table.exps(idx);
            let mut val = w.embed(c);
            lin.iter_mut().for_each(|x| *x = 0);
            qd.iter_mut().for_each(|x| *x = 0);
            for (li, &var) in local.iter().enumerate() {
                let a = e[var] as i64;
                if a == 0 {
                    continue;
                }
                // (p + u)^a = p^a + a p^(a-1) u + C(a,2) p^(a-2) u^2 + ...
                let s0 = pw(var, a);
                let s1 = w.mul(w.from_int(a), pw(var, a - 1));
                let s2 = w.mul(w.from_int(a * (a - 1) / 2), pw(var, a - 2));
                for x in 0..k {
                    for y in x..k {
                        let qi = quad_index(k, x, y);
                        let mut v = w.mul(qd[qi], s0);
                        if x == li && y == li {
                            v = w.add(v, w.add(w.mul(lin[li], s1), w.mul(val, s2)));
                        } else if y == li {
                            v = w.add(v, w.mul(lin[x], s1));
                        } else if x == li {
                            v = w.add(v, w.mul(lin[y], s1));
                        }
                        qd[qi] = v;
                    }
                }
                for x in 0..k {
                    lin[x] = w.mul(lin[x], s0);
                }
                lin[li] = w.add(lin[li], w.mul(val, s1));
                val = w.mul(val, s0);
            }
            value = w.add(value, val);
            for x in 0..k {
                gradient[x] = w.add(gradient[x], lin[x]);
            }
            for x in 0..qlen {
                quad[x] = w.add(quad[x], qd[x]);
            }
        }
        Ok(Jet2 {
            chart,
            value,
            gradient,
            quad,
        })
    }

    /// Canonical representative up to F_q^* scaling: first nonzero
    /// coefficient (in table order) equal to 1.
    pub fn monic(&self) -> HomogPoly {
        match self.coeffs.iter().find(|&&c| c != 0) {
            Some(&c) => self.scale(self.base.inv(c).expect("nonzero")),
            None => self.clone(),
        }
    }

    fn format_coeff(&self, c: u32) -> String {
        let p = self.base.p();
        if c < p {
            c.to_string()
        } else {
            format!("[{}]", self.field().format_elem(c))
        }
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            let mut factors = Vec::new();
            if c != 1 || self.d == 0 {
                factors.push(self.format_coeff(c));
            }
            for (i, &a) in e.iter().enumerate() {
                match a {
                    0 => {}
                    1 => factors.push(format!("x{i}")),
                    a => factors.push(format!("x{i}^{a}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Index of the smallest nonvanishing coordinate, which must equal 1.
pub(crate) fn normalized_lead(point: &[u32], n: usize) -> Result<usize> {
    if point.len() != n + 1 {
        return Err(Error::InvalidInput(format!(
            "point has {} coordinates, expected {}",
            point.len(),
            n + 1
        )));
    }
    match point.iter().position(|&x| x != 0) {
        Some(j) if point[j] == 1 => Ok(j),
        Some(_) => Err(Error::InvalidInput("point is not normalized".into())),
        None => Err(Error::InvalidInput("the zero vector is not a point".into())),
    }
}

fn power_table(w: &WorkingField, point: &[u32], d: u32) -> Vec<u32> {
    let stride = d as usize + 1;
    let mut powers = vec![0; point.len() * stride];
    for (i, &x) in point.iter().enumerate() {
        powers[i * stride] = 1;
        for a in 1..stride {
            powers[i * stride + a] = w.mul(powers[i * stride + a - 1], x);
        }
    }
    powers
}

/// Position of the (x, y) coefficient, x ≤ y, in a packed upper triangle.
pub(crate) fn quad_index(k: usize, x: usize, y: usize) -> usize {
    debug_assert!(x <= y && y < k);
    x * k - x * (x + 1) / 2 + y
}

/// Order-2 local data of a form at a point, in the chart of the point's
/// smallest nonvanishing coordinate. Local coordinates are the remaining
/// variables in increasing index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet2 {
    pub chart: usize,
    pub value: u32,
    pub gradient: Vec<u32>,
    /// Upper triangle: coefficient of u_x·u_y for x ≤ y.
    pub quad: Vec<u32>,
}

impl Jet2 {
    pub fn quad_coeff(&self, x: usize, y: usize) -> u32 {
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        self.quad[quad_index(self.gradient.len(), x, y)]
    }
}

/// A dehomogenized polynomial of total degree ≤ d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePoly {
    base: Arc<WorkingField>,
    /// Original indices of the remaining variables.
    vars: Vec<usize>,
    terms: BTreeMap<Vec<u32>, u32>,
}

impl AffinePoly {
    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, u32> {
        &self.terms
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&a| a == 0))
    }

    /// Re-inserts the chart variable x_j to total degree d.
    pub fn homogenize(&self, j: usize, d: u32) -> Result<HomogPoly> {
        let n = self.vars.len();
        let mut f = HomogPoly::zero(self.base.base(), n, d);
        let table = f.table();
        for (e, &c) in &self.terms {
            let deg: u32 = e.iter().sum();
            if deg > d {
                return Err(Error::InvalidInput(format!("term of degree {deg} exceeds {d}")));
            }
            let mut full = vec![0; n + 1];
            for (k, &var) in self.vars.iter().enumerate() {
                full[var] = e[k];
            }
            full[j] = d - deg;
            f.coeffs[table.index_of(&full).unwrap()] = c;
        }
        Ok(f)
    }

    pub fn eval(&self, w: &WorkingField, values: &[u32]) -> u32 {
        self.terms.iter().fold(0, |acc, (e, &c)| {
            let term = e
                .iter()
                .zip(values)
                .fold(w.embed(c), |t, (&a, &x)| w.mul(t, w.pow(x, a as u64)));
            w.add(acc, term)
        })
    }
}

/// The space S_d enumerated as a base-q counter over coefficient vectors
/// (coefficient 0 is the least significant digit).
#[derive(Clone)]
pub struct FormSpace {
    field: FieldDesc,
    n: usize,
    d: u32,
    dim: usize,
}

impl FormSpace {
    pub fn new(field: &FieldDesc, n: usize, d: u32) -> Self {
        FormSpace {
            field: field.clone(),
            n,
            d,
            dim: MonomialTable::get(n, d).len(),
        }
    }

    /// Like [`FormSpace::new`] but refuses spaces with more than `budget` forms.
    pub fn bounded(field: &FieldDesc, n: usize, d: u32, budget: u64) -> Result<Self> {
        let space = FormSpace::new(field, n, d);
        match space.count() {
            Some(c) if c <= budget => Ok(space),
            _ => Err(Error::budget(
                format!("{}^{}", field.q(), space.dim),
                budget,
            )),
        }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// q^dim, if it fits in a u64.
    pub fn count(&self) -> Option<u64> {
        self.field.q().checked_pow(self.dim as u32)
    }

    pub fn form(&self, index: u64) -> HomogPoly {
        let q = self.field.q();
        let mut rest = index;
        let coeffs = (0..self.dim)
            .map(|_| {
                let c = rest % q;
                rest /= q;
                c as u32
            })
            .collect();
        HomogPoly::from_coeffs(&self.field, self.n, self.d, coeffs).expect("digits are below q")
    }

    /// The k-th of `of` contiguous slices of the index range.
    pub fn shard(&self, k: u64, of: u64) -> Range<u64> {
        let total = self.count().expect("enumerable space");
        let lo = total / of * k + (total % of).min(k);
        let hi = total / of * (k + 1) + (total % of).min(k + 1);
        lo..hi
    }

    pub fn iter(&self, range: Range<u64>) -> FormIter {
        FormIter {
            current: if range.is_empty() {
                None
            } else {
                Some(self.form(range.start))
            },
            remaining: range.end.saturating_sub(range.start),
            q: self.field.q() as u32,
        }
    }
}

pub struct FormIter {
    current: Option<HomogPoly>,
    remaining: u64,
    q: u32,
}

impl Iterator for FormIter {
    type Item = HomogPoly;

    fn next(&mut self) -> Option<HomogPoly> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let cur = self.current.as_mut()?;
        let out = cur.clone();
        if self.remaining > 0 {
            for c in cur.coeffs.iter_mut() {
                *c += 1;
                if *c < self.q {
                    break;
                }
                *c = 0;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> FieldDesc {
        FieldDesc::new(2, 1).unwrap()
    }

    fn parse(s: &str, field: &FieldDesc, n: usize) -> HomogPoly {
        HomogPoly::parse(s, field, n).unwrap()
    }

    #[test]
    fn monomial_table_order() {
        let t = MonomialTable::get(2, 1);
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![&[1, 0, 0][..], &[0, 1, 0], &[0, 0, 1]]);
        let t = MonomialTable::get(2, 3);
        assert_eq!(t.len(), 10);
        assert_eq!(t.exps(0), &[3, 0, 0]);
        assert_eq!(t.exps(9), &[0, 0, 3]);
        assert_eq!(MonomialTable::get(3, 20).len() as u64, binomial(23, 3));
    }

    #[test]
    fn enumerate_counts_and_shards() {
        let s = FormSpace::new(&f2(), 2, 3);
        assert_eq!(s.count(), Some(1024));
        let s1 = FormSpace::new(&f2(), 1, 2);
        let all: Vec<_> = s1.iter(0..8).collect();
        assert_eq!(all.len(), 8);
        assert!(all[0].is_zero());
        let mut seen = std::collections::HashSet::new();
        for k in 0..4 {
            let r = s.shard(k, 4);
            assert_eq!(r.end - r.start, 256);
            for f in s.iter(r) {
                assert!(seen.insert(f.coeffs().to_vec()));
            }
        }
        assert_eq!(seen.len(), 1024);
        assert!(FormSpace::bounded(&f2(), 2, 3, 1000).is_err());
    }

    #[test]
    fn sharded_union_equals_stream() {
        let f3 = FieldDesc::new(3, 1).unwrap();
        let s = FormSpace::new(&f3, 1, 3);
        let whole: Vec<_> = s.iter(0..s.count().unwrap()).collect();
        let sharded: Vec<_> = (0..7).flat_map(|k| s.iter(s.shard(k, 7))).collect();
        assert_eq!(whole, sharded);
        for (i, f) in whole.iter().enumerate() {
            assert_eq!(*f, s.form(i as u64));
        }
    }

    #[test]
    fn derive_examples() {
        let f2 = f2();
        assert!(parse("x0^2", &f2, 2).derive(0).is_zero());
        assert_eq!(parse("x0^3 + x1^3 + x2^3", &f2, 2).derive(1), parse("x1^2", &f2, 2));
        let f3 = FieldDesc::new(3, 1).unwrap();
        assert_eq!(parse("x0*x1^2", &f3, 1).derive(1), parse("2*x0*x1", &f3, 1));
        let c = parse("1", &f2, 2);
        assert_eq!(c.derive(0).degree(), 0);
    }

    #[test]
    fn dehomogenize_examples() {
        let f2 = f2();
        let f = parse("x0*x1^2 + x2^3", &f2, 2);
        let a = f.dehomogenize(0);
        assert_eq!(a.vars(), &[1, 2]);
        let keys: Vec<_> = a.terms().keys().cloned().collect();
        assert_eq!(keys, vec![vec![0, 3], vec![2, 0]]);
        let c = parse("x0^4", &f2, 2).dehomogenize(0);
        assert!(c.is_constant());
        assert_eq!(c.terms().get(&vec![0, 0]), Some(&1));
        let g = parse("x1*x2^2", &f2, 2);
        assert_eq!(g.dehomogenize(0).homogenize(0, 3).unwrap(), g);
    }

    #[test]
    fn eval_examples() {
        let f2 = f2();
        let w = f2.arith();
        assert_eq!(parse("x0^3+x1^3+x2^3", &f2, 2).eval(&w, &[1, 1, 1]).unwrap(), 1);
        assert_eq!(parse("x0*x1", &f2, 1).eval(&w, &[0, 1]).unwrap(), 0);
        let w4 = f2.extend(2).unwrap();
        assert_eq!(parse("x0^2+x0*x1", &f2, 1).eval(&w4, &[2, 1]).unwrap(), 1);
        let f8 = FieldDesc::new(2, 3).unwrap().arith();
        assert_eq!(parse("x0", &f2, 1).eval(&f8, &[1, 0]), Err(Error::FieldMismatch));
    }

    #[test]
    fn jet_examples() {
        let f2 = f2();
        let w = f2.arith();
        let j = parse("x1*x2", &f2, 2).jet2(&w, &[1, 0, 0]).unwrap();
        assert_eq!((j.value, j.gradient.clone()), (0, vec![0, 0]));
        assert_eq!((j.quad_coeff(0, 0), j.quad_coeff(0, 1), j.quad_coeff(1, 1)), (0, 1, 0));
        let j = parse("x0*x1^2 + x2^3", &f2, 2).jet2(&w, &[1, 0, 0]).unwrap();
        assert_eq!((j.value, j.gradient.clone()), (0, vec![0, 0]));
        assert_eq!((j.quad_coeff(0, 0), j.quad_coeff(0, 1), j.quad_coeff(1, 1)), (1, 0, 0));
        let j = parse("x0^3", &f2, 2).jet2(&w, &[1, 0, 0]).unwrap();
        assert_eq!((j.value, j.gradient, j.quad), (1, vec![0, 0], vec![0, 0, 0]));
    }

    #[test]
    fn jet_recenters_at_a_shifted_point() {
        // x1^2 + x1*x2 at (1:1:0) over F_3: u = x1-1, v = x2.
        // (1+u)^2 + (1+u)v = 1 + 2u + v + u^2 + uv.
        let f3 = FieldDesc::new(3, 1).unwrap();
        let w = f3.arith();
        let j = parse("x1^2 + x1*x2", &f3, 2).jet2(&w, &[1, 1, 0]).unwrap();
        assert_eq!(j.value, 1);
        assert_eq!(j.gradient, vec![2, 1]);
        assert_eq!(j.quad, vec![1, 1, 0]);
    }

    #[test]
    fn sampling_is_uniform_and_seeded() {
        let f2 = f2();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws = 100_000;
        let ones = (0..draws)
            .filter(|_| HomogPoly::random(&f2, 2, 3, &mut rng).coeffs()[4] == 1)
            .count();
        assert!((ones as f64 / draws as f64 - 0.5).abs() < 0.01);

        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            assert_eq!(HomogPoly::random(&f2, 2, 3, &mut a), HomogPoly::random(&f2, 2, 3, &mut b));
        }

        // Chi-square on the first coefficient over F_4, 3 degrees of freedom.
        // The 1e-6 upper quantile of chi2(3) is about 30.66.
        let f4 = FieldDesc::new(2, 2).unwrap();
        let mut counts = [0f64; 4];
        for _ in 0..draws {
            counts[HomogPoly::random(&f4, 2, 3, &mut rng).coeffs()[0] as usize] += 1.0;
        }
        let expected = draws as f64 / 4.0;
        let chi2: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
        assert!(chi2 < 30.66, "chi2 = {chi2}");
    }

    #[test]
    fn mul_and_monic() {
        let f4 = FieldDesc::new(2, 2).unwrap();
        let g = parse("x0 + [g]*x1", &f4, 1);
        let h = parse("x0 + [g+1]*x1", &f4, 1);
        assert_eq!(g.mul(&h).unwrap(), parse("x0^2 + x0*x1 + x1^2", &f4, 1));
        assert_eq!(parse("[g]*x1 + [g]*x0", &f4, 1).monic(), parse("x0+x1", &f4, 1));
    }

    fn arb_form(p: u64, a: u32, n: usize, d: u32) -> impl Strategy<Value = HomogPoly> {
        let field = FieldDesc::new(p, a).unwrap();
        let len = MonomialTable::get(n, d).len();
        proptest::collection::vec(0..field.q() as u32, len)
            .prop_map(move |c| HomogPoly::from_coeffs(&field, n, d, c).unwrap())
    }

    fn euler_holds(f: &HomogPoly) {
        let n = f.n();
        let field = f.field().clone();
        let mut lhs = HomogPoly::zero(&field, n, f.degree());
        for i in 0..=n {
            let mut xi = vec![0; n + 1];
            xi[i] = 1;
            let term = HomogPoly::monomial(&field, &xi, 1).mul(&f.derive(i)).unwrap();
            lhs = lhs.add(&term).unwrap();
        }
        let d = f.base().from_int(f.degree() as i64);
        assert_eq!(lhs, f.scale(d));
    }

    proptest! {
        #[test]
        fn euler_relation_f2(f in arb_form(2, 1, 2, 4)) { euler_holds(&f); }

        #[test]
        fn euler_relation_f3(f in arb_form(3, 1, 2, 3)) { euler_holds(&f); }

        #[test]
        fn euler_relation_f4(f in arb_form(2, 2, 2, 3)) { euler_holds(&f); }

        #[test]
        fn print_parse_roundtrip(f in arb_form(2, 2, 3, 3)) {
            let g = HomogPoly::parse(&f.to_string(), f.field(), 3).unwrap();
            // The zero form prints as "0", which parses as degree 0.
            if !f.is_zero() { prop_assert_eq!(g, f); }
        }

        #[test]
        fn jet_agrees_with_eval_and_derive(f in arb_form(3, 1, 2, 4), x in 0u32..27, y in 0u32..27) {
            let w = f.field().extend(3).unwrap();
            for point in [[1, x, y], [0, 1, y], [0, 0, 1]] {
                let j = f.jet2(&w, &point).unwrap();
                prop_assert_eq!(j.value, f.eval(&w, &point).unwrap());
                let local: Vec<usize> = (0..3).filter(|&i| i != j.chart).collect();
                for (k, &i) in local.iter().enumerate() {
                    prop_assert_eq!(j.gradient[k], f.derive(i).eval(&w, &point).unwrap());
                }
            }
        }

        #[test]
        fn vanishing_is_chart_independent(f in arb_form(2, 1, 2, 3), x in 1u32..16, y in 0u32..16) {
            // (1 : x : y) rescaled to (x^-1 : 1 : y x^-1); values differ by x^d.
            let w = f.field().extend(4).unwrap();
            let xi = w.inv(x).unwrap();
            let a = f.eval(&w, &[1, x, y]).unwrap();
            let b = f.eval(&w, &[xi, 1, w.mul(y, xi)]).unwrap();
            prop_assert_eq!(a, w.mul(b, w.pow(x, f.degree() as u64)));
        }
    }
}
