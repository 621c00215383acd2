//! Quasiprojective subschemes of P^n, their rational points and closed points.
//!
//! X is cut out by closed generators and, optionally, made open by a list of
//! forms of which at least one must be nonzero at every point of X.

use std::cmp::Ordering;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldDesc, WorkingField};
use crate::linalg::Matrix;
use crate::mpoly::HomogPoly;
use crate::scan;

/// Spaces recognised by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Named {
    Projective,
    Affine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubschemeSpec {
    name: String,
    field: FieldDesc,
    n: usize,
    m: usize,
    closed: Vec<HomogPoly>,
    open_nonvanishing: Vec<HomogPoly>,
}

/// On-disk form of a [`SubschemeSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyFile {
    pub name: String,
    pub p: u64,
    pub a: u32,
    pub n: usize,
    pub m: usize,
    #[serde(default)]
    pub closed: Vec<String>,
    #[serde(default)]
    pub open_nonvanishing: Vec<String>,
}

impl SubschemeSpec {
    pub fn new(
        name: impl Into<String>,
        field: &FieldDesc,
        n: usize,
        m: usize,
        closed: Vec<HomogPoly>,
        open_nonvanishing: Vec<HomogPoly>,
    ) -> Result<Self> {
        if m > n {
            return Err(Error::InvalidInput(format!("dimension {m} exceeds ambient dimension {n}")));
        }
        for g in closed.iter().chain(&open_nonvanishing) {
            if g.field() != field || g.n() != n {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(SubschemeSpec {
            name: name.into(),
            field: field.clone(),
            n,
            m,
            closed,
            open_nonvanishing,
        })
    }

    pub fn projective_space(field: &FieldDesc, n: usize) -> Self {
        SubschemeSpec::new(format!("P^{n}"), field, n, n, vec![], vec![]).expect("valid")
    }

    /// A^n as the open set {x0 ≠ 0} of P^n.
    pub fn affine_space(field: &FieldDesc, n: usize) -> Self {
        let mut e = vec![0; n + 1];
        e[0] = 1;
        let x0 = HomogPoly::monomial(field, &e, 1);
        SubschemeSpec::new(format!("A^{n}"), field, n, n, vec![], vec![x0]).expect("valid")
    }

    /// The hypersurface Σ_i x_i·y_i^q − x_i^q·y_i in P^{2·pairs+1}.
    pub fn katz(field: &FieldDesc, pairs: usize) -> Self {
        let f = crate::construct::katz_hypersurface(field, pairs);
        let n = 2 * pairs + 1;
        SubschemeSpec::new(
            format!("katz({pairs},{})", field.q()),
            field,
            n,
            n - 1,
            vec![f],
            vec![],
        )
        .expect("valid")
    }

    /// Resolves `P^n`, `Pn`, `A^n`, `An` over `field`, and `katz(n,q)`.
    pub fn builtin(name: &str, field: Option<&FieldDesc>) -> Result<Option<Self>> {
        let name = name.trim();
        if let Some(args) = name.strip_prefix("katz(").and_then(|s| s.strip_suffix(')')) {
            let parts: Vec<&str> = args.split(',').map(str::trim).collect();
            let [pairs, q] = parts[..] else {
                return Err(Error::InvalidInput(format!("expected katz(n,q), got {name}")));
            };
            let pairs: usize = pairs
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad pair count in {name}")))?;
            let q: u64 = q
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad field size in {name}")))?;
            let fd = FieldDesc::from_order(q)?;
            if let Some(f) = field {
                if *f != fd {
                    return Err(Error::FieldMismatch);
                }
            }
            return Ok(Some(SubschemeSpec::katz(&fd, pairs)));
        }
        let (kind, rest) = match name.chars().next() {
            Some('P') => (Named::Projective, &name[1..]),
            Some('A') => (Named::Affine, &name[1..]),
            _ => return Ok(None),
        };
        let rest = rest.strip_prefix('^').unwrap_or(rest);
        let Ok(n) = rest.parse::<usize>() else {
            return Ok(None);
        };
        let field = field.ok_or_else(|| Error::InvalidInput(format!("{name} needs a field")))?;
        Ok(Some(match kind {
            Named::Projective => SubschemeSpec::projective_space(field, n),
            Named::Affine => SubschemeSpec::affine_space(field, n),
        }))
    }

    pub fn from_file(file: &VarietyFile) -> Result<Self> {
        let field = FieldDesc::new(file.p, file.a)?;
        let parse = |list: &[String]| -> Result<Vec<HomogPoly>> {
            list.iter().map(|t| HomogPoly::parse(t, &field, file.n)).collect()
        };
        SubschemeSpec::new(
            file.name.clone(),
            &field,
            file.n,
            file.m,
            parse(&file.closed)?,
            parse(&file.open_nonvanishing)?,
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: VarietyFile =
            serde_json::from_str(text).map_err(|e| Error::syntax(e.column(), e.to_string()))?;
        SubschemeSpec::from_file(&file)
    }

    pub fn to_file(&self) -> VarietyFile {
        VarietyFile {
            name: self.name.clone(),
            p: self.field.p() as u64,
            a: self.field.a(),
            n: self.n,
            m: self.m,
            closed: self.closed.iter().map(|g| g.to_string()).collect(),
            open_nonvanishing: self.open_nonvanishing.iter().map(|g| g.to_string()).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn closed(&self) -> &[HomogPoly] {
        &self.closed
    }

    pub fn open_nonvanishing(&self) -> &[HomogPoly] {
        &self.open_nonvanishing
    }

    /// No closed generators: X is P^n or an open subset of it.
    pub fn is_open_in_projective(&self) -> bool {
        self.closed.is_empty()
    }

    /// P^n or A^n = {x0 ≠ 0} of full dimension.
    pub fn named(&self) -> Option<Named> {
        if !self.closed.is_empty() || self.m != self.n {
            return None;
        }
        match self.open_nonvanishing.as_slice() {
            [] => Some(Named::Projective),
            [h] if h.degree() == 1 && h.monic() == *h && h.terms().count() == 1 && h.coeffs()[0] == 1 => {
                Some(Named::Affine)
            }
            _ => None,
        }
    }

    /// The subscheme X ∩ V(f) with claimed dimension m − 1.
    pub fn intersect(&self, f: &HomogPoly) -> Result<Self> {
        if f.field() != &self.field || f.n() != self.n {
            return Err(Error::FieldMismatch);
        }
        let mut closed = self.closed.clone();
        closed.push(f.clone());
        SubschemeSpec::new(
            format!("{} ∩ V({f})", self.name),
            &self.field,
            self.n,
            self.m.saturating_sub(1),
            closed,
            self.open_nonvanishing.clone(),
        )
    }

    /// Whether a normalized point over `w` lies on X.
    pub fn contains(&self, w: &WorkingField, point: &[u32]) -> Result<bool> {
        for g in &self.closed {
            if g.eval(w, point)? != 0 {
                return Ok(false);
            }
        }
        self.in_open(w, point)
    }

    pub(crate) fn in_open(&self, w: &WorkingField, point: &[u32]) -> Result<bool> {
        if self.open_nonvanishing.is_empty() {
            return Ok(true);
        }
        for h in &self.open_nonvanishing {
            if h.eval(w, point)? != 0 {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Visits the points of X over `w` in canonical order.
    pub fn for_each_point<T>(
        &self,
        w: &WorkingField,
        mut visit: impl FnMut(&[u32]) -> ControlFlow<T>,
    ) -> Result<Option<T>> {
        let check = |pt: &[u32], rest: &[HomogPoly]| -> Result<bool> {
            for g in rest {
                if g.eval(w, pt)? != 0 {
                    return Ok(false);
                }
            }
            self.in_open(w, pt)
        };
        let outcome = match self.closed.split_first() {
            Some((first, rest)) => scan::for_each_zero(first, w, |pt| match check(pt, rest) {
                Ok(true) => visit(pt).map_break(Ok),
                Ok(false) => ControlFlow::Continue(()),
                Err(e) => ControlFlow::Break(Err(e)),
            })?,
            None => scan::for_each_point(w, self.n, |pt| match check(pt, &[]) {
                Ok(true) => visit(pt).map_break(Ok),
                Ok(false) => ControlFlow::Continue(()),
                Err(e) => ControlFlow::Break(Err(e)),
            })?,
        };
        outcome.transpose()
    }
}

impl fmt::Display for SubschemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.name, self.field)
    }
}

/// A normalized point of P^n over a working field.
#[derive(Clone)]
pub struct ProjPoint {
    field: Arc<WorkingField>,
    coords: Vec<u32>,
}

impl ProjPoint {
    /// Scales `coords` so that the first nonzero coordinate is 1.
    pub fn new(field: Arc<WorkingField>, coords: Vec<u32>) -> Result<Self> {
        if let Some(&c) = coords.iter().find(|&&c| c >= field.size()) {
            return Err(Error::InvalidInput(format!("coordinate code {c} outside the field")));
        }
        let lead = coords
            .iter()
            .find(|&&c| c != 0)
            .copied()
            .ok_or_else(|| Error::InvalidInput("the zero vector is not a point".into()))?;
        let inv = field.inv(lead)?;
        let coords = coords.iter().map(|&c| field.mul(c, inv)).collect();
        Ok(ProjPoint { field, coords })
    }

    pub(crate) fn normalized(field: Arc<WorkingField>, coords: &[u32]) -> Self {
        ProjPoint {
            field,
            coords: coords.to_vec(),
        }
    }

    /// Parses `(c0:c1:...:cn)` with coordinates in the working field's
    /// `g` notation.
    pub fn parse(text: &str, field: Arc<WorkingField>) -> Result<Self> {
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::syntax(0, "expected (x0:...:xn)"))?;
        let coords = inner
            .split(':')
            .map(|c| field.parse(c.trim()))
            .collect::<Result<Vec<u32>>>()?;
        ProjPoint::new(field, coords)
    }

    pub fn field(&self) -> &Arc<WorkingField> {
        &self.field
    }

    pub fn e(&self) -> u32 {
        self.field.e()
    }

    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    /// Index of the first nonzero coordinate.
    pub fn lead(&self) -> usize {
        self.coords.iter().position(|&c| c != 0).expect("nonzero point")
    }

    /// Coordinate-wise x ↦ x^q.
    pub fn frobenius(&self) -> ProjPoint {
        ProjPoint {
            field: self.field.clone(),
            coords: self.coords.iter().map(|&c| self.field.frobenius(c)).collect(),
        }
    }

    pub fn orbit(&self) -> Vec<ProjPoint> {
        let mut out = vec![self.clone()];
        loop {
            let next = out.last().unwrap().frobenius();
            if next.coords == self.coords {
                return out;
            }
            out.push(next);
        }
    }

    /// Degree of the closed point through this geometric point.
    pub fn exact_degree(&self) -> u32 {
        self.orbit().len() as u32
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.coords == other.coords
    }
}

impl Eq for ProjPoint {}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.e(), &self.coords).cmp(&(other.e(), &other.coords))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|&c| self.field.format(c)).collect();
        write!(f, "({})", parts.join(":"))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over F_{}^{}", self.field.q(), self.e())
    }
}

/// A Frobenius orbit, represented by its lexicographically least point over
/// F_{q^e} with e the exact degree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClosedPoint {
    rep: ProjPoint,
}

impl ClosedPoint {
    /// The closed point through `p`; `p` must be defined over the field of
    /// its exact degree.
    pub fn new(p: &ProjPoint) -> Result<Self> {
        let orbit = p.orbit();
        if orbit.len() as u32 != p.e() {
            return Err(Error::InvalidInput(format!(
                "{p} has degree {} but is written over an extension of degree {}",
                orbit.len(),
                p.e()
            )));
        }
        Ok(ClosedPoint {
            rep: orbit.into_iter().min().unwrap(),
        })
    }

    pub fn parse(text: &str, field: &FieldDesc, e: u32) -> Result<Self> {
        ClosedPoint::new(&ProjPoint::parse(text, field.extend(e)?)?)
    }

    pub fn degree(&self) -> u32 {
        self.rep.e()
    }

    pub fn rep(&self) -> &ProjPoint {
        &self.rep
    }

    pub fn field(&self) -> &Arc<WorkingField> {
        self.rep.field()
    }
}

impl fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

impl fmt::Debug for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClosedPoint({self}, deg {})", self.degree())
    }
}

/// All points of X over F_{q^e}, normalized, in canonical order.
pub fn points_over(x: &SubschemeSpec, e: u32) -> Result<Vec<ProjPoint>> {
    let w = x.field.extend(e)?;
    let mut out = Vec::new();
    x.for_each_point(&w, |pt| {
        out.push(ProjPoint::normalized(w.clone(), pt));
        ControlFlow::<()>::Continue(())
    })?;
    Ok(out)
}

/// #X(F_{q^e}).
pub fn count_points(x: &SubschemeSpec, e: u32) -> Result<u64> {
    let w = x.field.extend(e)?;
    let mut count = 0u64;
    x.for_each_point(&w, |_| {
        count += 1;
        ControlFlow::<()>::Continue(())
    })?;
    Ok(count)
}

/// N[r-1] = #X(F_{q^r}) for r = 1..=r_max.
pub fn count_sequence(x: &SubschemeSpec, r_max: u32) -> Result<Vec<u64>> {
    (1..=r_max).map(|r| count_points(x, r)).collect()
}

fn mobius(mut k: u64) -> i64 {
    let mut result = 1;
    let mut f = 2;
    while f * f <= k {
        if k.is_multiple_of(f) {
            k /= f;
            if k.is_multiple_of(f) {
                return 0;
            }
            result = -result;
        }
        f += 1;
    }
    if k > 1 {
        result = -result;
    }
    result
}

/// a[e-1] = (1/e)·Σ_{d|e} μ(e/d)·N[d-1].
pub fn closed_counts(counts: &[u64]) -> Result<Vec<u64>> {
    if counts.is_empty() {
        return Err(Error::InconsistentCounts("no counts given".into()));
    }
    (1..=counts.len() as u64)
        .map(|e| {
            let sum: i128 = (1..=e)
                .filter(|d| e % d == 0)
                .map(|d| mobius(e / d) as i128 * counts[d as usize - 1] as i128)
                .sum();
            if sum < 0 || sum % e as i128 != 0 {
                return Err(Error::InconsistentCounts(format!(
                    "degree {e}: Möbius sum {sum} is not a nonnegative multiple of {e}"
                )));
            }
            Ok((sum / e as i128) as u64)
        })
        .collect()
}

/// One representative per closed point of X of exact degree e.
pub fn closed_points(x: &SubschemeSpec, e: u32) -> Result<Vec<ClosedPoint>> {
    let w = x.field.extend(e)?;
    let mut out = Vec::new();
    x.for_each_point(&w, |pt| {
        let p = ProjPoint::normalized(w.clone(), pt);
        let orbit = p.orbit();
        if orbit.len() as u32 == e && orbit.iter().all(|o| p <= *o) {
            out.push(ClosedPoint { rep: p });
        }
        ControlFlow::<()>::Continue(())
    })?;
    Ok(out)
}

/// Outcome of checking X against its claimed dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    ValidUpTo(u32),
    /// The Jacobian rank drops below n − m.
    NotSmoothAt(ClosedPoint),
    /// The Jacobian rank exceeds n − m.
    WrongRankAt(ClosedPoint),
}

/// Values of the chart partials ∂g/∂x_i, i ≠ chart, at a normalized point.
pub(crate) fn chart_gradient(
    partials: &[HomogPoly],
    w: &WorkingField,
    point: &[u32],
    chart: usize,
) -> Result<Vec<u32>> {
    partials
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != chart)
        .map(|(_, g)| g.eval(w, point))
        .collect()
}

pub(crate) fn all_partials(f: &HomogPoly) -> Vec<HomogPoly> {
    (0..=f.n()).map(|i| f.derive(i)).collect()
}

/// Rank of the chart-affine Jacobian of `gens` at a normalized point.
pub(crate) fn jacobian_rank(
    partials: &[Vec<HomogPoly>],
    w: &WorkingField,
    point: &[u32],
) -> Result<usize> {
    let chart = point.iter().position(|&c| c != 0).expect("nonzero point");
    let n = point.len() - 1;
    let mut m = Matrix::zeros(0, n);
    for p in partials {
        m.push_row(&chart_gradient(p, w, point, chart)?);
    }
    Ok(m.rank(w))
}

/// Checks that the closed generators have Jacobian rank exactly n − m at
/// every point of X of degree ≤ B.
pub fn validate_smooth(x: &SubschemeSpec, bound: u32) -> Result<Validation> {
    if bound == 0 {
        return Err(Error::InvalidInput("bound must be at least 1".into()));
    }
    let partials: Vec<Vec<HomogPoly>> = x.closed.iter().map(all_partials).collect();
    let expected = x.n - x.m;
    for e in 1..=bound {
        let w = x.field.extend(e)?;
        // A failure at a point of smaller degree would have surfaced for that
        // degree, so the first failure here has exact degree e.
        let found = x.for_each_point(&w, |pt| match jacobian_rank(&partials, &w, pt) {
            Ok(r) if r == expected => ControlFlow::Continue(()),
            Ok(r) => ControlFlow::Break(Ok((r, pt.to_vec()))),
            Err(err) => ControlFlow::Break(Err(err)),
        })?;
        if let Some(res) = found {
            let (rank, pt) = res?;
            let closed = ClosedPoint::new(&ProjPoint::normalized(w.clone(), &pt))?;
            return Ok(if rank < expected {
                Validation::NotSmoothAt(closed)
            } else {
                Validation::WrongRankAt(closed)
            });
        }
    }
    Ok(Validation::ValidUpTo(bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldDesc {
        FieldDesc::new(2, 1).unwrap()
    }

    #[test]
    fn points_over_examples() {
        let p2 = SubschemeSpec::projective_space(&f2(), 2);
        assert_eq!(points_over(&p2, 1).unwrap().len(), 7);
        assert_eq!(points_over(&p2, 2).unwrap().len(), 21);
        let line = SubschemeSpec::new(
            "V(x0)",
            &f2(),
            1,
            0,
            vec![HomogPoly::parse("x0", &f2(), 1).unwrap()],
            vec![],
        )
        .unwrap();
        let pts = points_over(&line, 1).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].to_string(), "(0:1)");
        let a1 = SubschemeSpec::affine_space(&f2(), 1);
        assert_eq!(points_over(&a1, 3).unwrap().len(), 8);
        assert_eq!(a1.named(), Some(Named::Affine));
        assert_eq!(p2.named(), Some(Named::Projective));
    }

    #[test]
    fn count_sequence_examples() {
        let f = f2();
        let seq = |n, r| count_sequence(&SubschemeSpec::projective_space(&f, n), r).unwrap();
        assert_eq!(seq(1, 3), vec![3, 5, 9]);
        assert_eq!(seq(2, 3), vec![7, 21, 73]);
        assert_eq!(seq(3, 1), vec![15]);
    }

    #[test]
    fn closed_counts_examples() {
        assert_eq!(closed_counts(&[3, 5, 9]).unwrap(), vec![3, 1, 2]);
        assert_eq!(closed_counts(&[7, 21, 73]).unwrap(), vec![7, 7, 22]);
        assert_eq!(closed_counts(&[2, 4, 8]).unwrap(), vec![2, 1, 2]);
        assert!(matches!(closed_counts(&[3, 4]), Err(Error::InconsistentCounts(_))));
        assert!(closed_counts(&[]).is_err());
    }

    #[test]
    fn closed_points_match_orbit_counts() {
        let p2 = SubschemeSpec::projective_space(&f2(), 2);
        assert_eq!(closed_points(&p2, 1).unwrap().len(), 7);
        let deg2 = closed_points(&p2, 2).unwrap();
        assert_eq!(deg2.len(), 7);
        for c in &deg2 {
            assert!(c.rep().coords().iter().any(|&x| x >= 2));
            assert_eq!(c.rep().exact_degree(), 2);
        }
        let p1 = SubschemeSpec::projective_space(&f2(), 1);
        assert_eq!(closed_points(&p1, 2).unwrap().len(), 1);
        assert_eq!(closed_points(&p1, 3).unwrap().len(), 2);
    }

    #[test]
    fn validate_smooth_examples() {
        let f = f2();
        let p2 = SubschemeSpec::projective_space(&f, 2);
        assert_eq!(validate_smooth(&p2, 3).unwrap(), Validation::ValidUpTo(3));
        let cross = SubschemeSpec::new(
            "V(x0*x1)",
            &f,
            2,
            1,
            vec![HomogPoly::parse("x0*x1", &f, 2).unwrap()],
            vec![],
        )
        .unwrap();
        match validate_smooth(&cross, 2).unwrap() {
            Validation::NotSmoothAt(c) => assert_eq!(c.to_string(), "(0:0:1)"),
            other => panic!("{other:?}"),
        }
        let katz = SubschemeSpec::katz(&f, 1);
        assert_eq!(validate_smooth(&katz, 4).unwrap(), Validation::ValidUpTo(4));
        let wrong = SubschemeSpec::new("P^2 as a curve", &f, 2, 1, vec![], vec![]).unwrap();
        assert!(matches!(validate_smooth(&wrong, 1).unwrap(), Validation::NotSmoothAt(_)));
    }

    #[test]
    fn builtins_and_json_roundtrip() {
        let f = f2();
        let p3 = SubschemeSpec::builtin("P3", Some(&f)).unwrap().unwrap();
        assert_eq!(p3, SubschemeSpec::builtin("P^3", Some(&f)).unwrap().unwrap());
        let katz = SubschemeSpec::builtin("katz(1,2)", None).unwrap().unwrap();
        assert_eq!(katz.n(), 3);
        assert_eq!(katz.closed()[0].degree(), 3);
        assert!(SubschemeSpec::builtin("foo.json", Some(&f)).unwrap().is_none());
        let json = serde_json::to_string(&katz.to_file()).unwrap();
        assert_eq!(SubschemeSpec::from_json(&json).unwrap(), katz);
        let a2 = SubschemeSpec::from_json(
            r#"{"name":"A2","p":3,"a":1,"n":2,"m":2,"closed":[],"open_nonvanishing":["x0"]}"#,
        )
        .unwrap();
        assert_eq!(a2.named(), Some(Named::Affine));
        assert_eq!(count_points(&a2, 1).unwrap(), 9);
    }

    #[test]
    fn point_parsing_and_orbits() {
        let f = f2();
        let c = ClosedPoint::parse("(g:1:0)", &f, 2).unwrap();
        assert_eq!(c.degree(), 2);
        assert_eq!(c.to_string(), "(1:g:0)");
        assert!(ClosedPoint::parse("(1:1:0)", &f, 2).is_err());
        let w = f.extend(2).unwrap();
        let p = ProjPoint::new(w, vec![0, 3, 3]).unwrap();
        assert_eq!(p.to_string(), "(0:1:1)");
    }
}
