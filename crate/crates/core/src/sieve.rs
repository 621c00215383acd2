//! Densities of predicates on S_d, jet maps and conditioned densities.
//!
//! Every jet condition used here is F_q-linear in f: values and directional
//! derivatives at normalized points, with coefficients embedded into the
//! residue field. Linear algebra on these maps runs over F_p on the base-p
//! digits of coefficients, so an F_q-rank is the F_p-rank divided by a.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{self, ClosedPoint, SubschemeSpec};
use crate::gf::{FieldDesc, WorkingField};
use crate::linalg::Matrix;
use crate::mpoly::{FormSpace, HomogPoly, MonomialTable};
use crate::smoothness::{self, IntegralityVerdict};
use crate::zeta::to_f64;

/// Exhaustive runs refuse to enumerate more forms than this.
pub const EXHAUSTIVE_BUDGET: u64 = 1 << 24;
/// Exhaustive runs are split into this many contiguous shards whatever the
/// thread count.
pub const SHARD_COUNT: u64 = 64;
/// Jet sets up to this size are listed explicitly.
pub const EXPLICIT_JET_LIMIT: u64 = 1 << 16;
const MC_CHUNK: u64 = 1024;
const WILSON_Z: f64 = 1.959964;

pub const CSV_HEADER: &str = "d,mode,trials,hits,total,fraction,ci_lo,ci_hi,predicate,seed";

/// A closed point with an order-1 (value) or order-2 (value and chart
/// gradient) jet condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetPoint {
    pub point: ClosedPoint,
    pub order: u8,
}

impl JetPoint {
    /// Coordinates of the jet over the residue field.
    pub fn width(&self) -> usize {
        match self.order {
            1 => 1,
            _ => self.point.rep().n() + 1,
        }
    }

    /// Length over F_q.
    pub fn length(&self) -> usize {
        self.width() * self.point.degree() as usize
    }
}

/// A finite union of fat points in P^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetScheme {
    field: FieldDesc,
    n: usize,
    points: Vec<JetPoint>,
}

impl JetScheme {
    pub fn new(field: &FieldDesc, n: usize, points: Vec<JetPoint>) -> Result<Self> {
        for jp in &points {
            if !(1..=2).contains(&jp.order) {
                return Err(Error::InvalidInput(format!(
                    "jet order must be 1 or 2, not {}",
                    jp.order
                )));
            }
            if jp.point.field().base() != field || jp.point.rep().n() != n {
                return Err(Error::FieldMismatch);
            }
        }
        for (i, a) in points.iter().enumerate() {
            if points[..i].iter().any(|b| b.point == a.point) {
                return Err(Error::PointsNotDistinct);
            }
        }
        Ok(JetScheme {
            field: field.clone(),
            n,
            points,
        })
    }

    /// Every closed point of P^n of degree e, all with the same order.
    pub fn points_of_degree(field: &FieldDesc, n: usize, e: u32, order: u8) -> Result<Self> {
        let space = SubschemeSpec::projective_space(field, n);
        let points = geometry::closed_points(&space, e)?
            .into_iter()
            .map(|point| JetPoint { point, order })
            .collect();
        JetScheme::new(field, n, points)
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[JetPoint] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total length over F_q, the F_q-dimension of H^0(Z, O_Z).
    pub fn length(&self) -> usize {
        self.points.iter().map(JetPoint::length).sum()
    }

    pub fn h0_size(&self) -> BigUint {
        BigUint::from(self.field.q()).pow(self.length() as u32)
    }
}

impl fmt::Display for JetScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .points
            .iter()
            .map(|jp| format!("{}^{}", jp.point, jp.order))
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Condition on the jet at one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetCondition {
    Any,
    Vanishes,
    NonVanishing,
    /// Value zero with a nonzero gradient (order 2 only).
    SmoothVanishing,
    /// Value and gradient zero (order 2 only).
    Singular,
}

impl JetCondition {
    fn needs_gradient(self) -> bool {
        matches!(self, JetCondition::SmoothVanishing | JetCondition::Singular)
    }

    fn size(self, k: &BigUint, width: usize) -> BigUint {
        let w = width as u32;
        match self {
            JetCondition::Any => k.pow(w),
            JetCondition::Vanishes => k.pow(w - 1),
            JetCondition::NonVanishing => (k - 1u32) * k.pow(w - 1),
            JetCondition::SmoothVanishing => k.pow(w - 1) - 1u32,
            JetCondition::Singular => BigUint::one(),
        }
    }

    fn holds(self, jet: &[u32]) -> bool {
        let grad_zero = jet[1..].iter().all(|&g| g == 0);
        match self {
            JetCondition::Any => true,
            JetCondition::Vanishes => jet[0] == 0,
            JetCondition::NonVanishing => jet[0] != 0,
            JetCondition::SmoothVanishing => jet[0] == 0 && !grad_zero,
            JetCondition::Singular => jet[0] == 0 && grad_zero,
        }
    }
}

impl fmt::Display for JetCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JetCondition::Any => "any",
            JetCondition::Vanishes => "vanishes",
            JetCondition::NonVanishing => "nonvanishing",
            JetCondition::SmoothVanishing => "smooth_vanishing",
            JetCondition::Singular => "singular",
        })
    }
}

/// A subset T of H^0(Z, O_Z). Jets are concatenated per point: the value,
/// then for order 2 the chart gradient, all as residue-field codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JetSet {
    Full,
    Explicit(Vec<Vec<u32>>),
    PerPoint(Vec<JetCondition>),
}

impl JetSet {
    fn validate(&self, z: &JetScheme) -> Result<()> {
        match self {
            JetSet::Full => Ok(()),
            JetSet::Explicit(list) => {
                let width: usize = z.points.iter().map(JetPoint::width).sum();
                for jet in list {
                    if jet.len() != width {
                        return Err(Error::InvalidInput(format!(
                            "jet has {} coordinates, expected {width}",
                            jet.len()
                        )));
                    }
                    let mut at = 0;
                    for jp in &z.points {
                        let size = jp.point.field().size();
                        if jet[at..at + jp.width()].iter().any(|&c| c >= size) {
                            return Err(Error::InvalidInput(
                                "jet coordinate outside its residue field".into(),
                            ));
                        }
                        at += jp.width();
                    }
                }
                if list.is_empty() {
                    return Err(Error::EmptyT);
                }
                Ok(())
            }
            JetSet::PerPoint(conds) => {
                if conds.len() != z.points.len() {
                    return Err(Error::InvalidInput(format!(
                        "{} conditions for {} points",
                        conds.len(),
                        z.points.len()
                    )));
                }
                for (c, jp) in conds.iter().zip(&z.points) {
                    if c.needs_gradient() && jp.order < 2 {
                        return Err(Error::InvalidInput(format!(
                            "condition {c} needs an order-2 jet"
                        )));
                    }
                }
                if self.size(z)?.is_zero() {
                    return Err(Error::EmptyT);
                }
                Ok(())
            }
        }
    }

    /// Normalizes an explicit list into a sorted set.
    fn canonical(self) -> JetSet {
        match self {
            JetSet::Explicit(mut list) => {
                list.sort();
                list.dedup();
                JetSet::Explicit(list)
            }
            other => other,
        }
    }

    pub fn size(&self, z: &JetScheme) -> Result<BigUint> {
        Ok(match self {
            JetSet::Full => z.h0_size(),
            JetSet::Explicit(list) => {
                let mut sorted = list.clone();
                sorted.sort();
                sorted.dedup();
                BigUint::from(sorted.len())
            }
            JetSet::PerPoint(conds) => conds
                .iter()
                .zip(&z.points)
                .map(|(c, jp)| c.size(&BigUint::from(jp.point.field().size()), jp.width()))
                .product(),
        })
    }

    fn contains(&self, z: &JetScheme, jet: &[u32]) -> bool {
        match self {
            JetSet::Full => true,
            JetSet::Explicit(list) => list.binary_search_by(|t| t.as_slice().cmp(jet)).is_ok(),
            JetSet::PerPoint(conds) => {
                let mut at = 0;
                conds.iter().zip(&z.points).all(|(c, jp)| {
                    let ok = c.holds(&jet[at..at + jp.width()]);
                    at += jp.width();
                    ok
                })
            }
        }
    }

    /// All members in lexicographic order, when there are few enough.
    fn list(&self, z: &JetScheme) -> Result<Vec<Vec<u32>>> {
        let size = self.size(z)?;
        if size > BigUint::from(EXPLICIT_JET_LIMIT) {
            return Err(Error::budget(size, EXPLICIT_JET_LIMIT));
        }
        if let JetSet::Explicit(list) = self {
            return Ok(list.clone());
        }
        let sizes: Vec<u32> = z
            .points
            .iter()
            .flat_map(|jp| std::iter::repeat_n(jp.point.field().size(), jp.width()))
            .collect();
        let mut out = Vec::new();
        let mut jet = vec![0u32; sizes.len()];
        loop {
            if self.contains(z, &jet) {
                out.push(jet.clone());
            }
            let mut i = sizes.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                jet[i] += 1;
                if jet[i] < sizes[i] {
                    break;
                }
                jet[i] = 0;
            }
        }
    }
}

impl fmt::Display for JetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JetSet::Full => f.write_str("full"),
            JetSet::Explicit(list) => write!(f, "explicit({})", list.len()),
            JetSet::PerPoint(conds) => {
                let parts: Vec<String> = conds.iter().map(|c| c.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

/// Linear functionals S_d → κ(P) at one normalized point: each row holds the
/// functional's value on every monomial of degree d.
#[derive(Clone, Debug)]
pub(crate) struct PointFunctionals {
    w: Arc<WorkingField>,
    rows: Vec<Vec<u32>>,
}

impl PointFunctionals {
    /// The value and the derivatives along `directions`, given in the local
    /// coordinates of the point's chart.
    pub(crate) fn new(
        w: &Arc<WorkingField>,
        pt: &[u32],
        d: u32,
        directions: &[Vec<u32>],
    ) -> PointFunctionals {
        let n = pt.len() - 1;
        let chart = pt.iter().position(|&c| c != 0).expect("nonzero point");
        let table = MonomialTable::get(n, d);
        let stride = d as usize + 1;
        let mut powers = vec![0u32; (n + 1) * stride];
        for (i, &x) in pt.iter().enumerate() {
            powers[i * stride] = 1;
            for a in 1..stride {
                powers[i * stride + a] = w.mul(powers[i * stride + a - 1], x);
            }
        }
        let local: Vec<usize> = (0..=n).filter(|&i| i != chart).collect();
        let mut rows = vec![Vec::with_capacity(table.len()); 1 + directions.len()];
        for exps in table.iter() {
            let value = exps
                .iter()
                .enumerate()
                .fold(1, |acc, (i, &a)| w.mul(acc, powers[i * stride + a as usize]));
            rows[0].push(value);
            let partials: Vec<u32> = local
                .iter()
                .map(|&i| {
                    let a = exps[i];
                    if a == 0 {
                        return 0;
                    }
                    let rest = exps.iter().enumerate().fold(1, |acc, (j, &b)| {
                        let b = if j == i { b - 1 } else { b };
                        w.mul(acc, powers[j * stride + b as usize])
                    });
                    w.mul(w.from_int(a as i64), rest)
                })
                .collect();
            for (row, dir) in rows[1..].iter_mut().zip(directions) {
                let v = dir
                    .iter()
                    .zip(&partials)
                    .fold(0, |acc, (&c, &p)| w.add(acc, w.mul(c, p)));
                row.push(v);
            }
        }
        PointFunctionals { w: w.clone(), rows }
    }

    fn row_value(&self, row: usize, f: &HomogPoly) -> u32 {
        let w = &self.w;
        f.coeffs()
            .iter()
            .zip(&self.rows[row])
            .fold(0, |acc, (&c, &m)| {
                if c == 0 || m == 0 {
                    acc
                } else {
                    w.add(acc, w.mul(w.embed(c), m))
                }
            })
    }

    pub(crate) fn apply_into(&self, f: &HomogPoly, out: &mut Vec<u32>) {
        out.extend((0..self.rows.len()).map(|r| self.row_value(r, f)));
    }

    pub(crate) fn all_vanish(&self, f: &HomogPoly) -> bool {
        (0..self.rows.len()).all(|r| self.row_value(r, f) == 0)
    }

    /// Columns of the F_p-matrix of this map, one per F_p-basis element
    /// g^t·x^α of S_d, in the order α-major, t-minor.
    fn fp_columns(&self, a: u32, p: u32) -> Vec<Vec<u32>> {
        let w = &self.w;
        let monos = self.rows[0].len();
        let mut cols = Vec::with_capacity(monos * a as usize);
        for k in 0..monos {
            for t in 0..a {
                let g = w.embed(p.pow(t));
                let col = self
                    .rows
                    .iter()
                    .flat_map(|row| w.digits(w.mul(g, row[k])))
                    .collect();
                cols.push(col);
            }
        }
        cols
    }
}

pub(crate) fn unit_directions(n: usize) -> Vec<Vec<u32>> {
    (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect()
}

/// A basis of the tangent space of X at a normalized point, in the local
/// coordinates of the point's chart.
pub(crate) fn tangent_basis(
    x: &SubschemeSpec,
    w: &WorkingField,
    pt: &[u32],
) -> Result<Vec<Vec<u32>>> {
    let n = x.n();
    if x.closed().is_empty() {
        return Ok(unit_directions(n));
    }
    let chart = pt.iter().position(|&c| c != 0).expect("nonzero point");
    let mut jac = Matrix::zeros(0, n);
    for g in x.closed() {
        jac.push_row(&geometry::chart_gradient(&geometry::all_partials(g), w, pt, chart)?);
    }
    if jac.rank(w) != n - x.m() {
        let coords: Vec<String> = pt.iter().map(|&c| w.format(c)).collect();
        return Err(Error::XNotValidated(format!(
            "{} is not smooth of dimension {} at ({})",
            x.name(),
            x.m(),
            coords.join(":")
        )));
    }
    Ok(jac.kernel(w))
}

/// Functionals whose common kernel is {f : H_f ∩ X is singular at P}: the
/// value and the derivatives along a basis of the tangent space of X at P.
fn singularity_functionals(
    x: &SubschemeSpec,
    p: &ClosedPoint,
    d: u32,
) -> Result<PointFunctionals> {
    let w = p.field();
    let pt = p.rep().coords();
    Ok(PointFunctionals::new(w, pt, d, &tangent_basis(x, w, pt)?))
}

/// The F_q-linear map S_d → H^0(Z, O_Z).
struct JetMap {
    functionals: Vec<PointFunctionals>,
}

impl JetMap {
    fn new(z: &JetScheme, d: u32) -> JetMap {
        let functionals = z
            .points
            .iter()
            .map(|jp| {
                let dirs = if jp.order == 2 {
                    unit_directions(z.n)
                } else {
                    Vec::new()
                };
                PointFunctionals::new(jp.point.field(), jp.point.rep().coords(), d, &dirs)
            })
            .collect();
        JetMap { functionals }
    }

    fn apply(&self, f: &HomogPoly) -> Vec<u32> {
        let mut out = Vec::new();
        for pf in &self.functionals {
            pf.apply_into(f, &mut out);
        }
        out
    }

    fn jet_digits(&self, jet: &[u32]) -> Vec<u32> {
        target_digits(&self.functionals, jet)
    }
}

/// F_p digits of target values, matching the rows of [`fp_matrix`].
pub(crate) fn target_digits(functionals: &[PointFunctionals], values: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let mut at = 0;
    for pf in functionals {
        for &c in &values[at..at + pf.rows.len()] {
            out.extend(pf.w.digits(c));
        }
        at += pf.rows.len();
    }
    out
}

pub(crate) fn fp_matrix(field: &FieldDesc, functionals: &[PointFunctionals]) -> Matrix {
    let (a, p) = (field.a(), field.p());
    let per_point: Vec<Vec<Vec<u32>>> =
        functionals.iter().map(|pf| pf.fp_columns(a, p)).collect();
    let ncols = per_point.first().map_or(0, |c| c.len());
    let nrows: usize = per_point.iter().map(|c| c.first().map_or(0, |v| v.len())).sum();
    let mut m = Matrix::zeros(nrows, ncols);
    let mut base = 0;
    for cols in &per_point {
        let height = cols.first().map_or(0, |v| v.len());
        for (c, col) in cols.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                m.set(base + r, c, v);
            }
        }
        base += height;
    }
    m
}

pub(crate) fn prime_field(field: &FieldDesc) -> Arc<WorkingField> {
    FieldDesc::new(field.p() as u64, 1)
        .expect("the characteristic is prime")
        .arith()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetRank {
    /// dim_{F_q} S_d.
    pub source_dim: usize,
    /// Length of Z over F_q.
    pub target_dim: usize,
    pub rank: usize,
    pub surjective: bool,
    /// Surjectivity is guaranteed for d at least this.
    pub threshold: usize,
}

/// Rank of S_d → H^0(Z, O_Z) over F_q.
pub fn jet_map_rank(z: &JetScheme, d: u32) -> Result<JetRank> {
    if z.is_empty() {
        return Err(Error::InvalidInput("the jet scheme has no points".into()));
    }
    let map = JetMap::new(z, d);
    let fp = prime_field(&z.field);
    let rank = fp_matrix(&z.field, &map.functionals).rank(&fp) / z.field.a() as usize;
    let target_dim = z.length();
    let out = JetRank {
        source_dim: MonomialTable::get(z.n, d).len(),
        target_dim,
        rank,
        surjective: rank == target_dim,
        threshold: target_dim - 1,
    };
    if d as usize >= out.threshold && !out.surjective {
        return Err(Error::Invariant(format!(
            "jet map of rank {rank} < {target_dim} at d = {d} beyond the surjectivity threshold"
        )));
    }
    Ok(out)
}

/// Proportion of f ∈ S_d with H_f ∩ X singular at P, from the rank of the
/// singularity conditions. Fails with the rank-based value attached when
/// deg P > d/(m+1).
pub fn singular_fraction_at_point(
    x: &SubschemeSpec,
    p: &ClosedPoint,
    d: u32,
) -> Result<BigRational> {
    if p.field().base() != x.field() || p.rep().n() != x.n() {
        return Err(Error::FieldMismatch);
    }
    if !x.contains(p.field(), p.rep().coords())? {
        return Err(Error::InvalidInput(format!("{p} is not a point of {}", x.name())));
    }
    let pf = singularity_functionals(x, p, d)?;
    let fp = prime_field(x.field());
    let rank = fp_matrix(x.field(), std::slice::from_ref(&pf)).rank(&fp) / x.field().a() as usize;
    let value = BigRational::new(
        BigUint::one().into(),
        BigUint::from(x.field().q()).pow(rank as u32).into(),
    );
    let e = p.degree();
    let m_plus_1 = x.m() + 1;
    if e as usize * m_plus_1 > d as usize {
        return Err(Error::DegreeTooLarge {
            e,
            d,
            m_plus_1,
            rank_fraction: value.to_string(),
        });
    }
    if rank != m_plus_1 * e as usize {
        return Err(Error::Invariant(format!(
            "singularity conditions at {p} have rank {rank}, expected {}",
            m_plus_1 * e as usize
        )));
    }
    Ok(value)
}

/// A property of forms whose density is measured.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    True,
    Not(Box<Predicate>),
    And(Vec<Predicate>),
    /// H_f ∩ X is smooth of dimension m − 1, checked to the planned bound.
    SmoothIntersection { x: SubschemeSpec, bound: Option<u32> },
    /// H_f ∩ X is smooth at every closed point of X of degree < r.
    SmoothAtPointsBelow { x: SubschemeSpec, r: u32 },
    /// The plane curve H_f has only nodes as singularities.
    AtWorstNodes { bound: Option<u32> },
    /// Geometric integrality, decided within the search budget.
    GeomIntegral { budget: u64 },
    JetInSet { z: JetScheme, t: JetSet },
}

impl Predicate {
    pub fn negate(self) -> Predicate {
        Predicate::Not(Box::new(self))
    }

    /// Resolves the predicate against S_d(field, n): point lists and jet
    /// functionals are computed once here.
    pub fn compile(&self, field: &FieldDesc, n: usize, d: u32) -> Result<Compiled> {
        Ok(Compiled {
            node: self.compile_node(field, n, d)?,
            field: field.clone(),
            n,
            d,
        })
    }

    fn compile_node(&self, field: &FieldDesc, n: usize, d: u32) -> Result<Node> {
        let check_x = |x: &SubschemeSpec| {
            if x.field() != field || x.n() != n {
                Err(Error::FieldMismatch)
            } else {
                Ok(())
            }
        };
        Ok(match self {
            Predicate::True => Node::True,
            Predicate::Not(p) => Node::Not(Box::new(p.compile_node(field, n, d)?)),
            Predicate::And(ps) => Node::And(
                ps.iter()
                    .map(|p| p.compile_node(field, n, d))
                    .collect::<Result<_>>()?,
            ),
            Predicate::SmoothIntersection { x, bound } => {
                check_x(x)?;
                Node::Smooth {
                    x: x.clone(),
                    bound: *bound,
                }
            }
            Predicate::SmoothAtPointsBelow { x, r } => {
                check_x(x)?;
                let mut checks = Vec::new();
                for e in 1..*r {
                    for p in geometry::closed_points(x, e)? {
                        checks.push(singularity_functionals(x, &p, d)?);
                    }
                }
                Node::Below(checks)
            }
            Predicate::AtWorstNodes { bound } => {
                if n != 2 {
                    return Err(Error::UnsupportedX(format!(
                        "node checks need plane curves, not P^{n}"
                    )));
                }
                Node::Nodes(*bound)
            }
            Predicate::GeomIntegral { budget } => Node::Integral(*budget),
            Predicate::JetInSet { z, t } => {
                if z.field() != field || z.n() != n {
                    return Err(Error::FieldMismatch);
                }
                t.validate(z)?;
                Node::Jet {
                    map: JetMap::new(z, d),
                    z: z.clone(),
                    t: t.clone().canonical(),
                }
            }
        })
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bound = |b: &Option<u32>| b.map_or("auto".to_string(), |b| b.to_string());
        match self {
            Predicate::True => f.write_str("true"),
            Predicate::Not(p) => write!(f, "not({p})"),
            Predicate::And(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "and({})", parts.join(","))
            }
            Predicate::SmoothIntersection { x, bound: b } => {
                write!(f, "smooth(X={},B={})", x.name(), bound(b))
            }
            Predicate::SmoothAtPointsBelow { x, r } => {
                write!(f, "smooth_below(X={},r={r})", x.name())
            }
            Predicate::AtWorstNodes { bound: b } => write!(f, "nodal(B={})", bound(b)),
            Predicate::GeomIntegral { budget } => write!(f, "geom_integral(budget={budget})"),
            Predicate::JetInSet { z, t } => write!(f, "jet(Z={z},T={t})"),
        }
    }
}

#[derive(Debug)]
enum Node {
    True,
    Not(Box<Node>),
    And(Vec<Node>),
    Smooth { x: SubschemeSpec, bound: Option<u32> },
    Below(Vec<PointFunctionals>),
    Nodes(Option<u32>),
    Integral(u64),
    Jet { map: JetMap, z: JetScheme, t: JetSet },
}

impl fmt::Debug for JetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetMap({} points)", self.functionals.len())
    }
}

impl Node {
    fn eval(&self, f: &HomogPoly) -> Result<bool> {
        Ok(match self {
            Node::True => true,
            Node::Not(p) => !p.eval(f)?,
            Node::And(ps) => {
                for p in ps {
                    if !p.eval(f)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::Smooth { x, bound } => smoothness::is_smooth_intersection(f, x, *bound)?.is_smooth(),
            Node::Below(checks) => !checks.iter().any(|c| c.all_vanish(f)),
            Node::Nodes(bound) => smoothness::at_worst_nodes(f, *bound)?,
            Node::Integral(budget) => match smoothness::geometrically_integral(f, *budget)? {
                IntegralityVerdict::GeometricallyIntegral => true,
                IntegralityVerdict::ReducibleOver { .. } => false,
                IntegralityVerdict::Unknown { budget_note } => {
                    return Err(Error::budget(budget_note, *budget))
                }
            },
            Node::Jet { map, z, t } => t.contains(z, &map.apply(f)),
        })
    }
}

/// A predicate bound to one space S_d.
#[derive(Debug)]
pub struct Compiled {
    node: Node,
    field: FieldDesc,
    n: usize,
    d: u32,
}

impl Compiled {
    pub fn eval(&self, f: &HomogPoly) -> Result<bool> {
        if f.field() != &self.field || f.n() != self.n || f.degree() != self.d {
            return Err(Error::InvalidInput(format!(
                "predicate was compiled for degree {} forms in {} variables",
                self.d,
                self.n + 1
            )));
        }
        self.node.eval(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    MonteCarlo,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exhaustive => "exhaustive",
            Mode::MonteCarlo => "mc",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    Exhaustive,
    MonteCarlo { trials: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityEstimate {
    pub mode: Mode,
    pub q: u64,
    pub n: usize,
    pub d: u32,
    pub hits: u64,
    /// Forms examined.
    pub total: u64,
    /// #T/#H^0(Z, O_Z) for densities conditioned on jets.
    pub weight: Option<BigRational>,
    /// weight · hits / total; exact in exhaustive mode.
    pub fraction: BigRational,
    pub float: f64,
    pub ci95: Option<(f64, f64)>,
    pub seed: Option<u64>,
    pub predicate: String,
}

impl DensityEstimate {
    fn build(
        sampling: Sampling,
        field: &FieldDesc,
        n: usize,
        d: u32,
        hits: u64,
        total: u64,
        weight: Option<BigRational>,
        predicate: String,
    ) -> Self {
        let w = weight.clone().unwrap_or_else(BigRational::one);
        let fraction = if total == 0 {
            BigRational::zero()
        } else {
            &w * BigRational::new(hits.into(), total.into())
        };
        let (mode, seed, ci95) = match sampling {
            Sampling::Exhaustive => (Mode::Exhaustive, None, None),
            Sampling::MonteCarlo { seed, .. } => {
                let (lo, hi) = wilson(hits, total);
                let wf = to_f64(&w);
                (Mode::MonteCarlo, Some(seed), Some((lo * wf, hi * wf)))
            }
        };
        DensityEstimate {
            mode,
            q: field.q(),
            n,
            d,
            hits,
            total,
            float: to_f64(&fraction),
            weight,
            fraction,
            ci95,
            seed,
            predicate,
        }
    }

    /// One CSV line matching [`CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let trials = match self.mode {
            Mode::MonteCarlo => self.total.to_string(),
            Mode::Exhaustive => String::new(),
        };
        let (lo, hi) = self
            .ci95
            .map_or((String::new(), String::new()), |(l, h)| (format!("{l:.6}"), format!("{h:.6}")));
        format!(
            "{},{},{},{},{},{},{},{},\"{}\",{}",
            self.d,
            self.mode,
            trials,
            self.hits,
            self.total,
            self.fraction,
            lo,
            hi,
            self.predicate.replace('"', "\"\""),
            self.seed.map_or(String::new(), |s| s.to_string())
        )
    }
}

/// Wilson score interval at 95%.
pub fn wilson(hits: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Sums per-chunk tallies computed in parallel; the first error in chunk
/// order wins, so failures are reported deterministically.
fn tally(chunks: u64, count: impl Fn(u64) -> Result<u64> + Sync + Send) -> Result<u64> {
    let parts: Vec<Result<u64>> = (0..chunks).into_par_iter().map(count).collect();
    parts.into_iter().sum()
}

pub(crate) fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn mc_tally(
    trials: u64,
    seed: u64,
    hit: impl Fn(&mut ChaCha8Rng) -> Result<bool> + Sync + Send,
) -> Result<u64> {
    if trials == 0 {
        return Err(Error::InvalidInput("at least one trial is needed".into()));
    }
    tally(trials.div_ceil(MC_CHUNK), |c| {
        let lo = c * MC_CHUNK;
        let hi = (lo + MC_CHUNK).min(trials);
        let mut hits = 0;
        for trial in lo..hi {
            if hit(&mut trial_rng(seed, trial))? {
                hits += 1;
            }
        }
        Ok(hits)
    })
}

/// Exact #(P ∩ S_d)/#S_d by enumerating every form.
pub fn exhaustive_density(
    field: &FieldDesc,
    n: usize,
    d: u32,
    pred: &Predicate,
) -> Result<DensityEstimate> {
    let space = FormSpace::bounded(field, n, d, EXHAUSTIVE_BUDGET)?;
    let compiled = pred.compile(field, n, d)?;
    let total = space.count().expect("bounded space");
    let shards = SHARD_COUNT.min(total);
    let hits = tally(shards, |k| {
        let mut hits = 0;
        for f in space.iter(space.shard(k, shards)) {
            if compiled.eval(&f)? {
                hits += 1;
            }
        }
        Ok(hits)
    })?;
    Ok(DensityEstimate::build(
        Sampling::Exhaustive,
        field,
        n,
        d,
        hits,
        total,
        None,
        pred.to_string(),
    ))
}

/// hits/trials over uniform samples from S_d. Trial i draws from stream i of
/// the seeded generator, so the sample set is independent of scheduling.
pub fn mc_density(
    field: &FieldDesc,
    n: usize,
    d: u32,
    pred: &Predicate,
    trials: u64,
    seed: u64,
) -> Result<DensityEstimate> {
    let compiled = pred.compile(field, n, d)?;
    let hits = mc_tally(trials, seed, |rng| {
        compiled.eval(&HomogPoly::random(field, n, d, rng))
    })?;
    Ok(DensityEstimate::build(
        Sampling::MonteCarlo { trials, seed },
        field,
        n,
        d,
        hits,
        trials,
        None,
        pred.to_string(),
    ))
}

/// Solutions of A·u = b over F_p for several right-hand sides b sharing one
/// matrix, where u holds the base-p digits of the coefficients of a form.
/// Inconsistent right-hand sides are dropped.
pub(crate) struct Cosets {
    base: FieldDesc,
    n: usize,
    d: u32,
    a: usize,
    p: u32,
    particular: Vec<Vec<u32>>,
    kernel: Vec<Vec<u32>>,
}

impl Cosets {
    pub(crate) fn solve(
        field: &FieldDesc,
        n: usize,
        d: u32,
        matrix: &Matrix,
        rhs: &[Vec<u32>],
    ) -> Cosets {
        let fp = prime_field(field);
        Cosets {
            base: field.clone(),
            n,
            d,
            a: field.a() as usize,
            p: field.p(),
            particular: rhs.iter().filter_map(|b| matrix.solve(&fp, b)).collect(),
            kernel: matrix.kernel(&fp),
        }
    }

    fn for_jets(z: &JetScheme, jets: &[Vec<u32>], d: u32) -> Result<Self> {
        let map = JetMap::new(z, d);
        let fp = prime_field(&z.field);
        let matrix = fp_matrix(&z.field, &map.functionals);
        let a = z.field.a() as usize;
        let rank = matrix.rank(&fp);
        if rank < matrix.rows() {
            return Err(Error::NotSurjective {
                rank: rank / a,
                expected: z.length(),
            });
        }
        let rhs: Vec<Vec<u32>> = jets.iter().map(|t| map.jet_digits(t)).collect();
        let cosets = Cosets::solve(&z.field, z.n, d, &matrix, &rhs);
        if cosets.particular.len() != jets.len() {
            return Err(Error::Invariant("surjective jet map has no preimage".into()));
        }
        Ok(cosets)
    }

    pub(crate) fn systems(&self) -> usize {
        self.particular.len()
    }

    pub(crate) fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    pub(crate) fn coset_size(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.kernel.len() as u32)
    }

    /// Number of forms over all consistent systems.
    pub(crate) fn candidate_count(&self) -> Option<u64> {
        self.coset_size()?.checked_mul(self.systems() as u64)
    }

    /// The i-th form in canonical order: system-major, then the kernel
    /// coordinates as a little-endian base-p counter.
    pub(crate) fn candidate(&self, i: u64) -> HomogPoly {
        let per = self.coset_size().expect("enumerable cosets");
        let p = self.p as u64;
        let mut rest = i % per;
        let digits = (0..self.kernel.len()).map(|_| {
            let c = (rest % p) as u32;
            rest /= p;
            c
        });
        self.form((i / per) as usize, digits)
    }

    /// A uniform element of a uniformly chosen system's coset.
    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> HomogPoly {
        let t = rng.gen_range(0..self.systems());
        let digits: Vec<u32> = (0..self.kernel.len()).map(|_| rng.gen_range(0..self.p)).collect();
        self.form(t, digits.into_iter())
    }

    fn form(&self, t: usize, kernel_digits: impl Iterator<Item = u32>) -> HomogPoly {
        let p = self.p;
        let mut u = self.particular[t].clone();
        for (c, v) in kernel_digits.zip(&self.kernel) {
            if c == 0 {
                continue;
            }
            for (x, &y) in u.iter_mut().zip(v) {
                *x = (*x + c * y) % p;
            }
        }
        let coeffs = u
            .chunks(self.a)
            .map(|digits| digits.iter().rev().fold(0, |acc, &x| acc * p + x))
            .collect();
        HomogPoly::from_coeffs(&self.base, self.n, self.d, coeffs).expect("digits below p")
    }
}

/// Density of {f : f|_Z ∈ T and pred(f)} in S_d. With a surjective jet map
/// and a listable T, each fibre over t ∈ T is enumerated or sampled and the
/// result carries the weight #T/#H^0(Z, O_Z).
pub fn conditioned_density(
    z: &JetScheme,
    t: &JetSet,
    d: u32,
    pred: &Predicate,
    sampling: Sampling,
) -> Result<DensityEstimate> {
    t.validate(z)?;
    let t = t.clone().canonical();
    let field = z.field();
    let n = z.n();
    let description = format!("and({},jet(Z={z},T={t}))", pred);
    if z.is_empty() {
        return match sampling {
            Sampling::Exhaustive => exhaustive_density(field, n, d, pred),
            Sampling::MonteCarlo { trials, seed } => mc_density(field, n, d, pred, trials, seed),
        }
        .map(|mut est| {
            est.predicate = description;
            est
        });
    }
    let jets = t.list(z)?;
    let cosets = Cosets::for_jets(z, &jets, d)?;
    let weight = BigRational::new(
        BigUint::from(jets.len()).into(),
        z.h0_size().into(),
    );
    let compiled = pred.compile(field, n, d)?;
    let (hits, total) = match sampling {
        Sampling::Exhaustive => {
            let total = cosets
                .candidate_count()
                .filter(|&c| c <= EXHAUSTIVE_BUDGET)
                .ok_or_else(|| {
                    Error::budget(
                        format!(
                            "{} cosets of dimension {} over F_{}",
                            jets.len(),
                            cosets.kernel_dim(),
                            field.p()
                        ),
                        EXHAUSTIVE_BUDGET,
                    )
                })?;
            let shards = SHARD_COUNT.min(total);
            let hits = tally(shards, |s| {
                let lo = total / shards * s + (total % shards).min(s);
                let hi = total / shards * (s + 1) + (total % shards).min(s + 1);
                let mut hits = 0;
                for i in lo..hi {
                    if compiled.eval(&cosets.candidate(i))? {
                        hits += 1;
                    }
                }
                Ok(hits)
            })?;
            (hits, total)
        }
        Sampling::MonteCarlo { trials, seed } => {
            let hits = mc_tally(trials, seed, |rng| compiled.eval(&cosets.sample(rng)))?;
            (hits, trials)
        }
    };
    Ok(DensityEstimate::build(
        sampling,
        field,
        n,
        d,
        hits,
        total,
        Some(weight),
        description,
    ))
}

/// Truncated Euler factor ∏_{P ∈ X, deg P < r}(1 − q^{−(m+1)deg P}).
pub fn smooth_below_product(x: &SubschemeSpec, r: u32) -> Result<BigRational> {
    let q = BigUint::from(x.field().q());
    let s = x.m() as u32 + 1;
    let mut out = BigRational::one();
    for e in 1..r {
        let count = geometry::closed_points(x, e)?.len();
        let qe = q.pow(s * e);
        let factor = BigRational::new((&qe - 1u32).into(), qe.into());
        out *= num_traits::pow(factor, count);
    }
    Ok(out)
}

/// Converts an exact fraction to a float for tolerance checks.
pub fn fraction_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| to_f64(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ProjPoint;

    fn f2() -> FieldDesc {
        FieldDesc::new(2, 1).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn point(text: &str, field: &FieldDesc, e: u32) -> ClosedPoint {
        ClosedPoint::parse(text, field, e).unwrap()
    }

    fn one_point(text: &str, order: u8) -> JetScheme {
        JetScheme::new(
            &f2(),
            2,
            vec![JetPoint {
                point: point(text, &f2(), 1),
                order,
            }],
        )
        .unwrap()
    }

    #[test]
    fn jet_ranks() {
        let z = one_point("(1:0:0)", 2);
        let r = jet_map_rank(&z, 2).unwrap();
        assert_eq!((r.source_dim, r.target_dim, r.rank, r.surjective, r.threshold), (6, 3, 3, true, 2));
        let r0 = jet_map_rank(&one_point("(0:1:1)", 1), 0).unwrap();
        assert_eq!((r0.rank, r0.surjective), (1, true));
        let all = JetScheme::points_of_degree(&f2(), 2, 1, 2).unwrap();
        assert_eq!(all.points().len(), 7);
        let r20 = jet_map_rank(&all, 20).unwrap();
        assert_eq!((r20.rank, r20.threshold, r20.surjective), (21, 20, true));
        // Order-2 jets at 7 points cannot be independent in degree 1.
        assert!(!jet_map_rank(&all, 1).unwrap().surjective);
        assert!(jet_map_rank(&JetScheme::new(&f2(), 2, vec![]).unwrap(), 2).is_err());
    }

    #[test]
    fn jet_rank_over_nonprime_base_and_higher_degree_points() {
        let f4 = FieldDesc::new(2, 2).unwrap();
        let z = JetScheme::points_of_degree(&f4, 1, 1, 2).unwrap();
        assert_eq!(z.length(), 10);
        let r = jet_map_rank(&z, 9).unwrap();
        assert_eq!((r.rank, r.surjective), (10, true));
        let z2 = JetScheme::points_of_degree(&f2(), 1, 2, 1).unwrap();
        assert_eq!(z2.points().len(), 1);
        assert_eq!(jet_map_rank(&z2, 1).unwrap().rank, 2);
    }

    #[test]
    fn distinctness_is_enforced() {
        let p = point("(1:0:0)", &f2(), 1);
        let pts = vec![
            JetPoint { point: p.clone(), order: 1 },
            JetPoint { point: p, order: 2 },
        ];
        assert_eq!(JetScheme::new(&f2(), 2, pts), Err(Error::PointsNotDistinct));
    }

    #[test]
    fn functionals_match_jet2() {
        let f4 = FieldDesc::new(2, 2).unwrap();
        let w = f4.extend(2).unwrap();
        let f = HomogPoly::parse("[g]*x0^3+x1^2*x2+x0*x1*x2+x2^3", &f4, 2).unwrap();
        let pt = ProjPoint::new(w.clone(), vec![1, 5, 9]).unwrap();
        let pf = PointFunctionals::new(&w, pt.coords(), 3, &unit_directions(2));
        let mut got = Vec::new();
        pf.apply_into(&f, &mut got);
        let jet = f.jet2(&w, pt.coords()).unwrap();
        assert_eq!(got[0], jet.value);
        assert_eq!(&got[1..], &jet.gradient[..]);
    }

    #[test]
    fn lines_and_negation() {
        let p2 = SubschemeSpec::projective_space(&f2(), 2);
        let smooth = Predicate::SmoothIntersection { x: p2, bound: None };
        let est = exhaustive_density(&f2(), 2, 1, &smooth).unwrap();
        assert_eq!(est.fraction, rat(7, 8));
        let neg = exhaustive_density(&f2(), 2, 1, &smooth.clone().negate()).unwrap();
        assert_eq!(est.fraction + neg.fraction, BigRational::one());
    }

    #[test]
    fn singular_fractions() {
        let p2 = SubschemeSpec::projective_space(&f2(), 2);
        let p = point("(0:0:1)", &f2(), 1);
        assert_eq!(singular_fraction_at_point(&p2, &p, 3).unwrap(), rat(1, 8));
        let z = JetScheme::new(&f2(), 2, vec![JetPoint { point: p.clone(), order: 2 }]).unwrap();
        let pred = Predicate::JetInSet {
            z,
            t: JetSet::PerPoint(vec![JetCondition::Singular]),
        };
        let est = exhaustive_density(&f2(), 2, 3, &pred).unwrap();
        assert_eq!((est.hits, est.total), (128, 1024));
        // Singular at P in the sense of the smoothness module as well.
        let below = Predicate::SmoothAtPointsBelow { x: p2.clone(), r: 2 };
        let compiled = below.compile(&f2(), 2, 3).unwrap();
        let f = HomogPoly::parse("x0^3+x1^2*x2", &f2(), 2).unwrap();
        assert!(!compiled.eval(&f).unwrap());

        let q2 = point("(1:g:g+1)", &f2(), 2);
        let w = q2.field().clone();
        assert_eq!(w.e(), 2);
        assert_eq!(singular_fraction_at_point(&p2, &q2, 6).unwrap(), rat(1, 64));
        match singular_fraction_at_point(&p2, &q2, 5) {
            Err(Error::DegreeTooLarge { e: 2, d: 5, m_plus_1: 3, .. }) => {}
            other => panic!("{other:?}"),
        }

        let f3 = FieldDesc::new(3, 1).unwrap();
        let a1 = SubschemeSpec::affine_space(&f3, 1);
        let origin = point("(1:0)", &f3, 1);
        for d in 2..=4 {
            assert_eq!(singular_fraction_at_point(&a1, &origin, d).unwrap(), rat(1, 9));
        }
        let infinity = point("(0:1)", &f3, 1);
        assert!(singular_fraction_at_point(&a1, &infinity, 2).is_err());
    }

    #[test]
    fn singular_fraction_on_a_conic_matches_enumeration() {
        let conic = SubschemeSpec::new(
            "conic",
            &f2(),
            2,
            1,
            vec![HomogPoly::parse("x0^2+x1*x2", &f2(), 2).unwrap()],
            vec![],
        )
        .unwrap();
        let p = point("(0:0:1)", &f2(), 1);
        assert_eq!(singular_fraction_at_point(&conic, &p, 2).unwrap(), rat(1, 4));
        // Brute force: singular at P iff f(P) = 0 and df is proportional to
        // the conic's differential at P.
        let space = FormSpace::new(&f2(), 2, 2);
        let w = f2().arith();
        let mut singular_at_p = 0;
        for f in space.iter(0..space.count().unwrap()) {
            let v = f.eval(&w, &[0, 0, 1]).unwrap();
            let grad: Vec<u32> = (0..3).map(|i| f.derive(i).eval(&w, &[0, 0, 1]).unwrap()).collect();
            // The conic's gradient at (0:0:1) is (0, 1, 0).
            if v == 0 && grad[0] == 0 {
                singular_at_p += 1;
            }
        }
        assert_eq!(singular_at_p, 64 / 4);
    }

    #[test]
    fn exact_finite_identity_for_rational_points() {
        // Three rational points of P^1 with order-2 jets have length 6, so
        // the jet map is onto at d = 5.
        let p1 = SubschemeSpec::projective_space(&f2(), 1);
        let pred = Predicate::SmoothAtPointsBelow { x: p1.clone(), r: 2 };
        let est = exhaustive_density(&f2(), 1, 5, &pred).unwrap();
        assert_eq!(est.fraction, smooth_below_product(&p1, 2).unwrap());
        assert_eq!(est.fraction, rat(27, 64));
    }

    #[test]
    fn mc_is_reproducible_and_trivially_exact() {
        let est = mc_density(&f2(), 2, 2, &Predicate::True, 500, 9).unwrap();
        assert_eq!(est.fraction, BigRational::one());
        let (lo, hi) = est.ci95.unwrap();
        assert!(lo > 0.99 && hi == 1.0);
        let p2 = SubschemeSpec::projective_space(&f2(), 2);
        let pred = Predicate::SmoothAtPointsBelow { x: p2, r: 2 };
        let a = mc_density(&f2(), 2, 4, &pred, 3000, 42).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| mc_density(&f2(), 2, 4, &pred, 3000, 42)).unwrap();
        assert_eq!(a, b);
        let c = mc_density(&f2(), 2, 4, &pred, 3000, 43).unwrap();
        assert_ne!(a.hits, c.hits);
    }

    #[test]
    fn conditioned_densities() {
        let p2 = SubschemeSpec::projective_space(&f2(), 2);
        let smooth = Predicate::SmoothIntersection { x: p2, bound: None };
        let z = one_point("(0:0:1)", 2);
        let full = conditioned_density(&z, &JetSet::Full, 2, &smooth, Sampling::Exhaustive).unwrap();
        let plain = exhaustive_density(&f2(), 2, 2, &smooth).unwrap();
        assert_eq!(full.fraction, plain.fraction);
        assert_eq!(full.weight, Some(BigRational::one()));

        let z1 = one_point("(0:1:1)", 1);
        let zero = JetSet::Explicit(vec![vec![0]]);
        let est = conditioned_density(&z1, &zero, 3, &Predicate::True, Sampling::Exhaustive).unwrap();
        assert_eq!(est.fraction, rat(1, 2));

        let t = JetSet::PerPoint(vec![JetCondition::SmoothVanishing]);
        assert_eq!(t.size(&z).unwrap(), BigUint::from(3u32));
        let est = conditioned_density(&z, &t, 2, &smooth, Sampling::Exhaustive).unwrap();
        // Cross-check against filtering all of S_2.
        let joint = Predicate::And(vec![smooth.clone(), Predicate::JetInSet { z: z.clone(), t }]);
        assert_eq!(est.fraction, exhaustive_density(&f2(), 2, 2, &joint).unwrap().fraction);
        assert_eq!(est.weight, Some(rat(3, 8)));

        let all = JetScheme::points_of_degree(&f2(), 2, 1, 2).unwrap();
        assert!(matches!(
            conditioned_density(&all, &JetSet::Explicit(vec![vec![0; 21]]), 2, &Predicate::True, Sampling::Exhaustive),
            Err(Error::NotSurjective { .. })
        ));
        assert_eq!(
            conditioned_density(&z, &JetSet::Explicit(vec![]), 2, &Predicate::True, Sampling::Exhaustive),
            Err(Error::EmptyT)
        );
    }

    #[test]
    fn conditioned_mc_tracks_exhaustive() {
        let z = one_point("(1:0:0)", 2);
        let t = JetSet::PerPoint(vec![JetCondition::Vanishes]);
        let p2 = SubschemeSpec::projective_space(&f2(), 2);
        let pred = Predicate::SmoothAtPointsBelow { x: p2, r: 2 };
        let ex = conditioned_density(&z, &t, 3, &pred, Sampling::Exhaustive).unwrap();
        let mc = conditioned_density(&z, &t, 3, &pred, Sampling::MonteCarlo { trials: 20000, seed: 1 }).unwrap();
        let (lo, hi) = mc.ci95.unwrap();
        assert!(lo - 0.01 <= ex.float && ex.float <= hi + 0.01, "{} not in [{lo}, {hi}]", ex.float);
    }

    #[test]
    fn vanishing_fraction_respects_the_decay_bound() {
        // A closed point of degree e in the affine plane: f(P) = 0 cuts out
        // a fraction of at most q^{-min(d, e^{1/2})}.
        for (text, e) in [("(1:0:1)", 1), ("(1:g:1)", 2)] {
            let p = point(text, &f2(), e);
            let z = JetScheme::new(&f2(), 2, vec![JetPoint { point: p, order: 1 }]).unwrap();
            let t = JetSet::PerPoint(vec![JetCondition::Vanishes]);
            for d in 1..=3u32 {
                let est = exhaustive_density(&f2(), 2, d, &Predicate::JetInSet { z: z.clone(), t: t.clone() }).unwrap();
                let bound = 2f64.powf(-(d as f64).min((e as f64).sqrt()));
                assert!(est.float <= bound + 1e-12);
            }
        }
    }

    #[test]
    fn wilson_interval_contains_the_estimate() {
        let (lo, hi) = wilson(30, 100);
        assert!(lo < 0.3 && 0.3 < hi);
        assert_eq!(wilson(0, 10).0, 0.0);
    }
}
