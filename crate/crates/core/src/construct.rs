//! Constructions: sections through prescribed points, space-avoiding
//! sections, the Katz hypersurface and anti-Bertini hypersurfaces.
//!
//! Searches impose linear conditions on the coefficients of f, solve them
//! over F_p and walk the solution cosets: in canonical order when they fit
//! the budget, by seeded sampling otherwise. The first accepted candidate in
//! that order is returned, whatever the thread count, and is re-verified
//! with independent calls before it is reported.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, ClosedPoint, SubschemeSpec, VarietyFile};
use crate::gf::{FieldDesc, WorkingField};
use crate::linalg::Matrix;
use crate::mpoly::{HomogPoly, MonomialTable};
use crate::scan;
use crate::sieve::{self, Cosets, PointFunctionals};
use crate::smoothness::{self, IntegralityVerdict, SmoothnessVerdict, BOUNDED_POINT_BUDGET};

/// Largest number of sections verify_anti_bertini will enumerate.
pub const SECTION_BUDGET: u64 = 1 << 16;
/// Largest number of λ-systems a tangent prescription may expand into.
pub const SYSTEM_LIMIT: u64 = 1 << 12;
/// Budget handed to the integrality tester for reported hypersurfaces.
pub const INTEGRALITY_BUDGET: u64 = 1 << 14;
/// Highest closed-point degree tried when matching sections to points.
const MATCHING_MAX_DEGREE: u32 = 3;

/// Σ_{i=0}^{pairs} x_i·y_i^q − x_i^q·y_i in P^{2·pairs+1}, with
/// y_i = x_{pairs+1+i}.
pub fn katz_hypersurface(field: &FieldDesc, pairs: usize) -> HomogPoly {
    let n = 2 * pairs + 1;
    let q = field.q() as u32;
    let base = field.arith();
    let minus_one = base.neg(1);
    let mut f = HomogPoly::zero(field, n, q + 1);
    for i in 0..=pairs {
        let j = pairs + 1 + i;
        let mut e = vec![0; n + 1];
        e[i] = 1;
        e[j] = q;
        let a = HomogPoly::monomial(field, &e, 1);
        e[i] = q;
        e[j] = 1;
        let b = HomogPoly::monomial(field, &e, minus_one);
        f = f.add(&a).and_then(|f| f.add(&b)).expect("same space");
    }
    f
}

/// The tangent space of H_f ∩ X at a rational point must be the
/// intersection of the tangent space of X with a prescribed hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentCondition {
    pub point: ClosedPoint,
    pub hyperplane: HomogPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub x: SubschemeSpec,
    pub pass_through: Vec<ClosedPoint>,
    pub tangent: Vec<TangentCondition>,
    /// Forbid closed points of H_f ∩ X of degree below this.
    pub avoid_degree_below: Option<u32>,
    pub d_range: (u32, u32),
    /// Candidates examined per degree.
    pub budget: u64,
    pub seed: u64,
}

/// A variety given by a built-in name or spelled out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VarietyRef {
    Named(String),
    File(VarietyFile),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRef {
    pub point: String,
    #[serde(default = "one")]
    pub degree: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentRef {
    pub point: String,
    pub hyperplane: String,
}

/// On-disk form of a [`SearchSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchFile {
    pub variety: VarietyRef,
    pub p: u64,
    #[serde(default = "one")]
    pub a: u32,
    #[serde(default)]
    pub pass_through: Vec<PointRef>,
    #[serde(default)]
    pub tangent: Vec<TangentRef>,
    #[serde(default)]
    pub avoid_degree_below: Option<u32>,
    pub d_min: u32,
    pub d_max: u32,
    pub budget: u64,
    #[serde(default)]
    pub seed: u64,
}

impl SearchSpec {
    pub fn from_file(file: &SearchFile) -> Result<Self> {
        let field = FieldDesc::new(file.p, file.a)?;
        let x = match &file.variety {
            VarietyRef::Named(name) => SubschemeSpec::builtin(name, Some(&field))?
                .ok_or_else(|| Error::InvalidInput(format!("unknown variety {name}")))?,
            VarietyRef::File(vf) => SubschemeSpec::from_file(vf)?,
        };
        if x.field() != &field {
            return Err(Error::FieldMismatch);
        }
        let pass_through = file
            .pass_through
            .iter()
            .map(|p| ClosedPoint::parse(&p.point, &field, p.degree))
            .collect::<Result<_>>()?;
        let tangent = file
            .tangent
            .iter()
            .map(|t| {
                Ok(TangentCondition {
                    point: ClosedPoint::parse(&t.point, &field, 1)?,
                    hyperplane: HomogPoly::parse(&t.hyperplane, &field, x.n())?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(SearchSpec {
            x,
            pass_through,
            tangent,
            avoid_degree_below: file.avoid_degree_below,
            d_range: (file.d_min, file.d_max),
            budget: file.budget,
            seed: file.seed,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SearchFile =
            serde_json::from_str(text).map_err(|e| Error::syntax(e.column(), e.to_string()))?;
        SearchSpec::from_file(&file)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    Found {
        f: HomogPoly,
        d: u32,
        verdict: SmoothnessVerdict,
        integrality: IntegralityVerdict,
        /// One line per re-verified condition.
        checked: Vec<String>,
        notes: Vec<String>,
        /// Position of f in the search order of its degree.
        candidate: u64,
        sampled: bool,
    },
    NotFoundWithinBudget {
        /// (d, candidates examined) for every degree searched.
        tried: Vec<(u32, u64)>,
        notes: Vec<String>,
    },
}

impl SearchResult {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchResult::Found { .. })
    }
}

/// The accepted candidate and its position, positions examined, and
/// whether candidates were sampled.
type Walk = (Option<(u64, HomogPoly)>, u64, bool);
/// Points of X over one field, as normalized coordinates.
type FieldPoints = (Arc<WorkingField>, Vec<Vec<u32>>);
/// Tangent directions of X at a point and the hyperplane's derivatives
/// along them.
type TangentData = (Vec<Vec<u32>>, Vec<u32>);

/// Walks the candidates of one degree and returns the first accepted one
/// with its position, and the number of positions examined.
fn first_accepted(
    cosets: &Cosets,
    budget: u64,
    seed: u64,
    accept: impl Fn(&HomogPoly) -> Result<bool> + Sync + Send,
) -> Result<Walk> {
    let exhaustive = cosets.candidate_count().is_some_and(|c| c <= budget);
    let limit = if exhaustive {
        cosets.candidate_count().expect("counted")
    } else {
        budget
    };
    let candidate = |i: u64| {
        if exhaustive {
            cosets.candidate(i)
        } else {
            cosets.sample(&mut sieve::trial_rng(seed, i))
        }
    };
    let hit = (0..limit)
        .into_par_iter()
        .map(|i| {
            let f = candidate(i);
            let verdict = if f.is_zero() { Ok(false) } else { accept(&f) };
            (i, f, verdict)
        })
        .find_first(|(_, _, verdict)| !matches!(verdict, Ok(false)));
    match hit {
        Some((i, f, verdict)) => {
            verdict?;
            Ok((Some((i, f)), i + 1, !exhaustive))
        }
        None => Ok((None, limit, !exhaustive)),
    }
}

/// D_v g at a point for each direction v, in chart-local coordinates.
fn directional(g: &HomogPoly, w: &WorkingField, pt: &[u32], dirs: &[Vec<u32>]) -> Result<Vec<u32>> {
    let chart = pt.iter().position(|&c| c != 0).expect("nonzero point");
    let grad = geometry::chart_gradient(&geometry::all_partials(g), w, pt, chart)?;
    Ok(dirs
        .iter()
        .map(|v| v.iter().zip(&grad).fold(0, |acc, (&a, &b)| w.add(acc, w.mul(a, b))))
        .collect())
}

/// Points of X over the fields that cover every degree below ℓ.
fn avoidance_points(x: &SubschemeSpec, ell: u32) -> Result<Vec<FieldPoints>> {
    if ell == 0 {
        return Err(Error::InvalidInput("ℓ must be at least 1".into()));
    }
    if ell == 1 {
        return Ok(Vec::new());
    }
    let degrees = smoothness::covering_degrees(ell - 1);
    let mut total = 0u64;
    for &e in &degrees {
        let size = x.field().q().checked_pow(e);
        let count = size.and_then(|s| scan::projective_count(s, x.n()));
        total = count
            .and_then(|c| total.checked_add(c))
            .filter(|&t| t <= BOUNDED_POINT_BUDGET)
            .ok_or_else(|| {
                Error::budget(format!("points of P^{} of degree < {ell}", x.n()), BOUNDED_POINT_BUDGET)
            })?;
    }
    degrees
        .into_iter()
        .map(|e| {
            let w = x.field().extend(e)?;
            let pts = geometry::points_over(x, e)?
                .into_iter()
                .map(|p| p.coords().to_vec())
                .collect();
            Ok((w, pts))
        })
        .collect()
}

/// The hyperplane's derivative along each tangent direction of X at P,
/// which must not all vanish.
fn tangent_normal(x: &SubschemeSpec, t: &TangentCondition) -> Result<TangentData> {
    let p = &t.point;
    if p.degree() != 1 {
        return Err(Error::InvalidInput(format!("tangent point {p} is not rational")));
    }
    let h = &t.hyperplane;
    if h.field() != x.field() || h.n() != x.n() || h.degree() != 1 {
        return Err(Error::InvalidInput(format!("tangent hyperplane {h} is not a linear form")));
    }
    let w = p.field();
    let pt = p.rep().coords();
    let dirs = sieve::tangent_basis(x, w, pt)?;
    let normal = directional(h, w, pt, &dirs)?;
    if normal.iter().all(|&c| c == 0) {
        return Err(Error::InconsistentConditions(format!(
            "the hyperplane {h} at {p} would force a zero gradient"
        )));
    }
    if h.eval(w, pt)? != 0 {
        return Err(Error::InconsistentConditions(format!(
            "the hyperplane {h} does not pass through {p}"
        )));
    }
    Ok((dirs, normal))
}

fn validate_spec(spec: &SearchSpec) -> Result<Vec<TangentData>> {
    let x = &spec.x;
    let (lo, hi) = spec.d_range;
    if lo == 0 || lo > hi {
        return Err(Error::InvalidInput(format!("bad degree range [{lo}, {hi}]")));
    }
    if spec.budget == 0 {
        return Err(Error::InvalidInput("budget must be positive".into()));
    }
    for (i, p) in spec.pass_through.iter().enumerate() {
        if p.field().base() != x.field() || p.rep().n() != x.n() {
            return Err(Error::FieldMismatch);
        }
        if !x.contains(p.field(), p.rep().coords())? {
            return Err(Error::InvalidInput(format!("{p} is not a point of {}", x.name())));
        }
        if spec.pass_through[..i].contains(p) {
            return Err(Error::PointsNotDistinct);
        }
        if spec.avoid_degree_below.is_some_and(|r| p.degree() < r) {
            return Err(Error::InconsistentConditions(format!(
                "{p} has degree below the avoidance bound"
            )));
        }
    }
    let mut normals = Vec::new();
    for (i, t) in spec.tangent.iter().enumerate() {
        if !spec.pass_through.contains(&t.point) {
            return Err(Error::InvalidInput(format!(
                "tangent point {} is not among the points to pass through",
                t.point
            )));
        }
        if spec.tangent[..i].iter().any(|o| o.point == t.point) {
            return Err(Error::InconsistentConditions(format!(
                "two tangent prescriptions at {}",
                t.point
            )));
        }
        normals.push(tangent_normal(x, t)?);
    }
    let systems = (spec.x.field().q() - 1).checked_pow(spec.tangent.len() as u32);
    if systems.is_none_or(|s| s > SYSTEM_LIMIT) {
        return Err(Error::budget(
            format!("(q-1)^{} tangent systems", spec.tangent.len()),
            SYSTEM_LIMIT,
        ));
    }
    Ok(normals)
}

/// All vectors of (F_q^*)^k in lexicographic order.
fn unit_tuples(q: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..q).map(move |l| {
                    let mut t = t.clone();
                    t.push(l);
                    t
                })
            })
            .collect();
    }
    out
}

fn empty_system(field: &FieldDesc, n: usize, d: u32) -> Matrix {
    Matrix::zeros(0, MonomialTable::get(n, d).len() * field.a() as usize)
}

/// A smooth section H_f ∩ X through the prescribed points, with the
/// prescribed tangent hyperplanes and avoiding points of low degree.
pub fn find_section(spec: &SearchSpec) -> Result<SearchResult> {
    let normals = validate_spec(spec)?;
    let x = &spec.x;
    let field = x.field();
    let avoid = match spec.avoid_degree_below {
        Some(ell) => avoidance_points(x, ell)?,
        None => Vec::new(),
    };
    let lambdas = unit_tuples(field.q() as u32, spec.tangent.len());
    let mut tried = Vec::new();
    let mut notes = Vec::new();
    let mut any_consistent = false;
    for d in spec.d_range.0..=spec.d_range.1 {
        let mut functionals = Vec::new();
        for p in &spec.pass_through {
            if spec.tangent.iter().all(|t| &t.point != p) {
                functionals.push(PointFunctionals::new(p.field(), p.rep().coords(), d, &[]));
            }
        }
        let plain = functionals.len();
        for (t, (dirs, _)) in spec.tangent.iter().zip(&normals) {
            functionals.push(PointFunctionals::new(t.point.field(), t.point.rep().coords(), d, dirs));
        }
        let matrix = if functionals.is_empty() {
            empty_system(field, x.n(), d)
        } else {
            sieve::fp_matrix(field, &functionals)
        };
        let fp = sieve::prime_field(field);
        if matrix.rank(&fp) < matrix.rows() {
            notes.push(format!("d={d}: conditions are not independent, degree skipped"));
            continue;
        }
        let rhs: Vec<Vec<u32>> = lambdas
            .iter()
            .map(|ls| {
                let mut values = vec![0; plain];
                for ((t, (_, normal)), &l) in spec.tangent.iter().zip(&normals).zip(ls) {
                    let w = t.point.field();
                    values.push(0);
                    values.extend(normal.iter().map(|&c| w.mul(w.embed(l), c)));
                }
                sieve::target_digits(&functionals, &values)
            })
            .collect();
        let cosets = Cosets::solve(field, x.n(), d, &matrix, &rhs);
        if cosets.systems() == 0 {
            notes.push(format!("d={d}: no λ-system is consistent"));
            continue;
        }
        any_consistent = true;
        let accept = |f: &HomogPoly| -> Result<bool> {
            for (w, pts) in &avoid {
                for pt in pts {
                    if f.eval(w, pt)? == 0 {
                        return Ok(false);
                    }
                }
            }
            Ok(smoothness::is_smooth_intersection(f, x, None)?.is_smooth())
        };
        let (hit, count, sampled) = first_accepted(&cosets, spec.budget, spec.seed, accept)?;
        tried.push((d, count));
        if let Some((candidate, f)) = hit {
            let (verdict, checked) = verify_section(spec, &normals, &f)?;
            let integrality = smoothness::geometrically_integral(&f, INTEGRALITY_BUDGET)?;
            return Ok(SearchResult::Found {
                f,
                d,
                verdict,
                integrality,
                checked,
                notes,
                candidate,
                sampled,
            });
        }
    }
    if !any_consistent && !spec.tangent.is_empty() && tried.is_empty() {
        return Err(Error::InconsistentConditions(
            "no degree in range admits the prescribed tangents".into(),
        ));
    }
    Ok(SearchResult::NotFoundWithinBudget { tried, notes })
}

/// Re-checks every condition of `spec` on f through direct evaluation.
fn verify_section(
    spec: &SearchSpec,
    normals: &[TangentData],
    f: &HomogPoly,
) -> Result<(SmoothnessVerdict, Vec<String>)> {
    let x = &spec.x;
    let mut checked = Vec::new();
    let fail = |what: String| Error::Invariant(format!("returned section fails: {what}"));
    for p in &spec.pass_through {
        if f.eval(p.field(), p.rep().coords())? != 0 {
            return Err(fail(format!("f does not vanish at {p}")));
        }
        checked.push(format!("f vanishes at {p}"));
    }
    for (t, (dirs, normal)) in spec.tangent.iter().zip(normals) {
        let w = t.point.field();
        let df = directional(f, w, t.point.rep().coords(), dirs)?;
        let k = normal.iter().position(|&c| c != 0).expect("nondegenerate normal");
        let lambda = w.mul(df[k], w.inv(normal[k])?);
        let parallel = df.iter().zip(normal).all(|(&a, &b)| a == w.mul(lambda, b));
        if lambda == 0 || !parallel {
            return Err(fail(format!("tangent at {} is not {}", t.point, t.hyperplane)));
        }
        checked.push(format!("tangent at {} is {}", t.point, t.hyperplane));
    }
    if let Some(ell) = spec.avoid_degree_below {
        let section = x.intersect(f)?;
        for e in 1..ell {
            if !geometry::points_over(&section, e)?.is_empty() {
                return Err(fail(format!("H_f ∩ X has a point over F_q^{e}")));
            }
        }
        checked.push(format!("no closed point of degree < {ell} on H_f ∩ X"));
    }
    let verdict = smoothness::is_smooth_intersection(f, x, None)?;
    match smooth_line("H_f ∩ X", &verdict) {
        Some(line) => checked.push(line),
        None => return Err(fail(format!("smoothness verdict {verdict:?}"))),
    }
    Ok((verdict, checked))
}

fn smooth_line(what: &str, verdict: &SmoothnessVerdict) -> Option<String> {
    match verdict {
        SmoothnessVerdict::Smooth { checked_bound, exact } => Some(format!(
            "{what} smooth at all closed points of degree ≤ {checked_bound}{}",
            if *exact { " (certified)" } else { "" }
        )),
        _ => None,
    }
}

/// A smooth section with no closed point of degree < ℓ.
pub fn space_avoiding(
    x: &SubschemeSpec,
    ell: u32,
    d_range: (u32, u32),
    budget: u64,
    seed: u64,
) -> Result<SearchResult> {
    find_section(&SearchSpec {
        x: x.clone(),
        pass_through: Vec::new(),
        tangent: Vec::new(),
        avoid_degree_below: Some(ell),
        d_range,
        budget,
        seed,
    })
}

/// Nonzero forms of degree d up to scaling: first nonzero coefficient 1,
/// ordered by its position and then by the remaining coefficients.
pub fn monic_forms(field: &FieldDesc, n: usize, d: u32) -> Result<Vec<HomogPoly>> {
    let len = MonomialTable::get(n, d).len();
    let q = field.q();
    let count = (0..len).try_fold(0u64, |acc, k| {
        q.checked_pow((len - 1 - k) as u32).and_then(|c| acc.checked_add(c))
    });
    if count.is_none_or(|c| c > SECTION_BUDGET) {
        return Err(Error::budget(format!("({q}^{len}-1)/({q}-1) forms"), SECTION_BUDGET));
    }
    let mut out = Vec::new();
    for k in 0..len {
        for rest in 0..q.pow((len - 1 - k) as u32) {
            let mut coeffs = vec![0u32; len];
            coeffs[k] = 1;
            let mut r = rest;
            for c in coeffs[k + 1..].iter_mut() {
                *c = (r % q) as u32;
                r /= q;
            }
            out.push(HomogPoly::from_coeffs(field, n, d, coeffs)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionWitness {
    pub g: HomogPoly,
    /// A point where H_g ∩ X is singular; `None` when g vanishes on X.
    pub witness: Option<ClosedPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AntiBertini {
    AllSingular(Vec<SectionWitness>),
    CounterexampleFound { g: HomogPoly, verdict: SmoothnessVerdict },
}

/// Checks that H_g ∩ X is not smooth of dimension n − 2 for every g of
/// degree 1..=d_max up to scaling.
pub fn verify_anti_bertini(x: &SubschemeSpec, d_max: u32) -> Result<AntiBertini> {
    if x.closed().len() != 1 || x.m() + 1 != x.n() {
        return Err(Error::UnsupportedX(format!("{} is not a hypersurface", x.name())));
    }
    let mut sections = Vec::new();
    for e in 1..=d_max {
        sections.extend(monic_forms(x.field(), x.n(), e)?);
        if sections.len() as u64 > SECTION_BUDGET {
            return Err(Error::budget(sections.len(), SECTION_BUDGET));
        }
    }
    let verdicts: Vec<Result<SmoothnessVerdict>> = sections
        .par_iter()
        .map(|g| smoothness::is_smooth_intersection(g, x, None))
        .collect();
    let mut witnesses = Vec::with_capacity(sections.len());
    for (g, verdict) in sections.into_iter().zip(verdicts) {
        match verdict? {
            SmoothnessVerdict::SingularAt(p) => witnesses.push(SectionWitness { g, witness: Some(p) }),
            SmoothnessVerdict::IsWholeSpace => witnesses.push(SectionWitness { g, witness: None }),
            verdict @ SmoothnessVerdict::Smooth { .. } => {
                return Ok(AntiBertini::CounterexampleFound { g, verdict })
            }
        }
    }
    Ok(AntiBertini::AllSingular(witnesses))
}

/// Kuhn's augmenting-path matching of sections to distinct points.
fn match_points(candidates: &[Vec<usize>], points: usize) -> Option<Vec<usize>> {
    fn augment(
        i: usize,
        candidates: &[Vec<usize>],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &p in &candidates[i] {
            if seen[p] {
                continue;
            }
            seen[p] = true;
            if owner[p].is_none_or(|j| augment(j, candidates, owner, seen)) {
                owner[p] = Some(i);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; points];
    for i in 0..candidates.len() {
        let mut seen = vec![false; points];
        if !augment(i, candidates, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut assignment = vec![0; candidates.len()];
    for (p, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            assignment[*i] = p;
        }
    }
    Some(assignment)
}

/// Distinct closed points P_i ∈ H_{g_i}, preferring points of low degree
/// and points where H_{g_i} is smooth.
fn choose_points(field: &FieldDesc, n: usize, sections: &[HomogPoly]) -> Result<Vec<ClosedPoint>> {
    let space = SubschemeSpec::projective_space(field, n);
    let mut pool: Vec<ClosedPoint> = Vec::new();
    for top in 1..=MATCHING_MAX_DEGREE {
        pool.extend(geometry::closed_points(&space, top)?);
        let mut candidates = Vec::with_capacity(sections.len());
        for g in sections {
            let mut smooth = Vec::new();
            let mut singular = Vec::new();
            for (k, p) in pool.iter().enumerate() {
                let (w, pt) = (p.field(), p.rep().coords());
                if g.eval(w, pt)? != 0 {
                    continue;
                }
                let grad = geometry::chart_gradient(&geometry::all_partials(g), w, pt, p.rep().lead())?;
                if grad.iter().any(|&c| c != 0) {
                    smooth.push(k);
                } else {
                    singular.push(k);
                }
            }
            smooth.extend(singular);
            candidates.push(smooth);
        }
        if let Some(assignment) = match_points(&candidates, pool.len()) {
            return Ok(assignment.into_iter().map(|k| pool[k].clone()).collect());
        }
    }
    Err(Error::InconsistentConditions(format!(
        "no distinct points of degree ≤ {MATCHING_MAX_DEGREE} on the sections"
    )))
}

/// Searches for a smooth hypersurface X of degree in `dx_range` such that
/// every section by a hypersurface of degree ≤ d is singular: X is made
/// tangent to each section H_g at a distinct point of H_g.
pub fn anti_bertini_search(
    field: &FieldDesc,
    n: usize,
    d: u32,
    dx_range: (u32, u32),
    budget: u64,
    seed: u64,
) -> Result<SearchResult> {
    if n < 2 || d == 0 {
        return Err(Error::InvalidInput("need n ≥ 2 and d ≥ 1".into()));
    }
    let (lo, hi) = dx_range;
    if lo < 2 || lo > hi || budget == 0 {
        return Err(Error::InvalidInput(format!("bad degree range [{lo}, {hi}] or budget")));
    }
    let mut sections = Vec::new();
    for e in 1..=d {
        sections.extend(monic_forms(field, n, e)?);
    }
    let points = choose_points(field, n, &sections)?;
    // At P_i: F(P_i) = 0, and where H_{g_i} is smooth, ∇F(P_i) ∥ ∇g_i(P_i),
    // expressed as u·∇F(P_i) = 0 for u in the annihilator of ∇g_i(P_i).
    let mut directions = Vec::with_capacity(points.len());
    for (g, p) in sections.iter().zip(&points) {
        let (w, pt) = (p.field(), p.rep().coords());
        let grad = geometry::chart_gradient(&geometry::all_partials(g), w, pt, p.rep().lead())?;
        directions.push(if grad.iter().all(|&c| c == 0) {
            Vec::new()
        } else {
            Matrix::from_rows(n, &[grad]).kernel(w)
        });
    }
    let space = SubschemeSpec::projective_space(field, n);
    let fp = sieve::prime_field(field);
    let mut tried = Vec::new();
    let mut notes = Vec::new();
    for dx in lo..=hi {
        let functionals: Vec<PointFunctionals> = points
            .iter()
            .zip(&directions)
            .map(|(p, dirs)| PointFunctionals::new(p.field(), p.rep().coords(), dx, dirs))
            .collect();
        let matrix = sieve::fp_matrix(field, &functionals);
        if matrix.rank(&fp) < matrix.rows() {
            notes.push(format!("d_X={dx}: conditions are not independent, degree skipped"));
            continue;
        }
        let cosets = Cosets::solve(field, n, dx, &matrix, &[vec![0; matrix.rows()]]);
        let accept = |f: &HomogPoly| -> Result<bool> {
            for p in &points {
                let (w, pt) = (p.field(), p.rep().coords());
                let grad = geometry::chart_gradient(&geometry::all_partials(f), w, pt, p.rep().lead())?;
                if grad.iter().all(|&c| c == 0) {
                    return Ok(false);
                }
            }
            Ok(smoothness::is_smooth_intersection(f, &space, None)?.is_smooth())
        };
        let (hit, count, sampled) = first_accepted(&cosets, budget, seed, accept)?;
        tried.push((dx, count));
        if let Some((candidate, f)) = hit {
            let verdict = smoothness::is_smooth_intersection(&f, &space, None)?;
            let x = SubschemeSpec::new(
                format!("V({f})"),
                field,
                n,
                n - 1,
                vec![f.clone()],
                vec![],
            )?;
            let mut checked: Vec<String> = smooth_line("X = V(F)", &verdict).into_iter().collect();
            match verify_anti_bertini(&x, d)? {
                AntiBertini::AllSingular(w) => checked.push(format!(
                    "all {} sections of degree ≤ {d} are singular",
                    w.len()
                )),
                AntiBertini::CounterexampleFound { g, .. } => {
                    return Err(Error::Invariant(format!(
                        "constructed X has a smooth section by {g}"
                    )))
                }
            }
            let integrality = smoothness::geometrically_integral(&f, INTEGRALITY_BUDGET)?;
            return Ok(SearchResult::Found {
                f,
                d: dx,
                verdict,
                integrality,
                checked,
                notes,
                candidate,
                sampled,
            });
        }
    }
    Ok(SearchResult::NotFoundWithinBudget { tried, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Validation;

    fn f2() -> FieldDesc {
        FieldDesc::new(2, 1).unwrap()
    }

    fn p2() -> SubschemeSpec {
        SubschemeSpec::projective_space(&f2(), 2)
    }

    fn spec(pass: &[&str], d_range: (u32, u32)) -> SearchSpec {
        SearchSpec {
            x: p2(),
            pass_through: pass.iter().map(|t| ClosedPoint::parse(t, &f2(), 1).unwrap()).collect(),
            tangent: vec![],
            avoid_degree_below: None,
            d_range,
            budget: 1000,
            seed: 0,
        }
    }

    #[test]
    fn katz_forms() {
        let k = katz_hypersurface(&f2(), 1);
        assert_eq!(k, HomogPoly::parse("x0*x2^2 + x0^2*x2 + x1*x3^2 + x1^2*x3", &f2(), 3).unwrap());
        let f3 = FieldDesc::new(3, 1).unwrap();
        let k3 = katz_hypersurface(&f3, 1);
        assert_eq!(k3.degree(), 4);
        assert_eq!(k3, HomogPoly::parse("x0*x2^3 - x0^3*x2 + x1*x3^3 - x1^3*x3", &f3, 3).unwrap());
        // Swapping the two pairs fixes the form.
        let swapped = HomogPoly::parse("x1*x3^3 - x1^3*x3 + x0*x2^3 - x0^3*x2", &f3, 3).unwrap();
        assert_eq!(k3, swapped);
        assert_eq!(validate_smooth_katz(), Validation::ValidUpTo(3));
    }

    fn validate_smooth_katz() -> Validation {
        geometry::validate_smooth(&SubschemeSpec::katz(&f2(), 1), 3).unwrap()
    }

    #[test]
    fn trivial_section_is_a_line() {
        match find_section(&spec(&[], (1, 1))).unwrap() {
            SearchResult::Found { f, d, verdict, .. } => {
                assert_eq!(d, 1);
                assert!(!f.is_zero());
                assert_eq!(verdict, SmoothnessVerdict::Smooth { checked_bound: 1, exact: true });
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sections_through_points_vanish_there() {
        let s = spec(&["(1:0:0)", "(0:1:0)", "(1:1:1)"], (2, 3));
        match find_section(&s).unwrap() {
            SearchResult::Found { f, checked, .. } => {
                let w = f2().arith();
                for pt in [[1, 0, 0], [0, 1, 0], [1, 1, 1]] {
                    assert_eq!(f.eval(&w, &pt).unwrap(), 0);
                }
                assert!(checked.len() >= 4);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn passing_through_an_avoided_point_is_inconsistent() {
        let mut s = spec(&["(1:0:0)"], (2, 4));
        s.avoid_degree_below = Some(2);
        assert!(matches!(find_section(&s), Err(Error::InconsistentConditions(_))));
        s.avoid_degree_below = Some(1);
        assert!(find_section(&s).unwrap().is_found());
    }

    #[test]
    fn tangent_prescriptions() {
        let mut s = spec(&["(1:0:0)"], (2, 3));
        s.tangent.push(TangentCondition {
            point: ClosedPoint::parse("(1:0:0)", &f2(), 1).unwrap(),
            hyperplane: HomogPoly::parse("x1", &f2(), 2).unwrap(),
        });
        match find_section(&s).unwrap() {
            SearchResult::Found { f, .. } => {
                let jet = f.jet2(&f2().arith(), &[1, 0, 0]).unwrap();
                assert_eq!((jet.value, jet.gradient.clone()), (0, vec![1, 0]));
            }
            other => panic!("{other:?}"),
        }
        let mut bad = spec(&["(1:0:0)", "(0:1:0)"], (2, 3));
        for pt in ["(1:0:0)", "(0:1:0)"] {
            bad.tangent.push(TangentCondition {
                point: ClosedPoint::parse(pt, &f2(), 1).unwrap(),
                hyperplane: HomogPoly::zero(&f2(), 2, 1),
            });
        }
        assert!(matches!(find_section(&bad), Err(Error::InconsistentConditions(_))));
        let mut off = spec(&["(1:0:0)"], (2, 3));
        off.tangent.push(TangentCondition {
            point: ClosedPoint::parse("(1:0:0)", &f2(), 1).unwrap(),
            hyperplane: HomogPoly::parse("x0", &f2(), 2).unwrap(),
        });
        assert!(matches!(find_section(&off), Err(Error::InconsistentConditions(_))));
    }

    #[test]
    fn coset_counts_match_dimension() {
        // Seven independent conditions leave q^{15-7} quartics.
        let s = spec(&["(0:0:1)", "(0:1:0)", "(0:1:1)", "(1:0:0)", "(1:0:1)", "(1:1:0)", "(1:1:1)"], (4, 4));
        let functionals: Vec<PointFunctionals> = s
            .pass_through
            .iter()
            .map(|p| PointFunctionals::new(p.field(), p.rep().coords(), 4, &[]))
            .collect();
        let m = sieve::fp_matrix(&f2(), &functionals);
        let c = Cosets::solve(&f2(), 2, 4, &m, &[vec![0; 7]]);
        assert_eq!(c.candidate_count(), Some(1 << 8));
        let w = f2().arith();
        for i in 0..256 {
            let f = c.candidate(i);
            assert!(s.pass_through.iter().all(|p| f.eval(&w, p.rep().coords()).unwrap() == 0));
        }
    }

    #[test]
    fn space_avoiding_small_cases() {
        match space_avoiding(&p2(), 1, (1, 1), 100, 0).unwrap() {
            SearchResult::Found { d, .. } => assert_eq!(d, 1),
            other => panic!("{other:?}"),
        }
        match space_avoiding(&p2(), 2, (2, 4), 100_000, 0).unwrap() {
            SearchResult::Found { f, d, .. } => {
                assert_eq!(d, 4);
                let w = f2().arith();
                assert!(geometry::points_over(&p2(), 1)
                    .unwrap()
                    .iter()
                    .all(|p| f.eval(&w, p.coords()).unwrap() != 0));
            }
            other => panic!("{other:?}"),
        }
        assert!(space_avoiding(&p2(), 40, (2, 4), 10, 0).is_err());
    }

    #[test]
    fn anti_bertini_verification() {
        let katz = SubschemeSpec::katz(&f2(), 1);
        match verify_anti_bertini(&katz, 1).unwrap() {
            AntiBertini::AllSingular(w) => {
                assert_eq!(w.len(), 15);
                assert!(w.iter().all(|s| s.witness.is_some()));
            }
            other => panic!("{other:?}"),
        }
        let conic = SubschemeSpec::new(
            "conic",
            &f2(),
            2,
            1,
            vec![HomogPoly::parse("x0^2+x1*x2", &f2(), 2).unwrap()],
            vec![],
        )
        .unwrap();
        assert!(matches!(
            verify_anti_bertini(&conic, 1).unwrap(),
            AntiBertini::CounterexampleFound { .. }
        ));
        assert_eq!(verify_anti_bertini(&katz, 0).unwrap(), AntiBertini::AllSingular(vec![]));
    }

    #[test]
    fn matching_assigns_distinct_points() {
        let sections = monic_forms(&f2(), 2, 1).unwrap();
        assert_eq!(sections.len(), 7);
        let pts = choose_points(&f2(), 2, &sections).unwrap();
        let w = f2().arith();
        for (g, p) in sections.iter().zip(&pts) {
            assert_eq!(g.eval(&w, p.rep().coords()).unwrap(), 0);
        }
        let mut sorted = pts.clone();
        sorted.sort_by(|a, b| a.rep().cmp(b.rep()));
        sorted.dedup();
        assert_eq!(sorted.len(), 7);
        assert_eq!(match_points(&[vec![0], vec![0]], 1), None);
    }

    #[test]
    fn search_spec_json() {
        let text = r#"{"variety":"P2","p":2,"pass_through":[{"point":"(1:0:0)"}],
            "tangent":[{"point":"(1:0:0)","hyperplane":"x1"}],"d_min":2,"d_max":3,"budget":50}"#;
        let s = SearchSpec::from_json(text).unwrap();
        assert_eq!(s.pass_through.len(), 1);
        assert_eq!(s.d_range, (2, 3));
        assert!(SearchSpec::from_json("{").is_err());
    }
}
