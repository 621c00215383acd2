//! Smoothness of H_f ∩ X by the Jacobian criterion at closed points.
//!
//! A point P of X with f(P) = 0 is singular on H_f ∩ X when the chart-affine
//! Jacobian of the closed generators stacked with f has rank below
//! n − m + 1. Closed points are scanned by extension degree: every degree up
//! to the bound divides some degree in the scanned set, and a hit is traced
//! back to the least degree at which a singular point exists.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{self, ClosedPoint, Named, ProjPoint, SubschemeSpec};
use crate::gf::{FieldDesc, WorkingField};
use crate::linalg::Matrix;
use crate::mpoly::{HomogPoly, MonomialTable};
use crate::scan;

/// Exact mode is attempted only when the scan touches at most this many points.
pub const EXACT_POINT_BUDGET: u64 = 1 << 25;
/// Bounded mode picks the largest B with #P^n(F_{q^B}) at most this.
pub const BOUNDED_POINT_BUDGET: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmoothnessVerdict {
    /// No singular point of degree ≤ `checked_bound`; `exact` when that bound
    /// dominates the certified bound, so H_f ∩ X is smooth.
    Smooth { checked_bound: u32, exact: bool },
    /// The least-degree, lexicographically least singular point.
    SingularAt(ClosedPoint),
    /// f = 0 on a nonempty X.
    IsWholeSpace,
}

impl SmoothnessVerdict {
    pub fn is_smooth(&self) -> bool {
        matches!(self, SmoothnessVerdict::Smooth { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularityClass {
    Node,
    /// `degenerate_quadratic_part` is true when the quadratic part is a
    /// nonzero degenerate form and false when it vanishes.
    NonNode { degenerate_quadratic_part: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegralityVerdict {
    GeometricallyIntegral,
    ReducibleOver {
        e: u32,
        factor_degrees: Vec<u32>,
        /// f = factor · cofactor over F_{q^e}, coefficients in that field.
        factor: String,
        cofactor: String,
    },
    Unknown { budget_note: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SingularLocus {
    /// Over F_{q^e} the singular locus has more points than a finite one can.
    PositiveDim { witness_e: u32, count: u64, cap: u64 },
    FiniteUpTo(u32),
}

/// Extension degrees to scan and whether the scan is a proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckPlan {
    pub bound: u32,
    pub exact: bool,
    pub degrees: Vec<u32>,
}

/// d(d−1)^{n−1} for X open in P^n; no bound is known for other X.
pub fn certified_bound(x: &SubschemeSpec, d: u32) -> Option<u64> {
    if !x.is_open_in_projective() {
        return None;
    }
    let n = x.n() as u32;
    let mut b = d as u64;
    for _ in 1..n {
        b = b.checked_mul(d.saturating_sub(1) as u64)?;
    }
    Some(b.max(1))
}

/// Degrees e with every k ≤ bound dividing one of them: a short prefix
/// followed by (bound/2, bound].
pub fn covering_degrees(bound: u32) -> Vec<u32> {
    let set: BTreeSet<u32> = (1..=bound.min(3)).chain(bound / 2 + 1..=bound).collect();
    set.into_iter().collect()
}

fn scan_cost(field: &FieldDesc, n: usize, degrees: &[u32]) -> Option<u64> {
    degrees.iter().try_fold(0u64, |acc, &e| {
        let size = field.q().checked_pow(e)?;
        acc.checked_add(scan::projective_count(size, n)?)
    })
}

fn field_fits(field: &FieldDesc, e: u32) -> bool {
    let bits = (field.p() as f64).log2() * (field.a() * e) as f64;
    bits <= crate::gf::max_field_bits() as f64 + 1e-9
}

/// The largest B whose top scan stays within the bounded-mode budget.
pub fn default_bounded_degree(field: &FieldDesc, n: usize) -> u32 {
    let mut b = 1;
    while field_fits(field, b + 1)
        && field
            .q()
            .checked_pow(b + 1)
            .and_then(|s| scan::projective_count(s, n))
            .is_some_and(|c| c <= BOUNDED_POINT_BUDGET)
    {
        b += 1;
    }
    b
}

pub fn plan(x: &SubschemeSpec, d: u32, requested: Option<u32>) -> Result<CheckPlan> {
    let certified = certified_bound(x, d);
    let bound = match requested {
        Some(0) => return Err(Error::InvalidInput("bound must be at least 1".into())),
        Some(b) => b,
        None => match certified {
            Some(c) if c <= u32::MAX as u64 && field_fits(x.field(), c as u32) => {
                let c = c as u32;
                match scan_cost(x.field(), x.n(), &covering_degrees(c)) {
                    Some(cost) if cost <= EXACT_POINT_BUDGET => c,
                    _ => default_bounded_degree(x.field(), x.n()),
                }
            }
            _ => default_bounded_degree(x.field(), x.n()),
        },
    };
    Ok(CheckPlan {
        bound,
        exact: certified.is_some_and(|c| bound as u64 >= c),
        degrees: covering_degrees(bound),
    })
}

/// Singularity test for H_f ∩ X at points of one working field.
struct Tester<'a> {
    f: &'a HomogPoly,
    x: &'a SubschemeSpec,
    f_partials: Vec<HomogPoly>,
    gen_partials: Vec<Vec<HomogPoly>>,
}

impl<'a> Tester<'a> {
    fn new(f: &'a HomogPoly, x: &'a SubschemeSpec) -> Result<Self> {
        if f.field() != x.field() || f.n() != x.n() {
            return Err(Error::FieldMismatch);
        }
        Ok(Tester {
            f,
            x,
            f_partials: geometry::all_partials(f),
            gen_partials: x.closed().iter().map(geometry::all_partials).collect(),
        })
    }

    /// For a zero of f: is it on X, and if so is it singular on H_f ∩ X?
    fn singular_at(&self, w: &WorkingField, pt: &[u32]) -> Result<bool> {
        for g in self.x.closed() {
            if g.eval(w, pt)? != 0 {
                return Ok(false);
            }
        }
        if !self.x.in_open(w, pt)? {
            return Ok(false);
        }
        let chart = pt.iter().position(|&c| c != 0).expect("nonzero point");
        let grad = geometry::chart_gradient(&self.f_partials, w, pt, chart)?;
        if self.gen_partials.is_empty() {
            return Ok(grad.iter().all(|&g| g == 0));
        }
        let n = self.x.n();
        let expected = n - self.x.m();
        let mut jac = Matrix::zeros(0, n);
        for p in &self.gen_partials {
            jac.push_row(&geometry::chart_gradient(p, w, pt, chart)?);
        }
        if jac.rank(w) != expected {
            return Err(Error::XNotValidated(format!(
                "Jacobian rank of the closed generators at {} is not {expected}",
                format_point(w, pt)
            )));
        }
        jac.push_row(&grad);
        Ok(!jac.rank_at_least(w, expected + 1))
    }

    fn scan<T>(
        &self,
        w: &WorkingField,
        mut visit: impl FnMut(&[u32]) -> ControlFlow<T>,
    ) -> Result<Option<T>> {
        let out = scan::for_each_zero(self.f, w, |pt| match self.singular_at(w, pt) {
            Ok(true) => visit(pt).map_break(Ok),
            Ok(false) => ControlFlow::Continue(()),
            Err(e) => ControlFlow::Break(Err(e)),
        })?;
        out.transpose()
    }

    fn first(&self, w: &WorkingField) -> Result<Option<Vec<u32>>> {
        self.scan(w, |pt| ControlFlow::Break(pt.to_vec()))
    }
}

fn format_point(w: &WorkingField, pt: &[u32]) -> String {
    let parts: Vec<String> = pt.iter().map(|&c| w.format(c)).collect();
    format!("({})", parts.join(":"))
}

fn closed_at(w: &Arc<WorkingField>, pt: &[u32]) -> Result<ClosedPoint> {
    ClosedPoint::new(&ProjPoint::normalized(w.clone(), pt))
}

/// All closed points of degree ≤ `bound` where H_f ∩ X is not smooth of
/// dimension m − 1, by degree and then canonical order.
pub fn singular_points(f: &HomogPoly, x: &SubschemeSpec, bound: u32) -> Result<Vec<ClosedPoint>> {
    if f.degree() == 0 {
        return Err(Error::InvalidInput("the form must have positive degree".into()));
    }
    let tester = Tester::new(f, x)?;
    let mut out = Vec::new();
    for e in 1..=bound {
        let w = x.field().extend(e)?;
        tester.scan(&w, |pt| {
            let p = ProjPoint::normalized(w.clone(), pt);
            let orbit = p.orbit();
            if orbit.len() as u32 == e && orbit.iter().all(|o| p <= *o) {
                out.push(ClosedPoint::new(&p));
            }
            ControlFlow::<()>::Continue(())
        })?;
    }
    out.into_iter().collect()
}

pub fn is_smooth_intersection(
    f: &HomogPoly,
    x: &SubschemeSpec,
    bound: Option<u32>,
) -> Result<SmoothnessVerdict> {
    if f.degree() == 0 && !f.is_zero() {
        return Ok(SmoothnessVerdict::Smooth {
            checked_bound: bound.unwrap_or(1),
            exact: x.is_open_in_projective(),
        });
    }
    let plan = plan(x, f.degree().max(1), bound)?;
    if f.is_zero() {
        for &e in &plan.degrees {
            let w = x.field().extend(e)?;
            if x.for_each_point(&w, |_| ControlFlow::Break(()))?.is_some() {
                return Ok(SmoothnessVerdict::IsWholeSpace);
            }
        }
        return Ok(SmoothnessVerdict::Smooth {
            checked_bound: plan.bound,
            exact: plan.exact,
        });
    }
    let tester = Tester::new(f, x)?;
    let mut scanned = BTreeSet::new();
    for &e in &plan.degrees {
        let w = x.field().extend(e)?;
        scanned.insert(e);
        let Some(pt) = tester.first(&w)? else {
            continue;
        };
        // Degrees below e that the plan skipped may hold a smaller witness.
        for lower in 1..e {
            if scanned.contains(&lower) {
                continue;
            }
            let wl = x.field().extend(lower)?;
            if let Some(lp) = tester.first(&wl)? {
                return Ok(SmoothnessVerdict::SingularAt(closed_at(&wl, &lp)?));
            }
        }
        return Ok(SmoothnessVerdict::SingularAt(closed_at(&w, &pt)?));
    }
    Ok(SmoothnessVerdict::Smooth {
        checked_bound: plan.bound,
        exact: plan.exact,
    })
}

/// Node versus non-node at a singular point of a plane curve.
pub fn classify_singularity(
    f: &HomogPoly,
    x: &SubschemeSpec,
    p: &ClosedPoint,
) -> Result<SingularityClass> {
    if x.named() != Some(Named::Projective) || x.n() != 2 {
        return Err(Error::UnsupportedX(format!(
            "node classification is implemented for P^2 only, not {}",
            x.name()
        )));
    }
    let w = p.field();
    if w.base() != f.field() || p.rep().n() != 2 {
        return Err(Error::FieldMismatch);
    }
    classify_at(f, w, p.rep().coords())
}

fn classify_at(f: &HomogPoly, w: &WorkingField, pt: &[u32]) -> Result<SingularityClass> {
    let jet = f.jet2(w, pt)?;
    if jet.value != 0 || jet.gradient.iter().any(|&g| g != 0) {
        return Err(Error::NotSingularHere);
    }
    let (a, b, c) = (jet.quad_coeff(0, 0), jet.quad_coeff(0, 1), jet.quad_coeff(1, 1));
    let nondegenerate = if w.p() == 2 {
        b != 0
    } else {
        w.sub(w.mul(b, b), w.mul(w.from_int(4), w.mul(a, c))) != 0
    };
    Ok(if nondegenerate {
        SingularityClass::Node
    } else {
        SingularityClass::NonNode {
            degenerate_quadratic_part: a != 0 || b != 0 || c != 0,
        }
    })
}

/// Whether every singular point of the plane curve H_f of degree ≤ the
/// planned bound is a node. The zero form is not nodal.
pub fn at_worst_nodes(f: &HomogPoly, bound: Option<u32>) -> Result<bool> {
    if f.n() != 2 {
        return Err(Error::UnsupportedX(format!(
            "node checks need plane curves, not forms in {} variables",
            f.n() + 1
        )));
    }
    if f.is_zero() {
        return Ok(false);
    }
    if f.degree() == 0 {
        return Ok(true);
    }
    let x = SubschemeSpec::projective_space(f.field(), 2);
    let plan = plan(&x, f.degree(), bound)?;
    let tester = Tester::new(f, &x)?;
    for &e in &plan.degrees {
        let w = x.field().extend(e)?;
        let bad = tester.scan(&w, |pt| match classify_at(f, &w, pt) {
            Ok(SingularityClass::Node) => ControlFlow::Continue(()),
            Ok(_) => ControlFlow::Break(Ok(())),
            Err(err) => ControlFlow::Break(Err(err)),
        })?;
        if let Some(res) = bad {
            res?;
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bézout-type cap on the number of geometric points of a finite singular
/// locus of H_f ∩ X.
pub fn finite_locus_cap(f: &HomogPoly, x: &SubschemeSpec) -> Option<u64> {
    let d = f.degree() as u64;
    let n = x.n() as u32;
    if x.is_open_in_projective() {
        return certified_bound(x, f.degree());
    }
    let dmax = x.closed().iter().map(|g| g.degree() as u64).chain([d]).max().unwrap_or(1);
    let minors = (x.n() - x.m() + 1) as u64 * dmax.saturating_sub(1);
    dmax.max(minors).checked_pow(n)
}

pub fn positive_dim_singular_locus(
    f: &HomogPoly,
    x: &SubschemeSpec,
    bound: u32,
) -> Result<SingularLocus> {
    let cap = finite_locus_cap(f, x)
        .ok_or_else(|| Error::Overflow("Bézout cap does not fit in 64 bits".into()))?;
    let tester = Tester::new(f, x)?;
    for e in 1..=bound {
        let w = x.field().extend(e)?;
        let mut count = 0u64;
        tester.scan(&w, |_| {
            count += 1;
            ControlFlow::<()>::Continue(())
        })?;
        if count > cap {
            return Ok(SingularLocus::PositiveDim {
                witness_e: e,
                count,
                cap,
            });
        }
    }
    Ok(SingularLocus::FiniteUpTo(bound))
}

/// A form over a working field as a dense coefficient vector.
struct WForm {
    n: usize,
    d: u32,
    coeffs: Vec<u32>,
}

impl WForm {
    fn table(&self) -> Arc<MonomialTable> {
        MonomialTable::get(self.n, self.d)
    }

    fn format(&self, w: &WorkingField) -> String {
        let table = self.table();
        let mut terms = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut factors = Vec::new();
            if c != 1 || self.d == 0 {
                factors.push(if c < w.p() { c.to_string() } else { format!("[{}]", w.format(c)) });
            }
            for (i, &a) in table.exps(k).iter().enumerate() {
                match a {
                    0 => {}
                    1 => factors.push(format!("x{i}")),
                    a => factors.push(format!("x{i}^{a}")),
                }
            }
            terms.push(factors.join("*"));
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    fn mul(&self, other: &WForm, w: &WorkingField) -> WForm {
        let d = self.d + other.d;
        let out_table = MonomialTable::get(self.n, d);
        let mut coeffs = vec![0; out_table.len()];
        let (ta, tb) = (self.table(), other.table());
        let mut e = vec![0; self.n + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                for (k, slot) in e.iter_mut().enumerate() {
                    *slot = ta.exps(i)[k] + tb.exps(j)[k];
                }
                let idx = out_table.index_of(&e).expect("degree matches");
                coeffs[idx] = w.add(coeffs[idx], w.mul(a, b));
            }
        }
        WForm { n: self.n, d, coeffs }
    }

    /// The quotient self / g when g divides self. Table order is lex with
    /// x_n most significant, a monomial order, so leading terms divide.
    fn exact_div(&self, g: &WForm, w: &WorkingField) -> Option<WForm> {
        let n = self.n;
        let (tf, tg) = (self.table(), g.table());
        let qd = self.d - g.d;
        let tq = MonomialTable::get(n, qd);
        let g_terms: Vec<(Vec<u32>, u32)> = g
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (tg.exps(k).to_vec(), c))
            .collect();
        let (g_lead, g_lc) = g_terms.last().cloned()?;
        let g_lc_inv = w.inv(g_lc).ok()?;
        let mut r = self.coeffs.clone();
        let mut quot = vec![0; tq.len()];
        let mut e = vec![0; n + 1];
        while let Some(top) = r.iter().rposition(|&c| c != 0) {
            let lead = tf.exps(top);
            if lead.iter().zip(&g_lead).any(|(a, b)| a < b) {
                return None;
            }
            let m: Vec<u32> = lead.iter().zip(&g_lead).map(|(a, b)| a - b).collect();
            let c = w.mul(r[top], g_lc_inv);
            quot[tq.index_of(&m).expect("degree matches")] = c;
            for (ge, gc) in &g_terms {
                for k in 0..=n {
                    e[k] = ge[k] + m[k];
                }
                let idx = tf.index_of(&e).expect("degree matches");
                r[idx] = w.sub(r[idx], w.mul(c, *gc));
            }
        }
        Some(WForm {
            n,
            d: qd,
            coeffs: quot,
        })
    }
}

/// Number of forms of a given length whose first nonzero coefficient is 1.
fn monic_count(len: usize, big_q: u64) -> Option<u64> {
    (0..len).try_fold(0u64, |acc, k| acc.checked_add(big_q.checked_pow((len - 1 - k) as u32)?))
}

/// Searches for f = g·h with 1 ≤ deg g ≤ d/2 over F_{q^e}. A smallest
/// absolutely irreducible factor of degree i is defined over an extension of
/// degree at most d/i, which bounds e.
pub fn geometrically_integral(f: &HomogPoly, budget: u64) -> Result<IntegralityVerdict> {
    let d = f.degree();
    if d == 0 {
        return Err(Error::InvalidInput("the form must have positive degree".into()));
    }
    if f.is_zero() {
        return Err(Error::InvalidInput("the zero form defines no hypersurface".into()));
    }
    let n = f.n();
    let mut tried = 0u64;
    for e in 1..=d {
        let max_i = (d / 2).min(d / e);
        if max_i == 0 {
            break;
        }
        let w = match f.field().extend(e) {
            Ok(w) => w,
            Err(Error::Overflow(msg)) => {
                return Ok(IntegralityVerdict::Unknown {
                    budget_note: format!("extension of degree {e} unavailable: {msg}"),
                })
            }
            Err(other) => return Err(other),
        };
        let target = WForm {
            n,
            d,
            coeffs: f.embedded(&w)?,
        };
        let big_q = w.size() as u64;
        for i in 1..=max_i {
            let len = MonomialTable::get(n, i).len();
            let count = monic_count(len, big_q).filter(|c| tried.saturating_add(*c) <= budget);
            let Some(count) = count else {
                return Ok(IntegralityVerdict::Unknown {
                    budget_note: format!(
                        "search over degree-{i} factors with coefficients in F_{}^{e} exceeds the budget of {budget} candidates",
                        f.field().q()
                    ),
                });
            };
            tried += count;
            let mut g = WForm {
                n,
                d: i,
                coeffs: vec![0; len],
            };
            for lead in 0..len {
                g.coeffs.iter_mut().for_each(|c| *c = 0);
                g.coeffs[lead] = 1;
                loop {
                    if let Some(h) = target.exact_div(&g, &w) {
                        if g.mul(&h, &w).coeffs != target.coeffs {
                            return Err(Error::Invariant("division witness does not multiply back".into()));
                        }
                        return Ok(IntegralityVerdict::ReducibleOver {
                            e,
                            factor_degrees: vec![i, d - i],
                            factor: g.format(&w),
                            cofactor: h.format(&w),
                        });
                    }
                    // Counter over the coefficients after the leading one.
                    let mut k = lead + 1;
                    while k < len {
                        g.coeffs[k] += 1;
                        if g.coeffs[k] < w.size() {
                            break;
                        }
                        g.coeffs[k] = 0;
                        k += 1;
                    }
                    if k == len {
                        break;
                    }
                }
            }
        }
    }
    Ok(IntegralityVerdict::GeometricallyIntegral)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldDesc {
        FieldDesc::new(2, 1).unwrap()
    }

    fn poly(t: &str, n: usize) -> HomogPoly {
        HomogPoly::parse(t, &f2(), n).unwrap()
    }

    #[test]
    fn covering_sets_divide_everything() {
        assert_eq!(covering_degrees(9), vec![1, 2, 3, 5, 6, 7, 8, 9]);
        assert_eq!(covering_degrees(6), vec![1, 2, 3, 4, 5, 6]);
        for b in 1..40 {
            let cover = covering_degrees(b);
            for k in 1..=b {
                assert!(cover.iter().any(|e| e % k == 0), "{k} in cover of {b}");
            }
        }
    }

    #[test]
    fn singular_points_examples() {
        let p2 = SubschemeSpec::projective_space(&f2(), 2);
        assert!(singular_points(&poly("x0^3+x1^3+x2^3", 2), &p2, 4).unwrap().is_empty());
        let pts: Vec<String> = singular_points(&poly("x0^2*x1", 2), &p2, 1)
            .unwrap()
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert!(pts.contains(&"(0:0:1)".to_string()) && pts.contains(&"(0:1:0)".to_string()));
        let node: Vec<String> = singular_points(&poly("x1*x2", 2), &p2, 1)
            .unwrap()
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(node, vec!["(1:0:0)"]);
    }

    #[test]
    fn verdict_examples() {
        let p2 = SubschemeSpec::projective_space(&f2(), 2);
        assert_eq!(
            is_smooth_intersection(&poly("x0^3+x1^3+x2^3", 2), &p2, None).unwrap(),
            SmoothnessVerdict::Smooth {
                checked_bound: 6,
                exact: true
            }
        );
        let a1 = SubschemeSpec::affine_space(&f2(), 1);
        assert!(is_smooth_intersection(&poly("x0^4", 1), &a1, None).unwrap().is_smooth());
        assert_eq!(
            is_smooth_intersection(&HomogPoly::zero(&f2(), 2, 3), &p2, None).unwrap(),
            SmoothnessVerdict::IsWholeSpace
        );
        match is_smooth_intersection(&poly("x1*x2", 2), &p2, None).unwrap() {
            SmoothnessVerdict::SingularAt(c) => assert_eq!(c.to_string(), "(1:0:0)"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn least_degree_witness_is_found_behind_the_cover() {
        let p2 = SubschemeSpec::projective_space(&f2(), 2);
        match is_smooth_intersection(&poly("x0^2+x0*x1+x1^2", 2), &p2, Some(9)).unwrap() {
            SmoothnessVerdict::SingularAt(c) => assert_eq!(c.to_string(), "(0:0:1)"),
            other => panic!("{other:?}"),
        }
        // In characteristic 2 the square of t^4+t+1 is singular exactly at
        // its degree-4 root, which the cover {1,2,3,5,6,7,8} only meets at 8.
        let p1 = SubschemeSpec::projective_space(&f2(), 1);
        let f = poly("x0^8+x0^2*x1^6+x1^8", 1);
        assert_eq!(plan(&p1, 8, None).unwrap().degrees, vec![1, 2, 3, 5, 6, 7, 8]);
        match is_smooth_intersection(&f, &p1, None).unwrap() {
            SmoothnessVerdict::SingularAt(c) => {
                assert_eq!(c.degree(), 4);
                assert_eq!(c.rep().field().e(), 4);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classifier_examples() {
        let p2 = SubschemeSpec::projective_space(&f2(), 2);
        let at = ClosedPoint::parse("(1:0:0)", &f2(), 1).unwrap();
        assert_eq!(
            classify_singularity(&poly("x1*x2", 2), &p2, &at).unwrap(),
            SingularityClass::Node
        );
        assert_eq!(
            classify_singularity(&poly("x0*x1^2+x2^3", 2), &p2, &at).unwrap(),
            SingularityClass::NonNode {
                degenerate_quadratic_part: true
            }
        );
        assert_eq!(
            classify_singularity(&poly("x0*x1^2+x0*x1*x2+x0*x2^2", 2), &p2, &at).unwrap(),
            SingularityClass::Node
        );
        assert_eq!(
            classify_singularity(&poly("x1^3+x2^3", 2), &p2, &at).unwrap(),
            SingularityClass::NonNode {
                degenerate_quadratic_part: false
            }
        );
        let smooth_pt = ClosedPoint::parse("(0:0:1)", &f2(), 1).unwrap();
        assert_eq!(
            classify_singularity(&poly("x1*x2", 2), &p2, &smooth_pt),
            Err(Error::NotSingularHere)
        );
        let a2 = SubschemeSpec::affine_space(&f2(), 2);
        assert!(matches!(
            classify_singularity(&poly("x1*x2", 2), &a2, &at),
            Err(Error::UnsupportedX(_))
        ));
        // Odd characteristic uses the discriminant.
        let f3 = FieldDesc::new(3, 1).unwrap();
        let p2_3 = SubschemeSpec::projective_space(&f3, 2);
        let at3 = ClosedPoint::parse("(1:0:0)", &f3, 1).unwrap();
        let node = HomogPoly::parse("x0*x1^2 - x0*x2^2 + x1^3", &f3, 2).unwrap();
        assert_eq!(classify_singularity(&node, &p2_3, &at3).unwrap(), SingularityClass::Node);
        let cusp = HomogPoly::parse("x0*x1^2 + x2^3", &f3, 2).unwrap();
        assert!(matches!(
            classify_singularity(&cusp, &p2_3, &at3).unwrap(),
            SingularityClass::NonNode { .. }
        ));
    }

    #[test]
    fn positive_dimensional_loci() {
        let p2 = SubschemeSpec::projective_space(&f2(), 2);
        assert_eq!(
            positive_dim_singular_locus(&poly("x0^2*x1", 2), &p2, 3).unwrap(),
            SingularLocus::PositiveDim {
                witness_e: 3,
                count: 9,
                cap: 6
            }
        );
        assert_eq!(
            positive_dim_singular_locus(&poly("x1*x2", 2), &p2, 4).unwrap(),
            SingularLocus::FiniteUpTo(4)
        );
        assert_eq!(
            positive_dim_singular_locus(&poly("x0^3+x1^3+x2^3", 2), &p2, 3).unwrap(),
            SingularLocus::FiniteUpTo(3)
        );
    }

    #[test]
    fn integrality_examples() {
        match geometrically_integral(&poly("x1*x2", 2), 1000).unwrap() {
            IntegralityVerdict::ReducibleOver { e, factor_degrees, .. } => {
                assert_eq!((e, factor_degrees), (1, vec![1, 1]))
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            geometrically_integral(&poly("x0^2+x1*x2", 2), 1000).unwrap(),
            IntegralityVerdict::GeometricallyIntegral
        );
        match geometrically_integral(&poly("x0^2+x0*x1+x1^2", 1), 1000).unwrap() {
            IntegralityVerdict::ReducibleOver { e, factor_degrees, .. } => {
                assert_eq!((e, factor_degrees), (2, vec![1, 1]))
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            geometrically_integral(&poly("x0^2+x1*x2", 2), 3).unwrap(),
            IntegralityVerdict::Unknown { .. }
        ));
    }

    #[test]
    fn nodal_curves() {
        assert!(at_worst_nodes(&poly("x1*x2", 2), None).unwrap());
        assert!(at_worst_nodes(&poly("x0*x1^2+x0*x1*x2+x0*x2^2", 2), None).unwrap());
        assert!(at_worst_nodes(&poly("x0^3+x1^3+x2^3", 2), None).unwrap());
        assert!(!at_worst_nodes(&poly("x0*x1^2+x2^3", 2), None).unwrap());
        assert!(!at_worst_nodes(&poly("x0^2*x1", 2), None).unwrap());
        assert!(!at_worst_nodes(&HomogPoly::zero(&f2(), 2, 2), None).unwrap());
        assert!(at_worst_nodes(&poly("x0", 1), None).is_err());
    }
}
