//! Inverse zeta values ζ_X(s)^{-1} as exact rationals.
//!
//! Truncations multiply (1 − q^{-se})^{a_e} over closed-point degrees e < r;
//! the factors are (q^{se} − 1)/q^{se}, so every partial product is already
//! in lowest terms.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::{self, Named, SubschemeSpec};
use crate::sieve::JetScheme;

#[derive(Clone, Debug, PartialEq)]
pub struct ZetaApprox {
    pub s: u32,
    pub r: u32,
    pub value: BigRational,
    pub float: f64,
    /// a_e for e = 1..r−1.
    pub terms: Vec<u64>,
    /// Largest relative change over the last two increments of r.
    pub stabilization: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    ClosedForm,
    Truncated { r: u32, stabilization: Option<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityPrediction {
    pub value: BigRational,
    pub float: f64,
    pub provenance: Provenance,
    pub jet_factor: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailReport {
    /// Truncations for r = 2..=r_max.
    pub approximations: Vec<ZetaApprox>,
    /// v_{r−1} − v_r for consecutive truncations.
    pub deltas: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SquarefreeReport {
    pub limit: u64,
    pub count: u64,
    pub fraction: Ratio<u64>,
    pub float: f64,
    pub target: f64,
    pub abs_error: f64,
}

pub fn to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let (n, d) = (x.numer().magnitude(), x.denom().magnitude());
    // An integer quotient with about 64 significant bits, then rescaled.
    let k = 64 + d.bits() as i64 - n.bits() as i64;
    let quotient = if k >= 0 {
        (n << k as usize) / d
    } else {
        n / (d << (-k) as usize)
    };
    let mut v = quotient.to_f64().expect("finite");
    let mut k = k;
    while k != 0 {
        let step = k.clamp(-1000, 1000);
        v *= 2f64.powi(-step as i32);
        k -= step;
    }
    if x.is_negative() {
        -v
    } else {
        v
    }
}

fn big(q: u64) -> BigUint {
    BigUint::from(q)
}

/// ∏_e ((q^{se} − 1)/q^{se})^{a_e} over the given exponents.
fn euler_product(q: u64, s: u32, terms: &[u64]) -> BigRational {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (i, &a) in terms.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let e = i as u32 + 1;
        let qse = big(q).pow(s * e);
        num *= (&qse - 1u32).pow(a as u32);
        den *= qse.pow(a as u32);
    }
    BigRational::new_raw(num.into(), den.into())
}

fn euler_log(q: u64, s: u32, terms: &[u64]) -> f64 {
    terms
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let x = (q as f64).powf(-((s * (i as u32 + 1)) as f64));
            a as f64 * (-x).ln_1p()
        })
        .sum()
}

fn check_convergence(x: &SubschemeSpec, s: u32) -> Result<()> {
    if s == 0 || (s as usize) <= x.m() {
        return Err(Error::Divergent { s, dim: x.m() });
    }
    Ok(())
}

/// Closed-point counts a_1..a_k of X.
pub fn closed_point_counts(x: &SubschemeSpec, k: u32) -> Result<Vec<u64>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    geometry::closed_counts(&geometry::count_sequence(x, k)?)
}

fn approx_from_terms(q: u64, s: u32, r: u32, terms: &[u64]) -> ZetaApprox {
    let at = |k: u32| euler_log(q, s, &terms[..(k as usize - 1)]).exp();
    let stabilization = (r >= 3).then(|| {
        let (v0, v1, v2) = (at(r - 2), at(r - 1), at(r));
        ((v1 - v2).abs() / v1).max((v0 - v1).abs() / v0)
    });
    let value = euler_product(q, s, &terms[..r as usize - 1]);
    ZetaApprox {
        s,
        r,
        float: euler_log(q, s, &terms[..r as usize - 1]).exp(),
        value,
        terms: terms[..r as usize - 1].to_vec(),
        stabilization,
    }
}

/// ∏_{e<r} (1 − q^{-se})^{a_e}.
pub fn zeta_inv_truncated(x: &SubschemeSpec, s: u32, r: u32) -> Result<ZetaApprox> {
    check_convergence(x, s)?;
    if r == 0 {
        return Err(Error::InvalidInput("truncation degree must be at least 1".into()));
    }
    let terms = closed_point_counts(x, r - 1)?;
    Ok(approx_from_terms(x.field().q(), s, r, &terms))
}

/// ζ_{P^n}(s)^{-1} = ∏_{i=0}^{n}(1 − q^{i−s}) and ζ_{A^n}(s)^{-1} = 1 − q^{n−s}.
pub fn zeta_inv_closed_form(space: Named, n: usize, q: u64, s: u32) -> Result<BigRational> {
    if (s as usize) <= n {
        return Err(Error::Divergent { s, dim: n });
    }
    let factor = |i: usize| {
        let k = s - i as u32;
        let qk = BigInt::from(q).pow(k);
        BigRational::new(&qk - 1, qk)
    };
    Ok(match space {
        Named::Projective => (0..=n).map(factor).product(),
        Named::Affine => factor(n),
    })
}

/// ζ_X(m+1)^{-1}: closed form for P^n and A^n, otherwise truncated at r.
pub fn predict_density(x: &SubschemeSpec, r: u32) -> Result<DensityPrediction> {
    let s = x.m() as u32 + 1;
    if let Some(kind) = x.named() {
        let value = zeta_inv_closed_form(kind, x.n(), x.field().q(), s)?;
        return Ok(DensityPrediction {
            float: to_f64(&value),
            value,
            provenance: Provenance::ClosedForm,
            jet_factor: None,
        });
    }
    let z = zeta_inv_truncated(x, s, r)?;
    Ok(DensityPrediction {
        value: z.value,
        float: z.float,
        provenance: Provenance::Truncated {
            r,
            stabilization: z.stabilization,
        },
        jet_factor: None,
    })
}

/// (#T/#H^0(Z,O_Z))·ζ_U(m+1)^{-1} with U = X minus the points of Z.
pub fn predict_density_with_jets(
    x: &SubschemeSpec,
    z: &JetScheme,
    t_size: &BigUint,
    h0_size: &BigUint,
    r: u32,
) -> Result<DensityPrediction> {
    if t_size.is_zero() {
        return Err(Error::EmptyT);
    }
    if t_size > h0_size {
        return Err(Error::InvalidInput("#T exceeds #H^0(Z, O_Z)".into()));
    }
    let base = predict_density(x, r)?;
    let s = x.m() as u32 + 1;
    let q = x.field().q();
    // Removing a closed point P of X divides ζ_X(s)^{-1} by (1 − q^{-s·deg P}).
    let mut removed = BigRational::one();
    for jp in z.points() {
        let w = jp.point.field();
        if x.contains(w, jp.point.rep().coords())? {
            let qk = BigInt::from(q).pow(s * jp.point.degree());
            removed *= BigRational::new(&qk - 1, qk);
        }
    }
    let jet_factor = BigRational::new(t_size.clone().into(), h0_size.clone().into());
    let value = &base.value / &removed * &jet_factor;
    Ok(DensityPrediction {
        float: to_f64(&value),
        value,
        provenance: base.provenance,
        jet_factor: Some(jet_factor),
    })
}

pub fn tail_report(x: &SubschemeSpec, s: u32, r_max: u32) -> Result<TailReport> {
    check_convergence(x, s)?;
    if r_max < 2 {
        return Err(Error::InvalidInput("r_max must be at least 2".into()));
    }
    let terms = closed_point_counts(x, r_max - 1)?;
    let q = x.field().q();
    let approximations: Vec<ZetaApprox> =
        (2..=r_max).map(|r| approx_from_terms(q, s, r, &terms)).collect();
    let deltas = approximations
        .windows(2)
        .map(|w| w[0].float - w[1].float)
        .collect();
    Ok(TailReport {
        approximations,
        deltas,
    })
}

/// Fraction of squarefree integers in [1, limit], against 6/π².
pub fn squarefree_integer_density(limit: u64) -> Result<SquarefreeReport> {
    if limit == 0 {
        return Err(Error::InvalidInput("limit must be positive".into()));
    }
    let len = usize::try_from(limit).map_err(|_| Error::Overflow("limit too large".into()))?;
    let mut squarefree = vec![true; len + 1];
    let mut k = 2usize;
    while k * k <= len {
        let sq = k * k;
        for m in (sq..=len).step_by(sq) {
            squarefree[m] = false;
        }
        k += 1;
    }
    let count = squarefree[1..].iter().filter(|&&b| b).count() as u64;
    let fraction = Ratio::new(count, limit);
    let float = count as f64 / limit as f64;
    let target = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    Ok(SquarefreeReport {
        limit,
        count,
        fraction,
        float,
        target,
        abs_error: (float - target).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldDesc;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p(n: usize) -> SubschemeSpec {
        SubschemeSpec::projective_space(&FieldDesc::new(2, 1).unwrap(), n)
    }

    #[test]
    fn truncations_for_the_projective_plane() {
        let x = p(2);
        // Plain f64 products of the same factors.
        let expect = [
            0.875f64.powi(7),
            0.875f64.powi(7) * (63.0f64 / 64.0).powi(7),
            0.875f64.powi(7) * (63.0f64 / 64.0).powi(7) * (511.0f64 / 512.0).powi(22),
        ];
        for (r, want) in (2..=4).zip(expect) {
            let z = zeta_inv_truncated(&x, 3, r).unwrap();
            assert!((z.float - want).abs() < 1e-12, "r={r}: {}", z.float);
            assert!((to_f64(&z.value) - z.float).abs() < 1e-12);
        }
        let r2 = zeta_inv_truncated(&x, 3, 2).unwrap();
        assert_eq!(r2.value, rat(7, 8).pow(7));
        let r4 = zeta_inv_truncated(&x, 3, 4).unwrap();
        assert_eq!(r4.terms, vec![7, 7, 22]);
        assert_eq!(
            r4.value,
            rat(7, 8).pow(7) * rat(63, 64).pow(7) * rat(511, 512).pow(22)
        );
        assert_eq!(zeta_inv_truncated(&x, 3, 1).unwrap().value, BigRational::one());
        assert_eq!(
            zeta_inv_truncated(&x, 2, 3),
            Err(Error::Divergent { s: 2, dim: 2 })
        );
    }

    #[test]
    fn projective_line_approaches_three_eighths() {
        let z = zeta_inv_truncated(&p(1), 2, 12).unwrap();
        assert!((z.float - 0.375).abs() < 1e-3);
        assert!(z.float >= 0.375);
    }

    #[test]
    fn closed_forms() {
        let q = 2;
        assert_eq!(zeta_inv_closed_form(Named::Projective, 2, q, 3).unwrap(), rat(21, 64));
        assert_eq!(zeta_inv_closed_form(Named::Projective, 2, q, 4).unwrap(), rat(315, 512));
        assert_eq!(zeta_inv_closed_form(Named::Affine, 1, 5, 2).unwrap(), rat(4, 5));
        assert!(zeta_inv_closed_form(Named::Projective, 2, q, 2).is_err());
        assert_eq!(predict_density(&p(2), 2).unwrap().value, rat(21, 64));
        assert_eq!(predict_density(&p(1), 2).unwrap().value, rat(3, 8));
        let a1 = SubschemeSpec::affine_space(&FieldDesc::new(2, 1).unwrap(), 1);
        assert_eq!(predict_density(&a1, 2).unwrap().value, rat(1, 2));
    }

    #[test]
    fn tail_report_is_monotone_and_geometric() {
        let t = tail_report(&p(2), 3, 4).unwrap();
        let values: Vec<f64> = t.approximations.iter().map(|a| a.float).collect();
        assert_eq!(values.len(), 3);
        assert!(values.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(t.deltas.len(), 2);
        let ratio = t.deltas[1] / t.deltas[0];
        assert!(ratio > 0.5 / 4.0 && ratio < 0.5 * 4.0, "{ratio}");
        let single = tail_report(&p(2), 3, 2).unwrap();
        assert_eq!(single.approximations.len(), 1);
        assert!(single.deltas.is_empty());
    }

    #[test]
    fn squarefree_demo() {
        let r = squarefree_integer_density(10).unwrap();
        assert_eq!(r.fraction, Ratio::new(7, 10));
        assert_eq!(squarefree_integer_density(1).unwrap().fraction, Ratio::new(1, 1));
        let big = squarefree_integer_density(1_000_000).unwrap();
        assert!(big.abs_error < 1e-3);
    }

    #[test]
    fn float_view_of_huge_rationals() {
        let x = rat(1, 3) * BigRational::from_integer(BigInt::from(2).pow(3000))
            / BigRational::from_integer(BigInt::from(2).pow(3000));
        assert!((to_f64(&x) - 1.0 / 3.0).abs() < 1e-15);
        let tiny = BigRational::new(BigInt::one(), BigInt::from(2).pow(100));
        assert!((to_f64(&tiny) - 2f64.powi(-100)).abs() < 1e-40);
        let p = BigInt::from(3).pow(5000);
        let near_one = BigRational::new(&p - 1, p.clone());
        assert_eq!(to_f64(&near_one), 1.0);
        let third = BigRational::new(p.clone(), &p * 3);
        assert!((to_f64(&-third) + 1.0 / 3.0).abs() < 1e-15);
        let huge = BigRational::new(p.clone(), BigInt::from(7));
        assert_eq!(to_f64(&huge), f64::INFINITY);
    }
}
