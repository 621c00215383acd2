//! Enumeration of P^n over a working field.
//!
//! Points are normalized (first nonzero coordinate equal to 1) and visited in
//! lexicographic order of their coordinate codes: the chart of x_n first, then
//! x_{n-1}, down to x_0, with x_{j+1} the most significant free coordinate.
//! Zeros of a form are found by substituting the free coordinates one at a
//! time into a dense coefficient box and finishing each line with Horner's
//! rule in the last variable.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::gf::WorkingField;
use crate::mpoly::HomogPoly;

/// Points of P^n scanned in one pass are capped at this many.
pub const SCAN_LIMIT: u64 = 1 << 28;

/// #P^n(F_Q) = Q^n + ... + Q + 1, or `None` on overflow.
pub fn projective_count(big_q: u64, n: usize) -> Option<u64> {
    let mut total: u64 = 1;
    let mut power: u64 = 1;
    for _ in 0..n {
        power = power.checked_mul(big_q)?;
        total = total.checked_add(power)?;
    }
    Some(total)
}

pub(crate) fn check_scan_size(w: &WorkingField, n: usize) -> Result<u64> {
    match projective_count(w.size() as u64, n) {
        Some(c) if c <= SCAN_LIMIT => Ok(c),
        _ => Err(Error::Overflow(format!(
            "P^{n} over a field of {} elements has more than {SCAN_LIMIT} points",
            w.size()
        ))),
    }
}

/// Calls `visit` on every normalized point of P^n(w) in canonical order.
pub fn for_each_point<T>(
    w: &WorkingField,
    n: usize,
    mut visit: impl FnMut(&[u32]) -> ControlFlow<T>,
) -> Result<Option<T>> {
    check_scan_size(w, n)?;
    let size = w.size();
    let mut coords = vec![0u32; n + 1];
    for j in (0..=n).rev() {
        coords.iter_mut().for_each(|c| *c = 0);
        coords[j] = 1;
        loop {
            if let ControlFlow::Break(t) = visit(&coords) {
                return Ok(Some(t));
            }
            // Odometer on x_{j+1}..x_n with x_n fastest.
            let mut i = n;
            loop {
                if i == j {
                    break;
                }
                coords[i] += 1;
                if coords[i] < size {
                    break;
                }
                coords[i] = 0;
                i -= 1;
            }
            if i == j {
                break;
            }
        }
    }
    Ok(None)
}

/// Calls `visit` on every normalized zero of `f` in P^n(w), in canonical order.
pub fn for_each_zero<T>(
    f: &HomogPoly,
    w: &WorkingField,
    mut visit: impl FnMut(&[u32]) -> ControlFlow<T>,
) -> Result<Option<T>> {
    if w.base() != f.field() {
        return Err(Error::FieldMismatch);
    }
    let n = f.n();
    check_scan_size(w, n)?;
    let d = f.degree() as usize;
    let side = d + 1;
    let table = f.table();
    let mut coords = vec![0u32; n + 1];
    for j in (0..=n).rev() {
        let k = n - j;
        // Coefficient box indexed by Σ_t e_{j+1+t}·side^t.
        let mut boxed = vec![0u32; side.pow(k as u32)];
        for (idx, &c) in f.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let e = table.exps(idx);
            if e[..j].iter().any(|&a| a != 0) {
                continue;
            }
            let pos = (0..k).rev().fold(0, |acc, t| acc * side + e[j + 1 + t] as usize);
            boxed[pos] = w.embed(c);
        }
        coords.iter_mut().for_each(|c| *c = 0);
        coords[j] = 1;
        if k == 0 {
            if boxed[0] == 0 {
                if let ControlFlow::Break(t) = visit(&coords) {
                    return Ok(Some(t));
                }
            }
            continue;
        }
        let mut scratch: Vec<Vec<u32>> = (1..k).map(|t| vec![0; side.pow((k - t) as u32)]).collect();
        if let ControlFlow::Break(t) =
            substitute(w, side, &boxed, j + 1, n, &mut coords, &mut scratch, &mut visit)
        {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn substitute<T>(
    w: &WorkingField,
    side: usize,
    boxed: &[u32],
    var: usize,
    n: usize,
    coords: &mut [u32],
    scratch: &mut [Vec<u32>],
    visit: &mut impl FnMut(&[u32]) -> ControlFlow<T>,
) -> ControlFlow<T> {
    let size = w.size();
    if var == n {
        for v in 0..size {
            let value = boxed.iter().rev().fold(0, |acc, &c| w.add(w.mul(acc, v), c));
            if value == 0 {
                coords[n] = v;
                visit(coords)?;
            }
        }
        coords[n] = 0;
        return ControlFlow::Continue(());
    }
    let (head, rest) = scratch.split_first_mut().expect("one buffer per level");
    for v in 0..size {
        coords[var] = v;
        for (c, slot) in head.iter_mut().enumerate() {
            let line = &boxed[c * side..(c + 1) * side];
            *slot = line.iter().rev().fold(0, |acc, &x| w.add(w.mul(acc, v), x));
        }
        substitute(w, side, head, var + 1, n, coords, rest, visit)?;
    }
    coords[var] = 0;
    ControlFlow::Continue(())
}
