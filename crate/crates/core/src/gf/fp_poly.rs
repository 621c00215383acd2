//! Dense polynomials over a prime field, stored low degree first.
//!
//! Only what modulus selection needs: reduction, products modulo a monic
//! polynomial, gcd and Rabin's irreducibility test.

pub(crate) fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn inv_mod(x: u32, p: u32) -> u32 {
    debug_assert!(!x.is_multiple_of(p));
    pow_mod(x as u64, (p - 2) as u64, p as u64) as u32
}

pub(crate) fn pow_mod(mut b: u64, mut k: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        k >>= 1;
    }
    acc
}

/// Remainder of `a` modulo a nonzero polynomial `m`.
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut m = m.to_vec();
    trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    let p64 = p as u64;
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] as u64 * lead_inv % p64;
        if c != 0 {
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = c * mi as u64 % p64;
                r[shift + i] = ((r[shift + i] as u64 + p64 - sub) % p64) as u32;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    rem(&mul(a, b, p), m, p)
}

fn pow_poly_mod(base: &[u32], mut k: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1];
    let mut b = rem(base, m, p);
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        k >>= 1;
    }
    acc
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let mut out: Vec<u32> = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `f` of degree k is irreducible iff x^(p^k) = x mod f and
/// gcd(x^(p^(k/r)) - x, f) = 1 for every prime r | k.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut frob = vec![rem(&x, f, p)];
    for _ in 0..k {
        let next = pow_poly_mod(frob.last().unwrap(), p as u64, f, p);
        frob.push(next);
    }
    if frob[k] != rem(&x, f, p) {
        return false;
    }
    prime_factors(k as u64).into_iter().all(|r| {
        let h = sub(&frob[k / r as usize], &x, p);
        gcd(&h, f, p).len() == 1
    })
}

/// The monic irreducible polynomial of degree `k` whose lower coefficients,
/// read as a base-p number with the constant term least significant, are
/// smallest.
pub(crate) fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    for c in 0..count {
        let mut f = Vec::with_capacity(k as usize + 1);
        let mut rest = c;
        for _ in 0..k {
            f.push((rest % p as u64) as u32);
            rest /= p as u64;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_irreducibles_over_f2() {
        // x^3+x+1 and x^3+x^2+1 are the only irreducible cubics over F_2.
        let irr: Vec<u32> = (0..8)
            .filter(|&c| is_irreducible(&[c & 1, (c >> 1) & 1, (c >> 2) & 1, 1], 2))
            .collect();
        assert_eq!(irr, vec![0b011, 0b101]);
        assert_eq!(smallest_irreducible(2, 3), vec![1, 1, 0, 1]);
    }

    #[test]
    fn counts_match_necklace_formula() {
        // Number of monic irreducibles of degree 4 over F_3 is (81 - 9)/4 = 18.
        let mut count = 0;
        for c in 0..81u32 {
            let f = [c % 3, (c / 3) % 3, (c / 9) % 3, (c / 27) % 3, 1];
            if is_irreducible(&f, 3) {
                count += 1;
            }
        }
        assert_eq!(count, 18);
    }
}
