//! Exact arithmetic in F_p, F_q = F_{p^a} and working extensions F_{q^e}.
//!
//! Elements are `u32` codes: the coefficient vector over F_p of the residue
//! modulo the field's modulus, read as a base-p number with the constant term
//! as the least significant digit. Code order is the canonical enumeration
//! order, so `0` and `1` are always the first two elements.
//!
//! A [`FieldDesc`] fixes F_q. [`FieldDesc::extend`] builds (and caches) a
//! [`WorkingField`] F_{q^e} together with an explicit embedding of F_q.

pub(crate) mod fp_poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Default cap on working-field size, in bits of the element count.
pub const DEFAULT_MAX_FIELD_BITS: u32 = 20;
/// Environment variable overriding [`DEFAULT_MAX_FIELD_BITS`].
pub const MAX_FIELD_BITS_ENV: &str = "BERTINI_MAX_FIELD_BITS";
const HARD_MAX_FIELD_BITS: u32 = 30;
const TABLE_MAX_SIZE: u64 = 1 << 16;

/// The field-size guard in effect for this process.
pub fn max_field_bits() -> u32 {
    static BITS: OnceLock<u32> = OnceLock::new();
    *BITS.get_or_init(|| {
        std::env::var(MAX_FIELD_BITS_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_FIELD_BITS)
            .min(HARD_MAX_FIELD_BITS)
    })
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|f| f * f <= p).all(|f| !p.is_multiple_of(f))
}

/// Description of F_q = F_p[t]/(modulus).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    p: u32,
    a: u32,
    modulus: Vec<u32>,
}

impl FieldDesc {
    pub fn new(p: u64, a: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a == 0 {
            return Err(Error::DegreeZero);
        }
        let bits = (p as f64).log2() * a as f64;
        if bits > max_field_bits() as f64 + 1e-9 {
            return Err(Error::Overflow(format!(
                "F_{{{p}^{a}}} exceeds the {}-bit field limit",
                max_field_bits()
            )));
        }
        let p = p as u32;
        Ok(FieldDesc {
            p,
            a,
            modulus: fp_poly::smallest_irreducible(p, a),
        })
    }

    /// F_q from the field size q = p^a.
    pub fn from_order(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidInput(format!("{q} is not a field size")));
        }
        let p = fp_poly::prime_factors(q)[0];
        let mut a = 0;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            a += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidInput(format!("{q} is not a prime power")));
        }
        FieldDesc::new(p, a)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.a)
    }

    /// Monic modulus over F_p, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// F_q itself as a working field (e = 1, identity embedding).
    pub fn arith(&self) -> Arc<WorkingField> {
        self.extend(1).expect("F_q passed the size check in FieldDesc::new")
    }

    pub fn extend(&self, e: u32) -> Result<Arc<WorkingField>> {
        self.extend_with_limit(e, max_field_bits())
    }

    pub fn extend_with_limit(&self, e: u32, max_bits: u32) -> Result<Arc<WorkingField>> {
        if e == 0 {
            return Err(Error::DegreeZero);
        }
        let degree = self.a as u64 * e as u64;
        let bits = (self.p as f64).log2() * degree as f64;
        if bits > max_bits.min(HARD_MAX_FIELD_BITS) as f64 + 1e-9 {
            return Err(Error::Overflow(format!(
                "F_{{{}^{}}} has more than 2^{} elements",
                self.q(),
                e,
                max_bits
            )));
        }
        static CACHE: OnceLock<Mutex<HashMap<(u32, u32, u32), Arc<WorkingField>>>> =
            OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let key = (self.p, self.a, e);
        if let Some(w) = cache.lock().unwrap().get(&key) {
            return Ok(w.clone());
        }
        let w = Arc::new(WorkingField::build(self.clone(), e));
        Ok(cache.lock().unwrap().entry(key).or_insert(w).clone())
    }

    pub fn format_elem(&self, code: u32) -> String {
        format_digits(code, self.p, self.a)
    }

    pub fn parse_elem(&self, text: &str) -> Result<u32> {
        parse_digits(text, self.p, self.a)
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())
    }
}

enum Multiplier {
    /// log/exp tables over a primitive element; `exp` has length 2(size-1).
    Table { log: Vec<u32>, exp: Vec<u32> },
    /// Carry-less products reduced by the modulus bit pattern (p = 2).
    Binary { modulus: u64 },
    /// Schoolbook products on digit vectors.
    Generic,
}

/// The working field F_{q^e} with a fixed embedding of F_q.
pub struct WorkingField {
    base: FieldDesc,
    e: u32,
    degree: u32,
    size: u32,
    modulus: Vec<u32>,
    embed_image: u32,
    embed: Vec<u32>,
    mul: Multiplier,
}

impl fmt::Debug for WorkingField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WorkingField")
            .field("q", &self.base.q())
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .field("embed_image", &self.embed_image)
            .finish()
    }
}

impl PartialEq for WorkingField {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.e == other.e
    }
}

impl Eq for WorkingField {}

impl WorkingField {
    fn build(base: FieldDesc, e: u32) -> Self {
        let p = base.p;
        let degree = base.a * e;
        let size = p.pow(degree);
        let modulus = if e == 1 {
            base.modulus.clone()
        } else {
            fp_poly::smallest_irreducible(p, degree)
        };
        let mul = if p == 2 {
            let bits = modulus
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | ((c as u64) << i));
            Multiplier::Binary { modulus: bits }
        } else {
            Multiplier::Generic
        };
        let mut w = WorkingField {
            base,
            e,
            degree,
            size,
            modulus,
            embed_image: 0,
            embed: Vec::new(),
            mul,
        };
        if (size as u64) <= TABLE_MAX_SIZE && size > 2 {
            w.mul = w.build_tables();
        }
        w.embed_image = (0..size)
            .find(|&x| w.eval_fp_poly(&w.base.modulus, x) == 0)
            .expect("F_q embeds in every extension");
        let q = w.base.q() as u32;
        let a = w.base.a;
        w.embed = (0..q)
            .map(|c| {
                let digits = to_digits(c, p, a);
                let mut acc = 0;
                let mut power = 1;
                for d in digits {
                    acc = w.add(acc, w.mul(w.from_fp(d), power));
                    power = w.mul(power, w.embed_image);
                }
                acc
            })
            .collect();
        w
    }

    fn build_tables(&self) -> Multiplier {
        let order = self.size - 1;
        let factors = fp_poly::prime_factors(order as u64);
        let generator = (2..self.size)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.pow_generic(g, order as u64 / r) != 1)
            })
            .unwrap_or(1);
        let mut log = vec![0u32; self.size as usize];
        let mut exp = vec![0u32; 2 * order as usize];
        let mut x = 1;
        for i in 0..order {
            exp[i as usize] = x;
            exp[(i + order) as usize] = x;
            log[x as usize] = i;
            x = self.mul_slow(x, generator);
        }
        Multiplier::Table { log, exp }
    }

    fn eval_fp_poly(&self, coeffs: &[u32], x: u32) -> u32 {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), self.from_fp(c)))
    }

    pub fn base(&self) -> &FieldDesc {
        &self.base
    }

    pub fn p(&self) -> u32 {
        self.base.p
    }

    /// Extension degree over F_q.
    pub fn e(&self) -> u32 {
        self.e
    }

    /// Extension degree over F_p.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Image of the generator of F_q.
    pub fn embed_image(&self) -> u32 {
        self.embed_image
    }

    /// Embeds an F_q element (a code of the base field) into this field.
    #[inline]
    pub fn embed(&self, c: u32) -> u32 {
        self.embed[c as usize]
    }

    /// The prime-field element `k mod p`.
    #[inline]
    pub fn from_fp(&self, k: u32) -> u32 {
        k % self.base.p
    }

    pub fn from_int(&self, k: i64) -> u32 {
        k.rem_euclid(self.base.p as i64) as u32
    }

    /// Pulls an element of the embedded copy of F_q back to its base code.
    pub fn unembed(&self, x: u32) -> Option<u32> {
        self.embed.iter().position(|&y| y == x).map(|c| c as u32)
    }

    pub fn digits(&self, x: u32) -> Vec<u32> {
        to_digits(x, self.base.p, self.degree)
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        from_digits(digits, self.base.p)
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        let p = self.base.p;
        if p == 2 {
            return x ^ y;
        }
        let (mut x, mut y) = (x, y);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            let s = (x % p + y % p) % p;
            out += s * place;
            place *= p;
            x /= p;
            y /= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        let p = self.base.p;
        if p == 2 {
            return x;
        }
        let mut x = x;
        let mut out = 0;
        let mut place = 1;
        while x > 0 {
            out += ((p - x % p) % p) * place;
            place *= p;
            x /= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        match &self.mul {
            Multiplier::Table { log, exp } => {
                if x == 0 || y == 0 {
                    0
                } else {
                    exp[(log[x as usize] + log[y as usize]) as usize]
                }
            }
            _ => self.mul_slow(x, y),
        }
    }

    fn mul_slow(&self, x: u32, y: u32) -> u32 {
        match self.mul {
            Multiplier::Binary { modulus } => {
                let mut prod = 0u64;
                let (x, mut y) = (x as u64, y as u64);
                let mut shift = 0;
                while y > 0 {
                    if y & 1 == 1 {
                        prod ^= x << shift;
                    }
                    y >>= 1;
                    shift += 1;
                }
                let deg = self.degree as u64;
                for bit in (deg..64).rev() {
                    if prod >> bit & 1 == 1 {
                        prod ^= modulus << (bit - deg);
                    }
                }
                prod as u32
            }
            _ => {
                let p = self.base.p;
                let a = to_digits(x, p, self.degree);
                let b = to_digits(y, p, self.degree);
                let r = fp_poly::mul_mod(&a, &b, &self.modulus, p);
                from_digits(&r, p)
            }
        }
    }

    pub fn pow(&self, x: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        match &self.mul {
            Multiplier::Table { log, exp } => {
                let order = (self.size - 1) as u64;
                exp[((log[x as usize] as u64 * (k % order)) % order) as usize]
            }
            _ => self.pow_generic(x, k),
        }
    }

    fn pow_generic(&self, x: u32, mut k: u64) -> u32 {
        let mut acc = 1;
        let mut b = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_slow(acc, b);
            }
            b = self.mul_slow(b, b);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: u32) -> Result<u32> {
        if x == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.mul {
            Multiplier::Table { log, exp } => {
                let order = self.size - 1;
                exp[((order - log[x as usize]) % order) as usize]
            }
            _ => self.pow_generic(x, self.size as u64 - 2),
        })
    }

    /// x ↦ x^q.
    #[inline]
    pub fn frobenius(&self, x: u32) -> u32 {
        self.pow(x, self.q())
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.size
    }

    pub fn format(&self, x: u32) -> String {
        format_digits(x, self.base.p, self.degree)
    }

    pub fn parse(&self, text: &str) -> Result<u32> {
        parse_digits(text, self.base.p, self.degree)
    }

    pub fn elem(self: &Arc<Self>, code: u32) -> FieldElem {
        assert!(code < self.size, "code {code} outside the field");
        FieldElem {
            field: self.clone(),
            code,
        }
    }
}

pub(crate) fn to_digits(mut x: u32, p: u32, len: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(len as usize);
    for _ in 0..len {
        out.push(x % p);
        x /= p;
    }
    out
}

pub(crate) fn from_digits(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Renders a code as a polynomial in `g`, highest power first: `g^2+2*g+1`.
pub fn format_digits(x: u32, p: u32, len: u32) -> String {
    let digits = to_digits(x, p, len);
    let mut terms = Vec::new();
    for (i, &c) in digits.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "g".to_string(),
            (1, c) => format!("{c}*g"),
            (i, 1) => format!("g^{i}"),
            (i, c) => format!("{c}*g^{i}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

/// Parses the `g`-polynomial notation of [`format_digits`]. Integers are
/// reduced mod p; powers of `g` at or above `len` are rejected.
pub fn parse_digits(text: &str, p: u32, len: u32) -> Result<u32> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut digits = vec![0i64; len.max(1) as usize];
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let read_int = |pos: &mut usize| -> Option<u64> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        text[start..*pos].parse().ok()
    };
    let mut sign = 1i64;
    skip_ws(&mut pos);
    if pos < bytes.len() && bytes[pos] == b'-' {
        sign = -1;
        pos += 1;
    }
    loop {
        skip_ws(&mut pos);
        let mut coeff: i64 = 1;
        let mut have_coeff = false;
        if pos < bytes.len() && bytes[pos].is_ascii_digit() {
            let c = read_int(&mut pos).ok_or_else(|| Error::syntax(pos, "integer too large"))?;
            coeff = (c % p as u64) as i64;
            have_coeff = true;
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                skip_ws(&mut pos);
                if pos >= bytes.len() || bytes[pos] != b'g' {
                    return Err(Error::syntax(pos, "expected 'g'"));
                }
            }
        }
        let mut power = 0u64;
        if pos < bytes.len() && bytes[pos] == b'g' {
            pos += 1;
            power = 1;
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                skip_ws(&mut pos);
                power = read_int(&mut pos).ok_or_else(|| Error::syntax(pos, "expected exponent"))?;
            }
        } else if !have_coeff {
            return Err(Error::syntax(pos, "expected an integer or 'g'"));
        }
        if power >= len.max(1) as u64 {
            return Err(Error::CoefficientNotInField(text.trim().to_string()));
        }
        digits[power as usize] += sign * coeff;
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        sign = match bytes[pos] {
            b'+' => 1,
            b'-' => -1,
            _ => return Err(Error::syntax(pos, "expected '+' or '-'")),
        };
        pos += 1;
    }
    let digits: Vec<u32> = digits
        .into_iter()
        .map(|d| d.rem_euclid(p as i64) as u32)
        .collect();
    Ok(from_digits(&digits, p))
}

/// A field element bundled with its field, for checked arithmetic.
#[derive(Clone)]
pub struct FieldElem {
    field: Arc<WorkingField>,
    code: u32,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.code))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.code))
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.code == other.code
    }
}

impl Eq for FieldElem {}

impl FieldElem {
    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn field(&self) -> &Arc<WorkingField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn same_field(&self, other: &FieldElem) -> Result<()> {
        if *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn with(&self, code: u32) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            code,
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.code, other.code)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.with(self.field.sub(self.code, other.code)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.code, other.code)))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(self.with(self.field.inv(self.code)?))
    }

    pub fn pow(&self, k: u64) -> FieldElem {
        self.with(self.field.pow(self.code, k))
    }

    pub fn frobenius(&self) -> FieldElem {
        self.with(self.field.frobenius(self.code))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, a: u32) -> FieldDesc {
        FieldDesc::new(p, a).unwrap()
    }

    #[test]
    fn field_make_examples() {
        assert_eq!(f(2, 1).modulus(), &[0, 1]);
        assert_eq!(f(2, 2).modulus(), &[1, 1, 1]);
        assert_eq!(f(3, 1).q(), 3);
        assert_eq!(FieldDesc::new(4, 1), Err(Error::NotPrime(4)));
        assert_eq!(FieldDesc::new(2, 0), Err(Error::DegreeZero));
        assert_eq!(f(5, 2), f(5, 2));
        assert_eq!(FieldDesc::from_order(9).unwrap(), f(3, 2));
        assert!(FieldDesc::from_order(12).is_err());
    }

    #[test]
    fn field_extend_examples() {
        let f8 = f(2, 1).extend(3).unwrap();
        assert_eq!(f8.modulus(), &[1, 1, 0, 1]);
        assert_eq!(f8.size(), 8);
        let f4 = f(2, 2).extend(1).unwrap();
        assert_eq!(f4.embed_image(), 2);
        assert_eq!((0..4).map(|c| f4.embed(c)).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        let f16 = f(2, 2).extend(2).unwrap();
        let t = f16.embed_image();
        assert_eq!(f16.add(f16.add(f16.mul(t, t), t), 1), 0);
        assert!(f(2, 1).extend_with_limit(21, 20).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = f(2, 1).arith();
        assert_eq!(f2.add(1, 1), 0);
        let f4 = f(2, 2).arith();
        let t = 2;
        assert_eq!(f4.mul(t, t), 3);
        assert_eq!(f4.inv(t).unwrap(), 3);
        assert_eq!(f4.frobenius(t), t);
        // As a working field over F_2 the q-power map is squaring.
        let f4_over_f2 = f(2, 1).extend(2).unwrap();
        assert_eq!(f4_over_f2.frobenius(t), 3);
        assert_eq!(f4_over_f2.frobenius(f4_over_f2.frobenius(t)), t);
        assert_eq!(f4.inv(0), Err(Error::DivisionByZero));
        assert_eq!(f4.elements().map(|x| f4.format(x)).collect::<Vec<_>>(), ["0", "1", "g", "g+1"]);
    }

    #[test]
    fn checked_elements_reject_mixed_fields() {
        let f4 = f(2, 2).arith();
        let f8 = f(2, 1).extend(3).unwrap();
        let x = f4.elem(2);
        let y = f8.elem(2);
        assert_eq!(x.mul(&y), Err(Error::FieldMismatch));
        assert_eq!(x.mul(&x).unwrap().code(), 3);
        assert_eq!(f4.elem(0).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn generic_and_table_paths_agree() {
        // F_2^17 uses carry-less multiplication; F_3^11 the digit-vector path.
        for w in [f(2, 1).extend(17).unwrap(), f(3, 1).extend(11).unwrap()] {
            let order = w.size() as u64 - 1;
            for x in [1u32, 2, 5, 1234, w.size() - 1] {
                assert_eq!(w.pow(x, order), 1);
                assert_eq!(w.mul(x, w.inv(x).unwrap()), 1);
            }
            let g = w.elements().nth(3).unwrap();
            assert_eq!(w.pow(g, w.q().pow(w.e())), g);
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_base_field() {
        for (p, a, e) in [(2, 1, 4), (2, 2, 2), (3, 1, 3), (3, 2, 2), (2, 3, 2)] {
            let base = f(p, a);
            let w = base.extend(e).unwrap();
            let fixed: Vec<u32> = w.elements().filter(|&x| w.frobenius(x) == x).collect();
            let mut embedded: Vec<u32> = (0..base.q() as u32).map(|c| w.embed(c)).collect();
            embedded.sort();
            assert_eq!(fixed, embedded, "p={p} a={a} e={e}");
            for x in w.elements() {
                assert_eq!(w.pow(x, base.q().pow(e)), x);
            }
        }
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        for (p, a, e) in [(2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 4, 1)] {
            let base = f(p, a);
            let fq = base.arith();
            let w = base.extend(e).unwrap();
            let q = base.q() as u32;
            let mut seen = std::collections::HashSet::new();
            for x in 0..q {
                assert!(seen.insert(w.embed(x)));
                for y in 0..q {
                    assert_eq!(w.embed(fq.add(x, y)), w.add(w.embed(x), w.embed(y)));
                    assert_eq!(w.embed(fq.mul(x, y)), w.mul(w.embed(x), w.embed(y)));
                }
            }
        }
    }

    #[test]
    fn inverses_exhaustive_up_to_2_16() {
        for (p, k) in [(2u64, 16u32), (3, 10), (5, 6), (7, 5)] {
            let w = f(p, 1).extend(k).unwrap();
            for x in 1..w.size() {
                assert_eq!(w.mul(x, w.inv(x).unwrap()), 1);
            }
        }
    }

    #[test]
    fn format_parse_roundtrip() {
        let w = f(3, 1).extend(3).unwrap();
        for x in w.elements() {
            assert_eq!(w.parse(&w.format(x)).unwrap(), x);
        }
        assert_eq!(w.format(w.parse("2*g^2 + g - 1").unwrap()), "2*g^2+g+2");
        assert!(matches!(w.parse("g^3"), Err(Error::CoefficientNotInField(_))));
        assert!(matches!(w.parse("g +"), Err(Error::Syntax { .. })));
    }
}
