//! Exact scalar arithmetic over the three supported coefficient fields:
//! the rationals, cyclotomic extensions Q(z_n), and prime fields F_p.
//!
//! Invariants:
//! - every value is kept in canonical form (reduced fraction, polynomial
//!   reduced mod the n-th cyclotomic polynomial with trailing zeros trimmed,
//!   residue in 0..p), so `==` is mathematical equality;
//! - mixing scalars from different fields is a programming error and panics;
//! - no floating point anywhere.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

/// Field descriptor. `Cyc(n)` is Q(z_n) with z_n a primitive n-th root of
/// unity; `Fp(p)` requires p prime (validated at construction sites).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldDesc {
    Q,
    Cyc(u32),
    Fp(u64),
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDesc::Q => write!(f, "Q"),
            FieldDesc::Cyc(n) => write!(f, "cyc:{}", n),
            FieldDesc::Fp(p) => write!(f, "Fp:{}", p),
        }
    }
}

impl FieldDesc {
    pub fn parse(s: &str) -> Option<FieldDesc> {
        if s == "Q" {
            return Some(FieldDesc::Q);
        }
        if let Some(n) = s.strip_prefix("cyc:") {
            let n: u32 = n.parse().ok()?;
            if n == 0 {
                return None;
            }
            return Some(FieldDesc::Cyc(n));
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p.parse().ok()?;
            if !is_prime(p) {
                return None;
            }
            return Some(FieldDesc::Fp(p));
        }
        None
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.checked_mul(d).map_or(false, |s| s <= p) {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Degree of the n-th cyclotomic polynomial (Euler phi).
pub fn euler_phi(n: u32) -> usize {
    let mut n = n as u64;
    let mut result = n;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn cyclotomic_table() -> &'static Mutex<BTreeMap<u32, Vec<BigRational>>> {
    static TABLE: OnceLock<Mutex<BTreeMap<u32, Vec<BigRational>>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Monic coefficient vector (ascending degree) of the n-th cyclotomic
/// polynomial, computed by exact division of x^n - 1 by the product of all
/// Phi_d for proper divisors d of n. Memoized process-wide.
pub fn cyclotomic_poly(n: u32) -> Vec<BigRational> {
    assert!(n >= 1, "cyclotomic index must be >= 1");
    if let Some(hit) = cyclotomic_table().lock().unwrap().get(&n) {
        return hit.clone();
    }
    // x^n - 1
    let mut num = vec![BigRational::zero(); n as usize + 1];
    num[0] = -BigRational::one();
    num[n as usize] = BigRational::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    cyclotomic_table().lock().unwrap().insert(n, num.clone());
    num
}

/// Exact division of polynomials over Q; panics if the remainder is nonzero
/// (only used where divisibility is guaranteed).
fn poly_div_exact(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let dd = den.len() - 1;
    assert!(!den[dd].is_zero());
    let mut rem: Vec<BigRational> = num.to_vec();
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigRational::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = &rem[k + dd] / &den[dd];
        quot[k] = c.clone();
        if !c.is_zero() {
            for j in 0..=dd {
                let t = &den[j] * &c;
                rem[k + j] = &rem[k + j] - &t;
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "polynomial division not exact");
    quot
}

/// A scalar in one of the supported fields, always in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Q(BigRational),
    /// Coefficients of 1, z, z^2, ... reduced mod Phi_n, trailing zeros trimmed.
    Cyc { n: u32, coeffs: Vec<BigRational> },
    Fp { p: u64, val: u64 },
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

impl Scalar {
    pub fn field(&self) -> FieldDesc {
        match self {
            Scalar::Q(_) => FieldDesc::Q,
            Scalar::Cyc { n, .. } => FieldDesc::Cyc(*n),
            Scalar::Fp { p, .. } => FieldDesc::Fp(*p),
        }
    }

    pub fn zero(field: FieldDesc) -> Scalar {
        match field {
            FieldDesc::Q => Scalar::Q(BigRational::zero()),
            FieldDesc::Cyc(n) => Scalar::Cyc { n, coeffs: vec![] },
            FieldDesc::Fp(p) => Scalar::Fp { p, val: 0 },
        }
    }

    pub fn one(field: FieldDesc) -> Scalar {
        match field {
            FieldDesc::Q => Scalar::Q(BigRational::one()),
            FieldDesc::Cyc(n) => Scalar::Cyc { n, coeffs: vec![BigRational::one()] },
            FieldDesc::Fp(p) => Scalar::Fp { p, val: 1 % p },
        }
    }

    pub fn from_int(field: FieldDesc, v: i64) -> Scalar {
        match field {
            FieldDesc::Q => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            FieldDesc::Cyc(n) => {
                let c = BigRational::from_integer(BigInt::from(v));
                Scalar::canon_cyc(n, vec![c])
            }
            FieldDesc::Fp(p) => {
                let r = v.rem_euclid(p as i64) as u64;
                Scalar::Fp { p, val: r }
            }
        }
    }

    pub fn from_ratio(field: FieldDesc, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        match field {
            FieldDesc::Q => {
                Scalar::Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
            }
            FieldDesc::Cyc(n) => {
                let c = BigRational::new(BigInt::from(num), BigInt::from(den));
                Scalar::canon_cyc(n, vec![c])
            }
            FieldDesc::Fp(_) => {
                let a = Scalar::from_int(field, num);
                let b = Scalar::from_int(field, den);
                assert!(!b.is_zero(), "denominator is 0 mod p");
                a.mul(&b.inv().unwrap())
            }
        }
    }

    /// The generator z of Q(z_n). Panics for other fields.
    pub fn root_of_unity(field: FieldDesc) -> Scalar {
        match field {
            FieldDesc::Cyc(n) => {
                let mut coeffs = vec![BigRational::zero(), BigRational::one()];
                if euler_phi(n) == 1 {
                    // z is rational here (n = 1 or 2); reduce immediately.
                    return Scalar::canon_cyc(n, coeffs);
                }
                coeffs.truncate(2);
                Scalar::canon_cyc(n, coeffs)
            }
            _ => panic!("root_of_unity only defined for cyclotomic fields"),
        }
    }

    /// z^k for the cyclotomic generator z.
    pub fn root_pow(field: FieldDesc, k: i64) -> Scalar {
        let n = match field {
            FieldDesc::Cyc(n) => n,
            _ => panic!("root_pow only defined for cyclotomic fields"),
        };
        let k = k.rem_euclid(n as i64) as usize;
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::one();
        Scalar::canon_cyc(n, coeffs)
    }

    fn canon_cyc(n: u32, mut coeffs: Vec<BigRational>) -> Scalar {
        let phi = cyclotomic_poly(n);
        let deg = phi.len() - 1;
        // reduce modulo the monic Phi_n
        while coeffs.len() > deg {
            let top = coeffs.len() - 1;
            let c = coeffs[top].clone();
            if !c.is_zero() {
                for j in 0..deg {
                    let t = &phi[j] * &c;
                    let idx = top - deg + j;
                    coeffs[idx] = &coeffs[idx] - &t;
                }
            }
            coeffs.pop();
        }
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Scalar::Cyc { n, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Cyc { coeffs, .. } => coeffs.is_empty(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        self == &Scalar::one(self.field())
    }

    fn check_same(&self, other: &Scalar) {
        assert!(
            self.field() == other.field(),
            "field mismatch: {} vs {}",
            self.field(),
            other.field()
        );
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.check_same(other);
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Cyc { n, coeffs: a }, Scalar::Cyc { coeffs: b, .. }) => {
                let mut out = vec![BigRational::zero(); a.len().max(b.len())];
                for (i, c) in a.iter().enumerate() {
                    out[i] = out[i].clone() + c;
                }
                for (i, c) in b.iter().enumerate() {
                    out[i] = out[i].clone() + c;
                }
                while out.last().map_or(false, |c| c.is_zero()) {
                    out.pop();
                }
                Scalar::Cyc { n: *n, coeffs: out }
            }
            (Scalar::Fp { p, val: a }, Scalar::Fp { val: b, .. }) => {
                Scalar::Fp { p: *p, val: ((*a as u128 + *b as u128) % *p as u128) as u64 }
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Cyc { n, coeffs } => {
                Scalar::Cyc { n: *n, coeffs: coeffs.iter().map(|c| -c).collect() }
            }
            Scalar::Fp { p, val } => Scalar::Fp { p: *p, val: if *val == 0 { 0 } else { p - val } },
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.check_same(other);
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Cyc { n, coeffs: a }, Scalar::Cyc { coeffs: b, .. }) => {
                if a.is_empty() || b.is_empty() {
                    return Scalar::zero(FieldDesc::Cyc(*n));
                }
                let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
                for (i, ca) in a.iter().enumerate() {
                    if ca.is_zero() {
                        continue;
                    }
                    for (j, cb) in b.iter().enumerate() {
                        if cb.is_zero() {
                            continue;
                        }
                        let t = ca * cb;
                        out[i + j] = &out[i + j] + &t;
                    }
                }
                Scalar::canon_cyc(*n, out)
            }
            (Scalar::Fp { p, val: a }, Scalar::Fp { val: b, .. }) => {
                Scalar::Fp { p: *p, val: ((*a as u128 * *b as u128) % *p as u128) as u64 }
            }
            _ => unreachable!(),
        }
    }

    /// Multiplicative inverse; None for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Q(a) => Some(Scalar::Q(a.recip())),
            Scalar::Cyc { n, coeffs } => {
                // extended Euclid in Q[x] for gcd(self, Phi_n) = 1
                let phi = cyclotomic_poly(*n);
                let inv = poly_inverse_mod(coeffs, &phi)?;
                Some(Scalar::canon_cyc(*n, inv))
            }
            Scalar::Fp { p, val } => {
                let mut result = 1u64;
                let mut base = *val % p;
                let mut e = p - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        result = ((result as u128 * base as u128) % *p as u128) as u64;
                    }
                    base = ((base as u128 * base as u128) % *p as u128) as u64;
                    e >>= 1;
                }
                Some(Scalar::Fp { p: *p, val: result })
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv().expect("division by zero"))
    }

    /// Canonical string form: "p/q" (q > 0, reduced; "p" when q = 1) over Q,
    /// "c0 + c1*z + ..." over cyclotomics (with rational c_i), and the
    /// representative residue over F_p.
    pub fn serialize(&self) -> String {
        match self {
            Scalar::Q(r) => fmt_ratio(r),
            Scalar::Cyc { coeffs, .. } => {
                if coeffs.is_empty() {
                    return "0".to_string();
                }
                let mut parts = Vec::new();
                for (i, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let cs = fmt_ratio(c);
                    let term = match i {
                        0 => cs,
                        1 => format!("{}*z", cs),
                        _ => format!("{}*z^{}", cs, i),
                    };
                    parts.push(term);
                }
                parts.join(" + ")
            }
            Scalar::Fp { val, .. } => format!("{}", val),
        }
    }

    /// Parse the canonical string form back; inverse of `serialize`.
    pub fn parse(field: FieldDesc, s: &str) -> Result<Scalar, String> {
        let s = s.trim();
        match field {
            FieldDesc::Q => {
                let r = parse_ratio(s)?;
                Ok(Scalar::Q(r))
            }
            FieldDesc::Cyc(n) => {
                if s == "0" {
                    return Ok(Scalar::zero(field));
                }
                let mut coeffs: Vec<BigRational> = vec![];
                for part in s.split('+') {
                    let part = part.trim();
                    if part.is_empty() {
                        return Err(format!("empty term in scalar '{}'", s));
                    }
                    let (coef_str, pow) = if let Some(idx) = part.find("*z^") {
                        let pow: usize = part[idx + 3..]
                            .trim()
                            .parse()
                            .map_err(|_| format!("bad power in '{}'", part))?;
                        (&part[..idx], pow)
                    } else if let Some(idx) = part.find("*z") {
                        if part[idx + 2..].trim() != "" {
                            return Err(format!("bad term '{}'", part));
                        }
                        (&part[..idx], 1)
                    } else {
                        (part, 0)
                    };
                    let c = parse_ratio(coef_str.trim())?;
                    if coeffs.len() <= pow {
                        coeffs.resize(pow + 1, BigRational::zero());
                    }
                    coeffs[pow] = &coeffs[pow] + &c;
                }
                Ok(Scalar::canon_cyc(n, coeffs))
            }
            FieldDesc::Fp(p) => {
                // accept an optional sign and reduce mod p
                let neg = s.starts_with('-');
                let t = s.trim_start_matches(['-', '+']);
                let v: u64 = t.parse().map_err(|_| format!("bad residue '{}'", s))?;
                let v = v % p;
                Ok(Scalar::Fp { p, val: if neg && v != 0 { p - v } else { v } })
            }
        }
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_ratio(s: &str) -> Result<BigRational, String> {
    if let Some(idx) = s.find('/') {
        let n = BigInt::from_str(s[..idx].trim()).map_err(|e| format!("bad numerator: {}", e))?;
        let d = BigInt::from_str(s[idx + 1..].trim()).map_err(|e| format!("bad denominator: {}", e))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        if d.is_negative() {
            return Err(format!("denominator must be positive in '{}'", s));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n = BigInt::from_str(s.trim()).map_err(|e| format!("bad integer: {}", e))?;
        Ok(BigRational::from_integer(n))
    }
}

/// Inverse of `a` modulo the monic polynomial `m` over Q, by extended Euclid.
fn poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<Vec<BigRational>> {
    // r0 = m, r1 = a; maintain r_i = s_i*m + t_i*a
    let trim = |mut v: Vec<BigRational>| {
        while v.last().map_or(false, |c| c.is_zero()) {
            v.pop();
        }
        v
    };
    let mut r0 = trim(m.to_vec());
    let mut r1 = trim(a.to_vec());
    let mut t0: Vec<BigRational> = vec![];
    let mut t1: Vec<BigRational> = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1);
        let t_next = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = r1;
        r1 = trim(r);
        t0 = t1;
        t1 = trim(t_next);
    }
    // r0 = gcd; invertible iff gcd is a nonzero constant
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].recip();
    Some(t0.iter().map(|t| t * &c).collect())
}

fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    if rem.len() < den.len() {
        return (vec![], rem);
    }
    let nd = rem.len() - 1;
    let lead = den[dd].clone();
    let mut quot = vec![BigRational::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = &rem[k + dd] / &lead;
        quot[k] = c.clone();
        if !c.is_zero() {
            for j in 0..=dd {
                let t = &den[j] * &c;
                rem[k + j] = &rem[k + j] - &t;
            }
        }
    }
    rem.truncate(dd);
    (quot, rem)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            let t = ca * cb;
            out[i + j] = &out[i + j] + &t;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = out[i].clone() + c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = &out[i] - c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(FieldDesc::Q, n, d)
    }

    #[test]
    fn cyclotomic_small_values() {
        // classical closed forms, ascending-degree coefficient vectors
        let as_i64 = |v: Vec<BigRational>| -> Vec<i64> {
            v.iter()
                .map(|c| {
                    assert!(c.denom().is_one());
                    i64::try_from(c.numer().clone()).unwrap()
                })
                .collect()
        };
        assert_eq!(as_i64(cyclotomic_poly(1)), vec![-1, 1]);
        assert_eq!(as_i64(cyclotomic_poly(2)), vec![1, 1]);
        assert_eq!(as_i64(cyclotomic_poly(3)), vec![1, 1, 1]);
        assert_eq!(as_i64(cyclotomic_poly(4)), vec![1, 0, 1]);
        assert_eq!(as_i64(cyclotomic_poly(5)), vec![1, 1, 1, 1, 1]);
        assert_eq!(as_i64(cyclotomic_poly(6)), vec![1, -1, 1]);
        assert_eq!(as_i64(cyclotomic_poly(8)), vec![1, 0, 0, 0, 1]);
        assert_eq!(as_i64(cyclotomic_poly(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn rational_canonical_and_roundtrip() {
        let a = q(6, -4);
        assert_eq!(a.serialize(), "-3/2");
        let b = Scalar::parse(FieldDesc::Q, "-3/2").unwrap();
        assert_eq!(a, b);
        assert_eq!(q(4, 2).serialize(), "2");
        assert_eq!(Scalar::parse(FieldDesc::Q, "2").unwrap(), q(2, 1));
    }

    #[test]
    fn gaussian_integers_i_squared() {
        let f = FieldDesc::Cyc(4);
        let i = Scalar::root_of_unity(f);
        assert_eq!(i.mul(&i), Scalar::from_int(f, -1));
        assert_eq!(i.mul(&i).mul(&i).mul(&i), Scalar::one(f));
        let x = Scalar::from_int(f, 3).add(&i.mul(&Scalar::from_int(f, 2)));
        assert_eq!(x.serialize(), "3 + 2*z");
        let y = Scalar::parse(f, "3 + 2*z").unwrap();
        assert_eq!(x, y);
        // (3+2i)(3-2i) = 13
        let xc = Scalar::from_int(f, 3).sub(&i.mul(&Scalar::from_int(f, 2)));
        assert_eq!(x.mul(&xc), Scalar::from_int(f, 13));
        let xi = x.inv().unwrap();
        assert_eq!(x.mul(&xi), Scalar::one(f));
    }

    #[test]
    fn sixth_root_reduction() {
        // z_6 satisfies z^2 = z - 1
        let f = FieldDesc::Cyc(6);
        let z = Scalar::root_of_unity(f);
        let z2 = z.mul(&z);
        assert_eq!(z2, z.sub(&Scalar::one(f)));
        assert_eq!(Scalar::root_pow(f, 6), Scalar::one(f));
        assert_eq!(Scalar::root_pow(f, 3), Scalar::from_int(f, -1));
    }

    #[test]
    fn fp_arithmetic() {
        let f = FieldDesc::Fp(7);
        let a = Scalar::from_int(f, 10); // 3
        assert_eq!(a.serialize(), "3");
        let inv = a.inv().unwrap(); // 3*5 = 15 = 1 mod 7
        assert_eq!(inv.serialize(), "5");
        assert_eq!(a.mul(&inv), Scalar::one(f));
        assert_eq!(Scalar::from_int(f, -1).serialize(), "6");
        assert!(is_prime(7) && is_prime(2) && !is_prime(9) && !is_prime(1));
    }

    #[test]
    fn serialization_roundtrip_cyc8() {
        let f = FieldDesc::Cyc(8);
        let z = Scalar::root_of_unity(f);
        let v = Scalar::from_ratio(f, 1, 2)
            .add(&z.mul(&Scalar::from_ratio(f, -2, 3)))
            .add(&Scalar::root_pow(f, 3).mul(&Scalar::from_int(f, 5)));
        let s = v.serialize();
        assert_eq!(s, "1/2 + -2/3*z + 5*z^3");
        assert_eq!(Scalar::parse(f, &s).unwrap(), v);
    }

    proptest::proptest! {
        #[test]
        fn field_axioms_q(an in -50i64..50, ad in 1i64..20, bn in -50i64..50, bd in 1i64..20, cn in -50i64..50, cd in 1i64..20) {
            let a = q(an, ad); let b = q(bn, bd); let c = q(cn, cd);
            proptest::prop_assert_eq!(a.add(&b), b.add(&a));
            proptest::prop_assert_eq!(a.mul(&b), b.mul(&a));
            proptest::prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            proptest::prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            proptest::prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            if !a.is_zero() {
                proptest::prop_assert_eq!(a.mul(&a.inv().unwrap()), Scalar::one(FieldDesc::Q));
            }
        }

        #[test]
        fn field_axioms_cyc12(av in proptest::collection::vec(-9i64..9, 4), bv in proptest::collection::vec(-9i64..9, 4)) {
            let f = FieldDesc::Cyc(12);
            let mk = |v: &Vec<i64>| {
                let mut s = Scalar::zero(f);
                for (k, c) in v.iter().enumerate() {
                    s = s.add(&Scalar::root_pow(f, k as i64).mul(&Scalar::from_int(f, *c)));
                }
                s
            };
            let a = mk(&av); let b = mk(&bv);
            proptest::prop_assert_eq!(a.mul(&b), b.mul(&a));
            if !a.is_zero() {
                let ai = a.inv().unwrap();
                proptest::prop_assert_eq!(a.mul(&ai), Scalar::one(f));
            }
            // round-trip through the canonical string form
            let s = a.serialize();
            proptest::prop_assert_eq!(Scalar::parse(f, &s).unwrap(), a);
        }

        #[test]
        fn field_axioms_fp(a in 0u64..101, b in 0u64..101) {
            let f = FieldDesc::Fp(101);
            let a = Scalar::Fp { p: 101, val: a };
            let b = Scalar::Fp { p: 101, val: b };
            proptest::prop_assert_eq!(a.mul(&b), b.mul(&a));
            proptest::prop_assert_eq!(a.add(&b.neg()), a.sub(&b));
            if !a.is_zero() {
                proptest::prop_assert_eq!(a.mul(&a.inv().unwrap()), Scalar::one(f));
            }
        }
    }
}
