//! Exact rationals and cyclotomic numbers.
//!
//! A [`CycScalar`] of order `N` stores an element of ℚ(ζ_N) in the power
//! basis `1, ζ, …, ζ^{φ(N)-1}` reduced modulo the cyclotomic polynomial Φ_N.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};

use crate::error::ScalarError;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Cached data for one cyclotomic order.
struct Cyclo {
    phi: usize,
    /// `powers[e]` is ζ^e in the power basis, for `0 <= e < N`.
    powers: Vec<Vec<i64>>,
    poly: Vec<i64>,
}

fn poly_divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    quot
}

fn cyclotomic_poly_uncached(n: u32, table: &mut HashMap<u32, Arc<Cyclo>>) -> Vec<i64> {
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let sub = cyclo_locked(d, table);
            num = poly_divide_exact(&num, &sub.poly);
        }
    }
    num
}

fn cyclo_locked(n: u32, table: &mut HashMap<u32, Arc<Cyclo>>) -> Arc<Cyclo> {
    if let Some(c) = table.get(&n) {
        return c.clone();
    }
    let poly = cyclotomic_poly_uncached(n, table);
    let phi = poly.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x and reduce
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        for i in (1..phi).rev() {
            next[i] = cur[i - 1];
        }
        if top != 0 {
            for (i, slot) in next.iter_mut().enumerate() {
                *slot -= top * poly[i];
            }
        }
        cur = next;
    }
    let c = Arc::new(Cyclo { phi, powers, poly });
    table.insert(n, c.clone());
    c
}

fn cyclo(n: u32) -> Arc<Cyclo> {
    thread_local! {
        static LOCAL: std::cell::RefCell<HashMap<u32, Arc<Cyclo>>> = std::cell::RefCell::new(HashMap::new());
    }
    if let Some(c) = LOCAL.with(|l| l.borrow().get(&n).cloned()) {
        return c;
    }
    let c = cyclo_shared(n);
    LOCAL.with(|l| l.borrow_mut().insert(n, c.clone()));
    c
}

fn cyclo_shared(n: u32) -> Arc<Cyclo> {
    static TABLE: OnceLock<Mutex<HashMap<u32, Arc<Cyclo>>>> = OnceLock::new();
    let m = TABLE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = m.lock().expect("cyclotomic cache poisoned");
    cyclo_locked(n, &mut guard)
}

/// Integer coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    cyclo(n).poly.clone()
}

pub fn euler_phi(n: u32) -> usize {
    cyclo(n).phi
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// `a/b + c/d` for reduced inputs, `None` on overflow.
fn add_small(a: i64, b: i64, c: i64, d: i64) -> Option<Coef> {
    if b == d {
        let n = a.checked_add(c)?;
        if b == 1 || n == 0 {
            return Some(if n == 0 { Coef::ZERO } else { Coef::S(n, 1) });
        }
        let g = gcd_u64(n.unsigned_abs(), b as u64) as i64;
        return Some(Coef::S(n / g, b / g));
    }
    let g = gcd_u64(b as u64, d as u64) as i64;
    let (b1, d1) = (b / g, d / g);
    let n = a.checked_mul(d1)?.checked_add(c.checked_mul(b1)?)?;
    if n == 0 {
        return Some(Coef::ZERO);
    }
    let g2 = gcd_u64(n.unsigned_abs(), g as u64) as i64;
    Some(Coef::S(n / g2, b1.checked_mul(d / g2)?))
}

/// `(a/b)(c/d)` for reduced inputs, `None` on overflow.
fn mul_small(a: i64, b: i64, c: i64, d: i64) -> Option<Coef> {
    if b == 1 && d == 1 {
        return Some(Coef::S(a.checked_mul(c)?, 1));
    }
    let g1 = gcd_u64(a.unsigned_abs(), d as u64) as i64;
    let g2 = gcd_u64(c.unsigned_abs(), b as u64) as i64;
    Some(Coef::S((a / g1).checked_mul(c / g2)?, (b / g2).checked_mul(d / g1)?))
}

/// Rational coefficient with an `i64` fast path; falls back to a boxed
/// big rational on overflow. Canonical: `S(n, d)` has `d > 0`, `gcd(n, d) = 1`,
/// and `B` only holds values that do not fit `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Coef {
    S(i64, i64),
    B(Box<Rational>),
}

impl Coef {
    const ZERO: Coef = Coef::S(0, 1);

    fn int(n: i64) -> Coef {
        Coef::S(n, 1)
    }

    fn from_big(r: &Rational) -> Coef {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Coef::S(n, d),
            _ => Coef::B(Box::new(r.clone())),
        }
    }

    fn to_big(&self) -> Rational {
        match self {
            Coef::S(n, d) => Rational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Coef::B(r) => (**r).clone(),
        }
    }

    fn from_wide(n: i128, d: i128) -> Coef {
        debug_assert!(d > 0);
        if n == 0 {
            return Coef::ZERO;
        }
        let (n, d) = if d == 1 {
            (n, d)
        } else {
            let g = n.gcd(&d);
            (n / g, d / g)
        };
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Coef::S(n, d),
            _ => Coef::B(Box::new(Rational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big_owned(r: Rational) -> Coef {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Coef::S(n, d),
            _ => Coef::B(Box::new(r)),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Coef::S(0, _))
    }

    fn add(&self, o: &Coef) -> Coef {
        match (self, o) {
            (Coef::S(0, _), _) => o.clone(),
            (_, Coef::S(0, _)) => self.clone(),
            (&Coef::S(a, b), &Coef::S(c, d)) => add_small(a, b, c, d).unwrap_or_else(|| {
                let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
                Coef::from_wide(a * d + c * b, b * d)
            }),
            _ => Coef::from_big_owned(self.to_big() + o.to_big()),
        }
    }

    fn neg(&self) -> Coef {
        match self {
            Coef::S(n, d) => Coef::from_wide(-(*n as i128), *d as i128),
            Coef::B(r) => Coef::from_big_owned(-(**r).clone()),
        }
    }

    fn sub(&self, o: &Coef) -> Coef {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Coef) -> Coef {
        match (self, o) {
            (Coef::S(0, _), _) | (_, Coef::S(0, _)) => Coef::ZERO,
            (&Coef::S(a, b), &Coef::S(c, d)) => mul_small(a, b, c, d)
                .unwrap_or_else(|| Coef::from_wide(a as i128 * c as i128, b as i128 * d as i128)),
            _ => Coef::from_big_owned(self.to_big() * o.to_big()),
        }
    }

    fn mul_int(&self, w: i64) -> Coef {
        self.mul(&Coef::int(w))
    }

    fn recip(&self) -> Coef {
        match self {
            Coef::S(n, d) if *n < 0 => Coef::from_wide(-(*d as i128), -(*n as i128)),
            Coef::S(n, d) => Coef::from_wide(*d as i128, *n as i128),
            Coef::B(r) => Coef::from_big_owned(r.recip()),
        }
    }
}

type Coefs = SmallVec<[Coef; 2]>;

/// Equality compares values, so a rational stored at order 4 equals the
/// same rational at order 1.
#[derive(Clone, Debug)]
pub struct CycScalar {
    order: u32,
    coeffs: Coefs,
}

impl CycScalar {
    pub fn zero() -> Self {
        CycScalar { order: 1, coeffs: smallvec![Coef::ZERO] }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_rational(r: Rational) -> Self {
        CycScalar { order: 1, coeffs: smallvec![Coef::from_big_owned(r)] }
    }

    pub fn from_int(n: i64) -> Self {
        CycScalar { order: 1, coeffs: smallvec![Coef::int(n)] }
    }

    /// ζ_N^k.
    pub fn zeta(order: u32, k: i64) -> Self {
        assert!(order >= 1);
        let c = cyclo(order);
        let e = k.rem_euclid(order as i64) as usize;
        let coeffs = c.powers[e].iter().map(|&x| Coef::int(x)).collect();
        CycScalar { order, coeffs }.normalized()
    }

    /// Builds from power-basis coefficients of any length, reducing modulo Φ_N.
    pub fn from_coeffs(order: u32, coeffs: Vec<Rational>) -> Self {
        Self::from_coefs(order, coeffs.iter().map(Coef::from_big).collect())
    }

    fn from_coefs(order: u32, coeffs: Coefs) -> Self {
        assert!(order >= 1);
        let c = cyclo(order);
        let mut out: Coefs = smallvec![Coef::ZERO; c.phi];
        for (e, v) in coeffs.into_iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let p = &c.powers[e % order as usize];
            for (i, &w) in p.iter().enumerate() {
                if w != 0 {
                    out[i] = out[i].add(&v.mul_int(w));
                }
            }
        }
        CycScalar { order, coeffs: out }.normalized()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Power-basis coefficients.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.coeffs.iter().map(Coef::to_big).collect()
    }

    /// Rational values collapse to order 1 so arithmetic results stay small.
    fn normalized(mut self) -> Self {
        if self.order != 1 && self.is_rational() {
            self.coeffs.truncate(1);
            self.order = 1;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Coef::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.coeffs[0] == Coef::int(1)
    }

    /// The rational value, if every non-constant coefficient vanishes.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.coeffs[0].to_big())
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Coef::is_zero)
    }

    /// Same value in ℚ(ζ_M), mapping ζ_N to ζ_M^{M/N}.
    pub fn promote(&self, m: u32) -> Result<Self, ScalarError> {
        if m == 0 || m % self.order != 0 {
            return Err(ScalarError::NotDivisible { from: self.order, to: m });
        }
        if m == self.order {
            return Ok(self.clone());
        }
        let step = (m / self.order) as usize;
        let mut spread: Coefs = smallvec![Coef::ZERO; step * (self.coeffs.len() - 1) + 1];
        for (k, v) in self.coeffs.iter().enumerate() {
            spread[k * step] = v.clone();
        }
        let mut out = Self::from_coefs(m, spread);
        if out.order != m {
            out = embed(out.coeffs[0].clone(), m);
        }
        Ok(out)
    }

    fn unify<'a>(
        a: &'a CycScalar,
        b: &'a CycScalar,
    ) -> Result<(std::borrow::Cow<'a, CycScalar>, std::borrow::Cow<'a, CycScalar>), ScalarError> {
        use std::borrow::Cow;
        if a.order == b.order {
            return Ok((Cow::Borrowed(a), Cow::Borrowed(b)));
        }
        if a.is_rational() {
            return Ok((Cow::Owned(embed(a.coeffs[0].clone(), b.order)), Cow::Borrowed(b)));
        }
        if b.is_rational() {
            return Ok((Cow::Borrowed(a), Cow::Owned(embed(b.coeffs[0].clone(), a.order))));
        }
        Err(ScalarError::IncompatibleOrders(a.order, b.order))
    }

    pub fn checked_add(&self, other: &CycScalar) -> Result<CycScalar, ScalarError> {
        if self.order == 1 && other.order == 1 {
            return Ok(CycScalar { order: 1, coeffs: smallvec![self.coeffs[0].add(&other.coeffs[0])] });
        }
        let (a, b) = Self::unify(self, other)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.add(y)).collect();
        Ok(CycScalar { order: a.order, coeffs }.normalized())
    }

    pub fn checked_sub(&self, other: &CycScalar) -> Result<CycScalar, ScalarError> {
        if self.order == 1 && other.order == 1 {
            return Ok(CycScalar { order: 1, coeffs: smallvec![self.coeffs[0].sub(&other.coeffs[0])] });
        }
        let (a, b) = Self::unify(self, other)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.sub(y)).collect();
        Ok(CycScalar { order: a.order, coeffs }.normalized())
    }

    pub fn checked_mul(&self, other: &CycScalar) -> Result<CycScalar, ScalarError> {
        if self.order == 1 && other.order == 1 {
            return Ok(CycScalar { order: 1, coeffs: smallvec![self.coeffs[0].mul(&other.coeffs[0])] });
        }
        if self.is_rational() {
            return Ok(other.scale_coef(&self.coeffs[0]));
        }
        if other.is_rational() {
            return Ok(self.scale_coef(&other.coeffs[0]));
        }
        if self.order != other.order {
            return Err(ScalarError::IncompatibleOrders(self.order, other.order));
        }
        let c = cyclo(self.order);
        let phi = c.phi;
        let mut prod: SmallVec<[Coef; 4]> = smallvec![Coef::ZERO; 2 * phi - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] = prod[i + j].add(&x.mul(y));
                }
            }
        }
        let mut out: Coefs = prod[..phi].iter().cloned().collect();
        for (e, v) in prod.into_iter().enumerate().skip(phi) {
            if v.is_zero() {
                continue;
            }
            for (i, &w) in c.powers[e % self.order as usize].iter().enumerate() {
                if w != 0 {
                    out[i] = out[i].add(&v.mul_int(w));
                }
            }
        }
        Ok(CycScalar { order: self.order, coeffs: out }.normalized())
    }

    fn scale_coef(&self, r: &Coef) -> CycScalar {
        CycScalar { order: self.order, coeffs: self.coeffs.iter().map(|c| c.mul(r)).collect() }.normalized()
    }

    pub fn scale(&self, r: &Rational) -> CycScalar {
        self.scale_coef(&Coef::from_big(r))
    }

    /// Multiplication by an integer.
    pub fn scale_int(&self, n: i64) -> CycScalar {
        self.scale_coef(&Coef::int(n))
    }

    pub fn div_rational(&self, r: &Rational) -> Result<CycScalar, ScalarError> {
        if r.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self.scale_coef(&Coef::from_big(r).recip()))
    }

    /// Division is only defined for rational divisors.
    pub fn checked_div(&self, other: &CycScalar) -> Result<CycScalar, ScalarError> {
        if !other.is_rational() {
            return Err(ScalarError::NonRationalDivisor);
        }
        if other.coeffs[0].is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self.scale_coef(&other.coeffs[0].recip()))
    }

    pub fn pow(&self, e: u32) -> CycScalar {
        let mut acc = CycScalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Complex conjugate: ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> CycScalar {
        if self.is_rational() {
            return self.clone();
        }
        let n = self.order as usize;
        let mut spread: Coefs = smallvec![Coef::ZERO; n];
        for (k, v) in self.coeffs.iter().enumerate() {
            spread[(n - k) % n] = spread[(n - k) % n].add(v);
        }
        Self::from_coefs(self.order, spread)
    }

    /// Value equality across orders (promotes both to the lcm).
    pub fn value_eq(&self, other: &CycScalar) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        match (self.is_rational(), other.is_rational()) {
            (true, true) => return self.coeffs[0] == other.coeffs[0],
            (false, false) => {}
            _ => return false,
        }
        let m = self.order.lcm(&other.order);
        match (self.promote(m), other.promote(m)) {
            (Ok(a), Ok(b)) => a.coeffs == b.coeffs,
            _ => false,
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match (self.is_rational(), &self.coeffs[0]) {
            (true, Coef::S(n, 1)) => Some(*n),
            _ => None,
        }
    }
}

fn embed(r: Coef, order: u32) -> CycScalar {
    let phi = euler_phi(order);
    let mut coeffs: Coefs = smallvec![Coef::ZERO; phi];
    coeffs[0] = r;
    CycScalar { order, coeffs }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        self.value_eq(other)
    }
}

impl Eq for CycScalar {}

impl Default for CycScalar {
    fn default() -> Self {
        CycScalar::zero()
    }
}

impl From<i64> for CycScalar {
    fn from(n: i64) -> Self {
        CycScalar::from_int(n)
    }
}

impl From<Rational> for CycScalar {
    fn from(r: Rational) -> Self {
        CycScalar::from_rational(r)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a CycScalar> for &'a CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &'a CycScalar) -> CycScalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: CycScalar) -> CycScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &'a CycScalar) -> CycScalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar { order: self.order, coeffs: self.coeffs.iter().map(Coef::neg).collect() }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", fmt_rational(&r));
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let body = match k {
                0 => fmt_rational(&mag),
                _ => {
                    let z = if k == 1 { format!("z{}", self.order) } else { format!("z{}^{}", self.order, k) };
                    if mag.is_one() {
                        z
                    } else {
                        format!("{}*{}", fmt_rational(&mag), z)
                    }
                }
            };
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn from_big(b: &BigInt) -> Self {
        match b.to_i64() {
            Some(v) => IntRepr::Small(v),
            None => IntRepr::Big(b.to_string()),
        }
    }
    fn to_big(&self) -> Result<BigInt, String> {
        match self {
            IntRepr::Small(v) => Ok(BigInt::from(*v)),
            IntRepr::Big(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CycDoc {
    #[serde(rename = "N")]
    order: u32,
    coeffs: Vec<(IntRepr, IntRepr)>,
}

impl Serialize for CycScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let doc = CycDoc {
            order: self.order,
            coeffs: self
                .coeffs()
                .iter()
                .map(|c| (IntRepr::from_big(c.numer()), IntRepr::from_big(c.denom())))
                .collect(),
        };
        doc.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = CycDoc::deserialize(d)?;
        if doc.order == 0 {
            return Err(de::Error::custom("order N must be positive"));
        }
        let phi = euler_phi(doc.order);
        if doc.coeffs.len() != phi {
            return Err(de::Error::custom(format!(
                "order {} needs {} coefficients, got {}",
                doc.order,
                phi,
                doc.coeffs.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(phi);
        for (n, q) in &doc.coeffs {
            let n = n.to_big().map_err(de::Error::custom)?;
            let q = q.to_big().map_err(de::Error::custom)?;
            if q.is_zero() {
                return Err(de::Error::custom("zero denominator"));
            }
            coeffs.push(Coef::from_big_owned(Rational::new(n, q)));
        }
        Ok(CycScalar { order: doc.order, coeffs: coeffs.into() }.normalized())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(5), 4);
    }

    #[test]
    fn zeta_identities() {
        let i = CycScalar::zeta(4, 1);
        assert_eq!(&i * &i, CycScalar::from_int(-1));
        let w = CycScalar::zeta(3, 1);
        assert_eq!(&w + &CycScalar::zeta(3, 2), CycScalar::from_int(-1));
        let half = CycScalar::from_rational(rat(1, 2));
        let z6 = CycScalar::zeta(6, 1);
        assert_eq!(&half * &z6 + &half * &z6, z6);
    }

    #[test]
    fn promotion() {
        let m1 = CycScalar::from_int(-1);
        let p = m1.promote(4).unwrap();
        assert_eq!(p.order(), 4);
        assert_eq!(p, m1);
        let z2 = CycScalar::zeta(2, 1);
        assert_eq!(z2.promote(6).unwrap(), CycScalar::zeta(6, 3));
        let s3 = CycScalar::zeta(3, 1) + CycScalar::zeta(3, 2);
        let s6 = s3.promote(6).unwrap();
        assert!(s3.value_eq(&s6));
        assert!(CycScalar::zeta(3, 1).promote(4).is_err());
    }

    #[test]
    fn rationality() {
        let x = CycScalar::zeta(3, 1) + CycScalar::zeta(3, 2) + CycScalar::one();
        assert_eq!(x.as_rational(), Some(rint(0)));
        assert_eq!(CycScalar::zeta(5, 1).as_rational(), None);
        assert_eq!(CycScalar::from_rational(rat(7, 3)).as_rational(), Some(rat(7, 3)));
    }

    #[test]
    fn mixed_orders_rejected() {
        let a = CycScalar::zeta(3, 1);
        let b = CycScalar::zeta(4, 1);
        assert!(a.checked_add(&b).is_err());
        assert!(a.checked_mul(&b).is_err());
        assert!(a.checked_div(&b).is_err());
        // rational embeds
        let r = CycScalar::from_int(2);
        assert!(a.checked_add(&r).is_ok());
    }

    #[test]
    fn conjugation() {
        let z = CycScalar::zeta(5, 2);
        assert_eq!(z.conj(), CycScalar::zeta(5, 3));
        assert_eq!(&z * &z.conj(), CycScalar::one());
    }

    #[test]
    fn serde_round_trip() {
        let x = CycScalar::from_coeffs(3, vec![rat(1, 2), rat(-3, 1)]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"N":3,"coeffs":[[1,2],[-3,1]]}"#);
        let y: CycScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        let r: CycScalar = serde_json::from_str(r#"{"N":1,"coeffs":[[4,6]]}"#).unwrap();
        assert_eq!(r.as_rational(), Some(rat(2, 3)));
        assert!(serde_json::from_str::<CycScalar>(r#"{"N":3,"coeffs":[[1,1]]}"#).is_err());
    }

    #[test]
    fn small_paths_match_big_arithmetic() {
        let vals = [0i64, 1, -1, 2, -3, 6, 35, -840, 1 << 31, i64::MAX, i64::MIN + 1, i64::MIN];
        let dens = [1i64, 2, 3, 12, 35, 1 << 40, i64::MAX];
        let mut coefs = Vec::new();
        for &n in &vals {
            for &d in &dens {
                coefs.push(Coef::from_big_owned(Rational::new(BigInt::from(n), BigInt::from(d))));
            }
        }
        for x in &coefs {
            for y in &coefs {
                assert_eq!(x.add(y), Coef::from_big_owned(x.to_big() + y.to_big()));
                assert_eq!(x.mul(y), Coef::from_big_owned(x.to_big() * y.to_big()));
                assert_eq!(x.sub(y), Coef::from_big_owned(x.to_big() - y.to_big()));
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(CycScalar::from_rational(rat(-3, 4)).to_string(), "-3/4");
        let x = CycScalar::from_coeffs(3, vec![rint(1), rint(-2)]);
        assert_eq!(x.to_string(), "1 - 2*z3");
    }
}
