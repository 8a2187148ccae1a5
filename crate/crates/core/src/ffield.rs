//! The finite field `F_q`, `q = p^r`.
//!
//! Elements are stored as the integer `sum c_i p^i` of their coordinates in
//! the polynomial basis `1, u, ..., u^{r-1}` of `F_p[u]/(modulus)`. This makes
//! the representation canonical and gives the enumeration order
//! `0, 1, ..., p-1, u, u+1, ...`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{Field, Ring};
use crate::text;

/// Extension fields at or below this size get full multiplication tables.
const MAX_TABLE_Q: u64 = 1 << 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem(pub u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn index(self) -> u32 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FqOp {
    Add,
    Sub,
    Mul,
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

struct FqInner {
    p: u32,
    r: u32,
    q: u32,
    /// Monic modulus, low degree first, length `r + 1`. `[0, 1]` when `r = 1`.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// A validated finite field configuration. Cheap to clone.
#[derive(Clone)]
pub struct Fq(Arc<FqInner>);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.r == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{} (modulus {:?})", self.0.q, self.0.modulus)
        }
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.r == other.0.r && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Fq {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Built-in moduli for the small extension fields used most often.
pub fn default_modulus(p: u32, r: u32) -> Option<Vec<u32>> {
    match (p, r) {
        (_, 1) => Some(vec![0, 1]),
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (3, 2) => Some(vec![1, 0, 1]),
        _ => None,
    }
}

// --- small F_p[x] helpers used only to validate moduli and build tables ---

fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Trial division of a monic polynomial over `F_p` by every monic polynomial
/// of degree `1..=deg/2`.
fn fp_is_irreducible(m: &[u64], p: u64) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                div.push(x % p);
                x /= p;
            }
            div.push(1);
            if fp_rem(m, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn search_modulus(p: u32, r: u32) -> Vec<u32> {
    let p64 = p as u64;
    let count = p64.pow(r);
    for idx in 0..count {
        let mut m = Vec::with_capacity(r as usize + 1);
        let mut x = idx;
        for _ in 0..r {
            m.push(x % p64);
            x /= p64;
        }
        m.push(1);
        if fp_is_irreducible(&m, p64) {
            return m.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Fq {
    /// Builds `F_q` for `q = p^r`. The modulus (monic, degree `r`, low degree
    /// first) is required to be irreducible; it is ignored when `r = 1`.
    pub fn new(p: u32, r: u32, modulus: Option<Vec<u32>>) -> Result<Fq> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidConfig(format!("{p} is not prime")));
        }
        if r == 0 {
            return Err(Error::InvalidConfig("r must be at least 1".into()));
        }
        if p >= (1 << 31) {
            return Err(Error::InvalidConfig("p must be below 2^31".into()));
        }
        let q64 = (p as u64)
            .checked_pow(r)
            .filter(|&q| q < (1 << 31))
            .ok_or_else(|| Error::InvalidConfig("q too large".into()))?;
        if r > 1 && q64 > MAX_TABLE_Q {
            return Err(Error::InvalidConfig(format!(
                "extension fields are limited to q <= {MAX_TABLE_Q}"
            )));
        }
        let modulus = if r == 1 {
            vec![0, 1]
        } else {
            let m = match modulus {
                Some(m) => m,
                None => default_modulus(p, r).unwrap_or_else(|| search_modulus(p, r)),
            };
            if m.len() != r as usize + 1 || m[r as usize] != 1 {
                return Err(Error::InvalidConfig(format!(
                    "modulus must be monic of degree {r}"
                )));
            }
            if m.iter().any(|&c| c >= p) {
                return Err(Error::InvalidConfig("modulus coefficients must lie in [0, p)".into()));
            }
            let m64: Vec<u64> = m.iter().map(|&c| c as u64).collect();
            if !fp_is_irreducible(&m64, p as u64) {
                return Err(Error::InvalidConfig("modulus is not irreducible".into()));
            }
            m
        };
        let mut inner = FqInner { p, r, q: q64 as u32, modulus, tables: None };
        if r > 1 {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(Fq(Arc::new(inner)))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Fq> {
        Fq::new(p, 1, None)
    }

    /// `F_q` with the built-in (or lexicographically first) modulus.
    pub fn from_order(q: u32) -> Result<Fq> {
        let (p, r) = prime_power(q)
            .ok_or_else(|| Error::InvalidConfig(format!("{q} is not a prime power")))?;
        Fq::new(p, r, None)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn r(&self) -> u32 {
        self.0.r
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.r == 1
    }

    /// Element with the given index in the enumeration order.
    pub fn elem(&self, index: u32) -> Result<FqElem> {
        if index < self.0.q {
            Ok(FqElem(index))
        } else {
            Err(Error::ConfigMismatch)
        }
    }

    pub fn check(&self, a: FqElem) -> Result<FqElem> {
        self.elem(a.0)
    }

    /// All `q` elements: `0, 1, ...` in coordinate order.
    pub fn enumerate(&self) -> Vec<FqElem> {
        (0..self.0.q).map(FqElem).collect()
    }

    /// The nonzero elements.
    pub fn units(&self) -> Vec<FqElem> {
        (1..self.0.q).map(FqElem).collect()
    }

    /// Polynomial-basis coordinates of `a`, low degree first.
    pub fn coords(&self, a: FqElem) -> Vec<u32> {
        let mut x = a.0;
        (0..self.0.r)
            .map(|_| {
                let c = x % self.0.p;
                x /= self.0.p;
                c
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[u32]) -> FqElem {
        let p = self.0.p;
        let mut idx = 0u32;
        for &c in coords.iter().take(self.0.r as usize).rev() {
            idx = idx * p + c % p;
        }
        FqElem(idx)
    }

    /// Checked arithmetic: both operands must belong to this field.
    pub fn arith(&self, a: FqElem, b: FqElem, op: FqOp) -> Result<FqElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(match op {
            FqOp::Add => self.add(&a, &b),
            FqOp::Sub => self.sub(&a, &b),
            FqOp::Mul => self.mul(&a, &b),
        })
    }

    pub fn parse(&self, s: &str) -> Result<FqElem> {
        let s = s.trim();
        if self.0.r == 1 {
            let n: i64 = s
                .parse()
                .map_err(|_| Error::Parse(format!("expected an integer, got `{s}`")))?;
            return Ok(self.from_int(n));
        }
        let terms = text::parse_sum(s, "u")?;
        let mut acc = self.zero();
        for term in terms {
            let c = match term.coeff {
                Some(c) => {
                    let n: i64 = c
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient `{c}`")))?;
                    self.from_int(n)
                }
                None => self.one(),
            };
            let c = if term.negative { self.neg(&c) } else { c };
            let mono = self.pow(&self.generator(), term.exponent);
            acc = self.add(&acc, &self.mul(&c, &mono));
        }
        Ok(acc)
    }

    /// The class of `u` (equals `p`'s image `0` only when `r = 1`, where the
    /// notion is unused).
    pub fn generator(&self) -> FqElem {
        if self.0.r == 1 {
            FqElem(0)
        } else {
            FqElem(self.0.p)
        }
    }

    #[inline]
    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        match &self.0.tables {
            None => ((a as u64 * b as u64) % self.0.p as u64) as u32,
            Some(t) => t.mul[(a * self.0.q + b) as usize],
        }
    }

    #[inline]
    fn add_raw(&self, a: u32, b: u32) -> u32 {
        match &self.0.tables {
            None => {
                let s = a as u64 + b as u64;
                let p = self.0.p as u64;
                (if s >= p { s - p } else { s }) as u32
            }
            Some(t) => {
                if self.0.p == 2 {
                    a ^ b
                } else {
                    t.add[(a * self.0.q + b) as usize]
                }
            }
        }
    }

    #[inline]
    fn neg_raw(&self, a: u32) -> u32 {
        match &self.0.tables {
            None => {
                if a == 0 {
                    0
                } else {
                    self.0.p - a
                }
            }
            Some(t) => t.neg[a as usize],
        }
    }
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut r = 0;
    let mut x = q;
    while x.is_multiple_of(p) {
        x /= p;
        r += 1;
    }
    (x == 1).then_some((p, r))
}

fn build_tables(inner: &FqInner) -> Tables {
    let (p, r, q) = (inner.p as u64, inner.r as usize, inner.q as usize);
    let to_coords = |mut x: usize| -> Vec<u64> {
        (0..r)
            .map(|_| {
                let c = (x as u64) % p;
                x /= p as usize;
                c
            })
            .collect()
    };
    let from_coords = |c: &[u64]| -> u32 {
        let mut idx = 0u64;
        for &ci in c.iter().rev() {
            idx = idx * p + ci;
        }
        idx as u32
    };
    let modulus: Vec<u64> = inner.modulus.iter().map(|&c| c as u64).collect();
    let coords: Vec<Vec<u64>> = (0..q).map(to_coords).collect();
    let mut add = vec![0u32; q * q];
    let mut mul = vec![0u32; q * q];
    for a in 0..q {
        for b in 0..q {
            let s: Vec<u64> = (0..r).map(|i| (coords[a][i] + coords[b][i]) % p).collect();
            add[a * q + b] = from_coords(&s);
            let mut prod = vec![0u64; 2 * r - 1];
            for i in 0..r {
                for j in 0..r {
                    prod[i + j] = (prod[i + j] + coords[a][i] * coords[b][j]) % p;
                }
            }
            let mut red = fp_rem(&prod, &modulus, p);
            red.resize(r, 0);
            mul[a * q + b] = from_coords(&red);
        }
    }
    let neg: Vec<u32> = (0..q)
        .map(|a| from_coords(&coords[a].iter().map(|&c| (p - c) % p).collect::<Vec<_>>()))
        .collect();
    let mut inv = vec![0u32; q];
    for a in 1..q {
        for b in 1..q {
            if mul[a * q + b] == 1 {
                inv[a] = b as u32;
                break;
            }
        }
    }
    Tables { add, mul, neg, inv }
}

impl Ring for Fq {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        FqElem(0)
    }

    fn one(&self) -> FqElem {
        FqElem(1)
    }

    #[inline]
    fn is_zero(&self, a: &FqElem) -> bool {
        a.0 == 0
    }

    #[inline]
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(self.add_raw(a.0, b.0))
    }

    #[inline]
    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(self.add_raw(a.0, self.neg_raw(b.0)))
    }

    #[inline]
    fn neg(&self, a: &FqElem) -> FqElem {
        FqElem(self.neg_raw(a.0))
    }

    #[inline]
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(self.mul_raw(a.0, b.0))
    }

    fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.0.p as i64) as u32)
    }

    fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    fn fmt_elem(&self, a: &FqElem) -> String {
        if self.0.r == 1 {
            return a.0.to_string();
        }
        let coords = self.coords(*a);
        let terms: Vec<(String, u64)> = coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (c.to_string(), i as u64))
            .collect();
        text::format_sum(terms.into_iter().rev(), "u")
    }

    fn needs_parens(&self, a: &FqElem) -> bool {
        self.0.r > 1 && self.coords(*a).iter().filter(|&&c| c != 0).count() > 1
    }

    fn frobenius(&self, a: &FqElem) -> FqElem {
        if self.0.r == 1 {
            *a
        } else {
            self.pow(a, self.0.p as u64)
        }
    }

    fn poly_mul(&self, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        crate::kernel::fq_poly_mul(self, a, b)
    }

    fn sum_of_products<'a, I>(&self, pairs: I) -> FqElem
    where
        I: IntoIterator<Item = (&'a FqElem, &'a FqElem)>,
    {
        if self.0.tables.is_none() && self.0.p < (1 << 16) {
            let p = self.0.p as u64;
            let mut acc = 0u64;
            for (x, y) in pairs {
                acc += x.0 as u64 * y.0 as u64;
                if acc >= 1 << 62 {
                    acc %= p;
                }
            }
            FqElem((acc % p) as u32)
        } else {
            let mut acc = 0u32;
            for (x, y) in pairs {
                acc = self.add_raw(acc, self.mul_raw(x.0, y.0));
            }
            FqElem(acc)
        }
    }

    fn poly_sum_of_products<'a, I>(&self, pairs: I) -> Vec<FqElem>
    where
        I: IntoIterator<Item = (&'a [FqElem], &'a [FqElem])>,
    {
        crate::kernel::fq_poly_sum_of_products(self, pairs)
    }

    fn unit_inverse(&self, a: &FqElem) -> Option<FqElem> {
        self.inv(a).ok()
    }
}

impl Field for Fq {
    fn inv(&self, a: &FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0.tables {
            None => FqElem(pow_mod(a.0 as u64, self.0.p as u64 - 2, self.0.p as u64) as u32),
            Some(t) => FqElem(t.inv[a.0 as usize]),
        })
    }
}

impl Fq {
    /// Raw access for the multiplication kernel.
    pub(crate) fn mul_table(&self) -> Option<&[u32]> {
        self.0.tables.as_ref().map(|t| t.mul.as_slice())
    }

    pub(crate) fn add_table(&self) -> Option<&[u32]> {
        self.0.tables.as_ref().map(|t| t.add.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_prime_arithmetic() {
        let f2 = Fq::prime(2).unwrap();
        assert_eq!(f2.arith(FqElem(1), FqElem(1), FqOp::Add).unwrap(), FqElem(0));
        let f3 = Fq::prime(3).unwrap();
        assert_eq!(f3.arith(FqElem(2), FqElem(2), FqOp::Mul).unwrap(), FqElem(1));
        assert_eq!(f3.inv(&FqElem(2)).unwrap(), FqElem(2));
        assert_eq!(f2.inv(&FqElem(1)).unwrap(), FqElem(1));
        let f5 = Fq::prime(5).unwrap();
        assert_eq!(f5.inv(&FqElem(3)).unwrap(), FqElem(2));
        assert_eq!(f5.inv(&FqElem(0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn f4_generator_squared() {
        let f4 = Fq::from_order(4).unwrap();
        let u = f4.parse("u").unwrap();
        let uu = f4.arith(u, u, FqOp::Mul).unwrap();
        assert_eq!(f4.fmt_elem(&uu), "u+1");
        assert_eq!(uu, f4.parse("u+1").unwrap());
    }

    #[test]
    fn enumeration_order() {
        let names = |q: u32| {
            let f = Fq::from_order(q).unwrap();
            f.enumerate().iter().map(|a| f.fmt_elem(a)).collect::<Vec<_>>()
        };
        assert_eq!(names(2), ["0", "1"]);
        assert_eq!(names(3), ["0", "1", "2"]);
        assert_eq!(names(4), ["0", "1", "u", "u+1"]);
    }

    #[test]
    fn config_mismatch() {
        let f3 = Fq::prime(3).unwrap();
        let f9 = Fq::from_order(9).unwrap();
        let big = f9.parse("u+2").unwrap();
        assert_eq!(f3.arith(big, FqElem(1), FqOp::Add), Err(Error::ConfigMismatch));
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(Fq::new(4, 1, None).is_err());
        assert!(Fq::new(2, 2, Some(vec![1, 0, 1])).is_err()); // (x+1)^2
        assert!(Fq::new(3, 2, Some(vec![1, 0, 2])).is_err()); // not monic
        assert!(Fq::new(3, 0, None).is_err());
    }

    #[test]
    fn fermat_and_frobenius_by_enumeration() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = Fq::from_order(q).unwrap();
            let p = f.p() as u64;
            for a in f.enumerate() {
                assert_eq!(f.pow(&a, q as u64), a, "a^q = a in F_{q}");
                for b in f.enumerate() {
                    let lhs = f.pow(&f.add(&a, &b), p);
                    let rhs = f.add(&f.pow(&a, p), &f.pow(&b, p));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn element_text_round_trip() {
        for q in [2, 3, 4, 8, 9, 25] {
            let f = Fq::from_order(q).unwrap();
            for a in f.enumerate() {
                assert_eq!(f.parse(&f.fmt_elem(&a)).unwrap(), a);
            }
        }
        let f9 = Fq::from_order(9).unwrap();
        assert_eq!(f9.parse("u^2+2*u+1").unwrap(), f9.parse("2*u").unwrap());
    }

    #[test]
    fn default_modulus_search() {
        let f25 = Fq::from_order(25).unwrap();
        assert_eq!(f25.q(), 25);
        let f27 = Fq::from_order(27).unwrap();
        assert_eq!(f27.modulus().len(), 4);
    }
}
