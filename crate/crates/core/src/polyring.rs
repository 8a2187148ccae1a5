//! `A = F_q[T]`, its fraction field `K = F_q(T)`, monic irreducibles and the
//! evaluation maps `T -> theta`.

use crate::error::{Error, Result};
use crate::ffield::{Fq, FqElem};
use crate::poly::{Parse, Poly, PolyRing};
use crate::ring::{Field, Ring};

/// Element of `A = F_q[T]`.
pub type PolyA = Poly<FqElem>;

/// The polynomial ring `A = F_q[T]`.
pub type RingA = PolyRing<Fq>;

pub fn ring_a(fq: &Fq) -> RingA {
    PolyRing::new(fq.clone(), "T")
}

/// Element of `K = F_q(T)`: a reduced fraction with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatK {
    num: PolyA,
    den: PolyA,
}

impl RatK {
    pub fn num(&self) -> &PolyA {
        &self.num
    }

    pub fn den(&self) -> &PolyA {
        &self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den.degree() == Some(0)
    }
}

/// The field `K = F_q(T)`. Results are always fully reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatField {
    a: RingA,
}

impl RatField {
    pub fn new(fq: &Fq) -> Self {
        RatField { a: ring_a(fq) }
    }

    pub fn ring(&self) -> &RingA {
        &self.a
    }

    pub fn fq(&self) -> &Fq {
        self.a.base()
    }

    /// `num / den`, normalized.
    pub fn frac(&self, num: PolyA, den: PolyA) -> Result<RatK> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(self.zero());
        }
        let g = self.a.gcd(&num, &den)?;
        let (mut n, mut d) = if self.a.is_one(&g) {
            (num, den)
        } else {
            (self.a.div_exact(&num, &g), self.a.div_exact(&den, &g))
        };
        let lead = *d.leading().unwrap();
        if !self.fq().is_one(&lead) {
            let inv = self.fq().inv(&lead)?;
            n = self.a.scale(&n, &inv);
            d = self.a.scale(&d, &inv);
        }
        Ok(RatK { num: n, den: d })
    }

    pub fn from_poly(&self, a: PolyA) -> RatK {
        RatK { num: a, den: self.a.one() }
    }

    pub fn from_fq(&self, c: FqElem) -> RatK {
        self.from_poly(self.a.constant(c))
    }

    /// Checks the normalization invariants (used by tests).
    pub fn is_normalized(&self, x: &RatK) -> bool {
        if !self.a.is_monic(&x.den) {
            return false;
        }
        if x.num.is_zero() {
            return self.a.is_one(&x.den);
        }
        self.a.gcd(&x.num, &x.den).map(|g| self.a.is_one(&g)).unwrap_or(false)
    }

    /// Reduction `T -> theta`; fails when the denominator vanishes at theta.
    pub fn reduce_at(&self, x: &RatK, theta: FqElem) -> Result<FqElem> {
        let d = self.a.eval(&x.den, &theta);
        if self.fq().is_zero(&d) {
            return Err(Error::DenominatorVanishes);
        }
        let n = self.a.eval(&x.num, &theta);
        self.fq().div(&n, &d)
    }
}

/// Reduction of `x` at `T = theta`.
pub fn reduce_at_theta(k: &RatField, x: &RatK, theta: FqElem) -> Result<FqElem> {
    k.reduce_at(x, theta)
}

impl Ring for RatField {
    type Elem = RatK;

    fn zero(&self) -> RatK {
        RatK { num: self.a.zero(), den: self.a.one() }
    }

    fn one(&self) -> RatK {
        RatK { num: self.a.one(), den: self.a.one() }
    }

    fn is_zero(&self, x: &RatK) -> bool {
        x.num.is_zero()
    }

    fn is_one(&self, x: &RatK) -> bool {
        self.a.is_one(&x.num) && self.a.is_one(&x.den)
    }

    fn add(&self, x: &RatK, y: &RatK) -> RatK {
        if x.num.is_zero() {
            return y.clone();
        }
        if y.num.is_zero() {
            return x.clone();
        }
        if x.den == y.den {
            if self.a.is_one(&x.den) {
                return self.from_poly(self.a.add(&x.num, &y.num));
            }
            return self.frac(self.a.add(&x.num, &y.num), x.den.clone()).unwrap();
        }
        let g = self.a.gcd(&x.den, &y.den).unwrap();
        if self.a.is_one(&g) {
            let num = self.a.add(&self.a.mul(&x.num, &y.den), &self.a.mul(&y.num, &x.den));
            if num.is_zero() {
                return self.zero();
            }
            // Coprime denominators: the sum is already reduced.
            let den = self.a.mul(&x.den, &y.den);
            return RatK { num, den };
        }
        let xd = self.a.div_exact(&x.den, &g);
        let yd = self.a.div_exact(&y.den, &g);
        let num = self.a.add(&self.a.mul(&x.num, &yd), &self.a.mul(&y.num, &xd));
        let den = self.a.mul(&xd, &y.den);
        self.frac(num, den).unwrap()
    }

    fn sub(&self, x: &RatK, y: &RatK) -> RatK {
        self.add(x, &self.neg(y))
    }

    fn neg(&self, x: &RatK) -> RatK {
        RatK { num: self.a.neg(&x.num), den: x.den.clone() }
    }

    fn mul(&self, x: &RatK, y: &RatK) -> RatK {
        if x.num.is_zero() || y.num.is_zero() {
            return self.zero();
        }
        let one = |p: &PolyA| self.a.is_one(p);
        if one(&x.den) && one(&y.den) {
            return self.from_poly(self.a.mul(&x.num, &y.num));
        }
        let g1 = self.a.gcd(&x.num, &y.den).unwrap();
        let g2 = self.a.gcd(&y.num, &x.den).unwrap();
        let xn = if one(&g1) { x.num.clone() } else { self.a.div_exact(&x.num, &g1) };
        let yd = if one(&g1) { y.den.clone() } else { self.a.div_exact(&y.den, &g1) };
        let yn = if one(&g2) { y.num.clone() } else { self.a.div_exact(&y.num, &g2) };
        let xd = if one(&g2) { x.den.clone() } else { self.a.div_exact(&x.den, &g2) };
        let num = self.a.mul(&xn, &yn);
        let den = self.a.mul(&xd, &yd);
        // Both denominators are monic, so their product is too.
        RatK { num, den }
    }

    fn from_int(&self, n: i64) -> RatK {
        self.from_poly(self.a.from_int(n))
    }

    fn characteristic(&self) -> u64 {
        self.a.characteristic()
    }

    fn fmt_elem(&self, x: &RatK) -> String {
        let n = self.a.fmt_elem(&x.num);
        if self.a.is_one(&x.den) {
            return n;
        }
        let wrap = |s: String, parens: bool| if parens { format!("({s})") } else { s };
        let num_parens = self.a.needs_parens(&x.num);
        let den_parens = self.a.needs_parens(&x.den);
        format!("{}/{}", wrap(n, num_parens), wrap(self.a.fmt_elem(&x.den), den_parens))
    }

    fn needs_parens(&self, x: &RatK) -> bool {
        self.a.needs_parens(&x.num) || !self.a.is_one(&x.den)
    }

    fn unit_inverse(&self, x: &RatK) -> Option<RatK> {
        self.inv(x).ok()
    }

    fn frobenius(&self, x: &RatK) -> RatK {
        // Frobenius preserves coprimality and monicity.
        RatK { num: self.a.frobenius(&x.num), den: self.a.frobenius(&x.den) }
    }
}

impl Field for RatField {
    fn inv(&self, x: &RatK) -> Result<RatK> {
        if x.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.frac(x.den.clone(), x.num.clone())
    }
}

impl Parse for RatField {
    fn parse_elem(&self, s: &str) -> Result<RatK> {
        // Split at a top-level '/'.
        let mut depth = 0i32;
        let mut slash = None;
        for (i, ch) in s.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '/' if depth == 0 => {
                    if slash.is_some() {
                        return Err(Error::Parse(format!("more than one '/' in `{s}`")));
                    }
                    slash = Some(i);
                }
                _ => {}
            }
        }
        match slash {
            None => Ok(self.from_poly(self.a.parse_elem(s)?)),
            Some(i) => {
                let n = self.a.parse_elem(strip(&s[..i]))?;
                let d = self.a.parse_elem(strip(&s[i + 1..]))?;
                self.frac(n, d)
            }
        }
    }
}

fn strip(s: &str) -> &str {
    let s = s.trim();
    if s.starts_with('(') && s.ends_with(')') {
        &s[1..s.len() - 1]
    } else {
        s
    }
}

/// A monic irreducible `P = alpha_0 + alpha_1 T + ... + T^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimePoly {
    poly: PolyA,
    alpha: Vec<FqElem>,
}

impl PrimePoly {
    /// Validates that `poly` is monic and irreducible.
    pub fn new(a: &RingA, poly: PolyA) -> Result<PrimePoly> {
        if !a.is_monic(&poly) {
            return Err(Error::NotMonic);
        }
        if !is_irreducible(a, &poly)? {
            return Err(Error::InvalidArgument(format!("{} is not irreducible", a.fmt_elem(&poly))));
        }
        Ok(PrimePoly { alpha: poly.coeffs().to_vec(), poly })
    }

    pub fn parse(a: &RingA, s: &str) -> Result<PrimePoly> {
        PrimePoly::new(a, a.parse_elem(s)?)
    }

    pub fn poly(&self) -> &PolyA {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.alpha.len() - 1
    }

    /// Reduction modulo `T`, i.e. the constant coefficient.
    pub fn residue(&self) -> FqElem {
        self.alpha[0]
    }

    /// All coefficients `alpha_0, ..., alpha_d` (with `alpha_d = 1`).
    pub fn alpha(&self) -> &[FqElem] {
        &self.alpha
    }

    pub fn alpha_i(&self, i: usize) -> FqElem {
        self.alpha.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    /// Whether this is the prime `T`.
    pub fn is_t(&self) -> bool {
        self.degree() == 1 && self.alpha[0] == FqElem::ZERO
    }
}

/// Monic polynomial of degree `d` whose lower coefficients are the base-`q`
/// digits of `index`.
pub fn monic_from_index(a: &RingA, d: usize, mut index: u64) -> PolyA {
    let q = a.base().q() as u64;
    let mut v = Vec::with_capacity(d + 1);
    for _ in 0..d {
        v.push(FqElem((index % q) as u32));
        index /= q;
    }
    v.push(FqElem::ONE);
    a.from_coeffs(v)
}

/// All monic polynomials of degree exactly `d`, in index order.
pub fn monic_polys(a: &RingA, d: usize) -> impl Iterator<Item = PolyA> + '_ {
    let count = (a.base().q() as u64).pow(d as u32);
    (0..count).map(move |i| monic_from_index(a, d, i))
}

fn distinct_prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Irreducibility over `F_q`: trial division by every monic polynomial of
/// degree at most `deg/2` for `deg <= 8`, otherwise Rabin's test based on
/// `T^{q^d} = T mod a`.
pub fn is_irreducible(a: &RingA, f: &PolyA) -> Result<bool> {
    let deg = match f.degree() {
        None | Some(0) => return Err(Error::DegreeZeroInput),
        Some(d) => d,
    };
    if deg == 1 {
        return Ok(true);
    }
    if deg <= 8 {
        for d in 1..=deg / 2 {
            for g in monic_polys(a, d) {
                if a.rem(f, &g)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        return Ok(true);
    }
    let f = a.monic(f);
    let q = a.base().q() as u128;
    let t = a.gen();
    let frob_power = |k: usize| -> Result<PolyA> {
        let mut x = a.rem(&t, &f)?;
        for _ in 0..k {
            x = a.pow_mod(&x, q, &f)?;
        }
        Ok(x)
    };
    if a.sub(&frob_power(deg)?, &a.rem(&t, &f)?) != a.zero() {
        return Ok(false);
    }
    for r in distinct_prime_factors(deg) {
        let h = a.sub(&frob_power(deg / r)?, &t);
        if !a.is_one(&a.gcd(&h, &f)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All monic irreducibles of degree exactly `d`, ordered by the coefficient
/// tuple read from `T^{d-1}` down to the constant term.
pub fn enumerate_monic_irreducibles(a: &RingA, d: usize, exclude_t: bool) -> Result<Vec<PrimePoly>> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let mut out = Vec::new();
    for f in monic_polys(a, d) {
        if exclude_t && d == 1 && a.base().is_zero(&f.coeffs()[0]) {
            continue;
        }
        if is_irreducible(a, &f)? {
            out.push(PrimePoly { alpha: f.coeffs().to_vec(), poly: f });
        }
    }
    Ok(out)
}

/// All primes `P != T` with `deg P <= max_degree`, by degree then index.
pub fn primes_up_to_degree(a: &RingA, max_degree: usize) -> Result<Vec<PrimePoly>> {
    let mut out = Vec::new();
    for d in 1..=max_degree {
        out.extend(enumerate_monic_irreducibles(a, d, true)?);
    }
    Ok(out)
}
