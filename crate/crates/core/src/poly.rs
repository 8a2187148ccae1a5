//! Dense univariate polynomials over any coefficient ring.
//!
//! `A = F_q[T]` is `PolyRing<Fq>` with variable `T`; Goss and minimal
//! polynomials are `PolyRing<RatField>` with variable `X`.

use crate::error::{Error, Result};
use crate::ring::{Field, Ring};
use crate::text;

/// Coefficients low degree first, never with trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing<R> {
    base: R,
    var: &'static str,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R, var: &'static str) -> Self {
        PolyRing { base, var }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn var(&self) -> &'static str {
        self.var
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<R::Elem>) -> Poly<R::Elem> {
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(&self, c: R::Elem) -> Poly<R::Elem> {
        self.from_coeffs(vec![c])
    }

    /// `c * var^n`.
    pub fn monomial(&self, c: R::Elem, n: usize) -> Poly<R::Elem> {
        let mut v = vec![self.base.zero(); n + 1];
        v[n] = c;
        self.from_coeffs(v)
    }

    /// The variable itself.
    pub fn gen(&self) -> Poly<R::Elem> {
        self.monomial(self.base.one(), 1)
    }

    pub fn coeff_or_zero(&self, f: &Poly<R::Elem>, i: usize) -> R::Elem {
        f.coeffs.get(i).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn is_monic(&self, f: &Poly<R::Elem>) -> bool {
        f.leading().is_some_and(|c| self.base.is_one(c))
    }

    pub fn scale(&self, f: &Poly<R::Elem>, c: &R::Elem) -> Poly<R::Elem> {
        self.from_coeffs(f.coeffs.iter().map(|x| self.base.mul(x, c)).collect())
    }

    /// Multiplies by `var^n`.
    pub fn shift(&self, f: &Poly<R::Elem>, n: usize) -> Poly<R::Elem> {
        if f.is_zero() {
            return f.clone();
        }
        let mut v = vec![self.base.zero(); n];
        v.extend(f.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn eval(&self, f: &Poly<R::Elem>, x: &R::Elem) -> R::Elem {
        let mut acc = self.base.zero();
        for c in f.coeffs.iter().rev() {
            acc = self.base.add(&self.base.mul(&acc, x), c);
        }
        acc
    }

    /// Formal derivative; coefficients `n * a_n` are taken in characteristic p.
    pub fn derivative(&self, f: &Poly<R::Elem>) -> Poly<R::Elem> {
        let p = self.base.characteristic();
        self.from_coeffs(
            f.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| self.base.mul(&self.base.from_int((n as u64 % p) as i64), c))
                .collect(),
        )
    }

    /// Applies a coefficient map into another ring.
    pub fn map<S: Ring>(
        &self,
        f: &Poly<R::Elem>,
        target: &PolyRing<S>,
        mut g: impl FnMut(&R::Elem) -> S::Elem,
    ) -> Poly<S::Elem> {
        target.from_coeffs(f.coeffs.iter().map(&mut g).collect())
    }
}

impl<F: Field> PolyRing<F> {
    pub fn monic(&self, f: &Poly<F::Elem>) -> Poly<F::Elem> {
        match f.leading() {
            None => f.clone(),
            Some(c) if self.base.is_one(c) => f.clone(),
            Some(c) => {
                let inv = self.base.inv(c).expect("leading coefficient is nonzero");
                self.scale(f, &inv)
            }
        }
    }

    /// Quotient and remainder with `deg rem < deg b`.
    pub fn divmod(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> Result<(Poly<F::Elem>, Poly<F::Elem>)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        if a.coeffs.len() <= db {
            return Ok((self.zero(), a.clone()));
        }
        let lead_inv = self.base.inv(b.leading().unwrap())?;
        let mut rem = a.coeffs.clone();
        let mut quot = vec![self.base.zero(); a.coeffs.len() - db];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + db];
            if self.base.is_zero(c) {
                continue;
            }
            let factor = self.base.mul(c, &lead_inv);
            for (j, bj) in b.coeffs.iter().enumerate() {
                if self.base.is_zero(bj) {
                    continue;
                }
                let t = self.base.mul(&factor, bj);
                self.base.sub_assign(&mut rem[i + j], &t);
            }
            quot[i] = factor;
        }
        rem.truncate(db);
        Ok((self.from_coeffs(quot), self.from_coeffs(rem)))
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Result<Poly<F::Elem>> {
        Ok(self.divmod(a, b)?.1)
    }

    /// Exact division; panics in debug builds if `b` does not divide `a`.
    pub fn div_exact(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let (q, r) = self.divmod(a, b).expect("divisor is nonzero");
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd.
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Result<Poly<F::Elem>> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y)?;
            x = y;
            y = r;
        }
        Ok(self.monic(&x))
    }

    /// Monic lcm of two nonzero polynomials.
    pub fn lcm(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Result<Poly<F::Elem>> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroInput);
        }
        let g = self.gcd(a, b)?;
        Ok(self.monic(&self.mul(&self.div_exact(a, &g), b)))
    }

    /// `base^e mod modulus`.
    pub fn pow_mod(
        &self,
        base: &Poly<F::Elem>,
        mut e: u128,
        modulus: &Poly<F::Elem>,
    ) -> Result<Poly<F::Elem>> {
        let mut b = self.rem(base, modulus)?;
        let mut acc = self.rem(&self.one(), modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &b), modulus)?;
            }
            e >>= 1;
            if e > 0 {
                b = self.rem(&self.mul(&b, &b), modulus)?;
            }
        }
        Ok(acc)
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Poly { coeffs: Vec::new() }
    }

    fn one(&self) -> Self::Elem {
        self.from_coeffs(vec![self.base.one()])
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.coeffs.is_empty()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        a.coeffs.len() == 1 && self.base.is_one(&a.coeffs[0])
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let (long, short) = if a.coeffs.len() >= b.coeffs.len() { (a, b) } else { (b, a) };
        let mut v = long.coeffs.clone();
        for (x, y) in v.iter_mut().zip(&short.coeffs) {
            self.base.add_assign(x, y);
        }
        self.from_coeffs(v)
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        if a.coeffs.len() < b.coeffs.len() {
            a.coeffs.resize(b.coeffs.len(), self.base.zero());
        }
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            self.base.add_assign(x, y);
        }
        while a.coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            a.coeffs.pop();
        }
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (a.coeffs.get(i), b.coeffs.get(i)) {
                (Some(x), Some(y)) => self.base.sub(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => self.base.neg(y),
                (None, None) => unreachable!(),
            });
        }
        self.from_coeffs(v)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Poly { coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect() }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        if a.coeffs.len() == 1 {
            return self.scale(b, &a.coeffs[0]);
        }
        if b.coeffs.len() == 1 {
            return self.scale(a, &b.coeffs[0]);
        }
        self.from_coeffs(self.base.poly_mul(&a.coeffs, &b.coeffs))
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.constant(self.base.from_int(n))
    }

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn fmt_elem(&self, a: &Self::Elem) -> String {
        text::format_terms(
            a.coeffs
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !self.base.is_zero(c))
                .map(|(i, c)| (self.base.fmt_elem(c), self.base.needs_parens(c), i as u64)),
            self.var,
        )
    }

    fn needs_parens(&self, a: &Self::Elem) -> bool {
        let nonzero = a.coeffs.iter().filter(|c| !self.base.is_zero(c)).count();
        nonzero > 1
            || (nonzero == 1 && a.coeffs.len() == 1 && self.base.needs_parens(&a.coeffs[0]))
    }

    fn sum_of_products<'a, I>(&self, pairs: I) -> Self::Elem
    where
        I: IntoIterator<Item = (&'a Self::Elem, &'a Self::Elem)>,
        Self::Elem: 'a,
    {
        self.from_coeffs(
            self.base
                .poly_sum_of_products(pairs.into_iter().map(|(a, b)| (a.coeffs(), b.coeffs()))),
        )
    }

    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.coeffs.len() == 1 {
            self.base.unit_inverse(&a.coeffs[0]).map(|c| self.constant(c))
        } else {
            None
        }
    }

    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        let p = self.base.characteristic() as usize;
        if a.is_zero() {
            return self.zero();
        }
        let mut v = vec![self.base.zero(); (a.coeffs.len() - 1) * p + 1];
        for (i, c) in a.coeffs.iter().enumerate() {
            v[i * p] = self.base.frobenius(c);
        }
        self.from_coeffs(v)
    }
}

/// Parsing from the polynomial grammar.
pub trait Parse: Ring {
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
}

impl Parse for crate::ffield::Fq {
    fn parse_elem(&self, s: &str) -> Result<Self::Elem> {
        self.parse(s)
    }
}

impl<R: Parse> Parse for PolyRing<R> {
    fn parse_elem(&self, s: &str) -> Result<Self::Elem> {
        let mut acc = self.zero();
        for term in text::parse_sum(s, self.var)? {
            let c = match &term.coeff {
                Some(c) => self.base.parse_elem(c)?,
                None => self.base.one(),
            };
            let c = if term.negative { self.base.neg(&c) } else { c };
            acc = self.add(&acc, &self.monomial(c, term.exponent as usize));
        }
        Ok(acc)
    }
}
