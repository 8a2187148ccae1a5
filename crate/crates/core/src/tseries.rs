//! Truncated power series in the uniformizer `t`.
//!
//! A series carries coefficients `a_0..=a_N` and is known modulo `t^{N+1}`.
//! Binary operations return the smaller of the two precisions; nothing ever
//! raises precision implicitly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TSeries<E> {
    coeffs: Vec<E>,
}

/// JSON form: ordered coefficient strings plus the precision `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub coeffs: Vec<String>,
    pub prec: usize,
}

impl<E: Clone> TSeries<E> {
    /// Series from `a_0..=a_N`; the precision is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<E>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        TSeries { coeffs }
    }

    pub fn zero<R: Ring<Elem = E>>(r: &R, prec: usize) -> Self {
        TSeries { coeffs: vec![r.zero(); prec + 1] }
    }

    pub fn one<R: Ring<Elem = E>>(r: &R, prec: usize) -> Self {
        Self::constant(r, r.one(), prec)
    }

    pub fn constant<R: Ring<Elem = E>>(r: &R, c: E, prec: usize) -> Self {
        let mut s = Self::zero(r, prec);
        s.coeffs[0] = c;
        s
    }

    /// `c * t^n` known to `prec`.
    pub fn monomial<R: Ring<Elem = E>>(r: &R, c: E, n: usize, prec: usize) -> Self {
        let mut s = Self::zero(r, prec);
        if n <= prec {
            s.coeffs[n] = c;
        }
        s
    }

    pub fn from_poly<R: Ring<Elem = E>>(r: &R, p: &Poly<E>, prec: usize) -> Self {
        let mut s = Self::zero(r, prec);
        for (i, c) in p.coeffs().iter().enumerate().take(prec + 1) {
            s.coeffs[i] = c.clone();
        }
        s
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&E> {
        self.coeffs.get(n)
    }

    /// Drops coefficients above `prec` (no-op if already coarser).
    pub fn truncate(&self, prec: usize) -> Self {
        TSeries { coeffs: self.coeffs[..=prec.min(self.prec())].to_vec() }
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        self.coeffs.iter().all(|c| r.is_zero(c))
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation<R: Ring<Elem = E>>(&self, r: &R) -> Option<usize> {
        self.coeffs.iter().position(|c| !r.is_zero(c))
    }

    /// Equality of coefficients through `t^n` (both series must know them).
    pub fn agrees_to(&self, other: &Self, n: usize) -> bool
    where
        E: PartialEq,
    {
        n <= self.prec() && n <= other.prec() && self.coeffs[..=n] == other.coeffs[..=n]
    }

    pub fn map<F>(&self, mut f: impl FnMut(&E) -> F) -> TSeries<F> {
        TSeries { coeffs: self.coeffs.iter().map(&mut f).collect() }
    }

    pub fn try_map<F>(&self, mut f: impl FnMut(&E) -> Result<F>) -> Result<TSeries<F>> {
        Ok(TSeries { coeffs: self.coeffs.iter().map(&mut f).collect::<Result<_>>()? })
    }

    pub fn add<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        TSeries { coeffs: (0..=n).map(|i| r.add(&self.coeffs[i], &other.coeffs[i])).collect() }
    }

    pub fn sub<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        TSeries { coeffs: (0..=n).map(|i| r.sub(&self.coeffs[i], &other.coeffs[i])).collect() }
    }

    pub fn neg<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        TSeries { coeffs: self.coeffs.iter().map(|c| r.neg(c)).collect() }
    }

    pub fn scale<R: Ring<Elem = E>>(&self, r: &R, c: &E) -> Self {
        TSeries { coeffs: self.coeffs.iter().map(|x| r.mul(x, c)).collect() }
    }

    /// Truncated Cauchy product at the smaller precision.
    pub fn mul<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        let (a, b) = (&self.coeffs[..=n], &other.coeffs[..=n]);
        let a_lo = a.iter().position(|c| !r.is_zero(c));
        let b_lo = b.iter().position(|c| !r.is_zero(c));
        let (a_lo, b_lo) = match (a_lo, b_lo) {
            (Some(x), Some(y)) => (x, y),
            _ => return Self::zero(r, n),
        };
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            if k < a_lo + b_lo {
                out.push(r.zero());
                continue;
            }
            let pairs = (a_lo..=k - b_lo)
                .filter(|&i| !r.is_zero(&a[i]))
                .map(|i| (&a[i], &b[k - i]));
            out.push(r.sum_of_products(pairs));
        }
        TSeries { coeffs: out }
    }

    /// Multiplication by `t^n`; the precision grows by `n`.
    pub fn shift<R: Ring<Elem = E>>(&self, r: &R, n: usize) -> Self {
        let mut coeffs = vec![r.zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        TSeries { coeffs }
    }

    /// Inverse of a series whose constant term is a unit. Sparse inputs
    /// (few nonzero coefficients) cost `O(N * nnz)`.
    pub fn inv<R: Ring<Elem = E>>(&self, r: &R) -> Result<Self> {
        let c0_inv = r.unit_inverse(&self.coeffs[0]).ok_or(Error::NonUnit)?;
        let n = self.prec();
        let support: Vec<usize> =
            (1..=n).filter(|&i| !r.is_zero(&self.coeffs[i])).collect();
        let neg_inv = r.neg(&c0_inv);
        let mut out: Vec<E> = Vec::with_capacity(n + 1);
        out.push(c0_inv);
        for k in 1..=n {
            let pairs = support
                .iter()
                .take_while(|&&i| i <= k)
                .map(|&i| (&self.coeffs[i], &out[k - i]));
            let s = r.sum_of_products(pairs);
            let next = if r.is_zero(&s) { s } else { r.mul(&s, &neg_inv) };
            out.push(next);
        }
        Ok(TSeries { coeffs: out })
    }

    /// `f^p`, coefficientwise Frobenius spread to `t^{ip}`, at the precision of `f`.
    pub fn frobenius<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        let p = r.characteristic() as usize;
        let n = self.prec();
        let mut out = vec![r.zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i * p > n {
                break;
            }
            out[i * p] = r.frobenius(c);
        }
        TSeries { coeffs: out }
    }

    /// `f^e` by square-and-multiply, using Frobenius for the `p`-power part.
    pub fn pow<R: Ring<Elem = E>>(&self, r: &R, e: u64) -> Self {
        let p = r.characteristic();
        let mut m = e;
        let mut frob = 0;
        while m > 0 && m.is_multiple_of(p) {
            m /= p;
            frob += 1;
        }
        let mut acc = Self::one(r, self.prec());
        let mut base = self.clone();
        while m > 0 {
            if m & 1 == 1 {
                acc = acc.mul(r, &base);
            }
            m >>= 1;
            if m > 0 {
                base = base.mul(r, &base);
            }
        }
        for _ in 0..frob {
            acc = acc.frobenius(r);
        }
        acc
    }

    /// Evaluates a polynomial at a series with zero constant term (Horner).
    pub fn eval_poly<R: Ring<Elem = E>>(r: &R, poly: &Poly<E>, s: &Self) -> Result<Self> {
        if !r.is_zero(&s.coeffs[0]) {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = s.prec();
        let mut acc = Self::zero(r, n);
        for c in poly.coeffs().iter().rev() {
            acc = acc.mul(r, s);
            r.add_assign(&mut acc.coeffs[0], c);
        }
        Ok(acc)
    }

    /// `Theta = -t^2 d/dt`: `sum a_n t^n -> sum (-n) a_n t^{n+1}`. The
    /// precision grows by one.
    pub fn theta<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        let p = r.characteristic();
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(r.zero());
        for (n, c) in self.coeffs.iter().enumerate() {
            let factor = r.from_int(-((n as u64 % p) as i64));
            out.push(if r.is_zero(&factor) { r.zero() } else { r.mul(&factor, c) });
        }
        TSeries { coeffs: out }
    }

    /// Printed as `a0 + a1*t + ... + O(t^{N+1})`, omitting zero terms.
    pub fn display<R: Ring<Elem = E>>(&self, r: &R) -> String {
        let mut parts = Vec::new();
        for (n, c) in self.coeffs.iter().enumerate() {
            if r.is_zero(c) {
                continue;
            }
            let cs = r.fmt_elem(c);
            let cs = if r.needs_parens(c) { format!("({cs})") } else { cs };
            parts.push(match (n, cs.as_str()) {
                (0, _) => cs,
                (1, "1") => "t".to_string(),
                (_, "1") => format!("t^{n}"),
                (1, _) => format!("{cs}*t"),
                _ => format!("{cs}*t^{n}"),
            });
        }
        parts.push(format!("O(t^{})", self.prec() + 1));
        parts.join(" + ")
    }

    pub fn to_json<R: Ring<Elem = E>>(&self, r: &R) -> SeriesJson {
        SeriesJson { coeffs: self.coeffs.iter().map(|c| r.fmt_elem(c)).collect(), prec: self.prec() }
    }

    /// Coefficients as a polynomial in `t` (dropping the precision).
    pub fn to_poly<R: Ring<Elem = E>>(&self, pr: &PolyRing<R>) -> Poly<E> {
        pr.from_coeffs(self.coeffs.clone())
    }
}

impl<E: Clone> TSeries<E> {
    pub fn from_json<R>(r: &R, json: &SeriesJson) -> Result<Self>
    where
        R: crate::poly::Parse<Elem = E>,
    {
        if json.coeffs.len() != json.prec + 1 {
            return Err(Error::Parse("coefficient count must be prec + 1".into()));
        }
        let coeffs = json.coeffs.iter().map(|s| r.parse_elem(s)).collect::<Result<Vec<_>>>()?;
        Ok(TSeries { coeffs })
    }
}
