//! Ring and field interfaces.
//!
//! Elements are plain data; all arithmetic goes through a ring object that
//! carries the configuration (the finite field tables, the coefficient ring of
//! a polynomial ring, ...). The same series and polynomial code therefore runs
//! over `F_q`, `A = F_q[T]` and `K = F_q(T)`.

use std::fmt::Debug;

use crate::error::Result;

pub trait Ring: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Image of an integer under `Z -> R`.
    fn from_int(&self, n: i64) -> Self::Elem;

    /// The characteristic `p` (all rings here have positive characteristic).
    fn characteristic(&self) -> u64;

    fn fmt_elem(&self, a: &Self::Elem) -> String;

    /// Whether the printed form of `a` needs parentheses when used as a
    /// coefficient of a monomial.
    fn needs_parens(&self, a: &Self::Elem) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn sub_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.sub(a, b);
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `a^p`. Rings with a cheaper Frobenius override this.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.characteristic())
    }

    /// Product of two dense coefficient vectors (low degree first). The result
    /// has length `a.len() + b.len() - 1` and may carry trailing zeros.
    fn poly_mul(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if self.is_zero(y) {
                    continue;
                }
                let prod = self.mul(x, y);
                self.add_assign(&mut out[i + j], &prod);
            }
        }
        out
    }

    /// `sum a * b` over the given pairs.
    fn sum_of_products<'a, I>(&self, pairs: I) -> Self::Elem
    where
        I: IntoIterator<Item = (&'a Self::Elem, &'a Self::Elem)>,
        Self::Elem: 'a,
    {
        let mut acc = self.zero();
        for (x, y) in pairs {
            if self.is_zero(x) || self.is_zero(y) {
                continue;
            }
            let prod = self.mul(x, y);
            self.add_assign(&mut acc, &prod);
        }
        acc
    }

    /// `sum a * b` for pairs of dense coefficient vectors; the fused inner
    /// loop of series products over a polynomial ring. May carry trailing
    /// zeros.
    fn poly_sum_of_products<'a, I>(&self, pairs: I) -> Vec<Self::Elem>
    where
        I: IntoIterator<Item = (&'a [Self::Elem], &'a [Self::Elem])>,
        Self::Elem: 'a,
    {
        let mut acc: Vec<Self::Elem> = Vec::new();
        for (a, b) in pairs {
            let prod = self.poly_mul(a, b);
            if acc.len() < prod.len() {
                acc.resize(prod.len(), self.zero());
            }
            for (slot, x) in acc.iter_mut().zip(&prod) {
                self.add_assign(slot, x);
            }
        }
        acc
    }

    /// Inverse of `a` if it is a unit of the ring.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
}

pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}
