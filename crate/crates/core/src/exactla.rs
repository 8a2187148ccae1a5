//! Exact dense linear algebra: matrices over any ring, minimal polynomials
//! and separability over a field.

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};
use crate::ring::{Field, Ring};

/// A square matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: Vec<Vec<E>>,
}

impl<E: Clone> Matrix<E> {
    pub fn new(rows: Vec<Vec<E>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
        }
        Ok(Matrix { rows })
    }

    pub fn zero<R: Ring<Elem = E>>(r: &R, n: usize) -> Self {
        Matrix { rows: vec![vec![r.zero(); n]; n] }
    }

    pub fn identity<R: Ring<Elem = E>>(r: &R, n: usize) -> Self {
        Self::scalar(r, n, r.one())
    }

    pub fn scalar<R: Ring<Elem = E>>(r: &R, n: usize, c: E) -> Self {
        let mut m = Self::zero(r, n);
        for i in 0..n {
            m.rows[i][i] = c.clone();
        }
        m
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<E>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.rows[i][j]
    }

    pub fn map<F>(&self, mut f: impl FnMut(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows.iter().map(|r| r.iter().map(&mut f).collect()).collect() }
    }

    pub fn transpose(&self) -> Self {
        let n = self.n();
        Matrix { rows: (0..n).map(|j| (0..n).map(|i| self.rows[i][j].clone()).collect()).collect() }
    }

    pub fn add<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        Matrix {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| r.add(x, y)).collect())
                .collect(),
        }
    }

    /// `M + c I`.
    pub fn add_scalar<R: Ring<Elem = E>>(&self, r: &R, c: &E) -> Self {
        let mut m = self.clone();
        for i in 0..self.n() {
            m.rows[i][i] = r.add(&m.rows[i][i], c);
        }
        m
    }

    pub fn scale<R: Ring<Elem = E>>(&self, r: &R, c: &E) -> Self {
        self.map(|x| r.mul(x, c))
    }

    pub fn mul<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        let n = self.n();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| r.sum_of_products((0..n).map(|l| (&self.rows[i][l], &other.rows[l][j]))))
                    .collect()
            })
            .collect();
        Matrix { rows }
    }

    pub fn mul_vec<R: Ring<Elem = E>>(&self, r: &R, v: &[E]) -> Vec<E> {
        self.rows.iter().map(|row| r.sum_of_products(row.iter().zip(v))).collect()
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        self.rows.iter().flatten().all(|x| r.is_zero(x))
    }

    /// Zero strictly above the diagonal.
    pub fn is_lower_triangular<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        self.rows.iter().enumerate().all(|(i, row)| row[i + 1..].iter().all(|x| r.is_zero(x)))
    }

    /// `f(M)` by Horner's rule.
    pub fn eval_poly<R: Ring<Elem = E>>(&self, r: &R, f: &Poly<E>) -> Self {
        let n = self.n();
        let mut acc = Self::zero(r, n);
        for c in f.coeffs().iter().rev() {
            acc = acc.mul(r, self).add_scalar(r, c);
        }
        acc
    }
}

/// `M^n = 0`, tested by squaring until the exponent reaches `n`.
pub fn is_nilpotent<R: Ring>(r: &R, m: &Matrix<R::Elem>) -> bool {
    let mut p = m.clone();
    let mut e = 1usize;
    while e < m.n() {
        if p.is_zero(r) {
            return true;
        }
        p = p.mul(r, &p);
        e *= 2;
    }
    p.is_zero(r)
}

/// Monic generator of the annihilator of `v` under `M`, by reducing the
/// Krylov vectors `v, Mv, M^2 v, ...` against an echelon basis.
pub fn local_minimal_polynomial<F: Field>(
    f: &F,
    px: &PolyRing<F>,
    m: &Matrix<F::Elem>,
    v: &[F::Elem],
) -> Result<Poly<F::Elem>> {
    // (pivot, reduced vector with 1 at pivot, its polynomial in M)
    let mut echelon: Vec<(usize, Vec<F::Elem>, Poly<F::Elem>)> = Vec::new();
    let mut raw = v.to_vec();
    let mut k = 0usize;
    loop {
        let mut vec = raw.clone();
        let mut coeff = px.monomial(f.one(), k);
        for (pivot, w, c) in &echelon {
            let factor = vec[*pivot].clone();
            if f.is_zero(&factor) {
                continue;
            }
            for (x, y) in vec.iter_mut().zip(w) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
            coeff = px.sub(&coeff, &px.scale(c, &factor));
        }
        match vec.iter().position(|x| !f.is_zero(x)) {
            None => return Ok(px.monic(&coeff)),
            Some(pivot) => {
                let inv = f.inv(&vec[pivot])?;
                let w: Vec<F::Elem> = vec.iter().map(|x| f.mul(x, &inv)).collect();
                echelon.push((pivot, w, px.scale(&coeff, &inv)));
            }
        }
        raw = m.mul_vec(f, &raw);
        k += 1;
    }
}

/// Minimal polynomial of `M`: the lcm of the local minimal polynomials of
/// the standard basis vectors, verified by `mu(M) = 0` before returning.
pub fn minimal_polynomial<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<Poly<F::Elem>> {
    let px = PolyRing::new(f.clone(), "X");
    let n = m.n();
    let mut mu = px.one();
    for i in 0..n {
        let mut e = vec![f.zero(); n];
        e[i] = f.one();
        if n > 0 && mu_annihilates(f, m, &mu, &e) {
            continue;
        }
        let local = local_minimal_polynomial(f, &px, m, &e)?;
        mu = px.lcm(&mu, &local)?;
    }
    if !m.eval_poly(f, &mu).is_zero(f) {
        return Err(Error::StructureViolation("minimal polynomial does not annihilate the matrix".into()));
    }
    Ok(mu)
}

fn mu_annihilates<F: Field>(f: &F, m: &Matrix<F::Elem>, mu: &Poly<F::Elem>, v: &[F::Elem]) -> bool {
    let mut acc = vec![f.zero(); v.len()];
    for c in mu.coeffs().iter().rev() {
        acc = m.mul_vec(f, &acc);
        for (x, y) in acc.iter_mut().zip(v) {
            *x = f.add(x, &f.mul(c, y));
        }
    }
    acc.iter().all(|x| f.is_zero(x))
}

/// `d/dX` in characteristic `p`.
pub fn formal_derivative<F: Field>(px: &PolyRing<F>, mu: &Poly<F::Elem>) -> Poly<F::Elem> {
    px.derivative(mu)
}

/// `gcd(mu, mu') = 1`.
pub fn is_separable<F: Field>(px: &PolyRing<F>, mu: &Poly<F::Elem>) -> Result<bool> {
    match mu.degree() {
        None | Some(0) => Err(Error::DegreeZero),
        Some(_) => {
            let d = formal_derivative(px, mu);
            if d.is_zero() {
                return Ok(false);
            }
            Ok(px.gcd(mu, &d)?.degree() == Some(0))
        }
    }
}
