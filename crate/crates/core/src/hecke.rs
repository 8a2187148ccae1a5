//! Hecke operators on `t`-expansions:
//! `T_P f = P^k sum a_n t_P^n + sum a_n G_{n,P}(P t)`,
//! exact Hecke matrices, their reductions mod `T`, and the structure checks
//! built on them.

use serde::Serialize;

use crate::carlitz::{carlitz_phi, goss_mod_t_truncated, goss_sum, t_from_phi};
use crate::error::{Error, Result};
use crate::exactla::{is_nilpotent, Matrix};
use crate::ffield::{Fq, FqElem};
use crate::modforms::{decompose, mod_t_exponents, monomial_basis, monomial_series, type_rep, BasisMonomial, FormCache};
use crate::polyring::{enumerate_monic_irreducibles, PolyA, PrimePoly, RatField, RatK, RingA};
use crate::ring::{Field, Ring};
use crate::tseries::TSeries;

/// Input precision needed for output through `t^{n_out}`: `a_n` with
/// `n > (n_out - 1) q^d + 1` cannot reach those terms.
pub fn required_input_precision(n_out: usize, q: u64, d: usize) -> usize {
    if n_out == 0 {
        0
    } else {
        (n_out - 1) * q.pow(d as u32) as usize + 1
    }
}

/// `T_P` over a coefficient ring: `A`, `K`, or `F_q` after reduction mod `T`.
#[derive(Clone, Debug)]
pub struct HeckeOp<R: Ring> {
    ring: R,
    /// Coefficients of `phi_P` in `R`; `phi[0]` is the image of `P`.
    phi: Vec<R::Elem>,
    q: u64,
    prime: PrimePoly,
}

impl HeckeOp<RingA> {
    pub fn over_a(a: &RingA, prime: &PrimePoly) -> Self {
        let phi = carlitz_phi(a, prime.poly()).expect("primes are nonzero");
        HeckeOp { ring: a.clone(), phi: phi.coeffs().to_vec(), q: a.base().q() as u64, prime: prime.clone() }
    }
}

impl HeckeOp<RatField> {
    pub fn over_k(k: &RatField, prime: &PrimePoly) -> Self {
        let phi = carlitz_phi(k.ring(), prime.poly()).expect("primes are nonzero");
        HeckeOp {
            ring: k.clone(),
            phi: phi.coeffs().iter().map(|c| k.from_poly(c.clone())).collect(),
            q: k.fq().q() as u64,
            prime: prime.clone(),
        }
    }
}

impl HeckeOp<Fq> {
    /// The reduction of `T_P` at `T = 0`, with `phi_P mod T = sum alpha_i z^{q^i}`.
    pub fn mod_t(fq: &Fq, prime: &PrimePoly) -> Result<Self> {
        if prime.is_t() {
            return Err(Error::TIsExcluded);
        }
        Ok(HeckeOp { ring: fq.clone(), phi: prime.alpha().to_vec(), q: fq.q() as u64, prime: prime.clone() })
    }
}

impl<R: Ring> HeckeOp<R> {
    pub fn prime(&self) -> &PrimePoly {
        &self.prime
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn required_input_precision(&self, n_out: usize) -> usize {
        required_input_precision(n_out, self.q, self.prime.degree())
    }

    /// `T_{P,k} f` through `t^{n_out}`.
    pub fn apply(&self, f: &TSeries<R::Elem>, k: u64, n_out: usize) -> Result<TSeries<R::Elem>> {
        let r = &self.ring;
        let needed = self.required_input_precision(n_out);
        if f.prec() < needed {
            return Err(Error::InsufficientPrecision { needed, have: f.prec() });
        }
        let mut out = goss_sum(r, &self.phi, self.q, f.coeffs(), n_out);
        let qd = self.q.pow(self.prime.degree() as u32) as usize;
        let t_p = t_from_phi(r, &self.phi, self.q, n_out)?;
        let mut first = TSeries::zero(r, n_out);
        let mut power = TSeries::one(r, n_out);
        for n in 0..=(n_out / qd) {
            if n > 0 {
                power = power.mul(r, &t_p);
            }
            let a_n = &f.coeffs()[n];
            if !r.is_zero(a_n) {
                first = first.add(r, &power.scale(r, a_n));
            }
        }
        let pk = r.pow(&self.phi[0], k);
        for (slot, x) in out.iter_mut().zip(first.coeffs()) {
            if !r.is_zero(x) {
                *slot = r.add(slot, &r.mul(x, &pk));
            }
        }
        Ok(TSeries::from_coeffs(out))
    }
}

/// `hecke_on_series` over `K`.
pub fn hecke_on_series(field: &RatField, f: &TSeries<RatK>, k: u64, prime: &PrimePoly, n_out: usize) -> Result<TSeries<RatK>> {
    HeckeOp::over_k(field, prime).apply(f, k, n_out)
}

/// Matrix of `T_P` on `M_{k,m}` in the basis `g^i h^j`. Column `c` holds the
/// coordinates of the image of basis element `c`. Entries lie in `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeMatrix {
    pub q: u64,
    pub k: u64,
    pub m: u64,
    pub prime: PrimePoly,
    pub basis: Vec<BasisMonomial>,
    pub entries: Matrix<PolyA>,
}

impl HeckeMatrix {
    pub fn over_k(&self, field: &RatField) -> Matrix<RatK> {
        self.entries.map(|c| field.from_poly(c.clone()))
    }
}

fn empty_basis(q: u64, k: u64, m: u64) -> Error {
    Error::InvalidArgument(format!("M_{{{k},{m}}} is zero for q = {q}"))
}

/// Exact Hecke matrix, read off at output precision `j_max`.
pub fn hecke_matrix(cache: &FormCache, k: u64, m: u64, prime: &PrimePoly) -> Result<HeckeMatrix> {
    let q = cache.q();
    let basis = monomial_basis(q, k, m);
    let Some(j_max) = basis.last().map(|b| b.j) else {
        return Err(empty_basis(q, k, m));
    };
    hecke_matrix_at(cache, k, m, prime, j_max)
}

/// As [`hecke_matrix`], with output precision `n_out >= j_max`; the extra
/// terms are covered by the residual check of the decomposition.
pub fn hecke_matrix_at(cache: &FormCache, k: u64, m: u64, prime: &PrimePoly, n_out: usize) -> Result<HeckeMatrix> {
    let a = cache.ring();
    let q = cache.q();
    let op = HeckeOp::over_a(a, prime);
    let series = cache.basis_series(k, m, op.required_input_precision(n_out).max(n_out))?;
    if series.is_empty() {
        return Err(empty_basis(q, k, m));
    }
    let dec_basis: Vec<(usize, TSeries<PolyA>)> = series.iter().map(|(b, s)| (b.j, s.truncate(n_out))).collect();
    let n = series.len();
    let mut cols = Vec::with_capacity(n);
    for (_, s) in &series {
        let image = op.apply(s, k, n_out)?;
        cols.push(decompose(a, &image, &dec_basis)?);
    }
    let rows = (0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect();
    Ok(HeckeMatrix {
        q,
        k,
        m: type_rep(q, m as i64),
        prime: prime.clone(),
        basis: series.into_iter().map(|(b, _)| b).collect(),
        entries: Matrix::new(rows)?,
    })
}

/// `T_P` on `M_{k,m}` reduced mod `T`, on the basis `h~^j`. Row `r` holds the
/// coordinates of the image of `h~^{j_r}`, so the matrix is lower triangular.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModTHeckeMatrix {
    pub q: u64,
    pub k: u64,
    pub m: u64,
    #[serde(skip)]
    pub prime: PrimePoly,
    pub exponents: Vec<usize>,
    #[serde(skip)]
    pub entries: Matrix<FqElem>,
    /// `P~^m`, the constant diagonal.
    #[serde(skip)]
    pub diagonal: FqElem,
}

/// `h mod T` at a fixed precision, shared by all mod-`T` Hecke computations.
#[derive(Clone, Debug)]
pub struct ModTCache {
    fq: Fq,
    h: TSeries<FqElem>,
}

impl ModTCache {
    /// Reduces `h` computed over `A`.
    pub fn from_forms(cache: &FormCache) -> Self {
        let a = cache.ring();
        let h = cache.h(cache.prec()).expect("within cache precision");
        ModTCache { fq: a.base().clone(), h: h.num().map(|c| a.eval(c, &FqElem::ZERO)) }
    }

    /// `h mod T` built directly over `F_q`.
    pub fn direct(fq: &Fq, prec: usize) -> Self {
        ModTCache { fq: fq.clone(), h: crate::modforms::h_mod_t_direct(fq, prec) }
    }

    /// Precision needed for every `(k, m)` with `k <= k_max` and primes of degree `<= d_max`.
    pub fn precision_for(q: u64, k_max: u64, d_max: usize) -> usize {
        let j_max = (k_max / (q + 1)) as usize;
        required_input_precision(j_max.max(1), q, d_max)
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }

    pub fn prec(&self) -> usize {
        self.h.prec()
    }

    pub fn h(&self) -> &TSeries<FqElem> {
        &self.h
    }

    fn h_powers(&self, exps: &[usize], prec: usize) -> Result<Vec<(usize, TSeries<FqElem>)>> {
        if prec > self.prec() {
            return Err(Error::InsufficientPrecision { needed: prec, have: self.prec() });
        }
        let h = self.h.truncate(prec);
        Ok(exps.iter().map(|&j| (j, h.pow(&self.fq, j as u64))).collect())
    }
}

/// Mod-`T` Hecke matrix: reduction mod `T` commutes with the Hecke formula
/// (no divisions occur), so `h~` is reduced first and the whole pipeline runs
/// over `F_q`. Lower triangularity with diagonal `P~^m` is enforced.
pub fn hecke_matrix_mod_t(cache: &ModTCache, k: u64, m: u64, prime: &PrimePoly) -> Result<ModTHeckeMatrix> {
    let fq = cache.fq();
    let op = HeckeOp::mod_t(fq, prime)?;
    let q = fq.q() as u64;
    let exps = mod_t_exponents(q, k, m);
    let Some(&j_max) = exps.last() else {
        return Err(empty_basis(q, k, m));
    };
    let powers = cache.h_powers(&exps, op.required_input_precision(j_max).max(j_max))?;
    let dec: Vec<(usize, TSeries<FqElem>)> = powers.iter().map(|(j, s)| (*j, s.truncate(j_max))).collect();
    let rows = powers
        .iter()
        .map(|(_, s)| decompose(fq, &op.apply(s, k, j_max)?, &dec))
        .collect::<Result<Vec<_>>>()?;
    finish_mod_t(fq, k, m, prime, exps, Matrix::new(rows)?)
}

fn finish_mod_t(
    fq: &Fq,
    k: u64,
    m: u64,
    prime: &PrimePoly,
    exponents: Vec<usize>,
    entries: Matrix<FqElem>,
) -> Result<ModTHeckeMatrix> {
    let q = fq.q() as u64;
    let m = type_rep(q, m as i64);
    let diagonal = fq.pow(&prime.residue(), m);
    if !entries.is_lower_triangular(fq) {
        return Err(Error::StructureViolation(format!(
            "mod-T Hecke matrix for {} on M_{{{k},{m}}} is not lower triangular",
            prime_text(fq, prime)
        )));
    }
    if (0..entries.n()).any(|i| entries.get(i, i) != &diagonal) {
        return Err(Error::StructureViolation(format!(
            "mod-T Hecke matrix for {} on M_{{{k},{m}}} has a diagonal entry different from P~^m",
            prime_text(fq, prime)
        )));
    }
    Ok(ModTHeckeMatrix { q, k, m, prime: prime.clone(), exponents, entries, diagonal })
}

fn prime_text(fq: &Fq, p: &PrimePoly) -> String {
    crate::polyring::ring_a(fq).fmt_elem(p.poly())
}

/// Independent mod-`T` route: `h~` from `phi_a mod T` and the Goss sum from
/// the multinomial closed form of `G_{n,P} mod T`.
pub fn hecke_matrix_mod_t_independent(fq: &Fq, h_direct: &TSeries<FqElem>, k: u64, m: u64, prime: &PrimePoly) -> Result<ModTHeckeMatrix> {
    let q = fq.q() as u64;
    let exps = mod_t_exponents(q, k, m);
    let Some(&j_max) = exps.last() else {
        return Err(empty_basis(q, k, m));
    };
    let need = required_input_precision(j_max, q, prime.degree()).max(j_max);
    if h_direct.prec() < need {
        return Err(Error::InsufficientPrecision { needed: need, have: h_direct.prec() });
    }
    let h = h_direct.truncate(need);
    let goss: Vec<Vec<FqElem>> = (1..=need)
        .map(|n| goss_mod_t_truncated(fq, prime, n, j_max).map(|p| p.coeffs().to_vec()))
        .collect::<Result<_>>()?;
    let wp0 = prime.residue();
    let wp_pows: Vec<FqElem> = (0..=j_max).map(|s| fq.pow(&wp0, s as u64)).collect();
    let t_p = t_from_phi(fq, prime.alpha(), q, j_max)?;
    let qd = q.pow(prime.degree() as u32) as usize;
    let pk = fq.pow(&wp0, k);
    let mut rows = Vec::new();
    let dec: Vec<(usize, TSeries<FqElem>)> = exps.iter().map(|&j| (j, h.truncate(j_max).pow(fq, j as u64))).collect();
    for &j in &exps {
        let f = h.pow(fq, j as u64);
        let mut out = vec![fq.zero(); j_max + 1];
        for n in 1..=need {
            let a_n = f.coeffs()[n];
            if fq.is_zero(&a_n) {
                continue;
            }
            // G_n(P~ t) = sum_s [X^s]G_n P~^s t^s
            for (s, c) in goss[n - 1].iter().enumerate().take(j_max + 1) {
                if !fq.is_zero(c) {
                    out[s] = fq.add(&out[s], &fq.mul(&a_n, &fq.mul(c, &wp_pows[s])));
                }
            }
        }
        let mut power = TSeries::one(fq, j_max);
        for n in 0..=(j_max / qd) {
            if n > 0 {
                power = power.mul(fq, &t_p);
            }
            let a_n = f.coeffs()[n];
            for (slot, x) in out.iter_mut().zip(power.coeffs()) {
                *slot = fq.add(slot, &fq.mul(&pk, &fq.mul(&a_n, x)));
            }
        }
        rows.push(decompose(fq, &TSeries::from_coeffs(out), &dec)?);
    }
    finish_mod_t(fq, k, m, prime, exps, Matrix::new(rows)?)
}

/// Coordinates `(j, c_j)` of `T_P h~^n` on the `h~`-basis of weight `n(q+1)`.
/// The coordinate on `h~^n` is checked to equal `P~^n`.
pub fn hecke_mod_t_on_power(cache: &ModTCache, n: usize, prime: &PrimePoly) -> Result<Vec<(usize, FqElem)>> {
    let fq = cache.fq();
    let op = HeckeOp::mod_t(fq, prime)?;
    let q = fq.q() as u64;
    let k = n as u64 * (q + 1);
    let exps = mod_t_exponents(q, k, n as u64);
    let powers = cache.h_powers(&exps, op.required_input_precision(n).max(n))?;
    let dec: Vec<(usize, TSeries<FqElem>)> = powers.iter().map(|(j, s)| (*j, s.truncate(n))).collect();
    let source = &powers.last().expect("h^n is in its own basis").1;
    let coords = decompose(fq, &op.apply(source, k, n)?, &dec)?;
    if coords.last() != Some(&fq.pow(&prime.residue(), n as u64)) {
        return Err(Error::StructureViolation(format!("leading coordinate of T h^{n} differs from P~^{n}")));
    }
    Ok(exps.into_iter().zip(coords).collect())
}

/// Outcome of an exact eigenvector test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EigenVerdict {
    Eigenform { eigenvalue: RatK },
    /// `Mv` is not proportional to `v`; `index` is the first coordinate that
    /// breaks proportionality.
    NotEigenform { index: usize },
}

/// Tests `M v = lambda v` exactly over `K`.
pub fn eigenform_check(field: &RatField, matrix: &HeckeMatrix, coords: &[RatK]) -> Result<EigenVerdict> {
    let m = matrix.over_k(field);
    if coords.len() != m.n() {
        return Err(Error::DimensionMismatch { expected: m.n(), got: coords.len() });
    }
    let Some(i0) = coords.iter().position(|c| !field.is_zero(c)) else {
        return Err(Error::ZeroVector);
    };
    let image = m.mul_vec(field, coords);
    let lambda = field.div(&image[i0], &coords[i0])?;
    match (0..coords.len()).find(|&i| image[i] != field.mul(&lambda, &coords[i])) {
        None => Ok(EigenVerdict::Eigenform { eigenvalue: lambda }),
        Some(index) => Ok(EigenVerdict::NotEigenform { index }),
    }
}

/// Product of mod-`T` Hecke matrices for `q-1` primes with pairwise distinct
/// nonzero residues. Its diagonal is `prod_c c^m = (-1)^m`, so it is
/// `(-1)^m I` plus a nilpotent matrix.
pub fn hecke_product_mod_t(cache: &ModTCache, primes: &[PrimePoly], k: u64, m: u64) -> Result<Matrix<FqElem>> {
    let fq = cache.fq();
    let q = fq.q() as usize;
    if primes.len() != q - 1 {
        return Err(Error::WrongCount { expected: q - 1, got: primes.len() });
    }
    if primes.iter().any(|p| p.is_t()) {
        return Err(Error::TIsExcluded);
    }
    let mut residues: Vec<u32> = primes.iter().map(|p| p.residue().0).collect();
    residues.sort_unstable();
    residues.dedup();
    if residues.len() != primes.len() {
        return Err(Error::ResiduesNotDistinct);
    }
    let mut product: Option<Matrix<FqElem>> = None;
    for p in primes {
        let mt = hecke_matrix_mod_t(cache, k, m, p)?.entries;
        product = Some(match product {
            None => mt,
            Some(acc) => acc.mul(fq, &mt),
        });
    }
    Ok(product.expect("at least one prime when q > 1"))
}

/// Whether `M + I` is nilpotent.
pub fn is_minus_identity_plus_nilpotent(fq: &Fq, m: &Matrix<FqElem>) -> bool {
    is_nilpotent(fq, &m.add_scalar(fq, &fq.one()))
}

/// `P * Theta(T_{P,k} f) = T_{P,k+2}(Theta f)` through `t^{n_out}`.
pub fn commutation_check(a: &RingA, f: &TSeries<PolyA>, k: u64, prime: &PrimePoly, n_out: usize) -> Result<bool> {
    let op = HeckeOp::over_a(a, prime);
    let left = op.apply(f, k, n_out.saturating_sub(1))?.theta(a).scale(a, prime.poly());
    let right = op.apply(&f.theta(a), k + 2, n_out)?;
    Ok(left.truncate(n_out) == right.truncate(n_out))
}

/// Factorization of a monic polynomial by trial division.
pub fn factor_monic(a: &RingA, f: &PolyA) -> Result<Vec<(PrimePoly, u32)>> {
    if f.is_zero() || !a.is_monic(f) {
        return Err(Error::NotMonic);
    }
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        for p in enumerate_monic_irreducibles(a, d, false)? {
            let mut e = 0;
            loop {
                let (quo, rem) = a.divmod(&rest, p.poly())?;
                if !rem.is_zero() {
                    break;
                }
                rest = quo;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push((PrimePoly::new(a, rest)?, 1));
    }
    out.sort_by_key(|(p, _)| (p.degree(), p.alpha().iter().rev().map(|c| c.0).collect::<Vec<_>>()));
    Ok(out)
}

/// `T_a f` for monic `a`, as the product of `T_P^e` over the prime powers
/// `P^e` exactly dividing `a`.
pub fn hecke_composite(a: &RingA, f: &TSeries<PolyA>, poly: &PolyA, k: u64, n_out: usize) -> Result<TSeries<PolyA>> {
    let mut steps: Vec<HeckeOp<RingA>> = Vec::new();
    for (p, e) in factor_monic(a, poly)? {
        for _ in 0..e {
            steps.push(HeckeOp::over_a(a, &p));
        }
    }
    // output precision of each step, last step first
    let mut outs = vec![n_out; steps.len()];
    for i in (0..steps.len().saturating_sub(1)).rev() {
        outs[i] = steps[i + 1].required_input_precision(outs[i + 1]).max(outs[i + 1]);
    }
    let mut cur = f.clone();
    for (op, &out) in steps.iter().zip(&outs) {
        cur = op.apply(&cur, k, out)?;
    }
    Ok(cur.truncate(n_out))
}

/// `g^i h^j` over `F_q` from `h~` (using `g~ = 1`).
pub fn mod_t_monomial(fq: &Fq, h: &TSeries<FqElem>, b: BasisMonomial) -> TSeries<FqElem> {
    monomial_series(fq, &TSeries::one(fq, h.prec()), h, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlitz::{torsion_exponential, GossTable};
    use crate::poly::Parse;
    use crate::polyring::{primes_up_to_degree, ring_a};

    #[test]
    fn precision_examples() {
        assert_eq!(required_input_precision(2, 2, 2), 5);
        assert_eq!(required_input_precision(1, 3, 4), 1);
        assert_eq!(required_input_precision(10, 2, 5), 289);
    }

    /// The Hecke formula evaluated literally with Goss polynomials over `K`.
    fn hecke_via_goss_table(k: &RatField, f: &TSeries<RatK>, weight: u64, p: &PrimePoly, n_out: usize) -> TSeries<RatK> {
        let q = k.fq().q() as u64;
        let n_in = required_input_precision(n_out, q, p.degree());
        let table = GossTable::new(k, &torsion_exponential(k, p), q, n_in).unwrap();
        let a = k.ring();
        let phi = carlitz_phi(a, p.poly()).unwrap();
        let phi_k: Vec<RatK> = phi.coeffs().iter().map(|c| k.from_poly(c.clone())).collect();
        let wp = k.from_poly(p.poly().clone());
        let t_p = t_from_phi(k, &phi_k, q, n_out).unwrap();
        let mut out = TSeries::zero(k, n_out);
        let mut power = TSeries::one(k, n_out);
        for n in 0..=n_in {
            if n > 0 {
                power = power.mul(k, &t_p);
            }
            let a_n = &f.coeffs()[n];
            let pk = k.pow(&wp, weight);
            out = out.add(k, &power.scale(k, &k.mul(a_n, &pk)));
            if n > 0 {
                let s = TSeries::monomial(k, wp.clone(), 1, n_out);
                let g = TSeries::eval_poly(k, table.get(n).unwrap(), &s).unwrap();
                out = out.add(k, &g.scale(k, a_n));
            }
        }
        out
    }

    #[test]
    fn fast_formula_matches_goss_table() {
        for q in [2u32, 3] {
            let fq = Fq::prime(q).unwrap();
            let k = RatField::new(&fq);
            let cache = FormCache::new(&fq, 60);
            for p in primes_up_to_degree(k.ring(), 2).unwrap() {
                let n_out = 5;
                let f = cache.monomial(BasisMonomial { i: 1, j: 2 }, 60).unwrap();
                let fk = f.series(&k);
                let slow = hecke_via_goss_table(&k, &fk, f.k, &p, n_out);
                let fast = hecke_on_series(&k, &fk, f.k, &p, n_out).unwrap();
                assert_eq!(slow, fast);
            }
        }
    }

    #[test]
    fn h_cubed_image_matches_goss_table_for_cubic_prime() {
        let fq = Fq::prime(2).unwrap();
        let k = RatField::new(&fq);
        let cache = FormCache::new(&fq, 40);
        let p = PrimePoly::parse(k.ring(), "T^3+T^2+1").unwrap();
        let f = cache.monomial(BasisMonomial { i: 0, j: 3 }, 40).unwrap();
        let fk = f.series(&k);
        let slow = hecke_via_goss_table(&k, &fk, f.k, &p, 3);
        assert_eq!(slow, hecke_on_series(&k, &fk, f.k, &p, 3).unwrap());
        // h^3 = t^3 + O(t^4) but the image has a nonzero t^2 term divisible by T
        assert_eq!(slow.coeffs()[2], k.parse_elem("T^9+T^7+T^3").unwrap());
    }

    #[test]
    fn eigenforms_small() {
        for q in [2u32, 3] {
            let fq = Fq::prime(q).unwrap();
            let a = ring_a(&fq);
            let cache = FormCache::new(&fq, 200);
            for p in primes_up_to_degree(&a, 2).unwrap() {
                let op = HeckeOp::over_a(&a, &p);
                let n_out = 12;
                let need = op.required_input_precision(n_out);
                let g = cache.g(need).unwrap();
                let img = op.apply(g.num(), g.k, n_out).unwrap();
                assert_eq!(img, g.num().truncate(n_out).scale(&a, &a.pow(p.poly(), q as u64 - 1)));
                for j in 1..=q as usize {
                    let f = cache.monomial(BasisMonomial { i: 0, j }, need).unwrap();
                    let img = op.apply(f.num(), f.k, n_out).unwrap();
                    assert_eq!(img, f.num().truncate(n_out).scale(&a, &a.pow(p.poly(), j as u64)));
                }
            }
        }
    }

    #[test]
    fn matrix_examples() {
        let fq = Fq::prime(3).unwrap();
        let a = ring_a(&fq);
        let cache = FormCache::new(&fq, 100);
        let p = PrimePoly::parse(&a, "T^2+1").unwrap();
        let mg = hecke_matrix(&cache, 2, 0, &p).unwrap();
        assert_eq!(mg.entries.rows(), &[vec![a.pow(p.poly(), 2)]]);
        let mh = hecke_matrix(&cache, 4, 1, &p).unwrap();
        assert_eq!(mh.entries.rows(), &[vec![p.poly().clone()]]);
        assert!(hecke_matrix(&cache, 1, 0, &p).is_err());
    }

    #[test]
    fn matrices_commute_and_extra_precision_agrees() {
        let fq = Fq::prime(2).unwrap();
        let a = ring_a(&fq);
        let cache = FormCache::new(&fq, 120);
        let primes = primes_up_to_degree(&a, 2).unwrap();
        for k in [9u64, 12] {
            let ms: Vec<HeckeMatrix> = primes.iter().map(|p| hecke_matrix(&cache, k, 0, p).unwrap()).collect();
            for x in &ms {
                for y in &ms {
                    assert_eq!(x.entries.mul(&a, &y.entries), y.entries.mul(&a, &x.entries));
                }
                let wider = hecke_matrix_at(&cache, k, 0, &x.prime, 8).unwrap();
                assert_eq!(wider.entries, x.entries);
            }
        }
    }

    #[test]
    fn mod_t_routes_agree_with_reduced_matrix() {
        for q in [2u32, 3] {
            let fq = Fq::prime(q).unwrap();
            let a = ring_a(&fq);
            let cache = FormCache::new(&fq, 130);
            let mt = ModTCache::from_forms(&cache);
            let direct = ModTCache::direct(&fq, 130);
            assert_eq!(mt.h(), direct.h());
            for p in primes_up_to_degree(&a, 2).unwrap().into_iter().filter(|p| !p.is_t()) {
                for k in 0..=12u64 {
                    for m in 0..(q as u64 - 1) {
                        if monomial_basis(q as u64, k, m).is_empty() {
                            continue;
                        }
                        let full = hecke_matrix(&cache, k, m, &p).unwrap();
                        let reduced = full.entries.transpose().map(|c| a.eval(c, &FqElem::ZERO));
                        let via = hecke_matrix_mod_t(&mt, k, m, &p).unwrap();
                        assert_eq!(via.entries, reduced, "q={q} k={k} m={m}");
                        let indep = hecke_matrix_mod_t_independent(&fq, direct.h(), k, m, &p).unwrap();
                        assert_eq!(indep.entries, reduced);
                    }
                }
            }
        }
    }

    #[test]
    fn mod_t_excludes_t() {
        let fq = Fq::prime(2).unwrap();
        let a = ring_a(&fq);
        let mt = ModTCache::direct(&fq, 20);
        let t = PrimePoly::parse(&a, "T").unwrap();
        assert_eq!(hecke_matrix_mod_t(&mt, 3, 0, &t), Err(Error::TIsExcluded));
        let p = PrimePoly::parse(&a, "T+1").unwrap();
        assert_eq!(
            hecke_product_mod_t(&mt, &[p.clone(), p.clone()], 3, 0),
            Err(Error::WrongCount { expected: 1, got: 2 })
        );
    }

    #[test]
    fn eigen_verdicts() {
        let fq = Fq::prime(2).unwrap();
        let k = RatField::new(&fq);
        let a = k.ring().clone();
        let cache = FormCache::new(&fq, 200);
        let p = PrimePoly::parse(&a, "T+1").unwrap();
        let m3 = hecke_matrix(&cache, 3, 0, &p).unwrap();
        let h = vec![k.zero(), k.one()];
        assert_eq!(
            eigenform_check(&k, &m3, &h).unwrap(),
            EigenVerdict::Eigenform { eigenvalue: k.from_poly(p.poly().clone()) }
        );
        assert_eq!(eigenform_check(&k, &m3, &[k.zero(), k.zero()]), Err(Error::ZeroVector));
        let p2 = PrimePoly::parse(&a, "T^2+T+1").unwrap();
        let m9 = hecke_matrix(&cache, 9, 0, &p2).unwrap();
        let h3 = vec![k.zero(), k.zero(), k.zero(), k.one()];
        assert!(matches!(eigenform_check(&k, &m9, &h3).unwrap(), EigenVerdict::NotEigenform { .. }));
    }

    #[test]
    fn composite_operators() {
        let fq = Fq::prime(2).unwrap();
        let a = ring_a(&fq);
        let cache = FormCache::new(&fq, 120);
        let f = cache.monomial(BasisMonomial { i: 3, j: 2 }, 120).unwrap();
        let p = PrimePoly::parse(&a, "T+1").unwrap();
        let p2 = PrimePoly::parse(&a, "T^2+T+1").unwrap();
        let n_out = 6;
        let op = HeckeOp::over_a(&a, &p);
        let single = op.apply(f.num(), f.k, n_out).unwrap();
        assert_eq!(hecke_composite(&a, f.num(), p.poly(), f.k, n_out).unwrap(), single);
        let sq = a.mul(p.poly(), p.poly());
        let twice = op.apply(&op.apply(f.num(), f.k, 21).unwrap(), f.k, n_out).unwrap();
        assert_eq!(hecke_composite(&a, f.num(), &sq, f.k, n_out).unwrap(), twice);
        let op2 = HeckeOp::over_a(&a, &p2);
        let ab = op.apply(&op2.apply(f.num(), f.k, 21).unwrap(), f.k, n_out).unwrap();
        let ba = op2.apply(&op.apply(f.num(), f.k, 21).unwrap(), f.k, n_out).unwrap();
        assert_eq!(ab, ba);
        let prod = a.mul(p.poly(), p2.poly());
        assert_eq!(hecke_composite(&a, f.num(), &prod, f.k, n_out).unwrap(), ab);
    }

    #[test]
    fn commutation_on_generators() {
        let fq = Fq::prime(3).unwrap();
        let a = ring_a(&fq);
        let cache = FormCache::new(&fq, 120);
        for p in primes_up_to_degree(&a, 1).unwrap() {
            for b in [BasisMonomial { i: 1, j: 0 }, BasisMonomial { i: 0, j: 1 }, BasisMonomial { i: 1, j: 1 }] {
                let f = cache.monomial(b, 120).unwrap();
                assert!(commutation_check(&a, f.num(), f.k, &p, 20).unwrap());
            }
        }
    }
}
