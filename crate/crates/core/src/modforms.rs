//! The forms `g`, `h`, `E` from their `A`-expansions, the monomial basis of
//! `M_{k,m}`, exact decomposition in that basis, Serre derivatives and
//! reduction at `T = theta`.

use serde::Serialize;

use crate::carlitz::{carlitz_phi, t_from_phi, t_power_q_minus_1_from_phi};
use crate::error::{Error, Result};
use crate::ffield::{Fq, FqElem};
use crate::polyring::{monic_polys, ring_a, PolyA, RatField, RatK, RingA};
use crate::ring::{Field, Ring};
use crate::tseries::TSeries;

/// `g^i h^j`, of weight `(q-1)i + (q+1)j` and type `j mod (q-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisMonomial {
    pub i: usize,
    pub j: usize,
}

/// Canonical type representative `0 <= m < q-1` (always 0 when `q = 2`).
pub fn type_rep(q: u64, m: i64) -> u64 {
    m.rem_euclid((q - 1).max(1) as i64) as u64
}

/// The monomials `g^i h^j` spanning `M_{k,m}`, by increasing `j`. Empty when
/// the weight and type are incompatible.
pub fn monomial_basis(q: u64, k: u64, m: u64) -> Vec<BasisMonomial> {
    let m = type_rep(q, m as i64);
    let mut out = Vec::new();
    let mut j = 0u64;
    while (q + 1) * j <= k {
        let rest = k - (q + 1) * j;
        if type_rep(q, j as i64) == m && rest.is_multiple_of(q - 1) {
            out.push(BasisMonomial { i: (rest / (q - 1)) as usize, j: j as usize });
        }
        j += 1;
    }
    out
}

/// `mu = floor((k - m(q+1)) / (q^2 - 1))`.
pub fn mu(q: u64, k: u64, m: u64) -> i64 {
    let num = k as i64 - (m * (q + 1)) as i64;
    num.div_euclid((q * q - 1) as i64)
}

/// The `h`-exponents of the mod-`T` basis of `M_{k,m}`.
pub fn mod_t_exponents(q: u64, k: u64, m: u64) -> Vec<usize> {
    monomial_basis(q, k, m).iter().map(|b| b.j).collect()
}

/// Truncated `g`, `h`, `E` over `A`, computed together since they share the `t_a`.
#[derive(Clone, Debug)]
pub struct BaseForms {
    pub g: TSeries<PolyA>,
    pub h: TSeries<PolyA>,
    pub e: TSeries<PolyA>,
}

/// `g = 1 - (T^q - T) sum_a t_a^{q-1}`, `h = sum_a a^q t_a`, `E = sum_a a t_a`
/// over monic `a`; terms with `q^{deg a} > prec` vanish to this precision.
pub fn base_forms(a_ring: &RingA, prec: usize) -> BaseForms {
    let fq = a_ring.base();
    let q = fq.q() as u64;
    let mut sum_g = TSeries::zero(a_ring, prec);
    let mut h = TSeries::zero(a_ring, prec);
    let mut e = TSeries::zero(a_ring, prec);
    let mut d = 0u32;
    while (q.pow(d) as usize) <= prec {
        for a in monic_polys(a_ring, d as usize) {
            let phi = carlitz_phi(a_ring, &a).expect("monic polynomials are nonzero");
            let ta = t_from_phi(a_ring, phi.coeffs(), q, prec).expect("phi of a monic is monic");
            let aq = a_ring.pow(&a, q);
            add_scaled(a_ring, &mut h, &ta, &aq);
            add_scaled(a_ring, &mut e, &ta, &a);
            if ((q - 1) * q.pow(d)) as usize <= prec {
                let tq = t_power_q_minus_1_from_phi(a_ring, phi.coeffs(), q, fq.r(), prec)
                    .expect("phi of a monic is monic");
                add_scaled(a_ring, &mut sum_g, &tq, &a_ring.one());
            }
        }
        d += 1;
    }
    let tq_minus_t = a_ring.sub(&a_ring.pow(&a_ring.gen(), q), &a_ring.gen());
    let g = TSeries::one(a_ring, prec).sub(a_ring, &sum_g.scale(a_ring, &tq_minus_t));
    BaseForms { g, h, e }
}

/// `acc += c * s`, skipping the zero coefficients of `s`.
fn add_scaled<R: Ring>(r: &R, acc: &mut TSeries<R::Elem>, s: &TSeries<R::Elem>, c: &R::Elem) {
    let mut coeffs = acc.coeffs().to_vec();
    for (slot, x) in coeffs.iter_mut().zip(s.coeffs()) {
        if !r.is_zero(x) {
            let prod = r.mul(x, c);
            r.add_assign(slot, &prod);
        }
    }
    *acc = TSeries::from_coeffs(coeffs);
}

/// `g mod T` and `h mod T` straight from `phi_a mod T = sum a_i z^{q^i}`:
/// `g~ = 1`, `h~ = sum_a a(0) t~_a`.
pub fn h_mod_t_direct(fq: &Fq, prec: usize) -> TSeries<FqElem> {
    let a_ring = ring_a(fq);
    let q = fq.q() as u64;
    let mut h = TSeries::zero(fq, prec);
    let mut d = 0u32;
    while (q.pow(d) as usize) <= prec {
        for a in monic_polys(&a_ring, d as usize) {
            let a0 = a.coeffs()[0];
            if fq.is_zero(&a0) {
                continue;
            }
            let ta = t_from_phi(fq, a.coeffs(), q, prec).expect("monic");
            add_scaled(fq, &mut h, &ta, &a0);
        }
        d += 1;
    }
    h
}

/// A form (or, with `quasi`, the quasi-modular `E`) with `t`-expansion
/// `num / den`, `num` in `A[[t]]` and `den` a monic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModForm {
    pub k: u64,
    pub m: u64,
    pub quasi: bool,
    num: TSeries<PolyA>,
    den: PolyA,
    pub coords: Option<Vec<RatK>>,
}

impl ModForm {
    /// An integral form with the given `A`-coefficients.
    pub fn integral(a_ring: &RingA, k: u64, m: u64, series: TSeries<PolyA>) -> ModForm {
        let q = a_ring.base().q() as u64;
        ModForm { k, m: type_rep(q, m as i64), quasi: false, num: series, den: a_ring.one(), coords: None }
    }

    /// A form from a series over `K`, stored with a common denominator.
    pub fn from_k_series(field: &RatField, k: u64, m: u64, series: &TSeries<RatK>) -> Result<ModForm> {
        let a = field.ring();
        let mut den = a.one();
        for c in series.coeffs() {
            den = a.lcm(&den, c.den())?;
        }
        let num = series.map(|c| a.mul(c.num(), &a.div_exact(&den, c.den())));
        let q = a.base().q() as u64;
        Ok(ModForm { k, m: type_rep(q, m as i64), quasi: false, num, den, coords: None })
    }

    pub fn num(&self) -> &TSeries<PolyA> {
        &self.num
    }

    pub fn den(&self) -> &PolyA {
        &self.den
    }

    pub fn prec(&self) -> usize {
        self.num.prec()
    }

    pub fn series(&self, field: &RatField) -> TSeries<RatK> {
        self.num.map(|c| field.frac(c.clone(), self.den.clone()).expect("denominators are nonzero"))
    }

    /// Reduction at `T = theta`. At `theta = 0` the exponent list of the
    /// `h~`-basis is recorded.
    pub fn reduce_mod_theta(&self, a_ring: &RingA, theta: FqElem) -> Result<ModTForm> {
        let fq = a_ring.base();
        let d = a_ring.eval(&self.den, &theta);
        let d_inv = fq.inv(&d).map_err(|_| Error::DenominatorVanishes)?;
        let series = self.num.map(|c| fq.mul(&a_ring.eval(c, &theta), &d_inv));
        let exponents = if fq.is_zero(&theta) && !self.quasi {
            Some(mod_t_exponents(fq.q() as u64, self.k, self.m))
        } else {
            None
        };
        Ok(ModTForm { series, exponents })
    }
}

/// A form reduced at a degree-one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModTForm {
    pub series: TSeries<FqElem>,
    pub exponents: Option<Vec<usize>>,
}

/// `g`, `h`, `E` and powers, all at one precision over `A`.
#[derive(Clone, Debug)]
pub struct FormCache {
    a: RingA,
    base: BaseForms,
}

impl FormCache {
    pub fn new(fq: &Fq, prec: usize) -> FormCache {
        let a = ring_a(fq);
        let base = base_forms(&a, prec);
        FormCache { a, base }
    }

    pub fn ring(&self) -> &RingA {
        &self.a
    }

    pub fn q(&self) -> u64 {
        self.a.base().q() as u64
    }

    pub fn prec(&self) -> usize {
        self.base.h.prec()
    }

    fn check(&self, prec: usize) -> Result<()> {
        if prec > self.prec() {
            return Err(Error::InsufficientPrecision { needed: prec, have: self.prec() });
        }
        Ok(())
    }

    pub fn g(&self, prec: usize) -> Result<ModForm> {
        self.check(prec)?;
        Ok(ModForm::integral(&self.a, self.q() - 1, 0, self.base.g.truncate(prec)))
    }

    pub fn h(&self, prec: usize) -> Result<ModForm> {
        self.check(prec)?;
        Ok(ModForm::integral(&self.a, self.q() + 1, 1, self.base.h.truncate(prec)))
    }

    /// The quasi-modular `E` (weight 2, type 1 bookkeeping).
    pub fn e(&self, prec: usize) -> Result<ModForm> {
        self.check(prec)?;
        let mut f = ModForm::integral(&self.a, 2, 1, self.base.e.truncate(prec));
        f.quasi = true;
        Ok(f)
    }

    /// `g^i h^j` to precision `prec`.
    pub fn monomial(&self, b: BasisMonomial, prec: usize) -> Result<ModForm> {
        self.check(prec)?;
        let q = self.q();
        let s = monomial_series(&self.a, &self.base.g.truncate(prec), &self.base.h.truncate(prec), b);
        Ok(ModForm::integral(&self.a, (q - 1) * b.i as u64 + (q + 1) * b.j as u64, b.j as u64, s))
    }

    /// Series of every basis monomial of `M_{k,m}` at precision `prec`.
    pub fn basis_series(&self, k: u64, m: u64, prec: usize) -> Result<Vec<(BasisMonomial, TSeries<PolyA>)>> {
        self.check(prec)?;
        let g = self.base.g.truncate(prec);
        let h = self.base.h.truncate(prec);
        Ok(monomial_basis(self.q(), k, m).into_iter().map(|b| (b, monomial_series(&self.a, &g, &h, b))).collect())
    }
}

/// `g^i h^j` from truncated `g` and `h`.
pub fn monomial_series<R: Ring>(r: &R, g: &TSeries<R::Elem>, h: &TSeries<R::Elem>, b: BasisMonomial) -> TSeries<R::Elem> {
    let prec = g.prec().min(h.prec());
    match (b.i, b.j) {
        (0, 0) => TSeries::one(r, prec),
        (i, 0) => g.pow(r, i as u64),
        (0, j) => h.pow(r, j as u64),
        (i, j) => g.pow(r, i as u64).mul(r, &h.pow(r, j as u64)),
    }
}

/// Coordinates of `f` in a basis whose `c`-th element is `t^{j_c} + O(t^{j_c+1})`
/// with increasing `j_c`. The residual is checked to vanish through the
/// common precision.
pub fn decompose<R: Ring>(r: &R, f: &TSeries<R::Elem>, basis: &[(usize, TSeries<R::Elem>)]) -> Result<Vec<R::Elem>> {
    let Some(j_max) = basis.last().map(|b| b.0) else {
        return if f.is_zero(r) { Ok(Vec::new()) } else { Err(Error::NotInSpan { index: f.valuation(r).unwrap_or(0) }) };
    };
    if f.prec() < j_max {
        return Err(Error::InsufficientPrecision { needed: j_max, have: f.prec() });
    }
    let mut residual = f.clone();
    let mut coords = Vec::with_capacity(basis.len());
    for (j, b) in basis {
        debug_assert!(b.valuation(r) == Some(*j) && r.is_one(&b.coeffs()[*j]));
        let c = residual.coeffs()[*j].clone();
        if !r.is_zero(&c) {
            residual = residual.sub(r, &b.scale(r, &c));
        }
        coords.push(c);
    }
    if let Some(idx) = residual.valuation(r) {
        return Err(Error::NotInSpan { index: idx });
    }
    Ok(coords)
}

/// [`decompose`] in the monomial basis of `M_{k,m}` over `K`.
pub fn decompose_in_basis(
    field: &RatField,
    cache: &FormCache,
    f: &TSeries<RatK>,
    k: u64,
    m: u64,
) -> Result<Vec<RatK>> {
    let basis = cache.basis_series(k, m, f.prec().min(cache.prec()))?;
    let basis: Vec<(usize, TSeries<RatK>)> =
        basis.into_iter().map(|(b, s)| (b.j, s.map(|c| field.from_poly(c.clone())))).collect();
    let j_max = basis.last().map(|b| b.0).unwrap_or(0);
    if f.prec() < j_max {
        return Err(Error::InsufficientPrecision { needed: j_max, have: f.prec() });
    }
    decompose(field, f, &basis)
}

/// `partial_k f = Theta f + k E f` (weight `k+2`, type `m+1`).
pub fn serre_derivative(a_ring: &RingA, f: &ModForm, e: &TSeries<PolyA>) -> Result<ModForm> {
    let prec = f.prec();
    if e.prec() < prec {
        return Err(Error::InsufficientPrecision { needed: prec, have: e.prec() });
    }
    let theta = f.num().theta(a_ring).truncate(prec);
    let kk = a_ring.from_int((f.k % a_ring.characteristic()) as i64);
    let ef = e.truncate(prec).mul(a_ring, f.num()).scale(a_ring, &kk);
    let q = a_ring.base().q() as u64;
    Ok(ModForm {
        k: f.k + 2,
        m: type_rep(q, f.m as i64 + 1),
        quasi: f.quasi,
        num: theta.add(a_ring, &ef),
        den: f.den().clone(),
        coords: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Parse;

    #[test]
    fn basis_examples() {
        let b = monomial_basis(2, 9, 0);
        let pairs: Vec<(usize, usize)> = b.iter().map(|x| (x.i, x.j)).collect();
        assert_eq!(pairs, vec![(9, 0), (6, 1), (3, 2), (0, 3)]);
        assert!(monomial_basis(3, 1, 0).is_empty());
        let pairs: Vec<(usize, usize)> = monomial_basis(3, 8, 0).iter().map(|x| (x.i, x.j)).collect();
        assert_eq!(pairs, vec![(4, 0), (0, 2)]);
        for k in 0..60 {
            assert_eq!(monomial_basis(2, k, 0).len() as u64, k / 3 + 1);
        }
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(3, 8, 0), 1);
        assert_eq!(mu(2, 9, 0), 3);
        assert_eq!(mu(3, 4, 1), 0);
        for q in [2u64, 3, 4, 5] {
            for m in 0..(q - 1).max(1) {
                for k in 0..80 {
                    let js = mod_t_exponents(q, k, m);
                    if k >= m * (q + 1) && (k as i64 - 2 * m as i64).rem_euclid((q - 1).max(1) as i64) == 0 {
                        let mu = mu(q, k, m) as usize;
                        let expected: Vec<usize> = (0..=mu).map(|l| m as usize + l * (q as usize - 1)).collect();
                        assert_eq!(js, expected, "q={q} k={k} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn forms_leading_terms() {
        for q in [2u32, 3, 4] {
            let fq = Fq::from_order(q).unwrap();
            let a = ring_a(&fq);
            let f = base_forms(&a, 40);
            assert!(a.is_one(&f.g.coeffs()[0]));
            let tq_t = a.sub(&a.pow(&a.gen(), q as u64), &a.gen());
            assert_eq!(f.g.coeffs()[q as usize - 1], a.neg(&tq_t));
            assert!(a.is_one(&f.h.coeffs()[1]));
            assert!(a.is_one(&f.e.coeffs()[1]));
            assert!(a.is_zero(&f.h.coeffs()[0]));
        }
    }

    /// Direct summation oracle: the `t^2` coefficient of `h` for `q = 2` is
    /// `T^2 + (T+1)^2 = 1`.
    #[test]
    fn h_second_coefficient_q2() {
        let fq = Fq::prime(2).unwrap();
        let a = ring_a(&fq);
        let f = base_forms(&a, 10);
        assert!(a.is_one(&f.h.coeffs()[2]));
    }

    #[test]
    fn g_mod_t_is_one_and_h_routes_agree() {
        for q in [2u32, 3, 4, 5] {
            let fq = Fq::from_order(q).unwrap();
            let a = ring_a(&fq);
            let prec = 60;
            let f = base_forms(&a, prec);
            let g0: Vec<FqElem> = f.g.coeffs().iter().map(|c| a.eval(c, &FqElem::ZERO)).collect();
            assert_eq!(TSeries::from_coeffs(g0), TSeries::one(&fq, prec));
            let h0 = f.h.map(|c| a.eval(c, &FqElem::ZERO));
            assert_eq!(h0, h_mod_t_direct(&fq, prec));
            let e0 = f.e.map(|c| a.eval(c, &FqElem::ZERO));
            assert_eq!(e0, h0);
        }
    }

    #[test]
    fn decomposition_examples() {
        let fq = Fq::prime(3).unwrap();
        let k = RatField::new(&fq);
        let cache = FormCache::new(&fq, 30);
        let f = cache.monomial(BasisMonomial { i: 4, j: 0 }, 30).unwrap();
        let coords = decompose_in_basis(&k, &cache, &f.series(&k), 8, 0).unwrap();
        assert_eq!(coords, vec![k.one(), k.zero()]);
        let bad = TSeries::from_coeffs(vec![k.one(), k.one(), k.zero(), k.zero()]);
        assert!(matches!(decompose_in_basis(&k, &cache, &bad, 2, 0), Err(Error::NotInSpan { .. })));
        let short = TSeries::from_coeffs(vec![k.one()]);
        assert!(matches!(
            decompose_in_basis(&k, &cache, &short, 8, 0),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn products_decompose_in_graded_basis() {
        let fq = Fq::prime(3).unwrap();
        let k = RatField::new(&fq);
        let cache = FormCache::new(&fq, 40);
        let a = cache.ring().clone();
        let x = cache.monomial(BasisMonomial { i: 1, j: 1 }, 40).unwrap();
        let y = cache.monomial(BasisMonomial { i: 2, j: 1 }, 40).unwrap();
        let prod = x.num().mul(&a, y.num()).map(|c| k.from_poly(c.clone()));
        let coords = decompose_in_basis(&k, &cache, &prod, x.k + y.k, 0).unwrap();
        assert_eq!(coords.iter().filter(|c| !k.is_zero(c)).count(), 1);
    }

    #[test]
    fn serre_derivative_of_h_vanishes() {
        for q in [2u32, 3, 4] {
            let fq = Fq::from_order(q).unwrap();
            let cache = FormCache::new(&fq, 50);
            let a = cache.ring().clone();
            let h = cache.h(50).unwrap();
            let e = cache.e(50).unwrap();
            let dh = serre_derivative(&a, &h, e.num()).unwrap();
            assert!(dh.num().is_zero(&a));
            let one = ModForm::integral(&a, 0, 0, TSeries::one(&a, 10));
            assert!(serre_derivative(&a, &one, e.num()).unwrap().num().is_zero(&a));
        }
    }

    #[test]
    fn reduction_examples() {
        let fq = Fq::prime(2).unwrap();
        let k = RatField::new(&fq);
        let cache = FormCache::new(&fq, 20);
        let a = cache.ring().clone();
        let g = cache.g(20).unwrap().reduce_mod_theta(&a, FqElem::ZERO).unwrap();
        assert_eq!(g.series, TSeries::one(&fq, 20));
        let h3 = cache.monomial(BasisMonomial { i: 0, j: 3 }, 20).unwrap();
        let r = h3.reduce_mod_theta(&a, FqElem::ZERO).unwrap();
        assert_eq!(r.series.valuation(&fq), Some(3));
        assert_eq!(r.exponents, Some(vec![0, 1, 2, 3]));
        let tinv = k.parse_elem("1/T").unwrap();
        let s = cache.h(20).unwrap().series(&k).map(|c| k.mul(c, &tinv));
        let f = ModForm::from_k_series(&k, 3, 1, &s).unwrap();
        assert_eq!(f.reduce_mod_theta(&a, FqElem::ZERO), Err(Error::DenominatorVanishes));
        assert!(f.reduce_mod_theta(&a, FqElem::ONE).is_ok());
    }
}
