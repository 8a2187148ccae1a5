//! The Carlitz module, torsion exponentials, the expansions `t_a`, and Goss
//! polynomials.

use crate::error::{Error, Result};
use crate::ffield::{Fq, FqElem};
use crate::poly::{Poly, PolyRing};
use crate::polyring::{PolyA, PrimePoly, RatField, RatK, RingA};
use crate::ring::{Field, Ring};
use crate::tseries::TSeries;

/// An `F_q`-linear polynomial `sum_i c_i z^{q^i}`, stored as `c_0..c_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivePoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> AdditivePoly<E> {
    /// Trailing zero coefficients are dropped; the zero polynomial is rejected.
    pub fn new<R: Ring<Elem = E>>(r: &R, mut coeffs: Vec<E>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| r.is_zero(c)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroInput);
        }
        Ok(AdditivePoly { coeffs })
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    /// The `q`-degree `d`.
    pub fn q_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn map<F>(&self, f: impl FnMut(&E) -> F) -> AdditivePoly<F> {
        AdditivePoly { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn add<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[E], i: usize| v.get(i).cloned().unwrap_or_else(|| r.zero());
        Self::new(r, (0..n).map(|i| r.add(&get(&self.coeffs, i), &get(&other.coeffs, i))).collect())
    }

    /// `self ∘ other`: `(sum a_i tau^i)(sum b_j tau^j) = sum a_i b_j^{q^i} tau^{i+j}`,
    /// where `q = p^r_exp`.
    pub fn compose<R: Ring<Elem = E>>(&self, r: &R, r_exp: u32, other: &Self) -> Self {
        let mut out = vec![r.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let mut twisted = b.clone();
                for _ in 0..(i as u32 * r_exp) {
                    twisted = r.frobenius(&twisted);
                }
                let prod = r.mul(a, &twisted);
                r.add_assign(&mut out[i + j], &prod);
            }
        }
        AdditivePoly { coeffs: out }
    }

    /// Evaluation at `z` (computes `z^{q^i}` by repeated Frobenius).
    pub fn eval<R: Ring<Elem = E>>(&self, r: &R, r_exp: u32, z: &E) -> E {
        let mut acc = r.zero();
        let mut zi = z.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                for _ in 0..r_exp {
                    zi = r.frobenius(&zi);
                }
            }
            acc = r.add(&acc, &r.mul(c, &zi));
        }
        acc
    }
}

/// `phi_a` for the Carlitz module `phi_T = T z + z^q`.
pub fn carlitz_phi(a_ring: &RingA, a: &PolyA) -> Result<AdditivePoly<PolyA>> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    let fq = a_ring.base();
    // phi_{T^j}, built by phi_{T^j} = phi_T ∘ phi_{T^{j-1}}.
    let t = a_ring.gen();
    let mut power: Vec<PolyA> = vec![a_ring.one()];
    let mut acc = vec![a_ring.zero(); a.coeffs().len()];
    for (j, aj) in a.coeffs().iter().enumerate() {
        if j > 0 {
            let mut next = Vec::with_capacity(power.len() + 1);
            for i in 0..=power.len() {
                let mut c = if i < power.len() { a_ring.mul(&t, &power[i]) } else { a_ring.zero() };
                if i > 0 {
                    let mut tw = power[i - 1].clone();
                    for _ in 0..fq.r() {
                        tw = a_ring.frobenius(&tw);
                    }
                    c = a_ring.add(&c, &tw);
                }
                next.push(c);
            }
            power = next;
        }
        if fq.is_zero(aj) {
            continue;
        }
        for (i, c) in power.iter().enumerate() {
            let term = a_ring.scale(c, aj);
            a_ring.add_assign(&mut acc[i], &term);
        }
    }
    AdditivePoly::new(a_ring, acc)
}

/// Reduction of `phi_a` modulo `T`: `sum_i a_i z^{q^i}`.
pub fn carlitz_phi_mod_t(fq: &Fq, a: &PolyA) -> Result<AdditivePoly<FqElem>> {
    AdditivePoly::new(fq, a.coeffs().to_vec())
}

/// `e_P = phi_P / P`, the exponential of the `P`-torsion lattice, over `K`.
pub fn torsion_exponential(k: &RatField, wp: &PrimePoly) -> AdditivePoly<RatK> {
    let phi = carlitz_phi(k.ring(), wp.poly()).expect("primes are nonzero");
    phi.map(|c| k.frac(c.clone(), wp.poly().clone()).expect("primes are nonzero"))
}

/// `t_a` from the coefficients `c_0..c_d` of `phi_a` (with `c_d = 1`):
/// `t_a = 1/phi_a(1/t) = t^{q^d} / sum_i c_i t^{q^d - q^i}`.
pub fn t_from_phi<R: Ring>(r: &R, phi: &[R::Elem], q: u64, prec: usize) -> Result<TSeries<R::Elem>> {
    let d = phi.len() - 1;
    if !r.is_one(&phi[d]) {
        return Err(Error::NotMonic);
    }
    let lead = q.pow(d as u32) as usize;
    if lead > prec {
        return Ok(TSeries::zero(r, prec));
    }
    let den = phi_denominator(r, phi, q, prec - lead);
    Ok(den.inv(r)?.shift(r, lead))
}

/// `t_a^{q-1}`, computed as `t^{(q-1)q^d} D (D^q)^{-1}` so that both the
/// inverse and the product stay sparse.
pub fn t_power_q_minus_1_from_phi<R: Ring>(
    r: &R,
    phi: &[R::Elem],
    q: u64,
    r_exp: u32,
    prec: usize,
) -> Result<TSeries<R::Elem>> {
    let d = phi.len() - 1;
    if !r.is_one(&phi[d]) {
        return Err(Error::NotMonic);
    }
    let lead = ((q - 1) * q.pow(d as u32)) as usize;
    if lead > prec {
        return Ok(TSeries::zero(r, prec));
    }
    let den = phi_denominator(r, phi, q, prec - lead);
    let mut den_q = den.clone();
    for _ in 0..r_exp {
        den_q = den_q.frobenius(r);
    }
    Ok(den.mul(r, &den_q.inv(r)?).shift(r, lead))
}

/// `sum_i c_i t^{q^d - q^i}` to precision `prec`.
fn phi_denominator<R: Ring>(r: &R, phi: &[R::Elem], q: u64, prec: usize) -> TSeries<R::Elem> {
    let d = phi.len() - 1;
    let qd = q.pow(d as u32) as usize;
    let mut coeffs = vec![r.zero(); prec + 1];
    for (i, c) in phi.iter().enumerate() {
        let e = qd - q.pow(i as u32) as usize;
        if e <= prec {
            coeffs[e] = r.add(&coeffs[e], c);
        }
    }
    TSeries::from_coeffs(coeffs)
}

/// The expansion `t_a = t^{q^{deg a}} + ...` in `A[[t]]`.
pub fn t_sub_a(a_ring: &RingA, a: &PolyA, prec: usize) -> Result<TSeries<PolyA>> {
    if a.is_zero() || !a_ring.is_monic(a) {
        return Err(Error::NotMonic);
    }
    let phi = carlitz_phi(a_ring, a)?;
    t_from_phi(a_ring, phi.coeffs(), a_ring.base().q() as u64, prec)
}

/// Goss polynomials `G_1..G_{n_max}` of a lattice with exponential
/// `e(z) = z + sum_{i>=1} alpha_i z^{q^i}`, via
/// `G_n = X (G_{n-1} + sum_i alpha_i G_{n-q^i})`, `G_1 = X`, `G_m = 0` for `m <= 0`.
#[derive(Clone, Debug)]
pub struct GossTable<F: Field> {
    ring: PolyRing<F>,
    alpha: Vec<F::Elem>,
    q: u64,
    polys: Vec<Poly<F::Elem>>,
}

impl<F: Field> GossTable<F> {
    pub fn new(field: &F, lattice: &AdditivePoly<F::Elem>, q: u64, n_max: usize) -> Result<Self> {
        if !field.is_one(&lattice.coeffs()[0]) {
            return Err(Error::NotNormalized);
        }
        let ring = PolyRing::new(field.clone(), "X");
        let mut table = GossTable {
            polys: vec![ring.zero()],
            ring,
            alpha: lattice.coeffs().to_vec(),
            q,
        };
        table.extend(n_max);
        Ok(table)
    }

    /// Grows the table through `n_max`.
    pub fn extend(&mut self, n_max: usize) {
        let x = self.ring.gen();
        for n in self.polys.len()..=n_max {
            let mut inner = self.polys[n - 1].clone();
            if n == 1 {
                inner = self.ring.one();
            }
            let mut qi = self.q as usize;
            for a in self.alpha.iter().skip(1) {
                if qi >= n {
                    break;
                }
                let term = self.ring.scale(&self.polys[n - qi], a);
                inner = self.ring.add(&inner, &term);
                qi *= self.q as usize;
            }
            let next = self.ring.mul(&x, &inner);
            self.polys.push(next);
        }
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn n_max(&self) -> usize {
        self.polys.len() - 1
    }

    /// `G_n` (`G_0 = 0`).
    pub fn get(&self, n: usize) -> Option<&Poly<F::Elem>> {
        self.polys.get(n)
    }
}

/// `G_{n,P} mod T` from the multinomial closed form: the coefficient of
/// `X^{m+1}` in `G_{n,P}` is the sum over tuples `(i_0..i_s)` with
/// `sum i_l = m`, `sum i_l q^l = n - 1` of `multinomial(m; i) prod (alpha_l/alpha_0)^{i_l}`.
pub fn goss_mod_t_closed_form(fq: &Fq, wp: &PrimePoly, n: usize) -> Result<Poly<FqElem>> {
    goss_mod_t_truncated(fq, wp, n, n)
}

/// As [`goss_mod_t_closed_form`], keeping only the terms of `X`-degree `<= max_deg`.
pub fn goss_mod_t_truncated(fq: &Fq, wp: &PrimePoly, n: usize, max_deg: usize) -> Result<Poly<FqElem>> {
    if wp.is_t() {
        return Err(Error::TIsExcluded);
    }
    if n == 0 {
        return Err(Error::InvalidArgument("Goss polynomials are indexed from 1".into()));
    }
    let q = fq.q() as usize;
    let a0_inv = fq.inv(&wp.residue())?;
    // (q^l - 1, alpha_l / alpha_0) for the nonzero alpha_l, l >= 1.
    let steps: Vec<(usize, FqElem)> = (1..=wp.degree())
        .filter(|&l| !fq.is_zero(&wp.alpha_i(l)))
        .map(|l| (q.pow(l as u32) - 1, fq.mul(&wp.alpha_i(l), &a0_inv)))
        .collect();
    let target = n - 1;
    let mut coeffs = vec![fq.zero(); n.min(max_deg) + 1];
    let mut tuple = vec![0usize; steps.len()];
    for m in 0..=target {
        if m + 1 > max_deg {
            break;
        }
        // sum_{l>=1} i_l (q^l - 1) = target - m, sum_{l>=1} i_l <= m.
        let mut acc = fq.zero();
        enumerate_tuples(&steps, 0, target - m, m, &mut tuple, &mut |t| {
            let i0 = m - t.iter().sum::<usize>();
            let mut parts: Vec<usize> = vec![i0];
            parts.extend(t.iter().copied());
            let multi = multinomial_mod_p(m, &parts, fq.p() as usize);
            if multi == 0 {
                return;
            }
            let mut term = fq.from_int(multi as i64);
            for (k, &il) in t.iter().enumerate() {
                if il > 0 {
                    term = fq.mul(&term, &fq.pow(&steps[k].1, il as u64));
                }
            }
            acc = fq.add(&acc, &term);
        });
        coeffs[m + 1] = acc;
    }
    Ok(PolyRing::new(fq.clone(), "X").from_coeffs(coeffs))
}

fn enumerate_tuples(
    steps: &[(usize, FqElem)],
    idx: usize,
    remaining: usize,
    budget: usize,
    tuple: &mut [usize],
    f: &mut impl FnMut(&[usize]),
) {
    if idx == steps.len() {
        if remaining == 0 {
            f(tuple);
        }
        return;
    }
    let w = steps[idx].0;
    let max = (remaining / w).min(budget);
    for i in 0..=max {
        tuple[idx] = i;
        enumerate_tuples(steps, idx + 1, remaining - i * w, budget - i, tuple, f);
    }
    tuple[idx] = 0;
}

/// `m! / prod parts_l!` modulo `p` by Lucas' theorem (`sum parts = m`).
pub fn multinomial_mod_p(m: usize, parts: &[usize], p: usize) -> usize {
    let mut fact = vec![1usize; p];
    for i in 1..p {
        fact[i] = fact[i - 1] * i % p;
    }
    let inv = |x: usize| -> usize {
        // Fermat inverse in F_p.
        let (mut base, mut e, mut acc) = (x % p, p - 2, 1usize);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let mut m = m;
    let mut parts = parts.to_vec();
    let mut result = 1usize;
    while m > 0 || parts.iter().any(|&x| x > 0) {
        let top = m % p;
        let digits: Vec<usize> = parts.iter().map(|x| x % p).collect();
        if digits.iter().sum::<usize>() != top {
            return 0;
        }
        result = result * fact[top] % p;
        for d in digits {
            result = result * inv(fact[d]) % p;
        }
        m /= p;
        parts.iter_mut().for_each(|x| *x /= p);
    }
    result
}

/// `X`-adic valuation of `G_n` is at least `(n-1)/q^d + 1`.
pub fn goss_order_bound_holds<E>(g: &Poly<E>, r: &impl Ring<Elem = E>, n: usize, q: u64, d: usize) -> bool {
    let ord = match g.coeffs().iter().position(|c| !r.is_zero(c)) {
        Some(o) => o as u64,
        None => return true,
    };
    // ord >= (n-1)/q^d + 1  <=>  (ord - 1) q^d >= n - 1
    ord >= 1 && (ord - 1) * q.pow(d as u32) >= (n as u64 - 1)
}

/// The Goss sum `sum_{n>=1} a_n G_{n,P}(P t)` through `t^{n_out}`, from the
/// coefficients `c_0 = P, c_1, ..., c_d` of `phi_P` over any coefficient
/// ring. Uses `[t^s] G_n(P t) = P [y^n] y phi_P(y)^{s-1}` and the transposed
/// Horner scheme, so no Goss polynomial is materialized and no division occurs.
/// Needs `a_n` for `n <= (n_out - 1) q^d + 1`.
pub fn goss_sum<R: Ring>(r: &R, phi: &[R::Elem], q: u64, a: &[R::Elem], n_out: usize) -> Vec<R::Elem> {
    let mut out = vec![r.zero(); n_out + 1];
    if n_out == 0 {
        return out;
    }
    let d = phi.len() - 1;
    let qd = q.pow(d as u32) as usize;
    let shifts: Vec<usize> = (0..=d).map(|i| q.pow(i as u32) as usize).collect();
    let len0 = (n_out - 1) * qd + 1;
    // lambda[m] = a_{m+1}
    let mut lambda: Vec<R::Elem> =
        (0..len0).map(|m| a.get(m + 1).cloned().unwrap_or_else(|| r.zero())).collect();
    for s in 1..=n_out {
        out[s] = r.mul(&phi[0], &lambda[0]);
        if s == n_out {
            break;
        }
        let len = (n_out - 1 - s) * qd + 1;
        let next: Vec<R::Elem> = (0..len)
            .map(|m| {
                let pairs = phi
                    .iter()
                    .zip(&shifts)
                    .filter(|(c, _)| !r.is_zero(c))
                    .map(|(c, &sh)| (c, &lambda[m + sh]));
                r.sum_of_products(pairs)
            })
            .collect();
        lambda = next;
    }
    out
}

/// Dense table `u[n][s] = [t^s] G_{n,P}(P t)` for `n <= n_max`, `s <= s_max`,
/// built by `u_{n,s} = P u_{n-1,s-1} + sum_{i>=1} c_i u_{n-q^i,s-1}`. Slow; an
/// oracle for [`goss_sum`].
pub fn scaled_goss_table<R: Ring>(
    r: &R,
    phi: &[R::Elem],
    q: u64,
    n_max: usize,
    s_max: usize,
) -> Vec<Vec<R::Elem>> {
    let mut u = vec![vec![r.zero(); s_max + 1]; n_max + 1];
    if n_max >= 1 && s_max >= 1 {
        u[1][1] = phi[0].clone();
    }
    for n in 2..=n_max {
        for s in 1..=s_max {
            let mut acc = r.mul(&phi[0], &u[n - 1][s - 1]);
            for (i, c) in phi.iter().enumerate().skip(1) {
                let qi = q.pow(i as u32) as usize;
                if qi >= n {
                    break;
                }
                acc = r.add(&acc, &r.mul(c, &u[n - qi][s - 1]));
            }
            u[n][s] = acc;
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Parse;
    use crate::polyring::{enumerate_monic_irreducibles, ring_a};

    fn a2() -> RingA {
        ring_a(&Fq::prime(2).unwrap())
    }

    #[test]
    fn phi_examples() {
        let a = a2();
        let t = a.parse_elem("T").unwrap();
        assert_eq!(carlitz_phi(&a, &t).unwrap().coeffs(), &[t.clone(), a.one()]);
        assert_eq!(carlitz_phi(&a, &a.one()).unwrap().coeffs(), &[a.one()]);
        let t2 = a.parse_elem("T^2").unwrap();
        let expected = ["T^2", "T^2+T", "1"].map(|s| a.parse_elem(s).unwrap());
        assert_eq!(carlitz_phi(&a, &t2).unwrap().coeffs(), &expected);
        assert_eq!(carlitz_phi(&a, &a.zero()), Err(Error::ZeroInput));
    }

    #[test]
    fn phi_is_multiplicative() {
        for q in [2u32, 3, 4] {
            let fq = Fq::from_order(q).unwrap();
            let a = ring_a(&fq);
            let polys = ["T^2+1", "T+1", "T^3+T", "T"];
            for x in polys {
                for y in polys {
                    let (px, py) = (a.parse_elem(x).unwrap(), a.parse_elem(y).unwrap());
                    let fx = carlitz_phi(&a, &px).unwrap();
                    let fy = carlitz_phi(&a, &py).unwrap();
                    let fxy = carlitz_phi(&a, &a.mul(&px, &py)).unwrap();
                    assert_eq!(fx.compose(&a, fq.r(), &fy), fxy);
                    assert_eq!(fy.compose(&a, fq.r(), &fx), fxy);
                }
            }
        }
    }

    #[test]
    fn torsion_exponential_examples() {
        let fq = Fq::prime(2).unwrap();
        let k = RatField::new(&fq);
        let wp = PrimePoly::parse(k.ring(), "T+1").unwrap();
        let e = torsion_exponential(&k, &wp);
        assert_eq!(e.coeffs()[0], k.one());
        assert_eq!(e.coeffs()[1], k.parse_elem("1/(T+1)").unwrap());
        let wp = PrimePoly::parse(k.ring(), "T^2+T+1").unwrap();
        let e = torsion_exponential(&k, &wp);
        let reduced: Vec<FqElem> = e.coeffs().iter().map(|c| k.reduce_at(c, FqElem::ZERO).unwrap()).collect();
        assert_eq!(reduced, vec![FqElem::ONE; 3]);
    }

    #[test]
    fn t_sub_a_examples() {
        let a = a2();
        let one = t_sub_a(&a, &a.one(), 5).unwrap();
        assert_eq!(one, TSeries::monomial(&a, a.one(), 1, 5));
        let t = a.parse_elem("T").unwrap();
        let ta = t_sub_a(&a, &t, 4).unwrap();
        let expected = vec![a.zero(), a.zero(), a.one(), t.clone(), a.mul(&t, &t)];
        assert_eq!(ta.coeffs(), expected.as_slice());
        assert_eq!(t_sub_a(&a, &a.parse_elem("0").unwrap(), 3), Err(Error::NotMonic));
    }

    /// `t_a` inverts `phi_a(1/t)`: checked by multiplying back, as Laurent
    /// series shifted by `t^{q^d}`.
    #[test]
    fn t_sub_a_inverts_phi() {
        for q in [2u32, 3] {
            let fq = Fq::prime(q).unwrap();
            let a = ring_a(&fq);
            let polys: &[&str] = if q == 2 { &["T^2+T+1", "T^3+T+1", "T^2"] } else { &["T^3+2*T+1", "T^2"] };
            for s in polys {
                let x = a.parse_elem(s).unwrap();
                let prec = 60;
                let ta = t_sub_a(&a, &x, prec).unwrap();
                let phi = carlitz_phi(&a, &x).unwrap();
                let d = phi.q_degree();
                let qd = (q as usize).pow(d as u32);
                // t^{q^d} phi_a(1/t) = sum c_i t^{q^d - q^i}
                let den = phi_denominator(&a, phi.coeffs(), q as u64, prec);
                let prod = ta.mul(&a, &den);
                assert_eq!(prod, TSeries::monomial(&a, a.one(), qd, prec));
            }
        }
    }

    #[test]
    fn t_power_matches_plain_power() {
        for q in [2u32, 3, 4] {
            let fq = Fq::from_order(q).unwrap();
            let a = ring_a(&fq);
            for s in ["T", "T^2+1", "T+1"] {
                let x = a.parse_elem(s).unwrap();
                let phi = carlitz_phi(&a, &x).unwrap();
                let prec = 80;
                let ta = t_from_phi(&a, phi.coeffs(), q as u64, prec).unwrap();
                let fast = t_power_q_minus_1_from_phi(&a, phi.coeffs(), q as u64, fq.r(), prec).unwrap();
                assert_eq!(fast, ta.pow(&a, q as u64 - 1));
            }
        }
    }

    #[test]
    fn goss_small_cases() {
        let fq = Fq::prime(3).unwrap();
        let k = RatField::new(&fq);
        let wp = PrimePoly::parse(k.ring(), "T^2+1").unwrap();
        let e = torsion_exponential(&k, &wp);
        let table = GossTable::new(&k, &e, 3, 12).unwrap();
        let x = table.ring().clone();
        for n in 1..=3 {
            assert_eq!(table.get(n).unwrap(), &x.monomial(k.one(), n));
        }
        let expected = x.add(&x.monomial(k.one(), 4), &x.monomial(e.coeffs()[1].clone(), 2));
        assert_eq!(table.get(4).unwrap(), &expected);
        for n in 1..=12 {
            let g = table.get(n).unwrap();
            assert_eq!(g.degree(), Some(n));
            assert!(k.is_one(g.leading().unwrap()));
            assert!(k.is_zero(&x.coeff_or_zero(g, 0)));
        }
        let trivial = AdditivePoly::new(&k, vec![k.one()]).unwrap();
        let t2 = GossTable::new(&k, &trivial, 3, 10).unwrap();
        for n in 1..=10 {
            assert_eq!(t2.get(n).unwrap(), &x.monomial(k.one(), n));
        }
        let bad = AdditivePoly::new(&k, vec![k.from_int(2)]).unwrap();
        assert!(matches!(GossTable::new(&k, &bad, 3, 4), Err(Error::NotNormalized)));
    }

    #[test]
    fn multinomials_mod_p() {
        let binom = |n: usize, k: usize| -> usize {
            let mut c = 1u128;
            for i in 0..k {
                c = c * (n - i) as u128 / (i + 1) as u128;
            }
            c as usize
        };
        for p in [2usize, 3, 5] {
            for m in 0..30 {
                for i in 0..=m {
                    for j in 0..=(m - i) {
                        let exact = binom(m, i) * binom(m - i, j) % p;
                        assert_eq!(multinomial_mod_p(m, &[i, j, m - i - j], p), exact);
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_recursion_mod_t() {
        for q in [2u32, 3] {
            let fq = Fq::prime(q).unwrap();
            let k = RatField::new(&fq);
            for d in 1..=3 {
                for wp in enumerate_monic_irreducibles(k.ring(), d, true).unwrap() {
                    let e = torsion_exponential(&k, &wp);
                    let table = GossTable::new(&k, &e, q as u64, 50).unwrap();
                    let x_fq = PolyRing::new(fq.clone(), "X");
                    for n in 1..=50 {
                        let g = table.get(n).unwrap();
                        let reduced =
                            x_fq.from_coeffs(g.coeffs().iter().map(|c| k.reduce_at(c, FqElem::ZERO).unwrap()).collect());
                        assert_eq!(reduced, goss_mod_t_closed_form(&fq, &wp, n).unwrap(), "n={n}");
                        assert!(goss_order_bound_holds(g, &k, n, q as u64, d));
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_x2_coefficients() {
        let fq = Fq::prime(3).unwrap();
        let a = ring_a(&fq);
        let wp = PrimePoly::parse(&a, "T^3+2*T+1").unwrap();
        for n in 4..=28 {
            let g = goss_mod_t_closed_form(&fq, &wp, n).unwrap();
            let c2 = g.coeff(2).copied().unwrap_or(FqElem::ZERO);
            let expected = match n {
                4 => fq.div(&wp.alpha_i(1), &wp.alpha_i(0)).unwrap(),
                10 => fq.div(&wp.alpha_i(2), &wp.alpha_i(0)).unwrap(),
                28 => fq.div(&wp.alpha_i(3), &wp.alpha_i(0)).unwrap(),
                _ => FqElem::ZERO,
            };
            assert_eq!(c2, expected, "n={n}");
        }
        let t = PrimePoly::parse(&a, "T").unwrap();
        assert_eq!(goss_mod_t_closed_form(&fq, &t, 3), Err(Error::TIsExcluded));
    }

    #[test]
    fn goss_sum_matches_dense_table_and_recursion() {
        for q in [2u32, 3] {
            let fq = Fq::prime(q).unwrap();
            let k = RatField::new(&fq);
            let a = k.ring().clone();
            for wp in crate::polyring::primes_up_to_degree(&a, 2).unwrap() {
                let phi = carlitz_phi(&a, wp.poly()).unwrap();
                let d = wp.degree();
                let n_out = 6;
                let n_in = (n_out - 1) * (q as usize).pow(d as u32) + 1;
                let table = scaled_goss_table(&a, phi.coeffs(), q as u64, n_in, n_out);
                // the scaled table is P^s [X^s] G_n
                let goss = GossTable::new(&k, &torsion_exponential(&k, &wp), q as u64, n_in).unwrap();
                for n in 1..=n_in {
                    for s in 1..=n_out {
                        let c = goss.ring().coeff_or_zero(goss.get(n).unwrap(), s);
                        let scaled = k.mul(&c, &k.from_poly(a.pow(wp.poly(), s as u64)));
                        assert_eq!(scaled, k.from_poly(table[n][s].clone()));
                    }
                }
                let coeffs: Vec<PolyA> =
                    (0..=n_in).map(|i| a.from_coeffs(vec![fq.from_int(i as i64 + 1), fq.from_int(i as i64)])).collect();
                let fast = goss_sum(&a, phi.coeffs(), q as u64, &coeffs, n_out);
                for s in 1..=n_out {
                    let slow = a.sum_of_products((1..=n_in).map(|n| (&coeffs[n], &table[n][s])));
                    assert_eq!(fast[s], slow);
                }
                assert!(a.is_zero(&fast[0]));
            }
        }
    }
}
