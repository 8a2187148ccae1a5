//! Multiplication kernels for `F_q[T]`, the hot loop of every series product.

use crate::ffield::{Fq, FqElem};

pub(crate) fn fq_poly_mul(f: &Fq, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
    let n = a.len() + b.len() - 1;
    if f.is_prime_field() {
        let p = f.p() as u64;
        if p == 2 && a.len().min(b.len()) > 16 {
            return gf2_mul(a, b);
        }
        if p < (1 << 16) {
            // p^2 < 2^32, so at least 2^32 products fit before overflow.
            let mut acc = vec![0u64; n];
            for (i, x) in a.iter().enumerate() {
                if x.0 == 0 {
                    continue;
                }
                let xv = x.0 as u64;
                for (slot, y) in acc[i..i + b.len()].iter_mut().zip(b) {
                    *slot += xv * y.0 as u64;
                }
            }
            return acc.into_iter().map(|v| FqElem((v % p) as u32)).collect();
        }
        let mut acc = vec![0u128; n];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                acc[i + j] += x.0 as u128 * y.0 as u128;
            }
        }
        return acc.into_iter().map(|v| FqElem((v % p as u128) as u32)).collect();
    }
    let q = f.q() as usize;
    let mul = f.mul_table().expect("extension fields carry tables");
    let mut out = vec![0u32; n];
    if f.p() == 2 {
        for (i, x) in a.iter().enumerate() {
            if x.0 == 0 {
                continue;
            }
            let row = &mul[x.0 as usize * q..(x.0 as usize + 1) * q];
            for (slot, y) in out[i..i + b.len()].iter_mut().zip(b) {
                *slot ^= row[y.0 as usize];
            }
        }
    } else {
        let add = f.add_table().expect("extension fields carry tables");
        for (i, x) in a.iter().enumerate() {
            if x.0 == 0 {
                continue;
            }
            let row = &mul[x.0 as usize * q..(x.0 as usize + 1) * q];
            for (slot, y) in out[i..i + b.len()].iter_mut().zip(b) {
                *slot = add[*slot as usize * q + row[y.0 as usize] as usize];
            }
        }
    }
    out.into_iter().map(FqElem).collect()
}

/// Fused `sum a_i * b_i` over `F_q[T]`: one accumulation buffer, a single
/// reduction at the end.
pub(crate) fn fq_poly_sum_of_products<'a, I>(f: &Fq, pairs: I) -> Vec<FqElem>
where
    I: IntoIterator<Item = (&'a [FqElem], &'a [FqElem])>,
{
    if f.is_prime_field() {
        let p = f.p() as u64;
        if p == 2 {
            let clmul = clmul_fn();
            let mut out: Vec<u64> = Vec::new();
            for (a, b) in pairs {
                if a.is_empty() || b.is_empty() {
                    continue;
                }
                let wa = pack_bits(a);
                let wb = pack_bits(b);
                if out.len() < wa.len() + wb.len() {
                    out.resize(wa.len() + wb.len(), 0);
                }
                for (i, &x) in wa.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in wb.iter().enumerate() {
                        let (lo, hi) = clmul(x, y);
                        out[i + j] ^= lo;
                        out[i + j + 1] ^= hi;
                    }
                }
            }
            return (0..out.len() * 64)
                .map(|i| FqElem(((out[i / 64] >> (i % 64)) & 1) as u32))
                .collect();
        }
        if p < (1 << 16) {
            let mut acc: Vec<u64> = Vec::new();
            let mut terms = 0u64;
            for (a, b) in pairs {
                if a.is_empty() || b.is_empty() {
                    continue;
                }
                let n = a.len() + b.len() - 1;
                if acc.len() < n {
                    acc.resize(n, 0);
                }
                for (i, x) in a.iter().enumerate() {
                    if x.0 == 0 {
                        continue;
                    }
                    let xv = x.0 as u64;
                    for (slot, y) in acc[i..i + b.len()].iter_mut().zip(b) {
                        *slot += xv * y.0 as u64;
                    }
                }
                terms += a.len().min(b.len()) as u64;
                if terms >= 1 << 30 {
                    acc.iter_mut().for_each(|v| *v %= p);
                    terms = 0;
                }
            }
            return acc.into_iter().map(|v| FqElem((v % p) as u32)).collect();
        }
    }
    let mut out: Vec<FqElem> = Vec::new();
    for (a, b) in pairs {
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let prod = fq_poly_mul(f, a, b);
        if out.len() < prod.len() {
            out.resize(prod.len(), FqElem(0));
        }
        for (slot, x) in out.iter_mut().zip(&prod) {
            *slot = crate::ring::Ring::add(f, slot, x);
        }
    }
    out
}

fn pack_bits(a: &[FqElem]) -> Vec<u64> {
    let mut words = vec![0u64; a.len().div_ceil(64)];
    for (i, x) in a.iter().enumerate() {
        if x.0 != 0 {
            words[i / 64] |= 1 << (i % 64);
        }
    }
    words
}

fn gf2_mul(a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
    let n = a.len() + b.len() - 1;
    let wa = pack_bits(a);
    let wb = pack_bits(b);
    let mut out = vec![0u64; wa.len() + wb.len()];
    let clmul = clmul_fn();
    for (i, &x) in wa.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in wb.iter().enumerate() {
            let (lo, hi) = clmul(x, y);
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
    (0..n).map(|i| FqElem(((out[i / 64] >> (i % 64)) & 1) as u32)).collect()
}

type Clmul = fn(u64, u64) -> (u64, u64);

fn clmul_soft(a: u64, b: u64) -> (u64, u64) {
    let (mut lo, mut hi) = (0u64, 0u64);
    let mut bits = b;
    while bits != 0 {
        let i = bits.trailing_zeros();
        lo ^= a << i;
        if i > 0 {
            hi ^= a >> (64 - i);
        }
        bits &= bits - 1;
    }
    (lo, hi)
}

#[cfg(target_arch = "x86_64")]
fn clmul_fn() -> Clmul {
    if std::arch::is_x86_feature_detected!("pclmulqdq") {
        clmul_hw
    } else {
        clmul_soft
    }
}

#[cfg(not(target_arch = "x86_64"))]
fn clmul_fn() -> Clmul {
    clmul_soft
}

#[cfg(target_arch = "x86_64")]
fn clmul_hw(a: u64, b: u64) -> (u64, u64) {
    // SAFETY: only selected after runtime detection of pclmulqdq.
    unsafe { clmul_hw_inner(a, b) }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq", enable = "sse2")]
unsafe fn clmul_hw_inner(a: u64, b: u64) -> (u64, u64) {
    use std::arch::x86_64::*;
    let va = _mm_set_epi64x(0, a as i64);
    let vb = _mm_set_epi64x(0, b as i64);
    let r = _mm_clmulepi64_si128(va, vb, 0);
    let lo = _mm_cvtsi128_si64(r) as u64;
    let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)) as u64;
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn schoolbook(f: &Fq, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
        let mut out = vec![FqElem(0); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        out
    }

    fn pseudo_random(len: usize, q: u32, seed: u64) -> Vec<FqElem> {
        let mut s = seed;
        (0..len)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                FqElem(((s >> 33) % q as u64) as u32)
            })
            .collect()
    }

    #[test]
    fn kernels_agree_with_schoolbook() {
        for q in [2, 3, 4, 5, 8, 9, 65537] {
            let f = Fq::from_order(q).unwrap();
            for (la, lb) in [(1, 1), (3, 70), (65, 130), (200, 17)] {
                let a = pseudo_random(la, q, la as u64 * 31 + q as u64);
                let b = pseudo_random(lb, q, lb as u64 * 17 + 5);
                assert_eq!(fq_poly_mul(&f, &a, &b), schoolbook(&f, &a, &b), "q={q}");
            }
        }
    }

    #[test]
    fn soft_clmul_matches_hardware() {
        let cases = [(0u64, 5u64), (u64::MAX, u64::MAX), (0x8000_0000_0000_0001, 3)];
        for (a, b) in cases {
            assert_eq!(clmul_soft(a, b), clmul_fn()(a, b));
        }
    }
}
