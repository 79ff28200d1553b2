//! Seeded generators for test inputs.

use num::complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superspace::harmonics::dim_super_harmonics;
use superspace::scalar::{rat, GaussianRational};
use superspace::superpoly::Monomial;
use superspace::{ExactPoly, Expansion64, Result};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random monomial of total degree `deg`, or `None` when no such monomial
/// exists for the drawn fermionic part.
fn monomial(r: &mut ChaCha8Rng, m: usize, n: usize, deg: u32) -> Option<Monomial> {
    let fdeg = r.gen_range(0..=deg.min(2 * n as u32));
    let mut mask = 0u16;
    while mask.count_ones() < fdeg {
        mask |= 1 << r.gen_range(0..2 * n);
    }
    let mut bos = vec![0u32; m];
    if m == 0 && deg > fdeg {
        return None;
    }
    for _ in 0..deg - fdeg {
        bos[r.gen_range(0..m)] += 1;
    }
    Monomial::new(&bos, mask).ok()
}

fn gaussian_rational(r: &mut ChaCha8Rng) -> GaussianRational {
    let part = |r: &mut ChaCha8Rng| rat(r.gen_range(-9..=9), r.gen_range(1..=6));
    Complex::new(part(r), part(r))
}

/// Random superpolynomial with up to `max_terms` terms of degree `<= max_deg`.
pub fn superpoly(r: &mut ChaCha8Rng, m: usize, n: usize, max_deg: u32, max_terms: usize) -> Result<ExactPoly> {
    let count = r.gen_range(1..=max_terms);
    let mut terms = Vec::with_capacity(count);
    while terms.len() < count {
        let deg = r.gen_range(0..=max_deg);
        if let Some(mono) = monomial(r, m, n, deg) {
            terms.push((mono, gaussian_rational(r)));
        }
    }
    ExactPoly::from_terms(m, n, terms)
}

/// Random finite expansion with `terms` draws of labels `j <= jmax`, `k <= kmax`.
pub fn expansion(r: &mut ChaCha8Rng, m: usize, n: usize, terms: usize, jmax: usize, kmax: usize) -> Result<Expansion64> {
    let mut f = Expansion64::new(m, n)?;
    for _ in 0..terms {
        let j = r.gen_range(0..=jmax);
        let k = r.gen_range(0..=kmax);
        let dim = dim_super_harmonics(m, n, k);
        if dim == 0 {
            continue;
        }
        let l = r.gen_range(1..=dim) as usize;
        let v = Complex::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        f.set((j, k, l), v)?;
    }
    Ok(f)
}
