use std::collections::BTreeMap;

use num::complex::{Complex, Complex64};
use num::Zero;
use proptest::prelude::*;

use superspace::basischange::{product_to_spherical, spherical_to_product, Dims, SphericalLabel};
use superspace::grassmann::GrassmannElement;
use superspace::harmonics::dim_super_harmonics;
use superspace::integrate::{gaussian_integral, gaussian_pairing, inner1};
use superspace::scalar::{int, rat, GaussianRational, Rational};
use superspace::spectral::{heisenberg_check, parseval_check, schwartz_norm, CoeffOp, NormVariant};
use superspace::superpoly::{Monomial, OperatorKind::*};
use superspace::{ExactGrassmann, ExactPoly, Expansion64};

fn gauss(re: i64, im: i64, den: i64) -> GaussianRational {
    Complex::new(rat(re, den), rat(im, den))
}

fn poly(m: usize, n: usize, max_deg: u32) -> impl Strategy<Value = ExactPoly> {
    let term = (
        prop::collection::vec(0u32..=3, m),
        0u16..(1u16 << (2 * n)),
        -6i64..=6,
        -6i64..=6,
        1i64..=4,
    );
    prop::collection::vec(term, 1..6).prop_map(move |terms| {
        let terms = terms.into_iter().filter_map(|(bos, mask, re, im, den)| {
            let mono = Monomial::new(&bos, mask).ok()?;
            (mono.degree() <= max_deg).then(|| (mono, gauss(re, im, den)))
        });
        ExactPoly::from_terms(m, n, terms.collect::<Vec<_>>()).unwrap()
    })
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=4, 0usize..=2)
}

fn poly_any(max_deg: u32) -> impl Strategy<Value = ExactPoly> {
    dims().prop_flat_map(move |(m, n)| poly(m, n, max_deg))
}

fn grassmann(n: usize) -> impl Strategy<Value = ExactGrassmann> {
    prop::collection::vec((0u16..(1u16 << (2 * n)), -5i64..=5, -5i64..=5), 0..8).prop_map(move |t| {
        GrassmannElement::from_terms(n, t.into_iter().map(|(mask, a, b)| (mask, gauss(a, b, 1)))).unwrap()
    })
}

fn expansion(m: usize, n: usize) -> impl Strategy<Value = Expansion64> {
    prop::collection::vec((0usize..=6, 0usize..=4, 1u64..=40, -1.0f64..1.0, -1.0f64..1.0), 1..10).prop_map(
        move |terms| {
            let mut f = Expansion64::new(m, n).unwrap();
            for (j, k, l, re, im) in terms {
                let dim = dim_super_harmonics(m, n, k);
                let l = 1 + (l - 1) % dim;
                f.set((j, k, l as usize), Complex64::new(re, im)).unwrap();
            }
            f
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sl2_commutator(f in poly_any(6)) {
        let half = rat(1, 2);
        let a = f.apply(R2Mul).unwrap().scale_rational(&half).apply(Laplacian).unwrap().scale_rational(&half);
        let b = f.apply(Laplacian).unwrap().scale_rational(&half).apply(R2Mul).unwrap().scale_rational(&half);
        let rhs = f.apply(Euler).unwrap().add(&f.scale_rational(&rat(f.superdim(), 2))).unwrap();
        prop_assert_eq!(a.sub(&b).unwrap(), rhs);
    }

    #[test]
    fn laplace_beltrami_definition(f in poly_any(5)) {
        let m = f.superdim();
        let e = f.apply(Euler).unwrap();
        let composed = f.apply(Laplacian).unwrap().apply(R2Mul).unwrap()
            .sub(&e.apply(Euler).unwrap().add(&e.scale_rational(&int(m - 2))).unwrap()).unwrap();
        prop_assert_eq!(f.apply(LaplaceBeltrami).unwrap(), composed);
    }

    #[test]
    fn osp_generators_commute_with_r2(f in poly(3, 1, 4)) {
        for i in 1..=5 {
            for j in 1..=5 {
                let a = f.apply(R2Mul).unwrap().apply(Osp(i, j)).unwrap();
                let b = f.apply(Osp(i, j)).unwrap().apply(R2Mul).unwrap();
                prop_assert_eq!(a, b, "L_({},{})", i, j);
            }
        }
    }

    #[test]
    fn ladder_hamiltonian(f in poly_any(5)) {
        let (m, n) = (f.m(), f.n());
        let mut h = f.scale_rational(&rat(f.superdim(), 2));
        for i in 1..=m {
            h = h.add(&f.apply_all(&[LadderBosPlus(i), LadderBosMinus(i)]).unwrap().scale_rational(&rat(1, 2))).unwrap();
        }
        for j in 1..=2 * n {
            h = h.add(&f.apply_all(&[LadderFermPlus(j), LadderFermMinus(j)]).unwrap()).unwrap();
        }
        let want = f.apply(R2Mul).unwrap().sub(&f.apply(Laplacian).unwrap()).unwrap().scale_rational(&rat(1, 2));
        prop_assert_eq!(h, want);
    }

    #[test]
    fn homogeneous_parts_are_euler_eigenvectors(f in poly_any(6)) {
        let mut sum = ExactPoly::zero(f.m(), f.n()).unwrap();
        for (d, part) in f.homogeneous_parts() {
            prop_assert_eq!(part.apply(Euler).unwrap(), part.scale_rational(&int(d as i64)));
            sum = sum.add(&part).unwrap();
        }
        prop_assert_eq!(sum, f);
    }

    #[test]
    fn grassmann_associative_and_tilde_involution(a in grassmann(2), b in grassmann(2), c in grassmann(2)) {
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        // tilde reverses products
        prop_assert_eq!(a.mul(&b).unwrap().tilde(), b.tilde().mul(&a.tilde()).unwrap());
        for (mask, v) in a.terms() {
            let single = GrassmannElement::from_terms(2, [(mask, v.clone())]).unwrap();
            let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(single.tilde().tilde(), single.scale(&Complex::new(int(sign), Rational::zero())));
        }
    }

    #[test]
    fn lambda_inner_product_hermitian(a in grassmann(2), b in grassmann(2)) {
        let ab = a.inner_lambda(&b).unwrap();
        let ba = b.inner_lambda(&a).unwrap();
        prop_assert!(ab.sub(&ba.conj()).unwrap().is_zero());
        let aa = a.inner_lambda(&a).unwrap();
        prop_assert!(aa.is_real() && aa.coeff.re >= Rational::zero());
    }

    #[test]
    fn pairing_is_integral_of_product(p in poly(2, 1, 4), q in poly(2, 1, 4)) {
        let a = gaussian_pairing(&p, &q).unwrap();
        let b = gaussian_integral(&p.mul(&q).unwrap());
        prop_assert!(a.sub(&b).unwrap().is_zero());
    }

    #[test]
    fn inner1_hermitian(p in poly(2, 1, 3), q in poly(2, 1, 3)) {
        let a = inner1(&p, &q).unwrap();
        let b = inner1(&q, &p).unwrap();
        prop_assert!(a.sub(&b.conj()).unwrap().is_zero());
    }

    #[test]
    fn spectral_invariants(f in expansion(5, 2), g in expansion(5, 2)) {
        prop_assert!(parseval_check(&f, &g).unwrap() < 1e-12);
        let fg = f.inner2(&g).unwrap();
        let gf = g.inner2(&f).unwrap();
        prop_assert!((fg - gf.conj()).norm() < 1e-14);
        for op in [CoeffOp::R2, CoeffOp::Nabla2] {
            let d = f.apply(op).inner2(&g).unwrap() - f.inner2(&g.apply(op)).unwrap();
            prop_assert!(d.norm() < 1e-11);
        }
        let s = f.apply(CoeffOp::EulerPlusM2).inner2(&g).unwrap() + f.inner2(&g.apply(CoeffOp::EulerPlusM2)).unwrap();
        prop_assert!(s.norm() < 1e-11);
        let mut four = f.clone();
        for _ in 0..4 {
            four = four.apply(CoeffOp::FourierPlus);
        }
        prop_assert_eq!(&four, &f);
        let h = heisenberg_check(&f).unwrap();
        prop_assert!(h.lhs >= h.rhs - 1e-10);
    }

    #[test]
    fn schwartz_norms_monotone(f in expansion(3, 1)) {
        let mut prev = 0.0;
        for r in 0..=4 {
            let v = schwartz_norm(&f, r, NormVariant::Spherical).unwrap();
            prop_assert!(v >= prev);
            prev = v;
        }
        let n0 = schwartz_norm(&f, 0, NormVariant::Spherical).unwrap();
        prop_assert!((n0 * n0 - f.norm2()).abs() < 1e-12);
        // the star family dominates after a fixed shift in r
        let star = schwartz_norm(&f, 3, NormVariant::Star).unwrap();
        prop_assert!(schwartz_norm(&f, 1, NormVariant::Spherical).unwrap() <= 50.0 * star);
    }

    #[test]
    fn basis_change_round_trip(terms in prop::collection::vec((0usize..=6, 0usize..=1, 0usize..=3, 0usize..=1, -1.0f64..1.0), 1..8)) {
        let d = Dims::new(3, 1).unwrap();
        let mut c = BTreeMap::new();
        for (j, k, p, q, v) in terms {
            let q = q.min(1 - k);
            c.insert(SphericalLabel { j, k, p, q, l: 1, t: 1 }, Complex64::new(v, 0.5 * v));
        }
        let back = product_to_spherical(d, &spherical_to_product(d, &c).unwrap()).unwrap();
        for (lab, v) in &back {
            let want = c.get(lab).copied().unwrap_or(Complex64::zero());
            prop_assert!((v - want).norm() < 1e-12, "{:?}", lab);
        }
    }
}

#[test]
fn fermionic_annihilator_kills_gaussian_truncation() {
    // 1 + x`_1 x`_2 / 2 is the polynomial part of exp(-theta^2/2) for n = 1
    let p = ExactPoly::one(0, 1)
        .unwrap()
        .add(&ExactPoly::xf(0, 1, 1).unwrap().mul(&ExactPoly::xf(0, 1, 2).unwrap()).unwrap().scale_rational(&rat(1, 2)))
        .unwrap();
    assert!(p.apply(LadderFermMinus(2)).unwrap().is_zero());
}
