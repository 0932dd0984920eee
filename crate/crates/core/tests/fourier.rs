use hecke_padic_core::cyclo::Cyclo;
use hecke_padic_core::fourier::{
    convolve, finite_fourier, inverse_finite_fourier, l2_norm_sq, FiniteCharacter, TorsionFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_fn(rng: &mut ChaCha8Rng, p: u64, n: u32, r: usize, density: f64) -> TorsionFunction {
    let m = p.pow(n);
    TorsionFunction::from_fn(p, n, r, "T", |_| {
        if rng.gen_bool(density) {
            let a = Cyclo::from_rational(1, rng.gen_range(-9..=9), rng.gen_range(1..=4));
            a.mul(&Cyclo::root(m, rng.gen_range(0..m as i64)))
        } else {
            Cyclo::zero(1)
        }
    })
}

#[test]
fn inversion_roundtrip_large_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = random_fn(&mut rng, 5, 2, 2, 0.5);
    let t = finite_fourier(&f, 2).unwrap();
    let back = inverse_finite_fourier(&t, "T");
    assert!(back.equals(&f));
}

#[test]
fn parseval_and_convolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &(p, n, r) in &[(2u64, 2u32, 2usize), (3, 1, 2), (3, 2, 1)] {
        let f = random_fn(&mut rng, p, n, r, 0.6);
        let g = random_fn(&mut rng, p, n, r, 0.6);
        let size = Cyclo::from_int(1, p.pow(n * r as u32) as i64);
        let ft = finite_fourier(&f, n).unwrap();
        let lhs = l2_norm_sq(&f);
        let rhs = l2_norm_sq(&ft.as_function("dual")).mul(&size);
        assert!(lhs.equals(&rhs));
        let conv = convolve(&f, &g).unwrap();
        let ct = finite_fourier(&conv, n).unwrap();
        let gt = finite_fourier(&g, n).unwrap();
        let prod = ft.as_function("dual").mul(&gt.as_function("dual")).unwrap().scale(&size);
        assert!(ct.as_function("dual").equals(&prod));
    }
}

#[test]
fn level_compatibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = random_fn(&mut rng, 3, 1, 2, 0.8);
    let t1 = finite_fourier(&f, 1).unwrap();
    let t2 = finite_fourier(&f, 2).unwrap();
    for (chi, v) in t2.iter() {
        if chi.exps.iter().all(|e| e % 3 == 0) {
            let c = FiniteCharacter::new(3, 1, chi.exps.iter().map(|e| e / 3).collect());
            assert!(v.equals(t1.get(&c)));
        } else {
            assert!(v.is_zero());
        }
    }
}
