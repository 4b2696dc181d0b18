#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropkp_core::limits::{Component, Divisor, KappaConfig};
use tropkp_core::scalar::rat;
use tropkp_core::Scalar;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Scalar {
    rat(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

pub fn nonzero(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Scalar {
    loop {
        let q = rational(rng, max_num, max_den);
        if q != rat(0, 1) {
            return q;
        }
    }
}

/// `q + delta` for a random nonzero `delta` with nonzero result.
pub fn perturbed(rng: &mut ChaCha8Rng, q: &Scalar) -> Scalar {
    loop {
        let p = q + nonzero(rng, 5, 3);
        if p != rat(0, 1) {
            return p;
        }
    }
}

pub fn positive(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Scalar {
    rat(rng.gen_range(1..=max_num), rng.gen_range(1..=max_den))
}

pub fn nonzero_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<Scalar> {
    (0..len).map(|_| nonzero(rng, 9, 5)).collect()
}

pub fn positive_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<Scalar> {
    (0..len).map(|_| positive(rng, 9, 5)).collect()
}

/// Pairwise distinct rational kappas.
pub fn kappas(rng: &mut ChaCha8Rng, n: usize) -> KappaConfig {
    loop {
        let ks: Vec<Scalar> = (0..n).map(|_| rational(rng, 12, 4)).collect();
        if let Ok(kc) = KappaConfig::new(ks) {
            return kc;
        }
    }
}

pub fn sorted_kappas(rng: &mut ChaCha8Rng, n: usize) -> KappaConfig {
    loop {
        let mut ks: Vec<Scalar> = (0..n).map(|_| rational(rng, 6, 4)).collect();
        ks.sort();
        if let Ok(kc) = KappaConfig::new(ks) {
            return kc;
        }
    }
}

/// One point strictly inside each gap of the sorted kappas, in shuffled order.
pub fn interlaced_divisor(rng: &mut ChaCha8Rng, kc: &KappaConfig, split_k: usize) -> Divisor {
    let mut points: Vec<Scalar> = (1..kc.n())
        .map(|i| {
            let t = rat(rng.gen_range(1..=9), 10);
            kc.kappa(i) + (kc.kappa(i + 1) - kc.kappa(i)) * t
        })
        .collect();
    for i in (1..points.len()).rev() {
        points.swap(i, rng.gen_range(0..=i));
    }
    Divisor::new(points, split_k, Component::Plus).expect("valid split")
}

pub fn samples(rng: &mut ChaCha8Rng, count: usize) -> Vec<[f64; 3]> {
    (0..count).map(|_| [0, 1, 2].map(|_| rng.gen_range(-1.0..=1.0))).collect()
}
