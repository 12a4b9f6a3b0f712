//! Seeded dataset generators shared by the integration suites.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smotenn_core::{Dataset, Label, Sample};

/// Box-Muller standard normal.
pub fn normal(g: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - g.gen::<f64>();
    let u2: f64 = g.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// A random small problem: `m` in 20..=300 rows, 1..=8 features, minority
/// share 10-50 %. Odd seeds use integer grid coordinates so that distance
/// ties are frequent.
pub fn random_dataset(seed: u64) -> Dataset {
    let mut g = ChaCha8Rng::seed_from_u64(seed ^ 0xda7a);
    let m = g.gen_range(20..=300);
    let dim = g.gen_range(1..=8);
    let share = g.gen_range(0.1..0.5);
    let grid = seed % 2 == 1;
    let mut minority = 0;
    let mut samples = Vec::with_capacity(m);
    for i in 0..m {
        let is_min = g.gen::<f64>() < share;
        let label = if is_min { Label::Minority } else { Label::Majority };
        minority += usize::from(is_min);
        let shift = if is_min { 1.0 } else { 0.0 };
        let x = (0..dim)
            .map(|_| {
                let v = normal(&mut g) + shift;
                if grid {
                    (v * 2.0).round()
                } else {
                    v
                }
            })
            .collect();
        samples.push(Sample::new(i as u64 * 3 + 7, x, label));
    }
    if minority < 8 {
        for s in samples.iter_mut().take(8) {
            s.label = Label::Minority;
        }
    }
    Dataset::new(format!("rand{seed}"), samples).unwrap()
}

/// Two isotropic Gaussians: majority at the origin, minority shifted by
/// `shift` along every axis.
pub fn two_gaussians(seed: u64, m: usize, ir: f64, dim: usize, shift: f64) -> Dataset {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    let minority = (m as f64 / (ir + 1.0)).round() as usize;
    let samples = (0..m)
        .map(|i| {
            let label = if i < minority { Label::Minority } else { Label::Majority };
            let off = if i < minority { shift } else { 0.0 };
            Sample::new(i as u64, (0..dim).map(|_| normal(&mut g) + off).collect(), label)
        })
        .collect();
    Dataset::new(format!("gauss{seed}"), samples).unwrap()
}
