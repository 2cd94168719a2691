#![allow(dead_code)]

use psvg::synth::{gen_fbm, gen_monotone, gen_uniform_random, FbmConfig};
use psvg::TimeSeries;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub enum Class {
    Uniform,
    Monotone,
    Constant,
    Fbm(f64),
    Collinear,
}

pub const ALL_CLASSES: [Class; 7] = [
    Class::Uniform,
    Class::Monotone,
    Class::Constant,
    Class::Fbm(0.2),
    Class::Fbm(0.5),
    Class::Fbm(0.8),
    Class::Collinear,
];

/// Piecewise-linear runs with decimal slopes, plateaus and repeated levels:
/// every other triple is collinear in intent and many are collinear in
/// binary too.
pub fn adversarial_collinear(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut level = (rng.gen_range(-20..20) as f64) * 0.1;
    while out.len() < len {
        let run = rng.gen_range(2..12);
        let slope = match rng.gen_range(0..4) {
            0 => 0.0,
            1 => rng.gen_range(-5..=5) as f64 * 0.1,
            2 => rng.gen_range(-3..=3) as f64,
            _ => rng.gen_range(-9..=9) as f64 / 3.0,
        };
        for _ in 0..run {
            if out.len() == len {
                break;
            }
            out.push(level);
            level += slope;
        }
        if rng.gen_bool(0.3) {
            level = out[rng.gen_range(0..out.len())];
        }
    }
    out
}

pub fn series_of(class: Class, len: usize, seed: u64) -> TimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    match class {
        Class::Uniform => gen_uniform_random(len, seed).unwrap(),
        Class::Monotone => gen_monotone(len).unwrap(),
        Class::Constant => TimeSeries::from_values(vec![rng.gen_range(-5.0..5.0); len]).unwrap(),
        Class::Fbm(h) => gen_fbm(&FbmConfig::new(h, len, seed).unwrap()).unwrap(),
        Class::Collinear => TimeSeries::from_values(adversarial_collinear(len, &mut rng)).unwrap(),
    }
}

pub fn edges(g: &psvg::VisibilityGraph) -> Vec<(usize, usize)> {
    g.edges().collect()
}
