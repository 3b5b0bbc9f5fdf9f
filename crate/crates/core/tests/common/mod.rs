#![allow(dead_code)]

use eep::{FeatureSequence, Matrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn gaussian_sequence(rng: &mut ChaCha8Rng, d: usize, len: usize) -> FeatureSequence {
    let data: Vec<f64> = (0..d * len).map(|_| rng.sample(StandardNormal)).collect();
    FeatureSequence::new(Matrix::new(d, len, data).unwrap()).unwrap()
}

/// Gram-Schmidt on a random Gaussian `len × k` matrix.
pub fn random_orthonormal(rng: &mut ChaCha8Rng, len: usize, k: usize) -> Matrix {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(k);
    while cols.len() < k {
        let mut v: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
        for _ in 0..2 {
            for c in &cols {
                let p: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(c).for_each(|(a, b)| *a -= p * b);
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    Matrix::from_columns(&cols).unwrap()
}
