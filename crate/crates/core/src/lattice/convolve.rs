use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Largest negative entry a transform convolution may produce before it is
/// treated as a bug rather than round-off.
pub const MAX_CLAMP: f64 = 1e-9;

/// Chooses between direct and transform-based convolution.
#[derive(Debug, Clone, Copy)]
pub struct ConvolutionConfig {
    /// Output sizes below this use the quadratic direct method.
    pub direct_threshold: usize,
}

impl Default for ConvolutionConfig {
    fn default() -> Self {
        Self { direct_threshold: 256 }
    }
}

impl ConvolutionConfig {
    /// Convolves two weight vectors. Transform output is clamped at zero.
    pub fn convolve(&self, a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
        if a.is_empty() || b.is_empty() {
            return Ok(Vec::new());
        }
        if a.len() + b.len() - 1 < self.direct_threshold {
            Ok(convolve_direct(a, b))
        } else {
            convolve_transform(a, b)
        }
    }
}

/// Quadratic-time convolution.
pub fn convolve_direct(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o += x * y;
        }
    }
    out
}

/// FFT convolution. Negative round-off is clamped to zero; a clamp larger
/// than [`MAX_CLAMP`] is an error.
pub fn convolve_transform(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);

    let mut fa: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fa.resize(size, Complex64::new(0.0, 0.0));
    let mut fb: Vec<Complex64> = b.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fb.resize(size, Complex64::new(0.0, 0.0));
    forward.process(&mut fa);
    forward.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inverse.process(&mut fa);

    let scale = 1.0 / size as f64;
    let mut out = Vec::with_capacity(out_len);
    for z in &fa[..out_len] {
        let v = z.re * scale;
        if v < 0.0 {
            if -v > MAX_CLAMP {
                return Err(Error::RoundOff(-v));
            }
            out.push(0.0);
        } else {
            out.push(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_agrees_with_direct() {
        let a: Vec<f64> = (0..300).map(|i| ((i * 7919) % 101) as f64 / 101.0).collect();
        let b: Vec<f64> = (0..170).map(|i| ((i * 104_729) % 53) as f64 / 53.0).collect();
        let d = convolve_direct(&a, &b);
        let t = convolve_transform(&a, &b).unwrap();
        let scale: f64 = d.iter().cloned().fold(0.0, f64::max);
        for (x, y) in d.iter().zip(&t) {
            assert!((x - y).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn threshold_selects_method() {
        let cfg = ConvolutionConfig { direct_threshold: 4 };
        let v = cfg.convolve(&[0.5, 0.5], &[0.5, 0.5]).unwrap();
        assert_eq!(v.len(), 3);
        let v = cfg.convolve(&[0.5, 0.5], &[0.25, 0.5, 0.25]).unwrap();
        assert!((v[1] - 0.375).abs() < 1e-15);
    }
}
