//! FFT-based derivatives of periodic samples on equidistant nodes.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type FftPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn fft_pair(n: usize) -> FftPair {
    static CACHE: OnceLock<Mutex<HashMap<usize, FftPair>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
        })
        .clone()
}

/// `order`-th derivative of a periodic complex sample vector. The Nyquist
/// mode is zeroed for odd orders (it carries no sign information).
pub(crate) fn derivative(values: &[Complex64], order: u32, period: f64) -> Vec<Complex64> {
    let n = values.len();
    assert!(n >= 2 && n % 2 == 0, "even node count required");
    let (fwd, inv) = fft_pair(n);
    let mut buf = values.to_vec();
    fwd.process(&mut buf);
    let base = 2.0 * std::f64::consts::PI / period;
    for (j, c) in buf.iter_mut().enumerate() {
        let m = if j <= n / 2 { j as i64 } else { j as i64 - n as i64 };
        if j == n / 2 && order % 2 == 1 {
            *c = Complex64::new(0.0, 0.0);
            continue;
        }
        let factor = Complex64::new(0.0, m as f64 * base).powu(order);
        *c *= factor;
    }
    inv.process(&mut buf);
    let scale = 1.0 / n as f64;
    for c in buf.iter_mut() {
        *c *= scale;
    }
    buf
}

pub(crate) fn derivative_real(values: &[f64], order: u32, period: f64) -> Vec<f64> {
    let complex: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    derivative(&complex, order, period)
        .into_iter()
        .map(|c| c.re)
        .collect()
}
