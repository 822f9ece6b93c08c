//! Slow, direct reference computations for tests.
//!
//! Nothing here shares code with `fractalts-core`: loops are written out
//! literally, polynomial fits use raw abscissae `1..=τ` and a generic SVD
//! least-squares solve.

use nalgebra::{DMatrix, DVector};

/// Profile by explicit running sums of `x[i] - mean`.
pub fn cumsum_profile(x: &[f64]) -> Vec<f64> {
    let mut mean = 0.0;
    for v in x {
        mean += v;
    }
    mean /= x.len() as f64;
    let mut out = Vec::with_capacity(x.len());
    for t in 0..x.len() {
        let mut s = 0.0;
        for v in &x[..=t] {
            s += v - mean;
        }
        out.push(s);
    }
    out
}

/// Start indices of forward then backward segments.
pub fn segment_starts(len: usize, tau: usize) -> Vec<usize> {
    let mut starts = Vec::new();
    let mut s = 0;
    while s + tau <= len {
        starts.push(s);
        s += tau;
    }
    let mut end = len;
    while end >= tau {
        starts.push(end - tau);
        end -= tau;
        if starts.len() == 2 * (len / tau) {
            break;
        }
    }
    starts
}

/// Mean squared residual after an order-`order` polynomial fit over
/// abscissae 1..=len, solved by SVD.
pub fn poly_residual_variance(y: &[f64], order: usize) -> f64 {
    let n = y.len();
    let vander = DMatrix::from_fn(n, order + 1, |i, k| ((i + 1) as f64).powi(k as i32));
    let rhs = DVector::from_column_slice(y);
    let coef = vander
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .expect("svd solve");
    let fitted = &vander * coef;
    let mut sse = 0.0;
    for i in 0..n {
        let r = y[i] - fitted[i];
        sse += r * r;
    }
    sse / n as f64
}

/// F_q(τ) straight from the definition.
pub fn naive_fq(profile: &[f64], tau: usize, order: usize, q: f64) -> f64 {
    let starts = segment_starts(profile.len(), tau);
    let f2: Vec<f64> = starts
        .iter()
        .map(|&s| poly_residual_variance(&profile[s..s + tau], order))
        .collect();
    let n = f2.len() as f64;
    if q == 0.0 {
        let mut s = 0.0;
        for v in &f2 {
            s += v.ln();
        }
        (s / (2.0 * n)).exp()
    } else {
        let mut s = 0.0;
        for v in &f2 {
            s += v.powf(q / 2.0);
        }
        (s / n).powf(1.0 / q)
    }
}

/// Classical DFA-1 fluctuation: closed-form line fit per segment over
/// abscissae 0..τ, root of the mean residual variance.
pub fn classical_dfa(profile: &[f64], tau: usize) -> f64 {
    let starts = segment_starts(profile.len(), tau);
    let t = tau as f64;
    let sx = (0..tau).map(|i| i as f64).sum::<f64>();
    let sxx = (0..tau).map(|i| (i * i) as f64).sum::<f64>();
    let mut total = 0.0;
    for &s in &starts {
        let seg = &profile[s..s + tau];
        let sy: f64 = seg.iter().sum();
        let sxy: f64 = seg.iter().enumerate().map(|(i, y)| i as f64 * y).sum();
        let slope = (t * sxy - sx * sy) / (t * sxx - sx * sx);
        let icpt = (sy - slope * sx) / t;
        let mut sse = 0.0;
        for (i, y) in seg.iter().enumerate() {
            let r = y - (icpt + slope * i as f64);
            sse += r * r;
        }
        total += sse / t;
    }
    (total / starts.len() as f64).sqrt()
}

/// Pearson coefficient by the textbook two-pass formula.
pub fn naive_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut dx = 0.0;
    let mut dy = 0.0;
    for i in 0..x.len() {
        num += (x[i] - mx) * (y[i] - my);
        dx += (x[i] - mx).powi(2);
        dy += (y[i] - my).powi(2);
    }
    num / (dx.sqrt() * dy.sqrt())
}

/// Correlation of pairs (a[t], b[t + lag]) gathered by a double loop.
pub fn naive_ccf(a: &[f64], b: &[f64], lag: i64) -> f64 {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for t in 0..a.len() as i64 {
        for u in 0..b.len() as i64 {
            if u - t == lag {
                xs.push(a[t as usize]);
                ys.push(b[u as usize]);
            }
        }
    }
    naive_pearson(&xs, &ys)
}

/// Slope of the least-squares line through (x, y).
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..x.len() {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx).powi(2);
    }
    num / den
}

/// Small deterministic pseudo-random sequence (64-bit LCG, top bits mapped
/// to [-1, 1)), independent of the library's generators.
pub fn lcg_series(len: usize, seed: u64) -> Vec<f64> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (0..len)
        .map(|_| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
        .collect()
}
