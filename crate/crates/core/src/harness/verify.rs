//! Monte-Carlo checks with Rayleigh small-scale fading: DUE outage under an
//! allocation, and the ergodic CUE rate under the AQNM receiver model.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::power::PowerAllocation;
use crate::quantization::quant_coeff;
use crate::scenario::ScenarioDrop;

/// Standard error of an empirical frequency with true value `p` over `n` samples.
pub fn binomial_stderr(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Empirical outage `Pr{SINR_k <= gamma0}` of every DUE in `members` when
/// sharing spectrum with CUE `cue` under `allocation`.
///
/// Every link gain is its slow-fading coefficient times an independent
/// unit-mean exponential (Rayleigh power) draw per sample.
#[allow(clippy::too_many_arguments)]
pub fn empirical_outage(
    cue: usize,
    members: &[usize],
    allocation: &PowerAllocation,
    drop: &ScenarioDrop,
    sinr_threshold: f64,
    noise_power: f64,
    fading_trials: usize,
    seed: u64,
) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fade = || -> f64 { Exp1.sample(&mut rng) };
    let mut outages = vec![0usize; members.len()];
    for _ in 0..fading_trials {
        for (i, &k) in members.iter().enumerate() {
            let signal = allocation.p_d[i] * drop.due_gain[k] * fade();
            let mut interference =
                noise_power + allocation.p_c * drop.cue_due_gain[cue][k] * fade();
            for (j, &other) in members.iter().enumerate() {
                if j != i {
                    interference += allocation.p_d[j] * drop.due_cross_gain[other][k] * fade();
                }
            }
            if signal <= sinr_threshold * interference {
                outages[i] += 1;
            }
        }
    }
    outages
        .into_iter()
        .map(|o| o as f64 / fading_trials as f64)
        .collect()
}

/// Interfering DUE seen at the BS: transmit power and slow-fading gain to the BS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsInterferer {
    pub power: f64,
    pub bs_gain: f64,
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Complex<f64> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(re, im) * (scale / std::f64::consts::SQRT_2)
}

/// `E[log2(1 + SIQNR)]` estimated over `samples` channel draws.
///
/// The received vector `y = sqrt(P_c) g_m x_m + sum sqrt(P_k) g_k x_k + n`
/// passes through per-antenna gains `a_i` plus uncorrelated quantization
/// noise of variance `a_i (1 - a_i) E|y_i|^2` (conditioned on the channel),
/// then MRC with `g_m`.
pub fn monte_carlo_rate(
    p_c: f64,
    cue_bs_gain: f64,
    interferers: &[BsInterferer],
    bits_per_antenna: &[u32],
    noise_power: f64,
    samples: usize,
    seed: u64,
) -> f64 {
    let coeffs: Vec<f64> = bits_per_antenna
        .iter()
        .map(|&b| quant_coeff(b).expect("valid resolution"))
        .collect();
    let n = coeffs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g_m = vec![Complex::new(0.0, 0.0); n];
    let mut g_k = vec![vec![Complex::new(0.0, 0.0); n]; interferers.len()];
    let mut total = 0.0;
    for _ in 0..samples {
        for g in g_m.iter_mut() {
            *g = complex_gaussian(&mut rng, cue_bs_gain.sqrt());
        }
        for (row, d) in g_k.iter_mut().zip(interferers) {
            for g in row.iter_mut() {
                *g = complex_gaussian(&mut rng, d.bs_gain.sqrt());
            }
        }
        let mut combined_gain = 0.0;
        let mut thermal = 0.0;
        let mut quantization = 0.0;
        for i in 0..n {
            let a = coeffs[i];
            let own = g_m[i].norm_sqr();
            combined_gain += a * own;
            thermal += a * a * own;
            let rx_power = p_c * own
                + interferers
                    .iter()
                    .zip(&g_k)
                    .map(|(d, g)| d.power * g[i].norm_sqr())
                    .sum::<f64>()
                + noise_power;
            quantization += a * (1.0 - a) * own * rx_power;
        }
        let leakage: f64 = interferers
            .iter()
            .zip(&g_k)
            .map(|(d, g)| {
                let inner: Complex<f64> = (0..n).map(|i| g_m[i].conj() * coeffs[i] * g[i]).sum();
                d.power * inner.norm_sqr()
            })
            .sum();
        let signal = p_c * combined_gain * combined_gain;
        let siqnr = signal / (leakage + noise_power * thermal + quantization);
        total += siqnr.ln_1p() / std::f64::consts::LN_2;
    }
    total / samples as f64
}
