//! Statistical checks of the samplers against independently computed laws.

use etaue::bessel::{BesselModel, BesselWeightParams};
use etaue::gaussian::{gap_probability_real_twin, marginal_p1, marginal_p2};
use etaue::numerics::{ks_distance, TabulatedCdf};
use etaue::sampling::{
    draw_samples, sample_entries_gaussian, BesselEigenSampler, Envelope, MatrixSampler, RejectionSampler, RngStream,
};
use etaue::specfun::{bessel_k0, erfc};
use etaue::{EnsembleParams, Error};

/// KS critical value at the 0.1% level; the file runs about a dozen KS tests.
fn critical(n: usize) -> f64 {
    1.95 / (n as f64).sqrt()
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / 2f64.sqrt()).unwrap()
}

#[test]
fn p1_under_gaussian_envelope() {
    let density = |x: f64| marginal_p1(x, 0.5);
    let env = Envelope::Gaussian { mu: 0.0, sigma: 1.2, scale: 2.0 };
    let mut s = RejectionSampler::new(density, env).unwrap();
    let mut rng = RngStream::new(3, 0);
    let n = 10_000;
    let xs: Vec<f64> = (0..n).map(|_| s.sample(&mut rng).unwrap()).collect();
    let cdf = TabulatedCdf::new(|x| marginal_p1(x, 0.5), -12.0, 12.0, 480, &[]).unwrap();
    let d = ks_distance(&xs, |x| cdf.cdf(x)).unwrap().ks_distance;
    assert!(d < critical(n), "{d}");
    // the target is normalized, so the acceptance rate estimates 1/scale
    assert!((s.acceptance_rate() - 0.5).abs() < 0.02);
}

#[test]
fn entries_independent_normals_at_eta_zero() {
    let mut rng = RngStream::new(5, 0);
    let n = 10_000;
    let e: Vec<_> = (0..n).map(|_| sample_entries_gaussian(0.0, &mut rng).unwrap()).collect();
    let comps: [fn(&etaue::HermitianEntries) -> f64; 4] = [|e| e.x, |e| e.y, |e| e.t, |e| e.s];
    for comp in comps {
        let v: Vec<f64> = e.iter().map(comp).collect();
        let d = ks_distance(&v, normal_cdf).unwrap().ks_distance;
        let (mean, var) = (v.iter().sum::<f64>() / n as f64, v.iter().map(|x| x * x).sum::<f64>() / n as f64);
        assert!(d < critical(n), "{d} mean {mean} second moment {var}");
    }
}

#[test]
fn eigenvalues_iid_normal_at_eta_one() {
    let s = draw_samples(&EnsembleParams::gaussian(1.0), 10_000, 6, 1).unwrap();
    let l: Vec<f64> = s.iter().flat_map(|m| [m.pair.lambda1, m.pair.lambda2]).collect();
    let d = ks_distance(&l, normal_cdf).unwrap().ks_distance;
    assert!(d < critical(l.len()), "{d}");
}

#[test]
fn entry_chain_xy_histogram() {
    let eta = 0.3;
    let n = 200_000;
    let s = draw_samples(&EnsembleParams::gaussian(eta), n, 11, 1).unwrap();
    let (lo, w, k) = (-2.4, 0.6, 8);
    let mut counts = vec![0u64; k * k];
    for m in &s {
        let (i, j) = (((m.entries.x - lo) / w).floor(), ((m.entries.y - lo) / w).floor());
        if i >= 0.0 && j >= 0.0 && (i as usize) < k && (j as usize) < k {
            counts[i as usize * k + j as usize] += 1;
        }
    }
    // bin masses by a 24×24 midpoint rule; p₂ has only a kink on the diagonal here
    let m = 24;
    let h = w / m as f64;
    let mut worst: f64 = 0.0;
    for bi in 0..k {
        for bj in 0..k {
            let mut mass = 0.0;
            for a in 0..m {
                for b in 0..m {
                    let x = lo + bi as f64 * w + (a as f64 + 0.5) * h;
                    let y = lo + bj as f64 * w + (b as f64 + 0.5) * h;
                    mass += marginal_p2(x, y, eta).unwrap() * h * h;
                }
            }
            let expect = n as f64 * mass;
            let sigma = (n as f64 * mass * (1.0 - mass)).sqrt();
            worst = worst.max((counts[bi * k + bj] as f64 - expect).abs() / sigma);
        }
    }
    assert!(worst < 3.0, "worst bin deviation {worst} sigma");
}

#[test]
fn unitary_samples_follow_real_twin_gap_law() {
    let n = 75_000;
    let s = draw_samples(&EnsembleParams::gaussian(0.75), n, 13, 1).unwrap();
    let sp: Vec<f64> = s.iter().map(|m| m.pair.spacing).collect();
    let law = TabulatedCdf::new(
        |s: f64| if s == 0.0 { Ok::<f64, Error>(0.0) } else { gap_probability_real_twin(s, 0.5) },
        0.0,
        14.0,
        700,
        &[],
    )
    .unwrap();
    let d = ks_distance(&sp, |s| law.cdf(s)).unwrap().ks_distance;
    assert!(d < critical(n), "{d}");
}

#[test]
fn bessel_marginal_at_eta_one_is_k0() {
    // λ's are i.i.d. with density K₀(|λ|)/π
    let p = BesselWeightParams::new(1.0, 1.0).unwrap();
    let sm = BesselEigenSampler::new(p).unwrap();
    let mut rng = RngStream::new(21, 0);
    let l: Vec<f64> = (0..5000)
        .flat_map(|_| {
            let q = sm.sample(&mut rng).unwrap();
            [q.lambda1, q.lambda2]
        })
        .collect();
    let half = TabulatedCdf::new(|x| Ok::<f64, Error>(bessel_k0(x)?), 0.0, 40.0, 4000, &[0.0]).unwrap();
    let cdf = |x: f64| if x >= 0.0 { 0.5 + 0.5 * half.cdf(x) } else { 0.5 - 0.5 * half.cdf(-x) };
    let d = ks_distance(&l, cdf).unwrap().ks_distance;
    assert!(d < critical(l.len()), "{d}");
}

#[test]
fn bessel_spacings_follow_gap_law() {
    let p = EnsembleParams::bessel(0.75, 1.0);
    let s = draw_samples(&p, 20_000, 17, 1).unwrap();
    let sp: Vec<f64> = s.iter().map(|m| m.pair.spacing).collect();
    let m = BesselModel::new(BesselWeightParams::new(0.75, 1.0).unwrap());
    let gap = m.gap_cdf(80).unwrap();
    let d = ks_distance(&sp, |s| gap.cdf(s)).unwrap().ks_distance;
    assert!(d < critical(sp.len()), "{d}");
}

#[test]
fn real_twin_sampler_at_goe_point() {
    // η̂ = 0 is the GOE with ρ = ρ_{1/2}; compare the spacing law directly
    let s = MatrixSampler::new(&EnsembleParams::gaussian_real(0.0)).unwrap();
    let mut rng = RngStream::new(2, 0);
    let sp: Vec<f64> = (0..10_000).map(|_| s.sample(&mut rng).unwrap().pair.spacing).collect();
    // GOE 2×2 with this weight: P(s) = (s/2) e^{-s²/4}
    let d = ks_distance(&sp, |s| 1.0 - (-s * s / 4.0).exp()).unwrap().ks_distance;
    assert!(d < critical(sp.len()), "{d}");
    for _ in 0..100 {
        let m = s.sample(&mut rng).unwrap();
        assert_eq!(m.entries.s, 0.0);
    }
}
